//! Both translations preserve typing: the image of a well-typed program is
//! well typed at the image of its type, and the type-directed direction
//! rejects ill-typed sources with a shape error instead of mistranslating.

mod common;

use common::{cg_corpus, cg_env_types, fg_corpus, fg_env_types, lattices};
use ifc_cg::syntax::{build as cg, CGType};
use ifc_cg::typecheck::typecheck_cg;
use ifc_fg::typecheck::typecheck_fg;
use ifc_translate::{
    cg2fg_env_types, cg2fg_expr, cg2fg_type, fg2cg_env_types, fg2cg_expr, fg2cg_type,
    TranslateError,
};

#[test]
fn fine_grained_corpus_images_typecheck() {
    for lat in lattices() {
        let ctx = fg_env_types();
        let ictx = fg2cg_env_types(&ctx);
        for (name, e) in fg_corpus(&lat) {
            let t = typecheck_fg(&ctx, &e)
                .unwrap_or_else(|err| panic!("{name}: source ill-typed: {err}"));
            let it = typecheck_cg(&ictx, &fg2cg_expr(&e))
                .unwrap_or_else(|err| panic!("{name}: image ill-typed: {err}"));
            assert_eq!(it, CGType::Lio(Box::new(fg2cg_type(&t))), "{name}: image type mismatch");
        }
    }
}

#[test]
fn coarse_grained_corpus_images_typecheck() {
    for lat in lattices() {
        let ctx = cg_env_types();
        let ictx = cg2fg_env_types(&ctx);
        for (name, e) in cg_corpus(&lat) {
            let t = typecheck_cg(&ctx, &e)
                .unwrap_or_else(|err| panic!("{name}: source ill-typed: {err}"));
            let image = cg2fg_expr(&ctx, &e)
                .unwrap_or_else(|err| panic!("{name}: translation failed: {err}"));
            let it = typecheck_fg(&ictx, &image)
                .unwrap_or_else(|err| panic!("{name}: image ill-typed: {err}"));
            assert_eq!(it, cg2fg_type(&t), "{name}: image type mismatch");
        }
    }
}

#[test]
fn binding_a_non_computation_is_a_shape_error() {
    let src = cg::thunk(cg::bind(cg::unit(), cg::thunk(cg::ret(cg::var(0)))));
    match cg2fg_expr(&vec![], &src) {
        Err(TranslateError::Shape { found: CGType::Unit, .. }) => {}
        other => panic!("expected a shape error on bind, got {other:?}"),
    }
}

#[test]
fn unlabeling_a_bare_value_is_a_shape_error() {
    let src = cg::thunk(cg::unlabel(cg::unit()));
    match cg2fg_expr(&vec![], &src) {
        Err(TranslateError::Shape { found: CGType::Unit, .. }) => {}
        other => panic!("expected a shape error on unlabel, got {other:?}"),
    }
}

#[test]
fn an_ill_typed_source_subterm_is_a_type_error() {
    let src = cg::thunk(cg::bind(
        cg::thunk(cg::read(cg::unit())),
        cg::thunk(cg::ret(cg::var(0))),
    ));
    match cg2fg_expr(&vec![], &src) {
        Err(TranslateError::SourceType(_)) => {}
        other => panic!("expected a source type error, got {other:?}"),
    }
}
