//! Properties of the cross-language relation on the first-order
//! fragment: a coarse value and its fine-grained image are related at
//! every program counter that dominates the image's labels, and the
//! relation weakens upward in the program counter. The closure cases
//! need the real translation and are exercised downstream.

mod common;

use common::*;
use ifc_cg::{CGType, CGValue};
use ifc_fg::{FGRaw, FGType, FGValue};
use ifc_lattice::Label;
use ifc_security::{CrossHooks, CrossRel};
use proptest::prelude::*;
use proptest::strategy::Union;

/// First-order coarse values: no closures, no thunks.
fn arb_cg_fo(heap_size: usize) -> BoxedStrategy<CGValue> {
    let mut leaves: Vec<BoxedStrategy<CGValue>> = vec![
        Just(CGValue::Unit).boxed(),
        arb_label().prop_map(CGValue::Lab).boxed(),
        (arb_label(), 0..3usize)
            .prop_map(|(l, n)| CGValue::RefI(l, n))
            .boxed(),
    ];
    if heap_size > 0 {
        leaves.push((0..heap_size).prop_map(CGValue::RefS).boxed());
    }
    Union::new(leaves)
        .prop_recursive(3, 16, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|v| CGValue::Inl(CGType::bool_ty(), Box::new(v))),
                inner.clone().prop_map(|v| CGValue::Inr(CGType::bool_ty(), Box::new(v))),
                (inner.clone(), inner.clone())
                    .prop_map(|(x, y)| CGValue::Pair(Box::new(x), Box::new(y))),
                (arb_label(), inner).prop_map(|(l, v)| CGValue::Labeled(l, Box::new(v))),
            ]
        })
        .boxed()
}

/// Oracle image of a first-order coarse type.
fn tr_ty(cg: &CGType) -> Option<FGType> {
    Some(match cg {
        CGType::Unit => FGType::Unit,
        CGType::LabelT => FGType::LabelT,
        CGType::Sum(a, b) => FGType::Sum(Box::new(tr_ty(a)?), Box::new(tr_ty(b)?)),
        CGType::Prod(a, b) => FGType::Prod(Box::new(tr_ty(a)?), Box::new(tr_ty(b)?)),
        CGType::Labeled(t) => FGType::Prod(Box::new(FGType::LabelT), Box::new(tr_ty(t)?)),
        _ => return None,
    })
}

/// Oracle image of a first-order coarse value at program counter `pc`:
/// every layer is stamped with `pc`, and a labeled value becomes a pair
/// of its label and its payload translated at that label.
fn tr_value(v: &CGValue, pc: Label) -> Option<FGValue> {
    let raw = match v {
        CGValue::Unit => FGRaw::Unit,
        CGValue::Lab(l) => FGRaw::Lab(*l),
        CGValue::RefI(l, n) => FGRaw::RefI(*l, *n),
        CGValue::RefS(n) => FGRaw::RefS(*n),
        CGValue::Inl(t, w) => FGRaw::Inl(tr_ty(t)?, Box::new(tr_value(w, pc)?)),
        CGValue::Inr(t, w) => FGRaw::Inr(tr_ty(t)?, Box::new(tr_value(w, pc)?)),
        CGValue::Pair(x, y) => {
            FGRaw::Pair(Box::new(tr_value(x, pc)?), Box::new(tr_value(y, pc)?))
        }
        CGValue::Labeled(l, w) => FGRaw::Pair(
            Box::new(FGValue::new(FGRaw::Lab(*l), *l)),
            Box::new(tr_value(w, *l)?),
        ),
        CGValue::Closure { .. } | CGValue::TClosure { .. } => return None,
    };
    Some(FGValue::new(raw, pc))
}

fn rel(l: &'static ifc_lattice::Lattice) -> CrossRel<'static> {
    CrossRel::new(
        l,
        CrossHooks {
            ty: &|fg, cg| tr_ty(cg).as_ref() == Some(fg),
            fun: &|_, _, _, _, _| false,
            thunk: &|_, _, _, _| false,
        },
    )
}

proptest! {
    #[test]
    fn translated_first_order_values_are_related_at_their_pc(
        v in arb_cg_fo(3),
        pc in arb_label(),
    ) {
        let fg = tr_value(&v, pc).unwrap();
        prop_assert!(rel(lat()).ceq_value(pc, &fg, &v).unwrap());
    }

    #[test]
    fn cross_equivalence_weakens_to_higher_pcs(v in arb_cg_fo(3)) {
        // In the two-point lattice the only strict raise is low to high.
        let fg = tr_value(&v, low()).unwrap();
        let r = rel(lat());
        prop_assert!(r.ceq_value(low(), &fg, &v).unwrap());
        prop_assert!(r.ceq_value(high(), &fg, &v).unwrap());
    }

    #[test]
    fn translated_state_is_related(
        (s, h) in (0usize..=3).prop_flat_map(|n| {
            let mem = prop::collection::vec(arb_cg_fo(n), 0..3);
            let store = (mem.clone(), mem).prop_map(|(ml, mh)| {
                ifc_cg::CGStore::from([(low(), ml), (high(), mh)])
            });
            let heap = prop::collection::vec((arb_label(), arb_cg_fo(n)), n..=n);
            (store, heap)
        })
    ) {
        // Translate each memory at its label and each heap cell at the
        // cell's label.
        let mut fg_store = ifc_fg::FGStore::new();
        for (&l, m) in &s {
            let fm = m.iter().map(|v| tr_value(v, l).unwrap().raw).collect();
            fg_store.insert(l, fm);
        }
        let fg_heap: Vec<_> = h.iter().map(|(l, v)| tr_value(v, *l).unwrap()).collect();
        let r = rel(lat());
        prop_assert!(r.state_rel(&fg_store, &fg_heap, &s, &h).unwrap());
        prop_assert!(r.config_rel_initial(&fg_store, &fg_heap, &s, &h).unwrap());
    }

    #[test]
    fn final_configs_relate_through_the_translation(
        v in arb_cg_fo(2),
        pc in arb_label(),
    ) {
        let r = rel(lat());
        let fg = tr_value(&v, pc).unwrap();
        let fg_store = ifc_fg::FGStore::new();
        let cg_store = ifc_cg::CGStore::new();
        prop_assert!(r
            .config_rel_final(&fg_store, &Vec::new(), &fg, &cg_store, &Vec::new(), pc, &v)
            .unwrap());
    }
}

#[test]
fn a_secret_payload_under_a_public_pc_still_relates_at_its_own_label() {
    let r = rel(lat());
    let h = high();
    let l = low();
    // Labeled high unit, seen from a low computation.
    let cg = CGValue::Labeled(h, Box::new(CGValue::Unit));
    let fg = tr_value(&cg, l).unwrap();
    assert!(r.ceq_value(l, &fg, &cg).unwrap());
    // The payload's own label is what counts: a payload stamped low
    // under a high wrapper is fine too.
    let fg_low_payload = FGValue::new(
        FGRaw::Pair(
            Box::new(FGValue::new(FGRaw::Lab(h), h)),
            Box::new(FGValue::new(FGRaw::Unit, l)),
        ),
        l,
    );
    assert!(r.ceq_value(l, &fg_low_payload, &cg).unwrap());
}
