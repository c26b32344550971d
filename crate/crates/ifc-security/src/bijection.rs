//! Finite partial bijections between heap address spaces.
//!
//! Flow-sensitive references are compared up to a renaming of heap
//! addresses: two runs may allocate public cells at different positions
//! when secret control flow allocates in between. A [`Bijection`] records
//! which address of the first heap corresponds to which address of the
//! second. Both the map and its inverse must be functional.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BijectionError {
    /// Two pairs share a left or right component.
    #[error("not injective: ({left}, {right}) conflicts with an existing pair")]
    NotInjective { left: usize, right: usize },
}

/// A finite partial bijection on heap addresses, kept as a forward map
/// together with its inverse so both directions are O(log n).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Bijection {
    fwd: BTreeMap<usize, usize>,
    inv: BTreeMap<usize, usize>,
}

impl Bijection {
    /// The empty bijection.
    pub fn empty() -> Bijection {
        Bijection::default()
    }

    /// Builds a bijection from pairs, rejecting duplicates in either
    /// component.
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Bijection, BijectionError> {
        let mut b = Bijection::empty();
        for (l, r) in pairs {
            b.insert(l, r)?;
        }
        Ok(b)
    }

    /// Adds one pair. Re-adding an existing pair is a no-op; a pair that
    /// clashes with the forward or inverse map is rejected.
    pub fn insert(&mut self, left: usize, right: usize) -> Result<(), BijectionError> {
        match (self.fwd.get(&left), self.inv.get(&right)) {
            (Some(&r), _) if r != right => Err(BijectionError::NotInjective { left, right }),
            (_, Some(&l)) if l != left => Err(BijectionError::NotInjective { left, right }),
            (Some(_), Some(_)) => Ok(()),
            _ => {
                self.fwd.insert(left, right);
                self.inv.insert(right, left);
                Ok(())
            }
        }
    }

    pub fn get(&self, left: usize) -> Option<usize> {
        self.fwd.get(&left).copied()
    }

    pub fn get_inv(&self, right: usize) -> Option<usize> {
        self.inv.get(&right).copied()
    }

    pub fn contains(&self, left: usize, right: usize) -> bool {
        self.fwd.get(&left) == Some(&right)
    }

    pub fn len(&self) -> usize {
        self.fwd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fwd.is_empty()
    }

    /// Pairs in ascending order of the left component.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.fwd.iter().map(|(&l, &r)| (l, r))
    }

    /// True when every left component is below `n1` and every right
    /// component is below `n2`.
    pub fn within_bounds(&self, n1: usize, n2: usize) -> bool {
        self.fwd.iter().all(|(&l, &r)| l < n1 && r < n2)
    }
}

/// The identity bijection on addresses `0..n`.
pub fn bij_identity(n: usize) -> Bijection {
    Bijection::new((0..n).map(|i| (i, i))).expect("identity pairs are disjoint")
}

/// Swaps the two components of every pair.
pub fn bij_inverse(b: &Bijection) -> Bijection {
    Bijection {
        fwd: b.inv.clone(),
        inv: b.fwd.clone(),
    }
}

/// Relational composition: `(n1, n3)` is in the result iff `(n1, n2)` is
/// in `b1` and `(n2, n3)` is in `b2` for some `n2`.
pub fn bij_compose(b2: &Bijection, b1: &Bijection) -> Bijection {
    let pairs = b1
        .iter()
        .filter_map(|(l, m)| b2.get(m).map(|r| (l, r)));
    Bijection::new(pairs).expect("composing bijections preserves injectivity")
}

/// True when `larger` contains every pair of `smaller`.
pub fn bij_extends(larger: &Bijection, smaller: &Bijection) -> bool {
    smaller.iter().all(|(l, r)| larger.contains(l, r))
}
