//! Finite join-semilattices of security labels.
//!
//! A [`Lattice`] is loaded once (builtin or JSON description), validated, and
//! then shared immutably by every monitor rule and equivalence check. Labels
//! are interned indices into their lattice, so `leq` and `join` are table
//! lookups.

use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

use serde::Deserialize;
use thiserror::Error;

static NEXT_LATTICE_ID: AtomicU32 = AtomicU32::new(0);

/// A point of a specific [`Lattice`]. Labels from different lattices are
/// never comparable.
#[derive(PartialEq, Eq, PartialOrd, Ord, Clone, Copy, Hash)]
pub struct Label {
    lat: u32,
    ix: u16,
}

impl Label {
    /// Index of this point within its lattice.
    pub fn index(self) -> usize {
        self.ix as usize
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Label({}@{})", self.ix, self.lat)
    }
}

/// Errors from loading a lattice description or comparing labels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    /// The declared order is not antisymmetric (it has a nontrivial cycle).
    #[error("not a partial order: {0}")]
    NotAPartialOrder(String),
    /// Some pair of points has no least upper bound.
    #[error("no join exists for {0} and {1}")]
    NoJoinExists(String, String),
    /// A point name appears twice in the description.
    #[error("duplicate point: {0}")]
    DuplicatePoint(String),
    /// The labels being compared belong to different lattices.
    #[error("cross-lattice comparison")]
    CrossLatticeComparison,
    /// The description is malformed (unknown builtin, bad JSON, unknown
    /// point name in the order relation, or no points at all).
    #[error("invalid lattice description: {0}")]
    InvalidSpec(String),
}

#[derive(Deserialize)]
struct LatticeJson {
    points: Vec<String>,
    #[serde(default)]
    order: Vec<(String, String)>,
}

/// A validated finite join-semilattice.
///
/// Only lub-closure is required: every pair of points must have a least
/// upper bound, but the lattice need not have global bottom or top elements.
#[derive(Clone, Debug)]
pub struct Lattice {
    id: u32,
    names: Vec<String>,
    // n*n row-major tables indexed by point index.
    leq_table: Vec<bool>,
    join_table: Vec<u16>,
}

impl Lattice {
    /// Builds a lattice from named points and a list of `a ⊑ b` pairs.
    /// The reflexive-transitive closure of the pairs is taken automatically;
    /// antisymmetry and lub-closure are checked.
    pub fn from_parts<S: AsRef<str>>(
        points: &[S],
        order: &[(S, S)],
    ) -> Result<Lattice, LatticeError> {
        let names: Vec<String> = points.iter().map(|p| p.as_ref().to_string()).collect();
        if names.is_empty() {
            return Err(LatticeError::InvalidSpec("a lattice needs at least one point".into()));
        }
        if names.len() > u16::MAX as usize {
            return Err(LatticeError::InvalidSpec(format!(
                "too many points ({}), at most {} supported",
                names.len(),
                u16::MAX
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(LatticeError::DuplicatePoint(name.clone()));
            }
        }
        let n = names.len();
        let index_of = |name: &str| -> Result<usize, LatticeError> {
            names
                .iter()
                .position(|p| p == name)
                .ok_or_else(|| LatticeError::InvalidSpec(format!("unknown point in order: {name}")))
        };

        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (a, b) in order {
            let (i, j) = (index_of(a.as_ref())?, index_of(b.as_ref())?);
            leq[i * n + j] = true;
        }
        // Transitive closure (Floyd-Warshall over booleans).
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        // Antisymmetry.
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(LatticeError::NotAPartialOrder(format!(
                        "{} and {} order each other",
                        names[i], names[j]
                    )));
                }
            }
        }
        // Join table: the unique least element of each pair's upper bounds.
        let mut join = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                let uppers: Vec<usize> =
                    (0..n).filter(|&c| leq[a * n + c] && leq[b * n + c]).collect();
                let least = uppers
                    .iter()
                    .copied()
                    .find(|&u| uppers.iter().all(|&c| leq[u * n + c]));
                match least {
                    Some(u) => join[a * n + b] = u as u16,
                    None => {
                        return Err(LatticeError::NoJoinExists(
                            names[a].clone(),
                            names[b].clone(),
                        ))
                    }
                }
            }
        }
        Ok(Lattice {
            id: NEXT_LATTICE_ID.fetch_add(1, Ordering::Relaxed),
            names,
            leq_table: leq,
            join_table: join,
        })
    }

    /// The two-point lattice {L, H} with L ⊑ H.
    pub fn two_point() -> Lattice {
        Lattice::from_parts(&["L", "H"], &[("L", "H")]).expect("two-point lattice is valid")
    }

    /// The powerset lattice over `k` principals `p0..p(k-1)`, ordered by
    /// inclusion. Point names look like `{}`, `{p0}`, `{p0,p1}`.
    pub fn powerset(k: u32) -> Result<Lattice, LatticeError> {
        if k > 12 {
            return Err(LatticeError::InvalidSpec(format!(
                "powerset:{k} is too large (at most 12 principals)"
            )));
        }
        let n = 1usize << k;
        let set_name = |mask: usize| {
            let members: Vec<String> =
                (0..k).filter(|p| mask & (1 << p) != 0).map(|p| format!("p{p}")).collect();
            format!("{{{}}}", members.join(","))
        };
        let names: Vec<String> = (0..n).map(set_name).collect();
        let mut order = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a & b == a && a != b {
                    order.push((names[a].clone(), names[b].clone()));
                }
            }
        }
        let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let order_refs: Vec<(&str, &str)> =
            order.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        Lattice::from_parts(&name_refs, &order_refs)
    }

    /// Parses a JSON description `{"points": [...], "order": [["a","b"], ...]}`.
    pub fn from_json(text: &str) -> Result<Lattice, LatticeError> {
        let parsed: LatticeJson = serde_json::from_str(text)
            .map_err(|e| LatticeError::InvalidSpec(format!("bad JSON: {e}")))?;
        let order: Vec<(&str, &str)> =
            parsed.order.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let points: Vec<&str> = parsed.points.iter().map(|s| s.as_str()).collect();
        Lattice::from_parts(&points, &order)
    }

    /// Number of points.
    pub fn size(&self) -> usize {
        self.names.len()
    }

    /// All points, in interning order.
    pub fn points(&self) -> impl Iterator<Item = Label> + '_ {
        let id = self.id;
        (0..self.names.len()).map(move |ix| Label { lat: id, ix: ix as u16 })
    }

    /// True when the label was interned by this lattice.
    pub fn owns(&self, l: Label) -> bool {
        l.lat == self.id && (l.ix as usize) < self.names.len()
    }

    /// The point with the given name.
    pub fn label(&self, name: &str) -> Option<Label> {
        self.names
            .iter()
            .position(|p| p == name)
            .map(|ix| Label { lat: self.id, ix: ix as u16 })
    }

    /// The name of a point.
    pub fn name(&self, l: Label) -> &str {
        assert!(self.owns(l), "label from another lattice");
        &self.names[l.ix as usize]
    }

    /// True iff `l1 ⊑ l2`.
    pub fn leq(&self, l1: Label, l2: Label) -> Result<bool, LatticeError> {
        if !self.owns(l1) || !self.owns(l2) {
            return Err(LatticeError::CrossLatticeComparison);
        }
        Ok(self.leq_table[l1.ix as usize * self.names.len() + l2.ix as usize])
    }

    /// The least upper bound `l1 ⊔ l2`.
    pub fn join(&self, l1: Label, l2: Label) -> Result<Label, LatticeError> {
        if !self.owns(l1) || !self.owns(l2) {
            return Err(LatticeError::CrossLatticeComparison);
        }
        let ix = self.join_table[l1.ix as usize * self.names.len() + l2.ix as usize];
        Ok(Label { lat: self.id, ix })
    }
}

/// Loads a lattice from a description string: the builtin names
/// `"two-point"` and `"powerset:k"`, or an inline JSON document.
pub fn lattice_load(spec: &str) -> Result<Lattice, LatticeError> {
    let trimmed = spec.trim();
    if trimmed == "two-point" {
        return Ok(Lattice::two_point());
    }
    if let Some(k) = trimmed.strip_prefix("powerset:") {
        let k: u32 = k
            .parse()
            .map_err(|_| LatticeError::InvalidSpec(format!("bad principal count: {k}")))?;
        return Lattice::powerset(k);
    }
    if trimmed.starts_with('{') {
        return Lattice::from_json(trimmed);
    }
    Err(LatticeError::InvalidSpec(format!("unknown lattice description: {trimmed}")))
}
