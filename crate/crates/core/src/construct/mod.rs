//! Equilibrium constructions for trees, 2×m cylinders and tori.
//!
//! Every constructor post-verifies its output with [`is_equilibrium`] and
//! attaches a [`StabilityCertificate`] that [`verify_certificate`] accepts; a
//! failed check is reported as [`Error::Construction`].

mod cylinder;
mod torus;
mod tree;

pub use cylinder::construct_cylinder_equilibrium;
pub use torus::construct_torus_equilibrium;
pub use tree::construct_tree_equilibrium;

use std::fmt;

use crate::error::{Error, Result};
use crate::game::{bit, foreign, is_equilibrium, neighbor_masks, Assignment, Instance, TypeId, TypeProfile, EMPTY};
use crate::graph::NodeId;

/// Structural reason why an assignment is stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityCertificate {
    /// Every agent has utility at least 1 and every empty node sees at most one type.
    P1,
    /// Empty nodes only see agents of `designated`, and every other agent has utility at least 1.
    P0 { designated: TypeId },
    /// Neither property holds; stability rests on the equilibrium check alone.
    Direct,
}

impl fmt::Display for StabilityCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::P1 => f.write_str("P1"),
            Self::P0 { designated } => write!(f, "P0(type {designated})"),
            Self::Direct => f.write_str("direct"),
        }
    }
}

/// Output of a constructor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub assignment: Assignment,
    pub certificate: StabilityCertificate,
    /// Case label of the construction, e.g. `"3b"`.
    pub case: String,
}

fn holds_p1(cells: &[u8], masks: &[u64]) -> bool {
    cells.iter().zip(masks).all(|(&c, &m)| if c == EMPTY { m.count_ones() <= 1 } else { foreign(m, c) >= 1 })
}

fn holds_p0(cells: &[u8], masks: &[u64], designated: TypeId) -> bool {
    cells.iter().zip(masks).all(|(&c, &m)| {
        if c == EMPTY {
            m & !bit(designated) == 0
        } else {
            c == designated || foreign(m, c) >= 1
        }
    })
}

/// Checks the literal property claimed by `certificate` and that the assignment
/// is an equilibrium.
pub fn verify_certificate(instance: &Instance, a: &Assignment, certificate: StabilityCertificate) -> bool {
    if a.validate(instance).is_err() {
        return false;
    }
    let mut masks = vec![0; a.len()];
    neighbor_masks(instance.graph(), a.cells(), &mut masks);
    let literal = match certificate {
        StabilityCertificate::P1 => holds_p1(a.cells(), &masks),
        StabilityCertificate::P0 { designated } => holds_p0(a.cells(), &masks, designated),
        StabilityCertificate::Direct => true,
    };
    literal && is_equilibrium(instance, a)
}

/// The strongest certificate the assignment satisfies: P1, then P0 for the
/// designated type `preferred` or any other type, then `Direct`.
pub fn classify(instance: &Instance, a: &Assignment, preferred: Option<TypeId>) -> StabilityCertificate {
    let mut masks = vec![0; a.len()];
    neighbor_masks(instance.graph(), a.cells(), &mut masks);
    if holds_p1(a.cells(), &masks) {
        return StabilityCertificate::P1;
    }
    let k = instance.profile().k() as TypeId;
    preferred
        .into_iter()
        .chain(0..k)
        .find(|&t| holds_p0(a.cells(), &masks, t))
        .map(|designated| StabilityCertificate::P0 { designated })
        .unwrap_or(StabilityCertificate::Direct)
}

/// Finalizes a constructor result: validates, verifies, classifies.
fn finish(instance: &Instance, cells: Vec<u8>, preferred: Option<TypeId>, case: &str) -> Result<Construction> {
    let assignment = Assignment::from_cells(cells);
    assignment
        .validate(instance)
        .map_err(|e| Error::Construction(format!("case {case}: {e}")))?;
    if let Some(w) = crate::game::equilibrium_witness(instance, &assignment) {
        return Err(Error::Construction(format!(
            "case {case}: result is not an equilibrium (improving jump {w}) for {}",
            assignment
        )));
    }
    let certificate = classify(instance, &assignment, preferred);
    Ok(Construction { assignment, certificate, case: case.to_string() })
}

/// Sorted view of a profile: position `i` holds the `i`-th smallest type
/// (ties by id), so `T_1 <= ... <= T_k` as in the case analyses.
struct SortedTypes {
    /// `ids[i]` is the caller's type id of `T_{i+1}`.
    ids: Vec<TypeId>,
    counts: Vec<usize>,
}

impl SortedTypes {
    fn new(profile: &TypeProfile) -> Self {
        let mut ids: Vec<TypeId> = (0..profile.k() as TypeId).collect();
        ids.sort_by_key(|&t| (profile.count(t), t));
        let counts = ids.iter().map(|&t| profile.count(t)).collect();
        Self { ids, counts }
    }

    fn k(&self) -> usize {
        self.ids.len()
    }

    fn n(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Translates cells labelled with sorted positions back to caller ids.
    fn relabel(&self, cells: &mut [u8]) {
        for c in cells.iter_mut().filter(|c| **c != EMPTY) {
            *c = self.ids[*c as usize];
        }
    }
}

/// Fills the cells from a list of (node, sorted type) placements.
fn cells_from(node_count: usize, placements: &[(NodeId, u8)]) -> Vec<u8> {
    let mut cells = vec![EMPTY; node_count];
    for &(v, t) in placements {
        cells[v] = t;
    }
    cells
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::make_line;

    #[test]
    fn classify_prefers_p1() {
        let i = Instance::new(make_line(4).unwrap(), TypeProfile::new(vec![1, 1]).unwrap()).unwrap();
        let a = Assignment::new(&i, &[Some(0), Some(1), None, None]).unwrap();
        assert_eq!(classify(&i, &a, None), StabilityCertificate::P1);
        assert!(verify_certificate(&i, &a, StabilityCertificate::P1));
        // P0 for type 1: node 2 sees only type 1, and type 0 has utility 1
        assert!(verify_certificate(&i, &a, StabilityCertificate::P0 { designated: 1 }));
        assert!(!verify_certificate(&i, &a, StabilityCertificate::P0 { designated: 0 }));
    }

    #[test]
    fn sorted_types_relabel() {
        let s = SortedTypes::new(&TypeProfile::new(vec![3, 1, 2]).unwrap());
        assert_eq!(s.ids, vec![1, 2, 0]);
        let mut cells = vec![0, 2, EMPTY];
        s.relabel(&mut cells);
        assert_eq!(cells, vec![1, 0, EMPTY]);
    }
}
