//! The result shared by both decomposition engines: components `R_e`
//! indexed by idempotent ideals, each split into a base group and layers.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elemset::{Elem, ElemSet};
use crate::error::{Error, Result};
use crate::ring::{FiniteRing, IdealHandle, RingDescriptor};

/// A set of prime indices `K ⊆ {0, …, n-1}`, stored as a bitmask. Shown
/// 1-based, e.g. `{1,3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PrimeSubset(pub u64);

impl PrimeSubset {
    pub const EMPTY: PrimeSubset = PrimeSubset(0);

    pub fn full(n: usize) -> Self {
        PrimeSubset(if n == 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        PrimeSubset(self.0 | 1 << i)
    }

    pub fn union(self, other: Self) -> Self {
        PrimeSubset(self.0 | other.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    /// 1-based indices, as printed in reports.
    pub fn one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }
}

impl fmt::Display for PrimeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.one_based().iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Oracle,
    Recipe,
}

/// Base and layers of a finite commutative semigroup `T`: the base is the
/// stable member of the chain `T ⊇ T^2 ⊇ …`, layer `i` is `T^i \ T^{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratification {
    pub base: ElemSet,
    pub layers: Vec<ElemSet>,
}

/// One component `R_e` of the decomposition.
#[derive(Debug, Clone)]
pub struct Component {
    /// The idempotent ideal `e`.
    pub idempotent: IdealHandle,
    /// An element generating `e`, when `e` is principal.
    pub generator: Option<Elem>,
    /// `Λ(e)`, known only to the structural route.
    pub subset: Option<PrimeSubset>,
    pub elements: ElemSet,
    pub base: ElemSet,
    /// Layers by depth; `layers[0]` is layer 1.
    pub layers: Vec<ElemSet>,
}

impl Component {
    pub fn height(&self) -> usize {
        self.layers.len()
    }

    /// Depth of `x`: `Some(0)` in the base, `Some(i)` in layer `i`, `None`
    /// outside the component.
    pub fn depth_of(&self, x: Elem) -> Option<usize> {
        if self.base.contains(x) {
            return Some(0);
        }
        self.layers
            .iter()
            .position(|l| l.contains(x))
            .map(|i| i + 1)
    }
}

/// A semilattice of stratified components.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub ring: RingDescriptor,
    pub order: usize,
    pub components: Vec<Component>,
    /// `meet[i][j]` is the component of `e_i · e_j`.
    pub meet: Vec<Vec<usize>>,
    /// Covering pairs `(lower, upper)` with `e_lower ⊊ e_upper`.
    pub hasse: Vec<(usize, usize)>,
    pub provenance: Provenance,
    /// Idempotent ideals not of the form `εδ(x)`; always empty for
    /// quotients of Dedekind domains.
    pub unreached_idempotents: Vec<IdealHandle>,
}

/// Covering pairs of the inclusion order on `ideals`.
pub(crate) fn hasse_edges(ideals: &[&ElemSet]) -> Vec<(usize, usize)> {
    let n = ideals.len();
    let below = |i: usize, j: usize| i != j && ideals[i].is_subset(ideals[j]);
    let mut edges = Vec::new();
    for lo in 0..n {
        for hi in 0..n {
            if below(lo, hi) && !(0..n).any(|k| below(lo, k) && below(k, hi)) {
                edges.push((lo, hi));
            }
        }
    }
    edges
}

impl Decomposition {
    /// Index of the component containing `x`.
    pub fn component_of(&self, x: Elem) -> Option<usize> {
        self.components.iter().position(|c| c.elements.contains(x))
    }

    pub fn component_by_generator(&self, ring: &FiniteRing, g: Elem) -> Option<&Component> {
        let target = ring.principal_set(g);
        self.components
            .iter()
            .find(|c| c.idempotent.elements() == &target)
    }

    /// Element-to-component lookup table.
    pub fn assignment(&self) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.order];
        for (i, c) in self.components.iter().enumerate() {
            for x in c.elements.iter() {
                out[x.index()] = i;
            }
        }
        out
    }

    /// Components partition the ring, and each is the disjoint union of
    /// its base and layers.
    pub fn check_partition(&self) -> Result<()> {
        let mut seen = ElemSet::empty(self.order);
        for c in &self.components {
            if !seen.is_disjoint(&c.elements) {
                return Err(Error::InvariantViolation("components overlap".into()));
            }
            seen.union_with(&c.elements);
            let mut parts = c.base.clone();
            for layer in &c.layers {
                if !parts.is_disjoint(layer) || layer.is_empty() {
                    return Err(Error::InvariantViolation(
                        "layers overlap or are empty".into(),
                    ));
                }
                parts.union_with(layer);
            }
            if parts != c.elements {
                return Err(Error::InvariantViolation(
                    "base and layers do not cover a component".into(),
                ));
            }
        }
        if seen.len() != self.order {
            return Err(Error::InvariantViolation(
                "components do not cover the ring".into(),
            ));
        }
        Ok(())
    }

    /// `R_e · R_f ⊆ R_{ef}`, checked on every pair of elements.
    pub fn verify_semilattice_law(&self, ring: &FiniteRing) -> Result<()> {
        let owner = self.assignment();
        let bad = ring
            .elements()
            .collect::<Vec<_>>()
            .into_par_iter()
            .find_map_first(|x| {
                let cx = owner[x.index()];
                ring.elements().find_map(|y| {
                    let expected = self.meet[cx][owner[y.index()]];
                    let got = owner[ring.mul(x, y).index()];
                    (got != expected).then_some((x, y))
                })
            });
        match bad {
            None => Ok(()),
            Some((x, y)) => Err(Error::SemilatticeLawViolation(format!(
                "{} · {} leaves the meet component",
                ring.display(x),
                ring.display(y)
            ))),
        }
    }

    /// Compares two decompositions of the same ring component by
    /// component, keyed by idempotent ideal. Returns a description of the
    /// first difference.
    pub fn compare(&self, other: &Decomposition) -> std::result::Result<(), String> {
        if self.order != other.order {
            return Err(format!(
                "ring orders differ: {} vs {}",
                self.order, other.order
            ));
        }
        let key = |d: &Decomposition| -> HashMap<ElemSet, usize> {
            d.components
                .iter()
                .enumerate()
                .map(|(i, c)| (c.idempotent.elements().clone(), i))
                .collect()
        };
        let mine = key(self);
        let theirs = key(other);
        if mine.len() != theirs.len() || mine.keys().any(|k| !theirs.contains_key(k)) {
            return Err(format!(
                "semilattices differ: {} vs {} idempotents",
                mine.len(),
                theirs.len()
            ));
        }
        for c in &self.components {
            let o = &other.components[theirs[c.idempotent.elements()]];
            let name = c
                .generator
                .map(|g| g.0.to_string())
                .unwrap_or_else(|| "?".into());
            if c.elements != o.elements {
                return Err(format!("component of #{name}: element sets differ"));
            }
            if c.base != o.base {
                return Err(format!("component of #{name}: bases differ"));
            }
            if c.layers != o.layers {
                return Err(format!(
                    "component of #{name}: layers differ (heights {} vs {})",
                    c.height(),
                    o.height()
                ));
            }
        }
        let edges = |d: &Decomposition| -> BTreeSet<(ElemSet, ElemSet)> {
            d.hasse
                .iter()
                .map(|&(lo, hi)| {
                    (
                        d.components[lo].idempotent.elements().clone(),
                        d.components[hi].idempotent.elements().clone(),
                    )
                })
                .collect()
        };
        if edges(self) != edges(other) {
            return Err("Hasse diagrams differ".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets() {
        let s = PrimeSubset::EMPTY.with(0).with(2);
        assert_eq!(s.to_string(), "{1,3}");
        assert_eq!(s.len(), 2);
        assert_eq!(s.union(PrimeSubset(2)), PrimeSubset::full(3));
        assert_eq!(PrimeSubset::EMPTY.to_string(), "{}");
    }

    #[test]
    fn hasse_of_a_chain_and_a_diamond() {
        let u = 4;
        let s = |xs: &[u32]| ElemSet::from_iter_in(u, xs.iter().map(|&x| Elem(x)));
        let (a, b, c, d) = (s(&[0]), s(&[0, 1]), s(&[0, 2]), s(&[0, 1, 2, 3]));
        assert_eq!(hasse_edges(&[&a, &b, &d]), vec![(0, 1), (1, 2)]);
        let mut e = hasse_edges(&[&a, &b, &c, &d]);
        e.sort();
        assert_eq!(e, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
    }
}
