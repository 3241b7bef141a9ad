//! Ground-truth decomposition from ring arithmetic alone.
//!
//! Nothing here looks at a factorisation. Ideals are enumerated as element
//! sets, idempotents are found by squaring, components are the fibres of
//! `εδ`, and bases and layers come from iterating `T^m`. Works for any
//! finite commutative ring with 1 up to a configurable order.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::decomposition::{hasse_edges, Component, Decomposition, Provenance, Stratification};
use crate::elemset::{Elem, ElemSet};
use crate::error::{Error, Result};
use crate::ring::{annihilator, coset_of, quotient_by_ideal, units, FiniteRing, IdealHandle};

/// Default bound on the ring order for brute-force work.
pub const DEFAULT_MAX_ORDER: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_order: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

impl OracleConfig {
    fn check(&self, ring: &FiniteRing) -> Result<()> {
        if ring.order() > self.max_order {
            return Err(Error::ResourceLimit {
                order: ring.order(),
                limit: self.max_order,
            });
        }
        Ok(())
    }
}

/// Every ideal of a ring, with `δ(x)` recorded for each element.
///
/// Principal ideals come first, in order of their canonical generators.
/// Ideals that are not principal (none, for quotients of Dedekind domains)
/// follow from closing under pairwise sums.
pub struct IdealCatalog<'r> {
    ring: &'r FiniteRing,
    ideals: Vec<IdealHandle>,
    delta: Vec<usize>,
    index: HashMap<ElemSet, usize>,
}

impl<'r> IdealCatalog<'r> {
    pub fn build(ring: &'r FiniteRing, config: OracleConfig) -> Result<Self> {
        config.check(ring)?;
        let sets: Vec<ElemSet> = ring
            .elements()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|x| ring.principal_set(x))
            .collect();

        let mut ideals = Vec::new();
        let mut index = HashMap::new();
        let mut delta = Vec::with_capacity(ring.order());
        for (x, set) in ring.elements().zip(sets) {
            let id = *index.entry(set.clone()).or_insert_with(|| {
                ideals.push(IdealHandle::with_generator(set, vec![x], Some(x)));
                ideals.len() - 1
            });
            delta.push(id);
        }

        let mut i = 0;
        while i < ideals.len() {
            for j in 0..i {
                let elems = ring.additive_sum(ideals[i].elements(), ideals[j].elements());
                if index.contains_key(&elems) {
                    continue;
                }
                let gens = ideals[i]
                    .generators()
                    .iter()
                    .chain(ideals[j].generators())
                    .copied()
                    .collect();
                index.insert(elems.clone(), ideals.len());
                ideals.push(IdealHandle::with_generator(elems, gens, None));
            }
            i += 1;
        }
        Ok(IdealCatalog {
            ring,
            ideals,
            delta,
            index,
        })
    }

    pub fn ring(&self) -> &FiniteRing {
        self.ring
    }

    pub fn ideals(&self) -> &[IdealHandle] {
        &self.ideals
    }

    pub fn ideal(&self, id: usize) -> &IdealHandle {
        &self.ideals[id]
    }

    /// Catalog index of `δ(x)`.
    pub fn delta(&self, x: Elem) -> usize {
        self.delta[x.index()]
    }

    pub fn find(&self, elems: &ElemSet) -> Option<usize> {
        self.index.get(elems).copied()
    }

    pub fn all_principal(&self) -> bool {
        self.ideals.iter().all(IdealHandle::is_principal)
    }

    /// Catalog index of `IJ`.
    pub fn product(&self, i: usize, j: usize) -> usize {
        let p = self.ideals[i].product(self.ring, &self.ideals[j]);
        self.find(p.elements())
            .expect("ideal products stay in the catalog")
    }

    /// Catalog indices of the idempotent ideals.
    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.ideals.len())
            .filter(|&i| self.product(i, i) == i)
            .collect()
    }

    /// Catalog index of `ε(I)` for every ideal `I`.
    pub fn epsilon_table(&self, idempotents: &[usize]) -> Vec<usize> {
        let es: Vec<IdealHandle> = idempotents
            .iter()
            .map(|&e| self.ideals[e].clone())
            .collect();
        self.ideals
            .iter()
            .map(|i| {
                let eps = epsilon(self.ring, i, &es);
                self.find(eps.elements()).expect("ε lands in the catalog")
            })
            .collect()
    }

    /// `V_x`, using `δ(xu) ⊆ δ(x)` with equality exactly when `x ∈ (xu)`.
    pub fn v_set(&self, x: Elem) -> ElemSet {
        let target = self.delta(x);
        ElemSet::from_iter_in(
            self.ring.order(),
            self.ring
                .elements()
                .filter(|&u| self.delta(self.ring.mul(x, u)) == target),
        )
    }
}

/// Every ideal of `ring`.
pub fn all_ideals(ring: &FiniteRing, config: OracleConfig) -> Result<Vec<IdealHandle>> {
    Ok(IdealCatalog::build(ring, config)?.ideals)
}

/// `E(D)`: the ideals with `I·I = I`.
pub fn idempotent_ideals(ring: &FiniteRing, ideals: &[IdealHandle]) -> Vec<IdealHandle> {
    ideals
        .iter()
        .filter(|i| &i.product(ring, i) == *i)
        .cloned()
        .collect()
}

/// `ε(I)`: the sum of all idempotents contained in `I`, which is the
/// greatest idempotent below `I`.
pub fn epsilon(ring: &FiniteRing, ideal: &IdealHandle, idempotents: &[IdealHandle]) -> IdealHandle {
    let below: Vec<&IdealHandle> = idempotents.iter().filter(|e| e.is_subset(ideal)).collect();
    let zero = IdealHandle::with_generator(
        ElemSet::from_iter_in(ring.order(), [ring.zero()]),
        vec![ring.zero()],
        Some(ring.zero()),
    );
    let eps = below.iter().fold(zero, |acc, e| acc.sum(ring, e));
    assert!(eps.is_subset(ideal), "ε(I) escapes I");
    assert!(eps.product(ring, &eps) == eps, "ε(I) is not idempotent");
    assert!(
        below.iter().all(|e| e.is_subset(&eps)),
        "ε(I) misses an idempotent below I"
    );
    eps
}

/// Green's J-classes, i.e. the fibres of `δ`, ordered by least element.
pub fn j_classes(ring: &FiniteRing) -> Vec<ElemSet> {
    let sets: Vec<ElemSet> = ring
        .elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|x| ring.principal_set(x))
        .collect();
    let mut classes: Vec<ElemSet> = Vec::new();
    let mut seen: HashMap<&ElemSet, usize> = HashMap::new();
    for (x, set) in ring.elements().zip(&sets) {
        let id = *seen.entry(set).or_insert_with(|| {
            classes.push(ElemSet::empty(ring.order()));
            classes.len() - 1
        });
        classes[id].insert(x);
    }
    classes
}

/// `V_x = {u : xuv = x for some v}`, straight from the definition.
pub fn v_set(ring: &FiniteRing, x: Elem) -> ElemSet {
    ElemSet::from_iter_in(
        ring.order(),
        ring.elements().filter(|&u| {
            let xu = ring.mul(x, u);
            ring.elements().any(|v| ring.mul(xu, v) == x)
        }),
    )
}

/// A J-class that is a group, with its Cayley table and the isomorphism
/// `xu ↦ [xu]` onto the units of `R/Ann(x)`.
#[derive(Debug, Clone)]
pub struct GroupWitness {
    /// Class members in ascending order; tables index into this.
    pub elements: Vec<Elem>,
    pub identity: usize,
    /// Row-major `table[i * k + j]` for `k = elements.len()`.
    pub table: Vec<u32>,
    pub inverse: Vec<usize>,
    /// `R/Ann(x)`.
    pub quotient: FiniteRing,
    /// Image of each member in `quotient`; a bijection onto its units.
    pub phi: Vec<Elem>,
}

impl GroupWitness {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn op(&self, i: usize, j: usize) -> usize {
        self.table[i * self.elements.len() + j] as usize
    }
}

#[derive(Debug, Clone)]
pub enum JClassGroup {
    Group(GroupWitness),
    /// `(x) ≠ (x²)`; the two principal ideals are the witness.
    NotAGroup {
        principal: ElemSet,
        square: ElemSet,
    },
}

/// The J-class of `x` as a group, if `δ(x)` is idempotent. Group axioms
/// and the isomorphism onto `U(R/Ann(x))` are checked element by element.
pub fn j_class_group(ring: &FiniteRing, x: Elem) -> Result<JClassGroup> {
    let principal = ring.principal_set(x);
    let square = ring.principal_set(ring.mul(x, x));
    if principal != square {
        return Ok(JClassGroup::NotAGroup { principal, square });
    }
    let fail = |what: &str| {
        Err(Error::InvariantViolation(format!(
            "J-class of {}: {what}",
            ring.display(x)
        )))
    };

    let elements: Vec<Elem> = principal
        .iter()
        .filter(|&y| ring.principal_set(y) == principal)
        .collect();
    let k = elements.len();
    let mut pos = vec![u32::MAX; ring.order()];
    for (i, &y) in elements.iter().enumerate() {
        pos[y.index()] = i as u32;
    }
    let mut table = Vec::with_capacity(k * k);
    for &a in &elements {
        for &b in &elements {
            let p = pos[ring.mul(a, b).index()];
            if p == u32::MAX {
                return fail("not closed");
            }
            table.push(p);
        }
    }
    let op = |i: usize, j: usize| table[i * k + j] as usize;
    let Some(identity) = (0..k).find(|&e| (0..k).all(|j| op(e, j) == j)) else {
        return fail("no identity");
    };
    let mut inverse = Vec::with_capacity(k);
    for i in 0..k {
        match (0..k).find(|&j| op(i, j) == identity) {
            Some(j) => inverse.push(j),
            None => return fail("missing inverse"),
        }
    }

    let ann = annihilator(ring, x);
    let quotient = quotient_by_ideal(ring, &ann)?;
    let qunits = units(&quotient);
    let phi: Vec<Elem> = elements
        .iter()
        .map(|&y| coset_of(&quotient, y).expect("quotient"))
        .collect();
    let image = ElemSet::from_iter_in(quotient.order(), phi.iter().copied());
    if image.len() != k || image != qunits {
        return fail("xu ↦ [xu] is not a bijection onto the units of R/Ann(x)");
    }
    for i in 0..k {
        for j in 0..k {
            if phi[op(i, j)] != quotient.mul(phi[i], phi[j]) {
                return fail("xu ↦ [xu] is not multiplicative");
            }
        }
    }
    Ok(JClassGroup::Group(GroupWitness {
        elements,
        identity,
        table,
        inverse,
        quotient,
        phi,
    }))
}

/// Base and layers of a subsemigroup `T` by iterating `T^{m+1} = T^m · T`
/// until the chain stabilises.
pub fn stratify(ring: &FiniteRing, t: &ElemSet) -> Result<Stratification> {
    let members = t.to_vec();
    for &a in &members {
        for &b in &members {
            if !t.contains(ring.mul(a, b)) {
                return Err(Error::InvalidSubsemigroup(format!(
                    "{} · {} leaves the set",
                    ring.display(a),
                    ring.display(b)
                )));
            }
        }
    }
    let mut current = t.clone();
    let mut layers = Vec::new();
    loop {
        let mut next = ElemSet::empty(ring.order());
        for a in current.iter() {
            for &b in &members {
                next.insert(ring.mul(a, b));
            }
        }
        if next == current {
            return Ok(Stratification {
                base: current,
                layers,
            });
        }
        layers.push(current.difference(&next));
        current = next;
    }
}

/// The semilattice `S[Im(εδ); R_e]` with every component stratified, and
/// the semilattice law checked on all pairs of elements.
pub fn decompose_brute(ring: &FiniteRing, config: OracleConfig) -> Result<Decomposition> {
    let catalog = IdealCatalog::build(ring, config)?;
    let idempotents = catalog.idempotents();
    let eps = catalog.epsilon_table(&idempotents);

    let key: Vec<usize> = ring.elements().map(|x| eps[catalog.delta(x)]).collect();
    let mut image: Vec<usize> = key.clone();
    image.sort_unstable();
    image.dedup();
    image.sort_by_key(|&e| {
        (
            std::cmp::Reverse(catalog.ideal(e).len()),
            catalog.ideal(e).elements().first(),
        )
    });

    let unreached_idempotents = idempotents
        .iter()
        .filter(|e| !image.contains(e))
        .map(|&e| catalog.ideal(e).clone())
        .collect();

    let position: HashMap<usize, usize> = image.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut fibres = vec![ElemSet::empty(ring.order()); image.len()];
    for x in ring.elements() {
        fibres[position[&key[x.index()]]].insert(x);
    }

    let strata: Vec<Stratification> = fibres
        .par_iter()
        .map(|f| stratify(ring, f))
        .collect::<Result<Vec<_>>>()?;
    let components: Vec<Component> = image
        .iter()
        .zip(fibres)
        .zip(strata)
        .map(|((&e, elements), s)| {
            let idempotent = catalog.ideal(e).clone();
            Component {
                generator: idempotent.generator(),
                idempotent,
                subset: None,
                elements,
                base: s.base,
                layers: s.layers,
            }
        })
        .collect();

    let mut meet = vec![vec![0; image.len()]; image.len()];
    for (i, &e) in image.iter().enumerate() {
        for (j, &f) in image.iter().enumerate() {
            let ef = catalog.product(e, f);
            meet[i][j] = *position.get(&ef).ok_or_else(|| {
                Error::SemilatticeLawViolation("Im(εδ) is not closed under products".into())
            })?;
        }
    }
    let sets: Vec<&ElemSet> = image.iter().map(|&e| catalog.ideal(e).elements()).collect();
    let hasse = hasse_edges(&sets);

    let decomposition = Decomposition {
        ring: ring.descriptor(),
        order: ring.order(),
        components,
        meet,
        hasse,
        provenance: Provenance::Oracle,
        unreached_idempotents,
    };
    decomposition.check_partition()?;
    decomposition.verify_semilattice_law(ring)?;
    Ok(decomposition)
}
