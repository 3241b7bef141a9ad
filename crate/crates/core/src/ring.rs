//! Finite commutative rings with 1 and the element-level ideal
//! constructions on them: principal ideals, annihilators, units and
//! quotients.
//!
//! Elements are canonical indices `0..order`. Index `0` is always zero.
//!
//! * `Z_n` uses residues `0..n`. Where one would write the class of `n`
//!   as `n` (residues `1..=n`), this crate writes `0`.
//! * A quotient `Z[√d]/A` with `A` in HNF rows `(m,0),(c,f)` uses pairs
//!   `(a, b)`, `0 <= a < m`, `0 <= b < f`, stored at index `b*m + a`, so
//!   rational residues come first.
//! * `R/I` uses the smallest index of each coset as its representative;
//!   cosets are numbered in ascending order of their representatives.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::elemset::{Elem, ElemSet};
use crate::error::{Error, Result};
use crate::lattice::{format_quad, QuadLattice};

#[derive(Clone)]
pub enum RingKind {
    Zn {
        n: u64,
    },
    QuadQuotient {
        lattice: QuadLattice,
    },
    QuotientByIdeal {
        parent: Arc<FiniteRing>,
        reps: Vec<Elem>,
        coset_of: Vec<Elem>,
    },
}

/// Serializable description of how a ring was built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingDescriptor {
    Zn {
        n: u64,
    },
    QuadQuotient {
        d: i64,
        hnf: [(i64, i64); 2],
    },
    QuotientByIdeal {
        parent_order: usize,
        ideal_order: usize,
    },
}

/// A finite commutative ring with 1. Immutable after construction.
#[derive(Clone)]
pub struct FiniteRing {
    kind: RingKind,
    order: usize,
    one: Elem,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteRing({:?}, order {})",
            self.descriptor(),
            self.order
        )
    }
}

const MAX_ORDER: u64 = u32::MAX as u64;

impl FiniteRing {
    pub fn zn(n: i64) -> Result<Self> {
        if n <= 0 {
            return Err(Error::InvalidParameter(format!(
                "Z_n needs n >= 1, got {n}"
            )));
        }
        let n = n as u64;
        if n > MAX_ORDER {
            return Err(Error::InvalidParameter(format!("n = {n} is too large")));
        }
        Ok(FiniteRing {
            kind: RingKind::Zn { n },
            order: n as usize,
            one: Elem::from((1 % n) as usize),
        })
    }

    /// `Z[√d]/A`. The lattice already carries `d`; the argument is checked
    /// against it.
    pub fn quad_quotient(d: i64, lattice: QuadLattice) -> Result<Self> {
        crate::lattice::validate_discriminant(d)?;
        if lattice.d() != d {
            return Err(Error::InvalidParameter(format!(
                "lattice belongs to Z[√{}], not Z[√{d}]",
                lattice.d()
            )));
        }
        if !lattice.is_ideal() {
            return Err(Error::InvalidIdeal(format!("{lattice} is not an ideal")));
        }
        let order = lattice.norm();
        if order > MAX_ORDER {
            return Err(Error::InvalidParameter(format!(
                "quotient of order {order} is too large"
            )));
        }
        let mut ring = FiniteRing {
            kind: RingKind::QuadQuotient { lattice },
            order: order as usize,
            one: Elem(0),
        };
        ring.one = ring.quad_elem(1, 0);
        Ok(ring)
    }

    /// `Z[√d]` modulo the ideal generated by `gens`.
    pub fn quad_quotient_from_generators(d: i64, gens: &[(i64, i64)]) -> Result<Self> {
        let lattice = QuadLattice::from_generators(d, gens).map_err(|e| match e {
            Error::ZeroIdeal => Error::InfiniteQuotient,
            other => other,
        })?;
        Self::quad_quotient(d, lattice)
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    #[inline]
    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.order as u32).map(Elem)
    }

    pub fn contains(&self, x: Elem) -> bool {
        x.index() < self.order
    }

    /// The modulus for `Z_n`.
    pub fn modulus(&self) -> Option<u64> {
        match self.kind {
            RingKind::Zn { n } => Some(n),
            _ => None,
        }
    }

    /// The defining lattice for `Z[√d]/A`.
    pub fn lattice(&self) -> Option<&QuadLattice> {
        match &self.kind {
            RingKind::QuadQuotient { lattice } => Some(lattice),
            _ => None,
        }
    }

    pub fn descriptor(&self) -> RingDescriptor {
        match &self.kind {
            RingKind::Zn { n } => RingDescriptor::Zn { n: *n },
            RingKind::QuadQuotient { lattice } => RingDescriptor::QuadQuotient {
                d: lattice.d(),
                hnf: lattice.rows(),
            },
            RingKind::QuotientByIdeal { parent, .. } => RingDescriptor::QuotientByIdeal {
                parent_order: parent.order,
                ideal_order: parent.order / self.order,
            },
        }
    }

    /// Reduces `a + b√d` into canonical coordinates modulo the lattice.
    fn quad_reduce(lattice: &QuadLattice, a: i128, b: i128) -> (i64, i64) {
        let (m, c, f) = (
            lattice.m() as i128,
            lattice.c() as i128,
            lattice.f() as i128,
        );
        let q = b.div_euclid(f);
        let b = b - q * f;
        let a = (a - q * c).rem_euclid(m);
        (a as i64, b as i64)
    }

    /// Canonical coordinates `(a, b)` of an element of `Z[√d]/A`.
    pub fn quad_coords(&self, x: Elem) -> Option<(i64, i64)> {
        self.lattice().map(|l| {
            let m = l.m() as usize;
            ((x.index() % m) as i64, (x.index() / m) as i64)
        })
    }

    /// The element `a + b√d + A`. Panics on a ring that is not a quadratic
    /// quotient.
    pub fn quad_elem(&self, a: i64, b: i64) -> Elem {
        let l = self
            .lattice()
            .expect("quad_elem on a ring that is not Z[√d]/A");
        let (a, b) = Self::quad_reduce(l, a as i128, b as i128);
        Elem::from(b as usize * l.m() as usize + a as usize)
    }

    /// The element `x mod n` of `Z_n`, for any integer `x`.
    pub fn zn_elem(&self, x: i64) -> Elem {
        let n = self.modulus().expect("zn_elem on a ring that is not Z_n");
        Elem::from((x as i128).rem_euclid(n as i128) as usize)
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        match &self.kind {
            RingKind::Zn { n } => Elem(((x.0 as u64 * y.0 as u64) % n) as u32),
            RingKind::QuadQuotient { lattice } => {
                let m = lattice.m() as u64;
                let (xa, xb) = ((x.0 as u64 % m) as i128, (x.0 as u64 / m) as i128);
                let (ya, yb) = ((y.0 as u64 % m) as i128, (y.0 as u64 / m) as i128);
                let (a, b) = crate::lattice::quad_mul(lattice.d() as i128, (xa, xb), (ya, yb));
                let (a, b) = Self::quad_reduce(lattice, a, b);
                Elem((b as u64 * m + a as u64) as u32)
            }
            RingKind::QuotientByIdeal {
                parent,
                reps,
                coset_of,
            } => coset_of[parent.mul(reps[x.index()], reps[y.index()]).index()],
        }
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        match &self.kind {
            RingKind::Zn { n } => Elem(((x.0 as u64 + y.0 as u64) % n) as u32),
            RingKind::QuadQuotient { lattice } => {
                let m = lattice.m() as u64;
                let a = (x.0 as u64 % m + y.0 as u64 % m) as i128;
                let b = (x.0 as u64 / m + y.0 as u64 / m) as i128;
                let (a, b) = Self::quad_reduce(lattice, a, b);
                Elem((b as u64 * m + a as u64) as u32)
            }
            RingKind::QuotientByIdeal {
                parent,
                reps,
                coset_of,
            } => coset_of[parent.add(reps[x.index()], reps[y.index()]).index()],
        }
    }

    pub fn neg(&self, x: Elem) -> Elem {
        match &self.kind {
            RingKind::Zn { n } => Elem(((*n - x.0 as u64) % n) as u32),
            RingKind::QuadQuotient { lattice } => {
                let m = lattice.m() as u64;
                let (a, b) = ((x.0 as u64 % m) as i128, (x.0 as u64 / m) as i128);
                let (a, b) = Self::quad_reduce(lattice, -a, -b);
                Elem((b as u64 * m + a as u64) as u32)
            }
            RingKind::QuotientByIdeal {
                parent,
                reps,
                coset_of,
            } => coset_of[parent.neg(reps[x.index()]).index()],
        }
    }

    pub fn pow(&self, x: Elem, k: u32) -> Elem {
        (0..k).fold(self.one, |acc, _| self.mul(acc, x))
    }

    pub fn is_unit(&self, x: Elem) -> bool {
        match self.kind {
            RingKind::Zn { n } => (x.0 as u64).gcd(&n) == 1,
            _ => self.elements().any(|y| self.mul(x, y) == self.one),
        }
    }

    /// Display form: residue for `Z_n`, `a+b√d` for quadratic quotients,
    /// `[rep]` for quotients by an ideal.
    pub fn display(&self, x: Elem) -> String {
        match &self.kind {
            RingKind::Zn { .. } => x.0.to_string(),
            RingKind::QuadQuotient { lattice } => {
                let (a, b) = self.quad_coords(x).expect("quadratic ring");
                format_quad(a, b, lattice.d())
            }
            RingKind::QuotientByIdeal { parent, reps, .. } => {
                format!("[{}]", parent.display(reps[x.index()]))
            }
        }
    }

    /// `{x·r : r ∈ R}` as an element set.
    pub fn principal_set(&self, x: Elem) -> ElemSet {
        ElemSet::from_iter_in(self.order, self.elements().map(|r| self.mul(x, r)))
    }

    /// `A + B` for additive subgroups `A`, `B`: adjoin each element of `B`
    /// missing from the running sum, one coset chain at a time.
    pub fn additive_sum(&self, a: &ElemSet, b: &ElemSet) -> ElemSet {
        let mut acc = a.clone();
        for g in b.iter() {
            if acc.contains(g) {
                continue;
            }
            let base = acc.clone();
            let mut shift = g;
            while !base.contains(shift) {
                for x in base.iter() {
                    acc.insert(self.add(x, shift));
                }
                shift = self.add(shift, g);
            }
        }
        acc
    }

    /// The ideal generated by `gens`, as an element set.
    pub fn ideal_set_generated(&self, gens: &[Elem]) -> ElemSet {
        gens.iter().fold(
            ElemSet::from_iter_in(self.order, [self.zero()]),
            |acc, &g| self.additive_sum(&acc, &self.principal_set(g)),
        )
    }

    /// Whether `set` contains zero and is closed under addition and under
    /// multiplication by every ring element.
    pub fn is_ideal_set(&self, set: &ElemSet) -> bool {
        if set.universe() != self.order || !set.contains(self.zero()) {
            return false;
        }
        let members = set.to_vec();
        members.iter().all(|&x| {
            members.iter().all(|&y| set.contains(self.add(x, y)))
                && self.elements().all(|r| set.contains(self.mul(x, r)))
        })
    }
}

/// An ideal of a [`FiniteRing`], with a generating set and the canonical
/// generator when it is principal. Equality is equality of element sets.
#[derive(Debug, Clone)]
pub struct IdealHandle {
    elems: ElemSet,
    generators: Vec<Elem>,
    generator: Option<Elem>,
}

impl PartialEq for IdealHandle {
    fn eq(&self, other: &Self) -> bool {
        self.elems == other.elems
    }
}

impl Eq for IdealHandle {}

impl std::hash::Hash for IdealHandle {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elems.hash(state);
    }
}

impl IdealHandle {
    /// Wraps an element set already known to be an ideal generated by
    /// `generators`. The canonical generator is the smallest member `g`
    /// with `gR` equal to the set.
    pub fn from_parts(ring: &FiniteRing, elems: ElemSet, generators: Vec<Elem>) -> Self {
        let generator = elems.iter().find(|&g| ring.principal_set(g) == elems);
        Self::with_generator(elems, generators, generator)
    }

    pub(crate) fn with_generator(
        elems: ElemSet,
        generators: Vec<Elem>,
        generator: Option<Elem>,
    ) -> Self {
        let generators = match generator {
            Some(g) => vec![g],
            None => generators,
        };
        IdealHandle {
            elems,
            generators,
            generator,
        }
    }

    /// Validates an arbitrary subset and wraps it.
    pub fn from_set(ring: &FiniteRing, elems: ElemSet) -> Result<Self> {
        if !ring.is_ideal_set(&elems) {
            return Err(Error::InvalidIdeal(format!(
                "{} elements do not form an ideal",
                elems.len()
            )));
        }
        let gens = elems.to_vec();
        Ok(Self::from_parts(ring, elems, gens))
    }

    pub fn elements(&self) -> &ElemSet {
        &self.elems
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn generator(&self) -> Option<Elem> {
        self.generator
    }

    pub fn is_principal(&self) -> bool {
        self.generator.is_some()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.elems.contains(x)
    }

    pub fn is_subset(&self, other: &IdealHandle) -> bool {
        self.elems.is_subset(&other.elems)
    }

    pub fn sum(&self, ring: &FiniteRing, other: &IdealHandle) -> IdealHandle {
        let elems = ring.additive_sum(&self.elems, &other.elems);
        let gens = self
            .generators
            .iter()
            .chain(&other.generators)
            .copied()
            .collect();
        IdealHandle::from_parts(ring, elems, gens)
    }

    /// `IJ`, the ideal generated by pairwise products of generators.
    pub fn product(&self, ring: &FiniteRing, other: &IdealHandle) -> IdealHandle {
        let mut gens: Vec<Elem> = self
            .generators
            .iter()
            .flat_map(|&g| other.generators.iter().map(move |&h| ring.mul(g, h)))
            .collect();
        gens.sort();
        gens.dedup();
        let elems = ring.ideal_set_generated(&gens);
        IdealHandle::from_parts(ring, elems, gens)
    }
}

/// `δ(x) = (x)`.
pub fn principal_ideal(ring: &FiniteRing, x: Elem) -> IdealHandle {
    IdealHandle::from_parts(ring, ring.principal_set(x), vec![x])
}

/// `Ann(x) = {y : xy = 0}`.
pub fn annihilator(ring: &FiniteRing, x: Elem) -> IdealHandle {
    let elems = ElemSet::from_iter_in(
        ring.order(),
        ring.elements().filter(|&y| ring.mul(x, y) == ring.zero()),
    );
    let gens = elems.to_vec();
    IdealHandle::from_parts(ring, elems, gens)
}

/// The group of units.
pub fn units(ring: &FiniteRing) -> ElemSet {
    ElemSet::from_iter_in(ring.order(), ring.elements().filter(|&x| ring.is_unit(x)))
}

/// `R/I` with the smallest index in each coset as representative.
pub fn quotient_by_ideal(ring: &FiniteRing, ideal: &IdealHandle) -> Result<FiniteRing> {
    if !ring.is_ideal_set(ideal.elements()) {
        return Err(Error::InvalidIdeal(
            "quotient by a subset that is not an ideal".into(),
        ));
    }
    let unassigned = Elem(u32::MAX);
    let mut coset_of = vec![unassigned; ring.order()];
    let mut reps = Vec::new();
    for x in ring.elements() {
        if coset_of[x.index()] != unassigned {
            continue;
        }
        let id = Elem::from(reps.len());
        reps.push(x);
        for i in ideal.elements().iter() {
            coset_of[ring.add(x, i).index()] = id;
        }
    }
    let parent = Arc::new(ring.clone());
    let one = coset_of[ring.one().index()];
    Ok(FiniteRing {
        order: reps.len(),
        kind: RingKind::QuotientByIdeal {
            parent,
            reps,
            coset_of,
        },
        one,
    })
}

/// Coset of `x` in a quotient built by [`quotient_by_ideal`].
pub fn coset_of(quotient: &FiniteRing, x: Elem) -> Option<Elem> {
    match quotient.kind() {
        RingKind::QuotientByIdeal { coset_of, .. } => coset_of.get(x.index()).copied(),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ring: &FiniteRing, xs: &[u32]) -> ElemSet {
        ElemSet::from_iter_in(ring.order(), xs.iter().map(|&x| Elem(x)))
    }

    fn order50() -> FiniteRing {
        FiniteRing::quad_quotient_from_generators(-5, &[(10, 0), (5, 5)]).unwrap()
    }

    #[test]
    fn zn_construction() {
        let r = FiniteRing::zn(12).unwrap();
        assert_eq!(r.order(), 12);
        let trivial = FiniteRing::zn(1).unwrap();
        assert_eq!(trivial.order(), 1);
        assert_eq!(trivial.zero(), trivial.one());
        assert!(matches!(FiniteRing::zn(0), Err(Error::InvalidParameter(_))));
        assert!(matches!(
            FiniteRing::zn(-3),
            Err(Error::InvalidParameter(_))
        ));
        let r50 = FiniteRing::zn(50).unwrap();
        assert_eq!(r50.mul(Elem(5), Elem(10)), Elem(0));
        assert_eq!(r50.mul(Elem(7), Elem(7)), Elem(49));
        assert_eq!(r.mul(Elem(2), Elem(10)), Elem(8));
    }

    #[test]
    fn quad_construction() {
        let r = order50();
        assert_eq!(r.order(), 50);
        let trivial = FiniteRing::quad_quotient_from_generators(-5, &[(1, 0)]).unwrap();
        assert_eq!(trivial.order(), 1);
        assert_eq!(trivial.one(), trivial.zero());
        assert_eq!(
            FiniteRing::quad_quotient_from_generators(-5, &[(0, 0)]).unwrap_err(),
            Error::InfiniteQuotient
        );
        assert!(matches!(
            FiniteRing::quad_quotient_from_generators(5, &[(2, 0)]),
            Err(Error::UnsupportedRing(_))
        ));
        assert!(matches!(
            FiniteRing::quad_quotient_from_generators(8, &[(2, 0)]),
            Err(Error::UnsupportedRing(_))
        ));
    }

    #[test]
    fn quad_arithmetic() {
        let r = order50();
        let w = r.quad_elem(0, 1);
        // -5 ≡ 45 ≡ 5, since 10 ∈ A.
        assert_eq!(r.mul(w, w), r.quad_elem(45, 0));
        assert_eq!(r.mul(w, w), r.quad_elem(-5, 0));
        assert_eq!(r.quad_coords(r.mul(w, w)), Some((5, 0)));
        let x = r.quad_elem(5, 1);
        let y = r.quad_elem(5, 3);
        // (10, 20) = 4·(5,5) - (10,0) is in A.
        assert_eq!(r.mul(x, y), r.zero());
        for e in r.elements() {
            assert_eq!(r.mul(r.one(), e), e);
            assert_eq!(r.add(e, r.neg(e)), r.zero());
        }
        assert_eq!(r.display(r.quad_elem(5, 3)), "5+3√-5");
        assert_eq!(r.display(w), "√-5");
    }

    #[test]
    fn principal_ideals_and_annihilators() {
        let r = FiniteRing::zn(12).unwrap();
        let two = principal_ideal(&r, Elem(2));
        assert_eq!(two.elements(), &set(&r, &[0, 2, 4, 6, 8, 10]));
        assert_eq!(two.generator(), Some(Elem(2)));
        assert_eq!(principal_ideal(&r, Elem(10)).elements(), two.elements());
        assert_eq!(principal_ideal(&r, Elem(10)).generator(), Some(Elem(2)));
        assert_eq!(principal_ideal(&r, Elem(0)).elements(), &set(&r, &[0]));
        assert_eq!(annihilator(&r, Elem(4)).elements(), &set(&r, &[0, 3, 6, 9]));
        assert_eq!(annihilator(&r, Elem(1)).elements(), &set(&r, &[0]));
        assert_eq!(annihilator(&r, Elem(0)).len(), 12);
    }

    #[test]
    fn unit_groups() {
        let r = FiniteRing::zn(12).unwrap();
        assert_eq!(units(&r), set(&r, &[1, 5, 7, 11]));
        assert_eq!(units(&FiniteRing::zn(1).unwrap()).to_vec(), vec![Elem(0)]);
        let q = order50();
        let u = units(&q);
        assert_eq!(u.len(), 20);
        for x in q.elements() {
            let (a, b) = q.quad_coords(x).unwrap();
            let expected = (a - b).rem_euclid(2) == 1 && a % 5 != 0;
            assert_eq!(u.contains(x), expected, "{}", q.display(x));
        }
    }

    #[test]
    fn quotients() {
        let r = FiniteRing::zn(12).unwrap();
        let q = quotient_by_ideal(&r, &annihilator(&r, Elem(4))).unwrap();
        assert_eq!(q.order(), 3);
        // Z_3: 2·2 = 1
        let two = coset_of(&q, Elem(2)).unwrap();
        assert_eq!(q.mul(two, two), q.one());
        let same = quotient_by_ideal(&r, &principal_ideal(&r, Elem(0))).unwrap();
        assert_eq!(same.order(), 12);
        for x in r.elements() {
            for y in r.elements() {
                assert_eq!(same.mul(x, y), r.mul(x, y));
            }
        }
        assert_eq!(
            quotient_by_ideal(&r, &principal_ideal(&r, Elem(2)))
                .unwrap()
                .order(),
            2
        );
        let bogus = IdealHandle::with_generator(set(&r, &[0, 5]), vec![Elem(5)], None);
        assert!(matches!(
            quotient_by_ideal(&r, &bogus),
            Err(Error::InvalidIdeal(_))
        ));
        assert!(IdealHandle::from_set(&r, set(&r, &[0, 4, 8])).is_ok());
        assert!(IdealHandle::from_set(&r, set(&r, &[0, 4])).is_err());
    }

    #[test]
    fn ideal_sum_and_product() {
        let r = FiniteRing::zn(12).unwrap();
        let four = principal_ideal(&r, Elem(4));
        let six = principal_ideal(&r, Elem(6));
        assert_eq!(four.sum(&r, &six), principal_ideal(&r, Elem(2)));
        assert_eq!(
            four.product(&r, &six).elements(),
            principal_ideal(&r, Elem(0)).elements()
        );
        let two = principal_ideal(&r, Elem(2));
        assert_eq!(two.product(&r, &two).elements(), four.elements());
    }
}
