//! Structural decomposition of `Z_n` and `Z[√d]/A` from the prime
//! factorisation of `n` or `A`.
//!
//! With `A = P_1^{e_1} ⋯ P_k^{e_k}`, every ideal of `R = S/A` is
//! `A_1^{f_1} ⋯ A_k^{f_k}` with `0 <= f_i <= e_i`, where `A_i = P_i/A`.
//! An element `x` is classified by the exponents of `δ(x)`:
//!
//! * its component is `K = {i : f_i > 0}`, with idempotent `∏_{i∈K} A_i^{e_i}`;
//! * it lies in the base when `f_i = e_i` for all `i ∈ K`;
//! * otherwise its depth is `min{f_i : i ∈ K, f_i ≠ e_i}`.
//!
//! Bases and layers are built as unions of unit orbits `y·U` for
//! `y = ∏ a_i^{f_i}`, with `a_i` a generator of `A_i` in `R`. No ideal
//! products are enumerated.

use std::collections::HashSet;

use num_integer::Integer;
use rayon::prelude::*;

use crate::arith::{factor_integer, is_prime, trial_division};
use crate::decomposition::{Component, Decomposition, PrimeSubset, Provenance};
use crate::elemset::{Elem, ElemSet};
use crate::error::{Error, Result};
use crate::lattice::{factor_ideal, is_prime_ideal, PrimeFactorization, QuadLattice};
use crate::ring::{principal_ideal, FiniteRing, RingKind};

/// Cap on the number of exponent profiles enumerated for one component.
pub const MAX_PROFILES: u64 = 1_000_000;

/// Prime factorisation of the modulus `n` or the defining ideal `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingFactorization {
    Integer {
        n: u64,
        primes: Vec<(u64, u32)>,
    },
    Ideal {
        lattice: QuadLattice,
        factorization: PrimeFactorization,
    },
}

impl RingFactorization {
    /// Factors the modulus or defining ideal of a supported ring.
    pub fn of_ring(ring: &FiniteRing) -> Result<Self> {
        match ring.kind() {
            RingKind::Zn { n } => {
                let primes = if *n == 1 {
                    Vec::new()
                } else {
                    factor_integer(*n)?
                };
                Ok(RingFactorization::Integer { n: *n, primes })
            }
            RingKind::QuadQuotient { lattice } => Ok(RingFactorization::Ideal {
                lattice: *lattice,
                factorization: factor_ideal(lattice)?,
            }),
            RingKind::QuotientByIdeal { .. } => Err(Error::UnsupportedRing(
                "the structural route needs Z_n or Z[√d]/A".into(),
            )),
        }
    }

    /// A caller-supplied factorisation of `n`, checked to be the minimal one:
    /// distinct primes, positive exponents, product exactly `n`.
    pub fn integer(n: u64, mut primes: Vec<(u64, u32)>) -> Result<Self> {
        primes.sort();
        let distinct = primes.windows(2).all(|w| w[0].0 != w[1].0);
        let valid = primes.iter().all(|&(p, e)| is_prime(p) && e > 0);
        let product = primes.iter().try_fold(1u64, |acc, &(p, e)| {
            p.checked_pow(e).and_then(|q| acc.checked_mul(q))
        });
        if !distinct || !valid || product != Some(n) {
            return Err(Error::FactorisationFailure(format!(
                "{primes:?} is not the factorisation of {n}"
            )));
        }
        Ok(RingFactorization::Integer { n, primes })
    }

    /// A caller-supplied factorisation of `A`, checked the same way.
    pub fn ideal(lattice: QuadLattice, mut factorization: PrimeFactorization) -> Result<Self> {
        factorization.factors.sort_by_key(|a| a.0);
        let distinct = factorization.factors.windows(2).all(|w| w[0].0 != w[1].0);
        let valid = factorization
            .factors
            .iter()
            .all(|(p, e)| *e > 0 && is_prime_ideal(p));
        if !distinct || !valid || factorization.product(lattice.d())? != lattice {
            return Err(Error::FactorisationFailure(format!(
                "not the prime factorisation of {lattice}"
            )));
        }
        Ok(RingFactorization::Ideal {
            lattice,
            factorization,
        })
    }

    pub fn len(&self) -> usize {
        match self {
            RingFactorization::Integer { primes, .. } => primes.len(),
            RingFactorization::Ideal { factorization, .. } => factorization.factors.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn exponents(&self) -> Vec<u32> {
        match self {
            RingFactorization::Integer { primes, .. } => primes.iter().map(|&(_, e)| e).collect(),
            RingFactorization::Ideal { factorization, .. } => {
                factorization.factors.iter().map(|&(_, e)| e).collect()
            }
        }
    }

    /// Printable prime `i`: `2` or `(2, 1+√-5)`.
    pub fn prime_label(&self, i: usize) -> String {
        match self {
            RingFactorization::Integer { primes, .. } => primes[i].0.to_string(),
            RingFactorization::Ideal { factorization, .. } => {
                factorization.factors[i].0.generators_display()
            }
        }
    }

    /// Norm of prime `i` (the prime itself for `Z_n`).
    pub fn prime_norm(&self, i: usize) -> u64 {
        match self {
            RingFactorization::Integer { primes, .. } => primes[i].0,
            RingFactorization::Ideal { factorization, .. } => factorization.factors[i].0.norm(),
        }
    }

    fn matches(&self, ring: &FiniteRing) -> bool {
        match (self, ring.kind()) {
            (RingFactorization::Integer { n, .. }, RingKind::Zn { n: m }) => n == m,
            (RingFactorization::Ideal { lattice, .. }, RingKind::QuadQuotient { lattice: l }) => {
                lattice == l
            }
            _ => false,
        }
    }
}

/// The capped exponents `f_i` of `δ(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValuationProfile {
    pub exponents: Vec<u32>,
    pub caps: Vec<u32>,
}

impl ValuationProfile {
    /// `Λ`: the primes that divide `δ(x)`.
    pub fn support(&self) -> PrimeSubset {
        self.exponents
            .iter()
            .enumerate()
            .filter(|&(_, &f)| f > 0)
            .fold(PrimeSubset::EMPTY, |s, (i, _)| s.with(i))
    }

    /// `None` in the base, otherwise `min{f_i : f_i > 0, f_i ≠ e_i}`.
    pub fn depth(&self) -> Option<u32> {
        self.exponents
            .iter()
            .zip(&self.caps)
            .filter(|&(&f, &e)| f > 0 && f != e)
            .map(|(&f, _)| f)
            .min()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    Base,
    Layer(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub profile: ValuationProfile,
    pub subset: PrimeSubset,
    pub position: Position,
}

/// A supported ring together with its factorisation, the prime generators
/// `a_i` and the unit group.
pub struct Recipe<'r> {
    ring: &'r FiniteRing,
    factorization: RingFactorization,
    caps: Vec<u32>,
    /// `P_i^k` for `k = 0..=e_i`, quadratic case only.
    prime_powers: Vec<Vec<QuadLattice>>,
    prime_generators: Vec<Elem>,
    units: ElemSet,
}

impl<'r> Recipe<'r> {
    pub fn new(ring: &'r FiniteRing, factorization: RingFactorization) -> Result<Self> {
        if !factorization.matches(ring) {
            return Err(Error::InvalidParameter(
                "factorisation does not describe this ring".into(),
            ));
        }
        let caps = factorization.exponents();
        let prime_powers = match &factorization {
            RingFactorization::Integer { .. } => Vec::new(),
            RingFactorization::Ideal { factorization, .. } => factorization
                .factors
                .iter()
                .map(|(p, e)| (0..=*e).map(|k| p.pow(k)).collect())
                .collect(),
        };
        let mut recipe = Recipe {
            ring,
            factorization,
            caps,
            prime_powers,
            prime_generators: Vec::new(),
            units: ElemSet::empty(ring.order()),
        };

        let profiles: Vec<Vec<u32>> = ring
            .elements()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|x| recipe.profile(x).exponents)
            .collect();
        recipe.units = ElemSet::from_iter_in(
            ring.order(),
            ring.elements()
                .filter(|x| profiles[x.index()].iter().all(|&f| f == 0)),
        );
        for i in 0..recipe.caps.len() {
            let target: Vec<u32> = (0..recipe.caps.len()).map(|j| u32::from(i == j)).collect();
            let a = ring
                .elements()
                .find(|x| profiles[x.index()] == target)
                .ok_or_else(|| {
                    Error::NotPrincipal(format!(
                        "no generator for prime {}",
                        recipe.factorization.prime_label(i)
                    ))
                })?;
            recipe.prime_generators.push(a);
        }
        Ok(recipe)
    }

    /// Factors the ring's own modulus or ideal first.
    pub fn for_ring(ring: &'r FiniteRing) -> Result<Self> {
        Self::new(ring, RingFactorization::of_ring(ring)?)
    }

    pub fn ring(&self) -> &FiniteRing {
        self.ring
    }

    pub fn factorization(&self) -> &RingFactorization {
        &self.factorization
    }

    pub fn exponents(&self) -> &[u32] {
        &self.caps
    }

    /// `a_i` with `δ(a_i) = A_i`, the smallest such index.
    pub fn prime_generators(&self) -> &[Elem] {
        &self.prime_generators
    }

    pub fn units(&self) -> &ElemSet {
        &self.units
    }

    /// `f_i = min(v_i(δ(x)), e_i)`. For `Z_n` this reads off
    /// `gcd(x, n)`; for `Z[√d]/A` it lifts `δ(x)` to `xS + A` and finds the
    /// largest `P_i^k` containing it.
    pub fn profile(&self, x: Elem) -> ValuationProfile {
        let exponents = match (&self.factorization, self.ring.kind()) {
            (RingFactorization::Integer { n, primes }, _) => {
                let g = if x.0 == 0 { *n } else { (x.0 as u64).gcd(n) };
                primes
                    .iter()
                    .map(|&(p, e)| {
                        let mut v = 0;
                        let mut g = g;
                        while v < e && g % p == 0 {
                            g /= p;
                            v += 1;
                        }
                        v
                    })
                    .collect()
            }
            (RingFactorization::Ideal { lattice, .. }, _) => {
                let (a, b) = self.ring.quad_coords(x).expect("quadratic ring");
                let [r1, r2] = lattice.rows();
                let lifted = QuadLattice::from_generators(lattice.d(), &[(a, b), r1, r2])
                    .expect("A is nonzero, so xS + A is too");
                self.prime_powers
                    .iter()
                    .map(|powers| {
                        powers
                            .iter()
                            .rposition(|pk| pk.includes(&lifted))
                            .expect("P^0 = S contains everything") as u32
                    })
                    .collect()
            }
        };
        ValuationProfile {
            exponents,
            caps: self.caps.clone(),
        }
    }

    pub fn classify(&self, x: Elem) -> Classification {
        let profile = self.profile(x);
        let subset = profile.support();
        let position = match profile.depth() {
            None => Position::Base,
            Some(d) => Position::Layer(d),
        };
        Classification {
            profile,
            subset,
            position,
        }
    }

    /// `∏ a_i^{f_i}` over the given exponents.
    pub fn element_with_profile(&self, exponents: &[u32]) -> Elem {
        exponents
            .iter()
            .zip(&self.prime_generators)
            .fold(self.ring.one(), |acc, (&f, &a)| {
                self.ring.mul(acc, self.ring.pow(a, f))
            })
    }

    /// The idempotent generator `x_K = ∏_{i∈K} a_i^{e_i}`.
    pub fn idempotent_generator(&self, subset: PrimeSubset) -> Elem {
        let exps: Vec<u32> = self
            .caps
            .iter()
            .enumerate()
            .map(|(i, &e)| if subset.contains(i) { e } else { 0 })
            .collect();
        self.element_with_profile(&exps)
    }

    /// `0` when every `e_i` with `i ∈ K` is 1, else `max e_i - 1`.
    pub fn height(&self, subset: PrimeSubset) -> u32 {
        subset
            .iter()
            .map(|i| self.caps[i])
            .max()
            .map_or(0, |m| m - 1)
    }

    fn orbit(&self, y: Elem) -> ElemSet {
        ElemSet::from_iter_in(
            self.ring.order(),
            self.units.iter().map(|u| self.ring.mul(y, u)),
        )
    }

    /// `R_e` for `e = ∏_{i∈K} A_i^{e_i}`: base `x_K·U`, and layer `j` the
    /// union of the orbits `(∏ a_i^{f_i})·U` over profiles on `K` with
    /// `min{f_i : f_i ≠ e_i} = j`.
    pub fn component(&self, subset: PrimeSubset) -> Result<Component> {
        let n = self.caps.len();
        if subset.iter().any(|i| i >= n) {
            return Err(Error::InvalidParameter(format!(
                "{subset} is not a subset of the {n} primes"
            )));
        }
        let members: Vec<usize> = subset.iter().collect();
        let count = members
            .iter()
            .try_fold(1u64, |acc, &i| acc.checked_mul(self.caps[i] as u64));
        if count.is_none_or(|c| c > MAX_PROFILES) {
            return Err(Error::ResourceLimit {
                order: count.map_or(usize::MAX, |c| c as usize),
                limit: MAX_PROFILES as usize,
            });
        }

        let generator = self.idempotent_generator(subset);
        let base = self.orbit(generator);
        let height = self.height(subset) as usize;
        let mut layers = vec![ElemSet::empty(self.ring.order()); height];
        let mut seen = HashSet::new();

        let mut profile = vec![0u32; n];
        for &i in &members {
            profile[i] = 1;
        }
        loop {
            let depth = members
                .iter()
                .map(|&i| profile[i])
                .filter(|&f| f != 0)
                .zip(members.iter())
                .filter(|&(f, &i)| f != self.caps[i])
                .map(|(f, _)| f)
                .min();
            if let Some(depth) = depth {
                let y = self.element_with_profile(&profile);
                let orbit = self.orbit(y);
                if seen.insert(orbit.first()) {
                    let slot = layers.get_mut(depth as usize - 1).ok_or_else(|| {
                        Error::InvariantViolation(format!("depth {depth} exceeds height {height}"))
                    })?;
                    slot.union_with(&orbit);
                }
            }
            // Next profile in mixed radix over 1..=e_i.
            let mut carry = true;
            for &i in &members {
                if profile[i] < self.caps[i] {
                    profile[i] += 1;
                    carry = false;
                    break;
                }
                profile[i] = 1;
            }
            if carry {
                break;
            }
        }
        if let Some(i) = layers.iter().position(ElemSet::is_empty) {
            return Err(Error::InvariantViolation(format!(
                "layer {} of {subset} is empty",
                i + 1
            )));
        }

        let mut elements = base.clone();
        for l in &layers {
            elements.union_with(l);
        }
        Ok(Component {
            idempotent: principal_ideal(self.ring, generator),
            generator: Some(generator),
            subset: Some(subset),
            elements,
            base,
            layers,
        })
    }

    /// All `2^k` components over the Boolean lattice of prime subsets,
    /// ordered by subset bitmask. Every element is classified individually
    /// and checked against the orbit construction.
    pub fn decompose(&self) -> Result<Decomposition> {
        let n = self.caps.len();
        if n >= 32 {
            return Err(Error::ResourceLimit {
                order: n,
                limit: 31,
            });
        }
        let subsets: Vec<PrimeSubset> = (0..1u64 << n).map(PrimeSubset).collect();
        let components: Vec<Component> = subsets
            .par_iter()
            .map(|&s| self.component(s))
            .collect::<Result<Vec<_>>>()?;

        let meet = subsets
            .iter()
            .map(|a| subsets.iter().map(|b| a.union(*b).0 as usize).collect())
            .collect();
        let mut hasse = Vec::new();
        for upper in &subsets {
            for i in 0..n {
                if !upper.contains(i) {
                    hasse.push((upper.with(i).0 as usize, upper.0 as usize));
                }
            }
        }

        let decomposition = Decomposition {
            ring: self.ring.descriptor(),
            order: self.ring.order(),
            components,
            meet,
            hasse,
            provenance: Provenance::Recipe,
            unreached_idempotents: Vec::new(),
        };
        decomposition.check_partition()?;

        let mismatch = self
            .ring
            .elements()
            .collect::<Vec<_>>()
            .into_par_iter()
            .find_map_first(|x| {
                let c = self.classify(x);
                let comp = &decomposition.components[c.subset.0 as usize];
                let depth = match c.position {
                    Position::Base => 0,
                    Position::Layer(d) => d as usize,
                };
                (comp.depth_of(x) != Some(depth)).then_some(x)
            });
        if let Some(x) = mismatch {
            return Err(Error::InvariantViolation(format!(
                "classification of {} disagrees with the orbit construction",
                self.ring.display(x)
            )));
        }
        Ok(decomposition)
    }
}

/// Structural decomposition of a supported ring with a given factorisation.
pub fn decompose_recipe(
    ring: &FiniteRing,
    factorization: RingFactorization,
) -> Result<Decomposition> {
    Recipe::new(ring, factorization)?.decompose()
}

/// Classifies one element. Builds the prime generators and unit group each
/// call; use [`Recipe::classify`] in loops.
pub fn classify_element(
    ring: &FiniteRing,
    factorization: &RingFactorization,
    x: Elem,
) -> Result<Classification> {
    Ok(Recipe::new(ring, factorization.clone())?.classify(x))
}

/// Depth of a nonzero non-unit integer in the non-unit component of `Z`:
/// the number of its prime factors counted with multiplicity.
pub fn integer_depth(x: i64) -> Result<u32> {
    if x.unsigned_abs() < 2 {
        return Err(Error::InvalidParameter(format!(
            "depth needs a nonzero non-unit, got {x}"
        )));
    }
    Ok(trial_division(x.unsigned_abs())
        .iter()
        .map(|&(_, e)| e)
        .sum())
}
