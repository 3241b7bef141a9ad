//! Ideals of `Z[√d]` as rank-2 integer lattices in Hermite normal form.
//!
//! A pair `(a, b)` stands for `a + b√d`. Every nonzero ideal is stored by
//! the lower-triangular basis rows `(m, 0)` and `(c, f)` with `m, f > 0`
//! and `0 <= c < m`, so two ideals are equal exactly when their rows are.
//!
//! Only squarefree `d` with `d ≢ 1 (mod 4)` are accepted. For those `Z[√d]`
//! is the full ring of integers of `Q(√d)`, hence a Dedekind domain.
//!
//! Arithmetic runs in `i128`. Basis entries are kept in `i64`, and every
//! product formed here is bounded by `|d| * m * f`, so lattices with norm
//! below `2^31` and `|d| < 2^31` never overflow.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, is_squarefree, sqrt_mod_prime, trial_division};
use crate::error::{Error, Result};

/// Checks that `Z[√d]` is a supported maximal order.
pub fn validate_discriminant(d: i64) -> Result<()> {
    if d == 0 || d == 1 {
        return Err(Error::UnsupportedRing(format!(
            "d = {d} does not give a quadratic order"
        )));
    }
    if !is_squarefree(d) {
        return Err(Error::UnsupportedRing(format!("d = {d} is not squarefree")));
    }
    if d.rem_euclid(4) == 1 {
        return Err(Error::UnsupportedRing(format!(
            "d = {d} is 1 mod 4; Z[√d] is not the maximal order"
        )));
    }
    Ok(())
}

/// `(a + b√d)(a' + b'√d)`.
#[inline]
pub(crate) fn quad_mul(d: i128, x: (i128, i128), y: (i128, i128)) -> (i128, i128) {
    (x.0 * y.0 + d * x.1 * y.1, x.0 * y.1 + x.1 * y.0)
}

/// Formats `a + b√d` the way it is written by hand: `5`, `√-5`, `3√-5`,
/// `5+3√-5`, `1-√2`.
pub fn format_quad(a: i64, b: i64, d: i64) -> String {
    let root = format!("√{d}");
    let coeff = |b: i64| match b.abs() {
        1 => root.clone(),
        n => format!("{n}{root}"),
    };
    match (a, b) {
        (a, 0) => a.to_string(),
        (0, b) if b < 0 => format!("-{}", coeff(b)),
        (0, b) => coeff(b),
        (a, b) if b < 0 => format!("{a}-{}", coeff(b)),
        (a, b) => format!("{a}+{}", coeff(b)),
    }
}

/// An ideal of `Z[√d]` in Hermite normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadLattice {
    d: i64,
    m: i64,
    c: i64,
    f: i64,
}

impl PartialOrd for QuadLattice {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ascending norm, then ascending `c`.
impl Ord for QuadLattice {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.d, self.norm(), self.c, self.m).cmp(&(other.d, other.norm(), other.c, other.m))
    }
}

/// Incremental HNF over `Z^2`: rows `(m, 0)` and `(c, f)`.
#[derive(Default)]
struct HnfBuilder {
    m: i128,
    row: Option<(i128, i128)>,
}

impl HnfBuilder {
    fn push(&mut self, (a, b): (i128, i128)) {
        if b == 0 {
            self.m = self.m.gcd(&a);
            return;
        }
        match self.row {
            None => self.row = Some(if b < 0 { (-a, -b) } else { (a, b) }),
            Some((c, f)) => {
                let eg = f.extended_gcd(&b);
                let (g, x, y) = if eg.gcd < 0 {
                    (-eg.gcd, -eg.x, -eg.y)
                } else {
                    (eg.gcd, eg.x, eg.y)
                };
                // [[x, y], [b/g, -f/g]] is unimodular.
                let merged = (x * c + y * a, g);
                let leftover = (b / g) * c - (f / g) * a;
                self.m = self.m.gcd(&leftover);
                self.row = Some(merged);
            }
        }
        if let (Some((c, f)), true) = (self.row, self.m != 0) {
            self.row = Some((c.rem_euclid(self.m), f));
        }
    }

    fn finish(self, d: i64) -> Result<QuadLattice> {
        let (c, f) = self.row.ok_or(Error::ZeroIdeal)?;
        if self.m == 0 {
            return Err(Error::InvalidParameter(
                "generators span a rank-1 lattice".into(),
            ));
        }
        let to_i64 = |v: i128| {
            i64::try_from(v)
                .map_err(|_| Error::InvalidParameter("lattice entry overflows i64".into()))
        };
        Ok(QuadLattice {
            d,
            m: to_i64(self.m)?,
            c: to_i64(c.rem_euclid(self.m))?,
            f: to_i64(f)?,
        })
    }
}

fn span(d: i64, vectors: impl IntoIterator<Item = (i128, i128)>) -> Result<QuadLattice> {
    let mut h = HnfBuilder::default();
    for v in vectors {
        h.push(v);
    }
    h.finish(d)
}

impl QuadLattice {
    /// Builds a lattice from explicit HNF rows, checking that it is an ideal.
    pub fn from_hnf(d: i64, m: i64, c: i64, f: i64) -> Result<Self> {
        validate_discriminant(d)?;
        if m <= 0 || f <= 0 || c < 0 || c >= m {
            return Err(Error::InvalidParameter(format!(
                "({m},0),({c},{f}) is not in Hermite normal form"
            )));
        }
        let l = QuadLattice { d, m, c, f };
        if !l.is_ideal() {
            return Err(Error::InvalidIdeal(format!(
                "lattice {l} is not closed under √{d}"
            )));
        }
        Ok(l)
    }

    /// The ideal of `Z[√d]` generated by `gens`.
    pub fn from_generators(d: i64, gens: &[(i64, i64)]) -> Result<Self> {
        validate_discriminant(d)?;
        if gens.iter().all(|&g| g == (0, 0)) {
            return Err(Error::ZeroIdeal);
        }
        let d128 = d as i128;
        let vectors = gens.iter().flat_map(|&(a, b)| {
            let (a, b) = (a as i128, b as i128);
            [(a, b), (d128 * b, a)]
        });
        span(d, vectors)
    }

    pub fn unit(d: i64) -> Result<Self> {
        Self::from_generators(d, &[(1, 0)])
    }

    /// The extension `pZ[√d]` of a rational integer.
    pub fn rational(d: i64, n: i64) -> Result<Self> {
        Self::from_generators(d, &[(n, 0)])
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// HNF rows `[(m, 0), (c, f)]`.
    pub fn rows(&self) -> [(i64, i64); 2] {
        [(self.m, 0), (self.c, self.f)]
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn f(&self) -> i64 {
        self.f
    }

    pub fn norm(&self) -> u64 {
        (self.m as u64) * (self.f as u64)
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == 1
    }

    fn contains_wide(&self, (a, b): (i128, i128)) -> bool {
        let (m, c, f) = (self.m as i128, self.c as i128, self.f as i128);
        if b % f != 0 {
            return false;
        }
        (a - (b / f) * c) % m == 0
    }

    pub fn contains(&self, a: i64, b: i64) -> bool {
        self.contains_wide((a as i128, b as i128))
    }

    /// `other ⊆ self`.
    pub fn includes(&self, other: &QuadLattice) -> bool {
        self.d == other.d && other.rows().iter().all(|&(a, b)| self.contains(a, b))
    }

    /// Closure under multiplication by `√d`: `(0, m)` and `(f·d, c)` lie in
    /// the lattice.
    pub fn is_ideal(&self) -> bool {
        self.m % self.f == 0
            && self.c % self.f == 0
            && self.contains_wide((0, self.m as i128))
            && self.contains_wide((self.f as i128 * self.d as i128, self.c as i128))
    }

    fn same_field(&self, other: &QuadLattice) -> Result<()> {
        if self.d != other.d {
            return Err(Error::InvalidParameter(format!(
                "ideals live in different rings (d = {} vs {})",
                self.d, other.d
            )));
        }
        Ok(())
    }

    fn basis_wide(&self) -> [(i128, i128); 2] {
        [(self.m as i128, 0), (self.c as i128, self.f as i128)]
    }

    /// The ideal product, spanned by the four products of basis vectors.
    pub fn product(&self, other: &QuadLattice) -> Result<QuadLattice> {
        self.same_field(other)?;
        let d = self.d as i128;
        let xs = self.basis_wide();
        let ys = other.basis_wide();
        span(
            self.d,
            xs.iter()
                .flat_map(|&x| ys.iter().map(move |&y| quad_mul(d, x, y))),
        )
    }

    pub fn sum(&self, other: &QuadLattice) -> Result<QuadLattice> {
        self.same_field(other)?;
        span(
            self.d,
            self.basis_wide().into_iter().chain(other.basis_wide()),
        )
    }

    pub fn pow(&self, k: u32) -> QuadLattice {
        let mut acc = QuadLattice {
            d: self.d,
            m: 1,
            c: 0,
            f: 1,
        };
        for _ in 0..k {
            acc = acc.product(self).expect("same field");
        }
        acc
    }

    /// `X ∗ Y = XY + A` on ideals containing `A`.
    pub fn star_product(&self, other: &QuadLattice, base: &QuadLattice) -> Result<QuadLattice> {
        self.same_field(other)?;
        self.same_field(base)?;
        if !self.includes(base) || !other.includes(base) {
            return Err(Error::InvalidParameter(format!(
                "star product needs {base} inside both {self} and {other}"
            )));
        }
        self.product(other)?.sum(base)
    }

    /// Generators in the form `(m, c+f√d)`, collapsed to `(m)` for the
    /// extension of a rational integer.
    pub fn generators_display(&self) -> String {
        if self.c == 0 && self.f == self.m {
            format!("({})", self.m)
        } else {
            format!("({}, {})", self.m, format_quad(self.c, self.f, self.d))
        }
    }
}

impl fmt::Display for QuadLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[({},0),({},{})]", self.m, self.c, self.f)
    }
}

/// How a rational prime decomposes in `Z[√d]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ramification {
    Split,
    Ramified,
    Inert,
}

/// The prime ideals above a rational prime `p`, each tagged with the
/// splitting type. Split primes come back in ascending `c`.
pub fn split_prime(d: i64, p: u64) -> Result<Vec<(QuadLattice, Ramification)>> {
    validate_discriminant(d)?;
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not prime")));
    }
    let pi = i64::try_from(p).map_err(|_| Error::InvalidParameter("prime too large".into()))?;
    let gen = |extra: (i64, i64)| QuadLattice::from_generators(d, &[(pi, 0), extra]);
    let mut primes = if p == 2 {
        let g = if d.rem_euclid(2) == 0 {
            gen((0, 1))?
        } else {
            gen((1, 1))?
        };
        vec![(g, Ramification::Ramified)]
    } else if d.rem_euclid(pi) == 0 {
        vec![(gen((0, 1))?, Ramification::Ramified)]
    } else {
        match sqrt_mod_prime(d, p) {
            Some(r) => {
                let r = r as i64;
                vec![
                    (gen((r, -1))?, Ramification::Split),
                    (gen((r, 1))?, Ramification::Split),
                ]
            }
            None => vec![(QuadLattice::rational(d, pi)?, Ramification::Inert)],
        }
    };
    primes.sort_by_key(|a| a.0);

    let whole = QuadLattice::rational(d, pi)?;
    let mut product = QuadLattice::unit(d)?;
    for (prime, tag) in &primes {
        let mult = if *tag == Ramification::Ramified { 2 } else { 1 };
        product = product.product(&prime.pow(mult))?;
    }
    if product != whole {
        return Err(Error::FactorisationFailure(format!(
            "primes above {p} in Z[√{d}] multiply to {product}, not {whole}"
        )));
    }
    Ok(primes)
}

/// Whether `P` is a prime ideal: norm `p` for a rational prime `p`, or the
/// extension of an inert prime (norm `p²`, residue field of order `p²`).
pub fn is_prime_ideal(lattice: &QuadLattice) -> bool {
    let n = lattice.norm();
    if is_prime(n) {
        return true;
    }
    let factors = trial_division(n);
    match factors.as_slice() {
        [(p, 2)] => split_prime(lattice.d, *p)
            .map(|ps| ps.len() == 1 && ps[0].1 == Ramification::Inert && ps[0].0 == *lattice)
            .unwrap_or(false),
        _ => false,
    }
}

/// A factorisation `∏ P_i^{e_i}` of an ideal of `Z[√d]`, ascending by norm
/// and then by `c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeFactorization {
    pub factors: Vec<(QuadLattice, u32)>,
}

impl PrimeFactorization {
    pub fn product(&self, d: i64) -> Result<QuadLattice> {
        self.factors
            .iter()
            .try_fold(QuadLattice::unit(d)?, |acc, (p, e)| acc.product(&p.pow(*e)))
    }
}

/// Factors `A` into prime ideals. Each exponent is the largest `k` with
/// `A ⊆ P^k`. The product of the result is checked against `A`. The unit
/// ideal has the empty factorisation.
pub fn factor_ideal(ideal: &QuadLattice) -> Result<PrimeFactorization> {
    let d = ideal.d;
    let mut factors = Vec::new();
    for (p, _) in trial_division(ideal.norm()) {
        for (prime, _) in split_prime(d, p)? {
            let mut e = 0;
            let mut power = prime;
            while power.includes(ideal) {
                e += 1;
                power = power.product(&prime)?;
            }
            if e > 0 {
                factors.push((prime, e));
            }
        }
    }
    factors.sort_by_key(|a| a.0);
    let fact = PrimeFactorization { factors };
    let rebuilt = fact.product(d)?;
    if rebuilt != *ideal {
        return Err(Error::FactorisationFailure(format!(
            "prime powers multiply to {rebuilt}, expected {ideal}"
        )));
    }
    Ok(fact)
}

/// Parses a comma-separated generator list such as `10, 5+5*w`, where `w`
/// stands for `√d`. Each term is `a`, `b*w`, `a+b*w` or `a-b*w`; a bare `w`
/// means `1*w`.
pub fn parse_generators(text: &str) -> Result<Vec<(i64, i64)>> {
    let gens = text
        .split(',')
        .map(parse_quad_element)
        .collect::<Result<Vec<_>>>()?;
    if gens.is_empty() {
        return Err(Error::Parse("empty generator list".into()));
    }
    Ok(gens)
}

/// Parses a single `a+b*w` term.
pub fn parse_quad_element(term: &str) -> Result<(i64, i64)> {
    let s: String = term.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse(format!("empty term in {term:?}")));
    }
    let bad = || Error::Parse(format!("cannot parse {term:?}; expected a, b*w or a+b*w"));

    // Split into signed summands at '+'/'-' that are not leading.
    let mut parts = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        if i > 0 && (ch == '+' || ch == '-') {
            parts.push(&s[start..i]);
            start = i;
        }
    }
    parts.push(&s[start..]);
    if parts.len() > 2 {
        return Err(bad());
    }

    let (mut a, mut b) = (None, None);
    for part in parts {
        let (sign, body) = match part.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, part.strip_prefix('+').unwrap_or(part)),
        };
        if let Some(coef) = body.strip_suffix('w') {
            if b.is_some() {
                return Err(bad());
            }
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            let v: i64 = if coef.is_empty() {
                1
            } else {
                coef.parse().map_err(|_| bad())?
            };
            b = Some(sign * v);
        } else {
            if a.is_some() || b.is_some() {
                return Err(bad());
            }
            a = Some(sign * body.parse::<i64>().map_err(|_| bad())?);
        }
    }
    Ok((a.unwrap_or(0), b.unwrap_or(0)))
}
