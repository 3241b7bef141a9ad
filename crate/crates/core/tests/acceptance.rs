//! Acceptance criteria. Each criterion runs in turn, prints one PASS/FAIL
//! line with its runtime, and the test fails if any criterion does.
//!
//! Run with `cargo test -p ringstrata --test acceptance -- --nocapture` to see
//! the lines.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ringstrata::decomposition::PrimeSubset;
use ringstrata::lattice::factor_ideal;
use ringstrata::oracle::{
    decompose_brute, j_class_group, j_classes, stratify, v_set, IdealCatalog, JClassGroup,
    OracleConfig,
};
use ringstrata::recipe::{integer_depth, Recipe};
use ringstrata::ring::{annihilator, coset_of, units};
use ringstrata::{Decomposition, Elem, ElemSet, FiniteRing, QuadLattice};

fn zset(ring: &FiniteRing, xs: &[u32]) -> ElemSet {
    ElemSet::from_iter_in(ring.order(), xs.iter().map(|&x| Elem(x)))
}

fn qset(ring: &FiniteRing, xs: &[(i64, i64)]) -> ElemSet {
    ElemSet::from_iter_in(ring.order(), xs.iter().map(|&(a, b)| ring.quad_elem(a, b)))
}

/// Units of `Z_n` by a gcd scan.
fn zn_units(n: u64) -> Vec<u64> {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    (0..n).filter(|&u| gcd(u, n) == 1).collect()
}

/// `∪ k·U` over the given multipliers in `Z_n`.
fn orbits(ring: &FiniteRing, n: u64, ks: &[u64]) -> ElemSet {
    let u = zn_units(n);
    ElemSet::from_iter_in(
        ring.order(),
        ks.iter()
            .flat_map(|&k| u.iter().map(move |&v| Elem((k * v % n) as u32))),
    )
}

/// Both routes, which must agree.
fn both(ring: &FiniteRing) -> (Decomposition, Decomposition) {
    let recipe = Recipe::for_ring(ring).unwrap().decompose().unwrap();
    let brute = decompose_brute(ring, OracleConfig::default()).unwrap();
    recipe.compare(&brute).unwrap();
    (recipe, brute)
}

fn criterion_1() {
    let r = FiniteRing::zn(12).unwrap();
    let (recipe, brute) = both(&r);
    for d in [recipe, brute] {
        assert_eq!(d.components.len(), 4);
        let expect = [
            (&[1, 5, 7, 11][..], &[1, 5, 7, 11][..], vec![]),
            (&[3, 9], &[3, 9], vec![]),
            (&[2, 4, 8, 10], &[4, 8], vec![zset(&r, &[2, 10])]),
            (&[0, 6], &[0], vec![zset(&r, &[6])]),
        ];
        for (elements, base, layers) in expect {
            let c = &d.components[d.component_of(Elem(elements[0])).unwrap()];
            assert_eq!(c.elements, zset(&r, elements));
            assert_eq!(c.base, zset(&r, base));
            assert_eq!(c.layers, layers);
        }
    }
}

fn criterion_2() {
    let n = 6000;
    let r = FiniteRing::zn(n as i64).unwrap();
    let (recipe, brute) = both(&r);
    brute.verify_semilattice_law(&r).unwrap();
    for d in [&recipe, &brute] {
        let c = d.component_by_generator(&r, Elem(2000)).unwrap();
        assert_eq!(c.height(), 3);
        assert_eq!(c.base, orbits(&r, n, &[2000]));
        assert_eq!(c.layers[0], orbits(&r, n, &[10, 20, 40, 80, 50, 250]));
        assert_eq!(c.layers[1], orbits(&r, n, &[100, 200, 400, 500]));
        assert_eq!(c.layers[2], orbits(&r, n, &[1000]));
    }
}

fn criterion_3() {
    let d = -5;
    let r = FiniteRing::quad_quotient_from_generators(d, &[(10, 0), (5, 5)]).unwrap();
    assert_eq!(r.order(), 50);
    assert_eq!(units(&r).len(), 20);
    let f = factor_ideal(r.lattice().unwrap()).unwrap();
    let p2 = QuadLattice::from_generators(d, &[(2, 0), (1, 1)]).unwrap();
    let p5 = QuadLattice::from_generators(d, &[(5, 0), (0, 1)]).unwrap();
    assert_eq!(f.factors, vec![(p2, 1), (p5, 2)]);

    let (recipe, brute) = both(&r);
    for dec in [&recipe, &brute] {
        assert_eq!(dec.components.len(), 4);
        for g in [1, 6, 5, 0] {
            assert!(
                dec.component_by_generator(&r, r.quad_elem(g, 0)).is_some(),
                "no idempotent ({g})"
            );
        }
        let r5 = dec.component_by_generator(&r, r.quad_elem(5, 0)).unwrap();
        assert_eq!(r5.base, qset(&r, &[(5, 0)]));
        assert_eq!(r5.layers, vec![qset(&r, &[(0, 1), (0, 3), (0, 7), (0, 9)])]);
        let r0 = dec.component_by_generator(&r, r.zero()).unwrap();
        assert_eq!(r0.layers[0], qset(&r, &[(0, 2), (0, 4), (5, 1), (5, 3)]));
        let r6 = dec.component_by_generator(&r, r.quad_elem(6, 0)).unwrap();
        assert_eq!(r6.base.len(), 20);
    }
}

fn criterion_4() {
    for (p, k) in [(2u64, 3u32), (3, 4), (5, 4)] {
        let start = Instant::now();
        let n = p.pow(k);
        let r = FiniteRing::zn(n as i64).unwrap();
        let (recipe, brute) = both(&r);
        for d in [&recipe, &brute] {
            assert_eq!(d.components.len(), 2);
            assert_eq!(d.hasse.len(), 1);
            let c = &d.components[d.component_of(Elem(0)).unwrap()];
            assert_eq!(c.base, zset(&r, &[0]));
            assert_eq!(c.height(), k as usize - 1);
            for i in 1..k {
                assert_eq!(
                    c.layers[i as usize - 1],
                    orbits(&r, n, &[p.pow(i)]),
                    "Z_{n} layer {i}"
                );
            }
        }
        assert!(
            start.elapsed() < Duration::from_secs(1),
            "Z_{n} took {:?}",
            start.elapsed()
        );
    }
}

fn criterion_5() {
    let mismatches: Vec<String> = (2..=300)
        .filter_map(|n| {
            let r = FiniteRing::zn(n).unwrap();
            let recipe = Recipe::for_ring(&r).unwrap().decompose().unwrap();
            let brute = decompose_brute(&r, OracleConfig::default()).unwrap();
            recipe
                .compare(&brute)
                .err()
                .map(|why| format!("Z_{n}: {why}"))
        })
        .collect();
    assert!(mismatches.is_empty(), "{mismatches:?}");
}

/// Fixtures plus seeded random `Z_n` and `Z[√d]/A` of small order.
fn property_rings() -> Vec<FiniteRing> {
    let mut rings: Vec<FiniteRing> = [12, 6000, 8, 81, 625]
        .iter()
        .map(|&n| FiniteRing::zn(n).unwrap())
        .collect();
    rings.push(FiniteRing::quad_quotient_from_generators(-5, &[(10, 0), (5, 5)]).unwrap());
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..30 {
        rings.push(FiniteRing::zn(rng.gen_range(2..=400)).unwrap());
    }
    let ds = [-1, -2, -5, -6, -10, 2, 3, 6, 7];
    let mut quad = 0;
    while quad < 30 {
        let d = ds[rng.gen_range(0..ds.len())];
        let gens = [
            (rng.gen_range(2..=24), 0),
            (rng.gen_range(0..24), rng.gen_range(0..24)),
        ];
        if let Ok(r) = FiniteRing::quad_quotient_from_generators(d, &gens) {
            if (2..=600).contains(&r.order()) {
                rings.push(r);
                quad += 1;
            }
        }
    }
    rings
}

fn check_properties(r: &FiniteRing) {
    let name = format!("{:?}", r);
    let catalog = IdealCatalog::build(r, OracleConfig::default()).unwrap();
    let n_ideals = catalog.ideals().len();

    // ε(IJ) = ε(I)ε(J)
    let idem = catalog.idempotents();
    let eps = catalog.epsilon_table(&idem);
    for i in 0..n_ideals {
        for j in 0..n_ideals {
            assert_eq!(
                eps[catalog.product(i, j)],
                catalog.product(eps[i], eps[j]),
                "{name}: ε not multiplicative"
            );
        }
    }

    // xV_x = xU
    let u = units(r);
    for x in r.elements() {
        let vx = if r.order() <= 400 {
            v_set(r, x)
        } else {
            catalog.v_set(x)
        };
        let xv = ElemSet::from_iter_in(r.order(), vx.iter().map(|v| r.mul(x, v)));
        let xu = ElemSet::from_iter_in(r.order(), u.iter().map(|v| r.mul(x, v)));
        assert_eq!(xv, xu, "{name}: xV_x ≠ xU at {}", r.display(x));
    }

    // J-classes are the fibres of δ.
    let mut fibres: HashMap<usize, ElemSet> = HashMap::new();
    for x in r.elements() {
        fibres
            .entry(catalog.delta(x))
            .or_insert_with(|| ElemSet::empty(r.order()))
            .insert(x);
    }
    let mut fibres: Vec<ElemSet> = fibres.into_values().collect();
    fibres.sort_by_key(|s| s.first());
    assert_eq!(j_classes(r), fibres, "{name}: J-classes");

    let recipe = Recipe::for_ring(r).unwrap();
    let rdec = recipe.decompose().unwrap();
    let bdec = decompose_brute(r, OracleConfig::default()).unwrap();
    rdec.compare(&bdec)
        .unwrap_or_else(|why| panic!("{name}: {why}"));
    rdec.verify_semilattice_law(r).unwrap();
    bdec.verify_semilattice_law(r).unwrap();

    for c in &bdec.components {
        // Base(R_e) = δ^{-1}(e), a group isomorphic to U(R/Ann(x)).
        let e = catalog.find(c.idempotent.elements()).unwrap();
        let preimage =
            ElemSet::from_iter_in(r.order(), r.elements().filter(|&x| catalog.delta(x) == e));
        assert_eq!(c.base, preimage, "{name}: base is not δ^-1(e)");
        let x = c.base.first().unwrap();
        let JClassGroup::Group(g) = j_class_group(r, x).unwrap() else {
            panic!("{name}: base is not a group");
        };
        assert_eq!(
            ElemSet::from_iter_in(r.order(), g.elements.iter().copied()),
            c.base
        );
        for i in 0..g.order() {
            assert_eq!(g.op(g.identity, i), i);
            assert_eq!(g.op(i, g.inverse[i]), g.identity);
            for j in 0..g.order() {
                assert_eq!(g.op(i, j), g.op(j, i));
                for k in 0..g.order().min(8) {
                    assert_eq!(g.op(g.op(i, j), k), g.op(i, g.op(j, k)));
                }
            }
        }
        // Bijection onto U(R/Ann(x)), checked by counting and coset lookup.
        let ann = annihilator(r, x);
        assert_eq!(g.quotient.order() * ann.len(), r.order());
        let mut hit = ElemSet::empty(g.quotient.order());
        for (i, &y) in g.elements.iter().enumerate() {
            let q = coset_of(&g.quotient, y).unwrap();
            assert_eq!(g.phi[i], q);
            assert!(g.quotient.is_unit(q), "{name}: φ leaves the units");
            assert!(hit.insert(q), "{name}: φ is not injective");
        }
        assert_eq!(
            hit.len(),
            g.quotient
                .elements()
                .filter(|&q| g.quotient.is_unit(q))
                .count()
        );
    }

    // Height formula against stratify.
    for c in &rdec.components {
        let s = c.subset.unwrap();
        let strata = stratify(r, &c.elements).unwrap();
        let formula = s
            .iter()
            .map(|i| recipe.exponents()[i])
            .max()
            .map_or(0, |m| m - 1) as usize;
        assert_eq!(strata.layers.len(), formula, "{name}: height of {s}");
        assert_eq!(strata.base, c.base);
        assert_eq!(strata.layers, c.layers);
    }
    assert_eq!(rdec.components.len(), 1 << recipe.exponents().len());
    assert_eq!(rdec.components[0].subset, Some(PrimeSubset::EMPTY));
}

fn criterion_6() {
    let rings = property_rings();
    assert!(rings.len() >= 56);
    for r in &rings {
        check_properties(r);
    }
}

fn criterion_7() {
    const LIMIT: usize = 100_000;
    let mut spf = vec![0usize; LIMIT + 1];
    for p in 2..=LIMIT {
        if spf[p] == 0 {
            for q in (p..=LIMIT).step_by(p) {
                if spf[q] == 0 {
                    spf[q] = p;
                }
            }
        }
    }
    let omega = |mut x: usize| {
        let mut count = 0;
        while x > 1 {
            x /= spf[x];
            count += 1;
        }
        count
    };
    for x in 2..=LIMIT {
        let want = omega(x);
        assert_eq!(integer_depth(x as i64).unwrap(), want, "depth({x})");
        assert_eq!(integer_depth(-(x as i64)).unwrap(), want, "depth(-{x})");
    }
    assert_eq!(integer_depth(7).unwrap(), 1);
    assert_eq!(integer_depth(12).unwrap(), 3);
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn(), Duration); 7] = [
        ("1 Z_12 fixture", criterion_1, Duration::from_secs(1)),
        (
            "2 Z_6000 component of 2000 and full oracle check",
            criterion_2,
            Duration::from_secs(60),
        ),
        (
            "3 Z[√-5]/(10, 5+5√-5) fixture",
            criterion_3,
            Duration::from_secs(5),
        ),
        (
            "4 prime powers 8, 81, 625",
            criterion_4,
            Duration::from_secs(3),
        ),
        (
            "5 recipe = oracle for Z_n, n in 2..=300",
            criterion_5,
            Duration::from_secs(120),
        ),
        (
            "6 property suite on fixtures and random rings",
            criterion_6,
            Duration::MAX,
        ),
        (
            "7 integer_depth against a sieve up to 10^5",
            criterion_7,
            Duration::MAX,
        ),
    ];
    let mut failed = Vec::new();
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let verdict = match outcome {
            Err(_) => "FAIL",
            Ok(()) if elapsed >= limit => "FAIL (too slow)",
            Ok(()) => "PASS",
        };
        println!("{verdict:<4} criterion {name} [{elapsed:.2?}]");
        if verdict != "PASS" {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
