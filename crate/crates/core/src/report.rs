//! Reports on a decomposition: a serializable document, a text table and a
//! DOT rendering of the semilattice, plus the drivers behind the command
//! line verbs.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomposition::{Decomposition, Provenance};
use crate::elemset::{Elem, ElemSet};
use crate::error::{Error, Result};
use crate::lattice::{parse_generators, parse_quad_element};
use crate::oracle::{decompose_brute, OracleConfig};
use crate::recipe::{Recipe, RingFactorization};
use crate::ring::{FiniteRing, RingDescriptor, RingKind};

pub const DEFAULT_MAX_ELEMS: usize = 64;

#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Also run the brute-force oracle and compare.
    pub verify: bool,
    /// An element; the report marks the component containing it.
    pub focus: Option<String>,
    pub max_elems: usize,
    pub timings: bool,
    pub oracle: OracleConfig,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            verify: false,
            focus: None,
            max_elems: DEFAULT_MAX_ELEMS,
            timings: false,
            oracle: OracleConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRecord {
    pub prime: String,
    pub norm: u64,
    pub exponent: u32,
}

/// An element list cut off after `max_elems` entries; `size` is exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetRecord {
    pub size: usize,
    pub elements: Vec<String>,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    /// 1-based prime indices.
    pub subset: Vec<usize>,
    pub generator: String,
    pub size: usize,
    pub height: usize,
    pub base: SetRecord,
    pub layers: Vec<SetRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub recipe_us: u64,
    pub oracle_us: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub provenance: Provenance,
    /// `None` when the oracle was not run.
    pub oracle_match: Option<bool>,
    pub mismatch: Option<String>,
    pub timings: Option<Timings>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub ring: RingDescriptor,
    pub order: usize,
    pub units: usize,
    pub factorization: Vec<FactorRecord>,
    pub nodes: Vec<NodeRecord>,
    /// `(lower, upper)` node indices of the covering pairs.
    pub hasse: Vec<(usize, usize)>,
    pub focus: Option<usize>,
    pub verification: Verification,
    pub notes: Vec<String>,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Everything produced by one run.
pub struct Run {
    pub ring: FiniteRing,
    pub decomposition: Decomposition,
    pub document: ReportDocument,
}

impl Run {
    pub fn dot(&self) -> String {
        render_dot(&self.ring, &self.decomposition)
    }

    pub fn text(&self) -> String {
        render_text(&self.document)
    }

    /// True unless verification ran and disagreed.
    pub fn verified_ok(&self) -> bool {
        self.document.verification.oracle_match != Some(false)
    }
}

pub fn run_zn(n: i64, options: &RunOptions) -> Result<Run> {
    run(FiniteRing::zn(n)?, options)
}

/// `gens` is a comma-separated list such as `"10, 5+5*w"`, with `w = √d`.
pub fn run_quad(d: i64, gens: &str, options: &RunOptions) -> Result<Run> {
    let gens = parse_generators(gens)?;
    run(
        FiniteRing::quad_quotient_from_generators(d, &gens)?,
        options,
    )
}

fn parse_element(ring: &FiniteRing, text: &str) -> Result<Elem> {
    match ring.kind() {
        RingKind::Zn { .. } => {
            let x: i64 = text
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("not an integer: {text:?}")))?;
            Ok(ring.zn_elem(x))
        }
        RingKind::QuadQuotient { .. } => {
            let (a, b) = parse_quad_element(text)?;
            Ok(ring.quad_elem(a, b))
        }
        RingKind::QuotientByIdeal { .. } => Err(Error::UnsupportedRing(
            "elements of R/I cannot be parsed".into(),
        )),
    }
}

fn run(ring: FiniteRing, options: &RunOptions) -> Result<Run> {
    let started = Instant::now();
    let factorization = RingFactorization::of_ring(&ring)?;
    let recipe = Recipe::new(&ring, factorization.clone())?;
    let decomposition = recipe.decompose()?;
    let recipe_us = started.elapsed().as_micros() as u64;

    let (oracle_match, mismatch, oracle_us) = if options.verify {
        let started = Instant::now();
        let brute = decompose_brute(&ring, options.oracle)?;
        let elapsed = started.elapsed().as_micros() as u64;
        match decomposition.compare(&brute) {
            Ok(()) => (Some(true), None, Some(elapsed)),
            Err(why) => (Some(false), Some(why), Some(elapsed)),
        }
    } else {
        (None, None, None)
    };

    let focus = match &options.focus {
        None => None,
        Some(text) => {
            let x = parse_element(&ring, text)?;
            decomposition.component_of(x)
        }
    };

    let cap = |set: &ElemSet| SetRecord {
        size: set.len(),
        elements: set
            .iter()
            .take(options.max_elems)
            .map(|x| ring.display(x))
            .collect(),
        truncated: set.len() > options.max_elems,
    };
    let nodes = decomposition
        .components
        .iter()
        .map(|c| NodeRecord {
            subset: c.subset.map(|s| s.one_based()).unwrap_or_default(),
            generator: c
                .generator
                .map(|g| ring.display(g))
                .unwrap_or_else(|| "?".into()),
            size: c.elements.len(),
            height: c.height(),
            base: cap(&c.base),
            layers: c.layers.iter().map(cap).collect(),
        })
        .collect();

    let factors = (0..factorization.len())
        .map(|i| FactorRecord {
            prime: factorization.prime_label(i),
            norm: factorization.prime_norm(i),
            exponent: factorization.exponents()[i],
        })
        .collect();

    let mut notes = Vec::new();
    if let RingKind::Zn { n } = ring.kind() {
        notes.push(format!(
            "residues are 0..{}; 0 denotes the class of {n}",
            n - 1
        ));
    }

    let document = ReportDocument {
        ring: ring.descriptor(),
        order: ring.order(),
        units: recipe.units().len(),
        factorization: factors,
        nodes,
        hasse: decomposition.hasse.clone(),
        focus,
        verification: Verification {
            provenance: decomposition.provenance,
            oracle_match,
            mismatch,
            timings: options.timings.then_some(Timings {
                recipe_us,
                oracle_us,
            }),
        },
        notes,
    };
    Ok(Run {
        ring,
        decomposition,
        document,
    })
}

fn subset_label(decomposition: &Decomposition, i: usize) -> String {
    match decomposition.components[i].subset {
        Some(s) => s.to_string(),
        None => format!("#{i}"),
    }
}

/// DOT digraph of the semilattice, drawn bottom to top. Node labels are
/// `subset / generator / |base| / height`.
pub fn render_dot(ring: &FiniteRing, decomposition: &Decomposition) -> String {
    let mut out = String::from("digraph semilattice {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, c) in decomposition.components.iter().enumerate() {
        let generator = c
            .generator
            .map(|g| ring.display(g))
            .unwrap_or_else(|| "?".into());
        let label = format!(
            "{} / {} / {} / {}",
            subset_label(decomposition, i),
            generator,
            c.base.len(),
            c.height()
        );
        writeln!(out, "  n{i} [label=\"{}\"];", label.replace('"', "\\\"")).unwrap();
    }
    for &(lo, hi) in &decomposition.hasse {
        writeln!(out, "  n{lo} -> n{hi};").unwrap();
    }
    out.push_str("}\n");
    out
}

fn describe_ring(ring: &RingDescriptor) -> String {
    match ring {
        RingDescriptor::Zn { n } => format!("Z_{n}"),
        RingDescriptor::QuadQuotient { d, hnf } => {
            format!(
                "Z[√{d}] / [({},{}),({},{})]",
                hnf[0].0, hnf[0].1, hnf[1].0, hnf[1].1
            )
        }
        RingDescriptor::QuotientByIdeal {
            parent_order,
            ideal_order,
        } => {
            format!("quotient of a ring of order {parent_order} by an ideal of order {ideal_order}")
        }
    }
}

fn set_text(set: &SetRecord) -> String {
    let more = if set.truncated {
        format!(", … ({} total)", set.size)
    } else {
        String::new()
    };
    format!("{{{}{more}}}", set.elements.join(", "))
}

/// Human-readable table of a report.
pub fn render_text(doc: &ReportDocument) -> String {
    let mut out = String::new();
    writeln!(out, "ring: {}", describe_ring(&doc.ring)).unwrap();
    writeln!(out, "order: {}   units: {}", doc.order, doc.units).unwrap();
    let factors: Vec<String> = doc
        .factorization
        .iter()
        .enumerate()
        .map(|(i, f)| format!("P{}={}^{}", i + 1, f.prime, f.exponent))
        .collect();
    let factors = if factors.is_empty() {
        "(unit)".to_string()
    } else {
        factors.join(" · ")
    };
    writeln!(out, "factorisation: {factors}").unwrap();
    writeln!(out).unwrap();
    writeln!(
        out,
        "{:<4} {:<10} {:<16} {:>8} {:>8} {:>6}",
        "node", "subset", "generator", "size", "|base|", "height"
    )
    .unwrap();
    for (i, node) in doc.nodes.iter().enumerate() {
        let subset: Vec<String> = node.subset.iter().map(|s| s.to_string()).collect();
        let marker = if doc.focus == Some(i) { "*" } else { "" };
        writeln!(
            out,
            "{:<4} {:<10} {:<16} {:>8} {:>8} {:>6}",
            format!("{i}{marker}"),
            format!("{{{}}}", subset.join(",")),
            node.generator,
            node.size,
            node.base.size,
            node.height
        )
        .unwrap();
    }
    writeln!(out).unwrap();
    for (i, node) in doc.nodes.iter().enumerate() {
        if doc.focus.is_some() && doc.focus != Some(i) {
            continue;
        }
        writeln!(out, "node {i} ({})", node.generator).unwrap();
        writeln!(out, "  base ({}): {}", node.base.size, set_text(&node.base)).unwrap();
        for (j, layer) in node.layers.iter().enumerate() {
            writeln!(
                out,
                "  layer {} ({}): {}",
                j + 1,
                layer.size,
                set_text(layer)
            )
            .unwrap();
        }
    }
    let edges: Vec<String> = doc
        .hasse
        .iter()
        .map(|(lo, hi)| format!("{lo}->{hi}"))
        .collect();
    writeln!(out, "\nhasse: {}", edges.join(" ")).unwrap();
    let v = &doc.verification;
    let check = match v.oracle_match {
        None => "not run".to_string(),
        Some(true) => "match".to_string(),
        Some(false) => format!("MISMATCH: {}", v.mismatch.as_deref().unwrap_or("")),
    };
    writeln!(out, "provenance: {:?}   oracle: {check}", v.provenance).unwrap();
    if let Some(t) = &v.timings {
        let oracle = t
            .oracle_us
            .map(|us| format!("   oracle: {us} µs"))
            .unwrap_or_default();
        writeln!(out, "recipe: {} µs{oracle}", t.recipe_us).unwrap();
    }
    for note in &doc.notes {
        writeln!(out, "note: {note}").unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestSummary {
    pub checked: usize,
    /// `(n, reason)` for every modulus where the two routes disagree or fail.
    pub failures: Vec<(u64, String)>,
}

/// Compares the structural and brute-force decompositions of `Z_n` for
/// every `n` in `2..=max_n`.
pub fn selftest(max_n: u64, config: OracleConfig) -> SelftestSummary {
    let mut failures: Vec<(u64, String)> = (2..=max_n)
        .into_par_iter()
        .filter_map(|n| {
            let check = || -> Result<std::result::Result<(), String>> {
                let ring = FiniteRing::zn(n as i64)?;
                let recipe = Recipe::for_ring(&ring)?.decompose()?;
                let brute = decompose_brute(&ring, config)?;
                Ok(recipe.compare(&brute))
            };
            match check() {
                Ok(Ok(())) => None,
                Ok(Err(why)) => Some((n, why)),
                Err(e) => Some((n, e.to_string())),
            }
        })
        .collect();
    failures.sort();
    SelftestSummary {
        checked: max_n.saturating_sub(1) as usize,
        failures,
    }
}
