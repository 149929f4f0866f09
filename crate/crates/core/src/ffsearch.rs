//! Enumeration of complements to `M6`, `M5a`, `M5b` over small prime fields.
//!
//! A complement has a unique normalized basis: `v_k` is 1 at its pivot unit,
//! 0 at the other pivots, and free on the units of `M`. Closure is checked
//! over machine integers and every find is classified by the canonicalizer.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::canonical::{canonicalize_with, CanonLabel, CanonOptions};
use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::linalg::Mat3;
use crate::subalg::{validate_decomposition, MLabel, Subalgebra};

pub const DEFAULT_BUDGET: u64 = 1_000_000_000;
/// Keeps products of residues below `2^32`.
pub const MAX_PRIME: u64 = 65_521;

type Vec9 = [u32; 9];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchFailure {
    pub kind: String,
    pub detail: String,
    /// Normalized basis of the offending `S`, row-major residues.
    pub witness: Vec<Vec9>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub field: FieldDescriptor,
    pub m_label: MLabel,
    /// Tree nodes visited (exhaustive) or samples drawn (sampling).
    pub candidates_scanned: u64,
    pub valid_decompositions: u64,
    /// Closed complements containing the identity; outside the nonunital classification.
    pub unital_skipped: u64,
    pub label_histogram: BTreeMap<CanonLabel, u64>,
    /// Finds whose reduction needs a square root outside the base field.
    pub extension_required: u64,
    /// Labels reached by those finds after adjoining the root.
    pub extension_resolved: BTreeMap<CanonLabel, u64>,
    pub failures: Vec<SearchFailure>,
}

impl SearchReport {
    fn empty(field: FieldDescriptor, m_label: MLabel) -> Self {
        SearchReport {
            field,
            m_label,
            candidates_scanned: 0,
            valid_decompositions: 0,
            unital_skipped: 0,
            label_histogram: BTreeMap::new(),
            extension_required: 0,
            extension_resolved: BTreeMap::new(),
            failures: Vec::new(),
        }
    }

    fn merge(&mut self, other: SearchReport) {
        self.candidates_scanned += other.candidates_scanned;
        self.valid_decompositions += other.valid_decompositions;
        self.unital_skipped += other.unital_skipped;
        for (l, c) in other.label_histogram {
            *self.label_histogram.entry(l).or_default() += c;
        }
        self.extension_required += other.extension_required;
        for (l, c) in other.extension_resolved {
            *self.extension_resolved.entry(l).or_default() += c;
        }
        self.failures.extend(other.failures);
    }

    /// Labels allowed for this `M`.
    pub fn allowed_labels(&self) -> Vec<CanonLabel> {
        CanonLabel::ALL
            .into_iter()
            .filter(|l| l.m_label() == self.m_label)
            .collect()
    }

    /// No failures, histogram within the allowed labels, counts consistent.
    pub fn is_clean(&self) -> bool {
        let allowed = self.allowed_labels();
        let round = match self.m_label {
            MLabel::M5a => Some(CanonLabel::B4),
            MLabel::M5b => Some(CanonLabel::B9),
            MLabel::M6 => None,
        };
        self.failures.is_empty()
            && self.label_histogram.keys().all(|l| allowed.contains(l))
            && self.extension_resolved.keys().all(|l| Some(*l) == round)
            && self.extension_resolved.values().sum::<u64>() == self.extension_required
            && self.label_histogram.values().sum::<u64>() + self.extension_required == self.valid_decompositions
    }
}

/// Pivot units in normal-basis order and the units of `M` (0-based flat indices).
struct Layout {
    pivots: Vec<usize>,
    free: Vec<usize>,
    /// Order in which basis vectors are chosen.
    order: Vec<usize>,
}

fn flat(i: usize, j: usize) -> usize {
    (i - 1) * 3 + (j - 1)
}

impl Layout {
    fn new(m: MLabel) -> Layout {
        let (pivots, order): (Vec<(usize, usize)>, Vec<usize>) = match m {
            MLabel::M6 => (vec![(2, 1), (3, 1), (1, 1)], vec![2, 0, 1]),
            MLabel::M5a => (vec![(2, 1), (3, 1), (3, 2), (3, 3)], vec![3, 0, 2, 1]),
            MLabel::M5b => (vec![(2, 1), (3, 1), (3, 2), (2, 2)], vec![3, 0, 2, 1]),
        };
        Layout {
            pivots: pivots.iter().map(|&(i, j)| flat(i, j)).collect(),
            free: m.units().iter().map(|&(i, j)| flat(i, j)).collect(),
            order,
        }
    }

    fn choices(&self, p: u32) -> u64 {
        (p as u64).pow(self.free.len() as u32)
    }

    /// The `idx`-th vector for pivot `k`, free coordinates in lexicographic order.
    fn vector(&self, k: usize, mut idx: u64, p: u32) -> Vec9 {
        let mut v = [0u32; 9];
        v[self.pivots[k]] = 1;
        for &pos in self.free.iter().rev() {
            v[pos] = (idx % p as u64) as u32;
            idx /= p as u64;
        }
        v
    }
}

fn mul(a: &Vec9, b: &Vec9, p: u32) -> Vec9 {
    let mut c = [0u32; 9];
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = 0u64;
            for k in 0..3 {
                acc += a[i * 3 + k] as u64 * b[k * 3 + j] as u64;
            }
            c[i * 3 + j] = (acc % p as u64) as u32;
        }
    }
    c
}

/// `Some(true)` if `x` lies in the span, `None` if that depends on unchosen vectors.
fn in_span(x: &Vec9, vecs: &[Option<Vec9>], pivots: &[usize], p: u32) -> Option<bool> {
    let mut r = *x;
    for (k, &piv) in pivots.iter().enumerate() {
        let c = x[piv];
        if c == 0 {
            continue;
        }
        let v = vecs[k]?;
        for (ri, vi) in r.iter_mut().zip(v.iter()) {
            *ri = ((*ri as u64 + (p - c) as u64 * *vi as u64) % p as u64) as u32;
        }
    }
    Some(r.iter().all(|&e| e == 0))
}

/// False as soon as a decidable product among chosen vectors leaves the span.
fn consistent(vecs: &[Option<Vec9>], pivots: &[usize], p: u32) -> bool {
    for a in vecs.iter().flatten() {
        for b in vecs.iter().flatten() {
            if in_span(&mul(a, b, p), vecs, pivots, p) == Some(false) {
                return false;
            }
        }
    }
    true
}

fn closed(vecs: &[Vec9], pivots: &[usize], p: u32) -> bool {
    let opts: Vec<Option<Vec9>> = vecs.iter().copied().map(Some).collect();
    vecs.iter().all(|a| {
        vecs.iter()
            .all(|b| in_span(&mul(a, b, p), &opts, pivots, p) == Some(true))
    })
}

struct Searcher<'a> {
    layout: &'a Layout,
    p: u32,
    budget: u64,
    nodes: &'a AtomicU64,
}

impl Searcher<'_> {
    fn tick(&self) -> Result<()> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    fn descend(&self, level: usize, vecs: &mut Vec<Option<Vec9>>, out: &mut Vec<Vec<Vec9>>) -> Result<()> {
        if level == self.layout.order.len() {
            out.push(vecs.iter().map(|v| v.expect("all chosen")).collect());
            return Ok(());
        }
        let k = self.layout.order[level];
        for idx in 0..self.layout.choices(self.p) {
            self.tick()?;
            vecs[k] = Some(self.layout.vector(k, idx, self.p));
            if consistent(vecs, &self.layout.pivots, self.p) {
                self.descend(level + 1, vecs, out)?;
            }
        }
        vecs[k] = None;
        Ok(())
    }
}

fn check_prime(p: u64, m: MLabel) -> Result<FieldDescriptor> {
    if p > MAX_PRIME {
        return Err(Error::Unsupported(format!("search needs p <= {MAX_PRIME}, got {p}")));
    }
    let desc = FieldDescriptor::prime(p)?;
    if m != MLabel::M6 && p == 2 {
        return Err(Error::BadCharacteristic(2));
    }
    Ok(desc)
}

/// Closed normalized bases, visited in lexicographic order.
fn enumerate(p: u64, m: MLabel, budget: u64) -> Result<(u64, Vec<Vec<Vec9>>)> {
    let layout = Layout::new(m);
    let p32 = p as u32;
    let nodes = AtomicU64::new(0);
    let searcher = Searcher {
        layout: &layout,
        p: p32,
        budget,
        nodes: &nodes,
    };
    let first = layout.order[0];
    let parts: Vec<Vec<Vec<Vec9>>> = (0..layout.choices(p32))
        .into_par_iter()
        .map(|idx| {
            searcher.tick()?;
            let mut vecs = vec![None; layout.pivots.len()];
            vecs[first] = Some(layout.vector(first, idx, p32));
            let mut out = Vec::new();
            if consistent(&vecs, &layout.pivots, p32) {
                searcher.descend(1, &mut vecs, &mut out)?;
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok((nodes.load(Ordering::Relaxed), parts.into_iter().flatten().collect()))
}

fn to_mats(desc: &FieldDescriptor, vecs: &[Vec9]) -> Vec<Mat3> {
    vecs.iter()
        .map(|v| Mat3::from_fn(|i, j| desc.from_i64(v[i * 3 + j] as i64)))
        .collect()
}

/// Validate and canonicalize one closed complement.
fn classify(desc: &FieldDescriptor, m: MLabel, vecs: &[Vec9]) -> SearchReport {
    let mut rep = SearchReport::empty(desc.clone(), m);
    let fail = |kind: &str, detail: String| SearchFailure {
        kind: kind.into(),
        detail,
        witness: vecs.to_vec(),
    };
    let s = match Subalgebra::new(desc, &to_mats(desc, vecs)) {
        Ok(s) => s,
        Err(e) => {
            rep.failures.push(fail("InvalidFind", e.to_string()));
            return rep;
        }
    };
    if s.contains_identity() {
        rep.unital_skipped = 1;
        return rep;
    }
    let d = match validate_decomposition(s, m.subalgebra(desc)) {
        Ok(d) => d,
        Err(e) => {
            rep.failures.push(fail("InvalidFind", e.to_string()));
            return rep;
        }
    };
    rep.valid_decompositions = 1;
    let allowed = |l: CanonLabel| l.m_label() == m;
    match canonicalize_with(&d, CanonOptions { extend: false }) {
        Ok(r) if allowed(r.label) => {
            rep.label_histogram.insert(r.label, 1);
        }
        Ok(r) => rep.failures.push(fail("UnexpectedLabel", r.label.to_string())),
        Err(Error::RequiresExtension(q)) => {
            rep.extension_required = 1;
            match canonicalize_with(&d, CanonOptions { extend: true }) {
                Ok(r) if matches!(r.label, CanonLabel::B4 | CanonLabel::B9) && allowed(r.label) => {
                    rep.extension_resolved.insert(r.label, 1);
                }
                Ok(r) => rep.failures.push(fail(
                    "UnexpectedLabel",
                    format!("{} after adjoining sqrt({q})", r.label),
                )),
                Err(e) => rep.failures.push(fail("CanonicalizationError", e.to_string())),
            }
        }
        Err(e) => rep.failures.push(fail("CanonicalizationError", e.to_string())),
    }
    rep
}

fn classify_all(desc: &FieldDescriptor, m: MLabel, finds: &[Vec<Vec9>]) -> SearchReport {
    let parts: Vec<SearchReport> = finds.par_iter().map(|v| classify(desc, m, v)).collect();
    let mut rep = SearchReport::empty(desc.clone(), m);
    for part in parts {
        rep.merge(part);
    }
    rep
}

/// Exhaustive search for complements of `M6` over `F_p`.
pub fn search63(p: u64, budget: u64) -> Result<SearchReport> {
    search(p, MLabel::M6, budget)
}

/// Exhaustive search for complements of `M5a` or `M5b` over `F_p`, `p` odd.
pub fn search54(p: u64, m: MLabel, budget: u64) -> Result<SearchReport> {
    if m == MLabel::M6 {
        return Err(Error::Unsupported("search54 expects M5a or M5b".into()));
    }
    search(p, m, budget)
}

pub fn search(p: u64, m: MLabel, budget: u64) -> Result<SearchReport> {
    let desc = check_prime(p, m)?;
    let (nodes, finds) = enumerate(p, m, budget)?;
    let mut rep = classify_all(&desc, m, &finds);
    rep.candidates_scanned = nodes;
    Ok(rep)
}

/// Classify `n` uniformly random normalized bases, keeping the closed ones.
pub fn sample_search(p: u64, m: MLabel, n: u64, seed: u64) -> Result<SearchReport> {
    let desc = check_prime(p, m)?;
    let layout = Layout::new(m);
    let p32 = p as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let choices = layout.choices(p32);
    let mut finds = Vec::new();
    for _ in 0..n {
        let vecs: Vec<Vec9> = (0..layout.pivots.len())
            .map(|k| layout.vector(k, rng.random_range(0..choices), p32))
            .collect();
        if closed(&vecs, &layout.pivots, p32) {
            finds.push(vecs);
        }
    }
    let mut rep = classify_all(&desc, m, &finds);
    rep.candidates_scanned = n;
    Ok(rep)
}
