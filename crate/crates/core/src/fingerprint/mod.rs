//! Orbit invariants of subalgebras and the catalog separation report.

pub mod solver;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::canonical::{catalog_entry, CanonLabel};
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldValue};
use crate::linalg::Mat3;
use crate::subalg::{MLabel, Subalgebra};

pub use solver::{is_consistent, is_consistent_with_budget, Monomial, PolySystem, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fingerprint {
    pub dim: usize,
    pub rad_dim: usize,
    pub rad_sq_dim: usize,
    pub ss_dim: usize,
    pub center_dim: usize,
    pub rad_in_left_ann: bool,
    pub rad_in_right_ann: bool,
    /// Traces (= ranks) of idempotents in the algebra; `None` outside characteristic 0.
    pub idem_trace_set: Option<BTreeSet<u8>>,
    /// `None` outside characteristic 0.
    pub unit_on_rad_sq: Option<bool>,
    pub is_m2: bool,
}

/// The part of a fingerprint compared for orbit separation.
///
/// Antiautomorphisms swap the annihilator sides, so only the unordered pair is kept.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OrbitKey {
    dim: usize,
    rad_dim: usize,
    rad_sq_dim: usize,
    ss_dim: usize,
    center_dim: usize,
    rad_in_both_ann: bool,
    rad_in_some_ann: bool,
    idem_trace_set: Option<BTreeSet<u8>>,
    unit_on_rad_sq: Option<bool>,
    is_m2: bool,
}

impl Fingerprint {
    pub fn orbit_key(&self) -> OrbitKey {
        OrbitKey {
            dim: self.dim,
            rad_dim: self.rad_dim,
            rad_sq_dim: self.rad_sq_dim,
            ss_dim: self.ss_dim,
            center_dim: self.center_dim,
            rad_in_both_ann: self.rad_in_left_ann && self.rad_in_right_ann,
            rad_in_some_ann: self.rad_in_left_ann || self.rad_in_right_ann,
            idem_trace_set: self.idem_trace_set.clone(),
            unit_on_rad_sq: self.unit_on_rad_sq,
            is_m2: self.is_m2,
        }
    }

    /// Fingerprint of the image under an antiautomorphism.
    pub fn transposed(&self) -> Fingerprint {
        Fingerprint {
            rad_in_left_ann: self.rad_in_right_ann,
            rad_in_right_ann: self.rad_in_left_ann,
            ..self.clone()
        }
    }

    pub fn max_idempotent_trace(&self) -> Option<u8> {
        self.idem_trace_set.as_ref().and_then(|s| s.iter().max().copied())
    }

    /// Names of fields that differ between two fingerprints.
    pub fn differing_fields(&self, other: &Fingerprint) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut check = |name, differ: bool| {
            if differ {
                out.push(name);
            }
        };
        check("dim", self.dim != other.dim);
        check("rad_dim", self.rad_dim != other.rad_dim);
        check("rad_sq_dim", self.rad_sq_dim != other.rad_sq_dim);
        check("ss_dim", self.ss_dim != other.ss_dim);
        check("center_dim", self.center_dim != other.center_dim);
        check(
            "annihilator_flags",
            self.orbit_key().rad_in_both_ann != other.orbit_key().rad_in_both_ann
                || self.orbit_key().rad_in_some_ann != other.orbit_key().rad_in_some_ann,
        );
        check("idem_trace_set", self.idem_trace_set != other.idem_trace_set);
        check("unit_on_rad_sq", self.unit_on_rad_sq != other.unit_on_rad_sq);
        check("is_m2", self.is_m2 != other.is_m2);
        out
    }
}

fn fmt_opt_set(s: &Option<BTreeSet<u8>>) -> String {
    match s {
        Some(s) => format!("{{{}}}", s.iter().map(u8::to_string).collect::<Vec<_>>().join(",")),
        None => "n/a".into(),
    }
}

fn fmt_opt_bool(b: Option<bool>) -> String {
    b.map_or_else(|| "n/a".into(), |b| b.to_string())
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dim={} rad={} rad2={} ss={} center={} radL={} radR={} idem={} unit_rad2={} m2={}",
            self.dim,
            self.rad_dim,
            self.rad_sq_dim,
            self.ss_dim,
            self.center_dim,
            self.rad_in_left_ann,
            self.rad_in_right_ann,
            fmt_opt_set(&self.idem_trace_set),
            fmt_opt_bool(self.unit_on_rad_sq),
            self.is_m2
        )
    }
}

fn require_char0(desc: &FieldDescriptor) -> Result<()> {
    match desc.characteristic() {
        0 => Ok(()),
        c => Err(Error::BadCharacteristic(c)),
    }
}

/// Coordinates `c_0..c_{n-1}` of `x = Σ c_i b_i`, placed at variable `perm[i]`.
struct Coords<'a> {
    a: &'a Subalgebra,
    perm: Vec<usize>,
}

impl Coords<'_> {
    fn n(&self) -> usize {
        self.a.dim()
    }

    fn desc(&self) -> &FieldDescriptor {
        self.a.descriptor()
    }

    fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(self.desc(), self.n(), self.perm[i])
    }

    fn constant(&self, c: FieldValue) -> Polynomial {
        Polynomial::constant(c, self.n())
    }

    /// Linear form `Σ c_i w_i`.
    fn linear(&self, weights: &[FieldValue]) -> Polynomial {
        let mut p = Polynomial::zero(self.desc(), self.n());
        for (i, w) in weights.iter().enumerate() {
            p = p.add(&self.var(i).scale(w));
        }
        p
    }

    /// Coordinates of `x² − x`.
    fn idempotent_equations(&self) -> Vec<Polynomial> {
        let n = self.n();
        let gamma = self.a.structure_constants();
        (0..n)
            .map(|k| {
                let mut p = self.var(k).scale(&-self.desc().one());
                for (i, row) in gamma.iter().enumerate() {
                    for (j, cell) in row.iter().enumerate() {
                        let g = &cell[k];
                        if !g.is_zero() {
                            p = p.add(&self.var(i).mul(&self.var(j)).scale(g));
                        }
                    }
                }
                p
            })
            .filter(|p| !p.is_zero())
            .collect()
    }

    fn trace_equation(&self, r: u8) -> Polynomial {
        let traces: Vec<FieldValue> = self.a.basis().iter().map(Mat3::trace).collect();
        self.linear(&traces).sub(&self.constant(self.desc().from_i64(r as i64)))
    }

    /// Entries of `f(x) − target` where `f` is linear in `x`, as linear polynomials.
    fn linear_matrix_equations(&self, f: impl Fn(&Mat3) -> Mat3, target: &Mat3) -> Vec<Polynomial> {
        let images: Vec<Vec<FieldValue>> = self.a.basis().iter().map(|b| f(b).to_vec9()).collect();
        let t = target.to_vec9();
        (0..9)
            .map(|e| {
                let w: Vec<FieldValue> = images.iter().map(|v| v[e].clone()).collect();
                self.linear(&w).sub(&self.constant(t[e].clone()))
            })
            .filter(|p| !p.is_zero())
            .collect()
    }

    fn names(&self) -> Vec<String> {
        (0..self.n()).map(|i| format!("c{i}")).collect()
    }
}

/// Traces of idempotents of `a`; `r` is included iff `{x² = x, Tr x = r}` is solvable.
pub fn idempotent_trace_set(a: &Subalgebra) -> Result<BTreeSet<u8>> {
    idempotent_trace_set_permuted(a, &(0..a.dim()).collect::<Vec<_>>())
}

/// As [`idempotent_trace_set`], with coordinate `i` assigned to solver variable `perm[i]`.
pub fn idempotent_trace_set_permuted(a: &Subalgebra, perm: &[usize]) -> Result<BTreeSet<u8>> {
    require_char0(a.descriptor())?;
    let coords = Coords { a, perm: perm.to_vec() };
    let idem = coords.idempotent_equations();
    // zero is always idempotent
    let mut out = BTreeSet::from([0u8]);
    for r in 1..=3u8 {
        let mut eqs = idem.clone();
        eqs.push(coords.trace_equation(r));
        let sys = PolySystem::new(a.descriptor(), coords.names(), eqs)?;
        if is_consistent(&sys)? {
            out.insert(r);
        }
    }
    Ok(out)
}

/// Whether some nonzero idempotent of `a` is a two-sided unit on `rad²`; false when `rad² = 0`.
pub fn unit_on_rad_sq(a: &Subalgebra) -> Result<bool> {
    require_char0(a.descriptor())?;
    let rad_sq = a.radical_square()?;
    if rad_sq.dim() == 0 {
        return Ok(false);
    }
    let coords = Coords {
        a,
        perm: (0..a.dim()).collect(),
    };
    let mut base = coords.idempotent_equations();
    for z in rad_sq.basis() {
        base.extend(coords.linear_matrix_equations(|x| x * &z, &z));
        base.extend(coords.linear_matrix_equations(|x| &z * x, &z));
    }
    for r in 1..=3u8 {
        let mut eqs = base.clone();
        eqs.push(coords.trace_equation(r));
        let sys = PolySystem::new(a.descriptor(), coords.names(), eqs)?;
        if is_consistent(&sys)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Full fingerprint; the solver-backed fields are `None` unless the characteristic is 0.
pub fn fingerprint(a: &Subalgebra) -> Result<Fingerprint> {
    let rad = a.radical()?;
    let rad_sq = a.radical_square()?;
    let (left, right) = a.annihilators();
    let center_dim = a.center().dim();
    let dim = a.dim();
    let rad_dim = rad.dim();
    let (idem_trace_set, unit) = if a.descriptor().characteristic() == 0 {
        (Some(idempotent_trace_set(a)?), Some(unit_on_rad_sq(a)?))
    } else {
        (None, None)
    };
    Ok(Fingerprint {
        dim,
        rad_dim,
        rad_sq_dim: rad_sq.dim(),
        ss_dim: dim - rad_dim,
        center_dim,
        rad_in_left_ann: rad.is_subspace_of(&left),
        rad_in_right_ann: rad.is_subspace_of(&right),
        idem_trace_set,
        unit_on_rad_sq: unit,
        is_m2: dim == 4 && rad_dim == 0 && center_dim == 1,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PairComparison {
    pub left: CanonLabel,
    pub right: CanonLabel,
    pub distinct: bool,
    pub differing: Vec<&'static str>,
}

/// One separation argument, checked against the computed fingerprints.
#[derive(Clone, Debug, Serialize)]
pub struct NamedCheck {
    pub name: &'static str,
    pub field: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    pub fingerprints: Vec<(CanonLabel, Fingerprint)>,
    pub comparisons: Vec<PairComparison>,
    pub checks: Vec<NamedCheck>,
}

impl SeparationReport {
    pub fn all_distinct(&self) -> bool {
        self.comparisons.iter().all(|c| c.distinct)
    }

    pub fn all_checks_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn get(&self, label: CanonLabel) -> Option<&Fingerprint> {
        self.fingerprints.iter().find(|(l, _)| *l == label).map(|(_, f)| f)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": crate::io::SCHEMA,
            "fingerprints": self.fingerprints.iter().map(|(l, f)| serde_json::json!({
                "label": l.to_string(),
                "fingerprint": f,
            })).collect::<Vec<_>>(),
            "comparisons": self.comparisons,
            "checks": self.checks,
            "all_distinct": self.all_distinct(),
        })
    }
}

impl fmt::Display for SeparationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<5} {:>3} {:>3} {:>4} {:>3} {:>6} {:>5} {:>5} {:<10} {:>9} {:>3}",
            "label", "dim", "rad", "rad2", "ss", "center", "radL", "radR", "idem", "unit_rad2", "m2"
        )?;
        for (l, fp) in &self.fingerprints {
            writeln!(
                f,
                "{:<5} {:>3} {:>3} {:>4} {:>3} {:>6} {:>5} {:>5} {:<10} {:>9} {:>3}",
                l.to_string(),
                fp.dim,
                fp.rad_dim,
                fp.rad_sq_dim,
                fp.ss_dim,
                fp.center_dim,
                fp.rad_in_left_ann,
                fp.rad_in_right_ann,
                fmt_opt_set(&fp.idem_trace_set),
                fmt_opt_bool(fp.unit_on_rad_sq),
                fp.is_m2
            )?;
        }
        writeln!(f)?;
        for c in &self.comparisons {
            writeln!(
                f,
                "{} vs {}: {} [{}]",
                c.left,
                c.right,
                if c.distinct { "distinct" } else { "COLLISION" },
                c.differing.join(", ")
            )?;
        }
        writeln!(f)?;
        for c in &self.checks {
            writeln!(f, "{} ({}): {}", c.name, c.field, if c.holds { "ok" } else { "FAILED" })?;
        }
        Ok(())
    }
}

/// Fingerprints of the given catalog entries over Q.
pub fn catalog_fingerprints(labels: &[CanonLabel]) -> Result<Vec<(CanonLabel, Fingerprint)>> {
    labels
        .iter()
        .map(|&l| {
            let d = catalog_entry(l, &FieldDescriptor::Rational);
            fingerprint(d.s()).map(|f| (l, f))
        })
        .collect()
}

/// Compare every pair of `labels` sharing the same `M`; fails on the first collision.
pub fn separate(labels: &[CanonLabel]) -> Result<SeparationReport> {
    let report = separation_report(labels)?;
    if let Some(c) = report.comparisons.iter().find(|c| !c.distinct) {
        return Err(Error::SeparationFailure(c.left, c.right));
    }
    Ok(report)
}

/// All 12 catalog entries: 3 + 10 + 6 comparisons.
pub fn separate_catalog() -> Result<SeparationReport> {
    separate(&CanonLabel::ALL)
}

/// As [`separate`] but collisions are recorded rather than raised.
pub fn separation_report(labels: &[CanonLabel]) -> Result<SeparationReport> {
    let fingerprints = catalog_fingerprints(labels)?;
    let mut comparisons = Vec::new();
    for (i, (l1, f1)) in fingerprints.iter().enumerate() {
        for (l2, f2) in &fingerprints[i + 1..] {
            if l1.m_label() != l2.m_label() {
                continue;
            }
            comparisons.push(PairComparison {
                left: *l1,
                right: *l2,
                distinct: f1.orbit_key() != f2.orbit_key(),
                differing: f1.differing_fields(f2),
            });
        }
    }
    let checks = named_checks(&fingerprints);
    Ok(SeparationReport {
        fingerprints,
        comparisons,
        checks,
    })
}

fn named_checks(fps: &[(CanonLabel, Fingerprint)]) -> Vec<NamedCheck> {
    use CanonLabel::*;
    let get = |l: CanonLabel| fps.iter().find(|(x, _)| *x == l).map(|(_, f)| f);
    let has = |l: CanonLabel| get(l).is_some();
    let idem_has = |l: CanonLabel, r: u8| {
        get(l)
            .and_then(|f| f.idem_trace_set.as_ref())
            .is_some_and(|s| s.contains(&r))
    };
    let mut out = Vec::new();
    let mut push = |name, field, needed: &[CanonLabel], holds: &dyn Fn() -> bool| {
        if needed.iter().all(|&l| has(l)) {
            out.push(NamedCheck {
                name,
                field,
                holds: holds(),
            });
        }
    };
    push(
        "rank-2 idempotent in A2 and A3, not A1",
        "idem_trace_set",
        &[A1, A2, A3],
        &|| !idem_has(A1, 2) && idem_has(A2, 2) && idem_has(A3, 2),
    );
    push("semisimple parts of A2 and A3 differ", "ss_dim", &[A2, A3], &|| {
        get(A2).unwrap().ss_dim != get(A3).unwrap().ss_dim
    });
    push(
        "B4 radical in a one-sided annihilator, B2 radical not",
        "rad_dim+annihilator_flags",
        &[B2, B4],
        &|| {
            let (b2, b4) = (get(B2).unwrap(), get(B4).unwrap());
            b2.rad_dim == b4.rad_dim
                && (b4.rad_in_left_ann || b4.rad_in_right_ann)
                && !(b2.rad_in_left_ann || b2.rad_in_right_ann)
        },
    );
    push(
        "B5 has a unit on rad², B3 does not",
        "unit_on_rad_sq",
        &[B3, B5],
        &|| get(B5).unwrap().unit_on_rad_sq == Some(true) && get(B3).unwrap().unit_on_rad_sq == Some(false),
    );
    let m5b = [B6, B7, B8, B9];
    push("S is M2 only for B7 among B6..B9", "is_m2", &m5b, &|| {
        m5b.iter().all(|&l| get(l).unwrap().is_m2 == (l == B7))
    });
    push(
        "2-dimensional semisimple part only for B9 among B6..B9",
        "ss_dim",
        &m5b,
        &|| m5b.iter().all(|&l| (get(l).unwrap().ss_dim == 2) == (l == B9)),
    );
    push(
        "idempotent ranks of B6 and B8 differ",
        "idem_trace_set",
        &[B6, B8],
        &|| {
            let (b6, b8) = (get(B6).unwrap(), get(B8).unwrap());
            b6.max_idempotent_trace().is_some() && b6.max_idempotent_trace() != b8.max_idempotent_trace()
        },
    );
    out
}

/// Labels sharing the fixed subalgebra `m`.
pub fn labels_for(m: MLabel) -> Vec<CanonLabel> {
    CanonLabel::ALL.into_iter().filter(|l| l.m_label() == m).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autos::{random_preserving, AutoSpec};
    use proptest::prelude::*;
    use CanonLabel::*;

    fn q() -> FieldDescriptor {
        FieldDescriptor::Rational
    }

    fn s_of(l: CanonLabel) -> Subalgebra {
        catalog_entry(l, &q()).s().clone()
    }

    #[test]
    fn idempotent_traces() {
        assert_eq!(idempotent_trace_set(&s_of(A1)).unwrap(), BTreeSet::from([0, 1]));
        assert_eq!(idempotent_trace_set(&s_of(A2)).unwrap(), BTreeSet::from([0, 2]));
        assert_eq!(idempotent_trace_set(&s_of(A3)).unwrap(), BTreeSet::from([0, 1, 2]));
        let b6 = idempotent_trace_set(&s_of(B6)).unwrap();
        let b8 = idempotent_trace_set(&s_of(B8)).unwrap();
        assert_eq!(b6.iter().max(), Some(&1));
        assert_eq!(b8.iter().max(), Some(&2));
    }

    #[test]
    fn unit_on_radical_square() {
        assert!(unit_on_rad_sq(&s_of(B5)).unwrap());
        assert!(!unit_on_rad_sq(&s_of(B3)).unwrap());
        // A1 has rad² = 0
        assert_eq!(s_of(A1).radical_square().unwrap().dim(), 0);
        assert!(!unit_on_rad_sq(&s_of(A1)).unwrap());
    }

    #[test]
    fn fingerprint_examples() {
        let a1 = fingerprint(&s_of(A1)).unwrap();
        assert_eq!((a1.dim, a1.rad_dim, a1.rad_sq_dim, a1.ss_dim), (3, 2, 0, 1));
        assert_eq!(a1.idem_trace_set, Some(BTreeSet::from([0, 1])));
        let b7 = fingerprint(&s_of(B7)).unwrap();
        assert!(b7.is_m2);
        assert!(b7
            .idem_trace_set
            .as_ref()
            .unwrap()
            .is_superset(&BTreeSet::from([0, 1, 2])));
        assert_eq!(fingerprint(&s_of(B9)).unwrap().ss_dim, 2);
    }

    #[test]
    fn catalog_is_separated() {
        let r = separate_catalog().unwrap();
        assert_eq!(r.comparisons.len(), 19);
        assert!(r.all_distinct());
        assert!(r.all_checks_hold(), "{r}");
        assert_eq!(r.checks.len(), 7);
    }

    #[test]
    fn restricted_separations() {
        let r = separate(&[B2, B4]).unwrap();
        assert_eq!(r.comparisons.len(), 1);
        assert!(r.comparisons[0].differing.contains(&"annihilator_flags"));
        let r = separate(&[A2, A3]).unwrap();
        assert!(r.comparisons[0].differing.contains(&"ss_dim"));
    }

    #[test]
    fn prime_field_fingerprint_skips_solver() {
        let f5 = FieldDescriptor::prime(5).unwrap();
        let fp = fingerprint(catalog_entry(B4, &f5).s()).unwrap();
        assert_eq!(fp.idem_trace_set, None);
        assert_eq!(fp.unit_on_rad_sq, None);
        let over_q = fingerprint(&s_of(B4)).unwrap();
        assert_eq!(fp.rad_dim, over_q.rad_dim);
        assert!(matches!(
            idempotent_trace_set(catalog_entry(B4, &f5).s()),
            Err(Error::BadCharacteristic(5))
        ));
    }

    #[test]
    fn invariance_under_scrambles() {
        for l in CanonLabel::ALL {
            let d = catalog_entry(l, &q());
            let base = fingerprint(d.s()).unwrap();
            for seed in 0..4 {
                let a = random_preserving(l.m_label(), seed, &q());
                let img = a.apply_to_decomposition(&d).unwrap();
                assert_eq!(fingerprint(img.s()).unwrap(), base, "{l} seed {seed}");
            }
        }
    }

    #[test]
    fn transpose_swaps_annihilator_flags() {
        let tau = AutoSpec::Composite(vec![AutoSpec::Transpose, AutoSpec::theta(1, 3).unwrap()]);
        for l in [B6, B7, B8, B9] {
            let d = catalog_entry(l, &q());
            let img = tau.apply_to_decomposition(&d).unwrap();
            let (a, b) = (fingerprint(d.s()).unwrap(), fingerprint(img.s()).unwrap());
            assert_eq!(b, a.transposed(), "{l}");
            assert_eq!(a.orbit_key(), b.orbit_key());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn variable_order_does_not_matter(idx in 0usize..12, shift in 1usize..6) {
            let a = s_of(CanonLabel::ALL[idx]);
            let n = a.dim();
            let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
            prop_assert_eq!(
                idempotent_trace_set(&a).unwrap(),
                idempotent_trace_set_permuted(&a, &perm).unwrap()
            );
        }

        #[test]
        fn solver_matches_brute_force_over_fp(
            p in prop::sample::select(vec![2u64, 3, 5, 7]),
            coeffs in prop::collection::vec(prop::collection::vec(-3i64..=3, 10), 1..4),
        ) {
            // each equation: quadratic in x0..x2 with coefficients for
            // 1, x0, x1, x2, x0², x1², x2², x0x1, x0x2, x1x2
            let desc = FieldDescriptor::prime(p).unwrap();
            let n = 3;
            let mons: Vec<Vec<u32>> = vec![
                vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1],
                vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2],
                vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1],
            ];
            let eqs: Vec<Polynomial> = coeffs
                .iter()
                .map(|cs| {
                    Polynomial::from_terms(
                        &desc,
                        n,
                        mons.iter().zip(cs).map(|(m, &c)| (Monomial::from_exponents(m.clone()), desc.from_i64(c))),
                    )
                })
                .collect();
            let sys = PolySystem::new(&desc, vec!["x".into(), "y".into(), "z".into()], eqs.clone())
                .unwrap()
                .restricted_to_prime_field()
                .unwrap();
            let elems = desc.prime_elements().unwrap();
            let mut brute = false;
            'outer: for a in &elems {
                for b in &elems {
                    for c in &elems {
                        let pt = [a.clone(), b.clone(), c.clone()];
                        if eqs.iter().all(|e| e.evaluate(&pt).is_zero()) {
                            brute = true;
                            break 'outer;
                        }
                    }
                }
            }
            prop_assert_eq!(solver::is_consistent_with_budget(&sys, 100_000).unwrap(), brute);
        }
    }
}
