//! The twelve canonical decompositions and the reductions onto them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::autos::{random_preserving, AutoSpec, FamilyM6, FamilyU};
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldValue};
use crate::linalg::{jordanize_idempotent2, jordanize_idempotent_upper3, Mat2, Mat3, Matrix, Subspace};
use crate::subalg::{validate_decomposition, Decomposition, MLabel, Subalgebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CanonLabel {
    A1,
    A2,
    A3,
    B1,
    B2,
    B3,
    B4,
    B5,
    B6,
    B7,
    B8,
    B9,
}

impl CanonLabel {
    pub const ALL: [CanonLabel; 12] = [
        CanonLabel::A1,
        CanonLabel::A2,
        CanonLabel::A3,
        CanonLabel::B1,
        CanonLabel::B2,
        CanonLabel::B3,
        CanonLabel::B4,
        CanonLabel::B5,
        CanonLabel::B6,
        CanonLabel::B7,
        CanonLabel::B8,
        CanonLabel::B9,
    ];

    pub fn m_label(self) -> MLabel {
        use CanonLabel::*;
        match self {
            A1 | A2 | A3 => MLabel::M6,
            B1 | B2 | B3 | B4 | B5 => MLabel::M5a,
            B6 | B7 | B8 | B9 => MLabel::M5b,
        }
    }

    pub fn parse(s: &str) -> Result<CanonLabel> {
        CanonLabel::ALL
            .into_iter()
            .find(|l| l.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }

    /// Sums of matrix units spanning the canonical `S` (1-based indices).
    fn s_units(self) -> &'static [&'static [(usize, usize)]] {
        use CanonLabel::*;
        match self {
            A1 => &[&[(1, 1)], &[(2, 1)], &[(3, 1)]],
            A2 => &[&[(1, 1), (2, 2)], &[(2, 1)], &[(3, 1)]],
            A3 => &[&[(1, 1), (2, 2)], &[(2, 1), (2, 2)], &[(3, 1)]],
            B1 => &[&[(2, 1)], &[(3, 1)], &[(3, 2)], &[(3, 3)]],
            B2 => &[&[(1, 1), (2, 1)], &[(3, 1)], &[(3, 2)], &[(3, 3)]],
            B3 => &[&[(2, 1)], &[(3, 1)], &[(3, 2)], &[(2, 2), (3, 3)]],
            B4 => &[&[(2, 1)], &[(3, 1)], &[(3, 2), (2, 3)], &[(2, 2), (3, 3)]],
            B5 => &[&[(2, 1)], &[(3, 1)], &[(3, 2)], &[(1, 1), (3, 3)]],
            B6 => &[&[(2, 1)], &[(3, 1)], &[(3, 2)], &[(2, 2)]],
            B7 => &[&[(2, 1)], &[(1, 1), (3, 1)], &[(1, 2), (3, 2)], &[(2, 2)]],
            B8 => &[&[(2, 1)], &[(3, 1)], &[(3, 2)], &[(2, 2), (3, 3)]],
            B9 => &[&[(2, 1)], &[(3, 1)], &[(3, 2), (2, 3)], &[(2, 2), (3, 3)]],
        }
    }
}

impl fmt::Display for CanonLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

pub fn catalog_s(label: CanonLabel, desc: &FieldDescriptor) -> Subalgebra {
    let mats: Vec<Mat3> = label.s_units().iter().map(|u| Mat3::units(desc, u)).collect();
    Subalgebra::new(desc, &mats).expect("catalog entries are subalgebras")
}

pub fn catalog_entry(label: CanonLabel, desc: &FieldDescriptor) -> Decomposition {
    validate_decomposition(catalog_s(label, desc), label.m_label().subalgebra(desc))
        .expect("catalog entries are valid decompositions")
        .with_label_hint(Some(label))
}

pub fn catalog(desc: &FieldDescriptor) -> Vec<(CanonLabel, Decomposition)> {
    CanonLabel::ALL
        .into_iter()
        .map(|l| (l, catalog_entry(l, desc)))
        .collect()
}

/// Matrix units outside `m`, in the order the normal basis pivots on them.
fn pivot_units(m: MLabel) -> &'static [(usize, usize)] {
    match m {
        MLabel::M6 => &[(2, 1), (3, 1), (1, 1)],
        MLabel::M5a => &[(2, 1), (3, 1), (3, 2), (3, 3)],
        MLabel::M5b => &[(2, 1), (3, 1), (3, 2), (2, 2)],
    }
}

/// Basis of `S` with `v_k` equal to 1 at the `k`-th pivot unit and 0 at the others.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalBasis {
    m: MLabel,
    vectors: Vec<Mat3>,
}

impl NormalBasis {
    pub fn m_label(&self) -> MLabel {
        self.m
    }

    /// `v_k`, 1-based.
    pub fn v(&self, k: usize) -> &Mat3 {
        &self.vectors[k - 1]
    }

    pub fn vectors(&self) -> &[Mat3] {
        &self.vectors
    }

    /// The vector pivoting on a diagonal unit; always idempotent.
    pub fn idempotent(&self) -> &Mat3 {
        self.vectors.last().expect("nonempty")
    }
}

pub fn normal_basis(s: &Subspace, m: MLabel) -> Result<NormalBasis> {
    let pivots = pivot_units(m);
    if s.dim() != pivots.len() {
        return Err(Error::NotComplement);
    }
    let basis = s.basis();
    let c = Matrix::from_rows(
        basis
            .iter()
            .map(|b| pivots.iter().map(|&(i, j)| b.get(i - 1, j - 1).clone()).collect())
            .collect(),
    );
    let inv = c.inverse().ok_or(Error::NotComplement)?;
    let desc = s.descriptor();
    let vectors: Vec<Mat3> = (0..pivots.len())
        .map(|k| {
            basis
                .iter()
                .enumerate()
                .fold(Mat3::zero(desc), |acc, (i, b)| &acc + &b.scale(inv.get(k, i)))
        })
        .collect();
    let nb = NormalBasis { m, vectors };
    if !nb.idempotent().is_idempotent() {
        return Err(Error::Internal(format!(
            "normalized pivot vector {} of a subalgebra is not idempotent",
            nb.idempotent()
        )));
    }
    Ok(nb)
}

pub fn normalize_basis(d: &Decomposition) -> Result<NormalBasis> {
    let m = d.m_label().ok_or(Error::UnsupportedComplement)?;
    normal_basis(d.s().space(), m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CanonOptions {
    /// Adjoin square roots on demand instead of failing with [`Error::RequiresExtension`].
    pub extend: bool,
}

impl Default for CanonOptions {
    fn default() -> Self {
        CanonOptions { extend: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonResult {
    pub label: CanonLabel,
    /// Applied left to right, these carry the input `S` onto the catalog `S`.
    pub transforms: Vec<AutoSpec>,
    /// `d` when `√d` was adjoined.
    pub extension: Option<FieldValue>,
    pub used_antiauto: bool,
    /// Field the transforms live in.
    pub field: FieldDescriptor,
}

impl CanonResult {
    /// Apply the recorded transforms to `d`, embedded into the result field.
    pub fn replay(&self, d: &Decomposition) -> Result<Decomposition> {
        let mut cur = d.embed_into(&self.field)?;
        for t in &self.transforms {
            cur = t.apply_to_decomposition(&cur)?;
        }
        Ok(cur)
    }

    /// Whether replay lands exactly on the catalog entry.
    pub fn verify(&self, d: &Decomposition) -> Result<bool> {
        let out = self.replay(d)?;
        let target = catalog_entry(self.label, &self.field);
        Ok(out.s().space() == target.s().space() && out.m().space() == target.m().space())
    }
}

struct Run {
    space: Subspace,
    m: MLabel,
    transforms: Vec<AutoSpec>,
    extension: Option<FieldValue>,
    used_antiauto: bool,
    opts: CanonOptions,
}

impl Run {
    fn desc(&self) -> FieldDescriptor {
        self.space.descriptor().clone()
    }

    fn basis(&self) -> Result<NormalBasis> {
        normal_basis(&self.space, self.m)
    }

    fn apply(&mut self, a: AutoSpec) -> Result<()> {
        let desc = self.desc();
        if a.matrix9(&desc)? == Matrix::identity(&desc, 9) {
            return Ok(());
        }
        self.space = a.apply_to_subspace(&self.space)?;
        self.used_antiauto |= a.is_anti();
        self.transforms.push(a);
        Ok(())
    }

    /// A square root of `q`, adjoining it to the field when absent.
    fn sqrt(&mut self, q: &FieldValue) -> Result<FieldValue> {
        if let Some(r) = q.try_sqrt() {
            return Ok(r);
        }
        if !self.opts.extend {
            return Err(Error::RequiresExtension(q.to_string()));
        }
        let target = self.desc().extend_with_sqrt(q)?;
        self.space = self.space.embed_into(&target)?;
        self.transforms = self
            .transforms
            .iter()
            .map(|t| t.embed_into(&target))
            .collect::<Result<_>>()?;
        self.extension = Some(q.clone());
        Ok(target.sqrt_generator().expect("quadratic extension"))
    }

    fn finish(self, label: CanonLabel) -> Result<CanonResult> {
        let desc = self.desc();
        let target = catalog_s(label, &desc);
        if &self.space != target.space() {
            return Err(Error::Internal(format!(
                "reduction to {label} ended at {} instead of {}",
                self.space,
                target.space()
            )));
        }
        Ok(CanonResult {
            label,
            transforms: self.transforms,
            extension: self.extension,
            used_antiauto: self.used_antiauto,
            field: desc,
        })
    }
}

fn start(d: &Decomposition, expected: &[MLabel], opts: CanonOptions) -> Result<Run> {
    let m = d.m_label().ok_or(Error::UnsupportedComplement)?;
    if !expected.contains(&m) {
        return Err(Error::UnsupportedComplement);
    }
    Ok(Run {
        space: d.s().space().clone(),
        m,
        transforms: Vec::new(),
        extension: None,
        used_antiauto: false,
        opts,
    })
}

fn inv_m6(beta: &FieldValue, gamma: &FieldValue, kappa: &FieldValue, nu: &FieldValue) -> Result<AutoSpec> {
    let z = beta.descriptor().zero();
    Ok(AutoSpec::FamilyM6(FamilyM6::new(
        beta.clone(),
        gamma.clone(),
        kappa.clone(),
        z.clone(),
        z,
        nu.clone(),
    )?)
    .inverse())
}

fn inv_u(
    alpha: &FieldValue,
    beta: &FieldValue,
    gamma: &FieldValue,
    delta: &FieldValue,
    eps: &FieldValue,
) -> Result<AutoSpec> {
    Ok(AutoSpec::FamilyU(FamilyU::new(
        alpha.clone(),
        beta.clone(),
        gamma.clone(),
        delta.clone(),
        eps.clone(),
    )?)
    .inverse())
}

/// Dispatch on `M`: [`canonicalize63`] for `M6`, [`canonicalize54`] for `M5a`/`M5b`.
pub fn canonicalize(d: &Decomposition) -> Result<CanonResult> {
    canonicalize_with(d, CanonOptions::default())
}

pub fn canonicalize_with(d: &Decomposition, opts: CanonOptions) -> Result<CanonResult> {
    match d.m_label() {
        Some(MLabel::M6) => canonicalize63_with(d, opts),
        Some(_) => canonicalize54_with(d, opts),
        None => Err(Error::UnsupportedComplement),
    }
}

pub fn canonicalize63(d: &Decomposition) -> Result<CanonResult> {
    canonicalize63_with(d, CanonOptions::default())
}

fn lower_block(v: &Mat3) -> Mat2 {
    [
        [v.get(1, 1).clone(), v.get(1, 2).clone()],
        [v.get(2, 1).clone(), v.get(2, 2).clone()],
    ]
}

pub fn canonicalize63_with(d: &Decomposition, opts: CanonOptions) -> Result<CanonResult> {
    let mut run = start(d, &[MLabel::M6], opts)?;
    let desc = run.desc();
    let (zero, one) = (desc.zero(), desc.one());

    let mut h = lower_block(run.basis()?.v(3));
    let rank = Matrix::from_rows(h.iter().map(|r| r.to_vec()).collect()).rank();
    if rank == 1 && h[0][0].is_zero() {
        // the idempotent sits in the lower corner; swap it up first
        run.apply(AutoSpec::theta(2, 3)?)?;
        h = lower_block(run.basis()?.v(3));
    }
    let jz = jordanize_idempotent2(&h)?;
    let t = Mat3::from_fn(|i, j| match (i, j) {
        (0, 0) => one.clone(),
        (0, _) | (_, 0) => zero.clone(),
        _ => jz.t[i - 1][j - 1].clone(),
    });
    run.apply(AutoSpec::conjugation(t)?)?;

    match rank {
        2 => Err(Error::UnitalContradiction),
        0 => {
            let v3 = run.basis()?.v(3).clone();
            run.apply(
                AutoSpec::FamilyM6(FamilyM6::translation(v3.get(0, 1).clone(), v3.get(0, 2).clone())?).inverse(),
            )?;
            run.finish(CanonLabel::A1)
        }
        _ => {
            let v3 = run.basis()?.v(3).clone();
            if !v3.get(0, 1).is_zero() {
                return Err(Error::Internal(format!("idempotent {v3} has a nonzero (1,2) entry")));
            }
            run.apply(inv_m6(&zero, v3.get(0, 2), &one, &one)?)?;
            let x = run.basis()?.v(2).get(2, 1).clone();
            run.apply(inv_m6(&x, &zero, &one, &one)?)?;
            let nb = run.basis()?;
            let a = nb.v(1).get(0, 1).clone();
            if !a.is_zero() {
                return Err(Error::Internal(format!("expected a = 0 in {}", nb.v(1))));
            }
            let c = nb.v(1).get(1, 1).clone();
            if c.is_zero() {
                run.finish(CanonLabel::A2)
            } else {
                run.apply(inv_m6(&zero, &zero, &c, &one)?)?;
                run.finish(CanonLabel::A3)
            }
        }
    }
}

pub fn canonicalize54(d: &Decomposition) -> Result<CanonResult> {
    canonicalize54_with(d, CanonOptions::default())
}

pub fn canonicalize54_with(d: &Decomposition, opts: CanonOptions) -> Result<CanonResult> {
    let mut run = start(d, &[MLabel::M5a, MLabel::M5b], opts)?;
    let desc = run.desc();
    let (zero, one) = (desc.zero(), desc.one());

    let jz = jordanize_idempotent_upper3(run.basis()?.idempotent())?;
    run.apply(AutoSpec::conjugation(jz.t)?)?;
    let diag: Vec<bool> = (0..3).map(|i| jz.j.get(i, i).is_one()).collect();

    match (run.m, diag[0], diag[1], diag[2]) {
        (_, true, true, true) => Err(Error::UnitalContradiction),
        (MLabel::M5a, false, false, true) => {
            let v1 = run.basis()?.v(1).clone();
            let (a, dd) = (v1.get(0, 0).clone(), v1.get(1, 1).clone());
            let sum = &a + &dd;
            if sum.is_zero() {
                run.apply(inv_u(&one, &dd, &zero, &one, &zero)?)?;
                run.finish(CanonLabel::B1)
            } else {
                run.apply(inv_u(&one, &dd, &zero, &sum, &zero)?)?;
                run.finish(CanonLabel::B2)
            }
        }
        (MLabel::M5a, false, true, true) => {
            let v3 = run.basis()?.v(3).clone();
            square_case(run, v3.get(1, 1).clone(), v3.get(1, 2).clone(), false)
        }
        (MLabel::M5a, true, false, true) => {
            let e = run.basis()?.v(1).get(1, 2).clone();
            run.apply(inv_u(&one, &zero, &e, &one, &zero)?)?;
            run.finish(CanonLabel::B5)
        }
        (MLabel::M5b, false, true, false) => {
            let nb = run.basis()?;
            let (dd, l) = (nb.v(1).get(1, 2).clone(), nb.v(3).get(0, 1).clone());
            let sum = &dd + &l;
            if sum.is_zero() {
                run.apply(inv_u(&one, &zero, &dd, &one, &zero)?)?;
                run.finish(CanonLabel::B6)
            } else {
                run.apply(inv_u(&sum, &zero, &dd, &one, &zero)?)?;
                run.finish(CanonLabel::B7)
            }
        }
        (MLabel::M5b, true, true, false) => {
            // X ↦ Θ13(Xᵀ) preserves M5b and sends e11+e22 to e22+e33
            run.apply(AutoSpec::Composite(vec![AutoSpec::Transpose, AutoSpec::theta(1, 3)?]))?;
            let v3 = run.basis()?.v(3).clone();
            square_case(run, v3.get(2, 2).clone(), v3.get(1, 2).clone(), true)
        }
        (MLabel::M5b, false, true, true) => {
            let v3 = run.basis()?.v(3).clone();
            square_case(run, v3.get(2, 2).clone(), v3.get(1, 2).clone(), true)
        }
        _ => Err(Error::Internal(format!("unexpected diagonal {} for {}", jz.j, run.m))),
    }
}

/// `v3 = e32 + n·(diagonal unit) + p·e23`: complete the square in `p + n²/4`.
fn square_case(mut run: Run, n: FieldValue, p: FieldValue, m5b: bool) -> Result<CanonResult> {
    let desc = run.desc();
    if desc.characteristic() == 2 {
        return Err(Error::BadCharacteristic(2));
    }
    let half = desc.from_ratio(1, 2)?;
    let q = &p + &(&(&n * &n) * &(&half * &half));
    let eps = if m5b { &n * &half } else { -&(&n * &half) };
    let (flat, round) = if m5b {
        (CanonLabel::B8, CanonLabel::B9)
    } else {
        (CanonLabel::B3, CanonLabel::B4)
    };
    if q.is_zero() {
        run.apply(inv_u(&desc.one(), &desc.zero(), &desc.zero(), &desc.one(), &eps)?)?;
        return run.finish(flat);
    }
    let alpha = run.sqrt(&q)?;
    let desc = run.desc();
    let eps = eps.embed_into(&desc)?;
    run.apply(inv_u(&alpha, &desc.zero(), &desc.zero(), &desc.one(), &eps)?)?;
    run.finish(round)
}

/// Catalog entry moved by a random automorphism preserving its `M`.
pub fn scramble(label: CanonLabel, seed: u64) -> (Decomposition, AutoSpec) {
    scramble_in(&FieldDescriptor::Rational, label, seed)
}

pub fn scramble_in(desc: &FieldDescriptor, label: CanonLabel, seed: u64) -> (Decomposition, AutoSpec) {
    let a = random_preserving(label.m_label(), seed, desc);
    let d = a
        .apply_to_decomposition(&catalog_entry(label, desc))
        .expect("M-preserving automorphisms keep decompositions valid")
        .with_label_hint(None);
    (d, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subalg::Subalgebra;
    use CanonLabel::*;

    fn q() -> FieldDescriptor {
        FieldDescriptor::Rational
    }

    fn e(i: usize, j: usize) -> Mat3 {
        Mat3::unit(&q(), i, j)
    }

    fn n(v: i64) -> FieldValue {
        q().from_i64(v)
    }

    fn decomp(s: &[Mat3], m: MLabel) -> Decomposition {
        validate_decomposition(Subalgebra::new(&q(), s).unwrap(), m.subalgebra(&q())).unwrap()
    }

    #[test]
    fn catalog_entries() {
        let cat = catalog(&q());
        assert_eq!(cat.len(), 12);
        for (l, d) in &cat {
            assert_eq!(d.m_label(), Some(l.m_label()));
            assert!(!d.s().contains_identity());
            assert!(!d.m().contains_identity());
        }
        let a3 = catalog_s(A3, &q());
        assert_eq!(
            a3.space(),
            Subspace::span(&q(), &[&e(1, 1) + &e(2, 2), &e(2, 1) + &e(2, 2), e(3, 1)])
                .as_ref()
                .unwrap()
        );
        assert!(catalog_s(B9, &q()).space().contains(&(&e(3, 2) + &e(2, 3))));
        let f2 = FieldDescriptor::prime(2).unwrap();
        assert_eq!(catalog(&f2).len(), 12);
    }

    #[test]
    fn labels_parse_and_display() {
        for l in CanonLabel::ALL {
            assert_eq!(CanonLabel::parse(&l.to_string()).unwrap(), l);
        }
        assert_eq!(CanonLabel::parse("b7").unwrap(), B7);
        assert!(CanonLabel::parse("C1").is_err());
    }

    #[test]
    fn normal_basis_examples() {
        let nb = normalize_basis(&catalog_entry(A1, &q())).unwrap();
        assert_eq!(nb.vectors(), &[e(2, 1), e(3, 1), e(1, 1)]);
        let d = decomp(
            &[&e(1, 1) + &e(1, 3), &e(2, 1) + &e(2, 3), &e(3, 1) + &e(3, 3)],
            MLabel::M6,
        );
        assert_eq!(normalize_basis(&d).unwrap().v(3), &(&e(1, 1) + &e(1, 3)));
        let nb = normalize_basis(&catalog_entry(A2, &q())).unwrap();
        assert_eq!(nb.v(3), &(&e(1, 1) + &e(2, 2)));
        assert_eq!(lower_block(nb.v(3)), [[n(1), n(0)], [n(0), n(0)]]);
    }

    #[test]
    fn normal_basis_ignores_presentation() {
        let d1 = catalog_entry(A3, &q());
        let d2 = decomp(
            &[
                &(&e(1, 1) + &e(2, 2)) + &e(3, 1).scale(&n(5)),
                &e(2, 1) - &e(1, 1),
                e(3, 1).scale(&n(-2)),
            ],
            MLabel::M6,
        );
        assert_eq!(normalize_basis(&d1).unwrap(), normalize_basis(&d2).unwrap());
    }

    #[test]
    fn catalog_is_fixed() {
        for (l, d) in catalog(&q()) {
            let r = canonicalize(&d).unwrap();
            assert_eq!(r.label, l);
            assert!(r.transforms.is_empty(), "{l}: {:?}", r.transforms);
            assert!(!r.used_antiauto);
            assert_eq!(r.extension, None);
        }
    }

    #[test]
    fn theta_image_of_a2() {
        let d = decomp(&[&e(1, 1) + &e(3, 3), e(2, 1), e(3, 1)], MLabel::M6);
        let r = canonicalize63(&d).unwrap();
        assert_eq!(r.label, A2);
        assert_eq!(r.transforms.first(), Some(&AutoSpec::ThetaSwap(2, 3)));
        assert!(r.verify(&d).unwrap());
    }

    #[test]
    fn scrambled_a3_round_trips() {
        let (d, _) = scramble(A3, 42);
        let r = canonicalize63(&d).unwrap();
        assert_eq!(r.label, A3);
        assert!(r.verify(&d).unwrap());
    }

    #[test]
    fn square_completion_flat_case() {
        // v3 = e32 + e22 − e23/4, so p + n²/4 = 0
        let v3 = &(&e(3, 2) + &e(2, 2)) - &e(2, 3).scale(&q().from_ratio(1, 4).unwrap());
        let d = decomp(&[e(2, 1), e(3, 1), v3, &e(2, 2) + &e(3, 3)], MLabel::M5a);
        let r = canonicalize54(&d).unwrap();
        assert_eq!(r.label, B3);
        assert!(r.verify(&d).unwrap());
    }

    #[test]
    fn square_completion_needs_sqrt2() {
        let v3 = &e(3, 2) + &e(2, 3).scale(&n(2));
        let d = decomp(&[e(2, 1), e(3, 1), v3, &e(2, 2) + &e(3, 3)], MLabel::M5a);
        let r = canonicalize54(&d).unwrap();
        assert_eq!(r.label, B4);
        assert_eq!(r.extension, Some(n(2)));
        assert_eq!(r.field, q().extend_with_sqrt(&n(2)).unwrap());
        assert!(r.verify(&d).unwrap());
        assert!(matches!(
            canonicalize54_with(&d, CanonOptions { extend: false }),
            Err(Error::RequiresExtension(_))
        ));
    }

    #[test]
    fn case_three_prime_uses_antiautomorphism() {
        let (d, _) = scramble(B9, 3);
        let tau = AutoSpec::Composite(vec![AutoSpec::Transpose, AutoSpec::theta(1, 3).unwrap()]);
        let flipped = tau.apply_to_decomposition(&d).unwrap();
        let r = canonicalize54(&flipped).unwrap();
        assert_eq!(r.label, B9);
        assert!(r.verify(&flipped).unwrap());
    }

    #[test]
    fn rejects_wrong_complement() {
        let d = catalog_entry(B1, &q());
        assert!(matches!(canonicalize63(&d), Err(Error::UnsupportedComplement)));
        let d = catalog_entry(A1, &q());
        assert!(matches!(canonicalize54(&d), Err(Error::UnsupportedComplement)));
    }

    #[test]
    fn char_two_rejects_square_cases() {
        let f2 = FieldDescriptor::prime(2).unwrap();
        assert!(matches!(
            canonicalize(&catalog_entry(B3, &f2)),
            Err(Error::BadCharacteristic(2))
        ));
        assert_eq!(canonicalize(&catalog_entry(B1, &f2)).unwrap().label, B1);
    }

    #[test]
    fn scramble_is_deterministic() {
        let (a, sa) = scramble(B7, 5);
        let (b, sb) = scramble(B7, 5);
        assert_eq!(a.s().space(), b.s().space());
        assert_eq!(sa, sb);
        assert_eq!(a.m_label(), Some(MLabel::M5b));
    }

    #[test]
    fn round_trip_all_labels() {
        for l in CanonLabel::ALL {
            for seed in 0..10 {
                let (d, _) = scramble(l, seed);
                let r = canonicalize(&d).unwrap_or_else(|err| panic!("{l} seed {seed}: {err}"));
                assert_eq!(r.label, l, "seed {seed}");
                assert!(r.verify(&d).unwrap(), "{l} seed {seed}");
            }
        }
    }
}
