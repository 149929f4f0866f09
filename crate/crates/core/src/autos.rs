//! Automorphisms and antiautomorphisms of `M₃` as symbolic, applicable transforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldValue};
use crate::linalg::{Mat3, Matrix, Subspace};
use crate::subalg::{validate_decomposition, Decomposition, MLabel, Subalgebra};

/// Parameters of the six-parameter family preserving `M6`; requires `κν − λμ ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyM6 {
    beta: FieldValue,
    gamma: FieldValue,
    kappa: FieldValue,
    lambda: FieldValue,
    mu: FieldValue,
    nu: FieldValue,
}

impl FamilyM6 {
    pub fn new(
        beta: FieldValue,
        gamma: FieldValue,
        kappa: FieldValue,
        lambda: FieldValue,
        mu: FieldValue,
        nu: FieldValue,
    ) -> Result<Self> {
        let fam = FamilyM6 {
            beta,
            gamma,
            kappa,
            lambda,
            mu,
            nu,
        };
        let desc = fam.beta.descriptor();
        for v in fam.params() {
            if v.descriptor() != desc {
                return Err(Error::mismatch(&desc, v.descriptor()));
            }
        }
        if fam.delta().is_zero() {
            return Err(Error::DegenerateAutomorphism("kappa*nu - lambda*mu must be nonzero"));
        }
        Ok(fam)
    }

    /// `κ = ν = 1`, `λ = μ = 0` with the given `β, γ`.
    pub fn translation(beta: FieldValue, gamma: FieldValue) -> Result<Self> {
        let desc = beta.descriptor();
        FamilyM6::new(beta, gamma, desc.one(), desc.zero(), desc.zero(), desc.one())
    }

    pub fn identity(desc: &FieldDescriptor) -> Self {
        FamilyM6::translation(desc.zero(), desc.zero()).expect("Δ = 1")
    }

    /// `[β, γ, κ, λ, μ, ν]`
    pub fn params(&self) -> [&FieldValue; 6] {
        [&self.beta, &self.gamma, &self.kappa, &self.lambda, &self.mu, &self.nu]
    }

    pub fn delta(&self) -> FieldValue {
        &(&self.kappa * &self.nu) - &(&self.lambda * &self.mu)
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.beta.descriptor()
    }

    /// Image of `e_ij` (1-based).
    pub fn image(&self, i: usize, j: usize) -> Mat3 {
        let desc = self.descriptor();
        let (b, g, k, l, m, n) = (&self.beta, &self.gamma, &self.kappa, &self.lambda, &self.mu, &self.nu);
        let z = desc.zero();
        let d = self.delta();
        let over = |rows: [[FieldValue; 3]; 3]| {
            Mat3::from_rows(rows)
                .expect("same field")
                .scale(&d.try_inv().expect("Δ ≠ 0"))
        };
        // γμ − βν and βλ − γκ recur throughout the table
        let p = &(g * m) - &(b * n);
        let s = &(b * l) - &(g * k);
        match (i, j) {
            (1, 1) => Mat3::from_rows([
                [desc.one(), b.clone(), g.clone()],
                [z.clone(), z.clone(), z.clone()],
                [z.clone(), z.clone(), z],
            ])
            .unwrap(),
            (1, 2) => Mat3::from_rows([
                [z.clone(), k.clone(), l.clone()],
                [z.clone(), z.clone(), z.clone()],
                [z.clone(), z.clone(), z],
            ])
            .unwrap(),
            (1, 3) => Mat3::from_rows([
                [z.clone(), m.clone(), n.clone()],
                [z.clone(), z.clone(), z.clone()],
                [z.clone(), z.clone(), z],
            ])
            .unwrap(),
            (2, 2) => over([
                [z.clone(), k * &p, l * &p],
                [z.clone(), k * n, l * n],
                [z, -&(k * m), -&(l * m)],
            ]),
            (2, 3) => over([
                [z.clone(), m * &p, n * &p],
                [z.clone(), m * n, n * n],
                [z, -&(m * m), -&(m * n)],
            ]),
            (3, 2) => over([
                [z.clone(), k * &s, l * &s],
                [z.clone(), -&(k * l), -&(l * l)],
                [z, k * k, k * l],
            ]),
            (3, 3) => over([
                [z.clone(), m * &s, n * &s],
                [z.clone(), -&(l * m), -&(l * n)],
                [z, k * m, k * n],
            ]),
            (2, 1) => over([
                [p.clone(), b * &p, g * &p],
                [n.clone(), b * n, g * n],
                [-m, -&(b * m), -&(g * m)],
            ]),
            (3, 1) => over([
                [s.clone(), b * &s, g * &s],
                [-l, -&(b * l), -&(g * l)],
                [k.clone(), b * k, g * k],
            ]),
            _ => panic!("e_{i}{j} out of range"),
        }
    }
}

/// Parameters of the five-parameter family preserving `M5a` and `M5b`; requires `α, δ ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyU {
    alpha: FieldValue,
    beta: FieldValue,
    gamma: FieldValue,
    delta: FieldValue,
    epsilon: FieldValue,
}

impl FamilyU {
    pub fn new(
        alpha: FieldValue,
        beta: FieldValue,
        gamma: FieldValue,
        delta: FieldValue,
        epsilon: FieldValue,
    ) -> Result<Self> {
        let fam = FamilyU {
            alpha,
            beta,
            gamma,
            delta,
            epsilon,
        };
        let desc = fam.alpha.descriptor();
        for v in fam.params() {
            if v.descriptor() != desc {
                return Err(Error::mismatch(&desc, v.descriptor()));
            }
        }
        if fam.alpha.is_zero() || fam.delta.is_zero() {
            return Err(Error::DegenerateAutomorphism("alpha and delta must be nonzero"));
        }
        Ok(fam)
    }

    pub fn identity(desc: &FieldDescriptor) -> Self {
        FamilyU::new(desc.one(), desc.zero(), desc.zero(), desc.one(), desc.zero()).expect("α = δ = 1")
    }

    /// `[α, β, γ, δ, ε]`
    pub fn params(&self) -> [&FieldValue; 5] {
        [&self.alpha, &self.beta, &self.gamma, &self.delta, &self.epsilon]
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.alpha.descriptor()
    }

    /// The same map written as a member of the `M6` family (`κ = δ, λ = ε, μ = 0, ν = α`).
    pub fn as_family_m6(&self) -> FamilyM6 {
        FamilyM6::new(
            self.beta.clone(),
            self.gamma.clone(),
            self.delta.clone(),
            self.epsilon.clone(),
            self.descriptor().zero(),
            self.alpha.clone(),
        )
        .expect("αδ ≠ 0")
    }

    /// Image of `e_ij` (1-based).
    pub fn image(&self, i: usize, j: usize) -> Mat3 {
        let desc = self.descriptor();
        let (a, b, g, d, e) = (&self.alpha, &self.beta, &self.gamma, &self.delta, &self.epsilon);
        let z = || desc.zero();
        let one = desc.one();
        let inv_d = d.try_inv().expect("δ ≠ 0");
        let inv_a = a.try_inv().expect("α ≠ 0");
        let mk = |rows: [[FieldValue; 3]; 3]| Mat3::from_rows(rows).expect("same field");
        let e_over_d = e * &inv_d;
        // βε − γδ
        let w = &(b * e) - &(g * d);
        match (i, j) {
            (1, 1) => mk([[one, b.clone(), g.clone()], [z(), z(), z()], [z(), z(), z()]]),
            (1, 2) => mk([[z(), d.clone(), e.clone()], [z(), z(), z()], [z(), z(), z()]]),
            (1, 3) => mk([[z(), z(), a.clone()], [z(), z(), z()], [z(), z(), z()]]),
            (2, 1) => mk([[-b, -&(b * b), -&(b * g)], [one, b.clone(), g.clone()], [z(), z(), z()]]).scale(&inv_d),
            (2, 2) => mk([
                [z(), -b, -&(b * &e_over_d)],
                [z(), one, e_over_d.clone()],
                [z(), z(), z()],
            ]),
            (2, 3) => mk([[z(), z(), -&(a * b)], [z(), z(), a.clone()], [z(), z(), z()]]).scale(&inv_d),
            (3, 1) => mk([
                [w.clone(), b * &w, g * &w],
                [-e, -&(b * e), -&(g * e)],
                [d.clone(), b * d, g * d],
            ])
            .scale(&(&inv_a * &inv_d)),
            (3, 2) => mk([
                [z(), w.clone(), &(e * &w) * &inv_d],
                [z(), -e, -&(&(e * e) * &inv_d)],
                [z(), d.clone(), e.clone()],
            ])
            .scale(&inv_a),
            (3, 3) => mk([
                [z(), z(), &(b * &e_over_d) - g],
                [z(), z(), -&e_over_d],
                [z(), z(), one],
            ]),
            _ => panic!("e_{i}{j} out of range"),
        }
    }
}

/// A symbolic (anti)automorphism of `M₃`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AutoSpec {
    /// `X ↦ T⁻¹ X T`
    Conjugation(Mat3),
    /// `X ↦ Xᵀ` (antiautomorphism)
    Transpose,
    /// Conjugation by the permutation matrix swapping indices `i < j` (1-based).
    ThetaSwap(usize, usize),
    FamilyM6(FamilyM6),
    FamilyU(FamilyU),
    /// Applied left to right.
    Composite(Vec<AutoSpec>),
    /// Inverse of the wrapped map, computed as a 9×9 linear inverse.
    Inverse(Box<AutoSpec>),
}

impl AutoSpec {
    pub fn theta(i: usize, j: usize) -> Result<AutoSpec> {
        if !(1..=3).contains(&i) || !(1..=3).contains(&j) || i >= j {
            return Err(Error::InvalidAutomorphism(format!(
                "theta swap needs 1 <= i < j <= 3, got ({i}, {j})"
            )));
        }
        Ok(AutoSpec::ThetaSwap(i, j))
    }

    pub fn conjugation(t: Mat3) -> Result<AutoSpec> {
        if t.determinant().is_zero() {
            return Err(Error::SingularConjugator);
        }
        Ok(AutoSpec::Conjugation(t))
    }

    pub fn inverse(self) -> AutoSpec {
        match self {
            AutoSpec::Inverse(inner) => *inner,
            other => AutoSpec::Inverse(Box::new(other)),
        }
    }

    /// True for antiautomorphisms (an odd number of transposes).
    pub fn is_anti(&self) -> bool {
        match self {
            AutoSpec::Transpose => true,
            AutoSpec::Composite(parts) => parts.iter().filter(|p| p.is_anti()).count() % 2 == 1,
            AutoSpec::Inverse(inner) => inner.is_anti(),
            _ => false,
        }
    }

    /// Field the parameters live in, if any.
    pub fn descriptor(&self) -> Option<FieldDescriptor> {
        match self {
            AutoSpec::Conjugation(t) => Some(t.descriptor()),
            AutoSpec::FamilyM6(f) => Some(f.descriptor()),
            AutoSpec::FamilyU(f) => Some(f.descriptor()),
            AutoSpec::Composite(parts) => parts.iter().find_map(AutoSpec::descriptor),
            AutoSpec::Inverse(inner) => inner.descriptor(),
            AutoSpec::Transpose | AutoSpec::ThetaSwap(..) => None,
        }
    }

    pub fn apply(&self, x: &Mat3) -> Result<Mat3> {
        let desc = x.descriptor();
        if let Some(own) = self.descriptor() {
            if own != desc {
                return Err(Error::mismatch(own, desc));
            }
        }
        match self {
            AutoSpec::Conjugation(t) => {
                let inv = t.inverse().ok_or(Error::SingularConjugator)?;
                Ok(&(&inv * x) * t)
            }
            AutoSpec::Transpose => Ok(x.transpose()),
            AutoSpec::ThetaSwap(i, j) => {
                let swap = |k: usize| {
                    if k + 1 == *i {
                        j - 1
                    } else if k + 1 == *j {
                        i - 1
                    } else {
                        k
                    }
                };
                Ok(Mat3::from_fn(|r, c| x.get(swap(r), swap(c)).clone()))
            }
            AutoSpec::FamilyM6(f) => Ok(linear_extension(x, |i, j| f.image(i, j))),
            AutoSpec::FamilyU(f) => Ok(linear_extension(x, |i, j| f.image(i, j))),
            AutoSpec::Composite(parts) => parts.iter().try_fold(x.clone(), |acc, p| p.apply(&acc)),
            AutoSpec::Inverse(inner) => {
                let inv = inner
                    .matrix9(&desc)?
                    .inverse()
                    .ok_or_else(|| Error::InvalidAutomorphism("map is not invertible".into()))?;
                Ok(Mat3::from_vec9(&inv.apply(&x.to_vec9())))
            }
        }
    }

    /// The 9×9 matrix acting on vectorized `M₃`; column `k` is the image of the `k`-th unit.
    pub fn matrix9(&self, desc: &FieldDescriptor) -> Result<Matrix> {
        let cols = units(desc)
            .iter()
            .map(|u| self.apply(u).map(|m| m.to_vec9()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(&cols))
    }

    /// Multiplicative (or anti-multiplicative) on all 81 unit pairs and bijective.
    pub fn is_algebra_map(&self, desc: &FieldDescriptor) -> bool {
        let Ok(mat) = self.matrix9(desc) else {
            return false;
        };
        if mat.rank() != 9 {
            return false;
        }
        let us = units(desc);
        let images: Vec<Mat3> = (0..9).map(|k| Mat3::from_vec9(&mat.column(k))).collect();
        let anti = self.is_anti();
        for (a, ia) in us.iter().zip(&images) {
            for (b, ib) in us.iter().zip(&images) {
                let lhs = Mat3::from_vec9(&mat.apply(&(a * b).to_vec9()));
                let rhs = if anti { ib * ia } else { ia * ib };
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    pub fn preserves(&self, space: &Subspace) -> bool {
        space
            .basis()
            .iter()
            .all(|b| self.apply(b).map(|img| space.contains(&img)).unwrap_or(false))
    }

    pub fn apply_to_subspace(&self, space: &Subspace) -> Result<Subspace> {
        space.map(|b| self.apply(b))
    }

    pub fn apply_to_subalgebra(&self, a: &Subalgebra) -> Result<Subalgebra> {
        Subalgebra::from_space(self.apply_to_subspace(a.space())?)
    }

    /// Map both halves; (anti)automorphisms keep directness and nonunitality,
    /// so a failed revalidation is reported as an internal error.
    pub fn apply_to_decomposition(&self, d: &Decomposition) -> Result<Decomposition> {
        let s = self.apply_to_subalgebra(d.s())?;
        let m = self.apply_to_subalgebra(d.m())?;
        validate_decomposition(s, m).map_err(|e| Error::Internal(format!("automorphism image failed validation: {e}")))
    }

    /// The same map with all parameters embedded into `target`.
    pub fn embed_into(&self, target: &FieldDescriptor) -> Result<AutoSpec> {
        let e = |v: &FieldValue| v.embed_into(target);
        Ok(match self {
            AutoSpec::Conjugation(t) => AutoSpec::Conjugation(t.embed_into(target)?),
            AutoSpec::Transpose => AutoSpec::Transpose,
            AutoSpec::ThetaSwap(i, j) => AutoSpec::ThetaSwap(*i, *j),
            AutoSpec::FamilyM6(f) => AutoSpec::FamilyM6(FamilyM6::new(
                e(&f.beta)?,
                e(&f.gamma)?,
                e(&f.kappa)?,
                e(&f.lambda)?,
                e(&f.mu)?,
                e(&f.nu)?,
            )?),
            AutoSpec::FamilyU(f) => AutoSpec::FamilyU(FamilyU::new(
                e(&f.alpha)?,
                e(&f.beta)?,
                e(&f.gamma)?,
                e(&f.delta)?,
                e(&f.epsilon)?,
            )?),
            AutoSpec::Composite(parts) => {
                AutoSpec::Composite(parts.iter().map(|p| p.embed_into(target)).collect::<Result<_>>()?)
            }
            AutoSpec::Inverse(inner) => AutoSpec::Inverse(Box::new(inner.embed_into(target)?)),
        })
    }
}

fn units(desc: &FieldDescriptor) -> Vec<Mat3> {
    (1..=3)
        .flat_map(|i| (1..=3).map(move |j| (i, j)))
        .map(|(i, j)| Mat3::unit(desc, i, j))
        .collect()
}

fn linear_extension(x: &Mat3, image: impl Fn(usize, usize) -> Mat3) -> Mat3 {
    let desc = x.descriptor();
    let mut acc = Mat3::zero(&desc);
    for i in 0..3 {
        for j in 0..3 {
            let c = x.get(i, j);
            if !c.is_zero() {
                acc = &acc + &image(i + 1, j + 1).scale(c);
            }
        }
    }
    acc
}

/// Draw a random automorphism preserving `m`, deterministic in `seed`.
///
/// Parameters come from `[-3, 3]` over characteristic 0 and from all residues
/// over a prime field. `M6` draws are sometimes composed with `Θ23`.
pub fn random_preserving(m: MLabel, seed: u64, desc: &FieldDescriptor) -> AutoSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> FieldValue {
        match desc.order() {
            Some(q) if q <= 1 << 20 && matches!(desc, FieldDescriptor::Prime(_)) => {
                desc.from_i64(rng.random_range(0..q as i64))
            }
            _ => desc.from_i64(rng.random_range(-3..=3)),
        }
    };
    match m {
        MLabel::M6 => {
            let fam = loop {
                let p: Vec<FieldValue> = (0..6).map(|_| draw(&mut rng)).collect();
                if let Ok(f) = FamilyM6::new(
                    p[0].clone(),
                    p[1].clone(),
                    p[2].clone(),
                    p[3].clone(),
                    p[4].clone(),
                    p[5].clone(),
                ) {
                    break f;
                }
            };
            let theta = AutoSpec::ThetaSwap(2, 3);
            match rng.random_range(0..3) {
                0 => AutoSpec::FamilyM6(fam),
                1 => AutoSpec::Composite(vec![theta, AutoSpec::FamilyM6(fam)]),
                _ => AutoSpec::Composite(vec![AutoSpec::FamilyM6(fam), theta]),
            }
        }
        MLabel::M5a | MLabel::M5b => loop {
            let p: Vec<FieldValue> = (0..5).map(|_| draw(&mut rng)).collect();
            if let Ok(f) = FamilyU::new(p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone(), p[4].clone()) {
                break AutoSpec::FamilyU(f);
            }
        },
    }
}
