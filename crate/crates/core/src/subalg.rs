//! Subalgebras of `M₃` and nonunital direct decompositions `M₃ = S ⊕ M`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::canonical::CanonLabel;
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldValue};
use crate::linalg::{kernel, Mat3, Subspace};

/// A multiplicatively closed subspace with cached structure constants over its RREF basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subalgebra {
    space: Subspace,
    /// `gamma[i][j][k]`: coefficient of `b_k` in `b_i b_j`.
    gamma: Vec<Vec<Vec<FieldValue>>>,
}

impl Subalgebra {
    /// Build from a spanning list; fails with [`Error::NotClosed`] on the first
    /// basis product that leaves the span.
    pub fn new(desc: &FieldDescriptor, mats: &[Mat3]) -> Result<Self> {
        Subalgebra::from_space(Subspace::span(desc, mats)?)
    }

    pub fn from_space(space: Subspace) -> Result<Self> {
        let basis = space.basis();
        let mut gamma = Vec::with_capacity(basis.len());
        for (i, a) in basis.iter().enumerate() {
            let mut row = Vec::with_capacity(basis.len());
            for (j, b) in basis.iter().enumerate() {
                let prod = a * b;
                match space.coords(&prod) {
                    Some(c) => row.push(c),
                    None => {
                        return Err(Error::NotClosed {
                            left: i,
                            right: j,
                            residual: space.residual(&prod).to_string(),
                            product: prod.to_string(),
                        })
                    }
                }
            }
            gamma.push(row);
        }
        Ok(Subalgebra { space, gamma })
    }

    /// Smallest subalgebra containing `gens`: add products until the span stabilizes.
    pub fn closure(desc: &FieldDescriptor, gens: &[Mat3]) -> Result<Self> {
        let mut space = Subspace::span(desc, gens)?;
        loop {
            let basis = space.basis();
            let mut grown = basis.clone();
            for a in &basis {
                for b in &basis {
                    let p = a * b;
                    if !space.contains(&p) {
                        grown.push(p);
                    }
                }
            }
            if grown.len() == basis.len() {
                break;
            }
            space = Subspace::span(desc, &grown)?;
        }
        Subalgebra::from_space(space)
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        self.space.descriptor()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn basis(&self) -> Vec<Mat3> {
        self.space.basis()
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<FieldValue>>] {
        &self.gamma
    }

    pub fn contains_identity(&self) -> bool {
        self.space.contains(&Mat3::identity(self.descriptor()))
    }

    fn require_radical_char(&self) -> Result<()> {
        match self.descriptor().characteristic() {
            c @ (2 | 3) => Err(Error::BadCharacteristic(c)),
            _ => Ok(()),
        }
    }

    /// Radical as the kernel of the Gram matrix of `(x, y) ↦ Tr(xy)` on the basis.
    ///
    /// Valid for subalgebras of `M₃` in characteristic 0 or > 3; the result is
    /// checked to be a nilpotent two-sided ideal.
    pub fn radical(&self) -> Result<Subspace> {
        self.require_radical_char()?;
        let desc = self.descriptor().clone();
        let basis = self.basis();
        let gram: Vec<Vec<FieldValue>> = basis
            .iter()
            .map(|a| basis.iter().map(|b| (a * b).trace()).collect())
            .collect();
        let rad = self.subspace_from_coords(&kernel(&gram, basis.len(), &desc))?;
        let rb = rad.basis();
        for r in &rb {
            for b in &basis {
                if !rad.contains(&(r * b)) || !rad.contains(&(b * r)) {
                    return Err(Error::Internal(format!("trace-form radical is not an ideal at {r}")));
                }
            }
        }
        for x in &rb {
            for y in &rb {
                for z in &rb {
                    if !(&(x * y) * z).is_zero() {
                        return Err(Error::Internal("trace-form radical is not nilpotent".into()));
                    }
                }
            }
        }
        Ok(rad)
    }

    pub fn semisimple_dim(&self) -> Result<usize> {
        Ok(self.dim() - self.radical()?.dim())
    }

    /// Span of all pairwise products of radical elements.
    pub fn radical_square(&self) -> Result<Subspace> {
        let rad = self.radical()?.basis();
        let prods: Vec<Mat3> = rad.iter().flat_map(|x| rad.iter().map(move |y| x * y)).collect();
        Subspace::span(self.descriptor(), &prods)
    }

    /// `(left, right)` annihilators: `{x : xA = 0}` and `{x : Ax = 0}` inside `A`.
    pub fn annihilators(&self) -> (Subspace, Subspace) {
        let basis = self.basis();
        let left = self.solve_linear(|x| basis.iter().map(|b| x * b).collect());
        let right = self.solve_linear(|x| basis.iter().map(|b| b * x).collect());
        (left, right)
    }

    /// `{x ∈ A : xb = bx for every basis b}`.
    pub fn center(&self) -> Subspace {
        let basis = self.basis();
        self.solve_linear(|x| basis.iter().map(|b| &(x * b) - &(b * x)).collect())
    }

    /// Elements `x = Σ c_i b_i` for which every matrix in `f(x)` vanishes, `f` linear.
    fn solve_linear(&self, f: impl Fn(&Mat3) -> Vec<Mat3>) -> Subspace {
        let desc = self.descriptor().clone();
        let basis = self.basis();
        if basis.is_empty() {
            return Subspace::zero(&desc);
        }
        let images: Vec<Vec<FieldValue>> = basis
            .iter()
            .map(|b| f(b).iter().flat_map(Mat3::to_vec9).collect())
            .collect();
        let eqs: Vec<Vec<FieldValue>> = (0..images[0].len())
            .map(|k| images.iter().map(|col| col[k].clone()).collect())
            .collect();
        self.subspace_from_coords(&kernel(&eqs, basis.len(), &desc))
            .expect("same descriptor")
    }

    fn subspace_from_coords(&self, coords: &[Vec<FieldValue>]) -> Result<Subspace> {
        let mats: Vec<Mat3> = coords.iter().map(|c| self.space.element(c)).collect();
        Subspace::span(self.descriptor(), &mats)
    }

    /// Product of two elements given in basis coordinates, returned in coordinates.
    pub fn multiply_coords(&self, x: &[FieldValue], y: &[FieldValue]) -> Vec<FieldValue> {
        let n = self.dim();
        let desc = self.descriptor();
        let mut out = vec![desc.zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let xy = xi * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    *o = &*o + &(&xy * &self.gamma[i][j][k]);
                }
            }
        }
        out
    }

    pub fn embed_into(&self, target: &FieldDescriptor) -> Result<Subalgebra> {
        Subalgebra::from_space(self.space.embed_into(target)?)
    }
}

/// One of the three fixed large subalgebras the classification is stated against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MLabel {
    M6,
    M5a,
    M5b,
}

impl MLabel {
    pub const ALL: [MLabel; 3] = [MLabel::M6, MLabel::M5a, MLabel::M5b];

    /// The matrix units spanning this subalgebra (1-based indices).
    pub fn units(self) -> &'static [(usize, usize)] {
        match self {
            MLabel::M6 => &[(1, 2), (1, 3), (2, 2), (2, 3), (3, 2), (3, 3)],
            MLabel::M5a => &[(1, 1), (1, 2), (1, 3), (2, 2), (2, 3)],
            MLabel::M5b => &[(1, 1), (1, 2), (1, 3), (2, 3), (3, 3)],
        }
    }

    pub fn subalgebra(self, desc: &FieldDescriptor) -> Subalgebra {
        let mats: Vec<Mat3> = self.units().iter().map(|&(i, j)| Mat3::unit(desc, i, j)).collect();
        Subalgebra::new(desc, &mats).expect("fixed subalgebras are closed")
    }

    pub fn identify(space: &Subspace) -> Option<MLabel> {
        MLabel::ALL
            .into_iter()
            .find(|m| m.subalgebra(space.descriptor()).space() == space)
    }

    pub fn parse(s: &str) -> Result<MLabel> {
        match s {
            "M6" => Ok(MLabel::M6),
            "M5a" => Ok(MLabel::M5a),
            "M5b" => Ok(MLabel::M5b),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

impl fmt::Display for MLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// One failed condition of a would-be decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation")]
pub enum Violation {
    NotComplementary { dim_s: usize, dim_m: usize },
    NotDirect { intersection_dim: usize },
    UnitalS,
    UnitalM,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotComplementary { dim_s, dim_m } => {
                write!(f, "NotComplementary (dim S + dim M = {dim_s} + {dim_m} != 9)")
            }
            Violation::NotDirect { intersection_dim } => {
                write!(f, "NotDirect (dim S ∩ M = {intersection_dim})")
            }
            Violation::UnitalS => write!(f, "UnitalS"),
            Violation::UnitalM => write!(f, "UnitalM"),
        }
    }
}

/// The four-condition check; closure is already guaranteed by [`Subalgebra`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub dim_s: usize,
    pub dim_m: usize,
    pub intersection_dim: usize,
    pub s_contains_identity: bool,
    pub m_contains_identity: bool,
    pub violations: Vec<Violation>,
}

impl DecompositionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for DecompositionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let v: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", v.join(", "))
    }
}

pub fn check_decomposition(s: &Subalgebra, m: &Subalgebra) -> Result<DecompositionReport> {
    let cap = s.space().intersect(m.space())?;
    let mut violations = Vec::new();
    if s.dim() + m.dim() != 9 {
        violations.push(Violation::NotComplementary {
            dim_s: s.dim(),
            dim_m: m.dim(),
        });
    }
    if cap.dim() != 0 {
        violations.push(Violation::NotDirect {
            intersection_dim: cap.dim(),
        });
    }
    let (su, mu) = (s.contains_identity(), m.contains_identity());
    if su {
        violations.push(Violation::UnitalS);
    }
    if mu {
        violations.push(Violation::UnitalM);
    }
    Ok(DecompositionReport {
        dim_s: s.dim(),
        dim_m: m.dim(),
        intersection_dim: cap.dim(),
        s_contains_identity: su,
        m_contains_identity: mu,
        violations,
    })
}

/// A validated nonunital direct decomposition `M₃ = S ⊕ M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    s: Subalgebra,
    m: Subalgebra,
    label_hint: Option<CanonLabel>,
}

pub fn validate_decomposition(s: Subalgebra, m: Subalgebra) -> Result<Decomposition> {
    let report = check_decomposition(&s, &m)?;
    if !report.is_valid() {
        return Err(Error::InvalidDecomposition(report));
    }
    Ok(Decomposition { s, m, label_hint: None })
}

impl Decomposition {
    pub fn s(&self) -> &Subalgebra {
        &self.s
    }

    pub fn m(&self) -> &Subalgebra {
        &self.m
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        self.s.descriptor()
    }

    pub fn label_hint(&self) -> Option<CanonLabel> {
        self.label_hint
    }

    pub fn with_label_hint(mut self, label: Option<CanonLabel>) -> Self {
        self.label_hint = label;
        self
    }

    pub fn m_label(&self) -> Option<MLabel> {
        MLabel::identify(self.m.space())
    }

    /// The same splitting with the halves exchanged.
    pub fn swapped(&self) -> Decomposition {
        Decomposition {
            s: self.m.clone(),
            m: self.s.clone(),
            label_hint: None,
        }
    }

    pub fn embed_into(&self, target: &FieldDescriptor) -> Result<Decomposition> {
        Ok(Decomposition {
            s: self.s.embed_into(target)?,
            m: self.m.embed_into(target)?,
            label_hint: self.label_hint,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldDescriptor {
        FieldDescriptor::Rational
    }

    fn e(i: usize, j: usize) -> Mat3 {
        Mat3::unit(&q(), i, j)
    }

    fn alg(mats: &[Mat3]) -> Subalgebra {
        Subalgebra::new(&q(), mats).unwrap()
    }

    fn span(mats: &[Mat3]) -> Subspace {
        Subspace::span(&q(), mats).unwrap()
    }

    #[test]
    fn make_subalgebra_examples() {
        assert_eq!(alg(&[e(1, 1), e(2, 1), e(3, 1)]).dim(), 3);
        assert_eq!(alg(&[e(1, 2)]).dim(), 1);
        match Subalgebra::new(&q(), &[e(1, 1), e(1, 2), e(2, 1)]) {
            Err(Error::NotClosed { product, .. }) => assert_eq!(product, e(2, 2).to_string()),
            other => panic!("expected NotClosed, got {other:?}"),
        }
    }

    #[test]
    fn closure_examples() {
        let c = Subalgebra::closure(&q(), &[e(1, 2), e(2, 1)]).unwrap();
        assert_eq!(c.space(), &span(&[e(1, 1), e(1, 2), e(2, 1), e(2, 2)]));
        assert_eq!(Subalgebra::closure(&q(), &[e(1, 1)]).unwrap().dim(), 1);
        let n = &e(1, 2) + &e(2, 3);
        let c = Subalgebra::closure(&q(), std::slice::from_ref(&n)).unwrap();
        assert_eq!(c.space(), &span(&[n, e(1, 3)]));
    }

    #[test]
    fn structure_constants_reproduce_products() {
        let a = alg(&[&e(1, 1) + &e(2, 2), &e(2, 1) + &e(2, 2), e(3, 1)]);
        let basis = a.basis();
        for (i, x) in basis.iter().enumerate() {
            for (j, y) in basis.iter().enumerate() {
                assert_eq!(a.space().element(&a.structure_constants()[i][j]), x * y);
            }
        }
    }

    #[test]
    fn identity_containment() {
        assert!(!MLabel::M6.subalgebra(&q()).contains_identity());
        assert!(Subalgebra::from_space(Subspace::full(&q()))
            .unwrap()
            .contains_identity());
        assert!(alg(&[Mat3::identity(&q())]).contains_identity());
    }

    #[test]
    fn validation_examples() {
        let m6 = MLabel::M6.subalgebra(&q());
        assert!(validate_decomposition(alg(&[e(1, 1), e(2, 1), e(3, 1)]), m6.clone()).is_ok());

        let s = alg(&[e(1, 1), e(1, 2), e(2, 1), e(2, 2)]);
        let r = check_decomposition(&s, &m6).unwrap();
        assert!(r.violations.iter().any(|v| matches!(v, Violation::NotDirect { .. })));
        assert!(r.intersection_dim >= 1);

        let r = check_decomposition(&alg(&[Mat3::identity(&q())]), &m6).unwrap();
        assert!(r.violations.contains(&Violation::UnitalS));
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NotComplementary { .. })));
        assert!(matches!(
            validate_decomposition(alg(&[Mat3::identity(&q())]), m6),
            Err(Error::InvalidDecomposition(_))
        ));
    }

    #[test]
    fn radical_examples() {
        let a2 = alg(&[&e(1, 1) + &e(2, 2), e(2, 1), e(3, 1)]);
        assert_eq!(a2.radical().unwrap(), span(&[e(2, 1), e(3, 1)]));
        assert_eq!(a2.semisimple_dim().unwrap(), 1);
        assert_eq!(alg(&[e(1, 1)]).radical().unwrap().dim(), 0);
        let b4 = alg(&[e(2, 1), e(3, 1), &e(3, 2) + &e(2, 3), &e(2, 2) + &e(3, 3)]);
        assert_eq!(b4.radical().unwrap(), span(&[e(2, 1), e(3, 1)]));
    }

    #[test]
    fn radical_rejects_small_characteristic() {
        for p in [2, 3] {
            let f = FieldDescriptor::prime(p).unwrap();
            let a = Subalgebra::new(&f, &[Mat3::unit(&f, 1, 1)]).unwrap();
            assert!(matches!(a.radical(), Err(Error::BadCharacteristic(c)) if c == p));
        }
        let f5 = FieldDescriptor::prime(5).unwrap();
        assert!(Subalgebra::new(&f5, &[Mat3::unit(&f5, 1, 1)])
            .unwrap()
            .radical()
            .is_ok());
    }

    #[test]
    fn annihilator_examples() {
        let b4 = alg(&[e(2, 1), e(3, 1), &e(3, 2) + &e(2, 3), &e(2, 2) + &e(3, 3)]);
        let (left, right) = b4.annihilators();
        let rad = b4.radical().unwrap();
        assert!(rad.is_subspace_of(&left));
        assert!(!rad.is_subspace_of(&right));

        let b2 = alg(&[&e(1, 1) + &e(2, 1), e(3, 1), e(3, 2), e(3, 3)]);
        let (left, right) = b2.annihilators();
        let rad = b2.radical().unwrap();
        assert!(!rad.is_subspace_of(&left));
        assert!(!rad.is_subspace_of(&right));

        let nil = alg(&[e(1, 2)]);
        let (left, right) = nil.annihilators();
        assert_eq!(&left, nil.space());
        assert_eq!(&right, nil.space());
    }

    #[test]
    fn center_examples() {
        let b7 = alg(&[e(2, 1), &e(1, 1) + &e(3, 1), &e(1, 2) + &e(3, 2), e(2, 2)]);
        assert_eq!(b7.center().dim(), 1);
        assert_eq!(b7.radical().unwrap().dim(), 0);
        assert_eq!(alg(&[e(1, 1)]).center().dim(), 1);
        assert_eq!(alg(&[e(1, 1), e(2, 1), e(3, 1)]).center().dim(), 0);
    }

    #[test]
    fn radical_square_examples() {
        let b5 = alg(&[e(2, 1), e(3, 1), e(3, 2), &e(1, 1) + &e(3, 3)]);
        assert_eq!(b5.radical_square().unwrap(), span(&[e(3, 1)]));
        let a1 = alg(&[e(1, 1), e(2, 1), e(3, 1)]);
        assert_eq!(a1.radical_square().unwrap().dim(), 0);
        let b3 = alg(&[e(2, 1), e(3, 1), e(3, 2), &e(2, 2) + &e(3, 3)]);
        assert_eq!(b3.radical_square().unwrap(), span(&[e(3, 1)]));
    }

    #[test]
    fn m_labels_identify_themselves() {
        for m in MLabel::ALL {
            let a = m.subalgebra(&q());
            assert_eq!(MLabel::identify(a.space()), Some(m));
            assert!(!a.contains_identity());
        }
        assert_eq!(MLabel::identify(&span(&[e(1, 1)])), None);
    }
}
