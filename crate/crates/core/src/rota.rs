//! Rota–Baxter operators of nonzero weight induced by direct splittings.
//!
//! Convention: `R(x)R(y) = R(R(x)y + xR(y) + λxy)`. The splitting `A = S ⊕ M`
//! gives `R(s + m) = −λs`.

use crate::autos::AutoSpec;
use crate::canonical::{catalog_entry, CanonLabel};
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldValue};
use crate::linalg::{kernel, Mat3, Matrix, Subspace};
use crate::subalg::Decomposition;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RBOperator {
    /// Action on vectorized `M₃` (row-major units).
    pub matrix: Matrix,
    pub weight: FieldValue,
    pub source: Option<CanonLabel>,
}

fn units(desc: &FieldDescriptor) -> Vec<Mat3> {
    (1..=3)
        .flat_map(|i| (1..=3).map(move |j| (i, j)))
        .map(|(i, j)| Mat3::unit(desc, i, j))
        .collect()
}

impl RBOperator {
    pub fn new(matrix: Matrix, weight: FieldValue, source: Option<CanonLabel>) -> Result<Self> {
        if matrix.nrows() != 9 || matrix.ncols() != 9 {
            return Err(Error::InvalidSystem(format!(
                "operator matrix must be 9x9, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if weight.is_zero() {
            return Err(Error::ZeroWeight);
        }
        Ok(RBOperator { matrix, weight, source })
    }

    pub fn zero(weight: FieldValue) -> Result<Self> {
        let desc = weight.descriptor();
        RBOperator::new(Matrix::identity(&desc, 9).scale(&desc.zero()), weight, None)
    }

    pub fn identity(weight: FieldValue) -> Result<Self> {
        let desc = weight.descriptor();
        RBOperator::new(Matrix::identity(&desc, 9), weight, None)
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.weight.descriptor()
    }

    pub fn apply(&self, x: &Mat3) -> Mat3 {
        Mat3::from_vec9(&self.matrix.apply(&x.to_vec9()))
    }

    pub fn kernel(&self) -> Result<Subspace> {
        let desc = self.descriptor();
        let vecs = kernel(self.matrix.rows(), 9, &desc);
        let mats: Vec<Mat3> = vecs.iter().map(|v| Mat3::from_vec9(v)).collect();
        Subspace::span(&desc, &mats)
    }

    pub fn image(&self) -> Result<Subspace> {
        let desc = self.descriptor();
        let mats: Vec<Mat3> = (0..9).map(|k| Mat3::from_vec9(&self.matrix.column(k))).collect();
        Subspace::span(&desc, &mats)
    }

    /// `R² = −λR`.
    pub fn is_projection_type(&self) -> bool {
        self.matrix.mul(&self.matrix) == self.matrix.scale(&-&self.weight)
    }
}

/// `R = −λ·P`, `P` the projection onto `S` along `M`.
pub fn rb_from_splitting(d: &Decomposition, weight: &FieldValue) -> Result<RBOperator> {
    if weight.is_zero() {
        return Err(Error::ZeroWeight);
    }
    let desc = d.descriptor().clone();
    if weight.descriptor() != desc {
        return Err(Error::mismatch(weight.descriptor(), &desc));
    }
    let s = d.s().basis();
    let m = d.m().basis();
    let cols: Vec<Vec<FieldValue>> = s.iter().chain(&m).map(Mat3::to_vec9).collect();
    let b = Matrix::from_columns(&cols);
    let b_inv = b
        .inverse()
        .ok_or_else(|| Error::Internal("splitting basis is singular".into()))?;
    let keep = Matrix::from_rows(
        (0..9)
            .map(|r| {
                (0..9)
                    .map(|c| if r == c && r < s.len() { desc.one() } else { desc.zero() })
                    .collect()
            })
            .collect(),
    );
    let proj = b.mul(&keep).mul(&b_inv);
    RBOperator::new(proj.scale(&-weight), weight.clone(), d.label_hint())
}

/// The identity on all 81 ordered pairs of matrix units.
pub fn verify_rb(r: &RBOperator) -> bool {
    rb_violations(r).is_empty()
}

/// Unit pairs `(x, y)` (1-based `(i, j, k, l)`) where the identity fails.
pub fn rb_violations(r: &RBOperator) -> Vec<(usize, usize, usize, usize)> {
    let desc = r.descriptor();
    let us = units(&desc);
    let images: Vec<Mat3> = us.iter().map(|u| r.apply(u)).collect();
    (0..81)
        .filter(|&n| {
            let (a, b) = (n / 9, n % 9);
            let (x, y) = (&us[a], &us[b]);
            let (rx, ry) = (&images[a], &images[b]);
            let lhs = rx * ry;
            let inner = &(&(rx * y) + &(x * ry)) + &(x * y).scale(&r.weight);
            lhs != r.apply(&inner)
        })
        .map(|n| (n / 27 + 1, (n / 9) % 3 + 1, (n % 9) / 3 + 1, n % 3 + 1))
        .collect()
}

/// `−λ·id − R`, the operator of the swapped splitting.
pub fn complementary_rb(r: &RBOperator) -> RBOperator {
    let desc = r.descriptor();
    let matrix = Matrix::identity(&desc, 9)
        .scale(&-&r.weight)
        .add(&r.matrix.scale(&-desc.one()));
    RBOperator {
        matrix,
        weight: r.weight.clone(),
        source: r.source,
    }
}

/// Operator transported along an automorphism: `Φ R Φ⁻¹`.
pub fn conjugate_rb(r: &RBOperator, phi: &AutoSpec) -> Result<RBOperator> {
    let desc = r.descriptor();
    let m = phi.matrix9(&desc)?;
    let inv = m
        .inverse()
        .ok_or_else(|| Error::InvalidAutomorphism("map is not invertible".into()))?;
    Ok(RBOperator {
        matrix: m.mul(&r.matrix).mul(&inv),
        weight: r.weight.clone(),
        source: None,
    })
}

/// Operators of all 12 catalog splittings for one weight.
pub fn catalog_operators(weight: &FieldValue) -> Result<Vec<RBOperator>> {
    let desc = weight.descriptor();
    CanonLabel::ALL
        .iter()
        .map(|&l| rb_from_splitting(&catalog_entry(l, &desc), weight))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autos::random_preserving;
    use CanonLabel::*;

    fn q() -> FieldDescriptor {
        FieldDescriptor::Rational
    }

    fn e(i: usize, j: usize) -> Mat3 {
        Mat3::unit(&q(), i, j)
    }

    fn one() -> FieldValue {
        q().one()
    }

    #[test]
    fn a1_values() {
        let r = rb_from_splitting(&catalog_entry(A1, &q()), &one()).unwrap();
        assert_eq!(r.apply(&e(1, 1)), e(1, 1).scale(&-one()));
        assert!(r.apply(&e(1, 2)).is_zero());
        assert_eq!(r.apply(&(&e(1, 1) + &e(1, 2))), e(1, 1).scale(&-one()));
        assert_eq!(r.source, Some(A1));
        assert!(verify_rb(&r));
    }

    #[test]
    fn b4_values() {
        let r = rb_from_splitting(&catalog_entry(B4, &q()), &one()).unwrap();
        assert!(r.apply(&e(2, 3)).is_zero());
        assert_eq!(r.apply(&e(3, 2)), (&e(3, 2) + &e(2, 3)).scale(&-one()));
    }

    #[test]
    fn trivial_operators() {
        assert!(verify_rb(&RBOperator::zero(one()).unwrap()));
        let id = RBOperator::identity(one()).unwrap();
        assert!(!verify_rb(&id));
        assert!(rb_violations(&id).contains(&(1, 1, 1, 1)));
        assert!(matches!(RBOperator::zero(q().zero()), Err(Error::ZeroWeight)));
        assert!(matches!(
            rb_from_splitting(&catalog_entry(A1, &q()), &q().zero()),
            Err(Error::ZeroWeight)
        ));
    }

    #[test]
    fn complementary_operator() {
        let d = catalog_entry(A1, &q());
        let r = rb_from_splitting(&d, &one()).unwrap();
        let c = complementary_rb(&r);
        assert_eq!(c.apply(&e(1, 2)), e(1, 2).scale(&-one()));
        assert!(c.apply(&e(1, 1)).is_zero());
        assert_eq!(complementary_rb(&c), r);
        let swapped = rb_from_splitting(&d.swapped(), &one()).unwrap();
        assert_eq!(swapped.matrix, c.matrix);
    }

    #[test]
    fn catalog_operators_hold() {
        for w in [1, 5] {
            let weight = q().from_i64(w);
            for (l, r) in CanonLabel::ALL.iter().zip(catalog_operators(&weight).unwrap()) {
                let d = catalog_entry(*l, &q());
                assert!(verify_rb(&r), "{l}");
                assert!(r.is_projection_type());
                assert_eq!(&r.kernel().unwrap(), d.m().space());
                assert_eq!(&r.image().unwrap(), d.s().space());
                let c = complementary_rb(&r);
                assert!(verify_rb(&c), "{l} complement");
            }
        }
    }

    #[test]
    fn transport_along_automorphisms() {
        for l in [A2, B4, B7] {
            let d = catalog_entry(l, &q());
            let r = rb_from_splitting(&d, &one()).unwrap();
            for seed in 0..3 {
                let phi = random_preserving(l.m_label(), seed, &q());
                let moved = phi.apply_to_decomposition(&d).unwrap();
                let direct = rb_from_splitting(&moved, &one()).unwrap();
                assert_eq!(direct.matrix, conjugate_rb(&r, &phi).unwrap().matrix);
            }
        }
    }
}
