//! 3×3 matrices, their 9-coordinate vectorization, and small exact linear algebra.
//!
//! Coordinates are always ordered `(e11, e12, e13, e21, e22, e23, e31, e32, e33)`;
//! RREF canonicality of [`Subspace`] depends on that order.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldValue};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat3 {
    rows: [[FieldValue; 3]; 3],
}

impl Mat3 {
    pub fn from_rows(rows: [[FieldValue; 3]; 3]) -> Result<Self> {
        let desc = rows[0][0].descriptor();
        for x in rows.iter().flatten() {
            if x.descriptor() != desc {
                return Err(Error::mismatch(&desc, x.descriptor()));
            }
        }
        Ok(Mat3 { rows })
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> FieldValue) -> Self {
        Mat3 {
            rows: std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))),
        }
    }

    pub fn from_ints(desc: &FieldDescriptor, rows: [[i64; 3]; 3]) -> Self {
        Mat3::from_fn(|i, j| desc.from_i64(rows[i][j]))
    }

    pub fn zero(desc: &FieldDescriptor) -> Self {
        Mat3::from_fn(|_, _| desc.zero())
    }

    pub fn identity(desc: &FieldDescriptor) -> Self {
        Mat3::from_fn(|i, j| if i == j { desc.one() } else { desc.zero() })
    }

    /// The matrix unit `e_ij`, with 1-based indices as in the usual notation.
    pub fn unit(desc: &FieldDescriptor, i: usize, j: usize) -> Self {
        assert!((1..=3).contains(&i) && (1..=3).contains(&j), "e_{i}{j} out of range");
        Mat3::from_fn(|r, c| {
            if r + 1 == i && c + 1 == j {
                desc.one()
            } else {
                desc.zero()
            }
        })
    }

    /// Sum of matrix units, e.g. `units(q, &[(1, 1), (2, 2)])` is `e11 + e22`.
    pub fn units(desc: &FieldDescriptor, idx: &[(usize, usize)]) -> Self {
        idx.iter()
            .fold(Mat3::zero(desc), |acc, &(i, j)| &acc + &Mat3::unit(desc, i, j))
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        self.rows[0][0].descriptor()
    }

    /// Entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &FieldValue {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[[FieldValue; 3]; 3] {
        &self.rows
    }

    pub fn to_vec9(&self) -> Vec<FieldValue> {
        self.rows.iter().flatten().cloned().collect()
    }

    pub fn from_vec9(v: &[FieldValue]) -> Self {
        assert_eq!(v.len(), 9);
        Mat3::from_fn(|i, j| v[3 * i + j].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(FieldValue::is_zero)
    }

    fn check(&self, other: &Mat3) -> Result<()> {
        let (a, b) = (self.descriptor(), other.descriptor());
        if a == b {
            Ok(())
        } else {
            Err(Error::mismatch(a, b))
        }
    }

    pub fn try_mul(&self, other: &Mat3) -> Result<Mat3> {
        self.check(other)?;
        Ok(self * other)
    }

    pub fn try_add(&self, other: &Mat3) -> Result<Mat3> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn scale(&self, c: &FieldValue) -> Mat3 {
        Mat3::from_fn(|i, j| c * &self.rows[i][j])
    }

    pub fn transpose(&self) -> Mat3 {
        Mat3::from_fn(|i, j| self.rows[j][i].clone())
    }

    pub fn trace(&self) -> FieldValue {
        &(&self.rows[0][0] + &self.rows[1][1]) + &self.rows[2][2]
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<FieldValue>> = self.rows.iter().map(|r| r.to_vec()).collect();
        rref(&mut rows).len()
    }

    pub fn determinant(&self) -> FieldValue {
        let m = &self.rows;
        let minor = |a: usize, b: usize, c: usize, d: usize| &(&m[1][a] * &m[2][b]) - &(&m[1][c] * &m[2][d]);
        &(&(&m[0][0] * &minor(1, 2, 2, 1)) - &(&m[0][1] * &minor(0, 2, 2, 0))) + &(&m[0][2] * &minor(0, 1, 1, 0))
    }

    pub fn inverse(&self) -> Option<Mat3> {
        let inv = Matrix::from_rows(self.rows.iter().map(|r| r.to_vec()).collect()).inverse()?;
        Some(Mat3::from_fn(|i, j| inv.get(i, j).clone()))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..3).all(|i| (0..i).all(|j| self.rows[i][j].is_zero()))
    }

    pub fn is_idempotent(&self) -> bool {
        &(self * self) == self
    }

    pub fn embed_into(&self, target: &FieldDescriptor) -> Result<Mat3> {
        let mut out = Mat3::zero(target);
        for i in 0..3 {
            for j in 0..3 {
                out.rows[i][j] = self.rows[i][j].embed_into(target)?;
            }
        }
        Ok(out)
    }
}

impl std::ops::Mul<&Mat3> for &Mat3 {
    type Output = Mat3;
    fn mul(self, rhs: &Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| {
            let mut acc = &self.rows[i][0] * &rhs.rows[0][j];
            for k in 1..3 {
                acc = &acc + &(&self.rows[i][k] * &rhs.rows[k][j]);
            }
            acc
        })
    }
}

impl std::ops::Add<&Mat3> for &Mat3 {
    type Output = Mat3;
    fn add(self, rhs: &Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| &self.rows[i][j] + &rhs.rows[i][j])
    }
}

impl std::ops::Sub<&Mat3> for &Mat3 {
    type Output = Mat3;
    fn sub(self, rhs: &Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| &self.rows[i][j] - &rhs.rows[i][j])
    }
}

impl fmt::Display for Mat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
            .collect();
        write!(f, "({})", rows.join("; "))
    }
}

/// In-place reduced row echelon form. Zero rows are dropped; returns pivot columns.
pub fn rref(rows: &mut Vec<Vec<FieldValue>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].try_inv().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x - &(&factor * y);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : A x = 0}` for `A` given by rows over `ncols` unknowns.
pub fn kernel(rows: &[Vec<FieldValue>], ncols: usize, desc: &FieldDescriptor) -> Vec<Vec<FieldValue>> {
    let mut reduced = rows.to_vec();
    let pivots = rref(&mut reduced);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![desc.zero(); ncols];
            v[f] = desc.one();
            for (row, &pc) in reduced.iter().zip(&pivots) {
                v[pc] = -&row[f];
            }
            v
        })
        .collect()
}

/// A dense rectangular matrix; used for 9×9 linear maps on vectorized `M₃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: Vec<Vec<FieldValue>>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<FieldValue>>) -> Self {
        Matrix { rows }
    }

    pub fn from_columns(cols: &[Vec<FieldValue>]) -> Self {
        let n = cols.first().map_or(0, Vec::len);
        Matrix {
            rows: (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect(),
        }
    }

    pub fn identity(desc: &FieldDescriptor, n: usize) -> Self {
        Matrix {
            rows: (0..n)
                .map(|i| (0..n).map(|j| if i == j { desc.one() } else { desc.zero() }).collect())
                .collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldValue {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<FieldValue>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vec<FieldValue> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn apply(&self, v: &[FieldValue]) -> Vec<FieldValue> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .fold(None::<FieldValue>, |acc, (a, b)| {
                        let t = a * b;
                        Some(match acc {
                            Some(s) => &s + &t,
                            None => t,
                        })
                    })
                    .expect("nonempty row")
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let cols: Vec<Vec<FieldValue>> = (0..other.ncols()).map(|j| self.apply(&other.column(j))).collect();
        Matrix::from_columns(&cols)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        Matrix {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }

    pub fn scale(&self, c: &FieldValue) -> Matrix {
        Matrix {
            rows: self.rows.iter().map(|r| r.iter().map(|x| c * x).collect()).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        rref(&mut rows).len()
    }

    /// Inverse via Gauss–Jordan on `[A | I]`; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.nrows();
        if n == 0 || self.ncols() != n {
            return None;
        }
        let desc = self.rows[0][0].descriptor();
        let mut aug: Vec<Vec<FieldValue>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { desc.one() } else { desc.zero() }));
                row
            })
            .collect();
        let pivots = rref(&mut aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix {
            rows: aug.into_iter().map(|r| r[n..].to_vec()).collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(FieldValue::is_zero)
    }
}

/// A subspace of `M₃`, stored as the RREF basis of its vectorizations.
///
/// Two subspaces are equal iff their RREF bases agree entrywise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    desc: FieldDescriptor,
    rows: Vec<Vec<FieldValue>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(desc: &FieldDescriptor) -> Self {
        Subspace {
            desc: desc.clone(),
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(desc: &FieldDescriptor) -> Self {
        let units: Vec<Mat3> = (1..=3)
            .flat_map(|i| (1..=3).map(move |j| (i, j)))
            .map(|(i, j)| Mat3::unit(desc, i, j))
            .collect();
        Subspace::span(desc, &units).expect("units share the descriptor")
    }

    pub fn span(desc: &FieldDescriptor, mats: &[Mat3]) -> Result<Self> {
        for m in mats {
            if m.descriptor() != *desc {
                return Err(Error::mismatch(desc, m.descriptor()));
            }
        }
        Ok(Subspace::from_vectors(desc, mats.iter().map(Mat3::to_vec9).collect()))
    }

    fn from_vectors(desc: &FieldDescriptor, mut rows: Vec<Vec<FieldValue>>) -> Self {
        let pivots = rref(&mut rows);
        Subspace {
            desc: desc.clone(),
            rows,
            pivots,
        }
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> Vec<Mat3> {
        self.rows.iter().map(|r| Mat3::from_vec9(r)).collect()
    }

    pub fn vectors(&self) -> &[Vec<FieldValue>] {
        &self.rows
    }

    /// Coordinates in the RREF basis, or `None` when `m` lies outside.
    pub fn coords(&self, m: &Mat3) -> Option<Vec<FieldValue>> {
        let v = m.to_vec9();
        let c: Vec<FieldValue> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let rebuilt = self.combine(&c);
        (rebuilt == v).then_some(c)
    }

    /// `m` minus its projection along the RREF pivots; zero iff `m` is in the span.
    pub fn residual(&self, m: &Mat3) -> Mat3 {
        let v = m.to_vec9();
        let c: Vec<FieldValue> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let rebuilt = self.combine(&c);
        Mat3::from_vec9(&v.iter().zip(&rebuilt).map(|(a, b)| a - b).collect::<Vec<_>>())
    }

    fn combine(&self, c: &[FieldValue]) -> Vec<FieldValue> {
        let mut out = vec![self.desc.zero(); 9];
        for (coef, row) in c.iter().zip(&self.rows) {
            if coef.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                *o = &*o + &(coef * x);
            }
        }
        out
    }

    /// The element with the given coordinates in the RREF basis.
    pub fn element(&self, c: &[FieldValue]) -> Mat3 {
        Mat3::from_vec9(&self.combine(c))
    }

    pub fn contains(&self, m: &Mat3) -> bool {
        self.coords(m).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis().iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(Subspace::from_vectors(&self.desc, rows))
    }

    /// `U ∩ V` from the kernel of `[Uᵀ | −Vᵀ]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let (m, n) = (self.dim(), other.dim());
        if m == 0 || n == 0 {
            return Ok(Subspace::zero(&self.desc));
        }
        let system: Vec<Vec<FieldValue>> = (0..9)
            .map(|k| {
                self.rows
                    .iter()
                    .map(|r| r[k].clone())
                    .chain(other.rows.iter().map(|r| -&r[k]))
                    .collect()
            })
            .collect();
        let sols = kernel(&system, m + n, &self.desc);
        let vecs = sols.iter().map(|s| self.combine(&s[..m])).collect();
        Ok(Subspace::from_vectors(&self.desc, vecs))
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.desc == other.desc {
            Ok(())
        } else {
            Err(Error::mismatch(&self.desc, &other.desc))
        }
    }

    pub fn embed_into(&self, target: &FieldDescriptor) -> Result<Subspace> {
        let mats = self
            .basis()
            .iter()
            .map(|m| m.embed_into(target))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(target, &mats)
    }

    /// Image under a map applied to each basis element.
    pub fn map(&self, f: impl Fn(&Mat3) -> Result<Mat3>) -> Result<Subspace> {
        let mats = self.basis().iter().map(f).collect::<Result<Vec<_>>>()?;
        Subspace::span(&self.desc, &mats)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.basis().iter().map(|m| m.to_string()).collect();
        write!(f, "span{{{}}}", parts.join(", "))
    }
}

pub type Mat2 = [[FieldValue; 2]; 2];

/// Result of conjugating an idempotent into diagonal 0/1 form: `T⁻¹ H T = J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jordanization<M> {
    pub t: M,
    pub j: M,
}

fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j])))
}

fn mat2_identity(desc: &FieldDescriptor) -> Mat2 {
    [[desc.one(), desc.zero()], [desc.zero(), desc.one()]]
}

/// Conjugate a 2×2 idempotent to `0`, `diag(1,0)` or the identity.
///
/// Rank one always yields `diag(1,0)`: `T` has the first nonzero column of `H`
/// followed by the RREF kernel vector.
pub fn jordanize_idempotent2(h: &Mat2) -> Result<Jordanization<Mat2>> {
    if &mat2_mul(h, h) != h {
        return Err(Error::NotIdempotent);
    }
    let desc = h[0][0].descriptor();
    let rows: Vec<Vec<FieldValue>> = h.iter().map(|r| r.to_vec()).collect();
    let mut reduced = rows.clone();
    let rank = rref(&mut reduced).len();
    let id = mat2_identity(&desc);
    let zero = [[desc.zero(), desc.zero()], [desc.zero(), desc.zero()]];
    match rank {
        0 => Ok(Jordanization { t: id, j: zero }),
        2 => Ok(Jordanization { t: id.clone(), j: id }),
        _ => {
            let col = (0..2)
                .find(|&c| !(h[0][c].is_zero() && h[1][c].is_zero()))
                .expect("rank one has a nonzero column");
            let ker = kernel(&rows, 2, &desc).pop().expect("rank one has a kernel");
            let t = [[h[0][col].clone(), ker[0].clone()], [h[1][col].clone(), ker[1].clone()]];
            let j = [[desc.one(), desc.zero()], [desc.zero(), desc.zero()]];
            debug_assert_eq!(mat2_mul(h, &t), mat2_mul(&t, &j));
            Ok(Jordanization { t, j })
        }
    }
}

/// Conjugate an upper-triangular idempotent to its diagonal by a unit
/// upper-triangular `T`, solving `V T = T J` column by column.
pub fn jordanize_idempotent_upper3(v: &Mat3) -> Result<Jordanization<Mat3>> {
    if !v.is_upper_triangular() {
        return Err(Error::NotUpperTriangular);
    }
    if !v.is_idempotent() {
        return Err(Error::NotIdempotent);
    }
    let desc = v.descriptor();
    let diag: Vec<FieldValue> = (0..3).map(|i| v.get(i, i).clone()).collect();
    let mut t = Mat3::identity(&desc);
    for col in 1..3 {
        let lambda = &diag[col];
        for row in (0..col).rev() {
            // (V_rr − λ) t_r + Σ_{k>r} V_rk t_k = 0
            let mut acc = desc.zero();
            for k in row + 1..=col {
                acc = &acc + &(v.get(row, k) * t.get(k, col));
            }
            let gap = &diag[row] - lambda;
            if gap.is_zero() {
                if !acc.is_zero() {
                    return Err(Error::Internal(format!(
                        "upper-triangular idempotent {v} has an inconsistent eigenvector system"
                    )));
                }
            } else {
                t.rows[row][col] = -&(&acc / &gap);
            }
        }
    }
    let j = Mat3::from_fn(|i, k| if i == k { diag[i].clone() } else { desc.zero() });
    debug_assert_eq!(&(v * &t), &(&t * &j));
    Ok(Jordanization { t, j })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> FieldDescriptor {
        FieldDescriptor::Rational
    }

    fn e(i: usize, j: usize) -> Mat3 {
        Mat3::unit(&q(), i, j)
    }

    fn m6() -> Subspace {
        Subspace::span(&q(), &[e(1, 2), e(1, 3), e(2, 2), e(2, 3), e(3, 2), e(3, 3)]).unwrap()
    }

    #[test]
    fn matrix_unit_products() {
        assert_eq!(&e(1, 2) * &e(2, 1), e(1, 1));
        assert!((&e(1, 2) * &e(1, 2)).is_zero());
        assert_eq!((&e(1, 1) + &e(2, 2)).rank(), 2);
        assert_eq!((&e(2, 2) + &e(3, 3)).trace(), q().from_i64(2));
        assert_eq!(e(1, 2).transpose(), e(2, 1));
    }

    #[test]
    fn mismatched_descriptors_are_reported() {
        let f5 = FieldDescriptor::prime(5).unwrap();
        assert!(matches!(
            e(1, 1).try_mul(&Mat3::unit(&f5, 1, 1)),
            Err(Error::DescriptorMismatch { .. })
        ));
        assert!(Subspace::span(&q(), &[Mat3::unit(&f5, 1, 1)]).is_err());
    }

    #[test]
    fn span_examples() {
        let two = e(1, 1).scale(&q().from_i64(2));
        assert_eq!(Subspace::span(&q(), &[e(1, 1), two]).unwrap().dim(), 1);
        let u = Subspace::span(&q(), &[&e(1, 1) + &e(2, 2), e(2, 2)]).unwrap();
        assert_eq!(u.dim(), 2);
        assert!(u.contains(&e(1, 1)));
        assert_eq!(m6().dim(), 6);
        assert_eq!(Subspace::span(&q(), &u.basis()).unwrap(), u);
    }

    #[test]
    fn intersection_examples() {
        let a1 = Subspace::span(&q(), &[e(1, 1), e(2, 1), e(3, 1)]).unwrap();
        assert_eq!(a1.intersect(&m6()).unwrap().dim(), 0);
        assert_eq!(a1.intersect(&a1).unwrap(), a1);
        let u = Subspace::span(&q(), &[&e(1, 1) + &e(2, 2), e(1, 2)]).unwrap();
        let v = Subspace::span(&q(), &[e(2, 2), e(1, 2)]).unwrap();
        // a(e11+e22) + b e12 = c e22 + d e12 forces a = 0, b = d
        assert_eq!(u.intersect(&v).unwrap(), Subspace::span(&q(), &[e(1, 2)]).unwrap());
    }

    #[test]
    fn residual_vanishes_on_members() {
        let u = Subspace::span(&q(), &[&e(1, 1) + &e(2, 2), e(2, 1)]).unwrap();
        assert!(u.residual(&(&e(1, 1) + &e(2, 2))).is_zero());
        assert_eq!(u.residual(&e(2, 2)), &e(2, 2) - &Mat3::zero(&q()));
    }

    fn m2(rows: [[i64; 2]; 2]) -> Mat2 {
        std::array::from_fn(|i| std::array::from_fn(|j| q().from_i64(rows[i][j])))
    }

    #[test]
    fn jordanize2_examples() {
        let z = jordanize_idempotent2(&m2([[0, 0], [0, 0]])).unwrap();
        assert_eq!(z.t, m2([[1, 0], [0, 1]]));
        assert_eq!(z.j, m2([[0, 0], [0, 0]]));

        let r = jordanize_idempotent2(&m2([[1, 1], [0, 0]])).unwrap();
        assert_eq!(r.t, m2([[1, -1], [0, 1]]));
        assert_eq!(r.j, m2([[1, 0], [0, 0]]));
        // T⁻¹HT = J checked as HT = TJ
        assert_eq!(mat2_mul(&m2([[1, 1], [0, 0]]), &r.t), mat2_mul(&r.t, &r.j));

        let i = jordanize_idempotent2(&m2([[1, 0], [0, 1]])).unwrap();
        assert_eq!(i.t, m2([[1, 0], [0, 1]]));
        assert_eq!(i.j, m2([[1, 0], [0, 1]]));

        let d01 = jordanize_idempotent2(&m2([[0, 0], [0, 1]])).unwrap();
        assert_eq!(d01.j, m2([[1, 0], [0, 0]]));

        assert!(matches!(
            jordanize_idempotent2(&m2([[1, 1], [1, 1]])),
            Err(Error::NotIdempotent)
        ));
    }

    #[test]
    fn jordanize_upper3_examples() {
        let v = &e(2, 2) + &e(3, 3);
        let r = jordanize_idempotent_upper3(&v).unwrap();
        assert_eq!(r.t, Mat3::identity(&q()));
        assert_eq!(r.j, v);

        let v = Mat3::from_ints(&q(), [[0, 0, 0], [0, 1, 5], [0, 0, 0]]);
        let r = jordanize_idempotent_upper3(&v).unwrap();
        assert_eq!(r.j, e(2, 2));
        assert_eq!(r.t.get(1, 2), &q().from_i64(-5));
        assert_eq!(&(&r.t.inverse().unwrap() * &v) * &r.t, r.j);

        let id = Mat3::identity(&q());
        let r = jordanize_idempotent_upper3(&id).unwrap();
        assert_eq!(r.t, id);
        assert_eq!(r.j, id);

        assert!(matches!(
            jordanize_idempotent_upper3(&e(2, 1)),
            Err(Error::NotUpperTriangular)
        ));
        assert!(matches!(
            jordanize_idempotent_upper3(&e(1, 2)),
            Err(Error::NotIdempotent)
        ));
    }

    fn small_mat() -> impl Strategy<Value = Mat3> {
        proptest::array::uniform3(proptest::array::uniform3(-3i64..=3)).prop_map(|rows| Mat3::from_ints(&q(), rows))
    }

    fn small_mat2() -> impl Strategy<Value = Mat2> {
        proptest::array::uniform2(proptest::array::uniform2(-3i64..=3)).prop_map(m2)
    }

    proptest! {
        #[test]
        fn random_idempotent2_jordanizes(p in small_mat2(), d0 in 0i64..2, d1 in 0i64..2) {
            let det = &(&p[0][0] * &p[1][1]) - &(&p[0][1] * &p[1][0]);
            prop_assume!(!det.is_zero());
            let pinv: Mat2 = [
                [&p[1][1] / &det, -&(&p[0][1] / &det)],
                [-&(&p[1][0] / &det), &p[0][0] / &det],
            ];
            let h = mat2_mul(&mat2_mul(&p, &m2([[d0, 0], [0, d1]])), &pinv);
            let r = jordanize_idempotent2(&h).unwrap();
            prop_assert_eq!(mat2_mul(&r.j, &r.j), r.j.clone());
            prop_assert_eq!(&r.j[0][0] + &r.j[1][1], &h[0][0] + &h[1][1]);
            prop_assert_eq!(mat2_mul(&h, &r.t), mat2_mul(&r.t, &r.j));
            let tdet = &(&r.t[0][0] * &r.t[1][1]) - &(&r.t[0][1] * &r.t[1][0]);
            prop_assert!(!tdet.is_zero());
        }

        #[test]
        fn random_upper_idempotent_jordanizes(
            d in proptest::array::uniform3(0i64..2),
            off in proptest::array::uniform3(-3i64..=3),
        ) {
            // P diag P⁻¹ with unit upper-triangular P
            let p = Mat3::from_ints(&q(), [[1, off[0], off[1]], [0, 1, off[2]], [0, 0, 1]]);
            let diag = Mat3::from_ints(&q(), [[d[0], 0, 0], [0, d[1], 0], [0, 0, d[2]]]);
            let v = &(&p * &diag) * &p.inverse().unwrap();
            let r = jordanize_idempotent_upper3(&v).unwrap();
            prop_assert!(r.t.is_upper_triangular());
            prop_assert_eq!(&(&r.t.inverse().unwrap() * &v) * &r.t, r.j.clone());
            prop_assert_eq!(r.j.trace(), v.trace());
        }

        #[test]
        fn dimension_formula(a in proptest::collection::vec(small_mat(), 1..5),
                             b in proptest::collection::vec(small_mat(), 1..5)) {
            let u = Subspace::span(&q(), &a).unwrap();
            let v = Subspace::span(&q(), &b).unwrap();
            let sum = u.sum(&v).unwrap();
            let cap = u.intersect(&v).unwrap();
            prop_assert_eq!(u.dim() + v.dim(), sum.dim() + cap.dim());
            prop_assert!(cap.is_subspace_of(&u) && cap.is_subspace_of(&v));
            prop_assert_eq!(Subspace::span(&q(), &u.basis()).unwrap(), u);
        }

        #[test]
        fn inverse_round_trips(m in small_mat()) {
            match m.inverse() {
                Some(inv) => prop_assert_eq!(&m * &inv, Mat3::identity(&q())),
                None => prop_assert!(m.determinant().is_zero()),
            }
        }
    }
}
