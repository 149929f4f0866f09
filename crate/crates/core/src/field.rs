//! Exact scalars: rationals, prime fields and quadratic extensions.
//!
//! Every value carries enough information to recover its [`FieldDescriptor`].
//! The `std::ops` implementations panic when the operands live in different
//! fields; the `try_*` methods report [`Error::DescriptorMismatch`] instead.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Which field a scalar lives in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Rational,
    Prime(u64),
    Quadratic(Arc<QuadraticExt>),
}

/// `base(√d)` with `d` a non-square of `base`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticExt {
    base: FieldDescriptor,
    d: FieldValue,
}

impl QuadraticExt {
    pub fn base(&self) -> &FieldDescriptor {
        &self.base
    }

    pub fn d(&self) -> &FieldValue {
        &self.d
    }
}

#[derive(Clone, Debug)]
pub enum FieldValue {
    Rational(BigRational),
    Prime {
        p: u64,
        r: u64,
    },
    /// `a + b√d`; `a` and `b` live in the extension's base field.
    Quadratic {
        ext: Arc<QuadraticExt>,
        a: Box<FieldValue>,
        b: Box<FieldValue>,
    },
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut k = 3;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 2;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Tonelli–Shanks; `r` must be a nonzero quadratic residue mod odd `p`.
fn sqrt_mod(r: u64, p: u64) -> u64 {
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(r, q, p);
    let mut x = pow_mod(r, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        x = mul_mod(x, b, p);
    }
    x
}

impl FieldDescriptor {
    /// The prime field `F_p`. `p` must be a prime below 2^32.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldDescriptor::Prime(p))
    }

    /// `base(√d)`; fails with [`Error::AlreadySquare`] when `d` has a root in `base`.
    pub fn quadratic(base: &FieldDescriptor, d: FieldValue) -> Result<Self> {
        if d.descriptor() != *base {
            return Err(Error::mismatch(d.descriptor(), base));
        }
        if d.is_zero() {
            return Err(Error::InvalidExtension("d must be nonzero".into()));
        }
        if d.try_sqrt().is_some() {
            return Err(Error::AlreadySquare(d.to_string()));
        }
        if base.characteristic() == 2 {
            return Err(Error::InvalidExtension(
                "quadratic extensions by square roots need characteristic != 2".into(),
            ));
        }
        Ok(FieldDescriptor::Quadratic(Arc::new(QuadraticExt {
            base: base.clone(),
            d,
        })))
    }

    pub fn extend_with_sqrt(&self, d: &FieldValue) -> Result<Self> {
        FieldDescriptor::quadratic(self, d.clone())
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::Rational => 0,
            FieldDescriptor::Prime(p) => *p,
            FieldDescriptor::Quadratic(ext) => ext.base.characteristic(),
        }
    }

    /// Number of elements, or `None` for infinite fields.
    pub fn order(&self) -> Option<u128> {
        match self {
            FieldDescriptor::Rational => None,
            FieldDescriptor::Prime(p) => Some(*p as u128),
            FieldDescriptor::Quadratic(ext) => ext.base.order().map(|q| q * q),
        }
    }

    pub fn zero(&self) -> FieldValue {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldValue {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldValue {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldValue {
        match self {
            FieldDescriptor::Rational => FieldValue::Rational(BigRational::from_integer(n.clone())),
            FieldDescriptor::Prime(p) => {
                let m = BigInt::from(*p);
                let r = ((n % &m) + &m) % &m;
                FieldValue::Prime {
                    p: *p,
                    r: r.to_u64().expect("residue fits"),
                }
            }
            FieldDescriptor::Quadratic(ext) => FieldValue::Quadratic {
                ext: ext.clone(),
                a: Box::new(ext.base.from_bigint(n)),
                b: Box::new(ext.base.zero()),
            },
        }
    }

    /// `num / den`; fails when `den` vanishes in this field.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<FieldValue> {
        self.from_i64(num).try_div(&self.from_i64(den))
    }

    /// The adjoined `√d` of a quadratic extension.
    pub fn sqrt_generator(&self) -> Option<FieldValue> {
        match self {
            FieldDescriptor::Quadratic(ext) => Some(FieldValue::Quadratic {
                ext: ext.clone(),
                a: Box::new(ext.base.zero()),
                b: Box::new(ext.base.one()),
            }),
            _ => None,
        }
    }

    /// All elements of a prime field, in residue order.
    pub fn prime_elements(&self) -> Option<Vec<FieldValue>> {
        match self {
            FieldDescriptor::Prime(p) => Some((0..*p).map(|r| FieldValue::Prime { p: *p, r }).collect()),
            _ => None,
        }
    }

    /// True when `self` is `other` or an extension tower built on top of it.
    pub fn extends(&self, other: &FieldDescriptor) -> bool {
        if self == other {
            return true;
        }
        match self {
            FieldDescriptor::Quadratic(ext) => ext.base.extends(other),
            _ => false,
        }
    }

    /// Parse the textual scalar encoding: `"p/q"`, `"n"`, or `"a+b*sqrt(d)"`.
    pub fn parse(&self, text: &str) -> Result<FieldValue> {
        let text = text.trim();
        let bad = |reason: &str| Error::ParseScalar {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        match self {
            FieldDescriptor::Rational => {
                let (num, den) = match text.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (text, "1"),
                };
                let num: BigInt = num.parse().map_err(|_| bad("bad numerator"))?;
                let den: BigInt = den.parse().map_err(|_| bad("bad denominator"))?;
                if den.is_zero() {
                    return Err(bad("zero denominator"));
                }
                Ok(FieldValue::Rational(BigRational::new(num, den)))
            }
            FieldDescriptor::Prime(_) => {
                let n: BigInt = text.parse().map_err(|_| bad("expected an integer"))?;
                Ok(self.from_bigint(&n))
            }
            FieldDescriptor::Quadratic(ext) => {
                let Some(stripped) = text.strip_suffix(')') else {
                    return ext.base.parse(text).map(|a| a.embed_into(self).expect("base embeds"));
                };
                let Some(pos) = matching_sqrt(stripped) else {
                    return ext.base.parse(text).map(|a| a.embed_into(self).expect("base embeds"));
                };
                // a trailing root from lower in the tower means a base-field value
                match ext.base.parse(&stripped[pos + 6..]) {
                    Ok(d) if d == ext.d => {}
                    _ => return ext.base.parse(text).map(|a| a.embed_into(self).expect("base embeds")),
                }
                let head = &stripped[..pos];
                let split = top_level_plus(head).ok_or_else(|| bad("expected a+b*sqrt(d)"))?;
                let a = ext.base.parse(unparen(&head[..split]))?;
                let b = ext.base.parse(unparen(&head[split + 1..]))?;
                Ok(FieldValue::Quadratic {
                    ext: ext.clone(),
                    a: Box::new(a),
                    b: Box::new(b),
                })
            }
        }
    }
}

/// Start of the `*sqrt(` whose parenthesis closes at the end of `s` (already stripped).
fn matching_sqrt(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices().rev() {
        match ch {
            ')' => depth += 1,
            '(' if depth == 0 => {
                let head = &s[..i];
                return head.strip_suffix("*sqrt").map(|h| h.len());
            }
            '(' => depth -= 1,
            _ => {}
        }
    }
    None
}

fn top_level_plus(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 && i > 0 => return Some(i),
            _ => {}
        }
    }
    None
}

fn unparen(s: &str) -> &str {
    let s = s.trim();
    s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s)
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rational => write!(f, "Q"),
            FieldDescriptor::Prime(p) => write!(f, "F_{p}"),
            FieldDescriptor::Quadratic(ext) => write!(f, "{}(sqrt({}))", ext.base, ext.d),
        }
    }
}

impl FieldValue {
    pub fn descriptor(&self) -> FieldDescriptor {
        match self {
            FieldValue::Rational(_) => FieldDescriptor::Rational,
            FieldValue::Prime { p, .. } => FieldDescriptor::Prime(*p),
            FieldValue::Quadratic { ext, .. } => FieldDescriptor::Quadratic(ext.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldValue::Rational(x) => x.is_zero(),
            FieldValue::Prime { r, .. } => *r == 0,
            FieldValue::Quadratic { a, b, .. } => a.is_zero() && b.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldValue::Rational(x) => x.is_one(),
            FieldValue::Prime { r, .. } => *r == 1,
            FieldValue::Quadratic { a, b, .. } => a.is_one() && b.is_zero(),
        }
    }

    /// The underlying rational, if this is one.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldValue::Rational(x) => Some(x),
            _ => None,
        }
    }

    /// Residue in `[0, p)` for prime-field values.
    pub fn as_residue(&self) -> Option<u64> {
        match self {
            FieldValue::Prime { r, .. } => Some(*r),
            _ => None,
        }
    }

    fn same_field(&self, other: &FieldValue) -> Result<()> {
        let ok = match (self, other) {
            (FieldValue::Rational(_), FieldValue::Rational(_)) => true,
            (FieldValue::Prime { p, .. }, FieldValue::Prime { p: q, .. }) => p == q,
            (FieldValue::Quadratic { ext: e1, .. }, FieldValue::Quadratic { ext: e2, .. }) => {
                Arc::ptr_eq(e1, e2) || e1 == e2
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::mismatch(self.descriptor(), other.descriptor()))
        }
    }

    pub fn try_add(&self, other: &FieldValue) -> Result<FieldValue> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldValue::Rational(x), FieldValue::Rational(y)) => FieldValue::Rational(x + y),
            (FieldValue::Prime { p, r }, FieldValue::Prime { r: s, .. }) => FieldValue::Prime { p: *p, r: (r + s) % p },
            (FieldValue::Quadratic { ext, a, b }, FieldValue::Quadratic { a: c, b: e, .. }) => FieldValue::Quadratic {
                ext: ext.clone(),
                a: Box::new(a.try_add(c)?),
                b: Box::new(b.try_add(e)?),
            },
            _ => unreachable!(),
        })
    }

    pub fn try_neg(&self) -> FieldValue {
        match self {
            FieldValue::Rational(x) => FieldValue::Rational(-x),
            FieldValue::Prime { p, r } => FieldValue::Prime { p: *p, r: (p - r) % p },
            FieldValue::Quadratic { ext, a, b } => FieldValue::Quadratic {
                ext: ext.clone(),
                a: Box::new(a.try_neg()),
                b: Box::new(b.try_neg()),
            },
        }
    }

    pub fn try_sub(&self, other: &FieldValue) -> Result<FieldValue> {
        self.try_add(&other.try_neg())
    }

    pub fn try_mul(&self, other: &FieldValue) -> Result<FieldValue> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldValue::Rational(x), FieldValue::Rational(y)) => FieldValue::Rational(x * y),
            (FieldValue::Prime { p, r }, FieldValue::Prime { r: s, .. }) => FieldValue::Prime {
                p: *p,
                r: mul_mod(*r, *s, *p),
            },
            (FieldValue::Quadratic { ext, a, b }, FieldValue::Quadratic { a: c, b: e, .. }) => {
                // (a + b√d)(c + e√d) = (ac + d·be) + (ae + bc)√d
                let re = a.try_mul(c)?.try_add(&ext.d.try_mul(&b.try_mul(e)?)?)?;
                let im = a.try_mul(e)?.try_add(&b.try_mul(c)?)?;
                FieldValue::Quadratic {
                    ext: ext.clone(),
                    a: Box::new(re),
                    b: Box::new(im),
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn try_inv(&self) -> Result<FieldValue> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldValue::Rational(x) => FieldValue::Rational(x.recip()),
            FieldValue::Prime { p, r } => FieldValue::Prime {
                p: *p,
                r: pow_mod(*r, p - 2, *p),
            },
            FieldValue::Quadratic { ext, a, b } => {
                // (a - b√d) / (a² - d b²); the norm is nonzero since d is a non-square
                let norm = a.try_mul(a)?.try_sub(&ext.d.try_mul(&b.try_mul(b)?)?)?;
                let inv = norm.try_inv()?;
                FieldValue::Quadratic {
                    ext: ext.clone(),
                    a: Box::new(a.try_mul(&inv)?),
                    b: Box::new(b.try_neg().try_mul(&inv)?),
                }
            }
        })
    }

    pub fn try_div(&self, other: &FieldValue) -> Result<FieldValue> {
        self.same_field(other)?;
        self.try_mul(&other.try_inv()?)
    }

    pub fn square(&self) -> FieldValue {
        self * self
    }

    /// A square root inside the same field, when one is found.
    ///
    /// For quadratic extensions the search goes through the norm, so it can
    /// miss roots in towers deeper than one level.
    pub fn try_sqrt(&self) -> Option<FieldValue> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let root = match self {
            FieldValue::Rational(x) => {
                if x.is_negative() {
                    return None;
                }
                let n = x.numer().sqrt();
                let d = x.denom().sqrt();
                if &(&n * &n) != x.numer() || &(&d * &d) != x.denom() {
                    return None;
                }
                FieldValue::Rational(BigRational::new(n, d))
            }
            FieldValue::Prime { p, r } => {
                if *p == 2 {
                    return Some(self.clone());
                }
                if pow_mod(*r, (p - 1) / 2, *p) != 1 {
                    return None;
                }
                let s = sqrt_mod(*r, *p);
                FieldValue::Prime { p: *p, r: s.min(p - s) }
            }
            FieldValue::Quadratic { ext, a, b } => sqrt_quadratic(ext, a, b)?,
        };
        debug_assert_eq!(&root.square(), self);
        Some(root)
    }

    /// Lossless embedding into `target`, which must extend this value's field.
    pub fn embed_into(&self, target: &FieldDescriptor) -> Result<FieldValue> {
        let own = self.descriptor();
        if own == *target {
            return Ok(self.clone());
        }
        match target {
            FieldDescriptor::Quadratic(ext) if ext.base.extends(&own) => Ok(FieldValue::Quadratic {
                ext: ext.clone(),
                a: Box::new(self.embed_into(&ext.base)?),
                b: Box::new(ext.base.zero()),
            }),
            _ => Err(Error::mismatch(own, target)),
        }
    }

    /// Strip trailing `(a, 0)` layers so embedded base elements hash alike.
    fn lowered(&self) -> &FieldValue {
        match self {
            FieldValue::Quadratic { a, b, .. } if b.is_zero() => a.lowered(),
            _ => self,
        }
    }
}

fn sqrt_quadratic(ext: &Arc<QuadraticExt>, a: &FieldValue, b: &FieldValue) -> Option<FieldValue> {
    let wrap = |x: FieldValue, y: FieldValue| FieldValue::Quadratic {
        ext: ext.clone(),
        a: Box::new(x),
        b: Box::new(y),
    };
    let zero = ext.base.zero();
    if b.is_zero() {
        if let Some(x) = a.try_sqrt() {
            return Some(wrap(x, zero));
        }
        // a = d·y²  ⇒  √a = y√d
        let y = a.try_div(&ext.d).ok()?.try_sqrt()?;
        return Some(wrap(zero, y));
    }
    // (x + y√d)² = a + b√d  ⇔  x² + d y² = a, 2xy = b
    let norm = a * a - &ext.d * &(b * b);
    let n = norm.try_sqrt()?;
    let two = ext.base.from_i64(2);
    for s in [n.clone(), -&n] {
        let Ok(half) = (a + &s).try_div(&two) else {
            continue;
        };
        if let Some(x) = half.try_sqrt() {
            if x.is_zero() {
                continue;
            }
            let y = b.try_div(&(&two * &x)).ok()?;
            return Some(wrap(x, y));
        }
    }
    None
}

impl PartialEq for FieldValue {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FieldValue::Rational(x), FieldValue::Rational(y)) => x == y,
            (FieldValue::Prime { p, r }, FieldValue::Prime { p: q, r: s }) => p == q && r == s,
            (FieldValue::Quadratic { ext: e1, a: a1, b: b1 }, FieldValue::Quadratic { ext: e2, a: a2, b: b2 })
                if Arc::ptr_eq(e1, e2) || e1 == e2 =>
            {
                a1 == a2 && b1 == b2
            }
            (FieldValue::Quadratic { a, b, .. }, rhs) if b.is_zero() => **a == *rhs,
            (lhs, FieldValue::Quadratic { a, b, .. }) if b.is_zero() => *lhs == **a,
            _ => false,
        }
    }
}

impl Eq for FieldValue {}

impl Hash for FieldValue {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self.lowered() {
            FieldValue::Rational(x) => {
                0u8.hash(state);
                x.hash(state);
            }
            FieldValue::Prime { p, r } => {
                1u8.hash(state);
                p.hash(state);
                r.hash(state);
            }
            FieldValue::Quadratic { a, b, .. } => {
                2u8.hash(state);
                a.hash(state);
                b.hash(state);
            }
        }
    }
}

impl fmt::Display for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldValue::Rational(x) => {
                if x.denom().is_one() {
                    write!(f, "{}", x.numer())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
            FieldValue::Prime { r, .. } => write!(f, "{r}"),
            FieldValue::Quadratic { a, b, .. } if b.is_zero() => write!(f, "{a}"),
            FieldValue::Quadratic { ext, a, b } => {
                if matches!(ext.base, FieldDescriptor::Quadratic(_)) {
                    write!(f, "({a})+({b})*sqrt({})", ext.d)
                } else {
                    write!(f, "{a}+{b}*sqrt({})", ext.d)
                }
            }
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldValue> for &FieldValue {
            type Output = FieldValue;
            fn $method(self, rhs: &FieldValue) -> FieldValue {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{}", e))
            }
        }
        impl $trait<FieldValue> for FieldValue {
            type Output = FieldValue;
            fn $method(self, rhs: FieldValue) -> FieldValue {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldValue> for FieldValue {
            type Output = FieldValue;
            fn $method(self, rhs: &FieldValue) -> FieldValue {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl Neg for &FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        self.try_neg()
    }
}

impl Neg for FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        self.try_neg()
    }
}
