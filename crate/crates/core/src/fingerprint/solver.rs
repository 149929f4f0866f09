//! Consistency of small polynomial systems over the algebraic closure.
//!
//! A system is consistent iff its reduced Gröbner basis is not `{1}`. Bases are
//! computed with Buchberger's algorithm in graded reverse lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldValue};

pub const MAX_VARIABLES: usize = 6;
pub const MAX_DEGREE: u32 = 2;
/// Default cap on S-polynomial reductions.
pub const DEFAULT_BUDGET: u64 = 10_000;

/// Exponent vector ordered by grevlex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0).rev() {
                if a != b {
                    // smaller exponent in the last differing variable wins
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial; the largest key is the leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    desc: FieldDescriptor,
    nvars: usize,
    terms: BTreeMap<Monomial, FieldValue>,
}

impl Polynomial {
    pub fn zero(desc: &FieldDescriptor, nvars: usize) -> Self {
        Polynomial {
            desc: desc.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: FieldValue, nvars: usize) -> Self {
        let mut p = Polynomial::zero(&c.descriptor(), nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(desc: &FieldDescriptor, nvars: usize, i: usize) -> Self {
        let mut p = Polynomial::zero(desc, nvars);
        p.add_term(Monomial::var(nvars, i), desc.one());
        p
    }

    pub fn from_terms(
        desc: &FieldDescriptor,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, FieldValue)>,
    ) -> Self {
        let mut p = Polynomial::zero(desc, nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: FieldValue) {
        assert_eq!(m.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_nonzero_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().next().is_some_and(|m| m.degree() == 0)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldValue)> {
        self.terms.iter()
    }

    fn leading(&self) -> Option<(&Monomial, &FieldValue)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &FieldValue) -> Polynomial {
        Polynomial::from_terms(
            &self.desc,
            self.nvars,
            self.terms.iter().map(|(m, x)| (m.clone(), c * x)),
        )
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(&self.desc, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    fn mul_term(&self, m: &Monomial, c: &FieldValue) -> Polynomial {
        Polynomial::from_terms(
            &self.desc,
            self.nvars,
            self.terms.iter().map(|(k, x)| (k.mul(m), c * x)),
        )
    }

    fn monic(&self) -> Polynomial {
        match self.leading() {
            Some((_, c)) => self.scale(&c.try_inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    pub fn evaluate(&self, point: &[FieldValue]) -> FieldValue {
        let mut acc = self.desc.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t = &t * x;
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Remainder of full reduction by a set of monic polynomials.
    fn reduce(&self, basis: &[Polynomial]) -> Polynomial {
        let mut p = self.clone();
        let mut rem = Polynomial::zero(&self.desc, self.nvars);
        while let Some((lm, lc)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
            match basis
                .iter()
                .find(|g| g.leading().is_some_and(|(gm, _)| gm.divides(&lm)))
            {
                Some(g) => {
                    let (gm, _) = g.leading().expect("nonzero");
                    p = p.sub(&g.mul_term(&lm.div(gm), &lc));
                }
                None => {
                    p.terms.remove(&lm);
                    rem.add_term(lm, lc);
                }
            }
        }
        rem
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let vars: Vec<String> =
                    m.0.iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
                        .collect();
                if vars.is_empty() {
                    c.to_string()
                } else {
                    format!("({c})*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A system of polynomial equations `f = 0` in at most six variables and degree at most two.
#[derive(Clone, Debug)]
pub struct PolySystem {
    desc: FieldDescriptor,
    variables: Vec<String>,
    equations: Vec<Polynomial>,
    /// `x^p − x` for every variable when solutions are restricted to `F_p`.
    field_equations: Vec<Polynomial>,
}

impl PolySystem {
    pub fn new(desc: &FieldDescriptor, variables: Vec<String>, equations: Vec<Polynomial>) -> Result<Self> {
        if variables.len() > MAX_VARIABLES {
            return Err(Error::InvalidSystem(format!(
                "{} variables exceed the limit of {MAX_VARIABLES}",
                variables.len()
            )));
        }
        for eq in &equations {
            if eq.nvars != variables.len() {
                return Err(Error::InvalidSystem(
                    "equation arity does not match the variables".into(),
                ));
            }
            if eq.desc != *desc {
                return Err(Error::mismatch(desc, &eq.desc));
            }
            if eq.degree() > MAX_DEGREE {
                return Err(Error::InvalidSystem(format!(
                    "degree {} exceeds {MAX_DEGREE}: {eq}",
                    eq.degree()
                )));
            }
        }
        Ok(PolySystem {
            desc: desc.clone(),
            variables,
            equations,
            field_equations: Vec::new(),
        })
    }

    /// Restrict solutions to the prime field by adjoining `x^p − x` for each variable.
    pub fn restricted_to_prime_field(mut self) -> Result<Self> {
        let FieldDescriptor::Prime(p) = self.desc else {
            return Err(Error::InvalidSystem(
                "prime-field restriction needs F_p coefficients".into(),
            ));
        };
        let n = self.variables.len();
        self.field_equations = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = p as u32;
                let mut f = Polynomial::zero(&self.desc, n);
                f.add_term(Monomial(e), self.desc.one());
                f.add_term(Monomial::var(n, i), -self.desc.one());
                f
            })
            .collect();
        Ok(self)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }

    fn all_equations(&self) -> impl Iterator<Item = &Polynomial> {
        self.equations.iter().chain(&self.field_equations)
    }
}

/// Reduced grevlex Gröbner basis; `Ok(vec![1])` signals an inconsistent system.
pub fn groebner_basis(sys: &PolySystem, budget: u64) -> Result<Vec<Polynomial>> {
    let n = sys.variables.len();
    let one = Polynomial::constant(sys.desc.one(), n);
    let mut basis: Vec<Polynomial> = Vec::new();
    for f in sys.all_equations() {
        let r = f.reduce(&basis);
        if r.is_zero() {
            continue;
        }
        if r.is_nonzero_constant() {
            return Ok(vec![one]);
        }
        basis.push(r.monic());
    }
    let mut pairs: Vec<(usize, usize)> = (0..basis.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let mut reductions = 0u64;
    while !pairs.is_empty() {
        // normal selection strategy: smallest lcm first
        let (idx, _) = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| pair_lcm(&basis, **a).cmp(&pair_lcm(&basis, **b)))
            .expect("nonempty");
        let (i, j) = pairs.swap_remove(idx);
        let (mi, _) = basis[i].leading().expect("nonzero");
        let (mj, _) = basis[j].leading().expect("nonzero");
        if mi.coprime(mj) {
            continue;
        }
        reductions += 1;
        if reductions > budget {
            return Err(Error::BudgetExceeded(budget));
        }
        let l = mi.lcm(mj);
        let s = basis[i]
            .mul_term(&l.div(mi), &sys.desc.one())
            .sub(&basis[j].mul_term(&l.div(mj), &sys.desc.one()));
        let r = s.reduce(&basis);
        if r.is_zero() {
            continue;
        }
        if r.is_nonzero_constant() {
            return Ok(vec![one]);
        }
        basis.push(r.monic());
        let k = basis.len() - 1;
        pairs.extend((0..k).map(|i| (i, k)));
    }
    Ok(interreduce(basis))
}

fn pair_lcm(basis: &[Polynomial], (i, j): (usize, usize)) -> Monomial {
    let (a, _) = basis[i].leading().expect("nonzero");
    let (b, _) = basis[j].leading().expect("nonzero");
    a.lcm(b)
}

fn interreduce(mut basis: Vec<Polynomial>) -> Vec<Polynomial> {
    basis.sort_by(|a, b| a.leading().map(|x| x.0).cmp(&b.leading().map(|x| x.0)));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for g in basis {
        let lm = g.leading().expect("nonzero").0.clone();
        if minimal.iter().any(|h| h.leading().expect("nonzero").0.divides(&lm)) {
            continue;
        }
        minimal.push(g);
    }
    (0..minimal.len())
        .map(|i| {
            let others: Vec<Polynomial> = minimal
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, p)| p.clone())
                .collect();
            minimal[i].reduce(&others).monic()
        })
        .collect()
}

/// Weak Nullstellensatz: solvable over the algebraic closure iff the basis is not `{1}`.
pub fn is_consistent(sys: &PolySystem) -> Result<bool> {
    is_consistent_with_budget(sys, DEFAULT_BUDGET)
}

pub fn is_consistent_with_budget(sys: &PolySystem, budget: u64) -> Result<bool> {
    let gb = groebner_basis(sys, budget)?;
    Ok(!gb.iter().any(Polynomial::is_nonzero_constant))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldDescriptor {
        FieldDescriptor::Rational
    }

    fn c(v: i64, n: usize) -> Polynomial {
        Polynomial::constant(q().from_i64(v), n)
    }

    fn x(i: usize, n: usize) -> Polynomial {
        Polynomial::var(&q(), n, i)
    }

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("x{i}")).collect()
    }

    #[test]
    fn grevlex_order() {
        let m = |e: &[u32]| Monomial(e.to_vec());
        assert!(m(&[1, 1, 0]) > m(&[0, 0, 1]));
        // x·z < y² in grevlex with x > y > z
        assert!(m(&[1, 0, 1]) < m(&[0, 2, 0]));
        assert!(m(&[2, 0, 0]) > m(&[1, 1, 0]));
    }

    #[test]
    fn consistency_examples() {
        let n = 1;
        let idem = x(0, n).mul(&x(0, n)).sub(&x(0, n));
        let sys = PolySystem::new(&q(), names(n), vec![idem.clone(), x(0, n).sub(&c(2, n))]).unwrap();
        assert!(!is_consistent(&sys).unwrap());

        let sys = PolySystem::new(&q(), names(n), vec![x(0, n).mul(&x(0, n)).sub(&c(2, n))]).unwrap();
        assert!(is_consistent(&sys).unwrap());

        let n = 2;
        let (a, b) = (x(0, n), x(1, n));
        let sys = PolySystem::new(
            &q(),
            names(n),
            vec![a.mul(&a).sub(&a), b.mul(&b).sub(&b), a.add(&b).sub(&c(1, n)), a.mul(&b)],
        )
        .unwrap();
        // oracle: of the four 0/1 points, (1,0) and (0,1) satisfy all equations
        let hits = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .iter()
            .filter(|(u, v)| {
                let pt = [q().from_i64(*u), q().from_i64(*v)];
                sys.equations().iter().all(|e| e.evaluate(&pt).is_zero())
            })
            .count();
        assert_eq!(hits, 2);
        assert!(is_consistent(&sys).unwrap());
    }

    #[test]
    fn degree_and_arity_bounds() {
        let n = 1;
        let cubic = x(0, n).mul(&x(0, n)).mul(&x(0, n));
        assert!(matches!(
            PolySystem::new(&q(), names(n), vec![cubic]),
            Err(Error::InvalidSystem(_))
        ));
        assert!(PolySystem::new(&q(), names(7), vec![]).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let n = 3;
        let eqs = vec![
            x(0, n).mul(&x(1, n)).sub(&x(2, n)),
            x(1, n).mul(&x(2, n)).sub(&x(0, n)),
            x(0, n).mul(&x(2, n)).sub(&x(1, n)),
        ];
        let sys = PolySystem::new(&q(), names(n), eqs).unwrap();
        assert!(matches!(
            is_consistent_with_budget(&sys, 0),
            Err(Error::BudgetExceeded(0))
        ));
        assert!(is_consistent(&sys).unwrap());
    }

    #[test]
    fn reduced_basis_of_linear_system() {
        let n = 2;
        let sys = PolySystem::new(
            &q(),
            names(n),
            vec![x(0, n).add(&x(1, n)).sub(&c(3, n)), x(0, n).sub(&x(1, n)).sub(&c(1, n))],
        )
        .unwrap();
        let gb = groebner_basis(&sys, DEFAULT_BUDGET).unwrap();
        assert_eq!(gb.len(), 2);
        for g in &gb {
            assert_eq!(g.evaluate(&[q().from_i64(2), q().from_i64(1)]), q().zero());
        }
    }
}
