//! Sparse multivariate polynomials in graded reverse lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Embedding, Field};

/// Exponent vector with cached total degree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u32>,
    deg: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Monomial {
        let deg = exps.iter().sum();
        Monomial { exps, deg }
    }

    pub fn one(nvars: usize) -> Monomial {
        Monomial { exps: vec![0; nvars], deg: 0 }
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial { exps: e, deg: 1 }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Monomial { exps, deg: self.deg + other.deg }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let exps = other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect();
        Monomial { exps, deg: other.deg - self.deg }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Grevlex with `x1 > x2 > ... > xn`.
pub fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| {
            for (x, y) in self.exps.iter().zip(&other.exps).rev() {
                if x != y {
                    return y.cmp(x);
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

/// A polynomial over `field` in `nvars` variables. Terms are kept in
/// ascending monomial order; no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, u32>,
}

impl Polynomial {
    pub fn zero(field: &Field, nvars: usize) -> Polynomial {
        Polynomial { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: &Field, nvars: usize, c: u32) -> Polynomial {
        let mut p = Polynomial::zero(field, nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    /// The variable `x_{i+1}` (0-based index `i`).
    pub fn var(field: &Field, nvars: usize, i: usize) -> Polynomial {
        let mut p = Polynomial::zero(field, nvars);
        p.add_term(Monomial::var(nvars, i), 1);
        p
    }

    pub fn from_terms(field: &Field, nvars: usize, terms: impl IntoIterator<Item = (Monomial, u32)>) -> Polynomial {
        let mut p = Polynomial::zero(field, nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    /// `sum coeffs[i] * x_i + constant`
    pub fn linear(field: &Field, coeffs: &[u32], constant: u32) -> Polynomial {
        let n = coeffs.len();
        let mut p = Polynomial::constant(field, n, constant);
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c);
        }
        p
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u32)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> u32 {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Adds `c * m` in place.
    pub fn add_term(&mut self, m: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        let f = &self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Largest monomial and its coefficient.
    pub fn leading_term(&self) -> Option<(&Monomial, u32)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    pub fn is_constant(&self) -> bool {
        self.degree().is_none_or(|d| d == 0)
    }

    /// Indices of variables that occur.
    pub fn support_vars(&self) -> Vec<usize> {
        let mut used = vec![false; self.nvars];
        for m in self.terms.keys() {
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        (0..self.nvars).filter(|&i| used[i]).collect()
    }

    fn check_compatible(&self, other: &Polynomial) {
        assert!(self.field == other.field, "polynomials over different fields");
        assert_eq!(self.nvars, other.nvars, "polynomials in different rings");
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check_compatible(other);
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        let f = &self.field;
        Polynomial {
            field: f.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &c)| (m.clone(), f.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        if c == 0 {
            return Polynomial::zero(&self.field, self.nvars);
        }
        let f = &self.field;
        Polynomial {
            field: f.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &a)| (m.clone(), f.mul(a, c))).collect(),
        }
    }

    /// `c * m * self`
    pub fn mul_term(&self, m: &Monomial, c: u32) -> Polynomial {
        if c == 0 {
            return Polynomial::zero(&self.field, self.nvars);
        }
        let f = &self.field;
        Polynomial {
            field: f.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, &a)| (t.mul(m), f.mul(a, c))).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.check_compatible(other);
        let f = &self.field;
        let mut acc: std::collections::HashMap<Monomial, u32> = std::collections::HashMap::new();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let e = acc.entry(a.mul(b)).or_insert(0);
                *e = f.mul_add(*e, ca, cb);
            }
        }
        Polynomial {
            field: f.clone(),
            nvars: self.nvars,
            terms: acc.into_iter().filter(|&(_, c)| c != 0).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut acc = Polynomial::constant(&self.field, self.nvars, 1);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self) -> Polynomial {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(self.field.inv(c).expect("nonzero lead")),
        }
    }

    pub fn eval(&self, point: &[u32]) -> Result<u32> {
        if point.len() != self.nvars {
            return Err(Error::dim(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        let f = &self.field;
        let mut acc = 0;
        for (m, &c) in &self.terms {
            let mut t = c;
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    t = f.mul(t, f.pow(point[i], e as u64));
                }
            }
            acc = f.add(acc, t);
        }
        Ok(acc)
    }

    /// Evaluates at a point whose coordinates lie in a larger field.
    pub fn eval_in(&self, emb: &Embedding, point: &[u32]) -> Result<u32> {
        self.map_coeffs(emb).eval(point)
    }

    /// Image of the coefficients under a field embedding.
    pub fn map_coeffs(&self, emb: &Embedding) -> Polynomial {
        Polynomial {
            field: emb.big().clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &c)| (m.clone(), emb.map(c))).collect(),
        }
    }

    /// Applies `g` to every coefficient (which must be a field map into `field`).
    pub fn map_coeffs_with(&self, field: &Field, g: impl Fn(u32) -> u32) -> Polynomial {
        let mut out = Polynomial::zero(field, self.nvars);
        for (m, &c) in &self.terms {
            out.add_term(m.clone(), g(c));
        }
        out
    }

    /// Formal partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let f = &self.field;
        let mut out = Polynomial::zero(f, self.nvars);
        for (m, &c) in &self.terms {
            let e = m.exps[i];
            if e == 0 {
                continue;
            }
            let k = f.from_int((e % f.p()) as i64);
            if k == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[i] -= 1;
            out.add_term(Monomial::new(exps), f.mul(c, k));
        }
        out
    }

    /// Replaces `x_i` by `values[i]`; the result lives in the ring of the values.
    pub fn substitute(&self, values: &[Polynomial]) -> Result<Polynomial> {
        if values.len() != self.nvars {
            return Err(Error::dim(format!(
                "{} substitutions for {} variables",
                values.len(),
                self.nvars
            )));
        }
        let target_n = values.first().map_or(0, |v| v.nvars);
        let mut powers: Vec<Vec<Polynomial>> = values
            .iter()
            .map(|v| vec![Polynomial::constant(&self.field, target_n, 1), v.clone()])
            .collect();
        let mut out = Polynomial::zero(&self.field, target_n);
        for (m, &c) in &self.terms {
            let mut t = Polynomial::constant(&self.field, target_n, c);
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&values[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize]);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Re-embeds into a ring of `new_n` variables; variable `i` becomes `map[i]`.
    pub fn rename_vars(&self, new_n: usize, map: &[usize]) -> Polynomial {
        assert_eq!(map.len(), self.nvars);
        let mut out = Polynomial::zero(&self.field, new_n);
        for (m, &c) in &self.terms {
            let mut e = vec![0; new_n];
            for (i, &x) in m.exps.iter().enumerate() {
                e[map[i]] += x;
            }
            out.add_term(Monomial::new(e), c);
        }
        out
    }

    /// Division with remainder by a single divisor (grevlex leading terms).
    pub fn div_rem(&self, g: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.check_compatible(g);
        let (lm, lc) = g.leading_term().ok_or(Error::DivisionByZero)?;
        let lm = lm.clone();
        let lc_inv = self.field.inv(lc)?;
        let mut q = Polynomial::zero(&self.field, self.nvars);
        let mut r = Polynomial::zero(&self.field, self.nvars);
        let mut p = self.clone();
        while let Some((m, c)) = p.leading_term() {
            let m = m.clone();
            if lm.divides(&m) {
                let t = lm.quotient_of(&m);
                let coef = self.field.mul(c, lc_inv);
                p = p.sub(&g.mul_term(&t, coef));
                q.add_term(t, coef);
            } else {
                p.terms.remove(&m);
                r.add_term(m, c);
            }
        }
        Ok((q, r))
    }

    /// Exact quotient, or `None` when `g` does not divide `self`.
    pub fn div_exact(&self, g: &Polynomial) -> Result<Option<Polynomial>> {
        let (q, r) = self.div_rem(g)?;
        Ok(if r.is_zero() { Some(q) } else { None })
    }

    /// Homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        Polynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| m.deg == d).map(|(m, &c)| (m.clone(), c)).collect(),
        }
    }

    /// For a polynomial of degree <= 1: the coefficient vector and constant.
    pub fn as_linear(&self) -> Option<(Vec<u32>, u32)> {
        if self.degree().is_some_and(|d| d > 1) {
            return None;
        }
        let mut v = vec![0; self.nvars];
        for (m, &c) in &self.terms {
            if let Some(i) = m.exps.iter().position(|&e| e == 1) {
                v[i] = c;
            }
        }
        Some((v, self.constant_term()))
    }
}

impl std::fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}
