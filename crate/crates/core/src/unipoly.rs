//! Dense univariate polynomials over a [`Field`].

use std::fmt;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::field::Field;

/// Dense coefficients `c_0 + c_1 T + ...`, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<u32>,
}

impl UniPoly {
    pub fn new(field: &Field, mut coeffs: Vec<u32>) -> UniPoly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UniPoly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> UniPoly {
        UniPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(field: &Field, c: u32) -> UniPoly {
        UniPoly::new(field, vec![c])
    }

    /// The polynomial `T`.
    pub fn x(field: &Field) -> UniPoly {
        UniPoly::new(field, vec![0, 1])
    }

    /// `c * T^e`
    pub fn monomial(field: &Field, c: u32, e: usize) -> UniPoly {
        let mut v = vec![0; e + 1];
        v[e] = c;
        UniPoly::new(field, v)
    }

    /// `prod (T - r)`
    pub fn from_roots(field: &Field, roots: &[u32]) -> UniPoly {
        let mut acc = UniPoly::constant(field, 1);
        for &r in roots {
            acc = acc.mul(&UniPoly::new(field, vec![field.neg(r), 1]));
        }
        acc
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).expect("nonzero lead");
        self.scale(inv)
    }

    pub fn scale(&self, c: u32) -> UniPoly {
        let f = &self.field;
        UniPoly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(f, (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(f, (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(f);
        }
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.mul_add(out[i + j], a, b);
            }
        }
        UniPoly::new(f, out)
    }

    pub fn divrem(&self, other: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let f = &self.field;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = other.coeffs.len() - 1;
        let lead_inv = f.inv(other.lead())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((UniPoly::zero(f), self.clone()));
        }
        let mut quot = vec![0u32; rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + d], lead_inv);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            let nc = f.neg(c);
            for (i, &b) in other.coeffs.iter().enumerate() {
                rem[k + i] = f.mul_add(rem[k + i], nc, b);
            }
        }
        rem.truncate(d);
        Ok((UniPoly::new(f, quot), UniPoly::new(f, rem)))
    }

    pub fn rem(&self, other: &UniPoly) -> Result<UniPoly> {
        Ok(self.divrem(other)?.1)
    }

    /// Exact division; errors when `other` does not divide `self`.
    pub fn div_exact(&self, other: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.divrem(other)?;
        if !r.is_zero() {
            return Err(Error::Internal("inexact univariate division".into()));
        }
        Ok(q)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> Result<UniPoly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::pre("gcd of two zero polynomials"));
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn derivative(&self) -> UniPoly {
        let f = &self.field;
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
            .collect();
        UniPoly::new(f, out)
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Evaluates at a point of a larger field through `emb`.
    pub fn eval_in(&self, emb: &crate::field::Embedding, x: u32) -> u32 {
        let big = emb.big();
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| big.add(big.mul(acc, x), emb.map(c)))
    }

    /// Image under a field embedding.
    pub fn map_into(&self, emb: &crate::field::Embedding) -> UniPoly {
        UniPoly::new(emb.big(), self.coeffs.iter().map(|&c| emb.map(c)).collect())
    }

    pub fn mul_mod(&self, other: &UniPoly, modulus: &UniPoly) -> Result<UniPoly> {
        self.mul(other).rem(modulus)
    }

    pub fn pow_mod(&self, mut e: u64, modulus: &UniPoly) -> Result<UniPoly> {
        let mut base = self.rem(modulus)?;
        let mut acc = UniPoly::constant(&self.field, 1).rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, modulus)?;
            }
            base = base.mul_mod(&base, modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// `T^(Q^k) mod modulus` where `Q` is the field size.
    pub fn x_pow_q_pow(&self, k: u32) -> Result<UniPoly> {
        let q = self.field.q() as u64;
        let mut acc = UniPoly::x(&self.field).rem(self)?;
        for _ in 0..k {
            acc = acc.pow_mod(q, self)?;
        }
        Ok(acc)
    }

    /// For `f` with `f' = 0`, the polynomial `g` with `g^p = f`.
    pub fn pth_root(&self) -> Result<UniPoly> {
        if !self.derivative().is_zero() {
            return Err(Error::pre("polynomial is not a p-th power"));
        }
        let f = &self.field;
        let p = f.p() as usize;
        let out = self.coeffs.iter().step_by(p).map(|&c| f.pth_root(c)).collect();
        Ok(UniPoly::new(f, out))
    }

    /// Product of the distinct monic irreducible factors of `self`.
    pub fn radical(&self) -> Result<UniPoly> {
        if self.is_zero() {
            return Err(Error::pre("radical of the zero polynomial"));
        }
        let f = self.monic();
        if f.is_constant() {
            return Ok(UniPoly::constant(&self.field, 1));
        }
        let d = f.derivative();
        if d.is_zero() {
            return f.pth_root()?.radical();
        }
        let u = f.gcd(&d)?;
        // w: irreducible factors whose multiplicity is prime to p
        let w = f.div_exact(&u)?;
        let mut v = u;
        loop {
            let g = v.gcd(&w)?;
            if g.is_constant() {
                break;
            }
            v = v.div_exact(&g)?;
        }
        // every factor left in v has multiplicity divisible by p
        let rest = if v.is_constant() { UniPoly::constant(&self.field, 1) } else { v.pth_root()?.radical()? };
        Ok(w.mul(&rest).monic())
    }

    pub fn is_squarefree(&self) -> Result<bool> {
        Ok(self.radical()?.degree() == self.monic().degree())
    }

    /// Number of distinct roots in the algebraic closure.
    pub fn distinct_root_count(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::pre("the zero polynomial has infinitely many roots"));
        }
        Ok(self.radical()?.degree().unwrap_or(0))
    }

    /// Roots in the coefficient field, by exhaustive evaluation.
    pub fn roots(&self) -> Vec<u32> {
        self.field.elements().filter(|&a| self.eval(a) == 0).collect()
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// pairs `(d, g_d)` where `g_d` is the product of all irreducible factors of degree `d`.
    pub fn distinct_degree_factors(&self) -> Result<Vec<(usize, UniPoly)>> {
        let mut f = self.monic();
        let mut out = Vec::new();
        let x = UniPoly::x(&self.field);
        let q = self.field.q() as u64;
        let mut h = x.clone();
        let mut d = 0usize;
        while f.degree().unwrap_or(0) >= 2 * (d + 1) {
            d += 1;
            h = h.pow_mod(q, &f)?;
            let g = h.sub(&x).gcd(&f)?;
            if !g.is_constant() {
                f = f.div_exact(&g)?;
                h = h.rem(&f)?;
                out.push((d, g));
            }
        }
        if let Some(deg) = f.degree() {
            if deg > 0 {
                out.push((deg, f));
            }
        }
        Ok(out)
    }

    /// Cantor–Zassenhaus equal-degree splitting of a monic squarefree
    /// polynomial whose irreducible factors all have degree `d`.
    pub fn equal_degree_factors(&self, d: usize, rng: &mut dyn RngCore) -> Result<Vec<UniPoly>> {
        let f = self.monic();
        let n = f.degree().unwrap_or(0);
        if n == 0 {
            return Ok(Vec::new());
        }
        if n == d {
            return Ok(vec![f]);
        }
        let field = &self.field;
        let q = field.q();
        loop {
            let h = UniPoly::new(field, (0..n).map(|_| (rng.next_u64() % q as u64) as u32).collect());
            if h.is_constant() {
                continue;
            }
            let g = h.gcd(&f)?;
            let candidate = if !g.is_constant() {
                g
            } else if field.p() == 2 {
                // absolute trace h + h^2 + ... + h^(2^(m d - 1))
                let mut t = h.clone();
                let mut acc = h.clone();
                for _ in 1..(field.m() as usize * d) {
                    t = t.mul_mod(&t, &f)?;
                    acc = acc.add(&t);
                }
                acc.gcd(&f)?
            } else {
                // h^((q^d - 1)/2) = (h * h^q * ... * h^(q^(d-1)))^((q-1)/2)
                let mut norm = h.clone();
                let mut t = h.clone();
                for _ in 1..d {
                    t = t.pow_mod(q as u64, &f)?;
                    norm = norm.mul_mod(&t, &f)?;
                }
                let s = norm.pow_mod((q as u64 - 1) / 2, &f)?;
                s.sub(&UniPoly::constant(field, 1)).gcd(&f)?
            };
            let k = candidate.degree().unwrap_or(0);
            if k > 0 && k < n {
                let other = f.div_exact(&candidate)?;
                let mut out = candidate.equal_degree_factors(d, rng)?;
                out.extend(other.equal_degree_factors(d, rng)?);
                out.sort_by(|a, b| a.coeffs.cmp(&b.coeffs));
                return Ok(out);
            }
        }
    }

    /// Degrees (with repetition) of the distinct irreducible factors.
    pub fn irreducible_factor_degrees(&self) -> Result<Vec<usize>> {
        let r = self.radical()?;
        let mut out = Vec::new();
        for (d, g) in r.distinct_degree_factors()? {
            let count = g.degree().unwrap_or(0) / d;
            out.extend(std::iter::repeat_n(d, count));
        }
        Ok(out)
    }

    /// Lagrange interpolation through `(x_i, y_i)` with distinct `x_i`.
    pub fn interpolate(field: &Field, points: &[(u32, u32)]) -> Result<UniPoly> {
        let mut acc = UniPoly::zero(field);
        for (i, &(xi, yi)) in points.iter().enumerate() {
            let mut basis = UniPoly::constant(field, 1);
            let mut denom = 1u32;
            for (j, &(xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                basis = basis.mul(&UniPoly::new(field, vec![field.neg(xj), 1]));
                denom = field.mul(denom, field.sub(xi, xj));
            }
            let c = field.div(yi, denom)?;
            acc = acc.add(&basis.scale(c));
        }
        Ok(acc)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = self.field.fmt_elem(c);
            match i {
                0 => write!(f, "{cs}")?,
                1 => write!(f, "{cs}*T")?,
                _ => write!(f, "{cs}*T^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u32, m: u32) -> Field {
        Field::new(p, m).unwrap()
    }

    fn poly(f: &Field, c: &[i64]) -> UniPoly {
        UniPoly::new(f, c.iter().map(|&x| f.from_int(x)).collect())
    }

    #[test]
    fn gcd_examples() {
        let f7 = gf(7, 1);
        let g = poly(&f7, &[-1, 0, 1]).gcd(&poly(&f7, &[-1, 1])).unwrap();
        assert_eq!(g, poly(&f7, &[-1, 1]));
        let a = poly(&f7, &[2, 0, 4]);
        assert_eq!(a.gcd(&UniPoly::zero(&f7)).unwrap(), a.monic());
        let f5 = gf(5, 1);
        let g = poly(&f5, &[0, -1, 0, 1]).gcd(&poly(&f5, &[0, 1, 1])).unwrap();
        assert_eq!(g, poly(&f5, &[0, 1, 1]));
        assert!(UniPoly::zero(&f5).gcd(&UniPoly::zero(&f5)).is_err());
    }

    #[test]
    fn distinct_root_count_examples() {
        for f in [gf(2, 1), gf(7, 1), gf(3, 2)] {
            assert_eq!(UniPoly::monomial(&f, 1, 2).distinct_root_count().unwrap(), 1);
        }
        let f7 = gf(7, 1);
        let g = poly(&f7, &[-1, 1]).mul(&poly(&f7, &[-2, 1]));
        assert_eq!(g.distinct_root_count().unwrap(), 2);
        let f2 = gf(2, 1);
        // x^4 + x^2 = x^2 (x+1)^2
        assert_eq!(poly(&f2, &[0, 0, 1, 0, 1]).distinct_root_count().unwrap(), 2);
        assert!(UniPoly::zero(&f2).distinct_root_count().is_err());
    }

    #[test]
    fn distinct_root_count_against_splitting_field_roots() {
        // Roots of x^4 + x^2 over GF(2) all lie in GF(2); count distinct roots in GF(2^4) too.
        let f2 = gf(2, 1);
        let big = gf(2, 4);
        let emb = f2.embedding_into(&big).unwrap();
        let f = poly(&f2, &[0, 0, 1, 0, 1]);
        let roots: Vec<u32> = big.elements().filter(|&a| f.eval_in(&emb, a) == 0).collect();
        assert_eq!(roots.len(), 2);
        // x^9 - x over GF(3) has exactly 9 distinct roots, all in GF(9)
        let f3 = gf(3, 1);
        let mut c = vec![0i64; 10];
        c[9] = 1;
        c[1] = -1;
        assert_eq!(poly(&f3, &c).distinct_root_count().unwrap(), 9);
        // (x^3 - 1)^3 over GF(3) = (x - 1)^9
        let g = poly(&f3, &[-1, 0, 0, 1]);
        let g3 = g.mul(&g).mul(&g);
        assert_eq!(g3.distinct_root_count().unwrap(), 1);
    }

    #[test]
    fn gcd_with_field_equation_counts_rational_roots() {
        for (p, m) in [(2u32, 1u32), (3, 1), (5, 1), (7, 1), (11, 1), (2, 2), (3, 2), (2, 3)] {
            let f = gf(p, m);
            let mut rng = ChaCha8Rng::seed_from_u64(p as u64 * 31 + m as u64);
            let q = f.q();
            for _ in 0..20 {
                let deg = 1 + (rng.next_u32() % 6) as usize;
                let mut c: Vec<u32> = (0..=deg).map(|_| rng.next_u32() % q).collect();
                c[deg] = 1;
                let g = UniPoly::new(&f, c);
                let h = g.x_pow_q_pow(1).unwrap().sub(&UniPoly::x(&f));
                let d = h.gcd(&g).unwrap();
                assert_eq!(d.degree().unwrap(), g.roots().len());
            }
        }
    }

    #[test]
    fn factorization_recovers_known_factors() {
        let f = gf(3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        // (x^2 + 1)(x^2 + x + 2)(x - 1): degrees 2, 2, 1 over GF(3)
        let a = poly(&f, &[1, 0, 1]);
        let b = poly(&f, &[2, 1, 1]);
        let c = poly(&f, &[-1, 1]);
        let g = a.mul(&b).mul(&c);
        let mut degs = g.irreducible_factor_degrees().unwrap();
        degs.sort();
        assert_eq!(degs, vec![1, 2, 2]);
        let ddf = g.distinct_degree_factors().unwrap();
        let (d, quad) = ddf.iter().find(|(d, _)| *d == 2).unwrap();
        assert_eq!(*d, 2);
        let parts = quad.equal_degree_factors(2, &mut rng).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts.contains(&a.monic()) && parts.contains(&b.monic()));

        let f2 = gf(2, 2);
        // product of all four linear factors over GF(4) is T^4 - T
        let all = UniPoly::from_roots(&f2, &[0, 1, 2, 3]);
        let lin = all.equal_degree_factors(1, &mut rng).unwrap();
        assert_eq!(lin.len(), 4);
    }

    #[test]
    fn interpolation_hits_points() {
        let f = gf(11, 1);
        let pts = [(1, 4), (2, 9), (5, 0), (7, 3)];
        let g = UniPoly::interpolate(&f, &pts).unwrap();
        assert!(g.degree().unwrap() < 4);
        for (x, y) in pts {
            assert_eq!(g.eval(x), y);
        }
    }
}
