//! Key recovery from the determinant of the Jacobian.
//!
//! For `G = mu o F o lam`, `det J(G) = det(mu) det(lam) (det J(F)) o lam`. With
//! `F = (x_i^d)` the right side is `alpha prod_i (lam_i . x)^(d-1)`, so the
//! linear factors of `det J(G)` are the rows of `lam` up to scalars.

use std::collections::HashMap;

use crate::cryptosystem::{KeyPair, Scheme};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linear::{self, LinearMap};
use crate::poly::{Monomial, Polynomial};
use crate::system::{compose, PolySystem};

/// Largest number of candidate linear forms tried by [`linear_factors`].
pub const MAX_LINEAR_FORMS: u64 = 1_000_000;

/// Largest size for which the determinant is expanded by minors.
pub const MINOR_EXPANSION_MAX: usize = 6;

pub fn det_jacobian(g: &PolySystem) -> Result<Polynomial> {
    if g.len() != g.nvars() {
        return Err(Error::NotApplicable(format!(
            "the Jacobian of {} polynomials in {} variables is not square",
            g.len(),
            g.nvars()
        )));
    }
    let j = g.jacobian();
    if g.len() <= MINOR_EXPANSION_MAX {
        Ok(det_by_minors(&j))
    } else {
        det_bareiss(j)
    }
}

/// Laplace expansion along rows, memoized on the set of remaining columns.
pub fn det_by_minors(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    let (field, nvars) = (m[0][0].field().clone(), m[0][0].nvars());
    let mut memo: HashMap<u64, Polynomial> = HashMap::new();
    fn rec(m: &[Vec<Polynomial>], row: usize, cols: u64, memo: &mut HashMap<u64, Polynomial>, one: &Polynomial) -> Polynomial {
        if row == m.len() {
            return one.clone();
        }
        if let Some(p) = memo.get(&cols) {
            return p.clone();
        }
        let mut acc = Polynomial::zero(one.field(), one.nvars());
        let mut sign_neg = false;
        for j in 0..m.len() {
            if cols & (1 << j) == 0 {
                continue;
            }
            if !m[row][j].is_zero() {
                let minor = rec(m, row + 1, cols & !(1 << j), memo, one);
                let term = m[row][j].mul(&minor);
                acc = if sign_neg { acc.sub(&term) } else { acc.add(&term) };
            }
            sign_neg = !sign_neg;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    let one = Polynomial::constant(&field, nvars, 1);
    rec(m, 0, (1u64 << n) - 1, &mut memo, &one)
}

/// Fraction-free Gaussian elimination; every division is exact.
pub fn det_bareiss(mut m: Vec<Vec<Polynomial>>) -> Result<Polynomial> {
    let n = m.len();
    let (field, nvars) = (m[0][0].field().clone(), m[0][0].nvars());
    let mut prev = Polynomial::constant(&field, nvars, 1);
    let mut negate = false;
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(Polynomial::zero(&field, nvars)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num
                    .div_exact(&prev)?
                    .ok_or_else(|| Error::Internal("inexact division in fraction-free elimination".into()))?;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if negate { det.neg() } else { det })
}

/// `f = constant * cofactor * prod factor^mult`, with every factor linear and
/// normalized (first nonzero variable coefficient 1) and the cofactor monic
/// without linear factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFactorization {
    pub constant: u32,
    pub factors: Vec<(Polynomial, u32)>,
    pub cofactor: Polynomial,
}

impl LinearFactorization {
    pub fn expand(&self) -> Polynomial {
        let mut acc = self.cofactor.scale(self.constant);
        for (l, e) in &self.factors {
            acc = acc.mul(&l.pow(*e));
        }
        acc
    }
}

/// Normalized linear forms in `n` variables in a fixed order: homogeneous ones,
/// then with constants if requested.
fn normalized_forms(field: &Field, n: usize, with_constant: bool) -> impl Iterator<Item = Polynomial> + '_ {
    let q = field.q() as u64;
    let consts: Vec<u32> = if with_constant { field.elements().collect() } else { vec![0] };
    (0..n).flat_map(move |lead| {
        let tail = n - lead - 1;
        let consts = consts.clone();
        (0..q.pow(tail as u32)).flat_map(move |code| {
            let mut coeffs = vec![0u32; n];
            coeffs[lead] = 1;
            for t in 0..tail {
                coeffs[lead + 1 + t] = ((code / q.pow(t as u32)) % q) as u32;
            }
            consts.clone().into_iter().map(move |c| Polynomial::linear(field, &coeffs, c))
        })
    })
}

/// Exhaustive trial division by normalized linear forms.
pub fn linear_factors(f: &Polynomial) -> Result<LinearFactorization> {
    if f.is_zero() {
        return Err(Error::pre("the zero polynomial has no factorization"));
    }
    let field = f.field().clone();
    let n = f.nvars();
    let homogeneous = f.degree().is_none_or(|d| f.homogeneous_part(d) == *f);
    let q = field.q() as u64;
    let count = (q.saturating_pow(n as u32) - 1) / (q - 1) * if homogeneous { 1 } else { q };
    if count > MAX_LINEAR_FORMS {
        return Err(Error::Budget(format!("{count} linear forms exceed the trial-division budget")));
    }
    let mut rest = f.clone();
    let mut factors = Vec::new();
    if rest.degree().unwrap_or(0) > 0 {
        for l in normalized_forms(&field, n, !homogeneous) {
            let mut mult = 0;
            while let Some(qt) = rest.div_exact(&l)? {
                rest = qt;
                mult += 1;
            }
            if mult > 0 {
                factors.push((l, mult));
            }
            if rest.degree().unwrap_or(0) == 0 {
                break;
            }
        }
    }
    let constant = rest.leading_term().map(|(_, c)| c).unwrap();
    let out = LinearFactorization { constant, factors, cofactor: rest.monic() };
    if out.expand() != *f {
        return Err(Error::Internal("linear factorization does not multiply back".into()));
    }
    Ok(out)
}

/// Candidate key found by the attack.
#[derive(Clone, Debug)]
pub struct RecoveredKey {
    pub lam: LinearMap,
    pub mu: LinearMap,
    /// `mu o F o lam == G` symbolically.
    pub certified: bool,
    pub key: KeyPair,
}

/// `mu` with `G_r = sum_i mu[r][i] h_i` for all `r`, by coefficient comparison.
fn solve_for_mu(g: &PolySystem, h: &[Polynomial]) -> Result<LinearMap> {
    let field = g.field();
    let mut monos: Vec<Monomial> =
        g.polys().iter().chain(h).flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
    monos.sort();
    monos.dedup();
    let a: Vec<Vec<u32>> = monos.iter().map(|m| h.iter().map(|p| p.coeff(m)).collect()).collect();
    let mut rows = Vec::with_capacity(g.len());
    for (r, gr) in g.polys().iter().enumerate() {
        let b: Vec<u32> = monos.iter().map(|m| gr.coeff(m)).collect();
        match linear::solve(field, &a, &b) {
            Some(x) => rows.push(x),
            None => {
                return Err(Error::AttackFailed(format!(
                    "polynomial {} of G is not a combination of the recovered powers",
                    r + 1
                )))
            }
        }
    }
    LinearMap::new(field, rows)
}

/// Recovers an equivalent key for `G = mu o (x_i^d) o lam`.
pub fn attack_square_1local(g: &PolySystem, d: u32) -> Result<RecoveredKey> {
    let n = g.nvars();
    let det = det_jacobian(g)?;
    if det.is_zero() {
        return Err(Error::AttackFailed("det J(G) vanishes identically".into()));
    }
    if d < 2 {
        return Err(Error::AttackFailed(format!("exponent {d} leaves no linear factors in det J(G)")));
    }
    let fac = linear_factors(&det)?;
    let profile_ok = fac.factors.len() == n && fac.factors.iter().all(|(_, e)| *e == d - 1) && fac.cofactor.is_constant();
    if !profile_ok {
        let mults: Vec<u32> = fac.factors.iter().map(|(_, e)| *e).collect();
        return Err(Error::AttackFailed(format!(
            "det J(G) has linear factor multiplicities {mults:?} and cofactor of degree {}, expected {n} factors of multiplicity {}",
            fac.cofactor.degree().unwrap_or(0),
            d - 1
        )));
    }
    let field = g.field();
    let rows: Vec<Vec<u32>> = fac.factors.iter().map(|(l, _)| l.as_linear().unwrap().0).collect();
    let lam = LinearMap::new(field, rows)?;
    if lam.rank() < n {
        return Err(Error::AttackFailed("recovered rows are linearly dependent".into()));
    }
    let powers: Vec<Polynomial> = fac.factors.iter().map(|(l, _)| l.pow(d)).collect();
    let mu = solve_for_mu(g, &powers)?;
    if mu.rank() < n {
        return Err(Error::AttackFailed("recovered mu is singular".into()));
    }
    let key = KeyPair::from_maps(Scheme::Square1, field, d, lam.clone(), mu.clone())?;
    let local = crate::cryptosystem::local_map(Scheme::Square1, field, n, d)?;
    let certified = compose(&mu, &local, &lam)? == *g;
    Ok(RecoveredKey { lam, mu, certified, key })
}

/// A linear factor of `det J(G)` tested as the input of a univariate block polynomial.
#[derive(Clone, Debug)]
pub struct PartialCandidate {
    pub form: Polynomial,
    pub multiplicity: u32,
    /// Some combination of `G` is a nonconstant polynomial in `form` alone.
    pub confirmed: bool,
    /// That combination, when confirmed.
    pub witness: Option<Polynomial>,
}

/// Candidates for `lam` rows feeding univariate block polynomials of degree at most `max_degree`.
pub fn partial_attack_clocal(g: &PolySystem, max_degree: u32) -> Result<Vec<PartialCandidate>> {
    let det = det_jacobian(g)?;
    if det.is_zero() {
        return Ok(Vec::new());
    }
    let fac = linear_factors(&det)?;
    let field = g.field();
    let n = g.nvars();
    let mut out = Vec::new();
    for (l, mult) in fac.factors {
        // span(G) ∩ span(l, l^2, ..., l^D) modulo constants
        let one = Polynomial::constant(field, n, 1);
        let mut gens: Vec<Polynomial> = g.polys().to_vec();
        let k = gens.len();
        let mut power = one.clone();
        for _ in 0..max_degree {
            power = power.mul(&l);
            gens.push(power.clone());
        }
        gens.push(one);
        let mut monos: Vec<Monomial> = gens.iter().flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
        monos.sort();
        monos.dedup();
        // kernel vectors of [G | powers] give combinations of G lying in the power span
        let cols: Vec<Vec<u32>> = gens.iter().map(|p| monos.iter().map(|m| p.coeff(m)).collect()).collect();
        let kernel = kernel_basis(field, &cols);
        let witness = kernel.iter().find_map(|v| {
            let comb = (0..k).fold(Polynomial::zero(field, n), |acc, i| acc.add(&g.polys()[i].scale(v[i])));
            (!comb.is_constant()).then_some(comb)
        });
        out.push(PartialCandidate { form: l, multiplicity: mult, confirmed: witness.is_some(), witness });
    }
    Ok(out)
}

/// Basis of `{v : sum_j v_j cols[j] = 0}`.
fn kernel_basis(field: &Field, cols: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let nc = cols.len();
    let nr = cols.first().map_or(0, |c| c.len());
    let mut rows: Vec<Vec<u32>> = (0..nr).map(|r| (0..nc).map(|j| cols[j][r]).collect()).collect();
    let pivots = linear::rref(field, &mut rows);
    let mut out = Vec::new();
    for free in (0..nc).filter(|j| !pivots.contains(j)) {
        let mut v = vec![0u32; nc];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = field.neg(rows[r][free]);
        }
        out.push(v);
    }
    out
}
