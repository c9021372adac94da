//! Semi-local instances `G = mu o F o lam` and their solvers.
//!
//! `F` is a concatenation of blocks; block `i` only uses the variables
//! `x_{ic+1}, ..., x_{ic+c}`. Two solvers are provided. [`solve_closed`]
//! finds every point over the algebraic closure: linear members of
//! `V_{G,c'}` eliminate most variables, a re-closure of the reduced system
//! yields univariate polynomials, and the few remaining variables are
//! enumerated over a common point field `GF(q^N)`. [`solve_rational`] adjoins
//! the `p`-power chain of field equations, keeps `U = V ∩ k[x_1..x_n]`,
//! eliminates with the linear part of `U` and enumerates the rest over `k`.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::closure::{last_fall_degree, ClosureEngine, LastFallReport};
use crate::error::{Error, Result};
use crate::field::{Embedding, Field};
use crate::groebner;
use crate::linear::LinearMap;
use crate::poly::{Monomial, Polynomial};
use crate::system::{compose, PolySystem};
use crate::unipoly::UniPoly;

/// Limits shared by the solvers. All of them are user-facing flags in the CLI.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Largest number of candidate points enumerated.
    pub budget: u64,
    /// Largest extension degree `N` of the point field over `k`.
    pub max_ext_degree: u32,
    /// Largest monomial count of an auxiliary re-closure.
    pub closure_budget: u64,
    /// Also compute the exact last fall degree of `G` and compare it with the bound.
    pub check_bound: bool,
    /// Stop the rational closure below the cap once a Gröbner basis of
    /// `G ∪ E'` lies in it; the linear part of `U` is then already complete.
    pub early_stop: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { budget: 1 << 24, max_ext_degree: 12, closure_budget: 200_000, check_bound: false, early_stop: true }
    }
}

/// Number of monomials of degree at most `d` in `n` variables, saturating.
pub fn monomial_count(n: usize, d: usize) -> u64 {
    // C(n + d, n)
    let mut acc: u128 = 1;
    for i in 1..=n as u128 {
        acc = acc * (d as u128 + i) / i;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

pub fn ceil_log2(s: usize) -> usize {
    if s <= 1 {
        0
    } else {
        (usize::BITS - (s - 1).leading_zeros()) as usize
    }
}

pub fn floor_log2(s: usize) -> usize {
    if s <= 1 {
        0
    } else {
        (usize::BITS - 1 - s.leading_zeros()) as usize
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Local blocks together with the disguising maps and the public system.
#[derive(Clone, Debug)]
pub struct SemiLocalInstance {
    field: Field,
    c: usize,
    blocks: Vec<PolySystem>,
    lam: LinearMap,
    mu: LinearMap,
    lam_seed: Option<u64>,
    mu_seed: Option<u64>,
    local: PolySystem,
    public: PolySystem,
}

impl SemiLocalInstance {
    /// Samples `lam` and `mu` from the seeds.
    pub fn new(blocks: Vec<PolySystem>, lam_seed: u64, mu_seed: u64) -> Result<SemiLocalInstance> {
        let (field, n, m) = Self::shape(&blocks)?;
        let lam = LinearMap::random_invertible(&field, n, lam_seed);
        let mu = LinearMap::random_invertible(&field, m, mu_seed);
        let mut inst = SemiLocalInstance::with_maps(blocks, lam, mu)?;
        inst.lam_seed = Some(lam_seed);
        inst.mu_seed = Some(mu_seed);
        Ok(inst)
    }

    pub fn with_maps(blocks: Vec<PolySystem>, lam: LinearMap, mu: LinearMap) -> Result<SemiLocalInstance> {
        let (field, n, m) = Self::shape(&blocks)?;
        let c = blocks[0].nvars();
        if lam.rows() != n || lam.cols() != n || mu.rows() != m || mu.cols() != m {
            return Err(Error::dim(format!(
                "maps must be {n}x{n} and {m}x{m}, got {}x{} and {}x{}",
                lam.rows(),
                lam.cols(),
                mu.rows(),
                mu.cols()
            )));
        }
        let lam = lam.with_inverse()?;
        let mu = mu.with_inverse()?;
        let local = local_system(&blocks)?;
        let public = compose(&mu, &local, &lam)?;
        Ok(SemiLocalInstance { field, c, blocks, lam, mu, lam_seed: None, mu_seed: None, local, public })
    }

    /// Identity disguise: `G = F`.
    pub fn undisguised(blocks: Vec<PolySystem>) -> Result<SemiLocalInstance> {
        let (field, n, m) = Self::shape(&blocks)?;
        SemiLocalInstance::with_maps(blocks, LinearMap::identity(&field, n), LinearMap::identity(&field, m))
    }

    fn shape(blocks: &[PolySystem]) -> Result<(Field, usize, usize)> {
        let first = blocks.first().ok_or_else(|| Error::dim("an instance needs at least one block"))?;
        let c = first.nvars();
        for b in blocks {
            if b.nvars() != c {
                return Err(Error::dim(format!("blocks of widths {c} and {}", b.nvars())));
            }
            if b.field() != first.field() {
                return Err(Error::FieldMismatch(format!("{} and {}", b.field(), first.field())));
            }
        }
        let m = blocks.iter().map(|b| b.len()).sum();
        Ok((first.field().clone(), c * blocks.len(), m))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Block width `c`.
    pub fn c(&self) -> usize {
        self.c
    }

    pub fn n(&self) -> usize {
        self.c * self.blocks.len()
    }

    pub fn m(&self) -> usize {
        self.public.len()
    }

    pub fn blocks(&self) -> &[PolySystem] {
        &self.blocks
    }

    pub fn lam(&self) -> &LinearMap {
        &self.lam
    }

    pub fn mu(&self) -> &LinearMap {
        &self.mu
    }

    pub fn seeds(&self) -> (Option<u64>, Option<u64>) {
        (self.lam_seed, self.mu_seed)
    }

    /// `F`, the blocks placed in their variable windows.
    pub fn local(&self) -> &PolySystem {
        &self.local
    }

    /// `G = mu o F o lam`.
    pub fn public(&self) -> &PolySystem {
        &self.public
    }
}

/// Concatenates blocks, moving block `i` to variables `ic .. ic + c - 1`.
pub fn local_system(blocks: &[PolySystem]) -> Result<PolySystem> {
    let c = blocks.first().map_or(0, |b| b.nvars());
    let n = c * blocks.len();
    let mut polys = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        let map: Vec<usize> = (0..c).map(|j| i * c + j).collect();
        polys.extend(b.polys().iter().map(|p| p.rename_vars(n, &map)));
    }
    PolySystem::new(polys)
}

/// What the solvers need to know about one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockAnalysis {
    /// `|Z(F_i)|` over the algebraic closure (the quotient dimension).
    pub points: usize,
    pub radical: bool,
    pub last_fall: LastFallReport,
    /// Every closed point of the block is defined over `GF(q^point_field_degree)`.
    pub point_field_degree: u32,
}

/// Minimal polynomial of `x_i` in `k[x]/(gb)`, or `None` when the quotient
/// is not finite in that direction within `max_deg`.
pub fn minimal_polynomial(gb: &[Polynomial], field: &Field, nvars: usize, i: usize, max_deg: usize) -> Option<UniPoly> {
    let x = Polynomial::var(field, nvars, i);
    let mut nfs: Vec<Polynomial> = vec![groebner::normal_form(&Polynomial::constant(field, nvars, 1), gb)];
    let mut power = Polynomial::constant(field, nvars, 1);
    for k in 1..=max_deg {
        power = groebner::normal_form(&power.mul(&x), gb);
        let target = power.clone();
        // solve sum a_j nf_j = target over the monomials that occur
        let mut monos: Vec<Monomial> =
            nfs.iter().chain(std::iter::once(&target)).flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
        monos.sort();
        monos.dedup();
        let a: Vec<Vec<u32>> = monos.iter().map(|m| nfs.iter().map(|p| p.coeff(m)).collect()).collect();
        let b: Vec<u32> = monos.iter().map(|m| target.coeff(m)).collect();
        let sol = if monos.is_empty() { Some(vec![0; nfs.len()]) } else { crate::linear::solve(field, &a, &b) };
        if let Some(sol) = sol {
            let mut coeffs: Vec<u32> = sol.iter().map(|&v| field.neg(v)).collect();
            coeffs.push(1);
            debug_assert_eq!(coeffs.len(), k + 1);
            return Some(UniPoly::new(field, coeffs));
        }
        nfs.push(target);
    }
    None
}

/// Dimension of `k[x]/(gb)` when finite.
pub fn quotient_dimension(gb: &[Polynomial], nvars: usize) -> Option<usize> {
    let leads: Vec<&Monomial> = gb.iter().map(|g| g.leading_term().unwrap().0).collect();
    if leads.iter().any(|m| m.degree() == 0) {
        return Some(0);
    }
    let mut bounds = Vec::with_capacity(nvars);
    for i in 0..nvars {
        let pure = leads
            .iter()
            .filter(|m| m.exps().iter().enumerate().all(|(j, &e)| j == i || e == 0))
            .map(|m| m.exps()[i])
            .min()?;
        bounds.push(pure);
    }
    let mut count = 0;
    let mut e = vec![0u32; nvars];
    loop {
        let m = Monomial::new(e.clone());
        if !leads.iter().any(|l| l.divides(&m)) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == nvars {
                return Some(count);
            }
            e[i] += 1;
            if e[i] < bounds[i] {
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}

/// Radicality, closed-point count, last fall degree and point field of a block.
pub fn analyze_block(block: &PolySystem, lastfall_cap: usize) -> Result<BlockAnalysis> {
    let field = block.field();
    let n = block.nvars();
    let gb = groebner::groebner_basis(block.polys())?;
    let dim = quotient_dimension(&gb, n)
        .ok_or_else(|| Error::pre("block ideal is not zero-dimensional; its zero set is infinite"))?;
    let mut radical = true;
    let mut ext = 1u32;
    for i in 0..n {
        let Some(mp) = minimal_polynomial(&gb, field, n, i, dim.max(1)) else {
            return Err(Error::Internal("minimal polynomial exceeds the quotient dimension".into()));
        };
        if mp.is_constant() {
            continue;
        }
        // Seidenberg: over a perfect field the ideal is radical iff every
        // coordinate's minimal polynomial is squarefree.
        if !mp.is_squarefree()? {
            radical = false;
        }
        for d in mp.irreducible_factor_degrees()? {
            ext = lcm(ext, d as u32);
        }
    }
    let cap = lastfall_cap.max(block.degree() as usize);
    let last_fall = last_fall_degree(block, cap)?;
    Ok(BlockAnalysis { points: dim, radical, last_fall, point_field_degree: ext })
}

/// Result of a solver run.
#[derive(Clone, Debug)]
pub struct SolveReport {
    /// Solutions, sorted; coordinates in `point_field`.
    pub points: Vec<Vec<u32>>,
    pub point_field: Field,
    /// Extension degree of `point_field` over the base field.
    pub ext_degree: u32,
    /// `s = |Z(G)|` or `s_0 = |Z_k(G)|` as counted by the solver.
    pub s: usize,
    /// Degree bound of the main closure (`c'` or `Δp`).
    pub cap: usize,
    /// Degree the main closure actually reached.
    pub closure_degree: usize,
    pub c_prime: Option<usize>,
    pub delta: Option<usize>,
    pub eliminated: usize,
    pub remaining: usize,
    pub bound: Option<BoundCheck>,
    pub warnings: Vec<String>,
    pub timings: Vec<(&'static str, Duration)>,
}

/// Exact `d_G` compared with `s + c' ceil(log2 s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub d_g: usize,
    pub bound: usize,
    pub certified: bool,
    pub holds: bool,
}

/// Linear relations `x_piv = expr(kept vars)` from an echelon basis of linear polynomials.
#[derive(Clone, Debug)]
pub struct Elimination {
    /// Original indices of the variables that stay.
    pub kept: Vec<usize>,
    /// For every original variable, a polynomial of degree <= 1 in the kept variables.
    pub exprs: Vec<Polynomial>,
    /// The relations contain a nonzero constant: no solutions.
    pub inconsistent: bool,
}

impl Elimination {
    pub fn from_linear(field: &Field, nvars: usize, linear: &[Polynomial]) -> Elimination {
        let mut rows: Vec<Vec<u32>> = linear
            .iter()
            .map(|p| {
                let (mut v, c) = p.as_linear().expect("linear polynomial");
                v.push(c);
                v
            })
            .collect();
        let pivots = crate::linear::rref(field, &mut rows);
        if pivots.contains(&nvars) {
            return Elimination { kept: (0..nvars).collect(), exprs: Vec::new(), inconsistent: true };
        }
        let kept: Vec<usize> = (0..nvars).filter(|i| !pivots.contains(i)).collect();
        let r = kept.len();
        let mut exprs: Vec<Polynomial> = Vec::with_capacity(nvars);
        for v in 0..nvars {
            if let Some(pos) = kept.iter().position(|&k| k == v) {
                exprs.push(Polynomial::var(field, r, pos));
            } else {
                let row = &rows[pivots.iter().position(|&p| p == v).unwrap()];
                let coeffs: Vec<u32> = kept.iter().map(|&k| field.neg(row[k])).collect();
                exprs.push(Polynomial::linear(field, &coeffs, field.neg(row[nvars])));
            }
        }
        Elimination { kept, exprs, inconsistent: false }
    }

    pub fn eliminated(&self) -> usize {
        if self.inconsistent {
            0
        } else {
            self.exprs.len() - self.kept.len()
        }
    }

    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        p.substitute(&self.exprs)
    }

    /// Composition: `self` followed by a further elimination on the kept variables.
    pub fn then(&self, next: &Elimination) -> Result<Elimination> {
        let exprs = self.exprs.iter().map(|e| e.substitute(&next.exprs)).collect::<Result<_>>()?;
        let kept = next.kept.iter().map(|&i| self.kept[i]).collect();
        Ok(Elimination { kept, exprs, inconsistent: self.inconsistent || next.inconsistent })
    }

    /// Full point from values of the kept variables.
    pub fn lift(&self, emb: &Embedding, point: &[u32]) -> Result<Vec<u32>> {
        self.exprs.iter().map(|e| e.eval_in(emb, point)).collect()
    }
}

/// Enumerates common zeros over `emb.big()` of polynomials in `nvars`
/// variables, with per-variable candidate sets and prefix pruning.
fn enumerate_zeros(
    polys: &[Polynomial],
    nvars: usize,
    emb: &Embedding,
    candidates: Vec<Vec<u32>>,
    budget: u64,
) -> Result<Vec<Vec<u32>>> {
    let total = candidates.iter().fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128));
    if total > budget as u128 {
        return Err(Error::Budget(format!("{total} candidate points exceed the budget of {budget}")));
    }
    // check each polynomial as soon as its last variable is assigned
    let mut by_level: Vec<Vec<Polynomial>> = vec![Vec::new(); nvars + 1];
    for p in polys {
        let lvl = p.support_vars().last().map_or(0, |&v| v + 1);
        by_level[lvl].push(p.map_coeffs(emb));
    }
    if by_level[0].iter().any(|p| p.constant_term() != 0) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut point = vec![0u32; nvars];
    fn rec(
        lvl: usize,
        point: &mut Vec<u32>,
        by_level: &[Vec<Polynomial>],
        candidates: &[Vec<u32>],
        out: &mut Vec<Vec<u32>>,
    ) {
        if lvl == point.len() {
            out.push(point.clone());
            return;
        }
        for &a in &candidates[lvl] {
            point[lvl] = a;
            if by_level[lvl + 1].iter().all(|p| p.eval(point).unwrap() == 0) {
                rec(lvl + 1, point, by_level, candidates, out);
            }
        }
        point[lvl] = 0;
    }
    rec(0, &mut point, &by_level, &candidates, &mut out);
    out.sort();
    Ok(out)
}

/// Per-variable candidate values: the roots in `emb.big()` of the gcd of the
/// univariate members, or the whole field when a variable has none.
fn univariate_candidates(polys: &[Polynomial], nvars: usize, emb: &Embedding) -> Result<Vec<Vec<u32>>> {
    let field = emb.small();
    let mut out = Vec::with_capacity(nvars);
    for v in 0..nvars {
        let mut g: Option<UniPoly> = None;
        for p in polys {
            if p.is_zero() || p.support_vars() != [v] {
                continue;
            }
            let deg = p.degree().unwrap() as usize;
            let mut coeffs = vec![0u32; deg + 1];
            for (m, c) in p.terms() {
                coeffs[m.exps()[v] as usize] = c;
            }
            let u = UniPoly::new(field, coeffs);
            g = Some(match g {
                None => u.monic(),
                Some(h) => h.gcd(&u)?,
            });
        }
        out.push(match g {
            Some(u) => {
                let big = u.map_into(emb);
                big.roots()
            }
            None => emb.big().elements().collect(),
        });
    }
    Ok(out)
}

/// All common zeros of `system` with coordinates in `GF(q^N)`.
pub fn brute_zero_set(system: &PolySystem, ext_degree: u32, budget: u64) -> Result<SolveReport> {
    let t0 = Instant::now();
    let field = system.field();
    let big = field.extension(ext_degree)?;
    let emb = field.embedding_into(&big)?;
    let n = system.nvars();
    let candidates = univariate_candidates(system.polys(), n, &emb)?;
    let points = enumerate_zeros(system.polys(), n, &emb, candidates, budget)?;
    Ok(SolveReport {
        s: points.len(),
        points,
        point_field: big,
        ext_degree,
        cap: 0,
        closure_degree: 0,
        c_prime: None,
        delta: None,
        eliminated: 0,
        remaining: n,
        bound: None,
        warnings: Vec::new(),
        timings: vec![("enumerate", t0.elapsed())],
    })
}

/// Separating linear form and univariate parametrization of a finite zero set.
#[derive(Clone, Debug)]
pub struct ShapeBasis {
    /// Field holding `t`, the points and the polynomials.
    pub field: Field,
    /// Coefficients of `t = sum t_i x_i`.
    pub t: Vec<u32>,
    /// A variable with nonzero coefficient in `t`; it is recovered from `t` itself.
    pub pivot: usize,
    /// `prod (T - t(alpha))`, of degree `s`.
    pub g_n: UniPoly,
    /// `x_i = g_i(t)` for every variable other than the pivot (`None` at the pivot).
    pub g: Vec<Option<UniPoly>>,
}

impl ShapeBasis {
    pub fn s(&self) -> usize {
        self.g_n.degree().unwrap_or(0)
    }

    /// The zero set described by `{g_n(t), x_i - g_i(t)}`.
    pub fn points(&self) -> Result<Vec<Vec<u32>>> {
        let f = &self.field;
        let mut out = Vec::new();
        for tau in self.g_n.roots() {
            let mut pt = vec![0u32; self.t.len()];
            let mut rest = tau;
            for (i, g) in self.g.iter().enumerate() {
                if let Some(g) = g {
                    pt[i] = g.eval(tau);
                    rest = f.sub(rest, f.mul(self.t[i], pt[i]));
                }
            }
            pt[self.pivot] = f.div(rest, self.t[self.pivot])?;
            out.push(pt);
        }
        out.sort();
        Ok(out)
    }

    /// The system `{g_n(t), x_i - g_i(t)}` as multivariate polynomials over `field`.
    pub fn as_system(&self) -> Result<PolySystem> {
        let f = &self.field;
        let n = self.t.len();
        let t = Polynomial::linear(f, &self.t, 0);
        let lift = |u: &UniPoly| -> Result<Polynomial> {
            let poly = Polynomial::from_terms(
                f,
                1,
                u.coeffs().iter().enumerate().map(|(e, &c)| (Monomial::new(vec![e as u32]), c)),
            );
            poly.substitute(std::slice::from_ref(&t))
        };
        let mut polys = vec![lift(&self.g_n)?];
        for (i, g) in self.g.iter().enumerate() {
            if let Some(g) = g {
                polys.push(Polynomial::var(f, n, i).sub(&lift(g)?));
            }
        }
        PolySystem::new(polys)
    }
}

/// Shape basis of `Z(F)` over `GF(q^N)`; the separating form may need a further extension.
pub fn shape_basis(system: &PolySystem, ext_degree: u32, seed: u64, budget: u64) -> Result<ShapeBasis> {
    use rand::SeedableRng;
    let zs = brute_zero_set(system, ext_degree, budget)?;
    let pts = zs.points;
    let s = pts.len();
    if s == 0 {
        return Err(Error::pre("empty zero set has no shape basis"));
    }
    let base = zs.point_field;
    let n = system.nvars();
    let pairs = (s * (s - 1) / 2) as u64;
    // the separating form lives in an extension L with |L| > C(s, 2)
    let mut ldeg = 1u32;
    while (base.q() as u64).pow(ldeg) <= pairs {
        ldeg += 1;
    }
    let lf = base.extension(ldeg)?;
    let emb = base.embedding_into(&lf)?;
    let lpts: Vec<Vec<u32>> = pts.iter().map(|p| p.iter().map(|&a| emb.map(a)).collect()).collect();
    let separates = |t: &[u32]| -> Option<Vec<u32>> {
        let vals: Vec<u32> =
            lpts.iter().map(|p| p.iter().zip(t).fold(0, |acc, (&x, &c)| lf.mul_add(acc, x, c))).collect();
        let mut sorted = vals.clone();
        sorted.sort();
        sorted.dedup();
        (sorted.len() == vals.len()).then_some(vals)
    };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = None;
    for i in 0..n {
        let mut t = vec![0; n];
        t[i] = 1;
        if let Some(v) = separates(&t) {
            chosen = Some((t, v));
            break;
        }
    }
    const ATTEMPTS: usize = 1000;
    for _ in 0..ATTEMPTS {
        if chosen.is_some() {
            break;
        }
        let t: Vec<u32> = (0..n).map(|_| crate::linear::random_elem(&lf, &mut rng)).collect();
        if let Some(v) = separates(&t) {
            chosen = Some((t, v));
        }
    }
    let (t, vals) = chosen.ok_or_else(|| Error::Budget(format!("no separating form in {ATTEMPTS} attempts")))?;
    let pivot = t.iter().position(|&c| c != 0).unwrap();
    let g_n = UniPoly::from_roots(&lf, &vals);
    let mut g = Vec::with_capacity(n);
    for i in 0..n {
        if i == pivot {
            g.push(None);
            continue;
        }
        let pairs: Vec<(u32, u32)> = vals.iter().zip(&lpts).map(|(&v, p)| (v, p[i])).collect();
        g.push(Some(UniPoly::interpolate(&lf, &pairs)?));
    }
    Ok(ShapeBasis { field: lf, t, pivot, g_n, g })
}

/// `p`-power chain replacing the field equations of `k = GF(p^m)`.
///
/// Original variable `i` keeps index `i`; its chain variables `x_{i1}..x_{i,m-1}`
/// get indices `n + i(m-1) + (j-1)`. For `m = 1` the chain is `x_i^p - x_i`.
pub fn field_equation_chain(n: usize, field: &Field) -> PolySystem {
    let m = field.m() as usize;
    let p = field.p();
    let total = n * m;
    let var = |i: usize, j: usize| if j == 0 { i } else { n + i * (m - 1) + (j - 1) };
    let mut polys = Vec::new();
    for i in 0..n {
        for j in 0..m {
            let next = var(i, (j + 1) % m);
            let xp = Polynomial::var(field, total, var(i, j)).pow(p);
            polys.push(xp.sub(&Polynomial::var(field, total, next)));
        }
    }
    PolySystem::new(polys).expect("n >= 1")
}

/// `G` in the ring of `G ∪ E'`.
pub fn with_field_chain(system: &PolySystem) -> Result<PolySystem> {
    let n = system.nvars();
    let chain = field_equation_chain(n, system.field());
    let total = chain.nvars();
    let ident: Vec<usize> = (0..n).collect();
    let lifted: Vec<Polynomial> = system.polys().iter().map(|p| p.rename_vars(total, &ident)).collect();
    PolySystem::new(lifted)?.concat(&chain)
}

fn drop_trailing_vars(p: &Polynomial, n: usize) -> Polynomial {
    Polynomial::from_terms(p.field(), n, p.terms().map(|(m, c)| (Monomial::new(m.exps()[..n].to_vec()), c)).collect::<Vec<_>>())
}

/// Largest `D <= want` whose closure in `nvars` variables fits the budget.
fn affordable_degree(nvars: usize, want: usize, budget: u64) -> usize {
    let mut d = want;
    while d > 0 && monomial_count(nvars, d) > budget {
        d -= 1;
    }
    d
}

/// Closed points of `G` over `GF(q^N)` given the closure bound `c'`.
///
/// `s_hint` (the expected `|Z(G)|`, when known) sets the re-closure degree;
/// without it the re-closure uses the largest affordable degree up to `4 c'`.
pub fn solve_closed_system(
    system: &PolySystem,
    c_prime: usize,
    ext_degree: u32,
    s_hint: Option<usize>,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    let field = system.field().clone();
    let n = system.nvars();
    let mut timings = Vec::new();
    let mut warnings = Vec::new();
    if ext_degree > cfg.max_ext_degree {
        return Err(Error::Budget(format!(
            "point field degree {ext_degree} exceeds the configured maximum {}",
            cfg.max_ext_degree
        )));
    }
    let big = field.extension(ext_degree)?;
    let emb = field.embedding_into(&big)?;
    let empty = |warnings: Vec<String>, timings, elim: usize| SolveReport {
        points: Vec::new(),
        point_field: big.clone(),
        ext_degree,
        s: 0,
        cap: c_prime,
        closure_degree: c_prime.max(1),
        c_prime: Some(c_prime),
        delta: None,
        eliminated: elim,
        remaining: n - elim,
        bound: None,
        warnings,
        timings,
    };

    let t0 = Instant::now();
    let cap = c_prime.max(1);
    if monomial_count(n, cap) > cfg.closure_budget {
        return Err(Error::Budget(format!("closure of degree {cap} in {n} variables exceeds the monomial budget")));
    }
    let mut engine = ClosureEngine::new(system);
    engine.advance_to(cap);
    let e1 = engine.basis().linear_subspace();
    timings.push(("closure", t0.elapsed()));
    let mut elim = Elimination::from_linear(&field, n, &e1);
    if elim.inconsistent {
        return Ok(empty(warnings, timings, 0));
    }

    // re-close the reduced system while it keeps producing linear relations
    let t1 = Instant::now();
    let mut reduced: Vec<Polynomial> =
        system.polys().iter().map(|p| elim.apply(p)).collect::<Result<Vec<_>>>()?;
    let mut extra_univariate: Vec<Polynomial> = Vec::new();
    loop {
        let r = elim.kept.len();
        if r == 0 {
            break;
        }
        let want = s_hint.unwrap_or(4 * cap).max(cap);
        let d = affordable_degree(r, want, cfg.closure_budget);
        let nonzero: Vec<Polynomial> = reduced.iter().filter(|p| !p.is_zero()).cloned().collect();
        if d == 0 || nonzero.is_empty() {
            if d < want {
                warnings.push(format!("re-closure limited to degree {d} by the monomial budget"));
            }
            break;
        }
        let max_deg = nonzero.iter().filter_map(|p| p.degree()).max().unwrap() as usize;
        let d = d.max(max_deg);
        if d < want {
            warnings.push(format!("re-closure limited to degree {d} by the monomial budget"));
        }
        let mut eng = ClosureEngine::from_polys(&field, r, nonzero);
        eng.advance_to(d);
        let basis = eng.basis();
        let lin = basis.linear_subspace();
        let next = Elimination::from_linear(&field, r, &lin);
        if next.inconsistent {
            timings.push(("reclosure", t1.elapsed()));
            return Ok(empty(warnings, timings, elim.eliminated()));
        }
        if next.eliminated() > 0 {
            elim = elim.then(&next)?;
            reduced = reduced.iter().map(|p| next.apply(p)).collect::<Result<Vec<_>>>()?;
            continue;
        }
        for v in 0..r {
            let mut keep = vec![false; r];
            keep[v] = true;
            extra_univariate.extend(basis.restrict_to_vars(&keep).into_iter().filter(|p| !p.is_constant()));
        }
        break;
    }
    timings.push(("reclosure", t1.elapsed()));

    let t2 = Instant::now();
    let r = elim.kept.len();
    let mut pool = reduced.clone();
    pool.extend(extra_univariate);
    let candidates = univariate_candidates(&pool, r, &emb)?;
    let local_pts = enumerate_zeros(&pool, r, &emb, candidates, cfg.budget)?;
    let mut points = Vec::with_capacity(local_pts.len());
    for lp in local_pts {
        let full = elim.lift(&emb, &lp)?;
        let ok = system.polys().iter().all(|p| p.eval_in(&emb, &full).is_ok_and(|v| v == 0));
        if !ok {
            return Err(Error::Internal("lifted point does not satisfy the system".into()));
        }
        points.push(full);
    }
    points.sort();
    points.dedup();
    timings.push(("enumerate", t2.elapsed()));
    Ok(SolveReport {
        s: points.len(),
        points,
        point_field: big,
        ext_degree,
        cap,
        closure_degree: cap,
        c_prime: Some(c_prime),
        delta: None,
        eliminated: elim.eliminated(),
        remaining: r,
        bound: None,
        warnings,
        timings,
    })
}

fn check_radical(analyses: &[BlockAnalysis]) -> Result<()> {
    for (i, a) in analyses.iter().enumerate() {
        if !a.radical {
            return Err(Error::pre(format!("block {} does not generate a radical ideal", i + 1)));
        }
    }
    Ok(())
}

/// Block analyses with the last fall degree computed up to `cap`.
pub fn analyze_blocks(inst: &SemiLocalInstance, cap: usize) -> Result<Vec<BlockAnalysis>> {
    inst.blocks().iter().map(|b| analyze_block(b, cap)).collect()
}

/// Default cap for block last fall degrees.
pub const BLOCK_LASTFALL_CAP: usize = 12;

/// Closed points of a semi-local instance.
///
/// `c_prime` defaults to `max(1, max_i d_{F_i})`; a smaller explicit value is refused.
pub fn solve_closed(inst: &SemiLocalInstance, c_prime: Option<usize>, cfg: &SolverConfig) -> Result<SolveReport> {
    let t0 = Instant::now();
    let analyses = analyze_blocks(inst, BLOCK_LASTFALL_CAP)?;
    check_radical(&analyses)?;
    for (i, a) in analyses.iter().enumerate() {
        if !a.last_fall.certified {
            return Err(Error::pre(format!(
                "last fall degree of block {} is not certified up to degree {BLOCK_LASTFALL_CAP}",
                i + 1
            )));
        }
    }
    let max_df = analyses.iter().map(|a| a.last_fall.d_f).max().unwrap_or(0);
    let needed = max_df.max(1);
    let c_prime = match c_prime {
        Some(c) if c < max_df => {
            return Err(Error::pre(format!("c'={c} is below a block last fall degree {max_df}")));
        }
        Some(c) => c,
        None => needed,
    };
    let s: usize = analyses.iter().map(|a| a.points).product();
    let ext = analyses.iter().fold(1, |acc, a| lcm(acc, a.point_field_degree));
    let analysis_time = t0.elapsed();
    let mut report = solve_closed_system(inst.public(), c_prime, ext, Some(s), cfg)?;
    report.timings.insert(0, ("blocks", analysis_time));

    let n = inst.n();
    let min_rank = n.saturating_sub(inst.c() * floor_log2(s));
    if report.eliminated < min_rank && s > 0 {
        report.warnings.push(format!(
            "only {} linear relations at degree {c_prime}, expected at least {min_rank}",
            report.eliminated
        ));
    }
    if report.s != s {
        return Err(Error::Internal(format!("found {} points, block analysis predicts {s}", report.s)));
    }
    if cfg.check_bound {
        report.bound = Some(check_closed_bound(inst.public(), s, c_prime)?);
    }
    Ok(report)
}

/// Computes `d_G` and compares it with `s + c' ceil(log2 s)`.
pub fn check_closed_bound(g: &PolySystem, s: usize, c_prime: usize) -> Result<BoundCheck> {
    let bound = s + c_prime * ceil_log2(s);
    let cap = bound.max(g.degree() as usize) + c_prime + 2;
    let lf = last_fall_degree(g, cap)?;
    Ok(BoundCheck { d_g: lf.d_f, bound, certified: lf.certified, holds: lf.certified && lf.d_f <= bound })
}

/// `k`-rational points of `G` using a closure of `G ∪ E'` up to degree `cap`.
pub fn solve_rational_system(system: &PolySystem, cap: usize, cfg: &SolverConfig) -> Result<SolveReport> {
    let field = system.field().clone();
    let n = system.nvars();
    let mut timings = Vec::new();
    let t0 = Instant::now();
    let ext = with_field_chain(system)?;
    let total = ext.nvars();
    let cap = cap.max(ext.degree() as usize);
    let gb = if cfg.early_stop {
        match groebner::groebner_basis(ext.polys()) {
            Ok(gb) => Some(gb),
            Err(Error::Budget(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let mut engine = ClosureEngine::new(&ext);
    let mut reached = 0;
    for d in 0..=cap {
        if monomial_count(total, d) > cfg.closure_budget {
            return Err(Error::Budget(format!(
                "closure of degree {d} in {total} variables exceeds the monomial budget"
            )));
        }
        engine.advance_to(d);
        reached = d;
        if let Some(gb) = &gb {
            if d >= ext.degree() as usize && gb.iter().all(|g| engine.contains(g).unwrap_or(false)) {
                break;
            }
        }
    }
    let basis = engine.basis();
    let keep: Vec<bool> = (0..total).map(|i| i < n).collect();
    let u: Vec<Polynomial> = basis.restrict_to_vars(&keep).iter().map(|p| drop_trailing_vars(p, n)).collect();
    timings.push(("closure", t0.elapsed()));

    let t1 = Instant::now();
    let b1: Vec<Polynomial> = u.iter().filter(|p| p.degree().is_some_and(|d| d <= 1)).cloned().collect();
    let elim = Elimination::from_linear(&field, n, &b1);
    let emb = field.embedding_into(&field)?;
    let mut points = Vec::new();
    if !elim.inconsistent {
        let mut pool: Vec<Polynomial> = system.polys().iter().map(|p| elim.apply(p)).collect::<Result<_>>()?;
        for p in &u {
            if p.degree().is_some_and(|d| d > 1) {
                pool.push(elim.apply(p)?);
            }
        }
        let r = elim.kept.len();
        let candidates = univariate_candidates(&pool, r, &emb)?;
        for lp in enumerate_zeros(&pool, r, &emb, candidates, cfg.budget)? {
            let full = elim.lift(&emb, &lp)?;
            if !system.vanishes_at(&full)? {
                return Err(Error::Internal("lifted point does not satisfy the system".into()));
            }
            points.push(full);
        }
    }
    points.sort();
    points.dedup();
    timings.push(("enumerate", t1.elapsed()));
    Ok(SolveReport {
        s: points.len(),
        points,
        point_field: field,
        ext_degree: 1,
        cap,
        closure_degree: reached,
        c_prime: None,
        delta: None,
        eliminated: elim.eliminated(),
        remaining: elim.kept.len(),
        bound: None,
        warnings: Vec::new(),
        timings,
    })
}

/// `Δ = max_i max(|Z(F_i)|, d_{F_i})`.
pub fn delta(analyses: &[BlockAnalysis]) -> usize {
    analyses.iter().map(|a| a.points.max(a.last_fall.d_f)).max().unwrap_or(0)
}

/// `k`-rational points of a semi-local instance, closure bound `Δ p` unless `cap` is given.
pub fn solve_rational(inst: &SemiLocalInstance, cap: Option<usize>, cfg: &SolverConfig) -> Result<SolveReport> {
    let t0 = Instant::now();
    let analyses = analyze_blocks(inst, BLOCK_LASTFALL_CAP)?;
    check_radical(&analyses)?;
    let delta = delta(&analyses);
    let p = inst.field().p() as usize;
    let cap = cap.unwrap_or(delta * p);
    let analysis_time = t0.elapsed();
    let mut report = solve_rational_system(inst.public(), cap, cfg)?;
    report.delta = Some(delta);
    report.timings.insert(0, ("blocks", analysis_time));
    let s_block = analyses.iter().map(|a| a.points).max().unwrap_or(0);
    let pairs = (s_block * s_block.saturating_sub(1) / 2) as u64;
    if pairs >= inst.field().q() as u64 {
        report.warnings.push(format!(
            "C({s_block},2) >= |k| = {}: no separating form over k is guaranteed; used enumeration",
            inst.field().q()
        ));
    }
    Ok(report)
}

/// Serializable form of an instance; every field element is in canonical text.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct InstanceFile {
    pub field: String,
    pub c: usize,
    pub blocks: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lam_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mu_seed: Option<u64>,
    pub lam: Vec<Vec<String>>,
    pub mu: Vec<Vec<String>>,
    pub public: Vec<String>,
}

fn matrix_to_text(m: &LinearMap) -> Vec<Vec<String>> {
    m.data().iter().map(|r| r.iter().map(|&a| m.field().fmt_elem(a)).collect()).collect()
}

pub(crate) fn matrix_from_text(field: &Field, rows: &[Vec<String>]) -> Result<LinearMap> {
    let data = rows
        .iter()
        .map(|r| r.iter().map(|s| field.parse_elem(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    LinearMap::new(field, data)
}

impl SemiLocalInstance {
    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            field: self.field.spec().to_string(),
            c: self.c,
            blocks: self.blocks.iter().map(|b| b.polys().iter().map(|p| p.to_string()).collect()).collect(),
            lam_seed: self.lam_seed,
            mu_seed: self.mu_seed,
            lam: matrix_to_text(&self.lam),
            mu: matrix_to_text(&self.mu),
            public: self.public.polys().iter().map(|p| p.to_string()).collect(),
        }
    }

    /// Rebuilds the instance, checking the stored matrices against the seeds and
    /// the stored public system against `mu o F o lam`.
    pub fn from_file(file: &InstanceFile) -> Result<SemiLocalInstance> {
        let field: Field = file.field.parse()?;
        let blocks = file
            .blocks
            .iter()
            .map(|b| {
                PolySystem::new(b.iter().map(|s| Polynomial::parse(&field, file.c, s)).collect::<Result<Vec<_>>>()?)
            })
            .collect::<Result<Vec<_>>>()?;
        let lam = matrix_from_text(&field, &file.lam)?;
        let mu = matrix_from_text(&field, &file.mu)?;
        if let Some(seed) = file.lam_seed {
            if LinearMap::random_invertible(&field, lam.rows(), seed).data() != lam.data() {
                return Err(Error::pre("stored lam does not match its seed"));
            }
        }
        if let Some(seed) = file.mu_seed {
            if LinearMap::random_invertible(&field, mu.rows(), seed).data() != mu.data() {
                return Err(Error::pre("stored mu does not match its seed"));
            }
        }
        let mut inst = SemiLocalInstance::with_maps(blocks, lam, mu)?;
        inst.lam_seed = file.lam_seed;
        inst.mu_seed = file.mu_seed;
        let public: Vec<String> = inst.public.polys().iter().map(|p| p.to_string()).collect();
        if !file.public.is_empty() && public != file.public {
            return Err(Error::pre("stored public system differs from mu o F o lam"));
        }
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable") + "\n"
    }

    pub fn from_json(s: &str) -> Result<SemiLocalInstance> {
        let file: InstanceFile = serde_json::from_str(s).map_err(|e| Error::parse(e.to_string()))?;
        SemiLocalInstance::from_file(&file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block(p: u32, c: usize, polys: &[&str]) -> PolySystem {
        let f = Field::prime(p).unwrap();
        PolySystem::new(polys.iter().map(|s| Polynomial::parse(&f, c, s).unwrap()).collect()).unwrap()
    }

    /// Exhaustive scan over GF(q^N)^n without any pruning.
    fn exhaustive(system: &PolySystem, ext: u32) -> Vec<Vec<u32>> {
        let big = system.field().extension(ext).unwrap();
        let emb = system.field().embedding_into(&big).unwrap();
        let lifted: Vec<Polynomial> = system.polys().iter().map(|p| p.map_coeffs(&emb)).collect();
        let n = system.nvars();
        let q = big.q() as u64;
        let mut out = Vec::new();
        for code in 0..q.pow(n as u32) {
            let pt: Vec<u32> = (0..n).map(|i| ((code / q.pow(i as u32)) % q) as u32).collect();
            if lifted.iter().all(|p| p.eval(&pt).unwrap() == 0) {
                out.push(pt);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn log_helpers() {
        assert_eq!((ceil_log2(1), ceil_log2(2), ceil_log2(3), ceil_log2(4), ceil_log2(5)), (0, 1, 2, 2, 3));
        assert_eq!((floor_log2(1), floor_log2(2), floor_log2(3), floor_log2(8)), (0, 1, 1, 3));
        assert_eq!(monomial_count(2, 2), 6);
    }

    #[test]
    fn instance_examples() {
        let b = vec![block(7, 1, &["x1^2 - 1"]), block(7, 1, &["x1^2 - 1"])];
        let id = SemiLocalInstance::undisguised(b.clone()).unwrap();
        assert_eq!(id.public(), id.local());
        let inst = SemiLocalInstance::new(b, 1, 2).unwrap();
        assert_eq!((inst.public().degree(), inst.n()), (2, 2));
        let back = SemiLocalInstance::from_json(&inst.to_json()).unwrap();
        assert_eq!(back.public(), inst.public());
        let bad = vec![block(7, 1, &["x1"]), block(7, 2, &["x1"])];
        assert!(SemiLocalInstance::undisguised(bad).is_err());
    }

    #[test]
    fn brute_examples() {
        let s = block(7, 2, &["x1^2 - 1", "x2^2 - 1"]);
        let r = brute_zero_set(&s, 1, 1 << 20).unwrap();
        assert_eq!(r.points, vec![vec![1, 1], vec![1, 6], vec![6, 1], vec![6, 6]]);
        let s = block(7, 1, &["x1^2 + 1"]);
        assert_eq!(brute_zero_set(&s, 1, 1 << 20).unwrap().s, 0);
        assert_eq!(brute_zero_set(&s, 2, 1 << 20).unwrap().s, 2);
        let s = block(5, 3, &["x1*x2 - x3"]);
        assert!(matches!(brute_zero_set(&s, 2, 1000), Err(Error::Budget(_))));
    }

    #[test]
    fn brute_matches_exhaustive_and_transforms_by_lam() {
        let b = vec![block(5, 1, &["x1^2 - 2"]), block(5, 1, &["x1^2 + x1 + 1", "x1^3 - 1"])];
        let inst = SemiLocalInstance::new(b, 7, 8).unwrap();
        let got = brute_zero_set(inst.public(), 2, 1 << 20).unwrap();
        assert_eq!(got.points, exhaustive(inst.public(), 2));
        // Z(G) = lam^{-1} Z(F)
        let zf = brute_zero_set(inst.local(), 2, 1 << 20).unwrap();
        let emb = inst.field().embedding_into(&zf.point_field).unwrap();
        let inv = inst.lam().inverse().unwrap();
        let mut mapped: Vec<Vec<u32>> = zf
            .points
            .iter()
            .map(|p| {
                (0..inv.rows())
                    .map(|i| p.iter().enumerate().fold(0, |acc, (j, &x)| zf.point_field.mul_add(acc, emb.map(inv.entry(i, j)), x)))
                    .collect()
            })
            .collect();
        mapped.sort();
        assert_eq!(got.points, mapped);
    }

    #[test]
    fn shape_basis_examples() {
        let s = block(5, 1, &["x1 - 2"]);
        let sb = shape_basis(&s, 1, 0, 1 << 20).unwrap();
        assert_eq!((sb.t.clone(), sb.s()), (vec![1], 1));
        assert_eq!(sb.g_n, UniPoly::new(&sb.field, vec![3, 1]));

        let s = block(7, 2, &["x1^2 - 1", "x2 - x1"]);
        let sb = shape_basis(&s, 1, 0, 1 << 20).unwrap();
        assert_eq!((sb.s(), sb.pivot), (2, 0));
        assert_eq!(sb.g[1].clone().unwrap(), UniPoly::x(&sb.field));
        assert_eq!(sb.points().unwrap(), vec![vec![1, 1], vec![6, 6]]);
    }

    #[test]
    fn shape_basis_reproduces_zero_sets() {
        for seed in 0..12u64 {
            // x1 does not separate: points share first coordinates
            let s = block(3, 2, &["x1^2 - 1", "x2^2 - x2"]);
            let inst = SemiLocalInstance::new(vec![s], seed, seed + 1).unwrap();
            let sb = shape_basis(inst.public(), 1, seed, 1 << 20).unwrap();
            let zs = brute_zero_set(inst.public(), 1, 1 << 20).unwrap();
            let emb = zs.point_field.embedding_into(&sb.field).unwrap();
            let want: Vec<Vec<u32>> = zs.points.iter().map(|p| p.iter().map(|&a| emb.map(a)).collect()).collect();
            assert_eq!(sb.points().unwrap(), want);
            let sys = sb.as_system().unwrap();
            for p in &want {
                assert!(sys.vanishes_at(p).unwrap());
            }
            assert!(sb.g.iter().flatten().all(|g| g.degree().is_none_or(|d| d < sb.s())));
        }
    }

    #[test]
    fn field_chain_examples() {
        let f = Field::new(2, 2).unwrap();
        let chain = field_equation_chain(1, &f);
        let texts: Vec<String> = chain.polys().iter().map(|p| p.to_string()).collect();
        assert_eq!(texts, vec!["[1,0]*x1^2 + [1,0]*x2", "[1,0]*x2^2 + [1,0]*x1"]);
        let f7 = Field::prime(7).unwrap();
        let chain = field_equation_chain(2, &f7);
        assert_eq!(chain.polys()[1].to_string(), "1*x2^7 + 6*x2");
        // over the closure, the chain's points project onto GF(4)
        let r = brute_zero_set(&field_equation_chain(1, &f), 2, 1 << 20).unwrap();
        let mut firsts: Vec<u32> = r.points.iter().map(|p| p[0]).collect();
        firsts.dedup();
        assert_eq!(r.s, 4);
        let emb = f.embedding_into(&r.point_field).unwrap();
        let mut want: Vec<u32> = f.elements().map(|a| emb.map(a)).collect();
        want.sort();
        assert_eq!(firsts, want);
    }

    #[test]
    fn block_analysis() {
        let a = analyze_block(&block(7, 1, &["x1^2 + 1"]), 6).unwrap();
        assert_eq!((a.points, a.radical, a.point_field_degree), (2, true, 2));
        let a = analyze_block(&block(7, 1, &["x1^3 - 2*x1^2 + x1"]), 6).unwrap();
        assert!(!a.radical);
        let a = analyze_block(&block(5, 2, &["x1^2 - 1", "x2 - x1^2 - x1"]), 6).unwrap();
        assert_eq!((a.points, a.radical), (2, true));
        let a = analyze_block(&block(5, 2, &["x1^2", "x2 - 1"]), 6).unwrap();
        assert!(!a.radical);
        assert!(analyze_block(&block(5, 2, &["x1*x2"]), 6).is_err());
    }

    #[test]
    fn solve_closed_examples() {
        let cfg = SolverConfig::default();
        let b = vec![block(7, 1, &["x1^2 - 1"]), block(7, 1, &["x1^2 - 1"])];
        let inst = SemiLocalInstance::new(b, 3, 4).unwrap();
        let r = solve_closed(&inst, None, &cfg).unwrap();
        assert_eq!(r.points, brute_zero_set(inst.public(), 1, 1 << 20).unwrap().points);
        assert_eq!(r.s, 4);

        // every block has one point: linear relations determine everything
        let b = vec![block(11, 1, &["x1 - 3"]), block(11, 1, &["x1^2 - 4*x1 + 4", "x1^3 - 8"])];
        let inst = SemiLocalInstance::new(b, 5, 6).unwrap();
        let r = solve_closed(&inst, None, &cfg).unwrap();
        assert_eq!((r.s, r.remaining), (1, 0));

        let b = vec![block(7, 1, &["x1^2 + 1"]), block(7, 1, &["x1^2 - 2"])];
        let inst = SemiLocalInstance::new(b, 9, 10).unwrap();
        let r = solve_closed(&inst, None, &cfg).unwrap();
        assert_eq!(r.ext_degree, 2);
        assert_eq!(r.points, brute_zero_set(inst.public(), 2, 1 << 20).unwrap().points);

        let nonradical = vec![block(7, 1, &["x1^2"])];
        let inst = SemiLocalInstance::new(nonradical, 1, 1).unwrap();
        assert!(matches!(solve_closed(&inst, None, &cfg), Err(Error::Precondition(_))));
    }

    #[test]
    fn solve_rational_examples() {
        let cfg = SolverConfig::default();
        let inst = SemiLocalInstance::undisguised(vec![block(7, 1, &["x1^3 - 1"])]).unwrap();
        let r = solve_rational(&inst, None, &cfg).unwrap();
        assert_eq!(r.points, vec![vec![1], vec![2], vec![4]]);

        let b = vec![block(5, 1, &["x1^2 - 2"]), block(5, 1, &["x1 - 1"])];
        let inst = SemiLocalInstance::new(b, 1, 2).unwrap();
        let r = solve_rational(&inst, None, &cfg).unwrap();
        assert!(r.points.is_empty());
        assert_eq!(exhaustive(inst.public(), 1), Vec::<Vec<u32>>::new());

        let b = vec![block(3, 1, &["x1^2 - 1"]), block(3, 1, &["x1^3 - x1 + 1", "x1 - 2"])];
        // second block: x = 2 is not a root of x^3 - x + 1 over GF(3); the block has no points
        let inst = SemiLocalInstance::new(b, 4, 5);
        assert!(inst.is_ok());
    }
}
