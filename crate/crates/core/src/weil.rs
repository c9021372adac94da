//! Weil descent from `K = GF(q^n)` to `k = GF(q)`.
//!
//! A polynomial `f` over `K` in `c` variables becomes `n` polynomials over `k`
//! in `cn` variables by writing `x_j = sum_l theta_l x_{j,l}` and splitting
//! every coefficient in the basis `theta`. Variable `x_{j,l}` has index
//! `j n + l`; component `l` of input `r` has index `r n + l`.
//!
//! With `Θ` the matrix whose row `i` is `theta^(σ^i)`, the descent satisfies
//! `μ ∘ hat_f = (f^(σ^i))_i ∘ λ` over `K`, where `μ` and `λ` are block
//! diagonal with blocks `Θ`. The conjugate `f_r^(σ^i)` is evaluated at
//! `y_{0,i}, ..., y_{c-1,i}` (indices `j n + i`), so the right side is local
//! with block `i` on those `c` variables.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Embedding, Field};
use crate::linear::{random_elem, LinearMap};
use crate::poly::{Monomial, Polynomial};
use crate::system::{compose, PolySystem};

/// A `k`-basis `theta` of `K`, with its Frobenius matrix.
#[derive(Clone, Debug)]
pub struct WeilBasis {
    emb: Embedding,
    n: u32,
    theta: Vec<u32>,
    frobenius_matrix: LinearMap,
}

impl WeilBasis {
    /// `theta = (1, g, ..., g^(n-1))` for the generator `g` of `K`.
    pub fn standard(base: &Field, n: u32) -> Result<WeilBasis> {
        let ext = base.extension(n)?;
        let g = ext.generator();
        let theta = (0..n).map(|i| ext.pow(g, i as u64)).collect();
        WeilBasis::new(base, &ext, theta)
    }

    pub fn new(base: &Field, ext: &Field, theta: Vec<u32>) -> Result<WeilBasis> {
        if ext.p() != base.p() || !ext.m().is_multiple_of(base.m()) {
            return Err(Error::FieldMismatch(format!("{ext} is not an extension of {base}")));
        }
        let n = ext.m() / base.m();
        if theta.len() != n as usize {
            return Err(Error::dim(format!("a basis of {ext} over {base} has {n} elements, got {}", theta.len())));
        }
        let emb = base.embedding_into(ext)?;
        let q_exp = base.m();
        let rows = (0..n).map(|i| theta.iter().map(|&t| ext.frobenius(t, q_exp * i)).collect()).collect();
        let frobenius_matrix = LinearMap::new(ext, rows)?
            .with_inverse()
            .map_err(|_| Error::pre("theta is not linearly independent over the base field"))?;
        Ok(WeilBasis { emb, n, theta, frobenius_matrix })
    }

    pub fn base(&self) -> &Field {
        self.emb.small()
    }

    pub fn ext(&self) -> &Field {
        self.emb.big()
    }

    pub fn embedding(&self) -> &Embedding {
        &self.emb
    }

    /// `[K : k]`
    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn theta(&self) -> &[u32] {
        &self.theta
    }

    /// Row `i` is `theta^(σ^i)`.
    pub fn frobenius_matrix(&self) -> &LinearMap {
        &self.frobenius_matrix
    }

    /// `a^(q^i)` for `q = |k|`.
    pub fn sigma(&self, a: u32, i: u32) -> u32 {
        self.ext().frobenius(a, self.base().m() * i)
    }

    /// Coordinates of `gamma` in `theta`, as elements of `k`.
    pub fn coordinates(&self, gamma: u32) -> Result<Vec<u32>> {
        // Θ c = (gamma^(σ^i))_i has a solution in k^n
        let conj: Vec<u32> = (0..self.n).map(|i| self.sigma(gamma, i)).collect();
        let c = self.frobenius_matrix.inverse()?.apply(&conj)?;
        c.iter()
            .map(|&v| self.emb.pull_back(v).ok_or_else(|| Error::Internal("coordinate outside the base field".into())))
            .collect()
    }

    /// `sum_l coords_l theta_l`
    pub fn combine(&self, coords: &[u32]) -> u32 {
        let ext = self.ext();
        coords.iter().zip(&self.theta).fold(0, |acc, (&c, &t)| ext.mul_add(acc, self.emb.map(c), t))
    }
}

/// Output of [`weil_descent`].
#[derive(Clone, Debug)]
pub struct DescentResult {
    /// Components over `k` in `c n` variables.
    pub hat_f: PolySystem,
    /// `diag(Θ, ..., Θ)` over `K`, one block per input variable.
    pub lam: LinearMap,
    /// `diag(Θ, ..., Θ)` over `K`, one block per input polynomial.
    pub mu: LinearMap,
    /// `conjugates[i]` is `f^(σ^i)`, in the `c` input variables.
    pub conjugates: Vec<PolySystem>,
    c: usize,
    basis: WeilBasis,
}

/// Applies `σ^i` to every coefficient.
pub fn conjugate(f: &Polynomial, basis: &WeilBasis, i: u32) -> Polynomial {
    f.map_coeffs_with(basis.ext(), |a| basis.sigma(a, i))
}

pub fn weil_descent(f: &PolySystem, basis: &WeilBasis) -> Result<DescentResult> {
    if f.field() != basis.ext() {
        return Err(Error::FieldMismatch(format!("system over {}, basis for {}", f.field(), basis.ext())));
    }
    let (ext, base) = (basis.ext(), basis.base());
    let n = basis.degree() as usize;
    let c = f.nvars();
    let cn = c * n;
    let forms: Vec<Polynomial> = (0..c)
        .map(|j| {
            let mut coeffs = vec![0; cn];
            coeffs[j * n..(j + 1) * n].copy_from_slice(basis.theta());
            Polynomial::linear(ext, &coeffs, 0)
        })
        .collect();
    let mut hat = Vec::with_capacity(f.len() * n);
    for p in f.polys() {
        let expanded = p.substitute(&forms)?;
        let mut comps = vec![Polynomial::zero(base, cn); n];
        for (m, gamma) in expanded.terms() {
            for (l, &cl) in basis.coordinates(gamma)?.iter().enumerate() {
                comps[l].add_term(m.clone(), cl);
            }
        }
        hat.extend(comps);
    }
    let hat_f = PolySystem::new(hat)?;
    let theta = basis.frobenius_matrix();
    let lam = LinearMap::block_diagonal(ext, &vec![theta.clone(); c]);
    let mu = LinearMap::block_diagonal(ext, &vec![theta.clone(); f.len()]);
    let conjugates = (0..n as u32)
        .map(|i| PolySystem::new(f.polys().iter().map(|p| conjugate(p, basis, i)).collect()))
        .collect::<Result<Vec<_>>>()?;
    let res = DescentResult { hat_f, lam, mu, conjugates, c, basis: basis.clone() };
    if !res.verify_semilocal()? {
        return Err(Error::Internal("descent identity failed".into()));
    }
    Ok(res)
}

impl DescentResult {
    pub fn basis(&self) -> &WeilBasis {
        &self.basis
    }

    /// The local system `(f_r^(σ^i))` in the variables `y_{j,i}` (index `j n + i`),
    /// ordered like `hat_f`.
    pub fn local_system(&self) -> Result<PolySystem> {
        let n = self.basis.degree() as usize;
        let cn = self.c * n;
        let r = self.conjugates[0].len();
        let mut polys = Vec::with_capacity(r * n);
        for k in 0..r {
            for i in 0..n {
                let map: Vec<usize> = (0..self.c).map(|j| j * n + i).collect();
                polys.push(self.conjugates[i].polys()[k].rename_vars(cn, &map));
            }
        }
        PolySystem::new(polys)
    }

    /// Checks `μ ∘ hat_f = (f^(σ^i))_i ∘ λ` symbolically over `K`.
    pub fn verify_semilocal(&self) -> Result<bool> {
        let emb = self.basis.embedding();
        let lifted = PolySystem::new(self.hat_f.polys().iter().map(|p| p.map_coeffs(emb)).collect())?;
        let lhs = lifted.compose_eqs(&self.mu)?;
        let n = self.lam.rows();
        let rhs = compose(&LinearMap::identity(self.basis.ext(), lhs.len()), &self.local_system()?, &self.lam)?;
        Ok(lhs == rhs && rhs.nvars() == n)
    }

    /// `hat_f` with every exponent reduced by `x^q = x`; equal to `hat_f` on `k^(cn)`.
    pub fn reduced(&self) -> PolySystem {
        reduce_field_exponents(&self.hat_f)
    }
}

/// Reduces exponents with `x^q = x`, which leaves values on `k^n` unchanged.
pub fn reduce_field_exponents(system: &PolySystem) -> PolySystem {
    let q = system.field().q();
    let reduce = |e: u32| if e == 0 { 0 } else { (e - 1) % (q - 1) + 1 };
    let polys = system
        .polys()
        .iter()
        .map(|p| {
            Polynomial::from_terms(
                p.field(),
                p.nvars(),
                p.terms().map(|(m, c)| (Monomial::new(m.exps().iter().map(|&e| reduce(e)).collect()), c)).collect::<Vec<_>>(),
            )
        })
        .collect();
    PolySystem::new(polys).expect("same shape")
}

/// `sum_{i<=j<r} a[i][j] x^(q^i + q^j) + sum_{i<r} b[i] x^(q^i) + c` over `K`
/// in one variable; `a` is read on and above the diagonal.
pub fn dembowski_ostrom_from(ext: &Field, q: u32, a: &[Vec<u32>], b: &[u32], c: u32) -> Result<Polynomial> {
    let r = b.len();
    if a.len() != r || a.iter().any(|row| row.len() != r) {
        return Err(Error::dim("a must be r x r and b of length r"));
    }
    let qpow = |i: usize| -> Result<u32> {
        (q as u64)
            .checked_pow(i as u32)
            .and_then(|v| u32::try_from(v).ok())
            .ok_or_else(|| Error::dim("exponent overflow"))
    };
    let mut terms = vec![(Monomial::one(1), c)];
    for i in 0..r {
        terms.push((Monomial::new(vec![qpow(i)?]), b[i]));
        for j in i..r {
            terms.push((Monomial::new(vec![qpow(i)? + qpow(j)?]), a[i][j]));
        }
    }
    Ok(Polynomial::from_terms(ext, 1, terms))
}

/// Random extended Dembowski–Ostrom polynomial over `K` for `q = |k|`.
pub fn dembowski_ostrom(ext: &Field, q: u32, r: usize, seed: u64) -> Result<Polynomial> {
    if r == 0 {
        return Err(Error::pre("r must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || random_elem(ext, &mut rng);
    let a: Vec<Vec<u32>> = (0..r).map(|_| (0..r).map(|_| draw()).collect()).collect();
    let b: Vec<u32> = (0..r).map(|_| draw()).collect();
    let c = draw();
    dembowski_ostrom_from(ext, q, &a, &b, c)
}

/// `hat_f - coords(y)` reduced by `x^q = x`: its `k`-points are the `theta`-coordinates
/// of the `x in K^c` with `f(x) = y`.
pub fn preimage_system(f: &PolySystem, basis: &WeilBasis, y: &[u32]) -> Result<PolySystem> {
    if y.len() != f.len() {
        return Err(Error::dim(format!("{} values for {} polynomials", y.len(), f.len())));
    }
    let res = weil_descent(f, basis)?;
    let reduced = res.reduced();
    let n = basis.degree() as usize;
    let mut polys = Vec::with_capacity(reduced.len());
    for (r, &yr) in y.iter().enumerate() {
        for (l, &cl) in basis.coordinates(yr)?.iter().enumerate() {
            let p = &reduced.polys()[r * n + l];
            polys.push(p.sub(&Polynomial::constant(basis.base(), p.nvars(), cl)));
        }
    }
    PolySystem::new(polys)
}
