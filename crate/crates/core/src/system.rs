//! Ordered polynomial systems and linear changes of variables and equations.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linear::LinearMap;
use crate::poly::Polynomial;

/// A nonempty ordered list of polynomials over one field and ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolySystem {
    field: Field,
    nvars: usize,
    polys: Vec<Polynomial>,
}

impl PolySystem {
    pub fn new(polys: Vec<Polynomial>) -> Result<PolySystem> {
        let first = polys.first().ok_or_else(|| Error::dim("empty polynomial system"))?;
        let (field, nvars) = (first.field().clone(), first.nvars());
        for p in &polys {
            if p.field() != &field {
                return Err(Error::FieldMismatch(format!("{} and {}", p.field(), field)));
            }
            if p.nvars() != nvars {
                return Err(Error::dim(format!("{} and {} variables in one system", p.nvars(), nvars)));
            }
        }
        Ok(PolySystem { field, nvars, polys })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn into_polys(self) -> Vec<Polynomial> {
        self.polys
    }

    /// Largest degree among the nonzero members (0 if all are zero).
    pub fn degree(&self) -> u32 {
        self.polys.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    pub fn eval(&self, point: &[u32]) -> Result<Vec<u32>> {
        self.polys.iter().map(|p| p.eval(point)).collect()
    }

    pub fn vanishes_at(&self, point: &[u32]) -> Result<bool> {
        Ok(self.eval(point)?.iter().all(|&v| v == 0))
    }

    /// Appends the polynomials of `other` (same ring).
    pub fn concat(&self, other: &PolySystem) -> Result<PolySystem> {
        let mut v = self.polys.clone();
        v.extend(other.polys.iter().cloned());
        PolySystem::new(v)
    }

    /// `F o lam`: each `x_j` becomes `sum_k lam[j][k] x_k`.
    pub fn compose_vars(&self, lam: &LinearMap) -> Result<PolySystem> {
        if lam.rows() != self.nvars || lam.field() != &self.field {
            return Err(Error::dim(format!(
                "a {}x{} map cannot substitute {} variables",
                lam.rows(),
                lam.cols(),
                self.nvars
            )));
        }
        let forms: Vec<Polynomial> = (0..lam.rows()).map(|j| Polynomial::linear(&self.field, lam.row(j), 0)).collect();
        let polys = self.polys.iter().map(|p| p.substitute(&forms)).collect::<Result<_>>()?;
        Ok(PolySystem { field: self.field.clone(), nvars: lam.cols(), polys })
    }

    /// `mu o F`: the `i`-th output is `sum_j mu[i][j] F_j`.
    pub fn compose_eqs(&self, mu: &LinearMap) -> Result<PolySystem> {
        if mu.cols() != self.polys.len() || mu.field() != &self.field {
            return Err(Error::dim(format!(
                "a {}x{} map cannot combine {} equations",
                mu.rows(),
                mu.cols(),
                self.polys.len()
            )));
        }
        let polys = (0..mu.rows())
            .map(|i| {
                let mut acc = Polynomial::zero(&self.field, self.nvars);
                for (j, p) in self.polys.iter().enumerate() {
                    let c = mu.entry(i, j);
                    if c != 0 {
                        acc = acc.add(&p.scale(c));
                    }
                }
                acc
            })
            .collect();
        Ok(PolySystem { field: self.field.clone(), nvars: self.nvars, polys })
    }

    /// `m x n` matrix of formal partial derivatives.
    pub fn jacobian(&self) -> Vec<Vec<Polynomial>> {
        self.polys.iter().map(|p| (0..self.nvars).map(|j| p.derivative(j)).collect()).collect()
    }
}

/// `mu o F o lam`
pub fn compose(mu: &LinearMap, f: &PolySystem, lam: &LinearMap) -> Result<PolySystem> {
    f.compose_vars(lam)?.compose_eqs(mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;
    use proptest::prelude::*;

    fn x(f: &Field, n: usize, i: usize) -> Polynomial {
        Polynomial::var(f, n, i)
    }

    #[test]
    fn compose_vars_examples() {
        let f = Field::prime(5).unwrap();
        let sys = PolySystem::new(vec![x(&f, 2, 0).pow(2)]).unwrap();
        assert_eq!(sys.compose_vars(&LinearMap::identity(&f, 2)).unwrap(), sys);
        let lam = LinearMap::new(&f, vec![vec![1, 1], vec![0, 1]]).unwrap();
        let got = sys.compose_vars(&lam).unwrap();
        let (a, b) = (x(&f, 2, 0), x(&f, 2, 1));
        let want = a.pow(2).add(&a.mul(&b).scale(2)).add(&b.pow(2));
        assert_eq!(got.polys()[0], want);
        assert_eq!(got.degree(), 2);
    }

    #[test]
    fn compose_eqs_examples() {
        let f = Field::prime(7).unwrap();
        let sys = PolySystem::new(vec![x(&f, 2, 0), x(&f, 2, 1)]).unwrap();
        assert_eq!(sys.compose_eqs(&LinearMap::identity(&f, 2)).unwrap(), sys);
        let mu = LinearMap::new(&f, vec![vec![1, 1]]).unwrap();
        assert_eq!(sys.compose_eqs(&mu).unwrap().polys()[0], x(&f, 2, 0).add(&x(&f, 2, 1)));
        let sq = PolySystem::new(vec![x(&f, 2, 0).pow(2), x(&f, 2, 1).pow(2)]).unwrap();
        let mu = LinearMap::new(&f, vec![vec![2, 0], vec![0, 3]]).unwrap();
        let got = sq.compose_eqs(&mu).unwrap();
        assert_eq!(got.polys()[0], x(&f, 2, 0).pow(2).scale(2));
        assert_eq!(got.polys()[1], x(&f, 2, 1).pow(2).scale(3));
        assert!(sq.compose_eqs(&LinearMap::identity(&f, 3)).is_err());
    }

    #[test]
    fn jacobian_examples() {
        let f = Field::prime(11).unwrap();
        let sys = PolySystem::new(vec![x(&f, 2, 0).pow(3), x(&f, 2, 1).pow(3)]).unwrap();
        let j = sys.jacobian();
        assert_eq!(j[0][0], x(&f, 2, 0).pow(2).scale(3));
        assert!(j[0][1].is_zero() && j[1][0].is_zero());
        let sys = PolySystem::new(vec![x(&f, 2, 0).mul(&x(&f, 2, 1))]).unwrap();
        assert_eq!(sys.jacobian()[0], vec![x(&f, 2, 1), x(&f, 2, 0)]);
        let f3 = Field::prime(3).unwrap();
        let sys = PolySystem::new(vec![x(&f3, 1, 0).pow(3)]).unwrap();
        assert!(sys.jacobian()[0][0].is_zero());
    }

    fn random_system(f: &Field, n: usize, m: usize, deg: u32, seed: u64) -> PolySystem {
        use rand::{RngCore, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let polys = (0..m)
            .map(|_| {
                let terms = (0..5).map(|_| {
                    let mut e = vec![0; n];
                    for _ in 0..(rng.next_u32() % (deg + 1)) {
                        e[(rng.next_u32() as usize) % n] += 1;
                    }
                    (Monomial::new(e), rng.next_u32() % f.q())
                });
                Polynomial::from_terms(f, n, terms.collect::<Vec<_>>())
            })
            .collect();
        PolySystem::new(polys).unwrap()
    }

    /// Product of polynomial matrices.
    fn poly_matmul(a: &[Vec<Polynomial>], b: &[Vec<Polynomial>]) -> Vec<Vec<Polynomial>> {
        let (f, n) = (a[0][0].field().clone(), a[0][0].nvars());
        (0..a.len())
            .map(|i| {
                (0..b[0].len())
                    .map(|j| {
                        (0..b.len()).fold(Polynomial::zero(&f, n), |acc, k| acc.add(&a[i][k].mul(&b[k][j])))
                    })
                    .collect()
            })
            .collect()
    }

    fn const_matrix(lm: &LinearMap, nvars: usize) -> Vec<Vec<Polynomial>> {
        (0..lm.rows())
            .map(|i| (0..lm.cols()).map(|j| Polynomial::constant(lm.field(), nvars, lm.entry(i, j))).collect())
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn jacobian_chain_rule(seed in 0u64..1000, n in 1usize..5) {
            let f = Field::prime(7).unwrap();
            let sys = random_system(&f, n, n, 3, seed);
            let lam = LinearMap::random_invertible(&f, n, seed + 1);
            let mu = LinearMap::random_invertible(&f, n, seed + 2);
            let g = compose(&mu, &sys, &lam).unwrap();
            let forms: Vec<Polynomial> = (0..n).map(|j| Polynomial::linear(&f, lam.row(j), 0)).collect();
            let jf_lam: Vec<Vec<Polynomial>> = sys
                .jacobian()
                .iter()
                .map(|row| row.iter().map(|p| p.substitute(&forms).unwrap()).collect())
                .collect();
            let rhs = poly_matmul(&poly_matmul(&const_matrix(&mu, n), &jf_lam), &const_matrix(&lam, n));
            prop_assert_eq!(g.jacobian(), rhs);
        }

        #[test]
        fn composing_with_inverse_restores(seed in 0u64..1000, n in 1usize..4) {
            let f = Field::prime(5).unwrap();
            let sys = random_system(&f, n, 2, 3, seed);
            let lam = LinearMap::random_invertible(&f, n, seed ^ 7);
            let back = sys.compose_vars(&lam).unwrap().compose_vars(&lam.inverse().unwrap()).unwrap();
            prop_assert_eq!(back, sys.clone());
            // (F o a) o b = F o (a b)
            let b = LinearMap::random_invertible(&f, n, seed ^ 9);
            let lhs = sys.compose_vars(&lam).unwrap().compose_vars(&b).unwrap();
            prop_assert_eq!(lhs, sys.compose_vars(&lam.matmul(&b).unwrap()).unwrap());
        }

        #[test]
        fn eval_commutes_with_composition(seed in 0u64..1000, pt in prop::collection::vec(0u32..5, 3)) {
            let f = Field::prime(5).unwrap();
            let sys = random_system(&f, 3, 3, 3, seed);
            let lam = LinearMap::random_invertible(&f, 3, seed + 11);
            let mu = LinearMap::random_invertible(&f, 3, seed + 12);
            let g = compose(&mu, &sys, &lam).unwrap();
            let want = mu.apply(&sys.eval(&lam.apply(&pt).unwrap()).unwrap()).unwrap();
            prop_assert_eq!(g.eval(&pt).unwrap(), want);
        }
    }
}
