//! Textbook Buchberger algorithm in grevlex, used to check closures.

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};

/// Full reduction of `f` by `basis`.
pub fn normal_form(f: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let field = f.field().clone();
    let leads: Vec<(Monomial, u32)> = basis
        .iter()
        .filter_map(|g| g.leading_term().map(|(m, c)| (m.clone(), field.inv(c).unwrap())))
        .collect();
    let nonzero: Vec<&Polynomial> = basis.iter().filter(|g| !g.is_zero()).collect();
    let mut p = f.clone();
    let mut r = Polynomial::zero(&field, f.nvars());
    while let Some((m, c)) = p.leading_term() {
        let m = m.clone();
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(i) => {
                let t = leads[i].0.quotient_of(&m);
                let coef = field.mul(c, leads[i].1);
                p = p.sub(&nonzero[i].mul_term(&t, coef));
            }
            None => {
                r.add_term(m.clone(), c);
                p = p.sub(&Polynomial::from_terms(&field, f.nvars(), [(m, c)]));
            }
        }
    }
    r
}

fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let field = f.field();
    let (mf, cf) = f.leading_term().unwrap();
    let (mg, cg) = g.leading_term().unwrap();
    let l = mf.lcm(mg);
    let a = f.mul_term(&mf.quotient_of(&l), field.inv(cf).unwrap());
    let b = g.mul_term(&mg.quotient_of(&l), field.inv(cg).unwrap());
    a.sub(&b)
}

/// Largest number of basis elements before giving up.
pub const MAX_BASIS: usize = 20_000;

/// Reduced monic Gröbner basis of the ideal generated by `gens`, sorted by
/// descending leading monomial. The zero ideal gives an empty basis.
pub fn groebner_basis(gens: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let mut basis: Vec<Polynomial> = Vec::new();
    for g in gens {
        let r = normal_form(g, &basis);
        if !r.is_zero() {
            basis.push(r.monic());
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while let Some(idx) = select_pair(&basis, &pairs) {
        let (i, j) = pairs.swap_remove(idx);
        let (mi, _) = basis[i].leading_term().unwrap();
        let (mj, _) = basis[j].leading_term().unwrap();
        // coprime leading monomials reduce to zero
        if mi.is_coprime(mj) {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j]);
        let r = normal_form(&s, &basis);
        if r.is_zero() {
            continue;
        }
        if basis.len() >= MAX_BASIS {
            return Err(Error::Budget(format!("Gröbner basis exceeded {MAX_BASIS} elements")));
        }
        basis.push(r.monic());
        let k = basis.len() - 1;
        pairs.extend((0..k).map(|i| (i, k)));
    }
    Ok(reduce_basis(basis))
}

/// Normal strategy: the pair with the smallest lcm of leading monomials.
fn select_pair(basis: &[Polynomial], pairs: &[(usize, usize)]) -> Option<usize> {
    pairs
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| lcm_of(basis, a).cmp(&lcm_of(basis, b)).then(a.cmp(b)))
        .map(|(k, _)| k)
}

fn lcm_of(basis: &[Polynomial], &(i, j): &(usize, usize)) -> Monomial {
    basis[i].leading_term().unwrap().0.lcm(basis[j].leading_term().unwrap().0)
}

fn reduce_basis(mut basis: Vec<Polynomial>) -> Vec<Polynomial> {
    // drop elements whose lead is divisible by another lead
    basis.sort_by(|a, b| a.leading_term().unwrap().0.cmp(b.leading_term().unwrap().0));
    let mut minimal: Vec<Polynomial> = Vec::new();
    for g in basis {
        let lm = g.leading_term().unwrap().0.clone();
        if !minimal.iter().any(|h| h.leading_term().unwrap().0.divides(&lm)) {
            minimal.push(g);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Polynomial> =
            minimal.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, h)| h.clone()).collect();
        let (lm, lc) = minimal[i].leading_term().unwrap();
        let lm = lm.clone();
        let tail = minimal[i].sub(&Polynomial::from_terms(minimal[i].field(), minimal[i].nvars(), [(lm.clone(), lc)]));
        let mut g = normal_form(&tail, &others);
        g.add_term(lm, lc);
        out.push(g.monic());
    }
    out.reverse();
    out
}

/// `f ∈ (basis)` for a Gröbner basis.
pub fn ideal_contains(basis: &[Polynomial], f: &Polynomial) -> bool {
    normal_form(f, basis).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn polys(p: u32, n: usize, s: &[&str]) -> Vec<Polynomial> {
        let f = Field::prime(p).unwrap();
        s.iter().map(|t| Polynomial::parse(&f, n, t).unwrap()).collect()
    }

    #[test]
    fn unit_ideal() {
        let g = groebner_basis(&polys(7, 2, &["x1*x2 - 1", "x1^2"])).unwrap();
        assert_eq!(g, polys(7, 2, &["1"]));
    }

    #[test]
    fn shape_ideal() {
        // x1 = x2, x2^2 = 1
        let g = groebner_basis(&polys(7, 2, &["x1^2 - 1", "x2 - x1"])).unwrap();
        assert_eq!(g.len(), 2);
        for f in polys(7, 2, &["x2^2 - 1", "x1 - x2", "x1*x2 - 1"]) {
            assert!(ideal_contains(&g, &f));
        }
        assert!(!ideal_contains(&g, &polys(7, 2, &["x1 - 1"])[0]));
    }

    #[test]
    fn twisted_cubic() {
        let gens = polys(5, 3, &["x1^2 - x2", "x1^3 - x3"]);
        let g = groebner_basis(&gens).unwrap();
        for f in polys(5, 3, &["x2^3 - x3^2", "x1*x2 - x3", "x2^2 - x1*x3"]) {
            assert!(ideal_contains(&g, &f));
        }
        // reduced: every non-leading term is irreducible by the other leads
        for (i, a) in g.iter().enumerate() {
            for (j, b) in g.iter().enumerate() {
                if i != j {
                    let lm = b.leading_term().unwrap().0;
                    assert!(a.terms().all(|(m, _)| !lm.divides(m)));
                }
            }
        }
    }
}
