//! Seeded generators of radical local blocks and semi-local instances.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linear::{random_elem, LinearMap};
use crate::poly::{Monomial, Polynomial};
use crate::semilocal::{quotient_dimension, SemiLocalInstance};
use crate::system::{compose, PolySystem};
use crate::unipoly::UniPoly;

/// Shape of generated instances.
#[derive(Clone, Debug)]
pub struct InstanceParams {
    /// Block width, 1 or 2.
    pub c: usize,
    pub blocks: usize,
    /// Closed points per block are drawn from `1..=max_block_points`.
    pub max_block_points: usize,
    /// Largest `q^N` allowed for the point field of a block.
    pub max_point_field: u64,
    /// Redraw until `|Z(G)|` reaches this.
    pub min_points: usize,
    /// Every block has exactly one `k`-rational point.
    pub unique_rational: bool,
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams {
            c: 1,
            blocks: 2,
            max_block_points: 3,
            max_point_field: 1 << 12,
            min_points: 1,
            unique_rational: false,
        }
    }
}

fn poly_of(u: &UniPoly, nvars: usize, var: usize) -> Polynomial {
    Polynomial::from_terms(
        u.field(),
        nvars,
        u.coeffs().iter().enumerate().map(|(e, &c)| {
            let mut exps = vec![0; nvars];
            exps[var] = e as u32;
            (Monomial::new(exps), c)
        }),
    )
}

fn random_monic(field: &Field, deg: usize, rng: &mut dyn RngCore) -> UniPoly {
    let mut coeffs: Vec<u32> = (0..deg).map(|_| random_elem(field, rng)).collect();
    coeffs.push(1);
    UniPoly::new(field, coeffs)
}

fn point_field_size(u: &UniPoly) -> Result<u64> {
    let q = u.field().q() as u64;
    let n = u.irreducible_factor_degrees()?.into_iter().fold(1u64, |acc, d| {
        let d = d as u64;
        acc / gcd(acc, d) * d
    });
    Ok(q.saturating_pow(n as u32))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Monic squarefree polynomial of degree `deg` whose splitting field has at most `max_field` elements.
pub fn random_squarefree(field: &Field, deg: usize, max_field: u64, rng: &mut dyn RngCore) -> Result<UniPoly> {
    for _ in 0..10_000 {
        let u = random_monic(field, deg, rng);
        if u.is_squarefree()? && point_field_size(&u)? <= max_field {
            return Ok(u);
        }
    }
    Err(Error::Budget(format!("no squarefree polynomial of degree {deg} found over {field}")))
}

/// Squarefree `(x - a) g` where `g` has no root in `k`. A rootless `g` is never
/// linear, so degree 2 is raised to 3.
pub fn random_unique_root(field: &Field, deg: usize, max_field: u64, rng: &mut dyn RngCore) -> Result<UniPoly> {
    let deg = if deg == 2 { 3 } else { deg };
    let a = random_elem(field, rng);
    let lin = UniPoly::new(field, vec![field.neg(a), 1]);
    if deg <= 1 {
        return Ok(lin);
    }
    for _ in 0..10_000 {
        let g = random_monic(field, deg - 1, rng);
        if g.roots().is_empty() && g.is_squarefree()? && point_field_size(&g)? <= max_field {
            return Ok(lin.mul(&g));
        }
    }
    Err(Error::Budget(format!("no rootless polynomial of degree {} found over {field}", deg - 1)))
}

/// `{u(x1)}` as a one-variable block.
pub fn univariate_block(u: &UniPoly) -> PolySystem {
    PolySystem::new(vec![poly_of(u, 1, 0)]).expect("one polynomial")
}

/// `{u(x1), x2 - h(x1)}` with `deg h < deg u`, disguised by random invertible 2x2 maps.
/// The points are `(a, h(a))` for the roots `a` of `u`, moved by the variable map.
pub fn two_variable_block(u: &UniPoly, rng: &mut dyn RngCore) -> Result<PolySystem> {
    let field = u.field();
    let s = u.degree().unwrap_or(0);
    let h = UniPoly::new(field, (0..s.max(1)).map(|_| random_elem(field, rng)).collect());
    let x2 = Polynomial::var(field, 2, 1);
    let base = PolySystem::new(vec![poly_of(u, 2, 0), x2.sub(&poly_of(&h, 2, 0))])?;
    let lam = LinearMap::random_invertible_with(field, 2, rng);
    let mu = LinearMap::random_invertible_with(field, 2, rng);
    compose(&mu, &base, &lam)
}

/// Radical blocks drawn from `rng` according to `params`.
pub fn random_blocks(field: &Field, params: &InstanceParams, rng: &mut dyn RngCore) -> Result<Vec<PolySystem>> {
    if !(1..=2).contains(&params.c) {
        return Err(Error::pre(format!("generated blocks have width 1 or 2, not {}", params.c)));
    }
    if params.blocks == 0 || params.max_block_points == 0 {
        return Err(Error::pre("need at least one block with at least one point"));
    }
    (0..params.blocks)
        .map(|_| {
            let deg = 1 + (rng.next_u32() as usize) % params.max_block_points;
            let u = if params.unique_rational {
                random_unique_root(field, deg, params.max_point_field, rng)?
            } else {
                random_squarefree(field, deg, params.max_point_field, rng)?
            };
            if params.c == 1 {
                Ok(univariate_block(&u))
            } else {
                two_variable_block(&u, rng)
            }
        })
        .collect()
}

/// Seeded semi-local instance. Blocks are redrawn until `|Z(G)| >= min_points`.
pub fn random_instance(field: &Field, params: &InstanceParams, seed: u64) -> Result<SemiLocalInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = params.max_block_points.pow(params.blocks as u32);
    if params.min_points > cap {
        return Err(Error::pre(format!("at most {cap} points are possible, {} requested", params.min_points)));
    }
    loop {
        let blocks = random_blocks(field, params, &mut rng)?;
        let s: usize = blocks.iter().map(block_point_count).product::<Result<usize>>()?;
        if s >= params.min_points {
            let (lam_seed, mu_seed) = (rng.gen(), rng.gen());
            return SemiLocalInstance::new(blocks, lam_seed, mu_seed);
        }
    }
}

/// Points of a radical block: the dimension of its quotient ring.
fn block_point_count(b: &PolySystem) -> Result<usize> {
    let gb = crate::groebner::groebner_basis(b.polys())?;
    quotient_dimension(&gb, b.nvars()).ok_or_else(|| Error::Internal("generated block is not zero-dimensional".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semilocal::{analyze_block, brute_zero_set};

    #[test]
    fn generated_blocks_are_radical_with_predicted_points() {
        for seed in 0..20 {
            let f = Field::prime([3, 5, 7, 11][seed as usize % 4]).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for c in 1..=2 {
                let params = InstanceParams { c, blocks: 2, ..Default::default() };
                for b in random_blocks(&f, &params, &mut rng).unwrap() {
                    let a = analyze_block(&b, 10).unwrap();
                    assert!(a.radical);
                    assert_eq!(a.points, block_point_count(&b).unwrap());
                    let z = brute_zero_set(&b, a.point_field_degree, 1 << 22).unwrap();
                    assert_eq!(z.s, a.points);
                }
            }
        }
    }

    #[test]
    fn unique_rational_blocks() {
        let f = Field::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let u = random_unique_root(&f, 3, 1 << 12, &mut rng).unwrap();
            assert_eq!(u.roots().len(), 1);
            assert!(u.is_squarefree().unwrap());
        }
    }

    #[test]
    fn instances_are_deterministic() {
        let f = Field::prime(7).unwrap();
        let params = InstanceParams { c: 2, blocks: 2, min_points: 2, ..Default::default() };
        let a = random_instance(&f, &params, 9).unwrap();
        let b = random_instance(&f, &params, 9).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.n(), 4);
    }
}
