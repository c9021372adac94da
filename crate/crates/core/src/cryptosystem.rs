//! Toy public-key schemes built from semi-local power maps.
//!
//! `square1`: `n` blocks `x_i^d` with `gcd(d, q - 1) = 1`, so `G` is a
//! permutation of `k^n`. `nonsquare2`: one block
//! `(x1^3, x2^3, x1^2 x2 + x1 x2^2)` per variable pair; the third polynomial
//! is redundancy checked on decryption.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linear::LinearMap;
use crate::poly::Polynomial;
use crate::semilocal::matrix_from_text;
use crate::system::{compose, PolySystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Square1,
    Nonsquare2,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Square1 => "square1",
            Scheme::Nonsquare2 => "nonsquare2",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scheme> {
        match s {
            "square1" => Ok(Scheme::Square1),
            "nonsquare2" => Ok(Scheme::Nonsquare2),
            _ => Err(Error::parse(format!("unknown scheme `{s}` (expected square1 or nonsquare2)"))),
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `d^-1 mod (q - 1)`, the exponent that inverts `x -> x^d` on `k`.
pub fn inverse_exponent(d: u32, q: u32) -> Result<u64> {
    let n = (q - 1) as i64;
    if gcd(d as u64, n as u64) != 1 {
        return Err(Error::pre(format!("x^{d} is not a permutation of GF({q}): gcd({d}, {n}) != 1")));
    }
    if n == 1 {
        return Ok(1);
    }
    let (mut r0, mut r1, mut s0, mut s1) = (n, d as i64 % n, 0i64, 1i64);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    Ok(s0.rem_euclid(n) as u64)
}

/// The local map `F` in `n` variables.
pub fn local_map(scheme: Scheme, field: &Field, n: usize, exponent: u32) -> Result<PolySystem> {
    let x = |i: usize| Polynomial::var(field, n, i);
    let polys = match scheme {
        Scheme::Square1 => (0..n).map(|i| x(i).pow(exponent)).collect(),
        Scheme::Nonsquare2 => {
            if !n.is_multiple_of(2) || n == 0 {
                return Err(Error::pre(format!("nonsquare2 needs a positive even n, got {n}")));
            }
            let mut v = Vec::with_capacity(3 * n / 2);
            for b in 0..n / 2 {
                let (x1, x2) = (x(2 * b), x(2 * b + 1));
                v.push(x1.pow(exponent));
                v.push(x2.pow(exponent));
                v.push(redundancy(&x1, &x2));
            }
            v
        }
    };
    PolySystem::new(polys)
}

/// `h = x1^2 x2 + x1 x2^2`
fn redundancy(x1: &Polynomial, x2: &Polynomial) -> Polynomial {
    x1.pow(2).mul(x2).add(&x1.mul(&x2.pow(2)))
}

fn h_value(field: &Field, a: u32, b: u32) -> u32 {
    field.mul(field.mul(a, b), field.add(a, b))
}

/// Short hex digest of the canonical text of a public system.
pub fn fingerprint(public: &PolySystem) -> String {
    let digest = Sha256::digest(public.to_string().as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug)]
pub struct KeyPair {
    pub scheme: Scheme,
    pub field: Field,
    pub n: usize,
    pub exponent: u32,
    pub seed: Option<u64>,
    pub lam_seed: Option<u64>,
    pub mu_seed: Option<u64>,
    pub lam: LinearMap,
    pub mu: LinearMap,
    pub public: PolySystem,
}

pub fn keygen(scheme: Scheme, field: &Field, n: usize, seed: u64) -> Result<KeyPair> {
    keygen_with_exponent(scheme, field, n, 3, seed)
}

pub fn keygen_with_exponent(scheme: Scheme, field: &Field, n: usize, exponent: u32, seed: u64) -> Result<KeyPair> {
    if n == 0 {
        return Err(Error::pre("n must be positive"));
    }
    inverse_exponent(exponent, field.q())?;
    let local = local_map(scheme, field, n, exponent)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lam_seed, mu_seed): (u64, u64) = (rng.gen(), rng.gen());
    let lam = LinearMap::random_invertible(field, n, lam_seed);
    let mu = LinearMap::random_invertible(field, local.len(), mu_seed);
    let mut key = KeyPair::from_maps(scheme, field, exponent, lam, mu)?;
    key.seed = Some(seed);
    key.lam_seed = Some(lam_seed);
    key.mu_seed = Some(mu_seed);
    Ok(key)
}

/// Ciphertext together with the fingerprint of the key it was made for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ciphertext {
    pub values: Vec<u32>,
    pub fingerprint: String,
}

pub fn encrypt(public: &PolySystem, x: &[u32]) -> Result<Ciphertext> {
    if x.len() != public.nvars() {
        return Err(Error::dim(format!("plaintext has {} entries, key expects {}", x.len(), public.nvars())));
    }
    for &a in x {
        if a >= public.field().q() {
            return Err(Error::dim(format!("{a} is not an element of {}", public.field())));
        }
    }
    Ok(Ciphertext { values: public.eval(x)?, fingerprint: fingerprint(public) })
}

impl KeyPair {
    /// Key with explicit maps and no seeds.
    pub fn from_maps(scheme: Scheme, field: &Field, exponent: u32, lam: LinearMap, mu: LinearMap) -> Result<KeyPair> {
        let n = lam.rows();
        let local = local_map(scheme, field, n, exponent)?;
        if !lam.is_square() || mu.rows() != local.len() || !mu.is_square() {
            return Err(Error::dim(format!(
                "{scheme} with n = {n} needs a {n}x{n} lam and a {m}x{m} mu",
                m = local.len()
            )));
        }
        let lam = lam.with_inverse()?;
        let mu = mu.with_inverse()?;
        let public = compose(&mu, &local, &lam)?;
        Ok(KeyPair {
            scheme,
            field: field.clone(),
            n,
            exponent,
            seed: None,
            lam_seed: None,
            mu_seed: None,
            lam,
            mu,
            public,
        })
    }

    pub fn fingerprint(&self) -> String {
        fingerprint(&self.public)
    }

    pub fn encrypt(&self, x: &[u32]) -> Result<Ciphertext> {
        encrypt(&self.public, x)
    }

    pub fn decrypt(&self, ct: &Ciphertext) -> Result<Vec<u32>> {
        if ct.fingerprint != self.fingerprint() {
            return Err(Error::pre(format!(
                "ciphertext is for key {}, not {}",
                ct.fingerprint,
                self.fingerprint()
            )));
        }
        self.decrypt_values(&ct.values)
    }

    /// Inverts `G` on `y`; values outside the image are rejected.
    pub fn decrypt_values(&self, y: &[u32]) -> Result<Vec<u32>> {
        let f = &self.field;
        if y.len() != self.public.len() || y.iter().any(|&a| a >= f.q()) {
            return Err(Error::dim(format!("ciphertext must have {} field elements", self.public.len())));
        }
        let w = self.mu.inverse()?.apply(y)?;
        let e = inverse_exponent(self.exponent, f.q())?;
        let root = |a: u32| f.pow(a, e);
        let z: Vec<u32> = match self.scheme {
            Scheme::Square1 => w.iter().map(|&a| root(a)).collect(),
            Scheme::Nonsquare2 => {
                let mut z = Vec::with_capacity(self.n);
                let mut ok = true;
                for blk in w.chunks(3) {
                    let (z1, z2) = (root(blk[0]), root(blk[1]));
                    // evaluate every block before deciding, so rejection does not depend on which block failed
                    ok &= h_value(f, z1, z2) == blk[2];
                    z.push(z1);
                    z.push(z2);
                }
                if !ok {
                    return Err(Error::InvalidCiphertext);
                }
                z
            }
        };
        self.lam.inverse()?.apply(&z)
    }

    pub fn public_key(&self) -> PublicKey {
        PublicKey { scheme: self.scheme, exponent: self.exponent, public: self.public.clone() }
    }
}

/// What an attacker sees.
#[derive(Clone, Debug)]
pub struct PublicKey {
    pub scheme: Scheme,
    pub exponent: u32,
    pub public: PolySystem,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct KeyFile {
    pub scheme: Scheme,
    pub field: String,
    pub n: usize,
    pub exponent: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lam_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mu_seed: Option<u64>,
    pub lam: Vec<Vec<String>>,
    pub mu: Vec<Vec<String>>,
    pub fingerprint: String,
    pub public: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PublicKeyFile {
    pub scheme: Scheme,
    pub field: String,
    pub n: usize,
    pub exponent: u32,
    pub fingerprint: String,
    pub public: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CiphertextFile {
    pub field: String,
    pub fingerprint: String,
    pub values: String,
}

fn matrix_text(m: &LinearMap) -> Vec<Vec<String>> {
    m.data().iter().map(|r| r.iter().map(|&a| m.field().fmt_elem(a)).collect()).collect()
}

fn parse_public(field: &Field, n: usize, polys: &[String]) -> Result<PolySystem> {
    PolySystem::new(polys.iter().map(|s| Polynomial::parse(field, n, s)).collect::<Result<Vec<_>>>()?)
}

impl KeyPair {
    pub fn to_file(&self) -> KeyFile {
        KeyFile {
            scheme: self.scheme,
            field: self.field.spec().to_string(),
            n: self.n,
            exponent: self.exponent,
            seed: self.seed,
            lam_seed: self.lam_seed,
            mu_seed: self.mu_seed,
            lam: matrix_text(&self.lam),
            mu: matrix_text(&self.mu),
            fingerprint: self.fingerprint(),
            public: self.public.polys().iter().map(|p| p.to_string()).collect(),
        }
    }

    /// Rebuilds the key and checks matrices against seeds and the stored public system.
    pub fn from_file(file: &KeyFile) -> Result<KeyPair> {
        let field: Field = file.field.parse()?;
        let lam = matrix_from_text(&field, &file.lam)?;
        let mu = matrix_from_text(&field, &file.mu)?;
        if let Some(s) = file.lam_seed {
            if LinearMap::random_invertible(&field, lam.rows(), s).data() != lam.data() {
                return Err(Error::pre("stored lam does not match lam_seed"));
            }
        }
        if let Some(s) = file.mu_seed {
            if LinearMap::random_invertible(&field, mu.rows(), s).data() != mu.data() {
                return Err(Error::pre("stored mu does not match mu_seed"));
            }
        }
        let mut key = KeyPair::from_maps(file.scheme, &field, file.exponent, lam, mu)?;
        if key.n != file.n {
            return Err(Error::dim(format!("n = {} but lam is {}x{}", file.n, key.n, key.n)));
        }
        key.seed = file.seed;
        key.lam_seed = file.lam_seed;
        key.mu_seed = file.mu_seed;
        if !file.public.is_empty() && parse_public(&field, key.n, &file.public)? != key.public {
            return Err(Error::pre("stored public system differs from mu o F o lam"));
        }
        Ok(key)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable") + "\n"
    }

    pub fn from_json(s: &str) -> Result<KeyPair> {
        KeyPair::from_file(&serde_json::from_str(s).map_err(|e| Error::parse(e.to_string()))?)
    }

    pub fn public_json(&self) -> String {
        self.public_key().to_json()
    }
}

impl PublicKey {
    pub fn to_json(&self) -> String {
        let file = PublicKeyFile {
            scheme: self.scheme,
            field: self.public.field().spec().to_string(),
            n: self.public.nvars(),
            exponent: self.exponent,
            fingerprint: fingerprint(&self.public),
            public: self.public.polys().iter().map(|p| p.to_string()).collect(),
        };
        serde_json::to_string_pretty(&file).expect("serializable") + "\n"
    }

    pub fn from_json(s: &str) -> Result<PublicKey> {
        let file: PublicKeyFile = serde_json::from_str(s).map_err(|e| Error::parse(e.to_string()))?;
        let field: Field = file.field.parse()?;
        let public = parse_public(&field, file.n, &file.public)?;
        if fingerprint(&public) != file.fingerprint {
            return Err(Error::pre("public key fingerprint mismatch"));
        }
        Ok(PublicKey { scheme: file.scheme, exponent: file.exponent, public })
    }
}

impl Ciphertext {
    pub fn to_json(&self, field: &Field) -> String {
        let file = CiphertextFile {
            field: field.spec().to_string(),
            fingerprint: self.fingerprint.clone(),
            values: crate::text::format_vector(field, &self.values),
        };
        serde_json::to_string_pretty(&file).expect("serializable") + "\n"
    }

    pub fn from_json(s: &str) -> Result<(Field, Ciphertext)> {
        let file: CiphertextFile = serde_json::from_str(s).map_err(|e| Error::parse(e.to_string()))?;
        let field: Field = file.field.parse()?;
        let values = crate::text::parse_vector(&field, &file.values)?;
        Ok((field, Ciphertext { values, fingerprint: file.fingerprint }))
    }
}

/// Outcome of flipping every coordinate of every ciphertext to every other value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TamperStats {
    pub flips: u64,
    pub rejected: u64,
    /// Flips that land on another valid ciphertext, counted independently by
    /// tabulating the image of `G`.
    pub in_image: u64,
}

impl TamperStats {
    pub fn reject_rate(&self) -> f64 {
        self.rejected as f64 / self.flips.max(1) as f64
    }
}

/// Exhaustive single-coordinate tampering over all of `k^n`.
pub fn tamper_scan(key: &KeyPair) -> Result<TamperStats> {
    let f = &key.field;
    let q = f.q() as u64;
    let total = q.checked_pow(key.n as u32).filter(|&t| t <= 1 << 20).ok_or_else(|| Error::Budget("k^n too large to scan".into()))?;
    let points: Vec<Vec<u32>> =
        (0..total).map(|c| (0..key.n).map(|i| ((c / q.pow(i as u32)) % q) as u32).collect()).collect();
    let image: std::collections::HashSet<Vec<u32>> =
        points.iter().map(|x| key.public.eval(x)).collect::<Result<_>>()?;
    let mut stats = TamperStats { flips: 0, rejected: 0, in_image: 0 };
    for x in &points {
        let y = key.public.eval(x)?;
        for i in 0..y.len() {
            for v in f.elements().filter(|&v| v != y[i]) {
                let mut t = y.clone();
                t[i] = v;
                stats.flips += 1;
                if image.contains(&t) {
                    stats.in_image += 1;
                }
                match key.decrypt_values(&t) {
                    Err(Error::InvalidCiphertext) => stats.rejected += 1,
                    Ok(_) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keygen_shapes() {
        let f = Field::prime(11).unwrap();
        let a = keygen(Scheme::Square1, &f, 2, 42).unwrap();
        assert_eq!((a.public.len(), a.public.degree()), (2, 3));
        assert_eq!(a.to_json(), keygen(Scheme::Square1, &f, 2, 42).unwrap().to_json());
        let b = keygen(Scheme::Nonsquare2, &f, 2, 1).unwrap();
        assert_eq!((b.public.len(), b.public.nvars()), (3, 2));
        let f7 = Field::prime(7).unwrap();
        assert!(matches!(keygen(Scheme::Square1, &f7, 2, 0), Err(Error::Precondition(_))));
        assert!(keygen(Scheme::Nonsquare2, &f, 3, 0).is_err());
    }

    #[test]
    fn exponent_and_cube_roots() {
        assert_eq!(inverse_exponent(3, 11).unwrap(), 7);
        let f = Field::prime(11).unwrap();
        assert_eq!(f.pow(8, 7), 2);
        assert!(inverse_exponent(3, 7).is_err());
        assert_eq!(inverse_exponent(3, 2).unwrap(), 1);
    }

    #[test]
    fn identity_key_encrypts_to_cubes() {
        let f = Field::prime(11).unwrap();
        let key = KeyPair::from_maps(Scheme::Square1, &f, 3, LinearMap::identity(&f, 2), LinearMap::identity(&f, 2))
            .unwrap();
        assert_eq!(key.encrypt(&[2, 3]).unwrap().values, vec![8, 5]);
    }

    #[test]
    fn round_trips() {
        let f = Field::prime(11).unwrap();
        for scheme in [Scheme::Square1, Scheme::Nonsquare2] {
            let key = keygen(scheme, &f, 2, 7).unwrap();
            let mut seen = std::collections::HashSet::new();
            for a in 0..11 {
                for b in 0..11 {
                    let ct = key.encrypt(&[a, b]).unwrap();
                    assert!(seen.insert(ct.values.clone()));
                    assert_eq!(key.decrypt(&ct).unwrap(), vec![a, b]);
                }
            }
        }
        let g = Field::new(2, 3).unwrap();
        let key = keygen(Scheme::Nonsquare2, &g, 2, 3).unwrap();
        for a in g.elements() {
            let ct = key.encrypt(&[a, 5]).unwrap();
            assert_eq!(key.decrypt(&ct).unwrap(), vec![a, 5]);
        }
    }

    #[test]
    fn tampered_third_coordinate_is_rejected() {
        let f = Field::prime(11).unwrap();
        let key = KeyPair::from_maps(Scheme::Nonsquare2, &f, 3, LinearMap::identity(&f, 2), LinearMap::identity(&f, 3))
            .unwrap();
        let ct = key.encrypt(&[4, 9]).unwrap();
        let mut bad = ct.clone();
        bad.values[2] = f.add(bad.values[2], 1);
        assert!(matches!(key.decrypt(&bad), Err(Error::InvalidCiphertext)));
        let other = keygen(Scheme::Nonsquare2, &f, 2, 99).unwrap();
        assert!(matches!(other.decrypt(&ct), Err(Error::Precondition(_))));
    }

    #[test]
    fn tamper_scan_accepts_exactly_the_image() {
        let f = Field::prime(5).unwrap();
        let key = keygen(Scheme::Nonsquare2, &f, 2, 11).unwrap();
        let s = tamper_scan(&key).unwrap();
        assert_eq!(s.flips, 25 * 3 * 4);
        assert_eq!(s.rejected + s.in_image, s.flips);
    }

    #[test]
    fn redundancy_is_independent_of_cubes() {
        let f = Field::prime(11).unwrap();
        let sys = local_map(Scheme::Nonsquare2, &f, 2, 3).unwrap();
        let monos: Vec<_> = sys.polys().iter().flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
        let rows: Vec<Vec<u32>> = sys.polys().iter().map(|p| monos.iter().map(|m| p.coeff(m)).collect()).collect();
        assert_eq!(crate::linear::rank(&f, &rows), 3);
    }

    #[test]
    fn serialization_round_trips() {
        let f = Field::new(2, 3).unwrap();
        let key = keygen(Scheme::Nonsquare2, &f, 2, 5).unwrap();
        let back = KeyPair::from_json(&key.to_json()).unwrap();
        assert_eq!(back.public, key.public);
        let pk = PublicKey::from_json(&key.public_json()).unwrap();
        assert_eq!(pk.public, key.public);
        let ct = key.encrypt(&[1, 2]).unwrap();
        let (_, ct2) = Ciphertext::from_json(&ct.to_json(&f)).unwrap();
        assert_eq!(ct2, ct);
        let mut file = key.to_file();
        file.lam[0][0] = "[1,1,0]".into();
        assert!(KeyPair::from_file(&file).is_err());
    }
}
