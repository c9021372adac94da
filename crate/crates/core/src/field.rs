//! Finite fields GF(p^m) in a power-basis representation.
//!
//! An element of GF(p^m) is stored as a single `u32` whose base-`p` digits are
//! the coefficients `c_0, ..., c_{m-1}` of `c_0 + c_1 a + ... + c_{m-1} a^{m-1}`,
//! where `a` is a root of the stored modulus. Bulk containers (polynomials,
//! matrices) hold these raw values next to one shared [`Field`] handle; the
//! tagged [`FieldElement`] is the checked, user-facing form.
//!
//! Canonical text:
//!
//! ```text
//! field    := "GF(" p ")" | "GF(" p "^" m ")" | "GF(" p "^" m "; modulus=" vec ")"
//! element  := uint                      (prime fields, value in [0, p))
//!           | "[" uint ("," uint)* "]"  (extension fields, exactly m coefficients c_0..c_{m-1})
//! vec      := "[" uint ("," uint)* "]"  (modulus coefficients c_0..c_m, monic)
//! ```
//!
//! `GF(p^m)` without a modulus selects the default modulus: the monic
//! irreducible polynomial of degree `m` whose coefficient vector
//! `(c_0, ..., c_{m-1})` is lexicographically smallest.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Largest field cardinality accepted.
pub const MAX_FIELD_SIZE: u64 = 1 << 26;
const TABLE_LIMIT: u32 = 256;

/// The defining data of a finite field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Monic modulus coefficients `c_0..c_m`; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.m)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.modulus {
            None => write!(f, "GF({})", self.p),
            Some(md) => write!(f, "GF({}^{}; modulus={})", self.p, self.m, fmt_vec(md)),
        }
    }
}

fn fmt_vec(v: &[u32]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn parse_vec(s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::parse(format!("expected bracketed list, got `{s}`")))?;
    inner
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::parse(format!("bad integer `{}`", t.trim())))
        })
        .collect()
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(Field::from_str(s)?.spec().clone())
    }
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
}

struct Inner {
    spec: FieldSpec,
    q: u32,
    tables: Option<Tables>,
}

/// Shared handle to a finite field. Cheap to clone; equality compares the
/// defining [`FieldSpec`].
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.spec)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.spec)
    }
}

fn cache() -> &'static Mutex<HashMap<FieldSpec, Field>> {
    static CACHE: OnceLock<Mutex<HashMap<FieldSpec, Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn default_moduli() -> &'static Mutex<HashMap<(u32, u32), Vec<u32>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Vec<u32>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1)
    }

    /// GF(p^m) with the default (lexicographically smallest) modulus.
    pub fn new(p: u32, m: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidField("extension degree must be at least 1".into()));
        }
        check_size(p, m)?;
        if m == 1 {
            return Field::build(FieldSpec { p, m, modulus: None });
        }
        let modulus = default_modulus(p, m)?;
        Field::build(FieldSpec { p, m, modulus: Some(modulus) })
    }

    /// GF(p^m) with an explicit monic modulus `c_0..c_m`; irreducibility is checked.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if modulus.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree at least 1".into()));
        }
        let m = (modulus.len() - 1) as u32;
        check_size(p, m)?;
        if modulus.iter().any(|&c| c >= p) || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidField(format!(
                "modulus {} is not a monic polynomial over GF({p})",
                fmt_vec(&modulus)
            )));
        }
        if !is_irreducible(p, &modulus) {
            return Err(Error::InvalidField(format!(
                "modulus {} is reducible over GF({p})",
                fmt_vec(&modulus)
            )));
        }
        if m == 1 {
            // A linear modulus defines GF(p) itself.
            return Field::build(FieldSpec { p, m, modulus: None });
        }
        Field::build(FieldSpec { p, m, modulus: Some(modulus) })
    }

    fn build(spec: FieldSpec) -> Result<Field> {
        let mut guard = cache().lock().expect("field cache poisoned");
        if let Some(f) = guard.get(&spec) {
            return Ok(f.clone());
        }
        let q = spec.q();
        let mut inner = Inner { spec: spec.clone(), q, tables: None };
        if spec.m > 1 && q <= TABLE_LIMIT {
            let probe = Field(Arc::new(Inner { spec: spec.clone(), q, tables: None }));
            let n = q as usize;
            let mut add = vec![0u32; n * n];
            let mut mul = vec![0u32; n * n];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = probe.add_slow(a, b);
                    mul[(a * q + b) as usize] = probe.mul_slow(a, b);
                }
            }
            inner.tables = Some(Tables { add, mul });
        }
        let f = Field(Arc::new(inner));
        guard.insert(spec, f.clone());
        Ok(f)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn p(&self) -> u32 {
        self.0.spec.p
    }

    pub fn m(&self) -> u32 {
        self.0.spec.m
    }

    /// Field cardinality.
    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.spec.m == 1
    }

    /// Iterates over all raw element values `0..q`.
    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.0.q
    }

    pub fn zero(&self) -> u32 {
        0
    }

    pub fn one(&self) -> u32 {
        1
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.spec.p as i64) as u32
    }

    /// Element from power-basis coefficients `c_0..c_{m-1}` (missing ones are 0).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<u32> {
        let p = self.p();
        if coeffs.len() > self.m() as usize || coeffs.iter().any(|&c| c >= p) {
            return Err(Error::parse(format!(
                "coefficients {} do not describe an element of {}",
                fmt_vec(coeffs),
                self
            )));
        }
        Ok(coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c))
    }

    /// Power-basis coefficients `c_0..c_{m-1}` of a raw value.
    pub fn coeffs(&self, a: u32) -> Vec<u32> {
        let p = self.p();
        let mut out = Vec::with_capacity(self.m() as usize);
        let mut v = a;
        for _ in 0..self.m() {
            out.push(v % p);
            v /= p;
        }
        out
    }

    /// The power-basis generator `a` (a root of the modulus). Prime fields
    /// return 1.
    pub fn generator(&self) -> u32 {
        if self.m() == 1 {
            1
        } else {
            self.p()
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.0;
        if inner.spec.m == 1 {
            let s = a + b;
            if s >= inner.spec.p {
                s - inner.spec.p
            } else {
                s
            }
        } else if let Some(t) = &inner.tables {
            t.add[(a * inner.q + b) as usize]
        } else {
            self.add_slow(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.0.spec.p;
        if self.0.spec.m == 1 {
            if a == 0 {
                0
            } else {
                p - a
            }
        } else {
            let mut out = 0u32;
            let mut v = a;
            let mut w = 1u32;
            for _ in 0..self.0.spec.m {
                let c = v % p;
                v /= p;
                out += ((p - c) % p) * w;
                w = w.wrapping_mul(p);
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if self.0.spec.m == 1 {
            let p = self.0.spec.p;
            if a >= b {
                a - b
            } else {
                a + p - b
            }
        } else {
            self.add(a, self.neg(b))
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.0;
        if inner.spec.m == 1 {
            ((a as u64 * b as u64) % inner.spec.p as u64) as u32
        } else if let Some(t) = &inner.tables {
            t.mul[(a * inner.q + b) as usize]
        } else {
            self.mul_slow(a, b)
        }
    }

    /// `a + b * c`
    #[inline]
    pub fn mul_add(&self, a: u32, b: u32, c: u32) -> u32 {
        self.add(a, self.mul(b, c))
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p();
        if p == 2 {
            return a ^ b;
        }
        let (mut x, mut y, mut out, mut w) = (a, b, 0u32, 1u32);
        for _ in 0..self.m() {
            out += ((x % p + y % p) % p) * w;
            x /= p;
            y /= p;
            w = w.wrapping_mul(p);
        }
        out
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p() as u64;
        let m = self.m() as usize;
        let md = self.0.spec.modulus.as_ref().expect("extension modulus");
        let da = self.coeffs(a);
        let db = self.coeffs(b);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (m..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &mc) in md.iter().take(m).enumerate() {
                let t = prod[k - m + i] + (p - c) * mc as u64 % p;
                prod[k - m + i] = t % p;
            }
        }
        prod.iter()
            .take(m)
            .rev()
            .fold(0u32, |acc, &c| acc * p as u32 + c as u32)
    }

    /// Multiplicative inverse via extended Euclid on the representative.
    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.m() == 1 {
            let p = self.p() as i64;
            let (mut r0, mut r1) = (p, a as i64);
            let (mut t0, mut t1) = (0i64, 1i64);
            while r1 != 0 {
                let qt = r0 / r1;
                (r0, r1) = (r1, r0 - qt * r1);
                (t0, t1) = (t1, t0 - qt * t1);
            }
            return Ok(t0.rem_euclid(p) as u32);
        }
        let p = self.p();
        let md = self.0.spec.modulus.as_ref().expect("extension modulus").clone();
        let inv = gfp_poly_inverse(p, &self.coeffs(a), &md);
        self.from_coeffs(&inv)
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^(p^i)`, the i-th iterate of the absolute Frobenius.
    pub fn frobenius(&self, a: u32, i: u32) -> u32 {
        let i = i % self.m();
        let mut out = a;
        for _ in 0..i {
            out = self.pow(out, self.p() as u64);
        }
        out
    }

    /// The unique `b` with `b^p = a`.
    pub fn pth_root(&self, a: u32) -> u32 {
        self.frobenius(a, self.m() - 1)
    }

    /// Tagged element.
    pub fn elem(&self, value: u32) -> FieldElement {
        debug_assert!(value < self.q());
        FieldElement { field: self.clone(), value }
    }

    pub fn fmt_elem(&self, a: u32) -> String {
        if self.m() == 1 {
            a.to_string()
        } else {
            fmt_vec(&self.coeffs(a))
        }
    }

    /// Parses an element in canonical form. Prime fields also accept negative
    /// integers (reduced mod p).
    pub fn parse_elem(&self, s: &str) -> Result<u32> {
        let s = s.trim();
        if s.starts_with('[') {
            let v = parse_vec(s)?;
            if self.m() == 1 {
                if v.len() != 1 {
                    return Err(Error::parse(format!("`{s}` is not an element of {self}")));
                }
                return self.from_coeffs(&v);
            }
            if v.len() != self.m() as usize {
                return Err(Error::parse(format!(
                    "`{s}` needs exactly {} coefficients for {self}",
                    self.m()
                )));
            }
            return self.from_coeffs(&v);
        }
        let n: i64 = s
            .parse()
            .map_err(|_| Error::parse(format!("bad field element `{s}`")))?;
        if self.m() > 1 && !(0..self.p() as i64).contains(&n) {
            return Err(Error::parse(format!(
                "integer `{s}` is outside the prime subfield of {self}"
            )));
        }
        Ok(self.from_int(n))
    }

    /// Embeds this field into `big`, which must have the same characteristic and
    /// a degree divisible by ours. The image of the power-basis generator is the
    /// numerically smallest root of our modulus in `big`.
    pub fn embedding_into(&self, big: &Field) -> Result<Embedding> {
        if big.p() != self.p() || !big.m().is_multiple_of(self.m()) {
            return Err(Error::FieldMismatch(format!("{self} does not embed into {big}")));
        }
        let image_of_gen = if self.m() == 1 {
            0
        } else {
            let md = self.0.spec.modulus.as_ref().unwrap();
            let root = big.elements().find(|&r| {
                let mut acc = 0u32;
                for &c in md.iter().rev() {
                    acc = big.add(big.mul(acc, r), c);
                }
                acc == 0
            });
            root.ok_or_else(|| Error::Internal(format!("modulus of {self} has no root in {big}")))?
        };
        let mut table = Vec::with_capacity(self.q() as usize);
        for a in self.elements() {
            let cs = self.coeffs(a);
            let mut acc = 0u32;
            for &c in cs.iter().rev() {
                acc = big.add(big.mul(acc, image_of_gen), c);
            }
            table.push(acc);
        }
        let back = table.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        Ok(Embedding { small: self.clone(), big: big.clone(), table, back })
    }

    /// Same field, or an extension with degree a multiple of this one.
    pub fn extension(&self, degree: u32) -> Result<Field> {
        Field::new(self.p(), self.m() * degree)
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Parses `GF(p)`, `GF(p^m)` or `GF(p^m; modulus=[...])`.
    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        let body = s
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::parse(format!("field must look like GF(p^m), got `{s}`")))?;
        let (head, modulus) = match body.split_once(';') {
            Some((h, rest)) => {
                let rest = rest.trim();
                let v = rest
                    .strip_prefix("modulus")
                    .map(str::trim_start)
                    .and_then(|r| r.strip_prefix('='))
                    .ok_or_else(|| Error::parse(format!("expected `modulus=[...]` in `{s}`")))?;
                (h.trim(), Some(parse_vec(v)?))
            }
            None => (body.trim(), None),
        };
        let (p, m) = match head.split_once('^') {
            Some((p, m)) => (p.trim(), m.trim()),
            None => (head, "1"),
        };
        let p: u32 = p.parse().map_err(|_| Error::parse(format!("bad characteristic in `{s}`")))?;
        let m: u32 = m.parse().map_err(|_| Error::parse(format!("bad degree in `{s}`")))?;
        match modulus {
            Some(md) => {
                if md.len() != m as usize + 1 {
                    return Err(Error::parse(format!(
                        "modulus in `{s}` must have {} coefficients",
                        m + 1
                    )));
                }
                Field::with_modulus(p, md)
            }
            None => Field::new(p, m),
        }
    }
}

fn check_size(p: u32, m: u32) -> Result<()> {
    let q = (p as u64).checked_pow(m);
    match q {
        Some(q) if q <= MAX_FIELD_SIZE => Ok(()),
        _ => Err(Error::InvalidField(format!(
            "GF({p}^{m}) exceeds the supported size {MAX_FIELD_SIZE}"
        ))),
    }
}

fn default_modulus(p: u32, m: u32) -> Result<Vec<u32>> {
    if let Some(md) = default_moduli().lock().unwrap().get(&(p, m)) {
        return Ok(md.clone());
    }
    let count = p.pow(m);
    for v in 0..count {
        // c_0 is the most significant digit so the scan is lexicographic in (c_0, ..., c_{m-1}).
        let mut md = vec![0u32; m as usize + 1];
        let mut x = v;
        for i in (0..m as usize).rev() {
            md[i] = x % p;
            x /= p;
        }
        md[m as usize] = 1;
        if is_irreducible(p, &md) {
            default_moduli().lock().unwrap().insert((p, m), md.clone());
            return Ok(md);
        }
    }
    Err(Error::Internal(format!("no irreducible polynomial of degree {m} over GF({p})")))
}

// Dense polynomial helpers over GF(p), used before any extension field exists.

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn poly_rem(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(b[db], p) as u64;
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = r[r.len() - 1] as u64 * lead_inv % p as u64;
        for (i, &bc) in b.iter().enumerate() {
            r[k + i] = ((r[k + i] as u64 + (p as u64 - c) * bc as u64) % p as u64) as u32;
        }
        trim(&mut r);
    }
    r
}

fn poly_mul_mod(p: u32, a: &[u32], b: &[u32], md: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    poly_rem(p, &prod, md)
}

fn poly_sub(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out: Vec<u32> = (0..n)
        .map(|i| {
            let x = *a.get(i).unwrap_or(&0);
            let y = *b.get(i).unwrap_or(&0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

fn poly_gcd(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(p, &x, &y);
        x = y;
        y = r;
    }
    x
}

/// Rabin-style test: `md` (monic, degree m) is irreducible over GF(p) iff
/// `gcd(md, x^{p^i} - x) = 1` for every `i <= m/2`.
fn is_irreducible(p: u32, md: &[u32]) -> bool {
    let m = md.len() - 1;
    if m == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    let mut xp = x.clone();
    for _ in 1..=m / 2 {
        // xp <- xp^p mod md
        let mut acc = vec![1u32];
        let mut base = xp.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mul_mod(p, &acc, &base, md);
            }
            base = poly_mul_mod(p, &base, &base, md);
            e >>= 1;
        }
        xp = acc;
        let g = poly_gcd(p, md, &poly_sub(p, &xp, &x));
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Inverse of `a` modulo `md` over GF(p), via extended Euclid. Returns `m` coefficients.
fn gfp_poly_inverse(p: u32, a: &[u32], md: &[u32]) -> Vec<u32> {
    let m = md.len() - 1;
    let mut r0 = md.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r1);
    let mut t0: Vec<u32> = Vec::new();
    let mut t1: Vec<u32> = vec![1];
    while !r1.is_empty() {
        // quotient of r0 / r1
        let mut rem = r0.clone();
        let d1 = r1.len() - 1;
        let lead_inv = inv_mod_p(r1[d1], p) as u64;
        let mut quot = vec![0u32; rem.len().saturating_sub(d1).max(1)];
        while rem.len() > d1 {
            let k = rem.len() - 1 - d1;
            let c = (rem[rem.len() - 1] as u64 * lead_inv % p as u64) as u32;
            quot[k] = c;
            for (i, &bc) in r1.iter().enumerate() {
                rem[k + i] = ((rem[k + i] as u64 + (p - c) as u64 * bc as u64) % p as u64) as u32;
            }
            trim(&mut rem);
        }
        let mut qt = Vec::new();
        if !quot.is_empty() {
            let mut prod = vec![0u32; quot.len() + t1.len().max(1)];
            for (i, &x) in quot.iter().enumerate() {
                for (j, &y) in t1.iter().enumerate() {
                    prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
                }
            }
            trim(&mut prod);
            qt = prod;
        }
        let t2 = poly_sub(p, &t0, &qt);
        r0 = std::mem::replace(&mut r1, rem);
        t0 = std::mem::replace(&mut t1, t2);
    }
    // r0 is a nonzero constant
    let c = inv_mod_p(r0[0], p) as u64;
    let mut out: Vec<u32> = t0.iter().map(|&x| (x as u64 * c % p as u64) as u32).collect();
    out.resize(m, 0);
    out
}

/// An injective field homomorphism `small -> big`.
#[derive(Clone)]
pub struct Embedding {
    small: Field,
    big: Field,
    table: Vec<u32>,
    back: HashMap<u32, u32>,
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Embedding({} -> {})", self.small, self.big)
    }
}

impl Embedding {
    pub fn small(&self) -> &Field {
        &self.small
    }

    pub fn big(&self) -> &Field {
        &self.big
    }

    #[inline]
    pub fn map(&self, a: u32) -> u32 {
        self.table[a as usize]
    }

    /// Preimage of `b` if it lies in the image of the small field.
    pub fn pull_back(&self, b: u32) -> Option<u32> {
        self.back.get(&b).copied()
    }
}

/// The operation requested from [`FieldElement::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A field element tagged with its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: u32,
}

impl FieldElement {
    pub fn new(field: &Field, value: u32) -> Result<FieldElement> {
        if value >= field.q() {
            return Err(Error::parse(format!("raw value {value} is not an element of {field}")));
        }
        Ok(FieldElement { field: field.clone(), value })
    }

    pub fn from_coeffs(field: &Field, coeffs: &[u32]) -> Result<FieldElement> {
        Ok(FieldElement { field: field.clone(), value: field.from_coeffs(coeffs)? })
    }

    pub fn parse(field: &Field, s: &str) -> Result<FieldElement> {
        Ok(FieldElement { field: field.clone(), value: field.parse_elem(s)? })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    /// Power-basis coefficients, always of length m.
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Checked binary arithmetic.
    pub fn arith(&self, other: &FieldElement, op: ArithOp) -> Result<FieldElement> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!(
                "operands from {} and {}",
                self.field, other.field
            )));
        }
        let f = &self.field;
        let value = match op {
            ArithOp::Add => f.add(self.value, other.value),
            ArithOp::Sub => f.sub(self.value, other.value),
            ArithOp::Mul => f.mul(self.value, other.value),
            ArithOp::Div => f.div(self.value, other.value)?,
        };
        Ok(FieldElement { field: f.clone(), value })
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(FieldElement { field: self.field.clone(), value: self.field.inv(self.value)? })
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        FieldElement { field: self.field.clone(), value: self.field.pow(self.value, e) }
    }

    /// `self^(p^i)`.
    pub fn frobenius(&self, i: u32) -> FieldElement {
        FieldElement { field: self.field.clone(), value: self.field.frobenius(self.value, i) }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.fmt_elem(self.value))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.field.fmt_elem(self.value), self.field)
    }
}
