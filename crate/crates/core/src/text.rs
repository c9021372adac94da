//! Canonical text forms for polynomials, systems, vectors and matrices.
//!
//! ```text
//! poly    := "0" | term (" + " term)*          terms in descending grevlex order
//! term    := coeff ("*" var)*                   coefficient always printed
//! var     := "x" index ("^" exp)?               1-based index, "^1" omitted
//! system  := "field: " FieldSpec NL "vars: " n NL (poly NL)+
//! vector  := elem ("," elem)*
//! matrix  := one row per line, entries separated by spaces
//! ```
//!
//! The polynomial parser is lenient: it also accepts `-` between terms, a
//! missing coefficient, repeated variables and unordered terms. In system
//! files, blank lines and text after `#` are ignored.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linear::LinearMap;
use crate::poly::{Monomial, Polynomial};
use crate::system::PolySystem;

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", self.field().fmt_elem(c))?;
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

/// Splits at top-level `+`/`-`, returning `(negated, term)` pairs.
fn split_terms(s: &str) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    for ch in s.chars() {
        match ch {
            '[' => {
                depth += 1;
                cur.push(ch);
            }
            ']' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                let t = cur.trim().to_string();
                if !t.is_empty() {
                    out.push((neg, t));
                } else if out.is_empty() && neg {
                    return Err(Error::parse(format!("dangling sign in `{s}`")));
                } else if !out.is_empty() || neg {
                    return Err(Error::parse(format!("empty term in `{s}`")));
                }
                neg = ch == '-';
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    if depth != 0 {
        return Err(Error::parse(format!("unbalanced brackets in `{s}`")));
    }
    let t = cur.trim().to_string();
    if t.is_empty() {
        return Err(Error::parse(format!("empty term in `{s}`")));
    }
    out.push((neg, t));
    Ok(out)
}

impl Polynomial {
    pub fn parse(field: &Field, nvars: usize, s: &str) -> Result<Polynomial> {
        let mut out = Polynomial::zero(field, nvars);
        for (neg, term) in split_terms(s)? {
            let mut coeff = 1u32;
            let mut exps = vec![0u32; nvars];
            for factor in term.split('*') {
                let factor = factor.trim();
                if let Some(rest) = factor.strip_prefix('x') {
                    let (idx, e) = match rest.split_once('^') {
                        Some((i, e)) => (i, e),
                        None => (rest, "1"),
                    };
                    let idx: usize = idx
                        .trim()
                        .parse()
                        .map_err(|_| Error::parse(format!("bad variable `{factor}`")))?;
                    if idx == 0 || idx > nvars {
                        return Err(Error::parse(format!("variable `{factor}` outside x1..x{nvars}")));
                    }
                    let e: u32 =
                        e.trim().parse().map_err(|_| Error::parse(format!("bad exponent in `{factor}`")))?;
                    exps[idx - 1] += e;
                } else {
                    let c = if field.m() > 1 && !factor.starts_with('[') {
                        let n: i64 =
                            factor.parse().map_err(|_| Error::parse(format!("bad coefficient `{factor}`")))?;
                        field.from_int(n)
                    } else {
                        field.parse_elem(factor)?
                    };
                    coeff = field.mul(coeff, c);
                }
            }
            if neg {
                coeff = field.neg(coeff);
            }
            out.add_term(Monomial::new(exps), coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for PolySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field: {}", self.field().spec())?;
        writeln!(f, "vars: {}", self.nvars())?;
        for p in self.polys() {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

impl PolySystem {
    pub fn parse(s: &str) -> Result<PolySystem> {
        let mut field: Option<Field> = None;
        let mut nvars: Option<usize> = None;
        let mut polys = Vec::new();
        for (lineno, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let at = |e: Error| match e {
                Error::Parse(m) => Error::parse(format!("line {}: {m}", lineno + 1)),
                e => Error::parse(format!("line {}: {e}", lineno + 1)),
            };
            if let Some(rest) = line.strip_prefix("field:") {
                field = Some(rest.trim().parse().map_err(at)?);
            } else if let Some(rest) = line.strip_prefix("vars:") {
                nvars = Some(
                    rest.trim()
                        .parse()
                        .map_err(|_| Error::parse(format!("line {}: bad variable count", lineno + 1)))?,
                );
            } else {
                let (Some(f), Some(n)) = (&field, nvars) else {
                    return Err(Error::parse(format!(
                        "line {}: polynomial before `field:` and `vars:` headers",
                        lineno + 1
                    )));
                };
                polys.push(Polynomial::parse(f, n, line).map_err(at)?);
            }
        }
        if polys.is_empty() {
            return Err(Error::parse("system has no polynomials"));
        }
        PolySystem::new(polys)
    }
}

pub fn format_vector(field: &Field, v: &[u32]) -> String {
    v.iter().map(|&a| field.fmt_elem(a)).collect::<Vec<_>>().join(",")
}

/// Parses comma-separated elements; commas inside brackets belong to the element.
pub fn parse_vector(field: &Field, s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(field.parse_elem(&s[start..i])?);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(field.parse_elem(&s[start..])?);
    Ok(out)
}

pub fn format_matrix(m: &LinearMap) -> String {
    let f = m.field();
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&a| f.fmt_elem(a)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_matrix(field: &Field, s: &str) -> Result<LinearMap> {
    let rows = s
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| l.split_whitespace().map(|t| field.parse_elem(t)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    LinearMap::new(field, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_print_and_parse() {
        let f = Field::prime(7).unwrap();
        let p = Polynomial::parse(&f, 3, "x1^2 - 2*x2*x3 + x3 + 5").unwrap();
        assert_eq!(p.to_string(), "1*x1^2 + 5*x2*x3 + 1*x3 + 5");
        assert_eq!(Polynomial::parse(&f, 3, &p.to_string()).unwrap(), p);
        assert_eq!(Polynomial::parse(&f, 2, "0").unwrap().to_string(), "0");
        assert_eq!(Polynomial::parse(&f, 2, "-x1").unwrap().to_string(), "6*x1");
        assert!(Polynomial::parse(&f, 2, "x3").is_err());
        assert!(Polynomial::parse(&f, 2, "x1 +").is_err());
    }

    #[test]
    fn extension_coefficients() {
        let f = Field::new(2, 2).unwrap();
        let p = Polynomial::parse(&f, 1, "[0,1]*x1^2 + [1,1]").unwrap();
        assert_eq!(p.to_string(), "[0,1]*x1^2 + [1,1]");
        assert_eq!(Polynomial::parse(&f, 1, "x1 + 1").unwrap().to_string(), "[1,0]*x1 + [1,0]");
    }

    #[test]
    fn system_round_trip() {
        let text = "field: GF(5)\nvars: 2\n# comment\n1*x1^2 + 4\n\n1*x1*x2 + 3*x2\n";
        let sys = PolySystem::parse(text).unwrap();
        assert_eq!(sys.len(), 2);
        assert_eq!(PolySystem::parse(&sys.to_string()).unwrap(), sys);
        assert!(PolySystem::parse("x1\n").is_err());
        let ext = PolySystem::parse("field: GF(3^2)\nvars: 1\n[1,2]*x1 + [0,1]\n").unwrap();
        assert_eq!(PolySystem::parse(&ext.to_string()).unwrap(), ext);
    }

    #[test]
    fn vectors_and_matrices() {
        let f = Field::new(3, 2).unwrap();
        let v = parse_vector(&f, "[1,2],[0,0],[2,1]").unwrap();
        assert_eq!(format_vector(&f, &v), "[1,2],[0,0],[2,1]");
        let g = Field::prime(11).unwrap();
        let m = LinearMap::new(&g, vec![vec![1, 2], vec![3, 10]]).unwrap();
        assert_eq!(parse_matrix(&g, &format_matrix(&m)).unwrap(), m);
    }
}
