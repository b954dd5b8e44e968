//! Line-oriented surface files.
//!
//! ```text
//! # comment
//! p 29          (or `p Q` for integer coefficients over the rationals)
//! L i j c       coefficient of x_i y_j
//! Q i j k l c   coefficient of x_i x_j y_k y_l
//! ```
//!
//! Index pairs may come in either order; repeated entries add up.

use std::fmt::Write as _;

use thiserror::Error;
use wehler_core::surface::PAIR6;
use wehler_core::{is_prime, FpSurface, PrimeField, Rational, SurfaceError, WehlerSurface};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `p` header line")]
    MissingHeader,
    #[error("modulus {0} is not an odd prime below 2^32")]
    BadModulus(u64),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Field declared by the header.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Modulus {
    Prime(u64),
    Rational,
}

/// Parsed file before choosing a coefficient field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceFile {
    pub modulus: Modulus,
    pub l: Vec<(usize, usize, i128)>,
    pub q: Vec<(usize, usize, usize, usize, i128)>,
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

pub fn parse(text: &str) -> Result<SurfaceFile, ParseError> {
    let mut modulus = None;
    let mut l = Vec::new();
    let mut q = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let index = |t: &str| -> Result<usize, ParseError> {
            match t.parse::<usize>() {
                Ok(i) if i < 3 => Ok(i),
                _ => Err(syntax(line, format!("bad index `{t}`"))),
            }
        };
        let coeff = |t: &str| t.parse::<i128>().map_err(|_| syntax(line, format!("bad coefficient `{t}`")));
        match tokens[0] {
            "p" => {
                if modulus.is_some() {
                    return Err(syntax(line, "duplicate header"));
                }
                let [_, m] = tokens[..] else { return Err(syntax(line, "expected `p <modulus|Q>`")) };
                modulus = Some(if m == "Q" {
                    Modulus::Rational
                } else {
                    let p: u64 = m.parse().map_err(|_| syntax(line, format!("bad modulus `{m}`")))?;
                    if p < 3 || p > u64::from(u32::MAX) || !is_prime(p) {
                        return Err(ParseError::BadModulus(p));
                    }
                    Modulus::Prime(p)
                });
            }
            "L" => {
                let [_, i, j, c] = tokens[..] else { return Err(syntax(line, "expected `L i j c`")) };
                l.push((index(i)?, index(j)?, coeff(c)?));
            }
            "Q" => {
                let [_, i, j, k, m, c] = tokens[..] else { return Err(syntax(line, "expected `Q i j k l c`")) };
                q.push((index(i)?, index(j)?, index(k)?, index(m)?, coeff(c)?));
            }
            other => return Err(syntax(line, format!("unknown record `{other}`"))),
        }
        if modulus.is_none() {
            return Err(ParseError::MissingHeader);
        }
    }
    Ok(SurfaceFile { modulus: modulus.ok_or(ParseError::MissingHeader)?, l, q })
}

impl SurfaceFile {
    pub fn to_rational(&self) -> Result<WehlerSurface<Rational>, ParseError> {
        let r = Rational::from_integer;
        let l: Vec<_> = self.l.iter().map(|&(i, j, c)| (i, j, r(c))).collect();
        let q: Vec<_> = self.q.iter().map(|&(i, j, k, m, c)| (i, j, k, m, r(c))).collect();
        Ok(WehlerSurface::from_entries(r(0), &l, &q)?)
    }

    /// The surface over `F_p`. `prime` overrides nothing for a prime file
    /// except that it must agree with the header; for a rational file it
    /// selects the reduction.
    pub fn to_fp(&self, prime: Option<u64>) -> Result<FpSurface, ParseError> {
        let p = match (self.modulus, prime) {
            (Modulus::Prime(p), None) => p,
            (Modulus::Prime(p), Some(q)) if p == q => p,
            (Modulus::Prime(_), Some(q)) => {
                return Err(syntax(1, format!("file is over F_p with another modulus than {q}")))
            }
            (Modulus::Rational, Some(q)) => q,
            (Modulus::Rational, None) => return Err(syntax(1, "rational file needs a prime to reduce modulo")),
        };
        let field = PrimeField::new(p).map_err(|_| ParseError::BadModulus(p))?;
        let e = |c: i128| field.from_i64((c % i128::from(p)) as i64);
        let l: Vec<_> = self.l.iter().map(|&(i, j, c)| (i, j, e(c))).collect();
        let q: Vec<_> = self.q.iter().map(|&(i, j, k, m, c)| (i, j, k, m, e(c))).collect();
        Ok(FpSurface::from_entries(field.zero(), &l, &q)?)
    }
}

/// Canonical text of a surface over `F_p`: nonzero entries in index order,
/// residues in `[0, p)`.
pub fn serialize(s: &FpSurface) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p {}", s.field().modulus());
    for i in 0..3 {
        for j in 0..3 {
            let c = s.a(i, j);
            if c.value() != 0 {
                let _ = writeln!(out, "L {i} {j} {}", c.value());
            }
        }
    }
    for &(i, j) in &PAIR6 {
        for &(k, l) in &PAIR6 {
            let c = s.b(i, j, k, l);
            if c.value() != 0 {
                let _ = writeln!(out, "Q {i} {j} {k} {l} {}", c.value());
            }
        }
    }
    out
}
