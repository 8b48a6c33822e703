//! Exact rational and multivariate polynomial arithmetic.
//!
//! Polynomials over Q in variables `x1..xn` stand in for smooth functions on
//! R^n: every operation downstream (products, partials, Lie derivatives,
//! contractions) stays inside this class, so identity checks reduce to "the
//! defect is the zero polynomial", which is decidable by exact equality.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational in lowest terms with positive denominator; machine-word
/// fast path with arbitrary-precision fallback.
pub use crate::rational::Rational;

/// Shorthand rational constructor used all over the tests and checkers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from_i64(num, den)
}

pub fn rat_int(num: i64) -> Rational {
    Rational::from_i64(num, 1)
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum PolyError {
    #[error("dimension mismatch: {0} vs {1} variables")]
    DimensionMismatch(usize, usize),
    #[error("variable index {index} out of range for {n_vars} variables")]
    IndexOutOfRange { index: usize, n_vars: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Multivariate polynomial with `Rational` coefficients in a fixed number of
/// variables. Canonical form: no stored term has a zero coefficient, so
/// equality of term maps is equality of polynomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    n_vars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero(n_vars: usize) -> Self {
        Poly {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: Rational) -> Self {
        let mut p = Poly::zero(n_vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; n_vars], c);
        }
        p
    }

    pub fn one(n_vars: usize) -> Self {
        Poly::constant(n_vars, Rational::one())
    }

    /// The variable `x_{i+1}` (0-based index).
    pub fn var(n_vars: usize, i: usize) -> Result<Self, PolyError> {
        if i >= n_vars {
            return Err(PolyError::IndexOutOfRange { index: i, n_vars });
        }
        let mut exps = vec![0; n_vars];
        exps[i] = 1;
        let mut p = Poly::zero(n_vars);
        p.terms.insert(exps, Rational::one());
        Ok(p)
    }

    pub fn monomial(n_vars: usize, exps: Vec<u32>, coeff: Rational) -> Result<Self, PolyError> {
        if exps.len() != n_vars {
            return Err(PolyError::DimensionMismatch(exps.len(), n_vars));
        }
        let mut p = Poly::zero(n_vars);
        if !coeff.is_zero() {
            p.terms.insert(exps, coeff);
        }
        Ok(p)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    /// The constant coefficient.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&vec![0; self.n_vars])
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    fn check_dims(&self, other: &Poly) -> Result<(), PolyError> {
        if self.n_vars != other.n_vars {
            return Err(PolyError::DimensionMismatch(self.n_vars, other.n_vars));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_dims(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        Ok(Poly {
            n_vars: self.n_vars,
            terms,
        })
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_dims(other)?;
        let mut terms: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let entry = terms.entry(exps).or_insert_with(Rational::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Poly {
            n_vars: self.n_vars,
            terms,
        })
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.checked_add(other).expect("polynomial dimension mismatch")
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.checked_sub(other).expect("polynomial dimension mismatch")
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.checked_mul(other).expect("polynomial dimension mismatch")
    }

    pub fn neg(&self) -> Poly {
        Poly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n_vars);
        }
        Poly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    /// Exact formal partial derivative with respect to `x_{i+1}` (0-based).
    pub fn partial(&self, i: usize) -> Result<Poly, PolyError> {
        if i >= self.n_vars {
            return Err(PolyError::IndexOutOfRange {
                index: i,
                n_vars: self.n_vars,
            });
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[i] -= 1;
            terms.insert(exps, c * rat_int(e[i] as i64));
        }
        Ok(Poly {
            n_vars: self.n_vars,
            terms,
        })
    }

    /// Parse the literal syntax `3/2*x1^2*x2 - x3`: a signed sum of terms,
    /// each a `*`-product of a rational coefficient and powers `xk^a`.
    pub fn parse(input: &str, n_vars: usize) -> Result<Poly, PolyError> {
        Parser {
            bytes: input.as_bytes(),
            pos: 0,
            n_vars,
        }
        .parse_poly()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, coeff) in &self.terms {
            let mag = coeff.abs();
            if first {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, k)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    n_vars: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn parse_poly(&mut self) -> Result<Poly, PolyError> {
        let mut acc = Poly::zero(self.n_vars);
        self.skip_ws();
        let mut sign = 1i64;
        if let Some(b'-') = self.peek() {
            self.pos += 1;
            sign = -1;
        } else if let Some(b'+') = self.peek() {
            self.pos += 1;
        }
        loop {
            let term = self.parse_term()?;
            acc = acc.add(&term.scale(&rat_int(sign)));
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                None => return Ok(acc),
                Some(c) => return self.err(format!("unexpected character '{}'", c as char)),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = Poly::one(self.n_vars);
        loop {
            self.skip_ws();
            let factor = self.parse_factor()?;
            acc = acc.mul(&factor);
            self.skip_ws();
            if let Some(b'*') = self.peek() {
                self.pos += 1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Poly, PolyError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let idx = self.parse_uint()?;
                if idx == 0 || idx as usize > self.n_vars {
                    return self.err(format!(
                        "variable x{} out of range 1..{}",
                        idx, self.n_vars
                    ));
                }
                let mut exp = 1u32;
                if let Some(b'^') = self.peek() {
                    self.pos += 1;
                    exp = self.parse_uint()?;
                }
                let mut exps = vec![0; self.n_vars];
                exps[idx as usize - 1] = exp;
                Poly::monomial(self.n_vars, exps, Rational::one())
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.parse_uint()? as i64;
                self.skip_ws();
                if let Some(b'/') = self.peek() {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.parse_uint()? as i64;
                    if den == 0 {
                        return self.err("zero denominator");
                    }
                    Ok(Poly::constant(self.n_vars, rat(num, den)))
                } else {
                    Ok(Poly::constant(self.n_vars, rat_int(num)))
                }
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }

    fn parse_uint(&mut self) -> Result<u32, PolyError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| PolyError::Parse {
                pos: start,
                msg: "number too large".into(),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        Poly::parse(s, 3).unwrap()
    }

    #[test]
    fn add_collects_terms() {
        // (x1+1) + (x1-1) = 2x1
        assert_eq!(p("x1 + 1").add(&p("x1 - 1")), p("2*x1"));
    }

    #[test]
    fn product_of_variables() {
        assert_eq!(p("x1").mul(&p("x2")), p("x1*x2"));
    }

    #[test]
    fn difference_of_squares() {
        // expand and collect by hand: (x1+x2)(x1-x2) = x1^2 - x2^2
        assert_eq!(p("x1 + x2").mul(&p("x1 - x2")), p("x1^2 - x2^2"));
    }

    #[test]
    fn partial_power_rule() {
        assert_eq!(p("x1^2*x2").partial(0).unwrap(), p("2*x1*x2"));
        assert_eq!(p("7/3").partial(1).unwrap(), Poly::zero(3));
        assert_eq!(p("x1*x2 + x2^3").partial(1).unwrap(), p("x1 + 3*x2^2"));
    }

    #[test]
    fn partial_index_out_of_range() {
        assert_eq!(
            p("x1").partial(3),
            Err(PolyError::IndexOutOfRange { index: 3, n_vars: 3 })
        );
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a = Poly::parse("x1", 2).unwrap();
        let b = Poly::parse("x1", 3).unwrap();
        assert_eq!(a.checked_add(&b), Err(PolyError::DimensionMismatch(2, 3)));
        assert_eq!(a.checked_mul(&b), Err(PolyError::DimensionMismatch(2, 3)));
    }

    #[test]
    fn parse_rational_coefficients() {
        let q = p("3/2*x1^2*x2 - x3");
        let mut expect = Poly::zero(3);
        expect = expect.add(&Poly::monomial(3, vec![2, 1, 0], rat(3, 2)).unwrap());
        expect = expect.add(&Poly::monomial(3, vec![0, 0, 1], rat_int(-1)).unwrap());
        assert_eq!(q, expect);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(matches!(Poly::parse("x1 + ", 3), Err(PolyError::Parse { .. })));
        assert!(matches!(Poly::parse("x9", 3), Err(PolyError::Parse { .. })));
        assert!(matches!(Poly::parse("1/0", 3), Err(PolyError::Parse { .. })));
    }

    #[test]
    fn display_roundtrip() {
        for s in ["0", "x1", "3/2*x1^2*x2 - x3", "1 + x2", "-x1 - 2*x3"] {
            let q = p(s);
            assert_eq!(Poly::parse(&q.to_string(), 3).unwrap(), q);
        }
    }
}
