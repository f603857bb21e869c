//! Sparse multivariate polynomials with rational coefficients over a fixed
//! list of named variables, plus a small parser for expressions such as
//! `x^10 + y^10 + z^10 + w^5 - t^2` or `3/2*x*y^2 - 2z`.

use crate::rational::{self, Q};
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Q>,
}

impl Polynomial {
    pub fn zero(vars: &[String]) -> Self {
        Self {
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(vars: &[String], terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.len(), vars.len(), "exponent vector length");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u32]) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Weighted degree of a monomial.
    pub fn weighted_degree(m: &[u32], weights: &[u32]) -> u64 {
        m.iter()
            .zip(weights)
            .map(|(&a, &w)| u64::from(a) * u64::from(w))
            .sum()
    }

    /// Sets every variable outside `keep` to zero.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| {
                m.iter()
                    .enumerate()
                    .all(|(i, &a)| a == 0 || keep.contains(&i))
            })
            .map(|(m, c)| (m.clone(), c.clone()));
        Self::from_terms(&self.vars, terms)
    }

    /// Variables that occur with positive exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m[i] > 0))
            .collect()
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&a, x)| acc * rational::pow(x, a.into()))
            })
            .fold(Q::zero(), |a, b| a + b)
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .zip(point)
                    .fold(Complex64::new(rational::to_f64(c), 0.0), |acc, (&a, x)| {
                        acc * x.powu(a)
                    })
            })
            .sum()
    }

    /// Sum of `|c|·|x^m|`, the scale against which a residual is judged.
    pub fn eval_abs_complex(&self, point: &[Complex64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .zip(point)
                    .fold(rational::to_f64(&c.abs()), |acc, (&a, x)| {
                        acc * x.norm().powi(a as i32)
                    })
            })
            .sum()
    }

    pub fn monomial_string(&self, m: &[u32]) -> String {
        let parts: Vec<String> = m
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(i, &a)| {
                if a == 1 {
                    self.vars[i].clone()
                } else {
                    format!("{}^{a}", self.vars[i])
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    pub fn parse(text: &str, vars: &[String]) -> Result<Self, PolyError> {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            vars,
        }
        .polynomial()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest total degree first, which keeps x^10+... readable
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, "-")?,
                (_, false) => write!(f, "+")?,
            }
            let mono = self.monomial_string(m);
            if mono == "1" {
                write!(f, "{}", rational::render(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", rational::render(&abs))?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, PolyError> {
        Err(PolyError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn polynomial(mut self) -> Result<Polynomial, PolyError> {
        let mut p = Polynomial::zero(self.vars);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -Q::one()
            }
            Some(b'+') => {
                self.pos += 1;
                Q::one()
            }
            Some(_) => Q::one(),
            None => return self.err("empty polynomial"),
        };
        loop {
            let (m, c) = self.term()?;
            p.add_term(m, sign * c);
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    sign = Q::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -Q::one();
                }
                Some(_) => return self.err("expected '+' or '-'"),
            }
        }
        Ok(p)
    }

    fn term(&mut self) -> Result<(Monomial, Q), PolyError> {
        let mut mono = vec![0u32; self.vars.len()];
        let mut coeff = Q::one();
        let mut any = false;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    coeff *= self.number()?;
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let (i, e) = self.power()?;
                    mono[i] += e;
                }
                _ if !any => return self.err("expected a number or variable"),
                _ => break,
            }
            any = true;
            match self.peek() {
                Some(b'*') => self.pos += 1,
                Some(c) if c.is_ascii_alphanumeric() || c == b'_' => {}
                _ => break,
            }
        }
        Ok((mono, coeff))
    }

    fn digits(&mut self) -> Result<&str, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn number(&mut self) -> Result<Q, PolyError> {
        let num = self.digits()?.to_string();
        let text = if self.peek() == Some(b'/') {
            self.pos += 1;
            format!("{num}/{}", self.digits()?)
        } else {
            num
        };
        let pos = self.pos;
        rational::parse_q(&text).map_err(|e| PolyError::Parse {
            pos,
            msg: e.to_string(),
        })
    }

    fn power(&mut self) -> Result<(usize, u32), PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        let idx = self
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        let exp = if self.peek() == Some(b'^') {
            self.pos += 1;
            let d = self.digits()?;
            d.parse::<u32>().map_err(|_| PolyError::Parse {
                pos: self.pos,
                msg: "exponent too large".into(),
            })?
        } else {
            1
        };
        Ok((idx, exp))
    }
}
