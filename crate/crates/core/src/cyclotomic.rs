//! Exact arithmetic in the cyclotomic field `ℚ(ζ_n) = ℚ[x]/Φ_n(x)`.

use crate::rational::{self, qi, Q};
use num_complex::Complex64;
use num_traits::{One, Zero};
use std::fmt;

/// Element of `ℚ(ζ_n)` as coefficients of `1, ζ, …, ζ^{φ(n)-1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cyc(Vec<Q>);

impl Cyc {
    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicField {
    n: u32,
    /// Monic `Φ_n`, lowest degree first.
    modulus: Vec<Q>,
}

/// `Φ_n` as integer coefficients, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n > 0);
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        p = exact_divide(&p, &cyclotomic_polynomial(d));
    }
    p
}

/// Division by a monic integer polynomial with zero remainder.
fn exact_divide(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for (j, &b) in den.iter().enumerate() {
            rem[i + j] -= c * b;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

impl CyclotomicField {
    pub fn new(n: u32) -> Self {
        let modulus = cyclotomic_polynomial(n).into_iter().map(qi).collect();
        Self { n, modulus }
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    /// `φ(n)`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn zero(&self) -> Cyc {
        Cyc(vec![Q::zero(); self.degree()])
    }

    pub fn one(&self) -> Cyc {
        self.from_q(Q::one())
    }

    pub fn from_q(&self, x: Q) -> Cyc {
        let mut v = self.zero();
        v.0[0] = x;
        v
    }

    fn reduce(&self, mut v: Vec<Q>) -> Cyc {
        let d = self.degree();
        while v.len() > d {
            let c = v.pop().expect("nonempty");
            if c.is_zero() {
                continue;
            }
            let base = v.len() - d;
            for (j, m) in self.modulus[..d].iter().enumerate() {
                v[base + j] -= &c * m;
            }
        }
        v.resize(d, Q::zero());
        Cyc(v)
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(&self, k: i64) -> Cyc {
        let e = k.rem_euclid(i64::from(self.n)) as usize;
        let mut v = vec![Q::zero(); e + 1];
        v[e] = Q::one();
        self.reduce(v)
    }

    pub fn add(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &Cyc) -> Cyc {
        Cyc(a.0.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, c: &Q, a: &Cyc) -> Cyc {
        Cyc(a.0.iter().map(|x| c * x).collect())
    }

    pub fn mul(&self, a: &Cyc, b: &Cyc) -> Cyc {
        let mut v = vec![Q::zero(); 2 * self.degree()];
        for (i, x) in a.0.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.0.iter().enumerate() {
                v[i + j] += x * y;
            }
        }
        self.reduce(v)
    }

    pub fn pow(&self, a: &Cyc, e: u32) -> Cyc {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Determinant by cofactor expansion (small matrices only).
    pub fn det(&self, m: &[Vec<Cyc>]) -> Cyc {
        match m.len() {
            0 => self.one(),
            1 => m[0][0].clone(),
            n => {
                let mut acc = self.zero();
                for col in 0..n {
                    let minor: Vec<Vec<Cyc>> = m[1..]
                        .iter()
                        .map(|row| {
                            row.iter()
                                .enumerate()
                                .filter(|(j, _)| *j != col)
                                .map(|(_, x)| x.clone())
                                .collect()
                        })
                        .collect();
                    let term = self.mul(&m[0][col], &self.det(&minor));
                    acc = if col % 2 == 0 {
                        self.add(&acc, &term)
                    } else {
                        self.sub(&acc, &term)
                    };
                }
                acc
            }
        }
    }

    /// Image under `ζ ↦ exp(2πi/n)`.
    pub fn to_complex(&self, a: &Cyc) -> Complex64 {
        let z = Complex64::from_polar(1.0, std::f64::consts::TAU / f64::from(self.n));
        a.0.iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + rational::to_f64(c))
    }

    /// `ζ^k` if `a` is a power of `ζ`, with `0 ≤ k < n`.
    pub fn as_zeta_power(&self, a: &Cyc) -> Option<u32> {
        (0..self.n).find(|&k| self.zeta_pow(k.into()) == *a)
    }

    /// Renders `a` as a polynomial in `ζ{n}`, or `ζ{n}^k` for roots of unity.
    pub fn render(&self, a: &Cyc) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let z = format!("ζ{}", self.n);
        if let Some(k) = self.as_zeta_power(a) {
            return match k {
                0 => "1".into(),
                1 => z,
                k => format!("{z}^{k}"),
            };
        }
        let mut out = String::new();
        for (i, c) in a.0.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let neg = *c < Q::zero();
            let abs = if neg { -c } else { c.clone() };
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let mono = match i {
                0 => String::new(),
                1 => z.clone(),
                i => format!("{z}^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&rational::render(&abs));
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{mono}", rational::render(&abs)));
            }
        }
        out
    }
}

impl fmt::Display for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(ζ{})", self.n)
    }
}
