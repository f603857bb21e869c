//! Isolated fixed points of sign involutions on Fermat-type complete
//! intersections `Σ c_i x_i^d = 0` in `Pⁿ`.
//!
//! In ordinary projective space the involution `x_i ↦ σ_i x_i` fixes the
//! two coordinate subspaces `{σ = +1}` and `{σ = -1}`. On each of them the
//! equations restrict to Fermat forms in fewer variables, and each stratum
//! is counted twice:
//!
//! - symbolically: on `P¹` by the degree of the gcd of the dehomogenised
//!   equations, on `P²` for degrees `(d, 2d)` by substituting `A_i = x_i^d`,
//!   which turns the system into a line meeting a conic;
//! - by enumeration: for unit coefficients every solution has coordinates
//!   in `{0} ∪ μ₂₄`, and all such normalised points are tested in exact
//!   `ℚ(ζ₂₄)` arithmetic.
//!
//! The two counts must agree. Every listed point carries a Jacobian minor
//! showing the restricted system is reduced there.

use crate::cyclotomic::{Cyc, CyclotomicField};
use crate::rational::{self, qi, Q};
use crate::weighted::{self, InvolutionSpec, WeightedSpace};
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::cmp::Ordering;

pub const OPERATIONS: &[&str] = &["count_fixed_points", "list_fixed_points"];

/// Per-equation residual bound for numeric points (max-norm 1).
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Numeric points closer than this (after normalisation) are the same.
pub const DEDUP_TOL: f64 = 1e-6;
/// Order of the roots of unity used by the enumeration path.
pub const ENUMERATION_ORDER: u32 = 24;
/// A numeric Jacobian minor counts as nonzero above this fraction of its
/// Hadamard bound.
const MINOR_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FermatError {
    #[error("bad equation {0:?}, expected degree:c0,c1,...")]
    BadEquation(String),
    #[error("equation has {got} coefficients, expected {expected}")]
    CoefficientLength { got: usize, expected: usize },
    #[error("equation {0} is not semi-invariant under the involution")]
    NotSemiInvariant(usize),
    #[error("involution is identity on P^{0}")]
    IdentityInvolution(usize),
    #[error("stratum {stratum:?} meets the variety in positive dimension: not zero-dimensional")]
    NotZeroDimensional { stratum: Vec<usize> },
    #[error("stratum {stratum:?}: intersection is not reduced ({reason})")]
    Degenerate { stratum: Vec<usize>, reason: String },
    #[error("stratum {stratum:?}: unsupported pattern ({reason})")]
    Unsupported { stratum: Vec<usize>, reason: String },
    #[error("stratum {stratum:?}: symbolic count {symbolic} but enumeration found {enumerated}")]
    PathsDisagree {
        stratum: Vec<usize>,
        symbolic: usize,
        enumerated: usize,
    },
    #[error("stratum {stratum:?}: numeric solutions failed ({reason})")]
    Numeric { stratum: Vec<usize>, reason: String },
    #[error(transparent)]
    Weighted(#[from] weighted::WeightedError),
}

type Result<T> = std::result::Result<T, FermatError>;

/// `Σ coeffs[i]·x_i^degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FermatEquation {
    pub degree: u32,
    pub coeffs: Vec<Q>,
}

impl FermatEquation {
    /// Parses `4:1,1,-1/2,...`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || FermatError::BadEquation(text.to_string());
        let (d, cs) = text.split_once(':').ok_or_else(bad)?;
        let degree: u32 = d.trim().parse().map_err(|_| bad())?;
        if degree == 0 {
            return Err(bad());
        }
        let coeffs = cs
            .split(',')
            .map(|c| rational::parse_q(c.trim()).map_err(|_| bad()))
            .collect::<Result<Vec<Q>>>()?;
        Ok(Self { degree, coeffs })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FermatSystem {
    pub ambient_dim: usize,
    pub equations: Vec<FermatEquation>,
    pub signs: InvolutionSpec,
}

impl FermatSystem {
    pub fn new(ambient_dim: usize, equations: Vec<FermatEquation>, signs: InvolutionSpec) -> Result<Self> {
        let n = ambient_dim + 1;
        if signs.signs.len() != n {
            return Err(weighted::WeightedError::SignLength {
                got: signs.signs.len(),
                expected: n,
            }
            .into());
        }
        for (idx, eq) in equations.iter().enumerate() {
            if eq.coeffs.len() != n {
                return Err(FermatError::CoefficientLength {
                    got: eq.coeffs.len(),
                    expected: n,
                });
            }
            // x_i^d has character σ_i^d
            let mut chars = eq
                .coeffs
                .iter()
                .zip(&signs.signs)
                .filter(|(c, _)| !c.is_zero())
                .map(|(_, &s)| if eq.degree % 2 == 0 { 1 } else { s });
            if let Some(first) = chars.next() {
                if chars.any(|c| c != first) {
                    return Err(FermatError::NotSemiInvariant(idx));
                }
            }
        }
        Ok(Self {
            ambient_dim,
            equations,
            signs,
        })
    }

    /// Parses `--eqs "2:1,1,1;4:1,1,1"` and `--signs -,+,+`.
    pub fn parse(ambient_dim: usize, eqs: &str, signs: &str) -> Result<Self> {
        let equations = eqs
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(FermatEquation::parse)
            .collect::<Result<Vec<_>>>()?;
        Self::new(ambient_dim, equations, InvolutionSpec::parse(signs)?)
    }

    /// Fermat quadric ∩ Fermat quartic in `P⁵` with the first three
    /// coordinates negated.
    pub fn quadric_quartic() -> Self {
        Self::parse(5, "2:1,1,1,1,1,1;4:1,1,1,1,1,1", "-,-,-,+,+,+").expect("valid system")
    }

    /// Relabels coordinate `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.ambient_dim + 1;
        let mut signs = vec![1i8; n];
        for i in 0..n {
            signs[perm[i]] = self.signs.signs[i];
        }
        let equations = self
            .equations
            .iter()
            .map(|e| {
                let mut c = vec![Q::zero(); n];
                for i in 0..n {
                    c[perm[i]] = e.coeffs[i].clone();
                }
                FermatEquation {
                    degree: e.degree,
                    coeffs: c,
                }
            })
            .collect();
        Self {
            ambient_dim: self.ambient_dim,
            equations,
            signs: InvolutionSpec { signs },
        }
    }
}

/// Nonzero Jacobian minor at a point of a stratum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobianCertificate {
    /// Equations used (indices into the system).
    pub rows: Vec<usize>,
    /// Coordinates used (global indices).
    pub cols: Vec<usize>,
    pub mode: &'static str,
    /// The minor (exact rendering, or modulus for numerics).
    pub minor: String,
    /// `|minor| / Hadamard bound` for numerics, 1 for exact minors.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPoint {
    pub stratum: usize,
    pub coords: Vec<String>,
    pub exact: bool,
    /// Largest equation residual after max-norm normalisation (0 when exact).
    pub residual: f64,
    pub certificate: JacobianCertificate,
    #[serde(skip)]
    pub exact_coords: Option<Vec<Cyc>>,
    #[serde(skip)]
    pub numeric_coords: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumCount {
    pub index: usize,
    pub support: Vec<usize>,
    pub dimension: usize,
    /// Equations not vanishing identically on the stratum.
    pub equations: usize,
    pub symbolic_count: usize,
    pub enumerated_count: Option<usize>,
    pub bezout: Option<u64>,
    pub bezout_consistent: Option<bool>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FermatCount {
    pub count: usize,
    pub strata: Vec<StratumCount>,
    pub certificates: Vec<FixedPoint>,
}

/// Equations restricted to a stratum: `(index, degree, coeffs on support)`.
struct Restricted<'a> {
    support: &'a [usize],
    eqs: Vec<(usize, u32, Vec<Q>)>,
}

impl Restricted<'_> {
    fn m(&self) -> usize {
        self.support.len()
    }

    fn all_unit(&self) -> bool {
        self.eqs
            .iter()
            .all(|(_, _, c)| c.iter().all(|x| x.is_zero() || x.abs().is_one()))
    }

    fn degenerate(&self, reason: impl Into<String>) -> FermatError {
        FermatError::Degenerate {
            stratum: self.support.to_vec(),
            reason: reason.into(),
        }
    }

    fn unsupported(&self, reason: impl Into<String>) -> FermatError {
        FermatError::Unsupported {
            stratum: self.support.to_vec(),
            reason: reason.into(),
        }
    }
}

/// Counts isolated fixed points with per-stratum and per-point certificates.
pub fn count_fixed_points(sys: &FermatSystem) -> Result<FermatCount> {
    let space = WeightedSpace::projective(sys.ambient_dim);
    let locus = weighted::fixed_locus(&space, &sys.signs)?;
    if locus.fixes_everything {
        return Err(FermatError::IdentityInvolution(sys.ambient_dim));
    }
    let field = CyclotomicField::new(ENUMERATION_ORDER);
    let mut strata = Vec::new();
    let mut certificates = Vec::new();
    for (index, stratum) in locus.strata.iter().enumerate() {
        let r = Restricted {
            support: &stratum.support,
            eqs: sys
                .equations
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    (
                        i,
                        e.degree,
                        stratum.support.iter().map(|&j| e.coeffs[j].clone()).collect::<Vec<Q>>(),
                    )
                })
                .filter(|(_, _, c)| c.iter().any(|x| !x.is_zero()))
                .collect(),
        };
        let (count, mut points, enumerated) = solve_stratum(&r, &field, sys.ambient_dim + 1)?;
        for p in &mut points {
            p.stratum = index;
        }
        let dimension = r.m() - 1;
        let bezout = (r.eqs.len() == dimension)
            .then(|| r.eqs.iter().map(|(_, d, _)| u64::from(*d)).product());
        strata.push(StratumCount {
            index,
            support: stratum.support.clone(),
            dimension,
            equations: r.eqs.len(),
            symbolic_count: count,
            enumerated_count: enumerated,
            bezout,
            bezout_consistent: bezout.map(|b| b == count as u64),
            count,
        });
        certificates.extend(points);
    }
    Ok(FermatCount {
        count: strata.iter().map(|s| s.count).sum(),
        strata,
        certificates,
    })
}

/// The certified points, sorted by stratum then coordinates.
pub fn list_fixed_points(sys: &FermatSystem) -> Result<Vec<FixedPoint>> {
    Ok(count_fixed_points(sys)?.certificates)
}

fn solve_stratum(
    r: &Restricted,
    field: &CyclotomicField,
    n: usize,
) -> Result<(usize, Vec<FixedPoint>, Option<usize>)> {
    let m = r.m();
    if r.eqs.len() + 1 < m {
        return Err(FermatError::NotZeroDimensional {
            stratum: r.support.to_vec(),
        });
    }
    let (symbolic, numeric) = match m {
        1 => (usize::from(r.eqs.is_empty()), vec![vec![Complex64::new(1.0, 0.0)]]),
        2 => symbolic_line(r)?,
        3 => symbolic_plane(r)?,
        _ => return Err(r.unsupported("strata of dimension above 2")),
    };
    let enumerable = m == 1
        || (r.all_unit()
            && match m {
                2 => r.eqs.iter().all(|(_, d, _)| 12 % d == 0),
                3 => {
                    let mut ds: Vec<u32> = r.eqs.iter().map(|(_, d, _)| *d).collect();
                    ds.sort_unstable();
                    ds == [2, 4]
                }
                _ => false,
            });
    let mut points = Vec::new();
    let enumerated = if enumerable {
        let found = enumerate(r, field);
        if found.len() != symbolic {
            return Err(FermatError::PathsDisagree {
                stratum: r.support.to_vec(),
                symbolic,
                enumerated: found.len(),
            });
        }
        for local in found {
            let certificate = exact_certificate(r, field, &local)
                .ok_or_else(|| r.degenerate("Jacobian minors all vanish"))?;
            let mut full = vec![field.zero(); n];
            for (k, &j) in r.support.iter().enumerate() {
                full[j] = local[k].clone();
            }
            points.push(FixedPoint {
                stratum: 0,
                coords: full.iter().map(|c| field.render(c)).collect(),
                exact: true,
                residual: 0.0,
                certificate,
                numeric_coords: full.iter().map(|c| field.to_complex(c)).collect(),
                exact_coords: Some(full),
            });
        }
        points.sort_by(|a, b| a.exact_coords.cmp(&b.exact_coords));
        Some(points.len())
    } else {
        let mut kept: Vec<Vec<Complex64>> = Vec::new();
        for p in numeric {
            let p = normalise(&p);
            if kept.iter().any(|q| distance(q, &p) < DEDUP_TOL) {
                continue;
            }
            let residual = residual(r, &p);
            if residual >= RESIDUAL_TOL {
                return Err(FermatError::Numeric {
                    stratum: r.support.to_vec(),
                    reason: format!("residual {residual:e}"),
                });
            }
            let certificate = numeric_certificate(r, &p)
                .ok_or_else(|| r.degenerate("no Jacobian minor above tolerance"))?;
            let mut full = vec![Complex64::new(0.0, 0.0); n];
            for (k, &j) in r.support.iter().enumerate() {
                full[j] = p[k];
            }
            kept.push(p);
            points.push(FixedPoint {
                stratum: 0,
                coords: full.iter().map(render_complex).collect(),
                exact: false,
                residual,
                certificate,
                exact_coords: None,
                numeric_coords: full,
            });
        }
        if points.len() != symbolic {
            return Err(FermatError::Numeric {
                stratum: r.support.to_vec(),
                reason: format!("found {} distinct points, expected {symbolic}", points.len()),
            });
        }
        points.sort_by(|a, b| cmp_complex_vec(&a.numeric_coords, &b.numeric_coords));
        None
    };
    Ok((symbolic, points, enumerated))
}

fn render_complex(z: &Complex64) -> String {
    let clean = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{re:.12}")
    } else {
        format!("{re:.12}{im:+.12}i")
    }
}

fn cmp_complex_vec(a: &[Complex64], b: &[Complex64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// Divides by the coordinate of largest modulus (first one on ties).
fn normalise(p: &[Complex64]) -> Vec<Complex64> {
    let mut best = 0;
    for (i, z) in p.iter().enumerate() {
        if z.norm() > p[best].norm() * (1.0 + 1e-9) {
            best = i;
        }
    }
    let s = p[best];
    p.iter().map(|z| z / s).collect()
}

/// Distance between normalised representatives.
fn distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let na = normalise(a);
    // compare in the chart of a's pivot
    let pivot = na
        .iter()
        .position(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-12)
        .unwrap_or(0);
    if b[pivot].norm() < 1e-12 {
        return f64::INFINITY;
    }
    let nb: Vec<Complex64> = b.iter().map(|z| z / b[pivot]).collect();
    na.iter().zip(&nb).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn residual(r: &Restricted, p: &[Complex64]) -> f64 {
    r.eqs
        .iter()
        .map(|(_, d, c)| {
            c.iter()
                .zip(p)
                .map(|(ci, x)| x.powu(*d) * rational::to_f64(ci))
                .sum::<Complex64>()
                .norm()
        })
        .fold(0.0, f64::max)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Some `(m-1)×(m-1)` minor of `∂f_e/∂x_i = d·c_i·x_i^{d-1}` is nonzero.
fn exact_certificate(r: &Restricted, k: &CyclotomicField, p: &[Cyc]) -> Option<JacobianCertificate> {
    let size = r.m() - 1;
    let entry = |e: &(usize, u32, Vec<Q>), i: usize| {
        let (_, d, c) = e;
        k.scale(&(qi((*d).into()) * &c[i]), &k.pow(&p[i], d - 1))
    };
    for rows in subsets(r.eqs.len(), size) {
        for cols in subsets(r.m(), size) {
            let mat: Vec<Vec<Cyc>> = rows
                .iter()
                .map(|&e| cols.iter().map(|&i| entry(&r.eqs[e], i)).collect())
                .collect();
            let det = k.det(&mat);
            if !det.is_zero() {
                return Some(JacobianCertificate {
                    rows: rows.iter().map(|&e| r.eqs[e].0).collect(),
                    cols: cols.iter().map(|&i| r.support[i]).collect(),
                    mode: "exact",
                    minor: k.render(&det),
                    margin: 1.0,
                });
            }
        }
    }
    None
}

fn complex_det(m: &[Vec<Complex64>]) -> Complex64 {
    match m.len() {
        0 => Complex64::new(1.0, 0.0),
        1 => m[0][0],
        n => (0..n)
            .map(|col| {
                let minor: Vec<Vec<Complex64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != col)
                            .map(|(_, x)| *x)
                            .collect()
                    })
                    .collect();
                let s = if col % 2 == 0 { 1.0 } else { -1.0 };
                m[0][col] * complex_det(&minor) * s
            })
            .sum(),
    }
}

/// Best numeric minor; accepted when it clears [`MINOR_TOL`] of the
/// Hadamard bound, far above the rounding error of a small determinant.
fn numeric_certificate(r: &Restricted, p: &[Complex64]) -> Option<JacobianCertificate> {
    let size = r.m() - 1;
    let mut best: Option<JacobianCertificate> = None;
    for rows in subsets(r.eqs.len(), size) {
        for cols in subsets(r.m(), size) {
            let mat: Vec<Vec<Complex64>> = rows
                .iter()
                .map(|&e| {
                    let (_, d, c) = &r.eqs[e];
                    cols.iter()
                        .map(|&i| p[i].powu(d - 1) * (f64::from(*d) * rational::to_f64(&c[i])))
                        .collect()
                })
                .collect();
            let bound: f64 = mat
                .iter()
                .map(|row| row.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
                .product();
            let det = complex_det(&mat);
            let margin = if bound > 0.0 { det.norm() / bound } else { 0.0 };
            if best.as_ref().is_none_or(|b| margin > b.margin) {
                best = Some(JacobianCertificate {
                    rows: rows.iter().map(|&e| r.eqs[e].0).collect(),
                    cols: cols.iter().map(|&i| r.support[i]).collect(),
                    mode: "numeric",
                    minor: format!("{:e}", det.norm()),
                    margin,
                });
            }
        }
    }
    best.filter(|b| b.margin > MINOR_TOL || size == 0)
}

/// All normalised points with coordinates in `{0} ∪ μ₂₄` solving the
/// restricted system, exactly.
fn enumerate(r: &Restricted, k: &CyclotomicField) -> Vec<Vec<Cyc>> {
    let order = ENUMERATION_ORDER as usize;
    let powers: Vec<Cyc> = (0..order).map(|e| k.zeta_pow(e as i64)).collect();
    let m = r.m();
    let mut out = Vec::new();
    // coordinate i: None for 0, Some(e) for ζ^e; the first nonzero is 1
    for lead in 0..m {
        let free = m - lead - 1;
        let total = (order + 1).pow(free as u32);
        for code in 0..total {
            let mut exps: Vec<Option<usize>> = vec![None; m];
            exps[lead] = Some(0);
            let mut c = code;
            for e in exps.iter_mut().skip(lead + 1) {
                let digit = c % (order + 1);
                c /= order + 1;
                *e = (digit < order).then_some(digit);
            }
            let solves = r.eqs.iter().all(|(_, d, coeffs)| {
                let mut acc = k.zero();
                for (i, e) in exps.iter().enumerate() {
                    if let Some(e) = e {
                        if !coeffs[i].is_zero() {
                            let z = &powers[(e * *d as usize) % order];
                            acc = k.add(&acc, &k.scale(&coeffs[i], z));
                        }
                    }
                }
                acc.is_zero()
            });
            if solves {
                out.push(
                    exps.iter()
                        .map(|e| e.map_or_else(|| k.zero(), |e| powers[e].clone()))
                        .collect(),
                );
            }
        }
    }
    out
}

// --- symbolic path -------------------------------------------------------

type QPoly = Vec<Q>;

fn trim(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_rem(a: &QPoly, b: &QPoly) -> QPoly {
    let mut a = trim(a.clone());
    let b = trim(b.clone());
    let lead = b.last().expect("nonzero divisor").clone();
    while a.len() >= b.len() {
        let c = a.last().expect("nonempty") / &lead;
        let shift = a.len() - b.len();
        for (i, bi) in b.iter().enumerate() {
            a[shift + i] -= &c * bi;
        }
        a = trim(a);
    }
    a
}

fn poly_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn derivative(p: &QPoly) -> QPoly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * qi(i as i64))
        .collect()
}

/// `P¹` stratum with coordinates `(a, b)`: points with `b ≠ 0` are roots
/// of the gcd of `c_a t^d + c_b` over all equations, and `(1:0)` lies on
/// every equation with `c_a = 0`.
fn symbolic_line(r: &Restricted) -> Result<(usize, Vec<Vec<Complex64>>)> {
    let mut g: QPoly = Vec::new();
    for (_, d, c) in &r.eqs {
        let mut p = vec![Q::zero(); *d as usize + 1];
        p[0] = c[1].clone();
        p[*d as usize] += &c[0];
        g = poly_gcd(&g, &p);
    }
    let deg = g.len().saturating_sub(1);
    if deg > 0 && poly_gcd(&g, &derivative(&g)).len() > 1 {
        return Err(r.degenerate("repeated root"));
    }
    let infinity = r.eqs.iter().all(|(_, _, c)| c[0].is_zero());
    if infinity && r.eqs.iter().all(|(_, d, _)| *d > 1) {
        return Err(r.degenerate("coordinate point with multiplicity"));
    }
    let mut pts = Vec::new();
    if deg > 0 {
        let (rat, cx) = weighted::univariate_roots(&g);
        for t in rat {
            pts.push(vec![Complex64::new(rational::to_f64(&t), 0.0), Complex64::new(1.0, 0.0)]);
        }
        for t in cx {
            pts.push(vec![t, Complex64::new(1.0, 0.0)]);
        }
    }
    if infinity {
        pts.push(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    }
    Ok((deg + usize::from(infinity), pts))
}

/// `P²` stratum with equations of degrees `d` and `2d`: in `A_i = x_i^d`
/// they become a line and a conic. Eliminating a pivot from the line
/// leaves a binary quadratic form whose two distinct roots each lift to
/// `d^{#nonzero - 1}` points.
fn symbolic_plane(r: &Restricted) -> Result<(usize, Vec<Vec<Complex64>>)> {
    if r.eqs.len() != 2 {
        return Err(r.unsupported("plane strata need exactly two equations"));
    }
    let (lin, quad) = {
        let (a, b) = (&r.eqs[0], &r.eqs[1]);
        if b.1 == 2 * a.1 {
            (a, b)
        } else if a.1 == 2 * b.1 {
            (b, a)
        } else {
            return Err(r.unsupported(format!("degrees ({}, {})", a.1, b.1)));
        }
    };
    let d = lin.1;
    let c = &lin.2;
    let e = &quad.2;
    let j = (0..3).find(|&i| !c[i].is_zero()).expect("nonzero equation");
    let others: Vec<usize> = (0..3).filter(|&i| i != j).collect();
    let (p, q) = (others[0], others[1]);
    let cj2 = &c[j] * &c[j];
    let alpha = &e[p] + &e[j] * &c[p] * &c[p] / &cj2;
    let beta = qi(2) * &e[j] * &c[p] * &c[q] / &cj2;
    let gamma = &e[q] + &e[j] * &c[q] * &c[q] / &cj2;
    if alpha.is_zero() && beta.is_zero() && gamma.is_zero() {
        return Err(FermatError::NotZeroDimensional {
            stratum: r.support.to_vec(),
        });
    }
    let disc = &beta * &beta - qi(4) * &alpha * &gamma;
    if disc.is_zero() {
        return Err(r.degenerate("double root of the reduced quadratic"));
    }
    let form = |ap: &Q, aq: &Q| &alpha * ap * ap + &beta * ap * aq + &gamma * aq * aq;
    // zero coordinates: A_q = 0 is a root iff α = 0, A_p = 0 iff γ = 0,
    // A_j = 0 iff (A_p : A_q) = (-c_q : c_p) is a root
    let zero_q = alpha.is_zero();
    let zero_p = gamma.is_zero();
    let zero_j = (!c[p].is_zero() || !c[q].is_zero()) && form(&-c[q].clone(), &c[p]).is_zero()
        || (c[p].is_zero() && c[q].is_zero());
    if d > 1 && (zero_q || zero_p || zero_j) {
        return Err(r.degenerate("solution on a coordinate line"));
    }
    let to_c = |x: &Q| Complex64::new(rational::to_f64(x), 0.0);
    let roots: Vec<(Complex64, Complex64)> = if alpha.is_zero() {
        vec![
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            (to_c(&(-&gamma / &beta)), Complex64::new(1.0, 0.0)),
        ]
    } else {
        let sq = to_c(&disc).sqrt();
        [1.0, -1.0]
            .iter()
            .map(|s| ((-to_c(&beta) + sq * s) / (to_c(&alpha) * 2.0), Complex64::new(1.0, 0.0)))
            .collect()
    };
    let mut count = 0;
    let mut pts = Vec::new();
    for (ap, aq) in roots {
        let aj = -(ap * to_c(&c[p]) + aq * to_c(&c[q])) / to_c(&c[j]);
        let mut a = [Complex64::new(0.0, 0.0); 3];
        a[p] = ap;
        a[q] = aq;
        a[j] = aj;
        let nonzero: Vec<usize> = (0..3).filter(|&i| a[i].norm() > 1e-12).collect();
        count += (d as usize).pow(nonzero.len() as u32 - 1);
        if d == 1 {
            pts.push(a.to_vec());
            continue;
        }
        // x_lead = 1, x_i = (A_i/A_lead)^{1/d}·ζ_d^k
        let lead = nonzero[0];
        let rest: Vec<usize> = nonzero[1..].to_vec();
        let combos = (d as usize).pow(rest.len() as u32);
        for code in 0..combos {
            let mut x = vec![Complex64::new(0.0, 0.0); 3];
            x[lead] = Complex64::new(1.0, 0.0);
            let mut cc = code;
            for &i in &rest {
                let k = cc % d as usize;
                cc /= d as usize;
                let root = (a[i] / a[lead]).powf(1.0 / f64::from(d));
                let unit = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / f64::from(d));
                x[i] = root * unit;
            }
            pts.push(x);
        }
    }
    Ok((count, pts))
}

/// `p ~ q` in `Pⁿ(ℚ(ζ))`: all `2×2` minors of `[p; q]` vanish.
pub fn projectively_equal_exact(k: &CyclotomicField, p: &[Cyc], q: &[Cyc]) -> bool {
    if p.iter().all(Cyc::is_zero) || q.iter().all(Cyc::is_zero) {
        return false;
    }
    (0..p.len()).all(|i| {
        (i + 1..p.len()).all(|j| k.sub(&k.mul(&p[i], &q[j]), &k.mul(&p[j], &q[i])).is_zero())
    })
}

/// Exact value of every equation at an exact point.
pub fn evaluate_exact(sys: &FermatSystem, k: &CyclotomicField, p: &[Cyc]) -> Vec<Cyc> {
    sys.equations
        .iter()
        .map(|e| {
            e.coeffs.iter().zip(p).fold(k.zero(), |acc, (c, x)| {
                k.add(&acc, &k.scale(c, &k.pow(x, e.degree)))
            })
        })
        .collect()
}
