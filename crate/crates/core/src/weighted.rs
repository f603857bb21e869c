//! Weighted projective spaces and diagonal sign involutions.
//!
//! A point of `P(w₀,…,w_n)` is fixed by `x_i ↦ σ_i x_i` (`σ_i = ±1`) when
//! some `λ ∈ ℂ*` has `λ^{w_i} x_i = σ_i x_i` for every `i`. On the
//! coordinates where the point is nonzero this forces `λ^{w_i} = ±1`, so
//! `λ^{2w_i} = 1` and `λ` is a root of unity of order dividing
//! `2·lcm(w)`. Enumerating those finitely many witnesses therefore finds
//! every fixed point: each witness `λ` fixes the coordinate subspace on
//! `{i : λ^{w_i} = σ_i}`, and the fixed locus is the union of these
//! subspaces. The maximal ones are the strata reported here.
//!
//! Maximal strata may still meet along a smaller coordinate subspace (in
//! `P(1,1,1,2,5)` with `t ↦ -t`, the strata `{t = 0}` and `{x = y = z = 0}`
//! share `(0,0,0,1,0)`); those intersections are reported as junctions.

use crate::poly::{Monomial, Polynomial};
use crate::rational::{self, qi, Q};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub const OPERATIONS: &[&str] = &[
    "fixed_locus",
    "singularity_type",
    "hypersurface_fixed_locus",
    "verify_quotient_projection",
];

/// Residual bound for numerically located points (max-norm 1).
pub const NUMERIC_RESIDUAL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightedError {
    #[error("weights must be positive and match the coordinate names")]
    BadWeights,
    #[error("weights {0:?} are not well-formed")]
    NotWellFormed(Vec<u32>),
    #[error("sign list has length {got}, expected {expected}")]
    SignLength { got: usize, expected: usize },
    #[error("bad sign {0:?}, expected + or -")]
    BadSign(String),
    #[error("not a coordinate point: {0}")]
    NotCoordinatePoint(String),
    #[error("zero polynomial does not define a hypersurface")]
    ZeroPolynomial,
    #[error("monomial {monomial} has weighted degree {got}, expected {expected}")]
    NotQuasiHomogeneous {
        monomial: String,
        got: u64,
        expected: u64,
    },
    #[error("monomial {0} is not semi-invariant under the involution")]
    NotSemiInvariant(String),
    #[error("not of the form α·t² = f(other coordinates): {0}")]
    NotDoubleCoverForm(String),
    #[error(transparent)]
    Poly(#[from] crate::poly::PolyError),
}

type Result<T> = std::result::Result<T, WeightedError>;

fn gcd_all(xs: impl IntoIterator<Item = u32>) -> u32 {
    xs.into_iter().fold(0, |a, b| a.gcd(&b))
}

fn lcm_all(xs: impl IntoIterator<Item = u32>) -> u64 {
    xs.into_iter().fold(1u64, |a, b| a.lcm(&u64::from(b)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightedSpace {
    pub weights: Vec<u32>,
    pub coordinate_names: Vec<String>,
}

impl WeightedSpace {
    pub fn new(weights: Vec<u32>, coordinate_names: Vec<String>) -> Result<Self> {
        if weights.is_empty() || weights.contains(&0) || weights.len() != coordinate_names.len() {
            return Err(WeightedError::BadWeights);
        }
        Ok(Self {
            weights,
            coordinate_names,
        })
    }

    /// Names `x0, x1, …`, or `x, y, z, w, t` for five coordinates and
    /// `x, y, z, w` for four.
    pub fn with_default_names(weights: Vec<u32>) -> Result<Self> {
        let names: Vec<String> = match weights.len() {
            4 => ["x", "y", "z", "w"].map(String::from).to_vec(),
            5 => ["x", "y", "z", "w", "t"].map(String::from).to_vec(),
            n => (0..n).map(|i| format!("x{i}")).collect(),
        };
        Self::new(weights, names)
    }

    pub fn projective(n: usize) -> Self {
        Self::with_default_names(vec![1; n + 1]).expect("positive weights")
    }

    pub fn dim(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Every `n`-element subset of the `n+1` weights has gcd 1.
    pub fn is_well_formed(&self) -> bool {
        (0..self.len()).all(|skip| {
            gcd_all(
                self.weights
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, &w)| w),
            ) == 1
        }) || self.len() == 1
    }

    fn require_well_formed(&self) -> Result<()> {
        if self.is_well_formed() {
            Ok(())
        } else {
            Err(WeightedError::NotWellFormed(self.weights.clone()))
        }
    }

    /// Same space with coordinate `i` removed.
    pub fn drop_coordinate(&self, i: usize) -> Result<Self> {
        let mut w = self.weights.clone();
        let mut n = self.coordinate_names.clone();
        w.remove(i);
        n.remove(i);
        Self::new(w, n)
    }
}

impl fmt::Display for WeightedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.weights.iter().map(u32::to_string).collect();
        write!(f, "P({})", w.join(","))
    }
}

/// `x_i ↦ signs[i]·x_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvolutionSpec {
    pub signs: Vec<i8>,
}

impl InvolutionSpec {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if let Some(bad) = signs.iter().find(|s| s.abs() != 1) {
            return Err(WeightedError::BadSign(bad.to_string()));
        }
        Ok(Self { signs })
    }

    /// Parses `+,+,-` (also accepts `1`, `-1`).
    pub fn parse(text: &str) -> Result<Self> {
        let signs = text
            .split(',')
            .map(|s| match s.trim() {
                "+" | "+1" | "1" => Ok(1),
                "-" | "-1" => Ok(-1),
                other => Err(WeightedError::BadSign(other.to_string())),
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::new(signs)
    }

    pub fn is_identity(&self) -> bool {
        self.signs.iter().all(|&s| s == 1)
    }

    pub fn negated(&self) -> Vec<usize> {
        (0..self.signs.len()).filter(|&i| self.signs[i] == -1).collect()
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.signs.len() != n {
            return Err(WeightedError::SignLength {
                got: self.signs.len(),
                expected: n,
            });
        }
        Ok(())
    }

    pub fn apply(&self, p: &WeightedPoint) -> WeightedPoint {
        WeightedPoint(
            p.0.iter()
                .zip(&self.signs)
                .map(|(x, &s)| if s == 1 { x.clone() } else { -x })
                .collect(),
        )
    }

    /// `∏ σ_i^{a_i}` for a monomial.
    pub fn character(&self, m: &[u32]) -> i8 {
        if m.iter()
            .zip(&self.signs)
            .filter(|(&a, &s)| s == -1 && a % 2 == 1)
            .count()
            .is_even() { 1 } else { -1 }
    }
}

impl fmt::Display for InvolutionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<&str> = self
            .signs
            .iter()
            .map(|&s| if s == 1 { "+" } else { "-" })
            .collect();
        write!(f, "{}", s.join(","))
    }
}

/// `exp(2πi·num/den)` in lowest terms, `0 ≤ num < den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RootOfUnity {
    pub num: u64,
    pub den: u64,
}

impl RootOfUnity {
    pub fn new(num: u64, den: u64) -> Self {
        let num = num % den;
        let g = num.gcd(&den);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    /// Whether `self^w = sign`.
    pub fn pow_equals_sign(&self, w: u32, sign: i8) -> bool {
        let r = (self.num * u64::from(w)) % self.den;
        if sign == 1 {
            r == 0
        } else {
            2 * r == self.den
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::TAU * self.num as f64 / self.den as f64)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (0, _) => write!(f, "1"),
            (1, 2) => write!(f, "-1"),
            (n, d) => write!(f, "exp(2πi·{n}/{d})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StratumKind {
    IsolatedPointCandidate,
    Surface,
    Other,
}

impl StratumKind {
    fn from_dimension(d: i64) -> Self {
        match d {
            i64::MIN..=0 => StratumKind::IsolatedPointCandidate,
            2 => StratumKind::Surface,
            _ => StratumKind::Other,
        }
    }
}

/// Coordinate subspace on which the involution acts as scaling by a
/// witness `λ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedStratum {
    pub support: Vec<usize>,
    pub lambda: RootOfUnity,
    /// Dimension of the subspace `P(w_i : i ∈ support)`.
    pub dimension: i64,
    /// Kind on a general hypersurface through nothing in particular
    /// (one less dimension).
    pub kind: StratumKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedLocus {
    pub strata: Vec<FixedStratum>,
    /// Nonempty pairwise intersections of strata supports.
    pub junctions: Vec<Vec<usize>>,
    pub fixes_everything: bool,
}

impl FixedLocus {
    /// Indices of strata containing `p`.
    pub fn strata_containing(&self, p: &WeightedPoint) -> Vec<usize> {
        let supp = p.support();
        self.strata
            .iter()
            .enumerate()
            .filter(|(_, s)| supp.iter().all(|i| s.support.contains(i)))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Fixed locus of `inv` on `space`.
pub fn fixed_locus(space: &WeightedSpace, inv: &InvolutionSpec) -> Result<FixedLocus> {
    space.require_well_formed()?;
    inv.check_len(space.len())?;
    let order = 2 * lcm_all(space.weights.iter().copied());
    let mut by_support: BTreeMap<Vec<usize>, RootOfUnity> = BTreeMap::new();
    for k in 0..order {
        let lambda = RootOfUnity::new(k, order);
        let support: Vec<usize> = (0..space.len())
            .filter(|&i| lambda.pow_equals_sign(space.weights[i], inv.signs[i]))
            .collect();
        if support.is_empty() {
            continue;
        }
        by_support
            .entry(support)
            .and_modify(|w| *w = (*w).min(lambda))
            .or_insert(lambda);
    }
    let supports: Vec<&Vec<usize>> = by_support.keys().collect();
    let is_subset = |a: &Vec<usize>, b: &Vec<usize>| a.iter().all(|i| b.contains(i));
    let mut strata: Vec<FixedStratum> = by_support
        .iter()
        .filter(|(s, _)| {
            !supports
                .iter()
                .any(|t| *t != *s && is_subset(s, t))
        })
        .map(|(support, &lambda)| {
            let dimension = support.len() as i64 - 1;
            FixedStratum {
                support: support.clone(),
                lambda,
                dimension,
                kind: StratumKind::from_dimension(dimension - 1),
            }
        })
        .collect();
    strata.sort_by(|a, b| a.support.cmp(&b.support).then(a.lambda.cmp(&b.lambda)));
    let mut junctions = BTreeSet::new();
    for (i, a) in strata.iter().enumerate() {
        for b in &strata[i + 1..] {
            let common: Vec<usize> = a
                .support
                .iter()
                .copied()
                .filter(|x| b.support.contains(x))
                .collect();
            if !common.is_empty() {
                junctions.insert(common);
            }
        }
    }
    let fixes_everything = strata.iter().any(|s| s.support.len() == space.len());
    Ok(FixedLocus {
        strata,
        junctions: junctions.into_iter().collect(),
        fixes_everything,
    })
}

/// Cyclic quotient singularity `(1/m)(a₁,…,a_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SingularityType {
    Smooth,
    Cyclic { order: u32, weights: Vec<u32> },
}

impl SingularityType {
    pub fn is_half_111(&self) -> bool {
        matches!(self, SingularityType::Cyclic { order: 2, weights } if weights == &[1, 1, 1])
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularityType::Smooth => write!(f, "smooth"),
            SingularityType::Cyclic { order, weights } => {
                let w: Vec<String> = weights.iter().map(u32::to_string).collect();
                write!(f, "1/{order}({})", w.join(","))
            }
        }
    }
}

/// Type of the singularity at the coordinate point `e_i`: the local chart
/// is `ℂⁿ/μ_{w_i}` acting with the other weights mod `w_i`.
pub fn singularity_type(space: &WeightedSpace, coordinate_point: usize) -> Result<SingularityType> {
    if coordinate_point >= space.len() {
        return Err(WeightedError::NotCoordinatePoint(format!(
            "index {coordinate_point} out of range"
        )));
    }
    let m = space.weights[coordinate_point];
    if m == 1 {
        return Ok(SingularityType::Smooth);
    }
    let weights: Vec<u32> = space
        .weights
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != coordinate_point)
        .map(|(_, &w)| w % m)
        .collect();
    // Without quasi-reflections (well-formed spaces) a trivial action can
    // only come from a non-well-formed input.
    if weights.iter().all(|&a| a == 0) {
        return Ok(SingularityType::Smooth);
    }
    Ok(SingularityType::Cyclic { order: m, weights })
}

/// Singularity type of the ambient space at any point.
///
/// The stabiliser of `p` is `μ_g` with `g = gcd(w_i : p_i ≠ 0)`; it acts on
/// the normal directions `x_j` (`p_j = 0`) with weights `w_j mod g` and
/// trivially along the orbit. Coordinate points reduce to
/// [`singularity_type`].
pub fn singularity_at(space: &WeightedSpace, p: &WeightedPoint) -> Result<SingularityType> {
    let supp = p.support();
    match supp.as_slice() {
        [] => Err(WeightedError::NotCoordinatePoint(p.to_string())),
        [i] => singularity_type(space, *i),
        _ => {
            let g = gcd_all(supp.iter().map(|&i| space.weights[i]));
            let weights: Vec<u32> = (0..space.len())
                .filter(|j| !supp.contains(j))
                .map(|j| space.weights[j] % g)
                .chain(std::iter::repeat_n(0, supp.len() - 1))
                .collect();
            if g == 1 || weights.iter().all(|&a| a == 0) {
                Ok(SingularityType::Smooth)
            } else {
                Ok(SingularityType::Cyclic { order: g, weights })
            }
        }
    }
}

/// Point of a weighted projective space with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPoint(pub Vec<Q>);

impl WeightedPoint {
    pub fn from_ints(xs: &[i64]) -> Self {
        Self(xs.iter().map(|&x| qi(x)).collect())
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| !self.0[i].is_zero()).collect()
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Whether `μ^{w_i}·self_i = other_i` for some `μ ∈ ℂ*`.
    ///
    /// With `g = gcd(w_i : i ∈ support)` and Bézout coefficients
    /// `Σ c_i w_i = g`, any such `μ` has `μ^g = ∏ (other_i/self_i)^{c_i}`,
    /// and then the condition is exactly `(μ^g)^{w_i/g} = other_i/self_i`.
    pub fn projectively_equal(&self, other: &Self, weights: &[u32]) -> bool {
        if self.0.len() != other.0.len() || self.is_origin() || other.is_origin() {
            return false;
        }
        let supp = self.support();
        if supp != other.support() {
            return false;
        }
        let ratios: Vec<Q> = supp.iter().map(|&i| &other.0[i] / &self.0[i]).collect();
        let ws: Vec<i64> = supp.iter().map(|&i| i64::from(weights[i])).collect();
        let mut g = 0i64;
        let mut coeffs: Vec<i64> = Vec::with_capacity(ws.len());
        for &w in &ws {
            let e = g.extended_gcd(&w);
            for c in coeffs.iter_mut() {
                *c *= e.x;
            }
            coeffs.push(e.y);
            g = e.gcd;
        }
        let nu = ratios
            .iter()
            .zip(&coeffs)
            .fold(Q::one(), |acc, (r, &c)| acc * rational::pow(r, c));
        ratios
            .iter()
            .zip(&ws)
            .all(|(r, &w)| rational::pow(&nu, w / g) == *r)
    }
}

impl fmt::Display for WeightedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.0.iter().map(rational::render).collect();
        write!(f, "({})", c.join(","))
    }
}

/// Coordinates of a located fixed point.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum PointCoords {
    Exact {
        #[serde(serialize_with = "ser_q_vec")]
        coords: Vec<Q>,
    },
    Numeric {
        re: Vec<f64>,
        im: Vec<f64>,
        residual: f64,
    },
}

fn ser_q_vec<S: serde::Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&rational::render(x))?;
    }
    seq.end()
}

impl PointCoords {
    pub fn exact(&self) -> Option<WeightedPoint> {
        match self {
            PointCoords::Exact { coords } => Some(WeightedPoint(coords.clone())),
            PointCoords::Numeric { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentKind {
    Empty,
    IsolatedPoints,
    Curve,
    Surface,
    Other,
}

/// A fixed stratum cut with the hypersurface.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StratumOnHypersurface {
    pub stratum: FixedStratum,
    /// The equation restricted to the stratum.
    pub restricted: String,
    /// Whether the whole stratum lies on the hypersurface.
    pub contained: bool,
    /// `None` when the intersection is empty.
    pub dimension: Option<i64>,
    pub kind: ComponentKind,
    pub points: Vec<PointCoords>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypersurfaceFixedLocus {
    pub strata: Vec<StratumOnHypersurface>,
    pub surfaces: usize,
    pub isolated_points: Vec<PointCoords>,
    pub fixes_everything: bool,
}

/// Checks degree and semi-invariance of `poly`.
pub fn check_hypersurface(
    space: &WeightedSpace,
    inv: &InvolutionSpec,
    degree: u64,
    poly: &Polynomial,
) -> Result<i8> {
    if poly.is_zero() {
        return Err(WeightedError::ZeroPolynomial);
    }
    inv.check_len(space.len())?;
    for (m, _) in poly.terms() {
        let got = Polynomial::weighted_degree(m, &space.weights);
        if got != degree {
            return Err(WeightedError::NotQuasiHomogeneous {
                monomial: poly.monomial_string(m),
                got,
                expected: degree,
            });
        }
    }
    let chars: Vec<(i8, &Monomial)> = poly.terms().map(|(m, _)| (inv.character(m), m)).collect();
    let plus = chars.iter().filter(|(c, _)| *c == 1).count();
    let majority = if 2 * plus >= chars.len() { 1 } else { -1 };
    if let Some((_, m)) = chars.iter().find(|(c, _)| *c != majority) {
        return Err(WeightedError::NotSemiInvariant(poly.monomial_string(m)));
    }
    Ok(majority)
}

/// Fixed locus of `inv` on the hypersurface `{poly = 0}` of weighted
/// degree `degree`.
pub fn hypersurface_fixed_locus(
    space: &WeightedSpace,
    inv: &InvolutionSpec,
    degree: u64,
    poly: &Polynomial,
) -> Result<HypersurfaceFixedLocus> {
    check_hypersurface(space, inv, degree, poly)?;
    let locus = fixed_locus(space, inv)?;
    let n = space.len();
    let mut strata = Vec::new();
    for stratum in &locus.strata {
        let restricted = poly.restrict(&stratum.support);
        let ambient = stratum.dimension;
        let contained = restricted.is_zero();
        let mut points = Vec::new();
        let dimension = if contained {
            if ambient == 0 {
                points.push(PointCoords::Exact {
                    coords: coordinate_point(n, stratum.support[0]),
                });
            }
            Some(ambient)
        } else if ambient == 0 {
            None
        } else {
            if ambient == 1 {
                points = points_on_line(space, &restricted, stratum.support[0], stratum.support[1]);
            }
            Some(ambient - 1)
        };
        let kind = match dimension {
            None => ComponentKind::Empty,
            Some(0) if points.is_empty() => ComponentKind::Empty,
            Some(0) => ComponentKind::IsolatedPoints,
            Some(1) => ComponentKind::Curve,
            Some(2) => ComponentKind::Surface,
            Some(_) => ComponentKind::Other,
        };
        strata.push(StratumOnHypersurface {
            stratum: stratum.clone(),
            restricted: restricted.to_string(),
            contained,
            dimension: if kind == ComponentKind::Empty { None } else { dimension },
            kind,
            points,
        });
    }

    // A point found on one stratum is isolated only if no positive
    // dimensional component passes through it.
    let positive: Vec<&StratumOnHypersurface> = strata
        .iter()
        .filter(|s| s.dimension.is_some_and(|d| d > 0))
        .collect();
    let mut isolated: Vec<PointCoords> = Vec::new();
    for s in &strata {
        for p in &s.points {
            let supp: Vec<usize> = match p {
                PointCoords::Exact { coords } => (0..n).filter(|&i| !coords[i].is_zero()).collect(),
                PointCoords::Numeric { re, im, .. } => (0..n)
                    .filter(|&i| re[i].abs() > 1e-12 || im[i].abs() > 1e-12)
                    .collect(),
            };
            let embedded = positive
                .iter()
                .any(|c| supp.iter().all(|i| c.stratum.support.contains(i)));
            let duplicate = match p.exact() {
                Some(wp) => isolated
                    .iter()
                    .filter_map(PointCoords::exact)
                    .any(|q| q.projectively_equal(&wp, &space.weights)),
                None => false,
            };
            if !embedded && !duplicate {
                isolated.push(p.clone());
            }
        }
    }
    let surfaces = strata
        .iter()
        .filter(|s| s.kind == ComponentKind::Surface)
        .count();
    Ok(HypersurfaceFixedLocus {
        strata,
        surfaces,
        isolated_points: isolated,
        fixes_everything: locus.fixes_everything,
    })
}

fn coordinate_point(n: usize, i: usize) -> Vec<Q> {
    (0..n).map(|j| if j == i { Q::one() } else { Q::zero() }).collect()
}

/// Zeros of a weighted-homogeneous `f(x_a, x_b)` on the line
/// `P(w_a, w_b)`, all other coordinates zero.
///
/// With `g = gcd(w_a, w_b)`, points with `x_a x_b ≠ 0` correspond one to
/// one with `u = x_b^{w_a/g} / x_a^{w_b/g} ∈ ℂ*`, and on `x_a = 1` the
/// equation becomes `x_b^{j₀}·h(u)` for a univariate `h`.
fn points_on_line(space: &WeightedSpace, f: &Polynomial, a: usize, b: usize) -> Vec<PointCoords> {
    let n = space.len();
    let (wa, wb) = (space.weights[a], space.weights[b]);
    let mut out = Vec::new();
    let pure = |i: usize| f.terms().all(|(m, _)| m[i] > 0);
    // e_b lies on the curve iff every monomial involves x_a, and vice versa.
    if pure(a) {
        out.push(PointCoords::Exact {
            coords: coordinate_point(n, b),
        });
    }
    if pure(b) {
        out.push(PointCoords::Exact {
            coords: coordinate_point(n, a),
        });
    }
    let step = (wa / wa.gcd(&wb)) as usize;
    let jmin = f.terms().map(|(m, _)| m[b]).min().unwrap_or(0) as usize;
    let jmax = f.terms().map(|(m, _)| m[b]).max().unwrap_or(0) as usize;
    let mut h = vec![Q::zero(); (jmax - jmin) / step + 1];
    for (m, c) in f.terms() {
        let j = m[b] as usize - jmin;
        debug_assert_eq!(j % step, 0);
        h[j / step] += c;
    }
    let (rational_roots, complex_roots) = univariate_roots(&h);
    for u in rational_roots.into_iter().filter(|u| !u.is_zero()) {
        // x_a = 1, x_b = u^{1/step}; otherwise try x_b = 1 and solve for x_a.
        let exact = rational::exact_root(&u, step as u32)
            .map(|xb| (Q::one(), xb))
            .or_else(|| {
                let back = wb / wa.gcd(&wb);
                rational::exact_root(&u.recip(), back).map(|xa| (xa, Q::one()))
            });
        match exact {
            Some((xa, xb)) => {
                let mut c = vec![Q::zero(); n];
                c[a] = xa;
                c[b] = xb;
                out.push(PointCoords::Exact { coords: c });
            }
            None => out.push(numeric_point(
                f,
                n,
                a,
                b,
                Complex64::new(rational::to_f64(&u), 0.0),
                step,
            )),
        }
    }
    for u in complex_roots {
        if u.norm() > 1e-12 {
            out.push(numeric_point(f, n, a, b, u, step));
        }
    }
    out
}

fn numeric_point(
    f: &Polynomial,
    n: usize,
    a: usize,
    b: usize,
    u: Complex64,
    step: usize,
) -> PointCoords {
    let mut pt = vec![Complex64::new(0.0, 0.0); n];
    pt[a] = Complex64::new(1.0, 0.0);
    pt[b] = u.powf(1.0 / step as f64);
    let scale = pt.iter().map(|z| z.norm()).fold(0.0, f64::max);
    // max-norm 1 in the plain sense; the residual is relative to the
    // term magnitudes so weighted rescaling does not distort it
    let residual = f.eval_complex(&pt).norm() / f.eval_abs_complex(&pt).max(f64::MIN_POSITIVE);
    let _ = scale;
    PointCoords::Numeric {
        re: pt.iter().map(|z| z.re).collect(),
        im: pt.iter().map(|z| z.im).collect(),
        residual,
    }
}

/// Roots of `Σ c_i u^i`: exact rational ones (with multiplicity removed)
/// and numerical approximations of the rest.
pub fn univariate_roots(coeffs: &[Q]) -> (Vec<Q>, Vec<Complex64>) {
    let mut p: Vec<Q> = coeffs.to_vec();
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    if p.len() <= 1 {
        return (Vec::new(), Vec::new());
    }
    let mut rational_roots = Vec::new();
    if p[0].is_zero() {
        rational_roots.push(Q::zero());
        while p.first().is_some_and(Zero::is_zero) {
            p.remove(0);
        }
    }
    for r in rational_root_candidates(&p) {
        if eval_q(&p, &r).is_zero() {
            rational_roots.push(r.clone());
            while p.len() > 1 && eval_q(&p, &r).is_zero() {
                p = deflate(&p, &r);
            }
        }
    }
    let complex_roots = if p.len() > 1 {
        let cs: Vec<Complex64> = p
            .iter()
            .map(|c| Complex64::new(rational::to_f64(c), 0.0))
            .collect();
        durand_kerner(&cs)
    } else {
        Vec::new()
    };
    (rational_roots, complex_roots)
}

fn eval_q(p: &[Q], x: &Q) -> Q {
    p.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

/// Divides by `(u - r)`.
fn deflate(p: &[Q], r: &Q) -> Vec<Q> {
    let n = p.len() - 1;
    let mut q = vec![Q::zero(); n];
    let mut carry = Q::zero();
    for i in (0..n).rev() {
        carry = &p[i + 1] + &carry * r;
        q[i] = carry.clone();
    }
    q
}

fn small_divisors(x: &num_bigint::BigInt) -> Option<Vec<i64>> {
    let x = x.abs().to_i64()?;
    if x == 0 || x > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1i64;
    while d * d <= x {
        if x % d == 0 {
            out.push(d);
            out.push(x / d);
        }
        d += 1;
    }
    out.sort_unstable();
    out.dedup();
    Some(out)
}

fn rational_root_candidates(p: &[Q]) -> Vec<Q> {
    // clear denominators
    let lcm = p
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<num_bigint::BigInt> = p
        .iter()
        .map(|c| (c * Q::from_integer(lcm.clone())).to_integer())
        .collect();
    let (Some(ps), Some(qs)) = (
        small_divisors(&ints[0]),
        small_divisors(ints.last().expect("nonempty")),
    ) else {
        return Vec::new();
    };
    let mut out = BTreeSet::new();
    for &a in &ps {
        for &b in &qs {
            out.insert(Q::new(a.into(), b.into()));
            out.insert(Q::new((-a).into(), b.into()));
        }
    }
    out.into_iter().collect()
}

fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius.min(2.0)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// Whether `p` lies on `{poly = 0}`.
pub fn on_hypersurface(poly: &Polynomial, p: &WeightedPoint) -> bool {
    poly.eval(&p.0).is_zero()
}

/// Preimages of a target point under the projection forgetting the
/// covering coordinate `t` of `α t² = f`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreimageReport {
    #[serde(serialize_with = "ser_q_vec")]
    pub target: Vec<Q>,
    #[serde(with = "rational::as_string")]
    pub f_value: Q,
    pub count: usize,
    /// Exact preimages when `t` is rational, otherwise empty.
    pub preimages: Vec<PointCoords>,
}

/// Branch data of the projection, compared with the image of the fixed
/// locus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuotientProjectionReport {
    pub target: WeightedSpace,
    pub covering_coordinate: usize,
    /// `t² = f` with this `f`.
    pub branch_polynomial: String,
    pub invariant: bool,
    pub generic: PreimageReport,
    pub two_generic_preimages: bool,
    /// Target points whose stabiliser swaps `±t`.
    pub stabilizer_branch_points: Vec<BranchPoint>,
    pub fixed_surface_maps_to_branch_surface: bool,
    pub isolated_points_map_to_branch_points: bool,
    pub branch_locus_matches: bool,
    pub all_passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchPoint {
    #[serde(serialize_with = "ser_q_vec")]
    pub coords: Vec<Q>,
    pub singularity: String,
}

/// Double-cover form `α·t² + h = 0` of a hypersurface, `t` the unique
/// negated coordinate.
struct DoubleCoverForm {
    t: usize,
    target: WeightedSpace,
    /// `f` on the target coordinates with `t² = f`.
    f: Polynomial,
}

fn double_cover_form(
    space: &WeightedSpace,
    inv: &InvolutionSpec,
    poly: &Polynomial,
) -> Result<DoubleCoverForm> {
    let neg = inv.negated();
    let [t] = neg.as_slice() else {
        return Err(WeightedError::NotDoubleCoverForm(format!(
            "{} coordinates are negated, expected exactly one",
            neg.len()
        )));
    };
    let t = *t;
    let mut alpha = None;
    let target = space.drop_coordinate(t)?;
    let mut rest = Vec::new();
    for (m, c) in poly.terms() {
        match m[t] {
            0 => {
                let mut mm = m.clone();
                mm.remove(t);
                rest.push((mm, c.clone()));
            }
            2 if m.iter().enumerate().all(|(i, &a)| i == t || a == 0) => alpha = Some(c.clone()),
            _ => return Err(WeightedError::NotDoubleCoverForm(poly.monomial_string(m))),
        }
    }
    let alpha = alpha.ok_or_else(|| WeightedError::NotDoubleCoverForm("no t² term".into()))?;
    let f = Polynomial::from_terms(
        &target.coordinate_names,
        rest.into_iter().map(|(m, c)| (m, -c / &alpha)),
    );
    Ok(DoubleCoverForm { t, target, f })
}

fn preimages(form: &DoubleCoverForm, source_weights: &[u32], q: &[Q]) -> PreimageReport {
    let f_value = form.f.eval(q);
    let lift = |tv: Q| {
        let mut c = q.to_vec();
        c.insert(form.t, tv);
        c
    };
    if f_value.is_zero() {
        return PreimageReport {
            target: q.to_vec(),
            f_value,
            count: 1,
            preimages: vec![PointCoords::Exact { coords: lift(Q::zero()) }],
        };
    }
    // (q, t) ~ (q, -t) iff some μ with μ^{w_i} = 1 on supp(q) has
    // μ^{w_t} = -1; such μ are the g-th roots of unity, g = gcd over supp.
    let g = gcd_all(
        (0..q.len())
            .filter(|&i| !q[i].is_zero())
            .map(|i| form.target.weights[i]),
    );
    let wt = source_weights[form.t];
    let swapped = (0..u64::from(g)).any(|k| RootOfUnity::new(k, g.into()).pow_equals_sign(wt, -1));
    let count = if swapped { 1 } else { 2 };
    let preimages = match rational::exact_root(&f_value, 2) {
        Some(tv) if swapped => vec![PointCoords::Exact { coords: lift(tv) }],
        Some(tv) => vec![
            PointCoords::Exact { coords: lift(tv.clone()) },
            PointCoords::Exact { coords: lift(-tv) },
        ],
        None => Vec::new(),
    };
    PreimageReport {
        target: q.to_vec(),
        f_value,
        count,
        preimages,
    }
}

/// Number of preimages of `target` under `(…, t) ↦ (…)` restricted to the
/// hypersurface.
pub fn count_preimages(
    space: &WeightedSpace,
    inv: &InvolutionSpec,
    poly: &Polynomial,
    target: &[Q],
) -> Result<PreimageReport> {
    let form = double_cover_form(space, inv, poly)?;
    Ok(preimages(&form, &space.weights, target))
}

/// Small integer points with all coordinates nonzero, in a fixed order.
fn sample_points(n: usize, count: usize) -> Vec<Vec<Q>> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    let values = [1i64, 2, -1, 3, -2];
    while out.len() < count {
        out.push(idx.iter().map(|&i| qi(values[i])).collect());
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            idx[k] += 1;
            if idx[k] < values.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
    out
}

/// Checks that forgetting the negated coordinate is the quotient map of
/// the involution on `{poly = 0}`.
pub fn verify_quotient_projection(
    space: &WeightedSpace,
    inv: &InvolutionSpec,
    degree: u64,
    poly: &Polynomial,
) -> Result<QuotientProjectionReport> {
    check_hypersurface(space, inv, degree, poly)?;
    let form = double_cover_form(space, inv, poly)?;
    let t = form.t;

    // (a) every kept coordinate is fixed by the involution, the projection
    // is defined on X (X misses e_t), and it commutes on sample points.
    let base_free = !poly.eval(&coordinate_point(space.len(), t)).is_zero();
    let samples = sample_points(space.len(), 50);
    let commutes = samples.iter().all(|p| {
        let wp = WeightedPoint(p.clone());
        let img = inv.apply(&wp);
        let mut a = wp.0.clone();
        let mut b = img.0.clone();
        a.remove(t);
        b.remove(t);
        WeightedPoint(a).projectively_equal(&WeightedPoint(b), &form.target.weights)
    });
    let invariant = base_free && commutes;

    // (b) a generic target point.
    let generic_target = sample_points(form.target.len(), 500)
        .into_iter()
        .find(|q| !form.f.eval(q).is_zero())
        .expect("f is not identically zero on the sample grid");
    let generic = preimages(&form, &space.weights, &generic_target);
    let two_generic_preimages = generic.count == 2;

    // (c) branch locus: {f = 0} together with the coordinate points whose
    // stabiliser swaps ±t.
    let mut stabilizer_branch_points = Vec::new();
    for i in 0..form.target.len() {
        let q = coordinate_point(form.target.len(), i);
        if form.f.eval(&q).is_zero() {
            continue;
        }
        if preimages(&form, &space.weights, &q).count == 1 {
            stabilizer_branch_points.push(BranchPoint {
                coords: q,
                singularity: singularity_type(&form.target, i)?.to_string(),
            });
        }
    }
    let fixed = hypersurface_fixed_locus(space, inv, degree, poly)?;
    let fixed_surface_maps_to_branch_surface = fixed
        .strata
        .iter()
        .filter(|s| s.kind == ComponentKind::Surface)
        .all(|s| {
            s.stratum.support.len() == space.len() - 1
                && !s.stratum.support.contains(&t)
                && Polynomial::parse(&s.restricted, &space.coordinate_names)
                    .map(|r| {
                        let dropped = Polynomial::from_terms(
                            &form.target.coordinate_names,
                            r.terms().map(|(m, c)| {
                                let mut mm = m.clone();
                                mm.remove(t);
                                (mm, c.clone())
                            }),
                        );
                        same_zero_set(&dropped, &form.f)
                    })
                    .unwrap_or(false)
        })
        && fixed.surfaces > 0;
    let mut images: Vec<WeightedPoint> = Vec::new();
    let mut numeric_isolated = false;
    for p in &fixed.isolated_points {
        match p.exact() {
            Some(wp) => {
                let mut c = wp.0;
                c.remove(t);
                images.push(WeightedPoint(c));
            }
            None => numeric_isolated = true,
        }
    }
    let branch_pts: Vec<WeightedPoint> = stabilizer_branch_points
        .iter()
        .map(|b| WeightedPoint(b.coords.clone()))
        .collect();
    let covered = |xs: &[WeightedPoint], ys: &[WeightedPoint]| {
        xs.iter()
            .all(|x| ys.iter().any(|y| x.projectively_equal(y, &form.target.weights)))
    };
    let isolated_points_map_to_branch_points = !numeric_isolated
        && covered(&images, &branch_pts)
        && covered(&branch_pts, &images);
    let branch_locus_matches =
        fixed_surface_maps_to_branch_surface && isolated_points_map_to_branch_points;
    let all_passed = invariant && two_generic_preimages && branch_locus_matches;
    Ok(QuotientProjectionReport {
        target: form.target.clone(),
        covering_coordinate: t,
        branch_polynomial: form.f.to_string(),
        invariant,
        generic,
        two_generic_preimages,
        stabilizer_branch_points,
        fixed_surface_maps_to_branch_surface,
        isolated_points_map_to_branch_points,
        branch_locus_matches,
        all_passed,
    })
}

/// Proportional polynomials.
fn same_zero_set(a: &Polynomial, b: &Polynomial) -> bool {
    let Some((m, c)) = a.terms().next() else {
        return b.is_zero();
    };
    let other = b.coeff(m);
    if other.is_zero() || a.len() != b.len() {
        return false;
    }
    let ratio = other / c;
    a.terms().all(|(m, c)| b.coeff(m) == c * &ratio)
}

/// `X₁₀ ⊂ P(1,1,1,2,5)`: `x¹⁰ + y¹⁰ + z¹⁰ + w⁵ - t² = 0` with `t ↦ -t`.
pub fn degree_ten_example() -> (WeightedSpace, InvolutionSpec, u64, Polynomial) {
    let space = WeightedSpace::with_default_names(vec![1, 1, 1, 2, 5]).expect("positive weights");
    let inv = InvolutionSpec::new(vec![1, 1, 1, 1, -1]).expect("signs");
    let poly = Polynomial::parse("x^10+y^10+z^10+w^5-t^2", &space.coordinate_names)
        .expect("valid polynomial");
    (space, inv, 10, poly)
}
