//! Invariants of the Calabi–Yau double cover from data of the quotient.
//!
//! Inputs are the degree `d = |H'³|` of the class-group generator, the
//! involution index `s` (branch surface `S_Y ≡ s·H'`), the number `N` of
//! ½(1,1,1) points and optionally `e(Y)`. Outputs are `H³`, `H·c₂` and
//! `e(X)` of the cover.
//!
//! `H·c₂` rests on `c₂(X) = φ*c₂(Y) + R²` with `R = (s/2)H` the
//! ramification class. That identity is not proved here; it is accepted
//! because it reproduces every classified family exactly (see
//! [`crate::tables::validate_all`]).

use crate::intersection::{IntersectionError, SpaceModel};
use crate::rational::{self, q, qi, Q};
use crate::riemann_roch::minus_k_dot_c2;
use num_traits::{Signed, Zero};
use serde::Serialize;

pub const OPERATIONS: &[&str] = &[
    "h3_of_cover",
    "hc2_of_cover",
    "surface_euler",
    "euler_of_cover",
    "s_from_fano_index",
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantsError {
    #[error("degree must be positive, got {0}")]
    NonPositiveDegree(String),
    #[error("involution index must be positive")]
    ZeroIndex,
    #[error("unsupported Fano index {0}")]
    UnsupportedIndex(String),
    #[error(transparent)]
    Intersection(#[from] IntersectionError),
}

/// `H³ = 2|H'³|`.
pub fn h3_of_cover(d: &Q) -> Result<Q, InvariantsError> {
    if !d.is_positive() {
        return Err(InvariantsError::NonPositiveDegree(rational::render(d)));
    }
    Ok(qi(2) * d)
}

/// `H·c₂ = (4/s)(24 - (3/2)N) + (s²/4)·H³`.
///
/// Panics if `s = 0`.
pub fn hc2_of_cover(s: u32, n: u32, h3: &Q) -> Q {
    let s = qi(s.into());
    qi(4) / &s * minus_k_dot_c2(n) + &s * &s / qi(4) * h3
}

/// Euler number of a smooth surface `S ∈ |D|` on `space`.
///
/// Adjunction `c(S) = c(Y)|_S / (1 + D|_S)` gives
/// `e(S) = (c₂ - c₁·D + D²)·D`.
pub fn surface_euler(
    space: &SpaceModel,
    d: &crate::intersection::DivisorClass,
) -> Result<Q, InvariantsError> {
    if d.is_zero() {
        return Ok(Q::zero());
    }
    let c2d = space.c2_dot(d)?;
    let c1dd = space.triple_product(&space.c1, d, d)?;
    let ddd = space.triple_product(d, d, d)?;
    Ok(c2d - c1dd + ddd)
}

/// `e(X) = 2e(Y) - e(S) - N`.
///
/// Additivity on `X̃ → Ỹ` branched along `S_Ỹ ∪ F₁ ∪ … ∪ F_k`:
/// `e(X̃) = 2e(Ỹ) - e(B)`, `e(X̃) = e(X) + 2k`, `e(Ỹ) = e(Y) + 2k`,
/// `e(B) = e(S) + 3k`.
pub fn euler_of_cover(euler_y: &Q, euler_s: &Q, n: u32) -> Q {
    qi(2) * euler_y - euler_s - qi(n.into())
}

/// How the primitive Cartier divisor `H_Y` (with `-2K_Y = r_Y·H_Y`)
/// compares to the class-group generator `H'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CartierRatio {
    /// `H_Y = H'`.
    Same,
    /// `H_Y = 2H'`.
    Double,
}

/// Involution index from the Fano index `r_Y/2`.
///
/// `-2K_Y = r_Y·H_Y = s·H'`. When `ratio` is `None` it is inferred: an odd
/// `r_Y` forces `H_Y = 2H'` (indices ½ and 5/2), otherwise `H_Y = H'`.
/// Fano–Enriques quotients with `H_Y = 2H'` (index 1, `s = 4`) need the
/// ratio spelled out.
pub fn s_from_fano_index(r_half: &Q, ratio: Option<CartierRatio>) -> Result<u32, InvariantsError> {
    let supported = [q(1, 2), qi(1), qi(2), qi(3), qi(4), q(5, 2)];
    if !supported.contains(r_half) {
        return Err(InvariantsError::UnsupportedIndex(rational::render(r_half)));
    }
    let r_y = rational::to_i64(&(qi(2) * r_half)).expect("supported indices are half-integers");
    let ratio = ratio.unwrap_or(if r_y % 2 == 1 {
        CartierRatio::Double
    } else {
        CartierRatio::Same
    });
    let factor = match ratio {
        CartierRatio::Same => 1,
        CartierRatio::Double => 2,
    };
    Ok((r_y * factor) as u32)
}

/// Data of a rank-one quotient.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientData {
    /// `|H'³|`.
    pub d: Q,
    pub s: u32,
    pub n: u32,
    pub euler_y: Option<Q>,
    /// `c₂ · H'`; defaults to `(2/s)(24 - (3/2)N)`.
    pub c2_dot_hprime: Q,
}

impl QuotientData {
    pub fn new(d: Q, s: u32, n: u32) -> Result<Self, InvariantsError> {
        if !d.is_positive() {
            return Err(InvariantsError::NonPositiveDegree(rational::render(&d)));
        }
        if s == 0 {
            return Err(InvariantsError::ZeroIndex);
        }
        let c2_dot_hprime = qi(2) / qi(s.into()) * minus_k_dot_c2(n);
        Ok(Self {
            d,
            s,
            n,
            euler_y: None,
            c2_dot_hprime,
        })
    }

    pub fn with_euler(mut self, euler_y: Q) -> Self {
        self.euler_y = Some(euler_y);
        self
    }

    /// Numerical model: one generator `H'`, `c₁ = (s/2)H'`.
    pub fn space_model(&self) -> SpaceModel {
        let mut y = SpaceModel::new("Y", &["H'"]).expect("single generator");
        y.set_triple("H'", "H'", "H'", self.d.clone())
            .expect("generator exists");
        y.c1 = y
            .class(&[("H'", Q::new(self.s.into(), 2.into()))])
            .expect("generator exists");
        y.set_c2("H'", self.c2_dot_hprime.clone())
            .expect("generator exists");
        y.half_points = self.n;
        y.euler = self.euler_y.clone();
        y
    }

    /// `e(S)` for the branch surface `S ∈ |s·H'|`.
    pub fn branch_surface_euler(&self) -> Result<Q, InvariantsError> {
        let y = self.space_model();
        let d = y.class(&[("H'", qi(self.s.into()))])?;
        surface_euler(&y, &d)
    }

    pub fn invariants(&self) -> Result<CoverInvariants, InvariantsError> {
        let h3 = h3_of_cover(&self.d)?;
        let hc2 = hc2_of_cover(self.s, self.n, &h3);
        let euler_s = self.branch_surface_euler()?;
        let euler = self
            .euler_y
            .as_ref()
            .map(|ey| euler_of_cover(ey, &euler_s, self.n));
        Ok(CoverInvariants {
            h3,
            hc2,
            euler_s: Some(euler_s),
            euler,
        })
    }
}

/// Invariants of `X`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverInvariants {
    #[serde(with = "rational::as_string")]
    pub h3: Q,
    #[serde(with = "rational::as_string")]
    pub hc2: Q,
    #[serde(with = "rational::as_opt_string", skip_serializing_if = "Option::is_none")]
    pub euler_s: Option<Q>,
    #[serde(rename = "e", with = "rational::as_opt_string", skip_serializing_if = "Option::is_none")]
    pub euler: Option<Q>,
}

impl CoverInvariants {
    pub fn all_integral(&self) -> bool {
        self.h3.is_integer()
            && self.hc2.is_integer()
            && self.euler.as_ref().is_none_or(|e| e.is_integer())
    }
}

/// Part of `H·c₂` that does not depend on `H³`.
pub fn hc2_offset(s: u32, n: u32) -> Q {
    hc2_of_cover(s, n, &Q::zero())
}
