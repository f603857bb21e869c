//! Riemann–Roch bookkeeping for quotients with ½(1,1,1) points.
//!
//! Resolving a ½(1,1,1) point inserts a plane `F ≅ P²` with normal bundle
//! `O(-2)`. Adjunction on that plane pins the restriction of the ambient
//! `c₂`, and `χ(O) = c₁·c₂/24` on the resolution then ties the number of
//! such points to `χ(O_Y)`.

use crate::rational::{q, qi, Q};
use num_traits::{One, Zero};
use std::fmt;

pub const OPERATIONS: &[&str] = &[
    "c2_restriction",
    "chi_of_resolution",
    "solve_isolated_count",
    "minus_K_dot_c2",
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RiemannRochError {
    #[error("inconsistent diagram: χ = {chi} gives k = {k}, not a non-negative integer")]
    InconsistentDiagram { chi: String, k: String },
}

/// Ambient `c₂` restricted to an embedded plane with normal bundle `O(b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernRestriction {
    pub normal_degree: i64,
    pub c2_value: Q,
}

impl ChernRestriction {
    pub fn new(normal_degree: i64) -> Self {
        Self {
            normal_degree,
            c2_value: c2_restriction(normal_degree),
        }
    }

    /// Only `O(-1)` (point blow-up) and `O(-2)` (½(1,1,1) blow-up) occur
    /// in the diagrams this crate builds.
    pub fn is_extrapolated(&self) -> bool {
        !matches!(self.normal_degree, -1 | -2)
    }
}

/// `c(T)|_P = (1 + b·h)(1 + h)³` on `P = P²`, so the degree-2 part is
/// `b·3 + 3`.
pub fn c2_restriction(normal_degree: i64) -> Q {
    let c1_plane = 3;
    let c2_plane = 3;
    qi(normal_degree * c1_plane + c2_plane)
}

/// `χ(O_Ỹ)` for the blow-up of `k` ½(1,1,1) points, given `-K_Y · c₂(Y)`.
///
/// `c₁(Ỹ) = g*c₁(Y) - ½ΣF_i` and each `F_i` contributes
/// `-(1/48)·c₂|_{F_i} = 1/16`.
pub fn chi_of_resolution(minus_k_dot_c2: &Q, k: u32) -> Q {
    let per_point = -q(1, 48) * c2_restriction(-2);
    minus_k_dot_c2 / qi(24) + per_point * qi(k.into())
}

/// Number of isolated fixed points forced by `χ(O_Y)` when the fixed
/// locus is zero-dimensional (`-K_Y·c₂` term absent).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatedCount {
    pub k: u32,
    /// `k = 0` would make the involution free, and then
    /// `2χ(O_Y) = χ(O_X) = 0`.
    pub impossible: bool,
}

pub fn solve_isolated_count(chi_y: &Q) -> Result<IsolatedCount, RiemannRochError> {
    let slope = chi_of_resolution(&Q::zero(), 1);
    let k = chi_y / &slope;
    let bad = || RiemannRochError::InconsistentDiagram {
        chi: crate::rational::render(chi_y),
        k: crate::rational::render(&k),
    };
    if !k.is_integer() || k < Q::zero() {
        return Err(bad());
    }
    let k = crate::rational::to_i64(&k)
        .and_then(|v| u32::try_from(v).ok())
        .ok_or_else(bad)?;
    Ok(IsolatedCount {
        k,
        impossible: k == 0,
    })
}

/// `-K_Y · c₂(Y) = 24 - (3/2)N` for a quotient with `N` points of type
/// ½(1,1,1) and `χ(O_Y) = 1`.
///
/// Obtained by solving `chi_of_resolution(·, N) = 1`; the closed form is
/// checked against every classified family in the table validator.
pub fn minus_k_dot_c2(n: u32) -> Q {
    qi(24) - q(3, 2) * qi(n.into())
}

/// One step of the sixteen-point derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLine {
    pub rule: &'static str,
    pub statement: String,
}

impl fmt::Display for TraceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.rule, self.statement)
    }
}

/// Outcome of the zero-dimensional fixed locus derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SixteenDerivation {
    pub trace: Vec<TraceLine>,
    /// Coefficient of `k` in `χ(O_Ỹ)`.
    pub slope: Q,
    pub intercept: Q,
    pub k: u32,
}

/// Derives the number of isolated fixed points of an involution acting by
/// `-1` on the 3-form when the fixed locus is zero-dimensional.
///
/// The divisor relations come from [`crate::intersection::canonical_chain`]
/// on concrete diagrams with `S_Y = 0`; `χ(O_Ỹ)` is read off the resulting
/// `Ỹ` model for two values of `k`, which fixes the affine function
/// `χ(k)` exactly.
pub fn derive_sixteen() -> Result<SixteenDerivation, crate::Error> {
    use crate::intersection::{canonical_chain, CoverDiagram, SpaceModel};

    let mut trace = Vec::new();
    let mut push = |rule: &'static str, statement: String| {
        trace.push(TraceLine { rule, statement })
    };

    let chi_at = |k: u32| -> Result<(Q, CoverDiagram), crate::Error> {
        // Y with -K_Y = 0 (the fixed locus has no surface part); the c₂
        // value on H' is arbitrary since c₁(Y) = 0 kills it.
        let mut y = SpaceModel::new("Y", &["H'"])?;
        y.set_triple("H'", "H'", "H'", Q::one())?;
        y.set_c2("H'", qi(7))?;
        let dia = CoverDiagram::over_quotient(y, k, 0)?;
        let chain = canonical_chain(&dia)?;
        if !chain.holds {
            return Err(crate::Error::Derivation(format!(
                "canonical relation failed for k = {k}"
            )));
        }
        let chi = dia.yt.c2_dot(&dia.yt.c1)? / qi(24);
        Ok((chi, dia))
    };

    let (chi0, _) = chi_at(0)?;
    let (chi1, dia1) = chi_at(1)?;
    let chain = canonical_chain(&dia1)?;
    let slope = &chi1 - &chi0;
    let intercept = chi0;

    push("Calabi–Yau", "K_X = 0".into());
    push(
        "blow-up",
        format!("K_X̃ = f*K_X + 2ΣE_i = {}", chain.k_xt_blowup.to_string().replace("E1", "ΣE_i")),
    );
    push("Hurwitz", "K_X̃ = φ̃*K_Ỹ + S_X̃ + ΣE_i".into());
    push(
        "push-forward",
        "φ̃_*K_X̃ = 2K_Ỹ + S_Ỹ + ΣF_i = φ̃_*(2ΣE_i) = 2ΣF_i, so 2K_Ỹ + S_Ỹ = ΣF_i".into(),
    );
    push(
        "zero-dimensional fixed locus",
        format!(
            "S_Ỹ = 0, so c₁(Ỹ) = -½ΣF_i (model: c₁(Ỹ) = {})",
            dia1.yt.c1.to_string().replace("F1", "ΣF_i")
        ),
    );
    let fc = ChernRestriction::new(-2);
    push(
        "adjunction",
        format!(
            "c₂(Ỹ)|F_i = F_i|F_i·c₁(F_i) + c₂(F_i) = ({})·3 + 3 = {}",
            fc.normal_degree,
            crate::rational::render(&fc.c2_value)
        ),
    );
    push(
        "Riemann–Roch",
        format!(
            "χ(O_Ỹ) = c₁(Ỹ)·c₂(Ỹ)/24 = -(1/48)·Σ(-3) = {}·k + {}",
            crate::rational::render(&slope),
            crate::rational::render(&intercept)
        ),
    );
    if slope != chi_of_resolution(&Q::zero(), 1) || !intercept.is_zero() {
        return Err(crate::Error::Derivation(
            "model χ(O_Ỹ) disagrees with k/16".into(),
        ));
    }
    push(
        "vanishing",
        "h^i(O_Y) = 0 for i > 0, so χ(O_Ỹ) = χ(O_Y) = 1".into(),
    );
    let free = solve_isolated_count(&Q::zero())?;
    debug_assert!(free.impossible);
    push(
        "not free",
        "k = 0 would give 2χ(O_Y) = χ(O_X) = 0 ≠ 2".into(),
    );
    let solved = solve_isolated_count(&Q::one())?;
    push("solve", format!("k/16 = 1, k = {}", solved.k));
    Ok(SixteenDerivation {
        trace,
        slope,
        intercept,
        k: solved.k,
    })
}
