//! Null-curve route: Small's matrix with `g = τ`, projected to the upper
//! half-space. Independent of the closed form in [`crate::bianchi`] and
//! used to cross-check it.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bianchi::HalfSpacePoint;
use crate::congruence::check_derivative;
use crate::error::{Error, Result};
use crate::grid::Domain;
use crate::holo::{eval_jet_on_sheet, Expr, Jet2};

/// `ω = [[α, β], [γ, δ]]` with `det ω = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullCurveMatrix {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
}

impl NullCurveMatrix {
    pub const IDENTITY: Self = Self {
        alpha: Complex64::new(1.0, 0.0),
        beta: Complex64::new(0.0, 0.0),
        gamma: Complex64::new(0.0, 0.0),
        delta: Complex64::new(1.0, 0.0),
    };

    pub fn det(&self) -> Complex64 {
        self.alpha * self.delta - self.beta * self.gamma
    }

    pub fn neg(&self) -> Self {
        Self {
            alpha: -self.alpha,
            beta: -self.beta,
            gamma: -self.gamma,
            delta: -self.delta,
        }
    }
}

/// `conj(p)/|p|²`; negating `p` negates the result exactly.
fn recip(p: Complex64) -> Complex64 {
    p.conj() / p.norm_sqr()
}

/// Builds `ω` from `p`, a chosen square root of `f′`.
///
/// `q = ½ f″ p⁻³`, `α = p − f q`, `β = f(p⁻¹ + τ q) − τ p`, `γ = −q`,
/// `δ = p⁻¹ + τ q`. Every entry is odd in `p`.
pub fn small_matrix_with_root(fj: &Jet2, tau: Complex64, p: Complex64) -> NullCurveMatrix {
    let p_inv = recip(p);
    let q = 0.5 * fj.d2 * (p_inv * p_inv * p_inv);
    let f = fj.val;
    let delta = p_inv + tau * q;
    NullCurveMatrix {
        alpha: p - f * q,
        beta: f * delta - tau * p,
        gamma: -q,
        delta,
    }
}

/// `ω` with the principal square root of `f′`.
pub fn small_matrix(fj: &Jet2, tau: Complex64) -> Result<NullCurveMatrix> {
    check_derivative(fj)?;
    Ok(small_matrix_with_root(fj, tau, fj.d1.sqrt()))
}

/// `x + iy = (αγ̄ + βδ̄)/(|γ|² + |δ|²)`, `z = 1/(|γ|² + |δ|²)`.
pub fn to_upper_half_space(w: &NullCurveMatrix) -> Result<HalfSpacePoint> {
    let s = w.gamma.norm_sqr() + w.delta.norm_sqr();
    if !s.is_finite() {
        return Err(Error::InvalidMatrix(format!("|γ|²+|δ|² = {s}")));
    }
    if !(s > 1e-300) {
        return Err(Error::InvalidMatrix("bottom row vanishes".into()));
    }
    let xy = (w.alpha * w.gamma.conj() + w.beta * w.delta.conj()) / s;
    let p = HalfSpacePoint::new(xy.re, xy.im, 1.0 / s);
    if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite() && p.z > 0.0) {
        return Err(Error::InvalidMatrix("non-finite projection".into()));
    }
    Ok(p)
}

/// Composite of [`small_matrix`] and [`to_upper_half_space`].
pub fn small_point(fj: &Jet2, tau: Complex64) -> Result<HalfSpacePoint> {
    to_upper_half_space(&small_matrix(fj, tau)?)
}

/// Largest `|det ω − 1|` over the grid nodes where `ω` is defined.
pub fn max_determinant_defect(e: &Expr, domain: &Domain) -> Result<f64> {
    domain.validate()?;
    let defects: Vec<f64> = (0..domain.len())
        .into_par_iter()
        .filter_map(|k| {
            let (i, j) = (k / domain.n_theta, k % domain.n_theta);
            let fj = eval_jet_on_sheet(e, domain.r(i), domain.theta(j)).ok()?;
            let w = small_matrix(&fj, domain.tau(i, j)).ok()?;
            Some((w.det() - 1.0).norm())
        })
        .collect();
    if defects.is_empty() {
        return Err(Error::EmptyGrid);
    }
    Ok(defects.into_iter().fold(0.0, f64::max))
}
