//! Closed-form CMC-1 parametrization in the upper half-space model.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::congruence::{calo_congruence_sample, check_derivative, envelope, CaloSurface, EnvelopeBranch, Vec3};
use crate::error::Result;
use crate::holo::{Expr, Jet2};

/// A point `(x, y, z)` of the upper half-space, `z > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfSpacePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl HalfSpacePoint {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn to_vec(self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    pub fn from_vec(v: Vec3) -> Self {
        Self::new(v.x, v.y, v.z)
    }

    pub fn distance(self, other: Self) -> f64 {
        (self.to_vec() - other.to_vec()).norm()
    }
}

/// `D = |f′|² + Re(f′ f̄″ τ̄) + |f″|²(|τ|²+1)/4`.
///
/// `D·(1+|τ|²) = |f′|² + |∇R|²`, so `D > 0` wherever `f′ ≠ 0`.
pub fn bicalo_denominator(fj: &Jet2, tau: Complex64) -> f64 {
    fj.d1.norm_sqr() + (fj.d1 * fj.d2.conj() * tau.conj()).re + fj.d2.norm_sqr() * (tau.norm_sqr() + 1.0) / 4.0
}

/// The CMC-1 surface point for the holomorphic data `(f, f′, f″)` at `τ`.
pub fn bianchi_calo_point(fj: &Jet2, tau: Complex64) -> Result<HalfSpacePoint> {
    check_derivative(fj)?;
    let d = bicalo_denominator(fj, tau);
    let a2 = fj.d1.norm_sqr();
    let shift = a2 * (fj.d1 * tau) + 0.5 * (1.0 + tau.norm_sqr()) * (fj.d1 * fj.d1 * fj.d2.conj());
    Ok(HalfSpacePoint::new(
        fj.val.re - shift.re / d,
        fj.val.im - shift.im / d,
        a2 * fj.d1.norm() / d,
    ))
}

/// The same point obtained as the `ξ₋` envelope of the sphere congruence
/// centered on the support surface.
pub fn bicalo_via_congruence(e: &Expr, tau: Complex64) -> Result<HalfSpacePoint> {
    let s = calo_congruence_sample(e, tau, CaloSurface::Support)?;
    envelope(&s, EnvelopeBranch::Minus).map(HalfSpacePoint::from_vec)
}
