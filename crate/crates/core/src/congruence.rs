//! Two-parameter families of spheres `[X, R]`: their envelopes, the
//! angles between the sphere normal and the surface of centers, and the
//! isometric pair of surfaces built from a holomorphic map.

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::holo::{eval_jet, Expr, Jet2};

pub type Vec3 = Vector3<f64>;

/// Relative threshold on `|X_u × X_v|` below which a chart is degenerate.
pub const DEGENERATE_CHART_TOL: f64 = 1e-14;
/// Slack above 1 for `Δ₁R` that is still treated as the tangential case.
pub const TANGENCY_SLACK: f64 = 1e-12;
/// `|f′|` below this is treated as a zero of the derivative.
pub const ZERO_DERIVATIVE_TOL: f64 = 1e-14;

/// Sphere congruence data at one parameter value: surface of centers with
/// first partials, and the radius with its partials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CongruenceSample {
    pub center: Vec3,
    pub center_u: Vec3,
    pub center_v: Vec3,
    pub radius: f64,
    pub radius_u: f64,
    pub radius_v: f64,
}

/// First fundamental form of the surface of centers, its inverse, and the
/// unit normal `X_u × X_v / |X_u × X_v|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricData {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
    pub normal: Vec3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeBranch {
    /// `ξ₊`; for the congruence of a holomorphic map this is the plane `z = 0`.
    Plus,
    /// `ξ₋`; the constant-mean-curvature-one branch.
    Minus,
}

/// Cosines of the angles between the unit vector `ν` toward the sphere
/// center and `X_u`, `X_v`, and the normal `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeltramiAngles {
    pub cos_omega1: f64,
    pub cos_omega2: f64,
    pub cos_sigma: f64,
}

pub fn metric_data(s: &CongruenceSample) -> Result<MetricData> {
    let (xu, xv) = (&s.center_u, &s.center_v);
    let cross = xu.cross(xv);
    let area = cross.norm();
    if !(area > DEGENERATE_CHART_TOL * xu.norm() * xv.norm()) {
        return Err(Error::DegenerateChart);
    }
    let (g11, g12, g22) = (xu.dot(xu), xu.dot(xv), xv.dot(xv));
    let det = g11 * g22 - g12 * g12;
    if !(det > 0.0) {
        return Err(Error::DegenerateChart);
    }
    Ok(MetricData {
        g11,
        g12,
        g22,
        a11: g22 / det,
        a12: -g12 / det,
        a22: g11 / det,
        normal: cross / area,
    })
}

/// `Δ₁R = A(∇R, ∇R)`, the squared gradient norm of the radius.
pub fn radius_gradient_norm_sq(s: &CongruenceSample, m: &MetricData) -> f64 {
    let (ru, rv) = (s.radius_u, s.radius_v);
    ru * ru * m.a11 + 2.0 * ru * rv * m.a12 + rv * rv * m.a22
}

/// `Δ(X, R)`, the tangential part of `ν`.
pub fn radius_gradient_vector(s: &CongruenceSample, m: &MetricData) -> Vec3 {
    let (ru, rv) = (s.radius_u, s.radius_v);
    s.center_u * (ru * m.a11 + rv * m.a12) + s.center_v * (ru * m.a12 + rv * m.a22)
}

/// `√(1 − Δ₁R)`, with values slightly above one clamped to the tangential case.
fn normal_component(delta1: f64) -> Result<f64> {
    if delta1 > 1.0 + TANGENCY_SLACK || delta1.is_nan() {
        return Err(Error::NoRealEnvelope(delta1));
    }
    Ok((1.0 - delta1).max(0.0).sqrt())
}

/// `ξ = X − R(Δ(X,R) ± √(1−Δ₁R) N)`.
pub fn envelope(s: &CongruenceSample, branch: EnvelopeBranch) -> Result<Vec3> {
    let m = metric_data(s)?;
    let c = normal_component(radius_gradient_norm_sq(s, &m))?;
    let signed = match branch {
        EnvelopeBranch::Plus => c,
        EnvelopeBranch::Minus => -c,
    };
    let nu = radius_gradient_vector(s, &m) + m.normal * signed;
    Ok(s.center - nu * s.radius)
}

pub fn beltrami_angles(s: &CongruenceSample) -> Result<BeltramiAngles> {
    let m = metric_data(s)?;
    let cos_sigma = normal_component(radius_gradient_norm_sq(s, &m))?;
    Ok(BeltramiAngles {
        cos_omega1: s.radius_u / m.g11.sqrt(),
        cos_omega2: s.radius_v / m.g22.sqrt(),
        cos_sigma,
    })
}

/// `R = (1 + |τ|²)/2 · |f′(τ)|`.
pub fn calo_radius(fj: &Jet2, tau: Complex64) -> f64 {
    0.5 * (1.0 + tau.norm_sqr()) * fj.d1.norm()
}

/// One point of the isometric pair: the rolled surface `S̃` and the support
/// surface `S` in the upper half-space, with `|S̃| = S.z = R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaloPairSample {
    pub tau: Complex64,
    pub rolled: Vec3,
    pub support: Vec3,
    pub radius: f64,
}

pub(crate) fn check_derivative(fj: &Jet2) -> Result<()> {
    if fj.d1.norm() < ZERO_DERIVATIVE_TOL {
        Err(Error::ZeroDerivative)
    } else {
        Ok(())
    }
}

fn rolled_point(fj: &Jet2, tau: Complex64) -> Vec3 {
    let a = fj.d1.norm();
    Vec3::new(a * tau.re, a * tau.im, a * 0.5 * (tau.norm_sqr() - 1.0))
}

pub fn calo_pair(fj: &Jet2, tau: Complex64) -> Result<CaloPairSample> {
    check_derivative(fj)?;
    let radius = calo_radius(fj, tau);
    Ok(CaloPairSample {
        tau,
        rolled: rolled_point(fj, tau),
        support: Vec3::new(fj.val.re, fj.val.im, radius),
        radius,
    })
}

/// Which surface of the pair serves as the surface of centers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaloSurface {
    Support,
    Rolled,
}

/// Step used for central differences of the rolled surface at `τ`.
pub fn rolled_step(tau: Complex64) -> f64 {
    1e-6 * (1.0 + tau.norm())
}

/// Radius partials `R_u`, `R_v` from the jet (`τ = u + iv`).
pub fn radius_partials(fj: &Jet2, tau: Complex64) -> (f64, f64) {
    let a = fj.d1.norm();
    let w = fj.d1 * fj.d2.conj();
    let k = 0.5 * (1.0 + tau.norm_sqr()) / a;
    (tau.re * a + k * w.re, tau.im * a + k * w.im)
}

/// Congruence of spheres centered on one surface of the Calò pair with the
/// radius `R` of [`calo_radius`].
pub fn calo_congruence_sample(e: &Expr, tau: Complex64, which: CaloSurface) -> Result<CongruenceSample> {
    let fj = eval_jet(e, tau)?;
    check_derivative(&fj)?;
    let radius = calo_radius(&fj, tau);
    match which {
        CaloSurface::Support => {
            let (ru, rv) = radius_partials(&fj, tau);
            // Cauchy–Riemann: ∂_u f = f′, ∂_v f = i f′
            let fu = fj.d1;
            let fv = Complex64::i() * fj.d1;
            Ok(CongruenceSample {
                center: Vec3::new(fj.val.re, fj.val.im, radius),
                center_u: Vec3::new(fu.re, fu.im, ru),
                center_v: Vec3::new(fv.re, fv.im, rv),
                radius,
                radius_u: ru,
                radius_v: rv,
            })
        }
        CaloSurface::Rolled => {
            let h = rolled_step(tau);
            let at = |dt: Complex64| -> Result<(Vec3, f64)> {
                let t = tau + dt;
                let j = eval_jet(e, t)?;
                Ok((rolled_point(&j, t), calo_radius(&j, t)))
            };
            let (pu, ru_p) = at(Complex64::new(h, 0.0))?;
            let (mu, ru_m) = at(Complex64::new(-h, 0.0))?;
            let (pv, rv_p) = at(Complex64::new(0.0, h))?;
            let (mv, rv_m) = at(Complex64::new(0.0, -h))?;
            Ok(CongruenceSample {
                center: rolled_point(&fj, tau),
                center_u: (pu - mu) / (2.0 * h),
                center_v: (pv - mv) / (2.0 * h),
                radius,
                radius_u: (ru_p - ru_m) / (2.0 * h),
                radius_v: (rv_p - rv_m) / (2.0 * h),
            })
        }
    }
}

/// First fundamental form `(E, F, G)` of a chart from its two partials.
pub fn first_form(xu: &Vec3, xv: &Vec3) -> [f64; 3] {
    [xu.dot(xu), xu.dot(xv), xv.dot(xv)]
}

/// Step for the metric comparisons of [`calo_metrics`].
pub const METRIC_STEP: f64 = 1e-6;

/// First fundamental forms at `τ` of everything the Calò pair relates, all
/// by central differences in `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaloMetrics {
    /// `S̃`.
    pub rolled: [f64; 3],
    /// `S`.
    pub support: [f64; 3],
    /// `R²` times the round metric pulled back through `S̃/|S̃|`.
    pub central: [f64; 3],
    /// `dx² + dy²` pulled back through `f`.
    pub plane: [f64; 3],
}

fn relative_gap(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let scale = a[0].max(a[2]).max(b[0]).max(b[2]);
    (0..3).map(|k| (a[k] - b[k]).abs()).fold(0.0, f64::max) / scale
}

impl CaloMetrics {
    /// Largest coefficient difference between `S̃` and `S`, relative to the
    /// largest diagonal coefficient.
    pub fn isometry_defect(&self) -> f64 {
        relative_gap(&self.rolled, &self.support)
    }

    /// `|F| / √(EG)` of the central-projection metric.
    pub fn conformality_defect(&self) -> f64 {
        let [e, f, g] = self.central;
        f.abs() / (e * g).sqrt()
    }

    /// Largest gap between the two sides of `R²(dθ² + sin²θ dφ²) = dx² + dy²`.
    pub fn projection_defect(&self) -> f64 {
        relative_gap(&self.central, &self.plane)
    }
}

pub fn calo_metrics(e: &Expr, tau: Complex64) -> Result<CaloMetrics> {
    let h = METRIC_STEP;
    let at = |dt: Complex64| -> Result<CaloPairSample> {
        let t = tau + dt;
        calo_pair(&eval_jet(e, t)?, t)
    };
    let (pu, mu) = (at(Complex64::new(h, 0.0))?, at(Complex64::new(-h, 0.0))?);
    let (pv, mv) = (at(Complex64::new(0.0, h))?, at(Complex64::new(0.0, -h))?);
    let center = calo_pair(&eval_jet(e, tau)?, tau)?;
    let d = |f: &dyn Fn(&CaloPairSample) -> Vec3| ((f(&pu) - f(&mu)) / (2.0 * h), (f(&pv) - f(&mv)) / (2.0 * h));
    let (su_t, sv_t) = d(&|s| s.rolled);
    let (su, sv) = d(&|s| s.support);
    let (nu, nv) = d(&|s| s.rolled.normalize());
    let (qu, qv) = d(&|s| Vec3::new(s.support.x, s.support.y, 0.0));
    let r2 = center.radius * center.radius;
    Ok(CaloMetrics {
        rolled: first_form(&su_t, &sv_t),
        support: first_form(&su, &sv),
        central: first_form(&nu, &nv).map(|c| r2 * c),
        plane: first_form(&qu, &qv),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holo::parse;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(center: Vec3, xu: Vec3, xv: Vec3, r: f64, ru: f64, rv: f64) -> CongruenceSample {
        CongruenceSample {
            center,
            center_u: xu,
            center_v: xv,
            radius: r,
            radius_u: ru,
            radius_v: rv,
        }
    }

    fn close(a: Vec3, b: Vec3, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn orthonormal_chart() {
        let s = sample(Vec3::zeros(), Vec3::x(), Vec3::y(), 1.0, 0.0, 0.0);
        let m = metric_data(&s).unwrap();
        assert_eq!((m.g11, m.g12, m.g22), (1.0, 0.0, 1.0));
        assert_eq!((m.a11, m.a12, m.a22), (1.0, 0.0, 1.0));
        assert_eq!(m.normal, Vec3::z());
    }

    #[test]
    fn rescaled_chart() {
        let s = sample(Vec3::zeros(), Vec3::new(2.0, 0.0, 0.0), Vec3::y(), 1.0, 0.0, 0.0);
        let m = metric_data(&s).unwrap();
        assert_eq!(m.g11, 4.0);
        assert_eq!(m.a11, 0.25);
    }

    #[test]
    fn parallel_tangents_are_degenerate() {
        let s = sample(
            Vec3::zeros(),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(2.0, 2.0, 0.0),
            1.0,
            0.0,
            0.0,
        );
        assert!(matches!(metric_data(&s), Err(Error::DegenerateChart)));
        assert!(matches!(
            envelope(&s, EnvelopeBranch::Plus),
            Err(Error::DegenerateChart)
        ));
    }

    #[test]
    fn constant_radius_offsets() {
        let s = sample(Vec3::new(0.3, -0.7, 2.0), Vec3::x(), Vec3::y(), 1.0, 0.0, 0.0);
        assert!(close(
            envelope(&s, EnvelopeBranch::Plus).unwrap(),
            Vec3::new(0.3, -0.7, 1.0),
            1e-15
        ));
        assert!(close(
            envelope(&s, EnvelopeBranch::Minus).unwrap(),
            Vec3::new(0.3, -0.7, 3.0),
            1e-15
        ));
        let a = beltrami_angles(&s).unwrap();
        assert_eq!((a.cos_omega1, a.cos_omega2, a.cos_sigma), (0.0, 0.0, 1.0));
    }

    #[test]
    fn steep_radius_has_no_real_envelope() {
        let s = sample(Vec3::zeros(), Vec3::x(), Vec3::y(), 1.0, 1.0, 0.5);
        assert!(matches!(
            envelope(&s, EnvelopeBranch::Minus),
            Err(Error::NoRealEnvelope(_))
        ));
        assert!(matches!(beltrami_angles(&s), Err(Error::NoRealEnvelope(_))));
    }

    #[test]
    fn tangential_case_is_clamped() {
        let s = sample(Vec3::zeros(), Vec3::x(), Vec3::y(), 1.0, 0.6, 0.8);
        let a = beltrami_angles(&s).unwrap();
        assert_eq!(a.cos_sigma, 0.0);
        let plus = envelope(&s, EnvelopeBranch::Plus).unwrap();
        let minus = envelope(&s, EnvelopeBranch::Minus).unwrap();
        assert!(close(plus, minus, 1e-15));
        let s = sample(Vec3::zeros(), Vec3::x(), Vec3::y(), 1.0, 1.0 + 4e-13, 0.0);
        assert_eq!(beltrami_angles(&s).unwrap().cos_sigma, 0.0);
    }

    #[test]
    fn identity_map_congruence_passes_through_one_point() {
        let e = parse("tau").unwrap();
        for tau in [c(0.0, 0.0), c(0.4, -1.3), c(-2.0, 0.5), c(3.0, 3.0)] {
            let s = calo_congruence_sample(&e, tau, CaloSurface::Support).unwrap();
            assert_eq!((s.radius_u, s.radius_v), (tau.re, tau.im));
            // every sphere contains (0, 0, 1)
            assert!(((s.center - Vec3::z()).norm() - s.radius).abs() < 1e-13);
            let plus = envelope(&s, EnvelopeBranch::Plus).unwrap();
            let minus = envelope(&s, EnvelopeBranch::Minus).unwrap();
            assert!(close(plus, Vec3::new(tau.re, tau.im, 0.0), 1e-13), "{plus}");
            assert!(close(minus, Vec3::z(), 1e-13), "{minus}");
        }
    }

    #[test]
    fn radius_values() {
        let sq = eval_jet(&parse("tau^2").unwrap(), c(1.0, 0.0)).unwrap();
        assert_eq!(calo_radius(&sq, c(1.0, 0.0)), 2.0);
        let id = eval_jet(&parse("tau").unwrap(), c(0.0, 0.0)).unwrap();
        assert_eq!(calo_radius(&id, c(0.0, 0.0)), 0.5);
        let flat = eval_jet(&parse("tau^2").unwrap(), c(0.0, 0.0)).unwrap();
        assert_eq!(calo_radius(&flat, c(0.0, 0.0)), 0.0);
    }

    #[test]
    fn pair_values() {
        let sq = parse("tau^2").unwrap();
        let p = calo_pair(&eval_jet(&sq, c(1.0, 0.0)).unwrap(), c(1.0, 0.0)).unwrap();
        assert_eq!(p.rolled, Vec3::new(2.0, 0.0, 0.0));
        assert_eq!(p.support, Vec3::new(1.0, 0.0, 2.0));

        let id = parse("tau").unwrap();
        let p = calo_pair(&eval_jet(&id, c(0.0, 1.0)).unwrap(), c(0.0, 1.0)).unwrap();
        assert_eq!(p.rolled, Vec3::new(0.0, 1.0, 0.0));
        assert_eq!(p.support, Vec3::new(0.0, 1.0, 1.0));
        let p = calo_pair(&eval_jet(&id, c(0.0, 0.0)).unwrap(), c(0.0, 0.0)).unwrap();
        assert_eq!(p.rolled, Vec3::new(0.0, 0.0, -0.5));
        assert_eq!(p.support, Vec3::new(0.0, 0.0, 0.5));

        let flat = eval_jet(&sq, c(0.0, 0.0)).unwrap();
        assert!(matches!(calo_pair(&flat, c(0.0, 0.0)), Err(Error::ZeroDerivative)));
    }

    #[test]
    fn support_sample_of_square() {
        let s = calo_congruence_sample(&parse("tau^2").unwrap(), c(1.0, 0.0), CaloSurface::Support).unwrap();
        assert_eq!(s.center, Vec3::new(1.0, 0.0, 2.0));
        assert_eq!((s.radius_u, s.radius_v), (4.0, 0.0));
    }

    #[test]
    fn log_on_its_cut_is_a_domain_error() {
        let e = parse("log(tau)").unwrap();
        for which in [CaloSurface::Support, CaloSurface::Rolled] {
            assert!(matches!(
                calo_congruence_sample(&e, c(-1.0, 0.0), which),
                Err(Error::Domain(_))
            ));
        }
    }

    #[test]
    fn beltrami_angles_agree_for_square_at_one() {
        let e = parse("tau^2").unwrap();
        let a = beltrami_angles(&calo_congruence_sample(&e, c(1.0, 0.0), CaloSurface::Support).unwrap()).unwrap();
        let b = beltrami_angles(&calo_congruence_sample(&e, c(1.0, 0.0), CaloSurface::Rolled).unwrap()).unwrap();
        assert!((a.cos_omega1 - b.cos_omega1).abs() < 1e-8);
        assert!((a.cos_omega2 - b.cos_omega2).abs() < 1e-8);
        assert!((a.cos_sigma - b.cos_sigma).abs() < 1e-8);
    }

    #[test]
    fn calo_metrics_for_the_square() {
        let e = parse("tau^2").unwrap();
        let m = calo_metrics(&e, c(1.0, 0.0)).unwrap();
        // S = (u² − v², 2uv, (1 + u² + v²)|τ|) has E = 4 + 16 = 20 at τ = 1
        assert!((m.support[0] - 20.0).abs() < 1e-8, "{:?}", m.support);
        assert!((m.plane[0] - 4.0).abs() < 1e-8);
        assert!(m.isometry_defect() < 1e-8);
        assert!(m.conformality_defect() < 1e-8);
        assert!(m.projection_defect() < 1e-8);
    }
}
