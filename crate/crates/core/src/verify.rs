//! Independent numerical checks of a sampled surface: fundamental forms and
//! mean curvature from grid finite differences, the hyperbolic Gauss map,
//! and conformality of the Gauss-map correspondence.
//!
//! Nothing here uses jets of the generating function. Grid quantities come
//! from central stencils over the sampled nodes; pointwise quantities
//! (normals for the Gauss map, its Cauchy–Riemann residual) come from small
//! central steps of the surface map treated as a black box.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bianchi::HalfSpacePoint;
use crate::congruence::Vec3;
use crate::error::{Error, Result};
use crate::grid::{degeneracy_classify, has_full_rank, surface_point, Degeneracy, Method, SurfaceGrid};
use crate::holo::{eval_jet_on_sheet, Expr};

/// `n_z` at or above `1 − VERTICAL_TOL` has no finite Gauss-map image.
pub const VERTICAL_TOL: f64 = 1e-12;

/// Central finite-difference stencil used for grid derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stencil {
    /// 3-point, error `O(h²)`.
    Second,
    /// 5-point, error `O(h⁴)`.
    Fourth,
    /// 7-point, error `O(h⁶)`.
    #[default]
    Sixth,
}

impl Stencil {
    /// Nodes needed on each side.
    pub fn reach(self) -> usize {
        match self {
            Stencil::Second => 1,
            Stencil::Fourth => 2,
            Stencil::Sixth => 3,
        }
    }

    fn first(self) -> &'static [f64] {
        match self {
            Stencil::Second => &[-0.5, 0.0, 0.5],
            Stencil::Fourth => &[1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0],
            Stencil::Sixth => &[-1.0 / 60.0, 3.0 / 20.0, -0.75, 0.0, 0.75, -3.0 / 20.0, 1.0 / 60.0],
        }
    }

    fn second(self) -> &'static [f64] {
        match self {
            Stencil::Second => &[1.0, -2.0, 1.0],
            Stencil::Fourth => &[-1.0 / 12.0, 4.0 / 3.0, -2.5, 4.0 / 3.0, -1.0 / 12.0],
            Stencil::Sixth => &[1.0 / 90.0, -3.0 / 20.0, 1.5, -49.0 / 18.0, 1.5, -3.0 / 20.0, 1.0 / 90.0],
        }
    }
}

/// First and second fundamental forms at a grid node, with respect to the
/// grid parameters `(r, θ)`. The normal is `X_r × X_θ` normalized; with an
/// inward normal the unit sphere has `h_euclid = +1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormsSample {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub l: f64,
    pub m: f64,
    pub n2: f64,
    pub normal: Vec3,
    pub h_euclid: f64,
}

impl FormsSample {
    pub fn from_derivatives(xr: &Vec3, xt: &Vec3, xrr: &Vec3, xrt: &Vec3, xtt: &Vec3) -> Result<Self> {
        let (e, f, g) = (xr.dot(xr), xr.dot(xt), xt.dot(xt));
        let det = e * g - f * f;
        let cross = xr.cross(xt);
        let area = cross.norm();
        if !(det > 0.0) || !(area > 1e-14 * (e * g).sqrt()) {
            return Err(Error::DegenerateChart);
        }
        let normal = cross / area;
        let (l, m, n2) = (xrr.dot(&normal), xrt.dot(&normal), xtt.dot(&normal));
        let h_euclid = (g * l - 2.0 * f * m + e * n2) / (2.0 * det);
        Ok(Self {
            e,
            f,
            g,
            l,
            m,
            n2,
            normal,
            h_euclid,
        })
    }

    /// `z·H + n_z` for the stored orientation of the normal.
    pub fn signed_hyperbolic_mean_curvature(&self, z: f64) -> f64 {
        z * self.h_euclid + self.normal.z
    }
}

/// Mean curvature in the half-space metric `|dx|²/z²`, reported for the
/// orientation that makes it nonnegative.
pub fn hyperbolic_mean_curvature(fs: &FormsSample, z: f64) -> f64 {
    fs.signed_hyperbolic_mean_curvature(z).abs()
}

pub fn fundamental_forms(g: &SurfaceGrid, i: usize, j: usize, stencil: Stencil) -> Result<FormsSample> {
    let d = &g.domain;
    let k = stencil.reach();
    if i < k || j < k || i + k >= d.n_r || j + k >= d.n_theta {
        return Err(Error::BoundaryNode(i, j));
    }
    let at = |a: usize, b: usize| g.get(a, b).map(|p| p.to_vec()).ok_or(Error::BoundaryNode(i, j));
    let (c1, c2) = (stencil.first(), stencil.second());
    let (hr, ht) = (d.r_step(), d.theta_step());
    let mut xr = Vec3::zeros();
    let mut xt = Vec3::zeros();
    let mut xrr = Vec3::zeros();
    let mut xtt = Vec3::zeros();
    let mut xrt = Vec3::zeros();
    for s in 0..=2 * k {
        let row = at(i + s - k, j)?;
        let col = at(i, j + s - k)?;
        xr += row * c1[s];
        xrr += row * c2[s];
        xt += col * c1[s];
        xtt += col * c2[s];
        for t in 0..=2 * k {
            if c1[s] != 0.0 && c1[t] != 0.0 {
                xrt += at(i + s - k, j + t - k)? * (c1[s] * c1[t]);
            }
        }
    }
    FormsSample::from_derivatives(
        &(xr / hr),
        &(xt / ht),
        &(xrr / (hr * hr)),
        &(xrt / (hr * ht)),
        &(xtt / (ht * ht)),
    )
}

/// Ideal endpoint `x + iy + z(n_x + i n_y)/(1 − n_z)` of the geodesic leaving
/// `p` in the Euclidean direction `n`.
pub fn hyperbolic_gauss_map(p: &HalfSpacePoint, n: &Vec3) -> Result<Complex64> {
    if n.z >= 1.0 - VERTICAL_TOL {
        return Err(Error::VerticalEscape);
    }
    Ok(Complex64::new(p.x, p.y) + p.z * Complex64::new(n.x, n.y) / (1.0 - n.z))
}

/// Black-box access to the surface and its generating function on the
/// continued sheet at polar parameters `(r, θ)`.
#[derive(Debug, Clone, Copy)]
pub struct SurfaceSampler<'a> {
    pub expr: &'a Expr,
    pub method: Method,
}

/// Step for the pointwise normals.
const NORMAL_STEP: f64 = 1e-6;
/// Step for the Cauchy–Riemann residual of the Gauss map.
const CR_STEP: f64 = 1e-4;

impl SurfaceSampler<'_> {
    pub fn point(&self, r: f64, theta: f64) -> Result<HalfSpacePoint> {
        surface_point(self.expr, self.method, r, theta)
    }

    pub fn function(&self, r: f64, theta: f64) -> Result<Complex64> {
        Ok(eval_jet_on_sheet(self.expr, r, theta)?.val)
    }

    /// Unit normal `X_r × X_θ` by central steps of the surface map.
    pub fn normal(&self, r: f64, theta: f64) -> Result<Vec3> {
        let hr = NORMAL_STEP * (1.0 + r);
        let ht = NORMAL_STEP;
        let xr = (self.point(r + hr, theta)?.to_vec() - self.point(r - hr, theta)?.to_vec()) / (2.0 * hr);
        let xt = (self.point(r, theta + ht)?.to_vec() - self.point(r, theta - ht)?.to_vec()) / (2.0 * ht);
        let cross = xr.cross(&xt);
        let norm = cross.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::DegenerateChart);
        }
        Ok(cross / norm)
    }

    /// Gauss map at `(r, θ)` with the normal flipped by `orientation` (±1).
    pub fn gauss_map(&self, r: f64, theta: f64, orientation: f64) -> Result<Complex64> {
        let n = self.normal(r, theta)? * orientation;
        hyperbolic_gauss_map(&self.point(r, theta)?, &n)
    }

    /// Normalized Cauchy–Riemann residual of `τ ↦ G(X(τ))` at `(r, θ)`.
    ///
    /// In polar parameters a map `w` is holomorphic iff `∂_θ w = i r ∂_r w`.
    /// The residual is divided by `|∂_θ ref| + r|∂_r ref|`, the same
    /// quantity computed for the reference map.
    pub fn conformality_residual(
        &self,
        r: f64,
        theta: f64,
        orientation: f64,
        reference: &dyn Fn(f64, f64) -> Result<Complex64>,
    ) -> Result<f64> {
        let hr = CR_STEP * (1.0 + r);
        let ht = CR_STEP;
        let w = |rr: f64, tt: f64| self.gauss_map(rr, tt, orientation);
        let wr = (w(r + hr, theta)? - w(r - hr, theta)?) / (2.0 * hr);
        let wt = (w(r, theta + ht)? - w(r, theta - ht)?) / (2.0 * ht);
        let fr = (reference(r + hr, theta)? - reference(r - hr, theta)?) / (2.0 * hr);
        let ft = (reference(r, theta + ht)? - reference(r, theta - ht)?) / (2.0 * ht);
        let scale = ft.norm() + r * fr.norm();
        if !(scale > 0.0) {
            return Err(Error::DegenerateChart);
        }
        Ok((wt - Complex64::i() * r * wr).norm() / scale)
    }
}

/// Interior nodes usable for verification: full stencil of non-holes and a
/// rank-2 Jacobian.
fn usable_nodes(g: &SurfaceGrid, stencil: Stencil) -> Vec<(usize, usize)> {
    let d = &g.domain;
    let k = stencil.reach();
    (k..d.n_r.saturating_sub(k))
        .flat_map(|i| (k..d.n_theta.saturating_sub(k)).map(move |j| (i, j)))
        .filter(|&(i, j)| has_full_rank(g, i, j) == Some(true))
        .collect()
}

fn require_surface(g: &SurfaceGrid) -> Result<()> {
    match degeneracy_classify(g)? {
        Degeneracy::PointDegenerate { .. } => Err(Error::EmptyGrid),
        _ => Ok(()),
    }
}

/// Largest `|H_hyp − 1|` over usable interior nodes.
pub fn max_mean_curvature_deviation(g: &SurfaceGrid, stencil: Stencil) -> Result<f64> {
    require_surface(g)?;
    let devs: Vec<f64> = usable_nodes(g, stencil)
        .par_iter()
        .filter_map(|&(i, j)| {
            let fs = fundamental_forms(g, i, j, stencil).ok()?;
            let z = g.get(i, j)?.z;
            Some((hyperbolic_mean_curvature(&fs, z) - 1.0).abs())
        })
        .collect();
    if devs.is_empty() {
        return Err(Error::EmptyGrid);
    }
    Ok(devs.into_iter().fold(0.0, f64::max))
}

/// Largest normalized Cauchy–Riemann residual of the Gauss-map
/// correspondence over usable interior nodes.
pub fn conformality_defect(
    g: &SurfaceGrid,
    sampler: &SurfaceSampler<'_>,
    reference: &(dyn Fn(f64, f64) -> Result<Complex64> + Sync),
    stencil: Stencil,
) -> Result<f64> {
    require_surface(g)?;
    let d = g.domain;
    let residuals: Vec<f64> = usable_nodes(g, stencil)
        .par_iter()
        .filter_map(|&(i, j)| {
            let fs = fundamental_forms(g, i, j, stencil).ok()?;
            let orientation = node_orientation(sampler, &fs, g.get(i, j)?.z, d.r(i), d.theta(j)).ok()?;
            sampler
                .conformality_residual(d.r(i), d.theta(j), orientation, reference)
                .ok()
        })
        .collect();
    if residuals.is_empty() {
        return Err(Error::EmptyGrid);
    }
    Ok(residuals.into_iter().fold(0.0, f64::max))
}

/// Sign (±1) that turns the sampler's normal at a node into the CMC-1
/// orientation, the one with `H_hyp ≥ 0`.
fn node_orientation(sampler: &SurfaceSampler<'_>, fs: &FormsSample, z: f64, r: f64, theta: f64) -> Result<f64> {
    let cmc_sign = fs.signed_hyperbolic_mean_curvature(z).signum();
    let fine = sampler.normal(r, theta)?;
    let agree = fine.dot(&fs.normal).signum();
    Ok(cmc_sign * agree)
}

/// Tolerances for the pass/fail checks of a verification run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub mean_curvature: f64,
    pub gauss_map: f64,
    pub conformality: f64,
    pub route_equivalence: f64,
    pub determinant: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            mean_curvature: 5e-4,
            gauss_map: 1e-6,
            conformality: 1e-4,
            route_equivalence: 1e-9,
            determinant: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &str, max_residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            max_residual,
            tolerance,
            pass: max_residual < tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub grid_id: String,
    pub max_mean_curvature_deviation: f64,
    pub max_gauss_residual: f64,
    pub max_conformality_defect: f64,
    pub holes: usize,
    /// Interior nodes that entered the maxima.
    pub nodes_checked: usize,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

struct NodeResult {
    h_dev: f64,
    gauss: f64,
    conformality: f64,
}

/// Runs the mean-curvature, Gauss-map and conformality checks on `g`,
/// which must have been sampled from `e`.
pub fn verify_grid(g: &SurfaceGrid, e: &Expr, tol: &Tolerances, stencil: Stencil) -> Result<VerificationReport> {
    require_surface(g)?;
    let sampler = SurfaceSampler {
        expr: e,
        method: g.method,
    };
    let reference = |r: f64, t: f64| sampler.function(r, t);
    let d = g.domain;
    let results: Vec<NodeResult> = usable_nodes(g, stencil)
        .par_iter()
        .filter_map(|&(i, j)| {
            let p = g.get(i, j)?;
            let fs = fundamental_forms(g, i, j, stencil).ok()?;
            let (r, theta) = (d.r(i), d.theta(j));
            let orientation = node_orientation(&sampler, &fs, p.z, r, theta).ok()?;
            let gauss = sampler.gauss_map(r, theta, orientation).ok()?;
            let f = sampler.function(r, theta).ok()?;
            let conformality = sampler.conformality_residual(r, theta, orientation, &reference).ok()?;
            Some(NodeResult {
                h_dev: (hyperbolic_mean_curvature(&fs, p.z) - 1.0).abs(),
                gauss: (gauss - f).norm(),
                conformality,
            })
        })
        .collect();
    if results.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let max = |f: fn(&NodeResult) -> f64| results.iter().map(f).fold(0.0, f64::max);
    let (h, gauss, conf) = (max(|n| n.h_dev), max(|n| n.gauss), max(|n| n.conformality));
    Ok(VerificationReport {
        grid_id: format!("{}:{}", g.method, e),
        max_mean_curvature_deviation: h,
        max_gauss_residual: gauss,
        max_conformality_defect: conf,
        holes: g.hole_count(),
        nodes_checked: results.len(),
        checks: vec![
            Check::new("mean_curvature", h, tol.mean_curvature),
            Check::new("gauss_map", gauss, tol.gauss_map),
            Check::new("conformality", conf, tol.conformality),
        ],
    })
}

/// Largest distance between corresponding non-hole nodes of two grids over
/// the same domain.
pub fn route_deviation(a: &SurfaceGrid, b: &SurfaceGrid) -> Result<f64> {
    if a.domain != b.domain {
        return Err(Error::InvalidDomain("grids cover different domains".into()));
    }
    let mut worst: Option<f64> = None;
    for (p, q) in a.nodes().iter().zip(b.nodes()) {
        if let (Some(p), Some(q)) = (p, q) {
            worst = Some(worst.unwrap_or(0.0).max(p.distance(*q)));
        }
    }
    worst.ok_or(Error::EmptyGrid)
}
