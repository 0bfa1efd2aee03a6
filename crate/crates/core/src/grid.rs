//! Sampling the CMC-1 surface over polar grids `τ = r·e^{iθ}`.
//!
//! Radii are sampled on the closed interval `[r_min, r_max]`, angles on the
//! half-open `[θ_min, θ_max)`. Angles beyond `2π` address further sheets:
//! multivalued expressions are continued along circles (see
//! [`eval_jet_on_sheet`]).

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bianchi::{bianchi_calo_point, HalfSpacePoint};
use crate::congruence::Vec3;
use crate::error::{Error, Result};
use crate::holo::{eval_jet_on_sheet, Expr};
use crate::small::small_point;

/// Diameter below which an image counts as a single point, relative to `1 + |mean|`.
pub const POINT_DIAMETER_TOL: f64 = 1e-10;
/// Smallest-to-largest singular value ratio below which a Jacobian is rank deficient.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub r_min: f64,
    pub r_max: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub n_r: usize,
    pub n_theta: usize,
}

impl Domain {
    pub fn annulus(r_min: f64, r_max: f64, n_r: usize, n_theta: usize) -> Self {
        Self {
            r_min,
            r_max,
            theta_min: 0.0,
            theta_max: std::f64::consts::TAU,
            n_r,
            n_theta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.r_min, self.r_max, self.theta_min, self.theta_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidDomain("bounds must be finite".into()));
        }
        if !(0.0 <= self.r_min && self.r_min < self.r_max) {
            return Err(Error::InvalidDomain(format!(
                "need 0 <= r_min < r_max, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        if !(self.theta_min < self.theta_max) {
            return Err(Error::InvalidDomain(format!(
                "need theta_min < theta_max, got [{}, {})",
                self.theta_min, self.theta_max
            )));
        }
        if self.n_r < 2 || self.n_theta < 2 {
            return Err(Error::InvalidDomain("need at least 2 samples per direction".into()));
        }
        Ok(())
    }

    pub fn r_step(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n_r - 1) as f64
    }

    pub fn theta_step(&self) -> f64 {
        (self.theta_max - self.theta_min) / self.n_theta as f64
    }

    pub fn r(&self, i: usize) -> f64 {
        if i + 1 == self.n_r {
            self.r_max
        } else {
            self.r_min + i as f64 * self.r_step()
        }
    }

    pub fn theta(&self, j: usize) -> f64 {
        self.theta_min + j as f64 * self.theta_step()
    }

    pub fn tau(&self, i: usize, j: usize) -> Complex64 {
        Complex64::from_polar(self.r(i), self.theta(j))
    }

    /// The same region with half the spacing in both directions.
    pub fn refined(&self) -> Self {
        Self {
            n_r: 2 * self.n_r - 1,
            n_theta: 2 * self.n_theta,
            ..*self
        }
    }

    pub fn len(&self) -> usize {
        self.n_r * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Which construction produced a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bianchi,
    Small,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Bianchi => "bianchi",
            Method::Small => "small",
        })
    }
}

/// Surface point at the polar parameter `(r, θ)` on the continued sheet.
pub fn surface_point(e: &Expr, method: Method, r: f64, theta: f64) -> Result<HalfSpacePoint> {
    let fj = eval_jet_on_sheet(e, r, theta)?;
    let tau = Complex64::from_polar(r, theta);
    match method {
        Method::Bianchi => bianchi_calo_point(&fj, tau),
        Method::Small => small_point(&fj, tau),
    }
}

/// Row-major samples (`r` outer, `θ` inner); `None` marks a hole.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGrid {
    pub domain: Domain,
    pub method: Method,
    nodes: Vec<Option<HalfSpacePoint>>,
}

impl SurfaceGrid {
    pub fn from_nodes(domain: Domain, method: Method, nodes: Vec<Option<HalfSpacePoint>>) -> Result<Self> {
        domain.validate()?;
        if nodes.len() != domain.len() {
            return Err(Error::InvalidDomain(format!(
                "expected {} nodes, got {}",
                domain.len(),
                nodes.len()
            )));
        }
        Ok(Self { domain, method, nodes })
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.domain.n_theta + j
    }

    pub fn get(&self, i: usize, j: usize) -> Option<HalfSpacePoint> {
        self.nodes[self.index(i, j)]
    }

    pub fn nodes(&self) -> &[Option<HalfSpacePoint>] {
        &self.nodes
    }

    pub fn hole_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_none()).count()
    }

    pub fn point_count(&self) -> usize {
        self.nodes.len() - self.hole_count()
    }

    /// `(i, j, point)` for every non-hole node, row-major.
    pub fn points(&self) -> impl Iterator<Item = (usize, usize, HalfSpacePoint)> + '_ {
        let nt = self.domain.n_theta;
        self.nodes
            .iter()
            .enumerate()
            .filter_map(move |(k, p)| p.map(|p| (k / nt, k % nt, p)))
    }
}

/// Samples `method` over the domain. Nodes where `f′` vanishes or the
/// expression is singular become holes.
pub fn sample_grid(e: &Expr, domain: &Domain, method: Method) -> Result<SurfaceGrid> {
    domain.validate()?;
    let nodes: Vec<Option<HalfSpacePoint>> = (0..domain.len())
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / domain.n_theta, k % domain.n_theta);
            surface_point(e, method, domain.r(i), domain.theta(j)).ok()
        })
        .collect();
    let grid = SurfaceGrid::from_nodes(*domain, method, nodes)?;
    if grid.point_count() == 0 {
        return Err(Error::EmptyGrid);
    }
    Ok(grid)
}

pub fn bicalo_grid(e: &Expr, domain: &Domain) -> Result<SurfaceGrid> {
    sample_grid(e, domain, Method::Bianchi)
}

pub fn small_grid(e: &Expr, domain: &Domain) -> Result<SurfaceGrid> {
    sample_grid(e, domain, Method::Small)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Degeneracy {
    /// Rank-2 Jacobian at every interior node.
    Immersed,
    /// The whole image is one point (up to [`POINT_DIAMETER_TOL`]).
    PointDegenerate {
        point: HalfSpacePoint,
        diameter: f64,
    },
    Mixed,
}

/// Upper bound on the image diameter (bounding-box diagonal) and the mean point.
pub fn image_extent(g: &SurfaceGrid) -> Result<(f64, HalfSpacePoint)> {
    let mut lo = Vec3::repeat(f64::INFINITY);
    let mut hi = Vec3::repeat(f64::NEG_INFINITY);
    let mut sum = Vec3::zeros();
    let mut n = 0usize;
    for (_, _, p) in g.points() {
        let v = p.to_vec();
        lo = lo.inf(&v);
        hi = hi.sup(&v);
        sum += v;
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyGrid);
    }
    Ok(((hi - lo).norm(), HalfSpacePoint::from_vec(sum / n as f64)))
}

/// Singular values `(σ_min, σ_max)` of the 3×2 matrix `[a b]`.
pub fn singular_values(a: &Vec3, b: &Vec3) -> (f64, f64) {
    let (p, q, r) = (a.dot(a), a.dot(b), b.dot(b));
    let mean = 0.5 * (p + r);
    let disc = (0.25 * (p - r) * (p - r) + q * q).sqrt();
    let hi = mean + disc;
    // λ_min λ_max = det, which is accurate when the columns are nearly parallel
    let det = a.cross(b).norm_squared();
    let lo = if hi > 0.0 { det / hi } else { 0.0 };
    (lo.max(0.0).sqrt(), hi.max(0.0).sqrt())
}

/// Central-difference Jacobian rank test at an interior node; `None` if a
/// neighbor is missing.
pub fn has_full_rank(g: &SurfaceGrid, i: usize, j: usize) -> Option<bool> {
    let d = &g.domain;
    if i == 0 || j == 0 || i + 1 >= d.n_r || j + 1 >= d.n_theta {
        return None;
    }
    g.get(i, j)?;
    let dr = (g.get(i + 1, j)?.to_vec() - g.get(i - 1, j)?.to_vec()) / (2.0 * d.r_step());
    let dt = (g.get(i, j + 1)?.to_vec() - g.get(i, j - 1)?.to_vec()) / (2.0 * d.theta_step());
    let (lo, hi) = singular_values(&dr, &dt);
    Some(hi > 0.0 && lo > RANK_TOL * hi)
}

pub fn degeneracy_classify(g: &SurfaceGrid) -> Result<Degeneracy> {
    if g.point_count() < 4 {
        return Err(Error::EmptyGrid);
    }
    let (diameter, mean) = image_extent(g)?;
    if diameter < POINT_DIAMETER_TOL * (1.0 + mean.to_vec().norm()) {
        return Ok(Degeneracy::PointDegenerate { point: mean, diameter });
    }
    let d = &g.domain;
    let all_full = (1..d.n_r.saturating_sub(1))
        .flat_map(|i| (1..d.n_theta.saturating_sub(1)).map(move |j| (i, j)))
        .all(|(i, j)| has_full_rank(g, i, j) != Some(false));
    Ok(if all_full {
        Degeneracy::Immersed
    } else {
        Degeneracy::Mixed
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holo::parse;

    #[test]
    fn annulus_has_no_holes() {
        let g = bicalo_grid(&parse("tau^2").unwrap(), &Domain::annulus(0.5, 2.0, 8, 8)).unwrap();
        assert_eq!(g.point_count(), 64);
        assert_eq!(g.hole_count(), 0);
        assert!(g.points().all(|(_, _, p)| p.z > 0.0));
    }

    #[test]
    fn zero_of_derivative_is_a_hole() {
        let g = bicalo_grid(&parse("tau^2").unwrap(), &Domain::annulus(0.0, 1.0, 5, 6)).unwrap();
        assert_eq!(g.hole_count(), 6);
        assert!((0..6).all(|j| g.get(0, j).is_none()));
        assert!((0..6).all(|j| g.get(1, j).is_some()));
    }

    #[test]
    fn log_samples_two_sheets() {
        let domain = Domain {
            theta_max: 4.0 * std::f64::consts::PI,
            ..Domain::annulus(0.5, 2.0, 8, 16)
        };
        let g = bicalo_grid(&parse("log(tau)").unwrap(), &domain).unwrap();
        assert_eq!(g.hole_count(), 0);
        for (_, j, p) in g.points() {
            assert!((p.y - domain.theta(j)).abs() < 1e-12);
        }
    }

    #[test]
    fn all_holes_is_an_empty_grid() {
        let err = bicalo_grid(&parse("1/(tau-tau)").unwrap(), &Domain::annulus(0.5, 1.0, 3, 3)).unwrap_err();
        assert!(matches!(err, Error::EmptyGrid));
    }

    #[test]
    fn invalid_domains() {
        let e = parse("tau^2").unwrap();
        for d in [
            Domain::annulus(1.0, 0.5, 8, 8),
            Domain::annulus(-0.1, 0.5, 8, 8),
            Domain::annulus(0.5, 1.0, 1, 8),
            Domain {
                theta_max: -1.0,
                ..Domain::annulus(0.5, 1.0, 8, 8)
            },
            Domain::annulus(0.5, f64::NAN, 8, 8),
        ] {
            assert!(matches!(bicalo_grid(&e, &d), Err(Error::InvalidDomain(_))), "{d:?}");
        }
    }

    #[test]
    fn classification() {
        let d = Domain::annulus(0.5, 2.0, 16, 16);
        let affine = bicalo_grid(&parse("3*tau + (1+2i)").unwrap(), &d).unwrap();
        match degeneracy_classify(&affine).unwrap() {
            Degeneracy::PointDegenerate { point, diameter } => {
                assert!(point.distance(HalfSpacePoint::new(1.0, 2.0, 3.0)) < 1e-12);
                assert!(diameter < 1e-10);
            }
            other => panic!("{other:?}"),
        }
        for src in ["tau^2", "log(tau)"] {
            let g = bicalo_grid(&parse(src).unwrap(), &d).unwrap();
            assert_eq!(degeneracy_classify(&g).unwrap(), Degeneracy::Immersed, "{src}");
        }
    }

    #[test]
    fn classification_needs_points() {
        let mut nodes = vec![None; 9];
        nodes[4] = Some(HalfSpacePoint::new(0.0, 0.0, 1.0));
        let g = SurfaceGrid::from_nodes(Domain::annulus(0.5, 1.0, 3, 3), Method::Bianchi, nodes).unwrap();
        assert!(matches!(degeneracy_classify(&g), Err(Error::EmptyGrid)));
    }

    #[test]
    fn small_grid_of_identity_map() {
        let g = small_grid(&parse("tau").unwrap(), &Domain::annulus(0.5, 2.0, 4, 4)).unwrap();
        assert!(g.points().all(|(_, _, p)| p == HalfSpacePoint::new(0.0, 0.0, 1.0)));
    }

    #[test]
    fn singular_values_of_orthogonal_columns() {
        let (lo, hi) = singular_values(&Vec3::new(3.0, 0.0, 0.0), &Vec3::new(0.0, 2.0, 0.0));
        assert!((lo - 2.0).abs() < 1e-15 && (hi - 3.0).abs() < 1e-15);
        let (lo, _) = singular_values(&Vec3::new(1.0, 1.0, 0.0), &Vec3::new(2.0, 2.0, 0.0));
        assert_eq!(lo, 0.0);
    }
}
