//! Built-in example surfaces.

use std::f64::consts::TAU;

use crate::grid::Domain;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub expression: &'static str,
    /// Single-sheet annulus used for verification runs.
    pub domain: Domain,
    /// Domain used for gallery meshes.
    pub gallery_domain: Domain,
}

const N: usize = 64;

/// `tau^2` (catenoid cousin), `log(tau)` (ruled), `exp(tau)`, `tau^3+tau`.
///
/// Annuli keep clear of zeros of `f′` (`τ³+τ` has them on `|τ| = 1/√3`).
/// `exp(tau)` oscillates quickly in θ for larger radii, so its annulus is
/// narrower.
pub const CATALOG: [CatalogEntry; 4] = [
    CatalogEntry {
        name: "catenoid_cousin",
        expression: "tau^2",
        domain: annulus(0.5, 2.0),
        gallery_domain: annulus(0.5, 2.0),
    },
    CatalogEntry {
        name: "ruled",
        expression: "log(tau)",
        domain: annulus(0.5, 2.0),
        gallery_domain: Domain {
            theta_max: 2.0 * TAU,
            n_theta: 2 * N,
            ..annulus(0.5, 2.0)
        },
    },
    CatalogEntry {
        name: "exp",
        expression: "exp(tau)",
        domain: annulus(0.5, 1.0),
        gallery_domain: annulus(0.5, 1.0),
    },
    CatalogEntry {
        name: "cubic",
        expression: "tau^3+tau",
        domain: annulus(0.8, 2.0),
        gallery_domain: annulus(0.8, 2.0),
    },
];

const fn annulus(r_min: f64, r_max: f64) -> Domain {
    Domain {
        r_min,
        r_max,
        theta_min: 0.0,
        theta_max: TAU,
        n_r: N,
        n_theta: N,
    }
}

pub fn find(name: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|c| c.name == name)
}
