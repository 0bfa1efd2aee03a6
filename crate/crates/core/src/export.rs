//! Mesh, sample and report writers.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::bianchi::HalfSpacePoint;
use crate::grid::{Domain, SurfaceGrid};
use crate::verify::Check;

/// Writes the grid as a Wavefront OBJ: one vertex per non-hole node
/// (row-major, 17 significant digits) and a quad for every grid cell whose
/// four corners are non-holes. Returns `(vertices, faces)`.
pub fn write_obj<W: Write>(g: &SurfaceGrid, header: &str, mut w: W) -> io::Result<(usize, usize)> {
    for line in header.lines() {
        writeln!(w, "# {line}")?;
    }
    let d = &g.domain;
    let mut index = vec![0usize; d.len()];
    let mut vertices = 0;
    for (i, j, p) in g.points() {
        vertices += 1;
        index[g.index(i, j)] = vertices;
        writeln!(w, "v {:.16e} {:.16e} {:.16e}", p.x, p.y, p.z)?;
    }
    let mut faces = 0;
    for i in 0..d.n_r - 1 {
        for j in 0..d.n_theta - 1 {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            if corners.iter().all(|&(a, b)| g.get(a, b).is_some()) {
                let [a, b, c, e] = corners.map(|(a, b)| index[g.index(a, b)]);
                writeln!(w, "f {a} {b} {c} {e}")?;
                faces += 1;
            }
        }
    }
    w.flush()?;
    Ok((vertices, faces))
}

/// Vertex positions of an OBJ file, in file order.
pub fn read_obj_vertices<R: BufRead>(r: R) -> io::Result<Vec<HalfSpacePoint>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        let mut parts = line.split_whitespace();
        if parts.next() != Some("v") {
            continue;
        }
        let coords: Vec<f64> = parts
            .map(|s| s.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
        if coords.len() < 3 {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("short vertex line: {line}"),
            ));
        }
        out.push(HalfSpacePoint::new(coords[0], coords[1], coords[2]));
    }
    Ok(out)
}

pub const CSV_HEADER: &str = "u,v,r,theta,x,y,z,method";

/// One row per non-hole node, row-major, no header.
pub fn write_csv_rows<W: Write>(g: &SurfaceGrid, mut w: W) -> io::Result<usize> {
    let d = &g.domain;
    let mut rows = 0;
    for (i, j, p) in g.points() {
        let (r, theta) = (d.r(i), d.theta(j));
        let tau = d.tau(i, j);
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            tau.re, tau.im, r, theta, p.x, p.y, p.z, g.method
        )?;
        rows += 1;
    }
    Ok(rows)
}

/// JSON report written by `verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub expression: String,
    pub domain: Domain,
    pub method: String,
    pub checks: Vec<Check>,
    pub holes: usize,
    pub timing_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl Bounds {
    pub fn of(g: &SurfaceGrid) -> Option<Self> {
        let mut it = g.points().map(|(_, _, p)| [p.x, p.y, p.z]);
        let first = it.next()?;
        let (mut min, mut max) = (first, first);
        for p in it {
            for k in 0..3 {
                min[k] = min[k].min(p[k]);
                max[k] = max[k].max(p[k]);
            }
        }
        Some(Self { min, max })
    }
}

/// One entry of `gallery.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GalleryItem {
    pub name: String,
    pub expression: String,
    pub domain: Domain,
    pub mesh: String,
    pub vertices: usize,
    pub faces: usize,
    pub holes: usize,
    pub bounds: Bounds,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gallery {
    pub surfaces: Vec<GalleryItem>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Method;

    fn grid_with_hole() -> SurfaceGrid {
        let domain = Domain::annulus(0.5, 1.0, 3, 3);
        let mut nodes: Vec<_> = (0..9)
            .map(|k| Some(HalfSpacePoint::new(k as f64 * 0.1, 1.0 / 3.0, 1.0 + k as f64)))
            .collect();
        nodes[4] = None;
        SurfaceGrid::from_nodes(domain, Method::Small, nodes).unwrap()
    }

    #[test]
    fn obj_skips_holes_and_their_cells() {
        let mut buf = Vec::new();
        let (v, f) = write_obj(&grid_with_hole(), "test", &mut buf).unwrap();
        assert_eq!((v, f), (8, 0));
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# test\n"));
        let verts = read_obj_vertices(text.as_bytes()).unwrap();
        assert_eq!(verts.len(), 8);
        assert_eq!(verts[0], HalfSpacePoint::new(0.0, 1.0 / 3.0, 1.0));
    }

    #[test]
    fn obj_faces_on_full_grid() {
        let domain = Domain::annulus(0.5, 1.0, 3, 4);
        let nodes = (0..12).map(|k| Some(HalfSpacePoint::new(k as f64, 0.0, 1.0))).collect();
        let g = SurfaceGrid::from_nodes(domain, Method::Bianchi, nodes).unwrap();
        let mut buf = Vec::new();
        assert_eq!(write_obj(&g, "", &mut buf).unwrap(), (12, 6));
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("\nf 1 5 6 2\n"));
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        assert_eq!(write_csv_rows(&grid_with_hole(), &mut buf).unwrap(), 8);
        let text = String::from_utf8(buf).unwrap();
        let first: Vec<&str> = text.lines().next().unwrap().split(',').collect();
        assert_eq!(first.len(), 8);
        assert_eq!(first[2], "0.5");
        assert_eq!(first[7], "small");
    }
}
