//! Row-structured triangulation of the half cross-section
//! {r < R, α < φ < π/2} of the wedge x2 > ε|x1|, ε = tan α.
//!
//! Points are laid out in the face-aligned frame s·e_s + d·e_n with
//! e_s = (cos α, sin α) along the traction-free face and e_n its inward normal.
//! Row j sits at depth d_j and runs from the symmetry line (s = ε d_j) to the
//! arc; interior nodes use one shared sequence of offsets from the symmetry
//! line, so meshes for different R coincide away from the arc. Neighbouring
//! rows are stitched with a zipper triangulation, and the last row collapses to
//! the point where the arc meets the symmetry line.

use crate::error::{Error, Result};
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WedgeMeshSpec {
    /// ε = tan α.
    pub eps: f64,
    pub radius: f64,
    /// Element size in the tip zone.
    pub h: f64,
    /// Radius of the zone meshed at size `h`.
    pub tip_zone: f64,
    /// Geometric growth factor of consecutive element sizes beyond the tip zone.
    pub growth: f64,
    /// Size cap along the face.
    pub h_max_along: f64,
    /// Size cap in depth.
    pub h_max_depth: f64,
    pub order: usize,
}

impl WedgeMeshSpec {
    /// Quadratic elements, tip zone 10/k, growth 1.15, caps 2/k along the face
    /// and 4/k in depth.
    pub fn new(eps: f64, radius: f64, h: f64, k: f64) -> Self {
        Self {
            eps,
            radius,
            h,
            tip_zone: 10.0 / k,
            growth: 1.15,
            h_max_along: 2.0 / k,
            h_max_depth: 4.0 / k,
            order: 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::MeshGenFailure(m));
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return bad(format!("eps must be positive (got {}); eps = 0 is the half-plane", self.eps));
        }
        if self.eps >= 1.0 {
            return bad(format!("eps = {} is not a small angle", self.eps));
        }
        if !(self.radius > 0.0 && self.h > 0.0 && self.h < self.radius) {
            return bad(format!("need 0 < h < R (h = {}, R = {})", self.h, self.radius));
        }
        if !(self.growth >= 1.0 && self.growth <= 1.2) {
            return bad(format!("growth factor must lie in [1, 1.2] (got {})", self.growth));
        }
        if !(self.h_max_along >= self.h && self.h_max_depth >= self.h) {
            return bad("size caps must not be below h".into());
        }
        if !(self.order == 1 || self.order == 2) {
            return bad(format!("element order must be 1 or 2 (got {})", self.order));
        }
        Ok(())
    }
}

pub const TAG_SURFACE: u8 = 1;
pub const TAG_SYMMETRY: u8 = 2;
pub const TAG_ARC: u8 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub nodes: Vec<[f64; 2]>,
    /// Boundary tags per node (bit set of TAG_*).
    pub tags: Vec<u8>,
    /// Vertices first (counter-clockwise), then for order 2 the midpoints of
    /// edges (0,1), (1,2), (2,0).
    pub elements: Vec<Vec<usize>>,
    pub order: usize,
    pub spec: WedgeMeshSpec,
}

impl Mesh {
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn area(&self) -> f64 {
        self.elements.iter().map(|e| tri_area(&self.nodes, e[0], e[1], e[2])).sum()
    }

    /// Plain-text dump: node count, `x y tags` lines, element count, index lines.
    pub fn write_text(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "nodes {}", self.nodes.len())?;
        for (p, t) in self.nodes.iter().zip(&self.tags) {
            writeln!(out, "{:.17e} {:.17e} {}", p[0], p[1], t)?;
        }
        writeln!(out, "elements {} order {}", self.elements.len(), self.order)?;
        for e in &self.elements {
            let line: Vec<String> = e.iter().map(|i| i.to_string()).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

fn tri_area(p: &[[f64; 2]], a: usize, b: usize, c: usize) -> f64 {
    0.5 * ((p[b][0] - p[a][0]) * (p[c][1] - p[a][1]) - (p[c][0] - p[a][0]) * (p[b][1] - p[a][1]))
}

/// Offsets 0 = x₀ < x₁ < … covering at least `length`: four steps of h/2,
/// steps of h up to `zone`, then growth by `g` capped at `h_max`.
pub fn graded_offsets(length: f64, h: f64, zone: f64, g: f64, h_max: f64) -> Vec<f64> {
    let mut xs = vec![0.0];
    let mut x = 0.0;
    let mut step = 0.5 * h;
    let mut i = 0;
    while x < length {
        if i == 4 {
            step = h;
        }
        if i >= 4 && x >= zone {
            step = (step * g).min(h_max);
        }
        x += step;
        xs.push(x);
        i += 1;
    }
    xs
}

/// Positions in [0, length] from the offsets, with the final step absorbed
/// into the previous one when it would be shorter than half the local size.
fn fit_to_length(offsets: &[f64], length: f64) -> Vec<f64> {
    let mut out: Vec<f64> = offsets.iter().copied().take_while(|&x| x < length).collect();
    if out.len() >= 2 {
        let last_step = out[out.len() - 1] - out[out.len() - 2];
        if length - out[out.len() - 1] < 0.5 * last_step {
            out.pop();
        }
    }
    out.push(length);
    out
}

pub fn build_mesh(spec: &WedgeMeshSpec) -> Result<Mesh> {
    spec.validate()?;
    let (eps, r) = (spec.eps, spec.radius);
    let alpha = eps.atan();
    let (ca, sa) = (alpha.cos(), alpha.sin());
    let d_end = r * ca;
    let depths = fit_to_length(
        &graded_offsets(d_end, spec.h, spec.tip_zone, spec.growth, spec.h_max_depth),
        d_end,
    );
    let along = graded_offsets(r, spec.h, spec.tip_zone, spec.growth, spec.h_max_along);

    let mut nodes: Vec<[f64; 2]> = Vec::new();
    let mut tags: Vec<u8> = Vec::new();
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let to_xy = |s: f64, d: f64| [s * ca - d * sa, s * sa + d * ca];
    for (j, &d) in depths.iter().enumerate() {
        let last = j + 1 == depths.len();
        let s0 = eps * d;
        let s1 = if last { s0 } else { (r * r - d * d).max(0.0).sqrt() };
        let offsets: Vec<f64> = if last { vec![0.0] } else { fit_to_length(&along, s1 - s0) };
        let mut row = Vec::with_capacity(offsets.len());
        for (i, &o) in offsets.iter().enumerate() {
            let mut t = 0u8;
            if j == 0 {
                t |= TAG_SURFACE;
            }
            if i == 0 {
                t |= TAG_SYMMETRY;
            }
            if i + 1 == offsets.len() {
                t |= TAG_ARC;
            }
            let mut p = to_xy(s0 + o, d);
            if i == 0 {
                p[0] = 0.0; // exactly on the symmetry line
            }
            row.push(nodes.len());
            nodes.push(p);
            tags.push(t);
        }
        rows.push(row);
    }

    let mut tris: Vec<[usize; 3]> = Vec::new();
    for w in rows.windows(2) {
        zipper(&nodes, &w[0], &w[1], &mut tris);
    }
    for t in &tris {
        if tri_area(&nodes, t[0], t[1], t[2]) <= 0.0 {
            return Err(Error::MeshGenFailure(format!("inverted or degenerate triangle {t:?}")));
        }
    }

    let elements = if spec.order == 1 {
        tris.iter().map(|t| t.to_vec()).collect()
    } else {
        let mut mids = std::collections::HashMap::new();
        let mut elements = Vec::with_capacity(tris.len());
        for t in &tris {
            let mut e = t.to_vec();
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                let key = (a.min(b), a.max(b));
                let id = *mids.entry(key).or_insert_with(|| {
                    let (pa, pb) = (nodes[a], nodes[b]);
                    nodes.push([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]);
                    tags.push(tags[a] & tags[b]);
                    nodes.len() - 1
                });
                e.push(id);
            }
            elements.push(e);
        }
        elements
    };
    for (p, t) in nodes.iter_mut().zip(&tags) {
        if t & TAG_SYMMETRY != 0 {
            p[0] = 0.0;
        }
    }
    let mesh = Mesh { nodes, tags, elements, order: spec.order, spec: *spec };
    for t in [TAG_SURFACE, TAG_SYMMETRY, TAG_ARC] {
        if !mesh.tags.iter().any(|&x| x & t != 0) {
            return Err(Error::MeshGenFailure(format!("boundary tag {t} missing")));
        }
    }
    Ok(mesh)
}

/// Triangulate the strip between two rows ordered by increasing s.
fn zipper(nodes: &[[f64; 2]], lower: &[usize], upper: &[usize], tris: &mut Vec<[usize; 3]>) {
    let (mut i, mut j) = (0, 0);
    let s = |n: usize| nodes[n];
    let along = |p: [f64; 2], q: [f64; 2]| (q[0] - p[0]).hypot(q[1] - p[1]);
    while i + 1 < lower.len() || j + 1 < upper.len() {
        let advance_lower = if i + 1 == lower.len() {
            false
        } else if j + 1 == upper.len() {
            true
        } else {
            // pick the shorter new diagonal
            along(s(lower[i + 1]), s(upper[j])) <= along(s(lower[i]), s(upper[j + 1]))
        };
        let t = if advance_lower {
            i += 1;
            [lower[i - 1], lower[i], upper[j]]
        } else {
            j += 1;
            [lower[i], upper[j], upper[j - 1]]
        };
        let t = if tri_area(nodes, t[0], t[1], t[2]) < 0.0 { [t[0], t[2], t[1]] } else { t };
        tris.push(t);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_grade_and_cap() {
        let xs = graded_offsets(100.0, 0.1, 10.0, 1.2, 2.0);
        let steps: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        assert!((steps[0] - 0.05).abs() < 1e-15);
        assert!(steps.windows(2).all(|w| w[1] <= 1.2 * w[0] + 1e-12 || w[0] < 0.1));
        assert!(steps.iter().all(|&s| s <= 2.0 + 1e-12));
    }

    #[test]
    fn area_matches_polygon_bound() {
        let spec = WedgeMeshSpec { h: 0.5, tip_zone: 2.0, ..WedgeMeshSpec::new(0.2, 10.0, 0.5, 1.0) };
        let m = build_mesh(&spec).unwrap();
        let alpha = 0.2f64.atan();
        let sector = 0.5 * 100.0 * (std::f64::consts::FRAC_PI_2 - alpha);
        // inscribed polygon: slightly smaller than the sector
        assert!(m.area() < sector && m.area() > 0.98 * sector);
    }
}
