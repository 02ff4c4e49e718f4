//! Bounding triangle and per-face triangulation.
//!
//! Every inner face is ear-clipped directly. The outer region — between the
//! subdivision's outer boundary and an enclosing triangle whose margin is
//! three times the bounding-box diameter — is triangulated by splicing the
//! outer boundary into the enclosing triangle along a bridge to its
//! rightmost vertex (the bridge cannot cross the boundary, which lies
//! entirely at smaller x), then ear-clipping the spliced polygon.


use crate::pointloc::faces::{extract_faces, FaceError};
use crate::pointloc::geom::{self, Pt};
use crate::pointloc::subdivision::Subdivision;
use crate::scalar::Rat;

/// Label index reserved for the region outside the subdivision.
pub const OUTER_LABEL: usize = 0;

/// One triangle of the refined map, counterclockwise, tagged with the face
/// it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangle {
    pub v: [usize; 3],
    pub face: usize,
}

/// The triangulated subdivision plus its enclosing triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMap {
    /// Subdivision vertices followed by the three enclosing corners.
    pub points: Vec<Pt>,
    pub triangles: Vec<Triangle>,
    /// Label table; index 0 is always the outer region.
    pub labels: Vec<String>,
    /// Number of original subdivision vertices (the rest are corners).
    pub n_input: usize,
    /// Indices of the enclosing-triangle corners.
    pub corners: [usize; 3],
    /// Input edges (smaller index first) — face boundaries for query logic.
    pub input_edges: std::collections::HashSet<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TriangulationError {
    #[error(transparent)]
    Face(#[from] FaceError),
    #[error("face {face}: boundary is degenerate (no ear found among {remaining} vertices)")]
    NoEar { face: usize, remaining: usize },
    #[error("face {face}: fewer than three boundary vertices")]
    TooSmall { face: usize },
    #[error("face label list has {given} entries for {found} inner faces")]
    LabelMismatch { given: usize, found: usize },
}

/// Ear-clip a polygon given as indices into `points`. The polygon must be
/// counterclockwise; repeated indices (bridge splices) are allowed. Returns
/// CCW triangles.
pub fn ear_clip(
    poly: &[usize],
    points: &[Pt],
    face: usize,
) -> Result<Vec<[usize; 3]>, TriangulationError> {
    if poly.len() < 3 {
        return Err(TriangulationError::TooSmall { face });
    }
    let mut ring: Vec<usize> = poly.to_vec();
    let mut out = Vec::with_capacity(ring.len().saturating_sub(2));
    while ring.len() > 3 {
        let len = ring.len();
        let mut clipped = false;
        for i in 0..len {
            let ip = ring[(i + len - 1) % len];
            let iv = ring[i];
            let inx = ring[(i + 1) % len];
            let (p, v, nx) = (&points[ip], &points[iv], &points[inx]);
            if geom::orient(p, v, nx) <= 0 {
                continue; // reflex or flat corner: not an ear
            }
            // no other ring vertex may lie inside or on the candidate ear
            // (vertices coinciding with a corner are fine — bridge copies)
            let blocked = ring.iter().any(|&iw| {
                let w = &points[iw];
                if w == p || w == v || w == nx {
                    return false;
                }
                geom::in_triangle_closed(p, v, nx, w)
            });
            if blocked {
                continue;
            }
            out.push([ip, iv, inx]);
            ring.remove(i);
            clipped = true;
            break;
        }
        if !clipped {
            return Err(TriangulationError::NoEar {
                face,
                remaining: ring.len(),
            });
        }
    }
    let (a, b, c) = (ring[0], ring[1], ring[2]);
    if geom::orient(&points[a], &points[b], &points[c]) <= 0 {
        return Err(TriangulationError::NoEar { face, remaining: 3 });
    }
    out.push([a, b, c]);
    Ok(out)
}

/// Enclosing right triangle with margin three times the bounding-box
/// diameter: legs along +x and +y from the lower-left corner.
fn enclosing_corners(bbox: &(Rat, Rat, Rat, Rat)) -> [Pt; 3] {
    let (xmin, ymin, xmax, ymax) = bbox;
    let one = Rat::from_integer(1.into());
    let diameter = (xmax - xmin) + (ymax - ymin) + &one;
    let margin = Rat::from_integer(3.into()) * &diameter;
    let ax = xmin - &margin;
    let ay = ymin - &margin;
    // leg length: twice (diameter + 2·margin) + 1 keeps the box strictly
    // below the hypotenuse
    let leg = Rat::from_integer(2.into()) * (&diameter + Rat::from_integer(2.into()) * &margin)
        + &one;
    [
        (ax.clone(), ay.clone()),
        (&ax + &leg, ay.clone()),
        (ax, &ay + &leg),
    ]
}

/// Triangulate every face and the outer region inside the enclosing
/// triangle.
pub fn bound_and_triangulate(sub: &Subdivision) -> Result<TriMap, TriangulationError> {
    let faces = extract_faces(sub)?;
    let mut labels = vec!["OUTER".to_string()];
    match &sub.face_labels {
        None => {
            for i in 0..faces.inner.len() {
                labels.push(format!("f{i}"));
            }
        }
        Some(given) => {
            if given.len() != faces.inner.len() {
                return Err(TriangulationError::LabelMismatch {
                    given: given.len(),
                    found: faces.inner.len(),
                });
            }
            labels.extend(given.iter().cloned());
        }
    }

    let n_input = sub.vertices.len();
    let mut points = sub.vertices.clone();
    let corners_pts = enclosing_corners(&sub.bbox);
    let corners = [n_input, n_input + 1, n_input + 2];
    points.extend(corners_pts);

    let mut triangles = Vec::new();
    for (fi, cycle) in faces.inner.iter().enumerate() {
        let tris = ear_clip(&cycle.vertices, &points, fi + 1)?;
        triangles.extend(tris.into_iter().map(|v| Triangle { v, face: fi + 1 }));
    }

    // outer region: splice the clockwise outer boundary into the CCW
    // enclosing triangle at its rightmost vertex
    let outer = &faces.outer.vertices;
    let bridge_from = {
        let mut best = outer[0];
        let mut best_at = 0usize;
        for (i, &cand) in outer.iter().enumerate() {
            let (cx, cy) = &points[cand];
            let (bx, by) = &points[best];
            if cx > bx || (cx == bx && cy > by) {
                best = cand;
                best_at = i;
            }
        }
        best_at
    };
    // corner B (index 1 of the enclosing triangle) has the largest x
    let mut spliced: Vec<usize> = Vec::with_capacity(outer.len() + 5);
    spliced.push(corners[0]);
    spliced.push(corners[1]);
    for k in 0..=outer.len() {
        spliced.push(outer[(bridge_from + k) % outer.len()]);
    }
    spliced.push(corners[1]);
    spliced.push(corners[2]);
    let outer_tris = ear_clip(&spliced, &points, OUTER_LABEL)?;
    triangles.extend(
        outer_tris
            .into_iter()
            .map(|v| Triangle { v, face: OUTER_LABEL }),
    );

    debug_assert!(triangles
        .iter()
        .all(|t| geom::is_ccw(&points[t.v[0]], &points[t.v[1]], &points[t.v[2]])));
    // total area check: triangles tile the enclosing triangle exactly
    debug_assert!({
        let tri_area: Rat = triangles
            .iter()
            .map(|t| {
                geom::polygon_area2(&[
                    points[t.v[0]].clone(),
                    points[t.v[1]].clone(),
                    points[t.v[2]].clone(),
                ])
            })
            .sum();
        let encl = geom::polygon_area2(&[
            points[corners[0]].clone(),
            points[corners[1]].clone(),
            points[corners[2]].clone(),
        ]);
        tri_area == encl
    });

    Ok(TriMap {
        points,
        triangles,
        labels,
        n_input,
        corners,
        input_edges: sub.edges.iter().copied().collect(),
    })
}

impl TriMap {
    pub fn triangle_points(&self, t: &Triangle) -> [Pt; 3] {
        [
            self.points[t.v[0]].clone(),
            self.points[t.v[1]].clone(),
            self.points[t.v[2]].clone(),
        ]
    }

    /// Brute-force face scan: the first triangle (in stored order) whose
    /// closed boundary contains `q` names the face; outside them all is the
    /// outer region. Returns the label index and the triangle index found.
    pub fn locate_bruteforce(&self, q: &Pt) -> (usize, Option<usize>) {
        for (i, t) in self.triangles.iter().enumerate() {
            let [a, b, c] = self.triangle_points(t);
            if geom::in_triangle_closed(&a, &b, &c, q) {
                return (t.face, Some(i));
            }
        }
        (OUTER_LABEL, None)
    }

    /// Bucketed index over the triangles for fast oracle scans. The grid
    /// only prunes candidates — containment is still decided exactly — and
    /// candidate lists preserve stored order, so results match
    /// `locate_bruteforce` on every query.
    pub fn build_grid(&self) -> TriGrid {
        let boxes: Vec<(f64, f64, f64, f64)> = self
            .triangles
            .iter()
            .map(|t| geom::float_bbox(&self.triangle_points(t)))
            .collect();
        let x0 = boxes.iter().map(|b| b.0).fold(f64::INFINITY, f64::min);
        let y0 = boxes.iter().map(|b| b.1).fold(f64::INFINITY, f64::min);
        let x1 = boxes.iter().map(|b| b.2).fold(f64::NEG_INFINITY, f64::max);
        let y1 = boxes.iter().map(|b| b.3).fold(f64::NEG_INFINITY, f64::max);
        let cells = (self.triangles.len() as f64).sqrt().ceil().max(1.0) as i64;
        let w = ((x1 - x0) / cells as f64).max(1e-9);
        let h = ((y1 - y0) / cells as f64).max(1e-9);
        let mut buckets: std::collections::HashMap<(i64, i64), Vec<u32>> =
            std::collections::HashMap::new();
        for (i, b) in boxes.iter().enumerate() {
            let cx0 = ((b.0 - x0) / w).floor() as i64;
            let cy0 = ((b.1 - y0) / h).floor() as i64;
            let cx1 = ((b.2 - x0) / w).floor() as i64;
            let cy1 = ((b.3 - y0) / h).floor() as i64;
            for cx in cx0..=cx1 {
                for cy in cy0..=cy1 {
                    buckets.entry((cx, cy)).or_default().push(i as u32);
                }
            }
        }
        TriGrid {
            x0,
            y0,
            w,
            h,
            buckets,
        }
    }

    /// Grid-pruned equivalent of `locate_bruteforce`.
    pub fn locate_bruteforce_grid(&self, grid: &TriGrid, q: &Pt) -> (usize, Option<usize>) {
        let fx = crate::scalar::rat_to_f64(&q.0);
        let fy = crate::scalar::rat_to_f64(&q.1);
        let cx = ((fx - grid.x0) / grid.w).floor() as i64;
        let cy = ((fy - grid.y0) / grid.h).floor() as i64;
        if let Some(bucket) = grid.buckets.get(&(cx, cy)) {
            for &i in bucket {
                let t = &self.triangles[i as usize];
                let [a, b, c] = self.triangle_points(t);
                if geom::in_triangle_closed(&a, &b, &c, q) {
                    return (t.face, Some(i as usize));
                }
            }
        }
        (OUTER_LABEL, None)
    }
}

/// Uniform spatial grid over triangle float boxes (see `TriMap::build_grid`).
#[derive(Debug, Clone)]
pub struct TriGrid {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
    buckets: std::collections::HashMap<(i64, i64), Vec<u32>>,
}
