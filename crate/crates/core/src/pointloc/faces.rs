//! Face extraction for a validated subdivision.
//!
//! Every undirected edge contributes two half-edges. Sorting the outgoing
//! half-edges of each vertex counterclockwise by exact angle gives the
//! planar embedding; following "reverse, then one step clockwise" traces
//! each face boundary with its interior on the left. Inner faces come out
//! counterclockwise (positive area), the single outer boundary clockwise.

use num_traits::Zero;

use crate::pointloc::geom::{compare_directions, polygon_area2, Pt};
use crate::pointloc::subdivision::Subdivision;

/// One traced face boundary: the vertex cycle, in traversal order.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceCycle {
    pub vertices: Vec<usize>,
    /// Twice the signed area of the cycle (negative = the outer boundary).
    pub area2: crate::scalar::Rat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Faces {
    /// Counterclockwise inner-face cycles, in discovery order.
    pub inner: Vec<FaceCycle>,
    /// The clockwise outer boundary.
    pub outer: FaceCycle,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FaceError {
    #[error("face boundary through vertex {v} has zero area (collinear)")]
    CollapsedFace { v: usize },
    #[error("expected exactly one outer boundary, found {count}")]
    OuterMismatch { count: usize },
}

/// Trace all face cycles of the subdivision.
pub fn extract_faces(sub: &Subdivision) -> Result<Faces, FaceError> {
    let n = sub.vertices.len();
    // half-edge h = 2e (lo→hi) or 2e+1 (hi→lo)
    let he_count = sub.edges.len() * 2;
    let source = |h: usize| -> usize {
        let (lo, hi) = sub.edges[h / 2];
        if h % 2 == 0 {
            lo
        } else {
            hi
        }
    };
    let target = |h: usize| -> usize {
        let (lo, hi) = sub.edges[h / 2];
        if h % 2 == 0 {
            hi
        } else {
            lo
        }
    };
    // outgoing half-edges per vertex, sorted CCW by direction
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for h in 0..he_count {
        outgoing[source(h)].push(h);
    }
    let dir = |h: usize| -> (crate::scalar::Rat, crate::scalar::Rat) {
        let s = &sub.vertices[source(h)];
        let t = &sub.vertices[target(h)];
        (&t.0 - &s.0, &t.1 - &s.1)
    };
    for list in &mut outgoing {
        list.sort_by(|&a, &b| compare_directions(&dir(a), &dir(b)));
    }
    // position of each half-edge inside its source's ring
    let mut ring_pos = vec![0usize; he_count];
    for list in &outgoing {
        for (i, &h) in list.iter().enumerate() {
            ring_pos[h] = i;
        }
    }
    let twin = |h: usize| -> usize { h ^ 1 };
    // next half-edge along the face with interior on the left: the
    // clockwise predecessor of the twin in the target vertex's ring
    let next = |h: usize| -> usize {
        let t = twin(h);
        let ring = &outgoing[source(t)];
        let i = ring_pos[t];
        ring[(i + ring.len() - 1) % ring.len()]
    };

    let mut visited = vec![false; he_count];
    let mut inner = Vec::new();
    let mut outers = Vec::new();
    for start in 0..he_count {
        if visited[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut h = start;
        loop {
            visited[h] = true;
            cycle.push(source(h));
            h = next(h);
            if h == start {
                break;
            }
        }
        let poly: Vec<Pt> = cycle.iter().map(|&v| sub.vertices[v].clone()).collect();
        let area2 = polygon_area2(&poly);
        let face = FaceCycle {
            vertices: cycle,
            area2: area2.clone(),
        };
        if area2.is_zero() {
            return Err(FaceError::CollapsedFace {
                v: face.vertices[0],
            });
        }
        if area2 < crate::scalar::Rat::zero() {
            outers.push(face);
        } else {
            inner.push(face);
        }
    }
    if outers.len() != 1 {
        return Err(FaceError::OuterMismatch {
            count: outers.len(),
        });
    }
    Ok(Faces {
        inner,
        outer: outers.into_iter().next().expect("checked"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointloc::subdivision::{ingest, square_with_diagonal};
    use crate::scalar::Rat;

    fn v(x: i64, y: i64) -> Pt {
        (Rat::from_integer(x.into()), Rat::from_integer(y.into()))
    }

    #[test]
    fn square_with_diagonal_has_two_inner_faces() {
        let sub = square_with_diagonal();
        let faces = extract_faces(&sub).unwrap();
        assert_eq!(faces.inner.len(), 2);
        // the two triangles each have area 1/2 (area2 = 1)
        for f in &faces.inner {
            assert_eq!(f.vertices.len(), 3);
            assert_eq!(f.area2, Rat::from_integer(1.into()));
        }
        // outer boundary walks the square clockwise: area2 = −2
        assert_eq!(faces.outer.area2, Rat::from_integer((-2).into()));
        assert_eq!(faces.outer.vertices.len(), 4);
    }

    #[test]
    fn single_triangle_one_face() {
        let sub = ingest(
            vec![v(0, 0), v(4, 0), v(0, 4)],
            vec![(0, 1), (1, 2), (2, 0)],
            None,
        )
        .unwrap();
        let faces = extract_faces(&sub).unwrap();
        assert_eq!(faces.inner.len(), 1);
        assert_eq!(faces.inner[0].vertices.len(), 3);
        assert_eq!(faces.outer.vertices.len(), 3);
    }

    #[test]
    fn nested_structure_counts_faces() {
        // a triangle subdivided by an interior vertex connected to all corners
        let sub = ingest(
            vec![v(0, 0), v(6, 0), v(0, 6), v(2, 2)],
            vec![(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)],
            None,
        )
        .unwrap();
        let faces = extract_faces(&sub).unwrap();
        assert_eq!(faces.inner.len(), 3);
        let total: Rat = faces.inner.iter().map(|f| f.area2.clone()).sum();
        assert_eq!(total, Rat::from_integer(36.into())); // 6·6/2 · 2
    }
}
