//! Validated planar straight-line subdivisions.
//!
//! A subdivision is a vertex list plus undirected edges between vertex
//! indices. Ingest checks the planar-straight-line-graph contract: distinct
//! vertices, well-formed edges, no crossings beyond shared endpoints, every
//! vertex on at least two edges (no open boundaries), one connected piece.
//! Crossing checks prune candidate pairs through a uniform grid over float
//! bounding boxes; only the exact rational test decides.

use std::collections::{HashMap, HashSet};

use crate::pointloc::geom::{self, Pt};
use crate::scalar::{parse_rat, Rat};

#[derive(Debug, Clone, PartialEq)]
pub struct Subdivision {
    pub vertices: Vec<Pt>,
    /// Undirected, stored with the smaller index first.
    pub edges: Vec<(usize, usize)>,
    /// Optional labels for the inner faces, applied in face-discovery order.
    pub face_labels: Option<Vec<String>>,
    /// Exact bounding box (xmin, ymin, xmax, ymax).
    pub bbox: (Rat, Rat, Rat, Rat),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IngestError {
    #[error("empty vertex list")]
    Empty,
    #[error("vertex {a} and vertex {b} are identical")]
    DuplicateVertex { a: usize, b: usize },
    #[error("edge {edge} references vertex {index}, but there are {n} vertices")]
    EdgeOutOfRange { edge: usize, index: usize, n: usize },
    #[error("edge {edge} joins vertex {v} to itself")]
    LoopEdge { edge: usize, v: usize },
    #[error("edges {a} and {b} join the same vertices")]
    DuplicateEdge { a: usize, b: usize },
    #[error("edges {a} and {b} cross beyond a shared endpoint")]
    CrossingEdges { a: usize, b: usize },
    #[error("vertex {v} has degree {degree}: face boundaries must close")]
    OpenBoundary { v: usize, degree: usize },
    #[error("subdivision is not connected (vertex {v} unreachable from vertex 0)")]
    Disconnected { v: usize },
    #[error("invalid document: {detail}")]
    BadDocument { detail: String },
}

/// Validate raw vertices and edges into a `Subdivision`.
pub fn ingest(
    vertices: Vec<Pt>,
    edges: Vec<(usize, usize)>,
    face_labels: Option<Vec<String>>,
) -> Result<Subdivision, IngestError> {
    if vertices.is_empty() {
        return Err(IngestError::Empty);
    }
    // duplicate vertices: exact, via a map keyed by the rational rendering
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (i, (x, y)) in vertices.iter().enumerate() {
        let key = format!("{x}|{y}");
        if let Some(&first) = seen.get(&key) {
            return Err(IngestError::DuplicateVertex { a: first, b: i });
        }
        seen.insert(key, i);
    }
    let n = vertices.len();
    let mut norm_edges = Vec::with_capacity(edges.len());
    let mut edge_seen: HashMap<(usize, usize), usize> = HashMap::new();
    for (e, &(i, j)) in edges.iter().enumerate() {
        if i >= n {
            return Err(IngestError::EdgeOutOfRange { edge: e, index: i, n });
        }
        if j >= n {
            return Err(IngestError::EdgeOutOfRange { edge: e, index: j, n });
        }
        if i == j {
            return Err(IngestError::LoopEdge { edge: e, v: i });
        }
        let key = (i.min(j), i.max(j));
        if let Some(&first) = edge_seen.get(&key) {
            return Err(IngestError::DuplicateEdge { a: first, b: e });
        }
        edge_seen.insert(key, e);
        norm_edges.push(key);
    }

    check_crossings(&vertices, &norm_edges)?;

    // degrees: every vertex needs ≥ 2 incident edges for closed boundaries
    let mut degree = vec![0usize; n];
    for &(i, j) in &norm_edges {
        degree[i] += 1;
        degree[j] += 1;
    }
    if let Some(v) = degree.iter().position(|&d| d < 2) {
        return Err(IngestError::OpenBoundary {
            v,
            degree: degree[v],
        });
    }

    // connectivity over the edge graph
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(i, j) in &norm_edges {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut reached = vec![false; n];
    let mut stack = vec![0usize];
    reached[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !reached[w] {
                reached[w] = true;
                stack.push(w);
            }
        }
    }
    if let Some(v) = reached.iter().position(|r| !r) {
        return Err(IngestError::Disconnected { v });
    }

    let bbox = exact_bbox(&vertices);
    Ok(Subdivision {
        vertices,
        edges: norm_edges,
        face_labels,
        bbox,
    })
}

fn exact_bbox(vertices: &[Pt]) -> (Rat, Rat, Rat, Rat) {
    let mut xmin = vertices[0].0.clone();
    let mut xmax = xmin.clone();
    let mut ymin = vertices[0].1.clone();
    let mut ymax = ymin.clone();
    for (x, y) in &vertices[1..] {
        if *x < xmin {
            xmin = x.clone();
        }
        if *x > xmax {
            xmax = x.clone();
        }
        if *y < ymin {
            ymin = y.clone();
        }
        if *y > ymax {
            ymax = y.clone();
        }
    }
    (xmin, ymin, xmax, ymax)
}

/// Pairwise non-crossing check with uniform-grid candidate pruning.
fn check_crossings(vertices: &[Pt], edges: &[(usize, usize)]) -> Result<(), IngestError> {
    if edges.len() < 2 {
        return Ok(());
    }
    // float boxes, conservatively padded inside float_bbox
    let boxes: Vec<(f64, f64, f64, f64)> = edges
        .iter()
        .map(|&(i, j)| geom::float_bbox(&[vertices[i].clone(), vertices[j].clone()]))
        .collect();
    let gx0 = boxes.iter().map(|b| b.0).fold(f64::INFINITY, f64::min);
    let gy0 = boxes.iter().map(|b| b.1).fold(f64::INFINITY, f64::min);
    let gx1 = boxes.iter().map(|b| b.2).fold(f64::NEG_INFINITY, f64::max);
    let gy1 = boxes.iter().map(|b| b.3).fold(f64::NEG_INFINITY, f64::max);
    let cells = (edges.len() as f64).sqrt().ceil().max(1.0);
    let w = ((gx1 - gx0) / cells).max(1e-9);
    let h = ((gy1 - gy0) / cells).max(1e-9);
    let cell_of = |x: f64, y: f64| -> (i64, i64) {
        (((x - gx0) / w).floor() as i64, ((y - gy0) / h).floor() as i64)
    };
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (e, b) in boxes.iter().enumerate() {
        let (cx0, cy0) = cell_of(b.0, b.1);
        let (cx1, cy1) = cell_of(b.2, b.3);
        for cx in cx0..=cx1 {
            for cy in cy0..=cy1 {
                grid.entry((cx, cy)).or_default().push(e);
            }
        }
    }
    let mut tested: HashSet<(usize, usize)> = HashSet::new();
    for bucket in grid.values() {
        for (a_pos, &ea) in bucket.iter().enumerate() {
            for &eb in &bucket[a_pos + 1..] {
                let pair = (ea.min(eb), ea.max(eb));
                if !tested.insert(pair) {
                    continue;
                }
                let (i, j) = edges[pair.0];
                let (k, l) = edges[pair.1];
                if geom::segments_conflict(
                    &vertices[i],
                    &vertices[j],
                    &vertices[k],
                    &vertices[l],
                ) {
                    return Err(IngestError::CrossingEdges {
                        a: pair.0,
                        b: pair.1,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Parse the structured-text subdivision document:
/// `{"vertices": [[x, y], ...], "edges": [[i, j], ...], "faces": [...]?}`
/// where coordinates are integers, decimal floats, or `"a/b"` strings.
pub fn parse_document(text: &str) -> Result<Subdivision, IngestError> {
    let doc: serde_json::Value = serde_json::from_str(text).map_err(|e| {
        IngestError::BadDocument {
            detail: e.to_string(),
        }
    })?;
    let obj = doc.as_object().ok_or_else(|| IngestError::BadDocument {
        detail: "top level must be an object".to_string(),
    })?;
    let vert_val = obj
        .get("vertices")
        .ok_or_else(|| IngestError::BadDocument {
            detail: "missing \"vertices\"".to_string(),
        })?;
    let edge_val = obj.get("edges").ok_or_else(|| IngestError::BadDocument {
        detail: "missing \"edges\"".to_string(),
    })?;
    let mut vertices = Vec::new();
    for (i, v) in vert_val
        .as_array()
        .ok_or_else(|| IngestError::BadDocument {
            detail: "\"vertices\" must be an array".to_string(),
        })?
        .iter()
        .enumerate()
    {
        let pair = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
            IngestError::BadDocument {
                detail: format!("vertex {i} must be a two-element array"),
            }
        })?;
        let x = coord_from_value(&pair[0]).map_err(|d| IngestError::BadDocument {
            detail: format!("vertex {i}: {d}"),
        })?;
        let y = coord_from_value(&pair[1]).map_err(|d| IngestError::BadDocument {
            detail: format!("vertex {i}: {d}"),
        })?;
        vertices.push((x, y));
    }
    let mut edges = Vec::new();
    for (e, v) in edge_val
        .as_array()
        .ok_or_else(|| IngestError::BadDocument {
            detail: "\"edges\" must be an array".to_string(),
        })?
        .iter()
        .enumerate()
    {
        let pair = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
            IngestError::BadDocument {
                detail: format!("edge {e} must be a two-element array"),
            }
        })?;
        let i = pair[0].as_u64().ok_or_else(|| IngestError::BadDocument {
            detail: format!("edge {e}: indices must be nonnegative integers"),
        })? as usize;
        let j = pair[1].as_u64().ok_or_else(|| IngestError::BadDocument {
            detail: format!("edge {e}: indices must be nonnegative integers"),
        })? as usize;
        edges.push((i, j));
    }
    let face_labels = match obj.get("faces") {
        None => None,
        Some(serde_json::Value::Array(items)) => {
            let mut labels = Vec::new();
            for item in items {
                labels.push(
                    item.as_str()
                        .ok_or_else(|| IngestError::BadDocument {
                            detail: "\"faces\" entries must be strings".to_string(),
                        })?
                        .to_string(),
                );
            }
            Some(labels)
        }
        Some(_) => {
            return Err(IngestError::BadDocument {
                detail: "\"faces\" must be an array of strings".to_string(),
            })
        }
    };
    ingest(vertices, edges, face_labels)
}

fn coord_from_value(v: &serde_json::Value) -> Result<Rat, String> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rat::from_integer(i.into()))
            } else if let Some(f) = n.as_f64() {
                Ok(crate::scalar::rat_from_f64(f)
                    .ok_or_else(|| format!("non-finite coordinate {f}"))?)
            } else {
                Err(format!("unsupported number {n}"))
            }
        }
        serde_json::Value::String(s) => {
            parse_rat(s).map_err(|e| format!("bad rational \"{s}\": {e}"))
        }
        other => Err(format!("coordinate must be a number or \"a/b\" string, got {other}")),
    }
}

/// Serialize back to the document format (rationals as `"a/b"` strings,
/// integers as plain numbers).
pub fn render_document(sub: &Subdivision) -> String {
    use num_traits::One;
    let vertices: Vec<serde_json::Value> = sub
        .vertices
        .iter()
        .map(|(x, y)| {
            let coord = |r: &Rat| -> serde_json::Value {
                if r.denom().is_one() {
                    if let Ok(i) = i64::try_from(r.numer().clone()) {
                        return serde_json::Value::from(i);
                    }
                }
                serde_json::Value::from(format!("{r}"))
            };
            serde_json::Value::Array(vec![coord(x), coord(y)])
        })
        .collect();
    let edges: Vec<serde_json::Value> = sub
        .edges
        .iter()
        .map(|&(i, j)| serde_json::Value::Array(vec![i.into(), j.into()]))
        .collect();
    let mut obj = serde_json::Map::new();
    obj.insert("vertices".to_string(), serde_json::Value::Array(vertices));
    obj.insert("edges".to_string(), serde_json::Value::Array(edges));
    if let Some(labels) = &sub.face_labels {
        obj.insert(
            "faces".to_string(),
            serde_json::Value::Array(labels.iter().map(|l| l.as_str().into()).collect()),
        );
    }
    serde_json::to_string_pretty(&serde_json::Value::Object(obj)).expect("serializable")
}

/// The unit square with one diagonal — the module's canonical example.
pub fn square_with_diagonal() -> Subdivision {
    let v = |x: i64, y: i64| (Rat::from_integer(x.into()), Rat::from_integer(y.into()));
    ingest(
        vec![v(0, 0), v(1, 0), v(1, 1), v(0, 1)],
        vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)],
        None,
    )
    .expect("canonical example is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64, y: i64) -> Pt {
        (Rat::from_integer(x.into()), Rat::from_integer(y.into()))
    }

    #[test]
    fn square_with_diagonal_ingests() {
        let sub = square_with_diagonal();
        assert_eq!(sub.vertices.len(), 4);
        assert_eq!(sub.edges.len(), 5);
        assert_eq!(
            sub.bbox,
            (
                Rat::from_integer(0.into()),
                Rat::from_integer(0.into()),
                Rat::from_integer(1.into()),
                Rat::from_integer(1.into())
            )
        );
    }

    #[test]
    fn crossing_segments_rejected() {
        let err = ingest(
            vec![v(0, 0), v(2, 2), v(0, 2), v(2, 0)],
            vec![(0, 1), (2, 3), (0, 2), (2, 1), (1, 3), (3, 0)],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, IngestError::CrossingEdges { .. }));
    }

    #[test]
    fn empty_rejected() {
        assert!(matches!(ingest(vec![], vec![], None), Err(IngestError::Empty)));
    }

    #[test]
    fn duplicate_vertex_rejected() {
        let err = ingest(
            vec![v(0, 0), v(1, 0), v(0, 0)],
            vec![(0, 1), (1, 2), (2, 0)],
            None,
        )
        .unwrap_err();
        assert_eq!(err, IngestError::DuplicateVertex { a: 0, b: 2 });
    }

    #[test]
    fn open_boundary_rejected() {
        // a dangling antenna: vertex 3 has degree 1
        let err = ingest(
            vec![v(0, 0), v(2, 0), v(1, 2), v(5, 5)],
            vec![(0, 1), (1, 2), (2, 0), (1, 3)],
            None,
        )
        .unwrap_err();
        assert_eq!(err, IngestError::OpenBoundary { v: 3, degree: 1 });
    }

    #[test]
    fn disconnected_rejected() {
        let err = ingest(
            vec![v(0, 0), v(2, 0), v(1, 2), v(10, 10), v(12, 10), v(11, 12)],
            vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, IngestError::Disconnected { .. }));
    }

    #[test]
    fn t_junction_rejected() {
        // vertex 3 sits mid-edge of (0,1) and connects upward: the edge
        // (0,1) passes through it without ending there
        let err = ingest(
            vec![v(0, 0), v(4, 0), v(2, 3), v(2, 0)],
            vec![(0, 1), (1, 2), (2, 0), (3, 2), (3, 0), (3, 1)],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, IngestError::CrossingEdges { .. }));
    }

    #[test]
    fn document_roundtrip() {
        let text = r#"{
            "vertices": [[0, 0], ["3/2", 0], [1, 1], [0, 1]],
            "edges": [[0,1],[1,2],[2,3],[3,0],[0,2]],
            "faces": ["left", "right"]
        }"#;
        let sub = parse_document(text).unwrap();
        assert_eq!(sub.vertices[1].0, parse_rat("3/2").unwrap());
        assert_eq!(sub.face_labels.as_deref().unwrap().len(), 2);
        let rendered = render_document(&sub);
        let again = parse_document(&rendered).unwrap();
        assert_eq!(again, sub);
    }

    #[test]
    fn bad_documents_reported() {
        assert!(matches!(
            parse_document("not json"),
            Err(IngestError::BadDocument { .. })
        ));
        assert!(matches!(
            parse_document(r#"{"vertices": [[0]], "edges": []}"#),
            Err(IngestError::BadDocument { .. })
        ));
        assert!(matches!(
            parse_document(r#"{"vertices": [[0,0],[1,0],[0,1]], "edges": [[0,1],[1,2],[2,9]]}"#),
            Err(IngestError::EdgeOutOfRange { .. })
        ));
    }
}
