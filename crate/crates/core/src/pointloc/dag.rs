//! Triangle-refinement locator: repeated independent-set coarsening.
//!
//! Round by round, an independent set of non-corner vertices of degree ≤ 8
//! is removed from the current triangulation; each removed vertex's star is
//! retriangulated, and every new triangle links to the removed triangles it
//! overlaps. The process ends at the single enclosing triangle, which
//! becomes the query root. A query walks down: at each node, the first
//! child (in stored order) whose closed triangle contains the point.

use std::collections::{HashMap, HashSet};

use crate::pointloc::geom::{self, Pt};
use crate::pointloc::triangulate::{ear_clip, TriMap, OUTER_LABEL};

/// One node: a triangle, its children (empty for leaves), and the face
/// label carried by leaves.
#[derive(Debug, Clone, PartialEq)]
pub struct DagNode {
    pub tri: [usize; 3],
    pub children: Vec<u32>,
    /// Leaf nodes carry the face they report.
    pub face: Option<usize>,
    /// Coarsening round that created the node (leaves: 0).
    pub level: u32,
}

/// Per-round bookkeeping for the decay/size invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundStats {
    pub round: usize,
    pub triangles_before: usize,
    pub triangles_after: usize,
    pub removed_vertices: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocatorDag {
    pub points: Vec<Pt>,
    pub nodes: Vec<DagNode>,
    pub root: u32,
    /// Input size the depth bound is measured against (subdivision vertices).
    pub n0: usize,
    pub labels: Vec<String>,
    /// Longest root-to-leaf chain, counted in edges.
    pub depth: usize,
    /// Largest child list in the structure.
    pub max_children: usize,
    pub rounds: Vec<RoundStats>,
}

/// Result of one query: label index plus visit accounting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocateOutcome {
    pub label: usize,
    pub node_visits: usize,
}

/// Build the locator DAG from a triangulated map.
///
/// Valid triangulations always coarsen (a non-corner vertex of degree ≤ 8
/// exists whenever any non-corner vertex remains); violations are bugs and
/// fail via assertion.
pub fn build_dag(tm: &TriMap) -> LocatorDag {
    let points = &tm.points;
    let mut nodes: Vec<DagNode> = tm
        .triangles
        .iter()
        .map(|t| DagNode {
            tri: t.v,
            children: Vec::new(),
            face: Some(t.face),
            level: 0,
        })
        .collect();
    // live triangulation: node indices of the current triangles
    let mut live: Vec<u32> = (0..nodes.len() as u32).collect();
    let corner_set: HashSet<usize> = tm.corners.iter().copied().collect();
    let mut rounds = Vec::new();
    let mut round = 0usize;

    while live.len() > 1 {
        // adjacency of the live triangulation
        let mut star: HashMap<usize, Vec<u32>> = HashMap::new();
        let mut neighbors: HashMap<usize, HashSet<usize>> = HashMap::new();
        for &ni in &live {
            let tri = nodes[ni as usize].tri;
            for k in 0..3 {
                star.entry(tri[k]).or_default().push(ni);
                neighbors
                    .entry(tri[k])
                    .or_default()
                    .extend([tri[(k + 1) % 3], tri[(k + 2) % 3]]);
            }
        }
        // greedy independent set among non-corner vertices of degree ≤ 8,
        // scanned in index order
        let mut vertices: Vec<usize> = star.keys().copied().collect();
        vertices.sort_unstable();
        let mut blocked: HashSet<usize> = HashSet::new();
        let mut selected: Vec<usize> = Vec::new();
        for &v in &vertices {
            if corner_set.contains(&v) || blocked.contains(&v) {
                continue;
            }
            let degree = neighbors[&v].len();
            if degree > 8 {
                continue;
            }
            selected.push(v);
            blocked.extend(neighbors[&v].iter().copied());
        }
        assert!(
            !selected.is_empty(),
            "no removable vertex among {} live vertices",
            vertices.len()
        );

        let before = live.len();
        let mut removed_nodes: HashSet<u32> = HashSet::new();
        let mut created: Vec<u32> = Vec::new();
        round += 1;
        for &v in &selected {
            let star_tris = &star[&v];
            // link cycle around v: each star triangle, rotated so v leads,
            // contributes the directed far edge
            let mut follow: HashMap<usize, (usize, u32)> = HashMap::new();
            for &ni in star_tris {
                let t = nodes[ni as usize].tri;
                let i = t.iter().position(|&x| x == v).expect("star triangle");
                let a = t[(i + 1) % 3];
                let b = t[(i + 2) % 3];
                follow.insert(a, (b, ni));
            }
            let start = *follow.keys().min().expect("nonempty star");
            let mut link = vec![start];
            let mut cur = follow[&start].0;
            while cur != start {
                link.push(cur);
                cur = follow[&cur].0;
            }
            assert_eq!(link.len(), star_tris.len(), "open star at vertex {v}");
            let new_tris =
                ear_clip(&link, points, OUTER_LABEL).expect("star polygon must triangulate");
            for tri in new_tris {
                let tri_pts = [
                    points[tri[0]].clone(),
                    points[tri[1]].clone(),
                    points[tri[2]].clone(),
                ];
                let children: Vec<u32> = star_tris
                    .iter()
                    .copied()
                    .filter(|&ni| {
                        let old = nodes[ni as usize].tri;
                        let old_pts = [
                            points[old[0]].clone(),
                            points[old[1]].clone(),
                            points[old[2]].clone(),
                        ];
                        geom::triangles_overlap(&tri_pts, &old_pts)
                    })
                    .collect();
                assert!(!children.is_empty(), "new triangle covers no old one");
                let id = nodes.len() as u32;
                nodes.push(DagNode {
                    tri,
                    children,
                    face: None,
                    level: round as u32,
                });
                created.push(id);
            }
            removed_nodes.extend(star_tris.iter().copied());
        }
        live.retain(|ni| !removed_nodes.contains(ni));
        live.extend(created);
        rounds.push(RoundStats {
            round,
            triangles_before: before,
            triangles_after: live.len(),
            removed_vertices: selected.len(),
        });
    }

    let root = live[0];
    {
        let rt = nodes[root as usize].tri;
        let mut sorted = rt;
        sorted.sort_unstable();
        let mut corners = tm.corners;
        corners.sort_unstable();
        assert_eq!(sorted, corners, "root must be the enclosing triangle");
    }

    // depth (in edges) and fan-out by one pass over the level-ordered nodes:
    // children always have smaller indices, so a forward scan suffices
    let mut height = vec![0usize; nodes.len()];
    let mut max_children = 0usize;
    for i in 0..nodes.len() {
        max_children = max_children.max(nodes[i].children.len());
        let h = nodes[i]
            .children
            .iter()
            .map(|&c| height[c as usize] + 1)
            .max()
            .unwrap_or(0);
        height[i] = h;
    }

    LocatorDag {
        points: points.clone(),
        nodes,
        root,
        n0: tm.n_input,
        labels: tm.labels.clone(),
        depth: height[root as usize],
        max_children,
        rounds,
    }
}

impl LocatorDag {
    fn node_points(&self, i: u32) -> [Pt; 3] {
        let t = self.nodes[i as usize].tri;
        [
            self.points[t[0]].clone(),
            self.points[t[1]].clone(),
            self.points[t[2]].clone(),
        ]
    }

    /// Walk the structure for a query point.
    pub fn locate(&self, q: &Pt) -> LocateOutcome {
        let [a, b, c] = self.node_points(self.root);
        if !geom::in_triangle_closed(&a, &b, &c, q) {
            return LocateOutcome {
                label: OUTER_LABEL,
                node_visits: 1,
            };
        }
        let mut cur = self.root;
        let mut visits = 1usize;
        loop {
            let node = &self.nodes[cur as usize];
            if node.children.is_empty() {
                return LocateOutcome {
                    label: node.face.expect("leaves carry a face"),
                    node_visits: visits,
                };
            }
            let mut next = None;
            for &ch in &node.children {
                let [a, b, c] = self.node_points(ch);
                if geom::in_triangle_closed(&a, &b, &c, q) {
                    next = Some(ch);
                    break;
                }
            }
            cur = next.expect("children cover the node triangle");
            visits += 1;
        }
    }
}
