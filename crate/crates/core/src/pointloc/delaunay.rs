//! Random Delaunay subdivision generator.
//!
//! Incremental insertion over exact integer arithmetic: all scaffold
//! corners sit so far outside the sample grid that they cannot fall inside
//! the circumcircle of any non-degenerate triple of sample points. Grid
//! points are integers in [0, 10^6]^2; the largest circumradius of any such
//! triple is below 2·10^18 (chord product over four times the minimum
//! half-integer area), so corners at distance ~10^20 are safely outside
//! every real circumcircle and the scaffold-free triangles form the true
//! Delaunay triangulation of the sample.
//!
//! Ties (cocircular quadruples) are resolved by "strictly inside only":
//! the result is then one valid Delaunay triangulation; downstream query
//! correctness does not depend on which diagonal a cocircular quad kept.

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use std::collections::{HashMap, HashSet};

use crate::pointloc::subdivision::{ingest, Subdivision};
use crate::scalar::Rat;

const GRID: i64 = 1_000_000;
const FAR: i64 = 100_000_000_000_000_000; // 10^17 below; scaled ×1000 in corners

type IPt = (BigInt, BigInt);

fn orient_i(a: &IPt, b: &IPt, c: &IPt) -> i32 {
    let v = (&b.0 - &a.0) * (&c.1 - &a.1) - (&b.1 - &a.1) * (&c.0 - &a.0);
    match v.sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Minus => -1,
    }
}

/// Positive when `d` lies strictly inside the circumcircle of CCW `a,b,c`.
fn incircle_i(a: &IPt, b: &IPt, c: &IPt, d: &IPt) -> i32 {
    let adx = &a.0 - &d.0;
    let ady = &a.1 - &d.1;
    let bdx = &b.0 - &d.0;
    let bdy = &b.1 - &d.1;
    let cdx = &c.0 - &d.0;
    let cdy = &c.1 - &d.1;
    let alift = &adx * &adx + &ady * &ady;
    let blift = &bdx * &bdx + &bdy * &bdy;
    let clift = &cdx * &cdx + &cdy * &cdy;
    let det = &alift * (&bdx * &cdy - &bdy * &cdx) - &blift * (&adx * &cdy - &ady * &cdx)
        + &clift * (&adx * &bdy - &ady * &bdx);
    match det.sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Minus => -1,
    }
}

struct Triangulation {
    pts: Vec<IPt>,
    /// Triangle id -> CCW vertex triple; removed triangles are None.
    tris: Vec<Option<[usize; 3]>>,
    /// Directed edge (a, b) -> triangle having that edge in CCW order.
    edge_map: HashMap<(usize, usize), usize>,
    last_created: usize,
}

impl Triangulation {
    fn new(corners: [IPt; 3]) -> Self {
        let mut t = Triangulation {
            pts: corners.to_vec(),
            tris: Vec::new(),
            edge_map: HashMap::new(),
            last_created: 0,
        };
        t.add_triangle([0, 1, 2]);
        t
    }

    fn add_triangle(&mut self, v: [usize; 3]) -> usize {
        let id = self.tris.len();
        self.tris.push(Some(v));
        for k in 0..3 {
            self.edge_map.insert((v[k], v[(k + 1) % 3]), id);
        }
        self.last_created = id;
        id
    }

    fn remove_triangle(&mut self, id: usize) {
        if let Some(v) = self.tris[id].take() {
            for k in 0..3 {
                let key = (v[k], v[(k + 1) % 3]);
                if self.edge_map.get(&key) == Some(&id) {
                    self.edge_map.remove(&key);
                }
            }
        }
    }

    fn contains(&self, tri: [usize; 3], p: &IPt) -> bool {
        let [a, b, c] = tri;
        orient_i(&self.pts[a], &self.pts[b], p) >= 0
            && orient_i(&self.pts[b], &self.pts[c], p) >= 0
            && orient_i(&self.pts[c], &self.pts[a], p) >= 0
    }

    /// Walk from the most recent triangle toward the one containing `p`.
    fn locate(&self, p: &IPt) -> usize {
        let mut cur = self.last_created;
        if self.tris[cur].is_none() {
            cur = self
                .tris
                .iter()
                .position(|t| t.is_some())
                .expect("nonempty triangulation");
        }
        let mut steps = 0usize;
        loop {
            let tri = self.tris[cur].expect("live triangle");
            let mut advanced = false;
            for k in 0..3 {
                let a = tri[k];
                let b = tri[(k + 1) % 3];
                if orient_i(&self.pts[a], &self.pts[b], p) < 0 {
                    // p is beyond edge (a,b): cross to the neighbor sharing it
                    if let Some(&next) = self.edge_map.get(&(b, a)) {
                        cur = next;
                        advanced = true;
                        break;
                    }
                }
            }
            if !advanced {
                debug_assert!(self.contains(tri, p));
                return cur;
            }
            steps += 1;
            assert!(
                steps <= self.tris.len() + 3,
                "walk failed to terminate"
            );
        }
    }

    fn insert(&mut self, p: IPt) {
        let pid = self.pts.len();
        self.pts.push(p);
        let p = self.pts[pid].clone();
        let p = &p;
        // grow the conflict region from the containing triangle
        let seed = self.locate(p);
        let mut bad: HashSet<usize> = HashSet::new();
        let mut stack = vec![seed];
        bad.insert(seed);
        while let Some(t) = stack.pop() {
            let tri = self.tris[t].expect("live triangle");
            for k in 0..3 {
                let a = tri[k];
                let b = tri[(k + 1) % 3];
                if let Some(&nb) = self.edge_map.get(&(b, a)) {
                    if bad.contains(&nb) {
                        continue;
                    }
                    let nt = self.tris[nb].expect("live triangle");
                    if incircle_i(
                        &self.pts[nt[0]],
                        &self.pts[nt[1]],
                        &self.pts[nt[2]],
                        p,
                    ) > 0
                    {
                        bad.insert(nb);
                        stack.push(nb);
                    }
                }
            }
        }
        // cavity boundary: directed edges of bad triangles whose twin is
        // outside the bad set
        let mut boundary: Vec<(usize, usize)> = Vec::new();
        for &t in &bad {
            let tri = self.tris[t].expect("live triangle");
            for k in 0..3 {
                let a = tri[k];
                let b = tri[(k + 1) % 3];
                match self.edge_map.get(&(b, a)) {
                    Some(&nb) if bad.contains(&nb) => {}
                    _ => boundary.push((a, b)),
                }
            }
        }
        for &t in &bad {
            self.remove_triangle(t);
        }
        for (a, b) in boundary {
            debug_assert!(orient_i(&self.pts[a], &self.pts[b], p) > 0);
            self.add_triangle([a, b, pid]);
        }
    }
}

/// Generate the Delaunay subdivision of `n` distinct random grid points.
/// Deterministic for a given seed. Requires `n ≥ 3`.
pub fn random_delaunay(n: usize, seed: u64) -> Subdivision {
    assert!(n >= 3, "need at least three points");
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    let mut chosen: Vec<(i64, i64)> = Vec::with_capacity(n);
    let mut used: HashSet<(i64, i64)> = HashSet::new();
    while chosen.len() < n {
        let p = (rng.random_range(0..=GRID), rng.random_range(0..=GRID));
        if used.insert(p) {
            chosen.push(p);
        }
    }
    // guard against a fully collinear draw (astronomically unlikely but
    // cheap to check for small n)
    if n <= 64 {
        let all_collinear = chosen.windows(3).all(|w| {
            let a = (BigInt::from(w[0].0), BigInt::from(w[0].1));
            let b = (BigInt::from(w[1].0), BigInt::from(w[1].1));
            let c = (BigInt::from(w[2].0), BigInt::from(w[2].1));
            orient_i(&a, &b, &c) == 0
        });
        assert!(!all_collinear, "degenerate sample: all points collinear");
    }

    let far: BigInt = BigInt::from(FAR) * BigInt::from(1000); // 10^20
    let corners = [
        (-far.clone(), -far.clone()),
        (&far * 3, -far.clone()),
        (-far.clone(), &far * 3),
    ];
    let mut t = Triangulation::new(corners);
    for &(x, y) in &chosen {
        t.insert((BigInt::from(x), BigInt::from(y)));
    }

    // keep triangles entirely among real points (ids ≥ 3), re-index to the
    // insertion order of the sample
    let mut edges: HashSet<(usize, usize)> = HashSet::new();
    for tri in t.tris.iter().flatten() {
        if tri.iter().all(|&v| v >= 3) {
            for k in 0..3 {
                let a = tri[k] - 3;
                let b = tri[(k + 1) % 3] - 3;
                edges.insert((a.min(b), a.max(b)));
            }
        }
    }
    let vertices: Vec<(Rat, Rat)> = chosen
        .iter()
        .map(|&(x, y)| {
            (
                Rat::from_integer(x.into()),
                Rat::from_integer(y.into()),
            )
        })
        .collect();
    let mut edge_list: Vec<(usize, usize)> = edges.into_iter().collect();
    edge_list.sort_unstable();
    ingest(vertices, edge_list, None).expect("generated triangulation must validate")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_delaunay_is_empty_circled() {
        let sub = random_delaunay(40, 11);
        assert_eq!(sub.vertices.len(), 40);
        // rebuild integer points
        let pts: Vec<IPt> = sub
            .vertices
            .iter()
            .map(|(x, y)| (x.numer().clone(), y.numer().clone()))
            .collect();
        // reconstruct triangles from the subdivision by re-running the
        // generator's internal machinery is circular; instead check the
        // Delaunay property on every triangle of the derived face set
        let faces = crate::pointloc::faces::extract_faces(&sub).unwrap();
        let mut checked = 0usize;
        for f in &faces.inner {
            assert_eq!(f.vertices.len(), 3, "Delaunay faces are triangles");
            let (a, b, c) = (f.vertices[0], f.vertices[1], f.vertices[2]);
            // CCW order
            let (a, b, c) = if orient_i(&pts[a], &pts[b], &pts[c]) > 0 {
                (a, b, c)
            } else {
                (a, c, b)
            };
            for (d, p) in pts.iter().enumerate() {
                if d == a || d == b || d == c {
                    continue;
                }
                assert!(
                    incircle_i(&pts[a], &pts[b], &pts[c], p) <= 0,
                    "point {d} inside circumcircle of ({a},{b},{c})"
                );
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn deterministic_under_seed() {
        let s1 = random_delaunay(60, 5);
        let s2 = random_delaunay(60, 5);
        assert_eq!(s1, s2);
        let s3 = random_delaunay(60, 6);
        assert_ne!(s1, s3);
    }

    #[test]
    fn validates_and_extracts() {
        let sub = random_delaunay(25, 3);
        let faces = crate::pointloc::faces::extract_faces(&sub).unwrap();
        // Euler: triangles = 2·n − 2 − hull for a triangulated point set
        assert!(!faces.inner.is_empty());
        assert!(faces.outer.vertices.len() >= 3);
    }
}
