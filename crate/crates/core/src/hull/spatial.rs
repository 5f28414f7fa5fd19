//! Three-dimensional convex hulls by randomized incremental construction with
//! conflict lists.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{GeoError, Result};

const PLANE_EPS: f64 = 1e-12;

#[inline]
fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Outward unit normal and offset of the plane through `a, b, c` (counter-clockwise seen from outside).
pub fn plane(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> ([f64; 3], f64) {
    let n = cross(sub(b, a), sub(c, a));
    let l = norm(n);
    let n = [n[0] / l, n[1] / l, n[2] / l];
    (n, dot(n, a))
}

/// Hull output: triangles index into the input slice and are oriented
/// counter-clockwise when seen from outside.
#[derive(Clone, Debug)]
pub struct Hull3 {
    pub vertices: Vec<usize>,
    pub faces: Vec<[usize; 3]>,
}

struct Face {
    v: [usize; 3],
    nb: [usize; 3],
    normal: [f64; 3],
    offset: f64,
    alive: bool,
    conflicts: Vec<u32>,
}

impl Face {
    fn new(pts: &[[f64; 3]], v: [usize; 3]) -> Face {
        let (normal, offset) = plane(pts[v[0]], pts[v[1]], pts[v[2]]);
        Face {
            v,
            nb: [usize::MAX; 3],
            normal,
            offset,
            alive: true,
            conflicts: Vec::new(),
        }
    }

    #[inline]
    fn sees(&self, p: [f64; 3]) -> bool {
        dot(self.normal, p) - self.offset > PLANE_EPS
    }
}

fn affine_rank(pts: &[[f64; 3]]) -> (usize, [usize; 4]) {
    let mut idx = [0usize; 4];
    let i0 = (0..pts.len())
        .min_by(|&i, &j| pts[i][0].total_cmp(&pts[j][0]).then(i.cmp(&j)))
        .unwrap_or(0);
    idx[0] = i0;
    let far = |score: &dyn Fn([f64; 3]) -> f64| -> (usize, f64) {
        let mut best = (0, -1.0);
        for (i, &p) in pts.iter().enumerate() {
            let s = score(p);
            if s > best.1 {
                best = (i, s);
            }
        }
        best
    };
    let p0 = pts[i0];
    let (i1, d1) = far(&|p| norm(sub(p, p0)));
    if d1 <= PLANE_EPS {
        return (0, idx);
    }
    idx[1] = i1;
    let e = sub(pts[i1], p0);
    let (i2, d2) = far(&|p| norm(cross(e, sub(p, p0))) / d1);
    if d2 <= PLANE_EPS {
        return (1, idx);
    }
    idx[2] = i2;
    let n = cross(e, sub(pts[i2], p0));
    let nl = norm(n);
    let (i3, d3) = far(&|p| (dot(n, sub(p, p0)) / nl).abs());
    if d3 <= PLANE_EPS {
        return (2, idx);
    }
    idx[3] = i3;
    (3, idx)
}

/// Convex hull of a point set in `R^3`.
///
/// Insertion order is a fixed pseudo-random permutation, so the result depends
/// only on the input.
pub fn hull(pts: &[[f64; 3]]) -> Result<Hull3> {
    if pts.iter().flatten().any(|x| !x.is_finite()) {
        return Err(GeoError::InvalidInput("non-finite chart coordinate".into()));
    }
    if pts.len() < 4 {
        let (rank, _) = if pts.is_empty() { (0, [0; 4]) } else { affine_rank(pts) };
        return Err(GeoError::DegenerateHull { rank, required: 3 });
    }
    let (rank, init) = affine_rank(pts);
    if rank < 3 {
        return Err(GeoError::DegenerateHull { rank, required: 3 });
    }

    let mut faces: Vec<Face> = Vec::with_capacity(8 * pts.len());
    let inside = {
        let mut c = [0.0; 3];
        for &i in &init {
            for k in 0..3 {
                c[k] += 0.25 * pts[i][k];
            }
        }
        c
    };
    for skip in 0..4 {
        let mut v = [0usize; 3];
        let mut k = 0;
        for (j, &i) in init.iter().enumerate() {
            if j != skip {
                v[k] = i;
                k += 1;
            }
        }
        let mut f = Face::new(pts, v);
        if dot(f.normal, inside) - f.offset > 0.0 {
            f = Face::new(pts, [v[0], v[2], v[1]]);
        }
        faces.push(f);
    }
    link_initial(&mut faces);

    let mut order: Vec<usize> = (0..pts.len()).filter(|i| !init.contains(i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_4a11 ^ pts.len() as u64);
    order.shuffle(&mut rng);

    let mut point_conflicts: Vec<Vec<u32>> = vec![Vec::new(); pts.len()];
    for &p in &order {
        for (fi, f) in faces.iter_mut().enumerate() {
            if f.sees(pts[p]) {
                f.conflicts.push(p as u32);
                point_conflicts[p].push(fi as u32);
            }
        }
    }

    let mut done = vec![false; pts.len()];
    for &i in &init {
        done[i] = true;
    }
    let mut visible_stamp: Vec<usize> = vec![usize::MAX; faces.len()];
    let mut seen_stamp: Vec<usize> = vec![usize::MAX; pts.len()];
    let mut visible: Vec<usize> = Vec::new();
    let mut horizon: Vec<(usize, usize, usize, usize)> = Vec::new();

    for &p in &order {
        done[p] = true;
        visible.clear();
        for &fi in &point_conflicts[p] {
            let fi = fi as usize;
            if faces[fi].alive {
                visible.push(fi);
            }
        }
        point_conflicts[p] = Vec::new();
        if visible.is_empty() {
            continue;
        }
        for &fi in &visible {
            visible_stamp[fi] = p;
        }
        // Horizon edges (a, b) belong to a visible face whose neighbour across them is hidden.
        horizon.clear();
        for &fi in &visible {
            let f = &faces[fi];
            for e in 0..3 {
                let g = f.nb[e];
                if visible_stamp[g] != p {
                    horizon.push((f.v[e], f.v[(e + 1) % 3], fi, g));
                }
            }
        }
        let first_new = faces.len();
        let mut by_start: HashMap<usize, usize> = HashMap::with_capacity(horizon.len());
        let mut by_end: HashMap<usize, usize> = HashMap::with_capacity(horizon.len());
        for &(a, b, _, g) in &horizon {
            let id = faces.len();
            let mut nf = Face::new(pts, [a, b, p]);
            nf.nb[0] = g;
            let slot = (0..3)
                .find(|&e| faces[g].v[e] == b && faces[g].v[(e + 1) % 3] == a)
                .ok_or_else(|| GeoError::Numerical("hull adjacency lost along the horizon".into()))?;
            faces[g].nb[slot] = id;
            if by_start.insert(a, id).is_some() || by_end.insert(b, id).is_some() {
                return Err(GeoError::Numerical("horizon is not a simple cycle".into()));
            }
            faces.push(nf);
            visible_stamp.push(usize::MAX);
        }
        for id in first_new..faces.len() {
            let [a, b, _] = faces[id].v;
            let next = *by_start
                .get(&b)
                .ok_or_else(|| GeoError::Numerical("horizon is not closed".into()))?;
            let prev = *by_end
                .get(&a)
                .ok_or_else(|| GeoError::Numerical("horizon is not closed".into()))?;
            faces[id].nb[1] = next;
            faces[id].nb[2] = prev;
        }
        for (k, &(_, _, f_old, g)) in horizon.iter().enumerate() {
            let id = first_new + k;
            let mut cand = std::mem::take(&mut faces[id].conflicts);
            for src in [f_old, g] {
                for &q in &faces[src].conflicts {
                    let qu = q as usize;
                    if done[qu] || seen_stamp[qu] == id {
                        continue;
                    }
                    seen_stamp[qu] = id;
                    if faces[id].sees(pts[qu]) {
                        cand.push(q);
                        point_conflicts[qu].push(id as u32);
                    }
                }
            }
            faces[id].conflicts = cand;
        }
        for &fi in &visible {
            faces[fi].alive = false;
            faces[fi].conflicts = Vec::new();
        }
    }

    let mut out_faces = Vec::new();
    let mut is_vertex = vec![false; pts.len()];
    for f in faces.iter().filter(|f| f.alive) {
        out_faces.push(f.v);
        for &v in &f.v {
            is_vertex[v] = true;
        }
    }
    let vertices = (0..pts.len()).filter(|&i| is_vertex[i]).collect();
    Ok(Hull3 {
        vertices,
        faces: out_faces,
    })
}

fn link_initial(faces: &mut [Face]) {
    let mut edge: HashMap<(usize, usize), usize> = HashMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for e in 0..3 {
            edge.insert((f.v[e], f.v[(e + 1) % 3]), fi);
        }
    }
    for f in faces.iter_mut() {
        for e in 0..3 {
            f.nb[e] = edge[&(f.v[(e + 1) % 3], f.v[e])];
        }
    }
}
