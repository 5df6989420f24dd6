//! Convex hulls of integer point sets with exact predicates.
//!
//! Coordinates must satisfy `|x| <= 2^31` so that every determinant fits in
//! an `i128`. [`to_grid`] produces such coordinates from floats.

use std::collections::HashMap;

use num_integer::Integer;

use super::NormError;

/// Largest absolute grid coordinate produced by [`to_grid`].
pub const GRID_BOUND: f64 = (1u64 << 30) as f64;

/// Rounds points onto the integer grid `Z^d / scale`, with `scale` a power of
/// two chosen so that all coordinates stay below [`GRID_BOUND`].
pub fn to_grid(points: &[Vec<f64>]) -> (Vec<Vec<i64>>, f64) {
    let m = points.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    let scale = if m == 0.0 { 1.0 } else { 2f64.powi((GRID_BOUND / m).log2().floor() as i32) };
    let grid = points
        .iter()
        .map(|p| p.iter().map(|v| (v * scale).round() as i64).collect())
        .collect();
    (grid, scale)
}

fn cross2(o: &[i64], a: &[i64], b: &[i64]) -> i128 {
    (a[0] - o[0]) as i128 * (b[1] - o[1]) as i128 - (a[1] - o[1]) as i128 * (b[0] - o[0]) as i128
}

/// Indices of the hull vertices in counter-clockwise order, collinear points
/// dropped. Fewer than three output vertices means the input is degenerate.
pub fn hull2(points: &[Vec<i64>]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| points[a].cmp(&points[b]));
    idx.dedup_by(|a, b| points[*a] == points[*b]);
    if idx.len() < 3 {
        return idx;
    }
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2
            && cross2(&points[lower[lower.len() - 2]], &points[lower[lower.len() - 1]], &points[i]) <= 0
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2
            && cross2(&points[upper[upper.len() - 2]], &points[upper[upper.len() - 1]], &points[i]) <= 0
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn sub3(a: &[i64], b: &[i64]) -> [i128; 3] {
    [(a[0] - b[0]) as i128, (a[1] - b[1]) as i128, (a[2] - b[2]) as i128]
}

fn cross3(u: [i128; 3], v: [i128; 3]) -> [i128; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

fn orient3(a: &[i64], b: &[i64], c: &[i64], p: &[i64]) -> i128 {
    let n = cross3(sub3(b, a), sub3(c, a));
    let w = sub3(p, a);
    n[0] * w[0] + n[1] * w[1] + n[2] * w[2]
}

/// Triangulated hull of a full-dimensional 3D point set. Each triangle is
/// oriented so that its right-hand normal points outward.
pub fn hull3(points: &[Vec<i64>]) -> Result<Vec<[usize; 3]>, NormError> {
    let n = points.len();
    let degenerate = || NormError::Degenerate("points do not span three dimensions".into());
    if n < 4 {
        return Err(degenerate());
    }
    let a = 0;
    let b = (1..n).find(|&i| points[i] != points[a]).ok_or_else(degenerate)?;
    let c = (1..n)
        .find(|&i| cross3(sub3(&points[b], &points[a]), sub3(&points[i], &points[a])) != [0, 0, 0])
        .ok_or_else(degenerate)?;
    let dd = (1..n)
        .find(|&i| orient3(&points[a], &points[b], &points[c], &points[i]) != 0)
        .ok_or_else(degenerate)?;
    let mut faces: Vec<Option<[usize; 3]>> = Vec::new();
    let init = if orient3(&points[a], &points[b], &points[c], &points[dd]) < 0 {
        [[a, b, c], [a, dd, b], [b, dd, c], [c, dd, a]]
    } else {
        [[a, c, b], [a, b, dd], [b, c, dd], [c, a, dd]]
    };
    faces.extend(init.iter().map(|f| Some(*f)));
    // directed edge -> face that contains it
    let mut edge_face: HashMap<(usize, usize), usize> = HashMap::new();
    for (fi, f) in init.iter().enumerate() {
        for k in 0..3 {
            edge_face.insert((f[k], f[(k + 1) % 3]), fi);
        }
    }
    for p in 0..n {
        if p == a || p == b || p == c || p == dd {
            continue;
        }
        let visible: Vec<usize> = faces
            .iter()
            .enumerate()
            .filter_map(|(fi, f)| {
                f.filter(|t| orient3(&points[t[0]], &points[t[1]], &points[t[2]], &points[p]) > 0)
                    .map(|_| fi)
            })
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut is_visible = vec![false; faces.len()];
        for &fi in &visible {
            is_visible[fi] = true;
        }
        let mut horizon = Vec::new();
        for &fi in &visible {
            let t = faces[fi].expect("live face");
            for k in 0..3 {
                let (u, v) = (t[k], t[(k + 1) % 3]);
                let other = edge_face[&(v, u)];
                if !is_visible[other] {
                    horizon.push((u, v));
                }
            }
        }
        for &fi in &visible {
            let t = faces[fi].take().expect("live face");
            for k in 0..3 {
                edge_face.remove(&(t[k], t[(k + 1) % 3]));
            }
        }
        for (u, v) in horizon {
            let fi = faces.len();
            faces.push(Some([u, v, p]));
            edge_face.insert((u, v), fi);
            edge_face.insert((v, p), fi);
            edge_face.insert((p, u), fi);
        }
    }
    Ok(faces.into_iter().flatten().collect())
}

/// A planar hull face: `normal . x = offset` on the grid, `normal` primitive,
/// vertices in counter-clockwise order seen from outside.
#[derive(Clone, Debug)]
pub struct HullFace {
    pub normal: [i128; 3],
    pub offset: i128,
    pub vertices: Vec<usize>,
    /// A non-degenerate triangle of the face.
    pub triangle: [usize; 3],
}

/// Groups hull triangles lying in a common plane into polygonal faces.
pub fn merge_coplanar(points: &[Vec<i64>], triangles: &[[usize; 3]]) -> Vec<HullFace> {
    let mut by_plane: Vec<HullFace> = Vec::new();
    let mut index: HashMap<([i128; 3], i128), usize> = HashMap::new();
    for t in triangles {
        let nrm = cross3(sub3(&points[t[1]], &points[t[0]]), sub3(&points[t[2]], &points[t[0]]));
        let p0 = &points[t[0]];
        let off = nrm[0] * p0[0] as i128 + nrm[1] * p0[1] as i128 + nrm[2] * p0[2] as i128;
        let g = nrm.iter().fold(off.abs(), |g, &x| g.gcd(&x.abs()));
        let key = ([nrm[0] / g, nrm[1] / g, nrm[2] / g], off / g);
        match index.get(&key) {
            Some(&fi) => {
                let f = &mut by_plane[fi];
                for &v in t {
                    if !f.vertices.contains(&v) {
                        f.vertices.push(v);
                    }
                }
            }
            None => {
                index.insert(key, by_plane.len());
                by_plane.push(HullFace { normal: key.0, offset: key.1, vertices: t.to_vec(), triangle: *t });
            }
        }
    }
    for f in &mut by_plane {
        order_face(points, f);
    }
    by_plane
}

fn order_face(points: &[Vec<i64>], f: &mut HullFace) {
    let pts: Vec<[f64; 3]> = f
        .vertices
        .iter()
        .map(|&v| [points[v][0] as f64, points[v][1] as f64, points[v][2] as f64])
        .collect();
    let k = pts.len() as f64;
    let c = [0, 1, 2].map(|i| pts.iter().map(|p| p[i]).sum::<f64>() / k);
    let n = f.normal.map(|x| x as f64);
    let e1 = {
        let v = [pts[0][0] - c[0], pts[0][1] - c[1], pts[0][2] - c[2]];
        let l = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        v.map(|x| x / l)
    };
    let e2 = [n[1] * e1[2] - n[2] * e1[1], n[2] * e1[0] - n[0] * e1[2], n[0] * e1[1] - n[1] * e1[0]];
    let mut keyed: Vec<(f64, usize)> = f
        .vertices
        .iter()
        .zip(&pts)
        .map(|(&v, p)| {
            let w = [p[0] - c[0], p[1] - c[1], p[2] - c[2]];
            let x = w[0] * e1[0] + w[1] * e1[1] + w[2] * e1[2];
            let y = w[0] * e2[0] + w[1] * e2[1] + w[2] * e2[2];
            (y.atan2(x), v)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    f.vertices = keyed.into_iter().map(|(_, v)| v).collect();
}
