//! Vertex/facet description of a polytope unit ball in dimension 1, 2 or 3,
//! obtained from the convex hull of the polar points `+-o_i / t_i`.

use super::hull::{hull2, hull3, merge_coplanar, to_grid};
use super::{dist, NormError, PolytopeNorm};

#[derive(Clone, Debug)]
pub struct ShapeFacet {
    /// Outward unit normal.
    pub normal: Vec<f64>,
    /// Support value: the facet lies in `normal . x = offset`.
    pub offset: f64,
    /// Vertex indices, cyclically ordered in dimension 3.
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct PolytopeShape {
    d: usize,
    norm: PolytopeNorm,
    vertices: Vec<Vec<f64>>,
    facets: Vec<ShapeFacet>,
}

fn solve(rows: &[Vec<f64>]) -> Vec<f64> {
    // rows . v = 1 for a square nonsingular system, Gaussian elimination with
    // partial pivoting
    let n = rows.len();
    let mut a: Vec<Vec<f64>> = rows.iter().map(|r| {
        let mut r = r.clone();
        r.push(1.0);
        r
    }).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).expect("nonempty");
        a.swap(c, p);
        let pivot = a[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != c {
                let f = row[c] / pivot[c];
                for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x -= f * y;
                }
            }
        }
    }
    (0..n).map(|i| a[i][n] / a[i][i]).collect()
}

impl PolytopeShape {
    pub fn new(norm: &PolytopeNorm) -> Result<Self, NormError> {
        let d = norm.dim();
        let mut polar: Vec<Vec<f64>> = Vec::new();
        for s in norm.scaled_normals_f64() {
            polar.push(s.clone());
            polar.push(s.iter().map(|x| -x).collect());
        }
        let mut vertices = Vec::new();
        let mut facets = Vec::new();
        match d {
            1 => {
                let m = polar.iter().fold(0.0f64, |a, p| a.max(p[0].abs()));
                vertices = vec![vec![1.0 / m], vec![-1.0 / m]];
                facets = vec![
                    ShapeFacet { normal: vec![1.0], offset: 1.0 / m, vertices: vec![0] },
                    ShapeFacet { normal: vec![-1.0], offset: 1.0 / m, vertices: vec![1] },
                ];
            }
            2 => {
                let (grid, _) = to_grid(&polar);
                let h = hull2(&grid);
                let r = h.len();
                // polar edge (h[j], h[j+1]) <-> primal vertex j
                for j in 0..r {
                    let a = &polar[h[j]];
                    let b = &polar[h[(j + 1) % r]];
                    vertices.push(solve(&[a.clone(), b.clone()]));
                }
                for j in 0..r {
                    let y = &polar[h[j]];
                    let l = (y[0] * y[0] + y[1] * y[1]).sqrt();
                    facets.push(ShapeFacet {
                        normal: y.iter().map(|v| v / l).collect(),
                        offset: 1.0 / l,
                        vertices: vec![(j + r - 1) % r, j],
                    });
                }
            }
            3 => {
                let (grid, _) = to_grid(&polar);
                let tris = hull3(&grid)?;
                let faces = merge_coplanar(&grid, &tris);
                let mut incident: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
                for (fi, f) in faces.iter().enumerate() {
                    let t = f.triangle;
                    vertices.push(solve(&[polar[t[0]].clone(), polar[t[1]].clone(), polar[t[2]].clone()]));
                    for &v in &f.vertices {
                        incident.entry(v).or_default().push(fi);
                    }
                }
                for (k, vs) in incident {
                    let y = &polar[k];
                    let l = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
                    let normal: Vec<f64> = y.iter().map(|v| v / l).collect();
                    let ordered = order_cyclic(&vertices, vs, &normal);
                    facets.push(ShapeFacet { normal, offset: 1.0 / l, vertices: ordered });
                }
            }
            _ => return Err(NormError::Unsupported(format!("polytope geometry in dimension {d}"))),
        }
        Ok(PolytopeShape { d, norm: norm.clone(), vertices, facets })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn norm(&self) -> &PolytopeNorm {
        &self.norm
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[ShapeFacet] {
        &self.facets
    }

    /// Largest Euclidean norm of a point of the unit ball.
    pub fn circumradius(&self) -> f64 {
        self.vertices.iter().map(|v| super::euclid(v)).fold(0.0, f64::max)
    }

    pub fn facet_diameter(&self, f: &ShapeFacet) -> f64 {
        let mut m = 0.0f64;
        for (i, &a) in f.vertices.iter().enumerate() {
            for &b in &f.vertices[i + 1..] {
                m = m.max(dist(&self.vertices[a], &self.vertices[b]));
            }
        }
        m
    }

    pub fn max_facet_diameter(&self) -> f64 {
        self.facets.iter().map(|f| self.facet_diameter(f)).fold(0.0, f64::max)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.norm.eval_f64_unchecked(x) <= 1.0 + 1e-12
    }

    /// Nearest point of the unit ball to `x` and its Euclidean distance.
    pub fn closest_point(&self, x: &[f64]) -> (Vec<f64>, f64) {
        if self.contains(x) {
            return (x.to_vec(), 0.0);
        }
        // The nearest point lies on a facet whose plane separates x from the
        // ball, and the plane distance bounds the distance to that facet.
        let mut cands: Vec<(f64, &ShapeFacet)> = self
            .facets
            .iter()
            .map(|f| (dot(&f.normal, x) - f.offset, f))
            .filter(|(h, _)| *h > 0.0)
            .collect();
        cands.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut best: Option<(Vec<f64>, f64)> = None;
        for (h, f) in cands {
            if best.as_ref().is_some_and(|b| h >= b.1) {
                continue;
            }
            let q = self.closest_on_facet(f, x);
            let dq = dist(&q, x);
            if best.as_ref().is_none_or(|b| dq < b.1) {
                best = Some((q, dq));
            }
        }
        best.unwrap_or_else(|| (x.to_vec(), 0.0))
    }

    pub fn distance(&self, x: &[f64]) -> f64 {
        self.closest_point(x).1
    }

    fn closest_on_facet(&self, f: &ShapeFacet, x: &[f64]) -> Vec<f64> {
        let vs: Vec<&Vec<f64>> = f.vertices.iter().map(|&i| &self.vertices[i]).collect();
        match self.d {
            1 => vs[0].clone(),
            2 => closest_on_segment(vs[0], vs[1], x),
            _ => {
                let n = &f.normal;
                let h = dot(n, x) - f.offset;
                let q: Vec<f64> = x.iter().zip(n).map(|(a, b)| a - h * b).collect();
                let r = vs.len();
                let inside = (0..r).all(|i| {
                    let a = vs[i];
                    let b = vs[(i + 1) % r];
                    let e = sub(b, a);
                    let w = sub(&q, a);
                    dot(&cross(&e, &w), n) >= -1e-15 * (1.0 + dot(&e, &e))
                });
                if inside {
                    return q;
                }
                (0..r)
                    .map(|i| closest_on_segment(vs[i], vs[(i + 1) % r], x))
                    .min_by(|a, b| dist(a, x).total_cmp(&dist(b, x)))
                    .expect("facet has vertices")
            }
        }
    }
}

fn order_cyclic(vertices: &[Vec<f64>], mut vs: Vec<usize>, n: &[f64]) -> Vec<usize> {
    let k = vs.len() as f64;
    let c: Vec<f64> = (0..3).map(|i| vs.iter().map(|&v| vertices[v][i]).sum::<f64>() / k).collect();
    // any direction orthogonal to n
    let helper = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = normalize(&cross(n, &helper));
    let e2 = cross(n, &e1);
    vs.sort_by(|&a, &b| {
        let ang = |v: usize| {
            let w = sub(&vertices[v], &c);
            dot(&w, &e2).atan2(dot(&w, &e1))
        };
        ang(a).total_cmp(&ang(b))
    });
    vs
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn cross(a: &[f64], b: &[f64]) -> Vec<f64> {
    vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn normalize(a: &[f64]) -> Vec<f64> {
    let l = super::euclid(a);
    a.iter().map(|x| x / l).collect()
}

pub(crate) fn closest_on_segment(a: &[f64], b: &[f64], x: &[f64]) -> Vec<f64> {
    let e = sub(b, a);
    let ee = dot(&e, &e);
    let t = if ee == 0.0 { 0.0 } else { (dot(&sub(x, a), &e) / ee).clamp(0.0, 1.0) };
    a.iter().zip(&e).map(|(p, q)| p + t * q).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::Rational;

    #[test]
    fn square_vertices() {
        let s = PolytopeShape::new(&PolytopeNorm::linf(2)).unwrap();
        assert_eq!(s.vertices().len(), 4);
        assert_eq!(s.facets().len(), 4);
        for v in s.vertices() {
            assert!((v[0].abs() - 1.0).abs() < 1e-12 && (v[1].abs() - 1.0).abs() < 1e-12);
        }
        assert!((s.max_facet_diameter() - 2.0).abs() < 1e-12);
        assert!((s.circumradius() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn cube_and_octahedron() {
        let c = PolytopeShape::new(&PolytopeNorm::linf(3)).unwrap();
        assert_eq!(c.vertices().len(), 8);
        assert_eq!(c.facets().len(), 6);
        assert!(c.facets().iter().all(|f| f.vertices.len() == 4));
        let o = PolytopeShape::new(&PolytopeNorm::l1(3)).unwrap();
        assert_eq!(o.vertices().len(), 6);
        assert_eq!(o.facets().len(), 8);
        let (q, d) = c.closest_point(&[2.0, 0.5, 0.0]);
        assert!((d - 1.0).abs() < 1e-12 && (q[0] - 1.0).abs() < 1e-12 && (q[1] - 0.5).abs() < 1e-12);
        let (_, d) = c.closest_point(&[2.0, 2.0, 2.0]);
        assert!((d - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn redundant_facets_are_ignored() {
        let n = PolytopeNorm::new(
            2,
            vec![
                super::super::Facet::from_ints(&[1, 0], Rational::one()),
                super::super::Facet::from_ints(&[0, 1], Rational::one()),
                super::super::Facet::from_ints(&[1, 1], Rational::from_integer(5)),
            ],
        )
        .unwrap();
        let s = PolytopeShape::new(&n).unwrap();
        assert_eq!(s.vertices().len(), 4);
    }
}
