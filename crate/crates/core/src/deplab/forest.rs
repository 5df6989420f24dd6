use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::Serialize;

use super::{check_vectors, entropy_check, rank_of, DeplabError};
use crate::qlinalg::{QVector, Rational};

pub fn half_n_log_n(n: usize) -> f64 {
    if n <= 1 {
        0.0
    } else {
        0.5 * n as f64 * (n as f64).log2()
    }
}

/// One coset class `W_a`: the vertices whose coordinate along the red
/// direction (relative to the node's first vertex) equals `coefficient`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CosetClass {
    pub coefficient: Rational,
    pub node: CertNode,
}

/// Node of the recursive edge-count decomposition. `bound` is the integer
/// bound assembled bottom-up: 0 at leaves, the sum over components at a
/// split, and `n − max|W_a|` plus the class bounds at a red node.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CertNode {
    Leaf {
        vertices: Vec<usize>,
    },
    Split {
        vertices: Vec<usize>,
        edges: usize,
        bound: usize,
        components: Vec<CertNode>,
    },
    Red {
        vertices: Vec<usize>,
        edges: usize,
        bound: usize,
        direction: usize,
        red_edges: usize,
        classes: Vec<CosetClass>,
    },
}

impl CertNode {
    pub fn vertices(&self) -> &[usize] {
        match self {
            CertNode::Leaf { vertices } | CertNode::Split { vertices, .. } | CertNode::Red { vertices, .. } => vertices,
        }
    }

    pub fn edges(&self) -> usize {
        match self {
            CertNode::Leaf { .. } => 0,
            CertNode::Split { edges, .. } | CertNode::Red { edges, .. } => *edges,
        }
    }

    pub fn bound(&self) -> usize {
        match self {
            CertNode::Leaf { .. } => 0,
            CertNode::Split { bound, .. } | CertNode::Red { bound, .. } => *bound,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            CertNode::Leaf { .. } => 0,
            CertNode::Split { components, .. } => 1 + components.iter().map(CertNode::depth).max().unwrap_or(0),
            CertNode::Red { classes, .. } => 1 + classes.iter().map(|c| c.node.depth()).max().unwrap_or(0),
        }
    }
}

/// Certificate that a graph whose edges are parallel to independent
/// directions, with each direction's edges forming a forest, has at most
/// `½·n·log₂ n` edges.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ForestCertificate {
    pub n: usize,
    pub edges: usize,
    /// Integer bound assembled by the decomposition.
    pub bound: usize,
    /// `½·n·log₂ n`.
    pub ceiling: f64,
    pub root: CertNode,
}

/// Per-edge direction index and coefficient: `p_x − p_y = c·u_i`.
#[derive(Clone, Debug)]
struct Labeled {
    x: usize,
    y: usize,
    dir: usize,
    coef: Rational,
}

fn parallel_coefficient(v: &QVector, u: &QVector) -> Option<Rational> {
    let j = (0..u.dim()).find(|&j| !u[j].is_zero())?;
    let c = &v[j] / &u[j];
    (u.scale(&c) == *v).then_some(c)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

fn label_edges(points: &[QVector], directions: &[QVector], edges: &[(usize, usize)]) -> Result<Vec<Labeled>, DeplabError> {
    let dim = check_vectors(directions)?;
    if rank_of(directions, dim, &(0..directions.len()).collect::<Vec<_>>()) != directions.len() {
        return Err(DeplabError::Dependent);
    }
    let mut seen: HashMap<&QVector, usize> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        if p.dim() != dim && !directions.is_empty() {
            return Err(DeplabError::DimensionMismatch { expected: dim, got: p.dim() });
        }
        if let Some(j) = seen.insert(p, i) {
            return Err(DeplabError::DuplicatePoint(j, i));
        }
    }
    let n = points.len();
    let mut labeled = Vec::with_capacity(edges.len());
    let mut forests: Vec<UnionFind> = directions.iter().map(|_| UnionFind::new(n)).collect();
    for (e, &(x, y)) in edges.iter().enumerate() {
        for idx in [x, y] {
            if idx >= n {
                return Err(DeplabError::IndexOutOfRange { edge: e, index: idx });
            }
        }
        let diff = &points[x] - &points[y];
        let found = directions.iter().enumerate().find_map(|(i, u)| {
            parallel_coefficient(&diff, u).filter(|c| !c.is_zero()).map(|c| (i, c))
        });
        let Some((dir, coef)) = found else {
            return Err(DeplabError::EdgeNotAligned { edge: e, x, y });
        };
        if !forests[dir].union(x, y) {
            return Err(DeplabError::NotForest { direction: dir, edge: e });
        }
        labeled.push(Labeled { x, y, dir, coef });
    }
    Ok(labeled)
}

fn components(vertices: &[usize], edges: &[&Labeled]) -> Vec<Vec<usize>> {
    let pos: BTreeMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut uf = UnionFind::new(vertices.len());
    for e in edges {
        uf.union(pos[&e.x], pos[&e.y]);
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &v) in vertices.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(v);
    }
    groups.into_values().collect()
}

fn build(vertices: Vec<usize>, edges: Vec<&Labeled>, k: usize) -> CertNode {
    if vertices.len() == 1 {
        return CertNode::Leaf { vertices };
    }
    let comps = components(&vertices, &edges);
    if comps.len() > 1 {
        let children: Vec<CertNode> = comps
            .into_iter()
            .map(|c| {
                let set: HashSet<usize> = c.iter().copied().collect();
                let inner = edges.iter().copied().filter(|e| set.contains(&e.x)).collect();
                build(c, inner, k)
            })
            .collect();
        let bound = children.iter().map(CertNode::bound).sum();
        return CertNode::Split { vertices, edges: edges.len(), bound, components: children };
    }
    // Connected with at least one edge: the direction with the most edges is red.
    let mut counts = vec![0usize; k];
    for e in &edges {
        counts[e.dir] += 1;
    }
    let red = (0..k).max_by(|&a, &b| counts[a].cmp(&counts[b]).then(b.cmp(&a))).expect("k >= 1");
    let coords = red_coordinates(&vertices, &edges, red);
    let mut classes: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
    for &v in &vertices {
        classes.entry(coords[&v].clone()).or_default().push(v);
    }
    let largest = classes.values().map(Vec::len).max().unwrap_or(0);
    let red_edges = counts[red];
    let classes: Vec<CosetClass> = classes
        .into_iter()
        .map(|(coefficient, members)| {
            let set: HashSet<usize> = members.iter().copied().collect();
            let inner = edges.iter().copied().filter(|e| e.dir != red && set.contains(&e.x)).collect();
            CosetClass { coefficient, node: build(members, inner, k) }
        })
        .collect();
    let bound = vertices.len() - largest + classes.iter().map(|c| c.node.bound()).sum::<usize>();
    CertNode::Red { vertices, edges: edges.len(), bound, direction: red, red_edges, classes }
}

/// Coordinate of every vertex along `red`, relative to the first vertex,
/// accumulated along a spanning tree of the (connected) edge set.
fn red_coordinates(vertices: &[usize], edges: &[&Labeled], red: usize) -> BTreeMap<usize, Rational> {
    let mut adj: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
    for e in edges {
        let c = if e.dir == red { e.coef.clone() } else { Rational::zero() };
        // p_y = p_x − c·u, so walking x → y subtracts c.
        adj.entry(e.x).or_default().push((e.y, -c.clone()));
        adj.entry(e.y).or_default().push((e.x, c));
    }
    let mut coords = BTreeMap::new();
    coords.insert(vertices[0], Rational::zero());
    let mut queue = VecDeque::from([vertices[0]]);
    while let Some(v) = queue.pop_front() {
        let a = coords[&v].clone();
        for (w, step) in adj.get(&v).into_iter().flatten() {
            if !coords.contains_key(w) {
                coords.insert(*w, &a + step);
                queue.push_back(*w);
            }
        }
    }
    coords
}

/// Builds the recursive decomposition (split into components, pick a red
/// direction, group vertices into coset classes, recurse) and checks that it
/// bounds the edge count by `½·n·log₂ n`.
pub fn forest_bound_certify(
    points: &[QVector],
    directions: &[QVector],
    edges: &[(usize, usize)],
) -> Result<ForestCertificate, DeplabError> {
    if points.is_empty() {
        return Err(DeplabError::InvalidParameter("no points".into()));
    }
    let labeled = label_edges(points, directions, edges)?;
    let root = build((0..points.len()).collect(), labeled.iter().collect(), directions.len());
    let cert = ForestCertificate {
        n: points.len(),
        edges: edges.len(),
        bound: root.bound(),
        ceiling: half_n_log_n(points.len()),
        root,
    };
    cert.verify(points, directions, edges)?;
    Ok(cert)
}

impl ForestCertificate {
    /// Replays the certificate against the instance from scratch.
    pub fn verify(&self, points: &[QVector], directions: &[QVector], edges: &[(usize, usize)]) -> Result<(), DeplabError> {
        let labeled = label_edges(points, directions, edges)?;
        let fail = |m: String| Err(DeplabError::Certificate(m));
        if self.n != points.len() || self.edges != edges.len() {
            return fail("instance size differs".into());
        }
        if self.root.vertices() != (0..points.len()).collect::<Vec<_>>() {
            return fail("root must hold every vertex".into());
        }
        check_node(&self.root, &labeled, self.n)?;
        if self.bound != self.root.bound() || self.edges > self.bound {
            return fail(format!("{} edges against bound {}", self.edges, self.bound));
        }
        if self.bound as f64 > half_n_log_n(self.n) + 1e-9 {
            return fail(format!("bound {} exceeds ½·n·log₂ n", self.bound));
        }
        Ok(())
    }
}

fn check_node(node: &CertNode, all: &[Labeled], n: usize) -> Result<(), DeplabError> {
    let fail = |m: String| Err(DeplabError::Certificate(m));
    let verts = node.vertices();
    let set: HashSet<usize> = verts.iter().copied().collect();
    if set.len() != verts.len() || verts.is_empty() {
        return fail("node vertex list is empty or repeats".into());
    }
    let inside: Vec<&Labeled> = all.iter().filter(|e| set.contains(&e.x) && set.contains(&e.y)).collect();
    if node.edges() != inside.len() {
        return fail(format!("node {verts:?} records {} edges, has {}", node.edges(), inside.len()));
    }
    if node.bound() as f64 > half_n_log_n(verts.len()) + 1e-9 {
        return fail(format!("node {verts:?} bound {} exceeds ½·n·log₂ n", node.bound()));
    }
    let partition_ok = |parts: Vec<&[usize]>| {
        let mut joined: Vec<usize> = parts.iter().flat_map(|p| p.iter().copied()).collect();
        joined.sort_unstable();
        let mut own = verts.to_vec();
        own.sort_unstable();
        joined == own
    };
    match node {
        CertNode::Leaf { vertices } => {
            if vertices.len() != 1 {
                return fail("leaf must hold one vertex".into());
            }
        }
        CertNode::Split { edges, bound, components, .. } => {
            if components.len() < 2 || !partition_ok(components.iter().map(CertNode::vertices).collect()) {
                return fail(format!("split of {verts:?} is not a partition into two or more parts"));
            }
            if components.iter().map(CertNode::edges).sum::<usize>() != *edges {
                return fail(format!("split of {verts:?} has crossing edges"));
            }
            if components.iter().map(CertNode::bound).sum::<usize>() != *bound {
                return fail(format!("split of {verts:?} bound does not add up"));
            }
            for c in components {
                check_node(c, all, n)?;
            }
        }
        CertNode::Red { edges, bound, direction, red_edges, classes, .. } => {
            if classes.len() < 2 || !partition_ok(classes.iter().map(|c| c.node.vertices()).collect()) {
                return fail(format!("classes of {verts:?} are not a partition into two or more parts"));
            }
            let mut class_of = BTreeMap::new();
            for c in classes {
                for &v in c.node.vertices() {
                    class_of.insert(v, &c.coefficient);
                }
            }
            let mut red_count = 0;
            let mut forest = UnionFind::new(n);
            for e in &inside {
                let delta = class_of[&e.y] - class_of[&e.x];
                if e.dir == *direction {
                    red_count += 1;
                    if delta != -e.coef.clone() {
                        return fail(format!("red edge ({}, {}) crosses the wrong classes", e.x, e.y));
                    }
                    forest.union(e.x, e.y);
                } else if !delta.is_zero() {
                    return fail(format!("edge ({}, {}) leaves its class", e.x, e.y));
                }
            }
            if red_count != *red_edges || red_count == 0 {
                return fail(format!("node {verts:?} red edge count mismatch"));
            }
            let largest = classes.iter().map(|c| c.node.vertices().len()).max().unwrap_or(0);
            for c in classes {
                let mut roots = HashSet::new();
                for &v in c.node.vertices() {
                    if !roots.insert(forest.find(v)) {
                        return fail(format!("class {} shares a red component", c.coefficient));
                    }
                }
            }
            if *red_edges > verts.len() - largest {
                return fail(format!("node {verts:?} has too many red edges"));
            }
            if red_edges + classes.iter().map(|c| c.node.edges()).sum::<usize>() != *edges {
                return fail(format!("node {verts:?} edge counts do not add up"));
            }
            if verts.len() - largest + classes.iter().map(|c| c.node.bound()).sum::<usize>() != *bound {
                return fail(format!("node {verts:?} bound does not add up"));
            }
            let mut sizes: Vec<u64> = classes.iter().map(|c| c.node.vertices().len() as u64).collect();
            sizes.sort_unstable_by(|a, b| b.cmp(a));
            if !entropy_check(&sizes)?.ok {
                return fail(format!("entropy inequality fails for {sizes:?}"));
            }
            for c in classes {
                check_node(&c.node, all, n)?;
            }
        }
    }
    Ok(())
}
