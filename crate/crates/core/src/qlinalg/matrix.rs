use std::ops::{Add, Index, IndexMut, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{LinalgError, Rational};

/// Rational vector of dimension at least 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QVector(Vec<Rational>);

impl QVector {
    pub fn new(entries: Vec<Rational>) -> Result<Self, LinalgError> {
        if entries.is_empty() {
            return Err(LinalgError::EmptyVector);
        }
        Ok(QVector(entries))
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        assert!(!xs.is_empty(), "empty vector");
        QVector(xs.iter().map(|&x| Rational::from_integer(x)).collect())
    }

    pub fn zeros(d: usize) -> Self {
        assert!(d > 0, "empty vector");
        QVector(vec![Rational::zero(); d])
    }

    pub fn unit(d: usize, i: usize) -> Self {
        let mut v = Self::zeros(d);
        v.0[i] = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn dot(&self, other: &QVector) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, s: &Rational) -> QVector {
        QVector(self.0.iter().map(|x| x * s).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(Rational::to_f64).collect()
    }

    /// First nonzero entry, if any.
    pub fn leading(&self) -> Option<&Rational> {
        self.0.iter().find(|x| !x.is_zero())
    }

    /// Flip the sign so the first nonzero coordinate is positive.
    pub fn sign_normalized(&self) -> QVector {
        match self.leading() {
            Some(l) if l.is_negative() => -self,
            _ => self.clone(),
        }
    }

    /// Scale so the first nonzero coordinate equals 1. Parallel vectors map
    /// to the same representative.
    pub fn projective_key(&self) -> QVector {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => self.clone(),
        }
    }
}

impl std::fmt::Debug for QVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl Index<usize> for QVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for QVector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl Add for &QVector {
    type Output = QVector;
    fn add(self, rhs: &QVector) -> QVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        QVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &QVector {
    type Output = QVector;
    fn sub(self, rhs: &QVector) -> QVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        QVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &QVector {
    type Output = QVector;
    fn neg(self) -> QVector {
        QVector(self.0.iter().map(|a| -a).collect())
    }
}

impl Serialize for QVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<Rational>::deserialize(d)?;
        QVector::new(v).map_err(serde::de::Error::custom)
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(LinalgError::Ragged { row: i, len: r.len(), expected: cols });
            }
            data.extend(r.iter().cloned());
        }
        Ok(QMatrix { rows: rows.len(), cols, data })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self, LinalgError> {
        let rs: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_integer(x)).collect())
            .collect();
        Self::from_rows(&rs)
    }

    /// Matrix whose rows are the given vectors (all of dimension `d`).
    pub fn from_vectors(vs: &[QVector], d: usize) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(vs.len() * d);
        for v in vs {
            if v.dim() != d {
                return Err(LinalgError::DimensionMismatch { expected: d, got: v.dim() });
            }
            data.extend(v.entries().iter().cloned());
        }
        Ok(QMatrix { rows: vs.len(), cols: d, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &QVector) -> Result<Vec<Rational>, LinalgError> {
        if v.dim() != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: v.dim() });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v.entries()).map(|(a, b)| a * b).sum())
            .collect())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Reduced row echelon form with the pivot columns, in order.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    pub matrix: QMatrix,
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination to reduced row echelon form. In each column the
/// pivot is the first row (at or below the current one) with a nonzero entry.
pub fn row_reduce(m: &QMatrix) -> RowEchelon {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = a.get(r, c).recip();
        for j in c..a.cols {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in 0..a.rows {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let f = a.get(i, c).clone();
            for j in c..a.cols {
                let v = a.get(i, j) - &(&f * a.get(r, j));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    RowEchelon { matrix: a, pivots }
}

pub fn rank(m: &QMatrix) -> usize {
    row_reduce(m).pivots.len()
}

/// Whether `v` lies in the rational span of `basis`. An empty basis spans {0}.
pub fn span_membership(v: &QVector, basis: &[QVector]) -> Result<bool, LinalgError> {
    let d = v.dim();
    for b in basis {
        if b.dim() != d {
            return Err(LinalgError::DimensionMismatch { expected: d, got: b.dim() });
        }
    }
    if v.is_zero() {
        return Ok(true);
    }
    if basis.is_empty() {
        return Ok(false);
    }
    let base = QMatrix::from_vectors(basis, d)?;
    let mut all = basis.to_vec();
    all.push(v.clone());
    let ext = QMatrix::from_vectors(&all, d)?;
    Ok(rank(&base) == rank(&ext))
}

/// Basis of `{w : M w = 0}`, one vector per free column, in column order.
/// The basis vector for free column `f` has a 1 in position `f`.
pub fn nullspace(m: &QMatrix) -> Vec<QVector> {
    if m.cols() == 0 {
        return Vec::new();
    }
    let RowEchelon { matrix: r, pivots } = row_reduce(m);
    let mut is_pivot = vec![false; m.cols()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for f in (0..m.cols()).filter(|&c| !is_pivot[c]) {
        let mut w = QVector::zeros(m.cols());
        w[f] = Rational::one();
        for (row, &p) in pivots.iter().enumerate() {
            w[p] = -r.get(row, f);
        }
        basis.push(w);
    }
    basis
}

/// Incrementally maintained row-reduced basis, for repeated membership tests
/// against a growing span.
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    d: usize,
    // Each row is normalized with a leading 1 at `pivot[i]`.
    rows: Vec<QVector>,
    pivot: Vec<usize>,
}

impl SpanBuilder {
    pub fn new(d: usize) -> Self {
        SpanBuilder { d, rows: Vec::new(), pivot: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &QVector) -> QVector {
        let mut w = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivot) {
            if !w[p].is_zero() {
                let f = w[p].clone();
                for j in 0..self.d {
                    if !row[j].is_zero() {
                        let x = &w[j] - &(&f * &row[j]);
                        w[j] = x;
                    }
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &QVector) -> bool {
        debug_assert_eq!(v.dim(), self.d);
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span. Returns false (and changes nothing) if it was
    /// already contained.
    pub fn insert(&mut self, v: &QVector) -> bool {
        let w = self.reduce(v);
        let Some(p) = (0..self.d).find(|&j| !w[j].is_zero()) else {
            return false;
        };
        let w = w.scale(&w[p].recip());
        self.rows.push(w);
        self.pivot.push(p);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&QMatrix::from_int_rows(&[&[1, 0], &[0, 1]]).unwrap()), 2);
        assert_eq!(rank(&QMatrix::from_int_rows(&[&[1, 0], &[2, 0]]).unwrap()), 1);
        let m = QMatrix::from_int_rows(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).unwrap();
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn span_examples() {
        let e1 = QVector::from_ints(&[1, 0]);
        let e2 = QVector::from_ints(&[0, 1]);
        let v = QVector::from_ints(&[1, 1]);
        assert!(span_membership(&v, &[e1.clone(), e2]).unwrap());
        assert!(!span_membership(&v, std::slice::from_ref(&e1)).unwrap());
        let w = QVector::from_ints(&[2, 4, 6]);
        assert!(span_membership(&w, &[QVector::from_ints(&[1, 2, 3])]).unwrap());
        assert!(span_membership(&w, &[e1]).is_err());
    }

    #[test]
    fn nullspace_examples() {
        let id = QMatrix::from_int_rows(&[&[1, 0], &[0, 1]]).unwrap();
        assert!(nullspace(&id).is_empty());
        let ns = nullspace(&QMatrix::from_int_rows(&[&[1, 1]]).unwrap());
        assert_eq!(ns, vec![QVector::from_ints(&[-1, 1])]);
        // left nullspace of rows (1,0),(0,2),(3,3)
        let m = QMatrix::from_int_rows(&[&[1, 0], &[0, 2], &[3, 3]]).unwrap();
        let ns = nullspace(&m.transpose());
        assert_eq!(ns.len(), 1);
        let expected = QVector::new(vec![q(3, 1), q(3, 2), q(-1, 1)]).unwrap();
        assert_eq!(ns[0].projective_key(), expected.projective_key());
    }

    #[test]
    fn span_builder_tracks_rank() {
        let mut s = SpanBuilder::new(3);
        assert!(s.insert(&QVector::from_ints(&[1, 2, 3])));
        assert!(!s.insert(&QVector::from_ints(&[2, 4, 6])));
        assert!(s.insert(&QVector::from_ints(&[0, 1, 0])));
        assert!(s.contains(&QVector::from_ints(&[1, 5, 3])));
        assert!(!s.contains(&QVector::from_ints(&[0, 0, 1])));
        assert_eq!(s.dim(), 2);
    }
}
