use std::collections::VecDeque;

use serde::Serialize;

use super::{check_vectors, rank_of, DeplabError};
use crate::qlinalg::{row_reduce, QMatrix, QVector};

/// `d` linearly independent classes plus a remainder of at most `m` indices.
/// Together they partition `0..k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionResult {
    pub classes: Vec<Vec<usize>>,
    pub remainder: Vec<usize>,
}

enum Exchange {
    Free,
    Swap(Vec<usize>),
}

/// Matroid union of `d` copies of the linear matroid and one uniform matroid
/// of rank `m` (stored as set index `d`).
struct Union<'a> {
    vectors: &'a [QVector],
    dim: usize,
    d: usize,
    m: usize,
    owner: Vec<Option<usize>>,
    sets: Vec<Vec<usize>>,
}

impl Union<'_> {
    /// Whether `y` can join set `j` directly, and otherwise which members it
    /// can replace.
    fn exchange(&self, j: usize, y: usize) -> Exchange {
        let members = &self.sets[j];
        if j == self.d {
            return if members.len() < self.m { Exchange::Free } else { Exchange::Swap(members.clone()) };
        }
        if members.is_empty() {
            return Exchange::Free;
        }
        // Columns are the members followed by y; members are independent, so
        // the first |members| columns are pivots and the last column holds
        // y's coordinates in that basis.
        let mut cols: Vec<QVector> = members.iter().map(|&i| self.vectors[i].clone()).collect();
        cols.push(self.vectors[y].clone());
        let m = QMatrix::from_vectors(&cols, self.dim).expect("dimensions checked").transpose();
        let ech = row_reduce(&m);
        let last = members.len();
        if ech.pivots.contains(&last) {
            return Exchange::Free;
        }
        Exchange::Swap((0..last).filter(|&r| !ech.matrix.get(r, last).is_zero()).map(|r| members[r]).collect())
    }

    /// Breadth-first search for a shortest augmenting path that covers `x`.
    /// On failure returns the set of reachable elements.
    fn augment(&mut self, x: usize) -> Result<(), Vec<usize>> {
        let k = self.vectors.len();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; k];
        let mut seen = vec![false; k];
        seen[x] = true;
        let mut queue = VecDeque::from([x]);
        while let Some(y) = queue.pop_front() {
            for j in 0..=self.d {
                if self.owner[y] == Some(j) {
                    continue;
                }
                match self.exchange(j, y) {
                    Exchange::Free => {
                        self.apply(y, j, &parent);
                        return Ok(());
                    }
                    Exchange::Swap(zs) => {
                        for z in zs {
                            if !seen[z] {
                                seen[z] = true;
                                parent[z] = Some((y, j));
                                queue.push_back(z);
                            }
                        }
                    }
                }
            }
        }
        Err((0..k).filter(|&i| seen[i]).collect())
    }

    fn apply(&mut self, mut cur: usize, mut target: usize, parent: &[Option<(usize, usize)>]) {
        loop {
            if let Some(o) = self.owner[cur] {
                self.sets[o].retain(|&e| e != cur);
            }
            self.sets[target].push(cur);
            self.owner[cur] = Some(target);
            match parent[cur] {
                Some((prev, j)) => {
                    cur = prev;
                    target = j;
                }
                None => break,
            }
        }
    }
}

/// Partitions the indices into `d` linearly independent classes and a
/// remainder of size at most `m`, or reports a subset `S` with
/// `|S| = d·rank(S) + m + 1`, which rules any such partition out.
///
/// Elements are inserted in index order; each insertion searches the
/// exchange graph breadth-first, trying the linear classes in order before
/// the remainder.
pub fn matroid_partition(vectors: &[QVector], d: usize, m: usize) -> Result<PartitionResult, DeplabError> {
    if d == 0 {
        return Err(DeplabError::InvalidParameter("d must be at least 1".into()));
    }
    let dim = check_vectors(vectors)?;
    let mut u = Union { vectors, dim, d, m, owner: vec![None; vectors.len()], sets: vec![Vec::new(); d + 1] };
    for x in 0..vectors.len() {
        if let Err(witness) = u.augment(x) {
            let rank = rank_of(vectors, dim, &witness);
            debug_assert_eq!(witness.len(), d * rank + m + 1);
            return Err(DeplabError::Infeasible { witness, rank });
        }
    }
    let mut sets = u.sets;
    for s in &mut sets {
        s.sort_unstable();
    }
    let remainder = sets.pop().expect("d + 1 sets");
    for (j, class) in sets.iter().enumerate() {
        if rank_of(vectors, dim, class) != class.len() {
            return Err(DeplabError::Certificate(format!("class {j} is dependent")));
        }
    }
    Ok(PartitionResult { classes: sets, remainder })
}
