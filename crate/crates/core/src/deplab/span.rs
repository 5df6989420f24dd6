use std::collections::HashSet;

use serde::Serialize;

use super::{check_vectors, closure, greedy_basis, matroid_partition, DeplabError};
use crate::qlinalg::{QVector, Rational, SpanBuilder};

/// Largest vector count the exhaustive audit accepts.
pub const EXHAUSTIVE_BUDGET: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Clean,
    Violated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditMethod {
    /// Enumerates every distinct span (flat) of rank small enough to matter.
    Exhaustive,
    /// Runs [`matroid_partition`]: a subset spanning more than `d·|I| + m`
    /// vectors exists exactly when no partition into `d` independent classes
    /// and `m` leftovers does. Polynomial, so there is no size budget.
    Partition,
}

/// Outcome of a span audit. When violated, `witness` is an independent
/// subset `I` and `spanned` lists every index in its span, with
/// `spanned.len() >= d·|I| + m + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanAuditReport {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    pub spanned: Vec<usize>,
    pub d: usize,
    pub m: usize,
    pub method: AuditMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flats_examined: Option<usize>,
}

impl SpanAuditReport {
    pub fn is_clean(&self) -> bool {
        self.verdict == Verdict::Clean
    }
}

/// Exhaustive span audit; refuses more than [`EXHAUSTIVE_BUDGET`] vectors.
pub fn span_audit(vectors: &[QVector], d: usize, m: usize) -> Result<SpanAuditReport, DeplabError> {
    span_audit_with(vectors, d, m, AuditMethod::Exhaustive)
}

/// Searches for a subset `I` whose span contains at least `d·|I| + m + 1` of
/// the vectors.
pub fn span_audit_with(
    vectors: &[QVector],
    d: usize,
    m: usize,
    method: AuditMethod,
) -> Result<SpanAuditReport, DeplabError> {
    if d == 0 {
        return Err(DeplabError::InvalidParameter("d must be at least 1".into()));
    }
    let dim = check_vectors(vectors)?;
    match method {
        AuditMethod::Exhaustive => exhaustive(vectors, dim, d, m),
        AuditMethod::Partition => by_partition(vectors, dim, d, m),
    }
}

fn violated(vectors: &[QVector], dim: usize, d: usize, m: usize, basis: Vec<usize>, method: AuditMethod) -> SpanAuditReport {
    let spanned = closure(vectors, dim, &basis);
    debug_assert!(spanned.len() > d * basis.len() + m);
    SpanAuditReport { verdict: Verdict::Violated, witness: Some(basis), spanned, d, m, method, flats_examined: None }
}

fn clean(d: usize, m: usize, method: AuditMethod) -> SpanAuditReport {
    SpanAuditReport { verdict: Verdict::Clean, witness: None, spanned: Vec::new(), d, m, method, flats_examined: None }
}

fn exhaustive(vectors: &[QVector], dim: usize, d: usize, m: usize) -> Result<SpanAuditReport, DeplabError> {
    let k = vectors.len();
    if k > EXHAUSTIVE_BUDGET {
        return Err(DeplabError::OverBudget { k, budget: EXHAUSTIVE_BUDGET });
    }
    if k < m + 1 {
        let mut r = clean(d, m, AuditMethod::Exhaustive);
        r.flats_examined = Some(0);
        return Ok(r);
    }
    // A flat of rank r holds at most k vectors, so only r <= (k - m - 1) / d
    // can violate.
    let max_rank = (k - m - 1) / d;
    let close = |mask: u32| -> (u32, usize) {
        let mut span = SpanBuilder::new(dim);
        let mut rank = 0;
        for (i, v) in vectors.iter().enumerate() {
            if mask >> i & 1 == 1 && span.insert(v) {
                rank += 1;
            }
        }
        let mut out = 0u32;
        for (i, v) in vectors.iter().enumerate() {
            if mask >> i & 1 == 1 || span.contains(v) {
                out |= 1 << i;
            }
        }
        (out, rank)
    };
    let mut seen: HashSet<u32> = HashSet::new();
    let mut level: Vec<u32> = Vec::new();
    for i in 0..k {
        let (f, _) = close(1 << i);
        if seen.insert(f) {
            level.push(f);
        }
    }
    let mut rank = 1;
    while rank <= max_rank && !level.is_empty() {
        for &f in &level {
            if f.count_ones() as usize > d * rank + m {
                let basis = greedy_basis(vectors, dim, (0..k).filter(|&i| f >> i & 1 == 1));
                let mut r = violated(vectors, dim, d, m, basis, AuditMethod::Exhaustive);
                r.flats_examined = Some(seen.len());
                return Ok(r);
            }
        }
        if rank == max_rank {
            break;
        }
        let mut next = Vec::new();
        for &f in &level {
            for i in 0..k {
                if f >> i & 1 == 0 {
                    let (g, r) = close(f | 1 << i);
                    debug_assert_eq!(r, rank + 1);
                    if seen.insert(g) {
                        next.push(g);
                    }
                }
            }
        }
        level = next;
        rank += 1;
    }
    let mut r = clean(d, m, AuditMethod::Exhaustive);
    r.flats_examined = Some(seen.len());
    Ok(r)
}

fn by_partition(vectors: &[QVector], dim: usize, d: usize, m: usize) -> Result<SpanAuditReport, DeplabError> {
    match matroid_partition(vectors, d, m) {
        Ok(_) => Ok(clean(d, m, AuditMethod::Partition)),
        Err(DeplabError::Infeasible { witness, .. }) => {
            let basis = greedy_basis(vectors, dim, witness);
            Ok(violated(vectors, dim, d, m, basis, AuditMethod::Partition))
        }
        Err(e) => Err(e),
    }
}

/// Independent subset chosen greedily by decreasing weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreedySelection {
    /// Indices in the order they were picked.
    pub indices: Vec<usize>,
    pub weight: Rational,
    /// `(Σλ − m·M) / d`.
    pub bound: Rational,
}

/// Picks an independent subset whose weight is at least `(Σλ − m·M) / d`,
/// provided no subset `I` spans more than `d·|I| + m` vectors.
///
/// Vectors are visited by decreasing weight (lower index first on ties) and
/// kept whenever they leave the current span.
pub fn greedy_select(
    vectors: &[QVector],
    weights: &[Rational],
    d: usize,
    m: usize,
    max_weight: &Rational,
) -> Result<GreedySelection, DeplabError> {
    if weights.len() != vectors.len() {
        return Err(DeplabError::DimensionMismatch { expected: vectors.len(), got: weights.len() });
    }
    if !max_weight.is_positive() {
        return Err(DeplabError::InvalidParameter("M must be positive".into()));
    }
    if let Some(i) = weights.iter().position(|w| w.is_negative() || w > max_weight) {
        return Err(DeplabError::InvalidParameter(format!("weight {i} is outside [0, M]")));
    }
    let report = span_audit_with(vectors, d, m, AuditMethod::Partition)?;
    if !report.is_clean() {
        return Err(DeplabError::AuditViolated(Box::new(report)));
    }
    let dim = vectors.first().map_or(0, QVector::dim);
    let mut order: Vec<usize> = (0..vectors.len()).collect();
    order.sort_by(|&a, &b| weights[b].cmp(&weights[a]).then(a.cmp(&b)));
    let indices = greedy_basis(vectors, dim, order);
    let weight: Rational = indices.iter().map(|&i| weights[i].clone()).sum();
    let total: Rational = weights.iter().cloned().sum();
    let bound = (total - Rational::from_integer(m as i64) * max_weight) / Rational::from_integer(d as i64);
    if weight < bound {
        return Err(DeplabError::Certificate(format!("greedy weight {weight} is below {bound}")));
    }
    Ok(GreedySelection { indices, weight, bound })
}
