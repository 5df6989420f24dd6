use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use serde::Serialize;

use super::{full_family, DependencyScheme, GenericityError, HyperplaneFamily};
use crate::constructions::RETRY_BUDGET;
use crate::norms::{PolytopeNorm, PolytopeShape};
use crate::qlinalg::{QVector, Rational};

const DEFAULT_PRIMES: (u64, u64) = (1_000_000, 10_000_000);

/// Every scheme with `ℓ ≤ max_l` whose matrix entries have height at most
/// `height` (numerator and denominator bounded in absolute value).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SchemeClass {
    pub height: u64,
    pub max_l: usize,
}

/// Proof that the perturbed offsets avoid the planes of every scheme in a
/// class, for every facet assignment and sign pattern.
///
/// Offsets are `t_i = s_i + n_i/p_i` with distinct primes `p_i` above
/// `bound` and `0 < n_i < p_i`. Scale a plane's form matrix to integers by
/// `lcm(1..H)·lcm(den o)`; its first reduced nullspace vector times the
/// determinant of a pivot minor is integral, with entry at the first free
/// column equal to that determinant, at most `bound` by Hadamard. At the
/// prime of that column the plane equation has p-adic valuation −1, so it
/// cannot vanish.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassCertificate {
    pub class: SchemeClass,
    pub bound: f64,
    pub primes: Vec<u64>,
    pub numerators: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenericPolytopeNorm {
    pub base: PolytopeNorm,
    pub perturbed: PolytopeNorm,
    pub seed: u64,
    pub eps: Rational,
    /// Explicit families the offsets were checked against.
    pub avoided: Vec<HyperplaneFamily>,
    pub certificate: Option<ClassCertificate>,
    pub attempts: usize,
}

impl GenericPolytopeNorm {
    pub fn offsets(&self) -> QVector {
        offsets(&self.perturbed)
    }

    /// Upper bound on the Hausdorff distance between the two unit balls:
    /// shrinking the perturbed ball by `min s_i / (s_i + eps)` lands inside
    /// the base ball.
    pub fn hausdorff_bound(&self) -> Result<f64, GenericityError> {
        let smin = self.base.facets().iter().map(|f| f.offset.to_f64()).fold(f64::INFINITY, f64::min);
        let c = PolytopeShape::new(&self.perturbed)?.circumradius();
        Ok(self.eps.to_f64() * c / smin)
    }
}

fn offsets(p: &PolytopeNorm) -> QVector {
    QVector::new(p.facets().iter().map(|f| f.offset.clone()).collect()).expect("at least one facet")
}

fn lcm_upto(h: u64) -> BigInt {
    (1..=h).fold(BigInt::one(), |l, x| l.lcm(&BigInt::from(x)))
}

impl SchemeClass {
    /// `max over ℓ ≤ max_l` of `R^(dℓ)` with
    /// `R = lcm(1..H)·H·√ℓ·lcm(den o)·max |o|₂` (at least 1).
    pub fn bound(&self, normals: &[QVector]) -> f64 {
        let d = normals.first().map_or(0, QVector::dim);
        let den = normals
            .iter()
            .flat_map(|o| o.entries().iter())
            .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let omax = normals
            .iter()
            .map(|o| o.to_f64().iter().map(|x| x * x).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        let scale = lcm_upto(self.height).to_f64().unwrap_or(f64::INFINITY)
            * den.to_f64().unwrap_or(f64::INFINITY)
            * self.height as f64
            * omax;
        (1..=self.max_l)
            .map(|l| {
                let r = (scale * (l as f64).sqrt() * (1.0 + 1e-9)).max(1.0);
                r.powi((d * l) as i32)
            })
            .fold(1.0, f64::max)
    }
}

fn next_prime(mut x: u64) -> u64 {
    while !primal_check::miller_rabin(x) {
        x += 1;
    }
    x
}

struct Draw {
    t: Vec<Rational>,
    primes: Vec<u64>,
    numerators: Vec<u64>,
}

fn draw<R: Rng>(base: &PolytopeNorm, eps: &Rational, range: (u64, u64), rng: &mut R) -> Result<Draw, GenericityError> {
    let h = base.num_facets();
    let mut used = HashSet::new();
    let mut primes = Vec::with_capacity(h);
    while primes.len() < h {
        let p = next_prime(rng.gen_range(range.0..=range.1));
        if used.insert(p) {
            primes.push(p);
        }
    }
    let mut t = Vec::with_capacity(h);
    let mut numerators = Vec::with_capacity(h);
    for (f, &p) in base.facets().iter().zip(&primes) {
        // n ≤ eps·p keeps t within [s, s + eps]; n < p keeps p out of n.
        let cap = (eps.numer() * BigInt::from(p) / eps.denom()).to_u64().unwrap_or(u64::MAX).min(p - 1);
        if cap == 0 {
            return Err(GenericityError::InvalidParameter(format!("eps too small for prime {p}")));
        }
        let n = rng.gen_range(1..=cap);
        t.push(&f.offset + &Rational::from_bigints(BigInt::from(n), BigInt::from(p)));
        numerators.push(n);
    }
    Ok(Draw { t, primes, numerators })
}

fn prepare(base: &PolytopeNorm, schemes: &[DependencyScheme], eps: &Rational) -> Result<Vec<HyperplaneFamily>, GenericityError> {
    if !eps.is_positive() {
        return Err(GenericityError::InvalidParameter("eps must be positive".into()));
    }
    let normals: Vec<QVector> = base.facets().iter().map(|f| f.normal.clone()).collect();
    schemes
        .iter()
        .map(|s| {
            if s.d != base.dim() {
                return Err(GenericityError::DimensionMismatch { expected: base.dim(), got: s.d });
            }
            full_family(s, &normals)
        })
        .collect()
}

fn sample<R: Rng>(
    base: &PolytopeNorm,
    families: &[HyperplaneFamily],
    eps: &Rational,
    range: (u64, u64),
    rng: &mut R,
) -> Result<(Draw, PolytopeNorm, usize), GenericityError> {
    for attempt in 1..=RETRY_BUDGET {
        let dr = draw(base, eps, range, rng)?;
        let coprime = base
            .facets()
            .iter()
            .all(|f| dr.primes.iter().all(|&p| (f.offset.denom() % BigInt::from(p)) != BigInt::from(0)));
        let t = QVector::new(dr.t.clone()).expect("nonempty");
        if !coprime || families.iter().any(|f| f.first_containing(&t).is_some()) {
            continue;
        }
        let perturbed = base.with_offsets(&dr.t)?;
        return Ok((dr, perturbed, attempt));
    }
    Err(GenericityError::RetryBudgetExhausted)
}

/// Perturbs each offset to `t_i = s_i + n_i/p_i ∈ [s_i, s_i + eps]` with
/// seeded random primes `p_i ∈ [10⁶, 10⁷]`, redrawing while the tuple lies
/// on a plane of any scheme's family.
pub fn sample_generic_polytope(
    base: &PolytopeNorm,
    schemes: &[DependencyScheme],
    eps: &Rational,
    seed: u64,
) -> Result<GenericPolytopeNorm, GenericityError> {
    let families = prepare(base, schemes, eps)?;
    let mut rng = crate::constructions::rng_for(seed);
    let (_, perturbed, attempts) = sample(base, &families, eps, DEFAULT_PRIMES, &mut rng)?;
    Ok(GenericPolytopeNorm {
        base: base.clone(),
        perturbed,
        seed,
        eps: eps.clone(),
        avoided: families,
        certificate: None,
        attempts,
    })
}

/// Like [`sample_generic_polytope`], but also certifies avoidance of every
/// scheme in `class`. Primes are drawn above the class bound (the default
/// range when the bound is below 10⁶, else `[bound, 10·bound]`).
pub fn sample_generic_polytope_for_class(
    base: &PolytopeNorm,
    class: SchemeClass,
    schemes: &[DependencyScheme],
    eps: &Rational,
    seed: u64,
) -> Result<GenericPolytopeNorm, GenericityError> {
    if class.height == 0 || class.max_l == 0 {
        return Err(GenericityError::InvalidParameter("height and max_l must be positive".into()));
    }
    let families = prepare(base, schemes, eps)?;
    let normals: Vec<QVector> = base.facets().iter().map(|f| f.normal.clone()).collect();
    let bound = class.bound(&normals);
    if bound > 1e17 {
        return Err(GenericityError::InvalidParameter(format!("class bound {bound:e} needs primes beyond 64 bits")));
    }
    let low = DEFAULT_PRIMES.0.max(bound.ceil() as u64 + 2);
    let range = (low, DEFAULT_PRIMES.1.max(low.saturating_mul(10)));
    let mut rng = crate::constructions::rng_for(seed);
    let (dr, perturbed, attempts) = sample(base, &families, eps, range, &mut rng)?;
    let certificate = ClassCertificate { class, bound, primes: dr.primes, numerators: dr.numerators };
    certificate.check(base, &perturbed)?;
    Ok(GenericPolytopeNorm {
        base: base.clone(),
        perturbed,
        seed,
        eps: eps.clone(),
        avoided: families,
        certificate: Some(certificate),
        attempts,
    })
}

impl ClassCertificate {
    /// Re-derives every condition the argument needs from the two norms.
    pub fn check(&self, base: &PolytopeNorm, perturbed: &PolytopeNorm) -> Result<(), GenericityError> {
        let fail = |m: String| Err(GenericityError::Certificate(m));
        let h = base.num_facets();
        if perturbed.num_facets() != h || self.primes.len() != h || self.numerators.len() != h {
            return fail("facet counts differ".into());
        }
        let normals: Vec<QVector> = base.facets().iter().map(|f| f.normal.clone()).collect();
        if perturbed.facets().iter().zip(&normals).any(|(f, o)| &f.normal != o) {
            return fail("normals differ".into());
        }
        let bound = self.class.bound(&normals);
        if (bound - self.bound).abs() > 1e-9 * bound {
            return fail(format!("recorded bound {} differs from {bound}", self.bound));
        }
        let distinct: HashSet<u64> = self.primes.iter().copied().collect();
        if distinct.len() != h {
            return fail("primes repeat".into());
        }
        for (i, ((&p, &n), (s, t))) in
            self.primes.iter().zip(&self.numerators).zip(base.facets().iter().zip(perturbed.facets())).enumerate()
        {
            if !primal_check::miller_rabin(p) || (p as f64) <= bound {
                return fail(format!("p_{i} = {p} is not a prime above the bound"));
            }
            if n == 0 || n >= p {
                return fail(format!("numerator {n} not in (0, {p})"));
            }
            let step = Rational::from_bigints(BigInt::from(n), BigInt::from(p));
            if t.offset != &s.offset + &step {
                return fail(format!("offset {i} is not s_i + n_i/p_i"));
            }
            if self.primes.iter().any(|&q| s.offset.denom() % BigInt::from(q) == BigInt::from(0)) {
                return fail(format!("base offset {i} has a prime denominator factor"));
            }
        }
        Ok(())
    }
}
