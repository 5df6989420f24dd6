use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unitdist::deplab::{matroid_partition, span_audit_with, ungar_directions, AuditMethod, Verdict};
use unitdist::distgraph::{build_udg, PointSet};
use unitdist::genericity::{full_family, DependencyScheme};
use unitdist::norms::{hausdorff_distance, random_polytope_norm, Norm, PolytopeNorm};
use unitdist::qlinalg::{nullspace, rank, span_membership, QMatrix, QVector, Rational};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(p, q)| Rational::new(p, q))
}

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = QMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(small_rational(), c), r)
            .prop_map(|rows| QMatrix::from_rows(&rows).unwrap())
    })
}

fn int_vector(d: usize, bound: i64) -> impl Strategy<Value = QVector> {
    prop::collection::vec(-bound..=bound, d)
        .prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
        .prop_map(|v| QVector::from_ints(&v))
}

fn polytope(d: usize) -> impl Strategy<Value = PolytopeNorm> {
    (any::<u64>(), d..=d + 4).prop_map(move |(seed, h)| random_polytope_norm(d, h, &mut ChaCha8Rng::seed_from_u64(seed)))
}

/// Violation oracle: try every index subset as I.
fn naive_violation(vs: &[QVector], d: usize, m: usize) -> bool {
    let k = vs.len();
    (1u32..1 << k).any(|mask| {
        let basis: Vec<QVector> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| vs[i].clone()).collect();
        let spanned = vs.iter().filter(|v| span_membership(v, &basis).unwrap()).count();
        spanned > d * mask.count_ones() as usize + m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_is_transpose_invariant(m in matrix(5, 5)) {
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn nullspace_is_annihilated(m in matrix(4, 6)) {
        let ns = nullspace(&m);
        prop_assert_eq!(ns.len(), m.cols() - rank(&m));
        for v in &ns {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Rational::is_zero));
        }
    }

    #[test]
    fn span_membership_iff_rank_unchanged(
        basis in prop::collection::vec(int_vector(3, 2), 1..4),
        v in int_vector(3, 2),
    ) {
        let before = rank(&QMatrix::from_vectors(&basis, 3).unwrap());
        let mut grown = basis.clone();
        grown.push(v.clone());
        let after = rank(&QMatrix::from_vectors(&grown, 3).unwrap());
        prop_assert_eq!(span_membership(&v, &basis).unwrap(), before == after);
    }

    #[test]
    fn polytope_norm_axioms(
        p in polytope(2),
        x in int_vector(2, 5),
        y in int_vector(2, 5),
        s in small_rational(),
    ) {
        let nx = p.eval_exact(&x).unwrap();
        prop_assert!(nx.is_positive());
        prop_assert!(p.eval_exact(&QVector::zeros(2)).unwrap().is_zero());
        prop_assert_eq!(p.eval_exact(&x.scale(&s)).unwrap(), &s.abs() * &nx);
        prop_assert_eq!(p.eval_exact(&-&x).unwrap(), nx.clone());
        let sum = p.eval_exact(&(&x + &y)).unwrap();
        prop_assert!(sum <= &nx + &p.eval_exact(&y).unwrap());
    }

    #[test]
    fn smooth_norm_axioms(
        p in 1.1f64..6.0,
        x in prop::collection::vec(-3.0f64..3.0, 3),
        y in prop::collection::vec(-3.0f64..3.0, 3),
        s in -4.0f64..4.0,
    ) {
        let norms = [Norm::euclidean(3), serde_json::from_value(serde_json::json!({"kind": "lp", "d": 3, "p": p})).unwrap()];
        for n in &norms {
            let nx = n.eval_f64(&x).unwrap();
            let sx: Vec<f64> = x.iter().map(|v| v * s).collect();
            let xy: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            prop_assert!(nx >= 0.0);
            prop_assert!((n.eval_f64(&sx).unwrap() - s.abs() * nx).abs() <= 1e-9 * (1.0 + nx * s.abs()));
            prop_assert!(n.eval_f64(&xy).unwrap() <= nx + n.eval_f64(&y).unwrap() + 1e-9);
        }
    }

    #[test]
    fn hausdorff_is_a_metric(a in polytope(2), b in polytope(2), c in polytope(2)) {
        let ab = hausdorff_distance(&a, &b).unwrap();
        let ba = hausdorff_distance(&b, &a).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-9);
        prop_assert!(hausdorff_distance(&a, &a).unwrap() <= 1e-9);
        let ac = hausdorff_distance(&a, &c).unwrap();
        let cb = hausdorff_distance(&c, &b).unwrap();
        prop_assert!(ab <= ac + cb + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unit_graph_is_permutation_and_translation_invariant(
        pts in prop::collection::btree_set((-3i64..=3, -3i64..=3), 2..12),
        shift in int_vector(2, 4),
        perm_seed in any::<u64>(),
    ) {
        let norm = Norm::Polytope(PolytopeNorm::hexagon());
        let pts: Vec<QVector> = pts.into_iter().map(|(a, b)| QVector::from_ints(&[a, b])).collect();
        let n = pts.len();
        let ps = PointSet::exact(2, pts.clone()).unwrap();
        let edges = |g: &unitdist::distgraph::UnitDistanceGraph| -> BTreeSet<(usize, usize)> {
            g.edges.iter().map(|&(x, y)| (x.min(y), x.max(y))).collect()
        };
        let base = edges(&build_udg(&ps, &norm, 1e-9).unwrap());

        let mut perm: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut ChaCha8Rng::seed_from_u64(perm_seed));
        let permuted = edges(&build_udg(&ps.permuted(&perm), &norm, 1e-9).unwrap());
        let mapped: BTreeSet<(usize, usize)> = permuted
            .iter()
            .map(|&(x, y)| (perm[x].min(perm[y]), perm[x].max(perm[y])))
            .collect();
        prop_assert_eq!(&mapped, &base);

        let moved = PointSet::exact(2, pts.iter().map(|p| p + &shift).collect()).unwrap();
        prop_assert_eq!(&edges(&build_udg(&moved, &norm, 1e-9).unwrap()), &base);
    }

    #[test]
    fn span_audit_methods_agree_with_subset_search(
        vs in prop::collection::vec(int_vector(3, 1), 1..=9),
        d in 1usize..=2,
        m in 0usize..=2,
    ) {
        let naive = naive_violation(&vs, d, m);
        let exhaustive = span_audit_with(&vs, d, m, AuditMethod::Exhaustive).unwrap();
        let partition = span_audit_with(&vs, d, m, AuditMethod::Partition).unwrap();
        prop_assert_eq!(exhaustive.verdict == Verdict::Violated, naive);
        prop_assert_eq!(partition.verdict == Verdict::Violated, naive);
        prop_assert_eq!(matroid_partition(&vs, d, m).is_ok(), !naive);
        for report in [&exhaustive, &partition] {
            if let Some(w) = &report.witness {
                let basis: Vec<QVector> = w.iter().map(|&i| vs[i].clone()).collect();
                prop_assert!(report.spanned.len() > d * w.len() + m);
                for &j in &report.spanned {
                    prop_assert!(span_membership(&vs[j], &basis).unwrap());
                }
            }
        }
    }

    #[test]
    fn ungar_lower_bound(pts in prop::collection::btree_set((-4i64..=4, -4i64..=4), 2..14)) {
        let pts: Vec<QVector> = pts.into_iter().map(|(a, b)| QVector::from_ints(&[a, b])).collect();
        let r = ungar_directions(&pts).unwrap();
        if r.collinear {
            prop_assert_eq!(r.count, 1);
        } else {
            prop_assert!(r.count >= pts.len() - 1);
        }
    }

    #[test]
    fn family_is_permutation_equivariant(
        col in prop::collection::vec(-3i64..=3, 3).prop_filter("nonzero", |v| v.iter().all(|&x| x != 0)),
        perm_seed in any::<u64>(),
    ) {
        let a = QMatrix::from_rows(&col.iter().map(|&x| vec![Rational::from_integer(x)]).collect::<Vec<_>>()).unwrap();
        let scheme = DependencyScheme::new(2, 1, a, Rational::one()).unwrap();
        let normals: Vec<QVector> = PolytopeNorm::hexagon().facets().iter().map(|f| f.normal.clone()).chain([QVector::from_ints(&[1, 2])]).collect();
        let h = normals.len();
        let mut perm: Vec<usize> = (0..h).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut ChaCha8Rng::seed_from_u64(perm_seed));
        let shuffled: Vec<QVector> = perm.iter().map(|&i| normals[i].clone()).collect();

        let keys = |normals: &[QVector], relabel: &dyn Fn(usize) -> usize| -> BTreeSet<QVector> {
            full_family(&scheme, normals)
                .unwrap()
                .planes
                .iter()
                .map(|p| {
                    let mut c = vec![Rational::zero(); h];
                    for i in 0..h {
                        c[relabel(i)] = p.coefficients[i].clone();
                    }
                    QVector::new(c).unwrap().projective_key()
                })
                .collect()
        };
        // coordinate i of the shuffled problem is coordinate perm[i] of the original
        prop_assert_eq!(keys(&shuffled, &|i| perm[i]), keys(&normals, &|i| i));
    }
}
