use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ratiocert::certify::{boundary_degrees, certificate, density_lower_bound_check};
use ratiocert::eigen::{eigenmap, lambda2, sym_eig};
use ratiocert::generate;
use ratiocert::oracle::{enumerate_partitions, min_ratio_cut_bruteforce, stirling2};
use ratiocert::perturb::{
    canonical_uiso, gap_exact, gap_lower_bound, gap_upper_bound_unweighted, inf_norm, linf_eigengap_check,
    procrustes_align, split_iso_delta,
};
use ratiocert::rounding::{hyperplane_margin_bound, lloyd, spectral_cluster, Method};
use ratiocert::{DMatrix, DVector, Partition, WeightedGraph};

fn random_labels(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Partition {
    // first k vertices seed the k blocks, the rest are random, then shuffle
    let mut labels: Vec<usize> = (0..n).map(|v| if v < k { v } else { rng.random_range(0..k) }).collect();
    labels.shuffle(rng);
    Partition::new(labels).unwrap()
}

fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    (&a + a.transpose()) * 0.5
}

fn random_orthogonal(k: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    sym_eig(&random_symmetric(k, rng)).unwrap().vectors
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ratio_cut_is_trace_form(seed in any::<u64>(), n in 2usize..16, k in 1usize..5, density in 0.1f64..0.9) {
        let k = k.min(n);
        let g = generate::random_weighted(n, density, 2.0, seed).unwrap();
        let p = random_labels(n, k, &mut ChaCha8Rng::seed_from_u64(seed ^ 1));
        let u = canonical_uiso(&p);
        let trace = (u.transpose() * g.laplacian() * &u).trace();
        let rc = g.ratio_cut(&p).unwrap();
        prop_assert!((rc - trace).abs() <= 1e-10 * (1.0 + rc));
    }

    #[test]
    fn cut_is_indicator_quadratic_form(seed in any::<u64>(), n in 1usize..16, density in 0.1f64..0.9) {
        let g = generate::random_weighted(n, density, 2.0, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let subset: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        let x = DVector::from_fn(n, |i, _| if subset.contains(&i) { 1.0 } else { 0.0 });
        let q = (x.transpose() * g.laplacian() * &x)[(0, 0)];
        prop_assert!((g.cut_weight(&subset).unwrap() - q).abs() <= 1e-10 * (1.0 + q));
    }

    #[test]
    fn laplacian_is_psd_with_zero_row_sums(seed in any::<u64>(), n in 1usize..16, density in 0.0f64..1.0) {
        let g = generate::random_weighted(n, density, 3.0, seed).unwrap();
        let l = g.laplacian();
        for row in l.row_iter() {
            prop_assert!(row.sum().abs() <= 1e-12);
        }
        prop_assert!(sym_eig(&l).unwrap().values[0] >= -1e-10);
    }

    #[test]
    fn ratio_cut_ignores_labels_and_vertex_order(seed in any::<u64>(), n in 2usize..14, k in 1usize..4) {
        let k = k.min(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = generate::random_weighted(n, 0.5, 1.0, seed).unwrap();
        let p = random_labels(n, k, &mut rng);

        let mut relabel: Vec<usize> = (0..k).collect();
        relabel.shuffle(&mut rng);
        let q = Partition::new(p.labels().iter().map(|&l| relabel[l]).collect()).unwrap();
        prop_assert!(p.same_as(&q));
        prop_assert!((g.ratio_cut(&p).unwrap() - g.ratio_cut(&q).unwrap()).abs() <= 1e-12);

        // vertex v of g is vertex perm[v] of the permuted graph
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let h = g.permuted(&perm).unwrap();
        let mut moved = vec![0; n];
        for v in 0..n {
            moved[perm[v]] = p.label(v);
        }
        let pm = Partition::new(moved).unwrap();
        prop_assert!((g.ratio_cut(&p).unwrap() - h.ratio_cut(&pm).unwrap()).abs() <= 1e-10);
        let (a, b) = (lambda2(&g).unwrap(), lambda2(&h).unwrap());
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
    }

    #[test]
    fn certificate_ignores_labels_and_vertex_order(seed in any::<u64>(), n in 3usize..12, k in 1usize..4) {
        let k = k.min(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = generate::random_weighted(n, 0.6, 1.0, seed).unwrap();
        let p = random_labels(n, k, &mut rng);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let mut relabel: Vec<usize> = (0..k).collect();
        relabel.shuffle(&mut rng);
        let mut moved = vec![0; n];
        for v in 0..n {
            moved[perm[v]] = relabel[p.label(v)];
        }
        let a = certificate(&g, &p).unwrap();
        let b = certificate(&g.permuted(&perm).unwrap(), &Partition::new(moved).unwrap()).unwrap();
        prop_assert_eq!(a.passes, b.passes);
        prop_assert_eq!(a.strict, b.strict);
        prop_assert!((a.max_d_delta - b.max_d_delta).abs() <= 1e-12);
        let close = |x: f64, y: f64| x == y || (x - y).abs() <= 1e-9 * (1.0 + x.abs());
        prop_assert!(close(a.min_lambda2, b.min_lambda2));
        for v in 0..n {
            prop_assert!((a.d_delta[v] - b.d_delta[perm[v]]).abs() <= 1e-12);
        }
    }

    #[test]
    fn eigenmap_starts_at_zero(seed in any::<u64>(), n in 1usize..20, density in 0.0f64..1.0) {
        let g = generate::random_weighted(n, density, 2.0, seed).unwrap();
        let em = eigenmap(&g, n.min(3)).unwrap();
        prop_assert!(em.values[0].abs() <= 1e-9);
        let l = g.laplacian();
        for (i, &value) in em.values.iter().enumerate() {
            let col = em.u.column(i);
            prop_assert!((&l * col - col * value).norm() <= 1e-8 * (1.0 + l.norm()));
        }
    }

    #[test]
    fn boundary_degrees_sum_to_twice_the_cut(seed in any::<u64>(), n in 2usize..16, k in 1usize..5) {
        let k = k.min(n);
        let g = generate::random_weighted(n, 0.5, 1.0, seed).unwrap();
        let p = random_labels(n, k, &mut ChaCha8Rng::seed_from_u64(seed));
        let total: f64 = boundary_degrees(&g, &p).unwrap().iter().sum();
        let cuts: f64 = p.blocks().iter().map(|b| g.cut_weight(b).unwrap()).sum();
        prop_assert!((total - cuts).abs() <= 1e-10 * (1.0 + total));
    }

    #[test]
    fn margin_lemma(seed in any::<u64>(), dim in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let radius = rng.random_range(0.0..1.0);
        let c1: Vec<f64> = (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect();
        let c2: Vec<f64> = (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect();
        let in_ball = |c: &[f64], rng: &mut ChaCha8Rng| -> Vec<f64> {
            let dir: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let len = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
            let t = radius * rng.random::<f64>();
            c.iter().zip(&dir).map(|(ci, d)| ci + t * d / len).collect()
        };
        let x = in_ball(&c1, &mut rng);
        let y = in_ball(&c2, &mut rng);
        if let Ok(m) = hyperplane_margin_bound(&c1, &c2, radius, &x, &y) {
            prop_assert!(m.margin >= m.bound - 1e-9);
        }
    }
}

#[test]
fn eigendecomposition_reconstructs() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let n = rng.random_range(1..25);
        let a = random_symmetric(n, &mut rng);
        let eig = sym_eig(&a).unwrap();
        let q = &eig.vectors;
        let lambda = DMatrix::from_diagonal(&DVector::from_vec(eig.values.clone()));
        let scale = 1e-10 * (1.0 + a.norm());
        assert!((q * lambda * q.transpose() - &a).norm() <= scale);
        assert!((q.transpose() * q - DMatrix::identity(n, n)).norm() <= scale);
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn zero_eigenvalues_count_components() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for seed in 0..100 {
        let n = rng.random_range(1..20);
        let g = generate::random_weighted(n, rng.random_range(0.0..0.3), 1.0, seed).unwrap();
        let zeros = sym_eig(&g.laplacian()).unwrap().values.iter().filter(|&&v| v < 1e-8).count();
        assert_eq!(zeros, g.component_count(), "seed {seed}");
    }
}

#[test]
fn density_lemma_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for seed in 0..500 {
        let n = rng.random_range(2..20);
        let g = generate::random_weighted(n, rng.random_range(0.1..1.0), 2.0, seed).unwrap();
        let subset: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        let d = density_lower_bound_check(&g, &subset).unwrap();
        assert!(d.holds, "seed {seed}: {d:?}");
    }
}

/// Graphs made of random dense blocks joined by light random cross edges.
fn light_cross_instance(rng: &mut ChaCha8Rng) -> (WeightedGraph, Partition) {
    let k = rng.random_range(2..=3);
    let sizes: Vec<usize> = (0..k).map(|_| rng.random_range(3..=4)).collect();
    let n: usize = sizes.iter().sum();
    let labels: Vec<usize> = sizes.iter().enumerate().flat_map(|(b, &s)| std::iter::repeat_n(b, s)).collect();
    let cross_scale = rng.random_range(0.01..0.6);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let w = if labels[i] == labels[j] {
                rng.random_range(0.5..2.0)
            } else if rng.random_bool(0.3) {
                cross_scale * rng.random::<f64>()
            } else {
                0.0
            };
            if w > 0.0 {
                edges.push((i, j, w));
            }
        }
    }
    (WeightedGraph::from_edges(n, &edges).unwrap(), Partition::new(labels).unwrap())
}

#[test]
fn strict_certificate_means_unique_oracle_minimizer() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (mut strict, mut passing) = (0, 0);
    while strict < 50 {
        let (g, p) = light_cross_instance(&mut rng);
        let cert = certificate(&g, &p).unwrap();
        if !cert.passes {
            continue;
        }
        passing += 1;
        let oracle = min_ratio_cut_bruteforce(&g, p.k()).unwrap();
        assert!((oracle.value - g.ratio_cut(&p).unwrap()).abs() <= 1e-9);
        if cert.strict {
            strict += 1;
            assert!(oracle.unique);
            assert!(oracle.best.same_as(&p));
            let rounded = spectral_cluster(&g, p.k(), Method::KMeans, 1, 10).unwrap();
            assert!(rounded.partition.same_as(&p));
        }
    }
    assert!(passing >= strict);
}

#[test]
fn oracle_matches_independent_enumeration() {
    // assign every vertex any of k labels, keep the surjective assignments
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for seed in 0..30 {
        let n = rng.random_range(2..=7);
        let k = rng.random_range(1..=n.min(3));
        let g = generate::random_weighted(n, 0.6, 1.0, seed).unwrap();
        let mut best = f64::INFINITY;
        let mut labels = vec![0usize; n];
        'outer: loop {
            if let Ok(p) = Partition::with_k(labels.clone(), k) {
                best = best.min(g.ratio_cut(&p).unwrap());
            }
            for slot in labels.iter_mut() {
                *slot += 1;
                if *slot < k {
                    continue 'outer;
                }
                *slot = 0;
            }
            break;
        }
        let r = min_ratio_cut_bruteforce(&g, k).unwrap();
        assert!((r.value - best).abs() <= 1e-12, "seed {seed}");
        assert_eq!(r.partitions_examined, stirling2(n, k).unwrap());
    }
}

#[test]
fn enumeration_count_follows_the_recurrence() {
    for n in 1..=12usize {
        for k in 1..=n.min(4) {
            let count = enumerate_partitions(n, k).unwrap().count() as u64;
            let expected = k as u64 * stirling2(n - 1, k).unwrap() + stirling2(n - 1, k - 1).unwrap();
            assert_eq!(count, expected, "n={n} k={k}");
        }
    }
}

#[test]
fn linf_eigengap_inequality() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for seed in 0..60 {
        let n = rng.random_range(3..30);
        let g = generate::random_weighted(n, rng.random_range(0.2..1.0), 1.0, seed).unwrap();
        let l2 = lambda2(&g).unwrap();
        for _ in 0..20 {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let check = linf_eigengap_check(&g, l2, &x).unwrap();
            assert!(check.holds, "seed {seed}: {check:?}");
        }
    }
}

/// Values from an independent HiGHS solve of the same program, written with
/// free variables and both signs of the pinned coordinate.
#[test]
fn exact_gap_regression_values() {
    let star: Vec<_> = (1..5).map(|i| (0, i, 1.0)).collect();
    let k23: Vec<_> = (0..2).flat_map(|i| (2..5).map(move |j| (i, j, 1.0))).collect();
    let weighted = [
        (0, 1, 2.0),
        (1, 2, 0.5),
        (2, 3, 1.5),
        (3, 4, 1.0),
        (4, 5, 3.0),
        (0, 5, 0.25),
        (1, 4, 0.75),
    ];
    let cases = [
        (generate::path(3).unwrap(), 1.0),
        (generate::path(4).unwrap(), 0.5),
        (generate::cycle(5).unwrap(), 1.25),
        (WeightedGraph::from_edges(5, &star).unwrap(), 0.833333333333),
        (WeightedGraph::from_edges(5, &k23).unwrap(), 1.666666666667),
        (WeightedGraph::from_edges(6, &weighted).unwrap(), 0.799830076466),
    ];
    for (g, expected) in cases {
        let got = gap_exact(&g).unwrap();
        assert!((got - expected).abs() < 1e-9, "{got} vs {expected}");
    }
}

#[test]
fn gap_sandwich_on_small_unweighted_graphs() {
    let cycles = (3..12).map(|n| generate::cycle(n).unwrap());
    let random = (0..15).map(|seed| generate::random_connected_unweighted(10, 0.2, seed).unwrap());
    for g in cycles.chain(random) {
        let exact = gap_exact(&g).unwrap();
        let l2 = lambda2(&g).unwrap();
        assert!(gap_lower_bound(&g).unwrap() <= exact + 1e-9);
        assert!(exact <= gap_upper_bound_unweighted(&g).unwrap() + 1e-9);
        assert!(exact <= l2 + 1e-9);
    }
}

#[test]
fn delta_spectral_norm_below_row_sum_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for seed in 0..50 {
        let n = rng.random_range(3..20);
        let g = generate::random_weighted(n, 0.5, 1.0, seed).unwrap();
        let p = random_labels(n, rng.random_range(1..=3.min(n)), &mut rng);
        let l_delta = split_iso_delta(&g, &p).unwrap().l_delta;
        let eig = sym_eig(&l_delta).unwrap();
        let spectral = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(spectral <= inf_norm(&l_delta) + 1e-9);
        let d = boundary_degrees(&g, &p).unwrap();
        let max_d = d.iter().copied().fold(0.0, f64::max);
        assert!((inf_norm(&l_delta) - 2.0 * max_d).abs() <= 1e-9);
    }
}

#[test]
fn procrustes_is_optimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let k = rng.random_range(1..5);
        let n = rng.random_range(k..k + 12);
        let u = sym_eig(&random_symmetric(n, &mut rng)).unwrap().vectors.columns(0, k).into_owned();
        let u_iso = sym_eig(&random_symmetric(n, &mut rng)).unwrap().vectors.columns(0, k).into_owned();
        let pr = procrustes_align(&u, &u_iso).unwrap();
        let best = (&pr.aligned - &u_iso).norm();
        for _ in 0..5 {
            let v = random_orthogonal(k, &mut rng);
            assert!(best <= (&u * v - &u_iso).norm() + 1e-9);
        }
        let v = random_orthogonal(k, &mut rng);
        let rotated = &u_iso * v.transpose();
        let back = procrustes_align(&rotated, &u_iso).unwrap();
        assert!((back.rotation - &v).amax() <= 1e-9);
    }
}

#[test]
fn lloyd_never_increases_cost() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for seed in 0..40 {
        let n = rng.random_range(5..40);
        let k = rng.random_range(1..5.min(n));
        let g = generate::random_weighted(n, 0.3, 1.0, seed).unwrap();
        let em = eigenmap(&g, k).unwrap();
        let rows: Vec<DVector<f64>> = em.u.row_iter().map(|r| r.transpose()).collect();
        let init: Vec<DVector<f64>> = (0..k).map(|_| rows[rng.random_range(0..n)].clone()).collect();
        let run = lloyd(&rows, init, 200);
        assert!(run.history.windows(2).all(|w| w[1] <= w[0] + 1e-12 * (1.0 + w[0])));
    }
}
