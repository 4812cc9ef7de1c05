use av321::dist::{tv_distance, EmpiricalDist, Pmf};
use av321::experiment::run_batch;
use av321::sample::{
    gw_tree_truncated, kesten_truncated, sample_limit_process, sample_progeny, uniform_avoider_321,
    uniform_tree,
};
use av321::stats::catalan;
use av321::tree::enumerate_trees;
use av321::Error;
use statrs::distribution::{ChiSquared, ContinuousCDF};

const STREAMS: u64 = 16;

fn freq<K: Ord + Clone>(d: &EmpiricalDist<K>, k: K) -> f64 {
    d.frequency(&k)
}

#[test]
fn uniform_tree_small_cases() {
    let d: EmpiricalDist<String> = run_batch(1, STREAMS, 100_000, |r| {
        uniform_tree(3, r).unwrap().to_string()
    })
    .into_iter()
    .collect();
    assert_eq!(d.support_len(), 2);
    assert!((freq(&d, "UUDD".to_string()) - 0.5).abs() < 0.01);

    let d: EmpiricalDist<String> = run_batch(2, STREAMS, 100_000, |r| {
        uniform_tree(4, r).unwrap().to_string()
    })
    .into_iter()
    .collect();
    assert_eq!(d.support_len(), 5);
    for (_, c) in d.iter() {
        assert!((c as f64 / 100_000.0 - 0.2).abs() < 0.01);
    }
}

#[test]
fn uniform_tree_passes_chi_square() {
    for v in [4usize, 5, 6] {
        let samples = 200_000;
        let d: EmpiricalDist<String> = run_batch(10 + v as u64, STREAMS, samples, |r| {
            uniform_tree(v, r).unwrap().to_string()
        })
        .into_iter()
        .collect();
        let cells = catalan(v as u64 - 1) as usize;
        assert_eq!(d.support_len(), cells);
        let e = samples as f64 / cells as f64;
        let stat: f64 = d.iter().map(|(_, c)| (c as f64 - e).powi(2) / e).sum();
        let p = ChiSquared::new((cells - 1) as f64).unwrap().sf(stat);
        assert!(p > 0.001, "v={v} p={p}");
    }
}

#[test]
fn uniform_avoiders_small_cases() {
    let d: EmpiricalDist<Vec<u32>> = run_batch(3, STREAMS, 100_000, |r| {
        uniform_avoider_321(3, r).unwrap().into_vec()
    })
    .into_iter()
    .collect();
    assert_eq!(d.support_len(), 5);
    for (_, c) in d.iter() {
        assert!((c as f64 / 100_000.0 - 0.2).abs() < 0.01);
    }

    let first_fixed = run_batch(4, STREAMS, 100_000, |r| {
        uniform_avoider_321(4, r).unwrap().at(1) == 1
    });
    let f = first_fixed.iter().filter(|&&b| b).count() as f64 / 100_000.0;
    assert!((f - 5.0 / 14.0).abs() < 0.01, "{f}");
}

#[test]
fn gw_progeny_small_sizes() {
    let geom = Pmf::geometric(0.5).unwrap();
    let sizes = run_batch(5, STREAMS, 200_000, |r| {
        match gw_tree_truncated(&geom, None, r, 10_000) {
            Ok(t) => t.vertex_count() as u64,
            Err(Error::Overflow { .. }) => u64::MAX,
            Err(e) => panic!("{e}"),
        }
    });
    let d: EmpiricalDist<u64> = sizes.into_iter().collect();
    assert!((freq(&d, 1) - 0.5).abs() < 0.005);
    assert!((freq(&d, 2) - 0.125).abs() < 0.005);
}

#[test]
fn progeny_sampler_matches_law() {
    let d: EmpiricalDist<u64> = run_batch(6, STREAMS, 200_000, sample_progeny)
        .into_iter()
        .collect();
    assert!((freq(&d, 1) - 0.5).abs() < 0.005);
    assert!((freq(&d, 2) - 0.125).abs() < 0.005);
    assert!((freq(&d, 3) - 0.0625).abs() < 0.005);
    assert!(d.iter().all(|(&k, _)| k >= 1));
}

#[test]
fn gw_conditioned_on_size_is_uniform() {
    let geom = Pmf::geometric(0.5).unwrap();
    let conditioned: EmpiricalDist<String> = run_batch(7, STREAMS, 600_000, |r| {
        gw_tree_truncated(&geom, None, r, 6)
            .ok()
            .filter(|t| t.vertex_count() == 5)
            .map(|t| t.to_string())
    })
    .into_iter()
    .flatten()
    .collect();
    assert!(conditioned.total() > 10_000);
    let uniform: EmpiricalDist<String> =
        enumerate_trees(5).unwrap().map(|t| t.to_string()).collect();
    assert_eq!(conditioned.support_len(), 14);
    assert!(
        conditioned.tv(&uniform) < 0.03,
        "{}",
        conditioned.tv(&uniform)
    );
}

#[test]
fn gw_rejects_supercritical_and_respects_cap() {
    let mut r = av321::RngStream::new(8, 0);
    let heavy = Pmf::geometric(0.4).unwrap();
    assert!(matches!(
        gw_tree_truncated(&heavy, Some(3), &mut r, 100),
        Err(Error::Supercritical(_))
    ));
    let geom = Pmf::geometric(0.5).unwrap();
    for _ in 0..1000 {
        match gw_tree_truncated(&geom, None, &mut r, 50) {
            Ok(t) => assert!(t.vertex_count() <= 50),
            Err(e) => assert_eq!(e, Error::Overflow { cap: 50 }),
        }
        let t = gw_tree_truncated(&geom, Some(2), &mut r, usize::MAX).unwrap();
        assert!(t.height() <= 2);
    }
}

#[test]
fn kesten_root_degree_and_spine() {
    let trees = run_batch(9, STREAMS, 200_000, |r| kesten_truncated(3, r));
    let d: EmpiricalDist<u64> = trees.iter().map(|k| k.tree.root_degree() as u64).collect();
    assert!((freq(&d, 1) - 0.25).abs() < 0.005);
    assert!((freq(&d, 2) - 0.25).abs() < 0.005);
    assert_eq!(freq(&d, 0), 0.0);
    for k in trees.iter().take(2000) {
        assert_eq!(k.tree.height(), 3);
        assert_eq!(k.spine.len(), 4);
        assert_eq!(k.spine[0], 0);
        for w in k.spine.windows(2) {
            assert_eq!(k.tree.parent(w[1]), Some(w[0]));
        }
    }
}

#[test]
fn limit_process_front_is_empty_two_thirds_of_the_time() {
    let draws = run_batch(10, STREAMS, 200_000, sample_limit_process);
    let empty = draws.iter().filter(|d| d.front.is_empty()).count() as f64 / 200_000.0;
    assert!((empty - 2.0 / 3.0).abs() < 0.005, "{empty}");
    let front: EmpiricalDist<u64> = draws.iter().map(|d| d.front.mass() as u64).collect();
    assert!(tv_distance(&front, &Pmf::geometric(2.0 / 3.0).unwrap()) < 0.01);
    for d in draws.iter().take(1000) {
        assert_eq!(d.x.len() as u64, d.n_front);
        assert_eq!(d.y.len() as u64, d.n_back);
        assert_eq!(d.front.mass(), d.x.iter().filter(|&&x| x == 1).count());
    }
}

#[test]
fn batches_are_deterministic_in_seed_and_streams() {
    let a = run_batch(11, 8, 1000, |r| uniform_avoider_321(30, r).unwrap());
    let b = run_batch(11, 8, 1000, |r| uniform_avoider_321(30, r).unwrap());
    assert_eq!(a, b);
    let c = run_batch(11, 7, 1000, |r| uniform_avoider_321(30, r).unwrap());
    assert_eq!(c.len(), 1000);
    assert_ne!(a, c);
}
