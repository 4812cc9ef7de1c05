use av321::dist::{convolve_pmf, tv_distance, Law, Pmf};
use av321::perm::pattern_from_digits;
use av321::stats::{catalan, exact_fp_distribution};

#[test]
fn geometric_half_has_mean_one() {
    let g = Pmf::geometric(0.5).unwrap();
    assert!((g.mean() - 1.0).abs() < 1e-12);
    assert!((g.tabulated_mean() + 64.0 * g.survival(63) + g.survival(64) - 1.0).abs() < 1e-12);
}

#[test]
fn geometric_versus_negbin_tv_is_two_ninths() {
    let tv = tv_distance(
        &Pmf::geometric(2.0 / 3.0).unwrap(),
        &Pmf::negbin_2_one_third(),
    );
    assert!((tv - 2.0 / 9.0).abs() < 1e-12, "{tv}");
}

#[test]
fn negbin_is_the_self_convolution_of_geometric() {
    let g = Pmf::geometric(2.0 / 3.0).unwrap();
    let c = convolve_pmf(&g, &g, 64);
    let nb = Pmf::negbin_2_one_third();
    for k in 0..=40 {
        assert!((c.mass(k) - nb.mass(k)).abs() < 1e-12, "k={k}");
    }
}

#[test]
fn progeny_masses_are_shifted_catalan() {
    let p = Pmf::progeny();
    for k in 1..=30u64 {
        let exact = catalan(k - 1) as f64 / 2f64.powi(2 * k as i32 - 1);
        assert!((p.mass(k) / exact - 1.0).abs() < 1e-13, "k={k}");
    }
    let far = Law::Progeny;
    for k in [255u64, 256, 257, 5000, 1 << 20] {
        let ratio = far.survival(k) / far.survival(k - 1);
        let want = (2 * k - 1) as f64 / (2 * k) as f64;
        assert!((ratio / want - 1.0).abs() < 1e-13, "k={k}");
    }
}

#[test]
fn exact_fixed_point_laws_coincide_across_patterns() {
    let laws: Vec<_> = ["321", "132", "213"]
        .iter()
        .map(|p| exact_fp_distribution(8, &pattern_from_digits(p).unwrap()).unwrap())
        .collect();
    assert_eq!(laws[0], laws[1]);
    assert_eq!(laws[0], laws[2]);
    assert_eq!(laws[0].total, 1430);
}
