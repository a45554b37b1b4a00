use knotstat::catalog::{load_catalog, Filter};
use knotstat::partition::*;
use knotstat::specfun::{restricted_zeta, riemann_zeta};
use knotstat::Error;
use num_bigint::BigUint;
use proptest::prelude::*;

/// Explicit enumeration: for each total weight, the number of multisets and Σ 2^{ω}.
fn enumerate_multisets(weights: &[u32], depth: u32) -> (Vec<f64>, Vec<f64>) {
    let mut plain = vec![0.0; depth as usize + 1];
    let mut signed = vec![0.0; depth as usize + 1];
    fn rec(ws: &[u32], i: usize, total: u32, distinct: u32, depth: u32, plain: &mut [f64], signed: &mut [f64]) {
        if i == ws.len() {
            plain[total as usize] += 1.0;
            signed[total as usize] += 2f64.powi(distinct as i32);
            return;
        }
        let mut m = 0;
        while total + m * ws[i] <= depth {
            rec(ws, i + 1, total + m * ws[i], distinct + (m > 0) as u32, depth, plain, signed);
            m += 1;
        }
    }
    rec(weights, 0, 0, 0, depth, &mut plain, &mut signed);
    (plain, signed)
}

#[test]
fn recurrence_matches_enumeration() {
    for ws in [vec![4u32], vec![4, 5], vec![4, 5, 5, 7], vec![3, 3, 3, 8, 9, 11], vec![4, 6, 6, 6, 7, 7, 10]] {
        let src = PrimeSource::from_weights(&ws);
        let (plain, signed) = enumerate_multisets(&ws, 40);
        let a = multiset_counts(&src, 40);
        let b = signed_multiset_counts(&src, 40);
        for n in 0..=40 {
            assert!((a[n] - plain[n]).abs() <= 1e-9 * plain[n].max(1.0), "{ws:?} n={n}: {} vs {}", a[n], plain[n]);
            assert!((b[n] - signed[n]).abs() <= 1e-9 * signed[n].max(1.0), "{ws:?} n={n}");
        }
    }
}

#[test]
fn two_catalog_primes_closed_form() {
    let cat = load_catalog(concat!(env!("CARGO_MANIFEST_DIR"), "/data/knots.csv"), Filter::All).unwrap();
    let src = PrimeSource::from_catalog(&cat.subset(&["3_1", "4_1"]).unwrap());
    let r = z_alternating(10.0, 2, &src, 1e-12).unwrap();
    let want = 1.0 / ((1.0 - 2f64.powi(-40)) * (1.0 - 2f64.powi(-50)));
    assert!((r.value - want).abs() < 1e-15);
    assert!(r.agreement.unwrap().within_bound);
    let n = z_knots_times_n(10.0, 2, &PrimeSource::from_catalog(&cat.subset(&["3_1"]).unwrap()), 1e-12).unwrap();
    let want = riemann_zeta(10.0).unwrap() / (1.0 - 2f64.powi(-40));
    assert!((n.value / want - 1.0).abs() < 1e-14);
}

#[test]
fn grothendieck_against_direct_sum() {
    let src = PrimeSource::from_weights(&[4, 5]);
    let g = z_grothendieck(10.0, 2, &src, 1e-12).unwrap();
    let (direct, _) = signed_multiset_sum(&src, 10.0, 2, 40).unwrap();
    assert!((g.value / direct - 1.0).abs() < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euler_product_bounds_direct_sum(ws in prop::collection::vec(3u32..16, 1..8), beta in 9.5f64..14.0) {
        let src = PrimeSource::from_weights(&ws);
        let r = z_alternating(beta, 2, &src, 1e-12).unwrap();
        let a = r.agreement.unwrap();
        prop_assert!(a.within_bound, "{:?}", a);
        let (d40, t40) = multiset_sum(&src, beta, 2, 40).unwrap();
        prop_assert!((r.value - d40).abs() <= t40 + 1e-14 * r.value);
        let g = z_grothendieck(beta, 2, &src, 1e-12).unwrap();
        let h = z_alternating(2.0 * beta, 2, &src, 1e-12).unwrap();
        prop_assert!((g.value - r.value * r.value / h.value).abs() < 1e-12);
    }
}

#[test]
fn qstar_factor_and_product() {
    assert_eq!(qstar_euler_factor(2, 1.0).unwrap(), 3.0);
    for p in [2u64, 3, 7, 101] {
        let x = (p as f64).powf(-2.0);
        let geo: f64 = 1.0 + 2.0 * (1..=60).map(|n| x.powi(n)).sum::<f64>();
        assert!((qstar_euler_factor(p, 2.0).unwrap() - geo).abs() < 1e-12);
    }
    let prod = qstar_euler_product(2.0, 100_000).unwrap();
    assert!((prod / 2.5 - 1.0).abs() < 1e-5);
    let r = qstar_partition(2.0, 1_000_000).unwrap();
    assert!(r.bracketed && r.rel_err < 1e-5);
    assert!(matches!(qstar_partition(1.0, 10), Err(Error::Divergent { .. })));
    // ω-sieve direct sum against trial division for a short range
    let mut s = 0.0;
    for n in (1..=2000u64).rev() {
        let w = knotstat::arith::prime_divisors(n).len();
        s += 2f64.powi(w as i32) / (n * n) as f64;
    }
    assert!((qstar_partition(2.0, 2000).unwrap().partial_sum - s).abs() < 1e-13);
}

#[test]
fn spectral_commutators() {
    assert_eq!(spectral_commutator_norm(2, 1), 2f64.ln());
    for (p, m) in [(2u64, 1i64), (3, -2), (5, 3)] {
        let t = spectral_commutator_truncated(p, m, 200);
        assert!((t - spectral_commutator_norm(p, m)).abs() < 1e-12);
    }
}

#[test]
fn z_tau_examples() {
    let fs = [BigUint::from(1u32), BigUint::from(2u32).pow(40)];
    let r = z_tau(1.5, &fs, 1, 1e-12).unwrap();
    assert!((r.value / riemann_zeta(1.5).unwrap() - 1.0).abs() < 1e-15);
    let r6 = z_tau(1.5, &fs, 6, 1e-12).unwrap();
    assert!((r6.value / restricted_zeta(1.5, 6).unwrap() - 1.0).abs() < 1e-14);
    assert!(matches!(z_tau(1.0, &fs, 1, 1e-12), Err(Error::Divergent { .. })));
    assert!(z_tau(1.5, &fs[1..], 1, 1e-12).is_err());
}

#[test]
fn threshold_relations() {
    assert_eq!(lambda_beta(1.0, 2), 1.0);
    assert!((lambda_beta(2f64.ln() / 5f64.ln(), 5) - 1.0).abs() < 1e-12);
    let b = threshold_beta_tilde(2).unwrap();
    assert!(b < 1.9391);
    assert!((f_beta_q(b, 2.0) - (400f64.ln() - 6.0 * 2f64.ln().ln())).abs() < 1e-9);
    let t = thresholds(2).unwrap();
    assert_eq!(t.beta_plus_ceil, 10);
    assert!(t.beta_tilde_minus < t.beta_minus && t.beta_minus < t.beta_plus);
    assert_eq!(regime(9.5, 2).unwrap(), Regime::Convergent);
    assert_eq!(regime(5.0, 2).unwrap(), Regime::Undetermined);
    assert_eq!(regime(1.0, 2).unwrap(), Regime::Divergent);
    assert!(bisect(|x| x * x - 2.0, 0.0, 1.0, 1e-12).is_err());
    assert!((bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap() - 2f64.sqrt()).abs() < 1e-13);
}

#[test]
fn figure_tables() {
    let f = figure_f(11, None, 20.0, 200).unwrap();
    assert_eq!(f.len(), 200);
    assert!(f[0].0 > 2f64.ln() / 11f64.ln());
    assert!(f.windows(2).all(|w| w[1].1 > w[0].1));
    let grid: Vec<f64> = (0..=98).map(|i| 2.0 + i as f64).collect();
    let h = figure_h(&grid).unwrap();
    assert!(h.iter().all(|r| r.1 > 0.0));
    assert!(figure_h(&[1.5]).is_err());
}
