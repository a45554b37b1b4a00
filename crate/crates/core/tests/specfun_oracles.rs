use std::f64::consts::PI;

use knotstat::arith::{divisors, mobius};
use knotstat::specfun::*;
use knotstat::QmodZ;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn restricted_zeta_matches_coprime_sum() {
    let mut direct = 0.0;
    for n in (1..=1_000_000u64).rev() {
        if n % 2 != 0 && n % 3 != 0 {
            direct += (n as f64).powi(-3);
        }
    }
    let v = restricted_zeta(3.0, 6).unwrap();
    assert!(rel(v, direct) < 1e-11, "{v} vs {direct}");
    let euler = riemann_zeta(3.0).unwrap() * (1.0 - 0.125) * (1.0 - 1.0 / 27.0);
    assert!(rel(v, euler) < 1e-14);
}

#[test]
fn hurwitz_half_against_brute_force() {
    // Σ_{n<N} (n+1/2)^{-2} plus three Euler–Maclaurin tail terms.
    let big_n = 10_000_000u64;
    let mut s = 0.0;
    for n in (0..big_n).rev() {
        let x = n as f64 + 0.5;
        s += 1.0 / (x * x);
    }
    let a = big_n as f64 + 0.5;
    let tail = 1.0 / a + 0.5 / (a * a) + 1.0 / (3.0 * a * a * a);
    let v = hurwitz_zeta(2.0, 0.5).unwrap();
    assert!(rel(v, s + tail) < 1e-12);
    assert!(rel(v, PI * PI / 2.0) < 1e-13);
}

#[test]
fn zeta_sixty() {
    let v = riemann_zeta(60.0).unwrap();
    assert_eq!(v, 1.0 + 2f64.powi(-60));
}

#[test]
fn polylog_third_root_against_series() {
    let r = QmodZ::new(1, 3);
    let v = polylog_roots_of_unity(3.0, &r).unwrap();
    let (mut re, mut im) = (0.0, 0.0);
    for n in (1..=1_000_000u64).rev() {
        let t = (n as f64).powi(-3);
        let th = 2.0 * PI * (n % 3) as f64 / 3.0;
        re += t * th.cos();
        im += t * th.sin();
    }
    let d = ((v.re - re).powi(2) + (v.im - im).powi(2)).sqrt();
    assert!(d / (re * re + im * im).sqrt() < 1e-8);
}

#[test]
fn polylog_unit_denominators() {
    for b in 2..12i64 {
        for a in 0..b {
            let v = polylog_roots_of_unity(4.0, &QmodZ::new(a, b)).unwrap();
            let (mut re, mut im) = (0.0, 0.0);
            for n in (1..=20_000u64).rev() {
                let t = (n as f64).powi(-4);
                let th = 2.0 * PI * ((n * a as u64) % b as u64) as f64 / b as f64;
                re += t * th.cos();
                im += t * th.sin();
            }
            assert!((v.re - re).abs() < 1e-11 && (v.im - im).abs() < 1e-11, "{a}/{b}");
        }
    }
}

#[test]
fn polylog_neg_closed_forms() {
    for m in 0..8u32 {
        for (p, q) in [(1i64, 2i64), (1, 3), (-1, 2), (2, 5), (-3, 7)] {
            let z = BigRational::new(p.into(), q.into());
            let exact = polylog_neg(m, &z).unwrap().to_f64().unwrap();
            let zf = p as f64 / q as f64;
            let mut s = 0.0;
            for n in (1..=4000u32).rev() {
                s += (n as f64).powi(m as i32) * zf.powi(n as i32);
            }
            assert!((exact - s).abs() < 1e-9 * s.abs().max(1.0), "m={m} z={zf}");
        }
    }
}

#[test]
fn lerch_negative_order_brute_force() {
    let v = lerch(0.25, -2.0, 0.5).unwrap();
    let mut s = 0.0;
    for n in (0..200u32).rev() {
        s += 0.25f64.powi(n as i32) * (n as f64 + 0.5).powi(2);
    }
    assert!(rel(v, s) < 1e-14);
}

#[test]
fn lerch_positive_order_brute_force() {
    for (z, s, a) in [(0.3, 2.0, 1.0), (0.9, 1.5, 0.25), (0.5, 0.5, 3.0)] {
        let v = lerch(z, s, a).unwrap();
        let mut d = 0.0;
        for n in (0..2000u32).rev() {
            d += z.powi(n as i32) / (n as f64 + a).powf(s);
        }
        assert!(rel(v, d) < 1e-12, "{z} {s} {a}");
    }
}

fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    // restricted growth strings
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    fn go(i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=max + 1 {
            cur[i] = v;
            go(i + 1, max.max(v), cur, out);
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    go(1, 0, &mut cur, &mut out);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn stirling_and_ordered_bell_by_enumeration() {
    for n in 0..=8usize {
        let parts = set_partitions(n);
        let mut by_blocks = vec![0u64; n + 2];
        let mut fubini = 0u64;
        for p in &parts {
            let k = p.iter().max().map(|m| m + 1).unwrap_or(0);
            by_blocks[k] += 1;
            fubini += (1..=k as u64).product::<u64>();
        }
        for k in 0..=n {
            assert_eq!(stirling2(n as u32, k as u32), BigUint::from(by_blocks[k]), "S({n},{k})");
        }
        assert_eq!(ordered_bell(n as u32), BigUint::from(fubini));
    }
}

#[test]
fn eulerian_by_descents() {
    for m in 1..=7usize {
        let mut counts = vec![0u64; m];
        for p in permutations(m) {
            let d = p.windows(2).filter(|w| w[0] > w[1]).count();
            counts[d] += 1;
        }
        for (k, c) in counts.iter().enumerate() {
            assert_eq!(eulerian(m as u32, k as u32).unwrap(), BigUint::from(*c), "<{m},{k}>");
        }
    }
}

#[test]
fn ordered_bell_asymptotics() {
    let b = ordered_bell(12).to_f64().unwrap();
    assert!(rel(ordered_bell_asymptotic(12), b) < 0.01);
    assert_eq!(ordered_bell(12), BigUint::from(28091567595u64));
}

#[test]
fn mobius_sums_against_divisors() {
    for b in 1..200u64 {
        for k in -3..4i64 {
            let mut s = BigRational::from_integer(0.into());
            for d in divisors(b) {
                let t = BigRational::from_integer((b / d).into()).pow(k as i32);
                s += t * BigRational::from_integer(mobius(d).into());
            }
            assert_eq!(mobius_f(k, b).unwrap(), s, "f_{k}({b})");
        }
        let direct: f64 = divisors(b).iter().map(|&d| mobius(d) as f64 * ((b / d) as f64).powf(0.5)).sum();
        assert!((mobius_f_real(0.5, b).unwrap() - direct).abs() < 1e-12 * direct.abs().max(1.0));
    }
}
