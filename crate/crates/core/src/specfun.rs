//! Zeta functions, polylogarithms, the Lerch transcendent and the exact
//! combinatorial families (Stirling, Eulerian, ordered Bell, Möbius sums).
//!
//! Real evaluation is `f64` with explicit truncation control; the combinatorial
//! numbers are exact big integers or rationals.

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use statrs::function::gamma::{gamma, ln_gamma};

use crate::arith::{divisors, mobius, prime_divisors};
use crate::error::{Error, Result};
use crate::qmodz::QmodZ;
use crate::sum::KahanSum;

/// B_2, B_4, ..., B_16.
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Largest denominator accepted by [`polylog_roots_of_unity`].
pub const MAX_ROOT_ORDER: u64 = 1_000_000;

fn factorial_f64(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Euler–Maclaurin evaluation of ζ(s, a) for any s ≠ 1 and a > 0.
///
/// Terms before the split point are summed explicitly; the split point is
/// `max(10, ⌈a⌉ + 10)`, but never fewer than 10 explicit terms.
fn hurwitz_em(s: f64, a: f64) -> f64 {
    let split = (a.ceil() + 10.0).max(10.0);
    let n_terms = ((split - a).ceil() as usize).max(10);
    let mut acc = KahanSum::new();
    for k in (0..n_terms).rev() {
        acc.add((a + k as f64).powf(-s));
    }
    let x = a + n_terms as f64;
    acc.add(x.powf(1.0 - s) / (s - 1.0));
    acc.add(0.5 * x.powf(-s));
    // rising factorial s(s+1)...(s+2j-2) and (2j)!
    let mut rising = s;
    let mut fact = 2.0;
    let mut xpow = x.powf(-s - 1.0);
    for (j, b) in BERNOULLI.iter().enumerate() {
        if j > 0 {
            let m = (2 * j) as f64;
            rising *= (s + m - 1.0) * (s + m);
            fact *= (m + 1.0) * (m + 2.0);
            xpow /= x * x;
        }
        acc.add(b / fact * rising * xpow);
    }
    acc.value()
}

/// Hurwitz's Fourier series for ζ(1 − σ, a) with σ > 1 and 0 < a ≤ 1.
fn hurwitz_fourier(sigma: f64, a: f64) -> f64 {
    let n_max = {
        let bound = (1e17 / (sigma - 1.0)).powf(1.0 / (sigma - 1.0));
        bound.min(400_000.0).ceil() as u64 + 1
    };
    let phase = PI * sigma / 2.0;
    let mut acc = KahanSum::new();
    for n in (1..=n_max).rev() {
        // reduce 2πna mod 2π before taking cos
        let na = (n as f64 * a).fract();
        acc.add((phase - 2.0 * PI * na).cos() * (n as f64).powf(-sigma));
    }
    2.0 * gamma(sigma) / (2.0 * PI).powf(sigma) * acc.value()
}

/// ζ(s, a) continued to all real s ≠ 1, a > 0.
pub(crate) fn hurwitz_zeta_ext(s: f64, a: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain("hurwitz_zeta", format!("a = {a} must be positive")));
    }
    if s == 1.0 {
        return Err(Error::Pole { op: "hurwitz_zeta", at: "s = 1".into() });
    }
    if s > -3.0 {
        return Ok(hurwitz_em(s, a));
    }
    // shift a into (0, 1], then subtract the removed leading terms
    let m = (a.ceil() - 1.0).max(0.0);
    let a0 = a - m;
    let mut v = hurwitz_fourier(1.0 - s, a0);
    let mut k = 0.0;
    while k < m {
        v -= (a0 + k).powf(-s);
        k += 1.0;
    }
    Ok(v)
}

/// Hurwitz zeta ζ(s, a) = Σ_{ℓ≥0} (a+ℓ)^{-s} for s > 1, a > 0.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::domain("hurwitz_zeta", format!("s = {s} must exceed 1")));
    }
    hurwitz_zeta_ext(s, a)
}

/// Riemann zeta ζ(s) for s > 1.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::domain("riemann_zeta", format!("s = {s} must exceed 1")));
    }
    if s.is_infinite() {
        return Ok(1.0);
    }
    Ok(hurwitz_em(s, 1.0))
}

/// ζ_m(s) = ζ(s) ∏_{p | m} (1 − p^{-s}).
pub fn restricted_zeta(s: f64, m: u64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::domain("restricted_zeta", format!("s = {s} must exceed 1")));
    }
    if m == 0 {
        return Err(Error::domain("restricted_zeta", "m must be at least 1"));
    }
    let z = riemann_zeta(s)?;
    Ok(prime_divisors(m)
        .into_iter()
        .fold(z, |acc, p| acc * (1.0 - (p as f64).powf(-s))))
}

/// ζ_m(s) − 1, accurate when ζ_m(s) is within rounding of 1.
pub fn restricted_zeta_minus_one(s: f64, m: u64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::domain("restricted_zeta", format!("s = {s} must exceed 1")));
    }
    if m == 0 {
        return Err(Error::domain("restricted_zeta", "m must be at least 1"));
    }
    if s < 24.0 {
        return Ok(restricted_zeta(s, m)? - 1.0);
    }
    // n^{-s} decays fast enough that a short direct sum is exact to rounding
    let mut acc = 0.0;
    let mut first = None;
    for n in 2u64.. {
        let t = (n as f64).powf(-s);
        if let Some(f) = first {
            if t < 1e-20 * f || t == 0.0 {
                break;
            }
        }
        if num_integer::gcd(n, m) == 1 {
            first.get_or_insert(t);
            acc += t;
        }
        if n > 10_000 {
            break;
        }
    }
    Ok(acc)
}

/// Li_s(e^{2πir}) for s > 1.
///
/// For s < 20 this is `b^{-s} Σ_{j=1}^{b} e^{2πija/b} ζ(s, j/b)`, where r = a/b;
/// for larger s the defining series is summed directly.
pub fn polylog_roots_of_unity(s: f64, r: &QmodZ) -> Result<Complex64> {
    if !(s > 1.0) {
        return Err(Error::domain("polylog", format!("s = {s} must exceed 1")));
    }
    if r.is_zero() {
        return Ok(Complex64::new(riemann_zeta(s)?, 0.0));
    }
    let b = r
        .denom_u64()
        .filter(|&b| b <= MAX_ROOT_ORDER)
        .ok_or_else(|| Error::domain("polylog", format!("root order of {r} too large")))?;
    let a = r.numer().to_u64().expect("0 < r < 1");
    let angle = |k: u64| 2.0 * PI * ((k % b) as f64) / b as f64;

    if s >= 20.0 || s.is_infinite() {
        let mut re = KahanSum::new();
        let mut im = KahanSum::new();
        for n in 1u64.. {
            let t = (n as f64).powf(-s);
            if n > 1 && t < 1e-20 {
                break;
            }
            let th = angle((n % b) * a % b);
            re.add(t * th.cos());
            im.add(t * th.sin());
        }
        return Ok(Complex64::new(re.value(), im.value()));
    }

    let bf = b as f64;
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for j in 1..=b {
        // b^{-s} ζ(s, j/b) = Σ_k (j + k b)^{-s}
        let z = hurwitz_em(s, j as f64 / bf) * bf.powf(-s);
        let th = angle(j * a % b);
        re.add(z * th.cos());
        im.add(z * th.sin());
    }
    Ok(Complex64::new(re.value(), im.value()))
}

/// Li_{-m}(z) exactly, via the Eulerian-number closed form.
pub fn polylog_neg(m: u32, z: &BigRational) -> Result<BigRational> {
    let one = BigRational::one();
    if *z == one {
        return Err(Error::Pole { op: "polylog_neg", at: "z = 1".into() });
    }
    if z.abs() >= one {
        return Err(Error::domain("polylog_neg", format!("|z| = |{z}| must be < 1")));
    }
    let w = &one - z;
    if m == 0 {
        return Ok(z / w);
    }
    let mut num = BigRational::zero();
    for k in 0..m {
        let e = BigRational::from_integer(BigInt::from(eulerian(m, k)?));
        num += e * num_traits::pow(z.clone(), (m - k) as usize);
    }
    Ok(num / num_traits::pow(w, (m + 1) as usize))
}

/// Li_{-m}(z) in floating point, for |z| < 1.
pub fn polylog_neg_f64(m: u32, z: f64) -> Result<f64> {
    if z == 1.0 {
        return Err(Error::Pole { op: "polylog_neg", at: "z = 1".into() });
    }
    if !(z.abs() < 1.0) {
        return Err(Error::domain("polylog_neg", format!("|z| = {} must be < 1", z.abs())));
    }
    if m == 0 {
        return Ok(z / (1.0 - z));
    }
    let mut acc = KahanSum::new();
    for k in 0..m {
        let e = eulerian(m, k)?.to_f64().unwrap_or(f64::INFINITY);
        acc.add(e * z.powi((m - k) as i32));
    }
    Ok(acc.value() / (1.0 - z).powi(m as i32 + 1))
}

/// Result of a truncated series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncated {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

const LERCH_MAX_TERMS: usize = 50_000_000;

/// Lerch transcendent Φ(z, s, α) = Σ_{ℓ≥0} z^ℓ (α+ℓ)^{-s} by direct summation.
pub fn lerch(z: f64, s: f64, alpha: f64) -> Result<f64> {
    lerch_series(z, s, alpha).map(|t| t.value)
}

/// [`lerch`] with its geometric tail bound and term count.
pub fn lerch_series(z: f64, s: f64, alpha: f64) -> Result<Truncated> {
    if z >= 1.0 {
        return Err(Error::Pole { op: "lerch", at: format!("z = {z}") });
    }
    if !(z >= 0.0) || !(alpha > 0.0) || !s.is_finite() {
        return Err(Error::domain("lerch", format!("need 0 ≤ z < 1 and α > 0, got z={z}, α={alpha}")));
    }
    let first = alpha.powf(-s);
    if z == 0.0 {
        return Ok(Truncated { value: first, tail_bound: 0.0, terms: 1 });
    }
    let mut acc = KahanSum::new();
    let mut zl = 1.0;
    let mut l = 0usize;
    loop {
        let base = alpha + l as f64;
        let t = zl * base.powf(-s);
        acc.add(t);
        l += 1;
        zl *= z;
        // ratio of consecutive terms from here on is at most rho
        let rho = if s >= 0.0 { z } else { z * (1.0 + 1.0 / (base + 1.0)).powf(-s) };
        if rho < 1.0 {
            let next = zl * (alpha + l as f64).powf(-s);
            let tail = next / (1.0 - rho);
            let partial = acc.value().abs();
            if tail <= 1e-16 * partial || tail == 0.0 {
                return Ok(Truncated { value: acc.value(), tail_bound: tail, terms: l });
            }
        }
        if l >= LERCH_MAX_TERMS {
            return Err(Error::domain("lerch", format!("series did not converge for z = {z}")));
        }
    }
}

/// Output of [`lerch_taylor`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LerchTaylor {
    pub value: f64,
    /// Magnitude of the last series term (times the prefactor), an error estimate.
    pub error_estimate: f64,
    /// The Γ(1−s)(−ln z)^{s−1} contribution (times the prefactor).
    pub leading_term: f64,
}

/// Φ(z, s, α) from its expansion around z = 1:
/// `z^{-α}(Γ(1−s)(−ln z)^{s−1} + Σ_{j≤jmax} ζ(s−j, α) ln^j z / j!)`.
pub fn lerch_taylor(z: f64, s: f64, alpha: f64, jmax: u32) -> Result<LerchTaylor> {
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::domain("lerch_taylor", format!("z = {z} must lie in (0, 1)")));
    }
    let lz = z.ln();
    if lz.abs() >= 2.0 * PI {
        return Err(Error::domain("lerch_taylor", format!("|ln z| = {} ≥ 2π", lz.abs())));
    }
    if s.fract() == 0.0 {
        return Err(Error::domain("lerch_taylor", format!("s = {s} must not be an integer")));
    }
    if !(alpha > 0.0) {
        return Err(Error::domain("lerch_taylor", format!("α = {alpha} must be positive")));
    }
    let pre = z.powf(-alpha);
    let lead = gamma(1.0 - s) * (-lz).powf(s - 1.0);
    let mut acc = KahanSum::new();
    acc.add(lead);
    let mut last = 0.0;
    let mut pw = 1.0; // ln^j z / j!
    for j in 0..=jmax {
        if j > 0 {
            pw *= lz / j as f64;
        }
        let t = hurwitz_zeta_ext(s - j as f64, alpha)? * pw;
        acc.add(t);
        last = t;
    }
    Ok(LerchTaylor {
        value: pre * acc.value(),
        error_estimate: (pre * last).abs(),
        leading_term: pre * lead,
    })
}

/// Stirling number of the second kind S(a, b).
pub fn stirling2(a: u32, b: u32) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    if a == 0 {
        return BigUint::one();
    }
    if b == 0 {
        return BigUint::zero();
    }
    // row[k] = S(n, k), updated in place from right to left
    let b = b as usize;
    let mut row = vec![BigUint::zero(); b + 1];
    row[0] = BigUint::one();
    for n in 1..=a as usize {
        for k in (1..=b.min(n)).rev() {
            let prev = std::mem::take(&mut row[k]);
            row[k] = prev * BigUint::from(k) + &row[k - 1];
        }
        row[0] = BigUint::zero();
    }
    std::mem::take(&mut row[b])
}

fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    c
}

/// Eulerian number ⟨m, k⟩, for 0 ≤ k ≤ m − 1.
pub fn eulerian(m: u32, k: u32) -> Result<BigUint> {
    if m == 0 || k >= m {
        return Err(Error::Range(format!("eulerian({m}, {k}) needs 0 ≤ k ≤ m−1")));
    }
    let mut acc = BigInt::zero();
    for j in 0..=k + 1 {
        let term = BigInt::from(binomial(m + 1, j)) * num_traits::pow(BigInt::from(k + 1 - j), m as usize);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc.to_biguint().expect("Eulerian numbers are non-negative"))
}

/// Ordered Bell (Fubini) number Σ_b b!·S(a, b).
pub fn ordered_bell(a: u32) -> BigUint {
    let mut fact = BigUint::one();
    let mut acc = BigUint::zero();
    for b in 0..=a {
        if b > 0 {
            fact *= BigUint::from(b);
        }
        acc += &fact * stirling2(a, b);
    }
    acc
}

/// The asymptotic a!/(2 (ln 2)^{a+1}).
pub fn ordered_bell_asymptotic(a: u32) -> f64 {
    let ln2 = std::f64::consts::LN_2;
    (ln_gamma(a as f64 + 1.0) - ln2 - (a as f64 + 1.0) * ln2.ln()).exp()
}

/// f_k(b) = Σ_{d | b} μ(d) (b/d)^k, exactly.
pub fn mobius_f(k: i64, b: u64) -> Result<BigRational> {
    if b == 0 {
        return Err(Error::domain("mobius_f", "b must be at least 1"));
    }
    let mut acc = BigRational::zero();
    for d in divisors(b) {
        let mu = mobius(d);
        if mu == 0 {
            continue;
        }
        let base = BigInt::from(b / d);
        let p = num_traits::pow(base, k.unsigned_abs() as usize);
        let term = if k >= 0 {
            BigRational::from_integer(p)
        } else {
            BigRational::new(BigInt::one(), p)
        };
        if mu > 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// f_k(b) for real k.
pub fn mobius_f_real(k: f64, b: u64) -> Result<f64> {
    if b == 0 {
        return Err(Error::domain("mobius_f", "b must be at least 1"));
    }
    Ok(divisors(b)
        .into_iter()
        .map(|d| mobius(d) as f64 * ((b / d) as f64).powf(k))
        .collect::<KahanSum>()
        .value())
}

/// n! as f64 (exact up to 22!).
pub fn factorial(n: u32) -> f64 {
    factorial_f64(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn zeta_closed_forms() {
        assert!(close(riemann_zeta(2.0).unwrap(), PI * PI / 6.0, 1e-14));
        assert!(close(riemann_zeta(4.0).unwrap(), PI.powi(4) / 90.0, 1e-14));
        assert!(close(riemann_zeta(60.0).unwrap(), 1.0, 1e-16));
        assert!(riemann_zeta(1.0).is_err());
        assert!(close(restricted_zeta(2.0, 2).unwrap(), PI * PI / 8.0, 1e-14));
        assert!(close(hurwitz_zeta(2.0, 0.5).unwrap(), PI * PI / 2.0, 1e-13));
        assert!(close(hurwitz_zeta(3.0, 2.0).unwrap(), riemann_zeta(3.0).unwrap() - 1.0, 1e-13));
        assert!(hurwitz_zeta(0.5, 1.0).is_err());
    }

    #[test]
    fn hurwitz_continuation_matches_bernoulli_values() {
        // ζ(−n, a) = −B_{n+1}(a)/(n+1)
        let a: f64 = 0.3;
        let b4 = a.powi(4) - 2.0 * a.powi(3) + a * a - 1.0 / 30.0;
        assert!(close(hurwitz_zeta_ext(-3.0, a).unwrap(), -b4 / 4.0, 1e-9));
        let b6 = a.powi(6) - 3.0 * a.powi(5) + 2.5 * a.powi(4) - 0.5 * a * a + 1.0 / 42.0;
        assert!(close(hurwitz_zeta_ext(-5.0, a).unwrap(), -b6 / 6.0, 1e-9));
        assert!(close(hurwitz_zeta_ext(-5.0, a + 2.0).unwrap(), -b6 / 6.0 - a.powi(5) - (a + 1.0).powi(5), 1e-9));
        let b2 = a * a - a + 1.0 / 6.0;
        assert!(close(hurwitz_zeta_ext(-1.0, a).unwrap(), -b2 / 2.0, 1e-11));
    }

    #[test]
    fn polylog_examples() {
        let v = polylog_roots_of_unity(2.0, &QmodZ::new(1, 2)).unwrap();
        assert!(close(v.re, -PI * PI / 12.0, 1e-13) && v.im.abs() < 1e-14);
        let v = polylog_roots_of_unity(2.0, &QmodZ::zero()).unwrap();
        assert!(close(v.re, PI * PI / 6.0, 1e-14));
    }

    #[test]
    fn polylog_neg_examples() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(polylog_neg(1, &half).unwrap(), BigRational::from_integer(2.into()));
        assert_eq!(polylog_neg(2, &half).unwrap(), BigRational::from_integer(6.into()));
        assert!(polylog_neg(0, &BigRational::zero()).unwrap().is_zero());
        assert!(matches!(polylog_neg(3, &BigRational::one()), Err(Error::Pole { .. })));
        assert!(close(polylog_neg_f64(2, 0.5).unwrap(), 6.0, 1e-15));
    }

    #[test]
    fn lerch_examples() {
        assert!(close(lerch(0.0, 2.0, 3.0).unwrap(), 1.0 / 9.0, 1e-15));
        assert!(close(lerch(0.5, 1.0, 1.0).unwrap(), 2.0 * 2f64.ln(), 1e-14));
        assert!(lerch(1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn lerch_taylor_examples() {
        let t = lerch_taylor(0.8, 2.5, 1.25, 30).unwrap();
        let d = lerch(0.8, 2.5, 1.25).unwrap();
        assert!(close(t.value, d, 1e-8), "{} vs {}", t.value, d);
        let z = (-1f64).exp();
        let t = lerch_taylor(z, 0.5, 1.0, 40).unwrap();
        assert!(close(t.value, lerch(z, 0.5, 1.0).unwrap(), 1e-8));
        assert!(lerch_taylor(1e-4, 0.5, 1.0, 10).is_err());
        assert!(lerch_taylor(0.5, 2.0, 1.0, 10).is_err());
    }

    #[test]
    fn combinatorial_examples() {
        assert_eq!(stirling2(4, 2), BigUint::from(7u32));
        assert_eq!(stirling2(7, 7), BigUint::one());
        assert_eq!(stirling2(5, 0), BigUint::zero());
        assert_eq!(stirling2(0, 0), BigUint::one());
        assert_eq!(eulerian(3, 1).unwrap(), BigUint::from(4u32));
        assert_eq!(eulerian(9, 0).unwrap(), BigUint::one());
        let row: BigUint = (0..4).map(|k| eulerian(4, k).unwrap()).sum();
        assert_eq!(row, BigUint::from(24u32));
        assert!(eulerian(3, 3).is_err());
        assert_eq!(ordered_bell(3), BigUint::from(13u32));
        assert_eq!(ordered_bell(0), BigUint::one());
        assert_eq!(mobius_f(1, 6).unwrap(), BigRational::from_integer(2.into()));
        assert_eq!(mobius_f(5, 1).unwrap(), BigRational::one());
        assert!(mobius_f(0, 4).unwrap().is_zero());
    }
}
