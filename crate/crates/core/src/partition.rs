//! Partition functions and convergence thresholds.
//!
//! Conventions: natural logarithms throughout, `x = q^{-β}`, and a prime knot
//! of weight `w = Cr + g` contributes the Euler factor `(1 − x^w)^{-1}`.

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::arith::{omega_sieve, primes_up_to};
use crate::catalog::{Catalog, MultiplicityModel, C_LOWER, C_UPPER};
use crate::error::{Error, Result};
use crate::specfun::{restricted_zeta_minus_one, riemann_zeta};
use crate::sum::KahanSum;

/// Default absolute tolerance of series.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default depth of the multiset enumeration.
pub const DEFAULT_DEPTH: u32 = 40;
const MAX_DEPTH: u32 = 5000;

/// ln λ_β with λ_β = q^{-β}/(1 − q^{-β}).
pub fn ln_lambda_beta(beta: f64, q: f64) -> f64 {
    let lq = q.ln();
    -beta * lq - (-(-beta * lq).exp()).ln_1p()
}

pub fn lambda_beta(beta: f64, q: u64) -> f64 {
    let x = (q as f64).powf(-beta);
    x / (1.0 - x)
}

/// ln C − 6 ln ln 2.
pub fn beta_plus_for(c: f64) -> f64 {
    c.ln() - 6.0 * LN_2.ln()
}

/// β₊ = ln(2^20/3^6) − 6 ln ln 2.
pub fn threshold_beta_plus() -> f64 {
    beta_plus_for(C_UPPER)
}

/// 2 ln 20 − 6 ln ln 2, the right-hand side defining β₋.
pub fn beta_minus_rhs() -> f64 {
    beta_plus_for(C_LOWER)
}

/// Bisection for an increasing or decreasing `f` with a sign change on [lo, hi].
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::Bracket { lo, hi });
    }
    let neg_lo = flo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == neg_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < tol {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn check_q(q: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::domain("thresholds", format!("q = {q} must be at least 2")));
    }
    Ok(())
}

const ROOT_TOL: f64 = 1e-13;

/// β₋(q): the root of β − 6 ln λ_β = 2 ln 20 − 6 ln ln 2 with β > ln 2/ln q.
pub fn threshold_beta_minus(q: u64) -> Result<f64> {
    check_q(q)?;
    let qf = q as f64;
    let rhs = beta_minus_rhs();
    let lo = LN_2 / qf.ln() + 1e-9;
    bisect(|b| b - 6.0 * ln_lambda_beta(b, qf) - rhs, lo, 60.0, ROOT_TOL)
}

/// f(β, q) = β − 6 ln λ_β + 6 ln β.
pub fn f_beta_q(beta: f64, q: f64) -> f64 {
    beta - 6.0 * ln_lambda_beta(beta, q) + 6.0 * beta.ln()
}

/// β̃₋(q): the root of f(β, q) = ln 400 − 6 ln ln q with β > ln 2/ln q.
pub fn threshold_beta_tilde(q: u64) -> Result<f64> {
    check_q(q)?;
    let qf = q as f64;
    let rhs = C_LOWER.ln() - 6.0 * qf.ln().ln();
    let lo = LN_2 / qf.ln() + 1e-9;
    bisect(|b| f_beta_q(b, qf) - rhs, lo, 60.0, ROOT_TOL)
}

/// F(q) = β₊ − 6 ln λ_{β₊}(q) − (2 ln 20 − 6 ln ln 2).
pub fn capital_f(q: u64) -> f64 {
    let bp = threshold_beta_plus();
    bp - 6.0 * ln_lambda_beta(bp, q as f64) - beta_minus_rhs()
}

/// x with ln 2 = (2 ln 20 − 6 ln ln 2) ln x.
pub fn crossover_x() -> Result<f64> {
    let rhs = beta_minus_rhs();
    bisect(|x| rhs * x.ln() - LN_2, 1.0, 2.0, ROOT_TOL)
}

/// H(q) = f(π/ln q, q) − (ln C − 6 ln ln q).
pub fn h_function(q: f64, c: f64) -> f64 {
    f_beta_q(PI / q.ln(), q) - (c.ln() - 6.0 * q.ln().ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub q: u64,
    pub beta_plus: f64,
    pub beta_plus_ceil: u32,
    pub beta_minus: f64,
    pub beta_tilde_minus: f64,
    pub rhs_constant: f64,
    pub capital_f: f64,
    pub crossover_x: f64,
}

pub fn thresholds(q: u64) -> Result<ThresholdReport> {
    let beta_plus = threshold_beta_plus();
    let beta_minus = threshold_beta_minus(q)?;
    let beta_tilde_minus = threshold_beta_tilde(q)?;
    if !(beta_tilde_minus < beta_minus && beta_minus < beta_plus) {
        return Err(Error::Verification(format!(
            "threshold ordering fails for q = {q}: {beta_tilde_minus} < {beta_minus} < {beta_plus}"
        )));
    }
    Ok(ThresholdReport {
        q,
        beta_plus,
        beta_plus_ceil: beta_plus.ceil() as u32,
        beta_minus,
        beta_tilde_minus,
        rhs_constant: beta_minus_rhs(),
        capital_f: capital_f(q),
        crossover_x: crossover_x()?,
    })
}

/// Rows (β, f(β, q)) on `n` evenly spaced points of (ln 2/ln q, beta_max].
pub fn figure_f(q: u64, beta_min: Option<f64>, beta_max: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    check_q(q)?;
    let qf = q as f64;
    let floor = LN_2 / qf.ln();
    let lo = beta_min.unwrap_or(floor + 1e-6);
    if lo <= floor || beta_max <= lo || n < 2 {
        return Err(Error::domain("figure_f", format!("need ln2/ln q = {floor} < beta_min < beta_max and n ≥ 2")));
    }
    Ok((0..n)
        .map(|i| {
            let b = lo + (beta_max - lo) * i as f64 / (n - 1) as f64;
            (b, f_beta_q(b, qf))
        })
        .collect())
}

/// Rows (q, H(q)) with C = 400; fails if H is not positive somewhere on the grid.
pub fn figure_h(q_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    let rows: Vec<(f64, f64)> = q_grid
        .iter()
        .map(|&q| {
            if q < 2.0 {
                Err(Error::domain("figure_h", format!("q = {q} < 2")))
            } else {
                Ok((q, h_function(q, C_LOWER)))
            }
        })
        .collect::<Result<_>>()?;
    if let Some(&(q, h)) = rows.iter().find(|r| !(r.1 > 0.0)) {
        return Err(Error::Verification(format!("H({q}) = {h} is not positive")));
    }
    Ok(rows)
}

/// Convergence regime of the knot partition function at (β, q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// β ≥ β₊.
    Convergent,
    /// β₋ ≤ β < β₊: no information from the estimates.
    Undetermined,
    /// β < β₋.
    Divergent,
}

pub fn regime(beta: f64, q: u64) -> Result<Regime> {
    Ok(if beta >= threshold_beta_plus() {
        Regime::Convergent
    } else if beta >= threshold_beta_minus(q)? {
        Regime::Undetermined
    } else {
        Regime::Divergent
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Agreement {
    pub direct: f64,
    pub abs_diff: f64,
    pub bound: f64,
    pub within_bound: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    pub tail_bound: f64,
    pub converged: bool,
    pub regime: Regime,
    pub agreement: Option<Agreement>,
}

/// Prime factors grouped by weight: `weight ↦ number of primes` (real for the model).
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PrimeSource {
    pub weights: BTreeMap<u32, f64>,
}

impl PrimeSource {
    /// The unknot-only source (no primes).
    pub fn empty() -> Self {
        PrimeSource::default()
    }

    pub fn from_weights(ws: &[u32]) -> Self {
        let mut weights = BTreeMap::new();
        for &w in ws {
            *weights.entry(w).or_insert(0.0) += 1.0;
        }
        PrimeSource { weights }
    }

    pub fn from_catalog(cat: &Catalog) -> Self {
        let ws: Vec<u32> = cat.records().iter().map(|r| r.weight()).collect();
        Self::from_weights(&ws)
    }

    /// Model primes: C_g n^{6g−4} primes of weight n + g inside the truncation box.
    pub fn from_model(m: &MultiplicityModel) -> Self {
        let mut weights = BTreeMap::new();
        for g in 1..=m.g_max {
            for n in 1..=m.n_max {
                let c = m.count(n, g);
                if c > 0.0 {
                    *weights.entry(n + g).or_insert(0.0) += c;
                }
            }
        }
        PrimeSource { weights }
    }

    pub fn min_weight(&self) -> Option<u32> {
        self.weights.keys().next().copied()
    }

    fn check_weights(&self) -> Result<()> {
        if self.weights.contains_key(&0) {
            return Err(Error::domain("prime source", "weight-0 prime (unknot is not a prime)"));
        }
        Ok(())
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::domain("partition", format!("β = {beta} must be positive and finite")));
    }
    Ok(())
}

/// ln ∏ (1 − x^w)^{-c} with x = q^{-β}, summed in ascending weight.
pub fn ln_euler_product(src: &PrimeSource, beta: f64, q: u64) -> Result<f64> {
    src.check_weights()?;
    let lq = (q as f64).ln();
    let mut acc = KahanSum::new();
    for (&w, &c) in &src.weights {
        let xw = (-beta * lq * w as f64).exp();
        if xw >= 1.0 {
            return Err(Error::Divergent { regime: "factor", msg: format!("q^(-βw) = {xw} ≥ 1 for w = {w}") });
        }
        acc.add(-c * (-xw).ln_1p());
    }
    Ok(acc.value())
}

pub fn euler_product(src: &PrimeSource, beta: f64, q: u64) -> Result<f64> {
    Ok(ln_euler_product(src, beta, q)?.exp())
}

/// Coefficients a_0..=a_depth of the series in x whose logarithm has
/// coefficients `l_n`, via n a_n = Σ_k k l_k a_{n−k}.
fn exp_series(l: &[f64]) -> Vec<f64> {
    let depth = l.len() - 1;
    let mut a = vec![0.0; depth + 1];
    a[0] = 1.0;
    for n in 1..=depth {
        let mut s = KahanSum::new();
        for k in 1..=n {
            if l[k] != 0.0 {
                s.add(k as f64 * l[k] * a[n - k]);
            }
        }
        a[n] = s.value() / n as f64;
    }
    a
}

/// Number of multisets of source primes with each total weight n ≤ depth.
pub fn multiset_counts(src: &PrimeSource, depth: u32) -> Vec<f64> {
    let d = depth as usize;
    let mut l = vec![0.0; d + 1];
    for (&w, &c) in &src.weights {
        let w = w as usize;
        let mut k = 1;
        while w * k <= d {
            l[w * k] += c / k as f64;
            k += 1;
        }
    }
    exp_series(&l)
}

/// Σ_K 2^{ω(K)} over multisets with each total weight n ≤ depth.
pub fn signed_multiset_counts(src: &PrimeSource, depth: u32) -> Vec<f64> {
    let d = depth as usize;
    let mut l = vec![0.0; d + 1];
    for (&w, &c) in &src.weights {
        let w = w as usize;
        let mut k = 1;
        while w * k <= d {
            l[w * k] += 2.0 * c / k as f64;
            k += 2;
        }
    }
    exp_series(&l)
}

fn power_sum(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = KahanSum::new();
    let mut xn = 1.0;
    for &a in coeffs {
        acc.add(a * xn);
        xn *= x;
    }
    acc.value()
}

/// Rounding allowance added to mathematical tail bounds when comparing two
/// floating-point evaluations of the same quantity.
fn rounding_allowance(value: f64, factors: usize, depth: u32) -> f64 {
    64.0 * f64::EPSILON * value.abs() * (1 + factors + depth as usize) as f64
}

/// Truncated multiset sum Σ_{wt ≤ W} x^{wt} and its rigorous tail bound
/// x^{(W+1)/2} ∏ (1 − x^{w/2})^{-c}.
pub fn multiset_sum(src: &PrimeSource, beta: f64, q: u64, depth: u32) -> Result<(f64, f64)> {
    src.check_weights()?;
    let x = (q as f64).powf(-beta);
    let sum = power_sum(&multiset_counts(src, depth), x);
    let ln_half = ln_euler_product(src, beta / 2.0, q)?;
    let tail = ((depth as f64 + 1.0) / 2.0 * (-beta * (q as f64).ln()) + ln_half).exp();
    Ok((sum, tail))
}

/// Truncated Σ_{wt ≤ W} 2^{ω(K)} x^{wt} and the tail bound
/// x^{(W+1)/2} ∏ ((1 + x^{w/2})/(1 − x^{w/2}))^c.
pub fn signed_multiset_sum(src: &PrimeSource, beta: f64, q: u64, depth: u32) -> Result<(f64, f64)> {
    src.check_weights()?;
    let x = (q as f64).powf(-beta);
    let sum = power_sum(&signed_multiset_counts(src, depth), x);
    let ln_half = ln_groth_product(src, beta / 2.0, q)?;
    let tail = ((depth as f64 + 1.0) / 2.0 * (-beta * (q as f64).ln()) + ln_half).exp();
    Ok((sum, tail))
}

fn ln_groth_product(src: &PrimeSource, beta: f64, q: u64) -> Result<f64> {
    let lq = (q as f64).ln();
    let mut acc = KahanSum::new();
    for (&w, &c) in &src.weights {
        let xw = (-beta * lq * w as f64).exp();
        if xw >= 1.0 {
            return Err(Error::Divergent { regime: "factor", msg: format!("q^(-βw) = {xw} ≥ 1 for w = {w}") });
        }
        acc.add(c * (xw.ln_1p() - (-xw).ln_1p()));
    }
    Ok(acc.value())
}

fn regime_or_error(beta: f64, q: u64) -> Result<Regime> {
    check_beta(beta)?;
    check_q(q)?;
    let r = regime(beta, q)?;
    if r == Regime::Divergent {
        return Err(Error::Divergent {
            regime: "beta < beta_minus",
            msg: format!("β = {beta} < β₋({q}) = {}", threshold_beta_minus(q)?),
        });
    }
    Ok(r)
}

/// Picks the smallest depth ≥ DEFAULT_DEPTH (doubling) whose tail bound is below `tol`.
fn adaptive<F: Fn(u32) -> Result<(f64, f64)>>(f: F, tol: f64) -> Result<(f64, f64, u32)> {
    let mut depth = DEFAULT_DEPTH;
    loop {
        let (s, t) = f(depth)?;
        if t < tol || depth >= MAX_DEPTH {
            return Ok((s, t, depth));
        }
        depth = (depth * 2).min(MAX_DEPTH);
    }
}

/// Z_a(β) = Σ_K q^{-β(Cr+g)} as an Euler product, checked against the weight-ordered
/// multiset sum. β < β₋ is a divergence error; β ∈ [β₋, β₊) returns `converged = false`.
pub fn z_alternating(beta: f64, q: u64, src: &PrimeSource, tol: f64) -> Result<SeriesResult> {
    let regime = regime_or_error(beta, q)?;
    let value = euler_product(src, beta, q)?;
    let (direct, tail, depth) = adaptive(|d| multiset_sum(src, beta, q, d), tol)?;
    let bound = tail + rounding_allowance(value, src.weights.len(), depth);
    let abs_diff = (value - direct).abs();
    Ok(SeriesResult {
        value,
        terms_used: depth as usize + 1,
        tail_bound: tail,
        converged: regime == Regime::Convergent && tail < tol,
        regime,
        agreement: Some(Agreement { direct, abs_diff, bound, within_bound: abs_diff <= bound }),
    })
}

/// Z_G(β) = Z_a(β)²/Z_a(2β), checked against Σ 2^{ω(K)} q^{-β(Cr+g)}.
pub fn z_grothendieck(beta: f64, q: u64, src: &PrimeSource, tol: f64) -> Result<SeriesResult> {
    let regime = regime_or_error(beta, q)?;
    let value = (2.0 * ln_euler_product(src, beta, q)? - ln_euler_product(src, 2.0 * beta, q)?).exp();
    let (direct, tail, depth) = adaptive(|d| signed_multiset_sum(src, beta, q, d), tol)?;
    let bound = tail + rounding_allowance(value, src.weights.len(), depth);
    let abs_diff = (value - direct).abs();
    Ok(SeriesResult {
        value,
        terms_used: depth as usize + 1,
        tail_bound: tail,
        converged: regime == Regime::Convergent && tail < tol,
        regime,
        agreement: Some(Agreement { direct, abs_diff, bound, within_bound: abs_diff <= bound }),
    })
}

/// ζ(β)·Z_a(β) for the knots × ℕ system; needs β > max(β₊, 1).
pub fn z_knots_times_n(beta: f64, q: u64, src: &PrimeSource, tol: f64) -> Result<SeriesResult> {
    if beta <= 1.0 {
        return Err(Error::Divergent { regime: "beta <= 1", msg: format!("ζ(β) diverges at β = {beta}") });
    }
    let z = z_alternating(beta, q, src, tol)?;
    let zeta = riemann_zeta(beta)?;
    Ok(SeriesResult {
        value: zeta * z.value,
        tail_bound: zeta * z.tail_bound,
        agreement: z.agreement.map(|a| Agreement {
            direct: zeta * a.direct,
            abs_diff: zeta * a.abs_diff,
            bound: zeta * a.bound,
            within_bound: a.within_bound,
        }),
        ..z
    })
}

/// (1 + p^{-β})/(1 − p^{-β}) = (1 − p^{-2β})/(1 − p^{-β})².
pub fn qstar_euler_factor(p: u64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let x = (p as f64).powf(-beta);
    Ok((1.0 + x) / (1.0 - x))
}

/// ∏_{p ≤ p_max} of [`qstar_euler_factor`].
pub fn qstar_euler_product(beta: f64, p_max: usize) -> Result<f64> {
    let mut acc = KahanSum::new();
    for p in primes_up_to(p_max) {
        acc.add(qstar_euler_factor(p, beta)?.ln());
    }
    Ok(acc.value().exp())
}

/// Upper bound on Σ_{n>N} d(n) n^{-β}, from Σ_{n≤x} d(n) ≤ x(ln x + 1).
pub fn divisor_tail_bound(n: u64, beta: f64) -> f64 {
    let nf = n as f64;
    let b1 = beta - 1.0;
    let p = nf.powf(1.0 - beta);
    beta * (p * nf.ln() / b1 + p / (b1 * b1) + p / b1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QstarResult {
    /// ζ²(β)/ζ(2β).
    pub value: f64,
    /// Σ_{n ≤ n_max} 2^{ω(n)} n^{-β}.
    pub partial_sum: f64,
    pub tail_bound: f64,
    pub n_max: u64,
    /// partial_sum ≤ value ≤ partial_sum + tail_bound (with rounding slack).
    pub bracketed: bool,
    pub rel_err: f64,
}

/// Tr(e^{-βH}) = ζ²(β)/ζ(2β) for the ℚ*₊ system, with the sieve sum as a check.
pub fn qstar_partition(beta: f64, n_max: u64) -> Result<QstarResult> {
    if !(beta > 1.0) {
        return Err(Error::Divergent { regime: "beta <= 1", msg: format!("ζ²(β)/ζ(2β) diverges at β = {beta}") });
    }
    let value = riemann_zeta(beta)?.powi(2) / riemann_zeta(2.0 * beta)?;
    let n = usize::try_from(n_max).map_err(|_| Error::Range("n_max too large".into()))?;
    let omega = omega_sieve(n);
    let mut acc = KahanSum::new();
    for k in (1..=n).rev() {
        acc.add((1u64 << omega[k]) as f64 * (k as f64).powf(-beta));
    }
    let partial_sum = acc.value();
    let tail_bound = divisor_tail_bound(n_max.max(1), beta);
    let slack = 1e-13 * value;
    Ok(QstarResult {
        value,
        partial_sum,
        tail_bound,
        n_max,
        bracketed: partial_sum <= value + slack && value <= partial_sum + tail_bound + slack,
        rel_err: (partial_sum - value).abs() / value,
    })
}

/// ‖[D_p, δ_{p^m}]‖ = |m| ln p.
pub fn spectral_commutator_norm(p: u64, m: i64) -> f64 {
    m.unsigned_abs() as f64 * (p as f64).ln()
}

/// Largest singular value of [D_p, δ_{p^m}] truncated to the basis ε_{p^n},
/// n ∈ [−size/2, size/2).
pub fn spectral_commutator_truncated(p: u64, m: i64, size: usize) -> f64 {
    let lp = (p as f64).ln();
    let off = (size / 2) as i64;
    let mut c = DMatrix::<f64>::zeros(size, size);
    for col in 0..size {
        let n = col as i64 - off;
        let row = col as i64 + m;
        if (0..size as i64).contains(&row) {
            // (D δ − δ D) ε_n = ((n+m) − n) ln p ε_{n+m}
            c[(row as usize, col)] = ((n + m) as f64 - n as f64) * lp;
        }
    }
    c.singular_values().iter().cloned().fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZTauResult {
    pub value: f64,
    pub ln_value: f64,
    /// |P_N − P_{2N}|, N = half the truncation.
    pub stabilization: f64,
    pub terms: usize,
    pub converged: bool,
}

/// ln ζ_m(s); zero for s = ∞.
pub fn ln_restricted_zeta(s: f64, m: u64) -> Result<f64> {
    if s.is_infinite() {
        return Ok(0.0);
    }
    if s > 4000.0 {
        return Ok(0.0);
    }
    Ok(restricted_zeta_minus_one(s, m)?.ln_1p())
}

/// f as f64, or ∞ once it exceeds the f64 range.
fn big_to_f64(f: &BigUint) -> f64 {
    f.to_f64().unwrap_or(f64::INFINITY)
}

/// Z_τ(β) = ∏_g ζ_{n_ρ}(f(g) β) over a truncation of 𝒢, accumulated in log space.
pub fn z_tau(beta: f64, f_values: &[BigUint], n_rho: u64, tol: f64) -> Result<ZTauResult> {
    if !(beta > 1.0) {
        return Err(Error::Divergent { regime: "beta <= 1", msg: format!("Tr_τ-class fails at β = {beta}") });
    }
    if n_rho == 0 {
        return Err(Error::domain("z_tau", "n_rho must be at least 1"));
    }
    let ones = f_values.iter().filter(|f| f.is_one()).count();
    if ones != 1 {
        return Err(Error::Precondition(format!("expected exactly one f = 1 entry, found {ones}")));
    }
    let mut fs: Vec<&BigUint> = f_values.iter().collect();
    fs.sort();
    let logs = fs
        .iter()
        .map(|f| ln_restricted_zeta(big_to_f64(f) * beta, n_rho))
        .collect::<Result<Vec<f64>>>()?;
    let half = logs.len().div_ceil(2);
    let p_n: f64 = logs[..half].iter().copied().collect::<KahanSum>().value();
    let p_2n: f64 = logs.iter().copied().collect::<KahanSum>().value();
    let stabilization = (p_n.exp() - p_2n.exp()).abs();
    Ok(ZTauResult {
        value: p_2n.exp(),
        ln_value: p_2n,
        stabilization,
        terms: logs.len(),
        converged: stabilization < tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_examples() {
        assert!((lambda_beta(1.0, 2) - 1.0).abs() < 1e-15);
        assert!((lambda_beta(LN_2 / 7f64.ln(), 7) - 1.0).abs() < 1e-12);
        assert!(lambda_beta(200.0, 2) > 0.0 && lambda_beta(200.0, 2) < 1e-59);
        assert!((ln_lambda_beta(3.0, 5.0) - lambda_beta(3.0, 5).ln()).abs() < 1e-13);
    }

    #[test]
    fn thresholds_match_published_values() {
        assert!((threshold_beta_plus() - 9.4704).abs() < 1e-3);
        assert!((20.0 * LN_2 - 6.0 * 3f64.ln() - 7.2713).abs() < 1e-4);
        assert!((-6.0 * LN_2.ln() - 2.1991).abs() < 1e-4);
        assert!((beta_minus_rhs() - 8.1905).abs() < 5e-4);
        assert!((threshold_beta_minus(2).unwrap() - 1.9391).abs() < 5e-4);
        assert!((threshold_beta_minus(100).unwrap() - 0.3362).abs() < 5e-4);
        assert!((threshold_beta_minus(1000).unwrap() - 0.2262).abs() < 5e-4);
        assert!((capital_f(2) - 40.6574).abs() < 5e-3);
        assert!((crossover_x().unwrap() - 1.0883).abs() < 5e-4);
        assert!(threshold_beta_minus(1).is_err());
    }

    #[test]
    fn tilde_root_residual() {
        for q in [2u64, 3, 11, 100] {
            let b = threshold_beta_tilde(q).unwrap();
            let r = f_beta_q(b, q as f64) - (400f64.ln() - 6.0 * (q as f64).ln().ln());
            assert!(r.abs() < 1e-9, "q={q} residual {r}");
            assert!(b < threshold_beta_minus(q).unwrap());
        }
    }

    #[test]
    fn single_prime_is_geometric() {
        let src = PrimeSource::from_weights(&[4]);
        let r = z_alternating(10.0, 2, &src, 1e-12).unwrap();
        assert!((r.value - 1.0 / (1.0 - 2f64.powi(-40))).abs() < 1e-15);
        assert!(r.agreement.unwrap().within_bound);
        assert!(r.converged);
        let g = z_grothendieck(10.0, 2, &src, 1e-12).unwrap();
        let x = 2f64.powi(-40);
        assert!((g.value - (1.0 + x) / (1.0 - x)).abs() < 1e-15);
    }

    #[test]
    fn regimes() {
        let src = PrimeSource::from_weights(&[4, 5]);
        assert!(matches!(z_alternating(1.0, 2, &src, 1e-12), Err(Error::Divergent { .. })));
        let r = z_alternating(5.0, 2, &src, 1e-12).unwrap();
        assert_eq!(r.regime, Regime::Undetermined);
        assert!(!r.converged);
        let e = z_alternating(10.0, 2, &PrimeSource::empty(), 1e-12).unwrap();
        assert_eq!(e.value, 1.0);
    }

    #[test]
    fn qstar_small() {
        assert!((qstar_euler_factor(2, 1.0).unwrap() - 3.0).abs() < 1e-15);
        let r = qstar_partition(2.0, 10_000).unwrap();
        assert!((r.value - 2.5).abs() < 1e-13);
        assert!(r.bracketed);
        assert!(qstar_partition(1.0, 10).is_err());
    }

    #[test]
    fn commutator_norm() {
        assert!((spectral_commutator_norm(2, 1) - LN_2).abs() < 1e-15);
        assert_eq!(spectral_commutator_norm(5, 0), 0.0);
        let s = spectral_commutator_truncated(3, -2, 60);
        assert!((s - 2.0 * 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn z_tau_examples() {
        let one = BigUint::one();
        let r = z_tau(1.5, std::slice::from_ref(&one), 1, 1e-9).unwrap();
        assert!((r.value - riemann_zeta(1.5).unwrap()).abs() < 1e-12);
        let big = BigUint::from(2u32).pow(40u32);
        let r = z_tau(1.5, &[one.clone(), big], 1, 1e-9).unwrap();
        assert!((r.value - riemann_zeta(1.5).unwrap()).abs() < 1e-12);
        let r = z_tau(2.0, std::slice::from_ref(&one), 6, 1e-9).unwrap();
        assert!((r.value - crate::specfun::restricted_zeta(2.0, 6).unwrap()).abs() < 1e-12);
        assert!(matches!(z_tau(1.0, &[one], 1, 1e-9), Err(Error::Divergent { .. })));
        assert!(z_tau(2.0, &[], 1, 1e-9).is_err());
    }
}
