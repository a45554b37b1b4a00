//! Gibbs and KMS state evaluation.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::{divisors, mobius, totient};
use crate::catalog::{Catalog, MultiplicityModel};
use crate::error::{Error, Result};
use crate::partition::beta_plus_for;
use crate::qmodz::QmodZ;
use crate::semigroup::{act_on_weight, GroupElement, Knot, WeightFunction};
use crate::specfun::{mobius_f_real, polylog_roots_of_unity, restricted_zeta, riemann_zeta};
use crate::sum::KahanSum;

/// Geometric eigenvalue list λ₁·ratioⁿ, n ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenvalueList {
    pub lambda1: f64,
    pub generator_ratio: f64,
}

impl EigenvalueList {
    pub fn entry(&self, n: u32) -> f64 {
        self.lambda1 * self.generator_ratio.powi(n as i32)
    }

    /// Σ_{k ≥ n} entries(k).
    pub fn tail(&self, n: u32) -> f64 {
        self.generator_ratio.powi(n as i32)
    }
}

fn prime_weight(k: &Knot, cat: &Catalog) -> Result<u64> {
    let f = k.factors();
    if f.len() != 1 || f.values().next() != Some(&1) {
        return Err(Error::domain("toeplitz", format!("{k} is not a prime knot")));
    }
    k.weight(cat)
}

/// Eigenvalues (1 − x) xⁿ of the Gibbs density for a prime K, x = q^{−β(Cr+g)}.
pub fn toeplitz_eigenlist(k: &Knot, beta: f64, q: u64, cat: &Catalog) -> Result<EigenvalueList> {
    if !(beta > 0.0) {
        return Err(Error::domain("toeplitz", format!("β = {beta} must be positive")));
    }
    let w = prime_weight(k, cat)?;
    let x = (q as f64).powf(-beta * w as f64);
    if !(x < 1.0) {
        return Err(Error::domain("toeplitz", "ratio is not below 1"));
    }
    Ok(EigenvalueList { lambda1: 1.0 - x, generator_ratio: x })
}

/// φ_{β,K}(μᵃ μ*ᵃ) = q^{−βa(Cr+g)}.
pub fn gibbs_monomial(k: &Knot, a: u32, beta: f64, q: u64, cat: &Catalog) -> Result<f64> {
    let w = prime_weight(k, cat)?;
    Ok((q as f64).powf(-beta * (a as u64 * w) as f64))
}

/// φ_{β,K}(μᵃ μ*ᵇ), which vanishes unless a = b.
pub fn gibbs_mixed(k: &Knot, a: u32, b: u32, beta: f64, q: u64, cat: &Catalog) -> Result<f64> {
    if a != b {
        prime_weight(k, cat)?;
        return Ok(0.0);
    }
    gibbs_monomial(k, a, beta, q, cat)
}

/// φ_β(e(a/b)) = f_{1−β}(b)/f₁(b) for 0 < β ≤ 1.
pub fn bc_high_temperature(r: &QmodZ, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::domain("bc_high", format!("β = {beta} outside (0, 1]")));
    }
    let b = r.denom_u64().ok_or_else(|| Error::Range(format!("denominator of {r} too large")))?;
    Ok(mobius_f_real(1.0 - beta, b)? / totient(b) as f64)
}

/// An element of Ẑ* given by compatible residues modulo finitely many n.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct AdelicUnit {
    residues: BTreeMap<u64, u64>,
}

impl AdelicUnit {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(pairs: &[(u64, u64)]) -> Result<Self> {
        let mut residues = BTreeMap::new();
        for &(n, u) in pairs {
            if n == 0 {
                return Err(Error::domain("adelic unit", "modulus must be at least 1"));
            }
            let u = u % n;
            if n > 1 && u.gcd(&n) != 1 {
                return Err(Error::domain("adelic unit", format!("{u} is not a unit mod {n}")));
            }
            if let Some(prev) = residues.insert(n, u) {
                if prev != u {
                    return Err(Error::domain("adelic unit", format!("two residues given mod {n}")));
                }
            }
        }
        let out = AdelicUnit { residues };
        out.check()?;
        Ok(out)
    }

    pub fn residues(&self) -> &BTreeMap<u64, u64> {
        &self.residues
    }

    /// u_n ≡ u_m (mod gcd(n, m)) for all stored pairs.
    pub fn check(&self) -> Result<()> {
        for (&n, &un) in &self.residues {
            for (&m, &um) in self.residues.range(n + 1..) {
                let g = n.gcd(&m);
                if un % g != um % g {
                    return Err(Error::domain(
                        "adelic unit",
                        format!("u mod {n} = {un} and u mod {m} = {um} disagree mod {g}"),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Smallest unit residue mod b consistent with the stored data.
    pub fn residue(&self, b: u64) -> Result<u64> {
        if b == 1 {
            return Ok(0);
        }
        if let Some(&u) = self.residues.get(&b) {
            return Ok(u);
        }
        let cons: Vec<(u64, u64)> = self.residues.iter().map(|(&n, &u)| (n.gcd(&b), u)).collect();
        (1..b)
            .find(|&x| x.gcd(&b) == 1 && cons.iter().all(|&(g, u)| x % g == u % g))
            .ok_or_else(|| Error::domain("adelic unit", format!("no unit residue mod {b}")))
    }

    /// u·r as an element of ℚ/ℤ.
    pub fn act(&self, r: &QmodZ) -> Result<QmodZ> {
        let b = r.denom_u64().ok_or_else(|| Error::Range(format!("denominator of {r} too large")))?;
        Ok(r.mul_u64(self.residue(b)?))
    }

    /// u(r) = e^{2πi u·r}.
    pub fn character(&self, r: &QmodZ) -> Result<Complex64> {
        Ok(Complex64::from_polar(1.0, 2.0 * PI * self.act(r)?.to_f64()))
    }
}

/// φ_{β,u}(e(r)) = Li_β(u(r))/ζ(β) for β > 1.
pub fn bc_low_temperature(r: &QmodZ, beta: f64, u: &AdelicUnit) -> Result<Complex64> {
    if !(beta > 1.0) {
        return Err(Error::domain("bc_low", format!("β = {beta} must exceed 1")));
    }
    u.check()?;
    let ur = u.act(r)?;
    if beta.is_infinite() {
        return u.character(r);
    }
    Ok(polylog_roots_of_unity(beta, &ur)? / riemann_zeta(beta)?)
}

/// Σ_{m coprime to n_ρ} m^{−s} e^{2πi m r} / ζ_{n_ρ}(s).
fn restricted_state(s: f64, ur: &QmodZ, n_rho: u64) -> Result<Complex64> {
    if s.is_infinite() || s > 4000.0 {
        return Ok(Complex64::from_polar(1.0, 2.0 * PI * ur.to_f64()));
    }
    if s >= 20.0 {
        let b = ur.denom_u64().ok_or_else(|| Error::Range(format!("denominator of {ur} too large")))?;
        let a = ur.numer().to_u64().unwrap_or(0);
        let (mut re, mut im, mut z) = (KahanSum::new(), KahanSum::new(), KahanSum::new());
        for m in 1u64.. {
            let t = (m as f64).powf(-s);
            if m > 1 && t < 1e-20 {
                break;
            }
            if m.gcd(&n_rho) != 1 {
                continue;
            }
            let th = 2.0 * PI * ((m % b) * a % b) as f64 / b as f64;
            re.add(t * th.cos());
            im.add(t * th.sin());
            z.add(t);
        }
        return Ok(Complex64::new(re.value(), im.value()) / z.value());
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for d in divisors(n_rho) {
        let mu = mobius(d);
        if mu == 0 {
            continue;
        }
        acc += polylog_roots_of_unity(s, &ur.mul_u64(d))? * (mu as f64 * (d as f64).powf(-s));
    }
    Ok(acc / restricted_zeta(s, n_rho)?)
}

/// An operator entry of a finitely supported F: 𝒢 → algebra.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Monomial {
    /// e(r)
    E(QmodZ),
    /// μₙᵃ μₙ*ᵃ
    Mu { n: u64, a: u32 },
}

/// F with finite support; entries off the support are the identity.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct SupportedFunction {
    support: BTreeMap<GroupElement, Monomial>,
}

impl SupportedFunction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, g: GroupElement, m: Monomial) -> Self {
        self.support.insert(g, m);
        self
    }

    pub fn insert(&mut self, g: GroupElement, m: Monomial) {
        self.support.insert(g, m);
    }

    pub fn support(&self) -> &BTreeMap<GroupElement, Monomial> {
        &self.support
    }

    /// α_h(F)(g) = F(h⁻¹g): the support moves by g ↦ h·g.
    pub fn translate(&self, h: &GroupElement) -> Self {
        SupportedFunction { support: self.support.iter().map(|(g, m)| (h.compose(g), m.clone())).collect() }
    }
}

/// Parameters shared by all factors of Ψ_{β,u,f}.
#[derive(Debug, Clone)]
pub struct PsiContext<'a> {
    pub beta: f64,
    pub u: AdelicUnit,
    pub weight: WeightFunction,
    pub n_rho: u64,
    pub catalog: &'a Catalog,
}

impl PsiContext<'_> {
    /// f(g) as f64; ∞ once out of range.
    pub fn f_value(&self, g: &GroupElement) -> Result<f64> {
        let e = self.weight.exponent(g, self.catalog)?;
        let v = (self.weight.q as f64).powf(e as f64);
        Ok(v)
    }
}

fn psi_factor(m: &Monomial, s: f64, ctx: &PsiContext<'_>) -> Result<Complex64> {
    match m {
        Monomial::E(r) => restricted_state(s, &ctx.u.act(r)?, ctx.n_rho),
        Monomial::Mu { n, a } => {
            if *n == 0 || n.gcd(&ctx.n_rho) != 1 {
                return Err(Error::Precondition(format!("μ_{n} requires n coprime to n_rho = {}", ctx.n_rho)));
            }
            if *a == 0 || *n == 1 {
                return Ok(Complex64::new(1.0, 0.0));
            }
            let v = if s.is_infinite() { 0.0 } else { (*n as f64).powf(-s * *a as f64) };
            Ok(Complex64::new(v, 0.0))
        }
    }
}

/// Ψ_{β,u,f}(F) with f supplied as a map g ↦ f(g).
pub fn psi_with_weight(
    f: &SupportedFunction,
    ctx: &PsiContext<'_>,
    weight: &dyn Fn(&GroupElement) -> Result<f64>,
) -> Result<Complex64> {
    if !(ctx.beta > 1.0) {
        return Err(Error::domain("psi", format!("β = {} must exceed 1", ctx.beta)));
    }
    if ctx.n_rho == 0 {
        return Err(Error::domain("psi", "n_rho must be at least 1"));
    }
    ctx.u.check()?;
    let mut acc = Complex64::new(1.0, 0.0);
    for (g, m) in &f.support {
        let s = weight(g)? * ctx.beta;
        acc *= psi_factor(m, s, ctx)?;
    }
    Ok(acc)
}

/// Ψ_{β,u,f}(F) = Tr_τ(e^{−β f H} F)/Z_τ(β), factor by factor.
pub fn psi_product_state(f: &SupportedFunction, ctx: &PsiContext<'_>) -> Result<Complex64> {
    psi_with_weight(f, ctx, &|g| ctx.f_value(g))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pushforward {
    /// Ψ_{β,u,f}(α_h F)
    pub translated: Complex64,
    /// Ψ_{β,u,α_{h⁻¹} f}(F)
    pub reweighted: Complex64,
    pub difference: f64,
}

/// Both sides of Ψ_f ∘ α_h = Ψ_{α_{h⁻¹} f}.
pub fn psi_pushforward(h: &GroupElement, f: &SupportedFunction, ctx: &PsiContext<'_>) -> Result<Pushforward> {
    let translated = psi_product_state(&f.translate(h), ctx)?;
    let h_inv = h.inverse();
    // α_{h⁻¹}(f)(g) = f(h g)
    let reweighted = psi_with_weight(f, ctx, &|g| ctx.f_value(&act_on_weight(&h_inv, g)))?;
    Ok(Pushforward { translated, reweighted, difference: (translated - reweighted).norm() })
}

/// e^{it(f(g) − f(h⁻¹g)) ln m} on the basis vector at (g, m).
pub fn time_evolution_coefficient(
    h: &GroupElement,
    g: &GroupElement,
    m: u64,
    t: f64,
    w: &WeightFunction,
    cat: &Catalog,
) -> Result<Complex64> {
    if m == 0 {
        return Err(Error::domain("time evolution", "m must be at least 1"));
    }
    let fg = crate::semigroup::f_weight(g, w, cat)?;
    let fh = crate::semigroup::f_weight(&act_on_weight(h, g), w, cat)?;
    let diff = num_bigint::BigInt::from(fg) - num_bigint::BigInt::from(fh);
    let d = diff.to_f64().unwrap_or(f64::INFINITY);
    if d == 0.0 || t == 0.0 || m == 1 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(Complex64::from_polar(1.0, t * d * (m as f64).ln()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioWitness {
    pub n: u32,
    pub big_n: u32,
    pub lambda_k0: f64,
    pub lambda_k1: f64,
    pub lambda_k0_prime: f64,
    pub lambda_k1_prime: f64,
    pub ratio: f64,
    pub expected: f64,
}

/// ln of (1 − q^{−βw}) q^{−βwj}/(1 − q^{−βNw}).
fn ln_compressed_eigenvalue(w: f64, j: u32, beta: f64, big_n: u32, q: f64) -> f64 {
    let lq = q.ln();
    let x = -beta * w * lq;
    (-x.exp()).ln_1p() + x * j as f64 - (-(x * big_n as f64).exp()).ln_1p()
}

/// λ_{K,0}λ_{K′,1}/(λ_{K,1}λ_{K′,0}) for weights 2n and 2n+1, which equals q^{−β}.
pub fn ratio_witness(n: u32, big_n: u32, beta: f64, q: u64, model: &MultiplicityModel) -> Result<RatioWitness> {
    if n == 0 || big_n < 2 || q < 2 || !(beta > 0.0) {
        return Err(Error::Precondition("need n ≥ 1, N ≥ 2, q ≥ 2 and β > 0".into()));
    }
    let bp = beta_plus_for(model.c);
    if !(beta * big_n as f64 > bp) {
        return Err(Error::Precondition(format!("βN = {} must exceed β₊ = {bp}", beta * big_n as f64)));
    }
    let qf = q as f64;
    let (w, wp) = (2.0 * n as f64, 2.0 * n as f64 + 1.0);
    let l = |w: f64, j: u32| ln_compressed_eigenvalue(w, j, beta, big_n, qf);
    let ln_ratio = l(w, 0) + l(wp, 1) - l(w, 1) - l(wp, 0);
    let ratio = ln_ratio.exp();
    let expected = qf.powf(-beta);
    if (ratio - expected).abs() > 1e-14 {
        return Err(Error::Verification(format!("ratio {ratio} differs from q^(-β) = {expected}")));
    }
    Ok(RatioWitness {
        n,
        big_n,
        lambda_k0: l(w, 0).exp(),
        lambda_k1: l(w, 1).exp(),
        lambda_k0_prime: l(wp, 0).exp(),
        lambda_k1_prime: l(wp, 1).exp(),
        ratio,
        expected,
    })
}
