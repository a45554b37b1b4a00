//! The knot semigroup under connected sum, its Grothendieck group and the
//! weight function f(g).
//!
//! Textual forms: `3_1 # 3_1 # 4_1` for a knot (`unknot` for the identity) and
//! `A -- B` for the formal difference A ⊖ B.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::Serialize;

use crate::catalog::Catalog;
use crate::error::{Error, Result};

/// A knot as a multiset of prime factors. The empty map is the unknot.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct Knot {
    factors: BTreeMap<String, u32>,
}

impl Knot {
    pub fn unknot() -> Self {
        Knot::default()
    }

    pub fn prime(name: &str) -> Self {
        Knot::from_pairs([(name, 1)])
    }

    /// Builds a knot from (name, multiplicity) pairs; zero multiplicities are dropped
    /// and repeated names accumulate.
    pub fn from_pairs<'a, I: IntoIterator<Item = (&'a str, u32)>>(pairs: I) -> Self {
        let mut factors = BTreeMap::new();
        for (n, m) in pairs {
            if m > 0 {
                *factors.entry(n.to_string()).or_insert(0) += m;
            }
        }
        Knot { factors }
    }

    pub fn factors(&self) -> &BTreeMap<String, u32> {
        &self.factors
    }

    pub fn multiplicity(&self, name: &str) -> u32 {
        self.factors.get(name).copied().unwrap_or(0)
    }

    pub fn is_unknot(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn connected_sum(&self, other: &Knot) -> Knot {
        let mut factors = self.factors.clone();
        for (k, m) in &other.factors {
            *factors.entry(k.clone()).or_insert(0) += m;
        }
        Knot { factors }
    }

    /// True iff every multiplicity of `self` is at most that of `other`.
    pub fn divides(&self, other: &Knot) -> bool {
        self.factors.iter().all(|(k, &m)| m <= other.multiplicity(k))
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    /// Σ aᵢ (Cr(Kᵢ) + g(Kᵢ)).
    pub fn weight(&self, cat: &Catalog) -> Result<u64> {
        self.factors
            .iter()
            .map(|(k, &m)| Ok(cat.require(k)?.weight() as u64 * m as u64))
            .sum()
    }

    fn gcd(&self, other: &Knot) -> Knot {
        let factors = self
            .factors
            .iter()
            .filter_map(|(k, &m)| {
                let c = m.min(other.multiplicity(k));
                (c > 0).then(|| (k.clone(), c))
            })
            .collect();
        Knot { factors }
    }

    /// `self` with the factors of `d` removed; `d` must divide `self`.
    fn cancel(&self, d: &Knot) -> Knot {
        let mut factors = self.factors.clone();
        for (k, &m) in &d.factors {
            let e = factors.get_mut(k).expect("divisor");
            *e -= m;
            if *e == 0 {
                factors.remove(k);
            }
        }
        Knot { factors }
    }
}

impl fmt::Display for Knot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unknot() {
            return write!(f, "unknot");
        }
        let mut first = true;
        for (k, &m) in &self.factors {
            for _ in 0..m {
                if !first {
                    write!(f, " # ")?;
                }
                write!(f, "{k}")?;
                first = false;
            }
        }
        Ok(())
    }
}

impl FromStr for Knot {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut factors: BTreeMap<String, u32> = BTreeMap::new();
        for tok in s.split('#') {
            let tok = tok.trim();
            if tok.is_empty() && s.trim().is_empty() {
                continue;
            }
            if tok.is_empty() || tok.contains(char::is_whitespace) {
                return Err(Error::Parse { line: 0, msg: format!("bad knot expression {s:?}") });
            }
            if tok == "unknot" || tok == "0_1" {
                continue;
            }
            *factors.entry(tok.to_string()).or_insert(0) += 1;
        }
        Ok(Knot { factors })
    }
}

pub fn connected_sum(k1: &Knot, k2: &Knot) -> Knot {
    k1.connected_sum(k2)
}

pub fn divides(k1: &Knot, k2: &Knot) -> bool {
    k1.divides(k2)
}

pub fn omega(k: &Knot) -> usize {
    k.omega()
}

/// A reduced formal difference K ⊖ K′.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct GroupElement {
    positive: Knot,
    negative: Knot,
}

impl GroupElement {
    /// Reduces eagerly: common prime factors are cancelled.
    pub fn new(positive: Knot, negative: Knot) -> Self {
        let g = positive.gcd(&negative);
        GroupElement { positive: positive.cancel(&g), negative: negative.cancel(&g) }
    }

    pub fn identity() -> Self {
        GroupElement::default()
    }

    pub fn from_knot(k: Knot) -> Self {
        GroupElement { positive: k, negative: Knot::unknot() }
    }

    /// `+K` or `−K` for a prime name.
    pub fn prime(name: &str, sign: i8) -> Self {
        if sign >= 0 {
            GroupElement::from_knot(Knot::prime(name))
        } else {
            GroupElement::from_knot(Knot::prime(name)).inverse()
        }
    }

    pub fn positive(&self) -> &Knot {
        &self.positive
    }

    pub fn negative(&self) -> &Knot {
        &self.negative
    }

    pub fn is_identity(&self) -> bool {
        self.positive.is_unknot() && self.negative.is_unknot()
    }

    pub fn inverse(&self) -> Self {
        GroupElement { positive: self.negative.clone(), negative: self.positive.clone() }
    }

    /// Group law (K₁ ⊖ K₁′)(K₂ ⊖ K₂′) = (K₁#K₂) ⊖ (K₁′#K₂′).
    pub fn compose(&self, other: &Self) -> Self {
        GroupElement::new(
            self.positive.connected_sum(&other.positive),
            self.negative.connected_sum(&other.negative),
        )
    }

    /// Signed multiplicity of a prime.
    pub fn exponent(&self, name: &str) -> i64 {
        self.positive.multiplicity(name) as i64 - self.negative.multiplicity(name) as i64
    }

    /// Σ aᵢ(Cr+g) + Σ bⱼ(Cr+g) over the reduced form.
    pub fn weight(&self, cat: &Catalog) -> Result<u64> {
        Ok(self.positive.weight(cat)? + self.negative.weight(cat)?)
    }

    /// Signed (name, exponent) pairs in name order.
    pub fn signed_factors(&self) -> Vec<(String, i64)> {
        let mut out: Vec<(String, i64)> = self
            .positive
            .factors()
            .iter()
            .map(|(k, &m)| (k.clone(), m as i64))
            .chain(self.negative.factors().iter().map(|(k, &m)| (k.clone(), -(m as i64))))
            .collect();
        out.sort();
        out
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -- {}", self.positive, self.negative)
    }
}

impl FromStr for GroupElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once("--") {
            Some((a, b)) => {
                if b.contains("--") {
                    return Err(Error::Parse { line: 0, msg: format!("bad group element {s:?}") });
                }
                Ok(GroupElement::new(a.parse()?, b.parse()?))
            }
            None => Ok(GroupElement::from_knot(s.parse()?)),
        }
    }
}

pub fn groth_reduce(k1: &Knot, k2: &Knot) -> GroupElement {
    GroupElement::new(k1.clone(), k2.clone())
}

/// (Cr(K), g(K)) by additivity over prime factors.
///
/// Crossing-number additivity is only known for alternating knots, so a
/// non-alternating factor is rejected unless `assume_cr_additive` is set.
pub fn invariants_additive(k: &Knot, cat: &Catalog, assume_cr_additive: bool) -> Result<(u64, u64)> {
    let mut cr = 0u64;
    let mut g = 0u64;
    for (name, &m) in k.factors() {
        let r = cat.require(name)?;
        if !r.alternating && !assume_cr_additive {
            return Err(Error::Precondition(format!(
                "{name} is not alternating; crossing-number additivity is conjectural (pass assume_cr_additive)"
            )));
        }
        cr += r.crossing_number as u64 * m as u64;
        g += r.genus as u64 * m as u64;
    }
    Ok((cr, g))
}

/// Product over factors of |top coefficient of Δ|^multiplicity.
pub fn lambda_multiplicative(k: &Knot, cat: &Catalog) -> Result<BigUint> {
    let mut acc = BigUint::one();
    for (name, &m) in k.factors() {
        let r = cat.require(name)?;
        let top = r.alexander_coeffs.last().copied().unwrap_or(1).unsigned_abs();
        acc *= BigUint::from(top).pow(m);
    }
    Ok(acc)
}

/// Weight f(g) = q^{s·(Σ aᵢ(Cr+g) + Σ bⱼ(Cr+g))} with s = `exponent_scale`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WeightFunction {
    pub q: u64,
    pub exponent_scale: u32,
}

impl WeightFunction {
    /// Uses s = ⌈β₊⌉.
    pub fn new(q: u64) -> Result<Self> {
        let s = crate::partition::threshold_beta_plus().ceil() as u32;
        Self::with_scale(q, s)
    }

    pub fn with_scale(q: u64, exponent_scale: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::domain("weight function", format!("q = {q} must be at least 2")));
        }
        Ok(WeightFunction { q, exponent_scale })
    }

    /// The exponent of q in f(g).
    pub fn exponent(&self, g: &GroupElement, cat: &Catalog) -> Result<u64> {
        Ok(self.exponent_scale as u64 * g.weight(cat)?)
    }

    /// log f(g) as f64.
    pub fn ln_value(&self, g: &GroupElement, cat: &Catalog) -> Result<f64> {
        Ok(self.exponent(g, cat)? as f64 * (self.q as f64).ln())
    }
}

pub fn f_weight(g: &GroupElement, w: &WeightFunction, cat: &Catalog) -> Result<BigUint> {
    let e = w.exponent(g, cat)?;
    let e = u32::try_from(e).map_err(|_| Error::Range(format!("exponent {e} too large")))?;
    Ok(BigUint::from(w.q).pow(e))
}

/// h⁻¹·g, so that f(act_on_weight(h, g)) = α_h(f)(g) = f(h⁻¹g).
pub fn act_on_weight(h: &GroupElement, g: &GroupElement) -> GroupElement {
    h.inverse().compose(g)
}

/// All knots with Σ aᵢ(Cr+g) ≤ `max_weight`, in deterministic order.
pub fn enumerate_knots(cat: &Catalog, max_weight: u64) -> Vec<Knot> {
    let primes: Vec<(&str, u64)> = cat
        .records()
        .iter()
        .map(|r| (r.name.as_str(), r.weight() as u64))
        .collect();
    let mut out = Vec::new();
    let mut cur: Vec<(&str, u32)> = Vec::new();
    fn rec<'a>(
        primes: &[(&'a str, u64)],
        i: usize,
        budget: u64,
        cur: &mut Vec<(&'a str, u32)>,
        out: &mut Vec<Knot>,
    ) {
        if i == primes.len() {
            out.push(Knot::from_pairs(cur.iter().copied()));
            return;
        }
        let (name, w) = primes[i];
        let mut m = 0u32;
        while m as u64 * w <= budget {
            if m > 0 {
                cur.push((name, m));
            }
            rec(primes, i + 1, budget - m as u64 * w, cur, out);
            if m > 0 {
                cur.pop();
            }
            m += 1;
        }
    }
    rec(&primes, 0, max_weight, &mut cur, &mut out);
    out
}

/// All reduced group elements with weight ≤ `max_weight`, in deterministic order.
pub fn enumerate_group_elements(cat: &Catalog, max_weight: u64) -> Vec<GroupElement> {
    let primes: Vec<(&str, u64)> = cat
        .records()
        .iter()
        .map(|r| (r.name.as_str(), r.weight() as u64))
        .collect();
    let mut out = Vec::new();
    let mut cur: Vec<(&str, i64)> = Vec::new();
    fn rec<'a>(
        primes: &[(&'a str, u64)],
        i: usize,
        budget: u64,
        cur: &mut Vec<(&'a str, i64)>,
        out: &mut Vec<GroupElement>,
    ) {
        if i == primes.len() {
            let pos = Knot::from_pairs(cur.iter().filter(|p| p.1 > 0).map(|&(n, m)| (n, m as u32)));
            let neg = Knot::from_pairs(cur.iter().filter(|p| p.1 < 0).map(|&(n, m)| (n, (-m) as u32)));
            out.push(GroupElement::new(pos, neg));
            return;
        }
        let (name, w) = primes[i];
        let mmax = (budget / w) as i64;
        for m in -mmax..=mmax {
            if m != 0 {
                cur.push((name, m));
            }
            rec(primes, i + 1, budget - m.unsigned_abs() * w, cur, out);
            if m != 0 {
                cur.pop();
            }
        }
    }
    rec(&primes, 0, max_weight, &mut cur, &mut out);
    out
}
