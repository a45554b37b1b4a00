//! Exact group-ring arithmetic over ℚ/ℤ and π̂_ρ, the semigroup actions σₙ and αₙ,
//! and normal forms in the Bost–Connes algebra.
//!
//! Elements of π̂_ρ are modelled through the abelianization: a group element γ is
//! recorded by its exponent `n_gamma`, so that ρ(γ) = n_gamma/n_ρ mod 1.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmodz::QmodZ;

/// A basis label with a commutative group law.
pub trait Label: Ord + Clone + fmt::Debug {
    fn identity() -> Self;
    fn op(&self, other: &Self) -> Self;
}

impl Label for QmodZ {
    fn identity() -> Self {
        QmodZ::zero()
    }

    fn op(&self, other: &Self) -> Self {
        self.add(other)
    }
}

/// A label (n_γ, ζ) of π̂_ρ.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HatPi {
    pub n_gamma: i64,
    pub zeta: QmodZ,
}

impl HatPi {
    pub fn new(n_gamma: i64, zeta: QmodZ) -> Self {
        HatPi { n_gamma, zeta }
    }
}

impl Label for HatPi {
    fn identity() -> Self {
        HatPi { n_gamma: 0, zeta: QmodZ::zero() }
    }

    fn op(&self, other: &Self) -> Self {
        HatPi { n_gamma: self.n_gamma + other.n_gamma, zeta: self.zeta.add(&other.zeta) }
    }
}

/// A finite ℚ-linear combination of basis labels; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupRingElement<L: Label> {
    terms: BTreeMap<L, BigRational>,
}

pub type QQZ = GroupRingElement<QmodZ>;
pub type QHatPi = GroupRingElement<HatPi>;

impl<L: Label> Default for GroupRingElement<L> {
    fn default() -> Self {
        GroupRingElement { terms: BTreeMap::new() }
    }
}

impl<L: Label> GroupRingElement<L> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::basis(L::identity())
    }

    pub fn basis(l: L) -> Self {
        Self::term(l, BigRational::one())
    }

    pub fn term(l: L, c: BigRational) -> Self {
        let mut e = Self::zero();
        e.add_term(l, c);
        e
    }

    pub fn terms(&self) -> &BTreeMap<L, BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, l: &L) -> BigRational {
        self.terms.get(l).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, l: L, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(l) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (l, c) in &other.terms {
            out.add_term(l.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        GroupRingElement { terms: self.terms.iter().map(|(l, x)| (l.clone(), x * c)).collect() }
    }

    /// Convolution product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (l1, c1) in &self.terms {
            for (l2, c2) in &other.terms {
                out.add_term(l1.op(l2), c1 * c2);
            }
        }
        out
    }

    /// Applies a label map linearly, merging coefficients.
    pub fn map_labels<F: Fn(&L) -> L>(&self, f: F) -> Self {
        let mut out = Self::zero();
        for (l, c) in &self.terms {
            out.add_term(f(l), c.clone());
        }
        out
    }

    /// Replaces each label by (1/n) Σ over a list of labels.
    fn spread<F: Fn(&L) -> Vec<L>>(&self, n: u64, f: F) -> Self {
        let inv = BigRational::new(BigInt::one(), BigInt::from(n));
        let mut out = Self::zero();
        for (l, c) in &self.terms {
            let w = c * &inv;
            for m in f(l) {
                out.add_term(m, w.clone());
            }
        }
        out
    }
}

impl<L: Label + fmt::Display> fmt::Display for GroupRingElement<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (l, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({c})·e({l})")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Display for HatPi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}", self.n_gamma, self.zeta)
    }
}

/// e(r).
pub fn e(r: QmodZ) -> QQZ {
    QQZ::basis(r)
}

/// σₙ(e(r)) = e(nr).
pub fn sigma_n(x: &QQZ, n: u64) -> QQZ {
    assert!(n >= 1);
    x.map_labels(|r| r.mul_u64(n))
}

/// αₙ(e(r)) = (1/n) Σ_{ns = r} e(s).
pub fn alpha_n(x: &QQZ, n: u64) -> QQZ {
    assert!(n >= 1);
    x.spread(n, |r| r.preimages(n))
}

/// eₙ = (1/n) Σ_{ns = 0} e(s).
pub fn idempotent_e(n: u64) -> QQZ {
    alpha_n(&QQZ::one(), n)
}

/// eₙ in ℚ[π̂_ρ]: (1/n) Σ_{nξ = 0} δ_{(0, ξ)}.
pub fn idempotent_e_hatpi(n: u64) -> QHatPi {
    alpha_n_hatpi_unchecked(&QHatPi::one(), n)
}

/// Order n_ρ of ρ and the subsemigroup ℕ_ρ = {n : gcd(n, n_ρ) = 1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RhoContext {
    pub n_rho: u64,
}

impl RhoContext {
    pub fn new(n_rho: u64) -> Result<Self> {
        if n_rho == 0 {
            return Err(Error::domain("rho context", "n_rho must be at least 1"));
        }
        Ok(RhoContext { n_rho })
    }

    pub fn in_n_rho(&self, n: u64) -> bool {
        n >= 1 && n.gcd(&self.n_rho) == 1
    }

    fn require(&self, n: u64) -> Result<()> {
        if !self.in_n_rho(n) {
            return Err(Error::Precondition(format!("n = {n} is not coprime to n_rho = {}", self.n_rho)));
        }
        Ok(())
    }
}

/// Whether (γ, ζ) lies in π̂_ρ, i.e. m·ζ ≡ n_γ/n_ρ (mod 1) for some m coprime to n_ρ.
///
/// With ζ = a/b and L = lcm(b, n_ρ) the condition reads A·m ≡ B (mod L) for
/// A = a·L/b and B = n_γ·L/n_ρ. It is solvable iff g = gcd(A, L) divides B, and then
/// the solutions form the class m₀ + (L/g)ℤ. That class meets the units mod n_ρ
/// iff gcd(m₀, L/g, n_ρ) = 1: primes of n_ρ not dividing L/g can always be avoided
/// by moving along the class, and the choices combine by the Chinese remainder theorem.
pub fn hatpi_member(n_gamma: i64, zeta: &QmodZ, ctx: &RhoContext) -> bool {
    let n_rho = BigInt::from(ctx.n_rho);
    let a = zeta.numer().clone();
    let b = zeta.denom().clone();
    let l = b.lcm(&n_rho);
    let big_a = (&a * (&l / &b)).mod_floor(&l);
    let big_b = (BigInt::from(n_gamma) * (&l / &n_rho)).mod_floor(&l);
    let g = big_a.gcd(&l);
    if !(&big_b % &g).is_zero() {
        return false;
    }
    let modulus = &l / &g;
    if modulus.is_one() {
        // every m works, including m = 1
        return true;
    }
    let a_red = &big_a / &g;
    let b_red = &big_b / &g;
    let inv = mod_inverse(&a_red, &modulus).expect("A/g is a unit mod L/g");
    let m0 = (b_red * inv).mod_floor(&modulus);
    m0.gcd(&modulus).gcd(&n_rho).is_one()
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let eg = a.extended_gcd(m);
    eg.gcd.is_one().then(|| eg.x.mod_floor(m))
}

/// k in [1, n_ρ] with n·k ≡ 1 (mod n_ρ).
pub fn congruence_inverse(n: u64, n_rho: u64) -> Result<u64> {
    if n_rho == 0 || n.gcd(&n_rho) != 1 {
        return Err(Error::Precondition(format!("gcd({n}, {n_rho}) ≠ 1")));
    }
    if n_rho == 1 {
        return Ok(1);
    }
    let inv = mod_inverse(&BigInt::from(n), &BigInt::from(n_rho)).expect("coprime");
    let k: u64 = inv.try_into().expect("reduced mod n_rho");
    Ok(if k == 0 { n_rho } else { k })
}

/// σₙ(n_γ, ζ) = (n_γ, nζ), for n ∈ ℕ_ρ.
pub fn sigma_n_hatpi(x: &QHatPi, n: u64, ctx: &RhoContext) -> Result<QHatPi> {
    ctx.require(n)?;
    Ok(x.map_labels(|l| HatPi::new(l.n_gamma, l.zeta.mul_u64(n))))
}

fn alpha_n_hatpi_unchecked(x: &QHatPi, n: u64) -> QHatPi {
    x.spread(n, |l| l.zeta.preimages(n).into_iter().map(|z| HatPi::new(l.n_gamma, z)).collect())
}

/// αₙ(δ_{(γ,ζ)}) = (1/n) Σ_{ηⁿ = ζ} δ_{(γ,η)}, for n ∈ ℕ_ρ.
pub fn alpha_n_hatpi(x: &QHatPi, n: u64, ctx: &RhoContext) -> Result<QHatPi> {
    ctx.require(n)?;
    Ok(alpha_n_hatpi_unchecked(x, n))
}

/// σ_m(x/(nm)) = x/n for every x in 0..nm, i.e. the cyclic covers are compatible.
pub fn cyclic_tower_check(n: u64, m: u64) -> bool {
    if n == 0 || m == 0 {
        return false;
    }
    let nm = n * m;
    (0..nm).all(|x| QmodZ::new(x as i64, nm as i64).mul_u64(m) == QmodZ::new(x as i64, n as i64))
}

/// A generator of the rational Bost–Connes algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum BcSymbol {
    Mu(u64),
    MuStar(u64),
    E(QmodZ),
}

impl FromStr for BcSymbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { line: 0, msg: format!("bad symbol {s:?}; expected mu:n, mu*:n or e:a/b") };
        let (head, arg) = s.split_once(':').ok_or_else(bad)?;
        match head {
            "mu" | "mu*" => {
                let n: u64 = arg.parse().map_err(|_| bad())?;
                if n == 0 {
                    return Err(bad());
                }
                Ok(if head == "mu" { BcSymbol::Mu(n) } else { BcSymbol::MuStar(n) })
            }
            "e" => Ok(BcSymbol::E(arg.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for BcSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BcSymbol::Mu(n) => write!(f, "mu:{n}"),
            BcSymbol::MuStar(n) => write!(f, "mu*:{n}"),
            BcSymbol::E(r) => write!(f, "e:{r}"),
        }
    }
}

pub fn parse_word(s: &str) -> Result<Vec<BcSymbol>> {
    s.split_whitespace().map(str::parse).collect()
}

/// Σ μ_a x_{a,b} μ_b* with gcd(a, b) = 1, keyed by (a, b).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BcElement {
    terms: BTreeMap<(u64, u64), QQZ>,
}

impl BcElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, QQZ::one(), 1)
    }

    /// μ_a x μ_b*, reduced so that gcd(a, b) = 1.
    pub fn monomial(a: u64, x: QQZ, b: u64) -> Self {
        let mut out = Self::zero();
        out.add_monomial(a, x, b);
        out
    }

    pub fn symbol(s: &BcSymbol) -> Self {
        match s {
            BcSymbol::Mu(n) => Self::monomial(*n, QQZ::one(), 1),
            BcSymbol::MuStar(n) => Self::monomial(1, QQZ::one(), *n),
            BcSymbol::E(r) => Self::monomial(1, e(r.clone()), 1),
        }
    }

    pub fn terms(&self) -> &BTreeMap<(u64, u64), QQZ> {
        &self.terms
    }

    fn add_monomial(&mut self, a: u64, x: QQZ, b: u64) {
        // μ_A z μ_B* = μ_{A/h} α_h(z) μ_{B/h}* for h = gcd(A, B)
        let h = a.gcd(&b);
        let (a, b, x) = if h > 1 { (a / h, b / h, alpha_n(&x, h)) } else { (a, b, x) };
        if x.is_zero() {
            return;
        }
        let slot = self.terms.entry((a, b)).or_default();
        *slot = slot.add(&x);
        if slot.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(a, b), x) in &other.terms {
            out.add_monomial(a, x.clone(), b);
        }
        out
    }

    /// Product using μ_b* μ_c = μ_{c/g} μ_{b/g}* (g = gcd(b, c)),
    /// x μ_n = μ_n σₙ(x) and μₙ* y = σₙ(y) μₙ*.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), x) in &self.terms {
            for (&(c, d), y) in &other.terms {
                let g = b.gcd(&c);
                let (b1, c1) = (b / g, c / g);
                let mid = sigma_n(x, c1).mul(&sigma_n(y, b1));
                out.add_monomial(a * c1, mid, d * b1);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for BcElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((a, b), x) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "mu:{a} [{x}] mu*:{b}")?;
            first = false;
        }
        Ok(())
    }
}

/// Normal form of a word, multiplying left to right.
pub fn normalize(word: &[BcSymbol]) -> BcElement {
    word.iter().fold(BcElement::one(), |acc, s| acc.mul(&BcElement::symbol(s)))
}

/// Normal form of a word following an explicit bracketing: `splits` is consumed
/// as a sequence of split points, one per internal node of the product tree.
pub fn normalize_bracketed(word: &[BcSymbol], splits: &mut dyn Iterator<Item = usize>) -> BcElement {
    match word.len() {
        0 => BcElement::one(),
        1 => BcElement::symbol(&word[0]),
        n => {
            let k = 1 + splits.next().unwrap_or(0) % (n - 1);
            let left = normalize_bracketed(&word[..k], splits);
            let right = normalize_bracketed(&word[k..], splits);
            left.mul(&right)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationCheck {
    pub left: BcElement,
    pub right: BcElement,
    pub equal: bool,
}

/// Normalizes two words and reports whether they agree.
pub fn bc_relation_check(w1: &[BcSymbol], w2: &[BcSymbol]) -> RelationCheck {
    let left = normalize(w1);
    let right = normalize(w2);
    let equal = left == right;
    RelationCheck { left, right, equal }
}

/// Exact rational a/b as BigRational.
pub fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// True if all coefficients are non-negative.
pub fn is_nonnegative<L: Label>(x: &GroupRingElement<L>) -> bool {
    x.terms().values().all(|c| !c.is_negative())
}
