use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};

use super::presentation::{exponent_sum, Presentation};
use super::smith::{abelianization, IntMatrix};

/// An integer Laurent polynomial in t.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(exp: i32, c: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c);
        p
    }

    /// Σ cᵢ t^{low + i}.
    pub fn from_coeffs(low: i32, coeffs: &[i64]) -> Self {
        let mut p = Self::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term(low + i as i32, c);
        }
        p
    }

    pub fn coeffs(&self) -> &BTreeMap<i32, i64> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, exp: i32, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.coeffs.entry(exp).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Width of the exponent span; 0 for constants and for zero.
    pub fn span(&self) -> i32 {
        match (self.min_exp(), self.max_exp()) {
            (Some(a), Some(b)) => b - a,
            _ => 0,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (&e, &c) in &o.coeffs {
            p.add_term(e, c);
        }
        p
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&e, &c)| (e, -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for (&e1, &c1) in &self.coeffs {
            for (&e2, &c2) in &o.coeffs {
                p.add_term(e1 + e2, c1 * c2);
            }
        }
        p
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.coeffs.iter().map(|(&e, &c)| t.powi(e) * c as f64).sum()
    }

    /// Σ |cᵢ| |t|^{eᵢ}, the natural scale for |p(t)|.
    pub fn eval_scale(&self, t: Complex64) -> f64 {
        self.coeffs.iter().map(|(&e, &c)| t.norm().powi(e) * (c as f64).abs()).sum()
    }

    /// Multiplies by ±tᵏ so the lowest exponent is 0 and the leading coefficient is positive.
    pub fn normalized(&self) -> Self {
        let Some(lo) = self.min_exp() else { return Self::zero() };
        let sign = if *self.coeffs.values().next_back().unwrap() < 0 { -1 } else { 1 };
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&e, &c)| (e - lo, sign * c)).collect() }
    }

    /// Dense coefficients from t⁰ after normalization.
    pub fn normalized_coeffs(&self) -> Vec<i64> {
        let n = self.normalized();
        let Some(hi) = n.max_exp() else { return vec![0] };
        (0..=hi).map(|e| n.coeffs.get(&e).copied().unwrap_or(0)).collect()
    }

    /// Equality up to multiplication by ±tᵏ.
    pub fn eq_up_to_units(&self, o: &Self) -> bool {
        self.normalized() == o.normalized()
    }

    /// Complex roots of the normalized polynomial, Newton-polished.
    pub fn roots(&self) -> Vec<Complex64> {
        let c = self.normalized_coeffs();
        let d = c.len() - 1;
        if d == 0 {
            return vec![];
        }
        let lead = c[d] as f64;
        let mut comp = DMatrix::<f64>::zeros(d, d);
        for i in 1..d {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..d {
            comp[(i, d - 1)] = -(c[i] as f64) / lead;
        }
        let p = self.normalized();
        let dp = p.derivative();
        comp.complex_eigenvalues()
            .iter()
            .map(|&z| {
                let mut z = z;
                for _ in 0..8 {
                    let f = p.eval(z);
                    let g = dp.eval(z);
                    if g.norm() < 1e-300 {
                        break;
                    }
                    let step = f / g;
                    z -= step;
                    if step.norm() < 1e-16 * z.norm().max(1.0) {
                        break;
                    }
                }
                z
            })
            .collect()
    }

    pub fn derivative(&self) -> Self {
        let mut p = Self::zero();
        for (&e, &c) in &self.coeffs {
            p.add_term(e - 1, c * e as i64);
        }
        p
    }

    fn to_dense(&self) -> (i32, Vec<i128>) {
        let Some(lo) = self.min_exp() else { return (0, vec![]) };
        let hi = self.max_exp().unwrap();
        let v = (lo..=hi).map(|e| self.coeffs.get(&e).copied().unwrap_or(0) as i128).collect();
        (lo, v)
    }

    fn from_dense(low: i32, v: &[i128]) -> Result<Self> {
        let mut p = Self::zero();
        for (i, &c) in v.iter().enumerate() {
            let c = i64::try_from(c).map_err(|_| Error::Range("coefficient exceeds i64".into()))?;
            p.add_term(low + i as i32, c);
        }
        Ok(p)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in self.coeffs.iter().rev() {
            let (sign, a) = if c < 0 { ("-", -c) } else { ("+", c) };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let coef = if a == 1 && e != 0 { String::new() } else { a.to_string() };
            match e {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{coef}t")?,
                _ => write!(f, "{coef}t^{e}")?,
            }
        }
        Ok(())
    }
}

// dense polynomial helpers over i128, lowest degree first

fn trim(p: &mut Vec<i128>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn overflow() -> Error {
    Error::Range("polynomial arithmetic overflowed i128".into())
}

fn pmul(a: &[i128], b: &[i128]) -> Result<Vec<i128>> {
    if a.is_empty() || b.is_empty() {
        return Ok(vec![]);
    }
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let t = x.checked_mul(y).ok_or_else(overflow)?;
            out[i + j] = out[i + j].checked_add(t).ok_or_else(overflow)?;
        }
    }
    trim(&mut out);
    Ok(out)
}

fn psub(a: &[i128], b: &[i128]) -> Result<Vec<i128>> {
    let mut out = vec![0i128; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = x.checked_sub(y).ok_or_else(overflow)?;
    }
    trim(&mut out);
    Ok(out)
}

/// a / b when the division is exact in ℤ[t].
fn pdiv_exact(a: &[i128], b: &[i128]) -> Result<Vec<i128>> {
    if a.is_empty() {
        return Ok(vec![]);
    }
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db];
    let mut q = vec![0i128; r.len().saturating_sub(db).max(1)];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let lr = *r.last().unwrap();
        if lr % lb != 0 {
            return Err(Error::Verification("inexact polynomial division".into()));
        }
        let c = lr / lb;
        q[k] = c;
        for (i, &y) in b.iter().enumerate() {
            r[i + k] = r[i + k].checked_sub(c.checked_mul(y).ok_or_else(overflow)?).ok_or_else(overflow)?;
        }
        trim(&mut r);
    }
    if !r.is_empty() {
        return Err(Error::Verification("inexact polynomial division".into()));
    }
    trim(&mut q);
    Ok(q)
}

/// Determinant of a square polynomial matrix by fraction-free elimination.
fn det_dense(mut m: Vec<Vec<Vec<i128>>>) -> Result<Vec<i128>> {
    let n = m.len();
    if n == 0 {
        return Ok(vec![1]);
    }
    let mut sign = 1i128;
    let mut prev: Vec<i128> = vec![1];
    for k in 0..n - 1 {
        if m[k][k].is_empty() {
            match (k + 1..n).find(|&i| !m[i][k].is_empty()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(vec![]),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = pmul(&m[k][k], &m[i][j])?;
                let b = pmul(&m[i][k], &m[k][j])?;
                m[i][j] = pdiv_exact(&psub(&a, &b)?, &prev)?;
            }
            m[i][k] = vec![];
        }
        prev = m[k][k].clone();
    }
    let mut d = m[n - 1][n - 1].clone();
    if sign < 0 {
        d.iter_mut().for_each(|c| *c = -*c);
    }
    Ok(d)
}

fn content(p: &[i128]) -> i128 {
    p.iter().fold(0i128, |g, &c| g.gcd(&c))
}

fn primitive(p: &[i128]) -> Vec<i128> {
    let c = content(p);
    if c == 0 {
        return vec![];
    }
    let mut v: Vec<i128> = p.iter().map(|&x| x / c).collect();
    if v.last().is_some_and(|&l| l < 0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

/// gcd in ℤ[t] by primitive pseudo-remainder sequences.
fn pgcd(a: &[i128], b: &[i128]) -> Result<Vec<i128>> {
    if a.is_empty() {
        return Ok(primitive(b).into_iter().map(|x| x * content(b)).collect());
    }
    if b.is_empty() {
        return Ok(primitive(a).into_iter().map(|x| x * content(a)).collect());
    }
    let c = content(a).gcd(&content(b));
    let (mut a, mut b) = (primitive(a), primitive(b));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.len() == 1 {
            return Ok(vec![c]);
        }
        // pseudo-remainder of a by b
        let mut r = a.clone();
        let lb = *b.last().unwrap();
        while r.len() >= b.len() {
            let lr = *r.last().unwrap();
            let k = r.len() - b.len();
            let mut next: Vec<i128> = r.iter().map(|&x| x.checked_mul(lb).ok_or_else(overflow)).collect::<Result<_>>()?;
            for (i, &y) in b.iter().enumerate() {
                next[i + k] = next[i + k].checked_sub(lr.checked_mul(y).ok_or_else(overflow)?).ok_or_else(overflow)?;
            }
            trim(&mut next);
            r = primitive(&next);
        }
        if r.is_empty() {
            return Ok(b.into_iter().map(|x| x * c).collect());
        }
        a = b;
        b = r;
    }
}

/// Fox derivatives of every relator, mapped through xᵢ ↦ t.
pub fn fox_jacobian(p: &Presentation) -> Vec<Vec<LaurentPoly>> {
    let n = p.num_generators();
    p.relators()
        .iter()
        .map(|r| {
            let mut row = vec![LaurentPoly::zero(); n];
            let mut e = 0i32;
            for &l in r {
                let j = l.unsigned_abs() as usize - 1;
                if l > 0 {
                    row[j].add_term(e, 1);
                    e += 1;
                } else {
                    e -= 1;
                    row[j].add_term(e, -1);
                }
            }
            row
        })
        .collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else { return out };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Determinant of a square Laurent matrix, up to a power of t.
fn laurent_det(m: &[Vec<LaurentPoly>]) -> Result<LaurentPoly> {
    let dense: Vec<Vec<Vec<i128>>> = m
        .iter()
        .map(|row| {
            let lo = row.iter().filter_map(LaurentPoly::min_exp).min().unwrap_or(0);
            row.iter()
                .map(|p| {
                    let (l, v) = p.to_dense();
                    if v.is_empty() {
                        return vec![];
                    }
                    let mut out = vec![0i128; (l - lo) as usize];
                    out.extend(v);
                    out
                })
                .collect()
        })
        .collect();
    LaurentPoly::from_dense(0, &det_dense(dense)?)
}

/// Alexander polynomial as the gcd of the maximal minors of the Fox Jacobian
/// with the basepoint column removed, normalized by ±tᵏ.
pub fn alexander_poly_fox(p: &Presentation) -> Result<LaurentPoly> {
    if !p.relators().iter().all(|r| exponent_sum(r) == 0) || !abelianization(p).is_infinite_cyclic() {
        return Err(Error::Precondition("abelianization is not infinite cyclic".into()));
    }
    let n = p.num_generators();
    let k = n - 1;
    if k == 0 {
        return Ok(LaurentPoly::one());
    }
    let jac = fox_jacobian(p);
    let cols: Vec<usize> = (0..n).filter(|&j| j != p.basepoint()).collect();
    let mut g: Vec<i128> = vec![];
    for rows in combinations(jac.len(), k) {
        let sub: Vec<Vec<LaurentPoly>> = rows.iter().map(|&i| cols.iter().map(|&j| jac[i][j].clone()).collect()).collect();
        let d = laurent_det(&sub)?;
        if d.is_zero() {
            continue;
        }
        let (_, dv) = d.normalized().to_dense();
        g = pgcd(&g, &dv)?;
        if g.len() == 1 && g[0].abs() == 1 {
            break;
        }
    }
    Ok(LaurentPoly::from_dense(0, &g)?.normalized())
}

/// det(V − t Vᵀ), normalized by ±tᵏ; the empty matrix gives 1.
pub fn alexander_from_seifert(v: &IntMatrix) -> Result<LaurentPoly> {
    if v.rows() != v.cols() {
        return Err(Error::domain("seifert", "matrix must be square"));
    }
    let n = v.rows();
    let entry = |i: usize, j: usize| -> Result<i64> {
        v.get(i, j).to_i64().ok_or_else(|| Error::Range("Seifert entry exceeds i64".into()))
    };
    let mut m = vec![vec![LaurentPoly::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = LaurentPoly::from_coeffs(0, &[entry(i, j)?, -entry(j, i)?]);
        }
    }
    let d = laurent_det(&m)?;
    if d.is_zero() {
        return Ok(d);
    }
    Ok(d.normalized())
}
