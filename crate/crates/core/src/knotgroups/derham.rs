use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

use super::laurent::{alexander_poly_fox, fox_jacobian};
use super::presentation::{amalgamate, Presentation};

/// Relative rank tolerance for the kernel of the Fox matrix.
pub const RANK_TOL: f64 = 1e-10;
/// Maximal accepted relator residual.
pub const RELATOR_TOL: f64 = 1e-9;

/// Which square root of r to use; the two branches give the two representations per root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    #[default]
    Principal,
    Negative,
}

/// xⱼ ↦ (s, xⱼ; 0, 1/s) with s² = r and x = 0 at the basepoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeRhamRep {
    pub root: Complex64,
    pub sqrt_root: Complex64,
    pub x_values: Vec<Complex64>,
    pub basepoint: usize,
    pub kernel_dim: usize,
    pub max_residual: f64,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn sqrt_branch(r: Complex64, branch: Branch) -> Complex64 {
    let s = r.sqrt();
    match branch {
        Branch::Principal => s,
        Branch::Negative => -s,
    }
}

impl DeRhamRep {
    /// The diagonal representation: every generator maps to diag(s, 1/s).
    pub fn diagonal(num_generators: usize, basepoint: usize, root: Complex64, branch: Branch) -> Self {
        DeRhamRep {
            root,
            sqrt_root: sqrt_branch(root, branch),
            x_values: vec![c(0.0); num_generators],
            basepoint,
            kernel_dim: 0,
            max_residual: 0.0,
        }
    }

    pub fn generator_matrix(&self, j: usize) -> Matrix2<Complex64> {
        let s = self.sqrt_root;
        Matrix2::new(s, self.x_values[j], c(0.0), s.inv())
    }

    pub fn letter_matrix(&self, l: i32) -> Matrix2<Complex64> {
        let j = l.unsigned_abs() as usize - 1;
        if l > 0 {
            self.generator_matrix(j)
        } else {
            let s = self.sqrt_root;
            Matrix2::new(s.inv(), -self.x_values[j], c(0.0), s)
        }
    }

    pub fn word_matrix(&self, w: &[i32]) -> Matrix2<Complex64> {
        w.iter().fold(Matrix2::identity(), |acc, &l| acc * self.letter_matrix(l))
    }

    /// max over relators of the largest entry of ρ(r) − I.
    pub fn residual(&self, p: &Presentation) -> f64 {
        p.relators()
            .iter()
            .map(|r| (self.word_matrix(r) - Matrix2::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }
}

/// Solves for a based non-abelian representation at a root r of Δ.
///
/// The upper-right entry of ρ(relator) equals √r times the Fox Jacobian at t = r
/// applied to the x-vector, so x spans its kernel with the basepoint column removed.
pub fn derham_solve(p: &Presentation, r: Complex64, branch: Branch) -> Result<DeRhamRep> {
    let delta = alexander_poly_fox(p)?;
    let scale = delta.eval_scale(r).max(1.0);
    let dr = delta.eval(r).norm();
    if dr > 1e-10 * scale {
        return Err(Error::domain("derham", format!("Δ(r) = {dr:.3e} is not zero at r = {r}")));
    }
    let n = p.num_generators();
    let base = p.basepoint();
    let cols: Vec<usize> = (0..n).filter(|&j| j != base).collect();
    if cols.is_empty() {
        return Err(Error::domain("derham", "no non-basepoint generators"));
    }
    let jac = fox_jacobian(p);
    let rows = jac.len().max(cols.len());
    let mut a = DMatrix::<Complex64>::zeros(rows, cols.len());
    for (i, row) in jac.iter().enumerate() {
        for (k, &j) in cols.iter().enumerate() {
            a[(i, k)] = row[j].eval(r);
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested V");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max).max(1.0);
    let small: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] < RANK_TOL * smax)
        .collect();
    if small.is_empty() {
        return Err(Error::domain("derham", format!("Fox matrix has trivial kernel at r = {r}")));
    }
    let imin = *small
        .iter()
        .min_by(|&&x, &&y| svd.singular_values[x].total_cmp(&svd.singular_values[y]))
        .unwrap();
    let v: Vec<Complex64> = v_t.row(imin).iter().map(|z| z.conj()).collect();
    let pivot = *v.iter().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap();
    let mut x_values = vec![c(0.0); n];
    for (k, &j) in cols.iter().enumerate() {
        x_values[j] = v[k] / pivot;
    }
    let mut rep = DeRhamRep {
        root: r,
        sqrt_root: sqrt_branch(r, branch),
        x_values,
        basepoint: base,
        kernel_dim: small.len(),
        max_residual: 0.0,
    };
    rep.max_residual = rep.residual(p);
    if !(rep.max_residual < RELATOR_TOL) {
        return Err(Error::Verification(format!("relator residual {:.3e}", rep.max_residual)));
    }
    Ok(rep)
}

/// Block-diagonal representation of the amalgamated group on ℂ² ⊕ ℂ².
///
/// Generators of the first factor act as R₁(g) ⊕ R₂(b), those of the second as
/// R₁(a) ⊕ R₂(g), where a and b are the identified basepoint meridians.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectSumRep {
    pub first: DeRhamRep,
    pub second: DeRhamRep,
    pub split: usize,
    pub max_residual: f64,
    #[serde(skip)]
    pub presentation: Presentation,
}

fn block(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(b);
    m
}

impl DirectSumRep {
    pub fn letter_matrix(&self, l: i32) -> Matrix4<Complex64> {
        let j = l.unsigned_abs() as usize;
        let sign = l.signum();
        let b1 = (self.first.basepoint as i32 + 1) * sign;
        let b2 = (self.second.basepoint as i32 + 1) * sign;
        if j <= self.split {
            block(&self.first.letter_matrix(l), &self.second.letter_matrix(b2))
        } else {
            let l2 = (j - self.split) as i32 * sign;
            block(&self.first.letter_matrix(b1), &self.second.letter_matrix(l2))
        }
    }

    pub fn word_matrix(&self, w: &[i32]) -> Matrix4<Complex64> {
        w.iter().fold(Matrix4::identity(), |acc, &l| acc * self.letter_matrix(l))
    }

    pub fn residual(&self) -> f64 {
        self.presentation
            .relators()
            .iter()
            .map(|r| (self.word_matrix(r) - Matrix4::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }
}

/// Combines representations of two knot groups on their amalgamated product.
pub fn derham_direct_sum(p1: &Presentation, r1: &DeRhamRep, p2: &Presentation, r2: &DeRhamRep) -> Result<DirectSumRep> {
    for (p, r) in [(p1, r1), (p2, r2)] {
        if r.x_values.len() != p.num_generators() || r.basepoint != p.basepoint() {
            return Err(Error::Precondition("representation does not match its presentation".into()));
        }
        if r.x_values[r.basepoint].norm() != 0.0 {
            return Err(Error::Precondition("representation is not based".into()));
        }
        let res = r.residual(p);
        if !(res < RELATOR_TOL) {
            return Err(Error::Verification(format!("input relator residual {res:.3e}")));
        }
    }
    let presentation = amalgamate(p1, p2)?;
    let mut out = DirectSumRep {
        first: r1.clone(),
        second: r2.clone(),
        split: p1.num_generators(),
        max_residual: 0.0,
        presentation,
    };
    out.max_residual = out.residual();
    if !(out.max_residual < RELATOR_TOL) {
        return Err(Error::Verification(format!("amalgamated relator residual {:.3e}", out.max_residual)));
    }
    Ok(out)
}
