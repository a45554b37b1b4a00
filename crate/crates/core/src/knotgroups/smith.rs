use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::presentation::Presentation;

/// A dense integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> crate::Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(crate::Error::domain("matrix", "ragged rows"));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            entries: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: i64) {
        self.entries[i * self.cols + j] += v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn block_diag(&self, other: &IntMatrix) -> Self {
        let mut m = IntMatrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_i64()).collect())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row_a -= k·row_b
    fn row_axpy(&mut self, a: usize, b: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(b, j) * k;
            self.entries[a * self.cols + j] -= v;
        }
    }

    fn col_axpy(&mut self, a: usize, b: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, b) * k;
            self.entries[i * self.cols + a] -= v;
        }
    }
}

/// Non-zero diagonal of the Smith normal form, each dividing the next.
pub fn smith_normal_form(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            // smallest non-zero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let v = a.get(i, j);
                    if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return diag;
            };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            let p = a.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a.get(i, t).div_floor(&p);
                if !q.is_zero() {
                    a.row_axpy(i, t, &q);
                }
                dirty |= !a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let q = a.get(t, j).div_floor(&p);
                if !q.is_zero() {
                    a.col_axpy(j, t, &q);
                }
                dirty |= !a.get(t, j).is_zero();
            }
            if dirty {
                continue;
            }
            // the pivot must divide the rest of the block
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(a.get(i, j) % &p).is_zero()));
            match bad {
                Some(i) => {
                    let one = -BigInt::one();
                    a.row_axpy(t, i, &one);
                }
                None => {
                    diag.push(p.abs());
                    break;
                }
            }
        }
    }
    diag
}

/// H₁ as ℤ^free_rank ⊕ ⨁ ℤ/dᵢ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    #[serde(serialize_with = "ser_big")]
    pub torsion: Vec<BigInt>,
}

fn ser_big<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

impl AbelianInvariants {
    pub fn is_infinite_cyclic(&self) -> bool {
        self.free_rank == 1 && self.torsion.is_empty()
    }
}

pub fn abelianization(p: &Presentation) -> AbelianInvariants {
    let m = p.exponent_matrix();
    let d = smith_normal_form(&m);
    AbelianInvariants {
        free_rank: p.num_generators() - d.len(),
        torsion: d.into_iter().filter(|x| !x.is_one()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_examples() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).unwrap();
        let d: Vec<i64> = smith_normal_form(&m).iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(d, vec![2, 6, 12]);
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
        let d: Vec<i64> = smith_normal_form(&m).iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(d, vec![1, 6]);
        assert!(smith_normal_form(&IntMatrix::zeros(2, 3)).is_empty());
    }
}
