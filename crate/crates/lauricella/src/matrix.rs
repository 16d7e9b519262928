//! Small dense matrices over a cyclotomic field. Internal substrate shared by
//! the Hermitian-form and monodromy modules.

use crate::error::{Error, Result};
use crate::exactnum::CyclotomicNumber;

#[derive(Debug, Clone)]
pub struct CycMatrix {
    pub n: usize,
    pub conductor: u32,
    data: Vec<CyclotomicNumber>,
}

impl CycMatrix {
    pub fn zero(n: usize, conductor: u32) -> Self {
        CycMatrix {
            n,
            conductor,
            data: vec![CyclotomicNumber::zero(conductor); n * n],
        }
    }

    pub fn identity(n: usize, conductor: u32) -> Self {
        let mut m = Self::zero(n, conductor);
        for i in 0..n {
            m.set(i, i, CyclotomicNumber::one(conductor));
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &CyclotomicNumber {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CyclotomicNumber) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zero(n, self.conductor.max(other.conductor));
        for i in 0..n {
            for j in 0..n {
                let mut acc = CyclotomicNumber::zero(out.conductor);
                for k in 0..n {
                    let a = self.get(i, k);
                    if a.coefficients().iter().all(num::traits::Zero::is_zero) {
                        continue;
                    }
                    acc = acc.add(&a.mul(other.get(k, j))?)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[CyclotomicNumber]) -> Result<Vec<CyclotomicNumber>> {
        let n = self.n;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = CyclotomicNumber::zero(self.conductor);
            for k in 0..n {
                acc = acc.add(&self.get(i, k).mul(&v[k])?)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    pub fn conj_transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n, self.conductor);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n, self.conductor.max(other.conductor));
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(i, j).sub(other.get(i, j))?);
            }
        }
        Ok(out)
    }

    pub fn eq_exact(&self, other: &Self) -> bool {
        if self.n != other.n {
            return false;
        }
        for i in 0..self.n {
            for j in 0..self.n {
                if !self.get(i, j).eq_exact(other.get(i, j)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    /// Rank by Gaussian elimination over the field.
    pub fn rank(&self) -> Result<usize> {
        let n = self.n;
        let mut rows: Vec<Vec<CyclotomicNumber>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut rank = 0;
        let mut col = 0;
        while rank < n && col < n {
            let pivot = (rank..n).find(|&r| !rows[r][col].is_zero());
            let Some(p) = pivot else {
                col += 1;
                continue;
            };
            rows.swap(rank, p);
            let inv = rows[rank][col].invert()?;
            for r in (rank + 1)..n {
                if rows[r][col].is_zero() {
                    continue;
                }
                let f = rows[r][col].mul(&inv)?;
                for c in col..n {
                    let t = f.mul(&rows[rank][c])?;
                    rows[r][c] = rows[r][c].sub(&t)?;
                }
            }
            rank += 1;
            col += 1;
        }
        Ok(rank)
    }

    /// Determinant by fraction-free-ish Gaussian elimination.
    pub fn det(&self) -> Result<CyclotomicNumber> {
        let n = self.n;
        let mut rows: Vec<Vec<CyclotomicNumber>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut det = CyclotomicNumber::one(self.conductor);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !rows[r][col].is_zero());
            let Some(p) = pivot else {
                return Ok(CyclotomicNumber::zero(self.conductor));
            };
            if p != col {
                rows.swap(col, p);
                det = det.neg();
            }
            det = det.mul(&rows[col][col])?;
            let inv = rows[col][col].invert()?;
            for r in (col + 1)..n {
                if rows[r][col].is_zero() {
                    continue;
                }
                let f = rows[r][col].mul(&inv)?;
                for c in col..n {
                    let t = f.mul(&rows[col][c])?;
                    rows[r][c] = rows[r][c].sub(&t)?;
                }
            }
        }
        Ok(det)
    }

    /// Inverse by Gauss-Jordan elimination; fails on singular input.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a: Vec<Vec<CyclotomicNumber>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut b: Vec<Vec<CyclotomicNumber>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            CyclotomicNumber::one(self.conductor)
                        } else {
                            CyclotomicNumber::zero(self.conductor)
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(Error::DivisionByZero)?;
            a.swap(col, pivot);
            b.swap(col, pivot);
            let inv = a[col][col].invert()?;
            for c in 0..n {
                a[col][c] = a[col][c].mul(&inv)?;
                b[col][c] = b[col][c].mul(&inv)?;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..n {
                    let t = f.mul(&a[col][c])?;
                    a[r][c] = a[r][c].sub(&t)?;
                    let t = f.mul(&b[col][c])?;
                    b[r][c] = b[r][c].sub(&t)?;
                }
            }
        }
        let mut out = Self::zero(n, self.conductor);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, b[i][j].clone());
            }
        }
        Ok(out)
    }

    /// Canonical byte key: entries reduced modulo Phi_N, serialized in fixed
    /// coefficient order. Exact and collision-free for equal conductors.
    pub fn canonical_key(&self) -> String {
        let mut s = String::new();
        for e in &self.data {
            for c in e.canonical() {
                s.push_str(&c.numer().to_string());
                s.push('/');
                s.push_str(&c.denom().to_string());
                s.push(',');
            }
            s.push(';');
        }
        s
    }

    pub fn embed(&self) -> Vec<Vec<(f64, f64)>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).embed()).collect())
            .collect()
    }
}
