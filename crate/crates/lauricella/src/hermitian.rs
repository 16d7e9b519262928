//! Exact invariant Hermitian forms: the canonical form on period
//! coordinates, the tridiagonal Gram on the homology basis over the arcs
//! (both printed diagonal conventions), and exact signatures.

use std::cmp::Ordering;

use num::traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{rat, rat_str, CyclotomicNumber, Rational};
use crate::matrix::CycMatrix;
use crate::weights::{cumulative_sums, CaseLabel, WeightSystem};

/// Square conjugate-symmetric matrix over a cyclotomic field.
#[derive(Debug, Clone)]
pub struct HermitianGram {
    mat: CycMatrix,
}

/// Exact signature of a Hermitian form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub null: usize,
}

/// The two printed diagonal conventions of the tridiagonal homology Gram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpsilonConvention {
    /// diagonal (1/4)(cot(pi/m_{k-1}) + cot(pi/m_k))
    Statement,
    /// diagonal (1/4)(cot(pi/m_{k-1}) - cot(pi/m_k))
    Proof,
}

impl HermitianGram {
    pub fn dimension(&self) -> usize {
        self.mat.n
    }

    pub fn conductor(&self) -> u32 {
        self.mat.conductor
    }

    pub fn entry(&self, i: usize, j: usize) -> &CyclotomicNumber {
        self.mat.get(i, j)
    }

    pub(crate) fn matrix(&self) -> &CycMatrix {
        &self.mat
    }

    pub(crate) fn from_matrix(mat: CycMatrix) -> Result<Self> {
        let g = HermitianGram { mat };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        for i in 0..self.mat.n {
            for j in i..self.mat.n {
                if !self.mat.get(i, j).eq_exact(&self.mat.get(j, i).conj()) {
                    return Err(Error::Invalid(format!(
                        "matrix is not conjugate-symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Float rendering of the entries.
    pub fn embed(&self) -> Vec<Vec<(f64, f64)>> {
        self.mat.embed()
    }

    /// w* G v with embedded entries.
    pub fn evaluate(&self, v: &[(f64, f64)], w: &[(f64, f64)]) -> Result<(f64, f64)> {
        let n = self.mat.n;
        if v.len() != n || w.len() != n {
            return Err(Error::Invalid(format!(
                "evaluate: dimension mismatch (Gram {n}, v {}, w {})",
                v.len(),
                w.len()
            )));
        }
        let g = self.embed();
        let (mut re, mut im) = (0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                // conj(w_i) * g[i][j] * v_j
                let (gr, gi) = g[i][j];
                let (wr, wi) = w[i];
                let (vr, vi) = v[j];
                let (ar, ai) = (wr * gr + wi * gi, wr * gi - wi * gr);
                re += ar * vr - ai * vi;
                im += ar * vi + ai * vr;
            }
        }
        Ok((re, im))
    }

    /// Exact signature by recursive conjugate-symmetric elimination with
    /// 1x1 and 2x2 pivots; congruence-invariant.
    pub fn signature(&self) -> Result<Signature> {
        let n = self.mat.n;
        let mut act: Vec<usize> = (0..n).collect();
        let mut g: Vec<Vec<CyclotomicNumber>> = (0..n)
            .map(|i| (0..n).map(|j| self.mat.get(i, j).clone()).collect())
            .collect();
        let (mut pos, mut neg, mut null) = (0usize, 0usize, 0usize);
        while !act.is_empty() {
            // 1x1 pivot on a nonzero diagonal entry
            if let Some(pi) = act.iter().position(|&i| !g[i][i].is_zero()) {
                let p = act[pi];
                let d = &g[p][p];
                match d.sign_of_real()? {
                    Ordering::Greater => pos += 1,
                    Ordering::Less => neg += 1,
                    Ordering::Equal => unreachable!("nonzero pivot"),
                }
                let dinv = d.invert()?;
                act.remove(pi);
                for &i in &act {
                    for &j in &act {
                        let t = g[i][p].mul(&dinv)?.mul(&g[p][j])?;
                        g[i][j] = g[i][j].sub(&t)?;
                    }
                }
                continue;
            }
            // all active diagonals are zero: look for an off-diagonal entry
            let mut found = None;
            'outer: for (ai, &i) in act.iter().enumerate() {
                for (aj, &j) in act.iter().enumerate().skip(ai + 1) {
                    if !g[i][j].is_zero() {
                        found = Some((ai, aj, i, j));
                        break 'outer;
                    }
                }
            }
            let Some((ai, aj, i, j)) = found else {
                null += act.len();
                break;
            };
            // hyperbolic 2x2 block [[0, g],[conj g, 0]]: signature (+1, -1)
            pos += 1;
            neg += 1;
            let gij = g[i][j].clone();
            let gji = g[j][i].clone();
            let inv_ij = gij.invert()?; // 1/g
            let inv_ji = gji.invert()?; // 1/conj(g)
            act.remove(aj);
            act.remove(ai);
            for &a in &act {
                for &b in &act {
                    let t1 = g[a][i].mul(&inv_ji)?.mul(&g[j][b])?;
                    let t2 = g[a][j].mul(&inv_ij)?.mul(&g[i][b])?;
                    g[a][b] = g[a][b].sub(&t1)?.sub(&t2)?;
                }
            }
        }
        Ok(Signature {
            positive: pos,
            negative: neg,
            null,
        })
    }

    /// JSON rendering: exact canonical coefficient vectors plus floats.
    pub fn to_json(&self) -> serde_json::Value {
        let n = self.mat.n;
        let entries: Vec<Vec<Vec<String>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        self.mat
                            .get(i, j)
                            .canonical()
                            .iter()
                            .map(rat_str)
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let float: Vec<Vec<Vec<f64>>> = self
            .embed()
            .into_iter()
            .map(|row| row.into_iter().map(|(re, im)| vec![re, im]).collect())
            .collect();
        serde_json::json!({
            "dimension": n,
            "conductor": self.mat.conductor,
            "entries": entries,
            "float": float,
        })
    }
}

/// Cumulative phases w_k = e^{i pi (mu_0 + ... + mu_{k-1})}, k = 1..=n+1,
/// as exact cyclotomic numbers.
pub fn cumulative_phases(ws: &WeightSystem) -> Result<Vec<CyclotomicNumber>> {
    let sums = cumulative_sums(ws);
    sums.iter()
        .map(|s| CyclotomicNumber::exp_2pi_i(&(s / rat(2, 1))))
        .collect()
}

/// The Hermitian quadratic form on C^{n+1} restricted off the constraint:
/// symmetric real matrix with entries im(w_j conj(w_k))/2 for j < k.
fn ambient_symmetric(ws: &WeightSystem, phases: &[CyclotomicNumber]) -> Result<CycMatrix> {
    let conductor = ws.conductor()? as u32;
    let np1 = ws.n() + 1;
    let mut m = CycMatrix::zero(np1, conductor);
    let half = rat(1, 2);
    for j in 0..np1 {
        for k in (j + 1)..np1 {
            let prod = phases[j].mul(&phases[k].conj())?;
            let entry = prod.imag_part()?.scale(&half);
            m.set(j, k, entry.clone());
            m.set(k, j, entry);
        }
    }
    Ok(m)
}

/// The canonical invariant Hermitian form on period coordinates.
///
/// For non-integral total weight this is the n x n Gram obtained by
/// eliminating the last coordinate through the constraint
/// sum_k im(w_k) F_k = 0; in the parabolic case it is the (n-1) x (n-1)
/// Gram induced on the hyperplane sum_{k<=n} im(w_k) F_k = 0 in the basis
/// b_k = e_k - (im w_k / im w_n) e_n.
pub fn form_on_period_coordinates(ws: &WeightSystem) -> Result<HermitianGram> {
    ws.ensure_in_range()?;
    let n = ws.n();
    let phases = cumulative_phases(ws)?;
    let m = ambient_symmetric(ws, &phases)?;
    let u: Vec<CyclotomicNumber> = phases
        .iter()
        .map(|w| w.imag_part())
        .collect::<Result<_>>()?;
    let parabolic = ws.classify() == CaseLabel::Parabolic;
    if !parabolic {
        // lift L: C^n -> (constraint hyperplane in C^{n+1}),
        // L e_a = e_a - (u_a / u_n) e_n (indices 0-based; last = n)
        let ratio: Vec<CyclotomicNumber> = (0..n)
            .map(|a| u[a].div(&u[n]).map(|x| x.neg()))
            .collect::<Result<_>>()?;
        let mut h = CycMatrix::zero(n, m.conductor);
        for a in 0..n {
            for b in 0..n {
                // (L e_a)^T M (L e_b), all quantities real
                let mut acc = m.get(a, b).clone();
                acc = acc.add(&m.get(a, n).mul(&ratio[b])?)?;
                acc = acc.add(&ratio[a].mul(&m.get(n, b))?)?;
                acc = acc.add(&ratio[a].mul(&m.get(n, n))?.mul(&ratio[b])?)?;
                h.set(a, b, acc);
            }
        }
        HermitianGram::from_matrix(h)
    } else {
        // pivot: last index j in 0..n-1 (0-based among F_1..F_n) with u_j != 0
        let pivot = (0..n)
            .rev()
            .find(|&j| !u[j].is_zero())
            .ok_or_else(|| Error::Invalid("all im(w_k) vanish".into()))?;
        let cols: Vec<usize> = (0..n).filter(|&j| j != pivot).collect();
        let ratio: Vec<CyclotomicNumber> = cols
            .iter()
            .map(|&a| u[a].div(&u[pivot]).map(|x| x.neg()))
            .collect::<Result<_>>()?;
        let mut h = CycMatrix::zero(n - 1, m.conductor);
        for (ia, &a) in cols.iter().enumerate() {
            for (ib, &b) in cols.iter().enumerate() {
                let mut acc = m.get(a, b).clone();
                acc = acc.add(&m.get(a, pivot).mul(&ratio[ib])?)?;
                acc = acc.add(&ratio[ia].mul(&m.get(pivot, b))?)?;
                acc = acc.add(&ratio[ia].mul(&m.get(pivot, pivot))?.mul(&ratio[ib])?)?;
                h.set(ia, ib, acc);
            }
        }
        HermitianGram::from_matrix(h)
    }
}

/// The exact tridiagonal inverse of the period-coordinate Gram for
/// non-parabolic systems: diagonal cot(pi mu_{k-1}) + cot(pi mu_k),
/// off-diagonal -1/sin(pi mu_k) between rows k-1 and k (0-based).
/// This is the dual Gram of the reflection roots attached to the arcs.
pub fn dual_tridiagonal(ws: &WeightSystem) -> Result<HermitianGram> {
    ws.ensure_in_range()?;
    if ws.classify() == CaseLabel::Parabolic {
        return Err(Error::Invalid(
            "dual_tridiagonal is defined for non-parabolic systems".into(),
        ));
    }
    let n = ws.n();
    let conductor = ws.conductor()? as u32;
    let mut t = CycMatrix::zero(n, conductor);
    for i in 0..n {
        let diag = CyclotomicNumber::cot_pi(ws.mu(i))?
            .add(&CyclotomicNumber::cot_pi(ws.mu(i + 1))?)?;
        t.set(i, i, diag);
        if i + 1 < n {
            let off = CyclotomicNumber::sin_pi(ws.mu(i + 1))?.invert()?.neg();
            t.set(i, i + 1, off.clone());
            t.set(i + 1, i, off);
        }
    }
    HermitianGram::from_matrix(t)
}

/// The tridiagonal Gram on the arc homology basis, printed conventions.
/// Off-diagonal -(1/4)/sin(pi/m); diagonal (1/4)(cot(pi/m_{k-1}) +- cot(pi/m_k)).
pub fn epsilon_gram(ws: &WeightSystem, convention: EpsilonConvention) -> Result<HermitianGram> {
    ws.ensure_hyperbolic("epsilon_gram")?;
    let n = ws.n();
    if n < 2 {
        return Err(Error::Invalid("epsilon_gram requires n >= 2".into()));
    }
    let m = ws.common_denominator_u64()?;
    let conductor = ws.conductor()? as u32;
    let quarter = rat(1, 4);
    let off = CyclotomicNumber::sin_pi(&rat(1, m as i64))?
        .invert()?
        .scale(&quarter)
        .neg();
    let mut g = CycMatrix::zero(n, conductor);
    for k in 1..=n {
        let mk_prev = ws.denominator(k - 1).clone();
        let mk = ws.denominator(k).clone();
        let c_prev = CyclotomicNumber::cot_pi(&(Rational::one() / Rational::from(mk_prev)))?;
        let c_here = CyclotomicNumber::cot_pi(&(Rational::one() / Rational::from(mk)))?;
        let diag = match convention {
            EpsilonConvention::Statement => c_prev.add(&c_here)?,
            EpsilonConvention::Proof => c_prev.sub(&c_here)?,
        }
        .scale(&quarter);
        g.set(k - 1, k - 1, diag);
        if k >= 2 {
            g.set(k - 1, k - 2, off.clone());
            g.set(k - 2, k - 1, off.clone());
        }
    }
    HermitianGram::from_matrix(g)
}
