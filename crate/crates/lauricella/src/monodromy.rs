//! Exact complex-reflection monodromy generators for the Dehn twists along
//! consecutive pairs, word evaluation, form invariance, and bounded closure
//! search.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{rat, CyclotomicNumber};
use crate::hermitian::{cumulative_phases, HermitianGram};
use crate::matrix::CycMatrix;
use crate::weights::WeightSystem;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Exact matrix over Q(zeta_N) acting on period coordinates, optionally
/// remembering the generator word that produced it.
#[derive(Debug, Clone)]
pub struct MonodromyElement {
    mat: CycMatrix,
    pub word: Option<Vec<i32>>,
}

/// The single-point phases a_k = e^{i pi mu_k}, k = 0..=n+1.
#[derive(Debug, Clone)]
pub struct SinglePointPhases {
    pub phases: Vec<CyclotomicNumber>,
}

impl SinglePointPhases {
    pub fn new(ws: &WeightSystem) -> Result<Self> {
        let phases = (0..=ws.n() + 1)
            .map(|k| CyclotomicNumber::exp_2pi_i(&(ws.mu(k) / rat(2, 1))))
            .collect::<Result<_>>()?;
        Ok(SinglePointPhases { phases })
    }
}

impl MonodromyElement {
    pub fn identity(dim: usize, conductor: u32) -> Self {
        MonodromyElement {
            mat: CycMatrix::identity(dim, conductor),
            word: Some(vec![]),
        }
    }

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

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(MonodromyElement {
            mat: self.mat.mul(&other.mat)?,
            word: match (&self.word, &other.word) {
                (Some(a), Some(b)) => {
                    let mut w = b.clone();
                    w.extend_from_slice(a);
                    Some(w)
                }
                _ => None,
            },
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(MonodromyElement {
            mat: self.mat.inverse()?,
            word: self
                .word
                .as_ref()
                .map(|w| w.iter().rev().map(|&l| -l).collect()),
        })
    }

    pub fn eq_exact(&self, other: &Self) -> bool {
        self.mat.eq_exact(&other.mat)
    }

    pub fn is_identity(&self) -> bool {
        self.mat
            .eq_exact(&CycMatrix::identity(self.mat.n, self.mat.conductor))
    }

    pub fn det(&self) -> Result<CyclotomicNumber> {
        self.mat.det()
    }

    /// rank(M - I), exact.
    pub fn rank_minus_identity(&self) -> Result<usize> {
        let id = CycMatrix::identity(self.mat.n, self.mat.conductor);
        self.mat.sub(&id)?.rank()
    }

    pub fn pow(&self, e: u64) -> Result<Self> {
        let mut acc = Self::identity(self.mat.n, self.mat.conductor);
        for _ in 0..e {
            acc = self.mul(&acc)?;
        }
        Ok(acc)
    }

    /// Multiplicative order, searched up to `bound`.
    pub fn order(&self, bound: u64) -> Option<u64> {
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_identity() {
                return Some(k);
            }
            acc = self.mul(&acc).ok()?;
        }
        None
    }

    pub fn canonical_key(&self) -> String {
        self.mat.canonical_key()
    }

    pub fn embed(&self) -> Vec<Vec<(f64, f64)>> {
        self.mat.embed()
    }

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
                            .map(crate::exactnum::rat_str)
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
            "word": self.word,
            "entries": entries,
            "float": float,
        })
    }
}

/// The monodromy of the Dehn twist about a circle enclosing exactly
/// {z_{k-1}, z_k} (k = 1..=n), acting on period coordinates (F_1..F_n).
///
/// In these coordinates the matrix is the identity plus a single column:
/// M = I + v e_k^T with
///   v_{k-1} = (1 - e^{2 pi i mu_k}) conj(w_{k-1}) w_k,
///   v_k     = e^{2 pi i (mu_{k-1} + mu_k)} - 1,
///   v_{k+1} = (e^{2 pi i mu_k} - e^{2 pi i (mu_{k-1} + mu_k)}) conj(w_{k+1}) w_k,
/// which realizes the arc transformation rules of the twist in the basis of
/// normalized arc periods. The nontrivial eigenvalue is
/// e^{2 pi i (mu_{k-1} + mu_k)}; the map is unipotent exactly at angle sum 1.
pub fn dehn_twist_generator(ws: &WeightSystem, k: usize) -> Result<MonodromyElement> {
    ws.ensure_in_range()?;
    let n = ws.n();
    if k < 1 || k > n {
        return Err(Error::Invalid(format!(
            "generator index {k} out of range 1..={n}"
        )));
    }
    let conductor = ws.conductor()? as u32;
    let w = cumulative_phases(ws)?;
    let one = CyclotomicNumber::one(conductor);
    let lambda = CyclotomicNumber::exp_2pi_i(&(ws.mu(k - 1) + ws.mu(k)))?;
    let b2 = CyclotomicNumber::exp_2pi_i(ws.mu(k))?;
    let mut m = CycMatrix::identity(n, conductor);
    let col = k - 1; // 0-based column of e_k
    // diagonal of the twisted column
    m.set(col, col, lambda.clone());
    if k >= 2 {
        let v = one.sub(&b2)?.mul(&w[k - 2].conj())?.mul(&w[k - 1])?;
        m.set(k - 2, col, v);
    }
    if k < n {
        let v = b2.sub(&lambda)?.mul(&w[k].conj())?.mul(&w[k - 1])?;
        m.set(k, col, v);
    }
    Ok(MonodromyElement {
        mat: m,
        word: Some(vec![k as i32]),
    })
}

/// All consecutive-pair generators T_1..T_n.
pub fn all_generators(ws: &WeightSystem) -> Result<Vec<MonodromyElement>> {
    (1..=ws.n()).map(|k| dehn_twist_generator(ws, k)).collect()
}

/// Exact product over a word of signed generator indices: letter +k is
/// gens[k-1], letter -k its inverse; later letters are applied after
/// earlier ones. The empty word is the identity.
pub fn evaluate_word(gens: &[MonodromyElement], word: &[i32]) -> Result<MonodromyElement> {
    if gens.is_empty() {
        return Err(Error::Invalid("evaluate_word needs at least one generator".into()));
    }
    let dim = gens[0].dimension();
    let conductor = gens[0].conductor();
    for g in gens {
        if g.dimension() != dim {
            return Err(Error::Invalid("generators of mixed dimensions".into()));
        }
    }
    let mut acc = MonodromyElement::identity(dim, conductor);
    for &letter in word {
        if letter == 0 || letter.unsigned_abs() as usize > gens.len() {
            return Err(Error::Invalid(format!("word letter {letter} out of range")));
        }
        let g = &gens[(letter.unsigned_abs() - 1) as usize];
        let step = if letter > 0 { g.clone() } else { g.inverse()? };
        acc = step.mul(&acc)?;
    }
    acc.word = Some(word.to_vec());
    Ok(acc)
}

/// Exact test M* H M = H.
pub fn preserves_form(m: &MonodromyElement, h: &HermitianGram) -> Result<bool> {
    if m.dimension() != h.dimension() {
        return Err(Error::Invalid(format!(
            "dimension mismatch: element {} vs form {}",
            m.dimension(),
            h.dimension()
        )));
    }
    let lhs = m
        .matrix()
        .conj_transpose()
        .mul(h.matrix())?
        .mul(m.matrix())?;
    Ok(lhs.eq_exact(h.matrix()))
}

/// Result of the bounded closure search.
#[derive(Debug, Clone, Serialize)]
pub enum ClosureResult {
    Finite {
        order: usize,
        #[serde(skip)]
        elements: Option<Vec<MonodromyElement>>,
    },
    BoundExceeded,
}

/// Breadth-first closure of the generated group under multiplication, using
/// exact canonical matrix hashing. Deterministic; independent of schedule.
pub fn group_closure(
    gens: &[MonodromyElement],
    element_bound: usize,
    keep_elements: bool,
) -> Result<ClosureResult> {
    if gens.is_empty() {
        return Err(Error::Invalid("group_closure needs generators".into()));
    }
    let dim = gens[0].dimension();
    for g in gens {
        if g.dimension() != dim {
            return Err(Error::Invalid("generators of mixed dimensions".into()));
        }
    }
    let conductor = gens[0].conductor();
    let id = MonodromyElement::identity(dim, conductor);
    let mut seen: HashSet<String> = HashSet::new();
    seen.insert(id.canonical_key());
    let mut elements = vec![id.clone()];
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        // expand the frontier (parallel when enabled), then merge
        // deterministically in frontier x generator order
        #[cfg(feature = "parallel")]
        let products: Vec<(String, MonodromyElement)> = frontier
            .par_iter()
            .flat_map_iter(|m| {
                gens.iter().map(move |g| {
                    let p = g.mul(m).expect("closure product");
                    (p.canonical_key(), p)
                })
            })
            .collect();
        #[cfg(not(feature = "parallel"))]
        let products: Vec<(String, MonodromyElement)> = frontier
            .iter()
            .flat_map(|m| {
                gens.iter().map(move |g| {
                    let p = g.mul(m).expect("closure product");
                    (p.canonical_key(), p)
                })
            })
            .collect();
        let mut next = Vec::new();
        for (key, p) in products {
            if seen.insert(key) {
                if seen.len() > element_bound {
                    return Ok(ClosureResult::BoundExceeded);
                }
                if keep_elements {
                    elements.push(p.clone());
                }
                next.push(p);
            }
        }
        frontier = next;
    }
    Ok(ClosureResult::Finite {
        order: seen.len(),
        elements: if keep_elements { Some(elements) } else { None },
    })
}
