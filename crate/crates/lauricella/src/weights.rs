//! Weight systems: classification, integrality conditions, stability and
//! cusp splittings.

use num::bigint::BigInt;
use num::traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{parse_rational, rat_str, Rational};

/// Case of a weight system according to its total weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    Elliptic,
    Parabolic,
    Hyperbolic,
    OutOfRange,
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CaseLabel::Elliptic => "elliptic",
            CaseLabel::Parabolic => "parabolic",
            CaseLabel::Hyperbolic => "hyperbolic",
            CaseLabel::OutOfRange => "out-of-range",
        };
        f.write_str(s)
    }
}

/// Which indices participate in pairwise integrality checks: the finite
/// points 0..n, or all of 0..n+1 including the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexRange {
    FiniteOnly,
    IncludeInfinity,
}

/// One pairwise integrality record.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PairCondition {
    pub k: usize,
    pub l: usize,
    /// mu_k + mu_l as a string "p/q"
    pub pair_sum: String,
    /// applicable iff mu_k + mu_l < 1
    pub applicable: bool,
    /// (1 - mu_k - mu_l)^{-1} when applicable
    pub reciprocal: Option<String>,
    pub int_ok: bool,
    pub half_int_ok: bool,
}

/// Report of the INT / half-INT conditions over a chosen index range.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ConditionReport {
    pub range_includes_infinity: bool,
    pub pairs: Vec<PairCondition>,
    pub int_ok: bool,
    pub half_int_ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stability {
    Stable,
    StrictlySemistable,
    Unstable,
}

/// A rational weight system mu_0..mu_n with its derived data.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSystem {
    weights: Vec<Rational>,
    total: Rational,
    mu_inf: Rational,
    /// least common denominator of mu_0..mu_{n+1}
    m: BigInt,
    /// numerators with mu_k = d_k / m, k = 0..n+1
    d: Vec<BigInt>,
    /// individual denominators m_k in lowest terms, k = 0..n+1
    m_k: Vec<BigInt>,
}

impl WeightSystem {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::Invalid(
                "a weight system needs at least two weights (n >= 1)".into(),
            ));
        }
        for (i, w) in weights.iter().enumerate() {
            if !(w.is_positive() && *w < Rational::one()) {
                return Err(Error::Invalid(format!(
                    "weight mu_{i} = {} is not strictly inside (0,1)",
                    rat_str(w)
                )));
            }
        }
        let total: Rational = weights.iter().sum();
        let mu_inf = Rational::from(BigInt::from(2)) - &total;
        let mut m = BigInt::one();
        for w in weights.iter().chain(std::iter::once(&mu_inf)) {
            m = num::integer::lcm(m, w.denom().clone());
        }
        let d: Vec<BigInt> = weights
            .iter()
            .chain(std::iter::once(&mu_inf))
            .map(|w| (w * Rational::from(m.clone())).to_integer())
            .collect();
        let m_k: Vec<BigInt> = weights
            .iter()
            .chain(std::iter::once(&mu_inf))
            .map(|w| w.denom().clone())
            .collect();
        Ok(WeightSystem {
            weights,
            total,
            mu_inf,
            m,
            d,
            m_k,
        })
    }

    /// Parse the comma-separated text format, e.g. "3/12,3/12,3/12,7/12".
    pub fn parse(text: &str) -> Result<Self> {
        let mut weights = Vec::new();
        let mut pos = 0usize;
        for piece in text.split(',') {
            weights.push(parse_rational(piece, pos)?);
            pos += piece.len() + 1;
        }
        Self::new(weights)
    }

    /// Number of finite points minus one (weights are mu_0..mu_n).
    pub fn n(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// mu_k for k = 0..=n+1 (index n+1 is the derived weight at infinity).
    pub fn mu(&self, k: usize) -> &Rational {
        if k <= self.n() {
            &self.weights[k]
        } else if k == self.n() + 1 {
            &self.mu_inf
        } else {
            panic!("weight index {k} out of range");
        }
    }

    pub fn total_weight(&self) -> &Rational {
        &self.total
    }

    pub fn mu_infinity(&self) -> &Rational {
        &self.mu_inf
    }

    /// True when mu_{n+1} lies in (0,1), i.e. in the hyperbolic case.
    pub fn infinity_admissible(&self) -> bool {
        self.mu_inf.is_positive() && self.mu_inf < Rational::one()
    }

    /// Common denominator m (lcm over mu_0..mu_{n+1}).
    pub fn common_denominator(&self) -> &BigInt {
        &self.m
    }

    pub fn common_denominator_u64(&self) -> Result<u64> {
        self.m.to_u64().ok_or(Error::Cap(format!(
            "common denominator {} too large",
            self.m
        )))
    }

    /// Numerator d_k with mu_k = d_k/m, for k = 0..=n+1.
    pub fn numerator(&self, k: usize) -> &BigInt {
        &self.d[k]
    }

    /// Individual denominator m_k of mu_k in lowest terms, k = 0..=n+1.
    pub fn denominator(&self, k: usize) -> &BigInt {
        &self.m_k[k]
    }

    /// Ambient cyclotomic conductor N = lcm(4, 2m).
    pub fn conductor(&self) -> Result<u64> {
        let m = self.common_denominator_u64()?;
        Ok(num::integer::lcm(4, 2 * m))
    }

    pub fn classify(&self) -> CaseLabel {
        let one = Rational::one();
        let two = &one + &one;
        if self.total < one {
            CaseLabel::Elliptic
        } else if self.total == one {
            CaseLabel::Parabolic
        } else if self.total < two {
            CaseLabel::Hyperbolic
        } else {
            CaseLabel::OutOfRange
        }
    }

    /// Reject downstream analyses on out-of-range systems.
    pub fn ensure_in_range(&self) -> Result<()> {
        if self.classify() == CaseLabel::OutOfRange {
            Err(Error::OutOfRange {
                total: rat_str(&self.total),
            })
        } else {
            Ok(())
        }
    }

    pub fn ensure_hyperbolic(&self, what: &str) -> Result<()> {
        if self.classify() != CaseLabel::Hyperbolic {
            Err(Error::Invalid(format!(
                "{what} requires the hyperbolic case (1 < |mu| < 2), got |mu| = {}",
                rat_str(&self.total)
            )))
        } else {
            Ok(())
        }
    }

    /// INT / half-INT conditions over every pair k < l in the chosen range
    /// with mu_k + mu_l < 1: (1 - mu_k - mu_l)^{-1} must be an integer, or a
    /// half-integer when mu_k = mu_l.
    pub fn check_conditions(&self, range: IndexRange) -> Result<ConditionReport> {
        let top = match range {
            IndexRange::FiniteOnly => self.n(),
            IndexRange::IncludeInfinity => {
                if !self.infinity_admissible() {
                    return Err(Error::Invalid(
                        "include-infinity range requires the hyperbolic case".into(),
                    ));
                }
                self.n() + 1
            }
        };
        let one = Rational::one();
        let mut pairs = Vec::new();
        let mut int_ok = true;
        let mut half_ok = true;
        for k in 0..top {
            for l in (k + 1)..=top {
                let sum = self.mu(k) + self.mu(l);
                let applicable = sum < one;
                let mut pc = PairCondition {
                    k,
                    l,
                    pair_sum: rat_str(&sum),
                    applicable,
                    reciprocal: None,
                    int_ok: true,
                    half_int_ok: true,
                };
                if applicable {
                    let rec = (&one - &sum).recip();
                    pc.reciprocal = Some(rat_str(&rec));
                    let is_int = rec.denom().is_one();
                    let is_half = (&rec + &rec).denom().is_one();
                    let equal = self.mu(k) == self.mu(l);
                    pc.int_ok = is_int;
                    pc.half_int_ok = is_int || (equal && is_half);
                    int_ok &= pc.int_ok;
                    half_ok &= pc.half_int_ok;
                }
                pairs.push(pc);
            }
        }
        Ok(ConditionReport {
            range_includes_infinity: matches!(range, IndexRange::IncludeInfinity),
            pairs,
            int_ok,
            half_int_ok: half_ok,
        })
    }

    /// mu-stability of a set partition of {0..n+1} (or of {0..n} with
    /// `include_infinity = false`).
    pub fn stability_of_partition(
        &self,
        partition: &[Vec<usize>],
        include_infinity: bool,
    ) -> Result<Stability> {
        let top = if include_infinity { self.n() + 1 } else { self.n() };
        let mut seen = vec![false; top + 1];
        for part in partition {
            if part.is_empty() {
                return Err(Error::Invalid("partition has an empty part".into()));
            }
            for &i in part {
                if i > top {
                    return Err(Error::Invalid(format!(
                        "partition index {i} out of range 0..={top}"
                    )));
                }
                if seen[i] {
                    return Err(Error::Invalid(format!("partition repeats index {i}")));
                }
                seen[i] = true;
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::Invalid("partition does not cover all indices".into()));
        }
        let one = Rational::one();
        let mut max_weight = Rational::zero();
        for part in partition {
            let w: Rational = part.iter().map(|&i| self.mu(i)).sum();
            if w > max_weight {
                max_weight = w;
            }
        }
        Ok(if max_weight < one {
            Stability::Stable
        } else if max_weight == one {
            Stability::StrictlySemistable
        } else {
            Stability::Unstable
        })
    }

    /// All subsets S of {0..n+1} of total mu-weight exactly 1, canonically
    /// with 0 in S, sorted. Empty iff the quotient is cocompact.
    pub fn cusp_splittings(&self) -> Result<Vec<Vec<usize>>> {
        self.ensure_hyperbolic("cusp_splittings")?;
        let count = self.n() + 2;
        if count > 30 {
            return Err(Error::Cap(format!(
                "cusp enumeration over {count} points exceeds the subset cap"
            )));
        }
        let one = Rational::one();
        let mut out = Vec::new();
        // subsets containing index 0
        for mask in 0u64..(1u64 << (count - 1)) {
            let mut w = self.mu(0).clone();
            let mut subset = vec![0usize];
            for j in 1..count {
                if mask >> (j - 1) & 1 == 1 {
                    w += self.mu(j);
                    subset.push(j);
                }
            }
            if w == one {
                out.push(subset);
            }
        }
        out.sort();
        Ok(out)
    }

    /// Sorted copy of the weight multiset, the canonical form under
    /// weight-preserving permutations.
    pub fn canonical_weights(&self) -> Vec<Rational> {
        let mut w = self.weights.clone();
        w.sort();
        w
    }

    pub fn weights_text(&self) -> String {
        self.weights
            .iter()
            .map(rat_str)
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Helper used across modules: the cumulative phase exponents
/// (mu_0 + ... + mu_{k-1}) for k = 1..=n+1.
pub fn cumulative_sums(ws: &WeightSystem) -> Vec<Rational> {
    let mut acc = Rational::zero();
    let mut out = Vec::with_capacity(ws.n() + 1);
    for k in 0..=ws.n() {
        acc += ws.mu(k);
        out.push(acc.clone());
    }
    out
}
