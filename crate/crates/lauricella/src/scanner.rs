//! Exhaustive enumeration of weight systems with bounded n and denominator,
//! classification of each, and deterministic census reports.

use serde::Serialize;

use crate::cover::{is_arithmetic, eigenspace_dims};
use crate::error::{Error, Result};
use crate::exactnum::rat;
use crate::weights::{CaseLabel, IndexRange, WeightSystem};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Census filters; an entry must satisfy all requested predicates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScanFilter {
    pub case: Option<CaseLabel>,
    /// INT conditions (with infinity in the hyperbolic case, finite-only otherwise)
    pub int_ok: bool,
    /// half-INT conditions (same range rule)
    pub half_int_ok: bool,
    /// hyperbolic and not arithmetic
    pub nonarithmetic: bool,
}

impl ScanFilter {
    pub fn parse(spec: &str) -> Result<Self> {
        let mut f = ScanFilter::default();
        for tok in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match tok {
                "int" => f.int_ok = true,
                "half-int" => f.half_int_ok = true,
                "elliptic" => f.case = Some(CaseLabel::Elliptic),
                "parabolic" => f.case = Some(CaseLabel::Parabolic),
                "hyperbolic" => f.case = Some(CaseLabel::Hyperbolic),
                "nonarithmetic" => {
                    f.nonarithmetic = true;
                    f.case = Some(CaseLabel::Hyperbolic);
                }
                other => {
                    return Err(Error::Invalid(format!(
                        "unknown filter `{other}` (expected int|half-int|elliptic|parabolic|hyperbolic|nonarithmetic)"
                    )))
                }
            }
        }
        Ok(f)
    }
}

/// One census row: the canonical (sorted) weight system and its verdicts.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CensusEntry {
    pub weights: String,
    pub case: CaseLabel,
    pub int_ok: bool,
    pub half_int_ok: bool,
    /// verdicts over the finite-only index range
    pub int_ok_finite: bool,
    pub half_int_ok_finite: bool,
    pub cusps: usize,
    pub arithmetic: Option<bool>,
    pub witnesses: String,
    pub eigendims: Option<Vec<usize>>,
}

fn analyze_entry(ds: &[u64], denom: u64, filter: &ScanFilter) -> Option<CensusEntry> {
    let ws = WeightSystem::new(
        ds.iter().map(|&d| rat(d as i64, denom as i64)).collect(),
    )
    .ok()?;
    let case = ws.classify();
    if let Some(want) = filter.case {
        if case != want {
            return None;
        }
    }
    if case == CaseLabel::OutOfRange {
        return None;
    }
    let fin = ws.check_conditions(IndexRange::FiniteOnly).ok()?;
    let main_range = if case == CaseLabel::Hyperbolic {
        ws.check_conditions(IndexRange::IncludeInfinity).ok()?
    } else {
        fin.clone()
    };
    if filter.int_ok && !main_range.int_ok {
        return None;
    }
    if filter.half_int_ok && !main_range.half_int_ok {
        return None;
    }
    // expensive verdicts only for entries that pass the cheap filters
    let (cusps, arithmetic, witnesses, eigendims) = if case == CaseLabel::Hyperbolic {
        let cusps = ws.cusp_splittings().ok()?.len();
        let (arith, wit) = is_arithmetic(&ws).ok()?;
        let wit_str = wit
            .iter()
            .map(|w| format!("r={}: {}, {}", w.r, w.s_r, w.s_neg_r))
            .collect::<Vec<_>>()
            .join("; ");
        let dims = eigenspace_dims(&ws).ok()?;
        (cusps, Some(arith), wit_str, Some(dims))
    } else {
        (0, None, String::new(), None)
    };
    if filter.nonarithmetic && arithmetic != Some(false) {
        return None;
    }
    Some(CensusEntry {
        weights: ws.weights_text(),
        case,
        int_ok: main_range.int_ok,
        half_int_ok: main_range.half_int_ok,
        int_ok_finite: fin.int_ok,
        half_int_ok_finite: fin.half_int_ok,
        cusps,
        arithmetic,
        witnesses,
        eigendims,
    })
}

fn suffixes(prefix: &mut Vec<u64>, remaining: usize, max_num: u64, out: &mut Vec<Vec<u64>>) {
    if remaining == 0 {
        out.push(prefix.clone());
        return;
    }
    let lo = *prefix.last().unwrap();
    for d in lo..=max_num {
        prefix.push(d);
        suffixes(prefix, remaining - 1, max_num, out);
        prefix.pop();
    }
}

/// Every multiset of n+1 weights d/max_denominator with d in 1..max_denominator,
/// emitted once in lexicographic canonical (non-decreasing) order, analyzed and
/// filtered. Deterministic regardless of parallelism.
pub fn enumerate(n: usize, max_denominator: u64, filter: &ScanFilter) -> Result<Vec<CensusEntry>> {
    if n < 1 {
        return Err(Error::Invalid("enumerate requires n >= 1".into()));
    }
    if max_denominator < 2 || max_denominator > 64 {
        return Err(Error::Cap(format!(
            "max_denominator {max_denominator} outside the supported range 2..=64"
        )));
    }
    let max_num = max_denominator - 1;
    // split the walk by the first weight for parallelism; merge preserves order
    let firsts: Vec<u64> = (1..=max_num).collect();
    let work = |d0: u64| -> Vec<CensusEntry> {
        let mut tuples = Vec::new();
        let mut prefix = vec![d0];
        suffixes(&mut prefix, n, max_num, &mut tuples);
        tuples
            .iter()
            .filter_map(|ds| analyze_entry(ds, max_denominator, filter))
            .collect()
    };
    #[cfg(feature = "parallel")]
    let chunks: Vec<Vec<CensusEntry>> = firsts.par_iter().map(|&d0| work(d0)).collect();
    #[cfg(not(feature = "parallel"))]
    let chunks: Vec<Vec<CensusEntry>> = firsts.iter().map(|&d0| work(d0)).collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// Sequential reference enumeration (used by the criterion benches to
/// compare against the parallel path).
pub fn enumerate_seq(n: usize, max_denominator: u64, filter: &ScanFilter) -> Result<Vec<CensusEntry>> {
    if n < 1 {
        return Err(Error::Invalid("enumerate requires n >= 1".into()));
    }
    if max_denominator < 2 || max_denominator > 64 {
        return Err(Error::Cap(format!(
            "max_denominator {max_denominator} outside the supported range 2..=64"
        )));
    }
    let max_num = max_denominator - 1;
    let mut out = Vec::new();
    for d0 in 1..=max_num {
        let mut tuples = Vec::new();
        let mut prefix = vec![d0];
        suffixes(&mut prefix, n, max_num, &mut tuples);
        out.extend(
            tuples
                .iter()
                .filter_map(|ds| analyze_entry(ds, max_denominator, filter)),
        );
    }
    Ok(out)
}

/// Stable CSV rendering, byte-identical across runs for identical inputs.
pub fn census_csv(entries: &[CensusEntry]) -> String {
    let mut s = String::from("weights,case,int,half_int,cusps,arithmetic,witnesses\n");
    for e in entries {
        s.push_str(&format!(
            "\"{}\",{},{},{},{},{},\"{}\"\n",
            e.weights,
            e.case,
            e.int_ok,
            e.half_int_ok,
            e.cusps,
            e.arithmetic.map(|b| b.to_string()).unwrap_or_else(|| "n/a".into()),
            e.witnesses,
        ));
    }
    s
}

pub fn census_json(entries: &[CensusEntry]) -> String {
    let mut s = serde_json::to_string_pretty(entries).expect("census serializes");
    s.push('\n');
    s
}
