//! Analysis reports and the programmatic front end behind the command-line
//! interface. Reports are JSON-serializable with every exact rational
//! rendered as a "p/q" string; sub-analyses that are undefined for the case
//! at hand are marked not-applicable with a reason rather than omitted.

use serde::{Deserialize, Serialize};

use crate::cover::{cover_profile, is_arithmetic, ArithmeticityWitness};
use crate::error::Result;
use crate::exactnum::rat_str;
use crate::hermitian::{epsilon_gram, form_on_period_coordinates, EpsilonConvention, Signature};
use crate::monodromy::dehn_twist_generator;
use crate::weights::{CaseLabel, ConditionReport, IndexRange, WeightSystem};

pub const SCHEMA_VERSION: u32 = 1;

/// A sub-analysis that may be undefined for the current case.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "status")]
pub enum Section<T> {
    #[serde(rename = "ok")]
    Ok { value: T },
    #[serde(rename = "n/a")]
    NotApplicable { reason: String },
}

impl<T> Section<T> {
    pub fn ok(value: T) -> Self {
        Section::Ok { value }
    }

    pub fn na(reason: &str) -> Self {
        Section::NotApplicable {
            reason: reason.to_string(),
        }
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            Section::Ok { value } => Some(value),
            Section::NotApplicable { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GramReport {
    pub dimension: usize,
    pub conductor: u32,
    pub signature: SignatureReport,
    /// float rendering [[ [re, im], .. ], ..]
    pub float: Vec<Vec<Vec<f64>>>,
    /// canonical exact coefficient vectors, present with --exact
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<Vec<Vec<Vec<String>>>>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct SignatureReport {
    pub positive: usize,
    pub negative: usize,
    pub null: usize,
}

impl From<Signature> for SignatureReport {
    fn from(s: Signature) -> Self {
        SignatureReport {
            positive: s.positive,
            negative: s.negative,
            null: s.null,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CuspReport {
    pub count: usize,
    pub splittings: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ArithmeticReport {
    pub arithmetic: bool,
    pub witnesses: Vec<WitnessReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct WitnessReport {
    pub r: u64,
    pub s_r: String,
    pub s_neg_r: String,
}

impl From<&ArithmeticityWitness> for WitnessReport {
    fn from(w: &ArithmeticityWitness) -> Self {
        WitnessReport {
            r: w.r,
            s_r: w.s_r.clone(),
            s_neg_r: w.s_neg_r.clone(),
        }
    }
}

/// Spectrum of one Dehn-twist generator.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GeneratorSpectrum {
    pub k: usize,
    /// mu_{k-1} + mu_k as "p/q"
    pub angle_sum: String,
    pub unipotent: bool,
    /// multiplicative order of the generator (absent when unipotent)
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub weights: Vec<String>,
    pub total_weight: String,
    pub mu_infinity: String,
    pub case: CaseLabel,
    pub conditions_finite: ConditionReport,
    pub conditions_with_infinity: Section<ConditionReport>,
    pub cusps: Section<CuspReport>,
    pub arithmetic: Section<ArithmeticReport>,
    pub eigendims: Section<Vec<usize>>,
    pub genus: Section<usize>,
    pub gram: Section<GramReport>,
    pub epsilon_gram_statement: Section<GramReport>,
    pub epsilon_gram_proof: Section<GramReport>,
    pub generator_spectra: Section<Vec<GeneratorSpectrum>>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AnalyzeOptions {
    /// include exact coefficient vectors in Gram reports
    pub exact: bool,
}

fn gram_report(g: &crate::hermitian::HermitianGram, exact: bool) -> Result<GramReport> {
    let float = g
        .embed()
        .into_iter()
        .map(|row| row.into_iter().map(|(re, im)| vec![re, im]).collect())
        .collect();
    let exact_entries = if exact {
        let n = g.dimension();
        Some(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| g.entry(i, j).canonical().iter().map(rat_str).collect())
                        .collect()
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(GramReport {
        dimension: g.dimension(),
        conductor: g.conductor(),
        signature: g.signature()?.into(),
        float,
        exact: exact_entries,
    })
}

/// Full analysis of a weight system given in the comma-separated text format.
pub fn analyze(weights_text: &str, opts: AnalyzeOptions) -> Result<AnalysisReport> {
    let ws = WeightSystem::parse(weights_text)?;
    let case = ws.classify();
    ws.ensure_in_range()?;

    let conditions_finite = ws.check_conditions(IndexRange::FiniteOnly)?;
    let hyper = case == CaseLabel::Hyperbolic;
    let conditions_with_infinity = if hyper {
        Section::ok(ws.check_conditions(IndexRange::IncludeInfinity)?)
    } else {
        Section::na("pairs with the point at infinity require the hyperbolic case")
    };
    let cusps = if hyper {
        let splittings = ws.cusp_splittings()?;
        Section::ok(CuspReport {
            count: splittings.len(),
            splittings,
        })
    } else {
        Section::na("cusp splittings require the hyperbolic case")
    };
    let arithmetic = if hyper {
        let (arith, wit) = is_arithmetic(&ws)?;
        Section::ok(ArithmeticReport {
            arithmetic: arith,
            witnesses: wit.iter().map(WitnessReport::from).collect(),
        })
    } else {
        Section::na("the arithmeticity criterion applies to the hyperbolic case")
    };
    let (eigendims, genus) = if hyper {
        let profile = cover_profile(&ws)?;
        (Section::ok(profile.eigendims), Section::ok(profile.genus))
    } else {
        (
            Section::na("eigenspace dimensions require the hyperbolic case"),
            Section::na("the cyclic-cover genus count requires the hyperbolic case"),
        )
    };
    let gram = Section::ok(gram_report(&form_on_period_coordinates(&ws)?, opts.exact)?);
    let (eps_stmt, eps_proof) = if hyper && ws.n() >= 2 {
        (
            Section::ok(gram_report(
                &epsilon_gram(&ws, EpsilonConvention::Statement)?,
                opts.exact,
            )?),
            Section::ok(gram_report(
                &epsilon_gram(&ws, EpsilonConvention::Proof)?,
                opts.exact,
            )?),
        )
    } else {
        let reason = "the homology-basis Gram requires the hyperbolic case and n >= 2";
        (Section::na(reason), Section::na(reason))
    };
    let spectra = {
        let mut out = Vec::new();
        for k in 1..=ws.n() {
            let angle = ws.mu(k - 1) + ws.mu(k);
            let unipotent = angle == crate::exactnum::rat(1, 1);
            let m = dehn_twist_generator(&ws, k)?;
            let order = if unipotent { None } else { m.order(10_000) };
            out.push(GeneratorSpectrum {
                k,
                angle_sum: rat_str(&angle),
                unipotent,
                order,
            });
        }
        Section::ok(out)
    };
    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        weights: ws.weights().iter().map(rat_str).collect(),
        total_weight: rat_str(ws.total_weight()),
        mu_infinity: rat_str(ws.mu_infinity()),
        case,
        conditions_finite,
        conditions_with_infinity,
        cusps,
        arithmetic,
        eigendims,
        genus,
        gram,
        epsilon_gram_statement: eps_stmt,
        epsilon_gram_proof: eps_proof,
        generator_spectra: spectra,
    })
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| crate::error::Error::Parse {
            pos: e.column(),
            msg: e.to_string(),
        })
    }

    /// Terse human-readable summary.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "weights: {}   |mu| = {}   mu_inf = {}   case: {}\n",
            self.weights.join(","),
            self.total_weight,
            self.mu_infinity,
            self.case
        ));
        s.push_str(&format!(
            "conditions (finite): INT = {}, half-INT = {}\n",
            self.conditions_finite.int_ok, self.conditions_finite.half_int_ok
        ));
        if let Some(c) = self.conditions_with_infinity.value() {
            s.push_str(&format!(
                "conditions (with infinity): INT = {}, half-INT = {}\n",
                c.int_ok, c.half_int_ok
            ));
        }
        if let Some(c) = self.cusps.value() {
            s.push_str(&format!("cusps: {}\n", c.count));
        }
        if let Some(a) = self.arithmetic.value() {
            s.push_str(&format!("arithmetic: {}", a.arithmetic));
            if !a.witnesses.is_empty() {
                let w = a
                    .witnesses
                    .iter()
                    .map(|w| format!("r={}: {}, {}", w.r, w.s_r, w.s_neg_r))
                    .collect::<Vec<_>>()
                    .join("; ");
                s.push_str(&format!("   witnesses: {w}"));
            }
            s.push('\n');
        }
        if let (Some(d), Some(g)) = (self.eigendims.value(), self.genus.value()) {
            s.push_str(&format!("eigendims: {d:?}   genus: {g}\n"));
        }
        if let Some(g) = self.gram.value() {
            s.push_str(&format!(
                "period Gram: dim {}, signature ({},{},{})\n",
                g.dimension, g.signature.positive, g.signature.negative, g.signature.null
            ));
        }
        if let Some(sp) = self.generator_spectra.value() {
            for g in sp {
                s.push_str(&format!(
                    "generator T_{}: angle sum {}, {}\n",
                    g.k,
                    g.angle_sum,
                    if g.unipotent {
                        "unipotent".to_string()
                    } else {
                        match g.order {
                            Some(o) => format!("order {o}"),
                            None => "order > 10000".to_string(),
                        }
                    }
                ));
            }
        }
        s
    }
}
