//! Perturbation conditions and predicted-bound formulas.
//!
//! Hypotheses that quantify over every vector are checked three-valued: a
//! norm certificate can prove them, a sampled witness can refute them, and
//! otherwise the verdict is [`VerdictStatus::Undecided`]. Admissibility and
//! predicted bounds always use the conservative end of each norm enclosure.

mod conditions;
mod hilbert;
mod hilding;
mod pasf;

pub use conditions::{
    analysis_certificate_bound, analysis_condition, synthesis_certificate_bound, synthesis_condition,
};
pub use hilbert::{pw1_check, pw2_predicted, pw3_predicted, Pw1Outcome};
pub use hilding::{hilding_check, HildingResult};
pub use pasf::{
    corollary_check, main_predicted_bounds, summable_conditions_check, CorollaryOutcome, ExponentMode,
    MainPrediction, SummableOutcome,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The six constants `r, s, t, α, β, γ` of the perturbation hypotheses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PerturbationParams {
    #[serde(default)]
    pub r: f64,
    #[serde(default)]
    pub s: f64,
    #[serde(default)]
    pub t: f64,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub gamma: f64,
}

impl PerturbationParams {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("r", self.r),
            ("s", self.s),
            ("t", self.t),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
        ];
        for (name, v) in all {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParams(format!("{name} = {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum TheoremTag {
    Pw1,
    Pw2,
    Pw3,
    Main,
    Corollary,
    Summable,
}

impl TheoremTag {
    pub const ALL: [TheoremTag; 6] = [
        TheoremTag::Pw1,
        TheoremTag::Pw2,
        TheoremTag::Pw3,
        TheoremTag::Main,
        TheoremTag::Corollary,
        TheoremTag::Summable,
    ];

    /// Whether bounds are in the squared Hilbert-frame sense.
    pub fn is_hilbert(self) -> bool {
        matches!(self, TheoremTag::Pw1 | TheoremTag::Pw2 | TheoremTag::Pw3)
    }

    pub fn name(self) -> &'static str {
        match self {
            TheoremTag::Pw1 => "pw1",
            TheoremTag::Pw2 => "pw2",
            TheoremTag::Pw3 => "pw3",
            TheoremTag::Main => "main",
            TheoremTag::Corollary => "corollary",
            TheoremTag::Summable => "summable",
        }
    }
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremTag::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown theorem `{s}`")))
    }
}

/// Bounds predicted by a theorem. `lower` is absent when the theorem gives
/// no lower-bound formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictedBounds {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    pub upper: f64,
    pub theorem: TheoremTag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum VerdictStatus {
    Certified,
    Falsified,
    Undecided,
}

/// A vector (and prefix length) at which an inequality was observed to fail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub vector: Vec<f64>,
    pub prefix: usize,
    pub violation: f64,
}

/// Outcome of checking a universally quantified inequality.
///
/// `margin` is the certificate slack when certified, minus the violation
/// when falsified, and the best slack observed by sampling otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub status: VerdictStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub margin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<String>,
}

impl ConditionVerdict {
    pub fn is_certified(&self) -> bool {
        self.status == VerdictStatus::Certified
    }

    /// Combines a certificate slack and the worst sampled violation.
    pub(crate) fn decide(
        certificate_slack: f64,
        worst: f64,
        witness: Option<Witness>,
        exact_tol: f64,
        bracket_tol: f64,
    ) -> Self {
        let certified = certificate_slack >= -exact_tol;
        let falsified = worst > bracket_tol;
        match (certified, falsified) {
            (true, true) => ConditionVerdict {
                status: VerdictStatus::Undecided,
                witness,
                margin: certificate_slack,
                diagnostics: Some(format!(
                    "certificate slack {certificate_slack:.3e} contradicts sampled violation {worst:.3e}"
                )),
            },
            (true, false) => ConditionVerdict {
                status: VerdictStatus::Certified,
                witness: None,
                margin: certificate_slack,
                diagnostics: None,
            },
            (false, true) => ConditionVerdict {
                status: VerdictStatus::Falsified,
                witness,
                margin: -worst,
                diagnostics: None,
            },
            (false, false) => ConditionVerdict {
                status: VerdictStatus::Undecided,
                witness: None,
                margin: -worst,
                diagnostics: None,
            },
        }
    }
}
