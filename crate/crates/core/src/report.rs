//! Verification reports and the on-disk witness format.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{congruence_difference, Congruence};
use crate::hecke::{merel_adjoint_candidate, theorem_element, tn_inf, un_element};
use crate::membership::{MembershipVerdict, ModuleSpec, Witness};
use crate::ring::{consts, RingElt};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportStatus {
    Verified,
    Failed,
    Undetermined,
}

impl ReportStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReportStatus::Verified => "verified",
            ReportStatus::Failed => "failed",
            ReportStatus::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for ReportStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<&MembershipVerdict> for ReportStatus {
    fn from(v: &MembershipVerdict) -> Self {
        match v {
            MembershipVerdict::Member(_) => ReportStatus::Verified,
            MembershipVerdict::NotMember(_) => ReportStatus::Failed,
            MembershipVerdict::Undetermined { .. } => ReportStatus::Undetermined,
        }
    }
}

/// Outcome of one claim at one `n` (or over a range of `n`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub range: Option<(u64, u64)>,
    pub status: ReportStatus,
    /// Counterexample locator or refutation for failures.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness_path: Option<String>,
    /// Wall-clock time; left out of deterministic output.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<u64>,
}

impl VerificationReport {
    pub fn new(claim: impl Into<String>, status: ReportStatus) -> Self {
        VerificationReport {
            claim: claim.into(),
            n: None,
            range: None,
            status,
            detail: None,
            depth: None,
            witness_path: None,
            elapsed_ms: None,
        }
    }

    pub fn at(mut self, n: u64) -> Self {
        self.n = Some(n);
        self
    }

    pub fn over(mut self, lo: u64, hi: u64) -> Self {
        self.range = Some((lo, hi));
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn with_depth(mut self, depth: Option<usize>) -> Self {
        self.depth = depth;
        self
    }

    /// Report for a membership verdict, with the refutation or depth filled in.
    pub fn from_verdict(claim: impl Into<String>, n: u64, verdict: &MembershipVerdict) -> Self {
        let mut r = VerificationReport::new(claim, verdict.into()).at(n);
        match verdict {
            MembershipVerdict::Member(w) => r.depth = w.depth,
            MembershipVerdict::NotMember(why) => r.detail = Some(why.to_string()),
            MembershipVerdict::Undetermined { depth } => {
                r.depth = Some(*depth);
                r.detail = Some(format!("no witness within depth {depth}"));
            }
        }
        r
    }

    pub fn sort_key(&self) -> (String, u64, u64) {
        let (lo, hi) = self.range.unwrap_or((0, 0));
        (self.claim.clone(), self.n.unwrap_or(lo), hi)
    }
}

/// Sorts by `(claim, n)` so repeated runs print identically.
pub fn sort_reports(reports: &mut [VerificationReport]) {
    reports.sort_by_key(VerificationReport::sort_key);
}

/// Worst status across reports: any failure beats any undetermined.
pub fn overall_status(reports: &[VerificationReport]) -> ReportStatus {
    if reports.iter().any(|r| r.status == ReportStatus::Failed) {
        ReportStatus::Failed
    } else if reports.iter().any(|r| r.status == ReportStatus::Undetermined) {
        ReportStatus::Undetermined
    } else {
        ReportStatus::Verified
    }
}

/// A persisted membership certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessFile {
    pub claim: String,
    pub n: u64,
    pub witness: Witness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessCheck {
    /// `Σ L_i · w_i · R_i` equals the stored target.
    pub reproduces: bool,
    /// The stored target equals the one recomputed from `(claim, n)`;
    /// `None` for claims without a known target.
    pub target_matches: Option<bool>,
}

impl WitnessCheck {
    pub fn ok(&self) -> bool {
        self.reproduces && self.target_matches != Some(false)
    }
}

impl WitnessFile {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "claim": self.claim,
            "n": self.n,
            "spec": self.witness.spec.to_json(),
            "target": self.witness.target.to_json(),
            "witnesses": self.witness.witnesses.iter().map(RingElt::to_json).collect::<Vec<_>>(),
            "depth": self.witness.depth,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("witness file lacks {k:?}")));
        let claim = field("claim")?
            .as_str()
            .ok_or_else(|| Error::Parse("claim must be a string".into()))?
            .to_string();
        let n = field("n")?
            .as_u64()
            .ok_or_else(|| Error::Parse("n must be a positive integer".into()))?;
        let spec = ModuleSpec::from_json(field("spec")?)?;
        let target = RingElt::from_json(field("target")?)?;
        let witnesses = field("witnesses")?
            .as_array()
            .ok_or_else(|| Error::Parse("witnesses must be an array".into()))?
            .iter()
            .map(RingElt::from_json)
            .collect::<Result<Vec<_>>>()?;
        if witnesses.len() != spec.pairs().len() {
            return Err(Error::Parse(format!(
                "{} witnesses for {} module pairs",
                witnesses.len(),
                spec.pairs().len()
            )));
        }
        let depth = match v.get("depth") {
            None | Some(serde_json::Value::Null) => None,
            Some(d) => Some(
                d.as_u64()
                    .ok_or_else(|| Error::Parse("depth must be an integer or null".into()))?
                    as usize,
            ),
        };
        Ok(WitnessFile {
            claim,
            n,
            witness: Witness {
                spec,
                target,
                witnesses,
                depth,
            },
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }

    /// Re-verifies by ring arithmetic only; no search.
    pub fn check(&self) -> Result<WitnessCheck> {
        let reproduces = self.witness.verify();
        let target_matches = recompute_target(&self.claim, self.n)?.map(|t| t == self.witness.target);
        Ok(WitnessCheck {
            reproduces,
            target_matches,
        })
    }
}

/// The element each known claim asserts membership of, rebuilt from `n`.
pub fn recompute_target(claim: &str, n: u64) -> Result<Option<RingElt>> {
    let cong = |c: Congruence| congruence_difference(n, c).map(Some);
    match claim {
        "eq1" => Ok(Some(&tn_inf(n)? * &consts::one_minus_s())),
        "eq21" => Ok(Some(&tn_inf(n)? * &consts::one_minus_t())),
        "h1" => Ok(Some(un_element(n)?)),
        "thm11" => {
            let s = consts::one_minus_s();
            let w = theorem_element(&merel_adjoint_candidate(n)?);
            Ok(Some(&(&s * &w) * &s))
        }
        "prop24a" => cong(Congruence::FourUn),
        "prop24b" => cong(Congruence::TwoUn),
        "prop31" => cong(Congruence::XnSum),
        "prop35" if n % 2 == 1 => cong(Congruence::XnPrimedOdd),
        "prop35" => cong(Congruence::XnPrimedEven),
        _ => Ok(None),
    }
}
