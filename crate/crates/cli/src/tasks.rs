//! One verification task per `(claim, n)`, run on the rayon pool.

use std::fs;
use std::path::Path;
use std::time::Instant;

use clap::ValueEnum;
use rayon::prelude::*;

use hecke_core::geometry::{build_set, star_sum, verify_congruence, Congruence, SetLabel};
use hecke_core::hecke::{
    check_eq21, check_h1, check_theorem, merel_adjoint_candidate, solve_tilde_deepening, tn_inf,
    verify_hecke_relation, HeckePair,
};
use hecke_core::membership::{MembershipVerdict, ModuleSpec, SearchConfig, Witness};
use hecke_core::report::{ReportStatus, VerificationReport, WitnessFile};
use hecke_core::ring::consts;
use hecke_core::theta::{check_identity, prime_solution_count};
use hecke_core::{Error, RingElt};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Claim {
    Eq1,
    Eq21,
    H1,
    Thm11,
    Prop24,
    Prop31,
    Prop35,
    Starsum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// The closed-form adjoint candidate
    Merel,
    /// Exact bounded-support solve, deepening up to --depth
    Solve,
}

#[derive(Debug)]
pub enum TaskError {
    Resource(String),
    Usage(String),
}

impl From<Error> for TaskError {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceLimit { .. } => TaskError::Resource(e.to_string()),
            other => TaskError::Usage(other.to_string()),
        }
    }
}

#[derive(Default)]
pub struct Outcome {
    pub reports: Vec<VerificationReport>,
    pub aborted: Option<String>,
    pub usage_error: Option<String>,
}

pub fn verify_all(claim: Claim, ns: &[u64], method: Method, cfg: &SearchConfig, dir: &Path) -> Outcome {
    let results: Vec<Result<Vec<VerificationReport>, TaskError>> = ns
        .par_iter()
        .map(|&n| {
            let start = Instant::now();
            let mut reports = verify_one(claim, n, method, cfg, dir)?;
            let ms = start.elapsed().as_millis() as u64;
            for r in &mut reports {
                r.elapsed_ms = Some(ms);
                eprintln!("{} n={} {}", r.claim, n, r.status);
            }
            Ok(reports)
        })
        .collect();
    let mut outcome = Outcome::default();
    for r in results {
        match r {
            Ok(rs) => outcome.reports.extend(rs),
            Err(TaskError::Resource(why)) => {
                outcome.aborted.get_or_insert(why);
            }
            Err(TaskError::Usage(why)) => {
                outcome.usage_error.get_or_insert(why);
            }
        }
    }
    outcome
}

fn persist(dir: &Path, claim: &str, n: u64, witness: &Witness) -> Result<String, TaskError> {
    let path = dir.join(claim).join(format!("{n}.json"));
    let file = WitnessFile {
        claim: claim.to_string(),
        n,
        witness: witness.clone(),
    };
    let text = serde_json::to_string_pretty(&file.to_json()).expect("witness JSON");
    fs::create_dir_all(path.parent().expect("has parent"))
        .and_then(|_| fs::write(&path, text + "\n"))
        .map_err(|e| TaskError::Usage(format!("cannot write {}: {e}", path.display())))?;
    Ok(path.display().to_string())
}

/// Report for a verdict, persisting the witness of a member.
fn membership_report(
    claim: &str,
    file_claim: &str,
    n: u64,
    verdict: &MembershipVerdict,
    dir: &Path,
) -> Result<VerificationReport, TaskError> {
    let mut report = VerificationReport::from_verdict(claim, n, verdict);
    if let Some(w) = verdict.witness() {
        if !w.verify() {
            return Ok(report_failed(claim, n, "witness does not reproduce its target"));
        }
        report.witness_path = Some(persist(dir, file_claim, n, w)?);
    }
    Ok(report)
}

fn report_failed(claim: &str, n: u64, why: &str) -> VerificationReport {
    VerificationReport::new(claim, ReportStatus::Failed).at(n).with_detail(why)
}

/// `T̃_n` by the requested method; `Ok(None)` when the solve window is exhausted.
fn tilde_pair(n: u64, method: Method, cfg: &SearchConfig) -> Result<Option<HeckePair>, TaskError> {
    match method {
        Method::Merel => Ok(Some(verify_hecke_relation(n, &merel_adjoint_candidate(n)?)?.1)),
        Method::Solve => match solve_tilde_deepening(n, cfg) {
            Ok(pair) => Ok(Some(pair)),
            Err(Error::DepthExhausted { .. }) => Ok(None),
            Err(e) => Err(e.into()),
        },
    }
}

/// Certificate for `T_n^∞(1-S) = (1-S)T̃_n + (1-T)Y_n`.
fn hecke_witness(pair: &HeckePair, depth: Option<usize>) -> Result<Witness, TaskError> {
    let spec = ModuleSpec::new(vec![
        (consts::one_minus_s(), RingElt::one()),
        (consts::one_minus_t(), RingElt::one()),
    ])?;
    Ok(Witness {
        spec,
        target: &tn_inf(pair.n)? * &consts::one_minus_s(),
        witnesses: vec![pair.tilde.clone(), pair.y.clone()],
        depth,
    })
}

fn undetermined(claim: &str, n: u64, depth: usize) -> VerificationReport {
    VerificationReport::new(claim, ReportStatus::Undetermined)
        .at(n)
        .with_depth(Some(depth))
        .with_detail(format!("no T̃_{n} on the depth-{depth} window"))
}

fn verify_one(
    claim: Claim,
    n: u64,
    method: Method,
    cfg: &SearchConfig,
    dir: &Path,
) -> Result<Vec<VerificationReport>, TaskError> {
    let congruence = |name: &str, c: Congruence| -> Result<VerificationReport, TaskError> {
        membership_report(name, name, n, &verify_congruence(n, c, cfg)?, dir)
    };
    let report = match claim {
        Claim::Eq1 => {
            let Some(pair) = tilde_pair(n, method, cfg)? else {
                return Ok(vec![undetermined("eq1", n, cfg.depth)]);
            };
            if !pair.verified {
                report_failed("eq1", n, "T_n^∞(1-S) - (1-S)T̃_n is not in (1-T)R_n")
            } else {
                let depth = (method == Method::Solve).then_some(cfg.depth);
                let w = hecke_witness(&pair, depth)?;
                let verdict = MembershipVerdict::Member(w);
                membership_report("eq1", "eq1", n, &verdict, dir)?
            }
        }
        Claim::Eq21 => membership_report("eq21", "eq21", n, &check_eq21(n)?, dir)?,
        Claim::H1 => membership_report("h1", "h1", n, &check_h1(n, cfg)?, dir)?,
        Claim::Thm11 => {
            let Some(pair) = tilde_pair(n, method, cfg)? else {
                return Ok(vec![undetermined("thm11", n, cfg.depth)]);
            };
            if !pair.verified {
                report_failed("thm11", n, "T̃_n fails the Hecke relation")
            } else {
                let file_claim = match method {
                    Method::Merel => "thm11",
                    Method::Solve => "thm11-solve",
                };
                membership_report("thm11", file_claim, n, &check_theorem(&pair, cfg)?, dir)?
            }
        }
        Claim::Prop24 => {
            return Ok(vec![
                congruence("prop24a", Congruence::FourUn)?,
                congruence("prop24b", Congruence::TwoUn)?,
            ])
        }
        Claim::Prop31 => congruence("prop31", Congruence::XnSum)?,
        Claim::Prop35 => {
            let c = if n % 2 == 1 {
                Congruence::XnPrimedOdd
            } else {
                Congruence::XnPrimedEven
            };
            congruence("prop35", c)?
        }
        Claim::Starsum => {
            let mut out = Vec::new();
            for label in [SetLabel::Tn, SetLabel::Un, SetLabel::Vn, SetLabel::Xn, SetLabel::XnP] {
                let sum = star_sum(&build_set(n, label)?);
                let name = format!("starsum-{label}");
                out.push(if sum.is_zero() {
                    VerificationReport::new(name, ReportStatus::Verified).at(n)
                } else {
                    report_failed(&name, n, &format!("star sum has {} nonzero terms", sum.len()))
                });
            }
            return Ok(out);
        }
    };
    Ok(vec![report])
}

pub fn build(n: u64, method: Method, cfg: &SearchConfig) -> Result<(VerificationReport, HeckePair), TaskError> {
    if n == 0 {
        return Err(TaskError::Usage("n must be at least 1".into()));
    }
    match tilde_pair(n, method, cfg)? {
        Some(pair) => {
            let status = if pair.verified {
                ReportStatus::Verified
            } else {
                ReportStatus::Failed
            };
            Ok((VerificationReport::new("eq1", status).at(n), pair))
        }
        None => Ok((
            undetermined("eq1", n, cfg.depth),
            HeckePair {
                n,
                tilde: RingElt::zero(n),
                y: RingElt::zero(n),
                verified: false,
            },
        )),
    }
}

pub fn theta_check(identity: u8, nmax: usize) -> Result<VerificationReport, Error> {
    check_identity(identity, nmax)
}

fn is_odd_prime(p: u64) -> bool {
    p % 2 == 1 && p > 2 && (3..).step_by(2).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

pub fn primes(pmax: u64) -> Vec<VerificationReport> {
    (3..=pmax)
        .filter(|&p| is_odd_prime(p))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&p| {
            let count = prime_solution_count(p).expect("odd prime");
            let status = if count + 3 == p {
                ReportStatus::Verified
            } else {
                ReportStatus::Failed
            };
            VerificationReport::new("primes", status)
                .at(p)
                .with_detail(format!("{count} solutions"))
        })
        .collect()
}

pub fn check_witness(path: &Path) -> VerificationReport {
    let failed = |why: String| VerificationReport::new("check-witness", ReportStatus::Failed).with_detail(why);
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return failed(format!("cannot read {}: {e}", path.display())),
    };
    let file = match WitnessFile::parse(&text) {
        Ok(f) => f,
        Err(e) => return failed(e.to_string()),
    };
    let mut report = VerificationReport::new(file.claim.clone(), ReportStatus::Verified)
        .at(file.n)
        .with_depth(file.witness.depth);
    report.witness_path = Some(path.display().to_string());
    match file.check() {
        Ok(c) if !c.reproduces => {
            report.status = ReportStatus::Failed;
            report.detail = Some("witness does not reproduce its target".into());
        }
        Ok(c) if c.target_matches == Some(false) => {
            report.status = ReportStatus::Failed;
            report.detail = Some(format!("target is not the {} element for n = {}", file.claim, file.n));
        }
        Ok(_) => {}
        Err(e) => {
            report.status = ReportStatus::Failed;
            report.detail = Some(e.to_string());
        }
    }
    report
}
