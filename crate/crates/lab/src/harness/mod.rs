//! Verification campaigns: named inputs plus an ordered list of checks, run
//! into a deterministic report.

mod campaign;
mod corpus;
mod tasks;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use detlab_core::jets::{DEFAULT_BUDGET, DEFAULT_PRIMES};
use detlab_core::Error;
use rayon::prelude::*;
use serde_json::{json, Value};

pub use campaign::{Campaign, CheckClass, InputDoc, MatrixGrid, Task};
pub use corpus::{builtin_corpus, corpus_campaign, CORPUS_VERSION};
pub use tasks::{cauchy_binet_case, lct_w, run_task, Outcome, RunContext};

use crate::emit::{envelope, Environment};
use crate::error::LabResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Fail,
    Ambiguous,
    SkippedBudget,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Ambiguous => "AMBIGUOUS",
            Status::SkippedBudget => "SKIPPED_BUDGET",
        }
    }
}

/// Run-wide settings; tasks may override primes and budget.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub primes: Vec<u32>,
    pub budget: u64,
    pub seed: u64,
    /// Adds wall times, which makes reports differ between runs.
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            primes: DEFAULT_PRIMES.to_vec(),
            budget: DEFAULT_BUDGET,
            seed: 0,
            timings: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TaskResult {
    pub index: usize,
    pub kind: &'static str,
    pub class: CheckClass,
    pub status: Status,
    pub payload: Value,
    pub millis: u128,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub campaign: String,
    pub status: &'static str,
    pub environment: Environment,
    pub tasks: Vec<TaskResult>,
    pub timings: bool,
}

impl Report {
    fn section(&self, class: CheckClass) -> Value {
        let tasks: Vec<&TaskResult> = self.tasks.iter().filter(|t| t.class == class).collect();
        let mut summary: BTreeMap<&str, usize> = BTreeMap::new();
        for t in &tasks {
            *summary.entry(t.status.label()).or_insert(0) += 1;
        }
        let entries: Vec<Value> = tasks
            .iter()
            .map(|t| {
                let mut v = json!({
                    "index": t.index,
                    "kind": t.kind,
                    "status": t.status.label(),
                    "payload": t.payload,
                });
                if self.timings {
                    v["wall_ms"] = json!(t.millis as u64);
                }
                v
            })
            .collect();
        json!({ "summary": summary, "tasks": entries })
    }

    pub fn to_json(&self) -> Value {
        let result = json!({
            "campaign": self.campaign,
            "identity_checks": self.section(CheckClass::Identity),
            "estimate_checks": self.section(CheckClass::Estimate),
        });
        envelope("verify", self.status, &self.environment, result)
    }

    pub fn failed(&self) -> bool {
        self.status == "FAILED"
    }
}

/// Overall status: any FAIL fails the run; identity checks are listed
/// separately so an estimate never hides a broken identity.
fn overall(tasks: &[TaskResult]) -> &'static str {
    let has = |s: Status| tasks.iter().any(|t| t.status == s);
    if has(Status::Fail) {
        "FAILED"
    } else if has(Status::Ambiguous) {
        "AMBIGUOUS"
    } else if has(Status::SkippedBudget) {
        "SKIPPED_BUDGET"
    } else {
        "PASS"
    }
}

/// Validates the campaign, then runs its tasks (concurrently) and reports
/// them in declaration order.
pub fn run_campaign(campaign: &Campaign, opts: &RunOptions) -> LabResult<Report> {
    campaign.validate()?;
    let ctx = RunContext {
        primes: opts.primes.clone(),
        budget: opts.budget,
        seed: opts.seed,
    };
    let tasks: Vec<TaskResult> = campaign
        .tasks
        .par_iter()
        .enumerate()
        .map(|(index, task)| {
            let start = Instant::now();
            let (status, payload) = match run_task(task, index, &campaign.inputs, &ctx) {
                Ok(o) => (o.status, o.payload),
                Err(e @ Error::BudgetExceeded { .. }) => (Status::SkippedBudget, json!({ "reason": e.to_string() })),
                Err(e) => (Status::Fail, json!({ "error": e.to_string() })),
            };
            TaskResult {
                index,
                kind: task.kind(),
                class: task.class(),
                status,
                payload,
                millis: start.elapsed().as_millis(),
            }
        })
        .collect();

    let mut primes: BTreeSet<u32> = opts.primes.iter().copied().collect();
    let mut levels = BTreeSet::new();
    for t in &campaign.tasks {
        primes.extend(t.primes().unwrap_or(&[]));
        levels.extend(t.levels());
    }
    Ok(Report {
        campaign: campaign.name.clone(),
        status: overall(&tasks),
        environment: Environment {
            primes: primes.into_iter().collect(),
            levels: levels.into_iter().collect(),
            seed: opts.seed,
            budget: opts.budget,
        },
        tasks,
        timings: opts.timings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_campaign_passes() {
        let c = Campaign::from_json(r#"{"name": "empty", "tasks": []}"#).unwrap();
        let r = run_campaign(&c, &RunOptions::default()).unwrap();
        assert_eq!(r.status, "PASS");
        let v = r.to_json();
        assert_eq!(v["result"]["identity_checks"]["tasks"], json!([]));
        assert_eq!(v["result"]["estimate_checks"]["tasks"], json!([]));
    }

    #[test]
    fn invalid_campaign_runs_nothing() {
        let c = Campaign::from_json(r#"{"name": "x", "tasks": [{"kind": "cone", "input": "A", "max_m": 1}]}"#).unwrap();
        assert!(matches!(
            run_campaign(&c, &RunOptions::default()),
            Err(crate::error::LabError::Validation(_))
        ));
    }

    #[test]
    fn small_budget_skips() {
        let text = r#"{"name": "b",
            "inputs": {"A": {"matrix": {"vars": ["x1","x2","x3","x4"], "rows": [["x1","x2"],["x3","x4"]]}}},
            "tasks": [{"kind": "lct_z", "input": "A", "max_m": 3, "budget": 5}]}"#;
        let c = Campaign::from_json(text).unwrap();
        let r = run_campaign(&c, &RunOptions::default()).unwrap();
        assert_eq!(r.tasks[0].status, Status::SkippedBudget);
        assert_eq!(r.status, "SKIPPED_BUDGET");
        // a larger budget decides the task
        let mut c = c;
        if let Task::LctZ { budget, .. } = &mut c.tasks[0] {
            *budget = None;
        }
        let r = run_campaign(&c, &RunOptions::default()).unwrap();
        assert_eq!(r.tasks[0].status, Status::Pass);
    }
}
