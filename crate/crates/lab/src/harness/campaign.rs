use std::collections::BTreeMap;

use detlab_core::algebra::field::is_prime;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};
use crate::formats::{ConfigDoc, IdealDoc, MatrixDoc, RatDoc};

/// A named input of a campaign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InputDoc {
    Matrix(MatrixDoc),
    Ideal(IdealDoc),
    Configuration(ConfigDoc),
}

impl InputDoc {
    fn kind(&self) -> &'static str {
        match self {
            InputDoc::Matrix(_) => "matrix",
            InputDoc::Ideal(_) => "ideal",
            InputDoc::Configuration(_) => "configuration",
        }
    }
}

/// Enumerates every full-rank `r x n` matrix with entries from a list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixGrid {
    pub r: usize,
    pub max_n: usize,
    pub entries: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Task {
    /// `|Cont^m| = sum of the profile strata` at level `N` (default `m`).
    Stratification {
        input: String,
        m: Vec<u32>,
        level: Option<u32>,
        primes: Option<Vec<u32>>,
        budget: Option<u64>,
    },
    /// Fiber codimensions over `diag(t^lambda)` against the formula, for every
    /// profile with `lambda_r <= max_part` and `0 <= m <= max_m`.
    FiberFormula {
        r: Vec<usize>,
        max_part: u32,
        max_m: u32,
        level: Option<u32>,
        primes: Option<Vec<u32>>,
    },
    LctZ {
        input: String,
        max_m: u32,
        primes: Option<Vec<u32>>,
        budget: Option<u64>,
        expect: Option<RatDoc>,
        tolerance: Option<RatDoc>,
    },
    LctW {
        input: String,
        max_m: u32,
        primes: Option<Vec<u32>>,
        budget: Option<u64>,
        expect: Option<RatDoc>,
        tolerance: Option<RatDoc>,
    },
    Corollary {
        input: String,
        max_m: u32,
        primes: Option<Vec<u32>>,
        budget: Option<u64>,
        expect_z: Option<RatDoc>,
        expect_w: Option<RatDoc>,
    },
    /// The cone identity for every `p <= m <= max_m` at level `max_m`.
    Cone {
        input: String,
        max_m: u32,
        primes: Option<Vec<u32>>,
        budget: Option<u64>,
    },
    Configuration {
        input: String,
        max_m: u32,
        primes: Option<Vec<u32>>,
        budget: Option<u64>,
        expect_z: Option<RatDoc>,
        expect_w: Option<RatDoc>,
    },
    /// Hadamard criterion against the linear-algebra checker, on one
    /// configuration or on a grid of matrices.
    OneGeneric {
        input: Option<String>,
        grid: Option<MatrixGrid>,
        primes: Option<Vec<u32>>,
    },
    /// Random series matrices: reconstruction `P M Q = diag(t^lambda)`.
    SnfRoundtrip {
        count: usize,
        shapes: Vec<(usize, usize)>,
        level: u32,
        prime: u32,
    },
    /// Random integer configurations: `det(D diag(x) D^T)` against the
    /// squared maximal minors.
    CauchyBinet {
        count: usize,
        max_r: usize,
        max_n: usize,
        entry_bound: i64,
    },
}

/// Tasks whose failure breaks an exact identity rather than an estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckClass {
    Identity,
    Estimate,
}

impl CheckClass {
    pub fn label(self) -> &'static str {
        match self {
            CheckClass::Identity => "identity",
            CheckClass::Estimate => "estimate",
        }
    }
}

impl Task {
    pub fn kind(&self) -> &'static str {
        match self {
            Task::Stratification { .. } => "stratification",
            Task::FiberFormula { .. } => "fiber_formula",
            Task::LctZ { .. } => "lct_z",
            Task::LctW { .. } => "lct_w",
            Task::Corollary { .. } => "corollary",
            Task::Cone { .. } => "cone",
            Task::Configuration { .. } => "configuration",
            Task::OneGeneric { .. } => "one_generic",
            Task::SnfRoundtrip { .. } => "snf_roundtrip",
            Task::CauchyBinet { .. } => "cauchy_binet",
        }
    }

    pub fn class(&self) -> CheckClass {
        match self {
            Task::Stratification { .. }
            | Task::FiberFormula { .. }
            | Task::SnfRoundtrip { .. }
            | Task::CauchyBinet { .. }
            | Task::Cone { .. } => CheckClass::Identity,
            _ => CheckClass::Estimate,
        }
    }

    pub fn primes(&self) -> Option<&[u32]> {
        match self {
            Task::Stratification { primes, .. }
            | Task::FiberFormula { primes, .. }
            | Task::LctZ { primes, .. }
            | Task::LctW { primes, .. }
            | Task::Corollary { primes, .. }
            | Task::Cone { primes, .. }
            | Task::Configuration { primes, .. }
            | Task::OneGeneric { primes, .. } => primes.as_deref(),
            Task::SnfRoundtrip { .. } | Task::CauchyBinet { .. } => None,
        }
    }

    pub fn budget(&self) -> Option<u64> {
        match self {
            Task::Stratification { budget, .. }
            | Task::LctZ { budget, .. }
            | Task::LctW { budget, .. }
            | Task::Corollary { budget, .. }
            | Task::Cone { budget, .. }
            | Task::Configuration { budget, .. } => *budget,
            _ => None,
        }
    }

    /// Jet levels the task works at.
    pub fn levels(&self) -> Vec<u32> {
        match self {
            Task::Stratification { m, level, .. } => match level {
                Some(l) => vec![*l],
                None => m.clone(),
            },
            Task::FiberFormula { max_part, max_m, level, .. } => vec![level.unwrap_or((*max_part).max(*max_m))],
            Task::LctZ { max_m, .. }
            | Task::LctW { max_m, .. }
            | Task::Corollary { max_m, .. }
            | Task::Cone { max_m, .. }
            | Task::Configuration { max_m, .. } => vec![*max_m],
            Task::SnfRoundtrip { level, .. } => vec![*level],
            Task::OneGeneric { .. } | Task::CauchyBinet { .. } => Vec::new(),
        }
    }

    fn input(&self) -> Option<(&str, &'static [&'static str])> {
        const MATRIX: &[&str] = &["matrix"];
        const MATRIX_OR_IDEAL: &[&str] = &["matrix", "ideal"];
        const CONFIG: &[&str] = &["configuration"];
        match self {
            Task::Stratification { input, .. }
            | Task::LctW { input, .. }
            | Task::Corollary { input, .. }
            | Task::Cone { input, .. } => Some((input, MATRIX)),
            Task::LctZ { input, .. } => Some((input, MATRIX_OR_IDEAL)),
            Task::Configuration { input, .. } => Some((input, CONFIG)),
            Task::OneGeneric { input: Some(input), .. } => Some((input, CONFIG)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Campaign {
    pub name: String,
    #[serde(default)]
    pub inputs: BTreeMap<String, InputDoc>,
    #[serde(default)]
    pub tasks: Vec<Task>,
}

fn check_primes(primes: &[u32], what: &str, errors: &mut Vec<String>) {
    if primes.is_empty() {
        errors.push(format!("{what}: the prime list is empty"));
    }
    for &q in primes {
        if !is_prime(u64::from(q)) {
            errors.push(format!("{what}: {q} is not prime"));
        }
    }
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != primes.len() {
        errors.push(format!("{what}: primes are repeated"));
    }
}

fn check_rat(r: &Option<RatDoc>, what: &str, errors: &mut Vec<String>) {
    if let Some(r) = r {
        if let Err(e) = r.value() {
            errors.push(format!("{what}: {e}"));
        }
    }
}

impl Campaign {
    pub fn from_json(text: &str) -> LabResult<Self> {
        serde_json::from_str(text).map_err(|e| LabError::Validation(vec![e.to_string()]))
    }

    /// Every problem with the campaign, or `Ok` when it can run.
    pub fn validate(&self) -> LabResult<()> {
        let mut errors = Vec::new();
        if self.name.trim().is_empty() {
            errors.push("campaign name is empty".to_string());
        }
        for (name, input) in &self.inputs {
            let built = match input {
                InputDoc::Matrix(m) => m.build().map(|_| ()),
                InputDoc::Ideal(i) => i.build().map(|_| ()),
                InputDoc::Configuration(c) => c.build().map(|_| ()),
            };
            if let Err(e) = built {
                errors.push(format!("input `{name}`: {e}"));
            }
        }
        for (i, task) in self.tasks.iter().enumerate() {
            let what = format!("task {i} ({})", task.kind());
            if let Some((name, kinds)) = task.input() {
                match self.inputs.get(name) {
                    None => errors.push(format!("{what}: input `{name}` is not declared")),
                    Some(doc) if !kinds.contains(&doc.kind()) => errors.push(format!(
                        "{what}: input `{name}` is a {}, expected {}",
                        doc.kind(),
                        kinds.join(" or ")
                    )),
                    Some(_) => {}
                }
            }
            if let Some(p) = task.primes() {
                check_primes(p, &what, &mut errors);
            }
            if task.budget() == Some(0) {
                errors.push(format!("{what}: budget must be positive"));
            }
            match task {
                Task::Stratification { m, level, .. } => {
                    if m.is_empty() {
                        errors.push(format!("{what}: no contact orders listed"));
                    }
                    if let Some(l) = level {
                        if let Some(bad) = m.iter().find(|&&m| m > *l) {
                            errors.push(format!("{what}: m = {bad} exceeds the level {l}"));
                        }
                    }
                }
                Task::FiberFormula { r, max_part, max_m, level, .. } => {
                    if r.is_empty() || r.contains(&0) {
                        errors.push(format!("{what}: r must list positive sizes"));
                    }
                    if let Some(l) = level {
                        if *l < *max_part || *l < *max_m {
                            errors.push(format!("{what}: level {l} is below max_part or max_m"));
                        }
                    }
                }
                Task::LctZ { max_m, expect, tolerance, .. } | Task::LctW { max_m, expect, tolerance, .. } => {
                    if *max_m == 0 {
                        errors.push(format!("{what}: max_m must be at least 1"));
                    }
                    check_rat(expect, &format!("{what} expect"), &mut errors);
                    check_rat(tolerance, &format!("{what} tolerance"), &mut errors);
                }
                Task::Corollary { max_m, expect_z, expect_w, .. }
                | Task::Configuration { max_m, expect_z, expect_w, .. } => {
                    if *max_m == 0 {
                        errors.push(format!("{what}: max_m must be at least 1"));
                    }
                    check_rat(expect_z, &format!("{what} expect_z"), &mut errors);
                    check_rat(expect_w, &format!("{what} expect_w"), &mut errors);
                }
                Task::Cone { .. } => {}
                Task::OneGeneric { input, grid, .. } => match (input, grid) {
                    (Some(_), None) => {}
                    (None, Some(g)) => {
                        if g.r == 0 || g.max_n < g.r || g.entries.is_empty() {
                            errors.push(format!("{what}: grid needs 1 <= r <= max_n and some entries"));
                        }
                        if g.r * g.max_n > 16 {
                            errors.push(format!("{what}: grid of {}x{} matrices is too large", g.r, g.max_n));
                        }
                    }
                    _ => errors.push(format!("{what}: give exactly one of `input` and `grid`")),
                },
                Task::SnfRoundtrip { count, shapes, prime, .. } => {
                    if *count == 0 || shapes.is_empty() {
                        errors.push(format!("{what}: nothing to check"));
                    }
                    if shapes.iter().any(|&(s, r)| s == 0 || r == 0) {
                        errors.push(format!("{what}: shapes must be nonempty"));
                    }
                    check_primes(&[*prime], &what, &mut errors);
                }
                Task::CauchyBinet { count, max_r, max_n, entry_bound } => {
                    if *count == 0 || *max_r == 0 || *max_n < *max_r || *entry_bound <= 0 {
                        errors.push(format!("{what}: need count >= 1, 1 <= max_r <= max_n and entry_bound >= 1"));
                    }
                    if *max_n > 12 {
                        errors.push(format!("{what}: max_n = {max_n} is too large"));
                    }
                }
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(LabError::Validation(errors))
        }
    }
}
