//! Execution of single campaign tasks.

use std::collections::BTreeMap;

use detlab_core::algebra::matrix::k_subsets;
use detlab_core::algebra::snf::{minor_orders, smith_normal_form, LambdaProfile, SeriesMatrix};
use detlab_core::algebra::{Field, Matrix, TruncSeries};
use detlab_core::configurations::linalg::{self, Rat};
use detlab_core::configurations::{
    cauchy_binet_expansion, configuration_lct_campaign, hadamard_one_generic, linear_one_generic, patterson_matrix,
    ConfigurationMatrix,
};
use detlab_core::determinantal::{
    cone_comparison_check, corollary_check, fiber_count_check, stratum_counts, DeterminantalPair, PolyMatrix, Verdict,
};
use detlab_core::jets::{lct_estimate, lct_estimate_visible, CountConfig, Engine, LctEstimate};
use detlab_core::{Error, Result};
use num_rational::Rational64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::campaign::{InputDoc, MatrixGrid, Task};
use super::Status;
use crate::encode;
use crate::formats::RatDoc;
use crate::runner::RAYON;

/// Settings shared by every task of a run.
#[derive(Clone, Debug)]
pub struct RunContext {
    pub primes: Vec<u32>,
    pub budget: u64,
    pub seed: u64,
}

impl RunContext {
    fn counts(&self, primes: &Option<Vec<u32>>, budget: Option<u64>) -> CountConfig<'static> {
        CountConfig {
            primes: primes.clone().unwrap_or_else(|| self.primes.clone()),
            engine: Engine {
                budget: budget.unwrap_or(self.budget),
                runner: &RAYON,
            },
            sampling: None,
        }
    }

    /// Independent stream per task so results do not depend on task order.
    fn rng(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        rng
    }
}

pub struct Outcome {
    pub status: Status,
    pub payload: Value,
}

fn outcome(status: Status, payload: Value) -> Result<Outcome> {
    Ok(Outcome { status, payload })
}

/// FAIL dominates AMBIGUOUS, which dominates PASS.
fn combine(statuses: impl IntoIterator<Item = Status>) -> Status {
    statuses.into_iter().fold(Status::Pass, |acc, s| match (acc, s) {
        (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
        (Status::Ambiguous, _) | (_, Status::Ambiguous) => Status::Ambiguous,
        _ => Status::Pass,
    })
}

fn from_verdict(v: Verdict) -> Status {
    match v {
        Verdict::Pass => Status::Pass,
        Verdict::Fail => Status::Fail,
        Verdict::Ambiguous => Status::Ambiguous,
    }
}

fn big(r: Rational64) -> Rat {
    Rat::new((*r.numer()).into(), (*r.denom()).into())
}

/// Compares a certified-or-not estimate with an expected value.
fn expectation(estimate: Rational64, certified: bool, expect: &Option<RatDoc>, tol: &Rat) -> Result<(Status, Value)> {
    let Some(e) = expect else {
        let s = if certified { Status::Pass } else { Status::Ambiguous };
        return Ok((s, Value::Null));
    };
    let e = e.value().map_err(|err| Error::Precondition(err.to_string()))?;
    let diff = big(estimate) - &e;
    let close = diff.numer().magnitude() * tol.denom().magnitude() <= tol.numer().magnitude() * diff.denom().magnitude();
    let status = match (close, certified) {
        (true, true) => Status::Pass,
        (false, true) => Status::Fail,
        (_, false) => Status::Ambiguous,
    };
    Ok((status, json!({ "expected": encode::rat(&e), "tolerance": encode::rat(tol), "within": close })))
}

fn guard(max_m: u32) -> Rat {
    Rat::new(1.into(), (2 * i64::from(max_m)).into())
}

fn matrix_input(inputs: &BTreeMap<String, InputDoc>, name: &str) -> Result<PolyMatrix> {
    match inputs.get(name) {
        Some(InputDoc::Matrix(m)) => m.build().map_err(|e| Error::Precondition(e.to_string())),
        _ => Err(Error::Precondition(format!("`{name}` is not a matrix input"))),
    }
}

fn config_input(inputs: &BTreeMap<String, InputDoc>, name: &str) -> Result<ConfigurationMatrix> {
    match inputs.get(name) {
        Some(InputDoc::Configuration(c)) => c.build().map_err(|e| Error::Precondition(e.to_string())),
        _ => Err(Error::Precondition(format!("`{name}` is not a configuration input"))),
    }
}

/// `lct(Y, W_A)` as the least chart estimate.
pub fn lct_w(pair: &DeterminantalPair, max_m: u32, cfg: &CountConfig<'_>) -> Result<(Rational64, bool, Vec<Option<LctEstimate>>)> {
    let charts = (0..pair.r())
        .map(|j| lct_estimate_visible(&pair.w_chart(j)?, max_m, cfg))
        .collect::<Result<Vec<_>>>()?;
    let est = charts
        .iter()
        .flatten()
        .map(|e| e.estimate)
        .min()
        .ok_or_else(|| Error::Precondition(format!("W_A has no jets of contact order <= {max_m} on any chart")))?;
    let certified = charts.iter().flatten().all(|e| e.certified_upper_bound);
    Ok((est, certified, charts))
}

pub fn run_task(task: &Task, index: usize, inputs: &BTreeMap<String, InputDoc>, ctx: &RunContext) -> Result<Outcome> {
    match task {
        Task::Stratification { input, m, level, primes, budget } => {
            let pair = DeterminantalPair::new(matrix_input(inputs, input)?)?;
            let cfg = ctx.counts(primes, *budget);
            let mut cells = Vec::new();
            let mut statuses = Vec::new();
            for &m in m {
                for &q in &cfg.primes {
                    let s = stratum_counts(&pair, m, level.unwrap_or(m), q, &cfg.engine)?;
                    let ok = s.partition_ok && s.residual == 0 && s.snf_disagreements == 0;
                    statuses.push(if ok { Status::Pass } else { Status::Fail });
                    cells.push(encode::strata(&s));
                }
            }
            outcome(combine(statuses), json!({ "cells": cells }))
        }
        Task::FiberFormula { r, max_part, max_m, level, primes } => {
            let level = level.unwrap_or((*max_part).max(*max_m));
            let primes = primes.clone().unwrap_or_else(|| ctx.primes.clone());
            let jobs: Vec<(LambdaProfile, u32)> = r
                .iter()
                .flat_map(|&r| LambdaProfile::enumerate(r, *max_part))
                .flat_map(|l| (0..=*max_m).map(move |m| (l.clone(), m)))
                .collect();
            let checks = jobs
                .par_iter()
                .map(|(l, m)| fiber_count_check(l, *m, level, &primes))
                .collect::<Result<Vec<_>>>()?;
            let mut statuses = Vec::new();
            let mut cells = Vec::new();
            for c in &checks {
                // empty fibers are predicted exactly when lambda_r < m
                let empty_rule = c.formula.is_none() == (c.lambda.last().unwrap_or(0) < c.m);
                statuses.push(if empty_rule { from_verdict(c.verdict) } else { Status::Fail });
                cells.push(encode::fiber(c));
            }
            outcome(combine(statuses), json!({ "level": level, "cells": cells }))
        }
        Task::LctZ { input, max_m, primes, budget, expect, tolerance } => {
            let gens = match inputs.get(input) {
                Some(InputDoc::Ideal(i)) => i.build().map_err(|e| Error::Precondition(e.to_string()))?,
                _ => DeterminantalPair::new(matrix_input(inputs, input)?)?.z_gens().clone(),
            };
            let cfg = ctx.counts(primes, *budget);
            let est = lct_estimate(&gens, *max_m, &cfg)?;
            let tol = match tolerance {
                Some(t) => t.value().map_err(|e| Error::Precondition(e.to_string()))?,
                None => guard(*max_m),
            };
            let (status, check) = expectation(est.estimate, est.certified_upper_bound, expect, &tol)?;
            outcome(status, json!({ "lct": encode::lct(&est), "check": check }))
        }
        Task::LctW { input, max_m, primes, budget, expect, tolerance } => {
            let pair = DeterminantalPair::new(matrix_input(inputs, input)?)?;
            let cfg = ctx.counts(primes, *budget);
            let (est, certified, charts) = lct_w(&pair, *max_m, &cfg)?;
            let tol = match tolerance {
                Some(t) => t.value().map_err(|e| Error::Precondition(e.to_string()))?,
                None => guard(*max_m),
            };
            let (status, check) = expectation(est, certified, expect, &tol)?;
            outcome(
                status,
                json!({
                    "lct_w": encode::rat64(&est),
                    "certified": certified,
                    "charts": charts.iter().map(|c| c.as_ref().map(encode::lct)).collect::<Vec<_>>(),
                    "check": check,
                }),
            )
        }
        Task::Corollary { input, max_m, primes, budget, expect_z, expect_w } => {
            let a = matrix_input(inputs, input)?;
            let cfg = ctx.counts(primes, *budget);
            let rep = corollary_check(&a, *max_m, &cfg)?;
            let tol = big(rep.epsilon);
            let (sz, cz) = expectation(rep.lct_z.estimate, rep.lct_z.certified_upper_bound, expect_z, &tol)?;
            let (sw, cw) = expectation(rep.lct_w, rep.lct_w_certified, expect_w, &tol)?;
            let verdict = match rep.verdict.label() {
                "CONSISTENT" => Status::Pass,
                "INCONSISTENT" => Status::Fail,
                _ => Status::Ambiguous,
            };
            outcome(
                combine([verdict, sz, sw]),
                json!({ "corollary": encode::corollary(&rep), "check_z": cz, "check_w": cw }),
            )
        }
        Task::Cone { input, max_m, primes, budget } => {
            let a = matrix_input(inputs, input)?;
            let cfg = ctx.counts(primes, *budget);
            let mut statuses = Vec::new();
            let mut cells = Vec::new();
            for m in 0..=*max_m {
                for p in 0..=m {
                    let c = cone_comparison_check(&a, m, p, *max_m, &cfg)?;
                    statuses.push(from_verdict(c.verdict));
                    cells.push(encode::cone(&c));
                }
            }
            outcome(combine(statuses), json!({ "cells": cells }))
        }
        Task::Configuration { input, max_m, primes, budget, expect_z, expect_w } => {
            let c = config_input(inputs, input)?;
            let cfg = ctx.counts(primes, *budget);
            let rep = configuration_lct_campaign(&c, *max_m, &cfg)?;
            let co = &rep.corollary;
            let tol = big(co.epsilon);
            let (sz, cz) = expectation(co.lct_z.estimate, co.lct_z.certified_upper_bound, expect_z, &tol)?;
            let (sw, cw) = expectation(co.lct_w, co.lct_w_certified, expect_w, &tol)?;
            let verdict = match co.verdict.label() {
                "CONSISTENT" => Status::Pass,
                "INCONSISTENT" => Status::Fail,
                _ => Status::Ambiguous,
            };
            let structural = if rep.square_free && rep.support_is_bases {
                Status::Pass
            } else {
                Status::Fail
            };
            outcome(
                combine([structural, verdict, sz, sw]),
                json!({ "configuration": encode::configuration(&rep), "check_z": cz, "check_w": cw }),
            )
        }
        Task::OneGeneric { input, grid, primes } => {
            let primes = primes.clone().unwrap_or_else(|| ctx.primes.clone());
            match (input, grid) {
                (Some(name), _) => {
                    let c = config_input(inputs, name)?;
                    let (status, cell) = one_generic_pair(&c, &primes)?;
                    outcome(status, cell)
                }
                (None, Some(g)) => one_generic_grid(g, &primes),
                (None, None) => Err(Error::Precondition("one_generic needs an input or a grid".into())),
            }
        }
        Task::SnfRoundtrip { count, shapes, level, prime } => {
            snf_roundtrip(&mut ctx.rng(index), *count, shapes, *level, *prime)
        }
        Task::CauchyBinet { count, max_r, max_n, entry_bound } => {
            cauchy_binet(&mut ctx.rng(index), *count, *max_r, *max_n, *entry_bound)
        }
    }
}

fn one_generic_pair(c: &ConfigurationMatrix, primes: &[u32]) -> Result<(Status, Value)> {
    let h = hadamard_one_generic(c)?;
    let l = linear_one_generic(&patterson_matrix(c), primes)?;
    let status = match (h.one_generic == l.one_generic, h.confirmed && l.confirmed) {
        (false, true) => Status::Fail,
        (true, true) => Status::Pass,
        (_, false) => Status::Ambiguous,
    };
    let d: Vec<Vec<String>> = c.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    Ok((
        status,
        json!({ "d": d, "hadamard": encode::one_generic(&h), "linear": encode::one_generic(&l) }),
    ))
}

fn grid_matrices(g: &MatrixGrid) -> Vec<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    for n in g.r..=g.max_n {
        let cells = g.r * n;
        let k = g.entries.len();
        for mut code in 0..k.pow(cells as u32) {
            let mut flat = Vec::with_capacity(cells);
            for _ in 0..cells {
                flat.push(g.entries[code % k]);
                code /= k;
            }
            out.push(flat.chunks(n).map(<[i64]>::to_vec).collect());
        }
    }
    out
}

fn one_generic_grid(g: &MatrixGrid, primes: &[u32]) -> Result<Outcome> {
    let full_rank: Vec<Vec<Vec<i64>>> = grid_matrices(g)
        .into_iter()
        .filter(|d| {
            let rows: Vec<Vec<Rat>> = d.iter().map(|r| r.iter().map(|&x| linalg::rat(x)).collect()).collect();
            linalg::rank(&rows) == g.r
        })
        .collect();
    let results = full_rank
        .par_iter()
        .map(|d| one_generic_pair(&ConfigurationMatrix::from_i64(d)?, primes))
        .collect::<Result<Vec<_>>>()?;
    let mut tally = BTreeMap::new();
    let mut generic = 0usize;
    let mut mismatches = Vec::new();
    for (s, cell) in &results {
        *tally.entry(s.label()).or_insert(0usize) += 1;
        if cell["hadamard"]["one_generic"] == json!(true) {
            generic += 1;
        }
        if *s != Status::Pass && mismatches.len() < 10 {
            mismatches.push(cell.clone());
        }
    }
    outcome(
        combine(results.iter().map(|(s, _)| *s)),
        json!({
            "instances": results.len(),
            "one_generic": generic,
            "statuses": tally,
            "not_passing": mismatches,
        }),
    )
}

fn random_series(rng: &mut ChaCha8Rng, field: Field, q: u32, level: u32) -> Result<TruncSeries> {
    // a random valuation shift makes nontrivial profiles common
    let shift = rng.gen_range(0..=2u32).min(level);
    let coeffs: Vec<i64> = (0..=level)
        .map(|k| if k < shift { 0 } else { i64::from(rng.gen_range(0..q)) })
        .collect();
    TruncSeries::from_i64s(field, &coeffs)
}

/// One reconstruction check; `None` when the level cannot see the full profile.
fn snf_case(m: &SeriesMatrix) -> Result<Option<Value>> {
    let minors = LambdaProfile::from_minor_orders(&minor_orders(m)?)?;
    let res = match smith_normal_form(m) {
        Ok(r) => r,
        Err(Error::TruncationInsufficient { .. }) => {
            return Ok(if minors.is_truncated() {
                None
            } else {
                Some(json!({ "error": "Smith form failed on a determined profile", "minors": minors.to_string() }))
            });
        }
        Err(e) => return Err(e),
    };
    let diag = res.diagonal(m.rows(), m.cols());
    let product = res.p_transform.mul(m)?.mul(&res.q_transform)?;
    let reconstructs = product == diag;
    let units = res.p_transform.det()?.is_unit() && res.q_transform.det()?.is_unit();
    let agrees = res.lambda == minors;
    if reconstructs && units && agrees {
        Ok(Some(Value::Null))
    } else {
        Ok(Some(json!({
            "lambda": res.lambda.to_string(),
            "minors": minors.to_string(),
            "reconstructs": reconstructs,
            "units": units,
        })))
    }
}

fn snf_roundtrip(rng: &mut ChaCha8Rng, count: usize, shapes: &[(usize, usize)], level: u32, q: u32) -> Result<Outcome> {
    let field = Field::prime(u64::from(q))?;
    let mut checked = 0usize;
    let mut undetermined = 0usize;
    let mut failures = Vec::new();
    let mut profiles: BTreeMap<String, usize> = BTreeMap::new();
    for i in 0..count {
        let (s, r) = shapes[i % shapes.len()];
        let rows = (0..s)
            .map(|_| (0..r).map(|_| random_series(rng, field, q, level)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let m = Matrix::from_rows(rows)?;
        match snf_case(&m)? {
            None => undetermined += 1,
            Some(Value::Null) => {
                checked += 1;
                let l = LambdaProfile::from_minor_orders(&minor_orders(&m)?)?;
                *profiles.entry(format!("{s}x{r} {l}")).or_insert(0) += 1;
            }
            Some(f) => {
                checked += 1;
                failures.push(f);
            }
        }
    }
    let status = if failures.is_empty() { Status::Pass } else { Status::Fail };
    outcome(
        status,
        json!({
            "count": count,
            "prime": q,
            "level": level,
            "checked": checked,
            "undetermined": undetermined,
            "profiles": profiles,
            "failures": failures,
        }),
    )
}

/// Term-by-term comparison of `det(D diag(x) D^T)` with the squared maximal minors of `D`.
pub fn cauchy_binet_case(c: &ConfigurationMatrix) -> Result<Option<Value>> {
    let (r, n) = (c.rank(), c.ground_size());
    let det = patterson_matrix(c).det()?;
    let mut mismatches = Vec::new();
    let mut expected_terms = 0usize;
    for subset in k_subsets(n, r) {
        let minor = linalg::det(&c.restrict(&subset));
        let expected = &minor * &minor;
        let mut exps = vec![0u32; n];
        for &i in &subset {
            exps[i] = 1;
        }
        let got = det.coefficient(&exps);
        let got = got.as_rational().cloned().unwrap_or_else(Rat::zero);
        if !expected.is_zero() {
            expected_terms += 1;
        }
        if got != expected {
            mismatches.push(json!({ "subset": subset, "expected": encode::rat(&expected), "got": encode::rat(&got) }));
        }
    }
    // every monomial of the determinant must be one of the subsets above
    if det.num_terms() != expected_terms {
        mismatches.push(json!({ "terms": det.num_terms(), "expected_terms": expected_terms }));
    }
    let expansion = cauchy_binet_expansion(c)?;
    let expansion_ok = expansion.determinant == det && expansion.coefficients.len() == expected_terms;
    if mismatches.is_empty() && expansion_ok {
        Ok(None)
    } else {
        let d: Vec<Vec<String>> = c.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        Ok(Some(json!({ "d": d, "mismatches": mismatches, "expansion_ok": expansion_ok })))
    }
}

fn cauchy_binet(rng: &mut ChaCha8Rng, count: usize, max_r: usize, max_n: usize, bound: i64) -> Result<Outcome> {
    let mut failures = Vec::new();
    let mut rejected = 0usize;
    let mut unsquared = 0usize;
    let mut shapes: BTreeMap<String, usize> = BTreeMap::new();
    let mut done = 0usize;
    while done < count {
        let r = rng.gen_range(1..=max_r);
        let n = rng.gen_range(r..=max_n);
        let d: Vec<Vec<i64>> = (0..r).map(|_| (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
        let rows: Vec<Vec<Rat>> = d.iter().map(|row| row.iter().map(|&x| linalg::rat(x)).collect()).collect();
        if linalg::rank(&rows) < r {
            rejected += 1;
            continue;
        }
        let c = ConfigurationMatrix::from_i64(&d)?;
        if cauchy_binet_expansion(&c)?.unsquared_matches {
            unsquared += 1;
        }
        if let Some(f) = cauchy_binet_case(&c)? {
            failures.push(f);
        }
        *shapes.entry(format!("{r}x{n}")).or_insert(0) += 1;
        done += 1;
    }
    let status = if failures.is_empty() { Status::Pass } else { Status::Fail };
    outcome(
        status,
        json!({
            "count": count,
            "rank_deficient_rejected": rejected,
            "unsquared_formula_matches": unsquared,
            "shapes": shapes,
            "failures": failures,
        }),
    )
}
