//! Command-line front end.
//!
//! Exit codes: 0 when the result was computed or passed, 1 on a FAIL
//! verdict, 2 on usage, validation or I/O errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use detlab_core::algebra::field::is_prime;
use detlab_core::algebra::snf::{smith_normal_form, LambdaProfile};
use detlab_core::configurations::{
    cauchy_binet_expansion, hadamard_one_generic, is_connected, is_square_free, linear_one_generic,
    patterson_matrix, Matroid,
};
use detlab_core::determinantal::{
    cone_comparison_check, fiber_count_check, lambda_profile, pullback, stratum_counts, DeterminantalPair, Verdict,
};
use detlab_core::jets::{
    count_contact, lct_estimate, ContactQuery, CountConfig, Engine, IdealGens, SamplingConfig, DEFAULT_BUDGET,
    DEFAULT_PRIMES,
};
use serde_json::{json, Value};

use crate::emit::{envelope, render, Environment, Format};
use crate::encode;
use crate::error::{LabError, LabResult};
use crate::formats::{read_doc, ConfigDoc, IdealDoc, JetDoc, MatrixDoc, SeriesMatrixDoc};
use crate::harness::{corpus_campaign, lct_w, run_campaign, Campaign, RunOptions};
use crate::runner::RAYON;

#[derive(Debug, Parser)]
#[command(name = "detlab", version, about = "Jet counting, thresholds and determinantal checks")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Jet level N.
    #[arg(long, global = true)]
    pub level: Option<u32>,
    /// Largest contact order M for threshold estimates.
    #[arg(long = "max-m", global = true)]
    pub max_m: Option<u32>,
    /// Primes to count over, e.g. 3,5.
    #[arg(long, global = true, value_delimiter = ',')]
    pub primes: Option<Vec<u32>>,
    /// Search nodes allowed per exact count.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random jets per prime when a count exceeds the budget.
    #[arg(long, global = true)]
    pub samples: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Threshold estimate from contact loci.
    Lct {
        #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
        ideal: Option<PathBuf>,
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// With --matrix: the incidence correspondence instead of the determinantal locus.
        #[arg(long, requires = "matrix")]
        incidence: bool,
    },
    /// Count Cont^m (or Cont^{>=m}) over each prime.
    Count {
        #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
        ideal: Option<PathBuf>,
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        at_least: bool,
    },
    /// Profile of one jet.
    Profile {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        jet: PathBuf,
    },
    /// Smith normal form of a series matrix.
    Snf {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Stratify Cont^m of the determinantal locus by profile.
    Strata {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        m: u32,
    },
    /// Count the fiber over diag(t^lambda) and compare with the formula.
    Fiber {
        #[arg(long, value_delimiter = ',', required = true)]
        lambda: Vec<u32>,
        #[arg(long)]
        m: u32,
    },
    /// Compare the affine cone with the punctured cone.
    Cone {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: u32,
    },
    /// Patterson matrix and support expansion of a configuration.
    Patterson {
        #[arg(long)]
        config: PathBuf,
    },
    /// Bases and connectivity of a configuration's matroid.
    Matroid {
        #[arg(long)]
        config: PathBuf,
    },
    /// 1-genericity of a Patterson matrix, or of a matrix of linear forms.
    OneGeneric {
        #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
        config: Option<PathBuf>,
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Run a campaign file or a corpus campaign (`corpus:NAME`).
    Verify {
        #[arg(long)]
        campaign: String,
        /// Include wall times; reports are then no longer reproducible.
        #[arg(long)]
        timings: bool,
    },
}

fn usage(flag: &str, message: impl Into<String>) -> LabError {
    LabError::Usage {
        flag: flag.to_string(),
        message: message.into(),
    }
}

struct Settings {
    primes: Vec<u32>,
    budget: u64,
    seed: u64,
    samples: Option<u64>,
}

impl Settings {
    fn from(c: &Common) -> LabResult<Self> {
        let primes = c.primes.clone().unwrap_or_else(|| DEFAULT_PRIMES.to_vec());
        if primes.is_empty() {
            return Err(usage("--primes", "expected a nonempty comma-separated list of distinct primes"));
        }
        for &q in &primes {
            if !is_prime(u64::from(q)) {
                return Err(usage("--primes", format!("{q} is not prime; expected distinct primes below 2^31")));
            }
        }
        let mut sorted = primes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != primes.len() {
            return Err(usage("--primes", "primes must be distinct"));
        }
        let budget = c.budget.unwrap_or(DEFAULT_BUDGET);
        if budget == 0 {
            return Err(usage("--budget", "expected a positive number of search nodes"));
        }
        if c.samples == Some(0) {
            return Err(usage("--samples", "expected a positive number of samples"));
        }
        Ok(Settings {
            primes,
            budget,
            seed: c.seed,
            samples: c.samples,
        })
    }

    fn counts(&self) -> CountConfig<'static> {
        CountConfig {
            primes: self.primes.clone(),
            engine: Engine {
                budget: self.budget,
                runner: &RAYON,
            },
            sampling: self.samples.map(|samples| SamplingConfig {
                samples,
                seed: self.seed,
            }),
        }
    }

    fn env(&self, levels: Vec<u32>) -> Environment {
        Environment {
            primes: self.primes.clone(),
            levels,
            seed: self.seed,
            budget: self.budget,
        }
    }
}

fn max_m(c: &Common, default: u32) -> LabResult<u32> {
    let m = c.max_m.unwrap_or(default);
    if m == 0 {
        return Err(usage("--max-m", "expected an integer M >= 1"));
    }
    Ok(m)
}

fn level_at_least(c: &Common, min: u32, what: &str) -> LabResult<u32> {
    let n = c.level.unwrap_or(min);
    if n < min {
        return Err(usage("--level", format!("expected N >= {min} ({what})")));
    }
    Ok(n)
}

fn pair_from(path: &Path) -> LabResult<DeterminantalPair> {
    Ok(DeterminantalPair::new(read_doc::<MatrixDoc>(path)?.build()?)?)
}

fn ideal_from(ideal: &Option<PathBuf>, matrix: &Option<PathBuf>) -> LabResult<IdealGens> {
    match (ideal, matrix) {
        (Some(p), _) => read_doc::<IdealDoc>(p)?.build(),
        (None, Some(p)) => Ok(pair_from(p)?.z_gens().clone()),
        (None, None) => Err(usage("--ideal", "give --ideal or --matrix")),
    }
}

fn verdict_status(v: Verdict) -> &'static str {
    v.label()
}

/// Runs one invocation and returns the report document.
pub fn execute(cli: &Cli) -> LabResult<Value> {
    let c = &cli.common;
    let s = Settings::from(c)?;
    Ok(match &cli.command {
        Command::Lct { ideal, matrix, incidence } => {
            let m = max_m(c, 4)?;
            if *incidence {
                let pair = pair_from(matrix.as_ref().expect("clap enforces --matrix"))?;
                let (est, certified, charts) = lct_w(&pair, m, &s.counts())?;
                let result = json!({
                    "target": "incidence",
                    "estimate": encode::rat64(&est),
                    "certified_upper_bound": certified,
                    "charts": charts.iter().map(|e| e.as_ref().map(encode::lct)).collect::<Vec<_>>(),
                });
                envelope("lct", "COMPUTED", &s.env((1..=m).collect()), result)
            } else {
                let gens = ideal_from(ideal, matrix)?;
                let est = lct_estimate(&gens, m, &s.counts())?;
                envelope("lct", "COMPUTED", &s.env((1..=m).collect()), encode::lct(&est))
            }
        }
        Command::Count { ideal, matrix, m, at_least } => {
            let level = level_at_least(c, if *at_least { m.saturating_sub(1) } else { *m }, "the contact order must be decided")?;
            let gens = ideal_from(ideal, matrix)?;
            let query = if *at_least {
                ContactQuery::at_least(*m, level)
            } else {
                ContactQuery::exact(*m, level)
            };
            query.validate().map_err(|e| usage("--m", e.to_string()))?;
            let rep = count_contact(&gens, &query, &s.counts())?;
            let result = json!({
                "m": m,
                "mode": if *at_least { "at_least" } else { "exact" },
                "level": level,
                "count": encode::count_report(&rep),
            });
            envelope("count", "COMPUTED", &s.env(vec![level]), result)
        }
        Command::Profile { matrix, jet } => {
            let a = read_doc::<MatrixDoc>(matrix)?.build()?;
            let jet = read_doc::<JetDoc>(jet)?.build()?;
            let profile = lambda_profile(&a, &jet)?;
            let result = json!({
                "profile": encode::profile(&profile),
                "determined": !profile.is_truncated(),
                "pullback": encode::series_matrix(&pullback(&a, &jet)?),
            });
            let env = Environment {
                primes: vec![jet.field().characteristic()],
                ..s.env(vec![jet.level()])
            };
            envelope("profile", "COMPUTED", &env, result)
        }
        Command::Snf { matrix } => {
            let doc = read_doc::<SeriesMatrixDoc>(matrix)?;
            let m = doc.build()?;
            let res = smith_normal_form(&m)?;
            let env = Environment {
                primes: vec![doc.q],
                ..s.env(vec![m.get(0, 0).level()])
            };
            envelope("snf", "COMPUTED", &env, encode::snf(&res))
        }
        Command::Strata { matrix, m } => {
            let level = level_at_least(c, *m, "m <= N")?;
            let pair = pair_from(matrix)?;
            let engine = s.counts().engine;
            let reports = s
                .primes
                .iter()
                .map(|&q| stratum_counts(&pair, *m, level, q, &engine))
                .collect::<Result<Vec<_>, _>>()?;
            let ok = reports.iter().all(|r| r.partition_ok && r.snf_disagreements == 0);
            let result = json!({ "per_prime": reports.iter().map(encode::strata).collect::<Vec<_>>() });
            envelope("strata", if ok { "PASS" } else { "FAIL" }, &s.env(vec![level]), result)
        }
        Command::Fiber { lambda, m } => {
            let profile = LambdaProfile::new(lambda.clone()).map_err(|e| usage("--lambda", e.to_string()))?;
            let top = profile.last().unwrap_or(0).max(*m);
            let level = level_at_least(c, top, "N >= m and N >= lambda_r")?;
            let check = fiber_count_check(&profile, *m, level, &s.primes)?;
            envelope("fiber", verdict_status(check.verdict), &s.env(vec![level]), encode::fiber(&check))
        }
        Command::Cone { matrix, m, p } => {
            if p > m {
                return Err(usage("--p", format!("expected 0 <= p <= m = {m}")));
            }
            let level = level_at_least(c, *m, "m <= N")?;
            let a = read_doc::<MatrixDoc>(matrix)?.build()?;
            let check = cone_comparison_check(&a, *m, *p, level, &s.counts())?;
            envelope("cone", verdict_status(check.verdict), &s.env(vec![level]), encode::cone(&check))
        }
        Command::Patterson { config } => {
            let cfg = read_doc::<ConfigDoc>(config)?.build()?;
            let a = patterson_matrix(&cfg);
            let exp = cauchy_binet_expansion(&cfg)?;
            let square_free = is_square_free(&exp.determinant);
            let result = json!({
                "patterson": encode::poly_matrix(&a),
                "square_free": square_free,
                "expansion": encode::expansion(&exp),
            });
            envelope("patterson", if square_free { "COMPUTED" } else { "FAIL" }, &s.env(vec![]), result)
        }
        Command::Matroid { config } => {
            let cfg = read_doc::<ConfigDoc>(config)?.build()?;
            let m = Matroid::from_columns(&cfg)?;
            let mut result = encode::matroid(&m);
            result["exchange_axiom"] = json!(m.satisfies_exchange());
            debug_assert_eq!(result["connected"], json!(is_connected(&m)));
            envelope("matroid", "COMPUTED", &s.env(vec![]), result)
        }
        Command::OneGeneric { config, matrix } => match (config, matrix) {
            (Some(p), _) => {
                let cfg = read_doc::<ConfigDoc>(p)?.build()?;
                let h = hadamard_one_generic(&cfg)?;
                let l = linear_one_generic(&patterson_matrix(&cfg), &s.primes)?;
                let agree = h.one_generic == l.one_generic;
                let status = if agree || !(h.confirmed && l.confirmed) { "COMPUTED" } else { "FAIL" };
                let result = json!({
                    "hadamard": encode::one_generic(&h),
                    "linear": encode::one_generic(&l),
                    "agree": agree,
                });
                envelope("one-generic", status, &s.env(vec![]), result)
            }
            (None, Some(p)) => {
                let a = read_doc::<MatrixDoc>(p)?.build()?;
                let l = linear_one_generic(&a, &s.primes)?;
                envelope("one-generic", "COMPUTED", &s.env(vec![]), json!({ "linear": encode::one_generic(&l) }))
            }
            (None, None) => return Err(usage("--config", "give --config or --matrix")),
        },
        Command::Verify { campaign, timings } => {
            let camp = match campaign.strip_prefix("corpus:") {
                Some(name) => corpus_campaign(name)
                    .ok_or_else(|| usage("--campaign", format!("no corpus campaign named `{name}`")))?,
                None => {
                    let text = std::fs::read_to_string(campaign)
                        .map_err(|e| LabError::Io(format!("{campaign}: {e}")))?;
                    Campaign::from_json(&text)?
                }
            };
            let opts = RunOptions {
                primes: s.primes.clone(),
                budget: s.budget,
                seed: s.seed,
                timings: *timings,
            };
            run_campaign(&camp, &opts)?.to_json()
        }
    })
}

fn exit_code(doc: &Value) -> i32 {
    match doc["status"].as_str() {
        Some("FAIL") | Some("FAILED") => 1,
        _ => 0,
    }
}

/// Parses arguments, runs the command and writes the report.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let outcome = execute(&cli).and_then(|doc| Ok((render(&doc, cli.common.format)?, exit_code(&doc))));
    match outcome {
        Ok((text, code)) => {
            let written = match &cli.common.out {
                Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => code,
                Err(e) => {
                    let _ = writeln!(stderr, "error: i/o error: {e}");
                    2
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}
