//! JSON encodings of computed results.
//!
//! Exact rationals are written as `{"exact": "p/q", "decimal": f}`; counts
//! that do not fit in 64 bits are written as decimal strings.

use detlab_core::algebra::snf::{LambdaProfile, SeriesMatrix, SnfResult};
use detlab_core::algebra::{FieldElem, TruncSeries};
use detlab_core::configurations::linalg::Rat;
use detlab_core::configurations::{
    ConfigurationReport, Matroid, OneGenericity, SupportExpansion, Witness,
};
use detlab_core::determinantal::{
    BoundCheck, ConeCheck, CorollaryReport, FiberCheck, PolyMatrix, RationalityScreen, StratumReport,
};
use detlab_core::jets::{Codim, CountReport, LctEstimate, ProjectiveReport};
use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

pub fn rat64(r: &Rational64) -> Value {
    json!({
        "exact": format!("{}/{}", r.numer(), r.denom()),
        "decimal": *r.numer() as f64 / *r.denom() as f64,
    })
}

pub fn rat(r: &Rat) -> Value {
    json!({
        "exact": format!("{}/{}", r.numer(), r.denom()),
        "decimal": r.to_f64().unwrap_or(f64::NAN),
    })
}

pub fn count(c: u128) -> Value {
    match u64::try_from(c) {
        Ok(c) => json!(c),
        Err(_) => json!(c.to_string()),
    }
}

pub fn codim(c: Codim) -> Value {
    match c {
        Codim::Infinite => json!("inf"),
        Codim::Exact(c) => json!(c),
        Codim::Interval { lo, hi } => json!({ "lo": lo, "hi": hi }),
    }
}

pub fn profile(l: &LambdaProfile) -> Value {
    json!({ "lambda": l.to_string(), "parts": l.parts(), "rank": l.rank() })
}

pub fn count_report(r: &CountReport) -> Value {
    let per_prime: Vec<Value> = r
        .per_prime
        .iter()
        .map(|p| {
            json!({
                "q": p.q,
                "raw": count(p.raw),
                "total": count(p.total),
                "log_q": p.log_q,
                "dim": p.dim,
                "sample": p.sample.map(|s| json!({
                    "samples": s.samples,
                    "hits": s.hits,
                    "wilson_lo": s.wilson.0,
                    "wilson_hi": s.wilson.1,
                })),
            })
        })
        .collect();
    json!({
        "space_dim": r.space_dim,
        "status": r.status.label(),
        "codim": codim(r.codim),
        "per_prime": per_prime,
    })
}

pub fn lct(e: &LctEstimate) -> Value {
    let steps: Vec<Value> = e
        .steps
        .iter()
        .map(|s| {
            json!({
                "m": s.m,
                "ratio": s.ratio.as_ref().map(rat64),
                "count": count_report(&s.report),
            })
        })
        .collect();
    json!({
        "max_m": e.max_m,
        "estimate": rat64(&e.estimate),
        "witness_m": e.witness_m,
        "certified_upper_bound": e.certified_upper_bound,
        "generators": e.generators,
        "ambient_dim": e.ambient_dim,
        "steps": steps,
    })
}

pub fn projective(p: &ProjectiveReport) -> Value {
    json!({
        "r": p.r,
        "level": p.level,
        "count": count_report(&p.report),
        "exact_codim": p.exact_codim.map(codim),
        "cone_counts": p.cone_counts.iter().map(|(q, c)| json!({ "q": q, "count": count(*c) })).collect::<Vec<_>>(),
    })
}

pub fn strata(s: &StratumReport) -> Value {
    json!({
        "m": s.m,
        "level": s.level,
        "q": s.q,
        "cont_m": count(s.cont_m),
        "strata_total": count(s.strata_total()),
        "residual": count(s.residual),
        "partition_ok": s.partition_ok,
        "snf_checked": s.snf_checked,
        "snf_disagreements": s.snf_disagreements,
        "strata": s.strata.iter().map(|(l, c)| {
            let mut v = profile(l);
            v["count"] = count(*c);
            v
        }).collect::<Vec<_>>(),
    })
}

pub fn fiber(f: &FiberCheck) -> Value {
    json!({
        "lambda": profile(&f.lambda),
        "m": f.m,
        "level": f.level,
        "formula": f.formula.map_or(json!("empty"), |c| json!(c)),
        "counted": projective(&f.counted),
        "verdict": f.verdict.label(),
    })
}

pub fn cone(c: &ConeCheck) -> Value {
    json!({
        "m": c.m,
        "p": c.p,
        "level": c.level,
        "shift": c.shift,
        "counts": c.counts.iter().map(|k| json!({
            "q": k.q,
            "left": count(k.left),
            "right": count(k.right),
            "identity": k.identity,
        })).collect::<Vec<_>>(),
        "left": count_report(&c.left),
        "right": count_report(&c.right),
        "verdict": c.verdict.label(),
    })
}

fn bound(b: &BoundCheck) -> Value {
    json!({ "bound": b.bound.as_ref().map(rat64), "holds": b.holds })
}

pub fn screen(s: &RationalityScreen) -> Value {
    json!({
        "level": s.level,
        "summary": s.summary,
        "strata": s.strata.iter().map(|t| json!({
            "lambda": profile(&t.lambda),
            "counts": t.counts.iter().map(|(q, c)| json!({ "q": q, "count": count(*c) })).collect::<Vec<_>>(),
            "codim": codim(t.codim),
            "status": t.status.label(),
            "strict": t.strict,
        })).collect::<Vec<_>>(),
    })
}

pub fn corollary(c: &CorollaryReport) -> Value {
    json!({
        "r": c.r,
        "max_m": c.max_m,
        "epsilon": rat64(&c.epsilon),
        "lct_z": lct(&c.lct_z),
        "charts": c.charts.iter().map(|e| e.as_ref().map(lct)).collect::<Vec<_>>(),
        "lct_w": rat64(&c.lct_w),
        "lct_w_certified": c.lct_w_certified,
        "forward_at_estimate": rat64(&c.forward_at_estimate),
        "forward": bound(&c.forward),
        "backward": bound(&c.backward),
        "z_is_one": c.z_is_one,
        "w_is_r": c.w_is_r,
        "biconditional": c.biconditional,
        "chart_bound_ok": c.chart_bound_ok,
        "rationality_screen": screen(&c.screen),
        "verdict": c.verdict.label(),
    })
}

pub fn poly_matrix(a: &PolyMatrix) -> Value {
    json!({
        "vars": a.get(0, 0).vars().iter().collect::<Vec<_>>(),
        "rows": a.to_rows().iter().map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn elem(e: &FieldElem) -> Value {
    match e.as_fp() {
        Some(x) => json!(x.value()),
        None => json!(e.to_string()),
    }
}

fn series(s: &TruncSeries) -> Value {
    Value::Array(s.coeffs().iter().map(elem).collect())
}

pub fn series_matrix(m: &SeriesMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(series).collect()))
            .collect(),
    )
}

pub fn snf(s: &SnfResult) -> Value {
    json!({
        "lambda": profile(&s.lambda),
        "valid_to_level": s.valid_to_level,
        "p": series_matrix(&s.p_transform),
        "q": series_matrix(&s.q_transform),
    })
}

fn rat_vec(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

fn witness(w: &Witness) -> Value {
    json!({
        "v": rat_vec(&w.v),
        "w": rat_vec(&w.w),
        "split": w.split.as_ref().map(|(s, a, b)| json!({
            "subset": s,
            "outside": rat_vec(a),
            "inside": rat_vec(b),
        })),
    })
}

pub fn one_generic(g: &OneGenericity) -> Value {
    json!({
        "one_generic": g.one_generic,
        "confirmed": g.confirmed,
        "label": g.label(),
        "method": g.method,
        "witness": g.witness.as_ref().map(witness),
    })
}

pub fn expansion(e: &SupportExpansion) -> Value {
    json!({
        "determinant": e.determinant.to_string(),
        "unsquared_matches": e.unsquared_matches,
        "coefficients": e.coefficients.iter().map(|(i, c)| json!({ "subset": i, "coefficient": rat(c) })).collect::<Vec<_>>(),
    })
}

pub fn matroid(m: &Matroid) -> Value {
    json!({
        "ground_size": m.ground_size(),
        "rank": m.rank(),
        "bases": m.basis_sets(),
        "connected": detlab_core::configurations::is_connected(m),
        "separator": m.separator().map(detlab_core::configurations::elements),
    })
}

pub fn configuration(c: &ConfigurationReport) -> Value {
    json!({
        "patterson": poly_matrix(&c.patterson),
        "expansion": expansion(&c.expansion),
        "square_free": c.square_free,
        "connected": c.connected,
        "support_is_bases": c.support_is_bases,
        "corollary": corollary(&c.corollary),
    })
}
