use super::campaign::Campaign;

/// Bumped whenever a corpus campaign changes.
pub const CORPUS_VERSION: u32 = 1;

const GENERIC_2X2: &str = r#"{"matrix": {"vars": ["x1","x2","x3","x4"], "rows": [["x1","x2"],["x3","x4"]]}}"#;

fn campaign(name: &str, inputs: &[(&str, &str)], tasks: &[&str]) -> Campaign {
    let inputs: Vec<String> = inputs.iter().map(|(k, v)| format!("\"{k}\": {v}")).collect();
    let text = format!(
        r#"{{"name": "{name}", "inputs": {{{}}}, "tasks": [{}]}}"#,
        inputs.join(", "),
        tasks.join(", ")
    );
    Campaign::from_json(&text).unwrap_or_else(|e| panic!("corpus campaign {name} does not parse: {e}"))
}

/// The named campaigns shipped with the crate.
pub fn builtin_corpus() -> Vec<Campaign> {
    vec![
        campaign(
            "stratification-generic-2x2",
            &[("A", GENERIC_2X2)],
            &[r#"{"kind": "stratification", "input": "A", "m": [1, 2, 3], "primes": [2, 3]}"#],
        ),
        campaign(
            "fiber-formula-grid",
            &[],
            &[r#"{"kind": "fiber_formula", "r": [2, 3], "max_part": 3, "max_m": 3, "level": 3, "primes": [2, 3]}"#],
        ),
        campaign(
            "lct-known-values",
            &[
                ("x1", r#"{"ideal": {"vars": ["x1"], "gens": ["x1"]}}"#),
                ("x1^2", r#"{"ideal": {"vars": ["x1"], "gens": ["x1^2"]}}"#),
                ("x1^3", r#"{"ideal": {"vars": ["x1"], "gens": ["x1^3"]}}"#),
                ("x1x2", r#"{"ideal": {"vars": ["x1","x2"], "gens": ["x1*x2"]}}"#),
                ("A", GENERIC_2X2),
            ],
            &[
                r#"{"kind": "lct_z", "input": "x1", "max_m": 2, "expect": 1, "tolerance": 0}"#,
                r#"{"kind": "lct_z", "input": "x1^2", "max_m": 4, "expect": "1/2", "tolerance": 0}"#,
                r#"{"kind": "lct_z", "input": "x1^3", "max_m": 6, "expect": "1/3", "tolerance": 0}"#,
                r#"{"kind": "lct_z", "input": "x1x2", "max_m": 2, "expect": 1, "tolerance": 0}"#,
                r#"{"kind": "lct_z", "input": "A", "max_m": 4, "expect": 1}"#,
            ],
        ),
        campaign(
            "corollary-generic-2x2",
            &[("A", GENERIC_2X2)],
            &[r#"{"kind": "corollary", "input": "A", "max_m": 4, "expect_z": 1, "expect_w": 2}"#],
        ),
        campaign(
            "corollary-diag",
            &[("D", r#"{"matrix": {"vars": ["x1"], "rows": [["x1","0"],["0","x1"]]}}"#)],
            &[r#"{"kind": "corollary", "input": "D", "max_m": 4, "expect_z": "1/2", "expect_w": 1}"#],
        ),
        campaign(
            "snf-roundtrip",
            &[],
            &[r#"{"kind": "snf_roundtrip", "count": 200, "shapes": [[2, 2], [3, 2]], "level": 6, "prime": 5}"#],
        ),
        campaign(
            "cauchy-binet-random",
            &[],
            &[r#"{"kind": "cauchy_binet", "count": 100, "max_r": 3, "max_n": 6, "entry_bound": 3}"#],
        ),
        campaign(
            "one-generic-cross",
            &[],
            &[r#"{"kind": "one_generic", "grid": {"r": 2, "max_n": 4, "entries": [-1, 0, 1]}}"#],
        ),
        campaign(
            "configuration-triangle",
            &[(
                "T",
                r#"{"configuration": {"graph": {"vertices": 3, "edges": [[0, 1], [1, 2], [0, 2]]}}}"#,
            )],
            &[
                r#"{"kind": "configuration", "input": "T", "max_m": 3, "primes": [5, 7], "expect_z": 1, "expect_w": 2}"#,
                r#"{"kind": "one_generic", "input": "T"}"#,
            ],
        ),
        campaign(
            "cone-comparison",
            &[("X", r#"{"matrix": {"vars": ["x1"], "rows": [["x1"]]}}"#), ("A", GENERIC_2X2)],
            &[
                r#"{"kind": "cone", "input": "X", "max_m": 3, "primes": [2, 3]}"#,
                r#"{"kind": "cone", "input": "A", "max_m": 3, "primes": [2, 3]}"#,
            ],
        ),
    ]
}

pub fn corpus_campaign(name: &str) -> Option<Campaign> {
    builtin_corpus().into_iter().find(|c| c.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_valid_and_named() {
        let corpus = builtin_corpus();
        for c in &corpus {
            c.validate().unwrap();
        }
        for name in ["stratification-generic-2x2", "fiber-formula-grid", "configuration-triangle"] {
            assert!(corpus_campaign(name).is_some());
        }
        let mut names: Vec<_> = corpus.iter().map(|c| c.name.clone()).collect();
        names.dedup();
        assert_eq!(names.len(), corpus.len());
    }
}
