//! One line per acceptance criterion. Every comparison is exact.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeMap;
use std::process::Command;

use bvcalc_cli::report::Case;
use bvcalc_cli::suites;

const SEED: u64 = 1;

/// Runs one suite at `size` and checks that every listed property ran at
/// least its minimum number of cases, all passing.
fn suite(suite: &str, size: usize, minimums: &[(&str, usize)]) -> (bool, String) {
    let cases = suites::run(&[suite], SEED, Some(size)).expect("known suite");
    let mut per: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for c in &cases {
        let prop = c.id.split('/').nth(1).unwrap_or("");
        let e = per.entry(prop).or_default();
        e.0 += 1;
        e.1 += c.pass as usize;
    }
    let failing: Vec<&Case> = cases.iter().filter(|c| !c.pass).collect();
    let mut short = Vec::new();
    for &(prop, min) in minimums {
        let ran = per.get(prop).map_or(0, |e| e.0);
        if ran < min {
            short.push(format!("{prop} ran {ran} < {min}"));
        }
    }
    let ok = failing.is_empty() && short.is_empty();
    let mut detail = format!("{} cases over {} properties, {} failed", cases.len(), per.len(), failing.len());
    if let Some(c) = failing.first() {
        detail.push_str(&format!("; first failure {}: expected {} got {}", c.id, c.expected, c.actual));
    }
    if !short.is_empty() {
        detail.push_str(&format!("; {}", short.join(", ")));
    }
    (ok, detail)
}

/// Fails unless every weight in `weights` occurs as the `s` input of `prop`.
fn weights(mut result: (bool, String), suite_name: &str, size: usize, prop: &str, weights: &[&str]) -> (bool, String) {
    let cases = suites::run(&[suite_name], SEED, Some(size)).expect("known suite");
    let prefix = format!("{suite_name}/{prop}/");
    let seen: Vec<&str> = weights
        .iter()
        .copied()
        .filter(|w| {
            let tag = format!("s = {w}");
            cases.iter().any(|c| c.id.starts_with(&prefix) && c.inputs.contains(&tag))
        })
        .collect();
    if seen.len() != weights.len() {
        result.0 = false;
    }
    result.1.push_str(&format!("; weights covered {}", seen.join(" ")));
    result
}

fn all(props: &[&'static str], min: usize) -> Vec<(&'static str, usize)> {
    props.iter().map(|p| (*p, min)).collect()
}

fn grid() -> (bool, String) {
    let report = common::grid::run(3, 4);
    let ok = report.failures.is_empty();
    let mut detail = format!("{} grid comparisons, {} disagreements", report.checked, report.failures.len());
    if let Some(f) = report.failures.first() {
        detail.push_str(&format!("; first {f}"));
    }
    (ok, detail)
}

fn determinism() -> (bool, String) {
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_bvcalc"))
            .args(["check", "all", "--seed", "7", "--json"])
            .env_remove("BVCALC_SEED")
            .output()
            .expect("bvcalc runs");
        (out.status.code(), out.stdout)
    };
    let (code_a, a) = run();
    let (code_b, b) = run();
    let ok = a == b && !a.is_empty() && code_a == Some(0) && code_b == Some(0);
    (ok, format!("{} bytes, identical: {}, exit codes {code_a:?} {code_b:?}", a.len(), a == b))
}

#[test]
fn acceptance_criteria() {
    let results = [
        suite("laplacian", 200, &all(&["square_zero", "product", "exponential", "derives_bracket"], 200)),
        suite(
            "bracket",
            200,
            &all(&["antisymmetry", "leibniz", "jacobi", "hamiltonian_morphism", "contraction"], 200),
        ),
        suite(
            "densities",
            100,
            &all(
                &[
                    "div_naturality",
                    "div_density_change",
                    "div_module",
                    "div_integral",
                    "delta_forms",
                    "delta_square",
                    "delta_product",
                    "delta_exponential",
                ],
                100,
            ),
        ),
        weights(
            suite("transpose", 50, &all(&["symmetry", "bracket_integral"], 50)),
            "transpose",
            50,
            "symmetry",
            &["0", "1/4", "1/2", "1"],
        ),
        suite("canonical", 100, &all(&["compatible_agrees", "square_zero", "half_weight_expansion"], 100)),
        weights(
            suite("maps", 50, &all(&["equivariance", "compatible_preserved", "berezinian_product", "chain_rule"], 50)),
            "maps",
            50,
            "equivariance",
            &["0", "1/2", "1"],
        ),
        suite(
            "cotangent",
            100,
            &[("phi_intertwines", 100), ("dee_square", 100), ("mu_v", 10), ("divergence", 10)],
        ),
        suite(
            "gaugefix",
            50,
            &[("bv_lemma", 50), ("closed_invariance", 50), ("worked_family", 5), ("pure_witness", 5), ("conormal", 10)],
        ),
        grid(),
        determinism(),
    ];
    let names = [
        "standard Laplacian",
        "antibracket",
        "densities and divergence",
        "transpose symmetry",
        "canonical operator",
        "equivariance",
        "cotangent model",
        "gauge fixing",
        "oracle grid",
        "determinism",
    ];
    for (i, ((ok, detail), name)) in results.iter().zip(names).enumerate() {
        println!("criterion {}: {} ({name}) {detail}", i + 1, if *ok { "PASS" } else { "FAIL" });
    }
    assert!(results.iter().all(|r| r.0), "some acceptance criteria failed");
}
