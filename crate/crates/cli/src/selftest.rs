//! Built-in instances proved with one corrupt node and checked against the
//! oracles.

use rsproof::engine::{points_tolerating, run_job, ByzMode, NodeConfig};

use crate::problem::{Params, Problem};
use crate::CliError;

/// `(problem, params, instance text)` for every problem.
pub fn builtin_instances() -> Vec<(Problem, Params, &'static str)> {
    let p = Params::default();
    vec![
        (Problem::Cliques, p, "p edge 7 21\ne 1 2\ne 1 3\ne 1 4\ne 1 5\ne 1 6\ne 1 7\ne 2 3\ne 2 4\ne 2 5\ne 2 6\ne 2 7\ne 3 4\ne 3 5\ne 3 6\ne 3 7\ne 4 5\ne 4 6\ne 4 7\ne 5 6\ne 5 7\ne 6 7\n"),
        (Problem::Triangles, p, "p edge 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n"),
        (Problem::Chromatic, p, "p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n"),
        (Problem::Tutte, p, "p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n"),
        (Problem::Setpartition, p, "p family 4\n1 2\n3 4\n1 3\n2 4\n1\n"),
        (Problem::Ov, p, "1 0 1\n0 1 0\n1 1 0\n\n0 1 0\n1 0 1\n0 0 0\n"),
        (Problem::Cnfsat, p, "p cnf 4 3\n1 2 0\n-1 3 0\n-2 -4 0\n"),
        (Problem::Hamming, p, "0 0 1\n1 1 0\n\n0 0 0\n1 1 1\n"),
        (Problem::Conv3sum, p, "1 2 3 4 5 6\n"),
        (Problem::Permanent, p, "1 2 0\n0 1 3\n2 0 1\n"),
        (Problem::Setcover, Params { t: Some(2), ..p }, "p family 4\n1 2\n3 4\n1 2 3\n4\n"),
        (Problem::Csp2, p, "6 2 2\n1 2 0,0 1,1\n3 6 0,1 w=2\n"),
    ]
}

pub fn run(seed: u64) -> Result<(), CliError> {
    let cfg = NodeConfig::with_byzantine(8, [3], ByzMode::RandomCorrupt)?;
    let mut failures = 0;
    for (problem, params, text) in builtin_instances() {
        let outcome = (|| -> Result<(String, String), CliError> {
            let inst = problem.parse(text)?;
            let mut job = problem.job(&inst, &params)?;
            for t in &mut job.tasks {
                t.points = Some(points_tolerating(t.degree, cfg.nodes, 1)?);
            }
            let report = run_job(&job, &cfg, 2, seed)?;
            if report.culprits().iter().any(|c| !cfg.byzantine.contains(c)) {
                return Err(CliError::Other("honest node accused".into()));
            }
            let got = report
                .answer
                .map(|a| a.text)
                .ok_or_else(|| CliError::Other(report.error.unwrap_or_default()))?;
            Ok((got, problem.oracle(&inst, &params)?.text))
        })();
        match outcome {
            Ok((got, want)) if got == want => println!("PASS {:<13} {}", problem.tag(), got.replace('\n', " | ")),
            Ok((got, want)) => {
                failures += 1;
                println!("FAIL {:<13} got {got:?}, oracle {want:?}", problem.tag());
            }
            Err(e) => {
                failures += 1;
                println!("FAIL {:<13} {e}", problem.tag());
            }
        }
    }
    if failures > 0 {
        return Err(CliError::Other(format!("{failures} selftest case(s) failed")));
    }
    Ok(())
}
