mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;
use sha2::{Digest, Sha256};

use config::Kind;

const CONFIG_HELP: &str = "\
CONFIG KEYS (JSON document; unknown keys are rejected):
  kind           optional; must match <KIND> when present
  d              2 or 3 (required)
  field          one field: {\"constant\": [b..]}, {\"trig\": {\"mean\": [..], \"terms\": [{\"mode\": [..], \"cos\": [..], \"sin\": [..]}]}}
                 or {\"fourier\": [{\"mode\": [..], \"re\": [..], \"im\": [..]}]}
  fields         list of {\"id\": \"..\", \"field\": ..} (instead of field)
  Nv             Hermite functions per velocity dimension, number or list, each >= 4   [default 8]
  Kx             Fourier cutoff |m_j| <= Kx                                            [default 2]
  buffer         extra Hermite functions in the codomain, >= 2                         [default 2]
  form           theorem | ing11 | union | self_test                                   [default theorem]
  path           rotated | direct (constant d = 3 fields)                              [default rotated]
  tol            eigensolver relative residual                                         [default 1e-8]
  max_iter       iteration cap                                                         [default 10000]
  dense_limit    largest component solved densely                                      [default 2000]
  oracle         estimate only: also run a dense eigensolve, require 1e-6 agreement    [default false]
  b_values       rational field values for the suites                     [default [\"0\",\"1\",\"-3/2\",\"2/3\",\"5\"]]
  samples        random pairs for the bracket axioms                                   [default 100]
  lambda_shift   accretivity shift                                                     [default d/2 + 1]
  resolvent_rhs  random right-hand sides for the resolvent solve                       [default 20]
  output         output directory (overridden by --out)                                [default .]
  seed           seed for randomized checks (overridden by --seed)                     [default 0]

EXIT STATUS: 0 when every check passed and every solver converged, 1 otherwise, 2 on usage or config errors.";

/// Runs verification suites and spectral experiments for the magnetic
/// Fokker-Planck operator. Writes report.json (and sweep.csv for estimate and
/// sweep runs) into the output directory.
#[derive(Debug, Parser)]
#[command(name = "hypolab", version, after_help = CONFIG_HELP)]
struct Cli {
    kind: Kind,
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory [default: the config's "output" or "."].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for concurrent points [default: available cores].
    #[arg(long)]
    workers: Option<usize>,
    /// Seed for randomized checks [default: the config's "seed" or 0].
    #[arg(long)]
    seed: Option<u64>,
}

fn write(path: &std::path::Path, contents: &str) -> Result<(), String> {
    std::fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, raw) = match config::load(&cli.config) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let experiment = match raw.validate(cli.kind, cli.seed, &text) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    if cli.workers == Some(0) {
        eprintln!("--workers must be positive");
        return ExitCode::from(2);
    }
    let out_dir = cli.out.clone().or_else(|| experiment.raw.output.clone()).unwrap_or_else(|| PathBuf::from("."));
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        pool = pool.num_threads(w);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("cannot start workers: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match pool.install(|| run::run(&experiment)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("run failed: {e}");
            return ExitCode::from(1);
        }
    };
    let hash = hex::encode(Sha256::digest(
        serde_json::to_vec(&run::strip_timing(&outcome.results)).expect("serializable"),
    ));
    let report = json!({
        "kind": experiment.kind.name(),
        "seed": experiment.seed,
        "passed": outcome.passed,
        "content_hash": hash,
        "config": experiment.raw,
        "results": outcome.results,
    });
    let result = std::fs::create_dir_all(&out_dir)
        .map_err(|e| format!("cannot create {}: {e}", out_dir.display()))
        .and_then(|_| {
            let mut body = serde_json::to_string_pretty(&report).expect("serializable");
            body.push('\n');
            write(&out_dir.join("report.json"), &body)
        })
        .and_then(|_| match &outcome.csv {
            Some(csv) => write(&out_dir.join("sweep.csv"), csv),
            None => Ok(()),
        });
    if let Err(e) = result {
        eprintln!("{e}");
        return ExitCode::from(1);
    }
    println!(
        "{} d={}: {} (report: {})",
        experiment.kind.name(),
        experiment.raw.d,
        if outcome.passed { "PASS" } else { "FAIL" },
        out_dir.join("report.json").display()
    );
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
