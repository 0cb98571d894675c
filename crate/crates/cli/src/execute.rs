use std::fs::File;
use std::io::{self, BufWriter, Write};

use ana_core::backend::run_backend;
use ana_core::harness::{bench, compare, emit_results, equivalence_check, write_trajectory, Emit};
use ana_core::{lookup, BackendKind, ScalarBackend, VectorBackend};

use crate::invocation::{CliInvocation, Settings, Subcommand};
use crate::{CliError, EXIT_DIVERGENCE, EXIT_OK};

fn open_output(settings: &Settings) -> Result<Box<dyn Write>, CliError> {
    match &settings.out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::io(format!("cannot create {}: {e}", path.display())))?;
            Ok(Box::new(BufWriter::new(file)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn emit<R: Emit + ?Sized>(results: &R, settings: &Settings) -> Result<(), CliError> {
    let mut out = open_output(settings)?;
    emit_results(results, settings.format, &mut out)?;
    Ok(())
}

/// Runs the invocation and returns the process exit code.
pub fn execute(invocation: &CliInvocation) -> Result<u8, CliError> {
    let settings = &invocation.settings;
    // Resolve names before any work so a typo fails fast with its own code.
    for name in &settings.functions {
        lookup::<f64>(name)?;
    }

    match invocation.subcommand {
        Subcommand::Run => {
            let result = run_backend(settings.backend, &settings.run_config(settings.function()))?;
            emit(&result, settings)?;
        }
        Subcommand::Compare => {
            let config = settings.run_config(settings.function());
            let report = compare(&config, settings.warmups, settings.reps)?;
            if !report.equivalent {
                let at = report
                    .divergence
                    .as_ref()
                    .map_or_else(String::new, |d| format!(" ({d})"));
                eprintln!(
                    "WARNING: scalar and vector backends diverged{at}; timings are not comparable"
                );
            }
            eprintln!(
                "{}: scalar {:.6}s, vector {:.6}s, speedup {:.3}x",
                report.function_id, report.scalar_seconds, report.vector_seconds, report.speedup
            );
            emit(&report, settings)?;
        }
        Subcommand::Bench => {
            let base = settings.run_config(settings.function());
            let rows = bench(&settings.functions, &base, settings.runs)?;
            emit(&rows, settings)?;
        }
        Subcommand::Equiv => {
            let report = equivalence_check(&settings.run_config(settings.function()))?;
            emit(&report, settings)?;
            if let Some(d) = &report.divergence {
                eprintln!("backends diverged: {d}");
                return Ok(EXIT_DIVERGENCE);
            }
        }
        Subcommand::Trajectory => {
            let config = settings.run_config(settings.function());
            let mut out = open_output(settings)?;
            match settings.backend {
                BackendKind::Scalar => write_trajectory(&ScalarBackend, &config, &mut out)?,
                BackendKind::Vector => write_trajectory(&VectorBackend::new(), &config, &mut out)?,
            };
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{parse, EXIT_IO, EXIT_UNKNOWN_FUNCTION};

    fn run(args: &[&str]) -> Result<u8, CliError> {
        let inv = parse(std::iter::once("ana").chain(args.iter().copied())).unwrap();
        execute(&inv)
    }

    #[test]
    fn unknown_function_exit_code() {
        let err = run(&["run", "--function", "nosuch"]).unwrap_err();
        assert_eq!(err.code, EXIT_UNKNOWN_FUNCTION);
        assert!(err.message.contains("sphere"));
        let err = run(&["bench", "--function", "sphere,heavy_nosuch_3"]).unwrap_err();
        assert_eq!(err.code, EXIT_UNKNOWN_FUNCTION);
    }

    #[test]
    fn unwritable_output_exit_code() {
        let err = run(&["run", "--iters", "2", "--out", "/nonexistent/dir/out.csv"]).unwrap_err();
        assert_eq!(err.code, EXIT_IO);
    }

    #[test]
    fn equiv_writes_report_and_passes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("e.csv");
        let code = run(&["equiv", "--iters", "20", "--out", path.to_str().unwrap()]).unwrap();
        assert_eq!(code, EXIT_OK);
        let text = std::fs::read_to_string(path).unwrap();
        assert!(text
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("sphere,1,element,scalar,vector,20,true"));
    }
}
