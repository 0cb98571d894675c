//! Deterministic serialization. Reals are written with 17 significant
//! digits in scientific notation, columns are in fixed order, and every
//! file ends with a newline. Timing values appear only in the columns
//! named `*_seconds` / `elapsed_ns`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::backend::{run_observed, Backend, RunResult};
use crate::config::RunConfig;
use crate::error::Result;
use crate::real::Real;

use super::equivalence::{Divergence, EquivalenceReport};
use super::stats::TrialStats;
use super::timing::ComparisonReport;

pub const BENCH_HEADER: &str = "function,backend,runs,mean_best,std_best,mean_seconds";
pub const TRACE_HEADER: &str = "iteration,best_fitness,best_agent_index";
pub const COMPARE_HEADER: &str =
    "function,seed,warmups,reps,scalar_seconds,vector_seconds,speedup,equivalent";
pub const EQUIVALENCE_HEADER: &str =
    "function,seed,scope,left,right,iterations_checked,passed,divergent_iteration,field,dim,agent";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected csv|json)")),
        }
    }
}

/// 17 significant digits, e.g. `1.2345678901234567e2`.
pub fn format_real<T: Real>(value: T) -> String {
    format!("{value:.16e}")
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn json_opt(value: Option<usize>) -> String {
    value.map_or_else(|| "null".to_string(), |v| v.to_string())
}

fn csv_opt(value: Option<usize>) -> String {
    value.map_or_else(String::new, |v| v.to_string())
}

fn divergence_json(div: Option<&Divergence>) -> String {
    match div {
        None => "null".to_string(),
        Some(d) => format!(
            "{{\"iteration\": {}, \"field\": {}, \"dim\": {}, \"agent\": {}}}",
            d.iteration,
            json_string(d.field.as_str()),
            json_opt(d.dim),
            json_opt(d.agent)
        ),
    }
}

/// Something the harness can write as CSV or JSON.
pub trait Emit {
    fn write_csv(&self, w: &mut dyn Write) -> std::io::Result<()>;
    fn write_json(&self, w: &mut dyn Write) -> std::io::Result<()>;
}

pub fn emit_results<R: Emit + ?Sized>(
    results: &R,
    format: OutputFormat,
    dest: &mut dyn Write,
) -> Result<()> {
    match format {
        OutputFormat::Csv => results.write_csv(dest)?,
        OutputFormat::Json => results.write_json(dest)?,
    }
    dest.flush()?;
    Ok(())
}

impl<T: Real> Emit for [TrialStats<T>] {
    fn write_csv(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(w, "{BENCH_HEADER}")?;
        for s in self {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                s.function_id,
                s.backend,
                s.runs,
                format_real(s.mean_best),
                format_real(s.std_best),
                format_real(s.mean_seconds)
            )?;
        }
        Ok(())
    }

    fn write_json(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(w, "[")?;
        for (i, s) in self.iter().enumerate() {
            let sep = if i + 1 == self.len() { "" } else { "," };
            writeln!(
                w,
                "  {{\"function\": {}, \"backend\": {}, \"runs\": {}, \"base_seed\": {}, \"mean_best\": {}, \"std_best\": {}, \"mean_seconds\": {}}}{sep}",
                json_string(&s.function_id),
                json_string(s.backend.as_str()),
                s.runs,
                s.base_seed,
                format_real(s.mean_best),
                format_real(s.std_best),
                format_real(s.mean_seconds)
            )?;
        }
        writeln!(w, "]")
    }
}

impl<T: Real> Emit for Vec<TrialStats<T>> {
    fn write_csv(&self, w: &mut dyn Write) -> std::io::Result<()> {
        self.as_slice().write_csv(w)
    }
    fn write_json(&self, w: &mut dyn Write) -> std::io::Result<()> {
        self.as_slice().write_json(w)
    }
}

impl<T: Real> Emit for RunResult<T> {
    fn write_csv(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(w, "{TRACE_HEADER}")?;
        for e in &self.trace {
            writeln!(
                w,
                "{},{},{}",
                e.iteration,
                format_real(e.best_fitness),
                e.best_index
            )?;
        }
        Ok(())
    }

    fn write_json(&self, w: &mut dyn Write) -> std::io::Result<()> {
        let c = &self.config;
        writeln!(w, "{{")?;
        writeln!(w, "  \"function\": {},", json_string(&c.function_id))?;
        writeln!(w, "  \"backend\": {},", json_string(self.backend.as_str()))?;
        writeln!(w, "  \"seed\": {},", c.seed)?;
        writeln!(w, "  \"dimension\": {},", c.dimension)?;
        writeln!(w, "  \"agents\": {},", c.agents)?;
        writeln!(w, "  \"iterations\": {},", c.iterations)?;
        writeln!(w, "  \"lower\": {},", format_real(c.bounds.lower()))?;
        writeln!(w, "  \"upper\": {},", format_real(c.bounds.upper()))?;
        writeln!(
            w,
            "  \"scope\": {},",
            json_string(c.condition_scope.as_str())
        )?;
        writeln!(w, "  \"final_best\": {},", format_real(self.final_best))?;
        writeln!(w, "  \"final_best_index\": {},", self.final_best_index)?;
        writeln!(w, "  \"elapsed_ns\": {},", self.elapsed_ns)?;
        writeln!(w, "  \"trace\": [")?;
        for (i, e) in self.trace.iter().enumerate() {
            let sep = if i + 1 == self.trace.len() { "" } else { "," };
            writeln!(
                w,
                "    {{\"iteration\": {}, \"best_fitness\": {}, \"best_agent_index\": {}}}{sep}",
                e.iteration,
                format_real(e.best_fitness),
                e.best_index
            )?;
        }
        writeln!(w, "  ]")?;
        writeln!(w, "}}")
    }
}

impl Emit for ComparisonReport {
    fn write_csv(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(w, "{COMPARE_HEADER}")?;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            self.function_id,
            self.seed,
            self.warmups,
            self.reps,
            format_real(self.scalar_seconds),
            format_real(self.vector_seconds),
            format_real(self.speedup),
            self.equivalent
        )
    }

    fn write_json(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(w, "{{")?;
        writeln!(w, "  \"function_id\": {},", json_string(&self.function_id))?;
        writeln!(w, "  \"seed\": {},", self.seed)?;
        writeln!(w, "  \"warmups\": {},", self.warmups)?;
        writeln!(w, "  \"reps\": {},", self.reps)?;
        writeln!(
            w,
            "  \"scalar_seconds\": {},",
            format_real(self.scalar_seconds)
        )?;
        writeln!(
            w,
            "  \"vector_seconds\": {},",
            format_real(self.vector_seconds)
        )?;
        writeln!(w, "  \"speedup\": {},", format_real(self.speedup))?;
        writeln!(w, "  \"equivalent\": {},", self.equivalent)?;
        writeln!(
            w,
            "  \"divergence\": {}",
            divergence_json(self.divergence.as_ref())
        )?;
        writeln!(w, "}}")
    }
}

impl Emit for EquivalenceReport {
    fn write_csv(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(w, "{EQUIVALENCE_HEADER}")?;
        let d = self.divergence.as_ref();
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.function_id,
            self.seed,
            self.scope,
            self.left,
            self.right,
            self.iterations_checked,
            self.passed(),
            csv_opt(d.map(|d| d.iteration)),
            d.map_or("", |d| d.field.as_str()),
            csv_opt(d.and_then(|d| d.dim)),
            csv_opt(d.and_then(|d| d.agent))
        )
    }

    fn write_json(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(w, "{{")?;
        writeln!(w, "  \"function\": {},", json_string(&self.function_id))?;
        writeln!(w, "  \"seed\": {},", self.seed)?;
        writeln!(w, "  \"scope\": {},", json_string(self.scope.as_str()))?;
        writeln!(w, "  \"left\": {},", json_string(self.left.as_str()))?;
        writeln!(w, "  \"right\": {},", json_string(self.right.as_str()))?;
        writeln!(w, "  \"iterations_checked\": {},", self.iterations_checked)?;
        writeln!(w, "  \"passed\": {},", self.passed())?;
        writeln!(
            w,
            "  \"divergence\": {}",
            divergence_json(self.divergence.as_ref())
        )?;
        writeln!(w, "}}")
    }
}

/// Runs `config` and writes every agent's position after every iteration as
/// `iteration,agent,d0,...,d{D-1}`.
pub fn write_trajectory<T: Real, B: Backend<T> + ?Sized>(
    backend: &B,
    config: &RunConfig<T>,
    w: &mut dyn Write,
) -> Result<RunResult<T>> {
    let dims: Vec<String> = (0..config.dimension).map(|k| format!("d{k}")).collect();
    writeln!(w, "iteration,agent,{}", dims.join(","))?;
    let mut io_error = None;
    let result = run_observed(backend, config, |state| {
        if io_error.is_some() {
            return;
        }
        for a in 0..state.population.agents() {
            let row: Vec<String> = state
                .population
                .column(a)
                .iter()
                .map(|&v| format_real(v))
                .collect();
            if let Err(e) = writeln!(w, "{},{},{}", state.iteration, a, row.join(",")) {
                io_error = Some(e);
                return;
            }
        }
    })?;
    if let Some(e) = io_error {
        return Err(e.into());
    }
    w.flush()?;
    Ok(result)
}
