//! Multi-run orchestration on top of the backends: repeated trials with
//! mean/std aggregation, bit-level backend equivalence, timing comparison,
//! and deterministic CSV/JSON output.

mod emit;
mod equivalence;
mod stats;
mod timing;

pub use emit::{
    emit_results, format_real, write_trajectory, Emit, OutputFormat, BENCH_HEADER, COMPARE_HEADER,
    EQUIVALENCE_HEADER, TRACE_HEADER,
};
pub use equivalence::{
    check_backends, equivalence_check, Divergence, EquivalenceReport, StateField,
};
pub use stats::{bench, mean_std, run_trials, run_trials_detailed, trial_seed, TrialStats};
pub use timing::{compare, median, time_backends, ComparisonReport};
