//! Monte Carlo experiments over randomized data: per-sample iterate norms,
//! moment ratios against the calibrated bound, interval scaling, tails,
//! and deterministic report files.

mod config;
mod run;
mod stats;

pub use config::{
    CalibrationSection, ExperimentConfig, GridSection, MomentSection, RunSection, ScalingSection, TailSection,
    TimeSection,
};
pub use run::{
    calibrate, emit_report, interval_scaling_study, moment_bound, run_experiment, run_experiment_with,
    scaling_verdicts, tail_growth, tail_study, with_pool, with_threads, Calibration, ExperimentReport, MomentRatio, NamedVerdict,
    OrderSummary, Prepared, SampleRow, ScalingFit, TailPoint, TailReport, MAX_TAIL_ORDER, MIN_TAIL_SAMPLES,
    THREADS_ENV,
};
pub use stats::{bootstrap_moment, empirical_moment, linear_fit, median, quantile, MomentEstimate};
