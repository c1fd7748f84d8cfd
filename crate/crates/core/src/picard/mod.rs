//! Free evolution, the Duhamel operator and Picard iterates of
//! `box u = (du)^2`.

mod duhamel;
mod iterate;
mod series;

pub use duhamel::{duhamel, duhamel_direct, duhamel_many, DuhamelKernel};
pub use iterate::{
    energy_inequality_check, free_evolution, iterate_norms, nonlinearity, picard_iterate,
    picard_sequence, picard_step, space_time_norm, EnergyVerdict, IterateNorms, IterateRecord,
    IterateSeries, BLOWUP_THRESHOLD,
};
pub use series::{FieldSeries, TimeGrid};
