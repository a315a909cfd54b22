//! Populations, operators, fitness pipeline and the evolutionary loop.

mod fitness;
pub mod laws;
mod operators;
mod population;
mod run;

pub use fitness::{Direction, FitnessPipeline, Objective, Scaling};
pub use operators::{
    mutate, one_point_crossover, recombine, select, CrossoverKind, MutationKind, MutationParams, RecombinationParams,
    SelectionKind, SelectionParams,
};
pub use population::Population;
pub use run::{
    initialize, run_ea, should_terminate, EaConfig, GenerationStats, OperatorEvents, RunRecord, TerminationCriteria,
    TerminationReason, STAGNATION_TOLERANCE,
};
