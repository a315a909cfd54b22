use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoding::{Decoder, Genotype};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Minimize,
    Maximize,
}

impl Direction {
    /// Maps a fitness value to the internal minimization key.
    pub fn key(self, fitness: f64) -> f64 {
        match self {
            Direction::Minimize => fitness,
            Direction::Maximize => -fitness,
        }
    }

    pub fn better(self, a: f64, b: f64) -> bool {
        self.key(a) < self.key(b)
    }
}

/// The scaling map applied to raw objective values.
#[derive(Clone, Default)]
pub enum Scaling {
    #[default]
    Identity,
    /// `y ↦ scale·y + shift`.
    Affine { scale: f64, shift: f64 },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Scaling {
    pub fn apply(&self, y: f64) -> f64 {
        match self {
            Scaling::Identity => y,
            Scaling::Affine { scale, shift } => scale * y + shift,
            Scaling::Custom(f) => f(y),
        }
    }
}

impl fmt::Debug for Scaling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scaling::Identity => f.write_str("Identity"),
            Scaling::Affine { scale, shift } => write!(f, "Affine({scale}·y + {shift})"),
            Scaling::Custom(_) => f.write_str("Custom"),
        }
    }
}

pub type Objective<P> = Arc<dyn Fn(&P) -> f64 + Send + Sync>;

/// Fitness `Φ = scaling ∘ objective ∘ decode` together with the direction in
/// which it is optimized.
pub struct FitnessPipeline<D: Decoder> {
    pub codec: D,
    pub objective: Objective<D::Phenotype>,
    pub scaling: Scaling,
    pub direction: Direction,
}

impl<D: Decoder + Clone> Clone for FitnessPipeline<D> {
    fn clone(&self) -> Self {
        Self {
            codec: self.codec.clone(),
            objective: Arc::clone(&self.objective),
            scaling: self.scaling.clone(),
            direction: self.direction,
        }
    }
}

impl<D: Decoder> FitnessPipeline<D> {
    pub fn new<F>(codec: D, objective: F) -> Self
    where
        F: Fn(&D::Phenotype) -> f64 + Send + Sync + 'static,
    {
        Self {
            codec,
            objective: Arc::new(objective),
            scaling: Scaling::Identity,
            direction: Direction::Minimize,
        }
    }

    pub fn with_scaling(mut self, scaling: Scaling) -> Self {
        self.scaling = scaling;
        self
    }

    pub fn with_direction(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self
    }

    /// `Φ(s)`.
    pub fn evaluate(&self, s: &Genotype) -> Result<f64> {
        let x = self.codec.decode(s)?;
        Ok(self.scaling.apply((self.objective)(&x)))
    }

    /// Evaluates every member, in parallel when `parallel` is set. Results
    /// are returned in member order either way.
    pub fn evaluate_all(&self, members: &[Genotype], parallel: bool) -> Result<Vec<f64>> {
        if parallel {
            members.par_iter().map(|s| self.evaluate(s)).collect()
        } else {
            members.iter().map(|s| self.evaluate(s)).collect()
        }
    }
}
