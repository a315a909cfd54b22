use serde::{Deserialize, Serialize};

use super::objective::{CurvatureMeasure, CurvatureState};
use super::surface::TriSurface;
use super::swap::SwapMove;
use crate::error::Result;

/// A swap is only accepted if it lowers the objective by more than this.
pub const IMPROVEMENT_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DescentPolicy {
    /// Take the swap with the largest decrease; ties go to the lowest edge.
    #[default]
    BestImprovement,
    /// Take the first improving swap in edge order.
    FirstImprovement,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DescentStep {
    pub swap: SwapMove,
    pub before: f64,
    pub after: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescentTrace {
    pub measure: CurvatureMeasure,
    pub initial: f64,
    pub steps: Vec<DescentStep>,
    pub terminal: f64,
}

impl DescentTrace {
    pub fn moves(&self) -> usize {
        self.steps.len()
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.steps.iter().all(|s| s.after < s.before)
            && self.steps.windows(2).all(|w| w[0].after == w[1].before)
    }

    /// `step,edge,objective` rows; step 0 is the starting objective.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,edge,objective\n");
        out.push_str(&format!("0,,{}\n", self.initial));
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!("{},{}-{},{}\n", i + 1, s.swap.edge.0, s.swap.edge.1, s.after));
        }
        out
    }
}

/// Swaps edges while some legal swap lowers `measure` by more than
/// [`IMPROVEMENT_THRESHOLD`].
pub fn greedy_descent(
    m: &TriSurface,
    policy: DescentPolicy,
    measure: CurvatureMeasure,
) -> Result<(TriSurface, DescentTrace)> {
    let mut mesh = m.clone();
    let mut state = CurvatureState::new(&mesh, measure)?;
    let initial = state.value();
    let mut current = initial;
    let mut steps = Vec::new();
    loop {
        let mut chosen: Option<(SwapMove, f64)> = None;
        for (mv, delta) in state.scored_swaps(&mesh) {
            if delta >= -IMPROVEMENT_THRESHOLD {
                continue;
            }
            if chosen.is_none_or(|(_, best)| delta < best) {
                chosen = Some((mv, delta));
                if policy == DescentPolicy::FirstImprovement {
                    break;
                }
            }
        }
        let Some((mv, _)) = chosen else {
            break;
        };
        state.apply(&mut mesh, &mv);
        let after = state.value();
        steps.push(DescentStep {
            swap: mv,
            before: current,
            after,
        });
        current = after;
    }
    let terminal = measure.evaluate(&mesh)?;
    Ok((
        mesh,
        DescentTrace {
            measure,
            initial,
            steps,
            terminal,
        },
    ))
}
