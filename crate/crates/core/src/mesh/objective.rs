//! Swap-descent objectives with O(degree²) local updates.

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::curvature::{absolute_curvature, angle_at, angle_deficits, cone, l1_curvature, strictly_inside, Cone};
use super::surface::TriSurface;
use super::swap::{apply_in_place, legal_swaps, SwapMove};
use crate::error::Result;

/// Which curvature norm a descent or decoder minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurvatureMeasure {
    /// `Σ|deficit|`. Blind to reflex edges whose endpoints keep a
    /// non-negative deficit.
    AngleDeficit,
    /// `Σ(K⁺ + K⁻)`; minimal (`4π`) exactly on convex surfaces.
    #[default]
    Absolute,
}

impl CurvatureMeasure {
    pub fn evaluate(self, m: &TriSurface) -> Result<f64> {
        match self {
            CurvatureMeasure::AngleDeficit => l1_curvature(m),
            CurvatureMeasure::Absolute => absolute_curvature(m),
        }
    }

    fn vertex_term(self, deficit: f64, positive: f64) -> f64 {
        match self {
            CurvatureMeasure::AngleDeficit => deficit.abs(),
            CurvatureMeasure::Absolute => 2.0 * positive - deficit,
        }
    }
}

/// Per-vertex curvature data for a mesh that is edited by swaps only.
///
/// A swap delta depends only on the state of its four quad corners, so
/// deltas are cached per edge as four corner terms, each stamped with its
/// corner's version.
#[derive(Debug, Clone)]
pub(crate) struct CurvatureState {
    measure: CurvatureMeasure,
    deficits: Vec<f64>,
    /// `K⁺` per vertex; extreme rays are stored as vertex ids.
    cones: Vec<Cone>,
    adjacency: Vec<Vec<usize>>,
    version: Vec<u32>,
    cache: FxHashMap<(usize, usize), CachedDelta>,
}

#[derive(Debug, Clone, Copy)]
struct CachedDelta {
    opposite: (usize, usize),
    stamp: [u32; 4],
    terms: [f64; 4],
}

type Neighbors = SmallVec<[usize; 16]>;

const FLAT: Cone = Cone {
    value: 0.0,
    extreme: None,
};

impl CurvatureState {
    pub(crate) fn new(m: &TriSurface, measure: CurvatureMeasure) -> Result<Self> {
        let deficits = angle_deficits(m)?;
        let adjacency = m.neighbors();
        let cones = (0..deficits.len()).map(|v| Self::star_cone(m, measure, v, &adjacency[v])).collect();
        Ok(CurvatureState {
            measure,
            version: vec![0; deficits.len()],
            deficits,
            cones,
            adjacency,
            cache: FxHashMap::default(),
        })
    }

    fn star_cone(m: &TriSurface, measure: CurvatureMeasure, v: usize, neighbors: &[usize]) -> Cone {
        if measure == CurvatureMeasure::AngleDeficit {
            return FLAT;
        }
        let q: SmallVec<[[f64; 3]; 16]> = neighbors.iter().map(|&w| m.coords[w]).collect();
        let mut c = cone(m.coords[v], &q);
        if let Some(ext) = &mut c.extreme {
            ext.iter_mut().for_each(|i| *i = neighbors[*i]);
        }
        c
    }

    pub(crate) fn value(&self) -> f64 {
        self.deficits
            .iter()
            .zip(&self.cones)
            .map(|(&k, c)| self.measure.vertex_term(k, c.value))
            .sum()
    }

    /// Deficit change of corner `i` of `[a, b, c, d]` under `mv`.
    fn deficit_change(&self, m: &TriSurface, mv: &SwapMove, i: usize) -> f64 {
        let (a, b) = mv.edge;
        let (c, d) = mv.opposite;
        let pos = |v: usize| m.coords[v];
        // old: (a, b, c) and (b, a, d); new: (c, a, d) and (d, b, c)
        let (old, new) = match i {
            0 => (
                angle_at(pos(a), pos(b), pos(c)) + angle_at(pos(a), pos(d), pos(b)),
                angle_at(pos(a), pos(d), pos(c)),
            ),
            1 => (
                angle_at(pos(b), pos(c), pos(a)) + angle_at(pos(b), pos(a), pos(d)),
                angle_at(pos(b), pos(c), pos(d)),
            ),
            2 => (
                angle_at(pos(c), pos(a), pos(b)),
                angle_at(pos(c), pos(a), pos(d)) + angle_at(pos(c), pos(d), pos(b)),
            ),
            _ => (
                angle_at(pos(d), pos(b), pos(a)),
                angle_at(pos(d), pos(c), pos(a)) + angle_at(pos(d), pos(b), pos(c)),
            ),
        };
        old - new
    }

    /// Change of corner `i`'s vertex term under `mv`. Depends on the
    /// positions and on that corner's state only.
    fn corner_term(&self, m: &TriSurface, mv: &SwapMove, i: usize) -> f64 {
        let (a, b) = mv.edge;
        let (c, d) = mv.opposite;
        let (v, positive) = match i {
            0 => (a, self.positive_without(m, a, b)),
            1 => (b, self.positive_without(m, b, a)),
            2 => (c, self.positive_with(m, c, d)),
            _ => (d, self.positive_with(m, d, c)),
        };
        let deficit = self.deficits[v] + self.deficit_change(m, mv, i);
        self.measure.vertex_term(deficit, positive) - self.measure.vertex_term(self.deficits[v], self.cones[v].value)
    }

    fn neighbors_without(&self, v: usize, x: usize) -> Neighbors {
        self.adjacency[v].iter().copied().filter(|&w| w != x).collect()
    }

    fn neighbors_with(&self, v: usize, x: usize) -> Neighbors {
        let mut n: Neighbors = self.adjacency[v].iter().copied().collect();
        n.push(x);
        n
    }

    /// `K⁺` at `v` once its neighbor `x` is dropped. Removing a ray that
    /// is not extreme leaves the cone unchanged.
    fn positive_without(&self, m: &TriSurface, v: usize, x: usize) -> f64 {
        match &self.cones[v].extreme {
            _ if self.measure == CurvatureMeasure::AngleDeficit => 0.0,
            Some(ext) if !ext.contains(&x) => self.cones[v].value,
            _ => Self::star_cone(m, self.measure, v, &self.neighbors_without(v, x)).value,
        }
    }

    /// `K⁺` at `v` once `x` becomes a neighbor. A ray strictly inside the
    /// cone leaves it unchanged.
    fn positive_with(&self, m: &TriSurface, v: usize, x: usize) -> f64 {
        if self.measure == CurvatureMeasure::AngleDeficit {
            return 0.0;
        }
        if let Some(ext) = &self.cones[v].extreme {
            let rays: SmallVec<[[f64; 3]; 8]> = ext.iter().map(|&w| m.coords[w]).collect();
            if strictly_inside(m.coords[v], &rays, m.coords[x]) {
                return self.cones[v].value;
            }
        }
        Self::star_cone(m, self.measure, v, &self.neighbors_with(v, x)).value
    }

    /// Objective change caused by `mv`, uncached.
    #[cfg(test)]
    pub(crate) fn delta(&self, m: &TriSurface, mv: &SwapMove) -> f64 {
        (0..4).map(|i| self.corner_term(m, mv, i)).sum()
    }

    /// [`CurvatureState::delta`] through the cache; only corners whose
    /// version moved are recomputed.
    pub(crate) fn cached_delta(&mut self, m: &TriSurface, mv: &SwapMove) -> f64 {
        let (a, b) = mv.edge;
        let (c, d) = mv.opposite;
        let stamp = [a, b, c, d].map(|v| self.version[v]);
        let mut terms = [f64::NAN; 4];
        let mut fresh = [true; 4];
        if let Some(hit) = self.cache.get(&mv.edge) {
            if hit.opposite == mv.opposite {
                terms = hit.terms;
                fresh = [0, 1, 2, 3].map(|i| hit.stamp[i] != stamp[i]);
            }
        }
        for i in 0..4 {
            if fresh[i] {
                terms[i] = self.corner_term(m, mv, i);
            }
        }
        self.cache.insert(
            mv.edge,
            CachedDelta {
                opposite: mv.opposite,
                stamp,
                terms,
            },
        );
        terms.iter().sum()
    }

    /// Every legal swap of `m` with its objective change, in edge order.
    pub(crate) fn scored_swaps(&mut self, m: &TriSurface) -> Vec<(SwapMove, f64)> {
        legal_swaps(m)
            .into_iter()
            .map(|mv| {
                let d = self.cached_delta(m, &mv);
                (mv, d)
            })
            .collect()
    }

    /// Applies the (legal) swap to `m` and updates the state.
    pub(crate) fn apply(&mut self, m: &mut TriSurface, mv: &SwapMove) {
        let (a, b) = mv.edge;
        let (c, d) = mv.opposite;
        let deficits = [0, 1, 2, 3].map(|i| {
            let v = [a, b, c, d][i];
            self.deficits[v] + self.deficit_change(m, mv, i)
        });
        let neighbors = [
            self.neighbors_without(a, b),
            self.neighbors_without(b, a),
            self.neighbors_with(c, d),
            self.neighbors_with(d, c),
        ];
        apply_in_place(m, mv);
        for (i, (v, n)) in [a, b, c, d].into_iter().zip(neighbors).enumerate() {
            self.deficits[v] = deficits[i];
            self.cones[v] = Self::star_cone(m, self.measure, v, &n);
            self.adjacency[v] = n.into_vec();
            self.version[v] += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{legal_swaps, shapes, swap_edge};
    use crate::rng::RandomStream;

    #[test]
    fn local_updates_match_full_recomputation() {
        let mut rng = RandomStream::new(11);
        for measure in [CurvatureMeasure::AngleDeficit, CurvatureMeasure::Absolute] {
            let mut m = shapes::icosahedron();
            let mut state = CurvatureState::new(&m, measure).unwrap();
            for _ in 0..60 {
                let swaps = legal_swaps(&m);
                let mv = swaps[rng.index(swaps.len())];
                let after = swap_edge(&m, &mv).unwrap();
                let full = measure.evaluate(&after).unwrap() - measure.evaluate(&m).unwrap();
                assert!((state.delta(&m, &mv) - full).abs() < 1e-9);
                for (other, d) in state.scored_swaps(&m) {
                    assert_eq!(d, state.delta(&m, &other));
                }
                state.apply(&mut m, &mv);
                assert_eq!(m, after);
                assert!((state.value() - measure.evaluate(&m).unwrap()).abs() < 1e-9);
            }
        }
    }
}
