//! Hull recovery as a search over edge-swap sequences.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::ea::FitnessPipeline;
use crate::encoding::{Alphabet, Decoder, Genotype};
use crate::error::{Error, Result};
use crate::mesh::{apply_in_place, hull_mesh_from, legal_swaps, CurvatureMeasure, CurvatureState, SwapMove, TriSurface};
use crate::rng::RandomStream;
use crate::simplicial::{convex_hull_oracle, HullResult, Point};

/// Default alphabet size for [`SwapOrder::ByGain`]: a no-op plus the seven
/// best-ranked swaps.
pub const DEFAULT_RANKED_ALPHABET: usize = 8;

/// How the legal swaps of the current mesh are listed for gene lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SwapOrder {
    /// Ascending objective change, ties by edge: gene 1 is the steepest
    /// swap.
    #[default]
    ByGain,
    /// Lexicographic by edge.
    ByEdge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SwapCodecParams {
    /// Genes per genotype; defaults to three times the edge count.
    pub genome_length: Option<usize>,
    /// Defaults to [`DEFAULT_RANKED_ALPHABET`] by gain and `E + 1` by edge.
    pub alphabet_size: Option<usize>,
    pub order: SwapOrder,
    pub measure: CurvatureMeasure,
}

/// Points in convex position in E³ and a sphere-topology start mesh on
/// them.
#[derive(Debug, Clone)]
pub struct TriangulationProblem {
    points: Vec<Point>,
    initial: TriSurface,
    hull: HullResult,
}

impl TriangulationProblem {
    /// Rejects point sets with an interior point, naming it, and start
    /// meshes whose vertices differ from `points`.
    pub fn new(points: Vec<Point>, initial: TriSurface) -> Result<Self> {
        let hull = convex_position_hull(&points)?;
        let same = initial.vertex_count() == points.len()
            && initial.coords().iter().zip(&points).all(|(c, p)| c.as_slice() == p.as_slice());
        if !same {
            return Err(Error::InvalidProblem("the start mesh is not built on the given points".into()));
        }
        if initial.euler_characteristic() != 2 {
            return Err(Error::InvalidProblem("the start mesh is not a sphere".into()));
        }
        crate::mesh::angle_deficits(&initial)?;
        Ok(Self { points, initial, hull })
    }

    /// The problem whose start mesh is the hull itself.
    pub fn from_points(points: Vec<Point>) -> Result<Self> {
        let hull = convex_position_hull(&points)?;
        let initial = hull_mesh_from(&points, &hull)?;
        Ok(Self { points, initial, hull })
    }

    pub fn with_initial(&self, initial: TriSurface) -> Result<Self> {
        Self::new(self.points.clone(), initial)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn initial(&self) -> &TriSurface {
        &self.initial
    }

    pub fn hull(&self) -> &HullResult {
        &self.hull
    }
}

fn convex_position_hull(points: &[Point]) -> Result<HullResult> {
    if points.iter().any(|p| p.len() != 3) {
        return Err(Error::InvalidProblem("triangulation points must lie in E³".into()));
    }
    let hull = convex_hull_oracle(points)?;
    if hull.dim != 3 {
        return Err(Error::InvalidProblem("the points are coplanar".into()));
    }
    if let Some(inner) = (0..points.len()).find(|i| hull.hull_vertices.binary_search(i).is_err()) {
        return Err(Error::InvalidProblem(format!(
            "point {inner} {:?} is not in convex position",
            points[inner]
        )));
    }
    Ok(hull)
}

/// Applies `k` uniformly chosen legal swaps.
pub fn scramble(m: &TriSurface, k: usize, rng: &mut RandomStream) -> TriSurface {
    let mut out = m.clone();
    for _ in 0..k {
        let swaps = legal_swaps(&out);
        if swaps.is_empty() {
            break;
        }
        let mv = swaps[rng.index(swaps.len())];
        apply_in_place(&mut out, &mv);
    }
    out
}

/// Decodes a gene sequence by walking the swap graph from a fixed start
/// mesh: gene `0` is a no-op, gene `g > 0` applies entry `(g − 1) mod n` of
/// the `n` currently legal swaps in [`SwapOrder`]. The phenotype is the
/// lowest-objective mesh on the walk, earliest first.
#[derive(Debug, Clone)]
pub struct SwapSequenceCodec {
    initial: TriSurface,
    alphabet: Alphabet,
    length: usize,
    order: SwapOrder,
    measure: CurvatureMeasure,
    lower_bound: f64,
}

/// The walk a genotype encodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SwapWalk {
    pub moves: Vec<SwapMove>,
    /// Length of the prefix that ends at the phenotype.
    pub best_prefix: usize,
    pub best_value: f64,
}

impl SwapSequenceCodec {
    pub fn new(initial: TriSurface, params: &SwapCodecParams) -> Result<Self> {
        let edges = initial.edge_count();
        let length = params.genome_length.unwrap_or(3 * edges);
        if length < 1 {
            return Err(Error::InvalidParams("genome length must be at least 1".into()));
        }
        let size = params.alphabet_size.unwrap_or(match params.order {
            SwapOrder::ByGain => DEFAULT_RANKED_ALPHABET,
            SwapOrder::ByEdge => edges + 1,
        });
        if size < 2 {
            return Err(Error::InvalidParams("the swap alphabet needs at least 2 symbols".into()));
        }
        CurvatureState::new(&initial, params.measure)?;
        Ok(Self {
            lower_bound: 2.0 * PI * initial.euler_characteristic() as f64,
            alphabet: Alphabet::integers(size)?,
            initial,
            length,
            order: params.order,
            measure: params.measure,
        })
    }

    pub fn initial(&self) -> &TriSurface {
        &self.initial
    }

    pub fn measure(&self) -> CurvatureMeasure {
        self.measure
    }

    fn ordered(&self, mesh: &TriSurface, state: &mut CurvatureState) -> Vec<SwapMove> {
        match self.order {
            SwapOrder::ByEdge => legal_swaps(mesh),
            SwapOrder::ByGain => {
                let mut swaps = state.scored_swaps(mesh);
                // stable: equal gains stay in edge order
                swaps.sort_by(|a, b| a.1.total_cmp(&b.1));
                swaps.into_iter().map(|(mv, _)| mv).collect()
            }
        }
    }

    pub fn walk(&self, s: &Genotype) -> Result<SwapWalk> {
        Decoder::check(self, s)?;
        let mut mesh = self.initial.clone();
        let mut state = CurvatureState::new(&mesh, self.measure)?;
        let mut best_value = state.value();
        let mut best_prefix = 0;
        let mut moves = Vec::new();
        for &g in s.symbols() {
            if best_value <= self.lower_bound + 1e-9 {
                // nothing can improve on the global lower bound
                break;
            }
            if g == 0 {
                continue;
            }
            let swaps = self.ordered(&mesh, &mut state);
            if swaps.is_empty() {
                continue;
            }
            let mv = swaps[(g as usize - 1) % swaps.len()];
            state.apply(&mut mesh, &mv);
            moves.push(mv);
            let value = state.value();
            if value < best_value - 1e-12 {
                best_value = value;
                best_prefix = moves.len();
            }
        }
        Ok(SwapWalk {
            moves,
            best_prefix,
            best_value,
        })
    }

    /// A genotype whose walk performs `moves` in order, padded with no-ops.
    pub fn encode_moves(&self, moves: &[SwapMove]) -> Result<Genotype> {
        if moves.len() > self.length {
            return Err(Error::InvalidParams(format!(
                "{} moves do not fit a genome of length {}",
                moves.len(),
                self.length
            )));
        }
        let mut mesh = self.initial.clone();
        let mut state = CurvatureState::new(&mesh, self.measure)?;
        let mut genes = Vec::with_capacity(self.length);
        for mv in moves {
            let swaps = self.ordered(&mesh, &mut state);
            let pos = swaps
                .iter()
                .position(|s| s == mv)
                .ok_or(Error::IllegalSwap(mv.edge.0, mv.edge.1))?;
            if pos + 1 >= self.alphabet.len() {
                return Err(Error::Unsupported(format!(
                    "swap rank {} exceeds the alphabet of size {}",
                    pos + 1,
                    self.alphabet.len()
                )));
            }
            genes.push(pos as u32 + 1);
            state.apply(&mut mesh, mv);
        }
        genes.resize(self.length, 0);
        Ok(Genotype::new(genes))
    }
}

impl Decoder for SwapSequenceCodec {
    type Phenotype = TriSurface;

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn length(&self) -> usize {
        self.length
    }

    fn decode(&self, s: &Genotype) -> Result<TriSurface> {
        let walk = self.walk(s)?;
        let mut mesh = self.initial.clone();
        for mv in &walk.moves[..walk.best_prefix] {
            apply_in_place(&mut mesh, mv);
        }
        Ok(mesh)
    }
}

/// Fitness = curvature measure of the decoded mesh, minimized.
pub fn triangulation_pipeline(
    p: &TriangulationProblem,
    params: &SwapCodecParams,
) -> Result<FitnessPipeline<SwapSequenceCodec>> {
    let codec = SwapSequenceCodec::new(p.initial.clone(), params)?;
    let measure = params.measure;
    // legal swaps never create degenerate triangles, so evaluation succeeds
    Ok(FitnessPipeline::new(codec, move |m: &TriSurface| {
        measure.evaluate(m).unwrap_or(f64::INFINITY)
    }))
}
