use nalgebra::{DMatrix, DVector};

/// Singular values at or below this fraction of the largest are treated as zero.
const RANK_TOLERANCE: f64 = 1e-9;

/// Rank of the row vectors `rows`.
pub fn rank(rows: &[Vec<f64>]) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let sv = m.singular_values();
    let top = sv.iter().copied().fold(0.0f64, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOLERANCE * top.max(1.0)).count()
}

/// Dimension of the affine hull of `points`.
pub fn affine_rank(points: &[&[f64]]) -> usize {
    let Some((first, rest)) = points.split_first() else {
        return 0;
    };
    let diffs: Vec<Vec<f64>> = rest
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(a, b)| a - b).collect())
        .collect();
    rank(&diffs)
}

pub fn affinely_independent(points: &[&[f64]]) -> bool {
    !points.is_empty() && affine_rank(points) == points.len() - 1
}

/// Solves the square system `a x = b`; `None` when `|det a|` is below `min_det`.
pub fn solve(a: &[Vec<f64>], b: &[f64], min_det: f64) -> Option<Vec<f64>> {
    let n = b.len();
    let m = DMatrix::from_fn(n, n, |i, j| a[i][j]);
    if m.determinant().abs() <= min_det {
        return None;
    }
    m.lu().solve(&DVector::from_column_slice(b)).map(|x| x.iter().copied().collect())
}

/// Barycentric coordinates of `x` with respect to `vertices` (least squares
/// on the affine hull) and the distance from `x` to that hull.
pub fn barycentric(vertices: &[&[f64]], x: &[f64]) -> (Vec<f64>, f64) {
    let k = vertices.len();
    let dim = x.len();
    if k == 1 {
        let d = dist(vertices[0], x);
        return (vec![1.0], d);
    }
    // x - v0 = Σ_{i>0} λ_i (v_i - v0)
    let basis = DMatrix::from_fn(dim, k - 1, |r, c| vertices[c + 1][r] - vertices[0][r]);
    let rhs = DVector::from_fn(dim, |r, _| x[r] - vertices[0][r]);
    let svd = basis.clone().svd(true, true);
    let lam = svd.solve(&rhs, 1e-12).unwrap_or_else(|_| DVector::zeros(k - 1));
    let residual = (&basis * &lam - rhs).norm();
    let mut out = Vec::with_capacity(k);
    out.push(1.0 - lam.sum());
    out.extend(lam.iter().copied());
    (out, residual)
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}
