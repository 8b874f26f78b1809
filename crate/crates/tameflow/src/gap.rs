//! The gap between linear subspaces and its behavior under symmetric linear
//! flows.
//!
//! The gap `δ(U, V)` is the operator norm of `P_U − P_V P_U`: the farthest a
//! unit vector of `U` sits from `V`. Graphs of operators `U → U⊥` realize
//! every small gap through `‖S‖(1+‖S‖²)^{-1/2}`; the shadow/slope
//! decomposition reduces general pairs to graphs; and under `e^{tA}` with `A`
//! symmetric invertible the gap to the positive eigenspace decays like
//! `e^{-(m₊+m₋)t}`. A handful of spectral utilities (the clustering ratio
//! `ν`, the three-eigenvalue model flow) round out the toolkit.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::{Error, Result};

/// Basis columns must satisfy `BᵀB = I` within this tolerance.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;
/// Symmetric operators must equal their transpose within this tolerance.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Singular values below this (relative) threshold count as zero.
const RANK_TOL: f64 = 1e-12;
/// One flow step never exceeds this time span, so scaled exponentials stay
/// representable and orthonormalization keeps full rank.
const MAX_FLOW_STEP: f64 = 40.0;

/// A linear subspace of Euclidean space, stored as an orthonormal basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: DMatrix<f64>, // n×k, orthonormal columns
}

impl Subspace {
    /// Wraps an already-orthonormal basis; rejects defective input.
    pub fn new(basis: DMatrix<f64>) -> Result<Self> {
        let defect = orthonormality_defect(&basis);
        if defect > ORTHONORMALITY_TOL {
            return Err(Error::ShapeMismatch(format!(
                "basis columns are not orthonormal (defect {defect:.3e})"
            )));
        }
        Ok(Subspace { basis })
    }

    /// The span of an arbitrary matrix: rank-revealing orthonormalization
    /// through the singular value decomposition.
    pub fn span(mat: &DMatrix<f64>) -> Subspace {
        if mat.ncols() == 0 {
            return Subspace { basis: DMatrix::zeros(mat.nrows(), 0) };
        }
        let svd = mat.clone().svd(true, false);
        let u = svd.u.expect("requested");
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let rank = svd
            .singular_values
            .iter()
            .filter(|&&s| s > RANK_TOL * smax.max(1.0))
            .count();
        Subspace { basis: u.columns(0, rank).into_owned() }
    }

    /// The zero subspace of an `n`-dimensional ambient space.
    pub fn zero(n: usize) -> Subspace {
        Subspace { basis: DMatrix::zeros(n, 0) }
    }

    /// Span of the chosen standard basis vectors.
    pub fn coordinate(n: usize, indices: &[usize]) -> Result<Subspace> {
        let mut basis = DMatrix::zeros(n, indices.len());
        for (j, &i) in indices.iter().enumerate() {
            if i >= n {
                return Err(Error::IndexOutOfRange(i, n));
            }
            basis[(i, j)] = 1.0;
        }
        Subspace::new(basis)
    }

    pub fn from_columns(n: usize, cols: &[Vec<f64>]) -> Result<Subspace> {
        let mut m = DMatrix::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != n {
                return Err(Error::ShapeMismatch("column length".into()));
            }
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        Ok(Subspace::span(&m))
    }

    /// Seeded Gaussian basis, orthonormalized; reproducible test corpora.
    pub fn random(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Subspace {
        let mat = DMatrix::from_fn(n, k, |_, _| StandardNormal.sample(rng));
        Subspace::span(&mat)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Orthogonal projector `P = B Bᵀ`.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.basis * self.basis.transpose()
    }

    /// Orthonormal basis of the orthogonal complement, via a Householder QR
    /// of the basis padded with the identity.
    pub fn orthogonal_complement(&self) -> Subspace {
        let n = self.ambient_dim();
        let k = self.dim();
        if k == 0 {
            return Subspace { basis: DMatrix::identity(n, n) };
        }
        let mut padded = DMatrix::zeros(n, k + n);
        padded.view_mut((0, 0), (n, k)).copy_from(&self.basis);
        padded.view_mut((0, k), (n, n)).copy_from(&DMatrix::identity(n, n));
        // unpivoted Householder QR keeps the basis columns first, so the
        // remaining columns of Q complete them to an orthonormal basis
        let qr = padded.qr();
        let q = qr.q();
        Subspace { basis: q.columns(k, n - k).into_owned() }
    }

    /// Whether `self ⊆ other` within tolerance (gap below `tol`).
    pub fn is_contained_in(&self, other: &Subspace, tol: f64) -> Result<bool> {
        Ok(gap(self, other)? <= tol)
    }
}

pub fn orthonormality_defect(basis: &DMatrix<f64>) -> f64 {
    let k = basis.ncols();
    let gram = basis.transpose() * basis;
    (&gram - DMatrix::identity(k, k)).norm()
}

/// Operator 2-norm (largest singular value).
pub fn operator_norm(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// The gap `δ(U, V) = ‖P_U − P_V P_U‖`, always in `[0, 1]`.
pub fn gap(u: &Subspace, v: &Subspace) -> Result<f64> {
    if u.ambient_dim() != v.ambient_dim() {
        return Err(Error::AmbientMismatch(u.ambient_dim(), v.ambient_dim()));
    }
    if u.dim() == 0 {
        return Ok(0.0);
    }
    let pu = u.projector();
    let m = &pu - v.projector() * &pu;
    Ok(operator_norm(&m).clamp(0.0, 1.0))
}

/// The symmetrized gap `δ̂ = δ(U,V) + δ(V,U)` with its projector-norm
/// sandwich `‖P_U − P_V‖ ≤ δ̂ ≤ 2‖P_U − P_V‖`.
#[derive(Clone, Debug, Serialize)]
pub struct HatGap {
    pub value: f64,
    pub projector_distance: f64,
}

impl HatGap {
    pub fn sandwich_holds(&self, tol: f64) -> bool {
        self.projector_distance <= self.value + tol
            && self.value <= 2.0 * self.projector_distance + tol
    }
}

pub fn hat_gap(u: &Subspace, v: &Subspace) -> Result<HatGap> {
    let value = gap(u, v)? + gap(v, u)?;
    let projector_distance = operator_norm(&(u.projector() - v.projector()));
    Ok(HatGap { value, projector_distance })
}

/// The graph `Γ_S = {u + Su}` of an operator `S : U → U⊥`, with `S` given as
/// a matrix in the bases of `U` and of its complement.
pub fn graph_subspace(u: &Subspace, s: &DMatrix<f64>) -> Result<Subspace> {
    let k = u.dim();
    let n = u.ambient_dim();
    if s.ncols() != k || s.nrows() != n - k {
        return Err(Error::ShapeMismatch(format!(
            "slope matrix must be {}×{}, got {}×{}",
            n - k,
            k,
            s.nrows(),
            s.ncols()
        )));
    }
    let perp = u.orthogonal_complement();
    let mat = u.basis() + perp.basis() * s;
    Ok(Subspace::span(&mat))
}

/// Deviation of the computed gap from the graph formula
/// `δ(Γ_S, U) = ‖S‖(1+‖S‖²)^{-1/2}`.
pub fn graph_gap_check(u: &Subspace, s: &DMatrix<f64>) -> Result<f64> {
    let graph = graph_subspace(u, s)?;
    let measured = gap(&graph, u)?;
    let ns = operator_norm(s);
    let predicted = ns / (1.0 + ns * ns).sqrt();
    Ok((measured - predicted).abs())
}

/// Shadow/slope decomposition of a transversal pair: `T = V ∩ U⊥`, `S` the
/// orthogonal projection of `U` onto `V` (also `T⊥ ∩ V`), and the slope `M`
/// whose graph over `U` is `S`.
#[derive(Clone, Debug)]
pub struct ShadowSlope {
    pub shadow: Subspace,
    pub complement_in_v: Subspace,
    pub slope: DMatrix<f64>,
    pub slope_norm: f64,
    pub gap_uv: f64,
    /// Largest deviation within the chain `δ(W,V) = δ(U,V) = δ(U,S)`.
    pub equality_residual: f64,
    /// Measured `δ(U,V) / (‖M‖(1+‖M‖²)^{-1/2})`; `1` for genuinely graph-like
    /// pairs, reported as the empirical two-sided-bound constant.
    pub bound_ratio: f64,
}

pub fn shadow_slope(u: &Subspace, v: &Subspace) -> Result<ShadowSlope> {
    if u.ambient_dim() != v.ambient_dim() {
        return Err(Error::AmbientMismatch(u.ambient_dim(), v.ambient_dim()));
    }
    if u.dim() > v.dim() {
        return Err(Error::ShapeMismatch("dim U must not exceed dim V".into()));
    }
    let (ku, kv) = (u.dim(), v.dim());
    // T = V ∩ U⊥: the nullspace of BᵤᵀBᵥ is the complement of its row space
    let cross = u.basis().transpose() * v.basis();
    let row_space = Subspace::span(&cross.transpose());
    if row_space.dim() != ku {
        return Err(Error::TransversalityFailure);
    }
    let nullspace = row_space.orthogonal_complement();
    let t_sub = Subspace::span(&(v.basis() * nullspace.basis()));
    if t_sub.dim() != kv - ku {
        return Err(Error::TransversalityFailure);
    }

    let shadow = Subspace::span(&(v.projector() * u.basis()));
    if shadow.dim() != ku {
        return Err(Error::TransversalityFailure);
    }

    // slope M : U → U⊥ in the (basis U, basis U⊥) frames, graph over U = S
    let perp = u.orthogonal_complement();
    let a = u.basis().transpose() * shadow.basis(); // k×k, invertible by transversality
    let a_inv = a
        .clone()
        .try_inverse()
        .ok_or(Error::TransversalityFailure)?;
    let slope = perp.basis().transpose() * shadow.basis() * a_inv;
    let slope_norm = operator_norm(&slope);

    // W = U + T and the three-way equality chain
    let mut wm = DMatrix::zeros(u.ambient_dim(), ku + t_sub.dim());
    wm.view_mut((0, 0), (u.ambient_dim(), ku)).copy_from(u.basis());
    wm.view_mut((0, ku), (u.ambient_dim(), t_sub.dim())).copy_from(t_sub.basis());
    let w = Subspace::span(&wm);

    let gap_uv = gap(u, v)?;
    let gap_wv = gap(&w, v)?;
    let gap_us = gap(u, &shadow)?;
    let equality_residual = (gap_wv - gap_uv).abs().max((gap_us - gap_uv).abs());

    let predicted = slope_norm / (1.0 + slope_norm * slope_norm).sqrt();
    let bound_ratio = if predicted < 1e-300 { 1.0 } else { gap_uv / predicted };

    Ok(ShadowSlope {
        shadow,
        complement_in_v: t_sub,
        slope,
        slope_norm,
        gap_uv,
        equality_residual,
        bound_ratio,
    })
}

/// Symmetric operator with its spectral decomposition.
#[derive(Clone, Debug)]
pub struct SymOperator {
    mat: DMatrix<f64>,
}

impl SymOperator {
    pub fn new(mat: DMatrix<f64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::ShapeMismatch("operator must be square".into()));
        }
        let defect = (&mat - mat.transpose()).norm();
        if defect > SYMMETRY_TOL * mat.norm().max(1.0) {
            return Err(Error::ShapeMismatch(format!(
                "operator is not symmetric (defect {defect:.3e})"
            )));
        }
        Ok(SymOperator { mat })
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        SymOperator { mat: DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(diag)) }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Eigenvalues ascending with matching eigenvector columns.
    pub fn eigen(&self) -> (Vec<f64>, DMatrix<f64>) {
        let se = self.mat.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| {
            se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).expect("finite")
        });
        let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
        let n = self.dim();
        let mut vectors = DMatrix::zeros(n, n);
        for (new, &old) in order.iter().enumerate() {
            vectors.set_column(new, &se.eigenvectors.column(old));
        }
        (values, vectors)
    }

    pub fn positive_eigenspace(&self) -> Subspace {
        let (values, vectors) = self.eigen();
        let cols: Vec<usize> = (0..values.len()).filter(|&i| values[i] > 0.0).collect();
        let mut basis = DMatrix::zeros(self.dim(), cols.len());
        for (j, &i) in cols.iter().enumerate() {
            basis.set_column(j, &vectors.column(i));
        }
        Subspace::span(&basis)
    }

    /// `(m₊, m₋)`: the smallest positive eigenvalues of `A` and of `−A`.
    /// Errors when the operator is singular or definite.
    pub fn spectral_margins(&self) -> Result<(f64, f64)> {
        let (values, _) = self.eigen();
        if values.iter().any(|&v| v.abs() < RANK_TOL) {
            return Err(Error::SingularOperator);
        }
        let m_plus = values.iter().filter(|&&v| v > 0.0).cloned().fold(f64::INFINITY, f64::min);
        let m_minus = values
            .iter()
            .filter(|&&v| v < 0.0)
            .map(|&v| -v)
            .fold(f64::INFINITY, f64::min);
        if !m_plus.is_finite() || !m_minus.is_finite() {
            return Err(Error::NotHyperbolic(values));
        }
        Ok((m_plus, m_minus))
    }
}

/// `e^{tA} V` by eigen-decomposition, stepping so no single exponential
/// exceeds the representable range: per step the largest factor is divided
/// out before orthonormalization (column-pivoted QR).
pub fn flow_subspace(a: &SymOperator, v: &Subspace, t: f64) -> Result<Subspace> {
    if a.dim() != v.ambient_dim() {
        return Err(Error::AmbientMismatch(a.dim(), v.ambient_dim()));
    }
    if v.dim() == 0 || t == 0.0 {
        return Ok(v.clone());
    }
    let (values, vectors) = a.eigen();
    let steps = (t.abs() / MAX_FLOW_STEP).ceil().max(1.0);
    let dt = t / steps;
    let reference = if dt >= 0.0 {
        values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    } else {
        values.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    let scales: Vec<f64> = values.iter().map(|&l| ((l - reference) * dt).exp()).collect();
    let mut basis = v.basis().clone();
    for _ in 0..steps as usize {
        let coords = vectors.transpose() * &basis;
        let mut scaled = coords.clone();
        for (i, &s) in scales.iter().enumerate() {
            for j in 0..scaled.ncols() {
                scaled[(i, j)] *= s;
            }
        }
        let mapped = &vectors * scaled;
        let qr = mapped.col_piv_qr();
        let q = qr.q();
        if q.ncols() < v.dim() {
            return Err(Error::SingularOperator);
        }
        basis = q.columns(0, v.dim()).into_owned();
    }
    Subspace::new(basis)
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayRow {
    pub t: f64,
    pub gap: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayCheck {
    pub exponent: f64,
    pub slope_norm: f64,
    pub rows: Vec<DecayRow>,
    pub all_hold: bool,
}

/// Pointwise check of `δ(U, e^{tA}V) ≤ e^{-(m₊+m₋)t}‖M_V(U)‖` on a time
/// grid, with `U` the positive eigenspace of `A`.
pub fn decay_bound_check(
    a: &SymOperator,
    u: &Subspace,
    v: &Subspace,
    tgrid: &[f64],
) -> Result<DecayCheck> {
    let positive = a.positive_eigenspace();
    if gap(u, &positive)? > 1e-8 || gap(&positive, u)? > 1e-8 {
        return Err(Error::DegenerateParameter(
            "U must be the positive eigenspace of A".into(),
        ));
    }
    let (m_plus, m_minus) = a.spectral_margins()?;
    let exponent = m_plus + m_minus;
    let slope_norm = shadow_slope(u, v)?.slope_norm;
    let mut rows = Vec::with_capacity(tgrid.len());
    let mut all_hold = true;
    for &t in tgrid {
        let vt = flow_subspace(a, v, t)?;
        let g = gap(u, &vt)?;
        let bound = (-exponent * t).exp() * slope_norm;
        let holds = g <= bound + 1e-10;
        all_hold &= holds;
        rows.push(DecayRow { t, gap: g, bound, holds });
    }
    Ok(DecayCheck { exponent, slope_norm, rows, all_hold })
}

/// Coordinate flow of a graph over `E_I`: entrywise `e^{(λ_α - λ_i)t} s_{αi}`
/// with rows indexed by the complement of `I` and columns by `I`, both
/// ascending.
pub fn grassmann_graph_flow(
    index_set: &[usize],
    s: &DMatrix<f64>,
    lambdas: &[f64],
    t: f64,
) -> Result<DMatrix<f64>> {
    let n = lambdas.len();
    let i_sorted = sorted_indices(index_set, n)?;
    let complement: Vec<usize> = (0..n).filter(|i| !i_sorted.contains(i)).collect();
    if s.nrows() != complement.len() || s.ncols() != i_sorted.len() {
        return Err(Error::ShapeMismatch(format!(
            "graph matrix must be {}×{}, got {}×{}",
            complement.len(),
            i_sorted.len(),
            s.nrows(),
            s.ncols()
        )));
    }
    let mut out = s.clone();
    for (r, &alpha) in complement.iter().enumerate() {
        for (c, &i) in i_sorted.iter().enumerate() {
            out[(r, c)] *= ((lambdas[alpha] - lambdas[i]) * t).exp();
        }
    }
    Ok(out)
}

/// The subspace represented by a graph matrix over coordinate directions.
pub fn graph_over_coordinates(
    index_set: &[usize],
    s: &DMatrix<f64>,
    n: usize,
) -> Result<Subspace> {
    let i_sorted = sorted_indices(index_set, n)?;
    let complement: Vec<usize> = (0..n).filter(|i| !i_sorted.contains(i)).collect();
    if s.nrows() != complement.len() || s.ncols() != i_sorted.len() {
        return Err(Error::ShapeMismatch("graph matrix shape".into()));
    }
    let mut mat = DMatrix::zeros(n, i_sorted.len());
    for (c, &i) in i_sorted.iter().enumerate() {
        mat[(i, c)] = 1.0;
        for (r, &alpha) in complement.iter().enumerate() {
            mat[(alpha, c)] = s[(r, c)];
        }
    }
    Ok(Subspace::span(&mat))
}

fn sorted_indices(index_set: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut i_sorted = index_set.to_vec();
    i_sorted.sort_unstable();
    i_sorted.dedup();
    if i_sorted.len() != index_set.len() {
        return Err(Error::ShapeMismatch("repeated index".into()));
    }
    if let Some(&bad) = i_sorted.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange(bad, n));
    }
    Ok(i_sorted)
}

/// `f_A(L) = tr(A P_L)`, the trace functional of the coordinate flow.
pub fn trace_functional(a: &SymOperator, l: &Subspace) -> Result<f64> {
    if a.dim() != l.ambient_dim() {
        return Err(Error::AmbientMismatch(a.dim(), l.ambient_dim()));
    }
    Ok((a.matrix() * l.projector()).trace())
}

/// Residual of the identity `f_A(L) = |P_U - P_U P_L|² + dim L - dim U` for
/// `A = P_{U⊥}`, with the Frobenius norm.
pub fn fa_identity_check(u: &Subspace, l: &Subspace) -> Result<f64> {
    if u.ambient_dim() != l.ambient_dim() {
        return Err(Error::AmbientMismatch(u.ambient_dim(), l.ambient_dim()));
    }
    let n = u.ambient_dim();
    let a = SymOperator::new(DMatrix::identity(n, n) - u.projector())?;
    let f = trace_functional(&a, l)?;
    let pu = u.projector();
    let diff = &pu - &pu * l.projector();
    let fro2 = diff.norm().powi(2);
    Ok((f - fro2 - l.dim() as f64 + u.dim() as f64).abs())
}

/// Distance from `L` to the nearest `k`-dimensional subspace containing `U`,
/// together with that subspace: `U` plus the dominant singular directions of
/// `P_{U⊥} B_L`.
#[derive(Clone, Debug)]
pub struct DistToContaining {
    pub distance: f64,
    pub nearest: Subspace,
}

pub fn dist_to_containing(l: &Subspace, u: &Subspace, k: usize) -> Result<DistToContaining> {
    let n = u.ambient_dim();
    if l.ambient_dim() != n {
        return Err(Error::AmbientMismatch(l.ambient_dim(), n));
    }
    if k < u.dim() || k > n {
        return Err(Error::IndexOutOfRange(k, n));
    }
    if l.dim() != k {
        return Err(Error::ShapeMismatch("L must have dimension k".into()));
    }
    let extra = k - u.dim();
    let perp_proj = DMatrix::identity(n, n) - u.projector();
    let m = &perp_proj * l.basis();
    let svd = m.clone().svd(true, false);
    let mu = svd.u.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[j].partial_cmp(&svd.singular_values[i]).expect("finite")
    });
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let mut chosen: Vec<usize> = order
        .into_iter()
        .filter(|&i| svd.singular_values[i] > RANK_TOL * smax.max(1.0))
        .take(extra)
        .collect();
    chosen.sort_unstable();
    let mut basis = DMatrix::zeros(n, k);
    basis.view_mut((0, 0), (n, u.dim())).copy_from(u.basis());
    for (j, &i) in chosen.iter().enumerate() {
        basis.set_column(u.dim() + j, &mu.column(i));
    }
    if chosen.len() < extra {
        // degenerate L: complete with arbitrary directions orthogonal to the
        // partial basis
        let partial = Subspace::span(&basis.columns(0, u.dim() + chosen.len()).into_owned());
        let completion = partial.orthogonal_complement();
        for j in 0..extra - chosen.len() {
            basis.set_column(u.dim() + chosen.len() + j, &completion.basis().column(j));
        }
    }
    let nearest = Subspace::span(&basis);
    let distance = operator_norm(&(l.projector() - nearest.projector()));
    Ok(DistToContaining { distance, nearest })
}

/// Empirical two-sided comparison between `|P_U − P_U P_L|²` and
/// `dist(L, Gr_k(E)_U)²` over a seeded sample: returns `(cmin, cmax)`.
pub fn morse_bott_ratio_check(
    u: &Subspace,
    k: usize,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let n = u.ambient_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cmin = f64::INFINITY;
    let mut cmax: f64 = 0.0;
    let mut used = 0usize;
    while used < samples {
        let l = Subspace::random(n, k, &mut rng);
        let pu = u.projector();
        let diff = &pu - &pu * l.projector();
        let num = diff.norm().powi(2);
        let den = dist_to_containing(&l, u, k)?.distance.powi(2);
        if den < 1e-18 {
            continue; // L already contains U; measure-zero event
        }
        let ratio = num / den;
        cmin = cmin.min(ratio);
        cmax = cmax.max(ratio);
        used += 1;
    }
    if !cmin.is_finite() || cmax <= 0.0 {
        return Err(Error::DegenerateParameter("ratio sample collapsed".into()));
    }
    Ok((cmin, cmax))
}

/// Hessian spectrum at a hyperbolic stationary point: at least one positive
/// and one negative eigenvalue, none zero.
#[derive(Clone, Debug, Serialize)]
pub struct CriticalSpectrum {
    eigenvalues: Vec<f64>,
}

impl CriticalSpectrum {
    pub fn new(eigenvalues: Vec<f64>) -> Result<Self> {
        let pos = eigenvalues.iter().any(|&v| v > 0.0);
        let neg = eigenvalues.iter().any(|&v| v < 0.0);
        let zero = eigenvalues.iter().any(|&v| v == 0.0 || !v.is_finite());
        if !pos || !neg || zero {
            return Err(Error::NotHyperbolic(eigenvalues));
        }
        Ok(CriticalSpectrum { eigenvalues })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Distance of the negative spectrum to zero.
    pub fn gamma_u(&self) -> f64 {
        self.eigenvalues
            .iter()
            .filter(|&&v| v < 0.0)
            .map(|&v| -v)
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance of the positive spectrum to zero.
    pub fn gamma_s(&self) -> f64 {
        self.eigenvalues
            .iter()
            .filter(|&&v| v > 0.0)
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest positive eigenvalue.
    pub fn gamma_s_max(&self) -> f64 {
        self.eigenvalues.iter().filter(|&&v| v > 0.0).cloned().fold(0.0, f64::max)
    }

    pub fn clustering_ratio(&self) -> f64 {
        (self.gamma_u() + self.gamma_s()) / self.gamma_s_max()
    }
}

/// The spectral clustering ratio `ν`: the minimum of
/// `(γ_u + γ_s)/Γ_s` over hyperbolic stationary points.
pub fn spectral_nu(spectra: &[CriticalSpectrum]) -> Result<f64> {
    if spectra.is_empty() {
        return Err(Error::DegenerateParameter("no hyperbolic points".into()));
    }
    Ok(spectra
        .iter()
        .map(CriticalSpectrum::clustering_ratio)
        .fold(f64::INFINITY, f64::min))
}

/// Hessian spectra of the trace functional on the projective space of lines:
/// at the `i`-th critical line the eigenvalues are `λ_j - λ_i`, `j ≠ i`.
/// Returns the spectra at the hyperbolic critical points (all but the two
/// extremes).
pub fn projective_space_spectra(lambdas: &[f64]) -> Result<Vec<CriticalSpectrum>> {
    if lambdas.len() < 3 {
        return Err(Error::DegenerateParameter("need at least three eigenvalues".into()));
    }
    let mut sorted = lambdas.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut out = Vec::new();
    for i in 1..sorted.len() - 1 {
        let evs: Vec<f64> = (0..sorted.len())
            .filter(|&j| j != i)
            .map(|j| sorted[j] - sorted[i])
            .collect();
        out.push(CriticalSpectrum::new(evs)?);
    }
    Ok(out)
}

/// One row of the model-flow table: the gap between the fixed tangent line
/// and the drifting plane, the distance to the stationary point, their
/// ratio, and the closed-form prediction.
#[derive(Clone, Debug, Serialize)]
pub struct SivRow {
    pub t: f64,
    pub gap: f64,
    pub dist: f64,
    pub ratio: f64,
    pub model: f64,
}

/// The three-eigenvalue model: along `q_t = (0, 0, e^{-3t})` the plane
/// `span{∂_z, ∂_x + a e^{-2t} ∂_y}` drifts away from `span{∂_x}` like
/// `|a| e^{-2t}`, while the base point approaches the origin like `e^{-3t}`,
/// so the gap-to-distance ratio grows like `e^t`.
pub fn siv_model_demo(a: f64, tgrid: &[f64]) -> Result<Vec<SivRow>> {
    if a == 0.0 {
        return Err(Error::DegenerateParameter("model ratio degenerates at a = 0".into()));
    }
    let u = Subspace::coordinate(3, &[0])?;
    let mut rows = Vec::with_capacity(tgrid.len());
    for &t in tgrid {
        let c = a * (-2.0 * t).exp();
        let v = Subspace::from_columns(3, &[vec![0.0, 0.0, 1.0], vec![1.0, c, 0.0]])?;
        let g = gap(&u, &v)?;
        let dist = (-3.0 * t).exp();
        let model = c.abs() / (1.0 + c * c).sqrt();
        rows.push(SivRow { t, gap: g, dist, ratio: g / dist, model });
    }
    Ok(rows)
}
