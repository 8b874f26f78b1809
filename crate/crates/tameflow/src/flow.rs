//! The canonical flow on an ordered affine simplex and its gluing over a
//! complex with a dynamical orientation.
//!
//! On `[0,1]` the canonical downward flow solves `ẋ = x(x-1)` in closed form.
//! On an ordered simplex `u0 < … < uk` the flow is the iterated cone: the top
//! coordinate follows the scalar flow, the rest follow the flow of their
//! shadow (coordinates rescaled by one minus the top coordinate). Everything
//! else here — limits, Lyapunov values, linearizations, stable/unstable
//! strata, normal slices, asymptotic pair classification — is built on that
//! recursion.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::conley::Orientation;
use crate::{Error, Result};

/// Coordinates below this are treated as having left the carrier.
pub const COORD_CLAMP: f64 = 1e-15;
/// Barycentric coordinates must sum to one within this tolerance.
pub const COORD_SUM_TOL: f64 = 1e-12;
/// Support threshold for classifying numeric limits.
pub const SUPPORT_THRESHOLD: f64 = 1e-6;
/// Band around the support threshold reported as an unresolved tie.
pub const TIE_BAND: f64 = 10.0;

/// Point of a geometric realization: a carrier face and strictly positive
/// barycentric coordinates summing to one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BarycentricPoint {
    carrier: Vec<usize>,
    coords: Vec<f64>,
}

/// JSON wire form with vertex labels instead of indices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointJson {
    pub carrier: Vec<String>,
    pub coords: Vec<f64>,
}

impl BarycentricPoint {
    /// Validates positivity and normalization; sorts the carrier, keeping
    /// coordinates aligned.
    pub fn new(carrier: Vec<usize>, coords: Vec<f64>) -> Result<Self> {
        if carrier.len() != coords.len() || carrier.is_empty() {
            return Err(Error::InvalidPoint("carrier/coordinate length mismatch".into()));
        }
        let mut pairs: Vec<(usize, f64)> =
            carrier.into_iter().zip(coords).collect();
        pairs.sort_by_key(|&(v, _)| v);
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidPoint("repeated carrier vertex".into()));
        }
        if pairs.iter().any(|&(_, c)| c <= 0.0 || !c.is_finite()) {
            return Err(Error::InvalidPoint("coordinates must be strictly positive".into()));
        }
        let sum: f64 = pairs.iter().map(|&(_, c)| c).sum();
        if (sum - 1.0).abs() > COORD_SUM_TOL {
            return Err(Error::InvalidPoint(format!("coordinates sum to {sum}")));
        }
        Ok(BarycentricPoint {
            carrier: pairs.iter().map(|&(v, _)| v).collect(),
            coords: pairs.into_iter().map(|(_, c)| c).collect(),
        })
    }

    /// Drops coordinates below [`COORD_CLAMP`], renormalizes the rest.
    /// Prevents numerical drift from creating phantom support.
    pub fn clamped(carrier: Vec<usize>, coords: Vec<f64>) -> Result<Self> {
        let kept: Vec<(usize, f64)> = carrier
            .into_iter()
            .zip(coords)
            .filter(|&(_, c)| c > COORD_CLAMP)
            .collect();
        if kept.is_empty() {
            return Err(Error::InvalidPoint("all coordinates below clamp".into()));
        }
        let sum: f64 = kept.iter().map(|&(_, c)| c).sum();
        BarycentricPoint::new(
            kept.iter().map(|&(v, _)| v).collect(),
            kept.into_iter().map(|(_, c)| c / sum).collect(),
        )
    }

    pub fn vertex(v: usize) -> Self {
        BarycentricPoint { carrier: vec![v], coords: vec![1.0] }
    }

    pub fn carrier(&self) -> &[usize] {
        &self.carrier
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coord_of(&self, v: usize) -> f64 {
        self.carrier
            .iter()
            .position(|&u| u == v)
            .map_or(0.0, |i| self.coords[i])
    }

    pub fn is_vertex(&self) -> Option<usize> {
        if self.carrier.len() == 1 {
            Some(self.carrier[0])
        } else {
            None
        }
    }

    /// Dense coordinates over `n` ambient vertices.
    pub fn dense(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (&v, &c) in self.carrier.iter().zip(&self.coords) {
            out[v] = c;
        }
        out
    }

    pub fn sup_distance(&self, other: &BarycentricPoint, n: usize) -> f64 {
        let a = self.dense(n);
        let b = other.dense(n);
        a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    pub fn from_json(k: &Complex, json: &PointJson) -> Result<Self> {
        let mut carrier = Vec::with_capacity(json.carrier.len());
        for label in &json.carrier {
            carrier.push(k.vertex_index(label)?);
        }
        BarycentricPoint::new(carrier, json.coords.clone())
    }

    pub fn to_json(&self, k: &Complex) -> PointJson {
        PointJson {
            carrier: self.carrier.iter().map(|&v| k.vertices()[v].clone()).collect(),
            coords: self.coords.clone(),
        }
    }
}

/// A carrier face listed in ascending flow order: the first vertex is the
/// sink, the last the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedCarrier {
    vertices: Vec<usize>,
}

impl OrderedCarrier {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        let mut seen = vertices.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) || vertices.is_empty() {
            return Err(Error::CarrierMismatch);
        }
        Ok(OrderedCarrier { vertices })
    }

    /// The face's vertices ordered by the orientation, sink first.
    pub fn from_orientation(orient: &Orientation, face: &[usize]) -> Result<Self> {
        let order = orient.face_order(face);
        // the order must be consistent: each later vertex points at all earlier
        for (i, &u) in order.iter().enumerate() {
            for &w in &order[..i] {
                if !orient.points_to(u, w) {
                    return Err(Error::CarrierMismatch);
                }
            }
        }
        OrderedCarrier { vertices: order }.validated()
    }

    fn validated(self) -> Result<Self> {
        OrderedCarrier::new(self.vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn sink(&self) -> usize {
        self.vertices[0]
    }

    pub fn source(&self) -> usize {
        *self.vertices.last().expect("nonempty")
    }
}

/// Closed-form solution of `ẋ = x(x-1)` on `[0,1]`, evaluated in the
/// overflow-safe form for either sign of `t`.
pub fn scalar_flow(a: f64, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) || a.is_nan() {
        return Err(Error::ScalarOutOfRange(a));
    }
    if !t.is_finite() {
        return Err(Error::DegenerateParameter("nonfinite time".into()));
    }
    if a == 0.0 || a == 1.0 {
        return Ok(a);
    }
    if t >= 0.0 {
        let e = (-t).exp();
        Ok(e * a / ((1.0 - a) + e * a))
    } else {
        let e = t.exp();
        Ok(a / (e * (1.0 - a) + a))
    }
}

/// The iterated-cone flow on coordinates listed in ascending flow order
/// (`coords[0]` belongs to the sink). Returns coordinates in the same order.
pub fn ordered_simplex_flow(coords: &[f64], t: f64) -> Result<Vec<f64>> {
    let k = coords.len();
    if k == 0 {
        return Err(Error::InvalidPoint("empty coordinate list".into()));
    }
    if k == 1 {
        return Ok(vec![1.0]);
    }
    let a = coords[k - 1];
    if a >= 1.0 - COORD_CLAMP {
        // the point is the source vertex
        let mut out = vec![0.0; k];
        out[k - 1] = 1.0;
        return Ok(out);
    }
    let x = scalar_flow(a.clamp(0.0, 1.0), t)?;
    let rest = 1.0 - a;
    let shadow: Vec<f64> = coords[..k - 1].iter().map(|c| c / rest).collect();
    let sub = ordered_simplex_flow(&shadow, t)?;
    let mut out: Vec<f64> = sub.into_iter().map(|s| (1.0 - x) * s).collect();
    out.push(x);
    Ok(out)
}

/// Flows a point along its carrier with the supplied vertex order.
pub fn simplex_flow(p: &BarycentricPoint, order: &OrderedCarrier, t: f64) -> Result<BarycentricPoint> {
    let mut sorted = order.vertices().to_vec();
    sorted.sort_unstable();
    if sorted != p.carrier() {
        return Err(Error::CarrierMismatch);
    }
    let coords: Vec<f64> = order.vertices().iter().map(|&v| p.coord_of(v)).collect();
    let flowed = ordered_simplex_flow(&coords, t)?;
    BarycentricPoint::clamped(order.vertices().to_vec(), flowed)
}

/// Flows a point of `|K|`: the carrier face is ordered by the orientation and
/// flowed in place. Restriction to faces and cofaces is automatic, so results
/// agree across overlapping faces.
pub fn complex_flow(
    k: &Complex,
    orient: &Orientation,
    p: &BarycentricPoint,
    t: f64,
) -> Result<BarycentricPoint> {
    if !k.contains_face(p.carrier()) {
        return Err(Error::FaceNotInComplex(k.labels_of(p.carrier())));
    }
    let order = OrderedCarrier::from_orientation(orient, p.carrier())?;
    simplex_flow(p, &order, t)
}

/// Affine evaluation of a vertex potential; errors when the potential is not
/// injective on the carrier.
pub fn lyapunov_value(p: &BarycentricPoint, lambda: &[f64]) -> Result<f64> {
    for (i, &u) in p.carrier().iter().enumerate() {
        for &v in &p.carrier()[i + 1..] {
            if lambda[u] == lambda[v] {
                return Err(Error::NotInjective("lambda".into()));
            }
        }
    }
    Ok(p.carrier()
        .iter()
        .zip(p.coords())
        .map(|(&v, &c)| lambda[v] * c)
        .sum())
}

/// Forward and backward limits: the `⇝`-minimal and `⇝`-maximal vertices of
/// the carrier.
pub fn flow_limits(
    k: &Complex,
    orient: &Orientation,
    p: &BarycentricPoint,
) -> Result<(usize, usize)> {
    if !k.contains_face(p.carrier()) {
        return Err(Error::FaceNotInComplex(k.labels_of(p.carrier())));
    }
    let order = OrderedCarrier::from_orientation(orient, p.carrier())?;
    Ok((order.sink(), order.source()))
}

/// Finite-difference linearization of the time-`t` map at a stationary
/// vertex, in the linear coordinates of a maximal carrier face.
#[derive(Clone, Debug)]
pub struct Linearization {
    /// The maximal face used (largest dimension, first in canonical order).
    pub face: Vec<usize>,
    /// `⇝`-rank of the vertex within the face (0 = sink).
    pub rank: usize,
    pub jacobian: DMatrix<f64>,
    /// Real parts of the eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Largest imaginary part encountered, as a diagnostic.
    pub max_imag: f64,
}

pub fn vertex_linearization(
    k: &Complex,
    orient: &Orientation,
    v: usize,
    t: f64,
    h: f64,
) -> Result<Linearization> {
    if v >= k.vertices().len() {
        return Err(Error::UnknownVertex(format!("#{v}")));
    }
    let face = k
        .facets()
        .into_iter()
        .filter(|f| f.contains(&v))
        .max_by_key(|f| f.len())
        .ok_or_else(|| Error::UnknownVertex(format!("#{v} lies in no face")))?;
    let order = OrderedCarrier::from_orientation(orient, &face)?;
    let rank = order
        .vertices()
        .iter()
        .position(|&u| u == v)
        .expect("vertex lies in its face");
    let others: Vec<usize> =
        order.vertices().iter().copied().filter(|&u| u != v).collect();
    let n = others.len();
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for (j, &u) in others.iter().enumerate() {
        // move distance h along the edge [v, u]; the edge is flow invariant
        let p = BarycentricPoint::new(vec![v, u], vec![1.0 - h, h])?;
        let q = complex_flow(k, orient, &p, t)?;
        for (i, &w) in others.iter().enumerate() {
            jac[(i, j)] = q.coord_of(w) / h;
        }
    }
    let eigs = jac.clone().complex_eigenvalues();
    let mut eigenvalues: Vec<f64> = eigs.iter().map(|c| c.re).collect();
    let max_imag = eigs.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    Ok(Linearization { face, rank, jacobian: jac, eigenvalues, max_imag })
}

/// Product flow: componentwise evaluation on each factor.
pub fn product_flow(
    pa: &BarycentricPoint,
    order_a: &OrderedCarrier,
    pb: &BarycentricPoint,
    order_b: &OrderedCarrier,
    t: f64,
) -> Result<(BarycentricPoint, BarycentricPoint)> {
    Ok((simplex_flow(pa, order_a, t)?, simplex_flow(pb, order_b, t)?))
}

// ---------------------------------------------------------------------------
// the standard ordered simplex Δ_m (vertices 0..m, index order)
// ---------------------------------------------------------------------------

/// Flows dense coordinates on the standard simplex along their support face.
pub fn standard_flow(dense: &[f64], t: f64) -> Result<Vec<f64>> {
    let support: Vec<usize> = dense
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0.0)
        .map(|(i, _)| i)
        .collect();
    if support.is_empty() {
        return Err(Error::InvalidPoint("zero vector".into()));
    }
    let coords: Vec<f64> = support.iter().map(|&i| dense[i]).collect();
    let flowed = ordered_simplex_flow(&coords, t)?;
    let mut out = vec![0.0; dense.len()];
    for (&i, &c) in support.iter().zip(&flowed) {
        out[i] = if c > COORD_CLAMP { c } else { 0.0 };
    }
    let sum: f64 = out.iter().sum();
    for c in &mut out {
        *c /= sum;
    }
    Ok(out)
}

/// Conservation of parallelism on the standard simplex: two interior points
/// with the same top coordinate keep equal top coordinates under the flow,
/// and the flowed chord stays parallel to the chord of the projections from
/// the top vertex (the slice through the flowed points maps to its shadow by
/// a dilation).
pub fn parallelism_check(p: &[f64], q: &[f64], t: f64) -> Result<bool> {
    let m1 = p.len();
    if q.len() != m1 || m1 < 2 {
        return Err(Error::InvalidPoint("dimension mismatch".into()));
    }
    if p.iter().chain(q).any(|&c| c <= 0.0) {
        return Err(Error::InvalidPoint("points must be interior".into()));
    }
    if (p[m1 - 1] - q[m1 - 1]).abs() > COORD_SUM_TOL {
        return Err(Error::InvalidPoint("unequal top coordinates".into()));
    }
    let fp = standard_flow(p, t)?;
    let fq = standard_flow(q, t)?;
    if (fp[m1 - 1] - fq[m1 - 1]).abs() > 1e-9 {
        return Ok(false);
    }
    let chord: Vec<f64> = fp.iter().zip(&fq).map(|(a, b)| b - a).collect();
    let shadow = |x: &[f64]| -> Vec<f64> {
        let top = x[m1 - 1];
        x[..m1 - 1].iter().map(|c| c / (1.0 - top)).collect()
    };
    let mut projected: Vec<f64> = shadow(&fp)
        .iter()
        .zip(&shadow(&fq))
        .map(|(a, b)| b - a)
        .collect();
    projected.push(0.0);
    Ok(is_parallel(&chord, &projected, 1e-7))
}

fn is_parallel(a: &[f64], b: &[f64], tol: f64) -> bool {
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return true;
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let lambda = dot / (nb * nb);
    let resid: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - lambda * y).powi(2))
        .sum::<f64>()
        .sqrt();
    resid <= tol * na.max(1e-300)
}

/// Which stratum: stable (`W⁺`, forward limit) or unstable (`W⁻`, backward).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StratumKind {
    Stable,
    Unstable,
}

/// Stable/unstable stratum of a vertex on the standard simplex, by support:
/// `W⁺_k = {t_i = 0 ∀ i<k, t_k > 0}` (forward limit `e_k`) and
/// `W⁻_k = {t_j = 0 ∀ j>k, t_k > 0}` (backward limit `e_k`).
#[derive(Clone, Debug, Serialize)]
pub struct StratumDescription {
    pub kind: StratumKind,
    pub vertex: usize,
    pub ambient_dim: usize,
    pub zero_coords: Vec<usize>,
    pub dim: usize,
}

impl StratumDescription {
    pub fn contains(&self, dense: &[f64], tol: f64) -> bool {
        dense.len() == self.ambient_dim + 1
            && self.zero_coords.iter().all(|&i| dense[i].abs() <= tol)
            && dense[self.vertex] > tol
    }

    pub fn description(&self) -> String {
        let zeros: Vec<String> =
            self.zero_coords.iter().map(|i| format!("t_{i} = 0")).collect();
        if zeros.is_empty() {
            format!("{{t_{} > 0}}", self.vertex)
        } else {
            format!("{{{}, t_{} > 0}}", zeros.join(", "), self.vertex)
        }
    }
}

/// The stable and unstable strata of `e_k` in the standard `m`-simplex.
pub fn wpm_faces(m: usize, k: usize) -> Result<(StratumDescription, StratumDescription)> {
    if k > m {
        return Err(Error::IndexOutOfRange(k, m));
    }
    let plus = StratumDescription {
        kind: StratumKind::Stable,
        vertex: k,
        ambient_dim: m,
        zero_coords: (0..k).collect(),
        dim: m - k,
    };
    let minus = StratumDescription {
        kind: StratumKind::Unstable,
        vertex: k,
        ambient_dim: m,
        zero_coords: (k + 1..=m).collect(),
        dim: k,
    };
    Ok((plus, minus))
}

/// The point where the normal slice through `(w₊, w₋)` meets the graph of the
/// time-`t` map, with `e_k` as origin: `y = Φ_t(w₊) + w₋ - e_k`, `x = Φ_{-t}(y)`.
///
/// The round trip loses accuracy once the backward point's smallest
/// coordinate (of order `e^{-mt}`) underflows [`COORD_CLAMP`]: usable times
/// satisfy roughly `m·t < 31`.
#[derive(Clone, Debug, Serialize)]
pub struct SliceIntersection {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Sup-norm distance between `Φ_t(x)` and `y`.
    pub roundtrip_residual: f64,
}

pub fn normal_slice_intersection(
    w_plus: &[f64],
    w_minus: &[f64],
    k: usize,
    t: f64,
) -> Result<SliceIntersection> {
    let m = w_plus.len() - 1;
    validate_stratum_interior(w_plus, k, StratumKind::Stable)?;
    validate_stratum_interior(w_minus, k, StratumKind::Unstable)?;
    let wpt = standard_flow(w_plus, t)?;
    let mut y = vec![0.0; m + 1];
    for (i, slot) in y.iter_mut().enumerate() {
        *slot = match i.cmp(&k) {
            std::cmp::Ordering::Less => w_minus[i],
            std::cmp::Ordering::Equal => wpt[k] + w_minus[k] - 1.0,
            std::cmp::Ordering::Greater => wpt[i],
        };
    }
    if y[k] <= 0.0 {
        return Err(Error::SliceBelowThreshold { t });
    }
    let x = standard_flow(&y, -t)?;
    let fx = standard_flow(&x, t)?;
    let roundtrip_residual = fx
        .iter()
        .zip(&y)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(SliceIntersection { x, y, roundtrip_residual })
}

fn validate_stratum_interior(dense: &[f64], k: usize, kind: StratumKind) -> Result<()> {
    let m = dense.len() - 1;
    if k > m {
        return Err(Error::IndexOutOfRange(k, m));
    }
    let sum: f64 = dense.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidPoint(format!("coordinates sum to {sum}")));
    }
    let allowed = |i: usize| match kind {
        StratumKind::Stable => i >= k,
        StratumKind::Unstable => i <= k,
    };
    if dense[k] <= 0.0 {
        return Err(Error::InvalidPoint(format!("coordinate {k} must be positive")));
    }
    for (i, &c) in dense.iter().enumerate() {
        if !allowed(i) && c.abs() > COORD_SUM_TOL {
            return Err(Error::InvalidPoint(format!("coordinate {i} must vanish")));
        }
        if c < -COORD_SUM_TOL {
            return Err(Error::InvalidPoint(format!("coordinate {i} is negative")));
        }
    }
    Ok(())
}

/// Smallest time (up to bisection accuracy) after which the normal slice
/// through `(w₊, w₋)` meets the graph; found by doubling then bisection on
/// validity of `y ∈ Δ_m`.
pub fn slice_threshold(w_plus: &[f64], w_minus: &[f64], k: usize) -> Result<f64> {
    let valid = |t: f64| -> Result<bool> {
        match normal_slice_intersection(w_plus, w_minus, k, t) {
            Ok(_) => Ok(true),
            Err(Error::SliceBelowThreshold { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    };
    let mut hi = 1.0;
    while !valid(hi)? {
        hi *= 2.0;
        if hi > 1024.0 {
            return Err(Error::DegenerateParameter("no valid slice time below 1024".into()));
        }
    }
    let mut lo = if hi == 1.0 { -64.0 } else { hi / 2.0 };
    if valid(lo)? {
        // already valid far in the past; report the probe as an upper bound
        return Ok(lo);
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if valid(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Histogram entry of classified limit pairs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClassCount {
    /// Stable-stratum index of the first limit (forward class of `x∞`).
    pub l: usize,
    /// Unstable-stratum index of the second limit (backward class of `y∞`).
    pub k: usize,
    pub count: usize,
}

/// Outcome of sampling pair limits `(x, Φ_T x)` along paths approaching the
/// limit graph.
#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticReport {
    pub ambient_dim: usize,
    pub samples: usize,
    pub time: f64,
    pub seed: u64,
    pub histogram: Vec<ClassCount>,
    /// Samples classified with `l < k`; the support rule predicts zero.
    pub violations: usize,
    /// Samples with a coordinate inside the tie band around the support
    /// threshold: reported, not resolved.
    pub ties: usize,
}

/// Samples `count` pairs on the standard `m`-simplex: a base point on a
/// random stratum, nudged toward a random superstratum by a vanishing amount,
/// flowed for time `T`. The limit pair is classified by support: `l` is the
/// minimal support index of the base, `k` the maximal thresholded support
/// index of the flowed point.
pub fn asymptotic_pair_sample(
    m: usize,
    count: usize,
    time: f64,
    seed: u64,
) -> Result<AsymptoticReport> {
    if time < 20.0 {
        return Err(Error::DegenerateParameter("need T >= 20 for limit classification".into()));
    }
    if count == 0 || m == 0 {
        return Err(Error::DegenerateParameter("need at least one sample and m >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut histogram: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut violations = 0usize;
    let mut ties = 0usize;

    for _ in 0..count {
        let base_mask: u64 = rng.gen_range(1..(1u64 << (m + 1)));
        let base: Vec<usize> = (0..=m).filter(|i| base_mask >> i & 1 == 1).collect();
        let mut extended = base.clone();
        for i in 0..=m {
            if !extended.contains(&i) && rng.gen_bool(0.5) {
                extended.push(i);
            }
        }
        extended.sort_unstable();

        let p = random_interior(&mut rng, &base, m);
        let q = random_interior(&mut rng, &extended, m);
        // approach rates spread over eleven decades: fast approaches keep the
        // pair near (p, flow of p), slow ones let the flow escape to deeper
        // strata before the base point settles
        let eta = 10f64.powf(-rng.gen_range(1.0..12.0));
        let x: Vec<f64> = p
            .iter()
            .zip(&q)
            .map(|(a, b)| (1.0 - eta) * a + eta * b)
            .collect();

        let y = standard_flow(&x, time)?;
        let l = *base.first().expect("nonempty");
        let k = y
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > SUPPORT_THRESHOLD)
            .map(|(i, _)| i)
            .max()
            .expect("flowed point has support");
        if y.iter().any(|&c| {
            c > SUPPORT_THRESHOLD / TIE_BAND && c < SUPPORT_THRESHOLD * TIE_BAND
        }) {
            ties += 1;
        }
        if l < k {
            violations += 1;
        }
        *histogram.entry((l, k)).or_insert(0) += 1;
    }

    Ok(AsymptoticReport {
        ambient_dim: m,
        samples: count,
        time,
        seed,
        histogram: histogram
            .into_iter()
            .map(|((l, k), count)| ClassCount { l, k, count })
            .collect(),
        violations,
        ties,
    })
}

/// Interior point of the face spanned by `support`: coordinates uniform in
/// `[0.2, 1]`, normalized, so every coordinate is bounded below by
/// `0.2 / (m+1)` and limit classification has safe margins.
fn random_interior(rng: &mut ChaCha8Rng, support: &[usize], m: usize) -> Vec<f64> {
    let mut out = vec![0.0; m + 1];
    let mut sum = 0.0;
    for &i in support {
        let c = rng.gen_range(0.2..1.0);
        out[i] = c;
        sum += c;
    }
    for c in &mut out {
        *c /= sum;
    }
    out
}
