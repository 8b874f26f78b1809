//! Dynamical orientations, unstable links, and Morse data of simplicial flows.
//!
//! A dynamical orientation totally orders the vertices of every face; the
//! induced flow has the vertices as stationary points, and the Morse
//! polynomial of a vertex is `t` times the reduced Poincaré polynomial of its
//! unstable link (`1` at minima). Summing over vertices gives the left side
//! of the Morse inequalities, certified through the `(1+t)` order.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::homology::{poincare_polynomial, poly_succeq, PolyZ};
use crate::{Error, Result};

/// Edge relation `u ⇝ v` restricting to a strict total order on every face.
/// `u ⇝ v` points from larger to smaller: trajectories leave `u` toward `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    edges: BTreeSet<(usize, usize)>,
    num_vertices: usize,
}

/// JSON wire form: `{"edges":[["u","v"],...]}` with `["u","v"]` meaning
/// `u ⇝ v`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrientationJson {
    pub edges: Vec<(String, String)>,
}

impl Orientation {
    /// Validates that every directed pair sits on a 1-face and that the
    /// restriction to each face is a strict total order (every pair decided
    /// exactly once, no cycles).
    pub fn new(k: &Complex, edges: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if !k.contains_face(&[u, v]) || u == v {
                return Err(Error::InvalidOrientation {
                    face: k.labels_of(&[u, v]),
                    reason: "directed pair is not a 1-face".into(),
                });
            }
            if set.contains(&(v, u)) {
                return Err(Error::InvalidOrientation {
                    face: k.labels_of(&[u, v]),
                    reason: "edge oriented both ways".into(),
                });
            }
            set.insert((u, v));
        }
        let orient = Orientation { edges: set, num_vertices: k.vertices().len() };
        for facet in k.facets() {
            orient.check_total_on(k, &facet)?;
        }
        Ok(orient)
    }

    pub fn from_json(k: &Complex, json: &OrientationJson) -> Result<Self> {
        let mut edges = Vec::with_capacity(json.edges.len());
        for (u, v) in &json.edges {
            edges.push((k.vertex_index(u)?, k.vertex_index(v)?));
        }
        Orientation::new(k, &edges)
    }

    pub fn to_json(&self, k: &Complex) -> OrientationJson {
        OrientationJson {
            edges: self
                .edges
                .iter()
                .map(|&(u, v)| (k.vertices()[u].clone(), k.vertices()[v].clone()))
                .collect(),
        }
    }

    /// Orientation induced by an injective vertex function:
    /// `x ⇝ y` iff `f(x) > f(y)` and `{x,y}` is a face.
    pub fn from_vertex_function(k: &Complex, f: &[f64]) -> Result<Self> {
        let mut edges = Vec::new();
        for face in k.faces_of_dim(1) {
            let (u, v) = (face[0], face[1]);
            if f[u] == f[v] {
                return Err(Error::NotInjective("vertex function".into()));
            }
            if f[u] > f[v] {
                edges.push((u, v));
            } else {
                edges.push((v, u));
            }
        }
        Orientation::new(k, &edges)
    }

    fn check_total_on(&self, k: &Complex, face: &[usize]) -> Result<()> {
        for (i, &u) in face.iter().enumerate() {
            for &v in &face[i + 1..] {
                let fwd = self.edges.contains(&(u, v));
                let bwd = self.edges.contains(&(v, u));
                if fwd == bwd {
                    return Err(Error::InvalidOrientation {
                        face: k.labels_of(face),
                        reason: format!(
                            "pair ({}, {}) is {}",
                            k.vertices()[u],
                            k.vertices()[v],
                            if fwd { "oriented both ways" } else { "undecided" }
                        ),
                    });
                }
            }
        }
        // a tournament is a total order exactly when its out-degree sequence
        // is 0, 1, …, n-1
        let mut degs: Vec<usize> = face
            .iter()
            .map(|&u| face.iter().filter(|&&v| self.edges.contains(&(u, v))).count())
            .collect();
        degs.sort_unstable();
        if degs.iter().enumerate().any(|(i, &d)| d != i) {
            return Err(Error::InvalidOrientation {
                face: k.labels_of(face),
                reason: "cyclic on this face".into(),
            });
        }
        Ok(())
    }

    pub fn points_to(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    /// All edges reversed; swaps stable and unstable links.
    pub fn reversed(&self) -> Orientation {
        Orientation {
            edges: self.edges.iter().map(|&(u, v)| (v, u)).collect(),
            num_vertices: self.num_vertices,
        }
    }

    /// Vertices strictly `⇝`-below `v` (where trajectories from `v` go).
    pub fn downward(&self, v: usize) -> BTreeSet<usize> {
        self.edges.iter().filter(|&&(a, _)| a == v).map(|&(_, b)| b).collect()
    }

    /// Vertices strictly `⇝`-above `v`.
    pub fn upward(&self, v: usize) -> BTreeSet<usize> {
        self.edges.iter().filter(|&&(_, b)| b == v).map(|&(a, _)| a).collect()
    }

    /// The face's vertices in ascending flow order: the sink first, then by
    /// how many face vertices each one dominates.
    pub fn face_order(&self, face: &[usize]) -> Vec<usize> {
        let mut order = face.to_vec();
        order.sort_by_key(|&u| {
            face.iter().filter(|&&v| self.edges.contains(&(u, v))).count()
        });
        order
    }
}

/// Certified contractibility of a complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Contractibility {
    Contractible,
    NotContractible,
    Unknown,
}

/// Three-valued regularity verdict for a stationary point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Regular,
    Critical,
    Unknown,
}

/// Tiered contractibility check: certify via a combinatorial cone or greedy
/// free-face collapses, refute via nontrivial reduced rational homology, and
/// return `Unknown` for the residual gap.
pub fn contractibility_verdict(k: &Complex) -> Contractibility {
    if k.is_empty() {
        return Contractibility::NotContractible;
    }
    if is_combinatorial_cone(k) || greedy_collapsible(k) {
        return Contractibility::Contractible;
    }
    let reduced = poincare_polynomial(k, true).expect("nonempty");
    if !reduced.is_zero() {
        return Contractibility::NotContractible;
    }
    Contractibility::Unknown
}

/// A vertex joined to every face of the complex.
fn is_combinatorial_cone(k: &Complex) -> bool {
    (0..k.vertices().len()).any(|w| {
        k.faces().all(|f| {
            let mut g = f.clone();
            if !g.contains(&w) {
                g.push(w);
                g.sort_unstable();
            }
            k.contains_face(&g)
        })
    })
}

/// Greedy elementary collapses in deterministic face order; `true` when the
/// complex shrinks to a single vertex.
fn greedy_collapsible(k: &Complex) -> bool {
    let mut faces: BTreeSet<Vec<usize>> = k.faces().cloned().collect();
    loop {
        let mut free: Option<(Vec<usize>, Vec<usize>)> = None;
        'outer: for f in &faces {
            let mut supersets = faces.iter().filter(|g| is_proper_superset(g, f));
            if let (Some(g), None) = (supersets.next(), supersets.next()) {
                free = Some((f.clone(), g.clone()));
                break 'outer;
            }
        }
        match free {
            Some((f, g)) => {
                faces.remove(&f);
                faces.remove(&g);
            }
            None => return faces.len() == 1 && faces.iter().next().unwrap().len() == 1,
        }
    }
}

fn is_proper_superset(g: &[usize], f: &[usize]) -> bool {
    g.len() > f.len() && {
        let mut it = g.iter();
        f.iter().all(|x| it.any(|y| y == x))
    }
}

/// The unstable combinatorial link of `v`: faces spanned by the strictly
/// `⇝`-smaller neighbors of `v`.
///
/// With `star_restricted` (the default for all Morse computations) a face `A`
/// is kept only when `A ∪ {v}` is itself a face; this matches the dynamically
/// computed Conley index on sources of the circle, where the literal full
/// subcomplex would be contractible. The literal variant coincides with it on
/// poset nerves, where comparability makes `A ∪ {v}` automatic.
pub fn unstable_link(
    k: &Complex,
    orient: &Orientation,
    v: usize,
    star_restricted: bool,
) -> Result<Complex> {
    if v >= k.vertices().len() {
        return Err(Error::UnknownVertex(format!("#{v}")));
    }
    let down = orient.downward(v);
    let faces: BTreeSet<Vec<usize>> = k
        .faces()
        .filter(|f| f.iter().all(|u| down.contains(u)))
        .filter(|f| {
            if !star_restricted {
                return true;
            }
            let mut g = (*f).clone();
            g.push(v);
            g.sort_unstable();
            k.contains_face(&g)
        })
        .cloned()
        .collect();
    Ok(k.subcomplex_from_faces(faces))
}

/// The stable link: the unstable link of the reversed orientation.
pub fn stable_link(
    k: &Complex,
    orient: &Orientation,
    v: usize,
    star_restricted: bool,
) -> Result<Complex> {
    unstable_link(k, &orient.reversed(), v, star_restricted)
}

/// Morse polynomial of a stationary vertex: `1` for an empty unstable link,
/// otherwise `t` times the link's reduced Poincaré polynomial.
pub fn morse_polynomial(k: &Complex, orient: &Orientation, v: usize) -> Result<PolyZ> {
    let link = unstable_link(k, orient, v, true)?;
    if link.is_empty() {
        return Ok(PolyZ::one());
    }
    Ok(poincare_polynomial(&link, true)?.shift(1))
}

/// Per-vertex stationary-point data.
#[derive(Clone, Debug, Serialize)]
pub struct StationaryReport {
    pub vertex: String,
    pub unstable_link_f_vector: Vec<usize>,
    pub morse_polynomial: PolyZ,
    pub verdict: Verdict,
}

/// Morse inequalities of a simplicial flow.
#[derive(Clone, Debug, Serialize)]
pub struct ConleyReport {
    pub per_vertex: Vec<StationaryReport>,
    pub morse_sum: PolyZ,
    pub space_poly: PolyZ,
    /// `Q` with nonnegative coefficients certifying `morse_sum ⪰ space_poly`;
    /// `None` marks a falsification of the implementation.
    pub certificate: Option<PolyZ>,
    pub star_restricted_links: bool,
}

impl ConleyReport {
    pub fn falsified(&self) -> bool {
        self.certificate.is_none()
    }
}

/// Computes every vertex's Morse polynomial, their sum, the space polynomial
/// and the `⪰` certificate. A missing certificate is reported, never hidden.
pub fn morse_inequalities(k: &Complex, orient: &Orientation) -> Result<ConleyReport> {
    let mut per_vertex = Vec::with_capacity(k.vertices().len());
    let mut sum = PolyZ::zero();
    for v in 0..k.vertices().len() {
        let link = unstable_link(k, orient, v, true)?;
        let poly = if link.is_empty() {
            PolyZ::one()
        } else {
            poincare_polynomial(&link, true)?.shift(1)
        };
        let verdict = if link.is_empty() {
            Verdict::Critical
        } else {
            match contractibility_verdict(&link) {
                Contractibility::Contractible => Verdict::Regular,
                Contractibility::NotContractible => Verdict::Critical,
                Contractibility::Unknown => Verdict::Unknown,
            }
        };
        sum = sum.add(&poly);
        per_vertex.push(StationaryReport {
            vertex: k.vertices()[v].clone(),
            unstable_link_f_vector: link.f_vector(),
            morse_polynomial: poly,
            verdict,
        });
    }
    let space_poly = poincare_polynomial(k, false)?;
    let certificate = poly_succeq(&sum, &space_poly);
    Ok(ConleyReport {
        per_vertex,
        morse_sum: sum,
        space_poly,
        certificate,
        star_restricted_links: true,
    })
}

/// The subdivision flow induced by face dimension: on `DK`, barycenters point
/// from larger faces to smaller ones. Stationary points are all barycenters;
/// the unstable variety of `b_S` is the open face spanned by `S`.
pub fn stiefel_orientation(k: &Complex) -> Result<(Complex, Orientation)> {
    if k.is_empty() {
        return Err(Error::DegenerateParameter("subdivision flow of the empty complex".into()));
    }
    let dk = k.barycentric_subdivision(1);
    // DK's vertex i corresponds to the i-th face of K in canonical order
    let faces: Vec<&Vec<usize>> = k.faces().collect();
    let mut edges = Vec::new();
    for (i, f) in faces.iter().enumerate() {
        for (j, g) in faces.iter().enumerate() {
            if f.len() > g.len() && contains_all(f, g) {
                edges.push((i, j));
            }
        }
    }
    let orient = Orientation::new(&dk, &edges)?;
    Ok((dk, orient))
}

fn contains_all(f: &[usize], g: &[usize]) -> bool {
    g.iter().all(|x| f.contains(x))
}

/// Rewrites a point of `|K|` (dense coordinates over `K`'s vertices) in the
/// barycentric coordinates of the first subdivision: the carrier is the
/// chain of partial supports in descending-coordinate order, and the weight
/// of the `i`-th chain element is `i` times the coordinate drop after it.
pub fn subdivision_coordinates(
    k: &Complex,
    dense: &[f64],
) -> Result<crate::flow::BarycentricPoint> {
    if dense.len() != k.vertices().len() {
        return Err(Error::InvalidPoint("coordinate length mismatch".into()));
    }
    let mut support: Vec<usize> = dense
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0.0)
        .map(|(i, _)| i)
        .collect();
    if support.is_empty() {
        return Err(Error::InvalidPoint("zero vector".into()));
    }
    support.sort_by(|&a, &b| dense[b].partial_cmp(&dense[a]).expect("finite"));
    let faces: Vec<&Vec<usize>> = k.faces().collect();
    let mut carrier = Vec::new();
    let mut coords = Vec::new();
    for i in 1..=support.len() {
        let here = dense[support[i - 1]];
        let next = if i < support.len() { dense[support[i]] } else { 0.0 };
        let weight = i as f64 * (here - next);
        if weight <= 0.0 {
            continue; // tied coordinates select a lower-dimensional chain
        }
        let mut prefix: Vec<usize> = support[..i].to_vec();
        prefix.sort_unstable();
        let vertex = faces
            .iter()
            .position(|f| **f == prefix)
            .ok_or_else(|| Error::FaceNotInComplex(k.labels_of(&prefix)))?;
        carrier.push(vertex);
        coords.push(weight);
    }
    crate::flow::BarycentricPoint::new(carrier, coords)
}

/// The normal star of a face `S`: the subcomplex of `DK` spanned by the
/// barycenters of the faces containing `S`. For a facet this is a point.
pub fn normal_star(k: &Complex, face: &[usize]) -> Result<Complex> {
    let mut s = face.to_vec();
    s.sort_unstable();
    if !k.contains_face(&s) {
        return Err(Error::FaceNotInComplex(k.labels_of(&s)));
    }
    let dk = k.barycentric_subdivision(1);
    let selected: BTreeSet<usize> = k
        .faces()
        .enumerate()
        .filter(|(_, f)| contains_all(f, &s))
        .map(|(i, _)| i)
        .collect();
    Ok(dk.spanned_subcomplex(&selected))
}

/// Builds the JSON-facing summary used by the command-line report.
#[derive(Clone, Debug, Serialize)]
pub struct ConleyReportJson {
    pub per_vertex: Vec<StationaryVertexJson>,
    pub morse_sum: PolyZ,
    pub morse_sum_display: String,
    pub space_poly: PolyZ,
    pub space_poly_display: String,
    pub certificate: Option<PolyZ>,
    pub certificate_display: Option<String>,
    pub falsified: bool,
    pub star_restricted_links: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StationaryVertexJson {
    pub vertex: String,
    pub unstable_link_f_vector: Vec<usize>,
    pub morse_polynomial: PolyZ,
    pub verdict: Verdict,
}

impl ConleyReport {
    pub fn to_json(&self) -> ConleyReportJson {
        ConleyReportJson {
            per_vertex: self
                .per_vertex
                .iter()
                .map(|r| StationaryVertexJson {
                    vertex: r.vertex.clone(),
                    unstable_link_f_vector: r.unstable_link_f_vector.clone(),
                    morse_polynomial: r.morse_polynomial.clone(),
                    verdict: r.verdict,
                })
                .collect(),
            morse_sum: self.morse_sum.clone(),
            morse_sum_display: self.morse_sum.to_string(),
            space_poly: self.space_poly.clone(),
            space_poly_display: self.space_poly.to_string(),
            certificate: self.certificate.clone(),
            certificate_display: self.certificate.as_ref().map(|q| q.to_string()),
            falsified: self.falsified(),
            star_restricted_links: self.star_restricted_links,
        }
    }
}

/// Convenience: the standard ascending order `v0 ⇝ … ⇝ vk` reversed, i.e.
/// every later vertex points at every earlier one.
pub fn descending_order_edges(k: &Complex) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for face in k.faces_of_dim(1) {
        edges.push((face[1], face[0]));
    }
    edges
}
