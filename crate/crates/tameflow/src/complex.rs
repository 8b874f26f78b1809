//! Finite combinatorial simplicial complexes.
//!
//! A complex is a finite, downward-closed family of nonempty vertex sets.
//! Faces are stored as sorted index lists into an ordered vertex table, and
//! the face family lives in a `BTreeSet`, so every construction here is
//! deterministic: the same input always produces byte-identical output.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::poset_morse::Poset;
use crate::{Error, Result};

/// A finite combinatorial simplicial complex.
///
/// Invariants maintained by every constructor:
/// * every nonempty subset of a face is a face (downward closure);
/// * every vertex index appearing in a face points into the vertex table;
/// * faces are sorted index lists, stored without duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    vertices: Vec<String>,
    faces: BTreeSet<Vec<usize>>,
}

/// JSON wire form: `{"vertices":[...],"facets":[[...],...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertices: Vec<String>,
    pub facets: Vec<Vec<String>>,
}

impl Complex {
    /// The empty complex: no vertices, no faces.
    pub fn empty() -> Self {
        Complex { vertices: Vec::new(), faces: BTreeSet::new() }
    }

    /// A single point.
    pub fn point(label: &str) -> Self {
        Complex {
            vertices: vec![label.to_string()],
            faces: BTreeSet::from([vec![0]]),
        }
    }

    /// The two-point complex `{{N},{S}}`.
    pub fn two_points(a: &str, b: &str) -> Self {
        Complex {
            vertices: vec![a.to_string(), b.to_string()],
            faces: BTreeSet::from([vec![0], vec![1]]),
        }
    }

    /// The full simplex on the given labels (all nonempty subsets).
    pub fn simplex(labels: &[&str]) -> Self {
        let vertices: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let facet: Vec<String> = vertices.clone();
        Complex::from_facets(vertices.clone(), &[facet]).expect("simplex facet is valid")
    }

    /// The boundary of the simplex on the given labels.
    pub fn simplex_boundary(labels: &[&str]) -> Self {
        let vertices: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let mut facets = Vec::new();
        for omit in 0..vertices.len() {
            let f: Vec<String> = vertices
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != omit)
                .map(|(_, v)| v.clone())
                .collect();
            facets.push(f);
        }
        Complex::from_facets(vertices, &facets).expect("boundary facets are valid")
    }

    /// Builds the downward closure of the given facets over a declared vertex
    /// set. Rejects empty facets and labels missing from `vertices`.
    pub fn from_facets(vertices: Vec<String>, facets: &[Vec<String>]) -> Result<Self> {
        let index: BTreeMap<&str, usize> =
            vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        if index.len() != vertices.len() {
            return Err(Error::InvalidPoint("duplicate vertex labels".into()));
        }
        let mut faces = BTreeSet::new();
        for (pos, facet) in facets.iter().enumerate() {
            if facet.is_empty() {
                return Err(Error::EmptyFacet(pos));
            }
            let mut ids = Vec::with_capacity(facet.len());
            for label in facet {
                let id = index
                    .get(label.as_str())
                    .copied()
                    .ok_or_else(|| Error::UnknownVertex(label.clone()))?;
                ids.push(id);
            }
            ids.sort_unstable();
            ids.dedup();
            insert_with_subsets(&mut faces, &ids);
        }
        Ok(Complex { vertices, faces })
    }

    pub fn from_json(json: &ComplexJson) -> Result<Self> {
        Complex::from_facets(json.vertices.clone(), &json.facets)
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            vertices: self.vertices.clone(),
            facets: self.facets().iter().map(|f| self.labels_of(f)).collect(),
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, label: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn labels_of(&self, face: &[usize]) -> Vec<String> {
        face.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    pub fn faces(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.faces.iter()
    }

    /// Faces of a fixed dimension, in canonical order.
    pub fn faces_of_dim(&self, k: usize) -> Vec<Vec<usize>> {
        self.faces.iter().filter(|f| f.len() == k + 1).cloned().collect()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn contains_face(&self, face: &[usize]) -> bool {
        let mut f = face.to_vec();
        f.sort_unstable();
        self.faces.contains(&f)
    }

    /// Dimension, or `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.faces.iter().map(|f| f.len() - 1).max()
    }

    /// Number of faces in each dimension, `f[k]` counting the `k`-faces.
    pub fn f_vector(&self) -> Vec<usize> {
        let dim = match self.dim() {
            Some(d) => d,
            None => return Vec::new(),
        };
        let mut f = vec![0usize; dim + 1];
        for face in &self.faces {
            f[face.len() - 1] += 1;
        }
        f
    }

    /// Alternating sum of the f-vector.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Maximal faces, in canonical order.
    pub fn facets(&self) -> Vec<Vec<usize>> {
        self.faces
            .iter()
            .filter(|f| {
                !self
                    .faces
                    .iter()
                    .any(|g| g.len() > f.len() && is_subset(f, g))
            })
            .cloned()
            .collect()
    }

    /// Smallest subcomplex containing the given faces.
    ///
    /// Errors if any listed face is not a face of `self`.
    pub fn closure(&self, faces: &[Vec<usize>]) -> Result<Complex> {
        let mut out = BTreeSet::new();
        for face in faces {
            let mut f = face.to_vec();
            f.sort_unstable();
            f.dedup();
            if !self.faces.contains(&f) {
                return Err(Error::FaceNotInComplex(self.labels_of(&f)));
            }
            insert_with_subsets(&mut out, &f);
        }
        Ok(self.restrict_to_faces(out))
    }

    /// The full subcomplex `F(S)` spanned by faces with vertices in `selected`.
    pub fn spanned_subcomplex(&self, selected: &BTreeSet<usize>) -> Complex {
        let faces: BTreeSet<Vec<usize>> = self
            .faces
            .iter()
            .filter(|f| f.iter().all(|v| selected.contains(v)))
            .cloned()
            .collect();
        self.restrict_to_faces(faces)
    }

    /// Vertices adjacent to `v` (endpoints of 1-faces through `v`).
    pub fn neighbors(&self, v: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for f in self.faces.iter().filter(|f| f.len() == 2) {
            if f[0] == v {
                out.insert(f[1]);
            } else if f[1] == v {
                out.insert(f[0]);
            }
        }
        out
    }

    /// Combinatorial star and link of `v`: the full subcomplexes on
    /// `{v} ∪ L(v)` and on `L(v)`.
    ///
    /// These are the full-subcomplex versions; they can strictly contain the
    /// union of closed faces through `v` (on the triangle boundary the link of
    /// a vertex is the whole opposite edge). The star-restricted variants used
    /// by the Conley computations live in [`crate::conley`].
    pub fn star_and_link(&self, v: usize) -> Result<(Complex, Complex)> {
        if v >= self.vertices.len() {
            return Err(Error::UnknownVertex(format!("#{v}")));
        }
        let mut link_set = self.neighbors(v);
        let link = self.spanned_subcomplex(&link_set);
        link_set.insert(v);
        let star = self.spanned_subcomplex(&link_set);
        Ok((star, link))
    }

    /// Join: faces are `F1 ∪ F2` with each factor a face or empty, the empty
    /// union removed. Clashing labels are renamed deterministically with
    /// `·L` / `·R` suffixes.
    pub fn join(&self, other: &Complex) -> Complex {
        let clash: BTreeSet<&String> = self
            .vertices
            .iter()
            .filter(|v| other.vertices.contains(v))
            .collect();
        let rename = |label: &String, suffix: &str| -> String {
            if clash.contains(label) {
                format!("{label}·{suffix}")
            } else {
                label.clone()
            }
        };
        let mut vertices: Vec<String> =
            self.vertices.iter().map(|v| rename(v, "L")).collect();
        vertices.extend(other.vertices.iter().map(|v| rename(v, "R")));
        let offset = self.vertices.len();

        let mut faces = BTreeSet::new();
        let left: Vec<&Vec<usize>> = self.faces.iter().collect();
        let right: Vec<Vec<usize>> = other
            .faces
            .iter()
            .map(|f| f.iter().map(|&v| v + offset).collect())
            .collect();
        for f in &left {
            faces.insert((*f).clone());
        }
        for g in &right {
            faces.insert(g.clone());
        }
        for f in &left {
            for g in &right {
                let mut u = (*f).clone();
                u.extend_from_slice(g);
                faces.insert(u);
            }
        }
        Complex { vertices, faces }
    }

    /// Cone: join with a fresh apex vertex.
    pub fn cone(&self) -> Complex {
        let mut apex = "apex".to_string();
        while self.vertices.contains(&apex) {
            apex.push_str("·apex");
        }
        self.join(&Complex::point(&apex))
    }

    /// `n`-fold suspension: iterated join with a two-point complex.
    pub fn suspension(&self, n: usize) -> Complex {
        let mut out = self.clone();
        for _ in 0..n {
            out = out.join(&Complex::two_points("N", "S"));
        }
        out
    }

    /// `n`-th barycentric subdivision. Vertices of `DK` are labeled by the
    /// faces of `K` (labels joined with `|`); faces of `DK` are the chains of
    /// faces under strict inclusion.
    pub fn barycentric_subdivision(&self, n: usize) -> Complex {
        let mut out = self.clone();
        for _ in 0..n {
            out = out.subdivide_once();
        }
        out
    }

    fn subdivide_once(&self) -> Complex {
        let old_faces: Vec<&Vec<usize>> = self.faces.iter().collect();
        let vertices: Vec<String> = old_faces
            .iter()
            .map(|f| self.labels_of(f).join("|"))
            .collect();
        // chains[i] holds indices of faces strictly containing face i
        let supersets: Vec<Vec<usize>> = old_faces
            .iter()
            .map(|f| {
                old_faces
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| g.len() > f.len() && is_subset(f, g))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        let mut faces = BTreeSet::new();
        let mut stack: Vec<Vec<usize>> = (0..old_faces.len()).map(|i| vec![i]).collect();
        while let Some(chain) = stack.pop() {
            faces.insert(chain.clone());
            let last = *chain.last().expect("chains are nonempty");
            for &next in &supersets[last] {
                let mut ext = chain.clone();
                ext.push(next);
                stack.push(ext);
            }
        }
        // chain entries are increasing in face size, hence already sorted as
        // indices into the BTreeSet order? Not necessarily: sort them.
        let faces = faces
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        Complex { vertices, faces }
    }

    /// The face poset of this complex, elements labeled like the barycentric
    /// subdivision's vertices and graded by face dimension.
    pub fn face_poset(&self) -> Poset {
        let faces: Vec<&Vec<usize>> = self.faces.iter().collect();
        let labels: Vec<String> = faces.iter().map(|f| self.labels_of(f).join("|")).collect();
        let mut covers = Vec::new();
        for (i, f) in faces.iter().enumerate() {
            for (j, g) in faces.iter().enumerate() {
                if g.len() == f.len() + 1 && is_subset(f, g) {
                    covers.push((labels[i].clone(), labels[j].clone()));
                }
            }
        }
        Poset::new(labels, &covers).expect("face posets are valid")
    }

    /// Builds the subcomplex on an explicit downward-closed face set.
    pub(crate) fn subcomplex_from_faces(&self, faces: BTreeSet<Vec<usize>>) -> Complex {
        debug_assert!(faces.iter().all(|f| self.faces.contains(f)));
        self.restrict_to_faces(faces)
    }

    /// Restricts the vertex table to vertices actually used by `faces`,
    /// keeping the ambient order, and remaps indices.
    fn restrict_to_faces(&self, faces: BTreeSet<Vec<usize>>) -> Complex {
        let used: BTreeSet<usize> = faces.iter().flatten().copied().collect();
        let vertices: Vec<String> =
            used.iter().map(|&i| self.vertices[i].clone()).collect();
        let remap: BTreeMap<usize, usize> =
            used.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let faces = faces
            .into_iter()
            .map(|f| f.into_iter().map(|v| remap[&v]).collect())
            .collect();
        Complex { vertices, faces }
    }
}

/// The nerve of a finite poset: vertex set `P`, faces the chains of `P`.
pub fn nerve(p: &Poset) -> Complex {
    let n = p.len();
    let vertices: Vec<String> = p.elements().to_vec();
    let mut faces = BTreeSet::new();
    // grow chains by appending elements comparable to the whole chain
    let mut stack: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while let Some(chain) = stack.pop() {
        faces.insert(chain.clone());
        let last = *chain.last().expect("chains are nonempty");
        for next in last + 1..n {
            if chain.iter().all(|&c| p.comparable(c, next)) {
                let mut ext = chain.clone();
                ext.push(next);
                stack.push(ext);
            }
        }
    }
    Complex { vertices, faces }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    // both sorted
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

fn insert_with_subsets(faces: &mut BTreeSet<Vec<usize>>, face: &[usize]) {
    // all 2^n - 1 nonempty subsets; faces are tiny at desk scale
    let n = face.len();
    for mask in 1u64..(1 << n) {
        let sub: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| face[i]).collect();
        faces.insert(sub);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(k: &Complex) -> Vec<Vec<String>> {
        k.faces().map(|f| k.labels_of(f)).collect()
    }

    #[test]
    fn single_point() {
        let k = Complex::from_facets(vec!["a".into()], &[vec!["a".into()]]).unwrap();
        assert_eq!(k.num_faces(), 1);
        assert_eq!(k.dim(), Some(0));
    }

    #[test]
    fn full_triangle_has_seven_faces() {
        let k = Complex::simplex(&["a", "b", "c"]);
        assert_eq!(k.num_faces(), 7);
        assert_eq!(k.f_vector(), vec![3, 3, 1]);
    }

    #[test]
    fn circle_from_three_edges() {
        // oracle: enumerate subsets of the three facets by hand
        let k = Complex::from_facets(
            vec!["a".into(), "b".into(), "c".into()],
            &[
                vec!["a".into(), "b".into()],
                vec!["b".into(), "c".into()],
                vec!["a".into(), "c".into()],
            ],
        )
        .unwrap();
        assert_eq!(k.num_faces(), 6);
        assert_eq!(k.dim(), Some(1));
        assert_eq!(k.f_vector(), vec![3, 3]);
    }

    #[test]
    fn empty_facet_rejected() {
        let err = Complex::from_facets(vec!["a".into()], &[vec![]]).unwrap_err();
        assert!(matches!(err, Error::EmptyFacet(0)));
    }

    #[test]
    fn unknown_vertex_rejected() {
        let err = Complex::from_facets(vec!["a".into()], &[vec!["b".into()]]).unwrap_err();
        assert!(matches!(err, Error::UnknownVertex(_)));
    }

    #[test]
    fn closure_of_full_triangle_is_everything() {
        let k = Complex::simplex(&["a", "b", "c"]);
        let c = k.closure(&[vec![0, 1, 2]]).unwrap();
        assert_eq!(c.num_faces(), 7);
    }

    #[test]
    fn closure_of_nothing_is_empty() {
        let k = Complex::simplex(&["a", "b", "c"]);
        let c = k.closure(&[]).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.dim(), None);
    }

    #[test]
    fn closure_of_edge_and_vertex() {
        // {ab, c} in the circle closes to {a, b, c, ab}
        let k = Complex::simplex_boundary(&["a", "b", "c"]);
        let c = k.closure(&[vec![0, 1], vec![2]]).unwrap();
        let got = labels(&c);
        assert_eq!(got.len(), 4);
        assert!(got.contains(&vec!["a".to_string(), "b".to_string()]));
        assert!(got.contains(&vec!["c".to_string()]));
    }

    #[test]
    fn closure_rejects_foreign_face() {
        let k = Complex::simplex_boundary(&["a", "b", "c"]);
        assert!(k.closure(&[vec![0, 1, 2]]).is_err());
    }

    #[test]
    fn star_and_link_isolated_vertex() {
        let k = Complex::point("v");
        let (star, link) = k.star_and_link(0).unwrap();
        assert_eq!(star.num_faces(), 1);
        assert!(link.is_empty());
    }

    #[test]
    fn star_and_link_path_center() {
        let k = Complex::from_facets(
            vec!["a".into(), "v".into(), "b".into()],
            &[vec!["a".into(), "v".into()], vec!["v".into(), "b".into()]],
        )
        .unwrap();
        let (_, link) = k.star_and_link(1).unwrap();
        assert_eq!(link.f_vector(), vec![2]);
    }

    #[test]
    fn literal_link_on_circle_contains_opposite_edge() {
        // the full-subcomplex link of a circle vertex is the whole opposite
        // edge, not just its endpoints
        let k = Complex::simplex_boundary(&["a", "b", "c"]);
        let v = k.vertex_index("c").unwrap();
        let (_, link) = k.star_and_link(v).unwrap();
        assert_eq!(link.f_vector(), vec![2, 1]);
    }

    #[test]
    fn join_of_two_spheres_is_circle() {
        let s0a = Complex::two_points("a", "b");
        let s0b = Complex::two_points("c", "d");
        let j = s0a.join(&s0b);
        assert_eq!(j.f_vector(), vec![4, 4]);
    }

    #[test]
    fn join_renames_clashing_labels() {
        let a = Complex::point("x");
        let b = Complex::point("x");
        let j = a.join(&b);
        assert_eq!(j.vertices(), &["x·L".to_string(), "x·R".to_string()]);
        assert_eq!(j.f_vector(), vec![2, 1]);
    }

    #[test]
    fn join_dimension_adds() {
        let e = Complex::simplex(&["a", "b"]);
        let t = Complex::simplex(&["c", "d", "e"]);
        let j = e.join(&t);
        assert_eq!(j.dim(), Some(e.dim().unwrap() + t.dim().unwrap() + 1));
    }

    #[test]
    fn join_is_associative_up_to_relabeling() {
        let a = Complex::two_points("a1", "a2");
        let b = Complex::simplex(&["b1", "b2"]);
        let c = Complex::point("c1");
        let left = a.join(&b).join(&c);
        let right = a.join(&b.join(&c));
        assert_eq!(left.f_vector(), right.f_vector());
    }

    #[test]
    fn cone_of_empty_is_point() {
        let c = Complex::empty().cone();
        assert_eq!(c.f_vector(), vec![1]);
    }

    #[test]
    fn cone_equals_join_with_point() {
        let k = Complex::simplex_boundary(&["a", "b", "c"]);
        let c = k.cone();
        let j = k.join(&Complex::point("apex"));
        assert_eq!(c, j);
    }

    #[test]
    fn suspension_once_is_join_with_s0() {
        let s0 = Complex::two_points("a", "b");
        let s = s0.suspension(1);
        assert_eq!(s.f_vector(), vec![4, 4]);
    }

    #[test]
    fn subdivided_edge_is_path() {
        let k = Complex::simplex(&["a", "b"]);
        let d = k.barycentric_subdivision(1);
        assert_eq!(d.f_vector(), vec![3, 2]);
        assert!(d.vertices().contains(&"a|b".to_string()));
    }

    #[test]
    fn subdivided_triangle_f_vector() {
        let k = Complex::simplex(&["a", "b", "c"]);
        let d = k.barycentric_subdivision(1);
        assert_eq!(d.f_vector(), vec![7, 12, 6]);
    }

    #[test]
    fn subdivided_circle_is_hexagon() {
        let k = Complex::simplex_boundary(&["a", "b", "c"]);
        let d = k.barycentric_subdivision(1);
        assert_eq!(d.f_vector(), vec![6, 6]);
    }

    #[test]
    fn subdivision_preserves_euler_characteristic() {
        for k in [
            Complex::simplex(&["a", "b", "c", "d"]),
            Complex::simplex_boundary(&["a", "b", "c", "d"]),
            Complex::two_points("a", "b").join(&Complex::two_points("c", "d")),
        ] {
            let d = k.barycentric_subdivision(1);
            assert_eq!(k.euler_characteristic(), d.euler_characteristic());
        }
    }

    #[test]
    fn nerve_of_antichain_is_points() {
        let p = Poset::new(vec!["a".into(), "b".into(), "c".into()], &[]).unwrap();
        let n = nerve(&p);
        assert_eq!(n.f_vector(), vec![3]);
    }

    #[test]
    fn nerve_of_chain_is_simplex() {
        let p = Poset::new(
            vec!["a".into(), "b".into(), "c".into()],
            &[("a".into(), "b".into()), ("b".into(), "c".into())],
        )
        .unwrap();
        let n = nerve(&p);
        assert_eq!(n.f_vector(), vec![3, 3, 1]);
    }

    #[test]
    fn nerve_of_face_poset_matches_subdivision() {
        for k in [
            Complex::simplex(&["a", "b"]),
            Complex::simplex(&["a", "b", "c"]),
            Complex::simplex_boundary(&["a", "b", "c"]),
        ] {
            let via_nerve = nerve(&k.face_poset());
            let direct = k.barycentric_subdivision(1);
            assert_eq!(via_nerve.f_vector(), direct.f_vector());
            // identical label sets as well
            let mut a = via_nerve.vertices().to_vec();
            let mut b = direct.vertices().to_vec();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn facets_round_trip() {
        let k = Complex::from_facets(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            &[
                vec!["a".into(), "b".into(), "c".into()],
                vec!["c".into(), "d".into()],
            ],
        )
        .unwrap();
        let facets: Vec<Vec<String>> =
            k.facets().iter().map(|f| k.labels_of(f)).collect();
        let k2 = Complex::from_facets(k.vertices().to_vec(), &facets).unwrap();
        assert_eq!(k, k2);
    }
}
