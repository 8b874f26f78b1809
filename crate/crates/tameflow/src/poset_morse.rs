//! Morse theory on finite posets and regular CW face posets.
//!
//! An admissible function on a poset takes distinct values on comparable
//! elements. Its violation sets `V±(x)` collect the failures of the strictly
//! decreasing condition at `x`; coherence asks that the function reverse the
//! order on every violation interval, and the `C±` conditions ask those
//! violation sets to be order intervals. On a CW face poset the critical
//! faces carry the nerve `M⁺(F)` whose reduced homology, shifted by the face
//! dimension, enters the Morse inequalities.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::complex::{nerve, Complex};
use crate::conley::{contractibility_verdict, Contractibility, Verdict};
use crate::homology::{poincare_polynomial, poly_succeq, PolyZ};
use crate::{Error, Result};

/// Finite poset given by its covering relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    elements: Vec<String>,
    covers: BTreeSet<(usize, usize)>, // (lower, upper): upper covers lower
    lt: Vec<Vec<bool>>,               // strict order, transitively closed
}

/// JSON wire form: `{"elements":[...],"covers":[["a","b"],...]}` where
/// `["a","b"]` says `b` covers `a`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

impl Poset {
    #[allow(clippy::needless_range_loop)] // Warshall closure reads a row while writing another
    pub fn new(elements: Vec<String>, covers: &[(String, String)]) -> Result<Self> {
        let index: BTreeMap<&str, usize> =
            elements.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
        if index.len() != elements.len() {
            return Err(Error::NotAPartialOrder("duplicate element labels".into()));
        }
        let n = elements.len();
        let mut cover_set = BTreeSet::new();
        for (a, b) in covers {
            let ia = *index
                .get(a.as_str())
                .ok_or_else(|| Error::UnknownVertex(a.clone()))?;
            let ib = *index
                .get(b.as_str())
                .ok_or_else(|| Error::UnknownVertex(b.clone()))?;
            if ia == ib {
                return Err(Error::NotAPartialOrder(format!("{a} covers itself")));
            }
            cover_set.insert((ia, ib));
        }
        // transitive closure; a cycle shows up as x < x
        let mut lt = vec![vec![false; n]; n];
        for &(a, b) in &cover_set {
            lt[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if lt[i][k] {
                    for j in 0..n {
                        if lt[k][j] {
                            lt[i][j] = true;
                        }
                    }
                }
            }
        }
        for (i, row) in lt.iter().enumerate() {
            if row[i] {
                return Err(Error::NotAPartialOrder(format!(
                    "cycle through {}",
                    elements[i]
                )));
            }
        }
        for &(a, b) in &cover_set {
            if (0..n).any(|z| lt[a][z] && lt[z][b]) {
                return Err(Error::NotAPartialOrder(format!(
                    "redundant cover ({}, {})",
                    elements[a], elements[b]
                )));
            }
        }
        Ok(Poset { elements, covers: cover_set, lt })
    }

    pub fn from_json(json: &PosetJson) -> Result<Self> {
        Poset::new(json.elements.clone(), &json.covers)
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.elements.clone(),
            covers: self
                .covers
                .iter()
                .map(|&(a, b)| (self.elements[a].clone(), self.elements[b].clone()))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn label(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn element_index(&self, label: &str) -> Result<usize> {
        self.elements
            .iter()
            .position(|e| e == label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.lt[a][b]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.lt[a][b]
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        a == b || self.lt[a][b] || self.lt[b][a]
    }

    pub fn covers(&self) -> &BTreeSet<(usize, usize)> {
        &self.covers
    }

    /// The order interval `[x, y]`; errors when `x ≤ y` fails.
    pub fn interval(&self, x: usize, y: usize) -> Result<Vec<usize>> {
        if !self.leq(x, y) {
            return Err(Error::Incomparable(
                self.elements[x].clone(),
                self.elements[y].clone(),
            ));
        }
        Ok((0..self.len())
            .filter(|&z| self.leq(x, z) && self.leq(z, y))
            .collect())
    }

    /// Maximal chain length `ℓ(x, y)` inside `[x, y]`; `1` exactly for covers.
    pub fn longest_chain(&self, x: usize, y: usize) -> Result<usize> {
        if !self.leq(x, y) {
            return Err(Error::Incomparable(
                self.elements[x].clone(),
                self.elements[y].clone(),
            ));
        }
        let mut memo: BTreeMap<usize, Option<usize>> = BTreeMap::new();
        fn walk(
            p: &Poset,
            u: usize,
            y: usize,
            memo: &mut BTreeMap<usize, Option<usize>>,
        ) -> Option<usize> {
            if u == y {
                return Some(0);
            }
            if let Some(&v) = memo.get(&u) {
                return v;
            }
            let mut best: Option<usize> = None;
            for &(a, b) in p.covers.iter().filter(|&&(a, _)| a == u) {
                debug_assert_eq!(a, u);
                if p.leq(b, y) {
                    if let Some(rest) = walk(p, b, y, memo) {
                        best = Some(best.map_or(rest + 1, |cur| cur.max(rest + 1)));
                    }
                }
            }
            memo.insert(u, best);
            best
        }
        Ok(walk(self, x, y, &mut memo).expect("x <= y implies a cover path"))
    }

    /// Elements strictly below `x`.
    pub fn strictly_below(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&z| self.lt[z][x]).collect()
    }

    pub fn maximal_in(&self, subset: &[usize]) -> Vec<usize> {
        subset
            .iter()
            .copied()
            .filter(|&x| !subset.iter().any(|&y| self.lt[x][y]))
            .collect()
    }

    pub fn is_ideal(&self, subset: &BTreeSet<usize>) -> bool {
        subset
            .iter()
            .all(|&x| self.strictly_below(x).iter().all(|z| subset.contains(z)))
    }

    /// Down-closure of a set of generators.
    pub fn ideal_generated_by(&self, generators: &[usize]) -> BTreeSet<usize> {
        let mut out: BTreeSet<usize> = generators.iter().copied().collect();
        for &g in generators {
            out.extend(self.strictly_below(g));
        }
        out
    }

    /// Induced subposet on `subset` (in ambient element order), with covers
    /// recomputed from the restricted order. Returns the subposet together
    /// with the map from new indices to ambient ones.
    pub fn restriction(&self, subset: &BTreeSet<usize>) -> (Poset, Vec<usize>) {
        let keep: Vec<usize> = subset.iter().copied().collect();
        let elements: Vec<String> = keep.iter().map(|&i| self.elements[i].clone()).collect();
        let m = keep.len();
        let mut lt = vec![vec![false; m]; m];
        for i in 0..m {
            for j in 0..m {
                lt[i][j] = self.lt[keep[i]][keep[j]];
            }
        }
        let mut covers = BTreeSet::new();
        for i in 0..m {
            for j in 0..m {
                if lt[i][j] && !(0..m).any(|z| lt[i][z] && lt[z][j]) {
                    covers.insert((i, j));
                }
            }
        }
        (Poset { elements, covers, lt }, keep)
    }
}

/// Real-valued function on a poset taking distinct values on comparable pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibleFunction {
    values: Vec<f64>,
}

/// JSON wire form: `{"values":{"a":3.0,...}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctionJson {
    pub values: BTreeMap<String, f64>,
}

impl AdmissibleFunction {
    pub fn new(p: &Poset, values: Vec<f64>) -> Result<Self> {
        if values.len() != p.len() {
            return Err(Error::InadmissibleFunction(format!(
                "{} values for {} elements",
                values.len(),
                p.len()
            )));
        }
        for a in 0..p.len() {
            for b in a + 1..p.len() {
                if p.comparable(a, b) && values[a] == values[b] {
                    return Err(Error::InadmissibleFunction(format!(
                        "comparable elements {} and {} share the value {}",
                        p.label(a),
                        p.label(b),
                        values[a]
                    )));
                }
            }
        }
        Ok(AdmissibleFunction { values })
    }

    pub fn from_json(p: &Poset, json: &FunctionJson) -> Result<Self> {
        let mut values = Vec::with_capacity(p.len());
        for e in p.elements() {
            let v = json
                .values
                .get(e)
                .copied()
                .ok_or_else(|| Error::InadmissibleFunction(format!("no value for {e}")))?;
            values.push(v);
        }
        AdmissibleFunction::new(p, values)
    }

    pub fn value(&self, x: usize) -> f64 {
        self.values[x]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Restriction to a subposet produced by [`Poset::restriction`].
    pub fn restrict(&self, index_map: &[usize]) -> AdmissibleFunction {
        AdmissibleFunction {
            values: index_map.iter().map(|&i| self.values[i]).collect(),
        }
    }
}

/// Violation sets at `x`: `V⁺(x) = {y > x : f(x) > f(y)}` and
/// `V⁻(x) = {z < x : f(z) > f(x)}`.
pub fn violation_sets(p: &Poset, f: &AdmissibleFunction, x: usize) -> (Vec<usize>, Vec<usize>) {
    let plus = (0..p.len())
        .filter(|&y| p.lt(x, y) && f.value(x) > f.value(y))
        .collect();
    let minus = (0..p.len())
        .filter(|&z| p.lt(z, x) && f.value(z) > f.value(x))
        .collect();
    (plus, minus)
}

/// All violation pairs `x ≺_f y` (meaning `x < y` and `f(x) > f(y)`).
pub fn violation_pairs(p: &Poset, f: &AdmissibleFunction) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for x in 0..p.len() {
        for y in 0..p.len() {
            if p.lt(x, y) && f.value(x) > f.value(y) {
                out.push((x, y));
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CoherenceReport {
    pub coherent: bool,
    /// Longest violation interval; zero when there are no violations.
    pub omega: usize,
    /// First interval witnessing incoherence, when present.
    pub violating_interval: Option<(String, String)>,
}

/// Coherence check: every violation pair `x ≺_f y` must have `f` reversing
/// the order on the whole interval `[x, y]`.
pub fn coherence(p: &Poset, f: &AdmissibleFunction) -> CoherenceReport {
    let mut omega = 0usize;
    let mut witness = None;
    let mut coherent = true;
    for (x, y) in violation_pairs(p, f) {
        let interval = p.interval(x, y).expect("violation pairs are comparable");
        let reversing = interval.iter().all(|&u| {
            interval
                .iter()
                .all(|&v| !p.lt(u, v) || f.value(u) > f.value(v))
        });
        if reversing {
            omega = omega.max(p.longest_chain(x, y).expect("comparable"));
        } else {
            coherent = false;
            if witness.is_none() {
                witness = Some((p.label(x).to_string(), p.label(y).to_string()));
            }
        }
    }
    CoherenceReport { coherent, omega, violating_interval: witness }
}

/// The `C±` maps: per element, the interval endpoint when the violation set
/// together with the element is an order interval, `None` on failure.
#[derive(Clone, Debug)]
pub struct CMaps {
    pub cplus: Vec<Option<usize>>,
    pub cminus: Vec<Option<usize>>,
}

impl CMaps {
    pub fn c_plus_holds(&self) -> bool {
        self.cplus.iter().all(|c| c.is_some())
    }

    pub fn c_minus_holds(&self) -> bool {
        self.cminus.iter().all(|c| c.is_some())
    }
}

/// Searches, for every `x`, an endpoint `y ≥ x` with `S⁺(x) = [x, y]`, and
/// mirrored for `S⁻`. Requires coherence.
pub fn c_plus_minus(p: &Poset, f: &AdmissibleFunction) -> Result<CMaps> {
    let report = coherence(p, f);
    if !report.coherent {
        let (a, b) = report.violating_interval.expect("incoherent has witness");
        return Err(Error::IncoherentFunction(a, b));
    }
    let mut cplus = Vec::with_capacity(p.len());
    let mut cminus = Vec::with_capacity(p.len());
    for x in 0..p.len() {
        let (vplus, vminus) = violation_sets(p, f, x);

        let mut splus: BTreeSet<usize> = vplus.iter().copied().collect();
        splus.insert(x);
        let maxes = p.maximal_in(&splus.iter().copied().collect::<Vec<_>>());
        cplus.push(match maxes.as_slice() {
            [y] if p
                .interval(x, *y)
                .map(|i| i.iter().copied().collect::<BTreeSet<_>>() == splus)
                .unwrap_or(false) =>
            {
                Some(*y)
            }
            _ => None,
        });

        let mut sminus: BTreeSet<usize> = vminus.iter().copied().collect();
        sminus.insert(x);
        let mins: Vec<usize> = sminus
            .iter()
            .copied()
            .filter(|&z| !sminus.iter().any(|&w| p.lt(w, z)))
            .collect();
        cminus.push(match mins.as_slice() {
            [y] if p
                .interval(*y, x)
                .map(|i| i.iter().copied().collect::<BTreeSet<_>>() == sminus)
                .unwrap_or(false) =>
            {
                Some(*y)
            }
            _ => None,
        });
    }
    Ok(CMaps { cplus, cminus })
}

/// Nerve of the induced subposet on `subset`.
pub fn subset_nerve(p: &Poset, subset: &BTreeSet<usize>) -> Complex {
    let (sub, _) = p.restriction(subset);
    nerve(&sub)
}

/// Per-element regularity verdicts: regular when `V⁺(x)` or `P_{<x} ∖ V⁻(x)`
/// has certifiably contractible nerve, critical when both are refuted.
pub fn regular_points(p: &Poset, f: &AdmissibleFunction) -> Vec<Verdict> {
    (0..p.len())
        .map(|x| {
            let (vplus, vminus) = violation_sets(p, f, x);
            let upper: BTreeSet<usize> = vplus.iter().copied().collect();
            let lower: BTreeSet<usize> = p
                .strictly_below(x)
                .into_iter()
                .filter(|z| !vminus.contains(z))
                .collect();
            let a = contractibility_verdict(&subset_nerve(p, &upper));
            let b = contractibility_verdict(&subset_nerve(p, &lower));
            match (a, b) {
                (Contractibility::Contractible, _) | (_, Contractibility::Contractible) => {
                    Verdict::Regular
                }
                (Contractibility::NotContractible, Contractibility::NotContractible) => {
                    Verdict::Critical
                }
                _ => Verdict::Unknown,
            }
        })
        .collect()
}

/// Face poset of a regular CW decomposition: graded poset with a meet
/// operation recording face intersections.
#[derive(Clone, Debug)]
pub struct CWFacePoset {
    poset: Poset,
    dims: Vec<usize>,
    meets: BTreeMap<(usize, usize), usize>, // incomparable pairs with nonempty meet
}

/// JSON wire form: poset fields plus `{"dim":{...},"meets":[["a","b","c"],...]}`
/// where a triple says `meet(a, b) = c`; a pair absent from `meets` has empty
/// intersection.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CwJson {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
    pub dim: BTreeMap<String, usize>,
    pub meets: Vec<(String, String, String)>,
}

impl CWFacePoset {
    pub fn new(
        poset: Poset,
        dims: Vec<usize>,
        meets: BTreeMap<(usize, usize), usize>,
    ) -> Result<Self> {
        if dims.len() != poset.len() {
            return Err(Error::GradingViolation("dimension table size mismatch".into()));
        }
        for &(a, b) in poset.covers() {
            if dims[b] <= dims[a] {
                return Err(Error::GradingViolation(format!(
                    "cover ({}, {}) does not raise dimension",
                    poset.label(a),
                    poset.label(b)
                )));
            }
        }
        // normalize keys and reject entries that contradict the order
        let mut normalized = BTreeMap::new();
        for (&(a, b), &m) in &meets {
            let key = (a.min(b), a.max(b));
            if poset.comparable(a, b) {
                let expect = if poset.leq(a, b) { a } else { b };
                if m != expect {
                    return Err(Error::MeetViolation(format!(
                        "declared meet of comparable pair ({}, {}) is not the smaller element",
                        poset.label(a),
                        poset.label(b)
                    )));
                }
                continue;
            }
            normalized.insert(key, m);
        }
        let cw = CWFacePoset { poset, dims, meets: normalized };
        cw.validate_meets()?;
        Ok(cw)
    }

    fn validate_meets(&self) -> Result<()> {
        let p = &self.poset;
        for a in 0..p.len() {
            for b in a + 1..p.len() {
                if p.comparable(a, b) {
                    continue;
                }
                let common: Vec<usize> =
                    (0..p.len()).filter(|&z| p.leq(z, a) && p.leq(z, b)).collect();
                match self.meets.get(&(a, b)) {
                    Some(&m) => {
                        if !common.contains(&m) || !common.iter().all(|&z| p.leq(z, m)) {
                            return Err(Error::MeetViolation(format!(
                                "meet({}, {}) = {} is not the greatest lower bound",
                                p.label(a),
                                p.label(b),
                                p.label(m)
                            )));
                        }
                    }
                    None => {
                        if !common.is_empty() {
                            return Err(Error::MeetViolation(format!(
                                "({}, {}) has common lower bounds but no declared meet",
                                p.label(a),
                                p.label(b)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_json(json: &CwJson) -> Result<Self> {
        let poset = Poset::new(json.elements.clone(), &json.covers)?;
        let mut dims = Vec::with_capacity(poset.len());
        for e in poset.elements() {
            let d = *json
                .dim
                .get(e)
                .ok_or_else(|| Error::GradingViolation(format!("no dimension for {e}")))?;
            dims.push(d);
        }
        let mut meets = BTreeMap::new();
        for (a, b, m) in &json.meets {
            let ia = poset.element_index(a)?;
            let ib = poset.element_index(b)?;
            let im = poset.element_index(m)?;
            meets.insert((ia.min(ib), ia.max(ib)), im);
        }
        CWFacePoset::new(poset, dims, meets)
    }

    /// Face poset of a simplicial complex: dimensions are face sizes minus
    /// one and meets are set intersections.
    pub fn from_complex(k: &Complex) -> Self {
        let poset = k.face_poset();
        let faces: Vec<Vec<usize>> = k.faces().cloned().collect();
        let dims: Vec<usize> = faces.iter().map(|f| f.len() - 1).collect();
        let mut meets = BTreeMap::new();
        for i in 0..faces.len() {
            for j in i + 1..faces.len() {
                if poset.comparable(i, j) {
                    continue;
                }
                let inter: Vec<usize> = faces[i]
                    .iter()
                    .copied()
                    .filter(|v| faces[j].contains(v))
                    .collect();
                if !inter.is_empty() {
                    let m = faces.iter().position(|f| *f == inter).expect("closure");
                    meets.insert((i, j), m);
                }
            }
        }
        CWFacePoset { poset, dims, meets }
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn dim_of(&self, x: usize) -> usize {
        self.dims[x]
    }

    /// Regular grading: every cover raises dimension by exactly one.
    pub fn is_regular_grading(&self) -> bool {
        self.poset.covers().iter().all(|&(a, b)| self.dims[b] == self.dims[a] + 1)
    }

    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        if self.poset.comparable(a, b) {
            return Some(if self.poset.leq(a, b) { a } else { b });
        }
        self.meets.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn iterated_meet(&self, set: &[usize]) -> Option<usize> {
        let mut it = set.iter().copied();
        let first = it.next()?;
        it.try_fold(first, |acc, x| self.meet(acc, x))
    }
}

/// The nerve `M⁺(F)` of the cover of `V⁺(F)` by the intervals `(F, T]` over
/// maximal `T`: a set of maximal elements spans a face exactly when their
/// iterated meet lies strictly above `F`.
pub fn mplus_complex(fp: &CWFacePoset, f: &AdmissibleFunction, face: usize) -> Result<Complex> {
    let p = fp.poset();
    let (vplus, _) = violation_sets(p, f, face);
    let maxes = p.maximal_in(&vplus);
    if maxes.is_empty() {
        return Ok(Complex::empty());
    }
    let labels: Vec<String> = maxes.iter().map(|&t| p.label(t).to_string()).collect();
    let mut facets: Vec<Vec<String>> = Vec::new();
    let n = maxes.len();
    for mask in 1u64..(1 << n) {
        let subset: Vec<usize> =
            (0..n).filter(|i| mask >> i & 1 == 1).map(|i| maxes[i]).collect();
        let meet = match fp.iterated_meet(&subset) {
            Some(m) => m,
            None => {
                if subset.iter().any(|&t| p.leq(face, t)) {
                    // every T contains F, so a missing meet breaks the CW assumption
                    return Err(Error::MeetViolation(format!(
                        "meet required above {} is undefined",
                        p.label(face)
                    )));
                }
                continue;
            }
        };
        if p.lt(face, meet) {
            facets.push(
                subset.iter().map(|&t| p.label(t).to_string()).collect(),
            );
        } else if subset.len() == 1 {
            // a maximal element of V⁺(F) always spans a vertex
            facets.push(vec![p.label(subset[0]).to_string()]);
        }
    }
    Complex::from_facets(labels, &facets)
}

/// One face's contribution to the Morse inequalities.
#[derive(Clone, Debug, Serialize)]
pub struct FaceMorseData {
    pub label: String,
    pub dim: usize,
    pub critical: bool,
    pub polynomial: PolyZ,
    pub mplus_f_vector: Vec<usize>,
}

/// Morse data of a `C₋` function on a CW face poset.
#[derive(Clone, Debug, Serialize)]
pub struct CMinusReport {
    pub per_face: Vec<FaceMorseData>,
    pub sum: PolyZ,
    pub space: PolyZ,
    /// Certificate for `sum ⪰ space`; `None` flags a falsification.
    pub certificate: Option<PolyZ>,
    /// Whether the function also satisfies `C₊` (hence `C`).
    pub c_holds: bool,
    pub classical_sum: Option<PolyZ>,
    pub classical_certificate: Option<PolyZ>,
}

impl CMinusReport {
    pub fn falsified(&self) -> bool {
        self.certificate.is_none()
            || (self.c_holds && self.classical_certificate.is_none())
    }
}

/// Computes critical faces (`F = C₋(F)`), their polynomials
/// `t^{dim F + 1}·P̃_{M⁺(F)}(t)` (with empty `M⁺` contributing `t^{dim F}`),
/// and the Morse-inequality certificates against `space`.
pub fn cminus_morse_report(
    fp: &CWFacePoset,
    f: &AdmissibleFunction,
    space: &PolyZ,
) -> Result<CMinusReport> {
    let p = fp.poset();
    let cmaps = c_plus_minus(p, f)?;
    if let Some(x) = (0..p.len()).find(|&x| cmaps.cminus[x].is_none()) {
        return Err(Error::CMinusFails(p.label(x).to_string()));
    }

    let mut per_face = Vec::with_capacity(p.len());
    let mut sum = PolyZ::zero();
    for x in 0..p.len() {
        let critical = cmaps.cminus[x] == Some(x);
        let (polynomial, f_vec) = if critical {
            let mplus = mplus_complex(fp, f, x)?;
            let d = fp.dim_of(x);
            let poly = if mplus.is_empty() {
                PolyZ::t_power(d)
            } else {
                poincare_polynomial(&mplus, true)?.shift(d + 1)
            };
            (poly, mplus.f_vector())
        } else {
            (PolyZ::zero(), Vec::new())
        };
        sum = sum.add(&polynomial);
        per_face.push(FaceMorseData {
            label: p.label(x).to_string(),
            dim: fp.dim_of(x),
            critical,
            polynomial,
            mplus_f_vector: f_vec,
        });
    }
    let certificate = poly_succeq(&sum, space);

    let c_holds = cmaps.c_plus_holds();
    let (classical_sum, classical_certificate) = if c_holds {
        let mut s = PolyZ::zero();
        for x in 0..p.len() {
            if cmaps.cminus[x] == Some(x) && cmaps.cplus[x] == Some(x) {
                s = s.add(&PolyZ::t_power(fp.dim_of(x)));
            }
        }
        let cert = poly_succeq(&s, space);
        (Some(s), cert)
    } else {
        (None, None)
    };

    Ok(CMinusReport {
        per_face,
        sum,
        space: space.clone(),
        certificate,
        c_holds,
        classical_sum,
        classical_certificate,
    })
}
