//! Integer simplicial homology via Smith normal form, Poincaré polynomials,
//! and the `(1+t)`-divisibility order on integer polynomials.
//!
//! Boundary operators are exact integer matrices with arbitrary-precision
//! entries; Betti numbers are rational (ranks from the Smith form), and the
//! integer diagonal is kept so torsion can be reported as a diagnostic.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::{Error, Result};

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    /// Matrix product, used by the `∂∘∂ = 0` checks.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }
}

/// Invariant factors and rank of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithNormalForm {
    /// Positive diagonal entries `d1 | d2 | … | dr`.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
}

impl SmithNormalForm {
    /// Every diagonal entry divides the next.
    pub fn is_divisibility_chain(&self) -> bool {
        self.diagonal.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
    }
}

/// Smith normal form by repeated pivoting on the smallest nonzero entry.
#[allow(clippy::needless_range_loop)] // row ops read one row while writing another
pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| (0..m.cols).map(|j| m.get(i, j).clone()).collect())
        .collect();
    let rows = m.rows;
    let cols = m.cols;
    let mut diagonal = Vec::new();
    let mut t = 0usize;

    while t < rows && t < cols {
        // smallest-absolute-value nonzero pivot in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let (pi, pj) = match pivot {
            Some(p) => p,
            None => break,
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }

        // clear row and column t; a leftover remainder becomes the new,
        // strictly smaller pivot, so this loop terminates
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = div_round(&a[i][t], &a[t][t]);
                for j in t..cols {
                    let v = &a[i][j] - &q * &a[t][j];
                    a[i][j] = v;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = div_round(&a[t][j], &a[t][t]);
                for row in a.iter_mut().take(rows).skip(t) {
                    let v = &row[j] - &q * &row[t];
                    row[j] = v;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }

        // enforce the divisibility chain: fold any non-multiple into row t
        let mut fixed = false;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&a[i][j] % &a[t][t]).is_zero() {
                    for jj in t..cols {
                        let v = &a[t][jj] + &a[i][jj];
                        a[t][jj] = v;
                    }
                    fixed = true;
                    break 'scan;
                }
            }
        }
        if fixed {
            continue; // redo this pivot with the folded row
        }

        diagonal.push(a[t][t].abs());
        t += 1;
    }

    let rank = diagonal.len();
    SmithNormalForm { diagonal, rank }
}

/// Truncated quotient; the remainder is strictly smaller than the pivot,
/// which is what the reduction loop needs to terminate.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    a / b
}

/// Boundary operators of a complex, index `k` mapping `k`-chains to
/// `(k-1)`-chains; `∂_0` has zero rows. Signs follow the sorted-vertex
/// orientation convention.
pub fn boundary_matrices(k: &Complex) -> Vec<IntMatrix> {
    let dim = match k.dim() {
        Some(d) => d,
        None => return Vec::new(),
    };
    let mut out = Vec::with_capacity(dim + 1);
    let mut below: Vec<Vec<usize>> = k.faces_of_dim(0);
    out.push(IntMatrix::zeros(0, below.len()));
    for d in 1..=dim {
        let here = k.faces_of_dim(d);
        let mut m = IntMatrix::zeros(below.len(), here.len());
        for (j, face) in here.iter().enumerate() {
            for r in 0..face.len() {
                let mut sub = face.clone();
                sub.remove(r);
                let i = below.binary_search(&sub).expect("closure guarantees subfaces");
                let sign = if r % 2 == 0 { 1 } else { -1 };
                m.set(i, j, BigInt::from(sign));
            }
        }
        out.push(m);
        below = here;
    }
    out
}

/// Rational Betti numbers from Smith ranks, with the invariant factors `> 1`
/// of each `∂_{k+1}` kept as the torsion diagnostic for `H_k`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HomologySummary {
    pub betti: Vec<usize>,
    pub torsion: Vec<Vec<String>>,
}

pub fn homology_summary(k: &Complex) -> HomologySummary {
    let boundaries = boundary_matrices(k);
    let dim = boundaries.len().saturating_sub(1);
    let mut betti = Vec::new();
    let mut torsion = Vec::new();
    if boundaries.is_empty() {
        return HomologySummary { betti, torsion };
    }
    let snfs: Vec<SmithNormalForm> = boundaries.iter().map(smith_normal_form).collect();
    for q in 0..=dim {
        let n_q = boundaries[q].cols();
        let rank_q = snfs[q].rank;
        let rank_q1 = if q < dim { snfs[q + 1].rank } else { 0 };
        betti.push(n_q - rank_q - rank_q1);
        let tors: Vec<String> = if q < dim {
            snfs[q + 1]
                .diagonal
                .iter()
                .filter(|d| **d > BigInt::from(1))
                .map(|d| d.to_string())
                .collect()
        } else {
            Vec::new()
        };
        torsion.push(tors);
    }
    HomologySummary { betti, torsion }
}

/// Integer polynomial, coefficient `i` belonging to degree `i`.
/// Trailing zeros are trimmed; the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolyZ {
    coeffs: Vec<i64>,
}

impl PolyZ {
    pub fn zero() -> Self {
        PolyZ { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        PolyZ { coeffs: vec![1] }
    }

    pub fn t_power(k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        PolyZ { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        let mut p = PolyZ { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn add(&self, other: &PolyZ) -> PolyZ {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        PolyZ::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &PolyZ) -> PolyZ {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        PolyZ::from_coeffs(coeffs)
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> PolyZ {
        if self.is_zero() {
            return PolyZ::zero();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        PolyZ { coeffs }
    }

    pub fn eval(&self, x: i64) -> i64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * x + c)
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }
}

impl fmt::Display for PolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " {} ", if c < 0 { "-" } else { "+" })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                1 if a == 1 => write!(f, "t")?,
                1 => write!(f, "{a}t")?,
                _ if a == 1 => write!(f, "t^{k}")?,
                _ => write!(f, "{a}t^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Poincaré polynomial of a complex over the rationals; the reduced variant
/// subtracts one in degree zero and rejects the empty complex.
pub fn poincare_polynomial(k: &Complex, reduced: bool) -> Result<PolyZ> {
    if k.is_empty() {
        if reduced {
            return Err(Error::ReducedOfEmpty);
        }
        return Ok(PolyZ::zero());
    }
    let betti = homology_summary(k).betti;
    let mut coeffs: Vec<i64> = betti.iter().map(|&b| b as i64).collect();
    if reduced {
        coeffs[0] -= 1;
    }
    Ok(PolyZ::from_coeffs(coeffs))
}

/// Poincaré polynomial of the pair `(K, L)` via the quotient chain complex.
/// Faces are matched by label, so `L` may carry its own vertex table.
pub fn pair_poincare_polynomial(k: &Complex, l: &Complex) -> Result<PolyZ> {
    // map L's faces into K by label
    let mut in_l: BTreeSet<Vec<usize>> = BTreeSet::new();
    for face in l.faces() {
        let labels = l.labels_of(face);
        let mut ids = Vec::with_capacity(labels.len());
        for lab in &labels {
            let id = k
                .vertex_index(lab)
                .map_err(|_| Error::NotASubcomplex("pair".into(), labels.clone()))?;
            ids.push(id);
        }
        ids.sort_unstable();
        if !k.contains_face(&ids) {
            return Err(Error::NotASubcomplex("pair".into(), labels));
        }
        in_l.insert(ids);
    }

    let dim = match k.dim() {
        Some(d) => d,
        None => return Ok(PolyZ::zero()),
    };
    // relative chain groups: K-faces not in L, per dimension
    let bases: Vec<Vec<Vec<usize>>> = (0..=dim)
        .map(|d| {
            k.faces_of_dim(d)
                .into_iter()
                .filter(|f| !in_l.contains(f))
                .collect()
        })
        .collect();
    let mut boundaries: Vec<IntMatrix> = Vec::with_capacity(dim + 1);
    boundaries.push(IntMatrix::zeros(0, bases[0].len()));
    for d in 1..=dim {
        let mut m = IntMatrix::zeros(bases[d - 1].len(), bases[d].len());
        for (j, face) in bases[d].iter().enumerate() {
            for r in 0..face.len() {
                let mut sub = face.clone();
                sub.remove(r);
                if let Ok(i) = bases[d - 1].binary_search(&sub) {
                    let sign = if r % 2 == 0 { 1 } else { -1 };
                    m.set(i, j, BigInt::from(sign));
                }
            }
        }
        boundaries.push(m);
    }
    let snfs: Vec<SmithNormalForm> = boundaries.iter().map(smith_normal_form).collect();
    let mut coeffs = Vec::new();
    for q in 0..=dim {
        let rank_q1 = if q < dim { snfs[q + 1].rank } else { 0 };
        coeffs.push((bases[q].len() - snfs[q].rank - rank_q1) as i64);
    }
    Ok(PolyZ::from_coeffs(coeffs))
}

/// The certificate order: returns `Q` with nonnegative coefficients such that
/// `A = B + (1+t)·Q`, if one exists.
pub fn poly_succeq(a: &PolyZ, b: &PolyZ) -> Option<PolyZ> {
    let d = a.sub(b);
    if d.is_zero() {
        return Some(PolyZ::zero());
    }
    // long division by (1 + t), highest degree first
    let deg = d.degree().expect("nonzero");
    if deg == 0 {
        return None; // nonzero constant is never divisible by 1+t
    }
    let mut rest = d.coeffs().to_vec();
    let mut q = vec![0i64; deg];
    for k in (1..=deg).rev() {
        q[k - 1] = rest[k];
        rest[k - 1] -= q[k - 1];
    }
    if rest[0] != 0 {
        return None;
    }
    let q = PolyZ::from_coeffs(q);
    if q.has_nonnegative_coeffs() {
        Some(q)
    } else {
        None
    }
}
