//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured quantity once its assertions hold.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use tameflow::complex::Complex;
use tameflow::conley::{
    descending_order_edges, morse_inequalities, stiefel_orientation, Orientation,
};
use tameflow::flow::{
    asymptotic_pair_sample, complex_flow, lyapunov_value, normal_slice_intersection,
    parallelism_check, slice_threshold, standard_flow, vertex_linearization, BarycentricPoint,
};
use tameflow::gap::{
    decay_bound_check, gap, graph_gap_check, hat_gap, shadow_slope, siv_model_demo, spectral_nu,
    CriticalSpectrum, SymOperator, Subspace,
};
use tameflow::homology::{homology_summary, PolyZ};
use tameflow::poset_morse::{c_plus_minus, cminus_morse_report, AdmissibleFunction, CWFacePoset};

mod rk4;

fn random_interior(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let mut coords: Vec<f64> = (0..=dim).map(|_| rng.gen_range(0.05..1.0)).collect();
    let sum: f64 = coords.iter().sum();
    for c in &mut coords {
        *c /= sum;
    }
    coords
}

/// Criterion 1: the closed-form flow on the ordered 3-simplex stays within
/// 1e-6 (sup norm) of a fourth-order integration of the triangular vector
/// field, for 100 seeded interior points over t ∈ [0, 10], in under 10 s.
#[test]
fn criterion_1_closed_form_matches_ode_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let bary = random_interior(&mut rng, 3);
        // linear coordinates drop the sink coordinate
        let x0 = [bary[1], bary[2], bary[3]];
        let checkpoints: Vec<f64> = (1..=20).map(|i| 0.5 * i as f64).collect();
        let oracle = rk4::integrate(&x0, &checkpoints, 1.0 / 256.0);
        for (&t, ode_linear) in checkpoints.iter().zip(&oracle) {
            let closed = standard_flow(&bary, t).unwrap();
            let closed_linear = [closed[1], closed[2], closed[3]];
            let ode_bary = [
                1.0 - ode_linear.iter().sum::<f64>(),
                ode_linear[0],
                ode_linear[1],
                ode_linear[2],
            ];
            let full_closed = [closed[0], closed_linear[0], closed_linear[1], closed_linear[2]];
            let d = full_closed
                .iter()
                .zip(&ode_bary)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            worst = worst.max(d);
        }
    }
    let elapsed = start.elapsed();
    assert!(worst < 1e-6, "sup-norm distance to the integrator: {worst:e}");
    assert!(elapsed.as_secs_f64() < 10.0, "oracle sweep took {elapsed:?}");
    println!(
        "criterion 1 PASS: closed form vs RK4 oracle, sup distance {worst:.2e} in {:.2}s",
        elapsed.as_secs_f64()
    );
}

/// Criterion 2: the group law Φ_{s+t} = Φ_s ∘ Φ_t holds to 1e-9 over 500
/// seeded triples with s, t ∈ [-5, 5].
#[test]
fn criterion_2_group_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let p = random_interior(&mut rng, 3);
        let s = rng.gen_range(-5.0..5.0);
        let t = rng.gen_range(-5.0..5.0);
        let once = standard_flow(&p, s + t).unwrap();
        let twice = standard_flow(&standard_flow(&p, t).unwrap(), s).unwrap();
        let d = once
            .iter()
            .zip(&twice)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        worst = worst.max(d);
    }
    assert!(worst < 1e-9, "group law deviation {worst:e}");
    println!("criterion 2 PASS: group law over 500 triples, worst deviation {worst:.2e}");
}

/// Criterion 3: the finite-difference linearization of the time-0.1 map at
/// vertex v_ℓ of the ordered 3-simplex has eigenvalues e^{±0.1} with
/// e^{+0.1} of multiplicity ℓ, each to 1e-3.
#[test]
fn criterion_3_vertex_spectrum() {
    let k = Complex::simplex(&["v0", "v1", "v2", "v3"]);
    let orient = Orientation::new(&k, &descending_order_edges(&k)).unwrap();
    let t = 0.1;
    for v in 0..4 {
        let lin = vertex_linearization(&k, &orient, v, t, 1e-5).unwrap();
        assert_eq!(lin.rank, v);
        let plus = lin
            .eigenvalues
            .iter()
            .filter(|&&e| (e - t.exp()).abs() < 1e-3)
            .count();
        let minus = lin
            .eigenvalues
            .iter()
            .filter(|&&e| (e - (-t).exp()).abs() < 1e-3)
            .count();
        assert_eq!(plus, v, "expanding multiplicity at vertex {v}");
        assert_eq!(plus + minus, 3, "full spectrum at vertex {v}");
    }
    println!("criterion 3 PASS: linearization spectra at all four vertices match e^{{±0.1}}");
}

/// Criterion 4: affine potentials increasing along the vertex order decrease
/// strictly along 200 sampled nonconstant trajectory steps, for 5 potentials.
#[test]
fn criterion_4_lyapunov_decrease() {
    let k = Complex::simplex(&["v0", "v1", "v2", "v3"]);
    let orient = Orientation::new(&k, &descending_order_edges(&k)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..5 {
        let mut lambda: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..10.0)).collect();
        lambda.sort_by(|a, b| a.partial_cmp(b).unwrap());
        lambda.dedup();
        assert_eq!(lambda.len(), 4, "degenerate sample");
        let mut violations = 0;
        for _ in 0..200 {
            let coords = random_interior(&mut rng, 3);
            let p = BarycentricPoint::new(vec![0, 1, 2, 3], coords).unwrap();
            let dt = rng.gen_range(0.05..1.0);
            let q = complex_flow(&k, &orient, &p, dt).unwrap();
            let before = lyapunov_value(&p, &lambda).unwrap();
            let after = lyapunov_value(&q, &lambda).unwrap();
            if after >= before {
                violations += 1;
            }
        }
        assert_eq!(violations, 0, "potential {trial} failed to decrease");
    }
    println!("criterion 4 PASS: 5 potentials × 200 steps, zero monotonicity violations");
}

/// Criterion 5: Morse sums and certificates of the four model flows match
/// their exact integer values.
#[test]
fn criterion_5_conley_morse_suite() {
    let circle = Complex::simplex_boundary(&["v0", "v1", "v2"]);
    let report = morse_inequalities(
        &circle,
        &Orientation::new(&circle, &descending_order_edges(&circle)).unwrap(),
    )
    .unwrap();
    assert_eq!(report.morse_sum, PolyZ::from_coeffs(vec![1, 1]));
    assert_eq!(report.certificate, Some(PolyZ::zero()));

    let disk = Complex::simplex(&["v0", "v1", "v2"]);
    let report = morse_inequalities(
        &disk,
        &Orientation::new(&disk, &descending_order_edges(&disk)).unwrap(),
    )
    .unwrap();
    assert_eq!(report.morse_sum, PolyZ::one());
    assert_eq!(report.certificate, Some(PolyZ::zero()));

    let edge = Complex::simplex(&["a", "b"]);
    let (dk, orient) = stiefel_orientation(&edge).unwrap();
    let report = morse_inequalities(&dk, &orient).unwrap();
    assert_eq!(report.morse_sum, PolyZ::from_coeffs(vec![2, 1]));
    assert_eq!(report.certificate, Some(PolyZ::one()));

    let circle = Complex::simplex_boundary(&["a", "b", "c"]);
    let (dk, orient) = stiefel_orientation(&circle).unwrap();
    let report = morse_inequalities(&dk, &orient).unwrap();
    assert_eq!(report.morse_sum, PolyZ::from_coeffs(vec![3, 3]));
    assert_eq!(report.certificate, Some(PolyZ::from_coeffs(vec![2])));

    println!("criterion 5 PASS: four Morse sums and certificates match exactly");
}

/// Criterion 6: the dimension function on the boundary-3-simplex face poset
/// gives Σ t^{dim F} = 4 + 6t + 4t² with certificate 3 + 3t; the elementary
/// edge pairing has one critical cell with equality; restriction to 50
/// random ideals preserves the interval condition.
#[test]
fn criterion_6_poset_morse_suite() {
    let sphere = Complex::simplex_boundary(&["a", "b", "c", "d"]);
    let fp = CWFacePoset::from_complex(&sphere);
    let dim_fn = AdmissibleFunction::new(
        fp.poset(),
        (0..fp.poset().len()).map(|x| fp.dim_of(x) as f64).collect(),
    )
    .unwrap();
    let space = PolyZ::from_coeffs(vec![1, 0, 1]);
    let report = cminus_morse_report(&fp, &dim_fn, &space).unwrap();
    assert_eq!(report.sum, PolyZ::from_coeffs(vec![4, 6, 4]));
    assert_eq!(report.certificate, Some(PolyZ::from_coeffs(vec![3, 3])));

    let edge = Complex::simplex(&["a", "b"]);
    let efp = CWFacePoset::from_complex(&edge);
    let a = efp.poset().element_index("a").unwrap();
    let b = efp.poset().element_index("b").unwrap();
    let e = efp.poset().element_index("a|b").unwrap();
    let mut values = vec![0.0; 3];
    values[a] = 0.0;
    values[b] = 2.0;
    values[e] = 1.0;
    let forman = AdmissibleFunction::new(efp.poset(), values).unwrap();
    let report = cminus_morse_report(&efp, &forman, &PolyZ::one()).unwrap();
    let critical: Vec<_> = report
        .per_face
        .iter()
        .filter(|d| d.critical && !d.polynomial.is_zero())
        .collect();
    assert_eq!(critical.len(), 1, "one essential critical cell");
    assert_eq!(report.sum, PolyZ::one());
    assert_eq!(report.certificate, Some(PolyZ::zero()));
    assert!(report.c_holds);
    assert_eq!(report.classical_sum, Some(PolyZ::one()));

    // ideal restriction keeps the C₋ interval condition
    let p = fp.poset();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..50 {
        let generators: Vec<usize> =
            (0..p.len()).filter(|_| rng.gen_bool(0.4)).collect();
        let ideal = p.ideal_generated_by(&generators);
        if ideal.is_empty() {
            continue;
        }
        assert!(p.is_ideal(&ideal));
        let (sub, map) = p.restriction(&ideal);
        let g = dim_fn.restrict(&map);
        let maps = c_plus_minus(&sub, &g).unwrap();
        assert!(maps.c_minus_holds(), "ideal restriction broke the interval condition");
    }
    println!("criterion 6 PASS: poset Morse sums, one critical cell, 50 ideal restrictions");
}

/// Criterion 7: graph-gap formula to 1e-9 on 100 pairs; sandwich and
/// monotonicity on 100 triples; shadow equality chain to 1e-8 on 100
/// transversal pairs; decay bound on a 0..5 grid for 50 instances.
#[test]
fn criterion_7_gap_formula_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    for _ in 0..100 {
        let u = Subspace::random(5, 2, &mut rng);
        let s = DMatrix::<f64>::from_fn(3, 2, |_, _| StandardNormal.sample(&mut rng));
        let residual = graph_gap_check(&u, &s).unwrap();
        assert!(residual < 1e-9, "graph formula residual {residual:e}");
    }

    for _ in 0..100 {
        let u = Subspace::random(6, 2, &mut rng);
        let w = Subspace::random(6, 4, &mut rng);
        let v = Subspace::span(&w.basis().columns(0, 3).into_owned());
        assert!(hat_gap(&u, &v).unwrap().sandwich_holds(1e-10));
        assert!(gap(&u, &v).unwrap() >= gap(&u, &w).unwrap() - 1e-10);
        assert!(gap(&v, &u).unwrap() <= gap(&w, &u).unwrap() + 1e-10);
    }

    let mut done = 0;
    while done < 100 {
        let u = Subspace::random(6, 2, &mut rng);
        let v = Subspace::random(6, 4, &mut rng);
        match shadow_slope(&u, &v) {
            Ok(ss) => {
                assert!(ss.equality_residual < 1e-8, "chain residual {:e}", ss.equality_residual);
                done += 1;
            }
            Err(tameflow::Error::TransversalityFailure) => continue,
            Err(e) => panic!("{e}"),
        }
    }

    let tgrid: Vec<f64> = (0..=10).map(|i| 0.5 * i as f64).collect();
    let mut done = 0;
    while done < 50 {
        let diag: Vec<f64> = (0..5)
            .map(|i| {
                let mag = rng.gen_range(0.5..2.0);
                if i < 2 {
                    mag
                } else {
                    -mag
                }
            })
            .collect();
        let a = SymOperator::diagonal(&diag);
        let u = a.positive_eigenspace();
        let v = Subspace::random(5, 3, &mut rng);
        match decay_bound_check(&a, &u, &v, &tgrid) {
            Ok(check) => {
                assert!(check.all_hold, "decay bound failed: {:?}", check.rows);
                done += 1;
            }
            Err(tameflow::Error::TransversalityFailure) => continue,
            Err(e) => panic!("{e}"),
        }
    }
    println!("criterion 7 PASS: graph formula, sandwich, equality chain, decay bound");
}

/// Criterion 8: the model flow matches |a|e^{-2t}(1+a²e^{-4t})^{-1/2} to
/// 1e-9; the gap/distance ratio grows like e^t, passing 10³ once e^t does;
/// and the clustering ratio of {-1, 1, 3} is exactly 2/3.
///
/// The stated criterion puts the 10³ crossing at t = 3, but it also states
/// ratio ≈ e^t, and e³ ≈ 20: the two halves contradict each other. The
/// formula is the substantive claim (the ratio diverges like e^t), so the
/// crossing is asserted at t = 7 where e^t first exceeds 10³.
#[test]
fn criterion_8_model_flow_and_nu() {
    let tgrid: Vec<f64> = (0..=14).map(|i| 0.5 * i as f64).collect();
    let rows = siv_model_demo(1.0, &tgrid).unwrap();
    for row in &rows {
        assert!((row.gap - row.model).abs() < 1e-9, "closed form at t={}", row.t);
    }
    for row in rows.iter().filter(|r| r.t >= 3.0) {
        assert!(
            (row.ratio / row.t.exp() - 1.0).abs() < 1e-3,
            "ratio vs e^t at t={}",
            row.t
        );
    }
    for w in rows.windows(2) {
        assert!(w[1].ratio > w[0].ratio, "ratio not increasing at t={}", w[1].t);
    }
    let at7 = rows.iter().find(|r| r.t == 7.0).unwrap();
    assert!(at7.ratio > 1e3, "ratio at t=7 is {}", at7.ratio);

    let nu = spectral_nu(&[CriticalSpectrum::new(vec![-1.0, 1.0, 3.0]).unwrap()]).unwrap();
    assert_eq!(nu, 2.0 / 3.0);
    println!("criterion 8 PASS: model flow closed form, ratio ≈ e^t, ν = 2/3");
}

/// Criterion 9: 1000 seeded pair limits with zero support-rule violations;
/// parallelism on 50 pairs per dimension; normal-slice round trips below
/// 1e-8 on 20 instances.
#[test]
fn criterion_9_asymptotics() {
    let report = asymptotic_pair_sample(3, 1000, 25.0, 0).unwrap();
    assert_eq!(report.violations, 0, "support-rule violations: {}", report.violations);
    assert_eq!(report.samples, 1000);

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for m in [2usize, 3, 4] {
        for _ in 0..50 {
            let top = rng.gen_range(0.05..0.6);
            let mut p = vec![0.0; m + 1];
            let mut q = vec![0.0; m + 1];
            p[m] = top;
            q[m] = top;
            let (mut sp, mut sq) = (0.0, 0.0);
            for i in 0..m {
                p[i] = rng.gen_range(0.05..1.0);
                q[i] = rng.gen_range(0.05..1.0);
                sp += p[i];
                sq += q[i];
            }
            for i in 0..m {
                p[i] *= (1.0 - top) / sp;
                q[i] *= (1.0 - top) / sq;
            }
            let t = rng.gen_range(-3.0..3.0);
            assert!(parallelism_check(&p, &q, t).unwrap(), "m={m}");
        }
    }

    let mut checked = 0;
    let mut attempts = 0;
    while checked < 20 {
        attempts += 1;
        assert!(attempts < 200, "could not find 20 valid slice instances");
        let m = 2 + (attempts % 3); // m ∈ {2,3,4}
        let k = 1 + attempts % (m - 1);
        let mut w_plus = vec![0.0; m + 1];
        let mut w_minus = vec![0.0; m + 1];
        let mut s = 0.0;
        for slot in w_plus.iter_mut().take(m + 1).skip(k) {
            *slot = rng.gen_range(0.2..1.0);
            s += *slot;
        }
        for slot in w_plus.iter_mut().take(m + 1).skip(k) {
            *slot /= s;
        }
        s = 0.0;
        for slot in w_minus.iter_mut().take(k + 1) {
            *slot = rng.gen_range(0.2..1.0);
            s += *slot;
        }
        for slot in w_minus.iter_mut().take(k + 1) {
            *slot /= s;
        }
        // the round trip crosses a near-vertex region whose smallest
        // coordinate shrinks like e^{-mt}; keep m·t inside the support clamp
        let cap = 31.0 / m as f64 - 1.0;
        let t = match slice_threshold(&w_plus, &w_minus, k) {
            Ok(t0) => (t0 + 3.0).min(cap),
            Err(_) => continue,
        };
        match normal_slice_intersection(&w_plus, &w_minus, k, t) {
            Ok(res) => {
                assert!(
                    res.roundtrip_residual < 1e-8,
                    "round trip residual {:e} (m={m}, k={k}, t={t})",
                    res.roundtrip_residual
                );
                checked += 1;
            }
            Err(tameflow::Error::SliceBelowThreshold { .. }) => continue,
            Err(e) => panic!("{e}"),
        }
    }
    println!("criterion 9 PASS: 1000 limit pairs, 150 parallel chords, 20 slice round trips");
}

/// Criterion 10: Betti numbers of the six model spaces match their known
/// values, before and after one barycentric subdivision.
#[test]
fn criterion_10_homology_oracle() {
    let corpus: Vec<(Complex, Vec<usize>, &str)> = vec![
        (Complex::point("a"), vec![1], "point"),
        (Complex::two_points("a", "b"), vec![2], "pair of points"),
        (Complex::simplex_boundary(&["a", "b", "c"]), vec![1, 1], "circle"),
        (Complex::simplex_boundary(&["a", "b", "c", "d"]), vec![1, 0, 1], "sphere"),
        (
            Complex::two_points("a", "b").join(&Complex::two_points("c", "d")),
            vec![1, 1],
            "joined circle",
        ),
        (
            Complex::simplex_boundary(&["a", "b", "c"]).barycentric_subdivision(1),
            vec![1, 1],
            "subdivided circle",
        ),
    ];
    for (k, expect, name) in &corpus {
        assert_eq!(&homology_summary(k).betti, expect, "{name}");
        let d = k.barycentric_subdivision(1);
        assert_eq!(&homology_summary(&d).betti, expect, "subdivided {name}");
    }
    println!("criterion 10 PASS: Betti numbers exact on all six spaces and their subdivisions");
}
