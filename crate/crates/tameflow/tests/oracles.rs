//! Slow independent oracles: a brute-force random search over the feasible
//! set for the nearest containing subspace, and a grid scan over a normal
//! slice counting graph crossings. Both stay independent of the code paths
//! they validate.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tameflow::flow::{normal_slice_intersection, standard_flow};
use tameflow::gap::{dist_to_containing, operator_norm, Subspace};

/// The dominant-singular-subspace construction must be at least as good as
/// ten thousand random candidates containing `U`.
#[test]
fn dist_to_containing_beats_random_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for trial in 0..5 {
        let u = Subspace::random(6, 2, &mut rng);
        let l = Subspace::random(6, 3, &mut rng);
        let computed = dist_to_containing(&l, &u, 3).unwrap();
        let perp = u.orthogonal_complement();
        let mut best = f64::INFINITY;
        for _ in 0..10_000 {
            let coeff = Subspace::random(perp.dim(), 1, &mut rng);
            let extra = perp.basis() * coeff.basis();
            let mut basis = DMatrix::zeros(6, 3);
            basis.view_mut((0, 0), (6, 2)).copy_from(u.basis());
            basis.set_column(2, &extra.column(0));
            let w = Subspace::new(basis).expect("orthonormal by construction");
            let d = operator_norm(&(l.projector() - w.projector()));
            best = best.min(d);
        }
        assert!(
            best >= computed.distance - 1e-6,
            "trial {trial}: random search found {best}, formula gave {}",
            computed.distance
        );
    }
}

/// Scanning the normal slice through `(w₊, w₋)` at `k = 1` on the triangle:
/// the flow graph crosses the slice exactly once, where the closed form puts
/// it.
#[test]
fn normal_slice_grid_search_finds_one_crossing() {
    let w_plus = [0.0, 0.7, 0.3];
    let w_minus = [0.45, 0.55, 0.0];
    // moderate time keeps the crossing well inside a uniform grid; larger
    // times push it exponentially close to the slice boundary
    let t = 4.0;
    let res = normal_slice_intersection(&w_plus, &w_minus, 1, t).unwrap();
    assert!(res.roundtrip_residual < 1e-8);

    // the slice through w₊ parallel to the [e0, e1] face: x(s) = (s, 0.7-s, 0.3);
    // a point is on the graph when its flow hits the plane {y0 = 0.45}
    let steps = 400;
    let mut crossings = Vec::new();
    let mut prev: Option<f64> = None;
    let mut prev_s = 0.0;
    for i in 1..steps {
        let s = 0.7 * i as f64 / steps as f64;
        let x = [s, 0.7 - s, 0.3];
        let g = standard_flow(&x, t).unwrap()[0] - w_minus[0];
        if let Some(p) = prev {
            if p.signum() != g.signum() {
                crossings.push((prev_s, s));
            }
        }
        prev = Some(g);
        prev_s = s;
    }
    assert_eq!(crossings.len(), 1, "expected a unique graph point, got {crossings:?}");
    let (lo, hi) = crossings[0];
    assert!(
        res.x[0] >= lo - 0.7 / steps as f64 && res.x[0] <= hi + 0.7 / steps as f64,
        "closed-form crossing {} outside the bracket ({lo}, {hi})",
        res.x[0]
    );
}
