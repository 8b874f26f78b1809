//! Independent trajectory oracle: classical fourth-order Runge-Kutta on the
//! triangular vector field of the ordered simplex, written directly from its
//! recursive definition in linear coordinates. No closed-form exponentials
//! anywhere, so agreement with the library's flow is a genuine cross-check.

/// The vector field in linear coordinates `(x_1, …, x_k)` over the sink: the
/// top coordinate obeys `ẋ_k = -x_k(1 - x_k)`, the rest pull back the field
/// of the shadow `x_i / (1 - x_k)` on the opposite face.
fn field(x: &[f64]) -> Vec<f64> {
    let k = x.len();
    let mut out = vec![0.0; k];
    if k == 0 {
        return out;
    }
    let top = x[k - 1];
    out[k - 1] = -top * (1.0 - top);
    if k > 1 {
        let rest = 1.0 - top;
        if rest.abs() < 1e-14 {
            return out; // at the source vertex the lower field vanishes
        }
        let shadow: Vec<f64> = x[..k - 1].iter().map(|c| c / rest).collect();
        let inner = field(&shadow);
        for i in 0..k - 1 {
            out[i] = top * x[i] + rest * inner[i];
        }
    }
    out
}

fn rk4_step(x: &[f64], dt: f64) -> Vec<f64> {
    let k1 = field(x);
    let x2: Vec<f64> = x.iter().zip(&k1).map(|(a, b)| a + 0.5 * dt * b).collect();
    let k2 = field(&x2);
    let x3: Vec<f64> = x.iter().zip(&k2).map(|(a, b)| a + 0.5 * dt * b).collect();
    let k3 = field(&x3);
    let x4: Vec<f64> = x.iter().zip(&k3).map(|(a, b)| a + dt * b).collect();
    let k4 = field(&x4);
    x.iter()
        .enumerate()
        .map(|(i, a)| a + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Integrates from `x0` and returns the state at each checkpoint (which must
/// be increasing). The step is subdivided to land on checkpoints exactly.
pub fn integrate(x0: &[f64], checkpoints: &[f64], dt: f64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut x = x0.to_vec();
    let mut t = 0.0;
    for &target in checkpoints {
        while t < target - 1e-12 {
            let step = dt.min(target - t);
            x = rk4_step(&x, step);
            t += step;
        }
        out.push(x.clone());
    }
    out
}
