//! Toy curl-involution systems and the GLM induction baseline.
//!
//! Flux divergences are differentiated with dual numbers seeded by the point
//! gradients, so no product rule is written out by hand here.

use crate::dual::Dual;
use crate::eps;

#[derive(Clone, Debug)]
pub struct ToyParams {
    pub c0: f64,
    pub a_c: f64,
    pub a_d: f64,
    pub a_b: f64,
    pub eps_c: f64,
    pub eps_d: f64,
    pub eps_b: f64,
    pub glm: bool,
}

/// Derivative along `axis` of `f(state)`, via duals seeded with `dq[.][axis]`.
fn flux_derivative<F>(q: &[f64], dq: &[[f64; 3]], axis: usize, f: F) -> f64
where
    F: Fn(&[Dual]) -> Dual,
{
    let seeded: Vec<Dual> = q
        .iter()
        .zip(dq)
        .map(|(v, g)| Dual::new(*v, g[axis]))
        .collect();
    f(&seeded).d
}

/// Storage: rho, rho v (3), J (3), psi (3), phi, then optionally Bvec (3), chi.
/// `s` and `ds[l][k] = d_l S_k` are only read when `nonhomogeneous` is set.
pub fn toy_rhs(
    q: &[f64],
    dq: &[[f64; 3]],
    p: &ToyParams,
    nonhomogeneous: bool,
    s: [f64; 3],
    ds: [[f64; 3]; 3],
) -> Vec<f64> {
    let glm = if p.glm { 1.0 } else { 0.0 };
    let rho = q[0];
    let v = [q[1] / rho, q[2] / rho, q[3] / rho];
    let mut out = vec![0.0; q.len()];

    // continuity
    for i in 0..3 {
        out[0] -= flux_derivative(q, dq, i, |w| w[1 + i]);
    }
    // momentum
    for k in 0..3 {
        for i in 0..3 {
            out[1 + k] -= flux_derivative(q, dq, i, |w| {
                w[1 + i] * w[1 + k] / w[0] + p.c0 * p.c0 * (w[0] * w[4 + i] * w[4 + k])
            });
        }
    }
    // J
    for k in 0..3 {
        let mut r = -flux_derivative(q, dq, k, |w| {
            let mut chi = Dual::default();
            for m in 0..3 {
                chi = chi + w[1 + m] / w[0] * w[4 + m];
            }
            chi
        });
        for m in 0..3 {
            r -= v[m] * (dq[4 + k][m] - dq[4 + m][k]);
        }
        for l in 0..3 {
            for m in 0..3 {
                r -= glm * eps(k, l, m) * dq[7 + m][l];
            }
        }
        if nonhomogeneous {
            r += s[k];
        }
        out[4 + k] = r;
    }
    // psi
    for k in 0..3 {
        let mut r = 0.0;
        for l in 0..3 {
            for m in 0..3 {
                r += p.a_c * p.a_c * eps(k, l, m) * dq[4 + m][l];
            }
        }
        r -= dq[10][k];
        r -= p.eps_c * q[7 + k];
        if nonhomogeneous {
            r -= p.a_c * p.a_c * q[11 + k];
        }
        out[7 + k] = glm * r;
    }
    // phi
    {
        let div: f64 = (0..3).map(|m| dq[7 + m][m]).sum();
        out[10] = glm * (-p.a_d * p.a_d * div - p.eps_d * q[10]);
    }
    if nonhomogeneous {
        // Burgers vector
        for i in 0..3 {
            let mut r = 0.0;
            for k in 0..3 {
                r -= flux_derivative(q, dq, k, |w| {
                    let vi = w[1 + i] / w[0];
                    let vk = w[1 + k] / w[0];
                    w[11 + i] * vk - vi * w[11 + k]
                });
                for jj in 0..3 {
                    r += eps(i, k, jj) * ds[k][jj];
                }
            }
            let div: f64 = (0..3).map(|m| dq[11 + m][m]).sum();
            r -= v[i] * div;
            r -= glm * dq[14][i];
            out[11 + i] = r;
        }
        let div: f64 = (0..3).map(|m| dq[11 + m][m]).sum();
        out[14] = glm * (-p.a_b * p.a_b * div - p.eps_b * q[14]);
    }
    out
}

/// Storage: E (3), B (3), phi.
pub fn induction_rhs(
    q: &[f64],
    dq: &[[f64; 3]],
    c_light: f64,
    a_d: f64,
    eps_d: f64,
    glm: bool,
) -> Vec<f64> {
    let g = if glm { 1.0 } else { 0.0 };
    let mut out = vec![0.0; 7];
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                out[k] += c_light * c_light * eps(k, i, j) * dq[3 + j][i];
                out[3 + k] -= eps(k, i, j) * dq[j][i];
            }
        }
        out[3 + k] -= g * dq[6][k];
    }
    let div: f64 = (0..3).map(|m| dq[3 + m][m]).sum();
    out[6] = g * (-a_d * a_d * div - eps_d * q[6]);
    out
}
