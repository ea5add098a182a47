//! Random point states for equivalence tests.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::sym_slot;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut TestRng, half_width: f64) -> f64 {
    rng.gen_range(-half_width..half_width)
}

/// FO-CCZ4 state near flat space: `gtilde = I + O(0.2)`, logarithms and all
/// other variables in `[-0.3, 0.3]`, gradients in `[-0.3, 0.3]`. `n` is 103
/// or 104 (with a trailing positive tracer).
pub fn ccz4_point(rng: &mut TestRng, n: usize) -> (Vec<f64>, Vec<[f64; 3]>) {
    let mut q: Vec<f64> = (0..n).map(|_| uniform(rng, 0.3)).collect();
    for i in 0..3 {
        for j in i..3 {
            let base = if i == j { 1.0 } else { 0.0 };
            q[4 + sym_slot(i, j)] = base + uniform(rng, 0.1);
        }
    }
    if n > 103 {
        q[103] = rng.gen_range(0.0..1e-3);
    }
    let dq = (0..n)
        .map(|_| [uniform(rng, 0.3), uniform(rng, 0.3), uniform(rng, 0.3)])
        .collect();
    (q, dq)
}

/// Toy state with `rho` in `[0.5, 1.5]`; `n` is 11 or 15.
pub fn toy_point(rng: &mut TestRng, n: usize) -> (Vec<f64>, Vec<[f64; 3]>) {
    let mut q: Vec<f64> = (0..n).map(|_| uniform(rng, 1.0)).collect();
    q[0] = rng.gen_range(0.5..1.5);
    let dq = (0..n)
        .map(|_| [uniform(rng, 1.0), uniform(rng, 1.0), uniform(rng, 1.0)])
        .collect();
    (q, dq)
}

pub fn generic_point(rng: &mut TestRng, n: usize) -> (Vec<f64>, Vec<[f64; 3]>) {
    let q = (0..n).map(|_| uniform(rng, 1.0)).collect();
    let dq = (0..n)
        .map(|_| [uniform(rng, 1.0), uniform(rng, 1.0), uniform(rng, 1.0)])
        .collect();
    (q, dq)
}
