//! Pointwise right-hand sides `dQ/dt = -A(Q) . grad Q + S(Q)`, signal-speed
//! bounds and constraint monitors of the built-in systems.

pub mod foccz4;
pub mod induction;
pub mod matter;
pub mod toy;

pub use foccz4::{rhs_foccz4, Foccz4System};
pub use induction::{rhs_induction_glm, InductionSystem};
pub use matter::{MatterModel, MatterRecord, VelocityField};
pub use toy::{rhs_toy_homogeneous, rhs_toy_nonhomogeneous, ToySystem};

use crate::error::RhsError;
use crate::scalar::{Mat3, Real, Vec3};
use crate::state::SystemDescriptor;

/// Name and component count of one monitored constraint family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonitorFamily {
    pub name: String,
    pub count: usize,
}

impl MonitorFamily {
    pub fn new(name: &str, count: usize) -> Self {
        Self {
            name: name.to_string(),
            count,
        }
    }
}

/// A first-order system the method-of-lines driver can evolve.
///
/// `dq[c][m]` is the derivative of component `c` along axis `m`; entries for
/// components without [`System::needs_gradient`] are unspecified.
pub trait System<T: Real>: Send + Sync {
    fn descriptor(&self) -> &SystemDescriptor;

    /// Whether the right-hand side reads spatial derivatives of component `c`.
    fn needs_gradient(&self, c: usize) -> bool;

    /// Components pinned at their current value (zero right-hand side, no
    /// dissipation), such as cleaning fields with cleaning switched off.
    fn is_frozen(&self, _c: usize) -> bool {
        false
    }

    fn rhs(&self, x: &Vec3<T>, q: &[T], dq: &[[T; 3]], out: &mut [T]) -> Result<(), RhsError>;

    /// Upper bound on the characteristic speeds at one point.
    fn max_signal_speed(&self, x: &Vec3<T>, q: &[T]) -> T;

    fn monitor_families(&self) -> Vec<MonitorFamily>;

    /// Pointwise residuals of every family, concatenated in family order.
    /// Reads gradients of all components.
    fn monitor(&self, x: &Vec3<T>, q: &[T], dq: &[[T; 3]], out: &mut [T]);

    /// Whether [`System::project`] does anything.
    fn projects(&self) -> bool {
        false
    }

    /// Optional algebraic projection applied after each full time step.
    fn project(&self, _q: &mut [T]) {}
}

/// Largest eigenvalue of a symmetric 3x3 matrix (closed form).
pub fn sym_max_eigenvalue<T: Real>(m: &Mat3<T>) -> T {
    let p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    let three = T::lit(3.0);
    let q = (m[0][0] + m[1][1] + m[2][2]) / three;
    if p1 == T::zero() {
        return m[0][0].max(m[1][1]).max(m[2][2]);
    }
    let p2 =
        (m[0][0] - q).powi(2) + (m[1][1] - q).powi(2) + (m[2][2] - q).powi(2) + T::lit(2.0) * p1;
    let p = (p2 / T::lit(6.0)).sqrt();
    let mut bm = *m;
    for (i, row) in bm.iter_mut().enumerate() {
        row[i] -= q;
        for v in row.iter_mut() {
            *v /= p;
        }
    }
    let r = (crate::state::sym3::det3(&bm) / T::lit(2.0))
        .max(-T::one())
        .min(T::one());
    let angle = r.acos() / three;
    q + T::lit(2.0) * p * angle.cos()
}

/// `eps_klm d_l v_m` for a vector stored at `base + stride * m`.
#[inline(always)]
pub fn curl_of<T: Real>(dq: &[[T; 3]], base: usize, stride: usize) -> Vec3<T> {
    let v = |m: usize, l: usize| dq[base + stride * m][l];
    [v(2, 1) - v(1, 2), v(0, 2) - v(2, 0), v(1, 0) - v(0, 1)]
}

/// `d_m v_m` for a vector stored at `base + stride * m`.
#[inline(always)]
pub fn div_of<T: Real>(dq: &[[T; 3]], base: usize, stride: usize) -> T {
    dq[base][0] + dq[base + stride][1] + dq[base + 2 * stride][2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalue_of_diagonal_and_rotated() {
        let m = [[2.0, 0.0, 0.0], [0.0, 5.0, 0.0], [0.0, 0.0, 1.0]];
        assert_eq!(sym_max_eigenvalue(&m), 5.0);
        // eigenvalues of [[2,1,0],[1,2,0],[0,0,1]] are 3, 1, 1
        let m: Mat3<f64> = [[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 1.0]];
        assert!((sym_max_eigenvalue(&m) - 3.0).abs() < 1e-14);
    }
}
