//! Prescribed matter sources for FO-CCZ4 (no back-reaction).

use crate::scalar::{zero33, Mat3, Real, Vec3};

/// Projections of the energy-momentum tensor at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatterRecord<T> {
    pub tau: T,
    pub s_i: Vec3<T>,
    pub s_ij: Mat3<T>,
}

impl<T: Real> Default for MatterRecord<T> {
    fn default() -> Self {
        Self::vacuum()
    }
}

impl<T: Real> MatterRecord<T> {
    pub fn vacuum() -> Self {
        Self {
            tau: T::zero(),
            s_i: [T::zero(); 3],
            s_ij: zero33(),
        }
    }

    /// `S = phi^2 gtilde^ij S_ij`
    #[inline]
    pub fn trace(&self, phi: T, gi: &Mat3<T>) -> T {
        let mut s = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                s += gi[i][j] * self.s_ij[i][j];
            }
        }
        phi * phi * s
    }

    pub fn is_vacuum(&self) -> bool {
        *self == Self::vacuum()
    }
}

/// Velocity field advecting the energy density tracer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VelocityField<T> {
    Static,
    /// `v = Omega x x`, switched off outside `r_cut` through a smoothstep of
    /// width `h_smooth`.
    RigidRotation {
        omega: Vec3<T>,
        r_cut: T,
        h_smooth: T,
    },
}

/// `3 s^2 - 2 s^3` clamped to `[0, 1]`.
#[inline]
pub fn smoothstep<T: Real>(s: T) -> T {
    let s = s.max(T::zero()).min(T::one());
    s * s * (T::lit(3.0) - T::lit(2.0) * s)
}

impl<T: Real> VelocityField<T> {
    #[inline]
    pub fn at(&self, x: &Vec3<T>) -> Vec3<T> {
        match *self {
            VelocityField::Static => [T::zero(); 3],
            VelocityField::RigidRotation {
                omega,
                r_cut,
                h_smooth,
            } => {
                let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                let w = if h_smooth > T::zero() {
                    smoothstep((r_cut - r) / h_smooth)
                } else if r < r_cut {
                    T::one()
                } else {
                    T::zero()
                };
                [
                    w * (omega[1] * x[2] - omega[2] * x[1]),
                    w * (omega[2] * x[0] - omega[0] * x[2]),
                    w * (omega[0] * x[1] - omega[1] * x[0]),
                ]
            }
        }
    }
}

/// Where the matter record of each point comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum MatterModel<T> {
    Vacuum,
    Uniform(MatterRecord<T>),
    /// `tau` is the trailing tracer component, obeying
    /// `d_t tau + v_k d_k tau = 0`; `S_i` and `S_ij` are fixed.
    AdvectedTau {
        velocity: VelocityField<T>,
        s_i: Vec3<T>,
        s_ij: Mat3<T>,
    },
}

impl<T: Real> MatterModel<T> {
    pub fn has_tracer(&self) -> bool {
        matches!(self, MatterModel::AdvectedTau { .. })
    }

    /// Matter record at a point whose state (including any tracer) is `q`.
    #[inline]
    pub fn record(&self, q: &[T], tracer: usize) -> MatterRecord<T> {
        match self {
            MatterModel::Vacuum => MatterRecord::vacuum(),
            MatterModel::Uniform(r) => *r,
            MatterModel::AdvectedTau { s_i, s_ij, .. } => MatterRecord {
                tau: q[tracer],
                s_i: *s_i,
                s_ij: *s_ij,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_inside_and_outside_cutoff() {
        let v = VelocityField::<f64>::RigidRotation {
            omega: [0.0, 0.0, 0.2],
            r_cut: 5.0,
            h_smooth: 2.0,
        };
        assert_eq!(v.at(&[1.0, 0.0, 0.0]), [0.0, 0.2, 0.0]);
        assert_eq!(v.at(&[6.0, 0.0, 0.0]), [0.0, 0.0, 0.0]);
        let mid = v.at(&[4.0, 0.0, 0.0]);
        assert!((mid[1] - 0.8 * 0.5).abs() < 1e-15);
    }

    #[test]
    fn trace_uses_physical_metric() {
        let mut m = MatterRecord::<f64>::vacuum();
        m.s_ij[0][0] = 1.0;
        m.s_ij[1][1] = 2.0;
        let gi = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert_eq!(m.trace(2.0, &gi), 12.0);
    }
}
