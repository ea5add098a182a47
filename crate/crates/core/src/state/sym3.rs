use crate::error::StateError;
use crate::scalar::{Mat3, Real};

/// Slot of `(i, j)` in the packed order 11, 12, 13, 22, 23, 33.
pub const SYM: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];

/// `(i, j)` pairs in packed order.
pub const SYM_PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

pub const SYM_LABELS: [&str; 6] = ["11", "12", "13", "22", "23", "33"];

/// Tolerance used by [`Sym3::pack`].
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Symmetric 3x3 tensor stored in 6 slots.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Sym3<T>(pub [T; 6]);

impl<T: Real> Sym3<T> {
    pub fn identity() -> Self {
        let (o, z) = (T::one(), T::zero());
        Sym3([o, z, z, o, z, o])
    }

    /// Packs a matrix, rejecting asymmetry larger than [`SYMMETRY_TOL`]
    /// (relative to the largest entry, absolute below 1).
    pub fn pack(m: &Mat3<T>) -> Result<Self, StateError> {
        let mut scale = T::one();
        for row in m {
            for &v in row {
                scale = scale.max(v.abs());
            }
        }
        let tol = T::lit(SYMMETRY_TOL) * scale;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let diff = (m[i][j] - m[j][i]).abs();
            if !(diff <= tol) {
                return Err(StateError::NotSymmetric {
                    i,
                    j,
                    diff: diff.to_f64_lossy(),
                });
            }
        }
        Ok(Self::pack_unchecked(m))
    }

    #[inline]
    pub fn pack_unchecked(m: &Mat3<T>) -> Self {
        Sym3([m[0][0], m[0][1], m[0][2], m[1][1], m[1][2], m[2][2]])
    }

    #[inline]
    pub fn unpack(&self) -> Mat3<T> {
        let v = &self.0;
        [[v[0], v[1], v[2]], [v[1], v[3], v[4]], [v[2], v[4], v[5]]]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.0[SYM[i][j]]
    }

    pub fn det(&self) -> T {
        det3(&self.unpack())
    }
}

#[inline]
pub fn det3<T: Real>(m: &Mat3<T>) -> T {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}
