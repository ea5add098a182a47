//! Scalar abstraction shared by every kernel.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating point type the solver can run on (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Default + Debug + Display + Send + Sync + 'static
{
    /// Converts a literal. Exact for `f64`, rounded for `f32`.
    fn lit(x: f64) -> Self;

    fn to_f64_lossy(self) -> f64;

    fn from_count(n: usize) -> Self {
        Self::lit(n as f64)
    }
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            #[inline(always)]
            fn lit(x: f64) -> Self {
                x as $t
            }

            #[inline(always)]
            fn to_f64_lossy(self) -> f64 {
                self as f64
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

pub type Vec3<T> = [T; 3];
pub type Mat3<T> = [[T; 3]; 3];
pub type Ten3<T> = [[[T; 3]; 3]; 3];
pub type Ten4<T> = [[[[T; 3]; 3]; 3]; 3];

#[inline(always)]
pub fn zero3<T: Real>() -> Vec3<T> {
    [T::zero(); 3]
}

#[inline(always)]
pub fn zero33<T: Real>() -> Mat3<T> {
    [[T::zero(); 3]; 3]
}

#[inline(always)]
pub fn zero333<T: Real>() -> Ten3<T> {
    [[[T::zero(); 3]; 3]; 3]
}

#[inline(always)]
pub fn zero3333<T: Real>() -> Ten4<T> {
    [[[[T::zero(); 3]; 3]; 3]; 3]
}

/// Levi-Civita symbol for indices in `0..3`.
#[inline(always)]
pub fn levi_civita(i: usize, j: usize, k: usize) -> i32 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// `(curl v)_k = eps_klm d_l v_m` given `grad[l][m] = d_l v_m`.
#[inline(always)]
pub fn curl<T: Real>(grad: &Mat3<T>) -> Vec3<T> {
    [
        grad[1][2] - grad[2][1],
        grad[2][0] - grad[0][2],
        grad[0][1] - grad[1][0],
    ]
}

#[inline(always)]
pub fn trace<T: Real>(m: &Mat3<T>) -> T {
    m[0][0] + m[1][1] + m[2][2]
}
