//! Initial data of the benchmark problems.

pub mod io;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::StateError;
use crate::scalar::{Real, Vec3};
use crate::state::layout::{ccz4, induction, toy};
use crate::state::{layout_for, FieldSnapshot, GridSpec, SystemKind};
use crate::systems::{MatterModel, VelocityField};

pub use io::{load_initial_data, save_initial_data, FORMAT_VERSION, MAGIC};

/// Flat space in FO-CCZ4 variables: `alpha = phi = 1`, `gtilde = I`,
/// everything else zero. With `tracer` the layout carries a zero `tau`.
pub fn minkowski_init<T: Real>(grid: &GridSpec<T>, tracer: bool) -> FieldSnapshot<T> {
    let mut d = layout_for(SystemKind::Foccz4);
    if tracer {
        d = d.with_tracer("tau");
    }
    let mut s = FieldSnapshot::zeros(grid.clone(), d);
    for c in [ccz4::GAMMA, ccz4::GAMMA + 3, ccz4::GAMMA + 5] {
        s.component_mut(c).fill(T::one());
    }
    s
}

/// Adds uniform noise in `[-amplitude, amplitude)` to every component at
/// every point.
///
/// Component `c` draws from the ChaCha8 stream `c` of `seed`; point `p`
/// consumes the two 32-bit words at position `2p`. The value at a point
/// therefore depends only on `(seed, component, point)`.
pub fn perturb<T: Real>(s: &mut FieldSnapshot<T>, seed: u64, amplitude: T) {
    if amplitude == T::zero() {
        return;
    }
    let np = s.n_points();
    s.data_mut()
        .par_chunks_mut(np)
        .enumerate()
        .for_each(|(c, comp)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            for v in comp.iter_mut() {
                let u: f64 = rng.gen();
                *v += amplitude * T::lit(2.0 * u - 1.0);
            }
        });
}

/// The noise [`perturb`] adds to component `c` at point `p`.
pub fn perturbation_at(seed: u64, amplitude: f64, c: usize, p: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(c as u64);
    rng.set_word_pos(2 * p as u128);
    let u: f64 = rng.gen();
    amplitude * (2.0 * u - 1.0)
}

/// Zeroes the cleaning fields of a state.
pub fn clear_cleaning<T: Real>(s: &mut FieldSnapshot<T>) {
    for c in s.descriptor().cleaning_components() {
        s.component_mut(c).fill(T::zero());
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToyVariant {
    /// Smooth flow with `J` the gradient of a periodic scalar.
    CurlFree,
    /// Quiescent fluid with a localized vortex in `J`.
    PureCurlError,
}

impl ToyVariant {
    pub fn name(self) -> &'static str {
        match self {
            ToyVariant::CurlFree => "curl_free",
            ToyVariant::PureCurlError => "pure_curl_error",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "curl_free" => Some(ToyVariant::CurlFree),
            "pure_curl_error" => Some(ToyVariant::PureCurlError),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToyInit<T> {
    pub variant: ToyVariant,
    /// Scale of `J`.
    pub amplitude: T,
    /// Gaussian width of the vortex.
    pub width: T,
    /// Scale of the solenoidal velocity of the curl-free variant.
    pub velocity: T,
}

impl<T: Real> ToyInit<T> {
    pub fn new(variant: ToyVariant) -> Self {
        Self {
            variant,
            amplitude: T::lit(0.1),
            width: T::lit(0.25),
            velocity: T::lit(0.05),
        }
    }
}

/// Toy-system initial data on the homogeneous layout.
pub fn toy_init<T: Real>(grid: &GridSpec<T>, init: &ToyInit<T>) -> FieldSnapshot<T> {
    let mut s = FieldSnapshot::zeros(grid.clone(), layout_for(SystemKind::ToyHomogeneous));
    let two_pi = T::lit(2.0 * std::f64::consts::PI);
    let k: [T; 3] = std::array::from_fn(|d| two_pi / grid.extent(d));
    let c = grid.center();
    let [nx, ny, nz] = grid.n;
    for kk in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let p = grid.index(i, j, kk);
                let x = grid.position(i, j, kk);
                let u: [T; 3] = std::array::from_fn(|d| k[d] * (x[d] - grid.min[d]));
                let (rho, v, jv) = match init.variant {
                    ToyVariant::CurlFree => {
                        let rho = T::one() + T::lit(0.1) * u[0].sin();
                        // each entry independent of its own coordinate
                        let v = [
                            init.velocity * u[1].sin(),
                            init.velocity * u[2].sin(),
                            init.velocity * u[0].sin(),
                        ];
                        // grad(cos u0 cos u1)
                        let a = init.amplitude;
                        let jv = [
                            -a * k[0] * u[0].sin() * u[1].cos(),
                            -a * k[1] * u[0].cos() * u[1].sin(),
                            T::zero(),
                        ];
                        (rho, v, jv)
                    }
                    ToyVariant::PureCurlError => {
                        let r: [T; 3] = std::array::from_fn(|d| x[d] - c[d]);
                        let r2 = r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
                        let g =
                            init.amplitude * (-r2 / (T::lit(2.0) * init.width * init.width)).exp();
                        (T::one(), [T::zero(); 3], [-r[1] * g, r[0] * g, T::zero()])
                    }
                };
                s.set(toy::RHO, p, rho);
                for d in 0..3 {
                    s.set(toy::MOM + d, p, rho * v[d]);
                    s.set(toy::J + d, p, jv[d]);
                }
            }
        }
    }
    s
}

/// Rotating binary of Gaussian energy-density blobs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotatingMasses<T> {
    pub amplitude: [T; 2],
    pub sigma: [T; 2],
    pub centers: [Vec3<T>; 2],
    pub omega: Vec3<T>,
    pub r_cut: T,
    /// Width of the velocity cutoff in grid cells.
    pub smoothing_cells: T,
}

impl<T: Real> Default for RotatingMasses<T> {
    fn default() -> Self {
        let l = T::lit;
        Self {
            amplitude: [l(5e-4); 2],
            sigma: [T::one(); 2],
            centers: [
                [l(-2.0), T::zero(), T::zero()],
                [l(2.0), T::zero(), T::zero()],
            ],
            omega: [T::zero(), T::zero(), l(0.2)],
            r_cut: l(5.0),
            smoothing_cells: l(2.0),
        }
    }
}

impl<T: Real> RotatingMasses<T> {
    pub fn validate(&self) -> Result<(), StateError> {
        for s in self.sigma {
            if !(s > T::zero()) {
                return Err(StateError::InvalidParameter(format!(
                    "blob width {s} must be positive"
                )));
            }
        }
        if !(self.r_cut > T::zero()) || self.smoothing_cells < T::zero() {
            return Err(StateError::InvalidParameter(
                "invalid velocity cutoff".into(),
            ));
        }
        Ok(())
    }

    pub fn tau(&self, x: &Vec3<T>) -> T {
        let mut t = T::zero();
        for b in 0..2 {
            let mut r2 = T::zero();
            for d in 0..3 {
                let dx = x[d] - self.centers[b][d];
                r2 += dx * dx;
            }
            t += self.amplitude[b] * (-r2 / (T::lit(2.0) * self.sigma[b] * self.sigma[b])).exp();
        }
        t
    }

    pub fn velocity(&self, grid: &GridSpec<T>) -> VelocityField<T> {
        VelocityField::RigidRotation {
            omega: self.omega,
            r_cut: self.r_cut,
            h_smooth: self.smoothing_cells * grid.min_spacing(),
        }
    }

    /// Advected-`tau` matter model with `S_i = S_ij = 0`.
    pub fn matter(&self, grid: &GridSpec<T>) -> MatterModel<T> {
        MatterModel::AdvectedTau {
            velocity: self.velocity(grid),
            s_i: [T::zero(); 3],
            s_ij: [[T::zero(); 3]; 3],
        }
    }

    /// Flat space with the energy-density tracer.
    pub fn init(&self, grid: &GridSpec<T>) -> FieldSnapshot<T> {
        let mut s = minkowski_init(grid, true);
        let np = grid.n_points();
        for p in 0..np {
            let (i, j, k) = grid.unindex(p);
            s.set(ccz4::TAU, p, self.tau(&grid.position(i, j, k)));
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WaveMode {
    /// Electromagnetic wave at the light speed.
    Transverse,
    /// Divergence error carried by the cleaning scalar at `a_d`.
    Longitudinal,
}

/// Plane wave of the induction system with wave vector
/// `2 pi (m_x / L_x, m_y / L_y, m_z / L_z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InductionWave<T> {
    pub modes: [i32; 3],
    pub amplitude: T,
    /// Polarization of `B` for the transverse mode; made orthogonal to the
    /// wave vector.
    pub polarization: Vec3<T>,
    pub mode: WaveMode,
}

impl<T: Real> InductionWave<T> {
    fn wave_vector(&self, grid: &GridSpec<T>) -> Vec3<T> {
        let two_pi = T::lit(2.0 * std::f64::consts::PI);
        std::array::from_fn(|d| two_pi * T::lit(self.modes[d] as f64) / grid.extent(d))
    }

    /// Exact solution `(E, B, phi)` at `x` and time `t` for light speed `c`
    /// and cleaning speed `a_d` (with no cleaning damping).
    pub fn exact(&self, grid: &GridSpec<T>, c: T, a_d: T, x: &Vec3<T>, t: T) -> [T; 7] {
        let k = self.wave_vector(grid);
        let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        let kh = [k[0] / kn, k[1] / kn, k[2] / kn];
        let kx =
            k[0] * (x[0] - grid.min[0]) + k[1] * (x[1] - grid.min[1]) + k[2] * (x[2] - grid.min[2]);
        let mut out = [T::zero(); 7];
        match self.mode {
            WaveMode::Transverse => {
                let e = self.polarization;
                let dot = e[0] * kh[0] + e[1] * kh[1] + e[2] * kh[2];
                let mut e: [T; 3] = std::array::from_fn(|d| e[d] - dot * kh[d]);
                let en = (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt();
                for v in e.iter_mut() {
                    *v /= en;
                }
                let s = (kx - c * kn * t).sin();
                let kxe = [
                    kh[1] * e[2] - kh[2] * e[1],
                    kh[2] * e[0] - kh[0] * e[2],
                    kh[0] * e[1] - kh[1] * e[0],
                ];
                for d in 0..3 {
                    out[induction::E + d] = -c * self.amplitude * kxe[d] * s;
                    out[induction::B + d] = self.amplitude * e[d] * s;
                }
            }
            WaveMode::Longitudinal => {
                let cs = (kx - a_d * kn * t).cos();
                for d in 0..3 {
                    out[induction::B + d] = self.amplitude * cs * kh[d];
                }
                out[induction::PHI] = a_d * self.amplitude * cs;
            }
        }
        out
    }

    /// Superposition of `waves` sampled at time `t`.
    pub fn init(waves: &[Self], grid: &GridSpec<T>, c: T, a_d: T, t: T) -> FieldSnapshot<T> {
        let mut s = FieldSnapshot::zeros(grid.clone(), layout_for(SystemKind::InductionGlm));
        for p in 0..grid.n_points() {
            let (i, j, k) = grid.unindex(p);
            let x = grid.position(i, j, k);
            for w in waves {
                let v = w.exact(grid, c, a_d, &x, t);
                for (comp, val) in v.iter().enumerate() {
                    let old = s.get(comp, p);
                    s.set(comp, p, old + *val);
                }
            }
        }
        s.set_time(t);
        s
    }
}
