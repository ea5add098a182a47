//! Method-of-lines sweeps over x-rows: gradients, pointwise right-hand side,
//! dissipation, signal speeds and constraint monitors.
//!
//! The sweeps work on point-interleaved buffers: value `(c, p)` lives at
//! `p * nc + c`, so the stencils run over all components of a point at once
//! and every point's state is one contiguous slice.

use rayon::prelude::*;

use crate::constraints::{pairwise_merge, ConstraintReport, NormAccumulator};
use crate::error::EvolveError;
use crate::scalar::Real;
use crate::state::{FieldSnapshot, GridSpec};
use crate::systems::System;

use super::stencils::{StencilSet, KO};

/// Copies a component-major snapshot into an interleaved buffer.
pub fn interleave<T: Real>(s: &FieldSnapshot<T>, out: &mut Vec<T>) {
    let nc = s.n_components();
    let np = s.n_points();
    out.clear();
    out.resize(nc * np, T::zero());
    for (c, comp) in s.data().chunks(np).enumerate() {
        for (p, &v) in comp.iter().enumerate() {
            out[p * nc + c] = v;
        }
    }
}

/// Inverse of [`interleave`].
pub fn deinterleave<T: Real>(data: &[T], s: &mut FieldSnapshot<T>) {
    let nc = s.n_components();
    let np = s.n_points();
    for (c, comp) in s.data_mut().chunks_mut(np).enumerate() {
        for (p, v) in comp.iter_mut().enumerate() {
            *v = data[p * nc + c];
        }
    }
}

/// Accumulator and two alternating stage buffers of [`Discretization::rk4_step`].
#[derive(Clone, Debug, Default)]
pub struct Rk4Stages<T> {
    acc: Vec<T>,
    a: Vec<T>,
    b: Vec<T>,
}

impl<T: Real> Rk4Stages<T> {
    fn resize(&mut self, len: usize) {
        self.acc.resize(len, T::zero());
        self.a.resize(len, T::zero());
        self.b.resize(len, T::zero());
    }
}

/// Per-thread scratch for one x-row.
struct RowWork<T> {
    /// `grad[axis][i * nc + c]`
    grad: [Vec<T>; 3],
    dq: Vec<[T; 3]>,
    out: Vec<T>,
    ko: Vec<T>,
}

impl<T: Real> RowWork<T> {
    fn new(nc: usize, nx: usize, n_out: usize) -> Self {
        Self {
            grad: [
                vec![T::zero(); nc * nx],
                vec![T::zero(); nc * nx],
                vec![T::zero(); nc * nx],
            ],
            dq: vec![[T::zero(); 3]; nc],
            out: vec![T::zero(); n_out.max(nc)],
            ko: vec![T::zero(); nc * nx],
        }
    }

    #[inline]
    fn point_gradients(&mut self, nc: usize, i: usize) {
        let [gx, gy, gz] = &self.grad;
        let b = i * nc;
        for (c, d) in self.dq.iter_mut().enumerate() {
            *d = [gx[b + c], gy[b + c], gz[b + c]];
        }
    }
}

/// `y = sum_m w[m] * x[m]` elementwise.
#[inline(always)]
fn stencil5<T: Real>(y: &mut [T], w: [T; 5], x: [&[T]; 5]) {
    let n = y.len();
    let x = x.map(|s| &s[..n]);
    for i in 0..n {
        y[i] = w[0] * x[0][i] + w[1] * x[1][i] + w[2] * x[2][i] + w[3] * x[3][i] + w[4] * x[4][i];
    }
}

/// `y = c1 (x[2] - x[1]) - c2 (x[3] - x[0])` elementwise.
#[inline(always)]
fn central4<T: Real>(y: &mut [T], (c1, c2): (T, T), x: [&[T]; 4]) {
    let n = y.len();
    let x = x.map(|s| &s[..n]);
    for i in 0..n {
        y[i] = c1 * (x[2][i] - x[1][i]) - c2 * (x[3][i] - x[0][i]);
    }
}

/// `y += a * sum_m KO[m] * x[m]` elementwise.
#[inline(always)]
fn add_ko<T: Real>(y: &mut [T], a: T, x: [&[T]; 7]) {
    let n = y.len();
    let x = x.map(|s| &s[..n]);
    let [c0, c1, c2, c3] = [T::lit(KO[0]), T::lit(KO[1]), T::lit(KO[2]), T::lit(KO[3])];
    for i in 0..n {
        let s = c0 * (x[0][i] + x[6][i])
            + c1 * (x[1][i] + x[5][i])
            + c2 * (x[2][i] + x[4][i])
            + c3 * x[3][i];
        y[i] += a * s;
    }
}

/// `y = a * sum_m KO[m] * x[m] + b * sum_m KO[m] * z[m]` elementwise, where
/// `x[3]` and `z[3]` are the same centre row.
#[inline(always)]
fn set_ko2<T: Real>(y: &mut [T], a: T, x: [&[T]; 7], b: T, z: [&[T]; 7]) {
    let n = y.len();
    let x = x.map(|s| &s[..n]);
    let z = z.map(|s| &s[..n]);
    let [c0, c1, c2, c3] = [T::lit(KO[0]), T::lit(KO[1]), T::lit(KO[2]), T::lit(KO[3])];
    let c3ab = c3 * (a + b);
    for i in 0..n {
        let sx = c0 * (x[0][i] + x[6][i]) + c1 * (x[1][i] + x[5][i]) + c2 * (x[2][i] + x[4][i]);
        let sz = c0 * (z[0][i] + z[6][i]) + c1 * (z[1][i] + z[5][i]) + c2 * (z[2][i] + z[4][i]);
        y[i] = a * sx + b * sz + c3ab * x[3][i];
    }
}

/// Spatial discretization of one grid: 4th-order finite differences plus
/// Kreiss-Oliger dissipation, evaluated row by row.
///
/// Every row is computed independently and reductions run in a fixed order,
/// so results do not depend on the number of worker threads.
#[derive(Clone, Debug)]
pub struct Discretization<T> {
    pub grid: GridSpec<T>,
    pub stencils: StencilSet<T>,
}

impl<T: Real> Discretization<T> {
    pub fn new(grid: &GridSpec<T>, ko_sigma: T) -> Result<Self, EvolveError> {
        grid.validate()?;
        Ok(Self {
            grid: grid.clone(),
            stencils: StencilSet::new(grid, ko_sigma)?,
        })
    }

    fn check_layout(&self, nc: usize, len: usize) -> Result<(), EvolveError> {
        let np = self.grid.n_points();
        if len != nc * np {
            return Err(EvolveError::Layout {
                expected: nc,
                found: len / np.max(1),
            });
        }
        Ok(())
    }

    #[inline]
    fn row_start(&self, j: usize, k: usize) -> usize {
        (k * self.grid.n[1] + j) * self.grid.n[0]
    }

    /// Derivatives of all `nc` interleaved components along the row `(j, k)`.
    fn row_gradients(&self, data: &[T], nc: usize, j: usize, k: usize, grad: &mut [Vec<T>; 3]) {
        let nx = self.grid.n[0];
        let len = nx * nc;
        let [ax, ay, az] = &self.stencils.axes;
        let [gx, gy, gz] = grad;
        let row = &data[self.row_start(j, k) * nc..][..len];

        let gx = &mut gx[..len];
        if ax.flat {
            gx.fill(T::zero());
        } else {
            // interior points as one shifted sweep over the row
            central4(
                &mut gx[2 * nc..(nx - 2) * nc],
                ax.central_weights,
                [0, 1, 3, 4].map(|m| &row[m * nc..(m + nx - 4) * nc]),
            );
            for i in [0, 1, nx - 2, nx - 1] {
                let g = &mut gx[i * nc..(i + 1) * nc];
                if let Some(c) = &ax.central[i] {
                    central4(
                        g,
                        ax.central_weights,
                        c.map(|ii| &row[ii * nc..(ii + 1) * nc]),
                    );
                } else {
                    let t = &ax.taps[i];
                    stencil5(
                        g,
                        t.map(|(_, w)| w),
                        t.map(|(ii, _)| &row[ii * nc..(ii + 1) * nc]),
                    );
                }
            }
        }
        let gy = &mut gy[..len];
        if ay.flat {
            gy.fill(T::zero());
        } else {
            if let Some(c) = &ay.central[j] {
                central4(
                    gy,
                    ay.central_weights,
                    c.map(|jj| &data[self.row_start(jj, k) * nc..][..len]),
                );
            } else {
                let t = &ay.taps[j];
                stencil5(
                    gy,
                    t.map(|(_, w)| w),
                    t.map(|(jj, _)| &data[self.row_start(jj, k) * nc..][..len]),
                );
            }
        }
        let gz = &mut gz[..len];
        if az.flat {
            gz.fill(T::zero());
        } else {
            if let Some(c) = &az.central[k] {
                central4(
                    gz,
                    az.central_weights,
                    c.map(|kk| &data[self.row_start(j, kk) * nc..][..len]),
                );
            } else {
                let t = &az.taps[k];
                stencil5(
                    gz,
                    t.map(|(_, w)| w),
                    t.map(|(kk, _)| &data[self.row_start(j, kk) * nc..][..len]),
                );
            }
        }
    }

    /// Adds the dissipation along the row `(j, k)` to `out`, with component
    /// `c` scaled by `mask[c]` (`None` for all ones).
    #[allow(clippy::too_many_arguments)]
    fn row_dissipation(
        &self,
        data: &[T],
        nc: usize,
        mask: Option<&[T]>,
        j: usize,
        k: usize,
        acc: &mut [T],
        out: &mut [T],
    ) {
        let nx = self.grid.n[0];
        let len = nx * nc;
        let [ax, ay, az] = &self.stencils.axes;
        let row = &data[self.row_start(j, k) * nc..][..len];
        let acc = &mut acc[..len];
        let ky = ay.ko[j].filter(|_| !ay.flat && ay.ko_weight != T::zero());
        let kz = az.ko[k].filter(|_| !az.flat && az.ko_weight != T::zero());
        let rows_y = |idx: [usize; 7]| idx.map(|jj| &data[self.row_start(jj, k) * nc..][..len]);
        let rows_z = |idx: [usize; 7]| idx.map(|kk| &data[self.row_start(j, kk) * nc..][..len]);
        match (ky, kz) {
            (Some(y), Some(z)) => set_ko2(acc, ay.ko_weight, rows_y(y), az.ko_weight, rows_z(z)),
            (Some(y), None) => {
                acc.fill(T::zero());
                add_ko(acc, ay.ko_weight, rows_y(y));
            }
            (None, Some(z)) => {
                acc.fill(T::zero());
                add_ko(acc, az.ko_weight, rows_z(z));
            }
            (None, None) => acc.fill(T::zero()),
        }
        if !ax.flat && ax.ko_weight != T::zero() {
            if nx >= 7 {
                add_ko(
                    &mut acc[3 * nc..(nx - 3) * nc],
                    ax.ko_weight,
                    std::array::from_fn(|m| &row[m * nc..(m + nx - 6) * nc]),
                );
            }
            for i in (0..nx.min(3)).chain(nx.saturating_sub(3).max(3)..nx) {
                if let Some(idx) = &ax.ko[i] {
                    let a = &mut acc[i * nc..(i + 1) * nc];
                    add_ko(a, ax.ko_weight, idx.map(|ii| &row[ii * nc..(ii + 1) * nc]));
                }
            }
        }
        match mask {
            None => {
                for (o, a) in out.iter_mut().zip(acc.iter()) {
                    *o += *a;
                }
            }
            Some(mask) => {
                for (o, a) in out.chunks_exact_mut(nc).zip(acc.chunks_exact(nc)) {
                    for c in 0..nc {
                        o[c] += mask[c] * a[c];
                    }
                }
            }
        }
    }

    /// Frozen-component mask, `None` when nothing is frozen.
    fn frozen_mask<S: System<T> + ?Sized>(&self, system: &S, nc: usize) -> Option<Vec<T>> {
        let mask: Vec<T> = (0..nc)
            .map(|c| {
                if system.is_frozen(c) {
                    T::zero()
                } else {
                    T::one()
                }
            })
            .collect();
        if mask.iter().all(|m| *m == T::one()) {
            None
        } else {
            Some(mask)
        }
    }

    /// Right-hand side of row `r` into `orow`.
    #[allow(clippy::too_many_arguments)]
    fn row_rhs<S: System<T> + ?Sized>(
        &self,
        system: &S,
        data: &[T],
        nc: usize,
        mask: Option<&[T]>,
        r: usize,
        w: &mut RowWork<T>,
        orow: &mut [T],
    ) -> Result<(), EvolveError> {
        let [nx, ny, _] = self.grid.n;
        let (j, k) = (r % ny, r / ny);
        self.row_gradients(data, nc, j, k, &mut w.grad);
        let row = &data[r * nx * nc..][..nx * nc];
        for i in 0..nx {
            w.point_gradients(nc, i);
            let x = self.grid.position(i, j, k);
            let o = &mut orow[i * nc..(i + 1) * nc];
            system
                .rhs(&x, &row[i * nc..(i + 1) * nc], &w.dq, o)
                .map_err(|source| EvolveError::Rhs {
                    point: [i, j, k],
                    source,
                })?;
            if let Some(mask) = mask {
                for c in 0..nc {
                    o[c] *= mask[c];
                }
            }
        }
        self.row_dissipation(data, nc, mask, j, k, &mut w.ko, orow);
        Ok(())
    }

    /// Semi-discrete right-hand side `out = F(data)` on interleaved buffers.
    pub fn rhs<S: System<T> + ?Sized>(
        &self,
        system: &S,
        data: &[T],
        out: &mut [T],
    ) -> Result<(), EvolveError> {
        let nc = system.descriptor().count();
        self.check_layout(nc, data.len())?;
        self.check_layout(nc, out.len())?;
        let nx = self.grid.n[0];
        // frozen components get neither a right-hand side nor dissipation
        let mask = self.frozen_mask(system, nc);
        let mask = mask.as_deref();
        out.par_chunks_mut(nx * nc).enumerate().try_for_each_init(
            || RowWork::new(nc, nx, nc),
            |w, (r, orow)| self.row_rhs(system, data, nc, mask, r, w, orow),
        )
    }

    /// One classical RK4 step of `y` by `dt`, with the stage combinations
    /// applied row by row as the right-hand side is produced. Performs the
    /// same floating-point operations as [`super::rk4::rk4_update`] with
    /// [`Discretization::rhs`].
    pub fn rk4_step<S: System<T> + ?Sized>(
        &self,
        system: &S,
        y: &mut [T],
        dt: T,
        buf: &mut Rk4Stages<T>,
    ) -> Result<(), EvolveError> {
        let nc = system.descriptor().count();
        self.check_layout(nc, y.len())?;
        let nx = self.grid.n[0];
        let len = nx * nc;
        buf.resize(y.len());
        let mask = self.frozen_mask(system, nc);
        let mask = mask.as_deref();
        let half = dt * T::lit(0.5);
        let sixth = dt / T::lit(6.0);
        let third = dt / T::lit(3.0);
        let init = || {
            let w = RowWork::new(nc, nx, nc);
            (w, vec![T::zero(); len])
        };
        let Rk4Stages { acc, a, b } = buf;

        // k1 = F(y): acc = y + dt/6 k1, a = y + dt/2 k1
        acc.par_chunks_mut(len)
            .zip(a.par_chunks_mut(len))
            .enumerate()
            .try_for_each_init(init, |(w, k), (r, (acc, next))| {
                self.row_rhs(system, y, nc, mask, r, w, k)?;
                let yr = &y[r * len..][..len];
                for e in 0..len {
                    acc[e] = yr[e] + sixth * k[e];
                    next[e] = yr[e] + half * k[e];
                }
                Ok::<(), EvolveError>(())
            })?;
        // k2 = F(a): acc += dt/3 k2, b = y + dt/2 k2
        let (a_ro, y_ro): (&[T], &[T]) = (a, y);
        acc.par_chunks_mut(len)
            .zip(b.par_chunks_mut(len))
            .enumerate()
            .try_for_each_init(init, |(w, k), (r, (acc, next))| {
                self.row_rhs(system, a_ro, nc, mask, r, w, k)?;
                let yr = &y_ro[r * len..][..len];
                for e in 0..len {
                    acc[e] += third * k[e];
                    next[e] = yr[e] + half * k[e];
                }
                Ok::<(), EvolveError>(())
            })?;
        // k3 = F(b): acc += dt/3 k3, a = y + dt k3
        let b_ro: &[T] = b;
        acc.par_chunks_mut(len)
            .zip(a.par_chunks_mut(len))
            .enumerate()
            .try_for_each_init(init, |(w, k), (r, (acc, next))| {
                self.row_rhs(system, b_ro, nc, mask, r, w, k)?;
                let yr = &y_ro[r * len..][..len];
                for e in 0..len {
                    acc[e] += third * k[e];
                    next[e] = yr[e] + dt * k[e];
                }
                Ok::<(), EvolveError>(())
            })?;
        // k4 = F(a): y = acc + dt/6 k4
        let (a_ro, acc_ro): (&[T], &[T]) = (a, acc);
        y.par_chunks_mut(len)
            .enumerate()
            .try_for_each_init(init, |(w, k), (r, yr)| {
                self.row_rhs(system, a_ro, nc, mask, r, w, k)?;
                let ar = &acc_ro[r * len..][..len];
                for e in 0..len {
                    yr[e] = ar[e] + sixth * k[e];
                }
                Ok::<(), EvolveError>(())
            })
    }

    /// Gradient of a single scalar field with the evolution stencils.
    pub fn gradient(&self, field: &[T]) -> [Vec<T>; 3] {
        let [nx, ny, nz] = self.grid.n;
        let np = self.grid.n_points();
        assert_eq!(field.len(), np, "field length does not match the grid");
        let mut out = [
            vec![T::zero(); np],
            vec![T::zero(); np],
            vec![T::zero(); np],
        ];
        let mut grad = [
            vec![T::zero(); nx],
            vec![T::zero(); nx],
            vec![T::zero(); nx],
        ];
        for k in 0..nz {
            for j in 0..ny {
                self.row_gradients(field, 1, j, k, &mut grad);
                let off = self.row_start(j, k);
                for a in 0..3 {
                    out[a][off..off + nx].copy_from_slice(&grad[a]);
                }
            }
        }
        out
    }

    /// Dissipation term of a single scalar field.
    pub fn dissipation(&self, field: &[T]) -> Vec<T> {
        let [nx, ny, nz] = self.grid.n;
        let mut out = vec![T::zero(); self.grid.n_points()];
        let mut acc = vec![T::zero(); nx];
        for k in 0..nz {
            for j in 0..ny {
                let off = self.row_start(j, k);
                self.row_dissipation(field, 1, None, j, k, &mut acc, &mut out[off..off + nx]);
            }
        }
        out
    }

    /// Grid maximum of the system's signal-speed bound; NaN if any point
    /// yields NaN.
    pub fn max_signal_speed<S: System<T> + ?Sized>(
        &self,
        system: &S,
        data: &[T],
    ) -> Result<T, EvolveError> {
        let nc = system.descriptor().count();
        self.check_layout(nc, data.len())?;
        let [nx, ny, _] = self.grid.n;
        let row_max: Vec<T> = data
            .par_chunks(nx * nc)
            .enumerate()
            .map(|(r, row)| {
                let (j, k) = (r % ny, r / ny);
                let mut m = T::zero();
                for (i, q) in row.chunks_exact(nc).enumerate() {
                    let s = system.max_signal_speed(&self.grid.position(i, j, k), q);
                    if s.is_nan() {
                        return s;
                    }
                    m = m.max(s);
                }
                m
            })
            .collect();
        Ok(row_max.into_iter().fold(T::zero(), |a, b| {
            if a.is_nan() || b.is_nan() {
                T::nan()
            } else {
                a.max(b)
            }
        }))
    }

    /// Norms of every monitored constraint family over interior points.
    pub fn constraint_report<S: System<T> + ?Sized>(
        &self,
        system: &S,
        data: &[T],
        time: T,
    ) -> Result<ConstraintReport, EvolveError> {
        let nc = system.descriptor().count();
        self.check_layout(nc, data.len())?;
        let families = system.monitor_families();
        let n_mon: usize = families.iter().map(|f| f.count).sum();
        let [nx, ny, _] = self.grid.n;
        let per_row: Vec<Vec<NormAccumulator>> = data
            .par_chunks(nx * nc)
            .enumerate()
            .map_init(
                || RowWork::new(nc, nx, n_mon),
                |w, (r, row)| {
                    let (j, k) = (r % ny, r / ny);
                    let mut acc = vec![NormAccumulator::default(); families.len()];
                    self.row_gradients(data, nc, j, k, &mut w.grad);
                    for i in 0..nx {
                        if !self.grid.is_interior([i, j, k]) {
                            continue;
                        }
                        w.point_gradients(nc, i);
                        let x = self.grid.position(i, j, k);
                        system.monitor(&x, &row[i * nc..(i + 1) * nc], &w.dq, &mut w.out[..n_mon]);
                        let mut slot = 0;
                        for (f, a) in families.iter().zip(acc.iter_mut()) {
                            for v in &w.out[slot..slot + f.count] {
                                a.add(v.to_f64_lossy());
                            }
                            slot += f.count;
                        }
                    }
                    acc
                },
            )
            .collect();
        let dv = self.grid.cell_volume().to_f64_lossy();
        let families = families
            .iter()
            .enumerate()
            .map(|(fi, f)| {
                let col: Vec<NormAccumulator> = per_row.iter().map(|r| r[fi]).collect();
                (f.name.clone(), pairwise_merge(&col).finish(dv))
            })
            .collect();
        Ok(ConstraintReport {
            time: time.to_f64_lossy(),
            families,
        })
    }

    /// Constraint report of a component-major snapshot.
    pub fn snapshot_report<S: System<T> + ?Sized>(
        &self,
        system: &S,
        s: &FieldSnapshot<T>,
    ) -> Result<ConstraintReport, EvolveError> {
        let mut buf = Vec::new();
        interleave(s, &mut buf);
        self.constraint_report(system, &buf, s.time())
    }

    /// Applies [`System::project`] at every point of an interleaved buffer.
    pub fn project<S: System<T> + ?Sized>(&self, system: &S, data: &mut [T]) {
        if !system.projects() {
            return;
        }
        let nc = system.descriptor().count();
        data.par_chunks_mut(nc).for_each(|q| system.project(q));
    }
}
