//! Time loop: CFL-controlled RK4 steps, constraint reports, snapshots and
//! the divergence guard.

use rayon::ThreadPool;

use crate::constraints::ConstraintReport;
use crate::error::EvolveError;
use crate::scalar::Real;
use crate::state::FieldSnapshot;
use crate::systems::System;

use super::mol::{deinterleave, interleave, Discretization, Rk4Stages};

#[derive(Clone, Debug, PartialEq)]
pub struct EvolveConfig<T> {
    pub t_end: T,
    /// `dt = cfl * h_min / v_max`
    pub cfl: T,
    /// Overrides the CFL rule when set.
    pub fixed_dt: Option<T>,
    pub ko_sigma: T,
    /// Constraint reports at `t = 0`, every multiple of the interval and
    /// `t_end`. `None` reports only at the start and the end.
    pub monitor_interval: Option<T>,
    pub snapshot_times: Vec<T>,
    /// Largest absolute state value before the run is declared diverged.
    pub divergence_threshold: T,
}

impl<T: Real> EvolveConfig<T> {
    pub fn new(t_end: T) -> Self {
        Self {
            t_end,
            cfl: T::lit(0.25),
            fixed_dt: None,
            ko_sigma: T::lit(0.05),
            monitor_interval: None,
            snapshot_times: Vec::new(),
            divergence_threshold: T::lit(1e6),
        }
    }

    pub fn validate(&self) -> Result<(), EvolveError> {
        let bad = |v: T| !(v > T::zero()) || !v.is_finite();
        if !(self.t_end >= T::zero()) || !self.t_end.is_finite() {
            return Err(EvolveError::InvalidTimeStep(self.t_end.to_f64_lossy()));
        }
        if bad(self.cfl) {
            return Err(EvolveError::InvalidTimeStep(self.cfl.to_f64_lossy()));
        }
        if let Some(dt) = self.fixed_dt {
            if bad(dt) {
                return Err(EvolveError::InvalidTimeStep(dt.to_f64_lossy()));
            }
        }
        if let Some(iv) = self.monitor_interval {
            if bad(iv) {
                return Err(EvolveError::InvalidTimeStep(iv.to_f64_lossy()));
            }
        }
        Ok(())
    }
}

/// Receives run output as it is produced.
pub trait Observer<T: Real>: Send {
    fn report(&mut self, _report: &ConstraintReport) {}
    fn snapshot(&mut self, _state: &FieldSnapshot<T>) {}
    fn step(&mut self, _step: usize, _time: T, _dt: T) {}
}

/// Observer that ignores everything.
pub struct NoObserver;

impl<T: Real> Observer<T> for NoObserver {}

#[derive(Clone, Debug, PartialEq)]
pub enum RunStatus {
    Completed,
    /// The divergence guard stopped the run.
    Diverged {
        time: f64,
        step: usize,
        max_abs: f64,
    },
}

#[derive(Clone, Debug)]
pub struct EvolveOutcome<T> {
    pub state: FieldSnapshot<T>,
    pub reports: Vec<ConstraintReport>,
    pub status: RunStatus,
    pub steps: usize,
}

/// Component and point of the first non-finite value of an interleaved
/// buffer, if any.
fn first_non_finite<T: Real>(data: &[T], nc: usize) -> Option<(usize, usize)> {
    data.iter()
        .position(|v| !v.is_finite())
        .map(|idx| (idx % nc, idx / nc))
}

/// Largest absolute value, and a probe that is nonzero (NaN) exactly when
/// some value is not finite.
#[allow(clippy::eq_op)]
fn max_abs_and_probe<T: Real>(data: &[T]) -> (T, T) {
    let mut m = [T::zero(); 4];
    let mut probe = [T::zero(); 4];
    let mut chunks = data.chunks_exact(4);
    for c in &mut chunks {
        for l in 0..4 {
            let a = c[l].abs();
            if a > m[l] {
                m[l] = a;
            }
            probe[l] += c[l] - c[l];
        }
    }
    for v in chunks.remainder() {
        let a = v.abs();
        if a > m[0] {
            m[0] = a;
        }
        probe[0] += *v - *v;
    }
    let max = m[0].max(m[1]).max(m[2]).max(m[3]);
    (max, probe[0] + probe[1] + probe[2] + probe[3])
}

struct Schedule<T> {
    interval: Option<T>,
    next_monitor: usize,
    snapshots: Vec<T>,
    next_snapshot: usize,
}

impl<T: Real> Schedule<T> {
    fn monitor_time(&self) -> Option<T> {
        self.interval
            .map(|iv| T::from_count(self.next_monitor) * iv)
    }

    fn next_event(&self, t_end: T) -> T {
        let mut e = t_end;
        if let Some(m) = self.monitor_time() {
            e = e.min(m);
        }
        if let Some(&s) = self.snapshots.get(self.next_snapshot) {
            e = e.min(s);
        }
        e
    }
}

/// Evolves `initial` to `config.t_end`. Runs inside `pool` when given, on the
/// global rayon pool otherwise.
pub fn evolve<T: Real, S: System<T> + ?Sized>(
    system: &S,
    initial: FieldSnapshot<T>,
    config: &EvolveConfig<T>,
    observer: &mut dyn Observer<T>,
    pool: Option<&ThreadPool>,
) -> Result<EvolveOutcome<T>, EvolveError> {
    match pool {
        Some(p) => p.install(|| evolve_inner(system, initial, config, observer)),
        None => evolve_inner(system, initial, config, observer),
    }
}

fn evolve_inner<T: Real, S: System<T> + ?Sized>(
    system: &S,
    mut state: FieldSnapshot<T>,
    config: &EvolveConfig<T>,
    observer: &mut dyn Observer<T>,
) -> Result<EvolveOutcome<T>, EvolveError> {
    config.validate()?;
    let disc = Discretization::new(state.grid(), config.ko_sigma)?;
    let expected = system.descriptor().count();
    if state.n_components() != expected {
        return Err(EvolveError::Layout {
            expected,
            found: state.n_components(),
        });
    }
    let h_min = state.grid().min_spacing();
    let mut snapshots: Vec<T> = config
        .snapshot_times
        .iter()
        .copied()
        .filter(|&t| t >= state.time() && t <= config.t_end)
        .collect();
    snapshots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    snapshots.dedup();
    let mut sched = Schedule {
        interval: config.monitor_interval,
        next_monitor: 1,
        snapshots,
        next_snapshot: 0,
    };
    // tolerance for landing on an output time
    let eps = T::lit(1e-9);

    let mut reports = Vec::new();
    let mut emit = |disc: &Discretization<T>, y: &[T], t: T, observer: &mut dyn Observer<T>| {
        let r = disc.constraint_report(system, y, t)?;
        observer.report(&r);
        reports.push(r);
        Ok::<(), EvolveError>(())
    };
    let non_finite = |state: &FieldSnapshot<T>, step: usize, c: usize, p: usize| {
        let (i, j, k) = state.grid().unindex(p);
        EvolveError::NonFinite {
            step,
            component: state.descriptor().name(c).to_string(),
            point: [i, j, k],
        }
    };

    let mut y = Vec::new();
    interleave(&state, &mut y);
    if let Some((c, p)) = first_non_finite(&y, expected) {
        return Err(non_finite(&state, 0, c, p));
    }
    emit(&disc, &y, state.time(), observer)?;
    while sched.snapshots.get(sched.next_snapshot) == Some(&state.time()) {
        observer.snapshot(&state);
        sched.next_snapshot += 1;
    }

    let mut buf = Rk4Stages::default();
    let mut steps = 0usize;
    let mut t = state.time();
    let mut status = RunStatus::Completed;
    while t < config.t_end {
        let mut dt = match config.fixed_dt {
            Some(dt) => dt,
            None => {
                let v = disc.max_signal_speed(system, &y)?;
                if !v.is_finite() {
                    let (c, p) = first_non_finite(&y, expected).unwrap_or((0, 0));
                    return Err(non_finite(&state, steps, c, p));
                }
                if v > T::zero() {
                    config.cfl * h_min / v
                } else {
                    config.cfl * h_min
                }
            }
        };
        if !(dt > T::zero()) {
            return Err(EvolveError::InvalidTimeStep(dt.to_f64_lossy()));
        }
        let event = sched.next_event(config.t_end);
        let landing = t + dt * (T::one() + eps) >= event;
        if landing {
            dt = event - t;
        }

        disc.rk4_step(system, &mut y, dt, &mut buf)?;
        disc.project(system, &mut y);
        steps += 1;
        t = if landing { event } else { t + dt };
        observer.step(steps, t, dt);

        let (max_abs, probe) = max_abs_and_probe(&y);
        if probe != T::zero() {
            let (c, p) = first_non_finite(&y, expected).unwrap_or((0, 0));
            return Err(non_finite(&state, steps, c, p));
        }
        if max_abs > config.divergence_threshold {
            emit(&disc, &y, t, observer)?;
            status = RunStatus::Diverged {
                time: t.to_f64_lossy(),
                step: steps,
                max_abs: max_abs.to_f64_lossy(),
            };
            break;
        }

        let mut reported = false;
        if let Some(m) = sched.monitor_time() {
            if t >= m {
                emit(&disc, &y, t, observer)?;
                reported = true;
                while sched.monitor_time().is_some_and(|m| m <= t) {
                    sched.next_monitor += 1;
                }
            }
        }
        if sched
            .snapshots
            .get(sched.next_snapshot)
            .is_some_and(|&s| s <= t)
        {
            deinterleave(&y, &mut state);
            state.set_time(t);
            while sched
                .snapshots
                .get(sched.next_snapshot)
                .is_some_and(|&s| s <= t)
            {
                observer.snapshot(&state);
                sched.next_snapshot += 1;
            }
        }
        if t >= config.t_end && !reported {
            emit(&disc, &y, t, observer)?;
        }
    }
    deinterleave(&y, &mut state);
    state.set_time(t);

    Ok(EvolveOutcome {
        state,
        reports,
        status,
        steps,
    })
}
