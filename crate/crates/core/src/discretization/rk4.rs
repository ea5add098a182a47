//! Classical four-stage Runge-Kutta.

use crate::scalar::Real;

/// Stage storage reused across steps.
#[derive(Clone, Debug, Default)]
pub struct Rk4Buffers<T> {
    k: Vec<T>,
    acc: Vec<T>,
    stage: Vec<T>,
}

impl<T: Real> Rk4Buffers<T> {
    pub fn new(len: usize) -> Self {
        Self {
            k: vec![T::zero(); len],
            acc: vec![T::zero(); len],
            stage: vec![T::zero(); len],
        }
    }

    fn resize(&mut self, len: usize) {
        self.k.resize(len, T::zero());
        self.acc.resize(len, T::zero());
        self.stage.resize(len, T::zero());
    }
}

/// Advances `y` by `dt` for `dy/dt = f(y)`, where `f(y, out)` writes the
/// right-hand side.
pub fn rk4_update<T, E, F>(y: &mut [T], dt: T, buf: &mut Rk4Buffers<T>, mut f: F) -> Result<(), E>
where
    T: Real,
    F: FnMut(&[T], &mut [T]) -> Result<(), E>,
{
    buf.resize(y.len());
    let Rk4Buffers { k, acc, stage } = buf;
    let half = dt * T::lit(0.5);
    let sixth = dt / T::lit(6.0);
    let third = dt / T::lit(3.0);

    f(y, k)?;
    for i in 0..y.len() {
        acc[i] = y[i] + sixth * k[i];
        stage[i] = y[i] + half * k[i];
    }
    f(stage, k)?;
    for i in 0..y.len() {
        acc[i] += third * k[i];
        stage[i] = y[i] + half * k[i];
    }
    f(stage, k)?;
    for i in 0..y.len() {
        acc[i] += third * k[i];
        stage[i] = y[i] + dt * k[i];
    }
    f(stage, k)?;
    for i in 0..y.len() {
        y[i] = acc[i] + sixth * k[i];
    }
    Ok(())
}
