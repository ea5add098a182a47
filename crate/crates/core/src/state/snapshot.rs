use crate::error::StateError;
use crate::scalar::Real;

use super::grid::GridSpec;
use super::layout::SystemDescriptor;

/// Every evolved variable of one system on one grid at one time, stored
/// component-major (all points of component 0, then component 1, ...).
#[derive(Clone, Debug, PartialEq)]
pub struct FieldSnapshot<T> {
    grid: GridSpec<T>,
    descriptor: SystemDescriptor,
    data: Vec<T>,
    time: T,
}

impl<T: Real> FieldSnapshot<T> {
    pub fn zeros(grid: GridSpec<T>, descriptor: SystemDescriptor) -> Self {
        let len = grid.n_points() * descriptor.count();
        Self {
            grid,
            descriptor,
            data: vec![T::zero(); len],
            time: T::zero(),
        }
    }

    pub fn from_data(
        grid: GridSpec<T>,
        descriptor: SystemDescriptor,
        data: Vec<T>,
        time: T,
    ) -> Result<Self, StateError> {
        let expected = grid.n_points() * descriptor.count();
        if data.len() != expected {
            return Err(StateError::ComponentCount {
                expected,
                found: data.len(),
            });
        }
        Ok(Self {
            grid,
            descriptor,
            data,
            time,
        })
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn descriptor(&self) -> &SystemDescriptor {
        &self.descriptor
    }

    pub fn n_components(&self) -> usize {
        self.descriptor.count()
    }

    pub fn n_points(&self) -> usize {
        self.grid.n_points()
    }

    pub fn time(&self) -> T {
        self.time
    }

    pub fn set_time(&mut self, t: T) {
        self.time = t;
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn component(&self, c: usize) -> &[T] {
        let n = self.n_points();
        &self.data[c * n..(c + 1) * n]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [T] {
        let n = self.n_points();
        &mut self.data[c * n..(c + 1) * n]
    }

    #[inline]
    pub fn get(&self, c: usize, p: usize) -> T {
        self.data[c * self.grid.n_points() + p]
    }

    #[inline]
    pub fn set(&mut self, c: usize, p: usize, v: T) {
        let n = self.grid.n_points();
        self.data[c * n + p] = v;
    }

    /// Value as exposed to files and monitors (`alpha`, `phi` exponentiated).
    pub fn io_value(&self, c: usize, p: usize) -> T {
        let v = self.get(c, p);
        if self.descriptor.is_log_stored(c) {
            v.exp()
        } else {
            v
        }
    }

    /// Gathers all components at point `p` into `out`.
    pub fn point(&self, p: usize, out: &mut [T]) {
        let n = self.grid.n_points();
        for (c, o) in out.iter_mut().enumerate().take(self.n_components()) {
            *o = self.data[c * n + p];
        }
    }

    /// First non-finite value, reported with its grid location.
    pub fn check_finite(&self) -> Result<(), StateError> {
        let n = self.n_points();
        for (idx, v) in self.data.iter().enumerate() {
            if !v.is_finite() {
                let (c, p) = (idx / n, idx % n);
                let (i, j, k) = self.grid.unindex(p);
                return Err(StateError::NonFinite {
                    component: self.descriptor.name(c).to_string(),
                    point: [i, j, k],
                });
            }
        }
        Ok(())
    }

    /// Largest absolute value over all components and points.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| {
            if v.abs() > m || v.is_nan() {
                v.abs()
            } else {
                m
            }
        })
    }

    /// Largest pointwise difference against a snapshot of the same shape.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()))
    }
}
