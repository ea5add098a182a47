use crate::error::StateError;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    Periodic,
    /// No ghost data: derivatives switch to one-sided 4th-order stencils at the two
    /// outermost layers.
    Extrapolate,
}

impl Boundary {
    pub fn name(self) -> &'static str {
        match self {
            Boundary::Periodic => "periodic",
            Boundary::Extrapolate => "extrapolate",
        }
    }
}

/// Cell-centred uniform Cartesian grid.
///
/// Node `(i, j, k)` sits at `min + (index + 1/2) * h` on each axis, with
/// `h = (max - min) / n`. Flat point indices run x-fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec<T> {
    pub n: [usize; 3],
    pub min: [T; 3],
    pub max: [T; 3],
    pub boundary: [Boundary; 3],
}

impl<T: Real> GridSpec<T> {
    pub fn new(
        n: [usize; 3],
        min: [T; 3],
        max: [T; 3],
        boundary: [Boundary; 3],
    ) -> Result<Self, StateError> {
        let grid = Self {
            n,
            min,
            max,
            boundary,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// Periodic cube `[lo, hi]^3` with `n` cells per axis.
    pub fn periodic_cube(n: usize, lo: T, hi: T) -> Result<Self, StateError> {
        Self::new([n; 3], [lo; 3], [hi; 3], [Boundary::Periodic; 3])
    }

    pub fn validate(&self) -> Result<(), StateError> {
        for d in 0..3 {
            if self.n[d] == 0 {
                return Err(StateError::InvalidGrid(format!("axis {d} has zero cells")));
            }
            let h = self.spacing(d);
            if !(h > T::zero()) || !h.is_finite() {
                return Err(StateError::InvalidGrid(format!(
                    "axis {d}: spacing {h} is not strictly positive (min {}, max {})",
                    self.min[d], self.max[d]
                )));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn spacing(&self, axis: usize) -> T {
        (self.max[axis] - self.min[axis]) / T::from_count(self.n[axis])
    }

    pub fn spacings(&self) -> [T; 3] {
        [self.spacing(0), self.spacing(1), self.spacing(2)]
    }

    pub fn min_spacing(&self) -> T {
        let h = self.spacings();
        h[0].min(h[1]).min(h[2])
    }

    pub fn cell_volume(&self) -> T {
        let h = self.spacings();
        h[0] * h[1] * h[2]
    }

    pub fn extent(&self, axis: usize) -> T {
        self.max[axis] - self.min[axis]
    }

    #[inline]
    pub fn coord(&self, axis: usize, index: usize) -> T {
        self.min[axis] + (T::from_count(index) + T::lit(0.5)) * self.spacing(axis)
    }

    #[inline]
    pub fn position(&self, i: usize, j: usize, k: usize) -> [T; 3] {
        [self.coord(0, i), self.coord(1, j), self.coord(2, k)]
    }

    pub fn n_points(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.n[0] * (j + self.n[1] * k)
    }

    #[inline]
    pub fn unindex(&self, p: usize) -> (usize, usize, usize) {
        let i = p % self.n[0];
        let r = p / self.n[0];
        (i, r % self.n[1], r / self.n[1])
    }

    pub fn center(&self) -> [T; 3] {
        let two = T::lit(2.0);
        [
            (self.min[0] + self.max[0]) / two,
            (self.min[1] + self.max[1]) / two,
            (self.min[2] + self.max[2]) / two,
        ]
    }

    /// Points farther than the one-sided closure zone from every extrapolating
    /// boundary. Every point on a fully periodic grid is interior.
    pub fn is_interior(&self, idx: [usize; 3]) -> bool {
        (0..3).all(|d| match self.boundary[d] {
            Boundary::Periodic => true,
            Boundary::Extrapolate => idx[d] >= 3 && idx[d] + 3 < self.n[d],
        })
    }

    pub fn with_resolution(&self, n: [usize; 3]) -> Result<Self, StateError> {
        Self::new(n, self.min, self.max, self.boundary)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_centred_coordinates() {
        let g = GridSpec::<f64>::periodic_cube(10, -0.5, 0.5).unwrap();
        assert_eq!(g.spacing(0), 0.1);
        assert!((g.coord(0, 0) + 0.45).abs() < 1e-15);
        assert!((g.coord(2, 9) - 0.45).abs() < 1e-15);
        assert_eq!(g.n_points(), 1000);
        assert_eq!(g.unindex(g.index(3, 4, 5)), (3, 4, 5));
    }

    #[test]
    fn rejects_degenerate_axes() {
        assert!(GridSpec::<f64>::periodic_cube(0, 0.0, 1.0).is_err());
        assert!(GridSpec::<f64>::periodic_cube(4, 1.0, 1.0).is_err());
        assert!(GridSpec::<f64>::periodic_cube(4, 1.0, 0.0).is_err());
    }

    #[test]
    fn coordinates_reproducible() {
        let g = GridSpec::<f64>::new(
            [80, 80, 8],
            [-40.0, -40.0, -4.0],
            [40.0, 40.0, 4.0],
            [Boundary::Periodic; 3],
        )
        .unwrap();
        let again = g.clone();
        for i in 0..80 {
            assert_eq!(g.coord(0, i).to_bits(), again.coord(0, i).to_bits());
        }
        assert_eq!(g.coord(0, 40), 0.5);
    }
}
