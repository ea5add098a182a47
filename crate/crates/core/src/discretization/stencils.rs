//! Finite-difference coefficient tables for one grid axis.

use crate::error::EvolveError;
use crate::scalar::Real;
use crate::state::{Boundary, GridSpec};

/// Fourth-order central first derivative, offsets -2..=2, times `h`.
pub const CENTRAL: [f64; 5] = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];

/// Fourth-order one-sided first derivatives at the two outermost layers,
/// times `h`. Row `r` applies at index `r` and reads indices `0..5`.
pub const LEFT: [[f64; 5]; 2] = [
    [
        -25.0 / 12.0,
        48.0 / 12.0,
        -36.0 / 12.0,
        16.0 / 12.0,
        -3.0 / 12.0,
    ],
    [
        -3.0 / 12.0,
        -10.0 / 12.0,
        18.0 / 12.0,
        -6.0 / 12.0,
        1.0 / 12.0,
    ],
];

/// Sixth difference `(D+ D-)^3`, offsets -3..=3.
pub const KO: [f64; 7] = [1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0];

/// Smallest axis length the first-derivative stencils support.
pub const MIN_POINTS: usize = 5;

/// First-derivative taps and dissipation taps of every index along one axis.
#[derive(Clone, Debug)]
pub struct AxisStencil<T> {
    pub n: usize,
    /// Axis of a single cell: derivatives along it vanish.
    pub flat: bool,
    /// `d f / dx (i) = sum taps[i][m].1 * f(taps[i][m].0)`.
    pub taps: Vec<[(usize, T); 5]>,
    /// Indices `i-2, i-1, i+1, i+2` where the central stencil applies, for
    /// the antisymmetric form `c1 (f+1 - f-1) - c2 (f+2 - f-2)`.
    pub central: Vec<Option<[usize; 4]>>,
    /// `(8 / (12 h), 1 / (12 h))`
    pub central_weights: (T, T),
    /// Neighbour indices of the 7-point dissipation stencil where it fits.
    pub ko: Vec<Option<[usize; 7]>>,
    /// `sigma / (64 h)`.
    pub ko_weight: T,
}

impl<T: Real> AxisStencil<T> {
    pub fn new(
        n: usize,
        h: T,
        boundary: Boundary,
        sigma: T,
        axis: usize,
    ) -> Result<Self, EvolveError> {
        if n == 1 {
            return Ok(Self {
                n,
                flat: true,
                taps: Vec::new(),
                central: vec![None],
                central_weights: (T::zero(), T::zero()),
                ko: vec![None],
                ko_weight: T::zero(),
            });
        }
        if n < MIN_POINTS {
            return Err(EvolveError::GridTooSmall {
                axis,
                n,
                min: MIN_POINTS,
            });
        }
        let inv_h = T::one() / h;
        let w = |c: f64| T::lit(c) * inv_h;
        let mut taps = Vec::with_capacity(n);
        let mut ko = Vec::with_capacity(n);
        let mut central = Vec::with_capacity(n);
        for i in 0..n {
            let t: [(usize, T); 5] = match boundary {
                Boundary::Periodic => std::array::from_fn(|m| ((i + n + m - 2) % n, w(CENTRAL[m]))),
                Boundary::Extrapolate => {
                    if i < 2 {
                        std::array::from_fn(|m| (m, w(LEFT[i][m])))
                    } else if i + 2 >= n {
                        // mirror of the left closure with the sign flipped
                        let r = n - 1 - i;
                        std::array::from_fn(|m| (n - 1 - m, -w(LEFT[r][m])))
                    } else {
                        std::array::from_fn(|m| (i + m - 2, w(CENTRAL[m])))
                    }
                }
            };
            taps.push(t);
            let c = match boundary {
                Boundary::Periodic => {
                    Some([(i + n - 2) % n, (i + n - 1) % n, (i + 1) % n, (i + 2) % n])
                }
                Boundary::Extrapolate if i >= 2 && i + 2 < n => Some([i - 2, i - 1, i + 1, i + 2]),
                _ => None,
            };
            central.push(c);
            let k = match boundary {
                Boundary::Periodic if n >= 7 => Some(std::array::from_fn(|m| (i + n + m - 3) % n)),
                Boundary::Extrapolate if i >= 3 && i + 3 < n => {
                    Some(std::array::from_fn(|m| i + m - 3))
                }
                _ => None,
            };
            ko.push(k);
        }
        Ok(Self {
            n,
            flat: false,
            taps,
            central,
            central_weights: (w(8.0 / 12.0), w(1.0 / 12.0)),
            ko,
            ko_weight: sigma / (T::lit(64.0) * h),
        })
    }
}

/// Stencil tables of all three axes of a grid.
#[derive(Clone, Debug)]
pub struct StencilSet<T> {
    pub axes: [AxisStencil<T>; 3],
    pub ko_sigma: T,
}

impl<T: Real> StencilSet<T> {
    pub fn new(grid: &GridSpec<T>, ko_sigma: T) -> Result<Self, EvolveError> {
        let axis =
            |d: usize| AxisStencil::new(grid.n[d], grid.spacing(d), grid.boundary[d], ko_sigma, d);
        Ok(Self {
            axes: [axis(0)?, axis(1)?, axis(2)?],
            ko_sigma,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencils_annihilate_constants() {
        assert!(CENTRAL.iter().sum::<f64>().abs() < 1e-15);
        for row in LEFT {
            assert!(row.iter().sum::<f64>().abs() < 1e-15);
        }
        assert_eq!(KO.iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn one_sided_rows_exact_on_quartics() {
        // d/dx x^p at x = r for samples at 0..5
        for (r, row) in LEFT.iter().enumerate() {
            for p in 1..=4 {
                let d: f64 = row
                    .iter()
                    .enumerate()
                    .map(|(m, c)| c * (m as f64).powi(p))
                    .sum();
                let exact = p as f64 * (r as f64).powi(p - 1);
                assert!((d - exact).abs() < 1e-12, "row {r} power {p}");
            }
        }
    }

    #[test]
    fn right_closure_mirrors_left() {
        let s = AxisStencil::<f64>::new(9, 1.0, Boundary::Extrapolate, 0.05, 0).unwrap();
        // f = x^3 sampled at x = i
        let f: Vec<f64> = (0..9).map(|i| (i as f64).powi(3)).collect();
        for i in 0..9 {
            let d: f64 = s.taps[i].iter().map(|&(j, w)| w * f[j]).sum();
            assert!((d - 3.0 * (i as f64).powi(2)).abs() < 1e-10, "index {i}");
        }
        assert!(s.ko[2].is_none() && s.ko[3].is_some() && s.ko[5].is_some() && s.ko[6].is_none());
    }

    #[test]
    fn small_axes() {
        assert!(
            AxisStencil::<f64>::new(1, 1.0, Boundary::Periodic, 0.05, 2)
                .unwrap()
                .flat
        );
        assert!(AxisStencil::<f64>::new(4, 1.0, Boundary::Periodic, 0.05, 2).is_err());
        let s = AxisStencil::<f64>::new(6, 1.0, Boundary::Periodic, 0.05, 2).unwrap();
        assert!(s.ko.iter().all(Option::is_none));
    }
}
