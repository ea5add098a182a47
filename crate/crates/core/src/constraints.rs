//! Pointwise constraint residuals of FO-CCZ4 and their grid norms.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::curvature::{CurvatureBundle, PointGradients, PointState};
use crate::scalar::{zero33, Real, Vec3};
use crate::state::layout::ccz4::{A, B, D, P, PSI_A, PSI_B, PSI_D, PSI_P};
use crate::state::sym3::SYM_PAIRS;
use crate::systems::{div_of, MatterRecord};

/// Independent `(l, k)` pairs, `l < k`, of an antisymmetric residual.
pub const CURL_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Trace-free-split extrinsic curvature times `phi^2`:
/// `Atilde_ij + K gtilde_ij / 3`.
#[inline]
fn conformal_k<T: Real>(st: &PointState<T>) -> [[T; 3]; 3] {
    let mut kk = zero33::<T>();
    let third = T::lit(1.0 / 3.0);
    for i in 0..3 {
        for j in 0..3 {
            kk[i][j] = st.at[i][j] + third * st.k * st.g[i][j];
        }
    }
    kk
}

/// `R - K_ij K^ij + K^2 - 16 pi tau` with `K_ij` rebuilt from the conformal
/// variables.
pub fn hamiltonian<T: Real>(
    st: &PointState<T>,
    cb: &CurvatureBundle<T>,
    matter: &MatterRecord<T>,
) -> T {
    let gi = &cb.gi;
    let kk = conformal_k(st);
    let mut kg = zero33::<T>();
    for i in 0..3 {
        for j in 0..3 {
            kg[i][j] = gi[i][0] * kk[0][j] + gi[i][1] * kk[1][j] + gi[i][2] * kk[2][j];
        }
    }
    let mut r = T::zero();
    let mut tr = T::zero();
    let mut kk2 = T::zero();
    for i in 0..3 {
        tr += kg[i][i];
        for j in 0..3 {
            r += gi[i][j] * cb.ric[i][j];
            kk2 += kg[i][j] * kg[j][i];
        }
    }
    st.phi * st.phi * r - kk2 + tr * tr - T::lit(16.0 * PI) * matter.tau
}

/// `gamma^jl (d_l K_ij - d_i K_jl - Gamma^m_jl K_mi + Gamma^m_ji K_ml) - 8 pi S_i`,
/// with `d_l K_ij` from the chain rule on `phi^-2 (Atilde_ij + K gtilde_ij / 3)`.
pub fn momentum<T: Real>(
    st: &PointState<T>,
    pg: &PointGradients<T>,
    cb: &CurvatureBundle<T>,
    matter: &MatterRecord<T>,
) -> Vec3<T> {
    let third = T::lit(1.0 / 3.0);
    let two = T::lit(2.0);
    let kk = conformal_k(st);
    // phi^2 d_l K_ij
    let mut dk = [[[T::zero(); 3]; 3]; 3];
    for (l, dkl) in dk.iter_mut().enumerate() {
        for &(i, j) in SYM_PAIRS.iter() {
            let v = pg.dat[l][i][j] + third * (pg.dk[l] * st.g[i][j] + two * st.k * st.d[l][i][j])
                - two * st.p[l] * kk[i][j];
            dkl[i][j] = v;
            dkl[j][i] = v;
        }
    }
    let gi = &cb.gi;
    let chr = &cb.chr;
    let mut m = [T::zero(); 3];
    for (i, mi) in m.iter_mut().enumerate() {
        let mut v = T::zero();
        for j in 0..3 {
            for l in 0..3 {
                let mut t = dk[l][i][j] - dk[i][j][l];
                for mm in 0..3 {
                    t += chr[mm][j][i] * kk[mm][l] - chr[mm][j][l] * kk[mm][i];
                }
                v += gi[j][l] * t;
            }
        }
        *mi = v - T::lit(8.0 * PI) * matter.s_i[i];
    }
    m
}

#[inline(always)]
fn pairs<T: Real>(dq: &[[T; 3]], base: usize, stride: usize, out: &mut [T]) {
    for (o, &(l, k)) in out.iter_mut().zip(CURL_PAIRS.iter()) {
        *o = dq[base + stride * k][l] - dq[base + stride * l][k];
    }
}

/// Ordering-constraint residuals `d_l X_k - d_k X_l` for the `(l, k)` pairs
/// of [`CURL_PAIRS`], written as `A (3), P (3), B^i (3 per i), D_ij (3 per
/// packed ij)`: 33 values.
pub fn curl_involutions<T: Real>(dq: &[[T; 3]], out: &mut [T]) {
    pairs(dq, A, 1, &mut out[0..3]);
    pairs(dq, P, 1, &mut out[3..6]);
    for i in 0..3 {
        pairs(dq, B + i, 3, &mut out[6 + 3 * i..9 + 3 * i]);
    }
    for s in 0..6 {
        pairs(dq, D + s, 6, &mut out[15 + 3 * s..18 + 3 * s]);
    }
}

/// Divergences of the curl-cleaning vectors: `psi^A`, `psi^P`, `psi^B` per
/// `i`, `psi^D` per packed `ij`; 11 values.
pub fn cleaning_divergences<T: Real>(dq: &[[T; 3]], out: &mut [T]) {
    out[0] = div_of(dq, PSI_A, 1);
    out[1] = div_of(dq, PSI_P, 1);
    for i in 0..3 {
        out[2 + i] = div_of(dq, PSI_B + i, 3);
    }
    for s in 0..6 {
        out[5 + s] = div_of(dq, PSI_D + s, 6);
    }
}

/// Norms of one residual family.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FamilyNorms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

/// Running sums for one family over a set of points.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NormAccumulator {
    pub abs_sum: f64,
    pub sq_sum: f64,
    pub max: f64,
}

impl NormAccumulator {
    #[inline]
    pub fn add(&mut self, r: f64) {
        let a = r.abs();
        self.abs_sum += a;
        self.sq_sum += r * r;
        // NaN propagates into the maximum
        if a > self.max || a.is_nan() {
            self.max = a;
        }
    }

    pub fn merge(&self, other: &Self) -> Self {
        Self {
            abs_sum: self.abs_sum + other.abs_sum,
            sq_sum: self.sq_sum + other.sq_sum,
            max: if self.max.is_nan() || other.max.is_nan() {
                f64::NAN
            } else {
                self.max.max(other.max)
            },
        }
    }

    /// `L1 = dV sum |r|`, `L2 = sqrt(dV sum r^2)`, `Linf = max |r|`.
    pub fn finish(&self, cell_volume: f64) -> FamilyNorms {
        FamilyNorms {
            l1: cell_volume * self.abs_sum,
            l2: (cell_volume * self.sq_sum).sqrt(),
            linf: self.max,
        }
    }
}

/// Merges per-row accumulators with a fixed pairwise tree, so the result does
/// not depend on how rows were distributed over threads.
pub fn pairwise_merge(items: &[NormAccumulator]) -> NormAccumulator {
    match items.len() {
        0 => NormAccumulator::default(),
        1 => items[0],
        n => {
            let (a, b) = items.split_at(n / 2);
            pairwise_merge(a).merge(&pairwise_merge(b))
        }
    }
}

/// Constraint norms of every monitored family at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintReport {
    pub time: f64,
    pub families: Vec<(String, FamilyNorms)>,
}

impl ConstraintReport {
    pub fn family(&self, name: &str) -> Option<&FamilyNorms> {
        self.families
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, f)| f)
    }

    pub fn csv_header(&self) -> String {
        let mut s = String::from("t");
        for (name, _) in &self.families {
            let _ = write!(s, ",{name}_L1,{name}_L2,{name}_Linf");
        }
        s
    }

    pub fn csv_row(&self) -> String {
        let mut s = format!("{:e}", self.time);
        for (_, f) in &self.families {
            let _ = write!(s, ",{:e},{:e},{:e}", f.l1, f.l2, f.linf);
        }
        s
    }

    /// Largest `Linf` over all families.
    pub fn max_linf(&self) -> f64 {
        self.families.iter().fold(0.0, |m, (_, f)| {
            if f.linf.is_nan() || m.is_nan() {
                f64::NAN
            } else {
                m.max(f.linf)
            }
        })
    }
}
