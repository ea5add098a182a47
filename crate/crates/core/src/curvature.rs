//! Pointwise tensor algebra for the FO-CCZ4 helper block: inverse metric,
//! Christoffel symbols and their derivatives, Ricci tensor, Z vector and the
//! covariant derivatives of the lapse.
//!
//! Index conventions: `chr[k][i][j] = Gamma^k_ij`, `dchr[k][m][i][j] =
//! d_k Gamma^m_ij`, `d[k][i][j] = D_kij`, and gradients carry the derivative
//! axis first.

use crate::error::RhsError;
use crate::scalar::{zero3, zero33, zero333, zero3333, Mat3, Real, Ten3, Ten4, Vec3};
use crate::state::layout::ccz4;
use crate::state::params::Slicing;
use crate::state::sym3::{Sym3, SYM, SYM_PAIRS};

/// Smallest admissible determinant of the conformal metric.
pub const MIN_METRIC_DET: f64 = 1e-10;

/// The 59 base FO-CCZ4 variables at one point, lapse and conformal factor
/// exponentiated.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PointState<T> {
    pub alpha: T,
    pub beta: Vec3<T>,
    pub g: Mat3<T>,
    pub phi: T,
    pub k0: T,
    pub at: Mat3<T>,
    pub k: T,
    pub theta: T,
    pub ghat: Vec3<T>,
    pub b: Vec3<T>,
    pub a: Vec3<T>,
    /// `bb[k][i] = B_k^i`
    pub bb: Mat3<T>,
    pub d: Ten3<T>,
    pub p: Vec3<T>,
}

#[inline(always)]
fn sym_at<T: Real>(q: &[T], off: usize) -> Mat3<T> {
    let mut m = zero33();
    for (s, &(i, j)) in SYM_PAIRS.iter().enumerate() {
        m[i][j] = q[off + s];
        m[j][i] = q[off + s];
    }
    m
}

impl<T: Real> PointState<T> {
    /// Reads the base variables from a flat FO-CCZ4 state vector.
    pub fn from_slice(q: &[T]) -> Self {
        let mut st = PointState {
            alpha: q[ccz4::LN_ALPHA].exp(),
            phi: q[ccz4::LN_PHI].exp(),
            k0: q[ccz4::K0],
            k: q[ccz4::K],
            theta: q[ccz4::THETA],
            g: sym_at(q, ccz4::GAMMA),
            at: sym_at(q, ccz4::ATILDE),
            ..Default::default()
        };
        for i in 0..3 {
            st.beta[i] = q[ccz4::BETA + i];
            st.ghat[i] = q[ccz4::GHAT + i];
            st.b[i] = q[ccz4::BVEC + i];
            st.a[i] = q[ccz4::A + i];
            st.p[i] = q[ccz4::P + i];
            for k in 0..3 {
                st.bb[k][i] = q[ccz4::b(k, i)];
            }
        }
        for k in 0..3 {
            st.d[k] = sym_at(q, ccz4::D + 6 * k);
        }
        st
    }
}

/// Raw first derivatives of the base variables; `x[m]` is the derivative
/// along axis `m`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PointGradients<T> {
    pub da: Mat3<T>,
    pub dp: Mat3<T>,
    /// `dbb[m][k][i] = d_m B_k^i`
    pub dbb: Ten3<T>,
    /// `dd[m][k][i][j] = d_m D_kij`
    pub dd: Ten4<T>,
    pub dk: Vec3<T>,
    pub dk0: Vec3<T>,
    pub dtheta: Vec3<T>,
    pub dghat: Mat3<T>,
    pub db: Mat3<T>,
    pub dat: Ten3<T>,
}

impl<T: Real> PointGradients<T> {
    /// Reads gradients from `dq[c][m] = d_m q_c` in FO-CCZ4 storage order.
    #[inline(always)]
    pub fn from_slice(dq: &[[T; 3]]) -> Self {
        let mut g = PointGradients::default();
        for m in 0..3 {
            g.dk[m] = dq[ccz4::K][m];
            g.dk0[m] = dq[ccz4::K0][m];
            g.dtheta[m] = dq[ccz4::THETA][m];
            for i in 0..3 {
                g.da[m][i] = dq[ccz4::A + i][m];
                g.dp[m][i] = dq[ccz4::P + i][m];
                g.dghat[m][i] = dq[ccz4::GHAT + i][m];
                g.db[m][i] = dq[ccz4::BVEC + i][m];
                for k in 0..3 {
                    g.dbb[m][k][i] = dq[ccz4::b(k, i)][m];
                }
            }
            for (s, &(i, j)) in SYM_PAIRS.iter().enumerate() {
                let v = dq[ccz4::ATILDE + s][m];
                g.dat[m][i][j] = v;
                g.dat[m][j][i] = v;
                for k in 0..3 {
                    let v = dq[ccz4::D + 6 * k + s][m];
                    g.dd[m][k][i][j] = v;
                    g.dd[m][k][j][i] = v;
                }
            }
        }
        g
    }

    /// `d_(k A_i)`
    #[inline(always)]
    pub fn sym_da(&self, k: usize, i: usize) -> T {
        (self.da[k][i] + self.da[i][k]) * T::lit(0.5)
    }

    /// `d_(k P_i)`
    #[inline(always)]
    pub fn sym_dp(&self, k: usize, i: usize) -> T {
        (self.dp[k][i] + self.dp[i][k]) * T::lit(0.5)
    }

    /// `d_(k B_j)^i`
    #[inline(always)]
    pub fn sym_dbb(&self, k: usize, j: usize, i: usize) -> T {
        (self.dbb[k][j][i] + self.dbb[j][k][i]) * T::lit(0.5)
    }

    /// `d_(k D_l)ij`
    #[inline(always)]
    pub fn sym_dd(&self, k: usize, l: usize, i: usize, j: usize) -> T {
        (self.dd[k][l][i][j] + self.dd[l][k][i][j]) * T::lit(0.5)
    }
}

/// Inverse of a symmetric 3x3 matrix via the adjugate, with its determinant.
#[inline]
pub fn inverse_sym<T: Real>(g: &Mat3<T>) -> Result<(Mat3<T>, T), RhsError> {
    let c00 = g[1][1] * g[2][2] - g[1][2] * g[2][1];
    let c01 = g[1][2] * g[2][0] - g[1][0] * g[2][2];
    let c02 = g[1][0] * g[2][1] - g[1][1] * g[2][0];
    let det = g[0][0] * c00 + g[0][1] * c01 + g[0][2] * c02;
    if !(det > T::lit(MIN_METRIC_DET)) {
        return Err(RhsError::SingularMetric {
            det: det.to_f64_lossy(),
        });
    }
    let inv = T::one() / det;
    let c11 = g[0][0] * g[2][2] - g[0][2] * g[2][0];
    let c12 = g[0][2] * g[1][0] - g[0][0] * g[1][2];
    let c22 = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let i00 = c00 * inv;
    let i01 = c01 * inv;
    let i02 = c02 * inv;
    let i11 = c11 * inv;
    let i12 = c12 * inv;
    let i22 = c22 * inv;
    Ok(([[i00, i01, i02], [i01, i11, i12], [i02, i12, i22]], det))
}

/// `gtilde^ij` from packed `gtilde_ij`.
pub fn inverse_unit_det_metric<T: Real>(g: &Sym3<T>) -> Result<Sym3<T>, RhsError> {
    let (inv, _) = inverse_sym(&g.unpack())?;
    Ok(Sym3::pack_unchecked(&inv))
}

/// `du[k][i][j] = D_k^ij = g^in g^mj D_knm`
#[inline]
pub fn d_up<T: Real>(gi: &Mat3<T>, d: &Ten3<T>) -> Ten3<T> {
    let mut r = zero333();
    for k in 0..3 {
        // t = D_k g^-1, then g^-1 t
        let mut t = zero33::<T>();
        for n in 0..3 {
            for j in 0..3 {
                t[n][j] = d[k][n][0] * gi[0][j] + d[k][n][1] * gi[1][j] + d[k][n][2] * gi[2][j];
            }
        }
        for &(i, j) in SYM_PAIRS.iter() {
            let v = gi[i][0] * t[0][j] + gi[i][1] * t[1][j] + gi[i][2] * t[2][j];
            r[k][i][j] = v;
            r[k][j][i] = v;
        }
    }
    r
}

/// `c[l][i][j] = D_ijl + D_jil - D_lij`
#[inline]
pub fn lowered_christoffel<T: Real>(d: &Ten3<T>) -> Ten3<T> {
    let mut c = zero333();
    for l in 0..3 {
        for &(i, j) in SYM_PAIRS.iter() {
            let v = d[i][j][l] + d[j][i][l] - d[l][i][j];
            c[l][i][j] = v;
            c[l][j][i] = v;
        }
    }
    c
}

/// `Gtilde^k_ij = g^kl (D_ijl + D_jil - D_lij)`
pub fn christoffel_tilde<T: Real>(gi: &Mat3<T>, d: &Ten3<T>) -> Ten3<T> {
    christoffel_tilde_from_lowered(gi, &lowered_christoffel(d))
}

#[inline]
fn christoffel_tilde_from_lowered<T: Real>(gi: &Mat3<T>, c: &Ten3<T>) -> Ten3<T> {
    let mut r = zero333();
    for k in 0..3 {
        for &(i, j) in SYM_PAIRS.iter() {
            let v = gi[k][0] * c[0][i][j] + gi[k][1] * c[1][i][j] + gi[k][2] * c[2][i][j];
            r[k][i][j] = v;
            r[k][j][i] = v;
        }
    }
    r
}

#[inline(always)]
fn raise<T: Real>(gi: &Mat3<T>, v: &Vec3<T>) -> Vec3<T> {
    let mut r = zero3();
    for i in 0..3 {
        r[i] = gi[i][0] * v[0] + gi[i][1] * v[1] + gi[i][2] * v[2];
    }
    r
}

/// `Gamma^k_ij = Gtilde^k_ij - g^kl (g_jl P_i + g_il P_j - g_ij P_l)`, with
/// `g^kl g_jl` contracted to the identity.
pub fn christoffel_full<T: Real>(gi: &Mat3<T>, g: &Mat3<T>, d: &Ten3<T>, p: &Vec3<T>) -> Ten3<T> {
    let chr_t = christoffel_tilde(gi, d);
    christoffel_full_from_tilde(&chr_t, g, p, &raise(gi, p))
}

#[inline]
fn christoffel_full_from_tilde<T: Real>(
    chr_t: &Ten3<T>,
    g: &Mat3<T>,
    p: &Vec3<T>,
    p_up: &Vec3<T>,
) -> Ten3<T> {
    let mut r = *chr_t;
    for k in 0..3 {
        for &(i, j) in SYM_PAIRS.iter() {
            let mut v = r[k][i][j] + g[i][j] * p_up[k];
            if k == j {
                v -= p[i];
            }
            if k == i {
                v -= p[j];
            }
            r[k][i][j] = v;
            r[k][j][i] = v;
        }
    }
    r
}

/// `dc[k][l][i][j] = d_(k D_i)jl + d_(k D_j)il - d_(k D_l)ij`
#[inline]
fn lowered_christoffel_derivative<T: Real>(pg: &PointGradients<T>) -> Ten4<T> {
    let mut dc = zero3333();
    let half = T::lit(0.5);
    let dd = &pg.dd;
    for k in 0..3 {
        for l in 0..3 {
            for &(i, j) in SYM_PAIRS.iter() {
                let v = (dd[k][i][j][l] + dd[i][k][j][l] + dd[k][j][i][l] + dd[j][k][i][l]
                    - dd[k][l][i][j]
                    - dd[l][k][i][j])
                    * half;
                dc[k][l][i][j] = v;
                dc[k][l][j][i] = v;
            }
        }
    }
    dc
}

/// `(d_k Gtilde^m_ij, d_k Gamma^m_ij)` from symmetrized derivatives of `D` and `P`.
pub fn christoffel_derivatives<T: Real>(
    gi: &Mat3<T>,
    g: &Mat3<T>,
    d: &Ten3<T>,
    p: &Vec3<T>,
    pg: &PointGradients<T>,
) -> (Ten4<T>, Ten4<T>) {
    let du = d_up(gi, d);
    let c = lowered_christoffel(d);
    christoffel_derivatives_cached(gi, g, d, p, &raise(gi, p), &du, &c, pg)
}

#[allow(clippy::too_many_arguments)]
#[inline(always)]
fn christoffel_derivatives_cached<T: Real>(
    gi: &Mat3<T>,
    g: &Mat3<T>,
    d: &Ten3<T>,
    p: &Vec3<T>,
    p_up: &Vec3<T>,
    du: &Ten3<T>,
    c: &Ten3<T>,
    pg: &PointGradients<T>,
) -> (Ten4<T>, Ten4<T>) {
    let dc = lowered_christoffel_derivative(pg);
    let two = T::lit(2.0);
    let mut dchr_t = zero3333();
    let mut dchr = zero3333();
    let mut sdp = zero33::<T>();
    for k in 0..3 {
        for i in 0..3 {
            sdp[k][i] = pg.sym_dp(k, i);
        }
    }
    for k in 0..3 {
        // d_k P^m = -2 D_k^ml P_l + g^ml d_(k P_l)
        let mut dp_up = zero3::<T>();
        for m in 0..3 {
            dp_up[m] = -two * (du[k][m][0] * p[0] + du[k][m][1] * p[1] + du[k][m][2] * p[2])
                + gi[m][0] * sdp[k][0]
                + gi[m][1] * sdp[k][1]
                + gi[m][2] * sdp[k][2];
        }
        for m in 0..3 {
            for &(i, j) in SYM_PAIRS.iter() {
                let mut v = T::zero();
                for l in 0..3 {
                    v += gi[m][l] * dc[k][l][i][j] - two * du[k][m][l] * c[l][i][j];
                }
                dchr_t[k][m][i][j] = v;
                dchr_t[k][m][j][i] = v;
                let mut w = v + two * d[k][i][j] * p_up[m] + g[i][j] * dp_up[m];
                if m == j {
                    w -= sdp[k][i];
                }
                if m == i {
                    w -= sdp[k][j];
                }
                dchr[k][m][i][j] = w;
                dchr[k][m][j][i] = w;
            }
        }
    }
    (dchr_t, dchr)
}

/// `(R^m_ikj, R_ij)` with `riem[m][i][k][j] = R^m_ikj`.
pub fn riemann_ricci<T: Real>(dchr: &Ten4<T>, chr: &Ten3<T>) -> (Ten4<T>, Mat3<T>) {
    let mut riem = zero3333();
    for m in 0..3 {
        for i in 0..3 {
            for k in 0..3 {
                for j in 0..3 {
                    if k == j {
                        continue;
                    }
                    let mut v = dchr[k][m][i][j] - dchr[j][m][i][k];
                    for l in 0..3 {
                        v += chr[l][i][j] * chr[m][l][k] - chr[l][i][k] * chr[m][l][j];
                    }
                    riem[m][i][k][j] = v;
                }
            }
        }
    }
    let mut ric = zero33();
    for i in 0..3 {
        for j in 0..3 {
            ric[i][j] = riem[0][i][0][j] + riem[1][i][1][j] + riem[2][i][2][j];
        }
    }
    (riem, ric)
}

/// `R_ij = R^m_imj` without forming the Riemann tensor; symmetric by
/// construction.
#[inline]
pub fn ricci<T: Real>(dchr: &Ten4<T>, chr: &Ten3<T>) -> Mat3<T> {
    let mut tr = zero3::<T>();
    for l in 0..3 {
        tr[l] = chr[0][l][0] + chr[1][l][1] + chr[2][l][2];
    }
    let mut ric = zero33();
    for &(i, j) in SYM_PAIRS.iter() {
        let mut v = T::zero();
        for m in 0..3 {
            v += dchr[m][m][i][j] - dchr[j][m][i][m];
        }
        for l in 0..3 {
            v += chr[l][i][j] * tr[l];
            for m in 0..3 {
                v -= chr[l][i][m] * chr[m][l][j];
            }
        }
        ric[i][j] = v;
        ric[j][i] = v;
    }
    ric
}

/// Z-vector quantities of the helper block.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ZBlock<T> {
    pub z_lo: Vec3<T>,
    pub z_up: Vec3<T>,
    /// `nz[i][j] = nabla_i Z_j`
    pub nz: Mat3<T>,
    /// `R + 2 nabla_k Z^k`
    pub r_plus_2divz: T,
}

#[allow(clippy::too_many_arguments)]
pub fn z_vector_block<T: Real>(
    ghat: &Vec3<T>,
    gt: &Vec3<T>,
    dgt: &Mat3<T>,
    dghat: &Mat3<T>,
    g: &Mat3<T>,
    gi: &Mat3<T>,
    phi: T,
    d: &Ten3<T>,
    chr: &Ten3<T>,
    ric: &Mat3<T>,
) -> ZBlock<T> {
    let half = T::lit(0.5);
    let mut dz = zero3::<T>();
    for i in 0..3 {
        dz[i] = ghat[i] - gt[i];
    }
    let mut z_lo = zero3::<T>();
    let mut z_up = zero3::<T>();
    let phi2 = phi * phi;
    for i in 0..3 {
        z_lo[i] = half * (g[i][0] * dz[0] + g[i][1] * dz[1] + g[i][2] * dz[2]);
        z_up[i] = half * phi2 * dz[i];
    }
    let mut ddz = zero33::<T>();
    for i in 0..3 {
        for l in 0..3 {
            ddz[i][l] = dghat[i][l] - dgt[i][l];
        }
    }
    let mut nz = zero33();
    for i in 0..3 {
        for j in 0..3 {
            let mut v = T::zero();
            for l in 0..3 {
                v += d[i][j][l] * dz[l] + half * g[j][l] * ddz[i][l] - chr[l][i][j] * z_lo[l];
            }
            nz[i][j] = v;
        }
    }
    let mut s = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            s += gi[i][j] * (ric[i][j] + nz[i][j] + nz[j][i]);
        }
    }
    ZBlock {
        z_lo,
        z_up,
        nz,
        r_plus_2divz: phi2 * s,
    }
}

/// `(nabla_i nabla_j alpha, nabla^i nabla_i alpha)`
pub fn lapse_hessian<T: Real>(
    alpha: T,
    a: &Vec3<T>,
    pg: &PointGradients<T>,
    chr: &Ten3<T>,
    phi: T,
    gi: &Mat3<T>,
) -> (Mat3<T>, T) {
    let mut h = zero33();
    let mut lap = T::zero();
    for &(i, j) in SYM_PAIRS.iter() {
        let v = alpha
            * (a[i] * a[j] + pg.sym_da(i, j)
                - chr[0][i][j] * a[0]
                - chr[1][i][j] * a[1]
                - chr[2][i][j] * a[2]);
        h[i][j] = v;
        h[j][i] = v;
        let w = if i == j { T::one() } else { T::lit(2.0) };
        lap += w * gi[i][j] * v;
    }
    (h, phi * phi * lap)
}

/// `(g(alpha), h(alpha))` with `h = g + alpha g'(alpha)`.
#[inline]
pub fn gauge_functions<T: Real>(alpha: T, slicing: Slicing) -> (T, T) {
    match slicing {
        Slicing::Harmonic => (T::one(), T::one()),
        // h = 2/alpha - 2/alpha vanishes identically
        Slicing::OnePlusLog => (T::lit(2.0) / alpha, T::zero()),
    }
}

/// Every helper-block quantity needed by the right-hand side and the monitors,
/// evaluated once per point.
#[derive(Clone, Copy, Debug, Default)]
pub struct CurvatureBundle<T> {
    pub gi: Mat3<T>,
    pub det: T,
    pub du: Ten3<T>,
    /// `D_ijl + D_jil - D_lij`
    pub c_low: Ten3<T>,
    pub chr_t: Ten3<T>,
    pub chr: Ten3<T>,
    pub dchr_t: Ten4<T>,
    pub dchr: Ten4<T>,
    pub ric: Mat3<T>,
    /// `Gtilde^i`
    pub gt: Vec3<T>,
    /// `dgt[k][i] = d_k Gtilde^i`
    pub dgt: Mat3<T>,
    pub z: ZBlock<T>,
    pub hess: Mat3<T>,
    pub lap: T,
    pub tr_a: T,
    pub g_fun: T,
    pub h_fun: T,
}

impl<T: Real> CurvatureBundle<T> {
    #[inline(always)]
    pub fn new(
        st: &PointState<T>,
        pg: &PointGradients<T>,
        slicing: Slicing,
    ) -> Result<Self, RhsError> {
        let (gi, det) = inverse_sym(&st.g)?;
        let du = d_up(&gi, &st.d);
        let c_low = lowered_christoffel(&st.d);
        let chr_t = christoffel_tilde_from_lowered(&gi, &c_low);
        let p_up = raise(&gi, &st.p);
        let chr = christoffel_full_from_tilde(&chr_t, &st.g, &st.p, &p_up);
        let (dchr_t, dchr) =
            christoffel_derivatives_cached(&gi, &st.g, &st.d, &st.p, &p_up, &du, &c_low, pg);
        let ric = ricci(&dchr, &chr);

        let mut gt = zero3::<T>();
        let mut dgt = zero33::<T>();
        let two = T::lit(2.0);
        for i in 0..3 {
            let mut v = T::zero();
            for &(j, l) in SYM_PAIRS.iter() {
                let w = if j == l { gi[j][l] } else { two * gi[j][l] };
                v += w * chr_t[i][j][l];
                for k in 0..3 {
                    let wd = if j == l { T::one() } else { two };
                    dgt[k][i] +=
                        wd * (gi[j][l] * dchr_t[k][i][j][l] - two * du[k][j][l] * chr_t[i][j][l]);
                }
            }
            gt[i] = v;
        }
        let z = z_vector_block(
            &st.ghat, &gt, &dgt, &pg.dghat, &st.g, &gi, st.phi, &st.d, &chr, &ric,
        );
        let (hess, lap) = lapse_hessian(st.alpha, &st.a, pg, &chr, st.phi, &gi);
        let mut tr_a = T::zero();
        for &(i, j) in SYM_PAIRS.iter() {
            let w = if i == j { T::one() } else { two };
            tr_a += w * gi[i][j] * st.at[i][j];
        }
        let (g_fun, h_fun) = gauge_functions(st.alpha, slicing);
        Ok(Self {
            gi,
            det,
            du,
            c_low,
            chr_t,
            chr,
            dchr_t,
            dchr,
            ric,
            gt,
            dgt,
            z,
            hess,
            lap,
            tr_a,
            g_fun,
            h_fun,
        })
    }
}

/// Index of a symmetric pair in packed storage.
#[inline(always)]
pub fn sym_index(i: usize, j: usize) -> usize {
    SYM[i][j]
}
