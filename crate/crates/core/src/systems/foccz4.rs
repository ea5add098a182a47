//! Augmented FO-CCZ4 with GLM curl cleaning of the auxiliary variables.

use std::f64::consts::PI;

use crate::constraints;
use crate::curvature::{inverse_sym, CurvatureBundle, PointGradients, PointState};
use crate::error::RhsError;
use crate::scalar::{zero33, Mat3, Real, Vec3};
use crate::state::layout::ccz4::*;
use crate::state::sym3::{SYM, SYM_PAIRS};
use crate::state::{layout_for, Ccz4Params, Cleaning, SystemDescriptor, SystemKind};

use super::matter::{MatterModel, MatterRecord};
use super::{curl_of, div_of, sym_max_eigenvalue, MonitorFamily, System};

/// Writes `dQ/dt` for the 103 FO-CCZ4 components into `out[..103]`.
pub fn rhs_foccz4<T: Real>(
    q: &[T],
    dq: &[[T; 3]],
    matter: &MatterRecord<T>,
    p: &Ccz4Params<T>,
    out: &mut [T],
) -> Result<(), RhsError> {
    // v - v is NaN exactly for infinite or NaN v
    #[allow(clippy::eq_op)]
    let probe = q[..COUNT].iter().fold(T::zero(), |s, &v| s + (v - v));
    if probe != T::zero() {
        let c = q[..COUNT].iter().position(|v| !v.is_finite()).unwrap_or(0);
        return Err(RhsError::NonFinite { component: c });
    }
    let st = PointState::from_slice(q);
    let pg = PointGradients::from_slice(dq);
    let cb = CurvatureBundle::new(&st, &pg, p.slicing)?;
    rhs_with_bundle(q, dq, &st, &pg, &cb, matter, p, out);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
#[inline]
fn rhs_with_bundle<T: Real>(
    q: &[T],
    dq: &[[T; 3]],
    st: &PointState<T>,
    pg: &PointGradients<T>,
    cb: &CurvatureBundle<T>,
    matter: &MatterRecord<T>,
    p: &Ccz4Params<T>,
    out: &mut [T],
) {
    let l = T::lit;
    let pi = l(PI);
    let (one_third, two_thirds, half, two) = (l(1.0 / 3.0), l(2.0 / 3.0), l(0.5), l(2.0));

    let alpha = st.alpha;
    let phi2 = st.phi * st.phi;
    let g = &st.g;
    let gi = &cb.gi;
    let at = &st.at;
    let bb = &st.bb;
    let d = &st.d;
    let beta = &st.beta;
    let shift = p.shift;
    let s = p.s();
    let gfun = cb.g_fun;
    let z = &cb.z;
    let rz = z.r_plus_2divz;
    let tr_a = cb.tr_a;

    let s_tr = matter.trace(st.phi, gi);
    let tau = matter.tau;
    let trb = bb[0][0] + bb[1][1] + bb[2][2];
    let k_minus = st.k - st.k0 - two * st.theta * p.c;
    let k_c = st.k - two * st.theta * p.c;

    // Atilde gtilde^-1 and Atilde^ij
    let mut ag = zero33::<T>();
    for i in 0..3 {
        for j in 0..3 {
            ag[i][j] = at[i][0] * gi[0][j] + at[i][1] * gi[1][j] + at[i][2] * gi[2][j];
        }
    }
    let mut at_up = zero33::<T>();
    for &(i, j) in SYM_PAIRS.iter() {
        let v = gi[i][0] * ag[0][j] + gi[i][1] * ag[1][j] + gi[i][2] * ag[2][j];
        at_up[i][j] = v;
        at_up[j][i] = v;
    }
    let mut aa = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            aa += at[i][j] * at_up[i][j];
        }
    }
    // D_k^nm Atilde_nm and gtilde^nm d_k Atilde_nm
    let mut dat_c = [T::zero(); 3];
    let mut gdat = [T::zero(); 3];
    for k in 0..3 {
        for &(n, m) in SYM_PAIRS.iter() {
            let w = if n == m { T::one() } else { two };
            dat_c[k] += w * cb.du[k][n][m] * at[n][m];
            gdat[k] += w * gi[n][m] * pg.dat[k][n][m];
        }
    }
    let adv = |c: usize| beta[0] * dq[c][0] + beta[1] * dq[c][1] + beta[2] * dq[c][2];

    // ODE sector
    for &(i, j) in SYM_PAIRS.iter() {
        let mut v = T::zero();
        for k in 0..3 {
            v += two * beta[k] * d[k][i][j] + g[k][i] * bb[j][k] + g[k][j] * bb[i][k];
        }
        v -= two_thirds * g[i][j] * trb;
        v -= two * alpha * (at[i][j] - one_third * g[i][j] * tr_a);
        out[GAMMA + SYM[i][j]] = v;
    }
    out[LN_ALPHA] =
        beta[0] * st.a[0] + beta[1] * st.a[1] + beta[2] * st.a[2] - alpha * gfun * k_minus;
    out[K0] = T::zero();
    for i in 0..3 {
        out[BETA + i] = if shift {
            beta[0] * bb[0][i] + beta[1] * bb[1][i] + beta[2] * bb[2][i] + p.f * st.b[i]
        } else {
            T::zero()
        };
    }
    out[LN_PHI] = beta[0] * st.p[0]
        + beta[1] * st.p[1]
        + beta[2] * st.p[2]
        + one_third * (alpha * st.k - trb);

    // Atilde_ij
    let eight_pi = l(8.0) * pi;
    let trace_part = cb.lap - alpha * (rz - eight_pi * s_tr);
    for &(i, j) in SYM_PAIRS.iter() {
        let mut v = adv(ATILDE + SYM[i][j]);
        v -= phi2
            * (cb.hess[i][j]
                - alpha * (cb.ric[i][j] + z.nz[i][j] + z.nz[j][i] - eight_pi * matter.s_ij[i][j]));
        v += one_third * g[i][j] * trace_part;
        for k in 0..3 {
            v += at[k][i] * bb[j][k] + at[k][j] * bb[i][k];
        }
        v -= two_thirds * at[i][j] * trb;
        v += alpha * at[i][j] * k_c;
        let mut aga = T::zero();
        for m in 0..3 {
            aga += ag[i][m] * at[m][j];
        }
        v -= two * alpha * aga;
        out[ATILDE + SYM[i][j]] = v;
    }

    // K
    out[K] = adv(K) - cb.lap + alpha * rz + alpha * st.k * k_c
        - l(3.0) * alpha * p.kappa1 * (T::one() + p.kappa2) * st.theta
        + l(4.0) * pi * alpha * (s_tr - l(3.0) * tau);

    // Theta
    let e2 = p.e * p.e;
    let za = z.z_up[0] * st.a[0] + z.z_up[1] * st.a[1] + z.z_up[2] * st.a[2];
    out[THETA] = adv(THETA)
        + half * alpha * e2 * rz
        + alpha * e2 * (one_third * st.k * st.k - half * aa - eight_pi * tau)
        - alpha * st.theta * st.k * p.c
        - alpha * za
        - alpha * p.kappa1 * (two + p.kappa2) * st.theta;

    // Ghat^i and b^i
    let mut zg = [T::zero(); 3];
    let mut sg = [T::zero(); 3];
    let mut dk_up = [T::zero(); 3];
    let mut dth_up = [T::zero(); 3];
    let mut gdat_up = [T::zero(); 3];
    let mut datc_up = [T::zero(); 3];
    let mut ta = [T::zero(); 3];
    for i in 0..3 {
        for j in 0..3 {
            zg[i] += gi[i][j] * z.z_lo[j];
            sg[i] += gi[i][j] * matter.s_i[j];
            dk_up[i] += gi[i][j] * pg.dk[j];
            dth_up[i] += gi[i][j] * pg.dtheta[j];
            gdat_up[i] += gi[i][j] * gdat[j];
            datc_up[i] += gi[i][j] * dat_c[j];
            ta[i] += gi[i][j] * (st.theta * st.a[j] + two_thirds * st.k * z.z_lo[j]);
        }
    }
    // d_(k B_l)^l contracted, and the trace of d_l B_k^l per k
    let mut sym_trb = [T::zero(); 3];
    for k in 0..3 {
        for ll in 0..3 {
            sym_trb[k] += pg.sym_dbb(k, ll, ll);
        }
    }
    for i in 0..3 {
        let mut src = -l(4.0 / 3.0) * alpha * dk_up[i] + two * alpha * dth_up[i];
        let mut gdb = T::zero();
        for k in 0..3 {
            for ll in 0..3 {
                gdb += gi[k][ll] * pg.dbb[k][ll][i];
            }
        }
        src += gdb;
        src += one_third * (gi[i][0] * sym_trb[0] + gi[i][1] * sym_trb[1] + gi[i][2] * sym_trb[2]);
        if shift {
            src += two * alpha * gdat_up[i];
        }
        src += two_thirds * cb.gt[i] * trb;
        for k in 0..3 {
            src -= cb.gt[k] * bb[k][i];
        }
        let mut ca = T::zero();
        for &(j, k) in SYM_PAIRS.iter() {
            let w = if j == k { T::one() } else { two };
            ca += w * cb.chr_t[i][j][k] * at_up[j][k];
        }
        let mut ap = T::zero();
        let mut a_a = T::zero();
        for j in 0..3 {
            ap += at_up[i][j] * st.p[j];
            a_a += at_up[i][j] * st.a[j];
        }
        src += two * alpha * (ca - l(3.0) * ap);
        src -= two * alpha * ta[i];
        src -= two * alpha * a_a;
        if shift {
            src -= l(4.0) * alpha * datc_up[i];
        }
        let mut zb = T::zero();
        for j in 0..3 {
            zb += z.z_lo[j] * (gi[j][0] * bb[0][i] + gi[j][1] * bb[1][i] + gi[j][2] * bb[2][i]);
        }
        src += two * p.kappa3 * (two_thirds * zg[i] * trb - zb);
        src -= two * alpha * p.kappa1 * zg[i];
        src -= l(16.0) * pi * alpha * sg[i];
        out[GHAT + i] = src + adv(GHAT + i);
        out[BVEC + i] = if shift {
            adv(BVEC + i) + src - p.eta * st.b[i]
        } else {
            T::zero()
        };
    }

    let glm = p.glm_enabled;
    let cl = &p.cleaning;

    // A_k
    for k in 0..3 {
        let mut v = adv(A + k)
            - alpha * gfun * (pg.dk[k] - pg.dk0[k] - two * p.c * pg.dtheta[k])
            - alpha * st.a[k] * k_minus * cb.h_fun;
        if shift {
            v += alpha * gfun * (two * dat_c[k] - gdat[k]);
        }
        v += bb[k][0] * st.a[0] + bb[k][1] * st.a[1] + bb[k][2] * st.a[2];
        out[A + k] = v;
    }
    if glm {
        let curl_psi = curl_of(dq, PSI_A, 1);
        for k in 0..3 {
            out[A + k] -= curl_psi[k];
        }
        cleaning_pair(q, dq, &cl.a, A, 1, PSI_A, 1, PHI_A, out);
    }

    // B_k^i
    if shift {
        let a2mu = alpha * alpha * p.mu;
        // x[k][j] = gtilde^nl (d_k D_ljn - d_l D_kjn)
        let mut x = zero33::<T>();
        for k in 0..3 {
            for j in 0..3 {
                let mut v = T::zero();
                for n in 0..3 {
                    for ll in 0..3 {
                        v += gi[n][ll] * (pg.dd[k][ll][j][n] - pg.dd[ll][k][j][n]);
                    }
                }
                x[k][j] = v;
            }
        }
        for k in 0..3 {
            for i in 0..3 {
                let mut inner = p.f * pg.db[k][i];
                for j in 0..3 {
                    inner += a2mu * gi[i][j] * (x[k][j] - (pg.dp[k][j] - pg.dp[j][k]));
                }
                out[b(k, i)] = s * adv(b(k, i))
                    + inner
                    + bb[k][0] * bb[0][i]
                    + bb[k][1] * bb[1][i]
                    + bb[k][2] * bb[2][i];
            }
        }
    } else {
        for c in B..B + 9 {
            out[c] = T::zero();
        }
    }
    if glm {
        for i in 0..3 {
            let curl_psi = curl_of(dq, PSI_B + i, 3);
            for k in 0..3 {
                out[b(k, i)] -= curl_psi[k];
            }
            cleaning_pair(q, dq, &cl.b, B + i, 3, PSI_B + i, 3, PHI_B + i, out);
        }
    }

    // D_kij
    for k in 0..3 {
        for &(i, j) in SYM_PAIRS.iter() {
            let c = D + 6 * k + SYM[i][j];
            let mut v = adv(c);
            if shift {
                let mut sh = T::zero();
                for m in 0..3 {
                    sh += half * (g[m][i] * pg.sym_dbb(k, j, m) + g[m][j] * pg.sym_dbb(k, i, m));
                }
                sh -= one_third * g[i][j] * sym_trb[k];
                v += sh;
            }
            v -= alpha * pg.dat[k][i][j];
            v += alpha * one_third * g[i][j] * gdat[k];
            for ll in 0..3 {
                v += bb[k][ll] * d[ll][i][j] + bb[j][ll] * d[k][ll][i] + bb[i][ll] * d[k][ll][j];
            }
            v -= two_thirds * trb * d[k][i][j];
            v -= alpha * two_thirds * g[i][j] * dat_c[k];
            v -= alpha * st.a[k] * (at[i][j] - one_third * g[i][j] * tr_a);
            out[c] = v;
        }
    }
    if glm {
        for sidx in 0..6 {
            let curl_psi = curl_of(dq, PSI_D + sidx, 6);
            for k in 0..3 {
                out[D + 6 * k + sidx] -= curl_psi[k];
            }
            cleaning_pair(
                q,
                dq,
                &cl.d,
                D + sidx,
                6,
                PSI_D + sidx,
                6,
                PHI_D + sidx,
                out,
            );
        }
    }

    // P_k
    for k in 0..3 {
        let mut v = adv(P + k) + one_third * alpha * pg.dk[k] - one_third * sym_trb[k]
            + one_third * alpha * st.a[k] * st.k
            + bb[k][0] * st.p[0]
            + bb[k][1] * st.p[1]
            + bb[k][2] * st.p[2];
        if shift {
            v += one_third * alpha * gdat[k] - two_thirds * alpha * dat_c[k];
        }
        out[P + k] = v;
    }
    if glm {
        let curl_psi = curl_of(dq, PSI_P, 1);
        for k in 0..3 {
            out[P + k] -= curl_psi[k];
        }
        cleaning_pair(q, dq, &cl.p, P, 1, PSI_P, 1, PHI_P, out);
    }

    if !glm {
        for &(lo, hi) in CLEANING_RANGES.iter() {
            for c in lo..hi {
                out[c] = T::zero();
            }
        }
    }
}

/// Right-hand sides of one curl-cleaning vector `psi` and its divergence
/// scalar, for the auxiliary vector stored at `field + field_stride * m`.
#[allow(clippy::too_many_arguments)]
#[inline(always)]
fn cleaning_pair<T: Real>(
    q: &[T],
    dq: &[[T; 3]],
    c: &Cleaning<T>,
    field: usize,
    field_stride: usize,
    psi: usize,
    psi_stride: usize,
    phi: usize,
    out: &mut [T],
) {
    let a_c2 = c.a_c * c.a_c;
    let curl = curl_of(dq, field, field_stride);
    for k in 0..3 {
        let ck = psi + psi_stride * k;
        out[ck] = a_c2 * curl[k] - dq[phi][k] - c.eps_c * q[ck];
    }
    out[phi] = -c.a_d * c.a_d * div_of(dq, psi, psi_stride) - c.eps_d * q[phi];
}

/// FO-CCZ4 with a prescribed matter model. With [`MatterModel::AdvectedTau`]
/// the layout carries `tau` as a 104th component.
#[derive(Clone, Debug)]
pub struct Foccz4System<T> {
    pub params: Ccz4Params<T>,
    pub matter: MatterModel<T>,
    /// Rescale `gtilde` to unit determinant and remove the trace of `Atilde`
    /// after every step.
    pub projection: bool,
    descriptor: SystemDescriptor,
}

impl<T: Real> Foccz4System<T> {
    pub fn new(params: Ccz4Params<T>, matter: MatterModel<T>) -> Self {
        let mut descriptor = layout_for(SystemKind::Foccz4);
        if matter.has_tracer() {
            descriptor = descriptor.with_tracer("tau");
        }
        Self {
            params,
            matter,
            projection: false,
            descriptor,
        }
    }

    pub fn vacuum(params: Ccz4Params<T>) -> Self {
        Self::new(params, MatterModel::Vacuum)
    }

    #[inline]
    fn matter_at(&self, q: &[T]) -> MatterRecord<T> {
        self.matter.record(q, TAU)
    }
}

/// Families reported by the FO-CCZ4 monitor, in output order.
pub const MONITOR_FAMILIES: [(&str, usize); 10] = [
    ("H", 1),
    ("M", 3),
    ("A", 3),
    ("P", 3),
    ("B", 9),
    ("D", 18),
    ("divpsiA", 1),
    ("divpsiP", 1),
    ("divpsiB", 3),
    ("divpsiD", 6),
];

impl<T: Real> System<T> for Foccz4System<T> {
    fn descriptor(&self) -> &SystemDescriptor {
        &self.descriptor
    }

    fn needs_gradient(&self, c: usize) -> bool {
        if c >= COUNT {
            return true;
        }
        if is_cleaning(c) {
            return self.params.glm_enabled;
        }
        !matches!(c, LN_ALPHA | BETA..=6 | GAMMA..=9 | LN_PHI)
            && (c != BVEC && c != BVEC + 1 && c != BVEC + 2 || self.params.shift)
    }

    fn is_frozen(&self, c: usize) -> bool {
        c < COUNT && is_cleaning(c) && !self.params.glm_enabled
    }

    fn rhs(&self, x: &Vec3<T>, q: &[T], dq: &[[T; 3]], out: &mut [T]) -> Result<(), RhsError> {
        let rec = self.matter_at(q);
        rhs_foccz4(q, dq, &rec, &self.params, out)?;
        if let MatterModel::AdvectedTau { velocity, .. } = &self.matter {
            let v = velocity.at(x);
            out[TAU] = -(v[0] * dq[TAU][0] + v[1] * dq[TAU][1] + v[2] * dq[TAU][2]);
        }
        Ok(())
    }

    fn max_signal_speed(&self, x: &Vec3<T>, q: &[T]) -> T {
        let p = &self.params;
        let alpha = q[LN_ALPHA].exp();
        let phi2 = (T::lit(2.0) * q[LN_PHI]).exp();
        let mut g = zero33::<T>();
        for (sidx, &(i, j)) in SYM_PAIRS.iter().enumerate() {
            g[i][j] = q[GAMMA + sidx];
            g[j][i] = q[GAMMA + sidx];
        }
        let lam = match inverse_sym(&g) {
            Ok((gi, _)) => sym_max_eigenvalue(&gi) * phi2,
            Err(_) => return T::infinity(),
        };
        let sq = lam.max(T::zero()).sqrt();
        let beta =
            (q[BETA] * q[BETA] + q[BETA + 1] * q[BETA + 1] + q[BETA + 2] * q[BETA + 2]).sqrt();
        let gfun = crate::curvature::gauge_functions(alpha, p.slicing).0;
        let mut v = beta + alpha * gfun.max(T::one()).sqrt() * sq;
        v = v.max(alpha * p.e * sq.max(T::one()));
        if p.glm_enabled {
            for (_, c) in p.cleaning.families() {
                v = v.max(c.a_c).max(c.a_d);
            }
        }
        if p.shift {
            let gd = p.f.max(alpha * alpha * p.mu) * T::lit(4.0 / 3.0);
            v = v.max(beta + (gd * lam.max(T::zero())).sqrt());
        }
        if let MatterModel::AdvectedTau { velocity, .. } = &self.matter {
            let u = velocity.at(x);
            v = v.max((u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt());
        }
        v
    }

    fn monitor_families(&self) -> Vec<MonitorFamily> {
        MONITOR_FAMILIES
            .iter()
            .map(|&(n, c)| MonitorFamily::new(n, c))
            .collect()
    }

    fn monitor(&self, _x: &Vec3<T>, q: &[T], dq: &[[T; 3]], out: &mut [T]) {
        let st = PointState::from_slice(q);
        let pg = PointGradients::from_slice(dq);
        let rec = self.matter_at(q);
        match CurvatureBundle::new(&st, &pg, self.params.slicing) {
            Ok(cb) => {
                out[0] = constraints::hamiltonian(&st, &cb, &rec);
                let m = constraints::momentum(&st, &pg, &cb, &rec);
                out[1..4].copy_from_slice(&m);
            }
            Err(_) => {
                for o in out[..4].iter_mut() {
                    *o = T::nan();
                }
            }
        }
        constraints::curl_involutions(dq, &mut out[4..37]);
        constraints::cleaning_divergences(dq, &mut out[37..48]);
    }

    fn projects(&self) -> bool {
        self.projection
    }

    fn project(&self, q: &mut [T]) {
        if !self.projection {
            return;
        }
        let mut g = zero33::<T>();
        for (sidx, &(i, j)) in SYM_PAIRS.iter().enumerate() {
            g[i][j] = q[GAMMA + sidx];
            g[j][i] = q[GAMMA + sidx];
        }
        let det = crate::state::sym3::det3(&g);
        if !(det > T::zero()) {
            return;
        }
        let scale = det.powf(-T::lit(1.0 / 3.0));
        for sidx in 0..6 {
            q[GAMMA + sidx] *= scale;
        }
        for row in g.iter_mut() {
            for v in row.iter_mut() {
                *v *= scale;
            }
        }
        let gi = match inverse_sym(&g) {
            Ok((gi, _)) => gi,
            Err(_) => return,
        };
        let mut at: Mat3<T> = zero33();
        for (sidx, &(i, j)) in SYM_PAIRS.iter().enumerate() {
            at[i][j] = q[ATILDE + sidx];
            at[j][i] = q[ATILDE + sidx];
        }
        let mut tr = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                tr += gi[i][j] * at[i][j];
            }
        }
        for (sidx, &(i, j)) in SYM_PAIRS.iter().enumerate() {
            q[ATILDE + sidx] -= tr * g[i][j] / T::lit(3.0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minkowski() -> Vec<f64> {
        let mut q = vec![0.0; COUNT];
        q[GAMMA] = 1.0;
        q[GAMMA + 3] = 1.0;
        q[GAMMA + 5] = 1.0;
        q
    }

    #[test]
    fn flat_space_is_stationary() {
        let q = minkowski();
        let dq = vec![[0.0; 3]; COUNT];
        let mut out = vec![1.0; COUNT];
        let p = Ccz4Params::robust_stability();
        rhs_foccz4(&q, &dq, &MatterRecord::vacuum(), &p, &mut out).unwrap();
        assert!(out.iter().all(|v| v.abs() <= 1e-13));
    }

    #[test]
    fn constant_energy_density_sources() {
        let q = minkowski();
        let dq = vec![[0.0; 3]; COUNT];
        let mut out = vec![0.0; COUNT];
        let p = Ccz4Params {
            e: 1.0,
            ..Ccz4Params::default()
        };
        let t0 = 0.3;
        let m = MatterRecord {
            tau: t0,
            ..MatterRecord::vacuum()
        };
        rhs_foccz4(&q, &dq, &m, &p, &mut out).unwrap();
        assert!((out[THETA] + 8.0 * PI * t0).abs() < 1e-14);
        assert!((out[K] + 12.0 * PI * t0).abs() < 1e-14);
    }

    #[test]
    fn signal_speed_examples() {
        let q = minkowski();
        let sys = Foccz4System::vacuum(Ccz4Params::robust_stability());
        assert_eq!(sys.max_signal_speed(&[0.0; 3], &q), 2.0);
        let sys = Foccz4System::vacuum(Ccz4Params::default());
        assert_eq!(sys.max_signal_speed(&[0.0; 3], &q), 1.0);
        let mut q4 = q.clone();
        q4[LN_ALPHA] = 4.0f64.ln();
        let sys = Foccz4System::vacuum(Ccz4Params {
            slicing: crate::state::Slicing::OnePlusLog,
            e: 0.0,
            ..Ccz4Params::default()
        });
        assert!((sys.max_signal_speed(&[0.0; 3], &q4) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn nonpositive_metric_reported() {
        let mut q = minkowski();
        q[GAMMA] = -1.0;
        let dq = vec![[0.0; 3]; COUNT];
        let mut out = vec![0.0; COUNT];
        let err = rhs_foccz4(
            &q,
            &dq,
            &MatterRecord::vacuum(),
            &Ccz4Params::default(),
            &mut out,
        );
        assert!(matches!(err, Err(RhsError::SingularMetric { .. })));
    }

    #[test]
    fn projection_restores_unit_determinant() {
        let mut sys = Foccz4System::vacuum(Ccz4Params::<f64>::default());
        sys.projection = true;
        let mut q = minkowski();
        q[GAMMA] = 1.1;
        q[GAMMA + 1] = 0.05;
        q[ATILDE] = 0.2;
        sys.project(&mut q);
        let mut g = [[0.0; 3]; 3];
        for (sidx, &(i, j)) in SYM_PAIRS.iter().enumerate() {
            g[i][j] = q[GAMMA + sidx];
            g[j][i] = q[GAMMA + sidx];
        }
        assert!((crate::state::sym3::det3(&g) - 1.0).abs() < 1e-14);
        let (gi, _) = inverse_sym(&g).unwrap();
        let mut tr = 0.0;
        for (sidx, &(i, j)) in SYM_PAIRS.iter().enumerate() {
            let w = if i == j { 1.0 } else { 2.0 };
            tr += w * gi[i][j] * q[ATILDE + sidx];
        }
        assert!(tr.abs() < 1e-14);
    }
}
