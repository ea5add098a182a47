//! Literal FO-CCZ4 right-hand side with GLM cleaning, plus the ADM monitors.
//!
//! Each equation is written as `d_t Q = (right-hand side) - (left-hand side
//! terms)` in the order the terms appear in the governing equations.

use crate::curvature::{self, Grad, State};
use crate::{eps, inverse, sym_slot, M3, T3};
use std::f64::consts::PI;

pub const N: usize = 103;

// storage offsets, decoded independently of the crate under test
const O_LNALPHA: usize = 0;
const O_BETA: usize = 1;
const O_G: usize = 4;
const O_LNPHI: usize = 10;
const O_K0: usize = 11;
const O_AT: usize = 12;
const O_K: usize = 18;
const O_THETA: usize = 19;
const O_GHAT: usize = 20;
const O_B: usize = 23;
const O_A: usize = 26;
const O_PSIA: usize = 29;
const O_PHIA: usize = 32;
const O_BB: usize = 33;
const O_PSIB: usize = 42;
const O_PHIB: usize = 51;
const O_D: usize = 54;
const O_PSID: usize = 72;
const O_PHID: usize = 90;
const O_P: usize = 96;
const O_PSIP: usize = 99;
const O_PHIP: usize = 102;

#[derive(Clone, Debug)]
pub struct Params {
    pub harmonic: bool,
    pub s: f64,
    pub f: f64,
    pub mu: f64,
    pub eta: f64,
    pub c: f64,
    pub e: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    pub glm: bool,
    /// rows A, B, D, P; columns a_c, a_d, eps_c, eps_d
    pub clean: [[f64; 4]; 4],
}

#[derive(Clone, Debug, Default)]
pub struct Matter {
    pub tau: f64,
    pub s_i: [f64; 3],
    pub s_ij: M3,
}

fn sym_from(q: &[f64], off: usize) -> M3 {
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = q[off + sym_slot(i, j)];
        }
    }
    m
}

pub fn unpack_state(q: &[f64]) -> State {
    let mut st = State {
        alpha: q[O_LNALPHA].exp(),
        phi: q[O_LNPHI].exp(),
        k0: q[O_K0],
        k: q[O_K],
        theta: q[O_THETA],
        g: sym_from(q, O_G),
        at: sym_from(q, O_AT),
        ..Default::default()
    };
    for i in 0..3 {
        st.beta[i] = q[O_BETA + i];
        st.ghat[i] = q[O_GHAT + i];
        st.b[i] = q[O_B + i];
        st.a[i] = q[O_A + i];
        st.p[i] = q[O_P + i];
        for k in 0..3 {
            st.bb[k][i] = q[O_BB + 3 * k + i];
        }
    }
    for k in 0..3 {
        let m = sym_from(q, O_D + 6 * k);
        st.d[k] = m;
    }
    st
}

/// `dq[c][m]` is the derivative of stored component `c` along axis `m`.
pub fn unpack_grad(dq: &[[f64; 3]]) -> Grad {
    let mut g = Grad::default();
    for m in 0..3 {
        g.dk[m] = dq[O_K][m];
        g.dk0[m] = dq[O_K0][m];
        g.dtheta[m] = dq[O_THETA][m];
        for i in 0..3 {
            g.da[m][i] = dq[O_A + i][m];
            g.dp[m][i] = dq[O_P + i][m];
            g.dghat[m][i] = dq[O_GHAT + i][m];
            g.db[m][i] = dq[O_B + i][m];
            for j in 0..3 {
                g.dat[m][i][j] = dq[O_AT + sym_slot(i, j)][m];
                g.dbb[m][i][j] = dq[O_BB + 3 * i + j][m];
                for l in 0..3 {
                    g.dd[m][i][j][l] = dq[O_D + 6 * i + sym_slot(j, l)][m];
                }
            }
        }
    }
    g
}

/// Everything derived from the helper-term block.
pub struct Helpers {
    pub gi: M3,
    pub du: T3,
    pub chr_t: T3,
    pub chr: T3,
    pub ric: M3,
    pub gt: [f64; 3],
    pub dgt: M3,
    pub z: curvature::ZBlock,
    pub hess: M3,
    pub lap: f64,
    pub tra: f64,
    pub gfun: f64,
    pub hfun: f64,
}

pub fn helpers(st: &State, gr: &Grad, harmonic: bool) -> Helpers {
    let gi = inverse(&st.g);
    let du = curvature::d_up(&gi, &st.d);
    let chr_t = curvature::christoffel_tilde(&gi, &st.d);
    let chr = curvature::christoffel(&gi, &st.g, &st.d, &st.p);
    let dchr_t = curvature::dchristoffel_tilde(&gi, &st.d, gr);
    let dchr = curvature::dchristoffel(&gi, &st.g, &st.d, &st.p, gr);
    let riem = curvature::riemann(&chr, &dchr);
    let ric = curvature::ricci(&riem);
    let gt = curvature::contracted(&gi, &chr_t);
    let dgt = curvature::dcontracted(&gi, &du, &chr_t, &dchr_t);
    let z = curvature::z_block(
        &st.g, &gi, st.phi, &st.d, &chr, &st.ghat, &gt, &gr.dghat, &dgt, &ric,
    );
    let (hess, lap) = curvature::lapse_hessian(st.alpha, &st.a, gr, &chr, st.phi, &gi);
    let mut tra = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            tra += gi[i][j] * st.at[i][j];
        }
    }
    let (gfun, hfun) = curvature::gauge(st.alpha, harmonic);
    Helpers {
        gi,
        du,
        chr_t,
        chr,
        ric,
        gt,
        dgt,
        z,
        hess,
        lap,
        tra,
        gfun,
        hfun,
    }
}

pub fn rhs(q: &[f64], dq: &[[f64; 3]], mat: &Matter, p: &Params) -> Vec<f64> {
    let st = unpack_state(q);
    let gr = unpack_grad(dq);
    let h = helpers(&st, &gr, p.harmonic);
    let mut out = vec![0.0; N];

    let alpha = st.alpha;
    let phi2 = st.phi * st.phi;
    let g = &st.g;
    let gi = &h.gi;
    let at = &st.at;
    let bb = &st.bb;
    let d = &st.d;
    let s = p.s;
    let gfun = h.gfun;
    let glm = if p.glm { 1.0 } else { 0.0 };

    // matter trace S = phi^2 g^ij S_ij
    let mut s_tr = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s_tr += phi2 * gi[i][j] * mat.s_ij[i][j];
        }
    }
    let trb = bb[0][0] + bb[1][1] + bb[2][2];

    // Atilde^ij with the conformal metric
    let mut at_up = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for a in 0..3 {
                for b in 0..3 {
                    at_up[i][j] += gi[i][a] * gi[j][b] * at[a][b];
                }
            }
        }
    }
    // D_k^nm Atilde_nm
    let mut dat = [0.0; 3];
    for k in 0..3 {
        for n in 0..3 {
            for m in 0..3 {
                dat[k] += h.du[k][n][m] * at[n][m];
            }
        }
    }
    // g^nm d_k Atilde_nm
    let mut gdat = [0.0; 3];
    for k in 0..3 {
        for n in 0..3 {
            for m in 0..3 {
                gdat[k] += gi[n][m] * gr.dat[k][n][m];
            }
        }
    }

    // gtilde_ij
    for i in 0..3 {
        for j in i..3 {
            let mut v = 0.0;
            for k in 0..3 {
                v += st.beta[k] * 2.0 * d[k][i][j] + g[k][i] * bb[j][k] + g[k][j] * bb[i][k];
            }
            v -= 2.0 / 3.0 * g[i][j] * trb;
            v -= 2.0 * alpha * (at[i][j] - 1.0 / 3.0 * g[i][j] * h.tra);
            out[O_G + sym_slot(i, j)] = v;
        }
    }
    // ln alpha, K0
    {
        let mut v = 0.0;
        for k in 0..3 {
            v += st.beta[k] * st.a[k];
        }
        v -= alpha * gfun * (st.k - st.k0 - 2.0 * st.theta * p.c);
        out[O_LNALPHA] = v;
        out[O_K0] = 0.0;
    }
    // beta^i
    for i in 0..3 {
        let mut v = 0.0;
        for k in 0..3 {
            v += s * st.beta[k] * bb[k][i];
        }
        v += s * p.f * st.b[i];
        out[O_BETA + i] = v;
    }
    // ln phi
    {
        let mut v = 0.0;
        for k in 0..3 {
            v += st.beta[k] * st.p[k];
        }
        v += 1.0 / 3.0 * (alpha * st.k - trb);
        out[O_LNPHI] = v;
    }

    // Atilde_ij
    for i in 0..3 {
        for j in i..3 {
            let mut lhs = 0.0;
            for k in 0..3 {
                lhs -= st.beta[k] * gr.dat[k][i][j];
            }
            lhs += phi2
                * (h.hess[i][j]
                    - alpha
                        * (h.ric[i][j] + h.z.nz[i][j] + h.z.nz[j][i] - 8.0 * PI * mat.s_ij[i][j]));
            lhs -= 1.0 / 3.0 * g[i][j] * (h.lap - alpha * (h.z.rpluszz - 8.0 * PI * s_tr));
            let mut rhs = 0.0;
            for k in 0..3 {
                rhs += at[k][i] * bb[j][k] + at[k][j] * bb[i][k];
            }
            rhs -= 2.0 / 3.0 * at[i][j] * trb;
            rhs += alpha * at[i][j] * (st.k - 2.0 * st.theta * p.c);
            for l in 0..3 {
                for m in 0..3 {
                    rhs -= 2.0 * alpha * at[i][l] * gi[l][m] * at[m][j];
                }
            }
            out[O_AT + sym_slot(i, j)] = rhs - lhs;
        }
    }
    // K
    {
        let mut lhs = 0.0;
        for k in 0..3 {
            lhs -= st.beta[k] * gr.dk[k];
        }
        lhs += h.lap - alpha * h.z.rpluszz;
        let rhs = alpha * st.k * (st.k - 2.0 * st.theta * p.c)
            - 3.0 * alpha * p.kappa1 * (1.0 + p.kappa2) * st.theta
            + 4.0 * PI * alpha * (s_tr - 3.0 * mat.tau);
        out[O_K] = rhs - lhs;
    }
    // Theta
    {
        let mut lhs = 0.0;
        for k in 0..3 {
            lhs -= st.beta[k] * gr.dtheta[k];
        }
        lhs -= 0.5 * alpha * p.e * p.e * h.z.rpluszz;
        let mut aa = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                aa += at[i][j] * at_up[i][j];
            }
        }
        let mut rhs = alpha * p.e * p.e * (1.0 / 3.0 * st.k * st.k - 0.5 * aa - 8.0 * PI * mat.tau);
        rhs -= alpha * st.theta * st.k * p.c;
        for i in 0..3 {
            rhs -= h.z.z_up[i] * alpha * st.a[i];
        }
        rhs -= alpha * p.kappa1 * (2.0 + p.kappa2) * st.theta;
        out[O_THETA] = rhs - lhs;
    }
    // Ghat^i (the non-advective part is reused by b^i)
    let mut ghat_src = [0.0; 3];
    for i in 0..3 {
        let mut lhs = 0.0;
        for j in 0..3 {
            lhs += 4.0 / 3.0 * alpha * gi[i][j] * gr.dk[j];
        }
        for k in 0..3 {
            lhs -= 2.0 * alpha * gi[k][i] * gr.dtheta[k];
        }
        for k in 0..3 {
            for l in 0..3 {
                lhs -= gi[k][l] * gr.sym_dbb(k, l, i);
            }
        }
        for k in 0..3 {
            for l in 0..3 {
                lhs -= 1.0 / 3.0 * gi[i][k] * gr.sym_dbb(k, l, l);
            }
        }
        for k in 0..3 {
            for n in 0..3 {
                for m in 0..3 {
                    lhs -= s * 2.0 * alpha * gi[i][k] * gi[n][m] * gr.dat[k][n][m];
                }
            }
        }
        let mut rhs = 2.0 / 3.0 * h.gt[i] * trb;
        for k in 0..3 {
            rhs -= h.gt[k] * bb[k][i];
        }
        for j in 0..3 {
            for k in 0..3 {
                rhs += 2.0 * alpha * h.chr_t[i][j][k] * at_up[j][k];
            }
            rhs -= 2.0 * alpha * 3.0 * at_up[i][j] * st.p[j];
        }
        for k in 0..3 {
            rhs -= 2.0 * alpha * gi[k][i] * (st.theta * st.a[k] + 2.0 / 3.0 * st.k * h.z.z_lo[k]);
        }
        for j in 0..3 {
            rhs -= 2.0 * alpha * at_up[i][j] * st.a[j];
        }
        for k in 0..3 {
            rhs -= 4.0 * s * alpha * gi[i][k] * dat[k];
        }
        for j in 0..3 {
            rhs += 2.0 * p.kappa3 * (2.0 / 3.0 * gi[i][j] * h.z.z_lo[j] * trb);
            for k in 0..3 {
                rhs -= 2.0 * p.kappa3 * gi[j][k] * h.z.z_lo[j] * bb[k][i];
            }
            rhs -= 2.0 * alpha * p.kappa1 * gi[i][j] * h.z.z_lo[j];
            rhs -= 16.0 * PI * alpha * gi[i][j] * mat.s_i[j];
        }
        ghat_src[i] = rhs - lhs;
        let mut adv = 0.0;
        for k in 0..3 {
            adv += st.beta[k] * gr.dghat[k][i];
        }
        out[O_GHAT + i] = ghat_src[i] + adv;
    }
    // b^i
    for i in 0..3 {
        let mut adv = 0.0;
        for k in 0..3 {
            adv += s * st.beta[k] * gr.db[k][i];
        }
        out[O_B + i] = adv + s * (ghat_src[i] - p.eta * st.b[i]);
    }

    let dq_psi = |off: usize, comp: usize, l: usize| dq[off + comp][l];

    // A_k and its cleaning pair
    let [ac, ad, ec, ed] = p.clean[0];
    for k in 0..3 {
        let mut lhs = 0.0;
        for l in 0..3 {
            lhs -= st.beta[l] * gr.da[l][k];
        }
        for l in 0..3 {
            for m in 0..3 {
                lhs += glm * eps(k, l, m) * dq_psi(O_PSIA, m, l);
            }
        }
        lhs += alpha * gfun * (gr.dk[k] - gr.dk0[k] - 2.0 * p.c * gr.dtheta[k]);
        lhs += s * alpha * gfun * gdat[k];
        let mut rhs = 2.0 * s * alpha * gfun * dat[k];
        rhs -= alpha * st.a[k] * (st.k - st.k0 - 2.0 * st.theta * p.c) * h.hfun;
        for l in 0..3 {
            rhs += bb[k][l] * st.a[l];
        }
        out[O_A + k] = rhs - lhs;

        let mut v = -ec * q[O_PSIA + k];
        for l in 0..3 {
            for m in 0..3 {
                v += ac * ac * eps(k, l, m) * gr.da[l][m];
            }
        }
        v -= dq[O_PHIA][k];
        out[O_PSIA + k] = glm * v;
    }
    {
        let mut div = 0.0;
        for m in 0..3 {
            div += dq[O_PSIA + m][m];
        }
        out[O_PHIA] = glm * (-ad * ad * div - ed * q[O_PHIA]);
    }

    // B_k^i and its cleaning pair
    let [ac, ad, ec, ed] = p.clean[1];
    for k in 0..3 {
        for i in 0..3 {
            let mut lhs = 0.0;
            for l in 0..3 {
                lhs -= s * st.beta[l] * gr.dbb[l][k][i];
            }
            for l in 0..3 {
                for m in 0..3 {
                    lhs += glm * eps(k, l, m) * dq[O_PSIB + 3 * m + i][l];
                }
            }
            let mut inner = p.f * gr.db[k][i];
            for j in 0..3 {
                inner -= alpha * alpha * p.mu * gi[i][j] * (gr.dp[k][j] - gr.dp[j][k]);
                for n in 0..3 {
                    for l in 0..3 {
                        inner += alpha
                            * alpha
                            * p.mu
                            * gi[i][j]
                            * gi[n][l]
                            * (gr.dd[k][l][j][n] - gr.dd[l][k][j][n]);
                    }
                }
            }
            lhs -= s * inner;
            let mut rhs = 0.0;
            for l in 0..3 {
                rhs += s * bb[k][l] * bb[l][i];
            }
            out[O_BB + 3 * k + i] = rhs - lhs;

            let mut v = -ec * q[O_PSIB + 3 * k + i];
            for l in 0..3 {
                for m in 0..3 {
                    v += ac * ac * eps(k, l, m) * gr.dbb[l][m][i];
                }
            }
            v -= dq[O_PHIB + i][k];
            out[O_PSIB + 3 * k + i] = glm * v;
        }
    }
    for i in 0..3 {
        let mut div = 0.0;
        for m in 0..3 {
            div += dq[O_PSIB + 3 * m + i][m];
        }
        out[O_PHIB + i] = glm * (-ad * ad * div - ed * q[O_PHIB + i]);
    }

    // D_kij and its cleaning pair
    let [ac, ad, ec, ed] = p.clean[2];
    for k in 0..3 {
        for i in 0..3 {
            for j in i..3 {
                let mut lhs = 0.0;
                for l in 0..3 {
                    lhs -= st.beta[l] * gr.dd[l][k][i][j];
                }
                for l in 0..3 {
                    for m in 0..3 {
                        lhs += glm * eps(k, l, m) * dq[O_PSID + 6 * m + sym_slot(i, j)][l];
                    }
                }
                let mut sh = 0.0;
                for m in 0..3 {
                    sh -= 0.5 * g[m][i] * gr.sym_dbb(k, j, m);
                    sh -= 0.5 * g[m][j] * gr.sym_dbb(k, i, m);
                    sh += 1.0 / 3.0 * g[i][j] * gr.sym_dbb(k, m, m);
                }
                lhs += s * sh;
                lhs += alpha * gr.dat[k][i][j];
                lhs -= alpha / 3.0 * g[i][j] * gdat[k];
                let mut rhs = 0.0;
                for l in 0..3 {
                    rhs += bb[k][l] * d[l][i][j] + bb[j][l] * d[k][l][i] + bb[i][l] * d[k][l][j];
                }
                rhs -= 2.0 / 3.0 * trb * d[k][i][j];
                rhs -= alpha * 2.0 / 3.0 * g[i][j] * dat[k];
                rhs -= alpha * st.a[k] * (at[i][j] - 1.0 / 3.0 * g[i][j] * h.tra);
                out[O_D + 6 * k + sym_slot(i, j)] = rhs - lhs;

                let mut v = -ec * q[O_PSID + 6 * k + sym_slot(i, j)];
                for l in 0..3 {
                    for m in 0..3 {
                        v += ac * ac * eps(k, l, m) * gr.dd[l][m][i][j];
                    }
                }
                v -= dq[O_PHID + sym_slot(i, j)][k];
                out[O_PSID + 6 * k + sym_slot(i, j)] = glm * v;
            }
        }
    }
    for i in 0..3 {
        for j in i..3 {
            let mut div = 0.0;
            for m in 0..3 {
                div += dq[O_PSID + 6 * m + sym_slot(i, j)][m];
            }
            out[O_PHID + sym_slot(i, j)] = glm * (-ad * ad * div - ed * q[O_PHID + sym_slot(i, j)]);
        }
    }

    // P_k and its cleaning pair
    let [ac, ad, ec, ed] = p.clean[3];
    for k in 0..3 {
        let mut lhs = 0.0;
        for l in 0..3 {
            lhs -= st.beta[l] * gr.dp[l][k];
        }
        for l in 0..3 {
            for m in 0..3 {
                lhs += glm * eps(k, l, m) * dq[O_PSIP + m][l];
            }
        }
        lhs -= 1.0 / 3.0 * alpha * gr.dk[k];
        for i in 0..3 {
            lhs += 1.0 / 3.0 * gr.sym_dbb(k, i, i);
        }
        lhs -= s / 3.0 * alpha * gdat[k];
        let mut rhs = 1.0 / 3.0 * alpha * st.a[k] * st.k;
        for l in 0..3 {
            rhs += bb[k][l] * st.p[l];
        }
        rhs -= s * 2.0 / 3.0 * alpha * dat[k];
        out[O_P + k] = rhs - lhs;

        let mut v = -ec * q[O_PSIP + k];
        for l in 0..3 {
            for m in 0..3 {
                v += ac * ac * eps(k, l, m) * gr.dp[l][m];
            }
        }
        v -= dq[O_PHIP][k];
        out[O_PSIP + k] = glm * v;
    }
    {
        let mut div = 0.0;
        for m in 0..3 {
            div += dq[O_PSIP + m][m];
        }
        out[O_PHIP] = glm * (-ad * ad * div - ed * q[O_PHIP]);
    }

    out
}

/// Physical `K_ij = (Atilde_ij + K gtilde_ij / 3) / phi^2`.
pub fn k_phys(st: &State) -> M3 {
    let mut kk = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            kk[i][j] = (st.at[i][j] + st.k * st.g[i][j] / 3.0) / (st.phi * st.phi);
        }
    }
    kk
}

/// Hamiltonian constraint `R_ij g^ij - K_ij K^ij + K^2 - 16 pi tau`.
pub fn hamiltonian(q: &[f64], dq: &[[f64; 3]], tau: f64) -> f64 {
    let st = unpack_state(q);
    let gr = unpack_grad(dq);
    let h = helpers(&st, &gr, true);
    let phi2 = st.phi * st.phi;
    let mut gup = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            gup[i][j] = phi2 * h.gi[i][j];
        }
    }
    let kk = k_phys(&st);
    let mut r = 0.0;
    let mut kk2 = 0.0;
    let mut ktr = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            r += h.ric[i][j] * gup[i][j];
            ktr += gup[i][j] * kk[i][j];
            for a in 0..3 {
                for b in 0..3 {
                    kk2 += kk[i][j] * gup[i][a] * gup[j][b] * kk[a][b];
                }
            }
        }
    }
    r - kk2 + ktr * ktr - 16.0 * PI * tau
}

/// Momentum constraints with `d_l K_ij` assembled by the chain rule.
pub fn momentum(q: &[f64], dq: &[[f64; 3]], s_i: [f64; 3]) -> [f64; 3] {
    let st = unpack_state(q);
    let gr = unpack_grad(dq);
    let h = helpers(&st, &gr, true);
    let phi2 = st.phi * st.phi;
    let kk = k_phys(&st);
    // dk[l][i][j] = d_l K_ij, using d_l gtilde_ij = 2 D_lij and d_l phi = phi P_l
    let mut dk = [[[0.0; 3]; 3]; 3];
    for l in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let inner = st.at[i][j] + st.k * st.g[i][j] / 3.0;
                let dinner = gr.dat[l][i][j]
                    + gr.dk[l] * st.g[i][j] / 3.0
                    + st.k * 2.0 * st.d[l][i][j] / 3.0;
                dk[l][i][j] = dinner / phi2 - 2.0 * st.p[l] * inner / phi2;
            }
        }
    }
    let mut m = [0.0; 3];
    for i in 0..3 {
        let mut v = 0.0;
        for j in 0..3 {
            for l in 0..3 {
                let gup = phi2 * h.gi[j][l];
                let mut t = dk[l][i][j] - dk[i][j][l];
                for mm in 0..3 {
                    t += -h.chr[mm][j][l] * kk[mm][i] + h.chr[mm][j][i] * kk[mm][l];
                }
                v += gup * t;
            }
        }
        m[i] = v - 8.0 * PI * s_i[i];
    }
    m
}
