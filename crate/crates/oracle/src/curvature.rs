//! Helper-term block of FO-CCZ4, one formula per function.

use crate::{M3, T3, T4};

/// Base FO-CCZ4 variables at a point (lapse and conformal factor exponentiated).
#[derive(Clone, Debug, Default)]
pub struct State {
    pub alpha: f64,
    pub beta: [f64; 3],
    pub g: M3,
    pub phi: f64,
    pub k0: f64,
    pub at: M3,
    pub k: f64,
    pub theta: f64,
    pub ghat: [f64; 3],
    pub b: [f64; 3],
    pub a: [f64; 3],
    /// `bb[k][i] = B_k^i`
    pub bb: M3,
    /// `d[k][i][j] = D_kij`
    pub d: T3,
    pub p: [f64; 3],
}

/// Raw first derivatives; `x[m][..]` is the derivative along axis `m`.
#[derive(Clone, Debug, Default)]
pub struct Grad {
    pub da: M3,
    pub dp: M3,
    pub dbb: T3,
    pub dd: T4,
    pub dk: [f64; 3],
    pub dk0: [f64; 3],
    pub dtheta: [f64; 3],
    pub dghat: M3,
    pub db: M3,
    pub dat: T3,
}

impl Grad {
    /// `d_(k A_i)`
    pub fn sym_da(&self, k: usize, i: usize) -> f64 {
        (self.da[k][i] + self.da[i][k]) / 2.0
    }

    /// `d_(k P_i)`
    pub fn sym_dp(&self, k: usize, i: usize) -> f64 {
        (self.dp[k][i] + self.dp[i][k]) / 2.0
    }

    /// `d_(k B_j)^i = (d_k B_j^i + d_j B_k^i) / 2`
    pub fn sym_dbb(&self, k: usize, j: usize, i: usize) -> f64 {
        (self.dbb[k][j][i] + self.dbb[j][k][i]) / 2.0
    }

    /// `d_(k D_l)ij = (d_k D_lij + d_l D_kij) / 2`
    pub fn sym_dd(&self, k: usize, l: usize, i: usize, j: usize) -> f64 {
        (self.dd[k][l][i][j] + self.dd[l][k][i][j]) / 2.0
    }
}

/// `D_k^ij = g^in g^mj D_knm`
pub fn d_up(gi: &M3, d: &T3) -> T3 {
    let mut r = [[[0.0; 3]; 3]; 3];
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                for n in 0..3 {
                    for m in 0..3 {
                        r[k][i][j] += gi[i][n] * gi[m][j] * d[k][n][m];
                    }
                }
            }
        }
    }
    r
}

/// `chr[k][i][j] = Gtilde^k_ij = g^kl (D_ijl + D_jil - D_lij)`
pub fn christoffel_tilde(gi: &M3, d: &T3) -> T3 {
    let mut r = [[[0.0; 3]; 3]; 3];
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    r[k][i][j] += gi[k][l] * (d[i][j][l] + d[j][i][l] - d[l][i][j]);
                }
            }
        }
    }
    r
}

/// `Gamma^k_ij = Gtilde^k_ij - g^kl (g_jl P_i + g_il P_j - g_ij P_l)`
pub fn christoffel(gi: &M3, g: &M3, d: &T3, p: &[f64; 3]) -> T3 {
    let mut r = christoffel_tilde(gi, d);
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    r[k][i][j] -= gi[k][l] * (g[j][l] * p[i] + g[i][l] * p[j] - g[i][j] * p[l]);
                }
            }
        }
    }
    r
}

/// `r[k][m][i][j] = d_k Gtilde^m_ij`
pub fn dchristoffel_tilde(gi: &M3, d: &T3, gr: &Grad) -> T4 {
    let du = d_up(gi, d);
    let mut r = [[[[0.0; 3]; 3]; 3]; 3];
    for k in 0..3 {
        for m in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let mut s = 0.0;
                    for l in 0..3 {
                        s += -2.0 * du[k][m][l] * (d[i][j][l] + d[j][i][l] - d[l][i][j]);
                        s += gi[m][l]
                            * (gr.sym_dd(k, i, j, l) + gr.sym_dd(k, j, i, l)
                                - gr.sym_dd(k, l, i, j));
                    }
                    r[k][m][i][j] = s;
                }
            }
        }
    }
    r
}

/// `r[k][m][i][j] = d_k Gamma^m_ij`
pub fn dchristoffel(gi: &M3, g: &M3, d: &T3, p: &[f64; 3], gr: &Grad) -> T4 {
    let du = d_up(gi, d);
    let mut r = [[[[0.0; 3]; 3]; 3]; 3];
    for k in 0..3 {
        for m in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let mut s = 0.0;
                    for l in 0..3 {
                        s += -2.0 * du[k][m][l] * (d[i][j][l] + d[j][i][l] - d[l][i][j]);
                        s += 2.0 * du[k][m][l] * (g[j][l] * p[i] + g[i][l] * p[j] - g[i][j] * p[l]);
                        s += -2.0
                            * gi[m][l]
                            * (d[k][j][l] * p[i] + d[k][i][l] * p[j] - d[k][i][j] * p[l]);
                        s += gi[m][l]
                            * (gr.sym_dd(k, i, j, l) + gr.sym_dd(k, j, i, l)
                                - gr.sym_dd(k, l, i, j));
                        s -= gi[m][l]
                            * (g[j][l] * gr.sym_dp(k, i) + g[i][l] * gr.sym_dp(k, j)
                                - g[i][j] * gr.sym_dp(k, l));
                    }
                    r[k][m][i][j] = s;
                }
            }
        }
    }
    r
}

/// `r[m][i][k][j] = R^m_ikj`
pub fn riemann(chr: &T3, dchr: &T4) -> T4 {
    let mut r = [[[[0.0; 3]; 3]; 3]; 3];
    for m in 0..3 {
        for i in 0..3 {
            for k in 0..3 {
                for j in 0..3 {
                    let mut s = dchr[k][m][i][j] - dchr[j][m][i][k];
                    for l in 0..3 {
                        s += chr[l][i][j] * chr[m][l][k] - chr[l][i][k] * chr[m][l][j];
                    }
                    r[m][i][k][j] = s;
                }
            }
        }
    }
    r
}

/// `R_ij = R^m_imj`
pub fn ricci(riem: &T4) -> M3 {
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for m in 0..3 {
                r[i][j] += riem[m][i][m][j];
            }
        }
    }
    r
}

/// `Gtilde^i = g^jl Gtilde^i_jl`
pub fn contracted(gi: &M3, chr_t: &T3) -> [f64; 3] {
    let mut r = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            for l in 0..3 {
                r[i] += gi[j][l] * chr_t[i][j][l];
            }
        }
    }
    r
}

/// `r[k][i] = d_k Gtilde^i = -2 D_k^jl Gtilde^i_jl + g^jl d_k Gtilde^i_jl`
pub fn dcontracted(gi: &M3, du: &T3, chr_t: &T3, dchr_t: &T4) -> M3 {
    let mut r = [[0.0; 3]; 3];
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    r[k][i] += -2.0 * du[k][j][l] * chr_t[i][j][l] + gi[j][l] * dchr_t[k][i][j][l];
                }
            }
        }
    }
    r
}

pub struct ZBlock {
    pub z_lo: [f64; 3],
    pub z_up: [f64; 3],
    /// `nz[i][j] = nabla_i Z_j`
    pub nz: M3,
    /// `R + 2 nabla_k Z^k`
    pub rpluszz: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn z_block(
    g: &M3,
    gi: &M3,
    phi: f64,
    d: &T3,
    chr: &T3,
    ghat: &[f64; 3],
    gt: &[f64; 3],
    dghat: &M3,
    dgt: &M3,
    ric: &M3,
) -> ZBlock {
    let mut z_lo = [0.0; 3];
    let mut z_up = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            z_lo[i] += 0.5 * g[i][j] * (ghat[j] - gt[j]);
        }
        z_up[i] = 0.5 * phi * phi * (ghat[i] - gt[i]);
    }
    let mut nz = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0.0;
            for l in 0..3 {
                s += d[i][j][l] * (ghat[l] - gt[l]);
                s += 0.5 * g[j][l] * (dghat[i][l] - dgt[i][l]);
                s -= chr[l][i][j] * z_lo[l];
            }
            nz[i][j] = s;
        }
    }
    let mut rz = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            rz += phi * phi * gi[i][j] * (ric[i][j] + nz[i][j] + nz[j][i]);
        }
    }
    ZBlock {
        z_lo,
        z_up,
        nz,
        rpluszz: rz,
    }
}

/// `(nabla_i nabla_j alpha, nabla^i nabla_i alpha)`
pub fn lapse_hessian(
    alpha: f64,
    a: &[f64; 3],
    gr: &Grad,
    chr: &T3,
    phi: f64,
    gi: &M3,
) -> (M3, f64) {
    let mut h = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            h[i][j] = alpha * a[i] * a[j] + alpha * gr.sym_da(i, j);
            for k in 0..3 {
                h[i][j] -= alpha * chr[k][i][j] * a[k];
            }
        }
    }
    let mut lap = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            lap += phi * phi * gi[i][j] * h[i][j];
        }
    }
    (h, lap)
}

/// `(g(alpha), h(alpha))`, with `h = g + alpha dg/dalpha` evaluated by hand.
pub fn gauge(alpha: f64, harmonic: bool) -> (f64, f64) {
    if harmonic {
        (1.0, 1.0)
    } else {
        let g = 2.0 / alpha;
        let dg = -2.0 / (alpha * alpha);
        (g, g + alpha * dg)
    }
}
