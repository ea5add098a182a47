//! Toy system with a curl involution on `J`, with GLM curl cleaning and, in the
//! non-homogeneous variant, a Burgers vector carrying the prescribed curl.
//!
//! Flux divergences are expanded with the product rule onto the point
//! gradients.

use crate::error::RhsError;
use crate::scalar::{Real, Vec3};
use crate::state::layout::toy::{B, CHI, J, MOM, PHI, PSI, RHO};
use crate::state::{layout_for, SystemDescriptor, SystemKind, ToyParams, ToySourceValue};

use super::{curl_of, div_of, MonitorFamily, System};

/// Velocity and its gradient `dv[l][k] = d_l v_k` from `rho` and `rho v`.
#[inline]
fn velocity<T: Real>(q: &[T], dq: &[[T; 3]]) -> Result<(Vec3<T>, [[T; 3]; 3]), RhsError> {
    let rho = q[RHO];
    if !(rho > T::zero()) {
        return Err(RhsError::NonPositive {
            name: "rho",
            value: rho.to_f64_lossy(),
        });
    }
    let inv = T::one() / rho;
    let v = [q[MOM] * inv, q[MOM + 1] * inv, q[MOM + 2] * inv];
    let mut dv = [[T::zero(); 3]; 3];
    for l in 0..3 {
        for k in 0..3 {
            dv[l][k] = (dq[MOM + k][l] - v[k] * dq[RHO][l]) * inv;
        }
    }
    Ok((v, dv))
}

fn rhs_toy_common<T: Real>(
    q: &[T],
    dq: &[[T; 3]],
    p: &ToyParams<T>,
    out: &mut [T],
) -> Result<Vec3<T>, RhsError> {
    let (v, dv) = velocity(q, dq)?;
    let rho = q[RHO];
    let c02 = p.c0 * p.c0;
    let jv = [q[J], q[J + 1], q[J + 2]];

    out[RHO] = -div_of(dq, MOM, 1);

    // d_i (rho v_i v_k + rho c0^2 J_i J_k)
    let mut div_j = T::zero();
    for i in 0..3 {
        div_j += dq[J + i][i];
    }
    let mut j_grad_rho = T::zero();
    for i in 0..3 {
        j_grad_rho += jv[i] * dq[RHO][i];
    }
    let mut v_grad_j = [T::zero(); 3];
    let mut v_grad_v = [T::zero(); 3];
    let mut j_grad_j = [T::zero(); 3];
    for k in 0..3 {
        for i in 0..3 {
            v_grad_v[k] += q[MOM + i] * dv[i][k];
            j_grad_j[k] += jv[i] * dq[J + k][i];
            v_grad_j[k] += v[i] * dq[J + k][i];
        }
    }
    let div_m = -out[RHO];
    for k in 0..3 {
        out[MOM + k] = -(div_m * v[k]
            + v_grad_v[k]
            + c02 * (j_grad_rho * jv[k] + rho * div_j * jv[k] + rho * j_grad_j[k]));
    }

    // d_k (v_m J_m) + v_m (d_m J_k - d_k J_m)
    for k in 0..3 {
        let mut grad_chi = T::zero();
        let mut v_dk_j = T::zero();
        for m in 0..3 {
            grad_chi += dv[k][m] * jv[m] + v[m] * dq[J + m][k];
            v_dk_j += v[m] * dq[J + m][k];
        }
        out[J + k] = -grad_chi - (v_grad_j[k] - v_dk_j);
    }

    if p.glm_enabled {
        let curl_psi = curl_of(dq, PSI, 1);
        let curl_j = curl_of(dq, J, 1);
        let a_c2 = p.a_c * p.a_c;
        for k in 0..3 {
            out[J + k] -= curl_psi[k];
            out[PSI + k] = a_c2 * curl_j[k] - dq[PHI][k] - p.eps_c * q[PSI + k];
        }
        out[PHI] = -p.a_d * p.a_d * div_of(dq, PSI, 1) - p.eps_d * q[PHI];
    } else {
        for k in 0..3 {
            out[PSI + k] = T::zero();
        }
        out[PHI] = T::zero();
    }
    Ok(v)
}

pub fn rhs_toy_homogeneous<T: Real>(
    q: &[T],
    dq: &[[T; 3]],
    p: &ToyParams<T>,
    out: &mut [T],
) -> Result<(), RhsError> {
    rhs_toy_common(q, dq, p, out).map(|_| ())
}

/// `src` is the `J_k` source and its gradient.
pub fn rhs_toy_nonhomogeneous<T: Real>(
    q: &[T],
    dq: &[[T; 3]],
    p: &ToyParams<T>,
    src: &ToySourceValue<T>,
    out: &mut [T],
) -> Result<(), RhsError> {
    let v = rhs_toy_common(q, dq, p, out)?;
    let (_, dv) = velocity(q, dq)?;
    for k in 0..3 {
        out[J + k] += src.s[k];
    }
    let bv = [q[B], q[B + 1], q[B + 2]];
    let div_b = div_of(dq, B, 1);
    let div_v = dv[0][0] + dv[1][1] + dv[2][2];
    let curl_s = crate::scalar::curl(&src.grad);
    for i in 0..3 {
        // d_k (B_i v_k - v_i B_k - eps_ikj S_j) + v_i d_k B_k
        let mut flux = bv[i] * div_v - v[i] * div_b;
        for k in 0..3 {
            flux += dq[B + i][k] * v[k] - dv[k][i] * bv[k];
        }
        flux -= curl_s[i];
        out[B + i] = -flux - v[i] * div_b;
    }
    if p.glm_enabled {
        let a_c2 = p.a_c * p.a_c;
        for k in 0..3 {
            out[PSI + k] -= a_c2 * bv[k];
            out[B + k] -= dq[CHI][k];
        }
        out[CHI] = -p.a_b * p.a_b * div_b - p.eps_b * q[CHI];
    } else {
        out[CHI] = T::zero();
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct ToySystem<T> {
    pub params: ToyParams<T>,
    nonhomogeneous: bool,
    descriptor: SystemDescriptor,
}

impl<T: Real> ToySystem<T> {
    pub fn homogeneous(params: ToyParams<T>) -> Self {
        Self {
            params,
            nonhomogeneous: false,
            descriptor: layout_for(SystemKind::ToyHomogeneous),
        }
    }

    pub fn nonhomogeneous(params: ToyParams<T>) -> Self {
        Self {
            params,
            nonhomogeneous: true,
            descriptor: layout_for(SystemKind::ToyNonhomogeneous),
        }
    }

    fn is_cleaning(&self, c: usize) -> bool {
        (PSI..=PHI).contains(&c) || c == CHI
    }
}

impl<T: Real> System<T> for ToySystem<T> {
    fn descriptor(&self) -> &SystemDescriptor {
        &self.descriptor
    }

    fn needs_gradient(&self, c: usize) -> bool {
        !(self.is_cleaning(c) && !self.params.glm_enabled)
    }

    fn is_frozen(&self, c: usize) -> bool {
        self.is_cleaning(c) && !self.params.glm_enabled
    }

    fn rhs(&self, x: &Vec3<T>, q: &[T], dq: &[[T; 3]], out: &mut [T]) -> Result<(), RhsError> {
        if self.nonhomogeneous {
            let src = self.params.source.evaluate(x, q, dq);
            rhs_toy_nonhomogeneous(q, dq, &self.params, &src, out)
        } else {
            rhs_toy_homogeneous(q, dq, &self.params, out)
        }
    }

    /// `|v| + 2 |c0| |J|`, raised to the cleaning speeds when cleaning is on.
    fn max_signal_speed(&self, _x: &Vec3<T>, q: &[T]) -> T {
        let rho = q[RHO];
        let v2 =
            (q[MOM] * q[MOM] + q[MOM + 1] * q[MOM + 1] + q[MOM + 2] * q[MOM + 2]) / (rho * rho);
        let j2 = q[J] * q[J] + q[J + 1] * q[J + 1] + q[J + 2] * q[J + 2];
        let mut s = v2.sqrt() + T::lit(2.0) * self.params.c0.abs() * j2.sqrt();
        if self.params.glm_enabled {
            s = s.max(self.params.a_c).max(self.params.a_d);
            if self.nonhomogeneous {
                s = s.max(self.params.a_b);
            }
        }
        s
    }

    fn monitor_families(&self) -> Vec<MonitorFamily> {
        if self.nonhomogeneous {
            vec![
                MonitorFamily::new("curlJ_minus_B", 3),
                MonitorFamily::new("divB", 1),
                MonitorFamily::new("divpsi", 1),
            ]
        } else {
            vec![
                MonitorFamily::new("curlJ", 3),
                MonitorFamily::new("divpsi", 1),
            ]
        }
    }

    fn monitor(&self, _x: &Vec3<T>, q: &[T], dq: &[[T; 3]], out: &mut [T]) {
        let curl_j = curl_of(dq, J, 1);
        if self.nonhomogeneous {
            for k in 0..3 {
                out[k] = curl_j[k] - q[B + k];
            }
            out[3] = div_of(dq, B, 1);
            out[4] = div_of(dq, PSI, 1);
        } else {
            out[..3].copy_from_slice(&curl_j);
            out[3] = div_of(dq, PSI, 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_state_is_stationary() {
        let mut q = [0.0; 11];
        q[RHO] = 1.0;
        q[J..J + 3].copy_from_slice(&[0.2, -0.1, 0.4]);
        let dq = [[0.0; 3]; 11];
        let mut out = [1.0; 11];
        rhs_toy_homogeneous(&q, &dq, &ToyParams::default(), &mut out).unwrap();
        assert_eq!(out, [0.0; 11]);
    }

    #[test]
    fn cleaning_scalar_responds_to_divergence() {
        let mut q = [0.0; 11];
        q[RHO] = 1.0;
        q[PHI] = 3.0;
        let mut dq = [[0.0; 3]; 11];
        dq[PSI + 2][2] = 1.0;
        let p = ToyParams {
            a_d: 2.0,
            eps_d: 1.0,
            ..ToyParams::default()
        };
        let mut out = [0.0; 11];
        rhs_toy_homogeneous(&q, &dq, &p, &mut out).unwrap();
        assert_eq!(out[PHI], -7.0);
    }

    #[test]
    fn burgers_vector_feeds_curl_cleaning() {
        let mut q = [0.0; 15];
        q[RHO] = 1.0;
        q[B..B + 3].copy_from_slice(&[1.0, -2.0, 0.5]);
        let dq = [[0.0; 3]; 15];
        let p = ToyParams {
            a_c: 1.5,
            ..ToyParams::default()
        };
        let mut out = [0.0; 15];
        rhs_toy_nonhomogeneous(&q, &dq, &p, &ToySourceValue::default(), &mut out).unwrap();
        for k in 0..3 {
            assert_eq!(out[PSI + k], -2.25 * q[B + k]);
        }
    }

    #[test]
    fn nonpositive_density_rejected() {
        let q = [0.0; 11];
        let dq = [[0.0; 3]; 11];
        let mut out = [0.0; 11];
        assert!(rhs_toy_homogeneous(&q, &dq, &ToyParams::default(), &mut out).is_err());
    }
}
