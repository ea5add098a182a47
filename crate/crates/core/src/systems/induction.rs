//! Maxwell-type baseline: GLM-augmented induction equation closed by
//! `d_t E = c^2 curl B`.

use crate::error::RhsError;
use crate::scalar::{Real, Vec3};
use crate::state::layout::induction::{B, E, PHI};
use crate::state::{layout_for, InductionParams, SystemDescriptor, SystemKind};

use super::{curl_of, div_of, MonitorFamily, System};

pub fn rhs_induction_glm<T: Real>(q: &[T], dq: &[[T; 3]], p: &InductionParams<T>, out: &mut [T]) {
    let c2 = p.c_light * p.c_light;
    let curl_b = curl_of(dq, B, 1);
    let curl_e = curl_of(dq, E, 1);
    for k in 0..3 {
        out[E + k] = c2 * curl_b[k];
        out[B + k] = -curl_e[k];
    }
    if p.glm_enabled {
        for k in 0..3 {
            out[B + k] -= dq[PHI][k];
        }
        out[PHI] = -p.a_d * p.a_d * div_of(dq, B, 1) - p.eps_d * q[PHI];
    } else {
        out[PHI] = T::zero();
    }
}

#[derive(Clone, Debug)]
pub struct InductionSystem<T> {
    pub params: InductionParams<T>,
    descriptor: SystemDescriptor,
}

impl<T: Real> InductionSystem<T> {
    pub fn new(params: InductionParams<T>) -> Self {
        Self {
            params,
            descriptor: layout_for(SystemKind::InductionGlm),
        }
    }
}

impl<T: Real> System<T> for InductionSystem<T> {
    fn descriptor(&self) -> &SystemDescriptor {
        &self.descriptor
    }

    fn needs_gradient(&self, c: usize) -> bool {
        c != PHI || self.params.glm_enabled
    }

    fn is_frozen(&self, c: usize) -> bool {
        c == PHI && !self.params.glm_enabled
    }

    fn rhs(&self, _x: &Vec3<T>, q: &[T], dq: &[[T; 3]], out: &mut [T]) -> Result<(), RhsError> {
        rhs_induction_glm(q, dq, &self.params, out);
        Ok(())
    }

    fn max_signal_speed(&self, _x: &Vec3<T>, _q: &[T]) -> T {
        if self.params.glm_enabled {
            self.params.c_light.max(self.params.a_d)
        } else {
            self.params.c_light
        }
    }

    fn monitor_families(&self) -> Vec<MonitorFamily> {
        vec![MonitorFamily::new("divB", 1)]
    }

    fn monitor(&self, _x: &Vec3<T>, _q: &[T], dq: &[[T; 3]], out: &mut [T]) {
        out[0] = div_of(dq, B, 1);
    }
}
