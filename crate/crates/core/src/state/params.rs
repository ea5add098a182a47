use std::fmt;
use std::sync::Arc;

use crate::error::StateError;
use crate::scalar::{Mat3, Real, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slicing {
    /// `g(alpha) = 1`
    Harmonic,
    /// `g(alpha) = 2 / alpha`
    OnePlusLog,
}

impl Slicing {
    pub fn name(self) -> &'static str {
        match self {
            Slicing::Harmonic => "harmonic",
            Slicing::OnePlusLog => "one_plus_log",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "harmonic" => Some(Slicing::Harmonic),
            "one_plus_log" | "1+log" => Some(Slicing::OnePlusLog),
            _ => None,
        }
    }
}

/// Curl-cleaning speed `a_c`, divergence-cleaning speed `a_d` and the matching
/// damping rates for one family of auxiliary variables.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Cleaning<T> {
    pub a_c: T,
    pub a_d: T,
    pub eps_c: T,
    pub eps_d: T,
}

impl<T: Real> Cleaning<T> {
    pub fn new(a_c: T, a_d: T, eps_c: T, eps_d: T) -> Self {
        Self {
            a_c,
            a_d,
            eps_c,
            eps_d,
        }
    }

    pub fn off() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    fn validate(&self, family: &str) -> Result<(), StateError> {
        for (name, v) in [
            ("a_c", self.a_c),
            ("a_d", self.a_d),
            ("eps_c", self.eps_c),
            ("eps_d", self.eps_d),
        ] {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(StateError::InvalidParameter(format!(
                    "{name}_{family} = {v} must be finite and nonnegative"
                )));
            }
        }
        Ok(())
    }
}

/// Cleaning records for the `A_k`, `B_k^i`, `D_kij` and `P_k` families.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct CleaningSet<T> {
    pub a: Cleaning<T>,
    pub b: Cleaning<T>,
    pub d: Cleaning<T>,
    pub p: Cleaning<T>,
}

impl<T: Real> CleaningSet<T> {
    pub fn uniform(c: Cleaning<T>) -> Self {
        Self {
            a: c,
            b: c,
            d: c,
            p: c,
        }
    }

    pub fn families(&self) -> [(&'static str, &Cleaning<T>); 4] {
        [
            ("A", &self.a),
            ("B", &self.b),
            ("D", &self.d),
            ("P", &self.p),
        ]
    }
}

/// Gauge, damping and cleaning parameters of augmented FO-CCZ4.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ccz4Params<T> {
    pub slicing: Slicing,
    /// Shift evolution toggle (`s = 1` when true).
    pub shift: bool,
    pub f: T,
    pub mu: T,
    pub eta: T,
    /// Coupling of `Theta` into the lapse and curvature sources.
    pub c: T,
    /// Z4 cleaning speed.
    pub e: T,
    pub kappa1: T,
    pub kappa2: T,
    pub kappa3: T,
    pub glm_enabled: bool,
    pub cleaning: CleaningSet<T>,
}

impl<T: Real> Default for Ccz4Params<T> {
    /// Vacuum defaults: harmonic slicing, frozen shift, gamma-driver
    /// `f = 0.75`, `mu = 0.2`, no damping, `e = 1`, `c = 0`, GLM off.
    fn default() -> Self {
        Self {
            slicing: Slicing::Harmonic,
            shift: false,
            f: T::lit(0.75),
            mu: T::lit(0.2),
            eta: T::zero(),
            c: T::zero(),
            e: T::one(),
            kappa1: T::zero(),
            kappa2: T::zero(),
            kappa3: T::zero(),
            glm_enabled: false,
            cleaning: CleaningSet::default(),
        }
    }
}

impl<T: Real> Ccz4Params<T> {
    /// Parameters of the perturbed-Minkowski robust stability benchmark:
    /// harmonic lapse, frozen shift, `e = 2`, `a_c = 1.5`, `a_d = 2`, all
    /// cleaning damping 1, `kappa_i = c = eta = 0`.
    pub fn robust_stability() -> Self {
        Self {
            e: T::lit(2.0),
            glm_enabled: true,
            cleaning: CleaningSet::uniform(Cleaning::new(
                T::lit(1.5),
                T::lit(2.0),
                T::one(),
                T::one(),
            )),
            ..Self::default()
        }
    }

    /// Rotating-masses wavefield run with cleaning: `e = 2`, every cleaning
    /// speed 1.5, every damping rate 1, `c = kappa_i = 0`.
    pub fn rotating_masses_glm() -> Self {
        Self {
            e: T::lit(2.0),
            glm_enabled: true,
            cleaning: CleaningSet::uniform(Cleaning::new(
                T::lit(1.5),
                T::lit(1.5),
                T::one(),
                T::one(),
            )),
            ..Self::default()
        }
    }

    /// Standard FO-CCZ4 without curl cleaning: `e = 1`, `c = 1`, `kappa_i = 0`.
    pub fn standard_no_glm() -> Self {
        Self {
            e: T::one(),
            c: T::one(),
            ..Self::default()
        }
    }

    /// Static neutron-star settings: 1+log slicing, `e = 1.2`, all cleaning
    /// speeds 0.1, damping 5, `kappa1 = 0.03`.
    pub fn static_star() -> Self {
        Self {
            slicing: Slicing::OnePlusLog,
            e: T::lit(1.2),
            kappa1: T::lit(0.03),
            glm_enabled: true,
            cleaning: CleaningSet::uniform(Cleaning::new(
                T::lit(0.1),
                T::lit(0.1),
                T::lit(5.0),
                T::lit(5.0),
            )),
            ..Self::default()
        }
    }

    /// `s` as a number.
    #[inline]
    pub fn s(&self) -> T {
        if self.shift {
            T::one()
        } else {
            T::zero()
        }
    }

    pub fn validate(&self) -> Result<(), StateError> {
        for (name, v) in [
            ("f", self.f),
            ("mu", self.mu),
            ("eta", self.eta),
            ("c", self.c),
            ("e", self.e),
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
            ("kappa3", self.kappa3),
        ] {
            if !v.is_finite() {
                return Err(StateError::InvalidParameter(format!(
                    "{name} = {v} is not finite"
                )));
            }
        }
        if self.e < T::zero() {
            return Err(StateError::InvalidParameter("e must be nonnegative".into()));
        }
        for (family, c) in self.cleaning.families() {
            c.validate(family)?;
        }
        Ok(())
    }
}

/// Source `S_k` of the `J_k` equation together with its gradient
/// `grad[l][k] = d_l S_k` (the Burgers-vector flux needs it).
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ToySourceValue<T> {
    pub s: Vec3<T>,
    pub grad: Mat3<T>,
}

pub type CustomToySource<T> =
    Arc<dyn Fn(&[T; 3], &[T], &[[T; 3]]) -> ToySourceValue<T> + Send + Sync>;

#[derive(Clone)]
pub enum ToySource<T> {
    None,
    /// `S_k = -J_k / tau`.
    LinearRelaxation {
        tau: T,
    },
    /// Called with the point position, the state and its gradients.
    Custom(CustomToySource<T>),
}

impl<T: Real> ToySource<T> {
    pub fn evaluate(&self, x: &[T; 3], q: &[T], dq: &[[T; 3]]) -> ToySourceValue<T> {
        use crate::state::layout::toy::J;
        match self {
            ToySource::None => ToySourceValue::default(),
            ToySource::LinearRelaxation { tau } => {
                let mut v = ToySourceValue::default();
                let rate = -T::one() / *tau;
                for k in 0..3 {
                    v.s[k] = rate * q[J + k];
                    for l in 0..3 {
                        v.grad[l][k] = rate * dq[J + k][l];
                    }
                }
                v
            }
            ToySource::Custom(f) => f(x, q, dq),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for ToySource<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ToySource::None => f.write_str("None"),
            ToySource::LinearRelaxation { tau } => f
                .debug_struct("LinearRelaxation")
                .field("tau", tau)
                .finish(),
            ToySource::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Parameters of the curl-constrained toy system.
#[derive(Clone, Debug)]
pub struct ToyParams<T> {
    /// Coupling of `J` into the momentum flux. Linearized about any nonzero
    /// `J`, the `(rho, J)` sector has one imaginary frequency for wave
    /// vectors not parallel to `J` unless `c0 = 0`, hence the default.
    pub c0: T,
    pub a_c: T,
    pub a_d: T,
    pub a_b: T,
    pub eps_c: T,
    pub eps_d: T,
    pub eps_b: T,
    pub glm_enabled: bool,
    pub source: ToySource<T>,
}

impl<T: Real> Default for ToyParams<T> {
    fn default() -> Self {
        Self {
            c0: T::zero(),
            a_c: T::lit(1.5),
            a_d: T::lit(2.0),
            a_b: T::lit(2.0),
            eps_c: T::one(),
            eps_d: T::one(),
            eps_b: T::one(),
            glm_enabled: true,
            source: ToySource::None,
        }
    }
}

impl<T: Real> ToyParams<T> {
    pub fn validate(&self) -> Result<(), StateError> {
        for (name, v) in [
            ("a_c", self.a_c),
            ("a_d", self.a_d),
            ("a_b", self.a_b),
            ("eps_c", self.eps_c),
            ("eps_d", self.eps_d),
            ("eps_b", self.eps_b),
        ] {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(StateError::InvalidParameter(format!(
                    "{name} = {v} must be finite and nonnegative"
                )));
            }
        }
        if !self.c0.is_finite() {
            return Err(StateError::InvalidParameter("c0 is not finite".into()));
        }
        if let ToySource::LinearRelaxation { tau } = self.source {
            if !(tau > T::zero()) {
                return Err(StateError::InvalidParameter(
                    "relaxation time must be positive".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Parameters of the GLM induction baseline. `c_light` closes the system through
/// `d_t E = c^2 curl B`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InductionParams<T> {
    pub c_light: T,
    pub a_d: T,
    pub eps_d: T,
    pub glm_enabled: bool,
}

impl<T: Real> Default for InductionParams<T> {
    fn default() -> Self {
        Self {
            c_light: T::one(),
            a_d: T::lit(1.5),
            eps_d: T::zero(),
            glm_enabled: true,
        }
    }
}

impl<T: Real> InductionParams<T> {
    pub fn validate(&self) -> Result<(), StateError> {
        for (name, v) in [
            ("c_light", self.c_light),
            ("a_d", self.a_d),
            ("eps_d", self.eps_d),
        ] {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(StateError::InvalidParameter(format!(
                    "{name} = {v} must be finite and nonnegative"
                )));
            }
        }
        Ok(())
    }
}
