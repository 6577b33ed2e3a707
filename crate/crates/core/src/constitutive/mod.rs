//! Constitutive laws: permeability with a multiplicative nonlinearity,
//! capacity/source terms, per-element randomization, and the HTC material.

pub mod htc;

use std::sync::Once;

use crate::error::{Error, Result};
use crate::geometry::DualNetwork;
use crate::numerics::RandomStream;

pub use htc::{
    htc_local, htc_moisture_permeability, htc_rates, htc_sorption_we, htc_sources, HtcParams, HtcState,
    LocalHtc,
    HydrationRates, Sorption,
};

/// Water density (kg/m³).
pub const RHO_WATER: f64 = 1000.0;

static NEGATIVE_PRESSURE: Once = Once::new();

fn clamp_pressure(p: f64) -> f64 {
    if p < 0.0 {
        NEGATIVE_PRESSURE.call_once(|| {
            log::warn!("negative pressure {p:e} Pa clamped to 0 in van Genuchten law");
        });
        0.0
    } else {
        p
    }
}

/// Saturation z = (1 + (p/α)^{1/(1−m)})^{−m}.
pub fn saturation(p: f64, m: f64, alpha: f64) -> f64 {
    let p = clamp_pressure(p);
    (1.0 + (p / alpha).powf(1.0 / (1.0 - m))).powf(-m)
}

/// dz/dp.
pub fn saturation_derivative(p: f64, m: f64, alpha: f64) -> f64 {
    let p = clamp_pressure(p);
    let r = 1.0 / (1.0 - m);
    let u = (p / alpha).powf(r);
    let du = if p == 0.0 && r > 1.0 {
        0.0
    } else {
        r * (p / alpha).powf(r - 1.0) / alpha
    };
    -m * (1.0 + u).powf(-m - 1.0) * du
}

/// Relative permeability κ_r = √z [1 − (1 − z^{1/m})²]².
pub fn kappa_r(z: f64, m: f64) -> f64 {
    let w = z.powf(1.0 / m);
    let b = 1.0 - (1.0 - w) * (1.0 - w);
    z.sqrt() * b * b
}

/// dκ_r/dz.
pub fn kappa_r_derivative(z: f64, m: f64) -> f64 {
    let w = z.powf(1.0 / m);
    let b = 1.0 - (1.0 - w) * (1.0 - w);
    let dw = w / (m * z);
    let db = 2.0 * (1.0 - w) * dw;
    0.5 * b * b / z.sqrt() + z.sqrt() * 2.0 * b * db
}

/// Nonlinear factor applied to λ₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelativeLaw {
    Linear,
    VanGenuchten { m: f64, alpha: f64 },
}

/// λ(p) = λ₀ κ_r(p).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermeabilityModel {
    pub lambda0: f64,
    pub law: RelativeLaw,
}

impl PermeabilityModel {
    pub fn linear(lambda0: f64) -> Self {
        PermeabilityModel {
            lambda0,
            law: RelativeLaw::Linear,
        }
    }

    /// λ₀ = ρ_w κ₀ / μ with the van Genuchten relative law.
    pub fn van_genuchten(m: f64, alpha: f64, mu: f64, kappa0: f64, rho_w: f64) -> Result<Self> {
        if !(m > 0.0 && m < 1.0) {
            return Err(Error::InvalidParameter(format!("need 0 < m < 1, got {m}")));
        }
        if !(alpha > 0.0 && mu > 0.0 && kappa0 > 0.0 && rho_w > 0.0) {
            return Err(Error::InvalidParameter(
                "alpha, mu, kappa0 and rho_w must be positive".into(),
            ));
        }
        Ok(PermeabilityModel {
            lambda0: rho_w * kappa0 / mu,
            law: RelativeLaw::VanGenuchten { m, alpha },
        })
    }

    /// Concrete parameters used throughout the verification examples.
    pub fn concrete() -> Self {
        Self::van_genuchten(0.5, 1e6, 8.9e-4, 5e-18, RHO_WATER).expect("valid defaults")
    }

    pub fn is_linear(&self) -> bool {
        self.law == RelativeLaw::Linear
    }

    /// κ_r(p).
    pub fn relative(&self, p: f64) -> f64 {
        match self.law {
            RelativeLaw::Linear => 1.0,
            RelativeLaw::VanGenuchten { m, alpha } => kappa_r(saturation(p, m, alpha), m),
        }
    }

    /// dκ_r/dp.
    pub fn relative_derivative(&self, p: f64) -> f64 {
        match self.law {
            RelativeLaw::Linear => 0.0,
            RelativeLaw::VanGenuchten { m, alpha } => {
                if p < 0.0 {
                    return 0.0;
                }
                let z = saturation(p, m, alpha);
                kappa_r_derivative(z, m) * saturation_derivative(p, m, alpha)
            }
        }
    }

    /// λ(p) for an element with intrinsic coefficient `lambda0`.
    pub fn lambda(&self, lambda0: f64, p: f64) -> f64 {
        lambda0 * self.relative(p)
    }
}

/// Storage capacity c (s²/m²) and source density q (kg/m³/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacitySource {
    pub capacity: f64,
    pub source: f64,
}

impl CapacitySource {
    pub fn concrete() -> Self {
        CapacitySource {
            capacity: 1.64e-5,
            source: 0.0,
        }
    }

    pub fn capacity(&self, _p: f64) -> f64 {
        self.capacity
    }

    pub fn source(&self, _p: f64) -> f64 {
        self.source
    }
}

/// Draws independent lognormal λ₀ per element (element order) with the given
/// mean and coefficient of variation.
pub fn randomize_lambda0(network: &mut DualNetwork, mean: f64, cov: f64, stream: &mut RandomStream) -> Result<()> {
    if !(mean > 0.0) || !(cov >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lognormal needs mean > 0 and cov >= 0 (mean = {mean}, cov = {cov})"
        )));
    }
    for e in &mut network.elements {
        e.lambda0 = stream.lognormal(mean, cov);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturation_examples() {
        assert_eq!(saturation(0.0, 0.5, 1e6), 1.0);
        assert!((saturation(1e6, 0.5, 1e6) - 0.5f64.sqrt()).abs() < 1e-15);
        let mut last = 1.0;
        for k in 1..200 {
            let z = saturation(k as f64 * 1e5, 0.5, 1e6);
            assert!(z < last);
            last = z;
        }
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa_r(1.0, 0.5), 1.0);
        let z = 0.5f64.sqrt();
        // sqrt(z) = 2^-1/4, z^2 = 1/2, [1 - 1/4]^2 = 9/16
        assert!((kappa_r(z, 0.5) - 2f64.powf(-0.25) * 0.5625).abs() < 1e-15);
        assert!((kappa_r(z, 0.5) - 0.473004).abs() < 1e-6);
    }

    #[test]
    fn kappa_monotone_on_dense_grid() {
        let mut last = 0.0;
        for k in 1..=10_000 {
            let v = kappa_r(k as f64 / 10_000.0, 0.5);
            assert!(v > last && v <= 1.0);
            last = v;
        }
    }

    #[test]
    fn derivatives_match_central_differences() {
        let model = PermeabilityModel::concrete();
        for p in [1e4, 2e5, 7e5, 1e6, 3e6] {
            let h = 1e-5 * p;
            let fd = (model.relative(p + h) - model.relative(p - h)) / (2.0 * h);
            let an = model.relative_derivative(p);
            assert!((fd - an).abs() <= 1e-6 * an.abs(), "p={p}: {fd} vs {an}");
        }
        assert_eq!(model.relative_derivative(0.0), 0.0);
    }

    #[test]
    fn lambda0_from_physical_parameters() {
        let model = PermeabilityModel::concrete();
        assert!((model.lambda0 - 1000.0 * 5e-18 / 8.9e-4).abs() < 1e-27);
        assert!((model.lambda0 - 5.618e-12).abs() < 1e-15);
        assert_eq!(model.lambda(model.lambda0, 1e6), model.lambda0 * model.relative(1e6));
    }

    #[test]
    fn negative_pressure_is_clamped() {
        assert_eq!(saturation(-5.0, 0.5, 1e6), 1.0);
        assert_eq!(PermeabilityModel::concrete().relative(-1.0), 1.0);
    }

    #[test]
    fn invalid_m_rejected() {
        assert!(PermeabilityModel::van_genuchten(1.0, 1e6, 1e-3, 1e-18, 1e3).is_err());
    }
}
