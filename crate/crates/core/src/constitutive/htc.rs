//! Hygro-thermo-chemical model of curing concrete: hydration kinetics,
//! sorption isotherm, moisture permeability and reaction sources.

/// HTC material constants.
#[derive(Debug, Clone, Copy, PartialEq, serde::Deserialize, serde::Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct HtcParams {
    /// Density ρ (kg/m³).
    pub rho: f64,
    /// Specific heat c_t (J/kg/K).
    pub c_t: f64,
    /// Heat conductivity κ (W/m/K).
    pub kappa: f64,
    /// Cement content c (kg/m³).
    pub c: f64,
    /// Silica fume content s (kg/m³).
    pub s: f64,
    /// Latent heat of hydration (J/kg).
    pub q_c_inf: f64,
    /// Latent heat of the pozzolanic reaction (J/kg).
    pub q_s_inf: f64,
    pub e_ac_r: f64,
    pub a_c1: f64,
    pub a_c2: f64,
    pub alpha_c_inf: f64,
    pub eta_c: f64,
    pub a: f64,
    pub b: f64,
    pub e_as_r: f64,
    pub a_s1: f64,
    pub a_s2: f64,
    pub alpha_s_inf: f64,
    pub eta_s: f64,
    pub k_vg_c: f64,
    pub k_vg_s: f64,
    /// w₀ (kg/m³).
    pub w0: f64,
    pub g1: f64,
    pub kappa_c: f64,
    /// D₀, D₁ (kg/m/s).
    pub d0: f64,
    pub d1: f64,
    pub n: f64,
    pub e_ad_r: f64,
    /// Reference temperature T₀ (K).
    pub t0: f64,
}

impl Default for HtcParams {
    fn default() -> Self {
        HtcParams {
            rho: 2400.0,
            c_t: 1100.0,
            kappa: 2.5,
            c: 260.0,
            s: 0.0,
            q_c_inf: 5.2e5,
            q_s_inf: 7.8e5,
            e_ac_r: 5490.0,
            a_c1: 5.56e4,
            a_c2: 1e-6,
            alpha_c_inf: 0.695,
            eta_c: 6.5,
            a: 5.5,
            b: 4.0,
            e_as_r: 9620.0,
            a_s1: 1.39e10,
            a_s2: 1e-6,
            alpha_s_inf: 0.0,
            eta_s: 9.5,
            k_vg_c: 0.2,
            k_vg_s: 0.36,
            w0: 104.0,
            g1: 1.5,
            kappa_c: 0.253,
            d0: 6.0e-10,
            d1: 7.0e-8,
            n: 3.0,
            e_ad_r: 2700.0,
            t0: 293.15,
        }
    }
}

impl HtcParams {
    /// Volumetric heat capacity ρ c_t (J/m³/K).
    pub fn heat_capacity(&self) -> f64 {
        self.rho * self.c_t
    }

    /// Temperature rise of a sealed, adiabatic specimen after full hydration.
    pub fn adiabatic_rise(&self) -> f64 {
        (self.alpha_c_inf * self.c * self.q_c_inf + self.alpha_s_inf * self.s * self.q_s_inf)
            / self.heat_capacity()
    }
}

/// Reaction degrees at one material point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HtcState {
    pub alpha_c: f64,
    pub alpha_s: f64,
}

impl HtcState {
    /// Explicit update α + Δt α̇, clamped to `[α, α∞]`.
    pub fn advanced(&self, rates: &HydrationRates, dt: f64, params: &HtcParams) -> HtcState {
        HtcState {
            alpha_c: (self.alpha_c + dt * rates.c).clamp(self.alpha_c, params.alpha_c_inf.max(self.alpha_c)),
            alpha_s: (self.alpha_s + dt * rates.s).clamp(self.alpha_s, params.alpha_s_inf.max(self.alpha_s)),
        }
    }
}

/// Reaction rates (1/s) and their sensitivities to H and T.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HydrationRates {
    pub c: f64,
    pub s: f64,
    pub c_dh: f64,
    pub c_dt: f64,
    pub s_dt: f64,
}

fn affinity(a1: f64, a2: f64, inf: f64, eta: f64, alpha: f64) -> f64 {
    if inf <= 0.0 || alpha >= inf {
        return 0.0;
    }
    a1 * (a2 / inf + alpha) * (inf - alpha) * (-eta * alpha / inf).exp()
}

/// α̇_c = A_c(α_c) β_H(H) e^{−E_ac/(RT)}, α̇_s = A_s(α_s) e^{−E_as/(RT)}.
pub fn htc_rates(h: f64, t: f64, state: &HtcState, p: &HtcParams) -> HydrationRates {
    let ac = affinity(p.a_c1, p.a_c2, p.alpha_c_inf, p.eta_c, state.alpha_c);
    let base = (p.a - p.a * h).max(0.0);
    let beta = 1.0 / (1.0 + base.powf(p.b));
    let dbeta = if base > 0.0 {
        beta * beta * p.a * p.b * base.powf(p.b - 1.0)
    } else {
        0.0
    };
    let arr_c = (-p.e_ac_r / t).exp();
    let c = ac * beta * arr_c;
    let as_ = affinity(p.a_s1, p.a_s2, p.alpha_s_inf, p.eta_s, state.alpha_s);
    let s = as_ * (-p.e_as_r / t).exp();
    HydrationRates {
        c,
        s,
        c_dh: ac * dbeta * arr_c,
        c_dt: c * p.e_ac_r / (t * t),
        s_dt: s * p.e_as_r / (t * t),
    }
}

/// Evaporable water content and its first and second partial derivatives.
/// Subscripts: `h` = H, `c` = α_c, `s` = α_s; w is linear in α_s.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sorption {
    pub we: f64,
    pub h: f64,
    pub c: f64,
    pub s: f64,
    pub hh: f64,
    pub hc: f64,
    pub hs: f64,
    pub cc: f64,
    pub cs: f64,
}

/// Sorption isotherm w_e(H, α_c, α_s).
pub fn htc_sorption_we(h: f64, state: &HtcState, p: &HtcParams) -> Sorption {
    let (ac, as_) = (state.alpha_c, state.alpha_s);
    let e = 10.0 * (p.g1 * p.alpha_c_inf - ac);
    let de = -10.0;
    let x = e * h;
    let dx = de * h;
    let (u, v) = (x.exp(), (-x).exp());
    let em = (-e).exp();

    let g = p.k_vg_c * ac * p.c + p.k_vg_s * as_ * p.s;
    let gc = p.k_vg_c * p.c;
    let gs = p.k_vg_s * p.s;

    let n = p.w0 - 0.188 * ac * p.c + 0.22 * as_ * p.s - g * (1.0 - em);
    let nc = -0.188 * p.c - gc * (1.0 - em) - g * em * de;
    let ncc = -2.0 * gc * em * de + g * em * de * de;
    let d = e.exp() - 1.0;
    let dc = e.exp() * de;
    let dcc = e.exp() * de * de;
    let k = n / d;
    let kc = (nc * d - n * dc) / (d * d);
    let kcc = ncc / d - 2.0 * nc * dc / (d * d) - n * dcc / (d * d) + 2.0 * n * dc * dc / (d * d * d);

    let ns = 0.22 * p.s - gs * (1.0 - em);
    let ks = ns / d;
    let ksc = -gs * em * de / d - ns * dc / (d * d);

    Sorption {
        we: g * (1.0 - v) + k * (u - 1.0),
        h: e * (g * v + k * u),
        c: gc * (1.0 - v) + g * v * dx + kc * (u - 1.0) + k * u * dx,
        s: gs * (1.0 - v) + ks * (u - 1.0),
        hh: e * e * (-g * v + k * u),
        hc: de * (g * v + k * u) + e * (gc * v - g * v * dx + kc * u + k * u * dx),
        hs: e * (gs * v + ks * u),
        cc: 2.0 * gc * v * dx - g * v * dx * dx + kcc * (u - 1.0) + 2.0 * kc * u * dx + k * u * dx * dx,
        cs: gs * v * dx + ksc * (u - 1.0) + ks * u * dx,
    }
}

/// Moisture permeability D_H and its derivatives `(D, ∂D/∂H, ∂D/∂T)`.
pub fn htc_moisture_permeability(h: f64, t: f64, p: &HtcParams) -> (f64, f64, f64) {
    let psi = (p.e_ad_r / p.t0 - p.e_ad_r / t).exp();
    let one_minus = (1.0 - h).max(0.0);
    let ratio = p.d1 / p.d0 - 1.0;
    let den = 1.0 + ratio * one_minus.powf(p.n);
    let dden = if one_minus > 0.0 {
        -ratio * p.n * one_minus.powf(p.n - 1.0)
    } else {
        0.0
    };
    let d = psi * p.d1 / den;
    (d, -d * dden / den, d * p.e_ad_r / (t * t))
}

/// Moisture sink q_H (kg/m³/s) and heat source q_T (W/m³).
pub fn htc_sources(
    sorption: &Sorption,
    rates: &HydrationRates,
    p: &HtcParams,
) -> (f64, f64) {
    let q_h = (sorption.c + p.kappa_c * p.c) * rates.c + sorption.s * rates.s;
    let q_t = rates.c * p.c * p.q_c_inf + rates.s * p.s * p.q_s_inf;
    (q_h, q_t)
}

/// Material response at one point for a trial (H, T) at the end of a step.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LocalHtc {
    /// Reaction degrees at the end of the step.
    pub state: HtcState,
    /// C_H = ∂w_e/∂H and its total derivatives.
    pub capacity: f64,
    pub capacity_dh: f64,
    pub capacity_dt: f64,
    pub q_h: f64,
    pub q_h_dh: f64,
    pub q_h_dt: f64,
    pub q_t: f64,
    pub q_t_dh: f64,
    pub q_t_dt: f64,
}

/// Advances α explicitly from `previous` with rates at (H, T), then evaluates
/// capacity and sources with the step-averaged rates Δα/Δt so that released
/// heat equals c Q̃ Δα exactly. Without `dt` the reactions are frozen.
pub fn htc_local(h: f64, t: f64, previous: &HtcState, dt: Option<f64>, p: &HtcParams) -> LocalHtc {
    let Some(dt) = dt else {
        let w = htc_sorption_we(h, previous, p);
        return LocalHtc {
            state: *previous,
            capacity: w.h,
            capacity_dh: w.hh,
            ..Default::default()
        };
    };
    let r = htc_rates(h, t, previous, p);
    let state = previous.advanced(&r, dt, p);
    let free_c = state.alpha_c > previous.alpha_c && state.alpha_c < p.alpha_c_inf;
    let free_s = state.alpha_s > previous.alpha_s && state.alpha_s < p.alpha_s_inf;
    let rc = (state.alpha_c - previous.alpha_c) / dt;
    let rs = (state.alpha_s - previous.alpha_s) / dt;
    let (rc_h, rc_t) = if free_c { (r.c_dh, r.c_dt) } else { (0.0, 0.0) };
    let rs_t = if free_s { r.s_dt } else { 0.0 };
    // dα/dH = Δt ∂α̇/∂H etc.
    let (ac_h, ac_t, as_t) = (dt * rc_h, dt * rc_t, dt * rs_t);

    let w = htc_sorption_we(h, &state, p);
    let wc_total = w.c + p.kappa_c * p.c;
    let q_h = wc_total * rc + w.s * rs;
    let q_h_dh = (w.hc + w.cc * ac_h) * rc + wc_total * rc_h + (w.hs + w.cs * ac_h) * rs;
    let q_h_dt = (w.cc * ac_t + w.cs * as_t) * rc + wc_total * rc_t + w.cs * ac_t * rs + w.s * rs_t;
    let qc = p.c * p.q_c_inf;
    let qs = p.s * p.q_s_inf;
    LocalHtc {
        state,
        capacity: w.h,
        capacity_dh: w.hh + w.hc * ac_h,
        capacity_dt: w.hc * ac_t + w.hs * as_t,
        q_h,
        q_h_dh,
        q_h_dt,
        q_t: rc * qc + rs * qs,
        q_t_dh: rc_h * qc,
        q_t_dt: rc_t * qc + rs_t * qs,
    }
}
