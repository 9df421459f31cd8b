//! Canonical thermodynamics from a spectrum source, plus closed-form
//! high-temperature (classical) and low-temperature (Schottky) limits.

use std::f64::consts::PI;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::oscillator::OscillatorParams;
use crate::shoot::{self, ShootingConfig};
use crate::special::{gamma, log_gamma};
use crate::spectrum::{wkb_correction_coefficient, WkbOrder};

pub const DEFAULT_TAIL_TOL: f64 = 1e-10;
const HARD_CAP: usize = 2_000_000;

/// Thermodynamic quantities at one temperature (k_B = 1).
#[derive(Debug, Clone, Copy)]
pub struct ThermoPoint {
    pub t: f64,
    pub beta: f64,
    pub z: f64,
    /// log Z stays meaningful when Z itself underflows at very low T.
    pub ln_z: f64,
    pub f: f64,
    pub s: f64,
    pub u: f64,
    pub c: f64,
    pub levels_used: usize,
}

/// Characteristic temperature separating quantum from classical behavior.
#[derive(Debug, Clone, Copy)]
pub struct CharacteristicTemperature {
    pub theta: f64,
}

/// Leading-order growth model `E_n ~ coefficient (n + 1/2)^exponent`,
/// used for the analytic truncation bound of the partition sum.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumTail {
    pub coefficient: f64,
    pub exponent: f64,
}

/// Anything that can hand out energy levels in order.
pub trait SpectrumSource: Sync {
    fn energy(&self, n: usize) -> Result<f64>;
    fn tail(&self) -> SpectrumTail;
    fn level_cap(&self) -> usize {
        usize::MAX
    }
}

fn tail_model(params: &OscillatorParams) -> Result<SpectrumTail> {
    let n = params.n();
    Ok(SpectrumTail {
        coefficient: characteristic_temperature(params)?.theta,
        exponent: 2.0 * n / (n + 2.0),
    })
}

/// WKB levels (first or second order) as a spectrum source.
#[derive(Debug, Clone)]
pub struct WkbSource {
    order: WkbOrder,
    theta: f64,
    gamma_exp: f64,
    correction: f64,
}

impl WkbSource {
    pub fn new(params: &OscillatorParams, order: WkbOrder) -> Result<Self> {
        let tail = tail_model(params)?;
        Ok(WkbSource {
            order,
            theta: tail.coefficient,
            gamma_exp: tail.exponent,
            correction: wkb_correction_coefficient(params),
        })
    }
}

impl SpectrumSource for WkbSource {
    fn energy(&self, n: usize) -> Result<f64> {
        let nph = n as f64 + 0.5;
        let e1 = self.theta * nph.powf(self.gamma_exp);
        Ok(match self.order {
            WkbOrder::First => e1,
            WkbOrder::Second => e1 * (1.0 + self.correction / (nph * nph)),
        })
    }

    fn tail(&self) -> SpectrumTail {
        SpectrumTail {
            coefficient: self.theta,
            exponent: self.gamma_exp,
        }
    }
}

/// Shooting-method eigenvalues as a spectrum source (lazily computed,
/// capped at the solver's configured maximum level).
pub struct ExactSource {
    params: OscillatorParams,
    cfg: ShootingConfig,
    tail: SpectrumTail,
    cache: Mutex<Vec<f64>>,
}

impl ExactSource {
    pub fn new(params: OscillatorParams, cfg: ShootingConfig) -> Result<Self> {
        let tail = tail_model(&params)?;
        Ok(ExactSource {
            params,
            cfg,
            tail,
            cache: Mutex::new(Vec::new()),
        })
    }
}

impl SpectrumSource for ExactSource {
    fn energy(&self, n: usize) -> Result<f64> {
        let mut cache = self.cache.lock().unwrap();
        while cache.len() <= n {
            let k = cache.len();
            cache.push(shoot::eigenvalue(&self.params, k, &self.cfg)?.energy);
        }
        Ok(cache[n])
    }

    fn tail(&self) -> SpectrumTail {
        self.tail
    }

    fn level_cap(&self) -> usize {
        self.cfg.max_levels
    }
}

/// A fixed, user-supplied list of levels.
pub struct ListSource {
    levels: Vec<f64>,
    tail: SpectrumTail,
}

impl ListSource {
    pub fn new(levels: Vec<f64>, tail: SpectrumTail) -> Self {
        ListSource { levels, tail }
    }

    pub fn from_params(levels: Vec<f64>, params: &OscillatorParams) -> Result<Self> {
        Ok(ListSource {
            levels,
            tail: tail_model(params)?,
        })
    }
}

impl SpectrumSource for ListSource {
    fn energy(&self, n: usize) -> Result<f64> {
        self.levels.get(n).copied().ok_or(Error::LevelUnavailable {
            n,
            limit: self.levels.len(),
        })
    }

    fn tail(&self) -> SpectrumTail {
        self.tail
    }

    fn level_cap(&self) -> usize {
        self.levels.len()
    }
}

/// Canonical partition function and derived quantities at temperature `t`.
///
/// The sum is truncated at the first level where the analytic integral
/// bound on the remainder (from the tail growth model, tightened by the
/// levels actually seen) drops below `tail_tol * Z`. Internal energy and
/// specific heat come from moment sums over the same truncated set; no
/// numerical differentiation is involved.
pub fn partition_function(
    source: &dyn SpectrumSource,
    t: f64,
    tail_tol: f64,
) -> Result<ThermoPoint> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("temperature must be positive, got {t}")));
    }
    if !(tail_tol > 0.0 && tail_tol <= 1e-6) {
        return Err(Error::domain(format!(
            "tail_tol must lie in (0, 1e-6], got {tail_tol}"
        )));
    }
    let beta = 1.0 / t;
    let tail = source.tail();
    let g = tail.exponent;
    let cap = source.level_cap().min(HARD_CAP);

    let e0 = source.energy(0)?;
    if !(e0 > 0.0) {
        return Err(Error::domain(format!(
            "ground-state energy must be positive, got {e0}"
        )));
    }

    // Energies shifted by E_0 keep every accumulated quantity well scaled
    // and make S and C nonnegative in floating point.
    let mut shifted: Vec<f64> = Vec::with_capacity(64);
    let mut weights: Vec<f64> = Vec::with_capacity(64);
    let mut w_sum = 0.0_f64;
    let mut coeff = tail.coefficient;
    let mut n = 0usize;
    let mut last_rel_bound = f64::INFINITY;

    loop {
        let e = source.energy(n).map_err(|err| match err {
            Error::LevelUnavailable { .. } => Error::TruncationFailure {
                terms: n,
                bound: last_rel_bound,
                target: tail_tol,
            },
            other => other,
        })?;
        let ep = e - e0;
        let w = (-beta * ep).exp();
        shifted.push(ep);
        weights.push(w);
        w_sum += w;
        coeff = coeff.min(e / (n as f64 + 0.5).powf(g));

        // Remainder past level n is at most int_{n+1/2}^inf e^{-beta c u^g} du
        // <= e^{-beta c u0^g} / (beta c u0^{g-1}); compare against
        // tail_tol * Z in log space.
        let u0 = n as f64 + 0.5;
        let bc = beta * coeff;
        let log_bound = -bc * u0.powf(g) - (bc * u0.powf(g - 1.0)).ln();
        let log_target = tail_tol.ln() + w_sum.ln() - beta * e0;
        last_rel_bound = (log_bound + beta * e0 - w_sum.ln()).exp();
        if log_bound <= log_target {
            break;
        }
        n += 1;
        if n >= cap {
            return Err(Error::TruncationFailure {
                terms: n,
                bound: last_rel_bound,
                target: tail_tol,
            });
        }
    }

    let mean = shifted
        .iter()
        .zip(&weights)
        .map(|(e, w)| e * w)
        .sum::<f64>()
        / w_sum;
    let var = shifted
        .iter()
        .zip(&weights)
        .map(|(e, w)| (e - mean) * (e - mean) * w)
        .sum::<f64>()
        / w_sum;

    let ln_z = -beta * e0 + w_sum.ln();
    let u = e0 + mean;
    Ok(ThermoPoint {
        t,
        beta,
        z: ln_z.exp(),
        ln_z,
        f: -t * ln_z,
        s: beta * mean + w_sum.ln(),
        u,
        c: beta * beta * var,
        levels_used: shifted.len(),
    })
}

/// Characteristic temperature
/// `Theta = [Gamma(3/2 + 1/N) sqrt(pi) / (sin(M pi/N) Gamma(1 + 1/N))]^{2N/(N+2)}`.
pub fn characteristic_temperature(params: &OscillatorParams) -> Result<CharacteristicTemperature> {
    let n = params.n();
    let log_base = log_gamma(1.5 + 1.0 / n)? + 0.5 * PI.ln()
        - params.sin_factor().ln()
        - log_gamma(1.0 + 1.0 / n)?;
    Ok(CharacteristicTemperature {
        theta: (2.0 * n / (n + 2.0) * log_base).exp(),
    })
}

/// Classical partition function `Gamma(3/2 + 1/N) (T/Theta)^{1/2 + 1/N}`.
pub fn classical_partition_closed_form(params: &OscillatorParams, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain("temperature must be positive"));
    }
    let n = params.n();
    let theta = characteristic_temperature(params)?.theta;
    Ok(gamma(1.5 + 1.0 / n)? * (t / theta).powf(0.5 + 1.0 / n))
}

/// Semiclassical partition function of `p^2 + |x|^N`:
/// `Q_cl = Gamma(1 + 1/N) / (sqrt(pi) beta^{1/2 + 1/N})`.
pub fn q_cl(n: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain("temperature must be positive"));
    }
    Ok(gamma(1.0 + 1.0 / n)? * t.powf(0.5 + 1.0 / n) / PI.sqrt())
}

/// Classical entropy and specific heat:
/// `S = (1/2 + 1/N)[log(T/Theta) + 1] + log Gamma(3/2 + 1/N)`,
/// `C = 1/2 + 1/N`.
pub fn classical_entropy_and_heat(params: &OscillatorParams, t: f64) -> Result<(f64, f64)> {
    if !(t > 0.0) {
        return Err(Error::domain("temperature must be positive"));
    }
    let n = params.n();
    let theta = characteristic_temperature(params)?.theta;
    let c = 0.5 + 1.0 / n;
    let s = c * ((t / theta).ln() + 1.0) + log_gamma(1.5 + 1.0 / n)?;
    Ok((s, c))
}

/// Discrete semiclassical sum over leading-order WKB levels,
/// `sum_n exp(-beta Theta (n + 1/2)^{2N/(N+2)})`. Converges to the
/// classical closed form as `Theta/T -> 0`.
pub fn semiclassical_sum(params: &OscillatorParams, t: f64, tail_tol: f64) -> Result<f64> {
    let source = WkbSource::new(params, WkbOrder::First)?;
    Ok(partition_function(&source, t, tail_tol)?.z)
}

/// Low-temperature two-level estimate `(scale/T)^2 e^{-scale/T}` of the
/// specific heat; `scale` is the first spectral gap (or Theta as a cruder
/// stand-in).
pub fn schottky_specific_heat(scale: f64, t: f64) -> f64 {
    let x = scale / t;
    x * x * (-x).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn wkb2(params: &OscillatorParams) -> WkbSource {
        WkbSource::new(params, WkbOrder::Second).unwrap()
    }

    #[test]
    fn harmonic_partition_is_geometric_series() {
        let p = OscillatorParams::harmonic();
        let src = wkb2(&p);
        let beta: f64 = 1.0;
        let pt = partition_function(&src, 1.0 / beta, 1e-12).unwrap();
        let expected = (-beta).exp() / (1.0 - (-2.0 * beta).exp());
        assert_relative_eq!(pt.z, expected, max_relative = 1e-10);
    }

    #[test]
    fn thermodynamic_identities_hold() {
        let p = OscillatorParams::new(1, 1.0).unwrap();
        let src = wkb2(&p);
        for t in [0.3, 1.0, 4.0, 30.0] {
            let pt = partition_function(&src, t, 1e-10).unwrap();
            assert_relative_eq!(pt.f, -t * pt.ln_z, max_relative = 1e-12);
            assert_relative_eq!(pt.u, pt.f + t * pt.s, max_relative = 1e-10);
            assert!(pt.c >= 0.0);
            assert!(pt.s >= 0.0);
            assert!(pt.z > 0.0);
        }
    }

    #[test]
    fn characteristic_temperature_values() {
        let harmonic = characteristic_temperature(&OscillatorParams::harmonic()).unwrap();
        assert!((harmonic.theta - 2.0).abs() < 1e-13);
        let p = OscillatorParams::new(1, 2.0).unwrap();
        assert_relative_eq!(
            characteristic_temperature(&p).unwrap().theta,
            3.468_581_305_939_29,
            max_relative = 1e-12
        );

        // Unbounded increasing in N at fixed M.
        let n3 = characteristic_temperature(&OscillatorParams::new(1, 1.0).unwrap()).unwrap();
        let n10 = characteristic_temperature(&OscillatorParams::new(1, 8.0).unwrap()).unwrap();
        assert!(n10.theta > n3.theta);
    }

    #[test]
    fn classical_closed_forms() {
        // Harmonic: Z_cl = T/2.
        let h = OscillatorParams::harmonic();
        assert_relative_eq!(
            classical_partition_closed_form(&h, 3.0).unwrap(),
            1.5,
            max_relative = 1e-12
        );
        // (M=1, eps=2) at T=1: sin(pi/4) Gamma(5/4)/sqrt(pi).
        let p = OscillatorParams::new(1, 2.0).unwrap();
        assert_relative_eq!(
            classical_partition_closed_form(&p, 1.0).unwrap(),
            0.361_602_271_158_019_29,
            max_relative = 1e-12
        );
    }

    #[test]
    fn zcl_factorizes_through_q_cl() {
        // Z_cl = Q_cl(N, T) sin(M pi / N) across the parameter matrix.
        let matrix = [(1u32, 1.0), (1, 2.0), (1, 4.0), (2, 2.0), (3, 0.0)];
        for (m, eps) in matrix {
            let p = OscillatorParams::new(m, eps).unwrap();
            for t in [0.37, 1.0, 12.0] {
                let z = classical_partition_closed_form(&p, t).unwrap();
                let q = q_cl(p.n(), t).unwrap();
                assert_relative_eq!(z, q * p.sin_factor(), max_relative = 1e-12);
            }
        }
        // Hermitian reference: Z_cl is Q_cl itself.
        let hp = OscillatorParams::hermitian(6.0).unwrap();
        assert_relative_eq!(
            classical_partition_closed_form(&hp, 2.0).unwrap(),
            q_cl(6.0, 2.0).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn classical_entropy_and_heat_values() {
        let (_, c) = classical_entropy_and_heat(&OscillatorParams::harmonic(), 1.0).unwrap();
        assert_relative_eq!(c, 1.0, max_relative = 1e-14);
        let p = OscillatorParams::new(1, 1.0).unwrap();
        let (_, c) = classical_entropy_and_heat(&p, 1.0).unwrap();
        assert_relative_eq!(c, 5.0 / 6.0, max_relative = 1e-14);
        // S(T) - S(T') = (1/2 + 1/N) log(T/T')
        let (s1, _) = classical_entropy_and_heat(&p, 7.0).unwrap();
        let (s2, _) = classical_entropy_and_heat(&p, 2.0).unwrap();
        assert_relative_eq!(
            s1 - s2,
            (0.5 + 1.0 / 3.0) * (7.0f64 / 2.0).ln(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn semiclassical_sum_against_closed_form() {
        let p = OscillatorParams::new(1, 2.0).unwrap();
        let theta = characteristic_temperature(&p).unwrap().theta;
        let hot = semiclassical_sum(&p, 100.0 * theta, 1e-10).unwrap();
        let closed = classical_partition_closed_form(&p, 100.0 * theta).unwrap();
        assert!((hot / closed - 1.0).abs() < 0.01, "hot {hot} vs {closed}");

        let h = OscillatorParams::harmonic();
        let hot_h = semiclassical_sum(&h, 200.0, 1e-10).unwrap();
        assert!((hot_h / 100.0 - 1.0).abs() < 0.01);

        // Quantum regime: the classical formula is invalid at low T.
        let cold = semiclassical_sum(&p, theta / 10.0, 1e-10).unwrap();
        let closed_cold = classical_partition_closed_form(&p, theta / 10.0).unwrap();
        assert!((cold / closed_cold - 1.0).abs() > 0.1);
    }

    #[test]
    fn high_temperature_specific_heat() {
        let p = OscillatorParams::new(1, 1.0).unwrap();
        let theta = characteristic_temperature(&p).unwrap().theta;
        let src = wkb2(&p);
        let pt = partition_function(&src, 100.0 * theta, 1e-10).unwrap();
        let classical = 0.5 + 1.0 / 3.0;
        assert!(pt.c / classical > 0.99 && pt.c / classical < 1.01, "C = {}", pt.c);
    }

    #[test]
    fn low_temperature_limits() {
        let h = OscillatorParams::harmonic();
        let src = wkb2(&h);
        let pt = partition_function(&src, 2.0 / 100.0, 1e-10).unwrap();
        assert!(pt.s < 1e-3);
        assert!(pt.c < 1e-3);

        // Monotone decay below Theta/20 for a non-Hermitian case.
        let p = OscillatorParams::new(1, 2.0).unwrap();
        let theta = characteristic_temperature(&p).unwrap().theta;
        let src = wkb2(&p);
        let grid = [theta / 200.0, theta / 100.0, theta / 50.0, theta / 25.0];
        let pts: Vec<_> = grid
            .iter()
            .map(|&t| partition_function(&src, t, 1e-10).unwrap())
            .collect();
        for w in pts.windows(2) {
            assert!(w[0].s <= w[1].s);
            assert!(w[0].c <= w[1].c);
        }
    }

    #[test]
    fn domain_checks() {
        let src = wkb2(&OscillatorParams::harmonic());
        assert!(partition_function(&src, 0.0, 1e-10).is_err());
        assert!(partition_function(&src, -2.0, 1e-10).is_err());
        assert!(partition_function(&src, 1.0, 1e-5).is_err());
        assert!(partition_function(&src, 1.0, 0.0).is_err());
    }

    #[test]
    fn list_source_exhaustion_is_truncation_failure() {
        let p = OscillatorParams::harmonic();
        let src = ListSource::from_params(vec![1.0, 3.0, 5.0], &p).unwrap();
        // At high temperature three levels cannot satisfy the tail bound.
        let r = partition_function(&src, 50.0, 1e-10);
        assert!(matches!(r, Err(Error::TruncationFailure { .. })));
        // At low temperature they can.
        let pt = partition_function(&src, 0.05, 1e-10).unwrap();
        assert!(pt.levels_used <= 3);
    }

    #[test]
    fn exact_source_harmonic() {
        let src =
            ExactSource::new(OscillatorParams::harmonic(), ShootingConfig::default()).unwrap();
        assert_relative_eq!(src.energy(2).unwrap(), 5.0, max_relative = 1e-7);
        let pt = partition_function(&src, 0.5, 1e-8).unwrap();
        let beta = 2.0_f64;
        let expected = (-beta).exp() / (1.0 - (-2.0 * beta).exp());
        assert_relative_eq!(pt.z, expected, max_relative = 1e-6);
    }

    #[test]
    fn schottky_form() {
        assert_relative_eq!(
            schottky_specific_heat(2.0, 0.5),
            16.0 * (-4.0f64).exp(),
            max_relative = 1e-14
        );
    }
}
