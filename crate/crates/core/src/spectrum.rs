//! WKB energy levels and turning-point geometry.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::oscillator::OscillatorParams;
use crate::quad;
use crate::special::{gamma, log_gamma};

/// How an energy value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Wkb1,
    Wkb2,
    Exact,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::Wkb1 => write!(f, "wkb1"),
            Method::Wkb2 => write!(f, "wkb2"),
            Method::Exact => write!(f, "exact"),
        }
    }
}

/// WKB order selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WkbOrder {
    First,
    Second,
}

#[derive(Debug, Clone, Copy)]
pub struct EnergyLevel {
    pub n: usize,
    pub energy: f64,
    pub method: Method,
}

/// Complex turning points of `V(x) = E`.
#[derive(Debug, Clone, Copy)]
pub struct TurningPoints {
    pub x_plus: Complex64,
    pub x_minus: Complex64,
    pub energy: f64,
}

/// Turning points `x_pm = E^{1/N} exp(-i pi (1/2 -+ M/N))`.
///
/// For an even real potential (`eps = 0` or the Hermitian reference) they sit
/// at `+- E^{1/N}` on the real axis; as `eps` grows they migrate into the
/// lower half-plane, staying PT-conjugate: `x_minus = -conj(x_plus)`.
pub fn turning_points(params: &OscillatorParams, energy: f64) -> Result<TurningPoints> {
    if !(energy > 0.0) {
        return Err(Error::domain(format!(
            "turning points require E > 0, got {energy}"
        )));
    }
    let radius = energy.powf(1.0 / params.n());
    if params.is_real_potential() {
        return Ok(TurningPoints {
            x_plus: Complex64::new(radius, 0.0),
            x_minus: Complex64::new(-radius, 0.0),
            energy,
        });
    }
    let m_over_n = params.m_eff() / params.n();
    let x_plus = Complex64::from_polar(radius, -PI * (0.5 - m_over_n));
    let x_minus = Complex64::from_polar(radius, -PI * (0.5 + m_over_n));
    Ok(TurningPoints {
        x_plus,
        x_minus,
        energy,
    })
}

/// Leading WKB energy for continuous quantum number offset `n + 1/2`.
pub(crate) fn wkb1_energy_at(params: &OscillatorParams, n_plus_half: f64) -> Result<f64> {
    let n = params.n();
    let exponent = 2.0 * n / (n + 2.0);
    let log_base = log_gamma(1.5 + 1.0 / n)? + 0.5 * PI.ln() + n_plus_half.ln()
        - params.sin_factor().ln()
        - log_gamma(1.0 + 1.0 / n)?;
    Ok((exponent * log_base).exp())
}

/// Coefficient `K` of the second-order correction factor `1 + K/(n+1/2)^2`.
pub fn wkb_correction_coefficient(params: &OscillatorParams) -> f64 {
    let n = params.n();
    let s = params.sin_factor();
    let cot = 1.0 / (PI / n).tan();
    n * (n - 1.0) * s * s * cot / (3.0 * PI * (n + 2.0) * (n + 2.0))
}

/// WKB energy level: first order is the gamma-function closed form of the
/// leading quantization condition, second order multiplies in the
/// `1 + K/(n+1/2)^2` correction.
pub fn wkb_energy(params: &OscillatorParams, n: usize, order: WkbOrder) -> Result<EnergyLevel> {
    let nph = n as f64 + 0.5;
    let e1 = wkb1_energy_at(params, nph)?;
    let (energy, method) = match order {
        WkbOrder::First => (e1, Method::Wkb1),
        WkbOrder::Second => {
            let k = wkb_correction_coefficient(params);
            (e1 * (1.0 + k / (nph * nph)), Method::Wkb2)
        }
    };
    Ok(EnergyLevel { n, energy, method })
}

/// Left side of the quantization condition:
/// `2 sin(M pi / N) E^{1/2 + 1/N} \int_0^1 sqrt(1 - s^N) ds`,
/// evaluated by adaptive quadrature. Equals `(n + 1/2) pi` at the
/// first-order WKB energies.
pub fn wkb_action_integral(params: &OscillatorParams, energy: f64) -> Result<f64> {
    if !(energy > 0.0) {
        return Err(Error::domain(format!(
            "action integral requires E > 0, got {energy}"
        )));
    }
    let n = params.n();
    // s = 1 - u^2 removes the square-root edge at s = 1.
    let shape = quad::integrate(
        |u| {
            let s = 1.0 - u * u;
            2.0 * u * (1.0 - s.powf(n)).max(0.0).sqrt()
        },
        0.0,
        1.0,
        1e-12,
    )?;
    Ok(2.0 * params.sin_factor() * energy.powf(0.5 + 1.0 / n) * shape.value)
}

/// Gamma closed form of the same action,
/// `sin(M pi/N) sqrt(pi) Gamma(1 + 1/N)/Gamma(3/2 + 1/N) E^{1/2+1/N}`.
pub fn wkb_action_closed_form(params: &OscillatorParams, energy: f64) -> Result<f64> {
    let n = params.n();
    Ok(params.sin_factor() * PI.sqrt() * gamma(1.0 + 1.0 / n)? / gamma(1.5 + 1.0 / n)?
        * energy.powf(0.5 + 1.0 / n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn neg_quartic() -> OscillatorParams {
        OscillatorParams::new(1, 2.0).unwrap()
    }

    fn abs_quartic() -> OscillatorParams {
        OscillatorParams::hermitian(4.0).unwrap()
    }

    #[test]
    fn turning_points_harmonic() {
        let tp = turning_points(&OscillatorParams::harmonic(), 4.0).unwrap();
        assert_relative_eq!(tp.x_plus.re, 2.0, max_relative = 1e-14);
        assert_relative_eq!(tp.x_minus.re, -2.0, max_relative = 1e-14);
        assert_eq!(tp.x_plus.im, 0.0);
    }

    #[test]
    fn turning_points_angles() {
        let tp = turning_points(&neg_quartic(), 1.0).unwrap();
        assert_relative_eq!(tp.x_plus.arg(), -PI / 4.0, max_relative = 1e-14);
        assert_relative_eq!(tp.x_minus.arg(), -3.0 * PI / 4.0, max_relative = 1e-14);

        let cubic = OscillatorParams::new(1, 1.0).unwrap();
        let tp = turning_points(&cubic, 1.0).unwrap();
        assert_relative_eq!(tp.x_plus.arg(), -PI / 6.0, max_relative = 1e-13);
        assert_relative_eq!(tp.x_minus.arg(), -5.0 * PI / 6.0, max_relative = 1e-13);
    }

    #[test]
    fn turning_points_invariants() {
        for (m, eps, e) in [(1, 1.0, 0.7), (2, 2.0, 3.0), (1, 2.0, 11.0)] {
            let p = OscillatorParams::new(m, eps).unwrap();
            let tp = turning_points(&p, e).unwrap();
            let radius = e.powf(1.0 / p.n());
            assert_relative_eq!(tp.x_plus.norm(), radius, max_relative = 1e-13);
            assert_relative_eq!(tp.x_minus.norm(), radius, max_relative = 1e-13);
            // PT symmetry: x_minus = -conj(x_plus)
            assert!((tp.x_minus + tp.x_plus.conj()).norm() < 1e-13 * radius);
            // both in the closed lower half-plane
            assert!(tp.x_plus.im <= 0.0 && tp.x_minus.im <= 0.0);
        }
        assert!(turning_points(&neg_quartic(), 0.0).is_err());
        assert!(turning_points(&neg_quartic(), -1.0).is_err());
    }

    #[test]
    fn table1_wkb_columns() {
        // |x|^4: (n, WKB1, WKB2)
        let rows = [
            (0usize, 0.86714532, 0.98982129),
            (1, 3.75191992, 3.81089637),
            (10, 50.2401523, 50.2562691),
            (50, 407.868707, 407.874363),
            (100, 1020.986417, 1020.989992),
        ];
        let p = abs_quartic();
        for (n, w1, w2) in rows {
            let e1 = wkb_energy(&p, n, WkbOrder::First).unwrap().energy;
            let e2 = wkb_energy(&p, n, WkbOrder::Second).unwrap().energy;
            assert!((e1 - w1).abs() < 1e-6, "n={n} wkb1 {e1} vs {w1}");
            assert!((e2 - w2).abs() < 1e-6, "n={n} wkb2 {e2} vs {w2}");
        }
    }

    #[test]
    fn table2_wkb_columns() {
        // -x^4: (n, WKB1, WKB2)
        let rows = [
            (0usize, 1.37651, 1.47388),
            (1, 5.9558, 6.00261),
            (2, 11.769, 11.8023),
            (3, 18.4321, 18.4588),
        ];
        let p = neg_quartic();
        for (n, w1, w2) in rows {
            let e1 = wkb_energy(&p, n, WkbOrder::First).unwrap().energy;
            let e2 = wkb_energy(&p, n, WkbOrder::Second).unwrap().energy;
            assert!((e1 - w1).abs() < 1e-4, "n={n} wkb1 {e1} vs {w1}");
            assert!((e2 - w2).abs() < 1e-4, "n={n} wkb2 {e2} vs {w2}");
        }
    }

    #[test]
    fn harmonic_oscillator_is_exact() {
        let p = OscillatorParams::harmonic();
        for n in [0usize, 1, 2, 7, 40, 199] {
            let expected = 2.0 * n as f64 + 1.0;
            for order in [WkbOrder::First, WkbOrder::Second] {
                let e = wkb_energy(&p, n, order).unwrap().energy;
                assert_relative_eq!(e, expected, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn strictly_increasing_in_n() {
        for p in [
            OscillatorParams::harmonic(),
            OscillatorParams::new(1, 1.0).unwrap(),
            neg_quartic(),
            OscillatorParams::new(2, 2.0).unwrap(),
            abs_quartic(),
            OscillatorParams::hermitian(10.0).unwrap(),
        ] {
            for order in [WkbOrder::First, WkbOrder::Second] {
                let mut prev = 0.0;
                for n in 0..=200 {
                    let e = wkb_energy(&p, n, order).unwrap().energy;
                    assert!(e > prev, "{p} n={n} order={order:?}: {e} <= {prev}");
                    prev = e;
                }
            }
        }
    }

    #[test]
    fn correction_factor_matches_coefficient() {
        for p in [neg_quartic(), abs_quartic(), OscillatorParams::new(2, 2.0).unwrap()] {
            let k = wkb_correction_coefficient(&p);
            for n in [0usize, 3, 20, 100] {
                let nph = n as f64 + 0.5;
                let e1 = wkb_energy(&p, n, WkbOrder::First).unwrap().energy;
                let e2 = wkb_energy(&p, n, WkbOrder::Second).unwrap().energy;
                assert_relative_eq!(e2 / e1 - 1.0, k / (nph * nph), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn action_integral_harmonic_quarter_circle() {
        // 2 sin(pi/2) * 1 * int sqrt(1-s^2) = 2 * pi/4 = pi/2; at E=1 the
        // quantization value is pi/2, i.e. the n=0 condition.
        let a = wkb_action_integral(&OscillatorParams::harmonic(), 1.0).unwrap();
        assert_relative_eq!(a, PI / 2.0, max_relative = 1e-10);
    }

    #[test]
    fn action_integral_matches_gamma_closed_form() {
        for (p, e) in [
            (neg_quartic(), 1.0),
            (neg_quartic(), 17.3),
            (OscillatorParams::hermitian(6.0).unwrap(), 1.0),
            (OscillatorParams::new(2, 2.0).unwrap(), 5.0),
        ] {
            let quadrature = wkb_action_integral(&p, e).unwrap();
            let closed = wkb_action_closed_form(&p, e).unwrap();
            assert_relative_eq!(quadrature, closed, max_relative = 1e-10);
        }
    }

    #[test]
    fn quantization_consistency() {
        // action(E_wkb1(n)) = (n + 1/2) pi
        let matrix = [
            OscillatorParams::harmonic(),
            OscillatorParams::new(1, 1.0).unwrap(),
            neg_quartic(),
            OscillatorParams::new(2, 2.0).unwrap(),
            OscillatorParams::hermitian(6.0).unwrap(),
        ];
        for p in matrix {
            for n in [0usize, 1, 5, 20] {
                let e = wkb_energy(&p, n, WkbOrder::First).unwrap().energy;
                let action = wkb_action_integral(&p, e).unwrap();
                let expected = (n as f64 + 0.5) * PI;
                assert_relative_eq!(action, expected, max_relative = 1e-8);
            }
        }
    }
}
