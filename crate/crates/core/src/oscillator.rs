//! Oscillator family parameters.

use num_complex::Complex64;
use std::fmt;

use crate::error::{Error, Result};

/// Parameters of the oscillator `H = p^2 + x^{2M} (ix)^epsilon`, with total
/// exponent `N = 2M + epsilon`.
///
/// With `hermitian_reference` set the potential is `|x|^N` instead: all
/// closed-form expressions drop their `sin(M pi / N)` factors, which is the
/// same as evaluating them at the effective value `M = N/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    m: u32,
    epsilon: f64,
    hermitian_reference: bool,
}

impl OscillatorParams {
    pub fn new(m: u32, epsilon: f64) -> Result<Self> {
        if m < 1 {
            return Err(Error::domain("M must be a positive integer"));
        }
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(Error::domain(format!(
                "epsilon must be a finite non-negative real, got {epsilon}"
            )));
        }
        Ok(OscillatorParams {
            m,
            epsilon,
            hermitian_reference: false,
        })
    }

    /// The comparison potential `|x|^N`, `N >= 2`.
    pub fn hermitian(n: f64) -> Result<Self> {
        if !n.is_finite() || n < 2.0 {
            return Err(Error::domain(format!(
                "hermitian reference requires N >= 2, got {n}"
            )));
        }
        Ok(OscillatorParams {
            m: 1,
            epsilon: n - 2.0,
            hermitian_reference: true,
        })
    }

    pub fn harmonic() -> Self {
        OscillatorParams {
            m: 1,
            epsilon: 0.0,
            hermitian_reference: false,
        }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Total exponent `N = 2M + epsilon`.
    pub fn n(&self) -> f64 {
        2.0 * self.m as f64 + self.epsilon
    }

    pub fn is_hermitian_reference(&self) -> bool {
        self.hermitian_reference
    }

    /// Effective `M`: `N/2` for the `|x|^N` reference, otherwise `M`.
    pub fn m_eff(&self) -> f64 {
        if self.hermitian_reference {
            self.n() / 2.0
        } else {
            self.m as f64
        }
    }

    /// Effective deformation: zero for the `|x|^N` reference.
    pub fn eps_eff(&self) -> f64 {
        if self.hermitian_reference {
            0.0
        } else {
            self.epsilon
        }
    }

    /// `sin(M pi / N)`, exactly 1 for the Hermitian reference.
    pub fn sin_factor(&self) -> f64 {
        if self.hermitian_reference {
            1.0
        } else {
            (self.m as f64 * std::f64::consts::PI / self.n()).sin()
        }
    }

    /// The eigenvalue problem lives on the real axis (even real potential).
    pub fn is_real_potential(&self) -> bool {
        self.hermitian_reference || self.epsilon == 0.0
    }

    /// Potential at a general complex point (principal branch of `(ix)^eps`;
    /// for the Hermitian reference this is `|x|^N`, meaningful on the real
    /// axis only).
    pub fn potential(&self, x: Complex64) -> Complex64 {
        let n = self.n();
        if self.hermitian_reference {
            return Complex64::new(x.norm().powf(n), 0.0);
        }
        let x2m = x.powu(2 * self.m);
        if self.epsilon == 0.0 {
            x2m
        } else {
            x2m * (Complex64::new(0.0, 1.0) * x).powf(self.epsilon)
        }
    }

    /// Potential on the ray `x = r e^{-i theta}` via the continued polar
    /// form `r^N exp(i (eps pi/2 - N theta))`. This is the analytic
    /// continuation in `theta` and agrees with `potential` wherever `ix`
    /// avoids the principal branch cut.
    pub fn potential_on_ray(&self, theta: f64, r: f64) -> Complex64 {
        let n = self.n();
        if self.hermitian_reference {
            return Complex64::new(r.powf(n), 0.0);
        }
        let arg = self.arg_v_on_ray(theta);
        Complex64::from_polar(r.powf(n), arg)
    }

    /// Phase of the potential on the ray `x = r e^{-i theta}`.
    pub fn arg_v_on_ray(&self, theta: f64) -> f64 {
        if self.hermitian_reference {
            0.0
        } else {
            self.eps_eff() * std::f64::consts::FRAC_PI_2 - self.n() * theta
        }
    }
}

impl fmt::Display for OscillatorParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.hermitian_reference {
            write!(f, "|x|^{}", self.n())
        } else {
            write!(f, "x^{}(ix)^{} (M={}, eps={})", 2 * self.m, self.epsilon, self.m, self.epsilon)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn constructor_invariants() {
        assert!(OscillatorParams::new(0, 1.0).is_err());
        assert!(OscillatorParams::new(1, -0.5).is_err());
        assert!(OscillatorParams::new(1, f64::NAN).is_err());
        assert!(OscillatorParams::hermitian(1.5).is_err());
        let p = OscillatorParams::new(2, 2.0).unwrap();
        assert_eq!(p.n(), 6.0);
    }

    #[test]
    fn sin_factor_cases() {
        assert_relative_eq!(OscillatorParams::harmonic().sin_factor(), 1.0);
        let herm = OscillatorParams::hermitian(4.0).unwrap();
        assert_eq!(herm.sin_factor(), 1.0);
        assert_eq!(herm.eps_eff(), 0.0);
        assert_eq!(herm.m_eff(), 2.0);
        let p = OscillatorParams::new(1, 2.0).unwrap();
        assert_relative_eq!(p.sin_factor(), (PI / 4.0).sin(), max_relative = 1e-15);
    }

    #[test]
    fn polar_form_matches_principal_powers() {
        let p = OscillatorParams::new(1, 1.5).unwrap();
        for &theta in &[-1.2, -0.3, 0.0, 0.4, 1.0, 1.5, 2.5, PI] {
            for &r in &[0.3, 1.0, 2.7] {
                let x = Complex64::from_polar(r, -theta);
                let a = p.potential(x);
                let b = p.potential_on_ray(theta, r);
                assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0), "theta={theta} r={r}");
            }
        }
    }

    #[test]
    fn harmonic_potential_is_x_squared() {
        let p = OscillatorParams::harmonic();
        let x = Complex64::new(1.5, 0.0);
        assert_relative_eq!(p.potential(x).re, 2.25, max_relative = 1e-15);
        assert_eq!(p.potential(x).im, 0.0);
    }
}
