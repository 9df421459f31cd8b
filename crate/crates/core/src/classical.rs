//! Classical partition function on complex contours.
//!
//! The Boltzmann integral of `x^{2M}(ix)^eps` converges along the ray
//! `x = r e^{-i theta}` only where `Re V > 0` at large `r`, i.e.
//! `cos[N(pi/2 - theta) - M pi] > 0`. This module classifies the resulting
//! allowed/forbidden wedges, integrates `exp(-beta V)` along two-ray
//! contours, and carries out the wrong-sign-quartic chain through the
//! equivalent Hermitian form `h(x,p) = p^4/(4a) - p/2 + a x^2`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::oscillator::OscillatorParams;
use crate::quad;
use crate::special::gamma;

/// Integrand truncation: stop where `Re(beta V) >= 40`.
const TRUNC_EXPONENT: f64 = 40.0;
/// Angles with `cos(arg V)` at or below this count as forbidden (wedge
/// boundaries converge at best conditionally and are rejected).
const BOUNDARY_EPS: f64 = 1e-12;

/// Angular interval `[lo, hi]`, theta measured downward from the positive
/// real axis, within `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularInterval {
    pub lo: f64,
    pub hi: f64,
}

impl AngularInterval {
    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, theta: f64) -> bool {
        theta >= self.lo && theta <= self.hi
    }
}

/// Forbidden/allowed wedge geometry for one oscillator.
#[derive(Debug, Clone)]
pub struct WedgeSet {
    pub params: OscillatorParams,
    /// Closed forbidden intervals, sorted by lower edge, clipped to (-pi, pi].
    pub forbidden: Vec<AngularInterval>,
    /// Angles where V is real positive on the ray, nearest the real axis first.
    pub allowed_centers: Vec<f64>,
}

impl WedgeSet {
    /// Closed-boundary classification directly from the convergence condition.
    pub fn is_forbidden(&self, theta: f64) -> bool {
        self.params.arg_v_on_ray(theta).cos() <= BOUNDARY_EPS
    }

    /// Identifier of the allowed wedge containing `theta`, if any. Angles in
    /// the same wedge share the branch index `k` of
    /// `arg V in (-pi/2 + 2k pi, pi/2 + 2k pi)`.
    pub fn allowed_segment(&self, theta: f64) -> Option<i64> {
        let psi = self.params.arg_v_on_ray(theta);
        if psi.cos() <= BOUNDARY_EPS {
            None
        } else {
            Some((psi / (2.0 * PI)).round() as i64)
        }
    }

    pub fn real_axis_viable(&self) -> bool {
        !self.is_forbidden(0.0)
    }

    /// Forbidden interval containing `theta`, for error reporting.
    fn enclosing_forbidden(&self, theta: f64) -> AngularInterval {
        let n = self.params.n();
        let eps = self.params.eps_eff();
        let psi = self.params.arg_v_on_ray(theta);
        let k = ((psi - 0.5 * PI) / (2.0 * PI)).floor();
        AngularInterval {
            lo: (eps * PI / 2.0 - 1.5 * PI - 2.0 * k * PI) / n,
            hi: (eps * PI / 2.0 - 0.5 * PI - 2.0 * k * PI) / n,
        }
    }
}

/// Wedge geometry of the complex x-plane. Rejects the `|x|^N` reference,
/// whose potential is not analytic off the real axis.
pub fn wedge_set(params: &OscillatorParams) -> Result<WedgeSet> {
    if params.is_hermitian_reference() {
        return Err(Error::domain(
            "wedge geometry is defined for the analytic family only, not the |x|^N reference",
        ));
    }
    let n = params.n();
    let eps = params.epsilon();
    let half_width = PI / (2.0 * n);

    let mut forbidden = Vec::new();
    let k_span = n.ceil() as i64 + 2;
    for k in -k_span..=k_span {
        let center = (eps * PI / 2.0 - PI + 2.0 * k as f64 * PI) / n;
        let lo = (center - half_width).max(-PI);
        let hi = (center + half_width).min(PI);
        if lo < hi && hi > -PI && lo <= PI {
            forbidden.push(AngularInterval { lo, hi });
        }
    }
    forbidden.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    forbidden.dedup_by(|a, b| (a.lo - b.lo).abs() < 1e-14 && (a.hi - b.hi).abs() < 1e-14);

    let mut allowed_centers = Vec::new();
    for k in -k_span..=k_span {
        let c = (eps * PI / 2.0 - 2.0 * k as f64 * PI) / n;
        if c > -PI && c <= PI {
            allowed_centers.push(c);
        }
    }
    allowed_centers.sort_by(|a, b| {
        a.abs()
            .total_cmp(&b.abs())
            .then(a.total_cmp(b))
    });

    Ok(WedgeSet {
        params: *params,
        forbidden,
        allowed_centers,
    })
}

/// Two-ray integration contour: from `infinity * e^{-i(pi - theta_left)}`
/// through the origin out to `infinity * e^{-i theta_right}`.
#[derive(Debug, Clone, Copy)]
pub struct RayContour {
    pub theta_right: f64,
    pub theta_left: f64,
}

impl RayContour {
    pub fn symmetric(theta: f64) -> Self {
        RayContour {
            theta_right: theta,
            theta_left: theta,
        }
    }

    /// The contour through the classical wedge centers nearest the real
    /// axis, `theta = pi/2 - M pi / N`; the real axis for even real
    /// potentials.
    pub fn wedge_centers(params: &OscillatorParams) -> Self {
        if params.is_real_potential() {
            RayContour::symmetric(0.0)
        } else {
            RayContour::symmetric(PI / 2.0 - params.m_eff() * PI / params.n())
        }
    }
}

fn validate_contour(params: &OscillatorParams, contour: &RayContour) -> Result<(i64, i64)> {
    if params.is_hermitian_reference() {
        if contour.theta_right != 0.0 || contour.theta_left != 0.0 {
            return Err(Error::domain(
                "the |x|^N reference integrates along the real axis only",
            ));
        }
        return Ok((0, 0));
    }
    let wedges = wedge_set(params)?;
    let mut ids = [0i64; 2];
    for (slot, theta_coord) in [contour.theta_right, PI - contour.theta_left]
        .into_iter()
        .enumerate()
    {
        match wedges.allowed_segment(theta_coord) {
            Some(id) => ids[slot] = id,
            None => {
                let enc = wedges.enclosing_forbidden(theta_coord);
                return Err(Error::ForbiddenContour {
                    theta: theta_coord,
                    lo: enc.lo,
                    hi: enc.hi,
                });
            }
        }
    }
    Ok((ids[0], ids[1]))
}

/// `int_0^inf exp(-beta V(r e^{-i t})) dr` truncated where
/// `Re(beta V) = 40`. The outer part is integrated in `u = r^{N/2}`, which
/// turns the decay Gaussian.
fn ray_integral(
    params: &OscillatorParams,
    beta: f64,
    theta_coord: f64,
    quad_tol: f64,
) -> Result<Complex64> {
    let n = params.n();
    let cos_phi = params.arg_v_on_ray(theta_coord).cos();
    if cos_phi <= BOUNDARY_EPS {
        let enc = wedge_set(params)?.enclosing_forbidden(theta_coord);
        return Err(Error::ForbiddenContour {
            theta: theta_coord,
            lo: enc.lo,
            hi: enc.hi,
        });
    }
    let r_scale = (1.0 / (beta * cos_phi)).powf(1.0 / n);
    let r_max = (TRUNC_EXPONENT / (beta * cos_phi)).powf(1.0 / n);

    let head = quad::integrate_complex(
        |r| (-(params.potential_on_ray(theta_coord, r) * beta)).exp(),
        0.0,
        r_scale,
        quad_tol,
    )?;
    let tail = quad::integrate_complex(
        |u| {
            let r = u.powf(2.0 / n);
            let jac = (2.0 / n) * u.powf(2.0 / n - 1.0);
            (-(params.potential_on_ray(theta_coord, r) * beta)).exp() * jac
        },
        r_scale.powf(n / 2.0),
        r_max.powf(n / 2.0),
        quad_tol,
    )?;
    Ok(head.value + tail.value)
}

/// Classical partition function by quadrature along the two contour rays;
/// the Gaussian p-integral contributes the `1/(2 sqrt(pi beta))` prefactor.
///
/// At wedge centers V is real on the rays and the result equals
/// `Q_cl(N, T) sin(M pi / N)`.
pub fn classical_z_by_rays(
    params: &OscillatorParams,
    t: f64,
    contour: &RayContour,
    quad_tol: f64,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain("temperature must be positive"));
    }
    validate_contour(params, contour)?;
    let beta = 1.0 / t;
    let right = ray_integral(params, beta, contour.theta_right, quad_tol)?;
    let left = ray_integral(params, beta, PI - contour.theta_left, quad_tol)?;
    // dx = e^{-i theta} dr on the right ray; the reversed left ray
    // contributes -e^{-i(pi - theta_left)} = +e^{i theta_left}.
    let total = Complex64::from_polar(1.0, contour.theta_left) * left
        + Complex64::from_polar(1.0, -contour.theta_right) * right;
    Ok(total.re / (2.0 * (PI * beta).sqrt()))
}

/// Relative difference of the ray integrals over two contours that must lie
/// in the same pair of allowed wedges. Contours in different wedge systems
/// are rejected: those legitimately evaluate different partition functions.
pub fn contour_independence_check(
    params: &OscillatorParams,
    t: f64,
    contour_a: &RayContour,
    contour_b: &RayContour,
    quad_tol: f64,
) -> Result<f64> {
    let ids_a = validate_contour(params, contour_a)?;
    let ids_b = validate_contour(params, contour_b)?;
    if ids_a != ids_b {
        return Err(Error::DifferentWedgeSystems {
            detail: format!(
                "right {} vs {}, left {} vs {}",
                ids_a.0, ids_b.0, ids_a.1, ids_b.1
            ),
        });
    }
    let z_a = classical_z_by_rays(params, t, contour_a, quad_tol)?;
    let z_b = classical_z_by_rays(params, t, contour_b, quad_tol)?;
    Ok(((z_a - z_b) / z_a).abs())
}

/// The wrong-sign-quartic change of variables. `alpha = 16` matches the
/// parametrization `z = -2i sqrt(1 + ix)` of the original `p_z^2 - z^4`
/// problem.
#[derive(Debug, Clone, Copy)]
pub struct QuarticMap {
    pub alpha: f64,
}

impl Default for QuarticMap {
    fn default() -> Self {
        QuarticMap { alpha: 16.0 }
    }
}

impl QuarticMap {
    pub fn z(&self, x: f64) -> Complex64 {
        Complex64::new(0.0, -2.0) * Complex64::new(1.0, x).sqrt()
    }

    pub fn p_z(&self, x: f64, p: f64) -> Complex64 {
        Complex64::new(1.0, x).sqrt() * p
    }

    /// `xi = x + i (1 - p^2 / (2 alpha))`.
    pub fn xi(&self, x: f64, p: f64) -> Complex64 {
        Complex64::new(x, 1.0 - p * p / (2.0 * self.alpha))
    }

    /// `pi = p`.
    pub fn pi_var(&self, p: f64) -> f64 {
        p
    }

    /// Equivalent Hermitian Hamiltonian `h = p^4/(4a) - p/2 + a x^2`;
    /// the `-p/2` anomaly term is optional.
    pub fn h(&self, x: f64, p: f64, include_anomaly: bool) -> f64 {
        let quartic = p.powi(4) / (4.0 * self.alpha) + self.alpha * x * x;
        if include_anomaly {
            quartic - 0.5 * p
        } else {
            quartic
        }
    }

    /// Non-Hermitian form `H(x,p) = (1 + ix) p^2 - p/2 - a (1 + ix)^2`
    /// (classical variables, so the anticommutator is plain multiplication).
    pub fn big_h_xp(&self, x: f64, p: f64) -> Complex64 {
        let w = Complex64::new(1.0, x);
        w * (p * p) - 0.5 * p - self.alpha * w * w
    }

    /// Same form in the transformed variables:
    /// `H(xi, pi) = (1 + i xi) pi^2 - pi/2 - a (1 + i xi)^2`.
    pub fn big_h_xi_pi(&self, xi: Complex64, pi: Complex64) -> Complex64 {
        let w = Complex64::new(1.0, 0.0) + Complex64::new(0.0, 1.0) * xi;
        w * pi * pi - 0.5 * pi - self.alpha * w * w
    }
}

/// Closed form of the real phase-space integral over `h` without the
/// anomaly term: `4^{1/4} alpha^{-1/4} Gamma(5/4) / (sqrt(pi) beta^{3/4})`.
pub fn quartic_closed_form(alpha: f64, t: f64) -> Result<f64> {
    let beta = 1.0 / t;
    Ok((4.0 / alpha).powf(0.25) * gamma(1.25)? / (PI.sqrt() * beta.powf(0.75)))
}

/// Real phase-space integral `(1/2pi) int int e^{-beta h(x,p)} dx dp` with
/// the Gaussian x-integral done analytically and the p-integral by
/// adaptive quadrature, truncated where the exponent reaches 40.
pub fn quartic_hermitian_z_with(
    map: &QuarticMap,
    t: f64,
    include_anomaly: bool,
    quad_tol: f64,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain("temperature must be positive"));
    }
    let beta = 1.0 / t;
    let alpha = map.alpha;

    // Bound |p| where the exponent passes the truncation threshold.
    let mut p_max = (4.0 * alpha * TRUNC_EXPONENT / beta).powf(0.25);
    for _ in 0..3 {
        p_max = (4.0 * alpha / beta * (TRUNC_EXPONENT + 0.5 * beta * p_max)).powf(0.25);
    }
    p_max *= 1.05;

    let p_int = quad::integrate(
        |p| (-beta * map.h(0.0, p, include_anomaly)).exp(),
        -p_max,
        p_max,
        quad_tol,
    )?;
    Ok(p_int.value * (PI / (beta * alpha)).sqrt() / (2.0 * PI))
}

/// Paper-normalization quartic integral (`alpha = 16`).
pub fn quartic_hermitian_z(t: f64, include_anomaly: bool, quad_tol: f64) -> Result<f64> {
    quartic_hermitian_z_with(&QuarticMap::default(), t, include_anomaly, quad_tol)
}

/// One point of the parametric `(xi, pi)` surface.
#[derive(Debug, Clone, Copy)]
pub struct ParametricSample {
    pub x: f64,
    pub p: f64,
    pub xi: Complex64,
    pub pi: f64,
    pub h: Complex64,
}

/// The contour in complex `(xi, pi)` space sampled over real `(x, p)` grids,
/// stored row-major in `x`.
#[derive(Debug, Clone)]
pub struct ParametricContour {
    pub nx: usize,
    pub np: usize,
    pub samples: Vec<ParametricSample>,
}

impl ParametricContour {
    pub fn at(&self, i: usize, j: usize) -> &ParametricSample {
        &self.samples[i * self.np + j]
    }
}

/// Sample `xi = x + i(1 - p^2/(2a))`, `pi = p` and `H(xi, pi)` over the
/// given real grids.
pub fn quartic_parametric_contour(
    map: &QuarticMap,
    x_grid: &[f64],
    p_grid: &[f64],
) -> ParametricContour {
    let mut samples = Vec::with_capacity(x_grid.len() * p_grid.len());
    for &x in x_grid {
        for &p in p_grid {
            let xi = map.xi(x, p);
            let pi = Complex64::new(map.pi_var(p), 0.0);
            samples.push(ParametricSample {
                x,
                p,
                xi,
                pi: p,
                h: map.big_h_xi_pi(xi, pi),
            });
        }
    }
    ParametricContour {
        nx: x_grid.len(),
        np: p_grid.len(),
        samples,
    }
}

/// Quadrature weights: composite Simpson on a uniform odd-length grid,
/// trapezoid otherwise.
fn grid_weights(grid: &[f64]) -> Vec<f64> {
    let n = grid.len();
    if n < 2 {
        return vec![0.0; n];
    }
    let h = grid[1] - grid[0];
    let uniform = grid
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() < 1e-12 * h.abs().max(1.0));
    let mut w = vec![0.0; n];
    if uniform && n % 2 == 1 {
        w[0] = h / 3.0;
        w[n - 1] = h / 3.0;
        for (i, wi) in w.iter_mut().enumerate().take(n - 1).skip(1) {
            *wi = if i % 2 == 1 { 4.0 * h / 3.0 } else { 2.0 * h / 3.0 };
        }
    } else {
        for i in 0..n - 1 {
            let hi = grid[i + 1] - grid[i];
            w[i] += 0.5 * hi;
            w[i + 1] += 0.5 * hi;
        }
    }
    w
}

/// `e^{-beta H(xi, pi)}` summed over the parametric surface with the flat
/// `dx dp / 2 pi` measure. By the change-of-variables identity this
/// reproduces the anomaly-on `h` integral.
pub fn quartic_parametric_z(
    map: &QuarticMap,
    beta: f64,
    x_grid: &[f64],
    p_grid: &[f64],
) -> Complex64 {
    let contour = quartic_parametric_contour(map, x_grid, p_grid);
    let wx = grid_weights(x_grid);
    let wp = grid_weights(p_grid);
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..contour.nx {
        for j in 0..contour.np {
            total += (-(contour.at(i, j).h * beta)).exp() * (wx[i] * wp[j]);
        }
    }
    total / (2.0 * PI)
}
