//! Exact eigenvalues by shooting.
//!
//! The eigenvalue equation `-psi'' + V psi = E psi` is integrated inward
//! from large radius with the decaying WKB initial condition. For even real
//! potentials (`eps = 0` or the Hermitian `|x|^N` reference) this happens on
//! the real axis with parity matching at the origin. Otherwise two rays are
//! used, placed at the centers of the quantum Stokes wedges in the lower
//! half-plane, and eigenvalues are roots of the Wronskian of the left and
//! right solutions at the origin.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::ode;
use crate::oscillator::OscillatorParams;
use crate::quad;
use crate::spectrum::{wkb_energy, WkbOrder};

/// Complex wavefunction state on a ray.
#[derive(Debug, Clone, Copy)]
pub struct ShootingState {
    pub psi: Complex64,
    /// Derivative with respect to the arc-length parameter along the ray.
    pub dpsi: Complex64,
    pub r: f64,
    /// Accumulated renormalization exponent (natural log).
    pub log_scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A ray `x = r e^{-i theta}` (right) or its PT image `x = -conj(r e^{-i theta})`
/// (left), truncated at `r_max`. `theta` is measured downward from the
/// positive real axis.
#[derive(Debug, Clone, Copy)]
pub struct RaySpec {
    pub theta: f64,
    pub r_max: f64,
    pub side: Side,
}

impl RaySpec {
    pub fn right(theta: f64, r_max: f64) -> Self {
        RaySpec {
            theta,
            r_max,
            side: Side::Right,
        }
    }

    pub fn left(theta: f64, r_max: f64) -> Self {
        RaySpec {
            theta,
            r_max,
            side: Side::Left,
        }
    }

    /// Angle `t` such that points on the ray are `x = r e^{-i t}`.
    /// The left ray satisfies `left = -conj(right)`.
    pub fn theta_coordinate(&self) -> f64 {
        match self.side {
            Side::Right => self.theta,
            Side::Left => PI - self.theta,
        }
    }

    /// Unit tangent `dx/dr`.
    pub fn direction(&self) -> Complex64 {
        Complex64::from_polar(1.0, -self.theta_coordinate())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EigenResult {
    pub n: usize,
    pub energy: f64,
    /// |normalized matching function| at the accepted root.
    pub wronskian_residual: f64,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct ShootingConfig {
    /// Local relative error target of the ODE integrator.
    pub ode_tol: f64,
    /// Relative energy tolerance; also the residual target of the
    /// matching function at accepted roots.
    pub root_tol: f64,
    /// Required inward WKB decay exponent at `r_max`.
    pub decay_exponent: f64,
    /// Extra multiplier on the chosen `r_max` (stability studies).
    pub r_max_factor: f64,
    /// Cap on the interior growth exponent accumulated between the origin
    /// and the turning radius. One WKB branch dominates the other by
    /// `exp(2 g)` there, so `g` much above 15 drowns the eigenvalue signal
    /// in double-precision noise; the ray angle is reduced below the wedge
    /// center (towards the oscillatory real-axis direction) until the
    /// budget is met.
    pub max_interior_growth: f64,
    pub e_cap: f64,
    pub max_levels: usize,
    /// Initial-step hint: first trial step is `r_max / steps_hint`.
    pub steps_hint: usize,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        ShootingConfig {
            ode_tol: 1e-10,
            root_tol: 1e-8,
            decay_exponent: 35.0,
            r_max_factor: 1.0,
            max_interior_growth: 12.0,
            e_cap: 1e6,
            max_levels: 200,
            steps_hint: 1000,
        }
    }
}

/// Center of the right quantum Stokes wedge, measured below the real axis:
/// `theta_q = eps pi / (2 (N + 2))`. Zero for even real potentials.
///
/// This is where `exp(-(2/(N+2)) x^{(N+2)/2} i^{eps/2})` decays fastest
/// along `x = r e^{-i theta}`.
pub fn quantum_wedge_center(params: &OscillatorParams) -> f64 {
    params.eps_eff() * PI / (2.0 * (params.n() + 2.0))
}

/// Inward WKB decay exponent accumulated between the turning radius and
/// `r_max`: `int |Re sqrt(V - E) dx/dr| dr`.
pub fn decay_exponent(
    params: &OscillatorParams,
    energy: f64,
    theta_coordinate: f64,
    r_max: f64,
) -> Result<f64> {
    let r_turn = energy.powf(1.0 / params.n());
    if r_max <= r_turn {
        return Ok(0.0);
    }
    let dir = Complex64::from_polar(1.0, -theta_coordinate);
    let est = quad::integrate(
        |r| {
            let v = params.potential_on_ray(theta_coordinate, r);
            (((v - energy).sqrt()) * dir).re.abs()
        },
        r_turn,
        r_max,
        1e-6,
    )?;
    Ok(est.value)
}

/// Growth exponent accumulated inside the turning radius,
/// `int_0^{r_t} |Re sqrt(V - E) dx/dr| dr`. Zero on the real axis for even
/// real potentials; grows like `E^{1/2 + 1/N}` on tilted rays.
pub fn interior_growth(
    params: &OscillatorParams,
    energy: f64,
    theta_coordinate: f64,
    r_turn: f64,
) -> Result<f64> {
    let dir = Complex64::from_polar(1.0, -theta_coordinate);
    let est = quad::integrate(
        |r| {
            let v = params.potential_on_ray(theta_coordinate, r);
            (((v - energy).sqrt()) * dir).re.abs()
        },
        0.0,
        r_turn,
        1e-6,
    )?;
    Ok(est.value)
}

/// Ray angle for the two-sided shooting at this energy: the quantum wedge
/// center when affordable, otherwise the largest angle whose interior
/// growth exponent stays within budget (the signal in the matching
/// function scales as `exp(-2 g)`).
pub fn choose_ray_angle(
    params: &OscillatorParams,
    energy: f64,
    cfg: &ShootingConfig,
) -> Result<f64> {
    if params.is_real_potential() {
        return Ok(0.0);
    }
    let theta_q = quantum_wedge_center(params);
    let r_turn = energy.powf(1.0 / params.n());
    let budget = cfg.max_interior_growth;
    if interior_growth(params, energy, theta_q, r_turn)? <= budget {
        return Ok(theta_q);
    }
    let mut lo = 1e-3 * theta_q;
    let mut hi = theta_q;
    if interior_growth(params, energy, lo, r_turn)? > budget {
        return Err(Error::domain(format!(
            "energy {energy:.3e} too large for double-precision two-ray shooting"
        )));
    }
    while hi - lo > 1e-3 * theta_q {
        let mid = 0.5 * (lo + hi);
        if interior_growth(params, energy, mid, r_turn)? <= budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Smallest truncation radius (up to a multiplicative search step) whose
/// decay exponent meets the configured target.
pub fn choose_r_max(
    params: &OscillatorParams,
    energy: f64,
    theta_coordinate: f64,
    cfg: &ShootingConfig,
) -> Result<f64> {
    let r_turn = energy.powf(1.0 / params.n());
    let mut r_max = (r_turn * 1.2).max(r_turn + 1.0);
    for _ in 0..200 {
        if decay_exponent(params, energy, theta_coordinate, r_max)? >= cfg.decay_exponent {
            return Ok(r_max * cfg.r_max_factor);
        }
        r_max *= 1.3;
    }
    Err(Error::domain(
        "could not reach the required decay exponent; potential too flat",
    ))
}

/// Integrate the wavefunction inward from `ray.r_max` to the origin with the
/// decaying WKB initial condition `psi = 1`, `dpsi/dr = -sqrt(V - E) dx/dr`
/// (branch chosen so the solution decays outward).
pub fn integrate_ray(
    params: &OscillatorParams,
    energy: f64,
    ray: &RaySpec,
    steps: usize,
    cfg: &ShootingConfig,
) -> Result<ShootingState> {
    if !(energy > 0.0 && energy <= cfg.e_cap) {
        return Err(Error::domain(format!(
            "shooting energy must lie in (0, {:.3e}], got {energy}",
            cfg.e_cap
        )));
    }
    let tc = ray.theta_coordinate();
    let achieved = decay_exponent(params, energy, tc, ray.r_max)?;
    if achieved < cfg.decay_exponent {
        return Err(Error::RMaxInsufficient {
            r_max: ray.r_max,
            achieved,
            required: cfg.decay_exponent,
        });
    }

    let dir = ray.direction();
    let v_end = params.potential_on_ray(tc, ray.r_max);
    let mut s = (v_end - energy).sqrt();
    if (s * dir).re < 0.0 {
        s = -s;
    }
    let psi0 = Complex64::new(1.0, 0.0);
    let dpsi0 = -s * dir;

    let q = |r: f64| dir * dir * (params.potential_on_ray(tc, r) - energy);
    let initial_step = ray.r_max / steps.max(1) as f64;
    let st = ode::integrate_second_order(q, ray.r_max, 0.0, psi0, dpsi0, cfg.ode_tol, initial_step)?;
    Ok(ShootingState {
        psi: st.psi,
        dpsi: st.dpsi,
        r: 0.0,
        log_scale: st.log_scale,
    })
}

/// Normalized matching function value at one energy.
struct Matching {
    f: f64,
    im_resid: f64,
}

fn matching_value(
    params: &OscillatorParams,
    energy: f64,
    theta: f64,
    r_max: f64,
    even_parity: Option<bool>,
    cfg: &ShootingConfig,
) -> Result<Matching> {
    match even_parity {
        Some(even) => {
            // Real even potential: integrate the right half-axis and apply
            // the parity condition at the origin.
            let ray = RaySpec::right(0.0, r_max);
            let st = integrate_ray(params, energy, &ray, cfg.steps_hint, cfg)?;
            let norm = (st.psi.norm_sqr() + st.dpsi.norm_sqr()).sqrt().max(1e-300);
            let val = if even { st.dpsi } else { st.psi } / norm;
            Ok(Matching {
                f: val.re,
                im_resid: val.im.abs(),
            })
        }
        None => {
            let right = RaySpec::right(theta, r_max);
            let left = RaySpec::left(theta, r_max);
            let st_r = integrate_ray(params, energy, &right, cfg.steps_hint, cfg)?;
            let st_l = integrate_ray(params, energy, &left, cfg.steps_hint, cfg)?;
            // Wronskian in x: psi_L psi_R' - psi_R psi_L', derivatives taken
            // with respect to x. The arbitrary real renormalization scales
            // cancel in the normalized value.
            let dpsi_r_x = st_r.dpsi / right.direction();
            let dpsi_l_x = st_l.dpsi / left.direction();
            let t1 = st_l.psi * dpsi_r_x;
            let t2 = st_r.psi * dpsi_l_x;
            let denom = (t1.norm() + t2.norm()).max(1e-300);
            let w = (t1 - t2) / denom;
            Ok(Matching {
                f: w.re,
                im_resid: w.im.abs(),
            })
        }
    }
}

/// Locate the `n`-th eigenvalue, seeded and bracketed by second-order WKB.
pub fn eigenvalue(params: &OscillatorParams, n: usize, cfg: &ShootingConfig) -> Result<EigenResult> {
    if n >= cfg.max_levels {
        return Err(Error::LevelUnavailable {
            n,
            limit: cfg.max_levels,
        });
    }
    let e_seed = wkb_energy(params, n, WkbOrder::Second)?.energy;
    let e_next = wkb_energy(params, n + 1, WkbOrder::Second)?.energy;
    let gap_hi = e_next - e_seed;
    let gap_lo = if n > 0 {
        e_seed - wkb_energy(params, n - 1, WkbOrder::Second)?.energy
    } else {
        gap_hi
    };
    let mut lo = e_seed - 0.5 * gap_lo;
    let hi = e_seed + 0.5 * gap_hi;
    if lo <= 0.0 {
        lo = 0.04 * e_seed;
    }

    let even_parity = if params.is_real_potential() {
        Some(n % 2 == 0)
    } else {
        None
    };
    let theta = choose_ray_angle(params, hi, cfg)?;
    let tc = if even_parity.is_some() { 0.0 } else { theta };
    let r_max = choose_r_max(params, hi, tc, cfg)?;

    let f = |e: f64| matching_value(params, e, theta, r_max, even_parity, cfg);

    // Bracket a sign change, scanning inside [lo, hi] if the endpoints agree.
    let m_lo = f(lo)?;
    let m_hi = f(hi)?;
    let (mut a, mut b, mut fa, mut fb) = (lo, hi, m_lo.f, m_hi.f);
    if fa * fb > 0.0 {
        let scan = 16;
        let mut prev = (lo, m_lo.f);
        let mut found = false;
        for i in 1..=scan {
            let x = lo + (hi - lo) * i as f64 / scan as f64;
            let m = f(x)?;
            if prev.1 * m.f <= 0.0 {
                a = prev.0;
                fa = prev.1;
                b = x;
                fb = m.f;
                found = true;
                break;
            }
            prev = (x, m.f);
        }
        if !found {
            return Err(Error::BracketFailure { n, lo, hi });
        }
    }

    // Bisection with secant acceleration.
    let mut x_prev = a;
    let mut f_prev = fa;
    let mut x_cur = b;
    let mut f_cur = fb;
    let mut root = 0.5 * (a + b);
    let mut residual = f64::INFINITY;
    let mut im_resid = f64::INFINITY;
    for it in 0..80 {
        let width_ok = (b - a) <= cfg.root_tol * b;
        if width_ok && residual <= cfg.root_tol {
            break;
        }
        let mut c = if (f_cur - f_prev).abs() > 1e-300 {
            x_cur - f_cur * (x_cur - x_prev) / (f_cur - f_prev)
        } else {
            0.5 * (a + b)
        };
        let pad = 1e-3 * (b - a);
        if it % 3 == 2 || !(c > a + pad && c < b - pad) {
            c = 0.5 * (a + b);
        }
        let m = f(c)?;
        if m.f.abs() < residual {
            root = c;
            residual = m.f.abs();
            im_resid = m.im_resid;
        }
        if fa * m.f <= 0.0 {
            b = c;
        } else {
            a = c;
            fa = m.f;
        }
        x_prev = x_cur;
        f_prev = f_cur;
        x_cur = c;
        f_cur = m.f;
    }

    if (b - a) > 100.0 * cfg.root_tol * b {
        return Err(Error::RootNonConvergence { n, lo: a, hi: b });
    }
    let converged = (b - a) <= cfg.root_tol * b && residual <= cfg.root_tol && im_resid < 1e-6;
    Ok(EigenResult {
        n,
        energy: root,
        wronskian_residual: residual,
        converged,
    })
}

/// First `n_max + 1` eigenvalues.
pub fn eigenvalues(
    params: &OscillatorParams,
    n_max: usize,
    cfg: &ShootingConfig,
) -> Result<Vec<EigenResult>> {
    (0..=n_max).map(|n| eigenvalue(params, n, cfg)).collect()
}
