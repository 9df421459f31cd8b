//! Globally adaptive Gauss–Kronrod quadrature (21-point rule).
//!
//! The worst interval (largest error estimate) is bisected until the summed
//! error estimate drops below the requested relative tolerance. A complex
//! variant integrates real and imaginary parts in one pass; the ray
//! integrals of the classical partition function need it.

use num_complex::Complex64;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// 10-point Gauss / 21-point Kronrod abscissae on [0, 1] side (symmetric).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const MAX_INTERVALS: usize = 8192;

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResultC {
    pub value: Complex64,
    pub abs_error: f64,
    pub intervals: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One Gauss–Kronrod 21 application on [a, b].
fn gk21<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    for j in 0..10 {
        let dx = half * XGK[j];
        let fsum = f(center - dx) + f(center + dx);
        kronrod += fsum * WGK[j];
        if j % 2 == 1 {
            gauss += fsum * WG[j / 2];
        }
    }
    kronrod *= half;
    gauss *= half;
    Panel {
        a,
        b,
        value: kronrod,
        error: (kronrod - gauss).norm(),
    }
}

/// Adaptive integration of a complex-valued integrand over [a, b].
pub fn integrate_complex<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<QuadResultC> {
    if !(rel_tol > 0.0) {
        return Err(Error::domain("quadrature tolerance must be positive"));
    }
    if a == b {
        return Ok(QuadResultC {
            value: Complex64::new(0.0, 0.0),
            abs_error: 0.0,
            intervals: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    let mut heap = BinaryHeap::new();
    heap.push(gk21(&f, lo, hi));
    let mut total: Complex64 = heap.peek().unwrap().value;
    let mut total_err = heap.peek().unwrap().error;

    while total_err > rel_tol * total.norm().max(1e-300) && heap.len() < MAX_INTERVALS {
        let worst = heap.pop().unwrap();
        if worst.b - worst.a < f64::EPSILON * (hi - lo) {
            // Cannot subdivide further; put it back and give up below.
            heap.push(worst);
            break;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk21(&f, worst.a, mid);
        let right = gk21(&f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    let achieved = total_err / total.norm().max(1e-300);
    if achieved > rel_tol && total_err > 1e-300 {
        return Err(Error::QuadratureNonConvergence {
            requested: rel_tol,
            achieved,
            intervals: heap.len(),
        });
    }
    Ok(QuadResultC {
        value: total * sign,
        abs_error: total_err,
        intervals: heap.len(),
    })
}

/// Adaptive integration of a real integrand over [a, b].
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<QuadResult> {
    let r = integrate_complex(|x| Complex64::new(f(x), 0.0), a, b, rel_tol)?;
    Ok(QuadResult {
        value: r.value.re,
        abs_error: r.abs_error,
        intervals: r.intervals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn quarter_circle() {
        let r = integrate(|x| (1.0 - x * x).sqrt(), 0.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(r.value, PI / 4.0, max_relative = 1e-10);
    }

    #[test]
    fn gaussian_moment() {
        // int_0^6 x^2 e^{-x^2} dx ~ sqrt(pi)/4 (tail < 1e-16)
        let r = integrate(|x| x * x * (-x * x).exp(), 0.0, 6.0, 1e-12).unwrap();
        assert_relative_eq!(r.value, PI.sqrt() / 4.0, max_relative = 1e-11);
    }

    #[test]
    fn oscillatory_complex() {
        // int_0^1 e^{i w x} dx = (e^{i w} - 1) / (i w)
        let w = 43.0;
        let r = integrate_complex(
            |x| Complex64::new(0.0, w * x).exp(),
            0.0,
            1.0,
            1e-11,
        )
        .unwrap();
        let expected = (Complex64::new(0.0, w).exp() - 1.0) / Complex64::new(0.0, w);
        assert!((r.value - expected).norm() < 1e-10);
    }

    #[test]
    fn reversed_limits_negate() {
        let fwd = integrate(|x| x.exp(), 0.0, 1.0, 1e-12).unwrap();
        let rev = integrate(|x| x.exp(), 1.0, 0.0, 1e-12).unwrap();
        assert_relative_eq!(fwd.value, -rev.value, max_relative = 1e-14);
    }

    #[test]
    fn zero_width_interval() {
        let r = integrate(|x| x, 2.0, 2.0, 1e-10).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn reports_nonconvergence() {
        // Nonintegrable 1/x endpoint singularity cannot converge.
        let r = integrate(|x| 1.0 / x, 0.0, 1.0, 1e-10);
        assert!(matches!(
            r,
            Err(Error::QuadratureNonConvergence { .. })
        ));
    }
}
