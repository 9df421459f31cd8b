use ptosc::shoot::{choose_r_max, integrate_ray, interior_growth, RaySpec, ShootingConfig};
use ptosc::OscillatorParams;

fn main() {
    let p = OscillatorParams::new(1, 2.0).unwrap();
    let cfg = ShootingConfig::default();
    let e_center = 194.6145;
    for theta in [0.5236, 0.30, 0.167] {
        let rt = (e_center as f64).powf(0.25);
        let g = interior_growth(&p, e_center, theta, rt).unwrap();
        let r_max = choose_r_max(&p, e_center + 7.0, theta, &cfg).unwrap();
        println!("--- theta = {theta}: interior growth g = {g:.2}, r_max = {r_max:.2}");
        // check mirror symmetry and W structure
        for i in 0..=24 {
            let e = 188.0 + i as f64 * 0.5;
            let right = RaySpec::right(theta, r_max);
            let left = RaySpec::left(theta, r_max);
            let sr = integrate_ray(&p, e, &right, 1000, &cfg).unwrap();
            let sl = integrate_ray(&p, e, &left, 1000, &cfg).unwrap();
            let mirror_dev = ((sl.psi - sr.psi.conj()).norm()) / sr.psi.norm();
            let t1 = sl.psi * (sr.dpsi / right.direction());
            let t2 = sr.psi * (sl.dpsi / left.direction());
            let w = (t1 - t2) / (t1.norm() + t2.norm());
            if i % 2 == 0 {
                println!("E={e:8.2}  Wn={:+.3e}  Im={:+.1e}  mirror_dev={mirror_dev:.1e}", w.re, w.im);
            }
        }
    }
}
