//! Fixed inertial sun direction and cylindrical Earth shadow.

use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SunSample {
    /// Unit vector from the spacecraft toward the Sun, inertial axes.
    pub direction: Vec3,
    pub in_eclipse: bool,
}

/// `sun` need not be normalized.
pub fn sun_direction(position: &Vec3, sun: &Vec3, earth_radius_m: f64) -> SunSample {
    let s = sun.try_normalize().unwrap_or_else(Vec3::x_axis);
    let along = position.dot(&s);
    let perp = (*position - s * along).norm();
    SunSample { direction: s, in_eclipse: along < 0.0 && perp < earth_radius_m }
}

#[cfg(test)]
mod tests {
    use super::super::orbit::{propagate_orbit, OrbitConfig};
    use super::super::PhysicalConstants;
    use super::*;

    #[test]
    fn sunlit_and_shadowed_sides() {
        let re = 6.371e6;
        let sun = Vec3::x_axis();
        assert!(!sun_direction(&Vec3::new(6.8e6, 0.0, 0.0), &sun, re).in_eclipse);
        assert!(sun_direction(&Vec3::new(-6.8e6, 1e5, 0.0), &sun, re).in_eclipse);
        // anti-sun but outside the shadow cylinder
        assert!(!sun_direction(&Vec3::new(-1e6, 6.7e6, 0.0), &sun, re).in_eclipse);
    }

    #[test]
    fn eclipse_fraction_with_sun_in_orbit_plane() {
        // the node line lies along inertial x for RAAN 0, so +x is in the orbit plane
        let k = PhysicalConstants::default();
        let cfg = OrbitConfig::default();
        let period = cfg.period_s(&k);
        let n = 100_000;
        let dark = (0..n)
            .filter(|i| {
                let s = propagate_orbit(&cfg, &k, period * *i as f64 / n as f64);
                sun_direction(&s.position, &Vec3::x_axis(), k.earth_radius_m).in_eclipse
            })
            .count();
        let frac = dark as f64 / n as f64;
        // shadow half-angle asin(R/r)
        let expect = (k.earth_radius_m / cfg.radius_m(&k)).asin() / std::f64::consts::PI;
        assert!((frac - expect).abs() < 1e-3);
        assert!((frac - 0.38).abs() < 0.03, "{frac}");
    }
}
