//! Semicircular and free Poisson (Marchenko-Pastur) laws: densities and
//! moments by quadrature.
//!
//! Both continuous parts have square-root edges. Quadrature runs in the
//! angle `theta` of `x = center + radius * sin(theta)`, which turns the edge
//! factor `sqrt(radius^2 - (x - center)^2) dx` into `radius^2 cos^2(theta)
//! dtheta`. The `1/x` factor of the free Poisson density at rate one becomes
//! `(1 - sin theta) / 2` up to constants, so every integrand is bounded.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{check_range, Error, Result};
use crate::quadrature::integrate;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_QUADRATURE_MOMENT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Law {
    /// Centered semicircle of variance `t`.
    Semicircle(f64),
    /// Free Poisson law with rate `lambda`.
    FreePoisson(f64),
    /// Free Poisson law with rate `lambda`, shifted by `-lambda`.
    CenteredFreePoisson(f64),
}

impl Law {
    pub fn semicircle(t: f64) -> Result<Self> {
        positive(t).map(Law::Semicircle)
    }

    pub fn free_poisson(lambda: f64) -> Result<Self> {
        positive(lambda).map(Law::FreePoisson)
    }

    pub fn centered_free_poisson(lambda: f64) -> Result<Self> {
        positive(lambda).map(Law::CenteredFreePoisson)
    }

    pub fn parameter(&self) -> f64 {
        match *self {
            Law::Semicircle(p) | Law::FreePoisson(p) | Law::CenteredFreePoisson(p) => p,
        }
    }

    /// Mass of the atom, located at 0 before centering (at `-lambda` after).
    pub fn atom_mass(&self) -> f64 {
        match *self {
            Law::Semicircle(_) => 0.0,
            Law::FreePoisson(l) | Law::CenteredFreePoisson(l) => (1.0 - l).max(0.0),
        }
    }

    pub fn atom_location(&self) -> f64 {
        match *self {
            Law::CenteredFreePoisson(l) => -l,
            _ => 0.0,
        }
    }

    /// Closed support interval of the continuous part.
    pub fn support(&self) -> (f64, f64) {
        let (center, radius) = self.arc();
        let shift = self.shift();
        (center - radius - shift, center + radius - shift)
    }

    /// Center and radius of the continuous part before centering.
    fn arc(&self) -> (f64, f64) {
        match *self {
            Law::Semicircle(t) => (0.0, 2.0 * t.sqrt()),
            Law::FreePoisson(l) | Law::CenteredFreePoisson(l) => (1.0 + l, 2.0 * l.sqrt()),
        }
    }

    fn shift(&self) -> f64 {
        match *self {
            Law::CenteredFreePoisson(l) => l,
            _ => 0.0,
        }
    }

    /// Density of the continuous part at `x`, zero outside the support. For
    /// free Poisson rates below one the continuous part has total mass
    /// `lambda`, the atom carrying the rest.
    pub fn density(&self, x: f64) -> f64 {
        let y = x + self.shift();
        let (center, radius) = self.arc();
        let gap = radius * radius - (y - center) * (y - center);
        if gap <= 0.0 {
            return 0.0;
        }
        match *self {
            Law::Semicircle(t) => gap.sqrt() / (2.0 * PI * t),
            _ => {
                if y <= 0.0 {
                    0.0
                } else {
                    gap.sqrt() / (2.0 * PI * y)
                }
            }
        }
    }

    /// `int x^m law(dx)`, including the atom.
    pub fn quadrature_moment(&self, m: usize, tol: f64) -> Result<f64> {
        check_range("m", m, 0, MAX_QUADRATURE_MOMENT)?;
        if tol.is_nan() || tol < 1e-12 {
            return Err(Error::Domain(format!("tolerance {tol} below 1e-12")));
        }
        let (center, radius) = self.arc();
        let shift = self.shift();
        let exponent = m as i32;
        let integrand = |theta: f64| {
            let (s, c) = theta.sin_cos();
            let y = center + radius * s;
            let weight = radius * radius * c * c;
            match *self {
                Law::Semicircle(t) => y.powi(exponent) * weight / (2.0 * PI * t),
                _ => {
                    if y <= 0.0 {
                        return 0.0;
                    }
                    (y - shift).powi(exponent) * weight / (2.0 * PI * y)
                }
            }
        };
        let continuous = integrate(integrand, -FRAC_PI_2, FRAC_PI_2, tol)?.value;
        let atom = self.atom_mass() * self.atom_location().powi(exponent);
        Ok(continuous + atom)
    }
}

fn positive(p: f64) -> Result<f64> {
    if p > 0.0 && p.is_finite() {
        Ok(p)
    } else {
        Err(Error::Domain(format!("law parameter must be positive, got {p}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semicircle_density_values() {
        let law = Law::semicircle(1.0).unwrap();
        assert!((law.density(0.0) - 1.0 / PI).abs() < 1e-15);
        let t = 2.5;
        let law = Law::semicircle(t).unwrap();
        assert_eq!(law.density(2.0 * t.sqrt()), 0.0);
        assert_eq!(law.density(-2.0 * t.sqrt()), 0.0);
        assert_eq!(law.density(10.0), 0.0);
    }

    #[test]
    fn rate_one_density_blows_up_like_inverse_sqrt() {
        // Near 0: sqrt(4 - (x - 2)^2) / (2 pi x) ~ sqrt(4x) / (2 pi x) = 1 / (pi sqrt x).
        let law = Law::free_poisson(1.0).unwrap();
        for x in [1e-4, 1e-6, 1e-8] {
            let scaled = law.density(x) * x.sqrt();
            assert!((scaled - 1.0 / PI).abs() < 1e-3, "{scaled}");
        }
    }

    #[test]
    fn supports_and_atoms() {
        let law = Law::free_poisson(0.25).unwrap();
        assert_eq!(law.atom_mass(), 0.75);
        let (lo, hi) = law.support();
        assert!((lo - 0.25).abs() < 1e-15 && (hi - 2.25).abs() < 1e-15);
        assert_eq!(Law::free_poisson(4.0).unwrap().atom_mass(), 0.0);
        let c = Law::centered_free_poisson(0.25).unwrap();
        assert_eq!(c.atom_location(), -0.25);
        assert_eq!(Law::semicircle(4.0).unwrap().support(), (-4.0, 4.0));
    }

    #[test]
    fn normalization() {
        for law in [
            Law::Semicircle(0.5),
            Law::FreePoisson(0.5),
            Law::FreePoisson(1.0),
            Law::FreePoisson(2.0),
            Law::CenteredFreePoisson(0.3),
        ] {
            let mass = law.quadrature_moment(0, DEFAULT_TOL).unwrap();
            assert!((mass - 1.0).abs() < 1e-10, "{law:?}: {mass}");
        }
    }

    #[test]
    fn fourth_moments() {
        let t = 1.7;
        let m4 = Law::Semicircle(t).quadrature_moment(4, DEFAULT_TOL).unwrap();
        assert!((m4 - 2.0 * t * t).abs() < 1e-10);
        let z = Law::CenteredFreePoisson(3.0);
        assert!(z.quadrature_moment(1, DEFAULT_TOL).unwrap().abs() < 1e-10);
        assert!((z.quadrature_moment(4, DEFAULT_TOL).unwrap() - 21.0).abs() < 1e-8);
    }

    #[test]
    fn argument_checks() {
        assert!(Law::semicircle(0.0).is_err());
        assert!(Law::free_poisson(-1.0).is_err());
        assert!(Law::Semicircle(1.0).quadrature_moment(11, DEFAULT_TOL).is_err());
        assert!(Law::Semicircle(1.0).quadrature_moment(2, 1e-13).is_err());
    }
}
