//! Interpolation families for the teleport Hamiltonian and the angle law of
//! the controlled evolutions. All derivatives are analytic.

use std::f64::consts::{E, FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SalError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Linear,
    Trig,
    Exponential,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Linear, Family::Trig, Family::Exponential];

    pub fn name(self) -> &'static str {
        match self {
            Family::Linear => "linear",
            Family::Trig => "trig",
            Family::Exponential => "exp",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = SalError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" | "lin" => Ok(Family::Linear),
            "trig" | "trigonometric" => Ok(Family::Trig),
            "exp" | "exponential" => Ok(Family::Exponential),
            other => Err(SalError::InvalidSpec(format!("unknown schedule family `{other}`"))),
        }
    }
}

/// Weights `(eta_i, eta_f)` and their s-derivatives at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScheduleValue {
    pub eta_i: f64,
    pub eta_f: f64,
    pub d_eta_i: f64,
    pub d_eta_f: f64,
}

impl ScheduleValue {
    /// `sqrt(eta_i^2 + eta_f^2)`; the teleport gap is `2 ω chi`.
    pub fn chi(&self) -> f64 {
        self.eta_i.hypot(self.eta_f)
    }
}

/// Interpolation pair `(eta_i(s), eta_f(s))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Schedule {
    family: Family,
}

impl Schedule {
    pub fn family(&self) -> Family {
        self.family
    }

    /// Evaluates the weights. Formulas are entire functions of `s`, so points
    /// slightly outside `[0, 1]` are valid (finite-difference stencils use them).
    pub fn eval(&self, s: f64) -> ScheduleValue {
        match self.family {
            Family::Linear => ScheduleValue { eta_i: 1.0 - s, eta_f: s, d_eta_i: -1.0, d_eta_f: 1.0 },
            Family::Trig => {
                let (sn, cs) = (FRAC_PI_2 * s).sin_cos();
                ScheduleValue { eta_i: cs, eta_f: sn, d_eta_i: -FRAC_PI_2 * sn, d_eta_f: FRAC_PI_2 * cs }
            }
            Family::Exponential => {
                let norm = E - 1.0;
                let a = (1.0 - s).exp();
                let b = s.exp();
                ScheduleValue { eta_i: (a - 1.0) / norm, eta_f: (b - 1.0) / norm, d_eta_i: -a / norm, d_eta_f: b / norm }
            }
        }
    }

    pub fn chi(&self, s: f64) -> f64 {
        self.eval(s).chi()
    }

    /// Minimum of `chi` over a uniform grid with `points` nodes.
    pub fn min_chi(&self, points: usize) -> (f64, f64) {
        let n = points.max(2);
        (0..n)
            .map(|k| k as f64 / (n - 1) as f64)
            .map(|s| (s, self.chi(s)))
            .fold((0.0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
    }
}

/// Builds the schedule of a family.
pub fn make_schedule(family: Family) -> Schedule {
    Schedule { family }
}

/// Angle law `theta(s) = theta0 * s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleLaw {
    theta0: f64,
}

impl AngleLaw {
    pub fn new(theta0: f64) -> Result<Self> {
        if !(theta0 > 0.0 && theta0 <= PI) {
            return Err(SalError::InvalidSpec(format!("theta0 must lie in (0, π], got {theta0}")));
        }
        Ok(Self { theta0 })
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn theta(&self, s: f64) -> f64 {
        self.theta0 * s
    }

    pub fn dtheta(&self) -> f64 {
        self.theta0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_midpoint() {
        let v = make_schedule(Family::Linear).eval(0.5);
        assert_eq!((v.eta_i, v.eta_f), (0.5, 0.5));
    }

    #[test]
    fn trig_endpoint() {
        let v = make_schedule(Family::Trig).eval(1.0);
        assert!(v.eta_i.abs() < 1e-15);
        assert_eq!(v.eta_f, 1.0);
    }

    #[test]
    fn exponential_midpoint() {
        let v = make_schedule(Family::Exponential).eval(0.5);
        let expect = (E.sqrt() - 1.0) / (E - 1.0);
        assert!((v.eta_i - expect).abs() < 1e-15 && (v.eta_f - expect).abs() < 1e-15);
        assert!((v.eta_i - 0.37754).abs() < 1e-5);
    }

    #[test]
    fn boundary_conditions() {
        for fam in Family::ALL {
            let sch = make_schedule(fam);
            let (a, b) = (sch.eval(0.0), sch.eval(1.0));
            assert!((a.eta_i - 1.0).abs() <= 1e-12 && a.eta_f.abs() <= 1e-12, "{fam}");
            assert!(b.eta_i.abs() <= 1e-12 && (b.eta_f - 1.0).abs() <= 1e-12, "{fam}");
        }
    }

    #[test]
    fn derivatives_match_differences() {
        let h = 1e-6;
        for fam in Family::ALL {
            let sch = make_schedule(fam);
            for k in 0..=1000 {
                let s = k as f64 / 1000.0;
                let v = sch.eval(s);
                let (p, m) = (sch.eval(s + h), sch.eval(s - h));
                assert!(((p.eta_i - m.eta_i) / (2.0 * h) - v.d_eta_i).abs() < 1e-6);
                assert!(((p.eta_f - m.eta_f) / (2.0 * h) - v.d_eta_f).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn linear_gap_minimum() {
        let (s, chi) = make_schedule(Family::Linear).min_chi(1001);
        assert!((s - 0.5).abs() < 1e-12);
        assert!((chi - 0.5f64.sqrt()).abs() < 1e-12);
        for fam in Family::ALL {
            assert!(make_schedule(fam).min_chi(1001).1 > 0.0);
        }
    }

    #[test]
    fn angle_law_bounds() {
        assert!(AngleLaw::new(0.0).is_err());
        assert!(AngleLaw::new(3.2).is_err());
        let law = AngleLaw::new(PI).unwrap();
        assert_eq!(law.theta(0.0), 0.0);
        assert_eq!(law.theta(1.0), PI);
    }

    #[test]
    fn family_parsing() {
        assert_eq!("exp".parse::<Family>().unwrap(), Family::Exponential);
        assert!("cubic".parse::<Family>().is_err());
    }
}
