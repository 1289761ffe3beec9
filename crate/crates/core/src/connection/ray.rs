use std::f64::consts::TAU;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use super::ModelError;

/// The ray `{x·d : 0 < x < radius}` with `d = e^{2πi·turn}`.
///
/// The direction is kept as an exact fraction of a full turn in `[0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ray {
    turn: Ratio<i64>,
    radius: f64,
}

impl Ray {
    pub fn new(turn: Ratio<i64>, radius: f64) -> Result<Self, ModelError> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(ModelError::InvalidRay(format!("radius {radius} must be finite and positive")));
        }
        Ok(Ray { turn: normalize_turn(turn), radius })
    }

    /// Parses `p/q` or an integer as a fraction of a turn.
    pub fn parse_turn(text: &str) -> Result<Ratio<i64>, ModelError> {
        let bad = || ModelError::InvalidRay(format!("cannot read direction {text:?}; expected P/Q"));
        let t = text.trim();
        let r = match t.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: i64 = q.trim().parse().map_err(|_| bad())?;
                if q == 0 {
                    return Err(bad());
                }
                Ratio::new(p, q)
            }
            None => Ratio::from_integer(t.parse().map_err(|_| bad())?),
        };
        Ok(normalize_turn(r))
    }

    pub fn turn(&self) -> Ratio<i64> {
        self.turn
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn angle(&self) -> f64 {
        TAU * (*self.turn.numer() as f64) / (*self.turn.denom() as f64)
    }

    pub fn direction(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle())
    }

    pub fn point(&self, x: f64) -> Complex64 {
        self.direction() * x
    }
}

/// Reduces a turn into `[0, 1)`.
pub fn normalize_turn(t: Ratio<i64>) -> Ratio<i64> {
    let f = t.fract();
    if f.is_negative() {
        f + 1
    } else if f.is_zero() {
        Ratio::zero()
    } else {
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn turns_are_normalized() {
        assert_eq!(Ray::parse_turn("5/4").unwrap(), Ratio::new(1, 4));
        assert_eq!(Ray::parse_turn("-1/8").unwrap(), Ratio::new(7, 8));
        assert_eq!(Ray::parse_turn("0").unwrap(), Ratio::zero());
        assert!(Ray::parse_turn("1/0").is_err());
        assert!(Ray::parse_turn("north").is_err());
    }

    #[test]
    fn direction_of_quarter_turn() {
        let r = Ray::new(Ratio::new(1, 4), 1.0).unwrap();
        assert!((r.direction() - Complex64::i()).norm() < 1e-15);
        assert!(Ray::new(Ratio::new(1, 4), 0.0).is_err());
        assert!(Ray::new(Ratio::new(1, 4), f64::INFINITY).is_err());
    }
}
