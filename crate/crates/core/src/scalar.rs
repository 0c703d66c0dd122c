//! Real scalar abstraction shared by the Hamiltonian, simulator, optimizer and metrics.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the numerical core is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used for literal constants.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Reduce into `[0, π)`.
    fn wrap_pi(self) -> Self {
        let pi = Self::PI();
        let r = self % pi;
        let r = if r < Self::zero() { r + pi } else { r };
        // `r + pi` can round up to exactly pi for tiny negative r
        if r >= pi {
            Self::zero()
        } else {
            r
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_pi_lands_in_half_open_interval() {
        let pi = std::f64::consts::PI;
        for x in [-7.0, -pi, -1e-18, 0.0, 1.0, pi, 2.5 * pi, 100.0] {
            let w = x.wrap_pi();
            assert!((0.0..pi).contains(&w), "{x} -> {w}");
            let k = ((x - w) / pi).round();
            assert!((x - w - k * pi).abs() < 1e-12);
        }
        assert_eq!((-1e-20f32).wrap_pi(), 0.0);
    }
}
