//! Smooth compactly supported test functions and bumps.

use num_complex::Complex64;

/// A smooth compactly supported weight in (0, ∞), as consumed by the
/// transform and summation layers.
pub trait Window {
    fn support(&self) -> (f64, f64);
    fn eval(&self, x: f64) -> Complex64;
    /// Upper bound on |dφ/dx / φ|-type phase rate, for oscillation-aware
    /// quadrature panel sizing. 0 for non-oscillating windows.
    fn phase_rate(&self) -> f64 {
        0.0
    }
}

/// Smooth step: 0 for u ≤ 0, 1 for u ≥ 1, C^∞ in between.
fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / u).exp();
        let b = (-1.0 / (1.0 - u)).exp();
        a / (a + b)
    }
}

/// C^∞ bump exp(−1/(u(1−u))) on [N, 2N], u = (x−N)/N, vanishing outside.
#[derive(Debug, Clone, Copy)]
pub struct BumpSpec {
    /// Center scale N; support is [N, 2N].
    pub scale: f64,
}

impl BumpSpec {
    pub fn new(scale: f64) -> Self {
        assert!(scale > 0.0);
        BumpSpec { scale }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.scale, 2.0 * self.scale)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let u = (x - self.scale) / self.scale;
        if u <= 0.0 || u >= 1.0 {
            0.0
        } else {
            (-1.0 / (u * (1.0 - u))).exp()
        }
    }
}

/// Test function for the transform layer: supported on [X, 2X], rising and
/// falling over a width X/Z (so ‖φ^{(j)}‖ ≈ (X/Z)^{−j}), with an optional
/// oscillation e^{iax}, a = ±1.
#[derive(Debug, Clone, Copy)]
pub struct TestFunction {
    /// X: the support is [X, 2X].
    pub support_scale: f64,
    /// Z ≥ 1: smoothness scale; Z = 1 is the plain bump profile.
    pub smoothness: f64,
    /// Some(±1.0) multiplies by e^{±ix}.
    pub oscillation: Option<f64>,
    /// Overall scalar factor (transforms are linear in it).
    pub amplitude: f64,
}

impl TestFunction {
    pub fn bump(x_scale: f64) -> Self {
        TestFunction {
            support_scale: x_scale,
            smoothness: 1.0,
            oscillation: None,
            amplitude: 1.0,
        }
    }

    pub fn with_smoothness(x_scale: f64, z: f64) -> Self {
        assert!(z >= 1.0);
        TestFunction {
            support_scale: x_scale,
            smoothness: z,
            oscillation: None,
            amplitude: 1.0,
        }
    }

    pub fn oscillatory(x_scale: f64, sign: f64) -> Self {
        TestFunction {
            support_scale: x_scale,
            smoothness: 1.0,
            oscillation: Some(sign.signum()),
            amplitude: 1.0,
        }
    }

    pub fn scaled(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn support(&self) -> (f64, f64) {
        (self.support_scale, 2.0 * self.support_scale)
    }

    /// The smooth envelope, without the oscillation.
    pub fn envelope(&self, x: f64) -> f64 {
        let x0 = self.support_scale;
        if x <= x0 || x >= 2.0 * x0 {
            return 0.0;
        }
        if self.smoothness == 1.0 {
            let u = (x - x0) / x0;
            (-1.0 / (u * (1.0 - u))).exp()
        } else {
            let w = x0 / self.smoothness;
            smooth_step((x - x0) / w) * smooth_step((2.0 * x0 - x) / w)
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let env = self.amplitude * self.envelope(x);
        match self.oscillation {
            None => Complex64::new(env, 0.0),
            Some(a) => Complex64::from_polar(env, a * x),
        }
    }
}

impl Window for TestFunction {
    fn support(&self) -> (f64, f64) {
        TestFunction::support(self)
    }

    fn eval(&self, x: f64) -> Complex64 {
        TestFunction::eval(self, x)
    }

    fn phase_rate(&self) -> f64 {
        if self.oscillation.is_some() {
            1.0
        } else {
            0.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nth_derivative(f: &dyn Fn(f64) -> f64, x: f64, j: usize, h: f64) -> f64 {
        // central finite differences of order j
        match j {
            1 => (f(x + h) - f(x - h)) / (2.0 * h),
            2 => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
            3 => (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h),
            4 => {
                (f(x + 2.0 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h))
                    / (h * h * h * h)
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn bump_support_and_shape() {
        let b = BumpSpec::new(50.0);
        assert_eq!(b.eval(49.0), 0.0);
        assert_eq!(b.eval(100.0), 0.0);
        assert!((b.eval(75.0) - (-4.0f64).exp()).abs() < 1e-15);
        assert!(b.eval(60.0) > 0.0);
    }

    #[test]
    fn derivative_scaling_with_support() {
        // ‖φ^{(j)}‖ · X^j is X-independent for the unit-smoothness profile
        for j in 1..=4usize {
            let mut norms = Vec::new();
            for x_scale in [1.0f64, 100.0] {
                let tf = TestFunction::bump(x_scale);
                let h = x_scale * 1e-3;
                let max = (1..200)
                    .map(|i| {
                        let x = x_scale + x_scale * i as f64 / 200.0;
                        nth_derivative(&|y| tf.envelope(y), x, j, h).abs()
                    })
                    .fold(0.0f64, f64::max);
                norms.push(max * x_scale.powi(j as i32));
            }
            let ratio = norms[0] / norms[1];
            assert!(
                (0.9..1.1).contains(&ratio),
                "j={j}: scaled norms {norms:?}"
            );
        }
    }

    #[test]
    fn smoothness_scale_sharpens_derivatives() {
        // Z = 10 should raise sup|φ'|/sup|φ| by roughly 10x over Z = 1
        let x_scale = 10.0;
        let rel_slope = |z: f64| {
            let tf = TestFunction::with_smoothness(x_scale, z);
            let h = 1e-4;
            let mut dmax = 0.0f64;
            let mut fmax = 0.0f64;
            for i in 1..2000 {
                let x = x_scale + x_scale * i as f64 / 2000.0;
                dmax = dmax.max(nth_derivative(&|y| tf.envelope(y), x, 1, h).abs());
                fmax = fmax.max(tf.envelope(x));
            }
            dmax / fmax
        };
        let r = rel_slope(10.0) / rel_slope(1.0);
        assert!(r > 3.0 && r < 40.0, "ratio {r}");
    }

    #[test]
    fn oscillation_is_unimodular() {
        let tf = TestFunction::oscillatory(1.0, 1.0);
        let x = 1.4;
        assert!((tf.eval(x).norm() - tf.envelope(x)).abs() < 1e-15);
        assert!((tf.eval(x).arg() - x).abs() < 1e-12);
    }
}
