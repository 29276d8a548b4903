//! Complex Gamma via a fixed-coefficient Lanczos approximation with
//! reflection for the left half-plane. Log-space variants are provided so
//! that transform kernels can assemble products like cosh(πt)·Γ(·)Γ(·)
//! without intermediate overflow or underflow.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

// Lanczos, g = 607/128, 15 terms (Godfrey's coefficients).
const LANCZOS_G: f64 = 4.7421875;
const LANCZOS_C: [f64; 15] = [
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    3.3994649984811888699e-5,
    4.6523628927048575665e-5,
    -9.8374475304879564677e-5,
    1.5808870322491248884e-4,
    -2.1026444172410488319e-4,
    2.1743961811521264320e-4,
    -1.6431810653676389022e-4,
    8.4418223983852743293e-5,
    -2.6190838401581408670e-5,
    3.6899182659531622704e-6,
];

fn lanczos_series(z: Complex64) -> Complex64 {
    let mut s = Complex64::new(LANCZOS_C[0], 0.0);
    for (k, &c) in LANCZOS_C.iter().enumerate().skip(1) {
        s += c / (z + (k as f64 - 1.0));
    }
    s
}

/// log Γ(z) such that exp(ln_gamma(z)) = Γ(z) exactly (the imaginary part
/// is not reduced to a principal branch; only the exponential is used).
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        let w = z + (LANCZOS_G - 0.5);
        (0.5 * (2.0 * PI).ln()) + (z - 0.5) * w.ln() - w + lanczos_series(z).ln()
    } else {
        // reflection: ln Γ(z) = ln π − ln sin(πz) − ln Γ(1−z)
        PI.ln() - ln_sin_pi(z) - ln_gamma(Complex64::new(1.0, 0.0) - z)
    }
}

/// log sin(πz), stable for large |Im z|; exp of it reproduces sin(πz).
fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im >= 0.0 {
        // sin πz = -(1/(2i)) e^{-iπz} (1 − e^{2iπz})
        let log_half_i = Complex64::new((0.5f64).ln(), 0.5 * PI); // ln(i/2)
        let small = (Complex64::new(0.0, 2.0 * PI) * z).exp();
        log_half_i - Complex64::new(0.0, PI) * z + (Complex64::new(1.0, 0.0) - small).ln()
    } else {
        ln_sin_pi(z.conj()).conj()
    }
}

/// Γ(s) with a pole check at non-positive integers.
pub fn gamma(s: Complex64) -> Result<Complex64> {
    if s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0 {
        return Err(Error::PoleError(s.re));
    }
    Ok(ln_gamma(s).exp())
}

/// Γ(s) for real s away from poles.
pub fn gamma_real(x: f64) -> Result<f64> {
    Ok(gamma(Complex64::new(x, 0.0))?.re)
}

pub fn ln_factorial(n: u32) -> f64 {
    ln_gamma(Complex64::new(n as f64 + 1.0, 0.0)).re
}
