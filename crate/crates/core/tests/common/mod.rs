#![allow(dead_code)]

use deltahom::Complex64;

/// Freely dispersing Gaussian, solved in closed form:
/// `(2/pi)^{1/4} (1 + 4i tau)^{-1/2}
///  exp(-(X - S - 2 K0 tau)^2 / (1 + 4i tau) + i K0 X - i K0^2 tau)`.
pub fn free_gaussian(x: f64, tau: f64, s: f64, k0: f64) -> Complex64 {
    let width = Complex64::new(1.0, 4.0 * tau);
    let y = x - s - 2.0 * k0 * tau;
    let norm = (2.0 / std::f64::consts::PI).powf(0.25);
    let phase = Complex64::new(0.0, k0 * x - k0 * k0 * tau);
    (-(y * y) / width + phase).exp() * norm / width.sqrt()
}
