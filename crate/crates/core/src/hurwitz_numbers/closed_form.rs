use num_traits::Zero;

use crate::exact_algebra::{factorial, int, Rational};

/// Disc amplitude `μ^{⌊μ/r⌋−2}/⌊μ/r⌋!` (zero unless `r | μ`).
pub fn h01_closed(r: u32, mu: u32) -> Rational {
    if mu % r != 0 {
        return Rational::zero();
    }
    let q = (mu / r) as i64;
    crate::exact_algebra::pow_i(&int(mu as i64), q - 2) / Rational::from_integer(factorial(q as u64))
}

/// Annulus amplitude
/// `r^{⟨μ₁/r⟩+⟨μ₂/r⟩} (μ₁+μ₂)^{-1} ∏ μ_i^{⌊μ_i/r⌋}/⌊μ_i/r⌋!`;
/// the fractional parts sum to 0 or 1 when `r | μ₁+μ₂`.
pub fn h02_closed(r: u32, mu1: u32, mu2: u32) -> Rational {
    if (mu1 + mu2) % r != 0 {
        return Rational::zero();
    }
    let frac = if mu1 % r == 0 { 0 } else { 1 };
    let mut v = crate::exact_algebra::pow_i(&int(r as i64), frac) / int((mu1 + mu2) as i64);
    for m in [mu1, mu2] {
        let q = (m / r) as i64;
        v *= crate::exact_algebra::pow_i(&int(m as i64), q) / Rational::from_integer(factorial(q as u64));
    }
    v
}
