/// Trigamma function `ψ₁(x) = Σ_{k≥0} (x + k)⁻²` for `x > 0`.
///
/// Shifts the argument above 12 with the recurrence
/// `ψ₁(x) = ψ₁(x + 1) + x⁻²`, then applies the asymptotic expansion
/// `1/x + 1/(2x²) + Σ B_{2j} / x^{2j+1}`.
pub fn trigamma(x: f64) -> f64 {
    assert!(x > 0.0 && x.is_finite(), "trigamma needs x > 0, got {x}");
    let mut acc = 0.0;
    let mut z = x;
    while z < 12.0 {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    // Bernoulli numbers B2..B16
    const BERNOULLI: [f64; 8] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
    ];
    let mut series = 0.0;
    let mut pow = inv * inv2;
    for b in BERNOULLI {
        series += b * pow;
        pow *= inv2;
    }
    acc + inv + 0.5 * inv2 + series
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn known_values() {
        assert!((trigamma(1.0) - PI * PI / 6.0).abs() < 1e-14);
        assert!((trigamma(0.5) - PI * PI / 2.0).abs() < 1e-13);
        let t5 = PI * PI / 6.0 - (1.0 + 0.25 + 1.0 / 9.0 + 1.0 / 16.0);
        assert!((trigamma(5.0) - t5).abs() < 1e-14);
    }
}
