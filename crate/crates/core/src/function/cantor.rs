//! The ternary Cantor function.

/// Ternary digits scanned by catalog oracles; past this the scan is limited
/// by `f64` precision rather than truncation.
pub const DEFAULT_CANTOR_DEPTH: u32 = 52;

/// Cantor function at `x ∈ [0, 1]`, from the first `depth` ternary digits.
///
/// Digits are read until the first `1`, which contributes its binary weight
/// and ends the scan; each `2` becomes a binary `1`. Truncation error is at
/// most `2^{-depth}`. Inputs are clamped to `[0, 1]`.
pub fn cantor_value(x: f64, depth: u32) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let mut rest = x;
    let mut weight = 0.5;
    let mut total = 0.0;
    for _ in 0..depth {
        rest *= 3.0;
        let digit = rest.floor().min(2.0);
        rest -= digit;
        match digit as u8 {
            0 => {}
            1 => return total + weight,
            _ => total += weight,
        }
        weight *= 0.5;
    }
    total
}

/// Derivative of the Cantor function where it is known to exist: `Some(0)`
/// inside a removed middle-third interval, `None` on the Cantor set (as far
/// as `depth` digits can tell) and at interval endpoints.
pub fn cantor_derivative(x: f64, depth: u32) -> Option<f64> {
    if !(x > 0.0 && x < 1.0) {
        return None;
    }
    let mut rest = x;
    for _ in 0..depth {
        rest *= 3.0;
        let digit = rest.floor().min(2.0);
        rest -= digit;
        if digit == 1.0 {
            // strictly inside (k/3ⁿ + 1/3ⁿ⁺¹, k/3ⁿ + 2/3ⁿ⁺¹) unless the expansion stops here
            return (rest > 0.0).then_some(0.0);
        }
    }
    None
}
