//! Log-space helpers.
//!
//! Level masses of geometric towers fall below `f64::MIN_POSITIVE` after a
//! thousand levels or so, and weight products over long index ranges
//! overflow just as quickly. Everything that multiplies many factors goes
//! through logarithms, and is only brought back to the linear domain when
//! the result is representable.

/// Largest `|ln x|` for which `exp` is exact enough to prefer the linear path.
pub(crate) const SAFE_LN: f64 = 700.0;

/// Returns `ln(sum(exp(values)))`.
///
/// Empty input (and input made only of `-inf`) yields `-inf`.
pub fn log_sum_exp<I>(values: I) -> f64
where
    I: IntoIterator<Item = f64>,
    I::IntoIter: Clone,
{
    let iter = values.into_iter();
    let max = iter.clone().fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() {
        return max;
    }
    let sum: f64 = iter.map(|v| (v - max).exp()).sum();
    max + sum.ln()
}

/// `sign * exp(ln_magnitude)`, i.e. a value reconstructed from log form.
#[inline]
pub(crate) fn from_log(sign: f64, ln_magnitude: f64) -> f64 {
    sign.signum() * ln_magnitude.exp()
}

/// Relative difference `|a - b| / max(|a|, |b|, floor)`.
pub fn relative_difference(a: f64, b: f64, floor: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(floor);
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// `(sum |x_i|^p)^(1/p)` with max-scaling so that neither tiny nor huge
/// entries lose the sum to under/overflow.
pub(crate) fn scaled_p_norm<I>(values: I, p: f64) -> f64
where
    I: IntoIterator<Item = f64>,
    I::IntoIter: Clone,
{
    let iter = values.into_iter();
    let max = iter.clone().fold(0.0_f64, |m, v| m.max(v.abs()));
    if max == 0.0 || !max.is_finite() {
        return max;
    }
    if p == 1.0 {
        return iter.map(f64::abs).sum();
    }
    let sum: f64 = iter.map(|v| (v.abs() / max).powf(p)).sum();
    max * sum.powf(1.0 / p)
}
