// Thin wrappers so the rest of the crate reads like ordinary float code.

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn exp_m1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

/// `(1 - x)^a` computed through `log1p` so that small `x` keeps its digits.
#[inline]
pub(crate) fn pow_one_minus(x: f64, a: f64) -> f64 {
    exp(a * ln_1p(-x))
}

/// `1 - (1 - x)^a` without cancellation for small `x`.
#[inline]
pub(crate) fn one_minus_pow_one_minus(x: f64, a: f64) -> f64 {
    -exp_m1(a * ln_1p(-x))
}
