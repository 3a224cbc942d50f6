//! Floating-point building blocks shared by the algebra, moment and Bessel code.

pub mod compensated;
pub mod quadrature;

mod grid;

pub use grid::RGrid;

/// Largest `x` for which `exp(x)` is finite.
pub const LN_MAX: f64 = 709.782_712_893_384;

/// n! as a float.
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Binomial coefficient C(n, k), zero for k > n.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Γ(m + 1/2) for nonnegative integer `m`.
pub fn gamma_half_integer(m: usize) -> f64 {
    let mut g = std::f64::consts::PI.sqrt();
    for j in 0..m {
        g *= j as f64 + 0.5;
    }
    g
}
