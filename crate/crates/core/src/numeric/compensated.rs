//! Error-free transformations and compensated evaluation.
//!
//! The polynomial factors of the test functions carry alternating coefficients,
//! so plain Horner loses digits at large `t`. `horner` below is the
//! compensated scheme of Graillat, Langlois and Louvet: as accurate as if
//! computed in twice the working precision, then rounded.

#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Compensated Horner evaluation of `Σ coeffs[k] x^k`.
pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    let Some((&last, rest)) = coeffs.split_last() else {
        return 0.0;
    };
    let mut s = last;
    let mut c: f64 = 0.0;
    for &p in rest.iter().rev() {
        let (prod, e1) = two_prod(s, x);
        let (sum, e2) = two_sum(prod, p);
        s = sum;
        c = c.mul_add(x, e1 + e2);
    }
    s + c
}

/// Neumaier summation.
pub fn sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = 0.0;
    let mut c: f64 = 0.0;
    for v in values {
        let (t, e) = two_sum(s, v);
        s = t;
        c += e;
    }
    s + c
}

/// Compensated dot product (twice-working-precision accumulation).
pub fn dot(x: impl IntoIterator<Item = (f64, f64)>) -> f64 {
    let mut s = 0.0;
    let mut c: f64 = 0.0;
    for (a, b) in x {
        let (p, e1) = two_prod(a, b);
        let (t, e2) = two_sum(s, p);
        s = t;
        c += e1 + e2;
    }
    s + c
}

/// Unevaluated sum `hi + lo` with roughly 106 bits of precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = two_sum(s, e);
        Self { hi, lo }
    }

    pub fn mul(self, other: Self) -> Self {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + (self.hi * other.lo + self.lo * other.hi);
        let (hi, lo) = two_sum(p, e);
        Self { hi, lo }
    }

    pub fn mul_f64(self, x: f64) -> Self {
        self.mul(Self::from_f64(x))
    }

    pub fn div_f64(self, x: f64) -> Self {
        let q1 = self.hi / x;
        let (p, e) = two_prod(q1, x);
        let r = ((self.hi - p) - e + self.lo) / x;
        let (hi, lo) = two_sum(q1, r);
        Self { hi, lo }
    }

    pub fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_matches_naive_on_benign_input() {
        let p = [1.0, 2.0, 3.0];
        assert_eq!(horner(&p, 2.0), 17.0);
        assert_eq!(horner(&[], 3.0), 0.0);
    }

    #[test]
    fn horner_survives_catastrophic_cancellation() {
        // (x - 1)^7 expanded, evaluated near its root
        let p = [-1.0, 7.0, -21.0, 35.0, -35.0, 21.0, -7.0, 1.0];
        let x = 1.0 + 1e-3;
        let exact = 1e-21;
        let got = horner(&p, x);
        assert!((got - exact).abs() < 1e-26, "got {got}");
    }

    #[test]
    fn double_double_keeps_low_bits() {
        let a = DoubleDouble::from_f64(1.0).add(DoubleDouble::from_f64(1e-20));
        let b = a.add(DoubleDouble::from_f64(-1.0));
        assert!((b.to_f64() - 1e-20).abs() < 1e-35);
        let third = DoubleDouble::from_f64(1.0).div_f64(3.0);
        let back = third.mul_f64(3.0).add(DoubleDouble::from_f64(-1.0));
        assert!(back.to_f64().abs() < 1e-30);
    }

    #[test]
    fn neumaier_sum_is_exact_on_classic_case() {
        assert_eq!(sum([1.0, 1e100, 1.0, -1e100]), 2.0);
    }
}
