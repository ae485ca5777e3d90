//! Log-space combinatorics shared by the closed-form distances.

use statrs::function::gamma::ln_gamma;

/// `ln n!`
pub fn ln_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    // small arguments are exact as products
    if n <= 60 {
        let k = k.min(n - k);
        let mut acc = 1.0f64;
        for i in 0..k {
            acc = acc * (n - i) as f64 / (i + 1) as f64;
        }
        return acc.round();
    }
    ln_binomial(n, k).exp()
}

/// `C(2k, k) / 4^k = (2k−1)!! / (2k)!!`, the central binomial probability.
pub fn central_binomial_ratio(k: u64) -> f64 {
    if k <= 4096 {
        return (1..=k).fold(1.0, |acc, i| acc * (2 * i - 1) as f64 / (2 * i) as f64);
    }
    (ln_binomial(2 * k, k) - 2.0 * k as f64 * std::f64::consts::LN_2).exp()
}
