//! Coefficient extraction for Euler products `prod_m (1 - x^m)^(-p(m))`.

use alloc::vec::Vec;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Coefficients `a(0..=n_max)` of `prod_{m>=1} (1 - x^m)^(-p(m))`.
///
/// `prime_count(m, a)` returns `p(m)` and may inspect the coefficients
/// `a[0..m]` computed so far, which is what makes self-referential systems
/// (where the prime count at weight `m` is defined from earlier coefficients)
/// work in one pass.
///
/// Uses the logarithmic-derivative recurrence
/// `n * a(n) = sum_{k=1}^{n} c(k) a(n-k)` with `c(k) = sum_{d|k} d * p(d)`.
pub fn euler_product<F>(n_max: usize, mut prime_count: F) -> Vec<BigUint>
where
    F: FnMut(usize, &[BigUint]) -> BigUint,
{
    let mut a: Vec<BigUint> = Vec::with_capacity(n_max + 1);
    a.push(BigUint::one());
    let mut p: Vec<BigUint> = alloc::vec![BigUint::zero()]; // p[0] unused
    let mut c: Vec<BigUint> = alloc::vec![BigUint::zero()];
    for n in 1..=n_max {
        p.push(prime_count(n, &a));
        let mut cn = BigUint::zero();
        for d in 1..=n {
            if n % d == 0 {
                cn += BigUint::from(d) * &p[d];
            }
        }
        c.push(cn);
        let mut sum = BigUint::zero();
        for k in 1..=n {
            sum += &c[k] * &a[n - k];
        }
        let (q, r) = sum.div_rem(&BigUint::from(n));
        debug_assert!(r.is_zero(), "power series coefficient must be integral");
        a.push(q);
    }
    a
}

/// Product of two series, truncated to `n_max`.
pub fn convolve(a: &[BigUint], b: &[BigUint], n_max: usize) -> Vec<BigUint> {
    let mut out = alloc::vec![BigUint::zero(); n_max + 1];
    for (i, ai) in a.iter().enumerate().take(n_max + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n_max + 1 - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}
