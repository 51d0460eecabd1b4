//! Exact integer combinatorics and their logarithms.
//!
//! Binomial coefficients are computed exactly in arbitrary precision and only
//! then converted to logarithms, so `ln binom(512, 256)` carries full f64
//! accuracy instead of accumulated `ln_gamma` rounding. This is what makes the
//! sector-convolution identities hold to 1e-12 at large qubit counts.

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Natural log of a positive big integer, accurate to a few ulps.
///
/// Takes the top 53 bits as an exact f64 mantissa and accounts for the
/// remaining binary magnitude as a multiple of ln 2.
pub fn ln_biguint(x: &BigUint) -> f64 {
    assert!(*x != BigUint::ZERO, "ln of zero");
    let bits = x.bits();
    if bits <= 53 {
        let v: u64 = x.try_into().unwrap_or_else(|_| unreachable!());
        return (v as f64).ln();
    }
    let shift = bits - 53;
    let top: u64 = (x >> shift).try_into().unwrap_or_else(|_| unreachable!());
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Exact binomial coefficient `C(n, k)` as a big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u64);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Exact binomial coefficient in machine integer range, `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    Some(acc)
}

/// `ln C(n, k)` for the whole Pascal row `k = 0..=n`, each entry derived from
/// the exact integer coefficient.
pub fn ln_binomial_row(n: u64) -> Vec<f64> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigUint::from(1u64);
    row.push(0.0);
    for k in 0..n {
        c = c * BigUint::from(n - k) / BigUint::from(k + 1);
        row.push(ln_biguint(&c));
    }
    // Mirror the upper half so symmetric entries are bit-identical.
    let half = (n as usize + 1) / 2;
    for k in 0..half {
        row[n as usize - k] = row[k];
    }
    row
}

/// Narayana number `N(r, k) = (1/r) C(r, k) C(r, k-1)`, exact.
pub fn narayana(r: u64, k: u64) -> Result<BigUint> {
    if r < 1 || k < 1 || k > r {
        return Err(Error::CombinatorialDomain { r, k });
    }
    Ok(binomial(r, k) * binomial(r, k - 1) / BigUint::from(r))
}

/// Catalan number `C_r = C(2r, r) / (r + 1)`, exact.
pub fn catalan(r: u64) -> BigUint {
    binomial(2 * r, r) / BigUint::from(r + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_match_pascal_recurrence() {
        for n in 1..=40u64 {
            for k in 1..n {
                let lhs = binomial(n, k);
                let rhs = binomial(n - 1, k - 1) + binomial(n - 1, k);
                assert_eq!(lhs, rhs, "Pascal identity fails at ({n},{k})");
            }
        }
    }

    #[test]
    fn u128_path_agrees_with_bigint() {
        for n in [10u64, 30, 60, 120] {
            for k in 0..=n {
                let big = binomial(n, k);
                let small = binomial_u128(n, k).expect("fits in u128 for n <= 120");
                assert_eq!(big, BigUint::from(small));
            }
        }
    }

    #[test]
    fn ln_biguint_matches_f64_ln_in_small_range() {
        for v in [1u64, 2, 3, 100, 1_000_003, u64::MAX / 7] {
            let x = BigUint::from(v);
            assert!((ln_biguint(&x) - (v as f64).ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn ln_binomial_row_is_exact_for_machine_sized_entries() {
        for n in [8u64, 31, 60] {
            let row = ln_binomial_row(n);
            for k in 0..=n {
                let exact = binomial_u128(n, k).unwrap() as f64;
                let rel = (row[k as usize] - exact.ln()).abs() / exact.ln().abs().max(1.0);
                assert!(rel < 1e-14, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn ln_binomial_row_symmetric_bitwise() {
        let row = ln_binomial_row(257);
        for k in 0..=257usize {
            assert_eq!(row[k].to_bits(), row[257 - k].to_bits());
        }
    }

    #[test]
    fn narayana_base_cases() {
        for r in 1..=20u64 {
            assert_eq!(narayana(r, 1).unwrap(), BigUint::from(1u64));
            assert_eq!(narayana(r, r).unwrap(), BigUint::from(1u64));
        }
        // N(r, 2) = C(r, 2)
        for r in 2..=20u64 {
            assert_eq!(narayana(r, 2).unwrap(), binomial(r, 2));
        }
        assert_eq!(narayana(4, 2).unwrap(), BigUint::from(6u64));
    }

    #[test]
    fn narayana_rows_sum_to_catalan() {
        // Independent Catalan oracle: the convolution recurrence
        // C_0 = 1, C_{r+1} = sum_i C_i C_{r-i}.
        let mut cat = vec![BigUint::from(1u64)];
        for r in 0..12usize {
            let mut next = BigUint::ZERO;
            for i in 0..=r {
                next += &cat[i] * &cat[r - i];
            }
            cat.push(next);
        }
        for r in 1..=12u64 {
            let sum: BigUint = (1..=r).map(|k| narayana(r, k).unwrap()).sum();
            assert_eq!(sum, cat[r as usize], "row {r}");
            assert_eq!(sum, catalan(r));
        }
        assert_eq!(catalan(4), BigUint::from(14u64));
    }

    #[test]
    fn narayana_rejects_out_of_domain() {
        assert!(narayana(4, 0).is_err());
        assert!(narayana(4, 5).is_err());
        assert!(narayana(0, 1).is_err());
    }
}
