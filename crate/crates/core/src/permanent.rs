//! Matrix permanent by Ryser's inclusion-exclusion formula with Gray-code
//! subset enumeration, `O(2^n n)`.

use num_complex::Complex64;

use crate::error::{Result, StellarError};

/// Largest order accepted by [`permanent`].
pub const MAX_PERMANENT_ORDER: usize = 20;

/// Permanent of a square complex matrix given in row-major order.
pub fn permanent(n: usize, a: &[Complex64]) -> Result<Complex64> {
    if a.len() != n * n {
        return Err(StellarError::domain(
            "permanent",
            format!("expected {} entries for order {n}, got {}", n * n, a.len()),
        ));
    }
    if n > MAX_PERMANENT_ORDER {
        return Err(StellarError::resource("permanent", format!("order {n} exceeds limit {MAX_PERMANENT_ORDER}")));
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }

    // row_sums[i] = sum of a[i][j] over columns j in the current subset
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut gray: u64 = 0;
    for step in 1u64..(1u64 << n) {
        let col = step.trailing_zeros() as usize;
        let bit = 1u64 << col;
        gray ^= bit;
        let sign = if gray & bit != 0 { 1.0 } else { -1.0 };
        for (i, s) in row_sums.iter_mut().enumerate() {
            *s += a[i * n + col] * sign;
        }
        let prod = row_sums.iter().fold(Complex64::new(1.0, 0.0), |p, s| p * s);
        // (-1)^{n - |S|}
        if (n - gray.count_ones() as usize).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    // Sum over all permutations, written independently of Ryser.
    fn brute_force(n: usize, a: &[Complex64]) -> Complex64 {
        fn rec(n: usize, a: &[Complex64], row: usize, used: &mut Vec<bool>) -> Complex64 {
            if row == n {
                return Complex64::new(1.0, 0.0);
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if !used[j] {
                    used[j] = true;
                    acc += a[row * n + j] * rec(n, a, row + 1, used);
                    used[j] = false;
                }
            }
            acc
        }
        rec(n, a, 0, &mut vec![false; n])
    }

    #[test]
    fn small_known_values() {
        assert_eq!(permanent(2, &[c(1.0), c(0.0), c(0.0), c(1.0)]).unwrap(), c(1.0));
        assert_eq!(permanent(2, &[c(1.0); 4]).unwrap(), c(2.0));
        // all-ones 4x4: 4! = 24
        assert!((permanent(4, &[c(1.0); 16]).unwrap() - c(24.0)).norm() < 1e-12);
        assert_eq!(permanent(0, &[]).unwrap(), c(1.0));
    }

    #[test]
    fn matches_brute_force() {
        for n in 1..=6 {
            let a: Vec<Complex64> = (0..n * n)
                .map(|i| Complex64::new(((i * 7 + 3) % 11) as f64 / 5.0 - 1.0, ((i * 5) % 7) as f64 / 3.0 - 1.0))
                .collect();
            let r = permanent(n, &a).unwrap();
            let b = brute_force(n, &a);
            assert!((r - b).norm() < 1e-9 * (1.0 + b.norm()), "n={n}: {r} vs {b}");
        }
    }

    #[test]
    fn rejects_large_orders() {
        let a = vec![c(0.0); 21 * 21];
        assert!(matches!(permanent(21, &a), Err(StellarError::Resource { .. })));
        assert!(matches!(permanent(2, &[c(1.0)]), Err(StellarError::Domain { .. })));
    }
}
