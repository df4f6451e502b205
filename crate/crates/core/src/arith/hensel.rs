use serde::Serialize;

use super::matrix::{check_precision, inverse_odd, mask};
use crate::error::{Error, Result};

/// The two 2-adic roots of `X² + X + (1+p)/4`, truncated mod `2^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AlphaRoots {
    /// The unit root.
    pub alpha1: u64,
    /// The root in `2Z₂`.
    pub alpha2: u64,
    pub k: u32,
}

/// Lifts the roots of `X² + X + (1+p)/4` from `{1, 0} mod 2` to `Z/2^k` by
/// Newton iteration. The derivative `2X + 1` is odd, so every step is
/// unobstructed. Requires `p ≡ 7 (mod 8)`; in the other odd classes the
/// polynomial has no root in `Z₂`.
pub fn hensel_alpha_roots(p: u64, k: u32) -> Result<AlphaRoots> {
    if p % 8 != 7 {
        return Err(Error::domain(format!(
            "X^2+X+(1+p)/4 splits over Z_2 only for p ≡ 7 mod 8 (got p = {p})"
        )));
    }
    check_precision(k)?;
    let c = (p + 1) / 4;
    let m = mask(k);
    let f = |x: u64| x.wrapping_mul(x).wrapping_add(x).wrapping_add(c) & m;

    let lift = |start: u64| -> u64 {
        let mut x = start;
        // quadratic convergence: 1 -> 2 -> 4 -> ... -> 64 correct bits
        for _ in 0..7 {
            let fx = f(x);
            if fx == 0 {
                break;
            }
            let step = fx.wrapping_mul(inverse_odd(x.wrapping_mul(2).wrapping_add(1)));
            x = x.wrapping_sub(step) & m;
        }
        x
    };
    let alpha1 = lift(1);
    let alpha2 = lift(0);
    debug_assert_eq!(f(alpha1), 0);
    debug_assert_eq!(f(alpha2), 0);
    Ok(AlphaRoots { alpha1, alpha2, k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_prime;

    /// Exhaustive root search mod 2^k.
    fn brute_roots(p: u64, k: u32) -> Vec<u64> {
        let modulus = 1u64 << k;
        let c = (p + 1) / 4;
        (0..modulus)
            .filter(|&x| (x * x + x + c) % modulus == 0)
            .collect()
    }

    #[test]
    fn p7_k4_matches_exhaustive_search() {
        assert_eq!(brute_roots(7, 4), vec![5, 10]);
        let r = hensel_alpha_roots(7, 4).unwrap();
        assert_eq!((r.alpha1, r.alpha2), (5, 10));
    }

    #[test]
    fn p23_k4_matches_exhaustive_search() {
        let r = hensel_alpha_roots(23, 4).unwrap();
        assert_eq!(brute_roots(23, 4), vec![r.alpha1.min(r.alpha2), r.alpha1.max(r.alpha2)]);
        assert_eq!(r.alpha1 % 2, 1);
        assert_eq!(r.alpha2 % 2, 0);
        assert_eq!((r.alpha1 + r.alpha2) % 16, 15);
    }

    #[test]
    fn exhaustive_agreement_small_precision() {
        for p in (7..2000u64).step_by(8).filter(|&p| is_prime(p)) {
            for k in 4..=10 {
                let r = hensel_alpha_roots(p, k).unwrap();
                let mut got = vec![r.alpha1, r.alpha2];
                got.sort();
                assert_eq!(got, brute_roots(p, k), "p={p} k={k}");
            }
        }
    }

    #[test]
    fn vieta_identities() {
        for p in (7..5000u64).step_by(8).filter(|&p| is_prime(p)) {
            for k in [4u32, 6, 13, 32, 47, 60] {
                let r = hensel_alpha_roots(p, k).unwrap();
                let m = mask(k);
                assert_eq!(r.alpha1.wrapping_add(r.alpha2) & m, m, "sum ≡ -1");
                assert_eq!(r.alpha1.wrapping_mul(r.alpha2) & m, ((p + 1) / 4) & m);
                assert_eq!(r.alpha1 & 1, 1);
                assert_eq!(r.alpha2 & 1, 0);
            }
        }
    }

    #[test]
    fn rejects_other_classes() {
        for p in [3u64, 5, 11, 13, 17, 19] {
            assert!(hensel_alpha_roots(p, 8).is_err());
        }
        assert!(hensel_alpha_roots(7, 3).is_err());
    }
}
