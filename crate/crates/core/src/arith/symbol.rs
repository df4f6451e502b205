/// Kronecker symbol `(d/n)` for `n >= 1`.
///
/// The factor `(d/2)` follows the usual convention: 0 for even `d`, +1 for
/// `d ≡ ±1 (mod 8)` and -1 for `d ≡ ±3 (mod 8)`.
pub fn kronecker(d: i64, n: u64) -> i8 {
    assert!(n >= 1, "kronecker symbol needs n >= 1");
    let mut n = n;
    let mut result = 1i8;
    let twos = n.trailing_zeros();
    if twos > 0 {
        if d.rem_euclid(2) == 0 {
            return 0;
        }
        n >>= twos;
        if twos % 2 == 1 && matches!(d.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    if n == 1 {
        return result;
    }
    let a = d.rem_euclid(n as i64) as u64;
    result * jacobi(a, n)
}

/// Jacobi symbol `(a/n)` for odd `n`.
pub fn jacobi(a: u64, n: u64) -> i8 {
    assert!(n % 2 == 1, "jacobi symbol needs odd n");
    let mut a = a % n;
    let mut n = n;
    let mut result = 1i8;
    while a != 0 {
        let twos = a.trailing_zeros();
        a >>= twos;
        if twos % 2 == 1 && matches!(n % 8, 3 | 5) {
            result = -result;
        }
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}
