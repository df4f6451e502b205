use super::disc::Disc;
use super::form::{gcd, QuadForm};
use crate::arith::kronecker;
use crate::error::{Error, Result};

/// Largest discriminant magnitude accepted by the enumeration routines.
pub const MAX_ENUM_DISC: u64 = 1 << 40;
/// Largest discriminant magnitude accepted by the character-sum oracle.
pub const MAX_DIRICHLET_DISC: u64 = 1 << 30;

/// All reduced primitive forms of discriminant `D`, sorted by `(a, b)`.
pub fn reduced_forms(disc: &Disc) -> Result<Vec<QuadForm>> {
    let d = disc.value();
    if d.unsigned_abs() > MAX_ENUM_DISC {
        return Err(Error::domain(format!(
            "discriminant {d} is too large for form enumeration"
        )));
    }
    let abs_d = -d;
    let parity = d.rem_euclid(2);
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= abs_d {
        let mut b = -a + 1;
        if b.rem_euclid(2) != parity {
            b += 1;
        }
        while b <= a {
            let num = b * b - d;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                let boundary_negative = b < 0 && c == a;
                if c >= a
                    && !boundary_negative
                    && gcd(gcd(a as i128, b as i128), c as i128) == 1
                {
                    out.push(QuadForm { a, b, c });
                }
            }
            b += 2;
        }
        a += 1;
    }
    Ok(out)
}

/// Class number of primitive positive definite forms of discriminant `D`,
/// by direct enumeration of reduced forms.
pub fn class_number(disc: &Disc) -> Result<u64> {
    Ok(reduced_forms(disc)?.len() as u64)
}

/// Values `χ(a) = (D/a)` for `0 <= a < len`, built multiplicatively with a
/// linear sieve so that only primes need a symbol evaluation.
fn character_table(d: i64, len: usize) -> Vec<i8> {
    let mut chi = vec![0i8; len];
    if len > 1 {
        chi[1] = 1;
    }
    let mut primes: Vec<usize> = Vec::new();
    let mut composite = vec![false; len];
    for i in 2..len {
        if !composite[i] {
            primes.push(i);
            chi[i] = kronecker(d, i as u64);
        }
        for &q in &primes {
            let m = i * q;
            if m >= len {
                break;
            }
            composite[m] = true;
            chi[m] = chi[i] * chi[q];
            if i % q == 0 {
                break;
            }
        }
    }
    chi
}

/// Class number of a fundamental discriminant from the character sum
/// `h = w/(2|D|) · |Σ_{a<|D|} (D/a)·a|`.
fn dirichlet_fundamental(d: i64, w: u64) -> Result<u64> {
    let n = d.unsigned_abs() as usize;
    let chi = character_table(d, n);
    let sum: i64 = chi
        .iter()
        .enumerate()
        .map(|(a, &x)| x as i64 * a as i64)
        .sum();
    let num = w as u128 * sum.unsigned_abs() as u128;
    let den = 2 * n as u128;
    if num % den != 0 {
        return Err(Error::Invariant(format!(
            "character sum for D={d} is not divisible: {num}/{den}"
        )));
    }
    Ok((num / den) as u64)
}

/// Class number from Dirichlet's character sum, extended to conductor-2
/// orders by the order class-number formula.
pub fn class_number_dirichlet(disc: &Disc) -> Result<u64> {
    if disc.value().unsigned_abs() > MAX_DIRICHLET_DISC {
        return Err(Error::domain(format!(
            "discriminant {disc} is too large for the character-sum oracle"
        )));
    }
    let dk = disc.fundamental();
    let h_field = dirichlet_fundamental(dk, disc.roots_of_unity())?;
    match disc.conductor() {
        1 => Ok(h_field),
        2 => {
            // h(O_2) = h(d_K) · 2 · (1 - (d_K/2)/2) / [O_K^× : O_2^×]
            let unit_index = match dk {
                -3 => 3,
                -4 => 2,
                _ => 1,
            };
            let num = h_field as i64 * (2 - kronecker(dk, 2) as i64);
            if num % unit_index != 0 {
                return Err(Error::Invariant(format!(
                    "order class number for D={disc} is not integral"
                )));
            }
            Ok((num / unit_index) as u64)
        }
        f => Err(Error::domain(format!(
            "character-sum oracle supports conductor 1 or 2 only (D={disc} has conductor {f})"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(d: i64) -> Disc {
        Disc::new(d).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(class_number(&disc(-3)).unwrap(), 1);
        assert_eq!(class_number(&disc(-4)).unwrap(), 1);
        assert_eq!(class_number(&disc(-23)).unwrap(), 3);
        assert_eq!(class_number(&disc(-44)).unwrap(), 3);
        assert_eq!(class_number(&disc(-47)).unwrap(), 5);
        assert_eq!(class_number(&disc(-163)).unwrap(), 1);
        let forms = reduced_forms(&disc(-44)).unwrap();
        assert_eq!(
            forms,
            vec![
                QuadForm { a: 1, b: 0, c: 11 },
                QuadForm { a: 3, b: -2, c: 4 },
                QuadForm { a: 3, b: 2, c: 4 },
            ]
        );
    }

    #[test]
    fn dirichlet_examples() {
        assert_eq!(class_number_dirichlet(&disc(-7)).unwrap(), 1);
        assert_eq!(class_number_dirichlet(&disc(-4)).unwrap(), 1);
        assert_eq!(class_number_dirichlet(&disc(-3)).unwrap(), 1);
        assert_eq!(class_number_dirichlet(&disc(-12)).unwrap(), 1);
        assert_eq!(class_number_dirichlet(&disc(-16)).unwrap(), 1);
        assert_eq!(class_number_dirichlet(&disc(-23)).unwrap(), 3);
        assert_eq!(class_number_dirichlet(&disc(-44)).unwrap(), 3);
        assert!(class_number_dirichlet(&disc(-27)).is_err());
    }

    #[test]
    fn character_table_matches_direct_symbol() {
        for d in [-3i64, -4, -7, -8, -20, -23, -56, -163, -1155] {
            let table = character_table(d, 600);
            for (a, &x) in table.iter().enumerate().skip(1) {
                assert_eq!(x, kronecker(d, a as u64), "d={d} a={a}");
            }
        }
    }

    /// Known class numbers of the Heegner discriminants and a few others.
    #[test]
    fn classical_values() {
        for d in [-3i64, -4, -7, -8, -11, -19, -43, -67, -163] {
            assert_eq!(class_number(&disc(d)).unwrap(), 1);
            assert_eq!(class_number_dirichlet(&disc(d)).unwrap(), 1);
        }
        assert_eq!(class_number(&disc(-4 * 9907)).unwrap(), 3 * class_number(&disc(-9907)).unwrap());
    }
}
