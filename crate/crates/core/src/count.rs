//! Superspecial abelian varieties over `F_p` with Frobenius `π² = -p`.
//!
//! [`count_superspecial`] evaluates the closed form in terms of `h(√-p)`;
//! [`count_via_genus_sum`] rebuilds the same number genus by genus, using a
//! class number of `Z[√-p]` obtained by enumerating forms.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::arith::{is_prime, kronecker};
use crate::error::{Error, Result};
use crate::qform::{class_number, Disc};

/// Which case of the closed formula applies to `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `p = 2` or `p ≡ 1 (mod 4)`: `|S| = h`.
    TwoOrOneMod4,
    /// `p ≡ 7 (mod 8)` or `p = 3`: `|S| = (g+1)h`.
    SevenMod8OrThree,
    /// `p ≡ 3 (mod 8)`, `p ≠ 3`: `|S| = (g+3)h`.
    ThreeMod8,
}

impl Branch {
    pub fn of_prime(p: u64) -> Branch {
        if p == 2 || p % 4 == 1 {
            Branch::TwoOrOneMod4
        } else if p == 3 || p % 8 == 7 {
            Branch::SevenMod8OrThree
        } else {
            Branch::ThreeMod8
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Branch::TwoOrOneMod4 => "2or1mod4",
            Branch::SevenMod8OrThree => "7mod8or3",
            Branch::ThreeMod8 => "3mod8",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for Branch {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub p: u64,
    pub g: u32,
    pub branch: Branch,
    /// Class number of `Q(√-p)`.
    pub h_field: u64,
    /// Class number of `Z[√-p]`.
    pub h_order: u64,
    pub unit_index: u64,
    /// `h_r` for `r = 0..=g` when `p ≡ 3 (mod 4)`, a single entry otherwise.
    pub per_genus: Vec<u64>,
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenusSum {
    pub per_genus: Vec<u64>,
    pub total: u64,
}

fn check_inputs(p: u64, g: u32) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if g == 0 {
        return Err(Error::domain("g must be a positive integer"));
    }
    Ok(())
}

/// Fundamental discriminant of `Q(√-p)`.
pub fn field_discriminant(p: u64) -> Result<i64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let p = i64::try_from(p).map_err(|_| Error::domain("p is too large"))?;
    Ok(match p % 4 {
        _ if p == 2 => -8,
        1 => -4 * p,
        _ => -p,
    })
}

/// `h(√-p)`, the class number of the field `Q(√-p)`.
pub fn field_class_number(p: u64) -> Result<u64> {
    class_number(&Disc::new(field_discriminant(p)?)?)
}

fn order_class_number(p: u64) -> Result<u64> {
    let d = i64::try_from(p)
        .ok()
        .and_then(|p| p.checked_mul(-4))
        .ok_or_else(|| Error::domain("p is too large"))?;
    class_number(&Disc::new(d)?)
}

/// `[Ô_E^× : O_E^× R̂^×]` for `R = Z[√-p]`, `p ≡ 3 (mod 4)`.
pub fn unit_index(p: u64) -> Result<u64> {
    if p % 4 != 3 {
        return Err(Error::domain(format!(
            "unit index is defined for p ≡ 3 mod 4 (got {p})"
        )));
    }
    Ok(if p == 3 || p % 8 == 7 { 1 } else { 3 })
}

/// Closed-form count, cross-checked against [`count_via_genus_sum`].
pub fn count_superspecial(p: u64, g: u32) -> Result<CountReport> {
    check_inputs(p, g)?;
    let branch = Branch::of_prime(p);
    let h_field = field_class_number(p)?;
    let multiplier = match branch {
        Branch::TwoOrOneMod4 => 1,
        Branch::SevenMod8OrThree => g as u64 + 1,
        Branch::ThreeMod8 => g as u64 + 3,
    };
    let total = multiplier * h_field;

    let genus = count_via_genus_sum(p, g)?;
    if genus.total != total {
        return Err(Error::Invariant(format!(
            "closed form gives {total} but the genus sum gives {} for p = {p}, g = {g}",
            genus.total
        )));
    }
    let (h_order, unit_index) = if p % 4 == 3 {
        let u = unit_index(p)?;
        let h_order = *genus.per_genus.last().expect("g >= 1");
        if h_order != u * h_field {
            return Err(Error::Invariant(format!(
                "h(-4p) = {h_order} but unit index times h(-p) = {}",
                u * h_field
            )));
        }
        (h_order, u)
    } else {
        (h_field, 1)
    };
    Ok(CountReport {
        p,
        g,
        branch,
        h_field,
        h_order,
        unit_index,
        per_genus: genus.per_genus,
        total,
    })
}

/// Sum over genera of `R`-lattices: one genus when `R` is maximal, else
/// `g` genera of class number `h(√-p)` and one of class number `h(-4p)`.
pub fn count_via_genus_sum(p: u64, g: u32) -> Result<GenusSum> {
    check_inputs(p, g)?;
    let h_field = field_class_number(p)?;
    let per_genus = if p % 4 == 3 {
        let mut v = vec![h_field; g as usize];
        v.push(order_class_number(p)?);
        v
    } else {
        vec![h_field]
    };
    let total = per_genus.iter().sum();
    Ok(GenusSum { per_genus, total })
}

fn check_large_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p <= 3 {
        return Err(Error::domain(format!("p must exceed 3 (got {p})")));
    }
    Ok(())
}

/// Number of `F_p`-isomorphism classes of supersingular elliptic curves
/// with Frobenius `√-p`, for `p > 3`.
pub fn deuring_hprime(p: u64) -> Result<u64> {
    check_large_prime(p)?;
    let h = field_class_number(p)?;
    match p % 8 {
        1 | 5 => {
            if h % 2 != 0 {
                return Err(Error::Invariant(format!(
                    "h(-4p) = {h} is odd for p = {p} ≡ 1 mod 4"
                )));
            }
            Ok(h / 2)
        }
        7 => Ok(h),
        _ => Ok(2 * h),
    }
}

/// Class number of the quaternion algebra ramified at `p` and `∞`.
pub fn eichler_h(p: u64) -> Result<u64> {
    check_large_prime(p)?;
    let twelve_h = (p as i128 - 1)
        + 3 * (1 - kronecker(-4, p) as i128)
        + 4 * (1 - kronecker(-3, p) as i128);
    if twelve_h % 12 != 0 || twelve_h <= 0 {
        return Err(Error::Invariant(format!(
            "Eichler class number is not a positive integer for p = {p}"
        )));
    }
    Ok((twelve_h / 12) as u64)
}

/// Type number `t = (h + h')/2`.
pub fn type_number_check(p: u64) -> Result<u64> {
    let h = eichler_h(p)?;
    let hp = deuring_hprime(p)?;
    if (h + hp) % 2 != 0 {
        return Err(Error::Invariant(format!(
            "h + h' = {h} + {hp} is odd for p = {p}"
        )));
    }
    let t = (h + hp) / 2;
    if t == 0 {
        return Err(Error::Invariant(format!("type number vanishes for p = {p}")));
    }
    Ok(t)
}

/// `|S'|` for `p ∈ {2, 3}`.
pub fn sprime_small(p: u64) -> Result<u64> {
    let h = |d: i64| class_number(&Disc::new(d)?);
    match p {
        2 => Ok(2 * h(-4)? + h(-8)?),
        3 => Ok(4 * h(-3)?),
        _ => Err(Error::domain(format!("|S'| is only available for p = 2, 3 (got {p})"))),
    }
}
