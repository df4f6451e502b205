//! `ℓ`-adic Hecke orbits in the superspecial locus for `p ≡ 3 (mod 4)`.

use serde::Serialize;

use crate::arith::is_prime;
use crate::count::field_discriminant;
use crate::error::{Error, Result};
use crate::qform::{pic_localized, Disc};

/// Label attached to `per_genus_quotients`: the list is derived, not a
/// proven orbit count.
pub const PER_GENUS_STATUS: &str = "extension";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeckeReport {
    pub p: u64,
    pub g: u32,
    pub ell: u64,
    /// `|Pic(O_E[1/ℓ])|`.
    #[serde(rename = "pic_O_loc")]
    pub pic_o_loc: u64,
    /// `|Pic(R[1/ℓ])|`.
    #[serde(rename = "pic_R_loc")]
    pub pic_r_loc: u64,
    pub guarantee: bool,
    pub orbit_total_guaranteed: Option<u64>,
    pub per_genus_quotients: Vec<u64>,
    pub per_genus_status: &'static str,
}

pub fn hecke_orbit_report(p: u64, g: u32, ell: u64) -> Result<HeckeReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 4 != 3 {
        return Err(Error::domain(format!("p must be congruent to 3 mod 4 (got {p})")));
    }
    if g == 0 {
        return Err(Error::domain("g must be a positive integer"));
    }
    if ell % 2 == 0 {
        return Err(Error::domain(format!("ell must be an odd prime (got {ell})")));
    }
    if ell == p {
        return Err(Error::domain("ell must differ from p"));
    }
    if !is_prime(ell) {
        return Err(Error::domain(format!("ell must be an odd prime (got {ell})")));
    }
    let field = Disc::new(field_discriminant(p)?)?;
    let order = Disc::new(-4 * p as i64)?;
    let pic_o_loc = pic_localized(&field, ell)?;
    let pic_r_loc = pic_localized(&order, ell)?;
    if pic_r_loc == 1 && pic_o_loc != 1 {
        return Err(Error::Invariant(format!(
            "Pic(R[1/{ell}]) is trivial but Pic(O_E[1/{ell}]) has order {pic_o_loc}"
        )));
    }
    let guarantee = pic_r_loc == 1;
    let mut per_genus_quotients = vec![pic_o_loc; g as usize];
    per_genus_quotients.push(pic_r_loc);
    Ok(HeckeReport {
        p,
        g,
        ell,
        pic_o_loc,
        pic_r_loc,
        guarantee,
        orbit_total_guaranteed: guarantee.then_some(g as u64 + 1),
        per_genus_quotients,
        per_genus_status: PER_GENUS_STATUS,
    })
}
