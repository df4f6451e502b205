use std::collections::HashMap;

use serde::Serialize;

use super::classnum::reduced_forms;
use super::disc::Disc;
use super::form::{reduce_wide, xgcd, QuadForm};
use crate::arith::{is_prime, kronecker};
use crate::error::{Error, Result};

/// Class groups up to this size carry a full composition table.
pub const TABLE_LIMIT: usize = 2000;

/// Gauss–Dirichlet composition of two primitive forms of the same
/// discriminant, returned reduced.
pub fn compose(f: &QuadForm, g: &QuadForm) -> Result<QuadForm> {
    let d = f.discriminant();
    if g.discriminant() != d {
        return Err(Error::domain(format!(
            "cannot compose {f} (D={d}) with {g} (D={})",
            g.discriminant()
        )));
    }
    if f.a <= 0 || g.a <= 0 || d >= 0 {
        return Err(Error::domain("composition needs positive definite forms"));
    }
    if !f.is_primitive() || !g.is_primitive() {
        return Err(Error::domain(format!(
            "composition needs primitive forms (got {f}, {g})"
        )));
    }
    Ok(compose_unchecked(f, g))
}

pub(crate) fn compose_unchecked(f: &QuadForm, g: &QuadForm) -> QuadForm {
    let (f1, f2) = if f.a > g.a { (g, f) } else { (f, g) };
    let (a1, b1) = (f1.a as i128, f1.b as i128);
    let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);

    let s = (b1 + b2) / 2;
    let n = b2 - s;

    let (d, y1) = if a2 % a1 == 0 {
        (a1, 0)
    } else {
        let (d, u, _) = xgcd(a2, a1);
        (d, u)
    };
    let (d1, x2, y2) = if s % d == 0 {
        (d, 0, -1)
    } else {
        let (d1, u, v) = xgcd(s, d);
        (d1, u, -v)
    };

    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let c3 = (c2 * d1 + r * (b2 + v2 * r)) / v1;
    reduce_wide(a3, b3, c3)
}

/// Some form `(ell, b, c)` of discriminant `D`, if `ell` is represented.
pub fn prime_form(d: i64, ell: u64) -> Option<QuadForm> {
    let ell_i = ell as i64;
    let modulus = 4 * ell_i;
    let parity = d.rem_euclid(2);
    (0..2 * ell_i)
        .filter(|b| b.rem_euclid(2) == parity)
        .find(|&b| (b * b - d).rem_euclid(modulus) == 0)
        .map(|b| QuadForm {
            a: ell_i,
            b,
            c: (b * b - d) / modulus,
        })
}

/// Order of the class of `f` under composition.
pub fn class_order(f: &QuadForm) -> Result<u64> {
    let principal = QuadForm::principal(f.discriminant());
    let start = super::reduce(f)?;
    if !start.is_primitive() {
        return Err(Error::domain(format!("{f} is not primitive")));
    }
    let mut acc = start;
    let mut order = 1;
    while acc != principal {
        acc = compose_unchecked(&acc, &start);
        order += 1;
    }
    Ok(order)
}

/// The form class group of a negative discriminant.
#[derive(Debug, Clone, Serialize)]
pub struct FormClassGroup {
    disc: i64,
    elements: Vec<QuadForm>,
    orders: Vec<u64>,
    #[serde(skip)]
    index: HashMap<QuadForm, usize>,
    #[serde(skip)]
    table: Option<Vec<usize>>,
}

impl FormClassGroup {
    pub fn new(disc: &Disc) -> Result<Self> {
        let elements = reduced_forms(disc)?;
        let index: HashMap<QuadForm, usize> =
            elements.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let h = elements.len();
        let table = (h <= TABLE_LIMIT).then(|| {
            let mut t = vec![0usize; h * h];
            for i in 0..h {
                for j in i..h {
                    let prod = compose_unchecked(&elements[i], &elements[j]);
                    let k = index[&prod];
                    t[i * h + j] = k;
                    t[j * h + i] = k;
                }
            }
            t
        });
        let mut group = FormClassGroup {
            disc: disc.value(),
            elements,
            orders: Vec::new(),
            index,
            table,
        };
        group.orders = (0..h).map(|i| group.order_of(i)).collect();
        Ok(group)
    }

    fn order_of(&self, i: usize) -> u64 {
        let id = self.identity();
        let mut acc = i;
        let mut order = 1;
        while acc != id {
            acc = self.compose(acc, i);
            order += 1;
        }
        order
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[QuadForm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> QuadForm {
        self.elements[i]
    }

    pub fn index_of(&self, f: &QuadForm) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn identity(&self) -> usize {
        self.index[&QuadForm::principal(self.disc)]
    }

    pub fn inverse(&self, i: usize) -> usize {
        let inv = super::reduce(&self.elements[i].inverse()).expect("reduced elements are definite");
        self.index[&inv]
    }

    pub fn compose(&self, i: usize, j: usize) -> usize {
        match &self.table {
            Some(t) => t[i * self.size() + j],
            None => self.index[&compose_unchecked(&self.elements[i], &self.elements[j])],
        }
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self, i: usize) -> u64 {
        self.orders[i]
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &o| lcm(acc, o))
    }

    pub fn is_cyclic(&self) -> bool {
        self.exponent() == self.size() as u64
    }

    /// Elements of the subgroup generated by the given indices.
    pub fn subgroup(&self, generators: &[usize]) -> Vec<usize> {
        let mut members = vec![self.identity()];
        let mut seen = vec![false; self.size()];
        seen[self.identity()] = true;
        let mut frontier = members.clone();
        while let Some(x) = frontier.pop() {
            for &g in generators {
                let y = self.compose(x, g);
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                    frontier.push(y);
                }
            }
        }
        members.sort();
        members
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// `|Pic(O[1/ℓ])|`: the class group of `D` modulo the classes of the primes
/// above `ell`.
pub fn pic_localized(disc: &Disc, ell: u64) -> Result<u64> {
    if ell == 2 {
        return Err(Error::domain("localization at ell = 2 is not supported"));
    }
    if !is_prime(ell) {
        return Err(Error::domain(format!("ell must be an odd prime (got {ell})")));
    }
    if disc.conductor() % ell == 0 {
        return Err(Error::domain(format!(
            "ell = {ell} divides the conductor of D = {disc}"
        )));
    }
    let h = super::class_number(disc)?;
    if kronecker(disc.value(), ell) == -1 {
        return Ok(h);
    }
    let form = prime_form(disc.value(), ell).ok_or_else(|| {
        Error::Invariant(format!("no form of discriminant {disc} represents {ell}"))
    })?;
    let order = class_order(&form)?;
    if h % order != 0 {
        return Err(Error::Invariant(format!(
            "class of {form} has order {order} not dividing h = {h}"
        )));
    }
    Ok(h / order)
}
