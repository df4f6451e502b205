use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Extended gcd: returns `(g, u, v)` with `u·a + v·b = g = gcd(a, b) >= 0`.
pub(crate) fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut u0, mut u1) = (1i128, 0i128);
    let (mut v0, mut v1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (u0, u1) = (u1, u0 - q * u1);
        (v0, v1) = (v1, v0 - q * v1);
    }
    if r0 < 0 {
        (-r0, -u0, -v0)
    } else {
        (r0, u0, v0)
    }
}

/// Positive definite binary quadratic form `a x² + b xy + c y²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl QuadForm {
    /// Checked constructor: the form must be positive definite and its
    /// discriminant must fit in an `i64`.
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let f = QuadForm { a, b, c };
        let d = f.discriminant_wide();
        if d >= 0 || a <= 0 {
            return Err(Error::domain(format!("form {f} is not positive definite")));
        }
        if d < i64::MIN as i128 {
            return Err(Error::domain(format!("discriminant of {f} overflows i64")));
        }
        Ok(f)
    }

    fn discriminant_wide(&self) -> i128 {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        b * b - 4 * a * c
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant_wide() as i64
    }

    /// The principal form `(1, b₀, c₀)` with `b₀ ≡ D (mod 2)`.
    pub fn principal(d: i64) -> Self {
        let b0 = d.rem_euclid(2);
        QuadForm {
            a: 1,
            b: b0,
            c: (b0 * b0 - d) / 4,
        }
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a as i128, self.b as i128), self.c as i128) == 1
    }

    /// The inverse class representative `(a, -b, c)`.
    pub fn inverse(&self) -> Self {
        QuadForm {
            a: self.a,
            b: -self.b,
            c: self.c,
        }
    }

    /// `|b| <= a <= c`, with `b >= 0` when `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
    }

    pub fn evaluate(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }
}

/// The unique reduced form properly equivalent to `f`.
pub fn reduce(f: &QuadForm) -> Result<QuadForm> {
    let d = f.discriminant_wide();
    if d >= 0 || f.a <= 0 {
        return Err(Error::domain(format!("form {f} is not positive definite")));
    }
    Ok(reduce_wide(f.a as i128, f.b as i128, f.c as i128))
}

/// Reduction on wide integers; callers guarantee positive definiteness.
pub(crate) fn reduce_wide(mut a: i128, mut b: i128, mut c: i128) -> QuadForm {
    loop {
        // b into (-a, a] via x -> x + q y
        if !(-a < b && b <= a) {
            let q = (a - b).div_euclid(2 * a);
            c += q * (a * q + b);
            b += 2 * a * q;
        }
        if a > c {
            (a, b, c) = (c, -b, a);
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        break;
    }
    QuadForm {
        a: a as i64,
        b: b as i64,
        c: c as i64,
    }
}
