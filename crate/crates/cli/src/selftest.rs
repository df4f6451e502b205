//! Built-in invariant suite: a smaller, seeded version of the acceptance
//! checks that runs in a couple of seconds.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use superspecial::arith::{kronecker, primes_up_to};
use superspecial::count::{
    count_superspecial, count_via_genus_sum, deuring_hprime, sprime_small, type_number_check,
    unit_index,
};
use superspecial::hecke::hecke_orbit_report;
use superspecial::modclass::{canonical_module, decompose, random_conjugate, split, DecompInvariants};
use superspecial::qform::{class_number, class_number_dirichlet, Disc, FormClassGroup};

use crate::Output;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn h(d: i64) -> Result<u64, String> {
    class_number(&Disc::new(d).map_err(err)?).map_err(err)
}

fn cross_derivation(_: &mut ChaCha8Rng) -> Check {
    let mut n = 0;
    for p in primes_up_to(300) {
        for g in 1..=4 {
            let a = count_superspecial(p, g).map_err(err)?.total;
            let b = count_via_genus_sum(p, g).map_err(err)?.total;
            ensure(a == b, || format!("p={p} g={g}: {a} != {b}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} cases"))
}

fn class_number_oracle(_: &mut ChaCha8Rng) -> Check {
    let mut n = 0;
    for abs_d in 3..3000i64 {
        let Ok(disc) = Disc::new(-abs_d) else { continue };
        if disc.conductor() > 2 {
            continue;
        }
        let a = class_number(&disc).map_err(err)?;
        let b = class_number_dirichlet(&disc).map_err(err)?;
        ensure(a == b, || format!("D={}: {a} != {b}", -abs_d))?;
        n += 1;
    }
    Ok(format!("{n} discriminants"))
}

fn unit_index_law(_: &mut ChaCha8Rng) -> Check {
    let primes: Vec<u64> = primes_up_to(3000).into_iter().filter(|p| p % 4 == 3).collect();
    for &p in &primes {
        let (order, field) = (h(-4 * p as i64)?, h(-(p as i64))?);
        let u = unit_index(p).map_err(err)?;
        ensure(order == u * field, || format!("p={p}: {order} != {u} * {field}"))?;
    }
    Ok(format!("{} primes", primes.len()))
}

fn sprime(_: &mut ChaCha8Rng) -> Check {
    let v = (sprime_small(2).map_err(err)?, sprime_small(3).map_err(err)?);
    ensure(v == (3, 4), || format!("got {v:?}"))?;
    Ok("3, 4".into())
}

fn deuring(_: &mut ChaCha8Rng) -> Check {
    let primes: Vec<u64> = primes_up_to(2000).into_iter().filter(|&p| p > 3).collect();
    for &p in &primes {
        type_number_check(p).map_err(err)?;
        let hp = deuring_hprime(p).map_err(err)?;
        let total = count_superspecial(p, 1).map_err(err)?.total;
        ensure(total == 2 * hp, || format!("p={p}: |S| = {total}, h' = {hp}"))?;
    }
    Ok(format!("{} primes", primes.len()))
}

fn classifier(rng: &mut ChaCha8Rng) -> Check {
    const PRIMES: [u64; 6] = [3, 7, 11, 19, 23, 31];
    let trials = 60;
    for _ in 0..trials {
        let p = PRIMES[rng.random_range(0..PRIMES.len())];
        let k = rng.random_range(4..=40u32);
        let (r, s, t) = loop {
            let v = (rng.random_range(0..3usize), rng.random_range(0..3usize), rng.random_range(0..3usize));
            if v.0 + v.1 + v.2 > 0 {
                break v;
            }
        };
        let inv = if p % 8 == 3 {
            DecompInvariants::case_a(r, s + t)
        } else {
            DecompInvariants::case_b(r, s, t)
        };
        let canonical = canonical_module(p, k, inv.r, inv.s, inv.t).map_err(err)?;
        let m = random_conjugate(&canonical, rng.random()).map_err(err)?;
        let got = decompose(&m).map_err(err)?;
        ensure(got == inv, || format!("p={p} k={k}: expected {inv}, got {got}"))?;
        let sp = split(&m).map_err(err)?;
        let back = sp.basis.inverse().ok_or("singular basis")?.mul(m.matrix()).mul(&sp.basis);
        ensure(back == *canonical.matrix(), || format!("p={p} k={k} {inv}: split mismatch"))?;
    }
    Ok(format!("{trials} random modules"))
}

fn hecke(_: &mut ChaCha8Rng) -> Check {
    let r = hecke_orbit_report(7, 3, 3).map_err(err)?;
    ensure(r.orbit_total_guaranteed == Some(4), || format!("(7, 3, 3): {r:?}"))?;
    let r = hecke_orbit_report(11, 2, 13).map_err(err)?;
    ensure(r.pic_r_loc == 3 && !r.guarantee, || format!("(11, 2, 13): {r:?}"))?;
    let mut guaranteed = 0;
    for p in primes_up_to(100).into_iter().filter(|p| p % 4 == 3) {
        for ell in primes_up_to(30).into_iter().filter(|&l| l > 2 && l != p) {
            let r = hecke_orbit_report(p, 2, ell).map_err(err)?;
            ensure(r.pic_r_loc != 1 || r.pic_o_loc == 1, || format!("({p}, {ell}): {r:?}"))?;
            if r.guarantee {
                guaranteed += 1;
            }
            if kronecker(-(p as i64), ell) == -1 && kronecker(-4 * p as i64, ell) == -1 {
                ensure(r.pic_r_loc == h(-4 * p as i64)?, || format!("({p}, {ell}): inert"))?;
            }
        }
    }
    Ok(format!("{guaranteed} guaranteed pairs"))
}

fn group_axioms(_: &mut ChaCha8Rng) -> Check {
    for d in [-23i64, -47, -44, -92, -163] {
        let g = FormClassGroup::new(&Disc::new(d).map_err(err)?).map_err(err)?;
        let n = g.size();
        let id = g.identity();
        for a in 0..n {
            ensure(g.compose(a, id) == a, || format!("D={d}: identity"))?;
            ensure(g.compose(a, g.inverse(a)) == id, || format!("D={d}: inverse"))?;
            ensure(n as u64 % g.order(a) == 0, || format!("D={d}: order"))?;
            for b in 0..n {
                ensure(g.compose(a, b) == g.compose(b, a), || format!("D={d}: commutativity"))?;
                for c in 0..n {
                    ensure(
                        g.compose(g.compose(a, b), c) == g.compose(a, g.compose(b, c)),
                        || format!("D={d}: associativity"),
                    )?;
                }
            }
        }
    }
    Ok("5 discriminants".into())
}

pub(crate) fn run(seed: u64) -> Output {
    let checks: [(&str, fn(&mut ChaCha8Rng) -> Check); 8] = [
        ("formula cross-derivation", cross_derivation),
        ("class-number oracle", class_number_oracle),
        ("unit-index law", unit_index_law),
        ("|S'| for p = 2, 3", sprime),
        ("Deuring suite", deuring),
        ("module classifier", classifier),
        ("Hecke orbit guarantee", hecke),
        ("class-group axioms", group_axioms),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stdout = format!("selftest seed {seed}\n");
    let mut failed = 0;
    for (name, check) in checks {
        match check(&mut rng) {
            Ok(detail) => {
                let _ = writeln!(stdout, "PASS {name}: {detail}");
            }
            Err(detail) => {
                failed += 1;
                let _ = writeln!(stdout, "FAIL {name}: {detail}");
            }
        }
    }
    let _ = writeln!(stdout, "{}/{} checks passed", checks.len() - failed, checks.len());
    Output {
        code: u8::from(failed > 0),
        stdout,
        stderr: String::new(),
    }
}
