//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero on failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use superspecial::arith::{is_prime, kronecker, primes_up_to};
use superspecial::count::{
    count_superspecial, count_via_genus_sum, deuring_hprime, eichler_h, sprime_small,
    type_number_check, unit_index,
};
use superspecial::hecke::hecke_orbit_report;
use superspecial::modclass::{
    canonical_module, decompose, random_conjugate, split, DecompInvariants,
};
use superspecial::qform::{
    class_number, class_number_dirichlet, compose, prime_form, reduce, Disc, FormClassGroup,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn disc(d: i64) -> Disc {
    Disc::new(d).unwrap()
}

fn cross_derivation() -> Outcome {
    let mut checked = 0;
    for p in primes_up_to(999) {
        for g in 1..=6 {
            let closed = count_superspecial(p, g).map_err(|e| format!("p={p} g={g}: {e}"))?;
            let genus = count_via_genus_sum(p, g).map_err(|e| format!("p={p} g={g}: {e}"))?;
            ensure(closed.total == genus.total, || {
                format!("p={p} g={g}: {} != {}", closed.total, genus.total)
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (p, g) pairs"))
}

fn class_number_oracle() -> Outcome {
    let mut checked = 0;
    for abs_d in 3..50_000i64 {
        let d = -abs_d;
        if !matches!(d.rem_euclid(4), 0 | 1) {
            continue;
        }
        let dd = disc(d);
        if !dd.is_fundamental() {
            continue;
        }
        let a = class_number(&dd).map_err(|e| e.to_string())?;
        let b = class_number_dirichlet(&dd).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("D={d}: enumeration {a}, character sum {b}"))?;
        checked += 1;
    }
    for p in primes_up_to(9999).into_iter().filter(|p| p % 4 == 3) {
        let dd = disc(-4 * p as i64);
        let a = class_number(&dd).map_err(|e| e.to_string())?;
        let b = class_number_dirichlet(&dd).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("D=-4*{p}: enumeration {a}, character sum {b}"))?;
        checked += 1;
    }
    Ok(format!("{checked} discriminants"))
}

fn unit_index_law() -> Outcome {
    let mut checked = 0;
    for p in primes_up_to(9999).into_iter().filter(|p| p % 4 == 3) {
        let order = class_number(&disc(-4 * p as i64)).unwrap();
        let field = class_number(&disc(-(p as i64))).unwrap();
        let u = unit_index(p).unwrap();
        ensure(order == u * field, || {
            format!("p={p}: h(-4p)={order}, unit index {u}, h(-p)={field}")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} primes"))
}

fn sprime_values() -> Outcome {
    let two = sprime_small(2).map_err(|e| e.to_string())?;
    let three = sprime_small(3).map_err(|e| e.to_string())?;
    ensure(two == 3 && three == 4, || format!("got ({two}, {three})"))?;
    Ok("|S'|(2) = 3, |S'|(3) = 4".into())
}

fn deuring_suite() -> Outcome {
    let mut checked = 0;
    for p in primes_up_to(9999).into_iter().filter(|&p| p > 3) {
        let h = eichler_h(p).map_err(|e| format!("p={p}: {e}"))?;
        let hp = deuring_hprime(p).map_err(|e| format!("p={p}: {e}"))?;
        ensure((h + hp) % 2 == 0, || format!("p={p}: h + h' = {h} + {hp} is odd"))?;
        let t = type_number_check(p).map_err(|e| format!("p={p}: {e}"))?;
        ensure(t >= 1 && 2 * t == h + hp, || format!("p={p}: t = {t}"))?;
        let total = count_superspecial(p, 1).map_err(|e| format!("p={p}: {e}"))?.total;
        ensure(total == 2 * hp, || format!("p={p}: |S| = {total}, h' = {hp}"))?;
        checked += 1;
    }
    Ok(format!("{checked} primes"))
}

fn tuples(p: u64, max_n: usize) -> Vec<DecompInvariants> {
    let mut out = Vec::new();
    if p % 8 == 3 {
        for r in 0..=max_n / 2 {
            for s in 0..=(max_n / 2 - r) {
                if r + s > 0 {
                    out.push(DecompInvariants::case_a(r, s));
                }
            }
        }
    } else {
        for r in 0..=max_n / 2 {
            for s in 0..=max_n - 2 * r {
                for t in 0..=max_n - 2 * r - s {
                    if r + s + t > 0 {
                        out.push(DecompInvariants::case_b(r, s, t));
                    }
                }
            }
        }
    }
    out
}

const CONJUGATIONS: u64 = 100;

fn classifier() -> Outcome {
    let mut runs = 0;
    let mut tuple_count = 0;
    for (p, k) in [(3u64, 6u32), (11, 6), (7, 6), (23, 6)] {
        for inv in tuples(p, 12) {
            tuple_count += 1;
            let canonical = canonical_module(p, k, inv.r, inv.s, inv.t)
                .map_err(|e| format!("p={p} {inv}: {e}"))?;
            for seed in 0..CONJUGATIONS {
                let m = random_conjugate(&canonical, seed).unwrap();
                let got = decompose(&m).map_err(|e| format!("p={p} {inv} seed={seed}: {e}"))?;
                ensure(got == inv, || format!("p={p} seed={seed}: expected {inv}, got {got}"))?;
                let sp = split(&m).map_err(|e| format!("p={p} {inv} seed={seed}: {e}"))?;
                let inverse = sp.basis.inverse().ok_or("singular splitting basis")?;
                let conj = inverse.mul(m.matrix()).mul(&sp.basis);
                ensure(conj == *canonical.matrix(), || {
                    format!("p={p} {inv} seed={seed}: split does not reach the canonical form")
                })?;
                runs += 1;
            }
        }
    }
    Ok(format!("{tuple_count} tuples, {runs} conjugates"))
}

/// `|Pic(O[1/ℓ])|` from the class group table: `h` divided by the size of
/// the subgroup generated by the classes above `ℓ`.
fn pic_from_table(d: i64, ell: u64) -> u64 {
    let group = FormClassGroup::new(&disc(d)).unwrap();
    let h = group.size() as u64;
    if kronecker(d, ell) == -1 {
        return h;
    }
    let gen = group.index_of(&reduce(&prime_form(d, ell).unwrap()).unwrap()).unwrap();
    h / group.subgroup(&[gen]).len() as u64
}

fn hecke_guarantee() -> Outcome {
    let mut guaranteed = Vec::new();
    let mut reports = 0;
    for p in primes_up_to(200).into_iter().filter(|p| p % 4 == 3) {
        for ell in primes_up_to(60).into_iter().filter(|&l| l > 2 && l != p) {
            for g in 1..=5u32 {
                let r = hecke_orbit_report(p, g, ell).map_err(|e| format!("({p}, {ell}): {e}"))?;
                reports += 1;
                ensure(r.pic_r_loc != 1 || r.pic_o_loc == 1, || {
                    format!("({p}, {ell}): pic_R_loc = 1 but pic_O_loc = {}", r.pic_o_loc)
                })?;
                let expected_r = pic_from_table(-4 * p as i64, ell);
                let expected_o = pic_from_table(-(p as i64), ell);
                ensure(r.pic_r_loc == expected_r && r.pic_o_loc == expected_o, || {
                    format!(
                        "({p}, {ell}): report ({}, {}) vs table ({expected_o}, {expected_r})",
                        r.pic_o_loc, r.pic_r_loc
                    )
                })?;
                if r.pic_r_loc == 1 {
                    ensure(r.guarantee && r.orbit_total_guaranteed == Some(g as u64 + 1), || {
                        format!("({p}, {ell}, g={g}): orbit total {:?}", r.orbit_total_guaranteed)
                    })?;
                    if g == 1 {
                        guaranteed.push((p, ell));
                    }
                } else {
                    ensure(!r.guarantee && r.orbit_total_guaranteed.is_none(), || {
                        format!("({p}, {ell}): guarantee without trivial Pic")
                    })?;
                }
            }
        }
    }
    for pair in [(7, 3), (11, 3), (11, 5)] {
        ensure(guaranteed.contains(&pair), || format!("{pair:?} lacks the guarantee"))?;
    }
    ensure(guaranteed.len() >= 20, || {
        format!("only {} pairs with trivial Pic(R[1/ell])", guaranteed.len())
    })?;
    Ok(format!("{} guaranteed pairs, {reports} reports", guaranteed.len()))
}

fn group_axioms() -> Outcome {
    let mut triples = 0;
    for d in [-23i64, -47, -44, -92, -163] {
        let group = FormClassGroup::new(&disc(d)).unwrap();
        let h = class_number(&disc(d)).unwrap() as usize;
        ensure(group.size() == h, || format!("D={d}: {} elements, h = {h}", group.size()))?;
        let forms = group.elements();
        let id = forms[group.identity()];
        for (i, f) in forms.iter().enumerate() {
            ensure(compose(f, &id).unwrap() == *f, || format!("D={d}: identity fails on {f}"))?;
            let inv = forms[group.inverse(i)];
            ensure(compose(f, &inv).unwrap() == id, || format!("D={d}: inverse fails on {f}"))?;
            for g in forms {
                let fg = compose(f, g).unwrap();
                ensure(fg == compose(g, f).unwrap(), || format!("D={d}: {f}, {g} do not commute"))?;
                ensure(forms[group.compose(i, group.index_of(g).unwrap())] == fg, || {
                    format!("D={d}: table disagrees with composition at {f}, {g}")
                })?;
                for e in forms {
                    let left = compose(&fg, e).unwrap();
                    let right = compose(f, &compose(g, e).unwrap()).unwrap();
                    ensure(left == right, || format!("D={d}: associativity fails at {f}, {g}, {e}"))?;
                    triples += 1;
                }
            }
            // order by repeated composition
            let mut power = *f;
            let mut order = 1u64;
            while power != id {
                power = compose(&power, f).unwrap();
                order += 1;
            }
            ensure(order == group.order(i) && h as u64 % order == 0, || {
                format!("D={d}: order of {f} is {order}, table says {}", group.order(i))
            })?;
        }
    }
    Ok(format!("{triples} triples"))
}

fn main() -> ExitCode {
    assert!(is_prime(9973));
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("formula cross-derivation", cross_derivation),
        ("class-number oracle", class_number_oracle),
        ("unit-index law", unit_index_law),
        ("|S'| for p = 2, 3", sprime_values),
        ("Deuring suite", deuring_suite),
        ("module classifier", classifier),
        ("Hecke orbit guarantee", hecke_guarantee),
        ("class-group axioms", group_axioms),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail} ({secs:.2}s)", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL [{}] {name}: {detail} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
