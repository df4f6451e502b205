use proptest::prelude::*;

use superspecial::arith::{is_prime, primes_up_to, ResidueMatrix};
use superspecial::count::{count_superspecial, count_via_genus_sum, unit_index};
use superspecial::modclass::{
    canonical_module, conjugate_by, decompose, random_conjugate, random_unimodular, split,
    validate, DecompInvariants, TwoAdicModule,
};
use superspecial::qform::{class_number, compose, reduce, reduced_forms, Disc, QuadForm};

const PRIMES_3_MOD_4: [u64; 8] = [3, 7, 11, 19, 23, 31, 43, 47];

fn invariants_for(p: u64) -> impl Strategy<Value = DecompInvariants> {
    let case_a = p % 8 == 3;
    (0usize..4, 0usize..4, 0usize..4)
        .prop_filter("positive rank", |(r, s, t)| r + s + t > 0)
        .prop_map(move |(r, s, t)| {
            if case_a {
                DecompInvariants::case_a(r, s + t)
            } else {
                DecompInvariants::case_b(r, s, t)
            }
        })
}

fn module_strategy() -> impl Strategy<Value = (TwoAdicModule, DecompInvariants, u64)> {
    (prop::sample::select(PRIMES_3_MOD_4.to_vec()), 4u32..=60)
        .prop_flat_map(|(p, k)| (Just(p), Just(k), invariants_for(p), any::<u64>()))
        .prop_map(|(p, k, inv, seed)| {
            let m = canonical_module(p, k, inv.r, inv.s, inv.t).unwrap();
            (m, inv, seed)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conjugates_decompose_to_their_construction((m, inv, seed) in module_strategy()) {
        let c = random_conjugate(&m, seed).unwrap();
        prop_assert!(validate(&c).is_valid());
        prop_assert_eq!(decompose(&c).unwrap(), inv);
    }

    #[test]
    fn split_reaches_canonical_form((m, inv, seed) in module_strategy()) {
        let c = random_conjugate(&m, seed).unwrap();
        let sp = split(&c).unwrap();
        prop_assert_eq!(sp.invariants, inv);
        prop_assert!(sp.basis.is_unimodular());
        let conj = sp.basis.inverse().unwrap().mul(c.matrix()).mul(&sp.basis);
        prop_assert_eq!(&conj, m.matrix());
    }

    #[test]
    fn direct_sums_add_invariants(
        p in prop::sample::select(PRIMES_3_MOD_4.to_vec()),
        k in 4u32..=30,
        seed in any::<u64>(),
        picks in (0usize..3, 0usize..3, 0usize..3, 0usize..3, 0usize..3, 0usize..3),
    ) {
        let (r1, mut s1, t1, r2, mut s2, t2) = picks;
        prop_assume!(r1 + s1 + t1 > 0 && r2 + s2 + t2 > 0);
        let (t1, t2) = if p % 8 == 3 {
            s1 += t1;
            s2 += t2;
            (None, None)
        } else {
            (Some(t1), Some(t2))
        };
        let a = canonical_module(p, k, r1, s1, t1).unwrap();
        let b = canonical_module(p, k, r2, s2, t2).unwrap();
        let sum = ResidueMatrix::block_diag(k, &[
            random_conjugate(&a, seed).unwrap().matrix().clone(),
            random_conjugate(&b, seed ^ 0x5555).unwrap().matrix().clone(),
        ]).unwrap();
        let sum = random_conjugate(&TwoAdicModule::new(p, sum), seed.rotate_left(7)).unwrap();
        let da = decompose(&a).unwrap();
        let db = decompose(&b).unwrap();
        let ds = decompose(&sum).unwrap();
        prop_assert_eq!(ds.r, da.r + db.r);
        prop_assert_eq!(ds.s, da.s + db.s);
        prop_assert_eq!(ds.t.unwrap_or(0), da.t.unwrap_or(0) + db.t.unwrap_or(0));
    }

    #[test]
    fn conjugate_by_matches_random_conjugate((m, _inv, seed) in module_strategy()) {
        let (u, u_inv) = random_unimodular(m.n(), m.k(), seed).unwrap();
        prop_assert_eq!(u.mul(&u_inv), ResidueMatrix::identity(m.n(), m.k()).unwrap());
        prop_assert_eq!(conjugate_by(&m, &u).unwrap(), random_conjugate(&m, seed).unwrap());
    }

    #[test]
    fn corrupted_modules_are_rejected((m, _inv, seed) in module_strategy(), bump in 1u64..4) {
        let c = random_conjugate(&m, seed).unwrap();
        let mut w = c.matrix().clone();
        let n = w.n();
        let (i, j) = ((seed as usize) % n, (seed as usize / 7) % n);
        // an odd perturbation changes W² + 2W mod 2 unless it cancels; validate decides
        let bumped = w.get(i, j).wrapping_add(bump) & (w.modulus() - 1);
        w.set(i, j, bumped);
        let corrupted = TwoAdicModule::new(m.p(), w);
        if !validate(&corrupted).is_valid() {
            prop_assert!(decompose(&corrupted).is_err());
        }
    }
}

fn form_strategy() -> impl Strategy<Value = QuadForm> {
    (1i64..200, -200i64..200, 1i64..200)
        .prop_filter("definite", |(a, b, c)| b * b - 4 * a * c < 0)
        .prop_map(|(a, b, c)| QuadForm::new(a, b, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn reduction_preserves_discriminant_and_is_idempotent(f in form_strategy()) {
        let r = reduce(&f).unwrap();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.discriminant(), f.discriminant());
        prop_assert_eq!(reduce(&r).unwrap(), r);
        prop_assert_eq!(r.is_primitive(), f.is_primitive());
    }

    #[test]
    fn composition_is_a_group_law(abs_d in 3i64..4000, i in any::<usize>(), j in any::<usize>(), l in any::<usize>()) {
        let d = -abs_d;
        prop_assume!(matches!(d.rem_euclid(4), 0 | 1));
        let forms = reduced_forms(&Disc::new(d).unwrap()).unwrap();
        let h = forms.len();
        let (f, g, e) = (forms[i % h], forms[j % h], forms[l % h]);
        let fg = compose(&f, &g).unwrap();
        prop_assert!(forms.contains(&fg));
        prop_assert_eq!(fg, compose(&g, &f).unwrap());
        prop_assert_eq!(compose(&fg, &e).unwrap(), compose(&f, &compose(&g, &e).unwrap()).unwrap());
        prop_assert_eq!(compose(&f, &f.inverse()).unwrap(), QuadForm::principal(d));
    }
}

#[test]
fn count_identities_over_small_primes() {
    for p in primes_up_to(3000) {
        assert!(is_prime(p));
        for g in [1u32, 2, 7, 20] {
            let report = count_superspecial(p, g).unwrap();
            let genus = count_via_genus_sum(p, g).unwrap();
            assert_eq!(report.total, genus.total);
            assert_eq!(report.per_genus, genus.per_genus);
            assert_eq!(report.total, report.per_genus.iter().sum::<u64>());
            if p % 4 == 3 {
                assert_eq!(report.per_genus.len(), g as usize + 1);
                assert_eq!(report.h_order, unit_index(p).unwrap() * report.h_field);
                let h = class_number(&Disc::new(-4 * p as i64).unwrap()).unwrap();
                assert_eq!(report.h_order, h);
            } else {
                assert_eq!(report.per_genus.len(), 1);
            }
        }
    }
}
