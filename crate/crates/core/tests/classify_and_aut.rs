mod common;

use common::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use ybe_lab::aut::closed_form_inverse_params;
use ybe_lab::classify::{all_isomorphisms, is_homomorphism};
use ybe_lab::{
    are_isomorphic, aut_c_closed_form, automorphism_group, build_c, build_nonabelian_example,
    count_cyclic, count_family, delta, enumerate_family, exhaustive_enumerate,
    explicit_iso_to_c, is_aut_cyclic_c1nr, recover_params, CParams, ClassifyError, EnumFilter,
    IsoCertificate, Perm, PermGroup, Solution,
};

fn c(n1: u64, n2: u64, r: u64) -> Solution {
    build_c(&CParams::new(n1, n2, r).unwrap()).unwrap()
}

#[test]
fn non_isomorphic_members() {
    assert_eq!(are_isomorphic(&c(1, 4, 0), &c(1, 4, 2)), IsoCertificate::Absent);
}

#[test]
fn self_isomorphism_is_identity() {
    let s = c(2, 8, 2);
    assert_eq!(are_isomorphic(&s, &s), IsoCertificate::Present(Perm::identity(16)));
}

#[test]
fn relabeled_copy_is_found() {
    let mut rng = StdRng::seed_from_u64(7);
    let s = c(2, 2, 0);
    for _ in 0..10 {
        let g = random_perm(4, &mut rng);
        let t = conjugate(&s, &g);
        let cert = are_isomorphic(&t, &s);
        let phi = cert.map().expect("relabeled copy must be isomorphic");
        assert!(is_homomorphism(phi, &t, &s));
    }
}

#[test]
fn isomorphism_is_an_equivalence_on_fixtures() {
    let mut rng = StdRng::seed_from_u64(11);
    let bases = [c(1, 9, 3), c(1, 9, 0), c(3, 3, 0), c(2, 8, 2)];
    for base in &bases {
        let a = conjugate(base, &random_perm(base.size(), &mut rng));
        let b = conjugate(base, &random_perm(base.size(), &mut rng));
        let ab = are_isomorphic(&a, &b).map().cloned().unwrap();
        let ba = ab.inverse();
        assert!(is_homomorphism(&ba, &b, &a), "symmetry");
        let bc = are_isomorphic(&b, base).map().cloned().unwrap();
        let ac = &bc * &ab;
        assert!(is_homomorphism(&ac, &a, base), "transitivity");
        assert!(are_isomorphic(&a, &a).is_present(), "reflexivity");
    }
    for (i, x) in bases.iter().enumerate() {
        for (j, y) in bases.iter().enumerate() {
            assert_eq!(are_isomorphic(x, y).is_present(), i == j);
        }
    }
}

#[test]
fn recover_params_examples() {
    assert_eq!(recover_params(&c(2, 8, 2)).unwrap(), CParams { n1: 2, n2: 8, r: 2 });
    let mut rng = StdRng::seed_from_u64(3);
    let relabeled = conjugate(&c(1, 16, 4), &random_perm(16, &mut rng));
    assert_eq!(recover_params(&relabeled).unwrap(), CParams { n1: 1, n2: 16, r: 4 });
    assert_eq!(
        recover_params(&build_nonabelian_example(3).unwrap()),
        Err(ClassifyError::NotAbelian)
    );
}

#[test]
fn recover_params_rejects_decomposable_and_high_level() {
    let trivial = Solution::from_table(3, vec![vec![0, 1, 2]; 3]).unwrap();
    assert_eq!(recover_params(&trivial), Err(ClassifyError::NotIndecomposable));
    // among 4-point solutions, find an indecomposable one with abelian group
    // and level above 2, if any; all such must be rejected
    for s in exhaustive_enumerate(4, EnumFilter { indecomposable: true, abelian: true, mpl2: false })
        .unwrap()
    {
        match recover_params(&s) {
            Ok(p) => assert!(are_isomorphic(&s, &build_c(&p).unwrap()).is_present()),
            Err(e) => assert_eq!(e, ClassifyError::NotMplAtMost2),
        }
    }
}

#[test]
fn recover_params_is_relabel_invariant() {
    let mut rng = StdRng::seed_from_u64(99);
    for p in family_up_to(24) {
        let s = build_c(&p).unwrap();
        for _ in 0..3 {
            let t = conjugate(&s, &random_perm(s.size(), &mut rng));
            assert_eq!(recover_params(&t).unwrap(), p);
        }
    }
}

#[test]
fn explicit_isomorphisms() {
    let out = explicit_iso_to_c(&c(2, 8, 0)).unwrap();
    assert!(is_homomorphism(&out.phi, &c(2, 8, 0), &c(2, 8, 0)));
    let one = explicit_iso_to_c(&c(1, 1, 0)).unwrap();
    assert_eq!(one.phi, Perm::identity(1));
    let mut rng = StdRng::seed_from_u64(1);
    let t = conjugate(&c(1, 9, 3), &random_perm(9, &mut rng));
    let out = explicit_iso_to_c(&t).unwrap();
    assert_eq!(out.params, CParams { n1: 1, n2: 9, r: 3 });
    assert!(is_homomorphism(&out.phi, &c(1, 9, 3), &t));
}

#[test]
fn counting_worked_examples() {
    assert_eq!(count_family(16), 7);
    for p in [2u64, 3, 5, 7] {
        assert_eq!(count_family(p.pow(4)), p * p + p + 1);
        assert_eq!(count_cyclic(p * p), p);
        assert_eq!(count_family(p * p), p + 1);
    }
    for n in [1u64, 2, 6, 30, 210] {
        assert_eq!(count_family(n), 1);
        assert_eq!(count_cyclic(n), 1);
    }
    assert_eq!(count_cyclic(16), 4);
}

#[test]
fn cyclic_count_matches_members_with_cyclic_group() {
    for n in 1..=64u64 {
        let cyclic = enumerate_family(n)
            .iter()
            .filter(|p| {
                let g = PermGroup::closure(build_c(p).unwrap().rows()).unwrap();
                g.is_cyclic()
            })
            .count() as u64;
        assert_eq!(cyclic, count_cyclic(n), "n = {n}");
    }
}

#[test]
fn enumerated_family_lists() {
    let tri = |n| enumerate_family(n).iter().map(|p| (p.n1, p.n2, p.r)).collect::<Vec<_>>();
    assert_eq!(
        tri(16),
        vec![(1, 16, 0), (1, 16, 4), (1, 16, 8), (1, 16, 12), (2, 8, 0), (2, 8, 2), (4, 4, 0)]
    );
    assert_eq!(tri(4), vec![(1, 4, 0), (1, 4, 2), (2, 2, 0)]);
    assert_eq!(tri(6), vec![(1, 6, 0)]);
}

#[test]
fn exhaustive_small_cases() {
    let two = exhaustive_enumerate(2, EnumFilter::ALL).unwrap();
    assert_eq!(two.len(), 1);
    assert_eq!(two[0].table(), vec![vec![1, 0], vec![1, 0]]);

    // brute force over all 4 bijective-row tables on 2 points
    let perms = lex_perms(2);
    let mut hits = Vec::new();
    for a in &perms {
        for b in &perms {
            let t = vec![a.clone(), b.clone()];
            if brute_is_solution(&t) {
                let s = Solution::from_table(2, t).unwrap();
                if brute_transitive(&s) {
                    hits.push(s);
                }
            }
        }
    }
    assert_eq!(hits.len(), 1);

    let three = exhaustive_enumerate(
        3,
        EnumFilter { indecomposable: true, ..Default::default() },
    )
    .unwrap();
    assert_eq!(three.len(), 1);
}

#[test]
fn unfiltered_exhaustive_counts() {
    // all involutive solutions up to isomorphism on 1..=4 points
    let counts: Vec<usize> = (1..=4)
        .map(|n| exhaustive_enumerate(n, EnumFilter::default()).unwrap().len())
        .collect();
    assert_eq!(counts, vec![1, 2, 5, 23]);
}

#[test]
fn automorphism_examples() {
    let a = automorphism_group(&c(1, 4, 0)).unwrap();
    assert_eq!(a.group.invariant_factors().unwrap().factors(), &[4]);
    assert!(a.is_cyclic());

    let b = automorphism_group(&c(1, 4, 2)).unwrap();
    let imgs: Vec<&[usize]> = b.elements().iter().map(|p| p.images()).collect();
    assert_eq!(imgs, vec![&[0, 1, 2, 3][..], &[1, 0, 3, 2], &[2, 3, 0, 1], &[3, 2, 1, 0]]);
    assert_eq!(b.group.invariant_factors().unwrap().factors(), &[2, 2]);

    let d = automorphism_group(&c(2, 2, 0)).unwrap();
    assert_eq!(d.group.invariant_factors().unwrap().factors(), &[4]);
}

#[test]
fn automorphisms_are_automorphisms() {
    for p in family_up_to(16) {
        let s = build_c(&p).unwrap();
        let aut = automorphism_group(&s).unwrap();
        for g in aut.elements() {
            assert!(is_homomorphism(g, &s, &s));
        }
        assert!(aut.group.is_abelian() && aut.group.is_regular(), "{p}");
        assert_eq!(aut.order(), s.size());
    }
}

#[test]
fn closed_form_matches_brute_force() {
    for p in family_up_to(16) {
        let s = build_c(&p).unwrap();
        let mut closed: Vec<Perm> = (0..p.n1)
            .flat_map(|a| (0..p.n2).map(move |i| (a, i)))
            .map(|(a, i)| aut_c_closed_form(&p, a, i).unwrap())
            .collect();
        closed.sort();
        assert_eq!(closed, all_isomorphisms(&s, &s), "{p}");
    }
}

#[test]
fn closed_form_algebra() {
    for p in family_up_to(24) {
        let pts: Vec<(u64, u64)> =
            (0..p.n1).flat_map(|a| (0..p.n2).map(move |i| (a, i))).collect();
        for &(s, t) in &pts {
            let f = aut_c_closed_form(&p, s, t).unwrap();
            let (si, ti) = closed_form_inverse_params(&p, s, t);
            assert!((&f * &aut_c_closed_form(&p, si, ti).unwrap()).is_identity());
            // δ is determined by a point only up to multiples of n1 r
            let m = num_integer::gcd(p.n2, p.n1 * p.r);
            let d_st = delta(&p, s, t).0;
            for &(a, i) in &pts {
                let (fa, fi) = p.decode(f.apply(p.encode(a, i)));
                assert_eq!(delta(&p, fa, fi).0 % m, (d_st + delta(&p, a, i).0) % m);
            }
            for &(u, v) in pts.iter().step_by(3) {
                let g = aut_c_closed_form(&p, u, v).unwrap();
                assert_eq!(&f * &g, &g * &f);
            }
        }
    }
}

#[test]
fn cyclicity_criterion_matches_brute_force() {
    for n in 1..=16u64 {
        for p in enumerate_family(n).into_iter().filter(|p| p.n1 == 1) {
            let aut = automorphism_group(&build_c(&p).unwrap()).unwrap();
            assert_eq!(aut.is_cyclic(), is_aut_cyclic_c1nr(n, p.r).unwrap(), "{p}");
        }
    }
    let nine = automorphism_group(&c(1, 9, 3)).unwrap();
    assert!(nine.elements().iter().any(|g| g.order() == 9));
}

fn arb_params() -> impl Strategy<Value = CParams> {
    (1u64..=30).prop_flat_map(|n| {
        let fam = enumerate_family(n);
        (0..fam.len()).prop_map(move |k| fam[k])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip_after_relabeling(p in arb_params(), seed in any::<u64>()) {
        let s = build_c(&p).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let t = conjugate(&s, &random_perm(s.size(), &mut rng));
        let out = explicit_iso_to_c(&t).unwrap();
        prop_assert_eq!(out.params, p);
        prop_assert!(is_homomorphism(&out.phi, &s, &t));
    }

    #[test]
    fn group_invariants_of_members(p in arb_params()) {
        let s = build_c(&p).unwrap();
        let g = PermGroup::closure(s.rows()).unwrap();
        prop_assert!(g.is_abelian() && g.is_transitive() && g.is_regular());
        let expect = if p.n1 == 1 { vec![p.n2] } else { vec![p.n1, p.n2] };
        let expect: Vec<u64> = expect.into_iter().filter(|&f| f > 1).collect();
        prop_assert_eq!(g.invariant_factors().unwrap().0, expect);
        let order = g.order() as u64;
        for e in g.elements() {
            prop_assert_eq!(order % e.order(), 0);
        }
        let again = PermGroup::closure(g.elements()).unwrap();
        prop_assert_eq!(again.elements(), g.elements());
    }
}

#[test]
fn family_count_formula_against_enumeration() {
    for n in 1..=1000u64 {
        assert_eq!(enumerate_family(n).len() as u64, count_family(n), "n = {n}");
    }
}

#[test]
fn certificate_absent_between_sizes() {
    assert!(matches!(are_isomorphic(&c(1, 2, 0), &c(1, 3, 0)), IsoCertificate::Absent));
}
