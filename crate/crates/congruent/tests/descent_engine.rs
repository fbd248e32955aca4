//! Engine-level regression tests: homogeneous-space search, obstruction
//! sieve, image computation, and the rank formula on worked curves.

use congruent::descent::{
    candidate_classes, compute_image, default_moduli, local_obstruction, point_from_witness,
    rank_bounds, search_homogeneous, verify_residue_certificate, Curve, HomogeneousSpace,
    Membership, ModuliPolicy, Obstruction, SolvabilityStatus, SquareClass, Witness,
};

fn class(d: i128) -> SquareClass {
    SquareClass::new(d).unwrap()
}

fn space(b1: i128, a: i128, b2: i128) -> HomogeneousSpace {
    HomogeneousSpace::new(b1, a, b2).unwrap()
}

fn expect_witness(status: &SolvabilityStatus) -> Witness {
    match status {
        SolvabilityStatus::ProvenSolvable {
            proof: Membership::Witness { witness, .. },
        } => *witness,
        other => panic!("expected a search witness, got {other:?}"),
    }
}

#[test]
fn isogenous_curve_shape() {
    let e = Curve::new(0, -25).unwrap();
    assert_eq!(e.isogenous(), Curve::new(0, 100).unwrap());
    let e = Curve::new(0, -900).unwrap(); // n = 2·3·5
    assert_eq!(e.isogenous(), Curve::new(0, 3600).unwrap());
    assert!(Curve::new(2, 1).is_err());
}

#[test]
fn candidate_classes_examples() {
    let reps = |curve: &Curve| -> Vec<i128> {
        candidate_classes(curve)
            .unwrap()
            .iter()
            .map(|c| c.representative())
            .collect()
    };
    assert_eq!(reps(&Curve::new(0, -25).unwrap()), vec![1, -1, 5, -5]);
    assert_eq!(
        reps(&Curve::new(0, 4 * 41 * 41).unwrap()),
        vec![1, 2, 41, 82]
    );
    assert_eq!(
        reps(&Curve::new(0, -225).unwrap()),
        vec![1, -1, 3, -3, 5, -5, 15, -15]
    );
}

#[test]
fn search_finds_minimal_witnesses() {
    let w = expect_witness(&search_homogeneous(&space(13, 0, 52), 10));
    assert_eq!((w.m, w.e, w.n), (1, 3, 65));

    let w = expect_witness(&search_homogeneous(&space(41, 0, 164), 10));
    assert_eq!((w.m, w.e, w.n), (1, 4, 205));

    let w = expect_witness(&search_homogeneous(&space(2, 0, 2 * 41 * 41), 5));
    assert_eq!((w.m, w.e, w.n), (1, 1, 58));
}

#[test]
fn search_monotone_in_bound() {
    // A witness found at a small bound is still the one found at a larger
    // bound, and Undecided can only turn into ProvenSolvable.
    let s = space(13, 0, 52);
    assert!(matches!(
        search_homogeneous(&s, 2),
        SolvabilityStatus::Undecided { search_bound: 2 }
    ));
    let w10 = expect_witness(&search_homogeneous(&s, 10));
    let w100 = expect_witness(&search_homogeneous(&s, 100));
    assert_eq!(w10, w100);
}

#[test]
fn obstruction_examples() {
    // 2p-class space of p = 3: dies mod 16.
    let status = local_obstruction(&space(6, 0, 6), &[16]);
    match &status {
        SolvabilityStatus::LocallyObstructed {
            obstruction: Obstruction::Residue { certificate },
        } => {
            assert_eq!(certificate.modulus, 16);
            assert!(verify_residue_certificate(certificate));
        }
        other => panic!("expected obstruction at 16, got {other:?}"),
    }

    // 2-class space of the 2p family: no solutions for any p.
    for p in [3i128, 5, 7, 11, 13] {
        let status = local_obstruction(&space(2, 0, 8 * p * p), &[4, 8, 16]);
        assert!(status.is_obstructed(), "2-class space for p = {p}");
    }

    // p-class space of p = 3: the mod-3 analysis needs precision 9.
    let status = local_obstruction(&space(3, 0, 12), &[3, 9]);
    match &status {
        SolvabilityStatus::LocallyObstructed {
            obstruction: Obstruction::Residue { certificate },
        } => {
            assert_eq!(certificate.modulus, 9);
            assert!(verify_residue_certificate(certificate));
        }
        other => panic!("expected obstruction at 9, got {other:?}"),
    }

    // Solvable spaces are never obstructed, at any default modulus.
    for s in [space(13, 0, 52), space(41, 0, 164), space(-1, 0, 25)] {
        let status = local_obstruction(&s, &default_moduli(&s));
        assert!(!status.is_obstructed(), "false obstruction for {s}");
    }
}

#[test]
fn obstruction_monotone_in_moduli() {
    // Extending the modulus list never un-obstructs; the first certifying
    // modulus stays the certificate.
    let s = space(6, 0, 6);
    let short = local_obstruction(&s, &[16]);
    let long = local_obstruction(&s, &[16, 32, 3, 9]);
    assert_eq!(short, long);
}

#[test]
fn default_moduli_examples() {
    assert_eq!(default_moduli(&space(6, 0, 6)), vec![8, 16, 32, 3, 9]);
    assert_eq!(
        default_moduli(&space(41, 0, 164)),
        vec![8, 16, 32, 41, 1681]
    );
    assert_eq!(
        default_moduli(&space(2, 0, 450)),
        vec![8, 16, 32, 3, 9, 5, 25]
    );
}

#[test]
fn image_p5_all_proven() {
    // E: y² = x³ − 25x — every candidate class is in Im α.
    let e = Curve::new(0, -25).unwrap();
    let im = compute_image(&e, 50, &ModuliPolicy::Extended).unwrap();
    let proven: Vec<i128> = im.proven().iter().map(|c| c.representative()).collect();
    assert_eq!(proven, vec![1, -1, 5, -5]);
}

#[test]
fn image_p3_bar_trivial() {
    // Ē: y² = x³ + 36x — only the trivial class survives.
    let ebar = Curve::new(0, 36).unwrap();
    let im = compute_image(&ebar, 50, &ModuliPolicy::Extended).unwrap();
    assert_eq!(im.proven_count(), 1);
    assert!(im.status(&class(1)).unwrap().is_member());
    for d in [2, 3, 6] {
        assert!(
            im.status(&class(d)).unwrap().is_obstructed(),
            "class {d} should be obstructed"
        );
    }
}

#[test]
fn image_p41_bar_full() {
    let ebar = Curve::new(0, 4 * 41 * 41).unwrap();
    let im = compute_image(&ebar, 10, &ModuliPolicy::Extended).unwrap();
    for d in [1, 2, 41, 82] {
        assert!(
            im.status(&class(d)).unwrap().is_member(),
            "class {d} should be proven"
        );
    }
}

#[test]
fn rank_bounds_p_family() {
    let expect = |p: u64, lower: u32, upper: u32, bound: u64| {
        let e = Curve::congruent(p);
        let im = compute_image(&e, bound, &ModuliPolicy::Extended).unwrap();
        let im_bar = compute_image(&e.isogenous(), bound, &ModuliPolicy::Extended).unwrap();
        let b = rank_bounds(&im, &im_bar).unwrap();
        assert_eq!((b.lower, b.upper), (lower, upper), "p = {p}");
    };
    expect(3, 0, 0, 50); // not congruent
    expect(5, 1, 1, 50);
    expect(7, 1, 1, 50);
    expect(41, 2, 2, 10);
}

#[test]
fn witness_contract() {
    let s = space(-1, 0, 25);
    let w = Witness::checked(&s, 2, 1, 3).unwrap();
    assert!(w.verify(&s));
    assert!(Witness::checked(&s, 2, 1, 4).is_err()); // identity fails
    assert!(Witness::checked(&s, 0, 1, 5).is_err()); // me = 0
    assert!(Witness::checked(&s, 2, 2, 6).is_err()); // gcd(m, e) ≠ 1
}

#[test]
fn point_recovery() {
    let s = space(-1, 0, 25);
    let w = Witness::checked(&s, 2, 1, 3).unwrap();
    let p = point_from_witness(&s, &w).unwrap();
    assert_eq!(p.to_string(), "(-4, -6)");

    // ᾱ-side space for p = 41 with the (1, 4, 205) witness.
    let s = space(41, 0, 164);
    let w = Witness::checked(&s, 1, 4, 205).unwrap();
    let p = point_from_witness(&s, &w).unwrap();
    assert_eq!(p.to_string(), "(41/16, 8405/64)");
}

#[test]
fn guaranteed_classes_present() {
    // The E-side image always contains 1, class(b) and the 2-torsion
    // classes ±n without any search.
    let e = Curve::congruent(33); // 3·11, rank 0
    let im = compute_image(&e, 4, &ModuliPolicy::Extended).unwrap();
    let guaranteed: Vec<i128> = im.guaranteed().iter().map(|c| c.representative()).collect();
    assert_eq!(guaranteed, vec![1, -1, 33, -33]);
}
