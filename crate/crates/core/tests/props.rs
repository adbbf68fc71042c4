//! Property tests for the exact-arithmetic invariants and the bit-string
//! simulation laws.

use proptest::prelude::*;

use raqm_core::bitstring::{
    block_string, equivalent_under_permutation, make_qubit, measure, DiscretisationLevel,
    HiddenPermutation,
};
use raqm_core::entangle::{
    alice_counterfactual_swap, bob_counterfactual_swap, exact_correlation, grid_compatible,
    joint_measure, make_singlet,
};
use raqm_core::exact::{
    niven_classify, normalize_angle, rational_sqrt, surd_mul, QuadraticSurd, Rational,
    RationalAngle,
};
use raqm_core::geometry::{third_side_cosine, TriangleSpec};
use raqm_core::padic::{
    decode_2adic, encode_2adic, encode_4adic_bits, padic_distance, shift_collapse, split_4adic,
    PadicWord,
};
use raqm_core::quaternion::{apply, build_j, compose, zeta_power, SignedPermutationOp};

fn rational() -> impl Strategy<Value = Rational> {
    (-1000i64..=1000, 1i64..=1000).prop_map(|(n, d)| Rational::new(n, d))
}

fn unit_cosine() -> impl Strategy<Value = Rational> {
    (1i64..=40).prop_flat_map(|q| (-q..=q).prop_map(move |p| Rational::new(p, q)))
}

proptest! {
    #[test]
    fn angle_normalization_idempotent(r in rational()) {
        let once = normalize_angle(&r);
        let twice = normalize_angle(once.turns());
        prop_assert_eq!(&once, &twice);
        prop_assert!(!once.turns().is_negative());
        prop_assert!(once.turns() < &Rational::one());
    }

    #[test]
    fn rational_display_parse_round_trip(r in rational()) {
        let s = r.to_string();
        let back: Rational = s.parse().unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn sqrt_squares_back(n in 0i64..=10_000, d in 1i64..=10_000) {
        let r = Rational::new(n, d);
        if let Some(s) = rational_sqrt(&r).unwrap() {
            prop_assert_eq!(s.square(), r);
        }
    }

    #[test]
    fn surd_product_associative(
        a in -20i64..=20, b in -20i64..=20,
        c in -20i64..=20, e in -20i64..=20,
        f in -20i64..=20, g in -20i64..=20,
        d in 2u64..=40,
    ) {
        let x = QuadraticSurd::new(Rational::integer(a), Rational::integer(b), d).unwrap();
        let y = QuadraticSurd::new(Rational::integer(c), Rational::integer(e), d).unwrap();
        let z = QuadraticSurd::new(Rational::integer(f), Rational::integer(g), d).unwrap();
        let left = surd_mul(&surd_mul(&x, &y).unwrap(), &z).unwrap();
        let right = surd_mul(&x, &surd_mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn surd_product_commutative(
        a in -20i64..=20, b in -20i64..=20,
        c in -20i64..=20, e in -20i64..=20,
        d in 2u64..=40,
    ) {
        let x = QuadraticSurd::new(Rational::integer(a), Rational::integer(b), d).unwrap();
        let y = QuadraticSurd::new(Rational::integer(c), Rational::integer(e), d).unwrap();
        prop_assert_eq!(surd_mul(&x, &y).unwrap(), surd_mul(&y, &x).unwrap());
    }

    #[test]
    fn rotation_preserves_bit_count(
        l in 2usize..=128, m_frac in 0.0f64..=1.0, n_frac in 0.0f64..1.0, seed in any::<u64>()
    ) {
        let m = (m_frac * l as f64) as usize;
        let n = (n_frac * l as f64) as usize;
        let xi = HiddenPermutation::from_seed(seed, l).unwrap();
        let state = make_qubit(DiscretisationLevel::new(l).unwrap(), m, n, xi).unwrap();
        prop_assert_eq!(state.bits().iter().filter(|&&b| b > 0).count(), m);
        prop_assert_eq!(state.permuted_bits().iter().filter(|&&b| b > 0).count(), m);
    }

    #[test]
    fn rotations_compose_additively(l in 2usize..=64, m_frac in 0.0f64..=1.0, n1_frac in 0.0f64..1.0, n2_frac in 0.0f64..1.0) {
        let m = (m_frac * l as f64) as usize;
        let n1 = (n1_frac * l as f64) as usize;
        let n2 = (n2_frac * l as f64) as usize;
        let level = DiscretisationLevel::new(l).unwrap();
        let id = HiddenPermutation::identity(l).unwrap();
        let direct = make_qubit(level, m, (n1 + n2) % l, id.clone()).unwrap();
        let mut bits = block_string(l, m).unwrap();
        bits.rotate_right(n1);
        bits.rotate_right(n2);
        prop_assert_eq!(direct.bits(), bits.as_slice());
    }

    #[test]
    fn measurement_deterministic_and_consistent(l in 1usize..=128, m_frac in 0.0f64..=1.0, seed in any::<u64>()) {
        let m = (m_frac * l as f64) as usize;
        let xi = HiddenPermutation::from_seed(seed, l).unwrap();
        let state = make_qubit(DiscretisationLevel::new(l).unwrap(), m, 0, xi).unwrap();
        let a = measure(&state);
        let b = measure(&state);
        prop_assert_eq!(a, b);
        prop_assert_eq!(a.outcome, state.bits()[a.position]);
        prop_assert_eq!(a.outcome, state.permuted_bits()[0]);
    }

    #[test]
    fn permutation_equivalence_matches_sorting(l in 1usize..=64, m_frac in 0.0f64..=1.0, s1 in any::<u64>(), s2 in any::<u64>()) {
        let m = (m_frac * l as f64) as usize;
        let level = DiscretisationLevel::new(l).unwrap();
        let a = make_qubit(level, m, 0, HiddenPermutation::from_seed(s1, l).unwrap()).unwrap();
        let b = make_qubit(level, m, 0, HiddenPermutation::from_seed(s2, l).unwrap()).unwrap();
        prop_assert!(equivalent_under_permutation(&a, &b).unwrap());
        let mut x = a.permuted_bits();
        let mut y = b.permuted_bits();
        x.sort_unstable();
        y.sort_unstable();
        prop_assert_eq!(x, y);
    }

    #[test]
    fn singlet_correlation_law(halfl in 1usize..=64, k_frac in 0.0f64..=1.0, seed in any::<u64>()) {
        let l = 2 * halfl;
        let k = (k_frac * halfl as f64) as usize; // +1 count in Alice's +1 block
        let cos = &Rational::one() - &Rational::new(4 * k as i64, l as i64);
        prop_assume!(grid_compatible(l, &cos));
        let xi = HiddenPermutation::from_seed(seed, l).unwrap();
        let pair = make_singlet(l, &cos, xi).unwrap();
        prop_assert_eq!(exact_correlation(pair.base()), -&cos);
    }

    #[test]
    fn locality_under_bob_swap(halfl in 1usize..=32, k1 in 0.0f64..=1.0, k2 in 0.0f64..=1.0, seed in any::<u64>()) {
        let l = 2 * halfl;
        let c1 = &Rational::one() - &Rational::new(4 * (k1 * halfl as f64) as i64, l as i64);
        let c2 = &Rational::one() - &Rational::new(4 * (k2 * halfl as f64) as i64, l as i64);
        let xi = HiddenPermutation::from_seed(seed, l).unwrap();
        let pair = make_singlet(l, &c1, xi).unwrap();
        let before = joint_measure(pair.base());
        let (next, report) = bob_counterfactual_swap(&pair, &c2).unwrap();
        prop_assert!(report.string_unchanged);
        prop_assert!(report.outcome_unchanged);
        prop_assert_eq!(next.base().alice_bits(), pair.base().alice_bits());
        prop_assert_eq!(joint_measure(next.base()).0, before.0);
    }

    #[test]
    fn locality_under_alice_swap(halfl in 1usize..=32, k1 in 0.0f64..=1.0, k2 in 0.0f64..=1.0, seed in any::<u64>()) {
        let l = 2 * halfl;
        let c1 = &Rational::one() - &Rational::new(4 * (k1 * halfl as f64) as i64, l as i64);
        let c2 = &Rational::one() - &Rational::new(4 * (k2 * halfl as f64) as i64, l as i64);
        let xi = HiddenPermutation::from_seed(seed, l).unwrap();
        let pair = make_singlet(l, &c1, xi).unwrap();
        let bob_before = joint_measure(pair.base()).1;
        let (rebuilt, report) = alice_counterfactual_swap(&pair, &c2).unwrap();
        prop_assert!(report.string_unchanged);
        prop_assert!(report.outcome_unchanged);
        prop_assert_eq!(joint_measure(&rebuilt).1, bob_before);
    }

    #[test]
    fn ultrametric_inequality(
        len in 1usize..=64,
        xs in proptest::collection::vec(0u8..2, 64),
        ys in proptest::collection::vec(0u8..2, 64),
        zs in proptest::collection::vec(0u8..2, 64),
    ) {
        let x = PadicWord::new(2, xs[..len].to_vec()).unwrap();
        let y = PadicWord::new(2, ys[..len].to_vec()).unwrap();
        let z = PadicWord::new(2, zs[..len].to_vec()).unwrap();
        let dxz = padic_distance(&x, &z).unwrap();
        let dxy = padic_distance(&x, &y).unwrap();
        let dyz = padic_distance(&y, &z).unwrap();
        let max = if dxy > dyz { dxy } else { dyz };
        prop_assert!(dxz <= max);
    }

    #[test]
    fn collapse_reconstructs_the_word(digits in proptest::collection::vec(0u8..2, 1..=128)) {
        let word = PadicWord::new(2, digits.clone()).unwrap();
        let trace = shift_collapse(&word).unwrap();
        prop_assert_eq!(trace.step_count, digits.len() - 1);
        // final digit plus the dropped digits (last-dropped first) rebuild the input
        let final_word = trace.steps.last().unwrap();
        let mut rebuilt = final_word.digits().to_vec();
        for pair in trace.steps.windows(2).rev() {
            let dropped = *pair[0].digits().last().unwrap();
            rebuilt.push(dropped);
        }
        prop_assert_eq!(rebuilt, digits);
    }

    #[test]
    fn two_and_four_adic_encodings_are_lossless(
        len in 1usize..=64,
        avals in proptest::collection::vec(any::<bool>(), 64),
        bvals in proptest::collection::vec(any::<bool>(), 64),
    ) {
        let alice: Vec<i8> = avals[..len].iter().map(|&v| if v { 1 } else { -1 }).collect();
        let bob: Vec<i8> = bvals[..len].iter().map(|&v| if v { 1 } else { -1 }).collect();
        prop_assert_eq!(decode_2adic(&encode_2adic(&alice)).unwrap(), alice.clone());
        let four = encode_4adic_bits(&alice, &bob).unwrap();
        let (wa, wb) = split_4adic(&four).unwrap();
        prop_assert_eq!(decode_2adic(&wa).unwrap(), alice);
        prop_assert_eq!(decode_2adic(&wb).unwrap(), bob);
    }

    #[test]
    fn signed_permutations_invert(seed in any::<u64>(), quarter in 1usize..=16, which in 1u8..=3) {
        let l = 4 * quarter;
        let op = build_j(which, l).unwrap();
        prop_assert_eq!(compose(&op, &op.inverse()).unwrap(), SignedPermutationOp::identity(l));
        let xi = HiddenPermutation::from_seed(seed, l).unwrap();
        let bits: Vec<i8> = (0..l).map(|k| if xi.source_index(k).is_multiple_of(2) { 1 } else { -1 }).collect();
        for &b in apply(&op, &bits).unwrap().iter() {
            prop_assert!(b == 1 || b == -1);
        }
    }

    #[test]
    fn zeta_rotations_add(l in 1usize..=64, n1_frac in 0.0f64..1.0, n2_frac in 0.0f64..1.0) {
        let n1 = (n1_frac * l as f64) as usize;
        let n2 = (n2_frac * l as f64) as usize;
        let combined = zeta_power((n1 + n2) % l, l).unwrap();
        let composed = compose(&zeta_power(n1, l).unwrap(), &zeta_power(n2, l).unwrap()).unwrap();
        prop_assert_eq!(combined, composed);
    }

    #[test]
    fn triangle_verdict_symmetric(c1 in unit_cosine(), c2 in unit_cosine(), p in 0i64..=24, q in 1i64..=24) {
        prop_assume!(p <= q);
        let phi = RationalAngle::from_turns(p, q);
        let a = third_side_cosine(&TriangleSpec { cos_ab: c1.clone(), cos_bc: c2.clone(), phi_b: phi.clone() }).unwrap();
        let b = third_side_cosine(&TriangleSpec { cos_ab: c2, cos_bc: c1, phi_b: phi }).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn triangle_verdict_invariant_under_angle_reflection(c1 in unit_cosine(), c2 in unit_cosine(), p in 0i64..=48, q in 1i64..=48) {
        prop_assume!(p <= q);
        let phi = RationalAngle::from_turns(p, q);
        let mirrored = RationalAngle::new(-&Rational::new(p, q));
        let a = third_side_cosine(&TriangleSpec { cos_ab: c1.clone(), cos_bc: c2.clone(), phi_b: phi }).unwrap();
        let b = third_side_cosine(&TriangleSpec { cos_ab: c1, cos_bc: c2, phi_b: mirrored }).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn sqrt_agrees_with_integer_oracle_exhaustively() {
    // independent oracle: p/q in lowest terms is a rational square iff the
    // reduced numerator and denominator are both perfect integer squares
    let is_square = |x: u64| {
        let r = x.isqrt();
        r * r == x
    };
    let gcd = |mut a: u64, mut b: u64| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    for num in 0u64..=2000 {
        for den in 1u64..=2000 {
            let g = gcd(num, den).max(1);
            let expect = is_square(num / g) && is_square(den / g);
            let got = rational_sqrt(&Rational::new(num as i64, den as i64))
                .unwrap()
                .is_some();
            assert_eq!(got, expect, "mismatch at {num}/{den}");
        }
    }
}

#[test]
fn niven_rational_angles_reduce_to_tiny_denominators() {
    // every rational-cosine verdict up to q = 360 names an angle whose
    // reduced denominator is 1, 2, 3, 4, or 6
    for q in 1i64..=360 {
        for p in 0..q {
            let angle = RationalAngle::from_turns(p, q);
            let verdict = niven_classify(&angle);
            let (_, den) = angle.turns().to_i64_parts().unwrap();
            assert_eq!(verdict.is_rational_cosine, [1, 2, 3, 4, 6].contains(&den));
        }
    }
}
