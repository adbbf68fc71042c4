//! Test-only high-precision oracles, independent of the library's decision
//! procedures: fixed-point arithmetic at 672 fractional bits (about 202
//! decimal digits), trigonometric evaluation by series, a bounded-witness
//! continued-fraction rationality detector, and a brute-force minimal
//! polynomial builder for 2cos(2*pi*p/q).

#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use raqm_core::exact::Rational;

/// Fractional bits of the fixed-point representation (> 200 decimal digits).
pub const SCALE: u32 = 672;
/// Witness precision: a value counts as rational only if it sits within
/// 2^-600 (about 10^-180) of a fraction with denominator <= WITNESS_DEN.
pub const TOL_BITS: u32 = 600;
pub const WITNESS_DEN: i64 = 1_000_000;
const SLICE_BITS: u32 = 120;

pub fn fp_one() -> BigInt {
    BigInt::one() << SCALE
}

pub fn fp_from_rational(r: &Rational) -> BigInt {
    (r.numerator() << SCALE) / r.denominator()
}

pub fn fp_mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> SCALE
}

pub fn fp_to_f64(a: &BigInt) -> f64 {
    // keep 80 bits of head room so the conversion stays in range
    let shifted: BigInt = a >> (SCALE - 80);
    shifted.to_f64().unwrap() / (1f64 * 2f64.powi(80))
}

/// arctan(1/q) by the alternating power series, floor-divided per term.
fn fp_atan_recip(q: u64) -> BigInt {
    let q = BigInt::from(q);
    let q2 = &q * &q;
    let mut power = fp_one() / &q;
    let mut sum = power.clone();
    let mut k = 1u64;
    let mut negative = true;
    loop {
        power /= &q2;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * k + 1);
        if negative {
            sum -= &term;
        } else {
            sum += &term;
        }
        negative = !negative;
        k += 1;
    }
    sum
}

/// pi by the Machin formula. `fp_pi_cross_check` recomputes it from an
/// unrelated arctan identity; the two agree to within a few last-place units.
pub fn fp_pi() -> BigInt {
    16 * fp_atan_recip(5) - 4 * fp_atan_recip(239)
}

pub fn fp_pi_cross_check() -> BigInt {
    // Stoermer: pi = 24 atan(1/8) + 8 atan(1/57) + 4 atan(1/239)
    24 * fp_atan_recip(8) + 8 * fp_atan_recip(57) + 4 * fp_atan_recip(239)
}

/// Floor square root in fixed point.
pub fn fp_sqrt(a: &BigInt) -> BigInt {
    assert!(!a.is_negative(), "fp_sqrt of negative value");
    BigInt::from((a << SCALE).to_biguint().unwrap().sqrt())
}

/// cos(2*pi*t) for rational t, by quadrant reduction to [0, 1/4] turn and a
/// Taylor series on [0, pi/2]. Total error stays below 2^-650.
pub fn fp_cos_2pi(turns: &Rational, two_pi: &BigInt) -> BigInt {
    let t = turns.rem_one();
    let quarter = Rational::new(1, 4);
    let half = Rational::new(1, 2);
    let three_quarters = Rational::new(3, 4);
    let (reduced, negate) = if t <= quarter {
        (t, false)
    } else if t <= half {
        (&half - &t, true)
    } else if t <= three_quarters {
        (&t - &half, true)
    } else {
        (&Rational::one() - &t, false)
    };
    let x = fp_mul(two_pi, &fp_from_rational(&reduced));
    let x2 = fp_mul(&x, &x);
    let mut term = fp_one();
    let mut sum = fp_one();
    let mut k: u64 = 1;
    let mut negative = true;
    loop {
        term = fp_mul(&term, &x2) / BigInt::from((2 * k - 1) * (2 * k));
        if term.is_zero() {
            break;
        }
        if negative {
            sum -= &term;
        } else {
            sum += &term;
        }
        negative = !negative;
        k += 1;
    }
    if negate {
        -sum
    } else {
        sum
    }
}

/// Decides whether the fixed-point value is within 2^-TOL_BITS of a fraction
/// with denominator <= WITNESS_DEN, returning that fraction.
///
/// A 120-bit slice of the value drives an integer continued fraction whose
/// convergents are the only possible witnesses (best-approximation theorem);
/// each candidate is then confirmed or refuted at full precision. The value
/// is shifted by +2 so the slice arithmetic stays positive.
pub fn cf_detect(v_fp: &BigInt) -> Option<Rational> {
    static TWO_FP: std::sync::OnceLock<BigInt> = std::sync::OnceLock::new();
    let two_fp = TWO_FP.get_or_init(|| BigInt::from(2) << SCALE);
    let shifted = v_fp + two_fp;
    assert!(shifted.is_positive(), "cf_detect expects values above -2");
    let slice: i128 = (&shifted >> (SCALE - SLICE_BITS)).to_i128().unwrap();
    let slice_den: i128 = 1 << SLICE_BITS;

    // convergents h/k of slice / 2^SLICE_BITS; seeds are the standard
    // (p_-2, p_-1) = (0, 1) and (q_-2, q_-1) = (1, 0)
    let (mut h_prev, mut h) = (0i128, 1i128);
    let (mut k_prev, mut k) = (1i128, 0i128);
    let (mut n, mut d) = (slice, slice_den);
    let mut candidates: Vec<(i128, i128)> = Vec::new();
    loop {
        if d == 0 {
            // slice is exactly h/k; the true value may still be that fraction
            if k <= WITNESS_DEN as i128 {
                candidates.push((h, k));
            }
            break;
        }
        let a = n / d;
        (n, d) = (d, n - a * d);
        let h_next = a.checked_mul(h).and_then(|x| x.checked_add(h_prev));
        let k_next = a.checked_mul(k).and_then(|x| x.checked_add(k_prev));
        let (h_next, k_next) = match (h_next, k_next) {
            (Some(hn), Some(kn)) => (hn, kn),
            // astronomically large quotient: the current convergent is as
            // close as the slice can express
            _ => {
                if k <= WITNESS_DEN as i128 {
                    candidates.push((h, k));
                }
                break;
            }
        };
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
        // a true witness h'/k' satisfies |slice-value - h'/k'| <= 2^-119, so
        // k' * (k' + k_next') >= 2^119; use 2^60 as a generous cut
        if k_prev >= 1 && k_prev <= WITNESS_DEN as i128 {
            let closeness = k_prev.saturating_mul(k_prev.saturating_add(k));
            if closeness >= 1i128 << 60 {
                candidates.push((h_prev, k_prev));
            }
        }
        if k > WITNESS_DEN as i128 {
            break;
        }
    }

    let tol_shift = SCALE - TOL_BITS;
    for (h, k) in candidates {
        let k_big = BigInt::from(k);
        let lhs = (&shifted * &k_big - (BigInt::from(h) << SCALE)).abs();
        let threshold = k_big << tol_shift;
        if lhs <= threshold {
            return Some(Rational::new((h - 2 * k) as i64, k as i64));
        }
    }
    None
}

/// Single-pass reference form of the detector: the continued fraction is
/// expanded directly on the full 672-bit value with big-integer arithmetic,
/// no slicing. Slower; used to cross-check `cf_detect`.
pub fn cf_detect_reference(v_fp: &BigInt) -> Option<Rational> {
    let shifted = v_fp + (BigInt::from(2) << SCALE);
    assert!(shifted.is_positive());
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let (mut n, mut d) = (shifted.clone(), BigInt::one() << SCALE);
    let bound = BigInt::from(WITNESS_DEN);
    let tol_shift = SCALE - TOL_BITS;
    let mut convergents: Vec<(BigInt, BigInt)> = Vec::new();
    while !d.is_zero() {
        let a = &n / &d;
        let r = &n - &a * &d;
        (n, d) = (d, r);
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
        if k > bound {
            break;
        }
        convergents.push((h.clone(), k.clone()));
    }
    for (h, k) in convergents {
        let lhs = (&shifted * &k - (&h << SCALE)).abs();
        let threshold = &k << tol_shift;
        if lhs <= threshold {
            let num: BigInt = &h - 2 * &k;
            return Some(Rational::new(num.to_i64().unwrap(), k.to_i64().unwrap()));
        }
    }
    None
}

/// Table of cos(2*pi*p/q) at full precision for every reduced p/q with
/// q <= max_q, plus an f64 copy rounded from the same values.
pub struct CosTable {
    pub max_q: u32,
    pub two_pi: BigInt,
    entries: Vec<(u32, u32, BigInt, f64)>,
    index: HashMap<(u32, u32), usize>,
}

impl CosTable {
    pub fn build(max_q: u32) -> Self {
        let two_pi = fp_pi() * 2;
        let mut entries = Vec::new();
        let mut index = HashMap::new();
        for q in 1..=max_q {
            for p in 0..q {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let turns = Rational::new(p as i64, q as i64);
                let cos_fp = fp_cos_2pi(&turns, &two_pi);
                let cos_f64 = fp_to_f64(&cos_fp);
                index.insert((p, q), entries.len());
                entries.push((p, q, cos_fp, cos_f64));
            }
        }
        CosTable {
            max_q,
            two_pi,
            entries,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, &BigInt)> {
        self.entries.iter().map(|(p, q, fp, _)| (*p, *q, fp))
    }

    pub fn cos_fp(&self, p: u32, q: u32) -> &BigInt {
        let g = num_integer::gcd(p, q).max(1);
        &self.entries[self.index[&(p / g, q / g)]].2
    }
}

/// Brute-force minimal polynomial of 2cos(2*pi/q): the monic integer
/// polynomial whose roots are the conjugates 2cos(2*pi*k/q) over k coprime
/// to q. Returns its degree and, when the degree is 1, the rational cosine
/// it certifies.
pub fn minimal_poly_cosine(q: u32, table: &CosTable) -> (usize, Option<Rational>) {
    if q == 1 {
        return (1, Some(Rational::one()));
    }
    if q == 2 {
        return (1, Some(Rational::integer(-1)));
    }
    // coefficients in fixed point, low order first; poly starts as 1
    let mut coeffs: Vec<BigInt> = vec![fp_one()];
    for k in 1..=q / 2 {
        if num_integer::gcd(k, q) != 1 {
            continue;
        }
        let alpha = table.cos_fp(k, q) * 2; // 2 cos(2 pi k / q)
        let mut next: Vec<BigInt> = Vec::with_capacity(coeffs.len() + 1);
        next.push(-fp_mul(&alpha, &coeffs[0]));
        for i in 1..coeffs.len() {
            let v = &coeffs[i - 1] - fp_mul(&alpha, &coeffs[i]);
            next.push(v);
        }
        next.push(coeffs[coeffs.len() - 1].clone());
        coeffs = next;
    }
    let degree = coeffs.len() - 1;
    // round to integers and require the residuals to be far below the
    // accumulated series error bound
    let half = BigInt::one() << (SCALE - 1);
    let tolerance = BigInt::one() << (SCALE - 400);
    let mut rounded: Vec<BigInt> = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        let n = (c + &half).div_floor(&fp_one());
        let residual = (c - (&n << SCALE)).abs();
        assert!(
            residual < tolerance,
            "minimal-polynomial coefficient for q = {q} failed to round to an integer"
        );
        rounded.push(n);
    }
    if degree == 1 {
        // monic x + c0: root is -c0, cosine is -c0/2
        let c0 = rounded[0].to_i64().expect("tiny constant term");
        (1, Some(Rational::new(-c0, 2)))
    } else {
        (degree, None)
    }
}

#[cfg(test)]
mod sanity {
    use super::*;

    #[test]
    fn pi_agrees_across_formulas() {
        let a = fp_pi();
        let b = fp_pi_cross_check();
        assert!((a - b).abs() < BigInt::from(1_000_000u64));
    }

    #[test]
    fn sqrt_and_cos_spot_values() {
        let two_pi = fp_pi() * 2;
        let tol = BigInt::one() << (SCALE - 600);
        // cos of 1/6 turn = 1/2 exactly
        let c = fp_cos_2pi(&Rational::new(1, 6), &two_pi);
        assert!((c - fp_from_rational(&Rational::new(1, 2))).abs() < tol);
        // cos of 1/4 turn = 0
        let c = fp_cos_2pi(&Rational::new(1, 4), &two_pi);
        assert!(c.abs() < tol);
        // cos of 1/8 turn = sqrt(1/2)
        let c = fp_cos_2pi(&Rational::new(1, 8), &two_pi);
        let s = fp_sqrt(&fp_from_rational(&Rational::new(1, 2)));
        assert!((c - s).abs() < tol);
        // cos of 2/3 turn = -1/2
        let c = fp_cos_2pi(&Rational::new(2, 3), &two_pi);
        assert!((c + fp_from_rational(&Rational::new(1, 2))).abs() < tol);
    }

    #[test]
    fn detector_finds_exact_rationals() {
        for (n, d) in [(3i64, 7i64), (355, 113), (-1, 2), (0, 1), (1, 1), (999_983, 1_000_000)] {
            let v = fp_from_rational(&Rational::new(n, d));
            assert_eq!(cf_detect(&v), Some(Rational::new(n, d)), "missed {n}/{d}");
        }
    }

    #[test]
    fn detector_rejects_algebraic_irrationals() {
        let half_sqrt2 = fp_sqrt(&fp_from_rational(&Rational::new(1, 2)));
        assert_eq!(cf_detect(&half_sqrt2), None);
        let sqrt3_over_2 = fp_sqrt(&fp_from_rational(&Rational::new(3, 4)));
        assert_eq!(cf_detect(&sqrt3_over_2), None);
    }

    #[test]
    fn detector_respects_the_witness_bound() {
        // denominator just past the bound must not be reported
        let v = fp_from_rational(&Rational::new(1, 1_000_003));
        assert_eq!(cf_detect(&v), None);
    }

    #[test]
    fn minimal_poly_known_degrees() {
        let table = CosTable::build(12);
        assert_eq!(minimal_poly_cosine(1, &table), (1, Some(Rational::one())));
        assert_eq!(minimal_poly_cosine(2, &table), (1, Some(Rational::integer(-1))));
        assert_eq!(minimal_poly_cosine(3, &table), (1, Some(Rational::new(-1, 2))));
        assert_eq!(minimal_poly_cosine(4, &table), (1, Some(Rational::zero())));
        assert_eq!(minimal_poly_cosine(6, &table), (1, Some(Rational::new(1, 2))));
        assert_eq!(minimal_poly_cosine(5, &table).0, 2);
        assert_eq!(minimal_poly_cosine(7, &table).0, 3);
        assert_eq!(minimal_poly_cosine(8, &table).0, 2);
        assert_eq!(minimal_poly_cosine(12, &table).0, 2);
    }
}
