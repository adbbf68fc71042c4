//! Exact decision procedures for which measurement bases can coexist:
//! the cosine-rule rationality test for a spherical triangle with two
//! rational side-cosines and a rational dihedral angle, and the census of
//! grid phases around a nominal angle that keep both interferometric and
//! which-way bases simultaneously defined.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{niven_classify, rational_sqrt, Rational, RationalAngle};

/// Two rational side-cosines and the rational internal angle between them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleSpec {
    pub cos_ab: Rational,
    pub cos_bc: Rational,
    pub phi_b: RationalAngle,
}

/// Why the third side's cosine fails to be rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Obstruction {
    /// cos^2 of the internal angle is itself irrational (its doubled angle
    /// is not one of the eight rational-cosine angles).
    NonNivenAngle,
    /// cos^2(phi) is rational but (1-cos^2 ab)(1-cos^2 bc) cos^2(phi) is
    /// not the square of a rational.
    NonSquareProduct,
}

/// Decision for a single counterfactual: rational third side iff `cos_ac`
/// is present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefinednessVerdict {
    #[serde(rename = "defined")]
    pub third_side_rational: bool,
    #[serde(rename = "cos_AC")]
    pub cos_ac: Option<Rational>,
    pub obstruction: Option<Obstruction>,
}

impl DefinednessVerdict {
    fn rational(cos_ac: Rational) -> Self {
        DefinednessVerdict {
            third_side_rational: true,
            cos_ac: Some(cos_ac),
            obstruction: None,
        }
    }

    fn irrational(obstruction: Obstruction) -> Self {
        DefinednessVerdict {
            third_side_rational: false,
            cos_ac: None,
            obstruction: Some(obstruction),
        }
    }
}

fn check_unit_interval(what: &'static str, c: &Rational) -> Result<()> {
    if c.abs() > Rational::one() {
        return Err(Error::DomainError {
            what,
            got: c.to_string(),
        });
    }
    Ok(())
}

/// Decides exactly whether cos(theta_AC) from the spherical cosine rule
///
///   cos(AC) = cos(AB) cos(BC) + sin(AB) sin(BC) cos(phi_B)
///
/// is rational, returning it when it is. The sines are the non-negative
/// square roots of 1 - cos^2, so the cross term is rational iff
/// cos^2(phi_B) is rational (forcing the doubled angle onto the eight-angle
/// list, else `NonNivenAngle`) and r * cos^2(phi_B) is a rational square
/// with r = (1-cos^2 AB)(1-cos^2 BC) (else `NonSquareProduct`). Degenerate
/// triangles (a side-cosine of +-1) reduce to cos(AB) cos(BC) outright.
pub fn third_side_cosine(t: &TriangleSpec) -> Result<DefinednessVerdict> {
    check_unit_interval("cos_AB", &t.cos_ab)?;
    check_unit_interval("cos_BC", &t.cos_bc)?;
    let product = &t.cos_ab * &t.cos_bc;
    let one = Rational::one();
    if t.cos_ab.abs() == one || t.cos_bc.abs() == one {
        return Ok(DefinednessVerdict::rational(product));
    }
    // cos^2(phi) = (1 + cos(2 phi)) / 2, rational only on the Niven list
    let doubled = t.phi_b.doubled();
    let Some(cos_double) = niven_classify(&doubled).cosine_value else {
        return Ok(DefinednessVerdict::irrational(Obstruction::NonNivenAngle));
    };
    let cos_sq_phi = &(&one + &cos_double) * &Rational::new(1, 2);
    if cos_sq_phi.is_zero() {
        return Ok(DefinednessVerdict::rational(product));
    }
    let r = &(&one - &t.cos_ab.square()) * &(&one - &t.cos_bc.square());
    match rational_sqrt(&(&r * &cos_sq_phi))? {
        Some(root) => {
            let signed = match t.phi_b.cos_sign() {
                1 => root,
                -1 => -root,
                _ => unreachable!("zero cosine handled by the cos^2 = 0 branch"),
            };
            Ok(DefinednessVerdict::rational(&product + &signed))
        }
        None => Ok(DefinednessVerdict::irrational(Obstruction::NonSquareProduct)),
    }
}

/// The counterfactual world in which the second and third devices are
/// swapped is defined exactly when the third side is rational.
pub fn swap_counterfactual_defined(
    cos_ab: &Rational,
    cos_bc: &Rational,
    phi_b: &RationalAngle,
) -> Result<DefinednessVerdict> {
    third_side_cosine(&TriangleSpec {
        cos_ab: cos_ab.clone(),
        cos_bc: cos_bc.clone(),
        phi_b: phi_b.clone(),
    })
}

/// Definedness of the second Bell counterfactual: with rational cos_AB and
/// cos_AC and the dihedral angle at vertex A rational, decides whether
/// cos_BC can be rational. Identical procedure, spanned at vertex A.
pub fn bell_counterfactuals_defined(
    cos_ab: &Rational,
    cos_ac: &Rational,
    phi_a: &RationalAngle,
) -> Result<DefinednessVerdict> {
    third_side_cosine(&TriangleSpec {
        cos_ab: cos_ab.clone(),
        cos_bc: cos_ac.clone(),
        phi_b: phi_a.clone(),
    })
}

/// Grid census around a nominal phase: every phase k/L within the window
/// (circular distance, inclusive), and the sublist whose cosine is also
/// rational, i.e. the phases in which both complementary bases are defined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub total: usize,
    pub doubly_rational: usize,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub doubly_rational_phases: Vec<RationalAngle>,
}

pub fn complementarity_census(
    level: usize,
    nominal: &RationalAngle,
    window: &Rational,
) -> Result<CensusReport> {
    if level == 0 {
        return Err(Error::OutOfRange {
            what: "L",
            got: 0,
            limit: usize::MAX,
        });
    }
    if window.is_zero() || window.is_negative() {
        return Err(Error::InvalidArgument(
            "census window must be positive".into(),
        ));
    }
    let l_rat = Rational::integer(level as i64);
    let half = Rational::new(1, 2);
    let ks: Vec<i64> = if window >= &half {
        (0..level as i64).collect()
    } else {
        // k/L in [nominal - window, nominal + window], taken over the integers
        // and folded mod L afterwards
        let lo = &(nominal.turns() - window) * &l_rat;
        let hi = &(nominal.turns() + window) * &l_rat;
        let lo = ceil_to_i64(&lo);
        let hi = floor_to_i64(&hi);
        (lo..=hi).collect()
    };
    let mut doubly = Vec::new();
    for &k in &ks {
        let phase = RationalAngle::new(Rational::new(k, level as i64));
        if niven_classify(&phase).is_rational_cosine {
            doubly.push(phase);
        }
    }
    Ok(CensusReport {
        total: ks.len(),
        doubly_rational: doubly.len(),
        doubly_rational_phases: doubly,
    })
}

fn floor_to_i64(r: &Rational) -> i64 {
    r.floor().to_i64_parts().expect("grid indices fit i64").0
}

fn ceil_to_i64(r: &Rational) -> i64 {
    -floor_to_i64(&-r)
}
