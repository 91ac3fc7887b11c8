//! Transverse signature of `Z^4 x_{Z/p} S^1` and the lens-space eta terms.
//!
//! Each isolated fixed point with rotation numbers `(m, n)` has a lens-space
//! link `S^3 / Z_p` whose boundary signature operator `B` satisfies
//! `eta(B) = -(1/p) sum_k cot(k m pi/p) cot(k n pi/p)`. The spherical operator
//! is two copies of `B`, so its eta invariant is `2 eta(B)` and its kernel
//! (constants) has dimension 2.

use log::warn;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{cotangent_pair_sum, is_integer, LensDatum};
use crate::error::{Error, Result};
use crate::Rational;

/// Kernel dimension of the doubled boundary operator.
pub const SPHERICAL_KERNEL_DIM: i64 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct LensEta {
    /// `eta(B)`.
    pub eta: Rational,
    /// `eta` of the spherical operator, `2 eta(B)`.
    pub doubled: Rational,
    /// `h` of the spherical operator.
    pub kernel_dim: i64,
}

fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn eta_lens_signature(datum: &LensDatum) -> LensEta {
    let sum = cotangent_pair_sum(datum).exact;
    let eta = -sum / int(datum.p());
    LensEta {
        doubled: &eta * int(2),
        eta,
        kernel_dim: SPHERICAL_KERNEL_DIM,
    }
}

/// Input data for the transverse signature formula.
///
/// `p1_integral_blowup` is `∫ p_1` over the blown-up quotient;
/// `p1_integral_original` is over the original quotient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignatureProblem {
    pub p: i64,
    pub fixed_points: Vec<LensDatum>,
    #[serde(with = "crate::arith::rational_string")]
    pub p1_integral_blowup: Rational,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::arith::rational_string::option"
    )]
    pub p1_integral_original: Option<Rational>,
}

impl SignatureProblem {
    pub fn validate(&self) -> Result<()> {
        if self.p < 2 {
            return Err(Error::InvalidLensDatum {
                p: self.p,
                m: 1,
                n: 1,
            });
        }
        if let Some(d) = self.fixed_points.iter().find(|d| d.p() != self.p) {
            return Err(Error::Validation(format!(
                "fixed point {d} does not belong to Z/{}",
                self.p
            )));
        }
        Ok(())
    }

    pub fn fixed_point_count(&self) -> i64 {
        self.fixed_points.len() as i64
    }
}

/// Signature value and whether it is an integer.
#[derive(Debug, Clone, PartialEq)]
pub struct SignatureValue {
    pub value: Rational,
    pub integral: bool,
}

fn check_integral(value: Rational) -> SignatureValue {
    let integral = is_integer(&value);
    if !integral {
        warn!("signature {value} is not an integer; the inputs are not geometrically consistent");
    }
    SignatureValue { value, integral }
}

/// `(1/3) ∫ p_1 (blowup) + sum_j (1/2)(-eta_j + h_j)`.
///
/// Each fixed point contributes `(1/p) sum_k cot cot + 1`.
pub fn transverse_signature(problem: &SignatureProblem) -> Result<SignatureValue> {
    problem.validate()?;
    let third = Rational::new(BigInt::from(1), BigInt::from(3));
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    let mut value = &problem.p1_integral_blowup * &third;
    for d in &problem.fixed_points {
        let lens = eta_lens_signature(d);
        value += &half * (-lens.doubled + int(lens.kernel_dim));
    }
    Ok(check_integral(value))
}

/// `(1/3) ∫ p_1 (original) + (1/p) sum_j sum_k cot cot`, with no `+N` term.
pub fn transverse_signature_original(problem: &SignatureProblem) -> Result<SignatureValue> {
    problem.validate()?;
    let p1 = problem
        .p1_integral_original
        .as_ref()
        .ok_or(Error::MissingOriginalIntegral)?;
    let mut value = p1 / int(3);
    for d in &problem.fixed_points {
        value += cotangent_pair_sum(d).exact / int(problem.p);
    }
    Ok(check_integral(value))
}

/// `(1/3)(∫ p_1 original - ∫ p_1 blowup) == N`.
pub fn blowup_defect_check(problem: &SignatureProblem) -> Result<bool> {
    let p1 = problem
        .p1_integral_original
        .as_ref()
        .ok_or(Error::MissingOriginalIntegral)?;
    let defect = (p1 - &problem.p1_integral_blowup) / int(3);
    Ok(defect == int(problem.fixed_point_count()))
}

/// Sum of the `eta` contributions alone, `sum_j (1/2)(-2 eta(B_j))`.
pub fn eta_correction(problem: &SignatureProblem) -> Rational {
    problem
        .fixed_points
        .iter()
        .map(|d| -eta_lens_signature(d).eta)
        .fold(Rational::zero(), |a, b| a + b)
}
