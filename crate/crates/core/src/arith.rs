//! Exact number theory behind the lens-space eta invariants.
//!
//! The sawtooth function and Dedekind sums are generic over the integer type
//! backing [`Ratio`]; the crate-level [`Rational`] alias fixes it to
//! arbitrary precision. Cotangent pair sums are evaluated twice: exactly,
//! through the Dedekind sum identity
//!
//! ```text
//! sum_{k=1}^{p-1} cot(pi k m / p) cot(pi k n / p) = 4 p s(m n^{-1} mod p, p)
//! ```
//!
//! and directly in floating point, generic over [`Float`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Rational;

/// Maximum allowed distance between the exact and floating cotangent sums.
pub const COTANGENT_TOLERANCE: f64 = 1e-9;

/// Integer types usable as the backing store of an exact fraction.
pub trait ExactInt: Integer + Signed + Clone + FromPrimitive + ToPrimitive {}

impl<T> ExactInt for T where T: Integer + Signed + Clone + FromPrimitive + ToPrimitive {}

/// The sawtooth `((x))`: zero on integers, `x - floor(x) - 1/2` elsewhere.
pub fn sawtooth<T: ExactInt>(x: &Ratio<T>) -> Ratio<T> {
    if x.is_integer() {
        return Ratio::zero();
    }
    let half = Ratio::new(T::one(), T::one() + T::one());
    x - x.floor() - half
}

/// Dedekind sum `s(h, k) = sum_{i=1}^{k-1} ((i/k)) ((h i/k))`.
///
/// Each sawtooth value at a fraction with denominator `k` is `(2r - k) / 2k`,
/// so the sum is accumulated in integers and divided by `4k^2` once.
///
/// Panics if `k < 1`.
pub fn dedekind_sum<T: ExactInt>(h: &T, k: &T) -> Ratio<T> {
    assert!(*k >= T::one(), "dedekind_sum requires k >= 1");
    let two = T::one() + T::one();
    let mut acc = T::zero();
    let mut i = T::one();
    while i < *k {
        let r = (h.clone() * i.clone()).mod_floor(k);
        if !r.is_zero() {
            let a = two.clone() * i.clone() - k.clone();
            let b = two.clone() * r - k.clone();
            acc = acc + a * b;
        }
        i = i + T::one();
    }
    let denom = two.clone() * two * k.clone() * k.clone();
    Ratio::new(acc, denom)
}

/// Inverse of `a` modulo `modulus`, reduced into `0..modulus`.
pub fn mod_inverse(a: i64, modulus: i64) -> Option<i64> {
    if modulus < 1 {
        return None;
    }
    let e = a.mod_floor(&modulus).extended_gcd(&modulus);
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.mod_floor(&modulus))
}

/// Rotation data `(p; m, n)` of a `Z/p` action on `S^3` fixing a point.
///
/// `m` and `n` are stored reduced into `1..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLensDatum", into = "RawLensDatum")]
pub struct LensDatum {
    p: i64,
    m: i64,
    n: i64,
}

#[derive(Serialize, Deserialize)]
struct RawLensDatum {
    p: i64,
    m: i64,
    n: i64,
}

impl TryFrom<RawLensDatum> for LensDatum {
    type Error = Error;
    fn try_from(raw: RawLensDatum) -> Result<Self> {
        LensDatum::new(raw.p, raw.m, raw.n)
    }
}

impl From<LensDatum> for RawLensDatum {
    fn from(d: LensDatum) -> Self {
        RawLensDatum {
            p: d.p,
            m: d.m,
            n: d.n,
        }
    }
}

impl LensDatum {
    pub fn new(p: i64, m: i64, n: i64) -> Result<Self> {
        let invalid = Error::InvalidLensDatum { p, m, n };
        if p < 2 || m.gcd(&p) != 1 || n.gcd(&p) != 1 {
            return Err(invalid);
        }
        Ok(Self {
            p,
            m: m.mod_floor(&p),
            n: n.mod_floor(&p),
        })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// `m * n^{-1} mod p`, the Dedekind sum argument after reindexing.
    pub fn reduced_ratio(&self) -> i64 {
        let inv = mod_inverse(self.n, self.p).expect("n is a unit mod p by construction");
        (self.m * inv).mod_floor(&self.p)
    }

    pub fn swapped(&self) -> Self {
        Self {
            p: self.p,
            m: self.n,
            n: self.m,
        }
    }
}

impl fmt::Display for LensDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({}; {}, {})", self.p, self.m, self.n)
    }
}

/// Both evaluations of a cotangent pair sum.
#[derive(Debug, Clone, PartialEq)]
pub struct CotangentSum {
    pub exact: Rational,
    pub float: f64,
}

impl CotangentSum {
    pub fn discrepancy(&self) -> f64 {
        (rational_to_f64(&self.exact) - self.float).abs()
    }
}

/// `cot(pi * r / p)` with `r` reduced into `0..p` first.
fn cot_pi_fraction<F: Float + FloatConst>(r: i64, p: i64) -> F {
    let r = r.mod_floor(&p);
    let x = F::PI() * F::from(r).unwrap() / F::from(p).unwrap();
    x.cos() / x.sin()
}

/// Direct floating-point evaluation of `sum_{k=1}^{p-1} cot(k m pi/p) cot(k n pi/p)`.
pub fn cotangent_pair_sum_float<F: Float + FloatConst>(datum: &LensDatum) -> F {
    let (p, m, n) = (datum.p, datum.m, datum.n);
    (1..p).fold(F::zero(), |acc, k| {
        acc + cot_pi_fraction::<F>(k * m, p) * cot_pi_fraction::<F>(k * n, p)
    })
}

/// Exact value `4 p s(m n^{-1}, p)` of the cotangent pair sum.
pub fn cotangent_pair_sum_exact(datum: &LensDatum) -> Rational {
    let h = BigInt::from(datum.reduced_ratio());
    let p = BigInt::from(datum.p);
    dedekind_sum(&h, &p) * Rational::from_integer(BigInt::from(4) * p)
}

/// Cotangent pair sum through both channels.
///
/// Panics if the channels disagree by more than [`COTANGENT_TOLERANCE`];
/// that would mean the exact identity itself is broken.
pub fn cotangent_pair_sum(datum: &LensDatum) -> CotangentSum {
    let sum = CotangentSum {
        exact: cotangent_pair_sum_exact(datum),
        float: cotangent_pair_sum_float::<f64>(datum),
    };
    assert!(
        sum.discrepancy() < COTANGENT_TOLERANCE,
        "cotangent channels disagree for {datum}: exact {} vs float {}",
        sum.exact,
        sum.float
    );
    sum
}

/// Precomputed cotangent values and Dedekind sums for a fixed order `p`.
///
/// Evaluating every `(m, n)` pair for a given `p` through the table costs
/// `O(p)` per pair instead of redoing the exact sum each time.
#[derive(Debug, Clone)]
pub struct LensTable {
    p: i64,
    cot: Vec<f64>,
    /// `4p s(h, p)` indexed by `h`.
    scaled: Vec<Rational>,
    /// `n^{-1} mod p`, zero for non-units.
    inverse: Vec<i64>,
}

impl LensTable {
    pub fn new(p: i64) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidLensDatum { p, m: 1, n: 1 });
        }
        let cot = (0..p).map(|r| cot_pi_fraction::<f64>(r, p)).collect();
        let big_p = BigInt::from(p);
        let four_p = Rational::from_integer(BigInt::from(4 * p));
        let scaled = (0..p)
            .map(|h| dedekind_sum(&BigInt::from(h), &big_p) * &four_p)
            .collect();
        let inverse = (0..p).map(|n| mod_inverse(n, p).unwrap_or(0)).collect();
        Ok(Self {
            p,
            cot,
            scaled,
            inverse,
        })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn pair_sum(&self, m: i64, n: i64) -> Result<CotangentSum> {
        let p = self.p;
        let (m, n) = (m.mod_floor(&p), n.mod_floor(&p));
        let (m_inv, n_inv) = (self.inverse[m as usize], self.inverse[n as usize]);
        if m_inv == 0 || n_inv == 0 {
            return Err(Error::InvalidLensDatum { p, m, n });
        }
        let (mut a, mut b) = (0, 0);
        let mut float = 0.0;
        for _ in 1..p {
            a += m;
            if a >= p {
                a -= p;
            }
            b += n;
            if b >= p {
                b -= p;
            }
            float += self.cot[a as usize] * self.cot[b as usize];
        }
        let exact = self.scaled[(m * n_inv % p) as usize].clone();
        Ok(CotangentSum { exact, float })
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Canonical text form: `a/b`, or `a` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Validation(format!("not a rational number: {s:?}"));
    if s.is_empty() || s.chars().any(char::is_whitespace) {
        return Err(bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Serde adapter storing a [`Rational`] as its canonical string.
pub mod rational_string {
    use super::{format_rational, parse_rational};
    use crate::Rational;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(de::Error::custom)
    }

    pub mod option {
        use super::{format_rational, parse_rational};
        use crate::Rational;
        use serde::{de, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_str(&format_rational(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| parse_rational(&s).map_err(de::Error::custom))
                .transpose()
        }
    }
}
