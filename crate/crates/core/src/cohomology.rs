//! Ground-truth basic cohomology for suspension foliations and the
//! twisted torus-bundle example.
//!
//! Basic cohomology of a suspension is taken to be the closure-invariant part
//! of the fiber cohomology. Fibers are modeled only through their cohomology
//! and the holonomy action on it; connected closure groups act trivially and
//! are represented by the trivial group.

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{
    exterior_power_action, isotypic_betti, tensor_action, validate_action, Character, CyclicGroup,
    GradedAction, IntMatrix,
};
use crate::Rational;

/// Betti numbers `b_0, ..., b_q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BettiVector(Vec<u64>);

impl BettiVector {
    pub fn new(betti: Vec<u64>) -> Self {
        Self(betti)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn top_degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn euler(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    /// Degreewise sum, padding the shorter vector with zeros.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let len = self.0.len().max(other.0.len());
        Self(
            (0..len)
                .map(|k| self.0.get(k).copied().unwrap_or(0) + other.0.get(k).copied().unwrap_or(0))
                .collect(),
        )
    }

    /// Moves every class up by `by` degrees.
    pub fn shifted(&self, by: usize) -> Self {
        let mut v = vec![0; by];
        v.extend_from_slice(&self.0);
        Self(v)
    }

    /// Künneth convolution.
    pub fn tensor(&self, other: &Self) -> Self {
        if self.0.is_empty() || other.0.is_empty() {
            return Self(Vec::new());
        }
        let mut out = vec![0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self(out)
    }
}

impl std::fmt::Display for BettiVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn default_sign() -> i8 {
    1
}

fn is_default_sign(s: &i8) -> bool {
    *s == 1
}

/// Cohomology model of a transverse fiber together with the holonomy
/// generator's action on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FiberModel {
    /// `T^n`; the action is given on `H^1` and extended to exterior powers.
    Torus {
        dimension: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        h1_action: Option<IntMatrix>,
    },
    /// `S^2`; `top_sign` is the action on the fundamental class.
    Sphere2 {
        #[serde(default = "default_sign", skip_serializing_if = "is_default_sign")]
        top_sign: i8,
    },
    Circle {
        #[serde(default = "default_sign", skip_serializing_if = "is_default_sign")]
        top_sign: i8,
    },
    Product {
        factors: Vec<FiberModel>,
    },
}

impl FiberModel {
    pub fn torus(h1_action: IntMatrix) -> Self {
        Self::Torus {
            dimension: h1_action.dim(),
            h1_action: Some(h1_action),
        }
    }

    pub fn sphere() -> Self {
        Self::Sphere2 { top_sign: 1 }
    }

    pub fn circle() -> Self {
        Self::Circle { top_sign: 1 }
    }

    /// Betti numbers of the underlying manifold, ignoring the action.
    pub fn betti(&self) -> BettiVector {
        match self {
            Self::Torus { dimension, .. } => {
                let n = *dimension as u64;
                let mut row = vec![1u64];
                for k in 0..n {
                    let next = row[k as usize] * (n - k) / (k + 1);
                    row.push(next);
                }
                BettiVector(row)
            }
            Self::Sphere2 { .. } => BettiVector(vec![1, 0, 1]),
            Self::Circle { .. } => BettiVector(vec![1, 1]),
            Self::Product { factors } => factors
                .iter()
                .fold(BettiVector(vec![1]), |acc, f| acc.tensor(&f.betti())),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Torus {
                dimension,
                h1_action: Some(m),
            } if m.dim() != *dimension => Err(Error::Validation(format!(
                "torus of dimension {dimension} with a {}x{} action on H^1",
                m.dim(),
                m.dim()
            ))),
            Self::Sphere2 { top_sign } | Self::Circle { top_sign } if top_sign.abs() != 1 => Err(
                Error::Validation(format!("top_sign must be 1 or -1, got {top_sign}")),
            ),
            Self::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::Validation(
                        "product fiber needs at least one factor".into(),
                    ));
                }
                factors.iter().try_for_each(FiberModel::validate)
            }
            _ => Ok(()),
        }
    }

    /// The generator's action on `H^*(fiber)`, as an action of `group`.
    pub fn graded_action(&self, group: CyclicGroup) -> Result<GradedAction> {
        self.validate()?;
        let action = match self {
            Self::Torus {
                dimension,
                h1_action,
            } => {
                let h1 = h1_action
                    .clone()
                    .unwrap_or_else(|| IntMatrix::identity(*dimension));
                exterior_power_action(group, &h1)
            }
            Self::Sphere2 { top_sign } => GradedAction::new(
                group,
                vec![
                    IntMatrix::identity(1),
                    IntMatrix::identity(0),
                    IntMatrix::scalar(i64::from(*top_sign)),
                ],
            ),
            Self::Circle { top_sign } => GradedAction::new(
                group,
                vec![
                    IntMatrix::identity(1),
                    IntMatrix::scalar(i64::from(*top_sign)),
                ],
            ),
            Self::Product { factors } => {
                let mut acc = GradedAction::trivial(group, &[1]);
                for f in factors {
                    acc = tensor_action(&acc, &f.graded_action(group)?)?;
                }
                acc
            }
        };
        Ok(action)
    }
}

/// Degree-`k` entry: multiplicity of `chi` in `H^k(fiber)` under the holonomy.
///
/// With the trivial character these are the basic Betti numbers of the
/// suspension.
pub fn suspension_basic_betti(
    fiber: &FiberModel,
    group: CyclicGroup,
    chi: &Character,
) -> Result<BettiVector> {
    let action = fiber.graded_action(group)?;
    validate_action(&action)?;
    isotypic_betti(&action, chi)
}

/// Multiplier of a flat line bundle over a circle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FlatCircleBundle {
    Scalar {
        #[serde(with = "crate::arith::rational_string")]
        multiplier: Rational,
    },
    Trivial,
    /// Holonomy known to differ from 1, e.g. an irrational eigenvalue.
    Nontrivial,
}

impl FlatCircleBundle {
    pub fn is_trivial(&self) -> Result<bool> {
        match self {
            Self::Scalar { multiplier } if !multiplier.is_positive() => {
                Err(Error::NonpositiveHolonomy(multiplier.to_string()))
            }
            Self::Scalar { multiplier } => Ok(multiplier.is_one()),
            Self::Trivial => Ok(true),
            Self::Nontrivial => Ok(false),
        }
    }
}

/// Cohomology of a circle with coefficients in a flat line bundle:
/// `(1,1)` for trivial holonomy, `(0,0)` otherwise.
pub fn flat_circle_betti(bundle: &FlatCircleBundle) -> Result<BettiVector> {
    Ok(if bundle.is_trivial()? {
        BettiVector(vec![1, 1])
    } else {
        BettiVector(vec![0, 0])
    })
}

/// Basic cohomology of the hyperbolic torus-bundle foliation.
///
/// Basic forms split into an untwisted part `{f(t), g(t) dt}` computing
/// `H^*(S^1)`, and a part `{g(t) v*, h(t) dt ∧ v*}` that is the circle
/// complex twisted by the stretching of `v`, shifted up one degree.
pub fn carriere_basic_betti(twist: &FlatCircleBundle) -> Result<BettiVector> {
    let untwisted = BettiVector(vec![1, 1]);
    let twisted = flat_circle_betti(twist)?.shifted(1);
    Ok(untwisted.direct_sum(&twisted))
}

/// Independent description of an example's basic cohomology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OracleModel {
    /// Suspension with the given fiber; the closure acts through `Z/group_order`.
    Suspension {
        fiber: FiberModel,
        group_order: CyclicGroup,
    },
    /// Torus bundle over a circle whose transverse direction is stretched
    /// by a flat line bundle.
    TorusBundle { twist: FlatCircleBundle },
}

impl OracleModel {
    pub fn basic_betti(&self) -> Result<BettiVector> {
        match self {
            Self::Suspension { fiber, group_order } => {
                suspension_basic_betti(fiber, *group_order, &group_order.trivial_character())
            }
            Self::TorusBundle { twist } => carriere_basic_betti(twist),
        }
    }

    /// The `rho`-isotypic Betti numbers, when the model carries a group action.
    pub fn isotypic_betti(&self, rho: &Character) -> Result<Option<BettiVector>> {
        match self {
            Self::Suspension { fiber, group_order } => {
                suspension_basic_betti(fiber, *group_order, rho).map(Some)
            }
            Self::TorusBundle { .. } if rho.is_trivial() => self.basic_betti().map(Some),
            Self::TorusBundle { .. } => Ok(None),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Suspension { fiber, group_order } => {
                validate_action(&fiber.graded_action(*group_order)?)
            }
            Self::TorusBundle { twist } => twist.is_trivial().map(|_| ()),
        }
    }
}

/// `sum_k (-1)^k b_k`.
pub fn basic_euler_oracle(betti: &BettiVector) -> i64 {
    betti.euler()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::tests::m;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn z(n: u64) -> CyclicGroup {
        CyclicGroup::new(n).unwrap()
    }

    #[test]
    fn fiber_betti_vectors() {
        assert_eq!(
            FiberModel::torus(IntMatrix::identity(3)).betti().as_slice(),
            &[1, 3, 3, 1]
        );
        assert_eq!(FiberModel::sphere().betti().as_slice(), &[1, 0, 1]);
        assert_eq!(FiberModel::circle().betti().as_slice(), &[1, 1]);
        let p = FiberModel::Product {
            factors: vec![FiberModel::circle(), FiberModel::sphere()],
        };
        assert_eq!(p.betti().as_slice(), &[1, 1, 1, 1]);
        assert_eq!(p.graded_action(z(1)).unwrap().degrees(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn suspension_examples() {
        let rot = FiberModel::torus(m(&[&[0, -1], &[1, 0]]));
        let g = z(4);
        assert_eq!(
            suspension_basic_betti(&rot, g, &g.trivial_character())
                .unwrap()
                .as_slice(),
            &[1, 0, 1]
        );

        let flip = FiberModel::torus(m(&[&[-1, 0], &[0, -1]]));
        let g = z(2);
        assert_eq!(
            suspension_basic_betti(&flip, g, &g.trivial_character())
                .unwrap()
                .as_slice(),
            &[1, 0, 1]
        );

        let g = CyclicGroup::trivial();
        assert_eq!(
            suspension_basic_betti(&FiberModel::sphere(), g, &g.trivial_character())
                .unwrap()
                .as_slice(),
            &[1, 0, 1]
        );
        let s1s2 = FiberModel::Product {
            factors: vec![FiberModel::circle(), FiberModel::sphere()],
        };
        let b = suspension_basic_betti(&s1s2, g, &g.trivial_character()).unwrap();
        assert_eq!(b.as_slice(), &[1, 1, 1, 1]);
        assert_eq!(basic_euler_oracle(&b), 0);
    }

    #[test]
    fn product_action_with_flips() {
        // Z/2 flipping both the circle and the sphere: invariant classes are
        // 1 and the product of the two fundamental classes.
        let f = FiberModel::Product {
            factors: vec![
                FiberModel::Circle { top_sign: -1 },
                FiberModel::Sphere2 { top_sign: -1 },
            ],
        };
        let g = z(2);
        let b = suspension_basic_betti(&f, g, &g.trivial_character()).unwrap();
        assert_eq!(b.as_slice(), &[1, 0, 0, 1]);
    }

    #[test]
    fn invalid_fibers() {
        let bad = FiberModel::Torus {
            dimension: 3,
            h1_action: Some(IntMatrix::identity(2)),
        };
        assert!(bad.validate().is_err());
        assert!(FiberModel::Circle { top_sign: 2 }.validate().is_err());
        assert!(FiberModel::Product { factors: vec![] }.validate().is_err());
        let cat = FiberModel::torus(m(&[&[2, 1], &[1, 1]]));
        assert!(matches!(
            suspension_basic_betti(&cat, z(4), &z(4).trivial_character()),
            Err(Error::RelationViolation { .. })
        ));
    }

    #[test]
    fn flat_circle_cases() {
        let q = |n: i64, d: i64| Rational::new(BigInt::from(n), BigInt::from(d));
        let one = FlatCircleBundle::Scalar {
            multiplier: q(1, 1),
        };
        assert_eq!(flat_circle_betti(&one).unwrap().as_slice(), &[1, 1]);
        let stretch = FlatCircleBundle::Scalar {
            multiplier: q(3, 2),
        };
        assert_eq!(flat_circle_betti(&stretch).unwrap().as_slice(), &[0, 0]);
        assert_eq!(
            flat_circle_betti(&FlatCircleBundle::Nontrivial)
                .unwrap()
                .as_slice(),
            &[0, 0]
        );
        assert_eq!(
            flat_circle_betti(&FlatCircleBundle::Trivial)
                .unwrap()
                .as_slice(),
            &[1, 1]
        );
        for bad in [q(0, 1), q(-2, 3)] {
            assert!(matches!(
                flat_circle_betti(&FlatCircleBundle::Scalar { multiplier: bad }),
                Err(Error::NonpositiveHolonomy(_))
            ));
        }
    }

    #[test]
    fn carriere_cases() {
        let b = carriere_basic_betti(&FlatCircleBundle::Nontrivial).unwrap();
        assert_eq!(b.as_slice(), &[1, 1, 0]);
        assert_eq!(basic_euler_oracle(&b), 0);
        // Untwisted: the quotient is S^1 x S^1 and Künneth gives (1,2,1).
        let b = carriere_basic_betti(&FlatCircleBundle::Trivial).unwrap();
        let kunneth = FiberModel::circle()
            .betti()
            .tensor(&FiberModel::circle().betti());
        assert_eq!(b, kunneth);
        assert_eq!(b.as_slice(), &[1, 2, 1]);
    }

    #[test]
    fn euler_oracle() {
        assert_eq!(basic_euler_oracle(&BettiVector::new(vec![1, 0, 1])), 2);
        assert_eq!(basic_euler_oracle(&BettiVector::new(vec![1, 1, 1, 1])), 0);
        assert_eq!(basic_euler_oracle(&BettiVector::new(vec![0, 0, 0])), 0);
        assert_eq!(basic_euler_oracle(&BettiVector::new(vec![])), 0);
    }

    #[test]
    fn fiber_json_shape() {
        let f: FiberModel =
            serde_json::from_str(r#"{"kind":"torus","dimension":2,"h1_action":[[0,-1],[1,0]]}"#)
                .unwrap();
        assert_eq!(f, FiberModel::torus(m(&[&[0, -1], &[1, 0]])));
        let s = serde_json::to_string(&FiberModel::sphere()).unwrap();
        assert_eq!(s, r#"{"kind":"sphere2"}"#);
    }

    fn simple_fiber() -> impl Strategy<Value = FiberModel> {
        let sign = prop_oneof![Just(1i8), Just(-1i8)];
        let leaf = prop_oneof![
            sign.clone()
                .prop_map(|s| FiberModel::Circle { top_sign: s }),
            sign.prop_map(|s| FiberModel::Sphere2 { top_sign: s }),
            (1usize..=3).prop_map(|n| FiberModel::Torus {
                dimension: n,
                h1_action: Some(
                    IntMatrix::from_rows(
                        (0..n)
                            .map(|i| (0..n).map(|j| if i == j { -1 } else { 0 }).collect())
                            .collect()
                    )
                    .unwrap()
                ),
            }),
        ];
        prop::collection::vec(leaf, 1..=3).prop_map(|factors| FiberModel::Product { factors })
    }

    fn untwisted(f: &FiberModel) -> FiberModel {
        match f {
            FiberModel::Torus { dimension, .. } => FiberModel::Torus {
                dimension: *dimension,
                h1_action: None,
            },
            FiberModel::Sphere2 { .. } => FiberModel::sphere(),
            FiberModel::Circle { .. } => FiberModel::circle(),
            FiberModel::Product { factors } => FiberModel::Product {
                factors: factors.iter().map(untwisted).collect(),
            },
        }
    }

    proptest! {
        #[test]
        fn trivial_group_returns_fiber_betti(fiber in simple_fiber().prop_map(|f| untwisted(&f))) {
            let g = CyclicGroup::trivial();
            let b = suspension_basic_betti(&fiber, g, &g.trivial_character()).unwrap();
            prop_assert_eq!(b, fiber.betti());
        }

        #[test]
        fn characters_sum_to_fiber_betti(fiber in simple_fiber()) {
            let g = z(2);
            let total = g
                .characters()
                .map(|chi| suspension_basic_betti(&fiber, g, &chi).unwrap())
                .fold(BettiVector::new(vec![]), |acc, b| acc.direct_sum(&b));
            prop_assert_eq!(total, fiber.betti());
        }

        #[test]
        fn flat_circle_balanced(n in 1i64..50, d in 1i64..50) {
            let bundle = FlatCircleBundle::Scalar {
                multiplier: Rational::new(BigInt::from(n), BigInt::from(d)),
            };
            let b = flat_circle_betti(&bundle).unwrap();
            prop_assert_eq!(b.as_slice()[0], b.as_slice()[1]);
        }
    }
}
