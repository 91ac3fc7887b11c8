//! Stratified Gauss-Bonnet assembly for the basic Euler characteristic.
//!
//! `chi(M, F) = sum_j chi(M_j / closure) * chi(L_j, F, O_j)`, where the
//! quotient Euler characteristic uses the extended convention for open
//! strata and `L_j` is a representative leaf closure twisted by the
//! orientation line of the stratum's normal bundle.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cohomology::{basic_euler_oracle, suspension_basic_betti, BettiVector, FiberModel};
use crate::error::{Error, Result};
use crate::group::{Character, CyclicGroup};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    Closed,
    Open,
}

/// A leaf-closure space `M_j / closure`.
///
/// For an open space `euler_closed` is the Euler characteristic of its
/// one-point compactification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtendedSpace {
    pub kind: SpaceKind,
    pub euler_closed: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<u32>,
}

impl ExtendedSpace {
    pub fn closed(euler: i64) -> Self {
        Self {
            kind: SpaceKind::Closed,
            euler_closed: euler,
            dimension: None,
        }
    }

    pub fn open(euler_of_compactification: i64) -> Self {
        Self {
            kind: SpaceKind::Open,
            euler_closed: euler_of_compactification,
            dimension: None,
        }
    }

    pub fn with_dimension(mut self, dimension: u32) -> Self {
        self.dimension = Some(dimension);
        self
    }
}

/// Extended Euler characteristic: `chi(Y)` for closed `Y`, and
/// `chi(one-point compactification of Y) - 1` for open `Y`.
pub fn extended_euler(space: &ExtendedSpace) -> i64 {
    match space.kind {
        SpaceKind::Closed => space.euler_closed,
        SpaceKind::Open => space.euler_closed - 1,
    }
}

/// Orientation line of a stratum's normal bundle, as a character.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Twist {
    #[default]
    Trivial,
    Orientation,
}

impl Twist {
    fn is_trivial(&self) -> bool {
        *self == Twist::Trivial
    }
}

/// Model of a representative leaf closure `L_j` with its restricted foliation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LeafClosureModel {
    /// The closure is a single compact leaf: `chi = 1`.
    SingleLeaf,
    /// Twisted basic Betti numbers supplied directly.
    QuotientBetti { betti: BettiVector },
    /// The closure is itself a suspension; the stratum twist selects the
    /// sign character of the holonomy group.
    SuspensionClosure {
        fiber: FiberModel,
        group_order: CyclicGroup,
    },
    /// Linear flow with dense leaves on a flat torus: `chi = 0`.
    IrrationalFlowTorus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stratum {
    pub name: String,
    pub quotient: ExtendedSpace,
    pub leaf_closure: LeafClosureModel,
    #[serde(default, skip_serializing_if = "Twist::is_trivial")]
    pub twist: Twist,
}

impl Stratum {
    pub fn new(
        name: impl Into<String>,
        quotient: ExtendedSpace,
        leaf_closure: LeafClosureModel,
    ) -> Self {
        Self {
            name: name.into(),
            quotient,
            leaf_closure,
            twist: Twist::Trivial,
        }
    }

    /// Zero-dimensional leaf-closure spaces are canonically oriented, so the
    /// twist is forced trivial there.
    pub fn effective_twist(&self) -> Twist {
        match self.quotient.dimension {
            Some(0) => Twist::Trivial,
            _ => self.twist,
        }
    }
}

fn twist_character(group: CyclicGroup, twist: Twist) -> Result<Character> {
    match twist {
        Twist::Trivial => Ok(group.trivial_character()),
        Twist::Orientation => group.sign_character().ok_or_else(|| {
            Error::Validation(format!(
                "orientation twist needs an order-2 quotient, but Z/{} has odd order",
                group.order()
            ))
        }),
    }
}

/// Twisted basic Euler characteristic `chi(L, F, O)` of a leaf closure.
pub fn leaf_closure_euler(model: &LeafClosureModel, twist: Twist) -> Result<i64> {
    Ok(match model {
        LeafClosureModel::SingleLeaf => 1,
        LeafClosureModel::IrrationalFlowTorus => 0,
        LeafClosureModel::QuotientBetti { betti } => basic_euler_oracle(betti),
        LeafClosureModel::SuspensionClosure { fiber, group_order } => {
            let chi = twist_character(*group_order, twist)?;
            basic_euler_oracle(&suspension_basic_betti(fiber, *group_order, &chi)?)
        }
    })
}

/// `chi^rho(L, F, O)` when the model determines it, `None` otherwise.
pub fn leaf_closure_rho_euler(
    model: &LeafClosureModel,
    twist: Twist,
    rho: &Character,
) -> Result<Option<i64>> {
    match model {
        LeafClosureModel::SuspensionClosure { fiber, group_order } => {
            if rho.order() != group_order.order() {
                return Err(Error::CharacterMismatch {
                    group_order: group_order.order(),
                    character_order: rho.order(),
                });
            }
            let chi = twist_character(*group_order, twist)?.product(rho)?;
            Ok(Some(basic_euler_oracle(&suspension_basic_betti(
                fiber,
                *group_order,
                &chi,
            )?)))
        }
        _ if rho.is_trivial() => leaf_closure_euler(model, twist).map(Some),
        _ => Ok(None),
    }
}

/// Per-stratum `chi^rho(L_j)` values, indexed `[stratum][character index]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhoTable {
    pub group_order: CyclicGroup,
    pub values: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoliationExample {
    pub name: String,
    pub strata: Vec<Stratum>,
    pub rho_table: Option<RhoTable>,
}

impl FoliationExample {
    pub fn new(name: impl Into<String>, strata: Vec<Stratum>) -> Self {
        Self {
            name: name.into(),
            strata,
            rho_table: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.strata.is_empty() {
            return Err(Error::Validation(format!(
                "example {:?} has no strata",
                self.name
            )));
        }
        if let Some(table) = &self.rho_table {
            if table.values.len() != self.strata.len() {
                return Err(Error::Validation(format!(
                    "rho table has {} rows for {} strata",
                    table.values.len(),
                    self.strata.len()
                )));
            }
            let order = table.group_order.order() as usize;
            if let Some(row) = table.values.iter().position(|r| r.len() != order) {
                return Err(Error::Validation(format!(
                    "rho table row {row} does not have {order} entries"
                )));
            }
        }
        Ok(())
    }
}

/// Basic Gauss-Bonnet sum over the strata.
pub fn gauss_bonnet(example: &FoliationExample) -> Result<i64> {
    example.validate()?;
    example.strata.iter().try_fold(0i64, |acc, s| {
        let q = extended_euler(&s.quotient);
        if q == 0 {
            return Ok(acc);
        }
        Ok(acc + q * leaf_closure_euler(&s.leaf_closure, s.effective_twist())?)
    })
}

/// Representation-valued Gauss-Bonnet sum.
///
/// Leaf-closure values come from the example's rho table when present and
/// are otherwise computed from the leaf-closure models.
pub fn rep_valued_gauss_bonnet(example: &FoliationExample, rho: &Character) -> Result<i64> {
    example.validate()?;
    if let Some(table) = &example.rho_table {
        if table.group_order.order() != rho.order() {
            return Err(Error::CharacterMismatch {
                group_order: table.group_order.order(),
                character_order: rho.order(),
            });
        }
    }
    example
        .strata
        .iter()
        .enumerate()
        .try_fold(0i64, |acc, (j, s)| {
            let value = match &example.rho_table {
                Some(table) => table.values[j][rho.index() as usize],
                None => leaf_closure_rho_euler(&s.leaf_closure, s.effective_twist(), rho)?
                    .ok_or_else(|| Error::MissingRhoTable {
                        stratum: s.name.clone(),
                        index: rho.index(),
                    })?,
            };
            Ok(acc + extended_euler(&s.quotient) * value)
        })
}

/// Isotypic type of the normal sphere operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SphereRepresentation {
    Trivial,
    /// The `±1` orientation character of the isotropy group.
    Xi,
    Other,
}

/// Kernel dimension of the de Rham spherical operator on one isotypic part.
pub fn h_de_rham(sigma: SphereRepresentation, orientation_preserving: bool) -> u8 {
    match (sigma, orientation_preserving) {
        (SphereRepresentation::Trivial, true) => 2,
        (SphereRepresentation::Trivial, false) => 1,
        (SphereRepresentation::Xi, false) => 1,
        _ => 0,
    }
}

/// Eta invariant of the de Rham spherical operator; zero on every
/// isotypic part.
pub fn eta_de_rham_sphere(_sigma: SphereRepresentation) -> Rational {
    Rational::from_integer(BigInt::from(0))
}

/// Coefficient `(h(xi) + h(1)) / 2` in front of each singular stratum's
/// twisted integral.
pub fn beta_coefficient(orientation_preserving: bool) -> Rational {
    let h = |s| BigInt::from(h_de_rham(s, orientation_preserving));
    Rational::new(
        h(SphereRepresentation::Xi) + h(SphereRepresentation::Trivial),
        BigInt::from(2),
    )
}
