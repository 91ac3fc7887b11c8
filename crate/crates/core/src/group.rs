//! Finite cyclic group actions on graded cohomology and their isotypic parts.
//!
//! A [`GradedAction`] assigns to the generator of `Z/p` one integer matrix per
//! cohomological degree. Multiplicities of a character are computed by
//! averaging `conj(chi(g)) * tr(g)` over the group in complex floating point
//! and then checked for integrality.

use std::fmt;

use num_complex::Complex;
use num_traits::{Float, FloatConst};
use serde::{Deserialize, Serialize};

use crate::cohomology::BettiVector;
use crate::error::{Error, Result};

/// Slack allowed between a character average and the nearest integer.
pub const INTEGRALITY_TOLERANCE: f64 = 1e-9;

/// Square matrix with `i64` entries, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl TryFrom<Vec<Vec<i64>>> for IntMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        IntMatrix::from_rows(rows)
    }
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        m.rows()
    }
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "row {bad} of a {dim}-row matrix has {} entries",
                rows[bad].len()
            )));
        }
        Ok(Self {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        Self { dim, entries }
    }

    pub fn scalar(value: i64) -> Self {
        Self {
            dim: 1,
            entries: vec![value],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries
            .chunks(self.dim.max(1))
            .take(self.dim)
            .map(<[i64]>::to_vec)
            .collect()
    }

    pub fn trace(&self) -> i64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    /// Product, or `None` on dimension mismatch or overflow.
    pub fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        if self.dim != rhs.dim {
            return None;
        }
        let n = self.dim;
        let mut entries = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0i64;
                for k in 0..n {
                    acc = acc.checked_add(self.get(i, k).checked_mul(rhs.get(k, j))?)?;
                }
                entries[i * n + j] = acc;
            }
        }
        Some(Self { dim: n, entries })
    }

    pub fn checked_pow(&self, exp: u64) -> Option<Self> {
        let mut out = Self::identity(self.dim);
        for _ in 0..exp {
            out = out.checked_mul(self)?;
        }
        Some(out)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i128 {
        self.minor(
            &(0..self.dim).collect::<Vec<_>>(),
            &(0..self.dim).collect::<Vec<_>>(),
        )
    }

    /// Determinant of the submatrix on the given rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> i128 {
        let k = rows.len();
        debug_assert_eq!(k, cols.len());
        if k == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = rows
            .iter()
            .map(|&r| cols.iter().map(|&c| i128::from(self.get(r, c))).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for piv in 0..k - 1 {
            if a[piv][piv] == 0 {
                match (piv + 1..k).find(|&r| a[r][piv] != 0) {
                    Some(r) => {
                        a.swap(piv, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in piv + 1..k {
                for j in piv + 1..k {
                    a[i][j] = (a[i][j] * a[piv][piv] - a[i][piv] * a[piv][j]) / prev;
                }
            }
            prev = a[piv][piv];
        }
        sign * a[k - 1][k - 1]
    }

    /// k-th exterior power in the lexicographic basis of k-subsets.
    pub fn exterior_power(&self, k: usize) -> Self {
        let subsets = k_subsets(self.dim, k);
        let dim = subsets.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for rows in &subsets {
            for cols in &subsets {
                let m = self.minor(rows, cols);
                entries.push(i64::try_from(m).expect("exterior power entry overflows i64"));
            }
        }
        Self { dim, entries }
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kronecker(&self, rhs: &Self) -> Self {
        let (a, b) = (self.dim, rhs.dim);
        let dim = a * b;
        let mut entries = vec![0; dim * dim];
        for i in 0..a {
            for j in 0..a {
                for k in 0..b {
                    for l in 0..b {
                        entries[(i * b + k) * dim + (j * b + l)] = self.get(i, j) * rhs.get(k, l);
                    }
                }
            }
        }
        Self { dim, entries }
    }

    pub fn block_diagonal(blocks: &[Self]) -> Self {
        let dim = blocks.iter().map(|b| b.dim).sum();
        let mut entries = vec![0; dim * dim];
        let mut offset = 0;
        for b in blocks {
            for i in 0..b.dim {
                for j in 0..b.dim {
                    entries[(offset + i) * dim + offset + j] = b.get(i, j);
                }
            }
            offset += b.dim;
        }
        Self { dim, entries }
    }
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// The cyclic group `Z/order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct CyclicGroup {
    order: u64,
}

impl TryFrom<u64> for CyclicGroup {
    type Error = Error;
    fn try_from(order: u64) -> Result<Self> {
        CyclicGroup::new(order)
    }
}

impl From<CyclicGroup> for u64 {
    fn from(g: CyclicGroup) -> Self {
        g.order
    }
}

impl CyclicGroup {
    pub fn new(order: u64) -> Result<Self> {
        if order == 0 {
            return Err(Error::Validation("group order must be at least 1".into()));
        }
        Ok(Self { order })
    }

    /// The trivial group, standing in for any connected closure group.
    pub fn trivial() -> Self {
        Self { order: 1 }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn characters(&self) -> impl Iterator<Item = Character> + '_ {
        (0..self.order).map(move |index| Character {
            order: self.order,
            index,
        })
    }

    pub fn trivial_character(&self) -> Character {
        Character {
            order: self.order,
            index: 0,
        }
    }

    /// The `±1` character, sending the generator to `-1`. Needs even order.
    pub fn sign_character(&self) -> Option<Character> {
        self.order.is_multiple_of(2).then_some(Character {
            order: self.order,
            index: self.order / 2,
        })
    }

    pub fn character(&self, index: i64) -> Character {
        let order = self.order as i64;
        Character {
            order: self.order,
            index: index.rem_euclid(order) as u64,
        }
    }
}

/// The character `g^k ↦ exp(2 pi i j k / order)` of `Z/order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Character {
    order: u64,
    index: u64,
}

impl Character {
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn is_trivial(&self) -> bool {
        self.index == 0
    }

    pub fn is_sign(&self) -> bool {
        self.order.is_multiple_of(2) && self.index == self.order / 2
    }

    /// Pointwise product of two characters of the same group.
    pub fn product(&self, other: &Character) -> Result<Character> {
        if self.order != other.order {
            return Err(Error::CharacterMismatch {
                group_order: self.order,
                character_order: other.order,
            });
        }
        Ok(Character {
            order: self.order,
            index: (self.index + other.index) % self.order,
        })
    }

    /// Value on the `power`-th power of the generator.
    pub fn value<F: Float + FloatConst>(&self, power: u64) -> Complex<F> {
        let phase = (self.index * power) % self.order;
        let angle = F::TAU() * F::from(phase).unwrap() / F::from(self.order).unwrap();
        Complex::from_polar(F::one(), angle)
    }
}

/// Action of the generator of a cyclic group on `H^0, ..., H^q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAction {
    group: CyclicGroup,
    generator: Vec<IntMatrix>,
}

impl GradedAction {
    pub fn new(group: CyclicGroup, generator: Vec<IntMatrix>) -> Self {
        Self { group, generator }
    }

    /// Every degree acted on by the identity.
    pub fn trivial(group: CyclicGroup, degrees: &[usize]) -> Self {
        Self {
            group,
            generator: degrees.iter().map(|&d| IntMatrix::identity(d)).collect(),
        }
    }

    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    pub fn top_degree(&self) -> usize {
        self.generator.len().saturating_sub(1)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.generator.iter().map(IntMatrix::dim).collect()
    }

    pub fn matrix(&self, degree: usize) -> Option<&IntMatrix> {
        self.generator.get(degree)
    }

    /// Same matrices, reinterpreted for a different group order.
    pub fn with_group(&self, group: CyclicGroup) -> Self {
        Self {
            group,
            generator: self.generator.clone(),
        }
    }

    fn powers(&self, degree: usize) -> Vec<IntMatrix> {
        let g = &self.generator[degree];
        let mut out = Vec::with_capacity(self.group.order as usize);
        let mut cur = IntMatrix::identity(g.dim());
        for _ in 0..self.group.order {
            let next = cur
                .checked_mul(g)
                .expect("validated action has bounded powers");
            out.push(cur);
            cur = next;
        }
        out
    }
}

/// Checks that the generator is unimodular in every degree and that its
/// `order`-th power is the identity.
pub fn validate_action(action: &GradedAction) -> Result<()> {
    for (degree, g) in action.generator.iter().enumerate() {
        let violation = |reason: String| Error::RelationViolation {
            degree,
            generator: 0,
            reason,
        };
        let det = g.det();
        if det.abs() != 1 {
            return Err(violation(format!("determinant {det} is not a unit")));
        }
        match g.checked_pow(action.group.order) {
            Some(p) if p.is_identity() => {}
            Some(_) => {
                return Err(violation(format!(
                    "generator^{} is not the identity",
                    action.group.order
                )))
            }
            None => {
                return Err(violation(
                    "powers overflow; matrix has infinite order".into(),
                ))
            }
        }
    }
    Ok(())
}

fn check_character(action: &GradedAction, chi: &Character) -> Result<()> {
    if chi.order != action.group.order {
        return Err(Error::CharacterMismatch {
            group_order: action.group.order,
            character_order: chi.order,
        });
    }
    Ok(())
}

fn check_degree(action: &GradedAction, degree: usize) -> Result<()> {
    if degree >= action.generator.len() {
        return Err(Error::DimensionMismatch(format!(
            "degree {degree} outside 0..={}",
            action.top_degree()
        )));
    }
    Ok(())
}

/// `(1/|G|) sum_g conj(chi(g)) tr(g | H^degree)`, unrounded.
pub fn character_average<F: Float + FloatConst>(
    action: &GradedAction,
    degree: usize,
    chi: &Character,
) -> Result<Complex<F>> {
    validate_action(action)?;
    check_character(action, chi)?;
    check_degree(action, degree)?;
    let total = action
        .powers(degree)
        .iter()
        .enumerate()
        .fold(Complex::new(F::zero(), F::zero()), |acc, (k, g)| {
            acc + chi.value::<F>(k as u64).conj() * F::from(g.trace()).unwrap()
        });
    Ok(total / F::from(action.group.order).unwrap())
}

/// Multiplicity of `chi` in the degree-`degree` cohomology.
pub fn isotypic_multiplicity(action: &GradedAction, degree: usize, chi: &Character) -> Result<u64> {
    let avg = character_average::<f64>(action, degree, chi)?;
    let rounded = avg.re.round();
    if (avg.re - rounded).abs() > INTEGRALITY_TOLERANCE
        || avg.im.abs() > INTEGRALITY_TOLERANCE
        || rounded < 0.0
    {
        return Err(Error::NonIntegralMultiplicity {
            degree,
            value: avg.re,
        });
    }
    Ok(rounded as u64)
}

/// Multiplicities of `chi` in every degree.
pub fn isotypic_betti(action: &GradedAction, chi: &Character) -> Result<BettiVector> {
    (0..action.generator.len())
        .map(|k| isotypic_multiplicity(action, k, chi))
        .collect::<Result<Vec<_>>>()
        .map(BettiVector::new)
}

/// Dimensions of the invariant subspaces, degree by degree.
pub fn invariant_betti(action: &GradedAction) -> Result<BettiVector> {
    isotypic_betti(action, &action.group.trivial_character())
}

/// Isotypic projector `(1/|G|) sum_g conj(chi(g)) g` on one degree, row-major.
pub fn isotypic_projector<F: Float + FloatConst>(
    action: &GradedAction,
    degree: usize,
    chi: &Character,
) -> Result<Vec<Vec<Complex<F>>>> {
    validate_action(action)?;
    check_character(action, chi)?;
    check_degree(action, degree)?;
    let d = action.generator[degree].dim();
    let mut p = vec![vec![Complex::new(F::zero(), F::zero()); d]; d];
    let scale = F::from(action.group.order).unwrap();
    for (k, g) in action.powers(degree).iter().enumerate() {
        let w = chi.value::<F>(k as u64).conj() / scale;
        for (i, row) in p.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = *entry + w * F::from(g.get(i, j)).unwrap();
            }
        }
    }
    Ok(p)
}

/// Induced action on `H^*(T^n) = Λ^* H^1(T^n)` from the action on `H^1`.
pub fn exterior_power_action(group: CyclicGroup, on_h1: &IntMatrix) -> GradedAction {
    let n = on_h1.dim();
    GradedAction {
        group,
        generator: (0..=n).map(|k| on_h1.exterior_power(k)).collect(),
    }
}

/// Künneth product of two actions of the same group.
pub fn tensor_action(a: &GradedAction, b: &GradedAction) -> Result<GradedAction> {
    if a.group != b.group {
        return Err(Error::Validation(format!(
            "tensor of actions of Z/{} and Z/{}",
            a.group.order, b.group.order
        )));
    }
    let top = a.top_degree() + b.top_degree();
    let generator = (0..=top)
        .map(|k| {
            let blocks: Vec<IntMatrix> = (0..=k)
                .filter_map(|i| Some(a.generator.get(i)?.kronecker(b.generator.get(k - i)?)))
                .collect();
            IntMatrix::block_diagonal(&blocks)
        })
        .collect();
    Ok(GradedAction {
        group: a.group,
        generator,
    })
}
