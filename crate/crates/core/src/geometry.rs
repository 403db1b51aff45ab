//! Array geometries on the half-wavelength integer grid.
//!
//! Every position is an integer multiple of `d1 = λ/2`. The generators cover
//! the classic sparse families (nested, coprime, augmented nested, super
//! nested), the recursive Cantor fractal, and the cross-sum that combines a
//! sparse subarray with a scaled Cantor array into a sparse fractal array.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest Cantor order accepted by [`gen_cantor`] (2^20 sensors).
pub const MAX_CANTOR_ORDER: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArrayKind {
    Ula,
    Nested,
    Coprime,
    Ana1,
    Ana2,
    SuperNested,
    Cantor,
    Sfa,
    /// Any user-supplied position list.
    Custom,
}

impl fmt::Display for ArrayKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ArrayKind::Ula => "ula",
            ArrayKind::Nested => "nested",
            ArrayKind::Coprime => "coprime",
            ArrayKind::Ana1 => "ana1",
            ArrayKind::Ana2 => "ana2",
            ArrayKind::SuperNested => "super_nested",
            ArrayKind::Cantor => "cantor",
            ArrayKind::Sfa => "sfa",
            ArrayKind::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// A linear array: strictly increasing, non-negative integer positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawArray")]
pub struct SensorArray {
    kind: ArrayKind,
    label: String,
    positions: Vec<i64>,
}

#[derive(Deserialize)]
struct RawArray {
    kind: Option<ArrayKind>,
    #[serde(default)]
    label: String,
    positions: Vec<i64>,
}

impl TryFrom<RawArray> for SensorArray {
    type Error = Error;

    fn try_from(raw: RawArray) -> Result<Self> {
        SensorArray::new(
            raw.kind.unwrap_or(ArrayKind::Custom),
            raw.label,
            raw.positions,
        )
    }
}

impl SensorArray {
    /// Validates the invariants; positions must already be sorted and distinct.
    pub fn new(kind: ArrayKind, label: impl Into<String>, positions: Vec<i64>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidArray("array has no sensors".into()));
        }
        if let Some(&p) = positions.iter().find(|&&p| p < 0) {
            return Err(Error::InvalidArray(format!("negative position {p}")));
        }
        if let Some(w) = positions.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArray(format!(
                "positions not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        Ok(Self {
            kind,
            label: label.into(),
            positions,
        })
    }

    /// Sorts and deduplicates before validating.
    pub fn from_unsorted(
        kind: ArrayKind,
        label: impl Into<String>,
        positions: impl IntoIterator<Item = i64>,
    ) -> Result<Self> {
        let set: BTreeSet<i64> = positions.into_iter().collect();
        Self::new(kind, label, set.into_iter().collect())
    }

    pub fn custom(positions: impl IntoIterator<Item = i64>) -> Result<Self> {
        Self::from_unsorted(ArrayKind::Custom, "custom", positions)
    }

    pub fn kind(&self) -> ArrayKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn positions(&self) -> &[i64] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    /// Always false; arrays are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn contains(&self, position: i64) -> bool {
        self.positions.binary_search(&position).is_ok()
    }

    pub fn first(&self) -> i64 {
        self.positions[0]
    }

    pub fn last(&self) -> i64 {
        self.positions[self.positions.len() - 1]
    }

    /// Largest separation between two sensors.
    pub fn aperture(&self) -> i64 {
        self.last() - self.first()
    }

    /// Every position multiplied by `factor`.
    pub fn scaled(&self, factor: i64) -> Result<Self> {
        if factor < 1 {
            return Err(Error::InvalidParameter(format!(
                "scale factor must be positive, got {factor}"
            )));
        }
        Self::new(
            self.kind,
            format!("{}*{factor}", self.label),
            self.positions.iter().map(|p| p * factor).collect(),
        )
    }

    /// The array with the given positions removed. Fails if nothing remains.
    pub fn without(&self, removed: &[i64]) -> Result<Self> {
        let kept: Vec<i64> = self
            .positions
            .iter()
            .copied()
            .filter(|p| !removed.contains(p))
            .collect();
        Self::new(self.kind, self.label.clone(), kept)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inner/outer element counts of the two-level nested array with `n` sensors.
fn nested_split(n: usize) -> (usize, usize) {
    if n.is_multiple_of(2) {
        (n / 2, n / 2)
    } else {
        ((n - 1) / 2, n.div_ceil(2))
    }
}

/// Uniform linear array `{0, 1, …, n−1}`.
pub fn gen_ula(n: usize) -> Result<SensorArray> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "ULA needs at least one sensor".into(),
        ));
    }
    SensorArray::new(ArrayKind::Ula, format!("ULA({n})"), (0..n as i64).collect())
}

/// Two-level nested array with `n` sensors, split evenly (outer gets the extra
/// sensor when `n` is odd).
pub fn gen_nested(n: usize) -> Result<SensorArray> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "nested array needs at least 2 sensors, got {n}"
        )));
    }
    let (n1, n2) = nested_split(n);
    Ok(gen_nested_two_level(n1, n2)?.with_label(format!("nested({n})")))
}

/// Nested array with an inner ULA `{1..n1}` and outer ULA `{m(n1+1) : m = 1..n2}`.
pub fn gen_nested_two_level(n1: usize, n2: usize) -> Result<SensorArray> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "nested levels must be non-empty, got ({n1}, {n2})"
        )));
    }
    let spacing = n1 as i64 + 1;
    let inner = 1..=n1 as i64;
    let outer = (1..=n2 as i64).map(|m| m * spacing);
    SensorArray::from_unsorted(
        ArrayKind::Nested,
        format!("nested({n1},{n2})"),
        inner.chain(outer),
    )
}

/// Extended coprime array `{m·i : i < n} ∪ {n·j : j < 2m}` with `2m + n − 1` sensors.
pub fn gen_coprime(m: usize, n: usize) -> Result<SensorArray> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter(
            "coprime pair must be positive".into(),
        ));
    }
    if m >= n {
        return Err(Error::InvalidParameter(format!(
            "coprime pair needs m < n, got ({m}, {n})"
        )));
    }
    if gcd(m as u64, n as u64) != 1 {
        return Err(Error::InvalidParameter(format!(
            "({m}, {n}) is not a coprime pair"
        )));
    }
    let (m, n) = (m as i64, n as i64);
    let first = (0..n).map(|i| m * i);
    let second = (0..2 * m).map(|j| n * j);
    SensorArray::from_unsorted(
        ArrayKind::Coprime,
        format!("coprime({m},{n})"),
        first.chain(second),
    )
}

/// Augmented nested array: the dense ULA `{1..N1}` of the nested array is cut
/// into a left block of `left` sensors that stays in place and a right block
/// that is moved just past the last sensor of the sparse ULA.
fn augmented_nested(
    n: usize,
    left: impl Fn(usize) -> usize,
    kind: ArrayKind,
) -> Result<SensorArray> {
    if n < 6 {
        return Err(Error::UnsupportedParameter(format!(
            "augmented nested arrays are defined here for n >= 6, got {n}"
        )));
    }
    let (n1, n2) = nested_split(n);
    let left = left(n1) as i64;
    let right = n1 as i64 - left;
    let spacing = n1 as i64 + 1;
    let last_sparse = n2 as i64 * spacing;

    let left_block = 1..=left;
    let sparse = (1..=n2 as i64).map(|m| m * spacing);
    let right_block = (1..=right).map(|i| last_sparse + i);
    let tag = if kind == ArrayKind::Ana1 { "I" } else { "II" };
    SensorArray::from_unsorted(
        kind,
        format!("ANA-{tag}({n})"),
        left_block.chain(sparse).chain(right_block),
    )
}

/// Augmented nested array, first generation: one dense sensor stays on the
/// left, the rest of the dense ULA moves to the right end.
pub fn gen_ana1(n: usize) -> Result<SensorArray> {
    augmented_nested(n, |_| 1, ArrayKind::Ana1)
}

/// Augmented nested array, second generation: the dense ULA is split by its
/// odd and even indices; the odd count stays on the left, the even count moves
/// to the right end.
pub fn gen_ana2(n: usize) -> Result<SensorArray> {
    augmented_nested(n, |n1| n1.div_ceil(2), ArrayKind::Ana2)
}

/// Second-order super nested array with `n1 + n2` sensors. Its difference
/// coarray equals that of `gen_nested_two_level(n1, n2)`.
pub fn gen_super_nested(n1: usize, n2: usize) -> Result<SensorArray> {
    if n1 < 2 || n2 < 2 {
        return Err(Error::InvalidParameter(format!(
            "super nested array needs n1, n2 >= 2, got ({n1}, {n2})"
        )));
    }
    if n1 < 3 {
        return Err(Error::UnsupportedParameter(format!(
            "second-order super nested closed form needs n1 >= 3, got {n1}"
        )));
    }
    let r = (n1 / 4) as i64;
    let (a1, b1, a2, b2) = match n1 % 4 {
        0 => (r, r - 1, r - 1, r - 2),
        1 => (r, r - 1, r - 1, r - 1),
        2 => (r + 1, r - 1, r, r - 2),
        _ => (r, r, r, r - 1),
    };
    let p = n1 as i64 + 1;
    let n2 = n2 as i64;

    let x1 = (0..=a1).map(|l| 1 + 2 * l);
    let y1 = (0..=b1).map(|l| p - (1 + 2 * l));
    let x2 = (0..=a2).map(|l| p + (2 + 2 * l));
    let y2 = (0..=b2).map(|l| 2 * p - (2 + 2 * l));
    let z1 = (2..=n2).map(|l| l * p);
    let z2 = std::iter::once(n2 * p - 1);

    let array = SensorArray::from_unsorted(
        ArrayKind::SuperNested,
        format!("super-nested({n1},{n2})"),
        x1.chain(y1).chain(x2).chain(y2).chain(z1).chain(z2),
    )?;
    debug_assert_eq!(array.len(), n1 + n2 as usize);
    Ok(array)
}

/// Cantor array `C_{r+1} = C_r ∪ (C_r + 3^r)` seeded from `C_1 = {0, 1}`.
pub fn gen_cantor(r: u32) -> Result<SensorArray> {
    if r == 0 {
        return Err(Error::InvalidParameter("Cantor order must be >= 1".into()));
    }
    if r > MAX_CANTOR_ORDER {
        return Err(Error::UnsupportedParameter(format!(
            "Cantor order {r} exceeds the supported maximum {MAX_CANTOR_ORDER}"
        )));
    }
    let mut set = vec![0i64, 1];
    let mut shift = 3i64;
    for _ in 1..r {
        let upper: Vec<i64> = set.iter().map(|p| p + shift).collect();
        set.extend(upper);
        shift *= 3;
    }
    SensorArray::new(ArrayKind::Cantor, format!("cantor({r})"), set)
}

/// Cross-sum `{x + y}` together with the number of sums lost to collisions.
pub fn cross_sum_counted(a: &SensorArray, b: &SensorArray) -> Result<(SensorArray, usize)> {
    let sums: BTreeSet<i64> = a
        .positions()
        .iter()
        .flat_map(|x| b.positions().iter().map(move |y| x + y))
        .collect();
    let collisions = a.len() * b.len() - sums.len();
    let mut label = format!("{} ⊕ {}", a.label(), b.label());
    if collisions > 0 {
        label.push_str(&format!(" [collisions: {collisions}]"));
    }
    let array = SensorArray::new(ArrayKind::Sfa, label, sums.into_iter().collect())?;
    Ok((array, collisions))
}

/// Set cross-sum `{x + y : x ∈ a, y ∈ b}`. Duplicate sums are merged and the
/// number of merged sums is recorded in the label.
pub fn cross_sum(a: &SensorArray, b: &SensorArray) -> SensorArray {
    // Both inputs are valid arrays, so the sum set is non-empty, sorted and non-negative.
    cross_sum_counted(a, b)
        .expect("cross-sum of valid arrays")
        .0
}

/// Sparse subarray families usable as the first factor of a sparse fractal array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Subarray {
    Ula { n: usize },
    Nested { n: usize },
    Coprime { m: usize, n: usize },
    Ana1 { n: usize },
    Ana2 { n: usize },
    SuperNested { n1: usize, n2: usize },
}

impl Subarray {
    pub fn build(&self) -> Result<SensorArray> {
        match *self {
            Subarray::Ula { n } => gen_ula(n),
            Subarray::Nested { n } => gen_nested(n),
            Subarray::Coprime { m, n } => gen_coprime(m, n),
            Subarray::Ana1 { n } => gen_ana1(n),
            Subarray::Ana2 { n } => gen_ana2(n),
            Subarray::SuperNested { n1, n2 } => gen_super_nested(n1, n2),
        }
    }
}

/// Sparse fractal array: `S1 ⊕ d2·C_r` with `d2 = 2M + 1`, `M = |S1|`.
pub fn make_sfa(subarray: &Subarray, fractal_scale: u32) -> Result<SensorArray> {
    let sparse = subarray.build()?;
    let fractal = gen_cantor(fractal_scale)?;
    let d2 = 2 * sparse.len() as i64 + 1;
    let (sfa, collisions) = cross_sum_counted(&sparse, &fractal.scaled(d2)?)?;
    let mut label = format!("SFA[{} ⊕ {}·{d2}]", sparse.label(), fractal.label());
    if collisions > 0 {
        label.push_str(&format!(" [collisions: {collisions}]"));
    }
    Ok(sfa.with_label(label))
}
