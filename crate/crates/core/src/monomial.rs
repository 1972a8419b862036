//! Block-structured monomials.
//!
//! Variables of the ambient ring are laid out block-major: all of block 1,
//! then all of block 2, and so on. A [`Monomial`] is an exponent vector over
//! that layout together with the [`BlockShape`] it lives in.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Partition of the variables into blocks of sizes `m_1, ..., m_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BlockShape {
    sizes: Arc<[usize]>,
    starts: Arc<[usize]>,
}

impl BlockShape {
    pub fn new(sizes: &[usize]) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidShape("at least one block is required".into()));
        }
        if let Some(i) = sizes.iter().position(|&m| m == 0) {
            return Err(Error::InvalidShape(format!("block {} is empty", i + 1)));
        }
        let mut starts = Vec::with_capacity(sizes.len() + 1);
        let mut acc = 0usize;
        starts.push(0);
        for &m in sizes {
            acc += m;
            starts.push(acc);
        }
        Ok(Self {
            sizes: sizes.into(),
            starts: starts.into(),
        })
    }

    /// Number of blocks `n`.
    pub fn blocks(&self) -> usize {
        self.sizes.len()
    }

    /// Total number of variables `N`.
    pub fn variables(&self) -> usize {
        self.starts[self.sizes.len()]
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Size of block `block` (1-based).
    pub fn block_size(&self, block: usize) -> Result<usize> {
        self.check_block(block)?;
        Ok(self.sizes[block - 1])
    }

    /// Flat positions occupied by block `block` (1-based).
    pub fn block_range(&self, block: usize) -> Result<std::ops::Range<usize>> {
        self.check_block(block)?;
        Ok(self.starts[block - 1]..self.starts[block])
    }

    /// Block (1-based) containing flat position `flat`.
    pub fn block_of(&self, flat: usize) -> usize {
        debug_assert!(flat < self.variables());
        self.starts.partition_point(|&s| s <= flat)
    }

    pub fn flat_index(&self, var: VariableIndex) -> Result<usize> {
        let out = Error::VariableOutOfRange {
            block: var.block,
            position: var.position,
        };
        if var.block == 0 || var.block > self.blocks() {
            return Err(out);
        }
        if var.position == 0 || var.position > self.sizes[var.block - 1] {
            return Err(out);
        }
        Ok(self.starts[var.block - 1] + var.position - 1)
    }

    pub fn variable(&self, flat: usize) -> VariableIndex {
        let block = self.block_of(flat);
        VariableIndex {
            block,
            position: flat - self.starts[block - 1] + 1,
        }
    }

    /// All variables in block-major order.
    pub fn all_variables(&self) -> impl Iterator<Item = VariableIndex> + '_ {
        (0..self.variables()).map(|k| self.variable(k))
    }

    fn check_block(&self, block: usize) -> Result<()> {
        if block == 0 || block > self.blocks() {
            Err(Error::BlockOutOfRange(block))
        } else {
            Ok(())
        }
    }

    pub(crate) fn ensure_same(&self, other: &BlockShape) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl fmt::Display for BlockShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(|m| m.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for BlockShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BlockShape({self})")
    }
}

impl FromStr for BlockShape {
    type Err = Error;

    /// Parses `m1,m2,...,mn`.
    fn from_str(s: &str) -> Result<Self> {
        let sizes = s
            .split(',')
            .map(|p| {
                p.trim().parse::<usize>().map_err(|_| {
                    Error::Parse(format!("bad block size {:?} in shape {s:?}", p.trim()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        BlockShape::new(&sizes)
    }
}

/// The variable `x[block, position]`, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VariableIndex {
    pub block: usize,
    pub position: usize,
}

impl VariableIndex {
    pub fn new(block: usize, position: usize) -> Self {
        Self { block, position }
    }
}

impl fmt::Display for VariableIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{},{}]", self.block, self.position)
    }
}

impl FromStr for VariableIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected a variable like x[1,2], got {s:?}"));
        let inner = s
            .trim()
            .strip_prefix("x[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        let (b, p) = inner.split_once(',').ok_or_else(bad)?;
        let block = b.trim().parse().map_err(|_| bad())?;
        let position = p.trim().parse().map_err(|_| bad())?;
        Ok(Self { block, position })
    }
}

/// Half the L1 distance between two exponent vectors, stored doubled so it
/// stays exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Distance {
    twice: u64,
}

impl Distance {
    pub fn twice(self) -> u64 {
        self.twice
    }

    /// The distance when it is a whole number.
    pub fn as_integer(self) -> Option<u64> {
        (self.twice % 2 == 0).then_some(self.twice / 2)
    }

    pub fn is_zero(self) -> bool {
        self.twice == 0
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_integer() {
            Some(d) => write!(f, "{d}"),
            None => write!(f, "{}/2", self.twice),
        }
    }
}

/// A monomial as an exponent vector over a [`BlockShape`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    shape: BlockShape,
    exponents: Vec<u32>,
}

impl Monomial {
    /// Validated construction from signed exponents.
    pub fn new(shape: &BlockShape, exponents: &[i64]) -> Result<Self> {
        check_len(shape, exponents.len())?;
        let exponents = exponents
            .iter()
            .enumerate()
            .map(|(position, &value)| {
                if value < 0 {
                    Err(Error::NegativeExponent { position, value })
                } else {
                    u32::try_from(value).map_err(|_| Error::Overflow)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            shape: shape.clone(),
            exponents,
        })
    }

    pub fn from_exponents(shape: &BlockShape, exponents: Vec<u32>) -> Result<Self> {
        check_len(shape, exponents.len())?;
        Ok(Self {
            shape: shape.clone(),
            exponents,
        })
    }

    pub(crate) fn from_raw(shape: &BlockShape, exponents: Vec<u32>) -> Self {
        debug_assert_eq!(exponents.len(), shape.variables());
        Self {
            shape: shape.clone(),
            exponents,
        }
    }

    /// The unit monomial `1`.
    pub fn one(shape: &BlockShape) -> Self {
        Self::from_raw(shape, vec![0; shape.variables()])
    }

    /// The canonical unit vector `ε_{ij}` as a monomial.
    pub fn variable(shape: &BlockShape, var: VariableIndex) -> Result<Self> {
        let k = shape.flat_index(var)?;
        let mut e = vec![0; shape.variables()];
        e[k] = 1;
        Ok(Self::from_raw(shape, e))
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    /// The exponent vector, i.e. `log` of the monomial.
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn exponent(&self, var: VariableIndex) -> Result<u32> {
        Ok(self.exponents[self.shape.flat_index(var)?])
    }

    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Total degree `|a|`.
    pub fn modulus(&self) -> u64 {
        self.exponents.iter().map(|&e| u64::from(e)).sum()
    }

    /// Degree `|a_i|` of block `block` (1-based).
    pub fn block_degree(&self, block: usize) -> Result<u64> {
        let range = self.shape.block_range(block)?;
        Ok(self.exponents[range].iter().map(|&e| u64::from(e)).sum())
    }

    /// Degrees of all blocks in order.
    pub fn block_profile(&self) -> Vec<u64> {
        (1..=self.shape.blocks())
            .map(|b| self.block_degree(b).expect("block in range"))
            .collect()
    }

    /// Flat positions with a nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(k, _)| k)
    }

    /// Whether `self` divides `other`, i.e. `self` is a subvector of `other`.
    pub fn divides(&self, other: &Monomial) -> Result<bool> {
        self.shape.ensure_same(&other.shape)?;
        Ok(self.divides_unchecked(other))
    }

    pub(crate) fn divides_unchecked(&self, other: &Monomial) -> bool {
        self.exponents
            .iter()
            .zip(&other.exponents)
            .all(|(a, b)| a <= b)
    }

    pub fn multiply(&self, other: &Monomial) -> Result<Monomial> {
        self.shape.ensure_same(&other.shape)?;
        self.multiply_unchecked(other)
    }

    pub(crate) fn multiply_unchecked(&self, other: &Monomial) -> Result<Monomial> {
        let exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_raw(&self.shape, exponents))
    }

    /// `self / divisor`; fails unless `divisor` divides `self`.
    pub fn quotient(&self, divisor: &Monomial) -> Result<Monomial> {
        self.shape.ensure_same(&divisor.shape)?;
        if !divisor.divides_unchecked(self) {
            return Err(Error::NotDivisible {
                dividend: self.to_string(),
                divisor: divisor.to_string(),
            });
        }
        Ok(self.zip_with(divisor, |a, b| a - b))
    }

    /// Componentwise maximum `a ∨ b` (the lcm).
    pub fn join(&self, other: &Monomial) -> Result<Monomial> {
        self.shape.ensure_same(&other.shape)?;
        Ok(self.zip_with(other, u32::max))
    }

    /// Componentwise minimum (the gcd).
    pub fn meet(&self, other: &Monomial) -> Result<Monomial> {
        self.shape.ensure_same(&other.shape)?;
        Ok(self.zip_with(other, u32::min))
    }

    /// `self / gcd(self, other)`.
    pub(crate) fn strip_common(&self, other: &Monomial) -> Monomial {
        self.zip_with(other, |a, b| a.saturating_sub(b))
    }

    fn zip_with(&self, other: &Monomial, f: impl Fn(u32, u32) -> u32) -> Monomial {
        let exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::from_raw(&self.shape, exponents)
    }

    /// `x_to * (self / x_from)` for two variables of the same block.
    pub fn exchange_step(&self, from: VariableIndex, to: VariableIndex) -> Result<Monomial> {
        let i = self.shape.flat_index(from)?;
        let j = self.shape.flat_index(to)?;
        if from.block != to.block {
            return Err(Error::CrossBlockExchange {
                from: from.block,
                to: to.block,
            });
        }
        if self.exponents[i] == 0 {
            return Err(Error::ZeroExponent {
                monomial: self.to_string(),
                block: from.block,
                position: from.position,
            });
        }
        Ok(self.swap_unchecked(i, j))
    }

    /// `self - ε_i + ε_j` on flat positions; `self[i]` must be positive.
    pub(crate) fn swap_unchecked(&self, i: usize, j: usize) -> Monomial {
        let mut e = self.exponents.clone();
        e[i] -= 1;
        e[j] += 1;
        Self::from_raw(&self.shape, e)
    }

    /// `½ Σ |a_k − b_k|`.
    pub fn distance(&self, other: &Monomial) -> Result<Distance> {
        self.shape.ensure_same(&other.shape)?;
        let twice = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(&a, &b)| u64::from(a.abs_diff(b)))
            .sum();
        Ok(Distance { twice })
    }

    /// Canonical order: descending lexicographic on the block-major
    /// exponent list. `Less` means `self` is listed first.
    pub fn canonical_compare(&self, other: &Monomial) -> Result<Ordering> {
        self.shape.ensure_same(&other.shape)?;
        Ok(other.exponents.cmp(&self.exponents))
    }

    /// Keeps only the exponents at flat positions where `keep` is true.
    pub(crate) fn project(&self, keep: &[bool]) -> Monomial {
        let exponents = self
            .exponents
            .iter()
            .zip(keep)
            .map(|(&e, &k)| if k { e } else { 0 })
            .collect();
        Self::from_raw(&self.shape, exponents)
    }

    /// Parses the `x[i,j]^e*...` text format against a known shape.
    pub fn parse(shape: &BlockShape, text: &str) -> Result<Monomial> {
        let text = text.trim();
        let mut exponents = vec![0u32; shape.variables()];
        if text == "1" {
            return Ok(Self::from_raw(shape, exponents));
        }
        if text.is_empty() {
            return Err(Error::Parse("empty monomial".into()));
        }
        for factor in text.split('*') {
            let factor = factor.trim();
            let (var, power) = match factor.split_once('^') {
                Some((v, p)) => {
                    let p = p
                        .trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                    (v, p)
                }
                None => (factor, 1),
            };
            let var: VariableIndex = var.parse()?;
            let k = shape.flat_index(var)?;
            exponents[k] = exponents[k].checked_add(power).ok_or(Error::Overflow)?;
        }
        Ok(Self::from_raw(shape, exponents))
    }

    /// Parses the `(a11,...,a1m1|a21,...|...)` format, inferring the shape.
    pub fn parse_vector(text: &str) -> Result<Monomial> {
        let bad = || {
            Error::Parse(format!(
                "expected an exponent vector like (1,0|2,2), got {text:?}"
            ))
        };
        let inner = text
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let mut sizes = Vec::new();
        let mut exponents = Vec::new();
        for block in inner.split('|') {
            let mut m = 0;
            for e in block.split(',') {
                let e: i64 = e.trim().parse().map_err(|_| bad())?;
                exponents.push(e);
                m += 1;
            }
            sizes.push(m);
        }
        let shape = BlockShape::new(&sizes)?;
        Monomial::new(&shape, &exponents)
    }

    /// Renders the `(a11,...|a21,...)` exponent-vector format.
    pub fn to_vector_string(&self) -> String {
        let blocks: Vec<String> = (1..=self.shape.blocks())
            .map(|b| {
                let r = self.shape.block_range(b).expect("block in range");
                self.exponents[r]
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        format!("({})", blocks.join("|"))
    }
}

fn check_len(shape: &BlockShape, got: usize) -> Result<()> {
    if got == shape.variables() {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            expected: shape.variables(),
            got,
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "{}", self.shape.variable(k))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order. Monomials over different shapes are ordered by shape
/// first so the order stays total.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.shape
            .sizes
            .cmp(&other.shape.sizes)
            .then_with(|| other.exponents.cmp(&self.exponents))
    }
}

/// The log set of `monomials`: their exponent vectors.
pub fn log_set<'a>(
    monomials: impl IntoIterator<Item = &'a Monomial>,
) -> Result<BTreeSet<Vec<u32>>> {
    let mut shape: Option<&BlockShape> = None;
    let mut out = BTreeSet::new();
    for m in monomials {
        match shape {
            Some(s) => s.ensure_same(m.shape())?,
            None => shape = Some(m.shape()),
        }
        out.insert(m.exponents.clone());
    }
    Ok(out)
}
