//! Exchange-property checks, discrete polymatroid axioms and linear quotients.
//!
//! Two exchange scopes are offered. [`ExchangeScope::SameBlock`] demands that
//! the replacement variable `x_{il}` come from the block of `x_{ij}`;
//! [`ExchangeScope::AnyVariable`] lets it come from any block. Only the latter
//! agrees with the subvector-closure axioms checked by [`check_d1_d2`], and it
//! is the scope used by [`is_generalized_bipolymatroidal`]. Candidates from the
//! same block are always tried first, so witnesses prefer within-block swaps.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::monomial::{BlockShape, Monomial, VariableIndex};

/// Largest variable count handled by the bitmask-based checkers.
pub const MAX_CHECK_VARIABLES: usize = 64;

fn ensure_mask_width(shape: &BlockShape) -> Result<()> {
    if shape.variables() > MAX_CHECK_VARIABLES {
        Err(Error::TooManyVariables {
            max: MAX_CHECK_VARIABLES,
            got: shape.variables(),
        })
    } else {
        Ok(())
    }
}

fn block_masks(shape: &BlockShape) -> Vec<u64> {
    (0..shape.variables())
        .map(|k| {
            let r = shape
                .block_range(shape.block_of(k))
                .expect("block in range");
            r.fold(0u64, |m, j| m | (1 << j))
        })
        .collect()
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let k = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(k)
        }
    })
}

/// Where the replacement variable of an exchange may come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ExchangeScope {
    #[default]
    AnyVariable,
    SameBlock,
}

impl fmt::Display for ExchangeScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExchangeScope::AnyVariable => "any",
            ExchangeScope::SameBlock => "block",
        })
    }
}

/// A pair of generators and the variable at which an exchange was sought.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeWitness {
    pub u: Monomial,
    pub v: Monomial,
    pub from: VariableIndex,
    /// The replacement variable, when one exists.
    pub to: Option<VariableIndex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExchangeVerdict {
    Pass,
    /// Two generators of different degree.
    NotEquigenerated {
        low: Monomial,
        high: Monomial,
    },
    /// `u_{ij} > v_{ij}` but no admissible `l` keeps `x_l·u/x_{ij}` in `G(I)`.
    Violation(ExchangeWitness),
}

impl ExchangeVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, ExchangeVerdict::Pass)
    }
}

/// Generators packed as flat exponent rows plus a lookup set.
struct Packed<'a> {
    width: usize,
    rows: Vec<u32>,
    lookup: HashSet<&'a [u32]>,
}

impl<'a> Packed<'a> {
    fn new(gens: &'a [Monomial], width: usize) -> Self {
        let rows = gens
            .iter()
            .flat_map(|g| g.exponents().iter().copied())
            .collect();
        let lookup = gens.iter().map(|g| g.exponents()).collect();
        Self {
            width,
            rows,
            lookup,
        }
    }

    fn row(&self, a: usize) -> &[u32] {
        &self.rows[a * self.width..(a + 1) * self.width]
    }

    /// For generator `a` and each position `i`, the mask of `j ≠ i` with
    /// `row(a) − ε_i + ε_j` again a generator.
    fn moves(&self, a: usize) -> Vec<u64> {
        let mut buf = self.row(a).to_vec();
        let mut out = vec![0u64; self.width];
        for i in 0..self.width {
            if buf[i] == 0 {
                continue;
            }
            buf[i] -= 1;
            for j in (0..self.width).filter(|&j| j != i) {
                buf[j] += 1;
                if self.lookup.contains(buf.as_slice()) {
                    out[i] |= 1 << j;
                }
                buf[j] -= 1;
            }
            buf[i] += 1;
        }
        out
    }
}

/// Checks the exchange condition on `G(I)` under `scope`: for all
/// `u, v ∈ G(I)` and every position `ij` with `u_{ij} > v_{ij}` there is an
/// admissible `l` with `u_l < v_l` and `x_l·(u/x_{ij}) ∈ G(I)`. The first
/// failure in canonical (u, v, position) order is reported.
pub fn check_exchange(ideal: &MonomialIdeal, scope: ExchangeScope) -> Result<ExchangeVerdict> {
    if ideal.is_zero() {
        return Err(Error::TrivialIdeal("zero"));
    }
    let shape = ideal.shape();
    ensure_mask_width(shape)?;
    let gens = ideal.generators();
    let degree = gens[0].modulus();
    if let Some(other) = gens.iter().find(|g| g.modulus() != degree) {
        let (low, high) = if other.modulus() < degree {
            (other.clone(), gens[0].clone())
        } else {
            (gens[0].clone(), other.clone())
        };
        return Ok(ExchangeVerdict::NotEquigenerated { low, high });
    }

    let width = shape.variables();
    let packed = Packed::new(gens, width);
    let allowed: Vec<u64> = match scope {
        ExchangeScope::AnyVariable => vec![u64::MAX; width],
        ExchangeScope::SameBlock => block_masks(shape),
    };
    let moves: Vec<Vec<u64>> = (0..gens.len())
        .into_par_iter()
        .map(|a| packed.moves(a))
        .collect();

    let failure = (0..gens.len()).into_par_iter().find_map_first(|a| {
        let u = packed.row(a);
        for b in (0..gens.len()).filter(|&b| b != a) {
            let v = packed.row(b);
            let (mut greater, mut less) = (0u64, 0u64);
            for k in 0..width {
                if u[k] > v[k] {
                    greater |= 1 << k;
                } else if u[k] < v[k] {
                    less |= 1 << k;
                }
            }
            for i in bits(greater) {
                if moves[a][i] & less & allowed[i] == 0 {
                    return Some((a, b, i));
                }
            }
        }
        None
    });

    Ok(match failure {
        None => ExchangeVerdict::Pass,
        Some((a, b, i)) => ExchangeVerdict::Violation(ExchangeWitness {
            u: gens[a].clone(),
            v: gens[b].clone(),
            from: shape.variable(i),
            to: None,
        }),
    })
}

/// Whether `I` is equigenerated with the exchange property (any-variable scope).
pub fn is_generalized_bipolymatroidal(ideal: &MonomialIdeal) -> Result<ExchangeVerdict> {
    check_exchange(ideal, ExchangeScope::AnyVariable)
}

/// The replacement variable for one exchange, scanning the block of `from`
/// in position order first and, for [`ExchangeScope::AnyVariable`], the
/// remaining variables in block-major order after that.
pub fn find_exchange(
    ideal: &MonomialIdeal,
    u: &Monomial,
    v: &Monomial,
    from: VariableIndex,
    scope: ExchangeScope,
) -> Result<ExchangeWitness> {
    let shape = ideal.shape();
    shape.ensure_same(u.shape())?;
    shape.ensure_same(v.shape())?;
    let i = shape.flat_index(from)?;
    let (a, b) = (u.exponents(), v.exponents());
    if a[i] <= b[i] {
        return Err(Error::InvalidArgument(format!(
            "{from} does not have a larger exponent in {u} than in {v}"
        )));
    }
    let block = shape.block_range(from.block)?;
    let mut candidates: Vec<usize> = block.clone().collect();
    if scope == ExchangeScope::AnyVariable {
        candidates.extend((0..shape.variables()).filter(|k| !block.contains(k)));
    }
    let gens: HashSet<&[u32]> = ideal.generators().iter().map(|g| g.exponents()).collect();
    let to = candidates
        .into_iter()
        .find(|&l| a[l] < b[l] && gens.contains(u.swap_unchecked(i, l).exponents()));
    Ok(ExchangeWitness {
        u: u.clone(),
        v: v.clone(),
        from,
        to: to.map(|l| shape.variable(l)),
    })
}

/// The log set of an equigenerated ideal's generators, with its common modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseSet {
    shape: BlockShape,
    bases: Vec<Vec<u32>>,
    rank: u64,
}

impl BaseSet {
    pub fn new(shape: &BlockShape, bases: impl IntoIterator<Item = Vec<u32>>) -> Result<Self> {
        let mut bases: Vec<Vec<u32>> = bases.into_iter().collect();
        let first = bases
            .first()
            .ok_or_else(|| Error::InvalidArgument("a base set must be nonempty".into()))?;
        let rank: u64 = first.iter().map(|&e| u64::from(e)).sum();
        for b in &bases {
            if b.len() != shape.variables() {
                return Err(Error::LengthMismatch {
                    expected: shape.variables(),
                    got: b.len(),
                });
            }
            if b.iter().map(|&e| u64::from(e)).sum::<u64>() != rank {
                return Err(Error::NotEquigenerated);
            }
        }
        bases.sort_unstable_by(|x, y| y.cmp(x));
        bases.dedup();
        Ok(Self {
            shape: shape.clone(),
            bases,
            rank,
        })
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn bases(&self) -> &[Vec<u32>] {
        &self.bases
    }

    pub fn rank(&self) -> u64 {
        self.rank
    }
}

pub fn base_set(ideal: &MonomialIdeal) -> Result<BaseSet> {
    if ideal.is_zero() {
        return Err(Error::TrivialIdeal("zero"));
    }
    if !ideal.is_equigenerated() {
        return Err(Error::NotEquigenerated);
    }
    BaseSet::new(
        ideal.shape(),
        ideal.generators().iter().map(|g| g.exponents().to_vec()),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolymatroidVerdict {
    Valid {
        rank: u64,
        closure_size: usize,
    },
    /// `|a| < |b|` yet nothing in the closure lies strictly above `a` and below `a ∨ b`.
    D2Violation {
        a: Monomial,
        b: Monomial,
    },
}

impl PolymatroidVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, PolymatroidVerdict::Valid { .. })
    }
}

/// All integral subvectors of the bases, or an error once more than `cap`
/// vectors have been produced.
pub fn subvector_closure(bases: &BaseSet, cap: usize) -> Result<Vec<Vec<u32>>> {
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut stack: Vec<Vec<u32>> = Vec::new();
    for b in &bases.bases {
        if seen.insert(b.clone()) {
            stack.push(b.clone());
        }
    }
    if seen.len() > cap {
        return Err(Error::ClosureTooLarge { cap });
    }
    while let Some(v) = stack.pop() {
        for k in 0..v.len() {
            if v[k] == 0 {
                continue;
            }
            let mut w = v.clone();
            w[k] -= 1;
            if !seen.contains(&w) {
                seen.insert(w.clone());
                if seen.len() > cap {
                    return Err(Error::ClosureTooLarge { cap });
                }
                stack.push(w);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Brute-force check of the discrete polymatroid axioms on the subvector
/// closure `P*` of `bases`. D1 holds by construction. For D2, given D1, a
/// vector `w` with `a < w ≤ a ∨ b` exists in `P*` exactly when some
/// `a + ε_k` with `a_k < b_k` lies in `P*`, which is what is tested for
/// every pair with `|a| < |b|`.
pub fn check_d1_d2(bases: &BaseSet, cap: usize) -> Result<PolymatroidVerdict> {
    let shape = &bases.shape;
    ensure_mask_width(shape)?;
    let mut closure = subvector_closure(bases, cap)?;
    let modulus = |v: &[u32]| v.iter().map(|&e| u64::from(e)).sum::<u64>();
    closure.sort_unstable_by(|x, y| modulus(x).cmp(&modulus(y)).then_with(|| y.cmp(x)));
    let index: HashMap<&[u32], usize> = closure
        .iter()
        .enumerate()
        .map(|(k, v)| (v.as_slice(), k))
        .collect();
    let moduli: Vec<u64> = closure.iter().map(|v| modulus(v)).collect();
    let width = shape.variables();

    let violation = (0..closure.len()).into_par_iter().find_map_first(|ai| {
        let a = &closure[ai];
        let mut up = 0u64;
        let mut buf = a.clone();
        for k in 0..width {
            buf[k] += 1;
            if index.contains_key(buf.as_slice()) {
                up |= 1 << k;
            }
            buf[k] -= 1;
        }
        let start = moduli.partition_point(|&m| m <= moduli[ai]);
        closure[start..]
            .iter()
            .enumerate()
            .find(|(_, b)| !bits(up).any(|k| b[k] > a[k]))
            .map(|(off, _)| (ai, start + off))
    });

    Ok(match violation {
        None => PolymatroidVerdict::Valid {
            rank: bases.rank,
            closure_size: closure.len(),
        },
        Some((ai, bi)) => PolymatroidVerdict::D2Violation {
            a: Monomial::from_raw(shape, closure[ai].clone()),
            b: Monomial::from_raw(shape, closure[bi].clone()),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearQuotients {
    Linear,
    /// `(u_1, ..., u_{index-1}) : u_index` has a generator of degree other than 1.
    Fails {
        index: usize,
        colon: MonomialIdeal,
    },
}

impl LinearQuotients {
    pub fn is_linear(&self) -> bool {
        matches!(self, LinearQuotients::Linear)
    }
}

/// Whether `prefix : u` is generated by variables.
fn colon_is_linear(prefix: &[&Monomial], u: &Monomial) -> bool {
    let quotients: Vec<Monomial> = prefix.iter().map(|s| s.strip_common(u)).collect();
    let linear: HashSet<usize> = quotients
        .iter()
        .filter(|w| w.modulus() == 1)
        .filter_map(|w| w.support().next())
        .collect();
    quotients
        .iter()
        .all(|w| w.support().any(|k| linear.contains(&k)))
}

/// Checks that every prefix colon `(u_1, ..., u_{j-1}) : u_j`, `j ≥ 2`, is
/// generated by variables.
pub fn check_linear_quotients(
    ideal: &MonomialIdeal,
    order: &[Monomial],
) -> Result<LinearQuotients> {
    let mut expected: Vec<&Monomial> = ideal.generators().iter().collect();
    let mut given: Vec<&Monomial> = order.iter().collect();
    expected.sort();
    given.sort();
    if expected != given {
        return Err(Error::NotAPermutation(format!(
            "{} generators expected, {} given",
            ideal.len(),
            order.len()
        )));
    }
    for j in 1..order.len() {
        let prefix: Vec<&Monomial> = order[..j].iter().collect();
        if !colon_is_linear(&prefix, &order[j]) {
            let shape = ideal.shape();
            let colon = MonomialIdeal::minimalize_unchecked(
                shape,
                prefix.iter().map(|s| s.strip_common(&order[j])).collect(),
            );
            return Ok(LinearQuotients::Fails {
                index: j + 1,
                colon,
            });
        }
    }
    Ok(LinearQuotients::Linear)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderSearch {
    Found {
        order: Vec<Monomial>,
        nodes: usize,
    },
    /// No order was found. `complete` means every ordering was ruled out,
    /// which proves none exists; otherwise the budget ran out.
    Exhausted {
        complete: bool,
        nodes: usize,
    },
}

/// Looks for a linear-quotients order: the canonical order first, then a
/// depth-first search over prefixes capped at `budget` colon evaluations.
/// Prefix colons depend only on the set of earlier generators, so dead
/// prefix sets are remembered and never re-entered.
pub fn find_linear_quotients_order(ideal: &MonomialIdeal, budget: usize) -> Result<OrderSearch> {
    let gens = ideal.generators();
    if gens.len() <= 1 {
        return Ok(OrderSearch::Found {
            order: gens.to_vec(),
            nodes: 0,
        });
    }
    if check_linear_quotients(ideal, gens)?.is_linear() {
        return Ok(OrderSearch::Found {
            order: gens.to_vec(),
            nodes: gens.len() - 1,
        });
    }

    struct Dfs<'a> {
        gens: &'a [Monomial],
        chosen: Vec<usize>,
        used: Vec<bool>,
        dead: HashSet<Vec<bool>>,
        nodes: usize,
        budget: usize,
        out_of_budget: bool,
    }

    impl Dfs<'_> {
        fn run(&mut self) -> bool {
            if self.chosen.len() == self.gens.len() {
                return true;
            }
            if self.dead.contains(&self.used) {
                return false;
            }
            for c in 0..self.gens.len() {
                if self.used[c] {
                    continue;
                }
                if self.nodes >= self.budget {
                    self.out_of_budget = true;
                    return false;
                }
                self.nodes += 1;
                let prefix: Vec<&Monomial> = self.chosen.iter().map(|&k| &self.gens[k]).collect();
                if !prefix.is_empty() && !colon_is_linear(&prefix, &self.gens[c]) {
                    continue;
                }
                self.chosen.push(c);
                self.used[c] = true;
                if self.run() {
                    return true;
                }
                self.used[c] = false;
                self.chosen.pop();
                if self.out_of_budget {
                    return false;
                }
            }
            self.dead.insert(self.used.clone());
            false
        }
    }

    let mut dfs = Dfs {
        gens,
        chosen: Vec::with_capacity(gens.len()),
        used: vec![false; gens.len()],
        dead: HashSet::new(),
        nodes: 0,
        budget,
        out_of_budget: false,
    };
    if dfs.run() {
        Ok(OrderSearch::Found {
            order: dfs.chosen.iter().map(|&k| gens[k].clone()).collect(),
            nodes: dfs.nodes,
        })
    } else {
        Ok(OrderSearch::Exhausted {
            complete: !dfs.out_of_budget,
            nodes: dfs.nodes,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(sizes: &[usize], gens: &[&str]) -> MonomialIdeal {
        let s = BlockShape::new(sizes).unwrap();
        MonomialIdeal::minimalize(&s, gens.iter().map(|g| Monomial::parse(&s, g).unwrap())).unwrap()
    }

    fn negative_control() -> MonomialIdeal {
        ideal(&[2, 2], &["x[1,1]*x[2,1]", "x[1,2]*x[2,2]"])
    }

    #[test]
    fn negative_control_witness() {
        let i = negative_control();
        let ExchangeVerdict::Violation(w) = is_generalized_bipolymatroidal(&i).unwrap() else {
            panic!("expected a violation");
        };
        assert_eq!(w.u.to_string(), "x[1,1]*x[2,1]");
        assert_eq!(w.v.to_string(), "x[1,2]*x[2,2]");
        assert_eq!(w.from, VariableIndex::new(1, 1));
        assert!(w.to.is_none());
        assert!(!check_exchange(&i, ExchangeScope::SameBlock)
            .unwrap()
            .passed());
    }

    #[test]
    fn scopes_differ_on_single_variable_blocks() {
        // (x11, x21): a uniform matroid, but no within-block swap exists
        let i = ideal(&[1, 1], &["x[1,1]", "x[2,1]"]);
        assert!(is_generalized_bipolymatroidal(&i).unwrap().passed());
        assert!(!check_exchange(&i, ExchangeScope::SameBlock)
            .unwrap()
            .passed());
        assert!(check_d1_d2(&base_set(&i).unwrap(), 100).unwrap().is_valid());
    }

    #[test]
    fn mixed_degrees_are_reported() {
        let i = ideal(&[2, 2], &["x[1,1]", "x[2,1]^2"]);
        assert!(matches!(
            is_generalized_bipolymatroidal(&i).unwrap(),
            ExchangeVerdict::NotEquigenerated { .. }
        ));
        assert_eq!(base_set(&i), Err(Error::NotEquigenerated));
        let zero = MonomialIdeal::zero(i.shape());
        assert!(is_generalized_bipolymatroidal(&zero).is_err());
        let unit = MonomialIdeal::unit(i.shape());
        assert!(is_generalized_bipolymatroidal(&unit).unwrap().passed());
    }

    #[test]
    fn exchange_scan_prefers_same_block() {
        let i = ideal(
            &[2, 2],
            &[
                "x[1,1]*x[2,1]",
                "x[1,2]*x[2,1]",
                "x[1,1]*x[2,2]",
                "x[1,2]*x[2,2]",
            ],
        );
        let u = Monomial::parse(i.shape(), "x[1,1]*x[2,1]").unwrap();
        let v = Monomial::parse(i.shape(), "x[1,2]*x[2,2]").unwrap();
        let w = find_exchange(
            &i,
            &u,
            &v,
            VariableIndex::new(1, 1),
            ExchangeScope::AnyVariable,
        )
        .unwrap();
        assert_eq!(w.to, Some(VariableIndex::new(1, 2)));
        let bad = find_exchange(
            &i,
            &v,
            &u,
            VariableIndex::new(1, 1),
            ExchangeScope::AnyVariable,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn d1_d2_cases() {
        let s = BlockShape::new(&[2, 2]).unwrap();
        let single = BaseSet::new(&s, [vec![1, 0, 1, 0]]).unwrap();
        assert_eq!(
            check_d1_d2(&single, 100).unwrap(),
            PolymatroidVerdict::Valid {
                rank: 2,
                closure_size: 4
            }
        );
        let squares = BaseSet::new(&s, [vec![2, 0, 0, 0], vec![0, 0, 2, 0]]).unwrap();
        let PolymatroidVerdict::D2Violation { a, b } = check_d1_d2(&squares, 100).unwrap() else {
            panic!("expected D2 to fail");
        };
        assert!(a.modulus() < b.modulus());
        assert!(matches!(
            check_d1_d2(&squares, 3),
            Err(Error::ClosureTooLarge { cap: 3 })
        ));
        assert!(BaseSet::new(&s, Vec::<Vec<u32>>::new()).is_err());
        assert!(BaseSet::new(&s, [vec![1, 0, 0, 0], vec![1, 1, 0, 0]]).is_err());
    }

    #[test]
    fn linear_quotients_cases() {
        let i = negative_control();
        let gens = i.generators().to_vec();
        assert!(matches!(
            check_linear_quotients(&i, &gens).unwrap(),
            LinearQuotients::Fails { index: 2, .. }
        ));
        let rev: Vec<Monomial> = gens.iter().rev().cloned().collect();
        assert!(!check_linear_quotients(&i, &rev).unwrap().is_linear());
        assert_eq!(
            find_linear_quotients_order(&i, 1000).unwrap(),
            OrderSearch::Exhausted {
                complete: true,
                nodes: 4
            }
        );
        assert!(check_linear_quotients(&i, &gens[..1]).is_err());

        let one = ideal(&[2, 2], &["x[1,1]*x[2,2]"]);
        assert!(check_linear_quotients(&one, one.generators())
            .unwrap()
            .is_linear());
        assert!(matches!(
            find_linear_quotients_order(&one, 0).unwrap(),
            OrderSearch::Found { .. }
        ));
    }

    #[test]
    fn order_search_needs_reordering() {
        // (x1x3, x2x4, x3x4) only has linear quotients with x3x4 before x2x4
        let i = ideal(&[4], &["x[1,1]*x[1,3]", "x[1,2]*x[1,4]", "x[1,3]*x[1,4]"]);
        assert!(!check_linear_quotients(&i, i.generators())
            .unwrap()
            .is_linear());
        let OrderSearch::Found { order, .. } = find_linear_quotients_order(&i, 1000).unwrap()
        else {
            panic!("an order exists");
        };
        assert!(check_linear_quotients(&i, &order).unwrap().is_linear());
        assert!(matches!(
            find_linear_quotients_order(&i, 1).unwrap(),
            OrderSearch::Exhausted {
                complete: false,
                ..
            }
        ));
    }
}
