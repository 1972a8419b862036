//! Vertex covers, height and the Cohen-Macaulay verdict for edge ideals.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::graph::{edge_ideal, StrongQuasiGraph};
use crate::ideal::MonomialIdeal;
use crate::monomial::{BlockShape, VariableIndex};

const MAX_COVER_VARIABLES: usize = 64;

/// A set of variables meeting the support of every generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexCover {
    pub shape: BlockShape,
    pub members: BTreeSet<VariableIndex>,
    pub minimal: bool,
}

impl VertexCover {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn check_nontrivial(ideal: &MonomialIdeal) -> Result<()> {
    if ideal.is_zero() {
        return Err(Error::TrivialIdeal("zero"));
    }
    if ideal.is_unit() {
        return Err(Error::TrivialIdeal("unit"));
    }
    let n = ideal.shape().variables();
    if n > MAX_COVER_VARIABLES {
        return Err(Error::TooManyVariables {
            max: MAX_COVER_VARIABLES,
            got: n,
        });
    }
    Ok(())
}

/// Supports of the generators as bitmasks, with supersets dropped: a set
/// hitting every minimal support hits them all.
fn minimal_supports(ideal: &MonomialIdeal) -> Vec<u64> {
    let mut supports: Vec<u64> = ideal
        .generators()
        .iter()
        .map(|g| g.support().fold(0u64, |m, k| m | (1 << k)))
        .collect();
    supports.sort_unstable_by_key(|m| (m.count_ones(), *m));
    supports.dedup();
    let mut kept: Vec<u64> = Vec::new();
    for s in supports {
        if !kept.iter().any(|&k| k & s == k) {
            kept.push(s);
        }
    }
    kept
}

fn hits_all(cover: u64, supports: &[u64]) -> bool {
    supports.iter().all(|&s| s & cover != 0)
}

/// All minimal vertex covers, sorted by size and then by member list.
pub fn minimal_vertex_covers(ideal: &MonomialIdeal) -> Result<Vec<VertexCover>> {
    check_nontrivial(ideal)?;
    let supports = minimal_supports(ideal);

    // Branch on the members of the first support the partial cover misses.
    fn search(partial: u64, supports: &[u64], seen: &mut HashSet<u64>, found: &mut BTreeSet<u64>) {
        if !seen.insert(partial) {
            return;
        }
        match supports.iter().find(|&&s| s & partial == 0) {
            None => {
                found.insert(partial);
            }
            Some(&missed) => {
                let mut rest = missed;
                while rest != 0 {
                    let k = rest.trailing_zeros();
                    rest &= rest - 1;
                    search(partial | (1 << k), supports, seen, found);
                }
            }
        }
    }

    let mut found = BTreeSet::new();
    search(0, &supports, &mut HashSet::new(), &mut found);

    let mut minimal: Vec<u64> = found
        .into_iter()
        .filter(|&c| {
            let mut rest = c;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                rest &= rest - 1;
                if hits_all(c & !bit, &supports) {
                    return false;
                }
            }
            true
        })
        .collect();
    let members = |c: u64| -> Vec<u32> {
        let mut v = Vec::new();
        let mut rest = c;
        while rest != 0 {
            v.push(rest.trailing_zeros());
            rest &= rest - 1;
        }
        v
    };
    minimal.sort_by(|a, b| {
        a.count_ones()
            .cmp(&b.count_ones())
            .then_with(|| members(*a).cmp(&members(*b)))
    });

    let shape = ideal.shape();
    Ok(minimal
        .into_iter()
        .map(|c| VertexCover {
            shape: shape.clone(),
            members: members(c)
                .into_iter()
                .map(|k| shape.variable(k as usize))
                .collect(),
            minimal: true,
        })
        .collect())
}

/// Minimum size of a vertex cover.
pub fn height(ideal: &MonomialIdeal) -> Result<usize> {
    let covers = minimal_vertex_covers(ideal)?;
    Ok(covers.iter().map(VertexCover::len).min().unwrap_or(0))
}

/// Krull dimension of `T/I`: `N − height(I)`.
pub fn quotient_dimension(ideal: &MonomialIdeal) -> Result<usize> {
    Ok(ideal.shape().variables() - height(ideal)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmStatus {
    /// `T/I` has dimension zero, so depth and dimension are both zero.
    CohenMacaulay,
    /// Positive dimension; this tool does not compute depth.
    Undetermined,
}

/// Height, dimension and covers of an ideal, with the verdict they support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmReport {
    pub height: usize,
    pub variables: usize,
    pub dimension: usize,
    pub covers: Vec<VertexCover>,
    pub status: CmStatus,
}

pub fn cm_report(ideal: &MonomialIdeal) -> Result<CmReport> {
    let covers = minimal_vertex_covers(ideal)?;
    let height = covers.iter().map(VertexCover::len).min().unwrap_or(0);
    let variables = ideal.shape().variables();
    let dimension = variables - height;
    Ok(CmReport {
        height,
        variables,
        dimension,
        covers,
        status: if dimension == 0 {
            CmStatus::CohenMacaulay
        } else {
            CmStatus::Undetermined
        },
    })
}

/// The verdict for the edge ideal `I(G)`. Every vertex carries a loop, so
/// each `x_v²` is a generator and the full variable set is the only cover.
pub fn cohen_macaulay_verdict(graph: &StrongQuasiGraph) -> Result<CmReport> {
    cm_report(&edge_ideal(graph))
}
