//! Group decodability of codes through the real-symbol basis matrices.
//!
//! Every codeword is `Σ g_k B_k` with `g_k` the integer parts of the symbols
//! (`s = a + b·u` contributes `a` to one basis matrix and `b` to the next).
//! Symbols `g` and `k` can be decoded independently when
//! `B_g B_k* + B_k B_g* = 0`, which is tested exactly.

use alloc::{vec, vec::Vec};

use num_rational::BigRational;
use num_traits::Zero;

use crate::codebook::{CodeSpec, Symbol};
use crate::cyclotomic::{CycloElement, Rational};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subcode {
    /// Every symbol of the code.
    All,
    /// The symbols of the `f⁰` layer, i.e. the block-diagonal codewords.
    DiagonalBlock,
}

impl Subcode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "all" | "full" => Some(Subcode::All),
            "diagonal" | "diagonal-block" => Some(Subcode::DiagonalBlock),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Subcode::All => "all",
            Subcode::DiagonalBlock => "diagonal-block",
        }
    }
}

/// Image of one real information symbol.
#[derive(Clone, Debug)]
pub struct BasisMatrix {
    pub index: usize,
    /// Complex symbol slot feeding this matrix.
    pub slot: usize,
    /// 0 for the rational part, 1 for the `i`/`ω` part.
    pub part: usize,
    pub matrix: Matrix<CycloElement>,
}

/// Symbol vector with a single unit entry for real symbol `(slot, part)`.
pub fn unit_symbols(spec: &CodeSpec, slot: usize, part: usize) -> Vec<Symbol> {
    let mut s = vec![[0, 0]; spec.symbol_count()];
    s[slot][part] = 1;
    s
}

pub fn basis_matrices(spec: &CodeSpec, subcode: Subcode) -> Result<Vec<BasisMatrix>> {
    let slots = match subcode {
        Subcode::All => spec.symbol_count(),
        Subcode::DiagonalBlock => spec.layer_size(),
    };
    let mut out = Vec::with_capacity(2 * slots);
    for slot in 0..slots {
        for part in 0..2 {
            let matrix = spec.encode_ring(&unit_symbols(spec, slot, part))?.exact;
            out.push(BasisMatrix { index: out.len(), slot, part, matrix });
        }
    }
    Ok(out)
}

/// `B_g B_k* + B_k B_g*`.
pub fn anticommutator(g: &Matrix<CycloElement>, k: &Matrix<CycloElement>) -> Result<Matrix<CycloElement>> {
    g.mul(&k.adjoint())?.add(&k.mul(&g.adjoint())?)
}

/// `M_{g,k}`: the squared Frobenius norm of the anticommutator.
#[derive(Clone, Debug)]
pub struct Mgk {
    pub is_zero: bool,
    /// `Σ |c_ij|²`, an element of the real subfield (rational in general
    /// only up to that field).
    pub frobenius_sq: CycloElement,
    pub magnitude: f64,
}

impl Mgk {
    /// The value as a rational number when it is one.
    pub fn as_rational(&self) -> Option<Rational> {
        self.frobenius_sq.as_rational()
    }
}

pub fn mgk(g: &Matrix<CycloElement>, k: &Matrix<CycloElement>) -> Result<Mgk> {
    if g.rows() != k.rows() || g.cols() != k.cols() {
        return Err(Error::DimensionMismatch { expected: g.rows(), got: k.rows() });
    }
    let c = anticommutator(g, k)?;
    let field = c.field().clone();
    let frobenius_sq = c.data().iter().fold(field.zero(), |acc, x| &acc + &(x * &x.conj()));
    Ok(Mgk { is_zero: c.is_zero(), magnitude: frobenius_sq.embed().re, frobenius_sq })
}

/// Disjoint groups of real symbol indices, sorted by smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPartition {
    pub groups: Vec<Vec<usize>>,
}

impl GroupPartition {
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Group index of every symbol.
    pub fn labels(&self, count: usize) -> Vec<usize> {
        let mut labels = vec![usize::MAX; count];
        for (g, members) in self.groups.iter().enumerate() {
            for &i in members {
                labels[i] = g;
            }
        }
        labels
    }
}

/// Which pairs have a nonzero anticommutator; `pattern[g][k]`.
pub fn sparsity_pattern(matrices: &[BasisMatrix]) -> Result<Vec<Vec<bool>>> {
    let s = matrices.len();
    let mut pattern = vec![vec![false; s]; s];
    for g in 0..s {
        for k in g..s {
            let nz = !anticommutator(&matrices[g].matrix, &matrices[k].matrix)?.is_zero();
            pattern[g][k] = nz;
            pattern[k][g] = nz;
        }
    }
    Ok(pattern)
}

/// Finest partition: connected components of the nonzero pattern.
pub fn partition_from_pattern(pattern: &[Vec<bool>]) -> Result<GroupPartition> {
    let s = pattern.len();
    if s == 0 {
        return Err(Error::InvalidInput("no basis matrices".into()));
    }
    let mut label = vec![usize::MAX; s];
    let mut groups = Vec::new();
    for start in 0..s {
        if label[start] != usize::MAX {
            continue;
        }
        let id = groups.len();
        let mut members = vec![start];
        label[start] = id;
        let mut i = 0;
        while i < members.len() {
            let g = members[i];
            for k in 0..s {
                if pattern[g][k] && label[k] == usize::MAX {
                    label[k] = id;
                    members.push(k);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        groups.push(members);
    }
    Ok(GroupPartition { groups })
}

pub fn find_partition(matrices: &[BasisMatrix]) -> Result<GroupPartition> {
    partition_from_pattern(&sparsity_pattern(matrices)?)
}

/// Whether every cross-group anticommutator vanishes exactly.
pub fn partition_is_valid(matrices: &[BasisMatrix], partition: &GroupPartition) -> Result<bool> {
    let labels = partition.labels(matrices.len());
    if labels.contains(&usize::MAX) {
        return Ok(false);
    }
    for g in 0..matrices.len() {
        for k in g + 1..matrices.len() {
            if labels[g] != labels[k] && !anticommutator(&matrices[g].matrix, &matrices[k].matrix)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `m n² − m n (l − 1) / l`, counting complex symbols.
pub fn complexity_exponent(m: usize, n: usize, groups: usize) -> Result<Rational> {
    if groups == 0 {
        return Err(Error::InvalidInput("a partition has at least one group".into()));
    }
    let (m, n, l) = (m as i64, n as i64, groups as i64);
    let full = BigRational::from_integer((m * n * n).into());
    Ok(full - BigRational::new((m * n * (l - 1)).into(), l.into()))
}

/// Summary of the decodability analysis of one code.
#[derive(Clone, Debug)]
pub struct DecodabilityReport {
    pub subcode: Subcode,
    pub real_symbols: usize,
    pub pattern: Vec<Vec<bool>>,
    pub partition: GroupPartition,
    pub exponent: Rational,
}

pub fn analyze(spec: &CodeSpec, subcode: Subcode) -> Result<DecodabilityReport> {
    let matrices = basis_matrices(spec, subcode)?;
    let pattern = sparsity_pattern(&matrices)?;
    report_from_pattern(spec, subcode, pattern)
}

/// Builds the report once the pattern is known.
pub fn report_from_pattern(spec: &CodeSpec, subcode: Subcode, pattern: Vec<Vec<bool>>) -> Result<DecodabilityReport> {
    let partition = partition_from_pattern(&pattern)?;
    let alg = spec.algebra();
    // The exponent is defined through the partition of the diagonal block.
    let exponent = if subcode == Subcode::DiagonalBlock {
        complexity_exponent(alg.m(), alg.n(), partition.len())?
    } else {
        BigRational::zero()
    };
    Ok(DecodabilityReport { subcode, real_symbols: pattern.len(), pattern, partition, exponent })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_formula() {
        let r = |a: i64| BigRational::from_integer(a.into());
        assert_eq!(complexity_exponent(2, 3, 2).unwrap(), r(15));
        assert_eq!(complexity_exponent(2, 4, 4).unwrap(), r(26));
        assert_eq!(complexity_exponent(2, 5, 1).unwrap(), r(50));
        for n in 2..8i64 {
            let nn = n as usize;
            assert_eq!(complexity_exponent(2, nn, 4).unwrap(), r(2 * n * n) - BigRational::new((3 * n).into(), 2.into()));
            assert_eq!(complexity_exponent(2, nn, 2).unwrap(), r(2 * n * n - n));
        }
        assert!(complexity_exponent(2, 3, 0).is_err());
    }

    #[test]
    fn components() {
        let p = vec![
            vec![true, false, true, false],
            vec![false, true, false, false],
            vec![true, false, true, false],
            vec![false, false, false, true],
        ];
        let part = partition_from_pattern(&p).unwrap();
        assert_eq!(part.groups, vec![vec![0, 2], vec![1], vec![3]]);
        let single = partition_from_pattern(&[vec![true]]).unwrap();
        assert_eq!(single.len(), 1);
    }
}
