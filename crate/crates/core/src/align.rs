//! Token-level minimum-edit alignment.
//!
//! Unit costs for substitution, insertion and deletion. When several optimal
//! alignments exist the backtrace prefers, at each step from the end,
//! equality, then substitution, then deletion, then insertion.

use alloc::vec;
use alloc::vec::Vec;

/// One step of an alignment between a source and a target sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlignOp {
    Equal { src: usize, tgt: usize },
    Substitute { src: usize, tgt: usize },
    Delete { src: usize },
    Insert { tgt: usize },
}

impl AlignOp {
    pub fn is_equal(self) -> bool {
        matches!(self, AlignOp::Equal { .. })
    }

    pub fn cost(self) -> usize {
        usize::from(!self.is_equal())
    }
}

/// Levenshtein distance table, `(source.len() + 1) x (target.len() + 1)`.
fn table<T: PartialEq>(source: &[T], target: &[T]) -> Vec<Vec<u32>> {
    let (n, m) = (source.len(), target.len());
    let mut d = vec![vec![0u32; m + 1]; n + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i as u32;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j as u32;
    }
    for i in 1..=n {
        for j in 1..=m {
            let diag = d[i - 1][j - 1] + u32::from(source[i - 1] != target[j - 1]);
            d[i][j] = diag.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d
}

pub fn distance<T: PartialEq>(source: &[T], target: &[T]) -> usize {
    table(source, target)[source.len()][target.len()] as usize
}

/// Minimum-cost alignment of `source` onto `target`, in left-to-right order.
pub fn align<T: PartialEq>(source: &[T], target: &[T]) -> Vec<AlignOp> {
    let d = table(source, target);
    let (mut i, mut j) = (source.len(), target.len());
    let mut ops = Vec::with_capacity(i.max(j));
    while i > 0 || j > 0 {
        let here = d[i][j];
        if i > 0 && j > 0 && source[i - 1] == target[j - 1] && here == d[i - 1][j - 1] {
            ops.push(AlignOp::Equal { src: i - 1, tgt: j - 1 });
            i -= 1;
            j -= 1;
        } else if i > 0 && j > 0 && here == d[i - 1][j - 1] + 1 {
            ops.push(AlignOp::Substitute { src: i - 1, tgt: j - 1 });
            i -= 1;
            j -= 1;
        } else if i > 0 && here == d[i - 1][j] + 1 {
            ops.push(AlignOp::Delete { src: i - 1 });
            i -= 1;
        } else {
            ops.push(AlignOp::Insert { tgt: j - 1 });
            j -= 1;
        }
    }
    ops.reverse();
    ops
}

pub fn cost(ops: &[AlignOp]) -> usize {
    ops.iter().map(|op| op.cost()).sum()
}

/// For each target position, whether some minimum-cost alignment
/// substitutes or inserts it. Repeated tokens make the choice of optimal
/// alignment arbitrary, so checks on edited positions should not depend on
/// the one [`align`] happens to return.
pub fn possibly_edited<T: PartialEq>(source: &[T], target: &[T]) -> Vec<bool> {
    let (n, m) = (source.len(), target.len());
    let forward = table(source, target);
    let rev_src: Vec<&T> = source.iter().rev().collect();
    let rev_tgt: Vec<&T> = target.iter().rev().collect();
    let backward = table(&rev_src, &rev_tgt);
    // cost of aligning source[i..] with target[j..]
    let rest = |i: usize, j: usize| backward[n - i][m - j];
    let total = forward[n][m];
    let mut edited = vec![false; m];
    for i in 0..=n {
        for j in 0..m {
            let inserted = forward[i][j] + 1 + rest(i, j + 1) == total;
            let substituted = i < n && source[i] != target[j] && forward[i][j] + 1 + rest(i + 1, j + 1) == total;
            if inserted || substituted {
                edited[j] = true;
            }
        }
    }
    edited
}
