//! Non-crossing partitions and the Catalan / Riordan counts built on them.
//!
//! Enumeration uses the first-block decomposition: the block containing the
//! smallest unassigned element splits the remaining ground set into gaps,
//! each of which is partitioned independently. Blocks come out sorted by
//! their minimum with ascending elements, which is the canonical form.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::error::{check_range, Error, Result};

/// Largest ground set for which partitions are enumerated explicitly.
pub const MAX_ENUMERATION: usize = 14;

/// A set partition of `{1..m}` in canonical form.
///
/// Stored as a restricted growth string: `labels[i]` is the index of the
/// block containing `i + 1`, with blocks numbered by first appearance. That
/// numbering is exactly "blocks sorted by minimum".
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    labels: Box<[u8]>,
}

impl Partition {
    /// Builds a partition from 1-based blocks, validating disjointness and
    /// coverage. Block and element order in the input is irrelevant.
    pub fn new(ground_size: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        check_range("ground size", ground_size, 1, u8::MAX as usize)?;
        let mut owner = vec![usize::MAX; ground_size];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Domain("partition has an empty block".into()));
            }
            for &x in block {
                if x == 0 || x > ground_size {
                    return Err(Error::Domain(format!(
                        "element {x} is outside 1..={ground_size}"
                    )));
                }
                if owner[x - 1] != usize::MAX {
                    return Err(Error::Domain(format!("element {x} appears twice")));
                }
                owner[x - 1] = b;
            }
        }
        if let Some(missing) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::Domain(format!(
                "element {} is not covered",
                missing + 1
            )));
        }
        Ok(Self::from_owner(&owner))
    }

    fn from_owner(owner: &[usize]) -> Self {
        let mut relabel = std::collections::HashMap::new();
        let labels = owner
            .iter()
            .map(|o| {
                let next = relabel.len() as u8;
                *relabel.entry(*o).or_insert(next)
            })
            .collect();
        Partition { labels }
    }

    fn from_canonical_blocks(ground_size: usize, blocks: &[Vec<usize>]) -> Self {
        let mut labels = vec![0u8; ground_size];
        for (b, block) in blocks.iter().enumerate() {
            for &x in block {
                labels[x - 1] = b as u8;
            }
        }
        Partition {
            labels: labels.into_boxed_slice(),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.labels.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
    }

    /// Blocks in canonical order, 1-based elements.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (i, &l) in self.labels.iter().enumerate() {
            blocks[l as usize].push(i + 1);
        }
        blocks
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_blocks()];
        for &l in self.labels.iter() {
            sizes[l as usize] += 1;
        }
        sizes
    }

    pub fn has_singleton(&self) -> bool {
        self.block_sizes().contains(&1)
    }

    /// True iff there is no `p1 < q1 < p2 < q2` with `p1, p2` in one block
    /// and `q1, q2` in another.
    pub fn is_noncrossing(&self) -> bool {
        let n = self.labels.len();
        for p1 in 0..n {
            for q1 in p1 + 1..n {
                if self.labels[q1] == self.labels[p1] {
                    continue;
                }
                for p2 in q1 + 1..n {
                    if self.labels[p2] != self.labels[p1] {
                        continue;
                    }
                    if self.labels[p2 + 1..]
                        .iter()
                        .any(|&l| l == self.labels[q1])
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Sort key realizing lexicographic order on the list of canonical blocks.
    fn lex_key(&self) -> Vec<u8> {
        let mut key = Vec::with_capacity(self.labels.len() + self.num_blocks());
        for block in self.blocks() {
            key.extend(block.iter().map(|&x| x as u8));
            key.push(0);
        }
        key
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_key().cmp(&other.lex_key())
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (b, block) in self.blocks().iter().enumerate() {
            if b > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (k, x) in block.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

pub fn is_noncrossing(p: &Partition) -> bool {
    p.is_noncrossing()
}

/// Streams every non-crossing partition of `{1..m}` to `visit` as canonical
/// 1-based blocks. Visiting order is the generation order, not lexicographic.
pub fn visit_nc<F: FnMut(&[Vec<usize>])>(m: usize, mut visit: F) -> Result<()> {
    check_range("m", m, 1, MAX_ENUMERATION)?;
    let mut blocks = Vec::with_capacity(m);
    fill(&mut vec![(1, m)], &mut blocks, &mut visit);
    Ok(())
}

/// `pending` holds `(start, len)` segments, front segment last.
fn fill<F: FnMut(&[Vec<usize>])>(
    pending: &mut Vec<(usize, usize)>,
    blocks: &mut Vec<Vec<usize>>,
    visit: &mut F,
) {
    let Some((start, len)) = pending.pop() else {
        visit(blocks);
        return;
    };
    if len == 0 {
        fill(pending, blocks, visit);
        pending.push((start, len));
        return;
    }
    // Choose the rest of the first block among start+1..start+len-1.
    let choices = len - 1;
    for mask in 0u32..(1u32 << choices) {
        let mut block = vec![start];
        block.extend((0..choices).filter(|k| mask >> k & 1 == 1).map(|k| start + 1 + k));
        let depth = pending.len();
        // Trailing segment after the block's last element goes first onto the
        // stack so that inner gaps are processed before it.
        let last = *block.last().unwrap();
        pending.push((last + 1, start + len - 1 - last));
        for w in block.windows(2).rev() {
            pending.push((w[0] + 1, w[1] - w[0] - 1));
        }
        blocks.push(block);
        fill(pending, blocks, visit);
        blocks.pop();
        pending.truncate(depth);
    }
    pending.push((start, len));
}

/// All non-crossing partitions of `{1..m}` in lexicographic order of their
/// canonical block lists.
pub fn enumerate_nc(m: usize) -> Result<Vec<Partition>> {
    let mut out = Vec::new();
    visit_nc(m, |blocks| out.push(Partition::from_canonical_blocks(m, blocks)))?;
    out.sort_by_cached_key(Partition::lex_key);
    Ok(out)
}

/// `C_m = binom(2m, m) / (m + 1)`.
pub fn catalan(m: usize) -> BigUint {
    binomial(BigUint::from(2 * m), BigUint::from(m)) / BigUint::from(m + 1)
}

/// Riordan number via the alternating binomial inversion of the Catalan
/// numbers, `R_m = sum_j binom(m, j) (-1)^(m-j) C_j`.
pub fn riordan(m: usize) -> BigUint {
    let mut acc = BigInt::zero();
    for j in 0..=m {
        let term = BigInt::from(binomial(BigUint::from(m), BigUint::from(j)) * catalan(j));
        if (m - j).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.to_biguint()
        .expect("Riordan numbers are non-negative")
}

/// Number of singleton-free non-crossing partitions of `[m]` with exactly
/// `j` blocks, by filtered enumeration.
pub fn riordan_refined(m: usize, j: usize) -> Result<BigUint> {
    check_range("m", m, 1, MAX_ENUMERATION)?;
    check_range("j", j, 1, m)?;
    Ok(riordan_refined_row(m)?.swap_remove(j))
}

/// `[R_{m,0}, R_{m,1}, ..., R_{m,m}]` from a single enumeration pass.
/// Entry 0 is always zero for `m >= 1`.
pub fn riordan_refined_row(m: usize) -> Result<Vec<BigUint>> {
    let mut counts = vec![0u64; m + 1];
    visit_nc(m, |blocks| {
        if blocks.iter().all(|b| b.len() >= 2) {
            counts[blocks.len()] += 1;
        }
    })?;
    Ok(counts.into_iter().map(BigUint::from).collect())
}

/// Catalan, Riordan and refined Riordan counts for `0..=max_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountTable {
    pub max_m: usize,
    pub catalan: Vec<BigUint>,
    pub riordan: Vec<BigUint>,
    /// `refined[m][j] = R_{m,j}`; row 0 is `[1]` by the `R_0 = 1` convention.
    pub refined: Vec<Vec<BigUint>>,
}

impl CountTable {
    pub fn new(max_m: usize) -> Result<Self> {
        check_range("max_m", max_m, 0, MAX_ENUMERATION)?;
        let catalan = (0..=max_m).map(catalan).collect();
        let riordan = (0..=max_m).map(riordan).collect();
        let mut refined = vec![vec![BigUint::one()]];
        for m in 1..=max_m {
            refined.push(riordan_refined_row(m)?);
        }
        Ok(CountTable {
            max_m,
            catalan,
            riordan,
            refined,
        })
    }

    /// Checks `C_m = sum_j binom(m, j) R_j` for row `m`.
    pub fn catalan_identity_holds(&self, m: usize) -> bool {
        let sum: BigUint = (0..=m)
            .map(|j| binomial(BigUint::from(m), BigUint::from(j)) * &self.riordan[j])
            .sum();
        sum == self.catalan[m]
    }

    /// Checks `R_m = sum_j R_{m,j}` for row `m`.
    pub fn refinement_holds(&self, m: usize) -> bool {
        if m == 0 {
            return self.riordan[0].is_one();
        }
        let sum: BigUint = self.refined[m].iter().sum();
        sum == self.riordan[m]
    }
}
