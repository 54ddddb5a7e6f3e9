//! Multidimensional partitions and their combinatorics.
//!
//! Partitions live in `N^(I)` for `I = N^p \ {0}`: finitely many indices
//! with positive multiplicities. Refined partitions are multisets of
//! partitions, related to plain partitions by the flattening map `mu`.
//! Ordered partitions with zeroes are a separate representation used where
//! column positions matter (contraction, Howe's lemma).

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::num::Int;

/// Index in `N^p` (the zero vector is allowed only where stated).
pub type Index = Vec<u32>;

/// Finitely supported map `I -> Z_{>0}`, `I = N^p \ {0}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MultiPartition {
    entries: BTreeMap<Index, u32>,
}

impl MultiPartition {
    pub fn empty() -> Self {
        MultiPartition {
            entries: BTreeMap::new(),
        }
    }

    /// Partition from a list of (possibly repeated) parts.
    pub fn from_parts(parts: &[&[u32]]) -> Self {
        let mut entries: BTreeMap<Index, u32> = BTreeMap::new();
        for part in parts {
            assert!(part.iter().any(|&c| c > 0), "parts must be nonzero");
            *entries.entry(part.to_vec()).or_insert(0) += 1;
        }
        MultiPartition { entries }
    }

    /// One-dimensional partition from a multiset of positive integers.
    pub fn from_ints(parts: &[u32]) -> Self {
        let slices: Vec<Vec<u32>> = parts.iter().map(|&n| vec![n]).collect();
        let refs: Vec<&[u32]> = slices.iter().map(|v| v.as_slice()).collect();
        Self::from_parts(&refs)
    }

    pub fn insert(&mut self, part: Index, mult: u32) {
        if mult == 0 {
            return;
        }
        assert!(part.iter().any(|&c| c > 0));
        *self.entries.entry(part).or_insert(0) += mult;
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Index, &u32)> {
        self.entries.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `|pi|`: the number of parts, with multiplicity.
    pub fn num_parts(&self) -> u64 {
        self.entries.values().map(|&m| m as u64).sum()
    }

    /// `||pi||`: the number of distinct parts.
    pub fn num_distinct(&self) -> u64 {
        self.entries.len() as u64
    }

    /// `lambda(pi) = sum_i m_i i` in `N^p`; `dims` is the ambient dimension
    /// (needed when the partition is empty).
    pub fn sum(&self, dims: usize) -> Index {
        let mut acc = vec![0u32; dims];
        for (part, &mult) in &self.entries {
            assert_eq!(part.len(), dims, "mixed index dimensions");
            for (a, &c) in acc.iter_mut().zip(part.iter()) {
                *a += c * mult;
            }
        }
        acc
    }

    /// Expand to the full list of parts (with repetitions), descending.
    pub fn parts(&self) -> Vec<Index> {
        let mut out = Vec::new();
        for (part, &mult) in self.entries.iter().rev() {
            for _ in 0..mult {
                out.push(part.clone());
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (part, &mult) in other.entries() {
            out.insert(part.clone(), mult);
        }
        out
    }
}

/// Element of `N^(N^(I) \ {0})`: a finite multiset of nonempty partitions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RefinedPartition {
    entries: BTreeMap<MultiPartition, u32>,
}

impl RefinedPartition {
    pub fn empty() -> Self {
        RefinedPartition {
            entries: BTreeMap::new(),
        }
    }

    pub fn from_blocks(blocks: &[MultiPartition]) -> Self {
        let mut entries: BTreeMap<MultiPartition, u32> = BTreeMap::new();
        for b in blocks {
            assert!(!b.is_empty(), "blocks must be nonempty partitions");
            *entries.entry(b.clone()).or_insert(0) += 1;
        }
        RefinedPartition { entries }
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&MultiPartition, &u32)> {
        self.entries.iter()
    }

    pub fn num_blocks(&self) -> u64 {
        self.entries.values().map(|&m| m as u64).sum()
    }

    /// The flattening map `mu`: `(m_pi) -> sum m_pi pi`.
    pub fn mu_map(&self) -> MultiPartition {
        let mut out = MultiPartition::empty();
        for (pi, &mult) in &self.entries {
            for (part, &m) in pi.entries() {
                out.insert(part.clone(), m * mult);
            }
        }
        out
    }
}

/// The full fibre `mu^{-1}(pi)`: all multisets of nonempty partitions
/// flattening to `pi`. Equivalently, all multiset partitions of the parts
/// of `pi`.
pub fn mu_fiber(pi: &MultiPartition) -> Vec<RefinedPartition> {
    let parts = pi.parts();
    let mut fibre = alloc::collections::BTreeSet::new();
    let mut blocks: Vec<MultiPartition> = Vec::new();
    multiset_partitions(&parts, &mut blocks, &mut fibre);
    fibre.into_iter().collect()
}

/// Recursive enumeration: the block containing the first remaining part is
/// chosen as that part together with any sub-multiset of the rest. When
/// parts repeat, different branches can rebuild the same multiset of
/// blocks, so results are collected into a set.
fn multiset_partitions(
    remaining: &[Index],
    blocks: &mut Vec<MultiPartition>,
    out: &mut alloc::collections::BTreeSet<RefinedPartition>,
) {
    if remaining.is_empty() {
        out.insert(RefinedPartition::from_blocks(blocks));
        return;
    }
    let first = remaining[0].clone();
    // group the rest into (value, multiplicity) runs
    let mut runs: Vec<(Index, u32)> = Vec::new();
    for part in &remaining[1..] {
        match runs.last_mut() {
            Some((v, m)) if v == part => *m += 1,
            _ => runs.push((part.clone(), 1)),
        }
    }
    let nruns = runs.len();
    let mut choice = vec![0u32; nruns];
    loop {
        // block = first + chosen sub-multiset
        let mut block = MultiPartition::empty();
        block.insert(first.clone(), 1);
        let mut rest: Vec<Index> = Vec::new();
        for (i, (v, m)) in runs.iter().enumerate() {
            if choice[i] > 0 {
                block.insert(v.clone(), choice[i]);
            }
            for _ in 0..(m - choice[i]) {
                rest.push(v.clone());
            }
        }
        blocks.push(block);
        multiset_partitions(&rest, blocks, out);
        blocks.pop();
        // odometer over sub-multisets
        let mut i = 0;
        loop {
            if i == nruns {
                return;
            }
            choice[i] += 1;
            if choice[i] <= runs[i].1 {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Contraction `c`: remove all zeroes from an ordered partition.
pub fn contraction(ordered: &[u32]) -> Vec<u32> {
    ordered.iter().copied().filter(|&m| m != 0).collect()
}

/// Is the ordered partition in `Q` (no zero among its columns)?
pub fn is_gap_free(ordered: &[u32]) -> bool {
    ordered.iter().all(|&m| m != 0)
}

/// Result of a Howe-lemma verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoweReport {
    /// `sum over the fibre of (-1)^{||mu_1 + ... + mu_n||}`
    pub sum: Int,
    /// `(-1)^{||nu_1|| + ... + ||nu_n||}`
    pub expected: Int,
    pub equal: bool,
    pub fibre_size: u64,
}

/// Exhaustively enumerate `c_n^{-1}(nu_1, ..., nu_n)` and compare the
/// alternating sum with its predicted value.
///
/// Each `nu_i` must be gap-free. The preimage consists of tuples of
/// zero-padded partitions `mu_i` with `c(mu_i) = nu_i` whose sum has no
/// internal or trailing zeroes; it is enumerated by choosing, for a common
/// length `L`, an order-preserving placement of each `nu_i`'s columns into
/// `{1..L}` covering every position.
pub fn howe_check(nus: &[Vec<u32>]) -> Result<HoweReport> {
    if nus.is_empty() {
        return Err(Error::InvalidParameter(String::from("howe_check needs n >= 1")));
    }
    let total_blocks: u64 = nus.iter().map(|nu| nu.iter().map(|&m| m as u64).sum::<u64>()).sum();
    if total_blocks > 12 {
        return Err(Error::BoundExceeded(String::from(
            "howe_check limited to 12 total blocks",
        )));
    }
    for nu in nus {
        if !is_gap_free(nu) {
            return Err(Error::InvalidParameter(String::from(
                "howe_check inputs must be gap-free ordered partitions",
            )));
        }
    }
    let cols: Vec<usize> = nus.iter().map(|nu| nu.len()).collect();
    let max_l: usize = cols.iter().sum();
    let min_l: usize = cols.iter().copied().max().unwrap_or(0);
    let mut sum = 0i64;
    let mut fibre_size = 0u64;
    if max_l == 0 {
        // all nus empty: the fibre is the single all-zero tuple
        sum = 1;
        fibre_size = 1;
    }
    for l in min_l.max(1)..=max_l {
        // placements[i] = sorted positions (subset of 0..l) of nu_i's columns
        let mut placements: Vec<Vec<usize>> = cols.iter().map(|&c| (0..c).collect()).collect();
        loop {
            // coverage check
            let mut covered = vec![false; l];
            for pl in &placements {
                for &p in pl {
                    covered[p] = true;
                }
            }
            if covered.iter().all(|&c| c) {
                fibre_size += 1;
                sum += if l % 2 == 0 { 1 } else { -1 };
            }
            if !advance_placements(&mut placements, &cols, l) {
                break;
            }
        }
    }
    let parity: u64 = nus.iter().map(|nu| nu.len() as u64).sum();
    let expected = if parity.is_multiple_of(2) { 1 } else { -1 };
    Ok(HoweReport {
        sum: Int::from(sum),
        expected: Int::from(expected),
        equal: sum == expected,
        fibre_size,
    })
}

/// Advance a tuple of sorted position-subsets in lexicographic order; the
/// i-th subset has fixed size `cols[i]` inside `0..l`. Returns false when
/// exhausted.
fn advance_placements(placements: &mut [Vec<usize>], cols: &[usize], l: usize) -> bool {
    for (pl, &c) in placements.iter_mut().zip(cols.iter()) {
        if next_combination(pl, c, l) {
            return true;
        }
        *pl = (0..c).collect();
    }
    false
}

fn next_combination(comb: &mut [usize], k: usize, n: usize) -> bool {
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - (k - i) {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Overlap matrix `gamma = (n_{ij})` between two partitions, indices in
/// `I_0^2 \ {(0,0)}` where `0` is the zero vector of the ambient `N^p`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OverlapMatrix {
    dims: usize,
    entries: BTreeMap<(Index, Index), u32>,
}

impl OverlapMatrix {
    pub fn entries(&self) -> impl Iterator<Item = (&(Index, Index), &u32)> {
        self.entries.iter()
    }

    /// Row sums `k_i = sum_j n_{ij}` recover the first marginal partition.
    pub fn row_marginal(&self) -> MultiPartition {
        let mut out = MultiPartition::empty();
        for ((i, _), &m) in &self.entries {
            if i.iter().any(|&c| c > 0) {
                out.insert(i.clone(), m);
            }
        }
        out
    }

    pub fn col_marginal(&self) -> MultiPartition {
        let mut out = MultiPartition::empty();
        for ((_, j), &m) in &self.entries {
            if j.iter().any(|&c| c > 0) {
                out.insert(j.clone(), m);
            }
        }
        out
    }

    /// Deformalisation `d(gamma)`: replace `a_i + b_j` by `i + j`.
    pub fn deformalise(&self) -> MultiPartition {
        let mut out = MultiPartition::empty();
        for ((i, j), &m) in &self.entries {
            let s: Index = i.iter().zip(j.iter()).map(|(a, b)| a + b).collect();
            out.insert(s, m);
        }
        out
    }
}

/// All overlap matrices between `kappa` and `lambda`: choices of
/// `n_{ij} >= 0` for `i` in the support of `kappa` (plus 0), `j` in the
/// support of `lambda` (plus 0), with the marginal constraints.
pub fn overlap_enumerate(kappa: &MultiPartition, lambda: &MultiPartition, dims: usize) -> Vec<OverlapMatrix> {
    let rows: Vec<(Index, u32)> = kappa.entries().map(|(i, &m)| (i.clone(), m)).collect();
    let cols: Vec<(Index, u32)> = lambda.entries().map(|(j, &m)| (j.clone(), m)).collect();
    let zero = vec![0u32; dims];
    let ncell = rows.len() * cols.len();
    let mut out = Vec::new();
    let mut cells = vec![0u32; ncell];
    'outer: loop {
        // check marginals and build the matrix
        let mut ok = true;
        let mut col_used = vec![0u32; cols.len()];
        let mut matrix = OverlapMatrix {
            dims,
            entries: BTreeMap::new(),
        };
        for (ri, (i, ki)) in rows.iter().enumerate() {
            let mut row_used = 0u32;
            for (ci, (j, _)) in cols.iter().enumerate() {
                let n = cells[ri * cols.len() + ci];
                row_used += n;
                col_used[ci] += n;
                if n > 0 {
                    matrix.entries.insert((i.clone(), j.clone()), n);
                }
            }
            if row_used > *ki {
                ok = false;
                break;
            }
            if row_used < *ki {
                matrix.entries.insert((i.clone(), zero.clone()), ki - row_used);
            }
        }
        if ok {
            for (ci, (j, lj)) in cols.iter().enumerate() {
                if col_used[ci] > *lj {
                    ok = false;
                    break;
                }
                if col_used[ci] < *lj {
                    matrix.entries.insert((zero.clone(), j.clone()), lj - col_used[ci]);
                }
            }
        }
        if ok {
            out.push(matrix);
        }
        // odometer over cells, bounded by min(k_i, l_j)
        let mut idx = 0;
        loop {
            if idx == ncell {
                break 'outer;
            }
            let ri = idx / cols.len();
            let ci = idx % cols.len();
            let cap = rows[ri].1.min(cols[ci].1);
            cells[idx] += 1;
            if cells[idx] <= cap {
                break;
            }
            cells[idx] = 0;
            idx += 1;
        }
    }
    out.sort();
    out
}

/// Bell numbers via the Bell triangle.
pub fn bell_number(k: u32) -> Int {
    let mut row: Vec<Int> = vec![Int::from(1)];
    for _ in 0..k {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().unwrap().clone());
        for v in &row {
            let last = next.last().unwrap().clone();
            next.push(last + v);
        }
        row = next;
    }
    row[0].clone()
}

/// Number of partitions of the integer `k`.
pub fn partition_count(k: u32) -> Int {
    let mut table: Vec<Int> = vec![Int::from(0); k as usize + 1];
    table[0] = Int::from(1);
    for part in 1..=k as usize {
        for n in part..=k as usize {
            let add = table[n - part].clone();
            table[n] += add;
        }
    }
    table[k as usize].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_map_paper_example() {
        // [(2,1), (2,1), (0,3)] is a partition of (4,5)
        let pi = MultiPartition::from_parts(&[&[2, 1], &[2, 1], &[0, 3]]);
        assert_eq!(pi.sum(2), vec![4, 5]);
        assert_eq!(pi.num_parts(), 3);
        assert_eq!(pi.num_distinct(), 2);
        assert_eq!(MultiPartition::empty().sum(3), vec![0, 0, 0]);
        assert_eq!(MultiPartition::from_ints(&[3]).sum(1), vec![3]);
    }

    #[test]
    fn mu_fiber_of_112() {
        // mu^{-1}([1,1,2]) has the four elements listed in the text
        let pi = MultiPartition::from_ints(&[1, 1, 2]);
        let fibre = mu_fiber(&pi);
        assert_eq!(fibre.len(), 4);
        for w in &fibre {
            assert_eq!(w.mu_map(), pi);
        }
        // single part: trivial fibre
        let single = MultiPartition::from_ints(&[7]);
        assert_eq!(mu_fiber(&single).len(), 1);
    }

    #[test]
    fn mu_fiber_counts() {
        // k identical parts: p(k) multiset partitions
        for k in 1..=6u32 {
            let pi = MultiPartition::from_ints(&vec![1; k as usize]);
            assert_eq!(Int::from(mu_fiber(&pi).len() as u64), partition_count(k));
        }
        // k distinct parts: Bell(k) set partitions
        for k in 1..=6u32 {
            let parts: Vec<u32> = (1..=k).collect();
            let pi = MultiPartition::from_ints(&parts);
            assert_eq!(Int::from(mu_fiber(&pi).len() as u64), bell_number(k));
        }
    }

    #[test]
    fn contraction_examples() {
        assert_eq!(contraction(&[1, 0, 3]), vec![1, 3]);
        assert_eq!(contraction(&[0, 0, 2]), vec![2]);
        let q = vec![2, 1, 4];
        assert_eq!(contraction(&q), q);
        // idempotent, preserves block count and column count
        let mu = [3, 0, 1, 0, 0, 2];
        let c = contraction(&mu);
        assert_eq!(contraction(&c), c);
        assert_eq!(
            mu.iter().sum::<u32>(),
            c.iter().sum::<u32>()
        );
        assert_eq!(mu.iter().filter(|&&m| m > 0).count(), c.len());
    }

    #[test]
    fn howe_base_cases() {
        // n = 1: c_1 = id, sum is a single term
        let r = howe_check(&[vec![2, 1]]).unwrap();
        assert_eq!(r.fibre_size, 1);
        assert!(r.equal);
        // ((1),(1)): fibre size 3, sum 1
        let r = howe_check(&[vec![1], vec![1]]).unwrap();
        assert_eq!(r.fibre_size, 3);
        assert_eq!(r.sum, Int::from(1));
        assert!(r.equal);
        // ((1,1),(2)): sum -1
        let r = howe_check(&[vec![1, 1], vec![2]]).unwrap();
        assert_eq!(r.sum, Int::from(-1));
        assert!(r.equal);
    }

    #[test]
    fn howe_rejects_bad_input() {
        assert!(howe_check(&[]).is_err());
        assert!(howe_check(&[vec![1, 0, 2]]).is_err());
        assert!(howe_check(&[vec![13]]).is_err());
    }

    #[test]
    fn overlap_single_parts() {
        // kappa = lambda = [1]: two matrices, d = [2] and d = [1,1]
        let k = MultiPartition::from_ints(&[1]);
        let mats = overlap_enumerate(&k, &k, 1);
        assert_eq!(mats.len(), 2);
        let ds: Vec<MultiPartition> = mats.iter().map(|m| m.deformalise()).collect();
        assert!(ds.contains(&MultiPartition::from_ints(&[2])));
        assert!(ds.contains(&MultiPartition::from_ints(&[1, 1])));
        for m in &mats {
            assert_eq!(m.row_marginal(), k);
            assert_eq!(m.col_marginal(), k);
        }
    }

    #[test]
    fn overlap_marginals_and_empty() {
        let k = MultiPartition::from_ints(&[1, 1]);
        let l = MultiPartition::from_ints(&[1]);
        let mats = overlap_enumerate(&k, &l, 1);
        // overlap count 0 or 1
        assert_eq!(mats.len(), 2);
        for m in &mats {
            assert_eq!(m.row_marginal(), k);
            assert_eq!(m.col_marginal(), l);
        }
        // empty lambda: single matrix, d = kappa
        let mats = overlap_enumerate(&k, &MultiPartition::empty(), 1);
        assert_eq!(mats.len(), 1);
        assert_eq!(mats[0].deformalise(), k);
    }

    #[test]
    fn bell_and_partition_numbers() {
        let bells: Vec<Int> = (0..=6).map(bell_number).collect();
        assert_eq!(
            bells,
            [1, 1, 2, 5, 15, 52, 203].map(Int::from).to_vec()
        );
        let ps: Vec<Int> = (0..=6).map(partition_count).collect();
        assert_eq!(ps, [1, 1, 2, 3, 5, 7, 11].map(Int::from).to_vec());
    }
}
