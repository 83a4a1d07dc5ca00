//! Explicit poset machinery: downsets, intervals `[σ,π]`, cover relations,
//! chain enumeration, and the zeta matrix with its exact integer inverse.

use std::collections::HashMap;

use crate::perm::{contains, Perm};
use crate::{Error, Result};

/// Default refusal threshold on `|top|` for downset/interval construction;
/// element counts become impractical beyond this length.
pub const DEFAULT_LEN_CAP: usize = 22;

/// Default maximum interval size for exhaustive chain enumeration.
pub const DEFAULT_CHAIN_ELEMS: usize = 40;

/// Compact row of bits used for the containment relation.
#[derive(Clone)]
struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn new(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
        }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn or_assign(&mut self, other: &Bits) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}

/// The interval `[bottom, top]` of the containment order, with elements in
/// rank order (length ascending, lexicographic within a length) and the full
/// containment relation between elements.
pub struct IntervalPoset {
    bottom: Perm,
    top: Perm,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    /// `down[j]` has bit `i` set iff `elements[i] ≤ elements[j]`.
    down: Vec<Bits>,
}

/// A maximal-or-not chain through an interval: element indices strictly
/// increasing in the containment order from bottom to top.
pub type Chain = Vec<usize>;

/// 0/1 containment matrix of an interval in rank order; unit upper-triangular.
pub struct ZetaMatrix {
    pub data: Vec<Vec<i64>>,
}

/// Interval `[1, p]` generated by iterated single-point deletion.
pub fn downset(p: &Perm) -> Result<IntervalPoset> {
    interval_with_cap(&Perm::one(), p, DEFAULT_LEN_CAP)
}

/// Interval `[bottom, top]`; errors when `bottom` is not contained in `top`.
pub fn interval(bottom: &Perm, top: &Perm) -> Result<IntervalPoset> {
    interval_with_cap(bottom, top, DEFAULT_LEN_CAP)
}

/// Interval construction with an explicit length cap on `top`.
pub fn interval_with_cap(bottom: &Perm, top: &Perm, len_cap: usize) -> Result<IntervalPoset> {
    if top.len() > len_cap {
        return Err(Error::Guard(format!(
            "refusing interval construction for |top| = {} > {len_cap}",
            top.len()
        )));
    }
    if !contains(bottom, top) {
        return Err(Error::InvalidParam(format!(
            "interval bottom {bottom} is not contained in top {top}"
        )));
    }
    // Deletion closure of top, level by level, down to the bottom's length.
    let mut levels: Vec<Vec<Perm>> = vec![vec![top.clone()]];
    let floor = bottom.len();
    while levels.last().unwrap()[0].len() > floor {
        let mut next: Vec<Perm> = levels
            .last()
            .unwrap()
            .iter()
            .flat_map(|q| (0..q.len()).map(|i| q.delete_point(i)))
            .collect();
        next.sort();
        next.dedup();
        levels.push(next);
    }
    levels.reverse();
    let full: Vec<Perm> = levels.into_iter().flatten().collect();
    let full_index: HashMap<Perm, usize> = full
        .iter()
        .enumerate()
        .map(|(i, q)| (q.clone(), i))
        .collect();

    // Downward reachability through single deletions is exactly containment.
    let m = full.len();
    let mut down_full: Vec<Bits> = Vec::with_capacity(m);
    for (j, q) in full.iter().enumerate() {
        let mut row = Bits::new(m);
        row.set(j);
        if q.len() > floor {
            for i in 0..q.len() {
                let child = q.delete_point(i);
                if let Some(&ci) = full_index.get(&child) {
                    row.or_assign(&down_full[ci]);
                }
            }
        }
        down_full.push(row);
    }

    let bottom_full = full_index[bottom];
    let keep: Vec<usize> = (0..m)
        .filter(|&j| down_full[j].get(bottom_full))
        .collect();
    let remap: HashMap<usize, usize> = keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let elements: Vec<Perm> = keep.iter().map(|&j| full[j].clone()).collect();
    let down: Vec<Bits> = keep
        .iter()
        .map(|&j| {
            let mut row = Bits::new(elements.len());
            for i in down_full[j].ones() {
                if let Some(&ni) = remap.get(&i) {
                    row.set(ni);
                }
            }
            row
        })
        .collect();
    let index = elements
        .iter()
        .enumerate()
        .map(|(i, q)| (q.clone(), i))
        .collect();
    Ok(IntervalPoset {
        bottom: bottom.clone(),
        top: top.clone(),
        elements,
        index,
        down,
    })
}

impl IntervalPoset {
    pub fn bottom(&self) -> &Perm {
        &self.bottom
    }

    pub fn top(&self) -> &Perm {
        &self.top
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, q: &Perm) -> Option<usize> {
        self.index.get(q).copied()
    }

    /// True when `elements[i] ≤ elements[j]`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.down[j].get(i)
    }

    /// Indices of all elements below-or-equal `j`.
    pub fn below(&self, j: usize) -> Vec<usize> {
        self.down[j].ones().collect()
    }

    /// Cover pairs `(i, j)`: `elements[j]` covers `elements[i]`. In this
    /// poset covers differ in length by exactly one.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.len() {
            let lj = self.elements[j].len();
            for i in self.down[j].ones() {
                if i != j && self.elements[i].len() + 1 == lj {
                    out.push((i, j));
                }
            }
        }
        out.sort();
        out
    }

    /// Visit every chain from bottom to top. A chain is any totally ordered
    /// subset containing both endpoints, reported as increasing indices.
    pub fn for_each_chain(&self, visit: &mut dyn FnMut(&[usize])) {
        let m = self.len();
        if m == 0 {
            return;
        }
        let top = m - 1;
        let mut stack: Chain = vec![0];
        self.chain_dfs(0, top, &mut stack, visit);
    }

    fn chain_dfs(&self, current: usize, top: usize, stack: &mut Chain, visit: &mut dyn FnMut(&[usize])) {
        if current == top {
            visit(stack);
            return;
        }
        for next in current + 1..=top {
            if self.leq(current, next) {
                stack.push(next);
                self.chain_dfs(next, top, stack, visit);
                stack.pop();
            }
        }
    }

    /// Chain counts `K_i` indexed by length `i` (= cardinality − 1) for
    /// bottom-to-top chains, computed by stepping an occupancy vector rather
    /// than enumerating chains one by one.
    pub fn chain_counts(&self) -> Result<Vec<i64>> {
        self.chain_counts_between(0, self.len() - 1)
    }

    /// Chain counts for the subinterval `[elements[lo], elements[hi]]`.
    ///
    /// `f_0` is the indicator of `lo`; each step sends `f` to the vector of
    /// sums over strict predecessors, so after `i` steps `f[hi]` counts the
    /// chains of length `i` from `lo` to `hi`.
    pub fn chain_counts_between(&self, lo: usize, hi: usize) -> Result<Vec<i64>> {
        if !self.leq(lo, hi) {
            return Err(Error::InvalidParam(format!(
                "chain counts requested between incomparable elements {} and {}",
                self.elements[lo], self.elements[hi]
            )));
        }
        // Rank order puts every member of the subinterval at an index in
        // `lo..=hi`, with `lo` first and `hi` last.
        let members: Vec<usize> = (lo..=hi)
            .filter(|&k| self.leq(lo, k) && self.leq(k, hi))
            .collect();
        let m = members.len();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (b, &kb) in members.iter().enumerate() {
            for (a, &ka) in members.iter().enumerate().take(b) {
                if self.leq(ka, kb) {
                    preds[b].push(a);
                }
            }
        }
        let rank = self.elements[hi].len() - self.elements[lo].len();
        let mut counts: Vec<i64> = Vec::with_capacity(rank + 1);
        let mut f = vec![0i64; m];
        f[0] = 1;
        counts.push(f[m - 1]);
        for _ in 0..rank {
            let mut next = vec![0i64; m];
            for b in 0..m {
                let mut acc: i64 = 0;
                for &a in &preds[b] {
                    acc = acc
                        .checked_add(f[a])
                        .ok_or(Error::Overflow("chain counting"))?;
                }
                next[b] = acc;
            }
            f = next;
            counts.push(f[m - 1]);
        }
        Ok(counts)
    }

    /// The 0/1 containment matrix in element order.
    pub fn zeta_matrix(&self) -> ZetaMatrix {
        let m = self.len();
        let mut data = vec![vec![0i64; m]; m];
        for j in 0..m {
            for i in self.down[j].ones() {
                data[i][j] = 1;
            }
        }
        ZetaMatrix { data }
    }

    /// DOT rendering of the Hasse diagram, bottom-up.
    pub fn hasse_dot(&self) -> String {
        let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, q) in self.elements.iter().enumerate() {
            let label = if q.is_empty() { "<>".to_string() } else { q.to_string() };
            out.push_str(&format!("  n{i} [label=\"{label}\"];\n"));
        }
        for (i, j) in self.covers() {
            out.push_str(&format!("  n{i} -> n{j};\n"));
        }
        out.push_str("}\n");
        out
    }
}

impl ZetaMatrix {
    /// Exact integer inverse by back-substitution; the matrix is unit
    /// upper-triangular so the inverse is integral.
    pub fn invert(&self) -> Result<Vec<Vec<i64>>> {
        let m = self.data.len();
        let mut inv = vec![vec![0i64; m]; m];
        for i in 0..m {
            inv[i][i] = 1;
        }
        for i in 0..m {
            for j in i + 1..m {
                let mut acc: i64 = 0;
                for k in i..j {
                    if self.data[k][j] == 1 {
                        acc = acc
                            .checked_sub(inv[i][k])
                            .ok_or(Error::Overflow("zeta inversion"))?;
                    }
                }
                inv[i][j] = acc;
            }
        }
        Ok(inv)
    }
}

/// Every distinct pattern contained in `top` (lengths `1..=|top|`), by
/// iterated deletion; rank order. The universe for downward recursions.
pub fn pattern_closure(top: &Perm) -> Vec<Perm> {
    if top.is_empty() {
        return Vec::new();
    }
    let mut levels: Vec<Vec<Perm>> = vec![vec![top.clone()]];
    while levels.last().unwrap()[0].len() > 1 {
        let mut next: Vec<Perm> = levels
            .last()
            .unwrap()
            .iter()
            .flat_map(|q| (0..q.len()).map(|i| q.delete_point(i)))
            .collect();
        next.sort();
        next.dedup();
        levels.push(next);
    }
    levels.reverse();
    levels.into_iter().flatten().collect()
}
