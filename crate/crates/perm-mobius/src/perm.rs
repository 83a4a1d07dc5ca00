//! Core permutation type: containment testing, embedding enumeration,
//! structural algebra (sums, interleaves, inflation), structural detectors
//! (adjacencies, intervals, simplicity, corners), and the eight-symmetry
//! canonicalization.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// A permutation of `{1..n}` in one-line notation. `n = 0` is the empty
/// permutation. Equality and ordering are by literal value sequence.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    vals: Vec<u32>,
}

/// An occurrence of a pattern inside a host permutation, as the strictly
/// increasing list of host positions used (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub positions: Vec<usize>,
}

impl Embedding {
    pub fn pattern_length(&self) -> usize {
        self.positions.len()
    }
}

/// Positions of length-2 intervals (adjacencies) plus monotone-run summary.
/// An up-adjacency at `i` means `vals[i+1] = vals[i] + 1`; down means `− 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyReport {
    pub up_positions: Vec<usize>,
    pub down_positions: Vec<usize>,
    pub has_triple: bool,
    pub longest_monotone_interval: usize,
}

impl AdjacencyReport {
    pub fn has_opposing(&self) -> bool {
        !self.up_positions.is_empty() && !self.down_positions.is_empty()
    }

    pub fn is_adjacency_free(&self) -> bool {
        self.up_positions.is_empty() && self.down_positions.is_empty()
    }
}

/// Which sum a decomposition refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumKind {
    Direct,
    Skew,
}

/// The finest decomposition of a permutation under one sum kind: every part
/// is indecomposable for that kind and recomposition reproduces the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumDecomposition {
    pub kind: SumKind,
    pub parts: Vec<Perm>,
}

impl SumDecomposition {
    /// Recompose a contiguous run of parts back into a permutation.
    pub fn recompose_range(&self, lo: usize, hi: usize) -> Perm {
        let mut acc = Perm::empty();
        for part in &self.parts[lo..hi] {
            acc = match self.kind {
                SumKind::Direct => direct_sum(&acc, part),
                SumKind::Skew => skew_sum(&acc, part),
            };
        }
        acc
    }
}

impl Perm {
    /// The empty permutation.
    pub fn empty() -> Self {
        Perm { vals: Vec::new() }
    }

    /// The singleton permutation `1`.
    pub fn one() -> Self {
        Perm { vals: vec![1] }
    }

    /// The increasing permutation `1 2 … n`.
    pub fn identity(n: usize) -> Self {
        Perm {
            vals: (1..=n as u32).collect(),
        }
    }

    /// The decreasing permutation `n … 2 1`.
    pub fn decreasing(n: usize) -> Self {
        Perm {
            vals: (1..=n as u32).rev().collect(),
        }
    }

    /// Build from one-line values, validating that they are a bijection on
    /// `{1..n}`.
    pub fn from_vals(vals: Vec<u32>) -> Result<Self> {
        let n = vals.len();
        let mut seen = vec![false; n];
        for &v in &vals {
            if v == 0 || v as usize > n || seen[v as usize - 1] {
                return Err(Error::Parse(format!(
                    "values must be a permutation of 1..{n}, got {vals:?}"
                )));
            }
            seen[v as usize - 1] = true;
        }
        Ok(Perm { vals })
    }

    /// Build without validation; caller guarantees a bijection on `{1..n}`.
    pub(crate) fn from_vals_unchecked(vals: Vec<u32>) -> Self {
        debug_assert!(Perm::from_vals(vals.clone()).is_ok());
        Perm { vals }
    }

    /// The pattern (standardization) of any sequence of distinct values.
    pub fn pattern_of(values: &[u32]) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by_key(|&i| values[i]);
        let mut vals = vec![0u32; values.len()];
        for (rank, &i) in order.iter().enumerate() {
            vals[i] = rank as u32 + 1;
        }
        Perm { vals }
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn vals(&self) -> &[u32] {
        &self.vals
    }

    pub fn is_identity(&self) -> bool {
        self.vals.iter().enumerate().all(|(i, &v)| v == i as u32 + 1)
    }

    pub fn is_decreasing(&self) -> bool {
        let n = self.len() as u32;
        self.vals.iter().enumerate().all(|(i, &v)| v == n - i as u32)
    }

    /// Delete the point at position `i`, standardizing the remainder.
    pub fn delete_point(&self, i: usize) -> Perm {
        let removed = self.vals[i];
        let vals = self
            .vals
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &v)| if v > removed { v - 1 } else { v })
            .collect();
        Perm { vals }
    }

    /// Delete a set of positions at once, standardizing the remainder.
    pub fn delete_points(&self, positions: &[usize]) -> Perm {
        let mut keep: Vec<u32> = Vec::with_capacity(self.len() - positions.len());
        for (j, &v) in self.vals.iter().enumerate() {
            if !positions.contains(&j) {
                keep.push(v);
            }
        }
        Perm::pattern_of(&keep)
    }

    /// All distinct single-point deletions, sorted.
    pub fn deletions(&self) -> Vec<Perm> {
        let mut out: Vec<Perm> = (0..self.len()).map(|i| self.delete_point(i)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// True when this permutation occurs as a pattern inside `host`.
    pub fn contained_in(&self, host: &Perm) -> bool {
        contains(self, host)
    }

    /// Reverse the positions.
    pub fn reverse(&self) -> Perm {
        Perm {
            vals: self.vals.iter().rev().copied().collect(),
        }
    }

    /// Complement the values.
    pub fn complement(&self) -> Perm {
        let n = self.len() as u32;
        Perm {
            vals: self.vals.iter().map(|&v| n + 1 - v).collect(),
        }
    }

    /// The group-theoretic inverse.
    pub fn inverse(&self) -> Perm {
        let mut vals = vec![0u32; self.len()];
        for (i, &v) in self.vals.iter().enumerate() {
            vals[v as usize - 1] = i as u32 + 1;
        }
        Perm { vals }
    }

    /// The eight images under the reverse/complement/inverse group, in a
    /// fixed order (identity first). Images may repeat for symmetric inputs.
    pub fn symmetries(&self) -> Vec<Perm> {
        let mut out = Vec::with_capacity(8);
        for base in [self.clone(), self.inverse()] {
            let r = base.reverse();
            let c = base.complement();
            let rc = r.complement();
            out.push(base);
            out.push(r);
            out.push(c);
            out.push(rc);
        }
        out
    }

    /// The lexicographically least image under the eight symmetries.
    pub fn canonical(&self) -> Perm {
        self.symmetries().into_iter().min().unwrap_or_else(Perm::empty)
    }

    /// Adjacency scan: length-2 intervals and monotone-run summary.
    pub fn adjacency_report(&self) -> AdjacencyReport {
        let mut up = Vec::new();
        let mut down = Vec::new();
        for i in 0..self.len().saturating_sub(1) {
            if self.vals[i + 1] == self.vals[i] + 1 {
                up.push(i);
            } else if self.vals[i] == self.vals[i + 1] + 1 {
                down.push(i);
            }
        }
        let has_triple = up.windows(2).any(|w| w[1] == w[0] + 1)
            || down.windows(2).any(|w| w[1] == w[0] + 1);
        let mut longest = usize::min(self.len(), 1);
        let mut run = 1usize;
        for i in 1..self.len() {
            let step = self.vals[i] as i64 - self.vals[i - 1] as i64;
            let prev = if i >= 2 {
                self.vals[i - 1] as i64 - self.vals[i - 2] as i64
            } else {
                0
            };
            if step.abs() == 1 && (run == 1 || step == prev) {
                run += 1;
            } else if step.abs() == 1 {
                run = 2;
            } else {
                run = 1;
            }
            longest = longest.max(run);
        }
        AdjacencyReport {
            up_positions: up,
            down_positions: down,
            has_triple,
            longest_monotone_interval: longest,
        }
    }

    /// All proper intervals as `(start, length)` with `1 < length < n`,
    /// sorted by start then length. Empty iff the permutation is simple.
    pub fn find_proper_intervals(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for s in 0..n {
            let mut lo = self.vals[s];
            let mut hi = self.vals[s];
            for e in s + 1..n {
                lo = lo.min(self.vals[e]);
                hi = hi.max(self.vals[e]);
                let len = e - s + 1;
                if len == n {
                    break;
                }
                if (hi - lo) as usize == e - s {
                    out.push((s, len));
                }
            }
        }
        out
    }

    /// True when the only intervals are trivial. Lengths 0..=2 count as
    /// simple, matching the convention that 1, 12, 21 are simple.
    pub fn is_simple(&self) -> bool {
        self.find_proper_intervals().is_empty()
    }

    /// True when the permutation matches `1⊕1⊕τ`, `τ⊕1⊕1`, `1⊖1⊖τ`, or
    /// `τ⊖1⊖1` with `τ` nonempty.
    pub fn detect_long_corner(&self) -> bool {
        let n = self.len();
        if n < 3 {
            return false;
        }
        let v = &self.vals;
        let n32 = n as u32;
        (v[0] == 1 && v[1] == 2)
            || (v[n - 2] == n32 - 1 && v[n - 1] == n32)
            || (v[0] == n32 && v[1] == n32 - 1)
            || (v[n - 2] == 2 && v[n - 1] == 1)
    }

    /// Finest decomposition under the given sum kind. A one-part result
    /// means the permutation is indecomposable for that kind.
    pub fn finest_decomposition(&self, kind: SumKind) -> Result<SumDecomposition> {
        if self.is_empty() {
            return Err(Error::InvalidParam(
                "cannot decompose the empty permutation".into(),
            ));
        }
        let n = self.len();
        let mut parts = Vec::new();
        let mut start = 0usize;
        let mut lo = u32::MAX;
        let mut hi = 0u32;
        for (i, &v) in self.vals.iter().enumerate() {
            lo = lo.min(v);
            hi = hi.max(v);
            let complete = match kind {
                SumKind::Direct => hi as usize == i + 1,
                SumKind::Skew => lo as usize == n - i,
            };
            if complete {
                parts.push(Perm::pattern_of(&self.vals[start..=i]));
                start = i + 1;
                lo = u32::MAX;
                hi = 0;
            }
        }
        Ok(SumDecomposition { kind, parts })
    }

    pub fn sum_indecomposable(&self) -> bool {
        !self.is_empty()
            && self
                .finest_decomposition(SumKind::Direct)
                .map(|d| d.parts.len() == 1)
                .unwrap_or(false)
    }

    pub fn skew_indecomposable(&self) -> bool {
        !self.is_empty()
            && self
                .finest_decomposition(SumKind::Skew)
                .map(|d| d.parts.len() == 1)
                .unwrap_or(false)
    }
}

/// True when `host` has a subsequence order-isomorphic to `pattern`.
/// Depth-first backtracking over positions with value-window pruning.
pub fn contains(pattern: &Perm, host: &Perm) -> bool {
    let mut found = false;
    embed_search(pattern, host, None, &mut |_| {
        found = true;
        false
    });
    found
}

/// All embeddings of `pattern` into `host` in lexicographic position order,
/// truncated at `limit` when given.
pub fn enumerate_embeddings(pattern: &Perm, host: &Perm, limit: Option<usize>) -> Vec<Embedding> {
    let mut out = Vec::new();
    embed_search(pattern, host, limit, &mut |positions| {
        out.push(Embedding {
            positions: positions.to_vec(),
        });
        true
    });
    out
}

/// The number of embeddings of `pattern` into `host`.
pub fn count_embeddings(pattern: &Perm, host: &Perm) -> u64 {
    let mut count = 0u64;
    embed_search(pattern, host, None, &mut |_| {
        count += 1;
        true
    });
    count
}

/// Visit embeddings in lexicographic position order, streaming the host
/// positions of each occurrence; return `false` from the visitor to abandon
/// the rest of the search.
pub fn visit_embeddings(pattern: &Perm, host: &Perm, visit: &mut dyn FnMut(&[usize]) -> bool) {
    embed_search(pattern, host, None, visit);
}

/// Visit the value sequence of every length-n permutation exactly once,
/// without allocating per visit. The order is Heap's, not lexicographic.
pub fn for_each_arrangement(n: usize, mut f: impl FnMut(&[u32])) {
    let mut vals: Vec<u32> = (1..=n as u32).collect();
    f(&vals);
    if n < 2 {
        return;
    }
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                vals.swap(0, i);
            } else {
                vals.swap(c[i], i);
            }
            f(&vals);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Visit embeddings in lexicographic position order until `limit` is reached
/// or the visitor returns `false`.
fn embed_search(
    pattern: &Perm,
    host: &Perm,
    limit: Option<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) {
    let k = pattern.len();
    let n = host.len();
    if k == 0 {
        visit(&[]);
        return;
    }
    if k > n {
        return;
    }
    // For each pattern index, the indices of its tightest smaller and larger
    // predecessors by value; a candidate host value needs only these bounds.
    let mut lower = vec![usize::MAX; k];
    let mut upper = vec![usize::MAX; k];
    for i in 0..k {
        let pv = pattern.vals[i];
        let mut best_lo: Option<usize> = None;
        let mut best_hi: Option<usize> = None;
        for j in 0..i {
            let qv = pattern.vals[j];
            if qv < pv && best_lo.map_or(true, |b| pattern.vals[b] < qv) {
                best_lo = Some(j);
            }
            if qv > pv && best_hi.map_or(true, |b| pattern.vals[b] > qv) {
                best_hi = Some(j);
            }
        }
        lower[i] = best_lo.unwrap_or(usize::MAX);
        upper[i] = best_hi.unwrap_or(usize::MAX);
    }
    let mut chosen = vec![0usize; k];
    let mut emitted = 0usize;
    dfs(
        pattern, host, &lower, &upper, &mut chosen, 0, 0, limit, &mut emitted, visit,
    );

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        pattern: &Perm,
        host: &Perm,
        lower: &[usize],
        upper: &[usize],
        chosen: &mut Vec<usize>,
        depth: usize,
        start: usize,
        limit: Option<usize>,
        emitted: &mut usize,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if depth == pattern.len() {
            *emitted += 1;
            if !visit(chosen) {
                return false;
            }
            return limit.map_or(true, |l| *emitted < l);
        }
        let remaining = pattern.len() - depth;
        let lo_bound = if lower[depth] == usize::MAX {
            0
        } else {
            host.vals[chosen[lower[depth]]]
        };
        let hi_bound = if upper[depth] == usize::MAX {
            u32::MAX
        } else {
            host.vals[chosen[upper[depth]]]
        };
        for p in start..=host.len() - remaining {
            let v = host.vals[p];
            if v > lo_bound && v < hi_bound {
                chosen[depth] = p;
                if !dfs(
                    pattern,
                    host,
                    lower,
                    upper,
                    chosen,
                    depth + 1,
                    p + 1,
                    limit,
                    emitted,
                    visit,
                ) {
                    return false;
                }
            }
        }
        true
    }
}

/// `a ⊕ b`: `b` above and after `a`.
pub fn direct_sum(a: &Perm, b: &Perm) -> Perm {
    let m = a.len() as u32;
    let mut vals = a.vals.clone();
    vals.extend(b.vals.iter().map(|&v| v + m));
    Perm { vals }
}

/// `a ⊖ b`: `b` below and after `a`.
pub fn skew_sum(a: &Perm, b: &Perm) -> Perm {
    let m = b.len() as u32;
    let mut vals: Vec<u32> = a.vals.iter().map(|&v| v + m).collect();
    vals.extend(b.vals.iter().copied());
    Perm { vals }
}

/// `a ⧉ b`: direct sum with the largest value of the `a` block and the
/// smallest value of the `b` block exchanged.
pub fn interleave(a: &Perm, b: &Perm) -> Result<Perm> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParam("interleave needs nonempty operands".into()));
    }
    let m = a.len() as u32;
    let mut p = direct_sum(a, b);
    for v in &mut p.vals {
        if *v == m {
            *v = m + 1;
        } else if *v == m + 1 {
            *v = m;
        }
    }
    Ok(p)
}

/// `a ⊘ b`: skew sum with the smallest value of the `a` block and the
/// largest value of the `b` block exchanged.
pub fn skew_interleave(a: &Perm, b: &Perm) -> Result<Perm> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParam("skew interleave needs nonempty operands".into()));
    }
    let m = b.len() as u32;
    let mut p = skew_sum(a, b);
    for v in &mut p.vals {
        if *v == m {
            *v = m + 1;
        } else if *v == m + 1 {
            *v = m;
        }
    }
    Ok(p)
}

/// First window of `host` (by start position) forming an interval copy of
/// `phi`: contiguous positions, contiguous values, order-isomorphic to `phi`.
pub fn find_interval_copy(phi: &Perm, host: &Perm) -> Option<usize> {
    let k = phi.len();
    let n = host.len();
    if k == 0 || k > n {
        return None;
    }
    'outer: for s in 0..=n - k {
        let window = &host.vals[s..s + k];
        let lo = *window.iter().min().unwrap();
        let hi = *window.iter().max().unwrap();
        if (hi - lo) as usize != k - 1 {
            continue;
        }
        for i in 0..k {
            if window[i] - lo + 1 != phi.vals[i] {
                continue 'outer;
            }
        }
        return Some(s);
    }
    None
}

/// True when `host` has an interval copy of `phi`.
pub fn contains_interval_copy(phi: &Perm, host: &Perm) -> bool {
    find_interval_copy(phi, host).is_some()
}

/// Replace each skeleton point by an interval copy of its part; an empty
/// part deletes the point. Errors on length mismatch or all parts empty.
pub fn inflate(skeleton: &Perm, parts: &[Perm]) -> Result<Perm> {
    if parts.len() != skeleton.len() {
        return Err(Error::InvalidParam(format!(
            "inflation needs {} parts, got {}",
            skeleton.len(),
            parts.len()
        )));
    }
    if parts.iter().all(|p| p.is_empty()) {
        return Err(Error::InvalidParam("inflation with all parts empty".into()));
    }
    // Value base for each skeleton point: total size of parts at points with
    // smaller skeleton values.
    let n = skeleton.len();
    let mut base = vec![0u32; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| skeleton.vals[i]);
    let mut acc = 0u32;
    for &i in &order {
        base[i] = acc;
        acc += parts[i].len() as u32;
    }
    let mut vals = Vec::with_capacity(acc as usize);
    for i in 0..n {
        vals.extend(parts[i].vals.iter().map(|&v| v + base[i]));
    }
    Ok(Perm { vals })
}

impl fmt::Display for Perm {
    /// Digits concatenated for `n ≤ 9`, comma-separated otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for &v in &self.vals {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let text = self
                .vals
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",");
            f.write_str(&text)
        }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm({self})")
    }
}

impl FromStr for Perm {
    type Err = Error;

    /// Accepts both text forms: digit-concatenated and comma-separated.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Perm::empty());
        }
        let vals: Vec<u32> = if s.contains(',') {
            s.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad entry {tok:?} in {s:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .filter(|&d| d > 0)
                        .ok_or_else(|| Error::Parse(format!("bad digit {c:?} in {s:?}")))
                })
                .collect::<Result<_>>()?
        };
        Perm::from_vals(vals)
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        assert_eq!(p("2413").vals(), &[2, 4, 1, 3]);
        assert_eq!(p("2413").to_string(), "2413");
        let long = p("2,21,4,19,6,17,8,15,10,13,11,9,12,7,14,5,16,3,18,1,20");
        assert_eq!(long.len(), 21);
        assert_eq!(long.to_string(), "2,21,4,19,6,17,8,15,10,13,11,9,12,7,14,5,16,3,18,1,20");
        assert_eq!(p(""), Perm::empty());
        assert_eq!(p("10,2,1,3,4,5,6,7,8,9").len(), 10);
        assert!("2414".parse::<Perm>().is_err());
        assert!("0".parse::<Perm>().is_err());
        assert!("2,x,1".parse::<Perm>().is_err());
    }

    #[test]
    fn containment_basics() {
        assert!(contains(&p("2413"), &p("1,7,4,3,10,9,2,5,8,6")));
        assert!(contains(&Perm::empty(), &p("2413")));
        assert!(!contains(&p("123"), &p("321")));
        assert!(contains(&p("1"), &p("1")));
        assert!(!contains(&p("12"), &p("1")));
    }

    #[test]
    fn embedding_enumeration() {
        assert_eq!(enumerate_embeddings(&p("1"), &p("35142"), None).len(), 5);
        let embs = enumerate_embeddings(&p("132"), &p("41253"), None);
        assert!(embs.iter().any(|e| e.positions == vec![1, 3, 4]));
        let embs = enumerate_embeddings(&p("21"), &p("2431"), None);
        let expect: Vec<Vec<usize>> = vec![vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]];
        assert_eq!(embs.iter().map(|e| e.positions.clone()).collect::<Vec<_>>(), expect);
        assert_eq!(enumerate_embeddings(&p("21"), &p("2431"), Some(2)).len(), 2);
        assert_eq!(count_embeddings(&p("21"), &p("2431")), 4);
    }

    #[test]
    fn embedding_count_matches_subset_filter_oracle() {
        let host = p("415263");
        for pat in ["1", "12", "21", "231", "2413", "321"] {
            let pat = p(pat);
            let k = pat.len();
            let n = host.len();
            let mut count = 0u64;
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize != k {
                    continue;
                }
                let sub: Vec<u32> = (0..n)
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| host.vals()[i])
                    .collect();
                if Perm::pattern_of(&sub) == pat {
                    count += 1;
                }
            }
            assert_eq!(count_embeddings(&pat, &host), count, "pattern {pat}");
        }
    }

    #[test]
    fn sums_and_interleaves() {
        assert_eq!(direct_sum(&p("321"), &p("213")), p("321546"));
        assert_eq!(skew_sum(&p("321"), &p("213")), p("654213"));
        assert_eq!(interleave(&p("321"), &p("213")).unwrap(), p("421536"));
        assert_eq!(skew_interleave(&p("321"), &p("213")).unwrap(), p("653214"));
        let t3 = interleave(&interleave(&p("21"), &p("21")).unwrap(), &p("21")).unwrap();
        assert_eq!(t3, p("315264"));
        assert!(interleave(&Perm::empty(), &p("1")).is_err());
    }

    #[test]
    fn finest_decompositions() {
        let d = p("321546").finest_decomposition(SumKind::Direct).unwrap();
        assert_eq!(d.parts, vec![p("321"), p("21"), p("1")]);
        let s = p("654213").finest_decomposition(SumKind::Skew).unwrap();
        assert_eq!(s.parts, vec![p("1"), p("1"), p("1"), p("213")]);
        let simple = p("2413").finest_decomposition(SumKind::Direct).unwrap();
        assert_eq!(simple.parts, vec![p("2413")]);
        assert!(p("2413").sum_indecomposable());
        assert!(!p("321546").sum_indecomposable());
        assert_eq!(d.recompose_range(0, 3), p("321546"));
        assert_eq!(d.recompose_range(1, 3), p("213"));
    }

    #[test]
    fn adjacency_reports() {
        let r = p("367249815").adjacency_report();
        assert_eq!(r.up_positions, vec![1]);
        assert_eq!(r.down_positions, vec![5]);
        assert!(r.has_opposing());
        assert!(!r.has_triple);

        let r = p("1432").adjacency_report();
        assert_eq!(r.down_positions, vec![1, 2]);
        assert!(r.has_triple);
        assert_eq!(r.longest_monotone_interval, 3);

        let r = p("2413").adjacency_report();
        assert!(r.is_adjacency_free());
        assert_eq!(r.longest_monotone_interval, 1);

        assert_eq!(p("12453").adjacency_report().longest_monotone_interval, 2);
        assert_eq!(p("123").adjacency_report().longest_monotone_interval, 3);
        // Runs of opposite directions meeting at a point do not chain.
        let r = p("1254376").adjacency_report();
        assert_eq!(r.up_positions, vec![0]);
        assert_eq!(r.down_positions, vec![2, 3, 5]);
        assert!(r.has_triple);
        assert_eq!(r.longest_monotone_interval, 3);
    }

    #[test]
    fn interval_detection() {
        assert!(p("1324").find_proper_intervals().contains(&(1, 2)));
        assert!(p("2413").find_proper_intervals().is_empty());
        assert!(p("264315").find_proper_intervals().contains(&(2, 2)));
        assert!(p("2413").is_simple());
        assert!(p("1").is_simple());
        assert!(p("12").is_simple());
        assert!(!p("123").is_simple());
    }

    #[test]
    fn interval_copy_search() {
        assert!(contains_interval_copy(&p("21"), &p("264315")));
        assert!(contains_interval_copy(&p("2431"), &p("13542")));
        assert_eq!(find_interval_copy(&p("2431"), &p("13542")), Some(1));
        // The whole permutation is itself a window.
        assert_eq!(find_interval_copy(&p("2431"), &p("2431")), Some(0));
        // 3241 ⊕ 3241: the only windows with contiguous values are the two
        // 3241 blocks and the whole, none ordered like 2431.
        assert!(!contains_interval_copy(&p("2431"), &p("32417685")));
        assert!(!contains_interval_copy(&p("123"), &p("2413")));
        // 123 occurs in 13524 as a subsequence but never as an interval.
        assert!(contains(&p("123"), &p("13524")));
        assert!(!contains_interval_copy(&p("123"), &p("13524")));
    }

    #[test]
    fn inflation() {
        let parts: Vec<Perm> = vec![p("1"), p("12"), p("1"), p("1"), p("21"), p("1"), p("1")];
        assert_eq!(inflate(&p("3624715"), &parts).unwrap(), p("367249815"));
        let parts: Vec<Perm> = vec![
            Perm::empty(),
            p("1"),
            p("1"),
            Perm::empty(),
            p("1"),
            Perm::empty(),
            p("1"),
        ];
        assert_eq!(inflate(&p("3624715"), &parts).unwrap(), p("3142"));
        let ones: Vec<Perm> = vec![p("1"); 4];
        assert_eq!(inflate(&p("2413"), &ones).unwrap(), p("2413"));
        assert!(inflate(&p("21"), &[p("1")]).is_err());
        assert!(inflate(&p("21"), &[Perm::empty(), Perm::empty()]).is_err());
    }

    #[test]
    fn symmetry_group() {
        assert_eq!(p("3142").canonical(), p("2413"));
        assert_eq!(p("1").canonical(), p("1"));
        assert_eq!(p("321").canonical(), p("123"));
        let images = p("2413").symmetries();
        assert_eq!(images.len(), 8);
        assert!(images.contains(&p("3142")));
        assert_eq!(p("2413").inverse(), p("3142"));
        assert_eq!(p("231").inverse(), p("312"));
        assert_eq!(p("12534").reverse(), p("43521"));
        assert_eq!(p("12534").complement(), p("54132"));
        // The eight images of an asymmetric permutation are distinct.
        let mut imgs = p("12534").symmetries();
        imgs.sort();
        imgs.dedup();
        assert_eq!(imgs.len(), 8);
        // 25314 equals its own rotation, so its orbit collapses to two.
        let mut imgs = p("25314").symmetries();
        imgs.sort();
        imgs.dedup();
        assert_eq!(imgs, vec![p("25314"), p("41352")]);
    }

    #[test]
    fn long_corner_detection() {
        assert!(p("123").detect_long_corner());
        assert!(!p("2413").detect_long_corner());
        assert!(p("4312").detect_long_corner());
        assert!(p("12453").detect_long_corner());
        assert!(!p("12").detect_long_corner());
        assert!(p("45123").detect_long_corner() == false);
        assert!(p("34521").detect_long_corner());
    }

    #[test]
    fn point_deletion() {
        assert_eq!(p("2413").delete_point(0), p("312"));
        assert_eq!(p("2413").deletions(), vec![p("132"), p("213"), p("231"), p("312")]);
        assert_eq!(p("2413").delete_points(&[1, 3]), p("21"));
        assert_eq!(Perm::pattern_of(&[10, 3, 7]), p("312"));
    }
}
