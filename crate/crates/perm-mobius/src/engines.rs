//! Three independent Möbius computations: the memoized recursive definition,
//! Hall chain sums, and zeta-matrix inversion, plus a cross-checking harness.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::Serialize;

use crate::perm::{contains, Perm};
use crate::poset::{interval_with_cap, pattern_closure, IntervalPoset};
use crate::{Error, Result};

/// Method tags carried in results; fast paths add their own tags.
pub const METHOD_RECURSIVE: &str = "recursive";
pub const METHOD_HALL: &str = "hall";
pub const METHOD_ZETA: &str = "zeta";
pub const METHOD_EQUALITY: &str = "equality";
pub const METHOD_NOT_CONTAINED: &str = "not_contained";

/// Size guards for the engines.
#[derive(Clone, Copy, Debug)]
pub struct EngineLimits {
    /// Maximum `|upper|` accepted by the recursive engine.
    pub recursive_len_cap: usize,
    /// Maximum `|upper|` for interval materialization (hall/zeta).
    pub interval_len_cap: usize,
    /// Maximum interval size for explicit chain-by-chain enumeration.
    pub chain_elems: usize,
    /// Maximum interval size for zeta inversion.
    pub zeta_elems: usize,
}

impl Default for EngineLimits {
    fn default() -> Self {
        EngineLimits {
            recursive_len_cap: 16,
            interval_len_cap: 22,
            chain_elems: 40,
            zeta_elems: 4096,
        }
    }
}

/// Work accounting for performance claims.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct WorkCounters {
    pub elements_visited: u64,
    pub memo_hits: u64,
}

/// An exact Möbius value with method provenance and work counters.
#[derive(Clone, Debug, Serialize)]
pub struct MobiusResult {
    pub value: i64,
    pub method: &'static str,
    pub work: WorkCounters,
}

impl MobiusResult {
    pub fn new(value: i64, method: &'static str) -> Self {
        MobiusResult {
            value,
            method,
            work: WorkCounters::default(),
        }
    }
}

/// Exact signed addition; overflow is an error, never a wrap.
pub fn checked_add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("mobius summation"))
}

/// Exact signed multiplication; overflow is an error, never a wrap.
pub fn checked_mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow("mobius product"))
}

type PairKey = (Vec<u32>, Vec<u32>);

const SHARDS: usize = 64;

/// Shared value store keyed by the joint symmetry canonicalization of the
/// `(lower, upper)` pair: the same symmetry is applied to both coordinates
/// and the lexicographically least encoded pair is the key.
pub struct MemoStore {
    shards: Vec<Mutex<HashMap<PairKey, i64>>>,
}

impl Default for MemoStore {
    fn default() -> Self {
        Self::new()
    }
}

impl MemoStore {
    pub fn new() -> Self {
        MemoStore {
            shards: (0..SHARDS).map(|_| Mutex::new(HashMap::new())).collect(),
        }
    }

    /// The joint canonical key for a pair.
    pub fn key(lower: &Perm, upper: &Perm) -> PairKey {
        let lo_imgs = lower.symmetries();
        let up_imgs = upper.symmetries();
        lo_imgs
            .into_iter()
            .zip(up_imgs)
            .map(|(l, u)| (l.vals().to_vec(), u.vals().to_vec()))
            .min()
            .expect("eight symmetry images")
    }

    fn shard(&self, key: &PairKey) -> &Mutex<HashMap<PairKey, i64>> {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        key.hash(&mut h);
        &self.shards[h.finish() as usize % SHARDS]
    }

    pub fn get(&self, key: &PairKey) -> Option<i64> {
        self.shard(key).lock().unwrap().get(key).copied()
    }

    pub fn insert(&self, key: PairKey, value: i64) {
        self.shard(&key).lock().unwrap().insert(key, value);
    }

    pub fn len(&self) -> usize {
        self.shards.iter().map(|s| s.lock().unwrap().len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Möbius value straight from the defining recursion
/// `μ[σ,π] = −Σ_{λ∈[σ,π)} μ[σ,λ]`, memoized across calls.
pub fn mobius_recursive(
    lower: &Perm,
    upper: &Perm,
    memo: &MemoStore,
    limits: &EngineLimits,
) -> Result<MobiusResult> {
    if upper.len() > limits.recursive_len_cap {
        return Err(Error::Guard(format!(
            "recursive engine refuses |upper| = {} > {}",
            upper.len(),
            limits.recursive_len_cap
        )));
    }
    let mut work = WorkCounters::default();
    let value = recurse(lower, upper, memo, &mut work)?;
    let method = if lower == upper {
        METHOD_EQUALITY
    } else if !contains(lower, upper) {
        METHOD_NOT_CONTAINED
    } else {
        METHOD_RECURSIVE
    };
    Ok(MobiusResult { value, method, work })
}

fn recurse(lower: &Perm, upper: &Perm, memo: &MemoStore, work: &mut WorkCounters) -> Result<i64> {
    if lower == upper {
        return Ok(1);
    }
    if lower.len() >= upper.len() || !contains(lower, upper) {
        return Ok(0);
    }
    if lower.is_empty() {
        // [ε, π] adds a single minimum under [1, π]; the sum telescopes to
        // −1 at |π| = 1 and to 0 for every longer π.
        return Ok(if upper.len() == 1 { -1 } else { 0 });
    }
    let key = MemoStore::key(lower, upper);
    if let Some(v) = memo.get(&key) {
        work.memo_hits += 1;
        return Ok(v);
    }
    let trivial_lower = lower.len() == 1;
    let mut sum: i64 = 0;
    let closure = pattern_closure(upper);
    work.elements_visited += closure.len() as u64;
    for lambda in &closure {
        if lambda == upper {
            continue;
        }
        if lambda.len() < lower.len() {
            continue;
        }
        if !trivial_lower && !contains(lower, lambda) {
            continue;
        }
        sum = checked_add(sum, recurse(lower, lambda, memo, work)?)?;
    }
    let value = sum.checked_neg().ok_or(Error::Overflow("mobius negation"))?;
    memo.insert(key, value);
    Ok(value)
}

/// Principal Möbius value `μ[1, p]`.
pub fn principal_mobius(p: &Perm, memo: &MemoStore, limits: &EngineLimits) -> Result<MobiusResult> {
    mobius_recursive(&Perm::one(), p, memo, limits)
}

/// Möbius value as the alternating chain sum `Σ_i (−1)^i K_i` over all
/// bottom-to-top chains of the interval.
pub fn mobius_hall(lower: &Perm, upper: &Perm, limits: &EngineLimits) -> Result<MobiusResult> {
    if lower == upper {
        return Ok(MobiusResult::new(1, METHOD_EQUALITY));
    }
    if !contains(lower, upper) {
        return Ok(MobiusResult::new(0, METHOD_NOT_CONTAINED));
    }
    let iv = interval_with_cap(lower, upper, limits.interval_len_cap)?;
    let counts = iv.chain_counts()?;
    let mut value: i64 = 0;
    for (i, &k) in counts.iter().enumerate() {
        let signed = if i % 2 == 0 { k } else { -k };
        value = checked_add(value, signed)?;
    }
    let mut res = MobiusResult::new(value, METHOD_HALL);
    res.work.elements_visited = iv.len() as u64;
    Ok(res)
}

/// Möbius value as the `(bottom, top)` entry of the inverse zeta matrix.
pub fn mobius_zeta(lower: &Perm, upper: &Perm, limits: &EngineLimits) -> Result<MobiusResult> {
    if lower == upper {
        return Ok(MobiusResult::new(1, METHOD_EQUALITY));
    }
    if !contains(lower, upper) {
        return Ok(MobiusResult::new(0, METHOD_NOT_CONTAINED));
    }
    let iv = interval_with_cap(lower, upper, limits.interval_len_cap)?;
    if iv.len() > limits.zeta_elems {
        return Err(Error::Guard(format!(
            "zeta engine refuses interval of {} elements (cap {})",
            iv.len(),
            limits.zeta_elems
        )));
    }
    let inv = iv.zeta_matrix().invert()?;
    let mut res = MobiusResult::new(inv[0][iv.len() - 1], METHOD_ZETA);
    res.work.elements_visited = iv.len() as u64;
    Ok(res)
}

/// Recursive-definition table over a prebuilt interval: `μ[elements[lo], x]`
/// for every element, `None` where `elements[lo]` is not below `x`.
pub fn mobius_table_from(iv: &IntervalPoset, lo: usize) -> Result<Vec<Option<i64>>> {
    let m = iv.len();
    let mut table: Vec<Option<i64>> = vec![None; m];
    table[lo] = Some(1);
    for x in 0..m {
        if x == lo || !iv.leq(lo, x) {
            continue;
        }
        let mut sum = 0i64;
        for y in iv.below(x) {
            if y != x {
                if let Some(v) = table[y] {
                    sum = checked_add(sum, v)?;
                }
            }
        }
        table[x] = Some(-sum);
    }
    Ok(table)
}

/// Hall chain sum restricted to the sub-interval `[elements[lo], elements[hi]]`
/// of a prebuilt poset.
pub fn mobius_hall_on(iv: &IntervalPoset, lo: usize, hi: usize) -> Result<i64> {
    if lo == hi {
        return Ok(1);
    }
    if !iv.leq(lo, hi) {
        return Ok(0);
    }
    let counts = iv.chain_counts_between(lo, hi)?;
    let mut value: i64 = 0;
    for (i, &k) in counts.iter().enumerate() {
        let signed = if i % 2 == 0 { k } else { -k };
        value = checked_add(value, signed)?;
    }
    Ok(value)
}

/// Zeta-inversion value on a sub-interval of a prebuilt poset.
pub fn mobius_zeta_on(iv: &IntervalPoset, lo: usize, hi: usize) -> Result<i64> {
    if lo == hi {
        return Ok(1);
    }
    if !iv.leq(lo, hi) {
        return Ok(0);
    }
    let sub: Vec<usize> = (0..iv.len())
        .filter(|&x| iv.leq(lo, x) && iv.leq(x, hi))
        .collect();
    let m = sub.len();
    let mut data = vec![vec![0i64; m]; m];
    for a in 0..m {
        for b in 0..m {
            if iv.leq(sub[a], sub[b]) {
                data[a][b] = 1;
            }
        }
    }
    let inv = crate::poset::ZetaMatrix { data }.invert()?;
    Ok(inv[0][m - 1])
}

/// Agreement report across the three engines.
#[derive(Clone, Debug, Serialize)]
pub struct CrossCheck {
    pub recursive: i64,
    pub hall: i64,
    pub zeta: i64,
}

impl CrossCheck {
    pub fn agree(&self) -> bool {
        self.recursive == self.hall && self.hall == self.zeta
    }
}

/// Run all three engines on one pair.
pub fn cross_check(
    lower: &Perm,
    upper: &Perm,
    memo: &MemoStore,
    limits: &EngineLimits,
) -> Result<CrossCheck> {
    Ok(CrossCheck {
        recursive: mobius_recursive(lower, upper, memo, limits)?.value,
        hall: mobius_hall(lower, upper, limits)?.value,
        zeta: mobius_zeta(lower, upper, limits)?.value,
    })
}
