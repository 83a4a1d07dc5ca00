//! Exhaustive statistics over S_n and named-family sweeps: zero density,
//! adjacency class counts, extremal values with canonical witnesses, balloon
//! growth sequences, oscillation banding, and conjecture reports.
//!
//! Sweeps reduce S_n to canonical orbit representatives (one permutation per
//! symmetry class, weighted by class size) so length 9 stays tractable, and
//! spread per-representative work across threads. Every reduction is either a
//! commutative count or a sorted collect, so results are independent of
//! scheduling. Conjecture checkers only ever report: a mismatch is data about
//! a conjecture, not a defect in the computation.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::engines::{checked_mul, mobius_recursive, EngineLimits, MemoStore};
use crate::families::{
    balloon, balloon_2413, kappa, nearly_exceptional_e1, nearly_exceptional_e2,
    nearly_exceptional_o, parallel_alternation, pi_sequence, wedge_simple, BalloonSpec, OscShape,
    OscillationDescriptor,
};
use crate::fast_paths::oscillation::OscEngine;
use crate::fast_paths::{zero, Dispatcher, UpperInput};
use crate::perm::{for_each_arrangement, Perm};
use crate::{Error, Result};

/// Default length ceiling for the zero-density sweep.
pub const DENSITY_CAP: usize = 9;
/// Length ceiling for the adjacency class counts (no μ needed, so higher).
pub const ADJACENCY_CAP: usize = 11;
/// Length ceiling for the non-opposing-adjacency μ classification.
pub const NON_OPPOSING_CAP: usize = 9;
/// Length ceiling for the extremal value tables.
pub const EXTREMAL_CAP: usize = 10;
/// Ceiling for the balloon growth sequence; values stay far inside i64.
pub const GROWTH_CAP: usize = 60;
/// Ceiling for the oscillation sweep.
pub const OSC_SWEEP_CAP: usize = 2_000_000;
/// Core-length ceiling for the generalized 2413-balloon conjecture report.
pub const BALLOON_IJ_CAP: usize = 5;

fn factorial(n: usize) -> u64 {
    (2..=n as u64).product()
}

/// One canonical representative per symmetry class of S_n, paired with the
/// class size; the sizes sum to n!.
pub fn orbit_representatives(n: usize) -> Vec<(Perm, u64)> {
    let mut reps = Vec::new();
    for_each_arrangement(n, |vals| {
        let p = Perm::pattern_of(vals);
        let mut images = p.symmetries();
        images.sort();
        if images[0] != p {
            return;
        }
        images.dedup();
        reps.push((p, images.len() as u64));
    });
    reps
}

/// How the density sweep decides that a permutation is a Möbius zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityMode {
    /// Trust fired vanishing certificates; compute μ only for the rest.
    FastPathsPlusOracle,
    /// Compute μ from the defining recursion for every class.
    OracleOnly,
}

impl DensityMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DensityMode::FastPathsPlusOracle => "fast_paths_plus_oracle",
            DensityMode::OracleOnly => "oracle_only",
        }
    }
}

/// Bucket name for zeros that no vanishing rule certifies.
pub const BREAKDOWN_ORACLE_ONLY: &str = "oracle_only";

/// Zero-density row: how many of the n! permutations of length n have
/// μ[1, π] = 0, with a per-rule attribution. The breakdown counts whole
/// permutations, not symmetry classes, because certificate firing is not
/// symmetry-invariant even though μ is.
#[derive(Clone, Debug)]
pub struct DensityRow {
    pub n: usize,
    pub total: u64,
    pub zero_count: u64,
    pub mode: DensityMode,
    pub breakdown: Vec<(String, u64)>,
}

impl DensityRow {
    /// zero_count / total in lowest terms.
    pub fn fraction(&self) -> (u64, u64) {
        let g = gcd(self.zero_count, self.total);
        if g == 0 {
            return (0, self.total);
        }
        (self.zero_count / g, self.total / g)
    }

    /// The density with four decimals, rounding half up.
    pub fn display(&self) -> String {
        round4(self.zero_count, self.total)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn round4(num: u64, den: u64) -> String {
    let scaled = (num as u128 * 20_000 + den as u128) / (den as u128 * 2);
    format!("{}.{:04}", scaled / 10_000, scaled % 10_000)
}

/// Zero density of S_n under the default length cap.
pub fn density(n: usize, mode: DensityMode) -> Result<DensityRow> {
    density_with_cap(n, mode, DENSITY_CAP)
}

/// Zero density of S_n; `cap` lets callers trade time for one more row.
pub fn density_with_cap(n: usize, mode: DensityMode, cap: usize) -> Result<DensityRow> {
    if n == 0 || n > cap {
        return Err(Error::Guard(format!(
            "density sweep wants 1 <= n <= {cap}, got {n}"
        )));
    }
    let memo = MemoStore::new();
    let limits = EngineLimits::default();
    let reps = orbit_representatives(n);
    let per_class: Vec<(u64, Vec<(&'static str, u64)>)> = reps
        .par_iter()
        .map(|(rep, _)| class_density(rep, mode, &memo, &limits))
        .collect::<Result<_>>()?;
    let mut zero_count = 0u64;
    let mut buckets: BTreeMap<&'static str, u64> = BTreeMap::new();
    for (zeros, rules) in per_class {
        zero_count += zeros;
        for (rule, count) in rules {
            *buckets.entry(rule).or_default() += count;
        }
    }
    Ok(DensityRow {
        n,
        total: factorial(n),
        zero_count,
        mode,
        breakdown: buckets
            .into_iter()
            .map(|(rule, count)| (rule.to_string(), count))
            .collect(),
    })
}

fn class_density(
    rep: &Perm,
    mode: DensityMode,
    memo: &MemoStore,
    limits: &EngineLimits,
) -> Result<(u64, Vec<(&'static str, u64)>)> {
    let mut images = rep.symmetries();
    images.sort();
    images.dedup();
    let one = Perm::one();
    let certs: Vec<Option<&'static str>> = images
        .iter()
        .map(|image| zero::zero_test(image).map(|cert| cert.rule))
        .collect();
    let mut buckets: BTreeMap<&'static str, u64> = BTreeMap::new();
    let mut zeros = 0u64;
    match mode {
        DensityMode::OracleOnly => {
            let mu = mobius_recursive(&one, rep, memo, limits)?.value;
            if mu == 0 {
                for cert in &certs {
                    zeros += 1;
                    *buckets.entry(cert.unwrap_or(BREAKDOWN_ORACLE_ONLY)).or_default() += 1;
                }
            }
        }
        DensityMode::FastPathsPlusOracle => {
            let mu = if certs.iter().any(Option::is_none) {
                let dispatcher = Dispatcher::new(memo, limits);
                Some(dispatcher.compute(&one, UpperInput::Concrete(rep))?.value)
            } else {
                None
            };
            for cert in &certs {
                match cert {
                    Some(rule) => {
                        zeros += 1;
                        *buckets.entry(rule).or_default() += 1;
                    }
                    None if mu == Some(0) => {
                        zeros += 1;
                        *buckets.entry(BREAKDOWN_ORACLE_ONLY).or_default() += 1;
                    }
                    None => {}
                }
            }
        }
    }
    Ok((zeros, buckets.into_iter().collect()))
}

/// Upper bound on d_n conjectured from the length ≤ 12 data.
pub const DENSITY_BOUND_NUM: u64 = 151;
/// Denominator of the conjectured 0.6040 bound.
pub const DENSITY_BOUND_DEN: u64 = 250;

/// One line of a conjecture report.
#[derive(Clone, Debug)]
pub struct CheckLine {
    pub subject: String,
    pub matched: bool,
    pub detail: String,
}

/// Report line for the conjectured d_n ≤ 0.6040 upper bound.
pub fn density_bound_line(row: &DensityRow) -> CheckLine {
    let matched = (row.zero_count as u128) * DENSITY_BOUND_DEN as u128
        <= (DENSITY_BOUND_NUM as u128) * row.total as u128;
    CheckLine {
        subject: format!("d_{} <= 0.6040", row.n),
        matched,
        detail: format!("d_{} = {}", row.n, row.display()),
    }
}

/// Adjacency class counts over all of S_n. `opposing` has both an up- and a
/// down-adjacency, `no_up` has no up-adjacency, `adjacency_free` has none of
/// either kind.
#[derive(Clone, Copy, Debug)]
pub struct AdjacencyCensus {
    pub n: usize,
    pub total: u64,
    pub opposing: u64,
    pub no_up: u64,
    pub adjacency_free: u64,
}

impl AdjacencyCensus {
    /// Inclusion-exclusion over the two adjacency directions; an exact
    /// identity when all four counts are right.
    pub fn identity_holds(&self) -> bool {
        self.opposing as i128
            == self.total as i128 - 2 * self.no_up as i128 + self.adjacency_free as i128
    }
}

/// Count adjacency classes by direct detection on every value sequence.
pub fn adjacency_census(n: usize) -> Result<AdjacencyCensus> {
    if n == 0 || n > ADJACENCY_CAP {
        return Err(Error::Guard(format!(
            "adjacency census wants 1 <= n <= {ADJACENCY_CAP}, got {n}"
        )));
    }
    let (mut opposing, mut no_up, mut adjacency_free) = (0u64, 0u64, 0u64);
    for_each_arrangement(n, |vals| {
        let mut up = false;
        let mut down = false;
        for w in vals.windows(2) {
            if w[1] == w[0] + 1 {
                up = true;
            } else if w[0] == w[1] + 1 {
                down = true;
            }
        }
        if up && down {
            opposing += 1;
        }
        if !up {
            no_up += 1;
            if !down {
                adjacency_free += 1;
            }
        }
    });
    Ok(AdjacencyCensus {
        n,
        total: factorial(n),
        opposing,
        no_up,
        adjacency_free,
    })
}

/// Among permutations with at least two adjacencies, all in the same
/// direction, split the count by whether the oracle μ[1, π] vanishes.
pub fn non_opposing_census(n: usize) -> Result<(u64, u64)> {
    if n == 0 || n > NON_OPPOSING_CAP {
        return Err(Error::Guard(format!(
            "non-opposing census wants 1 <= n <= {NON_OPPOSING_CAP}, got {n}"
        )));
    }
    let memo = MemoStore::new();
    let limits = EngineLimits::default();
    let one = Perm::one();
    let reps = orbit_representatives(n);
    let counts: Vec<(u64, u64)> = reps
        .par_iter()
        .map(|(rep, size)| {
            let report = rep.adjacency_report();
            let ups = report.up_positions.len();
            let downs = report.down_positions.len();
            if ups + downs < 2 || (ups > 0 && downs > 0) {
                return Ok((0, 0));
            }
            let mu = mobius_recursive(&one, rep, &memo, &limits)?.value;
            if mu == 0 {
                Ok((*size, 0))
            } else {
                Ok((0, *size))
            }
        })
        .collect::<Result<_>>()?;
    let zeros = counts.iter().map(|c| c.0).sum();
    let nonzeros = counts.iter().map(|c| c.1).sum();
    Ok((zeros, nonzeros))
}

/// A permutation attaining an extremal μ value, with its simplicity flag.
#[derive(Clone, Debug)]
pub struct ExtremalWitness {
    pub perm: Perm,
    pub simple: bool,
}

/// Extremes of μ[1, π] over S_n with every canonical witness.
#[derive(Clone, Debug)]
pub struct ExtremalRow {
    pub n: usize,
    pub min_value: i64,
    pub max_value: i64,
    pub min_witnesses: Vec<ExtremalWitness>,
    pub max_witnesses: Vec<ExtremalWitness>,
}

/// Minimum and maximum of μ[1, π] over S_n, witnesses in canonical form
/// sorted lexicographically.
pub fn extremal_table(n: usize) -> Result<ExtremalRow> {
    if n == 0 || n > EXTREMAL_CAP {
        return Err(Error::Guard(format!(
            "extremal sweep wants 1 <= n <= {EXTREMAL_CAP}, got {n}"
        )));
    }
    let memo = MemoStore::new();
    let limits = EngineLimits::default();
    let one = Perm::one();
    let reps = orbit_representatives(n);
    let values: Vec<(Perm, i64)> = reps
        .par_iter()
        .map(|(rep, _)| {
            let dispatcher = Dispatcher::new(&memo, &limits);
            let res = dispatcher.compute(&one, UpperInput::Concrete(rep))?;
            Ok((rep.clone(), res.value))
        })
        .collect::<Result<_>>()?;
    let min_value = values.iter().map(|v| v.1).min().expect("nonempty sweep");
    let max_value = values.iter().map(|v| v.1).max().expect("nonempty sweep");
    let collect = |target: i64| -> Vec<ExtremalWitness> {
        let mut hits: Vec<&Perm> = values
            .iter()
            .filter(|(_, v)| *v == target)
            .map(|(p, _)| p)
            .collect();
        hits.sort();
        hits.into_iter()
            .map(|p| ExtremalWitness {
                perm: p.clone(),
                simple: p.is_simple(),
            })
            .collect()
    };
    Ok(ExtremalRow {
        n,
        min_value,
        max_value,
        min_witnesses: collect(min_value),
        max_witnesses: collect(max_value),
    })
}

/// μ[1, π⁽ⁿ⁾] for the iterated 2413-balloon sequence, against the
/// exponential lower bound 2^(⌊n/4⌋−1).
#[derive(Clone, Copy, Debug)]
pub struct GrowthRow {
    pub n: usize,
    pub value: i64,
    pub bound: i64,
    pub bound_holds: bool,
}

const GROWTH_SEED: [i64; 8] = [1, -1, 1, -3, 4, -1, 1, -6];

/// Balloon growth sequence from the seed values and the doubling recursion
/// μ[1, π⁽ⁿ⁾] = 2 μ[1, π⁽ⁿ⁻⁴⁾].
pub fn growth_table(max_n: usize) -> Result<Vec<GrowthRow>> {
    if max_n == 0 || max_n > GROWTH_CAP {
        return Err(Error::Guard(format!(
            "growth table wants 1 <= max_n <= {GROWTH_CAP}, got {max_n}"
        )));
    }
    let mut values: Vec<i64> = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let v = if n <= GROWTH_SEED.len() {
            GROWTH_SEED[n - 1]
        } else {
            checked_mul(2, values[n - 5])?
        };
        values.push(v);
    }
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(idx, value)| {
            let n = idx + 1;
            let bound = if n >= 4 { 1i64 << (n / 4 - 1) } else { 0 };
            GrowthRow {
                n,
                value,
                bound,
                bound_holds: value.abs() >= bound,
            }
        })
        .collect())
}

/// Band estimates from the two-million-value sweep: closed intervals the
/// normalized magnitudes are conjectured to stay inside, keyed by n mod 12.
const BAND_A: f64 = 0.615;
const BAND_B: f64 = 0.680;
const BAND_C: f64 = 0.692;
const BAND_D: f64 = 0.760;
const BAND_E: f64 = 0.821;
const BAND_F: f64 = 0.896;
const BAND_G: f64 = 0.923;

fn band_for_residue(residue: usize) -> (&'static str, f64, f64) {
    match residue {
        10 | 11 => ("[a,b]", BAND_A, BAND_B),
        2 | 3 | 6 | 7 => ("[c,d]", BAND_C, BAND_D),
        4 | 5 => ("[e,f]", BAND_E, BAND_F),
        _ => ("[g,1]", BAND_G, 1.0),
    }
}

/// Normalized-magnitude summary for one residue class mod 12.
#[derive(Clone, Debug)]
pub struct BandRow {
    pub residue: usize,
    pub band: &'static str,
    pub lo: f64,
    pub hi: f64,
    pub inside: u64,
    pub outside: u64,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

/// A prime-conjecture discrepancy: either a qualifying index whose value
/// differs from the predicted square form, or a square-form value at a
/// non-qualifying index.
#[derive(Clone, Debug)]
pub struct PrimeCheckLine {
    pub arg: usize,
    pub detail: String,
}

/// Everything the oscillation sweep observes: raw values, sign pattern,
/// band membership, and the prime iff-conjecture tallies.
#[derive(Clone, Debug)]
pub struct OscSweepReport {
    pub max_n: usize,
    pub values: Vec<(usize, i64)>,
    pub sign_violations: Vec<usize>,
    pub band_rows: Vec<BandRow>,
    pub band_outliers: Vec<(usize, f64, &'static str)>,
    pub prime_matches: u64,
    pub prime_mismatch_total: u64,
    pub prime_mismatches: Vec<PrimeCheckLine>,
}

const BAND_OUTLIER_SAMPLE: usize = 32;
const PRIME_MISMATCH_SAMPLE: usize = 100;
const PRIME_CHECK_FLOOR: usize = 50;

fn prime_sieve(upto: usize) -> Vec<bool> {
    let mut is_prime = vec![true; upto + 1];
    is_prime[0] = false;
    if upto >= 1 {
        is_prime[1] = false;
    }
    let mut p = 2usize;
    while p * p <= upto {
        if is_prime[p] {
            let mut q = p * p;
            while q <= upto {
                is_prime[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    is_prime
}

/// Sweep μ[1, W_n] for n up to `max_n` and report the observed sign pattern,
/// the band membership against the published interval estimates, and the
/// prime conjecture in both directions. Reports never fail: a conjecture
/// mismatch is recorded, not asserted.
pub fn oscillation_sweep(max_n: usize) -> Result<OscSweepReport> {
    if max_n < 4 || max_n > OSC_SWEEP_CAP {
        return Err(Error::Guard(format!(
            "oscillation sweep wants 4 <= max_n <= {OSC_SWEEP_CAP}, got {max_n}"
        )));
    }
    let mut engine = OscEngine::new(&Perm::one())?;
    let mut values: Vec<(usize, i64)> = vec![(1, 1), (2, -1), (3, 1)];
    for n in 4..=max_n {
        let desc = OscillationDescriptor {
            shape: OscShape::W,
            n,
        };
        values.push((n, engine.mobius(&desc)?));
    }

    let mut sign_violations = Vec::new();
    for &(n, v) in &values {
        let ok = if n % 2 == 0 { v < 0 } else { v > 0 };
        if !ok {
            sign_violations.push(n);
        }
    }

    let mut band_rows: Vec<BandRow> = (0..12)
        .map(|residue| {
            let (band, lo, hi) = band_for_residue(residue);
            BandRow {
                residue,
                band,
                lo,
                hi,
                inside: 0,
                outside: 0,
                min_ratio: f64::INFINITY,
                max_ratio: f64::NEG_INFINITY,
            }
        })
        .collect();
    let mut band_outliers = Vec::new();
    for &(n, v) in &values {
        let residue = n % 12;
        if n < residue + 12 {
            continue;
        }
        let m = v.unsigned_abs() as f64;
        let ratio = if n % 2 == 0 {
            m / (n as f64 * n as f64)
        } else {
            m / (n as f64 * n as f64 + n as f64)
        };
        let row = &mut band_rows[residue];
        row.min_ratio = row.min_ratio.min(ratio);
        row.max_ratio = row.max_ratio.max(ratio);
        if ratio >= row.lo && ratio <= row.hi {
            row.inside += 1;
        } else {
            row.outside += 1;
            if band_outliers.len() < BAND_OUTLIER_SAMPLE {
                band_outliers.push((n, ratio, row.band));
            }
        }
    }

    let half = max_n / 2 + 2;
    let is_prime = prime_sieve(half);
    let mut prime_matches = 0u64;
    let mut prime_mismatch_total = 0u64;
    let mut prime_mismatches = Vec::new();
    let mut note = |arg: usize, detail: String, mismatches: &mut Vec<PrimeCheckLine>| {
        prime_mismatch_total += 1;
        if mismatches.len() < PRIME_MISMATCH_SAMPLE {
            mismatches.push(PrimeCheckLine { arg, detail });
        }
    };
    for &(arg, v) in &values {
        let k = arg / 2;
        if k <= PRIME_CHECK_FLOOR {
            continue;
        }
        let m = v.unsigned_abs() as i64;
        let k64 = k as i64;
        let (target0, target4) = if arg % 2 == 0 {
            (k64 * k64, k64 * k64 - 1)
        } else {
            (k64 * k64 - k64, k64 * k64 - k64 - 1)
        };
        let cond0 = is_prime[k + 1] && k % 6 == 0;
        let cond4 = is_prime[k + 1] && k % 6 == 4;
        for (cond, target, label) in [(cond0, target0, "0 mod 6"), (cond4, target4, "4 mod 6")] {
            match (cond, m == target) {
                (true, true) => prime_matches += 1,
                (true, false) => note(
                    arg,
                    format!("k={k} ({label}, k+1 prime) but M({arg}) = {m}, expected {target}"),
                    &mut prime_mismatches,
                ),
                (false, true) => note(
                    arg,
                    format!("M({arg}) = {m} hits the {label} square form but k={k} does not qualify"),
                    &mut prime_mismatches,
                ),
                (false, false) => {}
            }
        }
    }

    Ok(OscSweepReport {
        max_n,
        values,
        sign_violations,
        band_rows,
        band_outliers,
        prime_matches,
        prime_mismatch_total,
        prime_mismatches,
    })
}

/// Named-family tables the census can sweep at oracle scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    WedgeOne,
    WedgeTwo,
    NearlyE1,
    NearlyE2,
    NearlyO,
    Kappa,
    ParallelAlternation,
}

impl FamilyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyKind::WedgeOne => "w1",
            FamilyKind::WedgeTwo => "w2",
            FamilyKind::NearlyE1 => "e1",
            FamilyKind::NearlyE2 => "e2",
            FamilyKind::NearlyO => "o",
            FamilyKind::Kappa => "kappa",
            FamilyKind::ParallelAlternation => "parallel_alternation",
        }
    }
}

/// One computed family member: the permutation, its computed μ, and the
/// published reference value when one exists for this row.
#[derive(Clone, Debug)]
pub struct FamilyRow {
    pub n: usize,
    pub k: Option<usize>,
    pub perm: Perm,
    pub value: i64,
    pub method: &'static str,
    pub reference: Option<i64>,
}

impl FamilyRow {
    pub fn agrees(&self) -> Option<bool> {
        self.reference.map(|r| r == self.value)
    }
}

const W1_REFERENCE: [(usize, i64); 7] =
    [(4, -3), (5, 6), (6, -9), (7, 12), (8, -15), (9, 18), (10, -21)];
const W2_REFERENCE: [(usize, i64); 7] =
    [(4, -3), (5, 4), (6, -5), (7, 6), (8, -7), (9, 8), (10, -9)];
const E1_REFERENCE: [((usize, usize), i64); 6] = [
    ((6, 1), -5),
    ((8, 1), -7),
    ((8, 2), -8),
    ((10, 1), -9),
    ((10, 2), -10),
    ((10, 3), -12),
];
const E2_REFERENCE: [(usize, i64); 3] = [(6, -5), (8, -8), (10, -12)];
const KAPPA_REFERENCE: [(usize, i64); 6] = [
    (2, -27),
    (3, -117),
    (4, -509),
    (5, -2389),
    (6, -10946),
    (7, -51210),
];

fn family_cap(kind: FamilyKind) -> usize {
    match kind {
        FamilyKind::WedgeOne | FamilyKind::WedgeTwo => 10,
        FamilyKind::NearlyE1 | FamilyKind::NearlyE2 | FamilyKind::ParallelAlternation => 10,
        FamilyKind::NearlyO => 11,
        FamilyKind::Kappa => 3,
    }
}

/// Compute a family value table up to `max_n` (a length, or the index n for
/// the κ family), with the published value or conjectured formula alongside.
pub fn family_table(kind: FamilyKind, max_n: usize) -> Result<Vec<FamilyRow>> {
    let cap = family_cap(kind);
    if max_n > cap {
        return Err(Error::Guard(format!(
            "family table {} wants max_n <= {cap}, got {max_n}",
            kind.as_str()
        )));
    }
    let memo = MemoStore::new();
    let limits = EngineLimits::default();
    let dispatcher = Dispatcher::new(&memo, &limits);
    let one = Perm::one();
    let mut targets: Vec<(usize, Option<usize>, Perm, Option<i64>)> = Vec::new();
    match kind {
        FamilyKind::WedgeOne | FamilyKind::WedgeTwo => {
            let (variant, table): (u8, &[(usize, i64)]) = if kind == FamilyKind::WedgeOne {
                (1, &W1_REFERENCE)
            } else {
                (2, &W2_REFERENCE)
            };
            for n in 4..=max_n {
                let reference = table.iter().find(|(m, _)| *m == n).map(|(_, v)| *v);
                targets.push((n, None, wedge_simple(variant, n)?, reference));
            }
        }
        FamilyKind::NearlyE1 => {
            for len in (6..=max_n).step_by(2) {
                for k in 1..=len / 2 - 2 {
                    let reference = E1_REFERENCE
                        .iter()
                        .find(|((l, kk), _)| *l == len && *kk == k)
                        .map(|(_, v)| *v);
                    targets.push((len, Some(k), nearly_exceptional_e1(len, k)?, reference));
                }
            }
        }
        FamilyKind::NearlyE2 => {
            for len in (6..=max_n).step_by(2) {
                let reference = E2_REFERENCE.iter().find(|(l, _)| *l == len).map(|(_, v)| *v);
                targets.push((len, None, nearly_exceptional_e2(len)?, reference));
            }
        }
        FamilyKind::NearlyO => {
            for len in (5..=max_n).step_by(2) {
                for k in 1..=(len - 1) / 2 - 1 {
                    let reference = if len >= 7 { Some(len as i64 - 1) } else { None };
                    targets.push((len, Some(k), nearly_exceptional_o(len, k)?, reference));
                }
            }
        }
        FamilyKind::Kappa => {
            for n in 2..=max_n {
                let reference = KAPPA_REFERENCE.iter().find(|(m, _)| *m == n).map(|(_, v)| *v);
                targets.push((n, None, kappa(n)?, reference));
            }
        }
        FamilyKind::ParallelAlternation => {
            for len in (4..=max_n).step_by(2) {
                let half = (len / 2) as i64;
                targets.push((
                    len,
                    None,
                    parallel_alternation(len)?,
                    Some(-(half + 1) * half / 2),
                ));
            }
        }
    }
    let mut rows = Vec::with_capacity(targets.len());
    for (n, k, perm, reference) in targets {
        let res = dispatcher.compute(&one, UpperInput::Concrete(&perm))?;
        rows.push(FamilyRow {
            n,
            k,
            perm,
            value: res.value,
            method: res.method,
            reference,
        });
    }
    Ok(rows)
}

/// Check both generalized 2413-balloon conjectures over every core β with
/// |β| ≤ `max_beta`: the (i,j) ∈ {(0,1), (0,2), (1,1), (1,2)} zero/copy
/// cases and the (1,0) case list. Emits one summary line per index pair and
/// a detail line per mismatch.
pub fn balloon_ij_report(max_beta: usize) -> Result<Vec<CheckLine>> {
    if max_beta == 0 || max_beta > BALLOON_IJ_CAP {
        return Err(Error::Guard(format!(
            "balloon conjecture report wants 1 <= max_beta <= {BALLOON_IJ_CAP}, got {max_beta}"
        )));
    }
    let memo = MemoStore::new();
    let limits = EngineLimits::default();
    let dispatcher = Dispatcher::new(&memo, &limits);
    let one = Perm::one();
    let alpha: Perm = "2413".parse().expect("static");
    let mut cores = Vec::new();
    for len in 1..=max_beta {
        for_each_arrangement(len, |vals| cores.push(Perm::pattern_of(vals)));
    }
    let mut lines = Vec::new();
    for (i, j) in [(0usize, 1usize), (0, 2), (1, 1), (1, 2), (1, 0)] {
        let mut checked = 0u64;
        let mut mismatches = Vec::new();
        for beta in &cores {
            let spec = BalloonSpec::new(alpha.clone(), beta.clone(), i, j)?;
            let pi = balloon(&spec)?;
            let actual = dispatcher.mobius(&one, &pi)?;
            let expected = match (i, j) {
                (1, 0) => expected_1_0(beta, &dispatcher)?,
                _ => expected_zero_or_copy(i, j, beta, &dispatcher)?,
            };
            checked += 1;
            if actual != expected {
                mismatches.push(format!(
                    "core {beta}: computed {actual}, conjecture says {expected}"
                ));
            }
        }
        lines.push(CheckLine {
            subject: format!("balloon ({i},{j}) conjecture, cores up to length {max_beta}"),
            matched: mismatches.is_empty(),
            detail: format!("{checked} cores checked, {} mismatches", mismatches.len()),
        });
        for m in mismatches {
            lines.push(CheckLine {
                subject: format!("balloon ({i},{j}) mismatch"),
                matched: false,
                detail: m,
            });
        }
    }
    Ok(lines)
}

fn expected_zero_or_copy(i: usize, j: usize, beta: &Perm, dispatcher: &Dispatcher) -> Result<i64> {
    let n = beta.len();
    let vals = beta.vals();
    let zero = match (i, j) {
        (0, 1) => n >= 2 && vals[n - 1] == n as u32,
        (0, 2) => n >= 2 && vals[n - 1] == 1,
        (1, 1) => (n >= 2 && vals[0] == n as u32) || *beta == "12".parse().expect("static"),
        (1, 2) => n >= 2 && vals[0] == 1,
        _ => unreachable!("index pair outside the conjecture"),
    };
    if zero {
        return Ok(0);
    }
    dispatcher.mobius(&Perm::one(), beta)
}

fn expected_1_0(beta: &Perm, dispatcher: &Dispatcher) -> Result<i64> {
    if *beta == Perm::one() {
        return Ok(6);
    }
    if *beta == "21".parse::<Perm>().expect("static") {
        return Ok(-2);
    }
    if *beta == "312".parse::<Perm>().expect("static") {
        return Ok(0);
    }
    if let Some(gamma_len) = beta.len().checked_sub(4) {
        if gamma_len >= 1 {
            let alpha: Perm = "2413".parse().expect("static");
            let mut gammas = Vec::new();
            for_each_arrangement(gamma_len, |vals| gammas.push(Perm::pattern_of(vals)));
            for gamma in gammas {
                let spec = BalloonSpec::new(alpha.clone(), gamma.clone(), 1, 0)?;
                if balloon(&spec)? == *beta {
                    let inner = dispatcher.mobius(&Perm::one(), &gamma)?;
                    return checked_mul(2, inner);
                }
            }
        }
    }
    dispatcher.mobius(&Perm::one(), beta)
}

/// Cross-check of the growth sequence against the balloon construction: the
/// n-th sequence member is the 2413-balloon of the (n−4)-th.
pub fn growth_member(n: usize) -> Result<Perm> {
    if n >= 5 {
        balloon_2413(&pi_sequence(n - 4)?)
    } else {
        pi_sequence(n)
    }
}

fn perm_list(witnesses: &[ExtremalWitness]) -> String {
    witnesses
        .iter()
        .map(|w| {
            if w.simple {
                format!("{}*", w.perm)
            } else {
                w.perm.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("|")
}

/// CSV rendering of density rows; the breakdown column packs
/// `rule:count` pairs separated by `|`.
pub fn density_csv(rows: &[DensityRow]) -> String {
    let mut out = String::from("n,total,zero_count,d_n,mode,breakdown\n");
    for row in rows {
        let breakdown = row
            .breakdown
            .iter()
            .map(|(rule, count)| format!("{rule}:{count}"))
            .collect::<Vec<_>>()
            .join("|");
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.n,
            row.total,
            row.zero_count,
            row.display(),
            row.mode.as_str(),
            breakdown
        ));
    }
    out
}

/// JSON rendering of density rows.
pub fn density_json(rows: &[DensityRow]) -> Value {
    json!({
        "table": "density",
        "rows": rows.iter().map(|row| {
            let (num, den) = row.fraction();
            json!({
                "n": row.n,
                "total": row.total,
                "zero_count": row.zero_count,
                "fraction": { "num": num, "den": den },
                "display": row.display(),
                "mode": row.mode.as_str(),
                "breakdown": row.breakdown.iter()
                    .map(|(rule, count)| json!({ "rule": rule, "count": count }))
                    .collect::<Vec<_>>(),
            })
        }).collect::<Vec<_>>(),
    })
}

/// CSV rendering of adjacency censuses.
pub fn adjacency_csv(rows: &[AdjacencyCensus]) -> String {
    let mut out = String::from("n,total,opposing,no_up,adjacency_free,identity_holds\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.n,
            row.total,
            row.opposing,
            row.no_up,
            row.adjacency_free,
            row.identity_holds()
        ));
    }
    out
}

/// JSON rendering of adjacency censuses.
pub fn adjacency_json(rows: &[AdjacencyCensus]) -> Value {
    json!({
        "table": "adjacency",
        "rows": rows.iter().map(|row| json!({
            "n": row.n,
            "total": row.total,
            "opposing": row.opposing,
            "no_up": row.no_up,
            "adjacency_free": row.adjacency_free,
            "identity_holds": row.identity_holds(),
        })).collect::<Vec<_>>(),
    })
}

/// CSV rendering of non-opposing classification rows `(n, zeros, nonzeros)`.
pub fn non_opposing_csv(rows: &[(usize, u64, u64)]) -> String {
    let mut out = String::from("n,zeros,nonzeros\n");
    for (n, zeros, nonzeros) in rows {
        out.push_str(&format!("{n},{zeros},{nonzeros}\n"));
    }
    out
}

/// JSON rendering of non-opposing classification rows.
pub fn non_opposing_json(rows: &[(usize, u64, u64)]) -> Value {
    json!({
        "table": "non_opposing",
        "rows": rows.iter().map(|(n, zeros, nonzeros)| json!({
            "n": n, "zeros": zeros, "nonzeros": nonzeros,
        })).collect::<Vec<_>>(),
    })
}

/// CSV rendering of extremal rows; witnesses are `|`-separated, simple ones
/// starred.
pub fn extremal_csv(rows: &[ExtremalRow]) -> String {
    let mut out = String::from("n,min_value,min_witnesses,max_value,max_witnesses\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.n,
            row.min_value,
            perm_list(&row.min_witnesses),
            row.max_value,
            perm_list(&row.max_witnesses)
        ));
    }
    out
}

/// JSON rendering of extremal rows.
pub fn extremal_json(rows: &[ExtremalRow]) -> Value {
    let witness = |w: &ExtremalWitness| json!({ "perm": w.perm.to_string(), "simple": w.simple });
    json!({
        "table": "extremal",
        "rows": rows.iter().map(|row| json!({
            "n": row.n,
            "min_value": row.min_value,
            "max_value": row.max_value,
            "min_witnesses": row.min_witnesses.iter().map(witness).collect::<Vec<_>>(),
            "max_witnesses": row.max_witnesses.iter().map(witness).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

/// CSV rendering of the growth sequence.
pub fn growth_csv(rows: &[GrowthRow]) -> String {
    let mut out = String::from("n,value,bound,bound_holds,provenance\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},closed_form\n",
            row.n, row.value, row.bound, row.bound_holds
        ));
    }
    out
}

/// JSON rendering of the growth sequence.
pub fn growth_json(rows: &[GrowthRow]) -> Value {
    json!({
        "table": "growth",
        "provenance": "closed_form",
        "rows": rows.iter().map(|row| json!({
            "n": row.n, "value": row.value, "bound": row.bound,
            "bound_holds": row.bound_holds,
        })).collect::<Vec<_>>(),
    })
}

/// Plot-data CSV `(n, value)` for external plotting.
pub fn plot_csv(values: &[(usize, i64)]) -> String {
    let mut out = String::from("n,value\n");
    for (n, v) in values {
        out.push_str(&format!("{n},{v}\n"));
    }
    out
}

/// JSON rendering of the oscillation sweep report, without the raw values
/// (those go to the plot CSV).
pub fn oscillation_json(report: &OscSweepReport) -> Value {
    json!({
        "table": "oscillation_sweep",
        "max_n": report.max_n,
        "sign_violations": report.sign_violations,
        "bands": report.band_rows.iter().map(|row| json!({
            "residue": row.residue,
            "band": row.band,
            "lo": row.lo,
            "hi": row.hi,
            "inside": row.inside,
            "outside": row.outside,
            "min_ratio": if row.inside + row.outside > 0 { Some(row.min_ratio) } else { None },
            "max_ratio": if row.inside + row.outside > 0 { Some(row.max_ratio) } else { None },
        })).collect::<Vec<_>>(),
        "band_outliers": report.band_outliers.iter().map(|(n, ratio, band)| json!({
            "n": n, "ratio": ratio, "band": band,
        })).collect::<Vec<_>>(),
        "prime": {
            "matches": report.prime_matches,
            "mismatch_total": report.prime_mismatch_total,
            "mismatches": report.prime_mismatches.iter().map(|line| json!({
                "arg": line.arg, "detail": line.detail,
            })).collect::<Vec<_>>(),
        },
    })
}

/// CSV rendering of family rows.
pub fn family_csv(kind: FamilyKind, rows: &[FamilyRow]) -> String {
    let mut out = String::from("family,n,k,perm,value,method,reference,agrees\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            kind.as_str(),
            row.n,
            row.k.map_or(String::new(), |k| k.to_string()),
            row.perm,
            row.value,
            row.method,
            row.reference.map_or(String::new(), |r| r.to_string()),
            row.agrees().map_or(String::new(), |a| a.to_string()),
        ));
    }
    out
}

/// JSON rendering of family rows.
pub fn family_json(kind: FamilyKind, rows: &[FamilyRow]) -> Value {
    json!({
        "table": "family",
        "family": kind.as_str(),
        "rows": rows.iter().map(|row| json!({
            "n": row.n,
            "k": row.k,
            "perm": row.perm.to_string(),
            "value": row.value,
            "method": row.method,
            "reference": row.reference,
            "agrees": row.agrees(),
        })).collect::<Vec<_>>(),
    })
}

/// CSV rendering of conjecture report lines.
pub fn check_lines_csv(lines: &[CheckLine]) -> String {
    let mut out = String::from("subject,matched,detail\n");
    for line in lines {
        out.push_str(&format!(
            "{:?},{},{:?}\n",
            line.subject, line.matched, line.detail
        ));
    }
    out
}

/// JSON rendering of conjecture report lines.
pub fn check_lines_json(lines: &[CheckLine]) -> Value {
    json!({
        "table": "conjectures",
        "rows": lines.iter().map(|line| json!({
            "subject": line.subject, "matched": line.matched, "detail": line.detail,
        })).collect::<Vec<_>>(),
    })
}
