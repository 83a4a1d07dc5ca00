//! Containment classification inside generalized balloons, and the
//! reduction-sum route to wedge and balloon Möbius values.
//!
//! A balloon places a core block (`beta`) inside a frame (`alpha`). Every
//! embedding of a contained permutation splits into frame landings and core
//! landings, and the pattern of the core landings decides how the permutation
//! is counted. Reading the interval this way replaces full interval summation
//! with a sum over the handful of frame deletions that are forced to cover
//! the core block.

use std::collections::BTreeSet;
use std::ops::Range;

use crate::engines::{checked_add, EngineLimits};
use crate::families::{balloon, BalloonSpec, WedgeSpec};
use crate::fast_paths::bjjs::MuCallback;
use crate::perm::{contains, visit_embeddings, Perm};
use crate::poset::interval_with_cap;
use crate::{Error, Result};

/// Frame subsets are enumerated explicitly during reduction search, so the
/// frame length is capped.
pub const FRAME_CAP: usize = 12;

/// The correction term walks chains one at a time; intervals with more
/// chains than this are refused.
const CHAIN_ENUM_CAP: i64 = 10_000_000;

/// How a permutation sits inside a fixed balloon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContainmentKind {
    /// Some embedding uses every frame point.
    Complete,
    /// A strict subpattern whose every embedding covers the whole core block.
    ProperReduction,
    /// Neither of the above, and one collected core is contained in all
    /// the others.
    Matryoshka,
    /// No unique minimal core exists.
    Defective,
}

/// Classification of one permutation contained in a balloon, with the core
/// patterns collected across its embeddings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContainmentClass {
    pub kind: ContainmentKind,
    /// The unique minimal embedding core; present exactly for `Matryoshka`.
    pub minimal_core: Option<Perm>,
    /// Every distinct core-block pattern over all embeddings, sorted by
    /// length then value sequence; may include the empty permutation.
    pub embedding_cores: Vec<Perm>,
}

/// A materialized balloon together with the host positions of its core block.
struct Frame {
    pi: Perm,
    window: Range<usize>,
}

impl Frame {
    fn new(spec: &BalloonSpec) -> Result<Frame> {
        if spec.alpha.is_empty() || spec.beta.is_empty() {
            return Err(Error::InvalidParam(
                "balloon analysis needs a nonempty frame and a nonempty core".into(),
            ));
        }
        let pi = balloon(spec)?;
        Ok(Frame {
            window: spec.i..spec.i + spec.beta.len(),
            pi,
        })
    }

    fn frame_points(&self) -> usize {
        self.pi.len() - self.window.len()
    }

    fn classify(&self, sigma: &Perm) -> Result<ContainmentClass> {
        let a = self.frame_points();
        let b = self.window.len();
        let mut found = false;
        let mut complete = false;
        let mut always_covers_block = true;
        let mut cores: BTreeSet<Perm> = BTreeSet::new();
        let mut block_vals: Vec<u32> = Vec::with_capacity(b);
        visit_embeddings(sigma, &self.pi, &mut |positions| {
            found = true;
            block_vals.clear();
            for &p in positions {
                if self.window.contains(&p) {
                    block_vals.push(self.pi.vals()[p]);
                }
            }
            if block_vals.len() < b {
                always_covers_block = false;
            }
            if positions.len() - block_vals.len() == a {
                complete = true;
            }
            cores.insert(Perm::pattern_of(&block_vals));
            true
        });
        if !found {
            return Err(Error::InvalidParam(format!(
                "{sigma} is not contained in the balloon {}",
                self.pi
            )));
        }
        let mut embedding_cores: Vec<Perm> = cores.into_iter().collect();
        embedding_cores.sort_by_key(|q| (q.len(), q.vals().to_vec()));
        let (kind, minimal_core) = if complete {
            (ContainmentKind::Complete, None)
        } else if always_covers_block {
            (ContainmentKind::ProperReduction, None)
        } else if let Some(min) = unique_minimal_core(&embedding_cores) {
            (ContainmentKind::Matryoshka, Some(min))
        } else {
            (ContainmentKind::Defective, None)
        };
        Ok(ContainmentClass {
            kind,
            minimal_core,
            embedding_cores,
        })
    }

    /// True when every embedding of `sigma` covers the whole core block.
    fn covers_block_always(&self, sigma: &Perm) -> bool {
        let b = self.window.len();
        let mut ok = true;
        visit_embeddings(sigma, &self.pi, &mut |positions| {
            let covered = positions
                .iter()
                .filter(|p| self.window.contains(p))
                .count();
            if covered < b {
                ok = false;
                return false;
            }
            true
        });
        ok
    }
}

/// The core that is contained in every other collected core, when one exists.
/// Distinct cores of equal length never contain one another, so containment
/// alone decides strictness.
fn unique_minimal_core(cores: &[Perm]) -> Option<Perm> {
    cores
        .iter()
        .find(|z| cores.iter().all(|w| *z == w || contains(z, w)))
        .cloned()
}

/// Classify `sigma` inside the balloon built from `spec`: `Complete` when
/// some embedding uses every frame point, `ProperReduction` when every
/// embedding covers the whole core block, `Matryoshka` when the collected
/// core patterns have a unique minimum under containment, and `Defective`
/// otherwise. Errors when `sigma` is not contained in the balloon.
pub fn classify_containment(sigma: &Perm, spec: &BalloonSpec) -> Result<ContainmentClass> {
    Frame::new(spec)?.classify(sigma)
}

/// Every strict subpattern reachable by deleting frame points whose
/// embeddings all cover the core block. These are exactly the interval
/// elements classified `ProperReduction`, enumerated without walking the
/// whole interval.
pub fn balloon_proper_reductions(spec: &BalloonSpec) -> Result<Vec<Perm>> {
    let frame = Frame::new(spec)?;
    let a = frame.frame_points();
    if a > FRAME_CAP {
        return Err(Error::Guard(format!(
            "reduction enumeration needs a frame of at most {FRAME_CAP} points, got {a}"
        )));
    }
    let frame_hosts: Vec<usize> = (0..frame.window.start)
        .chain(frame.window.end..frame.pi.len())
        .collect();
    let mut candidates: BTreeSet<Perm> = BTreeSet::new();
    for mask in 1u32..1 << a {
        let deleted: Vec<usize> = frame_hosts
            .iter()
            .enumerate()
            .filter(|&(t, _)| mask >> t & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        candidates.insert(frame.pi.delete_points(&deleted));
    }
    let mut out: Vec<Perm> = candidates
        .into_iter()
        .filter(|cand| frame.covers_block_always(cand))
        .collect();
    out.sort_by_key(|q| (q.len(), q.vals().to_vec()));
    Ok(out)
}

/// Proper reductions of a wedge, through its balloon form.
pub fn proper_reductions_wedge(spec: &WedgeSpec) -> Result<Vec<Perm>> {
    balloon_proper_reductions(&spec.to_balloon())
}

/// Möbius value of a wedge as the negated sum of the principal values of its
/// proper reductions, each value supplied by `mu`.
///
/// The two-point wedge is one cover above the singleton and has no proper
/// reductions, so it is answered directly; every larger wedge follows the
/// reduction sum.
pub fn wedge_mobius(spec: &WedgeSpec, mu: MuCallback) -> Result<i64> {
    let reductions = proper_reductions_wedge(spec)?;
    if spec.alpha.len() + spec.beta.len() == 2 {
        return Ok(-1);
    }
    let one = Perm::one();
    let mut total = 0i64;
    for lambda in &reductions {
        total = total
            .checked_sub(mu(&one, lambda)?)
            .ok_or(Error::Overflow("wedge reduction sum"))?;
    }
    Ok(total)
}

/// Möbius value of a generalized balloon, returned with the chain correction
/// that the reduction sum alone misses.
///
/// Chains topped by a proper reduction contribute the reduction sum. Chains
/// whose highest non-complete element is matryoshka cancel in pairs. The
/// survivors are added with sign `(-1)^length`; the returned pair is
/// `(reduction sum + correction, correction)`.
pub fn balloon_mobius_with_correction(
    spec: &BalloonSpec,
    limits: &EngineLimits,
    mu: MuCallback,
) -> Result<(i64, i64)> {
    let frame = Frame::new(spec)?;
    let iv = interval_with_cap(&Perm::one(), &frame.pi, limits.interval_len_cap)?;
    if iv.len() > limits.chain_elems {
        return Err(Error::Guard(format!(
            "chain correction over {} interval elements exceeds the cap of {}",
            iv.len(),
            limits.chain_elems
        )));
    }
    let chains: i64 = iv
        .chain_counts()?
        .iter()
        .try_fold(0i64, |acc, &k| checked_add(acc, k))?;
    if chains > CHAIN_ENUM_CAP {
        return Err(Error::Guard(format!(
            "chain correction over {chains} chains exceeds the cap of {CHAIN_ENUM_CAP}"
        )));
    }
    let kinds: Vec<ContainmentKind> = iv
        .elements()
        .iter()
        .map(|x| frame.classify(x).map(|c| c.kind))
        .collect::<Result<Vec<_>>>()?;
    let one = Perm::one();
    let mut reduction_sum = 0i64;
    for (x, &kind) in iv.elements().iter().zip(&kinds) {
        if kind == ContainmentKind::ProperReduction {
            reduction_sum = reduction_sum
                .checked_sub(mu(&one, x)?)
                .ok_or(Error::Overflow("balloon reduction sum"))?;
        }
    }
    let mut correction = 0i64;
    iv.for_each_chain(&mut |chain| {
        let kappa = chain[chain.len() - 2];
        if kinds[kappa] == ContainmentKind::ProperReduction {
            return;
        }
        let pivot = chain
            .iter()
            .rev()
            .find(|&&x| kinds[x] != ContainmentKind::Complete);
        if pivot.is_some_and(|&x| kinds[x] == ContainmentKind::Matryoshka) {
            return;
        }
        correction += if (chain.len() - 1) % 2 == 0 { 1 } else { -1 };
    });
    let value = checked_add(reduction_sum, correction)?;
    Ok((value, correction))
}

/// Read `p` as a proper wedge when possible: a contiguous run of the top
/// values strictly inside the remaining points. Smaller frames are tried
/// first so the reduction search stays narrow; runs touching either end are
/// skipped since those are plain sums.
pub fn recognize_wedge(p: &Perm) -> Option<WedgeSpec> {
    let n = p.len();
    if n < 3 {
        return None;
    }
    let vals = p.vals();
    for a in 2..=(n - 1).min(FRAME_CAP) {
        let b = n - a;
        let first = vals.iter().position(|&v| v as usize > a)?;
        let last = vals.iter().rposition(|&v| v as usize > a)?;
        if last - first + 1 != b || first == 0 || first + b == n {
            continue;
        }
        let beta = Perm::pattern_of(&vals[first..first + b]);
        let alpha_vals: Vec<u32> = vals[..first]
            .iter()
            .chain(&vals[first + b..])
            .copied()
            .collect();
        let alpha = Perm::from_vals(alpha_vals).ok()?;
        return WedgeSpec::new(alpha, beta, first).ok();
    }
    None
}
