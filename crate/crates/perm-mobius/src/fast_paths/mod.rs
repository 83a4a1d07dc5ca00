//! Shortcut strategies for Möbius values, and the dispatcher that routes
//! each query to the cheapest one that applies.
//!
//! The submodules hold the individual strategies: vanishing certificates,
//! the decomposable-upper-bound recursion, the contributing-set recursion
//! for indecomposable lower bounds, the oscillation engine, and the balloon
//! and wedge reduction sums. [`Dispatcher::compute`] tries them in a fixed
//! order and records which one produced the value, so callers can see how a
//! number was obtained and tests can pin routing down.

pub mod balloon2413;
pub mod bjjs;
pub mod contributing;
pub mod oscillation;
pub mod wedge;
pub mod zero;

use crate::engines::{
    mobius_recursive, EngineLimits, MemoStore, MobiusResult, METHOD_EQUALITY,
    METHOD_NOT_CONTAINED,
};
use crate::families::{increasing_oscillation, OscShape, OscillationDescriptor};
use crate::perm::{contains, Perm};
use crate::{Error, Result};

pub const METHOD_EMPTY_LOWER: &str = "empty_lower";
pub const METHOD_COVER: &str = "cover";
pub const METHOD_INC_OSC: &str = "inc_osc";
pub const METHOD_BALLOON_2413: &str = "balloon_2413";
pub const METHOD_WEDGE: &str = "wedge";
pub const METHOD_BJJS: &str = "bjjs";
pub const METHOD_CONTRIBUTING: &str = "contributing";

/// Longest oscillation the dispatcher will materialize when a symbolic
/// upper bound cannot be handled symbolically.
const MATERIALIZE_CAP: usize = 64;

/// An upper bound: either an explicit permutation or a symbolic oscillation
/// kept unmaterialized so million-point queries stay linear.
#[derive(Clone, Copy, Debug)]
pub enum UpperInput<'p> {
    Concrete(&'p Perm),
    Oscillation(OscillationDescriptor),
}

/// Routes μ[σ, π] queries through the strategy chain: trivial interval
/// shapes, vanishing certificates, family formulas on any symmetric image,
/// the decomposable and contributing-set recursions, then the defining
/// recursion as a last resort. Inner values requested by the strategies come
/// back through the dispatcher, so shortcuts apply at every depth and the
/// shared memo store is populated along the way.
pub struct Dispatcher<'a> {
    memo: &'a MemoStore,
    limits: &'a EngineLimits,
}

impl<'a> Dispatcher<'a> {
    pub fn new(memo: &'a MemoStore, limits: &'a EngineLimits) -> Self {
        Dispatcher { memo, limits }
    }

    /// Memoized μ[σ, π], keyed by the joint symmetry canonicalization of the
    /// pair.
    pub fn mobius(&self, sigma: &Perm, pi: &Perm) -> Result<i64> {
        let key = MemoStore::key(sigma, pi);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v);
        }
        let res = self.compute(sigma, UpperInput::Concrete(pi))?;
        self.memo.insert(key, res.value);
        Ok(res.value)
    }

    /// μ[1, π] with provenance.
    pub fn principal(&self, pi: &Perm) -> Result<MobiusResult> {
        self.compute(&Perm::one(), UpperInput::Concrete(pi))
    }

    pub fn compute(&self, sigma: &Perm, upper: UpperInput<'_>) -> Result<MobiusResult> {
        match upper {
            UpperInput::Concrete(pi) => self.compute_concrete(sigma, pi),
            UpperInput::Oscillation(desc) => self.compute_oscillation(sigma, &desc),
        }
    }

    fn compute_concrete(&self, sigma: &Perm, pi: &Perm) -> Result<MobiusResult> {
        if sigma == pi {
            return Ok(MobiusResult::new(1, METHOD_EQUALITY));
        }
        if sigma.len() >= pi.len() || !contains(sigma, pi) {
            return Ok(MobiusResult::new(0, METHOD_NOT_CONTAINED));
        }
        if sigma.is_empty() && pi.len() >= 2 {
            return Ok(MobiusResult::new(0, METHOD_EMPTY_LOWER));
        }
        if pi.len() == sigma.len() + 1 {
            return Ok(MobiusResult::new(-1, METHOD_COVER));
        }
        if sigma.len() == 1 {
            if let Some(cert) = zero::zero_test(pi) {
                return Ok(MobiusResult::new(0, cert.rule));
            }
        } else if let Some(cert) = zero::sigma_zero_test(sigma, pi) {
            return Ok(MobiusResult::new(0, cert.rule));
        }
        if let Some(res) = self.try_families(sigma, pi)? {
            return Ok(res);
        }
        let mut mu = |a: &Perm, b: &Perm| self.mobius(a, b);
        if let Some(v) = bjjs::bjjs_decomposable(sigma, pi, &mut mu)? {
            return Ok(MobiusResult::new(v, METHOD_BJJS));
        }
        if let Some(res) = self.try_contributing(sigma, pi)? {
            return Ok(res);
        }
        mobius_recursive(sigma, pi, self.memo, self.limits)
    }

    /// Family formulas fire on any of the eight jointly transformed images of
    /// the pair; the value is symmetry-invariant even though the recognized
    /// shape may live in a mirror.
    fn try_families(&self, sigma: &Perm, pi: &Perm) -> Result<Option<MobiusResult>> {
        let lo_imgs = sigma.symmetries();
        let up_imgs = pi.symmetries();
        for (lo, up) in lo_imgs.iter().zip(up_imgs.iter()) {
            let Some(desc) = recognize_oscillation(up) else {
                continue;
            };
            if !lo.sum_indecomposable() {
                continue;
            }
            match oscillation::inc_osc_mobius(lo, &desc) {
                Ok(v) => return Ok(Some(MobiusResult::new(v, METHOD_INC_OSC))),
                Err(Error::InvalidParam(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        if sigma.len() == 1 {
            let mut mu = |a: &Perm, b: &Perm| self.mobius(a, b);
            for up in &up_imgs {
                if let Some(beta) = balloon2413::is_2413_balloon(up) {
                    let v = balloon2413::balloon_2413_mobius(&beta, &mut mu)?;
                    return Ok(Some(MobiusResult::new(v, METHOD_BALLOON_2413)));
                }
            }
            for up in &up_imgs {
                if let Some(spec) = wedge::recognize_wedge(up) {
                    let v = wedge::wedge_mobius(&spec, &mut mu)?;
                    return Ok(Some(MobiusResult::new(v, METHOD_WEDGE)));
                }
            }
        }
        Ok(None)
    }

    /// The contributing-set recursion, complementing both bounds when the
    /// lower bound is skew-indecomposable instead of sum-indecomposable.
    fn try_contributing(&self, sigma: &Perm, pi: &Perm) -> Result<Option<MobiusResult>> {
        let mut mu = |a: &Perm, b: &Perm| self.mobius(a, b);
        if contributing_applies(sigma, pi) {
            let v = contributing::contributing_mobius(sigma, pi, &mut mu)?;
            return Ok(Some(MobiusResult::new(v, METHOD_CONTRIBUTING)));
        }
        let (sc, pc) = (sigma.complement(), pi.complement());
        if contributing_applies(&sc, &pc) {
            let v = contributing::contributing_mobius(&sc, &pc, &mut mu)?;
            return Ok(Some(MobiusResult::new(v, METHOD_CONTRIBUTING)));
        }
        Ok(None)
    }

    fn compute_oscillation(
        &self,
        sigma: &Perm,
        desc: &OscillationDescriptor,
    ) -> Result<MobiusResult> {
        if desc.n <= MATERIALIZE_CAP {
            let pi = increasing_oscillation(desc)?;
            return self.compute_concrete(sigma, &pi);
        }
        if sigma.len() == desc.n {
            let pi = increasing_oscillation(desc)?;
            let res = if *sigma == pi {
                MobiusResult::new(1, METHOD_EQUALITY)
            } else {
                MobiusResult::new(0, METHOD_NOT_CONTAINED)
            };
            return Ok(res);
        }
        if sigma.len() > desc.n {
            return Ok(MobiusResult::new(0, METHOD_NOT_CONTAINED));
        }
        if sigma.is_empty() {
            return Ok(MobiusResult::new(0, METHOD_EMPTY_LOWER));
        }
        if !sigma.sum_indecomposable() {
            return Err(Error::Guard(format!(
                "decomposable lower bound {} against a symbolic oscillation of \
                 length {}; materialization is refused above {}",
                sigma, desc.n, MATERIALIZE_CAP
            )));
        }
        match oscillation::inc_osc_mobius(sigma, desc) {
            Ok(v) => Ok(MobiusResult::new(v, METHOD_INC_OSC)),
            Err(Error::InvalidParam(_)) => Ok(MobiusResult::new(0, METHOD_NOT_CONTAINED)),
            Err(e) => Err(e),
        }
    }
}

fn contributing_applies(sigma: &Perm, pi: &Perm) -> bool {
    sigma.sum_indecomposable()
        && pi.len() > 3
        && !pi.is_identity()
        && !pi.is_decreasing()
}

/// The descriptor for `p` when `p` literally is W_n or M_n with n ≥ 4.
fn recognize_oscillation(p: &Perm) -> Option<OscillationDescriptor> {
    let n = p.len();
    if n < 4 {
        return None;
    }
    for shape in [OscShape::W, OscShape::M] {
        let d = OscillationDescriptor { shape, n };
        if increasing_oscillation(&d).is_ok_and(|w| w == *p) {
            return Some(d);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fast_paths::zero::RULE_OPPOSING_ADJACENCIES;
    use crate::poset::downset;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    fn fresh<'a>(memo: &'a MemoStore, limits: &'a EngineLimits) -> Dispatcher<'a> {
        Dispatcher::new(memo, limits)
    }

    fn oracle(sigma: &Perm, pi: &Perm) -> i64 {
        let memo = MemoStore::new();
        let limits = EngineLimits::default();
        mobius_recursive(sigma, pi, &memo, &limits).unwrap().value
    }

    #[test]
    fn trivial_interval_shapes_short_circuit() {
        let memo = MemoStore::new();
        let limits = EngineLimits::default();
        let d = fresh(&memo, &limits);
        let cases = [
            ("", "", 1, METHOD_EQUALITY),
            ("21", "21", 1, METHOD_EQUALITY),
            ("12", "21", 0, METHOD_NOT_CONTAINED),
            ("123", "21", 0, METHOD_NOT_CONTAINED),
            ("", "1", -1, METHOD_COVER),
            ("", "21", 0, METHOD_EMPTY_LOWER),
            ("", "2413", 0, METHOD_EMPTY_LOWER),
            ("1", "12", -1, METHOD_COVER),
            ("132", "1432", -1, METHOD_COVER),
        ];
        for (lo, up, want, method) in cases {
            let res = d.compute(&p(lo), UpperInput::Concrete(&p(up))).unwrap();
            assert_eq!((res.value, res.method), (want, method), "[{lo}, {up}]");
        }
        assert!(memo.is_empty(), "shortcuts never touch the memo");
    }

    #[test]
    fn named_values_route_through_families() {
        let memo = MemoStore::new();
        let limits = EngineLimits::default();
        let d = fresh(&memo, &limits);
        let one = Perm::one();
        let cases = [
            ("2413", -3, METHOD_INC_OSC),
            ("24153", 6, METHOD_INC_OSC),
            ("25314", 4, METHOD_BALLOON_2413),
            ("263415", -1, METHOD_BALLOON_2413),
            ("2735416", 1, METHOD_BALLOON_2413),
            ("28463517", -6, METHOD_BALLOON_2413),
            ("2431", -1, METHOD_WEDGE),
        ];
        for (up, want, method) in cases {
            let res = d.compute(&one, UpperInput::Concrete(&p(up))).unwrap();
            assert_eq!((res.value, res.method), (want, method), "[1, {up}]");
        }
    }

    #[test]
    fn zero_certificates_label_the_result() {
        let memo = MemoStore::new();
        let limits = EngineLimits::default();
        let d = fresh(&memo, &limits);
        let res = d
            .compute(&Perm::one(), UpperInput::Concrete(&p("367249815")))
            .unwrap();
        assert_eq!(res.value, 0);
        assert_eq!(res.method, RULE_OPPOSING_ADJACENCIES);
    }

    #[test]
    fn matches_oracle_on_every_small_interval() {
        let memo = MemoStore::new();
        let limits = EngineLimits::default();
        let d = fresh(&memo, &limits);
        let one = Perm::one();
        let mut checked = 0u32;
        for n in 1..=6 {
            let mut tops = Vec::new();
            crate::perm::for_each_arrangement(n, |vals| tops.push(Perm::pattern_of(vals)));
            for pi in &tops {
                let want = oracle(&one, pi);
                let got = d.compute(&one, UpperInput::Concrete(pi)).unwrap();
                assert_eq!(got.value, want, "[1, {pi}] routed via {}", got.method);
                checked += 1;
            }
        }
        let mut tops = Vec::new();
        crate::perm::for_each_arrangement(5, |vals| tops.push(Perm::pattern_of(vals)));
        for pi in &tops {
            for sigma in downset(pi).unwrap().elements() {
                let want = oracle(sigma, pi);
                let got = d.compute(sigma, UpperInput::Concrete(pi)).unwrap();
                assert_eq!(got.value, want, "[{sigma}, {pi}] via {}", got.method);
                checked += 1;
            }
        }
        assert!(checked > 2000, "swept only {checked} pairs");
    }

    #[test]
    fn values_are_symmetry_invariant() {
        let memo = MemoStore::new();
        let limits = EngineLimits::default();
        let d = fresh(&memo, &limits);
        let pairs = [
            ("1", "25314"),
            ("1", "2431"),
            ("132", "2735416"),
            ("3142", "41352"),
            ("12", "415263"),
        ];
        for (lo, up) in pairs {
            let (sigma, pi) = (p(lo), p(up));
            let base = d.compute(&sigma, UpperInput::Concrete(&pi)).unwrap().value;
            assert_eq!(base, oracle(&sigma, &pi), "[{lo}, {up}]");
            for (ls, us) in sigma.symmetries().iter().zip(pi.symmetries().iter()) {
                let img = d.compute(ls, UpperInput::Concrete(us)).unwrap();
                assert_eq!(img.value, base, "image [{ls}, {us}] via {}", img.method);
            }
        }
    }

    #[test]
    fn contributing_handles_indecomposable_lower_bounds() {
        let memo = MemoStore::new();
        let limits = EngineLimits::default();
        let d = fresh(&memo, &limits);
        let direct = d
            .compute(&p("2413"), UpperInput::Concrete(&p("246135")))
            .unwrap();
        assert_eq!(direct.method, METHOD_CONTRIBUTING);
        assert_eq!(direct.value, 5);
        assert_eq!(direct.value, oracle(&p("2413"), &p("246135")));

        let skew = d
            .compute(&p("12"), UpperInput::Concrete(&p("41352")))
            .unwrap();
        assert_eq!(skew.method, METHOD_CONTRIBUTING);
        assert_eq!(skew.value, -5);
        assert_eq!(skew.value, oracle(&p("12"), &p("41352")));
    }

    #[test]
    fn symbolic_oscillations_stay_symbolic() {
        let memo = MemoStore::new();
        let limits = EngineLimits::default();
        let d = fresh(&memo, &limits);
        let big = OscillationDescriptor {
            shape: OscShape::W,
            n: 100_000,
        };
        let res = d
            .compute(&Perm::one(), UpperInput::Oscillation(big))
            .unwrap();
        assert_eq!(res.method, METHOD_INC_OSC);
        assert_eq!(res.value, -2_176_900_320);

        let res = d.compute(&p("312"), UpperInput::Oscillation(big)).unwrap();
        assert_eq!(res.method, METHOD_INC_OSC);

        let res = d.compute(&p("321"), UpperInput::Oscillation(big)).unwrap();
        assert_eq!((res.value, res.method), (0, METHOD_NOT_CONTAINED));

        let err = d
            .compute(&p("123"), UpperInput::Oscillation(big))
            .unwrap_err();
        assert!(matches!(err, Error::Guard(_)));
    }

    #[test]
    fn symbolic_oscillations_materialize_when_small() {
        let memo = MemoStore::new();
        let limits = EngineLimits::default();
        let d = fresh(&memo, &limits);
        let small = OscillationDescriptor {
            shape: OscShape::M,
            n: 4,
        };
        let res = d
            .compute(&p("123"), UpperInput::Oscillation(small))
            .unwrap();
        assert_eq!(res.value, oracle(&p("123"), &p("2413")));

        let exact = increasing_oscillation(&OscillationDescriptor {
            shape: OscShape::W,
            n: 65,
        })
        .unwrap();
        let eq = d
            .compute(
                &exact,
                UpperInput::Oscillation(OscillationDescriptor {
                    shape: OscShape::W,
                    n: 65,
                }),
            )
            .unwrap();
        assert_eq!((eq.value, eq.method), (1, METHOD_EQUALITY));
        let off = d
            .compute(
                &exact,
                UpperInput::Oscillation(OscillationDescriptor {
                    shape: OscShape::M,
                    n: 65,
                }),
            )
            .unwrap();
        assert_eq!((off.value, off.method), (0, METHOD_NOT_CONTAINED));
    }

    #[test]
    fn memoized_wrapper_reuses_symmetric_results() {
        let memo = MemoStore::new();
        let limits = EngineLimits::default();
        let d = fresh(&memo, &limits);
        let first = d.mobius(&Perm::one(), &p("25314")).unwrap();
        let filled = memo.len();
        assert!(filled >= 1);
        let again = d.mobius(&Perm::one(), &p("41352").inverse()).unwrap();
        let _ = again;
        let mirrored = d.mobius(&Perm::one(), &p("25314").reverse()).unwrap();
        assert_eq!(mirrored, first);
        assert_eq!(memo.len(), filled, "the mirrored query hit the memo");
    }

    #[test]
    fn decomposable_upper_bounds_route_through_bjjs() {
        let memo = MemoStore::new();
        let limits = EngineLimits::default();
        let d = fresh(&memo, &limits);
        let res = d
            .compute(&p("21"), UpperInput::Concrete(&p("3412")))
            .unwrap();
        assert_eq!(res.method, METHOD_BJJS);
        assert_eq!(res.value, oracle(&p("21"), &p("3412")));
        let direct = d
            .compute(&p("1234"), UpperInput::Concrete(&p("134256")))
            .unwrap();
        assert_eq!(direct.method, METHOD_BJJS);
        assert_eq!(direct.value, oracle(&p("1234"), &p("134256")));
    }
}
