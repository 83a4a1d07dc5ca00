//! Weighted sum over sum-indecomposable patterns for indecomposable lower
//! bounds: each candidate α in [σ, π) gets a weight from four containment
//! tests on flanked ⊕-repetitions of α, and μ[σ,π] is minus the weighted
//! sum of the μ[σ,α].

use serde::Serialize;

use crate::engines::{checked_add, checked_mul};
use crate::families::repeated_direct_sum;
use crate::fast_paths::bjjs::MuCallback;
use crate::perm::{contains, direct_sum, Perm};
use crate::poset::pattern_closure;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct ContributingEntry {
    pub alpha: Perm,
    pub weight: i8,
    pub r: u32,
}

/// The nonzero-weight candidates for an interval, in rank order.
#[derive(Clone, Debug, Serialize)]
pub struct ContributingSet {
    pub entries: Vec<ContributingEntry>,
}

fn is_monotone(p: &Perm) -> bool {
    let v = p.vals();
    v.windows(2).all(|w| w[1] == w[0] + 1) || v.windows(2).all(|w| w[0] == w[1] + 1)
}

fn check_preconditions(sigma: &Perm, pi: &Perm) -> Result<()> {
    if !sigma.sum_indecomposable() {
        return Err(Error::InvalidParam(format!(
            "lower bound {sigma} must be sum-indecomposable"
        )));
    }
    if pi.len() <= 3 {
        return Err(Error::InvalidParam(format!(
            "upper bound {pi} must have length above 3"
        )));
    }
    if is_monotone(pi) {
        return Err(Error::InvalidParam(format!(
            "upper bound {pi} is monotone; the weighted sum does not apply"
        )));
    }
    Ok(())
}

/// Proper containment: x sits inside the half-open interval below π. Every
/// containment test in the weight decides whether a family member belongs to
/// [σ, π), so π itself never counts as contained.
fn strictly_below(x: &Perm, pi: &Perm) -> bool {
    x.len() < pi.len() && contains(x, pi)
}

/// Weight of α against π: +1 when the bare ⊕-repetition lies below π but
/// neither one-point extension does, −1 when both extensions lie below π but
/// one more repetition does not, 0 otherwise. `r` is the smallest repetition
/// count whose double flanking no longer lies below π.
fn weight(sigma: &Perm, alpha: &Perm, pi: &Perm) -> (i8, u32) {
    let one = Perm::one();
    let mut r = 1u32;
    // The flanked repetition outgrows π eventually, so the search is finite.
    loop {
        let tower = repeated_direct_sum(alpha, r as usize);
        let flanked = direct_sum(&one, &direct_sum(&tower, &one));
        if !strictly_below(&flanked, pi) {
            break;
        }
        r += 1;
    }
    let tower = repeated_direct_sum(alpha, r as usize);
    if !(contains(sigma, &tower) && strictly_below(&tower, pi)) {
        return (0, r);
    }
    let left = direct_sum(&one, &tower);
    let right = direct_sum(&tower, &one);
    let left_in = strictly_below(&left, pi);
    let right_in = strictly_below(&right, pi);
    if !left_in && !right_in {
        return (1, r);
    }
    if left_in && right_in {
        let grown = repeated_direct_sum(alpha, r as usize + 1);
        if !strictly_below(&grown, pi) {
            return (-1, r);
        }
    }
    (0, r)
}

/// All sum-indecomposable α in [σ, π) with nonzero weight, rank-ordered.
pub fn contributing_set(sigma: &Perm, pi: &Perm) -> Result<ContributingSet> {
    check_preconditions(sigma, pi)?;
    let mut entries = Vec::new();
    for alpha in pattern_closure(pi) {
        if alpha.len() < sigma.len() || alpha == *pi {
            continue;
        }
        if !alpha.sum_indecomposable() || !contains(sigma, &alpha) {
            continue;
        }
        let (w, r) = weight(sigma, &alpha, pi);
        if w != 0 {
            entries.push(ContributingEntry { alpha, weight: w, r });
        }
    }
    Ok(ContributingSet { entries })
}

/// μ[σ, π] as minus the weighted sum of μ[σ, α] over the contributing set.
pub fn contributing_mobius(sigma: &Perm, pi: &Perm, mu: MuCallback) -> Result<i64> {
    let set = contributing_set(sigma, pi)?;
    let mut total = 0i64;
    for entry in &set.entries {
        let inner = mu(sigma, &entry.alpha)?;
        total = checked_add(total, checked_mul(inner, entry.weight as i64)?)?;
    }
    Ok(-total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::{mobius_recursive, EngineLimits, MemoStore};

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    fn oracle_mobius(sigma: &Perm, pi: &Perm) -> i64 {
        let memo = MemoStore::new();
        let limits = EngineLimits::default();
        let mut mu = |a: &Perm, b: &Perm| {
            mobius_recursive(a, b, &memo, &limits).map(|r| r.value)
        };
        contributing_mobius(sigma, pi, &mut mu).unwrap()
    }

    #[test]
    fn worked_interval_table_and_value() {
        let sigma = p("3142");
        let pi = p("315274968");
        let set = contributing_set(&sigma, &pi).unwrap();
        let got: Vec<(String, i8, u32)> = set
            .entries
            .iter()
            .map(|e| (e.alpha.to_string(), e.weight, e.r))
            .collect();
        let expect = [
            ("24153", -1, 1),
            ("241635", -1, 1),
            ("315264", -1, 1),
            ("2416375", 1, 1),
            ("3152746", -1, 1),
            ("24163857", 1, 1),
            ("31527486", 1, 1),
        ];
        let expect: Vec<(String, i8, u32)> = expect
            .iter()
            .map(|&(a, w, r)| (a.to_string(), w, r))
            .collect();
        assert_eq!(got, expect);
        assert_eq!(oracle_mobius(&sigma, &pi), -6);
        let memo = MemoStore::new();
        let limits = EngineLimits::default();
        let direct = mobius_recursive(&sigma, &pi, &memo, &limits).unwrap();
        assert_eq!(direct.value, -6);
    }

    #[test]
    fn cover_pairs_need_no_recursion_depth() {
        // |σ| = |π| − 1 keeps every inner value at the stop cases.
        assert_eq!(oracle_mobius(&p("312"), &p("2413")), -1);
        assert_eq!(oracle_mobius(&p("231"), &p("2413")), -1);
    }

    #[test]
    fn preconditions_reject_bad_inputs() {
        assert!(contributing_set(&p("12"), &p("2413")).is_err());
        assert!(contributing_set(&p("1"), &p("213")).is_err());
        assert!(contributing_set(&p("1"), &p("1234")).is_err());
        assert!(contributing_set(&p("1"), &p("4321")).is_err());
    }

    #[test]
    fn uncontained_sigma_gives_empty_set_and_zero() {
        let set = contributing_set(&p("3142"), &p("1243")).unwrap();
        assert!(set.entries.is_empty());
        assert_eq!(oracle_mobius(&p("3142"), &p("1243")), 0);
    }

    #[test]
    fn matches_oracle_exhaustively_to_six() {
        let memo = MemoStore::new();
        let limits = EngineLimits::default();
        let mut checked = 0usize;
        for n in 4..=6usize {
            let mut vals: Vec<u32> = (1..=n as u32).collect();
            permute_all(&mut vals, 0, &mut |vals| {
                let pi = Perm::from_vals(vals.to_vec()).unwrap();
                if is_monotone(&pi) {
                    return;
                }
                for sigma in crate::poset::pattern_closure(&pi) {
                    if !sigma.sum_indecomposable() || sigma == pi {
                        continue;
                    }
                    let expect = mobius_recursive(&sigma, &pi, &memo, &limits)
                        .unwrap()
                        .value;
                    assert_eq!(
                        oracle_mobius(&sigma, &pi),
                        expect,
                        "sigma {sigma} pi {pi}"
                    );
                    checked += 1;
                }
            });
        }
        assert!(checked > 2000);
    }

    fn permute_all(vals: &mut Vec<u32>, at: usize, visit: &mut dyn FnMut(&[u32])) {
        if at == vals.len() {
            visit(vals);
            return;
        }
        for i in at..vals.len() {
            vals.swap(at, i);
            permute_all(vals, at + 1, visit);
            vals.swap(at, i);
        }
    }
}
