//! Recursions for sum- and skew-decomposable upper bounds: peel leading
//! components of π against leading components of σ, delegating strictly
//! smaller intervals back to the caller.

use crate::engines::{checked_add, checked_mul};
use crate::perm::{direct_sum, Perm, SumDecomposition, SumKind};
use crate::Result;

/// μ oracle for the strictly smaller intervals the recursion produces.
pub type MuCallback<'a> = &'a mut dyn FnMut(&Perm, &Perm) -> Result<i64>;

/// μ[σ, π] when π splits as a direct or skew sum; `None` when π is
/// strongly indecomposable. The skew case runs on complements, which turn
/// skew sums into direct sums and leave μ unchanged.
pub fn bjjs_decomposable(sigma: &Perm, pi: &Perm, mu: MuCallback) -> Result<Option<i64>> {
    if pi.len() < 2 {
        return Ok(None);
    }
    let direct = pi.finest_decomposition(SumKind::Direct)?;
    if direct.parts.len() >= 2 {
        return bjjs_sum(sigma, &direct, mu).map(Some);
    }
    if pi.finest_decomposition(SumKind::Skew)?.parts.len() >= 2 {
        let sc = sigma.complement();
        let dec = pi.complement().finest_decomposition(SumKind::Direct)?;
        return bjjs_sum(&sc, &dec, mu).map(Some);
    }
    Ok(None)
}

fn sigma_parts(sigma: &Perm) -> Result<Vec<Perm>> {
    if sigma.is_empty() {
        return Ok(Vec::new());
    }
    Ok(sigma.finest_decomposition(SumKind::Direct)?.parts)
}

fn prefix(parts: &[Perm], upto: usize) -> Perm {
    parts[..upto.min(parts.len())]
        .iter()
        .fold(Perm::empty(), |acc, part| direct_sum(&acc, part))
}

fn suffix(parts: &[Perm], from: usize) -> Perm {
    parts[from.min(parts.len())..]
        .iter()
        .fold(Perm::empty(), |acc, part| direct_sum(&acc, part))
}

/// μ[σ, π₁⊕…⊕π_n] for n ≥ 2, by cases on whether π₁ is a single point.
fn bjjs_sum(sigma: &Perm, dec: &SumDecomposition, mu: MuCallback) -> Result<i64> {
    let pi_parts = &dec.parts;
    let s_parts = sigma_parts(sigma)?;
    let m = s_parts.len();
    let one = Perm::one();
    if pi_parts[0] == one {
        let k = pi_parts.iter().take_while(|q| **q == one).count();
        let l = s_parts.iter().take_while(|q| **q == one).count();
        if k - 1 > l {
            return Ok(0);
        }
        let pi_rest = suffix(pi_parts, k);
        if k - 1 == l {
            return Ok(-mu(&suffix(&s_parts, k - 1), &pi_rest)?);
        }
        let kept = mu(&suffix(&s_parts, k), &pi_rest)?;
        let dropped = mu(&suffix(&s_parts, k - 1), &pi_rest)?;
        return checked_add(kept, -dropped);
    }
    // π₁ ≠ 1: split σ after each leading run of components and pair the
    // head of the split against π₁, the tail against every suffix of the
    // repeated-head block.
    let k = pi_parts.iter().take_while(|q| **q == pi_parts[0]).count();
    let head = &pi_parts[0];
    let mut total = 0i64;
    for i in 1..=m {
        let left = mu(&prefix(&s_parts, i), head)?;
        if left == 0 {
            continue;
        }
        let s_rest = suffix(&s_parts, i);
        let mut right = 0i64;
        for j in 1..=k {
            right = checked_add(right, mu(&s_rest, &suffix(pi_parts, j))?)?;
        }
        total = checked_add(total, checked_mul(left, right)?)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::{mobius_recursive, EngineLimits, MemoStore};
    use crate::perm::skew_sum;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    fn with_oracle(sigma: &Perm, pi: &Perm) -> Option<i64> {
        let memo = MemoStore::new();
        let limits = EngineLimits::default();
        let mut mu = |a: &Perm, b: &Perm| {
            mobius_recursive(a, b, &memo, &limits).map(|r| r.value)
        };
        bjjs_decomposable(sigma, pi, &mut mu).unwrap()
    }

    #[test]
    fn point_head_cases() {
        assert_eq!(with_oracle(&p("1"), &p("123")), Some(0));
        assert_eq!(with_oracle(&p("1"), &p("132")), Some(1));
        assert_eq!(with_oracle(&p("1"), &p("12")), Some(-1));
        assert_eq!(with_oracle(&p("21"), &p("132")), Some(-1));
    }

    #[test]
    fn repeated_head_cases() {
        let tower = direct_sum(&p("2413"), &p("2413"));
        assert_eq!(with_oracle(&p("1"), &tower), Some(-3));
        assert_eq!(with_oracle(&p("1"), &p("214365")), Some(-1));
    }

    #[test]
    fn skew_side_runs_on_complements() {
        assert_eq!(with_oracle(&p("1"), &p("321")), Some(0));
        assert_eq!(with_oracle(&p("1"), &p("312")), Some(1));
        let anti_tower = skew_sum(&p("12"), &p("12"));
        assert_eq!(anti_tower, p("3412"));
        assert_eq!(with_oracle(&p("1"), &anti_tower), Some(-1));
    }

    #[test]
    fn strongly_indecomposable_is_skipped() {
        assert_eq!(with_oracle(&p("1"), &p("2413")), None);
        assert_eq!(with_oracle(&p("1"), &p("25314")), None);
        assert_eq!(with_oracle(&p("1"), &p("1")), None);
    }

    #[test]
    fn indecomposable_sigma_collapses_to_the_head() {
        let memo = MemoStore::new();
        let limits = EngineLimits::default();
        let mu_head = mobius_recursive(&p("21"), &p("21"), &memo, &limits)
            .unwrap()
            .value;
        let triple = direct_sum(&direct_sum(&p("21"), &p("21")), &p("21"));
        assert_eq!(with_oracle(&p("21"), &triple), Some(mu_head));
        let capped = direct_sum(&direct_sum(&p("21"), &p("21")), &p("1"));
        assert_eq!(with_oracle(&p("21"), &capped), Some(-mu_head));
    }

    #[test]
    fn matches_oracle_on_every_decomposable_interval_up_to_six() {
        let memo = MemoStore::new();
        let limits = EngineLimits::default();
        let mut checked = 0usize;
        for n in 2..=6usize {
            let mut vals: Vec<u32> = (1..=n as u32).collect();
            permute_all(&mut vals, 0, &mut |vals| {
                let pi = Perm::from_vals(vals.to_vec()).unwrap();
                let direct = pi.finest_decomposition(SumKind::Direct).unwrap();
                let skew = pi.finest_decomposition(SumKind::Skew).unwrap();
                if direct.parts.len() < 2 && skew.parts.len() < 2 {
                    return;
                }
                for sigma in crate::poset::pattern_closure(&pi) {
                    let expect = mobius_recursive(&sigma, &pi, &memo, &limits)
                        .unwrap()
                        .value;
                    assert_eq!(
                        with_oracle(&sigma, &pi),
                        Some(expect),
                        "sigma {sigma} pi {pi}"
                    );
                    checked += 1;
                }
            });
        }
        assert!(checked > 3000);
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
