//! Certificates that force μ to vanish without touching the interval:
//! corner and monotone-run tests, opposing adjacencies, interval-copy
//! annihilators singly and in pairs, and the σ-relative refinements.

use std::collections::HashSet;
use std::sync::OnceLock;

use serde::Serialize;
use serde_json::json;

use crate::perm::{contains, Perm, SumKind};
use crate::{Error, Result};

/// Interval-copy searches are skipped above this length; the linear-time
/// detectors always run.
pub const WINDOW_RULE_CAP: usize = 600;

pub const RULE_LONG_CORNER: &str = "long_corner";
pub const RULE_TRIPLE_ADJACENCY: &str = "triple_adjacency";
pub const RULE_MONOTONE_INTERVAL: &str = "monotone_interval";
pub const RULE_OPPOSING_ADJACENCIES: &str = "opposing_adjacencies";
pub const RULE_SUM_PLUS_ONE_ANNIHILATOR: &str = "sum_plus_one_annihilator";
pub const RULE_NAMED_ANNIHILATOR: &str = "named_annihilator";
pub const RULE_ANNIHILATOR_PAIR: &str = "annihilator_pair";
pub const RULE_SIGMA_ANNIHILATOR: &str = "sigma_annihilator";
/// Reserved: the {1,12,21}-inflation lemma pins values rather than zeroes,
/// so no firing condition for it is sound; the tag exists only so the
/// certificate schema is closed.
pub const RULE_BOOLEAN_INFLATION_EXCLUDED: &str = "boolean_inflation_excluded";
pub const RULE_SYMMETRY_1243_INTERVAL: &str = "symmetry_1243_interval";

/// Every rule tag a certificate can carry.
pub const RULES: [&str; 10] = [
    RULE_LONG_CORNER,
    RULE_TRIPLE_ADJACENCY,
    RULE_MONOTONE_INTERVAL,
    RULE_OPPOSING_ADJACENCIES,
    RULE_SUM_PLUS_ONE_ANNIHILATOR,
    RULE_NAMED_ANNIHILATOR,
    RULE_ANNIHILATOR_PAIR,
    RULE_SIGMA_ANNIHILATOR,
    RULE_BOOLEAN_INFLATION_EXCLUDED,
    RULE_SYMMETRY_1243_INTERVAL,
];

/// The three single annihilators of length 6.
const NAMED_ANNIHILATORS: [&str; 3] = ["215463", "236145", "214653"];

/// Pairs whose position-disjoint interval copies (under one common
/// symmetry) force a vanishing value.
const ANNIHILATOR_PAIRS: [(&str, &str); 4] = [
    ("213", "2431"),
    ("2143", "2431"),
    ("312", "23514"),
    ("25134", "23514"),
];

/// Proof that μ vanishes, naming the rule and the data it fired on.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroCertificate {
    pub rule: &'static str,
    pub witness: serde_json::Value,
}

fn named_orbit() -> &'static HashSet<Perm> {
    static ORBIT: OnceLock<HashSet<Perm>> = OnceLock::new();
    ORBIT.get_or_init(|| {
        NAMED_ANNIHILATORS
            .iter()
            .flat_map(|s| s.parse::<Perm>().unwrap().symmetries())
            .collect()
    })
}

fn orbit_1243() -> &'static HashSet<Perm> {
    static ORBIT: OnceLock<HashSet<Perm>> = OnceLock::new();
    ORBIT.get_or_init(|| "1243".parse::<Perm>().unwrap().symmetries().into_iter().collect())
}

/// Windows of `p` (contiguous positions holding contiguous values) with at
/// least `min_len` points, the whole permutation included.
fn windows(p: &Perm, min_len: usize) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = p
        .find_proper_intervals()
        .into_iter()
        .filter(|&(_, len)| len >= min_len)
        .collect();
    if p.len() >= min_len {
        out.push((0, p.len()));
    }
    out
}

fn window_pattern(p: &Perm, start: usize, len: usize) -> Perm {
    Perm::pattern_of(&p.vals()[start..start + len])
}

/// Start positions of every window of `p` ordered exactly like `q`.
fn matching_windows(p: &Perm, q: &Perm) -> Vec<usize> {
    let k = q.len();
    let n = p.len();
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    for s in 0..=n - k {
        let seg = &p.vals()[s..s + k];
        let lo = *seg.iter().min().unwrap();
        let hi = *seg.iter().max().unwrap();
        if (hi - lo) as usize == k - 1
            && seg.iter().zip(q.vals()).all(|(&v, &qv)| v - lo + 1 == qv)
        {
            out.push(s);
        }
    }
    out
}

fn long_corner_certificate(p: &Perm) -> Option<ZeroCertificate> {
    if !p.detect_long_corner() {
        return None;
    }
    let v = p.vals();
    let n = p.len();
    let n32 = n as u32;
    let corner = if v[0] == 1 && v[1] == 2 {
        "rising_prefix"
    } else if v[n - 2] == n32 - 1 && v[n - 1] == n32 {
        "rising_suffix"
    } else if v[0] == n32 && v[1] == n32 - 1 {
        "falling_prefix"
    } else {
        "falling_suffix"
    };
    Some(ZeroCertificate {
        rule: RULE_LONG_CORNER,
        witness: json!({ "corner": corner }),
    })
}

fn find_sum_plus_one(p: &Perm) -> Option<ZeroCertificate> {
    for (start, len) in windows(p, 3) {
        let w = window_pattern(p, start, len);
        let Ok(dec) = w.finest_decomposition(SumKind::Direct) else {
            continue;
        };
        let m = dec.parts.len();
        for i in 1..m.saturating_sub(1) {
            if dec.parts[i].len() == 1 {
                return Some(ZeroCertificate {
                    rule: RULE_SUM_PLUS_ONE_ANNIHILATOR,
                    witness: json!({
                        "window_start": start,
                        "window_len": len,
                        "alpha": dec.recompose_range(0, i).to_string(),
                        "beta": dec.recompose_range(i + 1, m).to_string(),
                    }),
                });
            }
        }
    }
    None
}

fn find_named_annihilator(p: &Perm) -> Option<ZeroCertificate> {
    let n = p.len();
    if n < 6 {
        return None;
    }
    let orbit = named_orbit();
    for s in 0..=n - 6 {
        let seg = &p.vals()[s..s + 6];
        let lo = *seg.iter().min().unwrap();
        let hi = *seg.iter().max().unwrap();
        if hi - lo != 5 {
            continue;
        }
        let w = Perm::pattern_of(seg);
        if orbit.contains(&w) {
            return Some(ZeroCertificate {
                rule: RULE_NAMED_ANNIHILATOR,
                witness: json!({ "window_start": s, "pattern": w.to_string() }),
            });
        }
    }
    None
}

fn find_annihilator_pair(p: &Perm) -> Option<ZeroCertificate> {
    for (phi_s, psi_s) in ANNIHILATOR_PAIRS {
        let phi: Perm = phi_s.parse().unwrap();
        let psi: Perm = psi_s.parse().unwrap();
        for (sym, (phi_img, psi_img)) in
            phi.symmetries().into_iter().zip(psi.symmetries()).enumerate()
        {
            let first = matching_windows(p, &phi_img);
            if first.is_empty() {
                continue;
            }
            let second = matching_windows(p, &psi_img);
            let (la, lb) = (phi_img.len(), psi_img.len());
            for &a in &first {
                for &b in &second {
                    if a + la <= b || b + lb <= a {
                        return Some(ZeroCertificate {
                            rule: RULE_ANNIHILATOR_PAIR,
                            witness: json!({
                                "pair": [phi_s, psi_s],
                                "symmetry": sym,
                                "starts": [a, b],
                            }),
                        });
                    }
                }
            }
        }
    }
    None
}

/// Vanishing certificate for μ[1, p]; absence proves nothing. Linear-time
/// detectors run first, interval-copy searches only up to the window cap.
pub fn zero_test(p: &Perm) -> Option<ZeroCertificate> {
    if p.len() < 3 {
        return None;
    }
    if let Some(cert) = long_corner_certificate(p) {
        return Some(cert);
    }
    let report = p.adjacency_report();
    match report.longest_monotone_interval {
        3 => {
            return Some(ZeroCertificate {
                rule: RULE_TRIPLE_ADJACENCY,
                witness: json!({ "run_length": 3 }),
            })
        }
        r if r >= 4 => {
            return Some(ZeroCertificate {
                rule: RULE_MONOTONE_INTERVAL,
                witness: json!({ "run_length": r }),
            })
        }
        _ => {}
    }
    if report.has_opposing() {
        return Some(ZeroCertificate {
            rule: RULE_OPPOSING_ADJACENCIES,
            witness: json!({
                "up_position": report.up_positions[0],
                "down_position": report.down_positions[0],
            }),
        });
    }
    if p.len() <= WINDOW_RULE_CAP {
        if let Some(cert) = find_sum_plus_one(p) {
            return Some(cert);
        }
        if let Some(cert) = find_named_annihilator(p) {
            return Some(cert);
        }
        if let Some(cert) = find_annihilator_pair(p) {
            return Some(cert);
        }
    }
    None
}

/// All splits δ₁ ⊕ δ₂ of windows of `sigma`, deduplicated. A candidate
/// (α, β) is admissible only when no split satisfies δ₁ ≤ α and δ₂ ≤ β.
fn sigma_split_pairs(sigma: &Perm) -> Vec<(Perm, Perm)> {
    let mut out: Vec<(Perm, Perm)> = Vec::new();
    for (start, len) in windows(sigma, 2) {
        let w = window_pattern(sigma, start, len);
        let Ok(dec) = w.finest_decomposition(SumKind::Direct) else {
            continue;
        };
        let m = dec.parts.len();
        for cut in 1..m {
            out.push((dec.recompose_range(0, cut), dec.recompose_range(cut, m)));
        }
    }
    out.sort();
    out.dedup();
    out
}

fn find_sigma_annihilator(sigma: &Perm, p: &Perm) -> Option<ZeroCertificate> {
    let splits = sigma_split_pairs(sigma);
    let mut seen: HashSet<(Perm, Perm)> = HashSet::new();
    for (start, len) in windows(p, 3) {
        let w = window_pattern(p, start, len);
        let Ok(dec) = w.finest_decomposition(SumKind::Direct) else {
            continue;
        };
        let m = dec.parts.len();
        for i in 1..m.saturating_sub(1) {
            if dec.parts[i].len() != 1 {
                continue;
            }
            let alpha = dec.recompose_range(0, i);
            let beta = dec.recompose_range(i + 1, m);
            if !seen.insert((alpha.clone(), beta.clone())) {
                continue;
            }
            let dirty = splits
                .iter()
                .any(|(d1, d2)| contains(d1, &alpha) && contains(d2, &beta));
            if !dirty {
                return Some(ZeroCertificate {
                    rule: RULE_SIGMA_ANNIHILATOR,
                    witness: json!({
                        "window_start": start,
                        "window_len": len,
                        "alpha": alpha.to_string(),
                        "beta": beta.to_string(),
                    }),
                });
            }
        }
    }
    None
}

fn find_symmetry_1243(sigma: &Perm, p: &Perm) -> Option<ZeroCertificate> {
    if !sigma.adjacency_report().is_adjacency_free() {
        return None;
    }
    let n = p.len();
    if n < 4 {
        return None;
    }
    let orbit = orbit_1243();
    for s in 0..=n - 4 {
        let seg = &p.vals()[s..s + 4];
        let lo = *seg.iter().min().unwrap();
        let hi = *seg.iter().max().unwrap();
        if hi - lo != 3 {
            continue;
        }
        let w = Perm::pattern_of(seg);
        if orbit.contains(&w) {
            return Some(ZeroCertificate {
                rule: RULE_SYMMETRY_1243_INTERVAL,
                witness: json!({ "window_start": s, "pattern": w.to_string() }),
            });
        }
    }
    None
}

/// Vanishing certificate for μ[σ, p], sound for arbitrary σ: a window
/// α⊕1⊕β of `p` whose shoulders cannot both swallow any split window of σ,
/// or a window ordered like a symmetry of 1243 when σ is adjacency-free.
pub fn sigma_zero_test(sigma: &Perm, p: &Perm) -> Option<ZeroCertificate> {
    if p.len() <= WINDOW_RULE_CAP {
        if let Some(cert) = find_sigma_annihilator(sigma, p) {
            return Some(cert);
        }
    }
    find_symmetry_1243(sigma, p)
}

/// μ[σ, inflate(σ, parts)] for adjacency-free σ and parts drawn from
/// {1, 12, 21}, at least one doubled: the interval is a Boolean algebra
/// and the value is (−1) to the number of doubled parts.
pub fn boolean_inflation_mobius(sigma: &Perm, parts: &[Perm]) -> Result<i64> {
    if sigma.is_empty() {
        return Err(Error::InvalidParam("inflation base must be nonempty".into()));
    }
    if !sigma.adjacency_report().is_adjacency_free() {
        return Err(Error::InvalidParam(format!(
            "{sigma} has an adjacency; the Boolean interval argument needs none"
        )));
    }
    if parts.len() != sigma.len() {
        return Err(Error::InvalidParam(format!(
            "need {} parts, got {}",
            sigma.len(),
            parts.len()
        )));
    }
    let twelve: Perm = "12".parse().unwrap();
    let twentyone: Perm = "21".parse().unwrap();
    let mut doubled = 0usize;
    for part in parts {
        if *part == Perm::one() {
            continue;
        }
        if *part == twelve || *part == twentyone {
            doubled += 1;
        } else {
            return Err(Error::InvalidParam(format!(
                "part {part} is not one of 1, 12, 21"
            )));
        }
    }
    if doubled == 0 {
        return Err(Error::InvalidParam(
            "at least one part must differ from 1".into(),
        ));
    }
    Ok(if doubled % 2 == 0 { 1 } else { -1 })
}
