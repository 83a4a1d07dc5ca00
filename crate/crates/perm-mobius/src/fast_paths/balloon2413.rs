//! Recognition and Möbius recursion for 2413-balloons: π = 25314[1,1,β,1,1],
//! whose principal Möbius value collapses to a four-case formula on β. The
//! masked sub-patterns that keep the whole β block drive the supporting
//! analysis, split into proper forms and those already explained by a
//! smaller balloon.

use crate::engines::checked_mul;
use crate::families::balloon_2413;
use crate::fast_paths::bjjs::MuCallback;
use crate::perm::Perm;
use crate::{Error, Result};

/// Largest β for which the improper-form search over deletion subsets runs.
const IMPROPER_SEARCH_CAP: usize = 9;

/// The inner β when p is a 2413-balloon: p starts 2, max and ends 1, max−1,
/// with everything between forming the shifted β block.
pub fn is_2413_balloon(p: &Perm) -> Option<Perm> {
    let n = p.len();
    if n < 5 {
        return None;
    }
    let v = p.vals();
    if v[0] != 2 || v[1] != n as u32 || v[n - 2] != 1 || v[n - 1] != n as u32 - 1 {
        return None;
    }
    let mid: Vec<u32> = v[2..n - 2].iter().map(|&x| x - 2).collect();
    Some(Perm::from_vals(mid).expect("interior of a balloon is a shifted permutation"))
}

/// μ[1, 25314[1,1,β,1,1]]: 4 when β = 1, −6 when β = 2413, twice the inner
/// value when β is itself a 2413-balloon, and the inner value otherwise.
pub fn balloon_2413_mobius(beta: &Perm, mu: MuCallback) -> Result<i64> {
    if beta.is_empty() {
        return Err(Error::InvalidParam("balloon interior must be nonempty".into()));
    }
    if beta.len() == 1 {
        return Ok(4);
    }
    if beta.vals() == [2, 4, 1, 3] {
        return Ok(-6);
    }
    let one = Perm::one();
    let inner = mu(&one, beta)?;
    if is_2413_balloon(beta).is_some() {
        checked_mul(2, inner)
    } else {
        Ok(inner)
    }
}

/// One masked sub-pattern of a balloon: which of the four bounding points
/// survive (bits in position order: 2, max, 1, max−1) and the permutation
/// they induce together with the full β block.
#[derive(Clone, Debug)]
pub struct BalloonReduction {
    pub used_reds: u8,
    pub perm: Perm,
}

fn red_positions(n: usize) -> [usize; 4] {
    [0, 1, n - 2, n - 1]
}

fn masked_form(pi: &Perm, mask: u8) -> Perm {
    let reds = red_positions(pi.len());
    let dropped: Vec<usize> = (0..4).filter(|&i| mask & (1 << i) == 0).map(|i| reds[i]).collect();
    pi.delete_points(&dropped)
}

/// The fifteen sub-patterns of the balloon over β that keep every β point
/// and a proper subset of the bounding points, in mask order. Masks can
/// repeat a permutation when β is monotone.
pub fn reductions_2413(beta: &Perm) -> Result<Vec<BalloonReduction>> {
    let pi = balloon_2413(beta)?;
    Ok((0u8..15)
        .map(|mask| BalloonReduction { used_reds: mask, perm: masked_form(&pi, mask) })
        .collect())
}

/// The masked forms already expressible through a balloon over some smaller
/// interior: β itself a balloon leaves only the bare β form, and each corner
/// of β (a minimum or maximum at either end) absorbs a bounding point.
pub fn improper_reductions_2413(beta: &Perm) -> Result<Vec<BalloonReduction>> {
    if beta.len() > IMPROPER_SEARCH_CAP {
        return Err(Error::Guard("improper-form search".into()));
    }
    let forms = reductions_2413(beta)?;
    Ok(forms
        .into_iter()
        .filter(|form| explained_by_smaller(&form.perm, beta.len()))
        .collect())
}

/// Whether σ equals a masked form of a balloon over some η shorter than β.
/// Such η must be σ with at most four points removed.
fn explained_by_smaller(sigma: &Perm, beta_len: usize) -> bool {
    let s = sigma.len();
    for drop_mask in 1u32..(1 << s) {
        let dropped = drop_mask.count_ones() as usize;
        if dropped > 4 {
            continue;
        }
        let eta_len = s - dropped;
        if eta_len == 0 || eta_len >= beta_len {
            continue;
        }
        let positions: Vec<usize> = (0..s).filter(|&i| drop_mask & (1 << i) != 0).collect();
        let eta = sigma.delete_points(&positions);
        let Ok(host) = balloon_2413(&eta) else { continue };
        for mask in 0u8..=15 {
            if mask.count_ones() as usize != dropped {
                continue;
            }
            if masked_form(&host, mask) == *sigma {
                return true;
            }
        }
    }
    false
}
