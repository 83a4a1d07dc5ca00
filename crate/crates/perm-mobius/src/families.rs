//! Symbolic constructors for the named permutation families: increasing
//! oscillations, 2413-balloons and generalized i,j-balloons, wedges, the
//! doubling sequence π⁽ⁿ⁾, κ_n, wedge simples, nearly exceptional simples,
//! and simple parallel alternations.

use serde::Serialize;

use crate::perm::{direct_sum, inflate, interleave, Perm};
use crate::{Error, Result};

/// Whether an increasing oscillation starts with a descent (W) or an
/// ascent (M).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OscShape {
    W,
    M,
}

/// Symbolic handle for an increasing oscillation; materialization is O(n)
/// and never required by the oscillation fast path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OscillationDescriptor {
    pub shape: OscShape,
    pub n: usize,
}

/// `⊞^k 21`: the tower of k copies of 21 under interleave, left to right.
pub fn nils_tower(k: usize) -> Result<Perm> {
    if k == 0 {
        return Err(Error::InvalidParam("tower needs k >= 1".into()));
    }
    increasing_oscillation(&OscillationDescriptor {
        shape: OscShape::W,
        n: 2 * k,
    })
}

/// Materialize `W_n` or `M_n`. For n ≤ 3 these are 1; 21/12; 312/231.
pub fn increasing_oscillation(d: &OscillationDescriptor) -> Result<Perm> {
    let n = d.n;
    if n == 0 {
        return Err(Error::InvalidParam("oscillation length must be >= 1".into()));
    }
    let w = match n {
        1 => Perm::one(),
        2 => match d.shape {
            OscShape::W => Perm::from_vals_unchecked(vec![2, 1]),
            OscShape::M => Perm::from_vals_unchecked(vec![1, 2]),
        },
        _ => {
            let mut vals = vec![0u32; n];
            let half = n.div_ceil(2);
            for i in 1..=half {
                let pos = 2 * i - 1;
                vals[pos - 1] = if n % 2 == 0 {
                    if i < half { 2 * i as u32 + 1 } else { n as u32 }
                } else if i < half {
                    2 * i as u32 + 1
                } else {
                    n as u32 - 1
                };
            }
            for j in 1..=n / 2 {
                let pos = 2 * j;
                vals[pos - 1] = if j == 1 { 1 } else { 2 * j as u32 - 2 };
            }
            Perm::from_vals_unchecked(vals)
        }
    };
    Ok(match d.shape {
        OscShape::W => w,
        OscShape::M if n <= 2 => w,
        OscShape::M => w.inverse(),
    })
}

/// Insertion of `beta` between columns `i`,`i+1` and rows `j`,`j+1` of
/// `alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalloonSpec {
    pub alpha: Perm,
    pub beta: Perm,
    pub i: usize,
    pub j: usize,
}

impl BalloonSpec {
    pub fn new(alpha: Perm, beta: Perm, i: usize, j: usize) -> Result<Self> {
        if i > alpha.len() || j > alpha.len() {
            return Err(Error::InvalidParam(format!(
                "balloon indexes ({i},{j}) out of range for |alpha| = {}",
                alpha.len()
            )));
        }
        Ok(BalloonSpec { alpha, beta, i, j })
    }
}

/// The generalized balloon, evaluated exactly from its case formula: alpha
/// points left of column i keep their position, alpha values at most j keep
/// their value, beta lands in the opened window.
pub fn balloon(spec: &BalloonSpec) -> Result<Perm> {
    let a = spec.alpha.len();
    let b = spec.beta.len();
    let (i, j) = (spec.i, spec.j);
    if i > a || j > a {
        return Err(Error::InvalidParam(format!(
            "balloon indexes ({i},{j}) out of range for |alpha| = {a}"
        )));
    }
    let mut vals = Vec::with_capacity(a + b);
    for x in 1..=a + b {
        let v = if x <= i {
            let av = spec.alpha.vals()[x - 1] as usize;
            if av <= j {
                av
            } else {
                av + b
            }
        } else if x <= i + b {
            spec.beta.vals()[x - i - 1] as usize + j
        } else {
            let av = spec.alpha.vals()[x - b - 1] as usize;
            if av <= j {
                av
            } else {
                av + b
            }
        };
        vals.push(v as u32);
    }
    Perm::from_vals(vals)
}

/// `beta` inserted into the centre of 2413; length `|beta| + 4`.
pub fn balloon_2413(beta: &Perm) -> Result<Perm> {
    if beta.is_empty() {
        return Err(Error::InvalidParam("2413-balloon needs a nonempty core".into()));
    }
    let skeleton: Perm = "25314".parse().expect("static one-line text");
    let parts = vec![
        Perm::one(),
        Perm::one(),
        beta.clone(),
        Perm::one(),
        Perm::one(),
    ];
    inflate(&skeleton, &parts)
}

/// `beta` wedged after the first `k` points of `alpha`, above all of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeSpec {
    pub alpha: Perm,
    pub beta: Perm,
    pub k: usize,
}

impl WedgeSpec {
    pub fn new(alpha: Perm, beta: Perm, k: usize) -> Result<Self> {
        if k > alpha.len() {
            return Err(Error::InvalidParam(format!(
                "wedge split {k} out of range for |alpha| = {}",
                alpha.len()
            )));
        }
        Ok(WedgeSpec { alpha, beta, k })
    }

    pub fn to_balloon(&self) -> BalloonSpec {
        BalloonSpec {
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            i: self.k,
            j: self.alpha.len(),
        }
    }
}

/// Materialize a wedge: first `k` points of alpha, then beta shifted above
/// alpha, then the rest of alpha.
pub fn wedge(spec: &WedgeSpec) -> Result<Perm> {
    let a = spec.alpha.len() as u32;
    if spec.k > spec.alpha.len() {
        return Err(Error::InvalidParam(format!(
            "wedge split {} out of range for |alpha| = {a}",
            spec.k
        )));
    }
    let mut vals: Vec<u32> = spec.alpha.vals()[..spec.k].to_vec();
    vals.extend(spec.beta.vals().iter().map(|&v| v + a));
    vals.extend(&spec.alpha.vals()[spec.k..]);
    Perm::from_vals(vals)
}

/// The doubling sequence: 1, 12, 132, 2413, then 2413-balloons of four back.
pub fn pi_sequence(n: usize) -> Result<Perm> {
    match n {
        0 => Err(Error::InvalidParam("pi sequence starts at n = 1".into())),
        1 => Ok(Perm::one()),
        2 => Ok("12".parse().expect("static")),
        3 => Ok("132".parse().expect("static")),
        4 => Ok("2413".parse().expect("static")),
        _ => balloon_2413(&pi_sequence(n - 4)?),
    }
}

/// κ_n, length 4n: a chunk of odd-offset values, an alternating middle, and
/// a chunk of even-offset values.
pub fn kappa(n: usize) -> Result<Perm> {
    if n < 2 {
        return Err(Error::InvalidParam(
            "kappa needs n >= 2; the chunk layout degenerates below that".into(),
        ));
    }
    let n = n as u32;
    let mut vals = Vec::with_capacity(4 * n as usize);
    vals.extend((0..n).map(|t| n + 1 + 2 * t));
    for i in 1..=n {
        vals.push(i);
        vals.push(3 * n + i);
    }
    vals.extend((0..n).map(|t| n + 2 + 2 * t));
    Perm::from_vals(vals)
}

/// Type 1 or type 2 wedge simple of length n.
pub fn wedge_simple(kind: u8, n: usize) -> Result<Perm> {
    if n <= 3 {
        return Err(Error::InvalidParam("wedge simples need n > 3".into()));
    }
    let n32 = n as u32;
    let vals: Vec<u32> = match (kind, n % 2 == 0) {
        // 3,5,…,n−1, 1, n,n−2,…,2
        (1, true) => (3..n32).step_by(2).chain([1]).chain((2..=n32).rev().step_by(2)).collect(),
        // 3,5,…,n, 1, n−1,n−3,…,2
        (1, false) => (3..=n32).step_by(2).chain([1]).chain((2..n32).rev().step_by(2)).collect(),
        // 2,4,…,n−2, n, n−3,n−5,…,1, n−1
        (2, true) => {
            let mut v: Vec<u32> = (2..n32).step_by(2).collect();
            v.push(n32);
            v.extend((1..=n32 - 3).rev().step_by(2));
            v.push(n32 - 1);
            v
        }
        // 2,4,…,n−3, n, n−2,n−4,…,1, n−1
        (2, false) => {
            let mut v: Vec<u32> = (2..n32 - 2).step_by(2).collect();
            v.push(n32);
            v.extend((1..=n32 - 2).rev().step_by(2));
            v.push(n32 - 1);
            v
        }
        _ => {
            return Err(Error::InvalidParam(format!(
                "wedge simple type must be 1 or 2, got {kind}"
            )))
        }
    };
    Perm::from_vals(vals)
}

/// E₁(2n, k): interleaved upper run n+1..2n with 1..k ascending then
/// n..k+1 descending.
pub fn nearly_exceptional_e1(len: usize, k: usize) -> Result<Perm> {
    if len % 2 != 0 || len < 6 {
        return Err(Error::InvalidParam("E1 needs even length >= 6".into()));
    }
    let n = len / 2;
    if k == 0 || k > n - 2 {
        return Err(Error::InvalidParam(format!(
            "E1 needs 1 <= k <= {}, got {k}",
            n - 2
        )));
    }
    let mut vals = Vec::with_capacity(len);
    for i in 1..=n {
        vals.push((n + i) as u32);
        let low = if i <= k { i } else { n - i + k + 1 };
        vals.push(low as u32);
    }
    Perm::from_vals(vals)
}

/// E₂(2n): pairs (n+i−1, i), then the fixed tail 2n−2, 2n, n−1, 2n−1.
pub fn nearly_exceptional_e2(len: usize) -> Result<Perm> {
    if len % 2 != 0 || len < 6 {
        return Err(Error::InvalidParam("E2 needs even length >= 6".into()));
    }
    let n = len / 2;
    let mut vals = Vec::with_capacity(len);
    for i in 1..=n - 2 {
        vals.push((n + i - 1) as u32);
        vals.push(i as u32);
    }
    vals.push(2 * n as u32 - 2);
    vals.push(2 * n as u32);
    vals.push(n as u32 - 1);
    vals.push(2 * n as u32 - 1);
    Perm::from_vals(vals)
}

/// O(2n+1, k): ascending run n−k+1..2n−k+1 at odd positions; even positions
/// take 2n+1 downward for k steps, then n−k downward to 1.
pub fn nearly_exceptional_o(len: usize, k: usize) -> Result<Perm> {
    if len % 2 != 1 || len < 5 {
        return Err(Error::InvalidParam("O needs odd length >= 5".into()));
    }
    let n = (len - 1) / 2;
    if k == 0 || k > n - 1 {
        return Err(Error::InvalidParam(format!(
            "O needs 1 <= k <= {}, got {k}",
            n - 1
        )));
    }
    let mut vals = Vec::with_capacity(len);
    for i in 1..=n {
        vals.push((n - k + i) as u32);
        let even = if i <= k { 2 * n + 2 - i } else { n - i + 1 };
        vals.push(even as u32);
    }
    vals.push((2 * n - k + 1) as u32);
    Perm::from_vals(vals)
}

/// Simple parallel alternation 2,4,…,n,1,3,…,n−1 of even length n.
pub fn parallel_alternation(len: usize) -> Result<Perm> {
    if len % 2 != 0 || len == 0 {
        return Err(Error::InvalidParam("parallel alternation needs even length".into()));
    }
    let mut vals: Vec<u32> = (1..=len as u32 / 2).map(|i| 2 * i).collect();
    vals.extend((1..=len as u32 / 2).map(|i| 2 * i - 1));
    Perm::from_vals(vals)
}

/// Slow reference build of an oscillation by folding interleaves; used to
/// cross-check the O(n) materialization.
pub fn increasing_oscillation_by_fold(d: &OscillationDescriptor) -> Result<Perm> {
    let n = d.n;
    if n == 0 {
        return Err(Error::InvalidParam("oscillation length must be >= 1".into()));
    }
    if n == 1 {
        return Ok(Perm::one());
    }
    if n == 2 {
        return increasing_oscillation(d);
    }
    let tower = |k: usize| -> Result<Perm> {
        let two_one: Perm = "21".parse().expect("static");
        let mut acc = two_one.clone();
        for _ in 1..k {
            acc = interleave(&acc, &two_one)?;
        }
        Ok(acc)
    };
    let one = Perm::one();
    Ok(match (d.shape, n % 2) {
        (OscShape::W, 0) => tower(n / 2)?,
        (OscShape::W, _) => interleave(&tower((n - 1) / 2)?, &one)?,
        (OscShape::M, 1) => interleave(&one, &tower((n - 1) / 2)?)?,
        (OscShape::M, _) => interleave(&interleave(&one, &tower(n / 2 - 1)?)?, &one)?,
    })
}

/// Direct sum of `r` copies of `alpha`.
pub fn repeated_direct_sum(alpha: &Perm, r: usize) -> Perm {
    let mut acc = Perm::empty();
    for _ in 0..r {
        acc = direct_sum(&acc, alpha);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    fn osc(shape: OscShape, n: usize) -> Perm {
        increasing_oscillation(&OscillationDescriptor { shape, n }).unwrap()
    }

    #[test]
    fn oscillation_small_and_published_values() {
        assert_eq!(osc(OscShape::W, 1), p("1"));
        assert_eq!(osc(OscShape::M, 1), p("1"));
        assert_eq!(osc(OscShape::W, 2), p("21"));
        assert_eq!(osc(OscShape::M, 2), p("12"));
        assert_eq!(osc(OscShape::W, 3), p("312"));
        assert_eq!(osc(OscShape::M, 3), p("231"));
        assert_eq!(osc(OscShape::W, 4), p("3142"));
        assert_eq!(osc(OscShape::M, 4), p("2413"));
        assert_eq!(osc(OscShape::M, 5), p("24153"));
        assert_eq!(osc(OscShape::W, 9), p("315274968"));
        assert_eq!(nils_tower(3).unwrap(), p("315264"));
    }

    #[test]
    fn oscillation_matches_interleave_fold() {
        for n in 1..=30 {
            for shape in [OscShape::W, OscShape::M] {
                let d = OscillationDescriptor { shape, n };
                assert_eq!(
                    increasing_oscillation(&d).unwrap(),
                    increasing_oscillation_by_fold(&d).unwrap(),
                    "shape {shape:?} n {n}"
                );
            }
        }
    }

    #[test]
    fn oscillation_w_is_inverse_of_m() {
        for n in 4..=30 {
            assert_eq!(osc(OscShape::W, n), osc(OscShape::M, n).inverse());
        }
    }

    #[test]
    fn oscillations_are_simple() {
        for n in 4..=30 {
            assert!(osc(OscShape::W, n).is_simple(), "W {n}");
            assert!(osc(OscShape::M, n).is_simple(), "M {n}");
        }
    }

    #[test]
    fn balloon_2413_examples() {
        assert_eq!(balloon_2413(&p("21")).unwrap(), p("264315"));
        assert_eq!(balloon_2413(&p("1")).unwrap(), p("25314"));
        assert_eq!(balloon_2413(&p("2413")).unwrap(), p("28463517"));
        assert!(balloon_2413(&Perm::empty()).is_err());
    }

    #[test]
    fn generalized_balloon_matches_case_formula() {
        // Center insertion into 2413 coincides with the dedicated builder.
        for beta in ["1", "21", "132", "2413"] {
            let beta = p(beta);
            let spec = BalloonSpec::new(p("2413"), beta.clone(), 2, 2).unwrap();
            assert_eq!(balloon(&spec).unwrap(), balloon_2413(&beta).unwrap());
        }
        // Literal evaluation at indexes (0,0) puts beta bottom-left.
        let spec = BalloonSpec::new(p("21"), p("1"), 0, 0).unwrap();
        assert_eq!(balloon(&spec).unwrap(), p("132"));
        // The 21-point witness construction.
        let alpha = p("4,6,3,5,8,9,2,12,10,13,11,7,1");
        let beta = p("24137586");
        let spec = BalloonSpec::new(alpha, beta, 5, 8).unwrap();
        assert_eq!(
            balloon(&spec).unwrap(),
            p("4,6,3,5,8,10,12,9,11,15,13,16,14,17,2,20,18,21,19,7,1")
        );
        assert!(BalloonSpec::new(p("21"), p("1"), 3, 0).is_err());
    }

    #[test]
    fn wedge_examples() {
        let w = |a: &str, b: &str, k: usize| wedge(&WedgeSpec::new(p(a), p(b), k).unwrap()).unwrap();
        assert_eq!(w("21", "21", 1), p("2431"));
        assert_eq!(w("21", "1", 1), p("231"));
        assert_eq!(w("21", "132", 2), p("21354"));
        assert_eq!(w("312", "21", 0), p("54312"));
        // Split at |alpha| is the direct sum; split at 0 the skew sum.
        assert_eq!(w("2413", "21", 4), p("241365"));
        for (a, b, k) in [("21", "21", 1), ("2413", "132", 2)] {
            let spec = WedgeSpec::new(p(a), p(b), k).unwrap();
            assert_eq!(wedge(&spec).unwrap(), balloon(&spec.to_balloon()).unwrap());
        }
    }

    #[test]
    fn pi_sequence_values() {
        assert_eq!(pi_sequence(5).unwrap(), p("25314"));
        assert_eq!(pi_sequence(8).unwrap(), p("28463517"));
        assert_eq!(
            pi_sequence(21).unwrap(),
            p("2,21,4,19,6,17,8,15,10,13,11,9,12,7,14,5,16,3,18,1,20")
        );
        // Stripping the outer four extremal points recovers four back.
        let big = pi_sequence(13).unwrap();
        let inner: Vec<u32> = big.vals()[2..11].iter().map(|&v| v - 2).collect();
        assert_eq!(Perm::from_vals(inner).unwrap(), pi_sequence(9).unwrap());
    }

    #[test]
    fn kappa_values() {
        assert_eq!(kappa(2).unwrap(), p("35172846"));
        let k3 = kappa(3).unwrap();
        assert_eq!(k3.len(), 12);
        assert_eq!(k3, p("4,6,8,1,10,2,11,3,12,5,7,9"));
        assert!(kappa(1).is_err());
    }

    #[test]
    fn wedge_simple_values() {
        assert_eq!(wedge_simple(1, 10).unwrap(), p("3,5,7,9,1,10,8,6,4,2"));
        assert_eq!(wedge_simple(1, 5).unwrap(), p("35142"));
        assert_eq!(wedge_simple(2, 10).unwrap(), p("2,4,6,8,10,7,5,3,1,9"));
        assert_eq!(wedge_simple(2, 5).unwrap(), p("25314"));
        assert!(wedge_simple(1, 3).is_err());
        assert!(wedge_simple(3, 8).is_err());
    }

    #[test]
    fn nearly_exceptional_values() {
        assert_eq!(nearly_exceptional_e1(10, 2).unwrap(), p("6,1,7,2,8,5,9,4,10,3"));
        assert_eq!(nearly_exceptional_e2(10).unwrap(), p("5,1,6,2,7,3,8,10,4,9"));
        assert_eq!(nearly_exceptional_o(11, 2).unwrap(), p("4,11,5,10,6,3,7,2,8,1,9"));
        assert!(nearly_exceptional_e1(10, 4).is_err());
        assert!(nearly_exceptional_e1(9, 1).is_err());
        assert!(nearly_exceptional_o(11, 5).is_err());
    }

    #[test]
    fn parallel_alternation_values() {
        assert_eq!(parallel_alternation(4).unwrap(), p("2413"));
        assert_eq!(parallel_alternation(8).unwrap(), p("24681357"));
        assert!(parallel_alternation(5).is_err());
    }

    #[test]
    fn family_members_are_simple() {
        for n in [4, 5, 8, 9, 12] {
            assert!(wedge_simple(1, n).unwrap().is_simple(), "W1({n})");
            assert!(wedge_simple(2, n).unwrap().is_simple(), "W2({n})");
        }
        for len in [6, 8, 10, 12] {
            assert!(nearly_exceptional_e2(len).unwrap().is_simple(), "E2({len})");
            for k in 1..=len / 2 - 2 {
                assert!(nearly_exceptional_e1(len, k).unwrap().is_simple(), "E1({len},{k})");
            }
        }
        for len in [5, 7, 9, 11] {
            for k in 1..=(len - 1) / 2 - 1 {
                assert!(nearly_exceptional_o(len, k).unwrap().is_simple(), "O({len},{k})");
            }
        }
        for len in [4, 6, 8, 10] {
            assert!(parallel_alternation(len).unwrap().is_simple(), "paralt({len})");
        }
    }

    #[test]
    fn parallel_alternation_has_one_descent() {
        for len in [4, 6, 8, 10, 12] {
            let pa = parallel_alternation(len).unwrap();
            let descents = pa
                .vals()
                .windows(2)
                .filter(|w| w[0] > w[1])
                .count();
            assert_eq!(descents, 1, "paralt({len})");
        }
    }

    #[test]
    fn balloon_nesting_property() {
        // The inserted block occupies the declared window as an interval.
        let specs = [
            BalloonSpec::new(p("2413"), p("132"), 2, 2).unwrap(),
            BalloonSpec::new(p("25314"), p("21"), 1, 3).unwrap(),
            BalloonSpec::new(p("312"), p("2413"), 3, 0).unwrap(),
        ];
        for spec in specs {
            let pi = balloon(&spec).unwrap();
            let b = spec.beta.len();
            let window = &pi.vals()[spec.i..spec.i + b];
            assert_eq!(Perm::pattern_of(window), spec.beta, "{spec:?}");
            let lo = *window.iter().min().unwrap();
            let hi = *window.iter().max().unwrap();
            assert_eq!((hi - lo) as usize, b - 1, "{spec:?}");
            assert_eq!(lo as usize, spec.j + 1, "{spec:?}");
        }
    }
}
