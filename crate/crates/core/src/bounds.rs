//! Closed-form bounds, distance criteria, and the coincidence-set analysis
//! behind the restricted-separation bound.
//!
//! Every comparison here is exact integer arithmetic.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::codes::Code;
use crate::error::{Error, Result};

fn pow_checked(base: u128, exp: u64) -> Result<u128> {
    let exp = u32::try_from(exp).map_err(|_| Error::BadParameters("exponent too large".into()))?;
    base.checked_pow(exp)
        .ok_or_else(|| Error::BadParameters(format!("{base}^{exp} overflows")))
}

/// `2^floor((n - w + 2) / 2) + w - 2`, the size limit for restricted
/// (w, w)-separating codes of length n.
pub fn thm4_bound(n: u64, w: u64) -> Result<u128> {
    if w < 3 {
        return Err(Error::BadParameters(format!("need w >= 3, got {w}")));
    }
    if n + 2 < w {
        return Err(Error::BadParameters(format!("need n >= w - 2, got n = {n}, w = {w}")));
    }
    Ok(pow_checked(2, (n + 2 - w) / 2)? + (w - 2) as u128)
}

/// `(2w^2 - 3w + 2) q^ceil(n / (2w - 1)) - 2w^2 + 3w - 1` for w-SFP codes.
pub fn sfp_bound(q: u64, n: u64, w: u64) -> Result<u128> {
    if w < 2 {
        return Err(Error::BadParameters(format!("need w >= 2, got {w}")));
    }
    let w = w as u128;
    let lead = 2 * w * w - 3 * w + 2;
    let power = pow_checked(q as u128, n.div_ceil(2 * w as u64 - 1))?;
    let top = lead
        .checked_mul(power)
        .ok_or_else(|| Error::BadParameters("bound overflows".into()))?;
    Ok(top + 3 * w - 1 - 2 * w * w)
}

/// `q^ceil(n / (w1 w2))`, the conjectured size limit for separating
/// Reed-Solomon codes.
pub fn optimal_rs_bound(q: u64, n: u64, w1: u64, w2: u64) -> Result<u128> {
    if w1 * w2 < 2 {
        return Err(Error::BadParameters("need w1 * w2 >= 2".into()));
    }
    pow_checked(q as u128, n.div_ceil(w1 * w2))
}

/// `d > n (1 - 1/(w1 w2))`, i.e. `d w1 w2 > n (w1 w2 - 1)`.
pub fn distance_sufficient(n: u64, d: u64, w1: u64, w2: u64) -> bool {
    let w = w1 as u128 * w2 as u128;
    d as u128 * w > n as u128 * (w - 1)
}

/// `d > n (1 - 1/w^2)`.
pub fn distance_sufficient_ipp(n: u64, d: u64, w: u64) -> bool {
    distance_sufficient(n, d, w, w)
}

/// Smallest Reed-Solomon dimension over F_q breaking the conjectured bound:
/// `ceil((q - 1) / (w1 w2)) + 1`.
pub fn conjecture_k_star(q: u64, w1: u64, w2: u64) -> Result<u64> {
    if q < 3 || w1 * w2 < 2 {
        return Err(Error::BadParameters(format!("need q >= 3 and w1 w2 >= 2, got q={q}, w1={w1}, w2={w2}")));
    }
    Ok((q - 1).div_ceil(w1 * w2) + 1)
}

/// The bounds and thresholds that apply to one parameter point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub q: u64,
    pub n: u64,
    pub w1: u64,
    pub w2: u64,
    /// Only for `w1 = w2 >= 3`.
    pub thm4_bound: Option<u128>,
    /// Only for `w1 = w2 >= 2`.
    pub sfp_bound: Option<u128>,
    pub optimal_rs_bound: u128,
    /// `n (1 - 1/w1^2)`, the distance above which a code is w1-IPP.
    pub ipp_distance_threshold: Ratio<u64>,
    /// `n (1 - 1/(w1 w2))`, the distance above which a code separates.
    pub separation_distance_threshold: Ratio<u64>,
    /// Only when `n = q - 1` and `q >= 3`.
    pub conjecture_k_star: Option<u64>,
}

pub fn bound_report(q: u64, n: u64, w1: u64, w2: u64) -> Result<BoundReport> {
    if w1 == 0 || w2 == 0 || w1 * w2 < 2 {
        return Err(Error::BadParameters("need w1, w2 >= 1 and w1 w2 >= 2".into()));
    }
    let symmetric = w1 == w2;
    let w = w1 * w2;
    Ok(BoundReport {
        q,
        n,
        w1,
        w2,
        thm4_bound: if symmetric && w1 >= 3 && n + 2 >= w1 {
            Some(thm4_bound(n, w1)?)
        } else {
            None
        },
        sfp_bound: if symmetric { sfp_bound(q, n, w1).ok() } else { None },
        optimal_rs_bound: optimal_rs_bound(q, n, w1, w2)?,
        ipp_distance_threshold: Ratio::new(n * (w1 * w1 - 1), w1 * w1),
        separation_distance_threshold: Ratio::new(n * (w - 1), w),
        conjecture_k_star: if n + 1 == q && q >= 3 {
            Some(conjecture_k_star(q, w1, w2)?)
        } else {
            None
        },
    })
}

impl BoundReport {
    /// Plain-text table.
    pub fn render(&self) -> String {
        let opt = |v: Option<u128>| v.map_or("n/a".to_string(), |x| x.to_string());
        let mut out = String::new();
        out.push_str(&format!("parameters        q={} n={} w1={} w2={}\n", self.q, self.n, self.w1, self.w2));
        out.push_str(&format!("thm4              {}\n", opt(self.thm4_bound)));
        out.push_str(&format!("sfp               {}\n", opt(self.sfp_bound)));
        out.push_str(&format!("optimal_rs        {}\n", self.optimal_rs_bound));
        out.push_str(&format!("ipp_distance      > {}\n", self.ipp_distance_threshold));
        out.push_str(&format!("separation_dist   > {}\n", self.separation_distance_threshold));
        out.push_str(&format!(
            "k_star            {}\n",
            self.conjecture_k_star.map_or("n/a".to_string(), |k| k.to_string())
        ));
        out
    }
}

/// A failure of one of the five coincidence-set properties, with the word
/// indices involved (`[y, z]` or `[y, z, t]`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PropertyViolation {
    pub property: u8,
    pub words: Vec<usize>,
}

/// Coincidence structure of a code relative to a (w-2)-subset `U`.
///
/// Coordinates are 0-based. `s` is the set of coordinates where all words of
/// `U` agree; `gamma[j]` is `(y, Γ(y))` where `Γ(y)` collects the coordinates
/// of `s` on which `y` agrees with the first word of `U`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaAnalysis {
    pub u: Vec<usize>,
    pub s: Vec<usize>,
    pub gamma: Vec<(usize, Vec<usize>)>,
    pub violations: Vec<PropertyViolation>,
    /// Whether `|s| <= n - w + 2`.
    pub coincidence_within_bound: bool,
}

impl GammaAnalysis {
    pub fn violations_of(&self, property: u8) -> impl Iterator<Item = &PropertyViolation> {
        self.violations.iter().filter(move |v| v.property == property)
    }
}

fn mask_to_vec(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// Computes `S`, every `Γ(y)` for `y` outside `U`, and checks over all
/// distinct `y, z, t`:
/// 1. `Γ(y) ∩ Γ(z)` is nonempty;
/// 2. `Γ(y)` is not a subset of `Γ(z)`;
/// 3. `Γ(y) ∩ Γ(z) ≠ S`;
/// 4. `Γ(y) ∩ Γ(z)` is not a subset of `Γ(t)`;
/// 5. `Γ(t)` is not a subset of `Γ(y) ∪ Γ(z)`.
pub fn gamma_analysis(code: &Code, w: usize, u: &[usize]) -> Result<GammaAnalysis> {
    if w < 3 || u.len() != w - 2 {
        return Err(Error::BadParameters(format!("need |U| = w - 2 >= 1, got |U| = {}, w = {w}", u.len())));
    }
    if code.n() > 64 {
        return Err(Error::BadParameters("length above 64".into()));
    }
    let mut u: Vec<usize> = u.to_vec();
    u.sort_unstable();
    u.dedup();
    if u.len() != w - 2 || u.iter().any(|&i| i >= code.size()) {
        return Err(Error::BadParameters("U must be distinct word indices".into()));
    }
    let anchor = code.word(u[0]);
    let s_mask = (0..code.n())
        .filter(|&i| u.iter().all(|&j| code.word(j).0[i] == anchor.0[i]))
        .fold(0u64, |m, i| m | 1 << i);
    if s_mask == 0 {
        return Err(Error::NoCoincidence);
    }
    let rest: Vec<usize> = (0..code.size()).filter(|i| !u.contains(i)).collect();
    let gamma: Vec<u64> = rest
        .iter()
        .map(|&y| {
            let word = code.word(y);
            mask_to_vec(s_mask)
                .into_iter()
                .filter(|&i| word.0[i] == anchor.0[i])
                .fold(0u64, |m, i| m | 1 << i)
        })
        .collect();

    let subset = |a: u64, b: u64| a & !b == 0;
    let mut violations = Vec::new();
    let r = rest.len();
    for a in 0..r {
        for b in 0..r {
            if a == b {
                continue;
            }
            let (gy, gz) = (gamma[a], gamma[b]);
            if subset(gy, gz) {
                violations.push(PropertyViolation { property: 2, words: vec![rest[a], rest[b]] });
            }
            if a > b {
                continue;
            }
            if gy & gz == 0 {
                violations.push(PropertyViolation { property: 1, words: vec![rest[a], rest[b]] });
            }
            if gy & gz == s_mask {
                violations.push(PropertyViolation { property: 3, words: vec![rest[a], rest[b]] });
            }
            for c in 0..r {
                if c == a || c == b {
                    continue;
                }
                let gt = gamma[c];
                if subset(gy & gz, gt) {
                    violations.push(PropertyViolation { property: 4, words: vec![rest[a], rest[b], rest[c]] });
                }
                if subset(gt, gy | gz) {
                    violations.push(PropertyViolation { property: 5, words: vec![rest[a], rest[b], rest[c]] });
                }
            }
        }
    }
    violations.sort();

    let n = code.n() as u64;
    Ok(GammaAnalysis {
        s: mask_to_vec(s_mask),
        gamma: rest.iter().zip(&gamma).map(|(&y, &g)| (y, mask_to_vec(g))).collect(),
        violations,
        coincidence_within_bound: (s_mask.count_ones() as u64) + (w as u64) <= n + 2,
        u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thm4_values() {
        assert_eq!(thm4_bound(10, 3).unwrap(), 17);
        assert_eq!(thm4_bound(7, 3).unwrap(), 9);
        assert_eq!(thm4_bound(5, 4).unwrap(), 4);
        assert!(thm4_bound(5, 2).is_err());
        assert!(thm4_bound(1, 4).is_err());
    }

    #[test]
    fn sfp_values() {
        assert_eq!(sfp_bound(2, 5, 2).unwrap(), 13);
        assert_eq!(sfp_bound(3, 3, 2).unwrap(), 9);
        assert_eq!(sfp_bound(2, 9, 3).unwrap(), 34);
        assert!(sfp_bound(2, 9, 1).is_err());
    }

    #[test]
    fn rs_bound_values() {
        assert_eq!(optimal_rs_bound(7, 6, 2, 2).unwrap(), 49);
        assert_eq!(optimal_rs_bound(4, 3, 2, 2).unwrap(), 4);
    }

    #[test]
    fn distance_criteria() {
        assert!(distance_sufficient(6, 5, 2, 2));
        assert!(!distance_sufficient(6, 4, 2, 2));
        assert!(distance_sufficient_ipp(4, 4, 2));
        // boundary: d w = n (w - 1) is not enough
        assert!(!distance_sufficient(4, 3, 2, 2));
    }

    #[test]
    fn k_star_values() {
        assert_eq!(conjecture_k_star(7, 2, 2).unwrap(), 3);
        assert_eq!(conjecture_k_star(8, 2, 2).unwrap(), 3);
        assert_eq!(conjecture_k_star(9, 3, 3).unwrap(), 2);
        assert_eq!(conjecture_k_star(16, 5, 4).unwrap(), 2);
        assert!(conjecture_k_star(2, 2, 2).is_err());
    }

    #[test]
    fn report_for_rs_seven() {
        let r = bound_report(7, 6, 2, 2).unwrap();
        assert_eq!(r.optimal_rs_bound, 49);
        assert_eq!(r.thm4_bound, None);
        assert_eq!(r.separation_distance_threshold, Ratio::new(9, 2));
        assert_eq!(r.conjecture_k_star, Some(3));
        assert!(r.render().contains("optimal_rs        49"));
    }

    #[test]
    fn gamma_on_three_words() {
        let code = Code::from_rows(3, vec![vec![0, 0, 0], vec![0, 1, 1], vec![0, 1, 2]]).unwrap();
        let g = gamma_analysis(&code, 3, &[0]).unwrap();
        assert_eq!(g.s, vec![0, 1, 2]);
        assert_eq!(g.gamma, vec![(1, vec![0]), (2, vec![0])]);
        assert_eq!(g.violations_of(1).count(), 0);
        assert!(g.violations_of(2).any(|v| v.words == vec![1, 2]));
    }

    #[test]
    fn gamma_needs_coincidence() {
        let code = Code::from_rows(2, vec![vec![0, 0], vec![1, 1], vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(gamma_analysis(&code, 4, &[0, 1]).unwrap_err(), Error::NoCoincidence);
        assert!(gamma_analysis(&code, 3, &[0, 1]).is_err());
    }
}
