//! Exact deciders for separation, restricted separation and IPP.
//!
//! Descendant sets and feasible sets are coordinate-wise product sets, so two
//! of them meet iff they meet in every coordinate. The deciders enumerate the
//! coalitions of one side (the *driving* side, the one with the smaller size
//! budget, `U` on ties) and solve for the other side directly: for
//! descendant sets the partner is a set cover of the coordinates by the
//! words that hit the driver's projections, found by bitset search.
//!
//! Violations are reported deterministically as the smallest under the key
//! `(|D|, |P|, D, P)` where `D` is the driving coalition and `P` its partner,
//! both as ascending word-index lists compared lexicographically.

use std::sync::atomic::{AtomicUsize, Ordering};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{Code, Codeword};
use crate::error::{Error, Result};

/// Disjoint coalitions `U` (at most `w1` words) and `V` (at most `w2`),
/// given as ascending indices into the code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoalitionPair {
    pub u: Vec<usize>,
    pub v: Vec<usize>,
    pub w1: usize,
    pub w2: usize,
}

/// A violating pair with the full words and a common word of both sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub pair: CoalitionPair,
    pub u_words: Vec<Codeword>,
    pub v_words: Vec<Codeword>,
    pub x: Codeword,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationVerdict {
    pub separating: bool,
    pub violation: Option<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IppVerdict {
    pub ipp: bool,
    pub counterexample: Option<Codeword>,
}

fn check_lengths<'a>(words: impl IntoIterator<Item = &'a Codeword>) -> Result<usize> {
    let mut it = words.into_iter();
    let n = match it.next() {
        Some(w) => w.len(),
        None => return Err(Error::BadParameters("empty word set".into())),
    };
    for w in it {
        if w.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: w.len(),
            });
        }
    }
    Ok(n)
}

/// Whether `x` is a descendant of `u`.
pub fn desc_contains(u: &[Codeword], x: &Codeword) -> Result<bool> {
    check_lengths(u.iter().chain(std::iter::once(x)))?;
    Ok((0..x.len()).all(|i| u.iter().any(|a| a.0[i] == x.0[i])))
}

/// A common descendant of `u` and `v`, taking the smallest shared symbol at
/// each coordinate.
pub fn desc_intersects(u: &[Codeword], v: &[Codeword]) -> Result<Option<Codeword>> {
    if u.is_empty() || v.is_empty() {
        return Err(Error::BadParameters("empty word set".into()));
    }
    let n = check_lengths(u.iter().chain(v))?;
    let mut x = Vec::with_capacity(n);
    for i in 0..n {
        let common = u
            .iter()
            .map(|a| a.0[i])
            .filter(|s| v.iter().any(|b| b.0[i] == *s))
            .min();
        match common {
            Some(s) => x.push(s),
            None => return Ok(None),
        }
    }
    Ok(Some(Codeword(x)))
}

fn constant_at(u: &[Codeword], i: usize) -> Option<u32> {
    let s = u[0].0[i];
    u.iter().all(|a| a.0[i] == s).then_some(s)
}

/// A common word of the feasible sets `F(u)` and `F(v)`.
pub fn feasible_intersects(u: &[Codeword], v: &[Codeword]) -> Result<Option<Codeword>> {
    if u.is_empty() || v.is_empty() {
        return Err(Error::BadParameters("empty word set".into()));
    }
    let n = check_lengths(u.iter().chain(v))?;
    let mut x = Vec::with_capacity(n);
    for i in 0..n {
        let s = match (constant_at(u, i), constant_at(v, i)) {
            (Some(a), Some(b)) if a != b => return Ok(None),
            (Some(a), _) => a,
            (None, Some(b)) => b,
            (None, None) => 0,
        };
        x.push(s);
    }
    Ok(Some(Codeword(x)))
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

fn check_budgets(w1: usize, w2: usize) -> Result<()> {
    if w1 == 0 || w2 == 0 {
        return Err(Error::BadParameters("coalition sizes must be at least 1".into()));
    }
    if w1 == 1 && w2 == 1 {
        return Err(Error::BadParameters("(1,1)-separation is vacuous; need max(w1,w2) >= 2".into()));
    }
    Ok(())
}

/// Fixed-width bitset over word indices.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn or_assign(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    /// Ascending members that are at least `floor`.
    fn iter_from(&self, floor: usize) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(move |(blk, &word)| {
            let base = blk * 64;
            let mut word = if base + 64 <= floor {
                0
            } else if base < floor {
                word & (!0u64 << (floor - base))
            } else {
                word
            };
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let t = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(base + t)
            })
        })
    }
}

/// For each coordinate and symbol, the set of words carrying that symbol.
struct SymbolIndex {
    q: usize,
    sets: Vec<Bits>,
}

impl SymbolIndex {
    fn new(code: &Code) -> Self {
        let (q, n, m) = (code.q() as usize, code.n(), code.size());
        let mut sets = vec![Bits::empty(m); n * q];
        for (w, word) in code.words().iter().enumerate() {
            for (i, &s) in word.0.iter().enumerate() {
                sets[i * q + s as usize].insert(w);
            }
        }
        SymbolIndex { q, sets }
    }

    fn get(&self, i: usize, s: u32) -> &Bits {
        &self.sets[i * self.q + s as usize]
    }
}

/// Set-cover search: `hit[i]` holds the candidate words that can supply
/// coordinate `i`; a cover is a set of candidates whose hit coordinates
/// together include every coordinate.
struct CoverProblem {
    hit: Vec<Bits>,
}

impl CoverProblem {
    fn mask(&self, c: usize) -> u64 {
        self.hit
            .iter()
            .enumerate()
            .filter(|(_, h)| h.contains(c))
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    fn full(&self) -> u64 {
        if self.hit.len() == 64 {
            !0
        } else {
            (1u64 << self.hit.len()) - 1
        }
    }

    /// Whether at most `depth` candidates with index `>= floor` cover
    /// `uncovered`.
    fn coverable(&self, uncovered: u64, depth: usize, floor: usize) -> bool {
        if uncovered == 0 {
            return true;
        }
        if depth == 0 {
            return false;
        }
        if depth == 1 {
            let mut acc: Option<Bits> = None;
            for i in bit_iter(uncovered) {
                match acc.as_mut() {
                    None => acc = Some(self.hit[i].clone()),
                    Some(a) => {
                        for (x, y) in a.0.iter_mut().zip(&self.hit[i].0) {
                            *x &= y;
                        }
                    }
                }
            }
            return acc.is_some_and(|a| a.iter_from(floor).next().is_some());
        }
        let first = uncovered.trailing_zeros() as usize;
        let mut tried: Vec<u64> = Vec::new();
        for c in self.hit[first].iter_from(floor) {
            let covered = self.mask(c) & uncovered;
            if tried.iter().any(|&t| covered & !t == 0) {
                continue;
            }
            tried.push(covered);
            if self.coverable(uncovered & !covered, depth - 1, floor) {
                return true;
            }
        }
        false
    }

    /// Smallest cover size up to `cap`.
    fn min_cover(&self, cap: usize) -> Option<usize> {
        let full = self.full();
        (1..=cap).find(|&b| self.coverable(full, b, 0))
    }

    /// Lexicographically smallest cover with exactly `size` members drawn
    /// from `candidates`.
    fn smallest_cover(&self, size: usize, candidates: &Bits) -> Option<Vec<usize>> {
        let mut chosen = Vec::with_capacity(size);
        let mut uncovered = self.full();
        let mut floor = 0;
        while chosen.len() < size {
            let left = size - chosen.len() - 1;
            let next = candidates
                .iter_from(floor)
                .find(|&c| self.coverable(uncovered & !self.mask(c), left, c + 1))?;
            uncovered &= !self.mask(next);
            chosen.push(next);
            floor = next + 1;
        }
        (uncovered == 0).then_some(chosen)
    }
}

fn bit_iter(mut x: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if x == 0 {
            return None;
        }
        let t = x.trailing_zeros() as usize;
        x &= x - 1;
        Some(t)
    })
}

/// How the partner side of a driving coalition is found.
trait PartnerSearch: Sync {
    /// Smallest partner size up to `cap` that produces an intersection.
    fn min_partner(&self, driver: &[usize], cap: usize) -> Option<usize>;
    /// The lexicographically smallest partner of exactly `size` words.
    fn smallest_partner(&self, driver: &[usize], size: usize) -> Vec<usize>;
}

struct DescSearch<'a> {
    code: &'a Code,
    index: SymbolIndex,
}

impl<'a> DescSearch<'a> {
    fn new(code: &'a Code) -> Self {
        DescSearch {
            code,
            index: SymbolIndex::new(code),
        }
    }

    fn problem(&self, driver: &[usize]) -> (CoverProblem, Bits) {
        let m = self.code.size();
        let hit = (0..self.code.n())
            .map(|i| {
                let mut h = Bits::empty(m);
                for &d in driver {
                    h.or_assign(self.index.get(i, self.code.word(d).0[i]));
                }
                for &d in driver {
                    h.remove(d);
                }
                h
            })
            .collect();
        let mut candidates = Bits(vec![!0; m.div_ceil(64)]);
        for i in m..candidates.0.len() * 64 {
            candidates.remove(i);
        }
        for &d in driver {
            candidates.remove(d);
        }
        (CoverProblem { hit }, candidates)
    }
}

impl PartnerSearch for DescSearch<'_> {
    fn min_partner(&self, driver: &[usize], cap: usize) -> Option<usize> {
        self.problem(driver).0.min_cover(cap)
    }

    fn smallest_partner(&self, driver: &[usize], size: usize) -> Vec<usize> {
        let (problem, candidates) = self.problem(driver);
        problem
            .smallest_cover(size, &candidates)
            .expect("partner size came from min_partner")
    }
}

struct FeasibleSearch<'a> {
    code: &'a Code,
}

impl FeasibleSearch<'_> {
    /// Driver constants as `(mask of constant coordinates, values)`.
    fn constants(&self, driver: &[usize]) -> (u64, Vec<u32>) {
        let first = self.code.word(driver[0]);
        let mut mask = 0u64;
        for i in 0..self.code.n() {
            if driver.iter().all(|&d| self.code.word(d).0[i] == first.0[i]) {
                mask |= 1 << i;
            }
        }
        (mask, first.0.clone())
    }

    /// Depth-first search in lexicographic order for a partner of exactly
    /// `size` words whose feasible set meets the driver's.
    fn search(&self, driver: &[usize], size: usize) -> Option<Vec<usize>> {
        let (constant, values) = self.constants(driver);
        let m = self.code.size();
        let mut chosen = Vec::with_capacity(size);
        self.descend(driver, constant, &values, size, 0, 0, 0, m, &mut chosen)
            .then_some(chosen)
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        driver: &[usize],
        constant: u64,
        values: &[u32],
        size: usize,
        start: usize,
        agree: u64,
        varied: u64,
        m: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if chosen.len() == size {
            // the partner's constant coordinates must agree with the driver's
            return constant & !(agree | varied) == 0;
        }
        for c in start..m {
            if driver.contains(&c) {
                continue;
            }
            let word = &self.code.word(c).0;
            let mut agree2 = agree;
            let mut varied2 = varied;
            for i in bit_iter(constant) {
                if word[i] == values[i] {
                    agree2 |= 1 << i;
                }
                if let Some(&f) = chosen.first() {
                    if self.code.word(f).0[i] != word[i] {
                        varied2 |= 1 << i;
                    }
                }
            }
            chosen.push(c);
            if self.descend(driver, constant, values, size, c + 1, agree2, varied2, m, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}

impl PartnerSearch for FeasibleSearch<'_> {
    fn min_partner(&self, driver: &[usize], cap: usize) -> Option<usize> {
        (1..=cap).find(|&b| self.search(driver, b).is_some())
    }

    fn smallest_partner(&self, driver: &[usize], size: usize) -> Vec<usize> {
        self.search(driver, size)
            .expect("partner size came from min_partner")
    }
}

/// Smallest `(|D|, |P|, D, P)` with an intersecting partner, if any.
fn find_violation<S: PartnerSearch>(
    m: usize,
    w_drive: usize,
    w_other: usize,
    search: &S,
) -> Option<(Vec<usize>, Vec<usize>)> {
    for a in 1..=w_drive.min(m) {
        // two distinct singletons never meet
        let floor_b = if a == 1 { 2 } else { 1 };
        if floor_b > w_other {
            continue;
        }
        let best_b = AtomicUsize::new(w_other);
        let stop_at = AtomicUsize::new(usize::MAX);
        let best = (0..m)
            .into_par_iter()
            .filter_map(|first| {
                let mut local: Option<(usize, Vec<usize>)> = None;
                for rest in (first + 1..m).combinations(a - 1) {
                    if first > stop_at.load(Ordering::Relaxed) {
                        break;
                    }
                    let cap = match &local {
                        Some((b, _)) => b - 1,
                        None => best_b.load(Ordering::Relaxed),
                    };
                    if cap < floor_b {
                        break;
                    }
                    let mut driver = Vec::with_capacity(a);
                    driver.push(first);
                    driver.extend(rest);
                    if let Some(b) = search.min_partner(&driver, cap) {
                        best_b.fetch_min(b, Ordering::Relaxed);
                        local = Some((b, driver));
                        if b == floor_b {
                            stop_at.fetch_min(first, Ordering::Relaxed);
                            break;
                        }
                    }
                }
                local
            })
            .min();
        if let Some((b, driver)) = best {
            let partner = search.smallest_partner(&driver, b);
            return Some((driver, partner));
        }
    }
    None
}

fn search_space(m: usize, w_drive: usize) -> u128 {
    (1..=w_drive).fold(0u128, |acc, a| acc.saturating_add(binomial(m, a)))
}

fn verdict(
    code: &Code,
    w1: usize,
    w2: usize,
    found: Option<(Vec<usize>, Vec<usize>)>,
    swapped: bool,
    common: impl Fn(&[Codeword], &[Codeword]) -> Result<Option<Codeword>>,
) -> Result<SeparationVerdict> {
    let Some((driver, partner)) = found else {
        return Ok(SeparationVerdict {
            separating: true,
            violation: None,
        });
    };
    let (u, v) = if swapped { (partner, driver) } else { (driver, partner) };
    let words = |ix: &[usize]| ix.iter().map(|&i| code.word(i).clone()).collect::<Vec<_>>();
    let (u_words, v_words) = (words(&u), words(&v));
    let x = common(&u_words, &v_words)?.expect("search only reports intersecting pairs");
    Ok(SeparationVerdict {
        separating: false,
        violation: Some(Violation {
            pair: CoalitionPair { u, v, w1, w2 },
            u_words,
            v_words,
            x,
        }),
    })
}

fn check_length_limit(code: &Code) -> Result<()> {
    if code.n() > 64 {
        return Err(Error::BadParameters(format!(
            "exhaustive deciders support length up to 64, got {}",
            code.n()
        )));
    }
    Ok(())
}

/// Exhaustive (w1, w2)-separation check.
///
/// `budget` caps the number of driving coalitions enumerated.
pub fn is_separating(code: &Code, w1: usize, w2: usize, budget: u128) -> Result<SeparationVerdict> {
    check_budgets(w1, w2)?;
    check_length_limit(code)?;
    let swapped = w1 > w2;
    let (w_drive, w_other) = if swapped { (w2, w1) } else { (w1, w2) };
    let estimate = search_space(code.size(), w_drive);
    if estimate > budget {
        return Err(Error::BudgetExceeded { estimate, budget });
    }
    let found = find_violation(code.size(), w_drive, w_other, &DescSearch::new(code));
    verdict(code, w1, w2, found, swapped, desc_intersects)
}

/// Exhaustive restricted (w1, w2)-separation check, with feasible sets in
/// place of descendant sets.
///
/// `budget` caps the number of coalition pairs enumerated.
pub fn is_restricted_separating(
    code: &Code,
    w1: usize,
    w2: usize,
    budget: u128,
) -> Result<SeparationVerdict> {
    check_budgets(w1, w2)?;
    check_length_limit(code)?;
    let swapped = w1 > w2;
    let (w_drive, w_other) = if swapped { (w2, w1) } else { (w1, w2) };
    let m = code.size();
    let estimate = (1..=w_drive).fold(0u128, |acc, a| {
        let partners = search_space(m.saturating_sub(a), w_other);
        acc.saturating_add(binomial(m, a).saturating_mul(partners))
    });
    if estimate > budget {
        return Err(Error::BudgetExceeded { estimate, budget });
    }
    let found = find_violation(m, w_drive, w_other, &FeasibleSearch { code });
    verdict(code, w1, w2, found, swapped, feasible_intersects)
}

/// Exhaustive w-IPP check over the whole ambient space `Q^n`.
///
/// `budget` caps `q^n`. The reported counterexample is the first failing
/// word in lexicographic order (first coordinate most significant).
pub fn is_ipp(code: &Code, w: usize, budget: u128) -> Result<IppVerdict> {
    if w < 2 {
        return Err(Error::BadParameters("IPP needs w >= 2".into()));
    }
    check_length_limit(code)?;
    let (q, n) = (code.q() as u128, code.n() as u32);
    let ambient = q.checked_pow(n).unwrap_or(u128::MAX);
    if ambient > budget {
        return Err(Error::BudgetExceeded {
            estimate: ambient,
            budget,
        });
    }
    let index = SymbolIndex::new(code);
    let word_of = |mut idx: u128| -> Vec<u32> {
        let mut x = vec![0u32; n as usize];
        for s in x.iter_mut().rev() {
            *s = (idx % q) as u32;
            idx /= q;
        }
        x
    };
    let m = code.size();
    let mut all = Bits(vec![!0; m.div_ceil(64)]);
    for i in m..all.0.len() * 64 {
        all.remove(i);
    }
    let fails = |idx: u128| -> bool {
        let x = word_of(idx);
        let problem = CoverProblem {
            hit: x.iter().enumerate().map(|(i, &s)| index.get(i, s).clone()).collect(),
        };
        let Some(b) = problem.min_cover(w) else {
            return false;
        };
        let cover = problem
            .smallest_cover(b, &all)
            .expect("cover size came from min_cover");
        // the common intersection lies inside any one cover; a member is in it
        // iff no cover of size <= w avoids it
        cover.iter().all(|&c| {
            let mut hit = problem.hit.clone();
            for h in hit.iter_mut() {
                h.remove(c);
            }
            CoverProblem { hit }.min_cover(w).is_some()
        })
    };
    let first = (0..ambient as u64)
        .into_par_iter()
        .find_first(|&idx| fails(idx as u128));
    Ok(match first {
        Some(idx) => IppVerdict {
            ipp: false,
            counterexample: Some(Codeword(word_of(idx as u128))),
        },
        None => IppVerdict {
            ipp: true,
            counterexample: None,
        },
    })
}
