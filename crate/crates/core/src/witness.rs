//! Explicit certificates that a Reed-Solomon code is not separating.
//!
//! A nonconstant `f` of degree below `k` together with sets `E, F` inside its
//! image with `Im f = E + F` (or `E F`) yields coalitions
//! `U = {ev(b) : b in E}` and `V = {ev(f - c) : c in F}` (or
//! `V = {ev(c^-1 f)}`) whose descendant sets share a word. The constructors
//! below pick `f`, `E` and `F` from the field structure; [`verify_witness`]
//! re-derives everything from `(q, k, f, E, F, mode)` alone.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::codes::{rs_codeword, Codeword};
use crate::error::{Error, Result};
use crate::field::{prime_power, Domain, FieldElement, FiniteField};
use crate::poly::Poly;
use crate::separation::desc_contains;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `Im f = E + F`
    Additive,
    /// `Im f = E F`
    Multiplicative,
}

/// Which construction produced a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Thm3,
    Thm5Case1,
    Thm5Case2,
    Thm5Case3,
    Search,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::Thm3 => "thm3",
            Provenance::Thm5Case1 => "thm5_case1",
            Provenance::Thm5Case2 => "thm5_case2",
            Provenance::Thm5Case3 => "thm5_case3",
            Provenance::Search => "search",
        };
        f.write_str(s)
    }
}

/// Certificate that RS_k(q) is not (w1, w2)-separating.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationWitness {
    pub q: u32,
    pub k: usize,
    pub w1: usize,
    pub w2: usize,
    /// Coefficient indices, constant term first.
    #[serde(rename = "f")]
    pub poly: Poly,
    pub mode: Mode,
    #[serde(rename = "E")]
    pub e: Vec<FieldElement>,
    #[serde(rename = "F")]
    pub f: Vec<FieldElement>,
    #[serde(rename = "U")]
    pub u: Vec<Codeword>,
    #[serde(rename = "V")]
    pub v: Vec<Codeword>,
    pub x: Codeword,
    pub provenance: Provenance,
}

impl SeparationWitness {
    /// Whether this witness also certifies RS_l(q) not (w1', w2')-separating
    /// (the same coalitions live in every larger code and fit every larger
    /// budget).
    pub fn certifies(&self, l: usize, w1: usize, w2: usize) -> bool {
        l >= self.k && l < self.q as usize && w1 >= self.w1 && w2 >= self.w2
    }

    /// The same certificate restated for larger parameters.
    pub fn transfer(&self, l: usize, w1: usize, w2: usize) -> Option<SeparationWitness> {
        self.certifies(l, w1, w2).then(|| SeparationWitness {
            k: l,
            w1,
            w2,
            ..self.clone()
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serializes")
    }
}

/// Why a witness failed verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessDefect {
    BadField,
    BadDimension,
    PolynomialNotInRange,
    ConstantPolynomial,
    CoalitionTooLarge,
    EmptySet,
    NotInImage,
    ZeroInMultiplicativeImage,
    CoverMismatch,
    CoalitionMismatch,
    NotDisjoint,
    WrongLength,
    NotDescendant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCheck {
    pub valid: bool,
    pub defect: Option<WitnessDefect>,
}

impl WitnessCheck {
    fn ok() -> Self {
        WitnessCheck {
            valid: true,
            defect: None,
        }
    }

    fn fail(defect: WitnessDefect) -> Self {
        WitnessCheck {
            valid: false,
            defect: Some(defect),
        }
    }
}

fn domain_of(mode: Mode) -> Domain {
    match mode {
        Mode::Additive => Domain::All,
        Mode::Multiplicative => Domain::Nonzero,
    }
}

fn combine(field: &FiniteField, mode: Mode, e: &BTreeSet<FieldElement>, f: &BTreeSet<FieldElement>) -> BTreeSet<FieldElement> {
    match mode {
        Mode::Additive => field.sumset(e, f),
        Mode::Multiplicative => field.productset(e, f),
    }
}

fn partner_poly(field: &FiniteField, mode: Mode, f: &Poly, c: FieldElement) -> Poly {
    match mode {
        Mode::Additive => f.sub_constant(field, c),
        Mode::Multiplicative => f.scale(field, field.inv(c).expect("multiplicative F excludes 0")),
    }
}

/// Builds the coalitions and common descendant from a cover of `Im f`.
///
/// The returned witness has `w1 = |E|`, `w2 = |F|` and provenance `search`;
/// constructors restate both.
pub fn assemble_witness(
    field: &FiniteField,
    k: usize,
    poly: &Poly,
    e: &BTreeSet<FieldElement>,
    f: &BTreeSet<FieldElement>,
    mode: Mode,
) -> Result<SeparationWitness> {
    let degree = poly.degree().ok_or(Error::ConstantPolynomial)?;
    if degree == 0 {
        return Err(Error::ConstantPolynomial);
    }
    if degree >= k {
        return Err(Error::DegreeTooHigh { degree, k });
    }
    if k + 1 > field.order() as usize {
        return Err(Error::BadParameters(format!("k = {k} exceeds q - 1")));
    }
    if e.is_empty() || f.is_empty() {
        return Err(Error::PreconditionFailed("E and F must be nonempty".into()));
    }
    let image = field.image(poly, domain_of(mode));
    if mode == Mode::Multiplicative && image.contains(&FieldElement::ZERO) {
        return Err(Error::PreconditionFailed("f has a nonzero root, so 0 lies in Im f".into()));
    }
    if !e.is_subset(&image) || !f.is_subset(&image) {
        return Err(Error::PreconditionFailed("E and F must lie inside Im f".into()));
    }
    if combine(field, mode, e, f) != image {
        return Err(Error::CoverFailed);
    }

    let n = field.order() as i64 - 1;
    let mut x = Vec::with_capacity(n as usize);
    for i in 1..=n {
        let y = field.eval(poly, field.alpha_pow(i));
        let beta = e
            .iter()
            .copied()
            .find(|&b| match mode {
                Mode::Additive => f.contains(&field.sub(y, b)),
                Mode::Multiplicative => f.contains(&field.div(y, b).expect("E excludes 0")),
            })
            .expect("cover equation holds");
        x.push(beta.index());
    }
    let u = e
        .iter()
        .map(|&b| rs_codeword(field, k, &Poly::constant(b)))
        .collect::<Result<Vec<_>>>()?;
    let v = f
        .iter()
        .map(|&c| rs_codeword(field, k, &partner_poly(field, mode, poly, c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SeparationWitness {
        q: field.order(),
        k,
        w1: e.len(),
        w2: f.len(),
        poly: poly.clone(),
        mode,
        e: e.iter().copied().collect(),
        f: f.iter().copied().collect(),
        u,
        v,
        x: Codeword(x),
        provenance: Provenance::Search,
    })
}

fn finish(mut w: SeparationWitness, w1: usize, w2: usize, provenance: Provenance) -> Result<SeparationWitness> {
    w.w1 = w1;
    w.w2 = w2;
    w.provenance = provenance;
    let check = verify_witness(&w);
    match check.defect {
        None => Ok(w),
        Some(d) => Err(Error::PreconditionFailed(format!("construction failed verification: {d:?}"))),
    }
}

/// Whether the multiplicative construction applies: `(k-1) | (q-1)` and
/// `(q-1)/(k-1) <= w1 w2`.
pub fn thm3_applies(q: u64, k: u64, w1: u64, w2: u64) -> bool {
    k >= 2 && k < q && (q - 1) % (k - 1) == 0 && (q - 1) / (k - 1) <= w1 * w2
}

/// Witness from `f = x^(k-1)`, whose image is the cyclic subgroup of index
/// `k - 1` in F_q^*.
pub fn multiplicative_witness(field: &FiniteField, k: usize, w1: usize, w2: usize) -> Result<SeparationWitness> {
    let q = field.order() as u64;
    if k < 2 || k as u64 >= q {
        return Err(Error::PreconditionFailed(format!("need 2 <= k <= q-1, got k = {k}")));
    }
    let s = (k - 1) as u64;
    if (q - 1) % s != 0 {
        return Err(Error::PreconditionFailed(format!("k-1 = {s} does not divide q-1 = {}", q - 1)));
    }
    if (q - 1) / s > (w1 * w2) as u64 {
        return Err(Error::PreconditionFailed(format!(
            "(q-1)/(k-1) = {} exceeds w1*w2 = {}",
            (q - 1) / s,
            w1 * w2
        )));
    }
    let poly = Poly::monomial(FieldElement::ONE, k - 1);
    let image = field.image(&poly, Domain::Nonzero);
    let gamma = field.cyclic_generator(&image)?;
    let e = (0..w1).map(|i| field.pow(gamma, (i * w2) as u64)).collect();
    let f = (0..w2).map(|j| field.pow(gamma, j as u64)).collect();
    let w = assemble_witness(field, k, &poly, &e, &f, Mode::Multiplicative)?;
    finish(w, w1, w2, Provenance::Thm3)
}

/// Largest `r` with `p^r <= w`.
pub fn floor_log(w: u64, p: u64) -> u32 {
    let mut r = 0;
    let mut pow = p;
    while pow <= w {
        r += 1;
        pow *= p;
    }
    r
}

/// Which of the three additive conditions hold for `s = k - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdditiveConditions {
    /// `s >= p q / (w1 w2)`
    pub large_shift: bool,
    /// `(w1 / p^r1) (w2 / p^r2) < p`
    pub small_remainders: bool,
    /// `floor(w1 / p^r1) floor(w2 / p^r2) >= p`
    pub large_quotients: bool,
}

impl AdditiveConditions {
    pub fn evaluate(q: u64, p: u64, s: u64, w1: u64, w2: u64) -> Self {
        let (r1, r2) = (floor_log(w1, p), floor_log(w2, p));
        AdditiveConditions {
            large_shift: s * w1 * w2 >= p * q,
            small_remainders: w1 * w2 < p.pow(r1 + r2 + 1),
            large_quotients: (w1 / p.pow(r1)) * (w2 / p.pow(r2)) >= p,
        }
    }

    /// The case that settles the construction, first holding condition wins.
    pub fn case(&self) -> Option<Provenance> {
        if self.large_shift {
            Some(Provenance::Thm5Case1)
        } else if self.small_remainders {
            Some(Provenance::Thm5Case2)
        } else if self.large_quotients {
            Some(Provenance::Thm5Case3)
        } else {
            None
        }
    }
}

/// Whether `x^s - x` has kernel F_s, i.e. `s > 1` is a power of `p` and F_s
/// is a subfield of F_q (`s | q` and `(s - 1) | (q - 1)`). Otherwise the
/// kernel is a smaller subfield and the image is larger than `q / s`.
pub fn additive_shift_valid(q: u64, s: u64) -> bool {
    s > 1 && q % s == 0 && (q - 1) % (s - 1) == 0
}

/// The additive construction's case for RS_k(q), or the first failing
/// precondition.
pub fn thm5_case(q: u64, k: u64, w1: u64, w2: u64) -> std::result::Result<Provenance, String> {
    let (p, _) = prime_power(q).ok_or_else(|| format!("{q} is not a prime power"))?;
    if k < 2 || k >= q {
        return Err(format!("need 2 <= k <= q-1, got k = {k}"));
    }
    let s = k - 1;
    if !additive_shift_valid(q, s) {
        return Err(format!("F_{s} is not a proper subfield of F_{q}"));
    }
    if s * w1 * w2 < q - 1 {
        return Err(format!("k-1 = {s} is below (q-1)/(w1*w2)"));
    }
    AdditiveConditions::evaluate(q, p, s, w1, w2)
        .case()
        .ok_or_else(|| "none of the three additive conditions holds".to_string())
}

/// Witness from `f = x^s - x` with `s = k - 1` a power of the characteristic;
/// its image is an additive subgroup of order `q/s` split into `E + F`.
pub fn additive_witness(field: &FiniteField, k: usize, w1: usize, w2: usize) -> Result<SeparationWitness> {
    let q = field.order() as u64;
    let p = field.characteristic() as u64;
    let case = thm5_case(q, k as u64, w1 as u64, w2 as u64).map_err(Error::PreconditionFailed)?;
    let s = k - 1;
    let poly = Poly::frobenius_minus_identity(field, s);
    let image = field.image(&poly, Domain::All);
    debug_assert_eq!(image.len() as u64, q / s as u64);
    let basis = field.subspace_basis(&image)?;
    let (r1, r2) = (floor_log(w1 as u64, p) as usize, floor_log(w2 as u64, p) as usize);

    let (e, f) = match case {
        Provenance::Thm5Case1 | Provenance::Thm5Case2 => {
            let dim = basis.len();
            if dim > r1 + r2 {
                return Err(Error::PreconditionFailed(format!(
                    "image dimension {dim} exceeds r1 + r2 = {}",
                    r1 + r2
                )));
            }
            let t1 = dim.min(r1);
            (field.span(&basis[..t1]), field.span(&basis[t1..]))
        }
        _ => {
            if basis.len() != r1 + r2 + 1 {
                return Err(Error::PreconditionFailed(format!(
                    "image dimension {} is not r1 + r2 + 1 = {}",
                    basis.len(),
                    r1 + r2 + 1
                )));
            }
            let gamma = basis[r1 + r2];
            let a = w1 / p.pow(r1 as u32) as usize;
            let b = w2 / p.pow(r2 as u32) as usize;
            let p1: BTreeSet<_> = (0..a).map(|i| field.times((i * b) as u64, gamma)).collect();
            let p2: BTreeSet<_> = (0..b).map(|j| field.times(j as u64, gamma)).collect();
            let e = field.sumset(&field.span(&basis[..r1]), &p1);
            let f = field.sumset(&field.span(&basis[r1..r1 + r2]), &p2);
            (e, f)
        }
    };
    let w = assemble_witness(field, k, &poly, &e, &f, Mode::Additive)?;
    finish(w, w1, w2, case)
}

/// The first `(E, F)` in the order `(|E|, |F|, E, F)` with sizes within
/// `(w1, w2)` covering `Im f`. `budget` caps the number of `(E, F)` pairs.
pub fn search_decomposition(
    field: &FiniteField,
    poly: &Poly,
    mode: Mode,
    w1: usize,
    w2: usize,
    budget: u128,
) -> Result<Option<(BTreeSet<FieldElement>, BTreeSet<FieldElement>)>> {
    let image: Vec<FieldElement> = field.image(poly, domain_of(mode)).into_iter().collect();
    let target: BTreeSet<FieldElement> = image.iter().copied().collect();
    let h = image.len();
    if mode == Mode::Multiplicative && target.contains(&FieldElement::ZERO) {
        return Err(Error::PreconditionFailed("0 lies in Im f".into()));
    }
    if w1 * w2 < h {
        return Ok(None);
    }
    let count = |w: usize| (1..=w.min(h)).map(|a| binomial(h, a)).fold(0u128, u128::saturating_add);
    let estimate = count(w1).saturating_mul(count(w2));
    if estimate > budget {
        return Err(Error::BudgetExceeded { estimate, budget });
    }
    for a in 1..=w1.min(h) {
        for b in 1..=w2.min(h) {
            if a * b < h {
                continue;
            }
            for e in image.iter().copied().combinations(a) {
                let e: BTreeSet<_> = e.into_iter().collect();
                for f in image.iter().copied().combinations(b) {
                    let f: BTreeSet<_> = f.into_iter().collect();
                    if combine(field, mode, &e, &f) == target {
                        return Ok(Some((e, f)));
                    }
                }
            }
        }
    }
    Ok(None)
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Candidate polynomials tried by the search fallback: monomials `x^j`
/// (multiplicative) and, for `j` a power of the characteristic, `x^j - x`
/// (additive), in increasing degree below `k`.
pub fn search_candidates(field: &FiniteField, k: usize) -> Vec<(Poly, Mode)> {
    let p = field.characteristic() as usize;
    let mut out = Vec::new();
    for j in 1..k {
        out.push((Poly::monomial(FieldElement::ONE, j), Mode::Multiplicative));
        let mut t = j;
        while t % p == 0 {
            t /= p;
        }
        if t == 1 && j > 1 {
            out.push((Poly::frobenius_minus_identity(field, j), Mode::Additive));
        }
    }
    out
}

/// Tries the search fallback over [`search_candidates`].
pub fn search_witness(
    field: &FiniteField,
    k: usize,
    w1: usize,
    w2: usize,
    budget: u128,
) -> Result<Option<SeparationWitness>> {
    if k < 2 || k >= field.order() as usize {
        return Err(Error::PreconditionFailed(format!("need 2 <= k <= q-1, got k = {k}")));
    }
    for (poly, mode) in search_candidates(field, k) {
        let found = match search_decomposition(field, &poly, mode, w1, w2, budget) {
            Ok(found) => found,
            Err(Error::PreconditionFailed(_)) => continue,
            Err(e) => return Err(e),
        };
        if let Some((e, f)) = found {
            let w = assemble_witness(field, k, &poly, &e, &f, mode)?;
            return finish(w, w1, w2, Provenance::Search).map(Some);
        }
    }
    Ok(None)
}

/// Construction strategy for [`construct_witness`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Auto,
    Thm3,
    Thm5,
    Search,
}

/// Runs the chosen construction; `Auto` tries the multiplicative, additive
/// and search constructions in that order. `Ok(None)` means no construction
/// applies.
pub fn construct_witness(
    field: &FiniteField,
    k: usize,
    w1: usize,
    w2: usize,
    strategy: Strategy,
    search_budget: u128,
) -> Result<Option<SeparationWitness>> {
    let soft = |r: Result<SeparationWitness>| match r {
        Ok(w) => Ok(Some(w)),
        Err(Error::PreconditionFailed(_)) => Ok(None),
        Err(e) => Err(e),
    };
    match strategy {
        Strategy::Thm3 => soft(multiplicative_witness(field, k, w1, w2)),
        Strategy::Thm5 => soft(additive_witness(field, k, w1, w2)),
        Strategy::Search => match search_witness(field, k, w1, w2, search_budget) {
            Err(Error::PreconditionFailed(_)) => Ok(None),
            other => other,
        },
        Strategy::Auto => {
            for s in [Strategy::Thm3, Strategy::Thm5, Strategy::Search] {
                if let Some(w) = construct_witness(field, k, w1, w2, s, search_budget)? {
                    return Ok(Some(w));
                }
            }
            Ok(None)
        }
    }
}

/// Re-checks a witness from its parameters: `f` is a nonconstant polynomial
/// of degree below `k`, `E` and `F` fit the budgets and cover `Im f`, `U` and
/// `V` are exactly the coalitions the cover dictates, they are disjoint, and
/// `x` descends from both.
pub fn verify_witness(w: &SeparationWitness) -> WitnessCheck {
    use WitnessDefect::*;
    let Ok(field) = FiniteField::new(w.q as u64) else {
        return WitnessCheck::fail(BadField);
    };
    if w.k < 1 || w.k >= w.q as usize {
        return WitnessCheck::fail(BadDimension);
    }
    match w.poly.degree() {
        None | Some(0) => return WitnessCheck::fail(ConstantPolynomial),
        Some(d) if d >= w.k => return WitnessCheck::fail(PolynomialNotInRange),
        _ => {}
    }
    if w.poly.coeffs().iter().any(|c| c.index() >= w.q) {
        return WitnessCheck::fail(PolynomialNotInRange);
    }
    let e: BTreeSet<_> = w.e.iter().copied().collect();
    let f: BTreeSet<_> = w.f.iter().copied().collect();
    if e.is_empty() || f.is_empty() {
        return WitnessCheck::fail(EmptySet);
    }
    if e.len() > w.w1 || f.len() > w.w2 || w.u.len() > w.w1 || w.v.len() > w.w2 {
        return WitnessCheck::fail(CoalitionTooLarge);
    }
    let image = field.image(&w.poly, domain_of(w.mode));
    if w.mode == Mode::Multiplicative && image.contains(&FieldElement::ZERO) {
        return WitnessCheck::fail(ZeroInMultiplicativeImage);
    }
    if !e.is_subset(&image) || !f.is_subset(&image) {
        return WitnessCheck::fail(NotInImage);
    }
    if combine(&field, w.mode, &e, &f) != image {
        return WitnessCheck::fail(CoverMismatch);
    }

    let expected_u: Option<BTreeSet<Codeword>> = e
        .iter()
        .map(|&b| rs_codeword(&field, w.k, &Poly::constant(b)).ok())
        .collect();
    let expected_v: Option<BTreeSet<Codeword>> = f
        .iter()
        .map(|&c| rs_codeword(&field, w.k, &partner_poly(&field, w.mode, &w.poly, c)).ok())
        .collect();
    let u: BTreeSet<Codeword> = w.u.iter().cloned().collect();
    let v: BTreeSet<Codeword> = w.v.iter().cloned().collect();
    if expected_u.as_ref() != Some(&u) || expected_v.as_ref() != Some(&v) {
        return WitnessCheck::fail(CoalitionMismatch);
    }
    if u.len() != w.u.len() || v.len() != w.v.len() || !u.is_disjoint(&v) {
        return WitnessCheck::fail(NotDisjoint);
    }
    let n = w.q as usize - 1;
    if w.x.len() != n {
        return WitnessCheck::fail(WrongLength);
    }
    let in_u = desc_contains(&w.u, &w.x).unwrap_or(false);
    let in_v = desc_contains(&w.v, &w.x).unwrap_or(false);
    if !(in_u && in_v) {
        return WitnessCheck::fail(NotDescendant);
    }
    WitnessCheck::ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u32]) -> BTreeSet<FieldElement> {
        v.iter().map(|&i| FieldElement(i)).collect()
    }

    #[test]
    fn assemble_squares_mod_seven() {
        let f7 = FiniteField::new(7).unwrap();
        let sq = Poly::monomial(FieldElement::ONE, 2);
        let w = assemble_witness(&f7, 3, &sq, &set(&[1, 4]), &set(&[1, 2]), Mode::Multiplicative).unwrap();
        assert_eq!(w.u, vec![Codeword(vec![1; 6]), Codeword(vec![4; 6])]);
        let four_inv_sq = sq.scale(&f7, f7.inv(FieldElement(2)).unwrap());
        assert_eq!(w.v[0], rs_codeword(&f7, 3, &sq).unwrap());
        assert_eq!(w.v[1], rs_codeword(&f7, 3, &four_inv_sq).unwrap());
        assert!(verify_witness(&w).valid);
    }

    #[test]
    fn assemble_rejects_bad_input() {
        let f7 = FiniteField::new(7).unwrap();
        let sq = Poly::monomial(FieldElement::ONE, 2);
        assert_eq!(
            assemble_witness(&f7, 3, &sq, &set(&[1]), &set(&[1, 2]), Mode::Multiplicative).unwrap_err(),
            Error::CoverFailed
        );
        assert_eq!(
            assemble_witness(&f7, 3, &Poly::constant(FieldElement(3)), &set(&[3]), &set(&[3]), Mode::Additive)
                .unwrap_err(),
            Error::ConstantPolynomial
        );
        assert!(matches!(
            assemble_witness(&f7, 2, &sq, &set(&[1, 4]), &set(&[1, 2]), Mode::Multiplicative),
            Err(Error::DegreeTooHigh { .. })
        ));
    }

    #[test]
    fn thm3_seven_three() {
        let f7 = FiniteField::new(7).unwrap();
        let w = multiplicative_witness(&f7, 3, 2, 2).unwrap();
        assert_eq!(w.poly, Poly::monomial(FieldElement::ONE, 2));
        assert_eq!(w.e, vec![FieldElement(1), FieldElement(4)]);
        assert_eq!(w.f, vec![FieldElement(1), FieldElement(2)]);
        assert_eq!(w.provenance, Provenance::Thm3);
    }

    #[test]
    fn thm3_preconditions() {
        let f7 = FiniteField::new(7).unwrap();
        assert!(multiplicative_witness(&f7, 4, 2, 2).is_ok());
        let f8 = FiniteField::new(8).unwrap();
        assert!(matches!(multiplicative_witness(&f8, 4, 2, 2), Err(Error::PreconditionFailed(_))));
        let f4 = FiniteField::new(4).unwrap();
        assert!(multiplicative_witness(&f4, 2, 2, 2).is_ok());
    }

    #[test]
    fn thm5_eight_three() {
        let f8 = FiniteField::new(8).unwrap();
        let w = additive_witness(&f8, 3, 2, 2).unwrap();
        assert_eq!(w.provenance, Provenance::Thm5Case2);
        assert_eq!((w.e.len(), w.f.len()), (2, 2));
        let c = AdditiveConditions::evaluate(8, 2, 2, 2, 2);
        assert!(!c.large_shift);
        assert!(c.small_remainders);
    }

    #[test]
    fn thm5_nine_four() {
        let f9 = FiniteField::new(9).unwrap();
        let w = additive_witness(&f9, 4, 3, 3).unwrap();
        assert_eq!(w.provenance, Provenance::Thm5Case1);
        assert!(verify_witness(&w).valid);
        assert_eq!(thm5_case(9, 4, 3, 3), Ok(Provenance::Thm5Case1));
        let c = AdditiveConditions::evaluate(9, 3, 3, 3, 3);
        assert!(c.small_remainders);
    }

    #[test]
    fn thm5_rejections() {
        assert!(thm5_case(8, 2, 2, 2).is_err());
        assert!(thm5_case(11, 4, 2, 2).is_err());
        assert!(thm5_case(16, 3, 1, 2).is_err());
    }

    #[test]
    fn search_examples() {
        let f7 = FiniteField::new(7).unwrap();
        let sq = Poly::monomial(FieldElement::ONE, 2);
        let (e, f) = search_decomposition(&f7, &sq, Mode::Multiplicative, 2, 2, 1 << 20).unwrap().unwrap();
        assert_eq!(f7.productset(&e, &f), set(&[1, 2, 4]));
        assert_eq!((e, f), (set(&[1, 2]), set(&[1, 2])));

        let f9 = FiniteField::new(9).unwrap();
        let x = Poly::monomial(FieldElement::ONE, 1);
        // additive image of x over F_9 has 9 elements; 2 * 2 < 9
        assert_eq!(search_decomposition(&f9, &x, Mode::Additive, 2, 2, 1 << 20).unwrap(), None);

        let top = Poly::monomial(FieldElement::ONE, 6);
        let (e, f) = search_decomposition(&f7, &top, Mode::Multiplicative, 2, 2, 1 << 20).unwrap().unwrap();
        assert_eq!((e, f), (set(&[1]), set(&[1])));
    }

    #[test]
    fn verification_catches_tampering() {
        let f7 = FiniteField::new(7).unwrap();
        let w = multiplicative_witness(&f7, 3, 2, 2).unwrap();
        assert!(verify_witness(&w).valid);

        let mut bad = w.clone();
        bad.x.0[0] = 6;
        assert_eq!(verify_witness(&bad).defect, Some(WitnessDefect::NotDescendant));

        let mut bad = w.clone();
        bad.w1 = 1;
        assert_eq!(verify_witness(&bad).defect, Some(WitnessDefect::CoalitionTooLarge));

        let mut bad = w.clone();
        bad.e.push(FieldElement(2));
        assert_eq!(verify_witness(&bad).defect, Some(WitnessDefect::CoalitionTooLarge));

        let mut bad = w.clone();
        bad.v.swap(0, 1);
        bad.v[0] = bad.u[0].clone();
        assert!(!verify_witness(&bad).valid);
    }

    #[test]
    fn transfer_follows_monotonicity() {
        let f7 = FiniteField::new(7).unwrap();
        let w = multiplicative_witness(&f7, 3, 2, 2).unwrap();
        assert!(w.certifies(3, 2, 2));
        assert!(w.certifies(6, 3, 2));
        assert!(!w.certifies(2, 2, 2));
        assert!(!w.certifies(7, 2, 2));
        assert!(!w.certifies(4, 1, 2));
        let lifted = w.transfer(5, 2, 3).unwrap();
        assert!(verify_witness(&lifted).valid);
    }

    #[test]
    fn json_round_trip() {
        let f8 = FiniteField::new(8).unwrap();
        let w = additive_witness(&f8, 3, 2, 2).unwrap();
        let json = w.to_json();
        assert!(json.contains("\"provenance\":\"thm5_case2\""));
        assert!(json.contains("\"E\":"));
        let back: SeparationWitness = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
    }
}
