//! Explicit block codes and Reed-Solomon evaluation codes.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField};
use crate::poly::Poly;

/// A word over the alphabet `{0, .., q-1}`. For field-alphabet codes the
/// symbols are field element indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Codeword(pub Vec<u32>);

impl Codeword {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[u32] {
        &self.0
    }

    pub fn distance(&self, other: &Codeword) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

impl From<Vec<u32>> for Codeword {
    fn from(v: Vec<u32>) -> Self {
        Codeword(v)
    }
}

/// A q-ary code of length n given by its list of distinct words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Code {
    q: u32,
    n: usize,
    words: Vec<Codeword>,
}

impl Code {
    pub fn new(q: u32, words: Vec<Codeword>) -> Result<Self> {
        let first = words
            .first()
            .ok_or_else(|| Error::InvalidCode("a code needs at least one word".into()))?;
        let n = first.len();
        let mut seen = HashSet::with_capacity(words.len());
        for w in &words {
            if w.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: w.len(),
                });
            }
            if let Some(&s) = w.0.iter().find(|&&s| s >= q) {
                return Err(Error::InvalidCode(format!("symbol {s} outside alphabet of size {q}")));
            }
            if !seen.insert(w) {
                return Err(Error::InvalidCode(format!("duplicate word {:?}", w.0)));
            }
        }
        Ok(Code { q, n, words })
    }

    /// Convenience constructor from nested vectors.
    pub fn from_rows(q: u32, rows: Vec<Vec<u32>>) -> Result<Self> {
        Code::new(q, rows.into_iter().map(Codeword).collect())
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of words, M.
    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Codeword] {
        &self.words
    }

    pub fn word(&self, i: usize) -> &Codeword {
        &self.words[i]
    }

    pub fn position(&self, w: &Codeword) -> Option<usize> {
        self.words.iter().position(|x| x == w)
    }
}

/// Parameters of RS_k(q): length q-1, dimension k, distance q-k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsCodeSpec {
    pub q: u32,
    pub k: u32,
}

impl RsCodeSpec {
    pub fn new(q: u32, k: u32) -> Result<Self> {
        if k < 1 || k + 1 > q {
            return Err(Error::BadParameters(format!("need 1 <= k <= q-1, got q={q}, k={k}")));
        }
        Ok(RsCodeSpec { q, k })
    }

    pub fn n(&self) -> u32 {
        self.q - 1
    }

    pub fn d(&self) -> u32 {
        self.q - self.k
    }
}

/// Evaluates `f` at alpha^1, .., alpha^(q-1).
pub fn rs_codeword(field: &FiniteField, k: usize, f: &Poly) -> Result<Codeword> {
    if let Some(degree) = f.degree() {
        if degree >= k {
            return Err(Error::DegreeTooHigh { degree, k });
        }
    }
    let n = field.order() as i64 - 1;
    Ok(Codeword(
        (1..=n).map(|i| field.eval(f, field.alpha_pow(i)).index()).collect(),
    ))
}

/// All q^k evaluation words, in lexicographic order of coefficient vectors
/// with the constant coefficient varying fastest.
pub fn rs_code(field: &FiniteField, k: usize, cap: u128) -> Result<Code> {
    let q = field.order();
    RsCodeSpec::new(q, k as u32)?;
    let count = (q as u128).pow(k as u32);
    if count > cap {
        return Err(Error::TooLarge { count, cap });
    }
    let mut words = Vec::with_capacity(count as usize);
    let mut coeffs = vec![0u32; k];
    for _ in 0..count {
        let f = Poly::new(coeffs.iter().map(|&c| FieldElement(c)).collect());
        words.push(rs_codeword(field, k, &f)?);
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c < q {
                break;
            }
            *c = 0;
        }
    }
    Code::new(q, words)
}

/// Brute-force minimum Hamming distance over all pairs of words.
pub fn min_distance(code: &Code, cap: u128) -> Result<usize> {
    let m = code.size() as u128;
    if m < 2 {
        return Err(Error::SingleWord);
    }
    let pairs = m * (m - 1) / 2;
    if pairs > cap {
        return Err(Error::TooLarge { count: pairs, cap });
    }
    let words = code.words();
    let mut best = code.n();
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            best = best.min(a.distance(b));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_polynomial_gives_constant_word() {
        let f = FiniteField::new(7).unwrap();
        let w = rs_codeword(&f, 1, &Poly::constant(FieldElement(4))).unwrap();
        assert_eq!(w.0, vec![4; 6]);
    }

    #[test]
    fn identity_is_a_permutation() {
        let f = FiniteField::new(5).unwrap();
        let w = rs_codeword(&f, 2, &Poly::monomial(FieldElement::ONE, 1)).unwrap();
        let mut s = w.0.clone();
        s.sort();
        assert_eq!(s, vec![1, 2, 3, 4]);
        assert_eq!(w.0[0], f.alpha().index());
    }

    #[test]
    fn squares_mod_seven() {
        let f = FiniteField::new(7).unwrap();
        let w = rs_codeword(&f, 3, &Poly::monomial(FieldElement::ONE, 2)).unwrap();
        let mut s = w.0.clone();
        s.sort();
        assert_eq!(s, vec![1, 1, 2, 2, 4, 4]);
    }

    #[test]
    fn degree_guard() {
        let f = FiniteField::new(7).unwrap();
        let err = rs_codeword(&f, 2, &Poly::monomial(FieldElement::ONE, 2)).unwrap_err();
        assert_eq!(err, Error::DegreeTooHigh { degree: 2, k: 2 });
    }

    #[test]
    fn small_rs_codes() {
        let f4 = FiniteField::new(4).unwrap();
        let c = rs_code(&f4, 1, 100).unwrap();
        assert_eq!((c.size(), c.n()), (4, 3));
        assert!(c.words().iter().all(|w| w.0.iter().all(|&s| s == w.0[0])));

        let f5 = FiniteField::new(5).unwrap();
        let c = rs_code(&f5, 2, 100).unwrap();
        assert_eq!((c.size(), c.n()), (25, 4));
        assert_eq!(min_distance(&c, u128::MAX).unwrap(), 3);

        let f7 = FiniteField::new(7).unwrap();
        assert_eq!(
            rs_code(&f7, 3, 100).unwrap_err(),
            Error::TooLarge { count: 343, cap: 100 }
        );
        assert_eq!(min_distance(&rs_code(&f7, 2, 100).unwrap(), u128::MAX).unwrap(), 5);
        let f8 = FiniteField::new(8).unwrap();
        assert_eq!(min_distance(&rs_code(&f8, 2, 100).unwrap(), u128::MAX).unwrap(), 6);
    }

    #[test]
    fn min_distance_errors() {
        let c = Code::from_rows(2, vec![vec![0, 0, 0], vec![1, 1, 1]]).unwrap();
        assert_eq!(min_distance(&c, 10).unwrap(), 3);
        let single = Code::from_rows(2, vec![vec![0, 1]]).unwrap();
        assert_eq!(min_distance(&single, 10), Err(Error::SingleWord));
        let f = FiniteField::new(5).unwrap();
        let c = rs_code(&f, 2, 100).unwrap();
        assert!(matches!(min_distance(&c, 10), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn code_validation() {
        assert!(matches!(
            Code::from_rows(2, vec![vec![0, 1], vec![0, 1]]),
            Err(Error::InvalidCode(_))
        ));
        assert!(matches!(
            Code::from_rows(2, vec![vec![0, 1], vec![0]]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(Code::from_rows(2, vec![vec![0, 2]]), Err(Error::InvalidCode(_))));
        assert!(matches!(Code::from_rows(2, vec![]), Err(Error::InvalidCode(_))));
    }

    #[test]
    fn rs_parameters() {
        let s = RsCodeSpec::new(7, 3).unwrap();
        assert_eq!((s.n(), s.d()), (6, 4));
        assert!(RsCodeSpec::new(7, 7).is_err());
        assert!(RsCodeSpec::new(7, 0).is_err());
    }
}
