//! Finite fields GF(p^m) with exp/log tables.
//!
//! Elements are encoded by the base-`p` integer of their coefficient vector
//! over GF(p) (constant coefficient as the least significant digit), so the
//! integer order of encodings gives a canonical element order used for every
//! tie-break downstream.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// A field element, stored as its coefficient-vector index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Characteristic, degree and reduction polynomial of a field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    pub q: u32,
    /// Monic reduction polynomial over GF(p), constant term first. For prime
    /// fields this is the placeholder `x`.
    pub reduction: Vec<u32>,
}

/// Which points an image is taken over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// All of F_q.
    All,
    /// F_q^* only.
    Nonzero,
}

#[derive(Clone, Debug)]
pub struct FiniteField {
    spec: FieldSpec,
    alpha: FieldElement,
    // exp has 2(q-1) entries so that exp[log a + log b] needs no reduction
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Splits `q` into `(p, m)` with `q = p^m`, or `None` when `q` is not a prime
/// power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = smallest_prime_factor(q);
    let mut rest = q;
    let mut m = 0;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 1;
    }
    n
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Arithmetic on polynomials over the prime field, used only while building
/// the extension field. Coefficients are constant term first with no
/// trailing zeros (the zero polynomial is empty).
mod prime_poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    /// Remainder of `a` modulo the monic polynomial `b`.
    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut r = trim(a.to_vec());
        let db = b.len() - 1;
        while r.len() > db {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - db;
            for (i, &c) in b.iter().enumerate() {
                let sub = (lead * c) % p;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    /// Monic polynomial of degree `deg` whose lower coefficients are the
    /// base-`p` digits of `lower`.
    pub fn monic(deg: u32, mut lower: u32, p: u32) -> Vec<u32> {
        let mut f = Vec::with_capacity(deg as usize + 1);
        for _ in 0..deg {
            f.push(lower % p);
            lower /= p;
        }
        f.push(1);
        f
    }

    /// Exhaustive trial division by every monic polynomial of degree at most
    /// half of `f`'s.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let deg = (f.len() - 1) as u32;
        for d in 1..=deg / 2 {
            for lower in 0..p.pow(d) {
                let g = monic(d, lower, p);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

impl FiniteField {
    /// Builds GF(q). The reduction polynomial is the monic irreducible of
    /// degree m whose lower coefficient vector has the smallest index, and
    /// alpha is the smallest-index element of order q-1.
    pub fn new(q: u64) -> Result<Self> {
        let (p, m) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > u32::MAX as u64 / 2 {
            return Err(Error::BadParameters(format!("field order {q} too large")));
        }
        let (p, q) = (p as u32, q as u32);
        let reduction = if m == 1 {
            vec![0, 1]
        } else {
            (0..p.pow(m))
                .map(|lower| prime_poly::monic(m, lower, p))
                .find(|f| prime_poly::is_irreducible(f, p))
                .expect("an irreducible polynomial of every degree exists")
        };
        let spec = FieldSpec { p, m, q, reduction };

        let slow_mul = |a: u32, b: u32| -> u32 {
            let prod = prime_poly::mul(&digits(a, p), &digits(b, p), p);
            undigits(&prime_poly::rem(&prod, &spec.reduction, p), p)
        };
        let slow_pow = |mut base: u32, mut e: u64| -> u32 {
            let mut acc = 1;
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                e >>= 1;
            }
            acc
        };

        let group = (q - 1) as u64;
        let factors = prime_factors(group);
        let alpha = (1..q)
            .find(|&g| {
                slow_pow(g, group) == 1 && factors.iter().all(|&r| slow_pow(g, group / r) != 1)
            })
            .expect("multiplicative group of a finite field is cyclic");

        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..n {
            exp[i] = x;
            log[x as usize] = i as u32;
            x = slow_mul(x, alpha);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }

        Ok(FiniteField {
            spec,
            alpha: FieldElement(alpha),
            exp,
            log,
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn order(&self) -> u32 {
        self.spec.q
    }

    pub fn characteristic(&self) -> u32 {
        self.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.spec.m
    }

    pub fn alpha(&self) -> FieldElement {
        self.alpha
    }

    pub fn exp_table(&self) -> &[u32] {
        &self.exp[..(self.spec.q - 1) as usize]
    }

    pub fn log_table(&self) -> &[u32] {
        &self.log
    }

    pub fn element(&self, index: u32) -> FieldElement {
        debug_assert!(index < self.spec.q);
        FieldElement(index)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.spec.q).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.spec.q).map(FieldElement)
    }

    /// The prime-field scalar `c mod p` as a field element.
    pub fn scalar(&self, c: u64) -> FieldElement {
        FieldElement((c % self.spec.p as u64) as u32)
    }

    /// alpha^e for any integer exponent.
    pub fn alpha_pow(&self, e: i64) -> FieldElement {
        let n = (self.spec.q - 1) as i64;
        FieldElement(self.exp[e.rem_euclid(n) as usize])
    }

    /// Discrete logarithm to base alpha.
    pub fn log(&self, x: FieldElement) -> Option<u32> {
        (!x.is_zero()).then(|| self.log[x.0 as usize])
    }

    pub fn coefficients(&self, x: FieldElement) -> Vec<u32> {
        let mut v = digits(x.0, self.spec.p);
        v.resize(self.spec.m as usize, 0);
        v
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.spec.p;
        if p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (mut a, mut b) = (a.0, b.0);
        let (mut out, mut place) = (0, 1);
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.spec.p;
        if p == 2 {
            return a;
        }
        let mut a = a.0;
        let (mut out, mut place) = (0, 1);
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    /// Multiplication by the integer `c` (repeated addition).
    pub fn times(&self, c: u64, a: FieldElement) -> FieldElement {
        self.mul(self.scalar(c), a)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let i = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElement(self.exp[i as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.spec.q - 1;
        Ok(FieldElement(self.exp[((n - self.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let n = (self.spec.q - 1) as u64;
        let i = (self.log[a.0 as usize] as u64 * (e % n)) % n;
        FieldElement(self.exp[i as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FieldElement) -> Result<u32> {
        let l = self.log(a).ok_or(Error::DivisionByZero)?;
        let n = self.spec.q - 1;
        Ok(n / l.gcd(&n))
    }

    /// Horner evaluation.
    pub fn eval(&self, f: &Poly, x: FieldElement) -> FieldElement {
        f.coeffs()
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// `{f(b) : b in domain}`.
    pub fn image(&self, f: &Poly, domain: Domain) -> BTreeSet<FieldElement> {
        let start = match domain {
            Domain::All => 0,
            Domain::Nonzero => 1,
        };
        (start..self.spec.q)
            .map(|i| self.eval(f, FieldElement(i)))
            .collect()
    }

    /// GF(p)-basis of an additive subgroup, greedily taking elements in
    /// ascending index order that are independent of those already taken.
    pub fn subspace_basis(&self, set: &BTreeSet<FieldElement>) -> Result<Vec<FieldElement>> {
        if !set.contains(&FieldElement::ZERO) {
            return Err(Error::NotASubspace);
        }
        for &a in set {
            for &b in set {
                if !set.contains(&self.add(a, b)) {
                    return Err(Error::NotASubspace);
                }
            }
        }
        let p = self.spec.p;
        let m = self.spec.m as usize;
        // rows kept in echelon form keyed by pivot column
        let mut echelon: Vec<(usize, Vec<u32>)> = Vec::new();
        let mut basis = Vec::new();
        for &x in set {
            let mut v = self.coefficients(x);
            for (pivot, row) in &echelon {
                let c = v[*pivot];
                if c != 0 {
                    for j in 0..m {
                        v[j] = (v[j] + p - (c * row[j]) % p) % p;
                    }
                }
            }
            if let Some(pivot) = v.iter().position(|&c| c != 0) {
                let inv = inv_mod(v[pivot], p);
                for c in v.iter_mut() {
                    *c = (*c * inv) % p;
                }
                for (_, row) in echelon.iter_mut() {
                    let c = row[pivot];
                    if c != 0 {
                        for j in 0..m {
                            row[j] = (row[j] + p - (c * v[j]) % p) % p;
                        }
                    }
                }
                echelon.push((pivot, v));
                basis.push(x);
            }
        }
        Ok(basis)
    }

    /// All GF(p)-linear combinations of `basis`.
    pub fn span(&self, basis: &[FieldElement]) -> BTreeSet<FieldElement> {
        let mut out = BTreeSet::from([FieldElement::ZERO]);
        for &b in basis {
            let multiples: Vec<FieldElement> =
                (0..self.spec.p as u64).map(|c| self.times(c, b)).collect();
            out = out
                .iter()
                .flat_map(|&s| multiples.iter().map(move |&t| (s, t)))
                .map(|(s, t)| self.add(s, t))
                .collect();
        }
        out
    }

    /// Smallest-index generator of a multiplicative subgroup of F_q^*.
    pub fn cyclic_generator(&self, set: &BTreeSet<FieldElement>) -> Result<FieldElement> {
        if set.is_empty() || set.contains(&FieldElement::ZERO) || !set.contains(&FieldElement::ONE) {
            return Err(Error::NotASubgroup);
        }
        for &a in set {
            for &b in set {
                if !set.contains(&self.mul(a, b)) {
                    return Err(Error::NotASubgroup);
                }
            }
        }
        let size = set.len() as u32;
        set.iter()
            .copied()
            .find(|&g| self.multiplicative_order(g).ok() == Some(size))
            .ok_or(Error::NotASubgroup)
    }

    /// Sumset `E + F`.
    pub fn sumset(&self, e: &BTreeSet<FieldElement>, f: &BTreeSet<FieldElement>) -> BTreeSet<FieldElement> {
        e.iter()
            .flat_map(|&a| f.iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.add(a, b))
            .collect()
    }

    /// Product set `E F`.
    pub fn productset(&self, e: &BTreeSet<FieldElement>, f: &BTreeSet<FieldElement>) -> BTreeSet<FieldElement> {
        e.iter()
            .flat_map(|&a| f.iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.mul(a, b))
            .collect()
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    (1..p).find(|&x| (a * x) % p == 1).expect("p is prime")
}

fn digits(mut x: u32, p: u32) -> Vec<u32> {
    let mut v = Vec::new();
    while x > 0 {
        v.push(x % p);
        x /= p;
    }
    v
}

fn undigits(v: &[u32], p: u32) -> u32 {
    v.iter().rev().fold(0, |acc, &d| acc * p + d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u32]) -> BTreeSet<FieldElement> {
        v.iter().map(|&i| FieldElement(i)).collect()
    }

    #[test]
    fn prime_field_seven() {
        let f = FiniteField::new(7).unwrap();
        assert_eq!((f.characteristic(), f.degree()), (7, 1));
        assert_eq!(f.alpha(), FieldElement(3));
        assert_eq!(f.mul(FieldElement(3), FieldElement(5)), FieldElement(1));
    }

    #[test]
    fn gf8_reduction_and_product() {
        let f = FiniteField::new(8).unwrap();
        assert_eq!(f.spec().reduction, vec![1, 1, 0, 1]);
        // x * x^2 = x^3 = x + 1
        assert_eq!(f.mul(FieldElement(0b010), FieldElement(0b100)), FieldElement(0b011));
    }

    #[test]
    fn not_prime_power() {
        assert_eq!(FiniteField::new(6).unwrap_err(), Error::NotPrimePower(6));
        assert_eq!(FiniteField::new(1).unwrap_err(), Error::NotPrimePower(1));
        assert!(prime_power(12).is_none());
        assert_eq!(prime_power(81), Some((3, 4)));
    }

    #[test]
    fn inverse_of_zero() {
        let f = FiniteField::new(9).unwrap();
        assert_eq!(f.inv(FieldElement::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn eval_examples() {
        let f7 = FiniteField::new(7).unwrap();
        let sq = Poly::monomial(FieldElement::ONE, 2);
        assert_eq!(f7.eval(&sq, FieldElement(3)), FieldElement(2));
        let c = Poly::constant(FieldElement(5));
        assert!(f7.elements().all(|x| f7.eval(&c, x) == FieldElement(5)));

        let f8 = FiniteField::new(8).unwrap();
        let a = f8.alpha();
        let g = Poly::new(vec![FieldElement::ZERO, FieldElement::ONE, FieldElement::ONE]);
        assert_eq!(f8.eval(&g, a), f8.add(f8.mul(a, a), a));
    }

    #[test]
    fn images() {
        let f7 = FiniteField::new(7).unwrap();
        let sq = Poly::monomial(FieldElement::ONE, 2);
        assert_eq!(f7.image(&sq, Domain::Nonzero), set(&[1, 2, 4]));

        let f5 = FiniteField::new(5).unwrap();
        let x = Poly::monomial(FieldElement::ONE, 1);
        assert_eq!(f5.image(&x, Domain::Nonzero), set(&[1, 2, 3, 4]));

        let f8 = FiniteField::new(8).unwrap();
        let g = Poly::new(vec![FieldElement::ZERO, FieldElement::ONE, FieldElement::ONE]);
        let im = f8.image(&g, Domain::All);
        assert_eq!(im.len(), 4);
        assert_eq!(f8.sumset(&im, &im), im);
    }

    #[test]
    fn bases() {
        let f8 = FiniteField::new(8).unwrap();
        assert!(f8.subspace_basis(&set(&[0])).unwrap().is_empty());
        let g = Poly::new(vec![FieldElement::ZERO, FieldElement::ONE, FieldElement::ONE]);
        let im = f8.image(&g, Domain::All);
        let basis = f8.subspace_basis(&im).unwrap();
        assert_eq!(basis.len(), 2);
        assert_eq!(f8.span(&basis), im);

        let f9 = FiniteField::new(9).unwrap();
        let all: BTreeSet<_> = f9.elements().collect();
        assert_eq!(f9.subspace_basis(&all).unwrap().len(), 2);
        assert_eq!(f9.subspace_basis(&set(&[0, 1])), Err(Error::NotASubspace));
        assert_eq!(f9.subspace_basis(&set(&[1, 2])), Err(Error::NotASubspace));
    }

    #[test]
    fn generators() {
        let f7 = FiniteField::new(7).unwrap();
        assert_eq!(f7.cyclic_generator(&set(&[1, 2, 4])), Ok(FieldElement(2)));
        assert_eq!(f7.cyclic_generator(&set(&[1])), Ok(FieldElement(1)));
        assert_eq!(f7.cyclic_generator(&set(&[1, 3])), Err(Error::NotASubgroup));
        assert_eq!(f7.cyclic_generator(&set(&[0, 1])), Err(Error::NotASubgroup));
        let f5 = FiniteField::new(5).unwrap();
        assert_eq!(f5.cyclic_generator(&set(&[1, 2, 3, 4])), Ok(FieldElement(2)));
    }

    #[test]
    fn deterministic_construction() {
        let a = FiniteField::new(81).unwrap();
        let b = FiniteField::new(81).unwrap();
        assert_eq!(a.exp_table(), b.exp_table());
        assert_eq!(a.spec(), b.spec());
    }
}
