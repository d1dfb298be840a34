//! Naive reference implementations used as oracles by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::Rng;
use sepcode::{Code, Codeword};

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn as_prime_power(q: u64) -> Option<(u64, u32)> {
    let p = (2..=q).find(|d| q % d == 0)?;
    if !is_prime(p) {
        return None;
    }
    let (mut r, mut m) = (q, 0);
    while r % p == 0 {
        r /= p;
        m += 1;
    }
    (r == 1).then_some((p, m))
}

pub fn prime_powers(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&q| as_prime_power(q).is_some()).collect()
}

/// GF(p^m) by schoolbook polynomial arithmetic on digit vectors.
pub struct NaiveField {
    pub p: u32,
    pub m: u32,
    pub red: Vec<u32>,
}

fn poly_rem(mut a: Vec<u32>, b: &[u32], p: u32) -> Vec<u32> {
    let db = b.len() - 1;
    let lead_inv = (1..p).find(|x| x * b[db] % p == 1).unwrap();
    while a.len() > db {
        let c = a[a.len() - 1] * lead_inv % p;
        let shift = a.len() - 1 - db;
        for (i, &bi) in b.iter().enumerate() {
            a[shift + i] = (a[shift + i] + p * p - c * bi % p) % p;
        }
        a.pop();
        while a.last() == Some(&0) && a.len() > db {
            a.pop();
        }
    }
    a
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn digits(mut v: u32, p: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

/// Monic, degree `deg`, lower coefficients from the base-p digits of `lower`.
fn monic(deg: u32, lower: u32, p: u32) -> Vec<u32> {
    let mut f = digits(lower, p, deg as usize);
    f.push(1);
    f
}

pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() as u32 - 1;
    for d in 1..=deg / 2 {
        for lower in 0..p.pow(d) {
            let g = monic(d, lower, p);
            if poly_rem(f.to_vec(), &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl NaiveField {
    pub fn new(q: u64) -> Self {
        let (p, m) = as_prime_power(q).expect("prime power");
        let p = p as u32;
        let red = if m == 1 {
            vec![0, 1]
        } else {
            (0..p.pow(m))
                .map(|lower| monic(m, lower, p))
                .find(|f| is_irreducible(f, p))
                .unwrap()
        };
        NaiveField { p, m, red }
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.m)
    }

    fn to_digits(&self, a: u32) -> Vec<u32> {
        digits(a, self.p, self.m as usize)
    }

    fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s: Vec<u32> = self
            .to_digits(a)
            .iter()
            .zip(self.to_digits(b))
            .map(|(x, y)| (x + y) % self.p)
            .collect();
        self.from_digits(&s)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return a * b % self.p;
        }
        let prod = poly_mul(&self.to_digits(a), &self.to_digits(b), self.p);
        let mut r = poly_rem(prod, &self.red, self.p);
        r.resize(self.m as usize, 0);
        self.from_digits(&r)
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        (0..e).fold(1, |acc, _| self.mul(acc, a))
    }

    pub fn order(&self, a: u32) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}

/// Every word of `desc U`, listed out.
pub fn naive_desc(u: &[&Codeword]) -> BTreeSet<Vec<u32>> {
    let n = u[0].len();
    (0..n)
        .map(|i| u.iter().map(|w| w.0[i]).collect::<BTreeSet<_>>().into_iter().collect::<Vec<_>>())
        .multi_cartesian_product()
        .collect()
}

/// Every word of the feasible set `F(U)` over the alphabet `0..q`.
pub fn naive_feasible(u: &[&Codeword], q: u32) -> BTreeSet<Vec<u32>> {
    let n = u[0].len();
    (0..n)
        .map(|i| {
            let c = u[0].0[i];
            if u.iter().all(|w| w.0[i] == c) {
                vec![c]
            } else {
                (0..q).collect()
            }
        })
        .multi_cartesian_product()
        .collect()
}

fn disjoint_pairs(m: usize, w1: usize, w2: usize) -> impl Iterator<Item = (Vec<usize>, Vec<usize>)> {
    (1..=w1.min(m)).flat_map(move |a| {
        (0..m).combinations(a).flat_map(move |u| {
            let rest: Vec<usize> = (0..m).filter(|i| !u.contains(i)).collect();
            (1..=w2.min(rest.len()))
                .flat_map(move |b| rest.clone().into_iter().combinations(b))
                .map(move |v| (u.clone(), v))
        })
    })
}

fn pick<'a>(code: &'a Code, idx: &[usize]) -> Vec<&'a Codeword> {
    idx.iter().map(|&i| code.word(i)).collect()
}

/// A disjoint pair whose descendant sets meet, by listing both sets.
pub fn naive_separation_violation(code: &Code, w1: usize, w2: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    disjoint_pairs(code.size(), w1, w2).find(|(u, v)| {
        let du = naive_desc(&pick(code, u));
        naive_desc(&pick(code, v)).iter().any(|x| du.contains(x))
    })
}

pub fn naive_restricted_violation(code: &Code, w1: usize, w2: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    disjoint_pairs(code.size(), w1, w2).find(|(u, v)| {
        let fu = naive_feasible(&pick(code, u), code.q());
        naive_feasible(&pick(code, v), code.q()).iter().any(|x| fu.contains(x))
    })
}

/// Whether every word in some descendant set of a coalition of size at most
/// `w` has a member common to all such coalitions.
pub fn naive_ipp(code: &Code, w: usize) -> bool {
    let m = code.size();
    let coalitions: Vec<(Vec<usize>, BTreeSet<Vec<u32>>)> = (1..=w.min(m))
        .flat_map(|a| (0..m).combinations(a))
        .map(|c| {
            let d = naive_desc(&pick(code, &c));
            (c, d)
        })
        .collect();
    (0..code.n())
        .map(|_| 0..code.q())
        .multi_cartesian_product()
        .all(|x| {
            let covering: Vec<&Vec<usize>> =
                coalitions.iter().filter(|(_, d)| d.contains(&x)).map(|(c, _)| c).collect();
            covering.is_empty()
                || covering[0]
                    .iter()
                    .any(|i| covering.iter().all(|c| c.contains(i)))
        })
}

pub fn random_words<R: Rng>(rng: &mut R, q: u32, n: usize, m: usize) -> Vec<Codeword> {
    (0..m).map(|_| Codeword((0..n).map(|_| rng.gen_range(0..q)).collect())).collect()
}

/// A random code with `m` distinct words, or `None` if `q^n < m`.
pub fn random_code<R: Rng>(rng: &mut R, q: u32, n: usize, m: usize) -> Option<Code> {
    if (q as u128).pow(n as u32) < m as u128 {
        return None;
    }
    let mut seen = BTreeSet::new();
    while seen.len() < m {
        seen.insert(Codeword((0..n).map(|_| rng.gen_range(0..q)).collect()));
    }
    let mut words: Vec<Codeword> = seen.into_iter().collect();
    // keep word order random so index-based tie-breaks are exercised
    for i in (1..words.len()).rev() {
        words.swap(i, rng.gen_range(0..=i));
    }
    Some(Code::new(q, words).unwrap())
}

/// All codes over `{0,1}^n` (as nonempty subsets, by bitmask).
pub fn all_binary_codes(n: usize) -> impl Iterator<Item = Code> {
    let space = 1usize << n;
    (1u64..(1u64 << space)).map(move |mask| {
        let words = (0..space)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| Codeword((0..n).map(|b| (i >> (n - 1 - b) & 1) as u32).collect()))
            .collect();
        Code::new(2, words).unwrap()
    })
}
