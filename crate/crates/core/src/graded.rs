//! Graded exterior algebra machinery: Koszul signs, unshuffles, wedge words
//! of homogeneous elements, and the coderivation extension of k-ary maps.
//!
//! Words live in the exterior algebra with the relation
//! `v ^ w = -(-1)^{deg(v) deg(w)} w ^ v`, so an adjacent swap of factors with
//! degrees p, q multiplies the sign by `-(-1)^{pq}`: two odd-degree factors
//! commute (`f ^ f != 0`), while a repeated even-degree factor kills the
//! word.

use crate::exact_poly::{rat_int, Rational};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum GradedError {
    #[error("malformed permutation {0:?}")]
    MalformedPermutation(Vec<usize>),
    #[error("degree list length {degs} does not match permutation length {perm}")]
    LengthMismatch { perm: usize, degs: usize },
    #[error("unshuffle block size {i} out of range 1..={n}")]
    BlockOutOfRange { i: usize, n: usize },
    #[error("map arity {arity} exceeds word length {len}")]
    ArityExceedsWord { arity: usize, len: usize },
}

/// Homogeneous element of a graded vector space. The `id` is a stable
/// insertion id used to break ties in the canonical factor order, so
/// equality of canonical words is syntactic.
pub trait GradedElement: Clone {
    fn degree(&self) -> i64;
    fn id(&self) -> u64;
    fn is_zero(&self) -> bool;
}

fn validate_perm(perm: &[usize]) -> Result<(), GradedError> {
    let n = perm.len();
    let mut seen = vec![false; n];
    for &v in perm {
        if v >= n || seen[v] {
            return Err(GradedError::MalformedPermutation(perm.to_vec()));
        }
        seen[v] = true;
    }
    Ok(())
}

/// Ordinary permutation parity `(-1)^sigma` (one-line notation, 0-based).
pub fn perm_parity(perm: &[usize]) -> Result<i64, GradedError> {
    validate_perm(perm)?;
    let mut inv = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    Ok(if inv % 2 == 0 { 1 } else { -1 })
}

/// Koszul sign of rearranging `x_1 ^ ... ^ x_n` into
/// `x_{sigma(1)} ^ ... ^ x_{sigma(n)}` in the free graded-commutative
/// algebra: a factor `(-1)^{pq}` per crossing of degrees p and q. The result
/// is independent of the adjacent-transposition decomposition.
pub fn koszul_sign(perm: &[usize], degs: &[i64]) -> Result<i64, GradedError> {
    validate_perm(perm)?;
    if perm.len() != degs.len() {
        return Err(GradedError::LengthMismatch {
            perm: perm.len(),
            degs: degs.len(),
        });
    }
    // Bubble-sort the one-line notation back to the identity; every adjacent
    // swap of values u, v crosses x_u past x_v.
    let mut vals = perm.to_vec();
    let mut sign = 1i64;
    for i in 1..vals.len() {
        let mut j = i;
        while j > 0 && vals[j - 1] > vals[j] {
            if (degs[vals[j - 1]] * degs[vals[j]]).rem_euclid(2) == 1 {
                sign = -sign;
            }
            vals.swap(j - 1, j);
            j -= 1;
        }
    }
    Ok(sign)
}

/// All (i, n-i)-unshuffles in lexicographic order: permutations with
/// `sigma(1) < ... < sigma(i)` and `sigma(i+1) < ... < sigma(n)`, returned in
/// one-line notation (0-based).
pub fn unshuffles(i: usize, n: usize) -> Result<Vec<Vec<usize>>, GradedError> {
    if i == 0 || i > n {
        return Err(GradedError::BlockOutOfRange { i, n });
    }
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (0..i).collect();
    loop {
        let mut perm = combo.clone();
        perm.extend((0..n).filter(|v| !combo.contains(v)));
        out.push(perm);
        // next lexicographic combination
        let mut k = i;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if combo[k] < n - (i - k) {
                combo[k] += 1;
                for t in k + 1..i {
                    combo[t] = combo[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Wedge word of homogeneous factors in canonical order with an accumulated
/// sign; `None`-like zero words are represented by the empty option at the
/// construction sites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedWord<T: GradedElement> {
    factors: Vec<T>,
    sign: i64,
}

impl<T: GradedElement> GradedWord<T> {
    /// Builds and normalizes a word. Returns `None` when the word is zero
    /// (a zero factor, or a repeated even-degree factor).
    pub fn new(factors: Vec<T>) -> Option<Self> {
        Self::with_sign(factors, 1)
    }

    pub fn with_sign(factors: Vec<T>, sign: i64) -> Option<Self> {
        let mut w = GradedWord { factors, sign };
        if w.normalize() {
            Some(w)
        } else {
            None
        }
    }

    /// Insertion sort by (degree, id) flipping the sign per adjacent swap.
    /// Returns false if the word normalizes to zero.
    fn normalize(&mut self) -> bool {
        if self.factors.iter().any(|f| f.is_zero()) {
            return false;
        }
        let key = |f: &T| (f.degree(), f.id());
        for i in 1..self.factors.len() {
            let mut j = i;
            while j > 0 && key(&self.factors[j - 1]) > key(&self.factors[j]) {
                let (p, q) = (self.factors[j - 1].degree(), self.factors[j].degree());
                // v ^ w = -(-1)^{pq} w ^ v
                self.sign = -self.sign;
                if (p * q).rem_euclid(2) == 1 {
                    self.sign = -self.sign;
                }
                self.factors.swap(j - 1, j);
                j -= 1;
            }
        }
        !self
            .factors
            .windows(2)
            .any(|w| w[0].id() == w[1].id() && w[0].degree() == w[1].degree() && w[0].degree() % 2 == 0)
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn sign(&self) -> i64 {
        self.sign
    }

    pub fn factors(&self) -> &[T] {
        &self.factors
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.factors.iter().map(|f| f.degree()).collect()
    }

    pub fn total_degree(&self) -> i64 {
        self.factors.iter().map(|f| f.degree()).sum()
    }

    fn ids(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.id()).collect()
    }
}

/// Formal rational-linear combination of canonical words; like words merged,
/// zero coefficients dropped.
#[derive(Clone, Debug)]
pub struct GradedSum<T: GradedElement> {
    terms: Vec<(Rational, GradedWord<T>)>,
}

impl<T: GradedElement> Default for GradedSum<T> {
    fn default() -> Self {
        GradedSum { terms: Vec::new() }
    }
}

impl<T: GradedElement> GradedSum<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_word(&mut self, coeff: Rational, word: GradedWord<T>) {
        let coeff = coeff * rat_int(word.sign);
        let word = GradedWord {
            sign: 1,
            factors: word.factors,
        };
        if coeff.is_zero() {
            return;
        }
        let ids = word.ids();
        if let Some(entry) = self.terms.iter_mut().find(|(_, w)| w.ids() == ids) {
            entry.0 += coeff;
        } else {
            self.terms.push((coeff, word));
        }
        self.terms.retain(|(c, _)| !c.is_zero());
    }

    pub fn terms(&self) -> &[(Rational, GradedWord<T>)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Extends a k-ary map to the whole exterior algebra as a coderivation: the
/// signed sum over (k, n-k)-unshuffles of
/// `(-1)^sigma eps(sigma) l(x_{sigma(1)},...,x_{sigma(k)}) ^ rest`.
/// `l` returning `None` means the zero element.
pub fn extend_coderivation<T, F>(
    arity: usize,
    l: F,
    word: &GradedWord<T>,
) -> Result<GradedSum<T>, GradedError>
where
    T: GradedElement,
    F: Fn(&[T]) -> Option<T>,
{
    let n = word.len();
    if arity > n {
        return Err(GradedError::ArityExceedsWord { arity, len: n });
    }
    let degs = word.degrees();
    let mut out = GradedSum::zero();
    for sigma in unshuffles(arity, n)? {
        let sign = perm_parity(&sigma)? * koszul_sign(&sigma, &degs)?;
        let selected: Vec<T> = sigma[..arity]
            .iter()
            .map(|&v| word.factors[v].clone())
            .collect();
        let image = match l(&selected) {
            Some(x) if !x.is_zero() => x,
            _ => continue,
        };
        let mut factors = vec![image];
        factors.extend(sigma[arity..].iter().map(|&v| word.factors[v].clone()));
        if let Some(w) = GradedWord::with_sign(factors, sign * word.sign) {
            out.add_word(Rational::from_integer(1.into()), w);
        }
    }
    Ok(out)
}
