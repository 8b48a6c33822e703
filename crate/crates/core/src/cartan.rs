//! Polynomial-coefficient Cartan calculus on R^n: multivector fields,
//! differential forms, the de Rham differential, interior products, Lie
//! derivatives, and the Schouten-Nijenhuis bracket.
//!
//! Sign convention for the Schouten bracket (the single place it is fixed;
//! all downstream modules inherit it):
//!   [X, f] = X(f)           for a vector field X and function f,
//!   [X, Y] = Lie bracket    for vector fields,
//!   [P, Q ^ R] = [P, Q] ^ R + (-1)^{(p-1) q} Q ^ [P, R],
//!   [P, Q] = -(-1)^{(p-1)(q-1)} [Q, P].
//! The convention is calibrated by the graded Jacobi property test and by
//! `[pi, pi] = 0` for the linear so(3) Poisson structure.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use crate::exact_poly::{Poly, Rational};

/// Basis marker: components over `d/dx_{i1} ^ ... ^ d/dx_{ik}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum VectorBasis {}
/// Basis marker: components over `dx_{i1} ^ ... ^ dx_{ik}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum CovectorBasis {}

/// Alternating tensor with `Poly` components over strictly increasing index
/// tuples (0-based). Degrees above `n` are stored as the canonical zero.
#[derive(PartialEq, Eq)]
pub struct Alternating<B> {
    n: usize,
    degree: usize,
    comps: BTreeMap<Vec<usize>, Poly>,
    _basis: PhantomData<B>,
}

// Manual impl: the marker parameter carries no data, so no `B: Clone` bound.
impl<B> Clone for Alternating<B> {
    fn clone(&self) -> Self {
        Alternating {
            n: self.n,
            degree: self.degree,
            comps: self.comps.clone(),
            _basis: PhantomData,
        }
    }
}

pub type Multivector = Alternating<VectorBasis>;
pub type DiffForm = Alternating<CovectorBasis>;

fn parity(swaps: usize) -> i64 {
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sorts `idx` in place; returns `None` on a repeated index, otherwise the
/// sign of the sorting permutation.
fn sort_indices(idx: &mut [usize]) -> Option<i64> {
    let mut swaps = 0;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(parity(swaps))
}

impl<B> Alternating<B> {
    pub fn zero(n: usize, degree: usize) -> Self {
        Alternating {
            n,
            degree,
            comps: BTreeMap::new(),
            _basis: PhantomData,
        }
    }

    /// Degree-0 element: just a function.
    pub fn scalar(n: usize, f: Poly) -> Self {
        let mut t = Self::zero(n, 0);
        if !f.is_zero() {
            t.comps.insert(vec![], f);
        }
        t
    }

    /// Degree-1 basis element with index `i` (0-based).
    pub fn basis(n: usize, i: usize) -> Self {
        assert!(i < n, "basis index out of range");
        let mut t = Self::zero(n, 1);
        t.comps.insert(vec![i], Poly::one(n));
        t
    }

    /// Builds from (index tuple, coefficient) pairs; tuples need not be
    /// sorted, the alternating sign is applied.
    pub fn from_components(
        n: usize,
        degree: usize,
        comps: impl IntoIterator<Item = (Vec<usize>, Poly)>,
    ) -> Self {
        let mut t = Self::zero(n, degree);
        for (idx, c) in comps {
            t.insert_term(idx, c);
        }
        t
    }

    /// Adds `coeff` times the basis element of `idx` (any order), applying
    /// the alternating sign; a repeated index kills the term.
    pub fn insert_term(&mut self, mut idx: Vec<usize>, coeff: Poly) {
        assert_eq!(idx.len(), self.degree, "index tuple length != degree");
        assert_eq!(coeff.n_vars(), self.n, "coefficient dimension mismatch");
        if coeff.is_zero() || self.degree > self.n {
            return;
        }
        assert!(idx.iter().all(|&i| i < self.n), "index out of range");
        let sign = match sort_indices(&mut idx) {
            Some(s) => s,
            None => return,
        };
        let signed = if sign < 0 { coeff.neg() } else { coeff };
        let entry = self
            .comps
            .entry(idx)
            .or_insert_with(|| Poly::zero(self.n));
        *entry = entry.add(&signed);
        if entry.is_zero() {
            let key: Vec<Vec<usize>> = self
                .comps
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in key {
                self.comps.remove(&k);
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly)> {
        self.comps.iter()
    }

    /// Component at a strictly increasing index tuple.
    pub fn component(&self, idx: &[usize]) -> Poly {
        self.comps
            .get(idx)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.n))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        assert_eq!(self.degree, other.degree, "degree mismatch in add");
        let mut out = self.clone();
        for (idx, c) in &other.comps {
            out.insert_term(idx.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        for (idx, c) in &self.comps {
            out.comps.insert(idx.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, f: &Poly) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        for (idx, c) in &self.comps {
            let p = c.mul(f);
            if !p.is_zero() {
                out.comps.insert(idx.clone(), p);
            }
        }
        out
    }

    pub fn scale_rat(&self, r: &Rational) -> Self {
        self.scale(&Poly::constant(self.n, r.clone()))
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self::zero(self.n, self.degree + other.degree);
        for (ia, ca) in &self.comps {
            for (ib, cb) in &other.comps {
                let mut idx = ia.clone();
                idx.extend_from_slice(ib);
                out.insert_term(idx, ca.mul(cb));
            }
        }
        out
    }

    /// Full contraction against an equal-degree partner in the dual basis:
    /// `<d/dx_I, dx_I> = 1` on increasing tuples.
    pub fn pair_full<C>(&self, other: &Alternating<C>) -> Poly {
        assert_eq!(self.n, other.n);
        assert_eq!(self.degree, other.degree, "degree mismatch in pairing");
        let mut acc = Poly::zero(self.n);
        for (idx, c) in &self.comps {
            if let Some(d) = other.comps.get(idx) {
                acc = acc.add(&c.mul(d));
            }
        }
        acc
    }
}

impl<B> fmt::Debug for Alternating<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|(idx, c)| format!("({:?}): {}", idx, c))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Multivector {
    /// A vector field applied to a function as a derivation (degree 1 only).
    pub fn apply(&self, f: &Poly) -> Poly {
        assert_eq!(self.degree, 1, "apply requires a degree-1 multivector");
        let mut acc = Poly::zero(self.n);
        for (idx, c) in &self.comps {
            acc = acc.add(&c.mul(&f.partial(idx[0]).expect("index in range")));
        }
        acc
    }

    /// Jacobi-Lie commutator of two vector fields.
    pub fn vf_bracket(&self, other: &Multivector) -> Multivector {
        assert_eq!(self.degree, 1);
        assert_eq!(other.degree, 1);
        let mut out = Multivector::zero(self.n, 1);
        for i in 0..self.n {
            let yi = other.component(&[i]);
            let xi = self.component(&[i]);
            let c = self.apply(&yi).sub(&other.apply(&xi));
            out.insert_term(vec![i], c);
        }
        out
    }

    /// Schouten-Nijenhuis bracket, degree `p + q - 1`; see the module header
    /// for the sign convention.
    pub fn schouten(&self, other: &Multivector) -> Multivector {
        let (p, q) = (self.degree, other.degree);
        let out_degree = (p + q).saturating_sub(1);
        let mut acc = Multivector::zero(self.n, out_degree);
        for (ia, ca) in &self.comps {
            for (ib, cb) in &other.comps {
                let term = schouten_mono(self.n, ca, ia, cb, ib);
                acc = acc.add(&term);
            }
        }
        acc
    }

    /// `pi(alpha, beta)` for a bivector: full contraction against
    /// `alpha ^ beta`.
    pub fn eval2(&self, alpha: &DiffForm, beta: &DiffForm) -> Poly {
        assert_eq!(self.degree, 2);
        self.pair_full(&alpha.wedge(beta))
    }

    /// `pi-sharp`: the unique vector field with
    /// `<sharp(pi, alpha), beta> = pi(alpha, beta)` for all 1-forms `beta`.
    pub fn sharp(&self, alpha: &DiffForm) -> Multivector {
        assert_eq!(self.degree, 2, "sharp requires a bivector");
        assert_eq!(alpha.degree(), 1);
        let mut out = Multivector::zero(self.n, 1);
        for k in 0..self.n {
            let dxk = DiffForm::basis(self.n, k);
            out.insert_term(vec![k], self.eval2(alpha, &dxk));
        }
        out
    }
}

/// Schouten bracket of two monomial multivectors `f d/dx_I` and `g d/dx_J`.
fn schouten_mono(
    n: usize,
    f: &Poly,
    idx_i: &[usize],
    g: &Poly,
    idx_j: &[usize],
) -> Multivector {
    let (p, q) = (idx_i.len(), idx_j.len());
    match (p, q) {
        (0, 0) => Multivector::zero(n, 0),
        (1, 0) => {
            // [X, g] = X(g)
            let c = f.mul(&g.partial(idx_i[0]).unwrap());
            Multivector::scalar(n, c)
        }
        (0, 1) => {
            // [f, Y] = -Y(f)
            let c = g.mul(&f.partial(idx_j[0]).unwrap()).neg();
            Multivector::scalar(n, c)
        }
        (1, 1) => {
            // [f d_i, g d_j] = f (d_i g) d_j - g (d_j f) d_i
            let mut out = Multivector::zero(n, 1);
            out.insert_term(vec![idx_j[0]], f.mul(&g.partial(idx_i[0]).unwrap()));
            out.insert_term(vec![idx_i[0]], g.mul(&f.partial(idx_j[0]).unwrap()).neg());
            out
        }
        (_, q) if q >= 2 => {
            // Q = Y ^ R with Y = g d_{j1} carrying the coefficient.
            let y_idx = [idx_j[0]];
            let rest = &idx_j[1..];
            let one = Poly::one(n);
            // [P, Y] ^ R
            let mut r_mv = Multivector::zero(n, rest.len());
            r_mv.insert_term(rest.to_vec(), one.clone());
            let term1 = schouten_mono(n, f, idx_i, g, &y_idx).wedge(&r_mv);
            // (-1)^{p-1} Y ^ [P, R]
            let mut y_mv = Multivector::zero(n, 1);
            y_mv.insert_term(vec![idx_j[0]], g.clone());
            let inner = schouten_mono(n, f, idx_i, &one, rest);
            let mut term2 = y_mv.wedge(&inner);
            if (p as i64 - 1).rem_euclid(2) == 1 {
                term2 = term2.neg();
            }
            term1.add(&term2)
        }
        _ => {
            // p >= 2, q <= 1: graded antisymmetry [P,Q] = -(-1)^{(p-1)(q-1)}[Q,P].
            let swapped = schouten_mono(n, g, idx_j, f, idx_i);
            let exp = (p as i64 - 1) * (q as i64 - 1);
            if exp.rem_euclid(2) == 0 {
                swapped.neg()
            } else {
                swapped
            }
        }
    }
}

impl DiffForm {
    /// De Rham differential; a top-degree input yields the canonical zero of
    /// degree `k + 1`.
    pub fn de_rham_d(&self) -> DiffForm {
        let mut out = DiffForm::zero(self.n, self.degree + 1);
        for (idx, c) in &self.comps {
            for i in 0..self.n {
                let dc = c.partial(i).unwrap();
                if dc.is_zero() {
                    continue;
                }
                let mut new_idx = vec![i];
                new_idx.extend_from_slice(idx);
                out.insert_term(new_idx, dc);
            }
        }
        out
    }

    /// Interior product with a degree-1 multivector; errors on degree-0
    /// input are the caller's: this asserts `degree >= 1`.
    pub fn interior(&self, x: &Multivector) -> DiffForm {
        assert!(self.degree >= 1, "interior product needs degree >= 1");
        assert_eq!(x.degree(), 1);
        let mut out = DiffForm::zero(self.n, self.degree - 1);
        for (idx, c) in &self.comps {
            for (t, &i) in idx.iter().enumerate() {
                let xi = x.component(&[i]);
                if xi.is_zero() {
                    continue;
                }
                let mut rest: Vec<usize> = idx.clone();
                rest.remove(t);
                let mut coeff = c.mul(&xi);
                if t % 2 == 1 {
                    coeff = coeff.neg();
                }
                out.insert_term(rest, coeff);
            }
        }
        out
    }

    /// Lie derivative along a vector field via the Cartan formula
    /// `L_X = i_X d + d i_X` (plain derivation `X(f)` in degree 0).
    pub fn lie_derivative(&self, x: &Multivector) -> DiffForm {
        if self.degree == 0 {
            let f = self.component(&[]);
            return DiffForm::scalar(self.n, x.apply(&f));
        }
        let a = self.de_rham_d().interior(x);
        let b = self.interior(x).de_rham_d();
        a.add(&b)
    }

    /// Evaluation of a 1-form on a vector field.
    pub fn eval1(&self, x: &Multivector) -> Poly {
        assert_eq!(self.degree, 1);
        assert_eq!(x.degree(), 1);
        let mut acc = Poly::zero(self.n);
        for (idx, c) in &self.comps {
            acc = acc.add(&c.mul(&x.component(idx)));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::{rat, rat_int};

    fn p(s: &str) -> Poly {
        Poly::parse(s, 3).unwrap()
    }

    fn vf(comps: [&str; 3]) -> Multivector {
        Multivector::from_components(
            3,
            1,
            comps.iter().enumerate().map(|(i, s)| (vec![i], p(s))),
        )
    }

    fn so3_poisson() -> Multivector {
        Multivector::from_components(
            3,
            2,
            [
                (vec![0, 1], p("x3")),
                (vec![1, 2], p("x1")),
                (vec![2, 0], p("x2")),
            ],
        )
    }

    #[test]
    fn de_rham_on_function() {
        let d = DiffForm::scalar(3, p("x1")).de_rham_d();
        assert_eq!(d, DiffForm::basis(3, 0));
    }

    #[test]
    fn de_rham_with_sign_normalization() {
        // d(x3 dx1^dx2) = dx3^dx1^dx2 = dx1^dx2^dx3
        let w = DiffForm::from_components(3, 2, [(vec![0, 1], p("x3"))]);
        let expect = DiffForm::from_components(3, 3, [(vec![0, 1, 2], p("1"))]);
        assert_eq!(w.de_rham_d(), expect);
    }

    #[test]
    fn de_rham_squared_is_zero() {
        let w = DiffForm::from_components(3, 1, [(vec![0], p("x1*x2")), (vec![2], p("x2^2"))]);
        assert!(w.de_rham_d().de_rham_d().is_zero());
        let const_two_form = DiffForm::from_components(3, 2, [(vec![0, 1], p("1"))]);
        assert!(const_two_form.de_rham_d().is_zero());
    }

    #[test]
    fn vf_bracket_examples() {
        let d1 = Multivector::basis(3, 0);
        let d2 = Multivector::basis(3, 1);
        assert!(d1.vf_bracket(&d2).is_zero());
        // [d1, x1 d2] = d2
        let x1d2 = vf(["0", "x1", "0"]);
        assert_eq!(d1.vf_bracket(&x1d2), d2);
        let x = vf(["x2", "x1*x3", "1"]);
        assert!(x.vf_bracket(&x).is_zero());
    }

    #[test]
    fn lie_derivative_examples() {
        let d1 = Multivector::basis(3, 0);
        // L_{d1}(x1 dx2) = dx2
        let w = DiffForm::from_components(3, 1, [(vec![1], p("x1"))]);
        assert_eq!(w.lie_derivative(&d1), DiffForm::basis(3, 1));
        // L_X f = X(f)
        let f = DiffForm::scalar(3, p("x1^2"));
        assert_eq!(f.lie_derivative(&d1), DiffForm::scalar(3, p("2*x1")));
        assert!(DiffForm::basis(3, 1).lie_derivative(&d1).is_zero());
    }

    #[test]
    fn interior_product_examples() {
        let d1 = Multivector::basis(3, 0);
        let d2 = Multivector::basis(3, 1);
        let dx1 = DiffForm::basis(3, 0);
        assert_eq!(dx1.interior(&d1), DiffForm::scalar(3, p("1")));
        // i_{d2}(dx1^dx2) = -dx1
        let w = DiffForm::from_components(3, 2, [(vec![0, 1], p("1"))]);
        assert_eq!(w.interior(&d2), dx1.neg());
        // i_{x2 d1}(dx1) = x2
        let x2d1 = vf(["x2", "0", "0"]);
        assert_eq!(dx1.interior(&x2d1), DiffForm::scalar(3, p("x2")));
    }

    #[test]
    fn interior_squares_to_zero() {
        let x = vf(["x2", "x3^2", "x1"]);
        let w = DiffForm::from_components(3, 2, [(vec![0, 1], p("x1")), (vec![1, 2], p("x3"))]);
        assert!(w.interior(&x).interior(&x).is_zero());
    }

    #[test]
    fn schouten_bivector_function() {
        // [d1^d2, f] = (d2 f) d1 - (d1 f) d2
        let pi = Multivector::from_components(3, 2, [(vec![0, 1], p("1"))]);
        let f = Multivector::scalar(3, p("x1*x2"));
        let expect = vf(["x1", "-x2", "0"]);
        assert_eq!(pi.schouten(&f), expect);
    }

    #[test]
    fn schouten_restricted_degrees() {
        // degree (1,1) = vf_bracket; degree (1,0) = X(f)
        let x = vf(["x2", "x3", "1"]);
        let y = vf(["1", "x1*x2", "x3"]);
        assert_eq!(x.schouten(&y), x.vf_bracket(&y));
        let f = Multivector::scalar(3, p("x1*x3"));
        assert_eq!(x.schouten(&f), Multivector::scalar(3, x.apply(&p("x1*x3"))));
    }

    #[test]
    fn constant_bivector_is_poisson() {
        let pi = Multivector::from_components(3, 2, [(vec![0, 1], p("1"))]);
        assert!(pi.schouten(&pi).is_zero());
    }

    #[test]
    fn so3_bivector_is_poisson() {
        // direct expansion of the linear so(3) structure
        let pi = so3_poisson();
        assert!(pi.schouten(&pi).is_zero());
    }

    #[test]
    fn non_poisson_bivector_detected() {
        // {x1,x2} = x2, {x2,x3} = 1: the Jacobi cycle on coordinates gives 1.
        let pi = Multivector::from_components(3, 2, [(vec![0, 1], p("x2")), (vec![1, 2], p("1"))]);
        assert!(!pi.schouten(&pi).is_zero());
    }

    #[test]
    fn sharp_examples() {
        let pi = Multivector::from_components(3, 2, [(vec![0, 1], p("1"))]);
        let dx1 = DiffForm::basis(3, 0);
        assert_eq!(pi.sharp(&dx1), Multivector::basis(3, 1));
        let zero = Multivector::zero(3, 2);
        assert!(zero.sharp(&dx1).is_zero());
        // pi(alpha, alpha) = 0
        let alpha = DiffForm::from_components(3, 1, [(vec![0], p("x2")), (vec![2], p("x1"))]);
        assert!(so3_poisson().eval2(&alpha, &alpha).is_zero());
    }

    #[test]
    fn sharp_defining_identity() {
        let pi = so3_poisson();
        let alpha = DiffForm::from_components(3, 1, [(vec![0], p("x2")), (vec![1], p("1"))]);
        let beta = DiffForm::from_components(3, 1, [(vec![1], p("x3")), (vec![2], p("x1^2"))]);
        assert_eq!(beta.eval1(&pi.sharp(&alpha)), pi.eval2(&alpha, &beta));
    }

    #[test]
    fn wedge_anticommutes_on_odd() {
        let dx1 = DiffForm::basis(3, 0);
        let dx2 = DiffForm::basis(3, 1);
        assert_eq!(dx1.wedge(&dx2), dx2.wedge(&dx1).neg());
        assert!(dx1.wedge(&dx1).is_zero());
    }

    #[test]
    fn scale_and_pair() {
        let x = Multivector::basis(3, 0).scale(&p("x2"));
        let w = DiffForm::basis(3, 0);
        assert_eq!(w.eval1(&x), p("x2"));
        let half = Multivector::basis(3, 0).scale_rat(&rat(1, 2));
        assert_eq!(w.eval1(&half), Poly::constant(3, rat(1, 2)));
        let _ = rat_int(1);
    }
}
