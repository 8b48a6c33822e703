//! The strongly homotopy Lie algebra carried by the three-term resolution
//!
//! ```text
//! X2 = ker D  -->  X1 = C(M)  --D-->  X0 = Gamma(E)
//! ```
//!
//! of a Courant instance. The structure maps are
//! `l1 = (iota, D, 0)`, `l2(e1^e2) = [e1,e2]`, `l2(e^f) = <e, Df>`,
//! `l3(e1^e2^e3) = -T(e1,e2,e3)`, and `l_n = 0` for `n > 3` or in higher
//! degree. The coherence relations `sum_{i+j=n+1} (-1)^{i(j-1)} l_j l_i = 0`
//! are evaluated both through the coderivation extension (the compressed
//! form) and through a direct unshuffle sum with order-sensitive raw maps;
//! the two routes must agree, which pins down every Koszul sign.
//!
//! `ker D` is modeled by the constant polynomials: on every shipped instance
//! `Df = 0` forces `df = 0` (pair against pure vector sections), and over a
//! point `D = 0` outright. Membership is still checked at construction.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use rand::Rng;
use thiserror::Error;

use crate::courant::{CourantInstance, Section};
use crate::exact_poly::{rat_int, Poly, Rational};
use crate::graded::{
    extend_coderivation, koszul_sign, perm_parity, unshuffles, GradedElement, GradedWord,
};

#[derive(Debug, Error)]
pub enum LinftyError {
    #[error("payload is not in ker D: D applied to `{0}` is nonzero")]
    NotInKernel(String),
    #[error("arity {0} must be at least 1")]
    BadArity(usize),
    #[error("word length {len} does not match arity {arity}")]
    WordLength { arity: usize, len: usize },
}

#[derive(Clone, PartialEq)]
pub enum ResPayload {
    /// degree 0: a section of E
    Section(Section),
    /// degree 1: a function on the base
    Function(Poly),
    /// degree 2: an element of ker D
    Kernel(Poly),
}

/// Element of the resolution, tagged with a content-derived id so that the
/// graded-word engine can merge and cancel equal factors.
#[derive(Clone)]
pub struct ResNode {
    id: u64,
    payload: ResPayload,
}

fn content_id(tag: u8, body: &str) -> u64 {
    let mut h = DefaultHasher::new();
    tag.hash(&mut h);
    body.hash(&mut h);
    h.finish()
}

impl ResNode {
    pub fn section(s: Section) -> Self {
        let id = content_id(0, &format!("{:?}", s));
        ResNode {
            id,
            payload: ResPayload::Section(s),
        }
    }

    pub fn function(f: Poly) -> Self {
        let id = content_id(1, &f.to_string());
        ResNode {
            id,
            payload: ResPayload::Function(f),
        }
    }

    /// Degree-2 element; membership in ker D is verified against the
    /// instance.
    pub fn kernel(instance: &CourantInstance, c: Poly) -> Result<Self, LinftyError> {
        if !instance.d_op(&c).is_zero() {
            return Err(LinftyError::NotInKernel(c.to_string()));
        }
        let id = content_id(2, &c.to_string());
        Ok(ResNode {
            id,
            payload: ResPayload::Kernel(c),
        })
    }

    pub fn payload(&self) -> &ResPayload {
        &self.payload
    }
}

impl fmt::Debug for ResNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.payload {
            ResPayload::Section(s) => write!(f, "e{:?}", s),
            ResPayload::Function(p) => write!(f, "f({})", p),
            ResPayload::Kernel(p) => write!(f, "c({})", p),
        }
    }
}

impl GradedElement for ResNode {
    fn degree(&self) -> i64 {
        match self.payload {
            ResPayload::Section(_) => 0,
            ResPayload::Function(_) => 1,
            ResPayload::Kernel(_) => 2,
        }
    }

    fn id(&self) -> u64 {
        self.id
    }

    fn is_zero(&self) -> bool {
        match &self.payload {
            ResPayload::Section(s) => s.is_zero(),
            ResPayload::Function(p) | ResPayload::Kernel(p) => p.is_zero(),
        }
    }
}

/// Algebraic value of a defect: every coherence relation lands in a single
/// degree, so terms are summed as sections or as functions rather than as
/// formal words.
#[derive(Clone, Debug, PartialEq)]
pub enum ResValue {
    Zero,
    Section(Section),
    Fn(Poly),
}

impl ResValue {
    pub fn is_zero(&self) -> bool {
        match self {
            ResValue::Zero => true,
            ResValue::Section(s) => s.is_zero(),
            ResValue::Fn(p) => p.is_zero(),
        }
    }

    pub fn render(&self) -> String {
        match self {
            ResValue::Zero => "0".into(),
            ResValue::Section(s) => format!("{:?}", s),
            ResValue::Fn(p) => p.to_string(),
        }
    }

    fn normalized(self) -> ResValue {
        if self.is_zero() {
            ResValue::Zero
        } else {
            self
        }
    }

    fn add_scaled(&mut self, node: &ResNode, c: &Rational) {
        use num_traits::Zero;
        if c.is_zero() || node.is_zero() {
            return;
        }
        match (&mut *self, &node.payload) {
            (ResValue::Zero, ResPayload::Section(s)) => {
                *self = ResValue::Section(s.scale_rat(c));
            }
            (ResValue::Zero, ResPayload::Function(p) | ResPayload::Kernel(p)) => {
                *self = ResValue::Fn(p.scale(c));
            }
            (ResValue::Section(acc), ResPayload::Section(s)) => {
                *acc = acc.add(&s.scale_rat(c));
            }
            (ResValue::Fn(acc), ResPayload::Function(p) | ResPayload::Kernel(p)) => {
                *acc = acc.add(&p.scale(c));
            }
            _ => panic!("mixed-degree defect accumulation"),
        }
    }
}

/// The homotopy Lie algebra structure maps over one Courant instance.
pub struct LInfty<'a> {
    instance: &'a CourantInstance,
}

impl<'a> LInfty<'a> {
    pub fn new(instance: &'a CourantInstance) -> Self {
        LInfty { instance }
    }

    pub fn instance(&self) -> &CourantInstance {
        self.instance
    }

    /// `l1`: inclusion on degree 2, `D` on degree 1, zero on degree 0.
    pub fn l1(&self, x: &ResNode) -> Option<ResNode> {
        match &x.payload {
            ResPayload::Section(_) => None,
            ResPayload::Function(f) => Some(ResNode::section(self.instance.d_op(f))),
            ResPayload::Kernel(c) => Some(ResNode::function(c.clone())),
        }
    }

    /// `l_k` on factors in canonical word order (sorted by (degree, id)).
    pub fn l_k(&self, k: usize, factors: &[ResNode]) -> Option<ResNode> {
        match (k, factors) {
            (1, [x]) => self.l1(x),
            (2, [x, y]) => match (&x.payload, &y.payload) {
                (ResPayload::Section(a), ResPayload::Section(b)) => {
                    Some(ResNode::section(self.instance.bracket(a, b)))
                }
                (ResPayload::Section(e), ResPayload::Function(f)) => Some(ResNode::function(
                    self.instance.pairing(e, &self.instance.d_op(f)),
                )),
                _ => None,
            },
            (3, [x, y, z]) => match (&x.payload, &y.payload, &z.payload) {
                (ResPayload::Section(a), ResPayload::Section(b), ResPayload::Section(c)) => {
                    Some(ResNode::function(self.instance.t_op(a, b, c).neg()))
                }
                _ => None,
            },
            _ => None,
        }
    }

    /// `l_k` on an arbitrarily ordered tuple, using the graded antisymmetry
    /// of the maps directly instead of normalizing the word first.
    fn l_k_raw(&self, k: usize, factors: &[ResNode]) -> Option<(Rational, ResNode)> {
        match (k, factors) {
            (1, [x]) => self.l1(x).map(|r| (rat_int(1), r)),
            (2, [x, y]) => match (&x.payload, &y.payload) {
                (ResPayload::Section(a), ResPayload::Section(b)) => {
                    Some((rat_int(1), ResNode::section(self.instance.bracket(a, b))))
                }
                (ResPayload::Section(e), ResPayload::Function(f)) => Some((
                    rat_int(1),
                    ResNode::function(self.instance.pairing(e, &self.instance.d_op(f))),
                )),
                // l2(f^e) = -l2(e^f): swapping degrees (1,0) costs -(-1)^0
                (ResPayload::Function(f), ResPayload::Section(e)) => Some((
                    rat_int(-1),
                    ResNode::function(self.instance.pairing(e, &self.instance.d_op(f))),
                )),
                _ => None,
            },
            (3, [x, y, z]) => match (&x.payload, &y.payload, &z.payload) {
                // T is totally antisymmetric, so the given order is fine
                (ResPayload::Section(a), ResPayload::Section(b), ResPayload::Section(c)) => {
                    Some((rat_int(1), ResNode::function(self.instance.t_op(a, b, c).neg())))
                }
                _ => None,
            },
            _ => None,
        }
    }

    /// Coderivation route: the coherence defect via coderivation extension of the
    /// inner map, then the outer map on each canonical word.
    pub fn shla_defect(&self, n: usize, word: &GradedWord<ResNode>) -> Result<ResValue, LinftyError> {
        if n == 0 {
            return Err(LinftyError::BadArity(0));
        }
        if word.len() != n {
            return Err(LinftyError::WordLength {
                arity: n,
                len: word.len(),
            });
        }
        let mut acc = ResValue::Zero;
        for i in 1..=n {
            let j = n + 1 - i;
            let prefactor = rat_int(if (i * (j - 1)) % 2 == 0 { 1 } else { -1 });
            let inner = extend_coderivation(i, |xs| self.l_k(i, xs), word)
                .expect("arity within word length");
            for (coeff, w) in inner.terms() {
                if let Some(img) = self.l_k(j, w.factors()) {
                    acc.add_scaled(&img, &(coeff.clone() * prefactor.clone()));
                }
            }
        }
        Ok(acc.normalized())
    }

    /// Unshuffle route: the same defect as an explicit unshuffle sum with the
    /// `(-1)^sigma eps(sigma)` signs and order-sensitive raw maps; no word
    /// normalization in the middle.
    pub fn shla_defect_direct(
        &self,
        n: usize,
        word: &GradedWord<ResNode>,
    ) -> Result<ResValue, LinftyError> {
        if n == 0 {
            return Err(LinftyError::BadArity(0));
        }
        if word.len() != n {
            return Err(LinftyError::WordLength {
                arity: n,
                len: word.len(),
            });
        }
        let degs = word.degrees();
        let mut acc = ResValue::Zero;
        for i in 1..=n {
            let j = n + 1 - i;
            let prefactor: i64 = if (i * (j - 1)) % 2 == 0 { 1 } else { -1 };
            for sigma in unshuffles(i, n).expect("block within range") {
                let sign = perm_parity(&sigma).unwrap() * koszul_sign(&sigma, &degs).unwrap();
                let selected: Vec<ResNode> = sigma[..i]
                    .iter()
                    .map(|&v| word.factors()[v].clone())
                    .collect();
                let Some((c_inner, inner)) = self.l_k_raw(i, &selected) else {
                    continue;
                };
                let mut rest = vec![inner];
                rest.extend(sigma[i..].iter().map(|&v| word.factors()[v].clone()));
                let Some((c_outer, img)) = self.l_k_raw(j, &rest) else {
                    continue;
                };
                let total =
                    c_inner * c_outer * rat_int(sign * prefactor * word.sign());
                acc.add_scaled(&img, &total);
            }
        }
        Ok(acc.normalized())
    }

    /// Seeded random word of `n` mixed-degree factors; retries when the
    /// draw normalizes to zero (e.g. a repeated even-degree factor).
    pub fn random_word<R: Rng>(
        &self,
        rng: &mut R,
        n: usize,
        max_degree: u32,
        coeff_bound: i64,
    ) -> GradedWord<ResNode> {
        loop {
            let factors: Vec<ResNode> = (0..n)
                .map(|_| match rng.gen_range(0..4u8) {
                    0 | 1 => ResNode::section(self.instance.random_section(
                        rng,
                        max_degree,
                        coeff_bound,
                    )),
                    2 => ResNode::function(self.instance.random_function(
                        rng,
                        max_degree,
                        coeff_bound,
                    )),
                    _ => {
                        let c = Poly::constant(
                            self.instance.base_dim(),
                            rat_int(rng.gen_range(1..=coeff_bound.max(1))),
                        );
                        ResNode::kernel(self.instance, c).expect("constants lie in ker D")
                    }
                })
                .collect();
            if let Some(w) = GradedWord::new(factors) {
                return w;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::LieBialgebroidPair;
    use crate::cartan::Multivector;
    use crate::exact_poly::rat;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn p(s: &str) -> Poly {
        Poly::parse(s, 3).unwrap()
    }

    fn so3_pi() -> Multivector {
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

    fn so3_quadratic() -> CourantInstance {
        let mut c = vec![vec![vec![rat_int(0); 3]; 3]; 3];
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            c[i][j][k] = rat_int(1);
            c[j][i][k] = rat_int(-1);
        }
        let id = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| if i == j { rat_int(1) } else { rat_int(0) })
                    .collect()
            })
            .collect();
        CourantInstance::quadratic(&c, id).unwrap()
    }

    fn instances() -> Vec<CourantInstance> {
        vec![
            CourantInstance::standard(3),
            CourantInstance::bialgebroid_double(LieBialgebroidPair::poisson(&so3_pi()).unwrap()),
            so3_quadratic(),
        ]
    }

    #[test]
    fn l1_is_the_resolution_differential() {
        let c = CourantInstance::standard(3);
        let l = LInfty::new(&c);
        let img = l.l1(&ResNode::function(p("x1"))).unwrap();
        match img.payload() {
            ResPayload::Section(s) => {
                assert!(s.a.is_zero());
                assert_eq!(s.astar.0[0], p("1"));
            }
            _ => panic!("expected a section"),
        }
        let ker = ResNode::kernel(&c, p("5")).unwrap();
        let incl = l.l1(&ker).unwrap();
        assert!(matches!(incl.payload(), ResPayload::Function(f) if *f == p("5")));
        // l1 l1 = 0 at both spots
        assert!(l.l1(&l.l1(&ker).unwrap()).unwrap().is_zero());
        assert!(l.l1(&img).is_none());
    }

    #[test]
    fn kernel_membership_checked() {
        let c = CourantInstance::standard(3);
        assert!(matches!(
            ResNode::kernel(&c, p("x1")),
            Err(LinftyError::NotInKernel(_))
        ));
        assert!(ResNode::kernel(&c, p("3/2")).is_ok());
    }

    #[test]
    fn kernel_is_exactly_the_constants_on_standard() {
        // exactness at X1 within the polynomial family: Df = 0 iff f const
        let c = CourantInstance::standard(3);
        for f in ["x1", "x2", "x3", "x1*x2", "x3^2", "x1 + 2*x2"] {
            assert!(!c.d_op(&p(f)).is_zero(), "D{f} should not vanish");
        }
        assert!(c.d_op(&p("7")).is_zero());
    }

    #[test]
    fn l2_examples() {
        let c = CourantInstance::standard(3);
        let l = LInfty::new(&c);
        // l2(d1 ^ x1) = <d1, dx1> = 1/2
        let e = ResNode::section(c.frame(0));
        let f = ResNode::function(p("x1"));
        let img = l.l_k(2, &[e.clone(), f]).unwrap();
        assert!(matches!(img.payload(), ResPayload::Function(v) if *v == p("1/2")));
        // l2 vanishes on f^g and c^e
        let f1 = ResNode::function(p("x1"));
        let f2 = ResNode::function(p("x2"));
        assert!(l.l_k(2, &[f1, f2]).is_none());
        let ker = ResNode::kernel(&c, p("1")).unwrap();
        assert!(l.l_k(2, &[e, ker]).is_none());
    }

    #[test]
    fn l3_is_minus_t() {
        let q = so3_quadratic();
        let l = LInfty::new(&q);
        let nodes: Vec<ResNode> = (0..3).map(|i| ResNode::section(q.frame(i))).collect();
        let img = l.l_k(3, &nodes).unwrap();
        match img.payload() {
            ResPayload::Function(v) => assert_eq!(*v, Poly::constant(0, rat_int(-1))),
            _ => panic!("expected degree-1 image"),
        }
        // any word with a higher-degree factor dies
        let f = ResNode::function(Poly::constant(0, rat(1, 2)));
        assert!(l.l_k(3, &[nodes[0].clone(), nodes[1].clone(), f]).is_none());
    }

    #[test]
    fn jacobiator_restatement() {
        // l1(l3(e1^e2^e3)) + J(e1,e2,e3) = 0, i.e. the axiom J = DT
        let c = CourantInstance::standard(3);
        let l = LInfty::new(&c);
        let mut rng = StdRng::seed_from_u64(51);
        for _ in 0..5 {
            let e: Vec<Section> = (0..3).map(|_| c.random_section(&mut rng, 2, 2)).collect();
            let nodes: Vec<ResNode> = e.iter().cloned().map(ResNode::section).collect();
            let t = l.l_k(3, &nodes).unwrap();
            let dt = l.l1(&t).unwrap();
            match dt.payload() {
                ResPayload::Section(s) => {
                    assert!(s.add(&c.jacobiator(&e[0], &e[1], &e[2])).is_zero());
                }
                _ => panic!("expected a section"),
            }
        }
    }

    #[test]
    fn defect_vanishes_for_all_arities_and_instances() {
        let mut rng = StdRng::seed_from_u64(52);
        for c in instances() {
            let l = LInfty::new(&c);
            for n in 1..=5 {
                for _ in 0..4 {
                    let w = l.random_word(&mut rng, n, 1, 2);
                    let d = l.shla_defect(n, &w).unwrap();
                    assert!(
                        d.is_zero(),
                        "defect n={n} on {} word {:?}: {}",
                        c.describe(),
                        w.factors(),
                        d.render()
                    );
                }
            }
        }
    }

    #[test]
    fn lemma_41_word() {
        // (l2 l2 + l3 l1 + l1 l3)(e1 ^ e2 ^ f) = 0
        let c = CourantInstance::standard(3);
        let l = LInfty::new(&c);
        let mut rng = StdRng::seed_from_u64(53);
        for _ in 0..5 {
            let w = GradedWord::new(vec![
                ResNode::section(c.random_section(&mut rng, 2, 2)),
                ResNode::section(c.random_section(&mut rng, 2, 2)),
                ResNode::function(c.random_function(&mut rng, 2, 2)),
            ])
            .unwrap();
            let d = l.shla_defect(3, &w).unwrap();
            assert!(d.is_zero(), "{}", d.render());
        }
    }

    #[test]
    fn lemma_42_word() {
        // the n = 4 relation on four sections: l3 l2 - l2 l3 part
        let c = CourantInstance::standard(3);
        let l = LInfty::new(&c);
        let mut rng = StdRng::seed_from_u64(54);
        for _ in 0..3 {
            let w = GradedWord::new(
                (0..4)
                    .map(|_| ResNode::section(c.random_section(&mut rng, 1, 2)))
                    .collect(),
            )
            .unwrap();
            let d = l.shla_defect(4, &w).unwrap();
            assert!(d.is_zero(), "{}", d.render());
        }
    }

    #[test]
    fn both_defect_routes_agree() {
        // explicit unshuffle sums vs coderivation composition
        let mut rng = StdRng::seed_from_u64(55);
        for c in instances() {
            let l = LInfty::new(&c);
            for n in 1..=5 {
                for _ in 0..3 {
                    let w = l.random_word(&mut rng, n, 1, 2);
                    let a = l.shla_defect(n, &w).unwrap();
                    let b = l.shla_defect_direct(n, &w).unwrap();
                    assert_eq!(a, b, "routes disagree at n={n} on {}", c.describe());
                }
            }
        }
    }

    #[test]
    fn defect_rejects_bad_word_length() {
        let c = CourantInstance::standard(3);
        let l = LInfty::new(&c);
        let w = GradedWord::new(vec![ResNode::function(p("x1"))]).unwrap();
        assert!(matches!(
            l.shla_defect(2, &w),
            Err(LinftyError::WordLength { .. })
        ));
        assert!(matches!(l.shla_defect(0, &w), Err(LinftyError::BadArity(0))));
    }
}
