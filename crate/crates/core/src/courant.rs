//! Courant algebroid instances and exact checkers for their defining
//! identities.
//!
//! Four instance kinds are supported: quadratic Lie algebras over a point,
//! Drinfeld doubles of point Lie bialgebras, the standard bracket on
//! `TM + T*M` (computed directly through Cartan calculus, as a cross-check
//! against the bialgebroid route), and doubles of Lie bialgebroid pairs via
//! the bracket
//!
//! ```text
//! [e1, e2] = ([X1,X2] + L_{xi1}X2 - L_{xi2}X1 - d_*(e1,e2)_-)
//!          + ([xi1,xi2] + L_{X1}xi2 - L_{X2}xi1 + d(e1,e2)_-)
//! ```
//!
//! The pairing is a constant symmetric invertible matrix on the global
//! frame; `D` is obtained by solving `<Df, frame_i> = 1/2 rho(frame_i) f`
//! against that matrix. All checkers return the literal LHS - RHS defect so
//! a zero test is an exact verification.

use std::fmt;

use num_traits::Zero;
use rand::Rng;
use thiserror::Error;

use crate::algebroid::{
    coords_to_one_form, coords_to_vector_field, one_form_to_coords, vector_field_to_coords,
    AlgebroidError, Coords, LieAlgebroid, LieBialgebroidPair,
};
use crate::cartan::{DiffForm, Multivector};
use crate::exact_poly::{rat, rat_int, Poly, Rational};
use crate::gen::random_poly;

#[derive(Debug, Error)]
pub enum CourantError {
    #[error("instance is not split as A + A*, the (.,.)_- pairing is undefined")]
    NotSplit,
    #[error("axiom {axiom} takes {want}, got different arguments")]
    BadArity { axiom: u8, want: &'static str },
    #[error("pairing matrix is not symmetric")]
    AsymmetricPairing,
    #[error("pairing matrix is singular")]
    SingularPairing,
    #[error("pairing matrix has wrong shape for rank {0}")]
    PairingShape(usize),
    #[error("assembled Drinfeld double fails Jacobi: {0}")]
    DoubleJacobi(AlgebroidError),
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
}

/// Test-only corruptions used to demonstrate that the checkers can detect
/// broken structure, not only confirm correct structure.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Corruption {
    /// Flip the sign of the `d(e1,e2)_-` term in the double bracket.
    FlipDTerm,
    /// Drop the 1/2 factor from the split (.,.)_pm pairings.
    DropHalfPairing,
    /// Drop the `<e1,e2> D f` term from the axiom-3 checker.
    DropAxiom3Term,
}

impl std::str::FromStr for Corruption {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "flip-d-term" => Ok(Corruption::FlipDTerm),
            "drop-half-pairing" => Ok(Corruption::DropHalfPairing),
            "drop-axiom3-term" => Ok(Corruption::DropAxiom3Term),
            other => Err(format!(
                "unknown corruption `{other}` (expected flip-d-term, drop-half-pairing, drop-axiom3-term)"
            )),
        }
    }
}

/// Section of a Courant instance: coordinates over the A-frame and the
/// A*-frame. Plain quadratic instances are unsplit and keep everything in
/// the A part.
#[derive(Clone, PartialEq, Eq)]
pub struct Section {
    pub a: Coords,
    pub astar: Coords,
}

impl Section {
    pub fn new(a: Coords, astar: Coords) -> Self {
        Section { a, astar }
    }

    pub fn zero(a_rank: usize, astar_rank: usize, n_vars: usize) -> Self {
        Section {
            a: Coords::zero(a_rank, n_vars),
            astar: Coords::zero(astar_rank, n_vars),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.astar.is_zero()
    }

    pub fn add(&self, other: &Section) -> Section {
        Section {
            a: self.a.add(&other.a),
            astar: self.astar.add(&other.astar),
        }
    }

    pub fn sub(&self, other: &Section) -> Section {
        Section {
            a: self.a.sub(&other.a),
            astar: self.astar.sub(&other.astar),
        }
    }

    pub fn neg(&self) -> Section {
        Section {
            a: self.a.neg(),
            astar: self.astar.neg(),
        }
    }

    pub fn scale(&self, f: &Poly) -> Section {
        Section {
            a: self.a.scale(f),
            astar: self.astar.scale(f),
        }
    }

    pub fn scale_rat(&self, r: &Rational) -> Section {
        Section {
            a: self.a.scale_rat(r),
            astar: self.astar.scale_rat(r),
        }
    }

    fn flat(&self) -> Vec<Poly> {
        self.a.0.iter().chain(self.astar.0.iter()).cloned().collect()
    }
}

impl fmt::Debug for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}; {:?})", self.a, self.astar)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

/// Defect of an identity checker; `Section` for bracket-valued identities,
/// `Vector` for the anchor axiom, `Fn` for scalar identities.
#[derive(Clone, Debug)]
pub enum Defect {
    Section(Section),
    Vector(Multivector),
    Fn(Poly),
}

impl Defect {
    pub fn is_zero(&self) -> bool {
        match self {
            Defect::Section(s) => s.is_zero(),
            Defect::Vector(v) => v.is_zero(),
            Defect::Fn(p) => p.is_zero(),
        }
    }

    pub fn render(&self) -> String {
        match self {
            Defect::Section(s) => format!("{:?}", s),
            Defect::Vector(v) => format!("{:?}", v),
            Defect::Fn(p) => p.to_string(),
        }
    }
}

/// Arguments for the axiom dispatcher; arity per axiom.
pub enum AxiomArgs {
    /// axioms 1 and 5
    Three(Section, Section, Section),
    /// axiom 2
    Two(Section, Section),
    /// axiom 3
    TwoAndFn(Section, Section, Poly),
    /// axiom 4
    Fns(Poly, Poly),
}

#[derive(Clone)]
enum Engine {
    /// Quadratic Lie algebra over a point (also holds assembled Drinfeld
    /// doubles, which are split).
    Quadratic(LieAlgebroid),
    /// Courant's original bracket on TM + T*M, via Cartan calculus.
    Standard,
    /// The double bracket on A + A* of a Lie bialgebroid pair.
    Double(LieBialgebroidPair),
}

#[derive(Clone)]
pub struct CourantInstance {
    engine: Engine,
    base_dim: usize,
    a_rank: usize,
    astar_rank: usize,
    pairing: Vec<Vec<Rational>>,
    pairing_inv: Vec<Vec<Rational>>,
    corruption: Option<Corruption>,
    /// Anchors of the global frame sections, precomputed once; `D` solves
    /// against these on every call.
    frame_anchors: Vec<Multivector>,
}

/// Hyperbolic pairing on A + A*: `<a_i, b_j> = 1/2 delta_ij`, the matrix of
/// the split symmetric form.
fn hyperbolic_pairing(m: usize) -> Vec<Vec<Rational>> {
    let mut g = vec![vec![Rational::zero(); 2 * m]; 2 * m];
    for i in 0..m {
        g[i][m + i] = rat(1, 2);
        g[m + i][i] = rat(1, 2);
    }
    g
}

/// Gauss-Jordan inverse over the rationals.
pub(crate) fn invert_matrix(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut inv = vec![vec![Rational::zero(); n]; n];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = rat_int(1);
    }
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut().chain(inv[col].iter_mut()) {
            *x /= p.clone();
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                let t = a[col][c].clone() * f.clone();
                a[r][c] -= t;
                let t = inv[col][c].clone() * f.clone();
                inv[r][c] -= t;
            }
        }
    }
    Some(inv)
}

impl CourantInstance {
    /// The standard Courant algebroid TM + T*M over R^n.
    pub fn standard(n: usize) -> Self {
        let pairing = hyperbolic_pairing(n);
        let pairing_inv = invert_matrix(&pairing).expect("hyperbolic pairing invertible");
        CourantInstance {
            engine: Engine::Standard,
            base_dim: n,
            a_rank: n,
            astar_rank: n,
            pairing,
            pairing_inv,
            corruption: None,
            frame_anchors: Vec::new(),
        }
        .with_frame_anchors()
    }

    /// The double of a Lie bialgebroid pair with the double bracket above.
    pub fn bialgebroid_double(pair: LieBialgebroidPair) -> Self {
        let m = pair.rank();
        let pairing = hyperbolic_pairing(m);
        let pairing_inv = invert_matrix(&pairing).expect("hyperbolic pairing invertible");
        CourantInstance {
            engine: Engine::Double(pair.clone()),
            base_dim: pair.base_dim(),
            a_rank: m,
            astar_rank: m,
            pairing,
            pairing_inv,
            corruption: None,
            frame_anchors: Vec::new(),
        }
        .with_frame_anchors()
    }

    /// Quadratic Lie algebra from structure constants and an explicit
    /// symmetric invertible pairing matrix. Jacobi and antisymmetry of the
    /// constants are checked; invariance of the pairing is the axiom-5
    /// suite's concern.
    pub fn quadratic(
        c: &[Vec<Vec<Rational>>],
        pairing: Vec<Vec<Rational>>,
    ) -> Result<Self, CourantError> {
        let alg = LieAlgebroid::point_lie_algebra(c)?;
        let m = alg.rank();
        if pairing.len() != m || pairing.iter().any(|r| r.len() != m) {
            return Err(CourantError::PairingShape(m));
        }
        for i in 0..m {
            for j in 0..m {
                if pairing[i][j] != pairing[j][i] {
                    return Err(CourantError::AsymmetricPairing);
                }
            }
        }
        let pairing_inv = invert_matrix(&pairing).ok_or(CourantError::SingularPairing)?;
        Ok(CourantInstance {
            engine: Engine::Quadratic(alg),
            base_dim: 0,
            a_rank: m,
            astar_rank: 0,
            pairing,
            pairing_inv,
            corruption: None,
            frame_anchors: Vec::new(),
        }
        .with_frame_anchors())
    }

    /// Drinfeld double of a point Lie bialgebra: assembles the 2m-dim
    /// structure constants from the point reduction of the double bracket
    /// (`[X, xi] = -ad*_xi X + ad*_X xi`) and validates Jacobi a
    /// posteriori, which is exactly the cocycle condition on the input.
    pub fn drinfeld_double(
        c: &[Vec<Vec<Rational>>],
        c_star: &[Vec<Vec<Rational>>],
    ) -> Result<Self, CourantError> {
        let pair = LieBialgebroidPair::point_bialgebra(c, c_star)?;
        let m = pair.rank();
        let via_double = CourantInstance::bialgebroid_double(pair);
        let mut cc = vec![vec![vec![Rational::zero(); 2 * m]; 2 * m]; 2 * m];
        for i in 0..2 * m {
            for j in 0..2 * m {
                let br = via_double.bracket(&via_double.frame(i), &via_double.frame(j));
                for (k, p) in br.flat().into_iter().enumerate() {
                    cc[i][j][k] = p.constant_term();
                }
            }
        }
        let alg = LieAlgebroid::point_lie_algebra(&cc).map_err(CourantError::DoubleJacobi)?;
        let pairing = hyperbolic_pairing(m);
        let pairing_inv = invert_matrix(&pairing).expect("hyperbolic pairing invertible");
        Ok(CourantInstance {
            engine: Engine::Quadratic(alg),
            base_dim: 0,
            a_rank: m,
            astar_rank: m,
            pairing,
            pairing_inv,
            corruption: None,
            frame_anchors: Vec::new(),
        }
        .with_frame_anchors())
    }

    fn with_frame_anchors(mut self) -> Self {
        self.frame_anchors = (0..self.rank()).map(|i| self.anchor(&self.frame(i))).collect();
        self
    }

    pub fn with_corruption(mut self, c: Corruption) -> Self {
        self.corruption = Some(c);
        self
    }

    pub fn corruption(&self) -> Option<Corruption> {
        self.corruption
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn rank(&self) -> usize {
        self.a_rank + self.astar_rank
    }

    pub fn is_split(&self) -> bool {
        self.astar_rank == self.a_rank && self.a_rank > 0
    }

    pub fn describe(&self) -> String {
        match &self.engine {
            Engine::Standard => format!("standard(dim={})", self.base_dim),
            Engine::Double(_) => format!(
                "bialgebroid_double(base={}, rank={})",
                self.base_dim,
                self.rank()
            ),
            Engine::Quadratic(_) if self.is_split() => {
                format!("drinfeld_double(dim={})", self.rank())
            }
            Engine::Quadratic(_) => format!("quadratic(dim={})", self.rank()),
        }
    }

    pub fn zero_section(&self) -> Section {
        Section::zero(self.a_rank, self.astar_rank, self.base_dim)
    }

    /// i-th global frame section (A-frame first, then A*).
    pub fn frame(&self, i: usize) -> Section {
        let mut s = self.zero_section();
        if i < self.a_rank {
            s.a.0[i] = Poly::one(self.base_dim);
        } else {
            s.astar.0[i - self.a_rank] = Poly::one(self.base_dim);
        }
        s
    }

    /// A Poly in the instance's function algebra (constant for point
    /// instances).
    pub fn function(&self, p: Poly) -> Poly {
        debug_assert_eq!(p.n_vars(), self.base_dim);
        p
    }

    fn half_factor(&self) -> Rational {
        if self.corruption == Some(Corruption::DropHalfPairing) {
            rat_int(1)
        } else {
            rat(1, 2)
        }
    }

    /// The symmetric pairing `<e1, e2>` through the constant matrix.
    pub fn pairing(&self, e1: &Section, e2: &Section) -> Poly {
        let c1: Vec<&Poly> = e1.a.0.iter().chain(e1.astar.0.iter()).collect();
        let c2: Vec<&Poly> = e2.a.0.iter().chain(e2.astar.0.iter()).collect();
        let mut acc = Poly::zero(self.base_dim);
        let scale = if self.corruption == Some(Corruption::DropHalfPairing) {
            rat_int(2)
        } else {
            rat_int(1)
        };
        for (i, gi) in self.pairing.iter().enumerate() {
            if c1[i].is_zero() {
                continue;
            }
            for (j, g) in gi.iter().enumerate() {
                if g.is_zero() || c2[j].is_zero() {
                    continue;
                }
                acc = acc.add(&c1[i].mul(&c2[j]).scale(&(g.clone() * scale.clone())));
            }
        }
        acc
    }

    /// The split pairings `(e1, e2)_pm = 1/2(<xi1, X2> +- <xi2, X1>)` of a
    /// split instance.
    pub fn pairing_pm(&self, e1: &Section, e2: &Section, sign: Sign) -> Result<Poly, CourantError> {
        if !self.is_split() {
            return Err(CourantError::NotSplit);
        }
        let t1 = e1.astar.dual_pair(&e2.a);
        let t2 = e2.astar.dual_pair(&e1.a);
        let raw = match sign {
            Sign::Plus => t1.add(&t2),
            Sign::Minus => t1.sub(&t2),
        };
        Ok(raw.scale(&self.half_factor()))
    }

    /// Anchor of a section as a vector field on the base.
    pub fn anchor(&self, e: &Section) -> Multivector {
        match &self.engine {
            Engine::Standard => coords_to_vector_field(&e.a, self.base_dim),
            Engine::Double(pair) => pair
                .a()
                .anchor(&e.a)
                .add(&pair.a_star().anchor(&e.astar)),
            Engine::Quadratic(_) => Multivector::zero(0, 1),
        }
    }

    /// The Courant bracket of the instance.
    pub fn bracket(&self, e1: &Section, e2: &Section) -> Section {
        match &self.engine {
            Engine::Quadratic(alg) => {
                let full1 = Coords(e1.flat());
                let full2 = Coords(e2.flat());
                let out = alg.bracket(&full1, &full2);
                self.split_coords(out)
            }
            Engine::Standard => self.standard_bracket(e1, e2),
            Engine::Double(pair) => self.double_bracket(pair, e1, e2),
        }
    }

    fn split_coords(&self, full: Coords) -> Section {
        let (a, astar) = full.0.split_at(self.a_rank);
        Section {
            a: Coords(a.to_vec()),
            astar: Coords(astar.to_vec()),
        }
    }

    fn standard_bracket(&self, e1: &Section, e2: &Section) -> Section {
        let n = self.base_dim;
        let x1 = coords_to_vector_field(&e1.a, n);
        let x2 = coords_to_vector_field(&e2.a, n);
        let xi1 = coords_to_one_form(&e1.astar, n);
        let xi2 = coords_to_one_form(&e2.astar, n);
        let vec_part = x1.vf_bracket(&x2);
        let pm = self
            .pairing_pm(e1, e2, Sign::Minus)
            .expect("standard instance is split");
        let d_term = DiffForm::scalar(n, pm).de_rham_d();
        let mut form = xi2.lie_derivative(&x1).sub(&xi1.lie_derivative(&x2));
        form = if self.corruption == Some(Corruption::FlipDTerm) {
            form.sub(&d_term)
        } else {
            form.add(&d_term)
        };
        Section {
            a: vector_field_to_coords(&vec_part),
            astar: one_form_to_coords(&form),
        }
    }

    fn double_bracket(&self, pair: &LieBialgebroidPair, e1: &Section, e2: &Section) -> Section {
        let pm = self
            .pairing_pm(e1, e2, Sign::Minus)
            .expect("double instance is split");
        let mut a_part = pair
            .a()
            .bracket(&e1.a, &e2.a)
            .add(&pair.lie_derivative_mixed(&e1.astar, &e2.a))
            .sub(&pair.lie_derivative_mixed(&e2.astar, &e1.a));
        a_part = a_part.sub(&pair.d_star(&pm));
        let mut astar_part = pair
            .a_star()
            .bracket(&e1.astar, &e2.astar)
            .add(&pair.lie_derivative_mixed_dual(&e1.a, &e2.astar))
            .sub(&pair.lie_derivative_mixed_dual(&e2.a, &e1.astar));
        let d_term = pair.d(&pm);
        astar_part = if self.corruption == Some(Corruption::FlipDTerm) {
            astar_part.sub(&d_term)
        } else {
            astar_part.add(&d_term)
        };
        Section {
            a: a_part,
            astar: astar_part,
        }
    }

    /// `D f`: the unique section with `<Df, e> = 1/2 rho(e) f`, computed by
    /// solving against the pairing matrix. `D` keeps this defining property
    /// even under the pairing corruption, so the corrupted evaluator and the
    /// true operator disagree visibly.
    pub fn d_op(&self, f: &Poly) -> Section {
        let r = self.rank();
        let mut rhs = Vec::with_capacity(r);
        for i in 0..r {
            rhs.push(self.frame_anchors[i].apply(f).scale(&rat(1, 2)));
        }
        let mut out = vec![Poly::zero(self.base_dim); r];
        for (j, oj) in out.iter_mut().enumerate() {
            for (i, ri) in rhs.iter().enumerate() {
                if self.pairing_inv[j][i].is_zero() || ri.is_zero() {
                    continue;
                }
                *oj = oj.add(&ri.scale(&self.pairing_inv[j][i]));
            }
        }
        self.split_coords(Coords(out))
    }

    /// `T(e1,e2,e3) = 1/3 <[e1,e2], e3> + c.p.`
    pub fn t_op(&self, e1: &Section, e2: &Section, e3: &Section) -> Poly {
        let mut acc = self.pairing(&self.bracket(e1, e2), e3);
        acc = acc.add(&self.pairing(&self.bracket(e2, e3), e1));
        acc = acc.add(&self.pairing(&self.bracket(e3, e1), e2));
        acc.scale(&rat(1, 3))
    }

    /// `J(e1,e2,e3) = [[e1,e2],e3] + [[e2,e3],e1] + [[e3,e1],e2]`.
    pub fn jacobiator(&self, e1: &Section, e2: &Section, e3: &Section) -> Section {
        self.bracket(&self.bracket(e1, e2), e3)
            .add(&self.bracket(&self.bracket(e2, e3), e1))
            .add(&self.bracket(&self.bracket(e3, e1), e2))
    }

    /// Axiom 1: `J(e1,e2,e3) = D T(e1,e2,e3)`. The three inner brackets are
    /// shared between `J` and `T`.
    pub fn axiom1_defect(&self, e1: &Section, e2: &Section, e3: &Section) -> Section {
        let b12 = self.bracket(e1, e2);
        let b23 = self.bracket(e2, e3);
        let b31 = self.bracket(e3, e1);
        let jac = self
            .bracket(&b12, e3)
            .add(&self.bracket(&b23, e1))
            .add(&self.bracket(&b31, e2));
        let t = self
            .pairing(&b12, e3)
            .add(&self.pairing(&b23, e1))
            .add(&self.pairing(&b31, e2))
            .scale(&rat(1, 3));
        jac.sub(&self.d_op(&t))
    }

    /// Axiom 2: `rho[e1,e2] = [rho e1, rho e2]`.
    pub fn axiom2_defect(&self, e1: &Section, e2: &Section) -> Multivector {
        self.anchor(&self.bracket(e1, e2))
            .sub(&self.anchor(e1).vf_bracket(&self.anchor(e2)))
    }

    /// Axiom 3: `[e1, f e2] = f[e1,e2] + (rho(e1)f) e2 - <e1,e2> D f`.
    pub fn axiom3_defect(&self, e1: &Section, e2: &Section, f: &Poly) -> Section {
        let lhs = self.bracket(e1, &e2.scale(f));
        let mut rhs = self
            .bracket(e1, e2)
            .scale(f)
            .add(&e2.scale(&self.anchor(e1).apply(f)));
        if self.corruption != Some(Corruption::DropAxiom3Term) {
            rhs = rhs.sub(&self.d_op(f).scale(&self.pairing(e1, e2)));
        }
        lhs.sub(&rhs)
    }

    /// Axiom 4: `<Df, Dg> = 0`.
    pub fn axiom4_defect(&self, f: &Poly, g: &Poly) -> Poly {
        self.pairing(&self.d_op(f), &self.d_op(g))
    }

    /// Axiom 5: `rho(e)<h1,h2> = <[e,h1] + D<e,h1>, h2> + <h1, [e,h2] + D<e,h2>>`.
    pub fn axiom5_defect(&self, e: &Section, h1: &Section, h2: &Section) -> Poly {
        let lhs = self.anchor(e).apply(&self.pairing(h1, h2));
        let t1 = self.pairing(
            &self.bracket(e, h1).add(&self.d_op(&self.pairing(e, h1))),
            h2,
        );
        let t2 = self.pairing(
            h1,
            &self.bracket(e, h2).add(&self.d_op(&self.pairing(e, h2))),
        );
        lhs.sub(&t1).sub(&t2)
    }

    /// Dispatch on the axiom number with per-axiom arity checking.
    pub fn check_axiom(&self, k: u8, args: AxiomArgs) -> Result<Defect, CourantError> {
        match (k, args) {
            (1, AxiomArgs::Three(e1, e2, e3)) => {
                Ok(Defect::Section(self.axiom1_defect(&e1, &e2, &e3)))
            }
            (2, AxiomArgs::Two(e1, e2)) => Ok(Defect::Vector(self.axiom2_defect(&e1, &e2))),
            (3, AxiomArgs::TwoAndFn(e1, e2, f)) => {
                Ok(Defect::Section(self.axiom3_defect(&e1, &e2, &f)))
            }
            (4, AxiomArgs::Fns(f, g)) => Ok(Defect::Fn(self.axiom4_defect(&f, &g))),
            (5, AxiomArgs::Three(e, h1, h2)) => Ok(Defect::Fn(self.axiom5_defect(&e, &h1, &h2))),
            (1 | 5, _) => Err(CourantError::BadArity {
                axiom: k,
                want: "three sections",
            }),
            (2, _) => Err(CourantError::BadArity {
                axiom: 2,
                want: "two sections",
            }),
            (3, _) => Err(CourantError::BadArity {
                axiom: 3,
                want: "two sections and a function",
            }),
            (4, _) => Err(CourantError::BadArity {
                axiom: 4,
                want: "two functions",
            }),
            _ => Err(CourantError::BadArity {
                axiom: k,
                want: "axiom number in 1..=5",
            }),
        }
    }

    /// Derived identity: `[e, Df] = D<e, Df>`.
    pub fn prop_main_defect(&self, e: &Section, f: &Poly) -> Section {
        let df = self.d_op(f);
        self.bracket(e, &df)
            .sub(&self.d_op(&self.pairing(e, &df)))
    }

    /// Derived identity: `T(e1, e2, Df) = 1/4 rho([e1,e2]) f`.
    pub fn lemma_a1_defect(&self, e1: &Section, e2: &Section, f: &Poly) -> Poly {
        let df = self.d_op(f);
        let b12 = self.bracket(e1, e2);
        let lhs = self
            .pairing(&b12, &df)
            .add(&self.pairing(&self.bracket(e2, &df), e1))
            .add(&self.pairing(&self.bracket(&df, e1), e2))
            .scale(&rat(1, 3));
        let rhs = self.anchor(&b12).apply(f).scale(&rat(1, 4));
        lhs.sub(&rhs)
    }

    /// Derived identity: `K + 2J = 0` for the alternating four-section sums
    /// `J = <J(e1,e2,e3),e4> - <J(e1,e2,e4),e3> + <J(e1,e3,e4),e2> - <J(e2,e3,e4),e1>`,
    /// `K = <[e1,e2],[e3,e4]> - <[e1,e3],[e2,e4]> + <[e1,e4],[e2,e3]>`.
    pub fn lemma_a2_defect(
        &self,
        e1: &Section,
        e2: &Section,
        e3: &Section,
        e4: &Section,
    ) -> Poly {
        // All pairwise brackets the four Jacobiators and K share, computed
        // once in the exact argument order each term uses.
        let b12 = self.bracket(e1, e2);
        let b13 = self.bracket(e1, e3);
        let b14 = self.bracket(e1, e4);
        let b23 = self.bracket(e2, e3);
        let b24 = self.bracket(e2, e4);
        let b34 = self.bracket(e3, e4);
        let b31 = self.bracket(e3, e1);
        let b41 = self.bracket(e4, e1);
        let b42 = self.bracket(e4, e2);
        let jac = |bab: &Section, bbc: &Section, bca: &Section,
                   a: &Section, b: &Section, c: &Section| {
            self.bracket(bab, c)
                .add(&self.bracket(bbc, a))
                .add(&self.bracket(bca, b))
        };
        let j123 = jac(&b12, &b23, &b31, e1, e2, e3);
        let j124 = jac(&b12, &b24, &b41, e1, e2, e4);
        let j134 = jac(&b13, &b34, &b41, e1, e3, e4);
        let j234 = jac(&b23, &b34, &b42, e2, e3, e4);
        let bold_j = self
            .pairing(&j123, e4)
            .sub(&self.pairing(&j124, e3))
            .add(&self.pairing(&j134, e2))
            .sub(&self.pairing(&j234, e1));
        let bold_k = self
            .pairing(&b12, &b34)
            .sub(&self.pairing(&b13, &b24))
            .add(&self.pairing(&b14, &b23));
        bold_k.add(&bold_j.scale(&rat_int(2)))
    }

    /// Seeded random section: every coordinate a dense random polynomial.
    pub fn random_section<R: Rng>(
        &self,
        rng: &mut R,
        max_degree: u32,
        coeff_bound: i64,
    ) -> Section {
        let n = self.base_dim;
        Section {
            a: Coords(
                (0..self.a_rank)
                    .map(|_| random_poly(rng, n, max_degree, coeff_bound))
                    .collect(),
            ),
            astar: Coords(
                (0..self.astar_rank)
                    .map(|_| random_poly(rng, n, max_degree, coeff_bound))
                    .collect(),
            ),
        }
    }

    /// Seeded random function on the base.
    pub fn random_function<R: Rng>(&self, rng: &mut R, max_degree: u32, coeff_bound: i64) -> Poly {
        random_poly(rng, self.base_dim, max_degree, coeff_bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::Multivector;
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

    fn const_pi() -> Multivector {
        Multivector::from_components(3, 2, [(vec![0, 1], p("1"))])
    }

    fn so3_constants() -> Vec<Vec<Vec<Rational>>> {
        // [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2
        let mut c = vec![vec![vec![rat_int(0); 3]; 3]; 3];
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            c[i][j][k] = rat_int(1);
            c[j][i][k] = rat_int(-1);
        }
        c
    }

    fn so3_quadratic() -> CourantInstance {
        let id = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| if i == j { rat_int(1) } else { rat_int(0) })
                    .collect()
            })
            .collect();
        CourantInstance::quadratic(&so3_constants(), id).unwrap()
    }

    fn two_dim_bialgebra_double() -> CourantInstance {
        // [X, Y] = Y with abelian dual
        let mut c = vec![vec![vec![rat_int(0); 2]; 2]; 2];
        c[0][1][1] = rat_int(1);
        c[1][0][1] = rat_int(-1);
        let c_star = vec![vec![vec![rat_int(0); 2]; 2]; 2];
        CourantInstance::drinfeld_double(&c, &c_star).unwrap()
    }

    fn shipped_instances() -> Vec<CourantInstance> {
        vec![
            CourantInstance::standard(3),
            CourantInstance::bialgebroid_double(LieBialgebroidPair::standard(3)),
            CourantInstance::bialgebroid_double(LieBialgebroidPair::poisson(&const_pi()).unwrap()),
            CourantInstance::bialgebroid_double(LieBialgebroidPair::poisson(&so3_pi()).unwrap()),
            two_dim_bialgebra_double(),
            so3_quadratic(),
        ]
    }

    #[test]
    fn pairing_pm_examples() {
        let c = CourantInstance::standard(3);
        let d1 = c.frame(0); // vector part
        let dx1 = c.frame(3); // covector part
        assert_eq!(c.pairing_pm(&d1, &dx1, Sign::Plus).unwrap(), p("1/2"));
        assert_eq!(c.pairing_pm(&d1, &dx1, Sign::Minus).unwrap(), p("-1/2"));
        assert!(c.pairing_pm(&d1, &c.frame(1), Sign::Plus).unwrap().is_zero());
        assert_eq!(c.pairing(&d1, &dx1), p("1/2"));
    }

    #[test]
    fn pairing_pm_rejects_unsplit() {
        let q = so3_quadratic();
        assert!(matches!(
            q.pairing_pm(&q.frame(0), &q.frame(1), Sign::Plus),
            Err(CourantError::NotSplit)
        ));
    }

    #[test]
    fn d_op_standard_is_de_rham() {
        let c = CourantInstance::standard(3);
        let df = c.d_op(&p("x1"));
        assert!(df.a.is_zero());
        assert_eq!(df.astar, Coords::unit(3, 3, 0));
        // and on a product
        let dg = c.d_op(&p("x1*x2"));
        assert_eq!(dg.astar.0[0], p("x2"));
        assert_eq!(dg.astar.0[1], p("x1"));
    }

    #[test]
    fn d_op_point_vanishes() {
        let q = so3_quadratic();
        assert!(q.d_op(&Poly::constant(0, rat_int(7))).is_zero());
    }

    #[test]
    fn d_op_double_is_dstar_plus_d() {
        let mut rng = StdRng::seed_from_u64(21);
        for pi in [const_pi(), so3_pi()] {
            let pair = LieBialgebroidPair::poisson(&pi).unwrap();
            let c = CourantInstance::bialgebroid_double(pair.clone());
            for _ in 0..10 {
                let f = c.random_function(&mut rng, 2, 3);
                let df = c.d_op(&f);
                assert_eq!(df.a, pair.d_star(&f));
                assert_eq!(df.astar, pair.d(&f));
            }
        }
    }

    #[test]
    fn d_op_satisfies_defining_identity() {
        let mut rng = StdRng::seed_from_u64(22);
        for c in shipped_instances() {
            for _ in 0..5 {
                let f = c.random_function(&mut rng, 2, 3);
                let e = c.random_section(&mut rng, 2, 3);
                let lhs = c.pairing(&c.d_op(&f), &e);
                let rhs = c.anchor(&e).apply(&f).scale(&rat(1, 2));
                assert_eq!(lhs, rhs, "instance {}", c.describe());
            }
        }
    }

    #[test]
    fn standard_bracket_oracle_example() {
        // [d1, x1 dx2] = (0, dx2)
        let c = CourantInstance::standard(3);
        let e1 = c.frame(0);
        let e2 = c.frame(4).scale(&p("x1"));
        let br = c.bracket(&e1, &e2);
        assert!(br.a.is_zero());
        assert_eq!(br.astar, Coords(vec![p("0"), p("1"), p("0")]));
    }

    #[test]
    fn standard_bracket_matches_double_of_standard_pair() {
        let c = CourantInstance::standard(3);
        let d = CourantInstance::bialgebroid_double(LieBialgebroidPair::standard(3));
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..10 {
            let e1 = c.random_section(&mut rng, 2, 3);
            let e2 = c.random_section(&mut rng, 2, 3);
            assert_eq!(c.bracket(&e1, &e2), d.bracket(&e1, &e2));
        }
    }

    #[test]
    fn bracket_antisymmetric_on_all_instances() {
        let mut rng = StdRng::seed_from_u64(24);
        for c in shipped_instances() {
            for _ in 0..5 {
                let e1 = c.random_section(&mut rng, 2, 3);
                let e2 = c.random_section(&mut rng, 2, 3);
                assert!(c.bracket(&e1, &e1).is_zero());
                assert_eq!(c.bracket(&e1, &e2), c.bracket(&e2, &e1).neg());
            }
        }
    }

    #[test]
    fn t_op_so3_orthonormal_frame() {
        let q = so3_quadratic();
        let t = q.t_op(&q.frame(0), &q.frame(1), &q.frame(2));
        assert_eq!(t, Poly::constant(0, rat_int(1)));
    }

    #[test]
    fn t_op_degenerate_arguments_vanish() {
        let c = CourantInstance::standard(3);
        let mut rng = StdRng::seed_from_u64(25);
        let e = c.random_section(&mut rng, 2, 3);
        let e3 = c.random_section(&mut rng, 2, 3);
        assert!(c.t_op(&e, &e, &e3).is_zero());
        // constant sections: every bracket term dies
        assert!(c.t_op(&c.frame(0), &c.frame(4), &c.frame(2)).is_zero());
    }

    #[test]
    fn jacobiator_vanishes_on_quadratic() {
        let q = so3_quadratic();
        let mut rng = StdRng::seed_from_u64(26);
        for _ in 0..5 {
            let e1 = q.random_section(&mut rng, 0, 3);
            let e2 = q.random_section(&mut rng, 0, 3);
            let e3 = q.random_section(&mut rng, 0, 3);
            assert!(q.jacobiator(&e1, &e2, &e3).is_zero());
        }
    }

    #[test]
    fn axioms_hold_on_shipped_instances() {
        let mut rng = StdRng::seed_from_u64(27);
        for c in shipped_instances() {
            for _ in 0..5 {
                let e1 = c.random_section(&mut rng, 2, 2);
                let e2 = c.random_section(&mut rng, 2, 2);
                let e3 = c.random_section(&mut rng, 2, 2);
                let f = c.random_function(&mut rng, 2, 2);
                let g = c.random_function(&mut rng, 2, 2);
                let a1 = c.axiom1_defect(&e1, &e2, &e3);
                assert!(a1.is_zero(), "axiom 1 on {}: {:?}", c.describe(), a1);
                assert!(
                    c.axiom2_defect(&e1, &e2).is_zero(),
                    "axiom 2 on {}",
                    c.describe()
                );
                let a3 = c.axiom3_defect(&e1, &e2, &f);
                assert!(a3.is_zero(), "axiom 3 on {}: {:?}", c.describe(), a3);
                assert!(
                    c.axiom4_defect(&f, &g).is_zero(),
                    "axiom 4 on {}",
                    c.describe()
                );
                let a5 = c.axiom5_defect(&e1, &e2, &e3);
                assert!(a5.is_zero(), "axiom 5 on {}: {}", c.describe(), a5);
            }
        }
    }

    #[test]
    fn prop_main_and_lemmas_hold() {
        let mut rng = StdRng::seed_from_u64(28);
        for c in shipped_instances() {
            for _ in 0..5 {
                let e1 = c.random_section(&mut rng, 2, 2);
                let e2 = c.random_section(&mut rng, 2, 2);
                let e3 = c.random_section(&mut rng, 1, 2);
                let e4 = c.random_section(&mut rng, 1, 2);
                let f = c.random_function(&mut rng, 2, 2);
                let pm = c.prop_main_defect(&e1, &f);
                assert!(pm.is_zero(), "prop 4.2 on {}: {:?}", c.describe(), pm);
                let l1 = c.lemma_a1_defect(&e1, &e2, &f);
                assert!(l1.is_zero(), "lemma 5.1 on {}: {}", c.describe(), l1);
                let l2 = c.lemma_a2_defect(&e1, &e2, &e3, &e4);
                assert!(l2.is_zero(), "lemma 5.2 on {}: {}", c.describe(), l2);
            }
        }
    }

    #[test]
    fn lemma_a2_forces_k_zero_on_quadratic() {
        // J = 0 termwise on a Lie algebra, so K itself must vanish
        let q = so3_quadratic();
        let mut rng = StdRng::seed_from_u64(29);
        for _ in 0..5 {
            let e: Vec<Section> = (0..4).map(|_| q.random_section(&mut rng, 0, 3)).collect();
            let bold_k = q
                .pairing(&q.bracket(&e[0], &e[1]), &q.bracket(&e[2], &e[3]))
                .sub(&q.pairing(&q.bracket(&e[0], &e[2]), &q.bracket(&e[1], &e[3])))
                .add(&q.pairing(&q.bracket(&e[0], &e[3]), &q.bracket(&e[1], &e[2])));
            assert!(bold_k.is_zero());
        }
    }

    #[test]
    fn drinfeld_double_matches_bialgebroid_route() {
        let dd = two_dim_bialgebra_double();
        let mut c = vec![vec![vec![rat_int(0); 2]; 2]; 2];
        c[0][1][1] = rat_int(1);
        c[1][0][1] = rat_int(-1);
        let c_star = vec![vec![vec![rat_int(0); 2]; 2]; 2];
        let pair = LieBialgebroidPair::point_bialgebra(&c, &c_star).unwrap();
        let bd = CourantInstance::bialgebroid_double(pair);
        let mut rng = StdRng::seed_from_u64(30);
        for _ in 0..10 {
            let e1 = dd.random_section(&mut rng, 0, 3);
            let e2 = dd.random_section(&mut rng, 0, 3);
            assert_eq!(dd.bracket(&e1, &e2), bd.bracket(&e1, &e2));
        }
    }

    #[test]
    fn drinfeld_double_abelian() {
        let c = vec![vec![vec![rat_int(0); 2]; 2]; 2];
        let dd = CourantInstance::drinfeld_double(&c, &c).unwrap();
        assert_eq!(dd.rank(), 4);
        let e1 = dd.frame(0);
        let e2 = dd.frame(3);
        assert!(dd.bracket(&e1, &e2).is_zero());
        assert_eq!(
            dd.pairing(&dd.frame(0), &dd.frame(2)),
            Poly::constant(0, rat(1, 2))
        );
    }

    #[test]
    fn drinfeld_double_pairing_ad_invariant() {
        // axiom 5 with rho = 0: 0 = <[e,h1],h2> + <h1,[e,h2]>
        let dd = two_dim_bialgebra_double();
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..10 {
            let e = dd.random_section(&mut rng, 0, 3);
            let h1 = dd.random_section(&mut rng, 0, 3);
            let h2 = dd.random_section(&mut rng, 0, 3);
            let s = dd
                .pairing(&dd.bracket(&e, &h1), &h2)
                .add(&dd.pairing(&h1, &dd.bracket(&e, &h2)));
            assert!(s.is_zero());
        }
    }

    #[test]
    fn drinfeld_double_rejects_non_cocycle() {
        // g = so(3), g* = so(3): the identity cocommutator of so(3) is not a
        // cocycle, the assembled bracket fails Jacobi
        let c = so3_constants();
        assert!(matches!(
            CourantInstance::drinfeld_double(&c, &c),
            Err(CourantError::DoubleJacobi(_))
        ));
    }

    #[test]
    fn check_axiom_dispatch_and_arity() {
        let c = CourantInstance::standard(3);
        let e1 = c.frame(0);
        let e2 = c.frame(3);
        let ok = c
            .check_axiom(4, AxiomArgs::Fns(p("x1"), p("x2")))
            .unwrap();
        assert!(ok.is_zero());
        assert!(matches!(
            c.check_axiom(1, AxiomArgs::Two(e1.clone(), e2.clone())),
            Err(CourantError::BadArity { axiom: 1, .. })
        ));
        assert!(matches!(
            c.check_axiom(6, AxiomArgs::Two(e1, e2)),
            Err(CourantError::BadArity { .. })
        ));
    }

    #[test]
    fn corruptions_break_axiom_suite() {
        let mut rng = StdRng::seed_from_u64(32);
        for corruption in [
            Corruption::FlipDTerm,
            Corruption::DropHalfPairing,
            Corruption::DropAxiom3Term,
        ] {
            let c = CourantInstance::standard(3).with_corruption(corruption);
            let mut found = false;
            for _ in 0..20 {
                let e1 = c.random_section(&mut rng, 2, 2);
                let e2 = c.random_section(&mut rng, 2, 2);
                let e3 = c.random_section(&mut rng, 2, 2);
                let f = c.random_function(&mut rng, 2, 2);
                if !c.axiom1_defect(&e1, &e2, &e3).is_zero()
                    || !c.axiom3_defect(&e1, &e2, &f).is_zero()
                    || !c.axiom5_defect(&e1, &e2, &e3).is_zero()
                {
                    found = true;
                    break;
                }
            }
            assert!(found, "corruption {:?} went undetected", corruption);
        }
    }

    #[test]
    fn invert_matrix_roundtrip() {
        let g = hyperbolic_pairing(2);
        let inv = invert_matrix(&g).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = Rational::zero();
                for (k, ik) in inv.iter().enumerate() {
                    acc += g[i][k].clone() * ik[j].clone();
                }
                assert_eq!(acc, if i == j { rat_int(1) } else { rat_int(0) });
            }
        }
        let singular = vec![vec![rat_int(1), rat_int(2)], vec![rat_int(2), rat_int(4)]];
        assert!(invert_matrix(&singular).is_none());
    }

    #[test]
    fn quadratic_rejects_bad_pairing() {
        let c = so3_constants();
        let bad = vec![vec![rat_int(0); 3]; 3];
        assert!(matches!(
            CourantInstance::quadratic(&c, bad),
            Err(CourantError::SingularPairing)
        ));
        let mut asym = vec![vec![rat_int(0); 3]; 3];
        asym[0][1] = rat_int(1);
        asym[0][0] = rat_int(1);
        asym[1][1] = rat_int(1);
        asym[2][2] = rat_int(1);
        assert!(matches!(
            CourantInstance::quadratic(&c, asym),
            Err(CourantError::AsymmetricPairing)
        ));
    }
}
