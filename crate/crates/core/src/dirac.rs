//! Dirac subbundles of a Courant instance: isotropy, integrability, graphs
//! of 2-forms and bivectors, and extraction of a Lie bialgebroid from a
//! transversal pair of Dirac structures.
//!
//! Membership in a maximal isotropic L is tested through pairing against
//! the frame (L = L-perp), so closure under the bracket reduces to
//! `<[s_i, s_j], s_k> = 0` for all frame triples; no function-linear
//! solving is needed.

use num_traits::Zero;
use thiserror::Error;

use crate::algebroid::{AlgebroidKind, Coords, LieAlgebroid, LieBialgebroidPair};
use crate::cartan::{DiffForm, Multivector};
use crate::courant::{invert_matrix, CourantInstance, Section};
use crate::exact_poly::{rat_int, Poly, Rational};

#[derive(Debug, Error)]
pub enum DiracError {
    #[error("frame is linearly dependent (constant leading parts have rank {rank} < {size})")]
    DependentFrame { rank: usize, size: usize },
    #[error("frame rank {got} does not match the instance ({want} for a maximal isotropic)")]
    WrongRank { got: usize, want: usize },
    #[error("candidate is not isotropic: <s_{i}, s_{j}> = {value}")]
    NotIsotropic { i: usize, j: usize, value: String },
    #[error("candidate is not integrable: <[s_{i}, s_{j}], s_{k}> = {value}")]
    NotIntegrable {
        i: usize,
        j: usize,
        k: usize,
        value: String,
    },
    #[error("candidates are not transversal under 2<.,.> (matrix not constant or singular)")]
    NotTransversal,
    #[error("bracket [s_{i}, s_{j}] does not lie in the candidate span")]
    ClosureResidual { i: usize, j: usize },
}

/// First failing obstruction, reported verbatim.
#[derive(Clone, Debug)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub value: Poly,
}

/// A candidate Dirac subbundle, presented by a frame of sections of the
/// owning instance.
pub struct DiracCandidate<'a> {
    instance: &'a CourantInstance,
    frame: Vec<Section>,
}

impl<'a> DiracCandidate<'a> {
    /// Candidate from an explicit frame; pointwise independence is checked
    /// on the constant leading parts.
    pub fn from_frame(
        instance: &'a CourantInstance,
        frame: Vec<Section>,
    ) -> Result<Self, DiracError> {
        let size = frame.len();
        let flat: Vec<Vec<Rational>> = frame
            .iter()
            .map(|s| {
                s.a.0
                    .iter()
                    .chain(s.astar.0.iter())
                    .map(Poly::constant_term)
                    .collect()
            })
            .collect();
        let rank = rational_rank(flat);
        if rank < size {
            return Err(DiracError::DependentFrame { rank, size });
        }
        Ok(DiracCandidate { instance, frame })
    }

    /// The tangent subbundle of a split instance (frame: the A-part frame).
    pub fn tangent(instance: &'a CourantInstance) -> Result<Self, DiracError> {
        let frame = (0..instance.rank() / 2).map(|i| instance.frame(i)).collect();
        Self::from_frame(instance, frame)
    }

    /// The cotangent subbundle of a split instance.
    pub fn cotangent(instance: &'a CourantInstance) -> Result<Self, DiracError> {
        let half = instance.rank() / 2;
        let frame = (half..instance.rank()).map(|i| instance.frame(i)).collect();
        Self::from_frame(instance, frame)
    }

    /// Graph of a 2-form: frame `d_i + iota_{d_i} omega`.
    pub fn graph_2form(
        instance: &'a CourantInstance,
        omega: &DiffForm,
    ) -> Result<Self, DiracError> {
        let n = instance.base_dim();
        let frame = (0..n)
            .map(|i| {
                let contracted = omega.interior(&Multivector::basis(n, i));
                Section::new(
                    Coords::unit(n, n, i),
                    Coords((0..n).map(|j| contracted.component(&[j])).collect()),
                )
            })
            .collect();
        Self::from_frame(instance, frame)
    }

    /// Graph of a bivector: frame `dx_i + sharp(pi, dx_i)`.
    pub fn graph_bivector(
        instance: &'a CourantInstance,
        pi: &Multivector,
    ) -> Result<Self, DiracError> {
        let n = instance.base_dim();
        let frame = (0..n)
            .map(|i| {
                let sharp = pi.sharp(&DiffForm::basis(n, i));
                Section::new(
                    Coords((0..n).map(|j| sharp.component(&[j])).collect()),
                    Coords::unit(n, n, i),
                )
            })
            .collect();
        Self::from_frame(instance, frame)
    }

    pub fn frame(&self) -> &[Section] {
        &self.frame
    }

    pub fn instance(&self) -> &CourantInstance {
        self.instance
    }

    /// True iff all frame pairings vanish and the rank is half the bundle
    /// rank (maximality); on failure the first nonzero pairing is the
    /// witness.
    pub fn is_isotropic(&self) -> (bool, Option<Witness>) {
        if 2 * self.frame.len() != self.instance.rank() {
            return (false, None);
        }
        for (i, si) in self.frame.iter().enumerate() {
            for (j, sj) in self.frame.iter().enumerate().skip(i) {
                let p = self.instance.pairing(si, sj);
                if !p.is_zero() {
                    return (
                        false,
                        Some(Witness {
                            indices: vec![i, j],
                            value: p,
                        }),
                    );
                }
            }
        }
        (true, None)
    }

    /// Closure of the frame under the Courant bracket, via the L = L-perp
    /// characterization. Requires isotropy.
    pub fn is_integrable(&self) -> Result<(bool, Option<Witness>), DiracError> {
        match self.is_isotropic() {
            (true, _) => {}
            (false, Some(w)) => {
                return Err(DiracError::NotIsotropic {
                    i: w.indices[0],
                    j: w.indices[1],
                    value: w.value.to_string(),
                })
            }
            (false, None) => {
                return Err(DiracError::WrongRank {
                    got: self.frame.len(),
                    want: self.instance.rank() / 2,
                })
            }
        }
        for (i, si) in self.frame.iter().enumerate() {
            for (j, sj) in self.frame.iter().enumerate() {
                if j <= i {
                    continue;
                }
                let br = self.instance.bracket(si, sj);
                for (k, sk) in self.frame.iter().enumerate() {
                    let obstruction = self.instance.pairing(&br, sk);
                    if !obstruction.is_zero() {
                        return Ok((
                            false,
                            Some(Witness {
                                indices: vec![i, j, k],
                                value: obstruction,
                            }),
                        ));
                    }
                }
            }
        }
        Ok((true, None))
    }

    fn require_integrable(&self) -> Result<(), DiracError> {
        match self.is_integrable()? {
            (true, _) => Ok(()),
            (false, Some(w)) => Err(DiracError::NotIntegrable {
                i: w.indices[0],
                j: w.indices[1],
                k: w.indices[2],
                value: w.value.to_string(),
            }),
            (false, None) => unreachable!("non-integrable always carries a witness"),
        }
    }

    /// Restrict the Courant bracket and anchor to this candidate, expanding
    /// brackets over the given dual frame (`2<frame_i, dual_j> = delta_ij`).
    fn restricted_algebroid(&self, dual: &[Section]) -> Result<LieAlgebroid, DiracError> {
        let r = self.frame.len();
        let n = self.instance.base_dim();
        let anchors: Vec<Multivector> =
            self.frame.iter().map(|s| self.instance.anchor(s)).collect();
        let mut structure = vec![vec![Coords::zero(r, n); r]; r];
        for i in 0..r {
            for j in 0..r {
                let br = self.instance.bracket(&self.frame[i], &self.frame[j]);
                let coeffs = Coords(
                    dual.iter()
                        .map(|t| self.instance.pairing(&br, t).scale(&rat_int(2)))
                        .collect(),
                );
                // the expansion must reproduce the bracket exactly, else the
                // candidate was not closed
                let mut recombined = self.instance.zero_section();
                for (k, c) in coeffs.0.iter().enumerate() {
                    recombined = recombined.add(&self.frame[k].scale(c));
                }
                if recombined != br {
                    return Err(DiracError::ClosureResidual { i, j });
                }
                structure[i][j] = coeffs;
            }
        }
        Ok(LieAlgebroid::from_frame_data(
            AlgebroidKind::Restricted,
            n,
            r,
            anchors,
            structure,
        ))
    }
}

/// Two transversal Dirac structures form a Lie bialgebroid
/// under the pairing `2<.,.>`. The second frame is re-expressed so the two
/// frames are strictly dual, then each candidate is restricted to a Lie
/// algebroid in frame presentation.
pub fn extract_bialgebroid(
    l1: &DiracCandidate,
    l2: &DiracCandidate,
) -> Result<LieBialgebroidPair, DiracError> {
    l1.require_integrable()?;
    l2.require_integrable()?;
    let r = l1.frame.len();
    let instance = l1.instance;
    // transversality through the pairing matrix M_ij = 2<s_i, t_j>, which
    // must be constant and invertible for the frames to identify L2 = L1*
    let mut m = vec![vec![Rational::zero(); r]; r];
    for i in 0..r {
        for j in 0..r {
            let p = instance.pairing(&l1.frame[i], &l2.frame[j]).scale(&rat_int(2));
            if !p.is_constant() {
                return Err(DiracError::NotTransversal);
            }
            m[i][j] = p.constant_term();
        }
    }
    let m_inv = invert_matrix(&m).ok_or(DiracError::NotTransversal)?;
    // dual frame t'_j = sum_k (M^-1)_kj t_k, so 2<s_i, t'_j> = delta_ij
    let dual: Vec<Section> = (0..r)
        .map(|j| {
            let mut acc = instance.zero_section();
            for (k, t) in l2.frame.iter().enumerate() {
                if m_inv[k][j].is_zero() {
                    continue;
                }
                acc = acc.add(&t.scale_rat(&m_inv[k][j]));
            }
            acc
        })
        .collect();
    let a = l1.restricted_algebroid(&dual)?;
    let dual_candidate = DiracCandidate {
        instance,
        frame: dual,
    };
    let a_star = dual_candidate.restricted_algebroid(&l1.frame)?;
    LieBialgebroidPair::new(a, a_star).map_err(|_| DiracError::NotTransversal)
}

/// Row rank over the rationals by Gaussian elimination.
fn rational_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let mut rank = 0;
    let cols = rows.first().map(Vec::len).unwrap_or(0);
    let mut col = 0;
    while col < cols && rank < rows.len() {
        if let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) {
            rows.swap(rank, pivot);
            for r in rank + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let f = rows[r][col].clone() / rows[rank][col].clone();
                for c in col..cols {
                    let t = rows[rank][c].clone() * f.clone();
                    rows[r][c] -= t;
                }
            }
            rank += 1;
        }
        col += 1;
    }
    rank
}

/// Reference battery of polynomial 2-forms on R^3, closed and non-closed;
/// used by the dirac suite and the equivalence tests.
pub fn two_form_battery() -> Vec<(&'static str, DiffForm)> {
    let p = |s: &str| Poly::parse(s, 3).unwrap();
    let form = |comps: Vec<(Vec<usize>, Poly)>| DiffForm::from_components(3, 2, comps);
    vec![
        ("dx1^dx2", form(vec![(vec![0, 1], p("1"))])),
        ("dx2^dx3", form(vec![(vec![1, 2], p("1"))])),
        ("x1*dx1^dx2", form(vec![(vec![0, 1], p("x1"))])),
        (
            "d(x1*x2)^dx3",
            form(vec![(vec![0, 2], p("x2")), (vec![1, 2], p("x1"))]),
        ),
        (
            "dx1^dx2 + x3^2*dx1^dx3",
            form(vec![(vec![0, 1], p("1")), (vec![0, 2], p("x3^2"))]),
        ),
        ("x3*dx1^dx2", form(vec![(vec![0, 1], p("x3"))])),
        ("x1*x2*dx2^dx3", form(vec![(vec![1, 2], p("x1*x2"))])),
        ("x2^2*dx1^dx3", form(vec![(vec![0, 2], p("x2^2"))])),
        (
            "x3*dx1^dx2 + dx2^dx3",
            form(vec![(vec![0, 1], p("x3")), (vec![1, 2], p("1"))]),
        ),
        (
            "x1*dx1^dx2 + x1*dx2^dx3",
            form(vec![(vec![0, 1], p("x1")), (vec![1, 2], p("x1"))]),
        ),
    ]
}

/// Reference battery of polynomial bivectors on R^3, Poisson and
/// non-Poisson (including the linear so(3) structure).
pub fn bivector_battery() -> Vec<(&'static str, Multivector)> {
    let p = |s: &str| Poly::parse(s, 3).unwrap();
    let biv = |comps: Vec<(Vec<usize>, Poly)>| Multivector::from_components(3, 2, comps);
    vec![
        ("0", Multivector::zero(3, 2)),
        ("d1^d2", biv(vec![(vec![0, 1], p("1"))])),
        (
            "so3",
            biv(vec![
                (vec![0, 1], p("x3")),
                (vec![1, 2], p("x1")),
                (vec![2, 0], p("x2")),
            ]),
        ),
        ("x3*d1^d2", biv(vec![(vec![0, 1], p("x3"))])),
        (
            "x1^2*d1^d2",
            biv(vec![(vec![0, 1], p("x1^2"))]),
        ),
        (
            "x2*d1^d2 + d2^d3",
            biv(vec![(vec![0, 1], p("x2")), (vec![1, 2], p("1"))]),
        ),
        (
            "x2*d1^d2 + x1*d2^d3",
            biv(vec![(vec![0, 1], p("x2")), (vec![1, 2], p("x1"))]),
        ),
        (
            "x1*d1^d2 + x2*d1^d3 + d2^d3",
            biv(vec![
                (vec![0, 1], p("x1")),
                (vec![0, 2], p("x2")),
                (vec![1, 2], p("1")),
            ]),
        ),
        (
            "x1*x3*d1^d2",
            biv(vec![(vec![0, 1], p("x1*x3"))]),
        ),
        (
            "x1*d1^d2 + x2*d2^d3",
            biv(vec![(vec![0, 1], p("x1")), (vec![1, 2], p("x2"))]),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_poly::rat;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn p(s: &str) -> Poly {
        Poly::parse(s, 3).unwrap()
    }

    #[test]
    fn tangent_and_cotangent_are_dirac() {
        let c = CourantInstance::standard(3);
        for cand in [
            DiracCandidate::tangent(&c).unwrap(),
            DiracCandidate::cotangent(&c).unwrap(),
        ] {
            assert!(cand.is_isotropic().0);
            assert!(cand.is_integrable().unwrap().0);
        }
    }

    #[test]
    fn mixed_frame_is_not_isotropic() {
        let c = CourantInstance::standard(3);
        let cand =
            DiracCandidate::from_frame(&c, vec![c.frame(0), c.frame(3), c.frame(1)]).unwrap();
        let (ok, w) = cand.is_isotropic();
        assert!(!ok);
        let w = w.unwrap();
        assert_eq!(w.indices, vec![0, 1]);
        assert_eq!(w.value, p("1/2"));
        assert!(matches!(
            cand.is_integrable(),
            Err(DiracError::NotIsotropic { .. })
        ));
    }

    #[test]
    fn dependent_frame_rejected() {
        let c = CourantInstance::standard(3);
        assert!(matches!(
            DiracCandidate::from_frame(&c, vec![c.frame(0), c.frame(0)]),
            Err(DiracError::DependentFrame { .. })
        ));
    }

    #[test]
    fn graph_2form_integrable_iff_closed() {
        let c = CourantInstance::standard(3);
        let mut closed = 0;
        let mut non_closed = 0;
        for (name, omega) in two_form_battery() {
            let cand = DiracCandidate::graph_2form(&c, &omega).unwrap();
            assert!(cand.is_isotropic().0, "graph of {name} must be isotropic");
            let integrable = cand.is_integrable().unwrap().0;
            let is_closed = omega.de_rham_d().is_zero();
            assert_eq!(integrable, is_closed, "disagreement on {name}");
            if is_closed {
                closed += 1;
            } else {
                non_closed += 1;
            }
        }
        assert!(closed >= 3 && non_closed >= 3);
    }

    #[test]
    fn graph_bivector_integrable_iff_poisson() {
        let c = CourantInstance::standard(3);
        let mut poisson = 0;
        let mut non_poisson = 0;
        for (name, pi) in bivector_battery() {
            let cand = DiracCandidate::graph_bivector(&c, &pi).unwrap();
            assert!(cand.is_isotropic().0, "graph of {name} must be isotropic");
            let integrable = cand.is_integrable().unwrap().0;
            let is_poisson = pi.schouten(&pi).is_zero();
            assert_eq!(integrable, is_poisson, "disagreement on {name}");
            if is_poisson {
                poisson += 1;
            } else {
                non_poisson += 1;
            }
        }
        assert!(poisson >= 3 && non_poisson >= 3);
    }

    #[test]
    fn non_closed_witness_is_a_dw_component() {
        let c = CourantInstance::standard(3);
        let omega = DiffForm::from_components(3, 2, [(vec![0, 1], p("x3"))]);
        let cand = DiracCandidate::graph_2form(&c, &omega).unwrap();
        let (ok, w) = cand.is_integrable().unwrap();
        assert!(!ok);
        let w = w.unwrap();
        assert_eq!(w.indices, vec![0, 1, 2]);
        // <[s1,s2],s3> picks up half the dw(d1,d2,d3) coefficient
        assert_eq!(w.value, p("1/2"));
    }

    #[test]
    fn extract_standard_pair_roundtrip() {
        let c = CourantInstance::standard(3);
        let tm = DiracCandidate::tangent(&c).unwrap();
        let tstar = DiracCandidate::cotangent(&c).unwrap();
        let pair = extract_bialgebroid(&tm, &tstar).unwrap();
        let double = CourantInstance::bialgebroid_double(pair.clone());
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..10 {
            let e1 = c.random_section(&mut rng, 2, 3);
            let e2 = c.random_section(&mut rng, 2, 3);
            assert_eq!(c.bracket(&e1, &e2), double.bracket(&e1, &e2));
            assert!(pair.compat_defect(&e1.a, &e2.a).is_zero());
        }
    }

    #[test]
    fn swapped_extraction_also_passes() {
        // swapping the pair: (A*, A) is again a Lie bialgebroid
        let c = CourantInstance::standard(3);
        let tm = DiracCandidate::tangent(&c).unwrap();
        let tstar = DiracCandidate::cotangent(&c).unwrap();
        let pair = extract_bialgebroid(&tstar, &tm).unwrap();
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..10 {
            let x = Coords((0..3).map(|_| crate::gen::random_poly(&mut rng, 3, 2, 3)).collect());
            let y = Coords((0..3).map(|_| crate::gen::random_poly(&mut rng, 3, 2, 3)).collect());
            assert!(pair.compat_defect(&x, &y).is_zero());
        }
    }

    #[test]
    fn extract_with_poisson_graph() {
        let c = CourantInstance::standard(3);
        let pi = Multivector::from_components(3, 2, [(vec![0, 1], p("1"))]);
        let tm = DiracCandidate::tangent(&c).unwrap();
        let graph = DiracCandidate::graph_bivector(&c, &pi).unwrap();
        let pair = extract_bialgebroid(&tm, &graph).unwrap();
        let mut rng = StdRng::seed_from_u64(43);
        for _ in 0..10 {
            let x = Coords((0..3).map(|_| crate::gen::random_poly(&mut rng, 3, 2, 3)).collect());
            let y = Coords((0..3).map(|_| crate::gen::random_poly(&mut rng, 3, 2, 3)).collect());
            assert!(pair.compat_defect(&x, &y).is_zero());
        }
    }

    #[test]
    fn extract_rejects_non_transversal() {
        let c = CourantInstance::standard(3);
        let tm = DiracCandidate::tangent(&c).unwrap();
        let tm2 = DiracCandidate::tangent(&c).unwrap();
        assert!(matches!(
            extract_bialgebroid(&tm, &tm2),
            Err(DiracError::NotTransversal)
        ));
    }

    #[test]
    fn extract_rejects_non_integrable() {
        let c = CourantInstance::standard(3);
        let omega = DiffForm::from_components(3, 2, [(vec![0, 1], p("x3"))]);
        let graph = DiracCandidate::graph_2form(&c, &omega).unwrap();
        let tm = DiracCandidate::cotangent(&c).unwrap();
        assert!(matches!(
            extract_bialgebroid(&graph, &tm),
            Err(DiracError::NotIntegrable { .. })
        ));
    }

    #[test]
    fn transversality_matrix_normalization() {
        // scaled cotangent frame still extracts correctly through M^-1
        let c = CourantInstance::standard(3);
        let tm = DiracCandidate::tangent(&c).unwrap();
        let scaled: Vec<Section> = (3..6).map(|i| c.frame(i).scale_rat(&rat(3, 1))).collect();
        let tstar = DiracCandidate::from_frame(&c, scaled).unwrap();
        let pair = extract_bialgebroid(&tm, &tstar).unwrap();
        // dual frame normalizes back to dx_i, so d f must be the de Rham
        // coordinates
        assert_eq!(pair.d(&p("x1")), Coords::unit(3, 3, 0));
    }

    #[test]
    fn rational_rank_basics() {
        let rows = vec![
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(2), rat_int(0)],
        ];
        assert_eq!(rational_rank(rows), 1);
        let rows = vec![
            vec![rat_int(1), rat_int(1)],
            vec![rat_int(0), rat_int(5)],
        ];
        assert_eq!(rational_rank(rows), 2);
    }
}
