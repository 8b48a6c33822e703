//! Executes a verification plan: builds the declared instances, runs the
//! requested suites with seeded random inputs, and produces a
//! deterministic report.
//!
//! Every check draws from its own ChaCha stream (plan seed + check index),
//! so reports are byte-identical across runs of the same plan; wall-clock
//! timings go to stderr only, never into the report.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebroid::{Coords, LieBialgebroidPair};
use crate::courant::{CourantInstance, Section};
use crate::dirac::{bivector_battery, extract_bialgebroid, two_form_battery, DiracCandidate};
use crate::gen::random_poly;
use crate::linfty::LInfty;
use crate::plan::{DiracDecl, InstanceDecl, Suite, VerificationPlan};

#[derive(Serialize, Clone, Debug)]
pub struct Counterexample {
    pub seed: u64,
    pub trial: u32,
    pub inputs: Vec<String>,
    pub defect: String,
}

#[derive(Serialize, Clone, Debug)]
pub struct CheckRecord {
    pub suite: String,
    pub instance: String,
    pub check: String,
    pub trials: u32,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Serialize, Clone, Debug)]
pub struct ConstructionError {
    pub instance: String,
    pub error: String,
}

#[derive(Serialize, Clone, Debug)]
pub struct Report {
    pub seed: u64,
    pub trials: u32,
    pub degree: u32,
    pub coeff_bound: i64,
    pub suites: Vec<String>,
    pub records: Vec<CheckRecord>,
    pub construction_errors: Vec<ConstructionError>,
    pub total_checks: usize,
    pub failed_checks: usize,
}

impl Report {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "plan: seed={} trials={} degree={} coeff_bound={} suites=[{}]\n",
            self.seed,
            self.trials,
            self.degree,
            self.coeff_bound,
            self.suites.join(", ")
        ));
        for e in &self.construction_errors {
            out.push_str(&format!("[ERROR] {} :: {}\n", e.instance, e.error));
        }
        let mut current_suite = String::new();
        for r in &self.records {
            if r.suite != current_suite {
                out.push_str(&format!("suite {}\n", r.suite));
                current_suite = r.suite.clone();
            }
            out.push_str(&format!(
                "  [{}] {} :: {} ({} trials)\n",
                if r.passed { "PASS" } else { "FAIL" },
                r.instance,
                r.check,
                r.trials
            ));
            if let Some(c) = &r.counterexample {
                out.push_str(&format!(
                    "        counterexample: seed={} trial={}\n",
                    c.seed, c.trial
                ));
                for (i, inp) in c.inputs.iter().enumerate() {
                    out.push_str(&format!("        input[{i}] = {inp}\n"));
                }
                out.push_str(&format!("        defect = {}\n", c.defect));
            }
        }
        out.push_str(&format!(
            "totals: {} checks, {} failed, {} construction errors\n",
            self.total_checks,
            self.failed_checks,
            self.construction_errors.len()
        ));
        out
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// 0 all pass, 1 defect found, 2 construction/input error.
    pub fn exit_code(&self) -> i32 {
        if !self.construction_errors.is_empty() {
            2
        } else if self.failed_checks > 0 {
            1
        } else {
            0
        }
    }
}

struct Runner<'p> {
    plan: &'p VerificationPlan,
    stream: u64,
    records: Vec<CheckRecord>,
}

impl<'p> Runner<'p> {
    fn rng(&mut self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.plan.seed);
        rng.set_stream(self.stream);
        self.stream += 1;
        rng
    }

    /// Runs `trials` trials of `f`; `f` returns `None` on success and the
    /// (inputs, defect) render on failure. Records the first failure.
    fn check<F>(&mut self, suite: Suite, instance: &str, check: &str, trials: u32, mut f: F)
    where
        F: FnMut(&mut ChaCha8Rng) -> Option<(Vec<String>, String)>,
    {
        let started = std::time::Instant::now();
        let mut rng = self.rng();
        let mut counterexample = None;
        for trial in 0..trials {
            if let Some((inputs, defect)) = f(&mut rng) {
                counterexample = Some(Counterexample {
                    seed: self.plan.seed,
                    trial,
                    inputs,
                    defect,
                });
                break;
            }
        }
        eprintln!(
            "  {}/{} [{}] in {:.3}s",
            suite.name(),
            check,
            instance,
            started.elapsed().as_secs_f64()
        );
        self.records.push(CheckRecord {
            suite: suite.name().into(),
            instance: instance.into(),
            check: check.into(),
            trials,
            passed: counterexample.is_none(),
            counterexample,
        });
    }

    fn axioms_suite(&mut self, label: &str, c: &CourantInstance) {
        let (deg, bound, trials) = (self.plan.degree, self.plan.coeff_bound, self.plan.trials);
        self.check(Suite::Axioms, label, "axiom1_jacobiator_dt", trials, |rng| {
            let e1 = c.random_section(rng, deg, bound);
            let e2 = c.random_section(rng, deg, bound);
            let e3 = c.random_section(rng, deg, bound);
            let d = c.axiom1_defect(&e1, &e2, &e3);
            (!d.is_zero()).then(|| {
                (
                    vec![format!("{e1:?}"), format!("{e2:?}"), format!("{e3:?}")],
                    format!("{d:?}"),
                )
            })
        });
        self.check(Suite::Axioms, label, "axiom2_anchor_morphism", trials, |rng| {
            let e1 = c.random_section(rng, deg, bound);
            let e2 = c.random_section(rng, deg, bound);
            let d = c.axiom2_defect(&e1, &e2);
            (!d.is_zero()).then(|| {
                (
                    vec![format!("{e1:?}"), format!("{e2:?}")],
                    format!("{d:?}"),
                )
            })
        });
        self.check(Suite::Axioms, label, "axiom3_leibniz_anomaly", trials, |rng| {
            let e1 = c.random_section(rng, deg, bound);
            let e2 = c.random_section(rng, deg, bound);
            let f = c.random_function(rng, deg, bound);
            let d = c.axiom3_defect(&e1, &e2, &f);
            (!d.is_zero()).then(|| {
                (
                    vec![format!("{e1:?}"), format!("{e2:?}"), format!("f = {f}")],
                    format!("{d:?}"),
                )
            })
        });
        self.check(Suite::Axioms, label, "axiom4_df_dg_orthogonal", trials, |rng| {
            let f = c.random_function(rng, deg, bound);
            let g = c.random_function(rng, deg, bound);
            let d = c.axiom4_defect(&f, &g);
            (!d.is_zero()).then(|| {
                (vec![format!("f = {f}"), format!("g = {g}")], d.to_string())
            })
        });
        self.check(Suite::Axioms, label, "axiom5_pairing_invariance", trials, |rng| {
            let e = c.random_section(rng, deg, bound);
            let h1 = c.random_section(rng, deg, bound);
            let h2 = c.random_section(rng, deg, bound);
            let d = c.axiom5_defect(&e, &h1, &h2);
            (!d.is_zero()).then(|| {
                (
                    vec![format!("{e:?}"), format!("{h1:?}"), format!("{h2:?}")],
                    d.to_string(),
                )
            })
        });
    }

    fn lemmas_suite(&mut self, label: &str, c: &CourantInstance) {
        let (deg, bound, trials) = (self.plan.degree, self.plan.coeff_bound, self.plan.trials);
        self.check(Suite::Lemmas, label, "bracket_with_df_exact", trials, |rng| {
            let e = c.random_section(rng, deg, bound);
            let f = c.random_function(rng, deg, bound);
            let d = c.prop_main_defect(&e, &f);
            (!d.is_zero()).then(|| {
                (vec![format!("{e:?}"), format!("f = {f}")], format!("{d:?}"))
            })
        });
        self.check(Suite::Lemmas, label, "t_against_df_quarter_anchor", trials, |rng| {
            let e1 = c.random_section(rng, deg, bound);
            let e2 = c.random_section(rng, deg, bound);
            let f = c.random_function(rng, deg, bound);
            let d = c.lemma_a1_defect(&e1, &e2, &f);
            (!d.is_zero()).then(|| {
                (
                    vec![format!("{e1:?}"), format!("{e2:?}"), format!("f = {f}")],
                    d.to_string(),
                )
            })
        });
        self.check(Suite::Lemmas, label, "k_plus_2j_vanishes", trials, |rng| {
            let e: Vec<Section> = (0..4).map(|_| c.random_section(rng, deg, bound)).collect();
            let d = c.lemma_a2_defect(&e[0], &e[1], &e[2], &e[3]);
            (!d.is_zero()).then(|| {
                (e.iter().map(|s| format!("{s:?}")).collect(), d.to_string())
            })
        });
    }

    fn shla_suite(&mut self, label: &str, c: &CourantInstance) {
        let (deg, bound, trials) = (self.plan.degree, self.plan.coeff_bound, self.plan.trials);
        for n in 1..=5usize {
            let check = format!("shla_defect_n{n}");
            let l = LInfty::new(c);
            self.check(Suite::Shla, label, &check, trials, |rng| {
                let w = l.random_word(rng, n, deg, bound);
                let d = l.shla_defect(n, &w).expect("word length matches n");
                (!d.is_zero()).then(|| {
                    (
                        w.factors().iter().map(|f| format!("{f:?}")).collect(),
                        d.render(),
                    )
                })
            });
        }
        let l = LInfty::new(c);
        self.check(Suite::Shla, label, "shla_routes_agree", trials, |rng| {
            let n = rand::Rng::gen_range(rng, 1..=5usize);
            let w = l.random_word(rng, n, deg, bound);
            let a = l.shla_defect(n, &w).expect("length ok");
            let b = l.shla_defect_direct(n, &w).expect("length ok");
            (a != b).then(|| {
                (
                    w.factors().iter().map(|f| format!("{f:?}")).collect(),
                    format!("coderivation route {} vs direct route {}", a.render(), b.render()),
                )
            })
        });
    }

    fn bialgebroid_suite(&mut self, label: &str, decl: &InstanceDecl, c: &CourantInstance) {
        let (deg, bound, trials) = (self.plan.degree, self.plan.coeff_bound, self.plan.trials);
        if let Some(pair) = decl_pair(decl) {
            let pair = match pair {
                Ok(p) => p,
                // construction errors were already reported when the
                // instance itself was built
                Err(_) => return,
            };
            let (r, n) = (pair.rank(), pair.base_dim());
            self.check(Suite::Bialgebroid, label, "compat_d_star_derivation", trials, |rng| {
                let x = Coords((0..r).map(|_| random_poly(rng, n, deg, bound)).collect());
                let y = Coords((0..r).map(|_| random_poly(rng, n, deg, bound)).collect());
                let d = pair.compat_defect(&x, &y);
                (!d.is_zero()).then(|| {
                    (vec![format!("{x:?}"), format!("{y:?}")], format!("{d:?}"))
                })
            });
        }
        if matches!(decl, InstanceDecl::Standard { .. }) {
            // extraction roundtrip: extract (TM, T*M), double it, compare
            // with the ambient bracket; then the swapped extraction
            let tm = DiracCandidate::tangent(c).expect("tangent frame");
            let tstar = DiracCandidate::cotangent(c).expect("cotangent frame");
            match extract_bialgebroid(&tm, &tstar) {
                Ok(pair) => {
                    let double = CourantInstance::bialgebroid_double(pair);
                    self.check(Suite::Bialgebroid, label, "extract_double_roundtrip", trials, |rng| {
                        let e1 = c.random_section(rng, deg, bound);
                        let e2 = c.random_section(rng, deg, bound);
                        let lhs = c.bracket(&e1, &e2);
                        let rhs = double.bracket(&e1, &e2);
                        let d = lhs.sub(&rhs);
                        (!d.is_zero()).then(|| {
                            (vec![format!("{e1:?}"), format!("{e2:?}")], format!("{d:?}"))
                        })
                    });
                }
                Err(e) => {
                    self.records.push(CheckRecord {
                        suite: Suite::Bialgebroid.name().into(),
                        instance: label.into(),
                        check: "extract_double_roundtrip".into(),
                        trials: 0,
                        passed: false,
                        counterexample: Some(Counterexample {
                            seed: self.plan.seed,
                            trial: 0,
                            inputs: vec![],
                            defect: format!("extraction failed: {e}"),
                        }),
                    });
                }
            }
            match extract_bialgebroid(&tstar, &tm) {
                Ok(swapped) => {
                    let (r, n) = (swapped.rank(), swapped.base_dim());
                    self.check(Suite::Bialgebroid, label, "swapped_extraction_compat", trials, |rng| {
                        let x = Coords((0..r).map(|_| random_poly(rng, n, deg, bound)).collect());
                        let y = Coords((0..r).map(|_| random_poly(rng, n, deg, bound)).collect());
                        let d = swapped.compat_defect(&x, &y);
                        (!d.is_zero()).then(|| {
                            (vec![format!("{x:?}"), format!("{y:?}")], format!("{d:?}"))
                        })
                    });
                }
                Err(e) => {
                    self.records.push(CheckRecord {
                        suite: Suite::Bialgebroid.name().into(),
                        instance: label.into(),
                        check: "swapped_extraction_compat".into(),
                        trials: 0,
                        passed: false,
                        counterexample: Some(Counterexample {
                            seed: self.plan.seed,
                            trial: 0,
                            inputs: vec![],
                            defect: format!("swapped extraction failed: {e}"),
                        }),
                    });
                }
            }
        }
    }

    fn dirac_suite(&mut self, decls: &[DiracDecl]) {
        // built-in equivalence batteries over the standard instance on R^3
        let std3 = CourantInstance::standard(3);
        self.check(Suite::Dirac, "standard(dim=3)", "battery_2forms_closed_iff_integrable", 1, |_| {
            for (name, omega) in two_form_battery() {
                let cand = match DiracCandidate::graph_2form(&std3, &omega) {
                    Ok(c) => c,
                    Err(e) => return Some((vec![name.into()], e.to_string())),
                };
                if !cand.is_isotropic().0 {
                    return Some((vec![name.into()], "graph not isotropic".into()));
                }
                let integrable = match cand.is_integrable() {
                    Ok((ok, _)) => ok,
                    Err(e) => return Some((vec![name.into()], e.to_string())),
                };
                if integrable != omega.de_rham_d().is_zero() {
                    return Some((
                        vec![name.into()],
                        format!("integrable={} but closed={}", integrable, !integrable),
                    ));
                }
            }
            None
        });
        self.check(Suite::Dirac, "standard(dim=3)", "battery_bivectors_poisson_iff_integrable", 1, |_| {
            for (name, pi) in bivector_battery() {
                let cand = match DiracCandidate::graph_bivector(&std3, &pi) {
                    Ok(c) => c,
                    Err(e) => return Some((vec![name.into()], e.to_string())),
                };
                if !cand.is_isotropic().0 {
                    return Some((vec![name.into()], "graph not isotropic".into()));
                }
                let integrable = match cand.is_integrable() {
                    Ok((ok, _)) => ok,
                    Err(e) => return Some((vec![name.into()], e.to_string())),
                };
                if integrable != pi.schouten(&pi).is_zero() {
                    return Some((
                        vec![name.into()],
                        format!("integrable={} but poisson={}", integrable, !integrable),
                    ));
                }
            }
            None
        });
        // declared candidates: isotropy plus the matching integrability
        // criterion
        for decl in decls {
            let label = decl.label();
            let ambient = CourantInstance::standard(decl.dim());
            let built: Result<(DiracCandidate, Option<bool>), String> = (|| {
                if let Some(omega) = decl.two_form()? {
                    let cand = DiracCandidate::graph_2form(&ambient, &omega)
                        .map_err(|e| e.to_string())?;
                    return Ok((cand, Some(omega.de_rham_d().is_zero())));
                }
                if let Some(pi) = decl.bivector()? {
                    let cand = DiracCandidate::graph_bivector(&ambient, &pi)
                        .map_err(|e| e.to_string())?;
                    return Ok((cand, Some(pi.schouten(&pi).is_zero())));
                }
                let sections = decl.frame_sections()?.expect("frame variant");
                let cand =
                    DiracCandidate::from_frame(&ambient, sections).map_err(|e| e.to_string())?;
                Ok((cand, None))
            })();
            match built {
                Ok((cand, expected)) => {
                    self.check(Suite::Dirac, &label, "isotropic", 1, |_| {
                        let (ok, w) = cand.is_isotropic();
                        (!ok).then(|| match w {
                            Some(w) => (
                                vec![format!("frame pair {:?}", w.indices)],
                                w.value.to_string(),
                            ),
                            None => (vec![], "frame rank is not half the bundle rank".into()),
                        })
                    });
                    if cand.is_isotropic().0 {
                        self.check(Suite::Dirac, &label, "integrability", 1, |_| {
                            match (cand.is_integrable(), expected) {
                                (Ok((got, _)), Some(want)) if got == want => None,
                                (Ok((true, _)), None) => None,
                                (Ok((got, w)), _) => {
                                    let obstruction = w
                                        .map(|w| {
                                            format!(
                                                "obstruction at {:?}: {}",
                                                w.indices, w.value
                                            )
                                        })
                                        .unwrap_or_default();
                                    Some((
                                        vec![format!("integrable = {got}")],
                                        obstruction,
                                    ))
                                }
                                (Err(e), _) => Some((vec![], e.to_string())),
                            }
                        });
                    }
                }
                Err(e) => {
                    self.records.push(CheckRecord {
                        suite: Suite::Dirac.name().into(),
                        instance: label,
                        check: "construction".into(),
                        trials: 0,
                        passed: false,
                        counterexample: Some(Counterexample {
                            seed: self.plan.seed,
                            trial: 0,
                            inputs: vec![],
                            defect: e,
                        }),
                    });
                }
            }
        }
    }
}

fn decl_pair(decl: &InstanceDecl) -> Option<Result<LieBialgebroidPair, String>> {
    match decl {
        InstanceDecl::DoubleStandardPair { dim } => Some(Ok(LieBialgebroidPair::standard(*dim))),
        InstanceDecl::DoublePoisson { .. } | InstanceDecl::DoublePointBialgebra { .. } => {
            // rebuild through the decl to reuse its parsing
            match decl.build(None) {
                Ok(_) => match decl {
                    InstanceDecl::DoublePoisson { dim, pi } => {
                        let pi = match pi_from_decl(*dim, pi) {
                            Ok(p) => p,
                            Err(e) => return Some(Err(e)),
                        };
                        Some(LieBialgebroidPair::poisson(&pi).map_err(|e| e.to_string()))
                    }
                    InstanceDecl::DoublePointBialgebra { g, gstar } => {
                        Some(LieBialgebroidPair::point_bialgebra(g, gstar).map_err(|e| e.to_string()))
                    }
                    _ => unreachable!(),
                },
                Err(e) => Some(Err(e)),
            }
        }
        _ => None,
    }
}

fn pi_from_decl(
    dim: usize,
    comps: &[((usize, usize), String)],
) -> Result<crate::cartan::Multivector, String> {
    let mut parsed = Vec::new();
    for ((i, j), src) in comps {
        let p = crate::exact_poly::Poly::parse(src, dim).map_err(|e| e.to_string())?;
        parsed.push((vec![i - 1, j - 1], p));
    }
    Ok(crate::cartan::Multivector::from_components(dim, 2, parsed))
}

/// All check ids the runner can emit, for `list-checks`.
pub fn list_checks() -> Vec<(&'static str, &'static str)> {
    vec![
        ("axioms", "axiom1_jacobiator_dt"),
        ("axioms", "axiom2_anchor_morphism"),
        ("axioms", "axiom3_leibniz_anomaly"),
        ("axioms", "axiom4_df_dg_orthogonal"),
        ("axioms", "axiom5_pairing_invariance"),
        ("lemmas", "bracket_with_df_exact"),
        ("lemmas", "t_against_df_quarter_anchor"),
        ("lemmas", "k_plus_2j_vanishes"),
        ("shla", "shla_defect_n1"),
        ("shla", "shla_defect_n2"),
        ("shla", "shla_defect_n3"),
        ("shla", "shla_defect_n4"),
        ("shla", "shla_defect_n5"),
        ("shla", "shla_routes_agree"),
        ("dirac", "battery_2forms_closed_iff_integrable"),
        ("dirac", "battery_bivectors_poisson_iff_integrable"),
        ("dirac", "isotropic"),
        ("dirac", "integrability"),
        ("bialgebroid", "compat_d_star_derivation"),
        ("bialgebroid", "extract_double_roundtrip"),
        ("bialgebroid", "swapped_extraction_compat"),
    ]
}

/// Runs every requested suite of the plan and assembles the report.
pub fn run_plan(plan: &VerificationPlan) -> Report {
    let mut runner = Runner {
        plan,
        stream: 0,
        records: Vec::new(),
    };
    let mut construction_errors = Vec::new();
    let mut instances = Vec::new();
    for decl in &plan.instances {
        match decl.build(plan.corruption) {
            Ok(c) => instances.push((decl.clone(), decl.label(), c)),
            Err(e) => construction_errors.push(ConstructionError {
                instance: decl.label(),
                error: e,
            }),
        }
    }
    for suite in &plan.suites {
        let started = std::time::Instant::now();
        match suite {
            Suite::Axioms => {
                for (_, label, c) in &instances {
                    runner.axioms_suite(label, c);
                }
            }
            Suite::Lemmas => {
                for (_, label, c) in &instances {
                    runner.lemmas_suite(label, c);
                }
            }
            Suite::Shla => {
                for (_, label, c) in &instances {
                    runner.shla_suite(label, c);
                }
            }
            Suite::Bialgebroid => {
                for (decl, label, c) in &instances {
                    runner.bialgebroid_suite(label, decl, c);
                }
            }
            Suite::Dirac => {
                runner.dirac_suite(&plan.dirac);
            }
        }
        eprintln!(
            "suite {} finished in {:.3}s",
            suite.name(),
            started.elapsed().as_secs_f64()
        );
    }
    let failed = runner.records.iter().filter(|r| !r.passed).count();
    Report {
        seed: plan.seed,
        trials: plan.trials,
        degree: plan.degree,
        coeff_bound: plan.coeff_bound,
        suites: plan.suites.iter().map(|s| s.name().to_string()).collect(),
        total_checks: runner.records.len(),
        failed_checks: failed,
        records: runner.records,
        construction_errors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plan::parse_plan;

    fn small_plan(extra: &str) -> VerificationPlan {
        let src = format!(
            "seed = 5\ntrials = 5\ndegree = 2\ncoeff_bound = 2\n{extra}\ncourant {{ kind = \"standard\", dim = 3 }}\n"
        );
        parse_plan(&src).unwrap()
    }

    #[test]
    fn standard_plan_passes_all_suites() {
        let plan = small_plan("");
        let report = run_plan(&plan);
        assert_eq!(report.exit_code(), 0, "{}", report.render_text());
        assert!(report.total_checks > 10);
        assert_eq!(report.failed_checks, 0);
    }

    #[test]
    fn corrupted_plan_fails_with_counterexample() {
        let plan = small_plan("corruption = \"flip-d-term\"\nsuites = [axioms]");
        let report = run_plan(&plan);
        assert_eq!(report.exit_code(), 1);
        let failing = report.records.iter().find(|r| !r.passed).unwrap();
        let ce = failing.counterexample.as_ref().unwrap();
        assert!(!ce.inputs.is_empty());
        assert!(!ce.defect.is_empty());
    }

    #[test]
    fn construction_error_yields_exit_2() {
        let src = r#"
            trials = 2
            suites = [axioms]
            courant {
              kind = "bialgebroid_double"
              pair = "poisson"
              pi = { (1,2): "x2", (2,3): "1" }
            }
        "#;
        let report = run_plan(&parse_plan(src).unwrap());
        assert_eq!(report.exit_code(), 2);
        assert_eq!(report.construction_errors.len(), 1);
    }

    #[test]
    fn reports_are_deterministic() {
        let plan = small_plan("");
        let a = run_plan(&plan);
        let b = run_plan(&plan);
        assert_eq!(a.render_text(), b.render_text());
        assert_eq!(a.render_json(), b.render_json());
    }

    #[test]
    fn dirac_declarations_run() {
        let src = r#"
            trials = 2
            suites = [dirac]
            dirac { kind = "graph_2form", omega = { (1,2): "x3" } }
            dirac { kind = "graph_bivector", pi = { (1,2): "x3", (2,3): "x1", (3,1): "x2" } }
            dirac { kind = "frame", sections = [["1","0","0","0","0","0"],
                                               ["0","1","0","0","0","0"],
                                               ["0","0","1","0","0","0"]] }
        "#;
        let report = run_plan(&parse_plan(src).unwrap());
        // non-closed 2-form: its integrability check records the expected
        // disagreement as agreement with d-omega (so it passes)
        assert_eq!(report.exit_code(), 0, "{}", report.render_text());
        assert!(report
            .records
            .iter()
            .any(|r| r.check == "battery_2forms_closed_iff_integrable" && r.passed));
    }

    #[test]
    fn list_checks_covers_every_suite() {
        let names: Vec<&str> = list_checks().iter().map(|(s, _)| *s).collect();
        for s in ["axioms", "lemmas", "shla", "dirac", "bialgebroid"] {
            assert!(names.contains(&s));
        }
    }
}
