//! Randomised cross-checks between the role methods and their oracles.
//!
//! Each suite draws its graphs from a ChaCha8 stream seeded by
//! [`VerifyConfig::seed`], so a report is a pure function of the config.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exact::{self, ExactConfig};
use crate::generators::{make_figure1_pair, random_gnp, random_permutation};
use crate::graph::{disjoint_union, Coloring, Graph, GraphCollection};
use crate::partition;
use crate::snp;
use crate::wl::{self, SignatureMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Number of random graphs for the WL suite; the other suites scale from it.
    pub trials: usize,
    /// Signature mode used for every WL computation.
    pub mode: SignatureMode,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            trials: 200,
            mode: SignatureMode::Exact,
        }
    }
}

/// Outcome of one suite.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<12} {} {}/{} cases ok",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.cases - self.failures,
            self.cases
        )?;
        if let Some(msg) = &self.first_failure {
            write!(f, "; first failure: {msg}")?;
        }
        Ok(())
    }
}

struct Suite {
    report: SuiteReport,
    start: Instant,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            report: SuiteReport {
                name,
                cases: 0,
                failures: 0,
                first_failure: None,
                elapsed: Duration::ZERO,
            },
            start: Instant::now(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.report.cases += 1;
        if !ok {
            self.report.failures += 1;
            if self.report.first_failure.is_none() {
                self.report.first_failure = Some(describe());
            }
        }
    }

    fn finish(mut self) -> SuiteReport {
        self.report.elapsed = self.start.elapsed();
        self.report
    }
}

fn rng_for(config: &VerifyConfig, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(stream);
    rng
}

fn random_small_graph(rng: &mut ChaCha8Rng, max_n: usize) -> Graph {
    let n = rng.gen_range(1..=max_n);
    let p = if rng.gen_bool(0.5) { 0.2 } else { 0.5 };
    random_gnp(n, p, rng)
}

fn describe(g: &Graph) -> String {
    format!("n={} edges={:?}", g.n(), g.edges().collect::<Vec<_>>())
}

/// Coloring of `g` pulled back from a colouring of `g.permute(perm)`.
fn pull_back(c: &Coloring, perm: &[usize]) -> Coloring {
    Coloring::from_keys(perm.iter().map(|&p| c.color(p)))
}

/// 6-cycle vs two triangles: WL never separates the graphs, SNP and exact roles do from
/// depth 2 on.
pub fn figure1_suite(config: &VerifyConfig) -> Result<SuiteReport> {
    let mut suite = Suite::new("figure1");
    let (c6, tri) = make_figure1_pair();
    let pair = GraphCollection::new(vec![c6, tri], None)?;
    let union = pair.union();
    let trace = wl::wl_roles_with(&union, 6, config.mode);
    let exact_cfg = ExactConfig::default();
    for d in 0..=6 {
        let expected = if d < 2 { 1 } else { 2 };
        let wl_classes = trace.at(d).num_classes();
        suite.check(wl_classes == 1, || {
            format!("wl depth {d}: {wl_classes} classes")
        });
        let snp_classes = snp::snp_roles(&pair, d)?.num_classes();
        suite.check(snp_classes == expected, || {
            format!("snp depth {d}: {snp_classes} classes")
        });
        let exact_classes = exact::exact_roles(&union, d, &exact_cfg)?.num_classes();
        suite.check(exact_classes == expected, || {
            format!("exact depth {d}: {exact_classes} classes")
        });
    }
    Ok(suite.finish())
}

/// WL roles at depth `d` against unravelling-tree isomorphism classes.
pub fn wl_unravelling_suite(config: &VerifyConfig) -> Result<SuiteReport> {
    let mut suite = Suite::new("wl-oracle");
    let mut rng = rng_for(config, 2);
    for _ in 0..config.trials {
        let g = random_small_graph(&mut rng, 10);
        let trace = wl::wl_roles_with(&g, 4, config.mode);
        for d in 0..=4 {
            let oracle = exact::unidentified_roles(&g, d)?;
            let ok = partition::equivalent(trace.at(d), &oracle)?;
            suite.check(ok, || format!("depth {d}, {}", describe(&g)));
        }
    }
    Ok(suite.finish())
}

/// Identified unravelling equivalence at depth `max(n1, n2)` against
/// automorphism orbits of the disjoint union.
pub fn orbit_suite(config: &VerifyConfig) -> Result<SuiteReport> {
    let mut suite = Suite::new("orbits");
    let mut rng = rng_for(config, 3);
    let exact_cfg = ExactConfig {
        max_orbit_nodes: 12,
        ..ExactConfig::default()
    };
    for _ in 0..config.trials.div_ceil(4) {
        let g1 = random_small_graph(&mut rng, 6);
        let g2 = random_small_graph(&mut rng, 6);
        let d = g1.n().max(g2.n());
        let orbits =
            exact::automorphism_orbits(&disjoint_union(&[g1.clone(), g2.clone()]), &exact_cfg)?;
        for u in 0..g1.n() {
            for v in 0..g2.n() {
                let identified = exact::identified_equivalent(&g1, u, &g2, v, d)?;
                let same = orbits.same_orbit(u, g1.n() + v);
                suite.check(identified == same, || {
                    format!(
                        "u={u} v={v}: identified={identified} orbit={same}; {} / {}",
                        describe(&g1),
                        describe(&g2)
                    )
                });
            }
        }
    }
    Ok(suite.finish())
}

/// Exact roles refine WL and SNP roles, and every method refines itself
/// across depths.
pub fn hierarchy_suite(config: &VerifyConfig) -> Result<SuiteReport> {
    let mut suite = Suite::new("hierarchy");
    let mut rng = rng_for(config, 4);
    let exact_cfg = ExactConfig::default();
    for _ in 0..config.trials.div_ceil(2) {
        let g = random_small_graph(&mut rng, 8);
        let trace = wl::wl_roles_with(&g, 4, config.mode);
        let single = GraphCollection::new(vec![g.clone()], None)?;
        let snp_roles = snp::snp_role_sweep(&single, 4)?;
        let exact_roles = (0..=4)
            .map(|d| exact::exact_roles(&g, d, &exact_cfg))
            .collect::<Result<Vec<_>>>()?;
        for d in 0..=4 {
            let ok = partition::refines(&exact_roles[d], trace.at(d))?
                && partition::refines(&exact_roles[d], &snp_roles[d])?;
            suite.check(ok, || {
                format!("exact vs wl/snp at depth {d}, {}", describe(&g))
            });
            if d < 4 {
                let ok = partition::refines(trace.at(d + 1), trace.at(d))?
                    && partition::refines(&snp_roles[d + 1], &snp_roles[d])?
                    && partition::refines(&exact_roles[d + 1], &exact_roles[d])?;
                suite.check(ok, || format!("depth {} vs {d}, {}", d + 1, describe(&g)));
            }
        }
    }
    Ok(suite.finish())
}

/// Relabelling a graph leaves SNP embeddings unchanged and permutes every
/// role partition accordingly.
pub fn invariance_suite(config: &VerifyConfig) -> Result<SuiteReport> {
    let mut suite = Suite::new("invariance");
    let mut rng = rng_for(config, 5);
    let exact_cfg = ExactConfig::default();
    let d = 3;
    for _ in 0..config.trials.div_ceil(2) {
        let g = random_small_graph(&mut rng, 8);
        let perm = random_permutation(g.n(), &mut rng);
        let h = g.permute(&perm)?;
        let mut embeddings_ok = true;
        for (v, &pv) in perm.iter().enumerate() {
            embeddings_ok &= snp::snp_embedding(&g, v, d)? == snp::snp_embedding(&h, pv, d)?;
        }
        suite.check(embeddings_ok, || {
            format!("snp embeddings, {}", describe(&g))
        });

        let wl_g = wl::wl_roles_with(&g, d, config.mode);
        let wl_h = wl::wl_roles_with(&h, d, config.mode);
        let snp_g = snp::snp_roles(&GraphCollection::new(vec![g.clone()], None)?, d)?;
        let snp_h = snp::snp_roles(&GraphCollection::new(vec![h.clone()], None)?, d)?;
        let ex_g = exact::exact_roles(&g, d, &exact_cfg)?;
        let ex_h = exact::exact_roles(&h, d, &exact_cfg)?;
        for (name, cg, ch) in [
            ("wl", wl_g.at(d), wl_h.at(d)),
            ("snp", &snp_g, &snp_h),
            ("exact", &ex_g, &ex_h),
        ] {
            let ok = partition::equivalent(cg, &pull_back(ch, &perm))?;
            suite.check(ok, || format!("{name} roles, {}", describe(&g)));
        }
    }
    Ok(suite.finish())
}

/// Runs every suite in a fixed order.
pub fn run_all(config: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        figure1_suite(config)?,
        wl_unravelling_suite(config)?,
        orbit_suite(config)?,
        hierarchy_suite(config)?,
        invariance_suite(config)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig {
            seed: 7,
            trials: 16,
            mode: SignatureMode::Exact,
        }
    }

    #[test]
    fn suites_pass_on_correct_code() {
        for report in run_all(&small()).unwrap() {
            assert!(report.passed(), "{report}");
            assert!(report.cases > 0);
        }
    }

    #[test]
    fn colliding_signatures_are_caught() {
        let config = VerifyConfig {
            mode: SignatureMode::Colliding { buckets: 1 },
            ..small()
        };
        let reports = run_all(&config).unwrap();
        assert!(!reports.iter().all(SuiteReport::passed));
        assert!(!wl_unravelling_suite(&config).unwrap().passed());
    }

    #[test]
    fn reports_are_deterministic() {
        let a: Vec<String> = run_all(&small())
            .unwrap()
            .iter()
            .map(|r| r.to_string())
            .collect();
        let b: Vec<String> = run_all(&small())
            .unwrap()
            .iter()
            .map(|r| r.to_string())
            .collect();
        assert_eq!(a, b);
    }
}
