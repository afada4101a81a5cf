//! The full per-graph verification pipeline and its JSON report.

use rayon::prelude::*;
use serde::Serialize;

use crate::count::{CountOptions, CountRecord, Method};
use crate::error::{Error, Result};
use crate::family::CatalogEntry;
use crate::field::{next_prime, Prime};
use crate::graph::{Edge, EdgeCensus};
use crate::motive::{
    constant_matches, hodge_form, modl_verdict, predicted_sb_constant, projective_verdict,
    Checker, ClassOutcome, ClassPoly, CongruenceVerdict, HELD_OUT,
};
use crate::symanzik::psi_by_trees;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub primes: Vec<Prime>,
    pub budget: u64,
    pub method: Method,
    pub parallel: bool,
    /// Also fit a class in `Z[L]`, extending the prime list as needed.
    pub classes: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            primes: DEFAULT_PRIMES.iter().map(|&q| Prime::new(q).unwrap()).collect(),
            budget: crate::count::DEFAULT_BUDGET,
            method: Method::Fibered,
            parallel: true,
            classes: true,
        }
    }
}

impl VerifyConfig {
    /// Checks primality and rejects duplicates.
    pub fn with_primes(mut self, primes: &[u64]) -> Result<Self> {
        let mut out: Vec<Prime> = Vec::with_capacity(primes.len());
        for &q in primes {
            let p = Prime::new(q)?;
            if out.contains(&p) {
                return Err(Error::Family(format!("prime {q} listed twice")));
            }
            out.push(p);
        }
        if out.is_empty() {
            return Err(Error::Family("empty prime list".into()));
        }
        self.primes = out;
        Ok(self)
    }

    fn checker(&self) -> Checker {
        Checker::new(
            self.method,
            CountOptions {
                budget: self.budget,
                parallel: self.parallel,
            },
        )
    }
}

/// The configured primes in ascending order, extended by successive primes
/// until there are enough for a degree-`n` fit plus held-out checks.
pub fn class_primes(primes: &[Prime], edge_count: usize) -> Vec<Prime> {
    let mut out: Vec<Prime> = primes.to_vec();
    out.sort_unstable();
    let needed = edge_count + 1 + HELD_OUT;
    while out.len() < needed {
        let last = out.last().map_or(2, |p| p.get());
        out.push(Prime::new(next_prime(last)).expect("next_prime is prime"));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ProjectiveEntry {
    Checked(CongruenceVerdict),
    Inapplicable { reason: String },
    NotRun,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HodgeReport {
    pub constant: i128,
    pub tail: String,
    pub predicted_constant: i64,
    pub matches_prediction: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ClassEntry {
    Candidate {
        class: String,
        coefficients: ClassPoly,
        fit_primes: Vec<u64>,
        held_out_primes: Vec<u64>,
        hodge: HodgeReport,
    },
    NotPolynomiallyConsistent {
        reason: String,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphReport {
    pub id: String,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub betti_1: usize,
    pub edges: Vec<Edge>,
    pub census: EdgeCensus,
    pub psi: String,
    pub predicted_sb_constant: i64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub counts: Vec<CountRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modl: Option<CongruenceVerdict>,
    pub projective: ProjectiveEntry,
    pub dc_checks: Vec<CongruenceVerdict>,
    pub class: ClassEntry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub graphs: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub field: &'static str,
    pub primes: Vec<u64>,
    pub method: Method,
    pub budget: u64,
    pub graphs: Vec<GraphReport>,
    pub summary: Summary,
    pub overall_pass: bool,
}

pub const FIELD_NOTE: &str = "F_p shadow: counts over prime fields only, prime powers not covered";

pub fn run_verify(graphs: &[CatalogEntry], cfg: &VerifyConfig) -> VerifyReport {
    let reports: Vec<GraphReport> = if cfg.parallel {
        graphs.par_iter().map(|e| verify_graph(e, cfg)).collect()
    } else {
        graphs.iter().map(|e| verify_graph(e, cfg)).collect()
    };
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    let summary = Summary {
        graphs: reports.len(),
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        skipped: count(Status::Skipped),
    };
    VerifyReport {
        schema: SCHEMA_VERSION,
        field: FIELD_NOTE,
        primes: cfg.primes.iter().map(|p| p.get()).collect(),
        method: cfg.method,
        budget: cfg.budget,
        graphs: reports,
        summary,
        overall_pass: summary.failed == 0,
    }
}

pub fn verify_graph(entry: &CatalogEntry, cfg: &VerifyConfig) -> GraphReport {
    let g = &entry.graph;
    let mut report = GraphReport {
        id: entry.id.clone(),
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        betti_1: g.betti_1(),
        edges: g.edges().to_vec(),
        census: g.census(),
        psi: psi_by_trees(g).to_string(),
        predicted_sb_constant: predicted_sb_constant(g),
        status: Status::Pass,
        reason: None,
        counts: Vec::new(),
        modl: None,
        projective: ProjectiveEntry::NotRun,
        dc_checks: Vec::new(),
        class: ClassEntry::Skipped {
            reason: "not run".into(),
        },
    };
    match run_checks(entry, cfg, &mut report) {
        Ok(()) => {}
        Err(e @ Error::BudgetExceeded { .. }) => {
            report.status = Status::Skipped;
            report.reason = Some(e.to_string());
            return report;
        }
        Err(e) => {
            report.status = Status::Fail;
            report.reason = Some(e.to_string());
            return report;
        }
    }

    report.class = if cfg.classes {
        class_entry(entry, cfg)
    } else {
        ClassEntry::Skipped {
            reason: "class fitting disabled".into(),
        }
    };

    let verdicts_pass = report.modl.as_ref().is_none_or(|v| v.pass)
        && match &report.projective {
            ProjectiveEntry::Checked(v) => v.pass,
            _ => true,
        }
        && report.dc_checks.iter().all(|v| v.pass);
    let class_pass = match &report.class {
        ClassEntry::Candidate { hodge, .. } => hodge.matches_prediction,
        _ => true,
    };
    if !verdicts_pass {
        report.status = Status::Fail;
        report.reason = Some("a verdict failed".into());
    } else if !class_pass {
        report.status = Status::Fail;
        report.reason = Some("class constant differs from the predicted constant".into());
    }
    report
}

fn run_checks(entry: &CatalogEntry, cfg: &VerifyConfig, report: &mut GraphReport) -> Result<()> {
    let g = &entry.graph;
    let checker = cfg.checker();
    let counts = checker.count_graph_at(g, &cfg.primes)?;
    report.modl = Some(modl_verdict(&entry.id, g, &counts));
    report.projective = match projective_verdict(&entry.id, g, &counts) {
        Ok(v) => ProjectiveEntry::Checked(v),
        Err(Error::Inapplicable(reason)) => ProjectiveEntry::Inapplicable { reason },
        Err(e) => return Err(e),
    };
    let mut labels: Vec<usize> = g.labels().collect();
    labels.sort_unstable();
    for label in labels {
        for rec in &counts {
            let q = Prime::new(rec.q)?;
            report.dc_checks.push(checker.dc_verdict(
                &entry.id,
                g,
                label,
                q,
                rec.complement_count,
            )?);
        }
    }
    report.counts = counts;
    Ok(())
}

fn class_entry(entry: &CatalogEntry, cfg: &VerifyConfig) -> ClassEntry {
    let g = &entry.graph;
    let primes = class_primes(&cfg.primes, g.edge_count());
    match cfg.checker().interpolate_class(g, &primes) {
        Ok(ClassOutcome::Candidate {
            class,
            fit_primes,
            held_out_primes,
        }) => {
            let split = hodge_form(&class);
            let predicted = predicted_sb_constant(g);
            ClassEntry::Candidate {
                class: class.to_string(),
                hodge: HodgeReport {
                    constant: i128::try_from(&split.constant).unwrap_or(i128::MAX),
                    tail: split.tail.to_string(),
                    predicted_constant: predicted,
                    matches_prediction: constant_matches(&split, g),
                },
                coefficients: class,
                fit_primes,
                held_out_primes,
            }
        }
        Ok(ClassOutcome::NotPolynomiallyConsistent { reason }) => {
            ClassEntry::NotPolynomiallyConsistent { reason }
        }
        Err(e) => ClassEntry::Skipped {
            reason: e.to_string(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{generate_family, FamilySpec};
    use crate::graph::Multigraph;

    fn entry(id: &str, g: Multigraph) -> CatalogEntry {
        CatalogEntry {
            id: id.into(),
            graph: g,
        }
    }

    fn fam(s: &str) -> CatalogEntry {
        entry(s, generate_family(s.parse::<FamilySpec>().unwrap()).unwrap())
    }

    #[test]
    fn triangle_passes() {
        let cfg = VerifyConfig::default().with_primes(&[3, 5]).unwrap();
        let report = run_verify(&[fam("cycle:3")], &cfg);
        assert!(report.overall_pass);
        let g = &report.graphs[0];
        assert_eq!(g.status, Status::Pass);
        assert_eq!(g.dc_checks.len(), 6);
        match &g.class {
            ClassEntry::Candidate { class, hodge, fit_primes, .. } => {
                assert_eq!(class, "L^3 - L^2");
                assert_eq!(fit_primes, &vec![3, 5, 7, 11]);
                assert_eq!(hodge.tail, "L^2 - L");
                assert!(hodge.matches_prediction);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_loop_residue() {
        let cfg = VerifyConfig::default().with_primes(&[5]).unwrap();
        let report = run_verify(&[fam("bouquet:1")], &cfg);
        assert!(report.overall_pass);
        let modl = report.graphs[0].modl.as_ref().unwrap();
        assert_eq!((modl.observations[0].expected, modl.observations[0].observed), (4, 4));
        assert!(matches!(report.graphs[0].projective, ProjectiveEntry::Inapplicable { .. }));
    }

    #[test]
    fn large_graph_is_skipped() {
        let report = run_verify(&[fam("bouquet:20")], &VerifyConfig::default());
        assert_eq!(report.graphs[0].status, Status::Skipped);
        assert!(report.graphs[0].reason.as_deref().unwrap().contains("budget"));
        assert!(report.overall_pass);
        assert_eq!(report.summary.skipped, 1);
    }

    #[test]
    fn config_validation() {
        assert!(VerifyConfig::default().with_primes(&[3, 4]).is_err());
        assert!(VerifyConfig::default().with_primes(&[3, 3]).is_err());
        assert!(VerifyConfig::default().with_primes(&[]).is_err());
    }

    #[test]
    fn class_primes_extend() {
        let ps: Vec<u64> = class_primes(&[Prime::new(5).unwrap(), Prime::new(3).unwrap()], 3)
            .iter()
            .map(|p| p.get())
            .collect();
        assert_eq!(ps, vec![3, 5, 7, 11, 13, 17]);
    }
}
