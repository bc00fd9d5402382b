//! Solve and verify whole files: the glue shared by the command-line tool and
//! the test suites.

use crate::error::{Error, Result};
use crate::geometry::{build_rmc, enumerate_halfspaces, solve_geometric, verify_partition};
use crate::greedy::{GreedyOptions, SubmodularObjective};
use crate::instances::{
    pcms_objective, ptd_to_pcms, rmc_objective, solve_pcms, solve_ptd, solve_rmc, verify_ptd,
    verify_rmc,
};
use crate::io::{
    emit_solution, generate_instance, generate_pcms, generate_rmc, AbstractParams, GeneratorParams,
    InstanceFile, SolutionFile, TargetRule, ViolationRecord,
};
use crate::oracle::{check_submodular, exact_min_cover, realizable_subsets, OracleBudget};

/// Runs the greedy solver matching the instance kind.
pub fn solve_instance(instance: &InstanceFile, opts: GreedyOptions) -> Result<SolutionFile> {
    let kind = instance.kind();
    let sol = match instance {
        InstanceFile::Geometric(cfg) => {
            let sol = solve_geometric(cfg, opts)?;
            SolutionFile {
                kind,
                feasible: sol.feasible(),
                chosen: sol.chosen,
                hyperplanes: sol.hyperplanes,
                f_max: sol.rmc.trace.f_max,
                final_value: sol.rmc.trace.final_value,
                trace: sol.rmc.trace.steps,
                violations: sol
                    .violations
                    .into_iter()
                    .map(ViolationRecord::Face)
                    .collect(),
            }
        }
        InstanceFile::Pcms(inst) => {
            let sol = solve_pcms(inst, opts);
            SolutionFile {
                kind,
                chosen: sol.chosen,
                hyperplanes: Vec::new(),
                f_max: sol.trace.f_max,
                final_value: sol.trace.final_value,
                trace: sol.trace.steps,
                feasible: sol.feasible,
                violations: sol
                    .shortfalls
                    .into_iter()
                    .map(ViolationRecord::Shortfall)
                    .collect(),
            }
        }
        InstanceFile::Ptd(inst) => {
            let sol = solve_ptd(inst, opts);
            SolutionFile {
                kind,
                chosen: sol.chosen,
                hyperplanes: Vec::new(),
                f_max: sol.trace.f_max,
                final_value: sol.trace.final_value,
                trace: sol.trace.steps,
                feasible: sol.feasible,
                violations: sol
                    .violations
                    .into_iter()
                    .map(ViolationRecord::Demand)
                    .collect(),
            }
        }
        InstanceFile::Rmc(inst) => {
            let sol = solve_rmc(inst, opts);
            SolutionFile {
                kind,
                chosen: sol.chosen,
                hyperplanes: Vec::new(),
                f_max: sol.trace.f_max,
                final_value: sol.trace.final_value,
                trace: sol.trace.steps,
                feasible: sol.feasible,
                violations: sol
                    .violations
                    .into_iter()
                    .map(ViolationRecord::Face)
                    .collect(),
            }
        }
    };
    Ok(sol)
}

/// Recomputes the violations of `solution` from scratch. Geometric solutions
/// are judged by their hyperplanes alone.
pub fn recompute_violations(
    instance: &InstanceFile,
    solution: &SolutionFile,
) -> Result<Vec<ViolationRecord>> {
    if instance.kind() != solution.kind {
        return Err(Error::invalid(
            "kind",
            format!(
                "solution is for a {} instance, instance is {}",
                solution.kind,
                instance.kind()
            ),
        ));
    }
    let chosen = &solution.chosen;
    Ok(match instance {
        InstanceFile::Geometric(cfg) => {
            if let Some((i, h)) = solution
                .hyperplanes
                .iter()
                .enumerate()
                .find(|(_, h)| h.dim() != cfg.dim())
            {
                return Err(Error::invalid(
                    format!("hyperplanes[{i}]"),
                    format!("expected {} coordinates, got {}", cfg.dim(), h.dim()),
                ));
            }
            verify_partition(cfg, &solution.hyperplanes)?
                .into_iter()
                .map(ViolationRecord::Face)
                .collect()
        }
        InstanceFile::Pcms(inst) => inst
            .shortfalls(chosen)?
            .into_iter()
            .map(ViolationRecord::Shortfall)
            .collect(),
        InstanceFile::Ptd(inst) => verify_ptd(inst, chosen)?
            .into_iter()
            .map(ViolationRecord::Demand)
            .collect(),
        InstanceFile::Rmc(inst) => verify_rmc(inst, chosen)?
            .into_iter()
            .map(ViolationRecord::Face)
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyStatus {
    /// No violations and the solution claims feasibility.
    Valid,
    /// The instance is infeasible and the recorded violations match.
    Infeasible,
    /// The solution does not hold up; every mismatch is listed.
    Failed(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub status: VerifyStatus,
    /// Violations found by recomputation.
    pub violations: Vec<ViolationRecord>,
}

/// Checks a solution against its instance. Input errors (kind mismatch,
/// out-of-range edges, points on a hyperplane) come back as `Err`.
pub fn verify_solution(instance: &InstanceFile, solution: &SolutionFile) -> Result<VerifyReport> {
    let violations = recompute_violations(instance, solution)?;
    let mut problems = Vec::new();
    if let InstanceFile::Geometric(_) = instance {
        if solution.hyperplanes.len() != solution.chosen.len() {
            problems.push(format!(
                "{} hyperplanes recorded for {} chosen classes",
                solution.hyperplanes.len(),
                solution.chosen.len()
            ));
        }
    }
    if violations != solution.violations {
        problems.extend(
            violations
                .iter()
                .filter(|v| !solution.violations.contains(v))
                .map(|v| format!("unrecorded violation: {v}")),
        );
        problems.extend(
            solution
                .violations
                .iter()
                .filter(|v| !violations.contains(v))
                .map(|v| format!("recorded violation does not occur: {v}")),
        );
        if problems.is_empty() {
            problems.push("violations recorded in a different order".into());
        }
    }
    if solution.feasible && !violations.is_empty() {
        problems.push(format!(
            "claimed feasible with {} violations",
            violations.len()
        ));
    }
    if !solution.feasible && violations.is_empty() {
        problems.push("claimed infeasible but no violation occurs".into());
    }
    let status = if !problems.is_empty() {
        VerifyStatus::Failed(problems)
    } else if violations.is_empty() {
        VerifyStatus::Valid
    } else {
        VerifyStatus::Infeasible
    };
    Ok(VerifyReport { status, violations })
}

/// Optimum found by the exhaustive oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCover {
    pub size: usize,
    pub chosen: Vec<usize>,
    pub f_max: u64,
    /// Whether `f_max` meets every demand or target.
    pub feasible: bool,
}

/// Smallest edge set reaching `f(H)`, by exhaustive search. Geometric
/// instances are searched over their halfspace classes.
pub fn exact_instance(instance: &InstanceFile, budget: OracleBudget) -> Result<ExactCover> {
    fn run<O: SubmodularObjective>(
        obj: &O,
        ceiling: u64,
        budget: OracleBudget,
    ) -> Result<ExactCover> {
        let (size, chosen) = exact_min_cover(obj, budget)?;
        let f_max = obj.f_max();
        Ok(ExactCover {
            size,
            chosen,
            f_max,
            feasible: f_max == ceiling,
        })
    }
    match instance {
        InstanceFile::Geometric(cfg) => {
            let (inst, _) = build_rmc(cfg)?;
            run(&rmc_objective(&inst), inst.ceiling(), budget)
        }
        InstanceFile::Pcms(inst) => run(&pcms_objective(inst), inst.total_demand(), budget),
        InstanceFile::Ptd(inst) => {
            let pcms = ptd_to_pcms(inst);
            run(&pcms_objective(&pcms), pcms.total_demand(), budget)
        }
        InstanceFile::Rmc(inst) => run(&rmc_objective(inst), inst.ceiling(), budget),
    }
}

/// Greedy size bound relative to an optimum of size `k`.
pub fn greedy_bound(k: usize, f_max: u64) -> f64 {
    k as f64 * (1.0 + (f_max.max(2) as f64).ln())
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SelftestReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SelftestReport {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Runs the property suite on `rounds` seeded instances of every kind:
/// submodularity, naive/lazy agreement, the greedy bound against the oracle,
/// self-verification and enumeration completeness.
pub fn selftest(seed: u64, rounds: usize) -> Result<SelftestReport> {
    let mut report = SelftestReport::default();
    let budget = OracleBudget {
        max_edges: 24,
        ..OracleBudget::default()
    };
    for r in 0..rounds as u64 {
        let s = seed.wrapping_add(r);
        let shape = AbstractParams {
            seed: s,
            universe: 8,
            edges: 10,
            ground_sets: 3,
        };
        let pcms = generate_pcms(&shape)?;
        let rmc = generate_rmc(&shape)?;
        let cfg = generate_instance(&GeneratorParams {
            seed: s,
            points: 6,
            dim: 2,
            groups: 2,
            coordinate_bound: 50,
            rule: TargetRule::Half,
        })?;

        let pcms_obj = pcms_objective(&pcms);
        let rmc_obj = rmc_objective(&rmc);
        report.check(check_submodular(&pcms_obj, 200, s).is_ok(), || {
            format!("seed {s}: pcms objective not submodular")
        });
        report.check(check_submodular(&rmc_obj, 200, s).is_ok(), || {
            format!("seed {s}: rmc objective not submodular")
        });

        let halfspaces = enumerate_halfspaces(&cfg)?;
        let keys = halfspaces.iter().map(|h| h.key.clone()).collect();
        report.check(realizable_subsets(&cfg, budget)? == keys, || {
            format!("seed {s}: enumeration disagrees with the separability oracle")
        });

        for file in [
            InstanceFile::Pcms(pcms),
            InstanceFile::Rmc(rmc),
            InstanceFile::Geometric(cfg),
        ] {
            let kind = file.kind();
            let lazy = solve_instance(&file, GreedyOptions::lazy())?;
            let naive = solve_instance(&file, GreedyOptions::naive())?;
            report.check(emit_solution(&lazy) == emit_solution(&naive), || {
                format!("seed {s}: {kind} naive and lazy solutions differ")
            });
            let status = verify_solution(&file, &lazy)?.status;
            report.check(!matches!(status, VerifyStatus::Failed(_)), || {
                format!("seed {s}: {kind} solution fails verification: {status:?}")
            });
            let exact = exact_instance(&file, budget)?;
            let size = lazy.chosen.len();
            report.check(size as f64 <= greedy_bound(exact.size, exact.f_max), || {
                format!(
                    "seed {s}: {kind} greedy size {size} exceeds bound for optimum {}",
                    exact.size
                )
            });
        }
    }
    Ok(report)
}
