//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hypersplit::geometry::{
    build_rmc, cover_count, enumerate_halfspaces, sign_vector_faces, Hyperplane, PointConfig,
};
use hypersplit::instances::{
    arrangement, pcms_objective, ptd_to_pcms, rmc_objective, PcmsInstance, RmcInstance,
};
use hypersplit::io::{
    emit_instance, emit_solution, emit_svg, generate_instance, generate_pcms, generate_rmc,
    parse_instance, parse_solution, AbstractParams, GeneratorParams, InstanceFile, SolutionFile,
    TargetRule,
};
use hypersplit::oracle::{check_submodular, realizable_subsets, OracleBudget};
use hypersplit::workflow::{
    exact_instance, greedy_bound, solve_instance, verify_solution, VerifyStatus,
};
use hypersplit::{GreedyOptions, SubmodularObjective};

type Check = Result<String, String>;

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn budget(edges: usize) -> OracleBudget {
    OracleBudget {
        max_edges: edges,
        max_subset_points: 12,
    }
}

fn geometric(seed: u64, points: usize, dim: usize, groups: usize, rule: TargetRule) -> PointConfig {
    generate_instance(&GeneratorParams {
        seed,
        points,
        dim,
        groups,
        coordinate_bound: 60,
        rule,
    })
    .expect("generator succeeds")
}

fn solve(file: &InstanceFile) -> Result<SolutionFile, String> {
    solve_instance(file, GreedyOptions::lazy()).map_err(|e| e.to_string())
}

fn verified(file: &InstanceFile, sol: &SolutionFile, label: &str) -> Result<VerifyStatus, String> {
    let status = verify_solution(file, sol)
        .map_err(|e| format!("{label}: {e}"))?
        .status;
    match status {
        VerifyStatus::Failed(p) => Err(format!("{label}: verification failed: {p:?}")),
        s => Ok(s),
    }
}

/// 1. Arrangement of {1,2,3}, {3,4,5} over {1..5}, written zero-based.
fn arrangement_golden() -> Check {
    let edges = vec![vec![0, 1, 2], vec![2, 3, 4]];
    let mut fastest = Duration::MAX;
    let mut faces = Vec::new();
    for _ in 0..5 {
        let t = Instant::now();
        faces = arrangement(5, &edges).map_err(|e| e.to_string())?;
        fastest = fastest.min(t.elapsed());
    }
    let expected = vec![vec![0, 1], vec![2], vec![3, 4]];
    if faces != expected {
        return Err(format!("faces {faces:?}, expected {expected:?}"));
    }
    if fastest >= Duration::from_millis(1) {
        return Err(format!("took {fastest:?}"));
    }
    Ok(format!("faces {faces:?} in {fastest:?}"))
}

/// 2. Greedy size within `k(1 + ln max(f_max, 2))` of the oracle optimum.
fn greedy_vs_oracle(solved: &mut Vec<(String, InstanceFile)>) -> Check {
    let mut worst: f64 = 0.0;
    let mut instances = Vec::new();
    for seed in 0..100u64 {
        let n = 3 + (seed % 6) as usize;
        let d = 1 + (seed / 6 % 2) as usize;
        let m = (1 + (seed % 3) as usize).min(n);
        let rule = if seed % 2 == 0 {
            TargetRule::Half
        } else {
            TargetRule::Singleton
        };
        instances.push((
            format!("geometric seed {seed} n={n} d={d} m={m}"),
            InstanceFile::Geometric(geometric(seed, n, d, m, rule)),
        ));
    }
    for seed in 0..100u64 {
        let shape = AbstractParams {
            seed,
            universe: 4 + (seed % 7) as usize,
            edges: 4 + (seed % 9) as usize,
            ground_sets: 1 + (seed % 3) as usize,
        };
        let inst = generate_pcms(&shape).map_err(|e| e.to_string())?;
        instances.push((format!("pcms seed {seed}"), InstanceFile::Pcms(inst)));
    }
    for (label, file) in instances {
        let sol = solve(&file)?;
        let status = verified(&file, &sol, &label)?;
        if matches!(file, InstanceFile::Geometric(_)) && status != VerifyStatus::Valid {
            return Err(format!("{label}: geometric instance reported infeasible"));
        }
        let exact = exact_instance(&file, budget(64)).map_err(|e| format!("{label}: {e}"))?;
        if exact.f_max != sol.f_max {
            return Err(format!(
                "{label}: oracle f_max {} vs greedy {}",
                exact.f_max, sol.f_max
            ));
        }
        let bound = greedy_bound(exact.size, exact.f_max);
        let size = sol.chosen.len();
        if size as f64 > bound {
            return Err(format!(
                "{label}: greedy {size} > bound {bound:.3} (k = {})",
                exact.size
            ));
        }
        if exact.size > 0 {
            worst = worst.max(size as f64 / exact.size as f64);
        }
        solved.push((label, file));
    }
    Ok(format!(
        "200 instances, worst greedy/optimum ratio {worst:.2}"
    ))
}

/// 3. Monotone submodularity of generated objectives.
fn submodularity() -> Check {
    let mut objectives = 0;
    for seed in 0..50u64 {
        let shape = AbstractParams {
            seed,
            universe: 5 + (seed % 6) as usize,
            edges: 6 + (seed % 7) as usize,
            ground_sets: 1 + (seed % 4) as usize,
        };
        let result = match seed % 3 {
            0 => check_submodular(
                &pcms_objective(&generate_pcms(&shape).map_err(|e| e.to_string())?),
                1000,
                seed,
            ),
            1 => check_submodular(
                &rmc_objective(&generate_rmc(&shape).map_err(|e| e.to_string())?),
                1000,
                seed,
            ),
            _ => {
                let cfg = geometric(seed, 4 + (seed % 5) as usize, 2, 2, TargetRule::Half);
                let (inst, _) = build_rmc(&cfg).map_err(|e| e.to_string())?;
                check_submodular(&rmc_objective(&inst), 1000, seed)
            }
        };
        if let Err(c) = result {
            return Err(format!("seed {seed}: {c:?}"));
        }
        objectives += 1;
    }
    Ok(format!(
        "{objectives} objectives x 1000 chains, no counterexample"
    ))
}

/// 4. Enumeration equals brute-force separability, with the closed-form count.
fn enumeration_completeness() -> Check {
    for seed in 0..50u64 {
        let d = 1 + (seed % 3) as usize;
        let n = (d + 1) + (seed as usize % (12 - d));
        let cfg = geometric(seed, n, d, 1, TargetRule::Half);
        let found = enumerate_halfspaces(&cfg).map_err(|e| e.to_string())?;
        let keys: BTreeSet<Vec<usize>> = found.iter().map(|h| h.key.clone()).collect();
        if keys.len() != found.len() {
            return Err(format!("seed {seed}: duplicate classes"));
        }
        let oracle = realizable_subsets(&cfg, budget(0)).map_err(|e| e.to_string())?;
        if keys != oracle {
            return Err(format!(
                "seed {seed} (n={n}, d={d}): {} enumerated vs {} separable",
                keys.len(),
                oracle.len()
            ));
        }
        // The empty/full class is not enumerated but counts as a dichotomy.
        let classes = found.len() as u128 + 1;
        let expected = cover_count(n, d);
        if classes != expected {
            return Err(format!(
                "seed {seed}: {classes} classes, expected {expected}"
            ));
        }
    }
    Ok("50 configurations match".into())
}

/// 5. Points on a line with unit targets need exactly `n - 1` cuts.
fn line_split(solved: &mut Vec<(String, InstanceFile)>) -> Check {
    let xs = [-7, 2, 3, 11, 19, 20, 34, 50];
    for n in 2..=8 {
        let pts: Vec<Vec<i64>> = xs[..n].iter().map(|&x| vec![x]).collect();
        let file = InstanceFile::Geometric(
            PointConfig::single_group(1, &pts, 1).map_err(|e| e.to_string())?,
        );
        let sol = solve(&file)?;
        let label = format!("line n={n}");
        if verified(&file, &sol, &label)? != VerifyStatus::Valid || !sol.violations.is_empty() {
            return Err(format!("{label}: not valid"));
        }
        if sol.chosen.len() != n - 1 {
            return Err(format!("{label}: {} cuts", sol.chosen.len()));
        }
        solved.push((label, file));
    }
    Ok("n = 2..8 split with n - 1 cuts".into())
}

/// 6. One planar set with target `ceil(n/2)` is halved by a single line.
fn median_line(solved: &mut Vec<(String, InstanceFile)>) -> Check {
    let mut count = 0;
    for n in 2..=10usize {
        for seed in 0..3u64 {
            let label = format!("median n={n} seed {seed}");
            let file = InstanceFile::Geometric(geometric(100 + seed, n, 2, 1, TargetRule::Half));
            let exact = exact_instance(&file, budget(64)).map_err(|e| format!("{label}: {e}"))?;
            if exact.size != 1 {
                return Err(format!("{label}: optimum {}", exact.size));
            }
            let sol = solve(&file)?;
            if verified(&file, &sol, &label)? != VerifyStatus::Valid {
                return Err(format!("{label}: not valid"));
            }
            if sol.chosen.len() as f64 > greedy_bound(1, sol.f_max) {
                return Err(format!("{label}: greedy uses {}", sol.chosen.len()));
            }
            solved.push((label, file));
            count += 1;
        }
    }
    Ok(format!("{count} instances with optimum 1"))
}

/// 7. The frozen three-group planar instance: two lines suffice and are needed.
fn three_groups(solved: &mut Vec<(String, InstanceFile)>) -> Check {
    let text =
        fs::read_to_string(data_dir().join("three_groups.json")).map_err(|e| e.to_string())?;
    let file = parse_instance(&text, None).map_err(|e| e.to_string())?;
    let InstanceFile::Geometric(cfg) = &file else {
        return Err("not a geometric instance".into());
    };
    let targets: Vec<usize> = cfg.groups().iter().map(|g| g.mu).collect();
    if targets != [3, 4, 2] {
        return Err(format!("targets {targets:?}"));
    }
    let exact = exact_instance(&file, budget(1000)).map_err(|e| e.to_string())?;
    if exact.size != 2 {
        return Err(format!("optimum {}", exact.size));
    }
    let sol = solve(&file)?;
    if verified(&file, &sol, "three groups")? != VerifyStatus::Valid {
        return Err("greedy solution not valid".into());
    }
    let svg = emit_svg(cfg, &sol.hyperplanes).map_err(|e| e.to_string())?;
    let lines = svg.matches("<line").count();
    if lines != 2 {
        return Err(format!("{lines} lines rendered"));
    }
    solved.push(("three groups".into(), file.clone()));
    Ok(format!(
        "optimum 2, greedy {} lines, SVG shows {lines}",
        sol.chosen.len()
    ))
}

/// Objective value of `faces` for point groups, counted per point.
fn faces_value(faces: &[Vec<usize>], groups: &[(Vec<usize>, usize)]) -> u64 {
    groups
        .iter()
        .map(|(members, mu)| {
            let size = members.len();
            faces
                .iter()
                .map(|f| {
                    let c = f.iter().filter(|v| members.contains(v)).count();
                    (c * (size - c).min(size - mu)) as u64
                })
                .sum::<u64>()
        })
        .sum()
}

fn rmc_steps(inst: &RmcInstance, picks: &[usize], expected: &[u64]) -> Result<(), String> {
    for k in 0..=picks.len() {
        let prefix = &picks[..k];
        let pair = inst.pair_cut_value(prefix).map_err(|e| e.to_string())?;
        let faces = inst.arrangement_value(prefix).map_err(|e| e.to_string())?;
        let incremental = rmc_objective(inst).eval(prefix);
        if pair != faces || pair != incremental || pair != expected[k] {
            return Err(format!(
                "step {k}: pair-cut {pair}, arrangement {faces}, objective {incremental}, trace {}",
                expected[k]
            ));
        }
    }
    Ok(())
}

fn pcms_steps(inst: &PcmsInstance, picks: &[usize], expected: &[u64]) -> Result<(), String> {
    let obj = pcms_objective(inst);
    for k in 0..=picks.len() {
        let v = obj.eval(&picks[..k]);
        if v != expected[k] {
            return Err(format!("step {k}: objective {v}, trace {}", expected[k]));
        }
    }
    Ok(())
}

/// 8. Pair-cut and arrangement values agree after every greedy step.
fn objective_consistency(solved: &[(String, InstanceFile)]) -> Check {
    let mut steps = 0;
    for (label, file) in solved {
        let sol = solve(file)?;
        let picks: Vec<usize> = sol.trace.iter().map(|s| s.edge).collect();
        // Values after 0, 1, ... steps as reported by the trace.
        let mut expected = vec![sol.final_value - sol.trace.iter().map(|s| s.gain).sum::<u64>()];
        expected.extend(sol.trace.iter().map(|s| sol.f_max - s.deficiency));
        let err = |e: String| format!("{label}: {e}");
        match file {
            InstanceFile::Geometric(cfg) => {
                let (inst, hs) = build_rmc(cfg).map_err(|e| e.to_string())?;
                rmc_steps(&inst, &picks, &expected).map_err(err)?;
                let groups: Vec<(Vec<usize>, usize)> = cfg
                    .groups()
                    .iter()
                    .map(|g| (g.members.clone(), g.mu))
                    .collect();
                for k in 0..=picks.len() {
                    let planes: Vec<Hyperplane> =
                        picks[..k].iter().map(|&j| hs[j].witness.clone()).collect();
                    let faces = sign_vector_faces(cfg, &planes).map_err(|e| e.to_string())?;
                    let v = faces_value(&faces, &groups);
                    if v != expected[k] {
                        return Err(format!(
                            "{label}: step {k}: sign vectors give {v}, trace {}",
                            expected[k]
                        ));
                    }
                }
            }
            InstanceFile::Rmc(inst) => rmc_steps(inst, &picks, &expected).map_err(err)?,
            InstanceFile::Pcms(inst) => pcms_steps(inst, &picks, &expected).map_err(err)?,
            InstanceFile::Ptd(inst) => {
                pcms_steps(&ptd_to_pcms(inst), &picks, &expected).map_err(err)?
            }
        }
        steps += picks.len() + 1;
    }
    Ok(format!("{} instances, {steps} prefixes", solved.len()))
}

/// 9. Naive/lazy and 1/8 threads give byte-identical solution files.
fn determinism(solved: &[(String, InstanceFile)]) -> Check {
    for (label, file) in solved {
        let variants = [
            GreedyOptions::naive(),
            GreedyOptions::lazy(),
            GreedyOptions::naive().with_threads(8),
            GreedyOptions::lazy().with_threads(8),
        ];
        let texts = variants
            .iter()
            .map(|&o| solve_instance(file, o).map(|s| emit_solution(&s)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format!("{label}: {e}"))?;
        if texts.windows(2).any(|w| w[0] != w[1]) {
            return Err(format!("{label}: outputs differ"));
        }
    }
    Ok(format!("{} instances x 4 configurations", solved.len()))
}

/// 10. Every golden file is a fixpoint of parse then emit.
fn golden_round_trip() -> Check {
    let mut names: Vec<PathBuf> = fs::read_dir(data_dir())
        .map_err(|e| e.to_string())?
        .map(|e| e.map(|e| e.path()).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    names.sort();
    let mut count = 0;
    for path in names
        .iter()
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
    {
        let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
        let name = path.file_name().unwrap().to_string_lossy();
        let again = if name.ends_with(".solution.json") {
            parse_solution(&text).map(|s| emit_solution(&s))
        } else {
            parse_instance(&text, None).map(|f| emit_instance(&f))
        }
        .map_err(|e| format!("{name}: {e}"))?;
        if again != text {
            return Err(format!("{name}: emit(parse(F)) differs"));
        }
        count += 1;
    }
    if count == 0 {
        return Err("no golden files".into());
    }
    Ok(format!("{count} files"))
}

fn main() -> ExitCode {
    let mut solved = Vec::new();
    let mut failures = 0;
    let mut report = |n: usize, name: &str, limit: Duration, run: &mut dyn FnMut() -> Check| {
        let t = Instant::now();
        let result = run();
        let elapsed = t.elapsed();
        let verdict = match result {
            Ok(_) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match verdict {
            Ok(detail) => println!("PASS {n:>2} {name}: {detail} ({elapsed:.2?})"),
            Err(why) => {
                failures += 1;
                println!("FAIL {n:>2} {name}: {why} ({elapsed:.2?})");
            }
        }
    };
    let secs = Duration::from_secs;
    report(1, "arrangement golden", secs(1), &mut arrangement_golden);
    report(2, "greedy bound vs oracle", secs(60), &mut || {
        greedy_vs_oracle(&mut solved)
    });
    report(3, "monotone submodularity", secs(30), &mut submodularity);
    report(
        4,
        "halfspace enumeration",
        secs(120),
        &mut enumeration_completeness,
    );
    report(5, "line split", secs(1), &mut || line_split(&mut solved));
    report(6, "single median line", secs(10), &mut || {
        median_line(&mut solved)
    });
    report(7, "three-group planar instance", secs(5), &mut || {
        three_groups(&mut solved)
    });
    report(8, "objective consistency", Duration::MAX, &mut || {
        objective_consistency(&solved)
    });
    report(9, "determinism", Duration::MAX, &mut || {
        determinism(&solved)
    });
    report(
        10,
        "golden round trip",
        Duration::MAX,
        &mut golden_round_trip,
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
