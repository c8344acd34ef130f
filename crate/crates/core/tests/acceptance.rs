//! Acceptance suite: one PASS/FAIL line per criterion, exact values, with the
//! runtime target folded into each verdict. Exits nonzero if any criterion
//! fails.

use std::process::Command;
use std::time::{Duration, Instant};

use hardy_tobl::behavior::{hardy_report, validate, HardySpec};
use hardy_tobl::decomposition::verify_decomposition;
use hardy_tobl::hardy::{sweep_hardy_family, HardyOptimum, MembershipWitness};
use hardy_tobl::lp::{self, LinearProgram, LpOutcome};
use hardy_tobl::polytopes::membership_tobl;
use hardy_tobl::rational::{ratio, Rational};
use hardy_tobl::reference::{tobl_optimum, tobl_optimum_decomposition};
use hardy_tobl::wirings::{audit_wirings, Pair};
use hardy_tobl::{maximize_hardy, CorrelationSet, OptimizationRequest, Scenario};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Outcome {
    passed: bool,
    detail: String,
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn optimum(scenario: Scenario, set: CorrelationSet) -> HardyOptimum {
    maximize_hardy(&OptimizationRequest::canonical(scenario, set).expect("canonical request"))
}

fn show(q: Option<&Rational>) -> String {
    q.map_or("infeasible".into(), Rational::to_string)
}

fn criterion_1() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_hardy-tobl");
    let out = Command::new(bin)
        .args(["optimize", "--scenario", "tripartite", "--set", "tobl", "--canonical"])
        .output()
        .expect("run binary");
    let stdout = String::from_utf8_lossy(&out.stdout);
    let cli_ok = out.status.code() == Some(0) && stdout.lines().any(|l| l == "q_max = 1/4");

    let Some(r) = optimum(Scenario::Tripartite, CorrelationSet::Tobl).optimal() else {
        return Outcome { passed: false, detail: "LP infeasible".into() };
    };
    let valid = validate(&r.behavior).is_valid();
    let member = membership_tobl(&r.behavior).is_member();
    let decomposed = match &r.witness {
        MembershipWitness::Tobl(d) => verify_decomposition(&r.behavior, d).passed(),
        _ => false,
    };
    Outcome {
        passed: cli_ok && r.q_max == ratio(1, 4) && valid && member && decomposed,
        detail: format!(
            "q_max = {}, cli {}, valid {valid}, membership_tobl {member}, decomposition {decomposed}",
            r.q_max,
            if cli_ok { "ok" } else { "mismatch" }
        ),
    }
}

fn ns_optimum(scenario: Scenario) -> Outcome {
    let r = optimum(scenario, CorrelationSet::NoSignaling);
    let valid = r
        .clone()
        .optimal()
        .is_some_and(|r| validate(&r.behavior).is_valid());
    Outcome {
        passed: r.q_max() == Some(&ratio(1, 2)) && valid,
        detail: format!("q_max = {}, valid {valid}", show(r.q_max())),
    }
}

fn criterion_4() -> Outcome {
    let tri = optimum(Scenario::Tripartite, CorrelationSet::Local);
    let bi = optimum(Scenario::Bipartite, CorrelationSet::Local);
    let zero = Rational::zero();
    Outcome {
        passed: tri.q_max() == Some(&zero) && bi.q_max() == Some(&zero),
        detail: format!(
            "tripartite q_max = {}, bipartite q_max = {}",
            show(tri.q_max()),
            show(bi.q_max())
        ),
    }
}

fn criterion_5() -> Outcome {
    let t = tobl_optimum();
    let v = validate(&t);
    let h = hardy_report(&t, &HardySpec::canonical(3).unwrap()).unwrap();
    let d = tobl_optimum_decomposition();
    let weights_quarter = d
        .models()
        .iter()
        .all(|m| m.terms.len() == 4 && m.terms.iter().all(|t| t.weight == ratio(1, 4)));
    let r = verify_decomposition(&t, &d);
    let exact = r.checks.iter().filter(|c| c.mismatch.is_none()).count();
    Outcome {
        passed: v.normalized
            && v.nonnegative
            && v.no_signaling
            && h.witness
            && h.q == ratio(1, 4)
            && weights_quarter
            && r.passed()
            && exact == 6,
        detail: format!(
            "valid {}, witness {} with q = {}, weights all 1/4 {weights_quarter}, {exact}/6 reconstructions exact",
            v.is_valid(),
            h.witness,
            h.q
        ),
    }
}

fn criterion_6() -> Outcome {
    let l = optimum(Scenario::Tripartite, CorrelationSet::Local);
    let t = optimum(Scenario::Tripartite, CorrelationSet::Tobl);
    let n = optimum(Scenario::Tripartite, CorrelationSet::NoSignaling);
    let (Some(lq), Some(tq), Some(nq)) = (l.q_max(), t.q_max(), n.q_max()) else {
        return Outcome { passed: false, detail: "an optimization was infeasible".into() };
    };
    let chain = *lq == Rational::zero() && *tq == ratio(1, 4) && *nq == ratio(1, 2);
    let ns_behavior = n.clone().optimal().unwrap().behavior;
    let outside = !membership_tobl(&ns_behavior).is_member();
    Outcome {
        passed: chain && lq < tq && tq < nq && outside,
        detail: format!("{lq} < {tq} < {nq}, NS optimum fails membership_tobl {outside}"),
    }
}

fn criterion_7() -> Outcome {
    let r = audit_wirings(&tobl_optimum(), &Pair::ALL, &|_, _| {});
    let max = r.max_chsh().cloned().unwrap_or_else(Rational::zero);
    Outcome {
        passed: r.total() == 3 * 65_536
            && r.nonlocal_count() == 0
            && r.invalid_count() == 0
            && max <= Rational::from(2),
        detail: format!(
            "{} wirings, {} nonlocal, {} invalid, max CHSH {max}",
            r.total(),
            r.nonlocal_count(),
            r.invalid_count()
        ),
    }
}

fn criterion_8() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for (scenario, set) in [
        (Scenario::Bipartite, CorrelationSet::Local),
        (Scenario::Bipartite, CorrelationSet::NoSignaling),
        (Scenario::Tripartite, CorrelationSet::Local),
        (Scenario::Tripartite, CorrelationSet::NoSignaling),
        (Scenario::Tripartite, CorrelationSet::Tobl),
    ] {
        let canonical = optimum(scenario, set).q_max().cloned();
        let entries = sweep_hardy_family(scenario, set).expect("valid sweep");
        let matching = entries.iter().filter(|e| e.q_max == canonical).count();
        passed &= canonical.is_some() && matching == entries.len();
        parts.push(format!(
            "{:?}/{} {matching}/{} = {}",
            scenario,
            set.label(),
            entries.len(),
            show(canonical.as_ref())
        ));
    }
    Outcome {
        passed,
        detail: parts.join(", "),
    }
}

fn small(rng: &mut StdRng) -> Rational {
    Rational::from(rng.gen_range(-4i64..=4))
}

fn criterion_9() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let (mut optimal, mut unbounded, mut infeasible, mut failures) = (0, 0, 0, 0);
    for case in 0..100 {
        let m = rng.gen_range(1..=5);
        let n = rng.gen_range(m..=8);
        let mut a: Vec<Vec<Rational>> = (0..m).map(|_| (0..n).map(|_| small(&mut rng)).collect()).collect();
        let b: Vec<Rational>;
        if case % 2 == 0 {
            // feasible: b = A·x for a random x ≥ 0
            let x: Vec<Rational> = (0..n)
                .map(|_| if rng.gen_bool(0.3) { Rational::zero() } else { ratio(rng.gen_range(1..=6), rng.gen_range(1..=3)) })
                .collect();
            b = a.iter().map(|row| row.iter().zip(&x).map(|(p, q)| p * q).sum()).collect();
            let c: Vec<Rational> = (0..n).map(|_| small(&mut rng)).collect();
            let program = LinearProgram::new(c.clone(), a.clone(), b.clone()).unwrap();
            match lp::solve(&program) {
                LpOutcome::Optimal { value, solution } => {
                    let exact = lp::verify_solution(&a, &b, &solution)
                        && solution.iter().zip(&c).map(|(p, q)| p * q).sum::<Rational>() == value;
                    optimal += 1;
                    failures += usize::from(!exact);
                }
                LpOutcome::Unbounded => unbounded += 1,
                LpOutcome::Infeasible { .. } => failures += 1,
            }
        } else {
            // infeasible: pick y, force yᵀA = -s ≤ 0 and yᵀb = t > 0 via the last row
            let y: Vec<Rational> = (0..m)
                .map(|i| if i + 1 == m { Rational::from(rng.gen_range(1i64..=3)) } else { small(&mut rng) })
                .collect();
            let last = m - 1;
            for j in 0..n {
                let s = Rational::from(rng.gen_range(0i64..=3));
                let partial: Rational = a[..last].iter().zip(&y).map(|(row, yi)| yi * &row[j]).sum();
                a[last][j] = (-s - partial) / y[last].clone();
            }
            let mut rhs: Vec<Rational> = (0..m).map(|_| small(&mut rng)).collect();
            let t = Rational::from(rng.gen_range(1i64..=5));
            let partial: Rational = (0..last).map(|i| &y[i] * &rhs[i]).sum();
            rhs[last] = (t - partial) / y[last].clone();
            b = rhs;
            match lp::feasible(&a, &b).unwrap() {
                lp::Feasibility::Infeasible(cert) => {
                    infeasible += 1;
                    failures += usize::from(!lp::verify_certificate(&a, &b, &cert));
                }
                lp::Feasibility::Feasible(_) => failures += 1,
            }
        }
    }
    Outcome {
        passed: failures == 0 && infeasible == 50 && optimal + unbounded == 50,
        detail: format!(
            "{optimal} optimal and {unbounded} unbounded of 50 feasible, {infeasible} certified infeasible of 50, {failures} failures"
        ),
    }
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("TOBL Hardy optimum is 1/4", Duration::from_secs(300), criterion_1),
        ("NS tripartite Hardy optimum is 1/2", Duration::from_secs(10), || ns_optimum(Scenario::Tripartite)),
        ("NS bipartite Hardy optimum is 1/2", Duration::from_secs(5), || ns_optimum(Scenario::Bipartite)),
        ("local Hardy optimum is 0", Duration::from_secs(10), criterion_4),
        ("reference table and decomposition", Duration::from_secs(5), criterion_5),
        ("set-nesting chain", Duration::from_secs(60), criterion_6),
        ("wiring audit", Duration::from_secs(1800), criterion_7),
        ("symmetry sweep over the full family", Duration::from_secs(7200), criterion_8),
        ("solver self-checks", Duration::from_secs(600), criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let passed = outcome.passed && in_time;
        failed += usize::from(!passed);
        println!(
            "criterion {}: {} {name}: {} [{:.2} s, target < {} s{}]",
            k + 1,
            if passed { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            limit.as_secs(),
            if in_time { "" } else { ", exceeded" }
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
