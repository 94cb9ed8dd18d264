//! Acceptance suite. Prints one PASS/FAIL line per criterion and fails if any
//! criterion fails.

use rainbow_giant::experiment::{
    loss_scaling_check, run_experiment, Check, ExperimentConfig, ExperimentReport, GeneratorKind,
};
use rainbow_giant::verify::{
    check_borel_tail, check_mu_solver, check_oracle_dominance, check_pgw_borel, format_check,
};

const N: usize = 200_000;
const EPSILON: f64 = 0.1;
const ALPHA: f64 = 1.0;
const SEED: u64 = 20_240_601;

fn report(
    generator: GeneratorKind,
    epsilon: f64,
    trials: usize,
    workers: usize,
) -> ExperimentReport {
    let mut cfg = ExperimentConfig::new(N, epsilon, ALPHA, trials, SEED, generator);
    cfg.workers = workers;
    run_experiment(&cfg).expect("experiment runs")
}

fn pick(r: &ExperimentReport, name: &str) -> Check {
    r.check(name)
        .unwrap_or_else(|| panic!("missing check {name}"))
        .clone()
}

fn tag(c: Check, prefix: &str) -> Check {
    Check {
        name: format!("{prefix}.{}", c.name),
        ..c
    }
}

struct Criterion {
    id: usize,
    title: &'static str,
    checks: Vec<Check>,
}

impl Criterion {
    fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }
}

#[test]
fn acceptance() {
    let gnp = report(GeneratorKind::Gnp, EPSILON, 20, 0);
    let gnm = report(GeneratorKind::Gnm, EPSILON, 20, 0);
    let dlp20 = report(GeneratorKind::Dlp, EPSILON, 20, 0);
    let dlp100 = report(GeneratorKind::Dlp, EPSILON, 100, 0);
    let sweep: Vec<ExperimentReport> = [0.05, 0.2]
        .iter()
        .map(|&e| report(GeneratorKind::Gnp, e, 20, 0))
        .collect();

    let mut criteria = vec![
        Criterion {
            id: 1,
            title: "mu solver",
            checks: check_mu_solver(),
        },
        Criterion {
            id: 2,
            title: "giant size (gnm)",
            checks: vec![tag(pick(&gnm, "giant_size"), "gnm")],
        },
        Criterion {
            id: 3,
            title: "core size (gnp and dlp)",
            checks: vec![
                tag(pick(&gnp, "core_vertices"), "gnp"),
                tag(pick(&gnp, "core_edges"), "gnp"),
                tag(pick(&dlp20, "core_vertices"), "dlp"),
                tag(pick(&dlp20, "core_edges"), "dlp"),
            ],
        },
        Criterion {
            id: 4,
            title: "Borel tail bound",
            checks: vec![check_borel_tail()],
        },
        Criterion {
            id: 5,
            title: "PGW sizes vs Borel",
            checks: vec![check_pgw_borel(0.9, 100_000, SEED)],
        },
        Criterion {
            id: 6,
            title: "D_j bound (dlp, 100 trials)",
            checks: vec![tag(pick(&dlp100, "dj_bound"), "dlp")],
        },
        Criterion {
            id: 7,
            title: "desc ordering bound (dlp, 100 trials)",
            checks: vec![tag(pick(&dlp100, "desc_bound"), "dlp")],
        },
    ];

    let oracle = check_oracle_dominance(200, 20, SEED);
    let mut rainbow = Vec::new();
    for (label, r) in [
        ("gnp", &gnp),
        ("gnm", &gnm),
        ("dlp20", &dlp20),
        ("dlp100", &dlp100),
        ("gnp.0.05", &sweep[0]),
        ("gnp.0.2", &sweep[1]),
    ] {
        rainbow.push(tag(pick(r, "rainbow_invariant"), label));
    }
    criteria.push(Criterion {
        id: 8,
        title: "rainbow invariant",
        checks: rainbow,
    });

    let mut loss = Vec::new();
    for (label, r) in [
        ("gnp.0.05", &sweep[0]),
        ("gnp.0.1", &gnp),
        ("gnp.0.2", &sweep[1]),
    ] {
        loss.push(tag(pick(r, "loss_budget"), label));
    }
    loss.push(loss_scaling_check(&[&sweep[0], &gnp, &sweep[1]]));
    loss.push(tag(pick(&gnp, "rainbow_giant_fraction"), "gnp"));
    criteria.push(Criterion {
        id: 9,
        title: "loss scaling",
        checks: loss,
    });

    criteria.push(Criterion {
        id: 10,
        title: "leaf lower bound",
        checks: vec![
            tag(pick(&gnp, "leaf_count"), "gnp"),
            tag(pick(&gnp, "leaf_deletions"), "gnp"),
            tag(pick(&gnp, "leaf_lower_bound"), "gnp"),
        ],
    });
    criteria.push(Criterion {
        id: 11,
        title: "oracle dominance",
        checks: oracle,
    });

    let one = report(GeneratorKind::Gnp, EPSILON, 20, 1).to_json();
    let eight = report(GeneratorKind::Gnp, EPSILON, 20, 8).to_json();
    let again = report(GeneratorKind::Gnp, EPSILON, 20, 8).to_json();
    let determinism = |name: &str, same: bool| Check {
        name: name.into(),
        description: "byte-identical JSON reports".into(),
        observed: if same { 1.0 } else { 0.0 },
        threshold: 1.0,
        passed: same,
    };
    criteria.push(Criterion {
        id: 12,
        title: "determinism",
        checks: vec![
            determinism("workers_1_vs_8", one == eight),
            determinism("repeat_run", eight == again),
            determinism("workers_1_vs_default", one == gnp.to_json()),
        ],
    });

    let mut failed = Vec::new();
    for c in &criteria {
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {:>2}: {}", c.id, c.title);
        for check in &c.checks {
            println!("    {}", format_check(check));
        }
        if !c.passed() {
            failed.push(c.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
