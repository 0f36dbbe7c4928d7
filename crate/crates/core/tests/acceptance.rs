//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines are always printed; exits nonzero if any criterion fails.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use kahler::selftest::{self, Budget, Outcome};

const SEED: u64 = 1;
const WINDOW_BOUND: i64 = 2;

const MIN_RAMIFIED: usize = 1_000;
const MIN_DEFECT: usize = 100;
const MIN_SEGMENT_CASES: usize = 10_000;
const MIN_WINDOW_POINTS: u128 = 1_000;
const MIN_EXPANSIONS: usize = 10_000;
const MIN_TRUNCATIONS: usize = 1_000;
const MIN_REWRITES: usize = 1_000;

struct Criterion {
    name: &'static str,
    run: fn(&Budget) -> (bool, Vec<Outcome>),
}

fn all_clean(outs: Vec<Outcome>) -> (bool, Vec<Outcome>) {
    (outs.iter().all(Outcome::clean), outs)
}

fn smallest_window(detail: &str) -> Option<u128> {
    let rest = detail.split("smallest window ").nth(1)?;
    rest.split_whitespace().next()?.parse().ok()
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            name: "1 inertial reproduction",
            run: |_| all_clean(vec![selftest::inertial_reproduction(4, 20, &[2, 3, 5])]),
        },
        Criterion {
            name: "2 inseparable witness",
            run: |_| all_clean(vec![selftest::inseparable_witness()]),
        },
        Criterion {
            name: "3 ramified differents",
            run: |_| all_clean(vec![selftest::ramified_differents()]),
        },
        Criterion {
            name: "4 ramified dense criterion",
            run: |b| all_clean(vec![selftest::ramified_dense_criterion(b.ramified_specs.max(MIN_RAMIFIED), SEED)]),
        },
        Criterion {
            name: "5 defect closed forms",
            run: |b| all_clean(vec![selftest::defect_closed_forms(b.defect_specs.max(MIN_DEFECT), SEED)]),
        },
        Criterion {
            name: "6 CKR equivalence",
            run: |b| {
                let corpus = selftest::defect_corpus(b.defect_specs.max(MIN_DEFECT), SEED);
                all_clean(vec![selftest::ckr_equivalence(&corpus)])
            },
        },
        Criterion {
            name: "7 segment oracle",
            run: |b| {
                let oracle = selftest::segment_oracle(b.segment_cases.max(MIN_SEGMENT_CASES), SEED, WINDOW_BOUND);
                let windows_ok = smallest_window(&oracle.detail).is_some_and(|n| n >= MIN_WINDOW_POINTS);
                let outs = vec![
                    selftest::curated_segments(WINDOW_BOUND),
                    oracle,
                    selftest::planted_mutations(b.mutation_cases, SEED, WINDOW_BOUND),
                ];
                // Random operands may be inconclusive up to the window policy.
                let ok = windows_ok && outs[1].passed && outs[0].clean()
                    && outs[2].clean();
                (ok, outs)
            },
        },
        Criterion {
            name: "8 keypoly layer",
            run: |b| {
                let b = Budget {
                    expansions: b.expansions.max(MIN_EXPANSIONS),
                    truncation_pairs: b.truncation_pairs.max(MIN_TRUNCATIONS),
                    rewrites: b.rewrites.max(MIN_REWRITES),
                    ..*b
                };
                all_clean(selftest::keypoly_layer(&b, SEED))
            },
        },
        Criterion {
            name: "9 finiteness flags",
            run: |b| {
                let corpus = selftest::defect_corpus(b.defect_specs.max(MIN_DEFECT), SEED);
                all_clean(vec![selftest::finiteness_flags(&corpus)])
            },
        },
    ]
}

fn main() -> ExitCode {
    let budget = Budget::full();
    let mut failed = 0;
    let stdout = std::io::stdout();
    for c in criteria() {
        let start = Instant::now();
        let (ok, outs) = (c.run)(&budget);
        let mut out = stdout.lock();
        let _ = writeln!(
            out,
            "{} criterion {} ({:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            c.name,
            start.elapsed().as_secs_f64()
        );
        for o in &outs {
            let _ = writeln!(out, "    {o}");
        }
        let _ = out.flush();
        failed += usize::from(!ok);
    }
    println!("acceptance: {} of 9 criteria pass", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
