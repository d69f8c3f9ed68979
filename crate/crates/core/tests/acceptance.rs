//! Acceptance criteria. Each criterion gathers checks from the verification
//! suites, requires all of them to pass, and requires their summed wall time
//! to stay under the criterion's limit. Runs without libtest capture so the
//! per-criterion lines always appear.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use leechforms::lattice::{IntLattice, SearchLimits};
use leechforms::report::Check;
use leechforms::rootlat::{isometry_classes, rootless_chains, RootDatum};
use leechforms::verify::{Level, Options, Runner};

struct Criterion {
    number: u32,
    title: &'static str,
    limit: Duration,
    checks: &'static [&'static str],
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        number: 1,
        title: "Golay census",
        limit: Duration::from_secs(30),
        checks: &[
            "golay/weight-distribution",
            "golay/steiner-5-8-24",
            "golay/tetrads-in-5-octads",
            "golay/hexad-census",
            "golay/umbral-in-18-dodecads",
        ],
    },
    Criterion {
        number: 2,
        title: "M24 order and stabilizers (uncached)",
        limit: Duration::from_secs(60),
        checks: &["m24/order", "m24/octad-stabilizer", "m24/umbral-hexad-stabilizer"],
    },
    Criterion {
        number: 3,
        title: "M24 average characteristic polynomial",
        limit: Duration::from_secs(1),
        checks: &["m24/average-charpoly-m24"],
    },
    Criterion {
        number: 4,
        title: "signed-permutation average over 2^12:M24",
        limit: Duration::from_secs(60),
        checks: &["m24/class-representatives", "m24/average-charpoly-n"],
    },
    Criterion {
        number: 5,
        title: "wedge products of orbit sums",
        limit: Duration::from_secs(120),
        checks: &[
            "invariants/wedge-s8^s8",
            "invariants/wedge-s8^s16",
            "invariants/wedge-s12^s12",
            "invariants/wedge-s8^s8^s8",
        ],
    },
    Criterion {
        number: 6,
        title: "Leech lattice and fixed-point lattices",
        limit: Duration::from_secs(300),
        checks: &[
            "leech/det",
            "leech/min-norm",
            "leech/norm-4-count",
            "leech/fixed-ranks-1^4 5^4",
            "leech/fixed-rootless-1^4 5^4",
            "leech/fixed-residue-1^4 5^4",
            "leech/fixed-ranks-1^6 3^6",
            "leech/fixed-rootless-1^6 3^6",
            "leech/fixed-residue-1^6 3^6",
        ],
    },
    Criterion {
        number: 7,
        title: "ω_g on embedded bases",
        limit: Duration::from_secs(120),
        checks: &["fourier/omega-8", "fourier/omega-12", "fourier/omega-16", "fourier/omega-24"],
    },
    Criterion {
        number: 8,
        title: "root system identities and BS sublattices",
        limit: Duration::from_secs(30),
        checks: &["roots/root-identities", "roots/bs5-e8", "roots/bs-mark3-e6"],
    },
    Criterion {
        number: 9,
        title: "rootless forms modulo p",
        limit: Duration::from_secs(60),
        checks: &[
            "roots/rootless-forms-A2-mod-3",
            "roots/rootless-forms-A4-mod-5",
            "roots/rootless-forms-E6-mod-3",
            "roots/rootless-forms-A4-mod-3",
        ],
    },
    Criterion {
        number: 10,
        title: "Q8 and Q12 as fixed-point lattices",
        limit: Duration::from_secs(600),
        checks: &["qlattices/q8-is-fixed-1^4 5^4", "qlattices/q12-is-fixed-1^6 3^6"],
    },
    Criterion {
        number: 11,
        title: "orientability of Q6, Q8, Q12",
        limit: Duration::from_secs(600),
        checks: &["qlattices/q8-orientable", "qlattices/q6-not-orientable", "qlattices/q12-kernel-ratio"],
    },
    Criterion {
        number: 12,
        title: "Milgram formula on the lattice catalog",
        limit: Duration::from_secs(120),
        checks: &["qlattices/milgram-catalog"],
    },
    Criterion {
        number: 13,
        title: "isotropic preimages in Q12 and E6 chains",
        limit: Duration::from_secs(120),
        checks: &["qlattices/q12-isotropic-1", "qlattices/q12-isotropic-2", "extra/e6-chain-classes"],
    },
    Criterion {
        number: 14,
        title: "standard parameters",
        limit: Duration::from_secs(10),
        checks: &[
            "params/tau",
            "params/dim-psi-8",
            "params/dim-psi-prime-8",
            "params/dim-psi-12",
            "params/dim-psi-prime-12",
            "params/dim-psi-16",
            "params/dim-psi-prime-16",
            "params/dim-psi-24",
            "params/dim-psi-prime-24",
            "params/rallis-8",
            "params/rallis-12",
            "params/rallis-16",
            "params/rallis-24",
            "params/inf-char-delta-19-7-6",
        ],
    },
    Criterion {
        number: 15,
        title: "alternating invariant dimensions",
        limit: Duration::from_secs(30),
        checks: &["invariants/alt24-support", "invariants/invariant-dim-a2", "invariants/invariant-dim-d4"],
    },
];

/// E6 modulo 3: all rootless bottoms of index-9 chains form one class.
fn e6_chain_check() -> Check {
    Check::equal("e6-chain-classes", "unique rootless bottom", 1, || {
        let e6 = RootDatum::from_label("E6")?;
        let chains = rootless_chains(&e6.lattice, 3, true)?;
        let bottoms: Vec<IntLattice> = chains.iter().flat_map(|c| c.bottoms.clone()).collect();
        Ok(isometry_classes(&bottoms, SearchLimits::default())?.len().to_string())
    })
    .expect("E6 chain census runs")
}

fn main() -> ExitCode {
    // No cache directory: criterion 2 includes generator discovery.
    let runner = Runner::new(Options { level: Level::Stretch, cache_dir: None, ..Options::default() });
    let full = Runner::new(Options { level: Level::Full, cache_dir: None, ..Options::default() });
    let started = Instant::now();
    let mut checks: BTreeMap<String, Check> = BTreeMap::new();
    for suite in ["golay", "m24", "invariants", "leech", "roots", "qlattices", "fourier", "params"] {
        // The stretch roots suite adds the E8 census, which no criterion needs.
        let r = if suite == "roots" { &full } else { &runner };
        let report = r.run(suite).unwrap_or_else(|e| panic!("suite {suite} failed to run: {e}"));
        for c in report.checks {
            checks.insert(format!("{suite}/{}", c.id), c);
        }
    }
    checks.insert("extra/e6-chain-classes".into(), e6_chain_check());

    let mut failed = 0;
    for crit in CRITERIA {
        let mut ms = 0;
        let mut problems = Vec::new();
        for id in crit.checks {
            match checks.get(*id) {
                None => problems.push(format!("{id} missing")),
                Some(c) => {
                    ms += c.ms;
                    if !c.pass {
                        problems.push(format!("{id}: expected {} got {}", c.expected, c.actual));
                    }
                }
            }
        }
        let elapsed = Duration::from_millis(ms);
        if elapsed > crit.limit {
            problems.push(format!("took {elapsed:?}, limit {:?}", crit.limit));
        }
        let verdict = if problems.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict} {:<44} {:>8} ms (limit {} s)", crit.number, crit.title, ms, crit.limit.as_secs());
        for p in &problems {
            println!("    {p}");
        }
        failed += usize::from(!problems.is_empty());
    }
    println!("acceptance: {} of {} criteria passed in {:?}", CRITERIA.len() - failed, CRITERIA.len(), started.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
