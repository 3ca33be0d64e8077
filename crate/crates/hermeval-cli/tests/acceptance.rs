//! Acceptance run: one line per criterion, exact comparisons throughout. Exits non-zero if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use anyhow::{ensure, Result};
use rand::Rng;

use hermeval_core::generators::{
    count_flows, eulerian, flow, group_elements, hadamard2_corpus, potts,
};
use hermeval_core::graphenum::{connected_graphs, GraphClass};
use hermeval_core::oracle::{eval_bruteforce, BruteForce, BruteForceCong};
use hermeval_core::random::{random_connected_digraph, random_pinning, random_tractable, seeded};
use hermeval_core::selfcheck::{self, CheckReport};
use hermeval_core::{
    classify, classify_congruential, eval_fast, Cyclo, Dichotomy, MultiDigraph, Pinning,
};

const SEED: u64 = 20240611;

/// A named instance evaluated through the classifier and through the brute-force oracle.
struct Case {
    name: String,
    verdict: Dichotomy,
    oracle: Box<dyn Fn(&Pinning, &MultiDigraph) -> Result<Cyclo>>,
}

fn plain_case(name: &str, inst: hermeval_core::HermitianInstance) -> Result<Case> {
    Ok(Case {
        name: name.into(),
        verdict: classify(&inst)?,
        oracle: {
            let o = BruteForce::new(&inst);
            Box::new(move |p, g| Ok(o.eval(p, g)?))
        },
    })
}

fn criterion1() -> Result<String> {
    let mut cases = vec![
        plain_case("eulerian", eulerian())?,
        plain_case("flow Z2 {1}", flow(&[2], &[vec![1]])?)?,
        plain_case("flow Z3 {2}", flow(&[3], &[vec![2]])?)?,
        plain_case(
            "flow Z2xZ2 nonzero",
            flow(&[2, 2], &[vec![0, 1], vec![1, 0], vec![1, 1]])?,
        )?,
    ];
    for (k, ci) in hadamard2_corpus().into_iter().enumerate() {
        let verdict = classify_congruential(ci.omega, &ci.a, &ci.fam)?;
        let o = BruteForceCong::new(&ci.matrix_cyclo(), &ci.fam)?;
        cases.push(Case {
            name: format!("hadamard family {}", k + 1),
            verdict,
            oracle: Box::new(move |p, g| Ok(o.eval(p, g)?)),
        });
    }
    let mut rng = seeded(SEED);
    for k in 0..20 {
        let omega = rng.gen_range(1..=4);
        cases.push(plain_case(
            &format!("random tractable {}", k + 1),
            random_tractable(&mut rng, 4, omega),
        )?);
    }

    let graphs = connected_graphs(&GraphClass::multi(6, 8, 2));
    let mut pairs = 0usize;
    let mut hard = Vec::new();
    let mut failures = Vec::new();
    let none = Pinning::new();
    for case in &cases {
        let Dichotomy::PolyTime(plan) = &case.verdict else {
            hard.push(case.name.clone());
            continue;
        };
        let mut check = |p: &Pinning, g: &MultiDigraph| -> Result<()> {
            pairs += 1;
            let (o, f) = ((case.oracle)(p, g)?, eval_fast(plan, p, g)?);
            if !o.eq_value(&f) && failures.len() < 5 {
                failures.push(format!(
                    "{}: pins {p:?} graph {g:?}: oracle {o} fast {f}",
                    case.name
                ));
            }
            Ok(())
        };
        for g in &graphs {
            check(&none, g)?;
        }
        for _ in 0..50 {
            let n = rng.gen_range(1..=6);
            let slots = rng.gen_range(n - 1..=8);
            let g = random_connected_digraph(&mut rng, n, slots, 2);
            let p = random_pinning(&mut rng, &g, plan.size, 3);
            check(&p, &g)?;
        }
    }
    ensure!(
        failures.is_empty(),
        "mismatches:\n    {}",
        failures.join("\n    ")
    );
    ensure!(
        hard.len() < cases.len() / 2,
        "too few instances are polynomial-time: {hard:?}"
    );
    Ok(format!(
        "{pairs} (instance, graph) pairs agree; {} instances, {} digraphs each plus 50 pinned; #P-hard and skipped: {}",
        cases.len() - hard.len(),
        graphs.len(),
        if hard.is_empty() { "none".into() } else { hard.join(", ") }
    ))
}

fn report(r: &CheckReport) -> Result<String> {
    ensure!(r.passed(), "{r}");
    Ok(format!("{} {}/{}", r.name, r.checked, r.checked))
}

fn criterion2() -> Result<String> {
    report(&selfcheck::classification_sanity(SEED, 10)?)
}

/// Both evaluators on every connected graph against the parity of every degree.
fn criterion3() -> Result<String> {
    let inst = eulerian();
    let Dichotomy::PolyTime(plan) = classify(&inst)? else {
        anyhow::bail!("eulerian classified as hard")
    };
    let graphs = connected_graphs(&GraphClass::simple(5, 7));
    let p = Pinning::new();
    let mut euler = 0;
    for g in &graphs {
        let even = g.degrees().iter().all(|(o, i)| (o + i) % 2 == 0);
        euler += usize::from(even);
        let want = Cyclo::from_int(1, i64::from(even));
        let (o, f) = (eval_bruteforce(&inst, &p, g)?, eval_fast(&plan, &p, g)?);
        ensure!(
            o.eq_value(&want) && f.eq_value(&want),
            "graph {g:?}: oracle {o} fast {f}, even degrees {even}"
        );
    }
    Ok(format!(
        "{} graphs ({euler} Eulerian), both evaluators",
        graphs.len()
    ))
}

fn criterion4() -> Result<String> {
    let graphs = connected_graphs(&GraphClass::oriented(4, 5));
    let p = Pinning::new();
    let mut checks = 0;
    let mut sets = 0;
    for orders in [vec![2u64], vec![3], vec![2, 2]] {
        let elems = group_elements(&orders);
        let mut ss: Vec<Vec<Vec<u64>>> = elems.iter().map(|e| vec![e.clone()]).collect();
        ss.push(
            elems
                .iter()
                .filter(|e| e.iter().any(|&x| x != 0))
                .cloned()
                .collect(),
        );
        for s in ss {
            sets += 1;
            let inst = flow(&orders, &s)?;
            let plan = match classify(&inst)? {
                Dichotomy::PolyTime(plan) => Some(plan),
                Dichotomy::SharpPHard(_) => None,
            };
            for g in &graphs {
                let want = Cyclo::from_int(1, count_flows(&orders, &s, g) as i64);
                let o = eval_bruteforce(&inst, &p, g)?;
                ensure!(
                    o.eq_value(&want),
                    "{orders:?} S={s:?} graph {g:?}: oracle {o}, count {want}"
                );
                if let Some(plan) = &plan {
                    let f = eval_fast(plan, &p, g)?;
                    ensure!(
                        f.eq_value(&want),
                        "{orders:?} S={s:?} graph {g:?}: fast {f}, count {want}"
                    );
                    checks += 1;
                }
                checks += 1;
            }
        }
    }
    Ok(format!(
        "{checks} evaluations over {sets} (group, S) pairs and {} oriented graphs",
        graphs.len()
    ))
}

/// Σ_{A⊆E} q^{c(A)} v^{|A|} by subset enumeration with a union-find per subset.
fn tutte_potts(g: &MultiDigraph, q: i64, v: i64) -> i64 {
    let edges: Vec<(usize, usize)> = g
        .edges()
        .flat_map(|(a, b, m)| std::iter::repeat((a, b)).take(m as usize))
        .collect();
    let n = g.vertex_count();
    let mut total = 0;
    for mask in 0u32..1 << edges.len() {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] == x {
                x
            } else {
                let r = find(p, p[x]);
                p[x] = r;
                r
            }
        }
        let mut comps = n as u32;
        for (k, &(a, b)) in edges.iter().enumerate() {
            if mask >> k & 1 == 1 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                    comps -= 1;
                }
            }
        }
        total += q.pow(comps) * v.pow(mask.count_ones());
    }
    total
}

fn criterion5() -> Result<String> {
    let graphs = connected_graphs(&GraphClass::simple(5, 6));
    let p = Pinning::new();
    let mut checks = 0;
    for q in [2usize, 3] {
        for v in [1i64, 2] {
            let inst = potts(q, v)?;
            ensure!(
                !classify(&inst)?.is_polytime(),
                "potts {q} {v} should be #P-hard"
            );
            for g in &graphs {
                let want = Cyclo::from_int(1, tutte_potts(g, q as i64, v));
                let o = eval_bruteforce(&inst, &p, g)?;
                ensure!(
                    o.eq_value(&want),
                    "potts {q} {v} graph {g:?}: oracle {o}, subset expansion {want}"
                );
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} evaluations on {} graphs", graphs.len()))
}

fn criterion6() -> Result<String> {
    report(&selfcheck::eval_q_suite(SEED, 200)?)
}

fn criterion7() -> Result<String> {
    let reports = selfcheck::identity_suite(SEED, 25, 6)?;
    let mut parts = Vec::new();
    for r in &reports {
        ensure!(
            r.checked >= 25,
            "{} checked only {} triples",
            r.name,
            r.checked
        );
        parts.push(report(r)?);
    }
    Ok(parts.join(", "))
}

fn criterion8() -> Result<String> {
    let reports = selfcheck::group_suite(SEED, 6)?;
    Ok(reports
        .iter()
        .map(report)
        .collect::<Result<Vec<_>>>()?
        .join(", "))
}

fn criterion9() -> Result<String> {
    let run = || -> Result<Vec<u8>> {
        let o = Command::new(env!("CARGO_BIN_EXE_hermeval"))
            .args(["selftest", "--max-vertices", "5"])
            .env("HERMEVAL_SEED", SEED.to_string())
            .output()?;
        ensure!(
            o.status.success(),
            "selftest failed:\n{}",
            String::from_utf8_lossy(&o.stdout)
        );
        Ok(o.stdout)
    };
    let (a, b) = (run()?, run()?);
    ensure!(a == b, "reports differ");
    Ok(format!("two selftest runs, {} identical bytes", a.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<String>); 9] = [
        ("oracle equivalence", criterion1),
        ("classification sanity", criterion2),
        ("eulerian reproduction", criterion3),
        ("flow reproduction", criterion4),
        ("tutte/potts", criterion5),
        ("eval(q) correctness", criterion6),
        ("identity suite", criterion7),
        ("group-theory suite", criterion8),
        ("determinism", criterion9),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = match catch_unwind(AssertUnwindSafe(f)) {
            Ok(r) => r,
            Err(e) => Err(anyhow::anyhow!(
                "panicked: {}",
                e.downcast_ref::<String>()
                    .cloned()
                    .or(e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default()
            )),
        };
        match outcome {
            Ok(msg) => println!("criterion {} {name:<22} PASS  {msg}", k + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {} {name:<22} FAIL  {e:#}", k + 1);
            }
        }
    }
    let secs = start.elapsed().as_secs();
    if failed == 0 {
        println!("acceptance: all 9 criteria passed in {secs} s");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 9 criteria failed ({secs} s)");
        ExitCode::FAILURE
    }
}
