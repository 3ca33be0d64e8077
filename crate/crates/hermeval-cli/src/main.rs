use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hermeval_core::graphcore::parse_graph;
use hermeval_core::oracle::eval_bruteforce;
use hermeval_core::{
    classify, eval_fast, generators, selfcheck, ComponentPlan, Cyclo, Dichotomy, HermitianInstance,
};

// println! panics when the reader goes away (e.g. `| head`); this surfaces it as an error instead.
macro_rules! out {
    ($($t:tt)*) => {
        writeln!(io::stdout().lock(), $($t)*)?
    };
}

#[derive(Parser)]
#[command(
    name = "hermeval",
    version,
    about = "Classify and evaluate Hermitian partition functions Z_{A,D}(G)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether EVAL(A, D) is polynomial-time or #P-hard.
    Classify { matrix: PathBuf },
    /// Evaluate Z_{A,D}(φ, G) exactly.
    Eval {
        matrix: PathBuf,
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
    /// Write one of the classic example instances.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Output file (standard output when omitted).
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Seeded self-checks; HERMEVAL_SEED fixes the seed.
    Selftest {
        #[arg(long, default_value_t = 5)]
        max_vertices: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Fast path when the instance is polynomial-time, brute force otherwise.
    Auto,
    Fast,
    Oracle,
}

#[derive(Subcommand)]
enum GenKind {
    /// U = [[1,-1],[-1,1]], D = diag(1/2, 1/2).
    Eulerian,
    /// [[0,1],[1,1]].
    Indepset,
    /// J_q - I_q.
    Clique { q: usize },
    /// J_q + v·I_q.
    Potts {
        q: usize,
        #[arg(allow_negative_numbers = true)]
        v: i64,
    },
    /// S-flows over Z_{k1} x ... x Z_{kz}: `flow 2,2 1,0 0,1` or `flow 3 nonzero`.
    Flow {
        /// Comma-separated cyclic orders k1,...,kz.
        orders: String,
        /// Elements of S as comma-separated coordinates, or `nonzero` for every non-zero element.
        #[arg(required = true)]
        set: Vec<String>,
    },
}

fn read_instance(path: &Path) -> Result<HermitianInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    HermitianInstance::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn one_based(idx: &[usize]) -> String {
    idx.iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_classify(path: &Path) -> Result<()> {
    let inst = read_instance(path)?;
    match classify(&inst)? {
        Dichotomy::PolyTime(plan) => {
            out!("POLYTIME");
            out!("omega {}", plan.omega);
            out!("components {}", plan.components.len());
            for (k, c) in plan.components.iter().enumerate() {
                let kind = match c {
                    ComponentPlan::Isolated { .. } => "isolated",
                    ComponentPlan::NonBipartite { .. } => "non-bipartite",
                    ComponentPlan::Bipartite { .. } => "bipartite",
                };
                out!(
                    "component {} {kind} indices {} group {}",
                    k + 1,
                    one_based(&c.indices()),
                    c.group_label()
                );
            }
        }
        Dichotomy::SharpPHard(w) => {
            out!("SHARP_P_HARD {}", w.tag.name());
            out!("indices {}", one_based(&w.location));
            out!("detail {}", w.detail);
            out!("citation {}", w.citation());
        }
    }
    Ok(())
}

fn print_value(z: &Cyclo) -> Result<()> {
    let z = z.minimal();
    out!("conductor {}", z.conductor());
    for (k, c) in z.coeffs().iter().enumerate() {
        out!("coeff {k} {}/{}", c.numer(), c.denom());
    }
    let (re, im) = z.to_complex();
    out!("approx {re:.6} {im:+.6}i (floating point, not authoritative)");
    Ok(())
}

fn cmd_eval(mpath: &Path, gpath: &Path, mode: Mode) -> Result<()> {
    let inst = read_instance(mpath)?;
    let text = fs::read_to_string(gpath).with_context(|| format!("reading {}", gpath.display()))?;
    let (g, pins) = parse_graph(&text).with_context(|| format!("parsing {}", gpath.display()))?;
    if let Some((&v, &s)) = pins.iter().find(|(_, &s)| s >= inst.size()) {
        bail!(
            "vertex {} is pinned to spin {} but the matrix has only {} spins",
            v + 1,
            s + 1,
            inst.size()
        );
    }
    let verdict = if mode == Mode::Oracle {
        None
    } else {
        Some(classify(&inst)?)
    };
    let value = match (mode, verdict) {
        (Mode::Oracle, _) | (Mode::Auto, Some(Dichotomy::SharpPHard(_))) => {
            out!("mode oracle");
            eval_bruteforce(&inst, &pins, &g)?
        }
        (_, Some(Dichotomy::PolyTime(plan))) => {
            out!("mode fast");
            eval_fast(&plan, &pins, &g)?
        }
        (_, Some(Dichotomy::SharpPHard(w))) => {
            bail!(
                "refusing --mode fast: the instance is #P-hard ({} at indices {}: {}); use --mode oracle or --mode auto",
                w.tag.name(),
                one_based(&w.location),
                w.detail
            )
        }
        (_, None) => unreachable!("classification is skipped only in oracle mode"),
    };
    print_value(&value)
}

fn parse_list(s: &str, what: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .with_context(|| format!("bad {what} {t:?}"))
        })
        .collect()
}

fn cmd_gen(kind: &GenKind, output: Option<&Path>) -> Result<()> {
    let inst = match kind {
        GenKind::Eulerian => generators::eulerian(),
        GenKind::Indepset => generators::indepset(),
        GenKind::Clique { q } => generators::clique(*q)?,
        GenKind::Potts { q, v } => generators::potts(*q, *v)?,
        GenKind::Flow { orders, set } => {
            let orders = parse_list(orders, "group order")?;
            let mut s = Vec::new();
            for e in set {
                if e == "nonzero" {
                    if orders.contains(&0) {
                        bail!("group orders must be positive");
                    }
                    s.extend(
                        generators::group_elements(&orders)
                            .into_iter()
                            .filter(|x| x.iter().any(|&c| c != 0)),
                    );
                } else {
                    s.push(parse_list(e, "coordinate")?);
                }
            }
            generators::flow(&orders, &s)?
        }
    };
    let text = inst.to_text();
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => {
            let mut o = io::stdout().lock();
            o.write_all(text.as_bytes())?;
            o.flush()?;
        }
    }
    Ok(())
}

fn cmd_selftest(max_vertices: usize) -> Result<bool> {
    if max_vertices == 0 {
        bail!("--max-vertices must be at least 1");
    }
    let seed = match std::env::var("HERMEVAL_SEED") {
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .with_context(|| format!("HERMEVAL_SEED is not an integer: {s:?}"))?,
        Err(_) => 1,
    };
    out!("seed {seed}");
    out!("max-vertices {max_vertices}");
    let mut reports = vec![
        selfcheck::classification_sanity(seed, 10)?,
        selfcheck::oracle_equivalence(seed, 20, 10, max_vertices)?,
    ];
    reports.extend(selfcheck::identity_suite(seed, 10, max_vertices)?);
    reports.push(selfcheck::eval_q_suite(seed, 20)?);
    let mut ok = true;
    for r in &reports {
        out!("{r}");
        ok &= r.passed();
    }
    out!("{}", if ok { "ALL PASSED" } else { "FAILURES" });
    Ok(ok)
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Classify { matrix } => cmd_classify(matrix)?,
        Command::Eval {
            matrix,
            graph,
            mode,
        } => cmd_eval(matrix, graph, *mode)?,
        Command::Gen { kind, output } => cmd_gen(kind, output.as_deref())?,
        Command::Selftest { max_vertices } => return cmd_selftest(*max_vertices),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e)
            if e.downcast_ref::<io::Error>()
                .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
