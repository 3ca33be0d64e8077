//! Seeded self-checks shared by the test suites and the `selftest` command. Every check compares
//! exact values; a report lists how many triples were checked and describes each failure.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::exactalg::{Cyclo, PhasedMagnitude};
use crate::generators::{hadamard2_corpus, hermitian_hadamards};
use crate::graphcore::{MultiDigraph, Pinning};
use crate::grouprep::{
    abelian_decompose, build_group_rep, check_group_condition, normalize_rho, GroupRep, PhaseMatrix,
};
use crate::normalize::{twin_reduce, unity_transfer, TileDecomposition};
use crate::oracle::{
    eval_bruteforce, eval_bruteforce_cong, CongruentialWeights, HermitianInstance,
};
use crate::pipeline::{classify, classify_congruential, eval_fast, ComponentPlan, EvalPlan};
use crate::quadsum::{eval_q, eval_q_bruteforce, QuadraticForm};
use crate::random::{
    random_connected_digraph, random_instance, random_pinning, random_tractable, seeded, SeededRng,
};

/// Size bounds for random triples: instances m ≤ 4, ω ≤ 4; graphs ≤ `max_vertices` vertices and
/// ≤ 8 edge copies with multiplicities ≤ 2.
pub const MAX_M: usize = 4;
pub const MAX_OMEGA: u64 = 4;
pub const MAX_SLOTS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    fn new(name: &'static str) -> CheckReport {
        CheckReport {
            name,
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(detail());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ok = self.checked - self.failures.len();
        write!(
            f,
            "{:<24} {}/{} {}",
            self.name,
            ok,
            self.checked,
            if self.passed() { "ok" } else { "FAILED" }
        )?;
        for d in &self.failures {
            write!(f, "\n    {d}")?;
        }
        Ok(())
    }
}

pub fn random_graph(rng: &mut SeededRng, max_vertices: usize) -> MultiDigraph {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let slots = rng.gen_range(n.saturating_sub(1)..=MAX_SLOTS.max(n - 1));
    random_connected_digraph(rng, n, slots, 2)
}

fn omega(rng: &mut SeededRng) -> u64 {
    rng.gen_range(1..=MAX_OMEGA)
}

fn cyclo_matrix(a: &[Vec<PhasedMagnitude>], omega: u64) -> Vec<Vec<Cyclo>> {
    a.iter()
        .map(|r| r.iter().map(|e| e.to_cyclo(omega, 2 * omega)).collect())
        .collect()
}

/// Tractable instance together with its plan.
fn tractable(rng: &mut SeededRng, max_m: usize) -> Result<(HermitianInstance, EvalPlan)> {
    loop {
        let w = omega(rng);
        let inst = random_tractable(rng, max_m, w);
        if let Some(p) = classify(&inst)?.plan() {
            return Ok((inst.clone(), p.clone()));
        }
    }
}

fn both(
    inst: &HermitianInstance,
    plan: &EvalPlan,
    pins: &Pinning,
    g: &MultiDigraph,
) -> Result<(Cyclo, Cyclo)> {
    Ok((eval_bruteforce(inst, pins, g)?, eval_fast(plan, pins, g)?))
}

/// Splitting an index into twins with the same total weight leaves Z unchanged, and the reduced
/// instance evaluates to the same value with pins mapped through τ.
pub fn twin_identity(
    rng: &mut SeededRng,
    trials: usize,
    max_vertices: usize,
) -> Result<CheckReport> {
    let mut rep = CheckReport::new("twin-reduction");
    for _ in 0..trials {
        let w = omega(rng);
        let m = rng.gen_range(1..MAX_M);
        let base = random_instance(rng, m, w);
        let x = rng.gen_range(0..m);
        let mut a: Vec<Vec<PhasedMagnitude>> = base.matrix().to_vec();
        for row in a.iter_mut() {
            let e = row[x].clone();
            row.push(e);
        }
        let mut last = a[x].clone();
        last[m] = a[x][x].clone();
        a.push(last);
        let mut d = base.weights().to_vec();
        let part = &d[x] * crate::exactalg::rat(rng.gen_range(1..4), 4);
        d[x] = &d[x] - &part;
        d.push(part);
        let inst = HermitianInstance::new(w, a, d)?;
        let g = random_graph(rng, max_vertices);
        let pins = random_pinning(rng, &g, m + 1, 2);
        let tw = twin_reduce(&inst.matrix().to_vec(), &inst.constant_family());
        let red_pins: Pinning = pins.iter().map(|(&v, &s)| (v, tw.tau[s])).collect();
        let lhs = eval_bruteforce(&inst, &pins, &g)?;
        let rhs = eval_bruteforce_cong(&cyclo_matrix(&tw.a, w), &tw.fam, &red_pins, &g)?;
        let merged_pins: Pinning = pins
            .iter()
            .map(|(&v, &s)| (v, if s == m { x } else { s }))
            .collect();
        let merged = eval_bruteforce(&base, &merged_pins, &g)?;
        rep.record(lhs.eq_value(&rhs) && lhs.eq_value(&merged), || {
            format!(
                "{}pins {pins:?} graph {g:?}: {lhs} vs reduced {rhs} vs merged {merged}",
                inst.to_text()
            )
        });
    }
    Ok(rep)
}

/// Z_{A,𝔇}(φ,G) = f_Π(φ)·Z_{A′,𝔇′}(φ,G) for a random diagonal Π of ω-th roots.
pub fn transfer_identity(
    rng: &mut SeededRng,
    trials: usize,
    max_vertices: usize,
) -> Result<CheckReport> {
    let mut rep = CheckReport::new("unity-transfer");
    for _ in 0..trials {
        let w = omega(rng);
        let m = rng.gen_range(1..=MAX_M);
        let inst = random_instance(rng, m, w);
        let pi: Vec<u64> = (0..m).map(|_| rng.gen_range(0..w)).collect();
        let g = random_graph(rng, max_vertices);
        let pins = random_pinning(rng, &g, m, 2);
        let tr = unity_transfer(&inst.matrix().to_vec(), &inst.constant_family(), &pi);
        let lhs = eval_bruteforce(&inst, &pins, &g)?;
        let f = crate::normalize::transfer_factor(&pi, w, &pins, &g, 2 * w);
        let rhs = f.mul(&eval_bruteforce_cong(
            &cyclo_matrix(&tr.a, w),
            &tr.fam,
            &pins,
            &g,
        )?);
        rep.record(lhs.eq_value(&rhs), || {
            format!(
                "{}pi {pi:?} pins {pins:?} graph {g:?}: {lhs} vs {rhs}",
                inst.to_text()
            )
        });
    }
    Ok(rep)
}

fn nonbipartite_tiles(plan: &EvalPlan) -> Vec<(&TileDecomposition, &crate::grouprep::GroupRep)> {
    plan.components
        .iter()
        .filter_map(|c| match c {
            ComponentPlan::NonBipartite { tiles, rep, .. } => Some((tiles, rep)),
            _ => None,
        })
        .collect()
}

fn phase_cyclo(h: &[Vec<u64>], omega: u64) -> Vec<Vec<Cyclo>> {
    let l = 2 * omega;
    h.iter()
        .map(|r| {
            r.iter()
                .map(|&p| Cyclo::root(l, (p * (l / omega)) as i64))
                .collect()
        })
        .collect()
}

/// Z_{ςλvv^T⊗H, Δ⊗U}(φ,G) = Z_{ςλvv^T, Δ}(φ_M,G)·Z_{H,U}(φ_H,G) on tiles produced by the classifier.
pub fn tensor_identity(
    rng: &mut SeededRng,
    trials: usize,
    max_vertices: usize,
) -> Result<CheckReport> {
    let mut rep = CheckReport::new("tensor-factorization");
    while rep.checked < trials {
        let (_, plan) = tractable(rng, MAX_M)?;
        let comps = nonbipartite_tiles(&plan);
        let Some(&(t, _)) = comps.choose(rng) else {
            continue;
        };
        let (w, l, r, mm) = (t.omega, 2 * t.omega, t.r(), t.m());
        let c = t.tile_matrix(l);
        let fam = CongruentialWeights::new(
            w,
            (0..w as i64)
                .map(|k| {
                    (0..mm * r)
                        .map(|x| t.delta[k as usize][x / r].mul(&t.u.at(k)[x % r]))
                        .collect()
                })
                .collect(),
        );
        let s = crate::exactalg::Rat::from_integer(t.sign.into()) * &t.lambda;
        let mmat: Vec<Vec<Cyclo>> = (0..mm)
            .map(|i| {
                (0..mm)
                    .map(|j| Cyclo::from_rat(l, &(&s * &t.v[i] * &t.v[j])))
                    .collect()
            })
            .collect();
        let dfam = CongruentialWeights::new(w, t.delta.clone());
        let g = random_graph(rng, max_vertices);
        let pins = random_pinning(rng, &g, mm * r, 2);
        let pm: Pinning = pins.iter().map(|(&v, &x)| (v, x / r)).collect();
        let ph: Pinning = pins.iter().map(|(&v, &x)| (v, x % r)).collect();
        let lhs = eval_bruteforce_cong(&c, &fam, &pins, &g)?;
        let rhs = eval_bruteforce_cong(&mmat, &dfam, &pm, &g)?.mul(&eval_bruteforce_cong(
            &phase_cyclo(&t.h, w),
            &t.u,
            &ph,
            &g,
        )?);
        rep.record(lhs.eq_value(&rhs), || {
            format!("tiles {t:?} pins {pins:?} graph {g:?}: {lhs} vs {rhs}")
        });
    }
    Ok(rep)
}

/// Z_{H,U}(φ,G) = Π_c λ_c^{−n_c}·Z_{H,U′}(φ,G) with U′ the ρ-normalized family and n_c the number of
/// free vertices of grade ≡ c. Alternates classifier tiles with the 2×2 Hadamard corpus.
pub fn ledger_identity(
    rng: &mut SeededRng,
    trials: usize,
    max_vertices: usize,
) -> Result<CheckReport> {
    let mut rep = CheckReport::new("lambda-ledger");
    let corpus: Vec<_> = hadamard2_corpus()
        .into_iter()
        .filter(|c| classify_congruential(c.omega, &c.a, &c.fam).is_ok_and(|d| d.is_polytime()))
        .collect();
    while rep.checked < trials {
        let (h, w, u, grep) = if rep.checked % 2 == 0 {
            let (_, plan) = tractable(rng, MAX_M)?;
            let comps = nonbipartite_tiles(&plan);
            let Some(&(t, gr)) = comps.choose(rng) else {
                continue;
            };
            (t.h.clone(), t.omega, t.u.clone(), gr.clone())
        } else {
            let c = corpus.choose(rng).expect("corpus has tractable members");
            let h: Vec<Vec<u64>> =
                c.a.iter()
                    .map(|r| r.iter().map(|e| e.phase).collect())
                    .collect();
            let gr = match build_group_rep(&h, c.omega, &c.fam)? {
                Ok(g) => g,
                Err(_) => continue,
            };
            (h, c.omega, c.fam.clone(), gr)
        };
        let l = 2 * w;
        let (normed, lambdas) = normalize_rho(&u, &grep.classes);
        let g = random_graph(rng, max_vertices);
        let pins = random_pinning(rng, &g, h.len(), 2);
        let hm = phase_cyclo(&h, w);
        let lhs = eval_bruteforce_cong(&hm, &u, &pins, &g)?;
        let mut factor = Cyclo::one(l);
        for (v, grade) in g.grades().into_iter().enumerate() {
            if !pins.contains_key(&v) {
                factor = factor.mul(&lambdas[grade.rem_euclid(w as i64) as usize].inv()?);
            }
        }
        let rhs = factor.mul(&eval_bruteforce_cong(&hm, &normed, &pins, &g)?);
        rep.record(lhs.eq_value(&rhs), || {
            format!("H {h:?} pins {pins:?} graph {g:?}: {lhs} vs {rhs}")
        });
    }
    Ok(rep)
}

/// Multiplicativity over disjoint unions, the pin-expansion of a free vertex, and invariance under
/// simultaneous permutation, each through both evaluators on tractable instances.
pub fn structural_identities(
    rng: &mut SeededRng,
    trials: usize,
    max_vertices: usize,
) -> Result<Vec<CheckReport>> {
    let mut conn = CheckReport::new("connectedness");
    let mut pin = CheckReport::new("pinning");
    let mut perm = CheckReport::new("permutability");
    for _ in 0..trials {
        let (inst, plan) = tractable(rng, MAX_M)?;
        let m = inst.size();
        let l = inst.conductor();

        let half = (max_vertices / 2).max(1);
        let (g1, g2) = (random_graph(rng, half), random_graph(rng, half));
        let (p1, p2) = (
            random_pinning(rng, &g1, m, 1),
            random_pinning(rng, &g2, m, 1),
        );
        let g = g1.disjoint_union(&g2);
        let mut pins = p1.clone();
        pins.extend(p2.iter().map(|(&v, &s)| (v + g1.vertex_count(), s)));
        let (o, f) = both(&inst, &plan, &pins, &g)?;
        let (o1, f1) = both(&inst, &plan, &p1, &g1)?;
        let (o2, f2) = both(&inst, &plan, &p2, &g2)?;
        conn.record(
            o.eq_value(&o1.mul(&o2)) && f.eq_value(&f1.mul(&f2)) && o.eq_value(&f),
            || {
                format!(
                    "{}pins {pins:?} graph {g:?}: {o} / {f} vs {o1}*{o2}",
                    inst.to_text()
                )
            },
        );

        let g = random_graph(rng, max_vertices);
        let pins = random_pinning(rng, &g, m, 1);
        let free: Vec<usize> = (0..g.vertex_count())
            .filter(|v| !pins.contains_key(v))
            .collect();
        if let Some(&v) = free.choose(rng) {
            let (o, f) = both(&inst, &plan, &pins, &g)?;
            let mut so = Cyclo::zero(l);
            let mut sf = Cyclo::zero(l);
            for i in 0..m {
                let mut p = pins.clone();
                p.insert(v, i);
                let (oi, fi) = both(&inst, &plan, &p, &g)?;
                let d = Cyclo::from_rat(l, inst.weight(i));
                so = so.add(&d.mul(&oi));
                sf = sf.add(&d.mul(&fi.embed(l)?));
            }
            pin.record(o.eq_value(&so) && f.eq_value(&sf), || {
                format!(
                    "{}pins {pins:?} graph {g:?} vertex {v}: {o} / {f} vs {so} / {sf}",
                    inst.to_text()
                )
            });
        } else {
            pin.record(true, String::new);
        }

        let mut p: Vec<usize> = (0..m).collect();
        p.shuffle(rng);
        let permuted = inst.permute(&p);
        let mut inv = vec![0; m];
        for (i, &x) in p.iter().enumerate() {
            inv[x] = i;
        }
        let ppins: Pinning = pins.iter().map(|(&v, &s)| (v, inv[s])).collect();
        let pd = classify(&permuted)?;
        let same_variant = pd.is_polytime();
        let (o, _) = both(&inst, &plan, &pins, &g)?;
        let po = eval_bruteforce(&permuted, &ppins, &g)?;
        let pf = match pd.plan() {
            Some(pp) => eval_fast(pp, &ppins, &g)?,
            None => Cyclo::zero(l),
        };
        perm.record(same_variant && o.eq_value(&po) && o.eq_value(&pf), || {
            format!(
                "{}perm {p:?} pins {pins:?} graph {g:?}: {o} vs {po} / {pf}",
                inst.to_text()
            )
        });
    }
    Ok(vec![conn, pin, perm])
}

/// All identity checks with `trials` triples each, from one seed.
pub fn identity_suite(seed: u64, trials: usize, max_vertices: usize) -> Result<Vec<CheckReport>> {
    let mut out = vec![
        twin_identity(&mut seeded(seed), trials, max_vertices)?,
        transfer_identity(&mut seeded(seed.wrapping_add(1)), trials, max_vertices)?,
        tensor_identity(&mut seeded(seed.wrapping_add(2)), trials, max_vertices)?,
        ledger_identity(&mut seeded(seed.wrapping_add(3)), trials, max_vertices)?,
    ];
    out.extend(structural_identities(
        &mut seeded(seed.wrapping_add(4)),
        trials,
        max_vertices,
    )?);
    Ok(out)
}

/// eval_fast against eval_bruteforce on random tractable instances and random pinned graphs.
pub fn oracle_equivalence(
    seed: u64,
    instances: usize,
    graphs: usize,
    max_vertices: usize,
) -> Result<CheckReport> {
    let mut rng = seeded(seed);
    let mut rep = CheckReport::new("fast-vs-oracle");
    for _ in 0..instances {
        let (inst, plan) = tractable(&mut rng, MAX_M)?;
        for _ in 0..graphs {
            let g = random_graph(&mut rng, max_vertices);
            let pins = random_pinning(&mut rng, &g, inst.size(), 2);
            let (o, f) = both(&inst, &plan, &pins, &g)?;
            rep.record(o.eq_value(&f), || {
                format!(
                    "{}pins {pins:?} graph {g:?}: oracle {o} fast {f}",
                    inst.to_text()
                )
            });
        }
    }
    Ok(rep)
}

/// Known verdicts: independent sets, colourings, a non-trivial Potts model and nowhere-zero 4-flows
/// are #P-hard; Eulerian indicators, single-value flows, the 2×2 Fourier matrix and rank-1 matrices
/// are not.
pub fn classification_sanity(seed: u64, rank1: usize) -> Result<CheckReport> {
    use crate::exactalg::{rat, rat_int};
    use crate::generators::{clique, eulerian, flow, indepset, potts};
    use crate::random::random_rank1;
    let mut rep = CheckReport::new("classification");
    let hard = [
        ("indepset", indepset()),
        ("clique 3", clique(3)?),
        ("clique 4", clique(4)?),
        ("potts 2 1", potts(2, 1)?),
        (
            "flow Z2+Z2 nonzero",
            flow(&[2, 2], &[vec![0, 1], vec![1, 0], vec![1, 1]])?,
        ),
    ];
    for (name, inst) in hard {
        let d = classify(&inst)?;
        rep.record(!d.is_polytime(), || format!("{name} should be #P-hard"));
    }
    let fourier = vec![vec![rat_int(1), rat_int(1)], vec![rat_int(1), rat_int(-1)]];
    let easy = [
        ("eulerian", eulerian()),
        (
            "fourier 2",
            HermitianInstance::from_real(2, &fourier, vec![rat(1, 1); 2])?,
        ),
        ("flow Z3 {2}", flow(&[3], &[vec![2]])?),
        ("flow Z2+Z2 {(1,1)}", flow(&[2, 2], &[vec![1, 1]])?),
    ];
    for (name, inst) in easy {
        let d = classify(&inst)?;
        rep.record(d.is_polytime(), || {
            format!("{name} should be polynomial-time: {d:?}")
        });
    }
    let mut rng = seeded(seed);
    for _ in 0..rank1 {
        let m = rng.gen_range(1..=MAX_M);
        let inst = random_rank1(&mut rng, m);
        let d = classify(&inst)?;
        rep.record(d.is_polytime(), || {
            format!("rank-1 {}should be polynomial-time", inst.to_text())
        });
    }
    Ok(rep)
}

/// Normalized Hermitian Hadamard matrices of size ≤ 4 with entries in U_ω that satisfy the group
/// condition.
pub fn normalized_gc_hadamards(omega: u64) -> Result<Vec<PhaseMatrix>> {
    let mut out = Vec::new();
    for n in 1..=4 {
        for h in hermitian_hadamards(n, omega) {
            if h[0].iter().all(|&x| x == 0) && check_group_condition(&h, omega)? {
                out.push(h);
            }
        }
    }
    Ok(out)
}

/// Random H-STD family (D^⟨0⟩ = I, D^⟨−c⟩ = conj(D^⟨c⟩), entries in {0} ∪ U_{2ω}) for which the
/// representation (R1)-(R5) with (AF) exists; None after `attempts` failures.
pub fn random_hstd_family(
    rng: &mut SeededRng,
    h: &PhaseMatrix,
    omega: u64,
    attempts: usize,
) -> Result<Option<(CongruentialWeights, GroupRep)>> {
    let (n, l) = (h.len(), 2 * omega);
    for _ in 0..attempts {
        let mut fam = vec![vec![Cyclo::one(l); n]; omega as usize];
        for c in 1..omega as usize {
            let mirror = omega as usize - c;
            if mirror < c {
                fam[c] = fam[mirror].iter().map(Cyclo::conj).collect();
                continue;
            }
            fam[c] = (0..n)
                .map(|_| {
                    if rng.gen_bool(0.2) {
                        Cyclo::zero(l)
                    } else if mirror == c {
                        Cyclo::root(l, omega as i64 * rng.gen_range(0..2))
                    } else {
                        Cyclo::root(l, rng.gen_range(0..l as i64))
                    }
                })
                .collect();
        }
        let fam = CongruentialWeights::new(omega, fam);
        if let Ok(rep) = build_group_rep(h, omega, &fam)? {
            return Ok(Some((fam, rep)));
        }
    }
    Ok(None)
}

fn order_mod(k: u64, n: u64) -> u64 {
    n / num_integer::gcd(k % n, n)
}

/// The group-theoretic checks: skew-bilinearity of the row-group form, the binomial expansion of
/// ρ_c, the two order claims, and the gadget matrices of the group-condition and affinity
/// reductions against the oracle.
pub fn group_suite(seed: u64, samples: usize) -> Result<Vec<CheckReport>> {
    let mut rng = seeded(seed);
    let mut skew = CheckReport::new("skew-bilinearity");
    let mut binom = CheckReport::new("binomial-expansion");
    let mut orders = CheckReport::new("order-claims");
    let mut reps: Vec<(PhaseMatrix, CongruentialWeights, GroupRep)> = Vec::new();
    for omega in [2u64, 4] {
        for h in normalized_gc_hadamards(omega)? {
            let n = h.len();
            let g =
                abelian_decompose(&h, omega).map_err(|w| crate::Error::Internal(w.to_string()))?;
            let mut ok = true;
            for a in 0..n {
                for b in 0..n {
                    let s = g.add(a, b);
                    ok &= (0..n).all(|c| {
                        h[s][c] == (h[a][c] + h[b][c]) % omega
                            && h[c][s] == (h[c][a] + h[c][b]) % omega
                    });
                    ok &= (h[a][b] + h[b][a]) % omega == 0;
                }
                ok &= (0..n).all(|c| (h[g.neg(a)][c] + h[a][c]) % omega == 0);
            }
            skew.record(ok, || format!("H {h:?} over ω = {omega}"));
            let mut found = 0;
            for _ in 0..samples {
                if let Some((fam, rep)) = random_hstd_family(&mut rng, &h, omega, 40)? {
                    reps.push((h.clone(), fam, rep));
                    found += 1;
                }
            }
            if found == 0 {
                skew.failures
                    .push(format!("no H-STD family found for H {h:?}"));
            }
        }
    }
    for (h, _, rep) in &reps {
        let (omega, l) = (rep.omega, 2 * rep.omega);
        let g = &rep.group;
        for cls in rep.classes.iter().flatten() {
            for _ in 0..4 {
                let lam: Vec<i64> = cls.gens.iter().map(|_| rng.gen_range(-3..=3)).collect();
                let x = cls
                    .gens
                    .iter()
                    .zip(&lam)
                    .fold(g.zero(), |acc, (&(hi, o), &li)| {
                        g.add(acc, g.mul(li.rem_euclid(o as i64) as u64, hi))
                    });
                let two_bil = |a: usize, b: usize| 2 * rep.bil[a][b] as i64;
                let mut e: i64 = 0;
                for (i, (&(hi, _), &li)) in cls.gens.iter().zip(&lam).enumerate() {
                    e += li * cls.rho(hi) as i64 + li * (li - 1) / 2 * two_bil(cls.gamma(hi), hi);
                    for (&(hj, _), &lj) in cls.gens.iter().zip(&lam).take(i) {
                        e += li * lj * two_bil(cls.gamma(hi), hj);
                    }
                }
                let direct = cls.rho(x);
                binom.record(e.rem_euclid(l as i64) as u64 == direct, || {
                    format!("H {h:?} coefficients {lam:?}: expansion {e} vs ρ = {direct} mod {l}")
                });
            }
            for &y in &cls.members {
                let q = g.order(y);
                let o = order_mod(cls.rho(y), l);
                let mut ok = if q % 2 == 1 {
                    q % o == 0
                } else {
                    (2 * q) % o == 0
                };
                if q >= 2 && q.is_power_of_two() {
                    let t = (2 * cls.rho(y) + 2 * rep.bil[cls.gamma(y)][y]) % l;
                    ok &= order_mod(t, l) <= q / 2;
                }
                orders.record(ok, || {
                    format!(
                        "H {h:?} element {y} of order {q}: ρ = {} (ω = {omega})",
                        cls.rho(y)
                    )
                });
            }
        }
    }
    let mut out = vec![skew, binom, orders, gc_gadget_check()?];
    out.push(nymphaea_check()?);
    Ok(out)
}

/// Σ_{a,b} |⟨H_a • H_b, H_j • H_i⟩|^{2q} (with x • y = x ∘ conj(y)) against the oracle on the
/// gadget-substituted edge with endpoints pinned to (i, j): q = 1, every Hermitian Hadamard H of
/// size ≤ 4 over U_4, unit weights.
pub fn gc_gadget_check() -> Result<CheckReport> {
    let mut rep = CheckReport::new("gc-gadget");
    let omega = 4;
    let l = 2 * omega;
    let q = 1;
    let gadget = MultiDigraph::from_edges(2, &[(0, 1)]).gc_gadget(q);
    for n in 1..=4 {
        for h in hermitian_hadamards(n, omega) {
            let a: Vec<Vec<PhasedMagnitude>> = h
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|&p| {
                            PhasedMagnitude::new(crate::exactalg::rat_int(1), p as i64, omega)
                        })
                        .collect()
                })
                .collect();
            let inst = HermitianInstance::new(omega, a, vec![crate::exactalg::rat_int(1); n])?;
            let hm = phase_cyclo(&h, omega);
            let bullet = |x: usize, y: usize| -> Vec<Cyclo> {
                (0..n).map(|k| hm[x][k].mul(&hm[y][k].conj())).collect()
            };
            for i in 0..n {
                for j in 0..n {
                    let mut c = Cyclo::zero(l);
                    let right = bullet(j, i);
                    for x in 0..n {
                        for y in 0..n {
                            let left = bullet(x, y);
                            let ip = (0..n)
                                .fold(Cyclo::zero(l), |s, k| s.add(&left[k].mul(&right[k].conj())));
                            c = c.add(&ip.abs2().pow(q as u64));
                        }
                    }
                    let pins: Pinning = [(0, i), (1, j)].into_iter().collect();
                    let o = eval_bruteforce(&inst, &pins, &gadget)?;
                    rep.record(o.eq_value(&c), || {
                        format!("H {h:?} (i, j) = ({i}, {j}): oracle {o} formula {c}")
                    });
                }
            }
        }
    }
    Ok(rep)
}

/// n^{4pq+2p+1}·C_{u,v} with C_{u,v} = Σ_g |Σ_{x∈𝔊_q} ζ_{2ω}^{ρ_q(v−β+x) − ρ_q(u−β+x) + ⟨g,x⟩}|^{2p}
/// against the oracle on the Nymphaea-substituted edge with u, v pinned in β_q + 𝔊_q: p = q = 1,
/// H the 2×2 Fourier matrix over ω = 4, every H-STD family with D^⟨1⟩ ∈ ({0} ∪ U_8)².
pub fn nymphaea_check() -> Result<CheckReport> {
    let mut rep = CheckReport::new("nymphaea");
    let (omega, l, p, q) = (4u64, 8u64, 1u32, 1u32);
    let h: PhaseMatrix = vec![vec![0, 0], vec![0, 2]];
    let n = 2usize;
    let gadget = MultiDigraph::from_edges(2, &[(0, 1)]).nymphaea_substitute(p, q);
    let vals: Vec<Cyclo> = std::iter::once(Cyclo::zero(l))
        .chain((0..l as i64).map(|k| Cyclo::root(l, k)))
        .collect();
    let hm = phase_cyclo(&h, omega);
    for d0 in &vals {
        for d1 in &vals {
            let u1 = vec![d0.clone(), d1.clone()];
            let fam = CongruentialWeights::new(
                omega,
                vec![
                    vec![Cyclo::one(l); n],
                    u1.clone(),
                    vec![Cyclo::one(l); n],
                    u1.iter().map(Cyclo::conj).collect(),
                ],
            );
            let grep = match build_group_rep(&h, omega, &fam)? {
                Ok(g) => g,
                Err(_) => continue,
            };
            let Some(cls) = &grep.classes[q as usize] else {
                continue;
            };
            let g = &grep.group;
            for &a in &cls.members {
                for &b in &cls.members {
                    let (u, v) = (g.add(cls.beta, a), g.add(cls.beta, b));
                    let mut c = Cyclo::zero(l);
                    for gg in 0..n {
                        let mut inner = Cyclo::zero(l);
                        for &x in &cls.members {
                            let e = cls.rho(g.add(b, x)) as i64 - cls.rho(g.add(a, x)) as i64
                                + 2 * grep.bil[gg][x] as i64;
                            inner = inner.add(&Cyclo::root(l, e));
                        }
                        c = c.add(&inner.abs2().pow(p as u64));
                    }
                    let scale = crate::exactalg::rat_int((n as i64).pow(4 * p * q + 2 * p + 1));
                    let pins: Pinning = [(0, u), (1, v)].into_iter().collect();
                    let o = eval_bruteforce_cong(&hm, &fam, &pins, &gadget)?;
                    let expect = c.scale(&scale);
                    rep.record(o.eq_value(&expect), || {
                        format!("D1 = {u1:?} (u, v) = ({u}, {v}): oracle {o} formula {expect}")
                    });
                }
            }
        }
    }
    Ok(rep)
}

fn form_from(q: u64, n: usize, coeffs: &[u64]) -> QuadraticForm {
    let mut f = QuadraticForm::new(q, n);
    let mut it = coeffs.iter();
    for i in 0..n {
        for j in i..n {
            f.add_quad(i, j, *it.next().unwrap() as i64);
        }
        f.add_lin(i, *it.next().unwrap() as i64);
    }
    f.add_const(*it.next().unwrap() as i64);
    f
}

/// eval_q against direct summation: `per_q` random forms with n ≤ 3 for q ∈ {2,3,4,5,8,9}, and
/// every form with n ≤ 2 and zero constant for q ∈ {2,3,4}.
pub fn eval_q_suite(seed: u64, per_q: usize) -> Result<CheckReport> {
    let mut rng = seeded(seed);
    let mut rep = CheckReport::new("eval-q");
    let check = |f: &QuadraticForm, rep: &mut CheckReport| -> Result<()> {
        let fast = eval_q(f)?;
        let slow = eval_q_bruteforce(f);
        rep.record(fast == slow, || {
            format!("{f:?}: eval_q {fast} brute force {slow}")
        });
        Ok(())
    };
    for q in [2u64, 3, 4, 5, 8, 9] {
        for _ in 0..per_q {
            let n = rng.gen_range(0..=3);
            let k = n * (n + 1) / 2 + n + 1;
            let coeffs: Vec<u64> = (0..k).map(|_| rng.gen_range(0..q)).collect();
            check(&form_from(q, n, &coeffs), &mut rep)?;
        }
    }
    for q in [2u64, 3, 4] {
        for n in 0..=2usize {
            let k = n * (n + 1) / 2 + n;
            for code in 0..q.pow(k as u32) {
                let mut c = code;
                let mut coeffs: Vec<u64> = (0..k)
                    .map(|_| {
                        let x = c % q;
                        c /= q;
                        x
                    })
                    .collect();
                coeffs.push(0);
                check(&form_from(q, n, &coeffs), &mut rep)?;
            }
        }
    }
    Ok(rep)
}
