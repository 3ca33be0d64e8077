//! The dichotomy classifier and the polynomial-time evaluator built on its plans.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exactalg::{prime_power_factors, Cyclo, PhasedMagnitude, Rat};
use crate::graphcore::{MultiDigraph, Pinning};
use crate::grouprep::{
    build_bipartite_group_rep, build_group_rep, BipartiteGroupRep, CosetRep, FiniteGroup, GroupRep,
};
use crate::normalize::{
    bipartite_split, components, decompose_bipartite, decompose_to_tiles, subfamily, submatrix,
    transfer_factor, BipartiteTiles, Side, Split, TileDecomposition,
};
use crate::oracle::{CongruentialWeights, HermitianInstance};
use crate::quadsum::{eval_restricted, QuadraticForm};
use crate::witness::{HardnessTag, HardnessWitness};

/// Compiled evaluation recipe for one connected component of A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentPlan {
    /// A single index i with A_ii = 0; `weights[c]` = D^⟨c⟩_ii.
    Isolated { index: usize, weights: Vec<Cyclo> },
    NonBipartite {
        indices: Vec<usize>,
        tiles: TileDecomposition,
        rep: GroupRep,
    },
    Bipartite {
        indices: Vec<usize>,
        tiles: BipartiteTiles,
        rep: BipartiteGroupRep,
    },
}

impl ComponentPlan {
    pub fn indices(&self) -> Vec<usize> {
        match self {
            ComponentPlan::Isolated { index, .. } => vec![*index],
            ComponentPlan::NonBipartite { indices, .. }
            | ComponentPlan::Bipartite { indices, .. } => indices.clone(),
        }
    }

    /// Short description of the Hadamard group, e.g. "Z2+Z2".
    pub fn group_label(&self) -> String {
        fn label(orders: &[u64]) -> String {
            if orders.is_empty() {
                "trivial".into()
            } else {
                orders
                    .iter()
                    .map(|q| format!("Z{q}"))
                    .collect::<Vec<_>>()
                    .join("+")
            }
        }
        match self {
            ComponentPlan::Isolated { .. } => "zero".into(),
            ComponentPlan::NonBipartite { rep, .. } => label(&rep.group.orders()),
            ComponentPlan::Bipartite { rep, .. } => {
                format!(
                    "row {} col {}",
                    label(&rep.row.orders()),
                    label(&rep.col.orders())
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalPlan {
    pub omega: u64,
    pub size: usize,
    pub components: Vec<ComponentPlan>,
}

impl EvalPlan {
    pub fn conductor(&self) -> u64 {
        2 * self.omega
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dichotomy {
    PolyTime(EvalPlan),
    SharpPHard(HardnessWitness),
}

impl Dichotomy {
    pub fn is_polytime(&self) -> bool {
        matches!(self, Dichotomy::PolyTime(_))
    }

    pub fn witness(&self) -> Option<&HardnessWitness> {
        match self {
            Dichotomy::SharpPHard(w) => Some(w),
            Dichotomy::PolyTime(_) => None,
        }
    }

    pub fn plan(&self) -> Option<&EvalPlan> {
        match self {
            Dichotomy::PolyTime(p) => Some(p),
            Dichotomy::SharpPHard(_) => None,
        }
    }
}

pub fn classify(inst: &HermitianInstance) -> Result<Dichotomy> {
    classify_congruential(inst.omega(), inst.matrix(), &inst.constant_family())
}

/// Classifies EVAL^pin(A, 𝔇) for Hermitian ω-algebraic A and a family at conductor 2ω whose
/// grade-0 member is positive.
pub fn classify_congruential(
    omega: u64,
    a: &[Vec<PhasedMagnitude>],
    fam: &CongruentialWeights,
) -> Result<Dichotomy> {
    let m = a.len();
    if m == 0 || a.iter().any(|r| r.len() != m) {
        return Err(Error::Usage("matrix must be square and non-empty".into()));
    }
    if fam.omega() != omega || fam.dim() != m {
        return Err(Error::Usage("weight family does not fit the matrix".into()));
    }
    if fam
        .at(0)
        .iter()
        .any(|x| !x.as_rat().is_some_and(|r| r.is_positive()))
    {
        return Err(Error::Usage(
            "grade-0 weights must be positive rationals".into(),
        ));
    }
    for i in 0..m {
        for j in 0..m {
            if a[i][j] != a[j][i].conj(omega) {
                return Err(Error::Usage(format!(
                    "matrix is not Hermitian at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let mut plans = Vec::new();
    for idx in components(a) {
        let sub = submatrix(a, &idx);
        let sf = subfamily(fam, &idx);
        if idx.len() == 1 && sub[0][0].is_zero() {
            let weights = (0..omega as i64).map(|c| sf.at(c)[0].clone()).collect();
            plans.push(ComponentPlan::Isolated {
                index: idx[0],
                weights,
            });
            continue;
        }
        let globalize = |w: HardnessWitness| {
            if w.tag == HardnessTag::BlockRankAtLeast2 {
                HardnessWitness {
                    location: w.location.iter().map(|&k| idx[k]).collect(),
                    ..w
                }
            } else {
                w
            }
        };
        match bipartite_split(&sub) {
            Split::NonBipartite => {
                let tiles = match decompose_to_tiles(&sub, &sf)? {
                    Ok(t) => t,
                    Err(w) => return Ok(Dichotomy::SharpPHard(globalize(w))),
                };
                let rep = match build_group_rep(&tiles.h, omega, &tiles.u)? {
                    Ok(r) => r,
                    Err(w) => return Ok(Dichotomy::SharpPHard(w)),
                };
                plans.push(ComponentPlan::NonBipartite {
                    indices: idx,
                    tiles,
                    rep,
                });
            }
            Split::Bipartite { .. } => {
                let tiles = match decompose_bipartite(&sub, &sf)? {
                    Ok(t) => t,
                    Err(w) => return Ok(Dichotomy::SharpPHard(globalize(w))),
                };
                let rep =
                    match build_bipartite_group_rep(&tiles.h, omega, &tiles.row_u, &tiles.col_u)? {
                        Ok(r) => r,
                        Err(w) => return Ok(Dichotomy::SharpPHard(w)),
                    };
                plans.push(ComponentPlan::Bipartite {
                    indices: idx,
                    tiles,
                    rep,
                });
            }
        }
    }
    Ok(Dichotomy::PolyTime(EvalPlan {
        omega,
        size: m,
        components: plans,
    }))
}

/// Closed form for a rank-1 matrix A = a·b^T: pinned vertices give a^{deg⁺}b^{deg⁻}, free ones
/// Σ_i a_i^{deg⁺} b_i^{deg⁻} D^⟨∂⟩_ii.
pub fn eval_rank1(
    a: &[Cyclo],
    b: &[Cyclo],
    fam: &CongruentialWeights,
    pins: &Pinning,
    g: &MultiDigraph,
) -> Cyclo {
    let l = a[0].conductor();
    let mut acc = Cyclo::one(l);
    for v in 0..g.vertex_count() {
        let (o, i) = (g.out_degree(v), g.in_degree(v));
        let term = |k: usize| a[k].pow(o).mul(&b[k].pow(i));
        let f = match pins.get(&v) {
            Some(&s) => term(s),
            None => {
                let d = fam.at(g.grade(v));
                (0..a.len()).fold(Cyclo::zero(l), |s, k| s.add(&term(k).mul(&d[k])))
            }
        };
        acc = acc.mul(&f);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// The vertex weights of a free vertex vanish identically, so Z = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroCertificate {
    pub vertex: usize,
    pub residue: u64,
}

/// Z = ζ_L^{constant} · Π_ν Σ_X ζ_{ω_ν}^{f_ν(X)} with L = 2ω = Π ω_ν.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSystem {
    pub conductor: u64,
    pub constant: u64,
    pub forms: Vec<QuadraticForm>,
}

impl QuadraticSystem {
    pub fn value(&self) -> Result<Cyclo> {
        let l = self.conductor;
        let mut acc = Cyclo::root(l, self.constant as i64);
        for f in &self.forms {
            acc = acc.mul(&eval_restricted(f)?.embed(l)?);
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystemOutcome {
    System(QuadraticSystem),
    Zero(ZeroCertificate),
}

impl SystemOutcome {
    pub fn value(&self, l: u64) -> Result<Cyclo> {
        match self {
            SystemOutcome::System(s) => s.value(),
            SystemOutcome::Zero(_) => Ok(Cyclo::zero(l)),
        }
    }
}

/// One vertex of G as seen by the system builder.
struct Slot<'a> {
    group: &'a FiniteGroup,
    base: usize,
    rep: Option<&'a CosetRep>,
    /// ⟨γ(y), x⟩ for this vertex's side.
    pair: &'a dyn Fn(usize, usize) -> u64,
}

fn assemble(
    omega: u64,
    slots: &[Slot],
    g: &MultiDigraph,
    edge_form: &dyn Fn(usize, usize, usize, usize) -> u64,
) -> Result<QuadraticSystem> {
    let l = 2 * omega;
    let li = l as i64;
    let mut f = QuadraticForm::new(l, 0);
    let mut vars: Vec<Vec<(usize, usize)>> = Vec::new();
    for s in slots {
        let mut vs = Vec::new();
        if let Some(rep) = s.rep {
            for &(gen, ord) in &rep.gens {
                vs.push((f.add_var(ord), gen));
            }
        }
        vars.push(vs);
    }
    for (v, s) in slots.iter().enumerate() {
        let Some(rep) = s.rep else { continue };
        for (i, &(xi, gi)) in vars[v].iter().enumerate() {
            let ord = s.group.order(gi);
            let mut b = (s.pair)(rep.gamma(gi), gi);
            if ord % 2 == 1 && b * ord % l != 0 {
                b += omega;
            }
            f.add_lin(xi, rep.rho(gi) as i64 - b as i64);
            f.add_quad(xi, xi, b as i64);
            for &(xj, gj) in &vars[v][..i] {
                f.add_quad(xi, xj, 2 * (s.pair)(rep.gamma(gi), gj) as i64);
            }
        }
    }
    for (u, v, mult) in g.edges() {
        let c = 2 * mult as i64 % li;
        let e = |a: usize, b: usize| c * edge_form(u, a, v, b) as i64 % li;
        let (bu, bv) = (slots[u].base, slots[v].base);
        f.add_const(e(bu, bv));
        for &(y, gy) in &vars[v] {
            f.add_lin(y, e(bu, gy));
        }
        for &(x, gx) in &vars[u] {
            f.add_lin(x, e(gx, bv));
            for &(y, gy) in &vars[v] {
                f.add_quad(x, y, e(gx, gy));
            }
        }
    }
    if !f.is_consistent() {
        return Err(Error::Internal(
            "quadratic form over Z_2ω is not consistent".into(),
        ));
    }
    split_crt(&f)
}

/// Splits a consistent form over Z_L into prime-power forms.
fn split_crt(f: &QuadraticForm) -> Result<QuadraticSystem> {
    let l = f.modulus();
    let n = f.var_count();
    let mut forms = Vec::new();
    for (p, q) in prime_power_factors(l) {
        let cof = l / q;
        let a = (1..q.max(2)).find(|&a| a * cof % q == 1 % q).unwrap_or(0);
        let mine: Vec<usize> = (0..n).filter(|&i| f.order(i) % p == 0).collect();
        let mut pos = vec![usize::MAX; n];
        for (k, &i) in mine.iter().enumerate() {
            pos[i] = k;
        }
        let mut fv = QuadraticForm::new(q, 0);
        for &i in &mine {
            fv.add_var(f.order(i));
        }
        let red = |c: u64| (c % q * a % q) as i64;
        for i in 0..n {
            let li = red(f.lin(i));
            for j in i..n {
                let cij = red(f.quad(i, j));
                if pos[i] != usize::MAX && pos[j] != usize::MAX {
                    fv.add_quad(pos[i], pos[j], cij);
                } else if cij != 0 {
                    return Err(Error::Internal(format!(
                        "coefficient across primes survives modulo {q}"
                    )));
                }
            }
            if pos[i] != usize::MAX {
                fv.add_lin(pos[i], li);
            } else if li != 0 {
                return Err(Error::Internal(format!(
                    "coefficient across primes survives modulo {q}"
                )));
            }
        }
        if !fv.is_consistent() {
            return Err(Error::Internal(format!(
                "prime-power form modulo {q} is not consistent"
            )));
        }
        forms.push(fv);
    }
    Ok(QuadraticSystem {
        conductor: l,
        constant: f.constant(),
        forms,
    })
}

/// Quadratic system for Z_{H,𝔘′}(φ, G) where 𝔘′ is the family with ρ_c(0) = 0; pins name group
/// elements (row indices of H).
pub fn build_quadratic_system(
    rep: &GroupRep,
    pins: &Pinning,
    g: &MultiDigraph,
) -> Result<SystemOutcome> {
    let pair = |gg: usize, x: usize| rep.bil[gg][x];
    let mut slots = Vec::new();
    for v in 0..g.vertex_count() {
        match pins.get(&v) {
            Some(&s) => slots.push(Slot {
                group: &rep.group,
                base: s,
                rep: None,
                pair: &pair,
            }),
            None => {
                let c = g.grade(v).rem_euclid(rep.omega as i64) as usize;
                match &rep.classes[c] {
                    Some(cr) => slots.push(Slot {
                        group: &rep.group,
                        base: cr.beta,
                        rep: Some(cr),
                        pair: &pair,
                    }),
                    None => {
                        return Ok(SystemOutcome::Zero(ZeroCertificate {
                            vertex: v,
                            residue: c as u64,
                        }))
                    }
                }
            }
        }
    }
    let edge = |_: usize, a: usize, _: usize, b: usize| rep.bil[a][b];
    Ok(SystemOutcome::System(assemble(
        rep.omega, &slots, g, &edge,
    )?))
}

/// Π_c λ_c^{−n_c} over the free vertices, undoing the ρ_c(0) = 0 normalization.
fn ledger(
    l: u64,
    omega: u64,
    lambda_exp: &dyn Fn(usize, usize) -> u64,
    pins: &Pinning,
    g: &MultiDigraph,
) -> Cyclo {
    let mut e: u64 = 0;
    for v in 0..g.vertex_count() {
        if !pins.contains_key(&v) {
            let c = g.grade(v).rem_euclid(omega as i64) as usize;
            e = (e + l - lambda_exp(v, c) % l) % l;
        }
    }
    Cyclo::root(l, e as i64)
}

/// Z_{H,𝔘}(φ, G) for an H–STD pair represented by `rep`.
pub fn eval_hstd(rep: &GroupRep, pins: &Pinning, g: &MultiDigraph) -> Result<Cyclo> {
    let l = 2 * rep.omega;
    let sys = build_quadratic_system(rep, pins, g)?;
    let lam = |_: usize, c: usize| rep.classes[c].as_ref().map_or(0, |r| r.lambda_exp);
    Ok(ledger(l, rep.omega, &lam, pins, g).mul(&sys.value(l)?))
}

/// Quadratic system for the bipartite Hadamard part with fixed vertex sides.
pub fn build_bipartite_system(
    rep: &BipartiteGroupRep,
    sides: &[Side],
    pins: &Pinning,
    g: &MultiDigraph,
) -> Result<SystemOutcome> {
    let pr = |gg: usize, x: usize| rep.bil[x][gg];
    let pc = |gg: usize, x: usize| rep.bil[gg][x];
    let mut slots = Vec::new();
    for v in 0..g.vertex_count() {
        let (group, classes, pair): (_, _, &dyn Fn(usize, usize) -> u64) = match sides[v] {
            Side::Row => (&rep.row, &rep.row_classes, &pr),
            Side::Col => (&rep.col, &rep.col_classes, &pc),
        };
        match pins.get(&v) {
            Some(&s) => slots.push(Slot {
                group,
                base: s,
                rep: None,
                pair,
            }),
            None => {
                let c = g.grade(v).rem_euclid(rep.omega as i64) as usize;
                match &classes[c] {
                    Some(cr) => slots.push(Slot {
                        group,
                        base: cr.beta,
                        rep: Some(cr),
                        pair,
                    }),
                    None => {
                        return Ok(SystemOutcome::Zero(ZeroCertificate {
                            vertex: v,
                            residue: c as u64,
                        }))
                    }
                }
            }
        }
    }
    let omega = rep.omega;
    for (u, v, _) in g.edges() {
        if sides[u] == sides[v] {
            return Err(Error::Usage(
                "edge inside one side of a bipartite component".into(),
            ));
        }
    }
    let edge = |u: usize, a: usize, _: usize, b: usize| match sides[u] {
        Side::Row => rep.bil[a][b],
        Side::Col => (omega - rep.bil[b][a]) % omega,
    };
    Ok(SystemOutcome::System(assemble(omega, &slots, g, &edge)?))
}

pub fn eval_bipartite_hstd(
    rep: &BipartiteGroupRep,
    sides: &[Side],
    pins: &Pinning,
    g: &MultiDigraph,
) -> Result<Cyclo> {
    let l = 2 * rep.omega;
    let sys = build_bipartite_system(rep, sides, pins, g)?;
    let lam = |v: usize, c: usize| {
        let classes = if sides[v] == Side::Row {
            &rep.row_classes
        } else {
            &rep.col_classes
        };
        classes[c].as_ref().map_or(0, |r| r.lambda_exp)
    };
    Ok(ledger(l, rep.omega, &lam, pins, g).mul(&sys.value(l)?))
}

fn rat_pow(x: &Rat, e: u64) -> Rat {
    // coprime parts stay coprime, so no reduction is needed
    let e = e as usize;
    Rat::new_raw(
        num_traits::pow(x.numer().clone(), e),
        num_traits::pow(x.denom().clone(), e),
    )
}

/// Σ over free vertices / product over pinned ones of val^{deg} (times Δ for free vertices).
fn magnitude_part<'a>(
    l: u64,
    g: &MultiDigraph,
    pins: &Pinning,
    val: &dyn Fn(usize) -> (&'a [Rat], &'a [Vec<Cyclo>]),
    pinned_class: &dyn Fn(usize) -> usize,
) -> Cyclo {
    // vertices sharing (value table, weight row, degree) contribute the same factor
    let mut free: BTreeMap<(usize, usize, u64), (u64, &[Rat], &[Cyclo])> = BTreeMap::new();
    let mut pinned: BTreeMap<(usize, usize, u64), (u64, &Rat)> = BTreeMap::new();
    for v in 0..g.vertex_count() {
        let deg = g.out_degree(v) + g.in_degree(v);
        let (vals, delta) = val(v);
        if pins.contains_key(&v) {
            let c = pinned_class(v);
            pinned
                .entry((vals.as_ptr() as usize, c, deg))
                .or_insert((0, &vals[c]))
                .0 += 1;
        } else {
            let d = &delta[g.grade(v).rem_euclid(delta.len() as i64) as usize];
            free.entry((vals.as_ptr() as usize, d.as_ptr() as usize, deg))
                .or_insert((0, vals, d))
                .0 += 1;
        }
    }
    let mut r = Rat::one();
    for ((_, _, deg), (count, x)) in pinned {
        r *= rat_pow(x, deg * count);
    }
    let mut acc = Cyclo::from_rat(l, &r);
    for ((_, _, deg), (count, vals, d)) in free {
        if acc.is_zero() {
            break;
        }
        let f = vals.iter().zip(d).fold(Cyclo::zero(l), |s, (x, dx)| {
            s.add(&dx.scale(&rat_pow(x, deg)))
        });
        acc = acc.mul(&f.pow(count));
    }
    acc
}

fn two_colouring(g: &MultiDigraph) -> Option<Vec<bool>> {
    let n = g.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for (u, v, _) in g.edges() {
        if u == v {
            return None;
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut col: Vec<Option<bool>> = vec![None; n];
    for s in 0..n {
        if col[s].is_some() {
            continue;
        }
        col[s] = Some(false);
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for &y in &adj[x] {
                match col[y] {
                    None => {
                        col[y] = Some(!col[x].unwrap());
                        q.push_back(y);
                    }
                    Some(c) if c == col[x].unwrap() => return None,
                    _ => {}
                }
            }
        }
    }
    Some(col.into_iter().map(|c| c.unwrap()).collect())
}

/// Z on one connected G with pins already inside this component (as positions in its indices).
fn eval_component(
    plan: &ComponentPlan,
    omega: u64,
    pins: &Pinning,
    g: &MultiDigraph,
) -> Result<Cyclo> {
    let l = 2 * omega;
    match plan {
        ComponentPlan::Isolated { weights, .. } => {
            if g.edge_count() > 0 {
                return Ok(Cyclo::zero(l));
            }
            let mut acc = Cyclo::one(l);
            for v in 0..g.vertex_count() {
                if !pins.contains_key(&v) {
                    acc = acc.mul(&weights[g.grade(v).rem_euclid(omega as i64) as usize]);
                }
            }
            Ok(acc)
        }
        ComponentPlan::NonBipartite { tiles, rep, .. } => {
            let fpi = transfer_factor(&tiles.pi, omega, pins, g, l);
            let mu_of = |v: usize| tiles.index[pins[&v]].0;
            let s = Rat::from_integer(tiles.sign.into()) * &tiles.lambda;
            let zm = magnitude_part(l, g, pins, &|_| (&tiles.v[..], &tiles.delta[..]), &mu_of)
                .scale(&rat_pow(&s, g.edge_count()));
            if zm.is_zero() {
                return Ok(zm);
            }
            let hp: Pinning = pins.iter().map(|(&v, &s)| (v, tiles.index[s].1)).collect();
            Ok(fpi.mul(&zm).mul(&eval_hstd(rep, &hp, g)?))
        }
        ComponentPlan::Bipartite { tiles, rep, .. } => {
            let Some(colour) = two_colouring(g) else {
                return Ok(Cyclo::zero(l));
            };
            let fpi = transfer_factor(&tiles.pi, omega, pins, g, l);
            let mut total = Cyclo::zero(l);
            for flip in [false, true] {
                let sides: Vec<Side> = colour
                    .iter()
                    .map(|&c| if c ^ flip { Side::Col } else { Side::Row })
                    .collect();
                if pins.iter().any(|(&v, &s)| tiles.index[s].0 != sides[v]) {
                    continue;
                }
                let val = |v: usize| match sides[v] {
                    Side::Row => (&tiles.v[..], &tiles.row_delta[..]),
                    Side::Col => (&tiles.w[..], &tiles.col_delta[..]),
                };
                let cls = |v: usize| tiles.index[pins[&v]].1;
                let zm = magnitude_part(l, g, pins, &val, &cls);
                if zm.is_zero() {
                    continue;
                }
                let hp: Pinning = pins.iter().map(|(&v, &s)| (v, tiles.index[s].2)).collect();
                total = total.add(&zm.mul(&eval_bipartite_hstd(rep, &sides, &hp, g)?));
            }
            Ok(fpi.mul(&total))
        }
    }
}

/// Exact Z_{A,𝔇}(φ, G) at conductor 2ω from a plan.
pub fn eval_fast(plan: &EvalPlan, pins: &Pinning, g: &MultiDigraph) -> Result<Cyclo> {
    let l = plan.conductor();
    for (&v, &s) in pins {
        if v >= g.vertex_count() || s >= plan.size {
            return Err(Error::Usage(format!(
                "pin {} -> {} is out of range",
                v + 1,
                s + 1
            )));
        }
    }
    let mut owner = vec![(0, 0); plan.size];
    for (k, c) in plan.components.iter().enumerate() {
        for (p, i) in c.indices().into_iter().enumerate() {
            owner[i] = (k, p);
        }
    }
    let mut acc = Cyclo::one(l);
    for comp in g.components() {
        let h = g.induced(&comp);
        let local: Vec<(usize, usize)> = comp
            .iter()
            .enumerate()
            .filter_map(|(i, v)| pins.get(v).map(|&s| (i, s)))
            .collect();
        let z = if let Some(&(_, s0)) = local.first() {
            let k = owner[s0].0;
            if local.iter().any(|&(_, s)| owner[s].0 != k) {
                Cyclo::zero(l)
            } else {
                let lp: Pinning = local.iter().map(|&(i, s)| (i, owner[s].1)).collect();
                eval_component(&plan.components[k], plan.omega, &lp, &h)?
            }
        } else {
            let mut s = Cyclo::zero(l);
            for c in &plan.components {
                s = s.add(&eval_component(c, plan.omega, &Pinning::new(), &h)?);
            }
            s
        };
        acc = acc.mul(&z);
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat_int;
    use crate::oracle::eval_bruteforce;

    fn real(rows: &[&[i64]], omega: u64) -> HermitianInstance {
        let a: Vec<Vec<PhasedMagnitude>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| {
                        PhasedMagnitude::new(
                            rat_int(x.abs()),
                            if x < 0 { omega as i64 / 2 } else { 0 },
                            omega,
                        )
                    })
                    .collect()
            })
            .collect();
        let n = a.len();
        HermitianInstance::new(omega, a, vec![Rat::one(); n]).unwrap()
    }

    #[test]
    fn classification_examples() {
        let w = classify(&real(&[&[0, 1], &[1, 1]], 2)).unwrap();
        assert_eq!(w.witness().unwrap().tag, HardnessTag::BlockRankAtLeast2);
        let k3 = real(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]], 2);
        assert!(!classify(&k3).unwrap().is_polytime());
        assert!(classify(&real(&[&[1, 1], &[1, -1]], 2))
            .unwrap()
            .is_polytime());
        assert!(classify(&real(&[&[1, 2], &[2, 4]], 2))
            .unwrap()
            .is_polytime());
    }

    #[test]
    fn fourier_systems() {
        let plan = classify(&real(&[&[1, 1], &[1, -1]], 2)).unwrap();
        let plan = plan.plan().unwrap();
        let ComponentPlan::NonBipartite { rep, .. } = &plan.components[0] else {
            panic!()
        };
        let one = MultiDigraph::new(1);
        assert_eq!(
            eval_hstd(rep, &Pinning::new(), &one).unwrap(),
            Cyclo::from_int(4, 2)
        );
        let edge = MultiDigraph::from_edges(2, &[(0, 1)]);
        assert_eq!(
            eval_hstd(rep, &Pinning::new(), &edge).unwrap(),
            Cyclo::from_int(4, 2)
        );
        let pins: Pinning = [(0, 1)].into_iter().collect();
        let inst = real(&[&[1, 1], &[1, -1]], 2);
        assert_eq!(
            eval_fast(plan, &pins, &edge).unwrap(),
            eval_bruteforce(&inst, &pins, &edge).unwrap()
        );
    }

    #[test]
    fn eulerian_triangle() {
        let inst = HermitianInstance::new(
            2,
            real(&[&[1, -1], &[-1, 1]], 2).matrix().to_vec(),
            vec![Rat::new(1.into(), 2.into()); 2],
        )
        .unwrap();
        let d = classify(&inst).unwrap();
        let tri = MultiDigraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(eval_fast(d.plan().unwrap(), &Pinning::new(), &tri)
            .unwrap()
            .is_one());
        let path = MultiDigraph::from_edges(3, &[(0, 1), (1, 2)]);
        assert!(eval_fast(d.plan().unwrap(), &Pinning::new(), &path)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn rank1_closed_form() {
        let ones = vec![Cyclo::one(4); 2];
        let fam = CongruentialWeights::new(2, vec![ones.clone(); 2]);
        let edge = MultiDigraph::from_edges(2, &[(0, 1)]);
        assert_eq!(
            eval_rank1(&ones, &ones, &fam, &Pinning::new(), &edge),
            Cyclo::from_int(4, 4)
        );
    }
}
