//! From a connected component of A to a Hadamard tile: twin reduction, root-of-unity transfer and
//! the tile decomposition C = ς·vw^T ⊗ H with factored vertex weights.

use std::collections::VecDeque;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{Cyclo, PhasedMagnitude, Rat};
use crate::graphcore::{MultiDigraph, Pinning};
use crate::grouprep::PhaseMatrix;
use crate::oracle::CongruentialWeights;
use crate::witness::{HardnessTag, HardnessWitness, Verdict};

pub type Matrix = Vec<Vec<PhasedMagnitude>>;

/// Weakly connected components of the graph underlying A, each sorted, ordered by least element.
pub fn components(a: &[Vec<PhasedMagnitude>]) -> Vec<Vec<usize>> {
    let m = a.len();
    let mut seen = vec![false; m];
    let mut out = Vec::new();
    for s in 0..m {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for y in 0..m {
                if !seen[y] && (!a[x][y].is_zero() || !a[y][x].is_zero()) {
                    seen[y] = true;
                    comp.push(y);
                    stack.push(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

pub fn submatrix(a: &[Vec<PhasedMagnitude>], idx: &[usize]) -> Matrix {
    idx.iter()
        .map(|&i| idx.iter().map(|&j| a[i][j].clone()).collect())
        .collect()
}

pub fn subfamily(fam: &CongruentialWeights, idx: &[usize]) -> CongruentialWeights {
    let f = fam
        .family()
        .iter()
        .map(|d| idx.iter().map(|&i| d[i].clone()).collect())
        .collect();
    CongruentialWeights::new(fam.omega(), f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Split {
    NonBipartite,
    /// Colour classes; `rows` holds index 0.
    Bipartite {
        rows: Vec<usize>,
        cols: Vec<usize>,
    },
}

/// 2-colouring of the graph underlying a connected A.
pub fn bipartite_split(a: &Matrix) -> Split {
    let m = a.len();
    let mut colour: Vec<Option<bool>> = vec![None; m];
    let mut queue = VecDeque::new();
    for s in 0..m {
        if colour[s].is_some() {
            continue;
        }
        colour[s] = Some(false);
        queue.push_back(s);
        while let Some(x) = queue.pop_front() {
            let cx = colour[x].unwrap();
            for y in 0..m {
                if a[x][y].is_zero() {
                    continue;
                }
                match colour[y] {
                    None => {
                        colour[y] = Some(!cx);
                        queue.push_back(y);
                    }
                    Some(cy) if cy == cx => return Split::NonBipartite,
                    Some(_) => {}
                }
            }
        }
    }
    let rows = (0..m).filter(|&i| colour[i] == Some(false)).collect();
    let cols = (0..m).filter(|&i| colour[i] == Some(true)).collect();
    Split::Bipartite { rows, cols }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwinReduction {
    pub a: Matrix,
    pub fam: CongruentialWeights,
    /// Twin resolution map [m] → [k]; classes are numbered by first occurrence.
    pub tau: Vec<usize>,
}

pub fn twin_reduce(a: &Matrix, fam: &CongruentialWeights) -> TwinReduction {
    let m = a.len();
    let mut reps: Vec<usize> = Vec::new();
    let mut tau = vec![0; m];
    for i in 0..m {
        match reps.iter().position(|&r| a[r] == a[i]) {
            Some(k) => tau[i] = k,
            None => {
                tau[i] = reps.len();
                reps.push(i);
            }
        }
    }
    let k = reps.len();
    let ra = reps
        .iter()
        .map(|&i| reps.iter().map(|&j| a[i][j].clone()).collect())
        .collect();
    let rf = fam
        .family()
        .iter()
        .map(|d| {
            let l = d.first().map_or(1, |x| x.conductor());
            let mut out = vec![Cyclo::zero(l); k];
            for i in 0..m {
                out[tau[i]] = out[tau[i]].add(&d[i]);
            }
            out
        })
        .collect();
    TwinReduction {
        a: ra,
        fam: CongruentialWeights::new(fam.omega(), rf),
        tau,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferResult {
    /// A′ = Π A conj(Π).
    pub a: Matrix,
    /// D′^⟨c⟩ = Π^{−c} D^⟨c⟩.
    pub fam: CongruentialWeights,
}

/// Π = diag(ζ_ω^{pi_i}).
pub fn unity_transfer(a: &Matrix, fam: &CongruentialWeights, pi: &[u64]) -> TransferResult {
    let omega = fam.omega();
    let m = a.len();
    let na = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let e = &a[i][j];
                    PhasedMagnitude::new(
                        e.magnitude.clone(),
                        e.phase as i64 + pi[i] as i64 - pi[j] as i64,
                        omega,
                    )
                })
                .collect()
        })
        .collect();
    let nf = fam
        .family()
        .iter()
        .enumerate()
        .map(|(c, d)| {
            d.iter()
                .zip(pi)
                .map(|(x, &p)| {
                    let l = x.conductor();
                    let k = -((c as u64 * p % omega) as i64) * (l / omega) as i64;
                    x.mul(&Cyclo::root(l, k))
                })
                .collect()
        })
        .collect();
    TransferResult {
        a: na,
        fam: CongruentialWeights::new(omega, nf),
    }
}

/// f_Π(φ) = Π_{v pinned} Π_{φ(v)}^{−∂(v)} at conductor l, so that Z_{A,𝔇}(φ,G) = f_Π(φ)·Z_{A′,𝔇′}(φ,G).
pub fn transfer_factor(pi: &[u64], omega: u64, pins: &Pinning, g: &MultiDigraph, l: u64) -> Cyclo {
    let mut e: i64 = 0;
    for (&v, &s) in pins {
        e -= pi[s] as i64 * g.grade(v);
    }
    Cyclo::root(l, e.rem_euclid(omega as i64) * (l / omega) as i64)
}

/// Which colour class an index of a bipartite component lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Row,
    Col,
}

/// C = ς·vw^T ⊗ H with D^⟨c⟩ = Δ^⟨c⟩ ⊗ U^⟨c⟩, obtained from a connected non-bipartite component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TileDecomposition {
    pub omega: u64,
    pub sign: i8,
    /// Class magnitudes v_1 < … < v_m.
    pub v: Vec<Rat>,
    /// w = λ·v.
    pub lambda: Rat,
    pub h: PhaseMatrix,
    /// Δ^⟨c⟩, indexed [c][μ].
    pub delta: Vec<Vec<Cyclo>>,
    pub u: CongruentialWeights,
    /// Input index ↦ (μ, i).
    pub index: Vec<(usize, usize)>,
    /// Transfer phases Π_ii = ζ_ω^{pi[i]} on input indices.
    pub pi: Vec<u64>,
}

impl TileDecomposition {
    pub fn r(&self) -> usize {
        self.h.len()
    }

    pub fn m(&self) -> usize {
        self.v.len()
    }

    /// The matrix C = ς·vw^T ⊗ H at conductor l, indexed by μ·r + i.
    pub fn tile_matrix(&self, l: u64) -> Vec<Vec<Cyclo>> {
        let r = self.r();
        let n = self.m() * r;
        let s = Rat::from_integer(self.sign.into()) * &self.lambda;
        (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let mag = &s * &self.v[x / r] * &self.v[y / r];
                        Cyclo::scaled_root(
                            l,
                            &mag,
                            (self.h[x % r][y % r] * (l / self.omega)) as i64,
                        )
                    })
                    .collect()
            })
            .collect()
    }
}

/// Bipartite analogue: the off-diagonal block is v w^T ⊗ H.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteTiles {
    pub omega: u64,
    pub v: Vec<Rat>,
    pub w: Vec<Rat>,
    pub h: PhaseMatrix,
    pub row_delta: Vec<Vec<Cyclo>>,
    pub col_delta: Vec<Vec<Cyclo>>,
    pub row_u: CongruentialWeights,
    pub col_u: CongruentialWeights,
    /// Input index ↦ (side, μ, i).
    pub index: Vec<(Side, usize, usize)>,
    pub pi: Vec<u64>,
}

fn rank1_witness(
    mag: &dyn Fn(usize, usize) -> Rat,
    rows: &[usize],
    cols: &[usize],
) -> Option<Vec<usize>> {
    for (x, &i) in rows.iter().enumerate() {
        for &k in &rows[x + 1..] {
            for (y, &j) in cols.iter().enumerate() {
                for &l in &cols[y + 1..] {
                    if mag(i, j) * mag(k, l) != mag(i, l) * mag(k, j) {
                        return Some(vec![i, k, j, l]);
                    }
                }
            }
        }
    }
    None
}

/// Splits `order` (already sorted by key) into runs of equal key.
fn runs(order: &[usize], key: &dyn Fn(usize) -> Rat) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for &i in order {
        match out.last_mut() {
            Some(run) if key(run[0]) == key(i) => run.push(i),
            _ => out.push(vec![i]),
        }
    }
    out
}

fn tile_mismatch(loc: Vec<usize>, detail: impl Into<String>) -> HardnessWitness {
    HardnessWitness::new(HardnessTag::TileMismatch, loc, detail)
}

/// Permutations τ_μ: each row of a class matched to the row of H carrying the same pattern.
fn match_rows(
    h: &PhaseMatrix,
    classes: &[Vec<usize>],
    pattern: &dyn Fn(usize) -> Vec<u64>,
) -> Verdict<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (mu, class) in classes.iter().enumerate() {
        let mut used = vec![false; h.len()];
        for &k in class {
            let p = pattern(k);
            match (0..h.len()).find(|&i| !used[i] && h[i] == p) {
                Some(i) => {
                    used[i] = true;
                    out.push((k, mu, i));
                }
                None => {
                    return Err(tile_mismatch(
                        vec![mu, k],
                        format!("row {} of class {mu} matches no tile row", k + 1),
                    ))
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out.into_iter().map(|(_, mu, i)| (mu, i)).collect())
}

fn check_hadamard(h: &PhaseMatrix, omega: u64) -> Verdict<()> {
    let r = h.len();
    for i in 0..r {
        for k in i + 1..r {
            let mut counts = vec![num_bigint::BigInt::zero(); omega as usize];
            for j in 0..r {
                counts[((h[i][j] + omega - h[k][j]) % omega) as usize] += 1;
            }
            if !Cyclo::from_exponent_counts(omega, &counts).is_zero() {
                return Err(HardnessWitness::new(
                    HardnessTag::NotHadamard,
                    vec![i, k],
                    format!("tile rows {} and {} are not orthogonal", i + 1, k + 1),
                ));
            }
        }
    }
    Ok(())
}

/// Splits weights indexed by (μ, i) into Δ ⊗ U; checks (D2) at c = 0 and (D3) with U in U_{2ω}.
fn factor_weights(
    fam: &CongruentialWeights,
    at: &dyn Fn(usize, usize) -> usize,
    m: usize,
    r: usize,
    side: usize,
) -> Verdict<(Vec<Vec<Cyclo>>, CongruentialWeights)> {
    let omega = fam.omega();
    let l = 2 * omega;
    let d0 = fam.at(0);
    for mu in 0..m {
        let base = &d0[at(mu, 0)];
        let positive = base.as_rat().is_some_and(|x| x.is_positive());
        for i in 0..r {
            if !positive || d0[at(mu, i)] != *base {
                return Err(HardnessWitness::new(
                    HardnessTag::D2Violation,
                    vec![side, mu, i],
                    format!("grade-0 weight varies inside class {mu}"),
                ));
            }
        }
    }
    let mut deltas = Vec::new();
    let mut us = Vec::new();
    for c in 0..omega as usize {
        let d = fam.at(c as i64);
        let pivot = (0..m)
            .flat_map(|mu| (0..r).map(move |i| (mu, i)))
            .find(|&(mu, i)| !d[at(mu, i)].is_zero());
        let Some((m0, i0)) = pivot else {
            deltas.push(vec![Cyclo::zero(l); m]);
            us.push(vec![Cyclo::zero(l); r]);
            continue;
        };
        let p = &d[at(m0, i0)];
        for mu in 0..m {
            for i in 0..r {
                if d[at(mu, i)].mul(p) != d[at(mu, i0)].mul(&d[at(m0, i)]) {
                    return Err(HardnessWitness::new(
                        HardnessTag::D3Violation,
                        vec![side, c, mu, i],
                        format!("weights of residue {c} do not factor over the tiles"),
                    ));
                }
            }
        }
        let pinv = p.inv().expect("pivot is non-zero");
        let u: Vec<Cyclo> = (0..r).map(|i| d[at(m0, i)].mul(&pinv)).collect();
        for (i, ui) in u.iter().enumerate() {
            if !ui.is_zero() && !ui.abs2().is_one() {
                return Err(HardnessWitness::new(
                    HardnessTag::D3Violation,
                    vec![side, c, i],
                    format!(
                        "normalized weight {} of residue {c} is not unimodular",
                        i + 1
                    ),
                ));
            }
        }
        deltas.push((0..m).map(|mu| d[at(mu, i0)].clone()).collect());
        us.push(u);
    }
    for (c, u) in us.iter().enumerate() {
        for (i, ui) in u.iter().enumerate() {
            if !ui.is_zero() && ui.root_exponent().is_none() {
                return Err(HardnessWitness::new(
                    HardnessTag::WeightsOutsideU2omega,
                    vec![side, c, i],
                    format!(
                        "normalized weight {} of residue {c} is not a 2ω-th root of unity",
                        i + 1
                    ),
                ));
            }
        }
    }
    Ok((deltas, CongruentialWeights::new(omega, us)))
}

fn check_family(a: &Matrix, fam: &CongruentialWeights) -> Result<()> {
    let l = 2 * fam.omega();
    if fam.dim() != a.len() {
        return Err(Error::Usage("weight family does not fit the matrix".into()));
    }
    if fam.family().iter().flatten().any(|x| x.conductor() != l) {
        return Err(Error::ConductorMismatch(
            l,
            fam.family()
                .iter()
                .flatten()
                .map(|x| x.conductor())
                .find(|&c| c != l)
                .unwrap(),
        ));
    }
    if a.len() == 0 || components(a).len() != 1 {
        return Err(Error::Usage(
            "component decomposition needs a connected matrix".into(),
        ));
    }
    Ok(())
}

/// Decomposes a connected non-bipartite A with weights 𝔇 (at conductor 2ω) into tiles.
pub fn decompose_to_tiles(
    a: &Matrix,
    fam: &CongruentialWeights,
) -> Result<Verdict<TileDecomposition>> {
    check_family(a, fam)?;
    let omega = fam.omega();
    if a.len() == 1 && a[0][0].is_zero() || bipartite_split(a) != Split::NonBipartite {
        return Err(Error::Usage(
            "tile decomposition needs a non-bipartite component".into(),
        ));
    }
    let tw1 = twin_reduce(a, fam);
    let m1 = tw1.a.len();
    let first = |k: usize| tw1.tau.iter().position(|&t| t == k).unwrap();
    let all: Vec<usize> = (0..m1).collect();
    let mag = |i: usize, j: usize| tw1.a[i][j].magnitude.clone();
    if let Some(loc) = rank1_witness(&mag, &all, &all) {
        let loc = loc.into_iter().map(first).collect();
        return Ok(Err(HardnessWitness::new(
            HardnessTag::BlockRankAtLeast2,
            loc,
            "|A| has a 2×2 minor that is non-zero",
        )));
    }
    let mut order = all.clone();
    order.sort_by(|&i, &j| tw1.a[i][i].magnitude.cmp(&tw1.a[j][j].magnitude));
    let p0 = order[0];
    let sign_exp = tw1.a[p0][p0].phase;
    let sign: i8 = if sign_exp == 0 { 1 } else { -1 };
    let pi1: Vec<u64> = (0..m1)
        .map(|k| (sign_exp + omega - tw1.a[k][p0].phase) % omega)
        .collect();
    let sorted = submatrix(&tw1.a, &order);
    let sorted_fam = subfamily(&tw1.fam, &order);
    let sorted_pi: Vec<u64> = order.iter().map(|&k| pi1[k]).collect();
    let tr = unity_transfer(&sorted, &sorted_fam, &sorted_pi);
    let tw2 = twin_reduce(&tr.a, &tr.fam);
    let c = &tw2.a;
    let m2 = c.len();
    let col0 = |k: usize| c[k][0].magnitude.clone();
    let classes = runs(&(0..m2).collect::<Vec<_>>(), &col0);
    let r = classes[0].len();
    if let Some(mu) = classes.iter().position(|cl| cl.len() != r) {
        return Ok(Err(tile_mismatch(
            vec![mu],
            format!("class {mu} has {} rows, expected {r}", classes[mu].len()),
        )));
    }
    let c0 = &classes[0];
    let ph = |k: usize, l: usize| (c[k][l].phase + omega - sign_exp) % omega;
    let h: PhaseMatrix = c0
        .iter()
        .map(|&k| c0.iter().map(|&l| ph(k, l)).collect())
        .collect();
    let pattern = |k: usize| c0.iter().map(|&l| ph(k, l)).collect::<Vec<u64>>();
    let pos = match match_rows(&h, &classes, &pattern) {
        Ok(p) => p,
        Err(w) => return Ok(Err(w)),
    };
    for k in 0..m2 {
        for l in 0..m2 {
            if c[k][l].is_zero() || ph(k, l) != h[pos[k].1][pos[l].1] {
                return Ok(Err(tile_mismatch(
                    vec![k, l],
                    "tile entry differs from the reference tile",
                )));
            }
        }
    }
    if let Err(w) = check_hadamard(&h, omega) {
        return Ok(Err(w));
    }
    let mut inv_pos = vec![vec![0; r]; classes.len()];
    for (k, &(mu, i)) in pos.iter().enumerate() {
        inv_pos[mu][i] = k;
    }
    let at = |mu: usize, i: usize| inv_pos[mu][i];
    let (delta, u) = match factor_weights(&tw2.fam, &at, classes.len(), r, 0) {
        Ok(x) => x,
        Err(w) => return Ok(Err(w)),
    };
    let v: Vec<Rat> = classes.iter().map(|cl| col0(cl[0])).collect();
    let lambda = Rat::one() / col0(0);
    let mut sorted_pos = vec![0; m1];
    for (s, &k) in order.iter().enumerate() {
        sorted_pos[k] = s;
    }
    let index = tw1
        .tau
        .iter()
        .map(|&k| pos[tw2.tau[sorted_pos[k]]])
        .collect();
    let pi = tw1.tau.iter().map(|&k| pi1[k]).collect();
    Ok(Ok(TileDecomposition {
        omega,
        sign,
        v,
        lambda,
        h,
        delta,
        u,
        index,
        pi,
    }))
}

/// Decomposes a connected bipartite A with weights 𝔇 (at conductor 2ω).
pub fn decompose_bipartite(
    a: &Matrix,
    fam: &CongruentialWeights,
) -> Result<Verdict<BipartiteTiles>> {
    check_family(a, fam)?;
    let omega = fam.omega();
    if a.len() == 1 {
        return Err(Error::Usage(
            "a single vertex is not a bipartite component".into(),
        ));
    }
    let tw1 = twin_reduce(a, fam);
    let first = |k: usize| tw1.tau.iter().position(|&t| t == k).unwrap();
    let Split::Bipartite { rows, cols } = bipartite_split(&tw1.a) else {
        return Err(Error::Usage(
            "bipartite decomposition needs a bipartite component".into(),
        ));
    };
    let mag = |i: usize, j: usize| tw1.a[i][j].magnitude.clone();
    if let Some(loc) = rank1_witness(&mag, &rows, &cols) {
        let loc = loc.into_iter().map(first).collect();
        return Ok(Err(HardnessWitness::new(
            HardnessTag::BlockRankAtLeast2,
            loc,
            "underlying block of |A| has a 2×2 minor that is non-zero",
        )));
    }
    let mut rs = rows.clone();
    rs.sort_by(|&i, &j| mag(i, cols[0]).cmp(&mag(j, cols[0])));
    let mut cs = cols.clone();
    cs.sort_by(|&i, &j| mag(rows[0], i).cmp(&mag(rows[0], j)));
    let (r0, c0) = (rs[0], cs[0]);
    let m1 = tw1.a.len();
    let mut pi1 = vec![0; m1];
    for &k in &rs {
        pi1[k] = (omega - tw1.a[k][c0].phase) % omega;
    }
    for &l in &cs {
        pi1[l] = (tw1.a[r0][l].phase + omega - tw1.a[r0][c0].phase) % omega;
    }
    let order: Vec<usize> = rs.iter().chain(&cs).copied().collect();
    let sorted = submatrix(&tw1.a, &order);
    let sorted_fam = subfamily(&tw1.fam, &order);
    let sorted_pi: Vec<u64> = order.iter().map(|&k| pi1[k]).collect();
    let tr = unity_transfer(&sorted, &sorted_fam, &sorted_pi);
    let tw2 = twin_reduce(&tr.a, &tr.fam);
    let c = &tw2.a;
    let n_rows = tw2.tau[rs.len() - 1] + 1;
    let m2 = c.len();
    let row_idx: Vec<usize> = (0..n_rows).collect();
    let col_idx: Vec<usize> = (n_rows..m2).collect();
    let (rr, cc) = (0, n_rows);
    let row_classes = runs(&row_idx, &|k| c[k][cc].magnitude.clone());
    let col_classes = runs(&col_idx, &|l| c[rr][l].magnitude.clone());
    let r = row_classes[0].len();
    for (side, cls) in [(0, &row_classes), (1, &col_classes)] {
        if let Some(mu) = cls.iter().position(|cl| cl.len() != r) {
            return Ok(Err(tile_mismatch(
                vec![side, mu],
                format!("class {mu} has {} members, expected {r}", cls[mu].len()),
            )));
        }
    }
    let (rc0, cc0) = (&row_classes[0], &col_classes[0]);
    let h: PhaseMatrix = rc0
        .iter()
        .map(|&k| cc0.iter().map(|&l| c[k][l].phase).collect())
        .collect();
    let rpat = |k: usize| cc0.iter().map(|&l| c[k][l].phase).collect::<Vec<u64>>();
    let ht = crate::grouprep::transpose(&h);
    let cpat = |l: usize| rc0.iter().map(|&k| c[k][l].phase).collect::<Vec<u64>>();
    let rpos = match match_rows(&h, &row_classes, &rpat) {
        Ok(p) => p,
        Err(w) => return Ok(Err(w)),
    };
    let cpos_raw = match match_rows(&ht, &col_classes, &cpat) {
        Ok(p) => p,
        Err(w) => {
            return Ok(Err(HardnessWitness {
                location: [vec![1], w.location].concat(),
                ..w
            }))
        }
    };
    // match_rows indexes by position in the flattened class list; columns start at n_rows
    let cpos = |l: usize| cpos_raw[l - n_rows];
    for k in 0..n_rows {
        for l in n_rows..m2 {
            if c[k][l].is_zero() || c[k][l].phase != h[rpos[k].1][cpos(l).1] {
                return Ok(Err(tile_mismatch(
                    vec![k, l],
                    "block entry differs from the reference tile",
                )));
            }
        }
    }
    if let Err(w) = check_hadamard(&h, omega) {
        return Ok(Err(w));
    }
    let mut rinv = vec![vec![0; r]; row_classes.len()];
    for (k, &(mu, i)) in rpos.iter().enumerate() {
        rinv[mu][i] = k;
    }
    let mut cinv = vec![vec![0; r]; col_classes.len()];
    for l in n_rows..m2 {
        let (nu, j) = cpos(l);
        cinv[nu][j] = l;
    }
    let (row_delta, row_u) =
        match factor_weights(&tw2.fam, &|mu, i| rinv[mu][i], row_classes.len(), r, 0) {
            Ok(x) => x,
            Err(w) => return Ok(Err(w)),
        };
    let (col_delta, col_u) =
        match factor_weights(&tw2.fam, &|nu, j| cinv[nu][j], col_classes.len(), r, 1) {
            Ok(x) => x,
            Err(w) => return Ok(Err(w)),
        };
    let base = c[rr][cc].magnitude.clone();
    let v: Vec<Rat> = row_classes
        .iter()
        .map(|cl| c[cl[0]][cc].magnitude.clone())
        .collect();
    let w: Vec<Rat> = col_classes
        .iter()
        .map(|cl| &c[rr][cl[0]].magnitude / &base)
        .collect();
    let mut sorted_pos = vec![0; m1];
    for (s, &k) in order.iter().enumerate() {
        sorted_pos[k] = s;
    }
    let index = tw1
        .tau
        .iter()
        .map(|&k| {
            let t = tw2.tau[sorted_pos[k]];
            if t < n_rows {
                (Side::Row, rpos[t].0, rpos[t].1)
            } else {
                let (nu, j) = cpos(t);
                (Side::Col, nu, j)
            }
        })
        .collect();
    let pi = tw1.tau.iter().map(|&k| pi1[k]).collect();
    Ok(Ok(BipartiteTiles {
        omega,
        v,
        w,
        h,
        row_delta,
        col_delta,
        row_u,
        col_u,
        index,
        pi,
    }))
}
