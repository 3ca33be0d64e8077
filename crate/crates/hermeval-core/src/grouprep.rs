//! Group structure of Hadamard tiles: (GC), the representation (R1)-(R5) and affinity.
//!
//! Group elements are identified with row (or column) indices of H. Ω is Z_{2ω}; a value
//! a ∈ Z_ω of the bilinear form enters Ω as 2a.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::exactalg::{prime_power_factors, Cyclo};
use crate::oracle::CongruentialWeights;
use crate::witness::{HardnessTag, HardnessWitness, Verdict};

/// Matrix of exponents k with H_ij = ζ_ω^k.
pub type PhaseMatrix = Vec<Vec<u64>>;

pub fn transpose(h: &PhaseMatrix) -> PhaseMatrix {
    let n = h.len();
    let m = if n == 0 { 0 } else { h[0].len() };
    (0..m).map(|j| (0..n).map(|i| h[i][j]).collect()).collect()
}

/// A finite Abelian group on elements 0..n with a prime-power cyclic basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    add: Vec<Vec<usize>>,
    neg: Vec<usize>,
    zero: usize,
    gens: Vec<(usize, u64)>,
    coords: Vec<Vec<u64>>,
}

impl FiniteGroup {
    /// Group from a complete addition table; None if the table is not an Abelian group.
    pub fn from_table(add: Vec<Vec<usize>>) -> Option<FiniteGroup> {
        let n = add.len();
        let zero = (0..n).find(|&z| (0..n).all(|x| add[z][x] == x))?;
        for a in 0..n {
            for b in 0..n {
                if add[a][b] != add[b][a] {
                    return None;
                }
                for c in 0..n {
                    if add[add[a][b]][c] != add[a][add[b][c]] {
                        return None;
                    }
                }
            }
        }
        let mut neg = vec![0; n];
        for (a, na) in neg.iter_mut().enumerate() {
            *na = (0..n).find(|&b| add[a][b] == zero)?;
        }
        let mut g = FiniteGroup {
            add,
            neg,
            zero,
            gens: Vec::new(),
            coords: Vec::new(),
        };
        let all: Vec<usize> = (0..n).collect();
        g.gens = g.basis_of(&all);
        let mut coords = vec![Vec::new(); n];
        for (e, k) in g.enumerate_span(&g.gens) {
            coords[e] = k;
        }
        g.coords = coords;
        Some(g)
    }

    pub fn size(&self) -> usize {
        self.add.len()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add[a][self.neg[b]]
    }

    pub fn mul(&self, k: u64, a: usize) -> usize {
        let mut acc = self.zero;
        for _ in 0..k % self.order(a).max(1) {
            acc = self.add[acc][a];
        }
        acc
    }

    pub fn order(&self, a: usize) -> u64 {
        let mut k = 1;
        let mut x = a;
        while x != self.zero {
            x = self.add[x][a];
            k += 1;
        }
        k
    }

    /// Cyclic factors (generator, prime-power order).
    pub fn generators(&self) -> &[(usize, u64)] {
        &self.gens
    }

    pub fn orders(&self) -> Vec<u64> {
        self.gens.iter().map(|g| g.1).collect()
    }

    /// Coordinates of `a` in the basis.
    pub fn coords(&self, a: usize) -> &[u64] {
        &self.coords[a]
    }

    pub fn from_coords(&self, k: &[u64]) -> usize {
        self.combine(&self.gens, k)
    }

    pub fn combine(&self, gens: &[(usize, u64)], k: &[u64]) -> usize {
        let mut acc = self.zero;
        for ((g, _), &ki) in gens.iter().zip(k) {
            acc = self.add[acc][self.mul(ki, *g)];
        }
        acc
    }

    /// Every element of the span of `gens` with its coefficient vector.
    pub fn enumerate_span(&self, gens: &[(usize, u64)]) -> Vec<(usize, Vec<u64>)> {
        let mut out = vec![(self.zero, Vec::new())];
        for &(g, o) in gens {
            let mut next = Vec::with_capacity(out.len() * o as usize);
            for (e, k) in &out {
                let mut x = *e;
                for j in 0..o {
                    let mut kk = k.clone();
                    kk.push(j);
                    next.push((x, kk));
                    x = self.add[x][g];
                }
            }
            out = next;
        }
        out
    }

    /// Prime-power cyclic basis of the subgroup `elems` (which must be a subgroup).
    pub fn basis_of(&self, elems: &[usize]) -> Vec<(usize, u64)> {
        let total = elems.len() as u64;
        let mut gens = Vec::new();
        for (p, _) in prime_power_factors(total) {
            let sp: Vec<usize> = elems
                .iter()
                .copied()
                .filter(|&e| prime_power_factors(self.order(e)).iter().all(|f| f.0 == p))
                .collect();
            let mut span = vec![false; self.size()];
            span[self.zero] = true;
            let found = self.backtrack(&sp, &mut span, 1, &mut gens);
            assert!(found, "every finite Abelian p-group has a cyclic basis");
        }
        gens
    }

    fn backtrack(
        &self,
        sp: &[usize],
        span: &mut Vec<bool>,
        have: usize,
        gens: &mut Vec<(usize, u64)>,
    ) -> bool {
        if have == sp.len() {
            return true;
        }
        let mut cands: Vec<(u64, usize)> = sp
            .iter()
            .copied()
            .filter(|&g| {
                let mut x = self.add[self.zero][g];
                while x != self.zero {
                    if span[x] {
                        return false;
                    }
                    x = self.add[x][g];
                }
                true
            })
            .map(|g| (self.order(g), g))
            .collect();
        cands.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut tried = HashSet::new();
        for (o, g) in cands {
            let members: Vec<usize> = (0..self.size()).filter(|&x| span[x]).collect();
            let mut added = Vec::new();
            for &s in &members {
                let mut x = s;
                for _ in 1..o {
                    x = self.add[x][g];
                    if !span[x] {
                        added.push(x);
                    }
                }
            }
            let mut key = added.clone();
            key.sort_unstable();
            if !tried.insert(key) {
                continue;
            }
            for &x in &added {
                span[x] = true;
            }
            gens.push((g, o));
            if self.backtrack(sp, span, have + added.len(), gens) {
                return true;
            }
            gens.pop();
            for &x in &added {
                span[x] = false;
            }
        }
        false
    }
}

/// Group of the rows of H under entrywise product; None if some product is not a row.
fn row_group(h: &PhaseMatrix, omega: u64) -> Verdict<FiniteGroup> {
    let n = h.len();
    let mut add = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let prod: Vec<u64> = h[i]
                .iter()
                .zip(&h[j])
                .map(|(a, b)| (a + b) % omega)
                .collect();
            match (0..n).find(|&k| h[k] == prod) {
                Some(k) => add[i][j] = k,
                None => {
                    return Err(HardnessWitness::new(
                        HardnessTag::GroupConditionFails,
                        vec![i, j],
                        format!("product of rows {} and {} is not a row", i + 1, j + 1),
                    ))
                }
            }
        }
    }
    FiniteGroup::from_table(add).ok_or_else(|| {
        HardnessWitness::new(
            HardnessTag::GroupConditionFails,
            vec![],
            "rows do not form a group",
        )
    })
}

fn distinct_rows(h: &PhaseMatrix, what: &str) -> Result<()> {
    let mut seen = HashSet::new();
    for (i, r) in h.iter().enumerate() {
        if !seen.insert(r) {
            return Err(Error::Usage(format!(
                "{what} {} repeats an earlier one",
                i + 1
            )));
        }
    }
    Ok(())
}

/// (GC): rows and columns are closed under the entrywise product.
pub fn check_group_condition(h: &PhaseMatrix, omega: u64) -> Result<bool> {
    distinct_rows(h, "row")?;
    let ht = transpose(h);
    distinct_rows(&ht, "column")?;
    Ok(row_group(h, omega).is_ok() && row_group(&ht, omega).is_ok())
}

/// Per-residue data of (R3)-(R5) and (AF).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetRep {
    /// Offset β_c: lexicographically least support element.
    pub beta: usize,
    /// Cyclic basis of 𝔊_c.
    pub gens: Vec<(usize, u64)>,
    /// Elements of 𝔊_c, ascending.
    pub members: Vec<usize>,
    /// ρ_c on 𝔊_c in Z_{2ω}, with ρ_c(0) = 0.
    pub rho: Vec<Option<u64>>,
    /// λ_c = ζ_{2ω}^{lambda_exp} rescales D^⟨c⟩ so that ρ_c(0) = 0.
    pub lambda_exp: u64,
    /// γ_c on 𝔊_c, valued in the partner group.
    pub gamma: Vec<Option<usize>>,
}

impl CosetRep {
    pub fn rho(&self, x: usize) -> u64 {
        self.rho[x].expect("element of the support subgroup")
    }

    pub fn gamma(&self, x: usize) -> usize {
        self.gamma[x].expect("element of the support subgroup")
    }
}

/// Support coset of one weight vector: (β, members) or SupportNotCoset.
pub fn support_coset(
    g: &FiniteGroup,
    u: &[Cyclo],
    c: usize,
) -> Verdict<Option<(usize, Vec<usize>)>> {
    let support: Vec<usize> = (0..u.len()).filter(|&i| !u[i].is_zero()).collect();
    if support.is_empty() {
        return Ok(None);
    }
    let beta = *support
        .iter()
        .min_by(|&&a, &&b| g.coords(a).cmp(g.coords(b)))
        .unwrap();
    let mut members: Vec<usize> = support.iter().map(|&s| g.sub(s, beta)).collect();
    members.sort_unstable();
    let set: HashSet<usize> = members.iter().copied().collect();
    for &x in &members {
        for &y in &members {
            if !set.contains(&g.add(x, y)) {
                return Err(HardnessWitness::new(
                    HardnessTag::SupportNotCoset,
                    vec![c],
                    format!("support of weights for residue {c} is not a coset"),
                ));
            }
        }
    }
    Ok(Some((beta, members)))
}

/// (R3)-(R5) data for residue c; γ is left empty until `affinity_check`.
fn coset_base(g: &FiniteGroup, u: &[Cyclo], c: usize, omega: u64) -> Verdict<Option<CosetRep>> {
    let l = 2 * omega;
    let Some((beta, members)) = support_coset(g, u, c)? else {
        return Ok(None);
    };
    let mut raw = vec![None; g.size()];
    for &x in &members {
        let idx = g.add(beta, x);
        let v = &u[idx];
        let k = if v.conductor() == l {
            v.root_exponent()
        } else {
            None
        };
        match k {
            Some(k) => raw[x] = Some(k),
            None => {
                return Err(HardnessWitness::new(
                    HardnessTag::WeightsOutsideU2omega,
                    vec![c, idx],
                    format!(
                        "weight of index {} for residue {c} is not a 2ω-th root of unity",
                        idx + 1
                    ),
                ))
            }
        }
    }
    let r0 = raw[g.zero()].unwrap();
    let lambda_exp = (l - r0) % l;
    let rho: Vec<Option<u64>> = raw.iter().map(|r| r.map(|k| (k + l - r0) % l)).collect();
    let gens = g.basis_of(&members);
    Ok(Some(CosetRep {
        beta,
        gens,
        members,
        rho,
        lambda_exp,
        gamma: Vec::new(),
    }))
}

/// (AF) for one residue: finds γ on the generators of 𝔊_c, extends it additively and verifies
/// the identity on all of 𝔊_c. `pair(g, x)` is the bilinear value γ(y) = g must reproduce
/// against x.
pub fn affinity_check(
    g: &FiniteGroup,
    partner: &FiniteGroup,
    rep: &CosetRep,
    c: usize,
    omega: u64,
    pair: &dyn Fn(usize, usize) -> u64,
) -> Verdict<Vec<Option<usize>>> {
    let l = 2 * omega;
    let rho = &rep.rho;
    let delta = |y: usize, x: usize| -> u64 {
        let v = rho[g.add(y, x)].unwrap() + 2 * l - rho[x].unwrap() - rho[y].unwrap();
        v % l
    };
    let mut gamma_gen = Vec::new();
    for &(y, _) in &rep.gens {
        let found = (0..partner.size()).find(|&cand| {
            rep.members
                .iter()
                .all(|&x| delta(y, x) == 2 * pair(cand, x) % l)
        });
        match found {
            Some(cand) => gamma_gen.push(cand),
            None => {
                return Err(HardnessWitness::new(
                    HardnessTag::AffinityFails,
                    vec![c, y],
                    format!(
                        "no affine correction for generator {} of residue {c}",
                        y + 1
                    ),
                ))
            }
        }
    }
    let mut gamma = vec![None; g.size()];
    for (e, k) in g.enumerate_span(&rep.gens) {
        let img = gamma_gen
            .iter()
            .zip(&k)
            .fold(partner.zero(), |acc, (&gg, &ki)| {
                partner.add(acc, partner.mul(ki, gg))
            });
        gamma[e] = Some(img);
    }
    for &y in &rep.members {
        for &x in &rep.members {
            if delta(y, x) != 2 * pair(gamma[y].unwrap(), x) % l {
                return Err(HardnessWitness::new(
                    HardnessTag::AffinityFails,
                    vec![c, y, x],
                    format!("affinity identity fails for residue {c}"),
                ));
            }
        }
    }
    Ok(gamma)
}

fn classes_for(g: &FiniteGroup, fam: &CongruentialWeights) -> Verdict<Vec<Option<CosetRep>>> {
    (0..fam.omega() as usize)
        .map(|c| coset_base(g, fam.at(c as i64), c, fam.omega()))
        .collect()
}

fn fill_gamma(
    g: &FiniteGroup,
    partner: &FiniteGroup,
    classes: &mut [Option<CosetRep>],
    omega: u64,
    pair: &dyn Fn(usize, usize) -> u64,
) -> Verdict<()> {
    for (c, cl) in classes.iter_mut().enumerate() {
        if let Some(rep) = cl {
            rep.gamma = affinity_check(g, partner, rep, c, omega, pair)?;
        }
    }
    Ok(())
}

/// Representation of a normalized Hermitian Hadamard H with its weight family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRep {
    pub omega: u64,
    pub group: FiniteGroup,
    /// bil[a][b] = exponent of H_ab, i.e. H_{a,−b} = ζ_ω^{⟨a,b⟩} with columns labelled by −b.
    pub bil: Vec<Vec<u64>>,
    /// Indexed by c ∈ Z_ω; None when D^⟨c⟩ = 0.
    pub classes: Vec<Option<CosetRep>>,
}

pub fn abelian_decompose(h: &PhaseMatrix, omega: u64) -> Verdict<FiniteGroup> {
    row_group(h, omega)
}

/// ⟨a, b⟩ table for a Hermitian H with its row group; verifies skew-bilinearity.
pub fn bilinear_form(h: &PhaseMatrix, g: &FiniteGroup, omega: u64) -> Result<Vec<Vec<u64>>> {
    let n = h.len();
    let bil = h.clone();
    for a in 0..n {
        for b in 0..n {
            if (bil[a][b] + bil[b][a]) % omega != 0 {
                return Err(Error::Internal(format!("form not skew at ({a}, {b})")));
            }
            for c in 0..n {
                if bil[g.add(a, b)][c] != (bil[a][c] + bil[b][c]) % omega {
                    return Err(Error::Internal(format!(
                        "form not additive at ({a}, {b}, {c})"
                    )));
                }
            }
        }
    }
    for a in 0..n {
        if omega % g.order(a) != 0 {
            return Err(Error::Internal(format!(
                "element order of row {} does not divide ω",
                a + 1
            )));
        }
    }
    Ok(bil)
}

/// Runs (GC), (R2)-(R5) and (AF) on an H-STD pair.
pub fn build_group_rep(
    h: &PhaseMatrix,
    omega: u64,
    fam: &CongruentialWeights,
) -> Result<Verdict<GroupRep>> {
    distinct_rows(h, "row")?;
    let group = match abelian_decompose(h, omega) {
        Ok(g) => g,
        Err(w) => return Ok(Err(w)),
    };
    if let Err(w) = row_group(&transpose(h), omega) {
        return Ok(Err(w));
    }
    let bil = bilinear_form(h, &group, omega)?;
    let mut classes = match classes_for(&group, fam) {
        Ok(c) => c,
        Err(w) => return Ok(Err(w)),
    };
    let pair = |gg: usize, x: usize| bil[gg][x];
    if let Err(w) = fill_gamma(&group, &group, &mut classes, omega, &pair) {
        return Ok(Err(w));
    }
    Ok(Ok(GroupRep {
        omega,
        group,
        bil,
        classes,
    }))
}

/// Representation of the underlying block H of a bipartite H-STD problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGroupRep {
    pub omega: u64,
    pub row: FiniteGroup,
    pub col: FiniteGroup,
    /// bil[a][b] = exponent of H_ab for row a, column b.
    pub bil: Vec<Vec<u64>>,
    pub row_classes: Vec<Option<CosetRep>>,
    pub col_classes: Vec<Option<CosetRep>>,
}

pub fn build_bipartite_group_rep(
    h: &PhaseMatrix,
    omega: u64,
    row_fam: &CongruentialWeights,
    col_fam: &CongruentialWeights,
) -> Result<Verdict<BipartiteGroupRep>> {
    distinct_rows(h, "row")?;
    let ht = transpose(h);
    distinct_rows(&ht, "column")?;
    let row = match row_group(h, omega) {
        Ok(g) => g,
        Err(w) => return Ok(Err(w)),
    };
    let col = match row_group(&ht, omega) {
        Ok(g) => g,
        Err(w) => return Ok(Err(w)),
    };
    let bil = h.clone();
    for a in 0..row.size() {
        for b in 0..col.size() {
            for x in 0..row.size() {
                if bil[row.add(a, x)][b] != (bil[a][b] + bil[x][b]) % omega {
                    return Err(Error::Internal(
                        "bipartite form not additive in rows".into(),
                    ));
                }
            }
            for y in 0..col.size() {
                if bil[a][col.add(b, y)] != (bil[a][b] + bil[a][y]) % omega {
                    return Err(Error::Internal(
                        "bipartite form not additive in columns".into(),
                    ));
                }
            }
        }
    }
    let (mut row_classes, mut col_classes) =
        match (classes_for(&row, row_fam), classes_for(&col, col_fam)) {
            (Ok(r), Ok(c)) => (r, c),
            (Err(w), _) | (_, Err(w)) => return Ok(Err(w)),
        };
    let pr = |gg: usize, x: usize| bil[x][gg];
    if let Err(w) = fill_gamma(&row, &col, &mut row_classes, omega, &pr) {
        return Ok(Err(w));
    }
    let pc = |gg: usize, x: usize| bil[gg][x];
    if let Err(w) = fill_gamma(&col, &row, &mut col_classes, omega, &pc) {
        return Ok(Err(w));
    }
    Ok(Ok(BipartiteGroupRep {
        omega,
        row,
        col,
        bil,
        row_classes,
        col_classes,
    }))
}

/// The family λ_c · D^⟨c⟩ with ρ_c(0) = 0, and the λ_c themselves.
pub fn normalize_rho(
    fam: &CongruentialWeights,
    classes: &[Option<CosetRep>],
) -> (CongruentialWeights, Vec<Cyclo>) {
    let l = 2 * fam.omega();
    let mut lambdas = Vec::new();
    let mut out = Vec::new();
    for (c, d) in fam.family().iter().enumerate() {
        let lam = match &classes[c] {
            Some(r) => Cyclo::root(l, r.lambda_exp as i64),
            None => Cyclo::one(l),
        };
        out.push(d.iter().map(|x| x.mul(&lam)).collect());
        lambdas.push(lam);
    }
    (CongruentialWeights::new(fam.omega(), out), lambdas)
}
