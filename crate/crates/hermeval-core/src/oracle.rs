//! Brute-force partition functions: the reference every fast path is checked against.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{fmt_rat, parse_rat, Cyclo, PhasedMagnitude, Rat};
use crate::graphcore::{MultiDigraph, Pinning};

/// Hermitian ω-algebraic matrix A with positive diagonal vertex weights D.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HermitianInstance {
    omega: u64,
    a: Vec<Vec<PhasedMagnitude>>,
    d: Vec<Rat>,
}

impl HermitianInstance {
    pub fn new(omega: u64, a: Vec<Vec<PhasedMagnitude>>, d: Vec<Rat>) -> Result<HermitianInstance> {
        if omega == 0 {
            return Err(Error::Invalid("omega must be positive".into()));
        }
        let m = a.len();
        if m == 0 {
            return Err(Error::Invalid("empty matrix".into()));
        }
        if d.len() != m || a.iter().any(|r| r.len() != m) {
            return Err(Error::Invalid(
                "matrix and weights have inconsistent sizes".into(),
            ));
        }
        for (i, di) in d.iter().enumerate() {
            if !di.is_positive() {
                return Err(Error::Invalid(format!("D_{} must be positive", i + 1)));
            }
        }
        let mut a = a;
        for row in a.iter_mut() {
            for e in row.iter_mut() {
                *e = PhasedMagnitude::new(e.magnitude.clone(), e.phase as i64, omega);
            }
        }
        for i in 0..m {
            for j in 0..m {
                if a[i][j] != a[j][i].conj(omega) {
                    return Err(Error::Invalid(format!(
                        "A is not Hermitian at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(HermitianInstance { omega, a, d })
    }

    /// Instance with all phases 0 built from rational entries.
    pub fn from_real(omega: u64, a: &[Vec<Rat>], d: Vec<Rat>) -> Result<HermitianInstance> {
        let mut rows = Vec::new();
        for row in a {
            let mut r = Vec::new();
            for x in row {
                let phase = if x.is_negative() {
                    if omega % 2 != 0 {
                        return Err(Error::Invalid("negative entry needs even omega".into()));
                    }
                    (omega / 2) as i64
                } else {
                    0
                };
                r.push(PhasedMagnitude::new(x.abs(), phase, omega));
            }
            rows.push(r);
        }
        HermitianInstance::new(omega, rows, d)
    }

    pub fn omega(&self) -> u64 {
        self.omega
    }

    pub fn size(&self) -> usize {
        self.a.len()
    }

    /// The pipeline's global conductor 2ω.
    pub fn conductor(&self) -> u64 {
        2 * self.omega
    }

    pub fn entry(&self, i: usize, j: usize) -> &PhasedMagnitude {
        &self.a[i][j]
    }

    pub fn weight(&self, i: usize) -> &Rat {
        &self.d[i]
    }

    pub fn weights(&self) -> &[Rat] {
        &self.d
    }

    pub fn matrix(&self) -> &[Vec<PhasedMagnitude>] {
        &self.a
    }

    pub fn entry_cyclo(&self, i: usize, j: usize) -> Cyclo {
        self.a[i][j].to_cyclo(self.omega, self.conductor())
    }

    pub fn matrix_cyclo(&self) -> Vec<Vec<Cyclo>> {
        let m = self.size();
        (0..m)
            .map(|i| (0..m).map(|j| self.entry_cyclo(i, j)).collect())
            .collect()
    }

    /// The constant family D^⟨c⟩ = D.
    pub fn constant_family(&self) -> CongruentialWeights {
        let l = self.conductor();
        let d: Vec<Cyclo> = self.d.iter().map(|x| Cyclo::from_rat(l, x)).collect();
        CongruentialWeights::new(self.omega, vec![d; self.omega as usize])
    }

    /// (A_ππ, D_ππ): entry (i, j) of the result is A_{π(i) π(j)}.
    pub fn permute(&self, pi: &[usize]) -> HermitianInstance {
        let m = self.size();
        assert_eq!(pi.len(), m);
        let a = (0..m)
            .map(|i| (0..m).map(|j| self.a[pi[i]][pi[j]].clone()).collect())
            .collect();
        let d = (0..m).map(|i| self.d[pi[i]].clone()).collect();
        HermitianInstance {
            omega: self.omega,
            a,
            d,
        }
    }

    pub fn scale_weights(&self, s: &Rat) -> HermitianInstance {
        assert!(s.is_positive());
        HermitianInstance {
            omega: self.omega,
            a: self.a.clone(),
            d: self.d.iter().map(|x| x * s).collect(),
        }
    }

    /// Principal sub-instance on `idx`.
    pub fn restrict(&self, idx: &[usize]) -> HermitianInstance {
        let a = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.a[i][j].clone()).collect())
            .collect();
        let d = idx.iter().map(|&i| self.d[i].clone()).collect();
        HermitianInstance {
            omega: self.omega,
            a,
            d,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "omega {}", self.omega).unwrap();
        writeln!(s, "size {}", self.size()).unwrap();
        for (i, row) in self.a.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if !e.is_zero() {
                    writeln!(
                        s,
                        "A {} {} {} {}",
                        i + 1,
                        j + 1,
                        fmt_rat(&e.magnitude),
                        e.phase
                    )
                    .unwrap();
                }
            }
        }
        for (i, d) in self.d.iter().enumerate() {
            writeln!(s, "D {} {}", i + 1, fmt_rat(d)).unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<HermitianInstance> {
        let mut omega: Option<u64> = None;
        let mut size: Option<usize> = None;
        let mut a_lines = Vec::new();
        let mut d_lines = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = |msg: &str| Error::Parse(format!("line {ln}: {msg}"));
            let int = |t: &str| {
                t.parse::<u64>()
                    .map_err(|_| bad(&format!("bad integer {t:?}")))
            };
            match (toks[0], toks.len()) {
                ("omega", 2) => omega = Some(int(toks[1])?),
                ("size", 2) => size = Some(int(toks[1])? as usize),
                ("A", 5) => {
                    let k: i64 = toks[4].parse().map_err(|_| bad("bad phase"))?;
                    let r = parse_rat(toks[3]).map_err(|e| bad(&e.to_string()))?;
                    a_lines.push((ln, int(toks[1])? as usize, int(toks[2])? as usize, r, k));
                }
                ("D", 3) => {
                    let r = parse_rat(toks[2]).map_err(|e| bad(&e.to_string()))?;
                    d_lines.push((ln, int(toks[1])? as usize, r));
                }
                _ => return Err(bad(&format!("unrecognized line {line:?}"))),
            }
        }
        let omega = omega.ok_or_else(|| Error::Parse("missing omega line".into()))?;
        let m = size.ok_or_else(|| Error::Parse("missing size line".into()))?;
        if omega == 0 || m == 0 {
            return Err(Error::Parse("omega and size must be positive".into()));
        }
        let mut a = vec![vec![PhasedMagnitude::zero(); m]; m];
        let mut seen = vec![vec![false; m]; m];
        for (ln, i, j, r, k) in a_lines {
            if i == 0 || j == 0 || i > m || j > m {
                return Err(Error::Parse(format!("line {ln}: index out of range")));
            }
            if r.is_negative() {
                return Err(Error::Parse(format!(
                    "line {ln}: magnitudes must be non-negative"
                )));
            }
            if std::mem::replace(&mut seen[i - 1][j - 1], true) {
                return Err(Error::Parse(format!("line {ln}: entry listed twice")));
            }
            a[i - 1][j - 1] = PhasedMagnitude::new(r, k, omega);
        }
        let mut d = vec![Rat::one(); m];
        for (ln, i, r) in d_lines {
            if i == 0 || i > m {
                return Err(Error::Parse(format!("line {ln}: index out of range")));
            }
            d[i - 1] = r;
        }
        HermitianInstance::new(omega, a, d)
    }
}

/// D^⟨c⟩ for c ∈ Z_ω, as Cyclo diagonals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruentialWeights {
    omega: u64,
    family: Vec<Vec<Cyclo>>,
}

impl CongruentialWeights {
    pub fn new(omega: u64, family: Vec<Vec<Cyclo>>) -> CongruentialWeights {
        assert_eq!(family.len(), omega as usize, "one diagonal per residue");
        CongruentialWeights { omega, family }
    }

    pub fn omega(&self) -> u64 {
        self.omega
    }

    pub fn dim(&self) -> usize {
        self.family[0].len()
    }

    /// D^⟨c mod ω⟩.
    pub fn at(&self, c: i64) -> &[Cyclo] {
        &self.family[c.rem_euclid(self.omega as i64) as usize]
    }

    pub fn family(&self) -> &[Vec<Cyclo>] {
        &self.family
    }
}

/// Exact integer accumulator. The caller picks a type wide enough for a bound computed up front,
/// so the fixed-width arithmetic below never wraps.
trait Acc: Clone + Zero {
    fn from_big(b: &BigInt) -> Self;
    fn to_big(&self) -> BigInt;
    fn mul_by(&self, o: &Self) -> Self;
    fn add_to(&mut self, o: &Self);
}

macro_rules! fixed_acc {
    ($t:ty) => {
        impl Acc for $t {
            fn from_big(b: &BigInt) -> $t {
                <$t>::try_from(b).expect("value within the precomputed bound")
            }
            fn to_big(&self) -> BigInt {
                BigInt::from(*self)
            }
            fn mul_by(&self, o: &$t) -> $t {
                self.wrapping_mul(*o)
            }
            fn add_to(&mut self, o: &$t) {
                *self = self.wrapping_add(*o);
            }
        }
    };
}

fixed_acc!(i64);
fixed_acc!(i128);

impl Acc for BigInt {
    fn from_big(b: &BigInt) -> BigInt {
        b.clone()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn mul_by(&self, o: &BigInt) -> BigInt {
        self * o
    }
    fn add_to(&mut self, o: &BigInt) {
        *self += o;
    }
}

/// Instance with magnitudes cleared of denominators.
struct Integral {
    omega: u64,
    num: Vec<Vec<BigInt>>,
    phase: Vec<Vec<u64>>,
    dnum: Vec<BigInt>,
    den_a: BigInt,
    den_d: BigInt,
    /// Bit lengths of the largest numerator in A and in D.
    bits_a: u64,
    bits_d: u64,
}

impl Integral {
    fn new(inst: &HermitianInstance) -> Integral {
        let m = inst.size();
        let mut den_a = BigInt::one();
        for row in &inst.a {
            for e in row {
                den_a = den_a.lcm(e.magnitude.denom());
            }
        }
        let den_d = inst
            .d
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let num: Vec<Vec<BigInt>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        (&inst.a[i][j].magnitude * Rat::from_integer(den_a.clone())).to_integer()
                    })
                    .collect()
            })
            .collect();
        let phase = (0..m)
            .map(|i| (0..m).map(|j| inst.a[i][j].phase).collect())
            .collect();
        let dnum: Vec<BigInt> = inst
            .d
            .iter()
            .map(|x| (x * Rat::from_integer(den_d.clone())).to_integer())
            .collect();
        let bits = |xs: &mut dyn Iterator<Item = &BigInt>| xs.map(|x| x.bits()).max().unwrap_or(0);
        let bits_a = bits(&mut num.iter().flatten());
        let bits_d = bits(&mut dnum.iter());
        Integral {
            omega: inst.omega,
            num,
            phase,
            dnum,
            den_a,
            den_d,
            bits_a,
            bits_d,
        }
    }
}

/// Factor applied when a vertex receives its spin: edges back to already-assigned vertices.
struct Plan {
    back: Vec<Vec<(usize, u32, bool)>>,
    domain: Vec<Option<usize>>,
}

fn plan(m: usize, pins: &Pinning, g: &MultiDigraph) -> Result<Plan> {
    let n = g.vertex_count();
    let mut domain = vec![None; n];
    for (&v, &s) in pins {
        if v >= n {
            return Err(Error::Usage(format!(
                "pinned vertex {} out of range",
                v + 1
            )));
        }
        if s >= m {
            return Err(Error::Usage(format!(
                "pinned spin {} out of range 1..={m}",
                s + 1
            )));
        }
        domain[v] = Some(s);
    }
    let mut back = vec![Vec::new(); n];
    for (u, v, mult) in g.edges() {
        // (other endpoint, multiplicity, edge points from the later vertex)
        if u <= v {
            back[v].push((u, mult, false));
        } else {
            back[u].push((v, mult, true));
        }
    }
    Ok(Plan { back, domain })
}

struct IntDfs<'a, T> {
    m: usize,
    omega: u64,
    pl: &'a Plan,
    /// A_ij^k and k·phase_ij mod ω, indexed by i·m + j, then k.
    pow: &'a [Vec<(T, u64)>],
    dw: &'a [T],
    spin: Vec<usize>,
    buckets: Vec<T>,
}

impl<T: Acc> IntDfs<'_, T> {
    fn rec(&mut self, t: usize, prod: &T, phase: u64) {
        if t == self.pl.domain.len() {
            self.buckets[phase as usize].add_to(prod);
            return;
        }
        let (lo, hi) = match self.pl.domain[t] {
            Some(s) => (s, s + 1),
            None => (0, self.m),
        };
        'spins: for s in lo..hi {
            let mut p = if self.pl.domain[t].is_some() {
                prod.clone()
            } else {
                prod.mul_by(&self.dw[s])
            };
            let mut ph = phase;
            for &(o, mult, rev) in &self.pl.back[t] {
                let so = if o == t { s } else { self.spin[o] };
                let (i, j) = if rev { (s, so) } else { (so, s) };
                let (f, fph) = &self.pow[i * self.m + j][mult as usize];
                if f.is_zero() {
                    continue 'spins;
                }
                p = p.mul_by(f);
                ph += fph;
                if ph >= self.omega {
                    ph -= self.omega;
                }
            }
            if p.is_zero() {
                continue;
            }
            self.spin[t] = s;
            self.rec(t + 1, &p, ph);
        }
    }
}

fn dfs_int<T: Acc>(w: &Integral, pl: &Plan, maxmult: u32) -> Vec<BigInt> {
    let m = w.num.len();
    let mut pow = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let x = T::from_big(&w.num[i][j]);
            let mut v = vec![(T::from_big(&BigInt::one()), 0)];
            for k in 0..maxmult as usize {
                let (p, ph) = &v[k];
                v.push((p.mul_by(&x), (ph + w.phase[i][j]) % w.omega));
            }
            pow.push(v);
        }
    }
    let dw: Vec<T> = w.dnum.iter().map(T::from_big).collect();
    let mut st = IntDfs {
        m,
        omega: w.omega,
        pl,
        pow: &pow,
        dw: &dw,
        spin: vec![0; pl.domain.len()],
        buckets: vec![T::zero(); w.omega as usize],
    };
    st.rec(0, &T::from_big(&BigInt::one()), 0);
    st.buckets.iter().map(T::to_big).collect()
}

/// Exact Z_{A,D}(φ, G) at conductor 2ω.
pub fn eval_bruteforce(
    inst: &HermitianInstance,
    pins: &Pinning,
    g: &MultiDigraph,
) -> Result<Cyclo> {
    BruteForce::new(inst).eval(pins, g)
}

/// `eval_bruteforce` with the instance cleared of denominators once, for many graphs.
pub struct BruteForce {
    w: Integral,
    l: u64,
}

impl BruteForce {
    pub fn new(inst: &HermitianInstance) -> BruteForce {
        BruteForce {
            w: Integral::new(inst),
            l: inst.conductor(),
        }
    }

    pub fn eval(&self, pins: &Pinning, g: &MultiDigraph) -> Result<Cyclo> {
        let w = &self.w;
        let pl = plan(w.num.len(), pins, g)?;
        let maxmult = g.edges().map(|e| e.2).max().unwrap_or(0);
        // every partial product and every bucket sum stays below 2^bound
        let unpinned = pl.domain.iter().filter(|d| d.is_none()).count() as u64;
        let leaves = (usize::BITS - w.num.len().leading_zeros()) as u64 * g.vertex_count() as u64;
        let bound = g.edge_count() * w.bits_a + unpinned * w.bits_d + leaves + 1;
        let buckets = if bound < 63 {
            dfs_int::<i64>(w, &pl, maxmult)
        } else if bound < 127 {
            dfs_int::<i128>(w, &pl, maxmult)
        } else {
            dfs_int::<BigInt>(w, &pl, maxmult)
        };
        let mut counts = vec![BigInt::zero(); self.l as usize];
        for (k, b) in buckets.into_iter().enumerate() {
            counts[2 * k] = b;
        }
        let den = num_traits::pow(w.den_a.clone(), g.edge_count() as usize)
            * num_traits::pow(w.den_d.clone(), unpinned as usize);
        Ok(Cyclo::from_exponent_counts(self.l, &counts).scale(&Rat::new(BigInt::one(), den)))
    }
}

/// Z_{A,𝔇}(φ, G) with vertex weight D^⟨∂(v) mod ω⟩ at every unpinned v.
pub fn eval_bruteforce_cong(
    a: &[Vec<Cyclo>],
    fam: &CongruentialWeights,
    pins: &Pinning,
    g: &MultiDigraph,
) -> Result<Cyclo> {
    BruteForceCong::new(a, fam)?.eval(pins, g)
}

/// `eval_bruteforce_cong` with the group-ring form of the entries computed once.
pub struct BruteForceCong {
    a: Vec<Vec<Cyclo>>,
    fam: CongruentialWeights,
    ring: Option<RingForm>,
}

impl BruteForceCong {
    pub fn new(a: &[Vec<Cyclo>], fam: &CongruentialWeights) -> Result<BruteForceCong> {
        let m = a.len();
        if m == 0 || a.iter().any(|r| r.len() != m) {
            return Err(Error::Usage("matrix must be square and non-empty".into()));
        }
        if fam.dim() != m {
            return Err(Error::Usage(
                "weight family and matrix differ in size".into(),
            ));
        }
        let l = a[0][0].conductor();
        for x in a.iter().flatten().chain(fam.family().iter().flatten()) {
            if x.conductor() != l {
                return Err(Error::ConductorMismatch(l, x.conductor()));
            }
        }
        Ok(BruteForceCong {
            a: a.to_vec(),
            fam: fam.clone(),
            ring: RingForm::new(a, fam),
        })
    }

    pub fn eval(&self, pins: &Pinning, g: &MultiDigraph) -> Result<Cyclo> {
        let pl = plan(self.a.len(), pins, g)?;
        if let Some(z) = self.ring.as_ref().and_then(|r| r.eval(&pl, g)) {
            return Ok(z);
        }
        Ok(cong_cyclo(&self.a, &self.fam, &pl, g))
    }
}

/// Element of the group ring Z[C_L], mapped onto Z[ζ_L] by t ↦ ζ_L; products never need reduction.
type Ring = Vec<i128>;

fn ring_mul(x: &Ring, y: &Ring) -> Option<Ring> {
    let l = x.len();
    let mut out = vec![0i128; l];
    for (i, a) in x.iter().enumerate().filter(|e| *e.1 != 0) {
        for (j, b) in y.iter().enumerate().filter(|e| *e.1 != 0) {
            let k = (i + j) % l;
            out[k] = i128::checked_add(out[k], i128::checked_mul(*a, *b)?)?;
        }
    }
    Some(out)
}

/// den·x in the power basis, padded to length L.
fn ring_of(x: &Cyclo, den: &BigInt) -> Option<Ring> {
    let mut out = vec![0i128; x.conductor() as usize];
    for (k, c) in x.coeffs().iter().enumerate() {
        out[k] = (c * Rat::from_integer(den.clone()))
            .to_integer()
            .to_i128()?;
    }
    Some(out)
}

fn common_den<'a>(xs: impl Iterator<Item = &'a Cyclo>) -> BigInt {
    xs.flat_map(|x| x.coeffs())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

/// Matrix and family scaled to integral group-ring elements.
struct RingForm {
    l: u64,
    omega: i64,
    a: Vec<Ring>,
    fam: Vec<Vec<Ring>>,
    den_a: BigInt,
    den_d: BigInt,
}

impl RingForm {
    fn new(a: &[Vec<Cyclo>], fam: &CongruentialWeights) -> Option<RingForm> {
        let den_a = common_den(a.iter().flatten());
        let den_d = common_den(fam.family().iter().flatten());
        Some(RingForm {
            l: a[0][0].conductor(),
            omega: fam.omega() as i64,
            a: a.iter()
                .flatten()
                .map(|x| ring_of(x, &den_a))
                .collect::<Option<_>>()?,
            fam: fam
                .family()
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|x| ring_of(x, &den_d))
                        .collect::<Option<_>>()
                })
                .collect::<Option<_>>()?,
            den_a,
            den_d,
        })
    }

    /// The congruential sum in i128 arithmetic; None on overflow.
    fn eval(&self, pl: &Plan, g: &MultiDigraph) -> Option<Cyclo> {
        let maxmult = g.edges().map(|e| e.2).max().unwrap_or(0) as usize;
        let mut one = vec![0i128; self.l as usize];
        one[0] = 1;
        let mut pow = Vec::with_capacity(self.a.len());
        for x in &self.a {
            let mut v = vec![one.clone()];
            for k in 0..maxmult {
                v.push(ring_mul(&v[k], x)?);
            }
            pow.push(v);
        }
        let dw: Vec<&[Ring]> = g
            .grades()
            .iter()
            .map(|&c| &self.fam[c.rem_euclid(self.omega) as usize][..])
            .collect();
        let m = pow.len().isqrt();
        let mut st = RingDfs {
            m,
            pl,
            pow: &pow,
            dw: &dw,
            spin: vec![0; pl.domain.len()],
            total: vec![0; self.l as usize],
        };
        st.rec(0, one)?;
        let counts: Vec<BigInt> = st.total.iter().map(|&c| BigInt::from(c)).collect();
        let unpinned = pl.domain.iter().filter(|d| d.is_none()).count();
        let den = num_traits::pow(self.den_a.clone(), g.edge_count() as usize)
            * num_traits::pow(self.den_d.clone(), unpinned);
        Some(Cyclo::from_exponent_counts(self.l, &counts).scale(&Rat::new(BigInt::one(), den)))
    }
}

struct RingDfs<'a> {
    m: usize,
    pl: &'a Plan,
    pow: &'a [Vec<Ring>],
    dw: &'a [&'a [Ring]],
    spin: Vec<usize>,
    total: Ring,
}

impl RingDfs<'_> {
    fn rec(&mut self, t: usize, prod: Ring) -> Option<()> {
        if t == self.pl.domain.len() {
            for (acc, x) in self.total.iter_mut().zip(&prod) {
                *acc = i128::checked_add(*acc, *x)?;
            }
            return Some(());
        }
        let (lo, hi) = match self.pl.domain[t] {
            Some(s) => (s, s + 1),
            None => (0, self.m),
        };
        for s in lo..hi {
            let mut p = match self.pl.domain[t] {
                Some(_) => prod.clone(),
                None => ring_mul(&prod, &self.dw[t][s])?,
            };
            for &(o, mult, rev) in &self.pl.back[t] {
                let so = if o == t { s } else { self.spin[o] };
                let (i, j) = if rev { (s, so) } else { (so, s) };
                p = ring_mul(&p, &self.pow[i * self.m + j][mult as usize])?;
            }
            if p.iter().all(|&x| x == 0) {
                continue;
            }
            self.spin[t] = s;
            self.rec(t + 1, p)?;
        }
        Some(())
    }
}

fn cong_cyclo(a: &[Vec<Cyclo>], fam: &CongruentialWeights, pl: &Plan, g: &MultiDigraph) -> Cyclo {
    let m = a.len();
    let l = a[0][0].conductor();
    let grades = g.grades();
    let n = g.vertex_count();
    let maxmult = g.edges().map(|e| e.2).max().unwrap_or(0);
    let pow: Vec<Vec<Vec<Cyclo>>> = a
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let mut v = vec![Cyclo::one(l)];
                    for k in 0..maxmult as usize {
                        let nx = v[k].mul(x);
                        v.push(nx);
                    }
                    v
                })
                .collect()
        })
        .collect();
    let mut total = Cyclo::zero(l);
    let mut spin = vec![0usize; n];
    // explicit stack of partial products
    let mut stack: Vec<(usize, usize, Cyclo)> = vec![(0, 0, Cyclo::one(l))];
    while let Some((t, next, prod)) = stack.pop() {
        if t == n {
            total = total.add(&prod);
            continue;
        }
        let (lo, hi) = match pl.domain[t] {
            Some(s) => (s, s + 1),
            None => (0, m),
        };
        let s = lo + next;
        if s >= hi {
            continue;
        }
        stack.push((t, next + 1, prod.clone()));
        let mut p = match pl.domain[t] {
            Some(_) => prod,
            None => prod.mul(&fam.at(grades[t])[s]),
        };
        for &(o, mult, rev) in &pl.back[t] {
            if p.is_zero() {
                break;
            }
            let so = if o == t { s } else { spin[o] };
            let (i, j) = if rev { (s, so) } else { (so, s) };
            p = p.mul(&pow[i][j][mult as usize]);
        }
        if p.is_zero() {
            continue;
        }
        spin[t] = s;
        stack.push((t + 1, 0, p));
    }
    total
}

/// N_{A,D}(G, w) for every realized edge-product weight w, ordered by (phase, magnitude).
pub fn count_by_weight(inst: &HermitianInstance, g: &MultiDigraph) -> Vec<(Cyclo, Rat)> {
    let m = inst.size();
    let n = g.vertex_count();
    let pl = plan(m, &Pinning::new(), g).expect("no pins");
    let mut acc: HashMap<(Rat, u64), Rat> = HashMap::new();
    let mut spin = vec![0usize; n];
    loop {
        let mut mag = Rat::one();
        let mut ph = 0u64;
        for (u, v, mult) in g.edges() {
            let e = &inst.a[spin[u]][spin[v]];
            mag *= num_traits::pow(e.magnitude.clone(), mult as usize);
            ph = (ph + e.phase * mult as u64) % inst.omega;
        }
        if mag.is_zero() {
            ph = 0;
        }
        let vw: Rat = spin.iter().map(|&s| inst.d[s].clone()).product();
        *acc.entry((mag, ph)).or_insert_with(Rat::zero) += vw;
        // odometer, last vertex fastest
        let mut t = n;
        loop {
            if t == 0 {
                let _ = pl;
                let mut out: Vec<((Rat, u64), Rat)> = acc.into_iter().collect();
                out.sort_by(|x, y| (x.0 .1, &x.0 .0).cmp(&(y.0 .1, &y.0 .0)));
                return out
                    .into_iter()
                    .map(|((mag, ph), c)| {
                        (
                            PhasedMagnitude::new(mag, ph as i64, inst.omega)
                                .to_cyclo(inst.omega, inst.conductor()),
                            c,
                        )
                    })
                    .collect();
            }
            t -= 1;
            spin[t] += 1;
            if spin[t] < m {
                break;
            }
            spin[t] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, rat_int};

    #[test]
    fn accumulator_widths_agree() {
        use crate::random::{random_connected_digraph, random_instance, random_pinning, seeded};
        use rand::Rng;
        let mut rng = seeded(3);
        for _ in 0..200 {
            let m = rng.gen_range(1..=4);
            let omega = rng.gen_range(1..=4);
            let inst = random_instance(&mut rng, m, omega);
            let n = rng.gen_range(1..=5);
            let g = random_connected_digraph(&mut rng, n, 7, 2);
            let pins = random_pinning(&mut rng, &g, m, 2);
            let (w, pl) = (Integral::new(&inst), plan(m, &pins, &g).unwrap());
            let maxmult = g.edges().map(|e| e.2).max().unwrap_or(0);
            let big = dfs_int::<BigInt>(&w, &pl, maxmult);
            assert_eq!(dfs_int::<i128>(&w, &pl, maxmult), big);
            if big.iter().all(|x| x.bits() < 40) && w.bits_a * g.edge_count() < 40 {
                assert_eq!(dfs_int::<i64>(&w, &pl, maxmult), big);
            }
        }
    }

    #[test]
    fn congruential_ring_path_matches_cyclo_path() {
        use crate::random::{random_connected_digraph, random_instance, random_pinning, seeded};
        use rand::Rng;
        let mut rng = seeded(8);
        for _ in 0..200 {
            let omega = rng.gen_range(1..=4u64);
            let m = rng.gen_range(1..=3);
            let base = random_instance(&mut rng, m, omega);
            let l = base.conductor();
            // arbitrary family entries: rational multiples of roots at conductor 2ω
            let fam: Vec<Vec<Cyclo>> = (0..omega)
                .map(|_| {
                    (0..m)
                        .map(|_| {
                            Cyclo::root(l, rng.gen_range(0..l as i64))
                                .scale(&rat(rng.gen_range(-2..3), rng.gen_range(1..4)))
                        })
                        .collect()
                })
                .collect();
            let fam = CongruentialWeights::new(omega, fam);
            let a = base.matrix_cyclo();
            let n = rng.gen_range(1..=4);
            let g = random_connected_digraph(&mut rng, n, 6, 2);
            let pins = random_pinning(&mut rng, &g, m, 2);
            let pl = plan(m, &pins, &g).unwrap();
            let ring = RingForm::new(&a, &fam).unwrap().eval(&pl, &g).unwrap();
            assert_eq!(ring, cong_cyclo(&a, &fam, &pl, &g));
        }
    }

    fn inst(omega: u64, a: &[&[i64]], d: &[(i64, i64)]) -> HermitianInstance {
        let a: Vec<Vec<Rat>> = a
            .iter()
            .map(|r| r.iter().map(|&x| rat_int(x)).collect())
            .collect();
        HermitianInstance::from_real(omega, &a, d.iter().map(|&(n, dd)| rat(n, dd)).collect())
            .unwrap()
    }

    #[test]
    fn eulerian_triangle() {
        let u = inst(2, &[&[1, -1], &[-1, 1]], &[(1, 2), (1, 2)]);
        let tri = MultiDigraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(eval_bruteforce(&u, &Pinning::new(), &tri).unwrap().is_one());
    }

    #[test]
    fn independent_sets_on_an_edge() {
        let s = inst(1, &[&[0, 1], &[1, 1]], &[(1, 1), (1, 1)]);
        let e = MultiDigraph::from_edges(2, &[(0, 1)]);
        assert_eq!(
            eval_bruteforce(&s, &Pinning::new(), &e).unwrap(),
            Cyclo::from_int(2, 3)
        );
        let w = count_by_weight(&s, &e);
        assert_eq!(
            w,
            vec![(Cyclo::zero(2), rat_int(1)), (Cyclo::one(2), rat_int(3))]
        );
    }

    #[test]
    fn isolated_vertices() {
        let s = inst(2, &[&[0, 1, 2], &[1, 1, -1], &[2, -1, 3]], &[(1, 1); 3]);
        let g = MultiDigraph::new(4);
        assert_eq!(
            eval_bruteforce(&s, &Pinning::new(), &g).unwrap(),
            Cyclo::from_int(4, 81)
        );
        assert_eq!(count_by_weight(&s, &g), vec![(Cyclo::one(4), rat_int(81))]);
    }

    #[test]
    fn congruential_matches_plain() {
        let a = inst(2, &[&[1, -1], &[-1, 2]], &[(1, 2), (3, 1)]);
        let g = MultiDigraph::from_edges(3, &[(0, 1), (1, 2), (1, 2), (2, 2)]);
        let mut pins = Pinning::new();
        pins.insert(2, 1);
        let x = eval_bruteforce(&a, &pins, &g).unwrap();
        let y = eval_bruteforce_cong(&a.matrix_cyclo(), &a.constant_family(), &pins, &g).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn congruential_zero_weight() {
        let a = inst(2, &[&[1, 1], &[1, 1]], &[(1, 1), (1, 1)]);
        let l = a.conductor();
        let fam =
            CongruentialWeights::new(2, vec![vec![Cyclo::one(l); 2], vec![Cyclo::zero(l); 2]]);
        let e = MultiDigraph::from_edges(2, &[(0, 1)]);
        assert!(
            eval_bruteforce_cong(&a.matrix_cyclo(), &fam, &Pinning::new(), &e)
                .unwrap()
                .is_zero()
        );
        let v = MultiDigraph::new(1);
        assert_eq!(
            eval_bruteforce_cong(&a.matrix_cyclo(), &fam, &Pinning::new(), &v).unwrap(),
            Cyclo::from_int(l, 2)
        );
    }

    #[test]
    fn bad_pins() {
        let a = inst(1, &[&[1]], &[(1, 1)]);
        let mut p = Pinning::new();
        p.insert(0, 3);
        assert!(eval_bruteforce(&a, &p, &MultiDigraph::new(1)).is_err());
    }

    #[test]
    fn matrix_text_round_trip() {
        let text = "omega 3\nsize 2\nA 1 1 1/1 0\nA 1 2 1/2 1\nA 2 1 1/2 2\nD 1 1/1\nD 2 3/2\n";
        let i = HermitianInstance::parse(text).unwrap();
        assert_eq!(i.to_text(), text);
        assert!(HermitianInstance::parse("omega 3\nsize 2\nA 1 2 1/2 1\n").is_err());
        assert!(HermitianInstance::parse("omega 2\nsize 1\nD 1 0/1\n").is_err());
    }

    #[test]
    fn big_fallback() {
        let big = rat(1 << 40, 3);
        let a = HermitianInstance::from_real(1, &[vec![big.clone()]], vec![rat_int(1)]).unwrap();
        let mut g = MultiDigraph::new(1);
        g.add_edge(0, 0, 4);
        let z = eval_bruteforce(&a, &Pinning::new(), &g).unwrap();
        assert_eq!(z.as_rat().unwrap(), num_traits::pow(big, 4));
    }
}
