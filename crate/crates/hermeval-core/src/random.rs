//! Seeded random instances and graphs for tests, benches and `selftest`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactalg::{rat, rat_int, PhasedMagnitude, Rat};
use crate::graphcore::{MultiDigraph, Pinning};
use crate::grouprep::PhaseMatrix;
use crate::oracle::HermitianInstance;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected digraph: a random spanning tree plus extra edges (self-loops allowed) until `slots`
/// edge copies are used; multiplicities stay ≤ `max_mult`.
pub fn random_connected_digraph(
    rng: &mut SeededRng,
    n: usize,
    slots: usize,
    max_mult: u32,
) -> MultiDigraph {
    let mut g = MultiDigraph::new(n);
    let mut used = 0;
    for v in 1..n {
        let u = rng.gen_range(0..v);
        if rng.gen_bool(0.5) {
            g.add_edge(u, v, 1);
        } else {
            g.add_edge(v, u, 1);
        }
        used += 1;
    }
    let mut tries = 0;
    while used < slots && tries < 100 {
        tries += 1;
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if g.multiplicity(u, v) < max_mult {
            g.add_edge(u, v, 1);
            used += 1;
        }
    }
    g
}

/// Pins a random subset of at most `max_pins` vertices to random spins in [m].
pub fn random_pinning(rng: &mut SeededRng, g: &MultiDigraph, m: usize, max_pins: usize) -> Pinning {
    let mut verts: Vec<usize> = (0..g.vertex_count()).collect();
    verts.shuffle(rng);
    let k = rng.gen_range(0..=max_pins.min(verts.len()));
    verts[..k]
        .iter()
        .map(|&v| (v, rng.gen_range(0..m)))
        .collect()
}

/// Random Hermitian instance of size m with phases in Z_ω (not necessarily tractable).
pub fn random_instance(rng: &mut SeededRng, m: usize, omega: u64) -> HermitianInstance {
    let mut a = vec![vec![PhasedMagnitude::zero(); m]; m];
    for i in 0..m {
        for j in i..m {
            let mag = rat_int(rng.gen_range(0..3));
            let ph = if i == j {
                if omega % 2 == 0 && rng.gen_bool(0.5) {
                    omega / 2
                } else {
                    0
                }
            } else {
                rng.gen_range(0..omega)
            };
            a[i][j] = PhasedMagnitude::new(mag, ph as i64, omega);
            a[j][i] = a[i][j].conj(omega);
        }
    }
    let d = (0..m)
        .map(|_| rat(rng.gen_range(1..4), rng.gen_range(1..3)))
        .collect();
    HermitianInstance::new(omega, a, d).expect("Hermitian by construction")
}

/// Non-negative rank-1 instance x·x^T; a zero x_i yields an isolated zero index.
pub fn random_rank1(rng: &mut SeededRng, m: usize) -> HermitianInstance {
    let x: Vec<i64> = (0..m).map(|_| rng.gen_range(0..4)).collect();
    let a: Vec<Vec<Rat>> = x
        .iter()
        .map(|&p| x.iter().map(|&q| rat_int(p * q)).collect())
        .collect();
    let d = (0..m)
        .map(|_| rat(rng.gen_range(1..5), rng.gen_range(1..4)))
        .collect();
    HermitianInstance::from_real(1, &a, d).expect("valid instance")
}

/// Normalized Hermitian Hadamard matrices satisfying the group condition, with phases in Z_ω.
pub fn gc_hadamards(omega: u64) -> Vec<PhaseMatrix> {
    let mut out = vec![vec![vec![0]]];
    if omega % 2 == 0 {
        let h = omega / 2;
        out.push(vec![vec![0, 0], vec![0, h]]);
        out.push(vec![
            vec![0, 0, 0, 0],
            vec![0, h, 0, h],
            vec![0, 0, h, h],
            vec![0, h, h, 0],
        ]);
        out.push(vec![
            vec![0, 0, 0, 0],
            vec![0, 0, h, h],
            vec![0, h, 0, h],
            vec![0, h, h, 0],
        ]);
    }
    out
}

struct Block {
    a: Vec<Vec<PhasedMagnitude>>,
    d: Vec<Rat>,
}

fn distinct_increasing(rng: &mut SeededRng, k: usize) -> Vec<i64> {
    let mut v = Vec::new();
    let mut x = 0;
    for _ in 0..k {
        x += rng.gen_range(1..3);
        v.push(x);
    }
    v
}

fn weight(rng: &mut SeededRng) -> Rat {
    rat(rng.gen_range(1..5), rng.gen_range(1..4))
}

/// conj(Π)·(ς·λ·vv^T ⊗ H)·Π with Π built from per-class phases and a character of the row group.
fn nonbip_block(rng: &mut SeededRng, omega: u64, budget: usize) -> Block {
    let hs: Vec<PhaseMatrix> = gc_hadamards(omega)
        .into_iter()
        .filter(|h| h.len() <= budget)
        .collect();
    let h = hs.choose(rng).unwrap().clone();
    let r = h.len();
    let m = rng.gen_range(1..=budget / r);
    let v = distinct_increasing(rng, m);
    let lambda = rat(1, rng.gen_range(1..3));
    let sign = if omega % 2 == 0 && rng.gen_bool(0.5) {
        omega / 2
    } else {
        0
    };
    let ch = rng.gen_range(0..r);
    let a_mu: Vec<u64> = (0..m).map(|_| rng.gen_range(0..omega)).collect();
    let pi = |x: usize| (a_mu[x / r] + h[ch][x % r]) % omega;
    let delta: Vec<Rat> = (0..m).map(|_| weight(rng)).collect();
    let n = m * r;
    let mut a = vec![vec![PhasedMagnitude::zero(); n]; n];
    for x in 0..n {
        for y in 0..n {
            let mag = &lambda * rat_int(v[x / r] * v[y / r]);
            let ph = sign + h[x % r][y % r] + pi(y) + omega - pi(x);
            a[x][y] = PhasedMagnitude::new(mag, ph as i64, omega);
        }
    }
    Block {
        a,
        d: (0..n).map(|x| delta[x / r].clone()).collect(),
    }
}

/// [[0, B], [B*, 0]] with B = conj(Π_R)·(v w^T ⊗ H)·Π_C.
fn bip_block(rng: &mut SeededRng, omega: u64, budget: usize) -> Block {
    let hs: Vec<PhaseMatrix> = gc_hadamards(omega)
        .into_iter()
        .filter(|h| 2 * h.len() <= budget)
        .collect();
    let h = hs.choose(rng).unwrap().clone();
    let r = h.len();
    let mr = rng.gen_range(1..=budget / r - 1);
    let mc = rng.gen_range(1..=budget / r - mr);
    let v = distinct_increasing(rng, mr);
    let w = distinct_increasing(rng, mc);
    let (hr, hc) = (rng.gen_range(0..r), rng.gen_range(0..r));
    let a_mu: Vec<u64> = (0..mr).map(|_| rng.gen_range(0..omega)).collect();
    let b_nu: Vec<u64> = (0..mc).map(|_| rng.gen_range(0..omega)).collect();
    let pr = |x: usize| (a_mu[x / r] + h[x % r][hc]) % omega;
    let pc = |y: usize| (b_nu[y / r] + h[hr][y % r]) % omega;
    let (nr, nc) = (mr * r, mc * r);
    let n = nr + nc;
    let mut a = vec![vec![PhasedMagnitude::zero(); n]; n];
    for x in 0..nr {
        for y in 0..nc {
            let mag = rat_int(v[x / r] * w[y / r]);
            let ph = h[x % r][y % r] + pc(y) + omega - pr(x);
            a[x][nr + y] = PhasedMagnitude::new(mag, ph as i64, omega);
            a[nr + y][x] = a[x][nr + y].conj(omega);
        }
    }
    let dr: Vec<Rat> = (0..mr).map(|_| weight(rng)).collect();
    let dc: Vec<Rat> = (0..mc).map(|_| weight(rng)).collect();
    let d = (0..nr)
        .map(|x| dr[x / r].clone())
        .chain((0..nc).map(|y| dc[y / r].clone()))
        .collect();
    Block { a, d }
}

/// A tractable instance of size ≤ `max_m`: one or two blocks (non-bipartite tiles or bipartite
/// blocks), an optional twin split, and a random simultaneous permutation.
pub fn random_tractable(rng: &mut SeededRng, max_m: usize, omega: u64) -> HermitianInstance {
    let mut blocks = Vec::new();
    let mut budget = max_m;
    while budget > 0 && (blocks.is_empty() || rng.gen_bool(0.3)) {
        let b = if budget >= 2 && rng.gen_bool(0.4) {
            bip_block(rng, omega, budget)
        } else {
            nonbip_block(rng, omega, budget)
        };
        budget -= b.a.len();
        blocks.push(b);
    }
    let n: usize = blocks.iter().map(|b| b.a.len()).sum();
    let mut a = vec![vec![PhasedMagnitude::zero(); n]; n];
    let mut d = Vec::new();
    let mut off = 0;
    for b in &blocks {
        for (i, row) in b.a.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                a[off + i][off + j] = e.clone();
            }
        }
        d.extend(b.d.iter().cloned());
        off += b.a.len();
    }
    if n < max_m && rng.gen_bool(0.5) {
        // split one index into two twins sharing its weight
        let x = rng.gen_range(0..n);
        let frac = rat(rng.gen_range(1..4), 4);
        let w1 = &d[x] * &frac;
        let w2 = &d[x] - &w1;
        d[x] = w1;
        d.push(w2);
        for row in a.iter_mut() {
            let e = row[x].clone();
            row.push(e);
        }
        let mut last = a[x].clone();
        last[n] = a[x][x].clone();
        a.push(last);
    }
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let inst = HermitianInstance::new(omega, a, d).expect("Hermitian by construction");
    inst.permute(&perm)
}
