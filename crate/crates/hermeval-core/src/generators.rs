//! The classic example instances: Eulerian graphs, S-flows, Potts, independent sets, colourings.

use num_traits::One;

use crate::error::{Error, Result};
use crate::exactalg::{lcm, rat, rat_int, Cyclo, PhasedMagnitude, Rat};
use crate::oracle::{CongruentialWeights, HermitianInstance};

/// U = [[1,−1],[−1,1]] with D = diag(1/2, 1/2): Z(G) = 1 iff every degree is even.
pub fn eulerian() -> HermitianInstance {
    let a = vec![vec![rat_int(1), rat_int(-1)], vec![rat_int(-1), rat_int(1)]];
    HermitianInstance::from_real(2, &a, vec![rat(1, 2); 2]).expect("valid instance")
}

/// J_q + v·I_q with unit weights.
pub fn potts(q: usize, v: i64) -> Result<HermitianInstance> {
    if q == 0 {
        return Err(Error::Usage("potts needs q >= 1".into()));
    }
    if v < -1 {
        return Err(Error::Usage(
            "potts needs v >= -1 so that entries stay real and non-negative".into(),
        ));
    }
    let a: Vec<Vec<Rat>> = (0..q)
        .map(|i| {
            (0..q)
                .map(|j| rat_int(1 + if i == j { v } else { 0 }))
                .collect()
        })
        .collect();
    HermitianInstance::from_real(1, &a, vec![Rat::one(); q])
}

/// [[0,1],[1,1]]: counts independent sets.
pub fn indepset() -> HermitianInstance {
    let a = vec![vec![rat_int(0), rat_int(1)], vec![rat_int(1), rat_int(1)]];
    HermitianInstance::from_real(1, &a, vec![Rat::one(); 2]).expect("valid instance")
}

/// J_q − I_q: counts proper q-colourings.
pub fn clique(q: usize) -> Result<HermitianInstance> {
    if q == 0 {
        return Err(Error::Usage("clique needs q >= 1".into()));
    }
    let a: Vec<Vec<Rat>> = (0..q)
        .map(|i| (0..q).map(|j| rat_int(i64::from(i != j))).collect())
        .collect();
    HermitianInstance::from_real(1, &a, vec![Rat::one(); q])
}

/// Elements of Z_{k_1} ⊕ … ⊕ Z_{k_z} in lexicographic order.
pub fn group_elements(orders: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &k in orders {
        out = out
            .into_iter()
            .flat_map(|e| (0..k).map(move |x| [e.clone(), vec![x]].concat()))
            .collect();
    }
    out
}

/// Character matrix counting S-flows over 𝔊 = ⊕ Z_{k_i}: A_{χ,χ′} = Σ_{g∈S} conj(χ(g))·χ′(g),
/// D = |𝔊|^{−1}·I, with ω = lcm(k_i), doubled when some entry is a negative rational and ω is odd.
pub fn flow(orders: &[u64], s: &[Vec<u64>]) -> Result<HermitianInstance> {
    if orders.is_empty() || orders.contains(&0) {
        return Err(Error::Usage(
            "flow needs at least one cyclic factor of positive order".into(),
        ));
    }
    for g in s {
        if g.len() != orders.len() || g.iter().zip(orders).any(|(x, k)| x >= k) {
            return Err(Error::Usage(format!("element {g:?} is not in the group")));
        }
    }
    let omega = orders.iter().fold(1, |a, &k| lcm(a, k));
    let chars = group_elements(orders);
    let pair = |t: &[u64], g: &[u64]| -> u64 {
        t.iter()
            .zip(g)
            .zip(orders)
            .map(|((a, b), k)| a * b % k * (omega / k))
            .sum::<u64>()
            % omega
    };
    let n = chars.len();
    // sums of characters can be negative rationals, which need ω even
    let l = 2 * omega;
    let z: Vec<Vec<Cyclo>> = chars
        .iter()
        .map(|ti| {
            chars
                .iter()
                .map(|tj| {
                    s.iter().fold(Cyclo::zero(l), |z, g| {
                        let k = (pair(tj, g) + omega - pair(ti, g)) % omega;
                        z.add(&Cyclo::root(l, 2 * k as i64))
                    })
                })
                .collect()
        })
        .collect();
    let omega = if z.iter().flatten().all(|x| x.as_phased(omega).is_some()) {
        omega
    } else {
        l
    };
    let mut a = vec![vec![PhasedMagnitude::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let (mag, ph) = z[i][j].as_phased(omega).ok_or_else(|| {
                Error::Usage(
                    "flow matrix entry is not a rational multiple of a root of unity".into(),
                )
            })?;
            a[i][j] = PhasedMagnitude::new(mag, ph as i64, omega);
        }
    }
    HermitianInstance::new(omega, a, vec![rat(1, n as i64); n])
}

/// A Hermitian matrix paired with a congruential weight family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruentialInstance {
    pub omega: u64,
    pub a: Vec<Vec<PhasedMagnitude>>,
    pub fam: CongruentialWeights,
}

impl CongruentialInstance {
    pub fn matrix_cyclo(&self) -> Vec<Vec<Cyclo>> {
        let l = 2 * self.omega;
        self.a
            .iter()
            .map(|r| r.iter().map(|e| e.to_cyclo(self.omega, l)).collect())
            .collect()
    }
}

/// Every 2×2 Hermitian Hadamard matrix with ±1 entries (ω = 2), each paired with every family with
/// entries in {0} ∪ U_4, D^⟨−c⟩ = conj(D^⟨c⟩) and positive D^⟨0⟩. Since −1 ≡ 1 this forces D^⟨0⟩ = I
/// and D^⟨1⟩ ∈ {0, ±1}²: 4 matrices × 9 families.
pub fn hadamard2_corpus() -> Vec<CongruentialInstance> {
    let omega = 2;
    let vals = [0i64, 1, -1];
    let diags: Vec<Vec<Cyclo>> = vals
        .iter()
        .flat_map(|&x| {
            vals.iter()
                .map(move |&y| vec![Cyclo::from_int(4, x), Cyclo::from_int(4, y)])
        })
        .collect();
    let mut out = Vec::new();
    for a0 in [0u64, 1] {
        for b in [0u64, 1] {
            // [[a, b], [b, −a]] in phase form
            let ph = [[a0, b], [b, (a0 + 1) % 2]];
            let a: Vec<Vec<PhasedMagnitude>> = ph
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|&p| PhasedMagnitude::new(Rat::one(), p as i64, omega))
                        .collect()
                })
                .collect();
            for d1 in &diags {
                let fam = CongruentialWeights::new(omega, vec![vec![Cyclo::one(4); 2], d1.clone()]);
                out.push(CongruentialInstance {
                    omega,
                    a: a.clone(),
                    fam,
                });
            }
        }
    }
    out
}

/// All n×n Hermitian Hadamard matrices with entries in U_ω, as phase matrices, in lexicographic
/// order of their upper triangles.
pub fn hermitian_hadamards(n: usize, omega: u64) -> Vec<Vec<Vec<u64>>> {
    fn orthogonal(a: &[u64], b: &[u64], omega: u64) -> bool {
        let mut counts = vec![num_bigint::BigInt::from(0); omega as usize];
        for (x, y) in a.iter().zip(b) {
            counts[((x + omega - y) % omega) as usize] += 1;
        }
        Cyclo::from_exponent_counts(omega, &counts).is_zero()
    }
    fn fill(i: usize, h: &mut Vec<Vec<u64>>, n: usize, omega: u64, out: &mut Vec<Vec<Vec<u64>>>) {
        if i == n {
            out.push(h.clone());
            return;
        }
        let diag: Vec<u64> = if omega % 2 == 0 {
            vec![0, omega / 2]
        } else {
            vec![0]
        };
        let free = n - i - 1;
        let total = diag.len() as u64 * omega.pow(free as u32);
        for code in 0..total {
            let mut c = code;
            h[i][i] = diag[(c % diag.len() as u64) as usize];
            c /= diag.len() as u64;
            for j in i + 1..n {
                h[i][j] = c % omega;
                h[j][i] = (omega - c % omega) % omega;
                c /= omega;
            }
            if (0..i).all(|k| orthogonal(&h[i], &h[k], omega)) {
                fill(i + 1, h, n, omega, out);
            }
        }
    }
    let mut out = Vec::new();
    fill(0, &mut vec![vec![0; n]; n], n, omega, &mut out);
    out
}

/// Number of S-flows by direct enumeration over edge values with zero net flow at every vertex.
pub fn count_flows(orders: &[u64], s: &[Vec<u64>], g: &crate::graphcore::MultiDigraph) -> u64 {
    let edges: Vec<(usize, usize)> = g
        .edges()
        .flat_map(|(u, v, m)| std::iter::repeat((u, v)).take(m as usize))
        .collect();
    let z = orders.len();
    let n = g.vertex_count();
    let mut count = 0;
    let mut choice = vec![0usize; edges.len()];
    'outer: loop {
        let mut bal = vec![vec![0u64; z]; n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            for i in 0..z {
                let x = s[choice[e]][i];
                bal[u][i] = (bal[u][i] + x) % orders[i];
                bal[v][i] = (bal[v][i] + orders[i] - x) % orders[i];
            }
        }
        if bal.iter().flatten().all(|&x| x == 0) {
            count += 1;
        }
        for c in choice.iter_mut() {
            *c += 1;
            if *c < s.len() {
                continue 'outer;
            }
            *c = 0;
        }
        break;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::{MultiDigraph, Pinning};
    use crate::oracle::eval_bruteforce;

    #[test]
    fn small_matrices() {
        let e = eulerian();
        assert_eq!(e.weights(), &[rat(1, 2), rat(1, 2)]);
        let p = potts(2, 1).unwrap();
        assert_eq!(p.entry(0, 0).magnitude, rat_int(2));
        assert_eq!(p.entry(0, 1).magnitude, rat_int(1));
    }

    #[test]
    fn z3_flow() {
        let f = flow(&[3], &[vec![2]]).unwrap();
        assert_eq!(f.size(), 3);
        assert_eq!(f.entry(0, 1).phase, 2);
        let cyc = MultiDigraph::from_edges(2, &[(0, 1), (1, 0)]);
        assert!(eval_bruteforce(&f, &Pinning::new(), &cyc).unwrap().is_one());
        let edge = MultiDigraph::from_edges(2, &[(0, 1)]);
        assert!(eval_bruteforce(&f, &Pinning::new(), &edge)
            .unwrap()
            .is_zero());
        assert_eq!(count_flows(&[3], &[vec![2]], &cyc), 1);
        // entries 2 and −1 force ω = 6
        let nz = flow(&[3], &[vec![1], vec![2]]).unwrap();
        assert_eq!(nz.omega(), 6);
        let tri = MultiDigraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        let z = eval_bruteforce(&nz, &Pinning::new(), &tri).unwrap();
        assert!(z.eq_value(&Cyclo::from_int(
            1,
            count_flows(&[3], &[vec![1], vec![2]], &tri) as i64
        )));
    }

    #[test]
    fn hermitian_hadamard_counts() {
        // [[a, b], [b̄, −a]] with a = ±1, b ∈ U_4
        assert_eq!(hermitian_hadamards(2, 4).len(), 8);
        assert_eq!(hermitian_hadamards(2, 2).len(), 4);
        assert!(hermitian_hadamards(3, 2).is_empty());
        assert_eq!(hermitian_hadamards(1, 4).len(), 2);
    }

    #[test]
    fn hadamard_corpus_is_hermitian_hadamard() {
        let corpus = hadamard2_corpus();
        assert_eq!(corpus.len(), 36);
        for inst in corpus.iter().step_by(9) {
            let h = inst.matrix_cyclo();
            for i in 0..2 {
                for j in 0..2 {
                    assert_eq!(h[i][j], h[j][i].conj());
                }
            }
            let dot = h[0][0]
                .mul(&h[1][0].conj())
                .add(&h[0][1].mul(&h[1][1].conj()));
            assert!(dot.is_zero());
        }
    }
}
