//! Fixtures shared by the benches in benches/.

use hermeval_core::random::{random_tractable, seeded};
use hermeval_core::{HermitianInstance, MultiDigraph};

/// First seeded tractable instance of exactly size `m` over ω.
pub fn tractable(m: usize, omega: u64, seed: u64) -> HermitianInstance {
    let mut rng = seeded(seed);
    loop {
        let inst = random_tractable(&mut rng, m, omega);
        if inst.size() == m {
            return inst;
        }
    }
}

/// Directed n-cycle plus the chords i → i+2, so every vertex has degree ≥ 3 once n ≥ 4.
pub fn wheel_like(n: usize) -> MultiDigraph {
    let mut g = MultiDigraph::new(n);
    for i in 0..n {
        g.add_edge(i, (i + 1) % n, 1);
        if n >= 4 && i % 2 == 0 {
            g.add_edge(i, (i + 2) % n, 1);
        }
    }
    g
}
