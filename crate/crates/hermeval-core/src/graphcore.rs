//! Directed multigraphs, pinnings and the edge-substitution gadgets.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Partial assignment vertex → spin (both 0-based).
pub type Pinning = BTreeMap<usize, usize>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiDigraph {
    n: usize,
    edges: BTreeMap<(usize, usize), u32>,
}

impl MultiDigraph {
    pub fn new(n: usize) -> MultiDigraph {
        MultiDigraph {
            n,
            edges: BTreeMap::new(),
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> MultiDigraph {
        let mut g = MultiDigraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v, 1);
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize, mult: u32) {
        assert!(u < self.n && v < self.n, "edge endpoint out of range");
        if mult > 0 {
            *self.edges.entry((u, v)).or_insert(0) += mult;
        }
    }

    /// Distinct (u, v, μ_uv) in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.edges.iter().map(|(&(u, v), &m)| (u, v, m))
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        self.edges.get(&(u, v)).copied().unwrap_or(0)
    }

    pub fn edge_count(&self) -> u64 {
        self.edges.values().map(|&m| m as u64).sum()
    }

    pub fn out_degree(&self, v: usize) -> u64 {
        self.edges().filter(|e| e.0 == v).map(|e| e.2 as u64).sum()
    }

    pub fn in_degree(&self, v: usize) -> u64 {
        self.edges().filter(|e| e.1 == v).map(|e| e.2 as u64).sum()
    }

    pub fn grade(&self, v: usize) -> i64 {
        self.out_degree(v) as i64 - self.in_degree(v) as i64
    }

    pub fn grades(&self) -> Vec<i64> {
        let mut g = vec![0i64; self.n];
        for (u, v, m) in self.edges() {
            g[u] += m as i64;
            g[v] -= m as i64;
        }
        g
    }

    pub fn degrees(&self) -> Vec<(u64, u64)> {
        let mut d = vec![(0u64, 0u64); self.n];
        for (u, v, m) in self.edges() {
            d[u].0 += m as u64;
            d[v].1 += m as u64;
        }
        d
    }

    pub fn thicken(&self, p: u32) -> MultiDigraph {
        assert!(p >= 1);
        MultiDigraph {
            n: self.n,
            edges: self.edges.iter().map(|(&k, &m)| (k, m * p)).collect(),
        }
    }

    pub fn stretch(&self, p: u32) -> MultiDigraph {
        assert!(p >= 1);
        let mut g = MultiDigraph::new(self.n);
        for (u, v, m) in self.edges() {
            for _ in 0..m {
                let mut prev = u;
                for _ in 1..p {
                    let w = g.add_vertex();
                    g.add_edge(prev, w, 1);
                    prev = w;
                }
                g.add_edge(prev, v, 1);
            }
        }
        g
    }

    /// Weakly connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let nx = p[c];
                p[c] = r;
                c = nx;
            }
            r
        }
        for (u, v, _) in self.edges() {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Disjoint union; vertices of `other` are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &MultiDigraph) -> MultiDigraph {
        let mut g = self.clone();
        g.n += other.n;
        for (u, v, m) in other.edges() {
            g.add_edge(u + self.n, v + self.n, m);
        }
        g
    }

    /// Subgraph induced on `verts`; vertex `verts[i]` becomes `i`.
    pub fn induced(&self, verts: &[usize]) -> MultiDigraph {
        let mut idx = vec![usize::MAX; self.n];
        for (i, &v) in verts.iter().enumerate() {
            idx[v] = i;
        }
        let mut g = MultiDigraph::new(verts.len());
        for (u, v, m) in self.edges() {
            if idx[u] != usize::MAX && idx[v] != usize::MAX {
                g.add_edge(idx[u], idx[v], m);
            }
        }
        g
    }

    /// Replaces every edge copy e = uv by the gadget Γ_q; fresh vertices in edge order are
    /// v_e, v'_e, v_{e,1}, …, v_{e,2q}.
    pub fn gc_gadget(&self, q: u32) -> MultiDigraph {
        assert!(q >= 1);
        let mut g = MultiDigraph::new(self.n);
        for (u, v, m) in self.edges() {
            for _ in 0..m {
                let ve = g.add_vertex();
                let vpe = g.add_vertex();
                let inner: Vec<usize> = (0..2 * q).map(|_| g.add_vertex()).collect();
                for i in 0..q as usize {
                    let odd = inner[2 * i];
                    let even = inner[2 * i + 1];
                    g.add_edge(u, even, 1);
                    g.add_edge(odd, u, 1);
                    g.add_edge(even, v, 1);
                    g.add_edge(v, odd, 1);
                    g.add_edge(ve, even, 1);
                    g.add_edge(odd, ve, 1);
                    g.add_edge(even, vpe, 1);
                    g.add_edge(vpe, odd, 1);
                }
            }
        }
        g
    }

    /// Replaces every edge copy uv by the Nymphaea Γ_{p,q}.
    pub fn nymphaea_substitute(&self, p: u32, q: u32) -> MultiDigraph {
        assert!(p >= 1 && q >= 1);
        let mut g = MultiDigraph::new(self.n);
        for (u, v, m) in self.edges() {
            for _ in 0..m {
                let z = g.add_vertex();
                let w = g.add_vertex();
                for _ in 0..p {
                    let [ui, bui, vi, bvi, xi, bxi, yi, byi] = [(); 8].map(|_| g.add_vertex());
                    for _ in 0..q {
                        let [uij, buij, vij, bvij] = [(); 4].map(|_| g.add_vertex());
                        for (a, b) in [(u, uij), (yi, uij), (uij, ui), (uij, xi)] {
                            g.add_edge(a, b, 1);
                        }
                        for (a, b) in [(buij, u), (buij, byi), (bui, buij), (bxi, buij)] {
                            g.add_edge(a, b, 1);
                        }
                        for (a, b) in [(vij, v), (vij, yi), (vi, vij), (xi, vij)] {
                            g.add_edge(a, b, 1);
                        }
                        for (a, b) in [(v, bvij), (byi, bvij), (bvij, bvi), (bvij, bxi)] {
                            g.add_edge(a, b, 1);
                        }
                    }
                    for (a, b) in [(xi, z), (w, xi), (z, yi), (yi, w)] {
                        g.add_edge(a, b, 1);
                    }
                    for (a, b) in [(z, bxi), (bxi, w), (byi, z), (w, byi)] {
                        g.add_edge(a, b, 1);
                    }
                }
            }
        }
        g
    }
}

fn parse_index(tok: Option<&str>, what: &str, line: usize) -> Result<usize> {
    let t = tok.ok_or_else(|| Error::Parse(format!("line {line}: missing {what}")))?;
    t.parse::<usize>()
        .map_err(|_| Error::Parse(format!("line {line}: bad {what} {t:?}")))
}

fn one_based(x: usize, n: usize, what: &str, line: usize) -> Result<usize> {
    if x == 0 || x > n {
        return Err(Error::Parse(format!(
            "line {line}: {what} {x} out of range 1..={n}"
        )));
    }
    Ok(x - 1)
}

/// Reads `vertices`, `edge` and `pin` lines (1-based indices, `#` comments).
pub fn parse_graph(text: &str) -> Result<(MultiDigraph, Pinning)> {
    let mut g: Option<MultiDigraph> = None;
    let mut pins = Pinning::new();
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let kw = toks.next().unwrap();
        match kw {
            "vertices" => {
                if g.is_some() {
                    return Err(Error::Parse(format!("line {ln}: repeated vertices line")));
                }
                g = Some(MultiDigraph::new(parse_index(
                    toks.next(),
                    "vertex count",
                    ln,
                )?));
            }
            "edge" | "pin" => {
                let gr = g
                    .as_mut()
                    .ok_or_else(|| Error::Parse(format!("line {ln}: {kw} before vertices")))?;
                let n = gr.vertex_count();
                if kw == "edge" {
                    let u = one_based(parse_index(toks.next(), "vertex", ln)?, n, "vertex", ln)?;
                    let v = one_based(parse_index(toks.next(), "vertex", ln)?, n, "vertex", ln)?;
                    let m = match toks.next() {
                        Some(t) => parse_index(Some(t), "multiplicity", ln)?,
                        None => 1,
                    };
                    if m == 0 {
                        return Err(Error::Parse(format!(
                            "line {ln}: multiplicity must be positive"
                        )));
                    }
                    gr.add_edge(u, v, m as u32);
                } else {
                    let v = one_based(parse_index(toks.next(), "vertex", ln)?, n, "vertex", ln)?;
                    let s = parse_index(toks.next(), "spin", ln)?;
                    if s == 0 {
                        return Err(Error::Parse(format!("line {ln}: spins are 1-based")));
                    }
                    if pins.insert(v, s - 1).is_some() {
                        return Err(Error::Parse(format!("line {ln}: vertex pinned twice")));
                    }
                }
            }
            other => {
                return Err(Error::Parse(format!(
                    "line {ln}: unknown keyword {other:?}"
                )))
            }
        }
        if toks.next().is_some() {
            return Err(Error::Parse(format!("line {ln}: trailing tokens")));
        }
    }
    let g = g.ok_or_else(|| Error::Parse("missing vertices line".into()))?;
    Ok((g, pins))
}

pub fn write_graph(g: &MultiDigraph, pins: &Pinning) -> String {
    let mut s = String::new();
    writeln!(s, "vertices {}", g.vertex_count()).unwrap();
    for (u, v, m) in g.edges() {
        writeln!(s, "edge {} {} {}", u + 1, v + 1, m).unwrap();
    }
    for (v, sp) in pins {
        writeln!(s, "pin {} {}", v + 1, sp + 1).unwrap();
    }
    s
}
