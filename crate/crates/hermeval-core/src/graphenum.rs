//! Enumeration of small connected (di)graphs up to isomorphism.

use std::collections::HashSet;

use crate::graphcore::MultiDigraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphClass {
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Bound on μ_uv for each ordered pair (each unordered pair when undirected).
    pub max_mult: u8,
    pub directed: bool,
    pub loops: bool,
    /// Directed only: allow both u→v and v→u.
    pub antiparallel: bool,
}

impl GraphClass {
    /// Simple undirected graphs; edges are oriented from the smaller to the larger vertex.
    pub fn simple(max_vertices: usize, max_edges: usize) -> GraphClass {
        GraphClass {
            max_vertices,
            max_edges,
            max_mult: 1,
            directed: false,
            loops: false,
            antiparallel: false,
        }
    }

    /// Orientations of simple graphs (no loops, no 2-cycles).
    pub fn oriented(max_vertices: usize, max_edges: usize) -> GraphClass {
        GraphClass {
            max_vertices,
            max_edges,
            max_mult: 1,
            directed: true,
            loops: false,
            antiparallel: false,
        }
    }

    /// Directed multigraphs with loops and antiparallel pairs.
    pub fn multi(max_vertices: usize, max_edges: usize, max_mult: u8) -> GraphClass {
        GraphClass {
            max_vertices,
            max_edges,
            max_mult,
            directed: true,
            loops: true,
            antiparallel: true,
        }
    }
}

/// Row-major multiplicities; symmetric for undirected classes.
type Adj = Vec<u8>;

fn slots(n: usize, class: &GraphClass) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in 0..n {
        for v in 0..n {
            let ok = if u == v {
                class.loops
            } else {
                class.directed || u < v
            };
            if ok {
                out.push((u, v));
            }
        }
    }
    out
}

fn vertex_signature(a: &Adj, n: usize, v: usize) -> (u32, u32, u8) {
    let out: u32 = (0..n)
        .filter(|&w| w != v)
        .map(|w| a[v * n + w] as u32)
        .sum();
    let inn: u32 = (0..n)
        .filter(|&w| w != v)
        .map(|w| a[w * n + v] as u32)
        .sum();
    (out + inn, out, a[v * n + v])
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Lexicographically least relabeling among those ordering vertices by signature.
fn canonical(a: &Adj, n: usize) -> Adj {
    let mut order: Vec<usize> = (0..n).collect();
    let sig: Vec<_> = (0..n).map(|v| vertex_signature(a, n, v)).collect();
    order.sort_by_key(|&v| sig[v]);
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match classes.last_mut() {
            Some(c) if sig[c[0]] == sig[v] => c.push(v),
            _ => classes.push(vec![v]),
        }
    }
    let per_class: Vec<Vec<Vec<usize>>> = classes.iter().map(|c| permutations(c)).collect();
    let mut best: Option<Adj> = None;
    let mut pick = vec![0usize; classes.len()];
    loop {
        // new position i holds old vertex at[i]
        let at: Vec<usize> = pick
            .iter()
            .enumerate()
            .flat_map(|(k, &p)| per_class[k][p].iter().copied())
            .collect();
        let mut b = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                b[i * n + j] = a[at[i] * n + at[j]];
            }
        }
        if best.as_ref().is_none_or(|x| b < *x) {
            best = Some(b);
        }
        let mut k = 0;
        loop {
            if k == pick.len() {
                return best.unwrap();
            }
            pick[k] += 1;
            if pick[k] < per_class[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

fn component_count(a: &Adj, n: usize) -> usize {
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for w in 0..n {
                if !seen[w] && (a[u * n + w] > 0 || a[w * n + u] > 0) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    count
}

fn to_graph(a: &Adj, n: usize, directed: bool) -> MultiDigraph {
    let mut g = MultiDigraph::new(n);
    for u in 0..n {
        for v in if directed { 0 } else { u }..n {
            g.add_edge(u, v, a[u * n + v] as u32);
        }
    }
    g
}

/// Every connected graph of the class with at least one vertex, one per isomorphism class, ordered by
/// (vertices, edges, canonical adjacency).
pub fn connected_graphs(class: &GraphClass) -> Vec<MultiDigraph> {
    let mut out = Vec::new();
    for n in 1..=class.max_vertices {
        let sl = slots(n, class);
        let mut level: Vec<Adj> = vec![vec![0; n * n]];
        for k in 0..=class.max_edges {
            let mut found: Vec<&Adj> = level
                .iter()
                .filter(|a| component_count(a, n) == 1)
                .collect();
            found.sort();
            out.extend(found.into_iter().map(|a| to_graph(a, n, class.directed)));
            if k == class.max_edges {
                break;
            }
            let mut next: HashSet<Adj> = HashSet::new();
            for a in &level {
                for &(u, v) in &sl {
                    if a[u * n + v] >= class.max_mult
                        || (class.directed && !class.antiparallel && u != v && a[v * n + u] > 0)
                    {
                        continue;
                    }
                    let mut b = a.clone();
                    b[u * n + v] += 1;
                    if !class.directed && u != v {
                        b[v * n + u] += 1;
                    }
                    // the remaining edges must still be able to join all components
                    if component_count(&b, n) - 1 > class.max_edges - k - 1 {
                        continue;
                    }
                    next.insert(canonical(&b, n));
                }
            }
            let mut v: Vec<Adj> = next.into_iter().collect();
            v.sort();
            level = v;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_counts() {
        // connected simple graphs on 1..=4 vertices: 1, 1, 2, 6
        assert_eq!(connected_graphs(&GraphClass::simple(4, 6)).len(), 10);
        // connected simple graphs on 5 vertices: 21
        let five = connected_graphs(&GraphClass::simple(5, 10));
        assert_eq!(five.iter().filter(|g| g.vertex_count() == 5).count(), 21);
        // weakly connected oriented graphs on 3 vertices: 5
        let or = connected_graphs(&GraphClass::oriented(3, 3));
        assert_eq!(or.iter().filter(|g| g.vertex_count() == 3).count(), 5);
        // single vertex with up to two loops
        assert_eq!(connected_graphs(&GraphClass::multi(1, 2, 2)).len(), 3);
    }
}
