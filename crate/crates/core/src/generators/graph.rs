//! Simple undirected graphs, power-law random graphs, SNAP edge lists, and
//! the radius-`r` neighborhood set systems built from them.

use std::collections::HashMap;
use std::collections::VecDeque;
use std::io::BufRead;

use rand::seq::SliceRandom;
use rand::Rng as _;
use rand::distr::weighted::WeightedIndex;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::rng;
use crate::system::{Provenance, SetSystem};

/// Undirected simple graph on vertices `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
}

impl Graph {
    /// Builds a graph from an edge list, dropping self-loops and parallel edges.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::arg(format!("edge ({u}, {v}) out of bounds for {n} vertices")));
            }
            if u != v {
                adj[u].push(v as u32);
                adj[v].push(u as u32);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Random graph whose degrees follow `P(c) ∝ c^{-beta}` on `1..n`.
///
/// Target degrees are drawn i.i.d., the stubs are paired uniformly at random
/// (configuration model, dropping one stub when the total is odd), and
/// self-loops and parallel edges are then removed.
pub fn gen_powerlaw_graph(n: usize, beta: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::arg("power-law graph needs n >= 2"));
    }
    if !beta.is_finite() || beta <= 1.0 {
        return Err(Error::arg(format!("power-law exponent must be a finite value > 1, got {beta}")));
    }
    let weights: Vec<f64> = (1..n).map(|c| (c as f64).powf(-beta)).collect();
    let law = WeightedIndex::new(&weights).map_err(|e| Error::arg(format!("degree law: {e}")))?;
    let mut rng = rng::seeded(seed);
    let mut stubs = Vec::new();
    for v in 0..n {
        let degree = rng.sample(&law) + 1;
        stubs.extend(std::iter::repeat_n(v, degree));
    }
    stubs.shuffle(&mut rng);
    if stubs.len() % 2 == 1 {
        stubs.pop();
    }
    Graph::from_edges(n, stubs.chunks_exact(2).map(|p| (p[0], p[1])))
}

/// One range per vertex `x`: the vertices within distance `r` of `x`.
pub fn gen_graph_neighborhood(g: &Graph, r: u32) -> Result<SetSystem> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::arg("neighborhood system needs a nonempty graph"));
    }
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    let mut seen = Vec::new();
    let mut ranges = Vec::with_capacity(n);
    for source in 0..n {
        dist[source] = 0;
        seen.push(source);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            if dist[u] == r {
                continue;
            }
            for &v in g.neighbors(u) {
                let v = v as usize;
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    seen.push(v);
                    queue.push_back(v);
                }
            }
        }
        let mut range = BitSet::new(n);
        for &v in &seen {
            range.insert(v);
            dist[v] = u32::MAX;
        }
        seen.clear();
        ranges.push(range);
    }
    let provenance = Provenance {
        family: "graph-neighborhood".into(),
        params: vec![("vertices".into(), n.to_string()), ("r".into(), r.to_string())],
        points: None,
    };
    Ok(SetSystem::from_bitsets(n, ranges)?.with_provenance(provenance))
}

/// Reads a SNAP-style edge list: one whitespace-separated integer pair per
/// line, `#` comment lines and blank lines ignored.
///
/// Vertex ids are re-indexed densely in order of first appearance.
pub fn load_graph_edgelist(source: impl BufRead) -> Result<Graph> {
    let mut ids: HashMap<i64, usize> = HashMap::new();
    let mut edges = Vec::new();
    for (lineno, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let mut endpoint = || -> Result<usize> {
            let token = fields.next().ok_or_else(|| Error::parse(lineno, "expected two vertex ids"))?;
            let id: i64 = token.parse().map_err(|_| Error::parse(lineno, format!("bad vertex id {token:?}")))?;
            let next = ids.len();
            Ok(*ids.entry(id).or_insert(next))
        };
        let u = endpoint()?;
        let v = endpoint()?;
        if fields.next().is_some() {
            return Err(Error::parse(lineno, "expected exactly two vertex ids"));
        }
        edges.push((u, v));
    }
    Graph::from_edges(ids.len(), edges)
}

/// Average VC-dimension observed for power-law neighborhood systems, for
/// the `(n, beta)` combinations where it has been measured.
pub fn powerlaw_vc_dimension(n: usize, beta: f64) -> Option<f64> {
    const TABLE: [(usize, [f64; 3]); 3] = [(2000, [5.2, 3.8, 3.0]), (4000, [5.8, 4.05, 3.0]), (30000, [6.8, 4.75, 3.0])];
    let col = [2.0, 2.5, 3.0].iter().position(|&b| (b - beta).abs() < 1e-9)?;
    TABLE.iter().find(|(rows, _)| *rows == n).map(|(_, vals)| vals[col])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_simplifies() {
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (1, 1), (1, 2), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn path_neighborhoods() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let s = gen_graph_neighborhood(&g, 1).unwrap();
        let ranges: Vec<Vec<usize>> = s.ranges().iter().map(|r| r.iter().collect()).collect();
        assert_eq!(ranges, vec![vec![0, 1], vec![0, 1, 2], vec![1, 2]]);
    }

    #[test]
    fn radius_zero_is_singletons() {
        let g = gen_powerlaw_graph(50, 2.0, 1).unwrap();
        let s = gen_graph_neighborhood(&g, 0).unwrap();
        for (x, r) in s.ranges().iter().enumerate() {
            assert_eq!(r.iter().collect::<Vec<_>>(), vec![x]);
        }
    }

    #[test]
    fn radius_past_diameter_is_everything() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let s = gen_graph_neighborhood(&g, 4).unwrap();
        assert!(s.ranges().iter().all(|r| r.count() == 5));
        let s = gen_graph_neighborhood(&g, 2).unwrap();
        assert_eq!(s.range(0).iter().collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn degenerate_law_is_a_matching() {
        let g = gen_powerlaw_graph(1000, 1e6, 3).unwrap();
        assert!(g.max_degree() <= 2);
        assert!(g.edge_count() >= 490);
    }

    #[test]
    fn powerlaw_rejects_bad_parameters() {
        assert!(gen_powerlaw_graph(1, 2.0, 0).is_err());
        assert!(gen_powerlaw_graph(10, 1.0, 0).is_err());
        assert!(gen_powerlaw_graph(10, f64::NAN, 0).is_err());
    }

    #[test]
    fn powerlaw_is_simple_symmetric_and_deterministic() {
        let g = gen_powerlaw_graph(500, 2.0, 42).unwrap();
        for v in 0..500 {
            let nb = g.neighbors(v);
            assert!(nb.windows(2).all(|w| w[0] < w[1]));
            assert!(!nb.contains(&(v as u32)));
            for &u in nb {
                assert!(g.neighbors(u as usize).contains(&(v as u32)));
            }
        }
        assert_eq!(g, gen_powerlaw_graph(500, 2.0, 42).unwrap());
    }

    #[test]
    fn load_path() {
        let g = load_graph_edgelist("0 1\n1 2".as_bytes()).unwrap();
        assert_eq!(g, Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap());
    }

    #[test]
    fn load_dedups_and_skips_comments() {
        let g = load_graph_edgelist("# comment\n0 1\n0 1\n1 0\n\n".as_bytes()).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
    }

    #[test]
    fn load_reindexes_in_input_order() {
        let g = load_graph_edgelist("10\t7\n7 3\n".as_bytes()).unwrap();
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn load_reports_line_numbers() {
        let err = load_graph_edgelist("0 1\n# ok\n2 x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = load_graph_edgelist("0 1 2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = load_graph_edgelist("5\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn vc_table() {
        assert_eq!(powerlaw_vc_dimension(2000, 2.5), Some(3.8));
        assert_eq!(powerlaw_vc_dimension(30000, 2.0), Some(6.8));
        assert_eq!(powerlaw_vc_dimension(1234, 2.5), None);
    }
}
