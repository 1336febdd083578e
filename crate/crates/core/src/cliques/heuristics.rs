use rand::seq::IndexedRandom;

use super::{check_nodes, Clique};
use crate::error::Result;
use crate::graph::WeightedGraph;
use crate::seeding::rng_from_seed;

/// Removes the node with the smallest `(induced degree, weight, index)` until
/// the remaining set is complete.
pub fn greedy_shrink(g: &WeightedGraph, nodes: &[usize]) -> Result<Clique> {
    check_nodes(g, nodes)?;
    let mut set: Vec<usize> = nodes.to_vec();
    set.sort_unstable();
    set.dedup();
    let mut degree: Vec<usize> = set.iter().map(|&u| set.iter().filter(|&&v| g.has_edge(u, v)).count()).collect();
    while degree.iter().any(|&d| d + 1 < set.len()) {
        let k = (0..set.len())
            .min_by(|&a, &b| {
                degree[a].cmp(&degree[b]).then(g.weight(set[a]).total_cmp(&g.weight(set[b]))).then(set[a].cmp(&set[b]))
            })
            .expect("non-empty while incomplete");
        let gone = set.remove(k);
        degree.remove(k);
        for (d, &v) in degree.iter_mut().zip(&set) {
            if g.has_edge(gone, v) {
                *d -= 1;
            }
        }
    }
    Ok(Clique::from_sorted(g, set))
}

/// Grows a clique for at most `iterations` steps.
///
/// Each step adds the common neighbour with the largest `(weight, index)`. If
/// there is none, it swaps one member for two adjacent outsiders that are
/// connected to every remaining member, picking uniformly among swaps that do
/// not lower the weight. The search stops early when neither move exists.
pub fn local_search(g: &WeightedGraph, c: &Clique, iterations: usize, seed: u64) -> Result<Clique> {
    let mut set = c.nodes().to_vec();
    check_nodes(g, &set)?;
    let mut rng = rng_from_seed(seed);
    let n = g.node_count();
    for _ in 0..iterations {
        let mut inside = vec![false; n];
        for &v in &set {
            inside[v] = true;
        }
        // misses[v]: members not adjacent to outsider v
        let misses: Vec<usize> = (0..n)
            .map(|v| if inside[v] { usize::MAX } else { set.iter().filter(|&&u| !g.has_edge(u, v)).count() })
            .collect();

        let add =
            (0..n).filter(|&v| misses[v] == 0).max_by(|&a, &b| g.weight(a).total_cmp(&g.weight(b)).then(a.cmp(&b)));
        if let Some(v) = add {
            set.push(v);
            continue;
        }

        let mut swaps: Vec<(usize, usize, usize)> = Vec::new();
        for (k, &u) in set.iter().enumerate() {
            let pool: Vec<usize> = (0..n).filter(|&v| misses[v] == 1 && !g.has_edge(u, v)).collect();
            for (i, &a) in pool.iter().enumerate() {
                for &b in &pool[i + 1..] {
                    if g.has_edge(a, b) && g.weight(a) + g.weight(b) >= g.weight(u) {
                        swaps.push((k, a, b));
                    }
                }
            }
        }
        let Some(&(k, a, b)) = swaps.choose(&mut rng) else { break };
        set.swap_remove(k);
        set.push(a);
        set.push(b);
    }
    set.sort_unstable();
    Ok(Clique::from_sorted(g, set))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> WeightedGraph {
        WeightedGraph::new(vec![1.0; 3], [(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn shrink_examples() {
        let g = triangle();
        assert_eq!(greedy_shrink(&g, &[0, 1, 2]).unwrap().nodes(), &[0, 1, 2]);
        assert!(greedy_shrink(&g, &[]).unwrap().is_empty());

        let g = WeightedGraph::new(vec![1.0; 4], [(1, 2)]).unwrap();
        assert_eq!(greedy_shrink(&g, &[1, 2, 3]).unwrap().nodes(), &[1, 2]);
    }

    #[test]
    fn shrink_breaks_degree_ties_by_weight() {
        // path 0–1–2: ends tie on degree, the lighter one goes
        let g = WeightedGraph::new(vec![2.0, 1.0, 1.5], [(0, 1), (1, 2)]).unwrap();
        assert_eq!(greedy_shrink(&g, &[0, 1, 2]).unwrap().nodes(), &[0, 1]);
    }

    #[test]
    fn search_examples() {
        let g = triangle();
        let c = Clique::new(&g, vec![0, 1]).unwrap();
        assert_eq!(local_search(&g, &c, 5, 0).unwrap().nodes(), &[0, 1, 2]);
        assert_eq!(local_search(&g, &c, 0, 0).unwrap(), c);
        let full = Clique::new(&g, vec![0, 1, 2]).unwrap();
        assert_eq!(local_search(&g, &full, 10, 3).unwrap(), full);
    }

    #[test]
    fn search_swaps_out_of_a_maximal_clique() {
        // {0,1} is maximal; dropping 0 admits the heavier pair 2–3 next to 1
        let g = WeightedGraph::new(vec![1.0, 1.0, 2.0, 2.0], [(0, 1), (1, 2), (1, 3), (2, 3)]).unwrap();
        let c = Clique::new(&g, vec![0, 1]).unwrap();
        let out = local_search(&g, &c, 1, 0).unwrap();
        assert_eq!(out.nodes(), &[1, 2, 3]);
    }
}
