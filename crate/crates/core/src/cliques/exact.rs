use super::Clique;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Largest graph accepted by the exact oracle.
pub const BRON_KERBOSCH_GUARD: usize = 40;

/// All maximal cliques, Tomita pivoting, sorted by node list.
pub fn bron_kerbosch(g: &WeightedGraph) -> Result<Vec<Clique>> {
    let n = g.node_count();
    if n > BRON_KERBOSCH_GUARD {
        return Err(Error::Guard { count: n as u128, limit: BRON_KERBOSCH_GUARD as u128 });
    }
    let adj: Vec<u64> = (0..n).map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u)).collect();
    let mut out = Vec::new();
    expand(&adj, 0, (1u64 << n) - 1, 0, &mut out);
    let mut cliques: Vec<Clique> = out.into_iter().map(|r| Clique::from_sorted(g, bits(r).collect())).collect();
    cliques.sort_by(|a, b| a.nodes().cmp(b.nodes()));
    Ok(cliques)
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            v
        })
    })
}

fn expand(adj: &[u64], r: u64, p: u64, x: u64, out: &mut Vec<u64>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let pivot = bits(p | x).max_by_key(|&u| (p & adj[u]).count_ones()).expect("p non-empty");
    let (mut p, mut x) = (p, x);
    for v in bits(p & !adj[pivot]) {
        expand(adj, r | 1 << v, p & adj[v], x & adj[v], out);
        p &= !(1 << v);
        x |= 1 << v;
    }
}

/// Heaviest maximal clique; ties go to the lexicographically smallest.
pub fn max_weight_clique(g: &WeightedGraph) -> Result<Clique> {
    let all = bron_kerbosch(g)?;
    Ok(all
        .into_iter()
        .reduce(|best, c| if c.weight() > best.weight() { c } else { best })
        .expect("every graph has a maximal clique"))
}
