//! Independent reference implementations and fixtures shared by the
//! integration and acceptance tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use gbs_core::docking::{PharmacophorePoint, PointKind};
use gbs_core::encoding::GbsProgram;
use gbs_core::graph::WeightedGraph;
use gbs_core::mesh::Mesh;
use gbs_core::numerics::{random_unitary, CMatrix, SymmetricMatrix, C64};
use gbs_core::seeding::{rng, Stream};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Sum over perfect matchings: pair the first index with every partner and
/// recurse on the rest.
pub fn hafnian_by_matchings(a: &CMatrix) -> C64 {
    fn rec(a: &CMatrix, rest: &[usize]) -> C64 {
        if rest.is_empty() {
            return C64::new(1.0, 0.0);
        }
        let (first, tail) = (rest[0], &rest[1..]);
        let mut sum = C64::new(0.0, 0.0);
        for k in 0..tail.len() {
            let remaining: Vec<usize> = tail.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &v)| v).collect();
            sum += a[(first, tail[k])] * rec(a, &remaining);
        }
        sum
    }
    if a.nrows() % 2 == 1 {
        return C64::new(0.0, 0.0);
    }
    let all: Vec<usize> = (0..a.nrows()).collect();
    rec(a, &all)
}

pub fn complex_gaussian(r: &mut ChaCha8Rng) -> C64 {
    C64::new(r.sample(StandardNormal), r.sample(StandardNormal))
}

pub fn random_symmetric(n: usize, r: &mut ChaCha8Rng, real: bool) -> SymmetricMatrix {
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let z = if real { C64::new(r.sample(StandardNormal), 0.0) } else { complex_gaussian(r) };
            m[(i, j)] = z;
            m[(j, i)] = z;
        }
    }
    SymmetricMatrix::new(m).unwrap()
}

/// Applies every cell as a full `N×N` matrix, then the output phases.
pub fn compose_by_full_matrices(mesh: &Mesh) -> CMatrix {
    let n = mesh.mode_count();
    let mut u = CMatrix::identity(n, n);
    for c in mesh.cells() {
        let (s, co) = c.theta.sin_cos();
        let e = C64::from_polar(1.0, c.phi);
        let mut t = CMatrix::identity(n, n);
        let k = c.mode;
        t[(k, k)] = e * co;
        t[(k, k + 1)] = C64::new(0.0, s);
        t[(k + 1, k)] = C64::new(0.0, s) * e;
        t[(k + 1, k + 1)] = C64::new(co, 0.0);
        u = t * u;
    }
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        mesh.output_phases().iter().map(|&p| C64::from_polar(1.0, p)),
    ));
    d * u
}

/// Pairwise adjacency recomputed from the edge list.
pub fn is_clique_by_edges(g: &WeightedGraph, nodes: &[usize]) -> bool {
    let edges: BTreeSet<(usize, usize)> = g.edges().iter().map(|&(a, b, _)| (a.min(b), a.max(b))).collect();
    let distinct: BTreeSet<usize> = nodes.iter().copied().collect();
    distinct.len() == nodes.len()
        && nodes.iter().all(|&v| v < g.node_count())
        && nodes.iter().enumerate().all(|(i, &a)| nodes[i + 1..].iter().all(|&b| edges.contains(&(a.min(b), a.max(b)))))
}

/// Heaviest clique by checking every subset (≤ 16 nodes).
pub fn max_weight_clique_brute(g: &WeightedGraph) -> f64 {
    let n = g.node_count();
    assert!(n <= 16);
    (0u32..1 << n)
        .map(|mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect::<Vec<_>>())
        .filter(|s| is_clique_by_edges(g, s))
        .map(|s| s.iter().map(|&v| g.weight(v)).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn random_graph(n: usize, p: f64, r: &mut ChaCha8Rng) -> WeightedGraph {
    let weights: Vec<f64> = (0..n).map(|_| r.random_range(0.1..2.0)).collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if r.random::<f64>() < p {
                edges.push((a, b));
            }
        }
    }
    WeightedGraph::new(weights, edges).unwrap()
}

/// 32 nodes: a planted 6-clique of unit-weight nodes, three decoy 5-cliques
/// of heavier (1.15) nodes that each planted node touches in three places,
/// eleven light background nodes and sparse random edges. Labels are
/// shuffled. Returns the graph and the planted clique, sorted.
pub fn planted_clique_graph(seed: u64) -> (WeightedGraph, Vec<usize>) {
    let n = 32;
    let mut r = rng(seed, Stream::Fixture, 0);
    let mut w = vec![0.0; n];
    let mut edges = BTreeSet::new();
    w[..6].fill(1.0);
    for a in 0..6 {
        for b in a + 1..6 {
            edges.insert((a, b));
        }
    }
    for d in 0..3 {
        let decoy: Vec<usize> = (6 + 5 * d..11 + 5 * d).collect();
        for &v in &decoy {
            w[v] = 1.15;
        }
        for a in 0..5 {
            for b in a + 1..5 {
                edges.insert((decoy[a], decoy[b]));
            }
        }
    }
    for v in 0..6 {
        let d = v % 3;
        for k in 0..3 {
            edges.insert((v, 6 + 5 * d + (v / 3 + k) % 5));
        }
    }
    for x in &mut w[21..] {
        *x = r.random_range(0.3..0.9);
    }
    for a in 0..n {
        for b in a + 1..n {
            if r.random::<f64>() < 0.04 {
                edges.insert((a, b));
            }
        }
    }
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(&mut r);
    let mut weights = vec![0.0; n];
    for v in 0..n {
        weights[label[v]] = w[v];
    }
    let g = WeightedGraph::new(weights, edges.into_iter().map(|(a, b)| (label[a], label[b]))).unwrap();
    let mut planted: Vec<usize> = (0..6).map(|v| label[v]).collect();
    planted.sort_unstable();
    (g, planted)
}

/// Three ligand and three protein points whose triangles are congruent
/// (sides 3.0, 4.5 and 6.0 Å) with distinct side lengths, so only the
/// identity assignment is compatible as a triple. Returns the points and the
/// planted BIG nodes `l·3 + l`.
pub fn docking_fixture() -> (Vec<PharmacophorePoint>, Vec<PharmacophorePoint>, Vec<usize>) {
    // triangle with |01| = 3, |02| = 4.5, |12| = 6
    let x2 = (4.5f64 * 4.5 + 9.0 - 36.0) / 6.0;
    let y2 = (4.5f64 * 4.5 - x2 * x2).sqrt();
    let tri = [[0.0, 0.0, 0.0], [3.0, 0.0, 0.0], [x2, y2, 0.0]];
    let kinds = [PointKind::HA, PointKind::HD, PointKind::AR];
    let partner = [PointKind::HD, PointKind::HA, PointKind::AR];
    let ligand = (0..3).map(|i| PharmacophorePoint::new(format!("L{i}"), kinds[i].clone(), tri[i])).collect();
    // the protein copy is rotated by 90° about z and shifted
    let protein = (0..3)
        .map(|i| {
            let [x, y, z] = tri[i];
            PharmacophorePoint::new(format!("P{i}"), partner[i].clone(), [10.0 - y, 5.0 + x, z + 2.0])
        })
        .collect();
    (ligand, protein, vec![0, 4, 8])
}

/// 32 modes, the first four squeezed with `r = 2.23`, Haar interferometer.
pub fn four_squeezer_program(seed: u64) -> GbsProgram {
    let mut r = vec![0.0; 32];
    r[..4].fill(2.23);
    GbsProgram::new(r, random_unitary(32, seed).unwrap(), vec![1.0; 32]).unwrap()
}

/// 16 modes, all squeezed: uniform random `tanh r` rescaled so the largest
/// squeezing is 1.8, Haar interferometer.
pub fn sixteen_squeezer_program(seed: u64) -> GbsProgram {
    let mut rg = rng(seed, Stream::Fixture, 1);
    let t: Vec<f64> = (0..16).map(|_| rg.random_range(0.05..1.0)).collect();
    let max = t.iter().copied().fold(0.0, f64::max);
    let r = t.iter().map(|v| (v / max * 1.8f64.tanh()).atanh()).collect();
    GbsProgram::new(r, random_unitary(16, seed).unwrap(), vec![1.0; 16]).unwrap()
}

/// Expected TVD between `n` multinomial draws and their source `p`, in the
/// normal approximation: `½·Σ √(2·pᵢ(1−pᵢ)/(π·n))`.
pub fn tvd_noise_floor(p: &[f64], n: usize) -> f64 {
    0.5 * p.iter().map(|&q| (2.0 * q * (1.0 - q) / (std::f64::consts::PI * n as f64)).sqrt()).sum::<f64>()
}
