//! Binding interaction graphs (BIG) from ligand and protein pharmacophores.
//!
//! Each node is a contact `(ligand point l, protein point p)`, numbered
//! `l·m + p` for `m` protein points. Two contacts are adjacent when they use
//! distinct points on both sides and the two distances agree,
//! `|d(P₁,P₂) − d(l₁,l₂)| ≤ τ + 2ε`. A clique is therefore a set of mutually
//! compatible contacts, i.e. a candidate pose.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cliques::Clique;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum PointKind {
    /// Hydrogen-bond acceptor.
    HA,
    /// Hydrogen-bond donor.
    HD,
    /// Negative charge.
    NC,
    /// Aromatic ring.
    AR,
    Other(String),
}

impl PointKind {
    fn is_hbond(&self) -> bool {
        matches!(self, Self::HA | Self::HD)
    }
}

impl From<String> for PointKind {
    fn from(s: String) -> Self {
        match s.as_str() {
            "HA" => Self::HA,
            "HD" => Self::HD,
            "NC" => Self::NC,
            "AR" => Self::AR,
            _ => Self::Other(s),
        }
    }
}

impl From<PointKind> for String {
    fn from(k: PointKind) -> Self {
        k.to_string()
    }
}

impl fmt::Display for PointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::HA => f.write_str("HA"),
            Self::HD => f.write_str("HD"),
            Self::NC => f.write_str("NC"),
            Self::AR => f.write_str("AR"),
            Self::Other(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PharmacophorePoint {
    pub id: String,
    pub kind: PointKind,
    /// Position in Ångström.
    pub xyz: [f64; 3],
}

impl PharmacophorePoint {
    pub fn new(id: impl Into<String>, kind: PointKind, xyz: [f64; 3]) -> Self {
        Self { id: id.into(), kind, xyz }
    }

    fn distance(&self, other: &Self) -> f64 {
        let d: f64 = self.xyz.iter().zip(&other.xyz).map(|(a, b)| (a - b) * (a - b)).sum();
        d.sqrt()
    }
}

/// The contents of a pharmacophore file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PharmacophoreSet {
    pub ligand: Vec<PharmacophorePoint>,
    pub protein: Vec<PharmacophorePoint>,
}

impl PharmacophoreSet {
    pub fn from_json(text: &str) -> Result<Self> {
        let set: Self =
            serde_json::from_str(text).map_err(|e| Error::validation(format!("pharmacophore file: {e}")))?;
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<()> {
        for (side, points) in [("ligand", &self.ligand), ("protein", &self.protein)] {
            let mut seen = HashSet::new();
            for p in points {
                if p.xyz.iter().any(|c| !c.is_finite()) {
                    return Err(Error::validation(format!("{side} point {} has non-finite coordinates", p.id)));
                }
                if !seen.insert(&p.id) {
                    return Err(Error::validation(format!("duplicate {side} point id {}", p.id)));
                }
            }
        }
        if self.ligand.is_empty() || self.protein.is_empty() {
            return Err(Error::validation("need at least one ligand and one protein point"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsilonEntry {
    /// Unordered.
    pub kinds: [PointKind; 2],
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightEntry {
    pub ligand: PointKind,
    pub protein: PointKind,
    pub weight: f64,
}

/// Geometric tolerances and contact weights.
///
/// With an empty `epsilon_table`, a contact whose two kinds are both H-bond
/// acceptors/donors uses `epsilon_hbond` and any other contact uses
/// `epsilon_mixed`; an edge uses the larger ε of its two contacts. With an
/// empty `weight_table` every contact weighs 1. A non-empty table must cover
/// every kind pair that occurs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DockingParams {
    pub tau: f64,
    pub epsilon_hbond: f64,
    pub epsilon_mixed: f64,
    pub epsilon_table: Vec<EpsilonEntry>,
    pub weight_table: Vec<WeightEntry>,
}

impl Default for DockingParams {
    fn default() -> Self {
        Self { tau: 0.8, epsilon_hbond: 0.0, epsilon_mixed: 0.3, epsilon_table: Vec::new(), weight_table: Vec::new() }
    }
}

impl DockingParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |v: f64| !(v.is_finite() && v >= 0.0);
        if bad(self.tau) || bad(self.epsilon_hbond) || bad(self.epsilon_mixed) {
            return Err(Error::Config("tau and epsilons must be finite and non-negative".into()));
        }
        if let Some(e) = self.epsilon_table.iter().find(|e| bad(e.value)) {
            return Err(Error::Config(format!("epsilon for {}–{} is {}", e.kinds[0], e.kinds[1], e.value)));
        }
        if let Some(w) = self.weight_table.iter().find(|w| bad(w.weight)) {
            return Err(Error::Config(format!("weight for ({}, {}) is {}", w.ligand, w.protein, w.weight)));
        }
        Ok(())
    }

    /// ε for one contact's kind pair.
    pub fn epsilon(&self, a: &PointKind, b: &PointKind) -> Result<f64> {
        if self.epsilon_table.is_empty() {
            return Ok(if a.is_hbond() && b.is_hbond() { self.epsilon_hbond } else { self.epsilon_mixed });
        }
        self.epsilon_table
            .iter()
            .find(|e| (&e.kinds[0] == a && &e.kinds[1] == b) || (&e.kinds[0] == b && &e.kinds[1] == a))
            .map(|e| e.value)
            .ok_or_else(|| Error::Config(format!("no epsilon for kind pair {a}–{b}")))
    }

    pub fn weight(&self, ligand: &PointKind, protein: &PointKind) -> Result<f64> {
        if self.weight_table.is_empty() {
            return Ok(1.0);
        }
        self.weight_table
            .iter()
            .find(|w| &w.ligand == ligand && &w.protein == protein)
            .map(|w| w.weight)
            .ok_or_else(|| Error::Config(format!("no weight for contact (ligand {ligand}, protein {protein})")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contact {
    pub ligand_point: String,
    pub protein_point: String,
    pub weight: f64,
}

/// A BIG together with the contact behind each node.
#[derive(Debug, Clone, PartialEq)]
pub struct BindingGraph {
    pub graph: WeightedGraph,
    pub contacts: Vec<Contact>,
    protein_count: usize,
}

impl BindingGraph {
    /// `(ligand index, protein index)` of a node.
    pub fn contact_indices(&self, node: usize) -> (usize, usize) {
        (node / self.protein_count, node % self.protein_count)
    }
}

pub fn build_big(
    ligand: &[PharmacophorePoint],
    protein: &[PharmacophorePoint],
    p: &DockingParams,
) -> Result<BindingGraph> {
    p.validate()?;
    let (n, m) = (ligand.len(), protein.len());
    if n == 0 || m == 0 {
        return Err(Error::validation("need at least one ligand and one protein point"));
    }
    let mut contacts = Vec::with_capacity(n * m);
    let mut eps = Vec::with_capacity(n * m);
    for l in ligand {
        for q in protein {
            contacts.push(Contact {
                ligand_point: l.id.clone(),
                protein_point: q.id.clone(),
                weight: p.weight(&l.kind, &q.kind)?,
            });
            eps.push(p.epsilon(&l.kind, &q.kind)?);
        }
    }
    let mut edges = Vec::new();
    for a in 0..n * m {
        let (l1, p1) = (a / m, a % m);
        for b in a + 1..n * m {
            let (l2, p2) = (b / m, b % m);
            if l1 == l2 || p1 == p2 {
                continue;
            }
            let mismatch = (protein[p1].distance(&protein[p2]) - ligand[l1].distance(&ligand[l2])).abs();
            if mismatch <= p.tau + 2.0 * eps[a].max(eps[b]) {
                edges.push((a, b));
            }
        }
    }
    let graph = WeightedGraph::new(contacts.iter().map(|c| c.weight).collect(), edges)?;
    Ok(BindingGraph { graph, contacts, protein_count: m })
}

/// Contacts of a clique, checked to use each point at most once.
pub fn interpret_pose(big: &BindingGraph, c: &Clique) -> Result<Vec<Contact>> {
    if !big.graph.is_clique(c.nodes()) {
        return Err(Error::validation("pose nodes do not form a clique of the BIG"));
    }
    let mut ligands = HashSet::new();
    let mut proteins = HashSet::new();
    let mut pose = Vec::with_capacity(c.len());
    for &v in c.nodes() {
        let (l, q) = big.contact_indices(v);
        if !ligands.insert(l) || !proteins.insert(q) {
            return Err(Error::Consistency(format!("pose reuses a point at contact {v}")));
        }
        pose.push(big.contacts[v].clone());
    }
    Ok(pose)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(id: &str, kind: PointKind, x: f64) -> PharmacophorePoint {
        PharmacophorePoint::new(id, kind, [x, 0.0, 0.0])
    }

    #[test]
    fn compatible_pair_is_adjacent() {
        let lig = [pt("l0", PointKind::HA, 0.0), pt("l1", PointKind::HD, 3.0)];
        let pro = [pt("p0", PointKind::HD, 0.0), pt("p1", PointKind::HA, 3.5)];
        let p = DockingParams { epsilon_mixed: 0.0, ..DockingParams::default() };
        let big = build_big(&lig, &pro, &p).unwrap();
        assert_eq!(big.graph.node_count(), 4);
        // (l0,p0)=0 with (l1,p1)=3, (l0,p1)=1 with (l1,p0)=2
        assert!(big.graph.has_edge(0, 3));
        assert!(big.graph.has_edge(1, 2));
        // shared points never connect
        assert!(!big.graph.has_edge(0, 1) && !big.graph.has_edge(0, 2));
        assert_eq!(big.graph.edge_count(), 2);
    }

    #[test]
    fn tight_tau_separates() {
        let lig = [pt("l0", PointKind::HA, 0.0), pt("l1", PointKind::HD, 3.0)];
        let pro = [pt("p0", PointKind::HD, 0.0), pt("p1", PointKind::HA, 3.5)];
        let p = DockingParams { tau: 0.4, ..DockingParams::default() };
        assert_eq!(build_big(&lig, &pro, &p).unwrap().graph.edge_count(), 0);
        // an aromatic contact widens the tolerance by 2·0.3
        let lig = [pt("l0", PointKind::AR, 0.0), pt("l1", PointKind::HD, 3.0)];
        assert_eq!(build_big(&lig, &pro, &p).unwrap().graph.edge_count(), 2);
    }

    #[test]
    fn huge_tau_is_complete_multipartite() {
        let lig: Vec<_> = (0..3).map(|i| pt(&format!("l{i}"), PointKind::HA, i as f64 * 7.0)).collect();
        let pro: Vec<_> = (0..2).map(|i| pt(&format!("p{i}"), PointKind::HD, i as f64)).collect();
        let p = DockingParams { tau: 1e9, ..DockingParams::default() };
        let big = build_big(&lig, &pro, &p).unwrap();
        // pairs with distinct ligand and protein: C(3,2)·2 = 6
        assert_eq!(big.graph.edge_count(), 6);
    }

    #[test]
    fn missing_table_entries_name_the_pair() {
        let lig = [pt("l0", PointKind::Other("XX".into()), 0.0)];
        let pro = [pt("p0", PointKind::HA, 0.0)];
        let p = DockingParams {
            weight_table: vec![WeightEntry { ligand: PointKind::HA, protein: PointKind::HA, weight: 1.0 }],
            ..DockingParams::default()
        };
        let err = build_big(&lig, &pro, &p).unwrap_err().to_string();
        assert!(err.contains("XX") && err.contains("HA"), "{err}");

        let p = DockingParams {
            epsilon_table: vec![EpsilonEntry { kinds: [PointKind::HA, PointKind::HD], value: 0.1 }],
            ..DockingParams::default()
        };
        assert!(matches!(build_big(&lig, &pro, &p), Err(Error::Config(_))));
    }

    #[test]
    fn pose_interpretation() {
        let lig = [pt("l0", PointKind::HA, 0.0), pt("l1", PointKind::HD, 3.0)];
        let pro = [pt("p0", PointKind::HD, 0.0), pt("p1", PointKind::HA, 3.0)];
        let big = build_big(&lig, &pro, &DockingParams::default()).unwrap();
        assert!(interpret_pose(&big, &Clique::empty()).unwrap().is_empty());
        let c = Clique::new(&big.graph, vec![0, 3]).unwrap();
        let pose = interpret_pose(&big, &c).unwrap();
        assert_eq!((pose[0].ligand_point.as_str(), pose[0].protein_point.as_str()), ("l0", "p0"));
        assert_eq!((pose[1].ligand_point.as_str(), pose[1].protein_point.as_str()), ("l1", "p1"));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"ligand":[{"id":"a","kind":"HA","xyz":[0,0,0]}],
                       "protein":[{"id":"b","kind":"metal","xyz":[1,2,3]}]}"#;
        let set = PharmacophoreSet::from_json(text).unwrap();
        assert_eq!(set.protein[0].kind, PointKind::Other("metal".into()));
        let back = PharmacophoreSet::from_json(&serde_json::to_string(&set).unwrap()).unwrap();
        assert_eq!(back, set);
        assert!(PharmacophoreSet::from_json(r#"{"ligand":[],"protein":[]}"#).is_err());
        let params: DockingParams = serde_json::from_str(r#"{"tau":1.0}"#).unwrap();
        assert_eq!(params.epsilon_mixed, 0.3);
    }
}
