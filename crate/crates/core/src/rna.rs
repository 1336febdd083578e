//! RNA secondary structure from weighted full stem graphs (WFSG).
//!
//! Bases are numbered from 1. A stem `(i, j, L)` pairs `(i+k, j−k)` for
//! `k < L`; its node weight in the WFSG is `L`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cliques::{bron_kerbosch, gbs_solve, Clique, GbsSettings};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RnaSequence {
    bases: Vec<u8>,
    accession: Option<String>,
}

impl RnaSequence {
    /// Upper-cases `bases`; anything outside `ACGU` is rejected.
    pub fn new(bases: &str, accession: Option<String>) -> Result<Self> {
        let bases: Vec<u8> =
            bases.bytes().filter(|b| !b.is_ascii_whitespace()).map(|b| b.to_ascii_uppercase()).collect();
        if bases.is_empty() {
            return Err(Error::validation("empty RNA sequence"));
        }
        if let Some(pos) = bases.iter().position(|b| !b"ACGU".contains(b)) {
            return Err(Error::validation(format!("invalid base '{}' at position {}", bases[pos] as char, pos + 1)));
        }
        Ok(Self { bases, accession })
    }

    /// First record of a FASTA file; the accession is the first header word.
    pub fn from_fasta(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).skip_while(|l| l.is_empty());
        let header = lines.next().ok_or_else(|| Error::validation("empty FASTA input"))?;
        let header = header.strip_prefix('>').ok_or_else(|| Error::validation("FASTA record must start with '>'"))?;
        let accession = header.split_whitespace().next().map(str::to_owned);
        let body: String = lines.take_while(|l| !l.starts_with('>')).collect();
        Self::new(&body, accession)
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn accession(&self) -> Option<&str> {
        self.accession.as_deref()
    }

    /// Base at 1-based position `i`.
    pub fn base(&self, i: usize) -> char {
        self.bases[i - 1] as char
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.bases).expect("ASCII bases")
    }
}

/// Unordered base pairs allowed to form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct PairSet(BTreeSet<(char, char)>);

impl PairSet {
    pub fn watson_crick() -> Self {
        Self([('A', 'U'), ('C', 'G')].into_iter().collect())
    }

    pub fn allows(&self, a: char, b: char) -> bool {
        self.0.contains(&(a.min(b), a.max(b)))
    }
}

impl Default for PairSet {
    /// Watson–Crick plus the G–U wobble.
    fn default() -> Self {
        Self([('A', 'U'), ('C', 'G'), ('G', 'U')].into_iter().collect())
    }
}

impl TryFrom<Vec<String>> for PairSet {
    type Error = Error;

    fn try_from(v: Vec<String>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for s in v {
            let c: Vec<char> = s.to_ascii_uppercase().chars().collect();
            if c.len() != 2 || !c.iter().all(|b| "ACGU".contains(*b)) {
                return Err(Error::validation(format!("invalid base pair '{s}'")));
            }
            set.insert((c[0].min(c[1]), c[0].max(c[1])));
        }
        Ok(Self(set))
    }
}

impl From<PairSet> for Vec<String> {
    fn from(p: PairSet) -> Self {
        p.0.into_iter().map(|(a, b)| format!("{a}{b}")).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Stem {
    pub i: usize,
    pub j: usize,
    pub length: usize,
}

impl Stem {
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.length).map(|k| (self.i + k, self.j - k))
    }

    pub fn bases(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs().flat_map(|(a, b)| [a, b])
    }

    /// Unpaired bases enclosed by the innermost pair.
    pub fn loop_len(&self) -> usize {
        (self.j + 1 - self.length) - (self.i + self.length - 1) - 1
    }

    pub fn shares_base(&self, other: &Stem) -> bool {
        let mine: BTreeSet<usize> = self.bases().collect();
        other.bases().any(|b| mine.contains(&b))
    }

    /// Outer intervals interleave, `i₁ < i₂ < j₁ < j₂`.
    pub fn crosses(&self, other: &Stem) -> bool {
        let (a, b) = if self.i <= other.i { (self, other) } else { (other, self) };
        a.i < b.i && b.i < a.j && a.j < b.j
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StemParams {
    pub min_stem_len: usize,
    pub min_loop: usize,
    pub allowed_pairs: PairSet,
    pub allow_pseudoknots: bool,
}

impl Default for StemParams {
    fn default() -> Self {
        Self { min_stem_len: 3, min_loop: 3, allowed_pairs: PairSet::default(), allow_pseudoknots: false }
    }
}

/// Every stem meeting both minima, including the shorter prefixes of longer
/// runs, ordered by `(i, j, length)`.
pub fn enumerate_stems(seq: &RnaSequence, min_stem_len: usize, min_loop: usize, allowed: &PairSet) -> Vec<Stem> {
    let n = seq.len();
    let min_len = min_stem_len.max(1);
    let mut stems = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let mut length = 0;
            while i + length < j - length && allowed.allows(seq.base(i + length), seq.base(j - length)) {
                length += 1;
                let s = Stem { i, j, length };
                if s.loop_len() < min_loop {
                    break;
                }
                if length >= min_len {
                    stems.push(s);
                }
            }
        }
    }
    stems
}

/// One node per stem weighted by length; an edge when two stems share no base
/// and, unless pseudoknots are allowed, are nested or disjoint.
pub fn build_wfsg(stems: &[Stem], allow_pseudoknots: bool) -> Result<WeightedGraph> {
    if stems.is_empty() {
        return Err(Error::validation("no stems to build a graph from"));
    }
    let mut edges = Vec::new();
    for a in 0..stems.len() {
        for b in a + 1..stems.len() {
            if coexist(&stems[a], &stems[b], allow_pseudoknots) {
                edges.push((a, b));
            }
        }
    }
    WeightedGraph::new(stems.iter().map(|s| s.length as f64).collect(), edges)
}

pub fn coexist(a: &Stem, b: &Stem, allow_pseudoknots: bool) -> bool {
    !a.shares_base(b) && (allow_pseudoknots || !a.crosses(b))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldPrediction {
    pub stems: Vec<Stem>,
    pub base_pairs: Vec<(usize, usize)>,
}

impl FoldPrediction {
    fn from_stems(mut stems: Vec<Stem>) -> Self {
        stems.sort();
        let mut base_pairs: Vec<(usize, usize)> = stems.iter().flat_map(|s| s.pairs().collect::<Vec<_>>()).collect();
        base_pairs.sort();
        Self { stems, base_pairs }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictMode {
    /// Heaviest maximal clique of the WFSG.
    Exact,
    /// Heaviest clique reached by post-processing simulated samples.
    Gbs(GbsSettings),
}

/// Picks the heaviest set of co-existing stems.
///
/// Graphs with fewer nodes than `max(min_photons, 2)` cannot produce a qualifying
/// sample and are solved exactly in either mode.
pub fn predict(seq: &RnaSequence, params: &StemParams, mode: &PredictMode) -> Result<FoldPrediction> {
    let stems = enumerate_stems(seq, params.min_stem_len, params.min_loop, &params.allowed_pairs);
    if stems.is_empty() {
        return Ok(FoldPrediction::from_stems(Vec::new()));
    }
    let g = build_wfsg(&stems, params.allow_pseudoknots)?;
    let best = match mode {
        PredictMode::Gbs(s) if g.node_count() >= s.min_photons.max(2) => gbs_solve(&g, s)?.0,
        _ => heaviest(bron_kerbosch(&g)?),
    };
    Ok(FoldPrediction::from_stems(best.nodes().iter().map(|&v| stems[v]).collect()))
}

fn heaviest(cliques: Vec<Clique>) -> Clique {
    cliques
        .into_iter()
        .reduce(|best, c| if c.weight() > best.weight() { c } else { best })
        .unwrap_or_else(Clique::empty)
}

/// Base pairs of a dot-bracket string; `()`, `[]`, `{}` and `<>` may be mixed.
pub fn parse_dot_bracket(s: &str) -> Result<Vec<(usize, usize)>> {
    const OPEN: &str = "([{<";
    const CLOSE: &str = ")]}>";
    let mut stacks: [Vec<usize>; 4] = Default::default();
    let mut pairs = Vec::new();
    for (k, c) in s.trim().chars().enumerate() {
        let pos = k + 1;
        if let Some(t) = OPEN.find(c) {
            stacks[t].push(pos);
        } else if let Some(t) = CLOSE.find(c) {
            let i = stacks[t].pop().ok_or_else(|| Error::validation(format!("unmatched '{c}' at {pos}")))?;
            pairs.push((i, pos));
        } else if c != '.' {
            return Err(Error::validation(format!("invalid dot-bracket symbol '{c}' at {pos}")));
        }
    }
    if let Some(&i) = stacks.iter().flatten().next() {
        return Err(Error::validation(format!("unclosed bracket at {i}")));
    }
    pairs.sort_unstable();
    Ok(pairs)
}

/// Matthews correlation over all `C(L, 2)` index pairs.
pub fn mcc(predicted: &[(usize, usize)], reference: &[(usize, usize)], seq_len: usize) -> Result<f64> {
    let (tp, fp, fn_, tn) = confusion(predicted, reference, seq_len)?;
    Ok(mcc_from_counts(tp, fp, fn_, tn))
}

/// `(TP, FP, FN, TN)` with pairs normalized to `i < j`.
pub fn confusion(
    predicted: &[(usize, usize)],
    reference: &[(usize, usize)],
    seq_len: usize,
) -> Result<(u64, u64, u64, u64)> {
    let norm = |pairs: &[(usize, usize)]| -> Result<BTreeSet<(usize, usize)>> {
        pairs
            .iter()
            .map(|&(a, b)| {
                let (i, j) = (a.min(b), a.max(b));
                if i < 1 || j > seq_len || i == j {
                    Err(Error::validation(format!("pair ({a}, {b}) outside 1..={seq_len}")))
                } else {
                    Ok((i, j))
                }
            })
            .collect()
    };
    let (p, r) = (norm(predicted)?, norm(reference)?);
    let tp = p.intersection(&r).count() as u64;
    let fp = p.len() as u64 - tp;
    let fn_ = r.len() as u64 - tp;
    let universe = (seq_len as u64) * (seq_len as u64).saturating_sub(1) / 2;
    Ok((tp, fp, fn_, universe - tp - fp - fn_))
}

pub fn mcc_from_counts(tp: u64, fp: u64, fn_: u64, tn: u64) -> f64 {
    let [tp, fp, fn_, tn] = [tp, fp, fn_, tn].map(|v| v as f64);
    let denom = ((tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_)).sqrt();
    if denom == 0.0 {
        0.0
    } else {
        (tp * tn - fp * fn_) / denom
    }
}

/// `√(PPV·SEN)`, the common shortcut for sparse pair sets.
pub fn mcc_approx(tp: u64, fp: u64, fn_: u64) -> f64 {
    if tp == 0 {
        return 0.0;
    }
    let tp = tp as f64;
    (tp / (tp + fp as f64) * tp / (tp + fn_ as f64)).sqrt()
}
