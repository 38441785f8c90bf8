//! Minimum set cover over pair classes.
//!
//! The universe is a list of classes, each a signature (the candidates that
//! cover it) with a multiplicity (how many raw items share that signature).
//! A cover is a set of candidates meeting every signature.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Default node budget for [`solve_exact`].
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Bitset over candidate indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Signature(SmallVec<[u64; 4]>);

impl Signature {
    pub fn zeros(m: usize) -> Signature {
        Signature(SmallVec::from_elem(0, m.div_ceil(64)))
    }

    pub fn from_indices(m: usize, indices: impl IntoIterator<Item = usize>) -> Signature {
        let mut s = Signature::zeros(m);
        for j in indices {
            s.set(j);
        }
        s
    }

    pub fn set(&mut self, j: usize) {
        self.0[j / 64] |= 1 << (j % 64);
    }

    pub fn clear(&mut self, j: usize) {
        self.0[j / 64] &= !(1 << (j % 64));
    }

    pub fn get(&self, j: usize) -> bool {
        self.0.get(j / 64).is_some_and(|w| w >> (j % 64) & 1 == 1)
    }

    pub fn and(&self, other: &Signature) -> Signature {
        Signature(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersects(&self, other: &Signature) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &Signature) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &Signature) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            (0..64)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| i * 64 + b)
        })
    }

    /// Hex digits, most significant first, `ceil(m / 4)` wide.
    pub fn to_hex(&self, m: usize) -> String {
        let digits = m.div_ceil(4).max(1);
        (0..digits)
            .rev()
            .map(|d| {
                let nibble = (0..4).fold(0u32, |acc, b| acc | (self.get(d * 4 + b) as u32) << b);
                char::from_digit(nibble, 16).unwrap()
            })
            .collect()
    }

    pub fn from_hex(m: usize, hex: &str) -> Option<Signature> {
        let mut s = Signature::zeros(m);
        for (d, c) in hex.chars().rev().enumerate() {
            let nibble = c.to_digit(16)?;
            for b in 0..4 {
                if nibble >> b & 1 == 1 {
                    let j = d * 4 + b;
                    if j >= m {
                        return None;
                    }
                    s.set(j);
                }
            }
        }
        Some(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverClass {
    pub signature: Signature,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverInstance {
    m: usize,
    classes: Vec<CoverClass>,
    labels: Vec<String>,
}

impl CoverInstance {
    /// Merges equal signatures (summing multiplicities) and orders classes
    /// by signature. Every signature must be nonempty.
    pub fn new(
        m: usize,
        labels: Vec<String>,
        classes: impl IntoIterator<Item = (Signature, u64)>,
    ) -> Result<CoverInstance> {
        if labels.len() != m {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {m} candidates",
                labels.len()
            )));
        }
        let mut merged: BTreeMap<Signature, u64> = BTreeMap::new();
        for (sig, mult) in classes {
            if sig.is_empty() {
                return Err(Error::InvalidParameter("class with empty signature".into()));
            }
            if sig.ones().any(|j| j >= m) {
                return Err(Error::InvalidParameter(
                    "signature outside candidate range".into(),
                ));
            }
            *merged.entry(sig).or_default() += mult;
        }
        let classes = merged
            .into_iter()
            .map(|(signature, multiplicity)| CoverClass {
                signature,
                multiplicity,
            })
            .collect();
        Ok(CoverInstance { m, classes, labels })
    }

    pub fn candidates(&self) -> usize {
        self.m
    }

    pub fn classes(&self) -> &[CoverClass] {
        &self.classes
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.classes.iter().map(|c| c.multiplicity).sum()
    }

    pub fn is_cover(&self, chosen: &[usize]) -> bool {
        let s = Signature::from_indices(self.m, chosen.iter().copied());
        self.classes.iter().all(|c| c.signature.intersects(&s))
    }

    /// Candidates that alone cover some class.
    pub fn mandatory(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .classes
            .iter()
            .filter(|c| c.signature.count() == 1)
            .map(|c| c.signature.ones().next().unwrap())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn dump(&self) -> String {
        let mut out = String::new();
        writeln!(out, "m {}", self.m).unwrap();
        for c in &self.classes {
            writeln!(out, "{} {}", c.multiplicity, c.signature.to_hex(self.m)).unwrap();
        }
        writeln!(out, "# labels").unwrap();
        for (j, l) in self.labels.iter().enumerate() {
            writeln!(out, "# {j} {l}").unwrap();
        }
        out
    }

    pub fn load(text: &str) -> Result<CoverInstance> {
        let parse_err = |line: usize, message: &str| Error::Parse {
            line,
            message: message.into(),
        };
        let mut lines = text.lines().enumerate();
        let (_, head) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let m: usize = head
            .strip_prefix("m ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| parse_err(1, "expected \"m <count>\""))?;
        let mut classes = Vec::new();
        let mut labels = vec![String::new(); m];
        let mut in_labels = false;
        for (no, line) in lines {
            if let Some(rest) = line.strip_prefix('#') {
                in_labels = true;
                let rest = rest.trim();
                if rest == "labels" {
                    continue;
                }
                let (j, label) = rest.split_once(' ').unwrap_or((rest, ""));
                let j: usize = j
                    .parse()
                    .map_err(|_| parse_err(no + 1, "bad label index"))?;
                *labels
                    .get_mut(j)
                    .ok_or_else(|| parse_err(no + 1, "label index out of range"))? =
                    label.to_string();
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            if in_labels {
                return Err(parse_err(no + 1, "class line after label block"));
            }
            let (mult, hex) = line
                .split_once(' ')
                .ok_or_else(|| parse_err(no + 1, "expected \"<mult> <hex>\""))?;
            let mult: u64 = mult
                .parse()
                .map_err(|_| parse_err(no + 1, "bad multiplicity"))?;
            let sig = Signature::from_hex(m, hex.trim())
                .ok_or_else(|| parse_err(no + 1, "bad bitset"))?;
            classes.push((sig, mult));
        }
        CoverInstance::new(m, labels, classes)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairTally {
    pub unordered: u64,
    pub ordered: u64,
}

impl std::ops::AddAssign for PairTally {
    fn add_assign(&mut self, rhs: PairTally) {
        self.unordered += rhs.unordered;
        self.ordered += rhs.ordered;
    }
}

#[derive(Debug, Clone, Default)]
pub struct PairSweep {
    /// `(category, signature) -> tally`.
    pub tallies: BTreeMap<(u32, Signature), PairTally>,
    /// Least `(x, y)`, `x <= y`, whose signature is empty.
    pub first_empty: Option<(usize, usize)>,
}

impl PairSweep {
    pub fn classes(&self) -> impl Iterator<Item = (Signature, u64)> + '_ {
        self.tallies
            .iter()
            .map(|((_, s), t)| (s.clone(), t.unordered))
    }
}

/// Signature of every unordered pair `{x, y}` (including `x = y`) as the
/// intersection of per-element membership rows, tallied by a symmetric
/// category. Rows are split across the rayon pool; the merge is ordered.
pub fn sweep_pairs<F>(membership: &[Signature], category: F) -> PairSweep
where
    F: Fn(usize, usize) -> u32 + Sync,
{
    type Local = (HashMap<(u32, Signature), PairTally>, Option<(usize, usize)>);
    let n = membership.len();
    let (map, first_empty) = (0..n)
        .into_par_iter()
        .fold(
            || -> Local { (HashMap::new(), None) },
            |(mut map, mut empty), x| {
                for y in x..n {
                    let sig = membership[x].and(&membership[y]);
                    if sig.is_empty() && empty.is_none_or(|e| (x, y) < e) {
                        empty = Some((x, y));
                    }
                    let t = map.entry((category(x, y), sig)).or_default();
                    t.unordered += 1;
                    t.ordered += if x == y { 1 } else { 2 };
                }
                (map, empty)
            },
        )
        .reduce(
            || (HashMap::new(), None),
            |(mut a, ea), (b, eb)| {
                if a.len() < b.len() {
                    return merge_into(b, a, eb, ea);
                }
                merge_into(std::mem::take(&mut a), b, ea, eb)
            },
        );
    fn merge_into(
        mut into: HashMap<(u32, Signature), PairTally>,
        from: HashMap<(u32, Signature), PairTally>,
        ea: Option<(usize, usize)>,
        eb: Option<(usize, usize)>,
    ) -> Local {
        for (k, v) in from {
            *into.entry(k).or_default() += v;
        }
        let e = match (ea, eb) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        (into, e)
    }
    PairSweep {
        tallies: map.into_iter().collect(),
        first_empty,
    }
}

/// Membership rows: row `x` marks the candidates containing element `x`.
pub fn membership_rows<F>(n: usize, m: usize, member: F) -> Vec<Signature>
where
    F: Fn(usize, usize) -> bool + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|x| Signature::from_indices(m, (0..m).filter(|&j| member(x, j))))
        .collect()
}

/// Pair instance over all unordered pairs. An uncovered pair means the
/// group is 2-generated; `name` renders the witness elements.
pub fn build_pair_instance(
    rows: &[Signature],
    labels: Vec<String>,
    name: impl Fn(usize) -> String,
) -> Result<(CoverInstance, PairSweep)> {
    let sweep = sweep_pairs(rows, |_, _| 0);
    if let Some((x, y)) = sweep.first_empty {
        return Err(Error::TwoGenerated(name(x), name(y)));
    }
    let inst = CoverInstance::new(labels.len(), labels, sweep.classes())?;
    Ok((inst, sweep))
}

/// Instance whose universe is single elements (for plain coverings).
pub fn build_element_instance(
    rows: &[Signature],
    labels: Vec<String>,
    name: impl Fn(usize) -> String,
) -> Result<CoverInstance> {
    if let Some(x) = rows.iter().position(Signature::is_empty) {
        return Err(Error::NoCover(format!(
            "element {} lies in no candidate subgroup",
            name(x)
        )));
    }
    CoverInstance::new(labels.len(), labels, rows.iter().map(|r| (r.clone(), 1)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// Candidates forced by singleton classes during reduction.
    pub forced: Vec<usize>,
    /// Best lower bound proven at the root.
    pub root_lower_bound: usize,
    pub nodes: u64,
    pub classes_after_reduction: usize,
    pub candidates_after_reduction: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSolution {
    pub chosen: Vec<usize>,
    pub optimal: bool,
    pub certificate: Certificate,
}

impl CoverSolution {
    pub fn size(&self) -> usize {
        self.chosen.len()
    }
}

/// Greedy: repeatedly take the candidate covering the largest uncovered
/// multiplicity, ties to the lowest index. Upper bound only.
pub fn solve_greedy(inst: &CoverInstance) -> CoverSolution {
    let chosen = greedy_on(
        inst.m,
        &inst.classes,
        &(0..inst.classes.len()).collect::<Vec<_>>(),
    );
    CoverSolution {
        chosen,
        optimal: false,
        certificate: Certificate {
            forced: Vec::new(),
            root_lower_bound: 0,
            nodes: 0,
            classes_after_reduction: inst.classes.len(),
            candidates_after_reduction: inst.m,
        },
    }
}

fn greedy_on(m: usize, classes: &[CoverClass], active: &[usize]) -> Vec<usize> {
    let mut uncovered: Vec<usize> = active.to_vec();
    let mut chosen = Vec::new();
    while !uncovered.is_empty() {
        let mut weight = vec![0u64; m];
        for &c in &uncovered {
            for j in classes[c].signature.ones() {
                weight[j] += classes[c].multiplicity.max(1);
            }
        }
        let best = (0..m)
            .max_by_key(|&j| (weight[j], std::cmp::Reverse(j)))
            .unwrap();
        if weight[best] == 0 {
            break;
        }
        chosen.push(best);
        uncovered.retain(|&c| !classes[c].signature.get(best));
    }
    chosen.sort_unstable();
    chosen
}

/// Classes and candidates after reduction.
struct Reduced {
    forced: Vec<usize>,
    /// Remaining classes, signatures restricted to live candidates.
    classes: Vec<Signature>,
    live: Signature,
}

fn reduce(inst: &CoverInstance) -> Result<Reduced> {
    let m = inst.m;
    let mut live = Signature::from_indices(m, 0..m);
    let mut chosen = Signature::zeros(m);
    let mut forced = Vec::new();
    let mut classes: Vec<Signature> = inst.classes.iter().map(|c| c.signature.clone()).collect();
    loop {
        let mut changed = false;

        // singleton classes force their candidate
        for c in &classes {
            let s = c.and(&live);
            match s.count() {
                0 => return Err(Error::Internal("class lost every candidate".into())),
                1 => {
                    let j = s.ones().next().unwrap();
                    if !chosen.get(j) {
                        chosen.set(j);
                        forced.push(j);
                        changed = true;
                    }
                }
                _ => {}
            }
        }
        classes.retain(|c| !c.intersects(&chosen));
        for j in chosen.ones() {
            live.clear(j);
        }
        for c in classes.iter_mut() {
            *c = c.and(&live);
        }

        // drop classes implied by a smaller one
        classes.sort_by(|a, b| a.count().cmp(&b.count()).then_with(|| a.cmp(b)));
        classes.dedup();
        let mut kept: Vec<Signature> = Vec::with_capacity(classes.len());
        for c in classes.drain(..) {
            if !kept.iter().any(|k| k.is_subset(&c)) {
                kept.push(c);
            } else {
                changed = true;
            }
        }
        classes = kept;

        // drop candidates whose classes are covered by another candidate
        let cols: Vec<(usize, Signature)> = live
            .ones()
            .map(|j| {
                let col = Signature::from_indices(
                    classes.len(),
                    classes
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| c.get(j))
                        .map(|(i, _)| i),
                );
                (j, col)
            })
            .collect();
        for (j, col) in &cols {
            let dominated = col.is_empty()
                || cols.iter().any(|(k, other)| {
                    k != j
                        && live.get(*k)
                        && col.is_subset(other)
                        && (!other.is_subset(col) || k < j)
                });
            if dominated {
                live.clear(*j);
                changed = true;
            }
        }
        for c in classes.iter_mut() {
            *c = c.and(&live);
        }

        if !changed {
            break;
        }
    }
    forced.sort_unstable();
    Ok(Reduced {
        forced,
        classes,
        live,
    })
}

/// Size of a greedily built set of pairwise disjoint classes.
fn disjoint_packing(classes: &[Signature], active: &[usize]) -> usize {
    let mut order: Vec<usize> = active.to_vec();
    order.sort_by_key(|&c| (classes[c].count(), c));
    let mut used: Option<Signature> = None;
    let mut count = 0;
    for c in order {
        let s = &classes[c];
        match &mut used {
            Some(u) if u.intersects(s) => {}
            Some(u) => {
                u.union_with(s);
                count += 1;
            }
            None => {
                used = Some(s.clone());
                count += 1;
            }
        }
    }
    count
}

struct Search<'a> {
    classes: &'a [Signature],
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Search<'_> {
    fn run(&mut self, chosen: &mut Vec<usize>, uncovered: &[usize]) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if uncovered.is_empty() {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return;
        }
        if chosen.len() + disjoint_packing(self.classes, uncovered) >= self.best.len() {
            return;
        }
        let pivot = *uncovered
            .iter()
            .min_by_key(|&&c| (self.classes[c].count(), c))
            .unwrap();
        let options: Vec<usize> = self.classes[pivot].ones().collect();
        for j in options {
            chosen.push(j);
            let rest: Vec<usize> = uncovered
                .iter()
                .copied()
                .filter(|&c| !self.classes[c].get(j))
                .collect();
            self.run(chosen, &rest);
            chosen.pop();
        }
    }
}

/// Exact minimum cover: forced candidates, subsumed classes and dominated
/// candidates are removed first, then depth-first branch and bound on the
/// class with fewest candidates, bounded by a disjoint-class packing.
pub fn solve_exact(inst: &CoverInstance, node_budget: u64) -> Result<CoverSolution> {
    let reduced = reduce(inst)?;
    let all: Vec<usize> = (0..reduced.classes.len()).collect();
    let weighted: Vec<CoverClass> = reduced
        .classes
        .iter()
        .map(|s| CoverClass {
            signature: s.clone(),
            multiplicity: 1,
        })
        .collect();
    let upper = greedy_on(inst.m, &weighted, &all);
    let root_lower = reduced.forced.len() + disjoint_packing(&reduced.classes, &all);
    let mut search = Search {
        classes: &reduced.classes,
        // one past greedy, so the search itself finds a solution of greedy size
        best: (0..upper.len() + 1).collect(),
        nodes: 0,
        budget: node_budget,
        exhausted: false,
    };
    search.run(&mut Vec::new(), &all);
    if search.exhausted {
        return Err(Error::BudgetExceeded {
            lower: root_lower,
            upper: reduced.forced.len() + upper.len(),
        });
    }
    let mut chosen = reduced.forced.clone();
    chosen.extend(&search.best);
    chosen.sort_unstable();
    debug_assert!(inst.is_cover(&chosen));
    if !inst.is_cover(&chosen) {
        return Err(Error::Internal("solver returned a non-cover".into()));
    }
    Ok(CoverSolution {
        chosen,
        optimal: true,
        certificate: Certificate {
            forced: reduced.forced,
            root_lower_bound: root_lower,
            nodes: search.nodes,
            classes_after_reduction: reduced.classes.len(),
            candidates_after_reduction: reduced.live.count(),
        },
    })
}
