//! Verification pipelines for the two families: a full pair sweep, a
//! structural per-case check that scales past the sweep, and the exact
//! solver. Each produces a deterministic [`VerificationReport`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::constructions::{
    build, gamma_formula, Certification, HandleKind, Theorem, TheoremInstance,
};
use crate::cover::{
    membership_rows, solve_exact, solve_greedy, CoverInstance, PairSweep, Signature,
};
use crate::error::{Error, Result};
use crate::field::prime_power;
use crate::group::{FiniteGroup, SubgroupSet};
use crate::linalg::Matrix;
use crate::oracle;
use crate::structural::SdpElem;
use crate::tabular::{TabularGroup, DEFAULT_SUBGROUP_CAP};

/// Unordered pairs (with repetition) of a group of order 10^4.
pub const DEFAULT_PAIR_BUDGET: u64 = 50_005_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Full,
    Structural,
    Exact,
    Oracle,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::Structural => "structural",
            Mode::Exact => "exact",
            Mode::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Machine,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Ordered pairs `((h1, v1), (h2, v2))` grouped by `K = <h1, h2>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseStats {
    /// Index of `K` among the subgroups of `H`.
    pub subgroup: usize,
    pub order: usize,
    /// `a`: `K = H`; `b`: `1 < K < H`; `c`: `K = 1`.
    pub case: char,
    pub ordered_pairs: u64,
    pub first_covered: u64,
    /// Pairs in no first-kind subgroup, keyed by the second-kind handles
    /// containing them.
    pub second_only: BTreeMap<Vec<usize>, u64>,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub mode: Mode,
    pub fields: Vec<(String, String)>,
    pub cases: Vec<CaseStats>,
    pub checks: Vec<Check>,
    /// Wall time; never rendered.
    pub runtime: Duration,
    expected: Option<u64>,
    computed: Option<u64>,
}

impl VerificationReport {
    fn new(mode: Mode) -> VerificationReport {
        VerificationReport {
            mode,
            fields: Vec::new(),
            cases: Vec::new(),
            checks: Vec::new(),
            runtime: Duration::ZERO,
            expected: None,
            computed: None,
        }
    }

    fn field(&mut self, key: &str, value: impl ToString) {
        self.fields.push((key.to_string(), value.to_string()));
    }

    fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        });
    }

    fn instance_fields(&mut self, inst: &TheoremInstance) {
        for line in inst.metadata().lines() {
            if let Some((k, v)) = line.split_once(": ") {
                self.field(k, v);
            }
        }
    }

    fn sigma(&mut self, expected: u64, computed: u64) {
        self.expected = Some(expected);
        self.computed = Some(computed);
        self.field("sigma2_claimed", expected);
        self.field("sigma2_computed", computed);
        self.check(
            "sigma2",
            expected == computed,
            format!("expected {expected}, computed {computed}"),
        );
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn get_check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn computed(&self) -> Option<u64> {
        self.computed
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    /// The error a failed report stands for.
    pub fn to_error(&self) -> Option<Error> {
        let failed = self.checks.iter().find(|c| !c.pass)?;
        if let (Some(expected), Some(computed)) = (self.expected, self.computed) {
            if expected != computed {
                return Some(Error::TheoremViolation { expected, computed });
            }
        }
        Some(Error::StructuralFailure(format!(
            "{}: {}",
            failed.name, failed.detail
        )))
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Text => self.render_text(),
            ReportFormat::Machine => self.render_machine(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "mode: {}", self.mode.name()).unwrap();
        for (k, v) in &self.fields {
            writeln!(out, "{k}: {v}").unwrap();
        }
        if !self.cases.is_empty() {
            writeln!(out, "cases (ordered pairs by K = <h1, h2>):").unwrap();
            writeln!(out, "  K    |K|  case  pairs  first-kind  second-kind only").unwrap();
            for c in &self.cases {
                writeln!(
                    out,
                    "  {:<4} {:<4} {:<5} {} {} {}",
                    c.subgroup,
                    c.order,
                    c.case,
                    c.ordered_pairs,
                    c.first_covered,
                    render_second(&c.second_only)
                )
                .unwrap();
            }
        }
        writeln!(out, "checks:").unwrap();
        for c in &self.checks {
            let mark = if c.pass { "pass" } else { "FAIL" };
            writeln!(out, "  [{mark}] {}: {}", c.name, c.detail).unwrap();
        }
        writeln!(
            out,
            "verdict: {}",
            if self.passed() { "pass" } else { "fail" }
        )
        .unwrap();
        out
    }

    fn render_machine(&self) -> String {
        let mut out = String::new();
        writeln!(out, "mode={}", self.mode.name()).unwrap();
        for (k, v) in &self.fields {
            writeln!(out, "{k}={v}").unwrap();
        }
        for c in &self.cases {
            let prefix = format!("case.{}", c.subgroup);
            writeln!(out, "{prefix}.order={}", c.order).unwrap();
            writeln!(out, "{prefix}.case={}", c.case).unwrap();
            writeln!(out, "{prefix}.ordered_pairs={}", c.ordered_pairs).unwrap();
            writeln!(out, "{prefix}.first_covered={}", c.first_covered).unwrap();
            writeln!(
                out,
                "{prefix}.second_only={}",
                render_second(&c.second_only)
            )
            .unwrap();
        }
        for c in &self.checks {
            writeln!(
                out,
                "check.{}={}",
                c.name,
                if c.pass { "pass" } else { "fail" }
            )
            .unwrap();
            writeln!(out, "check.{}.detail={}", c.name, c.detail).unwrap();
        }
        writeln!(
            out,
            "verdict={}",
            if self.passed() { "pass" } else { "fail" }
        )
        .unwrap();
        out
    }
}

fn render_second(m: &BTreeMap<Vec<usize>, u64>) -> String {
    if m.is_empty() {
        return "-".into();
    }
    m.iter()
        .map(|(k, n)| {
            let ks: Vec<String> = k.iter().map(usize::to_string).collect();
            format!("{{{}}}:{n}", ks.join(","))
        })
        .collect::<Vec<_>>()
        .join(";")
}

fn fmt_elem(x: SdpElem) -> String {
    format!("({},{})", x.h, x.v)
}

// ---- parity ----

/// Prime powers `Q = p^t` with `Q^2 + Q + 1 = value`, searched over every
/// `Q` with `Q^2 + Q + 1 <= value`.
pub fn conjecture_forms(value: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q * q + q < value {
        if let Some((p, t)) = prime_power(q) {
            if q * q + q + 1 == value {
                out.push((p, t));
            }
        }
        q += 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parity {
    pub value: u64,
    pub even: bool,
    /// All prime powers `p^t` with `p^{2t} + p^t + 1 = value`.
    pub forms: Vec<(u64, u32)>,
    /// Those with `p` dividing `|G|`.
    pub forms_dividing: Vec<(u64, u32)>,
}

pub fn parity(value: u64, group_order: u64) -> Parity {
    let forms = conjecture_forms(value);
    let forms_dividing = forms
        .iter()
        .copied()
        .filter(|(p, _)| group_order.is_multiple_of(*p))
        .collect();
    Parity {
        value,
        even: value.is_multiple_of(2),
        forms,
        forms_dividing,
    }
}

fn parity_fields(report: &mut VerificationReport, value: u64, group_order: u64) {
    let par = parity(value, group_order);
    let show = |v: &[(u64, u32)]| {
        if v.is_empty() {
            "none".to_string()
        } else {
            v.iter()
                .map(|(p, t)| format!("{p}^{t}"))
                .collect::<Vec<_>>()
                .join(",")
        }
    };
    report.field("parity_even", par.even);
    report.field("parity_forms", show(&par.forms));
    report.field("parity_forms_dividing_order", show(&par.forms_dividing));
    report.check(
        "conjecture_form",
        par.forms_dividing.is_empty(),
        format!(
            "{value} = p^2t + p^t + 1 for a prime p dividing |G|: {}",
            show(&par.forms_dividing)
        ),
    );
}

// ---- subgroups of H and pair categories ----

struct HSubgroups {
    list: Vec<SubgroupSet>,
    /// `cat[h1 * n + h2]`: index of `<h1, h2>` in `list`.
    cat: Vec<u32>,
    n: usize,
}

impl HSubgroups {
    fn new(h: &TabularGroup) -> Result<HSubgroups> {
        let list = h.all_subgroups(DEFAULT_SUBGROUP_CAP.max(h.order()))?;
        let n = h.order();
        let mut cat = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let k = crate::group::closure(h, &[a, b], n)?;
                let idx = list
                    .iter()
                    .position(|s| *s == k)
                    .ok_or_else(|| Error::Internal("subgroup missing from lattice".into()))?;
                cat[a * n + b] = idx as u32;
            }
        }
        Ok(HSubgroups { list, cat, n })
    }

    fn category(&self, h1: usize, h2: usize) -> usize {
        self.cat[h1 * self.n + h2] as usize
    }

    fn case(&self, k: usize) -> char {
        match self.list[k].order() {
            1 => 'c',
            o if o == self.n => 'a',
            _ => 'b',
        }
    }
}

fn second_containing(inst: &TheoremInstance, k: &SubgroupSet) -> Vec<usize> {
    inst.second_type()
        .filter(|(_, m)| match &m.kind {
            HandleKind::Second { complement } => {
                k.elements().iter().all(|x| complement.contains(x))
            }
            HandleKind::First { .. } => false,
        })
        .map(|(j, _)| j)
        .collect()
}

fn labels(inst: &TheoremInstance) -> Vec<String> {
    inst.handles().iter().map(|m| m.label()).collect()
}

// ---- full sweep ----

/// Membership of every element in every maximal handle, and the pair
/// classes of all unordered pairs.
pub struct FullSweep {
    rows: Vec<Signature>,
    sweep: PairSweep,
    instance: CoverInstance,
    hsubs: HSubgroups,
    pairs: u64,
}

impl FullSweep {
    pub fn new(inst: &TheoremInstance, pair_budget: u64) -> Result<FullSweep> {
        let g = inst.group();
        let n = g.order() as u64;
        let pairs = n * (n + 1) / 2;
        if pairs > pair_budget {
            return Err(Error::TooLarge(format!(
                "{pairs} unordered pairs exceed the pair budget {pair_budget}; use structural mode"
            )));
        }
        let m = inst.handles().len();
        let rows = membership_rows(g.order(), m, |x, j| inst.member(j, g.element(x)));
        let hsubs = HSubgroups::new(inst.module().group())?;
        let vsize = g.normal_order() as usize;
        let sweep =
            crate::cover::sweep_pairs(&rows, |x, y| hsubs.category(x / vsize, y / vsize) as u32);
        if let Some((x, y)) = sweep.first_empty {
            return Err(Error::TwoGenerated(
                fmt_elem(g.element(x)),
                fmt_elem(g.element(y)),
            ));
        }
        let instance = CoverInstance::new(m, labels(inst), sweep.classes())?;
        Ok(FullSweep {
            rows,
            sweep,
            instance,
            hsubs,
            pairs,
        })
    }

    pub fn cover_instance(&self) -> &CoverInstance {
        &self.instance
    }

    pub fn pairs(&self) -> u64 {
        self.pairs
    }

    /// Per-`K` statistics read off the sweep.
    pub fn case_stats(&self, inst: &TheoremInstance) -> Vec<CaseStats> {
        let m = inst.handles().len();
        let first = Signature::from_indices(m, inst.first_type().map(|(j, _)| j));
        let mut by_k: BTreeMap<usize, CaseStats> = BTreeMap::new();
        for ((cat, sig), tally) in &self.sweep.tallies {
            let k = *cat as usize;
            let entry = by_k.entry(k).or_insert_with(|| CaseStats {
                subgroup: k,
                order: self.hsubs.list[k].order(),
                case: self.hsubs.case(k),
                ordered_pairs: 0,
                first_covered: 0,
                second_only: BTreeMap::new(),
            });
            entry.ordered_pairs += tally.ordered;
            if sig.intersects(&first) {
                entry.first_covered += tally.ordered;
            } else {
                *entry.second_only.entry(sig.ones().collect()).or_default() += tally.ordered;
            }
        }
        by_k.into_values().collect()
    }

    /// Least unordered pair `(x, y)`, `x <= y`, whose signature satisfies `pred`.
    fn first_pair(&self, pred: impl Fn(&Signature) -> bool + Sync) -> Option<(usize, usize)> {
        let n = self.rows.len();
        (0..n).into_par_iter().find_map_first(|x| {
            (x..n)
                .find(|&y| pred(&self.rows[x].and(&self.rows[y])))
                .map(|y| (x, y))
        })
    }
}

/// The proposed cover with the given second-kind handles (indices into
/// [`TheoremInstance::second_type`] order) in place of the default ones.
pub fn cover_with_second(inst: &TheoremInstance, seconds: &[usize]) -> Result<Vec<usize>> {
    let all: Vec<usize> = inst.second_type().map(|(j, _)| j).collect();
    let mut cover: Vec<usize> = inst.first_type().map(|(j, _)| j).collect();
    for &s in seconds {
        let j = *all.get(s).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "second-kind index {s} out of range 0..{}",
                all.len()
            ))
        })?;
        cover.push(j);
    }
    cover.sort_unstable();
    cover.dedup();
    Ok(cover)
}

/// Every pair of `G` against `cover`, plus the minimality ingredients.
pub fn verify_full_sweep(
    inst: &TheoremInstance,
    cover: &[usize],
    pair_budget: u64,
) -> Result<VerificationReport> {
    let sweep = FullSweep::new(inst, pair_budget)?;
    verify_full_sweep_with(inst, &sweep, cover)
}

pub fn verify_full_sweep_with(
    inst: &TheoremInstance,
    sweep: &FullSweep,
    cover: &[usize],
) -> Result<VerificationReport> {
    let start = Instant::now();
    let g = inst.group();
    let m = inst.handles().len();
    if let Some(&bad) = cover.iter().find(|&&j| j >= m) {
        return Err(Error::InvalidParameter(format!(
            "handle {bad} out of range 0..{m}"
        )));
    }
    let mut report = VerificationReport::new(Mode::Full);
    report.instance_fields(inst);
    let cover_sig = Signature::from_indices(m, cover.iter().copied());
    let cover_labels: Vec<String> = cover.iter().map(|&j| inst.handles()[j].label()).collect();
    report.field("pairs_swept", sweep.pairs());
    report.field("pair_classes", sweep.instance.classes().len());
    report.field("cover_size", cover.len());
    report.field(
        "cover_second_kind",
        cover_labels
            .iter()
            .zip(cover)
            .filter(|(_, &j)| !inst.handles()[j].is_first())
            .map(|(l, _)| l.as_str())
            .collect::<Vec<_>>()
            .join(" "),
    );

    // coverage
    let uncovered = sweep
        .instance
        .classes()
        .iter()
        .any(|c| !c.signature.intersects(&cover_sig));
    if uncovered {
        let (x, y) = sweep
            .first_pair(|s| !s.intersects(&cover_sig))
            .expect("uncovered class has a pair");
        let (ex, ey) = (g.element(x), g.element(y));
        let coverers: Vec<String> = sweep.rows[x]
            .and(&sweep.rows[y])
            .ones()
            .map(|j| inst.handles()[j].label())
            .collect();
        report.field(
            "uncovered_pair",
            format!("{} {}", fmt_elem(ex), fmt_elem(ey)),
        );
        report.check(
            "coverage",
            false,
            format!(
                "pair {} {} is uncovered; it lies only in {}",
                fmt_elem(ex),
                fmt_elem(ey),
                coverers.join(" ")
            ),
        );
    } else {
        report.check(
            "coverage",
            true,
            format!("all {} unordered pairs covered", sweep.pairs()),
        );
    }

    // two-generated maximal subgroups are forced
    let witnesses = inst.all_witnesses()?;
    let mut unique = 0usize;
    let mut closure_certified = 0usize;
    let mut witness_failures = Vec::new();
    for (j, w) in &witnesses {
        let sig = sweep.rows[g.index_of(w.x)].and(&sweep.rows[g.index_of(w.y)]);
        if sig.count() == 1 && sig.get(*j) {
            unique += 1;
        } else {
            witness_failures.push(inst.handles()[*j].label());
        }
        if w.certification == Certification::Closure {
            closure_certified += 1;
        }
    }
    if let Some((j, w)) = witnesses.first() {
        report.field(
            "witness_sample",
            format!(
                "{} = <{}, {}>",
                inst.handles()[*j].label(),
                fmt_elem(w.x),
                fmt_elem(w.y)
            ),
        );
    }
    report.check(
        "two_generator_witnesses",
        witness_failures.is_empty() && witnesses.len() as u64 == inst.gamma(),
        format!(
            "{unique} of {} first-kind subgroups have a generating pair covered by no other maximal subgroup ({closure_certified} certified by closure)",
            inst.gamma()
        ),
    );
    let mut mandatory: Vec<usize> = witnesses.iter().map(|(j, _)| *j).collect();
    mandatory.extend(sweep.instance.mandatory());
    mandatory.sort_unstable();
    mandatory.dedup();
    let missing: Vec<String> = mandatory
        .iter()
        .filter(|j| !cover_sig.get(**j))
        .map(|&j| inst.handles()[j].label())
        .collect();
    report.field("mandatory", mandatory.len());
    report.check(
        "mandatory_in_cover",
        missing.is_empty(),
        if missing.is_empty() {
            format!("all {} mandatory subgroups present", mandatory.len())
        } else {
            format!("missing {}", missing.join(" "))
        },
    );

    // each non-mandatory member of the cover is the sole coverer of a pair
    let mut redundant = Vec::new();
    let mut needed = Vec::new();
    for &j in cover.iter().filter(|j| mandatory.binary_search(j).is_err()) {
        let sole = |s: &Signature| {
            let t = s.and(&cover_sig);
            t.count() == 1 && t.get(j)
        };
        if sweep.instance.classes().iter().any(|c| sole(&c.signature)) {
            let (x, y) = sweep.first_pair(sole).expect("class has a pair");
            needed.push(format!(
                "{} alone covers {} {}",
                inst.handles()[j].label(),
                fmt_elem(g.element(x)),
                fmt_elem(g.element(y))
            ));
        } else {
            redundant.push(inst.handles()[j].label());
        }
    }
    report.check(
        "necessity",
        redundant.is_empty(),
        if redundant.is_empty() {
            if needed.is_empty() {
                "every member is mandatory".to_string()
            } else {
                needed.join("; ")
            }
        } else {
            format!("removable: {}", redundant.join(" "))
        },
    );

    report.sigma(inst.expected_sigma2(), cover.len() as u64);
    parity_fields(&mut report, cover.len() as u64, g.order() as u64);
    report.runtime = start.elapsed();
    Ok(report)
}

// ---- exact ----

/// Minimum 2-cover over all maximal subgroups, by the exact solver.
pub fn verify_exact_minimum(
    inst: &TheoremInstance,
    pair_budget: u64,
    node_budget: u64,
) -> Result<VerificationReport> {
    let sweep = FullSweep::new(inst, pair_budget)?;
    verify_exact_minimum_with(inst, &sweep, node_budget)
}

pub fn verify_exact_minimum_with(
    inst: &TheoremInstance,
    sweep: &FullSweep,
    node_budget: u64,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let cover_inst = sweep.cover_instance();
    let mut report = VerificationReport::new(Mode::Exact);
    report.instance_fields(inst);
    report.field("pairs_swept", sweep.pairs());
    report.field("pair_classes", cover_inst.classes().len());
    report.field("candidates", cover_inst.candidates());

    let greedy = solve_greedy(cover_inst);
    let exact = solve_exact(cover_inst, node_budget)?;
    report.field("greedy_size", greedy.size());
    report.field("search_nodes", exact.certificate.nodes);
    report.field("root_lower_bound", exact.certificate.root_lower_bound);
    report.field(
        "classes_after_reduction",
        exact.certificate.classes_after_reduction,
    );
    report.check(
        "solution_is_cover",
        cover_inst.is_cover(&exact.chosen),
        format!(
            "{} subgroups meet all {} pair classes",
            exact.size(),
            cover_inst.classes().len()
        ),
    );

    let mandatory = cover_inst.mandatory();
    let first_m = mandatory
        .iter()
        .filter(|&&j| inst.handles()[j].is_first())
        .count();
    let second_m: Vec<usize> = mandatory
        .iter()
        .copied()
        .filter(|&j| !inst.handles()[j].is_first())
        .collect();
    report.field("mandatory", mandatory.len());
    report.field("mandatory_first_kind", first_m);
    report.field(
        "mandatory_second_kind",
        second_m
            .iter()
            .map(|&j| inst.handles()[j].label())
            .collect::<Vec<_>>()
            .join(" "),
    );
    let expected_mandatory: Vec<usize> = match inst.theorem {
        Theorem::One { .. } => inst.first_type().map(|(j, _)| j).collect(),
        Theorem::Two { .. } => {
            let mut v: Vec<usize> = inst.first_type().map(|(j, _)| j).collect();
            v.extend(inst.second_type().filter_map(|(j, m)| match &m.kind {
                HandleKind::Second { complement } if complement.len() == 2 => Some(j),
                _ => None,
            }));
            v
        }
    };
    report.check(
        "mandatory_set",
        mandatory == expected_mandatory,
        format!(
            "{first_m} first-kind and {} second-kind subgroups are sole coverers of some pair",
            second_m.len()
        ),
    );
    let chosen_second: Vec<String> = exact
        .chosen
        .iter()
        .filter(|&&j| !inst.handles()[j].is_first())
        .map(|&j| inst.handles()[j].label())
        .collect();
    report.field("solution_second_kind", chosen_second.join(" "));
    report.check(
        "greedy_bound",
        greedy.size() >= exact.size(),
        format!("greedy {} >= exact {}", greedy.size(), exact.size()),
    );
    report.sigma(inst.expected_sigma2(), exact.size() as u64);
    parity_fields(
        &mut report,
        exact.size() as u64,
        inst.group().order() as u64,
    );
    report.runtime = start.elapsed();
    Ok(report)
}

/// `σ₂` of a tabular group through the same solver, against `expected`
/// when given.
pub fn verify_exact_tabular(
    name: &str,
    group: &TabularGroup,
    expected: Option<u64>,
    node_budget: u64,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = VerificationReport::new(Mode::Oracle);
    report.field("group", name);
    report.field("group_order", group.order());
    let res = oracle::sigma2(group, node_budget)?;
    report.field("candidates", res.candidates);
    report.field("pair_classes", res.classes);
    report.field("mandatory", res.solution.certificate.forced.len());
    report.check(
        "solution_found",
        res.solution.optimal,
        format!("minimum over {} maximal subgroups", res.candidates),
    );
    match expected {
        Some(e) => report.sigma(e, res.value as u64),
        None => {
            report.computed = Some(res.value as u64);
            report.field("sigma2_computed", res.value);
        }
    }
    report.runtime = start.elapsed();
    Ok(report)
}

/// Covering number `σ` of a tabular group.
pub fn report_sigma(
    name: &str,
    group: &TabularGroup,
    node_budget: u64,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = VerificationReport::new(Mode::Oracle);
    report.field("group", name);
    report.field("group_order", group.order());
    let res = oracle::sigma(group, node_budget)?;
    report.field("candidates", res.candidates);
    report.field("sigma_computed", res.value);
    report.computed = Some(res.value as u64);
    let v = res.value as u64 - 1;
    report.check(
        "prime_power_plus_one",
        prime_power(v).is_some(),
        format!("sigma - 1 = {v}"),
    );
    report.runtime = start.elapsed();
    Ok(report)
}

// ---- structural ----

/// Ordered pairs `((h1, v1), (h2, v2))`, `v1, v2` in `V^u`, lying in no
/// first-kind maximal subgroup.
///
/// With `B = {(s - s^h1, s - s^h2) : s in V}`, an `F`-subspace of `V^2`,
/// the pair lies in some `W H^t` iff the images of the `u` columns
/// `(v1_i, v2_i)` in `V^2 / B` are `F`-dependent. So the count is
/// `|B|^u` times the number of independent `u`-tuples in a space of
/// dimension `d = dim_F V^2/B`.
pub fn first_uncovered_count(inst: &TheoremInstance, h1: usize, h2: usize) -> Result<u64> {
    let module = inst.module();
    let field = module.field();
    let n = module.dim();
    let u = inst.group().copies() as u32;
    let id = Matrix::identity(n);
    let a1 = module.matrix(h1).sub(field, &id);
    let a2 = module.matrix(h2).sub(field, &id);
    let mut m = Matrix::zero(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = a1[(i, j)];
            m[(i, n + j)] = a2[(i, j)];
        }
    }
    let rank = m.rank(field) as u32;
    let p = field.characteristic();
    let e = module.end_degree() as u32;
    let quotient_dim = 2 * n as u32 - rank;
    if !quotient_dim.is_multiple_of(e) || !rank.is_multiple_of(e) {
        return Err(Error::StructuralFailure(format!(
            "B for ({h1},{h2}) has dimension {rank} over the prime field, not a multiple of {e}"
        )));
    }
    let q = module.q();
    let qd = p.pow(quotient_dim);
    let mut count = p.pow(rank).pow(u);
    for i in 0..u {
        let qi = q.pow(i);
        if qi >= qd {
            return Ok(0);
        }
        count *= qd - qi;
    }
    Ok(count)
}

/// Per-`K` statistics from the counting formula.
pub fn structural_case_stats(inst: &TheoremInstance) -> Result<Vec<CaseStats>> {
    let h = inst.module().group();
    let hsubs = HSubgroups::new(h)?;
    let vv = inst.group().normal_order().pow(2);
    let mut by_k: BTreeMap<usize, CaseStats> = BTreeMap::new();
    for h1 in 0..h.order() {
        for h2 in 0..h.order() {
            let k = hsubs.category(h1, h2);
            let unc = first_uncovered_count(inst, h1, h2)?;
            let entry = by_k.entry(k).or_insert_with(|| CaseStats {
                subgroup: k,
                order: hsubs.list[k].order(),
                case: hsubs.case(k),
                ordered_pairs: 0,
                first_covered: 0,
                second_only: BTreeMap::new(),
            });
            entry.ordered_pairs += vv;
            entry.first_covered += vv - unc;
            if unc > 0 {
                *entry
                    .second_only
                    .entry(second_containing(inst, &hsubs.list[k]))
                    .or_default() += unc;
            }
        }
    }
    Ok(by_k.into_values().collect())
}

/// Minimum number of second-kind handles meeting every coverer set of the
/// pairs outside all first-kind subgroups. `None` if some such set is empty.
fn second_kind_hitting(
    inst: &TheoremInstance,
    cases: &[CaseStats],
    node_budget: u64,
) -> Result<Option<Vec<usize>>> {
    let seconds: Vec<usize> = inst.second_type().map(|(j, _)| j).collect();
    let mut classes = Vec::new();
    for c in cases {
        for (coverers, &count) in &c.second_only {
            if coverers.is_empty() {
                return Ok(None);
            }
            let idx = coverers
                .iter()
                .map(|j| seconds.iter().position(|s| s == j).unwrap());
            classes.push((Signature::from_indices(seconds.len(), idx), count));
        }
    }
    if classes.is_empty() {
        return Ok(Some(Vec::new()));
    }
    let labels = seconds.iter().map(|&j| inst.handles()[j].label()).collect();
    let sub = CoverInstance::new(seconds.len(), labels, classes)?;
    let sol = solve_exact(&sub, node_budget)?;
    Ok(Some(sol.chosen.iter().map(|&i| seconds[i]).collect()))
}

/// Case analysis at module level, certified first against the full sweep
/// of the smallest instance of the same family.
pub fn verify_structural(
    inst: &TheoremInstance,
    pair_budget: u64,
    node_budget: u64,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let smallest = inst.theorem.smallest();
    let reference_stats = if smallest == inst.theorem {
        let sweep = FullSweep::new(inst, pair_budget)?;
        (sweep.case_stats(inst), structural_case_stats(inst)?)
    } else {
        let base = build(smallest)?;
        let sweep = FullSweep::new(&base, pair_budget)?;
        (sweep.case_stats(&base), structural_case_stats(&base)?)
    };
    let mut report = structural_report(inst, node_budget)?;
    let (swept, formula) = reference_stats;
    let agree = swept == formula;
    let detail = if agree {
        format!(
            "{smallest}: {} subgroup classes agree with the full sweep",
            swept.len()
        )
    } else {
        let first_diff = swept
            .iter()
            .zip(&formula)
            .find(|(a, b)| a != b)
            .map(|(a, _)| format!("subgroup {}", a.subgroup))
            .unwrap_or_else(|| "class count".into());
        format!("{smallest}: mismatch at {first_diff}")
    };
    report.checks.insert(
        0,
        Check {
            name: "certified_against_sweep".into(),
            pass: agree,
            detail,
        },
    );
    report.runtime = start.elapsed();
    Ok(report)
}

/// The structural checks alone, without the reference sweep.
pub fn structural_report(inst: &TheoremInstance, node_budget: u64) -> Result<VerificationReport> {
    let g = inst.group();
    let module = inst.module();
    let h = module.group();
    let u = g.copies();
    let mut report = VerificationReport::new(Mode::Structural);
    report.instance_fields(inst);

    let cases = structural_case_stats(inst)?;
    report.cases = cases.clone();

    // counting
    let q = module.q();
    let subs_ok = inst.maximal_submodules().len() as u64 == (q.pow(u as u32) - 1) / (q - 1);
    let gamma_ok = inst.first_type().count() as u64 == gamma_formula(q, module.r() as u32);
    report.check(
        "counting",
        subs_ok && gamma_ok,
        format!(
            "{} maximal submodules, {} first-kind subgroups",
            inst.maximal_submodules().len(),
            inst.first_type().count()
        ),
    );

    // case a: K = H is never in a second-kind subgroup, so first-kind must cover
    let a_left: u64 = cases
        .iter()
        .filter(|c| c.case == 'a')
        .flat_map(|c| c.second_only.values())
        .sum();
    report.check(
        "case_a",
        a_left == 0 && cases.iter().any(|c| c.case == 'a'),
        format!("{a_left} pairs with <h1, h2> = H outside every first-kind subgroup"),
    );

    // fixed points and the conjugation step
    let p = match inst.theorem {
        Theorem::One { .. } => None,
        Theorem::Two { p, .. } => Some(p as usize),
    };
    let mut fpf = Vec::new();
    let mut fixed = Vec::new();
    let mut fp_ok = true;
    for x in 1..h.order() {
        let c = module.fixed_points(x, u);
        let ord = h.elem_order(x);
        let should_be_free = p.is_none_or(|p| ord == p);
        if c.is_empty() {
            fpf.push(x);
        } else {
            fixed.push(x);
        }
        if c.is_empty() != should_be_free {
            fp_ok = false;
        }
    }
    report.check(
        "fixed_points",
        fp_ok,
        format!(
            "C(h) = 0 for {} elements, nonzero for {} elements of order 2",
            fpf.len(),
            fixed.len()
        ),
    );
    let conj = conjugation_solve(inst, &fpf);
    report.check(
        "conjugation_solve",
        conj.is_ok(),
        match conj {
            Ok(n) => format!("(h, v) conjugated to (h, 0) for {n} pairs"),
            Err(e) => e,
        },
    );

    // every single vector lies in a maximal submodule
    let single = (0..g.normal_order()).into_par_iter().find_first(|&v| {
        !inst
            .maximal_submodules()
            .iter()
            .any(|w| module.apply_functional(&w.functional, v) == 0)
    });
    report.check(
        "vectors_in_maximal_submodules",
        single.is_none() && module.generation_number(u) == 2,
        match single {
            None => format!(
                "all {} vectors; d_H(V^{u}) = {}",
                g.normal_order(),
                module.generation_number(u)
            ),
            Some(v) => format!("vector {v} lies in no maximal submodule"),
        },
    );

    // case c: a module-generating pair of V^u avoids every first-kind subgroup
    let gen = module.generating_witness(u)?;
    let (x, y) = (g.translation(gen[0]), g.translation(gen[1]));
    let in_first = inst
        .first_type()
        .any(|(j, _)| inst.member(j, x) && inst.member(j, y));
    let in_all_second = inst
        .second_type()
        .all(|(j, _)| inst.member(j, x) && inst.member(j, y));
    report.field("case_c_witness", format!("{} {}", fmt_elem(x), fmt_elem(y)));
    report.check(
        "case_c",
        !in_first && in_all_second && module.spin_packed(&gen, u).len() == u * module.dim(),
        "a pair generating V^u lies in every second-kind subgroup and in no first-kind one",
    );

    // order-2 elements with fixed points: (h, (x, 0, 0)) and (1, (0, w1, w2))
    // lie only in V^u<h>. The first choice is x in C_V(h); in characteristic
    // 2 that x lies in the image of 1 - h and the least x outside works.
    if matches!(inst.theorem, Theorem::Two { .. }) {
        let w = module.generating_witness(u - 1)?;
        let wparts = module.unpack(w[0], u - 1);
        let mut v2_parts = vec![0usize; u];
        v2_parts[1..u].copy_from_slice(&wparts[..u - 1]);
        let v2 = module.pack(&v2_parts);
        let b = g.translation(v2);
        let sole_coverer = |x: usize, a: SdpElem| {
            let cover: Vec<usize> = (0..inst.handles().len())
                .filter(|&j| inst.member(j, a) && inst.member(j, b))
                .collect();
            cover.len() == 1
                && matches!(&inst.handles()[cover[0]].kind,
                    HandleKind::Second { complement } if *complement == vec![0, x])
        };
        let embed = |x: usize, c: usize| {
            let mut parts = vec![0usize; u];
            parts[0] = c;
            SdpElem::new(x, module.pack(&parts))
        };
        let mut found = 0;
        let mut from_fixed = 0;
        let mut shown = Vec::new();
        for &x in &fixed {
            let fv = module.v_index(&module.fixed_points(x, 1)[0]);
            let pick = if sole_coverer(x, embed(x, fv)) {
                from_fixed += 1;
                Some(embed(x, fv))
            } else {
                (1..module.vsize())
                    .map(|c| embed(x, c))
                    .find(|&a| sole_coverer(x, a))
            };
            if let Some(a) = pick {
                if module.spin_packed(&[a.v, v2], u).len() == u * module.dim() {
                    found += 1;
                }
                shown.push(format!("{} {}", fmt_elem(a), fmt_elem(b)));
            }
        }
        report.field("order_two_witnesses", shown.join("; "));
        report.check(
            "order_two",
            found == fixed.len() && !fixed.is_empty(),
            format!(
                "{found} of {} elements h of order 2 have a pair lying only in V^u<h> \
                 ({from_fixed} with x fixed by h)",
                fixed.len()
            ),
        );
    }

    // first-kind subgroups are 2-generated, hence all forced
    let witnesses = inst.all_witnesses()?;
    let closure_certified = witnesses
        .iter()
        .filter(|(_, w)| w.certification == Certification::Closure)
        .count();
    let sole = witnesses.par_iter().all(|(j, w)| {
        (0..inst.handles().len()).all(|k| k == *j || !(inst.member(k, w.x) && inst.member(k, w.y)))
    });
    report.check(
        "first_kind_forced",
        sole && witnesses.len() as u64 == inst.gamma(),
        format!(
            "{} first-kind subgroups have a generating pair in no other maximal subgroup ({closure_certified} by closure)",
            witnesses.len()
        ),
    );

    // the remaining pairs need a hitting set of second-kind subgroups
    let hitting = second_kind_hitting(inst, &cases, node_budget)?;
    let computed = match &hitting {
        Some(chosen) => {
            report.field(
                "second_kind_chosen",
                chosen
                    .iter()
                    .map(|&j| inst.handles()[j].label())
                    .collect::<Vec<_>>()
                    .join(" "),
            );
            inst.gamma() + chosen.len() as u64
        }
        None => {
            report.check(
                "second_kind_hitting",
                false,
                "some pair lies in no maximal subgroup",
            );
            inst.gamma()
        }
    };
    report.sigma(inst.expected_sigma2(), computed);
    parity_fields(&mut report, computed, g.order() as u64);
    Ok(report)
}

/// For each fixed-point-free `h` and every `v` in `V^u`, solves
/// `t - t^h = -v` and checks `(1, t)^{-1} (h, v) (1, t) = (h, 0)`.
fn conjugation_solve(inst: &TheoremInstance, hs: &[usize]) -> std::result::Result<u64, String> {
    let g = inst.group();
    let module = inst.module();
    let field = module.field();
    let u = g.copies();
    let n = module.dim();
    let mut checked = 0u64;
    for &h in hs {
        let map = Matrix::identity(n).sub(field, module.matrix(h));
        let inv = map
            .inverse(field)
            .ok_or_else(|| format!("1 - h is singular for h = {h}"))?;
        let bad = (0..g.normal_order()).into_par_iter().find_first(|&v| {
            let minus = module.pow_coords(g.vneg(v), u);
            let t: Vec<_> = minus.chunks(n).flat_map(|c| inv.apply(field, c)).collect();
            let t = module.pow_from_coords(&t);
            let tt = g.translation(t);
            g.op(g.op(g.inverse(tt), SdpElem::new(h, v)), tt) != SdpElem::new(h, 0)
        });
        if let Some(v) = bad {
            return Err(format!("conjugation fails for h = {h}, v = {v}"));
        }
        checked += g.normal_order();
    }
    Ok(checked)
}

/// The `member()` set of a handle `member()` set is closed and
/// has the declared order. Exhaustive over `G`.
pub fn membership_closure(inst: &TheoremInstance, handle: usize) -> Result<bool> {
    let g = inst.group();
    let members: Vec<SdpElem> = g.elements().filter(|&x| inst.member(handle, x)).collect();
    if members.len() as u64 != inst.handles()[handle].order {
        return Ok(false);
    }
    let closed = members
        .par_iter()
        .all(|&x| members.iter().all(|&y| inst.member(handle, g.op(x, y))));
    Ok(closed)
}
