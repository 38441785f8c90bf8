//! The two families `G = V^3 ⋊ H` (quaternion `H` over `F_p`, dihedral `H`
//! over `F_{q^2}`) and their maximal subgroups.
//!
//! Maximal subgroups come in two kinds:
//! * `W H^t` for a maximal submodule `W` of `V^u` and `t` in `V^u`, where
//!   `H^t = {(h, t - t^h)}`; `(h, x)` lies in it iff `x - (t - t^h)` is in `W`.
//! * `V^u K` for a maximal subgroup `K` of `H`.

use std::fmt::{self, Write as _};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{is_prime, prime_power, Field, FieldElem};
use crate::group::{closure_order, FiniteGroup, DEFAULT_CLOSURE_CAP};
use crate::linalg::Matrix;
use crate::module::{HModule, MaximalSubmodule};
use crate::structural::{SdpElem, StructuralGroup};
use crate::tabular::{maximal_among, DEFAULT_SUBGROUP_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// Quaternion group of order 8 acting on `F_p^2`.
    One { p: u64 },
    /// Dihedral group of order `2p` acting on `F_{q^2}`, `p | q + 1`.
    Two { q: u64, p: u64 },
}

impl Theorem {
    pub fn number(self) -> u8 {
        match self {
            Theorem::One { .. } => 1,
            Theorem::Two { .. } => 2,
        }
    }

    /// `1 + p^2 + p^3 + p^4` or `q^2 + q^3 + q^4 + p`.
    pub fn expected_sigma2(self) -> u64 {
        match self {
            Theorem::One { p } => 1 + p.pow(2) + p.pow(3) + p.pow(4),
            Theorem::Two { q, p } => q.pow(2) + q.pow(3) + q.pow(4) + p,
        }
    }

    /// Size of the smallest instance of the same family.
    pub fn smallest(self) -> Theorem {
        match self {
            Theorem::One { .. } => Theorem::One { p: 3 },
            Theorem::Two { .. } => Theorem::Two { q: 2, p: 3 },
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theorem::One { p } => write!(f, "theorem 1 (p={p})"),
            Theorem::Two { q, p } => write!(f, "theorem 2 (q={q}, p={p})"),
        }
    }
}

/// `q^r (q^{r+1} - 1) / (q - 1)`.
pub fn gamma_formula(q: u64, r: u32) -> u64 {
    q.pow(r) * (q.pow(r + 1) - 1) / (q - 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HandleKind {
    /// `W H^t` with `t` the least vector of its coset `t + W`.
    First {
        submodule: usize,
        functional: Vec<usize>,
        rep: u64,
        /// Image of `rep` under the functional, an index of `V`.
        shift: usize,
    },
    /// `V^u K`, `K` given by sorted element indices of `H`.
    Second { complement: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubgroupHandle {
    pub kind: HandleKind,
    pub order: u64,
    mask: Vec<bool>,
}

impl SubgroupHandle {
    pub fn is_first(&self) -> bool {
        matches!(self.kind, HandleKind::First { .. })
    }

    pub fn member(&self, module: &HModule, g: SdpElem) -> bool {
        match &self.kind {
            HandleKind::First {
                functional, shift, ..
            } => {
                let h = g.h();
                let lhs = module.apply_functional(functional, g.v);
                lhs == module.v_sub(*shift, module.v_act(*shift, h))
            }
            HandleKind::Second { .. } => self.mask[g.h()],
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            HandleKind::First { submodule, rep, .. } => format!("W{submodule}H^{rep}"),
            HandleKind::Second { complement } => {
                let elems: Vec<String> = complement.iter().map(usize::to_string).collect();
                format!("V^uK{{{}}}", elems.join(","))
            }
        }
    }
}

/// How a two-generator witness was certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certification {
    Closure,
    /// The generators' `H`-parts generate `H` and their translation parts
    /// generate `W` as a module; relies on the cited generation theorem.
    Structural,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub x: SdpElem,
    pub y: SdpElem,
    pub certification: Certification,
}

#[derive(Debug, Clone)]
pub struct TheoremInstance {
    pub theorem: Theorem,
    group: StructuralGroup,
    submodules: Vec<MaximalSubmodule>,
    /// `coset_reps[w][s]`: least `t` with functional value `s`.
    coset_reps: Vec<Vec<u64>>,
    handles: Vec<SubgroupHandle>,
    extension: Option<Field>,
}

impl TheoremInstance {
    /// `G = V^{r+1} ⋊ H` for an arbitrary faithful irreducible module, with
    /// `u` copies of `V`.
    pub fn from_module(
        theorem: Theorem,
        module: HModule,
        copies: usize,
    ) -> Result<TheoremInstance> {
        let module = Arc::new(module);
        let group = StructuralGroup::new(module.clone(), copies)?;
        let submodules = module.maximal_submodules(copies)?;
        let vs = module.vsize();
        let mut coset_reps = Vec::with_capacity(submodules.len());
        for w in &submodules {
            let mut reps = vec![u64::MAX; vs];
            let mut missing = vs;
            for t in 0..group.normal_order() {
                let s = module.apply_functional(&w.functional, t);
                if reps[s] == u64::MAX {
                    reps[s] = t;
                    missing -= 1;
                    if missing == 0 {
                        break;
                    }
                }
            }
            if missing != 0 {
                return Err(Error::Internal("functional is not surjective".into()));
            }
            coset_reps.push(reps);
        }

        let normal_order = group.normal_order();
        let w_order = normal_order / vs as u64;
        let h_order = module.h_order() as u64;
        let mut handles = Vec::new();
        for (wi, w) in submodules.iter().enumerate() {
            let mut reps: Vec<(u64, usize)> = coset_reps[wi]
                .iter()
                .enumerate()
                .map(|(s, &t)| (t, s))
                .collect();
            reps.sort_unstable();
            for (t, s) in reps {
                handles.push(SubgroupHandle {
                    kind: HandleKind::First {
                        submodule: wi,
                        functional: w.functional.clone(),
                        rep: t,
                        shift: s,
                    },
                    order: w_order * h_order,
                    mask: Vec::new(),
                });
            }
        }
        let h = module.group();
        let h_max = maximal_among(&h.all_subgroups(DEFAULT_SUBGROUP_CAP.max(h.order()))?);
        for k in h_max {
            handles.push(SubgroupHandle {
                order: normal_order * k.order() as u64,
                mask: k.mask(),
                kind: HandleKind::Second {
                    complement: k.elements().to_vec(),
                },
            });
        }
        Ok(TheoremInstance {
            theorem,
            group,
            submodules,
            coset_reps,
            handles,
            extension: None,
        })
    }

    pub fn group(&self) -> &StructuralGroup {
        &self.group
    }

    pub fn module(&self) -> &HModule {
        self.group.module()
    }

    pub fn maximal_submodules(&self) -> &[MaximalSubmodule] {
        &self.submodules
    }

    /// Every maximal subgroup: first kind, then second kind.
    pub fn handles(&self) -> &[SubgroupHandle] {
        &self.handles
    }

    pub fn first_type(&self) -> impl Iterator<Item = (usize, &SubgroupHandle)> {
        self.handles
            .iter()
            .enumerate()
            .filter(|(_, m)| m.is_first())
    }

    pub fn second_type(&self) -> impl Iterator<Item = (usize, &SubgroupHandle)> {
        self.handles
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_first())
    }

    pub fn gamma(&self) -> u64 {
        self.first_type().count() as u64
    }

    pub fn q(&self) -> u64 {
        self.module().q()
    }

    pub fn r(&self) -> usize {
        self.module().r()
    }

    pub fn expected_sigma2(&self) -> u64 {
        self.theorem.expected_sigma2()
    }

    /// The field `F_{q^2}` underlying `V` for the dihedral family.
    pub fn extension(&self) -> Option<&Field> {
        self.extension.as_ref()
    }

    /// Index of `V` for an element of `F_{q^2}` (dihedral family only).
    pub fn extension_to_v(&self, x: FieldElem) -> Option<usize> {
        let e = self.extension.as_ref()?;
        let k = self.module().field();
        let coords: Vec<FieldElem> = e.coeffs(x).into_iter().map(|c| k.elem(c as u64)).collect();
        Some(self.module().v_index(&coords))
    }

    pub fn member(&self, handle: usize, g: SdpElem) -> bool {
        self.handles[handle].member(self.module(), g)
    }

    /// Index of the first-kind handle `W H^v`, reducing `v` modulo `W`.
    pub fn first_handle(&self, submodule: usize, v: u64) -> Option<usize> {
        let s = self
            .module()
            .apply_functional(&self.submodules[submodule].functional, v);
        let rep = self.coset_reps[submodule][s];
        self.handles.iter().position(|m| {
            matches!(&m.kind, HandleKind::First { submodule: w, rep: t, .. } if *w == submodule && *t == rep)
        })
    }

    /// Elements of `W` (packed vectors of `V^u`) in lexicographic order.
    pub fn submodule_elements(&self, submodule: usize) -> Vec<u64> {
        let module = self.module();
        let f = &self.submodules[submodule].functional;
        (0..self.group.normal_order())
            .filter(|&x| module.apply_functional(f, x) == 0)
            .collect()
    }

    /// Ordered pairs of `H` elements generating `H`, lexicographic.
    pub fn generating_pairs_of_h(&self) -> Vec<(usize, usize)> {
        let h = self.module().group();
        let n = h.order();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if closure_order(h, &[a, b], n) == n {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Two elements generating a first-kind maximal subgroup.
    ///
    /// The search runs once per submodule `W` on `W H`, over pairs
    /// `((h1, w1), (h2, w2))` with `(h1, h2)` generating `H` and `(w1, w2)`
    /// in lexicographic order; the result is conjugated by `(1, t)` and
    /// certified again on the target subgroup.
    pub fn two_generator_witness(&self, handle: usize) -> Result<Witness> {
        let HandleKind::First { submodule, .. } = &self.handles[handle].kind else {
            return Err(Error::InvalidParameter(
                "witness search needs a first-kind subgroup".into(),
            ));
        };
        let base = self.base_witness(*submodule)?;
        self.transport_witness(handle, base)
    }

    /// Witnesses for every first-kind handle, searching once per submodule.
    pub fn all_witnesses(&self) -> Result<Vec<(usize, Witness)>> {
        let bases: Vec<Witness> = (0..self.submodules.len())
            .into_par_iter()
            .map(|w| self.base_witness(w))
            .collect::<Result<_>>()?;
        let firsts: Vec<(usize, usize)> = self
            .first_type()
            .map(|(i, m)| match m.kind {
                HandleKind::First { submodule, .. } => (i, submodule),
                HandleKind::Second { .. } => unreachable!(),
            })
            .collect();
        firsts
            .into_par_iter()
            .map(|(i, w)| Ok((i, self.transport_witness(i, bases[w])?)))
            .collect()
    }

    fn transport_witness(&self, handle: usize, base: Witness) -> Result<Witness> {
        let HandleKind::First { rep, .. } = &self.handles[handle].kind else {
            return Err(Error::InvalidParameter(
                "witness search needs a first-kind subgroup".into(),
            ));
        };
        let g = &self.group;
        let t = g.translation(*rep);
        let (x, y) = (g.conjugate(base.x, t), g.conjugate(base.y, t));
        let m = &self.handles[handle];
        if !m.member(self.module(), x) || !m.member(self.module(), y) {
            return Err(Error::Internal(format!(
                "conjugated witness left {}",
                m.label()
            )));
        }
        let target = m.order as usize;
        if base.certification == Certification::Closure
            && closure_order(g, &[x, y], target) != target
        {
            return Err(Error::NotFound(m.label()));
        }
        Ok(Witness {
            x,
            y,
            certification: base.certification,
        })
    }

    fn base_witness(&self, submodule: usize) -> Result<Witness> {
        let g = &self.group;
        let module = self.module();
        let target = (g.normal_order() / module.vsize() as u64 * module.h_order() as u64) as usize;
        let elems = self.submodule_elements(submodule);
        let pairs = self.generating_pairs_of_h();
        if target > DEFAULT_CLOSURE_CAP {
            let u = g.copies();
            for &(h1, h2) in &pairs {
                for &w1 in &elems {
                    for &w2 in &elems {
                        if module.spin_packed(&[w1, w2], u).len() == (u - 1) * module.dim() {
                            return Ok(Witness {
                                x: SdpElem::new(h1, w1),
                                y: SdpElem::new(h2, w2),
                                certification: Certification::Structural,
                            });
                        }
                    }
                }
            }
            return Err(Error::NotFound(format!("W{submodule}H")));
        }
        for &(h1, h2) in &pairs {
            for &w1 in &elems {
                for &w2 in &elems {
                    let (x, y) = (SdpElem::new(h1, w1), SdpElem::new(h2, w2));
                    if closure_order(g, &[x, y], target) == target {
                        return Ok(Witness {
                            x,
                            y,
                            certification: Certification::Closure,
                        });
                    }
                }
            }
        }
        Err(Error::NotFound(format!("W{submodule}H")))
    }

    /// The cover the theorem asserts to be minimal: every first-kind
    /// subgroup, plus one second-kind subgroup (quaternion family) or the
    /// subgroups `V^3<h>` with `|h| = 2` (dihedral family).
    pub fn proposed_cover(&self) -> Vec<usize> {
        let mut cover: Vec<usize> = self.first_type().map(|(i, _)| i).collect();
        match self.theorem {
            Theorem::One { .. } => cover.extend(self.second_type().map(|(i, _)| i).take(1)),
            Theorem::Two { .. } => cover.extend(self.second_type().filter_map(|(i, m)| {
                matches!(&m.kind, HandleKind::Second { complement } if complement.len() == 2)
                    .then_some(i)
            })),
        }
        cover
    }

    /// `key: value` metadata lines.
    pub fn metadata(&self) -> String {
        let mut out = String::new();
        let (p, q) = match self.theorem {
            Theorem::One { p } => (p, p),
            Theorem::Two { q, p } => (p, q),
        };
        let module = self.module();
        let lines = [
            ("theorem", self.theorem.number().to_string()),
            ("p", p.to_string()),
            ("q", q.to_string()),
            ("h_order", module.h_order().to_string()),
            ("v_order", module.vsize().to_string()),
            ("copies", self.group.copies().to_string()),
            ("end_field_order", module.q().to_string()),
            ("r", module.r().to_string()),
            ("group_order", self.group.order().to_string()),
            ("maximal_submodules", self.submodules.len().to_string()),
            ("gamma", self.gamma().to_string()),
            (
                "gamma_formula",
                gamma_formula(module.q(), module.r() as u32).to_string(),
            ),
            ("first_type", self.first_type().count().to_string()),
            ("second_type", self.second_type().count().to_string()),
            ("expected_sigma2", self.expected_sigma2().to_string()),
        ];
        for (k, v) in lines {
            writeln!(out, "{k}: {v}").unwrap();
        }
        out
    }
}

/// Least `(a, b)` in `F_p^2` with `a^2 + b^2 = -1`.
pub fn sum_of_squares_minus_one(field: &Field) -> Option<(FieldElem, FieldElem)> {
    let minus_one = field.neg(FieldElem::ONE);
    field
        .elements()
        .flat_map(|a| field.elements().map(move |b| (a, b)))
        .find(|&(a, b)| field.add(field.mul(a, a), field.mul(b, b)) == minus_one)
}

/// `V^3 ⋊ Q_8` with `Q_8 = <i, j>` inside `GL(2, p)`,
/// `i = [[0, -1], [1, 0]]`, `j = [[a, b], [b, -a]]`.
pub fn build_theorem1(p: u64) -> Result<TheoremInstance> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidParameter(format!(
            "p = {p} must be an odd prime"
        )));
    }
    let field = Field::new(p, 1)?;
    let (a, b) = sum_of_squares_minus_one(&field)
        .ok_or_else(|| Error::Internal(format!("no a^2 + b^2 = -1 in F_{p}")))?;
    let i = Matrix::from_ints(&field, &[&[0, -1], &[1, 0]]);
    let j = Matrix::from_rows(&[vec![a, b], vec![b, field.neg(a)]]);
    let module = HModule::new(field, &[i, j])?;
    let h = module.group();
    let (gi, gj) = (module.generators()[0], module.generators()[1]);
    let relations = h.order() == 8
        && h.elem_order(gi) == 4
        && h.op(gi, gi) == h.op(gj, gj)
        && h.conjugate(gi, gj) == h.inverse(gi);
    if !relations {
        return Err(Error::Internal("quaternion relations fail".into()));
    }
    if module.q() != p || module.r() != 2 {
        return Err(Error::Internal(format!(
            "expected End of order {p} and r = 2, got {} and {}",
            module.q(),
            module.r()
        )));
    }
    TheoremInstance::from_module(Theorem::One { p }, module, 3)
}

/// `V^3 ⋊ D_{2p}` with `V = F_{q^2}`, `a` multiplying by an element of order
/// `p` and `b` the Frobenius `x -> x^q`.
pub fn build_theorem2(q: u64, p: u64) -> Result<TheoremInstance> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidParameter(format!(
            "p = {p} must be an odd prime"
        )));
    }
    let (ell, m) = prime_power(q)
        .ok_or_else(|| Error::InvalidParameter(format!("q = {q} is not a prime power")))?;
    if !(q + 1).is_multiple_of(p) {
        return Err(Error::InvalidParameter(format!(
            "p = {p} does not divide q + 1 = {}",
            q + 1
        )));
    }
    let ext = Field::new(ell, 2 * m)?;
    let k = Field::new(ell, 1)?;
    let n = 2 * m as usize;
    let alpha = ext.element_of_order(p)?;
    let basis: Vec<FieldElem> = (0..n)
        .map(|i| {
            let mut c = vec![0u32; n];
            c[i] = 1;
            ext.from_coeffs(&c)
        })
        .collect();
    let to_row = |x: FieldElem| -> Vec<FieldElem> {
        ext.coeffs(x)
            .into_iter()
            .map(|c| k.elem(c as u64))
            .collect()
    };
    let a = Matrix::from_rows(
        &basis
            .iter()
            .map(|&e| to_row(ext.mul(e, alpha)))
            .collect::<Vec<_>>(),
    );
    let b = Matrix::from_rows(
        &basis
            .iter()
            .map(|&e| to_row(ext.frobenius(e, q)))
            .collect::<Vec<_>>(),
    );
    let module = HModule::new(k, &[a, b])?;
    let h = module.group();
    let (ga, gb) = (module.generators()[0], module.generators()[1]);
    let relations = h.order() as u64 == 2 * p
        && h.elem_order(ga) as u64 == p
        && h.elem_order(gb) == 2
        && h.conjugate(ga, gb) == h.inverse(ga);
    if !relations {
        return Err(Error::Internal("dihedral relations fail".into()));
    }
    if module.q() != q || module.r() != 2 {
        return Err(Error::Internal(format!(
            "expected End of order {q} and r = 2, got {} and {}",
            module.q(),
            module.r()
        )));
    }
    let mut inst = TheoremInstance::from_module(Theorem::Two { q, p }, module, 3)?;
    inst.extension = Some(ext);
    Ok(inst)
}

pub fn build(theorem: Theorem) -> Result<TheoremInstance> {
    match theorem {
        Theorem::One { p } => build_theorem1(p),
        Theorem::Two { q, p } => build_theorem2(q, p),
    }
}
