//! Semidirect products `V^u ⋊ H` with the product
//! `(h1, v1)(h2, v2) = (h1 h2, v1^{h2} + v2)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupElem};
use crate::module::{HModule, MAX_COPIES};

/// `(h, v)`: `h` indexes the element list of `H`, `v` is a packed vector of `V^u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SdpElem {
    pub h: u32,
    pub v: u64,
}

impl SdpElem {
    pub fn new(h: usize, v: u64) -> SdpElem {
        SdpElem { h: h as u32, v }
    }

    pub fn h(self) -> usize {
        self.h as usize
    }
}

#[derive(Debug, Clone)]
pub struct StructuralGroup {
    module: Arc<HModule>,
    copies: usize,
    vsize: u64,
}

impl StructuralGroup {
    pub fn new(module: Arc<HModule>, copies: usize) -> Result<StructuralGroup> {
        if copies == 0 || copies > MAX_COPIES {
            return Err(Error::InvalidParameter(format!("copy count {copies}")));
        }
        let vsize = (module.vsize() as u64)
            .checked_pow(copies as u32)
            .filter(|&s| {
                s.checked_mul(module.h_order() as u64)
                    .is_some_and(|n| n <= usize::MAX as u64)
            })
            .ok_or_else(|| Error::TooLarge("semidirect product order overflows".into()))?;
        Ok(StructuralGroup {
            module,
            copies,
            vsize,
        })
    }

    pub fn module(&self) -> &HModule {
        &self.module
    }

    pub fn module_arc(&self) -> &Arc<HModule> {
        &self.module
    }

    /// `u`, the number of copies of `V`.
    pub fn copies(&self) -> usize {
        self.copies
    }

    /// `|V^u|`.
    pub fn normal_order(&self) -> u64 {
        self.vsize
    }

    pub fn h_order(&self) -> usize {
        self.module.h_order()
    }

    pub fn contains(&self, x: SdpElem) -> bool {
        x.h() < self.h_order() && x.v < self.vsize
    }

    // vector helpers on V^u
    pub fn vadd(&self, a: u64, b: u64) -> u64 {
        self.module.pow_add(a, b, self.copies)
    }

    pub fn vneg(&self, a: u64) -> u64 {
        self.module.pow_neg(a, self.copies)
    }

    pub fn vsub(&self, a: u64, b: u64) -> u64 {
        self.module.pow_sub(a, b, self.copies)
    }

    pub fn vact(&self, a: u64, h: usize) -> u64 {
        self.module.pow_act(a, h, self.copies)
    }

    /// Checked product on tagged elements.
    pub fn sdp_multiply(&self, a: GroupElem, b: GroupElem) -> Result<GroupElem> {
        match (a, b) {
            (GroupElem::Structural(x), GroupElem::Structural(y))
                if self.contains(x) && self.contains(y) =>
            {
                Ok(GroupElem::Structural(self.op(x, y)))
            }
            _ => Err(Error::GroupMismatch),
        }
    }

    /// The projection `(h, v) -> h`.
    pub fn h_part(&self, x: SdpElem) -> usize {
        x.h()
    }

    pub fn translation(&self, v: u64) -> SdpElem {
        SdpElem { h: 0, v }
    }

    pub fn complement_elem(&self, h: usize) -> SdpElem {
        SdpElem::new(h, 0)
    }

    /// `h -> (1, v)^{-1} (h, 0) (1, v) = (h, v - v^h)`, listed over `H`.
    pub fn conjugate_complement(&self, v: u64) -> Vec<SdpElem> {
        let t = self.translation(v);
        (0..self.h_order())
            .map(|h| self.conjugate(self.complement_elem(h), t))
            .collect()
    }
}

impl FiniteGroup for StructuralGroup {
    type Elem = SdpElem;

    fn order(&self) -> usize {
        (self.vsize as usize) * self.h_order()
    }

    fn identity(&self) -> SdpElem {
        SdpElem { h: 0, v: 0 }
    }

    fn op(&self, a: SdpElem, b: SdpElem) -> SdpElem {
        let h = self.module.group().op(a.h(), b.h());
        SdpElem::new(h, self.vadd(self.vact(a.v, b.h()), b.v))
    }

    fn inverse(&self, a: SdpElem) -> SdpElem {
        let hi = self.module.group().inverse(a.h());
        SdpElem::new(hi, self.vneg(self.vact(a.v, hi)))
    }

    fn index_of(&self, a: SdpElem) -> usize {
        a.h() * self.vsize as usize + a.v as usize
    }

    fn element(&self, index: usize) -> SdpElem {
        SdpElem::new(
            index / self.vsize as usize,
            (index % self.vsize as usize) as u64,
        )
    }
}
