//! Group abstraction shared by structural semidirect products and Cayley
//! tables, with breadth-first closure.

use std::collections::VecDeque;
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::structural::SdpElem;

/// Default cap on the size of a generated subgroup.
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

/// A finite group whose elements have a dense index in `0..order()`.
/// Index 0 is always the identity.
pub trait FiniteGroup {
    type Elem: Copy + Eq + Hash + Ord + Debug;

    fn order(&self) -> usize;
    fn identity(&self) -> Self::Elem;
    fn op(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn inverse(&self, a: Self::Elem) -> Self::Elem;
    fn index_of(&self, a: Self::Elem) -> usize;
    fn element(&self, index: usize) -> Self::Elem;

    fn elements(&self) -> Box<dyn Iterator<Item = Self::Elem> + '_> {
        Box::new((0..self.order()).map(|i| self.element(i)))
    }

    fn conjugate(&self, x: Self::Elem, by: Self::Elem) -> Self::Elem {
        self.op(self.op(self.inverse(by), x), by)
    }

    fn elem_order(&self, x: Self::Elem) -> usize {
        let e = self.identity();
        let mut y = x;
        let mut n = 1;
        while y != e {
            y = self.op(y, x);
            n += 1;
        }
        n
    }
}

/// Element handle carrying its realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElem {
    Structural(SdpElem),
    Tabular(usize),
}

/// A subgroup as a sorted set of dense element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgroupSet {
    parent_order: usize,
    elements: Vec<usize>,
}

impl SubgroupSet {
    pub fn new(parent_order: usize, mut elements: Vec<usize>) -> SubgroupSet {
        elements.sort_unstable();
        elements.dedup();
        SubgroupSet {
            parent_order,
            elements,
        }
    }

    pub fn trivial(parent_order: usize) -> SubgroupSet {
        SubgroupSet {
            parent_order,
            elements: vec![0],
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn contains(&self, index: usize) -> bool {
        self.elements.binary_search(&index).is_ok()
    }

    pub fn is_proper(&self) -> bool {
        self.order() < self.parent_order
    }

    pub fn is_subset_of(&self, other: &SubgroupSet) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    /// Dense membership mask over the parent group.
    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.parent_order];
        for &x in &self.elements {
            m[x] = true;
        }
        m
    }

    /// Checks identity, closure under products and inverses.
    pub fn is_subgroup_of<G: FiniteGroup>(&self, group: &G) -> bool {
        if self.parent_order != group.order() || !self.contains(0) {
            return false;
        }
        let mask = self.mask();
        self.elements.iter().all(|&a| {
            let x = group.element(a);
            mask[group.index_of(group.inverse(x))]
                && self
                    .elements
                    .iter()
                    .all(|&b| mask[group.index_of(group.op(x, group.element(b)))])
        })
    }
}

/// Subgroup generated by `gens`, by breadth-first right multiplication.
pub fn closure<G: FiniteGroup>(group: &G, gens: &[G::Elem], cap: usize) -> Result<SubgroupSet> {
    let order = group.order();
    let mut seen = vec![false; order];
    let mut members = vec![0usize];
    seen[0] = true;
    let mut queue = VecDeque::from([group.identity()]);
    while let Some(x) = queue.pop_front() {
        for &g in gens {
            let y = group.op(x, g);
            let idx = group.index_of(y);
            if !seen[idx] {
                seen[idx] = true;
                members.push(idx);
                if members.len() > cap {
                    return Err(Error::ClosureOverflow {
                        cap,
                        partial: members.len(),
                    });
                }
                queue.push_back(y);
            }
        }
    }
    Ok(SubgroupSet::new(order, members))
}

/// Order of the subgroup generated by `gens`; stops early once `stop_at`
/// elements have been reached.
pub fn closure_order<G: FiniteGroup>(group: &G, gens: &[G::Elem], stop_at: usize) -> usize {
    let mut seen = vec![false; group.order()];
    seen[0] = true;
    let mut count = 1;
    let mut queue = VecDeque::from([group.identity()]);
    while let Some(x) = queue.pop_front() {
        for &g in gens {
            let y = group.op(x, g);
            let idx = group.index_of(y);
            if !seen[idx] {
                seen[idx] = true;
                count += 1;
                if count >= stop_at {
                    return count;
                }
                queue.push_back(y);
            }
        }
    }
    count
}
