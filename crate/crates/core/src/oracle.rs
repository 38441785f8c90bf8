//! Brute-force covering numbers of small tabular groups from their subgroup
//! lattice.

use crate::cover::{
    build_element_instance, build_pair_instance, membership_rows, solve_exact, CoverInstance,
    CoverSolution,
};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, SubgroupSet};
use crate::tabular::{TabularGroup, DEFAULT_SUBGROUP_CAP};

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub value: usize,
    pub candidates: usize,
    pub classes: usize,
    pub solution: CoverSolution,
}

fn labels(subgroups: &[SubgroupSet]) -> Vec<String> {
    subgroups
        .iter()
        .enumerate()
        .map(|(j, s)| format!("subgroup {j} of order {}", s.order()))
        .collect()
}

fn rows(group: &TabularGroup, candidates: &[SubgroupSet]) -> Result<Vec<crate::cover::Signature>> {
    if let Some(bad) = candidates
        .iter()
        .find(|s| s.parent_order() != group.order() || !s.is_proper())
    {
        return Err(Error::InvalidParameter(format!(
            "candidate of order {} is not a proper subgroup",
            bad.order()
        )));
    }
    Ok(membership_rows(group.order(), candidates.len(), |x, j| {
        candidates[j].contains(x)
    }))
}

fn solve(inst: CoverInstance, node_budget: u64) -> Result<OracleResult> {
    let solution = solve_exact(&inst, node_budget)?;
    Ok(OracleResult {
        value: solution.size(),
        candidates: inst.candidates(),
        classes: inst.classes().len(),
        solution,
    })
}

/// `σ(G)` with the given proper subgroups as candidates.
pub fn sigma_with(
    group: &TabularGroup,
    candidates: &[SubgroupSet],
    node_budget: u64,
) -> Result<OracleResult> {
    let rows = rows(group, candidates)?;
    let inst = build_element_instance(&rows, labels(candidates), |x| x.to_string())?;
    solve(inst, node_budget)
}

/// `σ(G)`: fewest proper subgroups whose union is `G`.
pub fn sigma(group: &TabularGroup, node_budget: u64) -> Result<OracleResult> {
    if group.is_cyclic() {
        return Err(Error::NoCover(
            "a cyclic group is not a union of proper subgroups".into(),
        ));
    }
    let maximal = group.maximal_subgroups(DEFAULT_SUBGROUP_CAP)?;
    sigma_with(group, &maximal, node_budget)
}

/// `σ₂(G)` with the given proper subgroups as candidates.
pub fn sigma2_with(
    group: &TabularGroup,
    candidates: &[SubgroupSet],
    node_budget: u64,
) -> Result<OracleResult> {
    let rows = rows(group, candidates)?;
    let (inst, _) = build_pair_instance(&rows, labels(candidates), |x| x.to_string())?;
    solve(inst, node_budget)
}

/// `σ₂(G)`: fewest proper subgroups such that every pair of elements lies
/// in one of them. Maximal subgroups suffice as candidates.
pub fn sigma2(group: &TabularGroup, node_budget: u64) -> Result<OracleResult> {
    let maximal = group.maximal_subgroups(DEFAULT_SUBGROUP_CAP)?;
    sigma2_with(group, &maximal, node_budget)
}

/// `σ₂` of the elementary abelian group of order `p^rank`.
pub fn elementary_abelian_sigma2(p: usize, rank: u32, node_budget: u64) -> Result<OracleResult> {
    if !crate::field::is_prime(p as u64) {
        return Err(Error::InvalidCharacteristic(p as u64));
    }
    if p.checked_pow(rank).is_none_or(|n| n > DEFAULT_SUBGROUP_CAP) {
        return Err(Error::TooLarge(format!(
            "{p}^{rank} exceeds subgroup cap {DEFAULT_SUBGROUP_CAP}"
        )));
    }
    sigma2(&TabularGroup::elementary_abelian(p, rank), node_budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::DEFAULT_NODE_BUDGET;

    #[test]
    fn klein_four() {
        let g = TabularGroup::elementary_abelian(2, 2);
        assert_eq!(sigma(&g, DEFAULT_NODE_BUDGET).unwrap().value, 3);
        assert!(matches!(
            sigma2(&g, DEFAULT_NODE_BUDGET),
            Err(Error::TwoGenerated(..))
        ));
    }

    #[test]
    fn cyclic_has_no_cover() {
        let g = TabularGroup::cyclic(6);
        assert!(matches!(
            sigma(&g, DEFAULT_NODE_BUDGET),
            Err(Error::NoCover(_))
        ));
        assert!(matches!(
            sigma2(&g, DEFAULT_NODE_BUDGET),
            Err(Error::TwoGenerated(..))
        ));
    }

    #[test]
    fn improper_candidate_rejected() {
        let g = TabularGroup::elementary_abelian(2, 2);
        let whole = SubgroupSet::new(4, (0..4).collect());
        assert!(matches!(
            sigma_with(&g, &[whole], 10),
            Err(Error::InvalidParameter(_))
        ));
    }
}
