use twocover::constructions::{build_theorem1, build_theorem2, HandleKind, TheoremInstance};
use twocover::cover::DEFAULT_NODE_BUDGET;
use twocover::group::FiniteGroup;
use twocover::structural::SdpElem;
use twocover::verify::*;
use twocover::Error;

fn order_two_seconds(inst: &TheoremInstance) -> Vec<usize> {
    inst.second_type()
        .filter(
            |(_, m)| matches!(&m.kind, HandleKind::Second { complement } if complement.len() == 2),
        )
        .map(|(j, _)| j)
        .collect()
}

#[test]
fn theorem2_q2_exact_minimum() {
    let inst = build_theorem2(2, 3).unwrap();
    let r = verify_exact_minimum(&inst, DEFAULT_PAIR_BUDGET, DEFAULT_NODE_BUDGET).unwrap();
    assert!(r.passed(), "{}", r.render(ReportFormat::Text));
    assert_eq!(r.computed(), Some(31));
    assert_eq!(r.get("mandatory"), Some("31"));
    assert_eq!(r.get("mandatory_first_kind"), Some("28"));
    assert!(r.get_check("mandatory_set").unwrap().pass);
}

#[test]
fn theorem2_q2_full_sweep() {
    let inst = build_theorem2(2, 3).unwrap();
    let sweep = FullSweep::new(&inst, DEFAULT_PAIR_BUDGET).unwrap();
    let r = verify_full_sweep_with(&inst, &sweep, &inst.proposed_cover()).unwrap();
    assert!(r.passed(), "{}", r.render(ReportFormat::Text));
    assert_eq!(r.computed(), Some(31));

    // first-kind plus only the subgroup over <a> misses pairs that only
    // some V^3<h>, |h| = 2, contains
    let (a_type, _) = inst
        .second_type()
        .find(
            |(_, m)| matches!(&m.kind, HandleKind::Second { complement } if complement.len() == 3),
        )
        .unwrap();
    let mut cover: Vec<usize> = inst.first_type().map(|(j, _)| j).collect();
    cover.push(a_type);
    let r = verify_full_sweep_with(&inst, &sweep, &cover).unwrap();
    assert!(!r.passed());
    assert!(!r.get_check("coverage").unwrap().pass);
    let pair = r.get("uncovered_pair").unwrap();
    let coverers = &r.get_check("coverage").unwrap().detail;
    assert!(pair.contains("(0,"));
    assert_eq!(coverers.matches("V^uK").count(), 1);
    assert!(matches!(
        r.to_error(),
        Some(Error::TheoremViolation {
            expected: 31,
            computed: 29
        })
    ));
}

#[test]
fn dropping_a_forced_subgroup_is_caught() {
    let inst = build_theorem2(2, 3).unwrap();
    let sweep = FullSweep::new(&inst, DEFAULT_PAIR_BUDGET).unwrap();
    let mut cover = inst.proposed_cover();
    cover.retain(|&j| j != 5);
    let r = verify_full_sweep_with(&inst, &sweep, &cover).unwrap();
    assert!(!r.get_check("coverage").unwrap().pass);
    assert!(!r.get_check("mandatory_in_cover").unwrap().pass);
}

#[test]
fn redundant_member_is_caught() {
    let inst = build_theorem2(2, 3).unwrap();
    let sweep = FullSweep::new(&inst, DEFAULT_PAIR_BUDGET).unwrap();
    let cover: Vec<usize> = (0..inst.handles().len()).collect();
    let r = verify_full_sweep_with(&inst, &sweep, &cover).unwrap();
    assert!(r.get_check("coverage").unwrap().pass);
    assert!(!r.get_check("necessity").unwrap().pass);
}

#[test]
fn pair_budget_enforced() {
    let inst = build_theorem2(2, 3).unwrap();
    assert!(matches!(
        FullSweep::new(&inst, 1000),
        Err(Error::TooLarge(_))
    ));
    let inst = build_theorem2(4, 5).unwrap();
    assert!(matches!(
        verify_exact_minimum(&inst, DEFAULT_PAIR_BUDGET, DEFAULT_NODE_BUDGET),
        Err(Error::TooLarge(_))
    ));
}

/// Pairs `((h1, v1), (h2, v2))` in no first-kind subgroup, by membership.
fn brute_uncovered(inst: &TheoremInstance, h1: usize, h2: usize) -> u64 {
    let g = inst.group();
    let firsts: Vec<usize> = inst.first_type().map(|(j, _)| j).collect();
    let n = g.normal_order();
    let mut count = 0;
    for v1 in 0..n {
        let x = SdpElem::new(h1, v1);
        let holding: Vec<usize> = firsts
            .iter()
            .copied()
            .filter(|&j| inst.member(j, x))
            .collect();
        for v2 in 0..n {
            let y = SdpElem::new(h2, v2);
            if !holding.iter().any(|&j| inst.member(j, y)) {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn uncovered_count_formula_matches_membership() {
    let inst = build_theorem2(2, 3).unwrap();
    let n = inst.module().h_order();
    for h1 in 0..n {
        for h2 in 0..n {
            assert_eq!(
                first_uncovered_count(&inst, h1, h2).unwrap(),
                brute_uncovered(&inst, h1, h2),
                "({h1}, {h2})"
            );
        }
    }
}

#[test]
fn uncovered_count_formula_matches_membership_quaternion() {
    let inst = build_theorem1(3).unwrap();
    for (h1, h2) in [(0, 0), (1, 0), (1, 1), (0, 2), (1, 2), (3, 5)] {
        assert_eq!(
            first_uncovered_count(&inst, h1, h2).unwrap(),
            brute_uncovered(&inst, h1, h2)
        );
    }
}

#[test]
fn structural_stats_match_sweep() {
    for inst in [build_theorem2(2, 3).unwrap(), build_theorem1(3).unwrap()] {
        let sweep = FullSweep::new(&inst, DEFAULT_PAIR_BUDGET).unwrap();
        let swept = sweep.case_stats(&inst);
        assert_eq!(swept, structural_case_stats(&inst).unwrap());
        let total: u64 = swept.iter().map(|c| c.ordered_pairs).sum();
        assert_eq!(total, (inst.group().order() as u64).pow(2));
    }
}

#[test]
fn structural_passes_on_odd_q() {
    let inst = build_theorem2(5, 3).unwrap();
    let r = verify_structural(&inst, DEFAULT_PAIR_BUDGET, DEFAULT_NODE_BUDGET).unwrap();
    assert!(r.passed(), "{}", r.render(ReportFormat::Text));
    assert_eq!(r.computed(), Some(25 + 125 + 625 + 3));
    // for odd q the fixed vector of h works directly
    assert!(r
        .get_check("order_two")
        .unwrap()
        .detail
        .contains("(3 with x fixed by h)"));
}

#[test]
fn structural_even_q_uses_non_fixed_vector() {
    let inst = build_theorem2(2, 3).unwrap();
    let r = structural_report(&inst, DEFAULT_NODE_BUDGET).unwrap();
    assert!(r.passed(), "{}", r.render(ReportFormat::Text));
    assert!(r
        .get_check("order_two")
        .unwrap()
        .detail
        .contains("(0 with x fixed by h)"));
}

#[test]
fn reports_are_deterministic_across_thread_counts() {
    let inst = build_theorem2(2, 3).unwrap();
    let render = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            let a = verify_exact_minimum(&inst, DEFAULT_PAIR_BUDGET, DEFAULT_NODE_BUDGET).unwrap();
            let b = verify_full_sweep(&inst, &inst.proposed_cover(), DEFAULT_PAIR_BUDGET).unwrap();
            let c = structural_report(&inst, DEFAULT_NODE_BUDGET).unwrap();
            [a, b, c].map(|r| r.render(ReportFormat::Machine))
        })
    };
    assert_eq!(render(1), render(4));
    assert_eq!(render(3), render(2));
}

#[test]
fn machine_report_shape() {
    let inst = build_theorem2(2, 3).unwrap();
    let r = verify_exact_minimum(&inst, DEFAULT_PAIR_BUDGET, DEFAULT_NODE_BUDGET).unwrap();
    let text = r.render(ReportFormat::Machine);
    assert!(text.starts_with("mode=exact\n"));
    assert!(text.ends_with("verdict=pass\n"));
    assert!(text.lines().all(|l| l.contains('=')));
    assert!(text.contains("\nsigma2_computed=31\n"));
}

#[test]
fn all_second_kind_completions_of_theorem1() {
    let inst = build_theorem1(3).unwrap();
    let sweep = FullSweep::new(&inst, DEFAULT_PAIR_BUDGET).unwrap();
    for s in 0..3 {
        let cover = cover_with_second(&inst, &[s]).unwrap();
        let r = verify_full_sweep_with(&inst, &sweep, &cover).unwrap();
        assert!(r.passed(), "{}", r.render(ReportFormat::Text));
    }
    assert!(cover_with_second(&inst, &[3]).is_err());
}

#[test]
fn order_two_subgroups_are_forced_at_q2() {
    let inst = build_theorem2(2, 3).unwrap();
    let sweep = FullSweep::new(&inst, DEFAULT_PAIR_BUDGET).unwrap();
    let mandatory = sweep.cover_instance().mandatory();
    for j in order_two_seconds(&inst) {
        assert!(mandatory.contains(&j));
    }
    assert_eq!(mandatory.len(), 31);
}

fn naive_prime_power(q: u64) -> bool {
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
    }
    r == 1
}

#[test]
fn conjecture_forms_against_naive_search() {
    for value in 1..2000u64 {
        let naive: Vec<u64> = (2..50u64)
            .filter(|&q| naive_prime_power(q) && q * q + q + 1 == value)
            .collect();
        let got: Vec<u64> = conjecture_forms(value)
            .iter()
            .map(|&(p, t)| p.pow(t))
            .collect();
        assert_eq!(got, naive, "{value}");
    }
    assert_eq!(conjecture_forms(31), vec![(5, 1)]);
    assert_eq!(conjecture_forms(21), vec![(2, 2)]);
    assert!(conjecture_forms(118).is_empty());
    assert!(conjecture_forms(43).is_empty()); // 6^2 + 6 + 1, 6 not a prime power
    let p = parity(31, 384);
    assert!(!p.even && p.forms_dividing.is_empty());
}

#[test]
fn tabular_pipeline() {
    let g = twocover::tabular::TabularGroup::elementary_abelian(3, 3);
    let r = verify_exact_tabular("Z_3^3", &g, Some(13), DEFAULT_NODE_BUDGET).unwrap();
    assert!(r.passed());
    let r = verify_exact_tabular("Z_3^3", &g, Some(12), DEFAULT_NODE_BUDGET).unwrap();
    assert!(matches!(
        r.to_error(),
        Some(Error::TheoremViolation {
            expected: 12,
            computed: 13
        })
    ));
}

#[test]
fn membership_closure_all_handles_q2() {
    let inst = build_theorem2(2, 3).unwrap();
    for j in 0..inst.handles().len() {
        assert!(membership_closure(&inst, j).unwrap());
    }
}
