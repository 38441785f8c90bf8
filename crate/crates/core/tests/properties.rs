use proptest::prelude::*;

use twocover::constructions::build_theorem1;
use twocover::cover::{solve_exact, solve_greedy, CoverInstance, Signature};
use twocover::field::{Field, FieldElem};
use twocover::group::FiniteGroup;
use twocover::linalg::Matrix;
use twocover::structural::SdpElem;

fn field_params() -> impl Strategy<Value = (u64, u32)> {
    prop::sample::select(vec![
        (2, 1),
        (2, 3),
        (3, 2),
        (5, 1),
        (5, 2),
        (7, 2),
        (2, 5),
        (3, 3),
    ])
}

proptest! {
    #[test]
    fn field_axioms((p, k) in field_params(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = Field::new(p, k).unwrap();
        let q = f.order();
        let (a, b, c) = (f.elem(a % q), f.elem(b % q), f.elem(c % q));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), FieldElem::ZERO);
        if a != FieldElem::ZERO {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE);
            prop_assert_eq!(f.pow(a, q - 1), FieldElem::ONE);
        }
        // Frobenius x -> x^p is additive
        prop_assert_eq!(f.frobenius(f.add(a, b), p), f.add(f.frobenius(a, p), f.frobenius(b, p)));
    }

    #[test]
    fn rank_nullity(rows in 1usize..6, cols in 1usize..6, seed in prop::collection::vec(0u64..9, 36)) {
        let f = Field::new(3, 2).unwrap();
        let data: Vec<Vec<FieldElem>> =
            (0..rows).map(|i| (0..cols).map(|j| f.elem(seed[i * 6 + j])).collect()).collect();
        let m = Matrix::from_rows(&data);
        let rank = m.rank(&f);
        let kernel = m.nullspace(&f);
        prop_assert_eq!(rank + kernel.len(), cols);
        for v in &kernel {
            // m v = 0 as a column vector, i.e. v m^T = 0
            prop_assert!(m.transpose().apply(&f, v).iter().all(|&x| x == FieldElem::ZERO));
        }
        let left = m.left_nullspace(&f);
        prop_assert_eq!(rank + left.len(), rows);
    }

    #[test]
    fn semidirect_product_axioms(xs in prop::collection::vec((0usize..8, 0u64..729), 3)) {
        let inst = build_theorem1(3).unwrap();
        let g = inst.group();
        let [a, b, c] = [xs[0], xs[1], xs[2]].map(|(h, v)| SdpElem::new(h, v));
        prop_assert_eq!(g.op(g.op(a, b), c), g.op(a, g.op(b, c)));
        prop_assert_eq!(g.op(a, g.inverse(a)), g.identity());
        prop_assert_eq!(g.index_of(g.element(g.index_of(a))), g.index_of(a));
        // membership sets are closed under products
        for j in (0..inst.handles().len()).step_by(13) {
            if inst.member(j, a) && inst.member(j, b) {
                prop_assert!(inst.member(j, g.op(a, b)));
                prop_assert!(inst.member(j, g.inverse(a)));
            }
        }
    }
}

fn instance_strategy() -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
    (2usize..9).prop_flat_map(|m| {
        let class = prop::collection::btree_set(0..m, 1..=m)
            .prop_map(|s| s.into_iter().collect::<Vec<_>>());
        (Just(m), prop::collection::vec(class, 1..14))
    })
}

fn brute_minimum(m: usize, classes: &[Vec<usize>]) -> usize {
    (0u32..1 << m)
        .filter(|mask| {
            classes
                .iter()
                .all(|c| c.iter().any(|&j| mask >> j & 1 == 1))
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap()
}

proptest! {
    #[test]
    fn exact_solver_is_minimum((m, classes) in instance_strategy()) {
        let inst = CoverInstance::new(
            m,
            (0..m).map(|j| format!("c{j}")).collect(),
            classes.iter().map(|c| (Signature::from_indices(m, c.iter().copied()), 1)),
        ).unwrap();
        let exact = solve_exact(&inst, 1_000_000).unwrap();
        let greedy = solve_greedy(&inst);
        prop_assert!(inst.is_cover(&exact.chosen));
        prop_assert!(inst.is_cover(&greedy.chosen));
        prop_assert_eq!(exact.size(), brute_minimum(m, &classes));
        prop_assert!(exact.size() <= greedy.size());
        prop_assert!(exact.size() >= inst.mandatory().len());
        for j in inst.mandatory() {
            prop_assert!(exact.chosen.contains(&j));
        }
        prop_assert_eq!(CoverInstance::load(&inst.dump()).unwrap(), inst);
    }

    #[test]
    fn signature_hex_roundtrip(m in 1usize..200, bits in prop::collection::vec(any::<prop::sample::Index>(), 0..20)) {
        let s = Signature::from_indices(m, bits.iter().map(|i| i.index(m)));
        let hex = s.to_hex(m);
        prop_assert_eq!(hex.len(), m.div_ceil(4));
        prop_assert_eq!(Signature::from_hex(m, &hex), Some(s));
    }
}
