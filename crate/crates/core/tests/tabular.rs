use twocover::group::FiniteGroup;
use twocover::tabular::TabularGroup;
use twocover::Error;

/// First normalised Latin square of order `n` (row and column 0 are the
/// identity) accepted by `keep`, by backtracking in row-major order.
fn latin_square(n: usize, keep: &dyn Fn(&[u32]) -> bool) -> Option<Vec<u32>> {
    fn fill(n: usize, t: &mut Vec<u32>, pos: usize, keep: &dyn Fn(&[u32]) -> bool) -> bool {
        if pos == n * n {
            return keep(t);
        }
        let (i, j) = (pos / n, pos % n);
        if i == 0 || j == 0 {
            t[pos] = (i + j) as u32;
            return fill(n, t, pos + 1, keep);
        }
        for x in 0..n as u32 {
            let row_ok = (0..j).all(|c| t[i * n + c] != x);
            let col_ok = (0..i).all(|r| t[r * n + j] != x);
            if row_ok && col_ok {
                t[pos] = x;
                if fill(n, t, pos + 1, keep) {
                    return true;
                }
            }
        }
        false
    }
    let mut t = vec![0u32; n * n];
    fill(n, &mut t, 0, keep).then_some(t)
}

fn associative(n: usize, t: &[u32]) -> bool {
    let at = |a: usize, b: usize| t[a * n + b] as usize;
    (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| at(at(a, b), c) == at(a, at(b, c)))))
}

#[test]
fn non_associative_loop_is_rejected() {
    let t = latin_square(5, &|t| !associative(5, t)).expect("a non-associative loop of order 5");
    let text = format!(
        "5\n{}",
        t.chunks(5)
            .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(" ") + "\n")
            .collect::<String>()
    );
    assert!(matches!(
        TabularGroup::parse_cayley(&text),
        Err(Error::NotAGroup(_))
    ));
}

#[test]
fn associative_latin_square_is_cyclic_at_order_5() {
    let t = latin_square(5, &|t| associative(5, t)).unwrap();
    let g = TabularGroup::from_table(5, t).unwrap();
    assert!(g.is_cyclic());
}

#[test]
fn cayley_roundtrip_through_file() {
    let g = TabularGroup::symmetric(4);
    let dir = std::env::temp_dir().join(format!("twocover-tab-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s4.txt");
    g.store(&path).unwrap();
    let back = TabularGroup::load(&path).unwrap();
    assert_eq!(back, g);
    assert_eq!(back.order(), 24);
    std::fs::remove_dir_all(&dir).unwrap();
    assert!(matches!(
        TabularGroup::load(&path),
        Err(Error::Parse { .. })
    ));
}

#[test]
fn subgroup_lattices_of_small_groups() {
    // counts from the subgroup lattices: S4 has 30 subgroups, Z2 x Z4 has 8
    assert_eq!(
        TabularGroup::symmetric(4).all_subgroups(200).unwrap().len(),
        30
    );
    assert_eq!(
        TabularGroup::abelian(&[2, 4])
            .all_subgroups(200)
            .unwrap()
            .len(),
        8
    );
    // Z3^3: 1 + 13 + 13 + 1
    assert_eq!(
        TabularGroup::elementary_abelian(3, 3)
            .all_subgroups(200)
            .unwrap()
            .len(),
        28
    );
    for g in [
        TabularGroup::symmetric(4),
        TabularGroup::abelian(&[2, 2, 4]),
    ] {
        for s in g.all_subgroups(200).unwrap() {
            assert!(s.is_subgroup_of(&g));
            assert_eq!(g.order() % s.order(), 0);
        }
    }
}
