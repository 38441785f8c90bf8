//! Groups given by a full multiplication table, Cayley-table files, and
//! brute-force subgroup enumeration.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::group::{closure, FiniteGroup, SubgroupSet, DEFAULT_CLOSURE_CAP};

/// Default cap on `|G|` for [`TabularGroup::all_subgroups`].
pub const DEFAULT_SUBGROUP_CAP: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TabularGroup {
    n: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
}

impl TabularGroup {
    /// Validates a row-major table: entries in range, Latin square, element
    /// 0 a two-sided identity, associativity.
    pub fn from_table(n: usize, table: Vec<u32>) -> Result<TabularGroup> {
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        if table.len() != n * n {
            return Err(Error::NotAGroup(format!(
                "expected {} entries, got {}",
                n * n,
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&x| x as usize >= n) {
            return Err(Error::NotAGroup(format!("entry {bad} out of range")));
        }
        for i in 0..n {
            if table[i] as usize != i || table[i * n] as usize != i {
                return Err(Error::NotAGroup("element 0 is not the identity".into()));
            }
        }
        let mut seen = vec![usize::MAX; n];
        for i in 0..n {
            for j in 0..n {
                let x = table[i * n + j] as usize;
                if seen[x] == i {
                    return Err(Error::NotAGroup(format!("row {i} repeats {x}")));
                }
                seen[x] = i;
            }
        }
        let mut seen = vec![usize::MAX; n];
        for j in 0..n {
            for i in 0..n {
                let x = table[i * n + j] as usize;
                if seen[x] == j {
                    return Err(Error::NotAGroup(format!("column {j} repeats {x}")));
                }
                seen[x] = j;
            }
        }
        let at = |a: usize, b: usize| table[a * n + b] as usize;
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::NotAGroup(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| at(a, b) == 0).unwrap() as u32)
            .collect();
        Ok(TabularGroup { n, table, inverse })
    }

    /// Exports any group through its dense element indexing.
    pub fn from_group<G: FiniteGroup>(group: &G) -> TabularGroup {
        let n = group.order();
        let elems: Vec<_> = (0..n).map(|i| group.element(i)).collect();
        let mut table = Vec::with_capacity(n * n);
        for &a in &elems {
            for &b in &elems {
                table.push(group.index_of(group.op(a, b)) as u32);
            }
        }
        let inverse = elems
            .iter()
            .map(|&a| group.index_of(group.inverse(a)) as u32)
            .collect();
        TabularGroup { n, table, inverse }
    }

    pub fn cyclic(n: usize) -> TabularGroup {
        let table = (0..n)
            .flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32))
            .collect();
        let inverse = (0..n).map(|a| ((n - a) % n) as u32).collect();
        TabularGroup { n, table, inverse }
    }

    /// `(Z_p)^rank`, element index = base-p digits.
    pub fn elementary_abelian(p: usize, rank: u32) -> TabularGroup {
        TabularGroup::abelian(&vec![p; rank as usize])
    }

    /// Direct product of cyclic groups with the given orders.
    pub fn abelian(orders: &[usize]) -> TabularGroup {
        let n: usize = orders.iter().product();
        let digits = |mut x: usize| -> Vec<usize> {
            orders
                .iter()
                .map(|&m| {
                    let d = x % m;
                    x /= m;
                    d
                })
                .collect()
        };
        let undigits = |ds: &[usize]| -> usize {
            ds.iter()
                .zip(orders)
                .rev()
                .fold(0, |acc, (&d, &m)| acc * m + d)
        };
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            let da = digits(a);
            for b in 0..n {
                let db = digits(b);
                let s: Vec<usize> = da
                    .iter()
                    .zip(&db)
                    .zip(orders)
                    .map(|((x, y), m)| (x + y) % m)
                    .collect();
                table.push(undigits(&s) as u32);
            }
        }
        let inverse = (0..n)
            .map(|a| {
                let d: Vec<usize> = digits(a)
                    .iter()
                    .zip(orders)
                    .map(|(x, m)| (m - x) % m)
                    .collect();
                undigits(&d) as u32
            })
            .collect();
        TabularGroup { n, table, inverse }
    }

    /// Symmetric group on `degree` points; element 0 is the identity and
    /// the rest follow lexicographic order of permutations.
    pub fn symmetric(degree: usize) -> TabularGroup {
        let mut perms: Vec<Vec<usize>> = vec![(0..degree).collect()];
        let mut cur: Vec<usize> = (0..degree).collect();
        while next_permutation(&mut cur) {
            perms.push(cur.clone());
        }
        let index: HashMap<Vec<usize>, usize> = perms
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let n = perms.len();
        // (a * b)(x) = b(a(x)): apply a first
        let mut table = Vec::with_capacity(n * n);
        for a in &perms {
            for b in &perms {
                let c: Vec<usize> = (0..degree).map(|x| b[a[x]]).collect();
                table.push(index[&c] as u32);
            }
        }
        TabularGroup::from_table(n, table).expect("symmetric group table")
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.n).any(|x| self.elem_order(x) == self.n)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.op(a, b) == self.op(b, a)))
    }

    /// Every subgroup, by cyclic extension: start from the cyclic subgroups
    /// and repeatedly join a subgroup with a cyclic subgroup outside it.
    /// Sorted by order, then by element set.
    pub fn all_subgroups(&self, cap: usize) -> Result<Vec<SubgroupSet>> {
        if self.n > cap {
            return Err(Error::TooLarge(format!(
                "|G| = {} exceeds subgroup cap {cap}",
                self.n
            )));
        }
        let mut cyclic_gens: Vec<usize> = Vec::new();
        let mut found: HashSet<SubgroupSet> = HashSet::new();
        let mut work: Vec<(SubgroupSet, Vec<usize>)> = Vec::new();
        let trivial = SubgroupSet::trivial(self.n);
        found.insert(trivial.clone());
        work.push((trivial, Vec::new()));
        for g in 1..self.n {
            let c = closure(self, &[g], DEFAULT_CLOSURE_CAP)?;
            if found.insert(c.clone()) {
                cyclic_gens.push(g);
                work.push((c, vec![g]));
            }
        }
        let mut next = 0;
        while next < work.len() {
            let (sub, gens) = work[next].clone();
            next += 1;
            for &g in &cyclic_gens {
                if sub.contains(g) {
                    continue;
                }
                let mut ext = gens.clone();
                ext.push(g);
                let joined = closure(self, &ext, DEFAULT_CLOSURE_CAP)?;
                if found.insert(joined.clone()) {
                    work.push((joined, ext));
                }
            }
        }
        let mut all: Vec<SubgroupSet> = found.into_iter().collect();
        all.sort_by(|a, b| {
            a.order()
                .cmp(&b.order())
                .then_with(|| a.elements().cmp(b.elements()))
        });
        Ok(all)
    }

    /// Proper subgroups not contained in another proper subgroup.
    pub fn maximal_subgroups(&self, cap: usize) -> Result<Vec<SubgroupSet>> {
        let all = self.all_subgroups(cap)?;
        Ok(maximal_among(&all))
    }

    pub fn to_cayley_string(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.n).unwrap();
        for i in 0..self.n {
            let row: Vec<String> = self.table[i * self.n..(i + 1) * self.n]
                .iter()
                .map(u32::to_string)
                .collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
        out
    }

    /// Parses the Cayley-table text format. `#` comment lines may precede
    /// the order line only.
    pub fn parse_cayley(text: &str) -> Result<TabularGroup> {
        let mut lines = text.split('\n').enumerate().peekable();
        while lines.peek().is_some_and(|(_, l)| l.starts_with('#')) {
            lines.next();
        }
        let (head_no, head) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing order line".into(),
        })?;
        let n: usize = head.trim().parse().map_err(|_| Error::Parse {
            line: head_no + 1,
            message: format!("bad order {:?}", head.trim()),
        })?;
        if n == 0 {
            return Err(Error::Parse {
                line: head_no + 1,
                message: "order must be positive".into(),
            });
        }
        let mut table = Vec::with_capacity(n * n);
        for row in 0..n {
            let (no, line) = lines.next().ok_or(Error::Parse {
                line: head_no + row + 2,
                message: format!("missing row {row}"),
            })?;
            let entries: Vec<&str> = line.split_whitespace().collect();
            if entries.len() != n {
                return Err(Error::Parse {
                    line: no + 1,
                    message: format!("expected {n} entries, found {}", entries.len()),
                });
            }
            for e in entries {
                let x: u32 = e.parse().map_err(|_| Error::Parse {
                    line: no + 1,
                    message: format!("bad entry {e:?}"),
                })?;
                table.push(x);
            }
        }
        for (no, line) in lines {
            if !line.trim().is_empty() {
                return Err(Error::Parse {
                    line: no + 1,
                    message: "trailing content".into(),
                });
            }
        }
        TabularGroup::from_table(n, table)
    }

    pub fn load(path: &Path) -> Result<TabularGroup> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
            line: 0,
            message: format!("{}: {e}", path.display()),
        })?;
        TabularGroup::parse_cayley(&text)
    }

    pub fn store(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_cayley_string())
            .map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))
    }
}

pub fn maximal_among(all: &[SubgroupSet]) -> Vec<SubgroupSet> {
    let proper: Vec<&SubgroupSet> = all.iter().filter(|s| s.is_proper()).collect();
    proper
        .iter()
        .filter(|s| {
            !proper
                .iter()
                .any(|t| t.order() > s.order() && s.is_subset_of(t))
        })
        .map(|s| (*s).clone())
        .collect()
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl FiniteGroup for TabularGroup {
    type Elem = usize;

    fn order(&self) -> usize {
        self.n
    }

    fn identity(&self) -> usize {
        0
    }

    fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    fn inverse(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    fn index_of(&self, a: usize) -> usize {
        a
    }

    fn element(&self, index: usize) -> usize {
        index
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_from_text() {
        let g = TabularGroup::parse_cayley("2\n0 1\n1 0\n").unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.inverse(1), 1);
    }

    #[test]
    fn comments_only_before_header() {
        let g = TabularGroup::parse_cayley("# Z2\n# more\n2\n0 1\n1 0\n").unwrap();
        assert_eq!(g.order(), 2);
        let err = TabularGroup::parse_cayley("2\n# no\n0 1\n1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(
            TabularGroup::parse_cayley("3\n0 1 2\n1 2\n2 0 1\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            TabularGroup::parse_cayley("x\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            TabularGroup::parse_cayley("2\n0 1\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn latin_failures() {
        assert!(matches!(
            TabularGroup::parse_cayley("2\n0 1\n1 1\n"),
            Err(Error::NotAGroup(_))
        ));
        assert!(matches!(
            TabularGroup::parse_cayley("2\n1 0\n0 1\n"),
            Err(Error::NotAGroup(_))
        ));
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(TabularGroup::cyclic(6).all_subgroups(200).unwrap().len(), 4);
        assert_eq!(
            TabularGroup::symmetric(3).all_subgroups(200).unwrap().len(),
            6
        );
        let e8 = TabularGroup::elementary_abelian(2, 3)
            .all_subgroups(200)
            .unwrap();
        let by_order = |k| e8.iter().filter(|s| s.order() == k).count();
        assert_eq!(e8.len(), 16);
        assert_eq!(
            (by_order(1), by_order(2), by_order(4), by_order(8)),
            (1, 7, 7, 1)
        );
    }

    #[test]
    fn subgroup_cap() {
        let g = TabularGroup::cyclic(10);
        assert!(matches!(g.all_subgroups(5), Err(Error::TooLarge(_))));
    }

    #[test]
    fn maximal_subgroups_of_s3() {
        let m = TabularGroup::symmetric(3).maximal_subgroups(200).unwrap();
        let mut orders: Vec<_> = m.iter().map(SubgroupSet::order).collect();
        orders.sort();
        assert_eq!(orders, vec![2, 2, 2, 3]);
    }
}
