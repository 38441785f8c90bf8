//! Modules for a finite matrix group `H` over a prime field `K`.
//!
//! Vectors of `V` are indexed by their coordinates read as a base-`p`
//! number with the first coordinate most significant, so index order is
//! lexicographic order. Vectors of `V^u` pack the `u` copy indices the same
//! way (first copy most significant) into a `u64`.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::linalg::{span_basis, Matrix, Vector};
use crate::tabular::TabularGroup;

/// Largest `|V|` for which action tables are built.
pub const MAX_V: usize = 1024;
/// Largest number of copies `u` in `V^u`.
pub const MAX_COPIES: usize = 8;

/// `F = End_H(V)` realised as a set of `K`-matrices with lookup tables.
#[derive(Debug, Clone)]
pub struct EndField {
    basis: Vec<Matrix>,
    elements: Vec<Matrix>,
    add: Vec<u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    one: usize,
    generator: usize,
    /// `action[l * |V| + v]` is the index of `v * elements[l]`.
    action: Vec<u32>,
}

impl EndField {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// `K`-basis of the centralizer algebra.
    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn matrix(&self, l: usize) -> &Matrix {
        &self.elements[l]
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn one(&self) -> usize {
        self.one
    }

    /// First element (in enumeration order) of multiplicative order `q - 1`.
    pub fn generator(&self) -> usize {
        self.generator
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order() + b] as usize
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b] as usize
    }

    pub fn inv(&self, a: usize) -> Option<usize> {
        (a != 0).then(|| self.inv[a] as usize)
    }

    /// Exponent `e` with `generator^e = a`, for nonzero `a`.
    pub fn log(&self, a: usize) -> Option<usize> {
        if a == 0 {
            return None;
        }
        let mut x = self.one;
        for e in 0..self.order() - 1 {
            if x == a {
                return Some(e);
            }
            x = self.mul(x, self.generator);
        }
        None
    }
}

/// An `H`-invariant subspace of `V^u`, canonical reduced echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Submodule {
    copies: usize,
    basis: Vec<Vector>,
}

impl Submodule {
    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }
}

/// Kernel of `(v_1..v_u) -> sum l_i v_i` for a normalised `l` in `F^u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalSubmodule {
    pub functional: Vec<usize>,
    pub submodule: Submodule,
}

#[derive(Debug, Clone)]
pub struct HModule {
    field: Field,
    dim: usize,
    group: TabularGroup,
    generators: Vec<usize>,
    matrices: Vec<Matrix>,
    end: EndField,
    r: usize,
    vsize: usize,
    add: Vec<u32>,
    neg: Vec<u32>,
    act: Vec<u32>,
}

impl HModule {
    /// The module `K^n` for the matrix group generated by `generators`
    /// (acting on row vectors from the right). `H` is taken to be the
    /// generated matrix group, so the action is faithful by construction.
    /// Fails unless `V` is irreducible with a field as centralizer.
    pub fn new(field: Field, generators: &[Matrix]) -> Result<HModule> {
        if field.degree() != 1 {
            return Err(Error::InvalidParameter(
                "modules are built over a prime field".into(),
            ));
        }
        let dim = generators.first().map(Matrix::rows).ok_or_else(|| {
            Error::InvalidParameter("at least one generator matrix is required".into())
        })?;
        if generators
            .iter()
            .any(|g| g.rows() != dim || g.cols() != dim)
        {
            return Err(Error::InvalidParameter(
                "generator matrices must be square".into(),
            ));
        }
        if generators.iter().any(|g| g.inverse(&field).is_none()) {
            return Err(Error::InvalidParameter(
                "generator matrices must be invertible".into(),
            ));
        }
        let vsize = (field.order() as usize)
            .checked_pow(dim as u32)
            .filter(|&s| s <= MAX_V)
            .ok_or_else(|| Error::TooLarge(format!("|V| = {}^{dim}", field.order())))?;

        let (matrices, generator_idx) = matrix_closure(&field, dim, generators)?;
        let index: HashMap<&Matrix, usize> =
            matrices.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let h = matrices.len();
        let mut table = Vec::with_capacity(h * h);
        for a in &matrices {
            for b in &matrices {
                table.push(index[&a.mul(&field, b)] as u32);
            }
        }
        let group = TabularGroup::from_table(h, table)?;

        let p = field.order() as usize;
        let coords = |idx: usize| -> Vector {
            let mut c = vec![FieldElem::ZERO; dim];
            let mut rest = idx;
            for slot in c.iter_mut().rev() {
                *slot = field.elem((rest % p) as u64);
                rest /= p;
            }
            c
        };
        let to_index = |v: &[FieldElem]| v.iter().fold(0usize, |acc, x| acc * p + x.index());
        let all: Vec<Vector> = (0..vsize).map(coords).collect();
        let mut add = Vec::with_capacity(vsize * vsize);
        for a in &all {
            for b in &all {
                let s: Vector = a.iter().zip(b).map(|(&x, &y)| field.add(x, y)).collect();
                add.push(to_index(&s) as u32);
            }
        }
        let neg = all
            .iter()
            .map(|a| to_index(&a.iter().map(|&x| field.neg(x)).collect::<Vector>()) as u32)
            .collect();
        let mut act = Vec::with_capacity(h * vsize);
        for m in &matrices {
            for v in &all {
                act.push(to_index(&m.apply(&field, v)) as u32);
            }
        }

        let mut module = HModule {
            field,
            dim,
            group,
            generators: generator_idx,
            matrices,
            end: EndField {
                basis: Vec::new(),
                elements: Vec::new(),
                add: Vec::new(),
                mul: Vec::new(),
                inv: Vec::new(),
                one: 0,
                generator: 0,
                action: Vec::new(),
            },
            r: 0,
            vsize,
            add,
            neg,
            act,
        };
        if let Some(v) = module.invariant_witness() {
            return Err(Error::NotIrreducible(format!(
                "vector {v} spans a proper invariant subspace"
            )));
        }
        module.end = module.endomorphism_field()?;
        let e = module.end_degree();
        module.r = dim / e;
        Ok(module)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `dim_K V`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group(&self) -> &TabularGroup {
        &self.group
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn matrix(&self, h: usize) -> &Matrix {
        &self.matrices[h]
    }

    pub fn end_field(&self) -> &EndField {
        &self.end
    }

    /// `q = |End_H(V)|`.
    pub fn q(&self) -> u64 {
        self.end.order() as u64
    }

    /// `r = dim_F V`.
    pub fn r(&self) -> usize {
        self.r
    }

    /// `dim_K F`.
    pub fn end_degree(&self) -> usize {
        self.end.basis.len()
    }

    /// `|V|`.
    pub fn vsize(&self) -> usize {
        self.vsize
    }

    pub fn h_order(&self) -> usize {
        self.matrices.len()
    }

    // ---- V arithmetic by index ----

    pub fn v_add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.vsize + b] as usize
    }

    pub fn v_neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    pub fn v_sub(&self, a: usize, b: usize) -> usize {
        self.v_add(a, self.v_neg(b))
    }

    /// `a^h`.
    pub fn v_act(&self, a: usize, h: usize) -> usize {
        self.act[h * self.vsize + a] as usize
    }

    /// `a * l` for `l` in `F`.
    pub fn v_scale(&self, a: usize, l: usize) -> usize {
        self.end.action[l * self.vsize + a] as usize
    }

    pub fn v_coords(&self, idx: usize) -> Vector {
        let p = self.field.order() as usize;
        let mut c = vec![FieldElem::ZERO; self.dim];
        let mut rest = idx;
        for slot in c.iter_mut().rev() {
            *slot = self.field.elem((rest % p) as u64);
            rest /= p;
        }
        c
    }

    pub fn v_index(&self, coords: &[FieldElem]) -> usize {
        let p = self.field.order() as usize;
        coords.iter().fold(0usize, |acc, x| acc * p + x.index())
    }

    // ---- V^u arithmetic on packed indices ----

    pub fn power_size(&self, u: usize) -> u64 {
        (self.vsize as u64).pow(u as u32)
    }

    pub fn unpack(&self, x: u64, u: usize) -> [usize; MAX_COPIES] {
        let mut out = [0usize; MAX_COPIES];
        let mut rest = x;
        for i in (0..u).rev() {
            out[i] = (rest % self.vsize as u64) as usize;
            rest /= self.vsize as u64;
        }
        out
    }

    pub fn pack(&self, parts: &[usize]) -> u64 {
        parts
            .iter()
            .fold(0u64, |acc, &c| acc * self.vsize as u64 + c as u64)
    }

    fn map_copies(&self, x: u64, u: usize, f: impl Fn(usize) -> usize) -> u64 {
        let parts = self.unpack(x, u);
        parts[..u]
            .iter()
            .fold(0u64, |acc, &c| acc * self.vsize as u64 + f(c) as u64)
    }

    pub fn pow_add(&self, x: u64, y: u64, u: usize) -> u64 {
        let a = self.unpack(x, u);
        let b = self.unpack(y, u);
        (0..u).fold(0u64, |acc, i| {
            acc * self.vsize as u64 + self.v_add(a[i], b[i]) as u64
        })
    }

    pub fn pow_neg(&self, x: u64, u: usize) -> u64 {
        self.map_copies(x, u, |c| self.v_neg(c))
    }

    pub fn pow_sub(&self, x: u64, y: u64, u: usize) -> u64 {
        self.pow_add(x, self.pow_neg(y, u), u)
    }

    pub fn pow_act(&self, x: u64, h: usize, u: usize) -> u64 {
        self.map_copies(x, u, |c| self.v_act(c, h))
    }

    pub fn pow_coords(&self, x: u64, u: usize) -> Vector {
        let parts = self.unpack(x, u);
        parts[..u].iter().flat_map(|&c| self.v_coords(c)).collect()
    }

    pub fn pow_from_coords(&self, coords: &[FieldElem]) -> u64 {
        debug_assert_eq!(coords.len() % self.dim, 0);
        let parts: Vec<usize> = coords.chunks(self.dim).map(|c| self.v_index(c)).collect();
        self.pack(&parts)
    }

    /// `sum l_i x_i`, as an index of `V`.
    pub fn apply_functional(&self, functional: &[usize], x: u64) -> usize {
        let u = functional.len();
        let parts = self.unpack(x, u);
        (0..u).fold(0, |acc, i| {
            self.v_add(acc, self.v_scale(parts[i], functional[i]))
        })
    }

    // ---- spinning ----

    /// Coordinates of `v^h` for `v` in `V^u` given in coordinates.
    pub fn act_coords(&self, v: &[FieldElem], h: usize) -> Vector {
        v.chunks(self.dim)
            .flat_map(|c| self.matrices[h].apply(&self.field, c))
            .collect()
    }

    /// Reduced echelon basis of the `KH`-submodule of `V^u` generated by `vectors`.
    pub fn spin(&self, vectors: &[Vector]) -> Vec<Vector> {
        let Some(len) = vectors.first().map(Vec::len) else {
            return Vec::new();
        };
        let images: Vec<Vector> = vectors
            .iter()
            .flat_map(|v| (0..self.h_order()).map(move |h| self.act_coords(v, h)))
            .collect();
        span_basis(&self.field, &images, len)
    }

    pub fn spin_packed(&self, xs: &[u64], u: usize) -> Vec<Vector> {
        let vs: Vec<Vector> = xs.iter().map(|&x| self.pow_coords(x, u)).collect();
        self.spin(&vs)
    }

    /// A nonzero vector of `V` whose spin is proper, if one exists.
    fn invariant_witness(&self) -> Option<usize> {
        (1..self.vsize).find(|&v| self.spin(&[self.v_coords(v)]).len() < self.dim)
    }

    pub fn is_irreducible(&self) -> bool {
        self.invariant_witness().is_none()
    }

    pub fn is_faithful(&self) -> bool {
        let id = Matrix::identity(self.dim);
        self.matrices.iter().skip(1).all(|m| *m != id)
    }

    // ---- centralizer ----

    /// Solves `X A_g = A_g X` for the generators and certifies that the
    /// solution space is a field.
    fn endomorphism_field(&self) -> Result<EndField> {
        let field = &self.field;
        let n = self.dim;
        // unknown X[a][b] at column a*n + b
        let mut rows: Vec<Vector> = Vec::new();
        for &g in &self.generators {
            let a = &self.matrices[g];
            for i in 0..n {
                for j in 0..n {
                    let mut row = vec![FieldElem::ZERO; n * n];
                    for k in 0..n {
                        // (X A)_{ij} = sum_k X_{ik} A_{kj}
                        let c = &mut row[i * n + k];
                        *c = field.add(*c, a[(k, j)]);
                        // (A X)_{ij} = sum_k A_{ik} X_{kj}
                        let c = &mut row[k * n + j];
                        *c = field.sub(*c, a[(i, k)]);
                    }
                    rows.push(row);
                }
            }
        }
        let sol = Matrix::from_rows(&rows).nullspace(field);
        let e = sol.len();
        if e == 0 || !n.is_multiple_of(e) {
            return Err(Error::NotIrreducible(format!(
                "centralizer has dimension {e}, which does not divide {n}"
            )));
        }
        let p = field.order() as usize;
        let q = p
            .checked_pow(e as u32)
            .filter(|&q| q <= 1 << 12)
            .ok_or_else(|| {
                Error::NotIrreducible(format!("centralizer of dimension {e} too large"))
            })?;
        let basis: Vec<Matrix> = sol
            .iter()
            .map(|v| Matrix::from_rows(&v.chunks(n).map(<[FieldElem]>::to_vec).collect::<Vec<_>>()))
            .collect();
        let elements: Vec<Matrix> = (0..q)
            .map(|idx| {
                let mut m = Matrix::zero(n, n);
                let mut rest = idx;
                for b in &basis {
                    let c = field.elem((rest % p) as u64);
                    rest /= p;
                    if c != FieldElem::ZERO {
                        m = m.add(field, &b.scale(field, c));
                    }
                }
                m
            })
            .collect();
        let index: HashMap<&Matrix, usize> =
            elements.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let lookup = |m: &Matrix| -> Result<usize> {
            index.get(m).copied().ok_or_else(|| {
                Error::NotIrreducible("centralizer is not closed under multiplication".into())
            })
        };
        let mut add = Vec::with_capacity(q * q);
        let mut mul = Vec::with_capacity(q * q);
        for a in &elements {
            for b in &elements {
                add.push(lookup(&a.add(field, b))? as u32);
                let ab = a.mul(field, b);
                if ab != b.mul(field, a) {
                    return Err(Error::NotIrreducible(
                        "centralizer is not commutative".into(),
                    ));
                }
                mul.push(lookup(&ab)? as u32);
            }
        }
        let one = lookup(&Matrix::identity(n))?;
        let mut inv = vec![0u32; q];
        for a in 1..q {
            let b = (1..q)
                .find(|&b| mul[a * q + b] as usize == one)
                .ok_or_else(|| Error::NotIrreducible("centralizer has a zero divisor".into()))?;
            inv[a] = b as u32;
        }
        let order_of = |a: usize| {
            let mut x = a;
            let mut k = 1;
            while x != one {
                x = mul[x * q + a] as usize;
                k += 1;
            }
            k
        };
        let generator = (1..q)
            .find(|&a| order_of(a) == q - 1)
            .ok_or_else(|| Error::Internal("centralizer field has no generator".into()))?;
        let mut action = Vec::with_capacity(q * self.vsize);
        for m in &elements {
            for v in 0..self.vsize {
                action.push(self.v_index(&m.apply(field, &self.v_coords(v))) as u32);
            }
        }
        Ok(EndField {
            basis,
            elements,
            add,
            mul,
            inv,
            one,
            generator,
            action,
        })
    }

    // ---- submodules ----

    /// Normalised representatives of the lines of `F^u` (first nonzero
    /// coordinate equal to one), in lexicographic order.
    pub fn projective_points(&self, u: usize) -> Vec<Vec<usize>> {
        let q = self.end.order();
        let total = q.pow(u as u32);
        (1..total)
            .map(|mut idx| {
                let mut l = vec![0usize; u];
                for slot in l.iter_mut().rev() {
                    *slot = idx % q;
                    idx /= q;
                }
                l
            })
            .filter(|l| l.iter().find(|&&x| x != 0) == Some(&self.end.one))
            .collect()
    }

    /// Maximal submodules of `V^u`: kernels of the nonzero functionals
    /// `(v_1..v_u) -> sum l_i v_i`, one per line of `F^u`.
    pub fn maximal_submodules(&self, u: usize) -> Result<Vec<MaximalSubmodule>> {
        check_copies(u)?;
        let n = self.dim;
        let mut out: Vec<MaximalSubmodule> = Vec::new();
        for l in self.projective_points(u) {
            let mut phi = Matrix::zero(u * n, n);
            for (i, &li) in l.iter().enumerate() {
                let m = self.end.matrix(li);
                for a in 0..n {
                    for b in 0..n {
                        phi[(i * n + a, b)] = m[(a, b)];
                    }
                }
            }
            let kernel = span_basis(&self.field, &phi.left_nullspace(&self.field), u * n);
            if kernel.len() != (u - 1) * n {
                return Err(Error::Internal(format!(
                    "kernel of functional {l:?} has dimension {}",
                    kernel.len()
                )));
            }
            let sub = Submodule {
                copies: u,
                basis: kernel,
            };
            if out.iter().any(|m| m.submodule == sub) {
                return Err(Error::Internal(format!(
                    "functional {l:?} repeats a kernel"
                )));
            }
            out.push(MaximalSubmodule {
                functional: l,
                submodule: sub,
            });
        }
        Ok(out)
    }

    pub fn is_invariant(&self, sub: &Submodule) -> bool {
        let dim = sub.dim();
        sub.basis.iter().all(|b| {
            (0..self.h_order()).all(|h| {
                let mut rows = sub.basis.clone();
                rows.push(self.act_coords(b, h));
                Matrix::from_rows(&rows).rank(&self.field) == dim
            })
        })
    }

    /// `d_H(V^u) = ceil(u / r)`.
    pub fn generation_number(&self, u: usize) -> usize {
        u.div_ceil(self.r)
    }

    /// A tuple of `d_H(V^u)` vectors generating `V^u` as an `H`-module.
    /// Greedy: each entry is the least vector pushing the spin to the
    /// largest dimension reachable at that step. Certified by spinning.
    pub fn generating_witness(&self, u: usize) -> Result<Vec<u64>> {
        check_copies(u)?;
        let d = self.generation_number(u);
        let total = self.power_size(u);
        let mut chosen: Vec<u64> = Vec::new();
        for step in 1..=d {
            let target = self.dim * u.min(step * self.r);
            let next = (0..total).find(|&x| {
                let mut t = chosen.clone();
                t.push(x);
                self.spin_packed(&t, u).len() == target
            });
            match next {
                Some(x) => chosen.push(x),
                None => {
                    return Err(Error::Internal(format!(
                        "no vector extends the spin to dimension {target}"
                    )))
                }
            }
        }
        if self.spin_packed(&chosen, u).len() != u * self.dim {
            return Err(Error::Internal("generating witness does not span".into()));
        }
        Ok(chosen)
    }

    /// `C_{V^u}(h)`: kernel of `A_h - I` acting diagonally on `V^u`.
    pub fn fixed_points(&self, h: usize, u: usize) -> Vec<Vector> {
        let n = self.dim;
        let block = self.matrices[h].sub(&self.field, &Matrix::identity(n));
        let mut m = Matrix::zero(u * n, u * n);
        for c in 0..u {
            for a in 0..n {
                for b in 0..n {
                    m[(c * n + a, c * n + b)] = block[(a, b)];
                }
            }
        }
        span_basis(&self.field, &m.left_nullspace(&self.field), u * n)
    }
}

fn check_copies(u: usize) -> Result<()> {
    if u == 0 || u > MAX_COPIES {
        return Err(Error::InvalidParameter(format!(
            "copy count {u} outside 1..={MAX_COPIES}"
        )));
    }
    Ok(())
}

/// Breadth-first closure of generator matrices; identity first.
fn matrix_closure(field: &Field, n: usize, gens: &[Matrix]) -> Result<(Vec<Matrix>, Vec<usize>)> {
    const CAP: usize = 10_000;
    let mut elems = vec![Matrix::identity(n)];
    let mut index: HashMap<Matrix, usize> = HashMap::from([(Matrix::identity(n), 0)]);
    let mut gen_idx = Vec::with_capacity(gens.len());
    for g in gens {
        let i = *index.entry(g.clone()).or_insert_with(|| {
            elems.push(g.clone());
            elems.len() - 1
        });
        gen_idx.push(i);
    }
    let mut queue: VecDeque<usize> = (0..elems.len()).collect();
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let y = elems[i].mul(field, g);
            if !index.contains_key(&y) {
                if elems.len() >= CAP {
                    return Err(Error::TooLarge(format!(
                        "matrix group exceeds {CAP} elements"
                    )));
                }
                index.insert(y.clone(), elems.len());
                elems.push(y);
                queue.push_back(elems.len() - 1);
            }
        }
    }
    Ok((elems, gen_idx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn q8_module(p: u64) -> HModule {
        let f = Field::new(p, 1).unwrap();
        // p = 3: alpha = beta = 1 gives alpha^2 + beta^2 = -1
        let i = Matrix::from_ints(&f, &[&[0, -1], &[1, 0]]);
        let j = Matrix::from_ints(&f, &[&[1, 1], &[1, -1]]);
        HModule::new(f, &[i, j]).unwrap()
    }

    #[test]
    fn q8_on_f3() {
        let m = q8_module(3);
        assert_eq!(m.h_order(), 8);
        assert_eq!(m.q(), 3);
        assert_eq!(m.r(), 2);
        assert!(m.is_faithful());
        assert_eq!(m.maximal_submodules(1).unwrap().len(), 1);
        assert!(m.maximal_submodules(1).unwrap()[0].submodule.is_zero());
        assert_eq!(m.maximal_submodules(3).unwrap().len(), 13);
    }

    #[test]
    fn trivial_group_on_f2() {
        let f = Field::new(2, 1).unwrap();
        let m = HModule::new(f, &[Matrix::identity(1)]).unwrap();
        assert_eq!(m.h_order(), 1);
        assert_eq!(m.q(), 2);
        assert_eq!(m.r(), 1);
    }

    #[test]
    fn reducible_action_is_rejected() {
        let f = Field::new(3, 1).unwrap();
        let diag = Matrix::from_ints(&f, &[&[1, 0], &[0, 2]]);
        assert!(matches!(
            HModule::new(f, &[diag]),
            Err(Error::NotIrreducible(_))
        ));
    }

    #[test]
    fn q8_is_fixed_point_free() {
        let m = q8_module(3);
        assert!(m.fixed_points(0, 3).len() == 6);
        for h in 1..8 {
            assert!(m.fixed_points(h, 3).is_empty());
        }
    }

    #[test]
    fn generation_numbers() {
        let m = q8_module(3);
        assert_eq!(m.generation_number(1), 1);
        assert_eq!(m.generation_number(2), 1);
        assert_eq!(m.generation_number(3), 2);
        for u in 1..=3 {
            let w = m.generating_witness(u).unwrap();
            assert_eq!(w.len(), m.generation_number(u));
            assert_eq!(m.spin_packed(&w, u).len(), 2 * u);
        }
    }

    #[test]
    fn packed_arithmetic_matches_coordinates() {
        let m = q8_module(3);
        let u = 3;
        for x in (0..m.power_size(u)).step_by(37) {
            for h in 0..8 {
                let by_table = m.pow_act(x, h, u);
                let by_matrix = m.pow_from_coords(&m.act_coords(&m.pow_coords(x, u), h));
                assert_eq!(by_table, by_matrix);
            }
            let y = m.pow_act(x, 3, u);
            assert_eq!(m.pow_sub(m.pow_add(x, y, u), y, u), x);
        }
    }

    #[test]
    fn group_relations_of_q8() {
        let m = q8_module(3);
        let g = m.group();
        let (i, j) = (m.generators()[0], m.generators()[1]);
        assert_eq!(g.elem_order(i), 4);
        assert_eq!(g.op(i, i), g.op(j, j));
        assert_eq!(g.conjugate(i, j), g.inverse(i));
    }
}
