//! Finite fields `F_{p^k}` in the polynomial basis.
//!
//! An element is stored as the integer `sum c_i p^i` of its coefficient
//! vector (constant term least significant), so element `0` is zero, `1` is
//! one, and ascending scans run through constants first. Multiplication goes
//! through log/antilog tables built from the first primitive element.

use crate::error::{Error, Result};

/// Largest field order supported.
pub const MAX_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    p: u32,
    k: u32,
    order: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    primitive: FieldElem,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^m` into `(p, m)`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

fn trim(mut poly: Vec<u32>) -> Vec<u32> {
    while poly.last() == Some(&0) {
        poly.pop();
    }
    poly
}

/// Remainder of `a` modulo the monic polynomial `m` over `F_p`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let idx = shift + i;
            r[idx] = (r[idx] + p - (lead * c) % p) % p;
        }
        r = trim(r);
    }
    r
}

/// Monic polynomial of degree `deg` whose low coefficients are the base-p
/// digits of `code` (constant term least significant).
fn monic_from_code(mut code: u64, deg: u32, p: u32) -> Vec<u32> {
    let mut poly = Vec::with_capacity(deg as usize + 1);
    for _ in 0..deg {
        poly.push((code % p as u64) as u32);
        code /= p as u64;
    }
    poly.push(1);
    poly
}

/// Irreducibility by trial division with every monic polynomial of degree
/// at most half the degree.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() as u32 - 1;
    for d in 1..=deg / 2 {
        for code in 0..(p as u64).pow(d) {
            let divisor = monic_from_code(code, d, p);
            if poly_rem(poly, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Code of a candidate in lexicographic coefficient order with the constant
/// term most significant.
fn lex_candidate(rank: u64, deg: u32, p: u32) -> Vec<u32> {
    let mut coeffs = vec![0u32; deg as usize];
    let mut rest = rank;
    for slot in coeffs.iter_mut().rev() {
        *slot = (rest % p as u64) as u32;
        rest /= p as u64;
    }
    coeffs.push(1);
    coeffs
}

impl Field {
    /// Builds `F_{p^k}` with the lexicographically least monic irreducible
    /// polynomial of degree `k` (coefficients compared constant term first).
    pub fn new(p: u64, k: u32) -> Result<Field> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(Error::InvalidCharacteristic(p));
        }
        if k == 0 {
            return Err(Error::InvalidParameter(
                "field degree must be positive".into(),
            ));
        }
        let order = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or_else(|| Error::TooLarge(format!("field of order {p}^{k}")))?;
        let p32 = p as u32;
        let modulus = (0..p.pow(k))
            .map(|rank| lex_candidate(rank, k, p32))
            .find(|poly| is_irreducible(poly, p32))
            .ok_or_else(|| Error::Internal(format!("no irreducible of degree {k} over F_{p}")))?;
        let mut field = Field {
            p: p32,
            k,
            order: order as u32,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            primitive: FieldElem::ONE,
        };
        field.build_tables()?;
        Ok(field)
    }

    fn build_tables(&mut self) -> Result<()> {
        let q = self.order;
        let primitive = (1..q)
            .map(FieldElem)
            .find(|&g| self.slow_order(g) == q - 1)
            .ok_or_else(|| Error::Internal("multiplicative group has no generator".into()))?;
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut x = FieldElem::ONE;
        for e in 0..q - 1 {
            exp.push(x.0);
            log[x.0 as usize] = e;
            x = self.slow_mul(x, primitive);
        }
        self.exp = exp;
        self.log = log;
        self.primitive = primitive;
        Ok(())
    }

    fn slow_order(&self, g: FieldElem) -> u32 {
        let mut x = g;
        let mut n = 1;
        while x != FieldElem::ONE {
            x = self.slow_mul(x, g);
            n += 1;
            if n > self.order {
                return 0;
            }
        }
        n
    }

    fn slow_mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let ca = self.coeffs(a);
        let cb = self.coeffs(b);
        let mut prod = vec![0u32; ca.len() + cb.len()];
        for (i, &x) in ca.iter().enumerate() {
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        self.from_coeffs(&poly_rem(&prod, &self.modulus, self.p))
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.order as u64
    }

    /// Monic reduction polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The generator used for the log tables (first primitive element).
    pub fn primitive_element(&self) -> FieldElem {
        self.primitive
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order).map(FieldElem)
    }

    pub fn elem(&self, index: u64) -> FieldElem {
        debug_assert!(index < self.order as u64);
        FieldElem(index as u32)
    }

    /// Embeds an integer via the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    /// Coefficient vector of length `k`, constant term first.
    pub fn coeffs(&self, x: FieldElem) -> Vec<u32> {
        let mut rest = x.0;
        (0..self.k)
            .map(|_| {
                let c = rest % self.p;
                rest /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> FieldElem {
        let mut idx = 0u32;
        for &c in coeffs.iter().take(self.k as usize).rev() {
            idx = idx * self.p + c % self.p;
        }
        FieldElem(idx)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.k == 1 {
            return FieldElem((a.0 + b.0) % self.p);
        }
        let (mut x, mut y, mut place, mut out) = (a.0, b.0, 1u32, 0u32);
        for _ in 0..self.k {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElem(out)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.k == 1 {
            return FieldElem((self.p - a.0) % self.p);
        }
        let (mut x, mut place, mut out) = (a.0, 1u32, 0u32);
        for _ in 0..self.k {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        FieldElem(out)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        let n = self.order - 1;
        let e = (self.log[a.0 as usize] + self.log[b.0 as usize]) % n;
        FieldElem(self.exp[e as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.0 == 0 {
            return None;
        }
        let n = self.order - 1;
        let e = (n - self.log[a.0 as usize]) % n;
        Some(FieldElem(self.exp[e as usize]))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if a.0 == 0 {
            return FieldElem::ZERO;
        }
        let n = (self.order - 1) as u64;
        let l = (self.log[a.0 as usize] as u64 * (e % n)) % n;
        FieldElem(self.exp[l as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: FieldElem) -> Option<u64> {
        if a.0 == 0 {
            return None;
        }
        let n = (self.order - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Some(n / gcd(n, l))
    }

    /// `g^((q-1)/n)` for the first primitive element `g`; has order exactly `n`.
    pub fn element_of_order(&self, n: u64) -> Result<FieldElem> {
        let q1 = self.order as u64 - 1;
        if n == 0 || !q1.is_multiple_of(n) {
            return Err(Error::OrderUnavailable {
                order: n,
                field_order: self.order as u64,
            });
        }
        Ok(self.pow(self.primitive, q1 / n))
    }

    /// The map `x -> x^q`. For a field of order `q^2` this is the
    /// involution fixing the subfield of order `q`.
    pub fn frobenius(&self, x: FieldElem, q: u64) -> FieldElem {
        self.pow(x, q)
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_uses_x2_x_1() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(f.order(), 4);
    }

    #[test]
    fn prime_field_elements() {
        let f = Field::new(3, 1).unwrap();
        let elems: Vec<_> = f.elements().map(|e| f.coeffs(e)[0]).collect();
        assert_eq!(elems, vec![0, 1, 2]);
        assert_eq!(f.mul(f.elem(2), f.elem(2)), f.elem(1));
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert_eq!(Field::new(6, 1), Err(Error::InvalidCharacteristic(6)));
        assert_eq!(Field::new(1, 3), Err(Error::InvalidCharacteristic(1)));
    }

    #[test]
    fn f25_modulus_has_no_roots() {
        // oracle: brute-force root search over all 25 monic quadratics in lex order
        let p = 5u32;
        let mut first = None;
        'outer: for c0 in 0..p {
            for c1 in 0..p {
                if (0..p).all(|x| (x * x + c1 * x + c0) % p != 0) {
                    first = Some(vec![c0, c1, 1]);
                    break 'outer;
                }
            }
        }
        let f = Field::new(5, 2).unwrap();
        assert_eq!(Some(f.modulus().to_vec()), first);
        assert_eq!(f.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn element_of_order_examples() {
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(f4.element_of_order(3).unwrap(), f4.elem(2));
        assert_eq!(f4.element_of_order(1).unwrap(), FieldElem::ONE);
        assert!(matches!(
            f4.element_of_order(2),
            Err(Error::OrderUnavailable { .. })
        ));

        let f25 = Field::new(5, 2).unwrap();
        let a = f25.element_of_order(3).unwrap();
        assert_ne!(a, FieldElem::ONE);
        let cube = f25.mul(a, f25.mul(a, a));
        assert_eq!(cube, FieldElem::ONE);
    }

    #[test]
    fn frobenius_on_f4() {
        let f = Field::new(2, 2).unwrap();
        let w = f.elem(2);
        let w_plus_1 = f.add(w, FieldElem::ONE);
        assert_eq!(f.frobenius(w, 2), w_plus_1);
        assert_eq!(f.frobenius(FieldElem::ZERO, 2), FieldElem::ZERO);
        assert_eq!(f.frobenius(FieldElem::ONE, 2), FieldElem::ONE);
    }

    #[test]
    fn frobenius_involution_fixes_subfield() {
        for (p, m) in [(2u64, 1u32), (3, 1), (5, 1), (2, 2)] {
            let f = Field::new(p, 2 * m).unwrap();
            let q = p.pow(m);
            let mut fixed = 0;
            for x in f.elements() {
                let y = f.frobenius(x, q);
                assert_eq!(f.frobenius(y, q), x);
                if y == x {
                    fixed += 1;
                }
            }
            assert_eq!(fixed, q);
        }
    }

    #[test]
    fn exhaustive_axioms_small_fields() {
        for (p, k) in [
            (2, 1),
            (2, 2),
            (3, 1),
            (2, 3),
            (3, 2),
            (5, 1),
            (2, 4),
            (5, 2),
        ] {
            let f = Field::new(p, k).unwrap();
            let all: Vec<_> = f.elements().collect();
            for &a in &all {
                assert_eq!(f.add(a, f.neg(a)), FieldElem::ZERO);
                if a != FieldElem::ZERO {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE);
                    assert_eq!(f.mul(a, f.elem(1)), a);
                }
                for &b in &all {
                    assert_eq!(f.mul(a, b), f.slow_mul(a, b));
                    assert_eq!(f.add(a, b), f.add(b, a));
                    for &c in &all {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn element_of_order_is_exact() {
        let f = Field::new(3, 4).unwrap();
        for n in 1..=80u64 {
            if 80 % n != 0 {
                continue;
            }
            let x = f.element_of_order(n).unwrap();
            assert_eq!(f.pow(x, n), FieldElem::ONE);
            for d in 1..n {
                if n % d == 0 {
                    assert_ne!(f.pow(x, d), FieldElem::ONE);
                }
            }
        }
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(16), Some((2, 4)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
