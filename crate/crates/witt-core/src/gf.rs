//! Exact arithmetic in prime fields `F_p` and extensions `F_{p^m}`.
//!
//! An extension field is described by a monic irreducible modulus over `F_p`
//! in the generator `t`; elements are residues stored as ascending coefficient
//! vectors of length `m`, fully reduced at all times so that equality is plain
//! coefficient comparison. Two descriptors are compatible for arithmetic iff
//! they are identical.
//!
//! The module also houses *regular vectors*: tuples `(l_1,...,l_n)` in `F^n`
//! whose entries are linearly independent over the prime subfield `F_p`. These
//! exist iff the extension degree is at least `n`, and they are what make the
//! centralizer computations in [`crate::structure`] come out exactly the torus.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::rng::SplitMix64;

/// Field parameters: characteristic, extension degree, and modulus.
///
/// The modulus is stored ascending (`modulus[k]` is the coefficient of `t^k`),
/// has length `degree + 1`, and is monic. For `degree = 1` the default is the
/// placeholder `t`, which never participates in arithmetic.
#[derive(Debug, PartialEq, Eq)]
pub struct FieldDescriptor {
    p: u32,
    degree: usize,
    modulus: Vec<u32>,
}

/// Cheaply clonable handle to a [`FieldDescriptor`].
#[derive(Debug, Clone)]
pub struct Field {
    inner: Arc<FieldDescriptor>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || *self.inner == *other.inner
    }
}

impl Eq for Field {}

/// An element of `F_{p^m}`: `coeffs[k]` is the coefficient of `t^k`, all
/// entries reduced mod `p`, length exactly `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    coeffs: Vec<u32>,
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn scalar_inv(c: u32, p: u32) -> u32 {
    // Fermat: c^(p-2) mod p.
    debug_assert!(!c.is_multiple_of(p));
    let mut acc = 1u64;
    let mut base = (c % p) as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Degree of a coefficient vector, `None` for the zero polynomial.
fn poly_deg(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// Remainder of `a` modulo `b` over `F_p`; `b` must be nonzero.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let db = poly_deg(b).expect("division by zero polynomial");
    let lead_inv = scalar_inv(b[db], p);
    let mut r = a.to_vec();
    while let Some(dr) = poly_deg(&r) {
        if dr < db {
            break;
        }
        let q = (r[dr] as u64 * lead_inv as u64 % p as u64) as u32;
        for (j, &bj) in b.iter().enumerate().take(db + 1) {
            let sub = q as u64 * bj as u64 % p as u64;
            let idx = dr - db + j;
            r[idx] = ((r[idx] as u64 + p as u64 - sub) % p as u64) as u32;
        }
    }
    r
}

/// Inverse of `a` modulo the monic irreducible `modulus`, by the extended
/// Euclidean algorithm over `F_p[t]`.
fn poly_inv_mod(a: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    // Invariant: r0 = s0*a (mod modulus), r1 = s1*a (mod modulus).
    let mut r0 = modulus.to_vec();
    let mut r1 = a.to_vec();
    let mut s0: Vec<u32> = vec![0];
    let mut s1: Vec<u32> = vec![1];
    while poly_deg(&r1).is_some() {
        // Divide r0 by r1.
        let d1 = poly_deg(&r1).unwrap();
        let lead_inv = scalar_inv(r1[d1], p);
        let mut q = vec![0u32; r0.len()];
        let mut rem = r0.clone();
        while let Some(dr) = poly_deg(&rem) {
            if dr < d1 {
                break;
            }
            let c = (rem[dr] as u64 * lead_inv as u64 % p as u64) as u32;
            q[dr - d1] = c;
            for (j, &r1j) in r1.iter().enumerate().take(d1 + 1) {
                let sub = c as u64 * r1j as u64 % p as u64;
                let idx = dr - d1 + j;
                rem[idx] = ((rem[idx] as u64 + p as u64 - sub) % p as u64) as u32;
            }
        }
        // s_new = s0 - q*s1
        let mut s_new = vec![0u32; s0.len().max(q.len() + s1.len())];
        for (i, &c) in s0.iter().enumerate() {
            s_new[i] = c;
        }
        for (i, &qc) in q.iter().enumerate() {
            if qc == 0 {
                continue;
            }
            for (j, &sc) in s1.iter().enumerate() {
                let prod = qc as u64 * sc as u64 % p as u64;
                let idx = i + j;
                s_new[idx] = ((s_new[idx] as u64 + p as u64 - prod) % p as u64) as u32;
            }
        }
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s_new;
    }
    // r0 is now a nonzero constant gcd (modulus irreducible, a nonzero).
    let d0 = poly_deg(&r0).expect("gcd vanished");
    debug_assert_eq!(d0, 0, "modulus not irreducible or input not reduced");
    let c_inv = scalar_inv(r0[0], p);
    let mut out = poly_rem(&s0, modulus, p);
    for c in out.iter_mut() {
        *c = (*c as u64 * c_inv as u64 % p as u64) as u32;
    }
    out.resize(modulus.len() - 1, 0);
    out
}

/// Trial-division irreducibility for a monic polynomial over `F_p`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = poly_deg(f).expect("zero polynomial");
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    // Divide by every monic polynomial of degree 1..=m/2.
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = vec![0u32; d + 1];
            g[d] = 1;
            let mut k = idx;
            for slot in g.iter_mut().take(d) {
                *slot = (k % p as u64) as u32;
                k /= p as u64;
            }
            let r = poly_rem(f, &g, p);
            if poly_deg(&r).is_none() {
                return false;
            }
        }
    }
    true
}

/// The deterministic default modulus: the lexicographically smallest monic
/// irreducible of degree `m`, scanning the tuples `(c_0,...,c_{m-1})` in
/// ascending order with `c_0` most significant.
fn default_modulus(p: u32, m: usize) -> Vec<u32> {
    if m == 1 {
        // Placeholder `t`; degree-1 arithmetic never consults it.
        return vec![0, 1];
    }
    let count = (p as u64).pow(m as u32);
    for idx in 0..count {
        let mut f = vec![0u32; m + 1];
        f[m] = 1;
        let mut k = idx;
        for j in (0..m).rev() {
            f[j] = (k % p as u64) as u32;
            k /= p as u64;
        }
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

impl FieldDescriptor {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// `p^m` as a `u64`; desk-scale parameters only.
    pub fn order(&self) -> u64 {
        (self.p as u64)
            .checked_pow(self.degree as u32)
            .expect("field order overflows u64")
    }

    // ----- raw coefficient-slice arithmetic (crate-internal fast path) -----

    pub(crate) fn zero_raw(&self) -> Vec<u32> {
        vec![0; self.degree]
    }

    pub(crate) fn one_raw(&self) -> Vec<u32> {
        let mut v = vec![0; self.degree];
        v[0] = 1;
        v
    }

    pub(crate) fn is_zero_raw(&self, a: &[u32]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub(crate) fn scalar_raw(&self, c: i64) -> Vec<u32> {
        let p = self.p as i64;
        let mut v = vec![0; self.degree];
        v[0] = c.rem_euclid(p) as u32;
        v
    }

    pub(crate) fn add_assign_raw(&self, a: &mut [u32], b: &[u32]) {
        for (x, &y) in a.iter_mut().zip(b) {
            *x = (*x + y) % self.p;
        }
    }

    pub(crate) fn sub_assign_raw(&self, a: &mut [u32], b: &[u32]) {
        for (x, &y) in a.iter_mut().zip(b) {
            *x = (*x + self.p - y) % self.p;
        }
    }

    pub(crate) fn neg_raw(&self, a: &[u32]) -> Vec<u32> {
        a.iter().map(|&c| (self.p - c) % self.p).collect()
    }

    pub(crate) fn mul_raw(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let m = self.degree;
        if m == 1 {
            return vec![(a[0] as u64 * b[0] as u64 % p) as u32];
        }
        // Schoolbook product, then fold down by the monic modulus.
        let mut buf = vec![0u64; 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                buf[i + j] = (buf[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (m..2 * m - 1).rev() {
            let c = buf[k];
            if c == 0 {
                continue;
            }
            buf[k] = 0;
            for j in 0..m {
                let sub = c * self.modulus[j] as u64 % p;
                buf[k - m + j] = (buf[k - m + j] + p - sub) % p;
            }
        }
        buf.into_iter().take(m).map(|c| c as u32).collect()
    }

    /// `y -= c * x`, elementwise over one field element.
    pub(crate) fn submul_assign_raw(&self, y: &mut [u32], c: &[u32], x: &[u32]) {
        if self.degree == 1 {
            let p = self.p as u64;
            y[0] = ((y[0] as u64 + p - c[0] as u64 * x[0] as u64 % p) % p) as u32;
        } else {
            let prod = self.mul_raw(c, x);
            self.sub_assign_raw(y, &prod);
        }
    }

    pub(crate) fn inv_raw(&self, a: &[u32]) -> Option<Vec<u32>> {
        if self.is_zero_raw(a) {
            return None;
        }
        if self.degree == 1 {
            return Some(vec![scalar_inv(a[0], self.p)]);
        }
        Some(poly_inv_mod(a, &self.modulus, self.p))
    }

    pub(crate) fn pow_raw(&self, a: &[u32], e: u64) -> Vec<u32> {
        let mut acc = self.one_raw();
        let mut base = a.to_vec();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(&acc, &base);
            }
            base = self.mul_raw(&base, &base);
            e >>= 1;
        }
        acc
    }
}

impl Field {
    /// Build `F_{p^m}` with the deterministic default modulus.
    pub fn new(p: u32, degree: usize) -> Result<Field, Error> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if degree == 0 {
            return Err(Error::BadParam);
        }
        Ok(Field {
            inner: Arc::new(FieldDescriptor {
                p,
                degree,
                modulus: default_modulus(p, degree),
            }),
        })
    }

    /// Build `F_{p^m}` with an explicit modulus (ascending coefficients,
    /// length `m + 1`, monic, irreducible).
    pub fn with_modulus(p: u32, degree: usize, modulus: Vec<u32>) -> Result<Field, Error> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if degree == 0 {
            return Err(Error::BadParam);
        }
        if modulus.len() != degree + 1
            || modulus[degree] != 1
            || modulus.iter().any(|&c| c >= p)
        {
            return Err(Error::BadModulus);
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::BadModulus);
        }
        Ok(Field {
            inner: Arc::new(FieldDescriptor { p, degree, modulus }),
        })
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.inner
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn order(&self) -> u64 {
        self.inner.order()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            coeffs: self.inner.zero_raw(),
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            coeffs: self.inner.one_raw(),
        }
    }

    /// Embed an integer (reduced mod `p`).
    pub fn from_int(&self, c: i64) -> FieldElement {
        FieldElement {
            field: self.clone(),
            coeffs: self.inner.scalar_raw(c),
        }
    }

    /// The residue class of the generator `t`.
    pub fn generator(&self) -> FieldElement {
        let mut coeffs = self.inner.zero_raw();
        if self.degree() >= 2 {
            coeffs[1] = 1;
        } else {
            // t is congruent to -modulus[0] in a degree-1 quotient.
            coeffs[0] = (self.p() - self.modulus()[0] % self.p()) % self.p();
        }
        FieldElement {
            field: self.clone(),
            coeffs,
        }
    }

    /// Element from an ascending coefficient list of length at most `m`
    /// (shorter lists are padded with zeros); entries are reduced mod `p`.
    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement, Error> {
        if coeffs.len() > self.degree() {
            return Err(Error::BadParam);
        }
        let mut v = self.inner.zero_raw();
        for (slot, &c) in v.iter_mut().zip(coeffs) {
            *slot = c % self.p();
        }
        Ok(FieldElement {
            field: self.clone(),
            coeffs: v,
        })
    }

    pub(crate) fn element_from_raw(&self, coeffs: Vec<u32>) -> FieldElement {
        debug_assert_eq!(coeffs.len(), self.degree());
        FieldElement {
            field: self.clone(),
            coeffs,
        }
    }

    pub fn random_element(&self, rng: &mut SplitMix64) -> FieldElement {
        let coeffs = (0..self.degree())
            .map(|_| rng.below(self.p() as u64) as u32)
            .collect();
        FieldElement {
            field: self.clone(),
            coeffs,
        }
    }

    pub fn random_nonzero(&self, rng: &mut SplitMix64) -> FieldElement {
        loop {
            let x = self.random_element(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn ensure_same_field(&self, other: &FieldElement) -> Result<(), Error> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, Error> {
        self.ensure_same_field(other)?;
        let mut coeffs = self.coeffs.clone();
        self.field.descriptor().add_assign_raw(&mut coeffs, &other.coeffs);
        Ok(self.field.element_from_raw(coeffs))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, Error> {
        self.ensure_same_field(other)?;
        let mut coeffs = self.coeffs.clone();
        self.field.descriptor().sub_assign_raw(&mut coeffs, &other.coeffs);
        Ok(self.field.element_from_raw(coeffs))
    }

    pub fn neg(&self) -> FieldElement {
        let coeffs = self.field.descriptor().neg_raw(&self.coeffs);
        self.field.element_from_raw(coeffs)
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, Error> {
        self.ensure_same_field(other)?;
        let coeffs = self.field.descriptor().mul_raw(&self.coeffs, &other.coeffs);
        Ok(self.field.element_from_raw(coeffs))
    }

    pub fn inv(&self) -> Result<FieldElement, Error> {
        match self.field.descriptor().inv_raw(&self.coeffs) {
            Some(coeffs) => Ok(self.field.element_from_raw(coeffs)),
            None => Err(Error::DivisionByZero),
        }
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        let coeffs = self.field.descriptor().pow_raw(&self.coeffs, e);
        self.field.element_from_raw(coeffs)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => {
                    if c == 1 {
                        write!(f, "t")?
                    } else {
                        write!(f, "{c}t")?
                    }
                }
                _ => {
                    if c == 1 {
                        write!(f, "t^{k}")?
                    } else {
                        write!(f, "{c}t^{k}")?
                    }
                }
            }
        }
        Ok(())
    }
}

/// Rank over `F_p` of a small dense matrix given as rows.
fn rank_mod_p(mut rows: Vec<Vec<u32>>, p: u32) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = scalar_inv(rows[rank][col], p) as u64;
        for entry in rows[rank].iter_mut() {
            *entry = (*entry as u64 * inv % p as u64) as u32;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let factor = row[col] as u64;
                for (slot, &pc) in row.iter_mut().zip(&pivot_row) {
                    let sub = factor * pc as u64 % p as u64;
                    *slot = ((*slot as u64 + p as u64 - sub) % p as u64) as u32;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Are `entries` linearly independent over the prime subfield `F_p`?
///
/// Equivalently: the only `mu` in `F_p^n` with `sum mu_i * entries_i = 0` is
/// `mu = 0`; computed as a rank condition on the coefficient matrix.
pub fn is_regular(entries: &[FieldElement]) -> Result<bool, Error> {
    let first = entries.first().ok_or(Error::BadParam)?;
    for e in entries {
        first.ensure_same_field(e)?;
    }
    let field = first.field();
    let n = entries.len();
    if n > field.degree() {
        return Ok(false);
    }
    // Rows indexed by t-power, columns by entry.
    let rows: Vec<Vec<u32>> = (0..field.degree())
        .map(|k| entries.iter().map(|e| e.coeffs()[k]).collect())
        .collect();
    Ok(rank_mod_p(rows, field.p()) == n)
}

/// A vector `(l_1,...,l_n)` whose entries are `F_p`-linearly independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularVector {
    entries: Vec<FieldElement>,
}

impl RegularVector {
    pub fn new(entries: Vec<FieldElement>) -> Result<RegularVector, Error> {
        if is_regular(&entries)? {
            Ok(RegularVector { entries })
        } else {
            Err(Error::NotRegular)
        }
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn field(&self) -> &Field {
        self.entries[0].field()
    }

    /// Sample a regular vector by rejection.
    pub fn random(field: &Field, n: usize, rng: &mut SplitMix64) -> Result<RegularVector, Error> {
        if field.degree() < n {
            return Err(Error::FieldTooSmall {
                degree: field.degree(),
                needed: n,
            });
        }
        loop {
            let entries: Vec<FieldElement> =
                (0..n).map(|_| field.random_element(rng)).collect();
            if is_regular(&entries)? {
                return Ok(RegularVector { entries });
            }
        }
    }
}

/// The standard regular vector `(1, t, t^2, ..., t^{n-1})`.
pub fn default_regular(field: &Field, n: usize) -> Result<RegularVector, Error> {
    if n == 0 {
        return Err(Error::BadParam);
    }
    if field.degree() < n {
        return Err(Error::FieldTooSmall {
            degree: field.degree(),
            needed: n,
        });
    }
    let t = field.generator();
    let entries = (0..n).map(|k| t.pow(k as u64)).collect();
    RegularVector::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent reducibility oracle: try every factorization into two
    /// monic factors of positive degree.
    fn has_proper_factorization(f: &[u32], p: u32) -> bool {
        let m = poly_deg(f).unwrap();
        for d in 1..m {
            let count = (p as u64).pow(d as u32);
            let count2 = (p as u64).pow((m - d) as u32);
            for i in 0..count {
                let mut g = vec![0u32; d + 1];
                g[d] = 1;
                let mut k = i;
                for slot in g.iter_mut().take(d) {
                    *slot = (k % p as u64) as u32;
                    k /= p as u64;
                }
                for j in 0..count2 {
                    let mut h = vec![0u32; m - d + 1];
                    h[m - d] = 1;
                    let mut k = j;
                    for slot in h.iter_mut().take(m - d) {
                        *slot = (k % p as u64) as u32;
                        k /= p as u64;
                    }
                    // g * h == f?
                    let mut prod = vec![0u64; m + 1];
                    for (a, &ga) in g.iter().enumerate() {
                        for (b, &hb) in h.iter().enumerate() {
                            prod[a + b] = (prod[a + b] + ga as u64 * hb as u64) % p as u64;
                        }
                    }
                    if prod.iter().zip(f).all(|(&a, &b)| a as u32 == b) {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn default_moduli_match_the_scan() {
        // F_2: placeholder t.
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(f2.modulus(), &[0, 1]);
        // F_4: t^2, t^2+1, t^2+t all factor; t^2+t+1 does not.
        assert!(has_proper_factorization(&[0, 0, 1], 2));
        assert!(has_proper_factorization(&[1, 0, 1], 2));
        assert!(has_proper_factorization(&[0, 1, 1], 2));
        assert!(!has_proper_factorization(&[1, 1, 1], 2));
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        // F_3.
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(f3.p(), 3);
        assert_eq!(f3.order(), 3);
        // F_9 gets t^2+1.
        let f9 = Field::new(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        assert!(!has_proper_factorization(&[1, 0, 1], 3));
    }

    #[test]
    fn constructor_rejections() {
        assert_eq!(Field::new(4, 1).unwrap_err(), Error::NonPrime(4));
        assert_eq!(Field::new(1, 1).unwrap_err(), Error::NonPrime(1));
        // wrong degree
        assert_eq!(
            Field::with_modulus(2, 2, vec![1, 1]).unwrap_err(),
            Error::BadModulus
        );
        // non-monic
        assert_eq!(
            Field::with_modulus(3, 2, vec![1, 0, 2]).unwrap_err(),
            Error::BadModulus
        );
        // reducible: t^2+1 over F_2 is (t+1)^2
        assert_eq!(
            Field::with_modulus(2, 2, vec![1, 0, 1]).unwrap_err(),
            Error::BadModulus
        );
    }

    #[test]
    fn f4_multiplication_table_entries() {
        let f4 = Field::new(2, 2).unwrap();
        let t = f4.generator();
        // Oracle: t*t = t^2 reduced by t^2+t+1, i.e. t^2 = t+1.
        let reduced = poly_rem(&[0, 0, 1], &[1, 1, 1], 2);
        assert_eq!(&reduced[..2], &[1, 1]);
        assert_eq!(t.mul(&t).unwrap(), f4.element(&[1, 1]).unwrap());
        // Multiplicative group of F_4 has order 3.
        assert!(t.pow(3).is_one());
    }

    #[test]
    fn f3_inverse_of_two() {
        let f3 = Field::new(3, 1).unwrap();
        let two = f3.from_int(2);
        assert_eq!(two.inv().unwrap(), two);
    }

    #[test]
    fn descriptor_mismatch_detected() {
        let f3 = Field::new(3, 1).unwrap();
        let f9 = Field::new(3, 2).unwrap();
        let err = f3.from_int(1).add(&f9.from_int(1)).unwrap_err();
        assert_eq!(err, Error::DescriptorMismatch);
        assert_eq!(f3.zero().inv().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn regular_vector_examples() {
        let f4 = Field::new(2, 2).unwrap();
        let one = f4.one();
        let t = f4.generator();
        assert!(is_regular(&[one.clone(), t.clone()]).unwrap());
        assert!(!is_regular(&[one.clone(), one.clone()]).unwrap());
        let f3 = Field::new(3, 1).unwrap();
        assert!(is_regular(&[f3.from_int(2)]).unwrap());

        let f9 = Field::new(3, 2).unwrap();
        let reg = default_regular(&f9, 2).unwrap();
        assert_eq!(reg.entries()[0], f9.one());
        assert_eq!(reg.entries()[1], f9.generator());
        assert!(is_regular(reg.entries()).unwrap());

        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(default_regular(&f2, 1).unwrap().entries(), &[f2.one()]);
        assert_eq!(
            default_regular(&f2, 2).unwrap_err(),
            Error::FieldTooSmall { degree: 1, needed: 2 }
        );

        let reg4 = default_regular(&f4, 2).unwrap();
        assert_eq!(reg4.entries()[1], f4.generator());
    }

    #[test]
    fn field_axioms_on_random_triples() {
        let fields = [
            Field::new(2, 1).unwrap(),
            Field::new(3, 1).unwrap(),
            Field::new(2, 2).unwrap(),
            Field::new(3, 2).unwrap(),
            Field::new(2, 3).unwrap(),
            Field::new(5, 2).unwrap(),
            Field::new(7, 1).unwrap(),
            Field::new(7, 2).unwrap(),
        ];
        let mut rng = SplitMix64::new(0xfeed);
        for f in &fields {
            for _ in 0..200 {
                let a = f.random_element(&mut rng);
                let b = f.random_element(&mut rng);
                let c = f.random_element(&mut rng);
                // associativity + commutativity
                assert_eq!(
                    a.add(&b).unwrap().add(&c).unwrap(),
                    a.add(&b.add(&c).unwrap()).unwrap()
                );
                assert_eq!(
                    a.mul(&b).unwrap().mul(&c).unwrap(),
                    a.mul(&b.mul(&c).unwrap()).unwrap()
                );
                assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
                assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
                // distributivity
                assert_eq!(
                    a.mul(&b.add(&c).unwrap()).unwrap(),
                    a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
                );
                // inverses
                assert!(a.add(&a.neg()).unwrap().is_zero());
                if !a.is_zero() {
                    assert!(a.mul(&a.inv().unwrap()).unwrap().is_one());
                }
                // Frobenius is additive
                let pe = f.p() as u64;
                assert_eq!(
                    a.add(&b).unwrap().pow(pe),
                    a.pow(pe).add(&b.pow(pe)).unwrap()
                );
                // multiplicative order divides p^m - 1
                if !a.is_zero() {
                    assert!(a.pow(f.order() - 1).is_one());
                }
            }
        }
    }

    #[test]
    fn regularity_invariant_under_prime_scalars() {
        let f9 = Field::new(3, 2).unwrap();
        let mut rng = SplitMix64::new(5);
        for _ in 0..100 {
            let v = RegularVector::random(&f9, 2, &mut rng).unwrap();
            for s in 1..3 {
                let scaled: Vec<FieldElement> = v
                    .entries()
                    .iter()
                    .map(|e| e.mul(&f9.from_int(s)).unwrap())
                    .collect();
                assert!(is_regular(&scaled).unwrap());
            }
        }
    }
}
