//! The truncated polynomial algebra `A_n = F[x_1,...,x_n]/(x_1^p,...,x_n^p)`.
//!
//! Monomials are multi-indices with entries in `0..p`, and a product that
//! overflows any exponent past `p - 1` is zero. Polynomials are sparse maps
//! from monomials to nonzero coefficients; the map order (lexicographic on
//! exponent vectors) is the canonical term order everywhere, including
//! serialized forms.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::gf::{Field, FieldElement};

/// The multi-index `alpha` of `x^alpha`; `exps[k]` is the exponent of
/// `x_{k+1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    exps: Vec<u8>,
}

impl Monomial {
    /// Validates every exponent against `p`.
    pub fn new(exps: Vec<u8>, p: u32) -> Result<Monomial, Error> {
        if exps.iter().any(|&e| e as u32 >= p) {
            return Err(Error::BadParam);
        }
        Ok(Monomial { exps })
    }

    /// The constant monomial `1`.
    pub fn unit(n: usize) -> Monomial {
        Monomial { exps: vec![0; n] }
    }

    /// The monomial `x_i` (1-based).
    pub fn var(n: usize, i: usize) -> Result<Monomial, Error> {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange);
        }
        let mut exps = vec![0; n];
        exps[i - 1] = 1;
        Ok(Monomial { exps })
    }

    /// The top monomial `x^tau = x_1^{p-1} ... x_n^{p-1}`.
    pub fn tau(n: usize, p: u32) -> Monomial {
        Monomial {
            exps: vec![(p - 1) as u8; n],
        }
    }

    pub fn n(&self) -> usize {
        self.exps.len()
    }

    pub fn exps(&self) -> &[u8] {
        &self.exps
    }

    /// Exponent of `x_i` (1-based).
    pub fn exp(&self, i: usize) -> u8 {
        self.exps[i - 1]
    }

    /// Total degree `|alpha|`.
    pub fn total_degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// `x^alpha * x^beta`, or `None` when the product is truncated to zero.
    pub fn mul(&self, other: &Monomial, p: u32) -> Result<Option<Monomial>, Error> {
        if self.n() != other.n() {
            return Err(Error::ArityMismatch);
        }
        let mut exps = Vec::with_capacity(self.n());
        for (&a, &b) in self.exps.iter().zip(&other.exps) {
            let s = a as u32 + b as u32;
            if s > p - 1 {
                return Ok(None);
            }
            exps.push(s as u8);
        }
        Ok(Some(Monomial { exps }))
    }

    /// `alpha - eps_i`, or `None` when the exponent of `x_i` is zero.
    pub fn sub_eps(&self, i: usize) -> Option<Monomial> {
        if self.exps[i - 1] == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[i - 1] -= 1;
        Some(Monomial { exps })
    }

    /// `alpha + eps_i`, or `None` when that overflows past `p - 1`.
    pub fn add_eps(&self, i: usize, p: u32) -> Option<Monomial> {
        if self.exps[i - 1] as u32 + 1 > p - 1 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[i - 1] += 1;
        Some(Monomial { exps })
    }

    /// Mixed-radix key `alpha_1 + alpha_2 p + ... + alpha_n p^{n-1}` for dense
    /// indexing of the `p^n`-dimensional coordinate space of `A_n`.
    pub fn a_index(&self, p: u32) -> usize {
        let mut idx = 0usize;
        for &e in self.exps.iter().rev() {
            idx = idx * p as usize + e as usize;
        }
        idx
    }

    /// Inverse of [`Monomial::a_index`].
    pub fn from_a_index(mut idx: usize, n: usize, p: u32) -> Monomial {
        let mut exps = vec![0u8; n];
        for slot in exps.iter_mut() {
            *slot = (idx % p as usize) as u8;
            idx /= p as usize;
        }
        Monomial { exps }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let mut first = true;
        for (k, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", k + 1)?;
            } else {
                write!(f, "x{}^{}", k + 1, e)?;
            }
        }
        Ok(())
    }
}

/// A sparse element of `A_n`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncPoly {
    field: Field,
    n: usize,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl TruncPoly {
    pub fn zero(field: &Field, n: usize) -> TruncPoly {
        TruncPoly {
            field: field.clone(),
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: &Field, n: usize) -> TruncPoly {
        Self::monomial(field, Monomial::unit(n), field.one()).expect("unit monomial")
    }

    /// The variable `x_i` (1-based).
    pub fn var(field: &Field, n: usize, i: usize) -> Result<TruncPoly, Error> {
        Self::monomial(field, Monomial::var(n, i)?, field.one())
    }

    pub fn monomial(field: &Field, m: Monomial, c: FieldElement) -> Result<TruncPoly, Error> {
        if m.n() == 0 {
            return Err(Error::ArityMismatch);
        }
        if c.field() != field {
            return Err(Error::DescriptorMismatch);
        }
        let n = m.n();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Ok(TruncPoly {
            field: field.clone(),
            n,
            terms,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElement {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    fn ensure_same_context(&self, other: &TruncPoly) -> Result<(), Error> {
        if self.n != other.n || self.field != other.field {
            return Err(Error::DescriptorMismatch);
        }
        Ok(())
    }

    pub(crate) fn accumulate(&mut self, m: Monomial, c: &FieldElement) {
        let desc = self.field.descriptor();
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let mut raw = existing.coeffs().to_vec();
                desc.add_assign_raw(&mut raw, c.coeffs());
                if desc.is_zero_raw(&raw) {
                    self.terms.remove(&m);
                } else {
                    *existing = self.field.element_from_raw(raw);
                }
            }
            None => {
                if !c.is_zero() {
                    self.terms.insert(m, c.clone());
                }
            }
        }
    }

    pub fn add(&self, other: &TruncPoly) -> Result<TruncPoly, Error> {
        self.ensure_same_context(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.accumulate(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TruncPoly) -> Result<TruncPoly, Error> {
        self.ensure_same_context(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.accumulate(m.clone(), &c.neg());
        }
        Ok(out)
    }

    pub fn neg(&self) -> TruncPoly {
        let mut out = TruncPoly::zero(&self.field, self.n);
        for (m, c) in self.terms() {
            out.terms.insert(m.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, c: &FieldElement) -> Result<TruncPoly, Error> {
        if c.field() != &self.field {
            return Err(Error::DescriptorMismatch);
        }
        let mut out = TruncPoly::zero(&self.field, self.n);
        for (m, a) in self.terms() {
            let prod = a.mul(c)?;
            if !prod.is_zero() {
                out.terms.insert(m.clone(), prod);
            }
        }
        Ok(out)
    }

    /// Bilinear extension of the monomial product; truncated terms drop out.
    pub fn mul(&self, other: &TruncPoly) -> Result<TruncPoly, Error> {
        self.ensure_same_context(other)?;
        let p = self.field.p();
        let mut out = TruncPoly::zero(&self.field, self.n);
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                if let Some(m) = ma.mul(mb, p)? {
                    let c = ca.mul(cb)?;
                    out.accumulate(m, &c);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> TruncPoly {
        let mut acc = TruncPoly::one(&self.field, self.n);
        for _ in 0..k {
            acc = acc.mul(self).expect("same context");
        }
        acc
    }

    /// The partial derivative `D_i`, extended linearly from
    /// `D_i(x^alpha) = alpha_i x^(alpha - eps_i)`.
    pub fn d_i(&self, i: usize) -> Result<TruncPoly, Error> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange);
        }
        let mut out = TruncPoly::zero(&self.field, self.n);
        for (m, c) in self.terms() {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            let lower = m.sub_eps(i).expect("nonzero exponent");
            let scaled = c.mul(&self.field.from_int(e as i64))?;
            out.accumulate(lower, &scaled);
        }
        Ok(out)
    }

    /// The set of occupied grading degrees `{|alpha| : alpha in supp(f)}`.
    pub fn degrees(&self) -> BTreeSet<usize> {
        self.terms.keys().map(Monomial::total_degree).collect()
    }
}

impl fmt::Display for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let scalar = c.coeffs()[1..].iter().all(|&x| x == 0);
            if m.is_unit() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else if scalar {
                write!(f, "{c}{m}")?;
            } else {
                write!(f, "({c}){m}")?;
            }
        }
        Ok(())
    }
}
