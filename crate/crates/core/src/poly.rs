//! Sparse multivariate polynomials over `F_p` in graded reverse lexicographic
//! order.
//!
//! Monomials are dense exponent vectors of fixed capacity [`MAX_VARS`]; the
//! ambient variable count lives on the polynomial. Terms are kept strictly
//! decreasing in grevlex order with no zero coefficients, so the leading term
//! is always `terms[0]`.

use std::cmp::Ordering;
use std::fmt;

use crate::field::{FieldElement, PrimeField};

/// Maximum number of variables of any polynomial ring used here.
pub const MAX_VARS: usize = 14;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    degree: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { exps: [0; MAX_VARS], degree: 0 };

    pub fn var(i: usize) -> Self {
        Self::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, e: u16) -> Self {
        assert!(i < MAX_VARS, "variable index {i} out of range");
        let mut m = Self::ONE;
        m.exps[i] = e;
        m.degree = e as u32;
        m
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Self::ONE;
        m.exps[..exps.len()].copy_from_slice(exps);
        m.degree = exps.iter().map(|&e| e as u32).sum();
        m
    }

    #[inline]
    pub fn exponent(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn exponents(&self, nvars: usize) -> &[u16] {
        &self.exps[..nvars]
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u16; MAX_VARS];
        for i in 0..MAX_VARS {
            exps[i] = self.exps[i]
                .checked_add(other.exps[i])
                .expect("monomial exponent overflow");
        }
        Monomial { exps, degree: self.degree + other.degree }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = [0u16; MAX_VARS];
        for i in 0..MAX_VARS {
            exps[i] = self.exps[i].checked_sub(other.exps[i])?;
        }
        Some(Monomial { exps, degree: self.degree - other.degree })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u16; MAX_VARS];
        let mut degree = 0;
        for i in 0..MAX_VARS {
            exps[i] = self.exps[i].max(other.exps[i]);
            degree += exps[i] as u32;
        }
        Monomial { exps, degree }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// The variable `v` if this monomial is `x_v^e` with `e >= 1`.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    fn fmt_vars(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            write!(f, "1")
        } else {
            self.fmt_vars(f)
        }
    }
}

/// Graded reverse lexicographic comparison: higher total degree wins; on a
/// tie the monomial with the smaller exponent in the last differing variable
/// is the greater one.
#[inline]
pub fn grevlex_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    match a.degree.cmp(&b.degree) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..MAX_VARS).rev() {
        if a.exps[i] != b.exps[i] {
            return b.exps[i].cmp(&a.exps[i]);
        }
    }
    Ordering::Equal
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        grevlex_cmp(self, other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub type Term = (Monomial, FieldElement);

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: PrimeField,
    nvars: usize,
    terms: Vec<Term>,
}

impl MultiPoly {
    pub fn zero(field: PrimeField, nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables are supported");
        MultiPoly { field, nvars, terms: Vec::new() }
    }

    pub fn constant(field: PrimeField, nvars: usize, c: FieldElement) -> Self {
        Self::monomial(field, nvars, Monomial::ONE, c)
    }

    pub fn one(field: PrimeField, nvars: usize) -> Self {
        Self::constant(field, nvars, FieldElement::ONE)
    }

    pub fn var(field: PrimeField, nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        Self::monomial(field, nvars, Monomial::var(i), FieldElement::ONE)
    }

    pub fn monomial(field: PrimeField, nvars: usize, m: Monomial, c: FieldElement) -> Self {
        let mut p = Self::zero(field, nvars);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    /// Builds a polynomial from arbitrary terms: sorts, merges duplicates and
    /// drops zeros.
    pub fn from_terms(field: PrimeField, nvars: usize, terms: impl IntoIterator<Item = Term>) -> Self {
        let mut p = Self::zero(field, nvars);
        p.terms = terms.into_iter().collect();
        p.normalize();
        p
    }

    /// Linear form `sum_i coeffs[i] * x_i + constant`.
    pub fn linear(field: PrimeField, nvars: usize, coeffs: &[FieldElement], constant: FieldElement) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (Monomial::var(i), c))
            .chain(std::iter::once((Monomial::ONE, constant)));
        Self::from_terms(field, nvars, terms)
    }

    /// Wraps terms that are already strictly grevlex-descending and nonzero.
    pub(crate) fn from_sorted_terms(field: PrimeField, nvars: usize, terms: Vec<Term>) -> Self {
        debug_assert!(terms.windows(2).all(|w| grevlex_cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        MultiPoly { field, nvars, terms }
    }

    pub fn normalize(&mut self) {
        let field = self.field;
        self.terms.sort_unstable_by(|a, b| grevlex_cmp(&b.0, &a.0));
        let mut out: Vec<Term> = Vec::with_capacity(self.terms.len());
        for (m, c) in self.terms.drain(..) {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = field.add(last.1, c),
                _ => {
                    if let Some(last) = out.last() {
                        if last.1.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if out.last().is_some_and(|t| t.1.is_zero()) {
            out.pop();
        }
        debug_assert!(out.iter().all(|t| !t.1.is_zero()));
        self.terms = out;
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.0.degree() == 0)
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.first().map(|t| t.0)
    }

    pub fn leading_coeff(&self) -> Option<FieldElement> {
        self.terms.first().map(|t| t.1)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].0.degree() == w[1].0.degree())
    }

    /// Same polynomial viewed in a ring with more variables.
    pub fn with_nvars(mut self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars && nvars <= MAX_VARS);
        self.nvars = nvars;
        self
    }

    fn same_ring(&self, other: &MultiPoly) {
        assert_eq!(self.field, other.field, "polynomials over different fields");
        assert_eq!(self.nvars, other.nvars, "polynomials over different variable sets");
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.same_ring(other);
        self.merge(other, FieldElement::ONE, &Monomial::ONE)
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.same_ring(other);
        self.merge(other, self.field.neg(FieldElement::ONE), &Monomial::ONE)
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(self.field.neg(FieldElement::ONE))
    }

    pub fn scale(&self, c: FieldElement) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.field, self.nvars);
        }
        let f = self.field;
        MultiPoly {
            field: f,
            nvars: self.nvars,
            terms: self.terms.iter().map(|&(m, a)| (m, f.mul(a, c))).collect(),
        }
    }

    /// `self + c * m * other` in a single merge pass.
    pub fn add_scaled(&self, other: &MultiPoly, c: FieldElement, m: &Monomial) -> MultiPoly {
        self.same_ring(other);
        self.merge(other, c, m)
    }

    fn merge(&self, other: &MultiPoly, c: FieldElement, shift: &Monomial) -> MultiPoly {
        let f = self.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        merge_into(f, &self.terms, &other.terms, c, shift, &mut out);
        MultiPoly { field: f, nvars: self.nvars, terms: out }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.same_ring(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field, self.nvars);
        }
        let f = self.field;
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut products = Vec::with_capacity(small.len() * large.len());
        for &(m, a) in &small.terms {
            for &(n, b) in &large.terms {
                products.push((m.mul(&n), f.mul(a, b)));
            }
        }
        Self::from_terms(f, self.nvars, products)
    }

    pub fn mul_term(&self, m: &Monomial, c: FieldElement) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.field, self.nvars);
        }
        let f = self.field;
        MultiPoly {
            field: f,
            nvars: self.nvars,
            terms: self.terms.iter().map(|&(n, a)| (n.mul(m), f.mul(a, c))).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = Self::one(self.field, self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Scales so the leading coefficient is one; zero stays zero.
    pub fn monic(&self) -> MultiPoly {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) if c == FieldElement::ONE => self.clone(),
            Some(c) => self.scale(self.field.inv(c).expect("nonzero leading coefficient")),
        }
    }

    pub fn make_monic(&mut self) {
        if let Some(c) = self.leading_coeff() {
            if c != FieldElement::ONE {
                let inv = self.field.inv(c).expect("nonzero leading coefficient");
                let f = self.field;
                for t in &mut self.terms {
                    t.1 = f.mul(t.1, inv);
                }
            }
        }
    }

    pub fn partial_derivative(&self, var: usize) -> MultiPoly {
        let f = self.field;
        let terms = self.terms.iter().filter(|t| t.0.exponent(var) > 0).map(|&(m, c)| {
            let e = m.exponent(var);
            let lowered = m.div(&Monomial::var(var)).expect("positive exponent");
            (lowered, f.mul(c, f.element(e as u64)))
        });
        Self::from_terms(f, self.nvars, terms)
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> FieldElement {
        assert_eq!(point.len(), self.nvars);
        let f = self.field;
        self.terms.iter().fold(FieldElement::ZERO, |acc, &(m, c)| {
            let v = (0..self.nvars).fold(c, |v, i| f.mul(v, f.pow(point[i], m.exponent(i) as u64)));
            f.add(acc, v)
        })
    }

    /// Substitutes `x_i -> images[i]`; every image must live in the same
    /// target ring.
    pub fn compose(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut acc = Self::zero(self.field, target);
        for &(m, c) in &self.terms {
            let mut t = Self::constant(self.field, target, c);
            for (i, img) in images.iter().enumerate() {
                if m.exponent(i) > 0 {
                    t = t.mul(&img.pow(m.exponent(i) as u32));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
}

/// Merges `a + c * shift * b` into `out`; both inputs are grevlex-descending.
pub(crate) fn merge_into(
    f: PrimeField,
    a: &[Term],
    b: &[Term],
    c: FieldElement,
    shift: &Monomial,
    out: &mut Vec<Term>,
) {
    if c.is_zero() {
        out.extend_from_slice(a);
        return;
    }
    let (mut i, mut j) = (0, 0);
    let shifted = |t: &Term| (t.0.mul(shift), f.mul(t.1, c));
    let mut pending = if j < b.len() { Some(shifted(&b[j])) } else { None };
    while i < a.len() {
        let Some(bt) = pending else { break };
        match grevlex_cmp(&a[i].0, &bt.0) {
            Ordering::Greater => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Less => {
                out.push(bt);
                j += 1;
                pending = b.get(j).map(shifted);
            }
            Ordering::Equal => {
                let s = f.add(a[i].1, bt.1);
                if !s.is_zero() {
                    out.push((a[i].0, s));
                }
                i += 1;
                j += 1;
                pending = b.get(j).map(shifted);
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    if let Some(bt) = pending {
        out.push(bt);
        out.extend(b[j + 1..].iter().map(shifted));
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if m.degree() == 0 {
                write!(f, "{c}")?;
            } else if *c == FieldElement::ONE {
                m.fmt_vars(f)?;
            } else {
                write!(f, "{c}*")?;
                m.fmt_vars(f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[F_{}; {} vars]({})", self.field.modulus(), self.nvars, self)
    }
}
