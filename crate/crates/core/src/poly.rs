//! Monomials, exact rational polynomials and the truncated ambient algebra
//! `Q[x_1..x_n] / m^N` in which every ideal computation takes place.
//!
//! Monomials are ordered degree-first, then lexicographically with
//! `x_1 > x_2 > ...` (so `x^2` precedes `xy`, and `x` precedes `y^3`). The
//! same order fixes the column layout of every echelon matrix: column `i` is
//! the `i`-th monomial in this order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::EngineError;

/// Exact rational coefficient.
pub type Q = BigRational;

pub(crate) fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// A monomial `x_1^{e_1} ... x_n^{e_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    pub fn one(num_vars: usize) -> Self {
        Monomial::new(vec![0; num_vars])
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut exps = vec![0; num_vars];
        exps[i] = 1;
        Monomial::new(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn num_vars(&self) -> usize {
        self.exps.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            degree: self.degree + other.degree,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            exps: other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect(),
            degree: other.degree - self.degree,
        })
    }

    /// Render with the given variable names, e.g. `x^6*y`.
    pub fn render(&self, names: &[String]) -> String {
        let factors: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    names[i].clone()
                } else {
                    format!("{}^{}", names[i], e)
                }
            })
            .collect();
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| other.exps.cmp(&self.exps))
            .then_with(|| self.exps.len().cmp(&other.exps.len()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Compare two monomials in the fixed degree-then-lex order.
pub fn monomial_compare(a: &Monomial, b: &Monomial) -> Result<Ordering, EngineError> {
    if a.num_vars() != b.num_vars() {
        return Err(EngineError::VariableMismatch {
            expected: a.num_vars(),
            found: b.num_vars(),
        });
    }
    Ok(a.cmp(b))
}

/// A polynomial with exact rational coefficients. Zero coefficients are never
/// stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    num_vars: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl Polynomial {
    pub fn zero(num_vars: usize) -> Self {
        Polynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: Q) -> Self {
        Polynomial::term(Monomial::one(num_vars), c)
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut p = Polynomial::zero(m.num_vars());
        p.add_term(m, c);
        p
    }

    pub fn monomial(m: Monomial) -> Self {
        Polynomial::term(m, Q::one())
    }

    /// Build from `(exponents, coefficient)` pairs; like terms are combined.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Q)>,
    {
        let mut p = Polynomial::zero(num_vars);
        for (e, c) in terms {
            assert_eq!(e.len(), num_vars, "exponent vector length");
            p.add_term(Monomial::new(e), c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        debug_assert_eq!(m.num_vars(), self.num_vars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next()
    }

    /// Lowest total degree of a term (the order of the element in the local ring).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.num_vars);
        }
        Polynomial {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.mul_below(other, u32::MAX)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(a, c)| (a.mul(m), c.clone())).collect(),
        }
    }

    /// Product keeping only terms of degree `< limit`.
    pub(crate) fn mul_below(&self, other: &Polynomial, limit: u32) -> Polynomial {
        let mut out = Polynomial::zero(self.num_vars);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a.degree() + b.degree() < limit {
                    out.add_term(a.mul(b), ca * cb);
                }
            }
        }
        out
    }

    /// Drop every term of degree `>= limit`.
    pub fn truncate(&self, limit: u32) -> Polynomial {
        Polynomial {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() < limit)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Render with the given variable names in canonical form, terms in
    /// monomial order, e.g. `x^6*y + y^7` or `3/2*x^2 - y^2`.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let is_one = m.degree() == 0;
            if mag.is_one() {
                out.push_str(&m.render(names));
            } else if is_one {
                out.push_str(&mag.to_string());
            } else {
                out.push_str(&format!("{}*{}", mag, m.render(names)));
            }
        }
        out
    }
}

/// Default variable names `x, y, z, w, v, u` then `x7, x8, ...`.
pub fn default_var_names(n: usize) -> Vec<String> {
    const NAMES: [&str; 6] = ["x", "y", "z", "w", "v", "u"];
    (0..n)
        .map(|i| {
            if i < NAMES.len() {
                NAMES[i].to_string()
            } else {
                format!("x{}", i + 1)
            }
        })
        .collect()
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&default_var_names(self.num_vars)))
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The working model `Q[x_1..x_n] / m^N` of the local ring, optionally modulo
/// extra elements (the quotient contexts `R/(x_1,...,x_i)`).
///
/// `trunc_degree` is a ceiling: an ideal whose primacy index would reach it
/// cannot be represented and operations report `TruncationInsufficient`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedAlgebra {
    num_vars: usize,
    trunc_degree: u32,
    modulus: Vec<Polynomial>,
}

impl TruncatedAlgebra {
    pub fn new(num_vars: usize, trunc_degree: u32) -> Self {
        assert!(num_vars > 0, "at least one variable");
        assert!(trunc_degree > 0, "positive truncation degree");
        TruncatedAlgebra {
            num_vars,
            trunc_degree,
            modulus: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn trunc_degree(&self) -> u32 {
        self.trunc_degree
    }

    /// Elements generating the ideal this context is a quotient by.
    pub fn modulus(&self) -> &[Polynomial] {
        &self.modulus
    }

    /// Krull dimension, assuming the modulus elements form part of a system
    /// of parameters.
    pub fn dimension(&self) -> usize {
        self.num_vars - self.modulus.len()
    }

    pub(crate) fn with_modulus(&self, x: Polynomial) -> Self {
        let mut next = self.clone();
        next.modulus.push(x);
        next
    }

    pub fn with_trunc_degree(&self, n: u32) -> Self {
        let mut next = self.clone();
        next.trunc_degree = n;
        next
    }

    /// Number of monomials of degree `< t`.
    pub fn count_below(&self, t: u32) -> usize {
        let d = self.num_vars as u64;
        binomial(t as u64 + d - 1, d) as usize
    }

    /// Number of monomials of degree exactly `t`.
    pub fn count_in_degree(&self, t: u32) -> usize {
        self.count_below(t + 1) - self.count_below(t)
    }

    /// Every monomial of degree `< N`, in monomial order.
    pub fn monomial_basis(&self) -> Vec<Monomial> {
        (0..self.count_below(self.trunc_degree) as u32)
            .map(|i| self.unrank(i))
            .collect()
    }

    /// Column index of a monomial in the fixed order.
    pub fn rank(&self, m: &Monomial) -> u32 {
        self.rank_exps(m.exponents(), m.degree())
    }

    pub(crate) fn rank_exps(&self, exps: &[u32], degree: u32) -> u32 {
        let d = self.num_vars;
        let mut idx = self.count_below(degree) as u64;
        let mut remaining = degree as u64;
        for (i, &e) in exps.iter().enumerate().take(d - 1) {
            let e = e as u64;
            let k = (d - i - 1) as u64;
            if remaining > e {
                idx += binomial(remaining - e - 1 + k, k);
            }
            remaining -= e;
        }
        idx as u32
    }

    /// Degree of the monomial at column `idx`.
    pub(crate) fn degree_of(&self, idx: u32) -> u32 {
        // smallest t with count_below(t + 1) > idx
        let mut lo = 0u32;
        let mut hi = 1u32;
        while self.count_below(hi + 1) <= idx as usize {
            hi *= 2;
        }
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.count_below(mid + 1) > idx as usize {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    }

    pub fn unrank(&self, idx: u32) -> Monomial {
        let degree = self.degree_of(idx);
        Monomial::new(self.unrank_exps(idx, degree))
    }

    pub(crate) fn unrank_exps(&self, idx: u32, degree: u32) -> Vec<u32> {
        let d = self.num_vars;
        let mut r = idx as u64 - self.count_below(degree) as u64;
        let mut remaining = degree as u64;
        let mut exps = vec![0u32; d];
        for (i, slot) in exps.iter_mut().enumerate().take(d - 1) {
            let k = (d - i - 1) as u64;
            // count of monomials whose exponent here exceeds e
            let above = |e: u64| {
                if remaining > e {
                    binomial(remaining - e - 1 + k, k)
                } else {
                    0
                }
            };
            let mut e = remaining;
            while e > 0 && above(e - 1) <= r {
                e -= 1;
            }
            r -= above(e);
            *slot = e as u32;
            remaining -= e;
        }
        exps[d - 1] = remaining as u32;
        exps
    }
}

impl TruncatedAlgebra {
    /// Visit every monomial of degree `< t` in order, with its column.
    pub fn for_each_below(&self, t: u32, mut f: impl FnMut(u32, &[u32])) {
        let mut exps = vec![0u32; self.num_vars];
        let mut col = 0u32;
        for u in 0..t {
            visit_layer(&mut exps, 0, u, &mut |e| {
                f(col, e);
                col += 1;
            });
        }
    }

    /// Visit every monomial of degree exactly `u` in order.
    pub fn for_each_in_degree(&self, u: u32, mut f: impl FnMut(&[u32])) {
        let mut exps = vec![0u32; self.num_vars];
        visit_layer(&mut exps, 0, u, &mut f);
    }

    /// Sparse column vector of the terms of `f` of degree `< t`.
    pub fn vectorize(&self, f: &Polynomial, t: u32) -> Vec<(u32, Q)> {
        // the polynomial's term order is the column order
        f.terms()
            .take_while(|(m, _)| m.degree() < t)
            .map(|(m, c)| (self.rank(m), c.clone()))
            .collect()
    }

    pub fn polynomial_of(&self, v: &[(u32, Q)]) -> Polynomial {
        let mut p = Polynomial::zero(self.num_vars);
        for (col, c) in v {
            p.add_term(self.unrank(*col), c.clone());
        }
        p
    }
}

fn visit_layer(exps: &mut [u32], i: usize, remaining: u32, f: &mut dyn FnMut(&[u32])) {
    if i + 1 == exps.len() {
        exps[i] = remaining;
        f(exps);
        return;
    }
    for e in (0..=remaining).rev() {
        exps[i] = e;
        visit_layer(exps, i + 1, remaining - e, f);
    }
}

/// Product `f * g` with every term of degree `>= N` discarded.
pub fn poly_mul_trunc(f: &Polynomial, g: &Polynomial, ctx: &TruncatedAlgebra) -> Polynomial {
    f.mul_below(g, ctx.trunc_degree())
}

/// `h^{(i)}(1) / i!` for `h = sum_k coeffs[k] t^k`, i.e. `sum_k C(k, i) h_k`.
pub fn derivative_at_one(coeffs: &[Q], i: usize) -> Q {
    coeffs
        .iter()
        .enumerate()
        .skip(i)
        .fold(Q::zero(), |acc, (k, h)| {
            acc + h * Q::from_integer(BigInt::from(binomial(k as u64, i as u64)))
        })
}
