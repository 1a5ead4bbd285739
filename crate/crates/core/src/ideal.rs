//! Ideals of the truncated algebra.
//!
//! An m-primary ideal `I` with primacy index `s` (the least `s` with
//! `m^s ⊆ I`) is stored exactly as the row space `I / m^s` inside
//! `R / m^s`, so the width of the stored matrix adapts to each ideal. The
//! ambient truncation degree only bounds how large `s` may grow.
//!
//! Monomial ideals (outside quotient contexts) use a membership table
//! instead of an echelon matrix. An ideal whose reduced basis has only unit
//! rows is always stored in monomial form, so the representation is
//! canonical and structural equality is ideal equality.
//!
//! In a quotient context `R/(x)` every ideal is represented by its preimage
//! in `R`, which contains the modulus elements.

use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};
use crate::linalg::{Echelon, RankCounter, SparseVec};
use crate::poly::{Monomial, Polynomial, TruncatedAlgebra, Q};

/// Witness that `m^s ⊆ I` and `m^{s-1} ⊄ I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimacyCertificate {
    pub s: u32,
    /// Truncation degree of the subspace on which the layer scan ran.
    pub witness_checked_degree: u32,
}

#[derive(Clone, Debug)]
struct MonoBody {
    gens: Vec<Monomial>,
    /// Membership by column for every monomial of degree `< s`.
    member: Vec<bool>,
}

impl PartialEq for MonoBody {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
    }
}

impl Eq for MonoBody {}

impl Hash for MonoBody {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.gens.hash(state);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Body {
    Monomial(MonoBody),
    General(Echelon),
}

/// An m-primary ideal of a [`TruncatedAlgebra`].
#[derive(Clone, Debug)]
pub struct IdealRep {
    ctx: Arc<TruncatedAlgebra>,
    cert: PrimacyCertificate,
    generators: Vec<Polynomial>,
    body: Body,
}

impl PartialEq for IdealRep {
    fn eq(&self, other: &Self) -> bool {
        self.cert.s == other.cert.s && self.body == other.body
    }
}

impl Eq for IdealRep {}

impl Hash for IdealRep {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.cert.s.hash(state);
        self.body.hash(state);
    }
}

fn divides_exps(g: &[u32], m: &[u32]) -> bool {
    g.iter().zip(m).all(|(a, b)| a <= b)
}

fn minimize_monomials(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort();
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

fn layer_full(ctx: &TruncatedAlgebra, gens: &[Monomial], u: u32) -> bool {
    let mut full = true;
    ctx.for_each_in_degree(u, |e| {
        if full && !gens.iter().any(|g| divides_exps(g.exponents(), e)) {
            full = false;
        }
    });
    full
}

/// Smallest full layer in `[lo, hi]`, given that layer `hi` is full.
fn first_full_layer(ctx: &TruncatedAlgebra, gens: &[Monomial], mut lo: u32, mut hi: u32) -> u32 {
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if layer_full(ctx, gens, mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    hi
}

fn same_context(a: &TruncatedAlgebra, b: &TruncatedAlgebra) -> bool {
    a.num_vars() == b.num_vars() && a.modulus() == b.modulus()
}

fn check_ceiling(ctx: &TruncatedAlgebra, s: u32) -> Result<()> {
    if s > ctx.trunc_degree() {
        return Err(EngineError::TruncationInsufficient {
            needed: s,
            available: ctx.trunc_degree(),
        });
    }
    Ok(())
}

/// Smallest `u < t` whose whole degree layer consists of pivot columns.
fn first_full_pivot_layer(ctx: &TruncatedAlgebra, e: &Echelon, t: u32) -> Option<u32> {
    (0..t).find(|&u| {
        let lo = ctx.count_below(u) as u32;
        let hi = ctx.count_below(u + 1) as u32;
        e.pivots_in(lo, hi) == (hi - lo) as usize
    })
}

fn shift(ctx: &TruncatedAlgebra, p: &Polynomial, var: usize, t: u32) -> SparseVec {
    p.terms()
        .filter(|(m, _)| m.degree() + 1 < t)
        .map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            e[var] += 1;
            (ctx.rank_exps(&e, m.degree() + 1), c.clone())
        })
        .collect()
}

/// Row space of `(gens) + m^t` inside `R / m^t`, computed by closing the
/// span of the generators under multiplication by each variable.
fn span_closure(ctx: &TruncatedAlgebra, gens: &[Polynomial], t: u32) -> Echelon {
    span_closure_into(ctx, Echelon::new(), gens, t)
}

fn span_closure_into(
    ctx: &TruncatedAlgebra,
    mut e: Echelon,
    gens: &[Polynomial],
    t: u32,
) -> Echelon {
    let mut queue: Vec<SparseVec> = gens.iter().map(|g| ctx.vectorize(g, t)).collect();
    while let Some(v) = queue.pop() {
        let reduced = e.reduce(&v);
        if reduced.is_empty() {
            continue;
        }
        let p = ctx.polynomial_of(&reduced);
        e.insert(&reduced);
        for var in 0..ctx.num_vars() {
            let w = shift(ctx, &p, var, t);
            if !w.is_empty() {
                queue.push(w);
            }
        }
    }
    e
}

impl IdealRep {
    /// The ideal generated by `gens`. Zero generators are dropped.
    pub fn from_generators(gens: &[Polynomial], ctx: &Arc<TruncatedAlgebra>) -> Result<IdealRep> {
        let gens: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        if gens.is_empty() {
            return Err(EngineError::EmptyGenerators);
        }
        for g in &gens {
            if g.num_vars() != ctx.num_vars() {
                return Err(EngineError::VariableMismatch {
                    expected: ctx.num_vars(),
                    found: g.num_vars(),
                });
            }
        }
        if ctx.modulus().is_empty() && gens.iter().all(|g| g.is_monomial()) {
            let monos: Vec<Monomial> = gens.iter().map(|g| g.leading().unwrap().0.clone()).collect();
            return Self::monomial(ctx, monos);
        }
        let mut all = gens.clone();
        all.extend(ctx.modulus().iter().cloned());
        let top = ctx.trunc_degree();
        let mut t = (gens.iter().filter_map(|g| g.order()).min().unwrap_or(0) + 2).min(top);
        loop {
            let e = span_closure(ctx, &all, t);
            if let Some(s) = first_full_pivot_layer(ctx, &e, t) {
                return Self::finish_general(ctx, e, s, t, Some(&gens));
            }
            if t >= top {
                return Err(EngineError::NotMPrimary { limit: top });
            }
            t = (2 * t).min(top);
        }
    }

    /// The monomial ideal generated by `gens`; requires an empty modulus.
    pub fn monomial(ctx: &Arc<TruncatedAlgebra>, gens: Vec<Monomial>) -> Result<IdealRep> {
        assert!(ctx.modulus().is_empty(), "monomial ideals need an empty modulus");
        if gens.is_empty() {
            return Err(EngineError::EmptyGenerators);
        }
        let gens = minimize_monomials(gens);
        let s = if gens[0].degree() == 0 {
            0
        } else {
            let mut bound = 1;
            for i in 0..ctx.num_vars() {
                let pure = gens
                    .iter()
                    .filter(|g| g.exponents().iter().enumerate().all(|(j, &e)| j == i || e == 0))
                    .map(|g| g.degree())
                    .min();
                match pure {
                    Some(a) => bound += a - 1,
                    None => {
                        return Err(EngineError::NotMPrimary {
                            limit: ctx.trunc_degree(),
                        })
                    }
                }
            }
            first_full_layer(ctx, &gens, gens[0].degree(), bound)
        };
        Self::monomial_with_s(ctx, gens, s, s)
    }

    fn monomial_with_s(
        ctx: &Arc<TruncatedAlgebra>,
        gens: Vec<Monomial>,
        s: u32,
        checked: u32,
    ) -> Result<IdealRep> {
        check_ceiling(ctx, s)?;
        let mut member = Vec::with_capacity(ctx.count_below(s));
        ctx.for_each_below(s, |_, e| {
            member.push(gens.iter().any(|g| divides_exps(g.exponents(), e)));
        });
        Ok(IdealRep {
            ctx: ctx.clone(),
            cert: PrimacyCertificate {
                s,
                witness_checked_degree: checked,
            },
            generators: gens.iter().cloned().map(Polynomial::monomial).collect(),
            body: Body::Monomial(MonoBody { gens, member }),
        })
    }

    /// Monomial ideal of all monomials satisfying `pred` (which must be
    /// closed under multiplication), given that every monomial of degree `t`
    /// satisfies it.
    fn from_membership(
        ctx: &Arc<TruncatedAlgebra>,
        t: u32,
        pred: impl Fn(&[u32], u32) -> bool,
    ) -> Result<IdealRep> {
        let mut member = Vec::with_capacity(ctx.count_below(t + 1));
        let mut degree_of = Vec::with_capacity(ctx.count_below(t + 1));
        for u in 0..=t {
            ctx.for_each_in_degree(u, |e| {
                member.push(u == t || pred(e, u));
                degree_of.push(u);
            });
        }
        let s = (0..=t)
            .find(|&u| {
                let lo = ctx.count_below(u);
                let hi = ctx.count_below(u + 1);
                member[lo..hi].iter().all(|&b| b)
            })
            .unwrap_or(t);
        check_ceiling(ctx, s)?;
        let mut gens = Vec::new();
        let mut col = 0usize;
        ctx.for_each_below(s + 1, |_, e| {
            if member[col] {
                let u = degree_of[col];
                let minimal = (0..e.len()).all(|i| {
                    if e[i] == 0 {
                        return true;
                    }
                    let mut f = e.to_vec();
                    f[i] -= 1;
                    !member[ctx.rank_exps(&f, u - 1) as usize]
                });
                if minimal {
                    gens.push(Monomial::new(e.to_vec()));
                }
            }
            col += 1;
        });
        member.truncate(ctx.count_below(s));
        Ok(IdealRep {
            ctx: ctx.clone(),
            cert: PrimacyCertificate {
                s,
                witness_checked_degree: t,
            },
            generators: gens.iter().cloned().map(Polynomial::monomial).collect(),
            body: Body::Monomial(MonoBody { gens, member }),
        })
    }

    /// Build from the exact row space `(I + m^t)/m^t` with `m^s ⊆ I`.
    fn finish_general(
        ctx: &Arc<TruncatedAlgebra>,
        e: Echelon,
        s: u32,
        checked: u32,
        candidates: Option<&[Polynomial]>,
    ) -> Result<IdealRep> {
        check_ceiling(ctx, s)?;
        let e = e.project_below(ctx.count_below(s) as u32);
        if ctx.modulus().is_empty() && e.is_coordinate() {
            let cols: Vec<u32> = e.pivots().collect();
            let pivots: std::collections::HashSet<u32> = cols.into_iter().collect();
            return Self::from_membership(ctx, s, |ex, u| {
                pivots.contains(&ctx.rank_exps(ex, u))
            })
            .map(|mut i| {
                i.cert.witness_checked_degree = checked;
                i
            });
        }
        let mut ideal = IdealRep {
            ctx: ctx.clone(),
            cert: PrimacyCertificate {
                s,
                witness_checked_degree: checked,
            },
            generators: Vec::new(),
            body: Body::General(e),
        };
        ideal.generators = ideal.select_minimal(candidates);
        Ok(ideal)
    }

    /// A minimal generating set modulo the context, chosen from
    /// `candidates` (or from the stored basis when none are given).
    fn select_minimal(&self, candidates: Option<&[Polynomial]>) -> Vec<Polynomial> {
        let s = self.cert.s;
        let t = s + 1;
        let (mut c, _) = self.cotangent();
        let own: Vec<Polynomial>;
        let pool: &[Polynomial] = match candidates {
            Some(p) => p,
            None => {
                let mut v: Vec<Polynomial> = self.basis_polynomials();
                self.ctx.for_each_in_degree(s, |e| {
                    v.push(Polynomial::monomial(Monomial::new(e.to_vec())))
                });
                own = v;
                &own
            }
        };
        let mut out = Vec::new();
        for g in pool {
            if c.insert(&self.ctx.vectorize(g, t)).is_some() {
                out.push(g.clone());
            }
        }
        out
    }

    /// Echelon of `(m I + modulus) / m^{s+1}` together with the minimal
    /// number of generators of `I` modulo the context.
    fn cotangent(&self) -> (Echelon, usize) {
        let ctx = &self.ctx;
        let t = self.cert.s + 1;
        let mut seeds: Vec<Polynomial> = ctx.modulus().to_vec();
        for p in self.basis_polynomials() {
            for var in 0..ctx.num_vars() {
                seeds.push(p.mul_monomial(&Monomial::var(ctx.num_vars(), var)).truncate(t));
            }
        }
        if self.cert.s == 0 {
            // I = R: m I = m, which the truncation at degree 1 already kills
            seeds.clear();
        }
        let c = span_closure(ctx, &seeds, t);
        let mu = (ctx.count_below(t) - c.rank()) - self.colength() as usize;
        (c, mu)
    }

    fn basis_polynomials(&self) -> Vec<Polynomial> {
        match &self.body {
            Body::Monomial(mb) => {
                let mut out = Vec::new();
                self.ctx.for_each_below(self.cert.s, |col, e| {
                    if mb.member[col as usize] {
                        out.push(Polynomial::monomial(Monomial::new(e.to_vec())));
                    }
                });
                out
            }
            Body::General(e) => e
                .rows()
                .map(|(p, tail)| {
                    let mut v = vec![(p, Q::one())];
                    v.extend(tail.iter().cloned());
                    self.ctx.polynomial_of(&v)
                })
                .collect(),
        }
    }

    /// The maximal ideal (image of `m` in the context).
    pub fn maximal(ctx: &Arc<TruncatedAlgebra>) -> Result<IdealRep> {
        let n = ctx.num_vars();
        let gens: Vec<Polynomial> = (0..n).map(|i| Polynomial::monomial(Monomial::var(n, i))).collect();
        Self::from_generators(&gens, ctx)
    }

    /// The unit ideal `R`.
    pub fn unit(ctx: &Arc<TruncatedAlgebra>) -> IdealRep {
        IdealRep {
            ctx: ctx.clone(),
            cert: PrimacyCertificate {
                s: 0,
                witness_checked_degree: 0,
            },
            generators: vec![Polynomial::constant(ctx.num_vars(), Q::one())],
            body: if ctx.modulus().is_empty() {
                Body::Monomial(MonoBody {
                    gens: vec![Monomial::one(ctx.num_vars())],
                    member: Vec::new(),
                })
            } else {
                Body::General(Echelon::new())
            },
        }
    }

    pub fn context(&self) -> &Arc<TruncatedAlgebra> {
        &self.ctx
    }

    pub fn primacy(&self) -> PrimacyCertificate {
        self.cert
    }

    /// The primacy index `s`.
    pub fn primacy_index(&self) -> u32 {
        self.cert.s
    }

    /// Minimal generators (modulo the context's modulus).
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn is_monomial(&self) -> bool {
        matches!(self.body, Body::Monomial(_))
    }

    pub fn is_unit(&self) -> bool {
        self.cert.s == 0
    }

    /// Minimal monomial generators, when the ideal is monomial.
    pub fn monomial_generators(&self) -> Option<&[Monomial]> {
        match &self.body {
            Body::Monomial(mb) => Some(&mb.gens),
            Body::General(_) => None,
        }
    }

    fn member_exps(&self, e: &[u32], degree: u32) -> bool {
        match &self.body {
            Body::Monomial(mb) => {
                degree >= self.cert.s || mb.member[self.ctx.rank_exps(e, degree) as usize]
            }
            Body::General(_) => self.contains(&Polynomial::monomial(Monomial::new(e.to_vec()))),
        }
    }

    /// `λ(R/I)`; in a quotient context this is the length of the image.
    pub fn colength(&self) -> u64 {
        let total = self.ctx.count_below(self.cert.s) as u64;
        match &self.body {
            Body::Monomial(mb) => mb.member.iter().filter(|&&b| !b).count() as u64,
            Body::General(e) => total - e.rank() as u64,
        }
    }

    /// Normal form of `f` in `R/I`, as a vector over the standard monomials.
    pub fn normal_form(&self, f: &Polynomial) -> SparseVec {
        let v = self.ctx.vectorize(f, self.cert.s);
        match &self.body {
            Body::Monomial(mb) => v.into_iter().filter(|(c, _)| !mb.member[*c as usize]).collect(),
            Body::General(e) => e.reduce(&v),
        }
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_empty()
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &IdealRep) -> bool {
        other.generators.iter().all(|g| self.contains(g))
            && self.ctx.modulus().iter().all(|g| self.contains(g))
    }

    pub fn equals(&self, other: &IdealRep) -> bool {
        self == other
    }

    fn check_same(&self, other: &IdealRep) -> Result<()> {
        if !same_context(&self.ctx, &other.ctx) {
            return Err(EngineError::ContextMismatch);
        }
        Ok(())
    }

    /// Reduced row-echelon basis of `(I + m^t)/m^t`.
    pub fn row_space(&self, t: u32) -> Echelon {
        let s = self.cert.s;
        let base = match &self.body {
            Body::Monomial(mb) => Echelon::from_unit_pivots(
                mb.member
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(c, _)| c as u32),
            ),
            Body::General(e) => e.clone(),
        };
        if t <= s {
            return base.project_below(self.ctx.count_below(t) as u32);
        }
        let mut out = base;
        out.extend_units(self.ctx.count_below(s) as u32..self.ctx.count_below(t) as u32);
        out
    }

    pub fn sum(&self, other: &IdealRep) -> Result<IdealRep> {
        self.check_same(other)?;
        if let (Body::Monomial(a), Body::Monomial(b)) = (&self.body, &other.body) {
            let mut gens = a.gens.clone();
            gens.extend(b.gens.iter().cloned());
            return Self::monomial(&self.ctx, gens);
        }
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        let t = self.cert.s.min(other.cert.s);
        let mut seeds = gens.clone();
        seeds.extend(self.ctx.modulus().iter().cloned());
        let e = span_closure(&self.ctx, &seeds, t);
        let s = first_full_pivot_layer(&self.ctx, &e, t).unwrap_or(t);
        Self::finish_general(&self.ctx, e, s, t, Some(&gens))
    }

    pub fn product(&self, other: &IdealRep) -> Result<IdealRep> {
        self.check_same(other)?;
        if self.is_unit() {
            return Ok(other.clone());
        }
        if other.is_unit() {
            return Ok(self.clone());
        }
        let bound = self.cert.s + other.cert.s;
        if let (Body::Monomial(a), Body::Monomial(b)) = (&self.body, &other.body) {
            let mut gens = Vec::with_capacity(a.gens.len() * b.gens.len());
            for g in &a.gens {
                for h in &b.gens {
                    gens.push(g.mul(h));
                }
            }
            let gens = minimize_monomials(gens);
            let s = first_full_layer(&self.ctx, &gens, gens[0].degree(), bound);
            return Self::monomial_with_s(&self.ctx, gens, s, bound);
        }
        let mut gens = Vec::new();
        for g in &self.generators {
            for h in &other.generators {
                gens.push(g.mul(h));
            }
        }
        let top = self.ctx.trunc_degree();
        let t = bound.min(top);
        let mut seeds = gens.clone();
        seeds.extend(self.ctx.modulus().iter().cloned());
        let e = span_closure(&self.ctx, &seeds, t);
        let s = match first_full_pivot_layer(&self.ctx, &e, t) {
            Some(s) => s,
            None if t == bound => bound,
            None => {
                return Err(EngineError::TruncationInsufficient {
                    needed: bound,
                    available: top,
                })
            }
        };
        Self::finish_general(&self.ctx, e, s, t, Some(&gens))
    }

    /// `I^n`, with `I^0 = R`.
    pub fn power(&self, n: u32) -> Result<IdealRep> {
        let mut acc = IdealRep::unit(&self.ctx);
        for _ in 0..n {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    /// The colon ideal `(self : other)`.
    pub fn colon(&self, other: &IdealRep) -> Result<IdealRep> {
        self.colon_with_floor(other, self)
    }

    /// `(self : other)`, given an ideal `floor` already known to lie in it.
    /// The floor only shrinks the linear system; the result is the same.
    pub fn colon_with_floor(&self, other: &IdealRep, floor: &IdealRep) -> Result<IdealRep> {
        self.check_same(other)?;
        self.check_same(floor)?;
        if other.is_unit() {
            return Ok(self.clone());
        }
        if self.is_unit() || floor.is_unit() {
            return Ok(IdealRep::unit(&self.ctx));
        }
        if let (Body::Monomial(_), Body::Monomial(b)) = (&self.body, &other.body) {
            let mindeg = b.gens.iter().map(|g| g.degree()).min().unwrap_or(0);
            let t = self.cert.s.saturating_sub(mindeg);
            if t == 0 {
                return Ok(IdealRep::unit(&self.ctx));
            }
            let gens = &b.gens;
            return Self::from_membership(&self.ctx, t, |e, u| {
                gens.iter().all(|g| {
                    let prod: Vec<u32> = e.iter().zip(g.exponents()).map(|(a, b)| a + b).collect();
                    self.member_exps(&prod, u + g.degree())
                })
            });
        }
        self.colon_general(&other.generators, floor)
    }

    /// `(self : f)` for a single element.
    pub fn colon_element(&self, f: &Polynomial) -> Result<IdealRep> {
        if self.is_unit() {
            return Ok(self.clone());
        }
        self.colon_general(std::slice::from_ref(f), self)
    }

    fn colon_general(&self, divisors: &[Polynomial], floor: &IdealRep) -> Result<IdealRep> {
        let ctx = &self.ctx;
        let sa = self.cert.s;
        let sl = floor.cert.s;
        let width = ctx.count_below(sa) as u32;
        let tag_base = width * divisors.len() as u32;
        let floor_space = floor.row_space(sl);
        let mut system = Echelon::new();
        for col in 0..ctx.count_below(sl) as u32 {
            if floor_space.is_pivot(col) {
                continue;
            }
            let m = ctx.unrank(col);
            let mut row: SparseVec = Vec::new();
            for (j, g) in divisors.iter().enumerate() {
                let nf = self.normal_form(&g.mul_monomial(&m));
                row.extend(nf.into_iter().map(|(c, x)| (c + j as u32 * width, x)));
            }
            row.push((tag_base + col, Q::one()));
            system.insert(&row);
        }
        let mut result = floor_space;
        for k in system.rows_from(tag_base) {
            result.insert(&k);
        }
        let s = first_full_pivot_layer(ctx, &result, sl).unwrap_or(sl);
        Self::finish_general(ctx, result, s, sl, None)
    }

    /// Decide `(self : x) = floor`, given `x · floor ⊆ self` would make
    /// `floor ⊆ (self : x)`. Checks that multiplication by `x` is injective
    /// from `R/floor` to `R/self`, tracking rank only.
    pub fn colon_element_equals(&self, x: &Polynomial, floor: &IdealRep) -> Result<bool> {
        self.check_same(floor)?;
        if !floor.generators.iter().all(|g| self.contains(&g.mul(x))) {
            return Ok(false);
        }
        let ctx = &self.ctx;
        let floor_space = floor.row_space(floor.cert.s);
        let mut rc = RankCounter::new();
        for col in 0..ctx.count_below(floor.cert.s) as u32 {
            if floor_space.is_pivot(col) {
                continue;
            }
            let m = ctx.unrank(col);
            let img = self.normal_form(&x.mul_monomial(&m));
            if !rc.push(&img) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Decide the reduction identity `J · A = self` for `J = (j_gens)`.
    ///
    /// By Nakayama this holds exactly when the products `j · a` span
    /// `self / (m · self + modulus)`.
    pub fn is_generated_by_products(&self, j_gens: &[Polynomial], a: &IdealRep) -> Result<bool> {
        self.check_same(a)?;
        let mut products = Vec::with_capacity(j_gens.len() * a.generators.len());
        for j in j_gens {
            for g in &a.generators {
                let p = j.mul(g);
                if !self.contains(&p) {
                    return Ok(false);
                }
                products.push(p);
            }
        }
        let mut rc = RankCounter::new();
        match &self.body {
            Body::Monomial(mb) => {
                let index: HashMap<&Monomial, u32> =
                    mb.gens.iter().enumerate().map(|(i, g)| (g, i as u32)).collect();
                for p in &products {
                    let v: SparseVec = p
                        .terms()
                        .filter_map(|(m, c)| index.get(m).map(|&i| (i, c.clone())))
                        .collect();
                    let mut v = v;
                    v.sort_by_key(|(i, _)| *i);
                    rc.push(&v);
                }
                Ok(rc.rank() == mb.gens.len())
            }
            Body::General(_) => {
                let (c, mu) = self.cotangent();
                let t = self.cert.s + 1;
                for p in &products {
                    rc.push(&c.reduce(&self.ctx.vectorize(p, t)));
                    if rc.rank() == mu {
                        break;
                    }
                }
                Ok(rc.rank() == mu)
            }
        }
    }

    /// `μ(I)`: minimal number of generators modulo the context.
    pub fn minimal_generator_count(&self) -> usize {
        self.generators.len()
    }

    /// The image of this ideal in a quotient of its context.
    pub fn image_in(&self, qctx: &Arc<TruncatedAlgebra>) -> Result<IdealRep> {
        Self::from_generators(&self.generators, qctx)
    }

    /// Same ideal over a context with a different truncation ceiling.
    pub fn with_context(&self, ctx: &Arc<TruncatedAlgebra>) -> Result<IdealRep> {
        if !same_context(&self.ctx, ctx) {
            return Err(EngineError::ContextMismatch);
        }
        check_ceiling(ctx, self.cert.s)?;
        let mut out = self.clone();
        out.ctx = ctx.clone();
        Ok(out)
    }

    /// Generators rendered with the given variable names.
    pub fn render_generators(&self, names: &[String]) -> Vec<String> {
        self.generators.iter().map(|g| g.render(names)).collect()
    }
}

/// Memoized powers `I^0 = R, I^1 = I, I^2, ...` of one ideal, confined to a
/// single analysis.
#[derive(Clone, Debug)]
pub struct PowerTower {
    powers: Vec<IdealRep>,
}

impl PowerTower {
    pub fn new(base: IdealRep) -> Self {
        PowerTower {
            powers: vec![IdealRep::unit(base.context()), base],
        }
    }

    pub fn base(&self) -> &IdealRep {
        &self.powers[1]
    }

    pub fn get(&mut self, n: u32) -> Result<&IdealRep> {
        while self.powers.len() <= n as usize {
            let next = self.powers.last().unwrap().product(&self.powers[1])?;
            self.powers.push(next);
        }
        Ok(&self.powers[n as usize])
    }

    /// `λ(R/I^n)`.
    pub fn colength(&mut self, n: u32) -> Result<u64> {
        Ok(self.get(n)?.colength())
    }

    /// Largest exponent computed so far.
    pub fn computed(&self) -> u32 {
        self.powers.len() as u32 - 1
    }
}

/// `R/(x)` built over `ctx`; ideals of the result are represented by their
/// preimages, which contain `x`.
pub fn quotient_context(ctx: &TruncatedAlgebra, x: &Polynomial) -> Result<TruncatedAlgebra> {
    if x.num_vars() != ctx.num_vars() {
        return Err(EngineError::VariableMismatch {
            expected: ctx.num_vars(),
            found: x.num_vars(),
        });
    }
    if x.is_zero() || x.order() == Some(0) {
        return Err(EngineError::NotAReduction(
            "quotient element must be a nonzero non-unit".to_string(),
        ));
    }
    if ctx.dimension() == 0 {
        return Err(EngineError::UnsupportedDimension(0));
    }
    Ok(ctx.with_modulus(x.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q_int;

    fn ctx(n: usize, t: u32) -> Arc<TruncatedAlgebra> {
        Arc::new(TruncatedAlgebra::new(n, t))
    }

    fn mono(e: &[u32]) -> Polynomial {
        Polynomial::monomial(Monomial::new(e.to_vec()))
    }

    fn mon_ideal(c: &Arc<TruncatedAlgebra>, gens: &[&[u32]]) -> IdealRep {
        IdealRep::from_generators(&gens.iter().map(|e| mono(e)).collect::<Vec<_>>(), c).unwrap()
    }

    fn binomial_pair() -> Vec<Polynomial> {
        vec![
            mono(&[7, 0]),
            Polynomial::from_terms(2, vec![(vec![6, 1], q_int(1)), (vec![0, 7], q_int(1))]),
        ]
    }

    #[test]
    fn maximal_ideal() {
        let c = ctx(2, 4);
        let m = IdealRep::maximal(&c).unwrap();
        assert_eq!(m.primacy_index(), 1);
        assert_eq!(m.colength(), 1);
    }

    #[test]
    fn primacy_indices() {
        let c = ctx(2, 40);
        let i = mon_ideal(&c, &[&[4, 0], &[3, 1], &[1, 3], &[0, 4]]);
        assert_eq!(i.primacy_index(), 5);
        assert_eq!(i.colength(), 11);
        let err = IdealRep::from_generators(&[mono(&[2, 0])], &c).unwrap_err();
        assert!(matches!(err, EngineError::NotMPrimary { .. }));
    }

    #[test]
    fn general_path_agrees_with_monomial_path() {
        let c = ctx(2, 40);
        // scaled and mixed generators of a monomial ideal
        let gens = vec![
            Polynomial::from_terms(2, vec![(vec![4, 0], q_int(3)), (vec![3, 1], q_int(1))]),
            mono(&[3, 1]),
            mono(&[1, 3]),
            mono(&[0, 4]),
        ];
        let g = IdealRep::from_generators(&gens, &c).unwrap();
        let m = mon_ideal(&c, &[&[4, 0], &[3, 1], &[1, 3], &[0, 4]]);
        assert!(g.is_monomial());
        assert_eq!(g, m);
    }

    #[test]
    fn products_and_colons() {
        let c = ctx(2, 60);
        let i = mon_ideal(&c, &[&[4, 0], &[3, 1], &[1, 3], &[0, 4]]);
        let j = mon_ideal(&c, &[&[4, 0], &[0, 4]]);
        let ji = j.product(&i).unwrap();
        assert!(ji.contains(&mono(&[7, 1])));
        assert!(!ji.contains(&mono(&[6, 2])));
        let i2 = i.power(2).unwrap();
        let col = i2.colon(&i).unwrap();
        assert!(col.contains(&mono(&[2, 2])));
        assert!(col.contains_ideal(&i));
        assert_eq!(i.product(&IdealRep::unit(&c)).unwrap(), i);
        assert_eq!(i.colon(&IdealRep::unit(&c)).unwrap(), i);
    }

    #[test]
    fn general_colon_matches_monomial_colon() {
        let c = ctx(2, 60);
        let i = mon_ideal(&c, &[&[4, 0], &[3, 1], &[1, 3], &[0, 4]]);
        let i2 = i.power(2).unwrap();
        let fast = i2.colon(&i).unwrap();
        let slow = i2.colon_general(i.generators(), &i2).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn reduction_identity() {
        let c = ctx(2, 80);
        let i = mon_ideal(&c, &[&[7, 0], &[6, 1], &[2, 5], &[0, 7]]);
        let j = binomial_pair();
        let mut r = None;
        for n in 0..6 {
            let a = i.power(n).unwrap();
            let b = i.power(n + 1).unwrap();
            if b.is_generated_by_products(&j, &a).unwrap() {
                r = Some(n);
                break;
            }
        }
        assert_eq!(r, Some(3));
        let jideal = IdealRep::from_generators(&j, &c).unwrap();
        assert_eq!(jideal.colength(), 49);
    }

    #[test]
    fn quotient_context_dimension_and_colength() {
        let base = TruncatedAlgebra::new(3, 20);
        let q1 = quotient_context(&base, &mono(&[1, 0, 0])).unwrap();
        let q2 = Arc::new(quotient_context(&q1, &mono(&[0, 1, 0])).unwrap());
        assert_eq!(q2.dimension(), 1);
        let c2 = Arc::new(TruncatedAlgebra::new(2, 10));
        let q = Arc::new(quotient_context(&c2, &mono(&[1, 0])).unwrap());
        assert_eq!(IdealRep::maximal(&q).unwrap().colength(), 1);
    }
}
