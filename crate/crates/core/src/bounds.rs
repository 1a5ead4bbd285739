//! Upper bounds on the stability index and on `reg G(I)`, each evaluated
//! from computed invariants with its hypotheses decided from data.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};
use crate::poly::{q_int, Q};
use crate::rational::format_q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "THM_3_3")]
    Thm3_3,
    #[serde(rename = "COR_3_4")]
    Cor3_4,
    #[serde(rename = "LEMMA_3_5")]
    Lemma3_5,
    #[serde(rename = "PROP_3_7")]
    Prop3_7,
    #[serde(rename = "LEMMA_3_8")]
    Lemma3_8,
    #[serde(rename = "PROP_3_9")]
    Prop3_9,
    #[serde(rename = "COR_3_10")]
    Cor3_10,
    #[serde(rename = "COR_3_11")]
    Cor3_11,
    #[serde(rename = "PROP_3_12")]
    Prop3_12,
    #[serde(rename = "PROP_3_13")]
    Prop3_13,
    #[serde(rename = "COR_3_14")]
    Cor3_14,
    #[serde(rename = "PROP_3_16")]
    Prop3_16,
    #[serde(rename = "THM_4_4")]
    Thm4_4,
    #[serde(rename = "THM_5_1")]
    Thm5_1,
    #[serde(rename = "COR_5_3")]
    Cor5_3,
    #[serde(rename = "PROP_5_5")]
    Prop5_5,
    #[serde(rename = "PROP_5_6")]
    Prop5_6,
    #[serde(rename = "COR_5_7")]
    Cor5_7,
}

impl TheoremId {
    pub const ALL: [TheoremId; 18] = [
        TheoremId::Thm3_3,
        TheoremId::Cor3_4,
        TheoremId::Lemma3_5,
        TheoremId::Prop3_7,
        TheoremId::Lemma3_8,
        TheoremId::Prop3_9,
        TheoremId::Cor3_10,
        TheoremId::Cor3_11,
        TheoremId::Prop3_12,
        TheoremId::Prop3_13,
        TheoremId::Cor3_14,
        TheoremId::Prop3_16,
        TheoremId::Thm4_4,
        TheoremId::Thm5_1,
        TheoremId::Cor5_3,
        TheoremId::Prop5_5,
        TheoremId::Prop5_6,
        TheoremId::Cor5_7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::Thm3_3 => "THM_3_3",
            TheoremId::Cor3_4 => "COR_3_4",
            TheoremId::Lemma3_5 => "LEMMA_3_5",
            TheoremId::Prop3_7 => "PROP_3_7",
            TheoremId::Lemma3_8 => "LEMMA_3_8",
            TheoremId::Prop3_9 => "PROP_3_9",
            TheoremId::Cor3_10 => "COR_3_10",
            TheoremId::Cor3_11 => "COR_3_11",
            TheoremId::Prop3_12 => "PROP_3_12",
            TheoremId::Prop3_13 => "PROP_3_13",
            TheoremId::Cor3_14 => "COR_3_14",
            TheoremId::Prop3_16 => "PROP_3_16",
            TheoremId::Thm4_4 => "THM_4_4",
            TheoremId::Thm5_1 => "THM_5_1",
            TheoremId::Cor5_3 => "COR_5_3",
            TheoremId::Prop5_5 => "PROP_5_5",
            TheoremId::Prop5_6 => "PROP_5_6",
            TheoremId::Cor5_7 => "COR_5_7",
        }
    }

    pub fn from_name(s: &str) -> Option<TheoremId> {
        TheoremId::ALL.into_iter().find(|t| t.name() == s)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How `observed` is compared with `bound_value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `observed <= bound_value`
    AtMost,
    /// `observed == bound_value`
    Equal,
    /// `bound_value` is a computed quantity, not a claim.
    Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub theorem: TheoremId,
    pub applicable: bool,
    pub reason: String,
    pub relation: Relation,
    #[serde(with = "crate::rational::q_opt")]
    pub bound_value: Option<Q>,
    #[serde(with = "crate::rational::q_opt")]
    pub observed: Option<Q>,
    pub holds: Option<bool>,
    pub hypothesis_notes: Vec<String>,
}

impl BoundVerdict {
    fn new(theorem: TheoremId, relation: Relation) -> Self {
        BoundVerdict {
            theorem,
            applicable: false,
            reason: String::new(),
            relation,
            bound_value: None,
            observed: None,
            holds: None,
            hypothesis_notes: Vec::new(),
        }
    }

    fn skip(mut self, reason: impl Into<String>) -> Self {
        self.reason = reason.into();
        self
    }

    fn value(mut self, v: Q) -> Self {
        self.bound_value = Some(v);
        self
    }

    fn note(mut self, n: impl Into<String>) -> Self {
        self.hypothesis_notes.push(n.into());
        self
    }

    /// Mark applicable and decide `holds` from `observed`.
    fn judge(mut self, reason: impl Into<String>, observed: Q) -> Self {
        let bound = self.bound_value.clone().expect("bound evaluated before judging");
        self.applicable = true;
        self.reason = reason.into();
        self.holds = match self.relation {
            Relation::AtMost => Some(observed <= bound),
            Relation::Equal => Some(observed == bound),
            Relation::Value => None,
        };
        self.observed = Some(observed);
        self
    }

    /// True unless the verdict is applicable and fails.
    pub fn is_satisfied(&self) -> bool {
        self.holds != Some(false)
    }
}

impl fmt::Display for BoundVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &Option<Q>| v.as_ref().map(format_q).unwrap_or_else(|| "-".to_string());
        let status = match self.holds {
            Some(true) => "holds",
            Some(false) => "VIOLATED",
            None if self.applicable => "value",
            None => "n/a",
        };
        write!(
            f,
            "{:<9} {:<8} bound={:<6} observed={:<6} {}",
            self.theorem.name(),
            status,
            show(&self.bound_value),
            show(&self.observed),
            self.reason
        )
    }
}

/// Status of "the Ratliff-Rush filtration behaves well mod a superficial
/// sequence" for the ideal under analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum BehavesWell {
    /// `d <= 2`: the superficial sequence is empty.
    Vacuous,
    /// Checked for powers `1..=window`.
    Verified { window: u32 },
    /// Fails at the given power.
    Failed { power: u32 },
    Unchecked,
}

impl BehavesWell {
    pub fn holds(self) -> bool {
        matches!(self, BehavesWell::Vacuous | BehavesWell::Verified { .. })
    }

    fn notes(self) -> Vec<String> {
        match self {
            BehavesWell::Verified { window } => {
                vec![format!("behaves-well verified on finite window n <= {window}")]
            }
            _ => Vec::new(),
        }
    }
}

/// Computed invariants consumed by the stability-index bounds.
#[derive(Clone, Debug)]
pub struct RhoBoundInputs<'a> {
    pub d: usize,
    /// `e_0..e_{d+1}`.
    pub e: &'a [Q],
    /// `ẽ_0..ẽ_{d+1}`.
    pub tilde_e: &'a [Q],
    pub r_j: u32,
    pub rho: u32,
    /// `λ(Ĩ^k/I^k)` for `k >= 1`.
    pub gaps: &'a BTreeMap<u32, u64>,
    /// `λ(R/I)`.
    pub lam: u64,
    /// `λ(Ĩ/I)`.
    pub lam_tilde: u64,
    /// Whether `Ĩ^{r_J} = I^{r_J}`.
    pub closure_at_rj_equal: bool,
    pub behaves_well: BehavesWell,
}

fn qu(n: u64) -> Q {
    Q::from_integer(n.into())
}

fn sign(k: usize) -> Q {
    if k.is_multiple_of(2) {
        Q::one()
    } else {
        -Q::one()
    }
}

/// `(-1)^{d+1}(e_{d+1} - ẽ_{d+1})`.
pub fn telescoped_gap(e: &[Q], tilde_e: &[Q], d: usize) -> Q {
    sign(d + 1) * (&e[d + 1] - &tilde_e[d + 1])
}

/// Whether `(-1)^{d+1}(e_{d+1} - ẽ_{d+1}) = Σ_k λ(Ĩ^k/I^k)`.
pub fn telescoping_holds(e: &[Q], tilde_e: &[Q], d: usize, gaps: &BTreeMap<u32, u64>) -> bool {
    telescoped_gap(e, tilde_e, d) == qu(gaps.values().sum())
}

/// `e_d - e_{d-1} + ... ± e_0 - λ(R/I) + λ(Ĩ/I)`.
fn alternating_part(e: &[Q], d: usize, lam: u64, lam_tilde: u64) -> Q {
    let mut acc = Q::zero();
    for (i, c) in e.iter().enumerate().take(d + 1) {
        acc += sign(d - i) * c;
    }
    acc - qu(lam) + qu(lam_tilde)
}

/// `(e_2 - 1) e_2`.
fn e2_ceiling(e: &[Q]) -> Q {
    (&e[2] - Q::one()) * &e[2]
}

/// `e_1 - e_0 + λ(R/I) + 1`, the upper bound on `r_J` in dimension two.
pub fn rossi_bound(e: &[Q], lam: u64) -> Q {
    &e[1] - &e[0] + qu(lam) + Q::one()
}

/// Closed form `r_J - 1 + (e_2 - e_1(J) - 1)(e_2 - e_1(J)) - e_3`.
pub fn bound_buchsbaum(r_j: i64, e2: &Q, e1j: &Q, e3: &Q) -> Q {
    let u = e2 - e1j;
    q_int(r_j - 1) + (&u - Q::one()) * u - e3
}

/// The even-dimensional closure bound
/// `r_J - 1 - e_{d+1} + ((r_J - 1)/d)(alternating part)`.
fn even_closure_bound(inp: &RhoBoundInputs) -> Q {
    let d = inp.d;
    let r = q_int(inp.r_j as i64);
    &r - Q::one() - &inp.e[d + 1]
        + (&r - Q::one()) / q_int(d as i64) * alternating_part(inp.e, d, inp.lam, inp.lam_tilde)
}

/// `ρ` as a minimum over `n >= 0`: a filtration closed in every positive
/// degree gives 0, otherwise the reported index.
pub fn natural_rho(rho: u32) -> u32 {
    if rho <= 1 {
        0
    } else {
        rho
    }
}

/// Bounds on `ρ(I)` and on `ẽ_{d+1}` that depend on Hilbert data, gaps and
/// `r_J`.
pub fn evaluate_rho_bounds(inp: &RhoBoundInputs) -> Vec<BoundVerdict> {
    let d = inp.d;
    let rho = q_int(natural_rho(inp.rho) as i64);
    let r = q_int(inp.r_j as i64);
    let open = inp.r_j < natural_rho(inp.rho);
    let bw = inp.behaves_well;
    let mut out = Vec::new();

    let thm33 = BoundVerdict::new(TheoremId::Thm3_3, Relation::AtMost)
        .value(&r - Q::one() + telescoped_gap(inp.e, inp.tilde_e, d));
    let thm33 = if !telescoping_holds(inp.e, inp.tilde_e, d, inp.gaps) {
        thm33.note("telescoping identity with the gap lengths FAILED")
    } else {
        thm33
    };
    out.push(if inp.closure_at_rj_equal {
        thm33.skip("closure of I^r_J equals I^r_J")
    } else {
        thm33.judge("closure of I^r_J differs from I^r_J", rho.clone())
    });

    let cor34 = BoundVerdict::new(TheoremId::Cor3_4, Relation::AtMost);
    out.push(if d < 3 || d.is_multiple_of(2) {
        cor34.skip("dimension is not odd and at least 3")
    } else if !bw.holds() {
        cor34.skip("behaves-well not established")
    } else if inp.closure_at_rj_equal {
        cor34.skip("closure of I^r_J equals I^r_J")
    } else {
        let mut v = cor34.value(&r - Q::one() + &inp.e[d + 1]);
        v.hypothesis_notes.extend(bw.notes());
        v.judge("odd dimension, behaves well, closure of I^r_J differs", rho.clone())
    });

    let lemma35 = BoundVerdict::new(TheoremId::Lemma3_5, Relation::AtMost);
    out.push(if d % 2 == 1 {
        lemma35.skip("dimension is odd")
    } else if !bw.holds() {
        lemma35.skip("behaves-well not established")
    } else {
        let factor = (&r - Q::one()) / q_int(d as i64);
        let mut v = lemma35.value(factor * alternating_part(inp.e, d, inp.lam, inp.lam_tilde));
        v.hypothesis_notes.extend(bw.notes());
        v.judge("even dimension; observed is tilde e_{d+1}", inp.tilde_e[d + 1].clone())
    });

    let prop37 = BoundVerdict::new(TheoremId::Prop3_7, Relation::AtMost);
    out.push(if d % 2 == 1 {
        prop37.skip("dimension is odd")
    } else if !bw.holds() {
        prop37.skip("behaves-well not established")
    } else if !open {
        prop37.skip("r_J >= rho")
    } else {
        let mut v = prop37.value(even_closure_bound(inp));
        v.hypothesis_notes.extend(bw.notes());
        v.judge("even dimension and r_J < rho", rho.clone())
    });

    if d != 2 {
        for id in [TheoremId::Lemma3_8, TheoremId::Prop3_9, TheoremId::Cor3_10, TheoremId::Cor3_11] {
            out.push(BoundVerdict::new(id, Relation::AtMost).skip("only for dimension two"));
        }
        return out;
    }
    let ceiling = e2_ceiling(inp.e);

    out.push(
        BoundVerdict::new(TheoremId::Lemma3_8, Relation::AtMost)
            .value(ceiling.clone())
            .judge("dimension two; observed is tilde e_3", inp.tilde_e[3].clone()),
    );

    let prop39 = BoundVerdict::new(TheoremId::Prop3_9, Relation::AtMost);
    out.push(if open {
        prop39
            .value(&r - Q::one() + &ceiling - &inp.e[3])
            .judge("r_J < rho", rho.clone())
    } else {
        prop39.skip("r_J >= rho")
    });

    let cor310 = BoundVerdict::new(TheoremId::Cor3_10, Relation::AtMost);
    out.push(if inp.e[3] == ceiling {
        cor310.value(r.clone()).judge("e_3 = (e_2 - 1) e_2", rho.clone())
    } else {
        cor310.skip("e_3 != (e_2 - 1) e_2")
    });

    let cor311 = BoundVerdict::new(TheoremId::Cor3_11, Relation::AtMost);
    out.push(if open {
        cor311
            .value(&inp.e[1] - &inp.e[0] + qu(inp.lam) + &ceiling - &inp.e[3])
            .judge("r_J < rho", rho)
    } else {
        cor311.skip("r_J >= rho")
    });
    out
}

/// Propositions whose hypotheses are conditions on `e_2, e_3`, on the
/// stability index of powers `I^t`, or on which powers are closed.
///
/// `rho_powers` maps `t > 1` to `ρ(I^t)`; `closure_flags` maps `k` to
/// whether `Ĩ^k = I^k`.
pub fn evaluate_conditional_props(
    d: usize,
    e: &[Q],
    r_j: u32,
    rho: u32,
    rho_powers: &BTreeMap<u32, u32>,
    closure_flags: &BTreeMap<u32, bool>,
) -> Vec<BoundVerdict> {
    let ids = [TheoremId::Prop3_12, TheoremId::Prop3_13, TheoremId::Cor3_14, TheoremId::Prop3_16];
    if d != 2 {
        return ids
            .into_iter()
            .map(|id| BoundVerdict::new(id, Relation::AtMost).skip("only for dimension two"))
            .collect();
    }
    let rho_q = q_int(rho as i64);
    let r = r_j as i64;
    let rj_open = closure_flags.get(&r_j) == Some(&false);
    let mut out = Vec::new();

    let p312 = BoundVerdict::new(TheoremId::Prop3_12, Relation::AtMost);
    let e2_small = e[2].is_zero() || e[2].is_one();
    out.push(if e2_small && e[3] == q_int(-1) {
        p312.value(q_int(r + 1)).judge("e_2 in {0, 1} and e_3 = -1", rho_q.clone())
    } else {
        p312.skip("requires e_2 in {0, 1} and e_3 = -1")
    });

    let depth_note = |t: u32| format!("depth G(I^{t}) > 0 decided as rho(I^{t}) = 1");
    let good_t: Vec<u32> = rho_powers
        .iter()
        .filter(|(t, rt)| **t > 1 && **rt == 1)
        .map(|(t, _)| *t)
        .collect();
    if !rj_open {
        out.push(
            BoundVerdict::new(TheoremId::Prop3_13, Relation::AtMost)
                .skip("closure of I^r_J equals I^r_J or was not computed"),
        );
    } else if good_t.is_empty() {
        out.push(
            BoundVerdict::new(TheoremId::Prop3_13, Relation::AtMost)
                .skip("no tested t > 1 with rho(I^t) = 1"),
        );
    } else {
        for &t in &good_t {
            let k = rho % t;
            let bound = if k == 0 { r - 1 + t as i64 } else { r + k as i64 };
            out.push(
                BoundVerdict::new(TheoremId::Prop3_13, Relation::AtMost)
                    .value(q_int(bound))
                    .note(depth_note(t))
                    .judge(format!("t = {t}, rho = {k} mod t"), rho_q.clone()),
            );
        }
    }

    let c314 = BoundVerdict::new(TheoremId::Cor3_14, Relation::Equal);
    out.push(if rho_powers.get(&2) != Some(&1) {
        c314.skip("rho(I^2) != 1 or not computed")
    } else if r_j.is_multiple_of(2) {
        c314.skip("r_J is even")
    } else if !rj_open {
        c314.skip("closure of I^r_J equals I^r_J or was not computed")
    } else {
        c314.value(q_int(r + 1))
            .note(depth_note(2))
            .judge("rho(I^2) = 1, r_J odd, closure of I^r_J differs", rho_q.clone())
    });

    let p316 = BoundVerdict::new(TheoremId::Prop3_16, Relation::AtMost);
    out.push(if rho == 2 {
        p316.value(q_int(r)).judge("(i) rho = 2", rho_q)
    } else if rho == 3 && closure_flags.get(&1) == Some(&true) {
        p316.value(q_int(r)).judge("(ii) rho = 3 and I is closed", rho_q)
    } else {
        p316.skip("requires rho = 2, or rho = 3 with I closed")
    });
    out
}

/// `reg G(I)` by the max formula: `max{r_J, ρ}` for `d = 2` and
/// `max{r_J, ρ(I), ρ(I/(x_1))}` for `d = 3`.
pub fn regularity(d: usize, r_j: u32, rho: u32, quotient_rhos: &[u32]) -> Result<u32> {
    match d {
        2 => Ok(r_j.max(natural_rho(rho))),
        3 => match quotient_rhos.first() {
            Some(&q) => Ok(r_j.max(natural_rho(rho)).max(natural_rho(q))),
            None => Err(EngineError::SearchExhausted {
                what: "stability index of the quotient".to_string(),
                cap: 0,
            }),
        },
        _ => Err(EngineError::UnsupportedDimension(d)),
    }
}

/// Inputs for the regularity verdicts.
#[derive(Clone, Debug)]
pub struct RegularityInputs<'a> {
    pub d: usize,
    pub e: &'a [Q],
    pub r_j: u32,
    pub rho: u32,
    pub lam: u64,
    pub lam_tilde: u64,
    pub quotient_rhos: &'a [u32],
    pub closure_at_rj_equal: bool,
    pub behaves_well: BehavesWell,
}

/// `reg G(I)` together with its verdicts.
pub fn regularity_assoc_graded(inp: &RegularityInputs) -> Result<(u32, Vec<BoundVerdict>)> {
    let reg = regularity(inp.d, inp.r_j, inp.rho, inp.quotient_rhos)?;
    let reg_q = q_int(reg as i64);
    let r = q_int(inp.r_j as i64);
    let open = inp.r_j < natural_rho(inp.rho);
    let mut out = Vec::new();

    let mut thm51 = BoundVerdict::new(TheoremId::Thm5_1, Relation::Value).value(reg_q.clone());
    if inp.d == 3 {
        thm51 = thm51
            .note(format!("rho(I/(x1)) = {}", inp.quotient_rhos[0]))
            .note("Cohen-Macaulay quotient by a superficial element assumed");
    }
    out.push(thm51.judge("max formula", reg_q.clone()));

    let cor53 = BoundVerdict::new(TheoremId::Cor5_3, Relation::Equal);
    out.push(if !inp.closure_at_rj_equal {
        cor53.skip("closure of I^r_J differs from I^r_J")
    } else if !inp.behaves_well.holds() {
        cor53.skip("behaves-well not established")
    } else {
        let mut v = cor53.value(r.clone());
        v.hypothesis_notes.extend(inp.behaves_well.notes());
        v.judge("closure of I^r_J equals I^r_J and behaves well", reg_q.clone())
    });

    if inp.d != 2 {
        for id in [TheoremId::Prop5_5, TheoremId::Prop5_6, TheoremId::Cor5_7] {
            out.push(BoundVerdict::new(id, Relation::AtMost).skip("only for dimension two"));
        }
        return Ok((reg, out));
    }
    let e = inp.e;
    let ceiling = e2_ceiling(e);
    let base = &e[1] - &e[0] + qu(inp.lam);

    let p55 = BoundVerdict::new(TheoremId::Prop5_5, Relation::AtMost);
    out.push(if open {
        let alt = alternating_part(e, 2, inp.lam, inp.lam_tilde);
        let v = &r - Q::one() - &e[3] + (&r - Q::one()) / q_int(2) * alt;
        p55.value(v).judge("r_J < rho", reg_q.clone())
    } else {
        p55.value(rossi_bound(e, inp.lam)).judge("rho <= r_J", reg_q.clone())
    });

    let p56 = BoundVerdict::new(TheoremId::Prop5_6, Relation::AtMost);
    out.push(if open {
        p56.value(&r - Q::one() + &ceiling - &e[3]).judge("r_J < rho", reg_q.clone())
    } else {
        p56.skip("r_J >= rho")
    });

    let c57 = BoundVerdict::new(TheoremId::Cor5_7, Relation::AtMost);
    out.push(if !open {
        c57.skip("r_J >= rho")
    } else if e[2].is_zero() || e[2].is_one() {
        c57.value(&base - &e[3]).judge("r_J < rho, e_2 in {0, 1}", reg_q)
    } else if e[2] == q_int(2) {
        c57.value(&base - &e[3] + q_int(2)).judge("r_J < rho, e_2 = 2", reg_q)
    } else {
        c57.skip("requires e_2 in {0, 1, 2}")
    });
    Ok((reg, out))
}

/// Standalone verdict for the Buchsbaum-ring bound with user-supplied
/// `e_1(J)`.
pub fn buchsbaum_verdict(r_j: i64, e2: &Q, e1j: &Q, e3: &Q) -> BoundVerdict {
    let mut v = BoundVerdict::new(TheoremId::Thm4_4, Relation::Value)
        .value(bound_buchsbaum(r_j, e2, e1j, e3))
        .note("e_1(J) supplied by the user; S2-fication not computed");
    v.applicable = true;
    v.reason = "closed form evaluated".to_string();
    v
}
