//! The analysis pipeline over a parsed session and its report.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    evaluate_conditional_props, evaluate_rho_bounds, regularity_assoc_graded, telescoping_holds, BehavesWell,
    BoundVerdict, RegularityInputs, RhoBoundInputs,
};
use crate::error::{EngineError, Result};
use crate::filtration::{Filtration, FiltrationOptions};
use crate::hilbert::{HilbertData, HilbertOptions};
use crate::ideal::{quotient_context, IdealRep, PowerTower};
use crate::poly::{Polynomial, TruncatedAlgebra, Q};
use crate::rational::format_q;
use crate::reduction::{find_superficial, generate_minimal_reduction, is_superficial, reduction_number};
use crate::session::Session;

pub const SCHEMA: &str = "ratliff-report/1";
pub const DEFAULT_SEED: u64 = 42;

/// Resolved analysis settings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Settings {
    pub seed: u64,
    pub nmax: u32,
    pub quotient_steps: u32,
    pub window: Option<u32>,
    pub reduction_cap: u32,
    pub reduction_window: u32,
    pub powers: Vec<u32>,
    pub filtration: FiltrationOptions,
    pub hilbert: HilbertOptions,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            seed: DEFAULT_SEED,
            nmax: 64,
            quotient_steps: 1,
            window: None,
            reduction_cap: 15,
            reduction_window: 2,
            powers: vec![2, 3],
            filtration: FiltrationOptions::default(),
            hilbert: HilbertOptions::default(),
        }
    }
}

impl Settings {
    pub fn from_session(session: &Session) -> Settings {
        let d = &session.directives;
        let mut s = Settings::default();
        if let Some(v) = d.seed {
            s.seed = v;
        }
        if let Some(v) = d.nmax {
            s.nmax = v;
        }
        if let Some(v) = d.quotient_steps {
            s.quotient_steps = v;
        }
        s.window = d.window;
        if let Some(v) = d.reduction_cap {
            s.reduction_cap = v;
        }
        if let Some(v) = &d.powers {
            s.powers = v.clone();
        }
        if let Some(v) = d.chain_window {
            s.filtration.chain_window = v;
        }
        if let Some(v) = d.chain_cap {
            s.filtration.chain_cap = v;
        }
        if let Some(v) = d.search_cap {
            s.filtration.search_cap = v;
        }
        if let Some(v) = d.hilbert_cap {
            s.hilbert.cap = v as usize;
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageError {
    pub stage: String,
    pub kind: String,
    pub message: String,
}

impl StageError {
    fn new(stage: &str, e: &EngineError) -> Self {
        let kind = format!("{e:?}");
        let kind = kind.split([' ', '(', '{']).next().unwrap_or("").to_string();
        StageError {
            stage: stage.to_string(),
            kind,
            message: e.to_string(),
        }
    }

    pub fn is_input_error(&self) -> bool {
        matches!(
            self.kind.as_str(),
            "EmptyGenerators" | "VariableMismatch" | "NotMPrimary" | "NotAReduction" | "ContextMismatch"
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionRecord {
    /// `"supplied"` or `"generated"`.
    pub source: String,
    pub name: Option<String>,
    pub generators: Vec<String>,
    pub r_j: u32,
    pub verified_window: u32,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub truncation_degree: Option<u32>,
    pub primacy_index: Option<u32>,
    pub hilbert_values: Vec<u64>,
    pub tilde_hilbert_values: Vec<u64>,
    pub postulation: Option<usize>,
    pub chain_lengths: BTreeMap<u32, u32>,
    pub first_closed: Option<u32>,
    pub closure_flags: BTreeMap<u32, bool>,
    pub superficial: Option<String>,
    pub rho_x: Option<u32>,
    /// `r_J` for generated reductions, one per tested seed.
    pub generic_r_j: Vec<u32>,
    /// Largest of `generic_r_j`: a lower estimate of the maximum over all
    /// minimal reductions.
    pub max_tested_r_j: Option<u32>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealRecord {
    pub name: String,
    pub generators: Vec<String>,
    pub dimension: usize,
    pub colength: Option<u64>,
    pub h_coeffs: Vec<i64>,
    #[serde(with = "crate::rational::q_vec")]
    pub e: Vec<Q>,
    #[serde(with = "crate::rational::q_vec")]
    pub tilde_e: Vec<Q>,
    pub closure_generators: Vec<String>,
    pub gaps: BTreeMap<u32, u64>,
    pub rho: Option<u32>,
    pub reductions: Vec<ReductionRecord>,
    pub tilde_r: Option<u32>,
    pub regularity: Option<u32>,
    pub rho_powers: BTreeMap<u32, u32>,
    pub quotient_rho: Vec<u32>,
    pub behaves_well: Option<BehavesWell>,
    pub verdicts: Vec<BoundVerdict>,
    pub diagnostics: Diagnostics,
    pub errors: Vec<StageError>,
}

impl IdealRecord {
    pub fn e_at(&self, i: usize) -> Option<&Q> {
        self.e.get(i)
    }

    pub fn verdict(&self, id: crate::bounds::TheoremId) -> Option<&BoundVerdict> {
        self.verdicts.iter().find(|v| v.theorem == id)
    }

    pub fn r_j(&self) -> Option<u32> {
        self.reductions.first().map(|r| r.r_j)
    }

    fn has_consistency_error(&self) -> bool {
        self.errors.iter().any(|e| !e.is_input_error())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub variables: Vec<String>,
    pub settings: Settings,
    pub ideals: Vec<IdealRecord>,
}

impl Report {
    /// 0 success, 1 bound violation, 2 input error, 3 internal consistency
    /// failure or an uncertified computation.
    pub fn exit_code(&self) -> i32 {
        if self.ideals.iter().any(|r| r.has_consistency_error()) {
            3
        } else if self.ideals.iter().any(|r| r.verdicts.iter().any(|v| !v.is_satisfied())) {
            1
        } else if self.ideals.iter().any(|r| !r.errors.is_empty()) {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        for r in &self.ideals {
            let list = |v: &[Q]| v.iter().map(format_q).collect::<Vec<_>>().join(", ");
            let opt = |v: Option<u32>| v.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
            writeln!(out, "## {}\n", r.name).unwrap();
            writeln!(out, "| quantity | value |\n|---|---|").unwrap();
            writeln!(out, "| generators | {} |", r.generators.join(", ")).unwrap();
            writeln!(out, "| λ(R/I) | {} |", r.colength.map(|x| x.to_string()).unwrap_or("-".into())).unwrap();
            let h: Vec<String> = r.h_coeffs.iter().map(|c| c.to_string()).collect();
            writeln!(out, "| h | {} |", h.join(", ")).unwrap();
            writeln!(out, "| e | {} |", list(&r.e)).unwrap();
            writeln!(out, "| ẽ | {} |", list(&r.tilde_e)).unwrap();
            writeln!(out, "| Ĩ | {} |", r.closure_generators.join(", ")).unwrap();
            writeln!(out, "| r_J | {} |", opt(r.r_j())).unwrap();
            writeln!(out, "| ρ | {} |", opt(r.rho)).unwrap();
            writeln!(out, "| ẽr_J | {} |", opt(r.tilde_r)).unwrap();
            writeln!(out, "| reg G(I) | {} |\n", opt(r.regularity)).unwrap();
            if !r.verdicts.is_empty() {
                writeln!(out, "| theorem | applicable | bound | observed | holds |\n|---|---|---|---|---|").unwrap();
                for v in &r.verdicts {
                    let show = |q: &Option<Q>| q.as_ref().map(format_q).unwrap_or("-".into());
                    let holds = v.holds.map(|h| h.to_string()).unwrap_or("-".into());
                    writeln!(
                        out,
                        "| {} | {} | {} | {} | {} |",
                        v.theorem,
                        v.applicable,
                        show(&v.bound_value),
                        show(&v.observed),
                        holds
                    )
                    .unwrap();
                }
                out.push('\n');
            }
            for e in &r.errors {
                writeln!(out, "- error in {}: {}", e.stage, e.message).unwrap();
            }
        }
        out
    }
}

/// Ceiling on the primacy index: `λ(R/I) <= e(I) <= g^n` for generators
/// of degree at most `g` in `n` variables, and `m^{λ(R/I)} ⊆ I`.
fn probe_ceiling(gens: &[Polynomial], n: usize) -> u32 {
    let g = gens.iter().filter_map(|p| p.max_degree()).max().unwrap_or(1).max(1) as u64;
    let bound = g.saturating_pow(n as u32).min(1 << 20);
    bound as u32 + 1
}

/// `N = s (n_max + 1) + g_max + s`.
pub fn planned_truncation(s: u32, nmax: u32, g_max: u32) -> u32 {
    s.saturating_mul(nmax + 1).saturating_add(g_max).saturating_add(s)
}

/// Build `I` over a context sized by the planner.
pub fn plan_ideal(gens: &[Polynomial], n: usize, nmax: u32) -> Result<IdealRep> {
    let probe = Arc::new(TruncatedAlgebra::new(n, probe_ceiling(gens, n)));
    let i = IdealRep::from_generators(gens, &probe)?;
    let g_max = gens.iter().filter_map(|p| p.max_degree()).max().unwrap_or(0);
    let ctx = Arc::new(TruncatedAlgebra::new(n, planned_truncation(i.primacy_index(), nmax, g_max)));
    i.with_context(&ctx)
}

struct Pipeline<'a> {
    settings: &'a Settings,
    rec: IdealRecord,
}

impl Pipeline<'_> {
    fn stage<T>(&mut self, name: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.rec.errors.push(StageError::new(name, &e));
                None
            }
        }
    }
}

/// Analyze one ideal. `supplied` is an optional named reduction.
pub fn analyze_ideal(
    name: &str,
    gens: &[Polynomial],
    var_names: &[String],
    supplied: Option<(&str, &[Polynomial])>,
    settings: &Settings,
) -> IdealRecord {
    let n = var_names.len();
    let rec = IdealRecord {
        name: name.to_string(),
        generators: gens.iter().map(|g| g.render(var_names)).collect(),
        dimension: n,
        ..IdealRecord::default()
    };
    let mut p = Pipeline { settings, rec };
    run(&mut p, gens, var_names, supplied);
    p.rec
}

fn run(p: &mut Pipeline, gens: &[Polynomial], names: &[String], supplied: Option<(&str, &[Polynomial])>) {
    let st = p.settings;
    let d = names.len();
    let Some(ideal) = p.stage("planner", plan_ideal(gens, d, st.nmax)) else {
        return;
    };
    p.rec.colength = Some(ideal.colength());
    p.rec.diagnostics.primacy_index = Some(ideal.primacy_index());
    p.rec.diagnostics.truncation_degree = Some(ideal.context().trunc_degree());
    if d < 2 {
        p.stage::<()>("planner", Err(EngineError::UnsupportedDimension(d)));
        return;
    }

    let mut filt = Filtration::new(PowerTower::new(ideal.clone()), st.filtration);
    let Some(hil) = p.stage("hilbert", HilbertData::of_powers(filt.tower(), d, &st.hilbert)) else {
        return;
    };
    p.rec.h_coeffs = hil.h_coeffs.clone();
    p.rec.e = hil.e.clone();
    p.rec.diagnostics.hilbert_values = hil.values.clone();
    p.rec.diagnostics.postulation = Some(hil.postulation);

    let reduction = match supplied {
        Some((jname, jgens)) => {
            let r = reduction_number(jgens, filt.tower(), st.reduction_cap, st.reduction_window);
            p.stage("reduction", r).map(|r_j| ReductionRecord {
                source: "supplied".into(),
                name: Some(jname.to_string()),
                generators: jgens.iter().map(|g| g.render(names)).collect(),
                r_j,
                verified_window: st.reduction_window,
                seed: None,
            })
            .map(|r| (r, jgens.to_vec()))
        }
        None => {
            let r = generate_minimal_reduction(filt.tower(), d, st.seed, st.reduction_cap, st.reduction_window);
            p.stage("reduction", r).map(|data| {
                (
                    ReductionRecord {
                        source: "generated".into(),
                        name: None,
                        generators: data.j_generators.iter().map(|g| g.render(names)).collect(),
                        r_j: data.r_j,
                        verified_window: data.verified_window,
                        seed: data.seed,
                    },
                    data.j_generators,
                )
            })
        }
    };
    let Some((red, j_gens)) = reduction else {
        return;
    };
    let r_j = red.r_j;
    p.rec.reductions.push(red);
    if supplied.is_none() {
        let check = generate_minimal_reduction(
            filt.tower(),
            d,
            st.seed.wrapping_add(1000),
            st.reduction_cap,
            st.reduction_window,
        );
        if let Some(other) = p.stage("reduction", check) {
            p.rec.diagnostics.generic_r_j = vec![r_j, other.r_j];
            p.rec.diagnostics.max_tested_r_j = Some(r_j.max(other.r_j));
            if other.r_j != r_j {
                p.rec
                    .diagnostics
                    .notes
                    .push(format!("generated reductions disagree: r_J = {r_j} and {}", other.r_j));
            }
        }
    }

    let Some(fd) = p.stage("filtration", filt.analyze(&j_gens, r_j, &hil, &st.hilbert)) else {
        return;
    };
    p.rec.rho = Some(fd.rho);
    p.rec.tilde_e = fd.tilde.e.clone();
    p.rec.gaps = fd.gaps.clone();
    p.rec.tilde_r = fd.tilde_r;
    p.rec.diagnostics.first_closed = Some(fd.first_closed);
    p.rec.diagnostics.tilde_hilbert_values = fd.tilde.values.clone();
    if let Some(c) = fd.closures.get(&1) {
        p.rec.closure_generators = c.render_generators(names);
    }
    p.rec
        .diagnostics
        .notes
        .push("rho = 1 when every positive power is closed".to_string());
    if !telescoping_holds(&hil.e, &fd.tilde.e, d, &fd.gaps) {
        p.rec.errors.push(StageError {
            stage: "filtration".into(),
            kind: "ConsistencyViolation".into(),
            message: "telescoping identity between e_{d+1}, tilde e_{d+1} and the gaps failed".into(),
        });
    }

    let mut flags = BTreeMap::new();
    for k in 1..=fd.rho.max(r_j) {
        match filt.is_closed(k) {
            Ok(b) => {
                flags.insert(k, b);
            }
            Err(e) => {
                p.rec.errors.push(StageError::new("filtration", &e));
                break;
            }
        }
    }
    p.rec.diagnostics.chain_lengths = fd.chain_lengths.clone();
    let closure_at_rj_equal = r_j == 0 || flags.get(&r_j).copied().unwrap_or(true);
    p.rec.diagnostics.closure_flags = flags.clone();

    let horizon = fd.rho + st.filtration.chain_window;
    let sup = find_superficial(filt.tower(), None, st.seed.wrapping_add(2000), fd.rho, horizon);
    if let Some(x) = p.stage("superficial", sup) {
        p.rec.diagnostics.superficial = Some(x.render(names));
        if let Some(rx) = p.stage("superficial", filt.stability_index_via_superficial(&x, horizon)) {
            p.rec.diagnostics.rho_x = Some(rx);
        }
    }

    for &t in &st.powers {
        if t < 2 {
            continue;
        }
        p.rec.rho_powers.insert(t, rho_of_power(t, fd.rho, &flags));
    }

    let mut behaves_well = BehavesWell::Vacuous;
    let mut quotient_rho = Vec::new();
    if d == 3 && st.quotient_steps >= 1 {
        let window = st.window.unwrap_or(fd.tilde.postulation as u32 + 3).max(1);
        match quotient_step(&ideal, &mut filt, &j_gens, fd.rho, window, st) {
            Ok(q) => {
                behaves_well = q.behaves_well;
                quotient_rho.push(q.rho);
                p.rec.diagnostics.notes.push(format!("quotient by {}", q.x.render(names)));
            }
            Err(e) => {
                behaves_well = BehavesWell::Unchecked;
                p.rec.errors.push(StageError::new("quotient", &e));
            }
        }
    } else if d > 2 {
        behaves_well = BehavesWell::Unchecked;
    }
    p.rec.behaves_well = Some(behaves_well);
    p.rec.quotient_rho = quotient_rho.clone();

    let lam = ideal.colength();
    let lam_tilde = fd.first_gap();
    let mut verdicts = evaluate_rho_bounds(&RhoBoundInputs {
        d,
        e: &hil.e,
        tilde_e: &fd.tilde.e,
        r_j,
        rho: fd.rho,
        gaps: &fd.gaps,
        lam,
        lam_tilde,
        closure_at_rj_equal,
        behaves_well,
    });
    verdicts.extend(evaluate_conditional_props(d, &hil.e, r_j, fd.rho, &p.rec.rho_powers, &flags));
    let reg = regularity_assoc_graded(&RegularityInputs {
        d,
        e: &hil.e,
        r_j,
        rho: fd.rho,
        lam,
        lam_tilde,
        quotient_rhos: &quotient_rho,
        closure_at_rj_equal,
        behaves_well,
    });
    if let Some((reg, v)) = p.stage("regularity", reg) {
        p.rec.regularity = Some(reg);
        verdicts.extend(v);
    }
    p.rec.verdicts = verdicts;
}

/// `ρ(I^t)` from the closure flags of `I`: the closure of `(I^t)^n` is
/// the closure of `I^{tn}`, and every power from `ρ(I)` on is closed.
pub fn rho_of_power(t: u32, rho: u32, flags: &BTreeMap<u32, bool>) -> u32 {
    (1..)
        .take_while(|n| t * n < rho)
        .filter(|n| flags.get(&(t * n)) == Some(&false))
        .last()
        .map_or(1, |n| n + 1)
}

struct QuotientStep {
    x: Polynomial,
    rho: u32,
    behaves_well: BehavesWell,
}

/// Pass to `R/(x_1)` for a superficial `x_1` among the generators of `J`,
/// compute `ρ(I/(x_1))` and compare the closures on `1..=window`.
fn quotient_step(
    ideal: &IdealRep,
    filt: &mut Filtration,
    j_gens: &[Polynomial],
    rho: u32,
    window: u32,
    st: &Settings,
) -> Result<QuotientStep> {
    let horizon = rho + st.filtration.chain_window;
    let mut choice = None;
    for (i, g) in j_gens.iter().enumerate() {
        if is_superficial(filt.tower(), g, rho, horizon)? {
            let rest: Vec<Polynomial> = j_gens.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, g)| g.clone()).collect();
            choice = Some((g.clone(), rest));
            break;
        }
    }
    let (x, rest) = match choice {
        Some(c) => c,
        None => {
            let x = find_superficial(filt.tower(), Some(j_gens), st.seed.wrapping_add(3000), rho, horizon)?;
            (x, j_gens.to_vec())
        }
    };
    let qctx = Arc::new(quotient_context(ideal.context(), &x)?);
    let iq = ideal.image_in(&qctx)?;
    let mut fq = Filtration::new(PowerTower::new(iq), st.filtration);
    let rq = reduction_number(&rest, fq.tower(), st.reduction_cap, st.reduction_window)?;
    let rho_q = fq.stability_index(rq)?;

    let mut behaves_well = BehavesWell::Verified { window };
    for n in 1..=window {
        let lifted = filt.closure(n)?.closure.image_in(&qctx)?;
        let closed = fq.closure(n)?.closure.clone();
        if lifted != closed {
            behaves_well = BehavesWell::Failed { power: n };
            break;
        }
    }
    Ok(QuotientStep {
        x,
        rho: rho_q,
        behaves_well,
    })
}

/// Run every ideal of the session not used as another ideal's reduction.
pub fn analyze(session: &Session, settings: &Settings) -> Report {
    let skip = session.reduction_names();
    let names: Vec<&String> = session.ideals.keys().filter(|k| !skip.contains(k.as_str())).collect();
    let ideals: Vec<IdealRecord> = names
        .par_iter()
        .map(|name| {
            let supplied = session
                .directives
                .reductions
                .get(*name)
                .map(|j| (j.as_str(), session.ideals[j].as_slice()));
            let mut rec = analyze_ideal(name, &session.ideals[*name], &session.var_names, supplied, settings);
            if let Some(keep) = &session.directives.theorems {
                rec.verdicts.retain(|v| keep.contains(&v.theorem));
            }
            rec
        })
        .collect();
    Report {
        schema: SCHEMA.to_string(),
        variables: session.var_names.clone(),
        settings: settings.clone(),
        ideals,
    }
}
