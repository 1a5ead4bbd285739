//! Embedded worked examples with known reference values, compared exactly
//! against a fresh computation.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bounds::{bound_buchsbaum, TheoremId};
use crate::rational::{format_q, parse_q};
use crate::report::{analyze, plan_ideal, IdealRecord, Report, Settings};
use crate::session::{parse_polynomial, parse_session};

/// One entry: a session plus expected quantities keyed by name.
///
/// Keys understood by the evaluator:
/// `h`, `e`, `e<i>`, `colength`, `closure`, `lambda_tilde`, `r_J`, `rho`,
/// `reg`, `closed:<k>`, `bound:<ID>`, `applicable:<ID>`, `holds:<ID>`,
/// `all_hold`, `member:<f>:<a>:<b>` for `f ∈ (I^a : I^b)`,
/// `in_power:<f>:<k>` for `f ∈ I^k`, and `buchsbaum:<r>,<e2>,<e1J>,<e3>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub session: Option<String>,
    pub ideal: String,
    pub expectations: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusCheck {
    pub entry: String,
    pub quantity: String,
    pub expected: String,
    pub found: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusOutcome {
    pub checks: Vec<CorpusCheck>,
    pub reports: Vec<(String, Report)>,
}

impl CorpusOutcome {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn entry_passes(&self, entry: &str) -> bool {
        self.checks.iter().filter(|c| c.entry == entry).all(|c| c.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{:<8} {:<6} {:<36} {:<28} found", "entry", "status", "quantity", "expected").unwrap();
        for c in &self.checks {
            writeln!(
                out,
                "{:<12} {:<6} {:<36} {:<28} {}",
                c.entry,
                if c.pass { "PASS" } else { "FAIL" },
                c.quantity,
                c.expected,
                c.found
            )
            .unwrap();
        }
        out
    }
}

fn exp(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

pub fn corpus_entries() -> Vec<CorpusEntry> {
    vec![
        CorpusEntry {
            name: "d7-four".into(),
            session: Some(
                "vars x y\nideal I = x^7, x^6*y, x^2*y^5, y^7\nideal J = x^7, x^6*y + y^7\noption reduction.I J\n"
                    .into(),
            ),
            ideal: "I".into(),
            expectations: exp(&[
                ("h", "35, 6, 7, 2, 0, -1"),
                ("e", "49, 21, 3, -8"),
                ("closure", "x^7, x^6*y, x^4*y^3, x^2*y^5, y^7"),
                ("lambda_tilde", "4"),
                ("r_J", "3"),
                ("member:x^17*y^4:4:1", "true"),
                ("in_power:x^17*y^4:3", "false"),
                ("bound:PROP_3_7", "10"),
                ("bound:PROP_3_9", "16"),
                ("holds:PROP_3_7", "true"),
                ("holds:PROP_3_9", "true"),
                ("all_hold", "true"),
            ]),
        },
        CorpusEntry {
            name: "d4-four".into(),
            session: Some("vars x y\nideal I = x^4, x^3*y, x*y^3, y^4\nideal J = x^4, y^4\noption reduction.I J\n".into()),
            ideal: "I".into(),
            expectations: exp(&[
                ("h", "11, 3, 3, -1"),
                ("e2", "0"),
                ("e3", "-1"),
                ("r_J", "2"),
                ("rho", "2"),
                ("applicable:PROP_3_12", "true"),
                ("bound:PROP_3_12", "3"),
                ("holds:PROP_3_12", "true"),
                ("reg", "2"),
                ("all_hold", "true"),
            ]),
        },
        CorpusEntry {
            name: "quadrics-3v".into(),
            session: Some("vars x y z\nideal I = x^2 - y^2, y^2 - z^2, x*y, y*z, z*x\n".into()),
            ideal: "I".into(),
            expectations: exp(&[
                ("h", "5, 0, 6, -4, 1"),
                ("e2", "0"),
                ("e3", "0"),
                ("r_J", "2"),
                ("closed:2", "true"),
                ("reg", "2"),
                ("all_hold", "true"),
            ]),
        },
        CorpusEntry {
            name: "d9-four".into(),
            session: Some("vars x y\nideal I = x^9, x^7*y^2, x*y^8, y^9\n".into()),
            ideal: "I".into(),
            expectations: exp(&[
                ("h", "61, 6, 7, 7, 2, 0, -1, -1"),
                ("e", "81, 36, 4, -40"),
                ("lambda_tilde", "12"),
                ("closure", "x^9, x^7*y^2, x^5*y^4, x^3*y^6, x*y^8, y^9"),
                ("r_J", "4"),
                ("member:x^13*y^23:5:1", "true"),
                ("in_power:x^13*y^23:4", "false"),
                ("bound:PROP_3_7", "43"),
                ("bound:PROP_3_9", "55"),
                ("all_hold", "true"),
            ]),
        },
        CorpusEntry {
            name: "d7-five".into(),
            session: Some(
                "vars x y\nideal I = x^7, x^6*y, x^3*y^4, x^2*y^5, y^7\nideal J = x^7, x^6*y + y^7\noption reduction.I J\n"
                    .into(),
            ),
            ideal: "I".into(),
            expectations: exp(&[
                ("h", "32, 11, 7, 0, -1"),
                ("e", "49, 21, 1, -4"),
                ("lambda_tilde", "3"),
                ("closure", "x^7, x^6*y, x^5*y^2, x^4*y^3, x^3*y^4, x^2*y^5, y^7"),
                ("r_J", "2"),
                ("member:x^11*y^3:3:1", "true"),
                ("in_power:x^11*y^3:2", "false"),
                ("bound:PROP_5_5", "5"),
                ("bound:PROP_5_6", "5"),
                ("all_hold", "true"),
            ]),
        },
        CorpusEntry {
            name: "d7-five-gen".into(),
            session: Some("vars x y\nideal I = x^7, x^6*y, x^3*y^4, x^2*y^5, y^7\n".into()),
            ideal: "I".into(),
            expectations: exp(&[("r_J", "2"), ("lambda_tilde", "3"), ("all_hold", "true")]),
        },
        CorpusEntry {
            name: "buchsbaum".into(),
            session: None,
            ideal: String::new(),
            expectations: exp(&[("buchsbaum:3,2,-1,-8", "16")]),
        },
    ]
}

fn join<T: ToString>(v: impl IntoIterator<Item = T>) -> String {
    v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn verdict_field(rec: &IdealRecord, id: &str, field: &str) -> String {
    let Some(id) = TheoremId::from_name(id) else {
        return format!("unknown theorem {id}");
    };
    match rec.verdict(id) {
        None => "no verdict".into(),
        Some(v) => match field {
            "bound" => v.bound_value.as_ref().map(format_q).unwrap_or("-".into()),
            "applicable" => v.applicable.to_string(),
            _ => v.holds.map(|h| h.to_string()).unwrap_or("-".into()),
        },
    }
}

/// Membership checks recomputed directly on `I`.
fn membership(gens: &[crate::poly::Polynomial], vars: &[String], key: &str, settings: &Settings) -> String {
    let parts: Vec<&str> = key.split(':').collect();
    let run = || -> Result<bool, String> {
        let f = parse_polynomial(parts[1], vars).map_err(|e| e.to_string())?;
        let i = plan_ideal(gens, vars.len(), settings.nmax).map_err(|e| e.to_string())?;
        let pw = |k: &str| -> Result<crate::ideal::IdealRep, String> {
            let k: u32 = k.parse().map_err(|_| format!("bad exponent {k}"))?;
            i.power(k).map_err(|e| e.to_string())
        };
        match parts[0] {
            "member" => {
                let colon = pw(parts[2])?.colon(&pw(parts[3])?).map_err(|e| e.to_string())?;
                Ok(colon.contains(&f))
            }
            _ => Ok(pw(parts[2])?.contains(&f)),
        }
    };
    match run() {
        Ok(b) => b.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

fn observe(rec: &IdealRecord, key: &str, gens: &[crate::poly::Polynomial], vars: &[String], settings: &Settings) -> String {
    let opt = |v: Option<u32>| v.map(|x| x.to_string()).unwrap_or("-".into());
    if let Some(i) = key.strip_prefix('e').and_then(|s| s.parse::<usize>().ok()) {
        return rec.e.get(i).map(format_q).unwrap_or("-".into());
    }
    if let Some((field, id)) = key.split_once(':') {
        return match field {
            "bound" | "applicable" | "holds" => verdict_field(rec, id, field),
            "closed" => id
                .parse::<u32>()
                .ok()
                .and_then(|k| rec.diagnostics.closure_flags.get(&k).copied().or(rec.rho.map(|r| k >= r)))
                .map(|b| b.to_string())
                .unwrap_or("-".into()),
            "member" | "in_power" => membership(gens, vars, key, settings),
            _ => format!("unknown key {key}"),
        };
    }
    match key {
        "h" => join(&rec.h_coeffs),
        "e" => join(rec.e.iter().take(rec.dimension + 2).map(format_q)),
        "colength" => rec.colength.map(|c| c.to_string()).unwrap_or("-".into()),
        "closure" => rec.closure_generators.join(", "),
        "lambda_tilde" => rec.gaps.get(&1).map(|g| g.to_string()).unwrap_or("-".into()),
        "r_J" => opt(rec.r_j()),
        "rho" => opt(rec.rho),
        "reg" => opt(rec.regularity),
        "all_hold" => (rec.errors.is_empty() && rec.verdicts.iter().all(|v| v.is_satisfied())).to_string(),
        _ => format!("unknown key {key}"),
    }
}

fn buchsbaum(args: &str) -> String {
    let v: Option<Vec<_>> = args.split(',').map(parse_q).collect();
    match v.as_deref() {
        Some([r, e2, e1j, e3]) if r.is_integer() => {
            let r = r.to_integer().to_string().parse::<i64>().unwrap_or(0);
            format_q(&bound_buchsbaum(r, e2, e1j, e3))
        }
        _ => format!("bad arguments {args}"),
    }
}

/// Run the given entries.
pub fn run_entries(entries: &[CorpusEntry], settings: &Settings) -> CorpusOutcome {
    let mut checks = Vec::new();
    let mut reports = Vec::new();
    for entry in entries {
        let mut push = |quantity: &str, expected: &str, found: String| {
            checks.push(CorpusCheck {
                entry: entry.name.clone(),
                quantity: quantity.to_string(),
                expected: expected.to_string(),
                pass: found == expected,
                found,
            });
        };
        let Some(text) = &entry.session else {
            for (k, v) in &entry.expectations {
                let found = match k.strip_prefix("buchsbaum:") {
                    Some(args) => buchsbaum(args),
                    None => format!("unknown key {k}"),
                };
                push(k, v, found);
            }
            continue;
        };
        let session = match parse_session(text) {
            Ok(s) => s,
            Err(e) => {
                push("session", "parses", e.to_string());
                continue;
            }
        };
        let report = analyze(&session, settings);
        match report.ideals.iter().find(|r| r.name == entry.ideal) {
            None => push("ideal", &entry.ideal, "missing".into()),
            Some(rec) => {
                let gens = &session.ideals[&entry.ideal];
                for (k, v) in &entry.expectations {
                    push(k, v, observe(rec, k, gens, &session.var_names, settings));
                }
            }
        }
        reports.push((entry.name.clone(), report));
    }
    CorpusOutcome { checks, reports }
}

pub fn run_corpus(settings: &Settings) -> CorpusOutcome {
    run_entries(&corpus_entries(), settings)
}
