use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use ratliff_core::bounds::{
    bound_buchsbaum, natural_rho, regularity, regularity_assoc_graded, rossi_bound, BehavesWell, RegularityInputs,
};
use ratliff_core::report::rho_of_power;
use ratliff_core::session::parse_polynomial;
use ratliff_core::{parse_session, IdealRep, Monomial, Polynomial, TheoremId, TruncatedAlgebra, Q};

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn names() -> Vec<String> {
    vec!["x".into(), "y".into(), "z".into()]
}

fn polynomial() -> impl Strategy<Value = Polynomial> {
    let term = (-20i64..=20, 1i64..=6, prop::collection::vec(0u32..=4, 3));
    prop::collection::vec(term, 0..5).prop_map(|terms| {
        Polynomial::from_terms(
            3,
            terms
                .into_iter()
                .map(|(n, d, e)| (e, Q::new(BigInt::from(n), BigInt::from(d)))),
        )
    })
}

fn monomial_ideal() -> impl Strategy<Value = Vec<Monomial>> {
    (1u32..=8, 1u32..=8, prop::collection::vec((1u32..=6, 1u32..=6), 0..4)).prop_map(|(a, b, mixed)| {
        let mut gens = vec![Monomial::new(vec![a, 0]), Monomial::new(vec![0, b])];
        gens.extend(mixed.into_iter().map(|(i, j)| Monomial::new(vec![i, j])));
        gens
    })
}

fn below_staircase(gens: &[Monomial]) -> u64 {
    let mut count = 0;
    for i in 0..=16u32 {
        for j in 0..=16u32 {
            let m = Monomial::new(vec![i, j]);
            if !gens.iter().any(|g| g.divides(&m)) {
                count += 1;
            }
        }
    }
    count
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_render_parse_round_trip(p in polynomial()) {
        let text = p.render(&names());
        prop_assert_eq!(parse_polynomial(&text, &names()).unwrap(), p);
    }

    #[test]
    fn session_canonical_form_is_a_fixed_point(
        polys in prop::collection::vec(polynomial(), 1..4),
        seed in prop::option::of(0u64..1000),
        nmax in prop::option::of(1u32..100),
    ) {
        let mut text = String::from("vars x y z\n");
        for (k, p) in polys.iter().enumerate() {
            text.push_str(&format!("ideal I{k} = {}\n", p.render(&names())));
        }
        if let Some(s) = seed {
            text.push_str(&format!("option seed {s}\n"));
        }
        if let Some(n) = nmax {
            text.push_str(&format!("option nmax {n}\n"));
        }
        let s = parse_session(&text).unwrap();
        let canon = s.to_canonical();
        let again = parse_session(&canon).unwrap();
        prop_assert_eq!(&again, &s);
        prop_assert_eq!(again.to_canonical(), canon);
    }

    #[test]
    fn monomial_colength_is_the_staircase_count(gens in monomial_ideal()) {
        let ctx = Arc::new(TruncatedAlgebra::new(2, 40));
        let i = IdealRep::monomial(&ctx, gens.clone()).unwrap();
        prop_assert_eq!(i.colength(), below_staircase(&gens));
    }

    #[test]
    fn colon_membership_matches_its_definition(gens in monomial_ideal(), i in 0u32..12, j in 0u32..12) {
        let ctx = Arc::new(TruncatedAlgebra::new(2, 60));
        let a = IdealRep::monomial(&ctx, gens.clone()).unwrap();
        let a2 = a.power(2).unwrap();
        let f = Polynomial::monomial(Monomial::new(vec![i, j]));
        let by_definition = gens.iter().all(|g| a2.contains(&f.mul_monomial(g)));
        prop_assert_eq!(a2.colon(&a).unwrap().contains(&f), by_definition);
    }

    #[test]
    fn rho_of_powers_agrees_with_the_definition(
        rho in 1u32..12,
        open in prop::collection::vec(any::<bool>(), 12),
        t in 2u32..5,
    ) {
        let mut flags = BTreeMap::new();
        for k in 1..rho {
            flags.insert(k, !open[k as usize]);
        }
        if rho > 1 {
            flags.insert(rho - 1, false);
        }
        let closed = |k: u32| k >= rho || flags[&k];
        let expected = (1..=rho + 1)
            .find(|&m| (m..=rho + 1).all(|n| closed(t * n)))
            .unwrap();
        prop_assert_eq!(rho_of_power(t, rho, &flags), expected);
    }

    #[test]
    fn regularity_dominates_its_inputs(d in 2usize..=3, r_j in 0u32..10, rho in 1u32..10, qrho in 1u32..10) {
        let reg = regularity(d, r_j, rho, &[qrho]).unwrap();
        prop_assert!(reg >= r_j && reg >= natural_rho(rho));
        prop_assert!(reg == r_j || reg == natural_rho(rho) || (d == 3 && reg == natural_rho(qrho)));
    }

    #[test]
    fn buchsbaum_bound_matches_the_closed_form(r in 0i64..10, e2 in -10i64..10, e1j in -10i64..10, e3 in -50i64..50) {
        let u = e2 - e1j;
        prop_assert_eq!(bound_buchsbaum(r, &q(e2), &q(e1j), &q(e3)), q(r - 1 + (u - 1) * u - e3));
    }

    #[test]
    fn rossi_slack_separates_the_two_regularity_bounds(
        e0 in 1i64..100,
        e1 in 0i64..60,
        e2 in 0i64..=2,
        e3 in -30i64..10,
        lam in 1u64..100,
        r_j in 0u32..8,
        extra in 1u32..6,
    ) {
        let e = vec![q(e0), q(e1), q(e2), q(e3), q(0)];
        let inp = RegularityInputs {
            d: 2,
            e: &e,
            r_j,
            rho: r_j + extra,
            lam,
            lam_tilde: 1,
            quotient_rhos: &[],
            closure_at_rj_equal: false,
            behaves_well: BehavesWell::Vacuous,
        };
        let (_, verdicts) = regularity_assoc_graded(&inp).unwrap();
        let bound = |id| verdicts.iter().find(|v| v.theorem == id).and_then(|v| v.bound_value.clone());
        let (p56, c57) = (bound(TheoremId::Prop5_6), bound(TheoremId::Cor5_7));
        if natural_rho(r_j + extra) > r_j {
            let slack = rossi_bound(&e, lam) - q(r_j as i64);
            prop_assert_eq!(c57.unwrap() - p56.unwrap(), slack);
        }
    }
}

#[test]
fn non_primary_input_is_reported_per_ideal() {
    let s = parse_session("vars x y\nideal A = x^2, x*y\nideal B = x, y^2\n").unwrap();
    let report = ratliff_core::analyze(&s, &ratliff_core::Settings::default());
    let a = &report.ideals[0];
    assert_eq!(a.name, "A");
    assert!(a.errors.iter().any(|e| e.kind == "NotMPrimary"));
    let b = &report.ideals[1];
    assert!(b.errors.is_empty());
    assert_eq!(b.rho, Some(1));
    assert_eq!(report.exit_code(), 2);
}

#[test]
fn report_json_round_trip() {
    let s = parse_session(
        "vars x y\nideal I = x^4, x^3*y, x*y^3, y^4\nideal J = x^4, y^4\noption reduction.I J\nideal K = x^3, y^3, x*y\n",
    )
    .unwrap();
    let report = ratliff_core::analyze(&s, &ratliff_core::Settings::from_session(&s));
    let back = ratliff_core::Report::from_json(&report.to_json()).unwrap();
    assert_eq!(back, report);
    assert_eq!(back.to_json(), report.to_json());
    let names: Vec<&str> = report.ideals.iter().map(|r| r.name.as_str()).collect();
    assert_eq!(names, ["I", "K"]);
}

#[test]
fn reports_depend_only_on_text_and_seed() {
    let text = "vars x y\nideal I = x^5, x^3*y^2, y^5\n";
    let s = parse_session(text).unwrap();
    let settings = ratliff_core::Settings::default();
    let a = ratliff_core::analyze(&s, &settings).to_json();
    let b = ratliff_core::analyze(&parse_session(text).unwrap(), &settings).to_json();
    assert_eq!(a, b);
}
