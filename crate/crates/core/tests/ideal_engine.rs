use std::sync::Arc;

use ratliff_core::{HilbertData, HilbertOptions, IdealRep, Monomial, Polynomial, PowerTower, TruncatedAlgebra};

fn mono(e: &[u32]) -> Polynomial {
    Polynomial::monomial(Monomial::new(e.to_vec()))
}

fn ideal(ctx: &Arc<TruncatedAlgebra>, gens: &[&[u32]]) -> IdealRep {
    IdealRep::from_generators(&gens.iter().map(|e| mono(e)).collect::<Vec<_>>(), ctx).unwrap()
}

fn ctx2() -> Arc<TruncatedAlgebra> {
    Arc::new(TruncatedAlgebra::new(2, 600))
}

#[test]
fn colon_memberships_from_the_examples() {
    let c = ctx2();
    let i = ideal(&c, &[&[7, 0], &[6, 1], &[2, 5], &[0, 7]]);
    let i3 = i.power(3).unwrap();
    let i4 = i.power(4).unwrap();
    let x17y4 = mono(&[17, 4]);
    assert!(i4.colon(&i).unwrap().contains(&x17y4));
    assert!(!i3.contains(&x17y4));
    assert_eq!(i.colength(), 35);
    assert_eq!(i.power(2).unwrap().colength(), 111);
    assert_eq!(i.power(2).unwrap().colength() - i.colength(), 76);

    let ii = ideal(&c, &[&[7, 0], &[6, 1], &[3, 4], &[2, 5], &[0, 7]]);
    let x11y3 = mono(&[11, 3]);
    assert!(ii.power(3).unwrap().colon(&ii).unwrap().contains(&x11y3));
    assert!(!ii.power(2).unwrap().contains(&x11y3));

    let i9 = ideal(&c, &[&[9, 0], &[7, 2], &[1, 8], &[0, 9]]);
    let x13y23 = mono(&[13, 23]);
    assert!(i9.power(5).unwrap().colon(&i9).unwrap().contains(&x13y23));
    assert!(!i9.power(4).unwrap().contains(&x13y23));
}

#[test]
fn hilbert_data_of_the_examples() {
    let c = ctx2();
    let cases: Vec<(Vec<&[u32]>, Vec<i64>)> = vec![
        (vec![&[7, 0], &[6, 1], &[2, 5], &[0, 7]], vec![35, 6, 7, 2, 0, -1]),
        (vec![&[4, 0], &[3, 1], &[1, 3], &[0, 4]], vec![11, 3, 3, -1]),
        (vec![&[9, 0], &[7, 2], &[1, 8], &[0, 9]], vec![61, 6, 7, 7, 2, 0, -1, -1]),
        (vec![&[7, 0], &[6, 1], &[3, 4], &[2, 5], &[0, 7]], vec![32, 11, 7, 0, -1]),
    ];
    for (gens, h) in cases {
        let mut tower = PowerTower::new(ideal(&c, &gens));
        let data = HilbertData::of_powers(&mut tower, 2, &HilbertOptions::default()).unwrap();
        assert_eq!(data.h_coeffs, h);
    }
}

#[test]
fn three_variable_example() {
    let c = Arc::new(TruncatedAlgebra::new(3, 200));
    let p = |t: &[(&[u32], i64)]| {
        Polynomial::from_terms(3, t.iter().map(|(e, k)| (e.to_vec(), ratliff_core::Q::from_integer((*k).into()))))
    };
    let gens = vec![
        p(&[(&[2, 0, 0], 1), (&[0, 2, 0], -1)]),
        p(&[(&[0, 2, 0], 1), (&[0, 0, 2], -1)]),
        p(&[(&[1, 1, 0], 1)]),
        p(&[(&[0, 1, 1], 1)]),
        p(&[(&[1, 0, 1], 1)]),
    ];
    let i = IdealRep::from_generators(&gens, &c).unwrap();
    assert_eq!(i.colength(), 5);
    assert_eq!(i.primacy_index(), 3);
    let mut tower = PowerTower::new(i);
    let data = HilbertData::of_powers(&mut tower, 3, &HilbertOptions::default()).unwrap();
    assert_eq!(data.h_coeffs, vec![5, 0, 6, -4, 1]);
}
