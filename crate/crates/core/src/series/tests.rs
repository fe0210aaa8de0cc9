use super::*;

fn s(nvars: usize, prec: u32, terms: &[(&[u32], i64)]) -> Series {
    Series::from_int_terms(nvars, prec, terms)
}

#[test]
fn add_examples() {
    let x = s(2, 5, &[(&[1, 0], 1)]);
    assert!((&x + &(-&x)).is_zero());

    let a = s(2, 5, &[(&[0, 0], 1), (&[1, 0], 1)]);
    let b = s(2, 5, &[(&[0, 1], 1)]);
    assert_eq!(
        &a + &b,
        s(2, 5, &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)])
    );

    let p3 = s(1, 3, &[(&[1], 1)]);
    let p5 = s(1, 5, &[(&[2], 1)]);
    assert_eq!((&p3 + &p5).prec(), 3);
}

#[test]
fn add_rejects_nvars_mismatch() {
    let a = Series::zero(1, 3);
    let b = Series::zero(2, 3);
    assert_eq!(
        a.checked_add(&b),
        Err(Error::NvarsMismatch { left: 1, right: 2 })
    );
    assert!(a.checked_mul(&b).is_err());
}

#[test]
fn mul_examples() {
    let a = s(1, 6, &[(&[0], 1), (&[1], 1)]);
    let b = s(1, 6, &[(&[0], 1), (&[1], -1)]);
    assert_eq!(&a * &b, s(1, 6, &[(&[0], 1), (&[2], -1)]));

    let x1 = Series::var(2, 0, 4);
    let x2 = Series::var(2, 1, 4);
    assert_eq!(&x1 * &x2, s(2, 4, &[(&[1, 1], 1)]));

    // geometric series times (1 - x) is 1 modulo m^c
    for c in 1..9u32 {
        let geo: Vec<(Vec<u32>, BigRational)> = (0..c).map(|k| (vec![k], rat(1, 1))).collect();
        let geo = Series::from_terms(1, c, geo).unwrap();
        let one_minus_x = s(1, c, &[(&[0], 1), (&[1], -1)]);
        assert_eq!(&geo * &one_minus_x, Series::one(1, c));
    }
}

#[test]
fn order_examples() {
    let f = s(2, 6, &[(&[2, 0], 1), (&[0, 3], 1)]);
    assert_eq!(f.order(), Order::Finite(2));
    assert_eq!(Series::zero(2, 6).order(), Order::Vanishes { below: 6 });
    assert!(Series::zero(2, 6).order().is_infinite());
    let g = s(2, 4, &[(&[1, 1], 1)]);
    assert_eq!(g.order(), Order::Finite(2));
}

#[test]
fn invert_unit_examples() {
    let two = Series::from_int(1, 2, 5);
    assert_eq!(
        two.invert_unit().unwrap(),
        Series::constant(1, rat(1, 2), 5)
    );

    let f = s(1, 7, &[(&[0], 1), (&[1], -1)]);
    let g = f.invert_unit().unwrap();
    assert_eq!(&f * &g, Series::one(1, 7));
    let expected: Vec<(Vec<u32>, BigRational)> = (0..7).map(|k| (vec![k], rat(1, 1))).collect();
    assert_eq!(g, Series::from_terms(1, 7, expected).unwrap());

    assert_eq!(Series::var(1, 0, 4).invert_unit(), Err(Error::NonUnit));
}

#[test]
fn compose_examples() {
    // f = y1*y2, args = (x1, x1 + x2)
    let f = s(2, 6, &[(&[1, 1], 1)]);
    let a1 = Series::var(2, 0, 6);
    let a2 = s(2, 6, &[(&[1, 0], 1), (&[0, 1], 1)]);
    let r = f.compose(&[a1, a2]).unwrap();
    assert_eq!(r, s(2, 6, &[(&[2, 0], 1), (&[1, 1], 1)]));

    // identity substitution
    let g = s(3, 5, &[(&[0, 0, 0], 3), (&[1, 2, 0], -2), (&[0, 1, 1], 7)]);
    let ids: Vec<Series> = (0..3).map(|i| Series::var(3, i, 5)).collect();
    assert_eq!(g.compose(&ids).unwrap(), g);

    // y^2 at x + x^2
    let sq = s(1, 8, &[(&[2], 1)]);
    let arg = s(1, 8, &[(&[1], 1), (&[2], 1)]);
    assert_eq!(
        sq.compose(&[arg]).unwrap(),
        s(1, 8, &[(&[2], 1), (&[3], 2), (&[4], 1)])
    );
}

#[test]
fn compose_errors() {
    let f = s(2, 4, &[(&[1, 1], 1)]);
    let unit = Series::one(1, 4);
    let x = Series::var(1, 0, 4);
    assert_eq!(
        f.compose(&[x.clone(), unit]),
        Err(Error::ConstantTerm { index: 1 })
    );
    assert!(matches!(f.compose(&[x]), Err(Error::Arity { .. })));
}

#[test]
fn compose_precision_uses_degree_of_dependence() {
    // f = y1 + y2^3 with y2 known only to order 2: y2^3 error has order >= 2 + 2
    let f = s(2, 10, &[(&[1, 0], 1), (&[0, 3], 1)]);
    let a = Series::var(1, 0, 9);
    let b = Series::var(1, 0, 2);
    assert_eq!(f.compose(&[a, b]).unwrap().prec(), 4);
}

#[test]
fn partial_examples() {
    let f = s(2, 6, &[(&[2, 1], 1)]);
    assert_eq!(f.partial(0).unwrap(), s(2, 5, &[(&[1, 1], 2)]));
    assert!(Series::from_int(2, 5, 6).partial(1).unwrap().is_zero());
    let g = s(2, 9, &[(&[3, 2], 1)]);
    let a = g.partial(0).unwrap().partial(1).unwrap();
    let b = g.partial(1).unwrap().partial(0).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, s(2, 7, &[(&[2, 1], 6)]));
    assert!(matches!(g.partial(2), Err(Error::IndexOutOfRange { .. })));
}

#[test]
fn coefficient_split_and_shift() {
    let f = s(2, 6, &[(&[1, 0], 1), (&[0, 2], 3), (&[1, 3], 5)]);
    let (low, high) = f.split_in(1, 2);
    assert_eq!(low, s(2, 6, &[(&[1, 0], 1)]));
    assert_eq!(high, s(2, 4, &[(&[0, 0], 3), (&[1, 1], 5)]));
    assert!(f.agrees_with(&(&low + &high.shift_in(1, 2))));
    assert_eq!(f.coefficient_in(1, 0), s(1, 6, &[(&[1], 1)]));
    assert_eq!(f.coefficient_in(1, 3), s(1, 3, &[(&[1], 5)]));
}

#[test]
fn linear_substitution_shear() {
    // x1 -> x1 + x2 applied to x1*x2
    let f = s(2, 5, &[(&[1, 1], 1)]);
    let g = f.linear_substitute(0, &[vec![1, 1], vec![0, 1]]);
    assert_eq!(g, s(2, 5, &[(&[1, 1], 1), (&[0, 2], 1)]));
    let back = g.linear_substitute(0, &[vec![1, -1], vec![0, 1]]);
    assert_eq!(back, f);
}

#[test]
fn text_round_trip() {
    let f = Series::from_terms(
        2,
        5,
        vec![(vec![0, 1], rat(-3, 7)), (vec![2, 0], rat(5, 1))],
    )
    .unwrap();
    let json = serde_json::to_string(&f).unwrap();
    assert!(json.contains("\"-3/7\""));
    assert!(json.contains("\"5/1\""));
    let back: Series = serde_json::from_str(&json).unwrap();
    assert_eq!(back, f);
    assert!(parse_rational("1.5").is_err());
    assert!(parse_rational("1/0").is_err());
    assert_eq!(parse_rational(" 4 ").unwrap(), rat(4, 1));
}
