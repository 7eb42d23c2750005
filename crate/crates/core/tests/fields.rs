use involab::expr::parse_element;
use involab::{Error, FieldElement, FieldTower, Layer};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn el(f: &FieldTower, s: &str) -> FieldElement {
    parse_element(f, s).unwrap()
}

fn towers() -> Vec<FieldTower> {
    vec![
        FieldTower::parse("GF(4)", &[] as &[&str]).unwrap(),
        FieldTower::parse("GF(2)", &["rat:t"]).unwrap(),
        FieldTower::parse("GF(2)", &["rat:s", "rat:t"]).unwrap(),
        FieldTower::parse("GF(2)", &["rat:t", "as:t"]).unwrap(),
        FieldTower::parse("GF(2)", &["rat:t", "odd:x^3+x+1"]).unwrap(),
        FieldTower::parse("GF(2)", &["rat:t", "odd:x^3+t"]).unwrap(),
        FieldTower::parse("GF(2)", &["rat:t", "insep:t"]).unwrap(),
        FieldTower::parse("GF(4)", &["rat:s", "rat:t", "insep:s", "as:t"]).unwrap(),
    ]
}

#[test]
fn gf4_product_of_generator_and_successor() {
    let f = FieldTower::parse("GF(4)", &[] as &[&str]).unwrap();
    assert!(f.is_one(&f.mul(&el(&f, "g"), &el(&f, "g+1"))));
}

#[test]
fn characteristic_two_cancellation() {
    let f = FieldTower::rational(&["t"]).unwrap();
    let x = el(&f, "t+1");
    assert!(f.is_zero(&f.add(&x, &x)));
}

#[test]
fn inverse_is_reduced_with_monic_denominator() {
    let f = FieldTower::rational(&["t"]).unwrap();
    let x = el(&f, "t^2+t");
    let inv = f.inv(&x).unwrap();
    let FieldElement::Frac(r) = &inv else { panic!() };
    assert_eq!(r.numerator(), &[FieldElement::Base(1)]);
    assert_eq!(r.denominator(), &[FieldElement::Base(0), FieldElement::Base(1), FieldElement::Base(1)]);
    assert!(f.is_one(&f.mul(&x, &inv)));
    assert_eq!(f.format(&inv), "1/(t^2 + t)");
    assert_eq!(f.inv(&f.zero()), Err(Error::DivisionByZero));
}

#[test]
fn two_basis_examples() {
    let gf4 = FieldTower::parse("GF(4)", &[] as &[&str]).unwrap();
    assert_eq!(gf4.two_basis(), vec![gf4.one()]);
    let f = FieldTower::rational(&["t"]).unwrap();
    assert_eq!(f.two_basis(), vec![f.one(), el(&f, "t")]);
    let f = FieldTower::rational(&["s", "t"]).unwrap();
    assert_eq!(f.two_basis(), vec![f.one(), el(&f, "s"), el(&f, "t"), el(&f, "s*t")]);
    assert_eq!(f.two_basis_names(), vec!["1", "s", "t", "s*t"]);
    let f = FieldTower::rational(&["s", "t", "u"]).unwrap();
    assert_eq!(f.two_basis_names(), vec!["1", "s", "t", "u", "s*t", "s*u", "t*u", "s*t*u"]);
}

#[test]
fn frobenius_examples() {
    let f = FieldTower::rational(&["t"]).unwrap();
    assert_eq!(f.frobenius_decompose(&el(&f, "t^3")), vec![f.zero(), el(&f, "t")]);
    assert_eq!(f.frobenius_decompose(&el(&f, "t^2+t")), vec![el(&f, "t"), f.one()]);
    let x = el(&f, "1/(t+1)");
    let c = f.frobenius_decompose(&x);
    assert_eq!(c, vec![x.clone(), x.clone()]);
    // multiply back out: c0^2 + c1^2 t
    let back = f.add(&f.square(&c[0]), &f.mul(&f.square(&c[1]), &el(&f, "t")));
    assert_eq!(back, x);
}

#[test]
fn sqrt_examples() {
    let gf4 = FieldTower::parse("GF(4)", &[] as &[&str]).unwrap();
    assert_eq!(gf4.sqrt_exact(&el(&gf4, "g")), Some(el(&gf4, "g+1")));
    let f = FieldTower::rational(&["t"]).unwrap();
    assert_eq!(f.sqrt_exact(&el(&f, "t^2+1")), Some(el(&f, "t+1")));
    assert_eq!(f.sqrt_exact(&el(&f, "t")), None);
}

#[test]
fn extension_examples() {
    let f = FieldTower::rational(&["t"]).unwrap();
    let k = f.extend_parsed("as:t").unwrap();
    assert_eq!(k.degree_over(&f), Some(2));
    assert!(k.is_separable_over(&f));
    let w = k.symbol_element("w2").unwrap();
    assert_eq!(k.add(&k.square(&w), &w), k.embed(&f, &el(&f, "t")).unwrap());

    let k = f.extend_parsed("odd:x^3+x+1").unwrap();
    assert_eq!(k.degree_over(&f), Some(3));
    assert!(k.is_separable_over(&f));

    let k = f.extend_parsed("insep:t").unwrap();
    assert_eq!(k.degree_over(&f), Some(2));
    assert!(!k.is_separable_over(&f));
    let r = k.symbol_element("r2").unwrap();
    assert_eq!(k.square(&r), k.embed(&f, &el(&f, "t")).unwrap());
    assert_eq!(k.two_basis_names(), vec!["1", "r2"]);
    // t is now a square
    assert_eq!(k.sqrt_exact(&k.embed(&f, &el(&f, "t")).unwrap()), Some(r));
}

#[test]
fn invalid_layers_are_rejected() {
    let f = FieldTower::rational(&["t"]).unwrap();
    assert!(matches!(f.extend_parsed("odd:x^2+x+1"), Err(Error::InvalidLayer(_))));
    assert!(matches!(f.extend_parsed("odd:x^3+1"), Err(Error::InvalidLayer(_))));
    assert!(matches!(f.extend_parsed("as:t^2+t"), Err(Error::InvalidLayer(_))));
    assert!(matches!(f.extend_parsed("as:0"), Err(Error::InvalidLayer(_))));
    let st = FieldTower::rational(&["s", "t"]).unwrap();
    assert!(matches!(st.extend_parsed("insep:s*t"), Err(Error::InvalidLayer(_))));
    assert!(matches!(st.extend_parsed("rat:s"), Err(Error::InvalidLayer(_))));
    let stu = FieldTower::rational(&["s", "t", "u"]).unwrap();
    assert!(matches!(stu.extend_parsed("rat:v"), Err(Error::InvalidLayer(_))));
    // degree cap 16
    let k = f.extend_parsed("odd:x^5+x^2+1").unwrap().extend_parsed("odd:x^3+x+1").unwrap();
    assert!(matches!(k.extend_parsed("as:t"), Err(Error::InvalidLayer(_))));
}

#[test]
fn artin_schreier_over_composites() {
    let st = FieldTower::rational(&["s", "t"]).unwrap();
    let k = st.extend_parsed("as:t").unwrap();
    // s + t is not in the image over F2(s,t), so `as:s` stays a field over K
    assert!(k.extend_parsed("as:s").is_ok());
    // t itself became an image over K
    assert!(matches!(k.extend_parsed("as:t"), Err(Error::InvalidLayer(_))));
    let f = FieldTower::rational(&["t"]).unwrap();
    let k = f.extend_parsed("odd:x^3+x+1").unwrap();
    assert!(k.extend_parsed("as:t").is_ok());
    // over GF(2), delta = 1 gives GF(4)
    assert!(FieldTower::gf2().extend_parsed("as:1").is_ok());
    let gf4 = FieldTower::parse("GF(4)", &[] as &[&str]).unwrap();
    assert!(matches!(gf4.extend_parsed("as:1"), Err(Error::InvalidLayer(_))));
}

#[test]
fn separable_layers_preserve_two_basis() {
    let f = FieldTower::rational(&["s", "t"]).unwrap();
    for layer in ["as:t", "as:s*t+1", "odd:x^3+x+1", "odd:x^5+x^2+1", "odd:x^3+s"] {
        let k = f.extend_parsed(layer).unwrap();
        let embedded: Vec<_> = f.two_basis().iter().map(|b| k.embed(&f, b).unwrap()).collect();
        assert_eq!(k.two_basis(), embedded, "{layer}");
    }
}

#[test]
fn display_round_trips_through_parser() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for f in towers() {
        for _ in 0..50 {
            let x = f.random_element(&mut rng, 2);
            let text = f.format(&x);
            assert_eq!(parse_element(&f, &text).unwrap(), x, "{text} in {f}");
        }
    }
}

#[test]
fn odd_layer_inverse_and_embedding() {
    let f = FieldTower::rational(&["t"]).unwrap();
    let k = f.extend(Layer::OddSeparable {
        min_poly: involab::expr::parse_polynomial(&f, "x^3+t", "x").unwrap(),
    })
    .unwrap();
    let w = k.symbol_element("w2").unwrap();
    assert_eq!(k.pow(&w, 3), k.embed(&f, &el(&f, "t")).unwrap());
    let y = el(&k, "w2^2 + t*w2 + 1");
    assert!(k.is_one(&k.mul(&y, &k.inv(&y).unwrap())));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(seed in any::<u64>(), which in 0usize..8) {
        let f = &towers()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let size = if f.depth() >= 3 { 1 } else { 2 };
        let a = f.random_element(&mut rng, size);
        let b = f.random_element(&mut rng, size);
        let c = f.random_element(&mut rng, size);
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        prop_assert!(f.is_zero(&f.add(&a, &a)));
        prop_assert_eq!(f.square(&f.add(&a, &b)), f.add(&f.square(&a), &f.square(&b)));
        if !f.is_zero(&a) {
            prop_assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())));
        }
    }

    #[test]
    fn frobenius_round_trip_and_sqrt(seed in any::<u64>(), which in 0usize..8) {
        let f = &towers()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = f.random_element(&mut rng, 2);
        let c = f.frobenius_decompose(&x);
        let basis = f.two_basis();
        let back = c.iter().zip(&basis).fold(f.zero(), |acc, (ci, b)| f.add(&acc, &f.mul(&f.square(ci), b)));
        prop_assert_eq!(&back, &x);
        prop_assert_eq!(f.sqrt_exact(&f.square(&x)), Some(x.clone()));
        let square = c[1..].iter().all(|ci| f.is_zero(ci));
        prop_assert_eq!(f.sqrt_exact(&x).is_some(), square);
    }
}
