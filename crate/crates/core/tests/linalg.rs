use involab::expr::parse_element;
use involab::linalg::semilinear_kernel;
use involab::{FieldElement, FieldTower, Matrix, Subspace, Vector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn el(f: &FieldTower, s: &str) -> FieldElement {
    parse_element(f, s).unwrap()
}

fn gf(q: usize) -> FieldTower {
    FieldTower::parse(&format!("GF({q})"), &[] as &[&str]).unwrap()
}

fn elements(f: &FieldTower) -> Vec<FieldElement> {
    match f.descriptor().as_str() {
        "GF(2)" => vec![el(f, "0"), el(f, "1")],
        _ => vec![el(f, "0"), el(f, "1"), el(f, "g"), el(f, "g+1")],
    }
}

/// Every vector of `F^n` for a finite `F`.
fn all_vectors(f: &FieldTower, n: usize) -> Vec<Vector> {
    let els = elements(f);
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| els.iter().map(move |e| [v.clone(), vec![e.clone()]].concat())).collect();
    }
    out
}

fn random_vectors(f: &FieldTower, rng: &mut ChaCha8Rng, count: usize, n: usize) -> Vec<Vector> {
    (0..count).map(|_| (0..n).map(|_| f.random_element(rng, 1)).collect()).collect()
}

/// The set of all linear combinations of `gens`, by enumeration.
fn enumerate_span(f: &FieldTower, gens: &[Vector], n: usize) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for coeffs in all_vectors(f, gens.len()) {
        let mut v = vec![f.zero(); n];
        for (c, g) in coeffs.iter().zip(gens) {
            for (vi, gi) in v.iter_mut().zip(g) {
                *vi = f.add(vi, &f.mul(c, gi));
            }
        }
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

#[test]
fn kernel_examples() {
    let f = FieldTower::rational(&["t"]).unwrap();
    assert_eq!(Matrix::identity(&f, 3).kernel().dim(), 0);
    let m = Matrix::from_rows(&f, vec![vec![el(&f, "1"), el(&f, "t")], vec![el(&f, "t"), el(&f, "t^2")]]).unwrap();
    let k = m.kernel();
    assert_eq!(k, Subspace::span(&f, 2, &[vec![el(&f, "t"), el(&f, "1")]]).unwrap());
}

#[test]
fn intersection_and_sum_examples() {
    let f = FieldTower::rational(&["t"]).unwrap();
    let u = Subspace::span(&f, 3, &[vec![f.one(), f.zero(), f.zero()]]).unwrap();
    let v = Subspace::span(&f, 3, &[vec![f.zero(), f.one(), f.zero()]]).unwrap();
    assert_eq!(u.intersection(&v).unwrap().dim(), 0);
    assert_eq!(u.sum(&v).unwrap().dim(), 2);
    assert_eq!(u.intersection(&u).unwrap(), u);
}

#[test]
fn semilinear_examples() {
    let f = FieldTower::rational(&["t"]).unwrap();
    let images = vec![vec![el(&f, "1")], vec![el(&f, "t")], vec![el(&f, "t^2")]];
    let k = semilinear_kernel(&f, &images).unwrap();
    let v = vec![el(&f, "t"), f.zero(), f.one()];
    assert_eq!(k, Subspace::span(&f, 3, std::slice::from_ref(&v)).unwrap());
    let back = f.add(&f.mul(&f.square(&v[0]), &images[0][0]), &f.mul(&f.square(&v[2]), &images[2][0]));
    assert!(f.is_zero(&back));
    let zero = vec![vec![f.zero(); 2]; 4];
    assert_eq!(semilinear_kernel(&f, &zero).unwrap().dim(), 4);
}

#[test]
fn solve_and_inverse_agree() {
    let f = FieldTower::rational(&["s", "t"]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let m = Matrix::from_rows(&f, random_vectors(&f, &mut rng, 3, 3)).unwrap();
    if m.rank() == 3 {
        let b = random_vectors(&f, &mut rng, 1, 3).remove(0);
        let x = m.solve(&b).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), b);
        assert_eq!(m.inverse().unwrap().mul_vec(&b).unwrap(), x);
    }
}

fn semilinear_holds(f: &FieldTower, images: &[Vector], v: &[FieldElement]) -> bool {
    let width = images.first().map_or(0, Vec::len);
    (0..width).all(|j| {
        let sum = v.iter().zip(images).fold(f.zero(), |acc, (vi, w)| f.add(&acc, &f.mul(&f.square(vi), &w[j])));
        f.is_zero(&sum)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rank_nullity_over_gf4(seed in any::<u64>()) {
        let f = gf(4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Matrix::from_rows(&f, random_vectors(&f, &mut rng, 6, 6)).unwrap();
        let k = m.kernel();
        prop_assert_eq!(m.rank() + k.dim(), 6);
        for v in k.basis() {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| f.is_zero(x)));
        }
    }

    #[test]
    fn modular_law_matches_enumeration(seed in any::<u64>(), n in 1usize..=8, a in 0usize..=4, b in 0usize..=4) {
        let f = gf(2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gu = random_vectors(&f, &mut rng, a, n);
        let gv = random_vectors(&f, &mut rng, b, n);
        let u = Subspace::span(&f, n, &gu).unwrap();
        let v = Subspace::span(&f, n, &gv).unwrap();
        let meet = u.intersection(&v).unwrap();
        let join = u.sum(&v).unwrap();
        prop_assert_eq!(join.dim() + meet.dim(), u.dim() + v.dim());
        let eu = enumerate_span(&f, &gu, n);
        let ev = enumerate_span(&f, &gv, n);
        let common = eu.iter().filter(|x| ev.contains(x)).count();
        prop_assert_eq!(common, 1usize << meet.dim());
        prop_assert_eq!(eu.len(), 1usize << u.dim());
    }

    #[test]
    fn semilinear_kernel_matches_enumeration(seed in any::<u64>(), q in prop::sample::select(vec![2usize, 4]), n in 1usize..=6, width in 1usize..=3) {
        let f = gf(q);
        let n = if q == 4 { n.min(5) } else { n };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let images = random_vectors(&f, &mut rng, n, width);
        let k = semilinear_kernel(&f, &images).unwrap();
        let brute: Vec<Vector> = all_vectors(&f, n).into_iter().filter(|v| semilinear_holds(&f, &images, v)).collect();
        prop_assert_eq!(brute.len(), q.pow(k.dim() as u32));
        prop_assert!(brute.iter().all(|v| k.contains(v)));
    }

    #[test]
    fn semilinear_certificate_over_function_fields(seed in any::<u64>(), n in 1usize..=4) {
        let f = FieldTower::rational(&["s", "t"]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let images = random_vectors(&f, &mut rng, n, 2);
        let k = semilinear_kernel(&f, &images).unwrap();
        for v in k.basis() {
            prop_assert!(semilinear_holds(&f, &images, v));
        }
    }

    #[test]
    fn echelon_form_is_canonical(seed in any::<u64>(), n in 1usize..=5, d in 1usize..=4) {
        let f = FieldTower::rational(&["t"]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = random_vectors(&f, &mut rng, d, n);
        let u = Subspace::span(&f, n, &gens).unwrap();
        // a second spanning set: random combinations plus the originals in reverse
        let mut other: Vec<Vector> = (0..d)
            .map(|_| {
                let c: Vec<FieldElement> = (0..d).map(|_| f.random_element(&mut rng, 1)).collect();
                (0..n).map(|j| c.iter().zip(&gens).fold(f.zero(), |acc, (ci, g)| f.add(&acc, &f.mul(ci, &g[j])))).collect()
            })
            .collect();
        other.extend(gens.iter().rev().cloned());
        prop_assert_eq!(Subspace::span(&f, n, &other).unwrap(), u.clone());
        let scale = rng.gen_range(1..=3);
        let scaled: Vec<Vector> = gens.iter().map(|g| g.iter().map(|x| f.mul(x, &el(&f, &format!("t^{scale}+1")))).collect()).collect();
        prop_assert_eq!(Subspace::span(&f, n, &scaled).unwrap(), u);
    }
}
