//! Dense univariate polynomials over a [`FieldTower`], as coefficient vectors
//! in increasing degree with no trailing zeros.

use super::{FieldElement, FieldTower};
use crate::error::{Error, Result};

pub type Poly = Vec<FieldElement>;

pub fn trim(f: &FieldTower, p: &mut Poly) {
    while p.last().is_some_and(|c| f.is_zero(c)) {
        p.pop();
    }
}

pub fn degree(p: &[FieldElement]) -> Option<usize> {
    p.len().checked_sub(1)
}

pub fn constant(f: &FieldTower, c: FieldElement) -> Poly {
    if f.is_zero(&c) {
        Vec::new()
    } else {
        vec![c]
    }
}

pub fn is_one(f: &FieldTower, p: &[FieldElement]) -> bool {
    p.len() == 1 && p[0] == *f.one_ref()
}

pub fn add(f: &FieldTower, a: &[FieldElement], b: &[FieldElement]) -> Poly {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out: Poly = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o = f.add(o, s);
    }
    trim(f, &mut out);
    out
}

pub fn scale(f: &FieldTower, a: &[FieldElement], c: &FieldElement) -> Poly {
    if f.is_zero(c) {
        return Vec::new();
    }
    a.iter().map(|x| f.mul(x, c)).collect()
}

pub fn mul(f: &FieldTower, a: &[FieldElement], b: &[FieldElement]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if f.is_zero(y) {
                continue;
            }
            let prod = f.mul(x, y);
            out[i + j] = f.add(&out[i + j], &prod);
        }
    }
    trim(f, &mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(f: &FieldTower, a: &[FieldElement], b: &[FieldElement]) -> (Poly, Poly) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut rem: Poly = a.to_vec();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = f.inv(b.last().unwrap()).expect("leading coefficient is nonzero");
    let monic = is_one(f, &b[b.len() - 1..]);
    let mut quot = vec![f.zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let lead = rem.last().unwrap();
        let c = if monic { lead.clone() } else { f.mul(lead, &lead_inv) };
        for (i, bc) in b.iter().enumerate() {
            if f.is_zero(bc) {
                continue;
            }
            let t = f.mul(&c, bc);
            rem[shift + i] = f.add(&rem[shift + i], &t);
        }
        quot[shift] = c;
        trim(f, &mut rem);
    }
    trim(f, &mut quot);
    (quot, rem)
}

pub fn rem(f: &FieldTower, a: &[FieldElement], b: &[FieldElement]) -> Poly {
    divrem(f, a, b).1
}

/// Scales to a monic polynomial; returns the leading coefficient that was divided out.
pub fn make_monic(f: &FieldTower, p: &mut Poly) -> Option<FieldElement> {
    let lead = p.last()?.clone();
    if lead != *f.one_ref() {
        let inv = f.inv(&lead).expect("nonzero leading coefficient");
        for c in p.iter_mut() {
            *c = f.mul(c, &inv);
        }
    }
    Some(lead)
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(f: &FieldTower, a: &[FieldElement], b: &[FieldElement]) -> Poly {
    let mut x: Poly = a.to_vec();
    let mut y: Poly = b.to_vec();
    make_monic(f, &mut y);
    while !y.is_empty() {
        let mut r = rem(f, &x, &y);
        make_monic(f, &mut r);
        x = y;
        y = r;
    }
    make_monic(f, &mut x);
    x
}

/// Inverse of `a` modulo the monic polynomial `m`.
pub fn inverse_mod(f: &FieldTower, a: &[FieldElement], m: &[FieldElement]) -> Result<Poly> {
    if a.is_empty() {
        return Err(Error::DivisionByZero);
    }
    // invariant: s_i * a = r_i (mod m)
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![f.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s = add(f, &s0, &mul(f, &q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return Err(Error::ReducibleModulus);
    }
    let c = f.inv(&r0[0])?;
    Ok(rem(f, &scale(f, &s0, &c), m))
}

pub fn derivative(f: &FieldTower, p: &[FieldElement]) -> Poly {
    let mut out: Poly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| if i % 2 == 1 { c.clone() } else { f.zero() })
        .collect();
    trim(f, &mut out);
    out
}

/// `base^e mod m`.
pub fn pow_mod(f: &FieldTower, base: &[FieldElement], mut e: usize, m: &[FieldElement]) -> Poly {
    let mut acc = rem(f, &[f.one()], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(f, &mul(f, &acc, &b), m);
        }
        b = rem(f, &mul(f, &b, &b), m);
        e >>= 1;
    }
    acc
}
