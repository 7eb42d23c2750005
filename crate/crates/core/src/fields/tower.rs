use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::poly::{self, Poly};
use super::{BaseField, FieldElement, RationalFunction};
use crate::error::{Error, Result};

const MAX_ALGEBRAIC_DEGREE: usize = 16;
const MAX_RATIONAL_VARIABLES: usize = 3;

/// One step of a field tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Layer {
    /// Purely transcendental: `M(t)`.
    Rational { name: String },
    /// `M(w)` with `w^2 + w = delta`, `delta` not of the form `e^2 + e` in `M`.
    ArtinSchreier { delta: FieldElement },
    /// `M[x]/(f)` for a monic irreducible `f` of odd degree; coefficients low to high.
    OddSeparable { min_poly: Vec<FieldElement> },
    /// `M(r)` with `r^2 = radicand`, where the radicand is a 2-basis generator of `M`.
    InseparableQuadratic { radicand: FieldElement },
}

impl Layer {
    pub fn is_separable(&self) -> bool {
        !matches!(self, Layer::InseparableQuadratic { .. })
    }

    /// Degree over the layer below, `None` for rational layers.
    pub fn degree(&self) -> Option<usize> {
        match self {
            Layer::Rational { .. } => None,
            Layer::ArtinSchreier { .. } | Layer::InseparableQuadratic { .. } => Some(2),
            Layer::OddSeparable { min_poly } => Some(min_poly.len() - 1),
        }
    }
}

/// An exact field of characteristic 2: a finite base field followed by a
/// sequence of layers. Cheap to clone; immutable once built.
#[derive(Clone)]
pub struct FieldTower(Arc<Node>);

struct Node {
    base: BaseField,
    top: Option<Top>,
    depth: usize,
    zero: FieldElement,
    one: FieldElement,
    /// Generators of the 2-basis, as elements of this field, with display names.
    generators: Vec<(FieldElement, String)>,
    /// Bit masks over `generators` in degree-lexicographic order.
    basis_order: Vec<usize>,
    algebraic_degree: usize,
    rational_vars: usize,
}

struct Top {
    parent: FieldTower,
    layer: Layer,
    symbol: String,
    /// Monic defining polynomial over the parent; empty for rational layers.
    modulus: Poly,
    /// Odd layers: rows of the matrix taking power-basis coordinates to
    /// coordinates in the basis `1, w^2, w^4, ...`.
    square_basis: Vec<Vec<FieldElement>>,
    /// Inseparable layers: index of the replaced generator.
    radicand_index: usize,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldTower({})", self.descriptor())
    }
}

impl fmt::Display for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.0.base != other.0.base || self.0.depth != other.0.depth {
            return false;
        }
        match (&self.0.top, &other.0.top) {
            (None, None) => true,
            (Some(a), Some(b)) => a.layer == b.layer && a.symbol == b.symbol && a.parent == b.parent,
            _ => false,
        }
    }
}

impl Eq for FieldTower {}

impl FieldTower {
    pub fn finite(base: BaseField) -> Self {
        FieldTower(Arc::new(Node {
            base,
            top: None,
            depth: 0,
            zero: FieldElement::Base(0),
            one: FieldElement::Base(1),
            generators: Vec::new(),
            basis_order: vec![0],
            algebraic_degree: 1,
            rational_vars: 0,
        }))
    }

    /// GF(2).
    pub fn gf2() -> Self {
        Self::finite(BaseField::new(1).unwrap())
    }

    /// Convenience: GF(2)(v_1)...(v_n).
    pub fn rational(names: &[&str]) -> Result<Self> {
        let mut f = Self::gf2();
        for name in names {
            f = f.extend(Layer::Rational { name: name.to_string() })?;
        }
        Ok(f)
    }

    /// Adds a layer, naming the adjoined root `w<k>` (separable) or `r<k>`
    /// (inseparable) where `k` is the new depth.
    pub fn extend(&self, layer: Layer) -> Result<Self> {
        let name = match &layer {
            Layer::Rational { name } => name.clone(),
            Layer::InseparableQuadratic { .. } => format!("r{}", self.depth() + 1),
            _ => format!("w{}", self.depth() + 1),
        };
        self.extend_named(layer, &name)
    }

    pub fn extend_named(&self, layer: Layer, symbol: &str) -> Result<Self> {
        self.check_symbol(symbol)?;
        let parent = self.clone();
        let node = &self.0;
        let mut algebraic_degree = node.algebraic_degree;
        let mut rational_vars = node.rational_vars;
        let mut modulus = Vec::new();
        let mut square_basis = Vec::new();
        let mut radicand_index = 0;
        match &layer {
            Layer::Rational { name } => {
                if name != symbol {
                    return Err(Error::InvalidLayer("rational layer name must match its symbol".into()));
                }
                rational_vars += 1;
                if rational_vars > MAX_RATIONAL_VARIABLES {
                    return Err(Error::InvalidLayer(format!(
                        "at most {MAX_RATIONAL_VARIABLES} rational variables are supported"
                    )));
                }
            }
            Layer::ArtinSchreier { delta } => {
                if self.is_artin_schreier_image(delta)? {
                    return Err(Error::InvalidLayer(format!(
                        "delta = {} is of the form e^2 + e; the extension would not be a field",
                        self.format(delta)
                    )));
                }
                modulus = vec![delta.clone(), self.one(), self.one()];
                algebraic_degree *= 2;
            }
            Layer::OddSeparable { min_poly } => {
                self.validate_odd_polynomial(min_poly)?;
                modulus = min_poly.clone();
                algebraic_degree *= min_poly.len() - 1;
            }
            Layer::InseparableQuadratic { radicand } => {
                radicand_index = node
                    .generators
                    .iter()
                    .position(|(g, _)| g == radicand)
                    .ok_or_else(|| {
                        Error::InvalidLayer(format!(
                            "{} is not a 2-basis generator of {}",
                            self.format(radicand),
                            self.descriptor()
                        ))
                    })?;
                modulus = vec![radicand.clone(), self.zero(), self.one()];
                algebraic_degree *= 2;
            }
        }
        if algebraic_degree > MAX_ALGEBRAIC_DEGREE {
            return Err(Error::InvalidLayer(format!(
                "total algebraic degree {algebraic_degree} exceeds {MAX_ALGEBRAIC_DEGREE}"
            )));
        }
        if let Layer::OddSeparable { .. } = &layer {
            square_basis = self.square_basis_change(&modulus)?;
        }

        let (zero, one, root) = match &layer {
            Layer::Rational { .. } => {
                let frac = |num: Poly| {
                    FieldElement::Frac(Box::new(RationalFunction { num, den: vec![self.one()] }))
                };
                (frac(Vec::new()), frac(vec![self.one()]), frac(vec![self.zero(), self.one()]))
            }
            _ => {
                let d = modulus.len() - 1;
                let unit = |k: usize| {
                    let mut c = vec![self.zero(); d];
                    c[k] = self.one();
                    FieldElement::Alg(c)
                };
                (FieldElement::Alg(vec![self.zero(); d]), unit(0), unit(1))
            }
        };
        let lift = |x: &FieldElement| -> FieldElement {
            match &layer {
                Layer::Rational { .. } => FieldElement::Frac(Box::new(RationalFunction {
                    num: poly::constant(self, x.clone()),
                    den: vec![self.one()],
                })),
                _ => {
                    let mut c = vec![self.zero(); modulus.len() - 1];
                    c[0] = x.clone();
                    FieldElement::Alg(c)
                }
            }
        };
        let mut generators: Vec<(FieldElement, String)> =
            node.generators.iter().map(|(g, n)| (lift(g), n.clone())).collect();
        match &layer {
            Layer::Rational { .. } => generators.push((root.clone(), symbol.to_string())),
            Layer::InseparableQuadratic { .. } => {
                generators[radicand_index] = (root.clone(), symbol.to_string());
            }
            _ => {}
        }
        let basis_order = degree_lex_masks(generators.len());

        Ok(FieldTower(Arc::new(Node {
            base: node.base,
            top: Some(Top {
                parent,
                layer,
                symbol: symbol.to_string(),
                modulus,
                square_basis,
                radicand_index,
            }),
            depth: node.depth + 1,
            zero,
            one,
            generators,
            basis_order,
            algebraic_degree,
            rational_vars,
        })))
    }

    fn check_symbol(&self, symbol: &str) -> Result<()> {
        let valid = symbol.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && symbol.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(Error::InvalidLayer(format!("`{symbol}` is not a valid identifier")));
        }
        if symbol == "g" || symbol == "x" {
            return Err(Error::InvalidLayer(format!("`{symbol}` is reserved")));
        }
        if self.symbol_element(symbol).is_some() {
            return Err(Error::InvalidLayer(format!("symbol `{symbol}` is already in use")));
        }
        Ok(())
    }

    fn validate_odd_polynomial(&self, f: &[FieldElement]) -> Result<()> {
        let deg = f.len().saturating_sub(1);
        if f.last() != Some(self.one_ref()) {
            return Err(Error::InvalidLayer("minimal polynomial must be monic".into()));
        }
        if deg < 3 || deg.is_multiple_of(2) {
            return Err(Error::InvalidLayer(format!(
                "minimal polynomial must have odd degree at least 3, got {deg}"
            )));
        }
        if poly::derivative(self, f).is_empty() {
            return Err(Error::InvalidLayer("minimal polynomial has zero derivative".into()));
        }
        if let Some(consts) = f.iter().map(|c| self.as_base_constant(c)).collect::<Option<Vec<u8>>>() {
            if !rabin_irreducible(self.0.base, &consts) {
                return Err(Error::InvalidLayer(format!(
                    "minimal polynomial is reducible over {}",
                    self.0.base.name()
                )));
            }
        }
        Ok(())
    }

    /// Rows of the inverse of the matrix whose columns are `w^(2l) mod f`.
    fn square_basis_change(&self, modulus: &[FieldElement]) -> Result<Vec<Vec<FieldElement>>> {
        let d = modulus.len() - 1;
        let mut columns = Vec::with_capacity(d);
        for l in 0..d {
            let mut monomial = vec![self.zero(); 2 * l + 1];
            monomial[2 * l] = self.one();
            let mut c = poly::rem(self, &monomial, modulus);
            c.resize(d, self.zero());
            columns.push(c);
        }
        let rows: Vec<Vec<FieldElement>> =
            (0..d).map(|i| (0..d).map(|j| columns[j][i].clone()).collect()).collect();
        invert_square(self, rows)
    }

    // ----- structure -----------------------------------------------------

    pub fn base(&self) -> BaseField {
        self.0.base
    }

    pub fn depth(&self) -> usize {
        self.0.depth
    }

    pub fn parent(&self) -> Option<&FieldTower> {
        self.0.top.as_ref().map(|t| &t.parent)
    }

    pub fn top_layer(&self) -> Option<&Layer> {
        self.0.top.as_ref().map(|t| &t.layer)
    }

    /// Layers from the bottom up.
    pub fn layers(&self) -> Vec<Layer> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Some(top) = &cur.0.top {
            out.push(top.layer.clone());
            cur = &top.parent;
        }
        out.reverse();
        out
    }

    /// Ancestor at the given depth (0 is the base field).
    pub fn ancestor(&self, depth: usize) -> Option<&FieldTower> {
        let mut cur = self;
        while cur.depth() > depth {
            cur = cur.parent()?;
        }
        (cur.depth() == depth).then_some(cur)
    }

    /// Whether `self` is obtained from `other` by adding layers (or equals it).
    pub fn is_extension_of(&self, other: &FieldTower) -> bool {
        self.ancestor(other.depth()).is_some_and(|a| a == other)
    }

    /// Whether every layer between `other` and `self` is separable.
    pub fn is_separable_over(&self, other: &FieldTower) -> bool {
        if !self.is_extension_of(other) {
            return false;
        }
        let mut cur = self;
        while cur.depth() > other.depth() {
            let top = cur.0.top.as_ref().unwrap();
            if !top.layer.is_separable() {
                return false;
            }
            cur = &top.parent;
        }
        true
    }

    /// Degree of `self` over the ancestor `other`, `None` if transcendental
    /// layers intervene.
    pub fn degree_over(&self, other: &FieldTower) -> Option<usize> {
        if !self.is_extension_of(other) {
            return None;
        }
        let mut cur = self;
        let mut d = 1;
        while cur.depth() > other.depth() {
            let top = cur.0.top.as_ref().unwrap();
            d *= top.layer.degree()?;
            cur = &top.parent;
        }
        Some(d)
    }

    /// True when there are no layers, i.e. the field is one of the finite base fields.
    pub fn is_finite_base(&self) -> bool {
        self.0.top.is_none()
    }

    pub fn algebraic_degree(&self) -> usize {
        self.0.algebraic_degree
    }

    pub fn symbol(&self) -> Option<&str> {
        self.0.top.as_ref().map(|t| t.symbol.as_str())
    }

    /// Canonical text description, e.g. `GF(2); rat:t; as:t`.
    pub fn descriptor(&self) -> String {
        let mut parts = vec![self.0.base.name()];
        let mut chain = Vec::new();
        let mut cur = self;
        while let Some(top) = &cur.0.top {
            chain.push(top);
            cur = &top.parent;
        }
        for top in chain.into_iter().rev() {
            let p = &top.parent;
            parts.push(match &top.layer {
                Layer::Rational { name } => format!("rat:{name}"),
                Layer::ArtinSchreier { delta } => format!("as:{}", p.format(delta)),
                Layer::OddSeparable { min_poly } => {
                    format!("odd:{}", format_poly(p, min_poly, "x"))
                }
                Layer::InseparableQuadratic { radicand } => format!("insep:{}", p.format(radicand)),
            });
        }
        parts.join("; ")
    }

    /// Element named by a symbol of the tower (`g` for the base generator).
    pub fn symbol_element(&self, name: &str) -> Option<FieldElement> {
        if name == "g" && self.0.base.degree() > 1 {
            return Some(self.embed_base(0b10));
        }
        let top = self.0.top.as_ref()?;
        if top.symbol == name {
            return Some(self.generator_root());
        }
        top.parent.symbol_element(name).map(|x| self.lift(&x))
    }

    /// All symbols usable in expressions, bottom up.
    pub fn symbols(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Some(top) = &cur.0.top {
            out.push(top.symbol.clone());
            cur = &top.parent;
        }
        out.reverse();
        out
    }

    fn generator_root(&self) -> FieldElement {
        let top = self.0.top.as_ref().expect("layer");
        let p = &top.parent;
        match top.layer {
            Layer::Rational { .. } => FieldElement::Frac(Box::new(RationalFunction {
                num: vec![p.zero(), p.one()],
                den: vec![p.one()],
            })),
            _ => {
                let mut c = vec![p.zero(); top.modulus.len() - 1];
                c[1] = p.one();
                FieldElement::Alg(c)
            }
        }
    }

    // ----- elements --------------------------------------------------------

    pub fn zero(&self) -> FieldElement {
        self.0.zero.clone()
    }

    pub fn one(&self) -> FieldElement {
        self.0.one.clone()
    }

    pub(crate) fn one_ref(&self) -> &FieldElement {
        &self.0.one
    }

    pub fn is_zero(&self, x: &FieldElement) -> bool {
        match x {
            FieldElement::Base(a) => *a == 0,
            FieldElement::Frac(r) => r.num.is_empty(),
            FieldElement::Alg(c) => {
                let p = self.parent().expect("algebraic element needs a layer");
                c.iter().all(|e| p.is_zero(e))
            }
        }
    }

    pub fn is_one(&self, x: &FieldElement) -> bool {
        *x == self.0.one
    }

    /// Image of a base-field element given as bits.
    pub fn embed_base(&self, a: u8) -> FieldElement {
        match self.parent() {
            None => FieldElement::Base(a),
            Some(p) => self.lift(&p.embed_base(a)),
        }
    }

    /// Maps an element of the parent into this field.
    pub fn lift(&self, x: &FieldElement) -> FieldElement {
        let top = self.0.top.as_ref().expect("lift needs a layer");
        let p = &top.parent;
        match top.layer {
            Layer::Rational { .. } => FieldElement::Frac(Box::new(RationalFunction {
                num: poly::constant(p, x.clone()),
                den: vec![p.one()],
            })),
            _ => {
                let mut c = vec![p.zero(); top.modulus.len() - 1];
                c[0] = x.clone();
                FieldElement::Alg(c)
            }
        }
    }

    /// Embeds an element of the subfield `from` (an ancestor tower).
    pub fn embed(&self, from: &FieldTower, x: &FieldElement) -> Result<FieldElement> {
        if self.depth() == from.depth() {
            return if self == from {
                Ok(x.clone())
            } else {
                Err(Error::TowerMismatch(format!("{} does not extend {}", self, from)))
            };
        }
        match self.parent() {
            Some(p) if self.depth() > from.depth() => Ok(self.lift(&p.embed(from, x)?)),
            _ => Err(Error::TowerMismatch(format!("{} does not extend {}", self, from))),
        }
    }

    /// If `x` lies in the finite base field, its bits.
    pub fn as_base_constant(&self, x: &FieldElement) -> Option<u8> {
        match x {
            FieldElement::Base(a) => Some(*a),
            FieldElement::Frac(r) => {
                let p = self.parent()?;
                match (r.num.len(), poly::is_one(p, &r.den)) {
                    (0, _) => Some(0),
                    (1, true) => p.as_base_constant(&r.num[0]),
                    _ => None,
                }
            }
            FieldElement::Alg(c) => {
                let p = self.parent()?;
                if c[1..].iter().all(|e| p.is_zero(e)) {
                    p.as_base_constant(&c[0])
                } else {
                    None
                }
            }
        }
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        match (x, y) {
            (FieldElement::Base(a), FieldElement::Base(b)) => FieldElement::Base(a ^ b),
            (FieldElement::Frac(a), FieldElement::Frac(b)) => {
                let p = self.parent().unwrap();
                if a.num.is_empty() {
                    return y.clone();
                }
                if b.num.is_empty() {
                    return x.clone();
                }
                if a.den == b.den {
                    let num = poly::add(p, &a.num, &b.num);
                    self.fraction(num, a.den.clone())
                } else {
                    // Henrici: only the common factor of the denominators can cancel
                    let g = poly::gcd(p, &a.den, &b.den);
                    if g.len() == 1 {
                        let num = poly::add(p, &poly::mul(p, &a.num, &b.den), &poly::mul(p, &b.num, &a.den));
                        if num.is_empty() {
                            return self.zero();
                        }
                        return FieldElement::Frac(Box::new(RationalFunction {
                            num,
                            den: poly::mul(p, &a.den, &b.den),
                        }));
                    }
                    let d1 = poly::divrem(p, &a.den, &g).0;
                    let d2 = poly::divrem(p, &b.den, &g).0;
                    let num = poly::add(p, &poly::mul(p, &a.num, &d2), &poly::mul(p, &b.num, &d1));
                    self.fraction(num, poly::mul(p, &poly::mul(p, &d1, &d2), &g))
                }
            }
            (FieldElement::Alg(a), FieldElement::Alg(b)) => {
                let p = self.parent().unwrap();
                FieldElement::Alg(a.iter().zip(b).map(|(s, t)| p.add(s, t)).collect())
            }
            _ => panic!("mismatched field element representations"),
        }
    }

    /// Same as [`add`](Self::add): the characteristic is 2.
    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.add(x, y)
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        match (x, y) {
            (FieldElement::Base(a), FieldElement::Base(b)) => FieldElement::Base(self.0.base.mul(*a, *b)),
            (FieldElement::Frac(a), FieldElement::Frac(b)) => {
                let p = self.parent().unwrap();
                if a.num.is_empty() || b.num.is_empty() {
                    return self.zero();
                }
                if poly::is_one(p, &a.den) && poly::is_one(p, &b.den) {
                    return FieldElement::Frac(Box::new(RationalFunction {
                        num: poly::mul(p, &a.num, &b.num),
                        den: a.den.clone(),
                    }));
                }
                let g1 = poly::gcd(p, &a.num, &b.den);
                let g2 = poly::gcd(p, &b.num, &a.den);
                let n1 = poly::divrem(p, &a.num, &g1).0;
                let d2 = poly::divrem(p, &b.den, &g1).0;
                let n2 = poly::divrem(p, &b.num, &g2).0;
                let d1 = poly::divrem(p, &a.den, &g2).0;
                FieldElement::Frac(Box::new(RationalFunction {
                    num: poly::mul(p, &n1, &n2),
                    den: poly::mul(p, &d1, &d2),
                }))
            }
            (FieldElement::Alg(a), FieldElement::Alg(b)) => {
                let top = self.0.top.as_ref().unwrap();
                let p = &top.parent;
                let mut a = a.clone();
                let mut b = b.clone();
                poly::trim(p, &mut a);
                poly::trim(p, &mut b);
                let mut c = poly::rem(p, &poly::mul(p, &a, &b), &top.modulus);
                c.resize(top.modulus.len() - 1, p.zero());
                FieldElement::Alg(c)
            }
            _ => panic!("mismatched field element representations"),
        }
    }

    pub fn square(&self, x: &FieldElement) -> FieldElement {
        self.mul(x, x)
    }

    pub fn pow(&self, x: &FieldElement, mut e: usize) -> FieldElement {
        let mut acc = self.one();
        let mut b = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement> {
        if self.is_zero(x) {
            return Err(Error::DivisionByZero);
        }
        match x {
            FieldElement::Base(a) => Ok(FieldElement::Base(self.0.base.inv(*a).unwrap())),
            FieldElement::Frac(r) => {
                let p = self.parent().unwrap();
                let mut den = r.num.clone();
                let lead = poly::make_monic(p, &mut den).unwrap();
                let num = poly::scale(p, &r.den, &p.inv(&lead)?);
                Ok(FieldElement::Frac(Box::new(RationalFunction { num, den })))
            }
            FieldElement::Alg(c) => {
                let top = self.0.top.as_ref().unwrap();
                let p = &top.parent;
                match &top.layer {
                    Layer::ArtinSchreier { delta } => {
                        // (u + v w)(u + v + v w) = u^2 + u v + delta v^2
                        let (u, v) = (&c[0], &c[1]);
                        let norm = p.add(&p.mul(u, &p.add(u, v)), &p.mul(delta, &p.square(v)));
                        let n_inv = p.inv(&norm)?;
                        return Ok(FieldElement::Alg(vec![p.mul(&p.add(u, v), &n_inv), p.mul(v, &n_inv)]));
                    }
                    Layer::InseparableQuadratic { radicand } => {
                        // (u + v r)^2 = u^2 + v^2 g lies in the parent
                        let (u, v) = (&c[0], &c[1]);
                        let norm = p.add(&p.square(u), &p.mul(radicand, &p.square(v)));
                        let n_inv = p.inv(&norm)?;
                        return Ok(FieldElement::Alg(vec![p.mul(u, &n_inv), p.mul(v, &n_inv)]));
                    }
                    _ => {}
                }
                let mut a = c.clone();
                poly::trim(p, &mut a);
                let mut inv = poly::inverse_mod(p, &a, &top.modulus)?;
                inv.resize(top.modulus.len() - 1, p.zero());
                Ok(FieldElement::Alg(inv))
            }
        }
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    /// Builds a reduced fraction with monic denominator in a rational layer.
    fn fraction(&self, mut num: Poly, mut den: Poly) -> FieldElement {
        let p = self.parent().unwrap();
        if num.is_empty() {
            return self.zero();
        }
        if den.len() == 1 {
            if !p.is_one(&den[0]) {
                num = poly::scale(p, &num, &p.inv(&den[0]).unwrap());
            }
            return FieldElement::Frac(Box::new(RationalFunction { num, den: vec![p.one()] }));
        }
        let g = poly::gcd(p, &num, &den);
        if g.len() > 1 {
            num = poly::divrem(p, &num, &g).0;
            den = poly::divrem(p, &den, &g).0;
        }
        let lead = poly::make_monic(p, &mut den).unwrap();
        if !p.is_one(&lead) {
            num = poly::scale(p, &num, &p.inv(&lead).unwrap());
        }
        FieldElement::Frac(Box::new(RationalFunction { num, den }))
    }

    /// `num / den` in a rational layer, for polynomials over the parent.
    pub fn from_polynomials(&self, num: &[FieldElement], den: &[FieldElement]) -> Result<FieldElement> {
        match self.top_layer() {
            Some(Layer::Rational { .. }) => {}
            _ => return Err(Error::Precondition("top layer is not rational".into())),
        }
        let p = self.parent().unwrap();
        let mut num = num.to_vec();
        let mut den = den.to_vec();
        poly::trim(p, &mut num);
        poly::trim(p, &mut den);
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.fraction(num, den))
    }

    // ----- 2-basis and Frobenius ------------------------------------------

    /// Number of 2-basis generators; the 2-basis has `2^n` elements.
    pub fn two_basis_rank(&self) -> usize {
        self.0.generators.len()
    }

    /// Number of 2-basis elements, `2^rank`.
    pub fn two_basis_len(&self) -> usize {
        1 << self.0.generators.len()
    }

    /// The monomial 2-basis `b_j`, degree-lexicographic, `b_0 = 1`.
    pub fn two_basis(&self) -> Vec<FieldElement> {
        self.0.basis_order.iter().map(|&m| self.monomial(m)).collect()
    }

    pub fn two_basis_names(&self) -> Vec<String> {
        self.0
            .basis_order
            .iter()
            .map(|&m| {
                let names: Vec<&str> = (0..self.0.generators.len())
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| self.0.generators[i].1.as_str())
                    .collect();
                if names.is_empty() {
                    "1".to_string()
                } else {
                    names.join("*")
                }
            })
            .collect()
    }

    /// The generators whose square-free products form the 2-basis.
    pub fn two_basis_generators(&self) -> Vec<FieldElement> {
        self.0.generators.iter().map(|(g, _)| g.clone()).collect()
    }

    fn monomial(&self, mask: usize) -> FieldElement {
        let mut acc = self.one();
        for (i, (g, _)) in self.0.generators.iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc = self.mul(&acc, g);
            }
        }
        acc
    }

    /// Coefficients `c_j` with `x = sum c_j^2 b_j` over [`two_basis`](Self::two_basis).
    pub fn frobenius_decompose(&self, x: &FieldElement) -> Vec<FieldElement> {
        let by_mask = self.decompose_masks(x);
        self.0.basis_order.iter().map(|&m| by_mask[m].clone()).collect()
    }

    /// Decomposition indexed by generator bit mask.
    fn decompose_masks(&self, x: &FieldElement) -> Vec<FieldElement> {
        let Some(top) = &self.0.top else {
            let FieldElement::Base(a) = x else { panic!("expected a base element") };
            return vec![FieldElement::Base(self.0.base.sqrt(*a))];
        };
        let p = &top.parent;
        let lower = 1usize << p.two_basis_rank();
        match (&top.layer, x) {
            (Layer::Rational { .. }, FieldElement::Frac(r)) => {
                let mut out = vec![self.zero(); 2 * lower];
                if r.num.is_empty() {
                    return out;
                }
                let product = poly::mul(p, &r.num, &r.den);
                let coeffs: Vec<Vec<FieldElement>> =
                    product.iter().map(|a| p.decompose_masks(a)).collect();
                for m in 0..lower {
                    let mut even: Poly = Vec::new();
                    let mut odd: Poly = Vec::new();
                    for (k, c) in coeffs.iter().enumerate() {
                        if k % 2 == 0 {
                            even.push(c[m].clone());
                        } else {
                            odd.push(c[m].clone());
                        }
                    }
                    poly::trim(p, &mut even);
                    poly::trim(p, &mut odd);
                    out[m] = self.fraction(even, r.den.clone());
                    out[m | lower] = self.fraction(odd, r.den.clone());
                }
                out
            }
            (Layer::ArtinSchreier { delta }, FieldElement::Alg(c)) => {
                let v = p.decompose_masks(&c[1]);
                let u = p.decompose_masks(&p.add(&c[0], &p.mul(delta, &c[1])));
                u.into_iter()
                    .zip(v)
                    .map(|(a, b)| FieldElement::Alg(vec![a, b]))
                    .collect()
            }
            (Layer::OddSeparable { .. }, FieldElement::Alg(c)) => {
                let d = c.len();
                let parts: Vec<Vec<FieldElement>> = top
                    .square_basis
                    .iter()
                    .map(|row| {
                        let a = row
                            .iter()
                            .zip(c)
                            .fold(p.zero(), |acc, (r, x)| p.add(&acc, &p.mul(r, x)));
                        p.decompose_masks(&a)
                    })
                    .collect();
                (0..lower)
                    .map(|m| FieldElement::Alg((0..d).map(|l| parts[l][m].clone()).collect()))
                    .collect()
            }
            (Layer::InseparableQuadratic { .. }, FieldElement::Alg(c)) => {
                let bit = 1usize << top.radicand_index;
                let u = p.decompose_masks(&c[0]);
                let v = p.decompose_masks(&c[1]);
                let mut out = vec![self.zero(); lower];
                for m in (0..lower).filter(|m| m & bit == 0) {
                    out[m] = FieldElement::Alg(vec![u[m].clone(), u[m | bit].clone()]);
                    out[m | bit] = FieldElement::Alg(vec![v[m].clone(), v[m | bit].clone()]);
                }
                out
            }
            _ => panic!("element does not belong to this tower"),
        }
    }

    /// `Some(y)` with `y^2 = x` when `x` is a square.
    pub fn sqrt_exact(&self, x: &FieldElement) -> Option<FieldElement> {
        let mut parts = self.decompose_masks(x);
        if parts[1..].iter().all(|c| self.is_zero(c)) {
            Some(parts.swap_remove(0))
        } else {
            None
        }
    }

    /// Whether `delta = e^2 + e` for some `e` in this field.
    ///
    /// Exact for finite fields, polynomials and fractions with non-square
    /// denominators in rational layers, and for elements of a subfield in
    /// algebraic layers; other inputs return [`Error::Undecidable`].
    pub fn is_artin_schreier_image(&self, delta: &FieldElement) -> Result<bool> {
        let Some(top) = &self.0.top else {
            let FieldElement::Base(a) = delta else { unreachable!() };
            return Ok(self.0.base.trace(*a) == 0);
        };
        let p = &top.parent;
        let undecidable = || {
            Error::Undecidable(format!(
                "cannot certify whether {} is of the form e^2 + e in {}",
                self.format(delta),
                self.descriptor()
            ))
        };
        match (&top.layer, delta) {
            (Layer::Rational { .. }, FieldElement::Frac(r)) => {
                if poly::is_one(p, &r.den) {
                    return polynomial_in_as_image(p, r.num.clone());
                }
                // reduced images e^2 + e = (a^2 + ab)/b^2 have square denominators
                let den_is_square = r.den.iter().enumerate().all(|(i, c)| {
                    if i % 2 == 1 {
                        p.is_zero(c)
                    } else {
                        p.sqrt_exact(c).is_some()
                    }
                });
                if den_is_square {
                    Err(undecidable())
                } else {
                    Ok(false)
                }
            }
            (Layer::ArtinSchreier { delta: lower }, FieldElement::Alg(c)) => {
                if !p.is_zero(&c[1]) {
                    return Err(undecidable());
                }
                Ok(p.is_artin_schreier_image(&c[0])?
                    || p.is_artin_schreier_image(&p.add(&c[0], lower))?)
            }
            (Layer::OddSeparable { .. }, FieldElement::Alg(c)) => {
                if c[1..].iter().any(|e| !p.is_zero(e)) {
                    return Err(undecidable());
                }
                p.is_artin_schreier_image(&c[0])
            }
            (Layer::InseparableQuadratic { radicand }, FieldElement::Alg(c)) => {
                // (a + b r)^2 + (a + b r) = (a^2 + a + b^2 g) + b r forces b = c[1]
                let shifted = p.add(&c[0], &p.mul(&p.square(&c[1]), radicand));
                p.is_artin_schreier_image(&shifted)
            }
            _ => panic!("element does not belong to this tower"),
        }
    }

    // ----- display -----------------------------------------------------

    pub fn format(&self, x: &FieldElement) -> String {
        match (&self.0.top, x) {
            (None, FieldElement::Base(a)) => self.0.base.format(*a),
            (Some(top), FieldElement::Frac(r)) => {
                let num = format_poly(&top.parent, &r.num, &top.symbol);
                if poly::is_one(&top.parent, &r.den) {
                    return num;
                }
                let den = format_poly(&top.parent, &r.den, &top.symbol);
                let num = if num.contains('+') || num.contains('/') { format!("({num})") } else { num };
                let den = if den.contains(['+', '/', '*']) { format!("({den})") } else { den };
                format!("{num}/{den}")
            }
            (Some(top), FieldElement::Alg(c)) => format_poly(&top.parent, c, &top.symbol),
            _ => panic!("element does not belong to this tower"),
        }
    }

    // ----- sampling -----------------------------------------------------

    /// A random element whose size grows with `size` (degrees of numerators,
    /// denominators and nested coefficients are bounded by it).
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, size: usize) -> FieldElement {
        let Some(top) = &self.0.top else {
            return FieldElement::Base(rng.gen_range(0..self.0.base.order()) as u8);
        };
        let p = &top.parent;
        let inner = size.saturating_sub(1).max(1);
        match top.layer {
            Layer::Rational { .. } => {
                let deg = rng.gen_range(0..=size);
                let num: Poly = (0..=deg).map(|_| p.random_element(rng, inner)).collect();
                let den: Poly = if size > 0 && rng.gen_bool(0.3) {
                    let d = rng.gen_range(1..=size);
                    let mut den: Poly = (0..d).map(|_| p.random_element(rng, inner)).collect();
                    den.push(p.one());
                    den
                } else {
                    vec![p.one()]
                };
                let mut num = num;
                poly::trim(p, &mut num);
                self.fraction(num, den)
            }
            _ => FieldElement::Alg(
                (0..top.modulus.len() - 1).map(|_| p.random_element(rng, inner)).collect(),
            ),
        }
    }
}

fn polynomial_in_as_image(p: &FieldTower, mut poly_delta: Poly) -> Result<bool> {
    // any e with e^2 + e polynomial is itself a polynomial of half the degree
    loop {
        poly::trim(p, &mut poly_delta);
        let Some(deg) = poly::degree(&poly_delta) else { return Ok(true) };
        if deg == 0 {
            return p.is_artin_schreier_image(&poly_delta[0]);
        }
        if deg % 2 == 1 {
            return Ok(false);
        }
        let Some(root) = p.sqrt_exact(&poly_delta[deg]) else { return Ok(false) };
        let half = deg / 2;
        poly_delta[deg] = p.zero();
        poly_delta[half] = p.add(&poly_delta[half], &root);
    }
}

fn degree_lex_masks(n: usize) -> Vec<usize> {
    let mut masks: Vec<usize> = (0..1usize << n).collect();
    masks.sort_by(|a, b| match a.count_ones().cmp(&b.count_ones()) {
        Ordering::Equal => bits(*a).cmp(&bits(*b)),
        other => other,
    });
    masks
}

fn bits(m: usize) -> Vec<u32> {
    (0..usize::BITS).filter(|i| m >> i & 1 == 1).collect()
}

/// Formats a polynomial over `f` in the variable `var`, highest degree first.
pub(crate) fn format_poly(f: &FieldTower, coeffs: &[FieldElement], var: &str) -> String {
    let mut terms = Vec::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if f.is_zero(c) {
            continue;
        }
        let coeff = f.format(c);
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        terms.push(if mono.is_empty() {
            coeff
        } else if coeff == "1" {
            mono
        } else if coeff.contains('+') {
            format!("({coeff})*{mono}")
        } else {
            format!("{coeff}*{mono}")
        });
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

fn invert_square(f: &FieldTower, mut rows: Vec<Vec<FieldElement>>) -> Result<Vec<Vec<FieldElement>>> {
    let n = rows.len();
    let mut inv: Vec<Vec<FieldElement>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !f.is_zero(&rows[r][col]))
            .ok_or_else(|| Error::InvalidLayer("powers of the square of the root are dependent".into()))?;
        rows.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = f.inv(&rows[col][col])?;
        for j in 0..n {
            rows[col][j] = f.mul(&rows[col][j], &scale);
            inv[col][j] = f.mul(&inv[col][j], &scale);
        }
        for r in 0..n {
            if r == col || f.is_zero(&rows[r][col]) {
                continue;
            }
            let factor = rows[r][col].clone();
            for j in 0..n {
                let a = f.mul(&factor, &rows[col][j]);
                rows[r][j] = f.add(&rows[r][j], &a);
                let b = f.mul(&factor, &inv[col][j]);
                inv[r][j] = f.add(&inv[r][j], &b);
            }
        }
    }
    Ok(inv)
}

/// Rabin's test over GF(q) for a monic polynomial given by base-field bits.
fn rabin_irreducible(base: BaseField, coeffs: &[u8]) -> bool {
    let f = FieldTower::finite(base);
    let m: Poly = coeffs.iter().map(|&c| FieldElement::Base(c)).collect();
    let d = m.len() - 1;
    let q = base.order();
    let x: Poly = vec![f.zero(), f.one()];
    let frob_iter = |k: usize| {
        let mut h = x.clone();
        for _ in 0..k {
            h = poly::pow_mod(&f, &h, q, &m);
        }
        h
    };
    if frob_iter(d) != poly::rem(&f, &x, &m) {
        return false;
    }
    let primes: Vec<usize> = (2..=d).filter(|p| d.is_multiple_of(*p) && (2..*p).all(|k| p % k != 0)).collect();
    primes.into_iter().all(|p| {
        let h = poly::add(&f, &frob_iter(d / p), &x);
        poly::gcd(&f, &h, &m).len() == 1
    })
}
