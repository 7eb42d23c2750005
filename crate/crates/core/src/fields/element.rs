/// An element of a [`FieldTower`](super::FieldTower).
///
/// The representation is nested, one level per tower layer, and always
/// canonical for the tower it belongs to, so structural equality is field
/// equality. Elements do not carry a reference to their tower; every
/// operation goes through the tower.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElement {
    /// Element of the finite base field, as a bit vector in the power basis of `g`.
    Base(u8),
    /// Element of a rational function layer `M(t)`.
    Frac(Box<RationalFunction>),
    /// Element of an algebraic layer `M[X]/(f)`, as coordinates `1, X, ..., X^(d-1)`.
    Alg(Vec<FieldElement>),
}

/// `num / den` with `den` monic and `gcd(num, den) = 1`; zero is `0 / 1`.
///
/// Polynomials are coefficient vectors in increasing degree without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFunction {
    pub(crate) num: Vec<FieldElement>,
    pub(crate) den: Vec<FieldElement>,
}

impl RationalFunction {
    pub fn numerator(&self) -> &[FieldElement] {
        &self.num
    }

    pub fn denominator(&self) -> &[FieldElement] {
        &self.den
    }
}
