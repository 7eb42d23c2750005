//! Text descriptors for towers: a base such as `GF(4)` followed by layers
//! `rat:<name>`, `as:<delta>`, `odd:<polynomial in x>`, `insep:<generator>`.

use super::{BaseField, FieldTower, Layer};
use crate::error::{Error, Result};
use crate::expr::{parse_element, parse_polynomial};

/// Parses one layer relative to the tower below it.
pub fn parse_layer(below: &FieldTower, text: &str) -> Result<Layer> {
    let (kind, arg) = text
        .split_once(':')
        .ok_or_else(|| Error::InvalidLayer(format!("expected `kind:argument`, got `{text}`")))?;
    let arg = arg.trim();
    match kind.trim() {
        "rat" => Ok(Layer::Rational { name: arg.to_string() }),
        "as" => Ok(Layer::ArtinSchreier { delta: parse_element(below, arg)? }),
        "odd" => Ok(Layer::OddSeparable { min_poly: parse_polynomial(below, arg, "x")? }),
        "insep" => Ok(Layer::InseparableQuadratic { radicand: parse_element(below, arg)? }),
        other => Err(Error::InvalidLayer(format!("unknown layer kind `{other}`"))),
    }
}

impl FieldTower {
    /// Builds a tower from a base descriptor and layer strings.
    pub fn parse<S: AsRef<str>>(base: &str, layers: &[S]) -> Result<FieldTower> {
        let mut field = FieldTower::finite(BaseField::parse(base)?);
        for layer in layers {
            field = field.extend_parsed(layer.as_ref())?;
        }
        Ok(field)
    }

    /// Adds a layer given in descriptor syntax.
    pub fn extend_parsed(&self, layer: &str) -> Result<FieldTower> {
        self.extend(parse_layer(self, layer)?)
    }
}
