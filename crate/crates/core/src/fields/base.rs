//! The finite base fields GF(2), GF(4), GF(8) and GF(16).
//!
//! Elements are stored as bit vectors in the power basis `1, g, g^2, ...` where
//! `g` is a root of the fixed defining polynomial of the field.

use crate::error::{Error, Result};

/// GF(2^k) for `k` in `1..=4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BaseField {
    degree: u8,
}

impl BaseField {
    pub fn new(degree: u8) -> Result<Self> {
        if (1..=4).contains(&degree) {
            Ok(BaseField { degree })
        } else {
            Err(Error::InvalidField(format!(
                "GF(2^{degree}) is not supported; use GF(2), GF(4), GF(8) or GF(16)"
            )))
        }
    }

    /// Parses `GF(2)`, `GF(4)`, `GF(8)` or `GF(16)`.
    pub fn parse(text: &str) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix("GF(")
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::InvalidField(format!("expected GF(q), got `{text}`")))?;
        match inner.trim() {
            "2" => Self::new(1),
            "4" => Self::new(2),
            "8" => Self::new(3),
            "16" => Self::new(4),
            other => Err(Error::InvalidField(format!("unsupported base field order {other}"))),
        }
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn order(&self) -> usize {
        1 << self.degree
    }

    /// Defining polynomial as a bit mask, including the leading term.
    fn modulus(&self) -> u16 {
        match self.degree {
            1 => 0b10,
            2 => 0b111,
            3 => 0b1011,
            _ => 0b10011,
        }
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        a ^ b
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        let mut acc: u16 = 0;
        for i in 0..self.degree {
            if (b >> i) & 1 == 1 {
                acc ^= (a as u16) << i;
            }
        }
        let k = self.degree as u16;
        let modulus = self.modulus();
        for bit in (k..2 * k).rev() {
            if (acc >> bit) & 1 == 1 {
                acc ^= modulus << (bit - k);
            }
        }
        acc as u8
    }

    pub fn pow(&self, mut a: u8, mut e: usize) -> u8 {
        let mut acc = 1u8;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u8) -> Option<u8> {
        (a != 0).then(|| self.pow(a, self.order() - 2))
    }

    /// The unique square root; the field is perfect.
    pub fn sqrt(&self, a: u8) -> u8 {
        self.pow(a, self.order() / 2)
    }

    /// Absolute trace to GF(2).
    pub fn trace(&self, a: u8) -> u8 {
        let mut acc = 0;
        let mut x = a;
        for _ in 0..self.degree {
            acc ^= x;
            x = self.mul(x, x);
        }
        acc
    }

    pub fn format(&self, a: u8) -> String {
        if a == 0 {
            return "0".to_string();
        }
        let mut terms = Vec::new();
        for i in (0..self.degree).rev() {
            if (a >> i) & 1 == 1 {
                terms.push(match i {
                    0 => "1".to_string(),
                    1 => "g".to_string(),
                    _ => format!("g^{i}"),
                });
            }
        }
        terms.join(" + ")
    }

    pub fn name(&self) -> String {
        format!("GF({})", self.order())
    }
}
