//! Polynomial literal parsing: identifiers, integer constants (reduced mod 2),
//! `+ - * / ^` and parentheses. The parsed [`Expr`] is evaluated into any
//! [`ExprDomain`]: field elements, polynomials over a field, or algebra elements.

use crate::error::{Error, Result};
use crate::fields::{poly, FieldElement, FieldTower};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(u64),
    Ident { name: String, column: usize },
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div { num: Box<Expr>, den: Box<Expr>, column: usize },
    Pow(Box<Expr>, u32),
}

pub trait ExprDomain {
    type Value: Clone;

    fn integer(&self, n: u64) -> Self::Value;
    fn atom(&self, name: &str) -> Option<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn div(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;

    fn pow(&self, a: &Self::Value, e: u32) -> Result<Self::Value> {
        let mut acc = self.integer(1);
        for _ in 0..e {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        let tokens = tokenize(text)?;
        let mut parser = Parser { tokens, pos: 0, end_column: text.chars().count() + 1 };
        let expr = parser.sum()?;
        if let Some(tok) = parser.peek() {
            return Err(Error::Parse {
                column: tok.column,
                message: format!("unexpected `{}`", tok.text),
            });
        }
        Ok(expr)
    }

    pub fn eval<D: ExprDomain>(&self, domain: &D) -> Result<D::Value> {
        match self {
            Expr::Int(n) => Ok(domain.integer(*n)),
            Expr::Ident { name, column } => domain.atom(name).ok_or_else(|| Error::Parse {
                column: *column,
                message: format!("unknown symbol `{name}`"),
            }),
            Expr::Add(a, b) => Ok(domain.add(&a.eval(domain)?, &b.eval(domain)?)),
            Expr::Mul(a, b) => domain.mul(&a.eval(domain)?, &b.eval(domain)?),
            Expr::Div { num, den, column } => {
                domain.div(&num.eval(domain)?, &den.eval(domain)?).map_err(|e| Error::Parse {
                    column: *column,
                    message: e.to_string(),
                })
            }
            Expr::Pow(a, e) => domain.pow(&a.eval(domain)?, *e),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    text: String,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { text: chars[start..i].iter().collect(), column });
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Token { text: chars[start..i].iter().collect(), column });
        } else if "+-*/^()".contains(c) {
            out.push(Token { text: c.to_string(), column });
            i += 1;
        } else {
            return Err(Error::Parse { column, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end_column: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next_is(&self, s: &str) -> bool {
        self.peek().is_some_and(|t| t.text == s)
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        while self.next_is("+") || self.next_is("-") {
            self.pos += 1;
            let rhs = self.product()?;
            lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.next_is("*") {
                self.pos += 1;
                let rhs = self.unary()?;
                lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
            } else if self.next_is("/") {
                let column = self.peek().unwrap().column;
                self.pos += 1;
                let rhs = self.unary()?;
                lhs = Expr::Div { num: Box::new(lhs), den: Box::new(rhs), column };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        // -a = a in characteristic 2
        if self.next_is("-") {
            self.pos += 1;
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.next_is("^") {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek().cloned() {
            Some(tok) if tok.text.chars().all(|c| c.is_ascii_digit()) => {
                self.pos += 1;
                let e = tok.text.parse::<u32>().map_err(|_| Error::Parse {
                    column: tok.column,
                    message: "exponent too large".into(),
                })?;
                Ok(Expr::Pow(Box::new(base), e))
            }
            Some(tok) => Err(Error::Parse {
                column: tok.column,
                message: format!("expected a nonnegative integer exponent, found `{}`", tok.text),
            }),
            None => Err(Error::Parse { column: self.end_column, message: "missing exponent".into() }),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let Some(tok) = self.peek().cloned() else {
            return Err(Error::Parse { column: self.end_column, message: "unexpected end of input".into() });
        };
        self.pos += 1;
        let first = tok.text.chars().next().unwrap();
        if first.is_ascii_digit() {
            let n = tok.text.parse::<u64>().map_err(|_| Error::Parse {
                column: tok.column,
                message: "integer literal too large".into(),
            })?;
            Ok(Expr::Int(n))
        } else if first.is_ascii_alphabetic() || first == '_' {
            Ok(Expr::Ident { name: tok.text, column: tok.column })
        } else if tok.text == "(" {
            let inner = self.sum()?;
            if !self.next_is(")") {
                let column = self.peek().map_or(self.end_column, |t| t.column);
                return Err(Error::Parse { column, message: "expected `)`".into() });
            }
            self.pos += 1;
            Ok(inner)
        } else {
            Err(Error::Parse { column: tok.column, message: format!("unexpected `{}`", tok.text) })
        }
    }
}

/// Evaluates expressions as elements of a field tower.
pub struct FieldDomain<'a>(pub &'a FieldTower);

impl ExprDomain for FieldDomain<'_> {
    type Value = FieldElement;

    fn integer(&self, n: u64) -> FieldElement {
        if n % 2 == 1 {
            self.0.one()
        } else {
            self.0.zero()
        }
    }

    fn atom(&self, name: &str) -> Option<FieldElement> {
        self.0.symbol_element(name)
    }

    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.0.add(a, b)
    }

    fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.0.mul(a, b))
    }

    fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.0.div(a, b)
    }

    fn pow(&self, a: &FieldElement, e: u32) -> Result<FieldElement> {
        Ok(self.0.pow(a, e as usize))
    }
}

/// Evaluates expressions as polynomials in a fresh variable over a field.
pub struct PolyDomain<'a> {
    pub field: &'a FieldTower,
    pub var: &'a str,
}

impl ExprDomain for PolyDomain<'_> {
    type Value = poly::Poly;

    fn integer(&self, n: u64) -> poly::Poly {
        poly::constant(self.field, FieldDomain(self.field).integer(n))
    }

    fn atom(&self, name: &str) -> Option<poly::Poly> {
        if name == self.var {
            Some(vec![self.field.zero(), self.field.one()])
        } else {
            self.field.symbol_element(name).map(|c| poly::constant(self.field, c))
        }
    }

    fn add(&self, a: &poly::Poly, b: &poly::Poly) -> poly::Poly {
        poly::add(self.field, a, b)
    }

    fn mul(&self, a: &poly::Poly, b: &poly::Poly) -> Result<poly::Poly> {
        Ok(poly::mul(self.field, a, b))
    }

    fn div(&self, a: &poly::Poly, b: &poly::Poly) -> Result<poly::Poly> {
        match b.as_slice() {
            [c] => Ok(poly::scale(self.field, a, &self.field.inv(c)?)),
            [] => Err(Error::DivisionByZero),
            _ => Err(Error::Precondition("polynomials may only be divided by constants".into())),
        }
    }
}

/// Parses a field element of `field`, e.g. `s*t + 1/(t+1)`.
pub fn parse_element(field: &FieldTower, text: &str) -> Result<FieldElement> {
    Expr::parse(text)?.eval(&FieldDomain(field))
}

/// Parses a polynomial in `var` with coefficients in `field`, low degree first.
pub fn parse_polynomial(field: &FieldTower, text: &str, var: &str) -> Result<Vec<FieldElement>> {
    Expr::parse(text)?.eval(&PolyDomain { field, var })
}
