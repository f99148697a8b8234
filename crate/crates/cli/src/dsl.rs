//! Symbol expression language.
//!
//! ```text
//! expr     := term (('*' | '/') term)*
//! term     := blaschke | poly | rational | arc | 'conj(' expr ')' | 'z' | number | '(' expr ')'
//! blaschke := 'B{' [field (',' field)*] '}'
//! field    := 'zeros=[' complex,* ']' | 'pow=' int | 'c=' complex
//! poly     := 'poly(' complex (',' complex)* ')'
//! rational := 'rational([' complex,* '],[' complex,* '])'
//! arc      := 'arc(' '[' angle ',' angle ']' (',' '[' angle ',' angle ']')* ')'
//! ```
//!
//! Complex literals look like `0.5`, `-0.3+0.2i`, `2i` or `i`. Angles also
//! accept `pi`, `k*pi` and `pi/k`.

use std::f64::consts::PI;
use std::fmt;

use hardy_na::inner::{Poly, RationalFunction};
use hardy_na::{ArcSet, BlaschkeProduct, SymbolSpec, C64};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq)]
pub enum SymbolExpr {
    Blaschke { c: Option<C64>, pow: Option<u32>, zeros: Vec<C64> },
    Z,
    Number(C64),
    Poly(Vec<C64>),
    Rational(Vec<C64>, Vec<C64>),
    Arc(Vec<(f64, f64)>),
    Conj(Box<SymbolExpr>),
    Product(Box<SymbolExpr>, Box<SymbolExpr>),
    Quotient(Box<SymbolExpr>, Box<SymbolExpr>),
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum DslError {
    #[error("syntax error at byte {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },
    #[error("{0}")]
    Semantic(String),
}

type PResult<T> = std::result::Result<T, DslError>;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, expected: &str) -> PResult<T> {
        Err(DslError::Syntax { offset: self.pos, expected: expected.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> PResult<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(&format!("'{tok}'"))
        }
    }

    /// An identifier-like keyword that is not a prefix of a longer word.
    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let boundary = rest.get(kw.len()).is_none_or(|b| !b.is_ascii_alphanumeric() && *b != b'_');
        if rest.starts_with(kw.as_bytes()) && boundary {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> PResult<SymbolExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat("*") {
                lhs = SymbolExpr::Product(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat("/") {
                lhs = SymbolExpr::Quotient(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> PResult<SymbolExpr> {
        if self.eat("B{") {
            return self.blaschke();
        }
        if self.keyword("poly") {
            self.expect("(")?;
            let c = self.complex_list(")")?;
            if c.is_empty() {
                return self.err("a coefficient");
            }
            return Ok(SymbolExpr::Poly(c));
        }
        if self.keyword("rational") {
            self.expect("(")?;
            self.expect("[")?;
            let num = self.complex_list("]")?;
            self.expect(",")?;
            self.expect("[")?;
            let den = self.complex_list("]")?;
            self.expect(")")?;
            return Ok(SymbolExpr::Rational(num, den));
        }
        if self.keyword("arc") {
            self.expect("(")?;
            let mut arcs = Vec::new();
            loop {
                self.expect("[")?;
                let a = self.angle()?;
                self.expect(",")?;
                let b = self.angle()?;
                self.expect("]")?;
                arcs.push((a, b));
                if !self.eat(",") {
                    break;
                }
            }
            self.expect(")")?;
            return Ok(SymbolExpr::Arc(arcs));
        }
        if self.keyword("conj") {
            self.expect("(")?;
            let e = self.expr()?;
            self.expect(")")?;
            return Ok(SymbolExpr::Conj(Box::new(e)));
        }
        if self.keyword("z") {
            return Ok(SymbolExpr::Z);
        }
        if self.eat("(") {
            let e = self.expr()?;
            self.expect(")")?;
            return Ok(e);
        }
        match self.peek() {
            Some(b) if b.is_ascii_digit() || b == b'.' || b == b'-' || b == b'+' || b == b'i' => {
                Ok(SymbolExpr::Number(self.complex()?))
            }
            _ => self.err("a symbol term"),
        }
    }

    fn blaschke(&mut self) -> PResult<SymbolExpr> {
        let (mut c, mut pow, mut zeros) = (None, None, Vec::new());
        let mut seen_zeros = false;
        if !self.eat("}") {
            loop {
                if self.keyword("zeros") && !seen_zeros {
                    self.expect("=")?;
                    self.expect("[")?;
                    zeros = self.complex_list("]")?;
                    seen_zeros = true;
                } else if self.keyword("pow") && pow.is_none() {
                    self.expect("=")?;
                    pow = Some(self.uint()?);
                } else if self.keyword("c") && c.is_none() {
                    self.expect("=")?;
                    c = Some(self.complex()?);
                } else {
                    return self.err("one of zeros=, pow=, c=");
                }
                if self.eat("}") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(SymbolExpr::Blaschke { c, pow, zeros })
    }

    fn complex_list(&mut self, close: &str) -> PResult<Vec<C64>> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.complex()?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn uint(&mut self) -> PResult<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse().or_else(|_| {
            self.pos = start;
            self.err("a non-negative integer")
        })
    }

    /// Unsigned decimal literal.
    fn float(&mut self) -> PResult<f64> {
        self.skip_ws();
        let start = self.pos;
        let s = self.src;
        let digits = |p: &mut usize| {
            let b = *p;
            while *p < s.len() && s[*p].is_ascii_digit() {
                *p += 1;
            }
            *p > b
        };
        let mut p = self.pos;
        let int = digits(&mut p);
        let mut frac = false;
        if p < s.len() && s[p] == b'.' {
            p += 1;
            frac = digits(&mut p);
        }
        if !int && !frac {
            return self.err("a number");
        }
        if p < s.len() && (s[p] == b'e' || s[p] == b'E') {
            let mut q = p + 1;
            if q < s.len() && (s[q] == b'+' || s[q] == b'-') {
                q += 1;
            }
            if digits(&mut q) {
                p = q;
            }
        }
        let v: f64 = std::str::from_utf8(&s[start..p]).unwrap().parse().map_err(|_| DslError::Syntax { offset: start, expected: "a number".into() })?;
        if !v.is_finite() {
            return Err(DslError::Syntax { offset: start, expected: "a finite number".into() });
        }
        self.pos = p;
        Ok(v)
    }

    fn sign(&mut self) -> f64 {
        if self.eat("-") {
            -1.0
        } else {
            self.eat("+");
            1.0
        }
    }

    fn imaginary_unit(&mut self) -> bool {
        self.skip_ws();
        let boundary = self.src.get(self.pos + 1).is_none_or(|b| !b.is_ascii_alphanumeric());
        if self.src.get(self.pos) == Some(&b'i') && boundary {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn complex(&mut self) -> PResult<C64> {
        let s1 = self.sign();
        if self.imaginary_unit() {
            return Ok(C64::new(0.0, s1));
        }
        let a = s1 * self.float()?;
        if self.imaginary_unit() {
            return Ok(C64::new(0.0, a));
        }
        let save = self.pos;
        match self.peek() {
            Some(b'+') | Some(b'-') => {
                let s2 = self.sign();
                if self.imaginary_unit() {
                    return Ok(C64::new(a, s2));
                }
                let b = self.float()?;
                if self.imaginary_unit() {
                    Ok(C64::new(a, s2 * b))
                } else {
                    self.err("'i'")
                }
            }
            _ => {
                self.pos = save;
                Ok(C64::new(a, 0.0))
            }
        }
    }

    fn angle(&mut self) -> PResult<f64> {
        let s = self.sign();
        if self.keyword("pi") {
            let v = if self.eat("/") { PI / self.float()? } else { PI };
            return Ok(s * v);
        }
        let a = self.float()?;
        if self.eat("*") {
            if !self.keyword("pi") {
                return self.err("'pi'");
            }
            return Ok(s * a * PI);
        }
        Ok(s * a)
    }
}

pub fn parse_symbol(text: &str) -> PResult<SymbolExpr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("end of input");
    }
    Ok(e)
}

fn fmt_real(x: f64) -> String {
    format!("{x:?}")
}

fn fmt_complex(c: &C64) -> String {
    if c.im == 0.0 {
        fmt_real(c.re)
    } else if c.re == 0.0 {
        format!("{}i", fmt_real(c.im))
    } else if c.im < 0.0 {
        format!("{}-{}i", fmt_real(c.re), fmt_real(-c.im))
    } else {
        format!("{}+{}i", fmt_real(c.re), fmt_real(c.im))
    }
}

fn fmt_list(v: &[C64]) -> String {
    v.iter().map(fmt_complex).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for SymbolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolExpr::Blaschke { c, pow, zeros } => {
                let mut fields = Vec::new();
                if let Some(c) = c {
                    fields.push(format!("c={}", fmt_complex(c)));
                }
                if let Some(p) = pow {
                    fields.push(format!("pow={p}"));
                }
                if !zeros.is_empty() {
                    fields.push(format!("zeros=[{}]", fmt_list(zeros)));
                }
                write!(f, "B{{{}}}", fields.join(", "))
            }
            SymbolExpr::Z => write!(f, "z"),
            SymbolExpr::Number(c) if c.im != 0.0 && c.re != 0.0 => write!(f, "({})", fmt_complex(c)),
            SymbolExpr::Number(c) => write!(f, "{}", fmt_complex(c)),
            SymbolExpr::Poly(c) => write!(f, "poly({})", fmt_list(c)),
            SymbolExpr::Rational(n, d) => write!(f, "rational([{}], [{}])", fmt_list(n), fmt_list(d)),
            SymbolExpr::Arc(arcs) => {
                let parts: Vec<String> = arcs.iter().map(|(a, b)| format!("[{}, {}]", fmt_real(*a), fmt_real(*b))).collect();
                write!(f, "arc({})", parts.join(", "))
            }
            SymbolExpr::Conj(e) => write!(f, "conj({e})"),
            SymbolExpr::Product(a, b) => write!(f, "{a}*{}", operand(b)),
            SymbolExpr::Quotient(a, b) => write!(f, "{a}/{}", operand(b)),
        }
    }
}

/// Right operands that are themselves products need parentheses.
fn operand(e: &SymbolExpr) -> String {
    match e {
        SymbolExpr::Product(..) | SymbolExpr::Quotient(..) => format!("({e})"),
        _ => e.to_string(),
    }
}

/// What an expression denotes on the circle.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Inner(BlaschkeProduct),
    /// `c · num / den`, unimodular.
    Quotient(C64, BlaschkeProduct, BlaschkeProduct),
    Rational(RationalFunction),
    Arc(ArcSet),
}

fn semantic(msg: impl Into<String>) -> DslError {
    DslError::Semantic(msg.into())
}

fn core_err(e: hardy_na::Error) -> DslError {
    DslError::Semantic(e.to_string())
}

const UNIT_TOL: f64 = 1e-12;

impl Value {
    fn as_quotient(&self) -> Option<(C64, BlaschkeProduct, BlaschkeProduct)> {
        match self {
            Value::Inner(b) => Some((C64::new(1.0, 0.0), b.clone(), BlaschkeProduct::unit())),
            Value::Quotient(c, n, d) => Some((*c, n.clone(), d.clone())),
            _ => None,
        }
    }

    fn as_rational(&self) -> Option<RationalFunction> {
        match self {
            Value::Inner(b) => Some(b.to_rational()),
            Value::Quotient(c, n, d) if d.degree() == 0 => Some(n.to_rational().scale(*c * d.constant().conj())),
            Value::Rational(r) => Some(r.clone()),
            _ => None,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Value::Inner(_) => "inner function",
            Value::Quotient(..) => "unimodular quotient",
            Value::Rational(_) => "rational function",
            Value::Arc(_) => "arc indicator",
        }
    }

    pub fn into_symbol(self) -> PResult<SymbolSpec> {
        match self {
            Value::Inner(b) => Ok(SymbolSpec::blaschke(b)),
            Value::Quotient(c, n, d) => SymbolSpec::unimodular(c, n, d).map_err(core_err),
            Value::Rational(r) => SymbolSpec::analytic(r).map_err(core_err),
            Value::Arc(a) => Ok(SymbolSpec::arc(a)),
        }
    }

    pub fn into_inner(self) -> PResult<BlaschkeProduct> {
        match self {
            Value::Inner(b) => Ok(b),
            Value::Quotient(c, n, d) if d.degree() == 0 => Ok(n.with_constant(c * n.constant() * d.constant().conj())),
            other => Err(semantic(format!("the inner function must be a finite Blaschke product, got a {}", other.kind()))),
        }
    }
}

fn product(a: Value, b: Value) -> PResult<Value> {
    if let (Value::Inner(x), Value::Inner(y)) = (&a, &b) {
        return Ok(Value::Inner(x.multiply(y)));
    }
    if let (Some((c1, n1, d1)), Some((c2, n2, d2))) = (a.as_quotient(), b.as_quotient()) {
        return Ok(Value::Quotient(c1 * c2, n1.multiply(&n2), d1.multiply(&d2)));
    }
    if let (Some(x), Some(y)) = (a.as_rational(), b.as_rational()) {
        return Ok(Value::Rational(x.mul(&y)));
    }
    Err(semantic(format!("cannot multiply a {} by a {}", a.kind(), b.kind())))
}

fn quotient(a: Value, b: Value) -> PResult<Value> {
    if let (Some((c1, n1, d1)), Some((c2, n2, d2))) = (a.as_quotient(), b.as_quotient()) {
        return Ok(Value::Quotient(c1 / c2, n1.multiply(&d2), d1.multiply(&n2)));
    }
    if let (Some(x), Value::Rational(y)) = (a.as_rational(), &b) {
        let inv = RationalFunction::new(y.denominator().clone(), y.numerator().clone()).map_err(core_err)?;
        let r = x.mul(&inv);
        r.check_analytic().map_err(core_err)?;
        return Ok(Value::Rational(r));
    }
    Err(semantic(format!("cannot divide a {} by a {}", a.kind(), b.kind())))
}

impl SymbolExpr {
    pub fn eval(&self) -> PResult<Value> {
        Ok(match self {
            SymbolExpr::Blaschke { c, pow, zeros } => {
                let c = c.unwrap_or(C64::new(1.0, 0.0));
                if (c.norm() - 1.0).abs() > UNIT_TOL {
                    return Err(semantic(format!("Blaschke constant {c} is not unimodular")));
                }
                if let Some(a) = zeros.iter().find(|a| a.norm() >= 1.0) {
                    return Err(semantic(format!("Blaschke zero {a} is not inside the unit disk")));
                }
                Value::Inner(BlaschkeProduct::new(c, pow.unwrap_or(0), zeros.iter().map(|&a| (a, 1))).map_err(core_err)?)
            }
            SymbolExpr::Z => Value::Inner(BlaschkeProduct::z()),
            SymbolExpr::Number(c) if (c.norm() - 1.0).abs() <= UNIT_TOL => Value::Inner(BlaschkeProduct::unit().with_constant(*c)),
            SymbolExpr::Number(c) => Value::Rational(RationalFunction::constant(*c)),
            SymbolExpr::Poly(c) => Value::Rational(RationalFunction::from_poly(Poly::new(c.clone()))),
            SymbolExpr::Rational(n, d) => {
                let r = RationalFunction::new(Poly::new(n.clone()), Poly::new(d.clone())).map_err(core_err)?;
                r.check_analytic().map_err(core_err)?;
                Value::Rational(r)
            }
            SymbolExpr::Arc(arcs) => Value::Arc(ArcSet::new(arcs.clone()).map_err(core_err)?),
            SymbolExpr::Conj(e) => match e.eval()? {
                Value::Arc(a) => Value::Arc(a),
                v => match v.as_quotient() {
                    Some((c, n, d)) => Value::Quotient(c.conj(), d, n),
                    None => return Err(semantic(format!("conj of a {} is not supported", v.kind()))),
                },
            },
            SymbolExpr::Product(a, b) => product(a.eval()?, b.eval()?)?,
            SymbolExpr::Quotient(a, b) => quotient(a.eval()?, b.eval()?)?,
        })
    }
}

pub fn symbol_from_text(text: &str) -> PResult<SymbolSpec> {
    parse_symbol(text)?.eval()?.into_symbol()
}

pub fn inner_from_text(text: &str) -> PResult<BlaschkeProduct> {
    parse_symbol(text)?.eval()?.into_inner()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn parses_the_documented_forms() {
        assert_eq!(
            parse_symbol("B{zeros=[0.5]}").unwrap(),
            SymbolExpr::Blaschke { c: None, pow: None, zeros: vec![c(0.5, 0.0)] }
        );
        let q = parse_symbol("B{zeros=[-0.3]}/B{zeros=[0.5]}").unwrap();
        assert!(matches!(q, SymbolExpr::Quotient(..)));
        assert_eq!(parse_symbol("poly(0.5,0.5)").unwrap(), SymbolExpr::Poly(vec![c(0.5, 0.0), c(0.5, 0.0)]));
        assert_eq!(parse_symbol("conj(z)").unwrap(), SymbolExpr::Conj(Box::new(SymbolExpr::Z)));
        assert_eq!(parse_symbol("arc([0, pi])").unwrap(), SymbolExpr::Arc(vec![(0.0, PI)]));
        assert_eq!(parse_symbol("arc([pi/2, 1.5*pi])").unwrap(), SymbolExpr::Arc(vec![(PI / 2.0, 1.5 * PI)]));
        assert_eq!(
            parse_symbol("B{c=-i, pow=2, zeros=[0.3+0.2i, -0.1-1e-3i]}").unwrap(),
            SymbolExpr::Blaschke { c: Some(c(0.0, -1.0)), pow: Some(2), zeros: vec![c(0.3, 0.2), c(-0.1, -1e-3)] }
        );
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let e = parse_symbol("B{zeros=[0.5}").unwrap_err();
        assert!(matches!(e, DslError::Syntax { offset: 12, .. }), "{e:?}");
        let e = parse_symbol("z * ").unwrap_err();
        assert!(matches!(e, DslError::Syntax { offset: 4, .. }), "{e:?}");
        let e = parse_symbol("z z").unwrap_err();
        assert!(matches!(e, DslError::Syntax { offset: 2, .. }), "{e:?}");
        assert!(matches!(parse_symbol("B{pow=1, pow=2}"), Err(DslError::Syntax { .. })));
        assert!(matches!(parse_symbol("1e999"), Err(DslError::Syntax { .. })));
    }

    #[test]
    fn semantic_errors() {
        assert!(matches!(symbol_from_text("B{zeros=[1.2]}"), Err(DslError::Semantic(_))));
        assert!(matches!(symbol_from_text("arc([0, 2], [1, 3])"), Err(DslError::Semantic(_))));
        assert!(matches!(symbol_from_text("rational([1], [0.5, 1])"), Err(DslError::Semantic(_))));
        assert!(matches!(inner_from_text("poly(1, 2)"), Err(DslError::Semantic(_))));
        assert!(matches!(inner_from_text("conj(z)"), Err(DslError::Semantic(_))));
        assert!(matches!(symbol_from_text("arc([0, 1])*z"), Err(DslError::Semantic(_))));
    }

    #[test]
    fn evaluates_to_the_right_symbol() {
        let s = symbol_from_text("B{zeros=[-0.3]}/B{zeros=[0.5]}").unwrap();
        let SymbolSpec::RationalUnimodular { num, den, .. } = &s else { panic!("{s:?}") };
        assert!(num.eq_up_to_phase(&BlaschkeProduct::factor(c(-0.3, 0.0)).unwrap()));
        assert!(den.eq_up_to_phase(&BlaschkeProduct::factor(c(0.5, 0.0)).unwrap()));
        assert!(matches!(symbol_from_text("poly(0.5,0.5)").unwrap(), SymbolSpec::RationalAnalytic { .. }));
        assert!(matches!(symbol_from_text("conj(z)").unwrap(), SymbolSpec::RationalUnimodular { .. }));
        assert!(matches!(symbol_from_text("arc([0, pi])").unwrap(), SymbolSpec::ArcIndicator { .. }));
        let u = inner_from_text("z*B{zeros=[0.5]}").unwrap();
        assert_eq!(u.degree(), 2);
        assert!(inner_from_text("z*B{zeros=[0.5]}/1").is_ok());
        let t = symbol_from_text("z/z").unwrap();
        assert!(matches!(t, SymbolSpec::RationalUnimodular { ref num, ref den, .. } if num.degree() == 0 && den.degree() == 0));
    }

    #[test]
    fn prints_what_it_parses() {
        for text in ["B{c=-1.0i, pow=2, zeros=[0.3+0.2i]}", "z*(B{}/z)", "conj(z*z)/B{zeros=[0.5]}", "arc([0.0, 1.5])", "(0.5+1.0i)*z", "-2.0*z"] {
            let e = parse_symbol(text).unwrap();
            assert_eq!(parse_symbol(&e.to_string()).unwrap(), e, "{text} -> {e}");
        }
    }
}
