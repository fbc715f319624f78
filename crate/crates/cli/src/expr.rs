//! Expression language for scalars, 1-forms and 2-forms.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/' | '^') factor)*     '^' here is the wedge
//! factor := '-' factor | base ('^' uint)*
//! base   := int | var | formatom | 'd' '(' expr ')' | 'dlog' '(' expr ')'
//!         | '(' expr ')'
//! ```
//!
//! A `^` directly followed by an unsigned integer is a power, any other
//! `^` is a wedge. Unary minus binds looser than `^`, so `-x^2` is
//! `-(x^2)`. A product of two 1-forms written with `*` is their wedge.

use std::fmt;

use charp_core::forms::{differential, dlog, OneForm, TwoForm};
use charp_core::poly::{var_name, RatFunc, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    /// Integer literal, already reduced mod p.
    Int(u32),
    Var(usize),
    /// `dx_i`.
    Form(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Wedge(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Neg(Box<Expr>),
    D(Box<Expr>),
    Dlog(Box<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sort {
    Scalar,
    OneForm,
    TwoForm,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Scalar => "scalar",
            Sort::OneForm => "1-form",
            Sort::TwoForm => "2-form",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },
    #[error("unknown variable '{name}' at offset {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("sort error in '{expr}': {message}")]
    Sort { expr: String, message: String },
    #[error("cannot evaluate '{expr}': {source}")]
    Domain {
        expr: String,
        source: charp_core::Error,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    ring: Ring,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    /// Next token with its start offset and end offset, without consuming.
    fn peek(&mut self) -> Result<(Tok, usize, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::End, start, start));
        };
        let single = |t| Ok((t, start, start + 1));
        match c {
            '+' => single(Tok::Plus),
            '-' => single(Tok::Minus),
            '*' => single(Tok::Star),
            '/' => single(Tok::Slash),
            '^' => single(Tok::Caret),
            '(' => single(Tok::LParen),
            ')' => single(Tok::RParen),
            '0'..='9' => {
                let len = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
                let v = rest[..len].parse::<u64>().map_err(|_| ParseError::Syntax {
                    offset: start,
                    expected: "an integer below 2^64".into(),
                })?;
                Ok((Tok::Int(v), start, start + len))
            }
            c if c.is_ascii_alphabetic() => {
                let len = rest
                    .find(|c: char| !c.is_ascii_alphanumeric() && c != '_')
                    .unwrap_or(rest.len());
                Ok((Tok::Ident, start, start + len))
            }
            _ => Err(ParseError::Syntax {
                offset: start,
                expected: "an expression".into(),
            }),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let (t, start, end) = self.peek()?;
        if t != want {
            return Err(ParseError::Syntax {
                offset: start,
                expected: what.into(),
            });
        }
        self.pos = end;
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let (t, _, end) = self.peek()?;
            let ctor: fn(Box<Expr>, Box<Expr>) -> Expr = match t {
                Tok::Plus => Expr::Add,
                Tok::Minus => Expr::Sub,
                _ => return Ok(lhs),
            };
            self.pos = end;
            let rhs = self.term()?;
            lhs = ctor(Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let (t, _, end) = self.peek()?;
            let ctor: fn(Box<Expr>, Box<Expr>) -> Expr = match t {
                Tok::Star => Expr::Mul,
                Tok::Slash => Expr::Div,
                Tok::Caret => Expr::Wedge,
                _ => return Ok(lhs),
            };
            self.pos = end;
            let rhs = self.factor()?;
            lhs = ctor(Box::new(lhs), Box::new(rhs));
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let (t, _, end) = self.peek()?;
        if t == Tok::Minus {
            self.pos = end;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let mut base = self.base()?;
        loop {
            let save = self.pos;
            let (t, _, end) = self.peek()?;
            if t != Tok::Caret {
                return Ok(base);
            }
            self.pos = end;
            match self.peek()? {
                (Tok::Int(e), start, end) => {
                    let e = u32::try_from(e).map_err(|_| ParseError::Syntax {
                        offset: start,
                        expected: "an exponent below 2^32".into(),
                    })?;
                    self.pos = end;
                    base = Expr::Pow(Box::new(base), e);
                }
                _ => {
                    // a wedge; leave it to `term`
                    self.pos = save;
                    return Ok(base);
                }
            }
        }
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let expected = || "an integer, a variable, dx_i, d(...), dlog(...) or '('";
        let (t, start, end) = self.peek()?;
        match t {
            Tok::Int(v) => {
                self.pos = end;
                Ok(Expr::Int((v % self.ring.p() as u64) as u32))
            }
            Tok::LParen => {
                self.pos = end;
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident => {
                let name = &self.src[start..end];
                self.pos = end;
                match name {
                    "d" | "dlog" => {
                        self.expect(Tok::LParen, "'('")?;
                        let e = self.expr()?;
                        self.expect(Tok::RParen, "')'")?;
                        Ok(if name == "d" {
                            Expr::D(Box::new(e))
                        } else {
                            Expr::Dlog(Box::new(e))
                        })
                    }
                    _ => {
                        let (form, var) = match name.strip_prefix('d') {
                            Some(v) => (true, v),
                            None => (false, name),
                        };
                        match var_index(var, self.ring.nvars()) {
                            Some(i) if form => Ok(Expr::Form(i)),
                            Some(i) => Ok(Expr::Var(i)),
                            None => Err(ParseError::UnknownVariable {
                                name: name.to_string(),
                                offset: start,
                            }),
                        }
                    }
                }
            }
            _ => Err(ParseError::Syntax {
                offset: start,
                expected: expected().into(),
            }),
        }
    }
}

fn var_index(name: &str, nvars: usize) -> Option<usize> {
    let i = match name {
        "x" => 0,
        "y" => 1,
        "z" => 2,
        "w" => 3,
        _ => {
            let digits = name.strip_prefix('x')?;
            if digits.len() != 1 {
                return None;
            }
            digits.parse::<usize>().ok()?.checked_sub(1)?
        }
    };
    (i < nvars).then_some(i)
}

/// Parses and sort-checks `text`.
pub fn parse(text: &str, ring: Ring) -> Result<Expr, ParseError> {
    let e = parse_syntax(text, ring)?;
    e.sort(ring.nvars())?;
    Ok(e)
}

/// Parses without sort checking.
pub fn parse_syntax(text: &str, ring: Ring) -> Result<Expr, ParseError> {
    let mut parser = Parser { src: text, pos: 0, ring };
    let e = parser.expr()?;
    let (t, start, _) = parser.peek()?;
    if t != Tok::End {
        return Err(ParseError::Syntax {
            offset: start,
            expected: "an operator or end of input".into(),
        });
    }
    Ok(e)
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) | Expr::Wedge(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn starts_with_int(&self) -> bool {
        match self {
            Expr::Int(_) => true,
            Expr::Pow(a, _) => a.starts_with_int(),
            _ => false,
        }
    }

    /// The sort of the expression, or the innermost offending
    /// sub-expression.
    pub fn sort(&self, nvars: usize) -> Result<Sort, ParseError> {
        use Sort::*;
        let err = |message: &str| {
            Err(ParseError::Sort {
                expr: self.display(nvars).to_string(),
                message: message.into(),
            })
        };
        match self {
            Expr::Int(_) | Expr::Var(_) => Ok(Scalar),
            Expr::Form(_) => Ok(OneForm),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (sa, sb) = (a.sort(nvars)?, b.sort(nvars)?);
                if sa != sb {
                    return err(&format!("cannot add a {sa} and a {sb}"));
                }
                Ok(sa)
            }
            Expr::Mul(a, b) => match (a.sort(nvars)?, b.sort(nvars)?) {
                (Scalar, s) | (s, Scalar) => Ok(s),
                (OneForm, OneForm) => Ok(TwoForm),
                _ => err("forms of degree above 2 are not supported"),
            },
            Expr::Wedge(a, b) => match (a.sort(nvars)?, b.sort(nvars)?) {
                (OneForm, OneForm) => Ok(TwoForm),
                (Scalar, _) | (_, Scalar) => err("'^' needs an integer exponent or two 1-forms"),
                _ => err("forms of degree above 2 are not supported"),
            },
            Expr::Div(a, b) => {
                let sa = a.sort(nvars)?;
                if b.sort(nvars)? != Scalar {
                    return err("cannot divide by a form");
                }
                Ok(sa)
            }
            Expr::Pow(a, _) => match a.sort(nvars)? {
                Scalar => Ok(Scalar),
                _ => err("cannot raise a form to a power"),
            },
            Expr::Neg(a) => a.sort(nvars),
            Expr::D(a) => match a.sort(nvars)? {
                Scalar => Ok(OneForm),
                OneForm => Ok(TwoForm),
                TwoForm => err("d of a 2-form is not supported"),
            },
            Expr::Dlog(a) => match a.sort(nvars)? {
                Scalar => Ok(OneForm),
                _ => err("dlog takes a function"),
            },
        }
    }

    /// Canonical printer; `parse(display(e)) == e`.
    pub fn display(&self, nvars: usize) -> Display<'_> {
        Display { expr: self, nvars }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, nvars: usize) -> fmt::Result {
        let child = |f: &mut fmt::Formatter<'_>, e: &Expr, min: u8| {
            if e.prec() < min {
                write!(f, "(")?;
                e.write(f, nvars)?;
                write!(f, ")")
            } else {
                e.write(f, nvars)
            }
        };
        let binary = |f: &mut fmt::Formatter<'_>, a: &Expr, op: &str, b: &Expr, prec: u8| {
            child(f, a, prec)?;
            write!(f, " {op} ")?;
            child(f, b, prec + 1)
        };
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Var(i) => write!(f, "{}", var_name(nvars, *i)),
            Expr::Form(i) => write!(f, "d{}", var_name(nvars, *i)),
            Expr::Add(a, b) => binary(f, a, "+", b, 1),
            Expr::Sub(a, b) => binary(f, a, "-", b, 1),
            Expr::Mul(a, b) => binary(f, a, "*", b, 2),
            Expr::Div(a, b) => binary(f, a, "/", b, 2),
            Expr::Wedge(a, b) => {
                // an integer right after '^' would read as an exponent
                child(f, a, 2)?;
                write!(f, " ^ ")?;
                child(f, b, if b.starts_with_int() { 6 } else { 3 })
            }
            Expr::Pow(a, e) => {
                child(f, a, 4)?;
                write!(f, "^{e}")
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                child(f, a, 3)
            }
            Expr::D(a) => {
                write!(f, "d(")?;
                a.write(f, nvars)?;
                write!(f, ")")
            }
            Expr::Dlog(a) => {
                write!(f, "dlog(")?;
                a.write(f, nvars)?;
                write!(f, ")")
            }
        }
    }

    /// Evaluates a sort-checked expression.
    pub fn eval(&self, ring: Ring) -> Result<Value, ParseError> {
        let nvars = ring.nvars();
        let domain = |e: charp_core::Error| ParseError::Domain {
            expr: self.display(nvars).to_string(),
            source: e,
        };
        let sort_err = |message: &str| ParseError::Sort {
            expr: self.display(nvars).to_string(),
            message: message.into(),
        };
        Ok(match self {
            Expr::Int(v) => Value::Scalar(RatFunc::constant(ring, *v as i64)),
            Expr::Var(i) => Value::Scalar(RatFunc::var(ring, *i)),
            Expr::Form(i) => Value::One(OneForm::basis(ring, *i)),
            Expr::Add(a, b) => match (a.eval(ring)?, b.eval(ring)?) {
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x + &y),
                (Value::One(x), Value::One(y)) => Value::One(&x + &y),
                (Value::Two(x), Value::Two(y)) => Value::Two(&x + &y),
                _ => return Err(sort_err("cannot add values of different sorts")),
            },
            Expr::Sub(a, b) => match (a.eval(ring)?, b.eval(ring)?) {
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x - &y),
                (Value::One(x), Value::One(y)) => Value::One(&x - &y),
                (Value::Two(x), Value::Two(y)) => Value::Two(&x - &y),
                _ => return Err(sort_err("cannot subtract values of different sorts")),
            },
            Expr::Mul(a, b) | Expr::Wedge(a, b) => match (a.eval(ring)?, b.eval(ring)?) {
                (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x * &y),
                (Value::Scalar(s), v) | (v, Value::Scalar(s)) => v.scale(&s),
                (Value::One(x), Value::One(y)) => Value::Two(x.wedge(&y)),
                _ => return Err(sort_err("forms of degree above 2 are not supported")),
            },
            Expr::Div(a, b) => {
                let Value::Scalar(den) = b.eval(ring)? else {
                    return Err(sort_err("cannot divide by a form"));
                };
                let inv = den.inv().map_err(domain)?;
                a.eval(ring)?.scale(&inv)
            }
            Expr::Pow(a, e) => {
                let Value::Scalar(x) = a.eval(ring)? else {
                    return Err(sort_err("cannot raise a form to a power"));
                };
                let degree = x.num().total_degree().unwrap_or(0).max(x.den().total_degree().unwrap_or(0));
                if degree.saturating_mul(*e as u64) > MAX_DEGREE {
                    return Err(domain(charp_core::Error::ExponentOverflow));
                }
                Value::Scalar(x.pow(*e))
            }
            Expr::Neg(a) => a.eval(ring)?.neg(),
            Expr::D(a) => match a.eval(ring)? {
                Value::Scalar(x) => Value::One(differential(&x)),
                Value::One(w) => Value::Two(w.exterior_derivative()),
                Value::Two(_) => return Err(sort_err("d of a 2-form is not supported")),
            },
            Expr::Dlog(a) => match a.eval(ring)? {
                Value::Scalar(x) => Value::One(dlog(&x).map_err(domain)?),
                _ => return Err(sort_err("dlog takes a function")),
            },
        })
    }
}

/// Degree cap on `f^e` while evaluating, to keep exponents representable.
const MAX_DEGREE: u64 = 1 << 16;

pub struct Display<'a> {
    expr: &'a Expr,
    nvars: usize,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.write(f, self.nvars)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Scalar(RatFunc),
    One(OneForm),
    Two(TwoForm),
}

impl Value {
    pub fn sort(&self) -> Sort {
        match self {
            Value::Scalar(_) => Sort::Scalar,
            Value::One(_) => Sort::OneForm,
            Value::Two(_) => Sort::TwoForm,
        }
    }

    fn scale(self, s: &RatFunc) -> Value {
        match self {
            Value::Scalar(x) => Value::Scalar(&x * s),
            Value::One(w) => Value::One(w.scale(s)),
            Value::Two(w) => Value::Two(w.scale(s)),
        }
    }

    fn neg(self) -> Value {
        match self {
            Value::Scalar(x) => Value::Scalar(-x),
            Value::One(w) => Value::One(-w),
            Value::Two(w) => Value::Two(-w),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(x) => write!(f, "{x}"),
            Value::One(w) => write!(f, "{w}"),
            Value::Two(w) => write!(f, "{w}"),
        }
    }
}

/// Parses and evaluates in one step.
pub fn evaluate(text: &str, ring: Ring) -> Result<Value, ParseError> {
    parse(text, ring)?.eval(ring)
}

pub fn scalar(text: &str, ring: Ring) -> Result<RatFunc, ParseError> {
    match evaluate(text, ring)? {
        Value::Scalar(x) => Ok(x),
        v => Err(wrong_sort(text, Sort::Scalar, v.sort())),
    }
}

/// A 1-form; the literal `0` is accepted as the zero form.
pub fn one_form(text: &str, ring: Ring) -> Result<OneForm, ParseError> {
    match evaluate(text, ring)? {
        Value::One(w) => Ok(w),
        Value::Scalar(x) if x.is_zero() => Ok(OneForm::zero(ring)),
        v => Err(wrong_sort(text, Sort::OneForm, v.sort())),
    }
}

fn wrong_sort(text: &str, want: Sort, got: Sort) -> ParseError {
    ParseError::Sort {
        expr: text.trim().to_string(),
        message: format!("expected a {want}, found a {got}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, n: usize) -> Ring {
        Ring::new(p, n).unwrap()
    }

    #[test]
    fn spec_examples() {
        let r = ring(5, 2);
        assert_eq!(scalar("x^2*y + 2", r).unwrap().to_string(), "x^2*y + 2");
        assert!(scalar("(x+1)/(x-1)", r).is_ok());
        assert_eq!(
            parse("x^^2", r),
            Err(ParseError::Syntax {
                offset: 2,
                expected: "an integer, a variable, dx_i, d(...), dlog(...) or '('".into()
            })
        );
        let r1 = ring(3, 1);
        assert_eq!(evaluate("dlog(x) * dx", r1).unwrap(), Value::Two(TwoForm::zero(r1)));
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let r = ring(7, 1);
        assert_eq!(scalar("-x^2", r).unwrap().to_string(), "6*x^2");
        assert_eq!(scalar("(-x)^2", r).unwrap().to_string(), "x^2");
        assert_eq!(scalar("x*-3", r).unwrap().to_string(), "4*x");
    }

    #[test]
    fn wedge_and_power() {
        let r = ring(3, 2);
        assert_eq!(evaluate("dx^dy", r).unwrap().to_string(), "dx^dy");
        assert_eq!(evaluate("dy * dx", r).unwrap().to_string(), "2*dx^dy");
        assert_eq!(evaluate("x^3 * dy ^ dx", r).unwrap().to_string(), "2*x^3*dx^dy");
        assert_eq!(evaluate("d(x^2*y*dx + x*dy)", r).unwrap().to_string(), "(2*x^2 + 1)*dx^dy");
    }

    #[test]
    fn variable_names() {
        let r = ring(3, 2);
        assert_eq!(parse("x2", r), parse("y", r));
        assert_eq!(parse("dx1", r), parse("dx", r));
        assert!(matches!(parse("z", r), Err(ParseError::UnknownVariable { offset: 0, .. })));
        assert!(matches!(parse("x + xy", r), Err(ParseError::UnknownVariable { offset: 4, .. })));
    }

    #[test]
    fn sort_errors() {
        let r = ring(3, 2);
        assert!(matches!(parse("x / dx", r), Err(ParseError::Sort { .. })));
        assert!(matches!(parse("x + dx", r), Err(ParseError::Sort { .. })));
        assert!(matches!(parse("dlog(dx)", r), Err(ParseError::Sort { .. })));
        assert!(matches!(parse("(dx^dy) * dx", r), Err(ParseError::Sort { .. })));
        assert!(matches!(parse("x ^ y", r), Err(ParseError::Sort { .. })));
    }

    #[test]
    fn domain_errors_name_the_subexpression() {
        let r = ring(3, 1);
        match evaluate("1/(x - x)", r) {
            Err(ParseError::Domain { expr, .. }) => assert_eq!(expr, "1 / (x - x)"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn integers_reduce_mod_p() {
        let r = ring(5, 1);
        assert_eq!(parse("12", r).unwrap(), Expr::Int(2));
        assert_eq!(scalar("-1", r).unwrap().to_string(), "4");
    }

    #[test]
    fn printer_examples() {
        let r = ring(5, 2);
        for (src, printed) in [
            ("x - (y - 1)", "x - (y - 1)"),
            ("(x - y) - 1", "x - y - 1"),
            ("-(x^2)", "-x^2"),
            ("(-x)^2", "(-x)^2"),
            ("dx ^ (3)", "dx ^ (3)"),
            ("d(x)*dlog(y+1)", "d(x) * dlog(y + 1)"),
        ] {
            let e = parse_syntax(src, r).unwrap_or_else(|err| panic!("{src}: {err}"));
            let shown = e.display(2).to_string();
            assert_eq!(shown, printed);
            assert_eq!(parse_syntax(&shown, r).unwrap(), e);
        }
    }
}
