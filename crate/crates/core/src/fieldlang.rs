//! Arithmetic expression language for vector field definitions.
//!
//! A field is written as a parenthesized, comma-separated tuple of
//! expressions over the ambient coordinates `x1..x3`, e.g. `"(x1 - 1, x2)"`.
//! Supported: `+ - * / ^` (with `^` right-associative), unary minus, and the
//! functions `sin cos exp sqrt abs max min`. Numeric literals are f64.
//! Evaluation is pure; any non-finite intermediate surfaces as a domain error
//! carrying the component index instead of a silent NaN.

use crate::error::{Error, Result};
use crate::geom::VecN;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
    Abs,
    Max,
    Min,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Max => "max",
            Func::Min => "min",
        }
    }

    fn arity(self) -> usize {
        match self {
            Func::Max | Func::Min => 2,
            _ => 1,
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "max" => Func::Max,
            "min" => Func::Min,
            _ => return None,
        })
    }
}

/// Expression tree over ambient coordinates.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    /// 0-based coordinate index; `x1` parses to `Var(0)`.
    Var(usize),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

/// A parsed vector field over the ambient coordinates of a model manifold.
#[derive(Clone, Debug)]
pub struct FieldDef {
    pub ambient_dim: usize,
    pub components: Vec<Expr>,
    pub source_text: String,
}

// ---------------------------------------------------------------------------
// lexer
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

fn lex(text: &str) -> Result<Lexer> {
    let mut toks = Vec::new();
    let bytes: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
            }
            '+' => {
                toks.push((Tok::Plus, start));
                i += 1;
            }
            // accept the typographic variants that show up in hand-written notes
            '-' | '\u{2212}' => {
                toks.push((Tok::Minus, start));
                i += 1;
            }
            '*' | '\u{00d7}' => {
                toks.push((Tok::Star, start));
                i += 1;
            }
            '/' | '\u{00f7}' => {
                toks.push((Tok::Slash, start));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, start));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, start));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, start));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, start));
                i += 1;
            }
            '0'..='9' | '.' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_digit() || bytes[j] == '.') {
                    j += 1;
                }
                // exponent part
                if j < bytes.len() && (bytes[j] == 'e' || bytes[j] == 'E') {
                    let mut k = j + 1;
                    if k < bytes.len() && (bytes[k] == '+' || bytes[k] == '-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        while k < bytes.len() && bytes[k].is_ascii_digit() {
                            k += 1;
                        }
                        j = k;
                    }
                }
                let s: String = bytes[i..j].iter().collect();
                let v: f64 = s.parse().map_err(|_| Error::Syntax {
                    pos: start,
                    expected: "numeric literal".into(),
                })?;
                toks.push((Tok::Num(v), start));
                i = j;
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == '_') {
                    j += 1;
                }
                let s: String = bytes[i..j].iter().collect();
                toks.push((Tok::Ident(s), start));
                i = j;
            }
            _ => {
                return Err(Error::Syntax {
                    pos: start,
                    expected: format!("token (found `{c}`)"),
                })
            }
        }
    }
    Ok(Lexer { toks, pos: 0, end: text.chars().count() })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|&(_, p)| p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(Error::Syntax {
                pos: self.here(),
                expected: what.into(),
            }),
        }
    }
}

// ---------------------------------------------------------------------------
// parser: additive -> multiplicative -> unary -> power -> atom
// ---------------------------------------------------------------------------

struct Parser {
    lx: Lexer,
    dim: usize,
}

impl Parser {
    fn additive(&mut self) -> Result<Expr> {
        let mut lhs = self.multiplicative()?;
        loop {
            match self.lx.peek() {
                Some(Tok::Plus) => {
                    self.lx.bump();
                    let rhs = self.multiplicative()?;
                    lhs = Expr::Bin(BinOp::Add, Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.lx.bump();
                    let rhs = self.multiplicative()?;
                    lhs = Expr::Bin(BinOp::Sub, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn multiplicative(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.lx.peek() {
                Some(Tok::Star) => {
                    self.lx.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::Bin(BinOp::Mul, Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.lx.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::Bin(BinOp::Div, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if let Some(Tok::Minus) = self.lx.peek() {
            self.lx.bump();
            let inner = self.unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.lx.peek() {
            self.lx.bump();
            // right-associative; allow a sign in the exponent
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.lx.here();
        match self.lx.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Num(v)),
            Some(Tok::LParen) => {
                let e = self.additive()?;
                self.lx.expect(Tok::RParen, "closing `)`")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                if let Some(Tok::LParen) = self.lx.peek() {
                    let func = Func::from_name(&name)
                        .ok_or(Error::UnknownSymbol { name: name.clone(), pos })?;
                    self.lx.bump();
                    let mut args = vec![self.additive()?];
                    while let Some(Tok::Comma) = self.lx.peek() {
                        self.lx.bump();
                        args.push(self.additive()?);
                    }
                    self.lx.expect(Tok::RParen, "closing `)` of call")?;
                    if args.len() != func.arity() {
                        return Err(Error::Syntax {
                            pos,
                            expected: format!("{} argument(s) to {}", func.arity(), func.name()),
                        });
                    }
                    Ok(Expr::Call(func, args))
                } else {
                    self.variable(&name, pos)
                }
            }
            _ => Err(Error::Syntax {
                pos,
                expected: "expression".into(),
            }),
        }
    }

    fn variable(&self, name: &str, pos: usize) -> Result<Expr> {
        let idx = name
            .strip_prefix('x')
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&k| (1..=3).contains(&k));
        match idx {
            Some(k) if k <= self.dim => Ok(Expr::Var(k - 1)),
            _ => Err(Error::UnknownSymbol {
                name: name.into(),
                pos,
            }),
        }
    }
}

/// Parse a comma-separated, parenthesized tuple of `ambient_dim` expressions.
pub fn parse_field(text: &str, ambient_dim: usize) -> Result<FieldDef> {
    assert!((1..=3).contains(&ambient_dim));
    let lx = lex(text)?;
    let mut p = Parser { lx, dim: ambient_dim };
    p.lx.expect(Tok::LParen, "opening `(` of field tuple")?;
    let mut components = vec![p.additive()?];
    while let Some(Tok::Comma) = p.lx.peek() {
        p.lx.bump();
        components.push(p.additive()?);
    }
    p.lx.expect(Tok::RParen, "closing `)` of field tuple")?;
    if p.lx.peek().is_some() {
        return Err(Error::Syntax {
            pos: p.lx.here(),
            expected: "end of input".into(),
        });
    }
    if components.len() != ambient_dim {
        return Err(Error::Arity {
            got: components.len(),
            expected: ambient_dim,
        });
    }
    Ok(FieldDef {
        ambient_dim,
        components,
        source_text: text.to_string(),
    })
}

// ---------------------------------------------------------------------------
// evaluation
// ---------------------------------------------------------------------------

fn eval_expr(e: &Expr, p: &VecN) -> f64 {
    match e {
        Expr::Num(v) => *v,
        Expr::Var(i) => p[*i],
        Expr::Neg(inner) => -eval_expr(inner, p),
        Expr::Bin(op, l, r) => {
            let a = eval_expr(l, p);
            let b = eval_expr(r, p);
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a / b,
                BinOp::Pow => a.powf(b),
            }
        }
        Expr::Call(f, args) => {
            let a = eval_expr(&args[0], p);
            match f {
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Exp => a.exp(),
                Func::Sqrt => a.sqrt(),
                Func::Abs => a.abs(),
                Func::Max => a.max(eval_expr(&args[1], p)),
                Func::Min => a.min(eval_expr(&args[1], p)),
            }
        }
    }
}

/// Component-wise evaluation at an ambient point.
pub fn eval_field(f: &FieldDef, p: &VecN) -> Result<VecN> {
    debug_assert_eq!(p.dim(), f.ambient_dim);
    let mut out = VecN::zero(f.ambient_dim);
    for (i, comp) in f.components.iter().enumerate() {
        let v = eval_expr(comp, p);
        if !v.is_finite() {
            return Err(Error::Domain {
                component: i + 1,
                what: "non-finite value".into(),
                point: *p,
            });
        }
        out[i] = v;
    }
    Ok(out)
}

/// Pointwise negation: `eval(negate(f), p) == -eval(f, p)`.
pub fn negate_field(f: &FieldDef) -> FieldDef {
    let components = f
        .components
        .iter()
        .map(|c| Expr::Neg(Box::new(c.clone())))
        .collect();
    FieldDef {
        ambient_dim: f.ambient_dim,
        components,
        source_text: format!("-{}", f.source_text),
    }
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Neg(..) => 3,
        Expr::Bin(BinOp::Pow, ..) => 4,
        _ => 5,
    }
}

fn fmt_expr(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let wrap = |child: &Expr, f: &mut fmt::Formatter<'_>, need: u8| -> fmt::Result {
        if prec(child) < need {
            write!(f, "(")?;
            fmt_expr(child, f)?;
            write!(f, ")")
        } else {
            fmt_expr(child, f)
        }
    };
    match e {
        Expr::Num(v) => write!(f, "{v}"),
        Expr::Var(i) => write!(f, "x{}", i + 1),
        Expr::Neg(inner) => {
            write!(f, "-")?;
            wrap(inner, f, 3)
        }
        Expr::Bin(op, l, r) => match op {
            BinOp::Add => {
                wrap(l, f, 1)?;
                write!(f, " + ")?;
                wrap(r, f, 2)
            }
            BinOp::Sub => {
                wrap(l, f, 1)?;
                write!(f, " - ")?;
                wrap(r, f, 2)
            }
            BinOp::Mul => {
                wrap(l, f, 2)?;
                write!(f, "*")?;
                wrap(r, f, 3)
            }
            BinOp::Div => {
                wrap(l, f, 2)?;
                write!(f, "/")?;
                wrap(r, f, 3)
            }
            BinOp::Pow => {
                wrap(l, f, 5)?;
                write!(f, "^")?;
                wrap(r, f, 4)
            }
        },
        Expr::Call(func, args) => {
            write!(f, "{}(", func.name())?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                fmt_expr(a, f)?;
            }
            write!(f, ")")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_expr(self, f)
    }
}

impl fmt::Display for FieldDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
