//! Script syntax: a tokenizer, a recursive-descent parser and a printer
//! whose output parses back to the same tree.
//!
//! ```text
//! script := stmt*
//! stmt   := "let" NAME "=" expr ";" | "check" expr "==" expr ";"
//! expr   := term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := "-" factor | atom ("^" INT)?
//! atom   := NAME | INT | NAME "(" args ")" | "(" expr ")"
//! ```
//!
//! `#` starts a comment running to the end of the line.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

/// Argument-count rule of a builtin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Arity {
    Exact(usize),
    AtLeast(usize),
    Between(usize, usize),
    /// An expression followed by name/value pairs.
    Pairs,
}

impl Arity {
    fn accepts(self, n: usize) -> bool {
        match self {
            Arity::Exact(k) => n == k,
            Arity::AtLeast(k) => n >= k,
            Arity::Between(a, b) => (a..=b).contains(&n),
            Arity::Pairs => n >= 3 && n % 2 == 1,
        }
    }

    fn describe(self) -> String {
        match self {
            Arity::Exact(k) => format!("{k}"),
            Arity::AtLeast(k) => format!("at least {k}"),
            Arity::Between(a, b) => format!("{a} to {b}"),
            Arity::Pairs => "an odd number (at least 3)".into(),
        }
    }
}

macro_rules! builtins {
    ($($variant:ident => $name:literal, $arity:expr;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum Builtin { $($variant),* }

        impl Builtin {
            pub const ALL: &'static [Builtin] = &[$(Builtin::$variant),*];

            pub fn name(self) -> &'static str {
                match self { $(Builtin::$variant => $name),* }
            }

            fn arity(self) -> Arity {
                match self { $(Builtin::$variant => $arity),* }
            }

            pub fn from_name(name: &str) -> Option<Builtin> {
                match name { $($name => Some(Builtin::$variant),)* _ => None }
            }
        }
    };
}

builtins! {
    Bundle => "bundle", Arity::Exact(2);
    Trivial => "trivial", Arity::Exact(1);
    Dual => "dual", Arity::Exact(1);
    Det => "det", Arity::Exact(1);
    Wedge2 => "wedge2", Arity::Exact(1);
    TensorLine => "tensor_line", Arity::Exact(2);
    Quotient => "quotient", Arity::Exact(2);
    Grass => "grass", Arity::Exact(3);
    Sub => "sub", Arity::Exact(1);
    Quot => "quot", Arity::Exact(1);
    Fiber => "fiber", Arity::Exact(2);
    Class => "c", Arity::Exact(2);
    Porteous => "porteous", Arity::Exact(3);
    Schur => "schur", Arity::AtLeast(2);
    Gysin => "gysin", Arity::Exact(2);
    Nf => "nf", Arity::Exact(2);
    Subs => "subs", Arity::Pairs;
    Ideal => "ideal", Arity::AtLeast(1);
    Member => "member", Arity::Exact(2);
    Contains => "contains", Arity::Between(2, 3);
    Structure => "structure", Arity::Between(1, 2);
    Relation => "relation", Arity::Exact(2);
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Name(String),
    Int(BigInt),
    Call(Builtin, Vec<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Let(String, Expr),
    Check(Expr, Expr),
}

/// Statements with their starting positions. Equality ignores positions.
#[derive(Debug, Clone)]
pub struct Script {
    pub stmts: Vec<Stmt>,
    pub positions: Vec<Pos>,
}

impl PartialEq for Script {
    fn eq(&self, other: &Self) -> bool {
        self.stmts == other.stmts
    }
}

impl Eq for Script {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Let,
    Check,
    LParen,
    RParen,
    Comma,
    Semi,
    Assign,
    EqEq,
    Plus,
    Minus,
    Star,
    Caret,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Let => f.write_str("`let`"),
            Tok::Check => f.write_str("`check`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Assign => f.write_str("`=`"),
            Tok::EqEq => f.write_str("`==`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let ch = chars[i];
        let pos = Pos { line, col };
        let advance = |i: &mut usize, col: &mut usize, n: usize| {
            *i += n;
            *col += n;
        };
        match ch {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(&mut i, &mut col, 1),
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    advance(&mut i, &mut col, 1);
                }
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    advance(&mut i, &mut col, 1);
                }
                let digits: String = chars[start..i].iter().collect();
                out.push((Tok::Int(digits.parse().expect("digits")), pos));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    advance(&mut i, &mut col, 1);
                }
                let word: String = chars[start..i].iter().collect();
                let tok = match word.as_str() {
                    "let" => Tok::Let,
                    "check" => Tok::Check,
                    _ => Tok::Ident(word),
                };
                out.push((tok, pos));
            }
            '=' if chars.get(i + 1) == Some(&'=') => {
                out.push((Tok::EqEq, pos));
                advance(&mut i, &mut col, 2);
            }
            _ => {
                let tok = match ch {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    '=' => Tok::Assign,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    other => {
                        return Err(ParseError {
                            pos,
                            message: format!("unexpected character `{other}`"),
                        })
                    }
                };
                out.push((tok, pos));
                advance(&mut i, &mut col, 1);
            }
        }
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {tok}, found {}", self.peek()))
        }
    }

    fn script(&mut self) -> Result<Script, ParseError> {
        let mut stmts = Vec::new();
        let mut positions = Vec::new();
        while *self.peek() != Tok::Eof {
            positions.push(self.pos());
            stmts.push(self.stmt()?);
        }
        Ok(Script { stmts, positions })
    }

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        match self.bump() {
            Tok::Let => {
                let name = match self.bump() {
                    Tok::Ident(n) if Builtin::from_name(&n).is_none() => n,
                    Tok::Ident(n) => {
                        self.at -= 1;
                        return self.error(format!("`{n}` is a reserved name"));
                    }
                    other => {
                        self.at -= 1;
                        return self.error(format!("expected a name, found {other}"));
                    }
                };
                self.expect(Tok::Assign)?;
                let e = self.expr()?;
                self.expect(Tok::Semi)?;
                Ok(Stmt::Let(name, e))
            }
            Tok::Check => {
                let lhs = self.expr()?;
                self.expect(Tok::EqEq)?;
                let rhs = self.expr()?;
                self.expect(Tok::Semi)?;
                Ok(Stmt::Check(lhs, rhs))
            }
            other => {
                self.at -= 1;
                self.error(format!("expected `let` or `check`, found {other}"))
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let pos = self.pos();
            return match self.bump() {
                Tok::Int(n) => match u32::try_from(&n) {
                    Ok(e) => Ok(Expr::Pow(Box::new(base), e)),
                    Err(_) => Err(ParseError {
                        pos,
                        message: format!("exponent {n} is too large"),
                    }),
                },
                other => Err(ParseError {
                    pos,
                    message: format!("expected an integer exponent, found {other}"),
                }),
            };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => Ok(Expr::Int(n)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if *self.peek() != Tok::LParen {
                    return Ok(Expr::Name(name));
                }
                let Some(builtin) = Builtin::from_name(&name) else {
                    return Err(ParseError {
                        pos,
                        message: format!("unknown function `{name}`"),
                    });
                };
                self.bump();
                let mut args = Vec::new();
                if *self.peek() != Tok::RParen {
                    args.push(self.expr()?);
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.expr()?);
                    }
                }
                self.expect(Tok::RParen)?;
                if !builtin.arity().accepts(args.len()) {
                    return Err(ParseError {
                        pos,
                        message: format!(
                            "`{name}` takes {} arguments, got {}",
                            builtin.arity().describe(),
                            args.len()
                        ),
                    });
                }
                Ok(Expr::Call(builtin, args))
            }
            Tok::Eof => Err(ParseError {
                pos,
                message: "unexpected end of input, expected an expression".into(),
            }),
            other => Err(ParseError {
                pos,
                message: format!("expected an expression, found {other}"),
            }),
        }
    }
}

pub fn parse_script(text: &str) -> Result<Script, ParseError> {
    Parser {
        toks: tokenize(text)?,
        at: 0,
    }
    .script()
}

pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        at: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after expression", p.peek()));
    }
    Ok(e)
}

// Binding strength used by the printer.
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const ATOM: u8 = 4;

fn strength(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => SUM,
        Expr::Mul(..) => PRODUCT,
        Expr::Neg(..) => UNARY,
        Expr::Pow(..) | Expr::Name(_) | Expr::Int(_) | Expr::Call(..) => ATOM,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if strength(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Name(n) => f.write_str(n),
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Call(b, args) => {
                write!(f, "{}(", b.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_at(f, a, UNARY)
            }
            Expr::Add(a, b) => {
                write_at(f, a, SUM)?;
                f.write_str(" + ")?;
                write_at(f, b, PRODUCT)
            }
            Expr::Sub(a, b) => {
                write_at(f, a, SUM)?;
                f.write_str(" - ")?;
                write_at(f, b, PRODUCT)
            }
            Expr::Mul(a, b) => {
                write_at(f, a, PRODUCT)?;
                f.write_str("*")?;
                write_at(f, b, UNARY)
            }
            Expr::Pow(a, e) => {
                // The base of a power is always an atom.
                match **a {
                    Expr::Name(_) | Expr::Int(_) | Expr::Call(..) => write!(f, "{a}")?,
                    _ => write!(f, "({a})")?,
                }
                write!(f, "^{e}")
            }
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Let(n, e) => write!(f, "let {n} = {e};"),
            Stmt::Check(a, b) => write!(f, "check {a} == {b};"),
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stmts {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
