//! Arithmetic expression trees for coefficient fields over the variables
//! `y1`, `y2`, `t`.
//!
//! Grammar: numbers, the three variables, `+ - * / ^`, parentheses, the
//! functions `sin cos exp abs min max`, and the constant `pi`. `^` is
//! right-associative and binds tighter than unary minus. Printing a tree
//! yields a fully parenthesized form that reparses to the same tree.

use std::fmt;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Y1,
    Y2,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Abs,
    Min,
    Max,
}

impl Func {
    fn arity(self) -> usize {
        match self {
            Func::Min | Func::Max => 2,
            _ => 1,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Abs => "abs",
            Func::Min => "min",
            Func::Max => "max",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

impl Expr {
    /// Evaluate at (y1, y2, t). Division by zero is an evaluation error,
    /// not a parse error.
    pub fn eval(&self, y1: f64, y2: f64, t: f64) -> Result<f64> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var(Var::Y1) => y1,
            Expr::Var(Var::Y2) => y2,
            Expr::Var(Var::T) => t,
            Expr::Neg(e) => -e.eval(y1, y2, t)?,
            Expr::Bin(op, a, b) => {
                let a = a.eval(y1, y2, t)?;
                let b = b.eval(y1, y2, t)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(Error::Eval("division by zero".into()));
                        }
                        a / b
                    }
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(f, args) => {
                let a = args[0].eval(y1, y2, t)?;
                match f {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Exp => a.exp(),
                    Func::Abs => a.abs(),
                    Func::Min => a.min(args[1].eval(y1, y2, t)?),
                    Func::Max => a.max(args[1].eval(y1, y2, t)?),
                }
            }
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(Var::Y1) => write!(f, "y1"),
            Expr::Var(Var::Y2) => write!(f, "y2"),
            Expr::Var(Var::T) => write!(f, "t"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Bin(op, a, b) => {
                let s = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({a} {s} {b})")
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        match c {
            '0'..='9' | '.' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_digit() || bytes[j] == b'.') {
                    j += 1;
                }
                if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                    let mut k = j + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        j = k;
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                    }
                }
                let s = &text[i..j];
                let v: f64 = s.parse().map_err(|_| Error::Parse {
                    offset: start,
                    msg: format!("invalid number literal '{s}'"),
                })?;
                toks.push((start, Tok::Num(v)));
                i = j;
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut j = i;
                while j < bytes.len()
                    && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_')
                {
                    j += 1;
                }
                toks.push((start, Tok::Ident(text[i..j].to_string())));
                i = j;
            }
            '+' | '-' | '*' | '/' | '^' => {
                toks.push((start, Tok::Op(c)));
                i += 1;
            }
            '(' => {
                toks.push((start, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((start, Tok::RParen));
                i += 1;
            }
            ',' => {
                toks.push((start, Tok::Comma));
                i += 1;
            }
            _ => {
                return Err(Error::Parse {
                    offset: start,
                    msg: format!("unexpected character '{c}'"),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

// Binding powers: additive (1,2), multiplicative (3,4), unary minus 5,
// power (8,7) so that `^` is right-associative and `-x^2 = -(x^2)`.
const UNARY_BP: u8 = 5;

fn infix_bp(c: char) -> Option<(u8, u8, BinOp)> {
    match c {
        '+' => Some((1, 2, BinOp::Add)),
        '-' => Some((1, 2, BinOp::Sub)),
        '*' => Some((3, 4, BinOp::Mul)),
        '/' => Some((3, 4, BinOp::Div)),
        '^' => Some((8, 7, BinOp::Pow)),
        _ => None,
    }
}

impl Parser {
    fn peek(&self) -> Option<&(usize, Tok)> {
        self.toks.get(self.pos)
    }

    fn offset(&self) -> usize {
        self.peek().map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_rparen(&mut self) -> Result<()> {
        match self.next() {
            Some((_, Tok::RParen)) => Ok(()),
            other => Err(Error::Parse {
                offset: other.map(|(o, _)| o).unwrap_or(self.end),
                msg: "expected ')'".into(),
            }),
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        let (offset, tok) = self.next().ok_or(Error::Parse {
            offset: self.end,
            msg: "unexpected end of expression".into(),
        })?;
        match tok {
            Tok::Num(v) => Ok(Expr::Const(v)),
            Tok::Ident(name) => match name.as_str() {
                "y1" => Ok(Expr::Var(Var::Y1)),
                "y2" => Ok(Expr::Var(Var::Y2)),
                "t" => Ok(Expr::Var(Var::T)),
                "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                "sin" | "cos" | "exp" | "abs" | "min" | "max" => {
                    let func = match name.as_str() {
                        "sin" => Func::Sin,
                        "cos" => Func::Cos,
                        "exp" => Func::Exp,
                        "abs" => Func::Abs,
                        "min" => Func::Min,
                        _ => Func::Max,
                    };
                    match self.next() {
                        Some((_, Tok::LParen)) => {}
                        other => {
                            return Err(Error::Parse {
                                offset: other.map(|(o, _)| o).unwrap_or(self.end),
                                msg: format!("expected '(' after '{}'", func.name()),
                            })
                        }
                    }
                    let mut args = vec![self.expr_bp(0)?];
                    while matches!(self.peek(), Some((_, Tok::Comma))) {
                        self.next();
                        args.push(self.expr_bp(0)?);
                    }
                    self.expect_rparen()?;
                    if args.len() != func.arity() {
                        return Err(Error::Parse {
                            offset,
                            msg: format!(
                                "'{}' takes {} argument(s), got {}",
                                func.name(),
                                func.arity(),
                                args.len()
                            ),
                        });
                    }
                    Ok(Expr::Call(func, args))
                }
                _ => Err(Error::Parse {
                    offset,
                    msg: format!("unknown identifier '{name}'"),
                }),
            },
            Tok::LParen => {
                let e = self.expr_bp(0)?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Op('-') => Ok(Expr::Neg(Box::new(self.expr_bp(UNARY_BP)?))),
            Tok::Op('+') => self.expr_bp(UNARY_BP),
            _ => Err(Error::Parse {
                offset,
                msg: "expected a value".into(),
            }),
        }
    }

    fn expr_bp(&mut self, min_bp: u8) -> Result<Expr> {
        let mut lhs = self.primary()?;
        while let Some((_, Tok::Op(c))) = self.peek() {
            let Some((l_bp, r_bp, op)) = infix_bp(*c) else {
                break;
            };
            if l_bp < min_bp {
                break;
            }
            self.next();
            let rhs = self.expr_bp(r_bp)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }
}

/// Parse an expression over `y1`, `y2`, `t`. Errors carry the byte offset
/// of the offending token (end of input for truncated expressions).
pub fn parse(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len() };
    let e = p.expr_bp(0)?;
    if let Some((offset, _)) = p.peek() {
        return Err(Error::Parse {
            offset: *offset,
            msg: "trailing input after expression".into(),
        });
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(text: &str, y1: f64, y2: f64, t: f64) -> f64 {
        parse(text).unwrap().eval(y1, y2, t).unwrap()
    }

    #[test]
    fn direct_arithmetic() {
        assert_eq!(ev("1 + t^2/(1+t^2)", 0.0, 0.0, 1.0), 1.5);
        assert!((ev("sin(2*pi*y1)", 0.25, 0.0, 0.0) - 1.0).abs() < 1e-15);
        assert_eq!(ev("min(2, max(t, 3))", 0.0, 0.0, 7.0), 2.0);
        assert_eq!(ev("2^3^2", 0.0, 0.0, 0.0), 512.0);
        assert_eq!(ev("-2^2", 0.0, 0.0, 0.0), -4.0);
        assert_eq!(ev("1 - 2 - 3", 0.0, 0.0, 0.0), -4.0);
        assert_eq!(ev("abs(-3.5)", 0.0, 0.0, 0.0), 3.5);
        assert_eq!(ev("1e-2 + 2E3", 0.0, 0.0, 0.0), 2000.01);
    }

    #[test]
    fn unbalanced_paren_offset() {
        match parse("2*(3") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_identifier() {
        match parse("2*x + 1") {
            Err(Error::Parse { offset, msg }) => {
                assert_eq!(offset, 2);
                assert!(msg.contains("x"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn division_by_zero_at_eval() {
        let e = parse("1/(y1 - 1)").unwrap();
        assert!(e.eval(1.0, 0.0, 0.0).is_err());
        assert!(e.eval(2.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn wrong_arity() {
        assert!(parse("sin(1, 2)").is_err());
        assert!(parse("min(1)").is_err());
    }

    #[test]
    fn print_reparse_roundtrip() {
        for text in [
            "1 + t^2/(1+t^2)",
            "sin(2*pi*y1) * cos(2*pi*y2)",
            "-(y1 - 0.5)^2 + exp(-t)",
            "min(1, max(y1, y2)) / (2 + t^2)",
            "2 - -3 * -y1",
        ] {
            let e = parse(text).unwrap();
            let printed = format!("{e}");
            let e2 = parse(&printed).unwrap();
            assert_eq!(e, e2, "round trip changed the tree for {text}");
        }
    }
}
