use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{CmpOp, Formula, LinAtom, ModAtom, PresburgerError};
use crate::diophantine::IntVector;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Cmp(CmpOp),
    Mod,
    Bang,
    AndAnd,
    OrOr,
    True,
    False,
    Eof,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(v) => format!("integer {v}"),
        Tok::Var(i) => format!("x{i}"),
        Tok::Eof => "end of input".to_string(),
        other => format!("{other:?}"),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, PresburgerError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |offset: usize, message: &str| PresburgerError::Parse {
        offset,
        message: message.to_string(),
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let two = |s: &str| src[i..].starts_with(s);
        let tok = if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Int(src[start..i].parse().expect("digits")), start));
            continue;
        } else if c == b'x' && i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let idx: usize = src[start + 1..i]
                .parse()
                .map_err(|_| err(start, "variable index too large"))?;
            if idx == 0 {
                return Err(err(start, "variables are numbered from x1"));
            }
            out.push((Tok::Var(idx), start));
            continue;
        } else if c.is_ascii_alphabetic() {
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let tok = match &src[start..i] {
                "mod" => Tok::Mod,
                "true" => Tok::True,
                "false" => Tok::False,
                _ => return Err(err(start, "unknown identifier")),
            };
            out.push((tok, start));
            continue;
        } else if two("<=") {
            i += 2;
            Tok::Cmp(CmpOp::Le)
        } else if two(">=") {
            i += 2;
            Tok::Cmp(CmpOp::Ge)
        } else if two("!=") {
            i += 2;
            Tok::Cmp(CmpOp::Ne)
        } else if two("&&") {
            i += 2;
            Tok::AndAnd
        } else if two("||") {
            i += 2;
            Tok::OrOr
        } else {
            i += 1;
            match c {
                b'<' => Tok::Cmp(CmpOp::Lt),
                b'>' => Tok::Cmp(CmpOp::Gt),
                b'=' => Tok::Cmp(CmpOp::Eq),
                b'+' => Tok::Plus,
                b'-' => Tok::Minus,
                b'*' => Tok::Star,
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'!' => Tok::Bang,
                _ => return Err(err(start, "unexpected character")),
            }
        };
        out.push((tok, start));
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

/// A linear expression: coefficients (index 0 is `x1`) and a constant.
struct Expr {
    coeffs: IntVector,
    constant: BigInt,
}

impl Expr {
    fn add_term(&mut self, var: Option<usize>, value: BigInt) {
        match var {
            None => self.constant += value,
            Some(v) => {
                if self.coeffs.len() < v {
                    self.coeffs.resize(v, BigInt::zero());
                }
                self.coeffs[v - 1] += value;
            }
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, PresburgerError> {
        Err(PresburgerError::Parse {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, PresburgerError> {
        self.fail(format!("expected {wanted}, found {}", describe(self.peek())))
    }

    fn formula(&mut self) -> Result<Formula, PresburgerError> {
        let mut left = self.conjunction()?;
        while *self.peek() == Tok::OrOr {
            self.bump();
            let right = self.conjunction()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, PresburgerError> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::AndAnd {
            self.bump();
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, PresburgerError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::LParen => {
                // `(expr) mod m = r` or a parenthesised formula.
                let save = self.pos;
                self.bump();
                if let Ok(e) = self.expr() {
                    if *self.peek() == Tok::RParen {
                        self.bump();
                        if *self.peek() == Tok::Mod {
                            return self.mod_tail(e);
                        }
                    }
                }
                self.pos = save;
                self.bump();
                let f = self.formula()?;
                if *self.peek() != Tok::RParen {
                    return self.unexpected("`)`");
                }
                self.bump();
                Ok(f)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, PresburgerError> {
        let lhs = self.expr()?;
        match self.peek().clone() {
            Tok::Mod => self.mod_tail(lhs),
            Tok::Cmp(op) => {
                self.bump();
                let rhs = self.expr()?;
                let n = lhs.coeffs.len().max(rhs.coeffs.len());
                let coeffs = (0..n)
                    .map(|i| {
                        let l = lhs.coeffs.get(i).cloned().unwrap_or_default();
                        let r = rhs.coeffs.get(i).cloned().unwrap_or_default();
                        l - r
                    })
                    .collect();
                Ok(Formula::Lin(LinAtom::new(
                    coeffs,
                    op,
                    rhs.constant - lhs.constant,
                )))
            }
            _ => self.unexpected("a comparison or `mod`"),
        }
    }

    fn mod_tail(&mut self, e: Expr) -> Result<Formula, PresburgerError> {
        self.bump(); // mod
        let at = self.offset();
        let Tok::Int(m) = self.bump() else {
            self.pos -= 1;
            return self.unexpected("a modulus");
        };
        if *self.peek() != Tok::Cmp(CmpOp::Eq) {
            return self.unexpected("`=`");
        }
        self.bump();
        let Tok::Int(r) = self.bump() else {
            self.pos -= 1;
            return self.unexpected("a residue");
        };
        if m < BigInt::from(2) || r >= m {
            return Err(PresburgerError::Parse {
                offset: at,
                message: "modulus must be ≥ 2 and the residue below it".to_string(),
            });
        }
        let residue = (r - e.constant).mod_floor(&m);
        Ok(Formula::Mod(
            ModAtom::new(e.coeffs, m, residue).expect("validated"),
        ))
    }

    fn expr(&mut self) -> Result<Expr, PresburgerError> {
        let mut e = Expr {
            coeffs: Vec::new(),
            constant: BigInt::zero(),
        };
        let mut negative = false;
        match self.peek() {
            Tok::Minus => {
                self.bump();
                negative = true;
            }
            Tok::Plus => {
                self.bump();
            }
            _ => {}
        }
        loop {
            let (var, mag) = self.term()?;
            e.add_term(var, if negative { -mag } else { mag });
            match self.peek() {
                Tok::Plus => negative = false,
                Tok::Minus => negative = true,
                _ => return Ok(e),
            }
            self.bump();
        }
    }

    fn term(&mut self) -> Result<(Option<usize>, BigInt), PresburgerError> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                Ok((Some(v), BigInt::from(1)))
            }
            Tok::Int(k) => {
                self.bump();
                if *self.peek() == Tok::Star {
                    self.bump();
                    match self.peek().clone() {
                        Tok::Var(v) => {
                            self.bump();
                            Ok((Some(v), k))
                        }
                        _ => self.unexpected("a variable"),
                    }
                } else {
                    Ok((None, k))
                }
            }
            _ => self.unexpected("a term"),
        }
    }
}

/// Parses the textual formula syntax (`x2 <= x1 + 2`, `(x1 mod 2 = 1) && x1 >= 10`, ...).
pub fn parse(src: &str) -> Result<Formula, PresburgerError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.unexpected("end of input");
    }
    Ok(f)
}
