//! Monadic second-order formulas over linear orders, with brute-force
//! evaluation on finite orders. The finite evaluations are the ground truth
//! that recognizer acceptance is compared against.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Formulas over `(domain, <)` with first-order element variables and
/// monadic set variables. The binder decides the kind of a variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MsoFormula {
    Lt(String, String),
    EqVar(String, String),
    In(String, String),
    Not(Box<MsoFormula>),
    And(Box<MsoFormula>, Box<MsoFormula>),
    Or(Box<MsoFormula>, Box<MsoFormula>),
    Implies(Box<MsoFormula>, Box<MsoFormula>),
    ExistsFo(String, Box<MsoFormula>),
    ForallFo(String, Box<MsoFormula>),
    ExistsSo(String, Box<MsoFormula>),
    ForallSo(String, Box<MsoFormula>),
}

/// Syntax or scope error with the byte position where it was noticed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for FormulaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "formula error at byte {}: {}", self.position, self.message)
    }
}

impl core::error::Error for FormulaError {}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Tok<'a> {
    Ident(&'a str),
    Exists,
    Forall,
    ExistsS,
    ForallS,
    In,
    Dot,
    LParen,
    RParen,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Lt,
    Eq,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok<'_>)>, FormulaError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = match b {
            b'.' => Some(Tok::Dot),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'!' => Some(Tok::Bang),
            b'&' => Some(Tok::Amp),
            b'|' => Some(Tok::Pipe),
            b'<' => Some(Tok::Lt),
            b'=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = tok {
            out.push((i, tok));
            i += 1;
            continue;
        }
        if b == b'-' {
            if bytes.get(i + 1) == Some(&b'>') {
                out.push((i, Tok::Arrow));
                i += 2;
                continue;
            }
            return Err(FormulaError { position: i, message: "expected '->'".into() });
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &src[start..i];
            let tok = match word {
                "exists" => Tok::Exists,
                "forall" => Tok::Forall,
                "existsS" => Tok::ExistsS,
                "forallS" => Tok::ForallS,
                "in" => Tok::In,
                _ => Tok::Ident(word),
            };
            out.push((start, tok));
            continue;
        }
        return Err(FormulaError {
            position: i,
            message: format!("unexpected character '{}'", b as char),
        });
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
    end: usize,
    /// Variables in scope: `(name, is_set_variable)`.
    scope: Vec<(&'a str, bool)>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<Tok<'a>> {
        self.toks.get(self.pos).map(|&(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|&(p, _)| p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok<'a>> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, FormulaError> {
        Err(FormulaError { position: self.here(), message: message.into() })
    }

    fn expect(&mut self, want: Tok<'a>, what: &str) -> Result<(), FormulaError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {}", what))
        }
    }

    fn ident(&mut self, what: &str) -> Result<&'a str, FormulaError> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(name)
            }
            _ => self.err(format!("expected {}", what)),
        }
    }

    fn lookup(&self, name: &str) -> Option<bool> {
        self.scope.iter().rev().find(|(n, _)| *n == name).map(|&(_, so)| so)
    }

    fn element_var(&mut self) -> Result<String, FormulaError> {
        let at = self.here();
        let name = self.ident("an element variable")?;
        match self.lookup(name) {
            Some(false) => Ok(name.into()),
            Some(true) => Err(FormulaError {
                position: at,
                message: format!("'{}' is a set variable here", name),
            }),
            None => Err(FormulaError {
                position: at,
                message: format!("unbound variable '{}'", name),
            }),
        }
    }

    /// implication, right associative, lowest precedence
    fn formula(&mut self) -> Result<MsoFormula, FormulaError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(Tok::Arrow) {
            self.pos += 1;
            let rhs = self.formula()?;
            Ok(MsoFormula::Implies(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<MsoFormula, FormulaError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(Tok::Pipe) {
            self.pos += 1;
            let rhs = self.conjunction()?;
            lhs = MsoFormula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<MsoFormula, FormulaError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(Tok::Amp) {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = MsoFormula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn quantifier(
        &mut self,
        is_set: bool,
        build: fn(String, Box<MsoFormula>) -> MsoFormula,
    ) -> Result<MsoFormula, FormulaError> {
        self.pos += 1;
        let name = self.ident("a variable name")?;
        self.expect(Tok::Dot, "'.' after the bound variable")?;
        self.scope.push((name, is_set));
        let body = self.formula();
        self.scope.pop();
        Ok(build(name.into(), Box::new(body?)))
    }

    fn unary(&mut self) -> Result<MsoFormula, FormulaError> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(MsoFormula::Not(Box::new(self.unary()?)))
            }
            Some(Tok::Exists) => self.quantifier(false, MsoFormula::ExistsFo),
            Some(Tok::Forall) => self.quantifier(false, MsoFormula::ForallFo),
            Some(Tok::ExistsS) => self.quantifier(true, MsoFormula::ExistsSo),
            Some(Tok::ForallS) => self.quantifier(true, MsoFormula::ForallSo),
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(Tok::Ident(_)) => self.atom(),
            _ => self.err("expected a formula"),
        }
    }

    fn atom(&mut self) -> Result<MsoFormula, FormulaError> {
        let lhs = self.element_var()?;
        match self.bump() {
            Some(Tok::Lt) => Ok(MsoFormula::Lt(lhs, self.element_var()?)),
            Some(Tok::Eq) => Ok(MsoFormula::EqVar(lhs, self.element_var()?)),
            Some(Tok::In) => {
                let at = self.here();
                let name = self.ident("a set variable")?;
                match self.lookup(name) {
                    Some(true) => Ok(MsoFormula::In(lhs, name.into())),
                    Some(false) => Err(FormulaError {
                        position: at,
                        message: format!("'{}' is an element variable here", name),
                    }),
                    None => Err(FormulaError {
                        position: at,
                        message: format!("unbound variable '{}'", name),
                    }),
                }
            }
            _ => self.err("expected '<', '=', or 'in'"),
        }
    }
}

/// Parses the `exists x. / existsS X. / & | -> ! < = in` syntax. Variables
/// must be bound, and their first-order or set kind must match their use.
pub fn parse_formula(src: &str) -> Result<MsoFormula, FormulaError> {
    let toks = tokenize(src)?;
    let mut parser = Parser { toks, pos: 0, end: src.len(), scope: Vec::new() };
    let phi = parser.formula()?;
    if parser.pos < parser.toks.len() {
        return parser.err("unexpected trailing input");
    }
    Ok(phi)
}

/// A formula printed as a binary operand. Quantifiers get parentheses:
/// their scope is maximal, so left of `&`, `|`, or `->` they would
/// otherwise swallow the rest of the line on reparse.
struct Operand<'a>(&'a MsoFormula);

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            MsoFormula::ExistsFo(_, _)
            | MsoFormula::ForallFo(_, _)
            | MsoFormula::ExistsSo(_, _)
            | MsoFormula::ForallSo(_, _) => write!(f, "({})", self.0),
            other => write!(f, "{}", other),
        }
    }
}

impl fmt::Display for MsoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MsoFormula::Lt(x, y) => write!(f, "{} < {}", x, y),
            MsoFormula::EqVar(x, y) => write!(f, "{} = {}", x, y),
            MsoFormula::In(x, s) => write!(f, "{} in {}", x, s),
            MsoFormula::Not(p) => write!(f, "!({})", p),
            MsoFormula::And(p, q) => write!(f, "({} & {})", Operand(p), Operand(q)),
            MsoFormula::Or(p, q) => write!(f, "({} | {})", Operand(p), Operand(q)),
            MsoFormula::Implies(p, q) => write!(f, "({} -> {})", Operand(p), Operand(q)),
            MsoFormula::ExistsFo(v, p) => write!(f, "exists {}. {}", v, p),
            MsoFormula::ForallFo(v, p) => write!(f, "forall {}. {}", v, p),
            MsoFormula::ExistsSo(v, p) => write!(f, "existsS {}. {}", v, p),
            MsoFormula::ForallSo(v, p) => write!(f, "forallS {}. {}", v, p),
        }
    }
}

/// Truth of the sentence on the finite linear order `{0 < 1 < .. < n-1}`.
/// Set quantifiers range over all `2^n` subsets, so `n` is capped.
pub fn eval_finite(phi: &MsoFormula, n: usize, bound: usize) -> Result<bool, usize> {
    if n > bound || n > 63 {
        return Err(n);
    }
    let mut fo: Vec<(&str, u64)> = Vec::new();
    let mut so: Vec<(&str, u64)> = Vec::new();
    Ok(eval(phi, n as u64, &mut fo, &mut so))
}

fn eval<'a>(
    phi: &'a MsoFormula,
    n: u64,
    fo: &mut Vec<(&'a str, u64)>,
    so: &mut Vec<(&'a str, u64)>,
) -> bool {
    let get = |env: &[(&str, u64)], name: &str| -> u64 {
        env.iter()
            .rev()
            .find(|(v, _)| *v == name)
            .expect("parser guarantees bound variables")
            .1
    };
    match phi {
        MsoFormula::Lt(x, y) => get(fo, x) < get(fo, y),
        MsoFormula::EqVar(x, y) => get(fo, x) == get(fo, y),
        MsoFormula::In(x, s) => get(so, s) >> get(fo, x) & 1 == 1,
        MsoFormula::Not(p) => !eval(p, n, fo, so),
        MsoFormula::And(p, q) => eval(p, n, fo, so) && eval(q, n, fo, so),
        MsoFormula::Or(p, q) => eval(p, n, fo, so) || eval(q, n, fo, so),
        MsoFormula::Implies(p, q) => !eval(p, n, fo, so) || eval(q, n, fo, so),
        MsoFormula::ExistsFo(v, p) => (0..n).any(|i| {
            fo.push((v, i));
            let r = eval(p, n, fo, so);
            fo.pop();
            r
        }),
        MsoFormula::ForallFo(v, p) => (0..n).all(|i| {
            fo.push((v, i));
            let r = eval(p, n, fo, so);
            fo.pop();
            r
        }),
        MsoFormula::ExistsSo(v, p) => (0..(1u64 << n)).any(|mask| {
            so.push((v, mask));
            let r = eval(p, n, fo, so);
            so.pop();
            r
        }),
        MsoFormula::ForallSo(v, p) => (0..(1u64 << n)).all(|mask| {
            so.push((v, mask));
            let r = eval(p, n, fo, so);
            so.pop();
            r
        }),
    }
}
