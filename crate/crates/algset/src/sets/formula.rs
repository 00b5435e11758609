//! First-order formulas over `ε` and `=`, their surface syntax and their
//! evaluation in a rank-bounded universe.
//!
//! Quantifier bodies bind tightly: `forall x in a . φ and ψ` reads as
//! `(forall x in a . φ) and ψ`. Use parentheses for a wider body.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use super::hf::{parse_literal, HFSet};
use super::universe;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Lit(HFSet),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quant {
    Forall,
    Exists,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Eps(Term, Term),
    Eq(Term, Term),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    /// `bound: Some(t)` restricts the variable to the elements of `t`.
    Quant { q: Quant, var: String, bound: Option<Term>, body: Box<Formula> },
}

const KEYWORDS: [&str; 8] = ["forall", "exists", "in", "and", "or", "not", "eps", "eq"];

impl Formula {
    /// All quantifiers are bounded.
    pub fn is_bounded(&self) -> bool {
        match self {
            Formula::Eps(..) | Formula::Eq(..) => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => a.is_bounded() && b.is_bounded(),
            Formula::Not(a) => a.is_bounded(),
            Formula::Quant { bound, body, .. } => bound.is_some() && body.is_bounded(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        fn term(t: &Term, bound: &[&str], out: &mut BTreeSet<String>) {
            if let Term::Var(v) = t {
                if !bound.contains(&v.as_str()) {
                    out.insert(v.clone());
                }
            }
        }
        fn go<'a>(f: &'a Formula, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Eps(s, t) | Formula::Eq(s, t) => {
                    term(s, bound, out);
                    term(t, bound, out);
                }
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Not(a) => go(a, bound, out),
                Formula::Quant { var, bound: t, body, .. } => {
                    if let Some(t) = t {
                        term(t, bound, out);
                    }
                    bound.push(var);
                    go(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    fn literals(&self, out: &mut Vec<HFSet>) {
        let mut term = |t: &Term| {
            if let Term::Lit(x) = t {
                out.push(x.clone());
            }
        };
        match self {
            Formula::Eps(s, t) | Formula::Eq(s, t) => {
                term(s);
                term(t);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.literals(out);
                b.literals(out);
            }
            Formula::Not(a) => a.literals(out),
            Formula::Quant { bound, body, .. } => {
                if let Some(t) = bound {
                    term(t);
                }
                body.literals(out);
            }
        }
    }

    /// Largest rank of a literal, if any.
    pub fn max_literal_rank(&self) -> Option<usize> {
        let mut lits = Vec::new();
        self.literals(&mut lits);
        lits.iter().map(HFSet::rank).max()
    }

    /// Binding strength for the printer: higher binds tighter.
    fn level(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Lit(x) => write!(f, "{x}"),
        }
    }
}

fn wrap(f: &mut fmt::Formatter<'_>, phi: &Formula, min: u8) -> fmt::Result {
    if phi.level() < min {
        write!(f, "({phi})")
    } else {
        write!(f, "{phi}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eps(s, t) => write!(f, "eps({s}, {t})"),
            Formula::Eq(s, t) => write!(f, "{s} = {t}"),
            Formula::And(a, b) => {
                wrap(f, a, 3)?;
                f.write_str(" and ")?;
                wrap(f, b, 4)
            }
            Formula::Or(a, b) => {
                wrap(f, a, 2)?;
                f.write_str(" or ")?;
                wrap(f, b, 3)
            }
            Formula::Implies(a, b) => {
                wrap(f, a, 2)?;
                f.write_str(" -> ")?;
                wrap(f, b, 1)
            }
            Formula::Not(a) => {
                f.write_str("not ")?;
                wrap(f, a, 4)
            }
            Formula::Quant { q, var, bound, body } => {
                f.write_str(match q {
                    Quant::Forall => "forall ",
                    Quant::Exists => "exists ",
                })?;
                f.write_str(var)?;
                if let Some(t) = bound {
                    write!(f, " in {t}")?;
                }
                f.write_str(" . ")?;
                wrap(f, body, 4)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Lit(HFSet),
    LParen,
    RParen,
    Comma,
    Dot,
    Equals,
    Arrow,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b',' => out.push((Tok::Comma, start)),
            b'.' => out.push((Tok::Dot, start)),
            b'=' => out.push((Tok::Equals, start)),
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((Tok::Arrow, start));
                i += 1;
            }
            b'{' => {
                let (x, end) = parse_literal(src, i)?;
                out.push((Tok::Lit(x), start));
                i = end;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => return Err(Error::Parse { pos: i, msg: format!("unexpected character `{}`", c as char) }),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.1)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn var(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => self.err("expected a variable"),
        }
    }

    fn term(&mut self) -> Result<Term> {
        if let Some(Tok::Lit(x)) = self.peek() {
            let x = x.clone();
            self.at += 1;
            return Ok(Term::Lit(x));
        }
        self.var().map(Term::Var).or_else(|_| self.err("expected a variable or a set literal"))
    }

    fn implies(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.at += 1;
            let rhs = self.implies()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while self.keyword("or") {
            self.at += 1;
            lhs = Formula::Or(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.keyword("and") {
            self.at += 1;
            lhs = Formula::And(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn binary_atom(&mut self, eps: bool) -> Result<Formula> {
        self.at += 1;
        self.expect(Tok::LParen, "`(`")?;
        let s = self.term()?;
        self.expect(Tok::Comma, "`,`")?;
        let t = self.term()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(if eps { Formula::Eps(s, t) } else { Formula::Eq(s, t) })
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "not" => {
                self.at += 1;
                Ok(Formula::Not(Box::new(self.unary()?)))
            }
            Some(Tok::Ident(s)) if s == "forall" || s == "exists" => {
                let q = if s == "forall" { Quant::Forall } else { Quant::Exists };
                self.at += 1;
                let var = self.var()?;
                let bound = if self.keyword("in") {
                    self.at += 1;
                    Some(self.term()?)
                } else {
                    None
                };
                self.expect(Tok::Dot, "`.`")?;
                let body = self.unary()?;
                Ok(Formula::Quant { q, var, bound, body: Box::new(body) })
            }
            Some(Tok::Ident(s)) if s == "eps" => self.binary_atom(true),
            Some(Tok::Ident(s)) if s == "eq" => self.binary_atom(false),
            Some(Tok::LParen) => {
                self.at += 1;
                let f = self.implies()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(_) => {
                let s = self.term()?;
                self.expect(Tok::Equals, "`=`")?;
                let t = self.term()?;
                Ok(Formula::Eq(s, t))
            }
            None => self.err("unexpected end of formula"),
        }
    }
}

pub fn parse_formula(src: &str) -> Result<Formula> {
    let mut p = Parser { toks: lex(src)?, at: 0, end: src.len() };
    let f = p.implies()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_formula(s)
    }
}

pub type Env = BTreeMap<String, HFSet>;

/// Tarskian truth in `V_n`: bounded quantifiers range over the elements of
/// their bound, unbounded ones over all sets of rank below `n`.
pub fn eval(phi: &Formula, env: &Env, n: usize) -> Result<bool> {
    for v in phi.free_vars() {
        match env.get(&v) {
            None => return Err(Error::UnboundVariable(v)),
            Some(x) if x.rank() >= n => {
                return Err(Error::RankExceeded { what: v, rank: x.rank(), bound: n });
            }
            Some(_) => {}
        }
    }
    let mut lits = Vec::new();
    phi.literals(&mut lits);
    if let Some(x) = lits.iter().find(|x| x.rank() >= n) {
        return Err(Error::RankExceeded { what: x.to_string(), rank: x.rank(), bound: n });
    }
    let stack: Vec<(&str, HFSet)> = env.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
    let universe = if phi.is_bounded() { &[][..] } else { universe(n)? };
    let mut ev = Eval { universe, stack };
    Ok(ev.go(phi))
}

struct Eval<'a> {
    universe: &'static [HFSet],
    stack: Vec<(&'a str, HFSet)>,
}

impl<'a> Eval<'a> {
    fn val(&self, t: &Term) -> HFSet {
        match t {
            Term::Lit(x) => x.clone(),
            Term::Var(v) => self.stack.iter().rev().find(|(k, _)| k == v).expect("checked free").1.clone(),
        }
    }

    fn go(&mut self, phi: &'a Formula) -> bool {
        match phi {
            Formula::Eps(s, t) => self.val(t).contains(&self.val(s)),
            Formula::Eq(s, t) => self.val(s) == self.val(t),
            Formula::And(a, b) => self.go(a) && self.go(b),
            Formula::Or(a, b) => self.go(a) || self.go(b),
            Formula::Implies(a, b) => !self.go(a) || self.go(b),
            Formula::Not(a) => !self.go(a),
            Formula::Quant { q, var, bound, body } => {
                let owner;
                let range: &[HFSet] = match bound {
                    Some(t) => {
                        owner = self.val(t);
                        owner.elems()
                    }
                    None => self.universe,
                };
                let want = *q == Quant::Exists;
                let mut hit = false;
                for x in range {
                    self.stack.push((var, x.clone()));
                    let b = self.go(body);
                    self.stack.pop();
                    if b == want {
                        hit = true;
                        break;
                    }
                }
                hit == want
            }
        }
    }
}
