//! Expressions for `refmon eval`.
//!
//! ```text
//! command := "eq" term term | "leq" term term | "add" term+ | "classify" term
//!          | "refine" term term term term | "primes" | "gens"
//! term    := prod ("+" prod)*
//! prod    := INT "*" atom | atom
//! atom    := ID | "0" | "(" term ")" | JSON element literal
//! ```
//! Terms may be separated by `,` or `;`. An id stands for its unit generator.

use refmon::{MonElem, Monoid, MonoidError};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ExprError {
    #[error("empty expression")]
    Empty,
    #[error("unknown operation `{0}` (expected eq, add, leq, refine, primes, gens or classify)")]
    UnknownOp(String),
    #[error("`{op}` takes {expected} argument(s), got {got}")]
    Arity { op: String, expected: String, got: usize },
    #[error("unexpected `{0}`")]
    Unexpected(String),
    #[error("unexpected end of expression")]
    Eof,
    #[error("unbalanced braces in element literal")]
    Unbalanced,
    #[error("unknown element `{0}`")]
    UnknownId(String),
    #[error("bad element literal: {0}")]
    Literal(String),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Lit(String),
    Plus,
    Star,
    Open,
    Close,
    Sep,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, ExprError> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < cs.len() {
        let c = cs[k];
        match c {
            c if c.is_whitespace() => k += 1,
            '+' | '*' | '(' | ')' | ',' | ';' => {
                out.push(match c {
                    '+' => Tok::Plus,
                    '*' => Tok::Star,
                    '(' => Tok::Open,
                    ')' => Tok::Close,
                    _ => Tok::Sep,
                });
                k += 1;
            }
            '{' => {
                let start = k;
                let (mut depth, mut in_str) = (0i32, false);
                loop {
                    let c = *cs.get(k).ok_or(ExprError::Unbalanced)?;
                    match c {
                        '"' => in_str = !in_str,
                        '\\' if in_str => k += 1,
                        '{' if !in_str => depth += 1,
                        '}' if !in_str => depth -= 1,
                        _ => {}
                    }
                    k += 1;
                    if depth == 0 {
                        break;
                    }
                }
                out.push(Tok::Lit(cs[start..k].iter().collect()));
            }
            _ => {
                let start = k;
                while k < cs.len() && !cs[k].is_whitespace() && !"+*(),;{}".contains(cs[k]) {
                    k += 1;
                }
                out.push(Tok::Word(cs[start..k].iter().collect()));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Term {
    Zero,
    Id(String),
    Literal(String),
    Scale(u32, Box<Term>),
    Sum(Vec<Term>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Eq(Term, Term),
    Add(Vec<Term>),
    Leq(Term, Term),
    Refine([Term; 4]),
    Primes,
    Gens,
    Classify(Term),
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ids: &'a dyn Fn(&str) -> bool,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn term(&mut self) -> Result<Term, ExprError> {
        let mut parts = vec![self.prod()?];
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            parts.push(self.prod()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Term::Sum(parts) })
    }

    fn prod(&mut self) -> Result<Term, ExprError> {
        if let (Some(Tok::Word(w)), Some(Tok::Star)) = (self.toks.get(self.pos), self.toks.get(self.pos + 1)) {
            if let Ok(k) = w.parse::<u32>() {
                if !(self.ids)(w) && self.toks.len() > self.pos + 2 {
                    self.pos += 2;
                    return Ok(Term::Scale(k, Box::new(self.atom()?)));
                }
            }
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Term, ExprError> {
        match self.next().ok_or(ExprError::Eof)? {
            Tok::Open => {
                let t = self.term()?;
                match self.next() {
                    Some(Tok::Close) => Ok(t),
                    Some(t) => Err(ExprError::Unexpected(show(&t))),
                    None => Err(ExprError::Eof),
                }
            }
            Tok::Lit(s) => Ok(Term::Literal(s)),
            Tok::Word(w) if (self.ids)(&w) => Ok(Term::Id(w)),
            Tok::Word(w) if w == "0" => Ok(Term::Zero),
            Tok::Word(w) => Err(ExprError::UnknownId(w)),
            Tok::Star if (self.ids)("*") => Ok(Term::Id("*".into())),
            t => Err(ExprError::Unexpected(show(&t))),
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, ExprError> {
        let mut out = Vec::new();
        while self.peek().is_some() {
            if self.peek() == Some(&Tok::Sep) {
                self.pos += 1;
                continue;
            }
            out.push(self.term()?);
        }
        Ok(out)
    }
}

fn show(t: &Tok) -> String {
    match t {
        Tok::Word(w) | Tok::Lit(w) => w.clone(),
        Tok::Plus => "+".into(),
        Tok::Star => "*".into(),
        Tok::Open => "(".into(),
        Tok::Close => ")".into(),
        Tok::Sep => ",".into(),
    }
}

/// Parses `text`; `is_id` says which words are element ids.
pub fn parse(text: &str, is_id: &dyn Fn(&str) -> bool) -> Result<Command, ExprError> {
    let mut toks = tokenize(text)?;
    let op = match toks.first() {
        Some(Tok::Word(w)) => w.clone(),
        Some(t) => return Err(ExprError::Unexpected(show(t))),
        None => return Err(ExprError::Empty),
    };
    toks.remove(0);
    let mut p = Parser { toks, pos: 0, ids: is_id };
    let mut args = p.args()?;
    let arity = |expected: &str, got: usize| ExprError::Arity { op: op.clone(), expected: expected.into(), got };
    let n = args.len();
    Ok(match op.as_str() {
        "eq" | "leq" => {
            if n != 2 {
                return Err(arity("2", n));
            }
            let b = args.pop().unwrap();
            let a = args.pop().unwrap();
            if op == "eq" {
                Command::Eq(a, b)
            } else {
                Command::Leq(a, b)
            }
        }
        "add" if n >= 1 => Command::Add(args),
        "add" => return Err(arity("at least 1", n)),
        "classify" if n == 1 => Command::Classify(args.pop().unwrap()),
        "classify" => return Err(arity("1", n)),
        "refine" => {
            let four: [Term; 4] = args.try_into().map_err(|_| arity("4", n))?;
            Command::Refine(four)
        }
        "primes" | "gens" if n == 0 => {
            if op == "primes" {
                Command::Primes
            } else {
                Command::Gens
            }
        }
        "primes" | "gens" => return Err(arity("0", n)),
        _ => return Err(ExprError::UnknownOp(op)),
    })
}

pub fn eval(m: &Monoid, t: &Term) -> Result<MonElem, ExprError> {
    let sys = m.system();
    Ok(match t {
        Term::Zero => m.zero(),
        Term::Id(id) => m.unit_chi(sys.index_of(id).map_err(|_| ExprError::UnknownId(id.clone()))?),
        Term::Literal(s) => {
            let v: serde_json::Value = serde_json::from_str(s).map_err(|e| ExprError::Literal(e.to_string()))?;
            refmon::monoid::elem_from_json(m, &v).map_err(|e: MonoidError| ExprError::Literal(e.to_string()))?
        }
        Term::Scale(k, t) => m.scale(*k, &eval(m, t)?),
        Term::Sum(ts) => {
            let xs = ts.iter().map(|t| eval(m, t)).collect::<Result<Vec<_>, _>>()?;
            m.sum(&xs)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(w: &str) -> bool {
        ["p", "q", "*", "11"].contains(&w)
    }

    #[test]
    fn refine_with_separators() {
        let c = parse("refine p,p ; p,(p+q)", &ids).unwrap();
        let sum = Term::Sum(vec![Term::Id("p".into()), Term::Id("q".into())]);
        assert_eq!(c, Command::Refine([Term::Id("p".into()), Term::Id("p".into()), Term::Id("p".into()), sum]));
    }

    #[test]
    fn zero_and_juxtaposition() {
        assert_eq!(parse("eq 0 0", &ids).unwrap(), Command::Eq(Term::Zero, Term::Zero));
        assert_eq!(parse("leq p q", &ids).unwrap(), Command::Leq(Term::Id("p".into()), Term::Id("q".into())));
    }

    #[test]
    fn star_is_scale_or_id() {
        let c = parse("add 2 * * + 11", &ids).unwrap();
        let expect = Term::Sum(vec![Term::Scale(2, Box::new(Term::Id("*".into()))), Term::Id("11".into())]);
        assert_eq!(c, Command::Add(vec![expect]));
        // a numeric id is never a coefficient
        assert_eq!(
            parse("classify 11 * p", &ids),
            Err(ExprError::Arity { op: "classify".into(), expected: "1".into(), got: 3 })
        );
    }

    #[test]
    fn literals_keep_nested_braces() {
        let c = parse(r#"classify {"support":["q"],"coords":{"q":{"n":1}}}"#, &ids).unwrap();
        assert!(matches!(c, Command::Classify(Term::Literal(s)) if s.ends_with("}}}")));
    }

    #[test]
    fn errors() {
        assert_eq!(parse("", &ids), Err(ExprError::Empty));
        assert_eq!(parse("eq p", &ids).unwrap_err().to_string(), "`eq` takes 2 argument(s), got 1");
        assert_eq!(parse("eq p r", &ids), Err(ExprError::UnknownId("r".into())));
        assert_eq!(parse("meet p q", &ids), Err(ExprError::UnknownOp("meet".into())));
        assert_eq!(parse("eq (p q", &ids), Err(ExprError::Unexpected("q".into())));
        assert_eq!(parse("classify {", &ids), Err(ExprError::Unbalanced));
    }
}
