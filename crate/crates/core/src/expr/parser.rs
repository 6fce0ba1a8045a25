use std::collections::HashMap;

use super::ast::{Pattern, Scalar, Term};
use super::lexer::{tokenize, Tok};
use super::{ParseError, PathExpr};
use crate::matrix::FilterSpec;

const KEYWORDS: [&str; 4] = ["I", "ONES", "ZERO", "let"];

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    allow_meta: bool,
    env: HashMap<String, Pattern>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(src: &str, allow_meta: bool) -> PResult<Self> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
            allow_meta,
            env: HashMap::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        Err(ParseError::new(
            self.offset(),
            format!("expected {wanted}, found {}", self.peek().describe()),
        ))
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&tok.describe())
        }
    }

    fn program(&mut self) -> PResult<Pattern> {
        let mut last = None;
        while matches!(self.peek(), Tok::Word(w) if w == "let") {
            self.bump();
            let at = self.offset();
            let name = match self.bump().0 {
                Tok::Word(w) if !KEYWORDS.contains(&w.as_str()) && !starts_numeric(&w) => w,
                other => {
                    return Err(ParseError::new(
                        at,
                        format!("expected a binding name, found {}", other.describe()),
                    ))
                }
            };
            self.expect(Tok::Eq)?;
            let value = self.sum()?;
            self.env.insert(name, value.clone());
            last = Some(value);
        }
        let result = match (self.peek(), last) {
            (Tok::Eof, Some(v)) => v,
            (Tok::Eof, None) => return Err(ParseError::new(self.offset(), "empty expression")),
            _ => self.sum()?,
        };
        if *self.peek() != Tok::Eof {
            return self.unexpected("an operator or end of input");
        }
        Ok(result)
    }

    fn sum(&mut self) -> PResult<Pattern> {
        let mut lhs = self.hadamard()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            lhs = Pattern::Add(Box::new(lhs), Box::new(self.hadamard()?));
        }
        Ok(lhs)
    }

    fn hadamard(&mut self) -> PResult<Pattern> {
        let mut lhs = self.product()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = Pattern::Hadamard(Box::new(lhs), Box::new(self.product()?));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> PResult<Pattern> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Dot {
            self.bump();
            lhs = Pattern::MatMul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Pattern> {
        let at = self.offset();
        let scalar = match self.peek().clone() {
            Tok::Word(w) if starts_numeric(&w) => {
                let v: f64 = w
                    .parse()
                    .map_err(|_| ParseError::new(at, format!("invalid number `{w}`")))?;
                let s = Scalar::new(v).ok_or_else(|| {
                    ParseError::new(at, format!("scale factor `{w}` must be finite and nonnegative"))
                })?;
                Some(Term::Lit(s))
            }
            Tok::Meta(m) if *self.peek2() == Tok::Star => {
                self.check_meta(at)?;
                Some(Term::Meta(m))
            }
            _ => None,
        };
        match scalar {
            Some(s) => {
                self.bump();
                self.expect(Tok::Star)?;
                Ok(Pattern::Scale(s, Box::new(self.unary()?)))
            }
            None => self.postfix(),
        }
    }

    fn postfix(&mut self) -> PResult<Pattern> {
        let mut e = self.atom()?;
        while *self.peek() == Tok::Prime {
            self.bump();
            e = Pattern::Transpose(Box::new(e));
        }
        Ok(e)
    }

    fn check_meta(&self, at: usize) -> PResult<()> {
        if self.allow_meta {
            Ok(())
        } else {
            Err(ParseError::new(at, "metavariables are only allowed in rule patterns"))
        }
    }

    fn atom(&mut self) -> PResult<Pattern> {
        let at = self.offset();
        let word = match self.bump().0 {
            Tok::LParen => {
                let e = self.sum()?;
                self.expect(Tok::RParen)?;
                return Ok(e);
            }
            Tok::Meta(m) => {
                self.check_meta(at)?;
                return Ok(Pattern::Meta(m));
            }
            Tok::Word(w) => w,
            other => {
                self.pos -= usize::from(other != Tok::Eof);
                return self.unexpected("an expression");
            }
        };
        let call = *self.peek() == Tok::LParen;
        let filter = |f| Ok(Pattern::Filter(f));
        match word.as_str() {
            "A" if *self.peek() == Tok::LBracket => {
                self.bump();
                let label = self.name()?;
                self.expect(Tok::RBracket)?;
                Ok(Pattern::Slice(label))
            }
            "I" => filter(FilterSpec::Identity),
            "ONES" => filter(FilterSpec::Ones),
            "ZERO" => filter(FilterSpec::Zeros),
            "R" | "C" | "E" if call => {
                self.bump();
                let i = self.vertex()?;
                let f = match word.as_str() {
                    "R" => FilterSpec::Row(i),
                    "C" => FilterSpec::Col(i),
                    _ => {
                        self.expect(Tok::Comma)?;
                        FilterSpec::Entry(i, self.vertex()?)
                    }
                };
                self.expect(Tok::RParen)?;
                filter(f)
            }
            "not" | "clip" | "vout" | "vin" if call => {
                self.bump();
                let arg = Box::new(self.sum()?);
                let e = match word.as_str() {
                    "not" => Pattern::Not(arg),
                    "clip" => Pattern::Clip(arg),
                    _ => {
                        let p = if *self.peek() == Tok::Comma {
                            self.bump();
                            self.threshold()?
                        } else {
                            Term::Lit(0)
                        };
                        if word == "vout" {
                            Pattern::VOut(arg, p)
                        } else {
                            Pattern::VIn(arg, p)
                        }
                    }
                };
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ if call => Err(ParseError::new(at, format!("unknown function `{word}`"))),
            _ => match self.env.get(&word) {
                Some(e) => Ok(e.clone()),
                None => Err(ParseError::new(at, format!("unknown name `{word}`"))),
            },
        }
    }

    fn name(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Word(w) | Tok::Str(w) => {
                self.bump();
                Ok(w)
            }
            _ => self.unexpected("a name"),
        }
    }

    fn vertex(&mut self) -> PResult<Term<String>> {
        if let Tok::Meta(m) = self.peek().clone() {
            self.check_meta(self.offset())?;
            self.bump();
            return Ok(Term::Meta(m));
        }
        self.name().map(Term::Lit)
    }

    fn threshold(&mut self) -> PResult<Term<u64>> {
        let at = self.offset();
        match self.bump().0 {
            Tok::Meta(m) => {
                self.check_meta(at)?;
                Ok(Term::Meta(m))
            }
            Tok::Word(w) => w.parse().map(Term::Lit).map_err(|_| {
                ParseError::new(at, format!("threshold must be a nonnegative integer, found `{w}`"))
            }),
            other => Err(ParseError::new(
                at,
                format!("expected a threshold, found {}", other.describe()),
            )),
        }
    }
}

fn starts_numeric(w: &str) -> bool {
    w.starts_with(|c: char| c.is_ascii_digit())
}

fn run(src: &str, allow_meta: bool, program: bool) -> PResult<Pattern> {
    let mut p = Parser::new(src, allow_meta)?;
    if program {
        return p.program();
    }
    if *p.peek() == Tok::Eof {
        return Err(ParseError::new(p.offset(), "empty expression"));
    }
    let e = p.sum()?;
    if *p.peek() != Tok::Eof {
        return p.unexpected("an operator or end of input");
    }
    Ok(e)
}

/// Parses a single path expression.
pub fn parse(src: &str) -> Result<PathExpr, ParseError> {
    run(src, false, false).map(|p| p.to_expr().expect("no metavariables"))
}

/// Parses an expression file: zero or more `let name = expr` bindings
/// followed by an optional result expression. Without a trailing expression
/// the last binding is the result.
pub fn parse_program(src: &str) -> Result<PathExpr, ParseError> {
    run(src, false, true).map(|p| p.to_expr().expect("no metavariables"))
}

/// Parses a rule pattern, where `?name` is a metavariable.
pub fn parse_pattern(src: &str) -> Result<Pattern, ParseError> {
    run(src, true, false)
}
