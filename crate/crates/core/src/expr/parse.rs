//! Reader for the s-expression map language.
//!
//! ```text
//! map    := (entries sexpr…) | (compose map map) | (sum num map num map) | (diag (num…) map)
//! sexpr  := (x int) | (avg rval (num…)) | (+ sexpr…) | (* num sexpr)
//! rval   := decimal | inf | -inf
//! ```
//!
//! `;` starts a comment running to the end of the line.

use std::fmt;

use super::{AvgExponent, ExprError, MapExpr, ScalarExpr, Weights};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("{pos}: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("{pos}: {source}")]
    Invalid {
        pos: Pos,
        #[source]
        source: ExprError,
    },
}

impl ParseError {
    pub fn pos(&self) -> Pos {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::Invalid { pos, .. } => *pos,
        }
    }
}

#[derive(Debug)]
enum Sexp<'a> {
    Atom(&'a str, Pos),
    List(Vec<Sexp<'a>>, Pos),
}

impl<'a> Sexp<'a> {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

fn syntax(pos: Pos, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        pos,
        msg: msg.into(),
    }
}

struct Reader<'a> {
    src: &'a str,
    offset: usize,
    line: usize,
    col: usize,
}

impl<'a> Reader<'a> {
    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.offset..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.offset += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Sexp<'a>, ParseError> {
        self.skip_trivia();
        let start = self.pos();
        match self.peek() {
            None => Err(syntax(start, "unexpected end of input")),
            Some(')') => Err(syntax(start, "unexpected ')'")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.peek() {
                        None => return Err(syntax(start, "unclosed '('")),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items, start));
                        }
                        _ => items.push(self.read()?),
                    }
                }
            }
            Some(_) => {
                let begin = self.offset;
                while let Some(c) = self.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    self.bump();
                }
                Ok(Sexp::Atom(&self.src[begin..self.offset], start))
            }
        }
    }
}

fn number(s: &Sexp<'_>) -> Result<f64, ParseError> {
    match s {
        Sexp::Atom(text, pos) => text
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| syntax(*pos, format!("expected a number, found '{text}'"))),
        Sexp::List(_, pos) => Err(syntax(*pos, "expected a number, found a list")),
    }
}

fn exponent(s: &Sexp<'_>) -> Result<AvgExponent, ParseError> {
    match s {
        Sexp::Atom("inf" | "+inf", _) => Ok(AvgExponent::PosInfinity),
        Sexp::Atom("-inf", _) => Ok(AvgExponent::NegInfinity),
        other => number(other).map(AvgExponent::Finite),
    }
}

fn numbers(s: &Sexp<'_>) -> Result<Vec<f64>, ParseError> {
    match s {
        Sexp::List(items, _) => items.iter().map(number).collect(),
        Sexp::Atom(_, pos) => Err(syntax(*pos, "expected a parenthesized number list")),
    }
}

fn head<'s, 'a>(s: &'s Sexp<'a>, what: &str) -> Result<(&'a str, &'s [Sexp<'a>], Pos), ParseError> {
    match s {
        Sexp::List(items, pos) => match items.first() {
            Some(Sexp::Atom(h, _)) => Ok((h, &items[1..], *pos)),
            _ => Err(syntax(*pos, format!("expected {what} form"))),
        },
        Sexp::Atom(t, pos) => Err(syntax(*pos, format!("expected {what}, found '{t}'"))),
    }
}

fn arity(pos: Pos, form: &str, args: &[Sexp<'_>], n: usize) -> Result<(), ParseError> {
    if args.len() == n {
        Ok(())
    } else {
        Err(syntax(
            pos,
            format!("'{form}' takes {n} argument(s), found {}", args.len()),
        ))
    }
}

fn scalar(s: &Sexp<'_>) -> Result<ScalarExpr, ParseError> {
    let (h, args, pos) = head(s, "a scalar expression")?;
    match h {
        "x" => {
            arity(pos, "x", args, 1)?;
            match &args[0] {
                Sexp::Atom(t, p) => match t.parse::<usize>() {
                    Ok(i) if i >= 1 => Ok(ScalarExpr::Var(i - 1)),
                    _ => Err(syntax(*p, format!("expected a variable index >= 1, found '{t}'"))),
                },
                other => Err(syntax(other.pos(), "expected a variable index")),
            }
        }
        "avg" => {
            arity(pos, "avg", args, 2)?;
            let r = exponent(&args[0])?;
            let w = numbers(&args[1])?;
            let weights = Weights::new_at(w, "avg.weights").map_err(|source| ParseError::Invalid {
                pos: args[1].pos(),
                source,
            })?;
            Ok(ScalarExpr::Avg { r, weights })
        }
        "+" => {
            if args.is_empty() {
                return Err(syntax(pos, "'+' needs at least one term"));
            }
            let mut terms = Vec::with_capacity(args.len());
            for a in args {
                match scalar(a)? {
                    ScalarExpr::LinComb(inner) if inner.len() == 1 => terms.extend(inner),
                    other => terms.push((1.0, other)),
                }
            }
            Ok(ScalarExpr::LinComb(terms))
        }
        "*" => {
            arity(pos, "*", args, 2)?;
            let c = number(&args[0])?;
            if c <= 0.0 {
                return Err(ParseError::Invalid {
                    pos: args[0].pos(),
                    source: ExprError::NonPositiveCoefficient {
                        path: "*".into(),
                        value: c,
                    },
                });
            }
            match scalar(&args[1])? {
                ScalarExpr::LinComb(inner) if inner.len() == 1 => {
                    let (d, t) = inner.into_iter().next().expect("one term");
                    Ok(ScalarExpr::LinComb(vec![(c * d, t)]))
                }
                other => Ok(ScalarExpr::LinComb(vec![(c, other)])),
            }
        }
        other => Err(syntax(pos, format!("unknown scalar form '{other}'"))),
    }
}

fn map(s: &Sexp<'_>) -> Result<MapExpr, ParseError> {
    let (h, args, pos) = head(s, "a map expression")?;
    let m = match h {
        "entries" => {
            if args.is_empty() {
                return Err(syntax(pos, "'entries' needs at least one entry"));
            }
            MapExpr::Entries(args.iter().map(scalar).collect::<Result<_, _>>()?)
        }
        "compose" => {
            arity(pos, "compose", args, 2)?;
            MapExpr::compose(map(&args[0])?, map(&args[1])?)
        }
        "sum" => {
            arity(pos, "sum", args, 4)?;
            MapExpr::sum(number(&args[0])?, map(&args[1])?, number(&args[2])?, map(&args[3])?)
        }
        "diag" => {
            arity(pos, "diag", args, 2)?;
            MapExpr::diag(numbers(&args[0])?, map(&args[1])?)
        }
        other => return Err(syntax(pos, format!("unknown map form '{other}'"))),
    };
    m.validate()
        .map_err(|source| ParseError::Invalid { pos, source })?;
    Ok(m)
}

/// Parses and validates a map description.
pub fn parse_map(text: &str) -> Result<MapExpr, ParseError> {
    let mut reader = Reader {
        src: text,
        offset: 0,
        line: 1,
        col: 1,
    };
    let sexp = reader.read()?;
    reader.skip_trivia();
    if reader.peek().is_some() {
        return Err(syntax(reader.pos(), "trailing input after map expression"));
    }
    map(&sexp)
}
