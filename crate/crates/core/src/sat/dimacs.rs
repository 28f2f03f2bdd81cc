use std::fmt::Write;

use super::{Assignment, CnfFormula, Lit};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DimacsError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing \"p cnf\" header")]
    MissingHeader,
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCount { declared: usize, found: usize },
    #[error("last clause is not terminated by 0")]
    Unterminated,
    #[error("model does not assign variable {0}")]
    IncompleteModel(usize),
    #[error("solver reported the instance unsatisfiable")]
    Unsatisfiable,
}

/// Renders `f` as DIMACS CNF. Symbol-table entries become `c name = index`
/// comment lines ahead of the header.
pub fn to_dimacs(f: &CnfFormula) -> String {
    let mut out = String::new();
    for (name, var) in f.symbols() {
        let _ = writeln!(out, "c {name} = {var}");
    }
    let _ = writeln!(out, "p cnf {} {}", f.num_vars(), f.clauses().len());
    for clause in f.clauses() {
        for l in clause {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

fn syntax(line: usize, msg: impl Into<String>) -> DimacsError {
    DimacsError::Syntax { line, msg: msg.into() }
}

fn parse_symbol(body: &str) -> Option<(String, usize)> {
    let (name, idx) = body.split_once(" = ")?;
    let name = name.trim();
    if name.is_empty() || name.contains(char::is_whitespace) {
        return None;
    }
    Some((name.to_string(), idx.trim().parse().ok()?))
}

/// Parses DIMACS CNF. Comments of the form `c name = index` restore the
/// symbol table; other comments are ignored. Clauses may span lines.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut formula: Option<(CnfFormula, usize)> = None;
    let mut symbols = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() || line == "%" {
            continue;
        }
        if let Some(body) = line.strip_prefix('c') {
            if body.is_empty() || body.starts_with(' ') {
                if let Some(sym) = parse_symbol(body.trim_start()) {
                    symbols.push(sym);
                }
                continue;
            }
        }
        if let Some(rest) = line.strip_prefix("p ") {
            if formula.is_some() {
                return Err(syntax(line_no, "duplicate header"));
            }
            let parts: Vec<&str> = rest.split_whitespace().collect();
            let [fmt, v, c] = parts.as_slice() else {
                return Err(syntax(line_no, "expected \"p cnf <vars> <clauses>\""));
            };
            if *fmt != "cnf" {
                return Err(syntax(line_no, format!("unsupported format {fmt:?}")));
            }
            let v = v.parse().map_err(|_| syntax(line_no, "bad variable count"))?;
            let c = c.parse().map_err(|_| syntax(line_no, "bad clause count"))?;
            formula = Some((CnfFormula::new(v), c));
            continue;
        }
        let Some((f, _)) = formula.as_mut() else {
            return Err(DimacsError::MissingHeader);
        };
        for tok in line.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| syntax(line_no, format!("bad literal {tok:?}")))?;
            match Lit::from_dimacs(v) {
                Some(l) => current.push(l),
                None => f
                    .add_clause(std::mem::take(&mut current))
                    .map_err(|e| syntax(line_no, e.to_string()))?,
            }
        }
    }
    let (mut f, declared) = formula.ok_or(DimacsError::MissingHeader)?;
    if !current.is_empty() {
        return Err(DimacsError::Unterminated);
    }
    if f.clauses().len() != declared {
        return Err(DimacsError::ClauseCount {
            declared,
            found: f.clauses().len(),
        });
    }
    for (name, var) in symbols {
        f.name(name, var);
    }
    Ok(f)
}

/// Reads `v ... 0` model lines from an external solver into a total
/// assignment over `num_vars` variables.
pub fn parse_model(text: &str, num_vars: usize) -> Result<Assignment, DimacsError> {
    let mut values: Vec<Option<bool>> = vec![None; num_vars];
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with("s ") && line.contains("UNSAT") {
            return Err(DimacsError::Unsatisfiable);
        }
        let Some(body) = line.strip_prefix("v ") else { continue };
        for tok in body.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| syntax(k + 1, format!("bad literal {tok:?}")))?;
            let Some(l) = Lit::from_dimacs(v) else { continue };
            if l.var() > num_vars {
                return Err(syntax(k + 1, format!("variable {} out of range", l.var())));
            }
            values[l.var() - 1] = Some(l.is_positive());
        }
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or(DimacsError::IncompleteModel(i + 1)))
        .collect::<Result<_, _>>()?;
    Ok(Assignment::new(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn emit_format() {
        let mut f = CnfFormula::new(2);
        f.push([Lit::pos(1), Lit::neg(2)]);
        f.push([Lit::pos(2)]);
        assert_eq!(to_dimacs(&f), "p cnf 2 2\n1 -2 0\n2 0\n");
        assert_eq!(to_dimacs(&CnfFormula::new(3)), "p cnf 3 0\n");
    }

    #[test]
    fn symbols_precede_header_and_round_trip() {
        let mut f = CnfFormula::new(3);
        f.name("x1", 1);
        f.name("y1", 2);
        f.push([Lit::neg(3), Lit::pos(1)]);
        let text = to_dimacs(&f);
        assert_eq!(text, "c x1 = 1\nc y1 = 2\np cnf 3 1\n-3 1 0\n");
        let g = parse_dimacs(&text).unwrap();
        assert_eq!(g, f);
        assert_eq!(to_dimacs(&g), text);
    }

    #[test]
    fn multi_line_clauses_and_plain_comments() {
        let f = parse_dimacs("c hello\np cnf 3 2\n1 2\n -3 0 3\n0\n").unwrap();
        assert_eq!(f.clauses().len(), 2);
        assert!(f.symbols().is_empty());
    }

    #[test]
    fn errors() {
        assert_eq!(parse_dimacs("1 0\n"), Err(DimacsError::MissingHeader));
        assert_eq!(parse_dimacs(""), Err(DimacsError::MissingHeader));
        assert!(matches!(parse_dimacs("p cnf 2 1\n1 2\n"), Err(DimacsError::Unterminated)));
        assert!(matches!(parse_dimacs("p cnf 2 2\n1 2 0\n"), Err(DimacsError::ClauseCount { .. })));
        assert!(matches!(parse_dimacs("p cnf 2 1\n3 0\n"), Err(DimacsError::Syntax { line: 2, .. })));
        assert!(matches!(parse_dimacs("p cnf 2 1\n0\n"), Err(DimacsError::Syntax { .. })));
        assert!(matches!(parse_dimacs("p dnf 2 1\n"), Err(DimacsError::Syntax { line: 1, .. })));
    }

    #[test]
    fn models() {
        let a = parse_model("c solver\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 3).unwrap();
        assert_eq!(a.values(), [true, false, true]);
        assert_eq!(parse_model("v 1 0\n", 2), Err(DimacsError::IncompleteModel(2)));
        assert_eq!(parse_model("s UNSATISFIABLE\n", 2), Err(DimacsError::Unsatisfiable));
    }
}
