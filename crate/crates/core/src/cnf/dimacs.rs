//! DIMACS CNF reading and writing.

use std::fmt::Write as _;

use super::{Clause, Formula, Literal};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: clause data before the `p cnf` header")]
    MissingHeader { line: usize },
    #[error("no `p cnf` header found")]
    NoHeader,
    #[error("line {line}: malformed header `{text}`")]
    MalformedHeader { line: usize, text: String },
    #[error("line {line}: second `p` header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: invalid token `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: signed zero `{token}` is not a literal")]
    ZeroLiteral { line: usize, token: String },
    #[error("line {line}: literal {literal} exceeds declared variable count {num_vars}")]
    LiteralOutOfRange {
        line: usize,
        literal: i64,
        num_vars: usize,
    },
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCountMismatch { declared: usize, found: usize },
    #[error("last clause is not terminated by 0")]
    UnterminatedClause,
    #[error("line {line}: clause {clause} is empty")]
    EmptyClause { line: usize, clause: usize },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept empty clauses instead of failing with [`DimacsError::EmptyClause`].
    /// Local search can never satisfy one; the complete oracle reports UNSAT.
    pub allow_empty_clauses: bool,
}

/// Parses a DIMACS CNF document, rejecting empty clauses.
pub fn parse_dimacs(text: &str) -> Result<Formula, DimacsError> {
    parse_dimacs_with(text, ParseOptions::default())
}

pub fn parse_dimacs_with(text: &str, opts: ParseOptions) -> Result<Formula, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut pending: Vec<Literal> = Vec::new();

    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        // SATLIB benchmark files end with a `%` line followed by a stray `0`.
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::DuplicateHeader { line: line_no });
            }
            header = Some(parse_header(trimmed, line_no)?);
            continue;
        }
        let (num_vars, _) = header.ok_or(DimacsError::MissingHeader { line: line_no })?;
        for token in trimmed.split_whitespace() {
            let lit: i64 = token.parse().map_err(|_| DimacsError::InvalidToken {
                line: line_no,
                token: token.to_string(),
            })?;
            if lit == 0 {
                if token != "0" {
                    return Err(DimacsError::ZeroLiteral {
                        line: line_no,
                        token: token.to_string(),
                    });
                }
                if pending.is_empty() && !opts.allow_empty_clauses {
                    return Err(DimacsError::EmptyClause {
                        line: line_no,
                        clause: clauses.len(),
                    });
                }
                clauses.push(Clause::new(pending.drain(..)));
                continue;
            }
            if lit.unsigned_abs() > num_vars as u64 {
                return Err(DimacsError::LiteralOutOfRange {
                    line: line_no,
                    literal: lit,
                    num_vars,
                });
            }
            pending.push(Literal::from_dimacs(lit).expect("nonzero"));
        }
    }

    let (num_vars, declared) = header.ok_or(DimacsError::NoHeader)?;
    if !pending.is_empty() {
        return Err(DimacsError::UnterminatedClause);
    }
    if clauses.len() != declared {
        return Err(DimacsError::ClauseCountMismatch {
            declared,
            found: clauses.len(),
        });
    }
    Ok(Formula::new(num_vars, clauses).expect("literal ranges checked while parsing"))
}

fn parse_header(line: &str, line_no: usize) -> Result<(usize, usize), DimacsError> {
    let malformed = || DimacsError::MalformedHeader {
        line: line_no,
        text: line.to_string(),
    };
    let fields: Vec<&str> = line.split_whitespace().collect();
    match fields.as_slice() {
        ["p", "cnf", vars, clauses] => {
            let vars = vars.parse().map_err(|_| malformed())?;
            let clauses = clauses.parse().map_err(|_| malformed())?;
            Ok((vars, clauses))
        }
        _ => Err(malformed()),
    }
}

/// Writes `f` as DIMACS, one clause per line, preserving clause and literal order.
pub fn emit_dimacs(f: &Formula) -> String {
    let mut out = String::with_capacity(16 + f.size() * 4);
    writeln!(out, "p cnf {} {}", f.num_vars(), f.num_clauses()).unwrap();
    for clause in f.clauses() {
        for lit in clause.literals() {
            write!(out, "{} ", lit.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}
