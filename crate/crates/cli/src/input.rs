//! File ingestion, weight-specification parsing, and the process failure
//! type that carries the exit-code discipline:
//! 0 success, 1 domain-invalid square data, 2 usage/IO/limits.

use std::collections::BTreeMap;
use std::path::Path;

use qchir_core::dynamics::WeightFn;
use qchir_core::{CycleType, Error, LatinSquare};

/// A failed command: which exit code to use, a short machine-readable code
/// token, and the human message. Printed as `error[CODE]: message`.
#[derive(Debug)]
pub struct Failure {
    pub exit: i32,
    pub code: String,
    pub message: String,
}

impl Failure {
    pub fn usage(code: &str, message: impl Into<String>) -> Failure {
        Failure {
            exit: 2,
            code: code.to_string(),
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure {
            // Structurally invalid square *content* is the caller's data
            // problem (exit 1); everything else is usage or a limit (exit 2).
            exit: if e.is_domain() { 1 } else { 2 },
            code: e.code().to_string(),
            message: e.to_string(),
        }
    }
}

/// Parses the square file format: optional `#` comment lines, then `n`
/// lines of `n` whitespace-separated integers, `1..n` by default or
/// `0..n-1` when `zero_based` is set.
pub fn parse_square_text(text: &str, zero_based: bool) -> Result<LatinSquare, Failure> {
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for token in trimmed.split_whitespace() {
            let value: i64 = token.parse().map_err(|_| {
                Failure::usage(
                    "BadToken",
                    format!("line {}: {token:?} is not an integer", lineno + 1),
                )
            })?;
            row.push(value);
        }
        rows.push(row);
    }
    Ok(LatinSquare::from_rows(&rows, !zero_based)?)
}

/// Reads and parses a square file; unreadable files are usage failures.
pub fn read_square(path: &Path, zero_based: bool) -> Result<LatinSquare, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage("Io", format!("{}: {e}", path.display())))?;
    parse_square_text(&text, zero_based)
}

/// Parses a weight specification:
/// `constant` (weight 1), `constant:C`, or `gamma-cycles:FILE` where the
/// file holds lines `CYCLE_TYPE WEIGHT` (e.g. `3-2-1-1 0.5`, `#` comments
/// allowed) and every cycle type must be a partition of `n`.
pub fn parse_weight(spec: &str, n: usize) -> Result<WeightFn, Failure> {
    if spec == "constant" {
        return Ok(WeightFn::unit());
    }
    if let Some(c) = spec.strip_prefix("constant:") {
        let value: f64 = c
            .parse()
            .map_err(|_| Failure::usage("WeightParse", format!("{c:?} is not a number")))?;
        return WeightFn::constant(value).map_err(|e| Failure {
            exit: 2,
            ..Failure::from(e)
        });
    }
    if let Some(path) = spec.strip_prefix("gamma-cycles:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage("Io", format!("{path}: {e}")))?;
        let mut map = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut parts = trimmed.split_whitespace();
            let (Some(ct_text), Some(w_text), None) = (parts.next(), parts.next(), parts.next())
            else {
                return Err(Failure::usage(
                    "WeightParse",
                    format!("{path}:{}: expected `CYCLE_TYPE WEIGHT`", lineno + 1),
                ));
            };
            let ct: CycleType = ct_text.parse().map_err(|e: Error| Failure {
                exit: 2,
                ..Failure::from(e)
            })?;
            if ct.degree() != n {
                return Err(Failure::usage(
                    "WeightParse",
                    format!(
                        "{path}:{}: cycle type {ct} is a partition of {}, expected {n}",
                        lineno + 1,
                        ct.degree()
                    ),
                ));
            }
            let w: f64 = w_text.parse().map_err(|_| {
                Failure::usage(
                    "WeightParse",
                    format!("{path}:{}: {w_text:?} is not a number", lineno + 1),
                )
            })?;
            if map.insert(ct.clone(), w).is_some() {
                return Err(Failure::usage(
                    "WeightParse",
                    format!("{path}:{}: cycle type {ct} listed twice", lineno + 1),
                ));
            }
        }
        return WeightFn::gamma_cycle_type(map).map_err(|e| Failure {
            exit: 2,
            ..Failure::from(e)
        });
    }
    Err(Failure::usage(
        "WeightParse",
        format!("unknown weight spec {spec:?}; use constant[:C] or gamma-cycles:FILE"),
    ))
}

/// Caps complete-search commands at the largest order where exhaustive
/// isotopism enumeration stays instantaneous-to-cheap.
pub fn require_searchable_order(q: &LatinSquare) -> Result<(), Failure> {
    const MAX_SEARCH_ORDER: usize = 7;
    if q.order() > MAX_SEARCH_ORDER {
        return Err(Failure::from(Error::OrderTooLarge {
            order: q.order(),
            max: MAX_SEARCH_ORDER,
        }));
    }
    Ok(())
}
