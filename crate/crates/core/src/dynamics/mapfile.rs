//! Text map definitions.
//!
//! ```text
//! # comments start with '#'
//! id: henon3
//! vars x y z
//! forward: y | z + y^2 | x + z^2
//! inverse: z - (y - x^2)^2 | x | y - x^2
//! ```
//!
//! `id` is optional (defaults to the file stem chosen by the caller). The
//! `inverse` line may be omitted when the inverse comes from a separate
//! file; the pair is verified either way.

use thiserror::Error;

use super::{AffineAutomorphism, DynamicsError};
use crate::poly::{parse_polynomial, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}, column {column}: {message}")]
    Polynomial {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("missing '{0}' line")]
    Missing(&'static str),
    #[error("the inverse map is missing; supply an 'inverse:' line or a separate inverse file")]
    MissingInverse,
    #[error(transparent)]
    Verification(#[from] DynamicsError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapDefinition {
    pub id: Option<String>,
    pub vars: Vec<String>,
    pub forward: Vec<Polynomial>,
    pub inverse: Option<Vec<Polynomial>>,
}

impl MapDefinition {
    pub fn parse(text: &str) -> Result<Self, MapFileError> {
        let mut id = None;
        let mut vars: Option<Vec<String>> = None;
        let mut forward = None;
        let mut inverse = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: String| MapFileError::Syntax {
                line: line_no,
                message,
            };
            if let Some(rest) = line.strip_prefix("vars") {
                if vars.is_some() {
                    return Err(syntax("variables declared twice".into()));
                }
                let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if names.is_empty() {
                    return Err(syntax("no variables declared".into()));
                }
                for (i, n) in names.iter().enumerate() {
                    if !n.chars().all(|c| c.is_alphanumeric() || c == '_')
                        || n.starts_with(|c: char| c.is_ascii_digit())
                    {
                        return Err(syntax(format!("invalid variable name '{n}'")));
                    }
                    if names[..i].contains(n) {
                        return Err(syntax(format!("variable '{n}' declared twice")));
                    }
                }
                vars = Some(names);
                continue;
            }
            let Some((key, value)) = line.split_once(':') else {
                return Err(syntax(format!("expected 'key: value', got '{line}'")));
            };
            match key.trim() {
                "id" => id = Some(value.trim().to_string()),
                key @ ("forward" | "inverse") => {
                    let names = vars
                        .as_ref()
                        .ok_or_else(|| syntax("'vars' must come before the map".into()))?;
                    let offset = raw.find(':').map(|i| i + 1).unwrap_or(0);
                    let coords = parse_coordinates(value, names, line_no, offset)?;
                    if coords.len() != names.len() {
                        return Err(syntax(format!(
                            "{key} map has {} coordinates for {} variables",
                            coords.len(),
                            names.len()
                        )));
                    }
                    let slot = if key == "forward" {
                        &mut forward
                    } else {
                        &mut inverse
                    };
                    if slot.is_some() {
                        return Err(syntax(format!("'{key}' given twice")));
                    }
                    *slot = Some(coords);
                }
                other => return Err(syntax(format!("unknown key '{other}'"))),
            }
        }
        Ok(MapDefinition {
            id,
            vars: vars.ok_or(MapFileError::Missing("vars"))?,
            forward: forward.ok_or(MapFileError::Missing("forward"))?,
            inverse,
        })
    }

    /// Reads only an `inverse:` line (and optional `vars`, which must agree)
    /// from a companion file.
    pub fn attach_inverse(&mut self, text: &str) -> Result<(), MapFileError> {
        let mut with_vars = String::new();
        if !text.lines().any(|l| l.trim_start().starts_with("vars")) {
            with_vars = format!("vars {}\n", self.vars.join(" "));
        }
        with_vars.push_str(text);
        // Borrow a dummy forward map so the generic parser accepts the file.
        let has_forward = text.lines().any(|l| l.trim_start().starts_with("forward"));
        if !has_forward {
            with_vars.push_str(&format!("\nforward: {}\n", self.vars.join(" | ")));
        }
        let other = MapDefinition::parse(&with_vars)?;
        if other.vars != self.vars {
            return Err(MapFileError::Syntax {
                line: 1,
                message: "inverse file declares different variables".into(),
            });
        }
        self.inverse = Some(other.inverse.ok_or(MapFileError::MissingInverse)?);
        Ok(())
    }

    pub fn to_automorphism(&self) -> Result<AffineAutomorphism, MapFileError> {
        let inverse = self.inverse.clone().ok_or(MapFileError::MissingInverse)?;
        Ok(AffineAutomorphism::new(self.forward.clone(), inverse)?)
    }
}

fn parse_coordinates(
    value: &str,
    vars: &[String],
    line: usize,
    offset: usize,
) -> Result<Vec<Polynomial>, MapFileError> {
    let mut out = Vec::new();
    let mut column = offset;
    for part in value.split('|') {
        let p = parse_polynomial(part, vars).map_err(|e| MapFileError::Polynomial {
            line,
            column: column + e.column,
            message: e.message,
        })?;
        out.push(p);
        column += part.chars().count() + 1;
    }
    Ok(out)
}
