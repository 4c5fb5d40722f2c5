//! Input files: JSON objects `{"p": [...]}`, `{"blocks": [[...], ...]}`,
//! `{"a": [...], "b": [...]}`, `{"m": [...]}`, a bare JSON array, or CSV with
//! one probability per line.

use std::io::Read;
use std::path::Path;

use serde::Deserialize;

use nonext::{product, Distribution, ProductSystem, RationalDistribution, Refinement};

use crate::CliError;

#[derive(Debug, Clone)]
pub enum Input {
    Distribution(Distribution),
    Refinement(Refinement),
    Product(ProductSystem),
    Rational(RationalDistribution),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonInput {
    Probs { p: Vec<f64> },
    Blocks { blocks: Vec<Vec<f64>> },
    Pair { a: Vec<f64>, b: Vec<f64> },
    Counts { m: Vec<u64> },
    Bare(Vec<f64>),
}

fn kernel(op: &'static str) -> impl FnOnce(nonext::Error) -> CliError {
    move |source| CliError::Kernel { op, source }
}

impl Input {
    /// Reads `path`, or standard input when `path` is `-`.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = if path.as_os_str() == "-" {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        } else {
            std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?
        };
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') || trimmed.starts_with('[') {
            Self::parse_json(trimmed)
        } else {
            Self::parse_csv(text)
        }
    }

    fn parse_json(text: &str) -> Result<Self, CliError> {
        let parsed: JsonInput = serde_json::from_str(text).map_err(|e| {
            CliError::Parse(format!(
                "expected {{\"p\"}}, {{\"blocks\"}}, {{\"a\", \"b\"}} or {{\"m\"}} JSON input: {e}"
            ))
        })?;
        Ok(match parsed {
            JsonInput::Probs { p } | JsonInput::Bare(p) => {
                Input::Distribution(Distribution::new(p, false).map_err(kernel("read distribution"))?)
            }
            JsonInput::Blocks { blocks } => {
                Input::Refinement(Refinement::new(blocks).map_err(kernel("read refinement"))?)
            }
            JsonInput::Pair { a, b } => {
                let a = Distribution::new(a, false).map_err(kernel("read product system"))?;
                let b = Distribution::new(b, false).map_err(kernel("read product system"))?;
                Input::Product(product(&a, &b))
            }
            JsonInput::Counts { m } => {
                Input::Rational(RationalDistribution::new(m).map_err(kernel("read multiplicities"))?)
            }
        })
    }

    fn parse_csv(text: &str) -> Result<Self, CliError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut p = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| CliError::Parse(format!("CSV: {e}")))?;
            let field = match record.get(0) {
                Some(f) if !f.is_empty() => f,
                _ => continue,
            };
            let value: f64 = field
                .parse()
                .map_err(|_| CliError::Parse(format!("CSV line {}: `{field}` is not a number", line + 1)))?;
            p.push(value);
        }
        Ok(Input::Distribution(
            Distribution::new(p, false).map_err(kernel("read distribution"))?,
        ))
    }

    /// The flat distribution carried by any input shape.
    pub fn distribution(&self) -> Distribution {
        match self {
            Input::Distribution(d) => d.clone(),
            Input::Refinement(r) => r.flatten(),
            Input::Product(s) => s.joint().clone(),
            Input::Rational(rd) => rd.to_distribution(),
        }
    }

    /// A refinement for the additivity checks. Plain distributions are
    /// grouped into consecutive pairs.
    pub fn refinement(&self) -> Refinement {
        match self {
            Input::Refinement(r) => r.clone(),
            Input::Product(s) => s.as_refinement(),
            other => {
                let d = other.distribution();
                let blocks = d.as_slice().chunks(2).map(<[f64]>::to_vec).collect();
                Refinement::new(blocks).expect("regrouping a valid distribution")
            }
        }
    }

    /// A product system for the pseudoadditivity check. Other shapes are
    /// paired with themselves.
    pub fn product_system(&self) -> ProductSystem {
        match self {
            Input::Product(s) => s.clone(),
            other => {
                let d = other.distribution();
                product(&d, &d)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shapes() {
        assert!(matches!(Input::parse(r#"{"p": [0.5, 0.5]}"#).unwrap(), Input::Distribution(_)));
        assert!(matches!(Input::parse("[0.25, 0.75]").unwrap(), Input::Distribution(_)));
        assert!(matches!(
            Input::parse(r#"{"blocks": [[0.25, 0.25], [0.5]]}"#).unwrap(),
            Input::Refinement(_)
        ));
        let pair = Input::parse(r#"{"a": [0.5, 0.5], "b": [1.0]}"#).unwrap();
        assert_eq!(pair.distribution().len(), 2);
        assert!(matches!(Input::parse(r#"{"m": [2, 1]}"#).unwrap(), Input::Rational(_)));
    }

    #[test]
    fn csv_lines() {
        let d = Input::parse("0.2\n0.3\n\n0.5\n").unwrap().distribution();
        assert_eq!(d.as_slice(), &[0.2, 0.3, 0.5]);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(Input::parse(r#"{"q": [1.0]}"#), Err(CliError::Parse(_))));
        assert!(matches!(Input::parse("0.5\nhalf\n"), Err(CliError::Parse(_))));
        assert!(matches!(Input::parse(r#"{"p": [0.5, 0.6]}"#), Err(CliError::Kernel { .. })));
    }

    #[test]
    fn derived_shapes() {
        let input = Input::parse(r#"{"p": [0.1, 0.2, 0.3, 0.4, 0.0]}"#).unwrap();
        assert_eq!(input.refinement().block_sizes(), vec![2, 2, 1]);
        assert_eq!(input.product_system().joint().len(), 25);
    }
}
