//! Parsing of command-line payloads: observables given inline or as files,
//! state-index sets, and start measures.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use specgap::{Error, FiniteChain, Measure, Observable, Result};

/// An observable argument is either an inline JSON array (`[1,3]`) or a path
/// to a file holding one.
pub fn parse_observable(arg: &str) -> Result<Observable> {
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg)?
    };
    let values: Vec<f64> = serde_json::from_str(&text)?;
    if values.is_empty() {
        return Err(Error::InvalidInput {
            context: "observable is empty".into(),
        });
    }
    Ok(Observable::new(values))
}

/// Comma-separated state indices, e.g. `"0,3,7"`.
pub fn parse_index_set(arg: &str) -> Result<BTreeSet<usize>> {
    let mut set = BTreeSet::new();
    for piece in arg.split(',') {
        let trimmed = piece.trim();
        if trimmed.is_empty() {
            continue;
        }
        let idx: usize = trimmed.parse().map_err(|_| Error::InvalidInput {
            context: format!("cannot parse state index {trimmed:?}"),
        })?;
        set.insert(idx);
    }
    if set.is_empty() {
        return Err(Error::InvalidInput {
            context: "state-index set is empty".into(),
        });
    }
    Ok(set)
}

/// Start measure: `"pi"`, `"delta:IDX"`, or an inline JSON array.
pub fn parse_start_measure(arg: &str, chain: &FiniteChain, pi: &Measure) -> Result<Measure> {
    if arg == "pi" {
        return Ok(pi.clone());
    }
    if let Some(idx) = arg.strip_prefix("delta:") {
        let state: usize = idx.parse().map_err(|_| Error::InvalidInput {
            context: format!("cannot parse delta state {idx:?}"),
        })?;
        if state >= chain.n() {
            return Err(Error::InvalidInput {
                context: format!("delta state {state} out of range for {} states", chain.n()),
            });
        }
        return Ok(Measure::delta(chain.n(), state));
    }
    let weights: Vec<f64> = serde_json::from_str(arg)?;
    Measure::new(weights)
}

pub fn load_chain(path: &Path) -> Result<FiniteChain> {
    FiniteChain::from_json_str(&fs::read_to_string(path)?)
}
