//! Shared plumbing: flag parsing, value lists, document emission.

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde_json::Value;

use geopack_core::scalar::{Mode, PrecisionContext, Rat, Scalar};
use geopack_core::wire;

use crate::errors::CliError;

/// Parsed arithmetic flags shared by every pipeline command.
pub struct Arith {
    pub mode: Mode,
    pub max_den: BigInt,
    pub ctx: PrecisionContext,
}

pub fn arith(opts: &crate::ArithOpts) -> Result<Arith, CliError> {
    let mode = wire::mode_parse(&opts.mode)?;
    let max_den: BigInt = opts.max_den.parse().map_err(|_| {
        CliError::validation(format!(
            "--max-den must be a decimal integer, got {:?}",
            opts.max_den
        ))
    })?;
    if max_den < BigInt::from(2) {
        return Err(CliError::validation("--max-den must be at least 2"));
    }
    let ctx = wire::ctx_for(&mode);
    Ok(Arith { mode, max_den, ctx })
}

/// Resolve a value list given either inline (positional) or as a file path.
pub fn values_source(
    inline: &Option<String>,
    input: &Option<PathBuf>,
) -> Result<String, CliError> {
    match (inline, input) {
        (Some(_), Some(_)) => Err(CliError::validation(
            "pass the values inline or via --input, not both",
        )),
        (Some(text), None) => Ok(text.clone()),
        (None, Some(path)) => read_text(path),
        (None, None) => Err(CliError::validation(
            "no values: pass them inline or via --input FILE",
        )),
    }
}

/// Parse one user-entered value: the scalar's native form, or any plain
/// rational ("7", "-2/3"), which rounds into the working precision.
fn parse_one<S: Scalar>(tok: &str, ctx: &PrecisionContext) -> Result<S, CliError> {
    if let Ok(v) = S::parse_ctx(tok, ctx) {
        return Ok(v);
    }
    let r = geopack_core::scalar::parse_rat(tok)
        .map_err(|e| CliError::validation(format!("bad value {tok:?}: {e}")))?;
    Ok(S::from_rat_ctx(&r, ctx))
}

/// Split on commas and whitespace, parse each token as a scalar.
pub fn parse_scalars<S: Scalar>(
    text: &str,
    ctx: &PrecisionContext,
) -> Result<Vec<S>, CliError> {
    let mut out = Vec::new();
    for tok in text.split(|c: char| c == ',' || c.is_whitespace()) {
        if tok.is_empty() {
            continue;
        }
        out.push(parse_one(tok, ctx)?);
    }
    if out.is_empty() {
        return Err(CliError::validation("the value list is empty"));
    }
    Ok(out)
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))
}

/// Parse a document file as JSON.
pub fn read_document(path: &Path) -> Result<Value, CliError> {
    let text = read_text(path)?;
    Ok(wire::document_parse(&text)?)
}

/// Write the machine-readable document to `--output`, or to stdout.
///
/// No command mutates its input files: writing a document over any path the
/// same invocation reads is refused.
pub fn emit(doc: &Value, output: &Option<PathBuf>, inputs: &[&Path]) -> Result<(), CliError> {
    let text = wire::document_text(doc);
    match output {
        Some(path) => {
            for inp in inputs {
                if same_file(path, inp) {
                    return Err(CliError::validation(format!(
                        "--output {} is also an input; commands do not mutate their inputs",
                        path.display()
                    )));
                }
            }
            fs::write(path, &text).map_err(|e| {
                CliError::validation(format!("cannot write {}: {e}", path.display()))
            })?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (a.canonicalize(), b.canonicalize()) {
        (Ok(ca), Ok(cb)) => ca == cb,
        _ => a == b,
    }
}

/// Human-facing one-line summary; stderr, so stdout stays machine-readable.
pub fn human(line: &str) {
    eprintln!("{line}");
}

/// Random rationals with numerators in [-999, 999] and denominators in
/// [1, 999] — the same distribution the library's stress tests draw from.
pub fn random_rats(n: usize, seed: u64) -> Vec<Rat> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let num: i64 = rng.random_range(-999..=999);
            let den: i64 = rng.random_range(1..=999);
            Rat::new(num.into(), den.into())
        })
        .collect()
}

/// Scalars for a generated array under the requested arithmetic mode.
pub fn random_scalars<S: Scalar>(n: usize, seed: u64, ctx: &PrecisionContext) -> Vec<S> {
    random_rats(n, seed)
        .iter()
        .map(|r| S::from_rat_ctx(r, ctx))
        .collect()
}

/// Parse one rational-valued scalar from a flag.
pub fn parse_scalar_flag<S: Scalar>(
    flag: &str,
    text: &str,
    ctx: &PrecisionContext,
) -> Result<S, CliError> {
    parse_one(text, ctx).map_err(|e| CliError::validation(format!("bad {flag} value: {e}")))
}
