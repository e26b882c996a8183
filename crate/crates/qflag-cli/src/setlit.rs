//! Set and list literals on the command line: `1,3`, `2..5`, `1,4..6`, `{}`.

use anyhow::{bail, Context, Result};
use qflag::KSet;

/// Parses a comma-separated list of integers and inclusive ranges `a..b`.
pub fn parse_list(s: &str) -> Result<Vec<usize>> {
    let body = s.trim().trim_start_matches(['{', '(', '[']).trim_end_matches(['}', ')', ']']);
    let mut out = Vec::new();
    for tok in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Some((a, b)) = tok.split_once("..") {
            let a: usize = a.trim().parse().with_context(|| format!("bad range start in {tok:?}"))?;
            let b: usize = b.trim().parse().with_context(|| format!("bad range end in {tok:?}"))?;
            if a > b {
                bail!("empty range {tok:?}");
            }
            out.extend(a..=b);
        } else {
            out.push(tok.parse().with_context(|| format!("bad integer {tok:?}"))?);
        }
    }
    Ok(out)
}

pub fn parse_set(n: usize, s: &str) -> Result<KSet> {
    Ok(KSet::new(n, parse_list(s)?)?)
}

/// Exactly `N` integers.
pub fn parse_array<const N: usize>(s: &str) -> Result<[usize; N]> {
    let v = parse_list(s)?;
    v.as_slice().try_into().map_err(|_| anyhow::anyhow!("expected {N} integers, got {}", v.len()))
}
