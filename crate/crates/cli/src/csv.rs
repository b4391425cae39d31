//! Sampled nodes as `re,im,f_re,f_im,quadrant`.

use std::fmt::Write as _;
use std::path::Path;

use grpf::Node;

use crate::error::CliError;

pub const HEADER: &str = "re,im,f_re,f_im,quadrant";

/// One row per evaluated point. Points without a quadrant (zero or
/// non-finite value) get quadrant `0`.
pub fn nodes_csv<'a>(samples: impl IntoIterator<Item = &'a Node>) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for s in samples {
        let q = s.quadrant.map_or(0, |q| q.index());
        let _ = writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e},{q}", s.point.re, s.point.im, s.value.re, s.value.im);
    }
    out
}

pub fn emit_nodes_csv<'a>(samples: impl IntoIterator<Item = &'a Node>, path: &Path) -> Result<(), CliError> {
    std::fs::write(path, nodes_csv(samples)).map_err(|e| CliError::io(path, e))
}
