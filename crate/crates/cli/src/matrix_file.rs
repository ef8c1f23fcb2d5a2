//! Plain-text density matrices: the local dimension `d` first, then the
//! d²×d² entries row-major as whitespace-separated `re im` pairs.

use compcorr::qmat::{BipartiteState, ComplexMatrix, DensityMatrix};
use compcorr::{Complex64, Error, Result};

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut tokens = text
        .lines()
        .enumerate()
        .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t)));
    let (line, first) = tokens.next().ok_or(Error::Parse { line: 1, message: "empty file".into() })?;
    let d: usize = first
        .parse()
        .map_err(|_| Error::Parse { line, message: format!("dimension '{first}' is not a positive integer") })?;
    if d < 2 {
        return Err(Error::Parse { line, message: format!("dimension {d} is below 2") });
    }
    let n = d * d;
    let mut entries = Vec::with_capacity(n * n);
    let mut last_line = line;
    let mut number = |(line, t): (usize, &str)| {
        last_line = line;
        t.parse::<f64>().map_err(|_| Error::Parse { line, message: format!("'{t}' is not a number") })
    };
    let mut values = Vec::with_capacity(2 * n * n);
    for tok in tokens {
        values.push(number(tok)?);
    }
    if values.len() != 2 * n * n {
        return Err(Error::Parse {
            line: last_line,
            message: format!("expected {} numbers ({n}x{n} re/im pairs), found {}", 2 * n * n, values.len()),
        });
    }
    for pair in values.chunks(2) {
        entries.push(Complex64::new(pair[0], pair[1]));
    }
    ComplexMatrix::from_row_major(n, n, entries)
}

/// Parses and validates a two-qudit density matrix.
pub fn read_state(text: &str) -> Result<BipartiteState> {
    let m = parse_matrix(text)?;
    let d = (m.rows() as f64).sqrt().round() as usize;
    BipartiteState::new(d, DensityMatrix::new(m)?)
}
