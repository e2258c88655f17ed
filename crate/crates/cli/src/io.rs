//! Input loading: permutation files, two-column CSV, delay lists.

use std::path::Path;

use coppat::{rank_permutation, Error, Permutation, Result};

/// Read a permutation file: one line of whitespace-separated 1-based values.
pub fn read_permutation(path: &Path) -> Result<Permutation> {
    let text = std::fs::read_to_string(path)?;
    let line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or_else(|| Error::Parse {
            line: 1,
            msg: "no permutation found".into(),
        })?;
    line.parse().map_err(|e| Error::Parse {
        line: 1,
        msg: format!("{e}"),
    })
}

/// Read a two-column CSV of decimal reals; `header` skips the first line.
pub fn read_xy_csv(path: &Path, header: bool) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = std::fs::read_to_string(path)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    // maps data index -> file line number for error reporting
    let mut line_of = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if header && lineno == 0 {
            continue;
        }
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split(',').map(str::trim);
        let x = fields.next().filter(|f| !f.is_empty());
        let y = fields.next().filter(|f| !f.is_empty());
        let (x, y) = match (x, y) {
            (Some(x), Some(y)) => (x, y),
            _ => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: "expected two comma-separated columns".into(),
                })
            }
        };
        let parse = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                msg: format!("bad numeric value {s:?}"),
            })
        };
        xs.push(parse(x)?);
        ys.push(parse(y)?);
        line_of.push(lineno + 1);
    }
    if xs.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "no data rows".into(),
        });
    }
    // attach file line numbers to tie errors up front
    if let Err(Error::Ties {
        coord,
        first,
        second,
    }) = rank_permutation(&xs, &ys)
    {
        return Err(Error::Data(format!(
            "tied {coord} values at lines {} and {}",
            line_of[first], line_of[second]
        )));
    }
    Ok((xs, ys))
}

/// Load the observed rank permutation from either input form.
pub fn load_permutation(
    perm: Option<&Path>,
    csv: Option<&Path>,
    header: bool,
) -> Result<Permutation> {
    match (perm, csv) {
        (Some(p), None) => read_permutation(p),
        (None, Some(c)) => {
            let (xs, ys) = read_xy_csv(c, header)?;
            rank_permutation(&xs, &ys)
        }
        _ => Err(Error::Parameter(
            "provide exactly one of --perm and --csv".into(),
        )),
    }
}

/// Read one positive delay per line.
pub fn read_delays(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| Error::Parse {
            line: lineno + 1,
            msg: format!("bad delay value {line:?}"),
        })?;
        out.push(v);
    }
    Ok(out)
}
