//! On-disk formats: function files and sample files.
//!
//! A function file holds one `x,value` pair per line with strictly
//! increasing `x`; `#` starts a comment. A sample file holds one positive
//! draw per line, same comment rule.

use std::path::Path;
use std::sync::Arc;

use funbreg::{GridFunction, MeasureSpace};

use crate::{CliError, Result};

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Reads `x,value` pairs, enforcing strictly increasing `x`.
pub fn read_function_file(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = read_to_string(path)?;
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| CliError::Parse {
            path: path.display().to_string(),
            line: idx + 1,
            msg,
        };
        let (x, value) = line
            .split_once(',')
            .ok_or_else(|| err("expected x,value".into()))?;
        let x: f64 = x
            .trim()
            .parse()
            .map_err(|_| err(format!("bad x {:?}", x.trim())))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| err(format!("bad value {:?}", value.trim())))?;
        if let Some(&(prev, _)) = pairs.last() {
            if x <= prev {
                return Err(err(format!(
                    "x must be strictly increasing ({prev} then {x})"
                )));
            }
        }
        pairs.push((x, value));
    }
    if pairs.is_empty() {
        return Err(CliError::Parse {
            path: path.display().to_string(),
            line: 0,
            msg: "no data lines".into(),
        });
    }
    Ok(pairs)
}

/// Places file pairs onto a grid: the file must carry exactly one pair per
/// node, with each `x` matching the node location.
pub fn grid_function_from_pairs(
    space: &Arc<MeasureSpace>,
    pairs: &[(f64, f64)],
    origin: &Path,
) -> Result<GridFunction> {
    let err = |msg: String| CliError::Parse {
        path: origin.display().to_string(),
        line: 0,
        msg,
    };
    if pairs.len() != space.len() {
        return Err(err(format!(
            "{} pairs for a grid of {} nodes",
            pairs.len(),
            space.len()
        )));
    }
    let span = space.nodes()[space.len() - 1] - space.nodes()[0];
    let tol = 1e-9 * span.max(1.0);
    let mut values = Vec::with_capacity(pairs.len());
    for (&(x, value), &node) in pairs.iter().zip(space.nodes()) {
        if (x - node).abs() > tol {
            return Err(err(format!(
                "sample location {x} does not match grid node {node}"
            )));
        }
        values.push(value);
    }
    GridFunction::new(space, values).map_err(CliError::Core)
}

/// Reads one positive draw per line.
pub fn read_samples_file(path: &Path) -> Result<Vec<f64>> {
    let text = read_to_string(path)?;
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| CliError::Parse {
            path: path.display().to_string(),
            line: idx + 1,
            msg: format!("bad sample {line:?}"),
        })?;
        points.push(value);
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(name: &str, contents: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("funbreg-files-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(name);
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        path
    }

    #[test]
    fn function_file_round_trip() {
        let space = MeasureSpace::interval(0.0, 1.0, 4).unwrap();
        let mut text = String::from("# f(x) = x\n");
        for &x in space.nodes() {
            text.push_str(&format!("{x},{x}\n"));
        }
        let path = write_temp("f.csv", &text);
        let pairs = read_function_file(&path).unwrap();
        let f = grid_function_from_pairs(&space, &pairs, &path).unwrap();
        assert_eq!(f.values(), space.nodes());
    }

    #[test]
    fn function_file_rejects_disorder_and_mismatch() {
        let path = write_temp("bad.csv", "0.5,1\n0.25,2\n");
        assert!(read_function_file(&path).is_err());

        let space = MeasureSpace::interval(0.0, 1.0, 4).unwrap();
        let path = write_temp("short.csv", "0.125,1\n0.375,1\n");
        let pairs = read_function_file(&path).unwrap();
        assert!(grid_function_from_pairs(&space, &pairs, &path).is_err());

        let path = write_temp("offgrid.csv", "0.1,1\n0.2,1\n0.3,1\n0.4,1\n");
        let pairs = read_function_file(&path).unwrap();
        assert!(grid_function_from_pairs(&space, &pairs, &path).is_err());
    }

    #[test]
    fn samples_file() {
        let path = write_temp("samples.txt", "# draws\n0.3\n0.9\n0.5\n");
        assert_eq!(read_samples_file(&path).unwrap(), vec![0.3, 0.9, 0.5]);
        let path = write_temp("bad_samples.txt", "0.3\nnope\n");
        assert!(read_samples_file(&path).is_err());
    }

    #[test]
    fn missing_file_carries_path_context() {
        let err = read_samples_file(Path::new("/nonexistent/samples.txt")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/samples.txt"));
    }
}
