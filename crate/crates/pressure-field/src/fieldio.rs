//! Field files: a one-line JSON header naming the grid and the field kind,
//! then CSV payloads, one value per line.
//!
//! ```text
//! {"grid":{"nx":2,"ny":1,"nz":1,"lx":1.0,"ly":1.0,"lz":1.0},"kind":"scalar"}
//! 0.25
//! -0.25
//! ```
//!
//! Scalar payloads hold one value per cell in row-major order (x fastest).
//! Vector payloads hold three sections introduced by marker lines `u`, `v`,
//! `w`, each in row-major face order with boundary faces included. Boundary
//! entries must be 0 for velocity fields; force fields may carry nonzero
//! samples there, which every operation ignores (loaders surface them so
//! callers can warn).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::grid::Axis;
use crate::{Error, Grid, Result, ScalarField, VectorField};

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    grid: Grid,
    kind: String,
}

/// A parsed field file.
#[derive(Debug)]
pub enum LoadedField {
    Scalar(ScalarField),
    Vector(VectorField),
}

impl LoadedField {
    pub fn grid(&self) -> Grid {
        match self {
            LoadedField::Scalar(s) => s.grid(),
            LoadedField::Vector(v) => v.grid(),
        }
    }
}

pub fn write_scalar(path: &Path, field: &ScalarField) -> Result<()> {
    let header = Header {
        grid: field.grid(),
        kind: "scalar".into(),
    };
    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    for v in field.values() {
        writeln!(out, "{v}").expect("writing to string cannot fail");
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn write_vector(path: &Path, field: &VectorField) -> Result<()> {
    let header = Header {
        grid: field.grid(),
        kind: "vector".into(),
    };
    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    for (marker, axis) in [("u", Axis::X), ("v", Axis::Y), ("w", Axis::Z)] {
        out.push_str(marker);
        out.push('\n');
        for v in field.component(axis) {
            writeln!(out, "{v}").expect("writing to string cannot fail");
        }
    }
    fs::write(path, out)?;
    Ok(())
}

/// Read either kind of field file; errors carry 1-based line numbers.
pub fn read_field(path: &Path) -> Result<LoadedField> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();

    let (_, header_line) = lines.next().ok_or(Error::Parse {
        line: 1,
        detail: "empty file; expected a JSON header".into(),
    })?;
    let header: Header = serde_json::from_str(header_line).map_err(|e| Error::Parse {
        line: 1,
        detail: format!("bad header: {e}"),
    })?;
    let grid = Grid::new(
        header.grid.nx,
        header.grid.ny,
        header.grid.nz,
        header.grid.lx,
        header.grid.ly,
        header.grid.lz,
    )?;

    match header.kind.as_str() {
        "scalar" => {
            let values = take_values(&mut lines, grid.n_cells(), "scalar payload")?;
            expect_end(&mut lines)?;
            Ok(LoadedField::Scalar(ScalarField::new(grid, values)?))
        }
        "vector" => {
            let mut components = Vec::with_capacity(3);
            for (marker, axis) in [("u", Axis::X), ("v", Axis::Y), ("w", Axis::Z)] {
                let (idx, line) = lines.next().ok_or(Error::Parse {
                    line: 0,
                    detail: format!("file ended early: expected section marker {marker:?}"),
                })?;
                if line.trim() != marker {
                    return Err(Error::Parse {
                        line: idx + 1,
                        detail: format!("expected section marker {marker:?}, found {line:?}"),
                    });
                }
                components.push(take_values(&mut lines, grid.n_faces(axis), "face payload")?);
            }
            expect_end(&mut lines)?;
            let w = components.pop().expect("three sections");
            let v = components.pop().expect("three sections");
            let u = components.pop().expect("three sections");
            Ok(LoadedField::Vector(VectorField::new(grid, u, v, w)?))
        }
        other => Err(Error::Parse {
            line: 1,
            detail: format!("unknown field kind {other:?}; expected \"scalar\" or \"vector\""),
        }),
    }
}

fn take_values<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    count: usize,
    what: &str,
) -> Result<Vec<f64>> {
    let mut values = Vec::with_capacity(count);
    while values.len() < count {
        let (idx, line) = lines.next().ok_or(Error::Parse {
            line: 0,
            detail: format!(
                "file ended early: {what} needs {count} values, found {}",
                values.len()
            ),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let v: f64 = trimmed.parse().map_err(|e| Error::Parse {
            line: idx + 1,
            detail: format!("bad {what} value: {e}"),
        })?;
        values.push(v);
    }
    Ok(values)
}

fn expect_end<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<()> {
    for (idx, line) in lines {
        if !line.trim().is_empty() {
            return Err(Error::Parse {
                line: idx + 1,
                detail: format!("unexpected trailing content: {line:?}"),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn grid() -> Grid {
        Grid::new(2, 1, 1, 1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn scalar_roundtrip_is_lossless() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("p.field");
        let field = ScalarField::new(grid(), vec![0.1 + 0.2, -1.0 / 3.0]).unwrap();
        write_scalar(&path, &field).unwrap();
        match read_field(&path).unwrap() {
            LoadedField::Scalar(s) => assert_eq!(s.values(), field.values()),
            _ => panic!("expected scalar"),
        }
    }

    #[test]
    fn vector_roundtrip_preserves_boundary_samples() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("g.field");
        let g = grid();
        let field = VectorField::new(
            g,
            vec![0.5, std::f64::consts::PI, -0.5],
            vec![0.0; 4],
            vec![0.0; 4],
        )
        .unwrap();
        write_vector(&path, &field).unwrap();
        match read_field(&path).unwrap() {
            LoadedField::Vector(v) => {
                assert_eq!(v.component(Axis::X), field.component(Axis::X));
                assert_eq!(v.max_boundary_abs(), 0.5);
            }
            _ => panic!("expected vector"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.field");
        fs::write(
            &path,
            "{\"grid\":{\"nx\":2,\"ny\":1,\"nz\":1,\"lx\":1.0,\"ly\":1.0,\"lz\":1.0},\"kind\":\"scalar\"}\n0.25\nnot-a-number\n",
        )
        .unwrap();
        match read_field(&path).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn bad_header_is_line_one() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.field");
        fs::write(&path, "not json\n").unwrap();
        match read_field(&path).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn wrong_section_marker_is_reported() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.field");
        let mut text = String::from(
            "{\"grid\":{\"nx\":2,\"ny\":1,\"nz\":1,\"lx\":1.0,\"ly\":1.0,\"lz\":1.0},\"kind\":\"vector\"}\n",
        );
        text.push_str("q\n");
        fs::write(&path, text).unwrap();
        match read_field(&path).unwrap_err() {
            Error::Parse { line, detail } => {
                assert_eq!(line, 2);
                assert!(detail.contains("\"u\""));
            }
            other => panic!("expected parse error, got {other}"),
        }
    }
}
