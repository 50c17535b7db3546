//! Plain-text structured-grid files.
//!
//! Format: a header line `ni nj nk`, followed by `ni·nj·nk` lines holding
//! `x y z`, with k varying fastest, then j, then i. Metrics are obtained by
//! fourth-order finite differences of the coordinates with unit
//! computational spacing (one-sided fourth-order stencils at the edges).

use super::mapping::{ComputationalGrid, MetricField};
use super::Metric;
use crate::error::{Error, Result};
use crate::scalar::Real;
use std::io::{BufRead, Write};
use std::path::Path;

/// Physical coordinates of a structured grid.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuredGrid<T> {
    pub ni: usize,
    pub nj: usize,
    pub nk: usize,
    pub coords: Vec<[T; 3]>,
}

impl<T: Real> StructuredGrid<T> {
    #[inline]
    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.nj + j) * self.nk + k
    }
}

/// Parses a grid from any buffered reader.
pub fn parse_grid<T: Real, R: BufRead>(reader: R) -> Result<StructuredGrid<T>> {
    let mut lines = reader
        .lines()
        .enumerate()
        .map(|(n, l)| l.map(|s| (n + 1, s)).map_err(|e| Error::GridFile(e.to_string())))
        .filter(|r| r.as_ref().map(|(_, s)| !s.trim().is_empty()).unwrap_or(true));
    let (_, header) = lines.next().ok_or_else(|| Error::GridFile("empty file".into()))??;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::GridFile(format!("bad header `{header}`: {e}")))?;
    if dims.len() != 3 || dims.contains(&0) {
        return Err(Error::GridFile(format!("header must hold three positive sizes, got `{header}`")));
    }
    let (ni, nj, nk) = (dims[0], dims[1], dims[2]);
    let n = ni * nj * nk;
    let mut coords = Vec::with_capacity(n);
    for line in lines {
        let (lineno, text) = line?;
        let vals: Vec<f64> = text
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::GridFile(format!("line {lineno}: {e}")))?;
        if vals.len() != 3 || vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::GridFile(format!("line {lineno}: expected three finite numbers")));
        }
        coords.push([T::lit(vals[0]), T::lit(vals[1]), T::lit(vals[2])]);
    }
    if coords.len() != n {
        return Err(Error::GridFile(format!("expected {n} coordinate lines, found {}", coords.len())));
    }
    Ok(StructuredGrid { ni, nj, nk, coords })
}

/// Reads a grid file from disk.
pub fn read_grid_file<T: Real>(path: &Path) -> Result<StructuredGrid<T>> {
    let f = std::fs::File::open(path).map_err(|e| Error::GridFile(format!("{}: {e}", path.display())))?;
    parse_grid(std::io::BufReader::new(f))
}

/// Writes a grid in the plain-text format.
pub fn write_grid<T: Real, W: Write>(grid: &StructuredGrid<T>, mut w: W) -> Result<()> {
    let io = |e: std::io::Error| Error::GridFile(e.to_string());
    writeln!(w, "{} {} {}", grid.ni, grid.nj, grid.nk).map_err(io)?;
    for c in &grid.coords {
        writeln!(w, "{:e} {:e} {:e}", c[0].as_f64(), c[1].as_f64(), c[2].as_f64()).map_err(io)?;
    }
    Ok(())
}

/// Fourth-order first derivative of `f` at index `i` with unit spacing.
fn d4<T: Real>(f: &[T], i: usize) -> T {
    let n = f.len();
    let c = |v: f64| T::lit(v);
    let twelfth = T::one() / c(12.0);
    if i >= 2 && i + 2 < n {
        (f[i - 2] - c(8.0) * f[i - 1] + c(8.0) * f[i + 1] - f[i + 2]) * twelfth
    } else if i == 0 {
        (c(-25.0) * f[0] + c(48.0) * f[1] - c(36.0) * f[2] + c(16.0) * f[3] - c(3.0) * f[4]) * twelfth
    } else if i == 1 {
        (c(-3.0) * f[0] - c(10.0) * f[1] + c(18.0) * f[2] - c(6.0) * f[3] + f[4]) * twelfth
    } else if i == n - 1 {
        -(c(-25.0) * f[n - 1] + c(48.0) * f[n - 2] - c(36.0) * f[n - 3] + c(16.0) * f[n - 4] - c(3.0) * f[n - 5])
            * twelfth
    } else {
        -(c(-3.0) * f[n - 1] - c(10.0) * f[n - 2] + c(18.0) * f[n - 3] - c(6.0) * f[n - 4] + f[n - 5]) * twelfth
    }
}

/// Computes the metric field of a structured grid. Directions with a single
/// node are treated as a unit-spaced extrusion along the matching Cartesian
/// axis; otherwise every direction needs at least five nodes.
pub fn metrics_from_grid<T: Real>(grid: &StructuredGrid<T>) -> Result<MetricField<T>> {
    let dims = [grid.ni, grid.nj, grid.nk];
    for (a, &d) in dims.iter().enumerate() {
        if d > 1 && d < 5 {
            return Err(Error::GridFile(format!(
                "direction {a} has {d} nodes; fourth-order differences need at least 5"
            )));
        }
    }
    let mut metrics = Vec::with_capacity(grid.coords.len());
    let mut line = Vec::new();
    for i in 0..grid.ni {
        for j in 0..grid.nj {
            for k in 0..grid.nk {
                let mut jac = [[T::zero(); 3]; 3];
                for dir in 0..3 {
                    if dims[dir] == 1 {
                        jac[dir][dir] = T::one();
                        continue;
                    }
                    for comp in 0..3 {
                        line.clear();
                        let pos = match dir {
                            0 => {
                                line.extend((0..grid.ni).map(|ii| grid.coords[grid.index(ii, j, k)][comp]));
                                i
                            }
                            1 => {
                                line.extend((0..grid.nj).map(|jj| grid.coords[grid.index(i, jj, k)][comp]));
                                j
                            }
                            _ => {
                                line.extend((0..grid.nk).map(|kk| grid.coords[grid.index(i, j, kk)][comp]));
                                k
                            }
                        };
                        jac[comp][dir] = d4(&line, pos);
                    }
                }
                let m = Metric::from_jacobian(&jac).map_err(|_| Error::SingularMapping { i, j, k })?;
                metrics.push(m);
            }
        }
    }
    Ok(MetricField {
        grid: ComputationalGrid { ni: grid.ni, nj: grid.nj, nk: grid.nk, spacing: [T::one(); 3] },
        metrics,
        coords: grid.coords.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_sided_stencils_exact_for_quartics() {
        let f: Vec<f64> = (0..7).map(|i| (i as f64).powi(4) - 2.0 * (i as f64)).collect();
        for i in 0..7 {
            let exact = 4.0 * (i as f64).powi(3) - 2.0;
            assert!((d4(&f, i) - exact).abs() < 1e-10, "i={i}");
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_grid::<f64, _>("2 1\n".as_bytes()).is_err());
        assert!(parse_grid::<f64, _>("1 1 2\n0 0 0\n".as_bytes()).is_err());
        assert!(parse_grid::<f64, _>("1 1 1\n0 zero 0\n".as_bytes()).is_err());
    }
}
