//! Config files and the data descriptions shared by several subcommands.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tricomi::strichartz::random_packets;
use tricomi::{Error, Field, GridSpec};

use crate::CliError;

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn require<'a>(path: Option<&'a Path>, command: &str) -> Result<&'a Path, CliError> {
    path.ok_or_else(|| CliError::Input(format!("`{command}` needs --config <file>")))
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub dim: usize,
    pub half_width: f64,
    pub points: usize,
}

impl GridSection {
    pub fn build(&self) -> Result<GridSpec, Error> {
        GridSpec::new(self.dim, self.half_width, self.points)
    }
}

fn one() -> f64 {
    1.0
}

fn three() -> usize {
    3
}

/// Initial data. The random kind draws Gaussian wave packets from the
/// global seed and is two-dimensional only.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSpec {
    #[default]
    Zero,
    Bump {
        #[serde(default = "one")]
        amplitude: f64,
        radius: f64,
        #[serde(default)]
        center: Vec<f64>,
    },
    Gaussian {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one")]
        width: f64,
        #[serde(default)]
        center: Vec<f64>,
    },
    Random {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "three")]
        packets: usize,
    },
}

fn offset(x: &[f64], center: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(a, v)| (v - center.get(a).copied().unwrap_or(0.0)).powi(2))
        .sum()
}

impl DataSpec {
    pub fn build(&self, grid: GridSpec, seed: u64, salt: u64) -> Result<Field, Error> {
        let check_center = |c: &[f64]| {
            if c.len() > grid.dim() {
                Err(Error::Config(format!("center has {} coordinates on a {}-D grid", c.len(), grid.dim())))
            } else {
                Ok(())
            }
        };
        let field = match self {
            DataSpec::Zero => Field::zeros(grid),
            DataSpec::Bump { amplitude, radius, center } => {
                check_center(center)?;
                if !(*radius > 0.0) {
                    return Err(Error::Config(format!("bump radius {radius} must be positive")));
                }
                let r2 = radius * radius;
                Field::from_fn(grid, |x| {
                    let d = offset(&x[..grid.dim()], center);
                    if d < r2 {
                        amplitude * (1.0 - 1.0 / (1.0 - d / r2)).exp()
                    } else {
                        0.0
                    }
                })
            }
            DataSpec::Gaussian { amplitude, width, center } => {
                check_center(center)?;
                if !(*width > 0.0) {
                    return Err(Error::Config(format!("gaussian width {width} must be positive")));
                }
                Field::from_fn(grid, |x| amplitude * (-offset(&x[..grid.dim()], center) / (width * width)).exp())
            }
            DataSpec::Random { amplitude, packets } => {
                if grid.dim() != 2 {
                    return Err(Error::Config("random data need a two-dimensional grid".into()));
                }
                let mut f = random_packets(grid, *packets, seed, salt);
                f.scale(*amplitude);
                f
            }
        };
        check_support(&field)?;
        Ok(field)
    }
}

/// Data must vanish on the box boundary, where the periodic extension would
/// otherwise interact with itself.
pub fn check_support(f: &Field) -> Result<(), Error> {
    let grid = f.grid();
    let sup = f.sup_norm();
    if sup == 0.0 {
        return Ok(());
    }
    let edge = (0..grid.len())
        .filter(|&k| {
            grid.unflatten(k)[..grid.dim()]
                .iter()
                .any(|&i| i == 0 || i + 1 == grid.points())
        })
        .map(|k| f.values()[k].abs())
        .fold(0.0, f64::max);
    if edge > 1e-10 * sup {
        return Err(Error::SupportViolation(format!(
            "data reach the box boundary (edge value {edge:.3e}, sup {sup:.3e}); enlarge half_width"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct DataPair {
    #[serde(default)]
    pub f: DataSpec,
    #[serde(default)]
    pub g: DataSpec,
}

impl DataPair {
    pub fn build(&self, grid: GridSpec, seed: u64) -> Result<(Field, Field), Error> {
        Ok((self.f.build(grid, seed, 0)?, self.g.build(grid, seed, 1)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Doc {
        data: DataPair,
    }

    #[test]
    fn data_tables_parse() {
        let doc: Doc = toml::from_str("[data.f]\nkind = \"bump\"\nradius = 2.0\n").unwrap();
        assert!(matches!(doc.data.f, DataSpec::Bump { .. }));
        assert!(matches!(doc.data.g, DataSpec::Zero));
        assert!(toml::from_str::<Doc>("[data.f]\nkind = \"bump\"\nradius = 2.0\ncolour = 1\n").is_err());
        assert!(toml::from_str::<Doc>("[data.f]\nkind = \"square\"\n").is_err());
    }

    #[test]
    fn oversized_bump_is_a_support_violation() {
        let grid = GridSpec::new(2, 4.0, 32).unwrap();
        let spec = DataSpec::Bump { amplitude: 1.0, radius: 5.0, center: vec![] };
        assert!(matches!(spec.build(grid, 0, 0), Err(Error::SupportViolation(_))));
        let ok = DataSpec::Bump { amplitude: 1.0, radius: 3.0, center: vec![0.5] };
        assert!(ok.build(grid, 0, 0).is_ok());
    }
}
