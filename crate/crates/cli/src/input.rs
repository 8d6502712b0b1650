use crate::CliError;
use serde::{Serialize, Serializer};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use toric_dioph::arith::{PointFile, RationalPoint};
use toric_dioph::corpus;
use toric_dioph::{Fan, FanFile, TDivisor};

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Load a fan from a JSON file, or from the bundled corpus when no such file exists.
pub fn load_fan(source: &str) -> Result<Fan, CliError> {
    let path = Path::new(source);
    if path.is_file() {
        let file: FanFile = serde_json::from_str(&read(path)?)
            .map_err(|e| CliError::usage("fan", format!("{source}: {e}")))?;
        return Ok(Fan::try_from(file)?);
    }
    corpus::by_name(source).map(|e| e.fan).ok_or_else(|| {
        let names: Vec<&str> = corpus::all().iter().map(|e| e.name).collect();
        CliError::usage(
            "fan",
            format!("no file {source:?} and no bundled fan of that name (bundled: {})", names.join(", ")),
        )
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivisorArg {
    Anticanonical,
    Inline(Vec<i64>),
    File(PathBuf),
}

impl FromStr for DivisorArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "anticanonical" || s == "-K" {
            return Ok(DivisorArg::Anticanonical);
        }
        if s.chars().all(|c| c.is_ascii_digit() || c == ',' || c == '-' || c == ' ') {
            return s
                .parse::<crate::IntList>()
                .map(|l| DivisorArg::Inline(l.0));
        }
        Ok(DivisorArg::File(PathBuf::from(s)))
    }
}

impl fmt::Display for DivisorArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivisorArg::Anticanonical => f.write_str("anticanonical"),
            DivisorArg::Inline(v) => {
                let parts: Vec<String> = v.iter().map(i64::to_string).collect();
                f.write_str(&parts.join(","))
            }
            DivisorArg::File(p) => write!(f, "{}", p.display()),
        }
    }
}

impl Serialize for DivisorArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl DivisorArg {
    pub fn resolve(&self, fan: &Fan) -> Result<TDivisor, CliError> {
        let coeffs = match self {
            DivisorArg::Anticanonical => return Ok(TDivisor::anticanonical(fan.n_rays())),
            DivisorArg::Inline(v) => v.clone(),
            DivisorArg::File(p) => serde_json::from_str(&read(p)?)
                .map_err(|e| CliError::usage("--divisor", format!("{}: {e}", p.display())))?,
        };
        if coeffs.len() != fan.n_rays() {
            return Err(CliError::usage(
                "--divisor",
                format!("expected {} coefficients, one per ray, got {}", fan.n_rays(), coeffs.len()),
            ));
        }
        Ok(TDivisor(coeffs))
    }
}

pub fn load_point(path: &Path) -> Result<RationalPoint, CliError> {
    let file: PointFile = serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::usage("point", format!("{}: {e}", path.display())))?;
    Ok(RationalPoint::try_from(&file)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_arguments() {
        assert_eq!("anticanonical".parse(), Ok(DivisorArg::Anticanonical));
        assert_eq!("1, 0,-2".parse(), Ok(DivisorArg::Inline(vec![1, 0, -2])));
        assert_eq!("d.json".parse(), Ok(DivisorArg::File("d.json".into())));
        assert!("1,,2".parse::<DivisorArg>().is_err());
        assert_eq!(DivisorArg::Inline(vec![1, -1]).to_string(), "1,-1");
    }

    #[test]
    fn divisor_length_is_checked() {
        let fan = corpus::s7();
        assert_eq!(DivisorArg::Anticanonical.resolve(&fan).unwrap(), TDivisor(vec![1; 5]));
        let err = DivisorArg::Inline(vec![1, 2]).resolve(&fan).unwrap_err();
        assert!(err.to_string().starts_with("--divisor"));
    }
}
