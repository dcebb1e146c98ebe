use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const MAX_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint {
    coords: Vec<i64>,
}

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        check_dim(coords.len())?;
        Ok(LatticePoint { coords })
    }

    pub fn origin(d: usize) -> Result<Self> {
        Self::new(vec![0; d])
    }

    /// The `i`-th unit vector (0-based axis).
    pub fn unit(d: usize, axis: usize) -> Result<Self> {
        if axis >= d {
            return invalid(format!("axis {axis} out of range for dimension {d}"));
        }
        let mut c = vec![0; d];
        c[axis] = 1;
        Self::new(c)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn l1(&self) -> u64 {
        self.coords.iter().map(|c| c.unsigned_abs()).sum()
    }

    pub fn l2(&self) -> f64 {
        self.coords.iter().map(|&c| (c as f64) * (c as f64)).sum::<f64>().sqrt()
    }

    pub fn l2_squared(&self) -> u64 {
        self.coords.iter().map(|&c| c.unsigned_abs().pow(2)).sum()
    }
}

pub fn check_dim(d: usize) -> Result<()> {
    if d == 0 || d > MAX_DIM {
        return invalid(format!("dimension must be in 1..={MAX_DIM}, got {d}"));
    }
    Ok(())
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for LatticePoint {
    type Err = Error;

    /// Comma separated coordinates, e.g. `1,0,-2`.
    fn from_str(s: &str) -> Result<Self> {
        let coords = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::InvalidInput(format!("bad coordinate {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        LatticePoint::new(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms() {
        let p: LatticePoint = "3,-4".parse().unwrap();
        assert_eq!(p.l1(), 7);
        assert_eq!(p.l2(), 5.0);
        assert_eq!(p.to_string(), "3,-4");
    }

    #[test]
    fn dimension_cap() {
        assert!(LatticePoint::new(vec![0; 5]).is_err());
        assert!(LatticePoint::new(vec![]).is_err());
    }
}
