//! Evaluation grids and tabulated densities.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Uniform interior grid: `count` points strictly inside
/// `[lo + margin, hi - margin]`, at `a + (b - a) i / (count + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub margin: f64,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, count: usize) -> Self {
        GridSpec {
            lo,
            hi,
            count,
            margin: 0.0,
        }
    }

    pub fn with_margin(self, margin: f64) -> Self {
        GridSpec { margin, ..self }
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        let a = self.lo + self.margin;
        let b = self.hi - self.margin;
        if !(a.is_finite() && b.is_finite() && a < b && self.margin >= 0.0) {
            return Err(Error::domain(format!(
                "grid needs finite lo + margin < hi - margin (got lo={}, hi={}, margin={})",
                self.lo, self.hi, self.margin
            )));
        }
        let n = self.count as f64 + 1.0;
        Ok((1..=self.count).map(|i| a + (b - a) * (i as f64 / n)).collect())
    }
}

/// Power-law behaviour `~ d^exponent` of a density at a domain endpoint,
/// `d` being the distance to it. Negative exponents are singular.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EndpointBehavior {
    pub exponent: f64,
}

impl EndpointBehavior {
    pub fn is_singular(&self) -> bool {
        self.exponent < 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityGrid {
    points: Vec<f64>,
    values: Vec<f64>,
    singular_endpoints: [Option<EndpointBehavior>; 2],
}

impl DensityGrid {
    pub fn new(
        points: Vec<f64>,
        values: Vec<f64>,
        singular_endpoints: [Option<EndpointBehavior>; 2],
    ) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::GridMismatch(format!(
                "{} abscissae but {} values",
                points.len(),
                values.len()
            )));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::GridMismatch("abscissae must be strictly increasing".into()));
        }
        if let Some((x, v)) = points.iter().zip(&values).find(|(_, v)| !(**v >= 0.0)) {
            return Err(Error::domain(format!("density value {v} at {x} is not >= 0")));
        }
        Ok(DensityGrid {
            points,
            values,
            singular_endpoints,
        })
    }

    pub fn empty() -> Self {
        DensityGrid {
            points: Vec::new(),
            values: Vec::new(),
            singular_endpoints: [None, None],
        }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn singular_endpoints(&self) -> &[Option<EndpointBehavior>; 2] {
        &self.singular_endpoints
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().copied().zip(self.values.iter().copied())
    }
}

/// Evaluates `f` on the grid, in parallel. The result does not depend on
/// evaluation order. Errors carry the abscissa that produced them.
pub fn tabulate<F>(
    f: F,
    grid: &GridSpec,
    endpoints: [Option<EndpointBehavior>; 2],
) -> Result<DensityGrid>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if grid.count == 0 {
        return Ok(DensityGrid {
            singular_endpoints: endpoints,
            ..DensityGrid::empty()
        });
    }
    let points = grid.points()?;
    let values = points
        .par_iter()
        .map(|&x| {
            f(x).map_err(|e| Error::AtAbscissa {
                abscissa: x,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    DensityGrid::new(points, values, endpoints)
}
