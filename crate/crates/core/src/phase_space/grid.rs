use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// One of the four phase-space coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    #[serde(rename = "x")]
    X,
    #[serde(rename = "p_x")]
    Px,
    #[serde(rename = "y")]
    Y,
    #[serde(rename = "p_y")]
    Py,
}

impl Axis {
    pub const ALL: [Axis; 4] = [Axis::X, Axis::Px, Axis::Y, Axis::Py];

    pub fn label(&self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Px => "p_x",
            Axis::Y => "y",
            Axis::Py => "p_y",
        }
    }

    /// True for the coordinates of mode A (`x`, `p_x`).
    pub fn is_mode_a(&self) -> bool {
        matches!(self, Axis::X | Axis::Px)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" => Ok(Axis::X),
            "p_x" | "px" => Ok(Axis::Px),
            "y" => Ok(Axis::Y),
            "p_y" | "py" => Ok(Axis::Py),
            other => Err(Error::invalid(format!("unknown axis label {other:?}"))),
        }
    }
}

/// Uniform samples `min, ..., max` (both ends included).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisRange {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        let r = Self { min, max, count };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::invalid(format!(
                "axis needs at least 2 samples, got {}",
                self.count
            )));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::invalid(format!(
                "axis range needs min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.max
        } else {
            self.min + i as f64 * self.step()
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

impl Default for AxisRange {
    fn default() -> Self {
        Self {
            min: -5.0,
            max: 5.0,
            count: 101,
        }
    }
}

/// Rectangular sample grid over two labelled axes. Row index follows `u`,
/// column index follows `v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub u: AxisRange,
    pub v: AxisRange,
    pub labels: (Axis, Axis),
}

impl Grid2D {
    pub fn new(u: AxisRange, v: AxisRange, labels: (Axis, Axis)) -> Result<Self> {
        u.validate()?;
        v.validate()?;
        if labels.0 == labels.1 {
            return Err(Error::invalid(format!(
                "grid axes must differ, got {} twice",
                labels.0
            )));
        }
        Ok(Self { u, v, labels })
    }

    /// Square grid over `[min, max]^2` with `count` samples per axis.
    pub fn square(min: f64, max: f64, count: usize, labels: (Axis, Axis)) -> Result<Self> {
        let r = AxisRange::new(min, max, count)?;
        Self::new(r, r, labels)
    }

    /// Default `(x, y)` grid: 101 x 101 over `[-5, 5]^2`.
    pub fn xy() -> Self {
        Self {
            u: AxisRange::default(),
            v: AxisRange::default(),
            labels: (Axis::X, Axis::Y),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.u.count, self.v.count)
    }
}

/// A point `(x, p_x, y, p_y)` in two-mode phase space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub px: f64,
    pub y: f64,
    pub py: f64,
}

impl PhasePoint {
    pub fn new(x: f64, px: f64, y: f64, py: f64) -> Self {
        Self { x, px, y, py }
    }

    /// The only place the `alpha = x - i p_x` convention is written down.
    pub fn from_coherent(alpha: Complex64, beta: Complex64) -> Self {
        Self {
            x: alpha.re,
            px: -alpha.im,
            y: beta.re,
            py: -beta.im,
        }
    }

    pub fn alpha(&self) -> Complex64 {
        Complex64::new(self.x, -self.px)
    }

    pub fn beta(&self) -> Complex64 {
        Complex64::new(self.y, -self.py)
    }

    pub fn get(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.x,
            Axis::Px => self.px,
            Axis::Y => self.y,
            Axis::Py => self.py,
        }
    }

    pub fn set(&mut self, axis: Axis, value: f64) {
        match axis {
            Axis::X => self.x = value,
            Axis::Px => self.px = value,
            Axis::Y => self.y = value,
            Axis::Py => self.py = value,
        }
    }
}

/// Two varying axes plus the two pinned ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceSpec {
    pub varying: (Axis, Axis),
    pub fixed: [(Axis, f64); 2],
}

impl SliceSpec {
    pub fn new(varying: (Axis, Axis), fixed: [(Axis, f64); 2]) -> Result<Self> {
        let spec = Self { varying, fixed };
        spec.validate()?;
        Ok(spec)
    }

    /// Slice over `(u, v)` with the remaining two axes pinned at zero.
    pub fn through_origin(u: Axis, v: Axis) -> Result<Self> {
        let rest: Vec<Axis> = Axis::ALL
            .into_iter()
            .filter(|a| *a != u && *a != v)
            .collect();
        if rest.len() != 2 {
            return Err(Error::invalid(format!(
                "slice axes must differ, got {u} twice"
            )));
        }
        Self::new((u, v), [(rest[0], 0.0), (rest[1], 0.0)])
    }

    pub fn validate(&self) -> Result<()> {
        let used = [
            self.varying.0,
            self.varying.1,
            self.fixed[0].0,
            self.fixed[1].0,
        ];
        for axis in Axis::ALL {
            let n = used.iter().filter(|a| **a == axis).count();
            if n != 1 {
                return Err(Error::invalid(format!(
                    "axis {axis} used {n} times in slice spec"
                )));
            }
        }
        if !(self.fixed[0].1.is_finite() && self.fixed[1].1.is_finite()) {
            return Err(Error::invalid("pinned coordinates must be finite"));
        }
        Ok(())
    }

    pub fn point(&self, u: f64, v: f64) -> PhasePoint {
        let mut p = PhasePoint::default();
        p.set(self.fixed[0].0, self.fixed[0].1);
        p.set(self.fixed[1].0, self.fixed[1].1);
        p.set(self.varying.0, u);
        p.set(self.varying.1, v);
        p
    }

    /// Checks that the grid is labelled with this slice's varying axes.
    pub fn check_grid(&self, grid: &Grid2D) -> Result<()> {
        if grid.labels != self.varying {
            return Err(Error::invalid(format!(
                "grid axes ({}, {}) do not match slice axes ({}, {})",
                grid.labels.0, grid.labels.1, self.varying.0, self.varying.1
            )));
        }
        Ok(())
    }
}
