//! Validated parameter bundles shared by the cost model and the simulator.

use crate::error::{Error, Result};

/// All cost-model inputs in one validated bundle.
///
/// The subdivision process starts from a `g x g` grid of regions over an
/// `n x n` domain, splits each surviving region into `r x r` children per
/// level, and stops once children would shrink below side `B` (`b` here).
/// The remaining fields describe the workload and the machine:
///
/// * `p`: probability that a region fails its uniformity test and subdivides,
/// * `a`: application work per element (for Mandelbrot, the dwell limit),
/// * `lambda`: subdivision overhead, in multiples of `a`,
/// * `q`: regions the machine processes concurrently,
/// * `c`: elements processed concurrently within one region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Domain side in elements (power of two).
    pub n: u64,
    /// Initial subdivisions per axis (power of two, `g * b <= n`).
    pub g: u64,
    /// Subdivisions per axis at each level (power of two, at least 2).
    pub r: u64,
    /// Stopping region side (power of two).
    pub b: u64,
    /// Subdivision probability, in `[0, 1]`.
    pub p: f64,
    /// Work per element, at least 1.
    pub a: f64,
    /// Subdivision overhead factor, at least 0.
    pub lambda: f64,
    /// Region-level parallel width of the machine, at least 1.
    pub q: u64,
    /// Element-level parallel width of the machine, at least 1.
    pub c: u64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            n: 1024,
            g: 4,
            r: 2,
            b: 16,
            p: 0.5,
            a: 512.0,
            lambda: 10.0,
            q: 128,
            c: 64,
        }
    }
}

fn require_power_of_two(name: &'static str, value: u64) -> Result<()> {
    if value == 0 || !value.is_power_of_two() {
        return Err(Error::PowerOfTwo { name, value });
    }
    Ok(())
}

fn require_probability(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || !(0.0..=1.0).contains(&value) {
        return Err(Error::Probability { name, value });
    }
    Ok(())
}

impl ModelParams {
    /// Checks every field invariant.
    pub fn validate(&self) -> Result<()> {
        require_power_of_two("n", self.n)?;
        require_power_of_two("g", self.g)?;
        require_power_of_two("r", self.r)?;
        require_power_of_two("B", self.b)?;
        if self.r < 2 {
            return Err(Error::TooSmall {
                name: "r",
                min: 2,
                value: self.r,
            });
        }
        let coarse = self.g.saturating_mul(self.b);
        if coarse > self.n {
            return Err(Error::GridExceedsDomain {
                got: coarse,
                n: self.n,
            });
        }
        require_probability("P", self.p)?;
        if !self.a.is_finite() || self.a < 1.0 {
            return Err(Error::FloatTooSmall {
                name: "A",
                min: 1.0,
                value: self.a,
            });
        }
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return Err(Error::FloatTooSmall {
                name: "lambda",
                min: 0.0,
                value: self.lambda,
            });
        }
        if self.q < 1 {
            return Err(Error::TooSmall {
                name: "q",
                min: 1,
                value: self.q,
            });
        }
        if self.c < 1 {
            return Err(Error::TooSmall {
                name: "c",
                min: 1,
                value: self.c,
            });
        }
        Ok(())
    }

    /// Returns the bundle if every invariant holds.
    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }
}

/// Per-level subdivision probabilities for the general work form.
///
/// Entry `i` is the probability that a level-`i` region subdivides. When used
/// with a parameter bundle of depth `tau`, the profile must hold exactly
/// `tau - 1` entries.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProbProfile(Vec<f64>);

impl ProbProfile {
    /// Validates that every entry is a probability.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        for &p in &probs {
            require_probability("profile entry", p)?;
        }
        Ok(ProbProfile(probs))
    }

    /// Builds a constant profile of `len` copies of `p`.
    pub fn constant(p: f64, len: usize) -> Result<Self> {
        require_probability("P", p)?;
        Ok(ProbProfile(vec![p; len]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}
