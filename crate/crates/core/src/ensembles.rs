//! Samplers for the regular LDPC ensembles.
//!
//! * `A(ℓ,m)`: uniform over simple `r×n` binary matrices with column weight
//!   `ℓ` and row weight `m`, drawn with the configuration model and rejected
//!   whenever a (row, column) pair receives two edges.
//! * `B(ℓ,m)`: Gallager's construction. The first of `ℓ` horizontal blocks is
//!   `m` side-by-side identity matrices of size `n/m`; every further block is
//!   an independent uniform column permutation of the first.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::seed::Seed;

/// Default number of configuration-model draws before giving up.
pub const DEFAULT_REJECTION_BUDGET: u32 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ensemble {
    A,
    B,
}

impl FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Ensemble::A),
            "B" | "b" => Ok(Ensemble::B),
            other => Err(Error::Parse(format!("unknown ensemble {other:?} (expected A or B)"))),
        }
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ensemble::A => "A",
            Ensemble::B => "B",
        })
    }
}

/// Parameters `(ℓ, m, n)` of a regular ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub ell: usize,
    pub emm: usize,
    pub n: usize,
    /// Permits column weight 2.
    #[serde(default)]
    pub allow_low_weight: bool,
}

impl EnsembleSpec {
    pub fn new(ell: usize, emm: usize, n: usize) -> Result<Self> {
        let spec = Self {
            ell,
            emm,
            n,
            allow_low_weight: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_low_weight(ell: usize, emm: usize, n: usize) -> Result<Self> {
        let spec = Self {
            ell,
            emm,
            n,
            allow_low_weight: true,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Number of parity checks `n·ℓ/m`.
    pub fn r(&self) -> usize {
        self.n * self.ell / self.emm
    }

    pub fn alpha(&self) -> f64 {
        self.ell as f64 / self.emm as f64
    }

    pub fn design_rate(&self) -> f64 {
        1.0 - self.alpha()
    }

    pub fn validate(&self) -> Result<()> {
        let min_ell = if self.allow_low_weight { 2 } else { 3 };
        if self.ell < min_ell {
            return Err(Error::InvalidSpec(format!(
                "column weight {} below minimum {min_ell}",
                self.ell
            )));
        }
        if self.emm < self.ell {
            return Err(Error::InvalidSpec(format!(
                "row weight {} smaller than column weight {}",
                self.emm, self.ell
            )));
        }
        if self.n < self.emm {
            return Err(Error::InvalidSpec(format!(
                "block length {} shorter than row weight {}",
                self.n, self.emm
            )));
        }
        if !(self.n * self.ell).is_multiple_of(self.emm) {
            return Err(Error::InvalidSpec(format!(
                "n·ℓ = {} is not divisible by m = {}",
                self.n * self.ell,
                self.emm
            )));
        }
        Ok(())
    }

    pub fn validate_for(&self, ensemble: Ensemble) -> Result<()> {
        self.validate()?;
        if ensemble == Ensemble::B {
            if !self.n.is_multiple_of(self.emm) {
                return Err(Error::InvalidSpec(format!(
                    "ensemble B needs m = {} to divide n = {}",
                    self.emm, self.n
                )));
            }
            if !self.r().is_multiple_of(self.ell) {
                return Err(Error::InvalidSpec(format!(
                    "ensemble B needs ℓ = {} to divide r = {}",
                    self.ell,
                    self.r()
                )));
            }
        }
        Ok(())
    }
}

pub fn sample(ensemble: Ensemble, spec: &EnsembleSpec, seed: Seed) -> Result<BitMatrix> {
    match ensemble {
        Ensemble::A => sample_a(spec, seed),
        Ensemble::B => sample_b(spec, seed),
    }
}

pub fn sample_a(spec: &EnsembleSpec, seed: Seed) -> Result<BitMatrix> {
    sample_a_with_budget(spec, seed, DEFAULT_REJECTION_BUDGET)
}

pub fn sample_a_with_budget(spec: &EnsembleSpec, seed: Seed, budget: u32) -> Result<BitMatrix> {
    spec.validate_for(Ensemble::A)?;
    let (n, r, m) = (spec.n, spec.r(), spec.emm);
    let mut rng = seed.rng();
    // Variable sockets: column c appears ℓ times. After shuffling, check
    // socket k belongs to row k / m.
    let mut sockets: Vec<usize> = (0..n).flat_map(|c| std::iter::repeat_n(c, spec.ell)).collect();
    let mut collisions = 0;
    for _ in 0..budget {
        sockets.shuffle(&mut rng);
        let mut h = BitMatrix::zeros(r, n);
        let simple = sockets.chunks(m).enumerate().all(|(row, cols)| {
            cols.iter().all(|&c| {
                if h.get(row, c) {
                    false
                } else {
                    h.set(row, c, true);
                    true
                }
            })
        });
        if simple {
            return Ok(h);
        }
        collisions += 1;
    }
    Err(Error::RejectionBudget {
        attempts: budget,
        collisions,
    })
}

pub fn sample_b(spec: &EnsembleSpec, seed: Seed) -> Result<BitMatrix> {
    spec.validate_for(Ensemble::B)?;
    let (n, r, m, ell) = (spec.n, spec.r(), spec.emm, spec.ell);
    let block = r / ell;
    debug_assert_eq!(block, n / m);
    let mut rng = seed.rng();
    let mut h = BitMatrix::zeros(r, n);
    for row in 0..block {
        for k in 0..m {
            h.set(row, row + k * block, true);
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for b in 1..ell {
        perm.shuffle(&mut rng);
        for row in 0..block {
            for k in 0..m {
                h.set(b * block + row, perm[row + k * block], true);
            }
        }
    }
    Ok(h)
}

/// True iff `h` is `r×n` with every column of weight `ℓ` and every row of weight `m`.
pub fn validate_regular(h: &BitMatrix, spec: &EnsembleSpec) -> bool {
    h.rows() == spec.r()
        && h.cols() == spec.n
        && h.col_weights().iter().all(|&w| w == spec.ell)
        && h.row_weights().iter().all(|&w| w == spec.emm)
}

/// Column and row weight of a regular matrix, if it is one.
pub fn detect_regular(h: &BitMatrix) -> Option<(usize, usize)> {
    let cw = h.col_weights();
    let rw = h.row_weights();
    let ell = *cw.first()?;
    let emm = *rw.first()?;
    (cw.iter().all(|&w| w == ell) && rw.iter().all(|&w| w == emm) && ell > 0).then_some((ell, emm))
}

/// Uniform random `size`-subset of `0..n`, sorted ascending.
pub fn random_subset(rng: &mut impl Rng, n: usize, size: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    let (chosen, _) = idx.partial_shuffle(rng, size);
    let mut out = chosen.to_vec();
    out.sort_unstable();
    out
}
