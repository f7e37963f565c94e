//! Minimum-distance search.
//!
//! Four searches share one result type:
//!
//! * [`distance_exhaustive`] walks all codewords in Gray-code order.
//! * [`distance_sw`] slides a window of `s = ⌈(1−θ)n⌉` cyclically consecutive
//!   positions, enumerates low-weight patterns on the window and completes
//!   each one by erasure correction on the complement.
//! * [`distance_mb`] splits the positions into two cyclic halves and matches
//!   syndromes of half-weight patterns.
//! * [`distance_cs`] draws random covering sets `J` of size `⌊θn⌋` and
//!   enumerates the shortened code on each; [`cs_decode`] is the
//!   syndrome-decoding variant.
//!
//! SW and MB are exact whenever no cap fires. CS reports only verified
//! codewords, so its answer can be too large but never too small.
//!
//! Parallel work is split into units (windows, shifts, trials) processed in
//! fixed-size chunks. Within a chunk units run concurrently; results are then
//! folded in index order, so early exit, witnesses and counters are the same
//! for any thread count.

use std::fmt;
use std::ops::AddAssign;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::random_subset;
use crate::error::{Error, Result};
use crate::gf2::{for_each_span_element, BitMatrix, BitVector, RowEchelon};
use crate::seed::Seed;

pub const DEFAULT_DIM_CAP: usize = 28;
pub const DEFAULT_ENUM_CAP: u64 = 1 << 16;
pub const DEFAULT_LIST_CAP: u64 = 1 << 22;
pub const DEFAULT_B_CAP: usize = 20;

const CHUNK: usize = 32;

/// A binary linear code given by its parity-check matrix.
#[derive(Debug, Clone)]
pub struct Code {
    h: BitMatrix,
    rank: usize,
    generators: Vec<BitVector>,
    columns: Vec<BitVector>,
}

impl Code {
    pub fn new(h: BitMatrix) -> Self {
        let ech = RowEchelon::new(&h);
        let generators = ech.nullspace_basis();
        let columns = h.columns();
        Self {
            rank: ech.rank(),
            generators,
            columns,
            h,
        }
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.h
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    pub fn r(&self) -> usize {
        self.h.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Dimension `k' = n − rank(H)`.
    pub fn dimension(&self) -> usize {
        self.n() - self.rank
    }

    /// Basis of the code (the nullspace of `H`).
    pub fn generators(&self) -> &[BitVector] {
        &self.generators
    }

    pub fn column(&self, j: usize) -> &BitVector {
        &self.columns[j]
    }

    pub fn syndrome(&self, e: &BitVector) -> BitVector {
        let mut s = BitVector::zeros(self.r());
        for j in e.iter_ones() {
            s.xor_assign(&self.columns[j]);
        }
        s
    }

    pub fn is_codeword(&self, c: &BitVector) -> bool {
        c.len() == self.n() && self.syndrome(c).is_zero()
    }
}

/// Operation counts of one search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    /// Vector additions: elimination steps, syndrome updates, span walks.
    pub row_xors: u64,
    /// Candidate vectors examined (window patterns, half-patterns, span elements).
    pub patterns: u64,
    /// Covering-set trials drawn.
    pub trials: u64,
    /// Gaussian eliminations performed.
    pub eliminations: u64,
    /// Trials or windows abandoned because a co-rank cap fired.
    pub skipped: u64,
}

impl AddAssign for Counters {
    fn add_assign(&mut self, o: Self) {
        self.row_xors += o.row_xors;
        self.patterns += o.patterns;
        self.trials += o.trials;
        self.eliminations += o.eliminations;
        self.skipped += o.skipped;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InconclusiveReason {
    DimensionCap { dimension: usize, cap: usize },
    CorankCap { weight: usize, corank: usize },
    ListCap { weight: usize, list_size: u64, cap: u64 },
    ExhaustedDmax { d_max: usize },
}

impl fmt::Display for InconclusiveReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DimensionCap { dimension, cap } => {
                write!(f, "dimension cap: k'={dimension} exceeds {cap}")
            }
            Self::CorankCap { weight, corank } => {
                write!(f, "co-rank cap: completion of co-rank {corank} skipped at weight {weight}")
            }
            Self::ListCap {
                weight,
                list_size,
                cap,
            } => write!(f, "list cap: {list_size} half-patterns at weight {weight} exceed {cap}"),
            Self::ExhaustedDmax { d_max } => {
                write!(f, "exhausted d_max: no codeword of weight ≤ {d_max} found")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "level", rename_all = "snake_case")]
pub enum Certificate {
    Exact,
    Probabilistic { confidence: f64 },
    Inconclusive { reason: InconclusiveReason },
}

impl Certificate {
    pub fn is_conclusive(&self) -> bool {
        !matches!(self, Certificate::Inconclusive { .. })
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Exact => f.write_str("exact"),
            Certificate::Probabilistic { confidence } => {
                write!(f, "probabilistic (confidence {confidence})")
            }
            Certificate::Inconclusive { reason } => write!(f, "inconclusive ({reason})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub distance: Option<usize>,
    pub witness: Option<BitVector>,
    pub certificate: Certificate,
    pub counters: Counters,
}

impl DistanceResult {
    fn found(witness: BitVector, certificate: Certificate, counters: Counters) -> Self {
        Self {
            distance: Some(witness.weight()),
            witness: Some(witness),
            certificate,
            counters,
        }
    }

    fn none(certificate: Certificate, counters: Counters) -> Self {
        Self {
            distance: None,
            witness: None,
            certificate,
            counters,
        }
    }

    fn inconclusive(reason: InconclusiveReason, counters: Counters) -> Self {
        Self::none(Certificate::Inconclusive { reason }, counters)
    }
}

/// `C(n, k)` as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `C(n, k)` exactly, saturating at `u64::MAX`.
pub fn binomial_u64(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Visits all `k`-subsets of `0..n` in lexicographic order.
fn for_each_combination(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !visit(&idx) {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Per-unit outcome folded by [`scan_units`].
struct UnitOutcome<W> {
    counters: Counters,
    found: Option<W>,
    capped: Option<usize>,
}

impl<W> UnitOutcome<W> {
    fn empty() -> Self {
        Self {
            counters: Counters::default(),
            found: None,
            capped: None,
        }
    }
}

struct ScanSummary<W> {
    counters: Counters,
    found: Option<W>,
    capped: Option<usize>,
}

/// Runs `units` in chunks, stopping after the first chunk with a hit when
/// `early_exit` is set. Only units up to and including the first hit
/// contribute counters in that case.
fn scan_units<W: Send>(
    units: u64,
    early_exit: bool,
    run: impl Fn(u64) -> UnitOutcome<W> + Sync,
) -> ScanSummary<W> {
    let mut summary = ScanSummary {
        counters: Counters::default(),
        found: None,
        capped: None,
    };
    let mut start = 0u64;
    while start < units {
        let end = start.saturating_add(CHUNK as u64).min(units);
        let outcomes: Vec<UnitOutcome<W>> = (start..end).into_par_iter().map(&run).collect();
        for out in outcomes {
            summary.counters += out.counters;
            if summary.capped.is_none() {
                summary.capped = out.capped;
            }
            if summary.found.is_none() && out.found.is_some() {
                summary.found = out.found;
                if early_exit {
                    return summary;
                }
            }
        }
        start = end;
    }
    summary
}

/// Minimum weight over all nonzero codewords, walked in Gray-code order.
pub fn distance_exhaustive(code: &Code, dim_cap: usize) -> DistanceResult {
    let k = code.dimension();
    if k > dim_cap || k >= 64 {
        return DistanceResult::inconclusive(
            InconclusiveReason::DimensionCap {
                dimension: k,
                cap: dim_cap,
            },
            Counters::default(),
        );
    }
    if k == 0 {
        return DistanceResult::none(Certificate::Exact, Counters::default());
    }
    let mut best: Option<BitVector> = None;
    let visited = for_each_span_element(code.generators(), BitVector::zeros(code.n()), |c| {
        if best.as_ref().is_none_or(|b| c.weight() < b.weight()) {
            best = Some(c.clone());
        }
        true
    });
    let counters = Counters {
        row_xors: visited,
        patterns: visited,
        ..Counters::default()
    };
    DistanceResult::found(best.expect("k > 0"), Certificate::Exact, counters)
}

/// Erasure decoder for a fixed set of known positions `I`.
///
/// Reduces `[H_J | H_I]` with pivots restricted to `H_J`. A known pattern
/// `c_I` is completed by adding the transformed columns of `H_I` at its
/// support, reading off a particular solution, and walking the kernel of
/// `H_J`.
struct ErasureSolver {
    n: usize,
    known: Vec<usize>,
    erased: Vec<usize>,
    echelon: RowEchelon,
    reduced_known_cols: Vec<BitVector>,
    kernel: Vec<BitVector>,
}

impl ErasureSolver {
    fn new(code: &Code, known: Vec<usize>) -> Self {
        let n = code.n();
        let mut is_known = vec![false; n];
        for &i in &known {
            is_known[i] = true;
        }
        let erased: Vec<usize> = (0..n).filter(|&j| !is_known[j]).collect();
        let order: Vec<usize> = erased.iter().chain(&known).copied().collect();
        let augmented = code.parity_check().select_columns(&order);
        let echelon = RowEchelon::with_pivot_limit(&augmented, erased.len());
        let reduced_known_cols = echelon.trailing_columns();
        let kernel = echelon.nullspace_basis();
        Self {
            n,
            known,
            erased,
            echelon,
            reduced_known_cols,
            kernel,
        }
    }

    fn corank(&self) -> usize {
        self.kernel.len()
    }

    fn elimination_xors(&self) -> u64 {
        self.echelon.row_xors()
    }

    fn particular(&self, pattern: &[usize], counters: &mut Counters) -> Option<BitVector> {
        let mut y = BitVector::zeros(self.echelon.reduced_rows().len());
        for &p in pattern {
            y.xor_assign(&self.reduced_known_cols[p]);
        }
        counters.row_xors += pattern.len() as u64;
        self.echelon.solution_for_reduced_rhs(&y)
    }

    /// Visits `x_J` for every completion of the known pattern given by
    /// `pattern` (indices into `known`). The visitor receives the erased part.
    /// Returns `false` if the pattern has no completion.
    fn complete(
        &self,
        pattern: &[usize],
        counters: &mut Counters,
        mut visit: impl FnMut(&BitVector) -> bool,
    ) -> bool {
        let Some(particular) = self.particular(pattern, counters) else {
            return false;
        };
        if visit(&particular) {
            counters.row_xors += for_each_span_element(&self.kernel, particular, visit);
        }
        true
    }

    fn embed(&self, pattern: &[usize], erased_part: &BitVector) -> BitVector {
        let mut c = BitVector::zeros(self.n);
        for &p in pattern {
            c.set(self.known[p], true);
        }
        for j in erased_part.iter_ones() {
            c.set(self.erased[j], true);
        }
        c
    }
}

/// Result of completing a partial word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Completion {
    /// Every codeword agreeing with the known part: none (inconsistent), or
    /// all `2^b` of them.
    Codewords(Vec<BitVector>),
    /// The completion set has `2^corank` elements, more than the cap allows.
    CorankCap { corank: usize },
}

/// All codewords `c` with `c_I = known_values`, found by solving
/// `H_J·c_J^T = H_I·c_I^T` on the complement `J` of `I`.
pub fn erasure_complete(
    code: &Code,
    known: &[usize],
    known_values: &BitVector,
    enum_cap: u64,
) -> Result<Completion> {
    if known.len() != known_values.len() {
        return Err(Error::Dimension(format!(
            "{} known positions but {} known values",
            known.len(),
            known_values.len()
        )));
    }
    let mut sorted = known.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Index("duplicate known position".into()));
    }
    if sorted.last().is_some_and(|&i| i >= code.n()) {
        return Err(Error::Index(format!("known position out of range for n={}", code.n())));
    }
    let values: Vec<bool> = sorted
        .iter()
        .map(|i| known_values.get(known.iter().position(|k| k == i).unwrap()))
        .collect();
    let solver = ErasureSolver::new(code, sorted);
    let pattern: Vec<usize> = (0..values.len()).filter(|&p| values[p]).collect();
    let mut counters = Counters::default();
    if solver.particular(&pattern, &mut counters).is_none() {
        return Ok(Completion::Codewords(Vec::new()));
    }
    let b = solver.corank();
    if b >= 64 || (1u64 << b) > enum_cap {
        return Ok(Completion::CorankCap { corank: b });
    }
    let mut out = Vec::new();
    solver.complete(&pattern, &mut counters, |x| {
        out.push(solver.embed(&pattern, x));
        true
    });
    Ok(Completion::Codewords(out))
}

/// Sliding-window search parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwOptions {
    /// Erased fraction; the window holds `⌈(1−θ)n⌉` positions.
    pub theta: f64,
    pub d_max: usize,
    /// Largest completion set (`2^b`) enumerated per window.
    pub enum_cap: u64,
    pub early_exit: bool,
}

impl SwOptions {
    pub fn new(theta: f64, d_max: usize) -> Self {
        Self {
            theta,
            d_max,
            enum_cap: DEFAULT_ENUM_CAP,
            early_exit: true,
        }
    }
}

/// Window length `⌈(1−θ)n⌉`.
pub fn sw_window_len(n: usize, theta: f64) -> usize {
    (((1.0 - theta) * n as f64) - 1e-9).ceil().clamp(0.0, n as f64) as usize
}

/// Candidate window weights `⌊ds/n⌋` and `⌈ds/n⌉` for target weight `d`.
pub fn sw_window_weights(n: usize, s: usize, d: usize) -> Vec<usize> {
    let lo = d * s / n;
    let hi = (d * s).div_ceil(n);
    if lo == hi {
        vec![lo]
    } else {
        vec![lo, hi]
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("θ={theta} outside (0,1)")))
    }
}

pub fn distance_sw(code: &Code, opts: &SwOptions) -> Result<DistanceResult> {
    check_theta(opts.theta)?;
    let n = code.n();
    if code.dimension() == 0 {
        return Ok(DistanceResult::none(Certificate::Exact, Counters::default()));
    }
    let s = sw_window_len(n, opts.theta);
    let d_max = opts.d_max.min(n);
    let solvers: Vec<ErasureSolver> = (0..n)
        .into_par_iter()
        .map(|i| ErasureSolver::new(code, (0..s).map(|k| (i + k) % n).collect()))
        .collect();
    let mut counters = Counters::default();
    for solver in &solvers {
        counters.eliminations += 1;
        counters.row_xors += solver.elimination_xors();
    }
    let cap_ok = |b: usize| b < 64 && (1u64 << b) <= opts.enum_cap;

    for d in 1..=d_max {
        let weights = sw_window_weights(n, s, d);
        let summary = scan_units(n as u64, opts.early_exit, |i| {
            let solver = &solvers[i as usize];
            let mut out = UnitOutcome::empty();
            if !cap_ok(solver.corank()) {
                out.counters.skipped += 1;
                out.capped = Some(solver.corank());
                return out;
            }
            for &v in &weights {
                if v > d {
                    continue;
                }
                let need = d - v;
                for_each_combination(s, v, |pattern| {
                    out.counters.patterns += 1;
                    let mut hit = None;
                    solver.complete(pattern, &mut out.counters, |x| {
                        if x.weight() == need {
                            hit = Some(x.clone());
                            false
                        } else {
                            true
                        }
                    });
                    if let Some(x) = hit {
                        if out.found.is_none() {
                            out.found = Some(solver.embed(pattern, &x));
                        }
                        !opts.early_exit
                    } else {
                        true
                    }
                });
                if out.found.is_some() && opts.early_exit {
                    break;
                }
            }
            out
        });
        counters += summary.counters;
        if let Some(w) = summary.found {
            return Ok(DistanceResult::found(w, Certificate::Exact, counters));
        }
        if let Some(corank) = summary.capped {
            return Ok(DistanceResult::inconclusive(
                InconclusiveReason::CorankCap { weight: d, corank },
                counters,
            ));
        }
    }
    Ok(exhausted(d_max, n, counters))
}

fn exhausted(d_max: usize, n: usize, counters: Counters) -> DistanceResult {
    if d_max >= n {
        DistanceResult::none(Certificate::Exact, counters)
    } else {
        DistanceResult::inconclusive(InconclusiveReason::ExhaustedDmax { d_max }, counters)
    }
}

/// Matching-bipartition search parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MbOptions {
    pub d_max: usize,
    /// Largest half-pattern list built for one side.
    pub list_cap: u64,
    pub early_exit: bool,
}

impl MbOptions {
    pub fn new(d_max: usize) -> Self {
        Self {
            d_max,
            list_cap: DEFAULT_LIST_CAP,
            early_exit: true,
        }
    }
}

/// Patterns one MB round at weight `d` enumerates over all `n` shifts.
pub fn mb_patterns_per_round(n: usize, d: usize) -> u64 {
    let (sl, sr) = (n / 2, n - n / 2);
    let (vl, vr) = (d / 2, d - d / 2);
    n as u64 * (binomial_u64(sl, vl) + binomial_u64(sr, vr))
}

fn half_list(code: &Code, positions: &[usize], v: usize, counters: &mut Counters) -> Vec<(BitVector, Vec<usize>)> {
    let mut list = Vec::new();
    for_each_combination(positions.len(), v, |pattern| {
        let mut syn = BitVector::zeros(code.r());
        for &p in pattern {
            syn.xor_assign(code.column(positions[p]));
        }
        counters.patterns += 1;
        counters.row_xors += v as u64;
        list.push((syn, pattern.iter().map(|&p| positions[p]).collect()));
        true
    });
    list.sort_by(|a, b| a.0.cmp(&b.0));
    list
}

pub fn distance_mb(code: &Code, opts: &MbOptions) -> Result<DistanceResult> {
    let n = code.n();
    if opts.d_max > n {
        return Err(Error::Domain(format!("d_max={} exceeds n={n}", opts.d_max)));
    }
    if code.dimension() == 0 {
        return Ok(DistanceResult::none(Certificate::Exact, Counters::default()));
    }
    let (sl, sr) = (n / 2, n - n / 2);
    let mut counters = Counters::default();
    for d in 1..=opts.d_max {
        let (vl, vr) = (d / 2, d - d / 2);
        let list_size = binomial_u64(sl, vl).max(binomial_u64(sr, vr));
        if list_size > opts.list_cap {
            return Ok(DistanceResult::inconclusive(
                InconclusiveReason::ListCap {
                    weight: d,
                    list_size,
                    cap: opts.list_cap,
                },
                counters,
            ));
        }
        let summary = scan_units(n as u64, opts.early_exit, |i| {
            let i = i as usize;
            let left: Vec<usize> = (0..sl).map(|k| (i + k) % n).collect();
            let right: Vec<usize> = (0..sr).map(|k| (i + sl + k) % n).collect();
            let mut out = UnitOutcome::empty();
            let lefts = half_list(code, &left, vl, &mut out.counters);
            let rights = half_list(code, &right, vr, &mut out.counters);
            let (mut a, mut b) = (0, 0);
            while a < lefts.len() && b < rights.len() {
                match lefts[a].0.cmp(&rights[b].0) {
                    std::cmp::Ordering::Less => a += 1,
                    std::cmp::Ordering::Greater => b += 1,
                    std::cmp::Ordering::Equal => {
                        let support: Vec<usize> =
                            lefts[a].1.iter().chain(&rights[b].1).copied().collect();
                        out.found = Some(BitVector::from_support(n, &support));
                        break;
                    }
                }
            }
            out
        });
        counters += summary.counters;
        if let Some(w) = summary.found {
            return Ok(DistanceResult::found(w, Certificate::Exact, counters));
        }
    }
    Ok(exhausted(opts.d_max, n, counters))
}

/// Number of random `s`-subsets drawn when looking for a weight-`d` vector:
/// `⌈C(n,d)/C(s,d) · n·ln n⌉`, at least 1, saturating at `u64::MAX`.
pub fn covering_trials(n: usize, s: usize, d: usize) -> Result<u64> {
    if !(d <= s && s <= n) {
        return Err(Error::Domain(format!("need d ≤ s ≤ n, got n={n}, s={s}, d={d}")));
    }
    let log_ratio: f64 = (0..d).map(|i| ((n - i) as f64 / (s - i) as f64).ln()).sum();
    let nf = n as f64;
    let log_t = log_ratio + (nf * nf.ln()).max(f64::MIN_POSITIVE).ln();
    if nf * nf.ln() <= 0.0 {
        return Ok(1);
    }
    if log_t >= (u64::MAX as f64).ln() {
        return Ok(u64::MAX);
    }
    // Round to suppress ulp noise before taking the ceiling.
    let t = log_t.exp();
    let t = if (t - t.round()).abs() < 1e-9 * t.max(1.0) {
        t.round()
    } else {
        t.ceil()
    };
    Ok((t as u64).max(1))
}

/// A reproducible covering-set schedule for one target weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringPlan {
    pub s: usize,
    pub d: usize,
    pub trials: u64,
    pub seed: Seed,
}

impl CoveringPlan {
    pub fn new(n: usize, s: usize, d: usize, seed: Seed) -> Result<Self> {
        Ok(Self {
            s,
            d,
            trials: covering_trials(n, s, d)?,
            seed,
        })
    }

    /// The covering set of trial `t`, drawn from its own stream.
    pub fn subset(&self, n: usize, t: u64) -> Vec<usize> {
        let mut rng = self.seed.derive2(self.d as u64, t).rng();
        random_subset(&mut rng, n, self.s)
    }
}

/// Covering-set search parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CsOptions {
    /// Covering sets hold `⌊θn⌋` positions.
    pub theta: f64,
    pub d_max: usize,
    /// Largest co-rank whose `2^b` shortened codewords are enumerated.
    pub b_cap: usize,
    pub seed: Seed,
    pub early_exit: bool,
}

impl CsOptions {
    pub fn new(theta: f64, d_max: usize, seed: Seed) -> Self {
        Self {
            theta,
            d_max,
            b_cap: DEFAULT_B_CAP,
            seed,
            early_exit: true,
        }
    }
}

/// Covering-set size `⌊θn⌋`.
pub fn cs_subset_len(n: usize, theta: f64) -> usize {
    ((theta * n as f64) + 1e-9).floor().clamp(0.0, n as f64) as usize
}

fn cs_confidence(n: usize) -> f64 {
    let nf = n as f64;
    1.0 - (-nf * nf.ln()).exp()
}

pub fn distance_cs(code: &Code, opts: &CsOptions) -> Result<DistanceResult> {
    check_theta(opts.theta)?;
    let n = code.n();
    let s = cs_subset_len(n, opts.theta);
    if s == 0 {
        return Err(Error::Domain(format!("θ={} gives empty covering sets for n={n}", opts.theta)));
    }
    let b_cap = opts.b_cap.min(63);
    let mut counters = Counters::default();
    for d in 1..=opts.d_max.min(s) {
        let plan = CoveringPlan::new(n, s, d, opts.seed)?;
        let summary = scan_units(plan.trials, opts.early_exit, |t| {
            let j = plan.subset(n, t);
            let ech = RowEchelon::new(&code.parity_check().select_columns(&j));
            let mut out = UnitOutcome::empty();
            out.counters.trials = 1;
            out.counters.eliminations = 1;
            out.counters.row_xors = ech.row_xors();
            let kernel = ech.nullspace_basis();
            if kernel.len() > b_cap {
                out.counters.skipped = 1;
                return out;
            }
            let mut hit = None;
            let steps = for_each_span_element(&kernel, BitVector::zeros(s), |x| {
                if x.weight() == d {
                    hit = Some(x.clone());
                    false
                } else {
                    true
                }
            });
            out.counters.row_xors += steps;
            out.counters.patterns += steps;
            out.found = hit.map(|x| {
                let support: Vec<usize> = x.iter_ones().map(|k| j[k]).collect();
                BitVector::from_support(n, &support)
            });
            out
        });
        counters += summary.counters;
        if let Some(w) = summary.found {
            let cert = Certificate::Probabilistic {
                confidence: cs_confidence(n),
            };
            return Ok(DistanceResult::found(w, cert, counters));
        }
    }
    Ok(DistanceResult::inconclusive(
        InconclusiveReason::ExhaustedDmax { d_max: opts.d_max },
        counters,
    ))
}

/// Searches for a minimum-weight `e` with `H·e^T = syndrome` by covering
/// sets. The returned witness is the error vector, not a codeword.
pub fn cs_decode(code: &Code, syndrome: &BitVector, opts: &CsOptions) -> Result<DistanceResult> {
    check_theta(opts.theta)?;
    if syndrome.len() != code.r() {
        return Err(Error::Dimension(format!(
            "syndrome of length {} for {} checks",
            syndrome.len(),
            code.r()
        )));
    }
    if syndrome.is_zero() {
        return Err(Error::Precondition(
            "zero syndrome: use distance_cs to search for codewords".into(),
        ));
    }
    let n = code.n();
    let s = cs_subset_len(n, opts.theta);
    if s == 0 {
        return Err(Error::Domain(format!("θ={} gives empty covering sets for n={n}", opts.theta)));
    }
    let b_cap = opts.b_cap.min(63);
    let mut counters = Counters::default();
    for d in 1..=opts.d_max.min(s) {
        let plan = CoveringPlan::new(n, s, d, opts.seed)?;
        let summary = scan_units(plan.trials, opts.early_exit, |t| {
            let j = plan.subset(n, t);
            let ech = RowEchelon::with_rhs(&code.parity_check().select_columns(&j), syndrome);
            let mut out = UnitOutcome::empty();
            out.counters.trials = 1;
            out.counters.eliminations = 1;
            out.counters.row_xors = ech.row_xors();
            let Some(particular) = ech.particular_solution() else {
                return out;
            };
            let kernel = ech.nullspace_basis();
            if kernel.len() > b_cap {
                out.counters.skipped = 1;
                return out;
            }
            let mut best = particular.clone();
            out.counters.patterns += 1;
            let steps = for_each_span_element(&kernel, particular, |x| {
                if x.weight() < best.weight() {
                    best = x.clone();
                }
                true
            });
            out.counters.row_xors += steps;
            out.counters.patterns += steps;
            if best.weight() <= d {
                let support: Vec<usize> = best.iter_ones().map(|k| j[k]).collect();
                out.found = Some(BitVector::from_support(n, &support));
            }
            out
        });
        counters += summary.counters;
        if let Some(e) = summary.found {
            let cert = Certificate::Probabilistic {
                confidence: cs_confidence(n),
            };
            return Ok(DistanceResult::found(e, cert, counters));
        }
    }
    Ok(DistanceResult::inconclusive(
        InconclusiveReason::ExhaustedDmax { d_max: opts.d_max },
        counters,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_a, sample_b, EnsembleSpec};

    fn hamming() -> Code {
        Code::new(BitMatrix::parse_rows("1010101 0110011 0001111").unwrap())
    }

    fn repetition() -> Code {
        Code::new(BitMatrix::parse_rows("11").unwrap())
    }

    /// Minimum weight by summing every subset of generators directly.
    fn naive_distance(code: &Code) -> Option<usize> {
        let g = code.generators();
        (1u64..1 << g.len())
            .map(|mask| {
                let mut c = BitVector::zeros(code.n());
                for (i, row) in g.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        c.xor_assign(row);
                    }
                }
                c.weight()
            })
            .min()
    }

    fn a36(n: usize, seed: u64) -> Code {
        Code::new(sample_a(&EnsembleSpec::new(3, 6, n).unwrap(), Seed(seed)).unwrap())
    }

    fn assert_sound(code: &Code, r: &DistanceResult) {
        if let Some(w) = &r.witness {
            assert!(code.is_codeword(w));
            assert_eq!(Some(w.weight()), r.distance);
        }
    }

    #[test]
    fn code_caches_dimension() {
        let c = hamming();
        assert_eq!((c.n(), c.rank(), c.dimension()), (7, 3, 4));
        for g in c.generators() {
            assert!(c.is_codeword(g));
        }
    }

    #[test]
    fn exhaustive_examples() {
        let r = distance_exhaustive(&hamming(), DEFAULT_DIM_CAP);
        assert_eq!(r.distance, Some(3));
        assert_eq!(r.certificate, Certificate::Exact);
        assert_sound(&hamming(), &r);
        assert_eq!(distance_exhaustive(&repetition(), 28).distance, Some(2));
        let code = a36(12, 1);
        assert_eq!(distance_exhaustive(&code, 28).distance, naive_distance(&code));
    }

    #[test]
    fn exhaustive_trivial_and_capped() {
        let trivial = Code::new(BitMatrix::identity(4));
        let r = distance_exhaustive(&trivial, 28);
        assert_eq!((r.distance, r.certificate), (None, Certificate::Exact));
        let r = distance_exhaustive(&hamming(), 3);
        assert!(matches!(
            r.certificate,
            Certificate::Inconclusive {
                reason: InconclusiveReason::DimensionCap { dimension: 4, cap: 3 }
            }
        ));
    }

    #[test]
    fn erasure_complete_examples() {
        let code = hamming();
        let all: Vec<usize> = (0..7).collect();
        let c = code.generators()[0].clone();
        assert_eq!(
            erasure_complete(&code, &all, &c, 1 << 10).unwrap(),
            Completion::Codewords(vec![c.clone()])
        );
        let mut not_cw = c.clone();
        not_cw.flip(0);
        assert_eq!(
            erasure_complete(&code, &all, &not_cw, 1 << 10).unwrap(),
            Completion::Codewords(vec![])
        );
    }

    #[test]
    fn erasure_complete_matches_brute_force() {
        let code = hamming();
        // Erase J = {0, 1, 3}: columns 1, 2, 4 are independent, so b = 0.
        let known = vec![2, 4, 5, 6];
        for mask in 0u32..16 {
            let vals = BitVector::from_bools(&(0..4).map(|k| mask >> k & 1 == 1).collect::<Vec<_>>());
            let Completion::Codewords(got) = erasure_complete(&code, &known, &vals, 16).unwrap() else {
                panic!("cap fired");
            };
            let brute: Vec<BitVector> = (0u32..128)
                .map(|w| BitVector::from_bools(&(0..7).map(|k| w >> k & 1 == 1).collect::<Vec<_>>()))
                .filter(|w| code.is_codeword(w) && known.iter().enumerate().all(|(p, &i)| w.get(i) == vals.get(p)))
                .collect();
            assert_eq!(got.len(), 1);
            assert_eq!(got, brute);
        }
    }

    #[test]
    fn erasure_complete_set_size_is_power_of_two() {
        let code = a36(20, 4);
        let mut rng = Seed(8).rng();
        for _ in 0..50 {
            let known = random_subset(&mut rng, 20, 9);
            let vals = BitVector::from_bools(&(0..9).map(|_| rand::Rng::gen(&mut rng)).collect::<Vec<_>>());
            let erased: Vec<usize> = (0..20).filter(|j| !known.contains(j)).collect();
            let b = code.parity_check().column_submatrix(&erased).unwrap().corank();
            match erasure_complete(&code, &known, &vals, 1 << 20).unwrap() {
                Completion::Codewords(cs) => {
                    assert!(cs.is_empty() || cs.len() == 1 << b);
                    assert!(cs.iter().all(|c| code.is_codeword(c)));
                }
                Completion::CorankCap { .. } => panic!("cap fired"),
            }
        }
    }

    #[test]
    fn erasure_complete_errors_and_cap() {
        let code = hamming();
        assert!(erasure_complete(&code, &[0, 1], &BitVector::zeros(3), 4).is_err());
        assert!(erasure_complete(&code, &[0, 9], &BitVector::zeros(2), 4).is_err());
        // Nothing known: the completion set is the whole code, 2^4 words.
        assert_eq!(
            erasure_complete(&code, &[], &BitVector::zeros(0), 8).unwrap(),
            Completion::CorankCap { corank: 4 }
        );
    }

    #[test]
    fn sw_examples() {
        let r = distance_sw(&hamming(), &SwOptions::new(0.3, 7)).unwrap();
        assert_eq!(r.distance, Some(3));
        assert_eq!(r.certificate, Certificate::Exact);
        assert_sound(&hamming(), &r);
        for seed in 0..10 {
            let code = a36(18, seed);
            let sw = distance_sw(&code, &SwOptions::new(0.4, 18)).unwrap();
            assert_sound(&code, &sw);
            assert_eq!(sw.distance, distance_exhaustive(&code, 28).distance);
        }
    }

    #[test]
    fn sw_pattern_count_without_early_exit() {
        let code = a36(16, 3);
        let exact = distance_exhaustive(&code, 28).distance.unwrap();
        let opts = SwOptions {
            early_exit: false,
            ..SwOptions::new(0.4, 16)
        };
        let r = distance_sw(&code, &opts).unwrap();
        assert_eq!(r.distance, Some(exact));
        let s = sw_window_len(16, 0.4);
        let expected: u64 = (1..=exact)
            .map(|d| {
                16 * sw_window_weights(16, s, d)
                    .iter()
                    .map(|&v| binomial_u64(s, v))
                    .sum::<u64>()
            })
            .sum();
        assert_eq!(r.counters.patterns, expected);
    }

    #[test]
    fn sw_window_weights_bracket_average() {
        assert_eq!(sw_window_weights(10, 6, 5), vec![3]);
        assert_eq!(sw_window_weights(7, 5, 3), vec![2, 3]);
    }

    #[test]
    fn mb_examples() {
        assert_eq!(distance_mb(&hamming(), &MbOptions::new(7)).unwrap().distance, Some(3));
        let r = distance_mb(&repetition(), &MbOptions::new(2)).unwrap();
        assert_eq!(r.distance, Some(2));
        assert_eq!(r.witness.unwrap().to_string(), "11");
        for seed in 0..10 {
            let code = Code::new(sample_b(&EnsembleSpec::new(3, 6, 18).unwrap(), Seed(seed)).unwrap());
            let mb = distance_mb(&code, &MbOptions::new(18)).unwrap();
            assert_sound(&code, &mb);
            assert_eq!(mb.distance, distance_exhaustive(&code, 28).distance);
        }
        assert!(distance_mb(&hamming(), &MbOptions::new(8)).is_err());
    }

    #[test]
    fn mb_list_cap() {
        let opts = MbOptions {
            list_cap: 2,
            ..MbOptions::new(7)
        };
        let r = distance_mb(&hamming(), &opts).unwrap();
        assert!(matches!(
            r.certificate,
            Certificate::Inconclusive {
                reason: InconclusiveReason::ListCap { .. }
            }
        ));
    }

    #[test]
    fn covering_trials_examples() {
        assert_eq!(covering_trials(10, 10, 3).unwrap(), 24);
        assert_eq!(covering_trials(10, 5, 2).unwrap(), 104);
        assert_eq!(covering_trials(20, 7, 0).unwrap(), (20.0 * 20f64.ln()).ceil() as u64);
        assert_eq!(covering_trials(1, 1, 1).unwrap(), 1);
        assert!(covering_trials(10, 3, 4).is_err());
        assert!(covering_trials(10, 11, 4).is_err());
    }

    #[test]
    fn cs_examples() {
        let r = distance_cs(&hamming(), &CsOptions::new(0.6, 7, Seed(3))).unwrap();
        assert_eq!(r.distance, Some(3));
        assert!(matches!(r.certificate, Certificate::Probabilistic { .. }));
        assert_sound(&hamming(), &r);
    }

    #[test]
    fn cs_trials_at_failing_weights() {
        let code = a36(20, 2);
        let exact = distance_exhaustive(&code, 28).distance.unwrap();
        let opts = CsOptions {
            d_max: exact - 1,
            ..CsOptions::new(0.45, exact - 1, Seed(1))
        };
        let r = distance_cs(&code, &opts).unwrap();
        assert_eq!(r.distance, None);
        let s = cs_subset_len(20, 0.45);
        let expected: u64 = (1..exact).map(|d| covering_trials(20, s, d).unwrap()).sum();
        assert_eq!(r.counters.trials, expected);
        assert_eq!(r.counters.eliminations, r.counters.trials);
    }

    #[test]
    fn cs_decode_examples() {
        let code = hamming();
        for j in 0..7 {
            let e = BitVector::from_support(7, &[j]);
            let r = cs_decode(&code, &code.syndrome(&e), &CsOptions::new(0.6, 7, Seed(j as u64))).unwrap();
            assert_eq!(r.distance, Some(1));
            assert_eq!(code.syndrome(r.witness.as_ref().unwrap()), code.syndrome(&e));
        }
        assert!(matches!(
            cs_decode(&code, &BitVector::zeros(3), &CsOptions::new(0.6, 7, Seed(0))),
            Err(Error::Precondition(_))
        ));
        assert!(cs_decode(&code, &BitVector::zeros(2), &CsOptions::new(0.6, 7, Seed(0))).is_err());
    }

    #[test]
    fn results_do_not_depend_on_thread_count() {
        let code = a36(24, 6);
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| {
                (
                    distance_sw(&code, &SwOptions::new(0.45, 24)).unwrap(),
                    distance_mb(&code, &MbOptions::new(24)).unwrap(),
                    distance_cs(&code, &CsOptions::new(0.45, 24, Seed(5))).unwrap(),
                )
            })
        };
        let one = run(1);
        assert_eq!(one, run(4));
        assert_eq!(one, run(8));
    }

    #[test]
    fn combinations_in_lexicographic_order() {
        let mut all = Vec::new();
        for_each_combination(4, 2, |c| {
            all.push(c.to_vec());
            true
        });
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut empty = 0;
        for_each_combination(3, 0, |_| {
            empty += 1;
            true
        });
        assert_eq!(empty, 1);
    }
}
