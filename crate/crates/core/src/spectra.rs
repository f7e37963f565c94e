//! Asymptotic weight-spectrum quantities of the regular ensembles and the
//! complexity exponents derived from them.
//!
//! All functions are generic over the floating-point type. Exponents are in
//! bits per code symbol.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Smallest relative weight `βθ` considered by the inner maximisation of
/// [`f_exponent`]. A floor on the absolute weight keeps `f` nondecreasing in
/// `θ`; the objective tends to zero from below as the weight vanishes.
pub const F_MIN_WEIGHT: f64 = 1e-6;

const F_GRID_STEP: f64 = 1e-3;
const DELTA_SCAN_START: f64 = 1e-6;
const DELTA_SCAN_STEP: f64 = 1e-4;

/// Row/column degrees of a regular ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpectrumParams {
    pub ell: u32,
    pub m: u32,
}

impl SpectrumParams {
    pub fn new(ell: u32, m: u32) -> Result<Self> {
        if m < 2 || ell < 2 || ell > m {
            return Err(Error::Domain(format!("need 2 ≤ ℓ ≤ m, got ℓ={ell}, m={m}")));
        }
        Ok(Self { ell, m })
    }

    /// From `α = ℓ/m` and `m`; `α·m` must be an integer.
    pub fn from_alpha<T: Real>(alpha: T, m: u32) -> Result<Self> {
        let ell = alpha * T::from_u32(m).unwrap();
        let rounded = ell.round();
        if (ell - rounded).abs() > T::tolerance(1e-9) {
            return Err(Error::Domain(format!("α·m = {ell} is not an integer")));
        }
        Self::new(rounded.to_u32().unwrap(), m)
    }

    pub fn alpha<T: Real>(&self) -> T {
        T::from_u32(self.ell).unwrap() / T::from_u32(self.m).unwrap()
    }

    pub fn rate<T: Real>(&self) -> T {
        T::one() - self.alpha::<T>()
    }

    fn m_real<T: Real>(&self) -> T {
        T::from_u32(self.m).unwrap()
    }
}

/// A real number or `−∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtendedReal<T> {
    Finite(T),
    NegInfinity,
}

impl<T: Real> ExtendedReal<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(&self) -> Option<T> {
        match *self {
            ExtendedReal::Finite(v) => Some(v),
            ExtendedReal::NegInfinity => None,
        }
    }

    /// The value as a float, with `−∞` mapped to the type's negative infinity.
    pub fn value(&self) -> T {
        self.finite().unwrap_or_else(T::neg_infinity)
    }

    pub fn add(self, rhs: T) -> Self {
        match self {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(v + rhs),
            ExtendedReal::NegInfinity => ExtendedReal::NegInfinity,
        }
    }

    pub fn max(self, other: Self) -> Self {
        match (self, other) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::Finite(a.max(b)),
            (ExtendedReal::NegInfinity, x) | (x, ExtendedReal::NegInfinity) => x,
        }
    }
}

/// Binary entropy `h(x)` with `0·log 0 = 0`.
pub fn entropy<T: Real>(x: T) -> Result<T> {
    if !(x >= T::zero() && x <= T::one()) {
        return Err(Error::Domain(format!("entropy argument {x} outside [0,1]")));
    }
    Ok(entropy_unchecked(x))
}

fn entropy_unchecked<T: Real>(x: T) -> T {
    let term = |p: T| if p <= T::zero() { T::zero() } else { -p * p.log2() };
    term(x) + term(T::one() - x)
}

/// Inverse of [`entropy`] on `[0, 1/2]`.
pub fn entropy_inv<T: Real>(y: T) -> Result<T> {
    if !(y >= T::zero() && y <= T::one()) {
        return Err(Error::Domain(format!("entropy_inv argument {y} outside [0,1]")));
    }
    if y == T::one() {
        return Ok(T::lit(0.5));
    }
    let tol = T::tolerance(1e-12);
    let (mut lo, mut hi) = (T::zero(), T::lit(0.5));
    while hi - lo > tol {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if entropy_unchecked(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / T::lit(2.0))
}

/// Ratio `[(1+t)^{m−1} + (1−t)^{m−1}] / [(1+t)^m + (1−t)^m]`, evaluated via
/// `u = (1−t)/(1+t)` so that no power overflows.
fn t_ratio<T: Real>(m: u32, t: T) -> T {
    let u = (T::one() - t) / (T::one() + t);
    let m = m as i32;
    (T::one() + u.powi(m - 1)) / ((T::one() + t) * (T::one() + u.powi(m)))
}

/// The positive root `t` of `t_ratio(m, t) = 1 − β`.
pub fn solve_t<T: Real>(m: u32, beta: T) -> Result<T> {
    if m < 2 {
        return Err(Error::Domain(format!("row weight m={m} must be at least 2")));
    }
    if !(beta > T::zero() && beta < T::one()) {
        return Err(Error::Domain(format!("β={beta} must lie in (0,1)")));
    }
    let mr = T::from_u32(m).unwrap();
    if m % 2 == 1 && beta >= T::one() - T::one() / mr {
        return Err(Error::Domain(format!(
            "β={beta} ≥ 1 − 1/m has no root for odd m={m}"
        )));
    }
    let target = T::one() - beta;
    // The ratio decreases from 1 at t=0 towards 0 (even m) or 1/m (odd m).
    let mut hi = T::one();
    let mut doublings = 0;
    while t_ratio(m, hi) > target {
        hi = hi * T::lit(2.0);
        doublings += 1;
        if doublings > 400 || !hi.is_finite() {
            return Err(Error::RootNotFound(format!(
                "no bracket for t with m={m}, β={beta}"
            )));
        }
    }
    let mut lo = T::zero();
    let tol = T::tolerance(1e-12);
    for _ in 0..4000 {
        if hi - lo <= tol * hi {
            break;
        }
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if t_ratio(m, mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / T::lit(2.0))
}

/// Exponent `q(α,β)` of the probability that a fixed word of relative weight
/// `β` is a codeword. `q(α,0) = 0` by continuity; `−∞` when `m` is odd and
/// `β ≥ 1 − 1/m`.
pub fn q_exponent<T: Real>(p: &SpectrumParams, beta: T) -> Result<ExtendedReal<T>> {
    if !(beta >= T::zero() && beta <= T::one()) {
        return Err(Error::Domain(format!("β={beta} outside [0,1]")));
    }
    let m = p.m_real::<T>();
    if p.m % 2 == 1 && beta >= T::one() - T::one() / m {
        return Ok(ExtendedReal::NegInfinity);
    }
    if beta == T::zero() || beta == T::one() {
        // β = 1 with even m: the all-ones word satisfies every check.
        return Ok(ExtendedReal::Finite(T::zero()));
    }
    let alpha = p.alpha::<T>();
    let t = solve_t(p.m, beta)?;
    let u = (T::one() - t) / (T::one() + t);
    let log_sum = m * (T::one() + t).log2() + (T::one() + u.powi(p.m as i32)).log2();
    let value = alpha * (log_sum - T::one() - beta * m * t.log2()) - alpha * m * entropy_unchecked(beta);
    Ok(ExtendedReal::Finite(value))
}

/// Growth exponent `h(β) + q(α,β)` of the average number of weight-`βn` codewords.
pub fn spectrum_exponent<T: Real>(p: &SpectrumParams, beta: T) -> Result<ExtendedReal<T>> {
    Ok(q_exponent(p, beta)?.add(entropy(beta)?))
}

fn f_objective<T: Real>(p: &SpectrumParams, theta: T, beta: T) -> ExtendedReal<T> {
    q_exponent(p, beta * theta)
        .expect("βθ within [0,1]")
        .add(theta * entropy_unchecked(beta))
}

/// Exponent `f(θ) = max_β {q(α,βθ) + θ·h(β)}` of the average number of
/// nonzero codewords in a shortened code of length `θn`.
///
/// The maximum is taken over `β ∈ [F_MIN_WEIGHT/θ, 1]` on a `10⁻³` grid,
/// then refined by golden-section search around the best grid point.
pub fn f_exponent<T: Real>(p: &SpectrumParams, theta: T) -> Result<ExtendedReal<T>> {
    if !(theta > T::zero() && theta <= T::one()) {
        return Err(Error::Domain(format!("θ={theta} outside (0,1]")));
    }
    let beta_lo = (T::lit(F_MIN_WEIGHT) / theta).min(T::one());
    let step = T::lit(F_GRID_STEP);
    let steps = (T::one() / step).round().to_usize().unwrap();
    let mut grid = vec![beta_lo];
    grid.extend(
        (1..=steps)
            .map(|k| T::from_count(k) * step)
            .filter(|&b| b > beta_lo),
    );

    let mut best: Option<(usize, T)> = None;
    for (i, &b) in grid.iter().enumerate() {
        if let ExtendedReal::Finite(v) = f_objective(p, theta, b) {
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((i, v));
            }
        }
    }
    let Some((i, grid_best)) = best else {
        return Ok(ExtendedReal::NegInfinity);
    };
    let a = grid[i.saturating_sub(1)];
    let b = grid[(i + 1).min(grid.len() - 1)];
    let refined = golden_max(|x| f_objective(p, theta, x).value(), a, b, T::tolerance(1e-10));
    Ok(ExtendedReal::Finite(grid_best.max(refined)))
}

/// Golden-section maximisation of a unimodal function on `[a, b]`.
fn golden_max<T: Real>(f: impl Fn(T) -> T, mut a: T, mut b: T, tol: T) -> T {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = f(a).max(f(b));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        best = best.max(fc).max(fd);
    }
    best
}

fn bisect<T: Real>(f: impl Fn(T) -> T, mut lo: T, mut hi: T, tol: T) -> T {
    // Invariant: f(lo) < 0 ≤ f(hi).
    while hi - lo > tol {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / T::lit(2.0)
}

/// Smallest `β ∈ (0, 1/2]` where the spectrum exponent changes sign from
/// negative to nonnegative: the typical relative distance of the ensemble.
pub fn delta_star<T: Real>(p: &SpectrumParams) -> Result<T> {
    let spec = |b: T| spectrum_exponent(p, b).expect("β in range").value();
    let step = T::lit(DELTA_SCAN_STEP);
    let half = T::lit(0.5);
    let mut prev_b = T::lit(DELTA_SCAN_START);
    let mut prev_v = spec(prev_b);
    let mut k = 1usize;
    loop {
        let b = (T::lit(DELTA_SCAN_START) + T::from_count(k) * step).min(half);
        let v = spec(b);
        if prev_v < T::zero() && v >= T::zero() {
            return Ok(bisect(spec, prev_b, b, T::tolerance(1e-10)));
        }
        if b >= half {
            return Err(Error::RootNotFound(format!(
                "spectrum exponent of ({},{}) has no negative-to-positive crossing in (0, 1/2]; \
                 value at {} is {}",
                p.ell,
                p.m,
                DELTA_SCAN_START,
                spec(T::lit(DELTA_SCAN_START))
            )));
        }
        prev_b = b;
        prev_v = v;
        k += 1;
    }
}

/// Root of [`f_exponent`] in `(0,1)`: the ML erasure-correcting threshold.
///
/// A coarse scan locates the bracket and rejects functions with more than one
/// sign change, after which bisection runs to `10⁻⁸`.
pub fn theta_star<T: Real>(p: &SpectrumParams) -> Result<T> {
    let f = |th: T| f_exponent(p, th).expect("θ in range").value();
    let coarse: Vec<T> = (1..=20).map(|k| T::from_count(k) / T::lit(20.0)).collect();
    let values: Vec<T> = coarse.iter().map(|&th| f(th)).collect();
    let changes: Vec<usize> = (1..coarse.len())
        .filter(|&i| (values[i - 1] < T::zero()) != (values[i] < T::zero()))
        .collect();
    let diagnostic = || {
        coarse
            .iter()
            .zip(&values)
            .map(|(th, v)| format!("f({th:.2})={v:.3e}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    match changes.as_slice() {
        [i] if values[*i - 1] < T::zero() => {
            Ok(bisect(f, coarse[*i - 1], coarse[*i], T::tolerance(1e-8)))
        }
        [] if values[0] >= T::zero() => {
            // The crossing lies below the first coarse point.
            let lo = T::lit(1e-3);
            if f(lo) < T::zero() {
                Ok(bisect(f, lo, coarse[0], T::tolerance(1e-8)))
            } else {
                Err(Error::RootNotFound(format!(
                    "f is nonnegative down to θ=1e-3 for ({},{}): {}",
                    p.ell,
                    p.m,
                    diagnostic()
                )))
            }
        }
        _ => Err(Error::RootNotFound(format!(
            "no single sign change of f for ({},{}): {}",
            p.ell,
            p.m,
            diagnostic()
        ))),
    }
}

/// Exponents of generic random linear codes at rate `R`, which meet the GV
/// bound `h⁻¹(1−R)` and have erasure threshold `1−R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenericExponents<T = f64> {
    pub gv_delta: T,
    /// `min{R(1−R), (1−R)/2}`.
    pub f_swmb: T,
    /// `(1−R)·[1 − h(δ_GV/(1−R))]`.
    pub f_cs: T,
}

pub fn generic_exponents<T: Real>(rate: T) -> Result<GenericExponents<T>> {
    if !(rate > T::zero() && rate < T::one()) {
        return Err(Error::Domain(format!("rate {rate} outside (0,1)")));
    }
    let red = T::one() - rate;
    let gv_delta = entropy_inv(red)?;
    let f_swmb = (rate * red).min(red / T::lit(2.0));
    let f_cs = red * (T::one() - entropy_unchecked((gv_delta / red).min(T::one())));
    Ok(GenericExponents {
        gv_delta,
        f_swmb,
        f_cs,
    })
}

/// Thresholds and complexity exponents of one regular ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport<T = f64> {
    pub ell: u32,
    pub emm: u32,
    pub rate: T,
    pub delta_star: T,
    pub theta_star: T,
    /// Sliding window, `(1−θ*)·h(δ*)`.
    pub f_sw: T,
    /// Matching bipartition, `h(δ*)/2`.
    pub f_mb: T,
    pub f_comb: T,
    /// Covering sets, `h(δ*) − θ*·h(δ*/θ*)`.
    pub f_cs: T,
    pub generic_gv_delta: T,
    pub generic_f_swmb: T,
    pub generic_f_cs: T,
}

/// Exponents given the two thresholds.
pub fn exponents_from_thresholds<T: Real>(
    p: &SpectrumParams,
    delta_star: T,
    theta_star: T,
) -> Result<ThresholdReport<T>> {
    if !(delta_star < theta_star) {
        return Err(Error::Precondition(format!(
            "ensemble ({},{}) has δ*={delta_star} ≥ θ*={theta_star}; covering-set exponent undefined",
            p.ell, p.m
        )));
    }
    let hd = entropy(delta_star)?;
    let f_sw = (T::one() - theta_star) * hd;
    let f_mb = hd / T::lit(2.0);
    let f_cs = hd - theta_star * entropy(delta_star / theta_star)?;
    let rate = p.rate::<T>();
    let generic = generic_exponents(rate)?;
    Ok(ThresholdReport {
        ell: p.ell,
        emm: p.m,
        rate,
        delta_star,
        theta_star,
        f_sw,
        f_mb,
        f_comb: f_sw.min(f_mb),
        f_cs,
        generic_gv_delta: generic.gv_delta,
        generic_f_swmb: generic.f_swmb,
        generic_f_cs: generic.f_cs,
    })
}

pub fn ldpc_exponents<T: Real>(p: &SpectrumParams) -> Result<ThresholdReport<T>> {
    let delta = delta_star::<T>(p)?;
    let theta = theta_star::<T>(p)?;
    exponents_from_thresholds(p, delta, theta)
}
