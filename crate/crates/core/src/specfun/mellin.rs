//! Numerical Mellin–Barnes integration along vertical contours.
//!
//! A kernel is a product of gamma factors `Γ(offset + c·s)^{±1}` whose
//! arguments are affine in one or two complex integration variables. The
//! integral `(2πi)^{-d} ∫ Θ(s) x^{-s} ds` is taken along the vertical lines
//! `Re s = σ`, with `σ` inside the region where every numerator argument has
//! positive real part; that region is exactly the set of straight contours
//! separating the left and right pole families.
//!
//! All factors are combined in the log domain. Arguments are passed as
//! `ln x`, so powers such as `x^{217}` never have to be formed. Each axis is
//! rescaled so its largest coefficient is one (the argument-power identity),
//! the real offset defaults to the real saddle of `|Θ(σ) x^{-σ}|`, and the
//! line is cut into panels graded towards the nearest pole and bounded by
//! the local oscillation period. Each panel gets an `n`-point Gauss–Legendre
//! rule and `n` is doubled until two successive estimates agree.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::gamma::{ln_gamma_signed_unchecked, log_gamma_unchecked};
use super::gauss::gauss_legendre;
use crate::error::{invalid, Error, Result};

/// How the real part of the vertical contour is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OffsetRule {
    /// Minimise `|Θ(σ)| x^{-σ}` over the separating gap. Keeps cancellation
    /// along the line small when the argument is very large or very small.
    Saddle,
    /// Middle of the separating gap (one unit inside a half-infinite gap).
    Midpoint,
    /// Explicit offset for univariate integrals.
    Fixed(f64),
    /// Explicit offsets `(σ_s, σ_t)` for bivariate integrals.
    FixedPair(f64, f64),
}

/// Quadrature settings for contour integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourConfig {
    pub real_offset: OffsetRule,
    /// Half-length of the integration line. `None` picks the height where the
    /// integrand has dropped by `e^{-42}` from its peak.
    pub truncation_height: Option<f64>,
    /// Gauss–Legendre nodes per panel at the first level.
    pub node_count: usize,
    pub rel_tol: f64,
    /// Number of node-count doublings before giving up.
    pub max_refinements: u32,
    /// Route closed-form instances (incomplete gamma, `z^ν e^{-z}`) around
    /// the contour integrator.
    pub fast_path: bool,
}

impl ContourConfig {
    pub fn univariate() -> Self {
        Self {
            real_offset: OffsetRule::Saddle,
            truncation_height: None,
            node_count: 16,
            rel_tol: 1e-10,
            max_refinements: 5,
            fast_path: true,
        }
    }

    pub fn bivariate() -> Self {
        Self {
            rel_tol: 1e-8,
            max_refinements: 3,
            ..Self::univariate()
        }
    }

    /// Always integrate along the contour, even for closed-form instances.
    pub fn contour_only(mut self) -> Self {
        self.fast_path = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.node_count < 16 {
            return Err(invalid(format!("node_count {} < 16", self.node_count)));
        }
        if !(self.rel_tol > 0.0) {
            return Err(invalid("rel_tol must be positive"));
        }
        if let Some(h) = self.truncation_height {
            if !(h > 0.0) {
                return Err(invalid("truncation_height must be positive"));
            }
        }
        Ok(())
    }
}

impl Default for ContourConfig {
    fn default() -> Self {
        Self::univariate()
    }
}

/// Diagnostics of one contour evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourOutcome {
    pub value: f64,
    /// `∫|integrand|` along the contour, in the same units as `value`; the
    /// ratio to `|value|` measures cancellation.
    pub abs_integral: f64,
    /// Real offsets actually used, in the caller's (unscaled) variables.
    pub offset: [f64; 2],
    pub truncation: [f64; 2],
    pub panels: [usize; 2],
    pub nodes_per_panel: usize,
    pub refinements: u32,
    pub last_change: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LinearGamma {
    pub offset: f64,
    pub coeff: [f64; 2],
    pub numerator: bool,
}

#[cfg(test)]
impl LinearGamma {
    pub fn num(offset: f64, cs: f64, ct: f64) -> Self {
        Self {
            offset,
            coeff: [cs, ct],
            numerator: true,
        }
    }

    pub fn den(offset: f64, cs: f64, ct: f64) -> Self {
        Self {
            offset,
            coeff: [cs, ct],
            numerator: false,
        }
    }
}

impl LinearGamma {
    #[inline]
    fn real_arg(&self, sigma: [f64; 2]) -> f64 {
        self.offset + self.coeff[0] * sigma[0] + self.coeff[1] * sigma[1]
    }

    #[inline]
    fn ln_value(&self, arg: Complex64) -> Complex64 {
        let v = log_gamma_unchecked(arg);
        if self.numerator {
            v
        } else {
            -v
        }
    }
}

const LOG_DROP: f64 = 42.0;
const MAX_PANELS: usize = 200_000;
const MAX_HEIGHT: f64 = 1e7;
const MAX_PANEL_WIDTH: f64 = 4.0;
// Oscillation periods per panel; a 16-point rule resolves three to ~1e-12.
const PERIODS_PER_PANEL: f64 = 3.0;

/// Constant factors must not sit on a pole.
fn check_constant_factors(factors: &[LinearGamma]) -> Result<()> {
    for f in factors {
        if f.coeff == [0.0, 0.0] && f.numerator && f.offset <= 0.0 && f.offset == f.offset.floor() {
            return Err(Error::Pole(format!("{}", f.offset)));
        }
    }
    Ok(())
}

/// Interval of `σ_axis` keeping every numerator argument positive, with the
/// other coordinate held at `sigma[other]`.
fn feasible_interval(factors: &[LinearGamma], axis: usize, sigma: [f64; 2]) -> Option<(f64, f64)> {
    let other = 1 - axis;
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for f in factors.iter().filter(|f| f.numerator) {
        let c = f.coeff[axis];
        let rest = f.offset + f.coeff[other] * sigma[other];
        if c > 0.0 {
            lo = lo.max(-rest / c);
        } else if c < 0.0 {
            hi = hi.min(-rest / c);
        } else if f.coeff[other] != 0.0 && rest <= 0.0 {
            return None;
        }
    }
    (lo < hi).then_some((lo, hi))
}

/// Range of `λ` keeping every numerator argument positive at `p + λd`.
fn feasible_along(factors: &[LinearGamma], p: [f64; 2], d: [f64; 2]) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for f in factors.iter().filter(|f| f.numerator && f.coeff != [0.0, 0.0]) {
        let rest = f.real_arg(p);
        let c = f.coeff[0] * d[0] + f.coeff[1] * d[1];
        if c > 0.0 {
            lo = lo.max(-rest / c);
        } else if c < 0.0 {
            hi = hi.min(-rest / c);
        } else if rest <= 0.0 {
            return None;
        }
    }
    (lo < hi).then_some((lo, hi))
}

/// Real log-modulus of the kernel times `x^{-σ}` at a real point.
fn phi(factors: &[LinearGamma], ln_args: [f64; 2], sigma: [f64; 2]) -> f64 {
    let mut acc = -sigma[0] * ln_args[0] - sigma[1] * ln_args[1];
    for f in factors {
        if f.coeff == [0.0, 0.0] {
            continue;
        }
        let (v, _) = ln_gamma_signed_unchecked(f.real_arg(sigma));
        if !v.is_finite() {
            return f64::INFINITY;
        }
        acc += if f.numerator { v } else { -v };
    }
    acc
}

fn search_grid(lo: f64, hi: f64) -> Vec<f64> {
    let vs = (0..=144).map(|k| -18.0 + 0.25 * k as f64);
    let reach = 1e4_f64.ln();
    let mut pts: Vec<f64> = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => vs.map(|v| lo + (hi - lo) / (1.0 + (-v).exp())).collect(),
        (true, false) => vs.filter(|&v| v <= reach).map(|v| lo + v.exp()).collect(),
        (false, true) => vs.filter(|&v| v <= reach).map(|v| hi - v.exp()).collect(),
        (false, false) => vs
            .filter(|&v| v <= reach)
            .flat_map(|v| [v.exp(), -v.exp()])
            .chain(std::iter::once(0.0))
            .collect(),
    };
    pts.retain(|&p| p > lo && p < hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Minimise `f` over the open interval `(lo, hi)`: log-graded grid, then
/// golden-section refinement between the neighbours of the best node.
fn minimize_on(lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> Option<f64> {
    let pts = search_grid(lo, hi);
    let vals: Vec<f64> = pts.iter().map(|&p| f(p)).collect();
    let best = vals
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .min_by(|a, b| a.1.total_cmp(b.1))?
        .0;
    let mut a = if best == 0 {
        pts[0] - 0.5 * (pts[0] - lo).min(1.0)
    } else {
        pts[best - 1]
    };
    let mut b = if best + 1 == pts.len() {
        pts[best] + 0.5 * (hi - pts[best]).min(1.0)
    } else {
        pts[best + 1]
    };
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
        if (b - a).abs() <= 1e-14 * (a.abs() + b.abs()).max(1e-300) {
            break;
        }
    }
    let cand = 0.5 * (a + b);
    let fc = f(cand);
    if fc.is_finite() && fc <= vals[best] && cand > lo && cand < hi {
        Some(cand)
    } else {
        Some(pts[best])
    }
}

fn midpoint(lo: f64, hi: f64) -> f64 {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => lo + 1.0,
        (false, true) => hi - 1.0,
        (false, false) => 0.0,
    }
}

/// Distance from the contour to the nearest pole along `axis`, with the
/// other coordinate on its own real offset.
fn pole_distance(factors: &[LinearGamma], axis: usize, sigma: [f64; 2]) -> f64 {
    factors
        .iter()
        .filter(|f| f.numerator && f.coeff[axis] != 0.0)
        .map(|f| f.real_arg(sigma) / f.coeff[axis].abs())
        .fold(f64::INFINITY, f64::min)
}

/// Upper bound on the phase speed `|d arg f / dτ|` along `axis` at height
/// `tau`, given `|τ_other| ≤ other_height`. The power `x^{-s}` contributes
/// `|ln x|`, each gamma factor roughly `|c| ln|argument|`.
fn phase_speed(factors: &[LinearGamma], axis: usize, sigma: [f64; 2], tau: f64, other_height: f64, ln_arg: f64) -> f64 {
    let other = 1 - axis;
    let mut w = ln_arg.abs();
    for f in factors {
        let c = f.coeff[axis];
        if c == 0.0 {
            continue;
        }
        let a = f.real_arg(sigma).abs().max(1.0);
        let reach = c.abs() * tau + f.coeff[other].abs() * other_height;
        w += c.abs() * (0.5 * (1.0 + (reach / a).powi(2)).ln() + 1.0);
    }
    w
}

fn build_panels(height: f64, pole_dist: f64, speed: impl Fn(f64) -> f64) -> Result<Vec<(f64, f64)>> {
    let d = pole_dist.min(1.0).max(height * 1e-14);
    let mut panels = Vec::new();
    let mut tau = 0.0;
    while tau < height {
        let h = tau
            .max(d)
            .min(PERIODS_PER_PANEL * 2.0 * PI / speed(tau))
            .min(MAX_PANEL_WIDTH)
            .max(height * 1e-12);
        let end = (tau + h).min(height);
        panels.push((tau, end));
        tau = end;
        if panels.len() > MAX_PANELS {
            return Err(Error::ContourNoConvergence {
                refinements: 0,
                last_change: f64::NAN,
                value: f64::NAN,
            });
        }
    }
    Ok(panels)
}

/// Height at which `logmag` has fallen `LOG_DROP` below its running peak.
fn find_truncation(logmag: impl Fn(f64) -> f64, start: f64) -> Option<(f64, f64)> {
    let mut peak = logmag(0.0);
    let mut prev_tau = 0.0;
    let mut prev = peak;
    let mut tau = start.clamp(1e-6, 1.0);
    while tau <= MAX_HEIGHT {
        let v = logmag(tau);
        if v.is_nan() {
            return None;
        }
        if v > peak {
            peak = v;
        }
        if v < peak - LOG_DROP && v < prev {
            let (mut a, mut b) = (prev_tau, tau);
            for _ in 0..30 {
                let m = 0.5 * (a + b);
                if logmag(m) < peak - LOG_DROP {
                    b = m;
                } else {
                    a = m;
                }
            }
            return Some((b, peak));
        }
        prev_tau = tau;
        prev = v;
        tau *= 2.0;
    }
    None
}

fn nodes_on(panels: &[(f64, f64)], n: usize, mirror: bool) -> Vec<(f64, f64)> {
    let rule = gauss_legendre(n);
    let mut out = Vec::with_capacity(panels.len() * n * if mirror { 2 } else { 1 });
    for &(a, b) in panels {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            out.push((mid + half * x, half * w));
            if mirror {
                out.push((-(mid + half * x), half * w));
            }
        }
    }
    out
}

fn decay_rate(factors: &[LinearGamma], axis: usize) -> f64 {
    factors
        .iter()
        .map(|f| {
            if f.numerator {
                f.coeff[axis].abs()
            } else {
                -f.coeff[axis].abs()
            }
        })
        .sum()
}

fn rescale(factors: &[LinearGamma]) -> (Vec<LinearGamma>, [f64; 2]) {
    let mut kappa = [0.0f64; 2];
    for f in factors {
        for (k, c) in kappa.iter_mut().zip(f.coeff) {
            *k = k.max(c.abs());
        }
    }
    let kappa = kappa.map(|k| if k > 0.0 { k } else { 1.0 });
    let scaled = factors
        .iter()
        .map(|f| LinearGamma {
            coeff: [f.coeff[0] / kappa[0], f.coeff[1] / kappa[1]],
            ..*f
        })
        .collect();
    (scaled, kappa)
}

#[inline]
fn ln_kernel(factors: &[LinearGamma], s: Complex64, t: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for f in factors {
        let arg = f.offset + s * f.coeff[0] + t * f.coeff[1];
        acc += f.ln_value(arg);
    }
    acc
}

/// `(2πi)^{-1} ∫ Θ(s) x^{-s} ds` for a kernel in one variable.
pub(crate) fn integrate_1d(factors: &[LinearGamma], ln_x: f64, cfg: &ContourConfig) -> Result<ContourOutcome> {
    cfg.validate()?;
    if !ln_x.is_finite() {
        return Err(invalid(format!("ln x = {ln_x} must be finite")));
    }
    check_constant_factors(factors)?;
    let (factors, kappa) = rescale(factors);
    let ln_x = ln_x / kappa[0];
    if decay_rate(&factors, 0) <= 0.0 {
        return Err(Error::Unsupported("kernel does not decay along vertical lines".into()));
    }
    let (lo, hi) = feasible_interval(&factors, 0, [0.0, 0.0]).ok_or(Error::NoSeparatingContour)?;
    let ln_args = [ln_x, 0.0];
    let sigma = match cfg.real_offset {
        OffsetRule::Saddle => {
            minimize_on(lo, hi, |s| phi(&factors, ln_args, [s, 0.0])).unwrap_or_else(|| midpoint(lo, hi))
        }
        OffsetRule::Midpoint => midpoint(lo, hi),
        OffsetRule::Fixed(s) => {
            let s = s * kappa[0];
            if !(s > lo && s < hi) {
                return Err(Error::NoSeparatingContour);
            }
            s
        }
        OffsetRule::FixedPair(..) => return Err(invalid("FixedPair offset on a univariate integral")),
    };
    let sig = [sigma, 0.0];
    let dist = pole_distance(&factors, 0, sig);
    let s0 = Complex64::new(sigma, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let logmag = |tau: f64| {
        let s = s0 + Complex64::new(0.0, tau);
        ln_kernel(&factors, s, zero).re - sigma * ln_x
    };
    let (height, peak) = match cfg.truncation_height {
        Some(h) => (h * kappa[0], logmag(0.0)),
        None => find_truncation(logmag, dist * 0.5).ok_or(Error::ContourNoConvergence {
            refinements: 0,
            last_change: f64::INFINITY,
            value: f64::NAN,
        })?,
    };
    let panels = build_panels(height, dist, |tau| phase_speed(&factors, 0, sig, tau, 0.0, ln_x))?;

    let integrate = |n: usize| -> (f64, f64) {
        let mut sum = 0.0;
        let mut abs = 0.0;
        for (tau, w) in nodes_on(&panels, n, false) {
            let s = s0 + Complex64::new(0.0, tau);
            let v = ln_kernel(&factors, s, zero) - s * ln_x - peak;
            let e = v.exp();
            sum += w * e.re;
            abs += w * e.norm();
        }
        (sum, abs)
    };

    let scale = peak.exp() / (PI * kappa[0]);
    let mut n = cfg.node_count;
    let (mut prev, _) = integrate(n);
    let mut last_change = f64::INFINITY;
    for level in 1..=cfg.max_refinements {
        n *= 2;
        let (cur, abs) = integrate(n);
        last_change = (cur - prev).abs();
        let floor = 64.0 * f64::EPSILON * abs;
        if floor > 0.5 * cur.abs() {
            // Cancellation has eaten every significant digit.
            return Err(Error::ContourNoConvergence {
                refinements: level,
                last_change: last_change * scale,
                value: cur * scale,
            });
        }
        if last_change <= cfg.rel_tol * cur.abs() + floor {
            return Ok(ContourOutcome {
                value: cur * scale,
                abs_integral: abs * scale,
                offset: [sigma / kappa[0], 0.0],
                truncation: [height / kappa[0], 0.0],
                panels: [panels.len(), 0],
                nodes_per_panel: n,
                refinements: level,
                last_change: last_change * scale,
            });
        }
        prev = cur;
    }
    Err(Error::ContourNoConvergence {
        refinements: cfg.max_refinements,
        last_change: last_change * scale,
        value: prev * scale,
    })
}

/// Interior point of the two-variable separating region, as far from the
/// constraint lines as a coarse search finds.
pub(crate) fn interior_point(factors: &[LinearGamma]) -> Option<[f64; 2]> {
    let slack = |p: [f64; 2]| {
        factors
            .iter()
            .filter(|f| f.numerator && f.coeff != [0.0, 0.0])
            .map(|f| f.real_arg(p) / (f.coeff[0].hypot(f.coeff[1])))
            .fold(f64::INFINITY, f64::min)
    };
    // Range of σ_t from the factors that involve t alone.
    let t_only: Vec<LinearGamma> = factors.iter().copied().filter(|f| f.coeff[0] == 0.0).collect();
    let (tlo, thi) = feasible_interval(&t_only, 1, [0.0, 0.0]).unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    let mut best: Option<([f64; 2], f64)> = None;
    for t in search_grid(tlo, thi) {
        let Some((slo, shi)) = feasible_interval(factors, 0, [0.0, t]) else {
            continue;
        };
        let p = [midpoint(slo, shi), t];
        let sl = slack(p);
        if sl > 0.0 && best.is_none_or(|(_, b)| sl > b) {
            best = Some((p, sl));
        }
    }
    best.map(|(p, _)| p)
}

/// `(2πi)^{-2} ∫∫ Θ(s, t) x^{-s} y^{-t} ds dt` for a kernel in two variables.
pub(crate) fn integrate_2d(
    factors: &[LinearGamma],
    ln_x: f64,
    ln_y: f64,
    cfg: &ContourConfig,
) -> Result<ContourOutcome> {
    cfg.validate()?;
    if !ln_x.is_finite() || !ln_y.is_finite() {
        return Err(invalid("bivariate arguments must be positive and finite"));
    }
    check_constant_factors(factors)?;
    let (factors, kappa) = rescale(factors);
    let ln_args = [ln_x / kappa[0], ln_y / kappa[1]];
    for axis in 0..2 {
        if decay_rate(&factors, axis) <= 0.0 {
            return Err(Error::Unsupported("kernel does not decay along vertical lines".into()));
        }
    }
    let start = interior_point(&factors).ok_or(Error::NoSeparatingContour)?;
    let sigma = match cfg.real_offset {
        OffsetRule::Midpoint => start,
        OffsetRule::FixedPair(a, b) => {
            let p = [a * kappa[0], b * kappa[1]];
            let ok = factors.iter().filter(|f| f.numerator).all(|f| f.real_arg(p) > 0.0);
            if !ok {
                return Err(Error::NoSeparatingContour);
            }
            p
        }
        OffsetRule::Fixed(_) => return Err(invalid("Fixed offset on a bivariate integral")),
        OffsetRule::Saddle => {
            // Line searches along both axes and along every coupled factor's
            // constraint lines; the separating region can be a thin diagonal
            // strip that axis steps cross only slowly.
            let mut dirs = vec![[1.0, 0.0], [0.0, 1.0]];
            for f in factors.iter().filter(|f| f.coeff[0] != 0.0 && f.coeff[1] != 0.0) {
                let n = f.coeff[0].hypot(f.coeff[1]);
                let d = [f.coeff[1] / n, -f.coeff[0] / n];
                if !dirs.iter().any(|e| (e[0] * d[1] - e[1] * d[0]).abs() < 1e-12) {
                    dirs.push(d);
                }
            }
            let mut p = start;
            let mut best = phi(&factors, ln_args, p);
            for _ in 0..60 {
                let before = best;
                for d in &dirs {
                    let Some((lo, hi)) = feasible_along(&factors, p, *d) else {
                        continue;
                    };
                    let at = |l: f64| [p[0] + l * d[0], p[1] + l * d[1]];
                    if let Some(l) = minimize_on(lo, hi, |l| phi(&factors, ln_args, at(l))) {
                        let fq = phi(&factors, ln_args, at(l));
                        if fq < best {
                            best = fq;
                            p = at(l);
                        }
                    }
                }
                if (before - best).abs() < 1e-10 * best.abs().max(1.0) {
                    break;
                }
            }
            p
        }
    };

    let s0 = Complex64::new(sigma[0], 0.0);
    let t0 = Complex64::new(sigma[1], 0.0);
    let logmag = |ts: f64, tt: f64| {
        let s = s0 + Complex64::new(0.0, ts);
        let t = t0 + Complex64::new(0.0, tt);
        ln_kernel(&factors, s, t).re - sigma[0] * ln_args[0] - sigma[1] * ln_args[1]
    };
    let dist = [pole_distance(&factors, 0, sigma), pole_distance(&factors, 1, sigma)];
    let no_conv = || Error::ContourNoConvergence {
        refinements: 0,
        last_change: f64::INFINITY,
        value: f64::NAN,
    };
    let (mut heights, mut peak) = match cfg.truncation_height {
        Some(h) => ([h * kappa[0], h * kappa[1]], logmag(0.0, 0.0)),
        None => {
            let (hs, ps) = find_truncation(|v| logmag(v, 0.0), dist[0] * 0.5).ok_or_else(no_conv)?;
            let (ht, pt) = find_truncation(|v| logmag(0.0, v), dist[1] * 0.5).ok_or_else(no_conv)?;
            ([hs, ht], ps.max(pt))
        }
    };
    if cfg.truncation_height.is_none() {
        // Coupled factors can keep the integrand alive along ridges that the
        // axis probes miss; grow the box until its boundary is negligible.
        let mut grown = 0;
        loop {
            let m = 48;
            let mut edge_s = f64::NEG_INFINITY;
            let mut edge_t = f64::NEG_INFINITY;
            for k in 0..=m {
                let u = k as f64 / m as f64;
                let ts = heights[0] * u;
                let tt = heights[1] * (2.0 * u - 1.0);
                edge_t = edge_t.max(logmag(ts, heights[1])).max(logmag(ts, -heights[1]));
                edge_s = edge_s.max(logmag(heights[0], tt));
                for frac in [0.25, 0.5, 0.75] {
                    peak = peak.max(logmag(heights[0] * frac * u, heights[1] * frac * (2.0 * u - 1.0)));
                }
            }
            let bad_s = edge_s > peak - LOG_DROP;
            let bad_t = edge_t > peak - LOG_DROP;
            if !bad_s && !bad_t {
                break;
            }
            grown += 1;
            if grown > 16 {
                return Err(no_conv());
            }
            if bad_s {
                heights[0] *= 1.5;
            }
            if bad_t {
                heights[1] *= 1.5;
            }
        }
    }

    let panels_s = build_panels(heights[0], dist[0], |tau| {
        phase_speed(&factors, 0, sigma, tau, heights[1], ln_args[0])
    })?;
    let panels_t = build_panels(heights[1], dist[1], |tau| {
        phase_speed(&factors, 1, sigma, tau, heights[0], ln_args[1])
    })?;

    let s_only: Vec<LinearGamma> = factors.iter().copied().filter(|f| f.coeff[1] == 0.0).collect();
    let t_only: Vec<LinearGamma> = factors
        .iter()
        .copied()
        .filter(|f| f.coeff[0] == 0.0 && f.coeff[1] != 0.0)
        .collect();
    let coupled: Vec<LinearGamma> = factors
        .iter()
        .copied()
        .filter(|f| f.coeff[0] != 0.0 && f.coeff[1] != 0.0)
        .collect();
    let zero = Complex64::new(0.0, 0.0);
    let shift_s = (ln_kernel(&s_only, s0, zero) - s0 * ln_args[0]).re;
    let shift_t = (ln_kernel(&t_only, zero, t0) - t0 * ln_args[1]).re;
    let shift_c = ln_kernel(&coupled, s0, t0).re;
    let shift = shift_s + shift_t + shift_c;

    let integrate = |n: usize| -> (f64, f64) {
        let ns = nodes_on(&panels_s, n, false);
        let nt = nodes_on(&panels_t, n, true);
        let es: Vec<(Complex64, Complex64)> = ns
            .iter()
            .map(|&(tau, w)| {
                let s = s0 + Complex64::new(0.0, tau);
                (s, w * (ln_kernel(&s_only, s, zero) - s * ln_args[0] - shift_s).exp())
            })
            .collect();
        let et: Vec<(Complex64, Complex64)> = nt
            .iter()
            .map(|&(tau, w)| {
                let t = t0 + Complex64::new(0.0, tau);
                (t, w * (ln_kernel(&t_only, zero, t) - t * ln_args[1] - shift_t).exp())
            })
            .collect();
        let mut sum = 0.0;
        let mut abs = 0.0;
        if coupled.is_empty() {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut acc_abs = 0.0;
            let (sum_t, abs_t) = et
                .iter()
                .fold((Complex64::new(0.0, 0.0), 0.0), |(a, b), (_, v)| (a + v, b + v.norm()));
            for (_, a) in &es {
                acc += a * sum_t;
                acc_abs += a.norm() * abs_t;
            }
            sum += acc.re;
            abs += acc_abs;
        } else {
            for (s, a) in &es {
                let mut row = Complex64::new(0.0, 0.0);
                let mut row_abs = 0.0;
                for (t, b) in &et {
                    let c = (ln_kernel(&coupled, *s, *t) - shift_c).exp();
                    let v = b * c;
                    row += v;
                    row_abs += v.norm();
                }
                sum += (a * row).re;
                abs += a.norm() * row_abs;
            }
        }
        (sum, abs)
    };

    let _ = peak;
    let scale = 2.0 * shift.exp() / (4.0 * PI * PI * kappa[0] * kappa[1]);
    let mut n = cfg.node_count;
    let (mut prev, _) = integrate(n);
    let mut last_change = f64::INFINITY;
    for level in 1..=cfg.max_refinements {
        n *= 2;
        let (cur, abs) = integrate(n);
        last_change = (cur - prev).abs();
        let floor = 64.0 * f64::EPSILON * abs;
        if floor > 0.5 * cur.abs() {
            // Cancellation has eaten every significant digit.
            return Err(Error::ContourNoConvergence {
                refinements: level,
                last_change: last_change * scale,
                value: cur * scale,
            });
        }
        if last_change <= cfg.rel_tol * cur.abs() + floor {
            return Ok(ContourOutcome {
                value: cur * scale,
                abs_integral: abs * scale,
                offset: [sigma[0] / kappa[0], sigma[1] / kappa[1]],
                truncation: [heights[0] / kappa[0], heights[1] / kappa[1]],
                panels: [panels_s.len(), panels_t.len()],
                nodes_per_panel: n,
                refinements: level,
                last_change: last_change * scale,
            });
        }
        prev = cur;
    }
    Err(Error::ContourNoConvergence {
        refinements: cfg.max_refinements,
        last_change: last_change * scale,
        value: prev * scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cdf_kernel(nu: f64) -> Vec<LinearGamma> {
        // Γ(ν+s) Γ(-s) / Γ(1-s)
        vec![
            LinearGamma::num(nu, 1.0, 0.0),
            LinearGamma::num(0.0, -1.0, 0.0),
            LinearGamma::den(1.0, -1.0, 0.0),
        ]
    }

    #[test]
    fn exponential_cdf_by_contour() {
        let cfg = ContourConfig::univariate();
        for &z in &[1e-4, 0.1, 1.0, 7.0, 60.0] {
            let out = integrate_1d(&cdf_kernel(1.0), f64::ln(z), &cfg).unwrap();
            let want = -f64::exp_m1(-z);
            assert!(
                (out.value - want).abs() <= 1e-9 * want,
                "z = {z}: {} vs {want}",
                out.value
            );
        }
    }

    #[test]
    fn midpoint_and_saddle_agree_at_moderate_argument() {
        let mut cfg = ContourConfig::univariate();
        let saddle = integrate_1d(&cdf_kernel(2.5), 0.3, &cfg).unwrap();
        cfg.real_offset = OffsetRule::Midpoint;
        let mid = integrate_1d(&cdf_kernel(2.5), 0.3, &cfg).unwrap();
        assert!((saddle.value - mid.value).abs() < 1e-10 * mid.value.abs());
        assert!((mid.offset[0] + 1.25).abs() < 1e-12);
    }

    #[test]
    fn empty_gap_is_rejected() {
        // Γ(-1+s) Γ(-s): left pole at 1 lies right of the right pole at 0.
        let k = vec![LinearGamma::num(-1.0, 1.0, 0.0), LinearGamma::num(0.0, -1.0, 0.0)];
        assert_eq!(
            integrate_1d(&k, 0.0, &ContourConfig::univariate()).unwrap_err(),
            Error::NoSeparatingContour
        );
    }

    #[test]
    fn fixed_offset_outside_gap_is_rejected() {
        let mut cfg = ContourConfig::univariate();
        cfg.real_offset = OffsetRule::Fixed(0.5);
        assert_eq!(
            integrate_1d(&cdf_kernel(1.0), 0.0, &cfg).unwrap_err(),
            Error::NoSeparatingContour
        );
    }

    #[test]
    fn non_decaying_kernel_is_rejected() {
        let k = vec![LinearGamma::num(1.0, 1.0, 0.0), LinearGamma::den(1.0, 1.0, 0.0)];
        assert!(matches!(
            integrate_1d(&k, 0.0, &ContourConfig::univariate()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn separable_double_integral_is_a_product() {
        let k = vec![
            LinearGamma::num(0.7, 1.0, 0.0),
            LinearGamma::num(0.0, -1.0, 0.0),
            LinearGamma::den(1.0, -1.0, 0.0),
            LinearGamma::num(1.3, 0.0, 1.0),
            LinearGamma::num(0.0, 0.0, -1.0),
            LinearGamma::den(1.0, 0.0, -1.0),
        ];
        let (lx, ly) = (f64::ln(0.4), f64::ln(2.0));
        let two = integrate_2d(&k, lx, ly, &ContourConfig::bivariate()).unwrap();
        let a = integrate_1d(&cdf_kernel(0.7), lx, &ContourConfig::univariate()).unwrap();
        let b = integrate_1d(&cdf_kernel(1.3), ly, &ContourConfig::univariate()).unwrap();
        assert!((two.value - a.value * b.value).abs() < 1e-8 * two.value.abs());
    }
}
