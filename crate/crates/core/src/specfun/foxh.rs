//! Univariate and bivariate Fox H-functions.
//!
//! Convention: for upper parameters `(a_j, A_j)`, `j = 1..p`, and lower
//! parameters `(b_j, B_j)`, `j = 1..q`,
//!
//! ```text
//! H^{m,n}_{p,q}[z] = (2πi)^{-1} ∫ Θ(s) z^{-s} ds,
//!
//!         Π_{j≤m} Γ(b_j + B_j s) · Π_{j≤n} Γ(1 - a_j - A_j s)
//! Θ(s) = -----------------------------------------------------
//!         Π_{j>m} Γ(1 - b_j - B_j s) · Π_{j>n} Γ(a_j + A_j s)
//! ```
//!
//! with the contour separating the left poles `-(b_j + k)/B_j` from the right
//! poles `(1 - a_j + k)/A_j`. Meijer's G is the case of unit scales, so e.g.
//! `G^{1,1}_{1,2}[z | 1; ν, 0] = γ(ν, z)` and `G^{1,0}_{0,1}[z | -; ν] = z^ν e^{-z}`.
//!
//! The bivariate function multiplies two such kernels, in `s` and `t`, by a
//! block of gamma factors whose arguments depend on both variables:
//!
//! ```text
//! H[x, y] = (2πi)^{-2} ∫∫ Φ(s, t) Θ_x(s) Θ_y(t) x^{-s} y^{-t} ds dt,
//! Φ(s, t) = Π Γ(o_k + X_k s + Y_k t)^{±1}.
//! ```

use super::gamma::ln_gamma_pos_any;
use super::incgamma::reg_lower_incomplete_gamma_ln;
use super::mellin::{integrate_1d, integrate_2d, interior_point, ContourConfig, ContourOutcome, LinearGamma};
use crate::error::{invalid, Error, Result};

/// One gamma-factor parameter `(shift, scale)`, entering as `Γ(shift + scale·s)`
/// or `Γ(1 - shift - scale·s)` depending on its position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HParam {
    pub shift: f64,
    pub scale: f64,
}

impl HParam {
    pub const fn new(shift: f64, scale: f64) -> Self {
        Self { shift, scale }
    }

    pub const fn unit(shift: f64) -> Self {
        Self { shift, scale: 1.0 }
    }
}

/// Parameters of `H^{m,n}_{p,q}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GHSpec {
    m: usize,
    n: usize,
    upper: Vec<HParam>,
    lower: Vec<HParam>,
}

impl GHSpec {
    /// Validates index ranges, scales and the existence of a separating contour.
    pub fn new(m: usize, n: usize, upper: Vec<HParam>, lower: Vec<HParam>) -> Result<Self> {
        if m > lower.len() || n > upper.len() {
            return Err(invalid(format!(
                "m = {m}, n = {n} exceed q = {}, p = {}",
                lower.len(),
                upper.len()
            )));
        }
        for p in upper.iter().chain(&lower) {
            if !(p.scale > 0.0) || !p.scale.is_finite() || !p.shift.is_finite() {
                return Err(invalid(format!("bad parameter {p:?}")));
            }
        }
        let spec = Self { m, n, upper, lower };
        let left = spec.lower[..m]
            .iter()
            .map(|p| -p.shift / p.scale)
            .fold(f64::NEG_INFINITY, f64::max);
        let right = spec.upper[..n]
            .iter()
            .map(|p| (1.0 - p.shift) / p.scale)
            .fold(f64::INFINITY, f64::min);
        if !(left < right) {
            return Err(Error::NoSeparatingContour);
        }
        Ok(spec)
    }

    /// Meijer G parameters (unit scales).
    pub fn meijer(m: usize, n: usize, a: &[f64], b: &[f64]) -> Result<Self> {
        Self::new(
            m,
            n,
            a.iter().map(|&v| HParam::unit(v)).collect(),
            b.iter().map(|&v| HParam::unit(v)).collect(),
        )
    }

    /// `G^{1,1}_{1,2}[· | 1; ν, 0]`, equal to `γ(ν, z)`.
    pub fn lower_incomplete_gamma(nu: f64) -> Result<Self> {
        Self::meijer(1, 1, &[1.0], &[nu, 0.0])
    }

    /// `G^{1,0}_{0,1}[· | -; ν]`, equal to `z^ν e^{-z}`.
    pub fn power_exponential(nu: f64) -> Result<Self> {
        Self::meijer(1, 0, &[], &[nu])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn upper(&self) -> &[HParam] {
        &self.upper
    }

    pub fn lower(&self) -> &[HParam] {
        &self.lower
    }

    /// Spec and prefactor for the argument-power identity
    /// `H[z^c] = (1/c) · H'[z]`, where `H'` has every scale divided by `c`.
    pub fn argument_power(&self, c: f64) -> Result<(f64, GHSpec)> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(invalid(format!("power c = {c} must be positive")));
        }
        let div = |v: &Vec<HParam>| v.iter().map(|p| HParam::new(p.shift, p.scale / c)).collect();
        let spec = GHSpec::new(self.m, self.n, div(&self.upper), div(&self.lower))?;
        Ok((1.0 / c, spec))
    }

    /// Same function with identical numerator/denominator factor pairs
    /// cancelled, e.g. `H^{1,2}_{2,3}[z | (0,1)(1,1); (ν,1)(0,1)(1,1)]` becomes
    /// `H^{1,0}_{0,1}[z | -; (ν,1)]`.
    pub fn reduced(&self) -> GHSpec {
        let mut up_num = self.upper[..self.n].to_vec();
        let mut up_den = self.upper[self.n..].to_vec();
        let mut lo_num = self.lower[..self.m].to_vec();
        let mut lo_den = self.lower[self.m..].to_vec();
        // Γ(1-a-As) over Γ(1-b-Bs), and Γ(b+Bs) over Γ(a+As)
        for (num, den) in [(&mut up_num, &mut lo_den), (&mut lo_num, &mut up_den)] {
            let mut i = 0;
            while i < num.len() {
                if let Some(j) = den.iter().position(|d| d == &num[i]) {
                    num.remove(i);
                    den.remove(j);
                } else {
                    i += 1;
                }
            }
        }
        let (n, m) = (up_num.len(), lo_num.len());
        up_num.extend(up_den);
        lo_num.extend(lo_den);
        GHSpec {
            m,
            n,
            upper: up_num,
            lower: lo_num,
        }
    }

    /// Gamma factors of the kernel in variable `axis` (0 = s, 1 = t).
    fn factors(&self, axis: usize) -> Vec<LinearGamma> {
        let lin = |offset: f64, c: f64, numerator: bool| {
            let mut coeff = [0.0; 2];
            coeff[axis] = c;
            LinearGamma {
                offset,
                coeff,
                numerator,
            }
        };
        let mut out = Vec::with_capacity(self.upper.len() + self.lower.len());
        for (j, p) in self.lower.iter().enumerate() {
            out.push(if j < self.m {
                lin(p.shift, p.scale, true)
            } else {
                lin(1.0 - p.shift, -p.scale, false)
            });
        }
        for (j, p) in self.upper.iter().enumerate() {
            out.push(if j < self.n {
                lin(1.0 - p.shift, -p.scale, true)
            } else {
                lin(p.shift, p.scale, false)
            });
        }
        out
    }

    /// `(ν, k)` when the spec is `H^{1,1}_{1,2}[· | (1,k); (ν,k), (0,k)]`.
    fn as_incomplete_gamma(&self) -> Option<(f64, f64)> {
        match (self.m, self.n, self.upper.as_slice(), self.lower.as_slice()) {
            (1, 1, [u], [b0, b1])
                if u.shift == 1.0 && b1.shift == 0.0 && u.scale == b0.scale && b0.scale == b1.scale =>
            {
                Some((b0.shift, b0.scale))
            }
            _ => None,
        }
    }

    /// `(ν, k)` when the spec is `H^{1,0}_{0,1}[· | -; (ν,k)]`.
    fn as_power_exponential(&self) -> Option<(f64, f64)> {
        match (self.m, self.n, self.upper.as_slice(), self.lower.as_slice()) {
            (1, 0, [], [b]) => Some((b.shift, b.scale)),
            _ => None,
        }
    }
}

/// Gamma factor `Γ(offset + x_scale·s + y_scale·t)` of the coupling block,
/// in the numerator or the denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledGamma {
    pub offset: f64,
    pub x_scale: f64,
    pub y_scale: f64,
    pub in_numerator: bool,
}

/// Parameters of a bivariate H-function.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateGHSpec {
    outer: Vec<CoupledGamma>,
    inner_x: GHSpec,
    inner_y: GHSpec,
}

impl BivariateGHSpec {
    /// Validates that the two inner kernels and the coupling block admit a
    /// common pair of separating contours.
    pub fn new(outer: Vec<CoupledGamma>, inner_x: GHSpec, inner_y: GHSpec) -> Result<Self> {
        for g in &outer {
            if ![g.offset, g.x_scale, g.y_scale].iter().all(|v| v.is_finite()) {
                return Err(invalid(format!("bad coupled factor {g:?}")));
            }
        }
        let spec = Self {
            outer,
            inner_x,
            inner_y,
        };
        if interior_point(&spec.factors()).is_none() {
            return Err(Error::NoSeparatingContour);
        }
        Ok(spec)
    }

    pub fn outer(&self) -> &[CoupledGamma] {
        &self.outer
    }

    pub fn inner_x(&self) -> &GHSpec {
        &self.inner_x
    }

    pub fn inner_y(&self) -> &GHSpec {
        &self.inner_y
    }

    fn factors(&self) -> Vec<LinearGamma> {
        let mut out = self.inner_x.factors(0);
        out.extend(self.inner_y.factors(1));
        out.extend(self.outer.iter().map(|g| LinearGamma {
            offset: g.offset,
            coeff: [g.x_scale, g.y_scale],
            numerator: g.in_numerator,
        }));
        out
    }
}

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    IncompleteGamma,
    PowerExponential,
    /// Bivariate function with an empty coupling block, as a product of two
    /// univariate evaluations.
    Factorized,
    Contour,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HEvaluation {
    pub value: f64,
    pub route: Route,
    /// Contour diagnostics when the contour integrator ran.
    pub contour: Option<ContourOutcome>,
}

/// `H[z]` for `z > 0`.
pub fn fox_h(spec: &GHSpec, z: f64, cfg: &ContourConfig) -> Result<f64> {
    Ok(fox_h_detailed(spec, z, cfg)?.value)
}

/// `H[z]` with route and convergence diagnostics.
pub fn fox_h_detailed(spec: &GHSpec, z: f64, cfg: &ContourConfig) -> Result<HEvaluation> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(invalid(format!("argument z = {z} must be positive and finite")));
    }
    fox_h_ln_detailed(spec, z.ln(), cfg)
}

/// `H[e^{ln_z}]`, for arguments outside the floating-point range.
pub fn fox_h_ln(spec: &GHSpec, ln_z: f64, cfg: &ContourConfig) -> Result<f64> {
    Ok(fox_h_ln_detailed(spec, ln_z, cfg)?.value)
}

pub fn fox_h_ln_detailed(spec: &GHSpec, ln_z: f64, cfg: &ContourConfig) -> Result<HEvaluation> {
    cfg.validate()?;
    if !ln_z.is_finite() {
        return Err(invalid(format!("ln z = {ln_z} must be finite")));
    }
    let spec = &spec.reduced();
    if cfg.fast_path {
        if let Some((nu, k)) = spec.as_incomplete_gamma() {
            if nu > 0.0 {
                let p = reg_lower_incomplete_gamma_ln(nu, ln_z / k)?;
                return Ok(HEvaluation {
                    value: p * ln_gamma_pos_any(nu).exp() / k,
                    route: Route::IncompleteGamma,
                    contour: None,
                });
            }
        }
        if let Some((nu, k)) = spec.as_power_exponential() {
            let u = ln_z / k;
            return Ok(HEvaluation {
                value: (nu * u - u.exp()).exp() / k,
                route: Route::PowerExponential,
                contour: None,
            });
        }
    }
    let out = integrate_1d(&spec.factors(0), ln_z, cfg)?;
    Ok(HEvaluation {
        value: out.value,
        route: Route::Contour,
        contour: Some(out),
    })
}

/// Bivariate `H[x, y]` for `x, y > 0`. An empty coupling block is evaluated
/// as a product when `cfg.fast_path` is set.
pub fn fox_h_bivariate(spec: &BivariateGHSpec, x: f64, y: f64, cfg: &ContourConfig) -> Result<f64> {
    Ok(fox_h_bivariate_detailed(spec, x, y, cfg)?.value)
}

pub fn fox_h_bivariate_detailed(spec: &BivariateGHSpec, x: f64, y: f64, cfg: &ContourConfig) -> Result<HEvaluation> {
    for v in [x, y] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(invalid(format!("argument {v} must be positive and finite")));
        }
    }
    fox_h_bivariate_ln_detailed(spec, x.ln(), y.ln(), cfg)
}

pub fn fox_h_bivariate_ln(spec: &BivariateGHSpec, ln_x: f64, ln_y: f64, cfg: &ContourConfig) -> Result<f64> {
    Ok(fox_h_bivariate_ln_detailed(spec, ln_x, ln_y, cfg)?.value)
}

pub fn fox_h_bivariate_ln_detailed(
    spec: &BivariateGHSpec,
    ln_x: f64,
    ln_y: f64,
    cfg: &ContourConfig,
) -> Result<HEvaluation> {
    cfg.validate()?;
    if spec.outer.is_empty() && cfg.fast_path {
        let single = ContourConfig {
            real_offset: super::OffsetRule::Saddle,
            ..*cfg
        };
        let a = fox_h_ln(&spec.inner_x, ln_x, &single)?;
        let b = fox_h_ln(&spec.inner_y, ln_y, &single)?;
        return Ok(HEvaluation {
            value: a * b,
            route: Route::Factorized,
            contour: None,
        });
    }
    let out = integrate_2d(&spec.factors(), ln_x, ln_y, cfg)?;
    Ok(HEvaluation {
        value: out.value,
        route: Route::Contour,
        contour: Some(out),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{gamma, reg_lower_incomplete_gamma};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn construction_checks() {
        assert!(GHSpec::meijer(3, 0, &[], &[1.0]).is_err());
        assert!(GHSpec::new(1, 0, vec![], vec![HParam::new(1.0, 0.0)]).is_err());
        // left pole at 0 (b = 0) and right pole at 0 (a = 1) coincide
        assert_eq!(
            GHSpec::meijer(1, 1, &[1.0], &[0.0, 0.0]).unwrap_err(),
            Error::NoSeparatingContour
        );
        assert!(GHSpec::lower_incomplete_gamma(0.0075).is_ok());
    }

    #[test]
    fn exponential_cdf_example() {
        let spec = GHSpec::lower_incomplete_gamma(1.0).unwrap();
        let cfg = ContourConfig::univariate().contour_only();
        let v = fox_h(&spec, 0.1, &cfg).unwrap();
        assert!(rel(v, 0.095_162_581_964_040_43) < 1e-10);
        assert!(rel(v, reg_lower_incomplete_gamma(1.0, 0.1).unwrap()) < 1e-10);
    }

    #[test]
    fn contour_and_fast_path_agree() {
        let fast = ContourConfig::univariate();
        let slow = fast.contour_only();
        for nu in [1.0, 0.7736, 2.0, 0.0075, 3.7291] {
            let spec = GHSpec::lower_incomplete_gamma(nu).unwrap();
            for k in 0..25 {
                let z = 10f64.powf(-4.0 + 6.0 * k as f64 / 24.0);
                let a = fox_h_detailed(&spec, z, &fast).unwrap();
                let b = fox_h_detailed(&spec, z, &slow).unwrap();
                assert_eq!(a.route, Route::IncompleteGamma);
                assert_eq!(b.route, Route::Contour);
                assert!(
                    rel(b.value, a.value) < 1e-9,
                    "nu {nu} z {z}: {} vs {}",
                    b.value,
                    a.value
                );
            }
        }
    }

    #[test]
    fn power_exponential_by_contour() {
        let spec = GHSpec::power_exponential(0.7).unwrap();
        let cfg = ContourConfig::univariate().contour_only();
        for z in [1e-3, 0.5, 3.0, 20.0] {
            let v = fox_h(&spec, z, &cfg).unwrap();
            let want = z.powf(0.7) * (-z).exp();
            assert!(rel(v, want) < 1e-9, "z {z}");
        }
    }

    #[test]
    fn extreme_log_arguments() {
        // The catalog's largest power: (γ/(bγ̄))^c with c ≈ 216.8 reaches e^{±1000}.
        let nu = 0.0075;
        let spec = GHSpec::lower_incomplete_gamma(nu).unwrap();
        let cfg = ContourConfig::univariate().contour_only();
        for ln_z in [-1500.0, -200.0, 300.0, 1200.0] {
            let v = fox_h_ln(&spec, ln_z, &cfg)
                .map_err(|e| format!("ln z {ln_z}: {e}"))
                .unwrap();
            let want = gamma(nu).unwrap() * reg_lower_incomplete_gamma_ln(nu, ln_z).unwrap();
            assert!(rel(v, want) < 1e-8, "ln z {ln_z}: {v} vs {want}");
        }
    }

    #[test]
    fn argument_power_identity() {
        let spec = GHSpec::lower_incomplete_gamma(0.7736).unwrap();
        let cfg = ContourConfig::univariate().contour_only();
        for c in [3.0, 49.1773] {
            let (pre, scaled) = spec.argument_power(c).unwrap();
            for z in [0.97, 1.0, 1.02] {
                let direct = fox_h_ln(&spec, c * f64::ln(z), &cfg).unwrap();
                let via = pre * fox_h(&scaled, z, &cfg).unwrap();
                assert!(rel(via, direct) < 1e-8, "c {c} z {z}");
            }
        }
    }

    #[test]
    fn general_h_matches_scaled_incomplete_gamma() {
        // H^{1,1}_{1,2}[z | (1,k); (ν,k),(0,k)] = Γ(ν) P(ν, z^{1/k}) / k
        let (nu, k) = (1.7, 0.4);
        let spec = GHSpec::new(
            1,
            1,
            vec![HParam::new(1.0, k)],
            vec![HParam::new(nu, k), HParam::new(0.0, k)],
        )
        .unwrap();
        let fast = ContourConfig::univariate();
        let slow = fast.contour_only();
        for z in [0.05, 0.9, 4.0] {
            let a = fox_h(&spec, z, &fast).unwrap();
            let b = fox_h(&spec, z, &slow).unwrap();
            let want = gamma(nu).unwrap() * reg_lower_incomplete_gamma(nu, z.powf(1.0 / k)).unwrap() / k;
            assert!(rel(a, want) < 1e-12);
            assert!(rel(b, want) < 1e-9);
        }
    }

    #[test]
    fn cancelling_pairs_reduce() {
        let spec = GHSpec::meijer(1, 2, &[0.0, 1.0], &[2.5, 0.0, 1.0]).unwrap();
        let r = spec.reduced();
        assert_eq!((r.m(), r.n(), r.upper().len(), r.lower().len()), (1, 0, 0, 1));
        let fast = fox_h_detailed(&spec, 0.8, &ContourConfig::univariate()).unwrap();
        assert_eq!(fast.route, Route::PowerExponential);
        let slow = fox_h(&spec, 0.8, &ContourConfig::univariate().contour_only()).unwrap();
        assert!(rel(slow, 0.8f64.powf(2.5) * (-0.8f64).exp()) < 1e-9);
    }

    #[test]
    fn empty_outer_block_factorizes() {
        let x_spec = GHSpec::lower_incomplete_gamma(0.7736).unwrap();
        let y_spec = GHSpec::lower_incomplete_gamma(2.0).unwrap();
        let spec = BivariateGHSpec::new(vec![], x_spec.clone(), y_spec.clone()).unwrap();
        let uni = ContourConfig::univariate();
        let both = ContourConfig::bivariate().contour_only();
        for (x, y) in [(0.01, 0.3), (1.0, 1.0), (5.0, 0.02)] {
            let h = fox_h_bivariate_detailed(&spec, x, y, &both).unwrap();
            assert_eq!(h.route, Route::Contour);
            let want = fox_h(&x_spec, x, &uni).unwrap() * fox_h(&y_spec, y, &uni).unwrap();
            assert!(rel(h.value, want) < 1e-6, "({x},{y}): {} vs {want}", h.value);
        }
    }

    /// Real-space value of `∫ ln(1+γ) f_i(γ) F_j(γ) dγ` for generalized-gamma
    /// densities and distributions, by Gauss–Legendre in `u = ln γ`.
    fn coupled_oracle(ki: f64, pi: f64, ti: f64, kj: f64, pj: f64, tj: f64) -> f64 {
        let rule = crate::specfun::gauss::gauss_legendre(32);
        let (lo, hi, panels) = (-60.0, 8.0, 680);
        let h = (hi - lo) / panels as f64;
        let gi = gamma(ki).unwrap();
        let mut acc = 0.0;
        for p in 0..panels {
            let mid = lo + (p as f64 + 0.5) * h;
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let u = mid + 0.5 * h * x;
                let g = u.exp();
                let xi = (g / ti).powf(pi);
                let dens = pi / gi * xi.powf(ki) * (-xi).exp();
                let cdf = reg_lower_incomplete_gamma(kj, (g / tj).powf(pj)).unwrap();
                acc += 0.5 * h * w * g.ln_1p() * dens * cdf;
            }
        }
        acc
    }

    #[test]
    fn coupled_block_matches_real_space_integral() {
        let cases: [(f64, f64, f64, f64, f64, f64); 2] =
            [(1.5, 1.0, 2.0, 1.2, 0.8, 1.5), (0.7736, 1.0, 30.0, 1.0, 1.0, 10.0)];
        for (ki, pi, ti, kj, pj, tj) in cases {
            let outer = vec![
                CoupledGamma {
                    offset: 1.0,
                    x_scale: -pi,
                    y_scale: -pj,
                    in_numerator: true,
                },
                CoupledGamma {
                    offset: 0.0,
                    x_scale: pi,
                    y_scale: pj,
                    in_numerator: true,
                },
                CoupledGamma {
                    offset: 0.0,
                    x_scale: pi,
                    y_scale: pj,
                    in_numerator: true,
                },
                CoupledGamma {
                    offset: 1.0,
                    x_scale: pi,
                    y_scale: pj,
                    in_numerator: false,
                },
            ];
            let spec = BivariateGHSpec::new(
                outer,
                GHSpec::power_exponential(ki).unwrap(),
                GHSpec::lower_incomplete_gamma(kj).unwrap(),
            )
            .unwrap();
            let x = ti.powf(-pi);
            let y = tj.powf(-pj);
            let h = fox_h_bivariate(&spec, x, y, &ContourConfig::bivariate()).unwrap();
            let got = pi / (gamma(ki).unwrap() * gamma(kj).unwrap()) * h;
            let want = coupled_oracle(ki, pi, ti, kj, pj, tj);
            assert!(rel(got, want) < 1e-6, "{got} vs {want}");
        }
    }
}
