//! Numerical evaluation of the Lauricella period vector at real-ordered
//! configurations via Gauss-Jacobi quadrature, the 2-D area integral N(z),
//! and verification of the analytic identities of the period map.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num::complex::Complex64;
use num::traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};

use crate::hermitian::{form_on_period_coordinates, HermitianGram};
use crate::weights::{cumulative_sums, CaseLabel, WeightSystem};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

const PI: f64 = std::f64::consts::PI;

/// Nodes and weights integrating (1-x)^alpha (1+x)^beta p(x) on (-1,1)
/// exactly for polynomials up to degree 2*nodes - 1.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub alpha: f64,
    pub beta: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn ln_gamma(x: f64) -> f64 {
    // Lanczos approximation, g = 7, n = 9
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + 7.5;
    for (i, c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Gauss-Jacobi rule by the symmetric-tridiagonal (Golub-Welsch) eigenvalue
/// problem on the Jacobi recurrence.
pub fn gauss_jacobi_rule(alpha: f64, beta: f64, nodes: usize) -> Result<QuadratureRule> {
    if !(alpha > -1.0 && alpha.is_finite()) || !(beta > -1.0 && beta.is_finite()) {
        return Err(Error::Invalid(format!(
            "Jacobi exponents must be > -1, got alpha={alpha}, beta={beta}"
        )));
    }
    if nodes == 0 {
        return Err(Error::Invalid("quadrature rule needs at least one node".into()));
    }
    let n = nodes;
    let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
    let mut diag = (beta - alpha) / (2.0 + alpha + beta);
    for i in 0..n - 1 {
        let ip1 = (i + 1) as f64;
        let denom = 2.0 * ip1 + alpha + beta;
        // the i = 0 coefficient in its cancelled form: the general expression
        // is 0/0 when alpha + beta = -1
        let off = if i == 0 {
            2.0 / denom * ((1.0 + alpha) * (1.0 + beta) / (denom + 1.0)).sqrt()
        } else {
            2.0 / denom
                * (ip1 * (ip1 + alpha) * (ip1 + beta) * (ip1 + alpha + beta)
                    / ((denom + 1.0) * (denom - 1.0)))
                    .sqrt()
        };
        m[(i, i)] = diag;
        m[(i, i + 1)] = off;
        m[(i + 1, i)] = off;
        diag = (beta * beta - alpha * alpha) / (denom * (denom + 2.0));
    }
    m[(n - 1, n - 1)] = diag;
    let eig = m
        .try_symmetric_eigen(1e-13, 8000)
        .ok_or_else(|| Error::Tolerance("Jacobi eigenproblem did not converge".into()))?;
    let scale = (2.0f64).powf(alpha + beta + 1.0)
        * (ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0) - ln_gamma(alpha + beta + 2.0)).exp();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let x = eig.eigenvalues[i];
            let v = eig.eigenvectors[(0, i)];
            (x, v * v * scale)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let rule = QuadratureRule {
        alpha,
        beta,
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    };
    for (i, &x) in rule.nodes.iter().enumerate() {
        if !(-1.0 < x && x < 1.0) || rule.weights[i] <= 0.0 {
            return Err(Error::Tolerance(
                "Jacobi rule produced an invalid node or weight".into(),
            ));
        }
    }
    Ok(rule)
}

fn rule_cached(alpha: f64, beta: f64, nodes: usize) -> Result<Arc<QuadratureRule>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64, usize), Arc<QuadratureRule>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (alpha.to_bits(), beta.to_bits(), nodes);
    if let Some(r) = cache.lock().unwrap().get(&key) {
        return Ok(r.clone());
    }
    let r = Arc::new(gauss_jacobi_rule(alpha, beta, nodes)?);
    cache.lock().unwrap().insert(key, r.clone());
    Ok(r)
}

/// A real-ordered configuration z_0 < ... < z_n, optionally with small
/// imaginary perturbations (bounded by a quarter of the minimal gap).
#[derive(Debug, Clone)]
pub struct Configuration {
    points: Vec<Complex64>,
    min_gap: f64,
}

impl Configuration {
    pub fn new_real(points: Vec<f64>) -> Result<Self> {
        Self::new(points.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
    }

    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Invalid("a configuration needs at least two points".into()));
        }
        let mut min_gap = f64::INFINITY;
        for w in points.windows(2) {
            let gap = w[1].re - w[0].re;
            if !(gap > 0.0) {
                return Err(Error::Invalid(
                    "configuration points must have strictly increasing real parts".into(),
                ));
            }
            min_gap = min_gap.min(gap);
        }
        for p in &points {
            if p.im.abs() >= 0.25 * min_gap {
                return Err(Error::Invalid(format!(
                    "imaginary perturbation {} exceeds a quarter of the minimal gap {}",
                    p.im, min_gap
                )));
            }
        }
        Ok(Configuration { points, min_gap })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn min_gap(&self) -> f64 {
        self.min_gap
    }

    fn shifted(&self, k: usize, dz: Complex64) -> Result<Self> {
        let mut pts = self.points.clone();
        pts[k] += dz;
        Self::new(pts)
    }
}

/// Computed period vector with quadrature metadata.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodVector {
    /// F_1..F_n as (re, im)
    pub values: Vec<(f64, f64)>,
    /// F_{n+1} in the hyperbolic case
    pub f_inf: Option<(f64, f64)>,
    pub nodes: usize,
    /// difference against the doubled rule
    pub est_error: f64,
}

impl PeriodVector {
    pub fn complex_values(&self) -> Vec<Complex64> {
        self.values.iter().map(|&(r, i)| Complex64::new(r, i)).collect()
    }
}

fn mu_f64(ws: &WeightSystem, k: usize) -> f64 {
    ws.mu(k).to_f64().unwrap()
}

/// principal-branch power x^(-mu)
fn cpow_neg(x: Complex64, mu: f64) -> Complex64 {
    x.powf(-mu)
}

fn segment_period(ws: &WeightSystem, cfg: &Configuration, k: usize, nodes: usize) -> Result<Complex64> {
    // F_k over [z_{k-1}, z_k]; endpoint singularities absorbed by the rule
    let n = ws.n();
    let z = cfg.points();
    let (alpha, beta) = (-mu_f64(ws, k), -mu_f64(ws, k - 1));
    let rule = rule_cached(alpha, beta, nodes)?;
    let za = z[k - 1];
    let zb = z[k];
    let half = (zb - za) * 0.5;
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let zeta = za + half * (x + 1.0);
        let mut g = Complex64::new(1.0, 0.0);
        for j in 0..=n {
            if j + 1 == k {
                continue; // left endpoint factor absorbed
            }
            if j == k {
                continue; // right endpoint factor absorbed
            }
            if j < k {
                g *= cpow_neg(zeta - z[j], mu_f64(ws, j));
            } else {
                g *= cpow_neg(z[j] - zeta, mu_f64(ws, j));
            }
        }
        acc += w * g;
    }
    let exponent = 1.0 - mu_f64(ws, k - 1) - mu_f64(ws, k);
    Ok(half.powf(exponent) * acc)
}

fn infinity_period(ws: &WeightSystem, cfg: &Configuration, nodes: usize) -> Result<Complex64> {
    // F_{n+1} over [z_n, infinity) in the omega = 1/zeta chart after
    // translating the configuration so that z_n = 1 (periods are
    // translation invariant)
    let n = ws.n();
    let z = cfg.points();
    let shift = Complex64::new(1.0, 0.0) - z[n];
    let t: Vec<Complex64> = z.iter().map(|&p| p + shift).collect();
    let mu_inf = ws.mu_infinity().to_f64().unwrap();
    let (alpha, beta) = (-mu_f64(ws, n), -mu_inf);
    let rule = rule_cached(alpha, beta, nodes)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let om = 0.5 * (x + 1.0);
        let mut g = Complex64::new(1.0, 0.0);
        for (j, tj) in t.iter().enumerate().take(n) {
            g *= cpow_neg(Complex64::new(1.0, 0.0) - om * tj, mu_f64(ws, j));
        }
        acc += w * g;
    }
    let exponent = 1.0 - mu_f64(ws, n) - mu_inf;
    Ok((0.5f64).powf(exponent) * acc)
}

fn periods_at(ws: &WeightSystem, cfg: &Configuration, nodes: usize) -> Result<(Vec<Complex64>, Option<Complex64>)> {
    let n = ws.n();
    if cfg.points().len() != n + 1 {
        return Err(Error::Invalid(format!(
            "configuration has {} points but the weight system has {}",
            cfg.points().len(),
            n + 1
        )));
    }
    let vals: Vec<Complex64> = (1..=n)
        .map(|k| segment_period(ws, cfg, k, nodes))
        .collect::<Result<_>>()?;
    let f_inf = if ws.classify() == CaseLabel::Hyperbolic {
        Some(infinity_period(ws, cfg, nodes)?)
    } else {
        None
    };
    Ok((vals, f_inf))
}

/// The normalized periods F_1..F_n (plus F_{n+1} in the hyperbolic case),
/// with an error estimate from doubling the rule.
pub fn lauricella_periods(ws: &WeightSystem, cfg: &Configuration, nodes: usize) -> Result<PeriodVector> {
    ws.ensure_in_range()?;
    if nodes == 0 {
        return Err(Error::Invalid("node count must be positive".into()));
    }
    let (v1, f1) = periods_at(ws, cfg, nodes)?;
    let (v2, f2) = periods_at(ws, cfg, 2 * nodes)?;
    let mut err: f64 = 0.0;
    for (a, b) in v1.iter().zip(&v2) {
        err = err.max((a - b).norm());
    }
    if let (Some(a), Some(b)) = (f1, f2) {
        err = err.max((a - b).norm());
    }
    Ok(PeriodVector {
        values: v2.iter().map(|c| (c.re, c.im)).collect(),
        f_inf: f2.map(|c| (c.re, c.im)),
        nodes,
        est_error: err,
    })
}

/// im(w_k) for k = 1..=n+1 as floats.
pub fn phase_imags(ws: &WeightSystem) -> Vec<f64> {
    cumulative_sums(ws)
        .iter()
        .map(|s| (PI * s.to_f64().unwrap()).sin())
        .collect()
}

/// Residual of the parabolic identity sum_k im(w_k) F_k = pi.
pub fn parabolic_residual(ws: &WeightSystem, pv: &PeriodVector) -> Option<f64> {
    if ws.classify() != CaseLabel::Parabolic {
        return None;
    }
    let u = phase_imags(ws);
    let mut s = Complex64::new(0.0, 0.0);
    for (k, &(re, im)) in pv.values.iter().enumerate() {
        s += u[k] * Complex64::new(re, im);
    }
    Some((s - Complex64::new(PI, 0.0)).norm())
}

/// Residual of the hyperbolic closure identity sum_{k=1}^{n+1} im(w_k) F_k = 0.
pub fn closure_residual(ws: &WeightSystem, pv: &PeriodVector) -> Option<f64> {
    if ws.classify() != CaseLabel::Hyperbolic {
        return None;
    }
    let u = phase_imags(ws);
    let (fr, fi) = pv.f_inf?;
    let mut s = Complex64::new(fr, fi) * u[ws.n()];
    for (k, &(re, im)) in pv.values.iter().enumerate() {
        s += u[k] * Complex64::new(re, im);
    }
    Some(s.norm())
}

// ---------------------------------------------------------------------------
// N(z): adaptive 2-D integral of -prod |z_k - zeta|^{-2 mu_k} over the plane
// ---------------------------------------------------------------------------

struct Density {
    centers: Vec<Complex64>,
    exps: Vec<f64>,
    total: f64,
}

impl Density {
    fn eval(&self, zeta: Complex64) -> f64 {
        let mut acc = 1.0;
        for (c, e) in self.centers.iter().zip(&self.exps) {
            acc *= (zeta - c).norm().powf(-2.0 * e);
        }
        acc
    }
}

/// Smooth cutoff: 1 for t <= 0, 0 for t >= 1.
fn bump(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    if t >= 1.0 {
        return 0.0;
    }
    let h = |s: f64| (-1.0 / s).exp();
    let a = h(1.0 - t);
    let b = h(t);
    a / (a + b)
}

struct NIntegrand {
    dens: Density,
    r1: f64,
    r2: f64,
    rr1: f64,
    rr2: f64,
}

impl NIntegrand {
    fn chi_disk(&self, rho: f64) -> f64 {
        bump((rho - self.r1) / (self.r2 - self.r1))
    }

    fn chi_inf(&self, absz: f64) -> f64 {
        bump((self.rr2 - absz) / (self.rr2 - self.rr1))
    }

    /// middle integrand: density times the complement of all cutoffs
    fn middle(&self, zeta: Complex64) -> f64 {
        let mut f = self.dens.eval(zeta) * (1.0 - self.chi_inf(zeta.norm()));
        if f == 0.0 {
            return 0.0;
        }
        for c in &self.dens.centers {
            f *= 1.0 - self.chi_disk((zeta - c).norm());
        }
        f
    }
}

fn disk_chart(ni: &NIntegrand, idx: usize, nrad: usize, nth: usize) -> Result<f64> {
    // polar chart about the singular point: radial weight rho^{1-2 mu}
    let c = ni.dens.centers[idx];
    let mu = ni.dens.exps[idx];
    let beta = 1.0 - 2.0 * mu;
    let rule = rule_cached(0.0, beta, nrad)?;
    let half = 0.5 * ni.r2;
    let scale = half.powf(beta + 1.0);
    let mut acc = 0.0;
    for it in 0..nth {
        let th = 2.0 * PI * it as f64 / nth as f64;
        let dir = Complex64::new(th.cos(), th.sin());
        let mut radial = 0.0;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let rho = half * (x + 1.0);
            let zeta = c + rho * dir;
            // remove the singular factor rho^{-2 mu}, absorbed by the rule
            let mut g = 1.0;
            for (j, (cj, ej)) in ni.dens.centers.iter().zip(&ni.dens.exps).enumerate() {
                if j == idx {
                    continue;
                }
                g *= (zeta - cj).norm().powf(-2.0 * ej);
            }
            g *= ni.chi_disk(rho) * (1.0 - ni.chi_inf(zeta.norm()));
            radial += w * g;
        }
        acc += radial;
    }
    Ok(acc * (2.0 * PI / nth as f64) * scale)
}

fn infinity_chart(ni: &NIntegrand, nrad: usize, nth: usize) -> Result<f64> {
    // omega = 1/zeta chart: radial weight sigma^{2|mu|-3}
    let beta = 2.0 * ni.dens.total - 3.0;
    let rule = rule_cached(0.0, beta, nrad)?;
    let half = 0.5 / ni.rr1;
    let scale = half.powf(beta + 1.0);
    let mut acc = 0.0;
    for it in 0..nth {
        let th = 2.0 * PI * it as f64 / nth as f64;
        let dir = Complex64::new(th.cos(), th.sin());
        let mut radial = 0.0;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let sigma = half * (x + 1.0);
            let om = sigma * dir;
            // |zeta - c| = |1 - om c| / |om|; the |om|^{2|mu|} and the
            // Jacobian |om|^{-4} combine into the absorbed radial weight
            let mut g = 1.0;
            for (cj, ej) in ni.dens.centers.iter().zip(&ni.dens.exps) {
                g *= (Complex64::new(1.0, 0.0) - om * cj).norm().powf(-2.0 * ej);
            }
            g *= ni.chi_inf(1.0 / sigma);
            radial += w * g;
        }
        acc += radial;
    }
    Ok(acc * (2.0 * PI / nth as f64) * scale)
}

fn gl_nodes12() -> &'static (Vec<f64>, Vec<f64>) {
    static NODES: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    NODES.get_or_init(|| {
        let r = gauss_jacobi_rule(0.0, 0.0, 12).expect("Legendre rule");
        (r.nodes, r.weights)
    })
}

fn panel_value(ni: &NIntegrand, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let (xs, ws_) = gl_nodes12();
    let mut acc = 0.0;
    for (xi, wi) in xs.iter().zip(ws_) {
        let x = x0 + 0.5 * (xi + 1.0) * (x1 - x0);
        for (yj, wj) in xs.iter().zip(ws_) {
            let y = y0 + 0.5 * (yj + 1.0) * (y1 - y0);
            acc += wi * wj * ni.middle(Complex64::new(x, y));
        }
    }
    acc * 0.25 * (x1 - x0) * (y1 - y0)
}

fn adapt_panel(ni: &NIntegrand, x0: f64, x1: f64, y0: f64, y1: f64, tol: f64, depth: u32) -> f64 {
    let whole = panel_value(ni, x0, x1, y0, y1);
    let xm = 0.5 * (x0 + x1);
    let ym = 0.5 * (y0 + y1);
    let q = [
        (x0, xm, y0, ym),
        (xm, x1, y0, ym),
        (x0, xm, ym, y1),
        (xm, x1, ym, y1),
    ];
    let parts: f64 = q.iter().map(|&(a, b, c, d)| panel_value(ni, a, b, c, d)).sum();
    if (whole - parts).abs() < tol || depth >= 13 {
        return parts;
    }
    #[cfg(feature = "parallel")]
    if depth < 3 {
        let vals: Vec<f64> = q
            .par_iter()
            .map(|&(a, b, c, d)| adapt_panel(ni, a, b, c, d, tol / 4.0, depth + 1))
            .collect();
        return vals.iter().sum();
    }
    q.iter()
        .map(|&(a, b, c, d)| adapt_panel(ni, a, b, c, d, tol / 4.0, depth + 1))
        .sum()
}

/// N(z) = -int_C prod_k |z_k - zeta|^{-2 mu_k} d(area), computed with local
/// polar charts around each z_k and around infinity plus an adaptive middle
/// region; requires the hyperbolic case for convergence.
pub fn n_integral(ws: &WeightSystem, cfg: &Configuration, tolerance: f64) -> Result<f64> {
    ws.ensure_hyperbolic("n_integral")?;
    if !(tolerance > 0.0) {
        return Err(Error::Invalid("tolerance must be positive".into()));
    }
    let centers = cfg.points().to_vec();
    let exps: Vec<f64> = (0..=ws.n()).map(|k| mu_f64(ws, k)).collect();
    let total = ws.total_weight().to_f64().unwrap();
    let min_gap = cfg.min_gap();
    let centroid = centers.iter().sum::<Complex64>() / centers.len() as f64;
    let spread = centers
        .iter()
        .map(|c| (c - centroid).norm())
        .fold(0.0, f64::max);
    let ni = NIntegrand {
        dens: Density { centers, exps, total },
        r1: 0.22 * min_gap,
        r2: 0.45 * min_gap,
        rr1: 4.0 * (spread + 1.0),
        rr2: 8.0 * (spread + 1.0),
    };

    // refine each smooth-chart discretization by doubling until stable
    fn refine<F>(f: F, tolerance: f64) -> Result<f64>
    where
        F: Fn(usize, usize) -> Result<f64>,
    {
        let (mut nrad, mut nth) = (24usize, 48usize);
        let mut prev = f(nrad, nth)?;
        for _ in 0..6 {
            nrad *= 2;
            nth *= 2;
            let cur = f(nrad, nth)?;
            if (cur - prev).abs() < tolerance / 6.0 {
                return Ok(cur);
            }
            prev = cur;
        }
        Err(Error::Tolerance(
            "polar chart did not converge within the refinement budget".into(),
        ))
    }

    let k_charts = ni.dens.centers.len();
    #[cfg(feature = "parallel")]
    let chart_vals: Result<Vec<f64>> = (0..k_charts)
        .into_par_iter()
        .map(|i| refine(|a, b| disk_chart(&ni, i, a, b), tolerance))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let chart_vals: Result<Vec<f64>> = (0..k_charts)
        .map(|i| refine(|a, b| disk_chart(&ni, i, a, b), tolerance))
        .collect();
    let mut total_int: f64 = chart_vals?.iter().sum();
    total_int += refine(|a, b| infinity_chart(&ni, a, b), tolerance)?;

    // middle region: smooth and compactly supported in |z| <= rr2 around the
    // centroid; centre the box there
    let cx = centroid.re;
    let r = ni.rr2 * 1.02;
    total_int += adapt_panel(&ni, cx - r, cx + r, -r, r, tolerance / 6.0, 0);

    let n = -total_int;
    if !(n < 0.0) {
        return Err(Error::Tolerance(format!("N(z) = {n} is not negative")));
    }
    Ok(n)
}

// ---------------------------------------------------------------------------
// identity checks
// ---------------------------------------------------------------------------

/// Residual report for the paper-stated identities of the period map.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub translation: f64,
    pub homogeneity: f64,
    pub pde: f64,
    /// smallest singular value of the Jacobian in (z_1..z_n)
    pub jacobian_sigma_min: f64,
    /// second-smallest singular value
    pub jacobian_sigma_second: f64,
}

fn period_values(ws: &WeightSystem, cfg: &Configuration, nodes: usize) -> Result<Vec<Complex64>> {
    Ok(periods_at(ws, cfg, nodes)?.0)
}

/// Finite-difference verification of translation invariance, homogeneity,
/// the hypergeometric PDE system and the rank of the Schwarz map.
pub fn identity_checks(ws: &WeightSystem, cfg: &Configuration, h: f64, nodes: usize) -> Result<IdentityReport> {
    ws.ensure_in_range()?;
    if !(h > 0.0) || h >= 0.25 * cfg.min_gap() {
        return Err(Error::Invalid(format!(
            "finite-difference step {h} too large for minimal gap {}",
            cfg.min_gap()
        )));
    }
    let n = ws.n();
    let base = period_values(ws, cfg, nodes)?;
    let total = ws.total_weight().to_f64().unwrap();

    // translation invariance: F(z + a 1) = F(z)
    let a = 1e-3;
    let shifted = Configuration::new(cfg.points().iter().map(|&p| p + a).collect())?;
    let tvals = period_values(ws, &shifted, nodes)?;
    let translation = base
        .iter()
        .zip(&tvals)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);

    // homogeneity: F(e^t z) = e^{(1-|mu|) t} F(z)
    let t = 1e-3;
    let factor = (t * (1.0 - total)).exp();
    let scaled = Configuration::new(cfg.points().iter().map(|&p| p * t.exp()).collect())?;
    let svals = period_values(ws, &scaled, nodes)?;
    let homogeneity = base
        .iter()
        .zip(&svals)
        .map(|(x, y)| (y - x * factor).norm())
        .fold(0.0, f64::max);

    // PDE residuals via central differences over every pair k < l
    let d1 = |k: usize| -> Result<Vec<Complex64>> {
        let plus = period_values(ws, &cfg.shifted(k, Complex64::new(h, 0.0))?, nodes)?;
        let minus = period_values(ws, &cfg.shifted(k, Complex64::new(-h, 0.0))?, nodes)?;
        Ok(plus
            .iter()
            .zip(&minus)
            .map(|(p, m)| (p - m) / (2.0 * h))
            .collect())
    };
    let mut pde: f64 = 0.0;
    let firsts: Vec<Vec<Complex64>> = (0..=n).map(d1).collect::<Result<_>>()?;
    for k in 0..n {
        for l in (k + 1)..=n {
            let pp = period_values(
                ws,
                &cfg.shifted(k, Complex64::new(h, 0.0))?.shifted(l, Complex64::new(h, 0.0))?,
                nodes,
            )?;
            let pm = period_values(
                ws,
                &cfg.shifted(k, Complex64::new(h, 0.0))?.shifted(l, Complex64::new(-h, 0.0))?,
                nodes,
            )?;
            let mp = period_values(
                ws,
                &cfg.shifted(k, Complex64::new(-h, 0.0))?.shifted(l, Complex64::new(h, 0.0))?,
                nodes,
            )?;
            let mm = period_values(
                ws,
                &cfg.shifted(k, Complex64::new(-h, 0.0))?.shifted(l, Complex64::new(-h, 0.0))?,
                nodes,
            )?;
            let dz = cfg.points()[k] - cfg.points()[l];
            let muk = mu_f64(ws, k);
            let mul = mu_f64(ws, l);
            for j in 0..n {
                let mixed = (pp[j] - pm[j] - mp[j] + mm[j]) / (4.0 * h * h);
                let rhs = (mul * firsts[k][j] - muk * firsts[l][j]) / dz;
                pde = pde.max((mixed - rhs).norm());
            }
        }
    }

    // Jacobian of F in (z_1..z_n) with z_0 pinned
    let mut jac = nalgebra::DMatrix::<Complex64>::zeros(n, n);
    for k in 1..=n {
        for j in 0..n {
            jac[(j, k - 1)] = firsts[k][j];
        }
    }
    let svd = jac.svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(IdentityReport {
        translation,
        homogeneity,
        pde,
        jacobian_sigma_min: sv[0],
        jacobian_sigma_second: if n >= 2 { sv[1] } else { sv[0] },
    })
}

// ---------------------------------------------------------------------------
// Schwarz point
// ---------------------------------------------------------------------------

/// Projective/ball/affine coordinates of the Schwarz image of a period vector.
#[derive(Debug, Clone, Serialize)]
pub struct SchwarzPoint {
    /// [F_1 : ... : F_n] normalized by the largest-modulus coordinate
    pub projective: Vec<(f64, f64)>,
    /// ball coordinates after moving the form to diag(1..1,-1), hyperbolic only
    pub ball: Option<Vec<(f64, f64)>>,
    pub ball_radius: Option<f64>,
    /// affine point on the hyperplane sum im(w_k) F_k = pi, parabolic only
    pub affine: Option<Vec<(f64, f64)>>,
}

pub fn schwarz_point(ws: &WeightSystem, pv: &PeriodVector) -> Result<SchwarzPoint> {
    ws.ensure_in_range()?;
    let f = pv.complex_values();
    let n = f.len();
    let max = f.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if !(max > 0.0) {
        return Err(Error::Invalid("period vector is zero".into()));
    }
    let pivot = f
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
        .unwrap()
        .0;
    let projective: Vec<(f64, f64)> = f.iter().map(|c| { let q = c / f[pivot]; (q.re, q.im) }).collect();

    let mut out = SchwarzPoint {
        projective,
        ball: None,
        ball_radius: None,
        affine: None,
    };
    match ws.classify() {
        CaseLabel::Hyperbolic => {
            let h: HermitianGram = form_on_period_coordinates(ws)?;
            let e = h.embed();
            let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] = e[i][j].0;
                }
            }
            let eig = m.symmetric_eigen();
            // order eigen-directions with the unique negative one last
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
            let negs = eig.eigenvalues.iter().filter(|&&x| x < 0.0).count();
            if negs != 1 {
                return Err(Error::Invalid(format!(
                    "hyperbolic form has {negs} negative directions"
                )));
            }
            let mut y = vec![Complex64::new(0.0, 0.0); n];
            for (slot, &i) in idx.iter().enumerate() {
                let lam = eig.eigenvalues[i];
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    acc += eig.eigenvectors[(j, i)] * f[j];
                }
                y[slot] = acc * lam.abs().sqrt();
            }
            let denom = y[n - 1];
            let ball: Vec<Complex64> = y[..n - 1].iter().map(|c| c / denom).collect();
            let radius = ball.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if radius >= 1.0 {
                return Err(Error::Tolerance(format!(
                    "Schwarz point has ball radius {radius} >= 1 (quadrature or form error)"
                )));
            }
            out.ball = Some(ball.iter().map(|c| (c.re, c.im)).collect());
            out.ball_radius = Some(radius);
        }
        CaseLabel::Parabolic => {
            let u = phase_imags(ws);
            let mut s = Complex64::new(0.0, 0.0);
            for (k, c) in f.iter().enumerate() {
                s += u[k] * c;
            }
            if s.norm() == 0.0 {
                return Err(Error::Invalid("degenerate parabolic period vector".into()));
            }
            let scale = Complex64::new(PI, 0.0) / s;
            out.affine = Some(f.iter().map(|c| { let q = c * scale; (q.re, q.im) }).collect());
        }
        _ => {}
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn ws(nums: &[i64], den: i64) -> WeightSystem {
        WeightSystem::new(nums.iter().map(|&p| rat(p, den)).collect()).unwrap()
    }

    #[test]
    fn legendre_two_nodes() {
        let r = gauss_jacobi_rule(0.0, 0.0, 2).unwrap();
        let s = 1.0 / 3.0f64.sqrt();
        assert!((r.nodes[0] + s).abs() < 1e-14);
        assert!((r.nodes[1] - s).abs() < 1e-14);
        assert!((r.weights[0] - 1.0).abs() < 1e-13);
        assert!((r.weights[1] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn chebyshev_closed_form() {
        let n = 9;
        let r = gauss_jacobi_rule(-0.5, -0.5, n).unwrap();
        for (k, &x) in r.nodes.iter().enumerate() {
            // ascending nodes: cos((2(n-k)-1) pi / 2n)
            let expect = ((2 * (n - k) - 1) as f64 * PI / (2 * n) as f64).cos();
            assert!((x - expect).abs() < 1e-12, "node {k}");
            assert!((r.weights[k] - PI / n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn jacobi_moments_match_beta_closed_form() {
        // moments of (1-x)^a (1+x)^b against x^j via the exact Beta formula
        let (a, b) = (-1.0 / 3.0, -  1.0 / 4.0);
        let r = gauss_jacobi_rule(a, b, 24).unwrap();
        let beta_fn = |x: f64, y: f64| (ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y)).exp();
        for j in 0..=5usize {
            let q: f64 = r
                .nodes
                .iter()
                .zip(&r.weights)
                .map(|(&x, &w)| w * x.powi(j as i32))
                .sum();
            // int (1-x)^a (1+x)^b x^j dx = sum_i C(j,i) (-1)^{j-i} 2^{a+b+i+1} B(a+1, b+i+1)
            let mut exact = 0.0;
            let mut binom = 1.0f64;
            for i in 0..=j {
                if i > 0 {
                    binom = binom * (j - i + 1) as f64 / i as f64;
                }
                let sign = if (j - i) % 2 == 0 { 1.0 } else { -1.0 };
                exact += binom * sign * (2.0f64).powf(a + b + 1.0 + i as f64) * beta_fn(a + 1.0, b + i as f64 + 1.0);
            }
            assert!((q - exact).abs() < 1e-12, "moment {j}: {q} vs {exact}");
        }
    }

    #[test]
    fn invalid_rules_rejected() {
        assert!(gauss_jacobi_rule(-1.0, 0.0, 4).is_err());
        assert!(gauss_jacobi_rule(0.0, -1.5, 4).is_err());
        assert!(gauss_jacobi_rule(0.0, 0.0, 0).is_err());
    }

    #[test]
    fn beta_oracle_half() {
        let w = ws(&[1, 1], 2);
        let cfg = Configuration::new_real(vec![0.0, 1.0]).unwrap();
        let pv = lauricella_periods(&w, &cfg, 32).unwrap();
        assert!((pv.values[0].0 - PI).abs() < 1e-10);
        assert!(pv.values[0].1.abs() < 1e-14);
    }

    #[test]
    fn beta_oracle_thirds() {
        let w = WeightSystem::new(vec![rat(1, 3), rat(2, 3)]).unwrap();
        let cfg = Configuration::new_real(vec![0.0, 1.0]).unwrap();
        let pv = lauricella_periods(&w, &cfg, 32).unwrap();
        assert!((pv.values[0].0 - 2.0 * PI / 3.0f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn positivity_and_convergence() {
        let w = ws(&[3, 3, 3, 7], 12);
        let cfg = Configuration::new_real(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let pv = lauricella_periods(&w, &cfg, 64).unwrap();
        for &(re, im) in &pv.values {
            assert!(re > 0.0);
            assert!(im.abs() < 1e-12);
        }
        let (fr, fi) = pv.f_inf.unwrap();
        assert!(fr > 0.0 && fi.abs() < 1e-12);
        assert!(pv.est_error < 1e-10);
    }

    #[test]
    fn parabolic_pi_identity() {
        let w = WeightSystem::new(vec![rat(1, 4); 4]).unwrap();
        let cfg = Configuration::new_real(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let pv = lauricella_periods(&w, &cfg, 64).unwrap();
        let res = parabolic_residual(&w, &pv).unwrap();
        assert!(res < 1e-8, "residual {res}");
    }

    #[test]
    fn hyperbolic_closure_identity() {
        let w = ws(&[3, 3, 3, 7], 12);
        let cfg = Configuration::new_real(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let pv = lauricella_periods(&w, &cfg, 64).unwrap();
        let res = closure_residual(&w, &pv).unwrap();
        assert!(res < 1e-8, "residual {res}");
    }

    #[test]
    fn configuration_validation() {
        assert!(Configuration::new_real(vec![0.0, 0.0, 1.0]).is_err());
        assert!(Configuration::new_real(vec![1.0, 0.0]).is_err());
        assert!(Configuration::new(vec![
            Complex64::new(0.0, 0.4),
            Complex64::new(1.0, 0.0)
        ])
        .is_err());
        assert!(Configuration::new(vec![
            Complex64::new(0.0, 0.1),
            Complex64::new(1.0, -0.05)
        ])
        .is_ok());
    }

    #[test]
    fn schwarz_scaling_invariance() {
        let w = ws(&[3, 3, 3, 7], 12);
        let cfg = Configuration::new_real(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let pv = lauricella_periods(&w, &cfg, 64).unwrap();
        let p1 = schwarz_point(&w, &pv).unwrap();
        let mut scaled = pv.clone();
        for v in scaled.values.iter_mut() {
            let c = Complex64::new(v.0, v.1) * Complex64::new(-2.5, 1.75);
            *v = (c.re, c.im);
        }
        let p2 = schwarz_point(&w, &scaled).unwrap();
        for (a, b) in p1.projective.iter().zip(&p2.projective) {
            assert!((a.0 - b.0).abs() < 1e-10 && (a.1 - b.1).abs() < 1e-10);
        }
        assert!(p1.ball_radius.unwrap() < 1.0);
        let r1 = p1.ball_radius.unwrap();
        let r2 = p2.ball_radius.unwrap();
        assert!((r1 - r2).abs() < 1e-10);
    }
}
