//! Level sets `E_g(lambda) = { |g(z)|^2 (1 - |z|^2) > lambda }` and their
//! hyperbolic measure `dxdy / (pi (1 - |z|^2)^2)`.
//!
//! Rays from the origin are scanned on a fixed radial grid; every sign change
//! of `Phi_g - lambda` is refined by a bracketed root solve. The radial part of
//! the measure is integrated exactly through the antiderivative `1/(1 - r^2)`,
//! leaving a one-dimensional angular quadrature.

use std::cell::RefCell;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};
use crate::functions::{AnalyticPolynomial, DiscFunction, PullbackFunction, RayRestriction};
use crate::quadrature::{
    bracketed_root, integrate_interval, integrate_interval_vec, maximize_on_disc, Integral, MaximizeConfig,
    QuadratureConfig,
};

/// Radial grid points per ray.
pub const RAY_GRID: usize = 2048;
/// Outermost grid radius.
pub const RAY_MAX: f64 = 1.0 - 1e-9;
const ROOT_TOL: f64 = 1e-13;
/// Random probes used to confirm that a normalized function peaks at 0.
pub const NORMALIZATION_PROBES: usize = 100;

#[inline]
fn one_minus_r2(r: f64) -> f64 {
    (1.0 - r) * (1.0 + r)
}

fn grid_radius(i: usize) -> f64 {
    RAY_MAX * i as f64 / (RAY_GRID - 1) as f64
}

/// `Phi_g(r dir) = |g(r dir)|^2 (1 - r^2)` along one ray, with the exact
/// boundary value 0 at `r = 1`.
struct Ray<'a, G> {
    g: &'a G,
    dir: Complex64,
    closed: Option<RayRestriction>,
}

impl<'a, G: DiscFunction> Ray<'a, G> {
    fn new(g: &'a G, dir: Complex64) -> Self {
        Self { g, dir, closed: g.ray_restriction(dir) }
    }

    #[inline]
    fn phi(&self, r: f64) -> f64 {
        if r >= 1.0 {
            return 0.0;
        }
        match &self.closed {
            Some(c) => c.invariant(r),
            None => self.g.value(self.dir * r).norm_sqr() * one_minus_r2(r),
        }
    }

    fn refine(&self, lambda: f64, lo: f64, hi: f64) -> f64 {
        bracketed_root(|r| self.phi(r) - lambda, lo, hi, ROOT_TOL).unwrap_or(0.5 * (lo + hi))
    }
}

/// `w` such that the weighted pullback of `f` by `phi_w` attains the maximum
/// of `Phi` at the origin, together with that maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct OriginNormalization {
    pub pullback: PullbackFunction,
    pub peak: f64,
}

impl OriginNormalization {
    pub fn w(&self) -> Complex64 {
        self.pullback.w()
    }
}

/// Moves the maximum of `|f|^2 (1 - |z|^2)` to the origin.
pub fn normalize_to_origin(f: &AnalyticPolynomial, cfg: &MaximizeConfig) -> Result<OriginNormalization> {
    if f.is_zero() {
        return Err(domain("cannot normalize the zero function"));
    }
    let max = maximize_on_disc(|z| f.invariant_quantity(z), cfg);
    if !(max.argmax.norm() < 1.0) || !(max.value > 0.0) {
        return Err(Error::Maximization(format!("maximizer at |w| = {} with value {}", max.argmax.norm(), max.value)));
    }
    let pullback = PullbackFunction::new(f.clone(), max.argmax)?;
    let peak = pullback.invariant_quantity(Complex64::new(0.0, 0.0));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    for _ in 0..NORMALIZATION_PROBES {
        let z = Complex64::from_polar(rng.gen::<f64>().sqrt(), std::f64::consts::TAU * rng.gen::<f64>());
        let v = pullback.invariant_quantity(z);
        if v > peak * (1.0 + 1e-9) {
            return Err(Error::Maximization(format!("Phi_g({z}) = {v} exceeds Phi_g(0) = {peak}")));
        }
    }
    Ok(OriginNormalization { pullback, peak })
}

/// Crossings of `Phi_g = lambda` along one ray, in increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct RayCrossings {
    pub theta: f64,
    /// Whether the origin lies in `E_g(lambda)`.
    pub starts_inside: bool,
    pub radii: Vec<f64>,
}

impl RayCrossings {
    /// Radial intervals of `E_g(lambda)` on this ray.
    pub fn slices(&self) -> Vec<(f64, f64)> {
        let mut edges = Vec::with_capacity(self.radii.len() + 1);
        if self.starts_inside {
            edges.push(0.0);
        }
        edges.extend_from_slice(&self.radii);
        edges.chunks_exact(2).map(|c| (c[0], c[1])).collect()
    }

    /// `int_{slices} 2r dr / (1 - r^2)^2`.
    pub fn hyperbolic_length(&self) -> f64 {
        self.slices().iter().map(|&(a, b)| 1.0 / one_minus_r2(b) - 1.0 / one_minus_r2(a)).sum()
    }

    /// Largest crossing radius.
    pub fn r_star(&self) -> Option<f64> {
        self.radii.last().copied()
    }
}

/// A function together with a level `lambda`.
#[derive(Debug, Clone)]
pub struct LevelSetProbe<G> {
    g: G,
    lambda: f64,
    phi_origin: f64,
}

impl<G: DiscFunction> LevelSetProbe<G> {
    pub fn new(g: G, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(domain(format!("level must be positive, got {lambda}")));
        }
        let phi_origin = g.invariant_quantity(Complex64::new(0.0, 0.0));
        Ok(Self { g, lambda, phi_origin })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn phi_origin(&self) -> f64 {
        self.phi_origin
    }

    pub fn function(&self) -> &G {
        &self.g
    }

    /// All crossings on the ray at angle `theta`.
    pub fn crossings(&self, theta: f64) -> RayCrossings {
        let ray = Ray::new(&self.g, Complex64::from_polar(1.0, theta));
        let scan: Vec<f64> = (0..RAY_GRID).map(|i| ray.phi(grid_radius(i)) - self.lambda).collect();
        crossings_from_scan(&ray, theta, self.lambda, &scan)
    }

    /// Largest crossing radius, scanning downward from the boundary.
    pub fn r_star(&self, theta: f64) -> Option<f64> {
        let ray = Ray::new(&self.g, Complex64::from_polar(1.0, theta));
        let mut upper = 1.0;
        for i in (0..RAY_GRID).rev() {
            let r = grid_radius(i);
            if ray.phi(r) > self.lambda {
                return Some(ray.refine(self.lambda, r, upper));
            }
            upper = r;
        }
        None
    }
}

fn crossings_from_scan<G: DiscFunction>(ray: &Ray<'_, G>, theta: f64, lambda: f64, scan: &[f64]) -> RayCrossings {
    let starts_inside = scan[0] > 0.0;
    let mut radii = Vec::new();
    let mut inside = starts_inside;
    for i in 1..=scan.len() {
        // Index scan.len() stands for r = 1, where Phi vanishes.
        let (r, d) = if i == scan.len() { (1.0, -lambda) } else { (grid_radius(i), scan[i]) };
        if (d > 0.0) != inside {
            radii.push(ray.refine(lambda, grid_radius(i - 1), r));
            inside = !inside;
        }
    }
    RayCrossings { theta, starts_inside, radii }
}

/// Largest crossing radius on the ray at `theta`; `None` when `Phi_g` stays at
/// or below `lambda` along it.
pub fn r_star<G: DiscFunction>(g: &G, theta: f64, lambda: f64) -> Result<Option<f64>> {
    Ok(LevelSetProbe::new(g, lambda)?.r_star(theta))
}

/// Angular pre-scan resolution used to look for crossing-pattern changes.
pub const ANGULAR_PRESCAN: usize = 64;
/// Smallest angular width to which a pattern change is located.
pub const BREAKPOINT_WIDTH: f64 = 1e-12;
const MAX_BREAKPOINTS: usize = 4096;

/// `Phi_g` on the radial grid of one ray.
struct RayScan<'a, G> {
    ray: Ray<'a, G>,
    phi: Vec<f64>,
}

impl<'a, G: DiscFunction> RayScan<'a, G> {
    fn new(g: &'a G) -> Self {
        Self { ray: Ray::new(g, Complex64::new(1.0, 0.0)), phi: vec![0.0; RAY_GRID] }
    }

    fn fill(&mut self, theta: f64) {
        self.ray = Ray::new(self.ray.g, Complex64::from_polar(1.0, theta));
        for (i, v) in self.phi.iter_mut().enumerate() {
            *v = self.ray.phi(grid_radius(i));
        }
    }

    fn at(&self, i: usize) -> f64 {
        self.phi.get(i).copied().unwrap_or(0.0)
    }

    /// Number of sign changes of `Phi - lambda` per level, for levels sorted
    /// ascending. The boundary point `r = 1` is included.
    fn crossing_counts(&self, sorted: &[f64], out: &mut [i64]) {
        out.iter_mut().for_each(|c| *c = 0);
        let mut diff = vec![0i64; sorted.len() + 1];
        for i in 0..RAY_GRID {
            let (a, b) = (self.at(i), self.at(i + 1));
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            // A crossing for lambda in [lo, hi).
            let s = sorted.partition_point(|&l| l < lo);
            let e = sorted.partition_point(|&l| l < hi);
            diff[s] += 1;
            diff[e] -= 1;
        }
        let mut run = 0;
        for (c, d) in out.iter_mut().zip(&diff) {
            run += d;
            *c = run;
        }
    }

    /// Outermost crossing radius per level, for levels sorted ascending.
    /// Evaluates the ray lazily from the boundary inward, so `fill` is not needed.
    fn outer_crossings(&mut self, theta: f64, sorted: &[f64], out: &mut [Option<f64>]) {
        self.ray = Ray::new(self.ray.g, Complex64::from_polar(1.0, theta));
        // The running maximum from the boundary passes the levels in ascending order.
        let mut k = 0;
        for i in (0..RAY_GRID).rev() {
            let v = self.ray.phi(grid_radius(i));
            self.phi[i] = v;
            while k < sorted.len() && v > sorted[k] {
                let hi = if i + 1 < RAY_GRID { grid_radius(i + 1) } else { 1.0 };
                out[k] = Some(self.ray.refine(sorted[k], grid_radius(i), hi));
                k += 1;
            }
            if k == sorted.len() {
                break;
            }
        }
        out[k..].iter_mut().for_each(|o| *o = None);
    }
}

fn sorted_levels(levels: &[f64]) -> Result<(Vec<f64>, Vec<usize>)> {
    if levels.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
        return Err(domain("levels must be positive"));
    }
    let mut order: Vec<usize> = (0..levels.len()).collect();
    order.sort_by(|&a, &b| levels[a].total_cmp(&levels[b]));
    Ok((order.iter().map(|&i| levels[i]).collect(), order))
}

/// Angles in `(0, 2 pi)` where the number of crossings of some level changes.
fn pattern_breakpoints<G: DiscFunction>(g: &G, sorted: &[f64], width: f64) -> Vec<f64> {
    let mut scan = RayScan::new(g);
    let mut pattern = |theta: f64| {
        scan.fill(theta);
        let mut c = vec![0; sorted.len()];
        scan.crossing_counts(sorted, &mut c);
        c
    };
    let h = TAU / ANGULAR_PRESCAN as f64;
    let first = pattern(0.0);
    let mut prev = (0.0, first.clone());
    let mut out = Vec::new();
    for j in 1..=ANGULAR_PRESCAN {
        let theta = j as f64 * h;
        let cur = if j == ANGULAR_PRESCAN { first.clone() } else { pattern(theta) };
        let mut stack = vec![(prev.0, prev.1.clone(), theta, cur.clone())];
        while let Some((a, pa, b, pb)) = stack.pop() {
            if pa == pb || out.len() >= MAX_BREAKPOINTS {
                continue;
            }
            if b - a <= width {
                out.push(0.5 * (a + b));
                continue;
            }
            let m = 0.5 * (a + b);
            let pm = pattern(m);
            stack.push((m, pm.clone(), b, pb));
            stack.push((a, pa, m, pm));
        }
        prev = (theta, cur);
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Mean over the circle of a per-ray quantity, split at the crossing-pattern
/// breakpoints of `levels`. Each piece is integrated through the smoothstep
/// substitution `theta = a + (b - a)(3 s^2 - 2 s^3)`, which absorbs the
/// square-root behaviour of crossings near tangency.
fn piecewise_ray_mean<G, F>(
    g: &G,
    levels: &[f64],
    dim: usize,
    cfg: &QuadratureConfig,
    mut per_ray: F,
) -> Result<Vec<Integral>>
where
    G: DiscFunction,
    F: FnMut(&mut RayScan<'_, G>, f64, &mut [f64]),
{
    cfg.validate()?;
    let (sorted, _) = sorted_levels(levels)?;
    let mut edges = vec![0.0];
    // Located far below node spacing, so no quadrature node lands on the wrong side.
    edges.extend(pattern_breakpoints(g, &sorted, BREAKPOINT_WIDTH));
    edges.push(TAU);

    let mut total = vec![Integral { value: 0.0, error: 0.0, subdivisions: 0, evaluations: 0 }; dim];
    let mut scan = RayScan::new(g);
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let frac = (b - a) / TAU;
        let piece_cfg = QuadratureConfig { abs_tol: cfg.abs_tol * frac, initial_panels: 1, ..*cfg };
        let parts = integrate_interval_vec(
            0.0,
            1.0,
            dim,
            |s, out: &mut [f64]| {
                let theta = a + (b - a) * s * s * (3.0 - 2.0 * s);
                let jac = frac * 6.0 * s * (1.0 - s);
                per_ray(&mut scan, theta, out);
                out.iter_mut().for_each(|v| *v *= jac);
            },
            None,
            0.0,
            &piece_cfg,
        )?;
        for (t, p) in total.iter_mut().zip(parts) {
            t.value += p.value;
            t.error += p.error;
            t.subdivisions += p.subdivisions;
            t.evaluations += p.evaluations;
        }
    }
    Ok(total)
}

/// Result of [`radial_levelset_integral`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialIntegral {
    pub value: f64,
    /// Whether some quadrature node hit a ray without a crossing (counted as 0).
    pub empty_rays: bool,
}

/// `mean_theta lambda / (1 - r*(theta)^2)`, i.e. the mean of `|g|^2` at the
/// outermost crossing of each ray.
pub fn radial_levelset_integral<G: DiscFunction>(g: &G, lambda: f64, cfg: &QuadratureConfig) -> Result<RadialIntegral> {
    LevelSetProbe::new(g, lambda)?;
    let mut empty = false;
    let mut r = [None];
    let v = piecewise_ray_mean(g, &[lambda], 1, cfg, |scan, theta, out| {
        scan.outer_crossings(theta, &[lambda], &mut r);
        out[0] = match r[0] {
            Some(r) => lambda / one_minus_r2(r),
            None => {
                empty = true;
                0.0
            }
        };
    })?;
    Ok(RadialIntegral { value: v[0].value, empty_rays: empty })
}

/// [`radial_levelset_integral`] for several levels at once, sharing ray scans
/// and angular nodes.
pub fn radial_levelset_integrals<G: DiscFunction>(g: &G, lambdas: &[f64], cfg: &QuadratureConfig) -> Result<Vec<f64>> {
    if lambdas.is_empty() {
        return Ok(Vec::new());
    }
    let (sorted, order) = sorted_levels(lambdas)?;
    let mut r = vec![None; sorted.len()];
    let v = piecewise_ray_mean(g, lambdas, sorted.len(), cfg, |scan, theta, out| {
        scan.outer_crossings(theta, &sorted, &mut r);
        for (o, (l, r)) in out.iter_mut().zip(sorted.iter().zip(&r)) {
            *o = r.map_or(0.0, |r| l / one_minus_r2(r));
        }
    })?;
    let mut values = vec![0.0; lambdas.len()];
    for (k, &i) in order.iter().enumerate() {
        values[i] = v[k].value;
    }
    Ok(values)
}

/// `mu(E_g(lambda))` for the hyperbolic measure, summing over every radial
/// slice of every ray.
pub fn levelset_measure<G: DiscFunction>(g: &G, lambda: f64, cfg: &QuadratureConfig) -> Result<f64> {
    LevelSetProbe::new(g, lambda)?;
    let mut shifted = vec![0.0; RAY_GRID];
    let v = piecewise_ray_mean(g, &[lambda], 1, cfg, |scan, theta, out| {
        scan.fill(theta);
        for (s, p) in shifted.iter_mut().zip(&scan.phi) {
            *s = p - lambda;
        }
        out[0] = crossings_from_scan(&scan.ray, 0.0, lambda, &shifted).hyperbolic_length();
    })?;
    Ok(v[0].value)
}

/// Weak-type margin `(1/lambda - 1) - mu(E_f(lambda))` for `||f||_{H^2} = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakTypeMargin {
    pub margin: f64,
    pub measure: f64,
    pub peak: f64,
}

pub fn weak_type_margin(f: &AnalyticPolynomial, lambda: f64, cfg: &QuadratureConfig) -> Result<WeakTypeMargin> {
    weak_type_margin_with(f, lambda, cfg, &MaximizeConfig::default())
}

pub fn weak_type_margin_with(
    f: &AnalyticPolynomial,
    lambda: f64,
    cfg: &QuadratureConfig,
    max_cfg: &MaximizeConfig,
) -> Result<WeakTypeMargin> {
    let n = f.l2_norm();
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::Precondition(format!("weak-type margin needs ||f||_H2 = 1, got {n}")));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(domain(format!("level must be positive, got {lambda}")));
    }
    let bound = 1.0 / lambda - 1.0;
    let norm = normalize_to_origin(f, max_cfg)?;
    if lambda >= norm.peak {
        return Ok(WeakTypeMargin { margin: bound, measure: 0.0, peak: norm.peak });
    }
    let measure = levelset_measure(&norm.pullback, lambda, cfg)?;
    Ok(WeakTypeMargin { margin: bound - measure, measure, peak: norm.peak })
}

/// `alpha (alpha - 1) int_0^{peak} lambda^{alpha-1} mu(E_g(lambda)) dlambda`,
/// the layer-cake form of `U_g(alpha)`.
pub fn distributional_u<G: DiscFunction>(g: &G, alpha: f64, peak: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(alpha > 1.0) || !(peak > 0.0) {
        return Err(domain("distributional U needs alpha > 1 and a positive peak"));
    }
    let inner = cfg.inner();
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let v = integrate_interval(
        0.0,
        peak,
        |lambda| {
            if failure.borrow().is_some() {
                return 0.0;
            }
            match levelset_measure(g, lambda, &inner) {
                Ok(m) => lambda.powf(alpha - 1.0) * m,
                Err(e) => {
                    *failure.borrow_mut() = Some(e);
                    0.0
                }
            }
        },
        cfg,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(alpha * (alpha - 1.0) * v?.value)
}
