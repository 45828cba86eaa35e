use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Settings for [`maximize_on_disc`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximizeConfig {
    pub radial_points: usize,
    pub angular_points: usize,
    /// Best grid cells used as local-search seeds.
    pub grid_seeds: usize,
    /// Additional random starting points.
    pub restarts: usize,
    pub step_tol: f64,
    pub seed: u64,
}

impl Default for MaximizeConfig {
    fn default() -> Self {
        Self { radial_points: 256, angular_points: 256, grid_seeds: 4, restarts: 8, step_tol: 1e-10, seed: 0x5eed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscMaximum {
    pub argmax: Complex64,
    pub value: f64,
}

/// Pattern search on the plane: probes `x +- step e_i`, moves on improvement,
/// halves the step otherwise, until the step drops below `step_tol`.
/// Maximizes `objective`; points it rejects should map to `-inf`.
pub fn compass_search<F>(
    objective: &mut F,
    start: [f64; 2],
    start_value: f64,
    step: f64,
    step_tol: f64,
) -> ([f64; 2], f64)
where
    F: FnMut([f64; 2]) -> f64,
{
    const DIRS: [[f64; 2]; 4] = [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]];
    let (mut x, mut fx, mut h) = (start, start_value, step);
    let mut budget = 20_000usize;
    while h >= step_tol && budget > 0 {
        let mut best = None;
        for d in DIRS {
            let y = [x[0] + h * d[0], x[1] + h * d[1]];
            let fy = objective(y);
            budget = budget.saturating_sub(1);
            if fy > best.map_or(fx, |(_, v)| v) {
                best = Some((y, fy));
            }
        }
        match best {
            Some((y, fy)) => {
                x = y;
                fx = fy;
            }
            None => h *= 0.5,
        }
    }
    (x, fx)
}

/// Global maximum of a continuous function on the closed unit disc: polar
/// grid scan, then compass refinement from the best grid cells and from
/// `restarts` seeded random points.
pub fn maximize_on_disc<F>(mut objective: F, cfg: &MaximizeConfig) -> DiscMaximum
where
    F: FnMut(Complex64) -> f64,
{
    let mut eval = |p: [f64; 2]| -> f64 {
        let z = Complex64::new(p[0], p[1]);
        if z.norm_sqr() > 1.0 {
            return f64::NEG_INFINITY;
        }
        let v = objective(z);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };

    let nr = cfg.radial_points.max(1);
    let nt = cfg.angular_points.max(1);
    let mut grid: Vec<([f64; 2], f64)> = Vec::with_capacity(nr * nt + 1);
    grid.push(([0.0, 0.0], eval([0.0, 0.0])));
    for i in 0..nr {
        let r = (i as f64 + 0.5) / nr as f64;
        for j in 0..nt {
            let th = TAU * j as f64 / nt as f64;
            let p = [r * th.cos(), r * th.sin()];
            grid.push((p, eval(p)));
        }
    }
    // Stable sort keeps the selection deterministic under ties.
    grid.sort_by(|a, b| b.1.total_cmp(&a.1));

    let step = 1.0 / nr as f64;
    let mut starts: Vec<([f64; 2], f64)> = grid.iter().take(cfg.grid_seeds.max(1)).copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.restarts {
        let r = rng.gen::<f64>().sqrt();
        let th = TAU * rng.gen::<f64>();
        let p = [r * th.cos(), r * th.sin()];
        starts.push((p, eval(p)));
    }

    let mut best = starts[0];
    for (p, v) in starts {
        let (x, fx) = compass_search(&mut eval, p, v, step, cfg.step_tol);
        if fx > best.1 {
            best = (x, fx);
        }
    }
    DiscMaximum { argmax: Complex64::new(best.0[0], best.0[1]), value: best.1 }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Minimizes `f` with the standard Nelder–Mead simplex (reflection 1,
/// expansion 2, contraction 1/2, shrink 1/2). Stops after `max_evals`
/// evaluations or when the spread of simplex values drops below `ftol`.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], step: f64, max_evals: usize, ftol: f64) -> NelderMeadResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evals = 0usize;
    let mut call = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = call(x0, &mut evals);
    simplex.push((x0.to_vec(), v0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = call(&x, &mut evals);
        simplex.push((x, v));
    }

    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (lo, hi) = (simplex[0].1, simplex[n].1);
        if (hi - lo).abs() <= ftol * (lo.abs() + hi.abs()).max(1e-300) || (hi - lo).abs() < 1e-300 {
            break;
        }
        let centroid: Vec<f64> = (0..n).map(|j| simplex[..n].iter().map(|p| p.0[j]).sum::<f64>() / n as f64).collect();
        let worst = simplex[n].0.clone();
        let along = |t: f64| -> Vec<f64> { (0..n).map(|j| centroid[j] + t * (worst[j] - centroid[j])).collect() };

        let xr = along(-1.0);
        let fr = call(&xr, &mut evals);
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = call(&xe, &mut evals);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < simplex[n].1 {
            let xc = along(-0.5);
            let fc = call(&xc, &mut evals);
            (xc, fc)
        } else {
            let xc = along(0.5);
            let fc = call(&xc, &mut evals);
            (xc, fc)
        };
        if fc < simplex[n].1.min(fr) {
            simplex[n] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for p in simplex.iter_mut().skip(1) {
            for (x, b) in p.0.iter_mut().zip(&best) {
                *x = b + 0.5 * (*x - b);
            }
            p.1 = call(&p.0, &mut evals);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    NelderMeadResult { x, value, evaluations: evals }
}
