//! Nelder–Mead simplex minimization in two dimensions.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub max_iter: usize,
    /// Stop when the spread of objective values over the simplex is below
    /// `f_tol * (1 + |f_best|)` and every vertex is within `x_tol` of the best.
    pub f_tol: f64,
    pub x_tol: f64,
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            max_iter: 500,
            f_tol: 1e-10,
            x_tol: 1e-7,
            initial_step: 0.5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexOutcome {
    pub x: [f64; 2],
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Best objective value after each iteration.
    pub history: Vec<f64>,
}

type Point = [f64; 2];

fn lerp(a: Point, b: Point, t: f64) -> Point {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

/// Minimizes `f` from `x0`. `project` maps any trial point into the
/// feasible box and is applied before every evaluation.
pub fn nelder_mead<F, P>(f: F, project: P, x0: Point, opts: &SimplexOptions) -> SimplexOutcome
where
    F: Fn(Point) -> f64,
    P: Fn(Point) -> Point,
{
    let eval = |p: Point| {
        let v = f(p);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let s = opts.initial_step;
    let mut pts: Vec<(Point, f64)> = [x0, [x0[0] + s, x0[1]], [x0[0], x0[1] + s]]
        .into_iter()
        .map(|p| {
            let p = project(p);
            (p, eval(p))
        })
        .collect();
    let mut history = Vec::new();
    for it in 0..opts.max_iter {
        pts.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (pts[0], pts[2]);
        let spread = (worst.1 - best.1).abs();
        let size = pts[1..]
            .iter()
            .map(|(p, _)| (p[0] - best.0[0]).abs().max((p[1] - best.0[1]).abs()))
            .fold(0.0, f64::max);
        if best.1.is_finite() && spread <= opts.f_tol * (1.0 + best.1.abs()) && size <= opts.x_tol {
            return SimplexOutcome {
                x: best.0,
                f: best.1,
                iterations: it,
                converged: true,
                history,
            };
        }
        let centroid = lerp(pts[0].0, pts[1].0, 0.5);
        let reflect = project(lerp(centroid, worst.0, -1.0));
        let fr = eval(reflect);
        if fr < best.1 {
            let expand = project(lerp(centroid, worst.0, -2.0));
            let fe = eval(expand);
            pts[2] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < pts[1].1 {
            pts[2] = (reflect, fr);
        } else {
            let (target, ft) = if fr < worst.1 { (reflect, fr) } else { worst };
            let contract = project(lerp(centroid, target, 0.5));
            let fc = eval(contract);
            if fc < ft {
                pts[2] = (contract, fc);
            } else {
                for v in &mut pts[1..] {
                    let p = project(lerp(best.0, v.0, 0.5));
                    *v = (p, eval(p));
                }
            }
        }
        let current = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        history.push(current);
    }
    pts.sort_by(|a, b| a.1.total_cmp(&b.1));
    SimplexOutcome {
        x: pts[0].0,
        f: pts[0].1,
        iterations: opts.max_iter,
        converged: false,
        history,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |p: Point| (1.0 - p[0]).powi(2) + 100.0 * (p[1] - p[0] * p[0]).powi(2);
        let opts = SimplexOptions {
            max_iter: 5000,
            f_tol: 1e-14,
            x_tol: 1e-9,
            initial_step: 0.5,
        };
        let out = nelder_mead(f, |p| p, [-1.2, 1.0], &opts);
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-4 && (out.x[1] - 1.0).abs() < 1e-4, "{:?}", out.x);
        assert!(out.history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn projection_holds_the_bound() {
        let f = |p: Point| (p[0] - 5.0).powi(2) + p[1] * p[1];
        let out = nelder_mead(f, |p| [p[0].min(2.0), p[1]], [0.0, 1.0], &SimplexOptions::default());
        assert!((out.x[0] - 2.0).abs() < 1e-6);
        assert!(out.x[1].abs() < 1e-3);
    }

    #[test]
    fn iteration_cap() {
        let f = |p: Point| p[0] * p[0] + p[1] * p[1];
        let opts = SimplexOptions {
            max_iter: 3,
            ..SimplexOptions::default()
        };
        let out = nelder_mead(f, |p| p, [4.0, 4.0], &opts);
        assert!(!out.converged);
        assert_eq!(out.history.len(), 3);
    }
}
