//! Nelder-Mead downhill simplex over a fixed-size parameter vector.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Edge length of the initial simplex along each axis.
    pub initial_step: f64,
    pub max_evaluations: usize,
    /// Stop once the spread of objective values falls below this.
    pub f_tolerance: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.1,
            max_evaluations: 10_000,
            f_tolerance: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SimplexResult<const N: usize> {
    pub x: [f64; N],
    pub f: f64,
    pub evaluations: usize,
    /// The stop predicate was satisfied.
    pub hit_target: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f` from `start`, returning early once `stop(f(x))` holds.
///
/// Non-finite objective values are treated as `+inf`.
pub fn minimize<const N: usize>(
    mut f: impl FnMut(&[f64; N]) -> f64,
    start: [f64; N],
    options: &SimplexOptions,
    mut stop: impl FnMut(f64) -> bool,
) -> SimplexResult<N> {
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64; N], evaluations: &mut usize| {
        *evaluations += 1;
        let y = f(x);
        if y.is_finite() {
            y
        } else {
            f64::INFINITY
        }
    };

    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    let f0 = eval(&start, &mut evaluations);
    simplex.push((start, f0));
    if stop(f0) {
        return SimplexResult { x: start, f: f0, evaluations, hit_target: true };
    }
    for i in 0..N {
        let mut x = start;
        x[i] += options.initial_step;
        let y = eval(&x, &mut evaluations);
        if stop(y) {
            return SimplexResult { x, f: y, evaluations, hit_target: true };
        }
        simplex.push((x, y));
    }

    let mut done = |x: [f64; N], y: f64, evaluations: usize| -> Option<SimplexResult<N>> {
        stop(y).then_some(SimplexResult { x, f: y, evaluations, hit_target: true })
    };

    while evaluations < options.max_evaluations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[N].1;
        if (worst - best).abs() <= options.f_tolerance {
            break;
        }

        let mut centroid = [0.0; N];
        for (x, _) in &simplex[..N] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / N as f64;
            }
        }
        let along = |t: f64| -> [f64; N] {
            let mut out = [0.0; N];
            for i in 0..N {
                out[i] = centroid[i] + t * (simplex[N].0[i] - centroid[i]);
            }
            out
        };

        let xr = along(-REFLECT);
        let fr = eval(&xr, &mut evaluations);
        if let Some(r) = done(xr, fr, evaluations) {
            return r;
        }
        if fr < best {
            let xe = along(-EXPAND);
            let fe = eval(&xe, &mut evaluations);
            if let Some(r) = done(xe, fe, evaluations) {
                return r;
            }
            simplex[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[N - 1].1 {
            simplex[N] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst {
            let xc = along(-CONTRACT);
            (xc, eval(&xc, &mut evaluations))
        } else {
            let xc = along(CONTRACT);
            (xc, eval(&xc, &mut evaluations))
        };
        if let Some(r) = done(xc, fc, evaluations) {
            return r;
        }
        if fc < worst.min(fr) {
            simplex[N] = (xc, fc);
            continue;
        }
        let x0 = simplex[0].0;
        for vertex in simplex.iter_mut().skip(1) {
            for (x, &o) in vertex.0.iter_mut().zip(&x0) {
                *x = o + SHRINK * (*x - o);
            }
            vertex.1 = eval(&vertex.0, &mut evaluations);
            if let Some(r) = done(vertex.0, vertex.1, evaluations) {
                return r;
            }
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    SimplexResult {
        x: simplex[0].0,
        f: simplex[0].1,
        evaluations,
        hit_target: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let r = minimize(
            |x: &[f64; 2]| (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2),
            [0.0, 0.0],
            &SimplexOptions::default(),
            |_| false,
        );
        assert!((r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] + 2.0).abs() < 1e-5, "{:?}", r.x);
        assert!(!r.hit_target);
    }

    #[test]
    fn rosenbrock() {
        let opts = SimplexOptions { initial_step: 0.5, max_evaluations: 20_000, f_tolerance: 1e-16 };
        let r = minimize(
            |x: &[f64; 2]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            [-1.2, 1.0],
            &opts,
            |_| false,
        );
        assert!(r.f < 1e-8, "{}", r.f);
    }

    #[test]
    fn stops_at_target() {
        let r = minimize(|x: &[f64; 1]| x[0] * x[0] - 1.0, [3.0], &SimplexOptions::default(), |y| y < 0.0);
        assert!(r.hit_target);
        assert!(r.f < 0.0);
    }

    #[test]
    fn respects_budget() {
        let opts = SimplexOptions { max_evaluations: 50, ..Default::default() };
        let r = minimize(|x: &[f64; 3]| x.iter().map(|v| v.abs()).sum::<f64>(), [5.0, 5.0, 5.0], &opts, |_| false);
        // one iteration may overrun by at most N + 1 evaluations
        assert!(r.evaluations <= 50 + 4);
    }

    #[test]
    fn non_finite_values_are_avoided() {
        let r = minimize(
            |x: &[f64; 1]| if x[0] > 0.5 { f64::NAN } else { (x[0] - 0.2).powi(2) },
            [0.0],
            &SimplexOptions::default(),
            |_| false,
        );
        assert!((r.x[0] - 0.2).abs() < 1e-5);
    }
}
