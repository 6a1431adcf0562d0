//! Nelder–Mead downhill simplex, maximizing.

use crate::scalar::Real;

#[derive(Clone, Debug)]
pub struct SimplexOutcome<T> {
    pub x: Vec<T>,
    pub value: T,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Maximizes `f` starting from a regular-ish simplex of edge `step` around
/// `x0`. Stops when every vertex lies within `tol` (max-norm) of the best one
/// and the value spread is below `tol`, or after `max_iters` iterations.
pub fn maximize<T: Real>(
    mut f: impl FnMut(&[T]) -> T,
    x0: &[T],
    step: T,
    max_iters: usize,
    tol: T,
) -> SimplexOutcome<T> {
    let dim = x0.len();
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let mut evaluations = 0;
    let mut eval = |x: &[T], evaluations: &mut usize| {
        *evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            T::neg_infinity()
        } else {
            v
        }
    };

    let mut vertices: Vec<Vec<T>> = Vec::with_capacity(dim + 1);
    vertices.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += step;
        vertices.push(v);
    }
    let mut values: Vec<T> = vertices.iter().map(|v| eval(v, &mut evaluations)).collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iters {
        // Best first.
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| {
            values[b]
                .partial_cmp(&values[a])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        vertices = order.iter().map(|&i| vertices[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let diameter = vertices[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&vertices[0]).map(|(a, b)| (*a - *b).abs()))
            .fold(T::zero(), T::max);
        let spread = values[0] - values[dim];
        if diameter <= tol && spread <= tol {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid: Vec<T> = (0..dim)
            .map(|j| vertices[..dim].iter().map(|v| v[j]).sum::<T>() / T::lit(dim as f64))
            .collect();
        let along = |coef: T| -> Vec<T> {
            centroid
                .iter()
                .zip(&vertices[dim])
                .map(|(c, w)| *c + coef * (*c - *w))
                .collect()
        };

        let reflected = along(T::one());
        let fr = eval(&reflected, &mut evaluations);
        if fr > values[0] {
            let expanded = along(two);
            let fe = eval(&expanded, &mut evaluations);
            if fe > fr {
                vertices[dim] = expanded;
                values[dim] = fe;
            } else {
                vertices[dim] = reflected;
                values[dim] = fr;
            }
            continue;
        }
        if fr > values[dim - 1] {
            vertices[dim] = reflected;
            values[dim] = fr;
            continue;
        }
        let (candidate, threshold) = if fr > values[dim] {
            (along(half), fr)
        } else {
            (along(-half), values[dim])
        };
        let fc = eval(&candidate, &mut evaluations);
        if fc > threshold {
            vertices[dim] = candidate;
            values[dim] = fc;
            continue;
        }
        let best = vertices[0].clone();
        for i in 1..=dim {
            vertices[i] = best
                .iter()
                .zip(&vertices[i])
                .map(|(b, v)| *b + half * (*v - *b))
                .collect();
            values[i] = eval(&vertices[i], &mut evaluations);
        }
    }

    let best = (0..=dim)
        .max_by(|&a, &b| {
            values[a]
                .partial_cmp(&values[b])
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or(0);
    SimplexOutcome {
        x: vertices[best].clone(),
        value: values[best],
        iterations,
        evaluations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concave_quadratic() {
        let out = maximize(
            |x: &[f64]| -(x[0] - 1.0).powi(2) - 3.0 * (x[1] + 2.0).powi(2) + 5.0,
            &[0.0, 0.0],
            0.5,
            500,
            1e-10,
        );
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-8 && (out.x[1] + 2.0).abs() < 1e-8);
        assert!((out.value - 5.0).abs() < 1e-14);
    }

    #[test]
    fn rosenbrock() {
        let out = maximize(
            |x: &[f64]| -((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)),
            &[-1.2, 1.0],
            0.1,
            5000,
            1e-12,
        );
        assert!((out.x[0] - 1.0).abs() < 1e-5 && (out.x[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let out = maximize(|x: &[f64]| -x[0] * x[0], &[10.0], 0.1, 3, 1e-14);
        assert!(!out.converged);
        assert_eq!(out.iterations, 3);
    }
}
