use log::warn;
use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::graph::Graph;
use crate::rng::SeededRng;

/// Above this many vertices the spectrum is estimated by power iteration.
pub const DENSE_EIGEN_LIMIT: usize = 4000;

const POWER_TOLERANCE: f64 = 1e-6;
const POWER_MAX_ITERATIONS: usize = 20_000;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralProfile {
    pub n: usize,
    /// Exact degree for regular graphs, average degree otherwise.
    pub d: f64,
    /// `max(lambda_2, |lambda_n|)` of the adjacency matrix.
    pub lambda: f64,
    pub ratio: f64,
    pub regular: bool,
}

pub fn spectral_profile(g: &Graph) -> SpectralProfile {
    let n = g.n();
    let regular = g.regular_degree().is_some();
    let d = g.average_degree();
    let lambda = if n <= 1 {
        0.0
    } else if n <= DENSE_EIGEN_LIMIT {
        dense_lambda(g)
    } else {
        if !regular {
            warn!("graph is not regular; deflating an estimated principal vector");
        }
        power_lambda(g, regular)
    };
    SpectralProfile {
        n,
        d,
        lambda,
        ratio: if lambda > 0.0 { d / lambda } else { f64::INFINITY },
        regular,
    }
}

fn dense_lambda(g: &Graph) -> f64 {
    let n = g.n();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for (u, v) in g.edges() {
        a[(u, v)] = 1.0;
        a[(v, u)] = 1.0;
    }
    let mut eig: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    eig[1].max(eig[n - 1].abs())
}

fn apply(g: &Graph, x: &DVector<f64>, y: &mut DVector<f64>) {
    for v in 0..g.n() {
        y[v] = g.neighbors(v).iter().map(|&w| x[w]).sum();
    }
}

fn project_out(x: &mut DVector<f64>, unit: &DVector<f64>) {
    let c = x.dot(unit);
    x.axpy(-c, unit, 1.0);
}

fn power_lambda(g: &Graph, regular: bool) -> f64 {
    let n = g.n();
    let mut rng = SeededRng::new(0x5eed);
    let principal = if regular {
        DVector::from_element(n, 1.0 / (n as f64).sqrt())
    } else {
        principal_vector(g)
    };
    let mut x = DVector::from_fn(n, |_, _| rng.random::<f64>() - 0.5);
    let mut y = DVector::zeros(n);
    project_out(&mut x, &principal);
    x.normalize_mut();
    let mut estimate = 0.0;
    for _ in 0..POWER_MAX_ITERATIONS {
        apply(g, &x, &mut y);
        project_out(&mut y, &principal);
        let norm = y.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let converged = (norm - estimate).abs() <= POWER_TOLERANCE * norm;
        estimate = norm;
        std::mem::swap(&mut x, &mut y);
        x.unscale_mut(norm);
        if converged {
            return estimate;
        }
    }
    warn!("power iteration did not converge; returning last estimate {estimate}");
    estimate
}

/// Principal eigenvector via power iteration on `A + Delta I`, started from
/// the degree vector.
fn principal_vector(g: &Graph) -> DVector<f64> {
    let shift = g.max_degree() as f64;
    let mut x = DVector::from_fn(g.n(), |v, _| g.degree(v) as f64 + 1.0);
    x.normalize_mut();
    let mut y = DVector::zeros(g.n());
    let mut estimate = 0.0;
    for _ in 0..POWER_MAX_ITERATIONS {
        apply(g, &x, &mut y);
        y.axpy(shift, &x, 1.0);
        let norm = y.norm();
        std::mem::swap(&mut x, &mut y);
        x.unscale_mut(norm);
        if (norm - estimate).abs() <= POWER_TOLERANCE * 1e-3 * norm {
            break;
        }
        estimate = norm;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_random_regular;

    #[test]
    fn complete_graph() {
        let p = spectral_profile(&Graph::complete(4));
        assert!((p.lambda - 1.0).abs() < 1e-9);
        assert!((p.ratio - 3.0).abs() < 1e-9);
    }

    #[test]
    fn hexagon() {
        let p = spectral_profile(&Graph::cycle(6));
        assert!((p.lambda - 2.0).abs() < 1e-9);
    }

    #[test]
    fn power_iteration_agrees_with_eigensolve() {
        let g = gen_random_regular(300, 6, &mut SeededRng::new(11)).unwrap();
        let exact = dense_lambda(&g);
        let approx = power_lambda(&g, true);
        assert!((exact - approx).abs() < 1e-3 * exact, "{exact} vs {approx}");
    }

    #[test]
    fn power_iteration_irregular() {
        let mut edges: Vec<_> = Graph::cycle(40).edges().collect();
        edges.extend([(0, 20), (5, 25), (3, 17)]);
        let g = Graph::from_edges(40, edges).unwrap();
        let exact = dense_lambda(&g);
        let approx = power_lambda(&g, false);
        assert!((exact - approx).abs() < 1e-2 * exact, "{exact} vs {approx}");
    }
}
