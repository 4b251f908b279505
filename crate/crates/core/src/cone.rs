//! Membership in the positive linear cone of a finite set of vectors.

use microlp::{ComparisonOp, OptimizationDirection, Problem};

use crate::linalg::Vector;

/// Decides whether `v = sum c_a a` with every `c_a >= 0` and some `c_a > 0`.
///
/// Solved as a phase-1 problem: minimise the total slack needed to reach `v`
/// from the cone; `v` is a member when that slack is at most `eps` (scaled by
/// `max(1, |v|)`). For `v = 0` the coefficients are normalised to sum to one,
/// so membership means a nontrivial nonnegative dependency among the generators.
pub fn cone_membership(generators: &[Vector], v: &Vector, eps: f64) -> bool {
    if generators.is_empty() {
        return false;
    }
    let dim = v.len();
    debug_assert!(generators.iter().all(|g| g.len() == dim));
    let scale = v.amax().max(1.0);
    let is_zero = v.amax() <= eps;

    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let coeffs: Vec<_> = generators
        .iter()
        .map(|_| problem.add_var(0.0, (0.0, f64::INFINITY)))
        .collect();
    for i in 0..dim {
        let plus = problem.add_var(1.0, (0.0, f64::INFINITY));
        let minus = problem.add_var(1.0, (0.0, f64::INFINITY));
        let mut terms: Vec<_> = coeffs
            .iter()
            .zip(generators)
            .filter(|(_, g)| g[i] != 0.0)
            .map(|(&c, g)| (c, g[i]))
            .collect();
        terms.push((plus, 1.0));
        terms.push((minus, -1.0));
        let rhs = if is_zero { 0.0 } else { v[i] };
        problem.add_constraint(terms.as_slice(), ComparisonOp::Eq, rhs);
    }
    if is_zero {
        let terms: Vec<_> = coeffs.iter().map(|&c| (c, 1.0)).collect();
        problem.add_constraint(terms.as_slice(), ComparisonOp::Eq, 1.0);
    }
    match problem.solve().map(|outcome| outcome.into_solution()) {
        Ok(Ok(solution)) => solution.objective() <= eps * scale,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn basic_membership() {
        let gens = [v(&[1.0, 0.0]), v(&[0.0, 1.0])];
        assert!(cone_membership(&gens, &v(&[1.0, 1.0]), 1e-9));
        assert!(!cone_membership(&gens, &v(&[1.0, -1.0]), 1e-9));
        assert!(!cone_membership(&gens, &v(&[0.0, 0.0]), 1e-9));
        assert!(cone_membership(&gens, &v(&[0.0, 3.0]), 1e-9));
    }

    #[test]
    fn dependent_generators() {
        // -e1 = 0 e1 + 1 e2 + 1 (-e1 - e2)
        let gens = [v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[-1.0, -1.0])];
        assert!(cone_membership(&gens, &v(&[-1.0, 0.0]), 1e-9));
        assert!(cone_membership(&gens, &v(&[0.0, 0.0]), 1e-9));
    }

    #[test]
    fn tolerance_is_respected() {
        let gens = [v(&[1.0, 0.0]), v(&[0.0, 1.0])];
        assert!(cone_membership(&gens, &v(&[1.0, -1e-12]), 1e-9));
        assert!(!cone_membership(&gens, &v(&[1.0, -1e-6]), 1e-9));
    }
}
