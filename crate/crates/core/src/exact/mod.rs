//! Exact scalar arithmetic and linear algebra.

mod matrix;
mod scalar;

pub use matrix::{
    axpy, check_positive_definite, combine, dot, is_zero_vector, min_norm_solution, project_orthogonal, rref_basis,
    same_span, solve_affine, span_rank, zero_vector, AffineSolution, Echelon, GramForm, InfeasibilityCertificate,
    Matrix, Solve, Vector,
};
pub use scalar::Scalar;

/// A constructed object, or a certificate that the defining linear system has no solution.
#[derive(Clone, Debug, PartialEq)]
pub enum Feasibility<T> {
    Found(T),
    Infeasible(InfeasibilityCertificate),
}

impl<T> Feasibility<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Feasibility::Found(t) => Some(t),
            Feasibility::Infeasible(_) => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Feasibility::Found(_))
    }
}
