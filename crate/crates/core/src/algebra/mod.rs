//! The bigraded invariant exterior algebra of a complex structure.

mod form;
mod presentation;
mod vector;

pub use form::{bidegree_basis, degree_basis, fmt_coeff, full_mask, subsets, Form, Monomial};
pub use presentation::{Presentation, Selector, ValidationCheck, ValidationReport};
pub use vector::{vector_basis, VectorForm, VectorMonomial};

use crate::exact::{Matrix, Scalar};

/// Matrix of a linear map on forms between two monomial bases.
///
/// Panics if an image has a term outside `target`.
pub fn matrix_of(source: &[Monomial], target: &[Monomial], n: usize, f: impl Fn(&Form) -> Form) -> Matrix {
    let cols: Vec<_> = source
        .iter()
        .map(|m| f(&Form::monomial(n, *m, Scalar::one())).coords(target).expect("image lies in the target basis"))
        .collect();
    Matrix::from_columns(target.len(), &cols)
}
