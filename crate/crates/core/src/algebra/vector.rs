//! `T^{1,0}`-valued `(0,q)`-forms `θ = Σ θ^i_J φ̄^J ⊗ Z_i` and their contraction with forms.

use std::collections::BTreeMap;
use std::fmt;

use super::form::{fmt_coeff, subsets, Form, Monomial};
use super::presentation::{Presentation, Selector};
use crate::error::{Error, Result};
use crate::exact::{Matrix, Scalar};

/// A basis element `φ̄^J ⊗ Z_{index+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VectorMonomial {
    pub index: usize,
    pub anti: u16,
}

impl fmt::Display for VectorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*Z{}", Monomial::new(0, self.anti), self.index + 1)
    }
}

/// Basis of `(0,q)` vector forms: vector index major, then `J` lexicographic.
pub fn vector_basis(n: usize, q: usize) -> Vec<VectorMonomial> {
    let anti = subsets(n, q);
    (0..n).flat_map(|index| anti.iter().map(move |&a| VectorMonomial { index, anti: a })).collect()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VectorForm {
    n: usize,
    q: usize,
    terms: BTreeMap<VectorMonomial, Scalar>,
}

impl VectorForm {
    pub fn zero(n: usize, q: usize) -> Self {
        VectorForm { n, q, terms: BTreeMap::new() }
    }

    /// `c · φ̄^J ⊗ Z_i` with 1-based `i` and `J`.
    pub fn term(n: usize, i: usize, anti: &[usize], c: Scalar) -> Self {
        let m = Monomial::from_indices(&[], anti).expect("repeated index");
        let mut v = VectorForm::zero(n, anti.len());
        v.add_term(VectorMonomial { index: i - 1, anti: m.anti }, c);
        v
    }

    pub fn from_terms(n: usize, q: usize, terms: impl IntoIterator<Item = (VectorMonomial, Scalar)>) -> Self {
        let mut v = VectorForm::zero(n, q);
        for (m, c) in terms {
            v.add_term(m, c);
        }
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&VectorMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &VectorMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: VectorMonomial, c: Scalar) {
        assert_eq!(m.anti.count_ones() as usize, self.q, "vector monomial of the wrong degree");
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &VectorForm) -> VectorForm {
        assert_eq!((self.n, self.q), (o.n, o.q), "vector forms of different type");
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> VectorForm {
        VectorForm::from_terms(self.n, self.q, self.terms.iter().map(|(m, v)| (*m, v * c)))
    }

    pub fn sub(&self, o: &VectorForm) -> VectorForm {
        self.add(&o.scale(&-Scalar::one()))
    }

    pub fn coords(&self, basis: &[VectorMonomial]) -> Option<Vec<Scalar>> {
        let out: Vec<Scalar> = basis.iter().map(|m| self.coeff(m)).collect();
        let found = basis.iter().filter(|m| self.terms.contains_key(m)).count();
        (found == self.terms.len()).then_some(out)
    }

    pub fn from_coords(n: usize, q: usize, basis: &[VectorMonomial], coords: &[Scalar]) -> VectorForm {
        VectorForm::from_terms(n, q, basis.iter().copied().zip(coords.iter().cloned()))
    }

    /// `θ⌟u`: interior product by `Z_i` followed by left wedge with `φ̄^J`.
    pub fn contract(&self, u: &Form) -> Form {
        assert_eq!(self.n, u.n(), "contraction across coframes");
        let mut out = Form::zero(self.n);
        for (vm, c) in &self.terms {
            let bit = 1u16 << vm.index;
            let left = Monomial::new(0, vm.anti);
            for (m, a) in u.terms() {
                if m.hol & bit == 0 {
                    continue;
                }
                let interior_neg = (m.hol & (bit - 1)).count_ones() % 2 == 1;
                let rest = Monomial::new(m.hol & !bit, m.anti);
                let Some((wedge_neg, mono)) = left.wedge(&rest) else { continue };
                let coeff = c * a;
                out.add_term(mono, if interior_neg != wedge_neg { -coeff } else { coeff });
            }
        }
        out
    }
}

impl fmt::Display for VectorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{}*{m}", fmt_coeff(c))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for VectorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Presentation {
    /// `∂̄ Z_i = Σ_j φ̄^j ⊗ pr^{1,0}[Z̄_j, Z_i]` where `pr^{1,0}[Z̄_j, Z_i] = Σ_k c^k_{i j̄} Z_k`
    /// and `c^k_{i j̄}` is the coefficient of `φ^i ∧ φ̄^j` in `dφ^k`.
    pub fn delbar_frame(&self, i: usize) -> VectorForm {
        let n = self.n();
        let mut out = VectorForm::zero(n, 1);
        for (k, dk) in self.dtable().iter().enumerate() {
            for (m, c) in dk.terms() {
                if m.bidegree() == (1, 1) && m.hol == 1 << i {
                    out.add_term(VectorMonomial { index: k, anti: m.anti }, c.clone());
                }
            }
        }
        out
    }

    /// `∂̄θ := Σ ∂̄(θ^i_J φ̄^J) ⊗ Z_i + (-1)^q Σ θ^i_J φ̄^J ∧ ∂̄Z_i`.
    pub fn delbar_vector(&self, theta: &VectorForm) -> VectorForm {
        let n = self.n();
        let q = theta.q();
        let mut out = VectorForm::zero(n, q + 1);
        if q >= n {
            return out;
        }
        for (vm, c) in theta.terms() {
            let coeff_form = Form::monomial(n, Monomial::new(0, vm.anti), c.clone());
            for (m, a) in self.delbar(&coeff_form).terms() {
                out.add_term(VectorMonomial { index: vm.index, anti: m.anti }, a.clone());
            }
            let frame = self.delbar_frame(vm.index);
            for (fm, b) in frame.terms() {
                let Some((neg, mono)) = Monomial::new(0, vm.anti).wedge(&Monomial::new(0, fm.anti)) else { continue };
                let mut v = c * b;
                if neg != (q % 2 == 1) {
                    v = -v;
                }
                out.add_term(VectorMonomial { index: fm.index, anti: mono.anti }, v);
            }
        }
        out
    }

    /// Only `∂̄` is defined on vector-valued forms.
    pub fn differential_vector(&self, theta: &VectorForm, selector: Selector) -> Result<VectorForm> {
        match selector {
            Selector::Delbar => Ok(self.delbar_vector(theta)),
            other => Err(Error::Unsupported(format!("`{other}` on T^(1,0)-valued forms; only delbar is defined"))),
        }
    }

    /// Matrix of `∂̄` from `(0,q)` to `(0,q+1)` vector forms.
    pub fn vector_delbar_matrix(&self, q: usize) -> Matrix {
        let n = self.n();
        let src = vector_basis(n, q);
        let tgt = vector_basis(n, q + 1);
        let cols: Vec<_> = src
            .iter()
            .map(|m| {
                let v = VectorForm::from_terms(n, q, [(*m, Scalar::one())]);
                self.delbar_vector(&v).coords(&tgt).expect("target basis")
            })
            .collect();
        Matrix::from_columns(tgt.len(), &cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn mono(h: &[usize], a: &[usize]) -> Monomial {
        Monomial::from_indices(h, a).unwrap()
    }

    #[test]
    fn contraction_examples() {
        let n = 3;
        let theta = VectorForm::term(n, 1, &[1], Scalar::one());
        let u = Form::monomial(n, mono(&[1, 2, 3], &[]), Scalar::one());
        assert_eq!(theta.contract(&u), Form::monomial(n, mono(&[2, 3], &[1]), Scalar::one()));

        let half_i = Scalar::gaussian(0, 1, 1, 2);
        let omega = Form::from_terms(n, (1..=3).map(|j| (mono(&[j], &[j]), half_i.clone())));
        assert!(theta.contract(&omega).is_zero());

        let theta2 = VectorForm::term(n, 1, &[2], Scalar::one());
        assert_eq!(theta2.contract(&omega), Form::monomial(n, mono(&[], &[1, 2]), -half_i));
    }

    #[test]
    fn vector_delbar_rejects_other_selectors() {
        let p = Presentation::abelian(3);
        let theta = VectorForm::term(3, 1, &[1], Scalar::one());
        assert!(p.differential_vector(&theta, Selector::D).is_err());
        assert!(p.differential_vector(&theta, Selector::Del).is_err());
        assert!(p.differential_vector(&theta, Selector::Delbar).unwrap().is_zero());
    }

    #[test]
    fn vector_delbar_squares_to_zero() {
        for name in builtins::NAMES {
            let m = builtins::load(name).unwrap();
            let p = &m.presentation;
            for q in 0..2 {
                let a = p.vector_delbar_matrix(q);
                let b = p.vector_delbar_matrix(q + 1);
                assert!(b.mul(&a).unwrap().is_zero(), "{name} q={q}");
            }
        }
    }
}
