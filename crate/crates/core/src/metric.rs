//! Hermitian metrics, the induced inner products, Hodge star, adjoints and Laplacians.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use serde::Serialize;

use crate::algebra::{bidegree_basis, degree_basis, matrix_of, Form, Monomial, Presentation, Selector};
use crate::error::{Error, Result};
use crate::exact::{check_positive_definite, GramForm, Matrix, Scalar, Vector};

/// `ω = i Σ ω_{jk̄} φ^j ∧ φ̄^k` with `ω_{jk̄}` Hermitian positive definite.
#[derive(Clone, PartialEq)]
pub struct HermitianMetric {
    matrix: Matrix,
    inverse: Matrix,
    form: Form,
    dv: Form,
}

impl fmt::Debug for HermitianMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermitianMetric({})", self.form)
    }
}

impl HermitianMetric {
    pub fn new(matrix: Matrix) -> Result<Self> {
        let n = matrix.rows();
        if matrix.cols() != n || n == 0 {
            return Err(Error::Dimension(format!("metric matrix is {}x{}", matrix.rows(), matrix.cols())));
        }
        check_positive_definite(&matrix)?;
        let inverse = matrix.inverse().expect("positive definite matrices are invertible");
        let mut form = Form::zero(n);
        for j in 0..n {
            for (k, c) in matrix.row_entries(j) {
                form.add_term(Monomial::new(1 << j, 1 << k), Scalar::i() * c);
            }
        }
        let factorial: i64 = (1..=n as i64).product();
        let dv = form.wedge_pow(n).scale(&Scalar::ratio(1, factorial));
        Ok(HermitianMetric { matrix, inverse, form, dv })
    }

    /// The flat metric `ω = (i/2) Σ φ^j ∧ φ̄^j`.
    pub fn standard(n: usize) -> Self {
        HermitianMetric::new(Matrix::identity(n).scale(&Scalar::ratio(1, 2))).expect("standard metric")
    }

    /// Reads `ω_{jk̄}` off a real positive `(1,1)`-form.
    pub fn from_form(omega: &Form) -> Result<Self> {
        let n = omega.n();
        if !omega.is_zero() && omega.pure_bidegree() != Some((1, 1)) {
            return Err(Error::Bidegree(format!("metric form must be of type (1,1), got {omega}")));
        }
        let mut m = Matrix::zeros(n, n);
        for (mono, c) in omega.terms() {
            let j = mono.hol.trailing_zeros() as usize;
            let k = mono.anti.trailing_zeros() as usize;
            m.set(j, k, -Scalar::i() * c);
        }
        HermitianMetric::new(m)
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    /// `dV = ω^n / n!`.
    pub fn volume_form(&self) -> &Form {
        &self.dv
    }

    /// Coefficient of `(1..n|1..n)` in `dV`.
    pub fn volume_coeff(&self) -> Scalar {
        self.dv.top_coeff()
    }

    /// `∫ u` for a top-degree form: its top coefficient over that of `dV` (total volume 1).
    pub fn integrate(&self, u: &Form) -> Scalar {
        &u.top_coeff() / &self.volume_coeff()
    }

    /// Inner product of two monomials: `⟨φ^a, φ^b⟩ = (ω^{-1})_{ba}` and `⟨φ̄^a, φ̄^b⟩ = (ω^{-1})_{ab}`,
    /// extended by determinants on the holomorphic and antiholomorphic blocks.
    pub fn monomial_inner(&self, a: &Monomial, b: &Monomial) -> Scalar {
        if a.bidegree() != b.bidegree() {
            return Scalar::zero();
        }
        let block = |x: &[usize], y: &[usize], transpose: bool| -> Scalar {
            let dense: Vec<Vector> = x
                .iter()
                .map(|&r| {
                    y.iter().map(|&s| if transpose { self.inverse.get(s - 1, r - 1) } else { self.inverse.get(r - 1, s - 1) }).collect()
                })
                .collect();
            Matrix::from_dense(x.len(), y.len(), &dense).determinant().expect("square block")
        };
        block(&a.hol_indices(), &b.hol_indices(), true) * block(&a.anti_indices(), &b.anti_indices(), false)
    }

    /// `⟨u, v⟩`, linear in `u` and conjugate-linear in `v`; distinct bidegrees are orthogonal.
    pub fn inner(&self, u: &Form, v: &Form) -> Scalar {
        let mut acc = Scalar::zero();
        for (a, ca) in u.terms() {
            for (b, cb) in v.terms() {
                if a.bidegree() == b.bidegree() {
                    let g = self.monomial_inner(a, b);
                    if !g.is_zero() {
                        acc += ca * &g * cb.conj();
                    }
                }
            }
        }
        acc
    }

    /// `⟨u, v⟩` for forms of one common bidegree.
    pub fn inner_checked(&self, u: &Form, v: &Form) -> Result<Scalar> {
        match (u.pure_bidegree(), v.pure_bidegree()) {
            (Some(a), Some(b)) if a != b => Err(Error::Bidegree(format!("inner product of {a:?} and {b:?} forms"))),
            _ if u.bidegrees().len() > 1 || v.bidegrees().len() > 1 => {
                Err(Error::Bidegree("inner product of forms of mixed bidegree".into()))
            }
            _ => Ok(self.inner(u, v)),
        }
    }

    pub fn norm_sqr(&self, u: &Form) -> Scalar {
        self.inner(u, u)
    }

    /// Gram matrix `G_ij = ⟨b_i, b_j⟩` of a monomial basis.
    pub fn gram(&self, basis: &[Monomial]) -> GramForm {
        let dense: Vec<Vector> = basis.iter().map(|a| basis.iter().map(|b| self.monomial_inner(a, b)).collect()).collect();
        GramForm::new(Matrix::from_dense(basis.len(), basis.len(), &dense)).expect("induced metrics are positive definite")
    }
}

/// A space of forms: a fixed bidegree or a fixed total degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Grading {
    Bidegree(usize, usize),
    Degree(usize),
}

impl Grading {
    pub fn basis(&self, n: usize) -> Vec<Monomial> {
        match *self {
            Grading::Bidegree(p, q) if p <= n && q <= n => bidegree_basis(n, p, q),
            Grading::Degree(k) if k <= 2 * n => degree_basis(n, k),
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grading::Bidegree(p, q) => write!(f, "({p},{q})"),
            Grading::Degree(k) => write!(f, "degree {k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Operator {
    D,
    Del,
    Delbar,
    DStar,
    DelStar,
    DelbarStar,
    Star,
}

impl Operator {
    pub fn adjoint_of(selector: Selector) -> Operator {
        match selector {
            Selector::D => Operator::DStar,
            Selector::Del => Operator::DelStar,
            Selector::Delbar => Operator::DelbarStar,
        }
    }

    fn target(self, g: Grading, n: usize) -> Option<Grading> {
        let bideg = |p: isize, q: isize| {
            (p >= 0 && q >= 0 && p as usize <= n && q as usize <= n).then_some(Grading::Bidegree(p as usize, q as usize))
        };
        let deg = |k: isize| (k >= 0 && k as usize <= 2 * n).then_some(Grading::Degree(k as usize));
        match g {
            Grading::Bidegree(p, q) => {
                let (p, q, n_) = (p as isize, q as isize, n as isize);
                match self {
                    Operator::Del => bideg(p + 1, q),
                    Operator::Delbar => bideg(p, q + 1),
                    Operator::DelStar => bideg(p - 1, q),
                    Operator::DelbarStar => bideg(p, q - 1),
                    Operator::Star => bideg(n_ - q, n_ - p),
                    Operator::D => deg(p + q + 1),
                    Operator::DStar => deg(p + q - 1),
                }
            }
            Grading::Degree(k) => {
                let k = k as isize;
                match self {
                    Operator::D | Operator::Del | Operator::Delbar => deg(k + 1),
                    Operator::DStar | Operator::DelStar | Operator::DelbarStar => deg(k - 1),
                    Operator::Star => deg(2 * n as isize - k),
                }
            }
        }
    }
}

/// The Laplacians `Δ = dd*+d*d`, `Δ' = ∂∂*+∂*∂`, `Δ'' = ∂̄∂̄*+∂̄*∂̄`, `Δ_BC` and `Δ_A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Laplacian {
    Full,
    Del,
    Delbar,
    BottChern,
    Aeppli,
}

impl fmt::Display for Laplacian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Laplacian::Full => "delta",
            Laplacian::Del => "delta-del",
            Laplacian::Delbar => "delta-delbar",
            Laplacian::BottChern => "delta-bc",
            Laplacian::Aeppli => "delta-a",
        })
    }
}

/// A linear operator written in the monomial bases of its source and target spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub source: Grading,
    pub target: Option<Grading>,
    pub matrix: Matrix,
}

/// Metric-dependent operators on the invariant complex of one presentation.
pub struct Hodge {
    presentation: Presentation,
    metric: HermitianMetric,
    /// `⋆` of every monomial, indexed by `hol | anti << n`.
    star_mono: Vec<Form>,
    operators: RwLock<HashMap<(Operator, Grading), OperatorMatrix>>,
    laplacians: RwLock<HashMap<(Laplacian, Grading), Matrix>>,
}

impl Hodge {
    pub fn new(presentation: &Presentation, metric: &HermitianMetric) -> Result<Self> {
        let n = presentation.n();
        if metric.n() != n {
            return Err(Error::Dimension(format!("metric of size {} on a presentation of dimension {n}", metric.n())));
        }
        let dvc = metric.volume_coeff();
        let mut star_mono = Vec::with_capacity(1 << (2 * n));
        for key in 0..1usize << (2 * n) {
            let b = Monomial::new((key & ((1 << n) - 1)) as u16, (key >> n) as u16);
            // conj(⋆b) = Σ_a ⟨a,b⟩ dV_top · sign(a ∧ comp a) · comp a
            let mut c = Form::zero(n);
            for a in bidegree_basis(n, b.p(), b.q()) {
                let g = metric.monomial_inner(&a, &b);
                if g.is_zero() {
                    continue;
                }
                let (neg, comp) = a.complement(n);
                let v = &g * &dvc;
                c.add_term(comp, if neg { -v } else { v });
            }
            star_mono.push(c.conj());
        }
        Ok(Hodge {
            presentation: presentation.clone(),
            metric: metric.clone(),
            star_mono,
            operators: RwLock::new(HashMap::new()),
            laplacians: RwLock::new(HashMap::new()),
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn metric(&self) -> &HermitianMetric {
        &self.metric
    }

    pub fn n(&self) -> usize {
        self.presentation.n()
    }

    /// The complex-linear star with `a ∧ conj(⋆b) = ⟨a,b⟩ dV`, mapping `(p,q)` to `(n−q,n−p)`.
    pub fn star(&self, u: &Form) -> Form {
        let n = self.n();
        let mut out = Form::zero(n);
        for (m, c) in u.terms() {
            out.add_scaled(c, &self.star_mono[m.hol as usize | (m.anti as usize) << n]);
        }
        out
    }

    /// Formal adjoint by `∂* = −⋆∂̄⋆`, `∂̄* = −⋆∂⋆`, `d* = −⋆d⋆`.
    pub fn adjoint(&self, selector: Selector, u: &Form) -> Form {
        let dual = match selector {
            Selector::D => Selector::D,
            Selector::Del => Selector::Delbar,
            Selector::Delbar => Selector::Del,
        };
        self.star(&self.presentation.differential(&self.star(u), dual)).scale(&-Scalar::one())
    }

    pub fn apply(&self, op: Operator, u: &Form) -> Form {
        let p = &self.presentation;
        match op {
            Operator::D => p.d(u),
            Operator::Del => p.del(u),
            Operator::Delbar => p.delbar(u),
            Operator::DStar => self.adjoint(Selector::D, u),
            Operator::DelStar => self.adjoint(Selector::Del, u),
            Operator::DelbarStar => self.adjoint(Selector::Delbar, u),
            Operator::Star => self.star(u),
        }
    }

    pub fn laplacian(&self, kind: Laplacian, u: &Form) -> Form {
        use Operator::*;
        let chain = |ops: &[Operator]| ops.iter().rev().fold(u.clone(), |acc, op| self.apply(*op, &acc));
        let terms: Vec<&[Operator]> = match kind {
            Laplacian::Full => vec![&[D, DStar], &[DStar, D]],
            Laplacian::Del => vec![&[Del, DelStar], &[DelStar, Del]],
            Laplacian::Delbar => vec![&[Delbar, DelbarStar], &[DelbarStar, Delbar]],
            Laplacian::BottChern => vec![
                &[DelStar, Del],
                &[DelbarStar, Delbar],
                &[Del, Delbar, DelbarStar, DelStar],
                &[DelbarStar, DelStar, Del, Delbar],
                &[DelStar, Delbar, DelbarStar, Del],
                &[DelbarStar, Del, DelStar, Delbar],
            ],
            Laplacian::Aeppli => vec![
                &[Del, DelStar],
                &[Delbar, DelbarStar],
                &[Del, Delbar, DelbarStar, DelStar],
                &[DelbarStar, DelStar, Del, Delbar],
                &[Del, DelbarStar, Delbar, DelStar],
                &[Delbar, DelStar, Del, DelbarStar],
            ],
        };
        terms.into_iter().fold(Form::zero(self.n()), |acc, ops| acc.add(&chain(ops)))
    }

    /// Matrix of `op` on `source` in monomial bases. Cached.
    pub fn operator_matrix(&self, op: Operator, source: Grading) -> OperatorMatrix {
        if let Some(m) = self.operators.read().expect("cache lock").get(&(op, source)) {
            return m.clone();
        }
        let n = self.n();
        let target = op.target(source, n);
        let tgt_basis = target.map(|g| g.basis(n)).unwrap_or_default();
        let matrix = matrix_of(&source.basis(n), &tgt_basis, n, |f| self.apply(op, f));
        let out = OperatorMatrix { source, target, matrix };
        self.operators.write().expect("cache lock").entry((op, source)).or_insert(out).clone()
    }

    /// Matrix of a Laplacian on `grading`. `Δ` on a bidegree is written into the total-degree basis.
    pub fn laplacian_matrix(&self, kind: Laplacian, grading: Grading) -> Matrix {
        if let Some(m) = self.laplacians.read().expect("cache lock").get(&(kind, grading)) {
            return m.clone();
        }
        let n = self.n();
        let src = grading.basis(n);
        let tgt = match (kind, grading) {
            (Laplacian::Full, Grading::Bidegree(p, q)) => degree_basis(n, p + q),
            _ => src.clone(),
        };
        let m = matrix_of(&src, &tgt, n, |f| self.laplacian(kind, f));
        self.laplacians.write().expect("cache lock").entry((kind, grading)).or_insert(m).clone()
    }

    /// Basis of the kernel of a Laplacian, as reduced echelon coordinate vectors turned into forms.
    pub fn harmonic_basis(&self, kind: Laplacian, grading: Grading) -> Vec<Form> {
        let n = self.n();
        let basis = grading.basis(n);
        self.laplacian_matrix(kind, grading).kernel().iter().map(|v| Form::from_coords(n, &basis, v)).collect()
    }

    pub fn gram(&self, grading: Grading) -> GramForm {
        self.metric.gram(&grading.basis(self.n()))
    }
}
