//! Complex structure equations `dφ^i` and the operators `d`, `∂`, `∂̄` they induce.

use std::fmt;

use serde::Serialize;

use super::form::{bidegree_basis, full_mask, Form, Monomial};
use crate::error::{Error, Result};
use crate::exact::{Matrix, Scalar};

/// Which differential to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Selector {
    D,
    Del,
    Delbar,
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Selector::D => "d",
            Selector::Del => "del",
            Selector::Delbar => "delbar",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationCheck {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<ValidationCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&ValidationCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// A left-invariant complex structure given by its structure equations.
///
/// `dtable[i]` is `dφ^{i+1}`, a 2-form with components of bidegree (2,0) and (1,1).
#[derive(Clone)]
pub struct Presentation {
    n: usize,
    names: Vec<String>,
    dtable: Vec<Form>,
    /// `d` of every monomial, indexed by `hol | anti << n`.
    d_mono: Vec<Form>,
    unimodular_checked: bool,
}

impl PartialEq for Presentation {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.names == o.names && self.dtable == o.dtable
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Presentation").field("n", &self.n).field("names", &self.names).field("dtable", &self.dtable).finish()
    }
}

impl Presentation {
    /// Builds and validates a presentation; any failed check is an error.
    pub fn new(names: Vec<String>, dtable: Vec<Form>) -> Result<Self> {
        let mut p = Presentation::unchecked(names, dtable)?;
        let report = p.validate();
        if !report.passed() {
            let msg: Vec<String> = report.failures().iter().map(|c| format!("{}: {}", c.check, c.detail)).collect();
            return Err(Error::Validation(msg.join("; ")));
        }
        p.unimodular_checked = true;
        Ok(p)
    }

    /// Builds a presentation without running the validator.
    pub fn unchecked(names: Vec<String>, dtable: Vec<Form>) -> Result<Self> {
        let n = dtable.len();
        if n == 0 || n > 8 {
            return Err(Error::Dimension(format!("complex dimension {n} outside 1..=8")));
        }
        if names.len() != n {
            return Err(Error::Dimension(format!("{} names for {n} generators", names.len())));
        }
        for (i, f) in dtable.iter().enumerate() {
            if f.n() != n {
                return Err(Error::Dimension(format!("d{} lives on a coframe of dimension {}", names[i], f.n())));
            }
            if !f.is_zero() && f.pure_degree() != Some(2) {
                return Err(Error::Validation(format!("d{} is not a 2-form", names[i])));
            }
        }
        let mut p = Presentation { n, names, dtable, d_mono: Vec::new(), unimodular_checked: false };
        p.d_mono = p.build_monomial_differentials();
        Ok(p)
    }

    /// The abelian structure `dφ^i = 0`.
    pub fn abelian(n: usize) -> Self {
        let names = (1..=n).map(|i| format!("phi{i}")).collect();
        Presentation::new(names, vec![Form::zero(n); n]).expect("abelian presentation is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn dtable(&self) -> &[Form] {
        &self.dtable
    }

    pub fn unimodular_checked(&self) -> bool {
        self.unimodular_checked
    }

    fn generator_differential(&self, g: usize) -> Form {
        if g < self.n {
            self.dtable[g].clone()
        } else {
            self.dtable[g - self.n].conj()
        }
    }

    fn build_monomial_differentials(&self) -> Vec<Form> {
        let n = self.n;
        let gens: Vec<Form> = (0..2 * n).map(|g| self.generator_differential(g)).collect();
        let count = 1usize << (2 * n);
        (0..count)
            .map(|key| {
                let hol = (key & full_mask(n) as usize) as u16;
                let anti = (key >> n) as u16;
                let mut out = Form::zero(n);
                // d(g_1 ∧ … ∧ g_k) = Σ_s (-1)^{s-1} g_1…g_{s-1} ∧ dg_s ∧ g_{s+1}…g_k
                let mut before = 0usize;
                for g in 0..2 * n {
                    if key >> g & 1 == 0 {
                        continue;
                    }
                    let prefix_key = key & ((1usize << g) - 1);
                    let suffix_key = key & !((1usize << (g + 1)) - 1);
                    let split = |k: usize| Monomial::new((k & full_mask(n) as usize) as u16, (k >> n) as u16);
                    let prefix = Form::monomial(n, split(prefix_key), Scalar::one());
                    let suffix = Form::monomial(n, split(suffix_key), Scalar::one());
                    let term = prefix.wedge(&gens[g]).wedge(&suffix);
                    if before % 2 == 0 {
                        out = out.add(&term);
                    } else {
                        out = out.sub(&term);
                    }
                    before += 1;
                }
                debug_assert!(hol as usize | (anti as usize) << n == key);
                out
            })
            .collect()
    }

    fn mono_key(&self, m: &Monomial) -> usize {
        m.hol as usize | (m.anti as usize) << self.n
    }

    /// `d` of a single monomial.
    pub fn d_monomial(&self, m: &Monomial) -> &Form {
        &self.d_mono[self.mono_key(m)]
    }

    pub fn d(&self, u: &Form) -> Form {
        self.check_n(u);
        let mut out = Form::zero(self.n);
        for (m, c) in u.terms() {
            out.add_scaled(c, self.d_monomial(m));
        }
        out
    }

    /// `∂u`: the `(p+1, q)` part of `d u_{p,q}`, summed over components.
    pub fn del(&self, u: &Form) -> Form {
        self.split_d(u, true)
    }

    /// `∂̄u`: the `(p, q+1)` part of `d u_{p,q}`, summed over components.
    pub fn delbar(&self, u: &Form) -> Form {
        self.split_d(u, false)
    }

    fn split_d(&self, u: &Form, holomorphic: bool) -> Form {
        self.check_n(u);
        let mut out = Form::zero(self.n);
        for (m, c) in u.terms() {
            let (p, q) = m.bidegree();
            let target = if holomorphic { (p + 1, q) } else { (p, q + 1) };
            for (dm, dc) in self.d_monomial(m).terms() {
                if dm.bidegree() == target {
                    out.add_term(*dm, c * dc);
                }
            }
        }
        out
    }

    pub fn differential(&self, u: &Form, selector: Selector) -> Form {
        match selector {
            Selector::D => self.d(u),
            Selector::Del => self.del(u),
            Selector::Delbar => self.delbar(u),
        }
    }

    fn check_n(&self, u: &Form) {
        assert_eq!(u.n(), self.n, "form does not belong to this presentation");
    }

    /// Matrix of `selector` from bidegree `src` to bidegree `tgt` in the monomial bases.
    pub fn operator_matrix(&self, selector: Selector, src: (usize, usize), tgt: (usize, usize)) -> Matrix {
        let sb = bidegree_basis(self.n, src.0, src.1);
        let tb = bidegree_basis(self.n, tgt.0, tgt.1);
        let cols: Vec<_> = sb
            .iter()
            .map(|m| {
                let image = self.differential(&Form::monomial(self.n, *m, Scalar::one()), selector).component(tgt.0, tgt.1);
                image.coords(&tb).expect("component lies in target basis")
            })
            .collect();
        Matrix::from_columns(tb.len(), &cols)
    }

    /// Runs the d² = 0, integrability and unimodularity checks.
    pub fn validate(&self) -> ValidationReport {
        let n = self.n;
        let mut checks = Vec::new();
        for (i, name) in self.names.iter().enumerate() {
            let dd = self.d(&self.dtable[i]);
            checks.push(ValidationCheck {
                check: format!("d^2 = 0 on {name}"),
                passed: dd.is_zero(),
                detail: if dd.is_zero() { "ok".into() } else { format!("d(d{name}) = {dd}") },
            });
        }
        for (i, name) in self.names.iter().enumerate() {
            let bad = self.dtable[i].component(0, 2);
            checks.push(ValidationCheck {
                check: format!("integrability of {name}"),
                passed: bad.is_zero(),
                detail: if bad.is_zero() { "ok".into() } else { format!("(0,2)-part of d{name} = {bad}") },
            });
        }
        let mut residuals = Vec::new();
        let top = Monomial::top(n);
        for g in 0..2 * n {
            let m = if g < n {
                Monomial::new(top.hol & !(1 << g), top.anti)
            } else {
                Monomial::new(top.hol, top.anti & !(1 << (g - n)))
            };
            let c = self.d_monomial(&m).top_coeff();
            if !c.is_zero() {
                residuals.push(format!("top coefficient of d{m} = {c}"));
            }
        }
        checks.push(ValidationCheck {
            check: "unimodularity".into(),
            passed: residuals.is_empty(),
            detail: if residuals.is_empty() { "ok".into() } else { residuals.join(", ") },
        });
        ValidationReport { checks }
    }
}
