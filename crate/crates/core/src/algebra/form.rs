//! Sparse invariant forms in the monomial basis `φ^I ∧ φ̄^J`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::exact::Scalar;

/// The monomial `(I|J) = φ^I ∧ φ̄^J`, stored as two bitmasks (bit `k` is index `k+1`).
///
/// Normal form: holomorphic indices ascending, then antiholomorphic ascending.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub hol: u16,
    pub anti: u16,
}

/// Number of pairs `(i ∈ x, j ∈ y)` with `i > j`.
fn inversions(x: u16, y: u16) -> u32 {
    let mut count = 0;
    let mut rest = y;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        count += (x >> j >> 1).count_ones();
    }
    count
}

fn lex_cmp(x: u16, y: u16) -> Ordering {
    if x == y {
        return Ordering::Equal;
    }
    let d = x ^ y;
    let low = d & d.wrapping_neg();
    if x & low != 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

impl Monomial {
    pub const ONE: Monomial = Monomial { hol: 0, anti: 0 };

    pub fn new(hol: u16, anti: u16) -> Self {
        Monomial { hol, anti }
    }

    /// From 1-based index lists; `None` if an index repeats.
    pub fn from_indices(hol: &[usize], anti: &[usize]) -> Option<Self> {
        let mut h = 0u16;
        for &i in hol {
            let bit = 1u16 << (i - 1);
            if h & bit != 0 {
                return None;
            }
            h |= bit;
        }
        let mut a = 0u16;
        for &j in anti {
            let bit = 1u16 << (j - 1);
            if a & bit != 0 {
                return None;
            }
            a |= bit;
        }
        Some(Monomial { hol: h, anti: a })
    }

    pub fn p(&self) -> usize {
        self.hol.count_ones() as usize
    }

    pub fn q(&self) -> usize {
        self.anti.count_ones() as usize
    }

    pub fn degree(&self) -> usize {
        self.p() + self.q()
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.p(), self.q())
    }

    /// 1-based holomorphic indices, ascending.
    pub fn hol_indices(&self) -> Vec<usize> {
        bits(self.hol)
    }

    pub fn anti_indices(&self) -> Vec<usize> {
        bits(self.anti)
    }

    /// `self ∧ other` as `(sign, monomial)`, or `None` when an index repeats.
    pub fn wedge(&self, other: &Monomial) -> Option<(bool, Monomial)> {
        if self.hol & other.hol != 0 || self.anti & other.anti != 0 {
            return None;
        }
        let swaps = self.q() as u32 * other.p() as u32 + inversions(self.hol, other.hol) + inversions(self.anti, other.anti);
        Some((swaps % 2 == 1, Monomial { hol: self.hol | other.hol, anti: self.anti | other.anti }))
    }

    /// Conjugate monomial `(J|I)` with the reordering sign `(-1)^{|I||J|}`.
    pub fn conj(&self) -> (bool, Monomial) {
        ((self.p() * self.q()) % 2 == 1, Monomial { hol: self.anti, anti: self.hol })
    }

    /// Sign of `self ∧ complement = ± (1..n|1..n)`.
    pub fn complement(&self, n: usize) -> (bool, Monomial) {
        let full = full_mask(n);
        let c = Monomial { hol: full & !self.hol, anti: full & !self.anti };
        let (neg, _) = self.wedge(&c).expect("complement is disjoint");
        (neg, c)
    }

    pub fn top(n: usize) -> Monomial {
        Monomial { hol: full_mask(n), anti: full_mask(n) }
    }
}

pub fn full_mask(n: usize) -> u16 {
    if n >= 16 {
        u16::MAX
    } else {
        (1u16 << n) - 1
    }
}

fn bits(mask: u16) -> Vec<usize> {
    (0..16).filter(|k| mask >> k & 1 == 1).map(|k| k + 1).collect()
}

impl Ord for Monomial {
    /// Total degree, then holomorphic-first lexicographic order of the index sequence.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.p().cmp(&self.p()))
            .then_with(|| lex_cmp(self.hol, other.hol))
            .then_with(|| lex_cmp(self.anti, other.anti))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = |v: Vec<usize>| v.iter().map(|k| k.to_string()).collect::<String>();
        write!(f, "({}|{})", digits(self.hol_indices()), digits(self.anti_indices()))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All subsets of `{1..n}` of size `k`, as masks in lexicographic order of their index lists.
pub fn subsets(n: usize, k: usize) -> Vec<u16> {
    fn rec(start: usize, n: usize, k: usize, acc: u16, out: &mut Vec<u16>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..n {
            if n - i < k {
                break;
            }
            rec(i + 1, n, k - 1, acc | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, 0, &mut out);
    }
    out
}

/// Monomial basis of bidegree `(p, q)`: holomorphic part major, both lexicographic.
pub fn bidegree_basis(n: usize, p: usize, q: usize) -> Vec<Monomial> {
    let anti = subsets(n, q);
    subsets(n, p).into_iter().flat_map(|h| anti.iter().map(move |&a| Monomial::new(h, a))).collect()
}

/// Monomial basis of total degree `k`, in monomial order (holomorphic degree descending).
pub fn degree_basis(n: usize, k: usize) -> Vec<Monomial> {
    (0..=k.min(n)).rev().filter(|&p| k - p <= n).flat_map(|p| bidegree_basis(n, p, k - p)).collect()
}

/// A sparse invariant form on an `n`-dimensional complex coframe.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Form {
    n: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Form {
    pub fn zero(n: usize) -> Self {
        Form { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Form::monomial(n, Monomial::ONE, Scalar::one())
    }

    pub fn monomial(n: usize, m: Monomial, c: Scalar) -> Self {
        let mut f = Form::zero(n);
        f.add_term(m, c);
        f
    }

    /// The 1-form `φ^i` (1-based).
    pub fn phi(n: usize, i: usize) -> Self {
        Form::monomial(n, Monomial::new(1 << (i - 1), 0), Scalar::one())
    }

    /// The 1-form `φ̄^i` (1-based).
    pub fn phibar(n: usize, i: usize) -> Self {
        Form::monomial(n, Monomial::new(0, 1 << (i - 1)), Scalar::one())
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut f = Form::zero(n);
        for (m, c) in terms {
            f.add_term(m, c);
        }
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        debug_assert!(m.hol & !full_mask(self.n) == 0 && m.anti & !full_mask(self.n) == 0);
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Coefficient of `(1..n|1..n)`.
    pub fn top_coeff(&self) -> Scalar {
        self.coeff(&Monomial::top(self.n))
    }

    pub fn component(&self, p: usize, q: usize) -> Form {
        Form {
            n: self.n,
            terms: self.terms.iter().filter(|(m, _)| m.bidegree() == (p, q)).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    pub fn degree_part(&self, k: usize) -> Form {
        Form {
            n: self.n,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == k).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// Bidegrees with a nonzero component, in ascending monomial order.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for m in self.terms.keys() {
            let b = m.bidegree();
            if !out.contains(&b) {
                out.push(b);
            }
        }
        out
    }

    /// `Some((p, q))` if every term has bidegree `(p, q)`; `None` for mixed or zero forms.
    pub fn pure_bidegree(&self) -> Option<(usize, usize)> {
        let b = self.bidegrees();
        (b.len() == 1).then(|| b[0])
    }

    pub fn pure_degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn scale(&self, c: &Scalar) -> Form {
        if c.is_zero() {
            return Form::zero(self.n);
        }
        Form { n: self.n, terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn add(&self, o: &Form) -> Form {
        assert_eq!(self.n, o.n, "forms on different coframes");
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Form) -> Form {
        self.add(&o.scale(&-Scalar::one()))
    }

    pub fn add_scaled(&mut self, c: &Scalar, o: &Form) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &o.terms {
            self.add_term(*m, c * v);
        }
    }

    pub fn wedge(&self, o: &Form) -> Form {
        assert_eq!(self.n, o.n, "forms on different coframes");
        let mut out = Form::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                if let Some((neg, m)) = a.wedge(b) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// `self^k` under the wedge product (`self^0 = 1`).
    pub fn wedge_pow(&self, k: usize) -> Form {
        (0..k).fold(Form::one(self.n), |acc, _| acc.wedge(self))
    }

    /// Complex conjugation: `(I|J) ↦ (-1)^{|I||J|} (J|I)` with conjugated coefficients.
    pub fn conj(&self) -> Form {
        let mut out = Form::zero(self.n);
        for (m, c) in &self.terms {
            let (neg, cm) = m.conj();
            out.add_term(cm, if neg { -c.conj() } else { c.conj() });
        }
        out
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Coordinates in the given monomial basis; `None` if a term falls outside it.
    pub fn coords(&self, basis: &[Monomial]) -> Option<Vec<Scalar>> {
        let mut out = vec![Scalar::zero(); basis.len()];
        let mut found = 0;
        for (k, m) in basis.iter().enumerate() {
            if let Some(c) = self.terms.get(m) {
                out[k] = c.clone();
                found += 1;
            }
        }
        (found == self.terms.len()).then_some(out)
    }

    pub fn from_coords(n: usize, basis: &[Monomial], coords: &[Scalar]) -> Form {
        Form::from_terms(n, basis.iter().copied().zip(coords.iter().cloned()))
    }

    pub fn map_terms(&self, f: impl Fn(&Monomial, &Scalar) -> Form) -> Form {
        let mut out = Form::zero(self.n);
        for (m, c) in &self.terms {
            out = out.add(&f(m, c));
        }
        out
    }
}

impl fmt::Display for Form {
    /// Term syntax `coeff*(I|J)` joined by ` + `, parenthesising complex coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{}*{m}", fmt_coeff(c))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Coefficient text usable on the left of `*` in the term grammar.
pub fn fmt_coeff(c: &Scalar) -> String {
    if !c.re().is_zero() && !c.im().is_zero() {
        format!("({c})")
    } else {
        c.to_string()
    }
}
