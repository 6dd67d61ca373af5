//! De Rham, Dolbeault, Bott-Chern and Aeppli cohomology of the invariant complex as exact quotients.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{bidegree_basis, degree_basis, matrix_of, Form, Monomial, Presentation};
use crate::error::{Error, Result};
use crate::exact::{min_norm_solution, rref_basis, solve_affine, span_rank, Feasibility, Matrix, Scalar, Solve, Vector};
use crate::metric::{Grading, Hodge, Laplacian};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Model {
    DeRham,
    Dolbeault,
    BottChern,
    Aeppli,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::DeRham, Model::Dolbeault, Model::BottChern, Model::Aeppli];

    /// The Laplacian whose kernel represents this cohomology.
    pub fn laplacian(self) -> Laplacian {
        match self {
            Model::DeRham => Laplacian::Full,
            Model::Dolbeault => Laplacian::Delbar,
            Model::BottChern => Laplacian::BottChern,
            Model::Aeppli => Laplacian::Aeppli,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Model::DeRham => "dr",
            Model::Dolbeault => "dolbeault",
            Model::BottChern => "bc",
            Model::Aeppli => "a",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::DeRham => "de Rham",
            Model::Dolbeault => "Dolbeault",
            Model::BottChern => "Bott-Chern",
            Model::Aeppli => "Aeppli",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dr" | "derham" | "de-rham" => Ok(Model::DeRham),
            "dolbeault" | "dol" | "delbar" => Ok(Model::Dolbeault),
            "bc" | "bott-chern" | "bottchern" => Ok(Model::BottChern),
            "a" | "aeppli" => Ok(Model::Aeppli),
            _ => Err(Error::Usage(format!("unknown cohomology model `{s}` (expected dr, dolbeault, bc or a)"))),
        }
    }
}

/// A cohomology class given by a representative in the model's numerator.
#[derive(Clone, Debug, PartialEq)]
pub struct CohClass {
    pub model: Model,
    pub grading: Grading,
    pub representative: Form,
}

/// Numerator and denominator subspaces of a model, in the ambient monomial basis.
fn subspaces(p: &Presentation, model: Model, grading: Grading) -> Result<(Vec<Monomial>, Vec<Vector>, Vec<Vector>)> {
    let n = p.n();
    let basis_or_empty = |a: isize, b: isize| {
        if a < 0 || b < 0 || a as usize > n || b as usize > n {
            Vec::new()
        } else {
            bidegree_basis(n, a as usize, b as usize)
        }
    };
    match (model, grading) {
        (Model::DeRham, Grading::Degree(k)) => {
            let ambient = degree_basis(n, k);
            let num = matrix_of(&ambient, &degree_basis(n, k + 1), n, |f| p.d(f)).kernel();
            let den = if k == 0 { Vec::new() } else { matrix_of(&degree_basis(n, k - 1), &ambient, n, |f| p.d(f)).column_space() };
            Ok((ambient, num, den))
        }
        (Model::DeRham, Grading::Bidegree(..)) => Err(Error::Bidegree("de Rham cohomology is graded by total degree".into())),
        (_, Grading::Degree(_)) => Err(Error::Bidegree(format!("{model} cohomology is graded by bidegree"))),
        (_, Grading::Bidegree(a, b)) => {
            if a > n || b > n {
                return Err(Error::Bidegree(format!("bidegree ({a},{b}) exceeds dimension {n}")));
            }
            let (ai, bi) = (a as isize, b as isize);
            let ambient = bidegree_basis(n, a, b);
            let kernel_of = |maps: Vec<Matrix>| -> Vector2 {
                let stacked = maps.into_iter().reduce(|x, y| x.vstack(&y).expect("same source")).expect("at least one map");
                stacked.kernel()
            };
            let del = || matrix_of(&ambient, &basis_or_empty(ai + 1, bi), n, |f| p.del(f));
            let delbar = || matrix_of(&ambient, &basis_or_empty(ai, bi + 1), n, |f| p.delbar(f));
            let image = |src: Vec<Monomial>, f: &dyn Fn(&Form) -> Form| -> Vector2 {
                if src.is_empty() {
                    Vec::new()
                } else {
                    matrix_of(&src, &ambient, n, f).column_space()
                }
            };
            let (num, den) = match model {
                Model::Dolbeault => (kernel_of(vec![delbar()]), image(basis_or_empty(ai, bi - 1), &|f| p.delbar(f))),
                Model::BottChern => (
                    kernel_of(vec![del(), delbar()]),
                    image(basis_or_empty(ai - 1, bi - 1), &|f| p.del(&p.delbar(f))),
                ),
                Model::Aeppli => {
                    let ddbar = matrix_of(&ambient, &basis_or_empty(ai + 1, bi + 1), n, |f| p.del(&p.delbar(f)));
                    let mut gens = image(basis_or_empty(ai - 1, bi), &|f| p.del(f));
                    gens.extend(image(basis_or_empty(ai, bi - 1), &|f| p.delbar(f)));
                    (kernel_of(vec![ddbar]), rref_basis(gens, ambient.len()))
                }
                Model::DeRham => unreachable!("handled above"),
            };
            Ok((ambient, num, den))
        }
    }
}

type Vector2 = Vec<Vector>;

fn in_span(vectors: &[Vector], v: &[Scalar], len: usize) -> bool {
    if v.iter().all(Scalar::is_zero) {
        return true;
    }
    span_rank(vectors, len) == span_rank(&[vectors, &[v.to_vec()]].concat(), len)
}

/// One cohomology group with a chosen basis of representatives.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    model: Model,
    grading: Grading,
    n: usize,
    ambient: Vec<Monomial>,
    numerator: Vec<Vector>,
    denominator: Vec<Vector>,
    representatives: Vec<Form>,
    /// Columns: representatives followed by the denominator basis.
    reduction: Matrix,
}

impl CohomologyGroup {
    /// Group with representatives a greedy echelon complement of the denominator.
    pub fn compute(p: &Presentation, model: Model, grading: Grading) -> Result<Self> {
        let (ambient, num, den) = subspaces(p, model, grading)?;
        let len = ambient.len();
        let mut chosen: Vec<Vector> = den.clone();
        let mut reps = Vec::new();
        for v in &num {
            if !in_span(&chosen, v, len) {
                chosen.push(v.clone());
                reps.push(Form::from_coords(p.n(), &ambient, v));
            }
        }
        CohomologyGroup::assemble(p.n(), model, grading, ambient, num, den, reps)
    }

    /// Group represented by the kernel of the matching Laplacian.
    pub fn harmonic(h: &Hodge, model: Model, grading: Grading) -> Result<Self> {
        let (ambient, num, den) = subspaces(h.presentation(), model, grading)?;
        let reps = h.harmonic_basis(model.laplacian(), grading);
        CohomologyGroup::assemble(h.n(), model, grading, ambient, num, den, reps)
    }

    /// Group with caller-supplied representatives, checked to form a basis of the quotient.
    pub fn with_representatives(p: &Presentation, model: Model, grading: Grading, reps: Vec<Form>) -> Result<Self> {
        let (ambient, num, den) = subspaces(p, model, grading)?;
        CohomologyGroup::assemble(p.n(), model, grading, ambient, num, den, reps)
    }

    fn assemble(
        n: usize,
        model: Model,
        grading: Grading,
        ambient: Vec<Monomial>,
        numerator: Vec<Vector>,
        denominator: Vec<Vector>,
        representatives: Vec<Form>,
    ) -> Result<Self> {
        let len = ambient.len();
        let mut cols = Vec::new();
        for r in &representatives {
            let c = r.coords(&ambient).ok_or_else(|| Error::Bidegree(format!("representative {r} outside {grading}")))?;
            if !in_span(&numerator, &c, len) {
                return Err(Error::NotInNumerator { model: model.to_string(), detail: format!("representative {r}") });
            }
            cols.push(c);
        }
        let quotient = numerator.len() - denominator.len();
        cols.extend(denominator.iter().cloned());
        if representatives.len() != quotient || span_rank(&cols, len) != numerator.len() {
            return Err(Error::Validation(format!(
                "{} representatives do not form a basis of the {quotient}-dimensional {model} group in {grading}",
                representatives.len()
            )));
        }
        let reduction = Matrix::from_columns(len, &cols);
        Ok(CohomologyGroup { model, grading, n, ambient, numerator, denominator, representatives, reduction })
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn dimension(&self) -> usize {
        self.representatives.len()
    }

    pub fn numerator_dimension(&self) -> usize {
        self.numerator.len()
    }

    pub fn denominator_dimension(&self) -> usize {
        self.denominator.len()
    }

    pub fn representatives(&self) -> &[Form] {
        &self.representatives
    }

    pub fn ambient(&self) -> &[Monomial] {
        &self.ambient
    }

    fn coords(&self, u: &Form) -> Result<Vector> {
        u.coords(&self.ambient).ok_or_else(|| Error::Bidegree(format!("{u} does not lie in {}", self.grading)))
    }

    pub fn in_numerator(&self, u: &Form) -> Result<bool> {
        Ok(in_span(&self.numerator, &self.coords(u)?, self.ambient.len()))
    }

    pub fn in_denominator(&self, u: &Form) -> Result<bool> {
        Ok(in_span(&self.denominator, &self.coords(u)?, self.ambient.len()))
    }

    /// Coordinates of `[u]` in the representative basis.
    pub fn reduce(&self, u: &Form) -> Result<Vector> {
        let c = self.coords(u)?;
        let Solve::Feasible(sol) = solve_affine(&self.reduction, &c)? else {
            return Err(Error::NotInNumerator { model: self.model.to_string(), detail: format!("{u} in {}", self.grading) });
        };
        Ok(sol.particular[..self.dimension()].to_vec())
    }

    pub fn is_zero_class(&self, u: &Form) -> Result<bool> {
        Ok(self.reduce(u)?.iter().all(Scalar::is_zero))
    }

    /// `Σ c_i r_i` over the representatives.
    pub fn class_form(&self, coords: &[Scalar]) -> Form {
        let mut out = Form::zero(self.n);
        for (c, r) in coords.iter().zip(&self.representatives) {
            out.add_scaled(c, r);
        }
        out
    }

    /// The representative of `[u]` in the span of the chosen basis.
    pub fn normalise(&self, u: &Form) -> Result<Form> {
        Ok(self.class_form(&self.reduce(u)?))
    }
}

/// The group of `model` in `grading`, represented by harmonic forms.
pub fn cohomology(h: &Hodge, model: Model, grading: Grading) -> Result<CohomologyGroup> {
    CohomologyGroup::harmonic(h, model, grading)
}

/// Matrix of the induced map `H_source → H_target` in the representative bases.
pub fn canonical_map(source: &CohomologyGroup, target: &CohomologyGroup) -> Result<Matrix> {
    let order = |m: Model| match m {
        Model::BottChern => Some(0),
        Model::Dolbeault => Some(1),
        Model::Aeppli => Some(2),
        Model::DeRham => None,
    };
    match (order(source.model), order(target.model)) {
        (Some(a), Some(b)) if a < b => {}
        _ => {
            return Err(Error::Unsupported(format!(
                "canonical maps run Bott-Chern -> Dolbeault -> Aeppli, not {} -> {}",
                source.model, target.model
            )))
        }
    }
    if source.grading != target.grading {
        return Err(Error::Bidegree(format!("maps between {} and {}", source.grading, target.grading)));
    }
    let cols: Vec<Vector> = source.representatives.iter().map(|r| target.reduce(r)).collect::<Result<_>>()?;
    Ok(Matrix::from_columns(target.dimension(), &cols))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DdbarEntry {
    pub bidegree: (usize, usize),
    pub h_bc: usize,
    pub h_dolbeault: usize,
    pub h_aeppli: usize,
    pub bc_to_dolbeault_rank: usize,
    pub dolbeault_to_aeppli_rank: usize,
    pub isomorphisms: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DdbarReport {
    pub holds: bool,
    pub entries: Vec<DdbarEntry>,
}

/// True iff `H_BC → H_∂̄ → H_A` are isomorphisms in every bidegree.
pub fn ddbar_test(h: &Hodge) -> Result<DdbarReport> {
    let n = h.n();
    let mut entries = Vec::new();
    for p in 0..=n {
        for q in 0..=n {
            let g = Grading::Bidegree(p, q);
            let bc = cohomology(h, Model::BottChern, g)?;
            let dol = cohomology(h, Model::Dolbeault, g)?;
            let a = cohomology(h, Model::Aeppli, g)?;
            let r1 = canonical_map(&bc, &dol)?.rank();
            let r2 = canonical_map(&dol, &a)?.rank();
            let iso = bc.dimension() == dol.dimension()
                && dol.dimension() == a.dimension()
                && r1 == bc.dimension()
                && r2 == dol.dimension();
            entries.push(DdbarEntry {
                bidegree: (p, q),
                h_bc: bc.dimension(),
                h_dolbeault: dol.dimension(),
                h_aeppli: a.dimension(),
                bc_to_dolbeault_rank: r1,
                dolbeault_to_aeppli_rank: r2,
                isomorphisms: iso,
            });
        }
    }
    Ok(DdbarReport { holds: entries.iter().all(|e| e.isomorphisms), entries })
}

/// `ρ = α^{2,0} + α^{1,1} + α^{0,2} + dβ` with each `α` d-closed.
#[derive(Clone, Debug, PartialEq)]
pub struct HodgeDecomposition {
    /// `α^{2,0}, α^{1,1}, α^{0,2}` of the first solution in echelon order.
    pub pieces: [Form; 3],
    pub beta: Form,
    /// Aeppli coordinates of each piece.
    pub classes: [Vector; 3],
    /// Each class written in the group's representative basis.
    pub class_forms: [Form; 3],
    /// False when another decomposition yields different Aeppli classes.
    pub unique: bool,
}

const TYPES: [(usize, usize); 3] = [(2, 0), (1, 1), (0, 2)];

/// Decomposes a d-closed 2-form, reading classes in the given Aeppli groups of types (2,0), (1,1), (0,2).
pub fn hodge_decompose_2form_in(
    p: &Presentation,
    rho: &Form,
    groups: [&CohomologyGroup; 3],
) -> Result<Feasibility<HodgeDecomposition>> {
    let n = p.n();
    if rho.pure_degree().is_some_and(|d| d != 2) {
        return Err(Error::Degree { expected: 2, found: rho.pure_degree().unwrap_or(0) });
    }
    if !p.d(rho).is_zero() {
        return Err(Error::NotClosed(format!("d({rho}) = {}", p.d(rho))));
    }
    for (g, t) in groups.iter().zip(TYPES) {
        if g.model() != Model::Aeppli || g.grading() != Grading::Bidegree(t.0, t.1) {
            return Err(Error::Usage(format!("expected the Aeppli group of type {t:?}")));
        }
    }
    let blocks: Vec<Vec<Monomial>> = TYPES.iter().map(|&(a, b)| bidegree_basis(n, a, b)).collect();
    let one_forms = degree_basis(n, 1);
    let deg2 = degree_basis(n, 2);
    let deg3 = degree_basis(n, 3);
    let unknowns = blocks.iter().map(Vec::len).sum::<usize>() + one_forms.len();
    let rows = 3 * deg3.len() + deg2.len();
    let mut a = Matrix::zeros(rows, unknowns);
    let mut col = 0;
    for (k, blk) in blocks.iter().enumerate() {
        let dm = matrix_of(blk, &deg3, n, |f| p.d(f));
        let incl = matrix_of(blk, &deg2, n, Form::clone);
        for j in 0..blk.len() {
            for r in 0..deg3.len() {
                a.set(k * deg3.len() + r, col + j, dm.get(r, j));
            }
            for r in 0..deg2.len() {
                a.set(3 * deg3.len() + r, col + j, incl.get(r, j));
            }
        }
        col += blk.len();
    }
    let dbeta = matrix_of(&one_forms, &deg2, n, |f| p.d(f));
    for j in 0..one_forms.len() {
        for r in 0..deg2.len() {
            a.set(3 * deg3.len() + r, col + j, dbeta.get(r, j));
        }
    }
    let mut b = vec![Scalar::zero(); 3 * deg3.len()];
    b.extend(rho.coords(&deg2).ok_or(Error::Degree { expected: 2, found: 0 })?);

    let sol = match solve_affine(&a, &b)? {
        Solve::Infeasible(cert) => return Ok(Feasibility::Infeasible(cert)),
        Solve::Feasible(s) => s,
    };
    let split = |x: &[Scalar]| -> ([Form; 3], Form) {
        let mut off = 0;
        let pieces = std::array::from_fn(|k| {
            let f = Form::from_coords(n, &blocks[k], &x[off..off + blocks[k].len()]);
            off += blocks[k].len();
            f
        });
        let off = blocks.iter().map(Vec::len).sum::<usize>();
        (pieces, Form::from_coords(n, &one_forms, &x[off..]))
    };
    let (pieces, beta) = split(&sol.particular);
    let classes: [Vector; 3] = [groups[0].reduce(&pieces[0])?, groups[1].reduce(&pieces[1])?, groups[2].reduce(&pieces[2])?];
    let class_forms = std::array::from_fn(|k| groups[k].class_form(&classes[k]));
    let mut unique = true;
    for kv in &sol.kernel {
        let (ps, _) = split(kv);
        for k in 0..3 {
            if !groups[k].is_zero_class(&ps[k])? {
                unique = false;
            }
        }
    }
    Ok(Feasibility::Found(HodgeDecomposition { pieces, beta, classes, class_forms, unique }))
}

/// Degree-2 decomposition with harmonic Aeppli representatives.
pub fn hodge_decompose_2form(h: &Hodge, rho: &Form) -> Result<Feasibility<HodgeDecomposition>> {
    let groups: Vec<CohomologyGroup> =
        TYPES.iter().map(|&(a, b)| cohomology(h, Model::Aeppli, Grading::Bidegree(a, b))).collect::<Result<_>>()?;
    hodge_decompose_2form_in(h.presentation(), rho, [&groups[0], &groups[1], &groups[2]])
}

/// `β_min = β_h + ∂̄v_min` with `β_h` the `Δ''`-harmonic representative.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimalRepresentative {
    pub harmonic: Form,
    pub v_min: Form,
    pub representative: Form,
}

/// The ω-minimal d-closed representative of the Dolbeault class of `beta` in bidegree `(p, q)`.
pub fn minimal_d_closed_rep(h: &Hodge, bidegree: (usize, usize), beta: &Form) -> Result<Feasibility<MinimalRepresentative>> {
    let pres = h.presentation();
    let n = h.n();
    let (p, q) = bidegree;
    let dol = cohomology(h, Model::Dolbeault, Grading::Bidegree(p, q))?;
    let harmonic = dol.normalise(beta)?;
    let src = if q == 0 { Vec::new() } else { bidegree_basis(n, p, q - 1) };
    let tgt = if p < n { bidegree_basis(n, p + 1, q) } else { Vec::new() };
    let a = matrix_of(&src, &tgt, n, |f| pres.del(&pres.delbar(f)));
    let rhs = pres.del(&harmonic).scale(&-Scalar::one()).coords(&tgt).expect("∂β has type (p+1,q)");
    let gram = h.metric().gram(&src);
    let Some(v) = min_norm_solution(&a, &rhs, &gram)? else {
        let Solve::Infeasible(cert) = solve_affine(&a, &rhs)? else { unreachable!("min-norm solve reported infeasible") };
        return Ok(Feasibility::Infeasible(cert));
    };
    let v_min = Form::from_coords(n, &src, &v);
    let representative = harmonic.add(&pres.delbar(&v_min));
    debug_assert!(pres.d(&representative).is_zero());
    Ok(Feasibility::Found(MinimalRepresentative { harmonic, v_min, representative }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::exact::same_span;

    fn mono(h: &[usize], a: &[usize]) -> Monomial {
        Monomial::from_indices(h, a).unwrap()
    }

    fn unit(h: &[usize], a: &[usize]) -> Form {
        Form::monomial(3, mono(h, a), Scalar::one())
    }

    fn hodge(name: &str) -> Hodge {
        let m = builtins::load(name).unwrap();
        Hodge::new(&m.presentation, &m.metric).unwrap()
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn s3xs3_bott_chern_table() {
        let h = hodge("s3xs3-calabi-eckmann");
        let want = [((0, 0), 1), ((1, 1), 2), ((2, 1), 1), ((1, 2), 1), ((2, 2), 1), ((3, 2), 1), ((2, 3), 1), ((3, 3), 1)];
        for p in 0..=3 {
            for q in 0..=3 {
                let g = cohomology(&h, Model::BottChern, Grading::Bidegree(p, q)).unwrap();
                let expected = want.iter().find(|(b, _)| *b == (p, q)).map_or(0, |x| x.1);
                assert_eq!(g.dimension(), expected, "h^{{{p},{q}}}_BC");
            }
        }
        let g23 = cohomology(&h, Model::BottChern, Grading::Bidegree(2, 3)).unwrap();
        let c = g23.ambient().len();
        let reps: Vec<Vector> = g23.representatives().iter().map(|r| r.coords(g23.ambient()).unwrap()).collect();
        assert!(same_span(&reps, &[unit(&[1, 2], &[1, 2, 3]).coords(g23.ambient()).unwrap()], c));
    }

    #[test]
    fn torus_dimensions_are_binomial() {
        let h = hodge("torus3");
        for model in [Model::Dolbeault, Model::BottChern, Model::Aeppli] {
            for p in 0..=3 {
                for q in 0..=3 {
                    let g = cohomology(&h, model, Grading::Bidegree(p, q)).unwrap();
                    assert_eq!(g.dimension(), binom(3, p) * binom(3, q));
                }
            }
        }
        for k in 0..=6 {
            assert_eq!(cohomology(&h, Model::DeRham, Grading::Degree(k)).unwrap().dimension(), binom(6, k));
        }
    }

    #[test]
    fn s3xs3_betti_numbers() {
        let h = hodge("s3xs3-calabi-eckmann");
        let b: Vec<usize> = (0..=6).map(|k| cohomology(&h, Model::DeRham, Grading::Degree(k)).unwrap().dimension()).collect();
        assert_eq!(b, vec![1, 0, 0, 2, 0, 0, 1]);
    }

    #[test]
    fn reduce_examples() {
        let h = hodge("s3xs3-calabi-eckmann");
        let a32 = cohomology(&h, Model::Aeppli, Grading::Bidegree(3, 2)).unwrap();
        let x = unit(&[1, 2, 3], &[1, 2]).scale(&Scalar::gaussian(-1, 2, 1, 2));
        assert!(a32.is_zero_class(&x).unwrap());

        let t = hodge("torus3");
        let bc = cohomology(&t, Model::BottChern, Grading::Bidegree(1, 1)).unwrap();
        assert!(!bc.is_zero_class(&unit(&[1], &[1])).unwrap());

        let dol = cohomology(&h, Model::Dolbeault, Grading::Bidegree(1, 1)).unwrap();
        let exact = h.presentation().delbar(&unit(&[1], &[]));
        assert!(!exact.is_zero());
        assert!(dol.is_zero_class(&exact).unwrap());

        let a11 = cohomology(&h, Model::Aeppli, Grading::Bidegree(1, 1)).unwrap();
        assert!(a11.reduce(&unit(&[1, 2], &[])).is_err());
        let bc21 = cohomology(&h, Model::BottChern, Grading::Bidegree(2, 1)).unwrap();
        assert!(matches!(bc21.reduce(&unit(&[1, 2], &[3])), Err(Error::NotInNumerator { .. })));
    }

    #[test]
    fn ddbar_verdicts() {
        assert!(ddbar_test(&hodge("torus3")).unwrap().holds);
        assert!(!ddbar_test(&hodge("s3xs3-calabi-eckmann")).unwrap().holds);
        assert!(!ddbar_test(&hodge("iwasawa")).unwrap().holds);
    }

    #[test]
    fn canonical_map_rejects_reverse_direction() {
        let h = hodge("torus3");
        let g = Grading::Bidegree(1, 1);
        let a = cohomology(&h, Model::Aeppli, g).unwrap();
        let bc = cohomology(&h, Model::BottChern, g).unwrap();
        assert!(canonical_map(&a, &bc).is_err());
        assert_eq!(canonical_map(&bc, &a).unwrap().rank(), 9);
    }

    #[test]
    fn quotient_and_harmonic_dimensions_agree_and_duality_holds() {
        for name in builtins::NAMES {
            let h = hodge(name);
            let p = h.presentation();
            for model in [Model::Dolbeault, Model::BottChern, Model::Aeppli] {
                for a in 0..=3 {
                    for b in 0..=3 {
                        let g = Grading::Bidegree(a, b);
                        let quotient = CohomologyGroup::compute(p, model, g).unwrap().dimension();
                        assert_eq!(quotient, h.harmonic_basis(model.laplacian(), g).len(), "{name} {model} {g}");
                        if model != Model::Dolbeault {
                            let conj = CohomologyGroup::compute(p, model, Grading::Bidegree(b, a)).unwrap().dimension();
                            assert_eq!(quotient, conj, "{name} {model} conjugation {g}");
                        }
                    }
                }
            }
            for a in 0..=3 {
                for b in 0..=3 {
                    let bc = CohomologyGroup::compute(p, Model::BottChern, Grading::Bidegree(a, b)).unwrap().dimension();
                    let ae = CohomologyGroup::compute(p, Model::Aeppli, Grading::Bidegree(3 - b, 3 - a)).unwrap().dimension();
                    assert_eq!(bc, ae, "{name} duality ({a},{b})");
                }
            }
            for k in 0..=6 {
                let quotient = CohomologyGroup::compute(p, Model::DeRham, Grading::Degree(k)).unwrap().dimension();
                assert_eq!(quotient, h.harmonic_basis(Laplacian::Full, Grading::Degree(k)).len(), "{name} deg {k}");
            }
        }
    }

    #[test]
    fn hodge_decomposition_examples() {
        let t = hodge("torus3");
        let omega = t.metric().form().clone();
        let d = hodge_decompose_2form(&t, &omega).unwrap().found().unwrap();
        assert!(d.unique);
        assert!(d.classes[0].iter().all(Scalar::is_zero) && d.classes[2].iter().all(Scalar::is_zero));
        assert_eq!(d.class_forms[1], omega);

        let rho = unit(&[1, 2], &[]).add(&unit(&[], &[1, 2]));
        let d = hodge_decompose_2form(&t, &rho).unwrap().found().unwrap();
        assert_eq!(d.class_forms[0], unit(&[1, 2], &[]));
        assert!(d.class_forms[1].is_zero());
        assert_eq!(d.class_forms[2], unit(&[], &[1, 2]));

        let s = hodge("s3xs3-calabi-eckmann");
        let p = s.presentation();
        for m in degree_basis(3, 1) {
            let rho = p.d(&Form::monomial(3, m, Scalar::one()));
            let d = hodge_decompose_2form(&s, &rho).unwrap().found().unwrap();
            assert!(d.class_forms.iter().all(Form::is_zero));
        }
        assert!(matches!(hodge_decompose_2form(&s, &unit(&[3], &[3])), Err(Error::NotClosed(_))));
    }

    #[test]
    fn minimal_representatives() {
        let t = hodge("torus3");
        let beta = unit(&[1], &[2]);
        let r = minimal_d_closed_rep(&t, (1, 1), &beta).unwrap().found().unwrap();
        assert_eq!(r.representative, beta);
        assert!(r.v_min.is_zero());
        let z = minimal_d_closed_rep(&t, (1, 1), &Form::zero(3)).unwrap().found().unwrap();
        assert!(z.representative.is_zero());

        let iw = hodge("iwasawa");
        let out = minimal_d_closed_rep(&iw, (1, 0), &unit(&[3], &[])).unwrap();
        match out {
            Feasibility::Infeasible(cert) => assert!(!cert.left.is_empty()),
            Feasibility::Found(r) => panic!("unexpected representative {:?}", r.representative),
        }
    }

    #[test]
    fn minimal_representative_is_closed_and_cohomologous() {
        for name in builtins::NAMES {
            let h = hodge(name);
            for (p, q) in [(1, 1), (2, 1), (1, 2), (0, 1)] {
                let dol = cohomology(&h, Model::Dolbeault, Grading::Bidegree(p, q)).unwrap();
                for rep in dol.representatives() {
                    if let Feasibility::Found(r) = minimal_d_closed_rep(&h, (p, q), rep).unwrap() {
                        assert!(h.presentation().d(&r.representative).is_zero());
                        assert_eq!(dol.reduce(&r.representative).unwrap(), dol.reduce(rep).unwrap());
                    }
                }
            }
        }
    }
}
