//! SKT metrics and polarisation: the α-equation, `L_[ω]`, primitive classes,
//! Calabi-Yau maps and the polarised tangent space.

use crate::algebra::{bidegree_basis, matrix_of, vector_basis, Form, Monomial, Presentation, VectorForm};
use crate::cohomology::{cohomology, CohomologyGroup, Model};
use crate::error::{Error, Result};
use crate::exact::{
    min_norm_solution, rref_basis, same_span, solve_affine, span_rank, Feasibility, Matrix, Scalar, Solve, Vector,
};
use crate::metric::{Grading, Hodge, HermitianMetric};

/// `∂∂̄ω`; the metric is SKT iff this vanishes.
pub fn ddbar_omega(p: &Presentation, metric: &HermitianMetric) -> Form {
    p.del(&p.delbar(metric.form()))
}

pub fn skt_check(p: &Presentation, metric: &HermitianMetric) -> bool {
    ddbar_omega(p, metric).is_zero()
}

/// The `(0,1)`-form of minimal norm with `∂∂̄α = ∂̄ω`.
pub fn solve_alpha(h: &Hodge) -> Result<Feasibility<Form>> {
    let p = h.presentation();
    let n = h.n();
    let src = bidegree_basis(n, 0, 1);
    let tgt = bidegree_basis(n, 1, 2);
    let a = matrix_of(&src, &tgt, n, |f| p.del(&p.delbar(f)));
    let rhs = p.delbar(h.metric().form()).coords(&tgt).expect("∂̄ω has type (1,2)");
    match min_norm_solution(&a, &rhs, &h.metric().gram(&src))? {
        Some(x) => Ok(Feasibility::Found(Form::from_coords(n, &src, &x))),
        None => match solve_affine(&a, &rhs)? {
            Solve::Infeasible(cert) => Ok(Feasibility::Infeasible(cert)),
            Solve::Feasible(_) => unreachable!("min-norm solve reported infeasible"),
        },
    }
}

/// An SKT metric with its α and the derived forms `ω̃`, `ω̂`, `ζ`.
pub struct SktContext<'a> {
    hodge: &'a Hodge,
    alpha: Feasibility<Form>,
}

impl<'a> SktContext<'a> {
    pub fn new(hodge: &'a Hodge) -> Result<Self> {
        let r = ddbar_omega(hodge.presentation(), hodge.metric());
        if !r.is_zero() {
            return Err(Error::Validation(format!("metric is not SKT: ∂∂̄ω = {r}")));
        }
        Ok(SktContext { hodge, alpha: solve_alpha(hodge)? })
    }

    pub fn hodge(&self) -> &'a Hodge {
        self.hodge
    }

    pub fn presentation(&self) -> &'a Presentation {
        self.hodge.presentation()
    }

    pub fn n(&self) -> usize {
        self.hodge.n()
    }

    pub fn omega(&self) -> &'a Form {
        self.hodge.metric().form()
    }

    pub fn alpha_outcome(&self) -> &Feasibility<Form> {
        &self.alpha
    }

    pub fn alpha(&self) -> Option<&Form> {
        match &self.alpha {
            Feasibility::Found(a) => Some(a),
            Feasibility::Infeasible(_) => None,
        }
    }

    fn require_alpha(&self) -> Result<&Form> {
        self.alpha().ok_or_else(|| Error::Infeasible("∂̄ω = ∂∂̄α has no invariant solution".into()))
    }

    /// `ω̃ = ω + ∂α + ∂̄ᾱ`, d-closed of type (1,1).
    pub fn omega_tilde(&self) -> Result<Form> {
        let a = self.require_alpha()?;
        let p = self.presentation();
        Ok(self.omega().add(&p.del(a)).add(&p.delbar(&a.conj())))
    }

    /// `ω̂ = −∂ᾱ + ω − ∂̄α`, real and d-closed with (1,1)-part `ω`.
    pub fn omega_hat(&self) -> Result<Form> {
        let a = self.require_alpha()?;
        let p = self.presentation();
        Ok(self.omega().sub(&p.del(&a.conj())).sub(&p.delbar(a)))
    }

    /// `ζ = ω + ∂α`, a `∂̄`-closed representative of the Dolbeault class attached to `[ω]_A`.
    pub fn zeta(&self) -> Result<Form> {
        let a = self.require_alpha()?;
        Ok(self.omega().add(&self.presentation().del(a)))
    }
}

/// A nonvanishing `∂̄`-closed `(n,0)`-form.
#[derive(Clone, Debug, PartialEq)]
pub struct HolomorphicVolume {
    u: Form,
}

impl HolomorphicVolume {
    pub fn new(p: &Presentation, u: Form) -> Result<Self> {
        let n = p.n();
        if u.is_zero() || u.pure_bidegree() != Some((n, 0)) {
            return Err(Error::MissingVolume(format!("{u} is not a nonzero ({n},0)-form")));
        }
        let r = p.delbar(&u);
        if !r.is_zero() {
            return Err(Error::MissingVolume(format!("∂̄u = {r} ≠ 0")));
        }
        Ok(HolomorphicVolume { u })
    }

    /// `(1..n|)` if it is holomorphic; the invariant `(n,0)` space is one-dimensional.
    pub fn standard(p: &Presentation) -> Result<Self> {
        let n = p.n();
        HolomorphicVolume::new(p, Form::monomial(n, Monomial::new(crate::algebra::full_mask(n), 0), Scalar::one()))
    }

    pub fn form(&self) -> &Form {
        &self.u
    }
}

/// `[ω ∧ γ]_A` for a Bott-Chern representative `γ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LOmegaValue {
    pub wedge: Form,
    pub class: Vector,
    pub class_form: Form,
}

fn bc_group(ctx: &SktContext<'_>, bideg: (usize, usize)) -> Result<CohomologyGroup> {
    cohomology(ctx.hodge(), Model::BottChern, Grading::Bidegree(bideg.0, bideg.1))
}

fn aeppli_group(ctx: &SktContext<'_>, bideg: (usize, usize)) -> Result<CohomologyGroup> {
    let n = ctx.n();
    if bideg.0 > n || bideg.1 > n {
        return Err(Error::Bidegree(format!("({},{}) exceeds dimension {n}", bideg.0, bideg.1)));
    }
    cohomology(ctx.hodge(), Model::Aeppli, Grading::Bidegree(bideg.0, bideg.1))
}

/// `L_[ω]([γ]_BC) = [ω∧γ]_A`.
pub fn l_omega(ctx: &SktContext<'_>, bideg: (usize, usize), gamma: &Form) -> Result<LOmegaValue> {
    l_omega_with(ctx, ctx.omega(), bideg, gamma)
}

/// `L` computed with an arbitrary Aeppli-representative `omega` of the metric class.
pub fn l_omega_with(ctx: &SktContext<'_>, omega: &Form, bideg: (usize, usize), gamma: &Form) -> Result<LOmegaValue> {
    let bc = bc_group(ctx, bideg)?;
    if !bc.in_numerator(gamma)? {
        return Err(Error::NotInNumerator { model: Model::BottChern.to_string(), detail: format!("{gamma}") });
    }
    let target = aeppli_group(ctx, (bideg.0 + 1, bideg.1 + 1))?;
    let wedge = omega.wedge(gamma);
    let class = target.reduce(&wedge)?;
    let class_form = target.class_form(&class);
    Ok(LOmegaValue { wedge, class, class_form })
}

/// Matrix of `L_[ω]` from the harmonic Bott-Chern basis of `bideg` to Aeppli coordinates.
pub fn l_omega_matrix(ctx: &SktContext<'_>, bideg: (usize, usize)) -> Result<Matrix> {
    let bc = bc_group(ctx, bideg)?;
    let rows = if bideg.0 < ctx.n() && bideg.1 < ctx.n() { aeppli_group(ctx, (bideg.0 + 1, bideg.1 + 1))?.dimension() } else { 0 };
    let cols: Vec<Vector> = bc
        .representatives()
        .iter()
        .map(|r| if rows == 0 { Ok(Vec::new()) } else { l_omega(ctx, bideg, r).map(|v| v.class) })
        .collect::<Result<_>>()?;
    Ok(Matrix::from_columns(rows, &cols))
}

/// `ker L_[ω]` on an antidiagonal bidegree `(p, n−p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimitiveClassSpace {
    pub bidegree: (usize, usize),
    pub bc_dimension: usize,
    pub image_rank: usize,
    /// Kernel vectors in the harmonic Bott-Chern coordinates.
    pub coordinates: Vec<Vector>,
    /// The corresponding Bott-Chern representatives.
    pub basis: Vec<Form>,
}

impl PrimitiveClassSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

pub fn primitive_class_space(ctx: &SktContext<'_>, bideg: (usize, usize)) -> Result<PrimitiveClassSpace> {
    if bideg.0 + bideg.1 != ctx.n() {
        return Err(Error::Bidegree(format!("primitivity is defined on bidegrees (p, n-p); got ({},{})", bideg.0, bideg.1)));
    }
    let bc = bc_group(ctx, bideg)?;
    let l = l_omega_matrix(ctx, bideg)?;
    let coordinates =
        if l.rows() == 0 { rref_basis(Matrix::identity(bc.dimension()).columns(), bc.dimension()) } else { l.kernel() };
    let basis = coordinates.iter().map(|c| bc.class_form(c)).collect();
    Ok(PrimitiveClassSpace { bidegree: bideg, bc_dimension: bc.dimension(), image_rank: l.rank(), coordinates, basis })
}

/// The linear system searched for a primitive representative, with its outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimitiveSearch {
    pub outcome: Feasibility<Form>,
    pub matrix: Matrix,
    pub rhs: Vector,
    /// Whether the search was restricted to d-closed representatives of the Dolbeault class.
    pub d_closed: bool,
}

/// Searches `γ + ∂∂̄β` (or, with `d_closed`, `d`-closed `γ + ∂̄η`) for a form with `ω ∧ v = 0`.
pub fn primitive_representative(
    ctx: &SktContext<'_>,
    bideg: (usize, usize),
    gamma: &Form,
    d_closed: bool,
) -> Result<PrimitiveSearch> {
    let n = ctx.n();
    let (p, q) = bideg;
    if p + q != n {
        return Err(Error::Bidegree(format!("primitivity is defined on bidegrees (p, n-p); got ({p},{q})")));
    }
    let lv = l_omega(ctx, bideg, gamma)?;
    if !lv.class.iter().all(Scalar::is_zero) {
        return Err(Error::NotPrimitive(format!("L_[ω]([{gamma}]) = [{}]_A ≠ 0", lv.class_form)));
    }
    let pres = ctx.presentation();
    let power = ctx.omega();
    let prim_target = if p > 0 && q > 0 { bidegree_basis(n, p + 1, q + 1) } else { Vec::new() };
    let base_rhs = power.wedge(gamma).scale(&-Scalar::one());
    let (src, matrix, rhs): (Vec<Monomial>, Matrix, Vector) = if !d_closed {
        let src = if p > 0 && q > 0 { bidegree_basis(n, p - 1, q - 1) } else { Vec::new() };
        let m = matrix_of(&src, &prim_target, n, |f| power.wedge(&pres.del(&pres.delbar(f))));
        (src, m, base_rhs.coords(&prim_target).expect("ω^k∧γ type"))
    } else {
        let src = if q > 0 { bidegree_basis(n, p, q - 1) } else { Vec::new() };
        let del_target = if p < n { bidegree_basis(n, p + 1, q) } else { Vec::new() };
        let prim = matrix_of(&src, &prim_target, n, |f| power.wedge(&pres.delbar(f)));
        let closed = matrix_of(&src, &del_target, n, |f| pres.del(&pres.delbar(f)));
        let m = prim.vstack(&closed)?;
        let mut rhs = base_rhs.coords(&prim_target).expect("ω^k∧γ type");
        rhs.extend(pres.del(gamma).scale(&-Scalar::one()).coords(&del_target).expect("∂γ type"));
        (src, m, rhs)
    };
    let outcome = match solve_affine(&matrix, &rhs)? {
        Solve::Feasible(sol) => {
            let x = Form::from_coords(n, &src, &sol.particular);
            let v = if d_closed { gamma.add(&pres.delbar(&x)) } else { gamma.add(&pres.del(&pres.delbar(&x))) };
            debug_assert!(power.wedge(&v).is_zero());
            Feasibility::Found(v)
        }
        Solve::Infeasible(cert) => {
            if !cert.verify(&matrix, &rhs) {
                return Err(Error::Infeasible("infeasibility certificate failed re-verification".into()));
            }
            Feasibility::Infeasible(cert)
        }
    };
    Ok(PrimitiveSearch { outcome, matrix, rhs, d_closed })
}

/// `T̃_[u]([θ]) = [θ⌟u + ∂̄η]_BC` with `η` of minimal norm solving `∂(θ⌟u + ∂̄η) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CalabiYauImage {
    pub contraction: Form,
    pub eta: Form,
    pub representative: Form,
    pub class: Vector,
}

pub fn calabi_yau_map(h: &Hodge, theta: &VectorForm, u: &HolomorphicVolume) -> Result<Feasibility<CalabiYauImage>> {
    let pres = h.presentation();
    let n = h.n();
    if theta.q() != 1 {
        return Err(Error::Degree { expected: 1, found: theta.q() });
    }
    let r = pres.delbar_vector(theta);
    if !r.is_zero() {
        return Err(Error::NotClosed(format!("∂̄θ = {r}")));
    }
    let x = theta.contract(u.form());
    let src = bidegree_basis(n, n - 1, 0);
    let tgt = bidegree_basis(n, n, 1);
    let a = matrix_of(&src, &tgt, n, |f| pres.del(&pres.delbar(f)));
    let rhs = pres.del(&x).scale(&-Scalar::one()).coords(&tgt).expect("∂(θ⌟u) has type (n,1)");
    let Some(e) = min_norm_solution(&a, &rhs, &h.metric().gram(&src))? else {
        let Solve::Infeasible(cert) = solve_affine(&a, &rhs)? else { unreachable!("min-norm solve reported infeasible") };
        return Ok(Feasibility::Infeasible(cert));
    };
    let eta = Form::from_coords(n, &src, &e);
    let representative = x.add(&pres.delbar(&eta));
    let bc = cohomology(h, Model::BottChern, Grading::Bidegree(n - 1, 1))?;
    let class = bc.reduce(&representative)?;
    Ok(Feasibility::Found(CalabiYauImage { contraction: x, eta, representative, class }))
}

/// Matrix of `f_[u]: H^{0,q}_∂̄ → H^{n,q}_∂̄`, `[ξ] ↦ [u∧ξ]`.
pub fn wedge_u_iso(h: &Hodge, u: &HolomorphicVolume, q: usize) -> Result<Matrix> {
    let n = h.n();
    let src = cohomology(h, Model::Dolbeault, Grading::Bidegree(0, q))?;
    let tgt = cohomology(h, Model::Dolbeault, Grading::Bidegree(n, q))?;
    let cols: Vec<Vector> = src.representatives().iter().map(|x| tgt.reduce(&u.form().wedge(x))).collect::<Result<_>>()?;
    Ok(Matrix::from_columns(tgt.dimension(), &cols))
}

/// `H^{0,1}(X, T^{1,0}X) = ker ∂̄ / im ∂̄` on invariant vector forms.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorCohomology {
    pub representatives: Vec<VectorForm>,
    reduction: Matrix,
    n: usize,
}

impl VectorCohomology {
    pub fn compute(p: &Presentation) -> Self {
        let n = p.n();
        let basis = vector_basis(n, 1);
        let len = basis.len();
        let num = p.vector_delbar_matrix(1).kernel();
        let den = p.vector_delbar_matrix(0).column_space();
        let mut chosen = den.clone();
        let mut reps = Vec::new();
        for v in &num {
            let before = span_rank(&chosen, len);
            chosen.push(v.clone());
            if span_rank(&chosen, len) > before {
                reps.push(VectorForm::from_coords(n, 1, &basis, v));
            } else {
                chosen.pop();
            }
        }
        let mut cols: Vec<Vector> = reps.iter().map(|r| r.coords(&basis).expect("basis")).collect();
        cols.extend(den);
        VectorCohomology { representatives: reps, reduction: Matrix::from_columns(len, &cols), n }
    }

    pub fn dimension(&self) -> usize {
        self.representatives.len()
    }

    /// Coordinates of `[θ]`; errors if `θ` is not `∂̄`-closed.
    pub fn reduce(&self, theta: &VectorForm) -> Result<Vector> {
        let c = theta.coords(&vector_basis(self.n, 1)).ok_or_else(|| Error::Degree { expected: 1, found: theta.q() })?;
        match solve_affine(&self.reduction, &c)? {
            Solve::Feasible(s) => Ok(s.particular[..self.dimension()].to_vec()),
            Solve::Infeasible(_) => Err(Error::NotClosed(format!("∂̄θ ≠ 0 for θ = {theta}"))),
        }
    }

    pub fn class_form(&self, coords: &[Scalar]) -> VectorForm {
        let mut out = VectorForm::zero(self.n, 1);
        for (c, r) in coords.iter().zip(&self.representatives) {
            out = out.add(&r.scale(c));
        }
        out
    }
}

/// `H^{0,1}(X,T^{1,0}X)_[ω] = ker([θ] ↦ [θ⌟ζ]_∂̄)` with its consistency checks.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarisedTangentSpace {
    pub h01_dimension: usize,
    pub basis: Vec<VectorForm>,
    /// Dimension of `ker([θ] ↦ [θ⌟ζ]_A)`.
    pub aeppli_kernel_dimension: usize,
    /// Whether `T̃_[u]` maps the basis onto the primitive classes of type `(n−1,1)`; `None` without `u`.
    pub calabi_yau_matches_primitive: Option<bool>,
}

impl PolarisedTangentSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

pub fn polarised_tangent_space(ctx: &SktContext<'_>, u: Option<&HolomorphicVolume>) -> Result<PolarisedTangentSpace> {
    let h = ctx.hodge();
    let n = ctx.n();
    let zeta = ctx.zeta()?;
    let vc = VectorCohomology::compute(ctx.presentation());
    let dol = cohomology(h, Model::Dolbeault, Grading::Bidegree(0, 2))?;
    let aep = aeppli_group(ctx, (0, 2))?;
    let contractions: Vec<Form> = vc.representatives.iter().map(|t| t.contract(&zeta)).collect();
    let dmap: Vec<Vector> = contractions.iter().map(|x| dol.reduce(x)).collect::<Result<_>>()?;
    let amap: Vec<Vector> = contractions.iter().map(|x| aep.reduce(x)).collect::<Result<_>>()?;
    let dmat = Matrix::from_columns(dol.dimension(), &dmap);
    let amat = Matrix::from_columns(aep.dimension(), &amap);
    let kernel = if dmat.rows() == 0 { Matrix::identity(vc.dimension()).columns() } else { dmat.kernel() };
    let aeppli_kernel_dimension = if amat.rows() == 0 { vc.dimension() } else { amat.kernel().len() };
    let basis: Vec<VectorForm> = kernel.iter().map(|c| vc.class_form(c)).collect();

    let calabi_yau_matches_primitive = match u {
        None => None,
        Some(u) => {
            let prim = primitive_class_space(ctx, (n - 1, 1))?;
            let mut images = Vec::new();
            let mut ok = true;
            for t in &basis {
                match calabi_yau_map(h, t, u)? {
                    Feasibility::Found(img) => images.push(img.class),
                    Feasibility::Infeasible(_) => ok = false,
                }
            }
            let len = prim.bc_dimension;
            Some(ok && span_rank(&images, len) == images.len() && same_span(&images, &prim.coordinates, len))
        }
    };
    Ok(PolarisedTangentSpace { h01_dimension: vc.dimension(), basis, aeppli_kernel_dimension, calabi_yau_matches_primitive })
}

/// `v = v_prim + ω∧ζ` for `v` of type `(n−1,1)` and `ζ` of type `(n−2,0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LefschetzSplit {
    pub primitive: Form,
    pub zeta: Form,
    pub omega_zeta: Form,
}

/// `⋆` eigenvalues on primitive `(n−1,1)`-forms and on `ω ∧ Λ^{n−2,0}`.
pub fn lefschetz_star_eigenvalues(n: usize) -> (Scalar, Scalar) {
    let n = n as i64;
    // primitive-star formula with (p,q) = (n−1,1), and ⋆(ω∧v) = i^{n(n−2)} ω∧v
    (Scalar::sign(n * (n + 1) / 2) * Scalar::i_pow(n - 2), Scalar::i_pow(n * (n - 2)))
}

pub fn lefschetz_split(metric: &HermitianMetric, v: &Form) -> Result<LefschetzSplit> {
    let n = metric.n();
    if n < 2 {
        return Err(Error::Dimension("the Lefschetz split needs n >= 2".into()));
    }
    if !v.is_zero() && v.pure_bidegree() != Some((n - 1, 1)) {
        return Err(Error::Bidegree(format!("expected a ({},1)-form, got {v}", n - 1)));
    }
    let omega = metric.form();
    let src = bidegree_basis(n, n - 2, 0);
    let tgt = bidegree_basis(n, n, 2);
    let a = matrix_of(&src, &tgt, n, |f| omega.wedge(&omega.wedge(f)));
    let rhs = omega.wedge(v).coords(&tgt).expect("ω∧v has type (n,2)");
    let Solve::Feasible(sol) = solve_affine(&a, &rhs)? else {
        return Err(Error::Infeasible("ω∧(v − ω∧ζ) = 0 has no solution".into()));
    };
    let zeta = Form::from_coords(n, &src, &sol.particular);
    let omega_zeta = omega.wedge(&zeta);
    Ok(LefschetzSplit { primitive: v.sub(&omega_zeta), zeta, omega_zeta })
}
