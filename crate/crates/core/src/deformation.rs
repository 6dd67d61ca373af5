//! Finite deformations of the bigrading along a `(0,1)`-vector form `θ`:
//! the coframe `η^i = φ^i − t Σ_j θ^i_{j̄} φ̄^j` and its consequences.

use crate::algebra::{bidegree_basis, Form, Presentation, VectorForm};
use crate::cohomology::{cohomology, hodge_decompose_2form_in, CohomologyGroup, Model};
use crate::error::{Error, Result};
use crate::exact::{solve_affine, Feasibility, Matrix, Scalar, Solve, Vector};
use crate::metric::{Grading, HermitianMetric};
use crate::polarisation::SktContext;

/// Rewrites `u` through the images of the generators `φ^1..φ^n, φ̄^1..φ̄^n`.
fn substitute(u: &Form, images: &[Form]) -> Form {
    let n = u.n();
    let mut out = Form::zero(n);
    for (m, c) in u.terms() {
        let mut acc = Form::monomial(n, crate::algebra::Monomial::new(0, 0), c.clone());
        for i in m.hol_indices() {
            acc = acc.wedge(&images[i - 1]);
        }
        for j in m.anti_indices() {
            acc = acc.wedge(&images[n + j - 1]);
        }
        out = out.add(&acc);
    }
    out
}

fn generator(n: usize, a: usize) -> Form {
    if a < n {
        Form::phi(n, a + 1)
    } else {
        Form::phibar(n, a - n + 1)
    }
}

fn images_of(m: &Matrix, n: usize) -> Vec<Form> {
    (0..2 * n)
        .map(|a| {
            let mut f = Form::zero(n);
            for (b, c) in m.row_entries(a) {
                f.add_scaled(c, &generator(n, b));
            }
            f
        })
        .collect()
}

/// `M` with `(η, η̄) = M (φ, φ̄)`.
fn change_of_basis(theta: &VectorForm, t: &Scalar) -> Matrix {
    let n = theta.n();
    let mut m = Matrix::identity(2 * n);
    for (vm, c) in theta.terms() {
        let i = vm.index;
        let j = vm.anti.trailing_zeros() as usize;
        m.set(i, n + j, -(t * c));
        m.set(n + i, j, -(t.conj() * c.conj()));
    }
    m
}

fn check_theta(p: &Presentation, theta: &VectorForm) -> Result<()> {
    if theta.n() != p.n() {
        return Err(Error::Dimension(format!("θ lives in dimension {}, presentation in {}", theta.n(), p.n())));
    }
    if theta.q() != 1 {
        return Err(Error::Degree { expected: 1, found: theta.q() });
    }
    Ok(())
}

struct Coframe {
    m: Matrix,
    n_inv: Matrix,
    /// `dη^i` written in the deformed coframe.
    dtable: Vec<Form>,
}

fn coframe(p: &Presentation, theta: &VectorForm, t: &Scalar) -> Result<Coframe> {
    check_theta(p, theta)?;
    let n = p.n();
    let m = change_of_basis(theta, t);
    let n_inv = m.inverse().ok_or_else(|| Error::DegenerateCoframe(format!("η and η̄ are dependent at t = {t} for θ = {theta}")))?;
    let back = images_of(&n_inv, n);
    let forward = images_of(&m, n);
    let dtable = (0..n).map(|i| substitute(&p.d(&forward[i]), &back)).collect();
    Ok(Coframe { m, n_inv, dtable })
}

/// The `(0,2)_t` parts of `dη^i`; all vanish iff the deformed bigrading is integrable.
pub fn integrability_defect(p: &Presentation, theta: &VectorForm, t: &Scalar) -> Result<Vec<Form>> {
    Ok(coframe(p, theta, t)?.dtable.iter().map(|f| f.component(0, 2)).collect())
}

/// An integrable deformed bigrading with its structure equations in the `η` coframe.
#[derive(Clone, Debug)]
pub struct DeformedStructure {
    base: Presentation,
    theta: VectorForm,
    t: Scalar,
    presentation: Presentation,
    m: Matrix,
    n_inv: Matrix,
}

pub fn deform(p: &Presentation, theta: &VectorForm, t: &Scalar) -> Result<DeformedStructure> {
    check_theta(p, theta)?;
    let r = p.delbar_vector(theta);
    if !r.is_zero() {
        return Err(Error::NotClosed(format!("∂̄θ = {r}")));
    }
    let cf = coframe(p, theta, t)?;
    let defect: Vec<String> =
        cf.dtable.iter().enumerate().filter(|(_, f)| !f.component(0, 2).is_zero()).map(|(i, f)| format!("dη^{}: {}", i + 1, f.component(0, 2))).collect();
    if !defect.is_empty() {
        return Err(Error::NotIntegrable(defect.join("; ")));
    }
    let names = if t.is_zero() { p.names().to_vec() } else { (1..=p.n()).map(|i| format!("eta{i}")).collect() };
    let presentation = Presentation::new(names, cf.dtable)?;
    Ok(DeformedStructure { base: p.clone(), theta: theta.clone(), t: t.clone(), presentation, m: cf.m, n_inv: cf.n_inv })
}

impl DeformedStructure {
    pub fn base(&self) -> &Presentation {
        &self.base
    }

    pub fn theta(&self) -> &VectorForm {
        &self.theta
    }

    pub fn t(&self) -> &Scalar {
        &self.t
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// `(η, η̄) = M (φ, φ̄)`.
    pub fn change_of_basis(&self) -> &Matrix {
        &self.m
    }

    pub fn inverse_change_of_basis(&self) -> &Matrix {
        &self.n_inv
    }

    /// Rewrites a form in the base coframe into the `η` coframe.
    pub fn to_deformed(&self, u: &Form) -> Form {
        substitute(u, &images_of(&self.n_inv, self.base.n()))
    }

    pub fn from_deformed(&self, u: &Form) -> Form {
        substitute(u, &images_of(&self.m, self.base.n()))
    }
}

/// Definition-1 polarisation test of the deformed fibre.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarisationCheck {
    pub polarised: bool,
    /// `[ω̃]_{A,t}^{0,2}` and `[ω̃]_{A,t}^{2,0}` in the deformed Aeppli groups.
    pub class_02: Vector,
    pub class_20: Vector,
    pub omega_tilde_t: Form,
}

fn deformed_aeppli(p: &Presentation) -> Result<Vec<CohomologyGroup>> {
    [(2, 0), (1, 1), (0, 2)].iter().map(|&(a, b)| CohomologyGroup::compute(p, Model::Aeppli, Grading::Bidegree(a, b))).collect()
}

pub fn polarisation_check(ds: &DeformedStructure, ctx: &SktContext<'_>) -> Result<PolarisationCheck> {
    let rho = ds.to_deformed(&ctx.omega_tilde()?);
    let groups = deformed_aeppli(ds.presentation())?;
    let dec = match hodge_decompose_2form_in(ds.presentation(), &rho, [&groups[0], &groups[1], &groups[2]])? {
        Feasibility::Found(d) => d,
        Feasibility::Infeasible(_) => {
            return Err(Error::NotApplicable("the deformed fibre admits no Aeppli decomposition of {ω̃}".into()))
        }
    };
    if !dec.unique {
        return Err(Error::NotApplicable("the Aeppli decomposition on the deformed fibre is not unique".into()));
    }
    let zero = |v: &Vector| v.iter().all(Scalar::is_zero);
    let [class_20, _, class_02] = dec.classes;
    if zero(&class_02) != zero(&class_20) {
        return Err(Error::Validation("the (0,2) and (2,0) projections of a real class disagree".into()));
    }
    Ok(PolarisationCheck { polarised: zero(&class_02), class_02, class_20, omega_tilde_t: rho })
}

/// The linear-in-t coefficient of the `(0,2)_t` part of `ω̃` along `tθ`, against `[θ⌟ζ]_A`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentConsistency {
    pub linear_coefficient: Form,
    pub expected: Form,
    pub agrees: bool,
}

const FIT_DEGREE: usize = 12;

pub fn polarised_tangent_consistency(ctx: &SktContext<'_>, theta: &VectorForm) -> Result<TangentConsistency> {
    let p = ctx.presentation();
    let n = ctx.n();
    let omega_tilde = ctx.omega_tilde()?;
    let expected = theta.contract(&ctx.zeta()?);
    let basis = bidegree_basis(n, 0, 2);
    let mut samples: Vec<(Scalar, Vector)> = Vec::new();
    let mut k = 1;
    while samples.len() < FIT_DEGREE + 3 {
        if k > 200 {
            return Err(Error::NotApplicable("too many degenerate sample points".into()));
        }
        let t = Scalar::ratio(1, k + 1);
        k += 1;
        let ds = match deform(p, theta, &t) {
            Ok(ds) => ds,
            Err(Error::DegenerateCoframe(_)) => continue,
            Err(e) => return Err(e),
        };
        let c = ds.to_deformed(&omega_tilde).component(0, 2).coords(&basis).expect("(0,2) basis");
        samples.push((t, c));
    }
    // Polynomial fit through the first FIT_DEGREE + 1 samples, verified on the rest.
    let (fit, check) = samples.split_at(FIT_DEGREE + 1);
    let vander = Matrix::from_dense(
        fit.len(),
        FIT_DEGREE + 1,
        &fit.iter().map(|(t, _)| (0..=FIT_DEGREE as u32).map(|e| t.pow(e)).collect()).collect::<Vec<_>>(),
    );
    let mut linear = Vec::with_capacity(basis.len());
    for idx in 0..basis.len() {
        let rhs: Vector = fit.iter().map(|(_, c)| c[idx].clone()).collect();
        let Solve::Feasible(sol) = solve_affine(&vander, &rhs)? else { unreachable!("Vandermonde matrix is invertible") };
        let coeffs = sol.particular;
        for (t, c) in check {
            let mut v = Scalar::zero();
            for (e, a) in coeffs.iter().enumerate() {
                v += &(a.clone() * t.pow(e as u32));
            }
            if v != c[idx] {
                return Err(Error::NotApplicable("the (0,2)_t component is not polynomial in t".into()));
            }
        }
        linear.push(coeffs[1].clone());
    }
    let linear_coefficient = Form::from_coords(n, &basis, &linear);
    let group = cohomology(ctx.hodge(), Model::Aeppli, Grading::Bidegree(0, 2))?;
    let agrees = group.reduce(&linear_coefficient)? == group.reduce(&expected)?;
    Ok(TangentConsistency { linear_coefficient, expected, agrees })
}

/// The `(1,1)_t` part of `ω̂` on the deformed fibre, as an SKT metric there.
#[derive(Clone, Debug)]
pub struct DeformedSktMetric {
    pub form: Form,
    pub metric: HermitianMetric,
}

pub fn deformed_skt_metric(ds: &DeformedStructure, ctx: &SktContext<'_>) -> Result<DeformedSktMetric> {
    let form = ds.to_deformed(&ctx.omega_hat()?).component(1, 1);
    if form.conj() != form {
        return Err(Error::Validation(format!("(1,1)_t part of ω̂ is not real: {form}")));
    }
    let q = ds.presentation();
    let r = q.del(&q.delbar(&form));
    if !r.is_zero() {
        return Err(Error::Validation(format!("∂_t∂̄_t ω_t = {r} ≠ 0")));
    }
    let metric = HermitianMetric::from_form(&form)?;
    Ok(DeformedSktMetric { form, metric })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{degree_basis, Monomial};
    use crate::builtins;
    use crate::cohomology::ddbar_test;
    use crate::hodge_riemann::metrics_report;
    use crate::metric::Hodge;
    use crate::polarisation::{polarised_tangent_space, HolomorphicVolume};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn theta(i: usize, j: usize) -> VectorForm {
        VectorForm::term(3, i, &[j], Scalar::one())
    }

    fn hodge(name: &str) -> Hodge {
        let m = builtins::load(name).unwrap();
        Hodge::new(&m.presentation, &m.metric).unwrap()
    }

    #[test]
    fn torus_deformations() {
        let h = hodge("torus3");
        let p = h.presentation();
        let ds = deform(p, &theta(1, 1), &Scalar::ratio(1, 2)).unwrap();
        assert!(ds.presentation().dtable().iter().all(Form::is_zero));
        let eta1 = Form::phi(3, 1).sub(&Form::phibar(3, 1).scale(&Scalar::ratio(1, 2)));
        assert_eq!(ds.to_deformed(&eta1), Form::phi(3, 1));
        assert!(matches!(deform(p, &theta(1, 1), &Scalar::one()), Err(Error::DegenerateCoframe(_))));
        let same = deform(p, &theta(2, 3), &Scalar::zero()).unwrap();
        assert_eq!(same.presentation(), p);
    }

    #[test]
    fn zero_parameter_is_identity_everywhere() {
        for name in builtins::NAMES {
            let m = builtins::load(name).unwrap();
            let vc = crate::polarisation::VectorCohomology::compute(&m.presentation);
            for th in vc.representatives.iter().chain([&VectorForm::zero(3, 1)]) {
                let ds = deform(&m.presentation, th, &Scalar::zero()).unwrap();
                assert_eq!(ds.presentation(), &m.presentation, "{name}");
            }
        }
    }

    #[test]
    fn s3xs3_defect_is_exact() {
        let m = builtins::load("s3xs3-calabi-eckmann").unwrap();
        let p = &m.presentation;
        let th = theta(1, 3);
        let defect = integrability_defect(p, &th, &Scalar::ratio(1, 2)).unwrap();
        assert!(integrability_defect(p, &th, &Scalar::zero()).unwrap().iter().all(Form::is_zero));
        let m13 = Monomial::from_indices(&[], &[1, 3]).unwrap();
        assert_eq!(defect[0], Form::monomial(3, m13, Scalar::gaussian(0, 1, -1, 4)));
        assert!(defect[1].is_zero());
        assert_eq!(defect[2], Form::monomial(3, m13, Scalar::gaussian(0, 1, 1, 2)));
        assert!(matches!(deform(p, &th, &Scalar::ratio(1, 2)), Err(Error::NotClosed(_))));
    }

    #[test]
    fn deformed_d_is_the_same_real_operator() {
        let h = hodge("iwasawa");
        let p = h.presentation();
        let vc = crate::polarisation::VectorCohomology::compute(p);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut checked = 0;
        for th in &vc.representatives {
            let t = Scalar::gaussian(rng.gen_range(-3..=3), 5, rng.gen_range(-3..=3), 5);
            let Ok(ds) = deform(p, th, &t) else { continue };
            checked += 1;
            let q = ds.presentation();
            for k in 1..=3 {
                let u = Form::from_terms(
                    3,
                    degree_basis(3, k).into_iter().map(|m| (m, Scalar::from_int(rng.gen_range(-2..=2)))),
                );
                assert_eq!(ds.to_deformed(&p.d(&u)), q.d(&ds.to_deformed(&u)));
                assert_eq!(ds.from_deformed(&ds.to_deformed(&u)), u);
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn torus_polarisation_checks() {
        let h = hodge("torus3");
        let ctx = SktContext::new(&h).unwrap();
        let p = h.presentation();
        let ok = polarisation_check(&deform(p, &theta(1, 1), &Scalar::ratio(1, 4)).unwrap(), &ctx).unwrap();
        assert!(ok.polarised);
        let bad = polarisation_check(&deform(p, &theta(1, 2), &Scalar::ratio(1, 2)).unwrap(), &ctx).unwrap();
        assert!(!bad.polarised);
        let zero = polarisation_check(&deform(p, &theta(1, 2), &Scalar::zero()).unwrap(), &ctx).unwrap();
        assert!(zero.polarised);
    }

    #[test]
    fn first_order_obstruction_is_contraction_with_zeta() {
        let h = hodge("torus3");
        let ctx = SktContext::new(&h).unwrap();
        let c = polarised_tangent_consistency(&ctx, &theta(1, 2)).unwrap();
        assert!(c.agrees);
        let want = Form::monomial(3, Monomial::from_indices(&[], &[1, 2]).unwrap(), Scalar::gaussian(0, 1, -1, 2));
        assert_eq!(c.linear_coefficient, want);
        let c = polarised_tangent_consistency(&ctx, &theta(1, 1)).unwrap();
        assert!(c.agrees && c.linear_coefficient.is_zero());
        let c = polarised_tangent_consistency(&ctx, &VectorForm::zero(3, 1)).unwrap();
        assert!(c.linear_coefficient.is_zero());
        let ts = polarised_tangent_space(&ctx, None).unwrap();
        for th in &ts.basis {
            let c = polarised_tangent_consistency(&ctx, th).unwrap();
            assert!(c.agrees && c.linear_coefficient.is_zero(), "{th}");
        }
    }

    #[test]
    fn deformed_skt_metrics() {
        let h = hodge("torus3");
        let ctx = SktContext::new(&h).unwrap();
        let p = h.presentation();
        let d0 = deformed_skt_metric(&deform(p, &theta(1, 1), &Scalar::zero()).unwrap(), &ctx).unwrap();
        assert_eq!(&d0.form, ctx.omega());

        let ds = deform(p, &theta(1, 1), &Scalar::ratio(1, 4)).unwrap();
        let dm = deformed_skt_metric(&ds, &ctx).unwrap();
        assert_eq!(dm.metric.matrix().get(0, 0), Scalar::ratio(8, 15));
        assert_eq!(dm.metric.matrix().get(1, 1), Scalar::ratio(1, 2));

        let far = deform(p, &theta(1, 1), &Scalar::ratio(9, 10)).unwrap();
        let dm = deformed_skt_metric(&far, &ctx).unwrap();
        assert_eq!(dm.metric.matrix().get(0, 0), Scalar::ratio(50, 19));

        let mixed = deform(p, &theta(1, 2), &Scalar::from_int(3)).unwrap();
        assert!(matches!(deformed_skt_metric(&mixed, &ctx), Err(Error::NotPositive(_))));
    }

    #[test]
    fn deformed_fibre_supports_the_full_pipeline() {
        let h = hodge("torus3");
        let ctx = SktContext::new(&h).unwrap();
        let ds = deform(h.presentation(), &theta(1, 1), &Scalar::ratio(1, 3)).unwrap();
        let dm = deformed_skt_metric(&ds, &ctx).unwrap();
        let ht = Hodge::new(ds.presentation(), &dm.metric).unwrap();
        assert!(ddbar_test(&ht).unwrap().holds);
        let ctx_t = SktContext::new(&ht).unwrap();
        let u = HolomorphicVolume::standard(ds.presentation()).unwrap();
        let ts = polarised_tangent_space(&ctx_t, Some(&u)).unwrap();
        assert_eq!(ts.dimension(), 6);
        let r = metrics_report(&ctx_t, &u, &ts.basis).unwrap();
        assert_eq!(r.g2, r.gamma);
    }
}
