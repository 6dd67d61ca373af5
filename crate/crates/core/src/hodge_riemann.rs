//! Hodge-Riemann pairings on middle-degree cohomology, period points, and the
//! Weil-Petersson and period metrics on polarised tangent classes.
//!
//! Integrals are normalised so that the invariant volume `ω^n/n!` integrates to 1.

use serde::Serialize;

use crate::algebra::{bidegree_basis, vector_basis, Form, VectorForm};
use crate::cohomology::{cohomology, minimal_d_closed_rep, CohomologyGroup, Model};
use crate::error::{Error, Result};
use crate::exact::{solve_affine, Feasibility, Matrix, Scalar, Solve, Vector};
use crate::metric::{Grading, HermitianMetric, Hodge};
use crate::polarisation::{lefschetz_split, HolomorphicVolume, SktContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairingKind {
    Q,
    H,
}

fn q_sign(n: usize) -> Scalar {
    Scalar::sign((n * (n - 1) / 2) as i64)
}

fn h_factor(n: usize) -> Scalar {
    Scalar::sign((n * (n + 1) / 2) as i64) * Scalar::i_pow(n as i64)
}

fn check_degree(n: usize, u: &Form) -> Result<()> {
    match u.pure_degree() {
        Some(k) if k != n => Err(Error::Degree { expected: n, found: k }),
        None if !u.is_zero() => Err(Error::Degree { expected: n, found: u.bidegrees().iter().map(|b| b.0 + b.1).max().unwrap_or(0) }),
        _ => Ok(()),
    }
}

/// `Q` or `H` evaluated directly on degree-n forms.
pub fn pairing_forms(metric: &HermitianMetric, kind: PairingKind, a: &Form, b: &Form) -> Result<Scalar> {
    let n = metric.n();
    check_degree(n, a)?;
    check_degree(n, b)?;
    Ok(match kind {
        PairingKind::Q => q_sign(n) * metric.integrate(&a.wedge(b)),
        PairingKind::H => h_factor(n) * metric.integrate(&a.wedge(&b.conj())),
    })
}

fn middle_group(h: &Hodge) -> Result<CohomologyGroup> {
    cohomology(h, Model::DeRham, Grading::Degree(h.n()))
}

/// `Q` or `H` on the de Rham classes of `a` and `b`, evaluated on harmonic representatives.
pub fn pairing(h: &Hodge, kind: PairingKind, a: &Form, b: &Form) -> Result<Scalar> {
    let n = h.n();
    check_degree(n, a)?;
    check_degree(n, b)?;
    let g = middle_group(h)?;
    pairing_forms(h.metric(), kind, &g.normalise(a)?, &g.normalise(b)?)
}

/// Eigenvalue of `⋆` on `H^n_+`: 1 for even n, i for odd n.
pub fn plus_eigenvalue(n: usize) -> Scalar {
    if n % 2 == 0 {
        Scalar::one()
    } else {
        Scalar::i()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HnSplit {
    pub plus: Vec<Form>,
    pub minus: Vec<Form>,
}

/// Eigenbases of `⋆` on the `Δ`-harmonic degree-n forms.
pub fn hn_split(h: &Hodge) -> Result<HnSplit> {
    let g = middle_group(h)?;
    let dim = g.dimension();
    let cols: Vec<Vector> = g.representatives().iter().map(|r| g.reduce(&h.star(r))).collect::<Result<_>>()?;
    let star = Matrix::from_columns(dim, &cols);
    let lam = plus_eigenvalue(h.n());
    let eigen = |l: &Scalar| -> Result<Vec<Form>> {
        let shifted = star.sub(&Matrix::identity(dim).scale(l))?;
        let kernel = if dim == 0 { Vec::new() } else { shifted.kernel() };
        Ok(kernel.iter().map(|c| g.class_form(c)).collect())
    };
    Ok(HnSplit { plus: eigen(&lam)?, minus: eigen(&-lam.clone())? })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodPoint {
    pub class: Vector,
    pub representative: Form,
    pub q: Scalar,
    pub h: Scalar,
    pub in_domain: bool,
}

/// The de Rham class of `u` and whether its line lies in the period domain.
pub fn period_point(h: &Hodge, u: &Form) -> Result<PeriodPoint> {
    let n = h.n();
    if u.is_zero() {
        return Err(Error::Validation("the zero form has no period point".into()));
    }
    check_degree(n, u)?;
    let g = middle_group(h)?;
    let class = g.reduce(u)?;
    if class.iter().all(Scalar::is_zero) {
        return Err(Error::Validation(format!("{u} is d-exact")));
    }
    let representative = g.class_form(&class);
    let q = pairing_forms(h.metric(), PairingKind::Q, &representative, &representative)?;
    let hv = pairing_forms(h.metric(), PairingKind::H, &representative, &representative)?;
    let sign_ok = if n % 2 == 0 { hv.is_positive_real() } else { hv.is_negative_real() };
    Ok(PeriodPoint { class, representative, q: q.clone(), h: hv, in_domain: q.is_zero() && sign_ok })
}

/// `⟨θ, η⟩` pointwise, with `⟨Z_i, Z_k⟩ = ω_{ik̄}` and the induced metric on `(0,q)`-forms.
pub fn vector_inner(metric: &HermitianMetric, theta: &VectorForm, eta: &VectorForm) -> Scalar {
    let w = metric.matrix();
    let mut acc = Scalar::zero();
    for (a, c) in theta.terms() {
        for (b, d) in eta.terms() {
            let wik = w.get(a.index, b.index);
            if wik.is_zero() {
                continue;
            }
            let fa = crate::algebra::Monomial::new(0, a.anti);
            let fb = crate::algebra::Monomial::new(0, b.anti);
            acc += &(c * &d.conj() * wik * metric.monomial_inner(&fa, &fb));
        }
    }
    acc
}

/// The vector form `θ` with `θ⌟u = x`, for `x` of type `(n−1,1)`.
pub fn uncontract(u: &HolomorphicVolume, x: &Form) -> Result<VectorForm> {
    let n = u.form().n();
    let vb = vector_basis(n, 1);
    let tb = bidegree_basis(n, n - 1, 1);
    let cols: Vec<Vector> =
        vb.iter().map(|m| VectorForm::from_terms(n, 1, [(*m, Scalar::one())]).contract(u.form()).coords(&tb).expect("type")).collect();
    let a = Matrix::from_columns(tb.len(), &cols);
    let rhs = x.coords(&tb).ok_or_else(|| Error::Bidegree(format!("{x} is not of type ({},1)", n - 1)))?;
    let Solve::Feasible(sol) = solve_affine(&a, &rhs)? else { unreachable!("contraction with u is bijective") };
    Ok(VectorForm::from_coords(n, 1, &vb, &sol.particular))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricDiagnostic {
    pub primitive_norm_sqr: Scalar,
    pub zeta_norm_sqr: Scalar,
    pub g2: Scalar,
    pub gamma: Scalar,
    /// `(G2 − γ)(θ,θ) − 4‖ζ‖²/denominator`, zero when the identity holds.
    pub difference_defect: Scalar,
    /// `G2(θ,θ)·denominator − (‖θ'⌟u‖² + 2‖ζ‖²)`.
    pub g2_defect: Scalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricReport {
    pub basis: Vec<VectorForm>,
    pub contractions: Vec<Form>,
    /// `i^{n²} ∫ u ∧ ū`.
    pub denominator: Scalar,
    pub volume: Scalar,
    pub g1: Matrix,
    pub g2: Matrix,
    pub gamma: Matrix,
    pub diagnostics: Vec<MetricDiagnostic>,
}

/// `i^{n²} ∫ u ∧ ū`.
pub fn volume_denominator(metric: &HermitianMetric, u: &HolomorphicVolume) -> Scalar {
    let n = metric.n() as i64;
    Scalar::i_pow(n * n) * metric.integrate(&u.form().wedge(&u.form().conj()))
}

/// `γ(θ,η) = ∓ H(θ⌟u, η⌟u) / (i^{n²}∫u∧ū)`, minus for even n.
pub fn gamma_value(metric: &HermitianMetric, u: &HolomorphicVolume, theta: &VectorForm, eta: &VectorForm) -> Result<Scalar> {
    let n = metric.n();
    let hv = pairing_forms(metric, PairingKind::H, &theta.contract(u.form()), &eta.contract(u.form()))?;
    let denom = volume_denominator(metric, u);
    let s = if n % 2 == 0 { -hv } else { hv };
    Ok(s * denom.inv().expect("u is nonvanishing"))
}

/// `G^(1)`, `G^(2)` and `γ` on the given tangent classes, after moving each to the
/// representative whose contraction with `u` is the ω-minimal d-closed one.
pub fn metrics_report(ctx: &SktContext<'_>, u: &HolomorphicVolume, tangent: &[VectorForm]) -> Result<MetricReport> {
    let h = ctx.hodge();
    let metric = h.metric();
    let n = h.n();
    let mut basis = Vec::new();
    let mut contractions = Vec::new();
    for (k, theta) in tangent.iter().enumerate() {
        let x = theta.contract(u.form());
        let rep = if x.is_zero() {
            x
        } else {
            match minimal_d_closed_rep(h, (n - 1, 1), &x)? {
                Feasibility::Found(m) => m.representative,
                Feasibility::Infeasible(_) => {
                    return Err(Error::Infeasible(format!("no ω-minimal d-closed representative for tangent class {k}: {theta}")))
                }
            }
        };
        basis.push(uncontract(u, &rep)?);
        contractions.push(rep);
    }
    let denominator = volume_denominator(metric, u);
    let inv = denominator.inv().expect("u is nonvanishing");
    let volume = metric.integrate(metric.volume_form());
    let vinv = volume.inv().expect("volume is nonzero");
    let m = basis.len();
    let mut g1 = Matrix::zeros(m, m);
    let mut g2 = Matrix::zeros(m, m);
    let mut gamma = Matrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            g1.set(i, j, vector_inner(metric, &basis[i], &basis[j]) * &vinv);
            g2.set(i, j, metric.inner(&contractions[i], &contractions[j]) * &inv);
            gamma.set(i, j, gamma_value(metric, u, &basis[i], &basis[j])?);
        }
    }
    let two = Scalar::from_int(2);
    let four = Scalar::from_int(4);
    let mut diagnostics = Vec::new();
    for (i, x) in contractions.iter().enumerate() {
        let split = lefschetz_split(metric, x)?;
        let p2 = metric.norm_sqr(&split.primitive);
        let z2 = metric.norm_sqr(&split.zeta);
        let g2v = g2.get(i, i);
        let gv = gamma.get(i, i);
        diagnostics.push(MetricDiagnostic {
            difference_defect: g2v.clone() - gv.clone() - four.clone() * &z2 * &inv,
            g2_defect: g2v.clone() * &denominator - (p2.clone() + two.clone() * &z2),
            primitive_norm_sqr: p2,
            zeta_norm_sqr: z2,
            g2: g2v,
            gamma: gv,
        });
    }
    Ok(MetricReport { basis, contractions, denominator, volume, g1, g2, gamma, diagnostics })
}

/// Exact positive-semidefiniteness of a Hermitian matrix via all principal minors.
pub fn is_positive_semidefinite(m: &Matrix) -> Result<bool> {
    if !m.is_hermitian() {
        return Ok(false);
    }
    let k = m.rows();
    for mask in 1u32..(1u32 << k) {
        let idx: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
        let dense: Vec<Vector> = idx.iter().map(|&r| idx.iter().map(|&c| m.get(r, c)).collect()).collect();
        let det = Matrix::from_dense(idx.len(), idx.len(), &dense).determinant()?;
        if !(det.is_zero() || det.is_positive_real()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Monomial;
    use crate::builtins;
    use crate::polarisation::polarised_tangent_space;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit(h: &[usize], a: &[usize]) -> Form {
        Form::monomial(3, Monomial::from_indices(h, a).unwrap(), Scalar::one())
    }

    fn hodge(name: &str) -> Hodge {
        let m = builtins::load(name).unwrap();
        Hodge::new(&m.presentation, &m.metric).unwrap()
    }

    fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
        Scalar::gaussian(rng.gen_range(-4..=4), rng.gen_range(1..=3), rng.gen_range(-4..=4), rng.gen_range(1..=3))
    }

    #[test]
    fn torus_volume_pairings() {
        let h = hodge("torus3");
        let u = unit(&[1, 2, 3], &[]);
        assert!(pairing(&h, PairingKind::Q, &u, &u).unwrap().is_zero());
        assert_eq!(pairing(&h, PairingKind::H, &u, &u).unwrap(), Scalar::from_int(-8));
        let vol = HolomorphicVolume::standard(h.presentation()).unwrap();
        assert_eq!(volume_denominator(h.metric(), &vol), Scalar::from_int(8));
        assert!(matches!(pairing(&h, PairingKind::Q, &unit(&[1], &[]), &u), Err(Error::Degree { .. })));
    }

    #[test]
    fn q_against_star_conjugate_is_the_norm() {
        for name in ["torus3", "s3xs3-calabi-eckmann", "iwasawa"] {
            let h = hodge(name);
            let g = middle_group(&h).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for _ in 0..10 {
                let c: Vec<Scalar> = (0..g.dimension()).map(|_| random_scalar(&mut rng)).collect();
                let a = g.class_form(&c);
                let q = pairing(&h, PairingKind::Q, &a, &h.star(&a.conj())).unwrap();
                let lhs = q_sign(3) * q;
                assert_eq!(lhs, h.metric().norm_sqr(&a), "{name}");
            }
        }
    }

    #[test]
    fn hn_split_dimensions_and_signs() {
        for (name, dim) in [("torus3", 10), ("s3xs3-calabi-eckmann", 1)] {
            let h = hodge(name);
            let s = hn_split(&h).unwrap();
            assert_eq!((s.plus.len(), s.minus.len()), (dim, dim), "{name}");
            for a in &s.plus {
                assert_eq!(h.star(a), a.scale(&Scalar::i()));
                assert!(pairing_forms(h.metric(), PairingKind::H, a, a).unwrap().is_positive_real());
            }
            for a in &s.minus {
                assert!(pairing_forms(h.metric(), PairingKind::H, a, a).unwrap().is_negative_real());
            }
        }
        let h = hodge("torus3");
        let u = unit(&[1, 2, 3], &[]);
        assert_eq!(h.star(&u), u.scale(&-Scalar::i()));
    }

    #[test]
    fn period_points() {
        let h = hodge("torus3");
        let p = period_point(&h, &unit(&[1, 2, 3], &[])).unwrap();
        assert!(p.in_domain && p.q.is_zero() && p.h.is_negative_real());
        let real = unit(&[1, 2, 3], &[]).add(&unit(&[], &[1, 2, 3]));
        let p = period_point(&h, &real).unwrap();
        assert!(!p.in_domain);
        assert!(p.q.is_zero());
        assert!(p.h.is_zero());
        assert!(period_point(&h, &Form::zero(3)).is_err());
    }

    #[test]
    fn torus_metrics() {
        let h = hodge("torus3");
        let ctx = SktContext::new(&h).unwrap();
        let u = HolomorphicVolume::standard(h.presentation()).unwrap();
        let ts = polarised_tangent_space(&ctx, Some(&u)).unwrap();
        let r = metrics_report(&ctx, &u, &ts.basis).unwrap();
        assert_eq!(r.g2, r.gamma);
        assert_eq!(r.volume, Scalar::one());
        for d in &r.diagnostics {
            assert!(d.zeta_norm_sqr.is_zero());
            assert!(d.difference_defect.is_zero() && d.g2_defect.is_zero());
        }
        let vb = vector_basis(3, 1);
        let monos: Vec<VectorForm> = vb.iter().map(|m| VectorForm::from_terms(3, 1, [(*m, Scalar::one())])).collect();
        for (i, a) in monos.iter().enumerate() {
            for (j, b) in monos.iter().enumerate() {
                let v = vector_inner(h.metric(), a, b);
                assert_eq!(v.is_zero(), i != j);
            }
        }
        let theta = VectorForm::term(3, 1, &[1], Scalar::one());
        let r = metrics_report(&ctx, &u, &[theta.clone(), VectorForm::zero(3, 1)]).unwrap();
        assert_eq!(r.g1.get(0, 0), Scalar::one());
        assert_eq!(r.g2.get(0, 0), Scalar::one());
        assert_eq!(r.gamma.get(0, 0), Scalar::one());
        for k in 0..2 {
            for m in [&r.g1, &r.g2, &r.gamma] {
                assert!(m.get(1, k).is_zero() && m.get(k, 1).is_zero());
            }
        }
    }

    #[test]
    fn non_primitive_contraction_separates_g2_and_gamma() {
        let h = hodge("torus3");
        let ctx = SktContext::new(&h).unwrap();
        let u = HolomorphicVolume::standard(h.presentation()).unwrap();
        let theta = VectorForm::term(3, 1, &[2], Scalar::one());
        let r = metrics_report(&ctx, &u, &[theta]).unwrap();
        let d = &r.diagnostics[0];
        assert!(!d.zeta_norm_sqr.is_zero());
        assert!(d.difference_defect.is_zero() && d.g2_defect.is_zero());
        assert!((r.g2.sub(&r.gamma).unwrap().get(0, 0)).is_positive_real());
        assert!(is_positive_semidefinite(&r.g2.sub(&r.gamma).unwrap()).unwrap());
    }

    #[test]
    fn gamma_is_invariant_under_rescaling_u() {
        let h = hodge("torus3");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let base = unit(&[1, 2, 3], &[]);
        for _ in 0..20 {
            let c = random_scalar(&mut rng);
            if c.is_zero() {
                continue;
            }
            let u1 = HolomorphicVolume::new(h.presentation(), base.clone()).unwrap();
            let u2 = HolomorphicVolume::new(h.presentation(), base.scale(&c)).unwrap();
            let theta = VectorForm::from_terms(3, 1, vector_basis(3, 1).into_iter().map(|m| (m, random_scalar(&mut rng))));
            assert_eq!(
                gamma_value(h.metric(), &u1, &theta, &theta).unwrap(),
                gamma_value(h.metric(), &u2, &theta, &theta).unwrap()
            );
        }
    }
}
