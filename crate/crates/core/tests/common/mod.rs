#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skt_polar::algebra::{bidegree_basis, degree_basis, matrix_of, vector_basis, Form, Monomial, Presentation, VectorForm};
use skt_polar::builtins;
use skt_polar::cohomology::{cohomology, Model};
use skt_polar::deformation::deform;
use skt_polar::exact::{Matrix, Scalar};
use skt_polar::hodge_riemann::{hn_split, pairing_forms, PairingKind};
use skt_polar::metric::{Grading, HermitianMetric, Hodge, Laplacian, Operator};
use skt_polar::polarisation::{l_omega, l_omega_with, lefschetz_split, lefschetz_star_eigenvalues, SktContext};

pub const CASES: usize = 120;
pub const SEED: u64 = 0x5eed_2026;

pub type Law = Result<(), String>;

pub fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ tag)
}

pub fn unit(h: &[usize], a: &[usize]) -> Form {
    Form::monomial(3, Monomial::from_indices(h, a).unwrap(), Scalar::one())
}

pub fn hodge(name: &str) -> Hodge {
    let m = builtins::load(name).unwrap();
    Hodge::new(&m.presentation, &m.metric).unwrap()
}

pub fn small(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::gaussian(rng.gen_range(-3..=3), rng.gen_range(1..=2), rng.gen_range(-3..=3), rng.gen_range(1..=2))
}

pub fn random_in(rng: &mut ChaCha8Rng, n: usize, basis: &[Monomial]) -> Form {
    let mut terms = Vec::new();
    for m in basis {
        if rng.gen_bool(0.6) {
            terms.push((*m, small(rng)));
        }
    }
    Form::from_terms(n, terms)
}

pub fn random_combination(rng: &mut ChaCha8Rng, n: usize, forms: &[Form]) -> Form {
    let mut out = Form::zero(n);
    for f in forms {
        out.add_scaled(&small(rng), f);
    }
    out
}

/// `B^*B + I` for a random Gaussian-integer `B`.
pub fn random_metric(rng: &mut ChaCha8Rng, n: usize) -> HermitianMetric {
    let b = Matrix::from_dense(
        n,
        n,
        &(0..n).map(|_| (0..n).map(|_| Scalar::gaussian(rng.gen_range(-1..=1), 1, rng.gen_range(-1..=1), 1)).collect()).collect::<Vec<_>>(),
    );
    let w = b.conj_transpose().mul(&b).unwrap().add(&Matrix::identity(n)).unwrap();
    HermitianMetric::new(w).unwrap()
}

pub fn presentations() -> Vec<(String, Presentation)> {
    let mut out: Vec<(String, Presentation)> = builtins::NAMES.iter().map(|n| (n.to_string(), builtins::load(n).unwrap().presentation)).collect();
    let iw = builtins::load("iwasawa").unwrap().presentation;
    let theta = VectorForm::term(3, 3, &[1], Scalar::one());
    let ds = deform(&iw, &theta, &Scalar::gaussian(1, 3, 1, 5)).unwrap();
    out.push(("iwasawa deformed".into(), ds.presentation().clone()));
    out
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Law {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `d² = ∂² = ∂̄² = ∂∂̄ + ∂̄∂ = 0` and `d = ∂ + ∂̄`.
pub fn law_complex_identities() -> Law {
    let mut rng = rng(1);
    let ps = presentations();
    for case in 0..CASES {
        let (name, p) = &ps[case % ps.len()];
        let k = rng.gen_range(0..=5);
        let u = random_in(&mut rng, 3, &degree_basis(3, k));
        ensure(p.d(&p.d(&u)).is_zero(), || format!("{name}: d² ≠ 0 on {u}"))?;
        ensure(p.del(&p.del(&u)).is_zero(), || format!("{name}: ∂² ≠ 0 on {u}"))?;
        ensure(p.delbar(&p.delbar(&u)).is_zero(), || format!("{name}: ∂̄² ≠ 0 on {u}"))?;
        ensure(p.del(&p.delbar(&u)).add(&p.delbar(&p.del(&u))).is_zero(), || format!("{name}: ∂∂̄ + ∂̄∂ ≠ 0 on {u}"))?;
        ensure(p.d(&u) == p.del(&u).add(&p.delbar(&u)), || format!("{name}: d ≠ ∂ + ∂̄ on {u}"))?;
    }
    Ok(())
}

fn random_vector(rng: &mut ChaCha8Rng, q: usize) -> VectorForm {
    let mut terms = Vec::new();
    for m in vector_basis(3, q) {
        if rng.gen_bool(0.6) {
            terms.push((m, small(rng)));
        }
    }
    VectorForm::from_terms(3, q, terms)
}

/// `β ↦ θ⌟β` with the holomorphic slot read last, i.e. `(−1)^{q'}` times the left contraction on `(1,q')`-forms.
fn contract_right(theta: &VectorForm, beta: &Form) -> Form {
    let mut out = Form::zero(beta.n());
    for (m, c) in beta.terms() {
        let term = theta.contract(&Form::monomial(beta.n(), *m, c.clone()));
        out = if m.bidegree().1 % 2 == 0 { out.add(&term) } else { out.sub(&term) };
    }
    out
}

/// `∂̄(θ⌟β) = ∂̄θ⌟β + (−1)^q θ⌟∂̄β` for `θ` of type `(0,q)` and `β` of type `(1,q')`,
/// together with its left-contraction form `∂̄(θ⌟β) = ∂̄θ⌟β − (−1)^q θ⌟∂̄β`.
pub fn law_contraction_leibniz() -> Law {
    let mut rng = rng(2);
    let ps = presentations();
    for case in 0..CASES {
        let (name, p) = &ps[case % ps.len()];
        let q = rng.gen_range(0..=1);
        let qq = rng.gen_range(0..=2 - q);
        let theta = random_vector(&mut rng, q);
        let beta = random_in(&mut rng, 3, &bidegree_basis(3, 1, qq));
        let sign = if q % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        let dtheta = p.delbar_vector(&theta);
        let lhs = p.delbar(&contract_right(&theta, &beta));
        let rhs = contract_right(&dtheta, &beta).add(&contract_right(&theta, &p.delbar(&beta)).scale(&sign));
        ensure(lhs == rhs, || format!("{name}: Leibniz fails for θ = {theta}, β = {beta}: {lhs} vs {rhs}"))?;
        let lhs = p.delbar(&theta.contract(&beta));
        let rhs = dtheta.contract(&beta).sub(&theta.contract(&p.delbar(&beta)).scale(&sign));
        ensure(lhs == rhs, || format!("{name}: left Leibniz fails for θ = {theta}, β = {beta}: {lhs} vs {rhs}"))?;
    }
    Ok(())
}

fn primitive_basis(metric: &HermitianMetric, p: usize, q: usize) -> Vec<Form> {
    let n = metric.n();
    let k = p + q;
    let power = metric.form().wedge_pow(n - k + 1);
    let src = bidegree_basis(n, p, q);
    let tgt = if n + 1 - q <= n && n + 1 - p <= n { bidegree_basis(n, n + 1 - q, n + 1 - p) } else { Vec::new() };
    let m = matrix_of(&src, &tgt, n, |f| power.wedge(f));
    let kernel = if tgt.is_empty() { Matrix::identity(src.len()).columns() } else { m.kernel() };
    kernel.iter().map(|c| Form::from_coords(n, &src, c)).collect()
}

/// `⋆v = (−1)^{k(k+1)/2} i^{p−q} ω^{n−k}∧v/(n−k)!` on primitive `(p,q)`-forms.
pub fn law_primitive_star() -> Law {
    let mut rng = rng(3);
    let torus = builtins::load("torus3").unwrap().presentation;
    for _ in 0..CASES {
        let metric = random_metric(&mut rng, 3);
        let h = Hodge::new(&torus, &metric).unwrap();
        let p = rng.gen_range(0..=3);
        let q = rng.gen_range(0..=3 - p);
        let k = p + q;
        let v = random_combination(&mut rng, 3, &primitive_basis(&metric, p, q));
        let fact: i64 = (1..=(3 - k) as i64).product();
        let c = Scalar::sign((k * (k + 1) / 2) as i64) * Scalar::i_pow(p as i64 - q as i64) * Scalar::ratio(1, fact);
        let want = metric.form().wedge_pow(3 - k).wedge(&v).scale(&c);
        ensure(h.star(&v) == want, || format!("star formula fails on ({p},{q}) form {v}"))?;
    }
    Ok(())
}

/// For primitive pure-type degree-n forms: `dv = 0 ⇔ d*v = 0 ⇔ Δv = 0 ⇔ Δ_A v = 0 ⇔ Δ_BC v = 0`.
pub fn law_primitive_harmonic_equivalence() -> Law {
    let mut rng = rng(4);
    let ps = presentations();
    let mut closed_cases = 0;
    for case in 0..CASES {
        let (name, p) = &ps[case % ps.len()];
        let metric = if case % 2 == 0 { HermitianMetric::standard(3) } else { random_metric(&mut rng, 3) };
        let h = Hodge::new(p, &metric).unwrap();
        let a = rng.gen_range(0..=3);
        let basis = primitive_basis(&metric, a, 3 - a);
        let v = if rng.gen_bool(0.5) {
            random_combination(&mut rng, 3, &basis)
        } else {
            let tgt = degree_basis(3, 4);
            let coords: Vec<Vec<Scalar>> = basis.iter().map(|b| p.d(b).coords(&tgt).unwrap()).collect();
            let m = Matrix::from_columns(tgt.len(), &coords);
            let ker: Vec<Form> = if basis.is_empty() { Vec::new() } else { m.kernel() }
                .iter()
                .map(|c| {
                    let mut f = Form::zero(3);
                    for (s, b) in c.iter().zip(&basis) {
                        f.add_scaled(s, b);
                    }
                    f
                })
                .collect();
            random_combination(&mut rng, 3, &ker)
        };
        let verdicts = [
            p.d(&v).is_zero(),
            h.apply(Operator::DStar, &v).is_zero(),
            h.laplacian(Laplacian::Full, &v).is_zero(),
            h.laplacian(Laplacian::Aeppli, &v).is_zero(),
            h.laplacian(Laplacian::BottChern, &v).is_zero(),
        ];
        if verdicts[0] && !v.is_zero() {
            closed_cases += 1;
        }
        ensure(verdicts.iter().all(|&b| b == verdicts[0]), || format!("{name}: verdicts {verdicts:?} disagree on {v}"))?;
    }
    ensure(closed_cases > 10, || format!("only {closed_cases} nonzero closed cases sampled"))
}

/// The Lefschetz split of a `(n−1,1)`-form is the ⋆-eigenspace split.
pub fn law_lefschetz_star_split() -> Law {
    let mut rng = rng(5);
    let torus = builtins::load("torus3").unwrap().presentation;
    let (ep, ez) = lefschetz_star_eigenvalues(3);
    ensure(ep == Scalar::i() && ez == -Scalar::i(), || format!("eigenvalues {ep}, {ez}"))?;
    for _ in 0..CASES {
        let metric = random_metric(&mut rng, 3);
        let h = Hodge::new(&torus, &metric).unwrap();
        let v = random_in(&mut rng, 3, &bidegree_basis(3, 2, 1));
        let s = lefschetz_split(&metric, &v).map_err(|e| e.to_string())?;
        ensure(s.primitive.add(&s.omega_zeta) == v, || "split does not sum".into())?;
        ensure(metric.form().wedge(&s.primitive).is_zero(), || "primitive part not primitive".into())?;
        ensure(h.star(&s.primitive) == s.primitive.scale(&ep), || format!("⋆ on primitive part of {v}"))?;
        ensure(h.star(&s.omega_zeta) == s.omega_zeta.scale(&ez), || format!("⋆ on ω∧ζ part of {v}"))?;
        let g2 = metric.norm_sqr(&v);
        let parts = metric.norm_sqr(&s.primitive) + Scalar::from_int(2) * metric.norm_sqr(&s.zeta);
        ensure(g2 == parts, || format!("‖v‖² = {g2} but ‖v'‖² + 2‖ζ‖² = {parts}"))?;
    }
    Ok(())
}

/// `H > 0` on `H^n_+`, `H < 0` on `H^n_−`, `Q(a,b) = (−1)^n Q(b,a)`, `H` Hermitian.
pub fn law_pairing_signs() -> Law {
    let mut rng = rng(6);
    let data: Vec<(Hodge, Vec<Form>, Vec<Form>, Vec<Form>)> = ["torus3", "s3xs3-calabi-eckmann", "iwasawa"]
        .iter()
        .map(|name| {
            let h = hodge(name);
            let s = hn_split(&h).unwrap();
            let all = cohomology(&h, Model::DeRham, Grading::Degree(3)).unwrap().representatives().to_vec();
            (h, s.plus, s.minus, all)
        })
        .collect();
    for case in 0..CASES {
        let (h, plus, minus, all) = &data[case % data.len()];
        let g = h.metric();
        let ap = random_combination(&mut rng, 3, plus);
        let am = random_combination(&mut rng, 3, minus);
        let hp = pairing_forms(g, PairingKind::H, &ap, &ap).unwrap();
        let hm = pairing_forms(g, PairingKind::H, &am, &am).unwrap();
        ensure(ap.is_zero() || hp.is_positive_real(), || format!("H = {hp} on H^3_+"))?;
        ensure(am.is_zero() || hm.is_negative_real(), || format!("H = {hm} on H^3_-"))?;
        let a = random_combination(&mut rng, 3, all);
        let b = random_combination(&mut rng, 3, all);
        let qab = pairing_forms(g, PairingKind::Q, &a, &b).unwrap();
        let qba = pairing_forms(g, PairingKind::Q, &b, &a).unwrap();
        ensure(qab == -qba, || "Q is not antisymmetric in degree 3".into())?;
        let hab = pairing_forms(g, PairingKind::H, &a, &b).unwrap();
        let hba = pairing_forms(g, PairingKind::H, &b, &a).unwrap();
        ensure(hab == hba.conj(), || "H is not Hermitian".into())?;
        ensure(pairing_forms(g, PairingKind::H, &a, &a).unwrap().is_real(), || "H(a,a) not real".into())?;
    }
    Ok(())
}

/// `[ω∧γ]_A` does not depend on the representatives of `[γ]_BC` and `[ω]_A`.
pub fn law_l_omega_independence() -> Law {
    let mut rng = rng(7);
    let hs = [hodge("s3xs3-calabi-eckmann"), hodge("torus3")];
    let ctxs: Vec<SktContext<'_>> = hs.iter().map(|h| SktContext::new(h).unwrap()).collect();
    let bidegrees = [(2, 1), (1, 1), (1, 2), (0, 0)];
    for case in 0..CASES {
        let ctx = &ctxs[case % 2];
        let p = ctx.presentation();
        let (a, b) = bidegrees[(case / 2) % bidegrees.len()];
        let bc = cohomology(ctx.hodge(), Model::BottChern, Grading::Bidegree(a, b)).unwrap();
        let gamma = random_combination(&mut rng, 3, bc.representatives());
        let beta = if a > 0 && b > 0 { random_in(&mut rng, 3, &bidegree_basis(3, a - 1, b - 1)) } else { Form::zero(3) };
        let gamma2 = gamma.add(&p.del(&p.delbar(&beta)));
        let x = random_in(&mut rng, 3, &bidegree_basis(3, 0, 1));
        let y = random_in(&mut rng, 3, &bidegree_basis(3, 1, 0));
        let omega2 = ctx.omega().add(&p.del(&x)).add(&p.delbar(&y));
        let l1 = l_omega(ctx, (a, b), &gamma).map_err(|e| e.to_string())?.class;
        let l2 = l_omega_with(ctx, &omega2, (a, b), &gamma2).map_err(|e| e.to_string())?.class;
        ensure(l1 == l2, || format!("L depends on representatives for γ = {gamma}"))?;
    }
    Ok(())
}

pub fn all_laws() -> Vec<(&'static str, fn() -> Law)> {
    vec![
        ("complex identities", law_complex_identities as fn() -> Law),
        ("contraction Leibniz rule", law_contraction_leibniz),
        ("primitive star formula", law_primitive_star),
        ("primitive harmonic equivalence", law_primitive_harmonic_equivalence),
        ("Lefschetz and star splits coincide", law_lefschetz_star_split),
        ("pairing sign laws", law_pairing_signs),
        ("L_omega representative independence", law_l_omega_independence),
    ]
}
