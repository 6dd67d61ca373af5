mod common;

use common::Law;

fn check(law: fn() -> Law) {
    if let Err(e) = law() {
        panic!("{e}");
    }
}

#[test]
fn complex_identities() {
    check(common::law_complex_identities);
}

#[test]
fn contraction_leibniz_rule() {
    check(common::law_contraction_leibniz);
}

#[test]
fn primitive_star_formula() {
    check(common::law_primitive_star);
}

#[test]
fn primitive_harmonic_equivalence() {
    check(common::law_primitive_harmonic_equivalence);
}

#[test]
fn lefschetz_and_star_splits_coincide() {
    check(common::law_lefschetz_star_split);
}

#[test]
fn pairing_sign_laws() {
    check(common::law_pairing_signs);
}

#[test]
fn l_omega_representative_independence() {
    check(common::law_l_omega_independence);
}
