//! Structural identities connecting the published operators, metrics and
//! factorization data.

use wdvv_core::diffop::{build_factorized, build_third_order_canonical, LocalOperator};
use wdvv_core::exact::vars::Family;
use wdvv_core::exact::Rx;
use wdvv_core::geometry::{curvature, pullback_metric};
use wdvv_core::linalg::{inverse, mat_eq, mat_mul, transpose};
use wdvv_core::poisson::{
    check_first_order_dn, check_monge, check_potemin, is_skew_adjoint, schouten_bracket_vanishes,
};
use wdvv_core::wdvv::*;

#[test]
fn n3_canonical_operator_matches_display() {
    let built = build_third_order_canonical(&monge_metric_n3(), Family::A);
    assert_eq!(built, a2_n3());
}

#[test]
fn n3_operators_are_skew() {
    assert!(is_skew_adjoint(&a1_n3()));
    assert!(is_skew_adjoint(&a2_n3()));
}

#[test]
fn n3_monge_and_potemin() {
    let g = monge_metric_n3();
    assert!(check_monge(&g, Family::A));
    assert!(check_potemin(&g, Family::A));
}

#[test]
fn n3_schouten_brackets_vanish() {
    let a1 = a1_n3();
    let a2 = a2_n3();
    assert!(schouten_bracket_vanishes(&a1, &a1, Family::A));
    assert!(schouten_bracket_vanishes(&a2, &a2, Family::A));
    assert!(schouten_bracket_vanishes(&a1, &a2, Family::A));
}

#[test]
fn n3_metric_is_flat() {
    let rep = curvature(&monge_metric_n3(), Family::A);
    assert!(rep.riemann_is_zero());
}

#[test]
fn n3_first_order_dn_criterion() {
    let (g, b) = dn_data(&a1_n3(), Family::A);
    assert!(check_first_order_dn(&g, &b, Family::A));
}

#[test]
fn n4_first_order_dn_criterion() {
    let op = a1_n4_a();
    assert!(is_skew_adjoint(&op));
    let (g, b) = dn_data(&op, Family::A);
    assert!(check_first_order_dn(&g, &b, Family::A));
}

#[test]
fn n4_metric_monge_potemin() {
    let g = g6();
    assert!(check_monge(&g, Family::A));
    assert!(check_potemin(&g, Family::A));
}

#[test]
fn n4_factorization_matches_metric() {
    // g = psi . phi . psi^T entrywise
    let p = psi6();
    let phi = phi6();
    let rebuilt = mat_mul(&p, &mat_mul(&phi, &transpose(&p)));
    assert!(mat_eq(&rebuilt, &g6()));
    // and the factorized operator equals the canonical one
    let canonical = build_third_order_canonical(&g6(), Family::A);
    let factorized = build_factorized(&p, &phi);
    assert_eq!(canonical, factorized);
    assert!(is_skew_adjoint(&canonical));
}

#[test]
fn n4_curvature_report() {
    let rep = curvature(&g6(), Family::A);
    assert!(!rep.riemann_is_zero());
    assert!(rep.scalar.is_zero());
    assert!(!rep.weyl_is_zero());
}

#[test]
fn n3_pushforward_of_flat_metric_is_constant() {
    // push the contravariant leading metric of A1 (a-coordinates) down to
    // flat coordinates through the Viete map: the result must be constant
    let (g_upper, _) = dn_data(&a1_n3(), Family::A);
    let g_lower = inverse(&g_upper);
    let map = viete_map_n3();
    // covariant pullback to u-coordinates of the covariant metric, then
    // invert to get the contravariant flat-coordinate form
    let pulled = pullback_metric(&g_lower, &map);
    let k3 = inverse(&pulled);
    for row in &k3 {
        for e in row {
            assert!(e.is_constant(), "flat-coordinate metric entry {e} not constant");
        }
    }
}

#[test]
fn n4_eq32_pullback_is_k() {
    // same check for the six-component pair: the Eq-style first-order metric
    // in a-coordinates corresponds to the constant matrix K in flat ones
    let (g_upper, _) = dn_data(&a1_n4_a(), Family::A);
    let g_lower = inverse(&g_upper);
    let map = viete_map_n4();
    let pulled = pullback_metric(&g_lower, &map);
    let k = inverse(&pulled);
    assert!(mat_eq(&k, &k_matrix_n4()));
}

#[test]
fn perturbed_nonexamples_agree_potemin_schouten() {
    // Monge-preserving perturbations of the N=3 metric: Potemin and the
    // Schouten self-bracket of the canonical operator must agree (and fail)
    let eps = Rx::frac(1, 1);
    let mut g = monge_metric_n3();
    // add eps * [[a2, -a1/2, 0], [-a1/2, 0, 0], [0, 0, 0]] (still Monge)
    g[0][0] = &g[0][0] + &(&eps * &a(2));
    g[0][1] = &g[0][1] - &(&(&eps * &a(1)) * &Rx::frac(1, 2));
    g[1][0] = g[0][1].clone();
    assert!(check_monge(&g, Family::A));
    let potemin = check_potemin(&g, Family::A);
    let op = build_third_order_canonical(&g, Family::A);
    assert!(is_skew_adjoint(&op));
    let schouten = schouten_bracket_vanishes(&op, &op, Family::A);
    assert_eq!(potemin, schouten);
    assert!(!potemin, "perturbation unexpectedly still Hamiltonian");
}

#[test]
fn n4_flows_from_k_and_flat_densities() {
    // K dx with h7, h8 generates the two flows in flat coordinates
    let (h7, h8, h6) = flat_densities_n4();
    let k = k_matrix_n4();
    let map = viete_map_n4();
    let flow_y = flow_in_flat_coordinates(&map, &n4_fluxes_y());
    let flow_z = flow_in_flat_coordinates(&map, &n4_fluxes_z());
    assert_eq!(k_flow(&k, &h7, 6), flow_y);
    assert_eq!(k_flow(&k, &h8, 6), flow_z);
    // the momentum density h6 generates the x-translation flow
    let translation: Vec<Rx> = (1..=6)
        .map(|i| Rx::var(wdvv_core::Var::jet(Family::U, i, 1)))
        .collect();
    assert_eq!(k_flow(&k, &h6, 6), translation);
}

#[test]
fn adjoint_algebra_on_paper_operators() {
    let a1 = a1_n3();
    let a2 = a2_n3();
    assert_eq!(a1.adjoint().adjoint(), a1);
    let prod = a1.compose(&a2);
    assert_eq!(prod.adjoint(), a2.adjoint().compose(&a1.adjoint()));
    let id = LocalOperator::identity(3);
    assert_eq!(id.compose(&a2), a2);
}
