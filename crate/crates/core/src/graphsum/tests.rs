use super::*;
use crate::algebra::fixtures::t4;
use crate::homotopy::validate_homotopy;
use crate::ribbon::enumerate_graphs;

fn t4_sum(legs: LegSpace) -> (AlgebraSpec, HomotopyData, GraphSum) {
    let a = t4();
    let hom = validate_homotopy(&a, a.h_op.as_ref().unwrap()).unwrap();
    let gs = GraphSum::new(&a, &hom, legs).unwrap();
    (a, hom, gs)
}

fn b_context(hom: &HomotopyData) -> crate::bvcalc::BvContext {
    crate::bvcalc::BvContext::new(hom.letter_parities(), hom.beta_b.inverse().unwrap())
        .unwrap()
        .with_derivation(hom.i_b.clone())
        .unwrap()
}

#[test]
fn t4_propagator_is_supported_on_t() {
    let (_, _, gs) = t4_sum(LegSpace::B);
    let k = &gs.propagator().matrix;
    for a in 0..4 {
        for b in 0..4 {
            let expect = if (a, b) == (3, 3) { q(-1) } else { q(0) };
            assert_eq!(k[(a, b)], expect, "({a}, {b})");
        }
    }
}

#[test]
fn master_equation_on_t4() {
    let (_, hom, gs) = t4_sum(LegSpace::B);
    let s = gs.sum_s(-1, 6).unwrap();
    let r = b_context(&hom).residual(&s, (6, 2), 4, 2).unwrap();
    assert!(r.passed(), "{:#?}", r.describe());
}

#[test]
fn leibniz_sum_over_edges() {
    let (a, _, gs) = t4_sum(LegSpace::A);
    let ctx = a.bv_context().unwrap();
    for (chi, n) in [(0, 1), (0, 2), (0, 3), (1, 4), (-1, 1)] {
        for g in enumerate_graphs(chi, n, Valency::Trivalent, false) {
            let lhs = ctx.i_dual(&gs.w_gamma(&g).unwrap().functional).unwrap();
            let mut rhs = Functional::new();
            for e in 0..g.edges().len() {
                rhs.add_assign(&gs.edge_variant_w(&g, e, EdgeKind::Commutator).unwrap().functional);
            }
            assert_eq!(lhs, rhs, "{g}");
        }
    }
}

#[test]
fn equivariant_master_equation_on_doubled_theta() {
    use crate::algebra::fixtures::{load, THETA_BARE};
    use crate::homotopy::{construct_homotopy, ContractionScope};
    let a = crate::algebra::double(&load(THETA_BARE)).unwrap();
    let hom = construct_homotopy(&a, ContractionScope::InvertibleOnly).unwrap();
    assert!(!hom.i_b.is_zero());
    let gs = GraphSum::new(&a, &hom, LegSpace::B).unwrap();
    let s = gs.sum_s(0, 5).unwrap();
    let r = b_context(&hom).residual(&s, (5, 1), 3, 1).unwrap();
    assert!(r.passed(), "{:#?}", r.describe());
}

#[test]
fn equivariant_master_equation_with_nonzero_propagator() {
    use crate::algebra::fixtures::{load, YTHETA_EQ};
    use crate::homotopy::{construct_homotopy, ContractionScope};
    let a = crate::algebra::double(&load(YTHETA_EQ)).unwrap();
    let report = crate::algebra::validate_cyclic_dga(&a);
    assert!(report.passed(), "{report}");
    let hom = construct_homotopy(&a, ContractionScope::InvertibleOnly).unwrap();
    assert!(!hom.i_b.is_zero());
    let gs = GraphSum::new(&a, &hom, LegSpace::B).unwrap();
    assert!(!gs.propagator().is_zero());
    let s = gs.sum_s(-1, 5).unwrap();
    assert!(s.terms().any(|(k, _)| k.hbar > 0));
    let r = b_context(&hom).residual(&s, (5, 2), 3, 2).unwrap();
    assert!(r.passed(), "{:#?}", r.describe());
}

#[test]
fn pillars_hold_on_t4() {
    let (a, hom, _) = t4_sum(LegSpace::A);
    let r = check_pillars(&a, &hom, 10).unwrap();
    assert!(r.passed(), "{:#?}", r.failures);
    assert!(r.edges > 0 && r.flip_classes > 0);
    assert!(r.nonzero_id_variants > 0);
}

#[test]
fn pillars_hold_on_an_equivariant_double() {
    use crate::algebra::fixtures::{load, YTHETA_EQ};
    use crate::homotopy::{construct_homotopy, ContractionScope};
    let a = crate::algebra::double(&load(YTHETA_EQ)).unwrap();
    for scope in [ContractionScope::Full, ContractionScope::InvertibleOnly] {
        let hom = construct_homotopy(&a, scope).unwrap();
        let r = check_pillars(&a, &hom, 10).unwrap();
        assert!(r.passed(), "{:#?}", r.failures);
        assert!(r.nonzero_id_variants > 0);
    }
}

fn relabel(g: &RibbonGraph, shift: u32) -> RibbonGraph {
    let n = g.n_flags() as u32;
    let map = |f: u32| (f + shift) % n;
    let mut rho = vec![0; n as usize];
    let mut sigma = vec![0; n as usize];
    let mut labels = vec![0; n as usize];
    for f in 0..n {
        rho[map(f) as usize] = map(g.rho(f));
        sigma[map(f) as usize] = map(g.sigma(f));
        labels[map(f) as usize] = g.label(f);
    }
    RibbonGraph::new(rho, sigma, labels).unwrap()
}

#[test]
fn tree_level_sum_is_the_tripod() {
    let (_, _, gs) = t4_sum(LegSpace::B);
    let s = gs.sum_s(1, 3).unwrap();
    let terms: Vec<_> = s.terms().collect();
    assert_eq!(terms.len(), 1);
    let (key, coeff) = terms[0];
    assert_eq!(key.hbar, 0);
    // B letters: 0 is u, 1 is w.
    assert_eq!(key.monomial.cycles()[0].letters(), &[0, 0, 1]);
    assert!(*coeff == q(1) || *coeff == q(-1));
}

#[test]
fn lollipop_weight_vanishes_on_t4() {
    let (_, _, gs) = t4_sum(LegSpace::B);
    let g = RibbonGraph::from_parts(&[vec![0, 1, 2]], &[(1, 2)], &[]).unwrap();
    let w = gs.w_gamma(&g).unwrap();
    assert_eq!(w.hbar_power, 1);
    assert!(w.functional.is_zero());
}

#[test]
fn zero_homotopy_keeps_single_vertices() {
    let a = t4();
    let hom = validate_homotopy(&a, &Matrix::zeros(4, 4)).unwrap();
    let gs = GraphSum::new(&a, &hom, LegSpace::B).unwrap();
    assert!(gs.propagator().is_zero());
    let s = gs.sum_s(-1, 5).unwrap();
    assert_eq!(s, a.product_functional().unwrap());
}

#[test]
fn weights_do_not_depend_on_flag_labels() {
    let (_, _, gs) = t4_sum(LegSpace::A);
    for (chi, n) in [(0, 2), (0, 3), (-1, 2), (1, 5)] {
        for c in crate::ribbon::enumerate_unlabeled(chi, n, Valency::Trivalent, true) {
            let w = gs.w_gamma(&c.graph).unwrap().functional;
            for shift in 1..4 {
                let other = relabel(&c.graph, shift);
                assert_eq!(gs.w_gamma(&other).unwrap().functional, w, "{}", c.graph);
            }
        }
    }
}

#[test]
fn sum_is_independent_of_thread_count() {
    let (_, _, gs) = t4_sum(LegSpace::B);
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| crate::bvcalc::write_functional(&gs.sum_s(-1, 4).unwrap()))
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn quadratic_term_generates_the_differential() {
    use crate::algebra::fixtures::{load, THETA_BARE};
    use crate::bvcalc::quadratic_term;
    use crate::homotopy::{construct_homotopy, ContractionScope};
    let a = crate::algebra::double(&load(THETA_BARE)).unwrap();
    let hom = construct_homotopy(&a, ContractionScope::InvertibleOnly).unwrap();
    let par = hom.letter_parities();
    let s02 = quadratic_term(&hom.i_b, &hom.beta_b, &par).unwrap();
    assert!(!s02.is_zero());
    let ctx = b_context(&hom);
    let gs = GraphSum::new(&a, &hom, LegSpace::B).unwrap();
    let s = gs.sum_s(0, 5).unwrap();
    assert_eq!(ctx.bracket(&s02, &s).unwrap(), ctx.i_dual(&s).unwrap());
    // S + S02 solves the plain equation.
    let plain = crate::bvcalc::BvContext::new(par, hom.beta_b.inverse().unwrap()).unwrap();
    let mut total = s.clone();
    total.add_assign(&s02);
    assert!(plain.residual(&total, (5, 1), 3, 1).unwrap().passed());
}

#[test]
fn quadratic_term_bracket_is_the_derivation_on_words() {
    use crate::algebra::fixtures::{load, THETA_BARE};
    use crate::bvcalc::quadratic_term;
    use crate::homotopy::{construct_homotopy, ContractionScope};
    let a = crate::algebra::double(&load(THETA_BARE)).unwrap();
    let hom = construct_homotopy(&a, ContractionScope::InvertibleOnly).unwrap();
    let par = hom.letter_parities();
    let s02 = quadratic_term(&hom.i_b, &hom.beta_b, &par).unwrap();
    let ctx = b_context(&hom);
    let d = par.len() as Letter;
    let mut nontrivial = 0;
    for word in (0..d)
        .map(|a| vec![a])
        .chain((0..d).flat_map(|a| (0..d).map(move |b| vec![a, b])))
    {
        for extra in [vec![], vec![0 as Letter]] {
            let mut f = Functional::new();
            let cycles: Vec<Vec<Letter>> = if extra.is_empty() {
                vec![word.clone()]
            } else {
                vec![word.clone(), extra]
            };
            f.add_term(0, &cycles, q(1), &par).unwrap();
            let lhs = ctx.bracket(&s02, &f).unwrap();
            let rhs = ctx.i_dual(&f).unwrap();
            if !rhs.is_zero() {
                nontrivial += 1;
            }
            assert_eq!(lhs, rhs, "{cycles:?}");
        }
    }
    assert!(nontrivial > 0);
}
