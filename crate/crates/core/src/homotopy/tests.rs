use super::*;
use crate::algebra::fixtures::{load, t4, Q1, THETA_BARE, YTHETA_BARE};
use crate::algebra::{double, validate_cyclic_dga};
use crate::superlinear::{q, qf};
use proptest::prelude::*;

fn t4_h() -> Matrix {
    t4().h_op.unwrap()
}

#[test]
fn fixtures_are_valid_algebras() {
    let r = validate_cyclic_dga(&load(Q1));
    assert!(r.passed(), "{r}");
    let r = validate_cyclic_dga(&double(&load(YTHETA_BARE)).unwrap());
    assert!(r.passed(), "{r}");
}

#[test]
fn t4_projector_and_b() {
    let a = t4();
    let data = validate_homotopy(&a, &t4_h()).unwrap();
    let [u, w, x, t] = [0, 1, 2, 3];
    for (i, fixed) in [(u, true), (w, true), (x, false), (t, false)] {
        let col = data.p.column(i);
        let expect: Vec<Q> = (0..4)
            .map(|j| if fixed && j == i { q(1) } else { q(0) })
            .collect();
        assert_eq!(col, expect);
    }
    assert_eq!(data.dim_b(), 2);
    assert_eq!(data.b_parities, vec![Parity::Even, Parity::Odd]);
    assert_eq!(
        data.beta_b,
        Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]])
    );
    assert!(data.i_b.is_zero());
}

#[test]
fn zero_homotopy_is_identity_projector() {
    let a = t4();
    let data = validate_homotopy(&a, &Matrix::zeros(4, 4)).unwrap();
    assert_eq!(data.p, Matrix::identity(4));
    assert_eq!(data.dim_b(), 4);
    assert!(!data.i_b.is_zero());
    for i in 0..4 {
        let mut v = vec![q(0); 4];
        v[i] = q(1);
        assert_eq!(projector_image(&data, &v), v);
    }
}

#[test]
fn q1_full_contraction() {
    let a = load(Q1);
    let mut h = Matrix::zeros(2, 2);
    h[(1, 0)] = qf(1, 2);
    let data = validate_homotopy(&a, &h).unwrap();
    assert!(data.p.is_zero());
    assert_eq!(data.dim_b(), 0);
    let built = construct_homotopy(&a, ContractionScope::Full).unwrap();
    assert_eq!(built.h, h);
    assert!(built.p.is_zero());
}

#[test]
fn projector_image_examples() {
    let data = validate_homotopy(&t4(), &t4_h()).unwrap();
    assert_eq!(
        projector_image(&data, &[q(0), q(0), q(1), q(0)]),
        vec![q(0), q(0)]
    );
    assert_eq!(projector_image(&data, &[q(1), q(0), q(0), q(0)])[0], q(1));
    let v = vec![q(3), q(-2), q(5), q(7)];
    let coords = projector_image(&data, &v);
    assert_eq!(data.inclusion.apply(&coords), data.p.apply(&v));
}

#[test]
fn construct_on_t4() {
    let a = t4();
    let data = construct_homotopy(&a, ContractionScope::Full).unwrap();
    assert_eq!(data.p.rank(), 2);
    assert!(data.i_b.is_zero());
    // The contraction pairs x with t.
    assert_eq!(data.h[(3, 2)], q(1));
    let inv = construct_homotopy(&a, ContractionScope::InvertibleOnly).unwrap();
    assert!(inv.h.is_zero());
}

#[test]
fn construct_with_zero_derivation() {
    let mut a = t4();
    a.i_op = Matrix::zeros(4, 4);
    let data = construct_homotopy(&a, ContractionScope::Full).unwrap();
    assert!(data.h.is_zero());
    assert_eq!(data.p, Matrix::identity(4));
}

#[test]
fn doubled_algebras_construct() {
    for bare in [THETA_BARE, YTHETA_BARE] {
        let a = double(&load(bare)).unwrap();
        let full = construct_homotopy(&a, ContractionScope::Full).unwrap();
        assert!(full.i_b.is_zero());
        let inv = construct_homotopy(&a, ContractionScope::InvertibleOnly).unwrap();
        assert!(!inv.i_b.is_zero());
    }
}

#[test]
fn rejects_bad_homotopies() {
    let a = t4();
    let mut h = t4_h();
    h[(3, 2)] = q(2);
    assert!(matches!(validate_homotopy(&a, &h), Err(Error::Homotopy(m)) if m.contains("idempotency")));
    let mut h = t4_h();
    // H(w) = u: beta(Hw, w) = 1 but -beta(w, Hw) = -1.
    h[(0, 1)] = q(1);
    assert!(matches!(validate_homotopy(&a, &h), Err(Error::Homotopy(m)) if m.contains("self-adjoint")));
    let mut h = Matrix::zeros(4, 4);
    h[(0, 2)] = q(1);
    assert!(matches!(validate_homotopy(&a, &h), Err(Error::Homotopy(m)) if m.contains("oddness")));
}

#[test]
fn degenerate_b_is_singular() {
    let mut a = t4();
    a.beta = Some(Matrix::zeros(4, 4));
    a.i_op = Matrix::zeros(4, 4);
    assert!(matches!(
        validate_homotopy(&a, &Matrix::zeros(4, 4)),
        Err(Error::Singular { .. })
    ));
}

fn check_projector_identities(a: &AlgebraSpec, data: &HomotopyData) {
    let beta = a.beta.as_ref().unwrap();
    let c = beta.inverse().unwrap();
    let pc = &data.p * &c;
    let pcp = &pc * &data.p.transpose();
    assert_eq!(pc, pcp);
    if data.dim_b() > 0 {
        let cb = data.beta_b.inverse().unwrap();
        assert_eq!(&(&data.inclusion * &cb) * &data.inclusion.transpose(), pcp);
    }
    // I commutes with P, so B is I-stable.
    assert_eq!(&a.i_op * &data.p, &data.p * &a.i_op);
}

#[test]
fn projector_identities_on_fixtures() {
    let a = t4();
    check_projector_identities(&a, &validate_homotopy(&a, &t4_h()).unwrap());
    for bare in [THETA_BARE, YTHETA_BARE] {
        let a = double(&load(bare)).unwrap();
        for s in [ContractionScope::Full, ContractionScope::InvertibleOnly] {
            check_projector_identities(&a, &construct_homotopy(&a, s).unwrap());
        }
    }
}

proptest! {
    #[test]
    fn q1_family_constructs(c in 1i64..=5, d in 1i64..=3) {
        let mut a = load(Q1);
        a.i_op[(0, 1)] = qf(2 * c, d);
        let data = construct_homotopy(&a, ContractionScope::Full).unwrap();
        prop_assert!(data.p.is_zero());
        prop_assert_eq!(data.h[(1, 0)].clone(), qf(d, 2 * c));
    }

    #[test]
    fn doubled_scaled_derivation_round_trips(c in -3i64..=3) {
        let mut bare = load(YTHETA_BARE);
        bare.i_op = bare.i_op.scale(&q(c));
        let a = double(&bare).unwrap();
        for s in [ContractionScope::Full, ContractionScope::InvertibleOnly] {
            let data = construct_homotopy(&a, s).unwrap();
            prop_assert!(validate_homotopy(&a, &data.h).is_ok());
            check_projector_identities(&a, &data);
        }
    }
}
