use super::{parse_algebra, AlgebraSpec};

pub const T4: &str = include_str!("../../tests/fixtures/t4.alg");
pub const THETA: &str = include_str!("../../tests/fixtures/theta.alg");
pub const THETA_BARE: &str = include_str!("../../tests/fixtures/theta_bare.alg");
pub const GROUND: &str = include_str!("../../tests/fixtures/ground.alg");
pub const Q1: &str = include_str!("../../tests/fixtures/q1.alg");
pub const YTHETA_BARE: &str = include_str!("../../tests/fixtures/ytheta_bare.alg");
pub const YTHETA_EQ: &str = include_str!("../../tests/fixtures/ytheta_eq.alg");

pub fn load(text: &str) -> AlgebraSpec {
    parse_algebra(text).expect("fixture parses")
}

pub fn t4() -> AlgebraSpec {
    load(T4)
}
