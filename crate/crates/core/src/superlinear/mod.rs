//! Exact Z/2-graded linear algebra.
//!
//! Everything here works over arbitrary-precision rationals. A slot of a tensor
//! may carry the parity-shift flag; the shift changes the parity used for sign
//! bookkeeping but never the index space.

mod matrix;
mod tensor;

pub use matrix::Matrix;
pub(crate) use tensor::singular as singular_radical;
pub use tensor::{beta_inverse, GradedBasis, SlotSpec, SparseTensor, Variance};

use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q` or an integer.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

/// Renders a rational as `p/q` (or `p` when integral).
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn from_bool(odd: bool) -> Parity {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn sum<I: IntoIterator<Item = Parity>>(it: I) -> Parity {
        it.into_iter().fold(Parity::Even, |a, b| a + b)
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A sign in {+1, -1}, stored as "is negative".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Sign(pub bool);

impl Sign {
    pub const PLUS: Sign = Sign(false);
    pub const MINUS: Sign = Sign(true);

    pub fn from_parity(p: Parity) -> Sign {
        Sign(p.is_odd())
    }

    pub fn to_i64(self) -> i64 {
        if self.0 {
            -1
        } else {
            1
        }
    }

    pub fn apply(self, x: Q) -> Q {
        if self.0 {
            -x
        } else {
            x
        }
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;
    fn add(self, other: Parity) -> Parity {
        Parity::from_bool(self.is_odd() != other.is_odd())
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign(self.0 != rhs.0)
    }
}

impl std::ops::MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
    }
}

/// Koszul sign of rearranging graded objects.
///
/// `perm[i]` is the original position of the object that ends up at position
/// `i`; `parities` is indexed by original position. Every inverted pair of odd
/// objects contributes a factor of -1.
pub fn koszul_sign(perm: &[usize], parities: &[Parity]) -> Result<Sign> {
    let n = perm.len();
    if parities.len() != n {
        return Err(Error::Argument(format!(
            "permutation has {n} entries but {} parities were given",
            parities.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::Argument(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(koszul_sign_unchecked(perm, parities))
}

/// As [`koszul_sign`] without validation; `perm` must be a bijection.
pub fn koszul_sign_unchecked(perm: &[usize], parities: &[Parity]) -> Sign {
    let mut neg = false;
    for i in 0..perm.len() {
        if !parities[perm[i]].is_odd() {
            continue;
        }
        for j in i + 1..perm.len() {
            if perm[j] < perm[i] && parities[perm[j]].is_odd() {
                neg = !neg;
            }
        }
    }
    Sign(neg)
}
