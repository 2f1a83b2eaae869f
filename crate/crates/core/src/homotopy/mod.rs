//! The odd homotopy H, the idempotent P = Id - [I, H] and its image B.

mod construct;

pub use construct::{construct_homotopy, ContractionScope};

use crate::algebra::AlgebraSpec;
use crate::superlinear::{fmt_q, Matrix, Parity, Q};
use crate::{Error, Result};
use num_traits::Zero;

#[derive(Debug, Clone)]
pub struct HomotopyData {
    pub h: Matrix,
    pub p: Matrix,
    /// Homogeneous vectors spanning im P, in A coordinates.
    pub b_basis: Vec<Vec<Q>>,
    pub b_parities: Vec<Parity>,
    /// dim A x dim B, columns are `b_basis`.
    pub inclusion: Matrix,
    /// dim B x dim A, sends v to the B coordinates of P v.
    pub projection: Matrix,
    /// Scalar product restricted to B.
    pub beta_b: Matrix,
    /// P I P in B coordinates.
    pub i_b: Matrix,
}

impl HomotopyData {
    pub fn dim_b(&self) -> usize {
        self.b_basis.len()
    }

    /// Parities of the shifted B basis (the letters of functionals on B).
    pub fn letter_parities(&self) -> Vec<Parity> {
        self.b_parities.iter().map(|p| p.flip()).collect()
    }
}

/// `[X, Y] = XY + YX` for odd operators.
pub fn anticommutator(x: &Matrix, y: &Matrix) -> Matrix {
    &(x * y) + &(y * x)
}

fn witness(spec: &AlgebraSpec, i: usize, j: usize, what: &str, v: &Q) -> Error {
    Error::Homotopy(format!(
        "{what} fails at ({}, {}): defect {}",
        spec.basis.name(i),
        spec.basis.name(j),
        fmt_q(v)
    ))
}

fn first_nonzero(m: &Matrix) -> Option<(usize, usize)> {
    (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .find(|&(i, j)| !m[(i, j)].is_zero())
}

pub fn projector_image(data: &HomotopyData, v: &[Q]) -> Vec<Q> {
    data.projection.apply(v)
}

pub fn validate_homotopy(spec: &AlgebraSpec, h: &Matrix) -> Result<HomotopyData> {
    let d = spec.dim();
    if h.rows() != d || h.cols() != d {
        return Err(Error::Homotopy(format!("H must be {d}x{d}")));
    }
    let par = spec.basis.parities();
    for j in 0..d {
        for i in 0..d {
            if !h[(j, i)].is_zero() && par[i] == par[j] {
                return Err(witness(spec, j, i, "oddness of H", &h[(j, i)]));
            }
        }
    }
    let beta = spec.beta()?;
    let i_op = &spec.i_op;
    let p = &Matrix::identity(d) - &anticommutator(i_op, h);
    let pp = &(&p * &p) - &p;
    if let Some((i, j)) = first_nonzero(&pp) {
        return Err(witness(spec, i, j, "idempotency of P", &pp[(i, j)]));
    }
    // beta(Ha, b) = (-1)^a beta(a, Hb)
    let left = &h.transpose() * beta;
    let right = beta * h;
    for a in 0..d {
        for b in 0..d {
            let r = if par[a].is_odd() {
                -right[(a, b)].clone()
            } else {
                right[(a, b)].clone()
            };
            let diff = &left[(a, b)] - r;
            if !diff.is_zero() {
                return Err(witness(spec, a, b, "self-adjointness of H", &diff));
            }
        }
    }
    let i2 = i_op * i_op;
    let comm = &(h * &i2) - &(&i2 * h);
    if let Some((i, j)) = first_nonzero(&comm) {
        return Err(witness(spec, i, j, "commutation of H with I^2", &comm[(i, j)]));
    }
    assemble(spec, h.clone(), p)
}

fn assemble(spec: &AlgebraSpec, h: Matrix, p: Matrix) -> Result<HomotopyData> {
    let d = spec.dim();
    let par = spec.basis.parities();
    let cols = p.pivot_columns();
    let b_basis: Vec<Vec<Q>> = cols.iter().map(|&j| p.column(j)).collect();
    let b_parities: Vec<Parity> = cols.iter().map(|&j| par[j]).collect();
    let k = b_basis.len();
    let inclusion = Matrix::from_columns(d, &b_basis);
    let mut projection = Matrix::zeros(k, d);
    for i in 0..d {
        let x = inclusion
            .solve(&p.column(i))
            .expect("P e_i lies in the column space of P");
        for (r, v) in x.into_iter().enumerate() {
            projection[(r, i)] = v;
        }
    }
    let beta = spec.beta()?;
    let beta_b = &(&inclusion.transpose() * beta) * &inclusion;
    if k > 0 && beta_b.inverse().is_none() {
        let radical = beta_b
            .kernel()
            .into_iter()
            .map(|v| {
                let in_a = inclusion.apply(&v);
                in_a.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(i, x)| format!("{}*{}", fmt_q(x), spec.basis.name(i)))
                    .collect()
            })
            .collect();
        return Err(Error::Singular { radical });
    }
    let i_b = &(&projection * &spec.i_op) * &inclusion;
    Ok(HomotopyData {
        h,
        p,
        b_basis,
        b_parities,
        inclusion,
        projection,
        beta_b,
        i_b,
    })
}

/// Basis of `{v : m v = 0}` made of parity-homogeneous vectors. Every row of
/// `m` must involve columns of a single parity.
pub(crate) fn homogeneous_kernel(m: &Matrix, par: &[Parity]) -> Vec<Vec<Q>> {
    let d = m.cols();
    let mut out = Vec::new();
    for want in [Parity::Even, Parity::Odd] {
        let cols: Vec<usize> = (0..d).filter(|&j| par[j] == want).collect();
        if cols.is_empty() {
            continue;
        }
        let mut sub = Matrix::zeros(m.rows(), cols.len());
        for i in 0..m.rows() {
            for (c, &j) in cols.iter().enumerate() {
                sub[(i, c)] = m[(i, j)].clone();
            }
        }
        for v in sub.kernel() {
            let mut full = vec![Q::zero(); d];
            for (c, &j) in cols.iter().enumerate() {
                full[j] = v[c].clone();
            }
            out.push(full);
        }
    }
    out.sort_by_key(|v| v.iter().position(|x| !x.is_zero()));
    out
}

pub(crate) fn parity_of(v: &[Q], par: &[Parity]) -> Parity {
    v.iter()
        .zip(par)
        .find(|(x, _)| !x.is_zero())
        .map(|(_, p)| *p)
        .unwrap_or(Parity::Even)
}

#[cfg(test)]
mod tests;
