use super::{anticommutator, homogeneous_kernel, parity_of, validate_homotopy, HomotopyData};
use crate::algebra::AlgebraSpec;
use crate::superlinear::{q, Matrix, Parity, Q};
use crate::{Error, Result};
use num_traits::Zero;
use std::collections::BTreeMap;

/// How much of the algebra the constructed homotopy contracts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContractionScope {
    /// Contract everything except representatives of the cohomology of I on
    /// ker I^2.
    #[default]
    Full,
    /// Contract only the complement of ker I^2, where I is invertible; B is
    /// then ker I^2 itself.
    InvertibleOnly,
}

fn rank_of(vectors: &[Vec<Q>], d: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_columns(d, vectors).rank()
}

/// Linear system in the odd entries of an unknown operator X.
struct System {
    vars: BTreeMap<(usize, usize), usize>,
    rows: Vec<(BTreeMap<usize, Q>, Q)>,
}

impl System {
    fn new(par: &[Parity]) -> Self {
        let d = par.len();
        let mut vars = BTreeMap::new();
        for i in 0..d {
            for j in 0..d {
                if par[i] != par[j] {
                    let n = vars.len();
                    vars.insert((i, j), n);
                }
            }
        }
        System {
            vars,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, terms: Vec<((usize, usize), Q)>, rhs: Q) {
        let mut row = BTreeMap::new();
        for (ij, c) in terms {
            if c.is_zero() {
                continue;
            }
            if let Some(&v) = self.vars.get(&ij) {
                *row.entry(v).or_insert_with(Q::zero) += c;
            }
        }
        row.retain(|_, c| !c.is_zero());
        if row.is_empty() && rhs.is_zero() {
            return;
        }
        self.rows.push((row, rhs));
    }

    fn solve(&self, d: usize) -> Option<Matrix> {
        let n = self.vars.len();
        let mut a = Matrix::zeros(self.rows.len(), n);
        let mut b = Vec::with_capacity(self.rows.len());
        for (r, (row, rhs)) in self.rows.iter().enumerate() {
            for (&v, c) in row {
                a[(r, v)] = c.clone();
            }
            b.push(rhs.clone());
        }
        let x = if self.rows.is_empty() {
            vec![Q::zero(); n]
        } else {
            a.solve(&b)?
        };
        let mut out = Matrix::zeros(d, d);
        for (&(i, j), &v) in &self.vars {
            out[(i, j)] = x[v].clone();
        }
        Some(out)
    }
}

/// `1/2 I^{-1}` on the complement of ker I^2, zero on ker I^2.
fn invertible_part(i_op: &Matrix, k: &[Vec<Q>], kperp: &[Vec<Q>], d: usize) -> Result<Matrix> {
    if kperp.is_empty() {
        return Ok(Matrix::zeros(d, d));
    }
    let mut cols = k.to_vec();
    cols.extend_from_slice(kperp);
    let basis = Matrix::from_columns(d, &cols);
    let inv = basis
        .inverse()
        .ok_or_else(|| Error::Homotopy("ker I^2 and its orthogonal complement do not span".into()))?;
    let i_new = &(&inv * i_op) * &basis;
    let nk = k.len();
    let m = kperp.len();
    let mut block = Matrix::zeros(m, m);
    for r in 0..m {
        for c in 0..m {
            block[(r, c)] = i_new[(nk + r, nk + c)].clone();
        }
    }
    let block_inv = block
        .inverse()
        .ok_or_else(|| Error::Homotopy("I is not invertible off ker I^2".into()))?;
    let mut h_new = Matrix::zeros(d, d);
    for r in 0..m {
        for c in 0..m {
            h_new[(nk + r, nk + c)] = &block_inv[(r, c)] / q(2);
        }
    }
    Ok(&(&basis * &h_new) * &inv)
}

pub fn construct_homotopy(spec: &AlgebraSpec, scope: ContractionScope) -> Result<HomotopyData> {
    let d = spec.dim();
    let par = spec.basis.parities().to_vec();
    let beta = spec.beta()?.clone();
    let i_op = &spec.i_op;
    let i2 = i_op * i_op;

    let k = homogeneous_kernel(&i2, &par);
    let kmat = Matrix::from_columns(d, &k);
    if !k.is_empty() {
        let beta_k = &(&kmat.transpose() * &beta) * &kmat;
        if beta_k.inverse().is_none() {
            return Err(Error::Homotopy(
                "the scalar product is degenerate on ker I^2, so this construction cannot split \
                 the algebra; supply H explicitly"
                    .into(),
            ));
        }
    }
    let kperp = if k.is_empty() {
        (0..d)
            .map(|i| (0..d).map(|j| if i == j { q(1) } else { q(0) }).collect())
            .collect()
    } else {
        homogeneous_kernel(&(&kmat.transpose() * &beta), &par)
    };
    let h_perp = invertible_part(i_op, &k, &kperp, d)?;
    if scope == ContractionScope::InvertibleOnly || k.is_empty() {
        return validate_homotopy(spec, &h_perp);
    }

    // Cocycles of I inside ker I^2.
    let k_par: Vec<Parity> = k.iter().map(|v| parity_of(v, &par)).collect();
    let ik = i_op * &kmat;
    let z: Vec<Vec<Q>> = homogeneous_kernel(&ik, &k_par)
        .into_iter()
        .map(|y| kmat.apply(&y))
        .collect();
    let mut image: Vec<Vec<Q>> = Vec::new();
    for c in 0..ik.cols() {
        let v = ik.column(c);
        let mut trial = image.clone();
        trial.push(v.clone());
        if rank_of(&trial, d) > image.len() {
            image.push(v);
        }
    }
    let mut span = image.clone();
    let mut reps: Vec<Vec<Q>> = Vec::new();
    for v in &z {
        let mut trial = span.clone();
        trial.push(v.clone());
        if rank_of(&trial, d) > span.len() {
            span.push(v.clone());
            reps.push(v.clone());
        }
    }
    // W: the part of ker I^2 orthogonal to the representatives.
    let w: Vec<Vec<Q>> = if reps.is_empty() {
        k.clone()
    } else {
        let rmat = Matrix::from_columns(d, &reps);
        let cons = &(&rmat.transpose() * &beta) * &kmat;
        homogeneous_kernel(&cons, &k_par)
            .into_iter()
            .map(|y| kmat.apply(&y))
            .collect()
    };

    let mut sys = System::new(&par);
    let entry = |i: usize, j: usize, c: Q| ((i, j), c);
    // X vanishes on the representatives and off ker I^2.
    for v in reps.iter().chain(&kperp) {
        for i in 0..d {
            sys.push((0..d).map(|j| entry(i, j, v[j].clone())).collect(), q(0));
        }
    }
    // X lands in W.
    for v in reps.iter().chain(&kperp) {
        let bv: Vec<Q> = (0..d)
            .map(|i| (0..d).map(|a| &v[a] * &beta[(a, i)]).sum())
            .collect();
        for j in 0..d {
            sys.push((0..d).map(|i| entry(i, j, bv[i].clone())).collect(), q(0));
        }
    }
    // (I X + X I) w = w.
    for wv in &w {
        let iw = i_op.apply(wv);
        for r in 0..d {
            let mut terms = Vec::new();
            for s in 0..d {
                for (t, wt) in wv.iter().enumerate() {
                    let c = &i_op[(r, s)] * wt;
                    if !c.is_zero() {
                        terms.push(entry(s, t, c));
                    }
                }
                if !iw[s].is_zero() {
                    terms.push(entry(r, s, iw[s].clone()));
                }
            }
            sys.push(terms, wv[r].clone());
        }
    }
    // beta(X e_a, e_b) = (-1)^a beta(e_a, X e_b).
    for a in 0..d {
        for b in 0..d {
            let mut terms = Vec::new();
            for c in 0..d {
                terms.push(entry(c, a, beta[(c, b)].clone()));
                let v = beta[(a, c)].clone();
                terms.push(entry(c, b, if par[a].is_odd() { v } else { -v }));
            }
            sys.push(terms, q(0));
        }
    }
    let x = sys.solve(d).ok_or_else(|| {
        Error::Homotopy("no self-adjoint contraction of ker I^2 exists for this splitting".into())
    })?;
    let h = &h_perp + &x;
    debug_assert!({
        let p = &Matrix::identity(d) - &anticommutator(i_op, &h);
        &p * &p == p
    });
    validate_homotopy(spec, &h)
}
