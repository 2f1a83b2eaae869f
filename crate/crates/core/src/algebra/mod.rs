//! Algebraic input: graded basis, products, scalar product and the odd
//! derivation, plus validation and the doubling construction.
//!
//! Products come in two shapes. A raw product of arity n has n shifted
//! covector slots and one (unshifted) vector slot. A cyclic product of arity
//! n has n + 1 shifted covector slots. Lowering a raw product with the scalar
//! product uses the sign `(-1)^e`, `e = sum_k (n - k) a_k + a_out`, which for
//! n = 2 reduces to `m(a, b, c) = (-1)^b beta(ab, c)`.

mod parse;
mod validate;

pub use parse::{parse_algebra, write_algebra};
pub use validate::{check_delta_m_zero, validate_a_infinity, validate_cyclic_dga, Check, ValidationReport};

use crate::bvcalc::{BvContext, Functional};
use crate::superlinear::{GradedBasis, Matrix, Parity, SlotSpec, SparseTensor, Variance, Q};
use crate::{Error, Result};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraKind {
    Associative,
    AInfinity,
}

#[derive(Debug, Clone)]
pub struct AlgebraSpec {
    pub basis: Arc<GradedBasis>,
    pub kind: AlgebraKind,
    /// Raw products keyed by arity.
    pub raw_products: BTreeMap<usize, SparseTensor>,
    /// Cyclic products keyed by arity (number of slots minus one).
    pub cyclic_products: BTreeMap<usize, SparseTensor>,
    /// Gram matrix `beta[(i, j)] = beta(e_i, e_j)`.
    pub beta: Option<Matrix>,
    /// `i_op[(j, i)]` is the coefficient of `e_j` in `I e_i`.
    pub i_op: Matrix,
    pub h_op: Option<Matrix>,
}

pub fn raw_slots(basis: &Arc<GradedBasis>, n: usize) -> Vec<SlotSpec> {
    let mut s = vec![SlotSpec::new(basis, Variance::Covector, true); n];
    s.push(SlotSpec::new(basis, Variance::Vector, false));
    s
}

pub fn cyclic_slots(basis: &Arc<GradedBasis>, n: usize) -> Vec<SlotSpec> {
    vec![SlotSpec::new(basis, Variance::Covector, true); n + 1]
}

fn lowering_odd(parities: &[Parity], inputs: &[usize], out: usize) -> bool {
    let n = inputs.len();
    let mut odd = parities[out].is_odd();
    for (k, &a) in inputs.iter().enumerate() {
        if (n - 1 - k) % 2 == 1 && parities[a].is_odd() {
            odd = !odd;
        }
    }
    odd
}

/// Lowers a raw product of any arity to its cyclic form.
pub fn cyclic_tensor_from_product(m: &SparseTensor, beta: &Matrix) -> Result<SparseTensor> {
    let order = m.order();
    if order < 3 {
        return Err(Error::Argument("a product needs at least two inputs".into()));
    }
    let basis = m.slots()[0].basis.clone();
    let par = basis.parities().to_vec();
    let mut out = SparseTensor::new(cyclic_slots(&basis, order - 1));
    for (idx, v) in m.entries() {
        let (inputs, j) = idx.split_at(order - 1);
        let j = j[0];
        let sign = lowering_odd(&par, inputs, j);
        for c in 0..basis.dim() {
            let b = &beta[(j, c)];
            if b.is_zero() {
                continue;
            }
            let mut t = inputs.to_vec();
            t.push(c);
            let val = if sign { -(v * b) } else { v * b };
            out.add_entry(t, val)?;
        }
    }
    Ok(out)
}

/// Inverse of [`cyclic_tensor_from_product`].
pub fn product_from_cyclic(m: &SparseTensor, beta: &Matrix) -> Result<SparseTensor> {
    let order = m.order();
    let basis = m.slots()[0].basis.clone();
    let par = basis.parities().to_vec();
    let ginv = beta
        .inverse()
        .ok_or_else(|| crate::superlinear::singular_radical(&basis, beta))?;
    let mut out = SparseTensor::new(raw_slots(&basis, order - 1));
    for (idx, v) in m.entries() {
        let (inputs, c) = idx.split_at(order - 1);
        let c = c[0];
        for j in 0..basis.dim() {
            let g = &ginv[(c, j)];
            if g.is_zero() {
                continue;
            }
            let sign = lowering_odd(&par, inputs, j);
            let val = if sign { -(v * g) } else { v * g };
            let mut t = inputs.to_vec();
            t.push(j);
            out.add_entry(t, val)?;
        }
    }
    Ok(out)
}

impl AlgebraSpec {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Parities of the shifted basis.
    pub fn letter_parities(&self) -> Vec<Parity> {
        self.basis.parities().iter().map(|p| p.flip()).collect()
    }

    pub fn beta(&self) -> Result<&Matrix> {
        self.beta
            .as_ref()
            .ok_or_else(|| Error::Argument("the algebra has no scalar product".into()))
    }

    /// All products in cyclic form, keyed by arity.
    pub fn cyclic_forms(&self) -> Result<BTreeMap<usize, SparseTensor>> {
        let beta = self.beta()?;
        let mut out = self.cyclic_products.clone();
        for (&n, raw) in &self.raw_products {
            let low = cyclic_tensor_from_product(raw, beta)?;
            match out.get_mut(&n) {
                None => {
                    out.insert(n, low);
                }
                Some(t) => {
                    for (idx, v) in low.entries() {
                        t.add_entry(idx.clone(), v.clone())?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// All products in raw form, keyed by arity.
    pub fn raw_forms(&self) -> Result<BTreeMap<usize, SparseTensor>> {
        let mut out = self.raw_products.clone();
        if self.cyclic_products.is_empty() {
            return Ok(out);
        }
        let beta = self.beta()?;
        for (&n, cyc) in &self.cyclic_products {
            let raw = product_from_cyclic(cyc, beta)?;
            match out.get_mut(&n) {
                None => {
                    out.insert(n, raw);
                }
                Some(t) => {
                    for (idx, v) in raw.entries() {
                        t.add_entry(idx.clone(), v.clone())?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// BV context on the shifted algebra: inverse scalar product as the
    /// pairing, the derivation acting on letters.
    pub fn bv_context(&self) -> Result<BvContext> {
        let beta = self.beta()?;
        let ginv = beta
            .inverse()
            .ok_or_else(|| crate::superlinear::singular_radical(&self.basis, beta))?;
        BvContext::new(self.letter_parities(), ginv)?.with_derivation(self.i_op.clone())
    }

    /// Sum of the single-cycle functionals of all cyclic products.
    pub fn product_functional(&self) -> Result<Functional> {
        let par = self.letter_parities();
        let mut f = Functional::new();
        for t in self.cyclic_forms()?.values() {
            f.add_assign(&Functional::from_cyclic_entries(t.entries(), 0, &par)?);
        }
        Ok(f)
    }
}

/// Builds `A + (Pi A)^*` with the natural odd pairing from an algebra with
/// no scalar product. Dual basis vectors are named `<name>*`.
pub fn double(spec: &AlgebraSpec) -> Result<AlgebraSpec> {
    if spec.beta.is_some() || !spec.cyclic_products.is_empty() {
        return Err(Error::Argument(
            "doubling expects raw products and no scalar product".into(),
        ));
    }
    let n = spec.dim();
    let par = spec.basis.parities();
    let mut elems: Vec<(String, Parity)> = (0..n).map(|i| (spec.basis.name(i).to_string(), par[i])).collect();
    elems.extend((0..n).map(|i| (format!("{}*", spec.basis.name(i)), par[i].flip())));
    let basis = Arc::new(GradedBasis::new(elems)?);
    let dpar = basis.parities().to_vec();
    let lpar: Vec<Parity> = dpar.iter().map(|p| p.flip()).collect();

    let mut beta = Matrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        beta[(i, n + i)] = Q::from_integer(1.into());
        beta[(n + i, i)] = Q::from_integer(1.into());
    }

    let mut i_op = Matrix::zeros(2 * n, 2 * n);
    for a in 0..n {
        for b in 0..n {
            let v = spec.i_op[(a, b)].clone();
            if v.is_zero() {
                continue;
            }
            i_op[(a, b)] = v.clone();
            // I(b) has an e_a component; the dual action sends a* to b*.
            i_op[(n + b, n + a)] = if par[a].is_odd() { -v } else { v };
        }
    }

    let mut cyclic = BTreeMap::new();
    for (&k, raw) in &spec.raw_products {
        let mut entries: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
        for (idx, v) in raw.entries() {
            let (inputs, j) = idx.split_at(k);
            let j = j[0];
            let val = if lowering_odd(par, inputs, j) {
                -v.clone()
            } else {
                v.clone()
            };
            let mut word: Vec<usize> = inputs.to_vec();
            word.push(n + j);
            for r in 0..word.len() {
                let rot: Vec<usize> = word[r..].iter().chain(&word[..r]).copied().collect();
                let head = word[..r].iter().filter(|&&x| lpar[x].is_odd()).count() % 2 == 1;
                let tail = word[r..].iter().filter(|&&x| lpar[x].is_odd()).count() % 2 == 1;
                let s = if head && tail { -val.clone() } else { val.clone() };
                *entries.entry(rot).or_insert_with(Q::zero) += s;
            }
        }
        let mut t = SparseTensor::new(cyclic_slots(&basis, k));
        for (idx, v) in entries {
            t.add_entry(idx, v)?;
        }
        cyclic.insert(k, t);
    }

    let mut raw_products = BTreeMap::new();
    for (&k, t) in &cyclic {
        raw_products.insert(k, product_from_cyclic(t, &beta)?);
    }
    Ok(AlgebraSpec {
        basis,
        kind: spec.kind,
        raw_products,
        cyclic_products: BTreeMap::new(),
        beta: Some(beta),
        i_op,
        h_op: None,
    })
}

#[cfg(test)]
pub(crate) mod fixtures;
