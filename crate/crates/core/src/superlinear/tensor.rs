use super::{koszul_sign_unchecked, Matrix, Parity, Sign, Q};
use crate::{Error, Result};
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

/// An ordered basis of a Z/2-graded vector space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedBasis {
    names: Vec<String>,
    parities: Vec<Parity>,
}

impl GradedBasis {
    pub fn new(elements: Vec<(String, Parity)>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Argument("basis must have dimension >= 1".into()));
        }
        let mut seen = HashSet::new();
        for (n, _) in &elements {
            if !seen.insert(n.as_str()) {
                return Err(Error::Argument(format!("duplicate basis name `{n}`")));
            }
        }
        let (names, parities) = elements.into_iter().unzip();
        Ok(GradedBasis { names, parities })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parities[i]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variance {
    Vector,
    Covector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotSpec {
    pub basis: Arc<GradedBasis>,
    pub variance: Variance,
    pub shifted: bool,
}

impl SlotSpec {
    pub fn new(basis: &Arc<GradedBasis>, variance: Variance, shifted: bool) -> Self {
        SlotSpec {
            basis: Arc::clone(basis),
            variance,
            shifted,
        }
    }

    /// Parity of basis index `i` as seen through this slot.
    pub fn parity(&self, i: usize) -> Parity {
        let p = self.basis.parity(i);
        if self.shifted {
            p.flip()
        } else {
            p
        }
    }
}

/// A multilinear tensor with exact coefficients, stored sparsely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseTensor {
    slots: Vec<SlotSpec>,
    entries: BTreeMap<Vec<usize>, Q>,
}

impl SparseTensor {
    pub fn new(slots: Vec<SlotSpec>) -> Self {
        SparseTensor {
            slots,
            entries: BTreeMap::new(),
        }
    }

    pub fn slots(&self) -> &[SlotSpec] {
        &self.slots
    }

    pub fn order(&self) -> usize {
        self.slots.len()
    }

    /// Adds `value` to the entry at `idx`, dropping it if the sum vanishes.
    pub fn add_entry(&mut self, idx: Vec<usize>, value: Q) -> Result<()> {
        if idx.len() != self.slots.len() {
            return Err(Error::Argument(format!(
                "index {idx:?} has wrong length for a tensor of order {}",
                self.slots.len()
            )));
        }
        for (k, (&i, s)) in idx.iter().zip(&self.slots).enumerate() {
            if i >= s.basis.dim() {
                return Err(Error::Argument(format!(
                    "index {i} out of range in slot {k} (dimension {})",
                    s.basis.dim()
                )));
            }
        }
        if value.is_zero() {
            return Ok(());
        }
        match self.entries.entry(idx) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += value;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, idx: &[usize]) -> Q {
        self.entries.get(idx).cloned().unwrap_or_else(Q::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Q)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total parity of an index tuple.
    pub fn index_parity(&self, idx: &[usize]) -> Parity {
        Parity::sum(idx.iter().zip(&self.slots).map(|(&i, s)| s.parity(i)))
    }

    /// Contracts slot pairs `(slot of self, slot of other)`.
    ///
    /// The sign is the Koszul sign of moving the paired slots, pair by pair, to
    /// the end of the concatenated slot list `[self, other]`. The result keeps
    /// the unpaired slots of `self` followed by those of `other`.
    pub fn contract(&self, other: &SparseTensor, pairs: &[(usize, usize)]) -> Result<SparseTensor> {
        let mut used_t = vec![false; self.order()];
        let mut used_u = vec![false; other.order()];
        for &(a, b) in pairs {
            let (Some(sa), Some(sb)) = (self.slots.get(a), other.slots.get(b)) else {
                return Err(Error::Contraction(format!("slot pair ({a},{b}) out of range")));
            };
            if used_t[a] || used_u[b] {
                return Err(Error::Contraction(format!("slot reused in pair ({a},{b})")));
            }
            used_t[a] = true;
            used_u[b] = true;
            check_pairable(sa, sb)?;
        }
        let n_t = self.order();
        let rest_t: Vec<usize> = (0..n_t).filter(|&i| !used_t[i]).collect();
        let rest_u: Vec<usize> = (0..other.order()).filter(|&i| !used_u[i]).collect();
        let mut perm: Vec<usize> = rest_t.clone();
        perm.extend(rest_u.iter().map(|&j| n_t + j));
        for &(a, b) in pairs {
            perm.push(a);
            perm.push(n_t + b);
        }
        let mut slots: Vec<SlotSpec> = rest_t.iter().map(|&i| self.slots[i].clone()).collect();
        slots.extend(rest_u.iter().map(|&j| other.slots[j].clone()));
        let mut out = SparseTensor::new(slots);

        // Bucket the other tensor by the indices on its paired slots.
        let mut buckets: HashMap<Vec<usize>, Vec<(&Vec<usize>, &Q)>> = HashMap::new();
        for (idx, v) in &other.entries {
            let key: Vec<usize> = pairs.iter().map(|&(_, b)| idx[b]).collect();
            buckets.entry(key).or_default().push((idx, v));
        }
        let mut parities = Vec::with_capacity(perm.len());
        for (ti, tv) in &self.entries {
            let key: Vec<usize> = pairs.iter().map(|&(a, _)| ti[a]).collect();
            let Some(matches) = buckets.get(&key) else {
                continue;
            };
            for (ui, uv) in matches {
                parities.clear();
                parities.extend(ti.iter().zip(&self.slots).map(|(&i, s)| s.parity(i)));
                parities.extend(ui.iter().zip(&other.slots).map(|(&i, s)| s.parity(i)));
                let sign = koszul_sign_unchecked(&perm, &parities);
                let mut idx: Vec<usize> = rest_t.iter().map(|&i| ti[i]).collect();
                idx.extend(rest_u.iter().map(|&j| ui[j]));
                out.add_entry(idx, sign.apply(tv * *uv))?;
            }
        }
        Ok(out)
    }

    /// Contracts pairs of slots within one tensor, moving each pair to the end.
    pub fn trace(&self, pairs: &[(usize, usize)]) -> Result<SparseTensor> {
        let mut used = vec![false; self.order()];
        for &(a, b) in pairs {
            if a >= self.order() || b >= self.order() || a == b || used[a] || used[b] {
                return Err(Error::Contraction(format!("bad trace pair ({a},{b})")));
            }
            used[a] = true;
            used[b] = true;
            check_pairable(&self.slots[a], &self.slots[b])?;
        }
        let rest: Vec<usize> = (0..self.order()).filter(|&i| !used[i]).collect();
        let mut perm = rest.clone();
        for &(a, b) in pairs {
            perm.push(a);
            perm.push(b);
        }
        let mut out = SparseTensor::new(rest.iter().map(|&i| self.slots[i].clone()).collect());
        for (idx, v) in &self.entries {
            if pairs.iter().any(|&(a, b)| idx[a] != idx[b]) {
                continue;
            }
            let parities: Vec<Parity> = idx.iter().zip(&self.slots).map(|(&i, s)| s.parity(i)).collect();
            let sign = koszul_sign_unchecked(&perm, &parities);
            out.add_entry(rest.iter().map(|&i| idx[i]).collect(), sign.apply(v.clone()))?;
        }
        Ok(out)
    }

    /// Reorders slots: slot `k` of the result is slot `perm[k]` of `self`,
    /// with the Koszul sign of the rearrangement.
    pub fn permute_slots(&self, perm: &[usize]) -> Result<SparseTensor> {
        if perm.len() != self.order() {
            return Err(Error::Argument("slot permutation has wrong length".into()));
        }
        let mut out = SparseTensor::new(perm.iter().map(|&p| self.slots[p].clone()).collect());
        for (idx, v) in &self.entries {
            let parities: Vec<Parity> = idx.iter().zip(&self.slots).map(|(&i, s)| s.parity(i)).collect();
            let sign: Sign = super::koszul_sign(perm, &parities)?;
            out.add_entry(perm.iter().map(|&p| idx[p]).collect(), sign.apply(v.clone()))?;
        }
        Ok(out)
    }

    /// The 2-slot tensor as a matrix `M[(i, j)] = T(i, j)`.
    pub fn to_matrix(&self) -> Result<Matrix> {
        if self.order() != 2 {
            return Err(Error::Argument("to_matrix needs a 2-slot tensor".into()));
        }
        let mut m = Matrix::zeros(self.slots[0].basis.dim(), self.slots[1].basis.dim());
        for (idx, v) in &self.entries {
            m[(idx[0], idx[1])] = v.clone();
        }
        Ok(m)
    }

    pub fn from_matrix(m: &Matrix, s0: SlotSpec, s1: SlotSpec) -> Result<SparseTensor> {
        let mut t = SparseTensor::new(vec![s0, s1]);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                t.add_entry(vec![i, j], m[(i, j)].clone())?;
            }
        }
        Ok(t)
    }
}

fn check_pairable(a: &SlotSpec, b: &SlotSpec) -> Result<()> {
    if a.basis != b.basis {
        return Err(Error::Contraction("paired slots live on different bases".into()));
    }
    if a.variance == b.variance {
        return Err(Error::Contraction(
            "paired slots must have opposite variance".into(),
        ));
    }
    if a.shifted != b.shifted {
        return Err(Error::Contraction(
            "paired slots disagree on the parity shift".into(),
        ));
    }
    Ok(())
}

/// Inverts a nondegenerate odd scalar product.
///
/// Returns the 2-vector tensor whose matrix is the inverse of the matrix of
/// `beta`, so that contracting the second slot of `beta` with the first slot
/// of the result gives the identity operator.
pub fn beta_inverse(beta: &SparseTensor) -> Result<SparseTensor> {
    if beta.order() != 2
        || beta.slots().iter().any(|s| s.variance != Variance::Covector)
        || beta.slots()[0].basis != beta.slots()[1].basis
    {
        return Err(Error::Argument(
            "scalar product must be a 2-covector tensor on a single basis".into(),
        ));
    }
    let basis = Arc::clone(&beta.slots()[0].basis);
    for (idx, _) in beta.entries() {
        if basis.parity(idx[0]) == basis.parity(idx[1]) {
            return Err(Error::Argument(format!(
                "scalar product is not odd: entry ({}, {}) pairs equal parities",
                basis.name(idx[0]),
                basis.name(idx[1])
            )));
        }
    }
    let g = beta.to_matrix()?;
    match g.inverse() {
        Some(inv) => {
            let s0 = SlotSpec::new(&basis, Variance::Vector, beta.slots()[0].shifted);
            let s1 = SlotSpec::new(&basis, Variance::Vector, beta.slots()[1].shifted);
            SparseTensor::from_matrix(&inv, s0, s1)
        }
        None => Err(singular(&basis, &g)),
    }
}

pub(crate) fn singular(basis: &GradedBasis, g: &Matrix) -> Error {
    let radical = g
        .kernel()
        .into_iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| format!("{}*{}", super::fmt_q(x), basis.name(i)))
                .collect()
        })
        .collect();
    Error::Singular { radical }
}
