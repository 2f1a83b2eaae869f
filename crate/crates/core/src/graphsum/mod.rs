//! Graph weights: vertex products contracted along edges with a propagator,
//! legs read off along boundary components, summed over isomorphism classes.
//!
//! A graph's flags are laid out vertex by vertex, each vertex starting at its
//! smallest flag and following the cyclic order. Each vertex carries the
//! cyclic form of the product of matching arity. An edge between positions
//! `p < q` contributes `K(a_p, a_q)` for its edge matrix `K` and is moved to
//! the front before contraction; the remaining leg letters are then arranged
//! into boundary words. All moves are charged their Koszul sign in letter
//! parities. Classes are weighted by the inverse of their automorphism count.

use crate::algebra::{AlgebraKind, AlgebraSpec};
use crate::bvcalc::{Functional, Letter};
use crate::homotopy::HomotopyData;
use crate::ribbon::{enumerate_unlabeled, GraphClass, RibbonGraph, Valency};
use crate::superlinear::{koszul_sign_unchecked, q, Matrix, Parity, Q};
use crate::{Error, Result};
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;

mod pillars;

pub use pillars::{check_pillars, small_windows, PillarReport};

/// Edge matrix `K = -H G^{-1}` in letter indices, where `G` is the Gram
/// matrix of the scalar product. The sign makes the derivation of a weight
/// equal the sum of its edge variants carrying `[I, H] G^{-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    pub matrix: Matrix,
}

impl Propagator {
    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// First entry violating `K(b, a) = (-1)^{|a||b|} K(a, b)` in letter
    /// parities.
    pub fn symmetry_defect(&self, letter_parities: &[Parity]) -> Option<(usize, usize)> {
        graded_symmetry_defect(&self.matrix, letter_parities)
    }
}

fn graded_symmetry_defect(k: &Matrix, par: &[Parity]) -> Option<(usize, usize)> {
    let d = k.rows();
    for a in 0..d {
        for b in 0..d {
            let s = par[a].is_odd() && par[b].is_odd();
            let expect = if s { -k[(a, b)].clone() } else { k[(a, b)].clone() };
            if k[(b, a)] != expect {
                return Some((a, b));
            }
        }
    }
    None
}

fn gram_inverse(spec: &AlgebraSpec) -> Result<Matrix> {
    let beta = spec.beta()?;
    beta.inverse()
        .ok_or_else(|| crate::superlinear::singular_radical(&spec.basis, beta))
}

pub fn propagator(spec: &AlgebraSpec, h: &Matrix) -> Result<Propagator> {
    let ginv = gram_inverse(spec)?;
    let p = Propagator {
        matrix: (h * &ginv).scale(&-Q::one()),
    };
    if let Some((a, b)) = p.symmetry_defect(&spec.letter_parities()) {
        return Err(Error::Homotopy(format!(
            "propagator is not graded symmetric at ({}, {})",
            spec.basis.name(a),
            spec.basis.name(b)
        )));
    }
    Ok(p)
}

/// Replacement tensor for a single edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    /// The inverse scalar product itself.
    Id,
    /// `[I, H]` applied to the inverse scalar product.
    Commutator,
    /// `P` applied to the inverse scalar product.
    Projector,
}

/// Where leg letters live.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegSpace {
    /// Letters of B, through the projector image.
    B,
    /// Letters of A, no restriction.
    A,
}

#[derive(Debug, Clone)]
pub struct GraphWeight {
    pub graph: RibbonGraph,
    pub hbar_power: u32,
    pub functional: Functional,
}

/// Everything needed to evaluate graphs over one algebra and homotopy.
#[derive(Debug, Clone)]
pub struct GraphSum {
    vertices: BTreeMap<usize, Vec<(Vec<usize>, Q)>>,
    letter_parities: Vec<Parity>,
    propagator: Propagator,
    ginv: Matrix,
    commutator: Matrix,
    projector: Matrix,
    /// `dim A x dim out`: leg letter `a` becomes `sum_j legs[(a, j)] j`.
    legs: Matrix,
    leg_parities: Vec<Parity>,
    valency: Valency,
}

struct Layout {
    /// Flags in position order.
    flags: Vec<usize>,
    /// Edges as position pairs `p < q`, the replaced edge first.
    edges: Vec<(usize, usize)>,
    /// Positions of legs, grouped into boundary words. Legless boundary
    /// components contribute no word.
    words: Vec<Vec<usize>>,
    /// Vertices as position ranges.
    vertices: Vec<(usize, usize)>,
    perm: Vec<usize>,
}

impl GraphSum {
    pub fn new(spec: &AlgebraSpec, hom: &HomotopyData, leg_space: LegSpace) -> Result<Self> {
        let forms = spec.cyclic_forms()?;
        let valency = match spec.kind {
            AlgebraKind::Associative => {
                if forms.keys().any(|&n| n != 2) {
                    return Err(Error::Input(
                        "associative algebras carry only binary products".into(),
                    ));
                }
                Valency::Trivalent
            }
            AlgebraKind::AInfinity => Valency::Min3,
        };
        let vertices = forms
            .iter()
            .map(|(&n, t)| (n + 1, t.entries().map(|(i, v)| (i.clone(), v.clone())).collect()))
            .collect();
        let ginv = gram_inverse(spec)?;
        let propagator = propagator(spec, &hom.h)?;
        let commutator = &crate::homotopy::anticommutator(&spec.i_op, &hom.h) * &ginv;
        let projector = &hom.p * &ginv;
        let letter_parities = spec.letter_parities();
        let (legs, leg_parities) = match leg_space {
            LegSpace::B => (hom.inclusion.clone(), hom.letter_parities()),
            LegSpace::A => (Matrix::identity(spec.dim()), letter_parities.clone()),
        };
        Ok(GraphSum {
            vertices,
            letter_parities,
            propagator,
            ginv,
            commutator,
            projector,
            legs,
            leg_parities,
            valency,
        })
    }

    pub fn valency(&self) -> Valency {
        self.valency
    }

    pub fn propagator(&self) -> &Propagator {
        &self.propagator
    }

    /// Parities of the letters the weights are written in.
    pub fn leg_parities(&self) -> &[Parity] {
        &self.leg_parities
    }

    fn edge_matrix(&self, kind: EdgeKind) -> &Matrix {
        match kind {
            EdgeKind::Id => &self.ginv,
            EdgeKind::Commutator => &self.commutator,
            EdgeKind::Projector => &self.projector,
        }
    }

    fn layout(&self, g: &RibbonGraph, first_edge: Option<usize>) -> Result<Layout> {
        let verts = g.vertices();
        let flags: Vec<usize> = verts.iter().flatten().map(|&f| f as usize).collect();
        let mut pos = vec![0; flags.len()];
        for (i, &f) in flags.iter().enumerate() {
            pos[f] = i;
        }
        let mut vertices = Vec::new();
        let mut start = 0;
        for v in &verts {
            if !self.vertices.contains_key(&v.len()) {
                return Err(Error::Input(format!(
                    "no product for a vertex of valency {}",
                    v.len()
                )));
            }
            vertices.push((start, v.len()));
            start += v.len();
        }
        let mut edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (p, q) = (pos[a as usize], pos[b as usize]);
                (p.min(q), p.max(q))
            })
            .collect();
        if let Some(e) = first_edge {
            if e >= edges.len() {
                return Err(Error::Argument(format!("graph has no edge {e}")));
            }
            let chosen = edges.remove(e);
            edges.insert(0, chosen);
        }
        let words: Vec<Vec<usize>> = g
            .boundary_cycles()?
            .boundary_cycles
            .iter()
            .filter(|w| !w.is_empty())
            .map(|w| w.iter().map(|&f| pos[f as usize]).collect())
            .collect();
        let mut perm: Vec<usize> = edges.iter().flat_map(|&(p, q)| [p, q]).collect();
        perm.extend(words.iter().flatten());
        Ok(Layout {
            flags,
            edges,
            words,
            vertices,
            perm,
        })
    }

    /// Weight of `g` with the propagator on every edge.
    pub fn w_gamma(&self, g: &RibbonGraph) -> Result<GraphWeight> {
        self.weight(g, None)
    }

    /// Weight of `g` with edge `e` (an index into `g.edges()`) carrying the
    /// tensor of `kind`.
    pub fn edge_variant_w(&self, g: &RibbonGraph, e: usize, kind: EdgeKind) -> Result<GraphWeight> {
        self.weight(g, Some((e, kind)))
    }

    fn weight(&self, g: &RibbonGraph, replaced: Option<(usize, EdgeKind)>) -> Result<GraphWeight> {
        let lay = self.layout(g, replaced.map(|r| r.0))?;
        let mut edge_mats: Vec<&Matrix> = vec![&self.propagator.matrix; lay.edges.len()];
        if let Some((_, kind)) = replaced {
            edge_mats[0] = self.edge_matrix(kind);
        }
        // partner[p] = (other position, edge index) for internal positions.
        let mut partner = vec![None; lay.flags.len()];
        for (k, &(p, q)) in lay.edges.iter().enumerate() {
            partner[p] = Some((q, k));
            partner[q] = Some((p, k));
        }
        let hbar = u32::try_from(1 - g.chi()).map_err(|_| Error::Argument("graph has chi > 1".into()))?;
        let mut ctx = Walk {
            sum: self,
            lay: &lay,
            partner: &partner,
            edge_mats: &edge_mats,
            letters: vec![usize::MAX; lay.flags.len()],
            out: Functional::new(),
            hbar,
        };
        ctx.vertex(0, Q::one())?;
        Ok(GraphWeight {
            graph: g.clone(),
            hbar_power: hbar,
            functional: ctx.out,
        })
    }

    /// The graph sum over connected graphs with `1 <= n <= n_max` legs,
    /// `chi >= chi_min` and legs on every boundary component.
    pub fn sum_s(&self, chi_min: i64, n_max: usize) -> Result<Functional> {
        let classes: Vec<GraphClass> = (1..=n_max)
            .flat_map(|n| enumerate_unlabeled(chi_min, n, self.valency, true))
            .filter(|c| {
                c.graph
                    .vertices()
                    .iter()
                    .all(|v| self.vertices.contains_key(&v.len()))
            })
            .collect();
        self.sum_classes(&classes)
    }

    /// Sum of class weights, each divided by its automorphism count.
    pub fn sum_classes(&self, classes: &[GraphClass]) -> Result<Functional> {
        let parts: Vec<Functional> = classes
            .par_iter()
            .map(|c| {
                let w = self.w_gamma(&c.graph)?;
                Ok(w.functional.scaled(&(Q::one() / q(c.automorphisms as i64))))
            })
            .collect::<Result<_>>()?;
        let mut total = Functional::new();
        for p in &parts {
            total.add_assign(p);
        }
        Ok(total)
    }
}

struct Walk<'a> {
    sum: &'a GraphSum,
    lay: &'a Layout,
    partner: &'a [Option<(usize, usize)>],
    edge_mats: &'a [&'a Matrix],
    letters: Vec<usize>,
    out: Functional,
    hbar: u32,
}

impl Walk<'_> {
    fn vertex(&mut self, v: usize, coeff: Q) -> Result<()> {
        if v == self.lay.vertices.len() {
            return self.finish(coeff);
        }
        let (start, len) = self.lay.vertices[v];
        let entries = &self.sum.vertices[&len];
        'entry: for (idx, val) in entries {
            let mut c = &coeff * val;
            for (k, &a) in idx.iter().enumerate() {
                let p = start + k;
                if let Some((other, e)) = self.partner[p] {
                    let b = if other < start {
                        self.letters[other]
                    } else if other < p {
                        idx[other - start]
                    } else {
                        continue;
                    };
                    let kv = &self.edge_mats[e][(b, a)];
                    if kv.is_zero() {
                        continue 'entry;
                    }
                    c *= kv;
                }
            }
            for (k, &a) in idx.iter().enumerate() {
                self.letters[start + k] = a;
            }
            self.vertex(v + 1, c)?;
        }
        Ok(())
    }

    fn finish(&mut self, coeff: Q) -> Result<()> {
        let par: Vec<Parity> = self
            .letters
            .iter()
            .map(|&a| self.sum.letter_parities[a])
            .collect();
        let coeff = koszul_sign_unchecked(&self.lay.perm, &par).apply(coeff);
        // Expand every leg letter through the leg map.
        let legs: Vec<usize> = self.lay.words.iter().flatten().copied().collect();
        let mut choice = Vec::with_capacity(legs.len());
        self.expand(&legs, 0, coeff, &mut choice)
    }

    fn expand(&mut self, legs: &[usize], k: usize, coeff: Q, choice: &mut Vec<Letter>) -> Result<()> {
        if k == legs.len() {
            let mut it = choice.iter().copied();
            let words: Vec<Vec<Letter>> = self
                .lay
                .words
                .iter()
                .map(|w| {
                    (0..w.len())
                        .map(|_| it.next().expect("one letter per leg"))
                        .collect()
                })
                .collect();
            return self
                .out
                .add_term(self.hbar, &words, coeff, &self.sum.leg_parities);
        }
        let a = self.letters[legs[k]];
        for j in 0..self.sum.legs.cols() {
            let m = &self.sum.legs[(a, j)];
            if m.is_zero() {
                continue;
            }
            choice.push(j as Letter);
            self.expand(legs, k + 1, &coeff * m, choice)?;
            choice.pop();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
