//! The three edge identities behind the master equation, checked graph by
//! graph: telescoping `W^P = W^Id - W^[I,H]`, the derivation of a weight as
//! the sum of its `[I, H]` edge variants, and cancellation of `W^Id` over
//! classes of edges contracting to the same graph.

use super::{EdgeKind, GraphSum, LegSpace};
use crate::algebra::AlgebraSpec;
use crate::bvcalc::Functional;
use crate::homotopy::HomotopyData;
use crate::ribbon::{enumerate_unlabeled, euler_bounds, GraphClass, Valency};
use crate::superlinear::{q, Q};
use crate::Result;
use num_traits::One;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Default)]
pub struct PillarReport {
    pub graphs: usize,
    pub edges: usize,
    pub flip_classes: usize,
    /// Edge variants with the inverse scalar product that are not zero.
    pub nonzero_id_variants: usize,
    /// Descriptions of every failed identity.
    pub failures: Vec<String>,
}

impl PillarReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// All `(chi, n)` with at least one leg whose graphs have at most
/// `max_flags` flags.
pub fn small_windows(max_flags: usize, valency: Valency) -> Vec<(i64, usize)> {
    let mut out = Vec::new();
    for chi in (-(max_flags as i64)..=1).rev() {
        for n in 1..=max_flags {
            if let Some(b) = euler_bounds(chi, n, valency) {
                if 2 * b.edges.start() + n <= max_flags {
                    out.push((chi, n));
                }
            }
        }
    }
    out
}

/// Checks the three identities on every class with at most `max_flags`
/// flags, legs kept in A.
pub fn check_pillars(spec: &AlgebraSpec, hom: &HomotopyData, max_flags: usize) -> Result<PillarReport> {
    let gs = GraphSum::new(spec, hom, LegSpace::A)?;
    let ctx = spec.bv_context()?;
    let mut report = PillarReport::default();
    for (chi, n) in small_windows(max_flags, gs.valency()) {
        let classes: Vec<GraphClass> = enumerate_unlabeled(chi, n, gs.valency(), false)
            .into_iter()
            .filter(|c| c.chi == chi && c.graph.n_flags() <= max_flags)
            .collect();
        let mut flips: BTreeMap<Vec<u32>, Functional> = BTreeMap::new();
        for c in &classes {
            report.graphs += 1;
            let g = &c.graph;
            let w = gs.w_gamma(g)?.functional;
            let mut leibniz = Functional::new();
            for (e, &(f, _)) in g.edges().iter().enumerate() {
                report.edges += 1;
                let id = gs.edge_variant_w(g, e, EdgeKind::Id)?.functional;
                if !id.is_zero() {
                    report.nonzero_id_variants += 1;
                }
                let comm = gs.edge_variant_w(g, e, EdgeKind::Commutator)?.functional;
                let proj = gs.edge_variant_w(g, e, EdgeKind::Projector)?.functional;
                if proj != id.sub(&comm) {
                    report
                        .failures
                        .push(format!("telescoping fails on {g} at edge {e}"));
                }
                leibniz.add_assign(&comm);
                let key = match g.contract_edge(f) {
                    Some(q_) => q_.canonicalize_with(true).code,
                    // Loops stay in their own class.
                    None => {
                        let mut k = vec![u32::MAX];
                        k.extend(c.code.iter());
                        k.push(e as u32);
                        k
                    }
                };
                let weight = Q::one() / q(c.automorphisms as i64);
                flips.entry(key).or_default().add_assign(&id.scaled(&weight));
            }
            if ctx.i_dual(&w)? != leibniz {
                report
                    .failures
                    .push(format!("derivation is not the sum of edge variants on {g}"));
            }
        }
        report.flip_classes += flips.len();
        for (key, total) in flips {
            if !total.is_zero() {
                report.failures.push(format!(
                    "flip class at chi {chi}, {n} legs (key {key:?}) sums to {} terms",
                    total.len()
                ));
            }
        }
    }
    Ok(report)
}
