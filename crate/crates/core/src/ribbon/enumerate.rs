//! Enumeration of isomorphism classes of connected ribbon graphs.
//!
//! Trees are grown from corollas by attaching a corolla to a leg. A graph
//! with chi <= 0 has an edge that is not a bridge; cutting it yields a
//! connected graph with chi + 1 and two more legs. So every class at chi is
//! obtained by gluing two legs of a class at chi + 1. Cutting an edge never
//! creates a legless boundary, which makes pruning legless graphs safe at
//! every level.

use super::RibbonGraph;
use itertools::Itertools;
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};
use std::ops::RangeInclusive;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valency {
    /// Every vertex has exactly three flags.
    Trivalent,
    /// Every vertex has at least three flags.
    Min3,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerBounds {
    pub edges: RangeInclusive<usize>,
    pub vertices: RangeInclusive<usize>,
}

/// Edge and vertex counts allowed for `n` legs and Euler characteristic
/// `chi`: exact for trivalent graphs, upper bounds otherwise. `None` when no
/// graph exists.
pub fn euler_bounds(chi: i64, n: usize, valency: Valency) -> Option<EulerBounds> {
    let n = n as i64;
    // Sum over vertices of (valency - 2) equals n - 2 chi.
    let excess = n - 2 * chi;
    match valency {
        Valency::Trivalent => {
            let (v, e) = (excess, n - 3 * chi);
            (v >= 1 && e >= 0).then_some(EulerBounds {
                edges: e as usize..=e as usize,
                vertices: v as usize..=v as usize,
            })
        }
        Valency::Min3 => {
            let e_min = (1 - chi).max(0);
            let v_max = excess;
            let e_max = v_max - chi;
            (v_max >= 1 && e_max >= e_min).then(|| EulerBounds {
                edges: e_min as usize..=e_max as usize,
                vertices: ((e_min + chi).max(1)) as usize..=v_max as usize,
            })
        }
    }
}

/// One unlabeled isomorphism class.
#[derive(Debug, Clone)]
pub struct GraphClass {
    pub graph: RibbonGraph,
    pub code: Vec<u32>,
    pub chi: i64,
    pub automorphisms: usize,
}

impl GraphClass {
    fn of(g: &RibbonGraph) -> GraphClass {
        let c = g.canonicalize_with(true);
        GraphClass {
            chi: c.graph.chi(),
            graph: c.graph,
            code: c.code,
            automorphisms: c.automorphisms,
        }
    }

    /// Number of leg-labeled classes over this unlabeled class. Automorphisms
    /// act freely on labelings when there are legs; a legless class is its
    /// own labeled class.
    pub fn labeled_count(&self) -> u128 {
        let n = self.graph.n_legs() as u128;
        if n == 0 {
            return 1;
        }
        (1..=n).product::<u128>() / self.automorphisms as u128
    }
}

fn keeps(g: &RibbonGraph, require_legs: bool) -> bool {
    !require_legs
        || !g
            .boundary_cycles()
            .map(|b| b.has_legless_boundary())
            .unwrap_or(true)
}

type Key = (i64, usize);

struct Enumerator {
    valency: Valency,
    require_legs: bool,
    cache: HashMap<Key, Vec<GraphClass>>,
}

fn dedupe(graphs: impl IntoIterator<Item = GraphClass>) -> Vec<GraphClass> {
    let mut by_code: BTreeMap<Vec<u32>, GraphClass> = BTreeMap::new();
    for c in graphs {
        by_code.entry(c.code.clone()).or_insert(c);
    }
    by_code.into_values().collect()
}

impl Enumerator {
    fn corolla_allowed(&self, k: usize) -> bool {
        match self.valency {
            Valency::Trivalent => k == 3,
            Valency::Min3 => k >= 3,
        }
    }

    fn classes(&mut self, chi: i64, n: usize) -> Vec<GraphClass> {
        if let Some(v) = self.cache.get(&(chi, n)) {
            return v.clone();
        }
        let out = if chi > 1 || euler_bounds(chi, n, self.valency).is_none() {
            Vec::new()
        } else if chi == 1 {
            self.trees(n)
        } else {
            self.glued(chi, n)
        };
        self.cache.insert((chi, n), out.clone());
        out
    }

    fn trees(&mut self, n: usize) -> Vec<GraphClass> {
        let mut found = Vec::new();
        if self.corolla_allowed(n) {
            found.push(GraphClass::of(&RibbonGraph::corolla(n)));
        }
        // Remove a leaf vertex of valency k: the rest has n - k + 2 legs.
        for k in 3..n {
            if !self.corolla_allowed(k) {
                continue;
            }
            let leaf = RibbonGraph::corolla(k);
            let smaller = self.classes(1, n + 2 - k);
            let grown: Vec<GraphClass> = smaller
                .par_iter()
                .flat_map_iter(|c| {
                    let leaf = &leaf;
                    c.graph
                        .legs()
                        .into_iter()
                        .map(move |a| GraphClass::of(&c.graph.join(a, leaf, 0)))
                })
                .collect();
            found.extend(grown);
        }
        dedupe(found)
    }

    fn glued(&mut self, chi: i64, n: usize) -> Vec<GraphClass> {
        let parents = self.classes(chi + 1, n + 2);
        let require_legs = self.require_legs;
        let glued: Vec<GraphClass> = parents
            .par_iter()
            .flat_map_iter(|c| {
                let legs = c.graph.legs();
                legs.into_iter()
                    .tuple_combinations()
                    .map(|(a, b)| c.graph.glue(a, b))
                    .filter(|g| keeps(g, require_legs))
                    .map(|g| GraphClass::of(&g))
                    .collect::<Vec<_>>()
            })
            .collect();
        dedupe(glued)
    }
}

/// Unlabeled classes with exactly `n` legs and `chi >= chi_min`, sorted by
/// decreasing chi and then by canonical code. Each class carries the order
/// of its automorphism group.
pub fn enumerate_unlabeled(chi_min: i64, n: usize, valency: Valency, require_legs: bool) -> Vec<GraphClass> {
    let mut e = Enumerator {
        valency,
        require_legs,
        cache: HashMap::new(),
    };
    let mut out = Vec::new();
    let mut chi = 1;
    while chi >= chi_min {
        out.extend(
            e.classes(chi, n)
                .into_iter()
                .filter(|c| keeps(&c.graph, require_legs)),
        );
        chi -= 1;
    }
    out
}

/// Leg-labeled classes (isomorphisms fix labels) with exactly `n` legs and
/// `chi >= chi_min`, as canonical graphs sorted by decreasing chi and then
/// by canonical code.
pub fn enumerate_graphs(chi_min: i64, n: usize, valency: Valency, require_legs: bool) -> Vec<RibbonGraph> {
    let classes = enumerate_unlabeled(chi_min, n, valency, require_legs);
    let perms: Vec<Vec<u32>> = (1..=n as u32).permutations(n).collect();
    let mut out = Vec::new();
    for c in classes {
        let labeled: BTreeMap<Vec<u32>, RibbonGraph> = perms
            .par_iter()
            .map(|p| {
                let can = c.graph.with_leg_labels(p).canonicalize();
                (can.code, can.graph)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        debug_assert_eq!(labeled.len() as u128, c.labeled_count());
        out.push((-c.chi, labeled));
    }
    // Classes are already ordered by chi; order labeled graphs within a chi.
    let mut grouped: BTreeMap<i64, BTreeMap<Vec<u32>, RibbonGraph>> = BTreeMap::new();
    for (k, m) in out {
        grouped.entry(k).or_default().extend(m);
    }
    grouped.into_values().flat_map(BTreeMap::into_values).collect()
}
