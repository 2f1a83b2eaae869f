//! Ribbon graphs as permutations on flags.
//!
//! A graph is a pair of permutations: `rho` sends a flag to the next flag at
//! its vertex in the cyclic order, `sigma` is the involution pairing flags
//! into edges. Fixed points of `sigma` are legs. Boundary components are the
//! cycles of `rho . sigma`; the legs met along a cycle form its boundary word.

mod enumerate;

pub use enumerate::{enumerate_graphs, enumerate_unlabeled, euler_bounds, EulerBounds, GraphClass, Valency};

use crate::{Error, Result};
use std::collections::VecDeque;
use std::fmt;

pub type Flag = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RibbonGraph {
    rho: Vec<Flag>,
    sigma: Vec<Flag>,
    /// Leg labels 1..=n, or 0 on every flag when legs are unlabeled.
    labels: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryStructure {
    /// Legs met along each boundary component, in traversal order. Legless
    /// components give empty words.
    pub boundary_cycles: Vec<Vec<Flag>>,
    pub i: usize,
    pub g: i64,
    pub chi: i64,
}

impl BoundaryStructure {
    pub fn has_legless_boundary(&self) -> bool {
        self.boundary_cycles.iter().any(Vec::is_empty)
    }
}

/// Canonical representative of an isomorphism class.
#[derive(Debug, Clone)]
pub struct Canonical {
    pub graph: RibbonGraph,
    pub code: Vec<u32>,
    /// Automorphisms preserving rotation, edges and leg labels (if any).
    pub automorphisms: usize,
}

fn cycles_of(perm: &[Flag]) -> Vec<Vec<Flag>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut c = Vec::new();
        let mut f = s;
        while !seen[f] {
            seen[f] = true;
            c.push(f as Flag);
            f = perm[f] as usize;
        }
        out.push(c);
    }
    out
}

fn malformed(m: impl Into<String>) -> Error {
    Error::MalformedGraph(m.into())
}

impl RibbonGraph {
    /// Builds a graph from vertex cycles, edges and optional leg labels
    /// (`(flag, label)` pairs). Flags must be `0..F` without gaps.
    pub fn from_parts(vertices: &[Vec<Flag>], edges: &[(Flag, Flag)], legs: &[(Flag, u32)]) -> Result<Self> {
        let n_flags: usize = vertices.iter().map(Vec::len).sum();
        let mut rho = vec![Flag::MAX; n_flags];
        for v in vertices {
            for (k, &f) in v.iter().enumerate() {
                let f = f as usize;
                if f >= n_flags || rho[f] != Flag::MAX {
                    return Err(malformed(format!("flag {f} repeated or out of range")));
                }
                rho[f] = v[(k + 1) % v.len()];
            }
        }
        let mut sigma: Vec<Flag> = (0..n_flags as Flag).collect();
        for &(a, b) in edges {
            let (ua, ub) = (a as usize, b as usize);
            if ua >= n_flags || ub >= n_flags || a == b || sigma[ua] != a || sigma[ub] != b {
                return Err(malformed(format!("bad edge ({a},{b})")));
            }
            sigma[ua] = b;
            sigma[ub] = a;
        }
        let mut labels = vec![0; n_flags];
        for &(f, l) in legs {
            let uf = f as usize;
            if uf >= n_flags || sigma[uf] != f {
                return Err(malformed(format!("leg label on non-leg flag {f}")));
            }
            labels[uf] = l;
        }
        Self::new(rho, sigma, labels)
    }

    pub fn new(rho: Vec<Flag>, sigma: Vec<Flag>, labels: Vec<u32>) -> Result<Self> {
        let n = rho.len();
        if sigma.len() != n || labels.len() != n || n == 0 {
            return Err(malformed("flag arrays disagree in length"));
        }
        let mut seen = vec![false; n];
        for &f in &rho {
            if f as usize >= n || seen[f as usize] {
                return Err(malformed("rotation is not a permutation"));
            }
            seen[f as usize] = true;
        }
        for f in 0..n {
            let s = sigma[f] as usize;
            if s >= n || sigma[s] as usize != f {
                return Err(malformed(format!("sigma is not an involution at flag {f}")));
            }
        }
        for c in cycles_of(&rho) {
            if c.len() < 3 {
                return Err(malformed(format!("vertex {c:?} has valency below three")));
            }
        }
        let legs: Vec<usize> = (0..n).filter(|&f| sigma[f] as usize == f).collect();
        if labels.iter().any(|&l| l != 0) {
            let mut got: Vec<u32> = legs.iter().map(|&f| labels[f]).collect();
            got.sort_unstable();
            if got != (1..=legs.len() as u32).collect::<Vec<_>>()
                || (0..n).any(|f| sigma[f] as usize != f && labels[f] != 0)
            {
                return Err(malformed("leg labels must be a bijection onto 1..n"));
            }
        }
        let g = RibbonGraph { rho, sigma, labels };
        if g.bfs_order(0).len() != n {
            return Err(malformed("graph is not connected"));
        }
        Ok(g)
    }

    pub fn n_flags(&self) -> usize {
        self.rho.len()
    }

    pub fn rho(&self, f: Flag) -> Flag {
        self.rho[f as usize]
    }

    pub fn sigma(&self, f: Flag) -> Flag {
        self.sigma[f as usize]
    }

    pub fn label(&self, f: Flag) -> u32 {
        self.labels[f as usize]
    }

    pub fn is_labeled(&self) -> bool {
        self.labels.iter().any(|&l| l != 0)
    }

    pub fn is_leg(&self, f: Flag) -> bool {
        self.sigma[f as usize] == f
    }

    /// Vertex cycles, each starting at its smallest flag.
    pub fn vertices(&self) -> Vec<Vec<Flag>> {
        cycles_of(&self.rho)
    }

    pub fn edges(&self) -> Vec<(Flag, Flag)> {
        (0..self.n_flags() as Flag)
            .filter(|&f| self.sigma(f) > f)
            .map(|f| (f, self.sigma(f)))
            .collect()
    }

    pub fn legs(&self) -> Vec<Flag> {
        (0..self.n_flags() as Flag).filter(|&f| self.is_leg(f)).collect()
    }

    /// Legs ordered by label (flag order when unlabeled).
    pub fn legs_by_label(&self) -> Vec<Flag> {
        let mut legs = self.legs();
        legs.sort_by_key(|&f| (self.label(f), f));
        legs
    }

    pub fn n_legs(&self) -> usize {
        self.legs().len()
    }

    pub fn chi(&self) -> i64 {
        self.vertices().len() as i64 - self.edges().len() as i64
    }

    pub fn boundary_cycles(&self) -> Result<BoundaryStructure> {
        let phi: Vec<Flag> = (0..self.n_flags())
            .map(|f| self.rho[self.sigma[f] as usize])
            .collect();
        let faces = cycles_of(&phi);
        let boundary_cycles: Vec<Vec<Flag>> = faces
            .iter()
            .map(|c| c.iter().copied().filter(|&f| self.is_leg(f)).collect())
            .collect();
        let i = faces.len();
        let chi = self.chi();
        let twice_g = 2 - i as i64 - chi;
        if twice_g < 0 || twice_g % 2 != 0 {
            return Err(malformed(format!("face count {i} and chi {chi} give no genus")));
        }
        Ok(BoundaryStructure {
            boundary_cycles,
            i,
            g: twice_g / 2,
            chi,
        })
    }

    fn bfs_order(&self, start: usize) -> Vec<usize> {
        let n = self.n_flags();
        let mut idx = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::new();
        idx[start] = 0;
        order.push(start);
        queue.push_back(start);
        while let Some(f) = queue.pop_front() {
            for g in [self.rho[f] as usize, self.sigma[f] as usize] {
                if idx[g] == usize::MAX {
                    idx[g] = order.len();
                    order.push(g);
                    queue.push_back(g);
                }
            }
        }
        order
    }

    /// Relabeling of flags by traversal from `start` and the resulting code.
    fn code_from(&self, start: usize, with_labels: bool) -> (Vec<usize>, Vec<u32>) {
        let order = self.bfs_order(start);
        let mut idx = vec![0usize; self.n_flags()];
        for (k, &f) in order.iter().enumerate() {
            idx[f] = k;
        }
        let mut code = Vec::with_capacity(3 * order.len());
        for &f in &order {
            code.push(idx[self.rho[f] as usize] as u32);
            code.push(idx[self.sigma[f] as usize] as u32);
            code.push(if with_labels { self.labels[f] } else { 0 });
        }
        (idx, code)
    }

    fn relabeled(&self, idx: &[usize], with_labels: bool) -> RibbonGraph {
        let n = self.n_flags();
        let mut rho = vec![0; n];
        let mut sigma = vec![0; n];
        let mut labels = vec![0; n];
        for f in 0..n {
            rho[idx[f]] = idx[self.rho[f] as usize] as Flag;
            sigma[idx[f]] = idx[self.sigma[f] as usize] as Flag;
            if with_labels {
                labels[idx[f]] = self.labels[f];
            }
        }
        RibbonGraph { rho, sigma, labels }
    }

    /// Canonical form. Leg labels are respected when present; pass
    /// `forget_labels` to canonicalize the underlying unlabeled graph.
    pub fn canonicalize_with(&self, forget_labels: bool) -> Canonical {
        let with_labels = !forget_labels && self.is_labeled();
        // Automorphisms act freely on flags, so starts can be restricted to
        // any invariant class: the leg labeled 1, all legs, or all flags.
        let starts: Vec<usize> = if with_labels {
            (0..self.n_flags()).filter(|&f| self.labels[f] == 1).collect()
        } else {
            let legs: Vec<usize> = self.legs().into_iter().map(|f| f as usize).collect();
            if legs.is_empty() {
                (0..self.n_flags()).collect()
            } else {
                legs
            }
        };
        let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
        let mut count = 0;
        for s in starts {
            let (idx, code) = self.code_from(s, with_labels);
            match &best {
                Some((b, _)) if code > *b => {}
                Some((b, _)) if code == *b => count += 1,
                _ => {
                    best = Some((code, idx));
                    count = 1;
                }
            }
        }
        let (code, idx) = best.expect("graph has flags");
        Canonical {
            graph: self.relabeled(&idx, with_labels),
            code,
            automorphisms: count,
        }
    }

    pub fn canonicalize(&self) -> Canonical {
        self.canonicalize_with(false)
    }

    /// Turns legs `a` and `b` into an edge; labels are dropped.
    pub fn glue(&self, a: Flag, b: Flag) -> RibbonGraph {
        let mut sigma = self.sigma.clone();
        sigma[a as usize] = b;
        sigma[b as usize] = a;
        RibbonGraph {
            rho: self.rho.clone(),
            sigma,
            labels: vec![0; self.n_flags()],
        }
    }

    /// Disjoint union with `other`, then an edge between leg `a` of `self`
    /// and leg `b` of `other`; labels are dropped.
    pub fn join(&self, a: Flag, other: &RibbonGraph, b: Flag) -> RibbonGraph {
        let off = self.n_flags() as Flag;
        let mut rho = self.rho.clone();
        rho.extend(other.rho.iter().map(|&f| f + off));
        let mut sigma = self.sigma.clone();
        sigma.extend(other.sigma.iter().map(|&f| f + off));
        sigma[a as usize] = b + off;
        sigma[(b + off) as usize] = a;
        let labels = vec![0; rho.len()];
        RibbonGraph { rho, sigma, labels }
    }

    /// Merges the two endpoints of the edge through `f` into one vertex,
    /// keeping the cyclic order around the merged vertex. `None` for loops.
    pub fn contract_edge(&self, f: Flag) -> Option<RibbonGraph> {
        let g = self.sigma(f);
        if g == f || self.vertices().iter().any(|v| v.contains(&f) && v.contains(&g)) {
            return None;
        }
        let keep: Vec<usize> = (0..self.n_flags())
            .filter(|&x| x != f as usize && x != g as usize)
            .collect();
        let mut new_id = vec![usize::MAX; self.n_flags()];
        for (i, &x) in keep.iter().enumerate() {
            new_id[x] = i;
        }
        let (rf, rg) = (self.rho(f), self.rho(g));
        let mut rho = Vec::with_capacity(keep.len());
        let mut sigma = Vec::with_capacity(keep.len());
        let mut labels = Vec::with_capacity(keep.len());
        for &x in &keep {
            let next = match self.rho[x] {
                y if y == f => rg,
                y if y == g => rf,
                y => y,
            };
            rho.push(new_id[next as usize] as Flag);
            sigma.push(new_id[self.sigma[x] as usize] as Flag);
            labels.push(self.labels[x]);
        }
        Some(RibbonGraph { rho, sigma, labels })
    }

    /// Single vertex with `k` legs.
    pub fn corolla(k: usize) -> RibbonGraph {
        let rho = (0..k as Flag).map(|f| (f + 1) % k as Flag).collect();
        RibbonGraph {
            rho,
            sigma: (0..k as Flag).collect(),
            labels: vec![0; k],
        }
    }

    /// Assigns label `perm[i]` to the i-th leg in flag order.
    pub fn with_leg_labels(&self, perm: &[u32]) -> RibbonGraph {
        let mut labels = vec![0; self.n_flags()];
        for (k, f) in self.legs().into_iter().enumerate() {
            labels[f as usize] = perm[k];
        }
        RibbonGraph {
            rho: self.rho.clone(),
            sigma: self.sigma.clone(),
            labels,
        }
    }

    pub fn encode(&self) -> String {
        let vs: Vec<String> = self
            .vertices()
            .iter()
            .map(|v| format!("({})", v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        let es: Vec<String> = self.edges().iter().map(|(a, b)| format!("({a},{b})")).collect();
        let ls: Vec<String> = self
            .legs_by_label()
            .iter()
            .map(|&f| format!("{f}→{}", self.label(f)))
            .collect();
        format!("V:[{}] E:[{}] L:[{}]", vs.join(","), es.join(","), ls.join(","))
    }

    pub fn decode(s: &str) -> Result<RibbonGraph> {
        let bad = |m: &str| malformed(format!("{m} in '{s}'"));
        let section = |key: &str| -> Result<&str> {
            let start = s.find(key).ok_or_else(|| bad(&format!("missing {key}")))? + key.len();
            let rest = &s[start..];
            let rest = rest.strip_prefix('[').ok_or_else(|| bad("expected '['"))?;
            let end = rest.find(']').ok_or_else(|| bad("expected ']'"))?;
            Ok(&rest[..end])
        };
        let tuples = |body: &str| -> Result<Vec<Vec<Flag>>> {
            let mut out = Vec::new();
            for part in body.split(')').map(str::trim).filter(|p| !p.is_empty()) {
                let part = part.trim_start_matches(',').trim();
                let inner = part.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
                let v = inner
                    .split(',')
                    .map(|x| x.trim().parse::<Flag>().map_err(|_| bad("bad flag")))
                    .collect::<Result<Vec<_>>>()?;
                out.push(v);
            }
            Ok(out)
        };
        let vertices = tuples(section("V:")?)?;
        let edges = tuples(section("E:")?)?
            .into_iter()
            .map(|e| match e[..] {
                [a, b] => Ok((a, b)),
                _ => Err(bad("edges join two flags")),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut legs = Vec::new();
        for item in section("L:")?.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (f, l) = item
                .split_once('→')
                .or_else(|| item.split_once("->"))
                .ok_or_else(|| bad("expected flag→label"))?;
            let f = f.trim().parse().map_err(|_| bad("bad leg flag"))?;
            let l = l.trim().parse().map_err(|_| bad("bad leg label"))?;
            legs.push((f, l));
        }
        RibbonGraph::from_parts(&vertices, &edges, &legs)
    }
}

impl fmt::Display for RibbonGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

#[cfg(test)]
mod tests;
