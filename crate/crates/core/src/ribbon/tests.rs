use super::*;
use itertools::Itertools;
use std::collections::BTreeSet;

fn tripod() -> RibbonGraph {
    RibbonGraph::from_parts(&[vec![0, 1, 2]], &[], &[(0, 1), (1, 2), (2, 3)]).unwrap()
}

fn lollipop() -> RibbonGraph {
    RibbonGraph::from_parts(&[vec![0, 1, 2]], &[(1, 2)], &[(0, 1)]).unwrap()
}

fn theta() -> RibbonGraph {
    RibbonGraph::from_parts(&[vec![0, 1, 2], vec![3, 4, 5]], &[(0, 3), (1, 5), (2, 4)], &[]).unwrap()
}

#[test]
fn tripod_is_a_disk() {
    let b = tripod().boundary_cycles().unwrap();
    assert_eq!((b.i, b.chi, b.g), (1, 1, 0));
    assert_eq!(b.boundary_cycles, vec![vec![0, 1, 2]]);
}

#[test]
fn lollipop_is_an_annulus_with_a_legless_boundary() {
    let b = lollipop().boundary_cycles().unwrap();
    assert_eq!((b.i, b.chi, b.g), (2, 0, 0));
    assert!(b.has_legless_boundary());
}

#[test]
fn theta_has_three_boundaries() {
    let b = theta().boundary_cycles().unwrap();
    assert_eq!((b.i, b.chi, b.g), (3, -1, 0));
}

#[test]
fn euler_bound_examples() {
    let b = euler_bounds(1, 3, Valency::Trivalent).unwrap();
    assert_eq!((b.edges, b.vertices), (0..=0, 1..=1));
    let b = euler_bounds(0, 3, Valency::Trivalent).unwrap();
    assert_eq!((b.edges, b.vertices), (3..=3, 3..=3));
    assert!(euler_bounds(1, 2, Valency::Trivalent).is_none());
    let b = euler_bounds(0, 2, Valency::Min3).unwrap();
    assert_eq!((b.edges, b.vertices), (1..=2, 1..=2));
}

#[test]
fn malformed_graphs_are_rejected() {
    assert!(RibbonGraph::from_parts(&[vec![0, 1]], &[], &[]).is_err());
    assert!(RibbonGraph::from_parts(&[vec![0, 1, 2], vec![3, 4, 5]], &[], &[]).is_err());
    assert!(RibbonGraph::from_parts(&[vec![0, 1, 2]], &[(0, 1)], &[(0, 1)]).is_err());
    assert!(RibbonGraph::from_parts(&[vec![0, 1, 2]], &[], &[(0, 1), (1, 1), (2, 3)]).is_err());
}

#[test]
fn relabelings_of_the_tripod_agree() {
    let other = RibbonGraph::from_parts(&[vec![2, 0, 1]], &[], &[(2, 1), (0, 2), (1, 3)]).unwrap();
    let (a, b) = (tripod().canonicalize(), other.canonicalize());
    assert_eq!(a.code, b.code);
    assert_eq!(a.graph, b.graph);
    assert_eq!(a.automorphisms, 1);
    // Reversing the cyclic order is a different labeled class.
    let mirror = RibbonGraph::from_parts(&[vec![0, 2, 1]], &[], &[(0, 1), (1, 2), (2, 3)]).unwrap();
    assert_ne!(mirror.canonicalize().code, a.code);
    assert_eq!(tripod().canonicalize_with(true).automorphisms, 3);
}

#[test]
fn lollipop_automorphisms() {
    assert_eq!(lollipop().canonicalize().automorphisms, 1);
    assert_eq!(brute_stabilizer(&lollipop()), 1);
}

#[test]
fn encoding_round_trips() {
    for g in [tripod(), lollipop(), theta()] {
        let s = g.encode();
        assert_eq!(RibbonGraph::decode(&s).unwrap(), g);
        assert_eq!(RibbonGraph::decode(&s.replace('→', "->")).unwrap(), g);
    }
    assert_eq!(tripod().encode(), "V:[(0,1,2)] E:[] L:[0→1,1→2,2→3]");
    assert!(RibbonGraph::decode("V:[(0,1,2)] E:[(0,1)").is_err());
}

#[test]
fn enumeration_examples() {
    assert_eq!(enumerate_unlabeled(1, 3, Valency::Trivalent, true).len(), 1);
    // Labeled tripods: the two cyclic orders of the labels.
    assert_eq!(enumerate_graphs(1, 3, Valency::Trivalent, true).len(), 2);
    assert!(enumerate_graphs(1, 2, Valency::Trivalent, true).is_empty());
    // Lollipops: the annulus has a legless boundary.
    let lolli = enumerate_graphs(0, 1, Valency::Trivalent, false);
    assert_eq!(lolli.len(), oracle(1, 0, Valency::Trivalent, false).len());
    assert_eq!(lolli.len(), 1);
    assert!(enumerate_graphs(0, 1, Valency::Trivalent, true).is_empty());
}

#[test]
fn enumeration_is_canonical_and_duplicate_free() {
    for (chi, n) in [(0, 3), (-1, 3), (0, 4)] {
        let gs = enumerate_graphs(chi, n, Valency::Trivalent, true);
        let mut codes = BTreeSet::new();
        for g in &gs {
            let c = g.canonicalize();
            assert_eq!(&c.graph, g);
            assert!(codes.insert(c.code));
            let b = g.boundary_cycles().unwrap();
            assert_eq!(b.chi, 2 - 2 * b.g - b.i as i64);
            assert!(!b.has_legless_boundary());
            assert_eq!(g.n_legs(), n);
        }
    }
}

#[test]
fn labeled_counts_match_automorphism_orbits() {
    for (chi, n) in [(1, 6), (0, 4), (-1, 2)] {
        let classes = enumerate_unlabeled(chi, n, Valency::Trivalent, true);
        let total: u128 = classes.iter().map(GraphClass::labeled_count).sum();
        assert_eq!(
            total,
            enumerate_graphs(chi, n, Valency::Trivalent, true).len() as u128
        );
    }
    // Legless classes: planar and toroidal theta, and the dumbbell. Each is
    // its own labeled class.
    let legless = enumerate_unlabeled(-1, 0, Valency::Trivalent, false);
    assert_eq!(legless.len(), 3);
    assert!(legless
        .iter()
        .all(|c| c.labeled_count() == 1 && c.automorphisms > 1));
    assert_eq!(enumerate_graphs(-1, 0, Valency::Trivalent, false).len(), 3);
}

// Independent oracle: fixed rotation on consecutive flag blocks, every
// involution and labeling, isomorphism classes as orbit minima under
// valency-preserving vertex permutations combined with rotations.

fn blocks_rho(vals: &[usize]) -> Vec<Flag> {
    let mut rho = Vec::new();
    let mut start = 0;
    for &k in vals {
        for i in 0..k {
            rho.push((start + (i + 1) % k) as Flag);
        }
        start += k;
    }
    rho
}

fn symmetries(vals: &[usize]) -> Vec<Vec<usize>> {
    let starts: Vec<usize> = vals
        .iter()
        .scan(0, |s, &k| {
            let a = *s;
            *s += k;
            Some(a)
        })
        .collect();
    let nv = vals.len();
    let mut out = Vec::new();
    for perm in (0..nv).permutations(nv) {
        if (0..nv).any(|v| vals[perm[v]] != vals[v]) {
            continue;
        }
        for shifts in vals.iter().map(|&k| 0..k).multi_cartesian_product() {
            let mut map = vec![0; vals.iter().sum()];
            for v in 0..nv {
                for i in 0..vals[v] {
                    map[starts[v] + i] = starts[perm[v]] + (i + shifts[v]) % vals[v];
                }
            }
            out.push(map);
        }
        if nv == 0 {
            break;
        }
    }
    out
}

fn involutions(n: usize, fixed: usize) -> Vec<Vec<Flag>> {
    fn rec(s: &mut Vec<Option<Flag>>, fixed_left: usize, out: &mut Vec<Vec<Flag>>) {
        let Some(f) = s.iter().position(Option::is_none) else {
            if fixed_left == 0 {
                out.push(s.iter().map(|x| x.unwrap()).collect());
            }
            return;
        };
        if fixed_left > 0 {
            s[f] = Some(f as Flag);
            rec(s, fixed_left - 1, out);
            s[f] = None;
        }
        for g in f + 1..s.len() {
            if s[g].is_none() {
                s[f] = Some(g as Flag);
                s[g] = Some(f as Flag);
                rec(s, fixed_left, out);
                s[f] = None;
                s[g] = None;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut vec![None; n], fixed, &mut out);
    out
}

fn connected(rho: &[Flag], sigma: &[Flag]) -> bool {
    let n = rho.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(f) = stack.pop() {
        for g in [rho[f] as usize, sigma[f] as usize] {
            if !seen[g] {
                seen[g] = true;
                stack.push(g);
            }
        }
    }
    seen.into_iter().all(|x| x)
}

fn has_legless_face(rho: &[Flag], sigma: &[Flag]) -> bool {
    let n = rho.len();
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut f = s;
        let mut legs = 0;
        while !seen[f] {
            seen[f] = true;
            if sigma[f] as usize == f {
                legs += 1;
            }
            f = rho[sigma[f] as usize] as usize;
        }
        if legs == 0 {
            return true;
        }
    }
    false
}

fn orbit_min(sigma: &[Flag], labels: &[u32], syms: &[Vec<usize>]) -> (Vec<Flag>, Vec<u32>) {
    syms.iter()
        .map(|m| {
            let mut s = vec![0; sigma.len()];
            let mut l = vec![0; sigma.len()];
            for f in 0..sigma.len() {
                s[m[f]] = m[sigma[f] as usize] as Flag;
                l[m[f]] = labels[f];
            }
            (s, l)
        })
        .min()
        .unwrap()
}

fn profiles(total: usize, valency: Valency) -> Vec<Vec<usize>> {
    fn rec(left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (3..=max.min(left)).rev() {
            cur.push(k);
            rec(left - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, total, &mut Vec::new(), &mut out);
    match valency {
        Valency::Trivalent => out.into_iter().filter(|p| p.iter().all(|&k| k == 3)).collect(),
        Valency::Min3 => out,
    }
}

/// Labeled classes with exactly `n` legs and Euler characteristic `chi`.
fn oracle(
    n: usize,
    chi: i64,
    valency: Valency,
    require_legs: bool,
) -> BTreeSet<(Vec<Flag>, Vec<u32>, Vec<usize>)> {
    let mut classes = BTreeSet::new();
    for total in 3..=10 {
        for vals in profiles(total, valency) {
            if n > total
                || !(total - n).is_multiple_of(2)
                || vals.len() as i64 - ((total - n) / 2) as i64 != chi
            {
                continue;
            }
            let rho = blocks_rho(&vals);
            let syms = symmetries(&vals);
            for sigma in involutions(total, n) {
                if !connected(&rho, &sigma) || (require_legs && has_legless_face(&rho, &sigma)) {
                    continue;
                }
                let legs: Vec<usize> = (0..total).filter(|&f| sigma[f] as usize == f).collect();
                for perm in (1..=n as u32).permutations(n) {
                    let mut labels = vec![0; total];
                    for (k, &f) in legs.iter().enumerate() {
                        labels[f] = perm[k];
                    }
                    let (s, l) = orbit_min(&sigma, &labels, &syms);
                    classes.insert((s, l, vals.clone()));
                }
            }
        }
    }
    classes
}

fn brute_stabilizer(g: &RibbonGraph) -> usize {
    // Reorder flags into consecutive vertex blocks, then count symmetries
    // fixing sigma and labels.
    let verts = g.vertices();
    let order: Vec<Flag> = verts.iter().flatten().copied().collect();
    let mut pos = vec![0usize; order.len()];
    for (i, &f) in order.iter().enumerate() {
        pos[f as usize] = i;
    }
    let vals: Vec<usize> = verts.iter().map(Vec::len).collect();
    let sigma: Vec<Flag> = order.iter().map(|&f| pos[g.sigma(f) as usize] as Flag).collect();
    let labels: Vec<u32> = order.iter().map(|&f| g.label(f)).collect();
    symmetries(&vals)
        .iter()
        .filter(|m| {
            (0..sigma.len()).all(|f| sigma[m[f]] == m[sigma[f] as usize] as Flag && labels[m[f]] == labels[f])
        })
        .count()
}

#[test]
fn trivalent_enumeration_matches_brute_force() {
    for (chi, n) in [(1, 3), (0, 1), (1, 4), (0, 2), (1, 5), (0, 3), (-1, 1)] {
        for require in [false, true] {
            let ours = enumerate_graphs(chi, n, Valency::Trivalent, require)
                .into_iter()
                .filter(|g| g.chi() == chi)
                .count();
            assert_eq!(
                ours,
                oracle(n, chi, Valency::Trivalent, require).len(),
                "chi={chi} n={n} require={require}"
            );
        }
    }
}

#[test]
fn min3_enumeration_matches_brute_force() {
    for (chi, n) in [
        (1, 3),
        (1, 4),
        (0, 1),
        (0, 2),
        (1, 5),
        (0, 3),
        (-1, 1),
        (0, 4),
        (-1, 2),
    ] {
        for require in [false, true] {
            let ours = enumerate_graphs(chi, n, Valency::Min3, require)
                .into_iter()
                .filter(|g| g.chi() == chi && g.n_flags() <= 10)
                .count();
            assert_eq!(
                ours,
                oracle(n, chi, Valency::Min3, require).len(),
                "chi={chi} n={n} require={require}"
            );
        }
    }
}

#[test]
fn automorphism_counts_match_brute_force() {
    for (chi, n) in [(0, 1), (0, 2), (0, 3), (-1, 1), (1, 4)] {
        for c in enumerate_unlabeled(chi, n, Valency::Trivalent, false) {
            assert_eq!(c.automorphisms, brute_stabilizer(&c.graph), "{}", c.graph);
        }
    }
}

#[test]
fn contracting_an_edge_merges_its_vertices() {
    let g = RibbonGraph::from_parts(&[vec![0, 1, 2], vec![3, 4, 5]], &[(2, 3)], &[]).unwrap();
    let c = g.contract_edge(2).unwrap();
    assert_eq!(c.vertices(), vec![vec![0, 1, 2, 3]]);
    assert_eq!(c.n_legs(), 4);
    assert_eq!(
        c.boundary_cycles().unwrap().boundary_cycles,
        vec![vec![0, 1, 2, 3]]
    );
    assert!(lollipop().contract_edge(1).is_none());
    assert!(tripod().contract_edge(0).is_none());
}
