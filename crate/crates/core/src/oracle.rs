//! Brute-force reference computations and the full invariant sweep.
//!
//! Everything here recomputes from raw edge lists and never calls into the
//! engine's incremental bookkeeping, so agreement with the engine is
//! evidence rather than tautology.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::graph::{pair_key, signed_balances, EdgeId, Orientation, VertexId};
use crate::partition::Home;

/// Largest edge count `exhaustive_min_disc` accepts.
pub const EXHAUSTIVE_MAX_EDGES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => write!(f, "inf"),
        }
    }
}

/// Exact girth of a multigraph: 2 if any pair is joined twice, otherwise the
/// minimum over BFS roots of the shortest non-tree-edge closure.
pub fn brute_girth(n: usize, edges: &[(VertexId, VertexId)]) -> Girth {
    let mut keys: Vec<_> = edges.iter().map(|&(a, b)| pair_key(a, b)).collect();
    keys.sort_unstable();
    if keys.windows(2).any(|w| w[0] == w[1]) {
        return Girth::Finite(2);
    }
    let adj = adjacency(n, edges);
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent_edge = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        parent_edge[root] = usize::MAX;
        queue.clear();
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            if 2 * dist[x] >= best {
                break;
            }
            for &(y, e) in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent_edge[y] = e;
                    queue.push_back(y);
                } else if e != parent_edge[x] {
                    best = best.min(dist[x] + dist[y] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}

/// BFS distance between `from` and `to`, or `None` if it exceeds `cap` or
/// the two are disconnected.
pub fn bfs_distance(
    n: usize,
    edges: &[(VertexId, VertexId)],
    from: VertexId,
    to: VertexId,
    cap: usize,
) -> Option<usize> {
    let adj = adjacency(n, edges);
    bfs_distance_adj(&adj, from.index(), to.index(), cap)
}

fn bfs_distance_adj(
    adj: &[Vec<(usize, usize)>],
    from: usize,
    to: usize,
    cap: usize,
) -> Option<usize> {
    if from == to {
        return Some(0);
    }
    let mut dist = vec![usize::MAX; adj.len()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if dist[x] >= cap {
            break;
        }
        for &(y, _) in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                if y == to {
                    return Some(dist[y]);
                }
                queue.push_back(y);
            }
        }
    }
    None
}

fn adjacency(n: usize, edges: &[(VertexId, VertexId)]) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); n];
    for (i, &(a, b)) in edges.iter().enumerate() {
        adj[a.index()].push((b.index(), i));
        adj[b.index()].push((a.index(), i));
    }
    adj
}

/// Offline orientation with discrepancy at most one: odd-degree vertices are
/// paired in ascending order by virtual edges, every component is walked
/// along closed trails, and the virtual edges are dropped again.
pub fn euler_orient(n: usize, edges: &[(EdgeId, VertexId, VertexId)]) -> Orientation {
    let mut all: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(_, a, b)| (a.index(), b.index()))
        .collect();
    let mut degree = vec![0usize; n];
    for &(a, b) in &all {
        degree[a] += 1;
        degree[b] += 1;
    }
    let odd: Vec<usize> = (0..n).filter(|&x| degree[x] % 2 == 1).collect();
    for pair in odd.chunks(2) {
        all.push((pair[0], pair[1]));
    }

    let mut adj = vec![Vec::new(); n];
    for (i, &(a, b)) in all.iter().enumerate() {
        adj[a].push(i);
        adj[b].push(i);
    }
    let mut used = vec![false; all.len()];
    let mut next = vec![0usize; n];
    let mut dir = vec![(0usize, 0usize); all.len()];
    let mut stack = Vec::new();
    for start in 0..n {
        stack.clear();
        stack.push(start);
        while let Some(&x) = stack.last() {
            while next[x] < adj[x].len() && used[adj[x][next[x]]] {
                next[x] += 1;
            }
            if next[x] == adj[x].len() {
                stack.pop();
                continue;
            }
            let e = adj[x][next[x]];
            used[e] = true;
            let (a, b) = all[e];
            let y = if a == x { b } else { a };
            dir[e] = (x, y);
            stack.push(y);
        }
    }
    edges
        .iter()
        .enumerate()
        .map(|(i, &(id, _, _))| (id, VertexId(dir[i].0 as u32), VertexId(dir[i].1 as u32)))
        .collect()
}

/// Minimum achievable discrepancy over all `2^m` orientations.
pub fn exhaustive_min_disc(n: usize, edges: &[(VertexId, VertexId)]) -> Result<u32> {
    let m = edges.len();
    if m > EXHAUSTIVE_MAX_EDGES {
        return Err(Error::TooManyEdges {
            m,
            max: EXHAUSTIVE_MAX_EDGES,
        });
    }
    let mut bal = vec![0i64; n];
    let mut forward = vec![true; m];
    for &(a, b) in edges {
        bal[a.index()] += 1;
        bal[b.index()] -= 1;
    }
    let max_abs = |bal: &[i64]| bal.iter().map(|b| b.unsigned_abs()).max().unwrap_or(0) as u32;
    let mut best = max_abs(&bal);
    // Gray code: step i flips edge trailing_zeros(i).
    for i in 1u64..(1u64 << m) {
        let j = i.trailing_zeros() as usize;
        let (a, b) = edges[j];
        let s = if forward[j] { 2 } else { -2 };
        bal[a.index()] -= s;
        bal[b.index()] += s;
        forward[j] = !forward[j];
        best = best.min(max_abs(&bal));
        if best == 0 {
            break;
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub invariant: &'static str,
    pub subject: String,
    pub observed: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at {}: {}",
            self.invariant, self.subject, self.observed
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ViolationList {
    pub entries: Vec<Violation>,
}

impl ViolationList {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Distinct invariant names that fired, sorted.
    pub fn names(&self) -> Vec<&'static str> {
        let mut names: Vec<_> = self.entries.iter().map(|v| v.invariant).collect();
        names.sort_unstable();
        names.dedup();
        names
    }

    pub fn contains(&self, invariant: &str) -> bool {
        self.entries.iter().any(|v| v.invariant == invariant)
    }

    fn push(
        &mut self,
        invariant: &'static str,
        subject: impl fmt::Display,
        observed: impl fmt::Display,
    ) {
        self.entries.push(Violation {
            invariant,
            subject: subject.to_string(),
            observed: observed.to_string(),
        });
    }
}

impl fmt::Display for ViolationList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.entries {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Names reported by [`check_all_invariants`].
pub mod invariant {
    pub const ORIENTATION_DOMAIN: &str = "orientation-domain";
    pub const DISCREPANCY: &str = "discrepancy";
    pub const DISCREPANCY_TRACKING: &str = "discrepancy-tracking";
    pub const PARTITION_TOTALITY: &str = "partition-totality";
    pub const CYCLE_SHAPE: &str = "cycle-shape";
    pub const CYCLE_ORIENTATION: &str = "cycle-orientation";
    pub const OUT_DEGREE: &str = "out-degree";
    pub const LABELLER_CONSISTENCY: &str = "labeller-consistency";
    pub const FOREIGN_LABEL_COUNT: &str = "foreign-label-count";
    pub const LABEL_MEMBERSHIP: &str = "label-membership";
    pub const STAR_BALANCE: &str = "star-balance";
    pub const GIRTH_LOWER_BOUND: &str = "girth-lower-bound";
    pub const GIRTH_DISCREPANCY: &str = "girth-discrepancy";
}

/// Exhaustive sweep of every engine invariant, recomputed from raw state.
pub fn check_all_invariants(engine: &Engine) -> ViolationList {
    use invariant::*;

    let mut out = ViolationList::default();
    let n = engine.n() as usize;
    let t = engine.threshold();
    let graph = engine.graph();
    let part = engine.partition();
    let orient = engine.orientation();

    let live: BTreeMap<EdgeId, (VertexId, VertexId)> =
        graph.live_edges().map(|r| (r.id, (r.u, r.v))).collect();
    let same_ends = |id: EdgeId, a: VertexId, b: VertexId| {
        live.get(&id)
            .is_some_and(|&(u, v)| pair_key(u, v) == pair_key(a, b))
    };

    // Public orientation covers exactly the live edges.
    for (&id, &(u, v)) in &live {
        match orient.get(id) {
            None => out.push(
                ORIENTATION_DOMAIN,
                format!("edge {id}"),
                "live edge has no direction",
            ),
            Some((a, b)) if pair_key(a, b) != pair_key(u, v) => out.push(
                ORIENTATION_DOMAIN,
                format!("edge {id}"),
                format!("directed {a}->{b} but joins {u}-{v}"),
            ),
            _ => {}
        }
    }
    for (id, _, _) in orient.iter() {
        if !live.contains_key(&id) {
            out.push(
                ORIENTATION_DOMAIN,
                format!("edge {id}"),
                "dead edge still directed",
            );
        }
    }

    // Global discrepancy from scratch, and agreement with the running copy.
    let bal = signed_balances(n, orient);
    for (x, b) in bal.iter().enumerate() {
        if b.unsigned_abs() > 3 {
            out.push(
                DISCREPANCY,
                format!("vertex {x}"),
                format!("|out - in| = {}", b.abs()),
            );
        }
    }
    if bal != engine.balances() {
        let x = bal
            .iter()
            .zip(engine.balances())
            .position(|(a, b)| a != b)
            .unwrap_or(0);
        out.push(
            DISCREPANCY_TRACKING,
            format!("vertex {x}"),
            format!("recomputed {} vs tracked {}", bal[x], engine.balances()[x]),
        );
    }
    let max = bal.iter().map(|b| b.unsigned_abs()).max().unwrap_or(0) as u32;
    if max != engine.max_discrepancy() {
        out.push(
            DISCREPANCY_TRACKING,
            "max",
            format!("recomputed {max} vs tracked {}", engine.max_discrepancy()),
        );
    }

    // Partition totality.
    let homes: BTreeMap<EdgeId, Home> = part.homes().collect();
    let mut cycle_owner: BTreeMap<EdgeId, usize> = BTreeMap::new();
    for c in part.cycles().values() {
        for &e in &c.edges {
            *cycle_owner.entry(e).or_default() += 1;
            if homes.get(&e) != Some(&Home::Cycle(c.id)) {
                out.push(
                    PARTITION_TOTALITY,
                    format!("edge {e}"),
                    format!("listed in cycle {} but homed at {:?}", c.id, homes.get(&e)),
                );
            }
        }
    }
    for (&e, &count) in &cycle_owner {
        if count > 1 {
            out.push(
                PARTITION_TOTALITY,
                format!("edge {e}"),
                format!("in {count} cycles"),
            );
        }
    }
    for &id in live.keys() {
        match homes.get(&id) {
            None => out.push(
                PARTITION_TOTALITY,
                format!("edge {id}"),
                "live edge has no home",
            ),
            Some(Home::Cycle(cid)) if part.cycle(*cid).is_none() => out.push(
                PARTITION_TOTALITY,
                format!("edge {id}"),
                format!("homed at missing cycle {cid}"),
            ),
            _ => {}
        }
    }
    for &id in homes.keys() {
        if !live.contains_key(&id) {
            out.push(
                PARTITION_TOTALITY,
                format!("edge {id}"),
                "dead edge still homed",
            );
        }
    }
    let girth_ids: Vec<EdgeId> = homes
        .iter()
        .filter(|(_, h)| **h == Home::Girth)
        .map(|(&e, _)| e)
        .collect();
    let girth_adj_ids: Vec<EdgeId> = part.girth_edges().iter().map(|g| g.0).collect();
    if girth_adj_ids != girth_ids {
        out.push(
            PARTITION_TOTALITY,
            "girth set",
            format!(
                "{} homed as girth, {} in girth adjacency",
                girth_ids.len(),
                girth_adj_ids.len()
            ),
        );
    }

    // Cycle shape and orientation.
    for c in part.cycles().values() {
        let k = c.edges.len();
        if k < 2 || k > t.short_cycle_max as usize || c.vertices.len() != k {
            out.push(
                CYCLE_SHAPE,
                format!("cycle {}", c.id),
                format!("length {k}, {} vertices", c.vertices.len()),
            );
            continue;
        }
        for (i, &e) in c.edges.iter().enumerate() {
            let (a, b) = c.arc(i);
            if !same_ends(e, a, b) {
                out.push(
                    CYCLE_SHAPE,
                    format!("cycle {} edge {e}", c.id),
                    format!("does not join {a}-{b}"),
                );
            }
            if orient.get(e) != Some((a, b)) {
                out.push(
                    CYCLE_ORIENTATION,
                    format!("cycle {} edge {e}", c.id),
                    format!("expected {a}->{b}, found {:?}", orient.get(e)),
                );
            }
        }
    }

    // Labeller.
    let arcs: BTreeMap<EdgeId, (VertexId, VertexId)> = part
        .labeller()
        .arcs()
        .map(|(e, a, b)| (e, (a, b)))
        .collect();
    let mut out_deg = vec![0usize; n];
    for (&e, &(a, b)) in &arcs {
        out_deg[a.index()] += 1;
        if !same_ends(e, a, b) {
            out.push(
                LABELLER_CONSISTENCY,
                format!("edge {e}"),
                format!("arc {a}->{b} does not match endpoints"),
            );
        }
    }
    for (x, &d) in out_deg.iter().enumerate() {
        if d > 2 {
            out.push(OUT_DEGREE, format!("vertex {x}"), format!("out-degree {d}"));
        }
        let listed = part.labeller().out_edges(VertexId(x as u32));
        let expected: Vec<EdgeId> = arcs
            .iter()
            .filter(|(_, &(a, _))| a.index() == x)
            .map(|(&e, _)| e)
            .collect();
        if listed != expected.as_slice() {
            out.push(
                LABELLER_CONSISTENCY,
                format!("vertex {x}"),
                "out-list disagrees with arcs",
            );
        }
    }
    let arc_ids: Vec<EdgeId> = arcs.keys().copied().collect();
    if arc_ids != girth_ids {
        out.push(
            LABELLER_CONSISTENCY,
            "girth set",
            format!(
                "{} labelled edges, {} girth edges",
                arc_ids.len(),
                girth_ids.len()
            ),
        );
    }

    // Foreign labels and star balance, from labeller labels plus public directions.
    let mut foreign = vec![0usize; n];
    let mut star_out = vec![0i64; n];
    let mut star_in = vec![0i64; n];
    let mut girth_dirs = Vec::with_capacity(girth_ids.len());
    for &e in &girth_ids {
        let Some(&(u, v)) = live.get(&e) else {
            continue;
        };
        let Some(label) = arcs.get(&e).map(|&(_, h)| h) else {
            continue;
        };
        for x in [u, v] {
            if x != label {
                foreign[x.index()] += 1;
            }
        }
        let Some((tail, head)) = orient.get(e) else {
            continue;
        };
        girth_dirs.push((e, tail, head));
        if tail == label {
            star_out[label.index()] += 1;
        } else {
            star_in[label.index()] += 1;
        }
        let b = part.balancer();
        let expected_side = if tail == label {
            b.label_out(label)
        } else {
            b.label_in(label)
        };
        if b.label_of(e) != Some(label)
            || b.dir(e) != Some((tail, head))
            || !expected_side.contains(&e)
        {
            out.push(
                LABEL_MEMBERSHIP,
                format!("edge {e}"),
                format!(
                    "label {label}, public {tail}->{head}; balancer has label {:?}, dir {:?}",
                    b.label_of(e),
                    b.dir(e)
                ),
            );
        }
    }
    let tracked = part.balancer().tracked().count();
    let set_total: usize = (0..n as u32)
        .map(|x| {
            part.balancer().label_out(VertexId(x)).len()
                + part.balancer().label_in(VertexId(x)).len()
        })
        .sum();
    if tracked != girth_ids.len() || set_total != girth_ids.len() {
        out.push(
            LABEL_MEMBERSHIP,
            "balancer",
            format!(
                "{tracked} tracked, {set_total} in sets, {} girth edges",
                girth_ids.len()
            ),
        );
    }
    for x in 0..n {
        if foreign[x] > 2 {
            out.push(
                FOREIGN_LABEL_COUNT,
                format!("vertex {x}"),
                format!("{} foreign-labelled edges", foreign[x]),
            );
        }
        let k = star_out[x] - star_in[x];
        if k.abs() > 1 {
            out.push(
                STAR_BALANCE,
                format!("vertex {x}"),
                format!(
                    "{} out / {} in among edges labelled {x}",
                    star_out[x], star_in[x]
                ),
            );
        }
    }

    let girth_orientation: Orientation = girth_dirs.into_iter().collect();
    for (x, b) in signed_balances(n, &girth_orientation).iter().enumerate() {
        if b.unsigned_abs() > 3 {
            out.push(
                GIRTH_DISCREPANCY,
                format!("vertex {x}"),
                format!("|out - in| = {}", b.abs()),
            );
        }
    }

    let girth_pairs: Vec<(VertexId, VertexId)> = girth_ids
        .iter()
        .filter_map(|e| live.get(e).copied())
        .collect();
    let g = brute_girth(n, &girth_pairs);
    if g < Girth::Finite(t.girth_min as usize) {
        out.push(
            GIRTH_LOWER_BOUND,
            "girth set",
            format!("girth {g} < {}", t.girth_min),
        );
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::discrepancy;
    use proptest::prelude::*;

    fn v(x: u32) -> VertexId {
        VertexId(x)
    }

    fn pairs(list: &[(u32, u32)]) -> Vec<(VertexId, VertexId)> {
        list.iter().map(|&(a, b)| (v(a), v(b))).collect()
    }

    fn ided(list: &[(u32, u32)]) -> Vec<(EdgeId, VertexId, VertexId)> {
        list.iter()
            .enumerate()
            .map(|(i, &(a, b))| (EdgeId(i as u64), v(a), v(b)))
            .collect()
    }

    #[test]
    fn girth_examples() {
        assert_eq!(
            brute_girth(5, &pairs(&[(0, 1), (1, 2), (1, 3), (3, 4)])),
            Girth::Infinite
        );
        assert_eq!(
            brute_girth(3, &pairs(&[(0, 1), (1, 2), (2, 0)])),
            Girth::Finite(3)
        );
        assert_eq!(brute_girth(2, &pairs(&[(0, 1), (1, 0)])), Girth::Finite(2));
        assert_eq!(brute_girth(4, &[]), Girth::Infinite);
        // square with a pendant triangle far away
        let g = pairs(&[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 0),
            (4, 5),
            (5, 6),
            (6, 7),
            (7, 8),
            (8, 4),
        ]);
        assert_eq!(brute_girth(9, &g), Girth::Finite(4));
        // Petersen graph
        let pet = pairs(&[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 0),
            (0, 5),
            (1, 6),
            (2, 7),
            (3, 8),
            (4, 9),
            (5, 7),
            (7, 9),
            (9, 6),
            (6, 8),
            (8, 5),
        ]);
        assert_eq!(brute_girth(10, &pet), Girth::Finite(5));
    }

    /// Independent girth: for every edge, shortest alternative path between
    /// its endpoints plus one.
    fn girth_by_edge_removal(n: usize, edges: &[(VertexId, VertexId)]) -> Girth {
        let mut best = Girth::Infinite;
        for i in 0..edges.len() {
            let rest: Vec<_> = edges
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &e)| e)
                .collect();
            if let Some(d) = bfs_distance(n, &rest, edges[i].0, edges[i].1, usize::MAX) {
                best = best.min(Girth::Finite(d + 1));
            }
        }
        best
    }

    fn multigraph(
        max_n: u32,
        max_m: usize,
    ) -> impl Strategy<Value = (usize, Vec<(VertexId, VertexId)>)> {
        (2..=max_n).prop_flat_map(move |n| {
            let edge = (0..n, 0..n)
                .prop_filter("no loops", |(a, b)| a != b)
                .prop_map(|(a, b)| (VertexId(a), VertexId(b)));
            (Just(n as usize), prop::collection::vec(edge, 0..=max_m))
        })
    }

    proptest! {
        #[test]
        fn girth_matches_edge_removal((n, edges) in multigraph(12, 50)) {
            prop_assert_eq!(brute_girth(n, &edges), girth_by_edge_removal(n, &edges));
        }

        #[test]
        fn euler_is_within_one((n, edges) in multigraph(10, 50)) {
            let list: Vec<_> = edges.iter().enumerate().map(|(i, &(a, b))| (EdgeId(i as u64), a, b)).collect();
            let o = euler_orient(n, &list);
            prop_assert_eq!(o.len(), edges.len());
            for (id, t, h) in o.iter() {
                let (a, b) = edges[id.index()];
                prop_assert_eq!(pair_key(t, h), pair_key(a, b));
            }
            prop_assert!(discrepancy(n, &o).max <= 1);
        }

        #[test]
        fn exhaustive_agrees_with_euler((n, edges) in multigraph(6, 12)) {
            let list: Vec<_> = edges.iter().enumerate().map(|(i, &(a, b))| (EdgeId(i as u64), a, b)).collect();
            let opt = exhaustive_min_disc(n, &edges).unwrap();
            prop_assert_eq!(opt, discrepancy(n, &euler_orient(n, &list)).max);
        }
    }

    #[test]
    fn euler_examples() {
        assert_eq!(
            discrepancy(3, &euler_orient(3, &ided(&[(0, 1), (1, 2), (2, 0)]))).max,
            0
        );
        let r = discrepancy(2, &euler_orient(2, &ided(&[(0, 1)])));
        assert_eq!(r.per_vertex, vec![1, 1]);
        // two disjoint squares sharing nothing, plus a doubled edge
        let g = ided(&[(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 4)]);
        assert_eq!(discrepancy(6, &euler_orient(6, &g)).max, 0);
    }

    #[test]
    fn exhaustive_examples() {
        assert_eq!(
            exhaustive_min_disc(3, &pairs(&[(0, 1), (1, 2)])).unwrap(),
            1
        );
        assert_eq!(
            exhaustive_min_disc(3, &pairs(&[(0, 1), (1, 2), (2, 0)])).unwrap(),
            0
        );
        assert_eq!(
            exhaustive_min_disc(5, &pairs(&[(0, 1), (0, 2), (0, 3), (0, 4)])).unwrap(),
            1
        );
        assert_eq!(exhaustive_min_disc(4, &[]).unwrap(), 0);
        let big = vec![(v(0), v(1)); 21];
        assert_eq!(
            exhaustive_min_disc(2, &big),
            Err(Error::TooManyEdges { m: 21, max: 20 })
        );
    }

    #[test]
    fn path_of_two_edges_needs_all_four_orientations() {
        // hand enumeration: (0->1, 1->2) gives 1; (1->0, 1->2) gives 2 at 1;
        // (0->1, 2->1) gives 2 at 1; (1->0, 2->1) gives 1.
        let e = pairs(&[(0, 1), (1, 2)]);
        assert_eq!(exhaustive_min_disc(3, &e).unwrap(), 1);
    }

    #[test]
    fn fresh_engine_is_clean() {
        let e = Engine::new(16).unwrap();
        assert!(check_all_invariants(&e).is_empty());
    }
}
