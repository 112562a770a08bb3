//! Split of the live edges into a high-girth subgraph and a set of short,
//! cyclically oriented cycles.
//!
//! An arriving edge whose endpoints are within `2·LOG - 1` hops of each other
//! in the high-girth part would close a cycle of length at most `2·LOG`. That
//! cycle is pulled out of the high-girth part and oriented around itself, so
//! it contributes nothing to any vertex's discrepancy. Otherwise the edge
//! joins the high-girth part. Deleting an edge of a short cycle dissolves the
//! cycle and re-inserts the survivors one by one.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::balancer::{BalanceState, FlipSet};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, GirthThreshold, VertexId};
use crate::labeller::LabelState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleId(pub u64);

impl fmt::Display for CycleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// Where a live edge currently lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Home {
    Girth,
    Cycle(CycleId),
}

/// A short cycle: edge `i` joins `vertices[i]` and `vertices[(i + 1) % k]`
/// and is oriented in that direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleRecord {
    pub id: CycleId,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl CycleRecord {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The direction edge `i` must have.
    pub fn arc(&self, i: usize) -> (VertexId, VertexId) {
        let k = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % k])
    }
}

/// A change to the public direction of one edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectionWrite {
    Set(EdgeId, VertexId, VertexId),
    Clear(EdgeId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Removal {
    pub from: Home,
    /// Survivors of a dissolved cycle, in re-insertion order, with where they
    /// landed.
    pub reinserted: Vec<(EdgeId, Home)>,
}

#[derive(Clone, Debug)]
pub struct PartitionState {
    threshold: GirthThreshold,
    endpoints: Vec<Option<(VertexId, VertexId)>>,
    home: Vec<Option<Home>>,
    girth_adj: Vec<Vec<(VertexId, EdgeId)>>,
    girth_count: usize,
    cycles: BTreeMap<CycleId, CycleRecord>,
    next_cycle: u64,
    labeller: LabelState,
    balancer: BalanceState,
    last_path_len: usize,
    mark: Vec<u32>,
    dist: Vec<u32>,
    epoch: u32,
    queue: Vec<VertexId>,
}

impl PartitionState {
    pub fn new(threshold: GirthThreshold) -> Self {
        let n = threshold.n as usize;
        Self {
            threshold,
            endpoints: Vec::new(),
            home: Vec::new(),
            girth_adj: vec![Vec::new(); n],
            girth_count: 0,
            cycles: BTreeMap::new(),
            next_cycle: 0,
            labeller: LabelState::new(threshold.n, threshold.log),
            balancer: BalanceState::new(threshold.n),
            last_path_len: 0,
            mark: vec![0; n],
            dist: vec![0; n],
            epoch: 0,
            queue: Vec::new(),
        }
    }

    pub fn threshold(&self) -> GirthThreshold {
        self.threshold
    }

    pub fn labeller(&self) -> &LabelState {
        &self.labeller
    }

    pub fn balancer(&self) -> &BalanceState {
        &self.balancer
    }

    pub fn home(&self, id: EdgeId) -> Option<Home> {
        self.home.get(id.index()).copied().flatten()
    }

    pub fn homes(&self) -> impl Iterator<Item = (EdgeId, Home)> + '_ {
        self.home
            .iter()
            .enumerate()
            .filter_map(|(i, h)| h.map(|h| (EdgeId(i as u64), h)))
    }

    pub fn endpoints(&self, id: EdgeId) -> Option<(VertexId, VertexId)> {
        self.endpoints.get(id.index()).copied().flatten()
    }

    pub fn girth_count(&self) -> usize {
        self.girth_count
    }

    /// High-girth edges as `(id, u, v)`, in ascending id order.
    pub fn girth_edges(&self) -> Vec<(EdgeId, VertexId, VertexId)> {
        let mut out: Vec<_> = self
            .girth_adj
            .iter()
            .enumerate()
            .flat_map(|(x, adj)| {
                adj.iter()
                    .filter(move |&&(y, _)| (x as u32) < y.0)
                    .map(move |&(y, e)| (e, VertexId(x as u32), y))
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn cycles(&self) -> &BTreeMap<CycleId, CycleRecord> {
        &self.cycles
    }

    pub fn cycle(&self, id: CycleId) -> Option<&CycleRecord> {
        self.cycles.get(&id)
    }

    /// Length of the labeller repair path of the last high-girth insertion.
    pub fn last_path_len(&self) -> usize {
        self.last_path_len
    }

    /// Places a new (or re-inserted) edge. Direction changes are appended to
    /// `writes` in the order they happen.
    pub fn add_edge(
        &mut self,
        id: EdgeId,
        u: VertexId,
        v: VertexId,
        writes: &mut Vec<DirectionWrite>,
    ) -> Result<Home> {
        if self.home(id).is_some() {
            return Err(Error::StateCorruption(format!(
                "edge {id} is already placed"
            )));
        }
        self.set_endpoints(id, Some((u, v)));
        self.last_path_len = 0;
        match self.find_short_cycle(u, v) {
            None => {
                self.join_girth(id, u, v, writes)?;
                Ok(Home::Girth)
            }
            Some(path) => {
                let cid = self.extract_cycle(id, u, v, path, writes)?;
                Ok(Home::Cycle(cid))
            }
        }
    }

    pub fn remove_edge(&mut self, id: EdgeId, writes: &mut Vec<DirectionWrite>) -> Result<Removal> {
        let home = self.home(id).ok_or(Error::UnknownEdge(id))?;
        match home {
            Home::Girth => {
                self.leave_girth(id, writes)?;
                self.home[id.index()] = None;
                self.set_endpoints(id, None);
                writes.push(DirectionWrite::Clear(id));
                Ok(Removal {
                    from: home,
                    reinserted: Vec::new(),
                })
            }
            Home::Cycle(cid) => {
                let record = self.cycles.remove(&cid).ok_or_else(|| {
                    Error::StateCorruption(format!("edge {id} points at missing cycle {cid}"))
                })?;
                for &e in &record.edges {
                    self.home[e.index()] = None;
                }
                self.set_endpoints(id, None);
                writes.push(DirectionWrite::Clear(id));
                let mut survivors: Vec<EdgeId> =
                    record.edges.iter().copied().filter(|&e| e != id).collect();
                survivors.sort_unstable();
                let mut reinserted = Vec::with_capacity(survivors.len());
                for f in survivors {
                    let (a, b) = self.endpoints(f).ok_or_else(|| {
                        Error::StateCorruption(format!("cycle edge {f} has no endpoints"))
                    })?;
                    let landed = self.add_edge(f, a, b, writes)?;
                    reinserted.push((f, landed));
                }
                Ok(Removal {
                    from: home,
                    reinserted,
                })
            }
        }
    }

    /// Shortest path from `min(u, v)` to `max(u, v)` inside the high-girth
    /// part with at most `2·LOG - 1` edges, as a vertex sequence. Among
    /// shortest paths the lexicographically smallest sequence is returned.
    pub fn find_short_cycle(&mut self, u: VertexId, v: VertexId) -> Option<Vec<VertexId>> {
        let (s, t) = if u <= v { (u, v) } else { (v, u) };
        let cap = self.threshold.short_cycle_max - 1;

        // Distances to t, level by level, until s is reached.
        self.next_epoch();
        let epoch = self.epoch;
        self.mark[t.index()] = epoch;
        self.dist[t.index()] = 0;
        self.queue.clear();
        self.queue.push(t);
        let mut level_start = 0;
        let mut depth = 0;
        let mut found = false;
        'bfs: while depth < cap && level_start < self.queue.len() {
            let level_end = self.queue.len();
            for qi in level_start..level_end {
                let x = self.queue[qi];
                for &(y, _) in &self.girth_adj[x.index()] {
                    if self.mark[y.index()] == epoch {
                        continue;
                    }
                    self.mark[y.index()] = epoch;
                    self.dist[y.index()] = depth + 1;
                    if y == s {
                        found = true;
                        break 'bfs;
                    }
                    self.queue.push(y);
                }
            }
            level_start = level_end;
            depth += 1;
        }
        if !found {
            return None;
        }

        // Greedy walk from s: always the smallest neighbour one step closer.
        let mut path = vec![s];
        let mut cur = s;
        while cur != t {
            let want = self.dist[cur.index()] - 1;
            let next = self.girth_adj[cur.index()]
                .iter()
                .map(|&(y, _)| y)
                .filter(|y| self.mark[y.index()] == epoch && self.dist[y.index()] == want)
                .min()
                .expect("a vertex at distance d has a neighbour at distance d - 1");
            path.push(next);
            cur = next;
        }
        Some(path)
    }

    fn join_girth(
        &mut self,
        id: EdgeId,
        u: VertexId,
        v: VertexId,
        writes: &mut Vec<DirectionWrite>,
    ) -> Result<()> {
        let delta = self.labeller.hl_insert(id, u, v)?;
        self.last_path_len = delta.path_len;
        let flips = self.balancer.sb_apply(&delta)?;
        self.girth_adj[u.index()].push((v, id));
        self.girth_adj[v.index()].push((u, id));
        self.girth_count += 1;
        self.set_home(id, Some(Home::Girth));
        self.emit(&flips, writes);
        Ok(())
    }

    fn leave_girth(&mut self, id: EdgeId, writes: &mut Vec<DirectionWrite>) -> Result<()> {
        let delta = self.labeller.hl_delete(id)?;
        let (_, old_label) = delta.deleted.expect("deletion delta names the edge");
        let flips = self.balancer.sb_remove(id, old_label)?;
        let (a, b) = self
            .endpoints(id)
            .ok_or_else(|| Error::StateCorruption(format!("girth edge {id} has no endpoints")))?;
        remove_adj(&mut self.girth_adj[a.index()], id);
        remove_adj(&mut self.girth_adj[b.index()], id);
        self.girth_count -= 1;
        self.emit(&flips, writes);
        Ok(())
    }

    fn extract_cycle(
        &mut self,
        id: EdgeId,
        u: VertexId,
        v: VertexId,
        mut path: Vec<VertexId>,
        writes: &mut Vec<DirectionWrite>,
    ) -> Result<CycleId> {
        // Walk v ... u along the path, so the cycle reads u -> v -> ... -> u.
        if path[0] != v {
            path.reverse();
        }
        let mut vertices = Vec::with_capacity(path.len());
        vertices.push(u);
        vertices.extend_from_slice(&path[..path.len() - 1]);
        let mut edges = Vec::with_capacity(path.len());
        edges.push(id);
        for w in path.windows(2) {
            let e = self.girth_adj[w[0].index()]
                .iter()
                .find(|&&(y, _)| y == w[1])
                .map(|&(_, e)| e)
                .ok_or_else(|| {
                    Error::StateCorruption(format!("no girth edge between {} and {}", w[0], w[1]))
                })?;
            edges.push(e);
        }
        for &f in &edges[1..] {
            self.leave_girth(f, writes)?;
        }

        let cid = CycleId(self.next_cycle);
        self.next_cycle += 1;
        let record = CycleRecord {
            id: cid,
            vertices,
            edges,
        };
        for (i, &e) in record.edges.iter().enumerate() {
            let (t, h) = record.arc(i);
            writes.push(DirectionWrite::Set(e, t, h));
            self.set_home(e, Some(Home::Cycle(cid)));
        }
        self.cycles.insert(cid, record);
        Ok(cid)
    }

    fn emit(&self, flips: &FlipSet, writes: &mut Vec<DirectionWrite>) {
        for &e in &flips.flips {
            let (t, h) = self.balancer.dir(e).expect("flipped edges are tracked");
            writes.push(DirectionWrite::Set(e, t, h));
        }
        if let Some((e, t, h)) = flips.newly_oriented {
            writes.push(DirectionWrite::Set(e, t, h));
        }
    }

    fn set_home(&mut self, id: EdgeId, home: Option<Home>) {
        if self.home.len() <= id.index() {
            self.home.resize(id.index() + 1, None);
        }
        self.home[id.index()] = home;
    }

    fn set_endpoints(&mut self, id: EdgeId, ends: Option<(VertexId, VertexId)>) {
        if self.endpoints.len() <= id.index() {
            self.endpoints.resize(id.index() + 1, None);
        }
        self.endpoints[id.index()] = ends;
    }

    fn next_epoch(&mut self) {
        if self.epoch == u32::MAX {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.epoch = 0;
        }
        self.epoch += 1;
    }

    // Fault injection hooks. Each breaks exactly one piece of bookkeeping.

    pub(crate) fn corrupt_label(&mut self, id: EdgeId) -> bool {
        self.labeller.corrupt_reverse(id)
    }

    pub(crate) fn corrupt_balance(&mut self, id: EdgeId) -> Option<(VertexId, VertexId)> {
        self.balancer.corrupt_flip(id)
    }

    pub(crate) fn corrupt_orphan(&mut self, id: EdgeId) -> bool {
        match self.home.get_mut(id.index()) {
            Some(h @ Some(_)) => {
                *h = None;
                true
            }
            _ => false,
        }
    }

    /// Adds an edge to the high-girth part without looking for short cycles.
    pub(crate) fn force_girth(
        &mut self,
        id: EdgeId,
        u: VertexId,
        v: VertexId,
        writes: &mut Vec<DirectionWrite>,
    ) -> Result<()> {
        self.set_endpoints(id, Some((u, v)));
        self.join_girth(id, u, v, writes)
    }
}

fn remove_adj(adj: &mut Vec<(VertexId, EdgeId)>, id: EdgeId) {
    if let Some(pos) = adj.iter().position(|&(_, e)| e == id) {
        adj.swap_remove(pos);
    }
}
