//! Vertex and edge identity, multigraph bookkeeping, girth thresholds and
//! discrepancy computation.

use std::collections::{btree_map, BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serial number of an inserted edge. Serials are assigned in insertion
/// order starting at 0 and are never reused.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u64);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeRecord {
    pub id: EdgeId,
    /// Endpoints in the order the edge was inserted.
    pub u: VertexId,
    pub v: VertexId,
    pub live: bool,
}

impl EdgeRecord {
    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }

    pub fn has_endpoint(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint opposite `x`. `x` must be an endpoint.
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Unordered endpoint pair, normalized so the smaller vertex comes first.
#[inline]
pub fn pair_key(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Direction assigned to every live edge: `EdgeId -> (tail, head)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orientation {
    directed: BTreeMap<EdgeId, (VertexId, VertexId)>,
}

impl Orientation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, id: EdgeId) -> Option<(VertexId, VertexId)> {
        self.directed.get(&id).copied()
    }

    /// Sets the direction of `id`, returning the previous one.
    pub fn set(
        &mut self,
        id: EdgeId,
        tail: VertexId,
        head: VertexId,
    ) -> Option<(VertexId, VertexId)> {
        self.directed.insert(id, (tail, head))
    }

    pub fn remove(&mut self, id: EdgeId) -> Option<(VertexId, VertexId)> {
        self.directed.remove(&id)
    }

    /// Reverses `id` in place. Returns false if the edge is absent.
    pub fn reverse(&mut self, id: EdgeId) -> bool {
        match self.directed.get_mut(&id) {
            Some(dir) => {
                *dir = (dir.1, dir.0);
                true
            }
            None => false,
        }
    }

    pub fn len(&self) -> usize {
        self.directed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directed.is_empty()
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.directed.contains_key(&id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.directed.iter().map(|(&id, &(t, h))| (id, t, h))
    }
}

impl FromIterator<(EdgeId, VertexId, VertexId)> for Orientation {
    fn from_iter<I: IntoIterator<Item = (EdgeId, VertexId, VertexId)>>(iter: I) -> Self {
        Self {
            directed: iter.into_iter().map(|(id, t, h)| (id, (t, h))).collect(),
        }
    }
}

impl<'a> IntoIterator for &'a Orientation {
    type Item = (&'a EdgeId, &'a (VertexId, VertexId));
    type IntoIter = btree_map::Iter<'a, EdgeId, (VertexId, VertexId)>;

    fn into_iter(self) -> Self::IntoIter {
        self.directed.iter()
    }
}

/// Size-dependent thresholds. `log` is `ceil(log2 n)`, clamped to 1 for
/// `n <= 2`. Cycles of length at most `short_cycle_max` are extracted; the
/// remaining subgraph keeps girth at least `girth_min`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirthThreshold {
    pub n: u32,
    pub log: u32,
    pub short_cycle_max: u32,
    pub girth_min: u32,
}

impl GirthThreshold {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize);
        }
        let log = if n <= 2 { 1 } else { (n - 1).ilog2() + 1 };
        Ok(Self {
            n,
            log,
            short_cycle_max: 2 * log,
            girth_min: 2 * log + 1,
        })
    }

    /// Closed-form per-update recourse ceiling:
    /// `2·LOG · (3·(LOG + 1) + 2·LOG)`.
    ///
    /// The constant is our own loose envelope (one dissolved cycle of at most
    /// `2·LOG` survivors, each costing at most a high-girth insertion plus a
    /// new cycle's edges), not a tight bound. Measured worst cases stay well
    /// below it.
    pub fn recourse_ceiling(&self) -> usize {
        let log = self.log as usize;
        2 * log * (3 * (log + 1) + 2 * log)
    }

    /// Recourse allowed for an insertion that stays in the high-girth part.
    pub fn girth_insert_ceiling(&self) -> usize {
        3 * (self.log as usize + 1)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub per_vertex: Vec<u32>,
    pub max: u32,
}

impl DiscrepancyReport {
    pub fn from_balances(balances: &[i64]) -> Self {
        let per_vertex: Vec<u32> = balances.iter().map(|b| b.unsigned_abs() as u32).collect();
        let max = per_vertex.iter().copied().max().unwrap_or(0);
        Self { per_vertex, max }
    }
}

/// `out - in` at every vertex of an `n`-vertex orientation.
pub fn signed_balances(n: usize, orientation: &Orientation) -> Vec<i64> {
    let mut bal = vec![0i64; n];
    for (_, tail, head) in orientation.iter() {
        bal[tail.index()] += 1;
        bal[head.index()] -= 1;
    }
    bal
}

/// Exact `|deg+(v) - deg-(v)|` at every vertex, recomputed from scratch.
pub fn discrepancy(n: usize, orientation: &Orientation) -> DiscrepancyReport {
    DiscrepancyReport::from_balances(&signed_balances(n, orientation))
}

/// Live multigraph on a fixed vertex set.
#[derive(Clone, Debug)]
pub struct Multigraph {
    threshold: GirthThreshold,
    edges: Vec<EdgeRecord>,
    live_count: usize,
    parallel: HashMap<(VertexId, VertexId), BTreeSet<EdgeId>>,
}

impl Multigraph {
    pub fn new_instance(n: u32) -> Result<Self> {
        Ok(Self {
            threshold: GirthThreshold::new(n)?,
            edges: Vec::new(),
            live_count: 0,
            parallel: HashMap::new(),
        })
    }

    pub fn n(&self) -> u32 {
        self.threshold.n
    }

    pub fn threshold(&self) -> GirthThreshold {
        self.threshold
    }

    pub fn live_count(&self) -> usize {
        self.live_count
    }

    /// Number of ids handed out so far, live or not.
    pub fn issued(&self) -> usize {
        self.edges.len()
    }

    pub fn check_vertex(&self, x: VertexId) -> Result<()> {
        if x.0 < self.threshold.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: x.0,
                n: self.threshold.n,
            })
        }
    }

    pub fn check_pair(&self, u: VertexId, v: VertexId) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        Ok(())
    }

    pub fn insert(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        self.check_pair(u, v)?;
        let id = EdgeId(self.edges.len() as u64);
        self.edges.push(EdgeRecord {
            id,
            u,
            v,
            live: true,
        });
        self.parallel.entry(pair_key(u, v)).or_default().insert(id);
        self.live_count += 1;
        Ok(id)
    }

    pub fn edge(&self, id: EdgeId) -> Option<&EdgeRecord> {
        self.edges.get(id.index())
    }

    pub fn live_edge(&self, id: EdgeId) -> Result<&EdgeRecord> {
        match self.edges.get(id.index()) {
            None => Err(Error::UnknownEdge(id)),
            Some(rec) if !rec.live => Err(Error::DeadEdge(id)),
            Some(rec) => Ok(rec),
        }
    }

    pub fn remove(&mut self, id: EdgeId) -> Result<EdgeRecord> {
        let rec = *self.live_edge(id)?;
        self.edges[id.index()].live = false;
        let key = pair_key(rec.u, rec.v);
        if let Some(set) = self.parallel.get_mut(&key) {
            set.remove(&id);
            if set.is_empty() {
                self.parallel.remove(&key);
            }
        }
        self.live_count -= 1;
        Ok(rec)
    }

    /// Most recently inserted live edge between `u` and `v`.
    pub fn resolve_pair(&self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        self.check_pair(u, v)?;
        self.parallel
            .get(&pair_key(u, v))
            .and_then(|set| set.iter().next_back().copied())
            .ok_or(Error::NoLiveEdge(u, v))
    }

    pub fn live_edges(&self) -> impl Iterator<Item = &EdgeRecord> + '_ {
        self.edges.iter().filter(|e| e.live)
    }

    pub fn all_edges(&self) -> &[EdgeRecord] {
        &self.edges
    }
}
