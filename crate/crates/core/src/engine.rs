//! One-update-at-a-time driver over the cycle partition, with recourse
//! accounting and metrics.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DiscrepancyReport, EdgeId, GirthThreshold, Multigraph, Orientation, VertexId};
use crate::partition::{DirectionWrite, Home, PartitionState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UpdateEvent {
    Insert(VertexId, VertexId),
    DeleteById(EdgeId),
    /// Deletes the most recently inserted live edge between the two vertices.
    DeleteByPair(VertexId, VertexId),
}

/// How an update was routed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpdateKind {
    InsertGirth,
    InsertCycle,
    DeleteGirth,
    DeleteCycle,
}

impl UpdateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            UpdateKind::InsertGirth => "insert-girth",
            UpdateKind::InsertCycle => "insert-cycle",
            UpdateKind::DeleteGirth => "delete-girth",
            UpdateKind::DeleteCycle => "delete-cycle",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateResult {
    /// Id given to an inserted edge.
    pub assigned_id: Option<EdgeId>,
    /// The inserted or deleted edge.
    pub edge: EdgeId,
    pub kind: UpdateKind,
    /// Direction given to an inserted edge.
    pub oriented: Option<(VertexId, VertexId)>,
    /// Edges live before and after the update whose direction changed,
    /// ascending.
    pub flips: Vec<EdgeId>,
    pub recourse: usize,
    pub max_discrepancy: u32,
    /// Length of the labeller repair path, when a high-girth insertion
    /// needed one.
    pub flip_path_len: usize,
}

pub type Histogram = BTreeMap<usize, u64>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub updates_applied: u64,
    pub max_discrepancy_ever: u32,
    pub max_recourse_single_update: usize,
    pub total_recourse: u64,
    pub max_flip_path: usize,
    /// Recourse value -> number of updates, per update kind.
    pub recourse_histograms: BTreeMap<UpdateKind, Histogram>,
}

impl MetricsReport {
    pub fn amortized_recourse(&self) -> f64 {
        if self.updates_applied == 0 {
            0.0
        } else {
            self.total_recourse as f64 / self.updates_applied as f64
        }
    }

    pub fn max_recourse_for(&self, kind: UpdateKind) -> usize {
        self.recourse_histograms
            .get(&kind)
            .and_then(|h| h.keys().next_back().copied())
            .unwrap_or(0)
    }

    fn record(&mut self, r: &UpdateResult) {
        self.updates_applied += 1;
        self.max_discrepancy_ever = self.max_discrepancy_ever.max(r.max_discrepancy);
        self.max_recourse_single_update = self.max_recourse_single_update.max(r.recourse);
        self.total_recourse += r.recourse as u64;
        self.max_flip_path = self.max_flip_path.max(r.flip_path_len);
        *self
            .recourse_histograms
            .entry(r.kind)
            .or_default()
            .entry(r.recourse)
            .or_default() += 1;
    }
}

/// Scripted state corruptions used to exercise the invariant checker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fault {
    /// Reverse one edge of a short cycle.
    ReversedCycleEdge,
    /// Reverse one internal labeller arc without updating the balancer.
    LabelMiscount,
    /// Reverse one high-girth edge consistently so its label vertex is
    /// unbalanced.
    StarViolation,
    /// Forget where one live edge lives.
    PartitionOrphan,
    /// Put a parallel copy of a high-girth edge into the high-girth part.
    ShortCycleInGirth,
}

impl Fault {
    pub const ALL: [Fault; 5] = [
        Fault::ReversedCycleEdge,
        Fault::LabelMiscount,
        Fault::StarViolation,
        Fault::PartitionOrphan,
        Fault::ShortCycleInGirth,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Fault::ReversedCycleEdge => "reversed-cycle-edge",
            Fault::LabelMiscount => "label-miscount",
            Fault::StarViolation => "star-violation",
            Fault::PartitionOrphan => "partition-orphan",
            Fault::ShortCycleInGirth => "short-cycle-in-girth",
        }
    }

    pub fn parse(s: &str) -> Option<Fault> {
        Fault::ALL.into_iter().find(|f| f.as_str() == s)
    }
}

#[derive(Clone, Debug)]
pub struct Engine {
    graph: Multigraph,
    partition: PartitionState,
    orientation: Orientation,
    balance: Vec<i64>,
    level_counts: Vec<u32>,
    level_top: usize,
    metrics: MetricsReport,
    writes: Vec<DirectionWrite>,
    touched: Vec<(EdgeId, Option<(VertexId, VertexId)>)>,
    touch_mark: Vec<u64>,
    update_no: u64,
    poisoned: bool,
}

impl Engine {
    pub fn new(n: u32) -> Result<Self> {
        let graph = Multigraph::new_instance(n)?;
        let threshold = graph.threshold();
        let mut level_counts = vec![0u32; 4];
        level_counts[0] = n;
        Ok(Self {
            graph,
            partition: PartitionState::new(threshold),
            orientation: Orientation::new(),
            balance: vec![0; n as usize],
            level_counts,
            level_top: 0,
            metrics: MetricsReport::default(),
            writes: Vec::new(),
            touched: Vec::new(),
            touch_mark: Vec::new(),
            update_no: 0,
            poisoned: false,
        })
    }

    pub fn n(&self) -> u32 {
        self.graph.n()
    }

    pub fn threshold(&self) -> GirthThreshold {
        self.graph.threshold()
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn partition(&self) -> &PartitionState {
        &self.partition
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn orientation_snapshot(&self) -> Orientation {
        self.orientation.clone()
    }

    pub fn metrics(&self) -> &MetricsReport {
        &self.metrics
    }

    /// Incrementally maintained `out - in` per vertex.
    pub fn balances(&self) -> &[i64] {
        &self.balance
    }

    pub fn max_discrepancy(&self) -> u32 {
        self.level_top as u32
    }

    pub fn discrepancy(&self) -> DiscrepancyReport {
        DiscrepancyReport::from_balances(&self.balance)
    }

    pub fn is_poisoned(&self) -> bool {
        self.poisoned
    }

    pub fn apply(&mut self, event: UpdateEvent) -> Result<UpdateResult> {
        if self.poisoned {
            return Err(Error::Poisoned);
        }
        // Input validation happens before any state changes.
        let target = match event {
            UpdateEvent::Insert(u, v) => {
                self.graph.check_pair(u, v)?;
                None
            }
            UpdateEvent::DeleteById(id) => Some(self.graph.live_edge(id)?.id),
            UpdateEvent::DeleteByPair(u, v) => Some(self.graph.resolve_pair(u, v)?),
        };

        let mut writes = std::mem::take(&mut self.writes);
        writes.clear();
        let routed = match target {
            None => {
                let UpdateEvent::Insert(u, v) = event else {
                    unreachable!()
                };
                let id = self.graph.insert(u, v)?;
                self.partition
                    .add_edge(id, u, v, &mut writes)
                    .map(|home| (id, home, true))
            }
            Some(id) => {
                self.graph.remove(id)?;
                self.partition
                    .remove_edge(id, &mut writes)
                    .map(|removal| (id, removal.from, false))
            }
        };
        let (edge, home, inserted) = match routed {
            Ok(r) => r,
            Err(e) => {
                self.writes = writes;
                return Err(self.poison(event, e));
            }
        };
        let path_len = if inserted && home == Home::Girth {
            self.partition.last_path_len()
        } else {
            0
        };

        self.update_no += 1;
        self.touched.clear();
        for &w in &writes {
            self.write(w);
        }
        self.writes = writes;

        let mut flips: Vec<EdgeId> = self
            .touched
            .iter()
            .filter_map(|&(e, before)| {
                let after = self.orientation.get(e);
                match (before, after) {
                    (Some(b), Some(a)) if a != b => Some(e),
                    _ => None,
                }
            })
            .collect();
        flips.sort_unstable();

        let kind = match (inserted, home) {
            (true, Home::Girth) => UpdateKind::InsertGirth,
            (true, Home::Cycle(_)) => UpdateKind::InsertCycle,
            (false, Home::Girth) => UpdateKind::DeleteGirth,
            (false, Home::Cycle(_)) => UpdateKind::DeleteCycle,
        };
        let result = UpdateResult {
            assigned_id: inserted.then_some(edge),
            edge,
            kind,
            oriented: if inserted {
                self.orientation.get(edge)
            } else {
                None
            },
            recourse: flips.len(),
            flips,
            max_discrepancy: self.max_discrepancy(),
            flip_path_len: path_len,
        };
        self.metrics.record(&result);
        Ok(result)
    }

    fn poison(&mut self, event: UpdateEvent, err: Error) -> Error {
        self.poisoned = true;
        Error::InvariantViolation(format!(
            "{err} while applying {event:?}; state: {}",
            self.dump()
        ))
    }

    /// Compact description of the engine state for diagnostics.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let t = self.threshold();
        let _ = write!(
            s,
            "n={} LOG={} live={} girth_edges={} cycles={} max_out_degree={} max_discrepancy={}",
            t.n,
            t.log,
            self.graph.live_count(),
            self.partition.girth_count(),
            self.partition.cycles().len(),
            self.partition.labeller().max_out_degree(),
            self.max_discrepancy(),
        );
        s
    }

    fn write(&mut self, w: DirectionWrite) {
        let (id, new) = match w {
            DirectionWrite::Set(e, t, h) => (e, Some((t, h))),
            DirectionWrite::Clear(e) => (e, None),
        };
        let old = match new {
            Some((t, h)) => self.orientation.set(id, t, h),
            None => self.orientation.remove(id),
        };
        if self.touch_mark.len() <= id.index() {
            self.touch_mark.resize(id.index() + 1, 0);
        }
        if self.touch_mark[id.index()] != self.update_no {
            self.touch_mark[id.index()] = self.update_no;
            self.touched.push((id, old));
        }
        if let Some((t, h)) = old {
            self.shift(t, -1);
            self.shift(h, 1);
        }
        if let Some((t, h)) = new {
            self.shift(t, 1);
            self.shift(h, -1);
        }
    }

    fn shift(&mut self, x: VertexId, delta: i64) {
        let b = &mut self.balance[x.index()];
        let old = b.unsigned_abs() as usize;
        *b += delta;
        let new = b.unsigned_abs() as usize;
        self.level_counts[old] -= 1;
        if new >= self.level_counts.len() {
            self.level_counts.resize(new + 1, 0);
        }
        self.level_counts[new] += 1;
        if new > self.level_top {
            self.level_top = new;
        }
        while self.level_top > 0 && self.level_counts[self.level_top] == 0 {
            self.level_top -= 1;
        }
    }

    /// Deliberately corrupts the state for invariant-checker tests. Returns
    /// the edge that was tampered with, or `None` when the current state has
    /// no suitable target.
    pub fn inject_fault(&mut self, fault: Fault) -> Option<EdgeId> {
        self.update_no += 1;
        self.touched.clear();
        match fault {
            Fault::ReversedCycleEdge => {
                let (e, t, h) = {
                    let c = self.partition.cycles().values().next()?;
                    let (t, h) = c.arc(0);
                    (c.edges[0], t, h)
                };
                self.write(DirectionWrite::Set(e, h, t));
                Some(e)
            }
            Fault::LabelMiscount => {
                let (e, _, _) = *self.partition.girth_edges().first()?;
                self.partition.corrupt_label(e).then_some(e)
            }
            Fault::StarViolation => {
                let e = self.star_violation_target()?;
                let (t, h) = self.partition.corrupt_balance(e)?;
                self.write(DirectionWrite::Set(e, t, h));
                Some(e)
            }
            Fault::PartitionOrphan => {
                let e = self.graph.live_edges().next()?.id;
                self.partition.corrupt_orphan(e).then_some(e)
            }
            Fault::ShortCycleInGirth => {
                let (_, a, b) = *self.partition.girth_edges().first()?;
                let id = self.graph.insert(a, b).ok()?;
                let mut writes = Vec::new();
                self.partition.force_girth(id, a, b, &mut writes).ok()?;
                for w in writes {
                    self.write(w);
                }
                Some(id)
            }
        }
    }

    /// A high-girth edge whose reversal leaves its label vertex with
    /// `|k| >= 2`.
    fn star_violation_target(&self) -> Option<EdgeId> {
        let b = self.partition.balancer();
        (0..self.n()).map(VertexId).find_map(|x| {
            let (out, inn) = (b.label_out(x), b.label_in(x));
            if out.len() + inn.len() < 2 {
                return None;
            }
            if b.imbalance(x) >= 0 {
                inn.iter().next().copied()
            } else {
                out.iter().next().copied()
            }
        })
    }
}
