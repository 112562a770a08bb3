//! Out-degree-2 orientation of the high-girth subgraph.
//!
//! Every edge of the high-girth part carries an internal direction in which
//! no vertex has more than two out-edges. An insertion orients the new edge
//! out of the endpoint with smaller out-degree; if that pushes the tail to
//! three out-edges, the shortest directed path from the tail to a vertex of
//! out-degree at most one is reversed. On a graph whose girth exceeds
//! `2·LOG` such a path always exists within `LOG` hops, because the BFS ball
//! around the tail would otherwise have to double in size at every level.
//! Deletions never touch other edges.
//!
//! The head of an edge in this internal orientation is its *label*. Since a
//! vertex only has out-edges for edges labelled with the other endpoint, each
//! vertex has at most two incident edges that are not labelled with itself.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Relabel {
    pub edge: EdgeId,
    pub old_label: VertexId,
    pub new_label: VertexId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LabelledEdge {
    pub edge: EdgeId,
    pub label: VertexId,
    /// The endpoint that is not the label.
    pub other: VertexId,
}

/// Label changes produced by one labeller operation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelDelta {
    pub relabeled: Vec<Relabel>,
    pub inserted: Option<LabelledEdge>,
    /// Deleted edge together with the label it had.
    pub deleted: Option<(EdgeId, VertexId)>,
    /// Length of the reversed repair path (0 when no repair ran).
    pub path_len: usize,
}

impl LabelDelta {
    pub fn label_changes(&self) -> usize {
        self.relabeled.len()
            + usize::from(self.inserted.is_some())
            + usize::from(self.deleted.is_some())
    }
}

#[derive(Clone, Debug)]
pub struct LabelState {
    log: u32,
    arcs: Vec<Option<(VertexId, VertexId)>>,
    out_lists: Vec<Vec<EdgeId>>,
    len: usize,
    mark: Vec<u32>,
    epoch: u32,
    via: Vec<EdgeId>,
    queue: Vec<VertexId>,
}

impl LabelState {
    pub fn new(n: u32, log: u32) -> Self {
        let n = n as usize;
        Self {
            log,
            arcs: Vec::new(),
            out_lists: vec![Vec::new(); n],
            len: 0,
            mark: vec![0; n],
            epoch: 0,
            via: vec![EdgeId(0); n],
            queue: Vec::new(),
        }
    }

    pub fn log(&self) -> u32 {
        self.log
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn arc(&self, id: EdgeId) -> Option<(VertexId, VertexId)> {
        self.arcs.get(id.index()).copied().flatten()
    }

    pub fn label(&self, id: EdgeId) -> Option<VertexId> {
        self.arc(id).map(|(_, head)| head)
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_lists[v.index()].len()
    }

    /// Out-edges of `v` in ascending id order.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_lists[v.index()]
    }

    pub fn max_out_degree(&self) -> usize {
        self.out_lists.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.arcs
            .iter()
            .enumerate()
            .filter_map(|(i, a)| a.map(|(t, h)| (EdgeId(i as u64), t, h)))
    }

    pub fn hl_insert(&mut self, id: EdgeId, u: VertexId, v: VertexId) -> Result<LabelDelta> {
        if self.arc(id).is_some() {
            return Err(Error::StateCorruption(format!(
                "edge {id} already labelled"
            )));
        }
        let (du, dv) = (self.out_degree(u), self.out_degree(v));
        let tail = if du < dv || (du == dv && u < v) { u } else { v };
        let head = if tail == u { v } else { u };

        if self.arcs.len() <= id.index() {
            self.arcs.resize(id.index() + 1, None);
        }
        self.arcs[id.index()] = Some((tail, head));
        insert_sorted(&mut self.out_lists[tail.index()], id);
        self.len += 1;

        let mut delta = LabelDelta::default();
        if self.out_degree(tail) > 2 {
            let path = self.find_flip_path(tail)?;
            delta.path_len = path.len();
            for e in path {
                let (t, h) = self.arc(e).expect("path edges are labelled");
                self.reassign(e, h, t);
                if e != id {
                    delta.relabeled.push(Relabel {
                        edge: e,
                        old_label: h,
                        new_label: t,
                    });
                }
            }
        }
        let (t, h) = self.arc(id).expect("just inserted");
        delta.inserted = Some(LabelledEdge {
            edge: id,
            label: h,
            other: t,
        });
        Ok(delta)
    }

    pub fn hl_delete(&mut self, id: EdgeId) -> Result<LabelDelta> {
        let (tail, head) = self
            .arcs
            .get_mut(id.index())
            .and_then(Option::take)
            .ok_or(Error::WrongPartition(id))?;
        remove_sorted(&mut self.out_lists[tail.index()], id);
        self.len -= 1;
        Ok(LabelDelta {
            deleted: Some((id, head)),
            ..LabelDelta::default()
        })
    }

    /// Shortest directed path from `start` to a vertex of out-degree at most
    /// one, exploring out-edges in ascending id order. Empty when `start`
    /// itself qualifies.
    pub fn find_flip_path(&mut self, start: VertexId) -> Result<Vec<EdgeId>> {
        if self.out_degree(start) <= 1 {
            return Ok(Vec::new());
        }
        self.next_epoch();
        let epoch = self.epoch;
        self.mark[start.index()] = epoch;
        self.queue.clear();
        self.queue.push(start);

        let mut level_start = 0;
        let mut depth = 0;
        while depth < self.log && level_start < self.queue.len() {
            let level_end = self.queue.len();
            for qi in level_start..level_end {
                let x = self.queue[qi];
                for &e in &self.out_lists[x.index()] {
                    let (_, y) = self.arcs[e.index()].expect("out-list edges are labelled");
                    if self.mark[y.index()] == epoch {
                        continue;
                    }
                    self.mark[y.index()] = epoch;
                    self.via[y.index()] = e;
                    if self.out_lists[y.index()].len() <= 1 {
                        return Ok(self.trace_back(start, y));
                    }
                    self.queue.push(y);
                }
            }
            level_start = level_end;
            depth += 1;
        }
        Err(Error::InvariantViolation(format!(
            "no vertex of out-degree <= 1 within {} hops of vertex {start}",
            self.log
        )))
    }

    fn trace_back(&self, start: VertexId, end: VertexId) -> Vec<EdgeId> {
        let mut path = Vec::new();
        let mut cur = end;
        while cur != start {
            let e = self.via[cur.index()];
            path.push(e);
            cur = self.arcs[e.index()].expect("path edges are labelled").0;
        }
        path.reverse();
        path
    }

    fn next_epoch(&mut self) {
        if self.epoch == u32::MAX {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.epoch = 0;
        }
        self.epoch += 1;
    }

    fn reassign(&mut self, e: EdgeId, tail: VertexId, head: VertexId) {
        let (old_tail, _) = self.arcs[e.index()].expect("reassigned edge is labelled");
        remove_sorted(&mut self.out_lists[old_tail.index()], e);
        insert_sorted(&mut self.out_lists[tail.index()], e);
        self.arcs[e.index()] = Some((tail, head));
    }

    /// Reverses one internal arc without telling anyone. Fault injection only.
    pub(crate) fn corrupt_reverse(&mut self, e: EdgeId) -> bool {
        match self.arc(e) {
            Some((t, h)) => {
                self.reassign(e, h, t);
                true
            }
            None => false,
        }
    }

    /// Builds a state with the given internal arcs, bypassing the insertion
    /// rule.
    #[cfg(test)]
    pub(crate) fn with_arcs(n: u32, log: u32, arcs: &[(u64, u32, u32)]) -> Self {
        let mut s = Self::new(n, log);
        for &(id, t, h) in arcs {
            let id = EdgeId(id);
            if s.arcs.len() <= id.index() {
                s.arcs.resize(id.index() + 1, None);
            }
            s.arcs[id.index()] = Some((VertexId(t), VertexId(h)));
            insert_sorted(&mut s.out_lists[t as usize], id);
            s.len += 1;
        }
        s
    }
}

fn insert_sorted(list: &mut Vec<EdgeId>, id: EdgeId) {
    let pos = list.partition_point(|&x| x < id);
    list.insert(pos, id);
}

fn remove_sorted(list: &mut Vec<EdgeId>, id: EdgeId) {
    if let Ok(pos) = list.binary_search(&id) {
        list.remove(pos);
    }
}
