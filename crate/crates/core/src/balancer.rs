//! Public orientation of the high-girth subgraph.
//!
//! Each high-girth edge is charged to its label vertex. At every vertex `v`,
//! the edges labelled `v` that leave `v` and those that enter `v` must differ
//! in count by at most one. Together with the at-most-two incident edges
//! labelled elsewhere this bounds the discrepancy of the high-girth part by 3.
//!
//! When labels move, only the two vertices involved are perturbed; each is
//! repaired by flipping `floor(|k| / 2)` edges from its majority side.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, VertexId};
use crate::labeller::LabelDelta;

/// Public orientation changes made by one balancer call.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlipSet {
    pub flips: Vec<EdgeId>,
    /// Initial direction of a newly inserted edge as `(edge, tail, head)`.
    pub newly_oriented: Option<(EdgeId, VertexId, VertexId)>,
}

#[derive(Clone, Debug)]
pub struct BalanceState {
    dir: Vec<Option<(VertexId, VertexId)>>,
    label_of: Vec<Option<VertexId>>,
    label_out: Vec<BTreeSet<EdgeId>>,
    label_in: Vec<BTreeSet<EdgeId>>,
    dirty: Vec<VertexId>,
}

impl BalanceState {
    pub fn new(n: u32) -> Self {
        let n = n as usize;
        Self {
            dir: Vec::new(),
            label_of: Vec::new(),
            label_out: vec![BTreeSet::new(); n],
            label_in: vec![BTreeSet::new(); n],
            dirty: Vec::new(),
        }
    }

    /// Public `(tail, head)` of a tracked edge.
    pub fn dir(&self, id: EdgeId) -> Option<(VertexId, VertexId)> {
        self.dir.get(id.index()).copied().flatten()
    }

    /// Vertex whose balance sets currently hold `id`.
    pub fn label_of(&self, id: EdgeId) -> Option<VertexId> {
        self.label_of.get(id.index()).copied().flatten()
    }

    /// Labelled edges oriented out of `v`.
    pub fn label_out(&self, v: VertexId) -> &BTreeSet<EdgeId> {
        &self.label_out[v.index()]
    }

    /// Labelled edges oriented into `v`.
    pub fn label_in(&self, v: VertexId) -> &BTreeSet<EdgeId> {
        &self.label_in[v.index()]
    }

    /// `|label_out(v)| - |label_in(v)|`.
    pub fn imbalance(&self, v: VertexId) -> i64 {
        self.label_out[v.index()].len() as i64 - self.label_in[v.index()].len() as i64
    }

    pub fn tracked(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.dir
            .iter()
            .enumerate()
            .filter_map(|(i, d)| d.map(|(t, h)| (EdgeId(i as u64), t, h)))
    }

    /// Applies a label delta and restores balance at every perturbed vertex.
    ///
    /// Repairs run before the inserted edge is placed, so the new edge is
    /// never among the flips: it is oriented against the label vertex's
    /// current imbalance (out of the label vertex on a tie), which keeps the
    /// vertex balanced without further work.
    pub fn sb_apply(&mut self, delta: &LabelDelta) -> Result<FlipSet> {
        self.dirty.clear();
        if let Some((id, old)) = delta.deleted {
            self.detach(id, old)?;
            self.dir[id.index()] = None;
            self.dirty.push(old);
        }
        for r in &delta.relabeled {
            self.detach(r.edge, r.old_label)?;
            self.attach(r.edge, r.new_label)?;
            self.dirty.push(r.old_label);
            self.dirty.push(r.new_label);
        }
        let mut out = FlipSet::default();
        self.repair_dirty(&mut out.flips);

        if let Some(ins) = delta.inserted {
            let id = ins.edge;
            if self.dir(id).is_some() {
                return Err(Error::StateCorruption(format!(
                    "edge {id} already balanced"
                )));
            }
            let (tail, head) = if self.imbalance(ins.label) > 0 {
                (ins.other, ins.label)
            } else {
                (ins.label, ins.other)
            };
            if self.dir.len() <= id.index() {
                self.dir.resize(id.index() + 1, None);
                self.label_of.resize(id.index() + 1, None);
            }
            self.dir[id.index()] = Some((tail, head));
            self.attach(id, ins.label)?;
            out.newly_oriented = Some((id, tail, head));
        }
        Ok(out)
    }

    /// Drops `id` from the balance sets of `old_label` and repairs that vertex.
    pub fn sb_remove(&mut self, id: EdgeId, old_label: VertexId) -> Result<FlipSet> {
        self.sb_apply(&LabelDelta {
            deleted: Some((id, old_label)),
            ..LabelDelta::default()
        })
    }

    fn detach(&mut self, id: EdgeId, label: VertexId) -> Result<()> {
        if self.label_of(id) != Some(label) {
            return Err(Error::StateCorruption(format!(
                "edge {id} is not tracked at vertex {label}"
            )));
        }
        let (tail, _) = self.dir(id).expect("tracked edges have a direction");
        let removed = if tail == label {
            self.label_out[label.index()].remove(&id)
        } else {
            self.label_in[label.index()].remove(&id)
        };
        if !removed {
            return Err(Error::StateCorruption(format!(
                "edge {id} missing from the balance set of vertex {label}"
            )));
        }
        self.label_of[id.index()] = None;
        Ok(())
    }

    fn attach(&mut self, id: EdgeId, label: VertexId) -> Result<()> {
        let (tail, head) = self
            .dir(id)
            .ok_or_else(|| Error::StateCorruption(format!("edge {id} has no public direction")))?;
        if tail == label {
            self.label_out[label.index()].insert(id);
        } else if head == label {
            self.label_in[label.index()].insert(id);
        } else {
            return Err(Error::StateCorruption(format!(
                "label {label} is not an endpoint of edge {id}"
            )));
        }
        self.label_of[id.index()] = Some(label);
        Ok(())
    }

    fn repair_dirty(&mut self, flips: &mut Vec<EdgeId>) {
        let mut dirty = std::mem::take(&mut self.dirty);
        dirty.sort_unstable();
        dirty.dedup();
        for &v in &dirty {
            self.repair(v, flips);
        }
        self.dirty = dirty;
    }

    fn repair(&mut self, v: VertexId, flips: &mut Vec<EdgeId>) {
        let k = self.imbalance(v);
        if k.abs() < 2 {
            return;
        }
        let count = (k.unsigned_abs() / 2) as usize;
        let (from, to) = if k > 0 {
            (
                &mut self.label_out[v.index()],
                &mut self.label_in[v.index()],
            )
        } else {
            (
                &mut self.label_in[v.index()],
                &mut self.label_out[v.index()],
            )
        };
        let chosen: Vec<EdgeId> = from.iter().take(count).copied().collect();
        for e in chosen {
            from.remove(&e);
            to.insert(e);
            let d = self.dir[e.index()]
                .as_mut()
                .expect("tracked edges have a direction");
            *d = (d.1, d.0);
            flips.push(e);
        }
    }

    /// Reverses one public direction while keeping the balance sets
    /// consistent with it. Fault injection only.
    pub(crate) fn corrupt_flip(&mut self, id: EdgeId) -> Option<(VertexId, VertexId)> {
        let label = self.label_of(id)?;
        let (t, h) = self.dir(id)?;
        if t == label {
            self.label_out[label.index()].remove(&id);
            self.label_in[label.index()].insert(id);
        } else {
            self.label_in[label.index()].remove(&id);
            self.label_out[label.index()].insert(id);
        }
        self.dir[id.index()] = Some((h, t));
        Some((h, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeller::{LabelledEdge, Relabel};
    use proptest::prelude::*;

    fn v(x: u32) -> VertexId {
        VertexId(x)
    }

    fn insert(b: &mut BalanceState, id: u64, label: u32, other: u32) -> FlipSet {
        b.sb_apply(&LabelDelta {
            inserted: Some(LabelledEdge {
                edge: EdgeId(id),
                label: v(label),
                other: v(other),
            }),
            ..LabelDelta::default()
        })
        .unwrap()
    }

    /// Star at vertex 0 with all edges labelled 0 and the given directions
    /// (`true` = out of the centre), built by placing edges and then forcing
    /// directions.
    fn star(outs: &[bool]) -> BalanceState {
        let mut b = BalanceState::new(outs.len() as u32 + 1);
        for (i, &out) in outs.iter().enumerate() {
            let id = EdgeId(i as u64);
            let leaf = v(i as u32 + 1);
            b.dir.resize(i + 1, None);
            b.label_of.resize(i + 1, None);
            b.dir[i] = Some(if out { (v(0), leaf) } else { (leaf, v(0)) });
            b.attach(id, v(0)).unwrap();
        }
        b
    }

    #[test]
    fn new_edges_alternate_around_their_label() {
        let mut b = BalanceState::new(5);
        let f = insert(&mut b, 0, 0, 1);
        assert_eq!(f.newly_oriented, Some((EdgeId(0), v(0), v(1))));
        let f = insert(&mut b, 1, 0, 2);
        assert_eq!(f.newly_oriented, Some((EdgeId(1), v(2), v(0))));
        let f = insert(&mut b, 2, 0, 3);
        assert_eq!(f.newly_oriented, Some((EdgeId(2), v(0), v(3))));
        assert!(f.flips.is_empty());
        assert_eq!(b.imbalance(v(0)), 1);
    }

    #[test]
    fn repair_flips_half_the_excess() {
        // three labelled edges all oriented out: k = 3, one flip
        let mut b = star(&[true, true, true]);
        let mut flips = Vec::new();
        b.repair(v(0), &mut flips);
        assert_eq!(flips, vec![EdgeId(0)]);
        assert_eq!(b.imbalance(v(0)), 1);
        assert_eq!(b.dir(EdgeId(0)), Some((v(1), v(0))));

        let mut b = star(&[false, false, false, false, false]);
        let mut flips = Vec::new();
        b.repair(v(0), &mut flips);
        assert_eq!(flips, vec![EdgeId(0), EdgeId(1)]);
        assert_eq!(b.imbalance(v(0)), -1);
    }

    /// Every direction pattern on a star with up to 3 edges, every removal:
    /// the flip count is exactly what it takes to bring the remaining class
    /// back to |k| <= 1, which is 1 iff the removal leaves |k| = 2.
    #[test]
    fn removal_on_small_stars_enumerated() {
        for m in 1..=3usize {
            for mask in 0..(1u32 << m) {
                let outs: Vec<bool> = (0..m).map(|i| mask >> i & 1 == 1).collect();
                let k: i64 = outs.iter().map(|&o| if o { 1 } else { -1 }).sum();
                if k.abs() > 1 {
                    continue;
                }
                for removed in 0..m {
                    let mut b = star(&outs);
                    let k_after = k - if outs[removed] { 1 } else { -1 };
                    let f = b.sb_remove(EdgeId(removed as u64), v(0)).unwrap();
                    let expected = if k_after.abs() == 2 { 1 } else { 0 };
                    assert_eq!(f.flips.len(), expected, "outs {outs:?} removed {removed}");
                    assert!(b.imbalance(v(0)).abs() <= 1);
                    assert_eq!(b.dir(EdgeId(removed as u64)), None);
                }
            }
        }
    }

    #[test]
    fn remove_examples() {
        let mut b = star(&[true]);
        assert!(b.sb_remove(EdgeId(0), v(0)).unwrap().flips.is_empty());

        let mut b = star(&[true, true, false, false]);
        assert!(b.sb_remove(EdgeId(0), v(0)).unwrap().flips.is_empty());

        let mut b = star(&[true, true, false]);
        let f = b.sb_remove(EdgeId(2), v(0)).unwrap();
        assert_eq!(f.flips, vec![EdgeId(0)]);
    }

    #[test]
    fn relabel_moves_edge_and_costs_at_most_two_flips() {
        // vertex 0: edges 0,1 labelled 0 (out, in); vertex 1: edge 2 labelled 1 (out).
        let mut b = BalanceState::new(4);
        insert(&mut b, 0, 0, 2);
        insert(&mut b, 1, 0, 3);
        insert(&mut b, 2, 1, 3);
        // edge 3 between 0 and 1, labelled 1, oriented 0 -> 1 (into 1)
        insert(&mut b, 3, 1, 0);
        assert_eq!(b.dir(EdgeId(3)), Some((v(0), v(1))));
        let f = b
            .sb_apply(&LabelDelta {
                relabeled: vec![Relabel {
                    edge: EdgeId(3),
                    old_label: v(1),
                    new_label: v(0),
                }],
                ..LabelDelta::default()
            })
            .unwrap();
        assert!(f.flips.len() <= 2);
        assert_eq!(b.label_of(EdgeId(3)), Some(v(0)));
        for x in 0..4 {
            assert!(b.imbalance(v(x)).abs() <= 1);
        }
    }

    #[test]
    fn untracked_edges_are_rejected() {
        let mut b = BalanceState::new(3);
        assert!(matches!(
            b.sb_remove(EdgeId(4), v(0)),
            Err(Error::StateCorruption(_))
        ));
        insert(&mut b, 0, 0, 1);
        assert!(matches!(
            b.sb_remove(EdgeId(0), v(1)),
            Err(Error::StateCorruption(_))
        ));
    }

    #[derive(Clone, Debug)]
    enum Op {
        Insert(u32, u32),
        Relabel(usize),
        Delete(usize),
    }

    proptest! {
        /// Random label traffic on 6 vertices: balance holds after every
        /// call, and flips stay within twice the label changes.
        #[test]
        fn balance_holds_under_label_traffic(ops in prop::collection::vec(
            prop_oneof![
                (0u32..6, 0u32..6).prop_map(|(a, b)| Op::Insert(a, b)),
                any::<usize>().prop_map(Op::Relabel),
                any::<usize>().prop_map(Op::Delete),
            ],
            0..200,
        )) {
            let mut b = BalanceState::new(6);
            let mut live: Vec<(EdgeId, VertexId, VertexId, VertexId)> = Vec::new();
            let mut next = 0u64;
            for op in ops {
                let (delta, idx) = match op {
                    Op::Insert(x, y) if x != y => {
                        let id = EdgeId(next);
                        next += 1;
                        live.push((id, v(x), v(y), v(x)));
                        (LabelDelta {
                            inserted: Some(LabelledEdge { edge: id, label: v(x), other: v(y) }),
                            ..LabelDelta::default()
                        }, None)
                    }
                    Op::Relabel(i) if !live.is_empty() => {
                        let i = i % live.len();
                        let (id, x, y, l) = live[i];
                        let nl = if l == x { y } else { x };
                        (LabelDelta {
                            relabeled: vec![Relabel { edge: id, old_label: l, new_label: nl }],
                            ..LabelDelta::default()
                        }, Some((i, nl)))
                    }
                    Op::Delete(i) if !live.is_empty() => {
                        let i = i % live.len();
                        let (id, _, _, l) = live.swap_remove(i);
                        (LabelDelta { deleted: Some((id, l)), ..LabelDelta::default() }, None)
                    }
                    _ => continue,
                };
                let f = b.sb_apply(&delta).unwrap();
                if let Some((i, nl)) = idx {
                    live[i].3 = nl;
                }
                let mut seen = f.flips.clone();
                seen.sort();
                seen.dedup();
                prop_assert_eq!(seen.len(), f.flips.len());
                if delta.deleted.is_some() {
                    prop_assert!(f.flips.len() <= 1);
                } else {
                    prop_assert!(f.flips.len() <= 2 * delta.relabeled.len());
                }
                if let Some(ins) = delta.inserted {
                    prop_assert!(!f.flips.contains(&ins.edge));
                }
                for x in 0..6 {
                    prop_assert!(b.imbalance(v(x)).abs() <= 1);
                }
                for &(id, _, _, l) in &live {
                    prop_assert_eq!(b.label_of(id), Some(l));
                }
            }
        }
    }
}
