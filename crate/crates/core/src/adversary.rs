//! Update-stream generators.
//!
//! No finite test covers every adaptive adversary, so the generators mix an
//! oblivious random family, girth-preserving families that exercise the
//! high-girth machinery alone, a cycle-churn family that forces repeated
//! cycle dissolution, and a greedy adaptive driver that reads the engine's
//! orientation and tries to push discrepancy up.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{Engine, UpdateEvent, UpdateResult};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, GirthThreshold, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub generator: String,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpdateStream {
    pub n: u32,
    pub events: Vec<UpdateEvent>,
    pub provenance: Option<Provenance>,
}

impl UpdateStream {
    pub fn new(n: u32) -> Self {
        Self {
            n,
            events: Vec::new(),
            provenance: None,
        }
    }

    fn generated(n: u32, generator: &str, seed: u64) -> Self {
        Self {
            n,
            events: Vec::new(),
            provenance: Some(Provenance {
                generator: generator.to_string(),
                seed,
            }),
        }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

/// Generator families known to the CLI.
pub const GENERATORS: [&str; 5] = ["random", "high-girth", "forest", "cycle-churn", "adaptive"];

/// Live-edge bookkeeping shared by the generators: ids are predicted the
/// same way the engine assigns them.
struct LiveSet {
    next_id: u64,
    live: Vec<(EdgeId, VertexId, VertexId)>,
}

impl LiveSet {
    fn new() -> Self {
        Self {
            next_id: 0,
            live: Vec::new(),
        }
    }

    fn insert(&mut self, out: &mut UpdateStream, u: VertexId, v: VertexId) -> EdgeId {
        let id = EdgeId(self.next_id);
        self.next_id += 1;
        self.live.push((id, u, v));
        out.events.push(UpdateEvent::Insert(u, v));
        id
    }

    fn delete_at(&mut self, out: &mut UpdateStream, idx: usize) -> (EdgeId, VertexId, VertexId) {
        let rec = self.live.swap_remove(idx);
        out.events.push(UpdateEvent::DeleteById(rec.0));
        rec
    }

    fn delete_id(&mut self, out: &mut UpdateStream, id: EdgeId) -> bool {
        match self.live.iter().position(|r| r.0 == id) {
            Some(i) => {
                self.delete_at(out, i);
                true
            }
            None => false,
        }
    }
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_pair(rng: &mut ChaCha8Rng, n: u32) -> (VertexId, VertexId) {
    let u = rng.random_range(0..n);
    let mut v = rng.random_range(0..n - 1);
    if v >= u {
        v += 1;
    }
    (VertexId(u), VertexId(v))
}

fn need_two_vertices(n: u32, steps: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidSize);
    }
    if n < 2 && steps > 0 {
        return Err(Error::InvalidParameter(
            "at least two vertices are needed to insert an edge".into(),
        ));
    }
    Ok(())
}

/// Oblivious churn: each step deletes a uniformly random live edge with
/// probability `p_delete` (when one exists), otherwise inserts a uniformly
/// random non-loop pair.
pub fn gen_random(n: u32, steps: usize, p_delete: f64, seed: u64) -> Result<UpdateStream> {
    if !(0.0..1.0).contains(&p_delete) {
        return Err(Error::InvalidParameter(format!(
            "p_delete must lie in [0, 1), got {p_delete}"
        )));
    }
    need_two_vertices(n, steps)?;
    let mut rng = rng_for(seed);
    let mut out = UpdateStream::generated(n, "random", seed);
    let mut live = LiveSet::new();
    for _ in 0..steps {
        let delete = rng.random_bool(p_delete);
        if delete && !live.live.is_empty() {
            let i = rng.random_range(0..live.live.len());
            live.delete_at(&mut out, i);
        } else {
            let (u, v) = random_pair(&mut rng, n);
            live.insert(&mut out, u, v);
        }
    }
    Ok(out)
}

/// Simple adjacency used by the girth-preserving generators.
struct SimpleGraph {
    adj: Vec<Vec<(VertexId, EdgeId)>>,
    dist: Vec<u32>,
    queue: Vec<VertexId>,
}

impl SimpleGraph {
    fn new(n: u32) -> Self {
        Self {
            adj: vec![Vec::new(); n as usize],
            dist: vec![u32::MAX; n as usize],
            queue: Vec::new(),
        }
    }

    fn add(&mut self, id: EdgeId, u: VertexId, v: VertexId) {
        self.adj[u.index()].push((v, id));
        self.adj[v.index()].push((u, id));
    }

    fn remove(&mut self, id: EdgeId, u: VertexId, v: VertexId) {
        for x in [u, v] {
            let list = &mut self.adj[x.index()];
            if let Some(p) = list.iter().position(|&(_, e)| e == id) {
                list.swap_remove(p);
            }
        }
    }

    /// True when `u` and `v` are at least `min` hops apart.
    fn far_apart(&mut self, u: VertexId, v: VertexId, min: u32) -> bool {
        for &x in &self.queue {
            self.dist[x.index()] = u32::MAX;
        }
        self.queue.clear();
        self.dist[u.index()] = 0;
        self.queue.push(u);
        let mut head = 0;
        let mut far = true;
        while head < self.queue.len() {
            let x = self.queue[head];
            head += 1;
            let d = self.dist[x.index()];
            if d + 1 >= min {
                break;
            }
            for i in 0..self.adj[x.index()].len() {
                let y = self.adj[x.index()][i].0;
                if self.dist[y.index()] == u32::MAX {
                    self.dist[y.index()] = d + 1;
                    self.queue.push(y);
                    if y == v {
                        far = false;
                    }
                }
            }
            if !far {
                break;
            }
        }
        far
    }
}

/// A stream whose graph keeps girth at least `2·LOG + 1` after every event:
/// an insertion is only emitted when its endpoints are at least `2·LOG`
/// hops apart. A quarter of the steps delete a random live edge; steps
/// where no admissible pair turns up in 64 tries also delete.
pub fn gen_high_girth(n: u32, steps: usize, seed: u64) -> Result<UpdateStream> {
    need_two_vertices(n, steps)?;
    let t = GirthThreshold::new(n)?;
    let min_hops = t.short_cycle_max;
    let mut rng = rng_for(seed);
    let mut out = UpdateStream::generated(n, "high-girth", seed);
    let mut live = LiveSet::new();
    let mut g = SimpleGraph::new(n);
    for _ in 0..steps {
        let mut inserted = false;
        if live.live.is_empty() || !rng.random_bool(0.25) {
            for _ in 0..64 {
                let (u, v) = random_pair(&mut rng, n);
                if g.far_apart(u, v, min_hops) {
                    let id = live.insert(&mut out, u, v);
                    g.add(id, u, v);
                    inserted = true;
                    break;
                }
            }
        }
        if !inserted {
            if live.live.is_empty() {
                // nothing admissible and nothing to delete: only possible
                // when every pair is adjacent, which needs live edges
                unreachable!("an empty graph admits every pair");
            }
            let i = rng.random_range(0..live.live.len());
            let (id, u, v) = live.delete_at(&mut out, i);
            g.remove(id, u, v);
        }
    }
    Ok(out)
}

/// Random forest growth: insertions only join distinct components; when the
/// forest is spanning, a random edge is deleted instead.
pub fn gen_forest(n: u32, steps: usize, seed: u64) -> Result<UpdateStream> {
    need_two_vertices(n, steps)?;
    let mut rng = rng_for(seed);
    let mut out = UpdateStream::generated(n, "forest", seed);
    let mut live = LiveSet::new();
    let mut g = SimpleGraph::new(n);
    for _ in 0..steps {
        let mut inserted = false;
        if live.live.len() + 1 < n as usize && !rng.random_bool(0.2) {
            for _ in 0..64 {
                let (u, v) = random_pair(&mut rng, n);
                if g.far_apart(u, v, u32::MAX) {
                    let id = live.insert(&mut out, u, v);
                    g.add(id, u, v);
                    inserted = true;
                    break;
                }
            }
        }
        if !inserted {
            if live.live.is_empty() {
                let (u, v) = random_pair(&mut rng, n);
                let id = live.insert(&mut out, u, v);
                g.add(id, u, v);
                continue;
            }
            let i = rng.random_range(0..live.live.len());
            let (id, u, v) = live.delete_at(&mut out, i);
            g.remove(id, u, v);
        }
    }
    Ok(out)
}

/// Cycle churn: a random backbone of `n` edges, then repeatedly a cycle of
/// length `2·LOG` on random vertices, followed by rounds that delete one of
/// its edges and re-insert the same pair. Older edges are retired at random
/// once more than `3n` are live.
pub fn gen_cycle_churn(n: u32, steps: usize, seed: u64) -> Result<UpdateStream> {
    need_two_vertices(n, steps)?;
    let t = GirthThreshold::new(n)?;
    let k = (t.short_cycle_max).min(n) as usize;
    let mut rng = rng_for(seed);
    let mut out = UpdateStream::generated(n, "cycle-churn", seed);
    let mut live = LiveSet::new();
    let mut vertices: Vec<u32> = (0..n).collect();

    while out.events.len() < steps && live.live.len() < n as usize {
        let (u, v) = random_pair(&mut rng, n);
        live.insert(&mut out, u, v);
    }
    while out.events.len() < steps {
        vertices.shuffle(&mut rng);
        let ring: Vec<VertexId> = vertices[..k].iter().map(|&x| VertexId(x)).collect();
        let mut group = Vec::with_capacity(k);
        for i in 0..k {
            let (a, b) = (ring[i], ring[(i + 1) % k]);
            group.push((live.insert(&mut out, a, b), a, b));
        }
        for _ in 0..4 {
            let gi = rng.random_range(0..group.len());
            let (id, a, b) = group[gi];
            if live.delete_id(&mut out, id) {
                group[gi] = (live.insert(&mut out, a, b), a, b);
            }
        }
        while live.live.len() > 3 * n as usize {
            let i = rng.random_range(0..live.live.len());
            live.delete_at(&mut out, i);
        }
    }
    out.events.truncate(steps);
    Ok(out)
}

/// Realized stream of an adaptive run, with the engine's results.
#[derive(Clone, Debug)]
pub struct AdaptiveRun {
    pub stream: UpdateStream,
    pub results: Vec<UpdateResult>,
}

/// Greedy adaptive adversary driving `engine` directly.
///
/// Each step reads the engine's per-vertex `out - in` values. With
/// probability 0.2 it deletes the most recently flipped edge that is still
/// live (or a random live edge if none); with probability 0.1 it inserts a
/// random pair; otherwise it joins the two vertices with the largest
/// same-sign imbalance, preferring the sign with the larger total.
pub fn gen_adaptive_greedy(engine: &mut Engine, steps: usize, seed: u64) -> Result<AdaptiveRun> {
    let n = engine.n();
    need_two_vertices(n, steps)?;
    let mut rng = rng_for(seed);
    let mut stream = UpdateStream::generated(n, "adaptive", seed);
    let mut live = LiveSet::new();
    live.next_id = engine.graph().issued() as u64;
    live.live = engine
        .graph()
        .live_edges()
        .map(|r| (r.id, r.u, r.v))
        .collect();
    let mut results = Vec::with_capacity(steps);
    let mut recent_flips: Vec<EdgeId> = Vec::new();

    for _ in 0..steps {
        let roll: f64 = rng.random();
        let before = stream.events.len();
        if roll < 0.2 && !live.live.is_empty() {
            let mut done = false;
            while let Some(e) = recent_flips.pop() {
                if live.delete_id(&mut stream, e) {
                    done = true;
                    break;
                }
            }
            if !done {
                let i = rng.random_range(0..live.live.len());
                live.delete_at(&mut stream, i);
            }
        } else if roll < 0.3 {
            let (u, v) = random_pair(&mut rng, n);
            live.insert(&mut stream, u, v);
        } else {
            let (u, v) = greedy_pair(engine.balances());
            live.insert(&mut stream, u, v);
        }
        debug_assert_eq!(stream.events.len(), before + 1);
        let event = *stream.events.last().expect("one event per step");
        let r = engine.apply(event)?;
        if !r.flips.is_empty() {
            recent_flips.clear();
            recent_flips.extend_from_slice(&r.flips);
        }
        results.push(r);
    }
    Ok(AdaptiveRun { stream, results })
}

/// Two distinct vertices with the largest same-sign imbalance.
fn greedy_pair(balances: &[i64]) -> (VertexId, VertexId) {
    let top2 = |sign: i64| {
        let mut best: [(i64, usize); 2] = [(i64::MIN, usize::MAX); 2];
        for (x, &b) in balances.iter().enumerate() {
            let s = sign * b;
            if s > best[0].0 {
                best[1] = best[0];
                best[0] = (s, x);
            } else if s > best[1].0 {
                best[1] = (s, x);
            }
        }
        best
    };
    let pos = top2(1);
    let neg = top2(-1);
    let pick = if pos[0].0 + pos[1].0 >= neg[0].0 + neg[1].0 {
        pos
    } else {
        neg
    };
    let (a, b) = (pick[0].1, pick[1].1);
    (VertexId(a.min(b) as u32), VertexId(a.max(b) as u32))
}
