//! Stream files and trace lines.
//!
//! A stream file is line oriented:
//!
//! ```text
//! # generator=random seed=7
//! n 4
//! + 0 1
//! -# 0
//! - 2 3
//! ```
//!
//! `+ u v` inserts, `-# id` deletes by id and `- u v` deletes the most
//! recent live edge between `u` and `v`. Lines starting with `#` are
//! comments; a `# generator=<name> seed=<S>` comment records provenance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::adversary::{Provenance, UpdateStream};
use crate::engine::{UpdateEvent, UpdateKind, UpdateResult};
use crate::graph::{pair_key, EdgeId, Orientation, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParseErrorCode {
    MissingHeader,
    InvalidSize,
    Malformed,
    VertexOutOfRange,
    SelfLoop,
    UnknownEdge,
    DeadEdge,
    NoLiveEdge,
}

impl ParseErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ParseErrorCode::MissingHeader => "missing-header",
            ParseErrorCode::InvalidSize => "invalid-size",
            ParseErrorCode::Malformed => "malformed",
            ParseErrorCode::VertexOutOfRange => "vertex-out-of-range",
            ParseErrorCode::SelfLoop => "self-loop",
            ParseErrorCode::UnknownEdge => "unknown-edge",
            ParseErrorCode::DeadEdge => "dead-edge",
            ParseErrorCode::NoLiveEdge => "no-live-edge",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {}: {message}", code.as_str())]
pub struct ParseError {
    pub line: usize,
    pub code: ParseErrorCode,
    pub message: String,
}

fn fail<T>(line: usize, code: ParseErrorCode, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        code,
        message: message.into(),
    })
}

/// Liveness bookkeeping so that deletions can be validated while parsing.
struct Liveness {
    next_id: u64,
    alive: BTreeSet<u64>,
    by_pair: BTreeMap<(VertexId, VertexId), Vec<u64>>,
    ends: Vec<(VertexId, VertexId)>,
}

impl Liveness {
    fn new() -> Self {
        Self {
            next_id: 0,
            alive: BTreeSet::new(),
            by_pair: BTreeMap::new(),
            ends: Vec::new(),
        }
    }

    fn insert(&mut self, u: VertexId, v: VertexId) {
        let id = self.next_id;
        self.next_id += 1;
        self.alive.insert(id);
        self.by_pair.entry(pair_key(u, v)).or_default().push(id);
        self.ends.push(pair_key(u, v));
    }

    fn delete(&mut self, id: u64) {
        self.alive.remove(&id);
        if let Some(list) = self.by_pair.get_mut(&self.ends[id as usize]) {
            list.retain(|&x| x != id);
        }
    }
}

pub fn parse_stream(text: &str) -> Result<UpdateStream, ParseError> {
    use ParseErrorCode::*;

    let mut n: Option<u32> = None;
    let mut events = Vec::new();
    let mut provenance = None;
    let mut live = Liveness::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if provenance.is_none() {
                provenance = parse_provenance(comment);
            }
            continue;
        }
        let mut words = trimmed.split_whitespace();
        let op = words.next().unwrap_or_default();
        let args: Vec<&str> = words.collect();

        let Some(size) = n else {
            if op != "n" {
                return fail(line, MissingHeader, "expected `n <N>` before any event");
            }
            let [value] = args[..] else {
                return fail(line, Malformed, "header takes exactly one number");
            };
            let size: u32 = value
                .parse()
                .or_else(|_| fail(line, Malformed, format!("bad instance size `{value}`")))?;
            if size == 0 {
                return fail(line, InvalidSize, "instance size must be at least 1");
            }
            n = Some(size);
            continue;
        };

        let vertex = |s: &str| -> Result<VertexId, ParseError> {
            let x: u32 = s
                .parse()
                .or_else(|_| fail(line, Malformed, format!("bad vertex `{s}`")))?;
            if x >= size {
                return fail(line, VertexOutOfRange, format!("vertex {x} >= n = {size}"));
            }
            Ok(VertexId(x))
        };
        let pair = |args: &[&str]| -> Result<(VertexId, VertexId), ParseError> {
            let [a, b] = args[..] else {
                return fail(line, Malformed, "expected two vertices");
            };
            let (u, v) = (vertex(a)?, vertex(b)?);
            if u == v {
                return fail(line, SelfLoop, format!("self-loop at vertex {u}"));
            }
            Ok((u, v))
        };

        match op {
            "n" => return fail(line, Malformed, "duplicate header"),
            "+" => {
                let (u, v) = pair(&args)?;
                live.insert(u, v);
                events.push(UpdateEvent::Insert(u, v));
            }
            "-#" => {
                let [value] = args[..] else {
                    return fail(line, Malformed, "expected one edge id");
                };
                let id: u64 = value
                    .parse()
                    .or_else(|_| fail(line, Malformed, format!("bad edge id `{value}`")))?;
                if id >= live.next_id {
                    return fail(line, UnknownEdge, format!("edge {id} was never inserted"));
                }
                if !live.alive.contains(&id) {
                    return fail(line, DeadEdge, format!("edge {id} is already deleted"));
                }
                live.delete(id);
                events.push(UpdateEvent::DeleteById(EdgeId(id)));
            }
            "-" => {
                let (u, v) = pair(&args)?;
                let Some(&id) = live.by_pair.get(&pair_key(u, v)).and_then(|l| l.last()) else {
                    return fail(
                        line,
                        NoLiveEdge,
                        format!("no live edge between {u} and {v}"),
                    );
                };
                live.delete(id);
                events.push(UpdateEvent::DeleteByPair(u, v));
            }
            other => return fail(line, Malformed, format!("unknown operation `{other}`")),
        }
    }

    let Some(n) = n else {
        return fail(
            text.lines().count().max(1),
            MissingHeader,
            "no `n <N>` header",
        );
    };
    Ok(UpdateStream {
        n,
        events,
        provenance,
    })
}

fn parse_provenance(comment: &str) -> Option<Provenance> {
    let mut generator = None;
    let mut seed = None;
    for word in comment.split_whitespace() {
        if let Some(g) = word.strip_prefix("generator=") {
            generator = Some(g.to_string());
        } else if let Some(s) = word.strip_prefix("seed=") {
            seed = s.parse().ok();
        }
    }
    Some(Provenance {
        generator: generator?,
        seed: seed?,
    })
}

pub struct EventText<'a>(pub &'a UpdateEvent);

impl fmt::Display for EventText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self.0 {
            UpdateEvent::Insert(u, v) => write!(f, "+ {u} {v}"),
            UpdateEvent::DeleteById(id) => write!(f, "-# {id}"),
            UpdateEvent::DeleteByPair(u, v) => write!(f, "- {u} {v}"),
        }
    }
}

pub fn serialize_stream(stream: &UpdateStream) -> String {
    let mut out = String::with_capacity(16 + stream.events.len() * 10);
    if let Some(p) = &stream.provenance {
        let _ = writeln!(out, "# generator={} seed={}", p.generator, p.seed);
    }
    let _ = writeln!(out, "n {}", stream.n);
    for e in &stream.events {
        let _ = writeln!(out, "{}", EventText(e));
    }
    out
}

/// One trace record, written as a single JSON object per line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceLine {
    pub seq: u64,
    pub event: String,
    pub edge: EdgeId,
    pub kind: UpdateKind,
    pub oriented: Option<(VertexId, VertexId)>,
    pub flips: Vec<EdgeId>,
    pub recourse: usize,
    pub max_disc: u32,
}

impl TraceLine {
    pub fn new(seq: u64, event: &UpdateEvent, r: &UpdateResult) -> Self {
        Self {
            seq,
            event: EventText(event).to_string(),
            edge: r.edge,
            kind: r.kind,
            oriented: r.oriented,
            flips: r.flips.clone(),
            recourse: r.recourse,
            max_disc: r.max_discrepancy,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace lines always serialize")
    }

    pub fn from_json(line: &str) -> serde_json::Result<Self> {
        serde_json::from_str(line)
    }
}

/// Rebuilds the orientation from trace lines alone.
#[derive(Clone, Debug, Default)]
pub struct TraceReplayer {
    orientation: Orientation,
}

impl TraceReplayer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    /// Applies one record. Returns false if the record references an edge
    /// the replayed orientation does not know.
    pub fn apply(&mut self, line: &TraceLine) -> bool {
        let mut ok = true;
        match line.kind {
            UpdateKind::InsertGirth | UpdateKind::InsertCycle => match line.oriented {
                Some((t, h)) => {
                    self.orientation.set(line.edge, t, h);
                }
                None => ok = false,
            },
            UpdateKind::DeleteGirth | UpdateKind::DeleteCycle => {
                ok &= self.orientation.remove(line.edge).is_some();
            }
        }
        for &e in &line.flips {
            ok &= self.orientation.reverse(e);
        }
        ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::{gen_cycle_churn, gen_high_girth, gen_random};
    use crate::engine::Engine;
    use proptest::prelude::*;

    fn code(text: &str) -> (usize, ParseErrorCode) {
        let e = parse_stream(text).unwrap_err();
        (e.line, e.code)
    }

    #[test]
    fn parse_examples() {
        let s = parse_stream("n 4\n+ 0 1\n- 0 1\n").unwrap();
        assert_eq!(s.n, 4);
        assert_eq!(
            s.events,
            vec![
                UpdateEvent::Insert(VertexId(0), VertexId(1)),
                UpdateEvent::DeleteByPair(VertexId(0), VertexId(1)),
            ]
        );
        assert_eq!(code("n 4\n+ 0 0\n"), (2, ParseErrorCode::SelfLoop));
        assert_eq!(code("n 4\n-# 7\n"), (2, ParseErrorCode::UnknownEdge));
    }

    #[test]
    fn parse_error_codes() {
        use ParseErrorCode::*;
        assert_eq!(code("+ 0 1\n"), (1, MissingHeader));
        assert_eq!(code("# only a comment\n"), (1, MissingHeader));
        assert_eq!(code("n 0\n"), (1, InvalidSize));
        assert_eq!(code("n x\n"), (1, Malformed));
        assert_eq!(code("n 4\nn 4\n"), (2, Malformed));
        assert_eq!(code("n 4\n+ 0\n"), (2, Malformed));
        assert_eq!(code("n 4\n* 0 1\n"), (2, Malformed));
        assert_eq!(code("n 4\n+ 0 4\n"), (2, VertexOutOfRange));
        assert_eq!(code("n 4\n+ 0 1\n-# 0\n-# 0\n"), (4, DeadEdge));
        assert_eq!(code("n 4\n+ 0 1\n- 1 2\n"), (3, NoLiveEdge));
        assert_eq!(code("n 4\n+ 0 1\n- 1 0\n- 0 1\n"), (4, NoLiveEdge));
    }

    #[test]
    fn comments_blank_lines_and_provenance() {
        let s = parse_stream("# generator=random seed=9\n\nn 3\n  # note\n+ 2 1\n").unwrap();
        assert_eq!(
            s.provenance,
            Some(Provenance {
                generator: "random".into(),
                seed: 9
            })
        );
        assert_eq!(s.len(), 1);
        assert_eq!(parse_stream("# hello\nn 2\n").unwrap().provenance, None);
    }

    #[test]
    fn pair_delete_tracks_most_recent() {
        let s = parse_stream("n 3\n+ 0 1\n+ 1 0\n- 0 1\n- 0 1\n").unwrap();
        assert_eq!(s.len(), 4);
        let mut e = Engine::new(3).unwrap();
        let r: Vec<_> = s.events.iter().map(|ev| e.apply(*ev).unwrap()).collect();
        assert_eq!(r[2].edge, EdgeId(1));
        assert_eq!(r[3].edge, EdgeId(0));
    }

    #[test]
    fn trace_line_json_shape() {
        let mut e = Engine::new(4).unwrap();
        let ev = UpdateEvent::Insert(VertexId(0), VertexId(1));
        let r = e.apply(ev).unwrap();
        let line = TraceLine::new(1, &ev, &r);
        let json = line.to_json();
        assert_eq!(
            json,
            r#"{"seq":1,"event":"+ 0 1","edge":0,"kind":"insert-girth","oriented":[1,0],"flips":[],"recourse":0,"max_disc":1}"#
        );
        assert_eq!(TraceLine::from_json(&json).unwrap(), line);
    }

    #[test]
    fn replay_reconstructs_every_prefix() {
        for s in [
            gen_random(8, 3000, 0.4, 2).unwrap(),
            gen_cycle_churn(16, 3000, 3).unwrap(),
            gen_high_girth(32, 2000, 4).unwrap(),
        ] {
            let mut e = Engine::new(s.n).unwrap();
            let mut rep = TraceReplayer::new();
            for (i, ev) in s.events.iter().enumerate() {
                let r = e.apply(*ev).unwrap();
                let line =
                    TraceLine::from_json(&TraceLine::new(i as u64 + 1, ev, &r).to_json()).unwrap();
                assert!(rep.apply(&line));
                assert_eq!(rep.orientation(), e.orientation());
            }
        }
    }

    proptest! {
        #[test]
        fn serialize_round_trips(n in 2u32..40, steps in 0usize..300, p in 0.0f64..0.9, seed: u64) {
            let s = gen_random(n, steps, p, seed).unwrap();
            prop_assert_eq!(parse_stream(&serialize_stream(&s)).unwrap(), s);
        }

        #[test]
        fn churn_round_trips(n in 2u32..40, seed: u64) {
            let s = gen_cycle_churn(n, 400, seed).unwrap();
            prop_assert_eq!(parse_stream(&serialize_stream(&s)).unwrap(), s);
        }
    }
}
