use carpool::adversary::{gen_cycle_churn, gen_random};
use carpool::graph::signed_balances;
use carpool::partition::Home;
use carpool::{check_all_invariants, EdgeId, Engine, Error, UpdateEvent, UpdateKind, VertexId};

fn v(x: u32) -> VertexId {
    VertexId(x)
}

fn insert(e: &mut Engine, a: u32, b: u32) -> carpool::UpdateResult {
    e.apply(UpdateEvent::Insert(v(a), v(b))).unwrap()
}

#[test]
fn scripted_eight_vertex_scenario() {
    let mut e = Engine::new(8).unwrap();
    for i in 0..6 {
        assert_eq!(insert(&mut e, i, i + 1).kind, UpdateKind::InsertGirth);
    }
    // closes a 7-cycle: longer than 2·LOG = 6, stays in the girth part
    assert_eq!(insert(&mut e, 0, 6).kind, UpdateKind::InsertGirth);
    let r = insert(&mut e, 0, 3);
    assert_eq!(r.kind, UpdateKind::InsertCycle);
    assert!(r.max_discrepancy <= 3);
    let cycles: Vec<_> = e.partition().cycles().values().collect();
    assert_eq!(cycles.len(), 1);
    assert_eq!(cycles[0].vertices, vec![v(0), v(3), v(2), v(1)]);
    assert_eq!(
        cycles[0].edges,
        vec![EdgeId(7), EdgeId(2), EdgeId(1), EdgeId(0)]
    );
    for i in 0..4 {
        let (t, h) = cycles[0].arc(i);
        assert_eq!(e.orientation().get(cycles[0].edges[i]), Some((t, h)));
    }
    assert!(check_all_invariants(&e).is_empty());

    // deleting a cycle edge dissolves it; survivors keep their ids, and
    // (0,3) now closes the 5-cycle 0-3-4-5-6 through the old long cycle
    let old = cycles[0].id;
    let r = e.apply(UpdateEvent::DeleteById(EdgeId(1))).unwrap();
    assert_eq!(r.kind, UpdateKind::DeleteCycle);
    assert!(e.partition().cycle(old).is_none());
    for id in [0, 2] {
        assert_eq!(e.partition().home(EdgeId(id)), Some(Home::Girth));
    }
    let Some(Home::Cycle(c)) = e.partition().home(EdgeId(7)) else {
        panic!("edge 7 should sit in a new cycle");
    };
    let c = e.partition().cycle(c).unwrap();
    assert_eq!(c.vertices, vec![v(0), v(3), v(4), v(5), v(6)]);
    assert_eq!(
        c.edges,
        vec![EdgeId(7), EdgeId(3), EdgeId(4), EdgeId(5), EdgeId(6)]
    );
    assert!(check_all_invariants(&e).is_empty());
}

#[test]
fn errors_leave_state_untouched() {
    let mut e = Engine::new(4).unwrap();
    insert(&mut e, 0, 1);
    let before = e.orientation_snapshot();
    assert_eq!(
        e.apply(UpdateEvent::Insert(v(2), v(2))),
        Err(Error::SelfLoop(v(2)))
    );
    assert!(matches!(
        e.apply(UpdateEvent::Insert(v(0), v(9))),
        Err(Error::VertexOutOfRange { vertex: 9, n: 4 })
    ));
    assert_eq!(
        e.apply(UpdateEvent::DeleteById(EdgeId(5))),
        Err(Error::UnknownEdge(EdgeId(5)))
    );
    assert_eq!(
        e.apply(UpdateEvent::DeleteByPair(v(2), v(3))),
        Err(Error::NoLiveEdge(v(2), v(3)))
    );
    assert_eq!(e.orientation_snapshot(), before);
    assert!(!e.is_poisoned());
    assert_eq!(e.metrics().updates_applied, 1);
}

#[test]
fn balances_match_a_recount() {
    let s = gen_random(32, 5000, 0.3, 4).unwrap();
    let mut e = Engine::new(32).unwrap();
    for ev in &s.events {
        e.apply(*ev).unwrap();
        assert_eq!(signed_balances(32, e.orientation()), e.balances());
    }
}

#[test]
fn metrics_add_up() {
    let s = gen_cycle_churn(64, 5000, 8).unwrap();
    let mut e = Engine::new(64).unwrap();
    let mut total = 0u64;
    let mut worst = 0usize;
    for ev in &s.events {
        let r = e.apply(*ev).unwrap();
        assert_eq!(r.recourse, r.flips.len());
        total += r.recourse as u64;
        worst = worst.max(r.recourse);
    }
    let m = e.metrics();
    assert_eq!(m.updates_applied, 5000);
    assert_eq!(m.total_recourse, total);
    assert_eq!(m.max_recourse_single_update, worst);
    let counted: u64 = m
        .recourse_histograms
        .values()
        .flat_map(|h| h.values())
        .sum();
    assert_eq!(counted, 5000);
    assert!(m.max_recourse_for(UpdateKind::InsertCycle) <= worst);
    assert!(m.amortized_recourse() <= worst as f64);
}

#[test]
fn two_vertices_alternate_forever() {
    // every parallel copy pairs up into a 2-cycle
    let mut e = Engine::new(2).unwrap();
    for i in 0..200u32 {
        let r = if i % 2 == 0 {
            insert(&mut e, 0, 1)
        } else {
            insert(&mut e, 1, 0)
        };
        assert!(r.max_discrepancy <= 1);
    }
    assert_eq!(e.max_discrepancy(), 0);
    for _ in 0..200 {
        let r = e.apply(UpdateEvent::DeleteByPair(v(0), v(1))).unwrap();
        assert!(r.max_discrepancy <= 1);
        assert!(check_all_invariants(&e).is_empty());
    }
    assert_eq!(e.graph().live_count(), 0);
}
