//! Fully-dynamic edge orientation with per-vertex discrepancy at most 3.
//!
//! Live edges are split into a high-girth part, oriented by a bounded
//! out-degree labelling plus per-vertex balancing, and a set of short
//! cycles, each oriented cyclically. [`Engine`] applies one insertion or
//! deletion at a time and reports which existing edges changed direction.
//!
//! ```
//! use carpool::{Engine, UpdateEvent, VertexId};
//!
//! let mut engine = Engine::new(8)?;
//! let r = engine.apply(UpdateEvent::Insert(VertexId(0), VertexId(1)))?;
//! assert_eq!(r.recourse, 0);
//! assert!(engine.max_discrepancy() <= 3);
//! # Ok::<(), carpool::Error>(())
//! ```

pub mod adversary;
pub mod balancer;
pub mod cli;
pub mod engine;
pub mod error;
pub mod graph;
pub mod labeller;
pub mod oracle;
pub mod partition;
pub mod stream;

pub use adversary::UpdateStream;
pub use engine::{Engine, Fault, MetricsReport, UpdateEvent, UpdateKind, UpdateResult};
pub use error::{Error, Result};
pub use graph::{DiscrepancyReport, EdgeId, GirthThreshold, Orientation, VertexId};
pub use oracle::{check_all_invariants, ViolationList};
