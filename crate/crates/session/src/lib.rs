//! Interactive solving sessions. A step is two calls: mark a part of the
//! formula, then apply a rule to it or type its replacement. Incorrect steps
//! are rejected; relevance errors are recorded and reported.

pub mod http;
pub mod session;
pub mod store;

pub use http::{app, router, serve};
pub use session::{Mode, Phase, Session, SessionError, SessionState, TaskSource, MAX_SESSION_VARIABLES};
pub use store::{SessionStore, DEFAULT_IDLE_TIMEOUT};
