use std::sync::Arc;
use std::time::{Duration, Instant};

use dashmap::DashMap;
use parking_lot::Mutex;

use crate::session::Session;

pub const DEFAULT_IDLE_TIMEOUT: Duration = Duration::from_secs(2 * 60 * 60);

struct Entry {
    session: Session,
    last_used: Instant,
}

/// Concurrent session map. Each session has its own lock, so calls on one
/// session are serialized while distinct sessions proceed in parallel.
#[derive(Clone)]
pub struct SessionStore {
    sessions: Arc<DashMap<String, Arc<Mutex<Entry>>>>,
    idle_timeout: Duration,
}

impl Default for SessionStore {
    fn default() -> Self {
        SessionStore::new(DEFAULT_IDLE_TIMEOUT)
    }
}

impl SessionStore {
    pub fn new(idle_timeout: Duration) -> SessionStore {
        SessionStore { sessions: Arc::default(), idle_timeout }
    }

    pub fn insert(&self, session: Session) {
        let id = session.id().to_string();
        let entry = Entry { session, last_used: Instant::now() };
        self.sessions.insert(id, Arc::new(Mutex::new(entry)));
    }

    /// Runs `f` on the session under its lock, refreshing its idle timer.
    /// Returns `None` for unknown or expired sessions.
    pub fn with<R>(&self, id: &str, f: impl FnOnce(&mut Session) -> R) -> Option<R> {
        let entry = self.sessions.get(id).map(|e| Arc::clone(e.value()))?;
        let mut entry = entry.lock();
        let now = Instant::now();
        if now.duration_since(entry.last_used) > self.idle_timeout {
            drop(entry);
            self.sessions.remove(id);
            return None;
        }
        entry.last_used = now;
        Some(f(&mut entry.session))
    }

    /// Drops sessions idle for longer than the timeout at `now`.
    pub fn expire_idle(&self, now: Instant) -> usize {
        let before = self.sessions.len();
        self.sessions
            .retain(|_, e| now.saturating_duration_since(e.lock().last_used) <= self.idle_timeout);
        before - self.sessions.len()
    }

    pub fn len(&self) -> usize {
        self.sessions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sessions.is_empty()
    }

    pub fn idle_timeout(&self) -> Duration {
        self.idle_timeout
    }
}
