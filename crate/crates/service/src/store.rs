//! In-memory session store.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use loony::SessionState;
use tokio::sync::Mutex as AsyncMutex;

pub const DEFAULT_TTL: Duration = Duration::from_secs(24 * 60 * 60);

#[derive(Debug)]
pub struct Entry {
    pub state: SessionState,
    pub touched: Instant,
}

pub type Slot = Arc<AsyncMutex<Entry>>;

/// Sessions keyed by id. Ids come from a counter and are never reused.
/// Each session sits behind its own lock so updates to one session are
/// serialized while different sessions proceed independently.
#[derive(Debug)]
pub struct SessionStore {
    next: AtomicU64,
    ttl: Duration,
    sessions: Mutex<HashMap<String, Slot>>,
}

impl SessionStore {
    pub fn new(ttl: Duration) -> Self {
        SessionStore {
            next: AtomicU64::new(1),
            ttl,
            sessions: Mutex::new(HashMap::new()),
        }
    }

    pub fn ttl(&self) -> Duration {
        self.ttl
    }

    pub fn insert(&self, state: SessionState) -> String {
        let id = self.next.fetch_add(1, Ordering::Relaxed).to_string();
        let slot = Arc::new(AsyncMutex::new(Entry {
            state,
            touched: Instant::now(),
        }));
        let mut map = self.sessions.lock().expect("store lock");
        Self::sweep(&mut map, self.ttl);
        map.insert(id.clone(), slot);
        id
    }

    /// The session's slot, if it exists and has not been idle past the TTL.
    pub fn get(&self, id: &str) -> Option<Slot> {
        let mut map = self.sessions.lock().expect("store lock");
        Self::sweep(&mut map, self.ttl);
        map.get(id).cloned()
    }

    pub fn len(&self) -> usize {
        self.sessions.lock().expect("store lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn sweep(map: &mut HashMap<String, Slot>, ttl: Duration) {
        // a slot that is locked is in use, so it is not idle
        map.retain(|_, slot| match slot.try_lock() {
            Ok(e) => e.touched.elapsed() < ttl,
            Err(_) => true,
        });
    }
}

impl Default for SessionStore {
    fn default() -> Self {
        SessionStore::new(DEFAULT_TTL)
    }
}
