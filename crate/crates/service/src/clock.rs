use std::sync::Mutex;

use chrono::{Duration, Utc};
use skilltrace_core::domain::time::{truncate_millis, Timestamp};

/// Source of event timestamps.
pub trait Clock: Send + Sync {
    fn now(&self) -> Timestamp;
}

#[derive(Debug, Default, Clone, Copy)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> Timestamp {
        truncate_millis(Utc::now())
    }
}

/// Settable clock for tests and scripted scenarios.
#[derive(Debug)]
pub struct ManualClock(Mutex<Timestamp>);

impl ManualClock {
    pub fn new(at: Timestamp) -> Self {
        Self(Mutex::new(truncate_millis(at)))
    }

    pub fn set(&self, at: Timestamp) {
        *self.0.lock().unwrap() = truncate_millis(at);
    }

    pub fn advance(&self, by: Duration) {
        let mut now = self.0.lock().unwrap();
        *now = truncate_millis(*now + by);
    }
}

impl Clock for ManualClock {
    fn now(&self) -> Timestamp {
        *self.0.lock().unwrap()
    }
}
