//! Asynchronous detector wrappers.
//!
//! A slow detector must not be allowed to starve the 50 Hz command stream,
//! so submissions never block: at most one frame is in flight, a newer
//! frame replaces a queued-but-unstarted one, and `latest` always returns
//! the most recent completed estimate immediately.
//!
//! [`SimAsyncDetector`] accounts latency in simulated ticks so closed-loop
//! episodes stay bit-reproducible; [`ThreadedAsyncDetector`] runs the inner
//! detector on a real worker thread for wall-clock deployments.

use std::sync::{Arc, Condvar, Mutex};
use std::thread::JoinHandle;

use crate::detectors::{DetectInput, LaneCenterEstimate, LaneDetector, PreprocessedFrame};

struct SimJob {
    pre: PreprocessedFrame,
    tick: i64,
    truth_px: Option<(f64, f64)>,
    ready_at: i64,
}

/// Simulated-time asynchronous wrapper: latency is expressed in control
/// ticks (ceil(latency_ms / tick_ms)).
pub struct SimAsyncDetector {
    inner: Box<dyn LaneDetector>,
    latency_ms: f64,
    latency_ticks: i64,
    inflight: Option<SimJob>,
    queued: Option<SimJob>,
    latest: LaneCenterEstimate,
}

impl SimAsyncDetector {
    pub fn new(inner: Box<dyn LaneDetector>, latency_ms: f64, dt_s: f64) -> Self {
        let tick_ms = dt_s * 1000.0;
        let latency_ticks = (latency_ms / tick_ms).ceil().max(0.0) as i64;
        Self {
            inner,
            latency_ms,
            latency_ticks,
            inflight: None,
            queued: None,
            latest: LaneCenterEstimate::invalid(-1),
        }
    }

    pub fn latency_ticks(&self) -> i64 {
        self.latency_ticks
    }

    /// Non-blocking submission; at most one call per control tick.
    pub fn submit(&mut self, pre: &PreprocessedFrame, tick: i64, truth_px: Option<(f64, f64)>) {
        // Completions strictly before this tick must consume the queue as
        // it stood then; a completion landing exactly now picks up the
        // frame submitted now.
        self.advance_to(tick - 1);
        let job = SimJob {
            pre: pre.clone(),
            tick,
            truth_px,
            ready_at: tick + self.latency_ticks,
        };
        if self.inflight.is_none() {
            self.inflight = Some(job);
        } else {
            // Replace the queued-but-unstarted frame with the newer one.
            self.queued = Some(job);
        }
        self.advance_to(tick);
    }

    /// Most recent completed estimate; invalid with tick -1 before the
    /// first completion. Never blocks.
    pub fn latest(&self) -> LaneCenterEstimate {
        self.latest
    }

    fn advance_to(&mut self, now: i64) {
        while let Some(job) = &self.inflight {
            if job.ready_at > now {
                break;
            }
            let job = self.inflight.take().expect("checked above");
            let input = DetectInput {
                pre: &job.pre,
                tick: job.tick,
                truth_px: job.truth_px,
            };
            self.latest = self.inner.detect(&input);
            // The worker frees up at job.ready_at and immediately starts
            // the queued frame, if any.
            if let Some(mut next) = self.queued.take() {
                next.ready_at = job.ready_at + self.latency_ticks;
                self.inflight = Some(next);
            }
        }
    }
}

impl LaneDetector for SimAsyncDetector {
    fn name(&self) -> &'static str {
        "async"
    }

    fn detect(&mut self, input: &DetectInput<'_>) -> LaneCenterEstimate {
        self.submit(input.pre, input.tick, input.truth_px);
        self.latest()
    }

    fn reset(&mut self) {
        self.inner.reset();
        self.inflight = None;
        self.queued = None;
        self.latest = LaneCenterEstimate::invalid(-1);
    }

    fn sim_latency_ms(&self) -> f64 {
        self.latency_ms
    }
}

struct ThreadedJob {
    pre: PreprocessedFrame,
    tick: i64,
    truth_px: Option<(f64, f64)>,
}

#[derive(Default)]
struct SharedState {
    queued: Option<ThreadedJob>,
    latest: Option<LaneCenterEstimate>,
    shutdown: bool,
}

/// Wall-clock asynchronous wrapper: a single background worker executes the
/// inner detector; the latest-estimate slot is an atomically replaced
/// snapshot. `submit` and `latest` are safe to call from the control thread
/// concurrently with the worker.
pub struct ThreadedAsyncDetector {
    shared: Arc<(Mutex<SharedState>, Condvar)>,
    worker: Option<JoinHandle<()>>,
}

impl ThreadedAsyncDetector {
    pub fn spawn(mut inner: Box<dyn LaneDetector + Send>) -> Self {
        let shared = Arc::new((Mutex::new(SharedState::default()), Condvar::new()));
        let worker_shared = Arc::clone(&shared);
        let worker = std::thread::spawn(move || loop {
            let job = {
                let (lock, cvar) = &*worker_shared;
                let mut st = lock.lock().unwrap();
                loop {
                    if st.shutdown {
                        return;
                    }
                    if let Some(job) = st.queued.take() {
                        break job;
                    }
                    st = cvar.wait(st).unwrap();
                }
            };
            let input = DetectInput {
                pre: &job.pre,
                tick: job.tick,
                truth_px: job.truth_px,
            };
            let est = inner.detect(&input);
            let (lock, _) = &*worker_shared;
            lock.lock().unwrap().latest = Some(est);
        });
        Self {
            shared,
            worker: Some(worker),
        }
    }

    pub fn submit(&self, pre: &PreprocessedFrame, tick: i64) {
        let (lock, cvar) = &*self.shared;
        let mut st = lock.lock().unwrap();
        st.queued = Some(ThreadedJob {
            pre: pre.clone(),
            tick,
            truth_px: None,
        });
        cvar.notify_one();
    }

    pub fn latest(&self) -> LaneCenterEstimate {
        let (lock, _) = &*self.shared;
        lock.lock()
            .unwrap()
            .latest
            .unwrap_or_else(|| LaneCenterEstimate::invalid(-1))
    }
}

impl Drop for ThreadedAsyncDetector {
    fn drop(&mut self) {
        let (lock, cvar) = &*self.shared;
        lock.lock().unwrap().shutdown = true;
        cvar.notify_one();
        if let Some(worker) = self.worker.take() {
            let _ = worker.join();
        }
    }
}
