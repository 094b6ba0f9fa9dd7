//! Low-resource lane-following toolkit.
//!
//! The crate bundles everything needed to study lightweight lane-keeping
//! pipelines in a closed loop, at a fixed 50 Hz control rate and under a
//! 10 ms/frame processing budget:
//!
//! - [`vision`] — raster types and the classical feature primitives
//!   (median blur, thresholding, Canny, probabilistic Hough, homography
//!   warps, connected components).
//! - [`estimation`] — unsupervised estimators shared by the detectors:
//!   K-means, DBSCAN, and the closed-form least-squares line fit.
//! - [`detectors`] — five lane-center estimators plus an asynchronous
//!   wrapper that decouples slow detectors from the control rate.
//! - [`control`] — yaw-rate and steering-angle lane-centering controllers
//!   with a command watchdog.
//! - [`simworld`] — track geometry, kinematic bicycle, synthetic camera
//!   renderer with course-defect injection, and episode execution.
//! - [`metrics`] — post-hoc evaluation of episode logs: GPS kinematics,
//!   lap statistics, steering smoothness.

pub mod control;
pub mod detectors;
pub mod error;
pub mod estimation;
pub mod metrics;
pub mod simworld;
pub mod vision;

pub use error::{LaneError, Result};
