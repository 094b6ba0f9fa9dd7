//! External line-segment source: the pluggable stand-in for an
//! out-of-process neural line detector.
//!
//! Wire format (line-oriented text, one batch per block):
//!
//! ```text
//! #tick 17
//! 12.0 40.5 118.0 44.25
//! 300 10 305 200
//!
//! ```
//!
//! A batch is a `#tick <n>` header followed by one `x1 y1 x2 y2` segment
//! per line and a terminating blank line. Malformed lines are skipped and
//! counted. Coordinates are full-frame pixels.

use std::io::BufRead;

use crate::detectors::dbscan_lines::{estimate_from_clusters, rank_clusters, segment_points};
use crate::detectors::{DetectInput, DetectorConfig, LaneCenterEstimate, LaneDetector};
use crate::error::{LaneError, Result};
use crate::vision::{canny_with_sigma, hough_segments, LineSegment, VisionConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct ExternalSegmentBatch {
    pub tick: i64,
    pub segments: Vec<LineSegment>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BatchParseStats {
    pub batches: usize,
    pub malformed_lines: usize,
}

/// Reads every batch from a reader. Ticks must be monotone non-decreasing;
/// a regression is a parse error. Malformed segment lines are skipped and
/// counted in the returned stats.
pub fn parse_segment_batches(
    reader: impl BufRead,
) -> Result<(Vec<ExternalSegmentBatch>, BatchParseStats)> {
    let mut batches = Vec::new();
    let mut stats = BatchParseStats::default();
    let mut current: Option<ExternalSegmentBatch> = None;
    let mut last_tick = i64::MIN;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            if let Some(batch) = current.take() {
                batches.push(batch);
                stats.batches += 1;
            }
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("#tick") {
            if let Some(batch) = current.take() {
                batches.push(batch);
                stats.batches += 1;
            }
            let tick: i64 = rest.trim().parse().map_err(|_| LaneError::Parse {
                line: lineno + 1,
                msg: format!("bad tick header: {trimmed:?}"),
            })?;
            if tick < last_tick {
                return Err(LaneError::Parse {
                    line: lineno + 1,
                    msg: format!("tick {tick} regresses below {last_tick}"),
                });
            }
            last_tick = tick;
            current = Some(ExternalSegmentBatch {
                tick,
                segments: Vec::new(),
            });
            continue;
        }
        let Some(batch) = current.as_mut() else {
            stats.malformed_lines += 1;
            continue; // segment line outside any batch
        };
        let fields: Vec<f64> = trimmed
            .split_ascii_whitespace()
            .filter_map(|t| t.parse().ok())
            .collect();
        if fields.len() != 4 || trimmed.split_ascii_whitespace().count() != 4 {
            stats.malformed_lines += 1;
            continue;
        }
        match LineSegment::new(fields[0], fields[1], fields[2], fields[3]) {
            Ok(seg) => batch.segments.push(seg),
            Err(_) => stats.malformed_lines += 1, // zero-length segment
        }
    }
    if let Some(batch) = current.take() {
        batches.push(batch);
        stats.batches += 1;
    }
    Ok((batches, stats))
}

/// Serializes one batch in the wire format, bit-exact for round-trips of
/// shortest-representation floats.
pub fn write_segment_batch(out: &mut impl std::io::Write, batch: &ExternalSegmentBatch) -> Result<()> {
    writeln!(out, "#tick {}", batch.tick)?;
    for s in &batch.segments {
        writeln!(out, "{} {} {} {}", s.x1, s.y1, s.x2, s.y2)?;
    }
    writeln!(out)?;
    Ok(())
}

/// Slope/length filter with curve-fragment chaining: a segment shorter than
/// `min_len` is retained when one of its endpoints lies within `max_gap` of
/// another retained candidate's endpoint, so a curve sliced into short
/// straight pieces survives as a chain.
pub(crate) fn filter_segments(segments: &[LineSegment], cfg: &DetectorConfig) -> Vec<LineSegment> {
    let steep: Vec<&LineSegment> = segments
        .iter()
        .filter(|s| s.steeper_than(cfg.slope_min))
        .collect();
    let endpoint_gap = |a: &LineSegment, b: &LineSegment| -> f64 {
        let pts_a = [(a.x1, a.y1), (a.x2, a.y2)];
        let pts_b = [(b.x1, b.y1), (b.x2, b.y2)];
        let mut best = f64::INFINITY;
        for (ax, ay) in pts_a {
            for (bx, by) in pts_b {
                best = best.min((ax - bx).hypot(ay - by));
            }
        }
        best
    };
    steep
        .iter()
        .enumerate()
        .filter(|(i, s)| {
            s.length() >= cfg.min_len
                || steep
                    .iter()
                    .enumerate()
                    .any(|(j, o)| j != *i && endpoint_gap(s, o) <= cfg.max_gap)
        })
        .map(|(_, s)| **s)
        .collect()
}

/// Lane center from an external segment batch (full-frame coordinates).
pub fn detect_external_lines(
    batch: &ExternalSegmentBatch,
    cfg: &DetectorConfig,
    frame_w: usize,
    frame_h: usize,
) -> LaneCenterEstimate {
    let kept = filter_segments(&batch.segments, cfg);
    if kept.is_empty() {
        return LaneCenterEstimate::invalid(batch.tick);
    }
    let points = segment_points(&kept);
    let ranked = rank_clusters(&points, cfg.eps, cfg.min_points);
    let (est, _) = estimate_from_clusters(&ranked, cfg, batch.tick);
    est.clamped(frame_w, frame_h)
}

/// Anything that can produce a segment batch for a frame.
pub trait LineSource: Send {
    fn segments(&mut self, input: &DetectInput<'_>) -> ExternalSegmentBatch;
}

/// In-process stand-in line source: Canny + Hough over the preprocessed
/// mask, mapped to full-frame coordinates.
#[derive(Debug, Clone)]
pub struct HoughLineSource {
    vision: VisionConfig,
}

impl HoughLineSource {
    pub fn new(vision: VisionConfig) -> Self {
        Self { vision }
    }
}

impl LineSource for HoughLineSource {
    fn segments(&mut self, input: &DetectInput<'_>) -> ExternalSegmentBatch {
        let gray = input.pre.mask.to_gray();
        let off = input.pre.row_offset as f64;
        let segments = canny_with_sigma(
            &gray,
            self.vision.canny_lo,
            self.vision.canny_hi,
            self.vision.canny_sigma,
        )
        .and_then(|edges| hough_segments(&edges, &self.vision.hough))
        .unwrap_or_default()
        .into_iter()
        .map(|s| LineSegment {
            x1: s.x1,
            y1: s.y1 + off,
            x2: s.x2,
            y2: s.y2 + off,
        })
        .collect();
        ExternalSegmentBatch {
            tick: input.tick,
            segments,
        }
    }
}

/// Composes a line source with the batch estimator into a frame detector.
pub struct ExternalPipeline {
    source: Box<dyn LineSource>,
    cfg: DetectorConfig,
}

impl ExternalPipeline {
    pub fn new(source: Box<dyn LineSource>, cfg: DetectorConfig) -> Self {
        Self { source, cfg }
    }
}

impl LaneDetector for ExternalPipeline {
    fn name(&self) -> &'static str {
        "external"
    }

    fn detect(&mut self, input: &DetectInput<'_>) -> LaneCenterEstimate {
        let batch = self.source.segments(input);
        detect_external_lines(&batch, &self.cfg, input.pre.full_width, input.pre.full_height)
    }
}
