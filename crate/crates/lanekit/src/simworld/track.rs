//! Closed-course geometry: the track's middle line as arcs and straights,
//! with two drivable lanes either side of it.

use std::path::Path;

use crate::error::{LaneError, Result};

/// Which lane of the course is driven.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaneSelect {
    Inner,
    Outer,
}

impl LaneSelect {
    pub fn as_str(&self) -> &'static str {
        match self {
            LaneSelect::Inner => "inner",
            LaneSelect::Outer => "outer",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "inner" => Ok(LaneSelect::Inner),
            "outer" => Ok(LaneSelect::Outer),
            other => Err(LaneError::Config(format!(
                "lane must be inner or outer, got {other:?}"
            ))),
        }
    }
}

/// One middle-line segment. Curvature is signed: positive turns left
/// (counter-clockwise), zero is straight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackSegment {
    pub length: f64,
    pub curvature: f64,
}

/// Course description: the middle line (driven counter-clockwise as
/// written), lane width, and the selected lane. The outer lane runs on the
/// outward side of the middle line in the forward direction; the inner
/// lane runs inward and is driven in the reverse direction, so the solid
/// boundary line is on the vehicle's right in both lanes.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackSpec {
    pub segments: Vec<TrackSegment>,
    pub lane_width: f64,
    pub lane_select: LaneSelect,
}

impl TrackSpec {
    /// The default closed course: a four-turn loop sized so the outer lane
    /// measures 97.54 m, the inner lane 78.67 m, and the inner lane's
    /// sharpest turn has exactly a 4.0 m radius.
    pub fn default_course() -> Self {
        let outer_len = 97.54;
        let inner_len = 78.67;
        let sharp_inner_radius = 4.0;
        let gentle_mid_radius = 9.5;

        // For a convex loop, offsetting the middle line by d changes its
        // length by 2*pi*d, which fixes the lane width and middle length.
        let lane_width = (outer_len - inner_len) / std::f64::consts::TAU;
        let mid_len = (outer_len + inner_len) / 2.0;
        let sharp_mid_radius = sharp_inner_radius + lane_width / 2.0;

        let quarter = std::f64::consts::FRAC_PI_2;
        let arcs_len = quarter * (3.0 * gentle_mid_radius + sharp_mid_radius);
        // Closure makes the lead/trail straight corrections cancel, leaving
        // s1 + s2 free; s1 is chosen and the rest follow.
        let s1 = 10.0;
        let s2 = (mid_len - arcs_len) / 2.0 - s1;
        let delta = gentle_mid_radius - sharp_mid_radius;
        let s3 = s1 - delta;
        let s4 = s2 + delta;

        let straight = |len: f64| TrackSegment {
            length: len,
            curvature: 0.0,
        };
        let arc = |radius: f64| TrackSegment {
            length: radius * quarter,
            curvature: 1.0 / radius,
        };
        TrackSpec {
            segments: vec![
                straight(s1),
                arc(gentle_mid_radius),
                straight(s2),
                arc(gentle_mid_radius),
                straight(s3),
                arc(gentle_mid_radius),
                straight(s4),
                arc(sharp_mid_radius),
            ],
            lane_width,
            lane_select: LaneSelect::Outer,
        }
    }

    pub fn middle_length(&self) -> f64 {
        self.segments.iter().map(|s| s.length).sum()
    }

    /// Total signed turn along the middle line (2*pi for a CCW loop).
    pub fn total_turn(&self) -> f64 {
        self.segments.iter().map(|s| s.length * s.curvature).sum()
    }

    /// Length of the selected lane's center path.
    pub fn lane_length(&self, lane: LaneSelect) -> f64 {
        let d = match lane {
            LaneSelect::Outer => self.lane_width / 2.0,
            LaneSelect::Inner => -self.lane_width / 2.0,
        };
        self.middle_length() + d * self.total_turn()
    }

    /// Checks loop closure (pose returns to start within 1e-6) and the
    /// inner-lane curvature bound (radius never below 4.0 m).
    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return Err(LaneError::Config("track has no segments".into()));
        }
        if self.lane_width <= 0.0 {
            return Err(LaneError::Config("lane width must be positive".into()));
        }
        let (mut x, mut y, mut h) = (0.0f64, 0.0f64, 0.0f64);
        for seg in &self.segments {
            if seg.length <= 0.0 {
                return Err(LaneError::Config("segment length must be positive".into()));
            }
            if seg.curvature.abs() < 1e-12 {
                x += seg.length * h.cos();
                y += seg.length * h.sin();
            } else {
                let r = 1.0 / seg.curvature;
                let dh = seg.length * seg.curvature;
                x += r * ((h + dh).sin() - h.sin());
                y += r * (h.cos() - (h + dh).cos());
                h += dh;
            }
        }
        let pos_err = x.hypot(y);
        let turn = h - std::f64::consts::TAU * (h / std::f64::consts::TAU).round();
        if pos_err > 1e-6 || turn.abs() > 1e-6 {
            return Err(LaneError::Geometry(format!(
                "track does not close: position error {pos_err:.2e} m, heading error {turn:.2e} rad"
            )));
        }
        for seg in &self.segments {
            if seg.curvature.abs() > 1e-12 {
                let mid_r = 1.0 / seg.curvature.abs();
                let inner_r = mid_r - self.lane_width / 2.0;
                if inner_r < 4.0 - 1e-9 {
                    return Err(LaneError::Geometry(format!(
                        "inner-lane radius {inner_r:.3} m below the 4.0 m floor"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Serializes in the track-file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("# closed course: middle-line geometry, counter-clockwise\n");
        out.push_str(&format!("lane_width = {:.12}\n", self.lane_width));
        out.push_str(&format!("lane = {}\n", self.lane_select.as_str()));
        for seg in &self.segments {
            if seg.curvature.abs() < 1e-12 {
                out.push_str(&format!("segment: straight length={:.12}\n", seg.length));
            } else {
                out.push_str(&format!(
                    "segment: arc length={:.12} curvature={:.12}\n",
                    seg.length, seg.curvature
                ));
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lane_width = None;
        let mut lane_select = LaneSelect::Outer;
        let mut segments = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = i + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("segment:") {
                let mut kind = None;
                let mut length = None;
                let mut curvature = 0.0f64;
                for tok in rest.split_ascii_whitespace() {
                    if let Some(v) = tok.strip_prefix("length=") {
                        length = Some(v.parse::<f64>().map_err(|_| LaneError::Parse {
                            line: lineno,
                            msg: format!("bad length {v:?}"),
                        })?);
                    } else if let Some(v) = tok.strip_prefix("curvature=") {
                        curvature = v.parse::<f64>().map_err(|_| LaneError::Parse {
                            line: lineno,
                            msg: format!("bad curvature {v:?}"),
                        })?;
                    } else {
                        kind = Some(tok.to_string());
                    }
                }
                let kind = kind.ok_or_else(|| LaneError::Parse {
                    line: lineno,
                    msg: "segment kind missing".into(),
                })?;
                let length = length.ok_or_else(|| LaneError::Parse {
                    line: lineno,
                    msg: "segment length missing".into(),
                })?;
                match kind.as_str() {
                    "straight" => segments.push(TrackSegment {
                        length,
                        curvature: 0.0,
                    }),
                    "arc" => {
                        if curvature == 0.0 {
                            return Err(LaneError::Parse {
                                line: lineno,
                                msg: "arc segment needs nonzero curvature".into(),
                            });
                        }
                        segments.push(TrackSegment { length, curvature });
                    }
                    other => {
                        return Err(LaneError::Parse {
                            line: lineno,
                            msg: format!("unknown segment kind {other:?}"),
                        })
                    }
                }
            } else if let Some((key, value)) = line.split_once('=') {
                match key.trim() {
                    "lane_width" => {
                        lane_width = Some(value.trim().parse::<f64>().map_err(|_| {
                            LaneError::Parse {
                                line: lineno,
                                msg: format!("bad lane_width {value:?}"),
                            }
                        })?)
                    }
                    "lane" => lane_select = LaneSelect::parse(value)?,
                    other => {
                        return Err(LaneError::Parse {
                            line: lineno,
                            msg: format!("unknown key {other:?}"),
                        })
                    }
                }
            } else {
                return Err(LaneError::Parse {
                    line: lineno,
                    msg: format!("unrecognized line {line:?}"),
                });
            }
        }
        let lane_width = lane_width.ok_or_else(|| LaneError::Parse {
            line: 0,
            msg: "lane_width missing".into(),
        })?;
        Ok(TrackSpec {
            segments,
            lane_width,
            lane_select,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}
