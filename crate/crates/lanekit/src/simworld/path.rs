//! World-frame path geometry: arclength parametrization and point
//! projection for lane centerlines and the course middle line.

use crate::simworld::track::{LaneSelect, TrackSpec};

#[derive(Debug, Clone, Copy)]
pub(crate) enum SegGeom {
    Straight {
        start: (f64, f64),
        dir: (f64, f64), // unit
        len: f64,
    },
    Arc {
        center: (f64, f64),
        radius: f64,
        /// Angle of the start point as seen from the center.
        a0: f64,
        /// Signed sweep; positive = counter-clockwise. |sweep| <= pi/2 for
        /// the built-in course, <= pi by construction (arcs are split).
        sweep: f64,
    },
}

impl SegGeom {
    fn len(&self) -> f64 {
        match self {
            SegGeom::Straight { len, .. } => *len,
            SegGeom::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    fn reversed(&self) -> SegGeom {
        match *self {
            SegGeom::Straight { start, dir, len } => SegGeom::Straight {
                start: (start.0 + dir.0 * len, start.1 + dir.1 * len),
                dir: (-dir.0, -dir.1),
                len,
            },
            SegGeom::Arc {
                center,
                radius,
                a0,
                sweep,
            } => SegGeom::Arc {
                center,
                radius,
                a0: a0 + sweep,
                sweep: -sweep,
            },
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct PathSegment {
    pub geom: SegGeom,
    pub s0: f64,
    /// Axis-aligned bounding box (min_x, min_y, max_x, max_y).
    pub bbox: (f64, f64, f64, f64),
}

/// Result of projecting a point onto a path.
#[derive(Debug, Clone, Copy)]
pub struct Projection {
    /// Arclength of the nearest path point.
    pub s: f64,
    /// Signed lateral offset; positive = right of the path direction.
    pub lateral: f64,
    /// Unsigned distance to the path.
    pub dist: f64,
}

/// A piecewise arc/straight path with cumulative arclength.
#[derive(Debug, Clone)]
pub struct LanePath {
    pub(crate) segs: Vec<PathSegment>,
    total: f64,
}

fn seg_bbox(geom: &SegGeom) -> (f64, f64, f64, f64) {
    let mut min_x = f64::INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    let n = 16;
    for i in 0..=n {
        let t = i as f64 / n as f64;
        let p = match *geom {
            SegGeom::Straight { start, dir, len } => {
                (start.0 + dir.0 * len * t, start.1 + dir.1 * len * t)
            }
            SegGeom::Arc {
                center,
                radius,
                a0,
                sweep,
            } => {
                let a = a0 + sweep * t;
                (center.0 + radius * a.cos(), center.1 + radius * a.sin())
            }
        };
        min_x = min_x.min(p.0);
        min_y = min_y.min(p.1);
        max_x = max_x.max(p.0);
        max_y = max_y.max(p.1);
    }
    (min_x, min_y, max_x, max_y)
}

impl LanePath {
    /// The course middle line itself (counter-clockwise).
    pub fn middle(track: &TrackSpec) -> LanePath {
        Self::offset_path(track, 0.0, false)
    }

    /// The selected lane's center path, oriented in its driving direction.
    pub fn for_lane(track: &TrackSpec) -> LanePath {
        match track.lane_select {
            LaneSelect::Outer => Self::offset_path(track, track.lane_width / 2.0, false),
            LaneSelect::Inner => Self::offset_path(track, -track.lane_width / 2.0, true),
        }
    }

    /// Builds the middle line from the track spec, then shifts it laterally
    /// by `offset` (positive = right of the forward direction) and
    /// optionally reverses the traversal direction.
    fn offset_path(track: &TrackSpec, offset: f64, reverse: bool) -> LanePath {
        let mut geoms = Vec::with_capacity(track.segments.len());
        let (mut x, mut y, mut h) = (0.0f64, 0.0f64, 0.0f64);
        for seg in &track.segments {
            if seg.curvature.abs() < 1e-12 {
                let dir = (h.cos(), h.sin());
                let right = (dir.1, -dir.0);
                geoms.push(SegGeom::Straight {
                    start: (x + right.0 * offset, y + right.1 * offset),
                    dir,
                    len: seg.length,
                });
                x += dir.0 * seg.length;
                y += dir.1 * seg.length;
            } else {
                let r = 1.0 / seg.curvature.abs();
                let sweep = seg.length * seg.curvature;
                let left_turn = seg.curvature > 0.0;
                // Center sits on the turning side.
                let (nx, ny) = if left_turn {
                    (-h.sin(), h.cos())
                } else {
                    (h.sin(), -h.cos())
                };
                let center = (x + nx * r, y + ny * r);
                // Moving right by `offset` grows a left-turn radius and
                // shrinks a right-turn radius.
                let radius = if left_turn { r + offset } else { r - offset };
                let a0 = (y - center.1).atan2(x - center.0);
                geoms.push(SegGeom::Arc {
                    center,
                    radius,
                    a0,
                    sweep,
                });
                let a1 = a0 + sweep;
                let mid_r = r;
                x = center.0 + mid_r * a1.cos();
                y = center.1 + mid_r * a1.sin();
                h += sweep;
            }
        }
        if reverse {
            geoms.reverse();
            for g in geoms.iter_mut() {
                *g = g.reversed();
            }
        }
        let mut segs = Vec::with_capacity(geoms.len());
        let mut s0 = 0.0;
        for geom in geoms {
            let bbox = seg_bbox(&geom);
            let len = geom.len();
            segs.push(PathSegment { geom, s0, bbox });
            s0 += len;
        }
        LanePath { segs, total: s0 }
    }

    pub fn length(&self) -> f64 {
        self.total
    }

    /// Position and heading at arclength s (wrapped around the loop).
    pub fn point_at(&self, s: f64) -> ((f64, f64), f64) {
        let s = s.rem_euclid(self.total);
        for seg in &self.segs {
            let len = seg.geom.len();
            if s <= seg.s0 + len + 1e-12 && s >= seg.s0 {
                let u = (s - seg.s0).clamp(0.0, len);
                return match seg.geom {
                    SegGeom::Straight { start, dir, .. } => (
                        (start.0 + dir.0 * u, start.1 + dir.1 * u),
                        dir.1.atan2(dir.0),
                    ),
                    SegGeom::Arc {
                        center,
                        radius,
                        a0,
                        sweep,
                    } => {
                        let a = a0 + sweep * (u / (radius * sweep.abs()));
                        let heading = a + std::f64::consts::FRAC_PI_2 * sweep.signum();
                        ((center.0 + radius * a.cos(), center.1 + radius * a.sin()), heading)
                    }
                };
            }
        }
        // s == total wraps to the start.
        self.point_at(0.0)
    }

    /// Nearest-point projection over all segments.
    pub fn project(&self, p: (f64, f64)) -> Projection {
        let mut best = Projection {
            s: 0.0,
            lateral: f64::INFINITY,
            dist: f64::INFINITY,
        };
        for seg in &self.segs {
            if let Some(cand) = project_on_segment(seg, p) {
                if cand.dist < best.dist {
                    best = cand;
                }
            }
        }
        if best.dist.is_infinite() {
            // Point projects past every segment interior (cannot happen on
            // a closed loop, but stay total anyway): fall back to endpoint.
            let (pos, heading) = self.point_at(0.0);
            let dx = p.0 - pos.0;
            let dy = p.1 - pos.1;
            let right = (heading.sin(), -heading.cos());
            best = Projection {
                s: 0.0,
                lateral: dx * right.0 + dy * right.1,
                dist: dx.hypot(dy),
            };
        }
        best
    }
}

pub(crate) fn project_on_segment(seg: &PathSegment, p: (f64, f64)) -> Option<Projection> {
    match seg.geom {
        SegGeom::Straight { start, dir, len } => {
            let dx = p.0 - start.0;
            let dy = p.1 - start.1;
            let t = dx * dir.0 + dy * dir.1;
            if !(0.0..=len).contains(&t) {
                return None;
            }
            let lateral = dx * dir.1 - dy * dir.0; // dot with right normal
            Some(Projection {
                s: seg.s0 + t,
                lateral,
                dist: lateral.abs(),
            })
        }
        SegGeom::Arc {
            center,
            radius,
            a0,
            sweep,
        } => {
            let dx = p.0 - center.0;
            let dy = p.1 - center.1;
            let r = dx.hypot(dy);
            if r < 1e-12 {
                return None;
            }
            let ang = dy.atan2(dx);
            let delta = if sweep >= 0.0 {
                (ang - a0).rem_euclid(std::f64::consts::TAU)
            } else {
                (a0 - ang).rem_euclid(std::f64::consts::TAU)
            };
            if delta > sweep.abs() {
                return None;
            }
            // Right of the path direction is outward on a left turn and
            // inward on a right turn.
            let lateral = if sweep >= 0.0 { r - radius } else { radius - r };
            Some(Projection {
                s: seg.s0 + radius * delta,
                lateral,
                dist: lateral.abs(),
            })
        }
    }
}
