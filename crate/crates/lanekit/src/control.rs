//! Lane-centering controllers: yaw-rate commands and drive-by-wire native
//! steering commands, plus the command watchdog that stops the vehicle when
//! the detector stream goes stale.

use crate::detectors::LaneCenterEstimate;
use crate::error::{LaneError, Result};

/// Planar twist: forward speed and yaw rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistCommand {
    pub linear_v: f64,
    pub yaw_rate: f64,
}

/// Steering-column command: wheel angle (before the steering ratio) and a
/// target speed for the pedal interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeringCommand {
    pub steering_wheel_angle: f64,
    pub target_speed: f64,
}

/// Either command kind, as consumed by the vehicle model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MotionCommand {
    Twist(TwistCommand),
    Steering(SteeringCommand),
}

impl MotionCommand {
    pub fn stop(scheme: ControlScheme) -> Self {
        match scheme {
            ControlScheme::YawRate => MotionCommand::Twist(TwistCommand {
                linear_v: 0.0,
                yaw_rate: 0.0,
            }),
            ControlScheme::DbwSteering => MotionCommand::Steering(SteeringCommand {
                steering_wheel_angle: 0.0,
                target_speed: 0.0,
            }),
        }
    }

    pub fn target_speed(&self) -> f64 {
        match self {
            MotionCommand::Twist(t) => t.linear_v,
            MotionCommand::Steering(s) => s.target_speed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlScheme {
    YawRate,
    DbwSteering,
}

#[derive(Debug, Clone)]
pub struct ControlConfig {
    pub scheme: ControlScheme,
    /// Yaw-rate gain in rad/s per normalized pixel offset.
    pub yaw_gain: f64,
    pub yaw_max: f64,
    /// Dimensionless steering gain applied to the turning angle.
    pub steer_gain: f64,
    /// Steering-wheel to road-wheel ratio.
    pub steering_ratio: f64,
    /// Steering-wheel angle limit in rad.
    pub steer_max: f64,
    /// Commanded cruise speed in m/s.
    pub speed: f64,
    /// Image center column in pixels.
    pub midx: f64,
    pub image_width: f64,
    pub image_height: f64,
    /// Ticks without fresh valid estimates before the watchdog stops the
    /// vehicle.
    pub watchdog_ticks: u64,
}

impl Default for ControlConfig {
    fn default() -> Self {
        Self {
            scheme: ControlScheme::DbwSteering,
            yaw_gain: 0.5,
            yaw_max: 0.8,
            steer_gain: 1.0,
            steering_ratio: 16.0,
            steer_max: 9.6,
            speed: 2.0,
            midx: 320.0,
            image_width: 640.0,
            image_height: 480.0,
            watchdog_ticks: 25,
        }
    }
}

/// yaw_rate = clamp(yaw_gain · (midx − cx) / (width/2), ±yaw_max).
///
/// A lane center left of the image center yields a positive
/// (counter-clockwise) yaw rate.
pub fn yaw_rate_control(est: &LaneCenterEstimate, cfg: &ControlConfig) -> Result<TwistCommand> {
    if !est.valid {
        return Err(LaneError::Parameter(
            "yaw_rate_control requires a valid estimate".into(),
        ));
    }
    let normalized = (cfg.midx - est.cx) / (cfg.image_width / 2.0);
    let yaw_rate = (cfg.yaw_gain * normalized).clamp(-cfg.yaw_max, cfg.yaw_max);
    Ok(TwistCommand {
        linear_v: cfg.speed,
        yaw_rate,
    })
}

/// Turning angle θ = atan2(cx − midx, image_height − cy), converted to a
/// steering-wheel angle −steer_gain · ratio · θ (right turns are negative).
pub fn steering_control(est: &LaneCenterEstimate, cfg: &ControlConfig) -> Result<SteeringCommand> {
    if !est.valid {
        return Err(LaneError::Parameter(
            "steering_control requires a valid estimate".into(),
        ));
    }
    if est.cy >= cfg.image_height {
        return Err(LaneError::Geometry(format!(
            "estimate row {} at or below the image bottom {}",
            est.cy, cfg.image_height
        )));
    }
    let theta = (est.cx - cfg.midx).atan2(cfg.image_height - est.cy);
    let wheel = (-cfg.steer_gain * cfg.steering_ratio * theta).clamp(-cfg.steer_max, cfg.steer_max);
    Ok(SteeringCommand {
        steering_wheel_angle: wheel,
        target_speed: cfg.speed,
    })
}

/// Pass-through below the staleness threshold, full stop above it
/// (strict inequality: age == N still passes through).
pub fn command_watchdog(cmd: MotionCommand, age_ticks: u64, cfg: &ControlConfig) -> MotionCommand {
    if age_ticks > cfg.watchdog_ticks {
        MotionCommand::stop(cfg.scheme)
    } else {
        cmd
    }
}

/// Per-tick control state: hold-last-command on invalid estimates,
/// watchdog stop once the stream has been stale too long.
///
/// "Fresh" means a valid estimate whose tick differs from the previously
/// consumed one, so an asynchronous detector repeating its last completed
/// estimate does not indefinitely pet the watchdog.
#[derive(Debug)]
pub struct ControlLoop {
    cfg: ControlConfig,
    last_cmd: MotionCommand,
    age: u64,
    last_seen_tick: i64,
}

impl ControlLoop {
    pub fn new(cfg: ControlConfig) -> Self {
        let initial = match cfg.scheme {
            ControlScheme::YawRate => MotionCommand::Twist(TwistCommand {
                linear_v: cfg.speed,
                yaw_rate: 0.0,
            }),
            ControlScheme::DbwSteering => MotionCommand::Steering(SteeringCommand {
                steering_wheel_angle: 0.0,
                target_speed: cfg.speed,
            }),
        };
        Self {
            cfg,
            last_cmd: initial,
            age: 0,
            last_seen_tick: i64::MIN,
        }
    }

    pub fn config(&self) -> &ControlConfig {
        &self.cfg
    }

    pub fn config_mut(&mut self) -> &mut ControlConfig {
        &mut self.cfg
    }

    /// Returns the command for this tick and whether the watchdog fired.
    pub fn step(&mut self, est: &LaneCenterEstimate) -> (MotionCommand, bool) {
        if est.valid && est.tick != self.last_seen_tick {
            self.last_seen_tick = est.tick;
            self.age = 0;
            let cmd = match self.cfg.scheme {
                ControlScheme::YawRate => {
                    yaw_rate_control(est, &self.cfg).map(MotionCommand::Twist)
                }
                ControlScheme::DbwSteering => {
                    steering_control(est, &self.cfg).map(MotionCommand::Steering)
                }
            };
            match cmd {
                Ok(c) => self.last_cmd = c,
                Err(_) => {
                    // Geometry rejection (cy at the image bottom): treat as a
                    // missing estimate and hold the last command.
                    self.age = 1;
                }
            }
        } else {
            self.age += 1;
        }
        let fired = self.age > self.cfg.watchdog_ticks;
        (command_watchdog(self.last_cmd, self.age, &self.cfg), fired)
    }
}
