//! Special-relativistic bookkeeping for the two detection events.
//!
//! Event A is the absorption at Alice (at rest in the laboratory frame),
//! event B the absorption at Bob, whose absorber may move along the
//! Alice→Bob axis. All transforms are one-dimensional boosts of the
//! (time difference, separation) interval between the two events.
//!
//! Sign conventions: `dt_lab = t_B - t_A`, so positive values mean the
//! detection happened first at Alice; positive absorber velocity means the
//! absorber recedes from the other party.

use thiserror::Error;

use crate::constants::SPEED_OF_LIGHT;

#[derive(Debug, Error, PartialEq)]
pub enum RelativityError {
    #[error("frame velocity {velocity_mps} m/s is not slower than light")]
    SuperluminalVelocity { velocity_mps: f64 },
    #[error("separation must be positive, got {separation_m} m")]
    NonpositiveSeparation { separation_m: f64 },
    #[error("non-finite input: {name}")]
    NonFinite { name: &'static str },
}

/// Joint time ordering of the two measurements, judged by each absorber in
/// its own rest frame.
///
/// `BeforeBefore` means each observer finds its own measurement first;
/// `AfterAfter` means each finds its own measurement last. The mixed cases
/// are the ordinary configurations on which all frames agree about which
/// event came first (`BeforeAfter`: Alice first, `AfterBefore`: Bob first).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderingClass {
    BeforeBefore,
    BeforeAfter,
    AfterBefore,
    AfterAfter,
    /// A frame time difference is exactly zero. Callers decide how to treat
    /// this measure-zero case; the scan simulation treats it as standard QM.
    Simultaneous,
}

impl OrderingClass {
    pub fn label(self) -> &'static str {
        match self {
            OrderingClass::BeforeBefore => "before-before",
            OrderingClass::BeforeAfter => "before-after",
            OrderingClass::AfterBefore => "after-before",
            OrderingClass::AfterAfter => "after-after",
            OrderingClass::Simultaneous => "simultaneous",
        }
    }
}

impl std::fmt::Display for OrderingClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Lab-frame geometry of one photon-pair detection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionGeometry {
    separation_m: f64,
    dt_lab_s: f64,
    v_bob_mps: f64,
    v_alice_mps: f64,
}

impl DetectionGeometry {
    /// `separation_m` is the lab-frame Alice–Bob distance at t = 0,
    /// `dt_lab_s = t_B - t_A`, and the velocities are the signed speeds of
    /// the two absorbers along the Alice→Bob axis (positive = receding).
    pub fn new(
        separation_m: f64,
        dt_lab_s: f64,
        v_bob_mps: f64,
        v_alice_mps: f64,
    ) -> Result<Self, RelativityError> {
        if !(separation_m.is_finite() && dt_lab_s.is_finite()) {
            return Err(RelativityError::NonFinite { name: "geometry" });
        }
        if separation_m <= 0.0 {
            return Err(RelativityError::NonpositiveSeparation { separation_m });
        }
        check_subluminal(v_bob_mps)?;
        check_subluminal(v_alice_mps)?;
        Ok(Self {
            separation_m,
            dt_lab_s,
            v_bob_mps,
            v_alice_mps,
        })
    }

    pub fn separation_m(&self) -> f64 {
        self.separation_m
    }

    pub fn dt_lab_s(&self) -> f64 {
        self.dt_lab_s
    }

    pub fn v_bob_mps(&self) -> f64 {
        self.v_bob_mps
    }

    pub fn v_alice_mps(&self) -> f64 {
        self.v_alice_mps
    }

    /// Detection-time difference in the frame of Bob's absorber.
    ///
    /// `exact` selects the full boost `(δt - vL/c²)/√(1 - v²/c²)`; otherwise
    /// the first-order form `δt - vL/c²` is used. For the wheel speeds of the
    /// experiment (≲ 200 m/s) the two agree to better than one part in 10¹².
    pub fn boost_time_difference(&self, exact: bool) -> f64 {
        boosted_dt(self.dt_lab_s, self.separation_m, self.v_bob_mps, exact)
    }

    /// Width `vL/c²` of the lab-frame δt window inside which the two frames
    /// disagree on the ordering; zero for a non-receding absorber.
    pub fn ordering_window(&self) -> f64 {
        let v = self.v_bob_mps - self.v_alice_mps;
        if v <= 0.0 {
            0.0
        } else {
            v * self.separation_m / (SPEED_OF_LIGHT * SPEED_OF_LIGHT)
        }
    }

    /// Classify the joint ordering: the sign of δt in Alice's rest frame
    /// against the sign of δt′ in Bob's rest frame.
    pub fn classify_ordering(&self) -> OrderingClass {
        let dt_alice = boosted_dt(self.dt_lab_s, self.separation_m, self.v_alice_mps, true);
        let dt_bob = boosted_dt(self.dt_lab_s, self.separation_m, self.v_bob_mps, true);
        if dt_alice == 0.0 || dt_bob == 0.0 {
            return OrderingClass::Simultaneous;
        }
        match (dt_alice > 0.0, dt_bob > 0.0) {
            // Alice sees A first, Bob sees B first: both measure first.
            (true, false) => OrderingClass::BeforeBefore,
            // Both frames agree A came first.
            (true, true) => OrderingClass::BeforeAfter,
            // Both frames agree B came first.
            (false, false) => OrderingClass::AfterBefore,
            // Alice sees B first, Bob sees A first: both measure last.
            (false, true) => OrderingClass::AfterAfter,
        }
    }

    /// Detection-time difference evaluated in an arbitrary frame moving at
    /// `frame_velocity_mps` along the Alice–Bob axis (exact boost).
    pub fn bound_in_frame(&self, frame_velocity_mps: f64) -> Result<f64, RelativityError> {
        check_subluminal(frame_velocity_mps)?;
        Ok(boosted_dt(
            self.dt_lab_s,
            self.separation_m,
            frame_velocity_mps,
            true,
        ))
    }
}

/// Full boost of the event-pair interval: returns `(δt', Δx')` for a frame
/// moving at `v_mps`. Boosting the result by `-v_mps` recovers the input.
pub fn boost_interval(dt_s: f64, dx_m: f64, v_mps: f64) -> Result<(f64, f64), RelativityError> {
    check_subluminal(v_mps)?;
    let beta = v_mps / SPEED_OF_LIGHT;
    let gamma = 1.0 / (1.0 - beta * beta).sqrt();
    let dt = gamma * (dt_s - v_mps * dx_m / (SPEED_OF_LIGHT * SPEED_OF_LIGHT));
    let dx = gamma * (dx_m - v_mps * dt_s);
    Ok((dt, dx))
}

fn boosted_dt(dt_s: f64, dx_m: f64, v_mps: f64, exact: bool) -> f64 {
    let first_order = dt_s - v_mps * dx_m / (SPEED_OF_LIGHT * SPEED_OF_LIGHT);
    if exact {
        let beta = v_mps / SPEED_OF_LIGHT;
        first_order / (1.0 - beta * beta).sqrt()
    } else {
        first_order
    }
}

fn check_subluminal(v_mps: f64) -> Result<(), RelativityError> {
    if !v_mps.is_finite() || v_mps.abs() >= SPEED_OF_LIGHT {
        Err(RelativityError::SuperluminalVelocity {
            velocity_mps: v_mps,
        })
    } else {
        Ok(())
    }
}
