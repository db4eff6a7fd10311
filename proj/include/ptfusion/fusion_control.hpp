#ifndef PTFUSION_FUSION_CONTROL_HPP
#define PTFUSION_FUSION_CONTROL_HPP

#include "ptfusion/pir_model.hpp"

namespace ptfusion {

// Pan-tilt head pose. Positive pan = panned right; TurnRight increases pan.
// Positive tilt = tilted down.
struct PanTiltState {
    double pan_deg = 0.0;
    double tilt_deg = 0.0;
    double rate_limit_dps = 45.0; // stepper slew speed and rate-command cap
    double pan_min_deg = -150.0;
    double pan_max_deg = 150.0;
};

// What the detector reported for one frame. cx/cy are meaningful only when
// found is set.
struct CameraObservation {
    bool found = false;
    double cx = 0.0;
    double cy = 0.0;
    int width = 0;
    int height = 0;
};

enum class Action { CameraTracking, TurnRight, TurnLeft, TurnToZero };

// Chosen action plus the rule that fired, for the decision log. Rules 1-7
// come from the fusion table; 0 marks the two sensor combinations the table
// does not cover (all three, or left+right without front).
struct FusionCommand {
    Action action = Action::TurnToZero;
    int rule_index = 7;
};

// Proportional pan/tilt rates, degrees/second.
struct RateCommand {
    double pan_dps = 0.0;
    double tilt_dps = 0.0;
};

struct TrackingGains {
    double kp = 1.0;
    double deadband_px = 10.0;
};

// Rule table, first match wins: camera contact always tracks (rule 1);
// compound PIR pairs with the front sensor steer before single sensors
// (rules 5, 6 before 2, 3, 4); nothing at all re-centers (rule 7). The two
// uncovered combinations resolve as: all three -> front band (rule 2's
// thresholds), left+right -> turn toward the nearer side band.
FusionCommand decide(const PirState& pir, const CameraObservation& cam,
                     const PanTiltState& state);

// Proportional rates that pull the target centroid toward the image center:
// rate = clamp(kp * error / half_extent, +/-1) * rate_limit, zeroed inside
// the +/-deadband pixel band. Throws NoTarget when the observation is empty.
RateCommand tracking_command(const CameraObservation& cam, const PanTiltState& state,
                             const TrackingGains& gains = {});

// Integrates a fusion action over dt: TurnRight/TurnLeft slew at the rate
// limit, TurnToZero slews toward 0 and stops exactly there, CameraTracking
// holds (rates come separately). Pan is clamped to its limits.
PanTiltState apply_command(PanTiltState state, const FusionCommand& cmd, double dt_s);

// Integrates explicit rates over dt (each capped at the rate limit); pan is
// clamped to its limits.
PanTiltState apply_command(PanTiltState state, const RateCommand& cmd, double dt_s);

} // namespace ptfusion

#endif
