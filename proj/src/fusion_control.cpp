#include "ptfusion/fusion_control.hpp"

#include "ptfusion/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ptfusion {

FusionCommand decide(const PirState& pir, const CameraObservation& cam,
                     const PanTiltState& state) {
    if (cam.found) return {Action::CameraTracking, 1};

    const double a = state.pan_deg;
    const bool i1 = pir.infer1, i2 = pir.infer2, i3 = pir.infer3;

    if (i1 && i2 && i3) { // uncovered combination: the front sensor wins
        if (a <= -45.0) return {Action::TurnRight, 0};
        if (a >= 45.0) return {Action::TurnLeft, 0};
        return {Action::CameraTracking, 0};
    }
    if (i1 && i2) { // rule 5
        if (a < -90.0) return {Action::TurnRight, 5};
        if (a > 0.0) return {Action::TurnLeft, 5};
        return {Action::CameraTracking, 5};
    }
    if (i1 && i3) { // rule 6 (left threshold 120 as printed, not 60)
        if (a < 0.0) return {Action::TurnRight, 6};
        if (a > 120.0) return {Action::TurnLeft, 6};
        return {Action::CameraTracking, 6};
    }
    if (i2 && i3) { // uncovered combination: turn toward the nearer side
        return {a < 0.0 ? Action::TurnRight : Action::TurnLeft, 0};
    }
    if (i1) { // rule 2
        if (a <= -45.0) return {Action::TurnRight, 2};
        if (a >= 45.0) return {Action::TurnLeft, 2};
        return {Action::CameraTracking, 2};
    }
    if (i2) { // rule 3
        if (a <= -120.0) return {Action::TurnRight, 3};
        if (a >= -60.0) return {Action::TurnLeft, 3};
        return {Action::CameraTracking, 3};
    }
    if (i3) { // rule 4
        if (a <= 60.0) return {Action::TurnRight, 4};
        if (a >= 120.0) return {Action::TurnLeft, 4};
        return {Action::CameraTracking, 4};
    }
    return {Action::TurnToZero, 7};
}

RateCommand tracking_command(const CameraObservation& cam, const PanTiltState& state,
                             const TrackingGains& gains) {
    if (!cam.found) throw NoTarget("no camera target to track");

    const double limit = state.rate_limit_dps;
    auto axis_rate = [&](double coord, int extent) {
        double center = (extent - 1) / 2.0;
        double error = coord - center;
        if (std::abs(error) <= gains.deadband_px) return 0.0;
        return std::clamp(gains.kp * error / center * limit, -limit, limit);
    };

    RateCommand cmd;
    cmd.pan_dps = axis_rate(cam.cx, cam.width);
    cmd.tilt_dps = axis_rate(cam.cy, cam.height);
    return cmd;
}

namespace {

double clamp_pan(const PanTiltState& state, double pan_deg) {
    return std::clamp(pan_deg, state.pan_min_deg, state.pan_max_deg);
}

} // namespace

PanTiltState apply_command(PanTiltState state, const FusionCommand& cmd, double dt_s) {
    const double step = state.rate_limit_dps * dt_s;
    switch (cmd.action) {
    case Action::TurnRight:
        state.pan_deg += step;
        break;
    case Action::TurnLeft:
        state.pan_deg -= step;
        break;
    case Action::TurnToZero:
        if (std::abs(state.pan_deg) <= step)
            state.pan_deg = 0.0; // stop at zero, never overshoot
        else
            state.pan_deg -= std::copysign(step, state.pan_deg);
        break;
    case Action::CameraTracking:
        break; // rates arrive via the RateCommand overload; hold otherwise
    }
    state.pan_deg = clamp_pan(state, state.pan_deg);
    return state;
}

PanTiltState apply_command(PanTiltState state, const RateCommand& cmd, double dt_s) {
    const double limit = state.rate_limit_dps;
    state.pan_deg = clamp_pan(state, state.pan_deg + std::clamp(cmd.pan_dps, -limit, limit) * dt_s);
    state.tilt_deg += std::clamp(cmd.tilt_dps, -limit, limit) * dt_s;
    return state;
}

} // namespace ptfusion
