#ifndef PTFUSION_SIM_HPP
#define PTFUSION_SIM_HPP

#include "ptfusion/frame.hpp"
#include "ptfusion/fusion_control.hpp"
#include "ptfusion/scenario.hpp"
#include "ptfusion/temporal_diff.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ptfusion {

// World state of one tick. The world frame coincides with the robot frame
// at start; the base may drift if a base velocity is configured.
struct SceneState {
    std::int64_t tick = 0;
    double time_s = 0.0;
    double person_x = 0.0;
    double person_y = 0.0;
    double person_vx = 0.0;
    double person_vy = 0.0;
    int segment = 0;           // waypoint segment the person is on
    double segment_pos_m = 0.0; // distance walked into that segment
    double base_x = 0.0;
    double base_y = 0.0;
};

// Person placed at the first waypoint, walking into the first segment.
SceneState initial_scene(const ScenarioConfig& cfg);

// Advances the person along the waypoint path at the per-segment speeds
// (continuing onto the next segment mid-step) and drifts the base.
SceneState step_scene(const ScenarioConfig& cfg, SceneState state, double dt_s);

// The person as the PIR array sees them: base-relative position, body
// height, speed relative to the base.
ObjectState person_object(const ScenarioConfig& cfg, const SceneState& state);

// Pinhole render: seeded panoramic background cells plus the person as an
// upright camera-facing rectangle of uniform intensity. Deterministic.
Frame render_frame(const SceneState& scene, const PanTiltState& head,
                   const ScenarioConfig& cfg);

// Ground-truth person pixels of the same view, for scoring only.
MotionMask person_silhouette(const SceneState& scene, const PanTiltState& head,
                             const ScenarioConfig& cfg);

// Angle subtended by one pixel at the image center.
double center_deg_per_px(const CameraConfig& cam);

struct TickRecord {
    std::int64_t tick = 0;
    double time_s = 0.0;
    double person_x = 0.0;
    double person_y = 0.0;
    double person_speed = 0.0;
    bool infer1 = false;
    bool infer2 = false;
    bool infer3 = false;
    bool cam_found = false; // observation offered to fusion; forced false
                            // until the head has been still for two ticks,
                            // while compensated frames drain from the window
    double cx = 0.0;
    double cy = 0.0;
    std::int64_t motion_pixels = 0;
    std::int64_t gt_motion_pixels = 0; // silhouette symmetric difference
    double pan_deg = 0.0;
    double tilt_deg = 0.0;
    int threshold = 0;
    int rule_index = 7;
    Action action = Action::TurnToZero;
};

struct SimSummary {
    std::int64_t ticks = 0;
    std::int64_t first_pir_tick = -1;   // -1 = never
    std::int64_t first_found_tick = -1; // -1 = never
    double time_to_acquire_s = -1.0;    // first PIR trigger -> first camera fix
    double lock_fraction = 0.0; // ticks whose ground-truth person centroid
                                // lies in the central third, from the first
                                // fix on (pointing quality, scored from the
                                // independent silhouette path)
    double mean_motion_pixels = 0.0;
};

struct SimLog {
    std::vector<TickRecord> records;
    SimSummary summary;

    std::string csv() const;          // one row per tick, header included
    std::string summary_text() const; // single "key=value ..." line
};

// Receives every rendered frame and, once warmed up, the tick's motion mask.
using FrameSink = std::function<void(std::int64_t tick, const Frame& frame,
                                     const MotionMask* mask)>;

// Closed loop over cfg.ticks: step scene, sample PIR, render, difference
// (pan-compensated), post-treat, fuse, slew. Deterministic for a given
// config, seed included. Integer-pixel compensation cannot fully align the
// textured background while the head turns, so the camera observation is
// treated as not-found until the head has been still for two consecutive
// ticks; the loop settles targets by alternating short slews with stares.
SimLog run_scenario(const ScenarioConfig& cfg, const FrameSink& sink = {});

} // namespace ptfusion

#endif
