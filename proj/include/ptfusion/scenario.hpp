#ifndef PTFUSION_SCENARIO_HPP
#define PTFUSION_SCENARIO_HPP

#include "ptfusion/fusion_control.hpp"
#include "ptfusion/pir_model.hpp"
#include "ptfusion/region_post.hpp"
#include "ptfusion/temporal_diff.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

namespace ptfusion {

// Scripted walker: piecewise-linear waypoints with one speed per segment
// (the last speed repeats when the list is short). A single waypoint means
// the person stands still.
struct PersonConfig {
    bool present = true;
    std::vector<std::array<double, 2>> waypoints = {{5.0, 0.0}};
    std::vector<double> segment_speeds = {1.0};
    double width_m = 0.48;
    double height_m = 1.7;
};

struct CameraConfig {
    double fov_deg = 60.0; // horizontal field of view
    int width = 320;
    int height = 240;
    double frame_rate_hz = 33.0;
    double mount_height_m = 0.8;
};

// Background texture: a cylindrical panorama of constant-intensity cells,
// hashed from the seed. Cell edges are sharp on purpose — imperfect pan
// compensation shows up as difference stripes there.
struct RenderConfig {
    double az_bin_deg = 7.5;
    double el_bin_deg = 10.0;
    int background_low = 60;   // darkest cell intensity
    int background_span = 120; // cell intensities in [low, low+span)
    int person_intensity = 30;
};

struct ControllerConfig {
    TrackingGains gains;
    double rate_limit_dps = 45.0;
    double pan_min_deg = -150.0;
    double pan_max_deg = 150.0;
    double initial_pan_deg = 0.0;
};

struct DetectorConfig {
    ThresholdPolicy policy;
    int min_area = kDefaultMinArea;
    int connectivity = 8;
};

// Base-velocity hook; the base stands still by default and frame
// differencing does not compensate translation, only pan.
struct RobotConfig {
    double base_vx_mps = 0.0;
    double base_vy_mps = 0.0;
};

struct ScenarioConfig {
    std::int64_t ticks = 0; // required, >= 1
    std::uint64_t seed = 1;
    PersonConfig person;
    CameraConfig camera;
    RenderConfig render;
    ControllerConfig controller;
    DetectorConfig detector;
    std::vector<PirSensorConfig> sensors = default_sensor_layout();
    RobotConfig robot;

    // Per-segment flag: speed inside the sensors' [min, max] gate. Speeds
    // outside stay legal — that is how the gate itself gets exercised.
    std::vector<bool> speeds_in_envelope() const;

    // Throws ConfigInvalid naming the offending section.key.
    void validate() const;
};

// Key/value text with [section] headers, '#' comments, waypoint pairs as
// "x,y" separated by ';'. Unknown sections or keys are errors.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

} // namespace ptfusion

#endif
