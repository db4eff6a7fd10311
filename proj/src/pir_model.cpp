#include "ptfusion/pir_model.hpp"

#include "ptfusion/errors.hpp"

#include <cmath>
#include <numbers>

namespace ptfusion {

double wrap_deg(double angle_deg) {
    return angle_deg - 360.0 * std::floor((angle_deg + 180.0) / 360.0);
}

double bearing_deg(double x_m, double y_m) {
    return wrap_deg(std::atan2(y_m, x_m) * 180.0 / std::numbers::pi);
}

std::optional<Zone> zone_of(double distance_m, double height_m, const ZoneEnvelope& env) {
    if (distance_m <= env.near_range_m && height_m <= env.near_height_m) return Zone::C;
    if (distance_m > env.far_range_m) return std::nullopt;
    if (distance_m <= env.near_range_m) return std::nullopt; // above the near box
    if (height_m <= env.far_height_m) return Zone::A;
    // Tapered limit: near_height at the near range down to far_height at max
    // range.
    double span = env.far_range_m - env.near_range_m;
    double limit =
        env.near_height_m -
        (distance_m - env.near_range_m) * (env.near_height_m - env.far_height_m) / span;
    if (height_m <= limit) return Zone::B;
    return std::nullopt;
}

bool pir_detect(const PirSensorConfig& cfg, const ObjectState& obj) {
    double distance = std::hypot(obj.x_m, obj.y_m);
    if (!zone_of(distance, obj.height_m, cfg.envelope)) return false;
    double offset = wrap_deg(bearing_deg(obj.x_m, obj.y_m) - cfg.axis_deg);
    if (offset < -cfg.half_angle_deg || offset >= cfg.half_angle_deg) return false;
    return obj.speed_mps >= cfg.min_speed_mps && obj.speed_mps <= cfg.max_speed_mps;
}

std::vector<PirSensorConfig> default_sensor_layout() {
    PirSensorConfig front;
    front.axis_deg = 0.0;
    PirSensorConfig left;
    left.axis_deg = -120.0;
    PirSensorConfig right;
    right.axis_deg = 120.0;
    return {front, left, right};
}

PirState sample_array(const std::vector<PirSensorConfig>& sensors,
                      const std::vector<ObjectState>& objects, std::mt19937_64* rng) {
    if (sensors.size() != 3) throw BadArraySize("the array has exactly three sensors");
    bool hit[3] = {false, false, false};
    for (int s = 0; s < 3; ++s) {
        for (const ObjectState& obj : objects) {
            if (!pir_detect(sensors[s], obj)) continue;
            hit[s] = true;
            break;
        }
        if (hit[s] && rng && sensors[s].miss_probability > 0.0) {
            std::uniform_real_distribution<double> coin(0.0, 1.0);
            if (coin(*rng) < sensors[s].miss_probability) hit[s] = false;
        }
    }
    return PirState{hit[0], hit[1], hit[2]};
}

LedColor led_color(bool detected) {
    return detected ? LedColor::red : LedColor::blue;
}

} // namespace ptfusion
