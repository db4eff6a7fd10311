#ifndef PTFUSION_PIR_MODEL_HPP
#define PTFUSION_PIR_MODEL_HPP

#include <optional>
#include <random>
#include <vector>

namespace ptfusion {

// Detection envelope: a near box (full height, short range), a far box
// (reduced height, full range), and a linear height taper between them.
struct ZoneEnvelope {
    double near_range_m = 3.0;
    double near_height_m = 2.5;
    double far_range_m = 12.0; // also the sensor's maximum range
    double far_height_m = 1.5;
};

// A: far box. B: tapered region between the boxes. C: near box.
enum class Zone { A, B, C };

enum class LedColor { red, blue };

struct PirSensorConfig {
    double axis_deg = 0.0;        // sector center bearing in the robot frame
    double half_angle_deg = 60.0; // sector = [axis - half, axis + half)
    ZoneEnvelope envelope;
    double min_speed_mps = 0.1;
    double max_speed_mps = 4.0;
    double miss_probability = 0.0; // false-negative rate, 0 = lossless
};

// Planar position in the robot frame (x forward, y rightward), body height,
// and speed as the magnitude of the planar velocity.
struct ObjectState {
    double x_m = 0.0;
    double y_m = 0.0;
    double height_m = 0.0;
    double speed_mps = 0.0;
};

// One synchronous sample of the three-sensor array.
struct PirState {
    bool infer1 = false; // front
    bool infer2 = false; // left
    bool infer3 = false; // right
};

// Wraps an angle into [-180, 180).
double wrap_deg(double angle_deg);

// Bearing of a robot-frame point, positive toward the right; in [-180, 180).
double bearing_deg(double x_m, double y_m);

// C when inside the near box; A when under the far box (and not C); B when
// between the boxes under the tapered height limit; nothing outside.
std::optional<Zone> zone_of(double distance_m, double height_m,
                            const ZoneEnvelope& env = {});

// True iff the object's bearing falls in the sensor's half-open sector, the
// object sits inside some zone, and its speed is within the gate (inclusive).
bool pir_detect(const PirSensorConfig& cfg, const ObjectState& obj);

// Front sensor on axis 0 plus left/right sensors covering [-180, -60) and
// [60, 180): the three sectors tile the full circle with no overlap.
std::vector<PirSensorConfig> default_sensor_layout();

// OR of pir_detect over all objects, per sensor. Exactly 3 configs required
// (BadArraySize otherwise). When rng is given, a true sample drops with the
// sensor's miss probability; without rng sampling is lossless.
PirState sample_array(const std::vector<PirSensorConfig>& sensors,
                      const std::vector<ObjectState>& objects,
                      std::mt19937_64* rng = nullptr);

// red while detecting, blue when idle
LedColor led_color(bool detected);

} // namespace ptfusion

#endif
