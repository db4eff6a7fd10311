#include "ptfusion/sim.hpp"

#include "ptfusion/errors.hpp"
#include "ptfusion/pir_model.hpp"
#include "ptfusion/region_post.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <optional>
#include <random>

namespace ptfusion {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

// Camera basis in world coordinates (x forward, y right, z up): optical
// axis, image-right, image-down for a head panned right by psi and tilted
// down by tau.
struct CameraBasis {
    Vec3 forward, right, down, origin;
};

CameraBasis camera_basis(const PanTiltState& head, const CameraConfig& cam) {
    double psi = head.pan_deg * kDegToRad;
    double tau = head.tilt_deg * kDegToRad;
    CameraBasis b;
    b.forward = {std::cos(psi) * std::cos(tau), std::sin(psi) * std::cos(tau), -std::sin(tau)};
    b.right = {-std::sin(psi), std::cos(psi), 0.0};
    b.down = {-std::cos(psi) * std::sin(tau), -std::sin(psi) * std::sin(tau), -std::cos(tau)};
    b.origin = {0.0, 0.0, cam.mount_height_m};
    return b;
}

double focal_px(const CameraConfig& cam) {
    return (cam.width / 2.0) / std::tan(cam.fov_deg / 2.0 * kDegToRad);
}

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint8_t background_at(Vec3 ray, const ScenarioConfig& cfg) {
    double az = std::atan2(ray.y, ray.x) / kDegToRad;
    double el = std::atan2(ray.z, std::hypot(ray.x, ray.y)) / kDegToRad;
    auto az_bin = static_cast<std::int64_t>(std::floor(wrap_deg(az) / cfg.render.az_bin_deg));
    auto el_bin = static_cast<std::int64_t>(std::floor(el / cfg.render.el_bin_deg));
    std::uint64_t h = mix64(mix64(cfg.seed ^ static_cast<std::uint64_t>(az_bin)) ^
                            static_cast<std::uint64_t>(el_bin));
    return static_cast<std::uint8_t>(cfg.render.background_low +
                                     static_cast<int>(h % static_cast<std::uint64_t>(
                                                              cfg.render.background_span)));
}

// Camera-facing upright rectangle around the person's base-relative
// position. Invalid (and never hit) when the person is absent or stands on
// the camera axis origin.
struct Billboard {
    bool valid = false;
    Vec3 anchor;         // foot point of the rectangle's center line
    Vec3 normal;         // horizontal, pointing away from the camera
    Vec3 lateral;        // horizontal, along the rectangle's width
    double half_width = 0.0;
    double height = 0.0;
    double range = 0.0;  // (anchor - origin) . normal, > 0
};

Billboard make_billboard(const SceneState& scene, const ScenarioConfig& cfg,
                         const CameraBasis& basis) {
    Billboard bb;
    if (!cfg.person.present) return bb;
    double rx = scene.person_x - scene.base_x;
    double ry = scene.person_y - scene.base_y;
    double d = std::hypot(rx, ry);
    if (d < 1e-9) return bb;
    bb.valid = true;
    bb.anchor = {rx, ry, 0.0};
    bb.normal = {rx / d, ry / d, 0.0};
    bb.lateral = {-bb.normal.y, bb.normal.x, 0.0};
    bb.half_width = cfg.person.width_m / 2.0;
    bb.height = cfg.person.height_m;
    bb.range = dot(bb.anchor - basis.origin, bb.normal);
    return bb;
}

bool billboard_hit(const Billboard& bb, const CameraBasis& basis, Vec3 ray) {
    if (!bb.valid || bb.range <= 0.0) return false;
    double denom = dot(ray, bb.normal);
    if (denom <= 1e-12) return false;
    double t = bb.range / denom;
    Vec3 hit = basis.origin + ray * t;
    if (hit.z < 0.0 || hit.z > bb.height) return false;
    return std::abs(dot(hit - bb.anchor, bb.lateral)) <= bb.half_width;
}

double segment_speed(const PersonConfig& person, int segment) {
    if (person.segment_speeds.empty()) return 0.0;
    auto idx = static_cast<std::size_t>(segment);
    if (idx >= person.segment_speeds.size()) idx = person.segment_speeds.size() - 1;
    return person.segment_speeds[idx];
}

} // namespace

double center_deg_per_px(const CameraConfig& cam) {
    return std::atan2(1.0, focal_px(cam)) / kDegToRad;
}

SceneState initial_scene(const ScenarioConfig& cfg) {
    SceneState state;
    if (!cfg.person.present || cfg.person.waypoints.empty()) return state;
    state.person_x = cfg.person.waypoints.front()[0];
    state.person_y = cfg.person.waypoints.front()[1];
    // Walking speed applies from the first instant; direction comes from the
    // first segment of nonzero length.
    for (std::size_t s = 0; s + 1 < cfg.person.waypoints.size(); ++s) {
        double dx = cfg.person.waypoints[s + 1][0] - cfg.person.waypoints[s][0];
        double dy = cfg.person.waypoints[s + 1][1] - cfg.person.waypoints[s][1];
        double len = std::hypot(dx, dy);
        if (len <= 0.0) continue;
        double v = segment_speed(cfg.person, static_cast<int>(s));
        state.person_vx = dx / len * v;
        state.person_vy = dy / len * v;
        break;
    }
    return state;
}

SceneState step_scene(const ScenarioConfig& cfg, SceneState state, double dt_s) {
    state.time_s += dt_s;
    ++state.tick;
    state.base_x += cfg.robot.base_vx_mps * dt_s;
    state.base_y += cfg.robot.base_vy_mps * dt_s;
    if (!cfg.person.present) return state;

    const auto& pts = cfg.person.waypoints;
    double dt_left = dt_s;
    state.person_vx = 0.0;
    state.person_vy = 0.0;
    while (dt_left > 0.0 && state.segment + 1 < static_cast<int>(pts.size())) {
        const auto& from = pts[static_cast<std::size_t>(state.segment)];
        const auto& to = pts[static_cast<std::size_t>(state.segment) + 1];
        double dx = to[0] - from[0];
        double dy = to[1] - from[1];
        double seg_len = std::hypot(dx, dy);
        if (seg_len <= 0.0) { // zero-length segment: skip without spending time
            ++state.segment;
            state.segment_pos_m = 0.0;
            continue;
        }
        double v = segment_speed(cfg.person, state.segment);
        if (v <= 0.0) { // parked mid-path
            state.person_vx = 0.0;
            state.person_vy = 0.0;
            break;
        }
        double remain = seg_len - state.segment_pos_m;
        double travel = v * dt_left;
        if (travel < remain) {
            state.segment_pos_m += travel;
            state.person_vx = dx / seg_len * v;
            state.person_vy = dy / seg_len * v;
            dt_left = 0.0;
        } else {
            dt_left -= remain / v;
            ++state.segment;
            state.segment_pos_m = 0.0;
        }
    }

    if (state.segment + 1 >= static_cast<int>(pts.size())) {
        // Path finished: stand at the last waypoint.
        state.person_x = pts.back()[0];
        state.person_y = pts.back()[1];
        state.person_vx = 0.0;
        state.person_vy = 0.0;
        return state;
    }
    const auto& from = pts[static_cast<std::size_t>(state.segment)];
    const auto& to = pts[static_cast<std::size_t>(state.segment) + 1];
    double dx = to[0] - from[0];
    double dy = to[1] - from[1];
    double seg_len = std::hypot(dx, dy);
    double frac = seg_len > 0.0 ? state.segment_pos_m / seg_len : 0.0;
    state.person_x = from[0] + dx * frac;
    state.person_y = from[1] + dy * frac;
    return state;
}

ObjectState person_object(const ScenarioConfig& cfg, const SceneState& state) {
    ObjectState obj;
    obj.x_m = state.person_x - state.base_x;
    obj.y_m = state.person_y - state.base_y;
    obj.height_m = cfg.person.height_m;
    obj.speed_mps = std::hypot(state.person_vx - cfg.robot.base_vx_mps,
                               state.person_vy - cfg.robot.base_vy_mps);
    return obj;
}

Frame render_frame(const SceneState& scene, const PanTiltState& head,
                   const ScenarioConfig& cfg) {
    const CameraConfig& cam = cfg.camera;
    Frame frame(cam.width, cam.height);
    frame.index = scene.tick;
    CameraBasis basis = camera_basis(head, cam);
    Billboard bb = make_billboard(scene, cfg, basis);
    double f = focal_px(cam);
    double cx0 = (cam.width - 1) / 2.0;
    double cy0 = (cam.height - 1) / 2.0;
    auto person_value = static_cast<std::uint8_t>(cfg.render.person_intensity);

    for (int row = 0; row < cam.height; ++row) {
        double vr = (row - cy0) / f;
        for (int col = 0; col < cam.width; ++col) {
            double ur = (col - cx0) / f;
            Vec3 ray = basis.forward + basis.right * ur + basis.down * vr;
            frame.at(row, col) =
                billboard_hit(bb, basis, ray) ? person_value : background_at(ray, cfg);
        }
    }
    return frame;
}

MotionMask person_silhouette(const SceneState& scene, const PanTiltState& head,
                             const ScenarioConfig& cfg) {
    const CameraConfig& cam = cfg.camera;
    MotionMask mask(cam.width, cam.height);
    mask.frame_index = scene.tick;
    CameraBasis basis = camera_basis(head, cam);
    Billboard bb = make_billboard(scene, cfg, basis);
    if (!bb.valid) return mask;
    double f = focal_px(cam);
    double cx0 = (cam.width - 1) / 2.0;
    double cy0 = (cam.height - 1) / 2.0;
    for (int row = 0; row < cam.height; ++row) {
        double vr = (row - cy0) / f;
        for (int col = 0; col < cam.width; ++col) {
            double ur = (col - cx0) / f;
            Vec3 ray = basis.forward + basis.right * ur + basis.down * vr;
            if (billboard_hit(bb, basis, ray))
                mask.bits[static_cast<std::size_t>(row) * cam.width + col] = 1;
        }
    }
    return mask;
}

SimLog run_scenario(const ScenarioConfig& cfg, const FrameSink& sink) {
    cfg.validate();
    const double dt = 1.0 / cfg.camera.frame_rate_hz;
    const double deg_per_px = center_deg_per_px(cfg.camera);

    std::mt19937_64 rng(cfg.seed);
    bool lossy = false;
    for (const auto& s : cfg.sensors) lossy = lossy || s.miss_probability > 0.0;

    PanTiltState head;
    head.pan_deg = cfg.controller.initial_pan_deg;
    head.rate_limit_dps = cfg.controller.rate_limit_dps;
    head.pan_min_deg = cfg.controller.pan_min_deg;
    head.pan_max_deg = cfg.controller.pan_max_deg;

    DiffWindow window(cfg.detector.policy);
    SceneState scene = initial_scene(cfg);
    double prev_pan = head.pan_deg;
    std::optional<MotionMask> prev_silhouette;
    // Ticks since the head last moved. Integer-pixel pan compensation leaves
    // residual edges on the textured background, and a compensated frame
    // stays in the three-frame window for two ticks after the slew ends, so
    // the mask is only a trustworthy observation once the two most recent
    // pan deltas were zero. The head therefore works stop-and-stare: slew,
    // hold two ticks, look.
    int steady_ticks = 0;

    SimLog log;
    log.records.reserve(static_cast<std::size_t>(cfg.ticks));
    std::vector<double> gt_cx(static_cast<std::size_t>(cfg.ticks), -1.0);

    for (std::int64_t tick = 0; tick < cfg.ticks; ++tick) {
        if (tick > 0) scene = step_scene(cfg, scene, dt);

        ObjectState obj = person_object(cfg, scene);
        std::vector<ObjectState> objects;
        if (cfg.person.present) objects.push_back(obj);
        PirState pir = sample_array(cfg.sensors, objects, lossy ? &rng : nullptr);

        Frame frame = render_frame(scene, head, cfg);
        double pan_delta = head.pan_deg - prev_pan;
        if (pan_delta != 0.0) {
            window.apply_pan_delta(pan_delta, deg_per_px, cfg.camera.fov_deg);
            steady_ticks = 0;
        } else if (steady_ticks < 2) {
            ++steady_ticks;
        }
        prev_pan = head.pan_deg;
        std::optional<MotionMask> mask = window.push_frame(frame);

        CameraObservation cam;
        cam.width = cfg.camera.width;
        cam.height = cfg.camera.height;
        std::int64_t motion_pixels = 0;
        if (mask) {
            motion_pixels = mask->count();
            if (steady_ticks >= 2) {
                auto blobs = suppress_small(label_components(*mask, cfg.detector.connectivity),
                                            cfg.detector.min_area);
                if (auto target = primary_target(blobs)) {
                    cam.found = true;
                    cam.cx = target->cx;
                    cam.cy = target->cy;
                }
            }
        }

        MotionMask silhouette = person_silhouette(scene, head, cfg);
        std::int64_t gt_pixels = 0;
        if (prev_silhouette) {
            for (std::size_t i = 0; i < silhouette.bits.size(); ++i)
                gt_pixels += silhouette.bits[i] ^ prev_silhouette->bits[i];
        }
        std::int64_t gt_on = 0;
        double gt_col_sum = 0.0;
        for (std::size_t i = 0; i < silhouette.bits.size(); ++i)
            if (silhouette.bits[i]) {
                ++gt_on;
                gt_col_sum += static_cast<double>(i % static_cast<std::size_t>(cfg.camera.width));
            }
        if (gt_on > 0) gt_cx[static_cast<std::size_t>(tick)] = gt_col_sum / static_cast<double>(gt_on);
        prev_silhouette = std::move(silhouette);

        FusionCommand cmd = decide(pir, cam, head);
        if (sink) sink(tick, frame, mask ? &*mask : nullptr);

        TickRecord rec;
        rec.tick = tick;
        rec.time_s = tick * dt;
        rec.person_x = obj.x_m;
        rec.person_y = obj.y_m;
        rec.person_speed = obj.speed_mps;
        rec.infer1 = pir.infer1;
        rec.infer2 = pir.infer2;
        rec.infer3 = pir.infer3;
        rec.cam_found = cam.found;
        rec.cx = cam.cx;
        rec.cy = cam.cy;
        rec.motion_pixels = motion_pixels;
        rec.gt_motion_pixels = gt_pixels;
        rec.pan_deg = head.pan_deg;
        rec.tilt_deg = head.tilt_deg;
        rec.threshold = mask ? window.last_threshold() : 0;
        rec.rule_index = cmd.rule_index;
        rec.action = cmd.action;
        log.records.push_back(rec);

        if (cmd.action == Action::CameraTracking && cam.found)
            head = apply_command(head, tracking_command(cam, head, cfg.controller.gains), dt);
        else
            head = apply_command(head, cmd, dt);
    }

    SimSummary& sum = log.summary;
    sum.ticks = cfg.ticks;
    double motion_total = 0.0;
    std::int64_t locked = 0;
    double lo = cfg.camera.width / 3.0;
    double hi = 2.0 * cfg.camera.width / 3.0;
    for (const TickRecord& rec : log.records) {
        motion_total += static_cast<double>(rec.motion_pixels);
        if (sum.first_pir_tick < 0 && (rec.infer1 || rec.infer2 || rec.infer3))
            sum.first_pir_tick = rec.tick;
        if (sum.first_pir_tick >= 0 && sum.first_found_tick < 0 && rec.cam_found)
            sum.first_found_tick = rec.tick;
        // Locked = the head is pointed well enough that the person's true
        // silhouette centroid sits in the central third. Scored from ground
        // truth so the stop-and-stare duty cycle does not dilute the metric.
        double gcx = gt_cx[static_cast<std::size_t>(rec.tick)];
        if (sum.first_found_tick >= 0 && rec.tick >= sum.first_found_tick &&
            gcx >= lo && gcx <= hi)
            ++locked;
    }
    sum.mean_motion_pixels = cfg.ticks > 0 ? motion_total / static_cast<double>(cfg.ticks) : 0.0;
    if (sum.first_pir_tick >= 0 && sum.first_found_tick >= 0)
        sum.time_to_acquire_s = static_cast<double>(sum.first_found_tick - sum.first_pir_tick) * dt;
    if (sum.first_found_tick >= 0) {
        auto remaining = static_cast<double>(cfg.ticks - sum.first_found_tick);
        sum.lock_fraction = remaining > 0.0 ? static_cast<double>(locked) / remaining : 0.0;
    }
    return log;
}

namespace {

const char* action_name(Action action) {
    switch (action) {
    case Action::CameraTracking: return "CameraTracking";
    case Action::TurnRight: return "TurnRight";
    case Action::TurnLeft: return "TurnLeft";
    case Action::TurnToZero: return "TurnToZero";
    }
    return "?";
}

} // namespace

std::string SimLog::csv() const {
    std::string out = "tick,time_s,person_x,person_y,person_speed,infer1,infer2,infer3,"
                      "cam_found,cx,cy,motion_pixels,gt_motion_pixels,pan_deg,tilt_deg,"
                      "threshold,rule_index,action\n";
    char line[512];
    for (const TickRecord& r : records) {
        std::snprintf(line, sizeof line,
                      "%lld,%.6f,%.6f,%.6f,%.6f,%d,%d,%d,%d,%.3f,%.3f,%lld,%lld,%.4f,%.4f,"
                      "%d,%d,%s\n",
                      static_cast<long long>(r.tick), r.time_s, r.person_x, r.person_y,
                      r.person_speed, r.infer1 ? 1 : 0, r.infer2 ? 1 : 0, r.infer3 ? 1 : 0,
                      r.cam_found ? 1 : 0, r.cx, r.cy, static_cast<long long>(r.motion_pixels),
                      static_cast<long long>(r.gt_motion_pixels), r.pan_deg, r.tilt_deg,
                      r.threshold, r.rule_index, action_name(r.action));
        out += line;
    }
    return out;
}

std::string SimLog::summary_text() const {
    char line[320];
    std::snprintf(line, sizeof line,
                  "ticks=%lld first_pir_tick=%lld first_found_tick=%lld "
                  "time_to_acquire=%.4f lock_fraction=%.4f mean_motion_pixels=%.2f",
                  static_cast<long long>(summary.ticks),
                  static_cast<long long>(summary.first_pir_tick),
                  static_cast<long long>(summary.first_found_tick), summary.time_to_acquire_s,
                  summary.lock_fraction, summary.mean_motion_pixels);
    return line;
}

} // namespace ptfusion
