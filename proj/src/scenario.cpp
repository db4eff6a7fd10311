#include "ptfusion/scenario.hpp"

#include "ptfusion/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace ptfusion {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const char* expected) {
    throw ConfigInvalid(key + ": expected " + expected + ", got '" + value + "'");
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) bad_value(key, value, "a number");
        return v;
    } catch (const ConfigInvalid&) {
        throw;
    } catch (const std::exception&) {
        bad_value(key, value, "a number");
    }
}

long long to_int(const std::string& key, const std::string& value) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        bad_value(key, value, "an integer");
    return v;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    bad_value(key, value, "a boolean");
}

std::vector<double> to_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const std::string& item : split(value, ';')) {
        if (item.empty()) bad_value(key, value, "';'-separated numbers");
        out.push_back(to_double(key, item));
    }
    if (out.empty()) bad_value(key, value, "';'-separated numbers");
    return out;
}

std::vector<std::array<double, 2>> to_waypoints(const std::string& key,
                                                const std::string& value) {
    std::vector<std::array<double, 2>> out;
    for (const std::string& pair : split(value, ';')) {
        std::vector<std::string> xy = split(pair, ',');
        if (xy.size() != 2) bad_value(key, value, "'x,y' pairs separated by ';'");
        out.push_back({to_double(key, xy[0]), to_double(key, xy[1])});
    }
    if (out.empty()) bad_value(key, value, "'x,y' pairs separated by ';'");
    return out;
}

void apply_key(ScenarioConfig& cfg, const std::string& section, const std::string& name,
               const std::string& value) {
    const std::string key = section + "." + name;
    if (section == "world") {
        if (name == "ticks") cfg.ticks = to_int(key, value);
        else if (name == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, value));
        else throw ConfigInvalid("unknown key '" + key + "'");
        return;
    }
    if (section == "person") {
        if (name == "present") cfg.person.present = to_bool(key, value);
        else if (name == "waypoints") cfg.person.waypoints = to_waypoints(key, value);
        else if (name == "speeds") cfg.person.segment_speeds = to_double_list(key, value);
        else if (name == "width") cfg.person.width_m = to_double(key, value);
        else if (name == "height") cfg.person.height_m = to_double(key, value);
        else throw ConfigInvalid("unknown key '" + key + "'");
        return;
    }
    if (section == "camera") {
        if (name == "fov_deg") cfg.camera.fov_deg = to_double(key, value);
        else if (name == "width") cfg.camera.width = static_cast<int>(to_int(key, value));
        else if (name == "height") cfg.camera.height = static_cast<int>(to_int(key, value));
        else if (name == "frame_rate_hz") cfg.camera.frame_rate_hz = to_double(key, value);
        else if (name == "mount_height") cfg.camera.mount_height_m = to_double(key, value);
        else throw ConfigInvalid("unknown key '" + key + "'");
        return;
    }
    if (section == "render") {
        if (name == "az_bin_deg") cfg.render.az_bin_deg = to_double(key, value);
        else if (name == "el_bin_deg") cfg.render.el_bin_deg = to_double(key, value);
        else if (name == "background_low")
            cfg.render.background_low = static_cast<int>(to_int(key, value));
        else if (name == "background_span")
            cfg.render.background_span = static_cast<int>(to_int(key, value));
        else if (name == "person_intensity")
            cfg.render.person_intensity = static_cast<int>(to_int(key, value));
        else throw ConfigInvalid("unknown key '" + key + "'");
        return;
    }
    if (section == "controller") {
        if (name == "kp") cfg.controller.gains.kp = to_double(key, value);
        else if (name == "deadband_px") cfg.controller.gains.deadband_px = to_double(key, value);
        else if (name == "rate_limit_dps") cfg.controller.rate_limit_dps = to_double(key, value);
        else if (name == "pan_min_deg") cfg.controller.pan_min_deg = to_double(key, value);
        else if (name == "pan_max_deg") cfg.controller.pan_max_deg = to_double(key, value);
        else if (name == "initial_pan_deg") cfg.controller.initial_pan_deg = to_double(key, value);
        else throw ConfigInvalid("unknown key '" + key + "'");
        return;
    }
    if (section == "detector") {
        if (name == "threshold") {
            if (value == "adaptive") {
                cfg.detector.policy.mode = ThresholdPolicy::Mode::adaptive;
            } else {
                cfg.detector.policy.mode = ThresholdPolicy::Mode::fixed;
                cfg.detector.policy.fixed_th = static_cast<int>(to_int(key, value));
            }
        } else if (name == "fallback_th")
            cfg.detector.policy.fixed_th = static_cast<int>(to_int(key, value));
        else if (name == "k_order") cfg.detector.policy.k_order = static_cast<int>(to_int(key, value));
        else if (name == "freeze_threshold") cfg.detector.policy.freeze = to_bool(key, value);
        else if (name == "min_area") cfg.detector.min_area = static_cast<int>(to_int(key, value));
        else if (name == "connectivity")
            cfg.detector.connectivity = static_cast<int>(to_int(key, value));
        else throw ConfigInvalid("unknown key '" + key + "'");
        return;
    }
    if (section == "sensors") {
        if (name == "axes") {
            std::vector<double> axes = to_double_list(key, value);
            if (axes.size() != 3) bad_value(key, value, "exactly three axis bearings");
            for (std::size_t i = 0; i < 3; ++i) cfg.sensors[i].axis_deg = axes[i];
        } else if (name == "half_angle_deg") {
            double v = to_double(key, value);
            for (auto& s : cfg.sensors) s.half_angle_deg = v;
        } else if (name == "max_range") {
            double v = to_double(key, value);
            for (auto& s : cfg.sensors) s.envelope.far_range_m = v;
        } else if (name == "min_speed") {
            double v = to_double(key, value);
            for (auto& s : cfg.sensors) s.min_speed_mps = v;
        } else if (name == "max_speed") {
            double v = to_double(key, value);
            for (auto& s : cfg.sensors) s.max_speed_mps = v;
        } else if (name == "miss_probability") {
            double v = to_double(key, value);
            for (auto& s : cfg.sensors) s.miss_probability = v;
        } else {
            throw ConfigInvalid("unknown key '" + key + "'");
        }
        return;
    }
    if (section == "robot") {
        if (name == "base_vx") cfg.robot.base_vx_mps = to_double(key, value);
        else if (name == "base_vy") cfg.robot.base_vy_mps = to_double(key, value);
        else throw ConfigInvalid("unknown key '" + key + "'");
        return;
    }
    throw ConfigInvalid("unknown section '[" + section + "]'");
}

} // namespace

std::vector<bool> ScenarioConfig::speeds_in_envelope() const {
    double lo = sensors.empty() ? 0.1 : sensors.front().min_speed_mps;
    double hi = sensors.empty() ? 4.0 : sensors.front().max_speed_mps;
    std::vector<bool> flags;
    flags.reserve(person.segment_speeds.size());
    for (double v : person.segment_speeds) flags.push_back(v >= lo && v <= hi);
    return flags;
}

void ScenarioConfig::validate() const {
    if (ticks < 1) throw ConfigInvalid("world.ticks must be >= 1");
    if (camera.frame_rate_hz <= 0.0) throw ConfigInvalid("camera.frame_rate_hz must be > 0");
    if (camera.fov_deg <= 0.0 || camera.fov_deg >= 180.0)
        throw ConfigInvalid("camera.fov_deg must lie in (0, 180)");
    if (camera.width < 8 || camera.height < 8)
        throw ConfigInvalid("camera.width/camera.height must be at least 8 pixels");
    if (camera.mount_height_m < 0.0) throw ConfigInvalid("camera.mount_height must be >= 0");
    if (person.present) {
        if (person.waypoints.empty()) throw ConfigInvalid("person.waypoints must not be empty");
        if (person.segment_speeds.empty()) throw ConfigInvalid("person.speeds must not be empty");
        for (double v : person.segment_speeds)
            if (v < 0.0) throw ConfigInvalid("person.speeds must be >= 0");
        if (person.width_m <= 0.0) throw ConfigInvalid("person.width must be > 0");
        if (person.height_m <= 0.0) throw ConfigInvalid("person.height must be > 0");
    }
    if (render.az_bin_deg <= 0.0) throw ConfigInvalid("render.az_bin_deg must be > 0");
    if (render.el_bin_deg <= 0.0) throw ConfigInvalid("render.el_bin_deg must be > 0");
    if (render.background_low < 0 || render.background_span < 1 ||
        render.background_low + render.background_span > 256)
        throw ConfigInvalid("render.background_low/background_span must fit in [0, 255]");
    if (render.person_intensity < 0 || render.person_intensity > 255)
        throw ConfigInvalid("render.person_intensity must fit in [0, 255]");
    if (controller.rate_limit_dps <= 0.0)
        throw ConfigInvalid("controller.rate_limit_dps must be > 0");
    if (controller.pan_min_deg >= controller.pan_max_deg)
        throw ConfigInvalid("controller.pan_min_deg must be below controller.pan_max_deg");
    if (controller.initial_pan_deg < controller.pan_min_deg ||
        controller.initial_pan_deg > controller.pan_max_deg)
        throw ConfigInvalid("controller.initial_pan_deg must lie within the pan limits");
    if (controller.gains.deadband_px < 0.0)
        throw ConfigInvalid("controller.deadband_px must be >= 0");
    if (detector.policy.fixed_th < 0 || detector.policy.fixed_th > 255)
        throw ConfigInvalid("detector.threshold must fit in [0, 255]");
    if (detector.policy.k_order < 1) throw ConfigInvalid("detector.k_order must be >= 1");
    if (detector.min_area < 0) throw ConfigInvalid("detector.min_area must be >= 0");
    if (detector.connectivity != 4 && detector.connectivity != 8)
        throw ConfigInvalid("detector.connectivity must be 4 or 8");
    if (sensors.size() != 3) throw ConfigInvalid("sensors: exactly three sensors required");
    for (const PirSensorConfig& s : sensors) {
        if (s.half_angle_deg <= 0.0 || s.half_angle_deg > 90.0)
            throw ConfigInvalid("sensors.half_angle_deg must lie in (0, 90]");
        if (s.envelope.far_range_m <= 0.0) throw ConfigInvalid("sensors.max_range must be > 0");
        if (s.min_speed_mps < 0.0 || s.min_speed_mps >= s.max_speed_mps)
            throw ConfigInvalid("sensors.min_speed must satisfy 0 <= min < max");
        if (s.miss_probability < 0.0 || s.miss_probability > 1.0)
            throw ConfigInvalid("sensors.miss_probability must lie in [0, 1]");
    }
}

ScenarioConfig parse_scenario(std::string_view text) {
    ScenarioConfig cfg;
    std::string section;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string line = raw;
        if (std::size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigInvalid("line " + std::to_string(line_no) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigInvalid("line " + std::to_string(line_no) + ": empty section name");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigInvalid("line " + std::to_string(line_no) + ": expected 'key = value'");
        std::string name = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (name.empty() || value.empty())
            throw ConfigInvalid("line " + std::to_string(line_no) + ": expected 'key = value'");
        if (section.empty())
            throw ConfigInvalid("line " + std::to_string(line_no) + ": key outside any [section]");
        apply_key(cfg, section, name, value);
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigInvalid("cannot open scenario file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

} // namespace ptfusion
