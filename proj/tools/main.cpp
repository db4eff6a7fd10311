#include "CLI11.hpp"

#include "ptfusion/errors.hpp"
#include "ptfusion/frame.hpp"
#include "ptfusion/fusion_control.hpp"
#include "ptfusion/fuzzy_threshold.hpp"
#include "ptfusion/pir_model.hpp"
#include "ptfusion/region_post.hpp"
#include "ptfusion/scenario.hpp"
#include "ptfusion/sim.hpp"
#include "ptfusion/temporal_diff.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace ptfusion;

namespace {

// Exit codes, stable and documented in the README:
//   0 ok, 1 flag usage (CLI library), then the domain codes below.
constexpr int kExitNoInput = 2;      // nothing to process / too few frames
constexpr int kExitBadFile = 3;      // unreadable or malformed input
constexpr int kExitDimensions = 4;   // frame dimensions differ
constexpr int kExitNoContrast = 5;   // threshold undefined for the histogram
constexpr int kExitBadConfig = 6;    // invalid config / inconsistent logs

void prepare_out_dir(const fs::path& dir, bool overwrite) {
    fs::create_directories(dir);
    if (!overwrite && !fs::is_empty(dir))
        throw ConfigInvalid("output directory '" + dir.string() +
                            "' is not empty (use --overwrite)");
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw Error("write failed: " + path.string());
}

std::string format_mask_name(std::int64_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "mask_%06lld.pgm", static_cast<long long>(index));
    return buf;
}

// ---------------------------------------------------------------- detect

struct DetectOptions {
    std::string pattern;
    std::string out_dir = "detect_out";
    bool overwrite = false;
    std::string threshold = "25"; // gray level or "adaptive"
    int k_order = 2;
    bool freeze = false;
    int min_area = kDefaultMinArea;
    int connectivity = 8;
    int workers = 1;
    std::string pan_log; // CSV tick,pan_delta_deg
    double fov_deg = 60.0;
    double deg_per_px = 0.0; // 0 = derive from fov over image width
};

ThresholdPolicy make_policy(const std::string& threshold, int k_order, bool freeze) {
    ThresholdPolicy policy;
    policy.k_order = k_order;
    policy.freeze = freeze;
    if (threshold == "adaptive") {
        policy.mode = ThresholdPolicy::Mode::adaptive;
        return policy;
    }
    try {
        std::size_t used = 0;
        int th = std::stoi(threshold, &used);
        if (used != threshold.size() || th < 0 || th > 255)
            throw std::invalid_argument(threshold);
        policy.mode = ThresholdPolicy::Mode::fixed;
        policy.fixed_th = th;
    } catch (const std::exception&) {
        throw ConfigInvalid("--th expects a gray level in [0,255] or 'adaptive'");
    }
    return policy;
}

std::vector<double> load_pan_deltas(const std::string& path, std::size_t frames) {
    std::vector<double> deltas(frames, 0.0);
    if (path.empty()) return deltas;
    std::ifstream in(path);
    if (!in) throw Error("cannot open pan log: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.rfind("tick", 0) == 0) continue; // header
        long long tick = 0;
        double delta = 0.0;
        if (std::sscanf(line.c_str(), "%lld,%lf", &tick, &delta) != 2)
            throw Error("pan log line " + std::to_string(line_no) + ": expected 'tick,delta'");
        if (tick >= 0 && static_cast<std::size_t>(tick) < frames)
            deltas[static_cast<std::size_t>(tick)] = delta;
    }
    return deltas;
}

// Stateless recomputation of one window emission, bit-identical to the
// sequential DiffWindow: each buffered frame is shifted once per pan step it
// sat through, oldest step first.
MotionMask mask_at(const std::vector<Frame>& frames, const std::vector<double>& deltas,
                   double deg_per_px, std::int64_t k, const ThresholdPolicy& policy,
                   std::optional<int> frozen_th) {
    auto idx = static_cast<std::size_t>(k);
    Frame f_k2 = frames[idx - 2];
    Frame f_k1 = frames[idx - 1];
    if (deltas[idx - 1] != 0.0) f_k2 = compensate_pan(f_k2, deltas[idx - 1], deg_per_px);
    if (deltas[idx] != 0.0) {
        f_k2 = compensate_pan(f_k2, deltas[idx], deg_per_px);
        f_k1 = compensate_pan(f_k1, deltas[idx], deg_per_px);
    }
    const Frame& f_k = frames[idx];

    auto threshold_of = [&](const Frame& diff) {
        if (policy.mode == ThresholdPolicy::Mode::fixed) return policy.fixed_th;
        if (frozen_th) return *frozen_th;
        try {
            return compute_threshold(histogram(diff), policy.k_order).threshold;
        } catch (const NoContrast&) {
            return policy.fixed_th;
        }
    };

    Frame diff_curr = abs_diff(f_k, f_k1);
    DiffMask d_curr = binarize(diff_curr, threshold_of(diff_curr));
    Frame diff_prev = abs_diff(f_k1, f_k2);
    DiffMask d_prev = binarize(diff_prev, threshold_of(diff_prev));
    MotionMask m_prev = intersect(d_curr, d_prev);
    MotionMask m_curr = subtract(d_curr, m_prev);
    m_curr.frame_index = k;
    return m_curr;
}

int run_detect(const DetectOptions& opt) {
    std::vector<fs::path> files = list_frame_files(opt.pattern);
    if (files.size() < 3) {
        std::fprintf(stderr, "detect: need at least 3 frames, pattern matched %zu\n",
                     files.size());
        return kExitNoInput;
    }

    std::vector<Frame> frames;
    frames.reserve(files.size());
    for (const fs::path& file : files) {
        Frame f;
        try {
            f = read_pgm(file);
        } catch (const Error& e) {
            std::fprintf(stderr, "detect: %s: %s\n", file.string().c_str(), e.what());
            return kExitBadFile;
        }
        if (!frames.empty() && !frames.front().same_shape(f)) {
            std::fprintf(stderr, "detect: %s: dimensions %dx%d differ from first frame %dx%d\n",
                         file.string().c_str(), f.width, f.height, frames.front().width,
                         frames.front().height);
            return kExitDimensions;
        }
        f.index = static_cast<std::int64_t>(frames.size());
        frames.push_back(std::move(f));
    }

    ThresholdPolicy policy = make_policy(opt.threshold, opt.k_order, opt.freeze);
    std::vector<double> deltas = load_pan_deltas(opt.pan_log, frames.size());
    double deg_per_px =
        opt.deg_per_px > 0.0 ? opt.deg_per_px : opt.fov_deg / static_cast<double>(frames.front().width);

    prepare_out_dir(opt.out_dir, opt.overwrite);

    std::vector<std::optional<MotionMask>> masks(frames.size());
    auto t0 = std::chrono::steady_clock::now();

    if (opt.workers <= 1) {
        DiffWindow window(policy);
        for (std::size_t i = 0; i < frames.size(); ++i) {
            if (deltas[i] != 0.0) window.apply_pan_delta(deltas[i], deg_per_px, opt.fov_deg);
            masks[i] = window.push_frame(frames[i]);
        }
    } else {
        // Emissions restart after any delta too large to compensate, exactly
        // like the sequential window.
        std::vector<std::int64_t> starts(frames.size(), 0);
        std::int64_t start = 0;
        for (std::size_t i = 0; i < frames.size(); ++i) {
            if (deltas[i] != 0.0 && std::abs(deltas[i]) > opt.fov_deg / 2.0) {
                start = static_cast<std::int64_t>(i);
                deltas[i] = 0.0; // a reset replaces the shift
            }
            starts[i] = start;
        }
        std::optional<int> frozen;
        if (policy.mode == ThresholdPolicy::Mode::adaptive && policy.freeze) {
            // The sequential window freezes on the first emitted pair: the
            // newest diff of the first complete triple.
            for (std::size_t i = 2; i < frames.size(); ++i) {
                auto k = static_cast<std::int64_t>(i);
                if (k - 2 < starts[i]) continue;
                Frame f_k1 = frames[i - 1];
                if (deltas[i] != 0.0) f_k1 = compensate_pan(f_k1, deltas[i], deg_per_px);
                Frame diff = abs_diff(frames[i], f_k1);
                int th = policy.fixed_th;
                try {
                    th = compute_threshold(histogram(diff), policy.k_order).threshold;
                } catch (const NoContrast&) {
                }
                frozen = th;
                break;
            }
        }
        std::vector<std::thread> pool;
        std::size_t n_workers = static_cast<std::size_t>(opt.workers);
        for (std::size_t w = 0; w < n_workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = 2 + w; i < frames.size(); i += n_workers) {
                    auto k = static_cast<std::int64_t>(i);
                    if (k - 2 < starts[i]) continue;
                    masks[i] = mask_at(frames, deltas, deg_per_px, k, policy, frozen);
                }
            });
        }
        for (std::thread& t : pool) t.join();
    }

    // labeling belongs to the measured pipeline; file output does not
    std::vector<std::vector<Blob>> frame_blobs(frames.size());
    for (std::size_t i = 0; i < masks.size(); ++i)
        if (masks[i])
            frame_blobs[i] =
                suppress_small(label_components(*masks[i], opt.connectivity), opt.min_area);

    auto t1 = std::chrono::steady_clock::now();
    double seconds = std::chrono::duration<double>(t1 - t0).count();

    std::string blob_rows = "frame,rank,area,x,y,w,h,cx,cy\n";
    double motion_total = 0.0;
    std::size_t mask_count = 0;
    char row[192];
    for (std::size_t i = 0; i < masks.size(); ++i) {
        if (!masks[i]) continue;
        ++mask_count;
        motion_total += static_cast<double>(masks[i]->count());
        write_pgm(fs::path(opt.out_dir) / format_mask_name(masks[i]->frame_index),
                  mask_to_frame(*masks[i]));
        for (std::size_t rank = 0; rank < frame_blobs[i].size(); ++rank) {
            const Blob& b = frame_blobs[i][rank];
            std::snprintf(row, sizeof row, "%lld,%zu,%d,%d,%d,%d,%d,%.3f,%.3f\n",
                          static_cast<long long>(masks[i]->frame_index), rank, b.area, b.x, b.y,
                          b.w, b.h, b.cx, b.cy);
            blob_rows += row;
        }
    }
    write_text(fs::path(opt.out_dir) / "blobs.csv", blob_rows);

    double fps = seconds > 0.0 ? static_cast<double>(frames.size()) / seconds : 0.0;
    std::printf("frames=%zu masks=%zu mean_motion_pixels=%.2f fps=%.1f\n", frames.size(),
                mask_count, mask_count > 0 ? motion_total / static_cast<double>(mask_count) : 0.0,
                fps);
    return 0;
}

// ------------------------------------------------------------- threshold

struct ThresholdOptions {
    std::string image;
    std::string out_dir = "threshold_out";
    bool overwrite = false;
    int k_order = 2;
    bool count_weighted = false;
};

int run_threshold(const ThresholdOptions& opt) {
    Frame image;
    try {
        image = read_pgm(opt.image);
    } catch (const Error& e) {
        std::fprintf(stderr, "threshold: %s: %s\n", opt.image.c_str(), e.what());
        return kExitBadFile;
    }

    FuzzinessCurve curve;
    try {
        curve = compute_threshold(histogram(image), opt.k_order,
                                  opt.count_weighted ? WeightMode::histogram_counts
                                                     : WeightMode::occupied_levels);
    } catch (const NoContrast& e) {
        std::fprintf(stderr, "threshold: %s\n", e.what());
        return kExitNoContrast;
    }

    prepare_out_dir(opt.out_dir, opt.overwrite);

    std::string csv = "t,psi_object,psi_background,alpha_psi_object\n";
    char row[128];
    for (std::size_t i = 0; i < curve.levels.size(); ++i) {
        std::snprintf(row, sizeof row, "%d,%.9f,%.9f,%.9f\n", curve.levels[i],
                      curve.psi_object[i], curve.psi_background[i],
                      curve.alpha * curve.psi_object[i]);
        csv += row;
    }
    write_text(fs::path(opt.out_dir) / "curve.csv", csv);

    Frame binary(image.width, image.height);
    for (std::size_t i = 0; i < image.pixel_count(); ++i)
        binary.pixels[i] = image.pixels[i] > curve.threshold ? 255 : 0;
    write_pgm(fs::path(opt.out_dir) / "binarized.pgm", binary);

    std::printf("threshold=%d alpha=%.6f candidates=%zu\n", curve.threshold, curve.alpha,
                curve.levels.size());
    return 0;
}

// -------------------------------------------------------------- simulate

struct SimulateOptions {
    std::string config;
    std::string out_dir = "sim_out";
    bool overwrite = false;
    bool dump_frames = false;
    std::int64_t ticks_override = -1;
    long long seed_override = -1;
    // Tunable overrides; the config file is the fallback, flags win.
    std::string th_override;        // gray level or "adaptive"; empty = config
    int k_order_override = -1;
    int min_area_override = -1;
    double kp_override = std::numeric_limits<double>::quiet_NaN();
    double deadband_override = std::numeric_limits<double>::quiet_NaN();
    double rate_limit_override = std::numeric_limits<double>::quiet_NaN();
    std::string pir_axes_override; // "front,left,right" bearings in degrees
};

int run_simulate(const SimulateOptions& opt) {
    ScenarioConfig cfg = load_scenario(opt.config);
    if (opt.ticks_override >= 0) cfg.ticks = opt.ticks_override;
    if (opt.seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(opt.seed_override);
    if (!opt.th_override.empty()) {
        // validated exactly like detect's --th; an adaptive override keeps
        // the config's fallback level
        ThresholdPolicy p = make_policy(opt.th_override, 2, false);
        cfg.detector.policy.mode = p.mode;
        if (p.mode == ThresholdPolicy::Mode::fixed) cfg.detector.policy.fixed_th = p.fixed_th;
    }
    if (opt.k_order_override > 0) cfg.detector.policy.k_order = opt.k_order_override;
    if (opt.min_area_override >= 0) cfg.detector.min_area = opt.min_area_override;
    if (!std::isnan(opt.kp_override)) cfg.controller.gains.kp = opt.kp_override;
    if (!std::isnan(opt.deadband_override))
        cfg.controller.gains.deadband_px = opt.deadband_override;
    if (!std::isnan(opt.rate_limit_override))
        cfg.controller.rate_limit_dps = opt.rate_limit_override;
    if (!opt.pir_axes_override.empty()) {
        double a0 = 0.0, a1 = 0.0, a2 = 0.0;
        char extra = '\0';
        if (std::sscanf(opt.pir_axes_override.c_str(), "%lf,%lf,%lf%c", &a0, &a1, &a2, &extra) !=
            3)
            throw ConfigInvalid("--pir-axes expects three comma-separated bearings");
        cfg.sensors[0].axis_deg = a0;
        cfg.sensors[1].axis_deg = a1;
        cfg.sensors[2].axis_deg = a2;
    }
    cfg.validate();

    prepare_out_dir(opt.out_dir, opt.overwrite);
    fs::path out(opt.out_dir);

    FrameSink sink;
    if (opt.dump_frames) {
        fs::create_directories(out / "frames");
        fs::create_directories(out / "masks");
        sink = [&out](std::int64_t tick, const Frame& frame, const MotionMask* mask) {
            char name[32];
            std::snprintf(name, sizeof name, "frame_%06lld.pgm", static_cast<long long>(tick));
            write_pgm(out / "frames" / name, frame);
            if (mask) write_pgm(out / "masks" / format_mask_name(tick), mask_to_frame(*mask));
        };
    }

    SimLog log = run_scenario(cfg, sink);
    write_text(out / "log.csv", log.csv());
    write_text(out / "summary.txt", log.summary_text() + "\n");
    std::printf("%s\n", log.summary_text().c_str());
    return 0;
}

// ------------------------------------------------------------------ fuse

struct FuseOptions {
    std::string pir_csv;
    std::string camera_csv;
    std::string out_dir = "fuse_out";
    bool overwrite = false;
    double initial_pan_deg = 0.0;
    double rate_hz = 33.0;
    double rate_limit_dps = 45.0;
    int width = 320;
    int height = 240;
};

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        return -1;
    }
};

CsvTable load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open: " + path);
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ss(line);
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (table.columns.empty()) {
            table.columns = cells;
            continue;
        }
        if (cells.size() != table.columns.size())
            throw Error(path + " line " + std::to_string(line_no) + ": expected " +
                        std::to_string(table.columns.size()) + " cells");
        std::vector<double> row;
        row.reserve(cells.size());
        for (const std::string& c : cells) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(c, &used));
                if (used != c.size()) throw std::invalid_argument(c);
            } catch (const std::exception&) {
                throw Error(path + " line " + std::to_string(line_no) +
                            ": not a number: '" + c + "'");
            }
        }
        table.rows.push_back(std::move(row));
    }
    if (table.columns.empty()) throw Error(path + ": empty CSV");
    return table;
}

int run_fuse(const FuseOptions& opt) {
    CsvTable pir_log, cam_log;
    try {
        pir_log = load_csv(opt.pir_csv);
        cam_log = load_csv(opt.camera_csv);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fuse: %s\n", e.what());
        return kExitBadFile;
    }

    int pt = pir_log.column("tick"), p1 = pir_log.column("infer1"),
        p2 = pir_log.column("infer2"), p3 = pir_log.column("infer3");
    int pa = pir_log.column("alpha_deg");
    int ct = cam_log.column("tick"), cf = cam_log.column("found"), cx = cam_log.column("cx"),
        cy = cam_log.column("cy");
    if (pt < 0 || p1 < 0 || p2 < 0 || p3 < 0) {
        std::fprintf(stderr, "fuse: %s needs columns tick,infer1,infer2,infer3\n",
                     opt.pir_csv.c_str());
        return kExitBadFile;
    }
    if (ct < 0 || cf < 0 || cx < 0 || cy < 0) {
        std::fprintf(stderr, "fuse: %s needs columns tick,found,cx,cy\n",
                     opt.camera_csv.c_str());
        return kExitBadFile;
    }
    if (pir_log.rows.size() != cam_log.rows.size()) {
        std::fprintf(stderr, "fuse: row counts differ (%zu PIR vs %zu camera)\n",
                     pir_log.rows.size(), cam_log.rows.size());
        return kExitBadConfig;
    }

    prepare_out_dir(opt.out_dir, opt.overwrite);

    PanTiltState head;
    head.pan_deg = opt.initial_pan_deg;
    head.rate_limit_dps = opt.rate_limit_dps;
    double dt = 1.0 / opt.rate_hz;

    std::string csv = "tick,infer1,infer2,infer3,cam_found,alpha_deg,rule_index,action\n";
    char row[160];
    for (std::size_t i = 0; i < pir_log.rows.size(); ++i) {
        const auto& pr = pir_log.rows[i];
        const auto& cr = cam_log.rows[i];
        auto tick = static_cast<long long>(pr[static_cast<std::size_t>(pt)]);
        auto cam_tick = static_cast<long long>(cr[static_cast<std::size_t>(ct)]);
        if (tick != cam_tick) {
            std::fprintf(stderr, "fuse: tick %lld in %s vs %lld in %s at row %zu\n", tick,
                         opt.pir_csv.c_str(), cam_tick, opt.camera_csv.c_str(), i + 1);
            return kExitBadConfig;
        }
        if (pa >= 0) head.pan_deg = pr[static_cast<std::size_t>(pa)]; // forced replay
        PirState pir{pr[static_cast<std::size_t>(p1)] != 0.0,
                     pr[static_cast<std::size_t>(p2)] != 0.0,
                     pr[static_cast<std::size_t>(p3)] != 0.0};
        CameraObservation cam;
        cam.found = cr[static_cast<std::size_t>(cf)] != 0.0;
        cam.cx = cr[static_cast<std::size_t>(cx)];
        cam.cy = cr[static_cast<std::size_t>(cy)];
        cam.width = opt.width;
        cam.height = opt.height;

        FusionCommand cmd = decide(pir, cam, head);
        const char* action = cmd.action == Action::CameraTracking ? "CameraTracking"
                             : cmd.action == Action::TurnRight    ? "TurnRight"
                             : cmd.action == Action::TurnLeft     ? "TurnLeft"
                                                                  : "TurnToZero";
        std::snprintf(row, sizeof row, "%lld,%d,%d,%d,%d,%.4f,%d,%s\n", tick, pir.infer1,
                      pir.infer2, pir.infer3, cam.found ? 1 : 0, head.pan_deg, cmd.rule_index,
                      action);
        csv += row;

        if (pa < 0) { // integrate only when the pan angle is not scripted
            if (cmd.action == Action::CameraTracking && cam.found)
                head = apply_command(head, tracking_command(cam, head), dt);
            else
                head = apply_command(head, cmd, dt);
        }
    }
    write_text(fs::path(opt.out_dir) / "decisions.csv", csv);
    std::printf("rows=%zu\n", pir_log.rows.size());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"moving-object detection with PIR / pan-tilt sensor fusion"};
    app.require_subcommand(1);

    DetectOptions detect_opt;
    CLI::App* detect = app.add_subcommand(
        "detect", "three-frame difference over a PGM sequence: masks, blobs, summary");
    detect->add_option("pattern", detect_opt.pattern,
                       "PGM files: a directory, or a glob like frames/f_*.pgm")
        ->required();
    detect->add_option("--out", detect_opt.out_dir, "output directory");
    detect->add_flag("--overwrite", detect_opt.overwrite, "reuse a non-empty output directory");
    detect->add_option("--th", detect_opt.threshold, "difference threshold: 0-255 or 'adaptive'");
    detect->add_option("--k-order", detect_opt.k_order, "fuzziness index order")
        ->check(CLI::PositiveNumber);
    detect->add_flag("--freeze", detect_opt.freeze, "compute the adaptive threshold once");
    detect->add_option("--min-area", detect_opt.min_area, "suppress blobs below this area")
        ->check(CLI::NonNegativeNumber);
    detect->add_option("--connectivity", detect_opt.connectivity, "4 or 8")
        ->check(CLI::IsMember({4, 8}));
    detect->add_option("--workers", detect_opt.workers, "parallel frame workers")
        ->check(CLI::PositiveNumber);
    detect->add_option("--pan-log", detect_opt.pan_log, "CSV tick,pan_delta_deg to compensate");
    detect->add_option("--fov", detect_opt.fov_deg, "camera field of view, degrees")
        ->check(CLI::Range(1.0, 179.0));
    detect->add_option("--deg-per-px", detect_opt.deg_per_px,
                       "pan degrees per pixel (default fov/width)");

    ThresholdOptions threshold_opt;
    CLI::App* threshold = app.add_subcommand(
        "threshold", "fuzziness-curve threshold of one PGM: level, curve CSV, binarized image");
    threshold->add_option("image", threshold_opt.image, "input PGM")->required();
    threshold->add_option("--out", threshold_opt.out_dir, "output directory");
    threshold->add_flag("--overwrite", threshold_opt.overwrite,
                        "reuse a non-empty output directory");
    threshold->add_option("--k-order", threshold_opt.k_order, "fuzziness index order")
        ->check(CLI::PositiveNumber);
    threshold->add_flag("--weighted", threshold_opt.count_weighted,
                        "weight the fuzziness sum by histogram counts");

    SimulateOptions simulate_opt;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "closed-loop scenario run: log CSV, summary, optional frame dumps");
    simulate->add_option("config", simulate_opt.config, "scenario config file")->required();
    simulate->add_option("--out", simulate_opt.out_dir, "output directory");
    simulate->add_flag("--overwrite", simulate_opt.overwrite,
                       "reuse a non-empty output directory");
    simulate->add_flag("--dump-frames", simulate_opt.dump_frames,
                       "write per-tick frames and masks");
    simulate->add_option("--ticks", simulate_opt.ticks_override, "override world.ticks");
    simulate->add_option("--seed", simulate_opt.seed_override, "override world.seed");
    simulate->add_option("--th", simulate_opt.th_override,
                         "override detector.threshold: 0-255 or 'adaptive'");
    simulate->add_option("--k-order", simulate_opt.k_order_override,
                         "override detector.k_order")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--min-area", simulate_opt.min_area_override,
                         "override detector.min_area")
        ->check(CLI::NonNegativeNumber);
    simulate->add_option("--kp", simulate_opt.kp_override, "override controller.kp");
    simulate->add_option("--deadband-px", simulate_opt.deadband_override,
                         "override controller.deadband_px")
        ->check(CLI::NonNegativeNumber);
    simulate->add_option("--rate-limit", simulate_opt.rate_limit_override,
                         "override controller.rate_limit_dps")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--pir-axes", simulate_opt.pir_axes_override,
                         "override the three sensor bearings, e.g. 0,-120,120");

    FuseOptions fuse_opt;
    CLI::App* fuse = app.add_subcommand(
        "fuse", "replay the fusion rules over recorded PIR and camera logs");
    fuse->add_option("--pir", fuse_opt.pir_csv, "CSV tick,infer1,infer2,infer3[,alpha_deg]")
        ->required();
    fuse->add_option("--camera", fuse_opt.camera_csv, "CSV tick,found,cx,cy")->required();
    fuse->add_option("--out", fuse_opt.out_dir, "output directory");
    fuse->add_flag("--overwrite", fuse_opt.overwrite, "reuse a non-empty output directory");
    fuse->add_option("--initial-pan", fuse_opt.initial_pan_deg, "starting pan angle, degrees");
    fuse->add_option("--rate", fuse_opt.rate_hz, "log tick rate, Hz")->check(CLI::PositiveNumber);
    fuse->add_option("--rate-limit", fuse_opt.rate_limit_dps, "slew rate, degrees/second")
        ->check(CLI::PositiveNumber);
    fuse->add_option("--width", fuse_opt.width, "image width for tracking commands");
    fuse->add_option("--height", fuse_opt.height, "image height for tracking commands");

    CLI11_PARSE(app, argc, argv);

    try {
        if (detect->parsed()) return run_detect(detect_opt);
        if (threshold->parsed()) return run_threshold(threshold_opt);
        if (simulate->parsed()) return run_simulate(simulate_opt);
        if (fuse->parsed()) return run_fuse(fuse_opt);
    } catch (const ConfigInvalid& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitBadConfig;
    } catch (const DimensionMismatch& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitDimensions;
    } catch (const NoContrast& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitNoContrast;
    } catch (const Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitBadFile;
    } catch (const fs::filesystem_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitBadFile;
    }
    return 0;
}
