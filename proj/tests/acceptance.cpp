// Acceptance gate: eight end-to-end checks with pinned tolerances, one
// PASS/FAIL line each. Exits nonzero if any check fails. Oracles here are
// written independently of the library internals on purpose.

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
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

using namespace ptfusion;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
    std::printf("%s  criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass) ++failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------- 1

void criterion_1_mask_algebra() {
    auto t0 = Clock::now();
    std::mt19937 rng(2024);
    auto rand_frame = [&rng] {
        Frame f(8, 8);
        for (auto& px : f.pixels) px = static_cast<std::uint8_t>(rng() & 0xff);
        return f;
    };

    long long mismatches = 0, invariant_breaks = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Frame f0 = rand_frame(), f1 = rand_frame(), f2 = rand_frame();
        int th = static_cast<int>(rng() % 256);

        DiffMask d_prev = binarize(abs_diff(f1, f0), th);
        DiffMask d_curr = binarize(abs_diff(f2, f1), th);
        MotionMask m_prev = intersect(d_curr, d_prev);
        MotionMask m_curr = subtract(d_curr, m_prev);

        for (std::size_t i = 0; i < f0.pixel_count(); ++i) {
            // brute force, straight from the defining equations
            int lo = std::abs(int(f1.pixels[i]) - int(f0.pixels[i])) > th ? 1 : 0;
            int hi = std::abs(int(f2.pixels[i]) - int(f1.pixels[i])) > th ? 1 : 0;
            int want_prev = hi & lo;
            int want_curr = hi & ~want_prev & 1;
            if (m_curr.bits[i] != want_curr || m_prev.bits[i] != want_prev) ++mismatches;

            // the four set-algebra invariants
            if ((m_prev.bits[i] & ~(hi & lo)) != 0) ++invariant_breaks;   // M(k-1) within D∩D
            if ((m_curr.bits[i] | m_prev.bits[i]) != d_curr.bits[i]) ++invariant_breaks;
            if ((m_curr.bits[i] & m_prev.bits[i]) != 0) ++invariant_breaks;
            if (m_curr.bits[i] > d_curr.bits[i]) ++invariant_breaks;      // M(k) within D(k)
        }
    }
    double elapsed = seconds_since(t0);
    char detail[128];
    std::snprintf(detail, sizeof detail, "%lld mismatches, %lld invariant breaks, %.2f s",
                  mismatches, invariant_breaks, elapsed);
    report(1, mismatches == 0 && invariant_breaks == 0 && elapsed < 5.0,
           "mask algebra matches brute force on 1000 random triples", detail);
}

// ---------------------------------------------------------------- 2

void criterion_2_fuzziness_forms() {
    constexpr double tol = 1e-12;
    bool ok = true;
    std::string detail;

    for (int k : {1, 2}) {
        for (int n : {1, 10, 256}) {
            std::vector<double> half(static_cast<std::size_t>(n), 0.5);
            double psi_half = fuzziness_index(half, k);
            if (std::abs(psi_half - 1.0) > tol) {
                ok = false;
                detail = "all-0.5 vector: psi=" + std::to_string(psi_half);
            }
            std::vector<double> crisp(static_cast<std::size_t>(n));
            for (std::size_t i = 0; i < crisp.size(); ++i) crisp[i] = (i % 2) ? 1.0 : 0.0;
            if (fuzziness_index(crisp, k) != 0.0) {
                ok = false;
                detail = "crisp vector: psi != 0";
            }
        }
    }

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> width(0.5, 120.0), center(-50.0, 300.0),
        unit(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        MembershipParams p;
        p.b = center(rng);
        p.c = p.b + width(rng);
        p.a = 2.0 * p.b - p.c;
        if (std::abs(mu_B(p.a, p)) > tol || std::abs(mu_B(p.b, p) - 0.5) > tol ||
            std::abs(mu_B(p.c, p) - 1.0) > tol) {
            ok = false;
            detail = "anchor points broke at b=" + std::to_string(p.b);
            break;
        }
        double x = p.a + (p.c - p.a) * unit(rng) * 1.5 - (p.c - p.a) * 0.25;
        if (std::abs(mu_B(x, p) + mu_W(x, p) - 1.0) > tol) {
            ok = false;
            detail = "complement broke at x=" + std::to_string(x);
            break;
        }
    }
    report(2, ok, "fuzziness closed forms and membership invariants within 1e-12", detail);
}

// ---------------------------------------------------------------- 3

// Two equal-mass Gaussian modes rendered analytically onto the 256 levels.
Histogram analytic_two_gauss(double m1, double s1, double m2, double s2, double mass) {
    constexpr double kRoot2Pi = 2.5066282746310002;
    Histogram h{};
    for (int x = 0; x < 256; ++x) {
        double v1 = mass / (s1 * kRoot2Pi) * std::exp(-0.5 * (x - m1) * (x - m1) / (s1 * s1));
        double v2 = mass / (s2 * kRoot2Pi) * std::exp(-0.5 * (x - m2) * (x - m2) / (s2 * s2));
        auto c = static_cast<std::int64_t>(std::llround(v1 + v2));
        h.bins[static_cast<std::size_t>(x)] = c;
        h.total += c;
    }
    return h;
}

// Brute-force valley oracle: every least-filled level strictly between the
// two mode crests is part of the valley floor (a flat floor is a set of
// levels, not one level); the score is the distance from the threshold to
// the nearest of them.
int valley_gap(const Histogram& h, double m1, double m2, int th) {
    auto argmax_in = [&h](int lo, int hi) {
        int best = lo;
        for (int x = lo; x <= hi; ++x)
            if (h.bins[static_cast<std::size_t>(x)] > h.bins[static_cast<std::size_t>(best)])
                best = x;
        return best;
    };
    int mid = static_cast<int>(std::lround((m1 + m2) / 2.0));
    int p1 = argmax_in(0, mid), p2 = argmax_in(mid, 255);
    std::int64_t least = h.bins[static_cast<std::size_t>(p1)];
    for (int x = p1 + 1; x < p2; ++x)
        least = std::min<std::int64_t>(least, h.bins[static_cast<std::size_t>(x)]);
    int gap = 256;
    for (int x = p1 + 1; x < p2; ++x)
        if (h.bins[static_cast<std::size_t>(x)] == least)
            gap = std::min(gap, std::abs(th - x));
    return gap;
}

void criterion_3_threshold_sanity() {
    auto t0 = Clock::now();
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> mean1(50.0, 100.0), sep(80.0, 130.0), sigma(3.0, 15.0);

    int hits = 0, in_region = 0, worst = 0;
    const int trials = 50;
    for (int trial = 0; trial < trials; ++trial) {
        // Keep the upper mode fully on-scale so its crest is where the
        // sampler put it (m2 <= 205 leaves >= 3.3 sigma of headroom).
        double m1, m2;
        do {
            m1 = mean1(rng);
            m2 = m1 + sep(rng);
        } while (m2 > 205.0);
        double s1 = sigma(rng), s2 = sigma(rng);
        Histogram h = analytic_two_gauss(m1, s1, m2, s2, 100000.0);

        FuzzinessCurve curve = compute_threshold(h, 2);
        HistogramRegion region = seed_regions(h);
        if (curve.threshold > region.x_j && curve.threshold < region.x_r) ++in_region;

        int gap = valley_gap(h, m1, m2, curve.threshold);
        worst = std::max(worst, gap);
        if (gap <= 5) ++hits;
    }

    // mirror-symmetric histogram must split at the center
    Histogram sym{};
    for (int d = -12; d <= 12; ++d) {
        std::int64_t c = 400 - 30 * std::abs(d);
        sym.bins[static_cast<std::size_t>(80 + d)] += c;
        sym.bins[static_cast<std::size_t>(175 + d)] += c; // 255-80 mirrors here
        sym.total += 2 * c;
    }
    int sym_th = compute_threshold(sym, 2).threshold;

    double elapsed = seconds_since(t0);
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "%d/%d within +/-5 of the valley (worst gap %d), %d/%d in region, "
                  "symmetric=%d, %.2f s",
                  hits, trials, worst, in_region, trials, sym_th, elapsed);
    report(3,
           hits * 10 >= trials * 9 && in_region == trials && std::abs(sym_th - 128) <= 1 &&
               elapsed < 10.0,
           "fuzzy threshold tracks the histogram valley", detail);
}

// ---------------------------------------------------------------- 4

// Independent oracle encoded as interval tables rather than branch chains.
struct AngleBand {
    double lo, hi;
    bool lo_in, hi_in;
    Action act;
};

std::vector<AngleBand> rule_bands(bool i1, bool i2, bool i3) {
    constexpr double inf = 1e9;
    const Action R = Action::TurnRight, L = Action::TurnLeft, T = Action::CameraTracking;
    if (i1 && i2 && i3)
        return {{-inf, -45, true, true, R}, {-45, 45, false, false, T}, {45, inf, true, true, L}};
    if (i1 && i2)
        return {{-inf, -90, true, false, R}, {-90, 0, true, true, T}, {0, inf, false, true, L}};
    if (i1 && i3)
        return {{-inf, 0, true, false, R}, {0, 120, true, true, T}, {120, inf, false, true, L}};
    if (i2 && i3)
        return {{-inf, 0, true, false, R}, {0, inf, true, true, L}};
    if (i1)
        return {{-inf, -45, true, true, R}, {-45, 45, false, false, T}, {45, inf, true, true, L}};
    if (i2)
        return {{-inf, -120, true, true, R}, {-120, -60, false, false, T},
                {-60, inf, true, true, L}};
    if (i3)
        return {{-inf, 60, true, true, R}, {60, 120, false, false, T}, {120, inf, true, true, L}};
    return {};
}

void criterion_4_rule_table() {
    long long mismatches = 0, rule1_breaks = 0, rule7_breaks = 0;
    PanTiltState st;
    for (int mask = 0; mask < 16; ++mask) {
        bool found = mask & 8, i1 = mask & 4, i2 = mask & 2, i3 = mask & 1;
        CameraObservation cam;
        cam.found = found;
        cam.width = 320;
        cam.height = 240;
        auto bands = rule_bands(i1, i2, i3);
        for (int step = 0; step <= 600; ++step) {
            st.pan_deg = -150.0 + 0.5 * step;
            Action got = decide(PirState{i1, i2, i3}, cam, st).action;

            Action want = Action::TurnToZero;
            if (found) {
                want = Action::CameraTracking;
            } else {
                for (const AngleBand& b : bands) {
                    bool lo_ok = b.lo_in ? st.pan_deg >= b.lo : st.pan_deg > b.lo;
                    bool hi_ok = b.hi_in ? st.pan_deg <= b.hi : st.pan_deg < b.hi;
                    if (lo_ok && hi_ok) {
                        want = b.act;
                        break;
                    }
                }
            }
            if (got != want) ++mismatches;
            if (found && got != Action::CameraTracking) ++rule1_breaks;
            if (!found && !i1 && !i2 && !i3 && got != Action::TurnToZero) ++rule7_breaks;
        }
    }
    char detail[128];
    std::snprintf(detail, sizeof detail,
                  "%lld mismatches over 9616 inputs, rule1 breaks %lld, rule7 breaks %lld",
                  mismatches, rule1_breaks, rule7_breaks);
    report(4, mismatches == 0 && rule1_breaks == 0 && rule7_breaks == 0,
           "decision table matches the independent band oracle on all inputs", detail);
}

// ---------------------------------------------------------------- 5

void criterion_5_convergence() {
    const double dt = 1.0 / 33.0;
    const int ticks_7s = static_cast<int>(std::ceil(7.0 / dt));
    bool ok = true;
    std::string detail;

    for (int sensor = 0; sensor < 3 && ok; ++sensor) {
        PirState pir;
        pir.infer1 = sensor == 0;
        pir.infer2 = sensor == 1;
        pir.infer3 = sensor == 2;
        CameraObservation blind;

        for (double alpha0 = -150.0; alpha0 <= 150.0 + 1e-9; alpha0 += 2.5) {
            PanTiltState head;
            head.pan_deg = alpha0;
            bool entered = false;
            for (int tick = 0; tick < ticks_7s; ++tick) {
                FusionCommand cmd = decide(pir, blind, head);
                if (cmd.action == Action::CameraTracking) {
                    entered = true;
                } else if (entered) {
                    ok = false;
                    detail = "left the tracking band: sensor " + std::to_string(sensor + 1) +
                             ", alpha0=" + std::to_string(alpha0);
                    break;
                }
                head = apply_command(head, cmd, dt);
            }
            if (!entered && ok) {
                ok = false;
                detail = "never entered the band: sensor " + std::to_string(sensor + 1) +
                         ", alpha0=" + std::to_string(alpha0);
            }
            if (!ok) break;
        }
    }
    report(5, ok, "single-sensor loop reaches its tracking band within 7 s from any start",
           detail);
}

// ---------------------------------------------------------------- 6

void criterion_6_scenarios() {
    ScenarioConfig walker = load_scenario(fs::path(PTFUSION_SCENARIO_DIR) / "front_walker.cfg");
    SimLog wlog = run_scenario(walker);
    bool walker_ok = wlog.summary.first_pir_tick >= 0 && wlog.summary.first_found_tick >= 0 &&
                     wlog.summary.time_to_acquire_s >= 0.0 &&
                     wlog.summary.time_to_acquire_s <= 2.0 &&
                     wlog.summary.lock_fraction >= 0.8;

    ScenarioConfig still = load_scenario(fs::path(PTFUSION_SCENARIO_DIR) / "stationary.cfg");
    SimLog slog = run_scenario(still);
    std::int64_t late_motion = 0;
    for (const TickRecord& r : slog.records)
        if (r.tick >= 2) late_motion += r.motion_pixels; // masks exist from tick 2 on
    bool still_ok = slog.summary.first_pir_tick == -1 && late_motion == 0;

    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "walker: tta=%.3f s lock=%.3f; stationary: first_pir=%lld post-warm-up px=%lld",
                  wlog.summary.time_to_acquire_s, wlog.summary.lock_fraction,
                  static_cast<long long>(slog.summary.first_pir_tick),
                  static_cast<long long>(late_motion));
    report(6, walker_ok && still_ok,
           "front-walker acquires in <=2 s with lock >=0.8; stationary stays silent", detail);
}

// ---------------------------------------------------------------- 7

void criterion_7_throughput() {
    fs::path dir = fs::temp_directory_path() / "ptfusion_acceptance_throughput";
    fs::remove_all(dir);
    fs::create_directories(dir / "frames");

    // 300 frames of a rectangle sweeping over a textured floor: every mask
    // has real work for binarize and labeling
    std::mt19937 rng(5);
    Frame base(320, 240);
    for (auto& px : base.pixels) px = static_cast<std::uint8_t>(40 + (rng() % 8));
    for (int k = 0; k < 300; ++k) {
        Frame f = base;
        int x0 = (k * 2) % 260, y0 = 60 + (k % 40);
        for (int r = y0; r < y0 + 80 && r < f.height; ++r)
            for (int c = x0; c < x0 + 40; ++c) f.at(r, c) = 220;
        char name[32];
        std::snprintf(name, sizeof name, "f_%04d.pgm", k);
        write_pgm(dir / "frames" / name, f);
    }

    std::string cmd = std::string(PTFUSION_CLI_PATH) + " detect " + (dir / "frames").string() +
                      " --th 25 --out " + (dir / "out").string() + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string output;
    if (pipe) {
        char buf[256];
        while (fgets(buf, sizeof buf, pipe)) output += buf;
        pclose(pipe);
    }
    double fps = 0.0;
    if (std::size_t pos = output.find("fps="); pos != std::string::npos)
        fps = std::strtod(output.c_str() + pos + 4, nullptr);
    fs::remove_all(dir);

    char detail[96];
    std::snprintf(detail, sizeof detail, "measured %.0f fps over 300 frames at 320x240", fps);
    report(7, fps >= 33.0, "detect pipeline sustains >=33 fps single-threaded", detail);
}

// ---------------------------------------------------------------- 8

void criterion_8_zone_points() {
    bool ok = zone_of(10.0, 1.0) == Zone::A && zone_of(2.0, 2.0) == Zone::C &&
              !zone_of(13.0, 1.0).has_value() && !zone_of(13.0, 2.4).has_value();

    PirSensorConfig front; // dead-ahead sector, default envelope and gate
    ObjectState slow{5.0, 0.0, 1.7, 0.05};
    ObjectState fast{5.0, 0.0, 1.7, 5.0};
    ObjectState walking{5.0, 0.0, 1.7, 1.0};
    ok = ok && !pir_detect(front, slow) && !pir_detect(front, fast) &&
         pir_detect(front, walking);

    report(8, ok, "zone point checks and speed gate behave exactly as specified", "");
}

} // namespace

int main() {
    criterion_1_mask_algebra();
    criterion_2_fuzziness_forms();
    criterion_3_threshold_sanity();
    criterion_4_rule_table();
    criterion_5_convergence();
    criterion_6_scenarios();
    criterion_7_throughput();
    criterion_8_zone_points();

    if (failures == 0) {
        std::printf("all 8 acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria FAILED\n", failures);
    return 1;
}
