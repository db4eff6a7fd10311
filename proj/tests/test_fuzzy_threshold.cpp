#include "doctest.h"

#include "ptfusion/errors.hpp"
#include "ptfusion/frame.hpp"
#include "ptfusion/fuzzy_threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

using namespace ptfusion;

namespace {

Histogram from_pairs(std::initializer_list<std::pair<int, std::int64_t>> pairs) {
    Histogram h{};
    for (auto [level, count] : pairs) {
        h.bins[static_cast<std::size_t>(level)] = count;
        h.total += count;
    }
    return h;
}

Histogram gaussian_pair(double m1, double s1, double m2, double s2, std::int64_t n = 20000) {
    Histogram h{};
    std::mt19937 rng(1234);
    std::normal_distribution<double> g1(m1, s1), g2(m2, s2);
    for (std::int64_t i = 0; i < n; ++i) {
        double v = (i % 2 == 0) ? g1(rng) : g2(rng);
        int level = std::clamp(static_cast<int>(std::lround(v)), 0, 255);
        ++h.bins[static_cast<std::size_t>(level)];
        ++h.total;
    }
    return h;
}

} // namespace

TEST_CASE("S-shaped membership hits its anchor points") {
    MembershipParams p{0.0, 50.0, 100.0};
    CHECK(mu_B(-10.0, p) == 0.0);
    CHECK(mu_B(0.0, p) == 0.0);
    CHECK(mu_B(25.0, p) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(mu_B(50.0, p) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mu_B(75.0, p) == doctest::Approx(0.875).epsilon(1e-12));
    CHECK(mu_B(100.0, p) == 1.0);
    CHECK(mu_B(140.0, p) == 1.0);
    // complement
    CHECK(mu_W(25.0, p) == doctest::Approx(0.875).epsilon(1e-12));

    SUBCASE("degenerate width collapses to a step at b") {
        MembershipParams step{80.0, 80.0, 80.0};
        CHECK(mu_B(79.9, step) == 0.0);
        CHECK(mu_B(80.0, step) == 1.0); // agrees with the >= 0.5 crisp snap
        CHECK(mu_B(80.1, step) == 1.0);
    }
}

TEST_CASE("membership parameters from a histogram subset") {
    // subset [60,80] has counts 1 and 1 -> b = 70; the far extreme is the
    // occupied level 200, so c = 70 + 130 and a mirrors to -60.
    Histogram h = from_pairs({{60, 1}, {80, 1}, {200, 1}});
    MembershipParams p = membership_params(h, 60, 80);
    CHECK(p.b == doctest::Approx(70.0));
    CHECK(p.c == doctest::Approx(200.0));
    CHECK(p.a == doctest::Approx(-60.0));

    SUBCASE("counts weight the crossover point") {
        Histogram h2 = from_pairs({{60, 3}, {80, 1}, {200, 1}});
        CHECK(membership_params(h2, 60, 80).b == doctest::Approx(65.0));
    }
    SUBCASE("an empty subset is an error") {
        CHECK_THROWS_AS(membership_params(h, 90, 120), EmptySubset);
    }
}

TEST_CASE("fuzziness index closed forms") {
    std::vector<double> maximal(10, 0.5);
    std::vector<double> crisp{0.0, 1.0, 0.0, 1.0, 1.0};
    std::vector<double> quarter(8, 0.25);

    for (int k : {1, 2}) {
        CAPTURE(k);
        CHECK(fuzziness_index(maximal, k) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(fuzziness_index(crisp, k) == doctest::Approx(0.0).epsilon(1e-12));
        // equal distances collapse to 2d for every order
        CHECK(fuzziness_index(quarter, k) == doctest::Approx(0.5).epsilon(1e-12));
    }
    // mixed distances separate the orders: half at d=0.5, half crisp
    std::vector<double> mixed{0.5, 0.5, 1.0, 0.0};
    CHECK(fuzziness_index(mixed, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fuzziness_index(mixed, 2) == doctest::Approx(2.0 * std::sqrt(0.125)).epsilon(1e-12));

    SUBCASE("complement invariance") {
        std::mt19937 rng(9);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> mu(17);
            for (auto& m : mu) m = u(rng);
            std::vector<double> inv(mu.size());
            for (std::size_t i = 0; i < mu.size(); ++i) inv[i] = 1.0 - mu[i];
            for (int k : {1, 2, 3})
                CHECK(fuzziness_index(mu, k) ==
                      doctest::Approx(fuzziness_index(inv, k)).epsilon(1e-9));
        }
    }
    SUBCASE("weighted form reduces to the plain one under equal weights") {
        std::vector<double> mu{0.1, 0.4, 0.8, 0.65};
        std::vector<double> w(4, 3.0);
        for (int k : {1, 2})
            CHECK(fuzziness_index(mu, w, k) ==
                  doctest::Approx(fuzziness_index(mu, k)).epsilon(1e-12));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(fuzziness_index({}, 2), EmptyInput);
        CHECK_THROWS_AS(fuzziness_index(maximal, 0), ConfigInvalid);
        CHECK_THROWS_AS(fuzziness_index(maximal, {1.0, 2.0}, 2), BadArraySize);
    }
}

TEST_CASE("seed regions find the two dominant peaks") {
    SUBCASE("clean delta peaks") {
        Histogram h = from_pairs({{50, 100}, {200, 80}});
        HistogramRegion r = seed_regions(h);
        CHECK(r.x_min == 50);
        CHECK(r.x_max == 200);
        CHECK(r.x_j == 50);
        CHECK(r.x_r == 200);
    }
    SUBCASE("modes with spread still seed at their crests") {
        Histogram h = gaussian_pair(70, 8, 190, 10);
        HistogramRegion r = seed_regions(h);
        CHECK(std::abs(r.x_j - 70) <= 5);
        CHECK(std::abs(r.x_r - 190) <= 5);
    }
    SUBCASE("nearby peaks are one region") {
        Histogram h = from_pairs({{100, 50}, {104, 60}});
        CHECK_THROWS_AS(seed_regions(h), NoContrast);
    }
    SUBCASE("flat or single-level histograms have no contrast") {
        CHECK_THROWS_AS(seed_regions(from_pairs({{128, 500}})), NoContrast);
        Histogram flat{};
        for (int i = 0; i < 256; ++i) {
            flat.bins[static_cast<std::size_t>(i)] = 10;
            flat.total += 10;
        }
        CHECK_THROWS_AS(seed_regions(flat), NoContrast);
    }
}

TEST_CASE("threshold lands in the valley between two modes") {
    struct Pair {
        double m1, s1, m2, s2;
    };
    for (const Pair& p : {Pair{60, 10, 180, 12}, Pair{40, 8, 140, 10}, Pair{90, 12, 210, 9}}) {
        CAPTURE(p.m1);
        CAPTURE(p.m2);
        Histogram h = gaussian_pair(p.m1, p.s1, p.m2, p.s2);
        FuzzinessCurve curve = compute_threshold(h, 2);
        HistogramRegion r = seed_regions(h);
        CHECK(curve.threshold > r.x_j);
        CHECK(curve.threshold < r.x_r);
        // Independent oracle: the valley is the set of minimum-count levels
        // strictly between the two peaks (a tied flat bottom is a run, not a
        // single level). The crossing must land within +/-5 of that set.
        std::uint64_t low = std::numeric_limits<std::uint64_t>::max();
        for (int x = r.x_j + 1; x < r.x_r; ++x)
            low = std::min(low, h.bins[static_cast<std::size_t>(x)]);
        int dist = 256;
        for (int x = r.x_j + 1; x < r.x_r; ++x)
            if (h.bins[static_cast<std::size_t>(x)] == low)
                dist = std::min(dist, std::abs(curve.threshold - x));
        CHECK(dist <= 5);
    }
}

TEST_CASE("a mirror-symmetric histogram splits at the center") {
    Histogram h{};
    auto bump = [&h](int center, std::int64_t peak) {
        for (int d = -6; d <= 6; ++d) {
            std::int64_t c = peak - 10 * std::abs(d);
            h.bins[static_cast<std::size_t>(center + d)] += c;
            h.total += c;
        }
    };
    bump(64, 100);
    bump(191, 100); // 255-64: exact mirror
    FuzzinessCurve curve = compute_threshold(h, 2);
    CHECK(std::abs(curve.threshold - 128) <= 1);
}

TEST_CASE("scaling every count leaves the curve unchanged") {
    Histogram h = gaussian_pair(80, 9, 200, 11, 4000);
    Histogram scaled = h;
    for (auto& b : scaled.bins) b *= 7;
    scaled.total *= 7;

    FuzzinessCurve a = compute_threshold(h, 2);
    FuzzinessCurve b = compute_threshold(scaled, 2);
    CHECK(a.threshold == b.threshold);
    REQUIRE(a.levels == b.levels);
    for (std::size_t i = 0; i < a.levels.size(); ++i) {
        CHECK(a.psi_object[i] == doctest::Approx(b.psi_object[i]).epsilon(1e-12));
        CHECK(a.psi_background[i] == doctest::Approx(b.psi_background[i]).epsilon(1e-12));
    }
}

TEST_CASE("count-weighted mode also yields an in-region threshold") {
    Histogram h = gaussian_pair(70, 10, 190, 10);
    FuzzinessCurve curve = compute_threshold(h, 2, WeightMode::histogram_counts);
    HistogramRegion r = seed_regions(h);
    CHECK(curve.threshold > r.x_j);
    CHECK(curve.threshold < r.x_r);
}
