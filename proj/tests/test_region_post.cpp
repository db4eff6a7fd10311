#include "doctest.h"

#include "ptfusion/errors.hpp"
#include "ptfusion/region_post.hpp"
#include "ptfusion/temporal_diff.hpp"

#include <algorithm>
#include <queue>
#include <random>
#include <vector>

using namespace ptfusion;

namespace {

MotionMask mask_from(int w, int h, std::initializer_list<int> ones) {
    MotionMask m(w, h);
    for (int i : ones) m.bits[static_cast<std::size_t>(i)] = 1;
    return m;
}

// Independent component count + areas via BFS over an int grid.
std::vector<int> oracle_areas(const MotionMask& m, int connectivity) {
    std::vector<int> seen(m.bits.size(), 0);
    std::vector<int> areas;
    for (int start = 0; start < static_cast<int>(m.bits.size()); ++start) {
        if (!m.bits[static_cast<std::size_t>(start)] || seen[static_cast<std::size_t>(start)])
            continue;
        int area = 0;
        std::queue<int> q;
        q.push(start);
        seen[static_cast<std::size_t>(start)] = 1;
        while (!q.empty()) {
            int idx = q.front();
            q.pop();
            ++area;
            int r = idx / m.width, c = idx % m.width;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    if (connectivity == 4 && dr != 0 && dc != 0) continue;
                    int rr = r + dr, cc = c + dc;
                    if (rr < 0 || rr >= m.height || cc < 0 || cc >= m.width) continue;
                    int nidx = rr * m.width + cc;
                    if (m.bits[static_cast<std::size_t>(nidx)] &&
                        !seen[static_cast<std::size_t>(nidx)]) {
                        seen[static_cast<std::size_t>(nidx)] = 1;
                        q.push(nidx);
                    }
                }
            }
        }
        areas.push_back(area);
    }
    std::sort(areas.rbegin(), areas.rend());
    return areas;
}

} // namespace

TEST_CASE("a solid square labels as one blob with exact geometry") {
    MotionMask m(8, 8);
    for (int r = 2; r < 5; ++r)
        for (int c = 2; c < 5; ++c) m.bits[static_cast<std::size_t>(r * 8 + c)] = 1;

    auto blobs = label_components(m);
    REQUIRE(blobs.size() == 1);
    const Blob& b = blobs[0];
    CHECK(b.area == 9);
    CHECK(b.x == 2);
    CHECK(b.y == 2);
    CHECK(b.w == 3);
    CHECK(b.h == 3);
    CHECK(b.cx == doctest::Approx(3.0));
    CHECK(b.cy == doctest::Approx(3.0));
}

TEST_CASE("connectivity decides whether a diagonal chain is one region") {
    MotionMask m = mask_from(4, 4, {0, 5, 10, 15}); // main diagonal
    CHECK(label_components(m, 8).size() == 1);
    CHECK(label_components(m, 4).size() == 4);
    CHECK_THROWS_AS(label_components(m, 6), ConfigInvalid);
}

TEST_CASE("labeling agrees with a BFS oracle on random masks") {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        MotionMask m(16, 16);
        for (auto& bit : m.bits) bit = (rng() % 100 < 35) ? 1 : 0;
        for (int conn : {4, 8}) {
            auto blobs = label_components(m, conn);
            std::vector<int> areas;
            std::int64_t covered = 0;
            for (const Blob& b : blobs) {
                areas.push_back(b.area);
                covered += b.area;
                // every blob fits inside its own bounding box
                CHECK(b.w * b.h >= b.area);
                CHECK(b.cx >= b.x);
                CHECK(b.cx <= b.x + b.w - 1);
            }
            CHECK(covered == m.count());
            CHECK(std::is_sorted(areas.begin(), areas.end(), std::greater<>()));
            CHECK(areas == oracle_areas(m, conn));
        }
    }
}

TEST_CASE("small-blob suppression is a stable order-preserving filter") {
    MotionMask m = mask_from(12, 3, {0, 1, 2, 3, 4, 6, 18, 30, 8, 20});
    auto blobs = label_components(m, 4);
    auto kept = suppress_small(blobs, 3);
    for (const Blob& b : kept) CHECK(b.area >= 3);
    CHECK(kept.size() < blobs.size());
    // idempotent, and a second pass with a laxer cutoff changes nothing
    CHECK(suppress_small(kept, 3).size() == kept.size());
    CHECK(suppress_small(kept, 2).size() == kept.size());
    // boundary: area == min_area survives
    auto exact = suppress_small({Blob{5, 0, 0, 1, 5, 0, 2}}, 5);
    CHECK(exact.size() == 1);
}

TEST_CASE("primary target prefers area, then the leftmost box") {
    Blob left{40, 2, 5, 8, 5, 5.5, 7.0};
    Blob right{40, 9, 1, 8, 5, 12.5, 3.0};
    Blob small{10, 0, 0, 4, 3, 1.0, 1.0};

    auto target = primary_target({small, right, left});
    REQUIRE(target.has_value());
    CHECK(target->x == 2);
    CHECK_FALSE(primary_target({}).has_value());
}

TEST_CASE("bounding boxes draw clipped at the frame edge") {
    Frame f(10, 10, 0);
    draw_bbox(f, Blob{1, 7, 7, 6, 6, 0, 0}, 200); // spills past both edges
    CHECK(f.at(7, 7) == 200);
    CHECK(f.at(7, 9) == 200);
    CHECK(f.at(9, 7) == 200);
    CHECK(f.at(8, 8) == 0); // interior stays untouched
}
