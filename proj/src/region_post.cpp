#include "ptfusion/region_post.hpp"

#include "ptfusion/errors.hpp"

#include <algorithm>
#include <cstddef>
#include <utility>

namespace ptfusion {

std::vector<Blob> label_components(const MotionMask& mask, int connectivity) {
    if (connectivity != 4 && connectivity != 8)
        throw ConfigInvalid("connectivity must be 4 or 8");

    const int w = mask.width;
    const int h = mask.height;
    static constexpr int dx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr int dy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

    std::vector<char> visited(static_cast<std::size_t>(w) * h, 0);
    std::vector<std::pair<int, int>> stack;
    std::vector<Blob> blobs;

    for (int sy = 0; sy < h; ++sy) {
        for (int sx = 0; sx < w; ++sx) {
            std::size_t start = static_cast<std::size_t>(sy) * w + sx;
            if (mask.bits[start] == 0 || visited[start]) continue;

            visited[start] = 1;
            stack.clear();
            stack.emplace_back(sx, sy);
            int min_x = sx, max_x = sx, min_y = sy, max_y = sy;
            std::int64_t sum_x = 0, sum_y = 0;
            int area = 0;

            while (!stack.empty()) {
                auto [px, py] = stack.back();
                stack.pop_back();
                ++area;
                sum_x += px;
                sum_y += py;
                min_x = std::min(min_x, px);
                max_x = std::max(max_x, px);
                min_y = std::min(min_y, py);
                max_y = std::max(max_y, py);
                for (int d = 0; d < connectivity; ++d) {
                    int nx = px + dx[d];
                    int ny = py + dy[d];
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                    std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
                    if (mask.bits[ni] == 0 || visited[ni]) continue;
                    visited[ni] = 1;
                    stack.emplace_back(nx, ny);
                }
            }

            Blob blob;
            blob.area = area;
            blob.x = min_x;
            blob.y = min_y;
            blob.w = max_x - min_x + 1;
            blob.h = max_y - min_y + 1;
            blob.cx = static_cast<double>(sum_x) / area;
            blob.cy = static_cast<double>(sum_y) / area;
            blobs.push_back(blob);
        }
    }

    std::stable_sort(blobs.begin(), blobs.end(),
                     [](const Blob& lhs, const Blob& rhs) { return lhs.area > rhs.area; });
    return blobs;
}

std::vector<Blob> suppress_small(std::vector<Blob> blobs, int min_area) {
    blobs.erase(std::remove_if(blobs.begin(), blobs.end(),
                               [min_area](const Blob& b) { return b.area < min_area; }),
                blobs.end());
    return blobs;
}

std::optional<Blob> primary_target(const std::vector<Blob>& blobs) {
    if (blobs.empty()) return std::nullopt;
    const Blob* best = &blobs.front();
    for (const Blob& b : blobs) {
        if (b.area > best->area || (b.area == best->area && b.x < best->x)) best = &b;
    }
    return *best;
}

void draw_bbox(Frame& frame, const Blob& blob, std::uint8_t intensity) {
    int x0 = std::max(blob.x, 0);
    int y0 = std::max(blob.y, 0);
    int x1 = std::min(blob.x + blob.w - 1, frame.width - 1);
    int y1 = std::min(blob.y + blob.h - 1, frame.height - 1);
    if (x0 > x1 || y0 > y1) return;
    for (int x = x0; x <= x1; ++x) {
        frame.at(y0, x) = intensity;
        frame.at(y1, x) = intensity;
    }
    for (int y = y0; y <= y1; ++y) {
        frame.at(y, x0) = intensity;
        frame.at(y, x1) = intensity;
    }
}

} // namespace ptfusion
