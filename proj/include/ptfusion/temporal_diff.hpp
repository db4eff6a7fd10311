#ifndef PTFUSION_TEMPORAL_DIFF_HPP
#define PTFUSION_TEMPORAL_DIFF_HPP

#include "ptfusion/frame.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

namespace ptfusion {

// Binary difference mask between a consecutive frame pair.
struct DiffMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits; // {0,1}
    std::int64_t frame_prev = 0;    // k-1
    std::int64_t frame_curr = 0;    // k

    DiffMask() = default;
    DiffMask(int w, int h)
        : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}
    bool same_shape(const DiffMask& o) const { return width == o.width && height == o.height; }
};

// Binary mask of the moving areas belonging to one specific frame.
struct MotionMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits; // {0,1}
    std::int64_t frame_index = 0;   // motion of this frame

    MotionMask() = default;
    MotionMask(int w, int h)
        : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}
    std::int64_t count() const;
};

// Per-pixel |current - previous|. Throws DimensionMismatch.
Frame abs_diff(const Frame& current, const Frame& previous);

// Difference values <= th map to 0, everything above to 1.
DiffMask binarize(const Frame& diff, int th);

// AND of two difference masks; the result is the motion of the shared
// middle frame (k-1 of the newer pair).
MotionMask intersect(const DiffMask& d_curr, const DiffMask& d_prev);

// d_curr AND NOT m_prev; set difference isolating motion of the newest frame.
MotionMask subtract(const DiffMask& d_curr, const MotionMask& m_prev);

// Horizontal shift compensating a known pan change. Positive pan_delta
// (panned right) moves content toward column 0; vacated columns take the
// nearest surviving column's values.
Frame compensate_pan(const Frame& frame, double pan_delta_deg, double deg_per_px);

// How each difference frame gets its binarization threshold.
struct ThresholdPolicy {
    enum class Mode { fixed, adaptive };
    Mode mode = Mode::fixed;
    int fixed_th = 25;
    int k_order = 2;    // adaptive: fuzziness index order
    bool freeze = false; // adaptive: compute once, reuse for the whole sequence
};

// Rolling three-frame window. Feed frames in order; from the third frame on
// each push yields the motion mask of the newest frame:
//   D(k)   = binarize(|F(k) - F(k-1)|)
//   D(k-1) = binarize(|F(k-1) - F(k-2)|)
//   M(k-1) = D(k) AND D(k-1)
//   M(k)   = D(k) AND NOT M(k-1)
class DiffWindow {
public:
    explicit DiffWindow(ThresholdPolicy policy = {}) : policy_(policy) {}

    // Shift buffered frames into the camera's new orientation before the
    // next push. A delta beyond half the field of view resets the window
    // instead; differencing across a slew is meaningless.
    void apply_pan_delta(double pan_delta_deg, double deg_per_px, double fov_deg);

    std::optional<MotionMask> push_frame(const Frame& frame);

    // Drops buffered frames (next two pushes warm up again); ordinals keep
    // counting so every emitted mask keeps a unique index.
    void reset();

    // Total frames consumed, resets included.
    std::int64_t frames_seen() const { return next_ordinal_; }

    // Threshold used for the most recent pair, for logging.
    int last_threshold() const { return last_th_; }

private:
    int threshold_for(const Frame& diff);

    ThresholdPolicy policy_;
    std::deque<Frame> frames_; // at most 3, ascending ordinal
    std::optional<DiffMask> prev_diff_;
    std::optional<int> frozen_th_;
    std::int64_t next_ordinal_ = 0;
    int last_th_ = 0;
};

// Mask rendered as a frame (0 -> 0, 1 -> 255) for PGM inspection dumps.
Frame mask_to_frame(const MotionMask& mask);

// Bounding box of the 1-bits: x, y, w, h; all zero for an empty mask.
struct MaskBounds {
    int x = 0, y = 0, w = 0, h = 0;
};
MaskBounds mask_bounds(const MotionMask& mask);

} // namespace ptfusion

#endif
