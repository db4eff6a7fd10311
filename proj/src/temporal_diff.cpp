#include "ptfusion/temporal_diff.hpp"
#include "ptfusion/errors.hpp"
#include "ptfusion/fuzzy_threshold.hpp"

#include <cmath>
#include <cstdlib>

namespace ptfusion {

std::int64_t MotionMask::count() const {
    std::int64_t n = 0;
    for (std::uint8_t b : bits)
        n += b;
    return n;
}

Frame abs_diff(const Frame& current, const Frame& previous) {
    if (!current.same_shape(previous))
        throw DimensionMismatch("abs_diff: frame shapes differ");
    Frame out(current.width, current.height);
    out.index = current.index;
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
        int d = static_cast<int>(current.pixels[i]) - static_cast<int>(previous.pixels[i]);
        out.pixels[i] = static_cast<std::uint8_t>(d < 0 ? -d : d);
    }
    return out;
}

DiffMask binarize(const Frame& diff, int th) {
    DiffMask mask(diff.width, diff.height);
    mask.frame_curr = diff.index;
    mask.frame_prev = diff.index - 1;
    for (std::size_t i = 0; i < diff.pixels.size(); ++i)
        mask.bits[i] = diff.pixels[i] <= th ? 0 : 1;
    return mask;
}

MotionMask intersect(const DiffMask& d_curr, const DiffMask& d_prev) {
    if (!d_curr.same_shape(d_prev))
        throw DimensionMismatch("intersect: mask shapes differ");
    MotionMask out(d_curr.width, d_curr.height);
    out.frame_index = d_curr.frame_prev;
    for (std::size_t i = 0; i < out.bits.size(); ++i)
        out.bits[i] = d_curr.bits[i] & d_prev.bits[i];
    return out;
}

MotionMask subtract(const DiffMask& d_curr, const MotionMask& m_prev) {
    if (d_curr.width != m_prev.width || d_curr.height != m_prev.height)
        throw DimensionMismatch("subtract: mask shapes differ");
    MotionMask out(d_curr.width, d_curr.height);
    out.frame_index = d_curr.frame_curr;
    for (std::size_t i = 0; i < out.bits.size(); ++i)
        out.bits[i] = d_curr.bits[i] & static_cast<std::uint8_t>(1 - m_prev.bits[i]);
    return out;
}

Frame compensate_pan(const Frame& frame, double pan_delta_deg, double deg_per_px) {
    int shift = static_cast<int>(std::lround(pan_delta_deg / deg_per_px));
    if (shift == 0)
        return frame;
    Frame out(frame.width, frame.height);
    out.index = frame.index;
    for (int r = 0; r < frame.height; ++r) {
        for (int c = 0; c < frame.width; ++c) {
            int src = c + shift; // positive delta: content moves toward column 0
            if (src < 0)
                src = 0;
            else if (src >= frame.width)
                src = frame.width - 1;
            out.at(r, c) = frame.at(r, src);
        }
    }
    return out;
}

void DiffWindow::reset() {
    // Ordinals keep counting across resets so mask labels stay unique.
    frames_.clear();
    prev_diff_.reset();
}

void DiffWindow::apply_pan_delta(double pan_delta_deg, double deg_per_px, double fov_deg) {
    if (std::abs(pan_delta_deg) > fov_deg / 2.0) {
        reset();
        return;
    }
    int shift = static_cast<int>(std::lround(pan_delta_deg / deg_per_px));
    if (shift == 0)
        return;
    for (Frame& f : frames_)
        f = compensate_pan(f, pan_delta_deg, deg_per_px);
    // The cached difference mask was computed in the old orientation; clamp
    // fill makes a shifted mask differ from a mask of shifted frames at the
    // edges, so recompute it on the next push.
    prev_diff_.reset();
}

int DiffWindow::threshold_for(const Frame& diff) {
    if (policy_.mode == ThresholdPolicy::Mode::fixed)
        return policy_.fixed_th;
    if (frozen_th_)
        return *frozen_th_;
    int th = policy_.fixed_th;
    try {
        th = compute_threshold(histogram(diff), policy_.k_order).threshold;
    } catch (const NoContrast&) {
        // Single-peak difference histogram (static scene); keep the fixed Th.
    }
    if (policy_.freeze)
        frozen_th_ = th;
    return th;
}

std::optional<MotionMask> DiffWindow::push_frame(const Frame& frame) {
    if (!frames_.empty() && !frames_.back().same_shape(frame))
        throw DimensionMismatch("push_frame: frame shape differs from buffered frames");

    frames_.push_back(frame);
    std::int64_t k = next_ordinal_++;
    if (frames_.size() > 3)
        frames_.pop_front();
    if (frames_.size() < 3)
        return std::nullopt; // warm-up: two frames cannot bound a middle frame

    const Frame& f_k = frames_[frames_.size() - 1];
    const Frame& f_k1 = frames_[frames_.size() - 2];
    const Frame& f_k2 = frames_[frames_.size() - 3];

    Frame diff_curr = abs_diff(f_k, f_k1);
    int th_curr = threshold_for(diff_curr);
    DiffMask d_curr = binarize(diff_curr, th_curr);
    d_curr.frame_curr = k;
    d_curr.frame_prev = k - 1;
    last_th_ = th_curr;

    if (!prev_diff_) {
        Frame diff_prev = abs_diff(f_k1, f_k2);
        DiffMask d = binarize(diff_prev, threshold_for(diff_prev));
        d.frame_curr = k - 1;
        d.frame_prev = k - 2;
        prev_diff_ = std::move(d);
    }

    MotionMask m_prev = intersect(d_curr, *prev_diff_);
    MotionMask m_curr = subtract(d_curr, m_prev);
    m_curr.frame_index = k;

    prev_diff_ = std::move(d_curr);
    return m_curr;
}

Frame mask_to_frame(const MotionMask& mask) {
    Frame out(mask.width, mask.height);
    out.index = mask.frame_index;
    for (std::size_t i = 0; i < mask.bits.size(); ++i)
        out.pixels[i] = mask.bits[i] ? 255 : 0;
    return out;
}

MaskBounds mask_bounds(const MotionMask& mask) {
    int min_x = mask.width, min_y = mask.height, max_x = -1, max_y = -1;
    for (int r = 0; r < mask.height; ++r) {
        for (int c = 0; c < mask.width; ++c) {
            if (!mask.bits[static_cast<std::size_t>(r) * mask.width + c])
                continue;
            if (c < min_x) min_x = c;
            if (c > max_x) max_x = c;
            if (r < min_y) min_y = r;
            if (r > max_y) max_y = r;
        }
    }
    if (max_x < 0)
        return {};
    return {min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
}

} // namespace ptfusion
