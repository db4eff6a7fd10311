#ifndef PTFUSION_REGION_POST_HPP
#define PTFUSION_REGION_POST_HPP

#include "ptfusion/frame.hpp"
#include "ptfusion/temporal_diff.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ptfusion {

// One connected region of a motion mask. x/y/w/h is the bounding box in
// pixel coordinates (x = column, y = row); cx/cy is the area centroid.
struct Blob {
    int area = 0;
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
    double cx = 0.0;
    double cy = 0.0;
};

// Maximal connected components of the mask's 1-bits, sorted by descending
// area (scan order breaks ties). connectivity must be 4 or 8; default 8
// because difference silhouettes are thin and fragment under 4-connectivity.
// Throws ConfigInvalid on any other connectivity.
std::vector<Blob> label_components(const MotionMask& mask, int connectivity = 8);

// Drops blobs with area < min_area, preserving order.
std::vector<Blob> suppress_small(std::vector<Blob> blobs, int min_area);

// Largest blob, ties broken by leftmost bounding box; empty input -> nothing.
std::optional<Blob> primary_target(const std::vector<Blob>& blobs);

// Burns the blob's bounding box outline into the frame.
void draw_bbox(Frame& frame, const Blob& blob, std::uint8_t intensity = 255);

// Default small-blob cutoff at 320x240: well under a person at any
// simulated range, big enough to drop residual shadow flecks. Tunable.
inline constexpr int kDefaultMinArea = 15;

} // namespace ptfusion

#endif
