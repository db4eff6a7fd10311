#ifndef PTFUSION_FUZZY_THRESHOLD_HPP
#define PTFUSION_FUZZY_THRESHOLD_HPP

#include "ptfusion/frame.hpp"

#include <vector>

namespace ptfusion {

// S-function parameters. Always a = 2b - c, so b = (a + c) / 2; values are
// gray levels but may leave [0,255] (a goes negative when the background
// tail is long).
struct MembershipParams {
    double a = 0;
    double b = 0;
    double c = 0;
};

// Occupied-range landmarks of a histogram: object seed ends at x_j,
// background seed starts at x_r, the fuzzy region is the open gap between.
struct HistogramRegion {
    int x_min = 0;
    int x_max = 0;
    int x_j = 0;
    int x_r = 0;
};

// Per-candidate fuzziness values across the fuzzy region plus the chosen
// crossing.
struct FuzzinessCurve {
    std::vector<int> levels;
    std::vector<double> psi_object;     // fuzziness of object seed + level t
    std::vector<double> psi_background; // fuzziness of background seed + level t
    double alpha = 1.0;                 // normalization factor for the object curve
    int threshold = 0;
};

// Whether the fuzziness sum runs over occupied levels (one term each) or is
// weighted by histogram counts.
enum class WeightMode { occupied_levels, histogram_counts };

// Quadratic S-curve: 0 below a, rises through 0.5 at b, saturates at c.
// Degenerate c == a collapses to a hard step at b.
double mu_B(double x, const MembershipParams& p);

// Complement membership, 1 - mu_B.
double mu_W(double x, const MembershipParams& p);

// Fits S-function parameters to the histogram subset [p, q]:
//   b = count-weighted mean gray level of the subset
//   c = b + max(|b - x_max|, |b - x_min|)   (x_min/x_max of the whole image)
//   a = 2b - c
// Throws EmptySubset if no occupied bin lies in [p, q].
MembershipParams membership_params(const Histogram& hist, int p, int q);

// Linear index of fuzziness: distance from the membership vector to its
// nearest crisp set (mu >= 0.5 snaps to 1), normalized into [0,1]:
//   psi = (2 / n^(1/k)) * (sum |mu_i - crisp_i|^k)^(1/k)
// Throws EmptyInput on an empty vector.
double fuzziness_index(const std::vector<double>& memberships, int k_order);
double fuzziness_index(const std::vector<double>& memberships,
                       const std::vector<double>& weights, int k_order);

// Object/background seed peaks: the two dominant local maxima of the
// 5-bin-smoothed histogram at least 10 levels apart. Throws NoContrast when
// the histogram has fewer than 2 occupied levels or no such peak pair.
HistogramRegion seed_regions(const Histogram& hist);

// Threshold = discrete crossing of the normalized fuzziness curves. Every
// candidate t in the open fuzzy region is tried as a member of each seed:
// psi_B(t) is the fuzziness of the object seed enlarged by level t, psi_W(t)
// of the background seed likewise, and alpha = psi_W(seed)/psi_B(seed) puts
// the two curves on one scale. A level close to a seed blends into its fuzzy
// core while a distant level is crisply rejected, so psi_B falls and psi_W
// rises across the region and the crossing — the candidate minimizing
// |alpha*psi_B(t) - psi_W(t)| — separates the modes near the histogram
// valley. A tied run of minima resolves to the run's
// midpoint, so a symmetric histogram splits at its axis.
FuzzinessCurve compute_threshold(const Histogram& hist, int k_order,
                                 WeightMode mode = WeightMode::occupied_levels);

} // namespace ptfusion

#endif
