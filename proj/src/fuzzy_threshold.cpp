#include "ptfusion/fuzzy_threshold.hpp"

#include "ptfusion/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace ptfusion {

double mu_B(double x, const MembershipParams& p) {
    if (p.c == p.a) {
        // Single-level subset: the S-curve collapses to a step. x == b maps
        // to 1 so the crisp snap agrees with the >= 0.5 convention.
        return x < p.b ? 0.0 : 1.0;
    }
    if (x <= p.a) return 0.0;
    if (x > p.c) return 1.0;
    double span = p.c - p.a;
    if (x <= p.b) {
        double r = (x - p.a) / span;
        return 2.0 * r * r;
    }
    double r = (x - p.c) / span;
    return 1.0 - 2.0 * r * r;
}

double mu_W(double x, const MembershipParams& p) {
    return 1.0 - mu_B(x, p);
}

MembershipParams membership_params(const Histogram& hist, int p, int q) {
    int x_min = -1;
    int x_max = -1;
    for (int x = 0; x < 256; ++x) {
        if (hist.bins[x] == 0) continue;
        if (x_min < 0) x_min = x;
        x_max = x;
    }

    double mass = 0.0;
    double moment = 0.0;
    int lo = std::max(p, 0);
    int hi = std::min(q, 255);
    for (int x = lo; x <= hi; ++x) {
        if (hist.bins[x] == 0) continue;
        double w = static_cast<double>(hist.bins[x]);
        mass += w;
        moment += w * x;
    }
    if (mass == 0.0) throw EmptySubset("no occupied gray level in the requested subset");

    MembershipParams params;
    params.b = moment / mass;
    params.c = params.b + std::max(std::abs(params.b - x_max), std::abs(params.b - x_min));
    params.a = 2.0 * params.b - params.c;
    return params;
}

namespace {

// |mu - nearest crisp value|^k, with mu >= 0.5 snapping to 1.
double crisp_distance_pow(double mu, int k_order) {
    double d = mu >= 0.5 ? 1.0 - mu : mu;
    if (k_order == 1) return d;
    if (k_order == 2) return d * d;
    return std::pow(d, k_order);
}

// psi = 2 * (weighted mean of d^k)^(1/k); the mean form keeps the
// all-crisp -> 0 and all-0.5 -> 1 anchors exact in floating point.
double psi_from_mean(double mean_pow, int k_order) {
    double root = k_order == 1   ? mean_pow
                  : k_order == 2 ? std::sqrt(mean_pow)
                                 : std::pow(mean_pow, 1.0 / k_order);
    return 2.0 * root;
}

} // namespace

double fuzziness_index(const std::vector<double>& memberships, int k_order) {
    if (memberships.empty()) throw EmptyInput("fuzziness_index needs at least one membership");
    if (k_order < 1) throw ConfigInvalid("fuzziness order must be a positive integer");
    double sum = 0.0;
    for (double mu : memberships) sum += crisp_distance_pow(mu, k_order);
    return psi_from_mean(sum / static_cast<double>(memberships.size()), k_order);
}

double fuzziness_index(const std::vector<double>& memberships,
                       const std::vector<double>& weights, int k_order) {
    if (memberships.empty()) throw EmptyInput("fuzziness_index needs at least one membership");
    if (weights.size() != memberships.size())
        throw BadArraySize("one weight per membership value required");
    if (k_order < 1) throw ConfigInvalid("fuzziness order must be a positive integer");
    double sum = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < memberships.size(); ++i) {
        sum += weights[i] * crisp_distance_pow(memberships[i], k_order);
        total += weights[i];
    }
    if (total <= 0.0) throw EmptyInput("fuzziness_index weights carry no mass");
    return psi_from_mean(sum / total, k_order);
}

HistogramRegion seed_regions(const Histogram& hist) {
    int x_min = -1;
    int x_max = -1;
    int occupied = 0;
    for (int x = 0; x < 256; ++x) {
        if (hist.bins[x] == 0) continue;
        if (x_min < 0) x_min = x;
        x_max = x;
        ++occupied;
    }
    if (occupied < 2) throw NoContrast("histogram needs two occupied gray levels");

    // 5-bin moving average, window clipped at the ends of the gray range so
    // an edge mode (level 0 dominates difference histograms) is not diluted.
    std::array<double, 256> smooth{};
    for (int i = 0; i < 256; ++i) {
        int lo = std::max(0, i - 2);
        int hi = std::min(255, i + 2);
        double sum = 0.0;
        for (int j = lo; j <= hi; ++j) sum += static_cast<double>(hist.bins[j]);
        smooth[i] = sum / static_cast<double>(hi - lo + 1);
    }

    // Plateau-aware local maxima: a maximal run of equal values that drops
    // off on both sides counts once, at its midpoint.
    struct Peak {
        int pos;
        double value;
    };
    std::vector<Peak> peaks;
    int i = 0;
    while (i < 256) {
        int run_end = i;
        while (run_end + 1 < 256 && smooth[run_end + 1] == smooth[i]) ++run_end;
        bool falls_left = i == 0 || smooth[i - 1] < smooth[i];
        bool falls_right = run_end == 255 || smooth[run_end + 1] < smooth[i];
        if (falls_left && falls_right && smooth[i] > 0.0)
            peaks.push_back({std::clamp((i + run_end) / 2, x_min, x_max), smooth[i]});
        i = run_end + 1;
    }
    std::stable_sort(peaks.begin(), peaks.end(), [](const Peak& lhs, const Peak& rhs) {
        if (lhs.value != rhs.value) return lhs.value > rhs.value;
        return lhs.pos < rhs.pos;
    });

    // Dominant peak plus the strongest partner far enough away from it.
    constexpr int kMinPeakSeparation = 10;
    if (!peaks.empty()) {
        for (std::size_t j = 1; j < peaks.size(); ++j) {
            if (std::abs(peaks[j].pos - peaks[0].pos) < kMinPeakSeparation) continue;
            HistogramRegion region;
            region.x_min = x_min;
            region.x_max = x_max;
            region.x_j = std::min(peaks[0].pos, peaks[j].pos);
            region.x_r = std::max(peaks[0].pos, peaks[j].pos);
            return region;
        }
    }
    throw NoContrast("no two separated histogram peaks");
}

FuzzinessCurve compute_threshold(const Histogram& hist, int k_order, WeightMode mode) {
    HistogramRegion region = seed_regions(hist);

    // Occupied levels plus the count mass/moment of one seed subset, cached
    // so each candidate level can be appended without rescanning the
    // histogram.
    struct Seed {
        std::vector<double> levels;
        std::vector<double> weights;
        double mass = 0.0;
        double moment = 0.0;
    };
    auto collect = [&](int lo, int hi) {
        Seed s;
        for (int x = lo; x <= hi; ++x) {
            if (hist.bins[static_cast<std::size_t>(x)] == 0) continue;
            double w = static_cast<double>(hist.bins[static_cast<std::size_t>(x)]);
            s.levels.push_back(static_cast<double>(x));
            s.weights.push_back(w);
            s.mass += w;
            s.moment += w * static_cast<double>(x);
        }
        return s;
    };
    const Seed object = collect(region.x_min, region.x_j);
    const Seed background = collect(region.x_r, region.x_max);

    // Fuzziness of a seed subset, optionally enlarged by one candidate gray
    // level: each fuzzy-region level is tried against both seeds and ends up
    // classified with the one it disturbs least. The candidate enters the
    // count-weighted crossover mean with its own histogram count (nothing
    // when its bin is empty, which keeps the curve invariant under uniform
    // count scaling) and always contributes one membership term to the index.
    auto psi_of = [&](const Seed& seed, int candidate, bool white) {
        double w_cand =
            candidate >= 0 ? static_cast<double>(hist.bins[static_cast<std::size_t>(candidate)])
                           : 0.0;
        double mass = seed.mass + w_cand;
        double moment = seed.moment + w_cand * candidate;
        MembershipParams params;
        params.b = moment / mass;
        params.c = params.b + std::max(std::abs(params.b - region.x_max),
                                       std::abs(params.b - region.x_min));
        params.a = 2.0 * params.b - params.c;
        std::vector<double> memberships;
        memberships.reserve(seed.levels.size() + 1);
        for (double x : seed.levels)
            memberships.push_back(white ? mu_W(x, params) : mu_B(x, params));
        if (candidate >= 0) memberships.push_back(white ? mu_W(candidate, params) : mu_B(candidate, params));
        if (mode == WeightMode::histogram_counts) {
            std::vector<double> weights = seed.weights;
            if (candidate >= 0) weights.push_back(w_cand);
            return fuzziness_index(memberships, weights, k_order);
        }
        return fuzziness_index(memberships, k_order);
    };

    // Seed fuzziness normalizes the object curve onto the background curve.
    double psi_b_seed = psi_of(object, -1, false);
    double psi_w_seed = psi_of(background, -1, true);

    FuzzinessCurve curve;
    curve.alpha = (psi_b_seed > 0.0 && psi_w_seed > 0.0) ? psi_w_seed / psi_b_seed : 1.0;

    std::vector<double> gaps;
    for (int t = region.x_j + 1; t < region.x_r; ++t) {
        double psi_b = psi_of(object, t, false);
        double psi_w = psi_of(background, t, true);
        curve.levels.push_back(t);
        curve.psi_object.push_back(psi_b);
        curve.psi_background.push_back(psi_w);
        gaps.push_back(std::abs(curve.alpha * psi_b - psi_w));
    }

    // The minimal gap can be attained along a whole run of candidates (the
    // curves are flat wherever consecutive subsets span no new occupied
    // level, e.g. across an empty valley). The crossing then lies inside the
    // run, so resolve to its midpoint; a unique minimizer is its own run.
    double best_gap = *std::min_element(gaps.begin(), gaps.end());
    std::size_t run_lo = 0;
    while (gaps[run_lo] != best_gap) ++run_lo;
    std::size_t run_hi = run_lo;
    while (run_hi + 1 < gaps.size() && gaps[run_hi + 1] == best_gap) ++run_hi;
    curve.threshold = curve.levels[(run_lo + run_hi) / 2];
    return curve;
}

} // namespace ptfusion
