#include "co2occ/seasonal.hpp"

#include <cmath>
#include <string>

#include "co2occ/dtw.hpp"

namespace co2occ {

SeasonalMotif find_repeated_sequence(const SampledSeries& seasonal, double threshold) {
    validate(seasonal);
    const Eigen::VectorXd& v = seasonal.values;
    const Eigen::Index n = v.size();
    if (n < 4)
        throw ValidationError("find_repeated_sequence: need at least 4 samples");

    const double range = v.maxCoeff() - v.minCoeff();
    // Exact equality never fires on decomposed data; match within 1% of range.
    const double eps = 0.01 * range;
    const double start_value = v[0];

    for (Eigen::Index i = 1; i < n; ++i) {
        if (std::abs(v[i] - start_value) > eps) continue;
        const Eigen::Index len = i; // candidate is v[0..i-1]
        if (i + len > n) break;     // no room left to compare, nor for longer candidates
        const double sim = dtw_similarity(v.head(len), v.segment(i, len));
        if (sim > threshold) {
            SeasonalMotif motif;
            motif.values = v.head(len);
            motif.source_len = n;
            motif.similarity = sim;
            return motif;
        }
    }
    throw AperiodicError("find_repeated_sequence: no repeated pattern scored above " +
                         std::to_string(threshold));
}

SeasonalMap align_motifs(const SeasonalMotif& occupancy, const SeasonalMotif& co2,
                         Eigen::Index phase_anchor, std::int64_t anchor_index) {
    const Eigen::Index lo = occupancy.values.size();
    const Eigen::Index lc = co2.values.size();
    if (lo == 0 || lc == 0)
        throw ValidationError("align_motifs: a rejected (empty) motif cannot be aligned");

    SeasonalMap map;
    map.phase_anchor = phase_anchor;
    map.anchor_index = anchor_index;
    if (lo == lc) {
        map.occupancy_motif = occupancy.values;
    } else if (lo < lc) {
        map.occupancy_motif.resize(lc);
        if (lo == 1) {
            map.occupancy_motif.setConstant(occupancy.values[0]);
        } else {
            for (Eigen::Index j = 0; j < lc; ++j) {
                const double pos = static_cast<double>(j) * static_cast<double>(lo - 1) /
                                   static_cast<double>(lc - 1);
                const Eigen::Index i = std::min(static_cast<Eigen::Index>(pos), lo - 2);
                const double frac = pos - static_cast<double>(i);
                map.occupancy_motif[j] =
                    occupancy.values[i] * (1.0 - frac) + occupancy.values[i + 1] * frac;
            }
        }
    } else {
        map.occupancy_motif.resize(lc);
        for (Eigen::Index j = 0; j < lc; ++j)
            map.occupancy_motif[j] = occupancy.values[(j * lo) / lc];
    }
    return map;
}

double motif_at(const SeasonalMap& map, std::int64_t sample_index) {
    const Eigen::Index L = map.occupancy_motif.size();
    std::int64_t idx = (sample_index - map.anchor_index) % L;
    if (idx < 0) idx += L;
    return map.occupancy_motif[static_cast<Eigen::Index>(idx)];
}

} // namespace co2occ
