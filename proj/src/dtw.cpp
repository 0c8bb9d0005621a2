#include "co2occ/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace co2occ {

DtwResult dtw_cost(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::Index n = a.size();
    const Eigen::Index m = b.size();
    if (n == 0 || m == 0)
        throw ValidationError("dtw: sequences must be non-empty");

    // Rolling rows keep memory linear in the shorter dimension of each row.
    std::vector<double> prev_cost(static_cast<std::size_t>(m));
    std::vector<double> cur_cost(static_cast<std::size_t>(m));
    std::vector<Eigen::Index> prev_len(static_cast<std::size_t>(m));
    std::vector<Eigen::Index> cur_len(static_cast<std::size_t>(m));

    for (Eigen::Index j = 0; j < m; ++j) {
        const double d = std::abs(a[0] - b[j]);
        if (j == 0) {
            prev_cost[0] = d;
            prev_len[0] = 1;
        } else {
            prev_cost[static_cast<std::size_t>(j)] =
                prev_cost[static_cast<std::size_t>(j - 1)] + d;
            prev_len[static_cast<std::size_t>(j)] =
                prev_len[static_cast<std::size_t>(j - 1)] + 1;
        }
    }

    for (Eigen::Index i = 1; i < n; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            const double d = std::abs(a[i] - b[j]);
            const std::size_t sj = static_cast<std::size_t>(j);
            if (j == 0) {
                cur_cost[0] = prev_cost[0] + d;
                cur_len[0] = prev_len[0] + 1;
                continue;
            }
            // Ties prefer the diagonal, then advancing a.
            double best = prev_cost[sj - 1];
            Eigen::Index len = prev_len[sj - 1];
            if (prev_cost[sj] < best) {
                best = prev_cost[sj];
                len = prev_len[sj];
            }
            if (cur_cost[sj - 1] < best) {
                best = cur_cost[sj - 1];
                len = cur_len[sj - 1];
            }
            cur_cost[sj] = best + d;
            cur_len[sj] = len + 1;
        }
        std::swap(prev_cost, cur_cost);
        std::swap(prev_len, cur_len);
    }

    DtwResult out;
    out.cost = prev_cost[static_cast<std::size_t>(m - 1)];
    out.path_length = prev_len[static_cast<std::size_t>(m - 1)];
    return out;
}

double dtw_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const DtwResult res = dtw_cost(a, b);
    const double hi = std::max(a.maxCoeff(), b.maxCoeff());
    const double lo = std::min(a.minCoeff(), b.minCoeff());
    const double range = hi - lo;
    if (range <= 0.0) return 100.0; // all values equal, cost is necessarily zero
    const double sim =
        100.0 * (1.0 - res.cost / (static_cast<double>(res.path_length) * range));
    return std::clamp(sim, 0.0, 100.0);
}

} // namespace co2occ
