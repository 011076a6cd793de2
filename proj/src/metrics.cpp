#include "sase/metrics.hpp"

#include "sase/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace sase {

namespace {

std::vector<int> compact_ids(const std::vector<int>& labels) {
    std::map<int, int> remap;
    for (int v : labels) remap.emplace(v, 0);
    int next = 0;
    for (auto& [_, id] : remap) id = next++;
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) out[i] = remap.at(labels[i]);
    return out;
}

// Hungarian algorithm (potentials formulation) for a square min-cost matrix.
// Returns the column matched to each row.
std::vector<int> hungarian_min_cost(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0); // match[col] = row, 1-based
    std::vector<int> way(n + 1, 0);

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = match[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) { minv[j] = cur; way[j] = j0; }
                if (minv[j] < delta) { delta = minv[j]; j1 = j; }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) { u[match[j]] += delta; v[j] -= delta; }
                else minv[j] -= delta;
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (match[j] != 0) row_to_col[match[j] - 1] = j - 1;
    return row_to_col;
}

void check_lengths(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.size() != truth.size())
        throw std::invalid_argument("metrics: label vectors differ in length");
    if (pred.empty()) throw std::invalid_argument("metrics: empty label vectors");
}

double entropy(const std::vector<double>& probs) {
    double h = 0.0;
    for (double p : probs)
        if (p > 0.0) h -= p * std::log(p);
    return h;
}

double choose2(std::int64_t k) { return 0.5 * static_cast<double>(k) * static_cast<double>(k - 1); }

} // namespace

ContingencyTable ContingencyTable::from_labels(const std::vector<int>& pred,
                                               const std::vector<int>& truth) {
    check_lengths(pred, truth);
    const std::vector<int> p = compact_ids(pred);
    const std::vector<int> t = compact_ids(truth);
    const int mp = *std::max_element(p.begin(), p.end()) + 1;
    const int mt = *std::max_element(t.begin(), t.end()) + 1;

    ContingencyTable table;
    table.counts.setZero(mp, mt);
    for (std::size_t i = 0; i < p.size(); ++i) ++table.counts(p[i], t[i]);
    table.total = static_cast<std::int64_t>(p.size());
    return table;
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
    const ContingencyTable table = ContingencyTable::from_labels(pred, truth);
    const int side = static_cast<int>(std::max(table.counts.rows(), table.counts.cols()));

    // Pad to square and negate counts: max-weight matching as min-cost.
    Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(side, side);
    for (Eigen::Index i = 0; i < table.counts.rows(); ++i)
        for (Eigen::Index j = 0; j < table.counts.cols(); ++j)
            cost(i, j) = -static_cast<double>(table.counts(i, j));

    const std::vector<int> row_to_col = hungarian_min_cost(cost);
    std::int64_t matched = 0;
    for (Eigen::Index i = 0; i < table.counts.rows(); ++i) {
        const int j = row_to_col[static_cast<int>(i)];
        if (j >= 0 && j < table.counts.cols()) matched += table.counts(i, j);
    }
    return static_cast<double>(matched) / static_cast<double>(table.total);
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
    const ContingencyTable table = ContingencyTable::from_labels(pred, truth);
    const double n = static_cast<double>(table.total);

    std::vector<double> p_rows(table.counts.rows()), p_cols(table.counts.cols());
    for (Eigen::Index i = 0; i < table.counts.rows(); ++i)
        p_rows[i] = static_cast<double>(table.counts.row(i).sum()) / n;
    for (Eigen::Index j = 0; j < table.counts.cols(); ++j)
        p_cols[j] = static_cast<double>(table.counts.col(j).sum()) / n;

    const double h_pred = entropy(p_rows);
    const double h_true = entropy(p_cols);
    if (h_pred == 0.0 && h_true == 0.0) return 1.0; // single cluster on both sides

    double mi = 0.0;
    for (Eigen::Index i = 0; i < table.counts.rows(); ++i) {
        for (Eigen::Index j = 0; j < table.counts.cols(); ++j) {
            if (table.counts(i, j) == 0) continue;
            const double p_ij = static_cast<double>(table.counts(i, j)) / n;
            mi += p_ij * std::log(p_ij / (p_rows[i] * p_cols[j]));
        }
    }
    const double value = mi / (0.5 * (h_pred + h_true));
    return std::clamp(value, 0.0, 1.0);
}

double ari(const std::vector<int>& pred, const std::vector<int>& truth) {
    const ContingencyTable table = ContingencyTable::from_labels(pred, truth);

    double sum_cells = 0.0;
    for (Eigen::Index i = 0; i < table.counts.rows(); ++i)
        for (Eigen::Index j = 0; j < table.counts.cols(); ++j)
            sum_cells += choose2(table.counts(i, j));

    double sum_rows = 0.0, sum_cols = 0.0;
    for (Eigen::Index i = 0; i < table.counts.rows(); ++i)
        sum_rows += choose2(table.counts.row(i).sum());
    for (Eigen::Index j = 0; j < table.counts.cols(); ++j)
        sum_cols += choose2(table.counts.col(j).sum());

    const double pairs = choose2(table.total);
    if (pairs == 0.0) return 1.0; // a single node has no pairs to disagree on
    const double expected = sum_rows * sum_cols / pairs;
    const double max_index = 0.5 * (sum_rows + sum_cols);
    const double denom = max_index - expected;
    if (denom == 0.0) return 1.0; // both partitions trivial
    return (sum_cells - expected) / denom;
}

} // namespace sase
