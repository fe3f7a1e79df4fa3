#include "mtad/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mtad {

namespace {

void check_population(const ScoredPopulation& pop) {
    if (pop.normal_scores.empty() || pop.anomaly_scores.empty())
        throw std::invalid_argument("metric requires non-empty normal and anomaly populations");
    for (double v : pop.normal_scores)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite normal score");
    for (double v : pop.anomaly_scores)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite anomaly score");
}

// Sorted candidate thresholds: every distinct score plus a sentinel above the
// maximum (the operating point that flags nothing).
std::vector<double> candidate_thresholds(const ScoredPopulation& pop) {
    std::vector<double> t;
    t.reserve(pop.normal_scores.size() + pop.anomaly_scores.size() + 1);
    t.insert(t.end(), pop.normal_scores.begin(), pop.normal_scores.end());
    t.insert(t.end(), pop.anomaly_scores.begin(), pop.anomaly_scores.end());
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    const double top = t.back();
    t.push_back(top == 0.0 ? 1.0 : top + std::abs(top));  // strictly above all scores
    return t;
}

// A sample is flagged anomalous iff score >= t.
double frr_at(const std::vector<double>& sorted_normals, double t) {
    const auto it = std::lower_bound(sorted_normals.begin(), sorted_normals.end(), t);
    return static_cast<double>(sorted_normals.end() - it) / sorted_normals.size();
}

double far_at(const std::vector<double>& sorted_anomalies, double t) {
    const auto it = std::lower_bound(sorted_anomalies.begin(), sorted_anomalies.end(), t);
    return static_cast<double>(it - sorted_anomalies.begin()) / sorted_anomalies.size();
}

}  // namespace

double auroc(const ScoredPopulation& pop) {
    check_population(pop);
    std::vector<double> normals = pop.normal_scores;
    std::sort(normals.begin(), normals.end());
    // counts and half-counts sum exactly in doubles
    double favorable = 0.0;
    for (double a : pop.anomaly_scores) {
        const auto lo = std::lower_bound(normals.begin(), normals.end(), a);
        const auto hi = std::upper_bound(normals.begin(), normals.end(), a);
        favorable += static_cast<double>(lo - normals.begin());
        favorable += 0.5 * static_cast<double>(hi - lo);
    }
    return favorable /
           (static_cast<double>(normals.size()) * static_cast<double>(pop.anomaly_scores.size()));
}

double eer(const ScoredPopulation& pop) {
    check_population(pop);
    std::vector<double> normals = pop.normal_scores;
    std::vector<double> anomalies = pop.anomaly_scores;
    std::sort(normals.begin(), normals.end());
    std::sort(anomalies.begin(), anomalies.end());
    double best = 1.0;
    for (double t : candidate_thresholds(pop)) {
        const double hter = 0.5 * (frr_at(normals, t) + far_at(anomalies, t));
        best = std::min(best, hter);
    }
    return best;
}

double apcer_at_bpcer(const ScoredPopulation& pop, double bpcer_target) {
    check_population(pop);
    if (!(bpcer_target > 0.0 && bpcer_target < 1.0))
        throw std::invalid_argument("bpcer_target must lie in (0,1)");
    std::vector<double> normals = pop.normal_scores;
    std::vector<double> anomalies = pop.anomaly_scores;
    std::sort(normals.begin(), normals.end());
    std::sort(anomalies.begin(), anomalies.end());
    for (double t : candidate_thresholds(pop)) {
        if (frr_at(normals, t) <= bpcer_target) return far_at(anomalies, t);
    }
    return 1.0;  // unreachable: the sentinel threshold has BPCER 0
}

}  // namespace mtad
