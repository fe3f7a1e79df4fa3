#pragma once

#include <vector>

namespace mtad {

// Scores of a normal and an anomalous population, in anomaly polarity:
// higher = more anomalous.
struct ScoredPopulation {
    std::vector<double> normal_scores;
    std::vector<double> anomaly_scores;
};

// P(anomaly score > normal score) + 0.5 * P(tie), via rank statistics.
// Exact in [0,1]; empty populations or non-finite scores are rejected.
double auroc(const ScoredPopulation& pop);

// Equal error rate. FAR(t) (anomalies accepted as normal) and FRR(t)
// (normals rejected) are swept over every threshold; the EER is the balanced
// error where the two rates cross, taken as the minimum of (FAR+FRR)/2 over
// the sweep. On discrete populations the literal FAR=FRR crossing can be
// degenerate under ties; the sweep minimum is the interpolated crossing value
// and never exceeds 0.5.
double eer(const ScoredPopulation& pop);

// APCER at a BPCER budget: lowest threshold whose normal-rejection rate is
// <= bpcer_target; returns the anomaly-acceptance rate there.
double apcer_at_bpcer(const ScoredPopulation& pop, double bpcer_target);

}  // namespace mtad
