#pragma once

#include <cstdint>
#include <vector>

namespace mtad {

struct DirichletFit {
    std::vector<double> alpha;
    bool converged = false;
    int iterations = 0;
    double log_likelihood = 0.0;  // total over the fitting samples
};

// Moment-matched concentration estimate (the fixed-point initializer).
std::vector<double> dirichlet_moment_match(const std::vector<std::vector<double>>& samples);

// Maximum-likelihood Dirichlet concentrations via fixed-point iteration,
// initialized by moment matching. Components are clamped to [1e-12, 1]
// before taking logs. Convergence: successive iterates differ by < 1e-8 in
// max norm; after 10000 iterations the last iterate is returned with
// converged=false. Requires >= 2 samples; a degenerate population (zero
// variance in every component) is rejected.
DirichletFit fit_dirichlet(const std::vector<std::vector<double>>& samples);

// Total Dirichlet log-likelihood of the samples under concentrations alpha.
double dirichlet_log_likelihood(const std::vector<double>& alpha,
                                const std::vector<std::vector<double>>& samples);

// One draw from Dirichlet(alpha); used by synthetic-recovery checks and the
// protocol oracles.
class Rng;
std::vector<double> dirichlet_sample(const std::vector<double>& alpha, Rng& rng);

}  // namespace mtad
