#include "mtad/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "mtad/rng.hpp"

namespace mtad {

namespace {

constexpr double kClampLo = 1e-12;

double digamma(double x) { return boost::math::digamma(x); }
double trigamma(double x) { return boost::math::trigamma(x); }

// Inverse of the digamma function (Minka's initializer + Newton).
double inverse_digamma(double y) {
    double x = y >= -2.22 ? std::exp(y) + 0.5 : -1.0 / (y + 0.5772156649015328606);
    for (int i = 0; i < 8; ++i) x -= (digamma(x) - y) / trigamma(x);
    return x;
}

struct SuffStats {
    std::vector<double> mean_log;  // mean of log p per component
    std::vector<double> mean;
    std::vector<double> var;
    size_t n = 0;
    size_t dim = 0;
};

SuffStats sufficient_stats(const std::vector<std::vector<double>>& samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("dirichlet fit requires at least 2 samples");
    SuffStats s;
    s.n = samples.size();
    s.dim = samples[0].size();
    if (s.dim < 2) throw std::invalid_argument("dirichlet fit requires dimension >= 2");
    s.mean_log.assign(s.dim, 0.0);
    s.mean.assign(s.dim, 0.0);
    s.var.assign(s.dim, 0.0);
    for (const auto& p : samples) {
        if (p.size() != s.dim) throw std::invalid_argument("ragged sample dimensions");
        for (size_t j = 0; j < s.dim; ++j) {
            const double v = std::clamp(p[j], kClampLo, 1.0);
            s.mean_log[j] += std::log(v);
            s.mean[j] += v;
        }
    }
    for (size_t j = 0; j < s.dim; ++j) {
        s.mean_log[j] /= static_cast<double>(s.n);
        s.mean[j] /= static_cast<double>(s.n);
    }
    for (const auto& p : samples) {
        for (size_t j = 0; j < s.dim; ++j) {
            const double v = std::clamp(p[j], kClampLo, 1.0);
            s.var[j] += (v - s.mean[j]) * (v - s.mean[j]);
        }
    }
    double total_var = 0.0;
    for (size_t j = 0; j < s.dim; ++j) {
        s.var[j] /= static_cast<double>(s.n);
        total_var += s.var[j];
    }
    if (total_var < 1e-16)
        throw std::invalid_argument("degenerate sample population: zero variance");
    return s;
}

std::vector<double> moment_match(const SuffStats& s) {
    // concentration scale from each component with usable variance, averaged
    double scale = 0.0;
    int used = 0;
    for (size_t j = 0; j < s.dim; ++j) {
        if (s.var[j] > 1e-12 && s.mean[j] > 0.0 && s.mean[j] < 1.0) {
            scale += s.mean[j] * (1.0 - s.mean[j]) / s.var[j] - 1.0;
            ++used;
        }
    }
    scale = used > 0 ? scale / used : 1.0;
    if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;
    std::vector<double> alpha(s.dim);
    for (size_t j = 0; j < s.dim; ++j)
        alpha[j] = std::max(scale * std::max(s.mean[j], kClampLo), 1e-6);
    return alpha;
}

double log_likelihood(const std::vector<double>& alpha, const SuffStats& s) {
    double sum_alpha = 0.0;
    for (double a : alpha) sum_alpha += a;
    double ll = std::lgamma(sum_alpha);
    for (size_t j = 0; j < alpha.size(); ++j)
        ll += -std::lgamma(alpha[j]) + (alpha[j] - 1.0) * s.mean_log[j];
    return ll * static_cast<double>(s.n);
}

}  // namespace

std::vector<double> dirichlet_moment_match(const std::vector<std::vector<double>>& samples) {
    return moment_match(sufficient_stats(samples));
}

DirichletFit fit_dirichlet(const std::vector<std::vector<double>>& samples) {
    const SuffStats s = sufficient_stats(samples);
    DirichletFit fit;
    fit.alpha = moment_match(s);

    constexpr int kMaxIter = 10000;
    constexpr double kTol = 1e-8;
    std::vector<double> next(s.dim);
    for (int it = 1; it <= kMaxIter; ++it) {
        double sum_alpha = 0.0;
        for (double a : fit.alpha) sum_alpha += a;
        const double psi_sum = digamma(sum_alpha);
        double delta = 0.0;
        for (size_t j = 0; j < s.dim; ++j) {
            next[j] = inverse_digamma(psi_sum + s.mean_log[j]);
            delta = std::max(delta, std::abs(next[j] - fit.alpha[j]));
        }
        fit.alpha = next;
        fit.iterations = it;
        if (delta < kTol) {
            fit.converged = true;
            break;
        }
    }
    fit.log_likelihood = log_likelihood(fit.alpha, s);
    return fit;
}

double dirichlet_log_likelihood(const std::vector<double>& alpha,
                                const std::vector<std::vector<double>>& samples) {
    return log_likelihood(alpha, sufficient_stats(samples));
}

std::vector<double> dirichlet_sample(const std::vector<double>& alpha, Rng& rng) {
    std::vector<double> out(alpha.size());
    double total = 0.0;
    for (size_t j = 0; j < alpha.size(); ++j) {
        out[j] = rng.gamma(alpha[j]);
        total += out[j];
    }
    for (double& v : out) v /= total;
    return out;
}

}  // namespace mtad
