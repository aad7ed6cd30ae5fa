#ifndef TORSION_GAP_RATE_FIT_HPP
#define TORSION_GAP_RATE_FIT_HPP

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "torsion_gap/errors.hpp"

namespace torsion_gap {

struct RateFit {
    double p = 0.0;  // err ~ C / |log eps|^p
    double C = 0.0;
    std::size_t used = 0;
};

/// Least squares of log err against log|log eps|. Nonpositive errors are dropped.
inline RateFit fit_rate(const std::vector<std::pair<double, double>>& pairs) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [eps, err] : pairs) {
        if (!(eps > 0.0 && eps < 1.0)) throw FitError("fit_rate needs 0 < eps < 1");
        if (err > 0.0 && std::isfinite(err)) pts.emplace_back(std::log(std::abs(std::log(eps))), std::log(err));
    }
    if (pts.size() < 3) throw FitError("fit_rate needs at least 3 pairs with positive error");
    Eigen::MatrixXd a(pts.size(), 2);
    Eigen::VectorXd b(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        a(i, 0) = 1.0;
        a(i, 1) = -pts[i].first;
        b(i) = pts[i].second;
    }
    const Eigen::Vector2d x = a.colPivHouseholderQr().solve(b);
    return {x(1), std::exp(x(0)), pts.size()};
}

struct Extrapolation {
    double limit = 0.0;  // value ~ limit + slope / |log eps|
    double slope = 0.0;
};

/// Fits value = L + a/|log eps| over the `window` smallest eps.
inline Extrapolation extrapolate_log(const std::vector<double>& eps, const std::vector<double>& values,
                                     std::size_t window = 4) {
    if (eps.size() != values.size()) throw FitError("extrapolate_log: size mismatch");
    if (eps.size() < 2 || window < 2) throw FitError("extrapolate_log needs at least 2 points");
    std::vector<std::size_t> idx(eps.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return eps[i] < eps[j]; });
    idx.resize(std::min(window, idx.size()));
    Eigen::MatrixXd a(idx.size(), 2);
    Eigen::VectorXd b(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        a(k, 0) = 1.0;
        a(k, 1) = 1.0 / std::abs(std::log(eps[idx[k]]));
        b(k) = values[idx[k]];
    }
    const Eigen::Vector2d x = a.colPivHouseholderQr().solve(b);
    return {x(0), x(1)};
}

}  // namespace torsion_gap

#endif  // TORSION_GAP_RATE_FIT_HPP
