#include "disclab/fitting.hpp"

#include "disclab/core.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace disclab {

LinFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw validation_error("fit_linear: need at least two samples");
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-300) throw validation_error("fit_linear: degenerate abscissae");
    LinFit f;
    f.n = x.size();
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - f.intercept - f.slope * x[i];
        ss += r * r;
    }
    f.resid_rms = std::sqrt(ss / n);
    return f;
}

LinFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0 && std::abs(y[i]) > 0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(std::abs(y[i])));
        }
    }
    return fit_linear(lx, ly);
}

std::vector<std::pair<double, double>> dyadic_envelope(const std::vector<double>& x,
                                                       const std::vector<double>& y) {
    std::map<int, std::pair<double, double>> blocks;  // k -> (x_at_max, max|y|)
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0) continue;
        int k = static_cast<int>(std::floor(std::log2(x[i])));
        double ay = std::abs(y[i]);
        auto it = blocks.find(k);
        if (it == blocks.end() || ay > it->second.second) blocks[k] = {x[i], ay};
    }
    std::vector<std::pair<double, double>> out;
    for (auto& [k, v] : blocks)
        if (v.second > 0) out.push_back(v);
    return out;
}

LinFit fit_envelope_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    auto env = dyadic_envelope(x, y);
    if (env.size() < 3)
        throw validation_error("fit_envelope_loglog: fewer than three nonzero blocks");
    std::vector<double> ex, ey;
    for (auto& [a, b] : env) {
        ex.push_back(a);
        ey.push_back(b);
    }
    return fit_loglog(ex, ey);
}

}  // namespace disclab
