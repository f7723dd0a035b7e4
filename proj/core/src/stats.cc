// Copyright 2026 The partonloop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "partonloop/stats.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

using namespace partonloop;

Estimate partonloop::batch_means(const std::vector<double> &values, size_t batches) {
    Estimate e;
    size_t n = values.size();
    e.samples = n;
    if (n == 0) {
        return e;
    }
    double sum = 0;
    for (double v : values) {
        sum += v;
    }
    e.mean = sum / n;
    if (n < 2) {
        return e;
    }
    if (n < batches) {
        double ss = 0;
        for (double v : values) {
            ss += (v - e.mean) * (v - e.mean);
        }
        e.std_error = std::sqrt(ss / (n - 1) / n);
        return e;
    }
    std::vector<double> means(batches);
    for (size_t b = 0; b < batches; b++) {
        size_t lo = b * n / batches;
        size_t hi = (b + 1) * n / batches;
        double s = 0;
        for (size_t k = lo; k < hi; k++) {
            s += values[k];
        }
        means[b] = s / (double)(hi - lo);
    }
    double mm = 0;
    for (double m : means) {
        mm += m;
    }
    mm /= batches;
    double ss = 0;
    for (double m : means) {
        ss += (m - mm) * (m - mm);
    }
    e.std_error = std::sqrt(ss / (batches - 1) / batches);
    return e;
}

FitModel partonloop::parse_fit_model(const std::string &name) {
    if (name == "log_growth") {
        return FitModel::log_growth;
    }
    if (name == "exp_decay") {
        return FitModel::exp_decay;
    }
    if (name == "crossing_point") {
        return FitModel::crossing_point;
    }
    throw std::invalid_argument("unknown fit model: " + name);
}

std::string partonloop::fit_model_name(FitModel m) {
    switch (m) {
        case FitModel::log_growth:
            return "log_growth";
        case FitModel::exp_decay:
            return "exp_decay";
        case FitModel::crossing_point:
            return "crossing_point";
    }
    return "?";
}

std::vector<double> partonloop::linear_least_squares(
    const std::vector<std::vector<double>> &design,
    const std::vector<double> &y,
    const std::vector<double> &err,
    std::vector<double> *param_err,
    double *chi2) {
    size_t n = y.size();
    if (n == 0 || design.size() != n) {
        throw std::invalid_argument("least squares needs one design row per point");
    }
    size_t p = design[0].size();
    if (n < p) {
        throw std::invalid_argument("fewer points than parameters");
    }
    bool weighted = err.size() == n && std::all_of(err.begin(), err.end(), [](double e) {
                        return e > 0;
                    });
    Eigen::MatrixXd a(n, p);
    Eigen::VectorXd b(n);
    for (size_t i = 0; i < n; i++) {
        double w = weighted ? 1.0 / err[i] : 1.0;
        for (size_t j = 0; j < p; j++) {
            a(i, j) = design[i][j] * w;
        }
        b(i) = y[i] * w;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < (Eigen::Index)p) {
        throw std::invalid_argument("degenerate design matrix");
    }
    Eigen::VectorXd beta = qr.solve(b);
    double c2 = (a * beta - b).squaredNorm();
    Eigen::MatrixXd cov = (a.transpose() * a).inverse();
    if (!weighted) {
        cov *= n > p ? c2 / (double)(n - p) : 0.0;
    }
    if (chi2 != nullptr) {
        *chi2 = c2;
    }
    if (param_err != nullptr) {
        param_err->assign(p, 0);
        for (size_t j = 0; j < p; j++) {
            (*param_err)[j] = std::sqrt(std::max(0.0, cov(j, j)));
        }
    }
    return std::vector<double>(beta.data(), beta.data() + p);
}

static FitResult fit_crossing(const std::vector<FitPoint> &points) {
    std::map<double, std::map<double, FitPoint>> curves;
    for (const auto &pt : points) {
        curves[pt.group][pt.x] = pt;
    }
    if (curves.size() < 2) {
        throw std::invalid_argument("crossing_point needs at least two sizes");
    }
    std::vector<double> roots;
    std::vector<double> root_errs;
    for (auto it = curves.begin(); std::next(it) != curves.end(); ++it) {
        const auto &c1 = it->second;
        const auto &c2 = std::next(it)->second;
        bool have_prev = false;
        double px = 0;
        double pd = 0;
        double pe = 0;
        bool found = false;
        for (const auto &[x, pt1] : c1) {
            auto f = c2.find(x);
            if (f == c2.end()) {
                continue;
            }
            double d = f->second.y - pt1.y;
            double e = std::sqrt(pt1.err * pt1.err + f->second.err * f->second.err);
            if (have_prev && ((pd > 0) != (d > 0) || d == 0)) {
                double slope = (d - pd) / (x - px);
                roots.push_back(px - pd / slope);
                root_errs.push_back(0.5 * (e + pe) / std::abs(slope));
                found = true;
                break;
            }
            have_prev = true;
            px = x;
            pd = d;
            pe = e;
        }
        if (!found) {
            throw std::invalid_argument("curves of successive sizes do not cross");
        }
    }
    double mean = 0;
    for (double r : roots) {
        mean += r;
    }
    mean /= roots.size();
    double spread = 0;
    for (double r : roots) {
        spread = std::max(spread, std::abs(r - mean));
    }
    double prop = 0;
    for (double e : root_errs) {
        prop += e * e;
    }
    prop = std::sqrt(prop) / roots.size();
    FitResult out{FitModel::crossing_point, {"x_c"}, {mean}, {std::max(spread, prop)}, 0, points.size()};
    return out;
}

FitResult partonloop::fit_scaling(const std::vector<FitPoint> &points, FitModel model) {
    if (model == FitModel::crossing_point) {
        return fit_crossing(points);
    }
    if (points.size() < 4) {
        throw std::invalid_argument("fit needs at least 4 points");
    }
    std::vector<std::vector<double>> design;
    std::vector<double> y;
    std::vector<double> err;
    for (const auto &pt : points) {
        if (model == FitModel::log_growth) {
            if (!(pt.x > 1)) {
                throw std::invalid_argument("log_growth needs x > 1");
            }
            design.push_back({std::log(pt.x) + std::log(std::log(pt.x)), 1.0});
            y.push_back(pt.y);
            err.push_back(pt.err);
        } else {
            if (!(pt.y > 0)) {
                throw std::invalid_argument("exp_decay needs positive values");
            }
            design.push_back({1.0, -pt.x});
            y.push_back(std::log(pt.y));
            err.push_back(pt.err / pt.y);
        }
    }
    std::vector<double> perr;
    double chi2 = 0;
    std::vector<double> beta = linear_least_squares(design, y, err, &perr, &chi2);
    FitResult out;
    out.model = model;
    out.chi2 = chi2;
    out.points = points.size();
    if (model == FitModel::log_growth) {
        out.names = {"a", "b"};
        out.values = beta;
        out.errors = perr;
    } else {
        // ln y = ln A - x / xi.
        double amp = std::exp(beta[0]);
        double inv = beta[1];
        if (!(inv > 0)) {
            throw std::invalid_argument("exp_decay fit found no decay");
        }
        out.names = {"A", "xi"};
        out.values = {amp, 1.0 / inv};
        out.errors = {amp * perr[0], perr[1] / (inv * inv)};
    }
    return out;
}
