// fitting.cpp: Levenberg-Marquardt decay fits

#include "spinbath/fitting.hpp"

#include "spinbath/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace spinbath {

namespace {

struct Series {
    std::vector<double> t;
    std::vector<double> y;
};

Series select(std::span<const double> t, std::span<const double> y, const FitWindow& w) {
    if (t.size() != y.size()) {
        throw ShapeError("time and value series have different lengths");
    }
    Series s;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] >= w.t_start && t[k] <= w.t_end) {
            if (!std::isfinite(t[k]) || !std::isfinite(y[k])) {
                throw FitError("non-finite sample in fit window");
            }
            s.t.push_back(t[k]);
            s.y.push_back(y[k]);
        }
    }
    if (s.t.size() < 10) {
        throw FitError("fit needs at least 10 samples in the window, got " + std::to_string(s.t.size()));
    }
    return s;
}

// residuals r(theta) and Jacobian dr/dtheta
using Model = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&, Eigen::MatrixXd&)>;

struct LmResult {
    Eigen::VectorXd theta;
    double cost = 0.0;
    int iterations = 0;
    std::vector<double> history;
};

LmResult levenberg_marquardt(const Model& model, Eigen::VectorXd theta, const FitOptions& opts) {
    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    model(theta, r, jac);
    double cost = r.squaredNorm();
    if (!std::isfinite(cost)) {
        throw FitError("initial guess gives a non-finite residual");
    }
    LmResult out;
    out.history.push_back(cost);
    double lambda = -1.0;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd g = jac.transpose() * r;
        Eigen::VectorXd diag = jtj.diagonal().cwiseMax(1e-300);
        if (lambda < 0.0) {
            lambda = 1e-3 * diag.maxCoeff();
        }
        bool accepted = false;
        Eigen::VectorXd step;
        while (lambda < 1e300) {
            Eigen::MatrixXd a = jtj;
            a.diagonal() += lambda * diag;
            step = a.ldlt().solve(-g);
            Eigen::VectorXd trial = theta + step;
            Eigen::VectorXd r_new;
            Eigen::MatrixXd j_new;
            model(trial, r_new, j_new);
            const double c_new = r_new.squaredNorm();
            if (std::isfinite(c_new) && c_new <= cost) {
                theta = trial;
                r = std::move(r_new);
                jac = std::move(j_new);
                cost = c_new;
                lambda = std::max(lambda / 10.0, 1e-300);
                accepted = true;
                break;
            }
            lambda *= 10.0;
            if (step.norm() <= opts.step_tol * (theta.norm() + opts.step_tol)) {
                break;
            }
        }
        out.iterations = it;
        if (accepted) {
            out.history.push_back(cost);
        }
        if (step.norm() <= opts.step_tol * (theta.norm() + opts.step_tol) || !accepted) {
            out.theta = theta;
            out.cost = cost;
            return out;
        }
    }
    throw FitError("least-squares fit did not converge in " + std::to_string(opts.max_iterations) +
                   " iterations (cost " + std::to_string(cost) + ")");
}

DecayFit fit_decay(DecayShape shape, std::span<const double> t_in, std::span<const double> y_in,
                   FitWindow window, const FitOptions& opts) {
    const Series s = select(t_in, y_in, window);
    const auto n = static_cast<Eigen::Index>(s.t.size());
    const auto [ymin, ymax] = std::minmax_element(s.y.begin(), s.y.end());
    if (*ymax - *ymin <= 1e-14 * std::max(1.0, std::abs(*ymax))) {
        throw FitError("cannot fit a decay to a constant series");
    }

    // initial guess: tail mean, y(0) - offset, log-slope of the first third
    const std::size_t tail = std::max<std::size_t>(1, s.y.size() / 10);
    double offset0 = 0.0;
    for (std::size_t k = s.y.size() - tail; k < s.y.size(); ++k) {
        offset0 += s.y[k];
    }
    offset0 /= static_cast<double>(tail);
    const double amp0 = s.y.front() - offset0;
    const double t0 = s.t.front();
    const double span_t = s.t.back() - t0;
    double tau0 = span_t / 3.0;
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (std::size_t k = 0; k < s.y.size() / 3 + 1; ++k) {
            const double v = (s.y[k] - offset0) / amp0;
            if (v > 0.0 && amp0 != 0.0) {
                const double x = shape == DecayShape::exponential ? s.t[k] - t0
                                                                   : (s.t[k] - t0) * (s.t[k] - t0);
                const double l = std::log(v);
                sx += x;
                sy += l;
                sxx += x * x;
                sxy += x * l;
                ++m;
            }
        }
        const double den = m * sxx - sx * sx;
        if (m >= 2 && den > 0.0) {
            const double slope = (m * sxy - sx * sy) / den;
            if (slope < 0.0) {
                tau0 = shape == DecayShape::exponential ? -1.0 / slope : std::sqrt(-1.0 / slope);
            }
        }
        if (!(tau0 > 0.0) || !std::isfinite(tau0)) {
            tau0 = span_t > 0.0 ? span_t / 3.0 : 1.0;
        }
    }
    // The amplitude is quoted at t = 0 of the model, so shift the guess from t0.
    const double amp_guess = shape == DecayShape::exponential
                                 ? amp0 * std::exp(t0 / tau0)
                                 : amp0 * std::exp((t0 / tau0) * (t0 / tau0));

    const Model model = [&](const Eigen::VectorXd& th, Eigen::VectorXd& r, Eigen::MatrixXd& jac) {
        r.resize(n);
        jac.resize(n, 3);
        const double tau = std::exp(th(2));
        for (Eigen::Index k = 0; k < n; ++k) {
            const double t = s.t[static_cast<std::size_t>(k)];
            const double u = t / tau;
            const double e = shape == DecayShape::exponential ? std::exp(-u) : std::exp(-u * u);
            r(k) = th(0) + th(1) * e - s.y[static_cast<std::size_t>(k)];
            jac(k, 0) = 1.0;
            jac(k, 1) = e;
            jac(k, 2) = shape == DecayShape::exponential ? th(1) * e * u : th(1) * e * 2.0 * u * u;
        }
    };
    Eigen::VectorXd theta(3);
    theta << offset0, std::isfinite(amp_guess) ? amp_guess : amp0, std::log(tau0);
    const LmResult res = levenberg_marquardt(model, theta, opts);

    DecayFit fit;
    fit.shape = shape;
    fit.offset = res.theta(0);
    fit.amplitude = res.theta(1);
    fit.tau_decay = std::exp(res.theta(2));
    fit.rms_residual = std::sqrt(res.cost / static_cast<double>(n));
    fit.window = {s.t.front(), s.t.back()};
    fit.n_samples = static_cast<int>(n);
    fit.iterations = res.iterations;
    fit.cost_history = res.history;
    return fit;
}

} // namespace

DecayFit fit_exponential(std::span<const double> t, std::span<const double> y, FitWindow window,
                         const FitOptions& opts) {
    return fit_decay(DecayShape::exponential, t, y, window, opts);
}

DecayFit fit_gaussian_decay(std::span<const double> t, std::span<const double> y, FitWindow window,
                            const FitOptions& opts) {
    return fit_decay(DecayShape::gaussian, t, y, window, opts);
}

RateFit fit_offdiag_exponential(std::span<const double> t_in, std::span<const double> y_in, FitWindow window,
                                const FitOptions& opts) {
    const Series s = select(t_in, y_in, window);
    const auto n = static_cast<Eigen::Index>(s.t.size());

    // guess from the least-squares slope of ln(2y) through the origin
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t k = 0; k < s.t.size(); ++k) {
        if (s.y[k] > 0.0) {
            sxy += s.t[k] * std::log(2.0 * s.y[k]);
            sxx += s.t[k] * s.t[k];
        }
    }
    const double a0 = sxx > 0.0 ? -sxy / sxx : 0.0;

    const Model model = [&](const Eigen::VectorXd& th, Eigen::VectorXd& r, Eigen::MatrixXd& jac) {
        r.resize(n);
        jac.resize(n, 1);
        for (Eigen::Index k = 0; k < n; ++k) {
            const double t = s.t[static_cast<std::size_t>(k)];
            const double e = 0.5 * std::exp(-th(0) * t);
            r(k) = e - s.y[static_cast<std::size_t>(k)];
            jac(k, 0) = -t * e;
        }
    };
    Eigen::VectorXd theta(1);
    theta << (std::isfinite(a0) ? a0 : 0.0);
    const LmResult res = levenberg_marquardt(model, theta, opts);
    RateFit fit;
    fit.rate = res.theta(0);
    fit.rms_residual = std::sqrt(res.cost / static_cast<double>(n));
    fit.n_samples = static_cast<int>(n);
    fit.iterations = res.iterations;
    return fit;
}

double melik_curve(double t, int n_env, double delta, double j) {
    if (n_env < 1) {
        throw std::invalid_argument("melik_curve: environment size must be at least 1");
    }
    const double b = n_env * delta * delta / 4.0;
    const double c = b / 2.0;
    const double omega = j - delta;
    return (1.0 / 6.0 + (1.0 - b * t * t) / 3.0 * std::exp(-c * t * t)) * std::cos(omega * t);
}

double transient_end(std::span<const double> t, std::span<const double> sigma, double fraction) {
    if (t.size() != sigma.size() || t.empty()) {
        throw FitError("transient_end needs matching, non-empty series");
    }
    const double threshold = fraction * sigma[0];
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (sigma[k] < threshold) {
            return t[k];
        }
    }
    return std::numeric_limits<double>::infinity();
}

} // namespace spinbath
