#include "rxnpack/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rxn {

double hill_curve(double X, double n, double J) {
    if (X <= 0.0) return 0.0;
    double r = std::pow(J / X, n);
    return 1.0 / (1.0 + r);
}

double sequential_binding_equilibrium(double TF_total, double K1, double K2) {
    if (TF_total <= 0.0) return 0.0;
    // 2*TF^2/K1 + TF - TF_total = 0, stable root.
    double TF = 2.0 * TF_total / (1.0 + std::sqrt(1.0 + 8.0 * TF_total / K1));
    double TF2 = TF * TF / K1;
    return TF2 / (K2 + TF2);
}

namespace {

struct SlopeFit {
    double slope = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

SlopeFit least_squares_slope(const std::vector<double>& t, const std::vector<double>& y,
                             std::size_t count) {
    SlopeFit fit;
    fit.n = count;
    double tm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        tm += t[i];
        ym += y[i];
    }
    tm /= static_cast<double>(count);
    ym /= static_cast<double>(count);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        double dt = t[i] - tm;
        sxx += dt * dt;
        sxy += dt * (y[i] - ym);
    }
    if (sxx <= 0.0) throw Error(ErrorKind::InsufficientData, "degenerate time window");
    fit.slope = sxy / sxx;
    if (count > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            double r = y[i] - ym - fit.slope * (t[i] - tm);
            rss += r * r;
        }
        fit.se = std::sqrt(std::max(rss, 0.0) / static_cast<double>(count - 2) / sxx);
    }
    return fit;
}

} // namespace

RateEstimate initial_rate(const Trajectory& trajectory, const std::string& product,
                          const std::optional<std::string>& substrate, double depletion_cap) {
    if (trajectory.times.size() < 3)
        throw Error(ErrorKind::InsufficientData,
                    "initial-rate estimation needs at least 3 samples; refine the recording grid");
    std::vector<double> p = trajectory.series(product);
    std::size_t window = trajectory.times.size();
    if (substrate) {
        std::vector<double> s = trajectory.series(*substrate);
        const double floor_count = s[0] - depletion_cap * s[0];
        window = 1;
        while (window < s.size() && s[window] >= floor_count) ++window;
        // A replicate may blow through the cap within the first samples by
        // chance; three samples is the floor for a defined slope.
        window = std::max<std::size_t>(window, 3);
    }
    SlopeFit fit = least_squares_slope(trajectory.times, p, window);
    return {fit.slope, fit.se, fit.n};
}

std::vector<SaturationPoint> saturation_curve(const std::function<ReactionNetwork(double)>& builder,
                                              const std::vector<double>& S0_list, std::size_t n_runs,
                                              const SaturationProtocol& protocol) {
    if (S0_list.empty()) throw Error(ErrorKind::Domain, "S0 list is empty");
    std::vector<SaturationPoint> points;
    points.reserve(S0_list.size());
    for (std::size_t k = 0; k < S0_list.size(); ++k) {
        const double S0 = S0_list[k];
        ReactionNetwork net = builder(S0);

        SsaConfig cfg;
        cfg.t_end = protocol.t_end;
        cfg.dt = protocol.dt;
        cfg.recording = Recording::FixedGrid;
        cfg.seed = derive_stream_seed(protocol.seed, 0x5a70 + k);
        Ensemble ens = run_ensemble(net, cfg, n_runs, protocol.n_threads);

        double sum = 0.0, sumsq = 0.0;
        for (const auto& rep : ens.replicates) {
            RateEstimate est = initial_rate(rep, protocol.product, protocol.substrate,
                                            protocol.depletion_cap);
            sum += est.rate;
            sumsq += est.rate * est.rate;
        }
        const double n = static_cast<double>(n_runs);
        double mean = sum / n;
        double var = n > 1 ? std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0)) : 0.0;
        points.push_back({S0, mean, std::sqrt(var / n)});
    }
    return points;
}

double binding_fraction(const Ensemble& ensemble, const std::string& bound, double total,
                        double burn_in) {
    if (!(total > 0.0)) throw Error(ErrorKind::Domain, "total must be positive");
    if (ensemble.replicates.empty()) throw Error(ErrorKind::Domain, "empty ensemble");
    double acc = 0.0;
    std::size_t n = 0;
    for (const auto& rep : ensemble.replicates) {
        std::size_t col = rep.column(bound);
        std::size_t start = static_cast<std::size_t>(burn_in * static_cast<double>(rep.rows.size()));
        for (std::size_t i = start; i < rep.rows.size(); ++i) {
            acc += rep.rows[i][col];
            ++n;
        }
    }
    if (n == 0) throw Error(ErrorKind::InsufficientData, "no samples after burn-in");
    return acc / (static_cast<double>(n) * total);
}

namespace {

double half_crossing_guess(std::vector<BindingCurvePoint> pts) {
    std::sort(pts.begin(), pts.end(),
              [](const BindingCurvePoint& a, const BindingCurvePoint& b) { return a.TF_total < b.TF_total; });
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i - 1].bound_fraction < 0.5 && pts[i].bound_fraction >= 0.5) {
            double x1 = std::log(pts[i - 1].TF_total), x2 = std::log(pts[i].TF_total);
            double y1 = pts[i - 1].bound_fraction, y2 = pts[i].bound_fraction;
            return std::exp(x1 + (0.5 - y1) * (x2 - x1) / (y2 - y1));
        }
    }
    return pts[pts.size() / 2].TF_total;
}

double sse_hill(const std::vector<BindingCurvePoint>& pts, double n, double J) {
    double sse = 0.0;
    for (const auto& p : pts) {
        double r = hill_curve(p.TF_total, n, J) - p.bound_fraction;
        sse += r * r;
    }
    return sse;
}

} // namespace

HillFit fit_hill(const std::vector<BindingCurvePoint>& points) {
    if (points.size() < 4)
        throw Error(ErrorKind::InsufficientData, "need at least 4 binding-curve points");
    double ymin = 1.0, ymax = 0.0;
    for (const auto& p : points) {
        ymin = std::min(ymin, p.bound_fraction);
        ymax = std::max(ymax, p.bound_fraction);
        if (!(p.TF_total > 0.0)) throw Error(ErrorKind::Domain, "abscissa must be positive");
    }
    if (!(ymin < 0.5 && ymax > 0.5))
        throw Error(ErrorKind::Unfittable, "points do not cross half-saturation");

    const double J0 = half_crossing_guess(points);
    const std::size_t N = points.size();

    HillFit best;
    double best_sse = std::numeric_limits<double>::infinity();

    for (double n_start : {0.5, 1.0, 2.0, 4.0}) {
        // Damped Gauss-Newton over p = (log n, log J); dF/dlogJ = -n*F*(1-F),
        // dF/dlogn = -n*log(J/X)*F*(1-F).
        double ln_n = std::log(n_start);
        double ln_J = std::log(J0);
        double lambda = 1e-3;
        double sse = sse_hill(points, std::exp(ln_n), std::exp(ln_J));

        for (int iter = 0; iter < 400; ++iter) {
            double n = std::exp(ln_n), J = std::exp(ln_J);
            double h11 = 0.0, h12 = 0.0, h22 = 0.0, g1 = 0.0, g2 = 0.0;
            for (const auto& p : points) {
                double F = hill_curve(p.TF_total, n, J);
                double w = F * (1.0 - F);
                double d_ln = -n * std::log(J / p.TF_total) * w; // d/d(log n)
                double d_lJ = -n * w;                            // d/d(log J)
                double r = F - p.bound_fraction;
                h11 += d_ln * d_ln;
                h12 += d_ln * d_lJ;
                h22 += d_lJ * d_lJ;
                g1 += d_ln * r;
                g2 += d_lJ * r;
            }
            bool improved = false;
            for (int attempt = 0; attempt < 40; ++attempt) {
                double a11 = h11 * (1.0 + lambda), a22 = h22 * (1.0 + lambda), a12 = h12;
                double det = a11 * a22 - a12 * a12;
                if (det == 0.0 || !std::isfinite(det)) break;
                double s1 = (-g1 * a22 + g2 * a12) / det;
                double s2 = (-g2 * a11 + g1 * a12) / det;
                double ln_n_new = std::clamp(ln_n + s1, std::log(0.05), std::log(50.0));
                double ln_J_new = ln_J + s2;
                double sse_new = sse_hill(points, std::exp(ln_n_new), std::exp(ln_J_new));
                if (sse_new < sse) {
                    double gain = sse - sse_new;
                    ln_n = ln_n_new;
                    ln_J = ln_J_new;
                    sse = sse_new;
                    lambda = std::max(lambda / 3.0, 1e-12);
                    improved = gain > 1e-10 * (1.0 + sse);
                    break;
                }
                lambda *= 10.0;
                if (lambda > 1e12) break;
            }
            if (!improved) break;
        }
        if (sse < best_sse) {
            best_sse = sse;
            best.n_prime = std::exp(ln_n);
            best.J_prime = std::exp(ln_J);
        }
    }
    best.rmse = std::sqrt(best_sse / static_cast<double>(N));
    return best;
}

double rmse_vs_theoretical(const std::vector<BindingCurvePoint>& points, double n, double J) {
    if (points.empty()) throw Error(ErrorKind::Domain, "no points");
    double sse = 0.0;
    for (const auto& p : points) {
        double r = p.bound_fraction - hill_curve(p.TF_total, n, J);
        sse += r * r;
    }
    return std::sqrt(sse / static_cast<double>(points.size()));
}

namespace {

double interpolate_crossing(const std::vector<BindingCurvePoint>& sorted, double level) {
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        double y1 = sorted[i - 1].bound_fraction, y2 = sorted[i].bound_fraction;
        if (y1 < level && y2 >= level) {
            double x1 = std::log(sorted[i - 1].TF_total), x2 = std::log(sorted[i].TF_total);
            return std::exp(x1 + (level - y1) * (x2 - x1) / (y2 - y1));
        }
    }
    if (!sorted.empty() && sorted.front().bound_fraction >= level)
        return sorted.front().TF_total;
    throw Error(ErrorKind::Range,
                "curve does not attain the " + std::to_string(level) + " saturation level");
}

} // namespace

double response_coefficient(const std::vector<BindingCurvePoint>& points) {
    if (points.size() < 2) throw Error(ErrorKind::Range, "need at least 2 points");
    std::vector<BindingCurvePoint> sorted = points;
    std::sort(sorted.begin(), sorted.end(),
              [](const BindingCurvePoint& a, const BindingCurvePoint& b) { return a.TF_total < b.TF_total; });
    double s01 = interpolate_crossing(sorted, 0.1);
    double s09 = interpolate_crossing(sorted, 0.9);
    return s09 / s01;
}

double response_coefficient(const std::function<double(double)>& curve, double lo, double hi) {
    if (!(lo > 0.0) || !(hi > lo)) throw Error(ErrorKind::Domain, "invalid bracket");
    if (!(curve(lo) < 0.1) || !(curve(hi) > 0.9))
        throw Error(ErrorKind::Range, "bracket does not cover the 10-90% saturation range");
    auto invert = [&curve](double level, double a, double b) {
        for (int i = 0; i < 200; ++i) {
            double mid = std::sqrt(a * b); // bisect in log space
            if (curve(mid) < level)
                a = mid;
            else
                b = mid;
        }
        return std::sqrt(a * b);
    };
    double s01 = invert(0.1, lo, hi);
    double s09 = invert(0.9, lo, hi);
    return s09 / s01;
}

double hill_coeff_from_R(double R) {
    if (!(R > 1.0)) throw Error(ErrorKind::Domain, "response coefficient must exceed 1");
    return std::log(81.0) / std::log(R);
}

PeriodResult detect_period(const Trajectory& trajectory, const std::string& species,
                           double smoothing_window) {
    PeriodResult result;
    const std::vector<double>& t = trajectory.times;
    std::vector<double> y = trajectory.series(species);
    if (t.size() < 5) return result;

    const double dt = t.size() > 1 ? t[1] - t[0] : 1.0;
    const std::size_t half = static_cast<std::size_t>(
        std::max(0.0, std::round(smoothing_window / (2.0 * dt))));

    std::vector<double> smooth(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        std::size_t lo = i >= half ? i - half : 0;
        std::size_t hi = std::min(y.size() - 1, i + half);
        double s = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) s += y[j];
        smooth[i] = s / static_cast<double>(hi - lo + 1);
    }

    double mean = std::accumulate(smooth.begin(), smooth.end(), 0.0) / smooth.size();
    double var = 0.0;
    for (double v : smooth) var += (v - mean) * (v - mean);
    var /= static_cast<double>(smooth.size());
    const double threshold = mean + 0.25 * std::sqrt(var);

    // candidate local maxima above the threshold
    std::vector<std::size_t> candidates;
    for (std::size_t i = 1; i + 1 < smooth.size(); ++i) {
        if (smooth[i] > threshold && smooth[i] > smooth[i - 1] && smooth[i] >= smooth[i + 1])
            candidates.push_back(i);
    }
    // enforce the minimum separation, preferring taller peaks
    std::sort(candidates.begin(), candidates.end(),
              [&smooth](std::size_t a, std::size_t b) { return smooth[a] > smooth[b]; });
    std::vector<std::size_t> peaks;
    for (std::size_t c : candidates) {
        bool clear = std::all_of(peaks.begin(), peaks.end(), [&](std::size_t p) {
            return std::abs(t[p] - t[c]) >= smoothing_window;
        });
        if (clear) peaks.push_back(c);
    }
    std::sort(peaks.begin(), peaks.end());

    result.n_peaks = peaks.size();
    for (std::size_t p : peaks) {
        result.peak_times.push_back(t[p]);
        result.peak_values.push_back(smooth[p]);
    }
    if (peaks.size() < 2) return result; // flagged: no oscillation

    double interval_sum = 0.0;
    double amplitude_sum = 0.0;
    for (std::size_t i = 1; i < peaks.size(); ++i) {
        interval_sum += t[peaks[i]] - t[peaks[i - 1]];
        double trough = smooth[peaks[i - 1]];
        for (std::size_t j = peaks[i - 1]; j <= peaks[i]; ++j) trough = std::min(trough, smooth[j]);
        amplitude_sum += 0.5 * (smooth[peaks[i - 1]] + smooth[peaks[i]]) - trough;
    }
    result.oscillating = true;
    result.period = interval_sum / static_cast<double>(peaks.size() - 1);
    result.amplitude = amplitude_sum / static_cast<double>(peaks.size() - 1);
    return result;
}

EnsembleStats ensemble_stats(const Ensemble& ensemble) {
    if (ensemble.replicates.size() < 2)
        throw Error(ErrorKind::Domain, "ensemble statistics need at least 2 replicates");
    const auto& times = ensemble.times;
    for (const auto& rep : ensemble.replicates)
        if (rep.times != times)
            throw Error(ErrorKind::Grid, "replicates do not share the recording grid");

    EnsembleStats stats;
    stats.species = ensemble.species;
    stats.times = times;
    const std::size_t T = times.size();
    const std::size_t S = ensemble.species.size();
    const double n = static_cast<double>(ensemble.replicates.size());

    stats.mean.assign(T, std::vector<double>(S, 0.0));
    stats.stddev.assign(T, std::vector<double>(S, 0.0));
    for (const auto& rep : ensemble.replicates)
        for (std::size_t i = 0; i < T; ++i)
            for (std::size_t j = 0; j < S; ++j) stats.mean[i][j] += rep.rows[i][j];
    for (std::size_t i = 0; i < T; ++i)
        for (std::size_t j = 0; j < S; ++j) stats.mean[i][j] /= n;
    for (const auto& rep : ensemble.replicates)
        for (std::size_t i = 0; i < T; ++i)
            for (std::size_t j = 0; j < S; ++j) {
                double d = rep.rows[i][j] - stats.mean[i][j];
                stats.stddev[i][j] += d * d;
            }
    for (std::size_t i = 0; i < T; ++i)
        for (std::size_t j = 0; j < S; ++j)
            stats.stddev[i][j] = std::sqrt(stats.stddev[i][j] / (n - 1.0));
    return stats;
}

} // namespace rxn
