// Calibration helper for the clock defaults.
//
//   clock_calibrate                     report the default packed ODE period
//   clock_calibrate <t_end> <scale>     same, with every rate scaled
//   clock_calibrate search <N> [seed]   random search for oscillating sets
//
// Scaling every rate constant by s divides the period by s and leaves
// amplitudes unchanged, so any oscillating set can be mapped onto 1440 min.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "rxnpack/analysis.hpp"
#include "rxnpack/models.hpp"
#include "rxnpack/rng.hpp"
#include "rxnpack/sim.hpp"

using namespace rxn;

namespace {

ClockParams scaled_rates(ClockParams p, double s) {
    p.kms *= s;
    p.kt *= s;
    p.kd_f *= s;
    p.kd_b *= s;
    p.ki_f *= s;
    p.ki_b *= s;
    p.vmax_M *= s;
    p.vmax_CP *= s;
    p.vmax_C *= s;
    p.kbg_M *= s;
    p.kbg_CP *= s;
    p.kbg_CP2 *= s;
    p.kbg_C *= s;
    p.hill_s1 *= s;
    p.hill_s2 *= s;
    return p;
}

struct Score {
    bool oscillating = false;
    double period = 0.0;
    double amplitude = 0.0;
    std::size_t peaks = 0;
};

Score score_params(const ClockParams& p, double t_end) {
    try {
        Trajectory traj = simulate_ode(build_clock_model(p, true), {t_end, 1e-7, 1e-9, 2.0});
        // skip the transient third
        Trajectory tail;
        tail.species = traj.species;
        std::size_t start = traj.times.size() / 3;
        for (std::size_t i = start; i < traj.times.size(); ++i) {
            tail.times.push_back(traj.times[i]);
            tail.rows.push_back(traj.rows[i]);
        }
        PeriodResult pr = detect_period(tail, "CP", 120.0);
        Score s;
        s.oscillating = pr.oscillating && pr.n_peaks >= 3 && pr.amplitude > 20.0;
        s.period = pr.period;
        s.amplitude = pr.amplitude;
        s.peaks = pr.n_peaks;
        return s;
    } catch (const Error&) {
        return {};
    }
}

void print_params(const ClockParams& p) {
    std::printf("    kms=%.4g J=%.4g kt=%.4g kd=(%.4g,%.4g) ki=(%.4g,%.4g)\n", p.kms, p.J, p.kt,
                p.kd_f, p.kd_b, p.ki_f, p.ki_b);
    std::printf("    degM=(%.4g,%.4g) degCP=(%.4g,%.4g) degC=(%.4g,%.4g)\n", p.vmax_M, p.Km_M,
                p.vmax_CP, p.Km_CP, p.vmax_C, p.Km_C);
    std::printf("    bg=(%.4g,%.4g,%.4g,%.4g) TFtot=%lld\n", p.kbg_M, p.kbg_CP, p.kbg_CP2, p.kbg_C,
                static_cast<long long>(p.TF_tot));
}

int run_search(int trials, std::uint64_t seed) {
    Xoshiro256pp rng(seed);
    auto logu = [&rng](double lo, double hi) {
        return lo * std::pow(hi / lo, rng.next_double());
    };

    int found = 0;
    for (int trial = 0; trial < trials; ++trial) {
        // multiplicative jitter around the current defaults
        ClockParams p = default_clock_params();
        p.kms *= logu(0.33, 3.0);
        p.J *= logu(0.5, 2.0);
        p.kt *= logu(0.33, 3.0);
        p.vmax_M *= logu(0.33, 3.0);
        p.vmax_CP *= logu(0.33, 3.0);
        p.vmax_C *= logu(0.33, 3.0);
        p.Km_M *= logu(0.5, 2.0);
        p.Km_CP *= logu(0.5, 2.0);
        p.Km_C *= logu(0.5, 2.0);
        p.kbg_M *= logu(0.2, 2.0);
        p.kbg_CP *= logu(0.2, 2.0);
        p.kbg_CP2 *= logu(0.2, 2.0);
        p.kbg_C *= logu(0.2, 2.0);
        p.ki_b *= logu(0.2, 3.0);
        p.kt = std::min(p.kt, 0.2);

        Score s = score_params(p, 14400.0);
        if (s.oscillating) {
            ++found;
            std::printf("[%d] period=%.1f amplitude=%.1f peaks=%zu\n", trial, s.period, s.amplitude,
                        s.peaks);
            print_params(p);
        }
    }
    std::printf("%d oscillating sets out of %d trials\n", found, trials);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 1 && std::strcmp(argv[1], "search") == 0) {
        int trials = argc > 2 ? std::atoi(argv[2]) : 200;
        std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1;
        return run_search(trials, seed);
    }

    double t_end = argc > 1 ? std::atof(argv[1]) : 14400.0;
    double scale = argc > 2 ? std::atof(argv[2]) : 1.0;

    ClockParams params = scaled_rates(default_clock_params(), scale);
    ReactionNetwork packed = build_clock_model(params, true);

    OdeConfig cfg;
    cfg.t_end = t_end;
    cfg.dt_record = 1.0;
    Trajectory traj = simulate_ode(packed, cfg);

    for (const auto* sp : {"M", "CP", "C", "TF", "CP2"}) {
        PeriodResult pr = detect_period(traj, sp, 120.0);
        std::printf("%-4s oscillating=%d period=%.2f amplitude=%.2f peaks=%zu\n", sp,
                    pr.oscillating ? 1 : 0, pr.period, pr.amplitude, pr.n_peaks);
    }

    PeriodResult cp = detect_period(traj, "CP", 120.0);
    if (cp.oscillating)
        std::printf("suggested rate scale for 1440 min: %.6f (apply on top of %.4f)\n",
                    cp.period / 1440.0 * scale, scale);

    // Minima after the initial transient, for choosing enzyme totals.
    std::size_t start = traj.times.size() / 4;
    for (const auto* sp : {"M", "CP", "C"}) {
        auto series = traj.series(sp);
        double mn = series[start], mx = series[start];
        for (std::size_t i = start; i < series.size(); ++i) {
            mn = std::min(mn, series[i]);
            mx = std::max(mx, series[i]);
        }
        std::printf("%-4s min=%.2f max=%.2f  -> Etot suggestion %.1f\n", sp, mn, mx, 0.1 * mn);
    }
    return 0;
}
