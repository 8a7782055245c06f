#include <algorithm>
#include <cmath>

#include "rxnpack/sim.hpp"

namespace rxn {

namespace {

struct OdeReaction {
    enum class Form { Constant, Unimolecular, Bimolecular, Homodimer, MichaelisMenten, Hill };
    Form form = Form::Constant;
    double c = 0.0;
    double vmax = 0.0, Km = 0.0;
    double kms = 0.0, Jn = 0.0;
    int n = 0;
    std::size_t s0 = 0, s1 = 0;
    std::vector<std::pair<std::size_t, int>> delta;
};

struct ImmediateRoute {
    std::size_t reactant = 0;
    std::vector<std::pair<std::size_t, int>> products;
};

struct OdeSystem {
    std::vector<OdeReaction> reactions;
    std::vector<ImmediateRoute> routes;
    std::size_t dim = 0;

    // Deterministic reaction rate in count units. A homodimerization
    // 2X -> ... contributes rate c*x^2/2 (large-count limit of the
    // stochastic c*x*(x-1)/2).
    void derivative(const std::vector<double>& y, std::vector<double>& dy) const {
        std::fill(dy.begin(), dy.end(), 0.0);
        for (const auto& r : reactions) {
            double rate = 0.0;
            switch (r.form) {
            case OdeReaction::Form::Constant:
                rate = r.c;
                break;
            case OdeReaction::Form::Unimolecular:
                rate = r.c * std::max(y[r.s0], 0.0);
                break;
            case OdeReaction::Form::Bimolecular:
                rate = r.c * std::max(y[r.s0], 0.0) * std::max(y[r.s1], 0.0);
                break;
            case OdeReaction::Form::Homodimer: {
                double v = std::max(y[r.s0], 0.0);
                rate = 0.5 * r.c * v * v;
                break;
            }
            case OdeReaction::Form::MichaelisMenten: {
                double S = std::max(y[r.s0], 0.0);
                rate = r.vmax * S / (r.Km + S);
                break;
            }
            case OdeReaction::Form::Hill: {
                double X = std::max(y[r.s0], 0.0);
                double Xn = 1.0, Jn = r.Jn;
                for (int i = 0; i < r.n; ++i) Xn *= X;
                rate = X > 0.0 ? r.kms * Xn / (Jn + Xn) : 0.0;
                break;
            }
            }
            for (const auto& [idx, d] : r.delta) dy[idx] += rate * static_cast<double>(d);
        }
        // Infinite-rate limit of zero-delay reactions: the reactant never
        // accumulates; production flux is forwarded to the products.
        for (int pass = 0; pass < 8; ++pass) {
            bool moved = false;
            for (const auto& route : routes) {
                double inflow = dy[route.reactant];
                if (inflow != 0.0) {
                    dy[route.reactant] = 0.0;
                    if (inflow > 0.0) {
                        for (const auto& [idx, coeff] : route.products)
                            dy[idx] += inflow * static_cast<double>(coeff);
                        moved = true;
                    }
                }
            }
            if (!moved) break;
        }
    }
};

OdeSystem build_system(const ReactionNetwork& network) {
    OdeSystem sys;
    sys.dim = network.species.size();
    for (const auto& r : network.reactions) {
        if (r.immediate) {
            if (r.reactants.size() != 1 || r.reactants[0].second != 1)
                throw Error(ErrorKind::Domain,
                            "ODE form of immediate reaction '" + r.id +
                                "' requires a single unit-stoichiometry reactant");
            ImmediateRoute route;
            route.reactant = network.species_index(r.reactants[0].first);
            for (const auto& [id, coeff] : r.products)
                route.products.emplace_back(network.species_index(id), coeff);
            sys.routes.push_back(std::move(route));
            continue;
        }

        OdeReaction orx;
        for (const auto& [id, d] : net_change(r)) orx.delta.emplace_back(network.species_index(id), d);
        const RateLaw& law = r.rate_law;
        switch (law.kind) {
        case RateLaw::Kind::MassAction: {
            orx.c = law.c;
            int molecules = 0;
            for (const auto& [id, coeff] : r.reactants) molecules += coeff;
            if (molecules == 0) {
                orx.form = OdeReaction::Form::Constant;
            } else if (molecules == 1) {
                orx.form = OdeReaction::Form::Unimolecular;
                orx.s0 = network.species_index(r.reactants[0].first);
            } else if (r.reactants.size() == 1) {
                orx.form = OdeReaction::Form::Homodimer;
                orx.s0 = network.species_index(r.reactants[0].first);
            } else {
                orx.form = OdeReaction::Form::Bimolecular;
                orx.s0 = network.species_index(r.reactants[0].first);
                orx.s1 = network.species_index(r.reactants[1].first);
            }
            break;
        }
        case RateLaw::Kind::MichaelisMenten:
            orx.form = OdeReaction::Form::MichaelisMenten;
            orx.vmax = law.vmax;
            orx.Km = law.Km;
            orx.s0 = network.species_index(law.substrate);
            break;
        case RateLaw::Kind::Hill:
            orx.form = OdeReaction::Form::Hill;
            orx.kms = law.kms;
            orx.n = law.n;
            orx.Jn = 1.0;
            for (int i = 0; i < law.n; ++i) orx.Jn *= law.J;
            orx.s0 = network.species_index(law.regulator);
            break;
        }
        sys.reactions.push_back(std::move(orx));
    }
    return sys;
}

// Dormand-Prince 5(4) coefficients.
constexpr double A21 = 1.0 / 5.0;
constexpr double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0;
constexpr double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0;
constexpr double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0, A53 = 64448.0 / 6561.0,
                 A54 = -212.0 / 729.0;
constexpr double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0,
                 A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0;
constexpr double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0,
                 B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0;
constexpr double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0,
                 E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0;

} // namespace

Trajectory simulate_ode(const ReactionNetwork& network, const OdeConfig& config) {
    if (!(config.t_end > 0.0)) throw Error(ErrorKind::Domain, "t_end must be positive");
    if (!(config.dt_record > 0.0)) throw Error(ErrorKind::Domain, "dt_record must be positive");

    OdeSystem sys = build_system(network);
    const std::size_t dim = sys.dim;

    Trajectory traj;
    for (const auto& sp : network.species) traj.species.push_back(sp.id);

    std::vector<double> y(dim);
    for (std::size_t i = 0; i < dim; ++i) y[i] = static_cast<double>(network.species[i].initial_count);
    // Drain any initially present zero-delay reactants.
    for (const auto& route : sys.routes) {
        double v = y[route.reactant];
        if (v > 0.0) {
            y[route.reactant] = 0.0;
            for (const auto& [idx, coeff] : route.products) y[idx] += v * coeff;
        }
    }

    const std::size_t n_points =
        static_cast<std::size_t>(std::floor(config.t_end / config.dt_record + 1e-9)) + 1;

    auto record = [&traj, &y](double at) {
        traj.times.push_back(at);
        traj.rows.emplace_back(y.begin(), y.end());
    };
    record(0.0);

    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
    std::vector<double> ytmp(dim), ynew(dim);

    double t = 0.0;
    double h = std::min(config.dt_record, config.t_end) / 16.0;
    std::size_t next_point = 1;
    std::size_t steps = 0;

    sys.derivative(y, k1); // FSAL seed

    while (next_point < n_points) {
        const double t_target = static_cast<double>(next_point) * config.dt_record;
        const double h_max = t_target - t;
        bool hit_target = false;
        if (h >= h_max) {
            h = h_max;
            hit_target = true;
        }

        for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * A21 * k1[i];
        sys.derivative(ytmp, k2);
        for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        sys.derivative(ytmp, k3);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        sys.derivative(ytmp, k4);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        sys.derivative(ytmp, k5);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        sys.derivative(ytmp, k6);
        for (std::size_t i = 0; i < dim; ++i)
            ynew[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        sys.derivative(ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            double e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] +
                            E7 * k7[i]);
            double scale =
                config.abs_tol + config.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            double q = e / scale;
            err += q * q;
        }
        err = std::sqrt(err / static_cast<double>(std::max<std::size_t>(dim, 1)));

        if (err <= 1.0) {
            t += h;
            y.swap(ynew);
            k1.swap(k7);
            if (hit_target) {
                t = t_target; // avoid accumulated drift on the grid
                record(t_target);
                ++next_point;
            }
        }

        double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        factor = std::clamp(factor, 0.2, 5.0);
        h *= factor;

        if (!(h > 1e-13 * std::max(1.0, t)))
            throw Error(ErrorKind::Numerical,
                        "ODE step size underflow (stiff system; consider a smaller rho)");
        if (++steps > 200000000ULL)
            throw Error(ErrorKind::Numerical, "ODE step limit exceeded");
    }

    traj.terminated_reason = TerminatedReason::ReachedTEnd;
    traj.events = steps;
    return traj;
}

} // namespace rxn
