#include "rxnpack/models.hpp"

#include <cmath>
#include <sstream>

namespace rxn {

ReactionNetwork build_mm_model(double vmax, double Km, Count Etot, Count S0, bool packed,
                               double rho) {
    if (!(vmax > 0.0) || !(Km > 0.0) || Etot <= 0 || S0 < 0)
        throw Error(ErrorKind::Domain, "mm model needs positive vmax, Km, Etot and S0 >= 0");
    ReactionNetwork net;
    net.name = packed ? "mm_packed" : "mm_unpacked";
    net.species = {{"S", S0}, {"P", 0}};
    net.parameters = {{"vmax", vmax}, {"Km", Km}};
    Reaction r;
    r.id = "r1";
    r.reactants = {{"S", 1}};
    r.products = {{"P", 1}};
    r.rate_law = RateLaw::michaelis_menten(vmax, Km, "S");
    net.reactions.push_back(r);
    if (packed) return net;
    auto [unpacked, exp] = unpack_mm(net, "r1", Etot, MmUnpackOptions{rho, std::nullopt});
    return unpacked;
}

const std::vector<HillSet>& hill_sets() {
    // k columns of the eight-set study; set 6's k1 multiplier is 100 (the
    // mirrored partner of set 4), which restores J = 1/alpha.
    static const std::vector<HillSet> sets = {
        {1, 1.0, 10.0, 1000.0, 100.0},  {2, 1.0, 100.0, 1000.0, 10.0},
        {3, 10.0, 1000.0, 100.0, 1.0},  {4, 100.0, 1000.0, 10.0, 1.0},
        {5, 10.0, 1.0, 100.0, 1000.0},  {6, 100.0, 1.0, 10.0, 1000.0},
        {7, 1000.0, 100.0, 1.0, 10.0},  {8, 1000.0, 10.0, 1.0, 100.0},
    };
    return sets;
}

HillDerivation hill_set_derivation(int set_id, double alpha) {
    const HillSet* found = nullptr;
    for (const auto& s : hill_sets())
        if (s.id == set_id) found = &s;
    if (!found) throw Error(ErrorKind::Domain, "unknown hill set " + std::to_string(set_id));
    const double J = 1.0 / alpha;
    const double K1 = (found->k2 / found->k1_det) / alpha;
    const double s1 = found->k1_det * alpha;
    const double s2 = found->k3_det * alpha;
    return derive_hill_params(J, K1, s1, s2);
}

ReactionNetwork build_hill_model(int set_id, Count TF0, bool packed) {
    ReactionNetwork net;
    net.name = packed || set_id == 0 ? "hill_packed" : "hill_set" + std::to_string(set_id);
    net.species = {{"TF", TF0}, {"G", 1}, {"M", 0}};
    Reaction tx;
    tx.id = "tx";
    tx.reactants = {{"TF", 1}};
    tx.products = {{"TF", 1}, {"M", 1}};
    if (packed || set_id == 0) {
        tx.rate_law = RateLaw::hill(1.0, 599.0, 2, "TF");
        net.reactions.push_back(tx);
        return net;
    }
    HillDerivation der = hill_set_derivation(set_id);
    tx.rate_law = RateLaw::hill(1.0, der.J, 2, "TF");
    net.reactions.push_back(tx);
    net.parameters["alpha"] = kHillAlpha;
    auto [unpacked, exp] = unpack_hill(net, "tx", der);
    return unpacked;
}

ClockParams default_clock_params(double alpha) {
    // Base set at alpha = 0.000167, tuned with tools/clock_calibrate so the
    // packed ODE has a 1440-minute period.
    ClockParams p;
    p.alpha = 0.000167;
    p.G_tot = 1;
    p.TF_tot = 720;
    p.kms = 24.0;
    p.J = 240.0;
    p.kt = 0.04;
    p.kd_f = 0.2;
    p.kd_b = 2.0;
    p.ki_f = 0.5;
    p.ki_b = 0.01;
    p.vmax_M = 12.0;
    p.Km_M = 10.0;
    p.vmax_CP = 4.0;
    p.Km_CP = 10.0;
    p.vmax_C = 3.0;
    p.Km_C = 10.0;
    p.kbg_M = 0.002;
    p.kbg_CP = 0.002;
    p.kbg_CP2 = 0.002;
    p.kbg_C = 0.001;
    p.hill_K1 = 7200.0;
    p.hill_s1 = 0.02;
    p.hill_s2 = 0.5;
    p.etot_M = 4;
    p.etot_CP = 20;
    p.etot_C = 30;
    p.rho = 20.0;

    if (alpha != p.alpha) {
        const double scale = p.alpha / alpha; // counts grow when alpha shrinks
        p.TF_tot = static_cast<Count>(std::llround(p.TF_tot * scale));
        p.J *= scale;
        p.kms *= scale;
        p.Km_M *= scale;
        p.Km_CP *= scale;
        p.Km_C *= scale;
        p.vmax_M *= scale;
        p.vmax_CP *= scale;
        p.vmax_C *= scale;
        p.kd_f /= scale;
        p.ki_f /= scale;
        p.hill_K1 *= scale;
        p.hill_s1 /= scale;
        p.hill_s2 /= scale;
        p.etot_M = std::max<Count>(1, static_cast<Count>(std::llround(p.etot_M * scale)));
        p.etot_CP = std::max<Count>(1, static_cast<Count>(std::llround(p.etot_CP * scale)));
        p.etot_C = std::max<Count>(1, static_cast<Count>(std::llround(p.etot_C * scale)));
        p.alpha = alpha;
    }
    return p;
}

ReactionNetwork build_clock_model(const ClockParams& p, bool packed) {
    ReactionNetwork net;
    net.name = packed ? "clock_packed" : "clock_unpacked";
    net.species = {{"G", p.G_tot}, {"TF", p.TF_tot}, {"M", 0}, {"CP", 0}, {"CP2", 0}, {"C", 0}};
    net.parameters["alpha"] = p.alpha;

    auto ma = [](std::string id, std::vector<std::pair<std::string, int>> re,
                 std::vector<std::pair<std::string, int>> pr, double c) {
        Reaction r;
        r.id = std::move(id);
        r.reactants = std::move(re);
        r.products = std::move(pr);
        r.rate_law = RateLaw::mass_action(c);
        return r;
    };

    Reaction tx;
    tx.id = "tx";
    tx.reactants = {{"TF", 1}};
    tx.products = {{"TF", 1}, {"M", 1}};
    tx.rate_law = RateLaw::hill(p.kms, p.J, 2, "TF");
    net.reactions.push_back(tx);

    net.reactions.push_back(ma("tl", {{"M", 1}}, {{"M", 1}, {"CP", 1}}, p.kt));
    net.reactions.push_back(ma("dim_f", {{"CP", 2}}, {{"CP2", 1}}, p.kd_f));
    net.reactions.push_back(ma("dim_b", {{"CP2", 1}}, {{"CP", 2}}, p.kd_b));
    net.reactions.push_back(ma("seq_f", {{"CP2", 1}, {"TF", 1}}, {{"C", 1}}, p.ki_f));
    net.reactions.push_back(ma("seq_b", {{"C", 1}}, {{"CP2", 1}, {"TF", 1}}, p.ki_b));

    Reaction deg_m;
    deg_m.id = "deg_M";
    deg_m.reactants = {{"M", 1}};
    deg_m.rate_law = RateLaw::michaelis_menten(p.vmax_M, p.Km_M, "M");
    net.reactions.push_back(deg_m);

    Reaction deg_cp;
    deg_cp.id = "deg_CP";
    deg_cp.reactants = {{"CP", 1}};
    deg_cp.rate_law = RateLaw::michaelis_menten(p.vmax_CP, p.Km_CP, "CP");
    net.reactions.push_back(deg_cp);

    // C degradation removes the CP2 moiety and releases the factor, keeping
    // the TF pool closed.
    Reaction deg_c;
    deg_c.id = "deg_C";
    deg_c.reactants = {{"C", 1}};
    deg_c.products = {{"TF", 1}};
    deg_c.rate_law = RateLaw::michaelis_menten(p.vmax_C, p.Km_C, "C");
    net.reactions.push_back(deg_c);

    net.reactions.push_back(ma("bg_M", {{"M", 1}}, {}, p.kbg_M));
    net.reactions.push_back(ma("bg_CP", {{"CP", 1}}, {}, p.kbg_CP));
    net.reactions.push_back(ma("bg_CP2", {{"CP2", 1}}, {}, p.kbg_CP2));
    net.reactions.push_back(ma("bg_C", {{"C", 1}}, {{"TF", 1}}, p.kbg_C));

    if (packed) {
        Conservation tf_pool;
        tf_pool.id = "cons_TF";
        tf_pool.terms = {{"TF", 1}, {"C", 1}};
        tf_pool.total = static_cast<double>(p.TF_tot);
        net.conservations.push_back(tf_pool);
        return net;
    }

    HillDerivation der = derive_hill_params(p.J, p.hill_K1, p.hill_s1, p.hill_s2);
    auto [after_hill, hill_exp] = unpack_hill(net, "tx", der);
    net = std::move(after_hill);

    MmUnpackOptions mm_opt;
    mm_opt.rho = p.rho;
    mm_opt.enzyme_name = "E_M";
    auto [after_m, m_exp] = unpack_mm(net, "deg_M", p.etot_M, mm_opt);
    net = std::move(after_m);

    mm_opt.enzyme_name = "E_CP";
    auto [after_cp, cp_exp] = unpack_mm(net, "deg_CP", p.etot_CP, mm_opt);
    net = std::move(after_cp);

    mm_opt.enzyme_name = "E_C";
    auto [after_c, c_exp] = unpack_mm(net, "deg_C", p.etot_C, mm_opt);
    net = std::move(after_c);

    Conservation tf_pool;
    tf_pool.id = "cons_TF";
    tf_pool.terms = {{"TF", 1}, {"TF2", 2}, {"GTF2", 2}, {"C", 1}};
    tf_pool.total = static_cast<double>(p.TF_tot);
    net.conservations.push_back(tf_pool);
    return net;
}

std::vector<std::string> builtin_model_names() {
    std::vector<std::string> names = {"mm_packed", "mm_unpacked", "hill_packed"};
    for (int i = 1; i <= 8; ++i) names.push_back("hill_set" + std::to_string(i));
    names.push_back("clock_packed");
    names.push_back("clock_unpacked");
    return names;
}

ReactionNetwork build_builtin(const std::string& name) {
    if (name == "mm_packed") return build_mm_model_default(true);
    if (name == "mm_unpacked") return build_mm_model_default(false);
    if (name == "hill_packed") return build_hill_model(0, 599, true);
    for (int i = 1; i <= 8; ++i)
        if (name == "hill_set" + std::to_string(i)) return build_hill_model(i);
    if (name == "clock_packed") return build_clock_model(default_clock_params(), true);
    if (name == "clock_unpacked") return build_clock_model(default_clock_params(), false);
    throw Error(ErrorKind::Domain, "unknown built-in model '" + name + "'");
}

namespace {

ReactionStmt reaction_stmt(const std::string& id,
                           std::vector<std::pair<std::string, int>> reactants,
                           std::vector<std::pair<std::string, int>> products, RateLawStmt law) {
    ReactionStmt r;
    r.id = id;
    r.reactants = std::move(reactants);
    r.products = std::move(products);
    r.law = std::move(law);
    return r;
}

RateLawStmt ma_ref(const std::string& param) {
    RateLawStmt law;
    law.kind = "ma";
    law.args = {DslValue::reference(param)};
    return law;
}

} // namespace

ModelDocument builtin_document(const std::string& name) {
    ModelDocument doc;
    doc.name = name;

    if (name == "mm_packed" || name == "mm_unpacked") {
        doc.alpha = kHillAlpha;
        doc.species = {{"S", 599}, {"P", 0}};
        doc.params = {{"vmax", {60.0, ParamExpr::Marker::None}},
                      {"Km", {300.0, ParamExpr::Marker::None}}};
        RateLawStmt law;
        law.kind = "mm";
        law.args = {DslValue::reference("vmax"), DslValue::reference("Km")};
        doc.reactions = {reaction_stmt("r1", {{"S", 1}}, {{"P", 1}}, law)};
        if (name == "mm_unpacked") {
            UnpackDirective d;
            d.target = "r1";
            d.kind = "mm";
            d.etot = DslValue::number(60.0);
            d.rho = 100.0;
            doc.unpacks.push_back(d);
            ConserveStmt cons;
            cons.terms = {{"E", 1}, {"ES", 1}};
            cons.total = DslValue::number(60.0);
            doc.conserves.push_back(cons);
        }
        return doc;
    }

    if (name == "hill_packed") {
        doc.species = {{"TF", 599}, {"G", 1}, {"M", 0}};
        RateLawStmt law;
        law.kind = "hill";
        law.args = {DslValue::number(1.0), DslValue::number(599.0)};
        law.hill_n = 2;
        doc.reactions = {reaction_stmt("tx", {{"TF", 1}}, {{"TF", 1}, {"M", 1}}, law)};
        return doc;
    }

    for (int i = 1; i <= 8; ++i) {
        if (name != "hill_set" + std::to_string(i)) continue;
        const HillSet& set = hill_sets()[static_cast<std::size_t>(i - 1)];
        doc.alpha = kHillAlpha;
        doc.species = {{"TF", 599}, {"G", 1}, {"M", 0}};
        doc.params = {{"J", {1.0, ParamExpr::Marker::OverAlpha}},
                      {"K1", {set.k2 / set.k1_det, ParamExpr::Marker::OverAlpha}},
                      {"s1", {set.k1_det, ParamExpr::Marker::TimesAlpha}},
                      {"s2", {set.k3_det, ParamExpr::Marker::TimesAlpha}}};
        RateLawStmt law;
        law.kind = "hill";
        law.args = {DslValue::number(1.0), DslValue::reference("J")};
        law.hill_n = 2;
        doc.reactions = {reaction_stmt("tx", {{"TF", 1}}, {{"TF", 1}, {"M", 1}}, law)};
        UnpackDirective d;
        d.target = "tx";
        d.kind = "hill";
        d.K1 = DslValue::reference("K1");
        d.s1 = DslValue::reference("s1");
        d.s2 = DslValue::reference("s2");
        doc.unpacks.push_back(d);
        return doc;
    }

    if (name == "clock_packed" || name == "clock_unpacked") {
        const ClockParams p = default_clock_params();
        doc.alpha = p.alpha;
        doc.species = {{"G", p.G_tot}, {"TF", p.TF_tot}, {"M", 0}, {"CP", 0}, {"CP2", 0}, {"C", 0}};
        auto lit = [](double v) { return ParamExpr{v, ParamExpr::Marker::None}; };
        doc.params = {{"kms", lit(p.kms)},       {"J", lit(p.J)},
                      {"kt", lit(p.kt)},         {"kd_f", lit(p.kd_f)},
                      {"kd_b", lit(p.kd_b)},     {"ki_f", lit(p.ki_f)},
                      {"ki_b", lit(p.ki_b)},     {"vmax_M", lit(p.vmax_M)},
                      {"Km_M", lit(p.Km_M)},     {"vmax_CP", lit(p.vmax_CP)},
                      {"Km_CP", lit(p.Km_CP)},   {"vmax_C", lit(p.vmax_C)},
                      {"Km_C", lit(p.Km_C)},     {"kbg_M", lit(p.kbg_M)},
                      {"kbg_CP", lit(p.kbg_CP)}, {"kbg_CP2", lit(p.kbg_CP2)},
                      {"kbg_C", lit(p.kbg_C)}};
        RateLawStmt hill_law;
        hill_law.kind = "hill";
        hill_law.args = {DslValue::reference("kms"), DslValue::reference("J")};
        hill_law.hill_n = 2;
        RateLawStmt mm_m, mm_cp, mm_c;
        mm_m.kind = mm_cp.kind = mm_c.kind = "mm";
        mm_m.args = {DslValue::reference("vmax_M"), DslValue::reference("Km_M")};
        mm_cp.args = {DslValue::reference("vmax_CP"), DslValue::reference("Km_CP")};
        mm_c.args = {DslValue::reference("vmax_C"), DslValue::reference("Km_C")};

        doc.reactions = {
            reaction_stmt("tx", {{"TF", 1}}, {{"TF", 1}, {"M", 1}}, hill_law),
            reaction_stmt("tl", {{"M", 1}}, {{"M", 1}, {"CP", 1}}, ma_ref("kt")),
            reaction_stmt("dim_f", {{"CP", 2}}, {{"CP2", 1}}, ma_ref("kd_f")),
            reaction_stmt("dim_b", {{"CP2", 1}}, {{"CP", 2}}, ma_ref("kd_b")),
            reaction_stmt("seq_f", {{"CP2", 1}, {"TF", 1}}, {{"C", 1}}, ma_ref("ki_f")),
            reaction_stmt("seq_b", {{"C", 1}}, {{"CP2", 1}, {"TF", 1}}, ma_ref("ki_b")),
            reaction_stmt("deg_M", {{"M", 1}}, {}, mm_m),
            reaction_stmt("deg_CP", {{"CP", 1}}, {}, mm_cp),
            reaction_stmt("deg_C", {{"C", 1}}, {{"TF", 1}}, mm_c),
            reaction_stmt("bg_M", {{"M", 1}}, {}, ma_ref("kbg_M")),
            reaction_stmt("bg_CP", {{"CP", 1}}, {}, ma_ref("kbg_CP")),
            reaction_stmt("bg_CP2", {{"CP2", 1}}, {}, ma_ref("kbg_CP2")),
            reaction_stmt("bg_C", {{"C", 1}}, {{"TF", 1}}, ma_ref("kbg_C")),
        };

        ConserveStmt tf_pool;
        if (name == "clock_packed") {
            tf_pool.terms = {{"TF", 1}, {"C", 1}};
        } else {
            tf_pool.terms = {{"TF", 1}, {"TF2", 2}, {"GTF2", 2}, {"C", 1}};
        }
        tf_pool.total = DslValue::number(static_cast<double>(p.TF_tot));
        doc.conserves.push_back(tf_pool);

        if (name == "clock_unpacked") {
            UnpackDirective hill_d;
            hill_d.target = "tx";
            hill_d.kind = "hill";
            hill_d.K1 = DslValue::number(p.hill_K1);
            hill_d.s1 = DslValue::number(p.hill_s1);
            hill_d.s2 = DslValue::number(p.hill_s2);
            doc.unpacks.push_back(hill_d);
            auto mm_directive = [&p](const std::string& target, Count etot, const std::string& enzyme) {
                UnpackDirective d;
                d.target = target;
                d.kind = "mm";
                d.etot = DslValue::number(static_cast<double>(etot));
                d.rho = p.rho;
                d.enzyme = enzyme;
                return d;
            };
            doc.unpacks.push_back(mm_directive("deg_M", p.etot_M, "E_M"));
            doc.unpacks.push_back(mm_directive("deg_CP", p.etot_CP, "E_CP"));
            doc.unpacks.push_back(mm_directive("deg_C", p.etot_C, "E_C"));
        }
        return doc;
    }

    throw Error(ErrorKind::Domain, "unknown built-in model '" + name + "'");
}

bool networks_equivalent(const ReactionNetwork& a, const ReactionNetwork& b, double rel_tol,
                         std::string* why) {
    auto explain = [why](const std::string& message) {
        if (why) *why = message;
        return false;
    };
    auto close = [rel_tol](double x, double y) {
        double scale = std::max({std::abs(x), std::abs(y), 1e-300});
        return std::abs(x - y) <= rel_tol * scale;
    };

    if (a.species.size() != b.species.size()) return explain("species count differs");
    for (const auto& sp : a.species) {
        const Species* other = b.find_species(sp.id);
        if (!other) return explain("missing species '" + sp.id + "'");
        if (other->initial_count != sp.initial_count)
            return explain("initial count of '" + sp.id + "' differs");
    }

    if (a.reactions.size() != b.reactions.size()) return explain("reaction count differs");
    for (const auto& r : a.reactions) {
        const Reaction* other = b.find_reaction(r.id);
        if (!other) return explain("missing reaction '" + r.id + "'");
        auto sorted = [](std::vector<std::pair<std::string, int>> v) {
            std::sort(v.begin(), v.end());
            return v;
        };
        if (sorted(r.reactants) != sorted(other->reactants))
            return explain("reactants of '" + r.id + "' differ");
        if (sorted(r.products) != sorted(other->products))
            return explain("products of '" + r.id + "' differ");
        if (r.immediate != other->immediate) return explain("immediacy of '" + r.id + "' differs");
        const RateLaw& x = r.rate_law;
        const RateLaw& y = other->rate_law;
        if (x.kind != y.kind) return explain("law kind of '" + r.id + "' differs");
        bool same = true;
        switch (x.kind) {
        case RateLaw::Kind::MassAction:
            same = close(x.c, y.c);
            break;
        case RateLaw::Kind::MichaelisMenten:
            same = close(x.vmax, y.vmax) && close(x.Km, y.Km) && x.substrate == y.substrate;
            break;
        case RateLaw::Kind::Hill:
            same = close(x.kms, y.kms) && close(x.J, y.J) && x.n == y.n &&
                   x.regulator == y.regulator;
            break;
        }
        if (!same) return explain("constants of '" + r.id + "' differ");
    }

    if (a.conservations.size() != b.conservations.size())
        return explain("conservation count differs");
    for (const auto& c : a.conservations) {
        bool found = false;
        for (const auto& other : b.conservations) {
            if (other.id != c.id) continue;
            auto sorted = [](std::vector<std::pair<std::string, int>> v) {
                std::sort(v.begin(), v.end());
                return v;
            };
            if (sorted(other.terms) == sorted(c.terms) && close(other.total, c.total)) found = true;
        }
        if (!found) return explain("conservation '" + c.id + "' differs");
    }
    return true;
}

} // namespace rxn
