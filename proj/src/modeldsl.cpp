#include "rxnpack/modeldsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "rxnpack/validate.hpp"

namespace rxn {

namespace {

[[noreturn]] void fail(std::size_t line, std::size_t col, const std::string& message) {
    std::ostringstream os;
    os << "line " << line << ", column " << col << ": " << message;
    throw Error(ErrorKind::Parse, os.str());
}

struct Token {
    std::string text;
    std::size_t col = 0;
    bool is_number = false;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> tokenize(const std::string& line, std::size_t line_no) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (c == '#') break;
        if (std::isspace(static_cast<unsigned char>(c)) || c == '\r') {
            ++i;
            continue;
        }
        std::size_t col = i + 1;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < line.size() && ident_char(line[j])) ++j;
            tokens.push_back({line.substr(i, j - i), col, false});
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                   (c == '.' && i + 1 < line.size() &&
                    std::isdigit(static_cast<unsigned char>(line[i + 1])))) {
            std::size_t j = i;
            while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) ||
                                       line[j] == '.' ||
                                       ((line[j] == '+' || line[j] == '-') && j > i &&
                                        (line[j - 1] == 'e' || line[j - 1] == 'E'))))
                ++j;
            tokens.push_back({line.substr(i, j - i), col, true});
            i = j;
        } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
            tokens.push_back({"->", col, false});
            i += 2;
        } else if (std::string(":@+*/=(),-").find(c) != std::string::npos) {
            tokens.push_back({std::string(1, c), col, false});
            ++i;
        } else {
            fail(line_no, col, std::string("unexpected character '") + c + "'");
        }
    }
    return tokens;
}

struct Cursor {
    const std::vector<Token>& tokens;
    std::size_t line_no;
    std::size_t pos = 0;

    bool done() const { return pos >= tokens.size(); }
    const Token& peek() const {
        if (done()) fail(line_no, 9999, "unexpected end of line");
        return tokens[pos];
    }
    Token take() {
        const Token& t = peek();
        ++pos;
        return t;
    }
    bool accept(const std::string& text) {
        if (!done() && tokens[pos].text == text && !tokens[pos].is_number) {
            ++pos;
            return true;
        }
        return false;
    }
    Token expect(const std::string& text, const std::string& what) {
        if (done()) fail(line_no, last_col(), "expected " + what);
        if (tokens[pos].text != text) fail(line_no, tokens[pos].col, "expected " + what);
        return take();
    }
    Token expect_ident(const std::string& what) {
        if (done()) fail(line_no, last_col(), "expected " + what);
        const Token& t = tokens[pos];
        if (t.is_number || !ident_start(t.text[0])) fail(line_no, t.col, "expected " + what);
        return take();
    }
    Token expect_number(const std::string& what) {
        bool neg = false;
        std::size_t col = done() ? last_col() : tokens[pos].col;
        if (!done() && tokens[pos].text == "-") {
            neg = true;
            ++pos;
        }
        if (done() || !tokens[pos].is_number) fail(line_no, col, "expected " + what);
        Token t = take();
        if (neg) t.text = "-" + t.text;
        t.col = col;
        return t;
    }
    std::size_t last_col() const { return tokens.empty() ? 1 : tokens.back().col + tokens.back().text.size(); }
    void expect_end() {
        if (!done()) fail(line_no, peek().col, "trailing input '" + peek().text + "'");
    }
};

double parse_double(const Token& t, std::size_t line_no) {
    const char* begin = t.text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + t.text.size()) fail(line_no, t.col, "malformed number '" + t.text + "'");
    return v;
}

Count parse_count(const Token& t, std::size_t line_no) {
    Count v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size())
        fail(line_no, t.col, "expected an integer count, got '" + t.text + "'");
    return v;
}

ParamExpr parse_param_expr(Cursor& cur) {
    ParamExpr e;
    e.value = parse_double(cur.expect_number("a number"), cur.line_no);
    if (cur.accept("*")) {
        cur.expect("alpha", "'alpha' after '*'");
        e.marker = ParamExpr::Marker::TimesAlpha;
    } else if (cur.accept("/")) {
        cur.expect("alpha", "'alpha' after '/'");
        e.marker = ParamExpr::Marker::OverAlpha;
    }
    return e;
}

DslValue parse_value(Cursor& cur) {
    if (!cur.done() && !cur.peek().is_number && cur.peek().text != "-" &&
        ident_start(cur.peek().text[0])) {
        if (cur.peek().text == "alpha") fail(cur.line_no, cur.peek().col, "bare 'alpha' is not a value");
        return DslValue::reference(cur.take().text);
    }
    DslValue v;
    v.literal = parse_param_expr(cur);
    return v;
}

std::vector<std::pair<std::string, int>> parse_side(Cursor& cur, const std::string& stop1,
                                                    const std::string& stop2) {
    std::vector<std::pair<std::string, int>> terms;
    if (!cur.done() && (cur.peek().text == stop1 || (!stop2.empty() && cur.peek().text == stop2)))
        return terms; // empty side
    while (true) {
        int coeff = 1;
        if (cur.peek().is_number) {
            Token t = cur.take();
            if (t.text != "1" && t.text != "2")
                fail(cur.line_no, t.col, "stoichiometric coefficients are limited to 1 and 2");
            coeff = t.text == "2" ? 2 : 1;
            cur.accept("*"); // both "2*TF" and "2 TF" are accepted
        }
        Token sp = cur.expect_ident("a species name");
        terms.emplace_back(sp.text, coeff);
        if (!cur.accept("+")) break;
    }
    return terms;
}

RateLawStmt parse_rate_law(Cursor& cur) {
    RateLawStmt law;
    Token kind = cur.expect_ident("a rate law (ma, mm, hill or immediate)");
    law.kind = kind.text;
    if (law.kind == "immediate") return law;
    if (law.kind != "ma" && law.kind != "mm" && law.kind != "hill")
        fail(cur.line_no, kind.col, "unknown rate law '" + kind.text + "'");
    cur.expect("(", "'('");
    if (law.kind == "ma") {
        law.args.push_back(parse_value(cur));
    } else if (law.kind == "mm") {
        law.args.push_back(parse_value(cur));
        cur.expect(",", "','");
        law.args.push_back(parse_value(cur));
    } else {
        law.args.push_back(parse_value(cur));
        cur.expect(",", "','");
        law.args.push_back(parse_value(cur));
        cur.expect(",", "','");
        law.hill_n = static_cast<int>(parse_count(cur.expect_number("the Hill order"), cur.line_no));
    }
    cur.expect(")", "')'");
    return law;
}

UnpackDirective parse_unpack(Cursor& cur) {
    UnpackDirective d;
    d.target = cur.expect_ident("a reaction id").text;
    Token kind = cur.expect_ident("'mm' or 'hill'");
    d.kind = kind.text;
    if (d.kind != "mm" && d.kind != "hill")
        fail(cur.line_no, kind.col, "unknown template '" + kind.text + "'");
    cur.expect("(", "'('");
    std::set<std::string> seen;
    while (true) {
        Token key = cur.expect_ident("an argument name");
        cur.expect("=", "'='");
        if (!seen.insert(key.text).second)
            fail(cur.line_no, key.col, "duplicate argument '" + key.text + "'");
        if (d.kind == "mm") {
            if (key.text == "Etot")
                d.etot = parse_value(cur);
            else if (key.text == "rho")
                d.rho = parse_double(cur.expect_number("a number"), cur.line_no);
            else if (key.text == "enzyme")
                d.enzyme = cur.expect_ident("an enzyme name").text;
            else
                fail(cur.line_no, key.col, "mm unpacking takes Etot, rho and enzyme");
        } else {
            if (key.text == "K1")
                d.K1 = parse_value(cur);
            else if (key.text == "s1")
                d.s1 = parse_value(cur);
            else if (key.text == "s2")
                d.s2 = parse_value(cur);
            else
                fail(cur.line_no, key.col, "hill unpacking takes K1, s1 and s2");
        }
        if (!cur.accept(",")) break;
    }
    cur.expect(")", "')'");
    if (d.kind == "mm" && !seen.count("Etot")) fail(cur.line_no, 1, "mm unpacking requires Etot");
    if (d.kind == "hill" && (!seen.count("K1") || !seen.count("s1") || !seen.count("s2")))
        fail(cur.line_no, 1, "hill unpacking requires K1, s1 and s2");
    return d;
}

} // namespace

ModelDocument parse_model(const std::string& text) {
    ModelDocument doc;
    std::vector<std::string> lines;
    {
        std::string current;
        for (char c : text) {
            if (c == '\n') {
                lines.push_back(current);
                current.clear();
            } else {
                current.push_back(c);
            }
        }
        if (!current.empty()) lines.push_back(current);
    }

    bool have_header = false;
    std::set<std::string> species_ids, param_ids, reaction_ids;

    for (std::size_t k = 0; k < lines.size(); ++k) {
        const std::size_t line_no = k + 1;
        std::vector<Token> tokens = tokenize(lines[k], line_no);
        if (tokens.empty()) continue;
        Cursor cur{tokens, line_no};

        if (!have_header) {
            if (cur.peek().text != "model") fail(line_no, cur.peek().col, "expected model header");
            cur.take();
            doc.name = cur.expect_ident("a model name").text;
            cur.expect_end();
            have_header = true;
            continue;
        }

        Token head = cur.take();
        if (head.text == "model") {
            fail(line_no, head.col, "duplicate model header");
        } else if (head.text == "alpha") {
            cur.expect("=", "'='");
            if (doc.alpha) fail(line_no, head.col, "alpha declared twice");
            doc.alpha = parse_double(cur.expect_number("a number"), line_no);
            cur.expect_end();
        } else if (head.text == "species") {
            SpeciesDecl s;
            Token id = cur.expect_ident("a species name");
            s.id = id.text;
            cur.expect("=", "'='");
            s.initial = parse_count(cur.expect_number("an integer count"), line_no);
            cur.expect_end();
            if (!species_ids.insert(s.id).second)
                fail(line_no, id.col, "duplicate species '" + s.id + "'");
            doc.species.push_back(s);
        } else if (head.text == "param") {
            ParamDecl p;
            Token id = cur.expect_ident("a parameter name");
            p.id = id.text;
            cur.expect("=", "'='");
            p.expr = parse_param_expr(cur);
            cur.expect_end();
            if (!param_ids.insert(p.id).second)
                fail(line_no, id.col, "duplicate parameter '" + p.id + "'");
            doc.params.push_back(p);
        } else if (head.text == "reaction") {
            ReactionStmt r;
            Token id = cur.expect_ident("a reaction id");
            r.id = id.text;
            cur.expect(":", "':'");
            r.reactants = parse_side(cur, "->", "");
            cur.expect("->", "'->'");
            r.products = parse_side(cur, "@", "");
            cur.expect("@", "'@'");
            r.law = parse_rate_law(cur);
            cur.expect_end();
            if (!reaction_ids.insert(r.id).second)
                fail(line_no, id.col, "duplicate reaction '" + r.id + "'");
            doc.reactions.push_back(std::move(r));
        } else if (head.text == "unpack") {
            UnpackDirective d = parse_unpack(cur);
            cur.expect_end();
            doc.unpacks.push_back(std::move(d));
        } else if (head.text == "conserve") {
            ConserveStmt c;
            c.terms = parse_side(cur, "=", "");
            if (c.terms.empty()) fail(line_no, head.col, "conservation needs at least one species");
            cur.expect("=", "'='");
            c.total = parse_value(cur);
            cur.expect_end();
            doc.conserves.push_back(std::move(c));
        } else {
            fail(line_no, head.col, "unknown statement '" + head.text + "'");
        }
    }
    if (!have_header) fail(1, 1, "expected model header");
    return doc;
}

namespace {

std::string format_number(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) return "0";
    return std::string(buf, p);
}

std::string render(const ParamExpr& e) {
    std::string s = format_number(e.value);
    if (e.marker == ParamExpr::Marker::TimesAlpha) s += "*alpha";
    if (e.marker == ParamExpr::Marker::OverAlpha) s += "/alpha";
    return s;
}

std::string render(const DslValue& v) { return v.is_ref ? v.ref : render(v.literal); }

std::string render_side(const std::vector<std::pair<std::string, int>>& terms) {
    std::string s;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) s += " + ";
        if (terms[i].second == 2) s += "2*";
        s += terms[i].first;
    }
    return s;
}

} // namespace

std::string serialize_model(const ModelDocument& doc) {
    std::ostringstream os;
    os << "model " << doc.name << "\n";
    if (doc.alpha) os << "alpha = " << format_number(*doc.alpha) << "\n";
    for (const auto& s : doc.species)
        os << "species " << s.id << " = " << s.initial << "\n";
    for (const auto& p : doc.params) os << "param " << p.id << " = " << render(p.expr) << "\n";
    for (const auto& r : doc.reactions) {
        os << "reaction " << r.id << ": " << render_side(r.reactants) << " -> "
           << render_side(r.products) << " @ ";
        if (r.law.kind == "immediate") {
            os << "immediate";
        } else if (r.law.kind == "ma") {
            os << "ma(" << render(r.law.args[0]) << ")";
        } else if (r.law.kind == "mm") {
            os << "mm(" << render(r.law.args[0]) << ", " << render(r.law.args[1]) << ")";
        } else {
            os << "hill(" << render(r.law.args[0]) << ", " << render(r.law.args[1]) << ", "
               << r.law.hill_n << ")";
        }
        os << "\n";
    }
    for (const auto& c : doc.conserves)
        os << "conserve " << render_side(c.terms) << " = " << render(c.total) << "\n";
    for (const auto& d : doc.unpacks) {
        os << "unpack " << d.target << " " << d.kind << "(";
        if (d.kind == "mm") {
            os << "Etot=" << render(d.etot) << ", rho=" << format_number(d.rho);
            if (d.enzyme) os << ", enzyme=" << *d.enzyme;
        } else {
            os << "K1=" << render(d.K1) << ", s1=" << render(d.s1) << ", s2=" << render(d.s2);
        }
        os << ")\n";
    }
    return os.str();
}

namespace {

class Resolver {
public:
    Resolver(const ModelDocument& doc) : doc_(doc) {
        for (const auto& p : doc.params) params_[p.id] = resolve(p.expr, p.id);
    }

    double resolve(const ParamExpr& e, const std::string& context) const {
        switch (e.marker) {
        case ParamExpr::Marker::None:
            return e.value;
        case ParamExpr::Marker::TimesAlpha:
            require_alpha(context);
            return e.value * *doc_.alpha;
        case ParamExpr::Marker::OverAlpha:
            require_alpha(context);
            return e.value / *doc_.alpha;
        }
        return e.value;
    }

    double resolve(const DslValue& v, const std::string& context) const {
        if (!v.is_ref) return resolve(v.literal, context);
        auto it = params_.find(v.ref);
        if (it == params_.end())
            throw Error(ErrorKind::Parse, context + ": unknown parameter '" + v.ref + "'");
        return it->second;
    }

    const std::map<std::string, double>& params() const { return params_; }

private:
    void require_alpha(const std::string& context) const {
        if (!doc_.alpha)
            throw Error(ErrorKind::Parse, context + ": uses alpha but the model declares none");
    }

    const ModelDocument& doc_;
    std::map<std::string, double> params_;
};

void add_conservation(ReactionNetwork& net, const Conservation& cons) {
    for (const auto& existing : net.conservations) {
        if (existing.id == cons.id) {
            if (existing.terms == cons.terms && existing.total == cons.total) return;
            throw Error(ErrorKind::Parse,
                        "conservation '" + cons.id + "' declared twice with different content");
        }
    }
    net.conservations.push_back(cons);
}

} // namespace

BuildResult apply_directives(const ModelDocument& doc) {
    Resolver resolver(doc);
    BuildResult result;
    ReactionNetwork& net = result.network;
    net.name = doc.name;
    net.parameters = resolver.params();
    if (doc.alpha) net.parameters["alpha"] = *doc.alpha;

    for (const auto& s : doc.species) net.species.push_back({s.id, s.initial});

    for (const auto& r : doc.reactions) {
        Reaction rx;
        rx.id = r.id;
        rx.reactants = r.reactants;
        rx.products = r.products;
        const std::string ctx = "reaction '" + r.id + "'";
        if (r.law.kind == "ma") {
            rx.rate_law = RateLaw::mass_action(resolver.resolve(r.law.args[0], ctx));
        } else if (r.law.kind == "mm") {
            if (r.reactants.size() != 1 || r.reactants[0].second != 1)
                throw Error(ErrorKind::Parse,
                            ctx + ": a Michaelis-Menten reaction consumes exactly one substrate");
            rx.rate_law = RateLaw::michaelis_menten(resolver.resolve(r.law.args[0], ctx),
                                                    resolver.resolve(r.law.args[1], ctx),
                                                    r.reactants[0].first);
        } else if (r.law.kind == "hill") {
            if (r.reactants.size() != 1 || r.reactants[0].second != 1)
                throw Error(ErrorKind::Parse,
                            ctx + ": a Hill reaction names its regulator as the single reactant");
            rx.rate_law = RateLaw::hill(resolver.resolve(r.law.args[0], ctx),
                                        resolver.resolve(r.law.args[1], ctx), r.law.hill_n,
                                        r.reactants[0].first);
        } else if (r.law.kind == "immediate") {
            rx.rate_law = RateLaw::mass_action(0.0);
            rx.immediate = true;
        } else {
            throw Error(ErrorKind::Parse, ctx + ": unknown rate law '" + r.law.kind + "'");
        }
        net.reactions.push_back(std::move(rx));
    }

    for (const auto& d : doc.unpacks) {
        const std::string ctx = "unpack " + d.target;
        if (!net.find_reaction(d.target))
            throw Error(ErrorKind::Parse, ctx + ": no reaction '" + d.target + "'");
        if (d.kind == "mm") {
            double etot = resolver.resolve(d.etot, ctx);
            MmUnpackOptions opt;
            opt.rho = d.rho;
            opt.enzyme_name = d.enzyme;
            auto [next, exp] =
                unpack_mm(net, d.target, static_cast<Count>(std::llround(etot)), opt);
            net = std::move(next);
            result.expansions.push_back(std::move(exp));
        } else {
            const Reaction* target = net.find_reaction(d.target);
            if (target->rate_law.kind != RateLaw::Kind::Hill)
                throw Error(ErrorKind::Parse, ctx + ": reaction does not carry a hill law");
            HillDerivation der = derive_hill_params(
                target->rate_law.J, resolver.resolve(d.K1, ctx), resolver.resolve(d.s1, ctx),
                resolver.resolve(d.s2, ctx));
            auto [next, exp] = unpack_hill(net, d.target, der);
            net = std::move(next);
            result.expansions.push_back(std::move(exp));
        }
    }

    for (const auto& c : doc.conserves) {
        Conservation cons;
        cons.id = "cons_" + c.terms[0].first;
        cons.terms = c.terms;
        cons.total = resolver.resolve(c.total, "conserve " + c.terms[0].first);
        add_conservation(net, cons);
    }

    ValidationReport report = validate_network(net);
    if (!report.ok())
        throw Error(ErrorKind::Parse, "model does not validate:\n" + report.to_string());
    return result;
}

ModelDocument network_to_document(const ReactionNetwork& network, std::optional<double> alpha) {
    ModelDocument doc;
    doc.name = network.name.empty() ? "network" : network.name;
    doc.alpha = alpha;
    for (const auto& sp : network.species) doc.species.push_back({sp.id, sp.initial_count});
    for (const auto& r : network.reactions) {
        ReactionStmt stmt;
        stmt.id = r.id;
        stmt.reactants = r.reactants;
        stmt.products = r.products;
        if (r.immediate) {
            stmt.law.kind = "immediate";
        } else {
            switch (r.rate_law.kind) {
            case RateLaw::Kind::MassAction:
                stmt.law.kind = "ma";
                stmt.law.args.push_back(DslValue::number(r.rate_law.c));
                break;
            case RateLaw::Kind::MichaelisMenten:
                stmt.law.kind = "mm";
                stmt.law.args.push_back(DslValue::number(r.rate_law.vmax));
                stmt.law.args.push_back(DslValue::number(r.rate_law.Km));
                break;
            case RateLaw::Kind::Hill:
                stmt.law.kind = "hill";
                stmt.law.args.push_back(DslValue::number(r.rate_law.kms));
                stmt.law.args.push_back(DslValue::number(r.rate_law.J));
                stmt.law.hill_n = r.rate_law.n;
                break;
            }
        }
        doc.reactions.push_back(std::move(stmt));
    }
    for (const auto& c : network.conservations) {
        ConserveStmt stmt;
        stmt.terms = c.terms;
        stmt.total = DslValue::number(c.total);
        doc.conserves.push_back(std::move(stmt));
    }
    return doc;
}

} // namespace rxn
