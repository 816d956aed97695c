#include "vgrl/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "vgrl/expr.hpp"
#include "vgrl/telemetry.hpp"

namespace vgrl {

namespace {

std::vector<std::string> names(const char* prefix, int count) {
    std::vector<std::string> v;
    for (int i = 1; i <= count; ++i) v.push_back(prefix + std::to_string(i));
    return v;
}

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

}  // namespace

AugmentedModel build_model(const SystemConfig& sys) {
    if (!sys.preset.empty()) {
        if (sys.preset != kTrackingPreset) {
            throw ConfigError("unknown system preset '" + sys.preset + "' (available: " +
                              std::string(kTrackingPreset) + ")");
        }
        auto [plant, ref] = preset_system_2d();
        return AugmentedModel(std::move(plant), std::move(ref));
    }
    const int n = sys.n, m = sys.m;
    if (n < 1 || m < 1) throw ConfigError("[system] n and m must be positive");
    if (static_cast<int>(sys.f.size()) != n || static_cast<int>(sys.h.size()) != n ||
        static_cast<int>(sys.g.size()) != n * m) {
        throw ConfigError("[system] needs f1..f" + std::to_string(n) + ", h1..h" +
                          std::to_string(n) + " and g1_1..g" + std::to_string(n) + "_" +
                          std::to_string(m));
    }
    const auto xs = names("x", n);
    const auto xds = names("xd", n);
    std::vector<Expression> f, g, h;
    for (const auto& s : sys.f) f.push_back(Expression::parse(s, xs));
    for (const auto& s : sys.g) g.push_back(Expression::parse(s, xs));
    for (const auto& s : sys.h) h.push_back(Expression::parse(s, xds));

    PlantModel plant;
    plant.n = n;
    plant.m = m;
    plant.f = [f, n](const Vector& x) {
        Vector out(n);
        for (int i = 0; i < n; ++i) out(i) = f[i](x);
        return out;
    };
    plant.g = [g, n, m](const Vector& x) {
        Matrix out(n, m);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < m; ++j) out(i, j) = g[i * m + j](x);
        }
        return out;
    };
    if (!sys.d_m.empty()) {
        const Expression d = Expression::parse(sys.d_m, names("z", 2 * n));
        plant.d_M = [d](const Vector& z) { return d(z); };
    }
    ReferenceModel ref;
    ref.n = n;
    ref.H = [h, n](const Vector& xd) {
        Vector out(n);
        for (int i = 0; i < n; ++i) out(i) = h[i](xd);
        return out;
    };
    return AugmentedModel(std::move(plant), std::move(ref));
}

bool Scenario::operator==(const Scenario& other) const {
    return name == other.name && system == other.system && law == other.law &&
           law_cfg == other.law_cfg && basis == other.basis && sim_cfg == other.sim_cfg &&
           bounds.b_N == other.bounds.b_N && bounds.gamma1 == other.bounds.gamma1 &&
           bounds.alpha2 == other.bounds.alpha2;
}

void validate(const Scenario& sc) {
    const AugmentedModel model = build_model(sc.system);
    if (sc.basis.size() == 0) throw ConfigError("[critic] basis is empty");
    if (sc.basis.state_dim() != model.dim()) {
        throw ConfigError("[critic] basis terms have " + std::to_string(sc.basis.state_dim()) +
                          " exponents but the augmented state has " +
                          std::to_string(model.dim()));
    }
    sc.law_cfg.validate(sc.basis.size(), model.n(), model.m());
    sc.sim_cfg.validate(model.n(), sc.basis.size());
    if (!(sc.bounds.b_N > 0.0)) throw ConfigError("[bounds] b_N must be positive");
    if (!(sc.bounds.gamma1 >= 0.0) || !(sc.bounds.alpha2 >= 0.0)) {
        throw ConfigError("[bounds] gamma1 and alpha2 must be >= 0");
    }
}

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

using Section = std::map<std::string, Entry>;

class Raw {
public:
    explicit Raw(std::string_view text) {
        static const std::set<std::string> known = {"", "system", "law", "critic", "sim",
                                                    "bounds"};
        std::string current;
        std::istringstream in{std::string(text)};
        std::string line;
        int no = 0;
        sections_[""];
        while (std::getline(in, line)) {
            ++no;
            // '#' after whitespace starts a trailing comment
            for (std::size_t i = 1; i < line.size(); ++i) {
                if (line[i] == '#' && std::isspace(static_cast<unsigned char>(line[i - 1]))) {
                    line.resize(i);
                    break;
                }
            }
            const std::string t = trim(line);
            if (t.empty() || t[0] == '#' || t[0] == ';') continue;
            if (t.front() == '[') {
                if (t.back() != ']') throw error(no, "unterminated section header");
                current = trim(std::string_view(t).substr(1, t.size() - 2));
                if (!known.count(current)) throw error(no, "unknown section [" + current + "]");
                if (!seen_.insert(current).second) {
                    throw error(no, "section [" + current + "] appears twice");
                }
                sections_[current];
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos) throw error(no, "expected key = value");
            const std::string key = trim(std::string_view(t).substr(0, eq));
            const std::string value = trim(std::string_view(t).substr(eq + 1));
            if (key.empty()) throw error(no, "missing key before '='");
            auto& sec = sections_[current];
            if (sec.count(key)) throw error(no, "duplicate key '" + key + "'");
            sec[key] = Entry{value, no, false};
        }
    }

    const Entry* find(const std::string& section, const std::string& key) {
        auto s = sections_.find(section);
        if (s == sections_.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        k->second.used = true;
        return &k->second;
    }

    bool has(const std::string& section, const std::string& key) const {
        auto s = sections_.find(section);
        return s != sections_.end() && s->second.count(key);
    }

    void check_unused() const {
        for (const auto& [sec, entries] : sections_) {
            for (const auto& [key, e] : entries) {
                if (!e.used) {
                    throw ConfigError("line " + std::to_string(e.line) + ": unknown key '" + key +
                                      "'" + (sec.empty() ? "" : " in [" + sec + "]"));
                }
            }
        }
    }

private:
    static ConfigError error(int line, const std::string& what) {
        return ConfigError("line " + std::to_string(line) + ": " + what);
    }

    std::map<std::string, Section> sections_;
    std::set<std::string> seen_;
};

std::string where(const std::string& section, const std::string& key) {
    return "[" + section + "] " + key;
}

std::vector<double> parse_list(const std::string& section, const std::string& key,
                               const std::string& text) {
    std::vector<double> out;
    std::string token;
    std::istringstream in(text);
    while (in >> token) {
        std::string_view tv(token);
        while (!tv.empty() && tv.back() == ',') tv.remove_suffix(1);
        if (tv.empty()) continue;
        try {
            out.push_back(parse_double(tv));
        } catch (const ConfigError& e) {
            throw ConfigError(where(section, key) + ": " + e.what());
        }
    }
    if (out.empty()) throw ConfigError(where(section, key) + ": empty value");
    return out;
}

class Reader {
public:
    explicit Reader(Raw& raw) : raw_(raw) {}

    bool has(const std::string& s, const std::string& k) const { return raw_.has(s, k); }

    std::string text(const std::string& s, const std::string& k, const std::string& def) {
        const Entry* e = raw_.find(s, k);
        return e ? e->value : def;
    }

    double number(const std::string& s, const std::string& k, double def) {
        const Entry* e = raw_.find(s, k);
        if (!e) return def;
        try {
            return parse_double(e->value);
        } catch (const ConfigError& err) {
            throw ConfigError(where(s, k) + ": " + err.what());
        }
    }

    long integer(const std::string& s, const std::string& k, long def) {
        const Entry* e = raw_.find(s, k);
        if (!e) return def;
        const double v = number(s, k, 0.0);
        if (v != std::floor(v) || std::abs(v) > 9.0e15) {
            throw ConfigError(where(s, k) + ": expected an integer, got '" + e->value + "'");
        }
        return static_cast<long>(v);
    }

    bool flag(const std::string& s, const std::string& k, bool def) {
        const Entry* e = raw_.find(s, k);
        if (!e) return def;
        std::string v = e->value;
        std::transform(v.begin(), v.end(), v.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
        if (v == "false" || v == "off" || v == "no" || v == "0") return false;
        throw ConfigError(where(s, k) + ": expected true/false, got '" + e->value + "'");
    }

    // Length `len`; a single value is broadcast.
    Vector vector(const std::string& s, const std::string& k, int len, const Vector& def) {
        const Entry* e = raw_.find(s, k);
        if (!e) return def;
        const auto v = parse_list(s, k, e->value);
        if (v.size() == 1) return Vector::Constant(len, v[0]);
        if (static_cast<int>(v.size()) != len) {
            throw ConfigError(where(s, k) + ": expected " + std::to_string(len) +
                              " values (or one to broadcast), got " + std::to_string(v.size()));
        }
        return Eigen::Map<const Vector>(v.data(), len);
    }

    // One value: scalar * I. N values: diagonal. N * N values: row-major.
    Matrix square(const std::string& s, const std::string& k, int N, const Matrix& def) {
        const Entry* e = raw_.find(s, k);
        if (!e) return def;
        const auto v = parse_list(s, k, e->value);
        const auto count = static_cast<int>(v.size());
        if (count == 1) return v[0] * Matrix::Identity(N, N);
        if (count == N) return Eigen::Map<const Vector>(v.data(), N).asDiagonal();
        if (count == N * N) {
            Matrix out(N, N);
            for (int i = 0; i < N; ++i) {
                for (int j = 0; j < N; ++j) out(i, j) = v[i * N + j];
            }
            return out;
        }
        throw ConfigError(where(s, k) + ": expected 1, " + std::to_string(N) + " or " +
                          std::to_string(N * N) + " values, got " + std::to_string(count));
    }

private:
    Raw& raw_;
};

RegressorBasis parse_terms(const std::string& text) {
    std::vector<RegressorBasis::Exponents> terms;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t semi = text.find(';', start);
        if (semi == std::string::npos) semi = text.size();
        const std::string chunk = trim(std::string_view(text).substr(start, semi - start));
        start = semi + 1;
        if (chunk.empty()) continue;
        RegressorBasis::Exponents e;
        for (double v : parse_list("critic", "terms", chunk)) {
            if (v != std::floor(v)) throw ConfigError("[critic] terms: exponents must be integers");
            e.push_back(static_cast<int>(v));
        }
        terms.push_back(std::move(e));
    }
    try {
        return RegressorBasis(std::move(terms));
    } catch (const ConfigError& err) {
        throw ConfigError(std::string("[critic] terms: ") + err.what());
    }
}

std::string join(const Vector& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += format_double(v(i));
    }
    return out;
}

std::string compact(const Vector& v) {
    if (v.size() > 0 && (v.array() == v(0)).all()) return format_double(v(0));
    return join(v);
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
    Raw raw(text);
    Reader rd(raw);
    Scenario sc;
    sc.name = rd.text("", "name", "unnamed");

    // [system]
    if (rd.has("system", "preset")) {
        sc.system.preset = rd.text("system", "preset", "");
    } else {
        sc.system.n = static_cast<int>(rd.integer("system", "n", 0));
        sc.system.m = static_cast<int>(rd.integer("system", "m", 0));
        if (sc.system.n < 1 || sc.system.m < 1) {
            throw ConfigError("[system] needs either preset or positive n and m");
        }
        const auto need = [&](const std::string& key) {
            if (!rd.has("system", key)) throw ConfigError("[system] missing " + key);
            return rd.text("system", key, "");
        };
        for (int i = 1; i <= sc.system.n; ++i) sc.system.f.push_back(need("f" + std::to_string(i)));
        for (int i = 1; i <= sc.system.n; ++i) {
            for (int j = 1; j <= sc.system.m; ++j) {
                sc.system.g.push_back(need("g" + std::to_string(i) + "_" + std::to_string(j)));
            }
        }
        for (int i = 1; i <= sc.system.n; ++i) sc.system.h.push_back(need("h" + std::to_string(i)));
        sc.system.d_m = rd.text("system", "d_m", "");
    }
    const AugmentedModel model = build_model(sc.system);
    const int n = model.n(), m = model.m();

    // [critic]
    if (rd.has("critic", "terms") && rd.has("critic", "basis")) {
        throw ConfigError("[critic] give either basis or terms, not both");
    }
    if (rd.has("critic", "terms")) {
        sc.basis = parse_terms(rd.text("critic", "terms", ""));
    } else {
        const std::string b = rd.text("critic", "basis", "quadratic");
        if (b != "quadratic") {
            throw ConfigError("[critic] basis: unknown basis '" + b + "' (expected quadratic)");
        }
        sc.basis = polynomial_basis(model.dim(), 2, 2);
    }
    const int N = sc.basis.size();

    // [law]
    sc.law = parse_update_law(rd.text("law", "type", "variable"));
    LawConfig& lc = sc.law_cfg;
    lc = LawConfig::with_default_gains(N);
    lc.alpha = rd.number("law", "alpha", lc.alpha);
    lc.k2 = rd.number("law", "k2", lc.k2);
    lc.l = rd.number("law", "l", lc.l);
    lc.cost.gamma = rd.number("law", "gamma", 0.0);
    lc.constraint.u_m = rd.number("law", "u_m", 1.0);
    lc.constraint.R = rd.vector("law", "R", m, Vector::Ones(m));
    lc.cost.Q = rd.vector("law", "Q", n, Vector::Ones(n));
    lc.K1 = rd.vector("law", "K1", N, lc.K1);
    lc.K2 = rd.square("law", "K2", N, lc.K2);

    sc.sim_cfg.W0 = rd.vector("critic", "W0", N, Vector::Zero(N));

    // [sim]
    SimConfig& s = sc.sim_cfg;
    s.dt = rd.number("sim", "dt", s.dt);
    s.t_end = rd.number("sim", "t_end", s.t_end);
    if (!rd.has("sim", "x0")) throw ConfigError("[sim] missing x0");
    s.x0 = rd.vector("sim", "x0", n, Vector());
    s.xd0 = rd.vector("sim", "xd0", n, Vector::Zero(n));
    s.dither_on = rd.flag("sim", "dither", s.dither_on);
    s.dither_scale = rd.number("sim", "dither_scale", s.dither_scale);
    const long seed = rd.integer("sim", "seed", 0);
    if (seed < 0) throw ConfigError("[sim] seed must be >= 0");
    s.seed = static_cast<unsigned long>(seed);
    s.record_stride = static_cast<int>(rd.integer("sim", "record_stride", s.record_stride));
    s.phi_uses_applied_input =
        rd.flag("sim", "phi_uses_applied_input", s.phi_uses_applied_input);
    s.convergence_window = rd.number("sim", "convergence_window", s.convergence_window);
    s.convergence_tol = rd.number("sim", "convergence_tol", s.convergence_tol);
    s.steady_window = rd.number("sim", "steady_window", s.steady_window);

    // [bounds]
    sc.bounds.b_N = rd.number("bounds", "b_N", sc.bounds.b_N);
    sc.bounds.gamma1 = rd.number("bounds", "gamma1", sc.bounds.gamma1);
    sc.bounds.alpha2 = rd.number("bounds", "alpha2", sc.bounds.alpha2);

    raw.check_unused();
    validate(sc);
    return sc;
}

std::string serialize_scenario(const Scenario& sc) {
    std::ostringstream out;
    const auto kv = [&](const std::string& k, const std::string& v) { out << k << " = " << v << '\n'; };
    const auto num = [&](const std::string& k, double v) { kv(k, format_double(v)); };

    kv("name", sc.name);

    out << "\n[system]\n";
    if (!sc.system.preset.empty()) {
        kv("preset", sc.system.preset);
    } else {
        const SystemConfig& y = sc.system;
        kv("n", std::to_string(y.n));
        kv("m", std::to_string(y.m));
        for (int i = 0; i < y.n; ++i) kv("f" + std::to_string(i + 1), y.f[i]);
        for (int i = 0; i < y.n; ++i) {
            for (int j = 0; j < y.m; ++j) {
                kv("g" + std::to_string(i + 1) + "_" + std::to_string(j + 1), y.g[i * y.m + j]);
            }
        }
        for (int i = 0; i < y.n; ++i) kv("h" + std::to_string(i + 1), y.h[i]);
        if (!y.d_m.empty()) kv("d_m", y.d_m);
    }

    const LawConfig& lc = sc.law_cfg;
    out << "\n[law]\n";
    kv("type", std::string(to_string(sc.law)));
    num("alpha", lc.alpha);
    num("k2", lc.k2);
    num("l", lc.l);
    num("gamma", lc.cost.gamma);
    num("u_m", lc.constraint.u_m);
    kv("R", join(lc.constraint.R));
    kv("Q", join(lc.cost.Q));
    kv("K1", compact(lc.K1));
    const Matrix& K2 = lc.K2;
    const Eigen::Index N = K2.rows();
    const bool diagonal = same_values(Matrix(K2.diagonal().asDiagonal()), K2);
    if (diagonal && N > 0 && (K2.diagonal().array() == K2(0, 0)).all()) {
        num("K2", K2(0, 0));
    } else if (diagonal) {
        kv("K2", join(K2.diagonal()));
    } else {
        Vector flat(N * N);
        for (Eigen::Index i = 0; i < N; ++i) {
            for (Eigen::Index j = 0; j < N; ++j) flat(i * N + j) = K2(i, j);
        }
        kv("K2", join(flat));
    }

    out << "\n[critic]\n";
    const int dim = sc.basis.state_dim();
    bool quadratic = false;
    try {
        quadratic = dim > 0 && sc.basis == polynomial_basis(dim, 2, 2);
    } catch (const ConfigError&) {
    }
    if (quadratic) {
        kv("basis", "quadratic");
    } else {
        std::string terms;
        for (const auto& t : sc.basis.terms()) {
            if (!terms.empty()) terms += "; ";
            for (std::size_t k = 0; k < t.size(); ++k) {
                if (k) terms += ' ';
                terms += std::to_string(t[k]);
            }
        }
        kv("terms", terms);
    }
    kv("W0", compact(sc.sim_cfg.W0));

    const SimConfig& s = sc.sim_cfg;
    out << "\n[sim]\n";
    num("dt", s.dt);
    num("t_end", s.t_end);
    kv("x0", join(s.x0));
    kv("xd0", join(s.xd0));
    kv("dither", s.dither_on ? "true" : "false");
    num("dither_scale", s.dither_scale);
    kv("seed", std::to_string(s.seed));
    kv("record_stride", std::to_string(s.record_stride));
    kv("phi_uses_applied_input", s.phi_uses_applied_input ? "true" : "false");
    num("convergence_window", s.convergence_window);
    num("convergence_tol", s.convergence_tol);
    num("steady_window", s.steady_window);

    out << "\n[bounds]\n";
    num("b_N", sc.bounds.b_N);
    num("gamma1", sc.bounds.gamma1);
    num("alpha2", sc.bounds.alpha2);
    return out.str();
}

std::vector<std::string> preset_scenario_names() {
    return {"um9-variable", "um9-constant", "um18-variable", "um18-constant"};
}

Scenario preset_scenario(std::string_view name) {
    const auto all = preset_scenario_names();
    if (std::find(all.begin(), all.end(), name) == all.end()) {
        std::string list;
        for (const auto& p : all) list += (list.empty() ? "" : ", ") + p;
        throw ConfigError("unknown scenario preset '" + std::string(name) + "' (available: " +
                          list + ")");
    }
    const bool um9 = name.substr(0, 4) == "um9-";
    Scenario sc;
    sc.name = std::string(name);
    sc.system.preset = std::string(kTrackingPreset);
    sc.law = name.ends_with("variable") ? UpdateLaw::variable : UpdateLaw::constant;
    sc.basis = quadratic_basis_2d();
    const int N = sc.basis.size();

    LawConfig& lc = sc.law_cfg;
    lc = LawConfig::with_default_gains(N);
    lc.alpha = um9 ? 35.9 : 92.9;
    lc.k2 = um9 ? 1.4 : 0.7;
    lc.l = 0.01;
    lc.cost.gamma = 0.1;
    lc.cost.Q = Vector::Constant(2, 10.0);
    lc.constraint.u_m = um9 ? 9.0 : 1.8;
    lc.constraint.R = Vector::Ones(1);

    SimConfig& s = sc.sim_cfg;
    s.dt = 1e-3;
    s.t_end = um9 ? 1500.0 : 3000.0;
    s.x0 = Vector::Constant(2, 1.5);
    s.xd0 = Vector::Zero(2);
    s.W0 = Vector::Zero(N);
    validate(sc);
    return sc;
}

Scenario load_scenario(const std::string& path_or_preset) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(path_or_preset, ec)) {
        std::ifstream in(path_or_preset);
        if (!in) throw ConfigError("cannot read " + path_or_preset);
        std::ostringstream buf;
        buf << in.rdbuf();
        try {
            return parse_scenario(buf.str());
        } catch (const ConfigError& e) {
            throw ConfigError(path_or_preset + ": " + e.what());
        }
    }
    const auto all = preset_scenario_names();
    if (std::find(all.begin(), all.end(), path_or_preset) != all.end()) {
        return preset_scenario(path_or_preset);
    }
    throw ConfigError("'" + path_or_preset + "' is neither a readable file nor a scenario preset");
}

ExperimentResult run_scenario(const Scenario& sc, const TelemetrySink& sink,
                              bool keep_trajectory) {
    validate(sc);
    const AugmentedModel model = build_model(sc.system);
    const CriticState critic(sc.basis, sc.sim_cfg.W0);
    return run_episode(model, critic, sc.law, sc.law_cfg, sc.sim_cfg, sink, keep_trajectory);
}

BoundReport scenario_bound_report(const Scenario& sc, const ExperimentResult& result) {
    const AugmentedModel model = build_model(sc.system);
    const bool usable = !result.diverged && result.final_state.size() == model.dim() &&
                        result.final_weights.size() == sc.basis.size();
    const Vector z = usable ? result.final_state : make_augmented_state(sc.sim_cfg.x0, sc.sim_cfg.xd0);
    const Vector W = usable ? result.final_weights : sc.sim_cfg.W0;
    const CriticPoint p = evaluate_point(model, z, sc.basis, W, sc.law_cfg.constraint);
    const Vector phi = regressor_phi(p, p.u_hat, sc.law_cfg.cost.gamma);
    return make_bound_report(sc.law_cfg.K1, sc.law_cfg.K2, model.m(), sc.bounds, phi);
}

}  // namespace vgrl
