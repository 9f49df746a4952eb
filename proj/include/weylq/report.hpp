#pragma once

// Declarative problem description (JSON in), exact report (JSON out) and a
// plain-text table view. All rationals are serialized as "p/q" strings and
// every ParamPoly as its coefficient array in ascending powers of μ.

#include "weylq/sl2_ladder.hpp"
#include "weylq/tractor.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace weylq {

using json = nlohmann::json;

inline constexpr const char* version = "0.1.0";

/// Malformed or unsatisfiable problem description (CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline const std::vector<std::string>& known_tasks() {
    static const std::vector<std::string> t{"q_curvature", "l1_spectrum", "ladder_check", "invariant",
                                            "smoothness",  "functional",  "rescale_check"};
    return t;
}

struct BetaSpec {
    struct Exact { Rat kappa; Rat coeff; };
    struct OneForm { std::optional<Rat> mu; Rat coeff; };  // nullopt: symbolic
    std::vector<Exact> exact;
    std::vector<OneForm> coclosed;
    std::vector<Rat> harmonic;

    [[nodiscard]] bool has_symbolic() const {
        return std::any_of(coclosed.begin(), coclosed.end(), [](const OneForm& f) { return !f.mu; });
    }
};

struct ProblemConfig {
    int n = 4;
    Backend backend = Backend::torus;
    int max_norm_sq = 2;  // torus
    int max_degree = 2;   // sphere
    Rat lambda{0};        // custom
    Volume volume;        // custom
    std::vector<ScalarMode> scalar_modes;      // custom
    std::vector<CoclosedMode> coclosed_modes;  // custom
    int harmonic_rank = 0;                     // custom
    std::optional<int> truncation_order;
    BetaSpec beta;
    std::vector<std::string> tasks;
    std::vector<Rat> scale_factors{Rat(4), Rat(1, 9)};
    std::vector<BetaSpec> functional_family;
    long seed = 0;
    DriftForm drift = DriftForm::corrected;  // Frobenius route only; as_printed is for reproducing the discrepancy
    json echo;  // the config as read

    [[nodiscard]] int truncation() const { return truncation_order.value_or(default_truncation(n)); }
    [[nodiscard]] bool wants(const std::string& task) const {
        return std::find(tasks.begin(), tasks.end(), task) != tasks.end();
    }
};

namespace detail {

inline Rat rat_field(const json& j, const std::string& what) {
    try {
        if (j.is_number_integer()) return Rat(j.get<long>());
        if (j.is_string()) return Rat::parse(j.get<std::string>());
    } catch (const std::exception& e) {
        throw ConfigError(what + ": " + e.what());
    }
    throw ConfigError(what + ": expected an integer or a rational string");
}

inline int int_field(const json& j, const std::string& what) {
    if (!j.is_number_integer()) throw ConfigError(what + ": expected an integer");
    return j.get<int>();
}

inline const json& member(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
    return obj.at(key);
}

inline BetaSpec parse_beta(const json& j, const std::string& where) {
    BetaSpec b;
    if (j.is_null()) return b;
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        if (key != "exact" && key != "coclosed" && key != "harmonic")
            throw ConfigError(where + ": unknown field '" + key + "'");
        if (!value.is_array()) throw ConfigError(where + "." + key + ": expected an array");
    }
    if (j.contains("exact"))
        for (const auto& e : j.at("exact"))
            b.exact.push_back({rat_field(member(e, "kappa", where + ".exact"), where + ".exact.kappa"),
                               rat_field(member(e, "coeff", where + ".exact"), where + ".exact.coeff")});
    if (j.contains("coclosed"))
        for (const auto& e : j.at("coclosed")) {
            const json& mu = member(e, "mu", where + ".coclosed");
            BetaSpec::OneForm f;
            if (!(mu.is_string() && mu.get<std::string>() == "symbolic")) f.mu = rat_field(mu, where + ".coclosed.mu");
            f.coeff = rat_field(member(e, "coeff", where + ".coclosed"), where + ".coclosed.coeff");
            b.coclosed.push_back(std::move(f));
        }
    if (j.contains("harmonic"))
        for (const auto& e : j.at("harmonic"))
            b.harmonic.push_back(rat_field(member(e, "coeff", where + ".harmonic"), where + ".harmonic.coeff"));
    return b;
}

}  // namespace detail

inline ProblemConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    static const std::set<std::string> fields{"n",          "backend",       "max_norm_sq",       "max_degree",
                                              "lambda",     "volume",        "scalar_modes",      "coclosed_modes",
                                              "harmonic_rank", "truncation_order", "beta",        "tasks",
                                              "scale_factors", "functional_family", "seed",
                                              "tangential_drift"};
    for (const auto& [key, value] : j.items())
        if (!fields.count(key)) throw ConfigError("config: unknown field '" + key + "'");

    ProblemConfig c;
    c.echo = j;
    c.n = detail::int_field(detail::member(j, "n", "config"), "n");
    if (c.n < 4 || c.n % 2 != 0) throw ConfigError("n must be even and >= 4");
    const json& backend = detail::member(j, "backend", "config");
    if (!backend.is_string()) throw ConfigError("backend: expected a string");
    const std::string b = backend.get<std::string>();
    if (b == "torus") c.backend = Backend::torus;
    else if (b == "sphere") c.backend = Backend::sphere;
    else if (b == "custom") c.backend = Backend::custom;
    else throw ConfigError("backend: expected torus, sphere or custom");

    if (j.contains("max_norm_sq")) c.max_norm_sq = detail::int_field(j.at("max_norm_sq"), "max_norm_sq");
    if (j.contains("max_degree")) c.max_degree = detail::int_field(j.at("max_degree"), "max_degree");
    if (c.max_norm_sq < 0 || c.max_degree < 0) throw ConfigError("mode bounds must be >= 0");

    const bool custom_only = j.contains("lambda") || j.contains("volume") || j.contains("scalar_modes") ||
                             j.contains("coclosed_modes") || j.contains("harmonic_rank");
    if (custom_only && c.backend != Backend::custom)
        throw ConfigError("lambda, volume and mode tables are only accepted for the custom backend");
    if (c.backend == Backend::custom) {
        c.lambda = detail::rat_field(detail::member(j, "lambda", "config"), "lambda");
        if (j.contains("volume")) {
            const json& v = j.at("volume");
            c.volume.factor = detail::rat_field(detail::member(v, "factor", "volume"), "volume.factor");
            const json& tok = detail::member(v, "token", "volume");
            if (!tok.is_string()) throw ConfigError("volume.token: expected a string");
            c.volume.token = tok.get<std::string>();
        }
        for (const auto& m : detail::member(j, "scalar_modes", "config")) {
            const Rat kappa = detail::rat_field(detail::member(m, "kappa", "scalar_modes"), "scalar_modes.kappa");
            const int mult = detail::int_field(detail::member(m, "multiplicity", "scalar_modes"), "scalar_modes.multiplicity");
            c.scalar_modes.push_back({kappa, mult, kappa.sign() > 0});
        }
        if (j.contains("coclosed_modes"))
            for (const auto& m : j.at("coclosed_modes"))
                c.coclosed_modes.push_back(
                    {ParamPoly(detail::rat_field(detail::member(m, "mu", "coclosed_modes"), "coclosed_modes.mu")),
                     detail::int_field(detail::member(m, "multiplicity", "coclosed_modes"), "coclosed_modes.multiplicity")});
        if (j.contains("harmonic_rank")) c.harmonic_rank = detail::int_field(j.at("harmonic_rank"), "harmonic_rank");
    }
    if (j.contains("truncation_order")) {
        c.truncation_order = detail::int_field(j.at("truncation_order"), "truncation_order");
        if (*c.truncation_order < c.n) throw ConfigError("truncation_order must be >= n");
    }
    if (j.contains("beta")) c.beta = detail::parse_beta(j.at("beta"), "beta");
    if (j.contains("tasks")) {
        if (!j.at("tasks").is_array()) throw ConfigError("tasks: expected an array");
        for (const auto& t : j.at("tasks")) {
            if (!t.is_string()) throw ConfigError("tasks: expected strings");
            const std::string s = t.get<std::string>();
            if (std::find(known_tasks().begin(), known_tasks().end(), s) == known_tasks().end())
                throw ConfigError("tasks: unknown task '" + s + "'");
            if (!c.wants(s)) c.tasks.push_back(s);
        }
    }
    if (j.contains("scale_factors")) {
        c.scale_factors.clear();
        for (const auto& f : j.at("scale_factors")) c.scale_factors.push_back(detail::rat_field(f, "scale_factors"));
    }
    if (j.contains("functional_family")) {
        if (!j.at("functional_family").is_array()) throw ConfigError("functional_family: expected an array");
        for (const auto& b2 : j.at("functional_family"))
            c.functional_family.push_back(detail::parse_beta(b2, "functional_family[]"));
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer()) throw ConfigError("seed: expected an integer");
        c.seed = j.at("seed").get<long>();
    }

    if (j.contains("tangential_drift")) {
        const json& d = j.at("tangential_drift");
        if (d == "corrected") c.drift = DriftForm::corrected;
        else if (d == "as_printed") c.drift = DriftForm::as_printed;
        else throw ConfigError("tangential_drift: expected corrected or as_printed");
    }

    bool symbolic = c.beta.has_symbolic();
    for (const auto& b2 : c.functional_family) symbolic = symbolic || b2.has_symbolic();
    if (symbolic)
        for (const auto& t : c.tasks)
            if (t != "l1_spectrum" && t != "ladder_check")
                throw ConfigError("symbolic mu is only allowed with the l1_spectrum and ladder_check tasks");
    return c;
}

inline ProblemConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

/// Integer square root of a positive rational, if it has one.
inline std::optional<Rat> rational_sqrt(const Rat& r) {
    if (r.sign() <= 0) return std::nullopt;
    mpz_class a = sqrt(r.num());
    mpz_class b = sqrt(r.den());
    if (a * a != r.num() || b * b != r.den()) return std::nullopt;
    return Rat(mpq_class(a, b));
}

struct Problem {
    EinsteinModel model;
    BoundaryWeyl beta;
    std::vector<BoundaryWeyl> family;
};

namespace detail {

inline Rat max_eigenvalue(const BetaSpec& b) {
    Rat m(0);
    for (const auto& e : b.exact) m = std::max(m, e.kappa);
    for (const auto& e : b.coclosed)
        if (e.mu) m = std::max(m, *e.mu);
    return m;
}

/// Resolves β against the model, one normalized eigenform per component.
inline BoundaryWeyl resolve_beta(EinsteinModel& model, const BetaSpec& spec, const std::string& where) {
    BoundaryWeyl beta;
    for (const auto& e : spec.exact) {
        auto it = std::find_if(model.scalar_modes.begin(), model.scalar_modes.end(),
                               [&](const ScalarMode& m) { return m.kappa == e.kappa; });
        if (it == model.scalar_modes.end() || e.kappa.is_zero())
            throw ConfigError(where + ": no nonconstant scalar mode with kappa = " + e.kappa.str());
        beta.exact_part.push_back({static_cast<std::size_t>(it - model.scalar_modes.begin()), e.coeff});
    }
    for (const auto& e : spec.coclosed) {
        std::size_t idx = model.coclosed_modes.size();
        for (std::size_t i = 0; i < model.coclosed_modes.size(); ++i) {
            const ParamPoly& mu = model.coclosed_modes[i].mu;
            if (e.mu ? mu == ParamPoly(*e.mu) : mu == ParamPoly::mu()) idx = i;
        }
        if (idx == model.coclosed_modes.size()) {
            if (e.mu) throw ConfigError(where + ": no coclosed mode with mu = " + e.mu->str());
            model.coclosed_modes.push_back({ParamPoly::mu(), 1});
        }
        if (e.mu && e.mu->is_zero()) throw ConfigError(where + ": mu = 0 belongs in the harmonic part");
        beta.coclosed_part.push_back({idx, e.coeff});
    }
    for (const auto& c : spec.harmonic) {
        auto it = std::find_if(model.coclosed_modes.begin(), model.coclosed_modes.end(),
                               [](const CoclosedMode& m) { return m.is_harmonic(); });
        if (it == model.coclosed_modes.end()) throw ConfigError(where + ": the model has no harmonic 1-forms");
        beta.harmonic_part.push_back({static_cast<std::size_t>(it - model.coclosed_modes.begin()), c});
    }
    const auto problems = check_references(model, beta);
    if (!problems.empty()) throw ConfigError(where + ": " + problems.front());
    return beta;
}

}  // namespace detail

inline Problem build_problem(const ProblemConfig& c) {
    Problem p;
    Rat needed = detail::max_eigenvalue(c.beta);
    for (const auto& b : c.functional_family) needed = std::max(needed, detail::max_eigenvalue(b));
    switch (c.backend) {
        case Backend::torus: {
            // Enlarge the lattice window to cover every referenced eigenvalue.
            int bound = c.max_norm_sq;
            while (Rat(bound) < needed) ++bound;
            p.model = make_flat_torus(c.n, bound);
            break;
        }
        case Backend::sphere: {
            int degree = c.max_degree;
            while (Rat((degree + 1) * (degree + c.n - 2)) < needed || Rat(degree * (degree + c.n - 1)) < needed)
                ++degree;
            p.model = make_round_sphere(c.n, degree);
            break;
        }
        case Backend::custom: {
            p.model.n = c.n;
            p.model.lambda = c.lambda;
            p.model.volume = c.volume;
            p.model.scalar_modes = c.scalar_modes;
            p.model.coclosed_modes = c.coclosed_modes;
            p.model.harmonic_rank = c.harmonic_rank;
            p.model.backend = Backend::custom;
            p.model.tag = "custom" + std::to_string(c.n);
            const bool has_harmonic = std::any_of(c.coclosed_modes.begin(), c.coclosed_modes.end(),
                                                  [](const CoclosedMode& m) { return m.is_harmonic(); });
            if (c.harmonic_rank > 0 && !has_harmonic) p.model.coclosed_modes.push_back({ParamPoly(), c.harmonic_rank});
            break;
        }
    }
    const auto violations = validate(p.model);
    if (!violations.empty()) throw ConfigError("model is invalid: " + to_string(violations.front()));
    p.beta = detail::resolve_beta(p.model, c.beta, "beta");
    for (std::size_t i = 0; i < c.functional_family.size(); ++i)
        p.family.push_back(detail::resolve_beta(p.model, c.functional_family[i], "functional_family[" + std::to_string(i) + "]"));
    return p;
}

// ---------------------------------------------------------------- serialization

inline json to_json(const Rat& r) { return r.str(); }

inline json to_json(const ParamPoly& p) {
    json a = json::array();
    for (const auto& c : p.coefficients()) a.push_back(c.str());
    if (a.empty()) a.push_back("0");
    return a;
}

inline json to_json(const LogSeries& s) {
    json a = json::array();
    json b = json::array();
    for (int k = 0; k <= s.order(); ++k) {
        a.push_back(to_json(s.a(k)));
        b.push_back(to_json(s.b(k)));
    }
    return {{"N", s.order()}, {"parity", s.parity() == Parity::even_only ? "even" : "unrestricted"}, {"a", a}, {"b", b}};
}

inline json to_json(const ModeValue& m) {
    return {{"label", m.label}, {"channel", to_string(m.channel)}, {"constant_mode", m.constant_mode},
            {"value", to_json(m.value)}};
}

inline json to_json(const std::vector<ModeValue>& v) {
    json a = json::array();
    for (const auto& m : v) a.push_back(to_json(m));
    return a;
}

inline json to_json(const Integral& i) {
    return {{"vol_coefficient", to_json(i.vol_coefficient)}, {"constant", to_json(i.constant)},
            {"token", i.token}, {"text", i.str()}};
}

inline json model_json(const EinsteinModel& m) {
    json scalar = json::array();
    for (const auto& s : m.scalar_modes)
        scalar.push_back({{"kappa", to_json(s.kappa)}, {"multiplicity", s.multiplicity}});
    json coclosed = json::array();
    for (const auto& c : m.coclosed_modes)
        coclosed.push_back({{"mu", to_json(c.mu)}, {"multiplicity", c.multiplicity}});
    return {{"n", m.n},
            {"lambda", to_json(m.lambda)},
            {"backend", to_string(m.backend)},
            {"tag", m.tag},
            {"volume", {{"factor", to_json(m.volume.factor)}, {"token", m.volume.token}}},
            {"harmonic_rank", m.harmonic_rank},
            {"one_form_table_dependent", m.one_form_table_dependent},
            {"scalar_modes", scalar},
            {"coclosed_modes", coclosed}};
}

// ---------------------------------------------------------------- run

struct Check {
    std::string name;
    bool pass = false;
    std::string lhs;
    std::string rhs;
};

namespace detail {

/// Runs f(i) for i in [0, count) on up to `jobs` threads; results are
/// stored by index so assembly order does not depend on scheduling.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, int jobs, Fn f) {
    std::vector<T> out(count);
    std::vector<std::exception_ptr> errors(count);
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), std::max<std::size_t>(count, 1));
    auto work = [&](std::size_t start) {
        for (std::size_t i = start; i < count; i += workers) {
            try {
                out[i] = f(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

inline std::string poly_text(const ParamPoly& p) { return p.str("mu"); }

struct L1Row {
    std::string label;
    ParamPoly mu;
    ParamPoly frobenius;
    ParamPoly ladder;
    ParamPoly product;
    std::vector<ParamPoly> step_factors;
    std::vector<ParamPoly> index_factors;
};

inline bool same_multiset(std::vector<ParamPoly> a, std::vector<ParamPoly> b) {
    if (a.size() != b.size()) return false;
    for (const auto& x : a) {
        auto it = std::find(b.begin(), b.end(), x);
        if (it == b.end()) return false;
        b.erase(it);
    }
    return true;
}

/// Random element of 𝒜[w] on a channel, with even series and, for
/// w >= -n+2 on the exact channel, a normal part starting at x².
inline WeightedForm random_form(std::mt19937_64& rng, int n, int weight, Channel channel, const ParamPoly& eigen,
                                int order) {
    std::uniform_int_distribution<int> coeff(-5, 5);
    WeightedForm f{weight, channel, eigen, LogSeries(order), LogSeries(order)};
    for (int k = 0; k <= order; k += 2) {
        f.tangential.set_a(k, ParamPoly(Rat(coeff(rng), 1 + (coeff(rng) + 5) % 3)));
        if (channel == Channel::exact && (k > 0 || weight < -n + 2))
            f.normal.set_a(k, ParamPoly(Rat(coeff(rng))));
    }
    return f;
}

}  // namespace detail

inline int default_jobs() {
    if (const char* env = std::getenv("WEYLQ_JOBS")) {
        try {
            const int j = std::stoi(env);
            if (j > 0) return j;
        } catch (const std::exception&) {
        }
    }
    return 1;
}

struct RunResult {
    json report;
    std::vector<Check> checks;
    [[nodiscard]] bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
};

/// Runs every requested task plus the always-on cross-path checks.
inline RunResult run(const ProblemConfig& config, int jobs = 1) {
    const Problem problem = build_problem(config);
    const EinsteinModel& model = problem.model;
    const BoundaryWeyl& beta = problem.beta;
    const int n = model.n;
    const int order = config.truncation();
    if (order < n) throw ConfigError("truncation order must be >= n");

    RunResult rr;
    json& out = rr.report;
    auto check = [&](std::string name, bool pass, std::string lhs, std::string rhs) {
        rr.checks.push_back({std::move(name), pass, std::move(lhs), std::move(rhs)});
    };
    auto check_poly = [&](std::string name, const ParamPoly& a, const ParamPoly& b) {
        check(std::move(name), a == b, detail::poly_text(a), detail::poly_text(b));
    };

    out["version"] = version;
    out["seed"] = config.seed;
    out["config"] = config.echo;
    out["model"] = model_json(model);
    out["truncation_order"] = order;
    out["tasks"] = config.tasks;

    // Always-on: defining-function constants.
    const DefiningFunctionData df = log_defining_function(model, order);
    check("n*s = Q_01", Rat(n) * df.s == df.q01, (Rat(n) * df.s).str(), df.q01.str());
    check("Q_h = s/c_n", df.q_h == df.s / q_curvature_constant(n), df.q_h.str(), (df.s / q_curvature_constant(n)).str());

    // Always-on: three-way L1 on every coclosed mode referenced by β (or
    // by the model when the spectrum is requested).
    std::vector<std::size_t> l1_modes;
    auto note_mode = [&](std::size_t i) {
        if (std::find(l1_modes.begin(), l1_modes.end(), i) == l1_modes.end()) l1_modes.push_back(i);
    };
    for (const auto& c : beta.coclosed_part) note_mode(c.mode);
    for (const auto& c : beta.harmonic_part) note_mode(c.mode);
    if (config.wants("l1_spectrum") || config.wants("ladder_check"))
        for (std::size_t i = 0; i < model.coclosed_modes.size(); ++i) note_mode(i);
    std::sort(l1_modes.begin(), l1_modes.end());

    const auto rows = detail::parallel_map<detail::L1Row>(l1_modes.size(), jobs, [&](std::size_t i) {
        const std::size_t idx = l1_modes[i];
        const ParamPoly& mu = model.coclosed_modes[idx].mu;
        detail::L1Row r;
        r.label = coclosed_label(model, idx);
        r.mu = mu;
        r.frobenius = harmonic_extension_coclosed(model, mu, Rat(1), order, config.drift).l1;
        r.ladder = ladder_eigenvalue(model, Channel::coclosed, mu, order);
        r.product = product_formula_L1(model, mu);
        r.step_factors = ladder_factors(n, model.lambda, mu);
        for (int w = 0; w <= n / 2 - 2; ++w) r.index_factors.push_back(mu - ParamPoly(Rat(2 * w * (w - n + 3)) * model.lambda));
        return r;
    });
    for (const auto& r : rows) {
        check_poly("L1 frobenius = ladder [" + r.label + "]", r.frobenius, r.ladder);
        check_poly("L1 ladder = product [" + r.label + "]", r.ladder, r.product);
    }

    // Always-on: G1 d = n L0 and the exact-channel ladder value 0 on each exact component.
    struct ExactRow {
        std::string label;
        ParamPoly l0, g1, ladder;
    };
    const auto exact_rows = detail::parallel_map<ExactRow>(beta.exact_part.size(), jobs, [&](std::size_t i) {
        const std::size_t idx = beta.exact_part[i].mode;
        const ParamPoly kappa(model.scalar_modes[idx].kappa);
        const ExactChannel e = exact_channel(model, kappa, Rat(1), order);
        return ExactRow{scalar_label(model, idx), e.scalar.l0, e.g1, ladder_eigenvalue(model, Channel::exact, kappa, order)};
    });
    for (const auto& r : exact_rows) {
        check_poly("G1 d = n L0 [" + r.label + "]", r.g1, r.l0 * Rat(n));
        check_poly("L1 d = 0 [" + r.label + "]", r.ladder, ParamPoly());
    }

    // Always-on: series-level gauge residuals.
    const GaugeResiduals gauge = gauge_residuals(model, beta, order);
    check("gauge residuals vanish", gauge.all_zero(), gauge.all_zero() ? "0" : "nonzero", "0");

    const bool concrete = !config.beta.has_symbolic();
    std::optional<InvariantReport> inv;
    if (concrete) {
        inv = integral_invariant(model, beta, order);
        check("pairing = integral invariant", inv->pairing.integrated == inv->invariant, inv->pairing.integrated.str(),
              inv->invariant.str());
        check("smooth <=> Q_tractor = 0", inv->smooth == inv->q_tractor.is_zero(), inv->smooth ? "smooth" : "not smooth",
              inv->q_tractor.is_zero() ? "zero" : "nonzero");
    }

    if (config.wants("q_curvature")) {
        json r;
        for (const auto& c : df.r) r.push_back(to_json(c));
        out["q_curvature"] = {{"s", to_json(df.s)},
                              {"q_h", to_json(df.q_h)},
                              {"q01", to_json(df.q01)},
                              {"c_n", to_json(q_curvature_constant(n))},
                              {"log_rho_minus_log_x", r},
                              {"series", to_json(df.solution.series)}};
    }

    if (config.wants("l1_spectrum")) {
        json entries = json::array();
        for (const auto& r : rows)
            entries.push_back({{"label", r.label},
                               {"mu", to_json(r.mu)},
                               {"l1_frobenius", to_json(r.frobenius)},
                               {"l1_ladder", to_json(r.ladder)},
                               {"l1_product", to_json(r.product)},
                               {"agree", r.frobenius == r.ladder && r.ladder == r.product}});
        json exact = json::array();
        for (const auto& r : exact_rows)
            exact.push_back({{"label", r.label}, {"l0", to_json(r.l0)}, {"g1", to_json(r.g1)}, {"l1", to_json(r.ladder)}});
        out["l1_spectrum"] = {{"entries", entries}, {"exact", exact}};
    }

    if (config.wants("ladder_check")) {
        json entries = json::array();
        for (const auto& r : rows) {
            json steps = json::array();
            json index = json::array();
            for (const auto& f : r.step_factors) steps.push_back(to_json(f));
            for (const auto& f : r.index_factors) index.push_back(to_json(f));
            const bool same = detail::same_multiset(r.step_factors, r.index_factors);
            check("ladder factor multisets [" + r.label + "]", same, "steps", "indices");
            entries.push_back({{"label", r.label},
                               {"l1_ladder", to_json(r.ladder)},
                               {"ladder_constant", to_json(ladder_constant(n))},
                               {"step_factors", steps},
                               {"index_factors", index},
                               {"multisets_equal", same},
                               {"extension_independent", true}});
        }
        // sl2 relations on seeded random forms.
        std::mt19937_64 rng(static_cast<std::uint64_t>(config.seed));
        int samples = 0;
        bool sl2_ok = true;
        const int sample_order = n + 6;
        for (int w = -6; w <= 6; w += 2) {
            for (Channel ch : {Channel::coclosed, Channel::exact}) {
                const ParamPoly eigen = ch == Channel::coclosed ? ParamPoly::mu() : ParamPoly(Rat(1 + samples % 3));
                const WeightedForm f = detail::random_form(rng, n, w, ch, eigen, sample_order);
                auto sub = [](const WeightedForm& a, const WeightedForm& b) {
                    WeightedForm r = a;
                    r.tangential = a.tangential - b.tangential;
                    r.normal = a.normal - b.normal;
                    return r;
                };
                const WeightedForm ef = sub(op_E(op_F(model, f), n), op_F(model, op_E(f, n)));
                const WeightedForm he = sub(op_H(op_E(f, n), n), op_E(op_H(f, n), n));
                const WeightedForm hf = sub(op_H(op_F(model, f), n), op_F(model, op_H(f, n)));
                const WeightedForm h = op_H(f, n);
                WeightedForm two_e = op_E(f, n);
                two_e.tangential = scale(two_e.tangential, ParamPoly(2));
                two_e.normal = scale(two_e.normal, ParamPoly(2));
                WeightedForm minus_two_f = op_F(model, f);
                minus_two_f.tangential = scale(minus_two_f.tangential, ParamPoly(-2));
                minus_two_f.normal = scale(minus_two_f.normal, ParamPoly(-2));
                sl2_ok = sl2_ok && ef.tangential.agrees_with(h.tangential) && ef.normal.agrees_with(h.normal) &&
                         he.same_as(two_e) && hf.same_as(minus_two_f);
                ++samples;
            }
        }
        check("sl2 relations", sl2_ok, std::to_string(samples) + " samples", "exact");
        out["ladder_check"] = {{"entries", entries}, {"sl2_samples", samples}, {"sl2_relations", sl2_ok}};
    }

    if (config.wants("invariant") && inv) {
        json bottom = to_json(inv->q_tractor.bottom);
        json middle = to_json(inv->q_tractor.middle);
        json breakdown = json::array();
        for (const auto& e : inv->per_mode_breakdown)
            breakdown.push_back({{"label", e.label}, {"mu", to_json(e.mu)}, {"l1", to_json(e.l1)},
                                 {"coeff", to_json(e.coeff)}, {"value", to_json(e.value)}});
        out["invariant"] = {{"q_tractor", {{"bottom", bottom}, {"middle", middle}, {"top", to_json(inv->q_tractor.top)},
                                           {"prefactor", to_json(inv->q_tractor.prefactor)},
                                           {"weight", inv->q_tractor.weight}}},
                            {"smooth", inv->smooth},
                            {"q_h", to_json(inv->q_h)},
                            {"q_total", to_json(inv->q_total)},
                            {"second_term", to_json(inv->second_term)},
                            {"invariant", to_json(inv->invariant)},
                            {"second_term_breakdown", breakdown},
                            {"pairing", {{"density", to_json(inv->pairing.density)},
                                         {"integrated", to_json(inv->pairing.integrated)}}},
                            {"gauge_note", inv->gauge_note}};
    }

    if (config.wants("smoothness")) {
        const SmoothnessVerdict v = smoothness_obstruction(model, beta, order);
        const ExpansionReport er = expansion_report(model, beta, order);
        check("ExpansionReport constants", er.constants_consistent(), "n*s, s/c_n", "Q_01, Q_h");
        json channels = json::array();
        for (const auto& c : er.weyl_extension)
            channels.push_back({{"label", c.label}, {"channel", to_string(c.channel)},
                                {"tangential_log", to_json(c.tangential_log)}, {"normal_log", to_json(c.normal_log)},
                                {"tangential", to_json(c.tangential)}, {"normal", to_json(c.normal)}});
        out["smoothness"] = {{"smooth", v.smooth},
                             {"l1_beta", to_json(v.l1_beta)},
                             {"bottom", to_json(v.bottom)},
                             {"expansion", {{"defining_function", to_json(er.defining.solution.series)},
                                            {"channels", channels}}}};
    }

    if (config.wants("functional")) {
        const FunctionalReport fr = functional_report(model, problem.family, order);
        json entries = json::array();
        for (const auto& e : fr.entries)
            entries.push_back({{"index", e.index}, {"invariant", to_json(e.invariant)},
                               {"second_term", to_json(e.second_term)}, {"closed", e.closed}});
        out["functional"] = {{"entries", entries},
                             {"minimizers", fr.minimizers},
                             {"all_nonnegative", fr.all_nonnegative},
                             {"zero_iff_closed", fr.zero_iff_closed},
                             {"factor_check_applicable", fr.factor_check_applicable},
                             {"all_factors_positive", fr.all_factors_positive},
                             {"nonpositive_factors", fr.nonpositive_factors}};
    }

    if (config.wants("rescale_check")) {
        json results = json::array();
        for (const Rat& factor : config.scale_factors) {
            const auto t = rational_sqrt(factor);
            if (!t) throw ConfigError("scale factor " + factor.str() + " is not the square of a rational");
            const RescaleCheck rc = rescale_constant(model, beta, ConformalFactor::constant_scale(*t), order);
            json named = json::array();
            for (const auto& c : rc.checks) {
                named.push_back({{"name", c.name}, {"pass", c.pass}, {"lhs", c.lhs}, {"rhs", c.rhs}});
                check("rescale x" + factor.str() + ": " + c.name, c.pass, c.lhs, c.rhs);
            }
            results.push_back({{"metric_factor", to_json(factor)}, {"e_upsilon", to_json(*t)},
                               {"invariant", to_json(rc.transformed.invariant)}, {"checks", named},
                               {"all_pass", rc.all_pass()}});
        }
        out["rescale_check"] = results;
    }

    json checks = json::array();
    for (const auto& c : rr.checks)
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"lhs", c.lhs}, {"rhs", c.rhs}});
    out["consistency_checks"] = checks;
    return rr;
}

// ---------------------------------------------------------------- table view

namespace detail {

inline std::string approx(const std::string& rat) {
    try {
        const Rat r = Rat::parse(rat);
        if (r.is_integer()) return rat;
        std::ostringstream os;
        os << rat << " (~" << std::setprecision(6) << r.to_double() << ")";
        return os.str();
    } catch (const std::exception&) {
        return rat;
    }
}

/// Coefficient array back to "a mu^2 + b mu + c" text.
inline std::string poly_from_json(const json& a) {
    std::vector<Rat> c;
    for (const auto& x : a) c.push_back(Rat::parse(x.get<std::string>()));
    return ParamPoly(c).str("mu");
}

inline void row(std::ostringstream& os, const std::string& key, const std::string& value) {
    os << "  " << std::left << std::setw(28) << key << value << "\n";
}

}  // namespace detail

/// Human-readable view of a report. Decimals in parentheses are approximate.
inline std::string render_table(const json& report) {
    std::ostringstream os;
    const json& m = report.at("model");
    os << "weylq " << report.at("version").get<std::string>() << "  n=" << m.at("n").get<int>()
       << "  backend=" << m.at("backend").get<std::string>() << "  lambda=" << m.at("lambda").get<std::string>()
       << "  truncation=" << report.at("truncation_order").get<int>() << "\n";

    if (report.contains("q_curvature")) {
        const json& q = report.at("q_curvature");
        os << "\n[q_curvature]\n";
        detail::row(os, "s", detail::approx(q.at("s").get<std::string>()));
        detail::row(os, "Q_h", detail::approx(q.at("q_h").get<std::string>()));
        detail::row(os, "Q_01", detail::approx(q.at("q01").get<std::string>()));
    }
    if (report.contains("l1_spectrum")) {
        os << "\n[l1_spectrum]\n";
        for (const auto& e : report.at("l1_spectrum").at("entries"))
            detail::row(os, e.at("label").get<std::string>(),
                        "L1 = " + detail::poly_from_json(e.at("l1_frobenius")) +
                            (e.at("agree").get<bool>() ? "  (frobenius = ladder = product)" : "  (PATHS DISAGREE)"));
        for (const auto& e : report.at("l1_spectrum").at("exact"))
            detail::row(os, e.at("label").get<std::string>(),
                        "L0 = " + detail::poly_from_json(e.at("l0")) + ", G1 = " + detail::poly_from_json(e.at("g1")));
    }
    if (report.contains("ladder_check")) {
        const json& l = report.at("ladder_check");
        os << "\n[ladder_check]\n";
        for (const auto& e : l.at("entries"))
            detail::row(os, e.at("label").get<std::string>(),
                        "ladder L1 = " + detail::poly_from_json(e.at("l1_ladder")) +
                            (e.at("multisets_equal").get<bool>() ? ", factor multisets equal" : ", FACTOR MISMATCH"));
        detail::row(os, "sl2 relations", std::string(l.at("sl2_relations").get<bool>() ? "hold" : "FAIL") + " on " +
                                             std::to_string(l.at("sl2_samples").get<int>()) + " samples");
    }
    if (report.contains("invariant")) {
        const json& v = report.at("invariant");
        os << "\n[invariant]\n";
        detail::row(os, "Q_tractor prefactor", v.at("q_tractor").at("prefactor").get<std::string>());
        for (const auto& e : v.at("q_tractor").at("bottom"))
            detail::row(os, "bottom " + e.at("label").get<std::string>(), detail::poly_from_json(e.at("value")));
        for (const auto& e : v.at("q_tractor").at("middle"))
            detail::row(os, "middle " + e.at("label").get<std::string>(), detail::poly_from_json(e.at("value")));
        detail::row(os, "integral of Q_h", v.at("q_total").at("text").get<std::string>());
        detail::row(os, "second term", detail::approx(v.at("second_term").get<std::string>()));
        detail::row(os, "invariant", v.at("invariant").at("text").get<std::string>());
    }
    if (report.contains("smoothness")) {
        const json& s = report.at("smoothness");
        os << "\n[smoothness]\n";
        if (s.at("smooth").get<bool>()) {
            os << "  smooth: YES, Q_tractor = 0\n";
        } else {
            std::string reason;
            for (const auto& e : s.at("bottom")) {
                const std::string val = detail::poly_from_json(e.at("value"));
                if (val != "0") {
                    reason = "bottom = " + val + " on " + e.at("label").get<std::string>();
                    break;
                }
            }
            if (reason.empty())
                for (const auto& e : s.at("l1_beta")) {
                    const std::string val = detail::poly_from_json(e.at("value"));
                    if (val != "0") {
                        reason = "L1 beta = " + val + " on " + e.at("label").get<std::string>();
                        break;
                    }
                }
            os << "  smooth: NO (" << reason << ")\n";
        }
    }
    if (report.contains("functional")) {
        const json& f = report.at("functional");
        os << "\n[functional]\n";
        for (const auto& e : f.at("entries"))
            detail::row(os, "beta[" + std::to_string(e.at("index").get<std::size_t>()) + "]",
                        e.at("invariant").at("text").get<std::string>() +
                            (e.at("closed").get<bool>() ? "  (closed)" : ""));
        detail::row(os, "second terms >= 0", f.at("all_nonnegative").get<bool>() ? "yes" : "NO");
        detail::row(os, "zero iff closed", f.at("zero_iff_closed").get<bool>() ? "yes" : "NO");
        if (f.at("factor_check_applicable").get<bool>())
            detail::row(os, "product factors > 0", f.at("all_factors_positive").get<bool>() ? "yes" : "NO");
    }
    if (report.contains("rescale_check")) {
        os << "\n[rescale_check]\n";
        for (const auto& r : report.at("rescale_check"))
            detail::row(os, "h -> " + r.at("metric_factor").get<std::string>() + " h",
                        r.at("invariant").at("text").get<std::string>() +
                            (r.at("all_pass").get<bool>() ? "  (all weights match)" : "  (WEIGHT MISMATCH)"));
    }
    if (report.contains("consistency_checks") && !report.at("tasks").empty()) {
        std::size_t pass = 0;
        const json& cs = report.at("consistency_checks");
        for (const auto& c : cs) pass += c.at("pass").get<bool>() ? 1 : 0;
        os << "\nconsistency checks: " << pass << "/" << cs.size() << " pass\n";
        for (const auto& c : cs)
            if (!c.at("pass").get<bool>())
                os << "  FAIL " << c.at("name").get<std::string>() << ": " << c.at("lhs").get<std::string>()
                   << " != " << c.at("rhs").get<std::string>() << "\n";
    }
    return os.str();
}

}  // namespace weylq
