#pragma once

// Asymptotic Dirichlet problem on the Einstein model, channel by channel:
// the log defining function (s, Q_h), harmonic extensions of functions (L0)
// and coclosed 1-forms (L1), the exact channel b̄ = d f̄ (G1 = n·L0), and
// the first-log-term smoothness test for the bulk Weyl structure.

#include "weylq/hodge.hpp"
#include "weylq/radial.hpp"
#include "weylq/spectral_model.hpp"

#include <string>
#include <vector>

namespace weylq {

inline int default_truncation(int n) { return n + 2; }

inline void require_truncation(int n, int order) {
    if (order < n) throw std::invalid_argument("truncation order " + std::to_string(order) + " is below n = " + std::to_string(n));
}

/// s = c_n·Q_h with c_n = (-1)^{n/2-1} / (2^{n-1} (n/2)! (n/2-1)!).
inline Rat q_curvature_constant(int n) {
    const int h = n / 2;
    const Rat sign = (h - 1) % 2 == 0 ? Rat(1) : Rat(-1);
    return sign / (pow(Rat(2), n - 1) * factorial(h) * factorial(h - 1));
}

/// Q_0 1 = q01_factor(n)·Q_h with (-1)^{n/2-1} / (2^{n-2} ((n/2-1)!)²).
inline Rat q01_factor(int n) {
    const int h = n / 2;
    const Rat sign = (h - 1) % 2 == 0 ? Rat(1) : Rat(-1);
    return sign / (pow(Rat(2), n - 2) * factorial(h - 1) * factorial(h - 1));
}

/// The global normalization (-1)^{n/2-1} 2^{n-2} ((n/2-1)!)² of the Q-curvature tractor.
inline Rat tractor_prefactor(int n) { return Rat(1) / q01_factor(n); }

struct DefiningFunctionData {
    std::vector<Rat> r;  // r[k] = coefficient of x^k in u = log ρ - log x, k = 0..n-1
    Rat s;
    Rat q_h;
    Rat q01;
    FrobeniusSolution solution;
};

/// Constant mode: Δ_g u = n - Δ_g(log x) = -nλx²/w with u(0) = 0, so that
/// Δ_g(log ρ) = n. The x^n log x coefficient is s.
inline DefiningFunctionData log_defining_function(const EinsteinModel& model, int order) {
    require_dimension(model.n);
    require_truncation(model.n, order);
    const int n = model.n;
    const WarpSeries ws(model.lambda, order);
    const LogSeries rhs = scale(mul(ws.inv_w, LogSeries::monomial(order, 2, ParamPoly(1))),
                                ParamPoly(-Rat(n) * model.lambda));
    const RadialOperator op = scalar_operator(model, ParamPoly(), order);

    DefiningFunctionData out;
    out.solution = solve_frobenius(op, rhs, ParamPoly());
    for (int k = 0; k < n; ++k) out.r.push_back(out.solution.series.a(k).constant_value());
    out.s = out.solution.log_obstruction.constant_value();
    out.q_h = out.s / q_curvature_constant(n);
    out.q01 = q01_factor(n) * out.q_h;
    if (Rat(n) * out.s != out.q01) throw ConsistencyError("n*s != Q_0 1");
    return out;
}

struct ScalarExtension {
    ParamPoly kappa;
    Rat coeff;
    FrobeniusSolution unit;  // boundary value 1
    ParamPoly l0;            // eigenvalue of L0 on the mode
    LogSeries series;        // coeff · unit.series

    [[nodiscard]] ParamPoly l0_phi() const { return l0 * coeff; }
};

/// Harmonic extension f̄ of coeff·φ_κ. κ may be the formal parameter.
inline ScalarExtension harmonic_extension_scalar(const EinsteinModel& model, const ParamPoly& kappa, const Rat& coeff,
                                                 int order) {
    require_truncation(model.n, order);
    ScalarExtension e;
    e.kappa = kappa;
    e.coeff = coeff;
    e.unit = solve_frobenius(scalar_operator(model, kappa, order), LogSeries(order), ParamPoly(1));
    if (e.unit.resonance_order != model.n) throw ConsistencyError("scalar resonance not at order n");
    e.l0 = e.unit.log_obstruction;
    e.series = scale(e.unit.series, ParamPoly(coeff));
    return e;
}

struct CoclosedExtension {
    ParamPoly mu;
    Rat coeff;
    FrobeniusSolution unit;
    ParamPoly l1;          // eigenvalue of L1 on the mode
    ParamPoly g1;          // always 0: the extension is purely tangential
    LogSeries tangential;  // coeff · unit.series
    LogSeries normal;      // identically 0
};

inline CoclosedExtension harmonic_extension_coclosed(const EinsteinModel& model, const ParamPoly& mu,
                                                     const Rat& coeff, int order,
                                                     DriftForm form = DriftForm::corrected) {
    require_truncation(model.n, order);
    CoclosedExtension e;
    e.mu = mu;
    e.coeff = coeff;
    e.unit = solve_frobenius(coclosed_operator(model, mu, order, form), LogSeries(order), ParamPoly(1));
    if (e.unit.resonance_order != model.n - 2) throw ConsistencyError("tangential resonance not at order n-2");
    e.l1 = e.unit.log_obstruction;
    e.g1 = ParamPoly();
    e.tangential = scale(e.unit.series, ParamPoly(coeff));
    e.normal = LogSeries(order);
    return e;
}

struct ExactChannel {
    ScalarExtension scalar;
    LogSeries tangential;  // f̄ against dφ
    LogSeries normal;      // x∂_x f̄ against φ dx/x
    ParamPoly l1;          // tangential x^{n-2} log x coefficient per unit coefficient (0)
    ParamPoly g1;          // normal x^n log x coefficient per unit coefficient (n·L0)
};

/// b̄ = d f̄ for β = coeff·dφ_κ, κ > 0.
inline ExactChannel exact_channel(const EinsteinModel& model, const ParamPoly& kappa, const Rat& coeff, int order) {
    if (kappa.is_zero()) throw std::invalid_argument("exact_channel: the constant mode has d(phi) = 0");
    ExactChannel e;
    e.scalar = harmonic_extension_scalar(model, kappa, coeff, order);
    const ChannelForm unit = hodge::d_function(e.scalar.unit.series, 0);
    e.tangential = scale(unit.tangential, ParamPoly(coeff));
    e.normal = scale(unit.normal, ParamPoly(coeff));
    e.l1 = unit.tangential.b(model.n - 2);
    e.g1 = unit.normal.b(model.n);
    return e;
}

/// Mode tables of the first log terms of b̃ = d(log ρ) + b̄ - d(log x).
struct ModeValue {
    std::string label;
    Channel channel = Channel::coclosed;
    std::size_t mode = 0;
    bool constant_mode = false;
    ParamPoly value;
};

struct SmoothnessVerdict {
    std::vector<ModeValue> l1_beta;  // coclosed (and harmonic) components: L1β
    std::vector<ModeValue> bottom;   // constant mode: n·s; exact components: G1β
    bool smooth = false;
};

inline std::string scalar_label(const EinsteinModel& m, std::size_t idx) {
    return "kappa=" + m.scalar_modes.at(idx).kappa.str();
}
inline std::string coclosed_label(const EinsteinModel& m, std::size_t idx) {
    return "mu=" + m.coclosed_modes.at(idx).mu.str();
}

inline void require_references(const EinsteinModel& model, const BoundaryWeyl& beta) {
    const auto problems = check_references(model, beta);
    if (!problems.empty()) throw std::invalid_argument("BoundaryWeyl: " + problems.front());
}

/// L1β = 0 and n·s + G1β = 0 decide smoothness of the bulk extension.
inline SmoothnessVerdict smoothness_obstruction(const EinsteinModel& model, const BoundaryWeyl& beta, int order) {
    require_references(model, beta);
    const int n = model.n;
    SmoothnessVerdict v;
    const DefiningFunctionData df = log_defining_function(model, order);
    v.bottom.push_back({"constant mode", Channel::exact, 0, true, ParamPoly(Rat(n) * df.s)});
    for (const auto& c : beta.exact_part) {
        const auto e = exact_channel(model, ParamPoly(model.scalar_modes[c.mode].kappa), Rat(1), order);
        v.bottom.push_back({scalar_label(model, c.mode), Channel::exact, c.mode, false, e.g1 * c.coeff});
        if (!e.l1.is_zero()) throw ConsistencyError("exact channel produced a tangential log term");
    }
    auto one_forms = [&](const std::vector<WeylComponent>& part) {
        for (const auto& c : part) {
            const auto e = harmonic_extension_coclosed(model, model.coclosed_modes[c.mode].mu, Rat(1), order);
            v.l1_beta.push_back({coclosed_label(model, c.mode), Channel::coclosed, c.mode, false, e.l1 * c.coeff});
        }
    };
    one_forms(beta.coclosed_part);
    one_forms(beta.harmonic_part);
    v.smooth = true;
    for (const auto& e : v.bottom) v.smooth = v.smooth && e.value.is_zero();
    for (const auto& e : v.l1_beta) v.smooth = v.smooth && e.value.is_zero();
    return v;
}

struct ChannelResidual {
    std::string label;
    Channel channel = Channel::coclosed;
    LogSeries feynman;  // d*_g b̄
    LogSeries proca;    // d*_g d b̄ = Δ_g b̄ - d d*_g b̄, tangential part
    LogSeries proca_normal;
};

struct GaugeResiduals {
    std::vector<ChannelResidual> channels;
    [[nodiscard]] bool all_zero() const {
        for (const auto& c : channels)
            if (!c.feynman.is_zero() || !c.proca.is_zero() || !c.proca_normal.is_zero()) return false;
        return true;
    }
};

/// Series-level Feynman gauge d*b̄ = 0 and Proca d*db̄ = 0 for every channel
/// extension of β. Any nonzero residual is a consistency failure.
inline GaugeResiduals gauge_residuals(const EinsteinModel& model, const BoundaryWeyl& beta, int order) {
    require_references(model, beta);
    const int n = model.n;
    const WarpSeries ws(model.lambda, order);
    GaugeResiduals out;
    for (const auto& c : beta.exact_part) {
        const ParamPoly kappa(model.scalar_modes[c.mode].kappa);
        const auto e = exact_channel(model, kappa, c.coeff, order);
        const ChannelForm b{e.tangential, e.normal};
        const LogSeries div = hodge::codifferential(ws, n, kappa, b, 0);
        const ChannelForm lap = hodge::laplacian_exact(ws, n, kappa, b, 0);
        const ChannelForm grad_div = hodge::d_function(div, 0);
        out.channels.push_back({scalar_label(model, c.mode), Channel::exact, div, lap.tangential - grad_div.tangential,
                                lap.normal - grad_div.normal});
    }
    auto one_forms = [&](const std::vector<WeylComponent>& part) {
        for (const auto& c : part) {
            const ParamPoly& mu = model.coclosed_modes[c.mode].mu;
            const auto e = harmonic_extension_coclosed(model, mu, c.coeff, order);
            const ChannelForm b{e.tangential, e.normal};
            out.channels.push_back({coclosed_label(model, c.mode), Channel::coclosed,
                                    hodge::divergence(ws, n, Channel::coclosed, mu, b, 0),
                                    hodge::laplacian_coclosed(ws, n, mu, e.tangential, 0), LogSeries(order)});
        }
    };
    one_forms(beta.coclosed_part);
    one_forms(beta.harmonic_part);
    if (!out.all_zero()) throw ConsistencyError("gauge residual is nonzero");
    return out;
}

/// One channel of b̃ = d(log ρ - log x) + b̄ with its two first log coefficients.
struct ExtensionChannel {
    std::string label;
    Channel channel = Channel::coclosed;
    bool constant_mode = false;
    LogSeries tangential;
    LogSeries normal;
    ParamPoly tangential_log;  // coefficient of x^{n-2} log x
    ParamPoly normal_log;      // coefficient of x^n log x against dx/x
};

struct ExpansionReport {
    int n = 4;
    int order = 6;
    DefiningFunctionData defining;
    std::vector<ScalarExtension> scalar;      // one per exact component of β
    std::vector<ExactChannel> exact;          // same indexing as `scalar`
    std::vector<CoclosedExtension> coclosed;  // coclosed then harmonic components
    std::vector<ExtensionChannel> weyl_extension;

    /// n·s = Q_0 1 and Q_h = s / c_n, exactly.
    [[nodiscard]] bool constants_consistent() const {
        return Rat(n) * defining.s == defining.q01 && defining.q_h == defining.s / q_curvature_constant(n) &&
               defining.q01 == q01_factor(n) * defining.q_h;
    }
};

inline ExpansionReport expansion_report(const EinsteinModel& model, const BoundaryWeyl& beta, int order) {
    require_references(model, beta);
    const int n = model.n;
    ExpansionReport rep;
    rep.n = n;
    rep.order = order;
    rep.defining = log_defining_function(model, order);

    const ChannelForm du = hodge::d_function(rep.defining.solution.series, 0);
    rep.weyl_extension.push_back({"constant mode", Channel::exact, true, LogSeries(order), du.normal, ParamPoly(),
                                  du.normal.b(n)});
    for (const auto& c : beta.exact_part) {
        const ParamPoly kappa(model.scalar_modes[c.mode].kappa);
        auto e = exact_channel(model, kappa, c.coeff, order);
        if (e.g1 != e.scalar.l0 * Rat(n)) throw ConsistencyError("G1 d != n L0 on " + scalar_label(model, c.mode));
        rep.weyl_extension.push_back({scalar_label(model, c.mode), Channel::exact, false, e.tangential, e.normal,
                                      e.tangential.b(n - 2), e.normal.b(n)});
        rep.scalar.push_back(e.scalar);
        rep.exact.push_back(std::move(e));
    }
    auto one_forms = [&](const std::vector<WeylComponent>& part) {
        for (const auto& c : part) {
            auto e = harmonic_extension_coclosed(model, model.coclosed_modes[c.mode].mu, c.coeff, order);
            rep.weyl_extension.push_back({coclosed_label(model, c.mode), Channel::coclosed, false, e.tangential,
                                          e.normal, e.tangential.b(n - 2), ParamPoly()});
            rep.coclosed.push_back(std::move(e));
        }
    };
    one_forms(beta.coclosed_part);
    one_forms(beta.harmonic_part);
    if (!rep.constants_consistent()) throw ConsistencyError("ExpansionReport constants are inconsistent");
    return rep;
}

}  // namespace weylq
