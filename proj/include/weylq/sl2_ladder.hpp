#pragma once

// Weighted 1-form spaces 𝒜[w] / 𝒜_df[w] on a single Hodge channel and the
// sl₂-triple
//   E η = -η/4            (w -> w+2)
//   F η = (Δ_g + w(w+n-2))η (w -> w-2)
//   H η = (w + n/2)η
// together with the GJMS-style construction of L1 by iterating F, and the
// closed-form Einstein eigenvalue of L1.
//
// The same operators have an ambient-metric realization (s^w-homogeneous
// 1-forms, F as the ambient Hodge Laplacian); it is not modelled here.

#include "weylq/dirichlet.hpp"
#include "weylq/hodge.hpp"

#include <optional>

namespace weylq {

/// Power of x divided out of the stored series at weight w. For w >= -n the
/// form is x^{-w}β_x + x^{-w+2}φ_x dx/x; all w <= -n share the space
/// x^{n-2}β_x + x^nφ_x dx/x with β_0 = 0, stored in the x^n frame.
inline int frame_power(int weight, int n) { return weight >= -n ? -weight : n; }

struct WeightedForm {
    int weight = 0;
    Channel channel = Channel::coclosed;
    ParamPoly eigen;       // μ (coclosed) or κ (exact)
    LogSeries tangential;  // actual tangential part = x^{frame} · tangential
    LogSeries normal;      // actual normal part against dx/x = x^{frame} · normal

    [[nodiscard]] int frame(int n) const { return frame_power(weight, n); }
    [[nodiscard]] int order() const { return std::min(tangential.order(), normal.order()); }

    /// (x^w η)|_{TM}; zero for w <= -n.
    [[nodiscard]] ParamPoly restriction(int n) const {
        return weight >= -n + 2 ? tangential.a(0) : ParamPoly();
    }

    /// Membership in 𝒜[w]: even series, and for w >= -n+2 a normal part of
    /// order x^{-w+2}; the coclosed channel has no normal part at all.
    [[nodiscard]] bool in_A(int n) const {
        if (weight % 2 != 0 || !tangential.odd_part_vanishes() || !normal.odd_part_vanishes()) return false;
        if (tangential.has_log() || normal.has_log()) return false;
        if (channel == Channel::coclosed && !normal.is_zero()) return false;
        if (weight >= -n + 2 && !normal.a(0).is_zero()) return false;
        return true;
    }

    [[nodiscard]] bool same_as(const WeightedForm& o) const {
        return weight == o.weight && channel == o.channel && eigen == o.eigen && tangential.agrees_with(o.tangential) &&
               normal.agrees_with(o.normal);
    }
};

/// d*_g η in the frame of η, and whether it is O(x^n).
struct DivergenceCertificate {
    LogSeries residual;  // x^{-frame} d*_g η
    int order_bound = 0; // membership iff residual vanishes below this stored order
    bool member = false;
};

inline DivergenceCertificate certify(const EinsteinModel& model, const WeightedForm& f) {
    const int n = model.n;
    const int s = f.frame(n);
    const WarpSeries ws(model.lambda, f.order());
    DivergenceCertificate c;
    c.residual = hodge::divergence(ws, n, f.channel, f.eigen, {f.tangential, f.normal}, s);
    c.order_bound = n - s;
    c.member = f.in_A(n);
    for (int k = 0; k < std::min(c.order_bound, c.residual.order() + 1); ++k)
        c.member = c.member && c.residual.a(k).is_zero() && c.residual.b(k).is_zero();
    return c;
}

namespace detail {
inline LogSeries reframe(const LogSeries& s, int from, int to) {
    if (from == to) return s;
    if (from > to) return s.shifted_up(from - to);
    return s.shifted_down(to - from);
}
}  // namespace detail

inline WeightedForm op_E(const WeightedForm& f, int n) {
    WeightedForm out = f;
    out.weight = f.weight + 2;
    const int from = f.frame(n);
    const int to = out.frame(n);
    const ParamPoly quarter(Rat(-1, 4));
    out.tangential = scale(detail::reframe(f.tangential, from, to), quarter);
    out.normal = scale(detail::reframe(f.normal, from, to), quarter);
    return out;
}

inline WeightedForm op_H(const WeightedForm& f, int n) {
    WeightedForm out = f;
    const ParamPoly c(Rat(f.weight) + Rat(n / 2));
    out.tangential = scale(f.tangential, c);
    out.normal = scale(f.normal, c);
    return out;
}

/// F = Δ_g + w(w+n-2). Moving from the x^{-w} to the x^{-w+2} frame divides
/// by x²; the vanishing of the x^0 terms (the indicial identity) is checked.
inline WeightedForm op_F(const EinsteinModel& model, const WeightedForm& f) {
    const int n = model.n;
    const int s = f.frame(n);
    const WarpSeries ws(model.lambda, f.order());
    ChannelForm lap = hodge::laplacian(ws, n, f.channel, f.eigen, {f.tangential, f.normal}, s);
    const ParamPoly shift(Rat(f.weight * (f.weight + n - 2)));
    lap.tangential = lap.tangential + scale(f.tangential, shift);
    lap.normal = lap.normal + scale(f.normal, shift);

    WeightedForm out = f;
    out.weight = f.weight - 2;
    const int to = out.frame(n);
    try {
        out.tangential = detail::reframe(lap.tangential, s, to);
        out.normal = detail::reframe(lap.normal, s, to);
    } catch (const SeriesError& e) {
        throw ConsistencyError(std::string("op_F: leading cancellation failed: ") + e.what());
    }
    return out;
}

/// Extension of a single component of β to 𝒜_df[0]. Coclosed/harmonic: the
/// constant pullback. Exact: d f̄ with f̄ cut below its x^n log term and
/// the normal part solved from d*η = O(x^n).
inline WeightedForm extend_to_Adf(const EinsteinModel& model, Channel channel, const ParamPoly& eigen,
                                  const Rat& coeff, int order) {
    WeightedForm f;
    f.weight = 0;
    f.channel = channel;
    f.eigen = eigen;
    if (channel == Channel::coclosed) {
        f.tangential = LogSeries::constant(order, ParamPoly(coeff));
        f.normal = LogSeries(order);
        return f;
    }
    const int n = model.n;
    const ScalarExtension ext = harmonic_extension_scalar(model, eigen, coeff, order);
    f.tangential = ext.series.cut_below(n);
    const WarpSeries ws(model.lambda, order);
    f.normal = hodge::solve_normal_for_divergence(ws, n, eigen, f.tangential, LogSeries(order), 0, n);
    return f;
}

/// A structurally different 𝒜_df[0] extension: the Frobenius solution cut
/// below the log order, plus E of a certified 𝒜_df[-2] element.
inline WeightedForm alternate_extension(const EinsteinModel& model, Channel channel, const ParamPoly& eigen,
                                        const Rat& coeff, int order) {
    const int n = model.n;
    const WarpSeries ws(model.lambda, order);
    WeightedForm base;
    if (channel == Channel::coclosed) {
        const CoclosedExtension ext = harmonic_extension_coclosed(model, eigen, coeff, order);
        base = WeightedForm{0, channel, eigen, ext.tangential.cut_below(n - 2), LogSeries(order)};
    } else {
        base = extend_to_Adf(model, channel, eigen, coeff, order);
    }
    // ζ ∈ 𝒜_df[-2]: tangential 1 + x², normal solved from the divergence.
    WeightedForm zeta{-2, channel, eigen, LogSeries::polynomial(order, {Rat(1), Rat(0), Rat(1)}), LogSeries(order)};
    if (channel == Channel::exact)
        zeta.normal = hodge::solve_normal_for_divergence(ws, n, eigen, zeta.tangential, LogSeries(order),
                                                         zeta.frame(n), n);
    const WeightedForm ez = op_E(zeta, n);
    base.tangential = base.tangential + ez.tangential;
    base.normal = base.normal + ez.normal;
    return base;
}

/// (-1)^{n/2} 2^{n-3} (n/2-1)! (n/2-2)!: restriction of F^{n/2-1}η per unit L1β.
inline Rat ladder_constant(int n) {
    const int h = n / 2;
    const Rat sign = h % 2 == 0 ? Rat(1) : Rat(-1);
    return sign * pow(Rat(2), n - 3) * factorial(h - 1) * factorial(h - 2);
}

/// Restriction of F^{n/2-1}η divided by the ladder constant.
inline ParamPoly ladder_from_extension(const EinsteinModel& model, WeightedForm eta) {
    const int n = model.n;
    if (!certify(model, eta).member) throw ConsistencyError("ladder: extension is not in A_df[0]");
    for (int k = 0; k < n / 2 - 1; ++k) eta = op_F(model, eta);
    return eta.restriction(n) / ladder_constant(n);
}

/// L1 eigenvalue on one channel by the ladder route; two extensions are
/// compared and must give the same value.
inline ParamPoly ladder_eigenvalue(const EinsteinModel& model, Channel channel, const ParamPoly& eigen, int order) {
    require_truncation(model.n, order);
    const ParamPoly first = ladder_from_extension(model, extend_to_Adf(model, channel, eigen, Rat(1), order));
    const ParamPoly second = ladder_from_extension(model, alternate_extension(model, channel, eigen, Rat(1), order));
    if (first != second)
        throw ConsistencyError("ladder L1 depends on the extension: " + first.str() + " vs " + second.str());
    return first;
}

struct LadderEntry {
    std::string label;
    Channel channel = Channel::coclosed;
    std::size_t mode = 0;
    ParamPoly eigenvalue;  // L1 on the unit mode
    ParamPoly value;       // coefficient of L1β on the mode
};

/// L1β per component of β by the ladder route.
inline std::vector<LadderEntry> ladder_L1(const EinsteinModel& model, const BoundaryWeyl& beta, int order) {
    require_references(model, beta);
    std::vector<LadderEntry> out;
    for (const auto& c : beta.exact_part) {
        const ParamPoly kappa(model.scalar_modes[c.mode].kappa);
        const ParamPoly ev = ladder_eigenvalue(model, Channel::exact, kappa, order);
        out.push_back({scalar_label(model, c.mode), Channel::exact, c.mode, ev, ev * c.coeff});
    }
    auto one_forms = [&](const std::vector<WeylComponent>& part) {
        for (const auto& c : part) {
            const ParamPoly& mu = model.coclosed_modes[c.mode].mu;
            const ParamPoly ev = ladder_eigenvalue(model, Channel::coclosed, mu, order);
            out.push_back({coclosed_label(model, c.mode), Channel::coclosed, c.mode, ev, ev * c.coeff});
        }
    };
    one_forms(beta.coclosed_part);
    one_forms(beta.harmonic_part);
    return out;
}

/// Einstein closed form on a coclosed μ-eigenform:
///   (-1)^{n/2} / (2^{n-3}(n/2-1)!(n/2-2)!) · μ · Π_{m=1}^{n/2-2} (μ - 2m(m-n+3)λ).
inline ParamPoly product_formula_L1(int n, const Rat& lambda, const ParamPoly& mu) {
    require_dimension(n);
    ParamPoly acc = mu;
    for (int m = 1; m <= n / 2 - 2; ++m) acc *= mu - ParamPoly(Rat(2 * m * (m - n + 3)) * lambda);
    return acc / ladder_constant(n);
}

inline ParamPoly product_formula_L1(const EinsteinModel& model, const ParamPoly& mu) {
    return product_formula_L1(model.n, model.lambda, mu);
}

/// Factors μ - 2λj(j-n+3) met by the iterated F at even exponents j = 0, 2, ..., n-4.
inline std::vector<ParamPoly> ladder_factors(int n, const Rat& lambda, const ParamPoly& mu) {
    std::vector<ParamPoly> out;
    for (int j = 0; j <= n - 4; j += 2) out.push_back(mu - ParamPoly(Rat(2 * j * (j - n + 3)) * lambda));
    return out;
}

}  // namespace weylq
