#pragma once

// Mode-reduced exterior calculus of g = x^{-2}(dx² + w²h) on the two Hodge
// channels of a boundary 1-form.
//
//   exact channel:    η = T(x)·dφ + N(x)·φ·dx/x,   Δ_h φ = κφ
//   coclosed channel: η = T(x)·α,                  d*_h α = 0, Δ_h α = μα
//
// Every series is stored in a frame x^s: the actual component is x^s times
// the stored series, so x∂_x acts on stored data as (x∂_x + s).

#include "weylq/radial.hpp"

namespace weylq {

enum class Channel { coclosed, exact };

inline std::string to_string(Channel c) { return c == Channel::exact ? "exact" : "coclosed"; }

struct ChannelForm {
    LogSeries tangential;
    LogSeries normal;
};

namespace hodge {

/// (x∂_x + s) on a series stored in frame x^s.
inline LogSeries xdx(const LogSeries& f, int shift) {
    return apply_xdx(f) + scale(f, ParamPoly(Rat(shift)));
}

/// d of f(x)·φ: tangential f, normal x∂_x f.
inline ChannelForm d_function(const LogSeries& f, int shift) { return {f, xdx(f, shift)}; }

/// d*_g on the exact channel: (x²/w²)κT + (-x∂_x + n·p/w)N, times φ.
inline LogSeries codifferential(const WarpSeries& ws, int n, const ParamPoly& kappa, const ChannelForm& f,
                                int shift) {
    return scale(mul(ws.x2_over_w2, f.tangential), kappa) - xdx(f.normal, shift) +
           scale(mul(ws.p_over_w, f.normal), ParamPoly(Rat(n)));
}

/// dη = G·(dx/x)∧dφ with G = x∂_x T - N.
inline LogSeries d_one_form(const ChannelForm& f, int shift) { return xdx(f.tangential, shift) - f.normal; }

/// d*_g of G·(dx/x)∧dφ: tangential -x∂_x G + (n-2)(p/w)G, normal -(x²/w²)κG.
inline ChannelForm codifferential_two_form(const WarpSeries& ws, int n, const ParamPoly& kappa, const LogSeries& g,
                                           int shift) {
    return {scale(mul(ws.p_over_w, g), ParamPoly(Rat(n - 2))) - xdx(g, shift),
            scale(mul(ws.x2_over_w2, g), -kappa)};
}

/// Hodge Laplacian dd* + d*d on the exact channel.
inline ChannelForm laplacian_exact(const WarpSeries& ws, int n, const ParamPoly& kappa, const ChannelForm& f,
                                   int shift) {
    const ChannelForm grad_div = d_function(codifferential(ws, n, kappa, f, shift), shift);
    const ChannelForm div_curl = codifferential_two_form(ws, n, kappa, d_one_form(f, shift), shift);
    return {grad_div.tangential + div_curl.tangential, grad_div.normal + div_curl.normal};
}

/// Hodge Laplacian on ψ(x)α, α coclosed: the tangential operator
/// -(x∂_x)² + (n-2)(p/w)x∂_x + (x²/w²)μ. The normal part stays zero.
inline LogSeries laplacian_coclosed(const WarpSeries& ws, int n, const ParamPoly& mu, const LogSeries& t, int shift,
                                    DriftForm form = DriftForm::corrected) {
    const LogSeries dt = xdx(t, shift);
    const LogSeries& ratio = form == DriftForm::corrected ? ws.p_over_w : ws.w_over_p;
    return -xdx(dt, shift) + scale(mul(ratio, dt), ParamPoly(Rat(n - 2))) + scale(mul(ws.x2_over_w2, t), mu);
}

inline ChannelForm laplacian(const WarpSeries& ws, int n, Channel channel, const ParamPoly& eigen,
                             const ChannelForm& f, int shift) {
    if (channel == Channel::exact) return laplacian_exact(ws, n, eigen, f, shift);
    if (!f.normal.is_zero()) throw ConsistencyError("coclosed-channel form with a normal component");
    return {laplacian_coclosed(ws, n, eigen, f.tangential, shift), f.normal};
}

/// d*_g on either channel (identically zero on the coclosed channel).
inline LogSeries divergence(const WarpSeries& ws, int n, Channel channel, const ParamPoly& eigen,
                            const ChannelForm& f, int shift) {
    if (channel == Channel::coclosed) {
        if (!f.normal.is_zero()) throw ConsistencyError("coclosed-channel form with a normal component");
        return LogSeries(std::min(f.tangential.order(), f.normal.order()));
    }
    return codifferential(ws, n, eigen, f, shift);
}

/// Solves the exact-channel divergence d*η = O(x^{upto}) (upto taken in
/// absolute powers of x) for the normal series, given the tangential one:
/// at stored order k the normal coefficient enters with factor (n - k - s).
/// Coefficients of `normal_tail` at stored orders >= upto - s are kept.
inline LogSeries solve_normal_for_divergence(const WarpSeries& ws, int n, const ParamPoly& kappa,
                                             const LogSeries& tangential, const LogSeries& normal_tail, int shift,
                                             int upto) {
    const int order = std::min(tangential.order(), normal_tail.order());
    const LogSeries coupling = scale(mul(ws.x2_over_w2, tangential), kappa);
    LogSeries normal = normal_tail.truncated(order);
    const int stop = std::min(upto - shift, order + 1);
    for (int k = 0; k < stop; ++k) {
        const Rat factor(n - k - shift);
        if (factor.is_zero()) throw ConsistencyError("solve_normal_for_divergence: resonant order below the bound");
        ParamPoly acc = coupling.a(k);
        for (int j = 1; j <= k; ++j)
            if (!ws.p_over_w.a(j).is_zero() && !normal.a(k - j).is_zero())
                acc += ws.p_over_w.a(j) * normal.a(k - j) * Rat(n);
        normal.set_a(k, -acc / factor);
    }
    return normal;
}

}  // namespace hodge
}  // namespace weylq
