#pragma once

// Mode-reduced radial operators of the Einstein-model Poincaré metric
//   g = x^{-2}(dx² + w(x)² h),   w(x) = 1 - λx²/2,
// written as  c2·(x∂_x)² + c1·(x∂_x) + c0  with series coefficients,
// and the Frobenius solver for them.

#include "weylq/errors.hpp"
#include "weylq/log_series.hpp"
#include "weylq/spectral_model.hpp"

#include <string>
#include <utility>

namespace weylq {

/// Series of the warp factor and the combinations the operators need,
/// truncated at a common order.
struct WarpSeries {
    int order;
    LogSeries w;             // 1 - λx²/2
    LogSeries p;             // 1 + λx²/2
    LogSeries inv_w;         // 1/w
    LogSeries p_over_w;      // drift ratio
    LogSeries w_over_p;      // the as-printed x-form drift ratio
    LogSeries x2_over_w2;    // x²/w² = y²
    LogSeries x2p_over_w3;   // x² p / w³ = D(x²/w²)/2

    WarpSeries(const Rat& lambda, int order_)
        : order(order_),
          w(LogSeries::polynomial(order_, {Rat(1), Rat(0), -lambda / Rat(2)})),
          p(LogSeries::polynomial(order_, {Rat(1), Rat(0), lambda / Rat(2)})),
          inv_w(reciprocal(w)),
          p_over_w(mul(p, inv_w)),
          w_over_p(mul(w, reciprocal(p))),
          x2_over_w2(mul(inv_w, inv_w).shifted_up(2)),
          x2p_over_w3(mul(mul(x2_over_w2, p), inv_w)) {}
};

struct RadialOperator {
    LogSeries coeff_xdx2;
    LogSeries coeff_xdx;
    LogSeries potential;
    std::pair<int, int> indicial_roots{0, 0};

    [[nodiscard]] int order() const {
        return std::min({coeff_xdx2.order(), coeff_xdx.order(), potential.order()});
    }
    [[nodiscard]] bool is_even() const { return coeff_xdx2.is_even() && coeff_xdx.is_even() && potential.is_even(); }

    [[nodiscard]] LogSeries apply(const LogSeries& u) const {
        const LogSeries du = apply_xdx(u);
        return mul(coeff_xdx2, apply_xdx(du)) + mul(coeff_xdx, du) + mul(potential, u);
    }
};

/// Δ_g on f(x)·φ with Δ_h φ = κφ:
///   -(x∂_x)² + n·(p/w)·x∂_x + (x²/w²)·κ,  roots (0, n).
inline RadialOperator scalar_operator(const EinsteinModel& model, const ParamPoly& kappa, int order) {
    require_dimension(model.n);
    const WarpSeries ws(model.lambda, order);
    return RadialOperator{LogSeries::constant(order, ParamPoly(-1)),
                          scale(ws.p_over_w, ParamPoly(Rat(model.n))),
                          scale(ws.x2_over_w2, kappa),
                          {0, model.n}};
}

/// Which x-coordinate drift to use for the tangential 1-form operator. The
/// x-form display in the source derivation carries (1 - λx²/2)/(1 + λx²/2);
/// pushing its own y-form through y = x/w gives the reciprocal. Only the
/// latter agrees with the ladder and product routes.
enum class DriftForm { corrected, as_printed };

/// Δ_g on ψ(x)·α with α coclosed and Δ_h α = μα:
///   -(x∂_x)² + (n-2)·(p/w)·x∂_x + (x²/w²)·μ,  roots (0, n-2).
inline RadialOperator coclosed_operator(const EinsteinModel& model, const ParamPoly& mu, int order,
                                        DriftForm form = DriftForm::corrected) {
    require_dimension(model.n);
    const WarpSeries ws(model.lambda, order);
    const LogSeries& ratio = form == DriftForm::corrected ? ws.p_over_w : ws.w_over_p;
    return RadialOperator{LogSeries::constant(order, ParamPoly(-1)),
                          scale(ratio, ParamPoly(Rat(model.n - 2))),
                          scale(ws.x2_over_w2, mu),
                          {0, model.n - 2}};
}

/// The same tangential operator assembled from its y-form
///   -(y∂_y)² + (n-2)y∂_y - 2λy²(y∂_y)² + 2(n-3)λy²·y∂_y + y²μ,   y = x/w,
/// using y∂_y = c·x∂_x with c = w/p, hence (y∂_y)² = c²(x∂_x)² + c(x∂_x c)(x∂_x).
inline RadialOperator coclosed_operator_from_yform(const EinsteinModel& model, const ParamPoly& mu, int order) {
    require_dimension(model.n);
    const WarpSeries ws(model.lambda, order);
    const int n = model.n;
    const LogSeries& c = ws.w_over_p;
    const LogSeries& y2 = ws.x2_over_w2;
    const LogSeries one = LogSeries::constant(order, ParamPoly(1));
    const LogSeries lead = one + scale(y2, ParamPoly(Rat(2) * model.lambda));  // 1 + 2λy²
    const LogSeries dc = apply_xdx(c);

    LogSeries c2 = -mul(lead, mul(c, c));
    LogSeries c1 = -mul(lead, mul(c, dc)) + scale(c, ParamPoly(Rat(n - 2))) +
                   scale(mul(y2, c), ParamPoly(Rat(2 * (n - 3)) * model.lambda));
    return RadialOperator{std::move(c2), std::move(c1), scale(y2, mu), {0, n - 2}};
}

struct FrobeniusSolution {
    LogSeries series;
    int resonance_order = 0;
    ParamPoly log_obstruction;
    ParamPoly boundary_value_used;
    LogSeries source_used;
};

/// Solves op(u) = source order by order from the root 0 with u(0) = boundary.
/// At the second indicial root r the x^r log x coefficient absorbs the
/// obstruction and the plain x^r coefficient is set to 0. The residual
/// op(u) - source is checked to vanish through the truncation order.
inline FrobeniusSolution solve_frobenius(const RadialOperator& op, const LogSeries& source, const ParamPoly& boundary) {
    const int order = std::min(op.order(), source.order());
    auto lead = [](const LogSeries& s, const char* what) {
        if (!s.a(0).is_constant() || !s.b(0).is_zero())
            throw SeriesError(std::string("solve_frobenius: non-constant leading coefficient of ") + what);
        return s.a(0).is_zero() ? Rat(0) : s.a(0).constant_value();
    };
    const Rat q2 = lead(op.coeff_xdx2, "(x d/dx)^2");
    const Rat q1 = lead(op.coeff_xdx, "x d/dx");
    const Rat q0 = lead(op.potential, "potential");
    if (q2.is_zero()) throw SeriesError("solve_frobenius: degenerate operator");
    if (!q0.is_zero()) throw SeriesError("solve_frobenius: 0 is not an indicial root");
    if (op.coeff_xdx2.has_log() || op.coeff_xdx.has_log() || op.potential.has_log())
        throw SeriesError("solve_frobenius: operator coefficients must be log-free");
    const Rat root = -q1 / q2;
    if (!root.is_integer() || root.sign() <= 0)
        throw SeriesError("solve_frobenius: second indicial root must be a positive integer");
    const int r = static_cast<int>(root.num().get_si());
    if (r != op.indicial_roots.second) throw ConsistencyError("solve_frobenius: indicial roots disagree with operator data");

    if (op.is_even() && !source.odd_part_vanishes())
        throw SeriesError("solve_frobenius: source violates parity of the even operator");
    for (int k = 0; k <= std::min(r, order); ++k)
        if (!source.b(k).is_zero()) throw SeriesError("solve_frobenius: source carries log terms at or below resonance");
    if (!source.a(0).is_zero()) throw SeriesError("solve_frobenius: source must vanish at x = 0");

    // P_m(j) and P'_m(j): contributions of x^j (resp. x^j log x) to x^{j+m}.
    auto P = [&](int m, int j) {
        return op.coeff_xdx2.a(m) * Rat(j * j) + op.coeff_xdx.a(m) * Rat(j) + op.potential.a(m);
    };
    auto dP = [&](int m, int j) { return op.coeff_xdx2.a(m) * Rat(2 * j) + op.coeff_xdx.a(m); };

    const Parity parity = (op.is_even() && source.is_even()) ? Parity::even_only : Parity::unrestricted;
    LogSeries u(order, parity);
    u.set_a(0, boundary);
    for (int k = 1; k <= order; ++k) {
        ParamPoly log_rhs = source.b(k);
        ParamPoly rhs = source.a(k);
        for (int j = 0; j < k; ++j) {
            if (!u.b(j).is_zero()) {
                log_rhs -= P(k - j, j) * u.b(j);
                rhs -= dP(k - j, j) * u.b(j);
            }
            if (!u.a(j).is_zero()) rhs -= P(k - j, j) * u.a(j);
        }
        const Rat indicial = q2 * Rat(k * k) + q1 * Rat(k);
        if (k == r) {
            if (!log_rhs.is_zero()) throw SeriesError("solve_frobenius: log^2 would be required at resonance");
            const Rat slope = q2 * Rat(2 * k) + q1;
            u.set_b(k, rhs / slope);
        } else {
            const ParamPoly bk = log_rhs / indicial;
            u.set_b(k, bk);
            const Rat slope = q2 * Rat(2 * k) + q1;
            u.set_a(k, (rhs - bk * slope) / indicial);
        }
    }

    const LogSeries residual = op.apply(u) - source;
    if (!residual.is_zero()) throw ConsistencyError("solve_frobenius: nonzero residual " + residual.str());

    FrobeniusSolution sol;
    sol.resonance_order = r;
    sol.log_obstruction = r <= order ? u.b(r) : ParamPoly();
    sol.boundary_value_used = boundary;
    sol.source_used = source.truncated(order);
    sol.series = std::move(u);
    return sol;
}

}  // namespace weylq
