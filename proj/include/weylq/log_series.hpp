#pragma once

// Truncated series  Σ_k a_k x^k + Σ_k b_k x^k log x,  k = 0..N,
// with ParamPoly coefficients. The log degree is capped at one: a product of
// two log-bearing series is rejected rather than silently dropping log².

#include "weylq/errors.hpp"
#include "weylq/param_poly.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

namespace weylq {

enum class Parity { even_only, unrestricted };

class LogSeries {
public:
    LogSeries() : LogSeries(0) {}
    explicit LogSeries(int order, Parity parity = Parity::even_only)
        : order_(checked_order(order)),
          parity_(parity),
          a_(static_cast<std::size_t>(order) + 1),
          b_(static_cast<std::size_t>(order) + 1) {}

    LogSeries(int order, std::vector<ParamPoly> a, std::vector<ParamPoly> b, Parity parity)
        : order_(checked_order(order)), parity_(parity), a_(std::move(a)), b_(std::move(b)) {
        a_.resize(static_cast<std::size_t>(order_) + 1);
        b_.resize(static_cast<std::size_t>(order_) + 1);
        if (parity_ == Parity::even_only && !odd_part_vanishes())
            throw SeriesError("LogSeries: even-only series has a nonzero odd coefficient");
    }

    static LogSeries constant(int order, const ParamPoly& c) {
        LogSeries s(order);
        s.a_[0] = c;
        return s;
    }
    /// c·x^k, or c·x^k log x when `log` is set.
    static LogSeries monomial(int order, int k, const ParamPoly& c, bool log = false) {
        LogSeries s(order, k % 2 == 0 ? Parity::even_only : Parity::unrestricted);
        if (k >= 0 && k <= order) (log ? s.b_ : s.a_)[static_cast<std::size_t>(k)] = c;
        return s;
    }
    /// Plain polynomial Σ coeffs[k] x^k (truncated at `order`).
    static LogSeries polynomial(int order, const std::vector<Rat>& coeffs) {
        LogSeries s(order, Parity::unrestricted);
        for (std::size_t k = 0; k < coeffs.size() && static_cast<int>(k) <= order; ++k) s.a_[k] = coeffs[k];
        s.parity_ = s.odd_part_vanishes() ? Parity::even_only : Parity::unrestricted;
        return s;
    }

    [[nodiscard]] int order() const { return order_; }
    [[nodiscard]] Parity parity() const { return parity_; }
    [[nodiscard]] bool is_even() const { return parity_ == Parity::even_only; }

    [[nodiscard]] const ParamPoly& a(int k) const { return a_.at(static_cast<std::size_t>(k)); }
    [[nodiscard]] const ParamPoly& b(int k) const { return b_.at(static_cast<std::size_t>(k)); }
    [[nodiscard]] const std::vector<ParamPoly>& plain() const { return a_; }
    [[nodiscard]] const std::vector<ParamPoly>& logs() const { return b_; }

    /// Coefficient setters keep the parity flag honest: writing a nonzero odd
    /// coefficient demotes the series to unrestricted.
    void set_a(int k, ParamPoly c) { set(a_, k, std::move(c)); }
    void set_b(int k, ParamPoly c) { set(b_, k, std::move(c)); }

    [[nodiscard]] bool has_log() const {
        return std::any_of(b_.begin(), b_.end(), [](const ParamPoly& p) { return !p.is_zero(); });
    }
    [[nodiscard]] bool is_zero() const {
        return !has_log() && std::all_of(a_.begin(), a_.end(), [](const ParamPoly& p) { return p.is_zero(); });
    }
    [[nodiscard]] bool odd_part_vanishes() const {
        for (int k = 1; k <= order_; k += 2) {
            const auto i = static_cast<std::size_t>(k);
            if (!a_[i].is_zero() || !b_[i].is_zero()) return false;
        }
        return true;
    }
    /// The documented invariant: even_only implies vanishing odd coefficients.
    [[nodiscard]] bool parity_invariant_holds() const { return parity_ == Parity::unrestricted || odd_part_vanishes(); }

    /// Lowest k with a nonzero log coefficient, or -1.
    [[nodiscard]] int first_log_order() const {
        for (int k = 0; k <= order_; ++k)
            if (!b_[static_cast<std::size_t>(k)].is_zero()) return k;
        return -1;
    }
    /// Lowest k with any nonzero coefficient, or -1.
    [[nodiscard]] int valuation() const {
        for (int k = 0; k <= order_; ++k) {
            const auto i = static_cast<std::size_t>(k);
            if (!a_[i].is_zero() || !b_[i].is_zero()) return k;
        }
        return -1;
    }

    [[nodiscard]] LogSeries truncated(int order) const {
        const int m = std::min(order, order_);
        LogSeries s(m, parity_);
        for (int k = 0; k <= m; ++k) {
            const auto i = static_cast<std::size_t>(k);
            s.a_[i] = a_[i];
            s.b_[i] = b_[i];
        }
        return s;
    }
    /// Drops every term of degree >= k, keeping the truncation order.
    [[nodiscard]] LogSeries cut_below(int k) const {
        LogSeries s = *this;
        for (int j = std::max(k, 0); j <= order_; ++j) {
            const auto i = static_cast<std::size_t>(j);
            s.a_[i] = ParamPoly();
            s.b_[i] = ParamPoly();
        }
        return s;
    }
    [[nodiscard]] LogSeries log_free_part() const {
        LogSeries s = *this;
        std::fill(s.b_.begin(), s.b_.end(), ParamPoly());
        return s;
    }

    /// x^k · s, same truncation order.
    [[nodiscard]] LogSeries shifted_up(int k) const {
        if (k < 0) throw SeriesError("LogSeries::shifted_up: negative shift");
        LogSeries s(order_, k % 2 == 0 ? parity_ : Parity::unrestricted);
        for (int j = order_ - k; j >= 0; --j) {
            const auto i = static_cast<std::size_t>(j);
            s.a_[i + static_cast<std::size_t>(k)] = a_[i];
            s.b_[i + static_cast<std::size_t>(k)] = b_[i];
        }
        if (!s.is_even() && s.odd_part_vanishes()) s.parity_ = Parity::even_only;
        return s;
    }
    /// x^{-k} · s. Requires the k lowest coefficients to vanish; the result is
    /// known only to order N - k.
    [[nodiscard]] LogSeries shifted_down(int k) const {
        if (k < 0) throw SeriesError("LogSeries::shifted_down: negative shift");
        if (k > order_) throw SeriesError("LogSeries::shifted_down: shift exceeds truncation order");
        for (int j = 0; j < k; ++j) {
            const auto i = static_cast<std::size_t>(j);
            if (!a_[i].is_zero() || !b_[i].is_zero())
                throw SeriesError("LogSeries::shifted_down: nonzero coefficient at x^" + std::to_string(j));
        }
        LogSeries s(order_ - k, k % 2 == 0 ? parity_ : Parity::unrestricted);
        for (int j = 0; j <= order_ - k; ++j) {
            const auto i = static_cast<std::size_t>(j);
            s.a_[i] = a_[i + static_cast<std::size_t>(k)];
            s.b_[i] = b_[i + static_cast<std::size_t>(k)];
        }
        if (!s.is_even() && s.odd_part_vanishes()) s.parity_ = Parity::even_only;
        return s;
    }

    friend bool operator==(const LogSeries& x, const LogSeries& y) {
        return x.order_ == y.order_ && x.a_ == y.a_ && x.b_ == y.b_;
    }
    /// Equality of the coefficient arrays up to the smaller truncation order.
    [[nodiscard]] bool agrees_with(const LogSeries& o) const {
        const int m = std::min(order_, o.order_);
        return truncated(m).a_ == o.truncated(m).a_ && truncated(m).b_ == o.truncated(m).b_;
    }

    [[nodiscard]] std::string str(const std::string& var = "mu") const;

private:
    friend LogSeries add(const LogSeries&, const LogSeries&);
    friend LogSeries sub(const LogSeries&, const LogSeries&);
    friend LogSeries mul(const LogSeries&, const LogSeries&);
    friend LogSeries scale(const LogSeries&, const ParamPoly&);
    friend LogSeries apply_xdx(const LogSeries&);

    static int checked_order(int order) {
        if (order < 0) throw SeriesError("LogSeries: negative truncation order");
        return order;
    }
    void set(std::vector<ParamPoly>& v, int k, ParamPoly c) {
        if (k < 0 || k > order_) throw SeriesError("LogSeries: coefficient index out of range");
        if (k % 2 == 1 && !c.is_zero()) parity_ = Parity::unrestricted;
        v[static_cast<std::size_t>(k)] = std::move(c);
    }

    int order_;
    Parity parity_;
    std::vector<ParamPoly> a_;
    std::vector<ParamPoly> b_;
};

inline Parity combine(Parity p, Parity q) {
    return (p == Parity::even_only && q == Parity::even_only) ? Parity::even_only : Parity::unrestricted;
}

inline LogSeries add(const LogSeries& s1, const LogSeries& s2) {
    const int m = std::min(s1.order_, s2.order_);
    LogSeries out(m, combine(s1.parity_, s2.parity_));
    for (int k = 0; k <= m; ++k) {
        const auto i = static_cast<std::size_t>(k);
        out.a_[i] = s1.a_[i] + s2.a_[i];
        out.b_[i] = s1.b_[i] + s2.b_[i];
    }
    return out;
}

inline LogSeries sub(const LogSeries& s1, const LogSeries& s2) {
    const int m = std::min(s1.order_, s2.order_);
    LogSeries out(m, combine(s1.parity_, s2.parity_));
    for (int k = 0; k <= m; ++k) {
        const auto i = static_cast<std::size_t>(k);
        out.a_[i] = s1.a_[i] - s2.a_[i];
        out.b_[i] = s1.b_[i] - s2.b_[i];
    }
    return out;
}

inline LogSeries scale(const LogSeries& s, const ParamPoly& c) {
    LogSeries out = s;
    for (auto& x : out.a_) x *= c;
    for (auto& x : out.b_) x *= c;
    return out;
}

/// Cauchy product truncated at the smaller order. log(x) terms combine as
/// a⊗b + b⊗a; both factors carrying logs would need log², which is rejected.
inline LogSeries mul(const LogSeries& s1, const LogSeries& s2) {
    if (s1.has_log() && s2.has_log())
        throw SeriesError("mul: both factors carry log terms (log^2 is outside the carrier)");
    const int m = std::min(s1.order_, s2.order_);
    LogSeries out(m, combine(s1.parity_, s2.parity_));
    for (int i = 0; i <= m; ++i) {
        const auto& ai = s1.a_[static_cast<std::size_t>(i)];
        const auto& bi = s1.b_[static_cast<std::size_t>(i)];
        if (ai.is_zero() && bi.is_zero()) continue;
        for (int j = 0; i + j <= m; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            const auto k = static_cast<std::size_t>(i + j);
            if (!ai.is_zero()) {
                if (!s2.a_[jj].is_zero()) out.a_[k] += ai * s2.a_[jj];
                if (!s2.b_[jj].is_zero()) out.b_[k] += ai * s2.b_[jj];
            }
            if (!bi.is_zero() && !s2.a_[jj].is_zero()) out.b_[k] += bi * s2.a_[jj];
        }
    }
    return out;
}

/// Euler operator x∂_x:  x^k ↦ k x^k,  x^k log x ↦ k x^k log x + x^k.
inline LogSeries apply_xdx(const LogSeries& s) {
    LogSeries out(s.order_, s.parity_);
    for (int k = 0; k <= s.order_; ++k) {
        const auto i = static_cast<std::size_t>(k);
        out.a_[i] = s.a_[i] * Rat(k) + s.b_[i];
        out.b_[i] = s.b_[i] * Rat(k);
    }
    return out;
}

/// Multiplicative inverse of a log-free series with nonzero rational constant term.
inline LogSeries reciprocal(const LogSeries& s) {
    if (s.has_log()) throw SeriesError("reciprocal: log-bearing series");
    const ParamPoly& c0 = s.a(0);
    if (c0.is_zero() || !c0.is_constant()) throw SeriesError("non-unit series");
    const Rat inv = Rat(1) / c0.constant_value();
    const int n = s.order();
    LogSeries out(n, s.parity());
    out.set_a(0, ParamPoly(inv));
    for (int k = 1; k <= n; ++k) {
        ParamPoly acc;
        for (int j = 1; j <= k; ++j)
            if (!s.a(j).is_zero() && !out.a(k - j).is_zero()) acc += s.a(j) * out.a(k - j);
        out.set_a(k, -(acc * inv));
    }
    return out;
}

/// s^e for integer e; negative powers go through reciprocal().
inline LogSeries power(const LogSeries& s, int e) {
    LogSeries base = e < 0 ? reciprocal(s) : s;
    int k = e < 0 ? -e : e;
    LogSeries acc = LogSeries::constant(s.order(), ParamPoly(1));
    while (k) {
        if (k & 1) acc = mul(acc, base);
        k >>= 1;
        if (k) base = mul(base, base);
    }
    return acc;
}

inline LogSeries operator+(const LogSeries& x, const LogSeries& y) { return add(x, y); }
inline LogSeries operator-(const LogSeries& x, const LogSeries& y) { return sub(x, y); }
inline LogSeries operator*(const LogSeries& x, const LogSeries& y) { return mul(x, y); }
inline LogSeries operator*(const ParamPoly& c, const LogSeries& x) { return scale(x, c); }
inline LogSeries operator*(const Rat& c, const LogSeries& x) { return scale(x, ParamPoly(c)); }
inline LogSeries operator-(const LogSeries& x) { return scale(x, ParamPoly(-1)); }

inline std::string LogSeries::str(const std::string& var) const {
    std::string out;
    auto term = [&](const ParamPoly& c, int k, bool log) {
        if (c.is_zero()) return;
        if (!out.empty()) out += " + ";
        out += "(" + c.str(var) + ")";
        if (k > 0) out += k == 1 ? " x" : " x^" + std::to_string(k);
        if (log) out += " log x";
    };
    for (int k = 0; k <= order_; ++k) {
        term(a_[static_cast<std::size_t>(k)], k, false);
        term(b_[static_cast<std::size_t>(k)], k, true);
    }
    if (out.empty()) out = "0";
    return out + " + O(x^" + std::to_string(order_ + 1) + ")";
}

}  // namespace weylq
