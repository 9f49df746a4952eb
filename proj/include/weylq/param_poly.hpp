#pragma once

// Polynomials in a single formal parameter (the eigenvalue symbol μ) with
// exact rational coefficients.

#include "weylq/rational.hpp"

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

namespace weylq {

class ParamPoly {
public:
    ParamPoly() = default;
    ParamPoly(const Rat& c) {  // NOLINT(google-explicit-constructor)
        if (!c.is_zero()) coeffs_.push_back(c);
    }
    ParamPoly(int c) : ParamPoly(Rat(c)) {}  // NOLINT(google-explicit-constructor)
    explicit ParamPoly(std::vector<Rat> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    /// The formal parameter itself.
    static ParamPoly mu() { return ParamPoly(std::vector<Rat>{Rat(0), Rat(1)}); }

    /// Degree; the zero polynomial has degree -1.
    [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
    [[nodiscard]] bool is_constant() const { return coeffs_.size() <= 1; }
    [[nodiscard]] const std::vector<Rat>& coefficients() const { return coeffs_; }

    [[nodiscard]] Rat coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[static_cast<std::size_t>(k)] : Rat(0);
    }
    /// Value of a degree <= 0 polynomial. Throws for symbolic content.
    [[nodiscard]] Rat constant_value() const {
        if (!is_constant()) throw std::domain_error("ParamPoly: expected a constant, got " + str());
        return coeff(0);
    }

    [[nodiscard]] Rat eval(const Rat& at) const {
        Rat acc(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * at + *it;
        return acc;
    }

    ParamPoly& operator+=(const ParamPoly& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        trim();
        return *this;
    }
    ParamPoly& operator-=(const ParamPoly& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        trim();
        return *this;
    }
    ParamPoly& operator*=(const Rat& c) {
        if (c.is_zero()) {
            coeffs_.clear();
            return *this;
        }
        for (auto& x : coeffs_) x *= c;
        return *this;
    }
    ParamPoly& operator/=(const Rat& c) {
        if (c.is_zero()) throw std::domain_error("ParamPoly: division by zero");
        for (auto& x : coeffs_) x /= c;
        return *this;
    }

    friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rat> out(a.coeffs_.size() + b.coeffs_.size() - 1, Rat(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return ParamPoly(std::move(out));
    }
    ParamPoly& operator*=(const ParamPoly& o) { return *this = *this * o; }

    friend ParamPoly operator+(ParamPoly a, const ParamPoly& b) { return a += b; }
    friend ParamPoly operator-(ParamPoly a, const ParamPoly& b) { return a -= b; }
    friend ParamPoly operator-(ParamPoly a) {
        for (auto& x : a.coeffs_) x = -x;
        return a;
    }
    friend ParamPoly operator*(ParamPoly a, const Rat& c) { return a *= c; }
    friend ParamPoly operator*(const Rat& c, ParamPoly a) { return a *= c; }
    friend ParamPoly operator/(ParamPoly a, const Rat& c) { return a /= c; }

    friend bool operator==(const ParamPoly& a, const ParamPoly& b) { return a.coeffs_ == b.coeffs_; }

    /// Human-readable form, e.g. "-1/16 mu^2 - 1/8 mu".
    [[nodiscard]] std::string str(const std::string& var = "mu") const {
        if (coeffs_.empty()) return "0";
        std::string out;
        for (int k = degree(); k >= 0; --k) {
            const Rat& c = coeffs_[static_cast<std::size_t>(k)];
            if (c.is_zero()) continue;
            const bool neg = c.sign() < 0;
            const Rat mag = neg ? -c : c;
            if (out.empty()) {
                if (neg) out += "-";
            } else {
                out += neg ? " - " : " + ";
            }
            std::string mono = k == 0 ? "" : (k == 1 ? var : var + "^" + std::to_string(k));
            if (k == 0 || mag != Rat(1)) {
                out += mag.str();
                if (k != 0) out += " ";
            }
            out += mono;
        }
        return out;
    }

    friend std::ostream& operator<<(std::ostream& os, const ParamPoly& p) { return os << p.str(); }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    std::vector<Rat> coeffs_;
};

}  // namespace weylq
