#pragma once

// Exact rationals backed by GMP's mpq_class.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace weylq {

class Rat {
public:
    Rat() = default;
    Rat(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
    Rat(int v) : q_(v) {}   // NOLINT(google-explicit-constructor)
    Rat(long num, long den) {
        if (den == 0) throw std::domain_error("Rat: zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }
    explicit Rat(const mpq_class& q) : q_(q) { q_.canonicalize(); }
    explicit Rat(const mpz_class& z) : q_(z) {}

    /// Parses "p", "-p", "p/q". Whitespace is not accepted.
    static Rat parse(std::string_view text) {
        if (text.empty()) throw std::invalid_argument("Rat::parse: empty string");
        const auto slash = text.find('/');
        auto check_int = [](std::string_view s) {
            std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
            if (i == s.size()) return false;
            for (; i < s.size(); ++i)
                if (s[i] < '0' || s[i] > '9') return false;
            return true;
        };
        const std::string_view num = text.substr(0, slash);
        const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
        if (!check_int(num) || !check_int(den) || den[0] == '-' || den[0] == '+')
            throw std::invalid_argument("Rat::parse: malformed rational '" + std::string(text) + "'");
        std::string n_str(num[0] == '+' ? num.substr(1) : num);
        mpz_class p(n_str, 10);
        mpz_class q(std::string(den), 10);
        if (q == 0) throw std::invalid_argument("Rat::parse: zero denominator");
        Rat r;
        r.q_ = mpq_class(p, q);
        r.q_.canonicalize();
        return r;
    }

    [[nodiscard]] const mpq_class& raw() const { return q_; }
    [[nodiscard]] mpz_class num() const { return q_.get_num(); }
    [[nodiscard]] mpz_class den() const { return q_.get_den(); }
    [[nodiscard]] bool is_zero() const { return sgn(q_) == 0; }
    [[nodiscard]] int sign() const { return sgn(q_); }
    [[nodiscard]] bool is_integer() const { return q_.get_den() == 1; }
    [[nodiscard]] double to_double() const { return q_.get_d(); }

    /// Canonical "p/q", or "p" when q = 1.
    [[nodiscard]] std::string str() const {
        if (q_.get_den() == 1) return q_.get_num().get_str();
        return q_.get_num().get_str() + "/" + q_.get_den().get_str();
    }

    Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
    Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
    Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.is_zero()) throw std::domain_error("Rat: division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
    friend Rat operator-(const Rat& a) {
        Rat r;
        r.q_ = -a.q_;
        return r;
    }

    friend bool operator==(const Rat& a, const Rat& b) { return cmp(a.q_, b.q_) == 0; }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

private:
    mpq_class q_{0};
};

/// r^e for integer e (negative e inverts).
inline Rat pow(const Rat& r, int e) {
    Rat base = e < 0 ? Rat(1) / r : r;
    unsigned k = e < 0 ? static_cast<unsigned>(-e) : static_cast<unsigned>(e);
    Rat acc(1);
    while (k) {
        if (k & 1U) acc *= base;
        base *= base;
        k >>= 1U;
    }
    return acc;
}

inline Rat factorial(int k) {
    if (k < 0) throw std::domain_error("factorial of negative integer");
    mpz_class f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return Rat(f);
}

}  // namespace weylq
