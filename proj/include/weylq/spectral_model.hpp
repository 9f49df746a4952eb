#pragma once

// Conformal infinity (M, [h]) with an Einstein representative h, stored as
// spectral data, and Weyl structures ∇ = ∇^h + β in Hodge-decomposed mode
// coordinates. All modes are L²-orthonormal with respect to h.

#include "weylq/errors.hpp"
#include "weylq/param_poly.hpp"
#include "weylq/rational.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace weylq {

/// vol(M, h) = factor · token, where token names a transcendental unit
/// such as (2pi)^4 or vol(S^4).
struct Volume {
    Rat factor{1};
    std::string token{"vol"};

    friend bool operator==(const Volume&, const Volume&) = default;
};

struct ScalarMode {
    Rat kappa;  // eigenvalue of Δ_h on functions
    int multiplicity = 1;
    bool mean_zero = false;  // true iff kappa > 0
};

struct CoclosedMode {
    ParamPoly mu;  // Hodge-Laplacian eigenvalue on coclosed 1-forms; may be the formal μ
    int multiplicity = 1;

    [[nodiscard]] bool is_symbolic() const { return !mu.is_constant(); }
    [[nodiscard]] bool is_harmonic() const { return mu.is_zero(); }
};

enum class Backend { torus, sphere, custom };

inline std::string to_string(Backend b) {
    switch (b) {
        case Backend::torus: return "torus";
        case Backend::sphere: return "sphere";
        case Backend::custom: return "custom";
    }
    return "custom";
}

/// Ric_h = 2λ(n-1)h, P_h = λh; the Poincaré metric is
/// g = x^{-2}(dx² + (1 - λx²/2)² h).
struct EinsteinModel {
    int n = 4;
    Rat lambda{0};
    Volume volume;
    std::vector<ScalarMode> scalar_modes;
    std::vector<CoclosedMode> coclosed_modes;
    int harmonic_rank = 0;
    Backend backend = Backend::custom;
    /// Set when coclosed eigenvalues come from the sphere literature table.
    bool one_form_table_dependent = false;
    /// Identifies the reference metric h; rescaling appends the factor.
    std::string tag{"h"};
};

enum class Violation {
    invalid_dimension,
    bochner_violation,
    missing_constant_mode,
    duplicate_constant_mode,
    negative_eigenvalue,
    mean_zero_mismatch,
    nonpositive_multiplicity,
    harmonic_count_exceeds_rank,
};

inline std::string to_string(Violation v) {
    switch (v) {
        case Violation::invalid_dimension: return "invalid-dimension";
        case Violation::bochner_violation: return "bochner-violation";
        case Violation::missing_constant_mode: return "missing-constant-mode";
        case Violation::duplicate_constant_mode: return "duplicate-constant-mode";
        case Violation::negative_eigenvalue: return "negative-eigenvalue";
        case Violation::mean_zero_mismatch: return "mean-zero-mismatch";
        case Violation::nonpositive_multiplicity: return "nonpositive-multiplicity";
        case Violation::harmonic_count_exceeds_rank: return "harmonic-count-exceeds-rank";
    }
    return "unknown";
}

inline void require_dimension(int n) {
    if (n < 4 || n % 2 != 0)
        throw InvalidDimension("boundary dimension must be even and >= 4, got " + std::to_string(n));
}

/// Every violated invariant, in a fixed order. Empty iff the model is valid.
inline std::vector<Violation> validate(const EinsteinModel& m) {
    std::vector<Violation> out;
    if (m.n < 4 || m.n % 2 != 0) out.push_back(Violation::invalid_dimension);
    // Bochner: positive Ricci forces H^1(M) = 0.
    if (m.lambda.sign() > 0 && m.harmonic_rank != 0) out.push_back(Violation::bochner_violation);

    int constant_modes = 0;
    bool negative = false;
    bool mismatch = false;
    bool multiplicity = m.harmonic_rank < 0;
    for (const auto& s : m.scalar_modes) {
        if (s.kappa.is_zero()) ++constant_modes;
        if (s.kappa.sign() < 0) negative = true;
        if (s.mean_zero != (s.kappa.sign() > 0)) mismatch = true;
        if (s.multiplicity <= 0) multiplicity = true;
    }
    if (constant_modes == 0) out.push_back(Violation::missing_constant_mode);
    if (constant_modes > 1) out.push_back(Violation::duplicate_constant_mode);

    int harmonic = 0;
    for (const auto& c : m.coclosed_modes) {
        if (c.multiplicity <= 0) multiplicity = true;
        if (c.is_harmonic()) harmonic += c.multiplicity;
        if (!c.is_symbolic() && c.mu.constant_value().sign() < 0) negative = true;
    }
    if (negative) out.push_back(Violation::negative_eigenvalue);
    if (mismatch) out.push_back(Violation::mean_zero_mismatch);
    if (multiplicity) out.push_back(Violation::nonpositive_multiplicity);
    if (harmonic > m.harmonic_rank) out.push_back(Violation::harmonic_count_exceeds_rank);
    return out;
}

namespace detail {

/// r_n(m) = #{k ∈ Z^n : |k|² = m} for m = 0..max, by convolving the
/// one-dimensional counts.
inline std::vector<long> lattice_norm_counts(int n, int max_norm_sq) {
    std::vector<long> one(static_cast<std::size_t>(max_norm_sq) + 1, 0);
    for (int j = 0; j * j <= max_norm_sq; ++j) one[static_cast<std::size_t>(j * j)] = j == 0 ? 1 : 2;
    std::vector<long> acc(one.size(), 0);
    acc[0] = 1;
    for (int d = 0; d < n; ++d) {
        std::vector<long> next(one.size(), 0);
        for (std::size_t a = 0; a < acc.size(); ++a) {
            if (acc[a] == 0) continue;
            for (std::size_t b = 0; a + b < one.size(); ++b) next[a + b] += acc[a] * one[b];
        }
        acc = std::move(next);
    }
    return acc;
}

inline long binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r.get_si();
}

}  // namespace detail

/// Side-2π flat torus T^n: Δ eigenvalues |k|², k ∈ Z^n. Coclosed 1-form
/// eigenspaces carry (n-1)·r_n(m) forms for m > 0 and the n parallel
/// (harmonic) forms at m = 0.
inline EinsteinModel make_flat_torus(int n, int max_norm_sq) {
    require_dimension(n);
    if (max_norm_sq < 0) throw std::invalid_argument("make_flat_torus: max_norm_sq must be >= 0");
    EinsteinModel m;
    m.n = n;
    m.lambda = Rat(0);
    m.volume = Volume{Rat(1), "(2pi)^" + std::to_string(n)};
    m.backend = Backend::torus;
    m.harmonic_rank = n;
    m.tag = "torus" + std::to_string(n);
    const auto counts = detail::lattice_norm_counts(n, max_norm_sq);
    m.coclosed_modes.push_back({ParamPoly(), n});
    for (int k = 0; k <= max_norm_sq; ++k) {
        const long c = counts[static_cast<std::size_t>(k)];
        if (c == 0) continue;
        m.scalar_modes.push_back({Rat(k), static_cast<int>(c), k > 0});
        if (k > 0) m.coclosed_modes.push_back({ParamPoly(Rat(k)), static_cast<int>((n - 1) * c)});
    }
    return m;
}

/// Literature table for the coexact 1-form spectrum of the unit round S^n
/// (Ikeda–Taniguchi; Folland): degree k >= 1 has Hodge eigenvalue
/// (k+1)(k+n-2) with multiplicity k(k+n-1)(2k+n-1)(k+n-3)! / ((n-2)!(k+1)!).
/// Kept apart from the algorithms so it can be swapped out.
struct SphereCoexactEntry {
    Rat eigenvalue;
    long multiplicity;
};

inline SphereCoexactEntry sphere_coexact_one_form_table(int n, int k) {
    if (k < 1) throw std::invalid_argument("sphere coexact table starts at degree 1");
    mpz_class num = mpz_class(k) * (k + n - 1) * (2 * k + n - 1) * factorial(k + n - 3).num();
    mpz_class den = factorial(n - 2).num() * factorial(k + 1).num();
    return {Rat((k + 1) * (k + n - 2)), mpz_class(num / den).get_si()};
}

/// Degree-k spherical harmonics on S^n: eigenvalue k(k+n-1),
/// multiplicity C(n+k, n) - C(n+k-2, n).
inline long sphere_harmonic_multiplicity(int n, int k) {
    return detail::binomial(n + k, n) - detail::binomial(n + k - 2, n);
}

/// Unit round sphere S^n: Ric = (n-1)h, hence λ = 1/2.
inline EinsteinModel make_round_sphere(int n, int max_degree) {
    require_dimension(n);
    if (max_degree < 0) throw std::invalid_argument("make_round_sphere: max_degree must be >= 0");
    EinsteinModel m;
    m.n = n;
    m.lambda = Rat(1, 2);
    m.volume = Volume{Rat(1), "vol(S^" + std::to_string(n) + ")"};
    m.backend = Backend::sphere;
    m.harmonic_rank = 0;
    m.one_form_table_dependent = true;
    m.tag = "sphere" + std::to_string(n);
    for (int k = 0; k <= max_degree; ++k)
        m.scalar_modes.push_back({Rat(k * (k + n - 1)), static_cast<int>(sphere_harmonic_multiplicity(n, k)), k > 0});
    for (int k = 1; k <= max_degree; ++k) {
        const auto e = sphere_coexact_one_form_table(n, k);
        m.coclosed_modes.push_back({ParamPoly(e.eigenvalue), static_cast<int>(e.multiplicity)});
    }
    return m;
}

/// One coefficient on one L²-normalized eigenform drawn from the referenced
/// eigenspace. Repeated references denote distinct orthonormal eigenforms.
struct WeylComponent {
    std::size_t mode = 0;
    Rat coeff{0};
};

/// β = dφ + (coclosed) + (harmonic), φ expanded in mean-zero scalar modes.
struct BoundaryWeyl {
    std::vector<WeylComponent> exact_part;     // indices into scalar_modes
    std::vector<WeylComponent> coclosed_part;  // indices into coclosed_modes, mu > 0
    std::vector<WeylComponent> harmonic_part;  // indices into coclosed_modes, mu = 0

    [[nodiscard]] bool is_zero() const {
        auto all_zero = [](const std::vector<WeylComponent>& v) {
            for (const auto& c : v)
                if (!c.coeff.is_zero()) return false;
            return true;
        };
        return all_zero(exact_part) && all_zero(coclosed_part) && all_zero(harmonic_part);
    }
    /// β is closed iff its coclosed (non-harmonic) part vanishes.
    [[nodiscard]] bool is_closed() const {
        for (const auto& c : coclosed_part)
            if (!c.coeff.is_zero()) return false;
        return true;
    }
};

/// Checks mode references and eigenspace capacities.
inline std::vector<std::string> check_references(const EinsteinModel& m, const BoundaryWeyl& beta) {
    std::vector<std::string> problems;
    std::map<std::size_t, int> scalar_use;
    std::map<std::size_t, int> coclosed_use;
    for (const auto& c : beta.exact_part) {
        if (c.mode >= m.scalar_modes.size()) {
            problems.push_back("exact component references a missing scalar mode");
            continue;
        }
        if (!m.scalar_modes[c.mode].kappa.sign()) problems.push_back("exact component references the constant mode");
        ++scalar_use[c.mode];
    }
    auto check_coclosed = [&](const std::vector<WeylComponent>& part, bool harmonic) {
        for (const auto& c : part) {
            if (c.mode >= m.coclosed_modes.size()) {
                problems.push_back("1-form component references a missing coclosed mode");
                continue;
            }
            if (m.coclosed_modes[c.mode].is_harmonic() != harmonic)
                problems.push_back(harmonic ? "harmonic component references a mode with mu != 0"
                                            : "coclosed component references a harmonic (mu = 0) mode");
            ++coclosed_use[c.mode];
        }
    };
    check_coclosed(beta.coclosed_part, false);
    check_coclosed(beta.harmonic_part, true);
    for (const auto& [idx, count] : scalar_use)
        if (idx < m.scalar_modes.size() && count > m.scalar_modes[idx].multiplicity)
            problems.push_back("more exact components than the eigenspace dimension");
    for (const auto& [idx, count] : coclosed_use)
        if (idx < m.coclosed_modes.size() && count > m.coclosed_modes[idx].multiplicity)
            problems.push_back("more 1-form components than the eigenspace dimension");
    return problems;
}

/// ‖β‖²_{L²(h)}: κc² per exact component (‖dφ_κ‖² = κ), c² otherwise.
inline Rat norm_squared(const EinsteinModel& m, const BoundaryWeyl& beta) {
    Rat acc(0);
    for (const auto& c : beta.exact_part) acc += m.scalar_modes.at(c.mode).kappa * c.coeff * c.coeff;
    for (const auto& c : beta.coclosed_part) acc += c.coeff * c.coeff;
    for (const auto& c : beta.harmonic_part) acc += c.coeff * c.coeff;
    return acc;
}

/// The same manifold with ĥ = t²h (t = e^Υ, Υ constant). Eigenvalues and λ
/// scale by t^{-2}, the volume by t^n.
inline EinsteinModel rescaled(const EinsteinModel& m, const Rat& t) {
    if (t.sign() <= 0) throw std::invalid_argument("rescaled: scale token e^Upsilon must be positive");
    const Rat inv2 = Rat(1) / (t * t);
    EinsteinModel out = m;
    out.lambda = m.lambda * inv2;
    out.volume.factor = m.volume.factor * pow(t, m.n);
    for (auto& s : out.scalar_modes) s.kappa *= inv2;
    for (auto& c : out.coclosed_modes) c.mu *= inv2;
    out.tag = m.tag + "*" + t.str() + "^2";
    return out;
}

/// β itself is unchanged (β̂ = β - dΥ with dΥ = 0); only its coordinates in
/// the ĥ-orthonormal bases change: 1-forms by t^{(n-2)/2}, dφ by t^{n/2}.
inline BoundaryWeyl rescaled(const BoundaryWeyl& beta, int n, const Rat& t) {
    BoundaryWeyl out = beta;
    const Rat one_form = pow(t, (n - 2) / 2);
    const Rat exact = pow(t, n / 2);
    for (auto& c : out.exact_part) c.coeff *= exact;
    for (auto& c : out.coclosed_part) c.coeff *= one_form;
    for (auto& c : out.harmonic_part) c.coeff *= one_form;
    return out;
}

}  // namespace weylq
