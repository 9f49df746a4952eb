#pragma once

// The Q-curvature cotractor Q_∇ = P·(Q_01 + G1β, L1β, 0) and the canonical
// tractor W_∇ = (1, -β♯, ½|β|²), both in the h-trivialization, their pairing,
// the integral invariant, constant rescalings ĥ = t²h and the functional
// comparison over a family of β.
//
// Density convention: a weight-w density represented by f in the scale h is
// represented by t^{-w}f in the scale ĥ = t²h, so weight-n densities
// integrate to scale-free numbers.

#include "weylq/dirichlet.hpp"
#include "weylq/sl2_ladder.hpp"

#include <sstream>

namespace weylq {

struct Density {
    ParamPoly value;
    int weight = 0;

    [[nodiscard]] Density rescaled(const Rat& t) const { return {value * pow(t, -weight), weight}; }
};

/// coefficient·token + constant, e.g. 6·vol(S^4) + 2.
struct Integral {
    Rat vol_coefficient;
    Rat constant;
    std::string token{"vol"};

    [[nodiscard]] std::string str() const {
        std::ostringstream os;
        if (!vol_coefficient.is_zero()) os << vol_coefficient.str() << "*" << token;
        if (!constant.is_zero() || vol_coefficient.is_zero()) {
            if (!vol_coefficient.is_zero()) os << (constant.sign() < 0 ? " - " : " + ");
            os << (vol_coefficient.is_zero() ? constant : (constant.sign() < 0 ? -constant : constant)).str();
        }
        return os.str();
    }
    friend bool operator==(const Integral&, const Integral&) = default;
};

struct CotractorTriple {
    std::vector<ModeValue> bottom;  // constant mode Q_01, then G1β per exact component
    std::vector<ModeValue> middle;  // L1β per coclosed/harmonic component
    ParamPoly top;
    int weight = 0;  // n + 1
    Rat prefactor;
    std::string reference_metric;

    [[nodiscard]] bool is_zero() const {
        if (!top.is_zero()) return false;
        for (const auto& e : bottom)
            if (!e.value.is_zero()) return false;
        for (const auto& e : middle)
            if (!e.value.is_zero()) return false;
        return true;
    }
};

struct TractorTriple {
    Rat top{1};
    std::vector<ModeValue> middle;  // -β per component
    Rat bottom;                     // ½‖β‖², integrated
    int weight = -1;
    std::string reference_metric;
};

inline CotractorTriple build_Q_tractor(const EinsteinModel& model, const BoundaryWeyl& beta, int order) {
    const int n = model.n;
    const Rat pref = tractor_prefactor(n);
    const SmoothnessVerdict v = smoothness_obstruction(model, beta, order);
    const DefiningFunctionData df = log_defining_function(model, order);
    CotractorTriple q;
    q.weight = n + 1;
    q.prefactor = pref;
    q.reference_metric = model.tag;
    for (auto e : v.bottom) {
        // The constant-mode slot of the bottom is Q_01 = n·s.
        if (e.constant_mode && e.value != ParamPoly(df.q01)) throw ConsistencyError("n*s != Q_01 on the constant mode");
        e.value *= pref;
        q.bottom.push_back(std::move(e));
    }
    for (auto e : v.l1_beta) {
        e.value *= pref;
        q.middle.push_back(std::move(e));
    }
    return q;
}

inline TractorTriple build_W_tractor(const EinsteinModel& model, const BoundaryWeyl& beta) {
    require_references(model, beta);
    TractorTriple w;
    w.reference_metric = model.tag;
    for (const auto& c : beta.exact_part)
        w.middle.push_back({scalar_label(model, c.mode), Channel::exact, c.mode, false, ParamPoly(-c.coeff)});
    for (const auto& c : beta.coclosed_part)
        w.middle.push_back({coclosed_label(model, c.mode), Channel::coclosed, c.mode, false, ParamPoly(-c.coeff)});
    for (const auto& c : beta.harmonic_part)
        w.middle.push_back({coclosed_label(model, c.mode), Channel::coclosed, c.mode, false, ParamPoly(-c.coeff)});
    w.bottom = norm_squared(model, beta) / Rat(2);
    return w;
}

struct Pairing {
    std::vector<ModeValue> density;  // per-mode contributions to ⟨Q_∇, W_∇⟩
    Integral integrated;
};

/// bottom·1 + ⟨middle, -β⟩ + top·½|β|². Exact-mode bottoms are mean-zero
/// functions and integrate to 0; a middle entry against -β on the same
/// normalized eigenform integrates to -(entry)·c.
inline Pairing pairing_density(const EinsteinModel& model, const CotractorTriple& q, const TractorTriple& w) {
    if (q.reference_metric != w.reference_metric || q.reference_metric != model.tag)
        throw std::invalid_argument("pairing_density: reference metrics differ (" + q.reference_metric + " vs " +
                                    w.reference_metric + ")");
    if (q.middle.size() > w.middle.size()) throw std::invalid_argument("pairing_density: tractor tables do not match");
    Pairing p;
    p.integrated.token = model.volume.token;
    for (const auto& e : q.bottom) {
        p.density.push_back(e);
        if (e.constant_mode) p.integrated.vol_coefficient += e.value.constant_value() * model.volume.factor;
    }
    // W middle lists exact components first, then coclosed and harmonic ones in the same order as Q middle.
    const std::size_t offset = w.middle.size() - q.middle.size();
    for (std::size_t i = 0; i < q.middle.size(); ++i) {
        const ModeValue& qm = q.middle[i];
        const ModeValue& wm = w.middle[offset + i];
        if (qm.mode != wm.mode || wm.channel != Channel::coclosed)
            throw std::invalid_argument("pairing_density: tractor tables do not match");
        ModeValue d = qm;
        d.value = qm.value * wm.value;
        p.density.push_back(d);
        if (!d.value.is_constant()) throw UnsupportedError("pairing_density: symbolic eigenvalue cannot be integrated");
        p.integrated.constant += d.value.constant_value();
    }
    p.integrated.constant += q.top.is_zero() ? Rat(0) : q.top.constant_value() * w.bottom;
    return p;
}

struct SecondTermEntry {
    std::string label;
    std::size_t mode = 0;
    Rat mu;
    Rat l1;     // L1 eigenvalue on the mode
    Rat coeff;
    Rat value;  // (-1)^{n/2} 2^{n-2} ((n/2-1)!)² · l1 · coeff²
};

struct InvariantReport {
    Rat q_h;
    Integral q_total;
    Rat second_term;
    Integral invariant;
    std::vector<SecondTermEntry> per_mode_breakdown;
    bool smooth = false;
    std::vector<std::string> gauge_note;  // harmonic modes present in β
    CotractorTriple q_tractor;
    Pairing pairing;
};

/// ∫Q_h dV + (-1)^{n/2} 2^{n-2} ((n/2-1)!)² ∫⟨L1β, β⟩ dV, cross-checked
/// against the integrated tractor pairing.
inline InvariantReport integral_invariant(const EinsteinModel& model, const BoundaryWeyl& beta, int order) {
    require_references(model, beta);
    for (const auto& c : beta.coclosed_part)
        if (model.coclosed_modes[c.mode].is_symbolic())
            throw UnsupportedError("integral_invariant: symbolic mu cannot be integrated");
    const int n = model.n;
    InvariantReport r;
    const DefiningFunctionData df = log_defining_function(model, order);
    r.q_h = df.q_h;
    r.q_total = Integral{df.q_h * model.volume.factor, Rat(0), model.volume.token};
    const Rat coefficient = -tractor_prefactor(n);
    for (const auto& c : beta.coclosed_part) {
        const ParamPoly& mu = model.coclosed_modes[c.mode].mu;
        const Rat l1 = harmonic_extension_coclosed(model, mu, Rat(1), order).l1.constant_value();
        const Rat value = coefficient * l1 * c.coeff * c.coeff;
        r.per_mode_breakdown.push_back({coclosed_label(model, c.mode), c.mode, mu.constant_value(), l1, c.coeff, value});
        r.second_term += value;
    }
    for (const auto& c : beta.harmonic_part) r.gauge_note.push_back(coclosed_label(model, c.mode));
    r.invariant = r.q_total;
    r.invariant.constant = r.second_term;

    r.q_tractor = build_Q_tractor(model, beta, order);
    r.pairing = pairing_density(model, r.q_tractor, build_W_tractor(model, beta));
    if (!(r.pairing.integrated == r.invariant))
        throw ConsistencyError("integrated pairing " + r.pairing.integrated.str() + " != invariant " + r.invariant.str());
    r.smooth = smoothness_obstruction(model, beta, order).smooth;
    if (r.smooth != r.q_tractor.is_zero()) throw ConsistencyError("smoothness verdict disagrees with Q_tractor = 0");
    return r;
}

/// e^Υ for a conformal factor; only constant Υ with e^Υ ∈ Q₊ is supported.
struct ConformalFactor {
    Rat scale{1};
    bool constant = true;
    std::string description;

    static ConformalFactor constant_scale(const Rat& t) { return {t, true, "e^Upsilon = " + t.str()}; }
    static ConformalFactor varying(std::string what) { return {Rat(1), false, std::move(what)}; }
};

struct NamedCheck {
    std::string name;
    bool pass = false;
    std::string lhs;
    std::string rhs;
};

struct RescaleCheck {
    Rat scale;           // t = e^Υ; ĥ = t²h
    Rat metric_factor;   // t²
    InvariantReport original;
    InvariantReport transformed;
    std::vector<NamedCheck> checks;

    [[nodiscard]] bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

namespace detail {
inline NamedCheck check_equal(std::string name, const ParamPoly& lhs, const ParamPoly& rhs) {
    return {std::move(name), lhs == rhs, lhs.str(), rhs.str()};
}
}  // namespace detail

/// Recomputes everything on ĥ = t²h and compares with the predicted
/// conformal weights.
inline RescaleCheck rescale_constant(const EinsteinModel& model, const BoundaryWeyl& beta, const ConformalFactor& u,
                                     int order) {
    if (!u.constant)
        throw UnsupportedError("rescale_constant: non-constant conformal factor (" + u.description +
                               ") leaves the Einstein backends");
    const Rat t = u.scale;
    if (t.sign() <= 0) throw std::invalid_argument("rescale_constant: e^Upsilon must be positive");
    const int n = model.n;
    const EinsteinModel hat = rescaled(model, t);
    const BoundaryWeyl beta_hat = rescaled(beta, n, t);

    RescaleCheck rc;
    rc.scale = t;
    rc.metric_factor = t * t;
    rc.original = integral_invariant(model, beta, order);
    rc.transformed = integral_invariant(hat, beta_hat, order);
    const InvariantReport& a = rc.original;
    const InvariantReport& b = rc.transformed;

    rc.checks.push_back(detail::check_equal("lambda", ParamPoly(hat.lambda), ParamPoly(model.lambda * pow(t, -2))));
    rc.checks.push_back(detail::check_equal("volume", ParamPoly(hat.volume.factor), ParamPoly(model.volume.factor * pow(t, n))));
    rc.checks.push_back(detail::check_equal("q_h", ParamPoly(b.q_h), Density{ParamPoly(a.q_h), n}.rescaled(t).value));
    rc.checks.push_back(detail::check_equal("q_total", ParamPoly(b.q_total.vol_coefficient), ParamPoly(a.q_total.vol_coefficient)));

    // Bottom slot as a function: φ̂ = t^{-n/2}φ on each exact component, so
    // Ĝ1β̂ on φ̂ must equal t^{-n/2} G1β on φ.
    const auto& qb = a.q_tractor.bottom;
    const auto& qbh = b.q_tractor.bottom;
    for (std::size_t i = 0; i < qb.size() && i < qbh.size(); ++i) {
        const Rat predicted = qb[i].constant_mode ? pow(t, -n) : pow(t, -n / 2);
        rc.checks.push_back(detail::check_equal("bottom[" + qb[i].label + "]", qbh[i].value, qb[i].value * predicted));
    }
    // L1 eigenvalues are homogeneous of degree n/2-1 in (μ, λ).
    for (std::size_t i = 0; i < a.per_mode_breakdown.size(); ++i) {
        const auto& e = a.per_mode_breakdown[i];
        const auto& eh = b.per_mode_breakdown.at(i);
        rc.checks.push_back(detail::check_equal("l1[" + e.label + "]", ParamPoly(eh.l1), ParamPoly(e.l1 * pow(t, -(n - 2)))));
    }
    // L1β as a 1-form: α̂ = t^{-(n-2)/2}α on the middle slot.
    const auto& qm = a.q_tractor.middle;
    const auto& qmh = b.q_tractor.middle;
    for (std::size_t i = 0; i < qm.size() && i < qmh.size(); ++i)
        rc.checks.push_back(detail::check_equal("middle[" + qm[i].label + "]", qmh[i].value,
                                                qm[i].value * pow(t, -(n - 2) / 2)));
    rc.checks.push_back({"second_term", b.second_term == a.second_term, b.second_term.str(), a.second_term.str()});
    rc.checks.push_back({"invariant", b.invariant.vol_coefficient == a.invariant.vol_coefficient &&
                                          b.invariant.constant == a.invariant.constant,
                         b.invariant.str(), a.invariant.str()});
    rc.checks.push_back({"smooth", a.smooth == b.smooth, a.smooth ? "true" : "false", b.smooth ? "true" : "false"});
    return rc;
}

struct FunctionalEntry {
    std::size_t index = 0;
    Integral invariant;
    Rat second_term;
    bool closed = false;
};

struct FunctionalReport {
    std::vector<FunctionalEntry> entries;
    std::vector<std::size_t> minimizers;  // indices attaining the least second term
    bool all_nonnegative = true;
    bool zero_iff_closed = true;
    bool factor_check_applicable = false;  // λ > 0
    bool all_factors_positive = true;
    std::vector<std::string> nonpositive_factors;
};

/// Evaluates the invariant over a family of β. For λ > 0 every factor
/// μ - 2m(m-n+3)λ of the closed-form L1 is checked on the model spectrum.
inline FunctionalReport functional_report(const EinsteinModel& model, const std::vector<BoundaryWeyl>& betas,
                                          int order) {
    FunctionalReport fr;
    for (std::size_t i = 0; i < betas.size(); ++i) {
        const InvariantReport r = integral_invariant(model, betas[i], order);
        FunctionalEntry e{i, r.invariant, r.second_term, betas[i].is_closed()};
        fr.all_nonnegative = fr.all_nonnegative && e.second_term.sign() >= 0;
        fr.zero_iff_closed = fr.zero_iff_closed && (e.second_term.is_zero() == e.closed);
        fr.entries.push_back(std::move(e));
    }
    if (!fr.entries.empty()) {
        Rat least = fr.entries.front().second_term;
        for (const auto& e : fr.entries) least = std::min(least, e.second_term);
        for (const auto& e : fr.entries)
            if (e.second_term == least) fr.minimizers.push_back(e.index);
    }
    fr.factor_check_applicable = model.lambda.sign() > 0;
    if (fr.factor_check_applicable) {
        for (const auto& m : model.coclosed_modes) {
            if (m.is_harmonic() || m.is_symbolic()) continue;
            const Rat mu = m.mu.constant_value();
            if (mu.sign() <= 0) fr.nonpositive_factors.push_back("mu=" + mu.str());
            for (int k = 1; k <= model.n / 2 - 2; ++k) {
                const Rat f = mu - Rat(2 * k * (k - model.n + 3)) * model.lambda;
                if (f.sign() <= 0) fr.nonpositive_factors.push_back("mu=" + mu.str() + ", m=" + std::to_string(k));
            }
        }
        fr.all_factors_positive = fr.nonpositive_factors.empty();
    }
    return fr;
}

}  // namespace weylq
