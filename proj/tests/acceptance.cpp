// Runs the twelve acceptance criteria and prints one PASS/FAIL line each.
// Exit status is nonzero if any criterion fails.

#include "oracles.hpp"
#include "weylq/tractor.hpp"

#include <functional>
#include <iostream>
#include <map>
#include <sstream>

using namespace weylq;

namespace {

const ParamPoly mu = ParamPoly::mu();

EinsteinModel einstein(int n, const Rat& lambda) {
    EinsteinModel m;
    m.n = n;
    m.lambda = lambda;
    m.scalar_modes = {{Rat(0), 1, false}};
    return m;
}

BoundaryWeyl coclosed(std::size_t mode, const Rat& c) {
    BoundaryWeyl b;
    b.coclosed_part = {{mode, c}};
    return b;
}
BoundaryWeyl exact(std::size_t mode, const Rat& c) {
    BoundaryWeyl b;
    b.exact_part = {{mode, c}};
    return b;
}
BoundaryWeyl harmonic(std::size_t mode, const Rat& c) {
    BoundaryWeyl b;
    b.harmonic_part = {{mode, c}};
    return b;
}

/// Label → summed value, dropping zero totals.
std::map<std::string, ParamPoly> nonzero_by_label(const std::vector<ModeValue>& v) {
    std::map<std::string, ParamPoly> out;
    for (const auto& e : v) out[e.label] = out[e.label] + e.value;
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

struct Criterion {
    std::ostringstream why;
    bool ok = true;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            if (ok) why << what;
            ok = false;
        }
    }
};

using Body = std::function<void(Criterion&)>;

void q_curvature_s4(Criterion& c) {
    const DefiningFunctionData df = log_defining_function(make_round_sphere(4, 0), default_truncation(4));
    c.expect(df.s == Rat(-3, 8), "s = " + df.s.str());
    c.expect(df.q_h == Rat(6), "Q_h = " + df.q_h.str());
    c.expect(df.q_h == oracle::q4_from_curvature(Rat(1, 2)), "curvature oracle");
    c.expect(df.q_h == Rat(24) * Rat(1, 4), "24 lambda^2");
}

void flat_obstructions(Criterion& c) {
    const EinsteinModel flat = einstein(4, Rat(0));
    const ParamPoly l0 = harmonic_extension_scalar(flat, mu, Rat(1), 6).l0;
    const ParamPoly l1 = harmonic_extension_coclosed(flat, mu, Rat(1), 6).l1;
    c.expect(l0 == mu * mu * Rat(-1, 16), "L0 = " + l0.str("kappa"));
    c.expect(l1 == mu * Rat(1, 2), "L1 = " + l1.str("mu"));
}

void three_way_l1(Criterion& c) {
    for (int n : {4, 6, 8})
        for (const Rat& lambda : {Rat(0), Rat(1, 2), Rat(-1)}) {
            const EinsteinModel m = einstein(n, lambda);
            const ParamPoly frob = harmonic_extension_coclosed(m, mu, Rat(1), n + 2).l1;
            const ParamPoly ladder = ladder_eigenvalue(m, Channel::coclosed, mu, n + 2);
            const ParamPoly product = product_formula_L1(m, mu);
            const std::string at = " at n=" + std::to_string(n) + " lambda=" + lambda.str();
            c.expect(frob == ladder, "frobenius != ladder" + at);
            c.expect(ladder == product, "ladder != product" + at);
            c.expect(frob == oracle::explicit_l1(n, lambda), "explicit oracle" + at);
            if (n == 6) c.expect(frob == mu * (mu + ParamPoly(Rat(4) * lambda)) * Rat(-1, 16), "n = 6 closed form" + at);
        }
}

WeightedForm plus(const WeightedForm& a, const WeightedForm& b, const Rat& cb = Rat(1)) {
    WeightedForm r = a;
    r.tangential = a.tangential + scale(b.tangential, ParamPoly(cb));
    r.normal = a.normal + scale(b.normal, ParamPoly(cb));
    return r;
}

bool same(const WeightedForm& a, const WeightedForm& b) {
    return a.weight == b.weight && a.tangential.agrees_with(b.tangential) && a.normal.agrees_with(b.normal);
}

void sl2_relations(Criterion& c) {
    oracle::Gen g(20261016);
    int samples = 0;
    for (int n : {4, 6, 8})
        for (int w = -6; w <= 6; w += 2)
            for (Channel ch : {Channel::coclosed, Channel::exact})
                for (int rep = 0; rep < 3; ++rep) {
                    const EinsteinModel m = einstein(n, g.rat());
                    const int order = n + 8;
                    const ParamPoly eigen = ch == Channel::coclosed ? (g.coin() ? mu : ParamPoly(g.rat()))
                                                                    : ParamPoly(Rat(g.integer(1, 9)));
                    WeightedForm f{w, ch, eigen, g.series(order, true, false, ch == Channel::coclosed), LogSeries(order)};
                    if (ch == Channel::exact) {
                        f.normal = g.series(order, true, false);
                        if (w >= -n + 2) f.normal.set_a(0, ParamPoly());
                    }
                    const std::string at = " at n=" + std::to_string(n) + " w=" + std::to_string(w);
                    c.expect(same(plus(op_E(op_F(m, f), n), op_F(m, op_E(f, n)), Rat(-1)), op_H(f, n)), "[E,F] = H" + at);
                    const WeightedForm e = op_E(f, n);
                    c.expect(same(plus(op_H(e, n), op_E(op_H(f, n), n), Rat(-1)), plus(e, e)), "[H,E] = 2E" + at);
                    const WeightedForm fl = op_F(m, f);
                    c.expect(same(plus(op_H(fl, n), op_F(m, op_H(f, n)), Rat(-1)), plus(fl, fl, Rat(-3))),
                             "[H,F] = -2F" + at);
                    ++samples;
                }
    c.expect(samples >= 100, "only " + std::to_string(samples) + " samples");
}

void g1_identity(Criterion& c) {
    for (int n : {4, 6})
        for (const Rat& lambda : {Rat(0), Rat(1, 2)})
            for (const EinsteinModel& m : {einstein(n, lambda), lambda == Rat(0) ? make_flat_torus(n, 3) : make_round_sphere(n, 4)})
                for (std::size_t i = 0; i < m.scalar_modes.size(); ++i) {
                    const Rat& kappa = m.scalar_modes[i].kappa;
                    if (kappa.is_zero()) continue;
                    const ExactChannel e = exact_channel(m, ParamPoly(kappa), Rat(1), n + 2);
                    c.expect(e.g1 == e.scalar.l0 * Rat(n), "G1 d != n L0 at kappa=" + kappa.str());
                }
    for (int n : {4, 6}) {
        const ExactChannel e = exact_channel(einstein(n, Rat(1, 2)), mu, Rat(1), n + 2);
        c.expect(e.g1 == e.scalar.l0 * Rat(n), "symbolic kappa");
    }
}

void constants_consistent(Criterion& c) {
    std::vector<std::pair<EinsteinModel, BoundaryWeyl>> cases;
    for (int n : {4, 6, 8}) {
        cases.push_back({make_flat_torus(n, 1), exact(1, Rat(1))});
        cases.push_back({make_round_sphere(n, 1), coclosed(0, Rat(2))});
        for (const Rat& lambda : {Rat(-1), Rat(3, 7)}) cases.push_back({einstein(n, lambda), BoundaryWeyl{}});
    }
    for (const auto& [m, b] : cases) {
        const ExpansionReport r = expansion_report(m, b, m.n + 2);
        c.expect(r.constants_consistent(), "constants on " + m.tag);
        c.expect(Rat(m.n) * r.defining.s == r.defining.q01, "n s = Q_01 on " + m.tag);
        c.expect(r.defining.q_h == r.defining.s / q_curvature_constant(m.n), "Q_h = s/c_n on " + m.tag);
    }
}

void smooth_iff_zero(Criterion& c) {
    const EinsteinModel t4 = make_flat_torus(4, 2);
    const EinsteinModel s4 = make_round_sphere(4, 1);
    const InvariantReport harm = integral_invariant(t4, harmonic(0, Rat(1)), 6);
    c.expect(harm.smooth && harm.q_tractor.is_zero(), "torus, harmonic beta");
    const InvariantReport dphi = integral_invariant(t4, exact(1, Rat(1)), 6);
    c.expect(!dphi.smooth && !dphi.q_tractor.is_zero(), "torus, d phi: smooth");
    c.expect(dphi.invariant.str() == "0", "torus, d phi: invariant " + dphi.invariant.str());
    const InvariantReport s = integral_invariant(s4, BoundaryWeyl{}, 6);
    const SmoothnessVerdict v = smoothness_obstruction(s4, BoundaryWeyl{}, 6);
    c.expect(!s.smooth && !s.q_tractor.is_zero(), "S^4: smooth");
    c.expect(v.bottom.at(0).constant_mode && v.bottom.at(0).value == ParamPoly(Rat(-3, 2)), "S^4: bottom");

    const EinsteinModel t6 = make_flat_torus(6, 1);
    for (const auto& [m, b] : std::vector<std::pair<const EinsteinModel*, BoundaryWeyl>>{
             {&t4, coclosed(1, Rat(1))}, {&t4, BoundaryWeyl{}}, {&t6, harmonic(0, Rat(2))}, {&s4, coclosed(0, Rat(1))}}) {
        const InvariantReport r = integral_invariant(*m, b, m->n + 2);
        c.expect(r.smooth == r.q_tractor.is_zero(), "fixture on " + m->tag);
    }
}

void functional(Criterion& c) {
    const EinsteinModel t4 = make_flat_torus(4, 3);
    std::vector<BoundaryWeyl> family{BoundaryWeyl{}, harmonic(0, Rat(2)), exact(1, Rat(1))};
    std::vector<Rat> expected{Rat(0), Rat(0), Rat(0)};
    for (std::size_t i = 1; i < t4.coclosed_modes.size(); ++i) {
        family.push_back(coclosed(i, Rat(1, 3)));
        expected.push_back(Rat(2) * t4.coclosed_modes[i].mu.constant_value() * Rat(1, 9));
    }
    BoundaryWeyl mixed;
    mixed.coclosed_part = {{1, Rat(1)}, {2, Rat(-2)}};
    mixed.exact_part = {{2, Rat(5)}};
    family.push_back(mixed);
    expected.push_back(Rat(2) * (t4.coclosed_modes[1].mu.constant_value() + Rat(4) * t4.coclosed_modes[2].mu.constant_value()));

    const FunctionalReport fr = functional_report(t4, family, 6);
    for (std::size_t i = 0; i < family.size(); ++i)
        c.expect(fr.entries[i].second_term == expected[i], "second term " + std::to_string(i));
    c.expect(fr.all_nonnegative, "nonnegative");
    c.expect(fr.zero_iff_closed, "zero iff closed");

    for (int n : {4, 6, 8}) {
        const EinsteinModel s = make_round_sphere(n, 4);
        std::vector<BoundaryWeyl> fam{BoundaryWeyl{}, exact(1, Rat(1))};
        for (std::size_t i = 0; i < s.coclosed_modes.size(); ++i) fam.push_back(coclosed(i, Rat(1)));
        const FunctionalReport r = functional_report(s, fam, n + 2);
        c.expect(r.factor_check_applicable && r.all_factors_positive, "factor positivity on " + s.tag);
        c.expect(r.all_nonnegative && r.zero_iff_closed, "sphere functional on " + s.tag);
    }
}

void gauge_invariance(Criterion& c) {
    for (int n : {4, 6}) {
        const EinsteinModel t = make_flat_torus(n, 2);
        BoundaryWeyl b;
        b.exact_part = {{1, Rat(1)}, {2, Rat(-3, 2)}};
        b.coclosed_part = {{1, Rat(2)}};
        for (const Rat& h : {Rat(1), Rat(-7, 3), Rat(100)}) {
            BoundaryWeyl bh = b;
            bh.harmonic_part = {{0, h}, {0, Rat(1, 2)}};
            const SmoothnessVerdict v = smoothness_obstruction(t, b, n + 2);
            const SmoothnessVerdict vh = smoothness_obstruction(t, bh, n + 2);
            c.expect(nonzero_by_label(v.l1_beta) == nonzero_by_label(vh.l1_beta), "L1");
            c.expect(nonzero_by_label(v.bottom) == nonzero_by_label(vh.bottom), "G1");
            c.expect(v.smooth == vh.smooth, "verdict");
            c.expect(expansion_report(t, b, n + 2).defining.s == expansion_report(t, bh, n + 2).defining.s, "s");
            const CotractorTriple q = build_Q_tractor(t, b, n + 2);
            const CotractorTriple qh = build_Q_tractor(t, bh, n + 2);
            c.expect(nonzero_by_label(q.bottom) == nonzero_by_label(qh.bottom) &&
                         nonzero_by_label(q.middle) == nonzero_by_label(qh.middle) && q.top == qh.top,
                     "Q tractor");
        }
        const BoundaryWeyl pure = harmonic(0, Rat(5));
        c.expect(smoothness_obstruction(t, pure, n + 2).smooth == smoothness_obstruction(t, BoundaryWeyl{}, n + 2).smooth,
                 "harmonic only");
    }
}

void gauge_residuals_zero(Criterion& c) {
    for (int n : {4, 6, 8}) {
        for (const EinsteinModel& m : {make_flat_torus(n, 2), make_round_sphere(n, 2)}) {
            BoundaryWeyl b;
            b.exact_part = {{1, Rat(2)}, {2, Rat(-1, 3)}};
            b.coclosed_part = {{1, Rat(1)}};
            if (m.harmonic_rank > 0) b.harmonic_part = {{0, Rat(1)}};
            const GaugeResiduals r = gauge_residuals(m, b, n + 2);
            c.expect(r.all_zero(), "d* residual on " + m.tag);
            for (const auto& s : m.scalar_modes) {
                const RadialOperator op = scalar_operator(m, ParamPoly(s.kappa), n + 2);
                const FrobeniusSolution sol = solve_frobenius(op, LogSeries(n + 2), ParamPoly(1));
                c.expect(op.apply(sol.series).is_zero(), "scalar operator residual on " + m.tag);
            }
            for (const auto& k : m.coclosed_modes) {
                const RadialOperator op = coclosed_operator(m, k.mu, n + 2);
                const FrobeniusSolution sol = solve_frobenius(op, LogSeries(n + 2), ParamPoly(1));
                c.expect(op.apply(sol.series).is_zero(), "coclosed operator residual on " + m.tag);
            }
            const DefiningFunctionData df = log_defining_function(m, n + 2);
            const RadialOperator op0 = scalar_operator(m, ParamPoly(), n + 2);
            const WarpSeries ws(m.lambda, n + 2);
            const LogSeries rhs = scale(mul(ws.inv_w, LogSeries::monomial(n + 2, 2, ParamPoly(1))),
                                        ParamPoly(-Rat(n) * m.lambda));
            c.expect((op0.apply(df.solution.series) - rhs).is_zero(), "log defining function residual on " + m.tag);
        }
        const RadialOperator sym = coclosed_operator(einstein(n, Rat(1, 2)), mu, n + 2);
        c.expect(sym.apply(solve_frobenius(sym, LogSeries(n + 2), ParamPoly(1)).series).is_zero(), "symbolic residual");
    }
}

void rescale_invariance(Criterion& c) {
    std::vector<std::pair<EinsteinModel, BoundaryWeyl>> cases;
    {
        BoundaryWeyl b;
        b.exact_part = {{1, Rat(1)}};
        b.coclosed_part = {{1, Rat(1)}, {2, Rat(2, 5)}};
        b.harmonic_part = {{0, Rat(3)}};
        cases.push_back({make_flat_torus(4, 2), b});
        cases.push_back({make_flat_torus(6, 2), b});
    }
    for (int n : {4, 6}) {
        BoundaryWeyl b;
        b.exact_part = {{1, Rat(-2)}};
        b.coclosed_part = {{0, Rat(1)}};
        cases.push_back({make_round_sphere(n, 1), b});
        cases.push_back({make_round_sphere(n, 1), BoundaryWeyl{}});
    }
    for (const auto& [m, b] : cases)
        for (const Rat& t : {Rat(2), Rat(1, 3)}) {
            const RescaleCheck rc = rescale_constant(m, b, ConformalFactor::constant_scale(t), m.n + 2);
            c.expect(rc.metric_factor == t * t, "factor");
            c.expect(rc.transformed.invariant == rc.original.invariant,
                     "invariant on " + m.tag + " t=" + t.str());
            for (const auto& chk : rc.checks)
                c.expect(chk.pass, chk.name + " on " + m.tag + " t=" + t.str() + ": " + chk.lhs + " vs " + chk.rhs);
        }
}

void extension_independence(Criterion& c) {
    oracle::Gen g(99);
    for (int n : {6, 8})
        for (const Rat& lambda : {Rat(0), Rat(1, 2), Rat(-1)}) {
            const EinsteinModel m = einstein(n, lambda);
            const int order = n + 4;
            for (Channel ch : {Channel::coclosed, Channel::exact}) {
                const ParamPoly eigen = ch == Channel::coclosed ? mu : ParamPoly(Rat(g.integer(1, 5)));
                const WeightedForm a = extend_to_Adf(m, ch, eigen, Rat(1), order);
                const WeightedForm b = alternate_extension(m, ch, eigen, Rat(1), order);
                const std::string at = " at n=" + std::to_string(n) + " lambda=" + lambda.str();
                c.expect(certify(m, a).member && certify(m, b).member, "certificates" + at);
                c.expect(!a.tangential.agrees_with(b.tangential) || !a.normal.agrees_with(b.normal),
                         "extensions coincide" + at);
                c.expect(ladder_from_extension(m, a) == ladder_from_extension(m, b), "ladder values differ" + at);
            }
        }
    const EinsteinModel s6 = make_round_sphere(6, 1);
    BoundaryWeyl b;
    b.coclosed_part = {{0, Rat(3)}};
    b.exact_part = {{1, Rat(1)}};
    const auto rows = ladder_L1(s6, b, 8);
    c.expect(rows.size() == 2 && rows[0].value.is_zero() && rows[1].value == ParamPoly(Rat(-360, 16)), "ladder_L1 on S^6");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, Body>> criteria{
        {"1  Q-curvature of S^4: s = -3/8, Q_h = 6", q_curvature_s4},
        {"2  flat n=4: L0 = -kappa^2/16, L1 = mu/2", flat_obstructions},
        {"3  three-way L1 agreement, n in {4,6,8}, lambda in {0,1/2,-1}", three_way_l1},
        {"4  sl2 relations on >= 100 random weighted forms", sl2_relations},
        {"5  G1 d = n L0 per scalar mode", g1_identity},
        {"6  n s = Q_01 and Q_h = s/c_n in every expansion report", constants_consistent},
        {"7  smooth <=> Q tractor = 0", smooth_iff_zero},
        {"8  functional: n=4 second term 2 sum mu c^2, positive factors for lambda > 0", functional},
        {"9  harmonic part of beta changes nothing", gauge_invariance},
        {"10 gauge and Frobenius residuals vanish", gauge_residuals_zero},
        {"11 constant rescale by {4, 1/9}", rescale_invariance},
        {"12 ladder L1 independent of the extension, n in {6,8}", extension_independence},
    };
    int failures = 0;
    for (const auto& [name, body] : criteria) {
        Criterion c;
        try {
            body(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        std::cout << (c.ok ? "PASS  " : "FAIL  ") << name;
        if (!c.ok) std::cout << "  (" << c.why.str() << ")";
        std::cout << '\n';
        failures += c.ok ? 0 : 1;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size() << " criteria pass\n";
    return failures == 0 ? 0 : 1;
}
