#include "oracles.hpp"
#include "weylq/sl2_ladder.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>

using namespace weylq;

namespace {

EinsteinModel einstein(int n, const Rat& lambda) {
    EinsteinModel m;
    m.n = n;
    m.lambda = lambda;
    m.scalar_modes = {{Rat(0), 1, false}};
    return m;
}

const ParamPoly mu = ParamPoly::mu();

WeightedForm sum(const WeightedForm& a, const WeightedForm& b, const Rat& cb = Rat(1)) {
    WeightedForm r = a;
    r.tangential = a.tangential + scale(b.tangential, ParamPoly(cb));
    r.normal = a.normal + scale(b.normal, ParamPoly(cb));
    return r;
}

bool same(const WeightedForm& a, const WeightedForm& b) {
    return a.weight == b.weight && a.tangential.agrees_with(b.tangential) && a.normal.agrees_with(b.normal);
}

/// Random element of 𝒜[w]: even series, normal part starting at the
/// x^{-w+2} power on the exact channel.
WeightedForm random_form(oracle::Gen& g, int n, int w, Channel ch, const ParamPoly& eigen, int order) {
    WeightedForm f{w, ch, eigen, g.series(order, true, false, ch == Channel::coclosed), LogSeries(order)};
    if (ch == Channel::exact) {
        f.normal = g.series(order, true, false);
        if (w >= -n + 2) f.normal.set_a(0, ParamPoly());
    }
    return f;
}

/// Certified 𝒜_df[w] element on the exact channel: random tangential part,
/// normal part solved from the divergence.
WeightedForm random_df_form(oracle::Gen& g, const EinsteinModel& m, int w, const ParamPoly& kappa, int order) {
    WeightedForm f{w, Channel::exact, kappa, g.series(order, true, false), LogSeries(order)};
    const WarpSeries ws(m.lambda, order);
    f.normal = hodge::solve_normal_for_divergence(ws, m.n, kappa, f.tangential, LogSeries(order), f.frame(m.n), m.n);
    return f;
}

}  // namespace

TEST_CASE("E and H act by scalars with the right weights") {
    const int n = 4;
    WeightedForm f{0, Channel::coclosed, mu, LogSeries::constant(6, ParamPoly(1)), LogSeries(6)};
    const WeightedForm e = op_E(f, n);
    CHECK(e.weight == 2);
    // E scales the form by -1/4; the stored series moves to the x^{-2} frame.
    CHECK(e.tangential == LogSeries::monomial(6, 2, ParamPoly(Rat(-1, 4))));
    CHECK(e.restriction(n).is_zero());
    const WeightedForm e2 = op_E(e, n);
    CHECK(e2.weight == 4);
    CHECK(e2.tangential.a(4) == ParamPoly(Rat(1, 16)));
    CHECK(op_H(f, n).tangential.a(0) == ParamPoly(Rat(2)));
    WeightedForm k = f;
    k.weight = -2;
    CHECK(op_H(k, n).tangential.is_zero());
    WeightedForm zero{0, Channel::coclosed, mu, LogSeries(6), LogSeries(6)};
    CHECK(op_E(zero, n).tangential.is_zero());
    CHECK(op_F(einstein(4, Rat(1, 2)), zero).tangential.is_zero());
}

TEST_CASE("sl2 relations hold exactly on random weighted forms") {
    oracle::Gen g(31415);
    int samples = 0;
    for (int n : {4, 6, 8})
        for (int w = -6; w <= 6; w += 2)
            for (Channel ch : {Channel::coclosed, Channel::exact})
                for (int rep = 0; rep < 3; ++rep) {
                    const EinsteinModel m = einstein(n, g.rat());
                    const ParamPoly eigen = ch == Channel::coclosed ? (g.coin() ? mu : ParamPoly(g.rat()))
                                                                    : ParamPoly(Rat(g.integer(1, 9)));
                    const WeightedForm f = random_form(g, n, w, ch, eigen, n + 8);
                    const WeightedForm ef = sum(op_E(op_F(m, f), n), op_F(m, op_E(f, n)), Rat(-1));
                    CHECK(same(ef, op_H(f, n)));
                    const WeightedForm he = sum(op_H(op_E(f, n), n), op_E(op_H(f, n), n), Rat(-1));
                    CHECK(same(he, sum(op_E(f, n), op_E(f, n))));
                    const WeightedForm hf = sum(op_H(op_F(m, f), n), op_F(m, op_H(f, n)), Rat(-1));
                    const WeightedForm ff = op_F(m, f);
                    CHECK(same(hf, sum(ff, ff, Rat(-3))));
                    CHECK(op_F(m, f).weight == w - 2);
                    CHECK(op_E(f, n).weight == w + 2);
                    ++samples;
                }
    CHECK(samples >= 100);
}

TEST_CASE("product rule F(y^w alpha) = (mu - 2 lambda w(w-n+3)) y^{w+2} alpha") {
    for (int n : {4, 6, 8})
        for (const Rat& lambda : {Rat(0), Rat(1, 2), Rat(-1), Rat(2, 3)}) {
            const EinsteinModel m = einstein(n, lambda);
            const int order = n + 6;
            const LogSeries warp = LogSeries::polynomial(order, {Rat(1), Rat(0), -lambda / Rat(2)});
            for (int w = 0; w <= n - 2; w += 2) {
                // y^w = x^w (1 - λx²/2)^{-w}: weight -w, frame x^w.
                WeightedForm f{-w, Channel::coclosed, mu, power(warp, -w), LogSeries(order)};
                const WeightedForm out = op_F(m, f);
                const ParamPoly factor = mu - ParamPoly(Rat(2 * w * (w - n + 3)) * lambda);
                CHECK(out.weight == -w - 2);
                CHECK(out.tangential.agrees_with(scale(power(warp, -(w + 2)), factor)));
            }
        }
}

TEST_CASE("n = 6: F^2 of the y^0 extension is mu(mu + 4 lambda) y^4") {
    for (const Rat& lambda : {Rat(1, 2), Rat(-3), Rat(5, 7)}) {
        const EinsteinModel m = einstein(6, lambda);
        const LogSeries warp = LogSeries::polynomial(12, {Rat(1), Rat(0), -lambda / Rat(2)});
        WeightedForm f{0, Channel::coclosed, mu, LogSeries::constant(12, ParamPoly(1)), LogSeries(12)};
        const WeightedForm out = op_F(m, op_F(m, f));
        CHECK(out.weight == -4);
        CHECK(out.tangential.agrees_with(scale(power(warp, -4), mu * (mu + ParamPoly(Rat(4) * lambda)))));
    }
}

TEST_CASE("extensions to A_df[0]") {
    SECTION("coclosed mode, coefficient 1: tangential 1, zero residual") {
        const EinsteinModel m = einstein(6, Rat(1, 2));
        const WeightedForm f = extend_to_Adf(m, Channel::coclosed, mu, Rat(1), 8);
        CHECK(f.tangential == LogSeries::constant(8, ParamPoly(1)));
        const DivergenceCertificate c = certify(m, f);
        CHECK(c.member);
        CHECK(c.residual.is_zero());
    }
    SECTION("exact mode kappa = 1, n = 4, flat: tangential 1 - x^2/4, certified to O(x^4)") {
        const EinsteinModel m = einstein(4, Rat(0));
        const WeightedForm f = extend_to_Adf(m, Channel::exact, ParamPoly(Rat(1)), Rat(1), 6);
        CHECK(f.tangential == LogSeries::polynomial(6, {Rat(1), Rat(0), Rat(-1, 4)}));
        const DivergenceCertificate c = certify(m, f);
        CHECK(c.member);
        CHECK(c.order_bound == 4);
        for (int k = 0; k < 4; ++k) CHECK(c.residual.a(k).is_zero());
    }
    SECTION("an uncorrected normal part fails the certificate") {
        const EinsteinModel m = einstein(4, Rat(0));
        WeightedForm f = extend_to_Adf(m, Channel::exact, ParamPoly(Rat(1)), Rat(1), 6);
        f.normal = LogSeries(6);
        CHECK_FALSE(certify(m, f).member);
    }
}

TEST_CASE("F keeps the divergence certificate") {
    oracle::Gen g(2718);
    for (int n : {4, 6, 8})
        for (int rep = 0; rep < 4; ++rep) {
            const EinsteinModel m = einstein(n, g.rat());
            const ParamPoly kappa(Rat(g.integer(1, 6)));
            for (int w : {0, -2}) {
                const WeightedForm f = random_df_form(g, m, w, kappa, n + 8);
                REQUIRE(certify(m, f).member);
                const DivergenceCertificate c = certify(m, op_F(m, f));
                for (int k = 0; k < std::min(c.order_bound, c.residual.order() + 1); ++k)
                    CHECK(c.residual.a(k).is_zero());
            }
        }
}

TEST_CASE("three-way agreement of L1") {
    for (int n : {4, 6, 8})
        for (const Rat& lambda : {Rat(0), Rat(1, 2), Rat(-1)}) {
            const EinsteinModel m = einstein(n, lambda);
            const ParamPoly ladder = ladder_eigenvalue(m, Channel::coclosed, mu, n + 2);
            CHECK(ladder == product_formula_L1(m, mu));
            CHECK(ladder == oracle::explicit_l1(n, lambda));
            CHECK(ladder_eigenvalue(m, Channel::exact, mu, n + 2).is_zero());
        }
    CHECK(product_formula_L1(4, Rat(3), mu) == mu * Rat(1, 2));
    CHECK(product_formula_L1(8, Rat(0), mu) == mu * mu * mu * Rat(1, 384));
    CHECK(ladder_constant(4) == Rat(2));
    CHECK(ladder_constant(6) == Rat(-16));
    CHECK(ladder_constant(8) == Rat(384));
    CHECK(ladder_eigenvalue(einstein(6, Rat(1, 2)), Channel::coclosed, ParamPoly(), 8).is_zero());
}

TEST_CASE("ladder L1 per component of beta") {
    const EinsteinModel s = make_round_sphere(6, 1);
    BoundaryWeyl b;
    b.exact_part = {{1, Rat(2)}};
    b.coclosed_part = {{0, Rat(3)}};
    const auto rows = ladder_L1(s, b, 8);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].value.is_zero());
    // μ = 2·5 = 10 on S^6, λ = 1/2: L1 = -10·12/16.
    CHECK(rows[1].eigenvalue == ParamPoly(Rat(-120, 16)));
    CHECK(rows[1].value == ParamPoly(Rat(-360, 16)));
}

TEST_CASE("extension independence of the ladder value") {
    oracle::Gen g(1618);
    for (int n : {6, 8})
        for (const Rat& lambda : {Rat(1, 2), Rat(-1), Rat(0)}) {
            const EinsteinModel m = einstein(n, lambda);
            const int order = n + 4;
            for (Channel ch : {Channel::coclosed, Channel::exact}) {
                const ParamPoly eigen = ch == Channel::coclosed ? mu : ParamPoly(Rat(g.integer(1, 5)));
                const WeightedForm base = extend_to_Adf(m, ch, eigen, Rat(1), order);
                const ParamPoly reference = ladder_from_extension(m, base);
                CHECK(reference == ladder_from_extension(m, alternate_extension(m, ch, eigen, Rat(1), order)));
                // base + E(ζ) for random certified ζ ∈ 𝒜_df[-2].
                for (int rep = 0; rep < 3; ++rep) {
                    WeightedForm zeta{-2, ch, eigen, g.series(order, true, false), LogSeries(order)};
                    if (ch == Channel::exact) zeta = random_df_form(g, m, -2, eigen, order);
                    const WeightedForm other = sum(base, op_E(zeta, n));
                    CHECK(certify(m, other).member);
                    CHECK(ladder_from_extension(m, other) == reference);
                }
            }
        }
}

TEST_CASE("ladder identity F^k E^k xi = (k!)^2 xi on restrictions") {
    oracle::Gen g(577);
    for (int n : {6, 8})
        for (Channel ch : {Channel::coclosed, Channel::exact})
            for (int rep = 0; rep < 4; ++rep) {
                const EinsteinModel m = einstein(n, g.rat());
                const int k = n / 2 - 2;
                const ParamPoly eigen = ch == Channel::coclosed ? mu : ParamPoly(Rat(g.integer(1, 5)));
                WeightedForm xi = random_form(g, n, -n + 2, ch, eigen, n + 6);
                REQUIRE(xi.in_A(n));
                WeightedForm f = xi;
                for (int i = 0; i < k; ++i) f = op_E(f, n);
                for (int i = 0; i < k; ++i) f = op_F(m, f);
                CHECK(f.weight == -n + 2);
                CHECK(f.restriction(n) == xi.restriction(n) * (factorial(k) * factorial(k)));
            }
}

TEST_CASE("ladder step factors and consecutive-index factors agree as multisets") {
    for (int n : {6, 8, 10})
        for (const Rat& lambda : {Rat(1, 2), Rat(-1), Rat(3)}) {
            std::vector<ParamPoly> steps = ladder_factors(n, lambda, mu);
            std::vector<ParamPoly> index;
            for (int w = 0; w <= n / 2 - 2; ++w) index.push_back(mu - ParamPoly(Rat(2 * w * (w - n + 3)) * lambda));
            REQUIRE(steps.size() == index.size());
            for (const auto& f : steps) {
                auto it = std::find(index.begin(), index.end(), f);
                REQUIRE(it != index.end());
                index.erase(it);
            }
            CHECK(index.empty());
        }
}
