#include <catch_amalgamated.hpp>

#include <random>

#include "oddsym/superpoly.hpp"

using namespace oddsym;

namespace {

constexpr int M = 6;

SuperPolynomial coord(const SystemPtr& s, const std::string& n) {
    return SuperPolynomial::coordinate(s, n);
}

SuperNumber gen(int i) { return SuperNumber::generator(M, i); }

SuperPolynomial random_poly(const SystemPtr& sys, std::mt19937_64& rng, int max_degree,
                            Parity parity) {
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> den(1, 3);
    std::uniform_int_distribution<int> exp(0, max_degree);
    std::uniform_int_distribution<std::uint32_t> genmask(0, (1u << M) - 1);
    SuperPolynomial p = SuperPolynomial::zero(sys);
    int want = parity_bit(parity);
    for (int t = 0; t < 4; ++t) {
        SuperPolynomial term = SuperPolynomial::zero(sys);
        int deg_budget = max_degree;
        Monomial m;
        std::uint32_t omask = 0;
        for (int j = 0; j < sys->odd_count(); ++j)
            if (rng() & 1 && std::popcount(omask) < deg_budget) omask |= 1u << j;
        int odd_deg = std::popcount(omask);
        std::uint32_t gm = genmask(rng);
        if (((std::popcount(gm) + odd_deg) & 1) != want) {
            gm ^= 1u; // flip one generator to fix the parity
        }
        SuperPolynomial piece =
            SuperPolynomial::constant(sys, SuperNumber::monomial(M, gm, Rational(num(rng), den(rng))));
        for (int i = 0; i < sys->even_count(); ++i) {
            int e = exp(rng) % (deg_budget - odd_deg + 1);
            deg_budget -= e;
            for (int k = 0; k < e; ++k) piece = piece * coord(sys, sys->even_names[i]);
        }
        for (int j = 0; j < sys->odd_count(); ++j)
            if (omask & (1u << j)) piece = piece * coord(sys, sys->odd_names[j]);
        p += piece;
    }
    return p;
}

LambdaPoint random_point(const SystemPtr& sys, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-3, 3);
    std::vector<SuperNumber> vals;
    for (int i = 0; i < sys->size(); ++i) {
        SuperNumber v(M);
        if (sys->parity_of(i) == Parity::Even) {
            v += SuperNumber::scalar(M, Rational(num(rng)));
            v += SuperNumber::monomial(M, 0b11 << (rng() % 3), Rational(num(rng)));
        } else {
            v += SuperNumber::monomial(M, 1u << (rng() % M), Rational(num(rng)));
        }
        vals.push_back(v);
    }
    return LambdaPoint(sys, std::move(vals));
}

} // namespace

TEST_CASE("left partials of simple monomials") {
    auto sys = make_superspace(1, M);
    auto x = coord(sys, "x1");
    auto th = coord(sys, "th1");

    CHECK((x * th).left_partial("th1") == x);
    CHECK((x * x * th).left_partial("x1") == Rational(2) * (x * th));
    CHECK(x.left_partial("th1").is_zero());
}

TEST_CASE("left partial anticommutes across earlier odd factors") {
    auto sys = make_superspace(2, M);
    auto th1 = coord(sys, "th1");
    auto th2 = coord(sys, "th2");

    // th2*th1 = -th1*th2, so d/dth1 gives -th2
    CHECK((th2 * th1).left_partial("th1") == -th2);
    CHECK((th1 * th2).left_partial("th1") == th2);
}

TEST_CASE("left partial crosses the coefficient's generators") {
    auto sys = make_superspace(1, M);
    auto th = coord(sys, "th1");
    SuperPolynomial f = SuperPolynomial::constant(sys, gen(0)) * th; // g1*th1
    CHECK(f.left_partial("th1") == SuperPolynomial::constant(sys, -gen(0)));
}

TEST_CASE("odd coordinates square to zero and anticommute with generators") {
    auto sys = make_superspace(2, M);
    auto th1 = coord(sys, "th1");
    CHECK((th1 * th1).is_zero());
    SuperPolynomial g1 = SuperPolynomial::constant(sys, gen(0));
    CHECK(th1 * g1 == -(g1 * th1));
}

TEST_CASE("parity classification") {
    auto sys = make_superspace(1, M);
    auto x = coord(sys, "x1");
    auto th = coord(sys, "th1");
    CHECK((x * th).parity_of() == Parity::Odd);
    CHECK((x + th).parity_of() == Parity::Mixed);
    CHECK(x.pow(3).parity_of() == Parity::Even);
    CHECK(SuperPolynomial::zero(sys).parity_of() == Parity::Even);
    // an odd coefficient makes an even-looking monomial odd
    CHECK((SuperPolynomial::constant(sys, gen(0)) * x).parity_of() == Parity::Odd);
}

TEST_CASE("substitution is a parity-checked ring homomorphism") {
    auto sys = make_superspace(1, M);
    auto x = coord(sys, "x1");
    auto th = coord(sys, "th1");

    SECTION("shear with an odd constant") {
        // x -> x, th -> th + g1*x : x*th -> x*th + g1*x^2
        std::vector<SuperPolynomial> images = {
            x, th + SuperPolynomial::constant(sys, gen(0)) * x};
        SuperPolynomial out = (x * th).substitute(images);
        SuperPolynomial want = x * th + SuperPolynomial::constant(sys, gen(0)) * x * x;
        CHECK(out == want);
    }
    SECTION("identity substitution") {
        std::vector<SuperPolynomial> images = {x, th};
        SuperPolynomial f = x * th + x.pow(2);
        CHECK(f.substitute(images) == f);
    }
    SECTION("odd coordinate mapped to even expression is rejected") {
        std::vector<SuperPolynomial> images = {x, x};
        CHECK_THROWS_MATCHES((x * th).substitute(images), Error,
                             Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.kind() == ErrorKind::ParityViolation;
                             }));
    }
}

TEST_CASE("evaluation at Lambda-points") {
    auto sys = make_superspace(1, M);
    auto x = coord(sys, "x1");
    auto th = coord(sys, "th1");

    LambdaPoint p(sys, {SuperNumber::scalar(M, 2), gen(0)});
    CHECK((x * th).evaluate(p) == SuperNumber::scalar(M, 2) * gen(0));

    auto sys2 = make_superspace(2, M);
    LambdaPoint q(sys2, {SuperNumber(M), SuperNumber(M), gen(0), gen(0)});
    auto f = coord(sys2, "th1") * coord(sys2, "th2");
    CHECK(f.evaluate(q).is_zero());

    SuperNumber u = SuperNumber::scalar(M, 1) + gen(0) * gen(1);
    LambdaPoint r(sys, {u, SuperNumber(M)});
    CHECK(x.pow(2).evaluate(r) == SuperNumber::scalar(M, 1) + Rational(2) * (gen(0) * gen(1)));
}

TEST_CASE("evaluation respects point parity constraints") {
    auto sys = make_superspace(1, M);
    CHECK_THROWS_AS(LambdaPoint(sys, {gen(0), gen(1)}), Error); // odd value on even coord
}

TEST_CASE("super-Leibniz rule on random instances") {
    auto sys = make_superspace(2, M);
    std::mt19937_64 rng(424242);
    for (int it = 0; it < 60; ++it) {
        Parity pf = (rng() & 1) ? Parity::Odd : Parity::Even;
        Parity pg = (rng() & 1) ? Parity::Odd : Parity::Even;
        SuperPolynomial f = random_poly(sys, rng, 2, pf);
        SuperPolynomial g = random_poly(sys, rng, 2, pg);
        for (int v = 0; v < sys->size(); ++v) {
            SuperPolynomial lhs = (f * g).left_partial(v);
            SuperPolynomial rhs = f.left_partial(v) * g;
            SuperPolynomial cross = f * g.left_partial(v);
            if (parity_bit(sys->parity_of(v)) && parity_bit(pf)) cross = -cross;
            rhs += cross;
            REQUIRE(lhs == rhs);
        }
    }
}

TEST_CASE("partials graded-commute") {
    auto sys = make_superspace(2, M);
    std::mt19937_64 rng(7);
    for (int it = 0; it < 40; ++it) {
        SuperPolynomial f = random_poly(sys, rng, 3, (rng() & 1) ? Parity::Odd : Parity::Even);
        for (int u = 0; u < sys->size(); ++u) {
            CHECK(f.left_partial(u).left_partial(u).is_zero() ==
                  (sys->parity_of(u) == Parity::Odd ? true
                                                    : f.left_partial(u).left_partial(u).is_zero()));
            for (int v = 0; v < sys->size(); ++v) {
                SuperPolynomial lhs = f.left_partial(v).left_partial(u);
                SuperPolynomial rhs = f.left_partial(u).left_partial(v);
                if (parity_bit(sys->parity_of(u)) && parity_bit(sys->parity_of(v))) rhs = -rhs;
                REQUIRE(lhs == rhs);
            }
        }
    }
}

TEST_CASE("evaluate after substitute equals evaluate at the pushed point") {
    auto sys = make_superspace(2, M);
    std::mt19937_64 rng(321);
    for (int it = 0; it < 40; ++it) {
        SuperPolynomial f = random_poly(sys, rng, 2, (rng() & 1) ? Parity::Odd : Parity::Even);
        std::vector<SuperPolynomial> images;
        for (int i = 0; i < sys->size(); ++i)
            images.push_back(random_poly(sys, rng, 2, sys->parity_of(i)));
        LambdaPoint pt = random_point(sys, rng);
        std::vector<SuperNumber> pushed;
        for (const auto& im : images) pushed.push_back(im.evaluate(pt));
        LambdaPoint pushed_pt(sys, std::move(pushed));
        REQUIRE(f.substitute(images).evaluate(pt) == f.evaluate(pushed_pt));
    }
}

TEST_CASE("nilpotency and nondegeneracy predicates") {
    auto sys = make_superspace(1, M);
    auto x = coord(sys, "x1");
    auto th = coord(sys, "th1");
    CHECK(!x.is_nilpotent());
    CHECK(th.is_nilpotent());
    CHECK((SuperPolynomial::constant(sys, gen(0) * gen(1))).is_nilpotent());

    VectorField psi = VectorField::zero(sys, Parity::Odd);
    psi.components[1] = SuperPolynomial::constant(sys, gen(0) * gen(1)); // nilpotent coefficient
    CHECK(!is_nondegenerate(psi));
    psi.components[1] = x;
    CHECK(is_nondegenerate(psi));
}

TEST_CASE("vector field parity validation") {
    auto sys = make_superspace(1, M);
    VectorField f = VectorField::zero(sys, Parity::Odd);
    f.components[0] = coord(sys, "x1"); // even component along even coord in an odd field
    CHECK_THROWS_AS(f.validate(), Error);
    f.components[0] = coord(sys, "th1");
    CHECK_NOTHROW(f.validate());
}

TEST_CASE("exact inverse of unit-plus-nilpotent polynomials") {
    auto sys = make_superspace(1, M);
    auto x = coord(sys, "x1");
    auto th = coord(sys, "th1");
    SuperPolynomial rho = SuperPolynomial::constant(sys, Rational(1)) +
                          SuperPolynomial::constant(sys, gen(0)) * th;
    SuperPolynomial inv = rho.inverse_exact();
    CHECK(rho * inv == SuperPolynomial::constant(sys, Rational(1)));

    CHECK_THROWS_MATCHES((SuperPolynomial::constant(sys, Rational(1)) + x).inverse_exact(), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == ErrorKind::NotNilpotent;
                         }));

    // truncated inverse handles even-coordinate tails
    SuperPolynomial u = SuperPolynomial::constant(sys, Rational(1)) + x;
    SuperPolynomial tinv = u.inverse_truncated(4);
    CHECK((u * tinv).truncate(4) == SuperPolynomial::constant(sys, Rational(1)));
}
