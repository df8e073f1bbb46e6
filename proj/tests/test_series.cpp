#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "perfproj/series.hpp"

using namespace perfproj;

namespace {

const FieldModel cp{FieldKind::CharP, 2, 1, 3};
const FieldModel mx{FieldKind::MixedChar, 2, 1, 3};

TateSeries random_series(const SeriesShape& sh, std::mt19937_64& rng, int max_terms = 4) {
    TateSeries f(sh);
    int nt = 1 + (int)(rng() % max_terms);
    for (int t = 0; t < nt; ++t) {
        std::vector<long long> e(sh.nvars);
        for (int i = 0; i < sh.nvars; ++i) {
            long long lb = sh.laurent[i] ? -sh.window * sh.unit() : 0;
            e[i] = lb + (long long)(rng() % (3 * sh.unit() - lb + 1));
        }
        long long v = (long long)(rng() % sh.coeff.prec_scaled());
        f.insert(e, FieldElem::monomial(sh.coeff, v, 1 + (int)(rng() % (sh.p - 1))));
    }
    return f;
}

} // namespace

TEST_CASE("shape policy is enforced on insert") {
    SeriesShape disk = SeriesShape::disk(2, 2, 1, cp);
    TateSeries f(disk);
    CHECK_THROWS_AS(f.insert({-1, 0}, FieldElem::one(cp)), ShapeMismatch);
    CHECK_THROWS_AS(f.insert({0}, FieldElem::one(cp)), ShapeMismatch);
    SeriesShape lau = SeriesShape::laurent_all(1, 2, 1, 2, cp);
    TateSeries g(lau);
    g.insert({-4}, FieldElem::one(cp));  // -2 in unscaled units: at the window edge
    CHECK_THROWS_AS(g.insert({-5}, FieldElem::one(cp)), ShapeMismatch);
}

TEST_CASE("ring axioms on random untruncated instances") {
    std::mt19937_64 rng(11);
    for (auto mo : {cp, mx}) {
        SeriesShape sh = SeriesShape::disk(2, 2, 1, mo);
        for (int i = 0; i < 80; ++i) {
            TateSeries f = random_series(sh, rng), g = random_series(sh, rng),
                       h = random_series(sh, rng);
            CHECK((f + g).same_support_and_coeffs(g + f));
            CHECK((f * g).same_support_and_coeffs(g * f));
            CHECK(((f * g) * h).same_support_and_coeffs(f * (g * h)));
            CHECK((f * (g + h)).same_support_and_coeffs(f * g + f * h));
            CHECK((f - f).is_zero());
            CHECK_FALSE((f * g).truncated);
        }
    }
}

TEST_CASE("window clipping sets the sticky truncation flag") {
    SeriesShape lau = SeriesShape::laurent_all(1, 2, 0, 1, cp);
    TateSeries x_inv = TateSeries::monomial(lau, {-1}, FieldElem::one(cp));
    TateSeries prod = x_inv * x_inv;  // exponent -2 clips below the window
    CHECK(prod.truncated);
    CHECK(prod.is_zero());
    TateSeries carried = prod + TateSeries::one(lau);
    CHECK(carried.truncated);  // sticky through later operations
}

TEST_CASE("gauss norm is the min coefficient valuation and is multiplicative") {
    SeriesShape sh = SeriesShape::disk(1, 2, 1, cp);
    std::mt19937_64 rng(12);
    for (int i = 0; i < 100; ++i) {
        TateSeries f = random_series(sh, rng), g = random_series(sh, rng);
        auto nf = f.gauss_norm(), ng = g.gauss_norm();
        TateSeries prod = f * g;
        if (!nf || !ng || prod.truncated) continue;
        auto np = prod.gauss_norm();
        long long bound = (*nf + *ng).scaled(sh.coeff.k);
        if (np && bound < sh.coeff.prec_scaled()) CHECK(*np == *nf + *ng);
    }
}

TEST_CASE("normalization brings the gauss valuation to zero deterministically") {
    SeriesShape sh = SeriesShape::disk(1, 2, 1, cp);
    std::mt19937_64 rng(13);
    for (int i = 0; i < 100; ++i) {
        TateSeries f = random_series(sh, rng);
        if (f.is_zero()) continue;  // terms with equal exponents can cancel mod p
        auto [lambda, g] = f.normalize();
        REQUIRE(g.gauss_norm());
        CHECK(g.gauss_norm()->is_zero());
        auto [lambda2, g2] = f.normalize();
        CHECK(g.same_support_and_coeffs(g2));  // deterministic tie-break
    }
    CHECK_THROWS_AS(TateSeries::zero(sh).normalize(), ZeroSeries);
}

TEST_CASE("unit criterion: strict domination of the constant term") {
    SeriesShape sh = SeriesShape::disk(1, 2, 0, cp);
    TateSeries f = TateSeries::one(sh);
    f.insert({1}, FieldElem::monomial(cp, 1, 1));  // 1 + t^{1/2} X
    CHECK(f.unit_status() == UnitStatus::Unit);

    TateSeries x = TateSeries::variable(sh, 0);
    CHECK(x.unit_status() == UnitStatus::NotUnit);

    TateSeries tie = TateSeries::one(sh) + x;  // |f_1| = |f_0|
    CHECK(tie.unit_status() == UnitStatus::NotUnit);

    CHECK(TateSeries::zero(sh).unit_status() == UnitStatus::Unresolved);
    CHECK_THROWS_AS(TateSeries::zero(sh).is_unit(), UnresolvedAtPrecision);

    SeriesShape lau = SeriesShape::laurent_all(1, 2, 0, 1, cp);
    CHECK_THROWS_AS(TateSeries::one(lau).unit_status(), ShapeMismatch);
}

TEST_CASE("geometric inversion multiplies back to one") {
    std::mt19937_64 rng(14);
    for (auto mo : {cp, mx}) {
        SeriesShape sh = SeriesShape::disk(2, 2, 1, mo);
        for (int i = 0; i < 60; ++i) {
            TateSeries f = TateSeries::one(sh);
            int nt = 1 + (int)(rng() % 3);
            for (int t = 0; t < nt; ++t) {
                std::vector<long long> e{1 + (long long)(rng() % 4), (long long)(rng() % 3)};
                f.insert(e, FieldElem::monomial(mo, 1 + (long long)(rng() % 2),
                                                1 + (int)(rng() % (sh.p - 1))));
            }
            REQUIRE(f.unit_status() == UnitStatus::Unit);
            TateSeries g = f.invert();
            CHECK((f * g).same_support_and_coeffs(TateSeries::one(sh)));
        }
    }
    SeriesShape sh = SeriesShape::disk(1, 2, 0, cp);
    CHECK_THROWS_AS(TateSeries::variable(sh, 0).invert(), NotAUnit);
}

TEST_CASE("evaluation reads fractional powers off tilt components") {
    SeriesShape sh = SeriesShape::disk(1, 2, 1, mx);
    TateSeries f = TateSeries::variable(sh, 0, 1);  // X^{1/2}
    TiltElem tp = tilt_monomial(PAdicExp::integer(1, 2), mx, 2);
    FieldElem v = f.evaluate({tp});
    CHECK(v.digits == std::map<long long, int>{{1, 1}});  // p^{1/2}

    CHECK(TateSeries::one(sh).evaluate({tp}).eq_at_common_prec(FieldElem::one(mx)));

    TateSeries g = TateSeries::one(sh) + TateSeries::variable(sh, 0);  // 1 + X
    FieldElem w = g.evaluate({tp});
    CHECK(w.eq_at_common_prec(FieldElem::from_integer(mx, 3)));  // 1 + p

    TiltElem shallow;
    shallow.comp.push_back(FieldElem::from_integer(mx, 2));
    CHECK_THROWS_AS(f.evaluate({shallow}), DepthOverflow);
}

TEST_CASE("evaluation is a ring homomorphism") {
    SeriesShape sh = SeriesShape::disk(1, 2, 1, mx);
    std::mt19937_64 rng(15);
    for (int i = 0; i < 40; ++i) {
        TateSeries f = random_series(sh, rng, 3), g = random_series(sh, rng, 3);
        TiltElem x = tilt_monomial(PAdicExp::integer((long long)(rng() % 2 + 1), 2), mx, 2);
        CHECK(((f * g).evaluate({x})).eq_at_common_prec(f.evaluate({x}) * g.evaluate({x})));
        CHECK(((f + g).evaluate({x})).eq_at_common_prec(f.evaluate({x}) + g.evaluate({x})));
    }
}

TEST_CASE("termwise p-th root undoes Frobenius in characteristic p") {
    SeriesShape sh = SeriesShape::disk(2, 2, 2, cp);
    std::mt19937_64 rng(16);
    for (int i = 0; i < 40; ++i) {
        // coefficient valuations below m*unit/2 so no digit of f^2 falls off
        TateSeries f(sh);
        int nt = 1 + (int)(rng() % 3);
        for (int t = 0; t < nt; ++t)
            f.insert({(long long)(rng() % 9), (long long)(rng() % 9)},
                     FieldElem::monomial(cp, (long long)(rng() % 3), 1));
        TateSeries sq = f * f;
        if (sq.is_zero()) continue;
        CHECK(sq.root_p().same_support_and_coeffs(f));
    }
    SeriesShape shallow = SeriesShape::disk(1, 2, 0, cp);
    CHECK_THROWS_AS(TateSeries::variable(shallow, 0).root_p(), DepthOverflow);
}

TEST_CASE("homogeneous degree and residue") {
    SeriesShape sh = SeriesShape::disk(2, 2, 1, cp);
    TateSeries f(sh);
    f.insert({2, 0}, FieldElem::one(cp));
    f.insert({1, 1}, FieldElem::monomial(cp, 1, 1));
    CHECK(f.homogeneous_degree() == 2);
    f.insert({0, 1}, FieldElem::one(cp));
    CHECK_FALSE(f.homogeneous_degree().has_value());
    TateSeries r = f.residue();
    CHECK(r.terms.size() == 2);  // the t^{1/2} coefficient dies in the residue
}
