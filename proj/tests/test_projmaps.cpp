#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "perfproj/projmaps.hpp"

using namespace perfproj;

namespace {

const FieldModel cp{FieldKind::CharP, 2, 2, 3};
const FieldModel mx{FieldKind::MixedChar, 2, 2, 3};

LnDatum coordinate_datum(int n, int N, const FieldModel& mo) {
    SeriesShape sh = SeriesShape::disk(n + 1, mo.p, 2, mo);
    LnDatum D;
    D.m = n;
    D.n = n;
    D.N = N;
    D.d0 = PAdicExp::integer(1, mo.p);
    for (int i = 0; i + 1 < N; ++i) D.lambdas.push_back(FieldElem::one(mo));
    for (int i = 0; i < N; ++i) {
        D.sections.emplace_back();
        for (int j = 0; j <= n; ++j)
            D.sections.back().push_back(TateSeries::variable(sh, j, sh.unit() >> i));
    }
    return D;
}

LnDatum veronese_datum(int N = 3) {
    SeriesShape sh = SeriesShape::disk(2, 2, 2, cp);
    LnDatum D;
    D.m = 1;
    D.n = 2;
    D.N = N;
    D.d0 = PAdicExp::integer(2, 2);
    for (int i = 0; i + 1 < N; ++i) D.lambdas.push_back(FieldElem::one(cp));
    for (int i = 0; i < N; ++i) {
        long long u = sh.unit() >> i;
        D.sections.push_back({TateSeries::monomial(sh, {2 * u, 0}, FieldElem::one(cp)),
                              TateSeries::monomial(sh, {u, u}, FieldElem::one(cp)),
                              TateSeries::monomial(sh, {0, 2 * u}, FieldElem::one(cp))});
    }
    return D;
}

} // namespace

TEST_CASE("tower compatibility is an exact series identity") {
    CHECK(check_tower(coordinate_datum(1, 3, cp)));
    CHECK(check_tower(coordinate_datum(2, 2, mx)));
    CHECK(check_tower(veronese_datum()));

    // Frobenius makes (T0^{1/2} + T1^{1/2})^2 = T0 + T1 in char 2, not in mixed char
    for (auto mo : {cp, mx}) {
        SeriesShape sh = SeriesShape::disk(2, 2, 2, mo);
        LnDatum D;
        D.m = D.n = 1;
        D.N = 2;
        D.d0 = PAdicExp::integer(1, 2);
        D.lambdas.push_back(FieldElem::one(mo));
        TateSeries s0 = TateSeries::variable(sh, 0) + TateSeries::variable(sh, 1);
        TateSeries s0r = TateSeries::variable(sh, 0, 2) + TateSeries::variable(sh, 1, 2);
        D.sections.push_back({s0, TateSeries::variable(sh, 1)});
        D.sections.push_back({s0r, TateSeries::variable(sh, 1, 2)});
        CHECK(check_tower(D) == (mo.kind == FieldKind::CharP));
    }
}

TEST_CASE("nontrivial compatibility scalars are honored") {
    SeriesShape sh = SeriesShape::disk(2, 3, 1, FieldModel{FieldKind::CharP, 3, 1, 2});
    LnDatum D;
    D.m = D.n = 1;
    D.N = 2;
    D.d0 = PAdicExp::integer(1, 3);
    FieldElem lam = FieldElem::monomial(sh.coeff, 0, 2);
    D.lambdas.push_back(lam);
    // level 1 sections c*T_j^{1/3} with c^3 = lambda * 1
    FieldElem c = FieldElem::monomial(sh.coeff, 0, 2);  // 2^3 = 8 = 2 mod 3
    D.sections.push_back({TateSeries::variable(sh, 0, 3), TateSeries::variable(sh, 1, 3)});
    D.sections.push_back({TateSeries::variable(sh, 0, 1).scalar_mul(c),
                          TateSeries::variable(sh, 1, 1).scalar_mul(c)});
    CHECK(check_tower(D));
}

TEST_CASE("generation: certificates, refutations, and honest unknowns") {
    SeriesShape sh = SeriesShape::disk(2, 2, 0, FieldModel{FieldKind::CharP, 2, 0, 1});
    auto T0 = TateSeries::variable(sh, 0);
    auto T1 = TateSeries::variable(sh, 1);
    CHECK(check_generation({T0, T1}).status == GenStatus::Generates);

    auto zero_rep = check_generation({T0 * T1, T0 * T0});
    CHECK(zero_rep.status == GenStatus::CommonZero);
    CHECK(zero_rep.field_ext == 1);

    // a quartic with no zero over F_2 or F_4 and no monomial certificate
    TateSeries f = T0.pow(4) + T0 * T1.pow(3) + T1.pow(4);
    CHECK(check_generation({f}).status == GenStatus::Unknown);
}

TEST_CASE("coordinate datum builds the identity substitution") {
    LnDatum D = coordinate_datum(2, 2, cp);
    ProjectivoidMap M = build_map(D);
    for (int j = 0; j <= 2; ++j)
        for (int r = 0; r <= 2; ++r)
            for (int i = 0; i < 2; ++i) {
                REQUIRE(M.table[j][r][i].simplified);
                auto& s = *M.table[j][r][i].simplified;
                REQUIRE(s.terms.size() == 1);
                auto& e = s.terms.begin()->first;
                long long u = D.sections[0][0].shape.unit() >> i;
                CHECK(e[r] == (r == j ? 0 : u));
                CHECK(e[j] == (r == j ? 0 : -u));
            }
}

TEST_CASE("veronese datum: quotient simplification and gluing") {
    ProjectivoidMap M = build_map(veronese_datum());
    // gamma_0 on (X_1/X_0)^{1/p^i} is (T_1/T_0)^{1/p^i}
    for (int i = 0; i < 3; ++i) {
        REQUIRE(M.table[0][1][i].simplified);
        auto& s = *M.table[0][1][i].simplified;
        REQUIRE(s.terms.size() == 1);
        long long u = 4 >> i;
        CHECK(s.terms.begin()->first == std::vector<long long>{-u, u});
    }
}

TEST_CASE("datum failing the tower check is rejected") {
    LnDatum D = coordinate_datum(1, 3, cp);
    D.sections[1][0] = D.sections[1][0].scalar_mul(FieldElem::monomial(cp, 1, 1));
    CHECK_THROWS_AS(build_map(D), TowerInvalid);

    LnDatum Z = coordinate_datum(1, 2, cp);
    SeriesShape sh = Z.sections[0][0].shape;
    // sections T0*T1 and T0^2 share the zero [0:1]
    Z.d0 = PAdicExp::integer(2, 2);
    Z.sections[0] = {TateSeries::monomial(sh, {4, 4}, FieldElem::one(cp)),
                     TateSeries::monomial(sh, {8, 0}, FieldElem::one(cp))};
    Z.sections[1] = {TateSeries::monomial(sh, {2, 2}, FieldElem::one(cp)),
                     TateSeries::monomial(sh, {4, 0}, FieldElem::one(cp))};
    CHECK_THROWS_AS(build_map(Z), NotGenerating);
}

TEST_CASE("pullback classes: identity, veronese, and tower depth") {
    LnDatum I = coordinate_datum(1, 3, cp);
    ProjectivoidMap MI = build_map(I);
    CHECK(pullback_class(MI, I, PAdicExp(1, 1, 2)).degree == PAdicExp(1, 1, 2));
    CHECK(pullback_class(MI, I, PAdicExp::integer(1, 2)).degree == PAdicExp::integer(1, 2));

    LnDatum V = veronese_datum();
    ProjectivoidMap MV = build_map(V);
    CHECK(pullback_class(MV, V, PAdicExp::integer(1, 2)).degree == PAdicExp::integer(2, 2));
    CHECK(pullback_class(MV, V, PAdicExp(1, 1, 2)).degree == PAdicExp::integer(1, 2));
    CHECK(pullback_class(MV, V, PAdicExp(1, 2, 2)).degree == PAdicExp(1, 1, 2));
    CHECK_THROWS_AS(pullback_class(MV, V, PAdicExp(1, 3, 2)), DepthOverflow);
}

TEST_CASE("scalar-rescaled sections give the same simplified tables") {
    LnDatum V = veronese_datum();
    LnDatum W = V;
    // rescale the top level by the unit 1 + t and fix up its scalar
    FieldElem c = FieldElem::one(cp) + FieldElem::monomial(cp, 1, 1);
    for (auto& s : W.sections[2]) s = s.scalar_mul(c);
    W.lambdas[1] = W.lambdas[1] * c * c;
    ProjectivoidMap MV = build_map(V), MW = build_map(W);
    for (int i = 0; i < 3; ++i)
        CHECK(MW.table[0][1][i].simplified->same_support_and_coeffs(
            *MV.table[0][1][i].simplified));
}

TEST_CASE("tilt and untilt of monomial map data invert each other") {
    SeriesShape sh = SeriesShape::disk(2, 2, 2, cp);
    LnDatum D;
    D.m = D.n = 1;
    D.N = 1;
    D.d0 = PAdicExp::integer(1, 2);
    D.sections.push_back({TateSeries::monomial(sh, {4, 0}, FieldElem::monomial(cp, 2, 1)),
                          TateSeries::variable(sh, 1)});
    LnDatum tower = tilt_datum(D, mx, 2);
    CHECK(tower.N == 2);
    CHECK(check_tower(tower));
    // t^{1/2} digit transported to p^{1/2}
    CHECK(tower.sections[0][0].terms.begin()->second.digits ==
          std::map<long long, int>{{2, 1}});

    LnDatum back = untilt_datum(tower, cp);
    REQUIRE(back.N == 1);
    for (int j = 0; j <= 1; ++j)
        CHECK(back.sections[0][j].same_support_and_coeffs(D.sections[0][j]));

    LnDatum again = tilt_datum(back, mx, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j <= 1; ++j)
            CHECK(again.sections[i][j].same_support_and_coeffs(tower.sections[i][j]));
}

TEST_CASE("non-liftable coefficients are refused") {
    SeriesShape msh = SeriesShape::disk(2, 2, 2, mx);
    LnDatum T;
    T.m = T.n = 1;
    T.N = 1;
    T.d0 = PAdicExp::integer(1, 2);
    T.sections.push_back({TateSeries::monomial(msh, {4, 0}, FieldElem::from_integer(mx, 3)),
                          TateSeries::variable(msh, 1)});
    CHECK_THROWS_AS(untilt_datum(T, cp), NotSharpLiftable);

    SeriesShape csh = SeriesShape::disk(2, 2, 2, cp);
    LnDatum P;
    P.m = P.n = 1;
    P.N = 1;
    P.d0 = PAdicExp::integer(1, 2);
    TateSeries twoterm = TateSeries::variable(csh, 0) +
                         TateSeries::monomial(csh, {4, 0}, FieldElem::monomial(cp, 1, 1));
    P.sections.push_back({twoterm, TateSeries::variable(csh, 1)});
    CHECK_THROWS_AS(tilt_datum(P, mx, 2), NotSharpLiftable);
}
