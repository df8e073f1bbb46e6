#pragma once

#include <string>

#include <json.hpp>

#include "perfproj/picard.hpp"
#include "perfproj/projmaps.hpp"
#include "perfproj/projmod.hpp"
#include "perfproj/series.hpp"

namespace perfproj {

using nlohmann::json;

inline json exp_to_json(const PAdicExp& e) { return e.str(); }

inline PAdicExp exp_from_json(const json& j, int p) {
    if (j.is_number_integer()) return PAdicExp::integer(j.get<long long>(), p);
    if (!j.is_string()) throw ParseError("exponent must be a string or integer");
    return PAdicExp::parse(j.get<std::string>(), p);
}

inline json field_model_to_json(const FieldModel& mo) {
    return json{{"kind", mo.kind == FieldKind::CharP ? "charp" : "mixed"},
                {"p", mo.p},
                {"depth", mo.k},
                {"precision", mo.m}};
}

inline FieldModel field_model_from_json(const json& j) {
    FieldModel mo;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "charp") mo.kind = FieldKind::CharP;
    else if (kind == "mixed") mo.kind = FieldKind::MixedChar;
    else throw ParseError("unknown field kind: " + kind);
    mo.p = j.at("p").get<int>();
    mo.k = j.at("depth").get<int>();
    mo.m = j.at("precision").get<int>();
    return mo;
}

/// CharP elements serialize as digit lists; MixedChar as the u-polynomial
/// {coeffs: [c_0..c_{p^k-1}], mod: "p^m"} with c_r = sum digit * p^q over
/// digits at u-exponent q*p^k + r.
inline json field_to_json(const FieldElem& x) {
    if (x.model.kind == FieldKind::CharP) {
        json terms = json::array();
        for (auto& [e, d] : x.digits)
            terms.push_back({{"exp", PAdicExp::from_scaled(e, x.model.k, x.model.p).str()},
                             {"digit", d}});
        return terms;
    }
    long long unit = x.model.unit();
    std::vector<long long> coeffs(unit, 0);
    for (auto& [e, d] : x.digits) {
        if (e < 0) throw ParseError("coefficient-vector encoding needs an integral element");
        coeffs[e % unit] += (long long)d * ipow(x.model.p, (int)(e / unit));
    }
    return json{{"coeffs", coeffs},
                {"mod", std::to_string(x.model.p) + "^" + std::to_string(x.model.m)}};
}

inline FieldElem field_from_json(const json& j, const FieldModel& mo) {
    if (mo.kind == FieldKind::CharP) {
        if (!j.is_array()) throw ParseError("CharP element must be a digit list");
        std::map<long long, long long> raw;
        for (auto& t : j)
            raw[exp_from_json(t.at("exp"), mo.p).scaled(mo.k)] += t.at("digit").get<long long>();
        return FieldElem::canonical(mo, raw, mo.prec_scaled());
    }
    if (!j.is_object() || !j.contains("coeffs"))
        throw ParseError("MixedChar element must be {coeffs, mod}");
    auto coeffs = j.at("coeffs").get<std::vector<long long>>();
    if ((long long)coeffs.size() != mo.unit())
        throw ParseError("coefficient vector length must be p^depth");
    std::map<long long, long long> raw;
    for (size_t r = 0; r < coeffs.size(); ++r) {
        long long c = coeffs[r];
        long long q = 0;
        while (c != 0) {
            raw[q * mo.unit() + (long long)r] += c % mo.p;
            c /= mo.p;
            ++q;
        }
    }
    return FieldElem::canonical(mo, raw, mo.prec_scaled());
}

inline json shape_to_json(const SeriesShape& sh) {
    return json{{"vars", sh.nvars},
                {"depth", sh.k},
                {"window", sh.window},
                {"signs", sh.laurent},
                {"coeff", field_model_to_json(sh.coeff)}};
}

inline SeriesShape shape_from_json(const json& j) {
    SeriesShape sh;
    sh.nvars = j.at("vars").get<int>();
    sh.k = j.at("depth").get<int>();
    sh.window = j.value("window", 0);
    sh.coeff = field_model_from_json(j.at("coeff"));
    sh.p = sh.coeff.p;
    if (j.contains("signs")) sh.laurent = j.at("signs").get<std::vector<bool>>();
    else sh.laurent.assign(sh.nvars, sh.window > 0);
    if ((int)sh.laurent.size() != sh.nvars) throw ParseError("signs arity mismatch");
    return sh;
}

inline json series_to_json(const TateSeries& f) {
    json terms = json::array();
    for (auto& [e, c] : f.terms) {
        json exps = json::array();
        for (long long a : e) exps.push_back(PAdicExp::from_scaled(a, f.shape.k, f.shape.p).str());
        terms.push_back({{"exp", exps}, {"coeff", field_to_json(c)}});
    }
    json out = shape_to_json(f.shape);
    out["terms"] = terms;
    if (f.truncated) out["truncated"] = true;
    return out;
}

inline TateSeries series_terms_from_json(const json& terms, const SeriesShape& sh) {
    TateSeries f(sh);
    for (auto& t : terms) {
        std::vector<long long> e;
        for (auto& a : t.at("exp")) e.push_back(exp_from_json(a, sh.p).scaled(sh.k));
        f.insert(std::move(e), field_from_json(t.at("coeff"), sh.coeff));
    }
    return f;
}

inline TateSeries series_from_json(const json& j) {
    SeriesShape sh = shape_from_json(j);
    return series_terms_from_json(j.at("terms"), sh);
}

/// Matrix schema: {ring: shape, dim: r, entries: [[terms...]...]}.
inline json matrix_to_json(const SeriesMatrix& M) {
    json out;
    out["ring"] = shape_to_json(M[0][0].shape);
    out["rows"] = M.size();
    out["cols"] = M[0].size();
    json rows = json::array();
    for (auto& r : M) {
        json row = json::array();
        for (auto& e : r) row.push_back(series_to_json(e)["terms"]);
        rows.push_back(row);
    }
    out["entries"] = rows;
    return out;
}

inline SeriesMatrix matrix_from_json(const json& j) {
    SeriesShape sh = shape_from_json(j.at("ring"));
    SeriesMatrix M;
    for (auto& row : j.at("entries")) {
        M.emplace_back();
        for (auto& e : row) M.back().push_back(series_terms_from_json(e, sh));
    }
    if (M.empty()) throw ParseError("empty matrix");
    return M;
}

inline json cocycle_to_json(const UnitCocycle& c) {
    json entries = json::array();
    for (auto& [ij, u] : c.c)
        entries.push_back({{"i", ij.first},
                           {"j", ij.second},
                           {"lambda", u.lambda},
                           {"alpha", u.alpha.str()}});
    return json{{"n", c.n}, {"p", c.p}, {"entries", entries}};
}

inline UnitCocycle cocycle_from_json(const json& j) {
    UnitCocycle c;
    c.n = j.at("n").get<int>();
    c.p = j.at("p").get<int>();
    for (auto& e : j.at("entries")) {
        int i = e.at("i").get<int>(), jj = e.at("j").get<int>();
        if (!(0 <= i && i < jj && jj <= c.n)) throw ParseError("cocycle index out of range");
        int lam = e.at("lambda").get<int>();
        if (lam % c.p == 0) throw ParseError("lambda must be a unit mod p");
        c.c[{i, jj}] = {((lam % c.p) + c.p) % c.p, exp_from_json(e.at("alpha"), c.p)};
    }
    for (int i = 0; i < c.n; ++i)
        for (int jj = i + 1; jj <= c.n; ++jj)
            if (!c.c.count({i, jj})) throw ParseError("missing cocycle entry");
    return c;
}

inline json datum_to_json(const LnDatum& D) {
    json lam = json::array();
    for (auto& l : D.lambdas) lam.push_back(field_to_json(l));
    json secs = json::array();
    for (auto& level : D.sections) {
        json row = json::array();
        for (auto& s : level) row.push_back(series_to_json(s)["terms"]);
        secs.push_back(row);
    }
    return json{{"m", D.m},       {"n", D.n},
                {"N", D.N},       {"d0", D.d0.str()},
                {"ring", shape_to_json(D.sections[0][0].shape)},
                {"lambdas", lam}, {"sections", secs}};
}

inline LnDatum datum_from_json(const json& j) {
    LnDatum D;
    D.m = j.at("m").get<int>();
    D.n = j.at("n").get<int>();
    D.N = j.at("N").get<int>();
    SeriesShape sh = shape_from_json(j.at("ring"));
    D.d0 = exp_from_json(j.at("d0"), sh.p);
    for (auto& l : j.at("lambdas")) D.lambdas.push_back(field_from_json(l, sh.coeff));
    for (auto& level : j.at("sections")) {
        D.sections.emplace_back();
        for (auto& s : level) D.sections.back().push_back(series_terms_from_json(s, sh));
    }
    return D;
}

} // namespace perfproj
