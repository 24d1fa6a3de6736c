#pragma once

// Canonical constructors for the standard test problems, each bundled with
// its reference eigenvalue table and the settings the values were computed
// at.  References are kept as decimal strings so fixtures round-trip
// bit-exactly; parse them at whatever working precision the comparison runs.

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "spps/error.hpp"
#include "spps/problem.hpp"

namespace spps {

struct ReferenceValue {
    std::size_t n;       // row index in the table's own numbering
    std::string lambda;  // decimal string, verbatim
    std::string source;  // "literature" or "closed-form"
    double tol;          // absolute agreement the source supports
};

struct RecommendedSettings {
    std::size_t grid_size = 2000;
    std::size_t powers = 60;
    int digits = 34;
};

struct CatalogEntry {
    SturmLiouvilleProblem problem;
    std::vector<ReferenceValue> references;
    RecommendedSettings recommended;
};

enum class ConstantKind { Dirichlet, DirichletNeumann, NeumannNeumann };

namespace detail {

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Short form for entry names; expressions use the value-faithful form above.
inline std::string format_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace detail

inline CatalogEntry paine() {
    CatalogEntry e;
    e.problem.name = "paine";
    e.problem.a = parse_expression("0");
    e.problem.b = parse_expression("pi");
    e.problem.p = parse_expression("-1");
    e.problem.q = parse_expression("1/(x+0.1)^2");
    e.problem.r = parse_expression("1");
    e.problem.boundary = BoundaryCondition::dirichlet();
    e.recommended = {10000, 100, 100};
    e.references = {
        {0, "1.519865821099", "literature", 1e-8},
        {1, "4.943309822144", "literature", 1e-8},
        {2, "10.28466264509", "literature", 1e-8},
        {3, "17.55995774633", "literature", 1e-8},
        {4, "26.78286315899", "literature", 1e-8},
        {5, "37.96442587941", "literature", 1e-8},
        {6, "51.11335707578", "literature", 1e-8},
        {7, "66.23644770359", "literature", 1e-6},
        {8, "83.33896237419", "literature", 1e-6},
        {9, "102.42498839828", "literature", 1e-6},
        {10, "123.49770680101", "literature", 1e-6},
        {11, "146.55586199495330", "literature", 1e-5},
        {12, "171.60875781110985", "literature", 1e-5},
        {13, "198.65416389844202", "literature", 1e-5},
    };
    return e;
}

inline CatalogEntry coffey_evans(double beta) {
    if (!(beta > 0)) throw ContractViolation("coffey_evans requires beta > 0");
    CatalogEntry e;
    const std::string b = detail::format_number(beta);
    const std::string label = detail::format_label(beta);
    const std::string b2 = detail::format_number(beta * beta);
    const std::string half = detail::format_number(beta / 2);
    e.problem.name = "coffey-evans-" + label;
    e.problem.a = parse_expression("-pi/2");
    e.problem.b = parse_expression("pi/2");
    e.problem.p = parse_expression("-1");
    e.problem.q = parse_expression(b2 + "*sin(2*x)^2 - 2*" + b + "*cos(2*x)");
    e.problem.r = parse_expression("1");
    e.problem.boundary = BoundaryCondition::dirichlet();
    e.problem.u0 = parse_expression("exp(" + half + "*cos(2*x))");
    e.problem.du0 = parse_expression("-" + b + "*sin(2*x)*exp(" + half + "*cos(2*x))");
    e.recommended = {10000, beta == 20 ? std::size_t(180) : std::size_t(150), 100};
    if (beta == 20) {
        e.references = {
            {0, "0.0000000000000003", "literature", 1e-8},
            {1, "77.9161956771439703", "literature", 1e-8},
            {2, "151.4627783464566396", "literature", 1e-8},
            {3, "151.4632236576586490", "literature", 1e-8},
            {4, "151.4636689883516575", "literature", 1e-8},
            {5, "220.1542298352599497", "literature", 1e-8},
            {6, "283.0948146954014377", "literature", 1e-8},
            {7, "283.2507437431126800", "literature", 1e-8},
            {8, "283.4087354034293064", "literature", 1e-8},
        };
    } else if (beta == 30) {
        e.references = {
            {0, "0.000000000000000002", "literature", 1e-8},
            {1, "117.94630766206876", "literature", 1e-8},
            {2, "231.664928928423790", "literature", 1e-4},
            {3, "231.664928928423791", "literature", 1e-4},
            {4, "231.664930082035462", "literature", 1e-4},
            {5, "340.888299091685489", "literature", 1e-6},
            {6, "403.219684016171863", "literature", 1e-4},
            {7, "403.219684016171917", "literature", 1e-4},
        };
    } else if (beta == 50) {
        e.references = {
            {0, "0.000000000000000003", "literature", 1e-8},
            {1, "197.96872651650729", "literature", 1e-8},
            {2, "391.807", "literature", 5e-3},
            {3, "391.810", "literature", 5e-3},
            {4, "547.1397060", "literature", 1e-6},
        };
    }
    return e;
}

inline CatalogEntry bessel() {
    CatalogEntry e;
    e.problem.name = "bessel";
    e.problem.a = parse_expression("0");
    e.problem.b = parse_expression("1");
    e.problem.p = parse_expression("x");
    e.problem.q = parse_expression("-1/x");
    e.problem.r = parse_expression("-x");
    e.problem.boundary = BoundaryCondition::dirichlet();
    e.problem.u0 = parse_expression("x/2");
    e.problem.du0 = parse_expression("1/2");
    e.problem.left_singular = true;
    e.recommended = {2000, 40, 34};
    e.references = {
        {1, "14.68197064212389325721977776863", "closed-form", 1e-9},
        {2, "49.21845632169460367026708284639", "closed-form", 1e-9},
        {3, "103.4994538951365803322236325356", "closed-form", 1e-9},
    };
    return e;
}

inline CatalogEntry benilov(double epsilon) {
    if (!(epsilon > 0) || !(epsilon < 2))
        throw ContractViolation("benilov requires 0 < epsilon < 2");
    CatalogEntry e;
    const std::string eps = detail::format_number(epsilon);
    const std::string label = detail::format_label(epsilon);
    const std::string nu = detail::format_number(1 / epsilon);
    e.problem.name = "benilov-" + label;
    e.problem.a = parse_expression("-pi");
    e.problem.b = parse_expression("pi");
    e.problem.p = parse_expression("-(i*" + eps + ")*sin(x)*abs(tan(x/2))^(" + nu + ")");
    e.problem.q = parse_expression("0");
    e.problem.r = parse_expression("abs(tan(x/2))^(" + nu + ")");
    e.problem.boundary = BoundaryCondition::periodic_singular();
    e.problem.weight = SingularWeight{parse_expression(nu)};
    if (epsilon == 0.5) {
        e.recommended = {2000, 40, 34};
        e.references = {
            {1, "1.16723", "literature", 5e-3},  {2, "2.96844", "literature", 5e-3},
            {3, "5.48268", "literature", 5e-3},  {4, "8.71354", "literature", 5e-3},
            {5, "12.6618", "literature", 5e-3},  {6, "17.3275", "literature", 5e-3},
            {7, "22.7110", "literature", 5e-3},  {8, "28.8122", "literature", 5e-3},
            {9, "35.6311", "literature", 5e-3},  {10, "43.1677", "literature", 5e-3},
        };
    } else if (epsilon == 0.1) {
        e.recommended = {4000, 50, 60};
        e.references = {
            {1, "1.00968", "literature", 5e-4},  {2, "2.07334", "literature", 5e-4},
            {3, "3.22978", "literature", 5e-4},  {4, "4.50134", "literature", 5e-4},
            {5, "5.89993", "literature", 5e-4},  {6, "7.43194", "literature", 5e-4},
            {7, "9.10097", "literature", 5e-4},  {8, "10.9092", "literature", 5e-4},
            {9, "12.8578", "literature", 5e-4},  {10, "14.9478", "literature", 5e-4},
            {15, "27.5331", "literature", 5e-4}, {20, "43.6923", "literature", 5e-2},
        };
    } else if (epsilon == 0.01) {
        e.recommended = {10000, 76, 120};
        e.references = {
            {1, "1.0001", "literature", 1e-3},   {2, "2.0008", "literature", 1e-3},
            {3, "3.00269", "literature", 1e-3},  {4, "4.00638", "literature", 1e-3},
            {5, "5.01243", "literature", 1e-3},  {6, "6.02143", "literature", 1e-3},
            {7, "7.03393", "literature", 1e-3},  {8, "8.05048", "literature", 1e-3},
            {9, "9.07162", "literature", 1e-3},  {10, "10.098", "literature", 1e-3},
            {11, "11.0223", "literature", 1e-3},
        };
    } else {
        const double nu_val = 1 / epsilon;
        e.recommended = {4000, 60, 34 + static_cast<int>(3.5 * nu_val + 1)};
    }
    return e;
}

inline CatalogEntry constant_coefficient(ConstantKind kind) {
    CatalogEntry e;
    e.problem.a = parse_expression("0");
    e.problem.b = parse_expression("pi");
    e.problem.p = parse_expression("-1");
    e.problem.q = parse_expression("0");
    e.problem.r = parse_expression("1");
    e.recommended = {2000, 60, 34};
    switch (kind) {
        case ConstantKind::Dirichlet:
            e.problem.name = "constant-dirichlet";
            e.problem.boundary = BoundaryCondition::dirichlet();
            e.references = {
                {0, "1", "closed-form", 1e-10},  {1, "4", "closed-form", 1e-10},
                {2, "9", "closed-form", 1e-10},  {3, "16", "closed-form", 1e-10},
                {4, "25", "closed-form", 1e-10}, {5, "36", "closed-form", 1e-10},
                {6, "49", "closed-form", 1e-10}, {7, "64", "closed-form", 1e-10},
            };
            break;
        case ConstantKind::DirichletNeumann:
            e.problem.name = "constant-dirichlet-neumann";
            e.problem.boundary = BoundaryCondition::robin("0", "pi/2");
            e.references = {
                {0, "0.25", "closed-form", 1e-10},  {1, "2.25", "closed-form", 1e-10},
                {2, "6.25", "closed-form", 1e-10},  {3, "12.25", "closed-form", 1e-10},
                {4, "20.25", "closed-form", 1e-10}, {5, "30.25", "closed-form", 1e-10},
            };
            break;
        case ConstantKind::NeumannNeumann:
            e.problem.name = "constant-neumann-neumann";
            e.problem.boundary = BoundaryCondition::robin("pi/2", "pi/2");
            e.references = {
                {0, "0", "closed-form", 1e-10},  {1, "1", "closed-form", 1e-10},
                {2, "4", "closed-form", 1e-10},  {3, "9", "closed-form", 1e-10},
                {4, "16", "closed-form", 1e-10}, {5, "25", "closed-form", 1e-10},
            };
            break;
    }
    return e;
}

inline const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names = {
        "constant-dirichlet", "constant-dirichlet-neumann", "constant-neumann-neumann",
        "paine",              "coffey-evans-20",            "coffey-evans-30",
        "coffey-evans-50",    "bessel",                     "benilov-0.5",
        "benilov-0.1",        "benilov-0.01",
    };
    return names;
}

inline CatalogEntry catalog_entry(const std::string& name) {
    static const std::map<std::string, std::function<CatalogEntry()>> builders = {
        {"constant-dirichlet", [] { return constant_coefficient(ConstantKind::Dirichlet); }},
        {"constant-dirichlet-neumann",
         [] { return constant_coefficient(ConstantKind::DirichletNeumann); }},
        {"constant-neumann-neumann",
         [] { return constant_coefficient(ConstantKind::NeumannNeumann); }},
        {"paine", [] { return paine(); }},
        {"coffey-evans-20", [] { return coffey_evans(20); }},
        {"coffey-evans-30", [] { return coffey_evans(30); }},
        {"coffey-evans-50", [] { return coffey_evans(50); }},
        {"bessel", [] { return bessel(); }},
        {"benilov-0.5", [] { return benilov(0.5); }},
        {"benilov-0.1", [] { return benilov(0.1); }},
        {"benilov-0.01", [] { return benilov(0.01); }},
    };
    const auto it = builders.find(name);
    if (it == builders.end()) throw ContractViolation("unknown catalog entry: " + name);
    return it->second();
}

inline nlohmann::json entry_to_json(const CatalogEntry& e) {
    nlohmann::json j;
    j["name"] = e.problem.name;
    j["interval"] = {to_string(e.problem.a), to_string(e.problem.b)};
    j["p"] = to_string(e.problem.p);
    j["q"] = to_string(e.problem.q);
    j["r"] = to_string(e.problem.r);
    nlohmann::json bc;
    switch (e.problem.boundary.kind) {
        case BCKind::Dirichlet:
            bc["kind"] = "dirichlet";
            break;
        case BCKind::Robin:
            bc["kind"] = "robin";
            bc["alpha"] = to_string(e.problem.boundary.alpha);
            bc["beta"] = to_string(e.problem.boundary.beta);
            break;
        case BCKind::LambdaDependent: {
            bc["kind"] = "lambda-dependent";
            bc["beta1"] = to_string(e.problem.boundary.beta1);
            bc["beta2"] = to_string(e.problem.boundary.beta2);
            bc["beta1p"] = to_string(e.problem.boundary.beta1p);
            bc["beta2p"] = to_string(e.problem.boundary.beta2p);
            nlohmann::json phi = nlohmann::json::array();
            for (const Expr& c : e.problem.boundary.phi) phi.push_back(to_string(c));
            bc["phi"] = std::move(phi);
            break;
        }
        case BCKind::PeriodicSingular:
            bc["kind"] = "periodic-singular";
            break;
    }
    j["boundary"] = std::move(bc);
    if (e.problem.weight) j["weight"] = to_string(e.problem.weight->nu);
    if (e.problem.u0) j["u0"] = to_string(e.problem.u0);
    if (e.problem.du0) j["du0"] = to_string(e.problem.du0);
    if (e.problem.left_singular) j["left_singular"] = true;
    nlohmann::json refs = nlohmann::json::array();
    for (const ReferenceValue& r : e.references)
        refs.push_back({{"n", r.n}, {"lambda", r.lambda}, {"source", r.source}, {"tol", r.tol}});
    j["references"] = std::move(refs);
    j["recommended"] = {{"M", e.recommended.grid_size},
                        {"N", e.recommended.powers},
                        {"digits", e.recommended.digits}};
    return j;
}

inline CatalogEntry entry_from_json(const nlohmann::json& j) {
    CatalogEntry e;
    try {
        e.problem.name = j.at("name").get<std::string>();
        e.problem.a = parse_expression(j.at("interval").at(0).get<std::string>());
        e.problem.b = parse_expression(j.at("interval").at(1).get<std::string>());
        e.problem.p = parse_expression(j.at("p").get<std::string>());
        e.problem.q = parse_expression(j.at("q").get<std::string>());
        e.problem.r = parse_expression(j.at("r").get<std::string>());
        const nlohmann::json& bc = j.at("boundary");
        const std::string kind = bc.at("kind").get<std::string>();
        if (kind == "dirichlet") {
            e.problem.boundary = BoundaryCondition::dirichlet();
        } else if (kind == "robin") {
            e.problem.boundary = BoundaryCondition::robin(bc.at("alpha").get<std::string>(),
                                                          bc.at("beta").get<std::string>());
        } else if (kind == "lambda-dependent") {
            std::vector<std::string> phi;
            for (const auto& c : bc.at("phi")) phi.push_back(c.get<std::string>());
            e.problem.boundary = BoundaryCondition::lambda_dependent(
                bc.at("beta1").get<std::string>(), bc.at("beta2").get<std::string>(),
                bc.at("beta1p").get<std::string>(), bc.at("beta2p").get<std::string>(), phi);
        } else if (kind == "periodic-singular") {
            e.problem.boundary = BoundaryCondition::periodic_singular();
        } else {
            throw ParseError("unknown boundary kind: " + kind, 0);
        }
        if (j.contains("weight"))
            e.problem.weight = SingularWeight{parse_expression(j.at("weight").get<std::string>())};
        if (j.contains("u0")) e.problem.u0 = parse_expression(j.at("u0").get<std::string>());
        if (j.contains("du0")) e.problem.du0 = parse_expression(j.at("du0").get<std::string>());
        if (j.contains("left_singular")) e.problem.left_singular = j.at("left_singular").get<bool>();
        if (j.contains("references"))
            for (const auto& r : j.at("references"))
                e.references.push_back({r.at("n").get<std::size_t>(),
                                        r.at("lambda").get<std::string>(),
                                        r.at("source").get<std::string>(),
                                        r.at("tol").get<double>()});
        if (j.contains("recommended")) {
            e.recommended.grid_size = j.at("recommended").at("M").get<std::size_t>();
            e.recommended.powers = j.at("recommended").at("N").get<std::size_t>();
            e.recommended.digits = j.at("recommended").at("digits").get<int>();
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("problem file: ") + ex.what(), 0);
    }
    return e;
}

inline CatalogEntry load_entry(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open problem file: " + path, 0);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("problem file: ") + ex.what(), 0);
    }
    return entry_from_json(j);
}

inline void save_entry(const CatalogEntry& e, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ContractViolation("cannot write problem file: " + path);
    out << entry_to_json(e).dump(2) << '\n';
}

}  // namespace spps
