// Command-line front end: run eigenvalue and initial-value computations on
// catalog or user-supplied problems and emit CSV/JSON tables.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "spps/spps.hpp"

namespace {

struct RunConfig {
    std::string catalog_name;
    std::string problem_path;
    std::size_t grid = 2000;
    int powers = 60;
    int digits = 34;
    std::size_t count = 5;
    std::string shift = "auto";
    double tol = 1e-8;
    std::string format = "csv";
    std::string out;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Sink selection; files are opened in binary mode so line endings stay LF.
struct Output {
    std::ofstream file;
    std::ostream* os = &std::cout;
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file.open(path, std::ios::binary);
            if (!file) throw spps::ContractViolation("cannot open output file: " + path);
            os = &file;
        }
    }
    std::ostream& stream() { return *os; }
};

void add_run_flags(CLI::App* cmd, RunConfig& cfg, bool with_count) {
    cmd->add_option("--catalog", cfg.catalog_name, "catalog entry name");
    cmd->add_option("--problem", cfg.problem_path, "problem file (JSON)");
    cmd->add_option("--grid", cfg.grid, "grid cells M")->check(CLI::PositiveNumber);
    cmd->add_option("--powers", cfg.powers, "series truncation order N")->check(CLI::PositiveNumber);
    cmd->add_option("--digits", cfg.digits, "working precision in decimal digits")
        ->check(CLI::PositiveNumber);
    if (with_count)
        cmd->add_option("--count", cfg.count, "eigenvalues to compute")->check(CLI::PositiveNumber);
    cmd->add_option("--shift", cfg.shift, "spectral shift: auto, none, or a value");
    cmd->add_option("--tol", cfg.tol, "target tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", cfg.out, "write output to this path instead of stdout");
}

spps::SturmLiouvilleProblem load_problem(const RunConfig& cfg) {
    const bool have_cat = !cfg.catalog_name.empty();
    const bool have_file = !cfg.problem_path.empty();
    if (have_cat == have_file)
        throw spps::ContractViolation("exactly one of --catalog or --problem is required");
    if (have_cat) return spps::catalog_entry(cfg.catalog_name).problem;
    return spps::load_entry(cfg.problem_path).problem;
}

template <class Real>
spps::EigenOptions<Real> make_options(const RunConfig& cfg) {
    spps::EigenOptions<Real> opt;
    opt.grid_size = cfg.grid;
    opt.powers = cfg.powers;
    opt.count = cfg.count;
    opt.tolerance = Real(cfg.tol);
    if (cfg.shift == "auto") {
        opt.shift = spps::ShiftMode::Auto;
    } else if (cfg.shift == "none") {
        opt.shift = spps::ShiftMode::None;
    } else {
        char* end = nullptr;
        const double v = std::strtod(cfg.shift.c_str(), &end);
        if (end == cfg.shift.c_str() || *end != '\0')
            throw spps::ContractViolation("--shift expects auto, none, or a number");
        opt.shift = spps::ShiftMode::Explicit;
        opt.shift_value = spps::Cplx<Real>{Real(v), Real(0)};
    }
    return opt;
}

template <class Real>
void write_eigs(const std::string& name, const RunConfig& cfg,
                const std::vector<spps::Eigenpair<Real>>& pairs, std::ostream& os) {
    if (cfg.format == "csv") {
        os << "n,lambda_re,lambda_im,delta1,delta2,tail_bound,shift_round\n";
        for (const auto& e : pairs)
            os << e.index_hint << ',' << fmt(static_cast<double>(e.lambda.re)) << ','
               << fmt(static_cast<double>(e.lambda.im)) << ','
               << fmt(static_cast<double>(e.delta1)) << ',' << fmt(static_cast<double>(e.delta2))
               << ',' << fmt(static_cast<double>(e.tail)) << ',' << e.shift_round << '\n';
        return;
    }
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& e : pairs)
        rows.push_back({{"n", e.index_hint},
                        {"lambda_re", static_cast<double>(e.lambda.re)},
                        {"lambda_im", static_cast<double>(e.lambda.im)},
                        {"delta1", static_cast<double>(e.delta1)},
                        {"delta2", static_cast<double>(e.delta2)},
                        {"tail_bound", static_cast<double>(e.tail)},
                        {"shift_round", e.shift_round}});
    nlohmann::json j{{"problem", name},
                     {"settings",
                      {{"M", cfg.grid},
                       {"N", cfg.powers},
                       {"digits", cfg.digits},
                       {"count", cfg.count},
                       {"shift", cfg.shift},
                       {"tol", cfg.tol}}},
                     {"rows", std::move(rows)}};
    os << j.dump(2) << '\n';
}

template <class Real>
int run_eigs(const RunConfig& cfg) {
    const spps::SturmLiouvilleProblem prob = load_problem(cfg);
    const auto pairs = spps::eigen_iterate(prob, make_options<Real>(cfg));
    Output out(cfg.out);
    write_eigs(prob.name, cfg, pairs, out.stream());
    return 0;
}

struct IvpArgs {
    std::string lambda = "0";
    std::string A = "1";
    std::string B = "0";
    std::string x0;  // defaults to the left endpoint
};

template <class Real>
int run_ivp(const RunConfig& cfg, const IvpArgs& args) {
    using C = spps::Cplx<Real>;
    const spps::SturmLiouvilleProblem prob = load_problem(cfg);
    if (prob.boundary.kind == spps::BCKind::PeriodicSingular)
        throw spps::ContractViolation("ivp requires a regular two-point problem");
    const C lambda = spps::evaluate<Real>(spps::parse_expression(args.lambda), Real(0));
    const C A = spps::evaluate<Real>(spps::parse_expression(args.A), Real(0));
    const C B = spps::evaluate<Real>(spps::parse_expression(args.B), Real(0));

    spps::PreparedProblem<Real> prep = spps::prepare_problem<Real>(prob, cfg.grid);
    const auto& nodes = prep.grid->nodes;
    std::size_t x0_index = 0;
    if (!args.x0.empty()) {
        const Real x0 = spps::evaluate<Real>(spps::parse_expression(args.x0), Real(0)).re;
        for (std::size_t j = 1; j < nodes.size(); ++j)
            if (abs(nodes[j] - x0) < abs(nodes[x0_index] - x0)) x0_index = j;
    }

    spps::IvpOptions<Real> iopt;
    iopt.N = cfg.powers;
    iopt.tolerance = Real(cfg.tol);
    const auto [u, du] = spps::solve_ivp(prep.ps, prep.coef, lambda, x0_index, A, B, iopt);

    Output out(cfg.out);
    std::ostream& os = out.stream();
    if (cfg.format == "csv") {
        os << "x,u_re,u_im,du_re,du_im\n";
        for (std::size_t j = 0; j < nodes.size(); ++j)
            os << fmt(static_cast<double>(nodes[j])) << ',' << fmt(static_cast<double>(u[j].re))
               << ',' << fmt(static_cast<double>(u[j].im)) << ','
               << fmt(static_cast<double>(du[j].re)) << ',' << fmt(static_cast<double>(du[j].im))
               << '\n';
    } else {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t j = 0; j < nodes.size(); ++j)
            rows.push_back({{"x", static_cast<double>(nodes[j])},
                            {"u_re", static_cast<double>(u[j].re)},
                            {"u_im", static_cast<double>(u[j].im)},
                            {"du_re", static_cast<double>(du[j].re)},
                            {"du_im", static_cast<double>(du[j].im)}});
        nlohmann::json j{{"problem", prob.name}, {"rows", std::move(rows)}};
        os << j.dump(2) << '\n';
    }
    return 0;
}

template <class Real>
std::vector<double> sweep_point(const spps::CatalogEntry& ent, std::size_t grid, int powers,
                                std::size_t count, double tol) {
    spps::EigenOptions<Real> opt;
    opt.grid_size = grid;
    opt.powers = powers;
    opt.count = count;
    opt.tolerance = Real(tol);
    const auto pairs = spps::eigen_iterate(ent.problem, opt);
    std::vector<double> lams;
    for (const auto& e : pairs) lams.push_back(static_cast<double>(e.lambda.re));
    return lams;
}

int run_sweep(const RunConfig& cfg, const std::vector<double>& eps_list, bool grid_set,
              bool powers_set, bool digits_set) {
    for (double eps : eps_list)
        if (!(eps > 0) || !(eps < 2))
            throw spps::ContractViolation("sweep epsilon must lie in (0, 2)");

    Output out(cfg.out);
    std::ostream& os = out.stream();
    nlohmann::json jrows = nlohmann::json::array();
    if (cfg.format == "csv") os << "epsilon,n,lambda_n\n";

    std::size_t succeeded = 0;
    for (double eps : eps_list) {
        const spps::CatalogEntry ent = spps::benilov(eps);
        const std::size_t grid = grid_set ? cfg.grid : ent.recommended.grid_size;
        const int powers = powers_set ? cfg.powers : static_cast<int>(ent.recommended.powers);
        const int digits = digits_set ? cfg.digits : ent.recommended.digits;
        std::vector<double> lams;
        try {
            if (digits <= 15) {
                lams = sweep_point<double>(ent, grid, powers, cfg.count, cfg.tol);
            } else {
                spps::PrecisionScope scope(digits);
                lams = sweep_point<spps::mpreal>(ent, grid, powers, cfg.count, cfg.tol);
            }
            ++succeeded;
        } catch (const spps::Error& e) {
            std::cerr << "sweep: epsilon " << fmt(eps) << " failed: " << e.what() << '\n';
            lams.assign(cfg.count, std::numeric_limits<double>::quiet_NaN());
        }
        for (std::size_t n = 0; n < cfg.count; ++n) {
            const double lam = n < lams.size() ? lams[n] : std::numeric_limits<double>::quiet_NaN();
            if (cfg.format == "csv")
                os << fmt(eps) << ',' << n + 1 << ',' << fmt(lam) << '\n';
            else
                jrows.push_back({{"epsilon", eps}, {"n", n + 1}, {"lambda_n", lam}});
        }
    }
    if (cfg.format == "json") os << nlohmann::json{{"rows", std::move(jrows)}}.dump(2) << '\n';
    return succeeded > 0 ? 0 : 2;
}

int run_catalog(const RunConfig& cfg, const std::string& name) {
    Output out(cfg.out);
    std::ostream& os = out.stream();
    if (!name.empty()) {
        // Single entry: emit the full fixture document (JSON regardless of
        // --format; the fixture is the config-file schema).
        os << spps::entry_to_json(spps::catalog_entry(name)).dump(2) << '\n';
        return 0;
    }
    if (cfg.format == "json") {
        nlohmann::json entries = nlohmann::json::array();
        for (const std::string& n : spps::catalog_names())
            entries.push_back(spps::entry_to_json(spps::catalog_entry(n)));
        os << nlohmann::json{{"entries", std::move(entries)}}.dump(2) << '\n';
        return 0;
    }
    os << "name,interval,boundary,references,M,N,digits\n";
    for (const std::string& n : spps::catalog_names()) {
        const spps::CatalogEntry e = spps::catalog_entry(n);
        const char* kind = "";
        switch (e.problem.boundary.kind) {
            case spps::BCKind::Dirichlet: kind = "dirichlet"; break;
            case spps::BCKind::Robin: kind = "robin"; break;
            case spps::BCKind::LambdaDependent: kind = "lambda-dependent"; break;
            case spps::BCKind::PeriodicSingular: kind = "periodic-singular"; break;
        }
        os << n << ",[" << spps::to_string(e.problem.a) << ' ' << spps::to_string(e.problem.b)
           << "]," << kind << ',' << e.references.size() << ',' << e.recommended.grid_size << ','
           << e.recommended.powers << ',' << e.recommended.digits << '\n';
    }
    return 0;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Sturm-Liouville spectral solver"};
    app.require_subcommand(1);

    RunConfig cfg;
    IvpArgs ivp_args;
    std::vector<double> eps_list;
    std::string catalog_pick;

    CLI::App* eigs = app.add_subcommand("eigs", "compute eigenvalues");
    add_run_flags(eigs, cfg, true);

    CLI::App* ivp = app.add_subcommand("ivp", "solve an initial-value problem");
    add_run_flags(ivp, cfg, false);
    ivp->add_option("--lambda", ivp_args.lambda, "spectral value (expression)");
    ivp->add_option("--A", ivp_args.A, "u(x0)");
    ivp->add_option("--B", ivp_args.B, "u'(x0)");
    ivp->add_option("--x0", ivp_args.x0, "initial point (defaults to the left endpoint)");

    CLI::App* sweep = app.add_subcommand("sweep", "eigenvalues of the advection problem over epsilon");
    add_run_flags(sweep, cfg, true);
    sweep->add_option("--eps", eps_list, "epsilon values in (0, 2)")
        ->required()
        ->delimiter(',');

    CLI::App* cat = app.add_subcommand("catalog", "list catalog entries");
    add_run_flags(cat, cfg, false);
    cat->add_option("name", catalog_pick, "print this entry as a problem file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (eigs->parsed()) {
            if (cfg.digits <= 15) return run_eigs<double>(cfg);
            spps::PrecisionScope scope(cfg.digits);
            return run_eigs<spps::mpreal>(cfg);
        }
        if (ivp->parsed()) {
            if (cfg.digits <= 15) return run_ivp<double>(cfg, ivp_args);
            spps::PrecisionScope scope(cfg.digits);
            return run_ivp<spps::mpreal>(cfg, ivp_args);
        }
        if (sweep->parsed())
            return run_sweep(cfg, eps_list, sweep->count("--grid") > 0,
                             sweep->count("--powers") > 0, sweep->count("--digits") > 0);
        if (cat->parsed()) return run_catalog(cfg, catalog_pick);
    } catch (const spps::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const spps::ContractViolation& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const spps::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) { return dispatch(argc, argv); }
