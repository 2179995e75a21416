#include "commands.hpp"

#include "derham/io.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace {

using Command = std::function<int(const derham::cli::Flags&, std::ostream&)>;

void add_common(CLI::App* sub, derham::cli::Flags& f, std::string& out_path) {
    sub->add_option("--complex", f.complex, "complex JSON file");
    sub->add_option("--form", f.form, "piecewise form JSON file");
    sub->add_option("--cochain", f.cochain, "cochain JSON file");
    sub->add_option("--p", f.p, "exponent p")->check(CLI::Range(1.0, 1e9));
    sub->add_option_function<double>("--eps", [&f](const double& v) { f.eps = v; }, "mollifier radius");
    sub->add_option_function<std::uint64_t>("--seed", [&f](const std::uint64_t& v) {
        f.seed = v;
        f.seed_given = true;
    }, "seed for randomized suites");
    sub->add_option_function<int>("--quad-degree", [&f](const int& v) { f.quad_degree = v; }, "simplex quadrature degree");
    sub->add_option("--out", out_path, "write the report to this file");
}

}  // namespace

int main(int argc, char** argv) {
    namespace cli = derham::cli;
    CLI::App app{"Lipschitz de Rham laboratory"};
    app.require_subcommand(1);
    cli::Flags flags;
    std::string out_path;
    std::map<CLI::App*, Command> commands;

    auto add = [&](const std::string& name, const std::string& help, Command run) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub, flags, out_path);
        commands[sub] = std::move(run);
        return sub;
    };
    add("check-geometry", "star bound, connectivity and L witness", cli::check_geometry)
        ->add_option_function<double>("--L", [&](const double& v) { flags.L = v; }, "bounded-geometry constant");
    add("verify-cartan", "exact Cartan identity on seeded forms", cli::verify_cartan)
        ->add_option("--cases", flags.cases, "number of random cases");
    add("cohomology", "Betti numbers of the cochain complex", cli::cohomology)
        ->add_flag("--verify-derham", flags.verify_derham, "compare with the Whitney subcomplex and regularization");
    add("whitney", "Whitney form of a cochain", cli::whitney);
    add("derham-map", "integration map of a piecewise form", cli::derham_map);
    auto* reg = add("regularize", "global regularization report", cli::regularize);
    reg->add_option("--tol", flags.tolerance, "residual tolerance");
    reg->add_flag("--compare-orders", flags.compare_orders, "also compose the stars in descending order");
    add("norms", "operator-norm scan over an eps grid (CSV)", cli::norms)
        ->add_option("--eps-grid", flags.eps_grid, "comma-separated eps values")
        ->delimiter(',');
    app.get_subcommand("norms")->add_option("--dim", flags.dim, "ambient dimension");
    add("verify-all", "compact run of the exact verification suites", cli::verify_all);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cli::kSuccess : cli::kInputError;
    }

    std::ostringstream report;
    int code = cli::kSuccess;
    try {
        for (const auto& [sub, run] : commands)
            if (sub->parsed()) code = run(flags, report);
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return cli::kInputError;
    } catch (const std::out_of_range& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return cli::kInputError;
    } catch (const std::domain_error& e) {
        std::cout << derham::dump_json(derham::Json{{"error", e.what()}});
        return cli::kVerificationFailure;
    }
    if (out_path.empty()) {
        std::cout << report.str();
    } else {
        std::ofstream file(out_path);
        if (!file) {
            std::cerr << "input error: cannot write " << out_path << "\n";
            return cli::kInputError;
        }
        file << report.str();
    }
    return code;
}
