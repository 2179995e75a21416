#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace derham::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kSuccess = 0;
inline constexpr int kInputError = 1;
inline constexpr int kVerificationFailure = 2;

struct Flags {
    std::string complex;
    std::string form;
    std::string cochain;
    double p = 2.0;
    std::optional<double> eps;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::optional<int> quad_degree;
    std::optional<double> L;
    int cases = 200;
    bool verify_derham = false;
    std::vector<double> eps_grid{0.4, 0.2, 0.1, 0.05};
    int dim = 2;
    double tolerance = 1e-4;
    bool compare_orders = false;
};

int check_geometry(const Flags& f, std::ostream& out);
int verify_cartan(const Flags& f, std::ostream& out);
int cohomology(const Flags& f, std::ostream& out);
int whitney(const Flags& f, std::ostream& out);
int derham_map(const Flags& f, std::ostream& out);
int regularize(const Flags& f, std::ostream& out);
int norms(const Flags& f, std::ostream& out);
int verify_all(const Flags& f, std::ostream& out);

}  // namespace derham::cli
