#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "frag/grid.hpp"

namespace frag {

enum class Method { Series, Multiplier, Explicit, Oracle };
enum class InitialKind { Eigenmode, Bump, PowerLaw, File };

const char* method_name(Method m);
Method parse_method(const std::string& s);  // InvalidArgument on unknown names

// Flat key = value file, '#' comments, lists as [a, b, c]. Unknown keys are
// rejected. Keys:
//   kernel, powers, gamma, grid_xmin, grid_xmax, grid_points, method,
//   initial (eigenmode | bump | powerlaw | file), modes, bump_power, bump_rate, bump_transfer,
//   powerlaw_beta, initial_file, initial_variable (original | transformed),
//   t_end, t_step, times, fit_t0, fit_t1, n_max, project_mass, transformed,
//   out, seed
struct ExperimentConfig {
    std::vector<double> kernel{2.0};
    std::vector<double> powers;          // empty: ordinary polynomial
    double gamma = 1.0;
    GridSpec grid{};                     // default 8192 points on [1e-12, 1e2]
    bool grid_xmax_set = false;          // grid_xmax given explicitly
    Method method = Method::Series;
    InitialKind initial = InitialKind::Eigenmode;
    std::vector<double> modes{1.0};      // a_1, a_2, ... on U_1, U_2, ...
    double bump_power = 1.0;             // x^a e^{-bx} minus c x^{a+1} e^{-bx}
    double bump_rate = 1.5;
    bool bump_transfer = false;          // bump describes v0; u0 is its image under 1/F
    double powerlaw_beta = 0.3;
    std::string initial_file;
    bool initial_transformed = false;
    std::vector<double> times;           // explicit schedule, overrides t_end/t_step
    double t_end = 5.0;
    double t_step = 0.5;
    double fit_t0 = 2.0;
    double fit_t1 = 5.0;
    int n_max = 8;
    bool project_mass = false;
    bool transformed = false;            // emit the internal variable
    std::string out = "out";
    std::uint64_t seed = 0;

    std::vector<double> schedule() const;
};

// throws Error(InvalidArgument) with the key and line on any problem
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
// applies one key = value pair (also used for command line overrides)
void set_config_value(ExperimentConfig& c, const std::string& key, const std::string& value);
// range and consistency checks, run before any computation
void validate_config(const ExperimentConfig& c);

}  // namespace frag
