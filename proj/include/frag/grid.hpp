#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace frag {

enum class VariableTag { Original, Transformed };

const char* tag_name(VariableTag t);

// Samples on a log-uniform abscissa. Evolution code always works in the
// transformed variable.
struct GridFunction {
    std::vector<double> xs;
    std::vector<double> values;
    VariableTag tag = VariableTag::Transformed;

    std::size_t size() const { return xs.size(); }
    double log_step() const;
    double xmin() const { return xs.front(); }
    double xmax() const { return xs.back(); }
    // same abscissa, zero values
    GridFunction zeros_like() const;
};

struct GridSpec {
    double xmin = 1e-12;
    double xmax = 1e2;
    std::size_t points = 8192;
};

GridFunction make_log_grid(const GridSpec& spec, VariableTag tag = VariableTag::Transformed);
GridFunction make_log_grid(double xmin, double xmax, std::size_t n,
                           VariableTag tag = VariableTag::Transformed);
GridFunction sample_on(const GridFunction& templ, const std::function<double(double)>& f);

// throws InvalidArgument if xs are not log-uniform within 1e-12 or values are not finite
void check_grid(const GridFunction& f, bool require_standard_span = true);

// u ~ C x^{-a} e^{-b x}, fitted on the last few points
struct TailModel {
    bool valid = false;
    double logC = 0.0;
    double sign = 1.0;
    double a = 0.0;
    double b = 0.0;
    double eval(double x) const;
};

TailModel fit_tail(const std::vector<double>& xs, const std::vector<double>& vs, int npts = 5);

// local power law u ~ u0 (x/x0)^c from the first two points
struct PowerLaw {
    double x0 = 0.0, u0 = 0.0, c = 0.0;
    double eval(double x) const;
};
PowerLaw fit_left_power(const GridFunction& f);
PowerLaw fit_right_power(const GridFunction& f);

// cubic Lagrange interpolation in log x, power-law extrapolation on the left,
// tail model on the right
class GridSampler {
public:
    explicit GridSampler(const GridFunction& f);
    double operator()(double x) const;
    const GridFunction& grid() const { return *f_; }

private:
    const GridFunction* f_;
    double y0_, h_;
    PowerLaw left_;
    TailModel right_;
};

// (∫ |u|^2 x^{w} dx)^{1/2}, trapezoid in log x
double l2_norm(const GridFunction& u, double weight_exp = 0.0);
double l2_distance(const GridFunction& a, const GridFunction& b, double weight_exp = 0.0);
// ∫ x^{s-1} u dx on the grid only (no tail corrections)
double grid_moment(const GridFunction& u, double s);

GridFunction axpy(double alpha, const GridFunction& x, const GridFunction& y);  // alpha x + y
GridFunction scaled(const GridFunction& x, double alpha);

}  // namespace frag

namespace frag {

// time series of snapshots; norms are ∫ |u|^2 x^{2/γ-1} dx square roots
struct Trajectory {
    std::vector<double> times;
    std::vector<GridFunction> snapshots;
    std::vector<double> norms;
    std::vector<double> masses;
};

}  // namespace frag
