#include "frag/mellin.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "frag/error.hpp"

namespace frag {

namespace {

struct Ends {
    double x0, f0, cL;
    double xN, fN, cR;
};

// An end is treated as roundoff when it is tiny against the peak and the first
// few samples do not follow a single power law (inverse transforms leave such
// noise near x = 0).
bool noisy_end(const GridFunction& f, bool left, double peak) {
    const std::size_t n = f.size();
    if (n < 8) return false;
    auto at = [&](std::size_t k) { return left ? f.values[k] : f.values[n - 1 - k]; };
    if (std::abs(at(0)) > 1e-6 * peak) return false;
    for (std::size_t k = 0; k < 4; ++k)
        if (at(k) == 0.0 || (at(k) > 0) != (at(0) > 0)) return true;
    double c1 = std::log(std::abs(at(1) / at(0))), c2 = std::log(std::abs(at(3) / at(2)));
    return std::abs(c1 - c2) > 0.5 * f.log_step() + 1e-3 * (std::abs(c1) + std::abs(c2));
}

Ends end_model(const GridFunction& f) {
    Ends e;
    PowerLaw l = fit_left_power(f), r = fit_right_power(f);
    double peak = 0.0;
    for (double v : f.values) peak = std::max(peak, std::abs(v));
    e.x0 = f.xs.front();
    e.f0 = noisy_end(f, true, peak) ? 0.0 : f.values.front();
    e.cL = l.c;
    e.xN = f.xs.back();
    e.fN = noisy_end(f, false, peak) ? 0.0 : f.values.back();
    e.cR = r.c;
    return e;
}

void check_strip(const Ends& e, cplx z) {
    if (e.f0 != 0.0 && z.real() + e.cL <= 0.0)
        throw Error(ErrorKind::StripViolation, "integrand does not decay at the left grid end");
    if (e.fN != 0.0 && z.real() + e.cR >= 0.0)
        throw Error(ErrorKind::StripViolation, "integrand does not decay at the right grid end");
}

// trapezoid sum over indices start, start+stride, ..., with x^z by recurrence
cplx trap_sum(const GridFunction& f, cplx z, std::size_t stride, std::size_t last) {
    const double h = f.log_step() * double(stride);
    const double y0 = std::log(f.xs.front());
    const cplx rot = std::exp(z * h);
    cplx p = std::exp(z * y0);
    cplx s = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j <= last; j += stride, ++count) {
        if (count % 64 == 0) p = std::exp(z * (y0 + f.log_step() * double(j)));
        double w = (j == 0 || j == last) ? 0.5 : 1.0;
        s += w * f.values[j] * p;
        p *= rot;
    }
    return s * h;
}

// Each end is continued as a power law, g(y) = g_end e^{κ(y - y_end)} in y = log x. The
// continuation integral plus the full Euler-Maclaurin series of an exponential sum to
// g_end (h/2) coth(κh/2), which makes the trapezoid rule exact for pure power-law ends.
cplx end_terms(const Ends& e, cplx z, double h) {
    cplx r = 0.0;
    if (e.f0 != 0.0) {
        cplx gl = e.f0 * std::exp(z * std::log(e.x0));
        r += gl * (0.5 * h) / std::tanh(0.5 * h * (z + e.cL));
    }
    if (e.fN != 0.0) {
        cplx gr = e.fN * std::exp(z * std::log(e.xN));
        r -= gr * (0.5 * h) / std::tanh(0.5 * h * (z + e.cR));
    }
    return r;
}

}  // namespace

ForwardResult forward_est(const GridFunction& f, cplx z) {
    Ends e = end_model(f);
    check_strip(e, z);
    const std::size_t n = f.size();
    const double h = f.log_step();
    ForwardResult r;
    r.value = trap_sum(f, z, 1, n - 1) + end_terms(e, z, h);
    std::size_t last2 = (n - 1) % 2 == 0 ? n - 1 : n - 2;
    cplx coarse = trap_sum(f, z, 2, last2);
    if (last2 != n - 1) {
        // close the gap with one fine trapezoid panel
        const double y = std::log(f.xs[n - 2]);
        coarse += 0.5 * h * (f.values[n - 2] * std::exp(z * y) +
                             f.values[n - 1] * std::exp(z * std::log(f.xs[n - 1])));
    }
    coarse += end_terms(e, z, 2.0 * h);
    r.error_estimate = std::abs(r.value - coarse) / 3.0;
    return r;
}

cplx forward(const GridFunction& f, cplx z) {
    Ends e = end_model(f);
    check_strip(e, z);
    return trap_sum(f, z, 1, f.size() - 1) + end_terms(e, z, f.log_step());
}

double first_moment(const GridFunction& u, double gamma) {
    return forward(u, cplx(2.0 / gamma, 0.0)).real();
}

ContourSamples forward_contour(const GridFunction& f, double delta, double lambda_max,
                               double dlambda) {
    ContourSamples c;
    c.delta = delta;
    const long K = long(std::ceil(lambda_max / dlambda));
    c.lambdas.resize(2 * K + 1);
    c.values.resize(2 * K + 1);
    for (long k = 0; k <= K; ++k) {
        cplx v = forward(f, cplx(delta, k * dlambda));
        c.lambdas[K + k] = k * dlambda;
        c.lambdas[K - k] = -k * dlambda;
        c.values[K + k] = v;
        c.values[K - k] = std::conj(v);
    }
    return c;
}

ContourSamples sample_contour(const MellinFn& F, double delta, double lambda_max,
                              double dlambda) {
    ContourSamples c;
    c.delta = delta;
    const long K = long(std::ceil(lambda_max / dlambda));
    c.lambdas.resize(2 * K + 1);
    c.values.resize(2 * K + 1);
    for (long k = -K; k <= K; ++k) {
        c.lambdas[K + k] = k * dlambda;
        c.values[K + k] = F(cplx(delta, k * dlambda));
    }
    return c;
}

double inverse(const ContourSamples& F, double x, double* imag) {
    const std::size_t n = F.lambdas.size();
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "too few contour samples");
    const double dl = F.lambdas[1] - F.lambdas[0];
    const double L = std::log(x);
    cplx s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
        s += w * F.values[k] * std::exp(cplx(0.0, -F.lambdas[k] * L));
    }
    s *= dl / (2.0 * std::numbers::pi) * std::pow(x, -F.delta);
    if (imag) *imag = s.imag();
    return s.real();
}

namespace {

// samples G(λ_k), k = 0..K on the half line, extended until the tail is negligible
struct HalfContour {
    double delta, dl, Lambda;
    std::vector<cplx> G;
    double tail_slope = 0.0;
    bool filtered = false;
};

HalfContour build_half(const std::function<cplx(double)>& G, double delta,
                       const InverseOptions& opt) {
    HalfContour hc;
    hc.delta = delta;
    hc.dl = opt.dlambda;
    double Lambda = opt.lambda_start;
    double prev_ratio = 0.0;
    auto extend_to = [&](double L) {
        long K = long(std::llround(L / hc.dl));
        for (long k = long(hc.G.size()); k <= K; ++k) {
            cplx v = G(k * hc.dl);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) v = 0.0;
            hc.G.push_back(v);
        }
    };
    for (;;) {
        extend_to(Lambda);
        double total = 0.0, band = 0.0;
        const std::size_t K = hc.G.size() - 1;
        for (std::size_t k = 0; k <= K; ++k) {
            double a = std::abs(hc.G[k]);
            total += a;
            if (double(k) * hc.dl >= 0.5 * Lambda) band += a;
        }
        if (band <= opt.tail_rel * total || total == 0.0) break;
        // a band that stopped shrinking far below the total is a roundoff floor
        const double ratio = band / total;
        if (ratio < 1e-7 && ratio > 0.5 * prev_ratio) {
            Lambda *= 0.5;
            hc.G.resize(std::size_t(std::llround(Lambda / hc.dl)) + 1);
            break;
        }
        prev_ratio = ratio;
        if (Lambda * 2.0 > opt.lambda_cap) {
            // log-log slope over the last decade
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            int m = 0;
            const std::size_t k0 = std::size_t(0.1 * Lambda / hc.dl);
            // envelope: maximum over short blocks
            const std::size_t blk = std::max<std::size_t>(1, (K - k0) / 64);
            for (std::size_t k = std::max<std::size_t>(k0, 1); k + blk <= K + 1; k += blk) {
                double mx = 0.0;
                for (std::size_t j = k; j < k + blk; ++j) mx = std::max(mx, std::abs(hc.G[j]));
                if (mx <= 0.0) continue;
                double lx = std::log((k + 0.5 * blk) * hc.dl), ly = std::log(mx);
                sx += lx;
                sy += ly;
                sxx += lx * lx;
                sxy += lx * ly;
                ++m;
            }
            double slope = m > 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : -100.0;
            hc.tail_slope = slope;
            if (opt.filter_order > 0) {
                hc.filtered = true;
            } else if (slope > -1.1) {
                throw Error(ErrorKind::TailTooFat,
                            "contour samples decay like |lambda|^" + std::to_string(slope));
            }
            break;
        }
        Lambda *= 2.0;
    }
    hc.Lambda = Lambda;
    if (hc.filtered || opt.filter_order > 0) {
        for (std::size_t k = 0; k < hc.G.size(); ++k) {
            double r = 2.0 * k * hc.dl / Lambda;
            hc.G[k] *= std::exp(-std::pow(r, 2.0 * opt.filter_order));
        }
        hc.filtered = true;
    }
    return hc;
}

double eval_half(const HalfContour& hc, double x) {
    const double L = std::log(x);
    const std::size_t K = hc.G.size() - 1;
    const cplx rot = std::exp(cplx(0.0, -hc.dl * L));
    cplx p = 1.0;
    double s = 0.5 * hc.G[0].real();
    for (std::size_t k = 1; k <= K; ++k) {
        if (k % 64 == 0)
            p = std::exp(cplx(0.0, -hc.dl * L * double(k)));
        else
            p *= rot;
        double w = (k == K) ? 0.5 : 1.0;
        s += w * (hc.G[k] * p).real();
    }
    return s * hc.dl / std::numbers::pi * std::pow(x, -hc.delta);
}

double saddle_delta(double delta, double x) {
    if (x <= std::max(delta, 1.0)) return delta;
    return std::min(150.0, std::max(delta, std::floor(x)));
}

double conj_residue(const std::function<cplx(cplx)>& F, double delta, double Lambda) {
    double worst = 0.0, scale = 1e-300;
    for (double l : {0.37, 0.3 * Lambda, 0.9 * Lambda}) {
        cplx a = F(cplx(delta, l)), b = F(cplx(delta, -l));
        worst = std::max(worst, std::abs(a - std::conj(b)));
        scale = std::max(scale, std::abs(a));
    }
    return worst / scale;
}

}  // namespace

GridFunction inverse_on_grid(const MellinFn& F, const GridFunction& templ,
                             const InverseOptions& opt, InverseReport* rep) {
    GridFunction out = templ.zeros_like();
    std::map<double, HalfContour> cache;
    InverseReport r;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double x = out.xs[i];
        const double d = opt.saddle ? saddle_delta(opt.delta, x) : opt.delta;
        auto it = cache.find(d);
        if (it == cache.end()) {
            HalfContour hc = build_half([&](double l) { return F(cplx(d, l)); }, d, opt);
            r.lambda_max = std::max(r.lambda_max, hc.Lambda);
            r.filtered = r.filtered || hc.filtered;
            r.tail_slope = hc.tail_slope;
            if (!opt.assume_real)
                r.max_imag_residue = std::max(r.max_imag_residue, conj_residue(F, d, hc.Lambda));
            it = cache.emplace(d, std::move(hc)).first;
        }
        out.values[i] = eval_half(it->second, x);
    }
    if (rep) *rep = r;
    return out;
}

double inverse_at(const MellinFn& F, double x, const InverseOptions& opt, InverseReport* rep) {
    const double d = opt.saddle ? saddle_delta(opt.delta, x) : opt.delta;
    HalfContour hc = build_half([&](double l) { return F(cplx(d, l)); }, d, opt);
    if (rep) {
        rep->lambda_max = hc.Lambda;
        rep->filtered = hc.filtered;
        rep->tail_slope = hc.tail_slope;
        rep->max_imag_residue = conj_residue(F, d, hc.Lambda);
    }
    return eval_half(hc, x);
}

PlancherelResult plancherel(const GridFunction& f) {
    PlancherelResult r;
    r.direct_side = l2_norm(f, 0.0);
    InverseOptions opt;
    opt.lambda_cap = 4096.0;
    HalfContour hc = build_half(
        [&](double l) {
            cplx v = forward(f, cplx(0.5, l));
            return v * std::conj(v);
        },
        0.5, opt);
    double s = 0.5 * hc.G[0].real();
    for (std::size_t k = 1; k < hc.G.size(); ++k)
        s += (k + 1 == hc.G.size() ? 0.5 : 1.0) * hc.G[k].real();
    s *= hc.dl / std::numbers::pi;
    r.contour_side = std::sqrt(std::max(0.0, s));
    r.mismatch = r.direct_side > 0 ? std::abs(r.contour_side - r.direct_side) / r.direct_side
                                   : r.contour_side;
    return r;
}

double plancherel_norm(const GridFunction& f) { return plancherel(f).contour_side; }

GridFunction apply_multiplier(const MellinFn& F, const GridFunction& f, double delta,
                              const InverseOptions& opt_in, InverseReport* rep) {
    InverseOptions opt = opt_in;
    opt.delta = delta;
    bool all_zero = std::all_of(f.values.begin(), f.values.end(), [](double v) { return v == 0.0; });
    if (all_zero) return f.zeros_like();
    // with saddle set, x > 2 is evaluated on the line Re z = 2^k <= x (k <= 5) so the
    // roundoff floor falls off with x like the data does
    auto level = [&](double x) {
        if (!opt.saddle || x <= std::max(delta, 2.0)) return delta;
        return std::max(delta, std::min(32.0, std::exp2(std::floor(std::log2(x)))));
    };
    std::map<double, HalfContour> cache;
    GridFunction out = f.zeros_like();
    InverseReport r;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double d = level(out.xs[i]);
        auto it = cache.find(d);
        if (it == cache.end()) {
            HalfContour hc = build_half(
                [&](double l) {
                    cplx z(d, l);
                    return F(z) * forward(f, z);
                },
                d, opt);
            r.lambda_max = std::max(r.lambda_max, hc.Lambda);
            r.filtered = r.filtered || hc.filtered;
            r.tail_slope = hc.tail_slope;
            it = cache.emplace(d, std::move(hc)).first;
        }
        out.values[i] = eval_half(it->second, out.xs[i]);
    }
    if (rep) *rep = r;
    return out;
}

}  // namespace frag
