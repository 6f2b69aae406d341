#include "vguard/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace vguard {

namespace {

// 21-point Kronrod nodes (non-negative half) and weights, with the embedded
// 10-point Gauss weights on the odd nodes.
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208836686917, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gauss_kronrod(const RealFn& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double resk = fc * kWgk[10];
    double resg = 0.0;
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const double sum = f(centre - dx) + f(centre + dx);
        resk += kWgk[j] * sum;
        if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    resk *= half;
    resg *= half;
    const double err = std::abs(resk - resg);
    return {a, b, resk, err};
}

}  // namespace

double integrate_finite(const RealFn& f, double a, double b, const QuadratureSpec& spec,
                        std::span<const double> breakpoints) {
    if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0))
        throw std::invalid_argument("quadrature tolerances must be positive");
    if (a > b) throw std::invalid_argument("integrate_finite requires a <= b");
    if (a == b) return 0.0;

    std::vector<double> cuts{a};
    for (double p : breakpoints)
        if (p > a && p < b) cuts.push_back(p);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<Panel> queue;
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Panel p = gauss_kronrod(f, cuts[i], cuts[i + 1]);
        total += p.value;
        total_err += p.error;
        queue.push(p);
    }

    int splits = 0;
    while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (splits >= spec.max_subdivisions)
            throw QuadratureError("integrate_finite: no convergence within subdivision limit", total,
                                  total_err);
        Panel worst = queue.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval cannot be split further in double precision.
            if (worst.error <= 1e3 * std::numeric_limits<double>::epsilon() * std::abs(total)) break;
            throw QuadratureError("integrate_finite: interval exhausted", total, total_err);
        }
        queue.pop();
        Panel left = gauss_kronrod(f, worst.a, mid);
        Panel right = gauss_kronrod(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++splits;
        if (splits % 64 == 0) {
            // Re-sum to limit drift from incremental updates.
            std::priority_queue<Panel> copy = queue;
            total = total_err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                total_err += copy.top().error;
                copy.pop();
            }
        }
    }
    return total;
}

double integrate_semiinfinite(const RealFn& f, double a, const TailBound& tail_bound,
                              const QuadratureSpec& spec, double scale,
                              std::span<const double> breakpoints) {
    if (!(scale > 0.0)) throw std::invalid_argument("integrate_semiinfinite: scale must be positive");
    constexpr int kMaxPanels = 200;

    double lo = a, width = scale, total = 0.0;
    for (int panel = 0; panel < kMaxPanels; ++panel) {
        const double hi = lo + width;
        total += integrate_finite(f, lo, hi, spec, breakpoints);
        const double tail = tail_bound(hi);
        if (std::isfinite(tail) && tail <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total)))
            return total;
        lo = hi;
        width *= 2.0;
    }
    throw QuadratureError("integrate_semiinfinite: tail bound never fell below tolerance", total,
                          tail_bound(lo));
}

}  // namespace vguard
