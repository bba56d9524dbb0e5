#include "hmorrey/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

#include "hmorrey/errors.hpp"

namespace hmorrey {

namespace {

GaussRule build_gauss(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
            double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        double w = 2.0 / ((1.0 - z * z) * dp * dp);
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.x[n / 2] = 0.0;
    return r;
}

struct Simpson {
    double value;
    double error;
};

Simpson simpson(const std::function<double(double)>& G, double ua, double ub, double rel, double scale,
                const char* what) {
    auto eval = [&](double u) {
        double v = G(u);
        if (!std::isfinite(v)) throw DivergenceError(std::string(what) + ": integrand is not finite at r=" +
                                                     std::to_string(std::exp(u)));
        return v;
    };
    int n = std::max(8, 2 * static_cast<int>(std::ceil((ub - ua) / 0.7)));
    double h = (ub - ua) / n;
    // one-sided limits at the segment ends, which may sit on a jump
    const double ulps = 8 * std::numeric_limits<double>::epsilon() * std::max(std::abs(ua), std::abs(ub));
    const double nudge = std::min(std::max(1e-13 * (ub - ua), ulps), 1e-3 * (ub - ua));
    double ends = eval(ua + nudge) + eval(ub - nudge);
    double odd = 0.0, even = 0.0;
    for (int i = 1; i < n; ++i) (i % 2 ? odd : even) += eval(ua + i * h);
    double prev = h / 3 * (ends + 4 * odd + 2 * even);
    constexpr int kMaxIntervals = 1 << 22;
    while (true) {
        n *= 2;
        h /= 2;
        even += odd;
        odd = 0.0;
        for (int i = 1; i < n; i += 2) odd += eval(ua + i * h);
        double cur = h / 3 * (ends + 4 * odd + 2 * even);
        double diff = std::abs(cur - prev);
        double target = rel * std::max(std::abs(cur), scale);
        if (diff <= 15 * target || n >= kMaxIntervals || diff <= 1e-300) return {cur, diff / 15};
        prev = cur;
    }
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    static std::array<GaussRule, 129> cache;
    static std::array<std::once_flag, 129> once;
    if (n < 1 || n > 128) throw InputError("Gauss-Legendre order must be in 1..128");
    std::call_once(once[n], [n] { cache[n] = build_gauss(n); });
    return cache[n];
}

std::vector<double> shell_edges(double a, double b, int per_octave, std::span<const double> breaks) {
    std::vector<double> e{a, b};
    long k0 = static_cast<long>(std::ceil(std::log2(a) * per_octave));
    long k1 = static_cast<long>(std::floor(std::log2(b) * per_octave));
    for (long k = k0; k <= k1; ++k) {
        double r = std::exp2(static_cast<double>(k) / per_octave);
        if (r > a && r < b) e.push_back(r);
    }
    for (double br : breaks)
        if (br > a && br < b) e.push_back(br);
    std::sort(e.begin(), e.end());
    std::vector<double> out;
    for (double v : e)
        if (out.empty() || v > out.back() * (1 + 1e-12)) out.push_back(v);
    if (out.back() != b) out.back() = b;
    return out;
}

Integral integrate_log(const std::function<double(double)>& F, double a, double b, std::span<const double> breaks,
                       double rel_tol, const char* what) {
    if (!(a >= 0.0) || !(b > a)) throw InputError(std::string(what) + ": need 0 <= a < b");
    auto G = [&F](double u) {
        double r = std::exp(u);
        double v = F(r);
        return v == 0.0 ? 0.0 : v * r;
    };
    std::vector<double> pts;
    if (a > 0.0) pts.push_back(a);
    for (double br : breaks)
        if (br > a && br < b && std::isfinite(br)) pts.push_back(br);
    if (std::isfinite(b)) pts.push_back(b);
    if (pts.empty()) pts.push_back(1.0);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    KahanSum total;
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        Simpson s = simpson(G, std::log(pts[i]), std::log(pts[i + 1]), rel_tol, std::abs(total.value()), what);
        total.add(s.value);
        err += s.error;
    }

    auto march = [&](double u0, int dir) {
        const double step = std::numbers::ln2;
        double u = u0;
        double g_prev = std::abs(G(u0));
        int flat = 0;
        int zero_run = 0;
        while (true) {
            if (std::abs(u) > 350.0)
                throw DivergenceError(std::string(what) + ": tail at " + (dir > 0 ? "infinity" : "zero") +
                                      " could not be certified");
            double un = u + dir * step;
            Simpson s = simpson(G, std::min(u, un), std::max(u, un), rel_tol, std::abs(total.value()), what);
            total.add(s.value);
            err += s.error;
            double g_next = std::abs(G(un));
            if (g_next == 0.0 && s.value == 0.0) {
                if (++zero_run >= 2) return;
            } else {
                zero_run = 0;
                if (g_next > 0.0 && g_prev > 0.0) {
                    double c = std::log(g_prev / g_next) / step;
                    if (c > 1e-3) {
                        double tail = g_next / c;
                        if (tail <= 0.1 * rel_tol * std::abs(total.value()) || tail < 1e-300) {
                            err += tail;
                            return;
                        }
                        flat = 0;
                    } else if (++flat >= 8) {
                        throw DivergenceError(std::string(what) + " diverges at " +
                                              (dir > 0 ? "infinity" : "zero"));
                    }
                }
            }
            g_prev = g_next;
            u = un;
        }
    };
    if (!std::isfinite(b)) march(std::log(pts.back()), +1);
    if (a == 0.0) march(std::log(pts.front()), -1);
    return {total.value(), err};
}

}  // namespace hmorrey
