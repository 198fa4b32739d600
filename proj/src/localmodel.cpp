#include "neckspec/localmodel.hpp"
#include "neckspec/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace neckspec {

namespace {

using cplx = std::complex<double>;
using state = std::vector<cplx>;

cplx product(const state& z) {
    cplx acc = 1.0;
    for (const cplx& zi : z) acc *= zi;
    return acc;
}

// dz_j / deta for the rotated horizontal field.
state velocity(const state& z, const cplx& phase) {
    const std::size_t m = z.size();
    state dpi(m);   // partial_j pi = prod_{i != j} z_i
    for (std::size_t j = 0; j < m; ++j) {
        cplx acc = 1.0;
        for (std::size_t i = 0; i < m; ++i)
            if (i != j) acc *= z[i];
        dpi[j] = acc;
    }
    double norm2 = 0.0;
    for (const cplx& d : dpi) norm2 += std::norm(d);
    state v(m);
    for (std::size_t j = 0; j < m; ++j) v[j] = phase * std::conj(dpi[j]) / norm2;
    return v;
}

state rk4_step(const state& z, double h, const cplx& phase) {
    const std::size_t m = z.size();
    state k1 = velocity(z, phase);
    state tmp(m);
    for (std::size_t j = 0; j < m; ++j) tmp[j] = z[j] + 0.5 * h * k1[j];
    state k2 = velocity(tmp, phase);
    for (std::size_t j = 0; j < m; ++j) tmp[j] = z[j] + 0.5 * h * k2[j];
    state k3 = velocity(tmp, phase);
    for (std::size_t j = 0; j < m; ++j) tmp[j] = z[j] + h * k3[j];
    state k4 = velocity(tmp, phase);
    state out(m);
    for (std::size_t j = 0; j < m; ++j)
        out[j] = z[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    return out;
}

double dist_sing_sq(const state& z) {
    // Sing is the union of codimension-2 coordinate planes {z_i = z_j = 0};
    // the squared distance is the sum of the two smallest moduli squared.
    std::vector<double> m2;
    for (const cplx& zi : z) m2.push_back(std::norm(zi));
    std::sort(m2.begin(), m2.end());
    return m2[0] + m2[1];
}

} // namespace

FlowTrace flow_retraction(int p, double s, double theta, state start, double tol) {
    if (p != 1 && p != 2)
        throw domain_error("flow_retraction: p must be 1 or 2");
    if (!(s > 0.0 && s <= 1e-2))
        throw domain_error("flow_retraction: s must lie in (0, 1e-2]");
    if (!(tol > 0.0 && tol < 1.0))
        throw domain_error("flow_retraction: tol must lie in (0, 1)");
    if (static_cast<int>(start.size()) != p + 1)
        throw domain_error("flow_retraction: start must have p + 1 coordinates");
    if (std::abs(start[p]) != 0.0)
        throw domain_error("flow_retraction: start must lie on the z_p = 0 component");
    for (int j = 0; j < p; ++j) {
        const double m = std::abs(start[j]);
        if (!(m > 0.5 && m < 2.0))
            throw domain_error("flow_retraction: start moduli must lie in (0.5, 2)");
    }

    const cplx phase = std::polar(1.0, theta);
    const double r_ball = std::pow(s, 1.0 / (4.0 * p));   // nu = p

    FlowTrace trace;
    trace.p = p;
    trace.s = s;
    trace.theta = theta;
    state z = start;
    const state z0 = start;
    double eta = 0.0;
    double h = s / 16.0;
    trace.etas.push_back(0.0);
    trace.points.push_back(z);
    trace.pi_defect.push_back(std::abs(product(z)));

    while (eta < s) {
        h = std::min(h, s - eta);
        if (h < 1e-18 * s)
            throw convergence_error("flow_retraction: step underflow at eta = " +
                                    std::to_string(eta));
        state full = rk4_step(z, h, phase);
        state half = rk4_step(rk4_step(z, h / 2.0, phase), h / 2.0, phase);
        double err = 0.0;
        for (std::size_t j = 0; j < z.size(); ++j)
            err = std::max(err, std::abs(full[j] - half[j]) / 15.0);

        if (err <= tol) {
            z = half;
            eta += h;
            if (dist_sing_sq(z) <= r_ball * r_ball)
                throw flow_error("flow_retraction: trajectory entered the r = " +
                                 std::to_string(r_ball) +
                                 " ball of the singular stratum");
            trace.etas.push_back(eta);
            trace.points.push_back(z);
            const double defect = std::abs(product(z) - eta * phase);
            trace.pi_defect.push_back(defect);
            trace.max_pi_defect = std::max(trace.max_pi_defect, defect);
            ++trace.steps;
        }
        const double grow =
            err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 4.0;
        h *= std::clamp(grow, 0.1, 4.0);
    }

    double disp2 = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) disp2 += std::norm(z[j] - z0[j]);
    trace.displacement = std::sqrt(disp2);
    return trace;
}

double lojasiewicz_ratio_min(int p, long n_samples, unsigned long seed, double radius) {
    if (p != 1 && p != 2)
        throw domain_error("lojasiewicz_ratio_min: p must be 1 or 2");
    if (n_samples < 10000)
        throw domain_error("lojasiewicz_ratio_min: need at least 1e4 samples");
    if (!(radius > 0.0))
        throw domain_error("lojasiewicz_ratio_min: radius must be positive");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double best = 1e300;
    state z(p + 1);
    for (long t = 0; t < n_samples; ++t) {
        for (int j = 0; j <= p; ++j) {
            const double r = radius * std::sqrt(unif(rng));
            const double phi = 2.0 * std::numbers::pi * unif(rng);
            z[j] = std::polar(r, phi);
        }
        double dpi2 = 0.0;
        for (int j = 0; j <= p; ++j) {
            cplx acc = 1.0;
            for (int i = 0; i <= p; ++i)
                if (i != j) acc *= z[i];
            dpi2 += std::norm(acc);
        }
        const double d2 = dist_sing_sq(z);
        if (!(d2 > 0.0)) continue;
        double denom = 1.0;
        for (int q = 0; q < p; ++q) denom *= d2;
        best = std::min(best, dpi2 / denom);
    }
    return best;
}

std::pair<double, double> neck_measure_identity_check(double s, double quad_tol,
                                                      int grid_points) {
    if (!(s > 0.0 && s < 0.5))
        throw domain_error("neck_measure_identity_check: s must lie in (0, 0.5)");
    if (grid_points < 1)
        throw domain_error("neck_measure_identity_check: need at least 1 grid point");

    // Chart embedding of {z_0 z_1 = s}: F(u, theta) = (e^{u + i theta},
    // s e^{-u - i theta}). The induced volume density is recovered by
    // central finite differences so the identity is checked numerically,
    // not by reusing the closed form.
    const double delta = std::max(1e-6, std::sqrt(quad_tol) * 1e-2);
    auto embed = [&](double u, double th) -> std::array<cplx, 2> {
        const cplx w = std::exp(cplx(u, th));
        return {w, s / w};
    };
    auto density_fd = [&](double u, double th) {
        auto fp_u = embed(u + delta, th);
        auto fm_u = embed(u - delta, th);
        auto fp_t = embed(u, th + delta);
        auto fm_t = embed(u, th - delta);
        cplx du0 = (fp_u[0] - fm_u[0]) / (2.0 * delta);
        cplx du1 = (fp_u[1] - fm_u[1]) / (2.0 * delta);
        cplx dt0 = (fp_t[0] - fm_t[0]) / (2.0 * delta);
        cplx dt1 = (fp_t[1] - fm_t[1]) / (2.0 * delta);
        const double E = std::norm(du0) + std::norm(du1);
        const double G = std::norm(dt0) + std::norm(dt1);
        const double F = (du0 * std::conj(dt0) + du1 * std::conj(dt1)).real();
        return std::sqrt(std::max(E * G - F * F, 0.0));
    };

    const double L = std::log(1.0 / s);
    double rmin = 1e300, rmax = -1e300;
    const int nu = grid_points, nt = std::max(grid_points / 3, 1);
    for (int iu = 0; iu < nu; ++iu) {
        const double u = (nu == 1) ? -L / 2.0 : -L * (iu + 0.5) / nu;
        for (int it = 0; it < nt; ++it) {
            const double th = 2.0 * std::numbers::pi * (it + 0.5) / nt;
            auto zz = embed(u, th);
            const double W =
                s * s * (1.0 / std::norm(zz[0]) + 1.0 / std::norm(zz[1]));
            const double ratio = density_fd(u, th) / W;
            rmin = std::min(rmin, ratio);
            rmax = std::max(rmax, ratio);
        }
    }
    return {rmin, rmax};
}

double log_weight_scale_check(int p, double s, int n_windows) {
    if (p != 1 && p != 2)
        throw domain_error("log_weight_scale_check: p must be 1 or 2");
    if (!(s > 0.0 && s < 1.0))
        throw domain_error("log_weight_scale_check: s must lie in (0, 1)");
    if (n_windows < 1)
        throw domain_error("log_weight_scale_check: need at least 1 window");
    if (std::pow(2.0, -n_windows) < s)
        throw domain_error("log_weight_scale_check: chart spans fewer than " +
                           std::to_string(n_windows) + " factor-2 windows");

    const int samples = 16;   // log-spaced per modulus per window
    auto weight = [&](const std::vector<double>& mods) {
        double prod = 1.0;
        for (double m : mods) prod *= m;
        const double m0 = s / prod;   // |z_0| determined by pi = s
        double acc = 1.0 / (m0 * m0);
        for (double m : mods) acc += 1.0 / (m * m);
        return s * s * acc;
    };

    double worst = 1.0;
    std::vector<int> win(p, 0);
    while (true) {
        // Scan this window with a log-spaced grid in each modulus.
        double wmin = 1e300, wmax = -1e300;
        std::vector<int> idx(p, 0);
        while (true) {
            std::vector<double> mods(p);
            for (int i = 0; i < p; ++i) {
                const double hi = std::pow(2.0, -win[i]);
                const double frac =
                    samples == 1 ? 0.5 : static_cast<double>(idx[i]) / (samples - 1);
                mods[i] = hi * std::pow(0.5, frac);
            }
            const double w = weight(mods);
            wmin = std::min(wmin, w);
            wmax = std::max(wmax, w);
            int c = 0;
            while (c < p && ++idx[c] == samples) idx[c++] = 0;
            if (c == p) break;
        }
        worst = std::max(worst, wmax / wmin);
        int c = 0;
        while (c < p && ++win[c] == n_windows) win[c++] = 0;
        if (c == p) break;
    }
    return worst;
}

} // namespace neckspec
