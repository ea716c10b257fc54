// fcs.cpp — Tilted-generator eigenvalue tracking and stencil cumulants

#include "qbat/fcs.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "qbat/dynamics.hpp"
#include "qbat/errors.hpp"

namespace qbat {

namespace {

// Eigenvalues are resolved in extended precision: fourth-order stencils at
// h = 5e-3 amplify eigenvalue roundoff by ~h^-4.
using Real = long double;
using MatrixL = Eigen::Matrix<Real, 5, 5>;
using Complex = std::complex<Real>;

constexpr int kHalfWidth = 4;
constexpr double kImagTol = 1e-10;
constexpr double kTieTol = 1e-10;
constexpr double kContinuationStep = 0.01;

class TiltedGenerator {
public:
    TiltedGenerator(const BatteryParams& params, Variant variant)
        : base_(build_generator(params, 0.0, variant).entries.cast<Real>()),
          absorb_(base_(2, 3)),
          emit_(base_(3, 2))
    {
    }

    MatrixL at(Real lambda) const
    {
        MatrixL m = base_;
        m(2, 3) = absorb_ * std::exp(-lambda);
        m(3, 2) = emit_ * std::exp(lambda);
        return m;
    }

    Eigen::Matrix<Complex, 5, 1> eigenvalues(Real lambda) const
    {
        Eigen::EigenSolver<MatrixL> solver(at(lambda), false);
        return solver.eigenvalues();
    }

private:
    MatrixL base_;
    Real absorb_;
    Real emit_;
};

// Anchor at lambda = 0. For the trace-preserving generator this is the
// stationary eigenvalue (zero, via the left null vector), which is the
// leading one whenever the generator is stable. Otherwise the eigenvalue of
// largest real part.
Complex anchor_eigenvalue(const Eigen::Matrix<Complex, 5, 1>& ev, Variant variant)
{
    int best = 0;
    for (int i = 1; i < 5; ++i) {
        const bool better = variant == Variant::trace_preserving
                                ? std::abs(ev(i)) < std::abs(ev(best))
                                : ev(i).real() > ev(best).real();
        if (better) best = i;
    }
    for (int i = 0; i < 5; ++i) {
        if (i == best) continue;
        const bool tie = variant == Variant::trace_preserving
                             ? std::abs(ev(i) - ev(best)) < kTieTol
                             : std::abs(ev(i).real() - ev(best).real()) < kTieTol &&
                                   std::abs(ev(i) - std::conj(ev(best))) > kTieTol;
        if (tie) {
            throw Error(ErrorKind::BranchAmbiguous,
                        "dominant_eigenvalue: leading eigenvalues tie at lambda = 0");
        }
    }
    return ev(best);
}

Complex continue_branch(const Eigen::Matrix<Complex, 5, 1>& ev, Complex previous, double lambda)
{
    int nearest = 0;
    int second = -1;
    for (int i = 1; i < 5; ++i) {
        const Real d = std::abs(ev(i) - previous);
        if (d < std::abs(ev(nearest) - previous)) {
            second = nearest;
            nearest = i;
        } else if (second < 0 || d < std::abs(ev(second) - previous)) {
            second = i;
        }
    }
    const Complex pick = ev(nearest);
    if (std::abs(pick.imag()) >= kImagTol) {
        throw Error(ErrorKind::ComplexDominant,
                    "dominant_eigenvalue: selected branch is complex at lambda = " +
                        std::to_string(lambda));
    }
    const Real gap = std::abs(ev(second) - previous) - std::abs(pick - previous);
    if (gap < kTieTol && std::abs(ev(second).real() - pick.real()) < kTieTol) {
        throw Error(ErrorKind::BranchAmbiguous,
                    "dominant_eigenvalue: continuation cannot separate two branches at lambda = " +
                        std::to_string(lambda));
    }
    return pick;
}

std::vector<Real> branch_values(const TiltedGenerator& gen, const std::vector<double>& path,
                                Variant variant)
{
    std::vector<Real> out;
    out.reserve(path.size());
    Complex current{};
    for (std::size_t k = 0; k < path.size(); ++k) {
        const auto ev = gen.eigenvalues(static_cast<Real>(path[k]));
        current = k == 0 ? anchor_eigenvalue(ev, variant) : continue_branch(ev, current, path[k]);
        if (k == 0 && std::abs(current.imag()) >= kImagTol) {
            throw Error(ErrorKind::ComplexDominant, "dominant_eigenvalue: complex leader at lambda = 0");
        }
        out.push_back(current.real());
    }
    return out;
}

void check_path(const std::vector<double>& path)
{
    if (path.empty() || path.front() != 0.0) {
        throw Error(ErrorKind::Domain, "dominant_branch: path must start at lambda = 0");
    }
    for (std::size_t k = 1; k < path.size(); ++k) {
        if (std::abs(path[k]) <= std::abs(path[k - 1]) || path[k] * path[1] <= 0.0) {
            throw Error(ErrorKind::Domain, "dominant_branch: path must move monotonically away from 0");
        }
    }
}

} // namespace

std::vector<long double> centered_stencil(int order, int half_width)
{
    if (order < 0 || half_width < 1 || order > 2 * half_width) {
        throw Error(ErrorKind::Domain, "centered_stencil: unsupported order/width");
    }
    const int n = 2 * half_width + 1;
    std::vector<Real> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = static_cast<Real>(i - half_width);

    // c[i][k]: weight of node i for derivative k.
    std::vector<std::vector<Real>> c(static_cast<std::size_t>(n),
                                     std::vector<Real>(static_cast<std::size_t>(order + 1), 0.0L));
    Real c1 = 1.0L;
    Real c4 = x[0];
    c[0][0] = 1.0L;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, order);
        Real c2 = 1.0L;
        const Real c5 = c4;
        c4 = x[static_cast<std::size_t>(i)];
        for (int j = 0; j < i; ++j) {
            const Real c3 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
            c2 *= c3;
            auto& ci = c[static_cast<std::size_t>(i)];
            auto& cj = c[static_cast<std::size_t>(j)];
            if (j == i - 1) {
                const auto& prev = c[static_cast<std::size_t>(i - 1)];
                for (int k = mn; k >= 1; --k) {
                    ci[static_cast<std::size_t>(k)] =
                        c1 * (k * prev[static_cast<std::size_t>(k - 1)] - c5 * prev[static_cast<std::size_t>(k)]) / c2;
                }
                ci[0] = -c1 * c5 * prev[0] / c2;
            }
            for (int k = mn; k >= 1; --k) {
                cj[static_cast<std::size_t>(k)] =
                    (c4 * cj[static_cast<std::size_t>(k)] - k * cj[static_cast<std::size_t>(k - 1)]) / c3;
            }
            cj[0] = c4 * cj[0] / c3;
        }
        c1 = c2;
    }
    std::vector<Real> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(order)];
    return w;
}

std::vector<double> dominant_branch(const BatteryParams& params, const std::vector<double>& path,
                                    Variant variant)
{
    check_path(path);
    const TiltedGenerator gen(params, variant);
    const auto values = branch_values(gen, path, variant);
    return {values.begin(), values.end()};
}

double dominant_eigenvalue(const BatteryParams& params, double lambda, Variant variant,
                           double lambda_max)
{
    if (!std::isfinite(lambda) || std::abs(lambda) > lambda_max) {
        throw Error(ErrorKind::Domain, "dominant_eigenvalue: |lambda| exceeds lambda_max");
    }
    std::vector<double> path{0.0};
    const int steps = static_cast<int>(std::ceil(std::abs(lambda) / kContinuationStep));
    for (int k = 1; k <= steps; ++k) path.push_back(lambda * k / steps);
    const TiltedGenerator gen(params, variant);
    return static_cast<double>(branch_values(gen, path, variant).back());
}

RawCumulants raw_cumulants(const BatteryParams& params, Variant variant, const CumulantOptions& options)
{
    const double h = options.step;
    if (!(h > 0.0) || kHalfWidth * h > options.lambda_max) {
        throw Error(ErrorKind::Domain, "cumulants: stencil exceeds lambda_max");
    }
    const TiltedGenerator gen(params, variant);

    // One continuation per side covering both the h and h/2 grids.
    const std::vector<double> offsets{0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0};
    std::vector<double> plus, minus;
    for (double o : offsets) {
        plus.push_back(o * h);
        minus.push_back(-o * h);
    }
    const auto s_plus = branch_values(gen, plus, variant);
    const auto s_minus = branch_values(gen, minus, variant);
    const auto at = [&](double multiple) -> Real {
        const double a = std::abs(multiple);
        const auto it = std::find(offsets.begin(), offsets.end(), a);
        const auto idx = static_cast<std::size_t>(it - offsets.begin());
        return multiple >= 0.0 ? s_plus[idx] : s_minus[idx];
    };

    RawCumulants out;
    for (int order = 1; order <= 4; ++order) {
        const auto w = centered_stencil(order, kHalfWidth);
        Real coarse = 0.0L;
        Real fine = 0.0L;
        for (int k = -kHalfWidth; k <= kHalfWidth; ++k) {
            const Real wk = w[static_cast<std::size_t>(k + kHalfWidth)];
            coarse += wk * at(static_cast<double>(k));
            fine += wk * at(0.5 * k);
        }
        const Real hl = static_cast<Real>(h);
        coarse /= std::pow(hl, order);
        fine /= std::pow(hl / 2.0L, order);
        const auto i = static_cast<std::size_t>(order - 1);
        out.coarse[i] = static_cast<double>(coarse);
        out.fine[i] = static_cast<double>(fine);
        const double scale = std::max(std::abs(out.coarse[i]), std::abs(out.fine[i]));
        out.stable[i] = std::isfinite(out.coarse[i]) && std::isfinite(out.fine[i]) &&
                        std::abs(out.coarse[i] - out.fine[i]) <= options.richardson_tol * scale;
    }
    return out;
}

CumulantSet cumulants(const BatteryParams& params, Variant variant, const CumulantOptions& options)
{
    const BatteryParams baseline = params.coherence_free();
    const RawCumulants raw = raw_cumulants(params, variant, options);
    const RawCumulants raw0 = params == baseline ? raw : raw_cumulants(baseline, variant, options);

    CumulantSet out;
    out.h_used = options.step;
    for (std::size_t i = 0; i < 4; ++i) {
        out.j[i] = raw.coarse[i];
        out.j0[i] = raw0.coarse[i];
        out.unstable[i] = !raw.stable[i] || !raw0.stable[i];
        out.baseline_degenerate[i] = !(std::abs(out.j0[i]) >= options.baseline_floor);
        out.C[i] = out.baseline_degenerate[i] ? std::numeric_limits<double>::quiet_NaN()
                                              : out.j[i] / out.j0[i];
        out.valid[i] = !out.unstable[i] && !out.baseline_degenerate[i];
    }
    return out;
}

double cavity_flux(const BatteryParams& params, const StateVector& state)
{
    const Occupations o = occupations(params);
    const double g2 = params.g * params.g;
    return g2 * (o.tilde_n_ell * state.rho_bb - o.n_ell * state.rho_aa);
}

double first_cumulant_flux(const BatteryParams& params, Variant variant)
{
    return cavity_flux(params, steady_state(params, variant));
}

} // namespace qbat
