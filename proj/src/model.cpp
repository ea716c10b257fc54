// model.cpp — Occupations and tilted generator assembly

#include "qbat/model.hpp"

#include <cmath>
#include <sstream>

#include "qbat/errors.hpp"

namespace qbat {

std::string to_string(Variant v)
{
    return v == Variant::verbatim ? "verbatim" : "trace-preserving";
}

Variant parse_variant(const std::string& text)
{
    if (text == "verbatim") return Variant::verbatim;
    if (text == "trace-preserving" || text == "trace_preserving") return Variant::trace_preserving;
    throw Error(ErrorKind::Domain, "unknown generator variant '" + text + "'");
}

double bose_occupation(double gap, double T)
{
    if (!(gap > 0.0)) throw Error(ErrorKind::Domain, "bose_occupation: gap must be > 0");
    if (!(T > 0.0)) throw Error(ErrorKind::Domain, "bose_occupation: temperature must be > 0");
    const double x = gap / T;
    if (x > 700.0) return 0.0;
    return 1.0 / std::expm1(x);
}

Occupations occupations(const BatteryParams& p)
{
    Occupations o;
    o.n_h = bose_occupation(p.eps_a - p.eps, p.T_h);
    o.n_c = bose_occupation(p.eps_b - p.eps, p.T_c);
    o.n_ell = bose_occupation(p.eps_a - p.eps_b, p.T_ell);
    o.tilde_n_h = 1.0 + o.n_h;
    o.tilde_n_c = 1.0 + o.n_c;
    o.tilde_n_ell = 1.0 + o.n_ell;
    o.gbar = p.r * (o.n_h + o.n_c);
    o.gamma12 = p.r * (p.p_c * o.n_c + p.p_h * o.n_h) / 2.0;
    return o;
}

std::vector<std::string> validate_params(const BatteryParams& p)
{
    std::vector<std::string> out;
    const double all[] = {p.T_c, p.T_h, p.T_ell, p.eps, p.eps_b, p.eps_a,
                          p.p_c, p.p_h, p.tau, p.r, p.g};
    for (double v : all) {
        if (!std::isfinite(v)) {
            out.emplace_back("all parameters finite");
            break;
        }
    }
    if (!(p.eps > 0.0)) out.emplace_back("0 < eps");
    if (!(p.eps < p.eps_b)) out.emplace_back("eps < eps_b");
    if (!(p.eps_b < p.eps_a)) out.emplace_back("eps_b < eps_a");
    if (!(p.T_c > 0.0)) out.emplace_back("T_c > 0");
    if (!(p.T_h > 0.0)) out.emplace_back("T_h > 0");
    if (!(p.T_ell > 0.0)) out.emplace_back("T_ell > 0");
    if (!(p.p_c >= 0.0 && p.p_c <= 1.0)) out.emplace_back("p_c in [0,1]");
    if (!(p.p_h >= 0.0 && p.p_h <= 1.0)) out.emplace_back("p_h in [0,1]");
    if (!(p.tau >= 0.0)) out.emplace_back("tau >= 0");
    if (!(p.r > 0.0)) out.emplace_back("r > 0");
    if (!(p.g >= 0.0)) out.emplace_back("g >= 0");
    return out;
}

void require_valid(const BatteryParams& params)
{
    const auto violations = validate_params(params);
    if (violations.empty()) return;
    std::ostringstream msg;
    msg << "invalid battery parameters:";
    for (const auto& v : violations) msg << " [" << v << "]";
    throw Error(ErrorKind::InvalidParams, msg.str());
}

GeneratorMatrix build_generator(const BatteryParams& p, double lambda, Variant variant)
{
    require_valid(p);
    const Occupations o = occupations(p);

    // Gamma_1x = Gamma_2x = r, Gamma_x = 2r, Gamma_12x = r p_x.
    const double r = p.r;
    const double gamma_h = 2.0 * r;
    const double gamma_c = 2.0 * r;
    const double gamma12c = r * p.p_c;
    const double gamma12h = r * p.p_h;
    const double g2 = p.g * p.g;
    const double pump_out = r * o.n_h + r * o.n_c;
    const double coh = o.gamma12;
    const double row3_factor = variant == Variant::trace_preserving ? 2.0 : 1.0;

    GeneratorMatrix gm;
    gm.lambda = lambda;
    gm.variant = variant;
    Matrix5& L = gm.entries;
    L << -pump_out, 0.0, r * o.tilde_n_h, r * o.tilde_n_c, -2.0 * coh,
         0.0, -pump_out, r * o.tilde_n_h, r * o.tilde_n_c, -2.0 * coh,
         r * o.n_c, r * o.n_c, -gamma_h * o.tilde_n_h - g2 * o.tilde_n_ell,
             g2 * o.n_ell * std::exp(-lambda), row3_factor * gamma12c * o.n_c,
         r * o.n_h, r * o.n_h, g2 * o.tilde_n_ell * std::exp(lambda),
             -g2 * o.n_ell - gamma_c * o.tilde_n_c, 2.0 * gamma12h * o.n_h,
         -coh, -coh, gamma12h * o.tilde_n_h, 2.0 * gamma12c * o.tilde_n_c, -o.gbar - p.tau;
    return gm;
}

} // namespace qbat
