#include "fluxlab/bv1d.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace fluxlab {

double to_double(const Rational& r) {
    return double(r.numerator()) / double(r.denominator());
}

Rational Polynomial::eval(const Rational& x) const {
    Rational v = 0;
    for (size_t i = coeffs.size(); i-- > 0;) v = v * x + coeffs[i];
    return v;
}

double Polynomial::eval(double x) const {
    double v = 0.0;
    for (size_t i = coeffs.size(); i-- > 0;) v = v * x + to_double(coeffs[i]);
    return v;
}

Polynomial Polynomial::derivative() const {
    Polynomial d;
    for (size_t i = 1; i < coeffs.size(); ++i)
        d.coeffs.push_back(coeffs[i] * Rational(static_cast<long long>(i)));
    return d;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial r;
    r.coeffs.resize(std::max(coeffs.size(), o.coeffs.size()), Rational(0));
    for (size_t i = 0; i < coeffs.size(); ++i) r.coeffs[i] += coeffs[i];
    for (size_t i = 0; i < o.coeffs.size(); ++i) r.coeffs[i] += o.coeffs[i];
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    return *this + o.scaled(Rational(-1));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    Polynomial r;
    if (coeffs.empty() || o.coeffs.empty()) return r;
    r.coeffs.resize(coeffs.size() + o.coeffs.size() - 1, Rational(0));
    for (size_t i = 0; i < coeffs.size(); ++i)
        for (size_t j = 0; j < o.coeffs.size(); ++j) r.coeffs[i + j] += coeffs[i] * o.coeffs[j];
    return r;
}

Polynomial Polynomial::scaled(const Rational& c) const {
    Polynomial r = *this;
    for (auto& q : r.coeffs) q *= c;
    return r;
}

bool Polynomial::is_zero() const {
    for (const auto& c : coeffs)
        if (c != 0) return false;
    return true;
}

void PiecewiseBV::validate() const {
    if (pieces.size() != breakpoints.size() + 1)
        throw InputError("piecewise function: need one more piece than breakpoints");
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (!(breakpoints[i] < breakpoints[i + 1]))
            throw InputError("piecewise function: breakpoints must be strictly increasing");
    if (!breakpoints.empty() &&
        (!(lo < breakpoints.front()) || !(breakpoints.back() < hi)))
        throw InputError("piecewise function: breakpoints must lie inside the interval");
}

double PiecewiseBV::eval(double x) const {
    for (size_t i = 0; i < breakpoints.size(); ++i) {
        const double b = to_double(breakpoints[i]);
        if (x < b) return pieces[i].eval(x);
        if (x == b) return to_double(precise_value(i));
    }
    return pieces.back().eval(x);
}

PiecewiseBV PiecewiseBV::power(int p) const {
    PiecewiseBV r = *this;
    for (size_t i = 0; i < pieces.size(); ++i) {
        Polynomial acc = Polynomial::constant(1);
        for (int q = 0; q < p; ++q) acc = acc * pieces[i];
        r.pieces[i] = acc;
    }
    return r;
}

double SignedMeasure1D::pair(const TestFunction& phi) const {
    // density part: composite Gauss–Legendre panels per smooth interval
    static const double gx[4] = {-0.8611363115940526, -0.3399810435848563,
                                 0.3399810435848563, 0.8611363115940526};
    static const double gw[4] = {0.3478548451374538, 0.6521451548625461,
                                 0.6521451548625461, 0.3478548451374538};
    double s = 0.0;
    std::vector<double> cuts{to_double(lo)};
    for (const auto& b : breakpoints) cuts.push_back(to_double(b));
    cuts.push_back(to_double(hi));
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const int panels = 64;
        const double a = cuts[i], b = cuts[i + 1];
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            const double c = a + (p + 0.5) * h;
            for (int q = 0; q < 4; ++q) {
                const double x = c + 0.5 * h * gx[q];
                s += 0.5 * h * gw[q] * density[i].eval(x) * phi(vec1(x));
            }
        }
    }
    for (const auto& [loc, w] : atoms) s += to_double(w) * phi(vec1(to_double(loc)));
    return s;
}

SignedMeasure1D derivative_measure(const PiecewiseBV& u) {
    u.validate();
    SignedMeasure1D m;
    m.lo = u.lo;
    m.hi = u.hi;
    m.breakpoints = u.breakpoints;
    for (const auto& p : u.pieces) m.density.push_back(p.derivative());
    for (size_t i = 0; i < u.breakpoints.size(); ++i) {
        const Rational w = u.right_limit(i) - u.left_limit(i);
        m.atoms.emplace_back(u.breakpoints[i], w);
    }
    return m;
}

double MeasureDiff::total_variation() const {
    double s = density_exact_zero ? 0.0 : density_total_variation;
    return s + std::abs(to_double(atom_total_variation));
}

namespace {

// numeric ∫|p| on [a,b]; only exercised on the floating fallback path
double abs_poly_integral(const Polynomial& p, double a, double b) {
    double s = 0.0;
    const int n = 512;
    const double h = (b - a) / n;
    for (int i = 0; i < n; ++i) s += std::abs(p.eval(a + (i + 0.5) * h));
    return s * h;
}

struct AtomSide {
    Rational lhs = 0, rhs = 0;
};

}  // namespace

MeasureDiff chain_rule_check(const PiecewiseBV& u, ChainRuleIdentity id,
                             bool with_jump_correction) {
    u.validate();
    MeasureDiff out;
    Rational atom_tv = 0;
    bool density_zero = true;
    double density_tv = 0.0;

    for (size_t i = 0; i < u.pieces.size(); ++i) {
        const Polynomial& p = u.pieces[i];
        const Polynomial dp = p.derivative();
        Polynomial lhs, rhs;
        switch (id) {
            case ChainRuleIdentity::Cr1:
                lhs = (p * p).derivative();
                rhs = (p * dp).scaled(2);
                break;
            case ChainRuleIdentity::Cr2:
                lhs = (p * p).derivative().scaled(Rational(1, 2));
                rhs = p * dp;
                break;
            case ChainRuleIdentity::Cr3:
                lhs = (p * p * p).derivative().scaled(Rational(1, 2));
                rhs = p * (p * dp) + (p * p).scaled(Rational(1, 2)) * dp;
                break;
        }
        const Polynomial diff = lhs - rhs;
        if (!diff.is_zero()) {
            density_zero = false;
            const double a = to_double(i == 0 ? u.lo : u.breakpoints[i - 1]);
            const double b = to_double(i == u.pieces.size() - 1 ? u.hi : u.breakpoints[i]);
            density_tv += abs_poly_integral(diff, a, b);
        }
    }

    for (size_t i = 0; i < u.breakpoints.size(); ++i) {
        const Rational up = u.right_limit(i), um = u.left_limit(i);
        const Rational jump = up - um;
        const Rational mid = (up + um) / 2;
        AtomSide at;
        switch (id) {
            case ChainRuleIdentity::Cr1:
                at.lhs = up * up - um * um;
                at.rhs = 2 * mid * jump;
                break;
            case ChainRuleIdentity::Cr2:
                at.lhs = (up * up - um * um) / 2;
                at.rhs = mid * jump;
                break;
            case ChainRuleIdentity::Cr3: {
                at.lhs = (up * up * up - um * um * um) / 2;
                // ũ·D(u²/2) + (ũ²/2)·div(u) + (1/8)|[u]|² divʲ(u)
                at.rhs = mid * (up * up - um * um) / 2 + (mid * mid / 2) * jump;
                if (with_jump_correction) at.rhs += jump * jump * jump / 8;
                break;
            }
        }
        const Rational d = at.lhs - at.rhs;
        atom_tv += d < 0 ? -d : d;
    }

    out.density_exact_zero = density_zero;
    out.atom_total_variation = atom_tv;
    out.density_total_variation = density_tv;
    return out;
}

SignedMeasure1D burgers_entropy_defect(const ShockDescription& shock) {
    if (shock.nu_x != 1 && shock.nu_x != -1)
        throw InputError("burgers_entropy_defect: nu_x must be ±1");
    if (shock.burgers && shock.speed != (shock.u_minus + shock.u_plus) / 2)
        throw InputError("burgers_entropy_defect: Rankine-Hugoniot violated");
    SignedMeasure1D m;
    m.lo = shock.position - 1;
    m.hi = shock.position + 1;
    const Rational jump = shock.u_plus - shock.u_minus;
    if (jump != 0) {
        m.breakpoints = {shock.position};
        m.density = {Polynomial{}, Polynomial{}};
        // per unit time along the shock; the H¹ length element √(1+s²)
        // cancels the spatial normal component of the unit space-time normal
        m.atoms.emplace_back(shock.position,
                             jump * jump * jump * Rational(shock.nu_x, 12));
    } else {
        m.density = {Polynomial{}};
    }
    return m;
}

double burgers_weak_residual(const ShockDescription& shock,
                             const SpaceTimeTestFunction& phi) {
    if (!shock.burgers)
        throw InputError("burgers_weak_residual: solution must be Burgers-tagged");
    const double um = to_double(shock.u_minus), up = to_double(shock.u_plus);
    const double s = to_double(shock.speed), x0 = to_double(shock.position);
    // left state u_minus for x < x0 + s t when nu_x=+1
    const double ul = shock.nu_x == 1 ? um : up;
    const double ur = shock.nu_x == 1 ? up : um;
    const double El = ul * ul / 2, Fl = ul * ul * ul / 3;
    const double Er = ur * ur / 2, Fr = ur * ur * ur / 3;

    static const double gx[8] = {-0.9602898564975363, -0.7966664774136267,
                                 -0.5255324099163290, -0.1834346424956498,
                                 0.1834346424956498,  0.5255324099163290,
                                 0.7966664774136267,  0.9602898564975363};
    static const double gw[8] = {0.1012285362903763, 0.2223810344533745,
                                 0.3137066458778873, 0.3626837833783620,
                                 0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};

    const double t_lo = phi.time.center - phi.time.radius;
    const double t_hi = phi.time.center + phi.time.radius;
    const auto box = phi.space.support_box();
    const double x_lo = box[0][0], x_hi = box[1][0];

    auto integrand = [&](double x, double t) {
        const bool left = x < x0 + s * t;
        const double E = left ? El : Er;
        const double F = left ? Fl : Fr;
        const double dphit = phi.space(vec1(x)) * phi.time.deriv(t);
        const double dphix = phi.space.gradient(vec1(x))[0] * phi.time(t);
        return E * dphit + F * dphix;
    };

    const int pt = 48, px = 48;
    double total = 0.0;
    const double ht = (t_hi - t_lo) / pt;
    for (int it = 0; it < pt; ++it) {
        const double tc = t_lo + (it + 0.5) * ht;
        for (int qt = 0; qt < 8; ++qt) {
            const double t = tc + 0.5 * ht * gx[qt];
            const double wt = 0.5 * ht * gw[qt];
            const double xi = std::clamp(x0 + s * t, x_lo, x_hi);
            // integrate each smooth side separately
            for (int side = 0; side < 2; ++side) {
                const double a = side == 0 ? x_lo : xi;
                const double b = side == 0 ? xi : x_hi;
                if (b - a < 1e-300) continue;
                const double hx = (b - a) / px;
                for (int ix = 0; ix < px; ++ix) {
                    const double xc = a + (ix + 0.5) * hx;
                    for (int qx = 0; qx < 8; ++qx) {
                        const double x = xc + 0.5 * hx * gx[qx];
                        total += wt * 0.5 * hx * gw[qx] * integrand(x, t);
                    }
                }
            }
        }
    }
    return -total;
}

// --- fixture io ----------------------------------------------------------------

namespace {

Rational parse_rational(const std::string& tok) {
    const auto slash = tok.find('/');
    try {
        if (slash == std::string::npos) return Rational(std::stoll(tok));
        return Rational(std::stoll(tok.substr(0, slash)), std::stoll(tok.substr(slash + 1)));
    } catch (const std::exception&) {
        throw InputError("fixture: bad rational '" + tok + "'");
    }
}

std::string rational_str(const Rational& r) {
    std::ostringstream ss;
    ss << r.numerator();
    if (r.denominator() != 1) ss << "/" << r.denominator();
    return ss.str();
}

}  // namespace

PiecewiseBV read_bv_fixture(std::istream& is) {
    PiecewiseBV u;
    std::string line;
    bool have_interval = false;
    std::vector<Polynomial> pieces;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        std::string tok;
        if (key == "interval") {
            ss >> tok;
            u.lo = parse_rational(tok);
            ss >> tok;
            u.hi = parse_rational(tok);
            have_interval = true;
        } else if (key == "breakpoints") {
            while (ss >> tok) u.breakpoints.push_back(parse_rational(tok));
        } else if (key == "piece") {
            Polynomial p;
            while (ss >> tok) p.coeffs.push_back(parse_rational(tok));
            pieces.push_back(p);
        } else {
            throw InputError("fixture: unknown key '" + key + "'");
        }
    }
    if (!have_interval) throw InputError("fixture: missing interval");
    u.pieces = pieces;
    u.validate();
    return u;
}

void write_bv_fixture(std::ostream& os, const PiecewiseBV& u) {
    os << "# bv fixture v1: interval, breakpoints, ascending coefficients per piece\n";
    os << "interval " << rational_str(u.lo) << " " << rational_str(u.hi) << "\n";
    os << "breakpoints";
    for (const auto& b : u.breakpoints) os << " " << rational_str(b);
    os << "\n";
    for (const auto& p : u.pieces) {
        os << "piece";
        for (const auto& c : p.coeffs) os << " " << rational_str(c);
        if (p.coeffs.empty()) os << " 0";
        os << "\n";
    }
}

void write_chain_rule_report(std::ostream& os, const std::vector<std::string>& names,
                             const std::vector<PiecewiseBV>& fixtures) {
    os << "# chain-rule ledger: total-variation residual per identity (exact rational path)\n";
    for (size_t i = 0; i < fixtures.size(); ++i) {
        os << names[i] << ":";
        for (ChainRuleIdentity id :
             {ChainRuleIdentity::Cr1, ChainRuleIdentity::Cr2, ChainRuleIdentity::Cr3}) {
            const MeasureDiff d = chain_rule_check(fixtures[i], id);
            os << " " << (d.density_exact_zero ? rational_str(d.atom_total_variation)
                                               : std::to_string(d.total_variation()));
        }
        os << "\n";
    }
}

}  // namespace fluxlab
