#include "fluxlab/local_structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>

namespace fluxlab {

JumpProfile canonicalize(const JumpProfile& j, int dim) {
    JumpProfile out = j;
    for (int a = 0; a < dim; ++a) {
        if (out.nu[a] > 0.0) break;
        if (out.nu[a] < 0.0) {
            out.nu = scale(out.nu, -1.0);
            std::swap(out.u_plus, out.u_minus);
            break;
        }
    }
    return out;
}

Vec shifted_average(const SampledField& u, const Vec& x0, double ell, const Vec& y,
                    const Kernel& k) {
    if (!k.radial) throw PreconditionError("shifted_average: kernel must be radial");
    Vec acc{0.0, 0.0};
    for (size_t i = 0; i < k.nodes.size(); ++i) {
        Vec xp = x0;
        for (int a = 0; a < u.grid.dim; ++a) xp[a] += ell * (y[a] - k.nodes[i][a]);
        const Vec v = eval_field(u, xp);
        const double c = k.weights[i] * k.values[i];
        acc[0] += c * v[0];
        acc[1] += c * v[1];
    }
    return acc;
}

double alpha_halfmass(const Kernel& k, const Vec& dir, double s) {
    double below = 0.0, on = 0.0;
    const double tol = 1e-12;
    for (size_t i = 0; i < k.nodes.size(); ++i) {
        const double t = dot(k.nodes[i], dir, k.dim);
        const double wv = k.weights[i] * k.values[i];
        if (t < s - tol)
            below += wv;
        else if (t <= s + tol)
            on += wv;
    }
    return below + 0.5 * on;
}

double alpha_profile(const Kernel& k, const Vec& y) {
    if (!k.radial) throw PreconditionError("alpha_profile: kernel must be radial");
    if (!k.nonnegative()) throw PreconditionError("alpha_profile: kernel must be nonnegative");
    Vec dir{0.0, 0.0};
    dir[k.dim - 1] = 1.0;  // half spaces oriented by the last axis
    return alpha_halfmass(k, dir, y[k.dim - 1]);
}

double alpha_bar(const Kernel& k) {
    if (!k.radial) throw PreconditionError("alpha_bar: kernel must be radial");
    if (!k.nonnegative()) throw PreconditionError("alpha_bar: kernel must be nonnegative");

    static std::mutex mu;
    static std::map<std::string, double> cache;  // write-once per kernel id
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(k.id);
        if (it != cache.end()) return it->second;
    }

    // sort nodes along the last axis and prefix-sum; ties (lattice planes)
    // are grouped so the plane mass enters each of its own nodes at half
    const int axis = k.dim - 1;
    std::vector<size_t> order(k.nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return k.nodes[a][axis] < k.nodes[b][axis];
    });
    std::vector<double> alpha(k.nodes.size());
    double below = 0.0;
    size_t i = 0;
    while (i < order.size()) {
        size_t j = i;
        double plane = 0.0;
        const double zi = k.nodes[order[i]][axis];
        while (j < order.size() && k.nodes[order[j]][axis] == zi) {
            plane += k.weights[order[j]] * k.values[order[j]];
            ++j;
        }
        for (size_t q = i; q < j; ++q) alpha[order[q]] = below + 0.5 * plane;
        below += plane;
        i = j;
    }
    double ab = 0.0;
    for (size_t q = 0; q < k.nodes.size(); ++q)
        ab += k.weights[q] * k.values[q] * alpha[q] * (1.0 - alpha[q]);

    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(k.id, ab);
    return ab;
}

Mat limit_reynolds(const JumpProfile& j, const Kernel& k) {
    const Vec d = sub(j.u_plus, j.u_minus);
    return mat_scale(outer(d, d), alpha_bar(k));
}

double jump_flux_density(const JumpProfile& j, const Kernel& k) {
    const Vec d = sub(j.u_plus, j.u_minus);
    const double n2 = d[0] * d[0] + d[1] * d[1];
    return alpha_bar(k) * n2 * dot(d, j.nu, k.dim);
}

Mat double_mollified_stress(const SampledField& u, const Kernel& k, double ell,
                            const Vec& x0) {
    const int d = u.grid.dim;
    // sampled product fields; the outer pass nests the inner quadrature
    std::vector<SampledField> prods;
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            SampledField p;
            p.grid = u.grid;
            p.components = 1;
            const int64_t n = u.grid.num_points();
            p.values.resize(n);
            for (int64_t q = 0; q < n; ++q)
                p.values[q] = u.values[q * d + a] * u.values[q * d + b];
            prods.push_back(std::move(p));
        }

    Mat acc{0.0, 0.0, 0.0, 0.0};
    for (size_t i = 0; i < k.nodes.size(); ++i) {
        const Vec y = sub(x0, scale(k.nodes[i], ell));
        const Vec ul = mollify_at(u, k, ell, y);
        std::array<double, 3> pr{0.0, 0.0, 0.0};
        for (size_t t = 0; t < prods.size(); ++t) pr[t] = mollify_at(prods[t], k, ell, y)[0];
        const double c = k.weights[i] * k.values[i];
        if (d == 1) {
            acc[0] += c * (pr[0] - ul[0] * ul[0]);
        } else {
            acc[0] += c * (pr[0] - ul[0] * ul[0]);
            acc[1] += c * (pr[1] - ul[0] * ul[1]);
            acc[2] += c * (pr[1] - ul[0] * ul[1]);
            acc[3] += c * (pr[2] - ul[1] * ul[1]);
        }
    }
    return acc;
}

namespace {

std::vector<Vec> blowup_probes(int dim) {
    std::vector<Vec> ys;
    if (dim == 1) {
        for (int i = -4; i <= 4; ++i) ys.push_back(vec1(0.2 * i));
        return ys;
    }
    ys.push_back(vec2(0.0, 0.0));
    for (double r : {0.3, 0.6, 0.85}) {
        for (int a = 0; a < 16; ++a) {
            const double th = 2.0 * kPi * a / 16.0;
            ys.push_back(vec2(r * std::cos(th), r * std::sin(th)));
        }
    }
    return ys;
}

struct TwoSidedFit {
    Vec u_plus{0.0, 0.0}, u_minus{0.0, 0.0};
    double residual = 0.0;  // RMS over probes and components
};

// least squares for (u⁺, u⁻) at fixed direction: model α_p u⁺ + (1−α_p) u⁻
TwoSidedFit fit_two_sided(const std::vector<double>& alphas,
                          const std::vector<Vec>& data, int comps) {
    TwoSidedFit fit;
    double saa = 0, sab = 0, sbb = 0;
    for (double a : alphas) {
        saa += a * a;
        sab += a * (1.0 - a);
        sbb += (1.0 - a) * (1.0 - a);
    }
    const double det = saa * sbb - sab * sab;
    if (std::abs(det) < 1e-14) {
        fit.residual = std::numeric_limits<double>::infinity();
        return fit;
    }
    for (int c = 0; c < comps; ++c) {
        double ra = 0, rb = 0;
        for (size_t p = 0; p < alphas.size(); ++p) {
            ra += alphas[p] * data[p][c];
            rb += (1.0 - alphas[p]) * data[p][c];
        }
        fit.u_plus[c] = (sbb * ra - sab * rb) / det;
        fit.u_minus[c] = (-sab * ra + saa * rb) / det;
    }
    double ss = 0.0;
    for (size_t p = 0; p < alphas.size(); ++p) {
        for (int c = 0; c < comps; ++c) {
            const double m = alphas[p] * fit.u_plus[c] + (1.0 - alphas[p]) * fit.u_minus[c];
            const double r = data[p][c] - m;
            ss += r * r;
        }
    }
    fit.residual = std::sqrt(ss / (alphas.size() * comps));
    return fit;
}

}  // namespace

BlowupClass classify_point(const SampledField& u, const Vec& x0,
                           const std::vector<double>& ladder, const Kernel& k,
                           const ClassifyOptions& opts) {
    if (ladder.size() < 4)
        throw PreconditionError("classify_point: need a ladder of at least 4 scales");
    const int dim = u.grid.dim;
    const int comps = u.components;
    const std::vector<Vec> probes = blowup_probes(dim);
    const size_t np = probes.size(), nl = ladder.size();

    // shifted averages per (scale, probe)
    std::vector<std::vector<Vec>> data(nl, std::vector<Vec>(np));
    for (size_t l = 0; l < nl; ++l)
        for (size_t p = 0; p < np; ++p)
            data[l][p] = shifted_average(u, x0, ladder[l], probes[p], k);

    // per-probe Richardson fit v + bℓ + cℓ² over the ladder; the intercept is
    // the blow-up sample, which kills the smooth O(ℓ) drift at desk scales
    std::vector<Vec> v(np);
    {
        double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0;
        for (double l : ladder) {
            s0 += 1;
            s1 += l;
            s2 += l * l;
            s3 += l * l * l;
            s4 += l * l * l * l;
        }
        // inverse of the 3x3 moment matrix via cofactors
        const double m[9] = {s0, s1, s2, s1, s2, s3, s2, s3, s4};
        const double det = m[0] * (m[4] * m[8] - m[5] * m[7]) -
                           m[1] * (m[3] * m[8] - m[5] * m[6]) +
                           m[2] * (m[3] * m[7] - m[4] * m[6]);
        const double inv0 = (m[4] * m[8] - m[5] * m[7]) / det;
        const double inv1 = (m[2] * m[7] - m[1] * m[8]) / det;
        const double inv2 = (m[1] * m[5] - m[2] * m[4]) / det;
        for (size_t p = 0; p < np; ++p) {
            for (int c = 0; c < comps; ++c) {
                double b0 = 0, b1 = 0, b2 = 0;
                for (size_t l = 0; l < nl; ++l) {
                    const double y = data[l][p][c];
                    b0 += y;
                    b1 += ladder[l] * y;
                    b2 += ladder[l] * ladder[l] * y;
                }
                v[p][c] = inv0 * b0 + inv1 * b1 + inv2 * b2;
            }
        }
    }

    const double umax = std::max(u.max_abs(), 1e-300);

    // constant model
    Vec cmean{0.0, 0.0};
    for (const Vec& vv : v) cmean = add(cmean, vv);
    cmean = scale(cmean, 1.0 / double(np));
    double css = 0.0;
    for (const Vec& vv : v)
        for (int c = 0; c < comps; ++c) {
            const double r = vv[c] - cmean[c];
            css += r * r;
        }
    const double const_residual = std::sqrt(css / (np * comps));

    // two-sided model: coarse hemisphere sweep then parabolic refinement
    double best_theta = 0.0;
    TwoSidedFit best_fit;
    best_fit.residual = std::numeric_limits<double>::infinity();
    auto fit_at = [&](double theta) {
        Vec dir = dim == 1 ? vec1(1.0) : vec2(std::cos(theta), std::sin(theta));
        std::vector<double> alphas(np);
        for (size_t p = 0; p < np; ++p)
            alphas[p] = alpha_halfmass(k, dir, dot(probes[p], dir, dim));
        return fit_two_sided(alphas, v, comps);
    };
    if (dim == 1) {
        best_fit = fit_at(0.0);
    } else {
        const int nd = std::max(8, opts.coarse_directions);
        for (int a = 0; a < nd; ++a) {
            const double th = kPi * a / nd;  // hemisphere: ν and −ν are the same model
            const TwoSidedFit f = fit_at(th);
            if (f.residual < best_fit.residual) {
                best_fit = f;
                best_theta = th;
            }
        }
        // parabolic refinement on the residual over the angle
        double h = kPi / opts.coarse_directions;
        for (int it = 0; it < 8; ++it) {
            const TwoSidedFit fm = fit_at(best_theta - h);
            const TwoSidedFit fp = fit_at(best_theta + h);
            const double r0 = best_fit.residual, rm = fm.residual, rp = fp.residual;
            const double denom = rm - 2.0 * r0 + rp;
            double step = 0.0;
            if (denom > 0.0) step = 0.5 * h * (rm - rp) / denom;
            step = std::clamp(step, -h, h);
            const TwoSidedFit fs = fit_at(best_theta + step);
            if (fs.residual < best_fit.residual) {
                best_fit = fs;
                best_theta += step;
            } else if (fm.residual < best_fit.residual) {
                best_fit = fm;
                best_theta -= h;
            } else if (fp.residual < best_fit.residual) {
                best_fit = fp;
                best_theta += h;
            }
            h *= 0.5;
        }
    }

    BlowupClass out;
    out.ells.assign(ladder.begin(), ladder.end());
    const Vec nu = dim == 1 ? vec1(1.0) : vec2(std::cos(best_theta), std::sin(best_theta));
    const double jump_size = norm(sub(best_fit.u_plus, best_fit.u_minus), comps);

    const bool lebesgue_ok = const_residual < opts.lebesgue_rel_tol * umax;
    const bool jump_ok = best_fit.residual < opts.jump_rel_tol * umax &&
                         jump_size > opts.separation_factor * best_fit.residual;

    if (lebesgue_ok && (!jump_ok || const_residual <= best_fit.residual)) {
        out.tag = BlowupClass::Tag::Lebesgue;
        out.value = cmean;
        out.model_residual = const_residual;
    } else if (jump_ok) {
        out.tag = BlowupClass::Tag::Jump;
        JumpProfile j;
        j.location = x0;
        j.u_plus = best_fit.u_plus;
        j.u_minus = best_fit.u_minus;
        j.nu = nu;
        out.jump = canonicalize(j, dim);
        out.value = scale(add(out.jump.u_plus, out.jump.u_minus), 0.5);
        out.model_residual = best_fit.residual;
    } else {
        out.tag = BlowupClass::Tag::Unresolved;
        out.model_residual = std::min(const_residual, best_fit.residual);
    }

    // per-ℓ misfit of the chosen model against the raw shifted averages
    for (size_t l = 0; l < nl; ++l) {
        double ss = 0.0;
        for (size_t p = 0; p < np; ++p) {
            Vec model;
            if (out.tag == BlowupClass::Tag::Jump) {
                const double a =
                    alpha_halfmass(k, out.jump.nu, dot(probes[p], out.jump.nu, dim));
                model = add(scale(out.jump.u_plus, a), scale(out.jump.u_minus, 1.0 - a));
            } else {
                model = out.tag == BlowupClass::Tag::Lebesgue ? cmean : v[p];
            }
            for (int c = 0; c < comps; ++c) {
                const double r = data[l][p][c] - model[c];
                ss += r * r;
            }
        }
        out.residuals.push_back(std::sqrt(ss / (np * comps)));
    }
    return out;
}

Vec precise_representative(const BlowupClass& c) {
    switch (c.tag) {
        case BlowupClass::Tag::Lebesgue: return c.value;
        case BlowupClass::Tag::Jump:
            return scale(add(c.jump.u_plus, c.jump.u_minus), 0.5);
        default: throw ClassificationError("precise_representative: unresolved blow-up");
    }
}

void write_classification_report(std::ostream& os, const std::vector<Vec>& points,
                                 const std::vector<BlowupClass>& classes, int dim) {
    os << "# blow-up classification report\n";
    char buf[256];
    for (size_t i = 0; i < points.size(); ++i) {
        const BlowupClass& c = classes[i];
        std::snprintf(buf, sizeof buf, "point (%.10g, %.10g)\n", points[i][0], points[i][1]);
        os << buf;
        switch (c.tag) {
            case BlowupClass::Tag::Lebesgue:
                std::snprintf(buf, sizeof buf, "  tag lebesgue  value (%.10g, %.10g)\n",
                              c.value[0], c.value[1]);
                break;
            case BlowupClass::Tag::Jump:
                std::snprintf(buf, sizeof buf,
                              "  tag jump  u+ (%.10g, %.10g)  u- (%.10g, %.10g)  nu "
                              "(%.10g, %.10g)\n",
                              c.jump.u_plus[0], c.jump.u_plus[1], c.jump.u_minus[0],
                              c.jump.u_minus[1], c.jump.nu[0], c.jump.nu[1]);
                break;
            default:
                std::snprintf(buf, sizeof buf, "  tag unresolved\n");
        }
        os << buf;
        os << "  residuals";
        for (size_t l = 0; l < c.residuals.size(); ++l) {
            std::snprintf(buf, sizeof buf, " %.3e", c.residuals[l]);
            os << buf;
        }
        os << "\n";
        (void)dim;
    }
}

}  // namespace fluxlab
