#include "yindex/hopf.hpp"

#include "yindex/error.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace yindex {

namespace {

constexpr double kDegenerate = 1e-10;
constexpr double kExactThreshold = 1e-10;

std::string located(int face, int i, int k, const PolarGridSet& g)
{
    std::ostringstream os;
    os << "face " << face + 1 << " at (i=" << i + 1 << ", k=" << k << "; r=" << g.radius(i) << ", theta=" << g.theta(k) << ")";
    return os.str();
}

struct Derivative {
    Vec3 first;
    Vec3 second;
};

/// First and second derivative at position p of a sampled line of length n.
template <class Get>
Derivative stencil(Get get, int p, int n, double step, bool periodic)
{
    if (periodic) {
        // The last sample repeats the first.
        const int period = n - 1;
        const int q = p % period;
        const Vec3 a = get((q - 1 + period) % period);
        const Vec3 b = get(q);
        const Vec3 c = get((q + 1) % period);
        return {(c - a) / (2 * step), (a - 2 * b + c) / (step * step)};
    }
    if (p == 0)
        return {(-3 * get(0) + 4 * get(1) - get(2)) / (2 * step), (2 * get(0) - 5 * get(1) + 4 * get(2) - get(3)) / (step * step)};
    if (p == n - 1)
        return {(3 * get(n - 1) - 4 * get(n - 2) + get(n - 3)) / (2 * step),
                (2 * get(n - 1) - 5 * get(n - 2) + 4 * get(n - 3) - get(n - 4)) / (step * step)};
    const Vec3 a = get(p - 1);
    const Vec3 b = get(p);
    const Vec3 c = get(p + 1);
    return {(c - a) / (2 * step), (a - 2 * b + c) / (step * step)};
}

void resize(FaceDerivatives& d, std::size_t n)
{
    for (auto* v : {&d.u, &d.u_r, &d.u_t, &d.u_rr, &d.u_rt, &d.u_tt, &d.normal, &d.u_rr_perp, &d.u_rt_perp, &d.u_tt_perp})
        v->assign(n, Vec3::Zero());
}

struct Accumulator {
    std::vector<double> values;
    void add(double v) { values.push_back(v); }
};

/// Pairwise reduction keeps max/RMS independent of evaluation schedule.
double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi)
{
    if (hi - lo <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

CheckResult make_check(std::string name, const std::vector<double>& values, double threshold)
{
    CheckResult c;
    c.name = std::move(name);
    c.threshold = threshold;
    if (values.empty()) {
        c.applicable = false;
        c.note = "not applicable";
        return c;
    }
    std::vector<double> squares(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        c.max = std::max(c.max, values[i]);
        squares[i] = values[i] * values[i];
    }
    c.rms = std::sqrt(pairwise_sum(squares, 0, squares.size()) / static_cast<double>(values.size()));
    c.pass = std::isfinite(c.max) && c.max <= threshold;
    return c;
}

struct HopfValues {
    HopfField field;
    std::vector<double> imag_sigma, imag_gamma, cauchy_riemann, inner_ring;
};

HopfValues hopf_values(const DerivGrids& d)
{
    const PolarGridSet& g = d.grids;
    if (g.face_count() != 3 || g.periodic)
        throw UnsupportedRoute("the Hopf field is a sum over three junction faces; got " + std::to_string(g.face_count()) +
                               " face(s)");
    const auto nodes = static_cast<std::size_t>(g.n_r * g.columns());
    HopfValues out;
    out.field.h.assign(nodes, {0.0, 0.0});
    out.field.field.assign(nodes, {0.0, 0.0});
    for (int i = 0; i < g.n_r; ++i) {
        const double r = g.radius(i);
        for (int k = 0; k < g.columns(); ++k) {
            const double t = g.theta(k);
            const auto n = static_cast<std::size_t>(g.node(i, k));
            std::complex<double> h(0.0, 0.0);
            for (int j = 0; j < 3; ++j) {
                const FaceDerivatives& f = d.faces[static_cast<std::size_t>(j)];
                const Vec3 a = f.u_rr[n] - f.u_r[n] / r - f.u_tt[n] / (r * r);
                const Vec3 b = 2.0 * f.u_rt[n] / r - 2.0 * f.u_t[n] / (r * r);
                const std::complex<double> phase = std::polar(0.25, -2.0 * t);
                std::complex<double> qq(0.0, 0.0);
                for (int c = 0; c < 3; ++c) {
                    const std::complex<double> q = phase * std::complex<double>(a[c], -b[c]);
                    qq += q * q;
                }
                h += qq;
            }
            out.field.h[n] = h;
            out.field.field[n] = std::polar(r * r * r * r, 4.0 * t) * h;
        }
    }
    const auto& H = out.field.field;
    for (int k = 0; k < g.columns(); ++k) {
        out.imag_sigma.push_back(std::abs(H[static_cast<std::size_t>(g.node(g.n_r - 1, k))].imag()));
        out.inner_ring.push_back(std::abs(H[static_cast<std::size_t>(g.node(0, k))]));
    }
    for (int i = 0; i < g.n_r; ++i)
        for (int k : {0, g.n_theta}) out.imag_gamma.push_back(std::abs(H[static_cast<std::size_t>(g.node(i, k))].imag()));

    const double dr = 1.0 / g.n_r;
    const double dt = g.theta_span() / g.n_theta;
    for (int i = 0; i + 1 < g.n_r; ++i) {
        const double rc = 0.5 * (g.radius(i) + g.radius(i + 1));
        for (int k = 0; k < g.n_theta; ++k) {
            const auto& h00 = H[static_cast<std::size_t>(g.node(i, k))];
            const auto& h10 = H[static_cast<std::size_t>(g.node(i + 1, k))];
            const auto& h01 = H[static_cast<std::size_t>(g.node(i, k + 1))];
            const auto& h11 = H[static_cast<std::size_t>(g.node(i + 1, k + 1))];
            const std::complex<double> d_r = 0.5 * ((h10 - h00) + (h11 - h01)) / dr;
            const std::complex<double> d_t = 0.5 * ((h01 - h00) + (h11 - h10)) / dt;
            const double e1 = std::abs(d_r.real() - d_t.imag() / rc);
            const double e2 = std::abs(d_r.imag() + d_t.real() / rc);
            out.cauchy_riemann.push_back(std::max(e1, e2));
        }
    }
    const auto mx = [](const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); };
    out.field.max_imag_sigma = mx(out.imag_sigma);
    out.field.max_imag_gamma = mx(out.imag_gamma);
    out.field.max_cauchy_riemann = mx(out.cauchy_riemann);
    out.field.max_inner_ring = mx(out.inner_ring);
    return out;
}

} // namespace

double PolarGridSet::theta_span() const { return periodic ? 2.0 * std::numbers::pi : std::numbers::pi; }

double PolarGridSet::theta(int k) const { return theta_span() * static_cast<double>(k) / n_theta; }

PolarGridSet sample_closures(std::vector<JetFn> closures, int n_r, int n_theta, bool periodic)
{
    if (n_r < 8 || n_theta < 8) throw InvalidArgument("polar grids need n_r, n_theta >= 8");
    if (closures.empty()) throw InvalidArgument("no faces to sample");
    PolarGridSet g;
    g.n_r = n_r;
    g.n_theta = n_theta;
    g.periodic = periodic;
    for (const auto& fn : closures) {
        std::vector<Vec3> s(static_cast<std::size_t>(n_r * g.columns()));
        for (int i = 0; i < n_r; ++i)
            for (int k = 0; k < g.columns(); ++k) s[static_cast<std::size_t>(g.node(i, k))] = fn(g.radius(i), g.theta(k)).u;
        g.samples.push_back(std::move(s));
    }
    g.closures = std::move(closures);
    return g;
}

PolarGridSet sample_immersion(const YSurfaceSpec& spec, int n_r, int n_theta)
{
    std::vector<JetFn> closures;
    bool periodic = false;
    for (int j = 0; j < spec.face_count(); ++j) {
        const FaceDomain& dom = spec.faces[static_cast<std::size_t>(j)].domain;
        if (dom.kind == DomainKind::AnnulusBand)
            throw UnsupportedRoute("polar grids start at r = 1/n_r; annulus faces ('" + spec.name + "') are not supported");
        periodic = dom.kind == DomainKind::FullDisk;
        FaceImmersion im(spec, j);
        closures.emplace_back([im](double r, double t) { return im.jet(r, t); });
    }
    PolarGridSet g = sample_closures(std::move(closures), n_r, n_theta, periodic);
    validate_grids(g);
    return g;
}

void validate_grids(const PolarGridSet& g, double junction_tolerance)
{
    if (g.n_r < 8 || g.n_theta < 8) throw InputError("grid dimensions must be at least 8 (got n_r=" + std::to_string(g.n_r) +
                                                     ", n_theta=" + std::to_string(g.n_theta) + ")");
    if (g.face_count() != 1 && g.face_count() != 3) throw InputError("expected 1 or 3 faces, got " + std::to_string(g.face_count()));
    if (g.periodic && g.face_count() != 1) throw InputError("periodic grids describe a single full-disk face");
    const auto nodes = static_cast<std::size_t>(g.n_r * g.columns());
    for (int j = 0; j < g.face_count(); ++j) {
        const auto& s = g.samples[static_cast<std::size_t>(j)];
        if (s.size() != nodes)
            throw InputError("face " + std::to_string(j + 1) + " has " + std::to_string(s.size()) + " samples, expected " +
                             std::to_string(nodes));
        for (std::size_t n = 0; n < nodes; ++n)
            if (!s[n].allFinite())
                throw InputError("non-finite sample on " + located(j, static_cast<int>(n) / g.columns(), static_cast<int>(n) % g.columns(), g));
    }
    if (g.face_count() == 3) {
        for (int k : {0, g.n_theta})
            for (int i = 0; i < g.n_r; ++i)
                for (int j = 1; j < 3; ++j) {
                    const auto n = static_cast<std::size_t>(g.node(i, k));
                    const double gap = (g.samples[static_cast<std::size_t>(j)][n] - g.samples[0][n]).norm();
                    if (gap > junction_tolerance) {
                        std::ostringstream os;
                        os << "junction mismatch: " << located(j, i, k, g) << " differs from face 1 by " << gap;
                        throw InputError(os.str());
                    }
                }
    }
}

DerivGrids derivative_grids(const PolarGridSet& g, bool use_closures)
{
    DerivGrids d;
    d.grids = g;
    d.exact = use_closures && static_cast<int>(g.closures.size()) == g.face_count();
    const auto nodes = static_cast<std::size_t>(g.n_r * g.columns());
    const double dr = 1.0 / g.n_r;
    const double dt = g.theta_span() / g.n_theta;
    for (int j = 0; j < g.face_count(); ++j) {
        FaceDerivatives f;
        resize(f, nodes);
        const auto& s = g.samples[static_cast<std::size_t>(j)];
        f.u = s;
        if (d.exact) {
            for (int i = 0; i < g.n_r; ++i)
                for (int k = 0; k < g.columns(); ++k) {
                    const auto n = static_cast<std::size_t>(g.node(i, k));
                    const PolarJet jet = g.closures[static_cast<std::size_t>(j)](g.radius(i), g.theta(k));
                    f.u_r[n] = jet.u_r;
                    f.u_t[n] = jet.u_t;
                    f.u_rr[n] = jet.u_rr;
                    f.u_rt[n] = jet.u_rt;
                    f.u_tt[n] = jet.u_tt;
                }
        } else {
            for (int i = 0; i < g.n_r; ++i)
                for (int k = 0; k < g.columns(); ++k) {
                    const auto n = static_cast<std::size_t>(g.node(i, k));
                    const auto along_r = stencil([&](int q) { return s[static_cast<std::size_t>(g.node(q, k))]; }, i, g.n_r, dr, false);
                    const auto along_t =
                        stencil([&](int q) { return s[static_cast<std::size_t>(g.node(i, q))]; }, k, g.columns(), dt, g.periodic);
                    f.u_r[n] = along_r.first;
                    f.u_rr[n] = along_r.second;
                    f.u_t[n] = along_t.first;
                    f.u_tt[n] = along_t.second;
                }
            for (int i = 0; i < g.n_r; ++i)
                for (int k = 0; k < g.columns(); ++k) {
                    const auto n = static_cast<std::size_t>(g.node(i, k));
                    f.u_rt[n] =
                        stencil([&](int q) { return f.u_r[static_cast<std::size_t>(g.node(i, q))]; }, k, g.columns(), dt, g.periodic).first;
                }
        }
        for (int i = 0; i < g.n_r; ++i)
            for (int k = 0; k < g.columns(); ++k) {
                const auto n = static_cast<std::size_t>(g.node(i, k));
                const Vec3 c = f.u_r[n].cross(f.u_t[n]);
                if (!(c.norm() >= kDegenerate)) {
                    std::ostringstream os;
                    os << "degenerate immersion (|u_r x u_theta| = " << c.norm() << ") at " << located(j, i, k, g);
                    throw DegenerateImmersion(os.str());
                }
                const Vec3 nu = c.normalized();
                f.normal[n] = nu;
                f.u_rr_perp[n] = f.u_rr[n].dot(nu) * nu;
                f.u_rt_perp[n] = f.u_rt[n].dot(nu) * nu;
                f.u_tt_perp[n] = f.u_tt[n].dot(nu) * nu;
            }
        d.faces.push_back(std::move(f));
    }
    return d;
}

HopfField hopf_field(const DerivGrids& derivs) { return hopf_values(derivs).field; }

const CheckResult& ResidualReport::get(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw InvalidArgument("no residual check named '" + name + "'");
}

bool ResidualReport::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.applicable || c.pass; });
}

ResidualReport certificate_residuals(const DerivGrids& d, const CertificateOptions& opts)
{
    const PolarGridSet& g = d.grids;
    const double dr = 1.0 / g.n_r;
    const double dt = g.theta_span() / g.n_theta;
    const double threshold =
        opts.threshold.value_or(d.exact ? kExactThreshold : 10.0 * std::pow(std::max(dr, dt), 2));

    Accumulator harmonic, angle, scale, radius, parallel, junction, theta2, balance;
    for (const auto& f : d.faces) {
        for (int i = 0; i < g.n_r; ++i) {
            const double r = g.radius(i);
            for (int k = 0; k < g.columns(); ++k) {
                const auto n = static_cast<std::size_t>(g.node(i, k));
                harmonic.add((r * r * f.u_rr[n] + r * f.u_r[n] + f.u_tt[n]).norm());
                angle.add(std::abs(f.u_r[n].dot(f.u_t[n])));
                scale.add(std::abs(f.u_r[n].squaredNorm() - f.u_t[n].squaredNorm() / (r * r)));
            }
        }
        for (int k = 0; k < g.columns(); ++k) {
            const auto n = static_cast<std::size_t>(g.node(g.n_r - 1, k));
            radius.add(std::abs(f.u[n].norm() - 1.0));
            parallel.add(f.u_r[n].cross(f.u[n]).norm() / (f.u_r[n].norm() * f.u[n].norm()));
        }
    }
    const bool junction_faces = g.face_count() == 3 && !g.periodic;
    if (junction_faces) {
        for (int k : {0, g.n_theta})
            for (int i = 0; i < g.n_r; ++i) {
                const auto n = static_cast<std::size_t>(g.node(i, k));
                const auto& f0 = d.faces[0];
                double jm = 0.0, t2 = 0.0;
                Vec3 sum = Vec3::Zero();
                for (int j = 0; j < 3; ++j) {
                    const auto& f = d.faces[static_cast<std::size_t>(j)];
                    jm = std::max({jm, (f.u[n] - f0.u[n]).norm(), (f.u_r[n] - f0.u_r[n]).norm(), (f.u_rr[n] - f0.u_rr[n]).norm()});
                    t2 = std::max(t2, (f.u_tt[n] - f0.u_tt[n]).norm());
                    sum += f.u_t[n];
                }
                junction.add(jm);
                theta2.add(t2);
                balance.add(sum.norm());
            }
    }

    ResidualReport rep;
    rep.exact = d.exact;
    rep.n_r = g.n_r;
    rep.n_theta = g.n_theta;
    rep.checks.push_back(make_check("harmonic", harmonic.values, threshold));
    rep.checks.push_back(make_check("conformal-angle", angle.values, threshold));
    rep.checks.push_back(make_check("conformal-scale", scale.values, threshold));
    rep.checks.push_back(make_check("free-boundary-radius", radius.values, threshold));
    rep.checks.push_back(make_check("free-boundary-parallel", parallel.values, threshold));
    rep.checks.push_back(make_check("junction-match", junction.values, threshold));
    rep.checks.push_back(make_check("theta2-match", theta2.values, threshold));
    rep.checks.push_back(make_check("y-balance", balance.values, threshold));

    rep.hopf_meaningful = rep.get("harmonic").pass && rep.get("conformal-angle").pass && rep.get("conformal-scale").pass;
    HopfValues hv;
    if (junction_faces) hv = hopf_values(d);
    rep.checks.push_back(make_check("hopf-imag-sigma", hv.imag_sigma, threshold));
    rep.checks.push_back(make_check("hopf-imag-gamma", hv.imag_gamma, threshold));
    rep.checks.push_back(make_check("hopf-cauchy-riemann", hv.cauchy_riemann, threshold));
    rep.checks.push_back(make_check("hopf-inner-ring", hv.inner_ring, threshold));
    for (auto& c : rep.checks) {
        if (c.name.rfind("hopf-", 0) != 0) continue;
        if (!junction_faces) c.note = "not applicable: the Hopf field needs three junction faces";
        else if (!rep.hopf_meaningful) c.note = "not meaningful: harmonic or conformal checks failed";
    }
    return rep;
}

ResidualReport verify_surface(const YSurfaceSpec& spec, int n, bool use_closures, const CertificateOptions& opts)
{
    return certificate_residuals(derivative_grids(sample_immersion(spec, n, n), use_closures), opts);
}

} // namespace yindex
