#include "logsurf/closed_forms.hpp"

#include <cmath>

#include "logsurf/errors.hpp"

namespace logsurf {

namespace {
constexpr double kPi = 3.14159265358979323846;

// u of the chakie family. Written against the squared modulus to avoid a
// spurious pole of atan2 at x = 0 for n >= 1: with t = |x|/|y| and dphi the
// angle between x and y,
//   P = 1 - 2 t^n cos(n dphi) tanh(zeta) + t^{2n}
//   u = -ln P - ln(|y|^n cosh zeta).
// P >= sech^2(zeta) > 0 everywhere, so u is entire.
double chakie_u(int n, Vec2 y, double zeta, Vec2 x) {
    const double ry = norm(y);
    const double t = norm(x) / ry;
    const double theta = std::atan2(x.y, x.x);
    const double theta0 = std::atan2(y.y, y.x);
    const double tn = std::pow(t, n);
    const double P = 1.0 - 2.0 * tn * std::cos(n * (theta - theta0)) * std::tanh(zeta) + tn * tn;
    return -std::log(P) - n * std::log(ry) - std::log(std::cosh(zeta));
}

double chakie_K(int n, Vec2 x) {
    // 4 n^2 |x|^{2(n-1)}
    if (n == 1)
        return 4.0;
    return 4.0 * n * n * std::pow(norm2(x), n - 1);
}

} // namespace

Vec2 FamilyInstance::v() const {
    const double s = std::sqrt(K0);
    return {s * std::cos(phi), s * std::sin(phi)};
}

Vec2 FamilyInstance::v_perp() const { return perp(v()); }

FamilyInstance FamilyInstance::flat(double u0) {
    FamilyInstance f;
    f.id = FamilyId::Flat;
    f.u0 = u0;
    validate(f);
    return f;
}

FamilyInstance FamilyInstance::chakie(int n, Vec2 y, double zeta) {
    FamilyInstance f;
    f.id = FamilyId::Chakie;
    f.n = n;
    f.y = y;
    f.zeta = zeta;
    validate(f);
    return f;
}

FamilyInstance FamilyInstance::stuart(double K0, Vec2 y, double zeta, double phi) {
    FamilyInstance f;
    f.id = FamilyId::Stuart;
    f.K0 = K0;
    f.y = y;
    f.zeta = zeta;
    f.phi = phi;
    validate(f);
    return f;
}

FamilyInstance FamilyInstance::special(double gamma, Vec2 y) {
    FamilyInstance f;
    f.id = FamilyId::Special;
    f.gamma = gamma;
    f.y = y;
    validate(f);
    return f;
}

void validate(const FamilyInstance& inst) {
    switch (inst.id) {
    case FamilyId::Flat:
        if (!std::isfinite(inst.u0))
            throw config_error("flat family needs a finite constant");
        return;
    case FamilyId::Chakie:
        if (inst.n < 1)
            throw config_error("chakie family needs n >= 1");
        if (norm(inst.y) == 0.0)
            throw config_error("chakie family needs y != 0");
        return;
    case FamilyId::Stuart:
        if (!(inst.K0 > 0.0))
            throw config_error("stuart family needs K0 > 0");
        return;
    case FamilyId::Special:
        if (!(inst.gamma > 0.0) || inst.gamma > 1.0)
            throw config_error("special family needs gamma in (0, 1]");
        if (norm(inst.y) == 0.0)
            throw config_error("special family needs y != 0");
        return;
    }
    throw config_error("unknown family");
}

double family_u(const FamilyInstance& inst, Vec2 x) {
    switch (inst.id) {
    case FamilyId::Flat:
        return inst.u0;
    case FamilyId::Chakie:
        return chakie_u(inst.n, inst.y, inst.zeta, x);
    case FamilyId::Stuart: {
        const Vec2 d = x - inst.y;
        const double a = dot(inst.v(), d);
        const double b = dot(inst.v_perp(), d);
        // cosh(zeta) cosh(a) - sinh(zeta) sin(b) >= e^{-|zeta|} > 0, entire
        return -std::log(std::cosh(inst.zeta) * std::cosh(a) - std::sinh(inst.zeta) * std::sin(b));
    }
    case FamilyId::Special:
        return inst.gamma * chakie_u(1, inst.y, 0.0, x);
    }
    throw config_error("unknown family");
}

double family_K(const FamilyInstance& inst, Vec2 x) {
    switch (inst.id) {
    case FamilyId::Flat:
        return 0.0;
    case FamilyId::Chakie:
        return chakie_K(inst.n, x);
    case FamilyId::Stuart:
        return inst.K0;
    case FamilyId::Special:
        return 4.0 * inst.gamma *
               std::exp(2.0 * (1.0 - inst.gamma) * chakie_u(1, inst.y, 0.0, x));
    }
    throw config_error("unknown family");
}

std::pair<double, double> eval_family(const FamilyInstance& inst, Vec2 x) {
    return {family_u(inst, x), family_K(inst, x)};
}

bool family_curvature_integrable(const FamilyInstance& inst) {
    return inst.id != FamilyId::Stuart;
}

double family_total_curvature(const FamilyInstance& inst) {
    switch (inst.id) {
    case FamilyId::Flat:
        return 0.0;
    case FamilyId::Chakie:
        return 4.0 * kPi * inst.n;
    case FamilyId::Special:
        return 4.0 * kPi * inst.gamma;
    case FamilyId::Stuart:
        throw config_error("stuart family has no finite integral curvature");
    }
    throw config_error("unknown family");
}

double family_integrand_tail_exponent(const FamilyInstance& inst) {
    switch (inst.id) {
    case FamilyId::Flat:
        return 0.0;
    case FamilyId::Chakie:
        // K e^{2u} ~ r^{2(n-1)} * r^{-4n} = r^{-(2n+2)}
        return 2.0 * inst.n + 2.0;
    case FamilyId::Special:
        // 4 gamma (1 + r^2/|y|^2)^{-2} / |y|^2 up to constants
        return 4.0;
    case FamilyId::Stuart:
        return 0.0; // not integrable; callers must not extrapolate
    }
    throw config_error("unknown family");
}

double HarmonicSpec::eval(Vec2 x) const {
    double h = a0;
    // iterate z^m without complex pow: (re, im) * (x1 + i x2)
    double re = 1.0, im = 0.0;
    const std::size_t M = std::max(a.size(), b.size());
    for (std::size_t m = 1; m <= M; ++m) {
        const double nre = re * x.x - im * x.y;
        const double nim = re * x.y + im * x.x;
        re = nre;
        im = nim;
        if (m <= a.size())
            h += a[m - 1] * re;
        if (m <= b.size())
            h += b[m - 1] * im;
    }
    return h;
}

bool HarmonicSpec::is_constant() const {
    for (double c : a)
        if (c != 0.0)
            return false;
    for (double c : b)
        if (c != 0.0)
            return false;
    return true;
}

HarmonicSpec HarmonicSpec::constant(double c) {
    HarmonicSpec h;
    h.a0 = c;
    return h;
}

HarmonicSpec HarmonicSpec::re_z(double coeff) {
    HarmonicSpec h;
    h.a = {coeff};
    return h;
}

CurvatureSpec curvature_of_family(const FamilyInstance& inst) {
    CurvatureSpec c;
    switch (inst.id) {
    case FamilyId::Flat:
        return curvature_flat();
    case FamilyId::Chakie:
        c.sign = +1;
        c.upsilon = [inst](Vec2 x) { return family_K(inst, x); };
        c.radial = true;
        c.upsilon_radial = [inst](double r) { return family_K(inst, {r, 0.0}); };
        // K grows like r^{2(n-1)}: a power tail with negative decay exponent
        c.tail = {TailSpec::Power, -2.0 * (inst.n - 1)};
        c.name = "chakie";
        return c;
    case FamilyId::Stuart:
        c.sign = +1;
        c.upsilon = [inst](Vec2) { return inst.K0; };
        c.radial = true;
        c.upsilon_radial = [inst](double) { return inst.K0; };
        c.tail = {TailSpec::Power, 0.0};
        c.name = "stuart";
        return c;
    case FamilyId::Special:
        c.sign = +1;
        c.upsilon = [inst](Vec2 x) { return family_K(inst, x); };
        c.radial = true;
        c.upsilon_radial = [inst](double r) { return family_K(inst, {r, 0.0}); };
        c.tail = {TailSpec::Power, 4.0 * (1.0 - inst.gamma)};
        c.name = "special";
        return c;
    }
    throw config_error("unknown family");
}

CurvatureSpec curvature_flat() {
    CurvatureSpec c;
    c.sign = 0;
    c.upsilon = [](Vec2) { return 0.0; };
    c.radial = true;
    c.upsilon_radial = [](double) { return 0.0; };
    c.tail = {TailSpec::Compact, 0.0};
    c.name = "flat";
    return c;
}

CurvatureSpec curvature_disk_indicator(double radius) {
    if (!(radius > 0.0))
        throw config_error("disk indicator needs a positive radius");
    CurvatureSpec c;
    c.sign = +1;
    c.upsilon = [radius](Vec2 x) { return norm2(x) <= radius * radius ? 1.0 : 0.0; };
    c.radial = true;
    c.upsilon_radial = [radius](double r) { return r <= radius ? 1.0 : 0.0; };
    c.tail = {TailSpec::Compact, 0.0};
    c.name = "disk";
    return c;
}

CurvatureSpec curvature_smooth_bump(double radius) {
    if (!(radius > 0.0))
        throw config_error("smooth bump needs a positive radius");
    auto profile = [radius](double r) {
        const double t = r / radius;
        if (t >= 1.0)
            return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - t * t));
    };
    CurvatureSpec c;
    c.sign = +1;
    c.upsilon = [profile](Vec2 x) { return profile(norm(x)); };
    c.radial = true;
    c.upsilon_radial = profile;
    c.tail = {TailSpec::Compact, 0.0};
    c.name = "bump";
    return c;
}

CurvatureSpec curvature_exp_decay(double rate, int sign) {
    if (!(rate > 0.0) || (sign != 1 && sign != -1))
        throw config_error("exponential curvature needs rate > 0 and sign +-1");
    CurvatureSpec c;
    c.sign = sign;
    c.upsilon = [rate](Vec2 x) { return std::exp(-rate * norm(x)); };
    c.radial = true;
    c.upsilon_radial = [rate](double r) { return std::exp(-rate * r); };
    c.tail = {TailSpec::SuperPolynomial, 0.0};
    c.name = "exp";
    return c;
}

} // namespace logsurf
