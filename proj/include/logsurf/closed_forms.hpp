#ifndef LOGSURF_CLOSED_FORMS_HPP
#define LOGSURF_CLOSED_FORMS_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "logsurf/core.hpp"

namespace logsurf {

// Exact solution families of the prescribed-curvature equation
// Delta u + K e^{2u} = 0, used as oracles everywhere else.
enum class FamilyId { Flat, Chakie, Stuart, Special };

struct FamilyInstance {
    FamilyId id = FamilyId::Flat;

    // chakie: K(x) = 4 n^2 |x|^{2(n-1)},
    // u = -ln(1 - 2 (|x|^n/|y|^n) cos(n(theta-theta0)) tanh(zeta) + |x|^{2n}/|y|^{2n})
    //     - ln(|y|^n cosh(zeta)), with theta0 the angle of y.
    int n = 1;
    Vec2 y{1.0, 0.0};
    double zeta = 0.0;

    // stuart: K = K0 > 0 constant,
    // u = -ln(cosh(zeta) cosh<v, x-y> - sinh(zeta) sin<v_perp, x-y>), where
    // v = sqrt(K0)(cos phi, sin phi) and v_perp is v rotated by +90 degrees.
    double K0 = 1.0;
    double phi = 0.0;

    // special: u = gamma * u_chakie(n=1, zeta=0), K = 4 gamma e^{2(1-gamma) u_chakie}.
    double gamma = 1.0;

    // flat: u constant, K = 0.
    double u0 = 0.0;

    // convenience frame accessors for stuart
    Vec2 v() const;
    Vec2 v_perp() const;

    static FamilyInstance flat(double u0);
    static FamilyInstance chakie(int n, Vec2 y, double zeta);
    static FamilyInstance stuart(double K0, Vec2 y, double zeta, double phi);
    static FamilyInstance special(double gamma, Vec2 y);
};

// Validates parameter domains; throws config_error on violation.
void validate(const FamilyInstance& inst);

double family_u(const FamilyInstance& inst, Vec2 x);
double family_K(const FamilyInstance& inst, Vec2 x);
std::pair<double, double> eval_family(const FamilyInstance& inst, Vec2 x); // (u, K)

// True when u of the family has a finite curvature integral (stuart does not).
bool family_curvature_integrable(const FamilyInstance& inst);

// Exact integral curvature where finite: 4 pi n (chakie), 4 pi gamma
// (special), 0 (flat). Throws for stuart.
double family_total_curvature(const FamilyInstance& inst);

// Decay exponent p of the curvature integrand K e^{2u} ~ C r^{-p}
// (chakie: 2n+2; special: 4; flat: none -> 0). Used for tail corrections.
double family_integrand_tail_exponent(const FamilyInstance& inst);

// Entire harmonic polynomials H(x) = a0 + sum_m (a_m Re z^m + b_m Im z^m).
struct HarmonicSpec {
    double a0 = 0.0;
    std::vector<double> a; // a[m-1] multiplies Re z^m
    std::vector<double> b; // b[m-1] multiplies Im z^m

    double eval(Vec2 x) const;
    bool is_constant() const;

    static HarmonicSpec constant(double c);
    static HarmonicSpec re_z(double coeff = 1.0); // H = coeff * x1
};

// Tail classification of |K| used by moment computations (kappa thresholds)
// and the solver's admissibility check.
struct TailSpec {
    enum Kind { Unknown, Power, Compact, SuperPolynomial } kind = Unknown;
    double exponent = 0.0; // |K| ~ C r^{-exponent} when kind == Power
};

// Sign and magnitude of a prescribed curvature: K = sign * upsilon with
// upsilon >= 0. sign == 0 iff upsilon vanishes identically (flat case).
struct CurvatureSpec {
    int sign = 0;
    std::function<double(Vec2)> upsilon;
    bool radial = false;
    std::function<double(double)> upsilon_radial; // set when radial == true
    TailSpec tail;
    std::string name;

    double K(Vec2 x) const { return sign == 0 ? 0.0 : sign * upsilon(x); }
};

// Magnitude-with-sign evaluators for the test measures used throughout.
CurvatureSpec curvature_of_family(const FamilyInstance& inst);
CurvatureSpec curvature_flat();
CurvatureSpec curvature_disk_indicator(double radius);     // 1 on |x| <= radius
CurvatureSpec curvature_smooth_bump(double radius);        // exp(1 - 1/(1 - (r/R)^2)) inside
CurvatureSpec curvature_exp_decay(double rate = 1.0, int sign = -1); // e^{-rate |x|}

} // namespace logsurf

#endif
