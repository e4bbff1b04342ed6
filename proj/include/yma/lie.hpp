#ifndef YMA_LIE_HPP
#define YMA_LIE_HPP

#include <array>
#include <cmath>
#include <string>

#include "yma/errors.hpp"

namespace yma {

enum class GroupTag { U1, SU2 };

inline int algebra_dim(GroupTag g) { return g == GroupTag::U1 ? 1 : 3; }
inline std::string group_name(GroupTag g) { return g == GroupTag::U1 ? "u1" : "su2"; }

/// Element of the Lie algebra: u(1) stored as the real lambda in xi = i*lambda,
/// su(2) as coefficients in the basis {tau_a} with [tau_a, tau_b] = eps_abc tau_c.
/// The basis is orthonormal for the trace pairing.
struct AlgebraElement {
    GroupTag tag = GroupTag::U1;
    std::array<double, 3> c{0.0, 0.0, 0.0};  // U1 uses c[0] only

    AlgebraElement() = default;
    static AlgebraElement u1(double lambda) { return {GroupTag::U1, {lambda, 0.0, 0.0}}; }
    static AlgebraElement su2(double a, double b, double d) { return {GroupTag::SU2, {a, b, d}}; }
    static AlgebraElement zero(GroupTag g) { return {g, {0.0, 0.0, 0.0}}; }

    AlgebraElement(GroupTag t, std::array<double, 3> coeffs) : tag(t), c(coeffs) {}

    double norm() const { return std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]); }
};

inline AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y) {
    if (x.tag != y.tag) throw StructuralError("algebra: group tag mismatch in +");
    return {x.tag, {x.c[0] + y.c[0], x.c[1] + y.c[1], x.c[2] + y.c[2]}};
}
inline AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y) {
    if (x.tag != y.tag) throw StructuralError("algebra: group tag mismatch in -");
    return {x.tag, {x.c[0] - y.c[0], x.c[1] - y.c[1], x.c[2] - y.c[2]}};
}
inline AlgebraElement operator*(double s, const AlgebraElement& x) {
    return {x.tag, {s * x.c[0], s * x.c[1], s * x.c[2]}};
}

/// Group element: U(1) as an angle in (-pi, pi], SU(2) as a unit quaternion
/// (w, x, y, z). exp(theta * tau_a) is the quaternion with half-angle theta/2.
struct GroupElement {
    GroupTag tag = GroupTag::U1;
    double angle = 0.0;                          // U1
    std::array<double, 4> q{1.0, 0.0, 0.0, 0.0};  // SU2, |q| = 1

    static GroupElement identity(GroupTag g) {
        GroupElement e;
        e.tag = g;
        return e;
    }
    static GroupElement u1(double theta);
    static GroupElement su2(double w, double x, double y, double z);
};

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y);
double trace_pair(const AlgebraElement& x, const AlgebraElement& y);

GroupElement exp(const AlgebraElement& x);
AlgebraElement log(const GroupElement& g);

GroupElement multiply(const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupElement& g);
AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x);

/// Geodesic distance |log(g^-1 h)| on the group.
double group_distance(const GroupElement& g, const GroupElement& h);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double theta);

}  // namespace yma

#endif
