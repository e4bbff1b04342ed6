#include "yma/lie.hpp"

#include <cmath>

namespace yma {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_same_tag(const AlgebraElement& x, const AlgebraElement& y, const char* op) {
    if (x.tag != y.tag) throw StructuralError(std::string("lie: group tag mismatch in ") + op);
}

void renormalize(GroupElement& g) {
    if (g.tag != GroupTag::SU2) return;
    double n = std::sqrt(g.q[0] * g.q[0] + g.q[1] * g.q[1] + g.q[2] * g.q[2] + g.q[3] * g.q[3]);
    for (auto& v : g.q) v /= n;
}

}  // namespace

double wrap_angle(double theta) {
    theta = std::fmod(theta, 2.0 * kPi);
    if (theta > kPi) theta -= 2.0 * kPi;
    if (theta <= -kPi) theta += 2.0 * kPi;
    return theta;
}

GroupElement GroupElement::u1(double theta) {
    GroupElement g;
    g.tag = GroupTag::U1;
    g.angle = wrap_angle(theta);
    return g;
}

GroupElement GroupElement::su2(double w, double x, double y, double z) {
    GroupElement g;
    g.tag = GroupTag::SU2;
    g.q = {w, x, y, z};
    renormalize(g);
    return g;
}

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
    check_same_tag(x, y, "bracket");
    if (x.tag == GroupTag::U1) return AlgebraElement::zero(GroupTag::U1);
    // [tau_a, tau_b] = eps_abc tau_c: the coefficient bracket is the cross product.
    return AlgebraElement::su2(x.c[1] * y.c[2] - x.c[2] * y.c[1],
                               x.c[2] * y.c[0] - x.c[0] * y.c[2],
                               x.c[0] * y.c[1] - x.c[1] * y.c[0]);
}

double trace_pair(const AlgebraElement& x, const AlgebraElement& y) {
    check_same_tag(x, y, "trace_pair");
    return x.c[0] * y.c[0] + x.c[1] * y.c[1] + x.c[2] * y.c[2];
}

GroupElement exp(const AlgebraElement& x) {
    if (x.tag == GroupTag::U1) return GroupElement::u1(x.c[0]);
    GroupElement g;
    g.tag = GroupTag::SU2;
    const double lambda = x.norm();
    const double half = 0.5 * lambda;
    // sin(half)/lambda has a removable singularity at 0.
    const double s = lambda < 1e-8 ? 0.5 * (1.0 - half * half / 6.0) : std::sin(half) / lambda;
    g.q = {std::cos(half), s * x.c[0], s * x.c[1], s * x.c[2]};
    renormalize(g);
    return g;
}

AlgebraElement log(const GroupElement& g) {
    if (g.tag == GroupTag::U1) return AlgebraElement::u1(g.angle);
    const double w = g.q[0];
    const double vn = std::sqrt(g.q[1] * g.q[1] + g.q[2] * g.q[2] + g.q[3] * g.q[3]);
    if (w < -1.0 + 1e-12 && vn < 1e-12)
        throw DomainError("lie: log at the antipodal SU2 element (quaternion real part -1)");
    const double half = std::atan2(vn, w);  // in [0, pi)
    const double lambda = 2.0 * half;
    const double s = vn < 1e-8 ? 2.0 / w : lambda / vn;
    return AlgebraElement::su2(s * g.q[1], s * g.q[2], s * g.q[3]);
}

GroupElement multiply(const GroupElement& g, const GroupElement& h) {
    if (g.tag != h.tag) throw StructuralError("lie: group tag mismatch in multiply");
    if (g.tag == GroupTag::U1) return GroupElement::u1(g.angle + h.angle);
    const auto& a = g.q;
    const auto& b = h.q;
    GroupElement r;
    r.tag = GroupTag::SU2;
    r.q = {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
           a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
           a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
           a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
    renormalize(r);
    return r;
}

GroupElement inverse(const GroupElement& g) {
    if (g.tag == GroupTag::U1) return GroupElement::u1(-g.angle);
    GroupElement r = g;
    r.q[1] = -r.q[1];
    r.q[2] = -r.q[2];
    r.q[3] = -r.q[3];
    return r;
}

AlgebraElement adjoint(const GroupElement& g, const AlgebraElement& x) {
    if (g.tag != x.tag) throw StructuralError("lie: group tag mismatch in adjoint");
    if (g.tag == GroupTag::U1) return x;
    // Ad_g rotates the coefficient vector by the rotation matrix of the quaternion.
    const double w = g.q[0], a = g.q[1], b = g.q[2], d = g.q[3];
    const double vx = x.c[0], vy = x.c[1], vz = x.c[2];
    // v' = v + 2w (u x v) + 2 u x (u x v), u = (a,b,d)
    const double cx = b * vz - d * vy;
    const double cy = d * vx - a * vz;
    const double cz = a * vy - b * vx;
    const double ccx = b * cz - d * cy;
    const double ccy = d * cx - a * cz;
    const double ccz = a * cy - b * cx;
    return AlgebraElement::su2(vx + 2.0 * (w * cx + ccx), vy + 2.0 * (w * cy + ccy),
                               vz + 2.0 * (w * cz + ccz));
}

double group_distance(const GroupElement& g, const GroupElement& h) {
    if (g.tag != h.tag) throw StructuralError("lie: group tag mismatch in group_distance");
    if (g.tag == GroupTag::U1) return std::fabs(wrap_angle(h.angle - g.angle));
    const GroupElement d = multiply(inverse(g), h);
    const double vn = std::sqrt(d.q[1] * d.q[1] + d.q[2] * d.q[2] + d.q[3] * d.q[3]);
    return 2.0 * std::atan2(vn, d.q[0]);
}

}  // namespace yma
