#include "umbilic/jet.hpp"

#include <cmath>

#include "umbilic/errors.hpp"

namespace umbilic {

std::pair<Jet3, Jet3> seed_coordinates(double u0, double v0) {
    return {Jet3::var_u(u0), Jet3::var_v(v0)};
}

Jet3 operator+(const Jet3& a, const Jet3& b) {
    Jet3 r;
    r.f = a.f + b.f;
    r.fu = a.fu + b.fu;
    r.fv = a.fv + b.fv;
    r.fuu = a.fuu + b.fuu;
    r.fuv = a.fuv + b.fuv;
    r.fvv = a.fvv + b.fvv;
    r.fuuu = a.fuuu + b.fuuu;
    r.fuuv = a.fuuv + b.fuuv;
    r.fuvv = a.fuvv + b.fuvv;
    r.fvvv = a.fvvv + b.fvvv;
    return r;
}

Jet3 operator-(const Jet3& a, const Jet3& b) {
    Jet3 r;
    r.f = a.f - b.f;
    r.fu = a.fu - b.fu;
    r.fv = a.fv - b.fv;
    r.fuu = a.fuu - b.fuu;
    r.fuv = a.fuv - b.fuv;
    r.fvv = a.fvv - b.fvv;
    r.fuuu = a.fuuu - b.fuuu;
    r.fuuv = a.fuuv - b.fuuv;
    r.fuvv = a.fuvv - b.fuvv;
    r.fvvv = a.fvvv - b.fvvv;
    return r;
}

Jet3 operator-(const Jet3& a) {
    Jet3 r;
    r.f = -a.f;
    r.fu = -a.fu;
    r.fv = -a.fv;
    r.fuu = -a.fuu;
    r.fuv = -a.fuv;
    r.fvv = -a.fvv;
    r.fuuu = -a.fuuu;
    r.fuuv = -a.fuuv;
    r.fuvv = -a.fuvv;
    r.fvvv = -a.fvvv;
    return r;
}

// Leibniz rule through order three; the mixed third-order terms follow the
// multinomial pattern sum_{i<=2, j<=1} C(2,i) C(1,j) (d^i_u d^j_v a)(d^(2-i)_u d^(1-j)_v b).
Jet3 operator*(const Jet3& a, const Jet3& b) {
    Jet3 r;
    r.f = a.f * b.f;
    r.fu = a.fu * b.f + a.f * b.fu;
    r.fv = a.fv * b.f + a.f * b.fv;
    r.fuu = a.fuu * b.f + 2.0 * a.fu * b.fu + a.f * b.fuu;
    r.fuv = a.fuv * b.f + a.fu * b.fv + a.fv * b.fu + a.f * b.fuv;
    r.fvv = a.fvv * b.f + 2.0 * a.fv * b.fv + a.f * b.fvv;
    r.fuuu = a.fuuu * b.f + 3.0 * a.fuu * b.fu + 3.0 * a.fu * b.fuu + a.f * b.fuuu;
    r.fuuv = a.fuuv * b.f + a.fuu * b.fv + 2.0 * a.fuv * b.fu + 2.0 * a.fu * b.fuv +
             a.fv * b.fuu + a.f * b.fuuv;
    r.fuvv = a.fuvv * b.f + a.fvv * b.fu + 2.0 * a.fuv * b.fv + 2.0 * a.fv * b.fuv +
             a.fu * b.fvv + a.f * b.fuvv;
    r.fvvv = a.fvvv * b.f + 3.0 * a.fvv * b.fv + 3.0 * a.fv * b.fvv + a.f * b.fvvv;
    return r;
}

namespace {

Jet3 reciprocal(const Jet3& b) {
    if (b.f == 0.0) {
        throw DomainError("division by a jet with zero value");
    }
    const double i = 1.0 / b.f;
    return compose(b, i, -i * i, 2.0 * i * i * i, -6.0 * i * i * i * i);
}

}  // namespace

Jet3 operator/(const Jet3& a, const Jet3& b) { return a * reciprocal(b); }

Jet3 operator+(const Jet3& a, double s) {
    Jet3 r = a;
    r.f += s;
    return r;
}
Jet3 operator+(double s, const Jet3& a) { return a + s; }
Jet3 operator-(const Jet3& a, double s) { return a + (-s); }
Jet3 operator-(double s, const Jet3& a) { return (-a) + s; }

Jet3 operator*(const Jet3& a, double s) {
    Jet3 r;
    r.f = a.f * s;
    r.fu = a.fu * s;
    r.fv = a.fv * s;
    r.fuu = a.fuu * s;
    r.fuv = a.fuv * s;
    r.fvv = a.fvv * s;
    r.fuuu = a.fuuu * s;
    r.fuuv = a.fuuv * s;
    r.fuvv = a.fuvv * s;
    r.fvvv = a.fvvv * s;
    return r;
}
Jet3 operator*(double s, const Jet3& a) { return a * s; }
Jet3 operator/(const Jet3& a, double s) { return a * (1.0 / s); }
Jet3 operator/(double s, const Jet3& a) { return reciprocal(a) * s; }

Jet3 compose(const Jet3& a, double p0, double p1, double p2, double p3) {
    Jet3 g;
    g.f = p0;
    g.fu = p1 * a.fu;
    g.fv = p1 * a.fv;
    g.fuu = p2 * a.fu * a.fu + p1 * a.fuu;
    g.fuv = p2 * a.fu * a.fv + p1 * a.fuv;
    g.fvv = p2 * a.fv * a.fv + p1 * a.fvv;
    g.fuuu = p3 * a.fu * a.fu * a.fu + 3.0 * p2 * a.fu * a.fuu + p1 * a.fuuu;
    g.fuuv = p3 * a.fu * a.fu * a.fv + p2 * (a.fuu * a.fv + 2.0 * a.fu * a.fuv) + p1 * a.fuuv;
    g.fuvv = p3 * a.fu * a.fv * a.fv + p2 * (a.fvv * a.fu + 2.0 * a.fv * a.fuv) + p1 * a.fuvv;
    g.fvvv = p3 * a.fv * a.fv * a.fv + 3.0 * p2 * a.fv * a.fvv + p1 * a.fvvv;
    return g;
}

Jet3 int_pow(const Jet3& a, int n) {
    if (n < 0) {
        return reciprocal(int_pow(a, -n));
    }
    Jet3 result = Jet3::constant(1.0);
    Jet3 base = a;
    int e = n;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return result;
}

Jet3 sin(const Jet3& a) {
    const double s = std::sin(a.f), c = std::cos(a.f);
    return compose(a, s, c, -s, -c);
}

Jet3 cos(const Jet3& a) {
    const double s = std::sin(a.f), c = std::cos(a.f);
    return compose(a, c, -s, -c, s);
}

Jet3 sinh(const Jet3& a) {
    const double s = std::sinh(a.f), c = std::cosh(a.f);
    return compose(a, s, c, s, c);
}

Jet3 cosh(const Jet3& a) {
    const double s = std::sinh(a.f), c = std::cosh(a.f);
    return compose(a, c, s, c, s);
}

Jet3 exp(const Jet3& a) {
    const double e = std::exp(a.f);
    return compose(a, e, e, e, e);
}

Jet3 ln(const Jet3& a) {
    if (!(a.f > 0.0)) {
        throw DomainError("ln of a nonpositive jet value");
    }
    const double i = 1.0 / a.f;
    return compose(a, std::log(a.f), i, -i * i, 2.0 * i * i * i);
}

Jet3 sqrt(const Jet3& a) {
    if (!(a.f > 0.0)) {
        throw DomainError("sqrt of a nonpositive jet value");
    }
    const double s = std::sqrt(a.f);
    const double p1 = 0.5 / s;
    const double p2 = -0.25 / (s * a.f);
    const double p3 = 0.375 / (s * a.f * a.f);
    return compose(a, s, p1, p2, p3);
}

Jet3 d_du(const Jet3& a) {
    Jet3 r;
    r.f = a.fu;
    r.fu = a.fuu;
    r.fv = a.fuv;
    r.fuu = a.fuuu;
    r.fuv = a.fuuv;
    r.fvv = a.fuvv;
    return r;
}

Jet3 d_dv(const Jet3& a) {
    Jet3 r;
    r.f = a.fv;
    r.fu = a.fuv;
    r.fv = a.fvv;
    r.fuu = a.fuuv;
    r.fuv = a.fuvv;
    r.fvv = a.fvvv;
    return r;
}

Jet3 finite_difference_oracle(const std::function<double(double, double)>& field,
                              double u0, double v0, double h) {
    // F[i+2][j+2] = field(u0 + i h, v0 + j h)
    double F[5][5];
    for (int i = -2; i <= 2; ++i) {
        for (int j = -2; j <= 2; ++j) {
            F[i + 2][j + 2] = field(u0 + i * h, v0 + j * h);
        }
    }
    auto at = [&](int i, int j) { return F[i + 2][j + 2]; };

    Jet3 r;
    r.f = at(0, 0);
    r.fu = (at(1, 0) - at(-1, 0)) / (2.0 * h);
    r.fv = (at(0, 1) - at(0, -1)) / (2.0 * h);
    r.fuu = (at(1, 0) - 2.0 * at(0, 0) + at(-1, 0)) / (h * h);
    r.fvv = (at(0, 1) - 2.0 * at(0, 0) + at(0, -1)) / (h * h);
    r.fuv = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h * h);
    r.fuuu = (at(2, 0) - 2.0 * at(1, 0) + 2.0 * at(-1, 0) - at(-2, 0)) / (2.0 * h * h * h);
    r.fvvv = (at(0, 2) - 2.0 * at(0, 1) + 2.0 * at(0, -1) - at(0, -2)) / (2.0 * h * h * h);
    r.fuuv = ((at(1, 1) - 2.0 * at(0, 1) + at(-1, 1)) -
              (at(1, -1) - 2.0 * at(0, -1) + at(-1, -1))) / (2.0 * h * h * h);
    r.fuvv = ((at(1, 1) - 2.0 * at(1, 0) + at(1, -1)) -
              (at(-1, 1) - 2.0 * at(-1, 0) + at(-1, -1))) / (2.0 * h * h * h);
    return r;
}

Jet3 finite_difference_oracle_richardson(const std::function<double(double, double)>& field,
                                         double u0, double v0, double h) {
    const Jet3 coarse = finite_difference_oracle(field, u0, v0, h);
    const Jet3 fine = finite_difference_oracle(field, u0, v0, 0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

}  // namespace umbilic
