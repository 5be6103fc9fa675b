#include "biostab/spline.hpp"

#include <algorithm>
#include <cmath>

#include "biostab/errors.hpp"

namespace biostab {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const int n = static_cast<int>(x_.size());
    if (n < 4 || y_.size() != x_.size())
        throw ValidationError("CubicSpline: need >= 4 nodes and matching arrays");
    for (int i = 0; i + 1 < n; ++i)
        if (!(x_[i + 1] > x_[i]))
            throw ValidationError("CubicSpline: abscissae must be strictly increasing");

    // Solve for interior second derivatives with not-a-knot rows folded in:
    // third-derivative continuity across x_1 and x_{n-2} eliminates m_0, m_{n-1}.
    const int ni = n - 2;  // unknowns m_1 .. m_{n-2}
    std::vector<double> a(ni, 0.0), b(ni, 0.0), c(ni, 0.0), r(ni, 0.0);
    auto h = [&](int i) { return x_[i + 1] - x_[i]; };
    auto slope = [&](int i) { return (y_[i + 1] - y_[i]) / h(i); };

    for (int i = 1; i <= n - 2; ++i) {
        const int j = i - 1;
        a[j] = h(i - 1) / 6.0;
        b[j] = (h(i - 1) + h(i)) / 3.0;
        c[j] = h(i) / 6.0;
        r[j] = slope(i) - slope(i - 1);
    }
    // m_0 = (1 + h0/h1) m_1 - (h0/h1) m_2
    {
        const double t = h(0) / h(1);
        b[0] += a[0] * (1.0 + t);
        c[0] -= a[0] * t;
        a[0] = 0.0;
    }
    // m_{n-1} = (1 + h_{n-2}/h_{n-3}) m_{n-2} - (h_{n-2}/h_{n-3}) m_{n-3}
    {
        const double t = h(n - 2) / h(n - 3);
        b[ni - 1] += c[ni - 1] * (1.0 + t);
        a[ni - 1] -= c[ni - 1] * t;
        c[ni - 1] = 0.0;
    }

    // Thomas algorithm.
    for (int j = 1; j < ni; ++j) {
        const double w = a[j] / b[j - 1];
        b[j] -= w * c[j - 1];
        r[j] -= w * r[j - 1];
    }
    std::vector<double> m(ni);
    m[ni - 1] = r[ni - 1] / b[ni - 1];
    for (int j = ni - 2; j >= 0; --j) m[j] = (r[j] - c[j] * m[j + 1]) / b[j];

    m_.assign(n, 0.0);
    for (int j = 0; j < ni; ++j) m_[j + 1] = m[j];
    m_[0] = (1.0 + h(0) / h(1)) * m_[1] - (h(0) / h(1)) * m_[2];
    m_[n - 1] = (1.0 + h(n - 2) / h(n - 3)) * m_[n - 2] - (h(n - 2) / h(n - 3)) * m_[n - 3];
}

int CubicSpline::interval(double x) const {
    if (!(x >= x_.front() && x <= x_.back()))
        throw DomainError("CubicSpline: evaluation point outside data range");
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    int i = static_cast<int>(it - x_.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(x_.size()) - 2);
}

double CubicSpline::value(double x) const {
    const int i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double u = x_[i + 1] - x, v = x - x_[i];
    return (m_[i] * u * u * u + m_[i + 1] * v * v * v) / (6.0 * h) +
           (y_[i] / h - m_[i] * h / 6.0) * u + (y_[i + 1] / h - m_[i + 1] * h / 6.0) * v;
}

double CubicSpline::derivative(double x) const {
    const int i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double u = x_[i + 1] - x, v = x - x_[i];
    return (-m_[i] * u * u + m_[i + 1] * v * v) / (2.0 * h) -
           (y_[i] / h - m_[i] * h / 6.0) + (y_[i + 1] / h - m_[i + 1] * h / 6.0);
}

}  // namespace biostab
