#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace sfif {

// Real polynomial with coefficients stored in ascending degree order.
// Coefficient arithmetic (derivative, antiderivative, definite integral)
// is exact in the sense that no quadrature is involved.
class Polynomial {
public:
    Polynomial() : c_{0.0} {}
    Polynomial(std::initializer_list<double> c) : c_(c) {
        if (c_.empty()) c_.push_back(0.0);
    }
    explicit Polynomial(std::vector<double> c) : c_(std::move(c)) {
        if (c_.empty()) c_.push_back(0.0);
    }

    static Polynomial affine(double intercept, double slope) {
        return Polynomial{intercept, slope};
    }

    const std::vector<double>& coeffs() const { return c_; }

    // Highest stored index; trailing zero coefficients are not trimmed,
    // so this is an upper bound on the mathematical degree.
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    double operator()(double x) const {
        double y = 0.0;
        for (std::size_t i = c_.size(); i-- > 0;) y = y * x + c_[i];
        return y;
    }

    Polynomial derivative() const {
        if (c_.size() == 1) return Polynomial{};
        std::vector<double> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i)
            d[i - 1] = c_[i] * static_cast<double>(i);
        return Polynomial(std::move(d));
    }

    // Antiderivative with zero constant term.
    Polynomial antiderivative() const {
        std::vector<double> a(c_.size() + 1, 0.0);
        for (std::size_t i = 0; i < c_.size(); ++i)
            a[i + 1] = c_[i] / static_cast<double>(i + 1);
        return Polynomial(std::move(a));
    }

    double integral(double lo, double hi) const {
        Polynomial a = antiderivative();
        return a(hi) - a(lo);
    }

    Polynomial scaled(double s) const {
        std::vector<double> c(c_);
        for (double& v : c) v *= s;
        return Polynomial(std::move(c));
    }

    // Adds a constant shift in place.
    Polynomial& operator+=(double v) {
        c_[0] += v;
        return *this;
    }

    friend bool coeffs_close(const Polynomial& p, const Polynomial& q, double tol) {
        std::size_t n = std::max(p.c_.size(), q.c_.size());
        for (std::size_t i = 0; i < n; ++i) {
            double a = i < p.c_.size() ? p.c_[i] : 0.0;
            double b = i < q.c_.size() ? q.c_[i] : 0.0;
            if (std::abs(a - b) > tol) return false;
        }
        return true;
    }

private:
    std::vector<double> c_;
};

} // namespace sfif
