#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>

namespace relscat {

inline constexpr int kMaxDim = 8;

// Small runtime-dimension vector with inline storage. Dimensions in this
// library are tiny (n = 2 or 3 in practice), so everything stays on the stack.
class Vec {
public:
    Vec() : n_(0) { d_.fill(0.0); }
    explicit Vec(int n) : n_(n) {
        assert(n >= 0 && n <= kMaxDim);
        d_.fill(0.0);
    }
    Vec(std::initializer_list<double> xs) : n_(static_cast<int>(xs.size())) {
        assert(n_ <= kMaxDim);
        int i = 0;
        for (double x : xs) d_[i++] = x;
        for (; i < kMaxDim; ++i) d_[i] = 0.0;
    }

    static Vec zero(int n) { return Vec(n); }

    int size() const { return n_; }
    double& operator[](int i) { return d_[i]; }
    double operator[](int i) const { return d_[i]; }

    double* data() { return d_.data(); }
    const double* data() const { return d_.data(); }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < n_; ++i) d_[i] += o.d_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < n_; ++i) d_[i] -= o.d_[i];
        return *this;
    }
    Vec& operator*=(double a) {
        for (int i = 0; i < n_; ++i) d_[i] *= a;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
    friend Vec operator/(Vec a, double s) { return a *= (1.0 / s); }
    friend Vec operator-(Vec a) { return a *= -1.0; }

    friend double dot(const Vec& a, const Vec& b) {
        double s = 0.0;
        for (int i = 0; i < a.n_; ++i) s += a.d_[i] * b.d_[i];
        return s;
    }
    friend double norm2(const Vec& a) { return dot(a, a); }
    friend double norm(const Vec& a) { return std::sqrt(norm2(a)); }
    friend double norm_inf(const Vec& a) {
        double m = 0.0;
        for (int i = 0; i < a.n_; ++i) m = std::max(m, std::abs(a.d_[i]));
        return m;
    }

    bool all_finite() const {
        for (int i = 0; i < n_; ++i)
            if (!std::isfinite(d_[i])) return false;
        return true;
    }

private:
    std::array<double, kMaxDim> d_;
    int n_;
};

// a + s*b without a temporary per term
inline void axpy(Vec& a, double s, const Vec& b) {
    for (int i = 0; i < a.size(); ++i) a[i] += s * b[i];
}

// Small square matrix, row-major, runtime dimension up to kMaxDim.
class Mat {
public:
    Mat() : n_(0) { d_.fill(0.0); }
    explicit Mat(int n) : n_(n) {
        assert(n >= 0 && n <= kMaxDim);
        d_.fill(0.0);
    }

    int size() const { return n_; }
    double& operator()(int i, int k) { return d_[i * kMaxDim + k]; }
    double operator()(int i, int k) const { return d_[i * kMaxDim + k]; }

    Mat& operator+=(const Mat& o) {
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < n_; ++k) (*this)(i, k) += o(i, k);
        return *this;
    }
    friend Mat operator+(Mat a, const Mat& b) { return a += b; }

    friend Vec operator*(const Mat& m, const Vec& v) {
        Vec r(m.n_);
        for (int i = 0; i < m.n_; ++i) {
            double s = 0.0;
            for (int k = 0; k < m.n_; ++k) s += m(i, k) * v[k];
            r[i] = s;
        }
        return r;
    }

    double max_asymmetry() const {
        double m = 0.0;
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < n_; ++k)
                m = std::max(m, std::abs((*this)(i, k) + (*this)(k, i)));
        return m;
    }

private:
    std::array<double, kMaxDim * kMaxDim> d_;
    int n_;
};

}  // namespace relscat
