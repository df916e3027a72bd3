#pragma once

// Thin RAII wrappers over MPFR. Precision travels with the value; binary
// operations use the larger operand precision.

#include <mpfr.h>

#include <algorithm>
#include <string>
#include <utility>

#include "latsum/rational.hpp"

namespace latsum {

class Real {
public:
    explicit Real(mpfr_prec_t prec = 128) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    Real(long x, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_si(v_, x, MPFR_RNDN);
    }
    Real(const Q& q, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
    }
    static Real from_ld(long double x, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_ld(r.v_, x, MPFR_RNDN);
        return r;
    }
    Real(const Real& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

    static Real pi(mpfr_prec_t prec) {
        Real r(prec);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    std::string str(int digits = 0) const {
        if (digits <= 0) digits = static_cast<int>(prec() * 0.30103) + 1;
        char* buf = nullptr;
        mpfr_asprintf(&buf, "%.*Rg", digits, v_);
        std::string s(buf);
        mpfr_free_str(buf);
        return s;
    }

    Real& operator+=(const Real& o) { return bin(o, mpfr_add); }
    Real& operator-=(const Real& o) { return bin(o, mpfr_sub); }
    Real& operator*=(const Real& o) { return bin(o, mpfr_mul); }
    Real& operator/=(const Real& o) { return bin(o, mpfr_div); }

    friend Real operator+(Real a, const Real& b) { return a += b; }
    friend Real operator-(Real a, const Real& b) { return a -= b; }
    friend Real operator*(Real a, const Real& b) { return a *= b; }
    friend Real operator/(Real a, const Real& b) { return a /= b; }
    friend Real operator-(Real a) {
        mpfr_neg(a.v_, a.v_, MPFR_RNDN);
        return a;
    }
    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const Real& a, const Real& b) { return b < a; }
    friend bool operator<=(const Real& a, const Real& b) { return !(b < a); }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

    friend Real abs(Real a) {
        mpfr_abs(a.v_, a.v_, MPFR_RNDN);
        return a;
    }
    friend Real sqrt(Real a) {
        mpfr_sqrt(a.v_, a.v_, MPFR_RNDN);
        return a;
    }
    friend Real exp(Real a) {
        mpfr_exp(a.v_, a.v_, MPFR_RNDN);
        return a;
    }
    friend Real log(Real a) {
        mpfr_log(a.v_, a.v_, MPFR_RNDN);
        return a;
    }
    friend std::pair<Real, Real> sin_cos(const Real& a) {
        Real s(a.prec()), c(a.prec());
        mpfr_sin_cos(s.v_, c.v_, a.v_, MPFR_RNDN);
        return {std::move(s), std::move(c)};
    }

private:
    template <class F>
    Real& bin(const Real& o, F f) {
        mpfr_prec_t p = std::max(prec(), o.prec());
        if (p != prec()) mpfr_prec_round(v_, p, MPFR_RNDN);
        f(v_, v_, o.v_, MPFR_RNDN);
        return *this;
    }
    mpfr_t v_;
};

class Complex {
public:
    explicit Complex(mpfr_prec_t prec = 128) : re_(prec), im_(prec) {}
    Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
    Complex(const Q& re, const Q& im, mpfr_prec_t prec) : re_(re, prec), im_(im, prec) {}

    const Real& re() const { return re_; }
    const Real& im() const { return im_; }
    Real& re() { return re_; }
    Real& im() { return im_; }
    mpfr_prec_t prec() const { return std::max(re_.prec(), im_.prec()); }

    // e^{i*theta}
    static Complex cis(const Real& theta) {
        auto [s, c] = sin_cos(theta);
        return {std::move(c), std::move(s)};
    }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool finite() const { return re_.finite() && im_.finite(); }

    Complex& operator+=(const Complex& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    Complex& operator-=(const Complex& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    Complex& operator*=(const Complex& o) {
        Real r = re_ * o.re_ - im_ * o.im_;
        Real i = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }
    Complex& operator/=(const Complex& o) {
        Real d = o.re_ * o.re_ + o.im_ * o.im_;
        Real r = (re_ * o.re_ + im_ * o.im_) / d;
        Real i = (im_ * o.re_ - re_ * o.im_) / d;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }
    Complex& operator*=(const Real& s) {
        re_ *= s;
        im_ *= s;
        return *this;
    }
    friend Complex operator+(Complex a, const Complex& b) { return a += b; }
    friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
    friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
    friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
    friend Complex operator-(const Complex& a) { return {-a.re_, -a.im_}; }

    friend Real abs(const Complex& a) { return sqrt(a.re_ * a.re_ + a.im_ * a.im_); }

    std::string str(int digits = 0) const {
        std::string s = re_.str(digits);
        if (!im_.is_zero()) {
            if (im_.sign() < 0)
                s += " - " + abs(im_).str(digits) + "*i";
            else
                s += " + " + im_.str(digits) + "*i";
        }
        return s;
    }

private:
    Real re_, im_;
};

}  // namespace latsum
