#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <utility>

namespace mfzeta {

class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    BigFloat(const BigFloat& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

private:
    mpfr_t v_;
};

// Closed interval [lo, hi] maintained with outward rounding.
struct Interval {
    BigFloat lo, hi;

    explicit Interval(mpfr_prec_t prec) : lo(prec), hi(prec) {}

    static Interval log_of(const mpz_class& n, mpfr_prec_t prec) {
        Interval r(prec);
        mpfr_set_z(r.lo.get(), n.get_mpz_t(), MPFR_RNDD);
        mpfr_log(r.lo.get(), r.lo.get(), MPFR_RNDD);
        mpfr_set_z(r.hi.get(), n.get_mpz_t(), MPFR_RNDU);
        mpfr_log(r.hi.get(), r.hi.get(), MPFR_RNDU);
        return r;
    }

    Interval scaled(long c) const {
        Interval r(lo.prec());
        if (c >= 0) {
            mpfr_mul_si(r.lo.get(), lo.get(), c, MPFR_RNDD);
            mpfr_mul_si(r.hi.get(), hi.get(), c, MPFR_RNDU);
        } else {
            mpfr_mul_si(r.lo.get(), hi.get(), c, MPFR_RNDD);
            mpfr_mul_si(r.hi.get(), lo.get(), c, MPFR_RNDU);
        }
        return r;
    }

    Interval& operator+=(const Interval& o) {
        mpfr_add(lo.get(), lo.get(), o.lo.get(), MPFR_RNDD);
        mpfr_add(hi.get(), hi.get(), o.hi.get(), MPFR_RNDU);
        return *this;
    }

    Interval operator-(const Interval& o) const {
        Interval r(lo.prec());
        mpfr_sub(r.lo.get(), lo.get(), o.hi.get(), MPFR_RNDD);
        mpfr_sub(r.hi.get(), hi.get(), o.lo.get(), MPFR_RNDU);
        return r;
    }

    Interval operator*(const Interval& o) const {
        mpfr_prec_t p = lo.prec();
        Interval r(p);
        BigFloat t(p);
        mpfr_srcptr a[2] = {lo.get(), hi.get()};
        mpfr_srcptr b[2] = {o.lo.get(), o.hi.get()};
        bool first = true;
        for (auto x : a)
            for (auto y : b) {
                mpfr_mul(t.get(), x, y, MPFR_RNDD);
                if (first || mpfr_less_p(t.get(), r.lo.get())) mpfr_set(r.lo.get(), t.get(), MPFR_RNDD);
                mpfr_mul(t.get(), x, y, MPFR_RNDU);
                if (first || mpfr_greater_p(t.get(), r.hi.get())) mpfr_set(r.hi.get(), t.get(), MPFR_RNDU);
                first = false;
            }
        return r;
    }

    // -1, +1, or 0 when the interval straddles zero.
    int certain_sign() const {
        if (mpfr_sgn(lo.get()) > 0) return 1;
        if (mpfr_sgn(hi.get()) < 0) return -1;
        return 0;
    }
};

}  // namespace mfzeta
