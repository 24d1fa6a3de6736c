#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace spps {

// Arbitrary-precision real with runtime-selectable precision.  Expression
// templates are disabled so values behave like plain scalars in generic code.
using mpreal = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                             boost::multiprecision::et_off>;

// Traits every scalar type used by the solver must provide.  double covers
// digits <= 15; mpreal anything above.
template <class Real>
struct RealTraits;

template <>
struct RealTraits<double> {
    static int digits() { return 15; }
    static double epsilon() { return 2.220446049250313e-16; }
    static double from_string(const std::string& s) { return std::stod(s); }
    static constexpr bool is_double = true;
};

template <>
struct RealTraits<mpreal> {
    static int digits() { return static_cast<int>(mpreal::default_precision()); }
    static mpreal epsilon() {
        mpreal e = 10;
        return pow(e, 1 - digits());
    }
    static mpreal from_string(const std::string& s) { return mpreal(s); }
    static constexpr bool is_double = false;
};

// Sets the working decimal precision for mpreal on construction and restores
// the previous one on destruction.  digits < 15 is rejected: below double
// precision the solver's cancellation-heavy steps are meaningless.
class PrecisionScope {
  public:
    explicit PrecisionScope(int digits) : saved_(static_cast<int>(mpreal::default_precision())) {
        if (digits < 15)
            throw std::invalid_argument("precision must be at least 15 decimal digits, got " +
                                        std::to_string(digits));
        mpreal::default_precision(digits);
    }
    ~PrecisionScope() { mpreal::default_precision(saved_); }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

  private:
    int saved_;
};

template <class Real>
Real real_pi() {
    using std::acos;
    return acos(Real(-1));
}

template <class Real>
Real real_eps() {
    return RealTraits<Real>::epsilon();
}

}  // namespace spps
