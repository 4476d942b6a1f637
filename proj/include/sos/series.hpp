#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>
#include <utility>

namespace sos {

using Rational = boost::multiprecision::cpp_rational;
using HighFloat = boost::multiprecision::cpp_bin_float_100;

// Truncated series in t with e^u as a formal generator, plus one bare-u coefficient.
// Keys are (2 * power of t, power of e^u).
class Series {
public:
    using Key = std::pair<int, int>;

    Series() = default;
    explicit Series(int order) : order_(order) {}

    int order() const { return order_; }
    const std::map<Key, Rational>& terms() const { return terms_; }
    const Rational& linear_u() const { return linear_u_; }

    // Terms beyond the order are dropped.
    void add(int t_power, int eu_power, const Rational& c);
    void add_half(int twice_t_power, int eu_power, const Rational& c);
    void add_linear_u(const Rational& c) { linear_u_ += c; }

    Rational coefficient(int t_power, int eu_power) const;
    // Sum of coefficients at a given t power (the e^u -> 1 specialization).
    Rational t_coefficient(int t_power) const;
    bool empty() const { return terms_.empty() && linear_u_ == 0; }
    int min_t_power() const;

    Series operator+(const Series& o) const;
    Series operator-(const Series& o) const;
    Series operator-() const;
    Series scaled(const Rational& c) const;
    Series shifted(int t_power, int eu_power) const;
    Series truncated(int order) const;
    Series times(const Series& o) const;
    // Terms with the given t power range only.
    Series slice(int t_min, int t_max) const;

    HighFloat evaluate(const HighFloat& t, const HighFloat& u) const;
    double evaluate(double t, double u) const;

    bool operator==(const Series& o) const {
        return terms_ == o.terms_ && linear_u_ == o.linear_u_;
    }

    // "order N" header, an optional "u num den" line, then "2p q num den" sorted.
    std::string dump() const;
    static Series parse(const std::string& text);
    // Human-readable form, e.g. "-u - t^2 e^{-u} - 2 t^3 e^{-2u}".
    std::string pretty() const;

private:
    int order_ = 0;
    std::map<Key, Rational> terms_;
    Rational linear_u_ = 0;
};

// log(1 + W) for a series W without constant term, truncated at its order.
Series log_one_plus(const Series& w);

}  // namespace sos
