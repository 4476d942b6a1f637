#include "sos/series.hpp"

#include <sstream>

#include "sos/error.hpp"

namespace sos {

void Series::add_half(int twice_t_power, int eu_power, const Rational& c) {
    if (c == 0 || twice_t_power > 2 * order_) return;
    Key k{twice_t_power, eu_power};
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(k, c);
        return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

void Series::add(int t_power, int eu_power, const Rational& c) { add_half(2 * t_power, eu_power, c); }

Rational Series::coefficient(int t_power, int eu_power) const {
    auto it = terms_.find({2 * t_power, eu_power});
    return it == terms_.end() ? Rational(0) : it->second;
}

Rational Series::t_coefficient(int t_power) const {
    Rational sum = 0;
    for (auto& [k, c] : terms_)
        if (k.first == 2 * t_power) sum += c;
    return sum;
}

int Series::min_t_power() const {
    if (terms_.empty()) return order_ + 1;
    return terms_.begin()->first.first / 2;
}

Series Series::operator+(const Series& o) const {
    Series out(std::min(order_, o.order_));
    for (auto& [k, c] : terms_) out.add_half(k.first, k.second, c);
    for (auto& [k, c] : o.terms_) out.add_half(k.first, k.second, c);
    out.linear_u_ = linear_u_ + o.linear_u_;
    return out;
}

Series Series::operator-() const { return scaled(Rational(-1)); }

Series Series::operator-(const Series& o) const { return *this + (-o); }

Series Series::scaled(const Rational& s) const {
    Series out(order_);
    if (s == 0) return out;
    for (auto& [k, c] : terms_) out.terms_.emplace(k, c * s);
    out.linear_u_ = linear_u_ * s;
    return out;
}

Series Series::shifted(int t_power, int eu_power) const {
    if (linear_u_ != 0) throw Error(ErrorCode::InvalidArgument, "cannot shift a series with a bare u term");
    Series out(order_);
    for (auto& [k, c] : terms_) out.add_half(k.first + 2 * t_power, k.second + eu_power, c);
    return out;
}

Series Series::truncated(int order) const {
    Series out(std::min(order, order_));
    for (auto& [k, c] : terms_) out.add_half(k.first, k.second, c);
    out.linear_u_ = linear_u_;
    return out;
}

Series Series::times(const Series& o) const {
    if (linear_u_ != 0 || o.linear_u_ != 0)
        throw Error(ErrorCode::InvalidArgument, "product of series with bare u terms is not representable");
    Series out(std::min(order_, o.order_));
    for (auto& [a, ca] : terms_)
        for (auto& [b, cb] : o.terms_) out.add_half(a.first + b.first, a.second + b.second, ca * cb);
    return out;
}

Series Series::slice(int t_min, int t_max) const {
    Series out(order_);
    for (auto& [k, c] : terms_)
        if (k.first >= 2 * t_min && k.first <= 2 * t_max) out.terms_.emplace(k, c);
    return out;
}

HighFloat Series::evaluate(const HighFloat& t, const HighFloat& u) const {
    HighFloat sum = 0;
    HighFloat root_t = boost::multiprecision::sqrt(t);
    for (auto& [k, c] : terms_) {
        HighFloat term = HighFloat(boost::multiprecision::numerator(c)) /
                         HighFloat(boost::multiprecision::denominator(c));
        term *= boost::multiprecision::pow(root_t, k.first);
        term *= boost::multiprecision::exp(u * k.second);
        sum += term;
    }
    sum += HighFloat(boost::multiprecision::numerator(linear_u_)) /
           HighFloat(boost::multiprecision::denominator(linear_u_)) * u;
    return sum;
}

double Series::evaluate(double t, double u) const {
    return static_cast<double>(evaluate(HighFloat(t), HighFloat(u)));
}

std::string Series::dump() const {
    std::ostringstream os;
    os << "order " << order_ << '\n';
    if (linear_u_ != 0)
        os << "u " << boost::multiprecision::numerator(linear_u_) << ' '
           << boost::multiprecision::denominator(linear_u_) << '\n';
    for (auto& [k, c] : terms_)
        os << k.first << ' ' << k.second << ' ' << boost::multiprecision::numerator(c) << ' '
           << boost::multiprecision::denominator(c) << '\n';
    return os.str();
}

Series Series::parse(const std::string& text) {
    std::istringstream is(text);
    std::string word;
    int order;
    if (!(is >> word >> order) || word != "order") throw Error(ErrorCode::ParseError, "series must start with 'order N'");
    Series s(order);
    std::string first;
    while (is >> first) {
        boost::multiprecision::cpp_int num, den;
        if (first == "u") {
            if (!(is >> num >> den)) throw Error(ErrorCode::ParseError, "bad u line");
            s.linear_u_ = Rational(num, den);
            continue;
        }
        int q;
        if (!(is >> q >> num >> den)) throw Error(ErrorCode::ParseError, "bad series line");
        int twice_p = std::stoi(first);
        if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator");
        s.add_half(twice_p, q, Rational(num, den));
    }
    return s;
}

std::string Series::pretty() const {
    std::ostringstream os;
    bool first = true;
    auto emit_coeff = [&](const Rational& c, bool bare) {
        Rational a = c < 0 ? Rational(-c) : c;
        if (first)
            os << (c < 0 ? "-" : "");
        else
            os << (c < 0 ? " - " : " + ");
        first = false;
        if (a != 1 || bare) os << a << (bare ? "" : " ");
    };
    if (linear_u_ != 0) {
        emit_coeff(linear_u_, false);
        os << "u";
    }
    for (auto& [k, c] : terms_) {
        bool bare = k.first == 0 && k.second == 0;
        emit_coeff(c, bare);
        bool need_space = false;
        if (k.first != 0) {
            os << "t";
            if (k.first % 2)
                os << "^{" << k.first << "/2}";
            else if (k.first != 2)
                os << "^" << k.first / 2;
            need_space = true;
        }
        if (k.second != 0) {
            if (need_space) os << ' ';
            os << "e^{" << (k.second == 1 ? "" : k.second == -1 ? "-" : std::to_string(k.second)) << "u}";
        }
    }
    if (first) os << "0";
    return os.str();
}

Series log_one_plus(const Series& w) {
    if (w.linear_u() != 0) throw Error(ErrorCode::InvalidArgument, "log of a series with a bare u term");
    if (w.min_t_power() < 1) throw Error(ErrorCode::InvalidArgument, "log(1+W) needs W without constant term");
    Series out(w.order());
    Series power = w;
    for (int j = 1; !power.terms().empty(); ++j) {
        out = out + power.scaled(Rational(j % 2 ? 1 : -1, j));
        power = power.times(w);
    }
    return out;
}

}  // namespace sos
