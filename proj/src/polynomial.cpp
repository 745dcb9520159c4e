#include "ellfib/polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

namespace ellfib {

BivariatePoly BivariatePoly::constant(const Rational& c) { return monomial(c, 0, 0); }
BivariatePoly BivariatePoly::s() { return monomial(1, 1, 0); }
BivariatePoly BivariatePoly::t() { return monomial(1, 0, 1); }

BivariatePoly BivariatePoly::monomial(const Rational& c, std::uint32_t s_exp, std::uint32_t t_exp) {
    BivariatePoly p;
    p.add_term({s_exp, t_exp}, c);
    return p;
}

Rational BivariatePoly::coefficient(Monomial m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void BivariatePoly::add_term(Monomial m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (inserted) return;
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

BivariatePoly& BivariatePoly::operator+=(const BivariatePoly& rhs) {
    for (const auto& [m, c] : rhs.terms_) add_term(m, c);
    return *this;
}

BivariatePoly& BivariatePoly::operator-=(const BivariatePoly& rhs) {
    for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
    return *this;
}

BivariatePoly BivariatePoly::operator-() const {
    BivariatePoly out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

BivariatePoly operator*(const BivariatePoly& lhs, const BivariatePoly& rhs) {
    BivariatePoly out;
    for (const auto& [ml, cl] : lhs.terms_)
        for (const auto& [mr, cr] : rhs.terms_) out.add_term({ml.s + mr.s, ml.t + mr.t}, cl * cr);
    return out;
}

BivariatePoly operator*(const Rational& c, const BivariatePoly& p) {
    BivariatePoly out;
    if (c == 0) return out;
    for (const auto& [m, coeff] : p.terms_) out.terms_.emplace(m, c * coeff);
    return out;
}

BivariatePoly BivariatePoly::pow(unsigned exponent) const {
    BivariatePoly result = constant(1);
    BivariatePoly base = *this;
    while (exponent) {
        if (exponent & 1u) result = result * base;
        exponent >>= 1u;
        if (exponent) base = base * base;
    }
    return result;
}

std::string BivariatePoly::to_string() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<Monomial, Rational>> ordered(terms_.begin(), terms_.end());
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        if (a.first.total_degree() != b.first.total_degree())
            return a.first.total_degree() > b.first.total_degree();
        return a.first.s > b.first.s;
    });

    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : ordered) {
        Rational magnitude = abs(c);
        if (first) {
            if (c < 0) os << '-';
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;

        std::vector<std::string> factors;
        const bool has_vars = m.s > 0 || m.t > 0;
        if (magnitude != 1 || !has_vars) factors.push_back(magnitude.get_str());
        auto var = [&](char name, std::uint32_t e) {
            if (e == 0) return;
            std::string v(1, name);
            if (e > 1) v += "^" + std::to_string(e);
            factors.push_back(v);
        };
        var('s', m.s);
        var('t', m.t);
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i) os << '*';
            os << factors[i];
        }
    }
    return os.str();
}

}  // namespace ellfib
