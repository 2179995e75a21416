#include "derham/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace derham {

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    if (s.find('.') != std::string::npos || s.find('e') != std::string::npos ||
        s.find('E') != std::string::npos) {
        std::size_t used = 0;
        double x = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("bad number: " + text);
        return from_double(x);
    }
    try {
        return Rational(s);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rational: " + text);
    }
}

std::string to_string(const Rational& q) { return q.str(); }

Integer factorial(int n) {
    Integer r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

Integer binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    Integer r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

Polynomial Polynomial::constant(int nvars, const Rational& c) {
    Polynomial p(nvars);
    p.add_term(Exponents(nvars, 0), c);
    return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
    if (index < 0 || index >= nvars) throw std::out_of_range("variable index out of range");
    Exponents e(nvars, 0);
    e[index] = 1;
    Polynomial p(nvars);
    p.add_term(e, 1);
    return p;
}

Polynomial Polynomial::monomial(Exponents exponents, const Rational& c) {
    Polynomial p(static_cast<int>(exponents.size()));
    p.add_term(exponents, c);
    return p;
}

int Polynomial::degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
        int s = 0;
        for (int x : e) s += x;
        d = std::max(d, s);
    }
    return d;
}

int Polynomial::degree_in(int var) const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
    return d;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
    if (static_cast<int>(e.size()) != nvars_)
        throw std::invalid_argument("exponent vector length does not match variable count");
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (o.nvars_ != nvars_) throw std::invalid_argument("polynomial variable count mismatch");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (o.nvars_ != nvars_) throw std::invalid_argument("polynomial variable count mismatch");
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) v *= c;
    return *this;
}

Polynomial Polynomial::operator-() const {
    Polynomial r = *this;
    for (auto& [e, v] : r.terms_) v = -v;
    return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.nvars_ != b.nvars_) throw std::invalid_argument("polynomial variable count mismatch");
    Polynomial r(a.nvars_);
    Polynomial::Exponents e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

Polynomial Polynomial::pow(int e) const {
    if (e < 0) throw std::invalid_argument("negative polynomial power");
    Polynomial result = constant(nvars_, 1);
    Polynomial base = *this;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return result;
}

Polynomial Polynomial::derivative(int var) const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponents f = e;
        f[var] -= 1;
        r.add_term(f, c * e[var]);
    }
    return r;
}

Polynomial Polynomial::substitute(std::span<const Polynomial> images) const {
    if (static_cast<int>(images.size()) != nvars_)
        throw std::invalid_argument("substitution needs one image per variable");
    const int out_vars = images.empty() ? 0 : images[0].nvars();
    for (const auto& img : images)
        if (img.nvars() != out_vars) throw std::invalid_argument("substitution images disagree on variable count");
    // powers[i][k] = images[i]^k, built lazily
    std::vector<std::vector<Polynomial>> powers(nvars_);
    auto power = [&](int i, int k) -> const Polynomial& {
        auto& row = powers[i];
        if (row.empty()) row.push_back(constant(out_vars, 1));
        while (static_cast<int>(row.size()) <= k) row.push_back(row.back() * images[i]);
        return row[k];
    };
    Polynomial r(out_vars);
    for (const auto& [e, c] : terms_) {
        Polynomial term = constant(out_vars, c);
        for (int i = 0; i < nvars_; ++i)
            if (e[i] > 0) term = term * power(i, e[i]);
        r += term;
    }
    return r;
}

Polynomial Polynomial::integrate_unit(int var) const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
        Exponents f = e;
        const int k = f[var];
        f[var] = 0;
        r.add_term(f, c / (k + 1));
    }
    return r;
}

Polynomial Polynomial::set_variable(int var, const Rational& value) const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
        Exponents f = e;
        const int k = f[var];
        f[var] = 0;
        Rational scale = 1;
        for (int i = 0; i < k; ++i) scale *= value;
        r.add_term(f, c * scale);
    }
    return r;
}

Polynomial Polynomial::resized(int nvars) const {
    Polynomial r(nvars);
    for (const auto& [e, c] : terms_) {
        Exponents f(nvars, 0);
        for (int i = 0; i < nvars_; ++i) {
            if (i < nvars) {
                f[i] = e[i];
            } else if (e[i] != 0) {
                throw std::invalid_argument("cannot drop a variable that is present");
            }
        }
        r.add_term(f, c);
    }
    return r;
}

Rational Polynomial::evaluate(std::span<const Rational> x) const {
    Rational sum = 0;
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (int i = 0; i < nvars_; ++i)
            for (int k = 0; k < e[i]; ++k) t *= x[i];
        sum += t;
    }
    return sum;
}

double Polynomial::evaluate(std::span<const double> x) const {
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = to_double(c);
        for (int i = 0; i < nvars_; ++i)
            if (e[i] > 0) t *= std::pow(x[i], e[i]);
        sum += t;
    }
    return sum;
}

Rational Polynomial::integrate_reference_simplex(int dim) const {
    // ∫ t_1^{a_1}…t_dim^{a_dim} over the reference simplex = Π a_i! / (dim + Σa)!
    Rational sum = 0;
    for (const auto& [e, c] : terms_) {
        for (int i = dim; i < nvars_; ++i)
            if (e[i] != 0) throw std::invalid_argument("polynomial depends on variables beyond the simplex");
        Integer num = 1;
        int total = dim;
        for (int i = 0; i < dim; ++i) {
            num *= factorial(e[i]);
            total += e[i];
        }
        sum += c * Rational(num, factorial(total));
    }
    return sum;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Print highest-degree terms last for readability; map order is lexicographic.
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.str();
        for (int i = 0; i < nvars_; ++i) {
            if (e[i] == 0) continue;
            os << "*x" << (i + 1);
            if (e[i] > 1) os << "^" << e[i];
        }
    }
    return os.str();
}

CompiledPolynomial::CompiledPolynomial(const Polynomial& p) : nvars_(p.nvars()) {
    for (const auto& [e, c] : p.terms()) {
        exps_.insert(exps_.end(), e.begin(), e.end());
        coeffs_.push_back(to_double(c));
        for (int x : e) max_exp_ = std::max(max_exp_, x);
    }
}

double CompiledPolynomial::operator()(std::span<const double> x) const {
    double sum = 0.0;
    const std::size_t nt = coeffs_.size();
    for (std::size_t t = 0; t < nt; ++t) {
        double v = coeffs_[t];
        const int* e = &exps_[t * nvars_];
        for (int i = 0; i < nvars_; ++i)
            for (int k = 0; k < e[i]; ++k) v *= x[i];
        sum += v;
    }
    return sum;
}

double CompiledPolynomial::value_and_gradient(std::span<const double> x, std::span<double> grad) const {
    const int dim = static_cast<int>(grad.size());
    std::fill(grad.begin(), grad.end(), 0.0);
    double sum = 0.0;
    std::vector<double> pw(nvars_);
    const std::size_t nt = coeffs_.size();
    for (std::size_t t = 0; t < nt; ++t) {
        const int* e = &exps_[t * nvars_];
        double v = coeffs_[t];
        for (int i = 0; i < nvars_; ++i) {
            double p = 1.0;
            for (int k = 0; k < e[i]; ++k) p *= x[i];
            pw[i] = p;
            v *= p;
        }
        sum += v;
        for (int j = 0; j < dim; ++j) {
            if (e[j] == 0) continue;
            double g = coeffs_[t] * e[j];
            for (int i = 0; i < nvars_; ++i) {
                if (i == j) {
                    for (int k = 0; k < e[i] - 1; ++k) g *= x[i];
                } else {
                    g *= pw[i];
                }
            }
            grad[j] += g;
        }
    }
    return sum;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace

Polynomial parse_polynomial(const std::string& text, int nvars) {
    Polynomial p(nvars);
    std::string body = trim(text);
    if (body == "0" || body.empty()) return p;
    std::stringstream terms(body);
    std::string term;
    while (std::getline(terms, term, '+')) {
        term = trim(term);
        if (term.empty()) throw std::invalid_argument("empty polynomial term in: " + text);
        Polynomial::Exponents e(nvars, 0);
        Rational c = 1;
        std::stringstream factors(term);
        std::string f;
        bool first = true;
        while (std::getline(factors, f, '*')) {
            f = trim(f);
            if (first && !f.empty() && f[0] != 'x') {
                c = parse_rational(f);
            } else {
                if (f.size() < 2 || f[0] != 'x') throw std::invalid_argument("bad factor: " + f);
                const auto caret = f.find('^');
                const int var = std::stoi(f.substr(1, caret == std::string::npos ? std::string::npos : caret - 1)) - 1;
                const int ex = caret == std::string::npos ? 1 : std::stoi(f.substr(caret + 1));
                if (var < 0 || var >= nvars) throw std::invalid_argument("variable out of range: " + f);
                e[var] += ex;
            }
            first = false;
        }
        p.add_term(e, c);
    }
    return p;
}

}  // namespace derham
