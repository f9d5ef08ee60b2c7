#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "posmat/errors.hpp"
#include "posmat/rational.hpp"

namespace posmat {

/// Ordered list of variable names, shared between all values of one instance.
class VarContext {
  public:
    explicit VarContext(std::vector<std::string> names) : names_(std::move(names)) {}

    static std::shared_ptr<const VarContext> make(std::vector<std::string> names) {
        return std::make_shared<const VarContext>(std::move(names));
    }

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }

    std::optional<std::size_t> index_of(const std::string& v) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == v) return i;
        return std::nullopt;
    }

    bool operator==(const VarContext& o) const { return names_ == o.names_; }

  private:
    std::vector<std::string> names_;
};

using VarsPtr = std::shared_ptr<const VarContext>;

inline bool same_context(const VarsPtr& a, const VarsPtr& b) {
    return a == b || (a && b && *a == *b);
}

inline void require_same_context(const VarsPtr& a, const VarsPtr& b) {
    if (!same_context(a, b)) throw ContextMismatch("operands use different variable contexts");
}

using Exponents = std::vector<int>;

inline int total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

/// Graded lexicographic term order: degree first, then lex with the first
/// variable most significant.
struct GradedLexLess {
    bool operator()(const Exponents& a, const Exponents& b) const {
        int da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

struct RationalPoint {
    VarsPtr vars;
    std::vector<Rat> coords;

    RationalPoint(VarsPtr v, std::vector<Rat> c) : vars(std::move(v)), coords(std::move(c)) {
        if (vars->size() != coords.size())
            throw DimensionMismatch("point length does not match variable context");
    }
};

/// Sparse multivariate polynomial with exact rational coefficients.
/// Canonical form: no zero coefficients are stored; the zero polynomial is
/// the empty term map.
class MPoly {
  public:
    using TermMap = std::map<Exponents, Rat, GradedLexLess>;

    MPoly() : vars_(VarContext::make({})) {}
    explicit MPoly(VarsPtr vars) : vars_(std::move(vars)) {}

    static MPoly constant(VarsPtr vars, const Rat& c) {
        MPoly p(std::move(vars));
        if (sgn(c) != 0) p.terms_[Exponents(p.vars_->size(), 0)] = c;
        return p;
    }

    static MPoly variable(VarsPtr vars, std::size_t idx) {
        MPoly p(vars);
        if (idx >= vars->size()) throw Error("variable index out of range");
        Exponents e(vars->size(), 0);
        e[idx] = 1;
        p.terms_[e] = 1;
        return p;
    }

    static MPoly monomial(VarsPtr vars, Exponents e, const Rat& c) {
        MPoly p(vars);
        if (e.size() != vars->size()) throw DimensionMismatch("exponent vector length");
        if (sgn(c) != 0) p.terms_[std::move(e)] = c;
        return p;
    }

    const VarsPtr& vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    /// Total degree; -1 for the zero polynomial.
    int degree() const { return terms_.empty() ? -1 : total_degree(terms_.rbegin()->first); }

    int degree_in(std::size_t var) const {
        int d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
        return d;
    }

    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0); }

    Rat constant_term() const {
        Exponents z(vars_->size(), 0);
        auto it = terms_.find(z);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    Rat coeff(const Exponents& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    void add_term(const Exponents& e, const Rat& c) {
        if (e.size() != vars_->size()) throw DimensionMismatch("exponent vector length");
        if (sgn(c) == 0) return;
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (sgn(it->second) == 0) terms_.erase(it);
        }
    }

    MPoly& operator+=(const MPoly& o) {
        require_same_context(vars_, o.vars_);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }

    MPoly& operator-=(const MPoly& o) {
        require_same_context(vars_, o.vars_);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }

    friend MPoly operator+(MPoly a, const MPoly& b) { a += b; return a; }
    friend MPoly operator-(MPoly a, const MPoly& b) { a -= b; return a; }

    friend MPoly operator-(const MPoly& a) {
        MPoly r(a.vars_);
        for (const auto& [e, c] : a.terms_) r.terms_[e] = -c;
        return r;
    }

    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        require_same_context(a.vars_, b.vars_);
        MPoly r(a.vars_);
        const std::size_t nv = a.vars_->size();
        Exponents e(nv);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                for (std::size_t i = 0; i < nv; ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }

    MPoly& operator*=(const MPoly& o) { *this = *this * o; return *this; }

    friend MPoly operator*(const Rat& c, const MPoly& a) {
        MPoly r(a.vars_);
        if (sgn(c) == 0) return r;
        for (const auto& [e, k] : a.terms_) r.terms_[e] = c * k;
        return r;
    }
    friend MPoly operator*(const MPoly& a, const Rat& c) { return c * a; }

    MPoly pow(unsigned n) const {
        MPoly r = constant(vars_, 1);
        MPoly base = *this;
        while (n) {
            if (n & 1) r = r * base;
            base = (n >>= 1) ? base * base : base;
        }
        return r;
    }

    bool operator==(const MPoly& o) const {
        return same_context(vars_, o.vars_) && terms_ == o.terms_;
    }
    bool operator!=(const MPoly& o) const { return !(*this == o); }

    Rat eval(const RationalPoint& p) const {
        require_same_context(vars_, p.vars);
        Rat acc = 0;
        for (const auto& [e, c] : terms_) {
            Rat t = c;
            for (std::size_t i = 0; i < e.size(); ++i) {
                for (int k = 0; k < e[i]; ++k) t *= p.coords[i];
            }
            acc += t;
        }
        return acc;
    }

    MPoly derivative(std::size_t var) const {
        MPoly r(vars_);
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            Exponents d = e;
            d[var] -= 1;
            r.add_term(d, c * Rat(e[var]));
        }
        return r;
    }

    /// Substitutes images[i] (all over a common target context) for variable i.
    MPoly substitute(const std::vector<MPoly>& images) const {
        if (images.size() != vars_->size()) throw DimensionMismatch("substitute: image count");
        VarsPtr target = images.empty() ? VarContext::make({}) : images.front().vars();
        for (const auto& im : images) require_same_context(target, im.vars());
        MPoly r(target);
        for (const auto& [e, c] : terms_) {
            MPoly t = MPoly::constant(target, c);
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] > 0) t = t * images[i].pow(static_cast<unsigned>(e[i]));
            r += t;
        }
        return r;
    }

    /// Drops every term of total degree > cap. Used for order-limited Taylor work.
    MPoly truncate_above(int cap) const {
        MPoly r(vars_);
        for (const auto& [e, c] : terms_)
            if (total_degree(e) <= cap) r.terms_[e] = c;
        return r;
    }

    /// Gcd of the integer numerators divided by lcm of denominators; 0 for the
    /// zero polynomial. A positive rational g with p/g having coprime integer
    /// coefficients.
    Rat content() const {
        if (terms_.empty()) return Rat(0);
        Int num_gcd = 0, den_lcm = 1;
        for (const auto& [e, c] : terms_) {
            mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
            mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
        }
        Rat g(num_gcd, den_lcm);
        g.canonicalize();
        return g;
    }

    std::string to_string() const;
    static MPoly parse(const std::string& text, const VarsPtr& vars);

  private:
    VarsPtr vars_;
    TermMap terms_;
};

inline std::string MPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        Rat a = c;
        if (out.empty()) {
            if (sgn(a) < 0) { out += "-"; a = -a; }
        } else {
            out += sgn(a) < 0 ? " - " : " + ";
            if (sgn(a) < 0) a = -a;
        }
        bool has_vars = total_degree(e) > 0;
        bool coeff_one = (a == 1);
        if (!coeff_one || !has_vars) out += rat_to_string(a);
        bool first_factor = coeff_one && has_vars;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!first_factor) out += "*";
            out += vars_->name(i);
            if (e[i] > 1) out += "^" + std::to_string(e[i]);
            first_factor = false;
        }
    }
    return out;
}

namespace detail {

class PolyParser {
  public:
    PolyParser(const std::string& s, VarsPtr vars) : s_(s), vars_(std::move(vars)) {}

    MPoly run() {
        MPoly r = parse_sum();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("trailing input at '" + s_.substr(pos_) + "'");
        return r;
    }

  private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }

    MPoly parse_sum() {
        skip_ws();
        bool neg = false;
        if (eat('-')) neg = true;
        else eat('+');
        MPoly acc = parse_term();
        if (neg) acc = -acc;
        while (true) {
            skip_ws();
            if (eat('+')) acc += parse_term();
            else if (eat('-')) acc -= parse_term();
            else break;
        }
        return acc;
    }

    MPoly parse_term() {
        MPoly acc = parse_factor();
        while (eat('*')) acc = acc * parse_factor();
        return acc;
    }

    MPoly parse_factor() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of polynomial");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            MPoly inner = parse_sum();
            if (!eat(')')) throw ParseError("missing ')'");
            return maybe_pow(inner);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return maybe_pow(parse_number());
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return maybe_pow(parse_variable());
        throw ParseError(std::string("unexpected character '") + c + "'");
    }

    MPoly maybe_pow(MPoly base) {
        if (eat('^')) {
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) throw ParseError("expected exponent");
            unsigned exp = static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start)));
            return base.pow(exp);
        }
        return base;
    }

    MPoly parse_number() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::string num = s_.substr(start, pos_ - start);
        std::size_t save = pos_;
        if (eat('/')) {
            skip_ws();
            std::size_t dstart = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (dstart == pos_) { pos_ = save; }
            else num += "/" + s_.substr(dstart, pos_ - dstart);
        }
        return MPoly::constant(vars_, parse_rat(num));
    }

    MPoly parse_variable() {
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        std::string name = s_.substr(start, pos_ - start);
        auto idx = vars_->index_of(name);
        if (!idx) throw ParseError("unknown variable '" + name + "'");
        return MPoly::variable(vars_, *idx);
    }

    const std::string& s_;
    VarsPtr vars_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline MPoly MPoly::parse(const std::string& text, const VarsPtr& vars) {
    return detail::PolyParser(text, vars).run();
}

}  // namespace posmat
