#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "admcov/errors.hpp"
#include "admcov/polynomial.hpp"
#include "admcov/rational.hpp"

namespace admcov {

// Exponent vector of a Laurent monomial in P_1, P_2, ...: sorted (k, e), e != 0.
using PExponents = std::vector<std::pair<int, int>>;

inline PExponents make_exponents(const std::map<int, long>& m) {
    PExponents out;
    for (auto [k, e] : m)
        if (e != 0) out.push_back({k, static_cast<int>(e)});
    return out;
}

// Laurent polynomial in P_k = 1 + p_k with rational coefficients.
class SymLaurent {
public:
    using Terms = std::map<PExponents, Rational>;

    SymLaurent() = default;
    static SymLaurent constant(const Rational& c) {
        SymLaurent s;
        s.add_term({}, c);
        return s;
    }
    static SymLaurent monomial(const PExponents& e, const Rational& c = 1) {
        SymLaurent s;
        s.add_term(e, c);
        return s;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(const PExponents& e, Rational c) {
        c.canonicalize();
        if (c == 0) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, std::move(c));
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    SymLaurent& operator+=(const SymLaurent& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    friend SymLaurent operator+(SymLaurent a, const SymLaurent& b) { return a += b; }
    friend SymLaurent operator-(const SymLaurent& a) {
        SymLaurent s;
        for (const auto& [e, c] : a.terms_) s.terms_.emplace(e, -c);
        return s;
    }
    friend SymLaurent operator-(const SymLaurent& a, const SymLaurent& b) { return a + (-b); }
    friend SymLaurent operator*(const Rational& s, const SymLaurent& a) {
        SymLaurent out;
        for (const auto& [e, c] : a.terms_) out.add_term(e, s * c);
        return out;
    }
    friend SymLaurent operator*(const SymLaurent& a, const SymLaurent& b) {
        SymLaurent out;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) out.add_term(multiply(ea, eb), ca * cb);
        return out;
    }
    friend bool operator==(const SymLaurent& a, const SymLaurent& b) { return a.terms_ == b.terms_; }

    static PExponents multiply(const PExponents& a, const PExponents& b) {
        std::map<int, long> m;
        for (auto [k, e] : a) m[k] += e;
        for (auto [k, e] : b) m[k] += e;
        return make_exponents(m);
    }

    // Presentation order: descending lexicographic on (e_1, e_2, ...).
    std::vector<std::pair<PExponents, Rational>> ordered_terms() const {
        std::vector<std::pair<PExponents, Rational>> v(terms_.begin(), terms_.end());
        int kmax = 1;
        for (const auto& [e, c] : v)
            for (auto [k, x] : e) kmax = std::max(kmax, k);
        auto dense = [kmax](const PExponents& e) {
            std::vector<int> d(kmax + 1, 0);
            for (auto [k, x] : e) d[k] = x;
            return d;
        };
        std::stable_sort(v.begin(), v.end(), [&](const auto& a, const auto& b) {
            auto da = dense(a.first), db = dense(b.first);
            for (int k = 1; k <= kmax; ++k)
                if (da[k] != db[k]) return da[k] > db[k];
            return false;
        });
        return v;
    }

private:
    Terms terms_;
};

// prod_k P_k^{f_k}
inline SymLaurent laurent_term(const std::map<int, long>& exponents) {
    return SymLaurent::monomial(make_exponents(exponents));
}

// ---- output ---------------------------------------------------------------

namespace detail {

inline std::string p_factor(int k, int e, bool latex) {
    std::string s = latex ? (k >= 10 ? "P_{" + std::to_string(k) + "}" : "P_" + std::to_string(k)) : "P" + std::to_string(k);
    if (e != 1) s += latex ? "^{" + std::to_string(e) + "}" : "^" + std::to_string(e);
    return s;
}

}  // namespace detail

// "-P1^3/(12*P2^2) - P1^2/(6*P3) + ..."
inline std::string to_text(const SymLaurent& x) {
    if (x.is_zero()) return "0";
    std::string s;
    for (const auto& [e, c] : x.ordered_terms()) {
        bool neg = c < 0;
        Rational m = neg ? Rational(-c) : c;
        s += s.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
        std::string num, den;
        Integer cn = m.get_num(), cd = m.get_den();
        for (auto [k, p] : e) {
            std::string& side = p > 0 ? num : den;
            if (!side.empty()) side += "*";
            side += detail::p_factor(k, p > 0 ? p : -p, false);
        }
        std::string top = cn == 1 && !num.empty() ? num : (num.empty() ? cn.get_str() : cn.get_str() + "*" + num);
        std::string bottom = cd == 1 ? den : (den.empty() ? cd.get_str() : cd.get_str() + "*" + den);
        s += top;
        if (!bottom.empty()) {
            bool compound = bottom.find('*') != std::string::npos;
            s += compound ? "/(" + bottom + ")" : "/" + bottom;
        }
    }
    return s;
}

inline std::string to_latex(const SymLaurent& x) {
    if (x.is_zero()) return "0";
    std::string s;
    for (const auto& [e, c] : x.ordered_terms()) {
        bool neg = c < 0;
        Rational m = neg ? Rational(-c) : c;
        if (neg)
            s += "-";
        else if (!s.empty())
            s += "+";
        std::string num, den;
        for (auto [k, p] : e) {
            std::string& side = p > 0 ? num : den;
            if (!side.empty()) side += " ";
            side += detail::p_factor(k, p > 0 ? p : -p, true);
        }
        Integer cn = m.get_num(), cd = m.get_den();
        std::string top = cn == 1 && !num.empty() ? num : (num.empty() ? cn.get_str() : cn.get_str() + " " + num);
        std::string bottom = cd == 1 ? den : (den.empty() ? cd.get_str() : cd.get_str() + " " + den);
        if (bottom.empty())
            s += top;
        else
            s += "\\frac{" + top + "}{" + bottom + "}";
    }
    return s;
}

inline nlohmann::json to_json(const SymLaurent& x) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [e, c] : x.ordered_terms()) {
        nlohmann::json ex = nlohmann::json::object();
        for (auto [k, p] : e) ex[std::to_string(k)] = p;
        arr.push_back({{"coeff", to_string(c)}, {"exps", ex}});
    }
    return arr;
}

inline SymLaurent sym_laurent_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw InputError("SymLaurent JSON must be an array");
    SymLaurent s;
    for (const auto& t : j) {
        std::map<int, long> m;
        for (auto it = t.at("exps").begin(); it != t.at("exps").end(); ++it) m[std::stoi(it.key())] = it.value().get<long>();
        s.add_term(make_exponents(m), parse_rational(t.at("coeff").get<std::string>()));
    }
    return s;
}

// ---- LaTeX input ------------------------------------------------------------
// Accepts sums of \frac{c P_a^b ...}{d P_k^e ...} and bare monomials, with
// optional braces around P_k, and an optional leading \frac{1}{m} \left( ... \right).

namespace detail {

class LatexReader {
public:
    explicit LatexReader(const std::string& s) {
        for (char c : s)
            if (!std::isspace(static_cast<unsigned char>(c))) src_.push_back(c);
    }

    SymLaurent parse() {
        SymLaurent out;
        Rational scale = 1;
        std::size_t save = pos_;
        // optional global factor
        if (eat("\\frac{")) {
            auto [c1, e1] = monomial('}');
            expect("}{");
            auto [c2, e2] = monomial('}');
            expect("}");
            if (e1.empty() && e2.empty() && eat("\\left(")) {
                scale = c1 / c2;
                out = sum("\\right)");
                expect("\\right)");
                if (pos_ != src_.size()) fail("trailing input");
                return scale * out;
            }
            pos_ = save;
        }
        out = sum("");
        if (pos_ != src_.size()) fail("trailing input");
        return out;
    }

private:
    SymLaurent sum(const std::string& stop) {
        SymLaurent out;
        while (pos_ < src_.size() && (stop.empty() || src_.compare(pos_, stop.size(), stop) != 0)) {
            int sign = 1;
            if (eat("+")) {
            } else if (eat("-")) {
                sign = -1;
            }
            Rational c;
            std::map<int, long> e;
            if (eat("\\frac{")) {
                auto [c1, e1] = monomial('}');
                expect("}{");
                auto [c2, e2] = monomial('}');
                expect("}");
                c = c1 / c2;
                for (auto [k, x] : e1) e[k] += x;
                for (auto [k, x] : e2) e[k] -= x;
            } else {
                auto [c1, e1] = monomial('+');
                c = c1;
                e = e1;
            }
            out.add_term(make_exponents(e), sign * c);
        }
        return out;
    }

    // coefficient and P-exponents up to (not including) a terminator
    std::pair<Rational, std::map<int, long>> monomial(char term) {
        Rational c = 1;
        std::map<int, long> e;
        bool any = false;
        if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            c = Rational(number());
            any = true;
        }
        while (pos_ < src_.size() && src_[pos_] != term && src_[pos_] != '-' && src_[pos_] != '+' &&
               src_.compare(pos_, 7, "\\right)") != 0) {
            bool braced = eat("{");
            expect("P_");
            int k = eat("{") ? number_then('}') : number();
            if (braced) expect("}");
            long p = 1;
            if (eat("^")) p = eat("{") ? number_then('}') : single_digit();
            e[k] += p;
            any = true;
        }
        if (!any) fail("empty monomial");
        return {c, e};
    }

    int number() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a number");
        return std::stoi(src_.substr(start, pos_ - start));
    }
    int number_then(char close) {
        int n = number();
        if (!eat(std::string(1, close))) fail("expected closing brace");
        return n;
    }
    int single_digit() {
        if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) fail("expected exponent");
        return src_[pos_++] - '0';
    }
    bool eat(const std::string& tok) {
        if (src_.compare(pos_, tok.size(), tok) == 0) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }
    void expect(const std::string& tok) {
        if (!eat(tok)) fail("expected '" + tok + "'");
    }
    [[noreturn]] void fail(const std::string& what) {
        throw InputError("latex parse error at " + std::to_string(pos_) + ": " + what);
    }

    std::string src_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline SymLaurent parse_latex(const std::string& s) { return detail::LatexReader(s).parse(); }

// ---- power-sum expansions ------------------------------------------------------

// Polynomial in p_1..p_N truncated at total degree N. Keys are multiplicity
// vectors m with m[k-1] = multiplicity of part k.
class TruncatedSymSeries {
public:
    using Key = std::vector<int>;

    explicit TruncatedSymSeries(int N) : N_(N) {}

    int truncation() const { return N_; }
    const std::map<Key, Rational>& terms() const { return terms_; }

    static int degree(const Key& m) {
        int d = 0;
        for (std::size_t i = 0; i < m.size(); ++i) d += static_cast<int>(i + 1) * m[i];
        return d;
    }

    void add(const Key& m, Rational c) {
        c.canonicalize();
        if (c == 0 || degree(m) > N_) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, std::move(c));
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    friend TruncatedSymSeries operator*(const TruncatedSymSeries& a, const TruncatedSymSeries& b) {
        TruncatedSymSeries out(std::min(a.N_, b.N_));
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                Key k(out.N_, 0);
                for (int i = 0; i < out.N_; ++i) k[i] = ka[i] + kb[i];
                out.add(k, ca * cb);
            }
        return out;
    }
    TruncatedSymSeries& operator+=(const TruncatedSymSeries& o) {
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    friend bool operator==(const TruncatedSymSeries& a, const TruncatedSymSeries& b) {
        return a.N_ == b.N_ && a.terms_ == b.terms_;
    }

    // homogeneous degree-n part as a list of (partition, coefficient)
    std::vector<std::pair<std::vector<int>, Rational>> degree_part(int n) const {
        std::vector<std::pair<std::vector<int>, Rational>> out;
        for (const auto& [k, c] : terms_) {
            if (degree(k) != n) continue;
            std::vector<int> parts;
            for (int i = N_ - 1; i >= 0; --i)
                for (int r = 0; r < k[i]; ++r) parts.push_back(i + 1);
            out.push_back({parts, c});
        }
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        return out;
    }

    Rational coefficient(const std::vector<int>& partition) const {
        Key k(N_, 0);
        for (int p : partition) {
            if (p < 1 || p > N_) return 0;
            ++k[p - 1];
        }
        auto it = terms_.find(k);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    static TruncatedSymSeries one(int N) {
        TruncatedSymSeries s(N);
        s.add(Key(N, 0), 1);
        return s;
    }

private:
    int N_;
    std::map<Key, Rational> terms_;
};

// generalized binomial coefficient C(e, j)
inline Rational binomial(long e, int j) {
    Rational b = 1;
    for (int i = 0; i < j; ++i) b = b * Rational(e - i) / Rational(i + 1);
    return b;
}

inline TruncatedSymSeries expand_to_degree(const SymLaurent& x, int N) {
    if (N < 0) throw InputError("truncation degree must be nonnegative");
    TruncatedSymSeries total(N);
    std::map<std::pair<int, int>, TruncatedSymSeries> factor_cache;
    auto factor = [&](int k, int e) -> const TruncatedSymSeries& {
        auto it = factor_cache.find({k, e});
        if (it != factor_cache.end()) return it->second;
        TruncatedSymSeries f(N);
        for (int j = 0; k * j <= N; ++j) {
            TruncatedSymSeries::Key key(N, 0);
            if (j > 0) key[k - 1] = j;
            f.add(key, binomial(e, j));
        }
        return factor_cache.emplace(std::make_pair(k, e), std::move(f)).first->second;
    };
    for (const auto& [e, c] : x.terms()) {
        TruncatedSymSeries term = TruncatedSymSeries::one(N);
        for (auto [k, p] : e) {
            if (k > N) continue;  // (1 + p_k)^e == 1 below degree k
            term = term * factor(k, p);
        }
        TruncatedSymSeries scaled(N);
        for (const auto& [key, v] : term.terms()) scaled.add(key, c * v);
        total += scaled;
    }
    return total;
}

// P_1 -> 1 + t, P_k -> 1 for k >= 2.
inline RationalFunction1V specialize_egf(const SymLaurent& x) {
    int shift = 0;
    for (const auto& [e, c] : x.terms())
        for (auto [k, p] : e)
            if (k == 1 && p < 0) shift = std::max(shift, -p);
    PolynomialQ num;
    for (const auto& [e, c] : x.terms()) {
        int e1 = 0;
        for (auto [k, p] : e)
            if (k == 1) e1 = p;
        num = num + PolynomialQ::constant(c) * PolynomialQ::one_plus_t_pow(e1 + shift);
    }
    return RationalFunction1V(num, PolynomialQ::one_plus_t_pow(shift));
}

// p_1 -> t, p_k -> 0 on a truncated series.
inline PolynomialQ specialize_egf(const TruncatedSymSeries& s) {
    std::vector<Rational> c(s.truncation() + 1, Rational(0));
    for (const auto& [k, v] : s.terms()) {
        bool only_p1 = true;
        for (std::size_t i = 1; i < k.size(); ++i)
            if (k[i]) only_p1 = false;
        if (only_p1) c[k.empty() ? 0 : k[0]] += v;
    }
    return PolynomialQ(c);
}

inline std::string partition_string(const std::vector<int>& parts) {
    if (parts.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < parts.size();) {
        std::size_t j = i;
        while (j < parts.size() && parts[j] == parts[i]) ++j;
        if (!s.empty()) s += "*";
        s += "p" + std::to_string(parts[i]);
        if (j - i > 1) s += "^" + std::to_string(j - i);
        i = j;
    }
    return s;
}

}  // namespace admcov
