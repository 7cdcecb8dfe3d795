#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "admcov/errors.hpp"

namespace admcov {

// Residue tuple; component j lives in Z/m_j.
struct GroupElement {
    std::vector<int> residues;

    friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
    friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

class AbelianGroup {
public:
    AbelianGroup() : factors_{1} {}

    // Any list of cyclic orders; stored in invariant-factor form m_1 | m_2 | ... .
    explicit AbelianGroup(const std::vector<int>& cyclic_orders) {
        factors_ = invariant_factors(cyclic_orders);
    }

    static AbelianGroup cyclic(int m) { return AbelianGroup({m}); }

    const std::vector<int>& factors() const { return factors_; }
    int rank() const { return static_cast<int>(factors_.size()); }
    int order() const {
        int n = 1;
        for (int m : factors_) n *= m;
        return n;
    }

    GroupElement zero() const { return GroupElement{std::vector<int>(factors_.size(), 0)}; }

    GroupElement element(std::vector<int> residues) const {
        if (residues.size() != factors_.size())
            throw InputError("group element has wrong length for " + to_string());
        for (std::size_t j = 0; j < residues.size(); ++j)
            residues[j] = ((residues[j] % factors_[j]) + factors_[j]) % factors_[j];
        return GroupElement{std::move(residues)};
    }

    bool contains(const GroupElement& x) const {
        if (x.residues.size() != factors_.size()) return false;
        for (std::size_t j = 0; j < factors_.size(); ++j)
            if (x.residues[j] < 0 || x.residues[j] >= factors_[j]) return false;
        return true;
    }

    GroupElement add(const GroupElement& a, const GroupElement& b) const {
        GroupElement c = a;
        for (std::size_t j = 0; j < factors_.size(); ++j)
            c.residues[j] = (a.residues[j] + b.residues[j]) % factors_[j];
        return c;
    }

    GroupElement neg(const GroupElement& a) const {
        GroupElement c = a;
        for (std::size_t j = 0; j < factors_.size(); ++j)
            c.residues[j] = (factors_[j] - a.residues[j]) % factors_[j];
        return c;
    }

    GroupElement sub(const GroupElement& a, const GroupElement& b) const { return add(a, neg(b)); }

    GroupElement scale(const GroupElement& a, long k) const {
        GroupElement c = a;
        for (std::size_t j = 0; j < factors_.size(); ++j) {
            long r = (static_cast<long>(a.residues[j]) * (k % factors_[j])) % factors_[j];
            c.residues[j] = static_cast<int>((r + factors_[j]) % factors_[j]);
        }
        return c;
    }

    // Mixed-radix index; the first component is most significant, so index
    // order agrees with lexicographic order of residue tuples.
    int index_of(const GroupElement& x) const {
        int idx = 0;
        for (std::size_t j = 0; j < factors_.size(); ++j) idx = idx * factors_[j] + x.residues[j];
        return idx;
    }

    GroupElement from_index(int idx) const {
        GroupElement x = zero();
        for (int j = rank() - 1; j >= 0; --j) {
            x.residues[j] = idx % factors_[j];
            idx /= factors_[j];
        }
        return x;
    }

    std::vector<GroupElement> elements() const {
        std::vector<GroupElement> out;
        for (int i = 0; i < order(); ++i) out.push_back(from_index(i));
        return out;
    }

    int element_order(const GroupElement& x) const {
        long l = 1;
        for (std::size_t j = 0; j < factors_.size(); ++j) {
            int m = factors_[j];
            int o = m / std::gcd(m, x.residues[j]);
            l = std::lcm(l, static_cast<long>(o));
        }
        return static_cast<int>(l);
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t j = 0; j < factors_.size(); ++j) {
            if (j) s += "x";
            s += "Z" + std::to_string(factors_[j]);
        }
        return s;
    }

    std::string element_string(const GroupElement& x) const {
        std::string s;
        for (std::size_t j = 0; j < x.residues.size(); ++j) {
            if (j) s += ",";
            s += std::to_string(x.residues[j]);
        }
        return s;
    }

    friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) { return a.factors_ == b.factors_; }

    static std::vector<int> invariant_factors(const std::vector<int>& orders) {
        if (orders.empty()) throw InputError("empty group presentation");
        // prime -> exponents over all cyclic factors
        std::map<int, std::vector<int>> by_prime;
        for (int m : orders) {
            if (m < 1) throw InputError("cyclic order must be >= 1");
            for (auto [p, e] : factorize(m)) by_prime[p].push_back(e);
        }
        std::size_t r = 1;
        for (auto& [p, es] : by_prime) r = std::max(r, es.size());
        std::vector<int> out(r, 1);
        for (auto& [p, es] : by_prime) {
            std::sort(es.begin(), es.end());
            // largest exponents go to the last (largest) factors
            std::size_t off = r - es.size();
            for (std::size_t i = 0; i < es.size(); ++i)
                for (int k = 0; k < es[i]; ++k) out[off + i] *= p;
        }
        // drop leading trivial factors unless the whole group is trivial
        std::vector<int> trimmed;
        for (int m : out)
            if (m > 1) trimmed.push_back(m);
        if (trimmed.empty()) trimmed.push_back(1);
        return trimmed;
    }

    static std::vector<std::pair<int, int>> factorize(int m) {
        std::vector<std::pair<int, int>> out;
        for (int p = 2; p * p <= m; ++p) {
            int e = 0;
            while (m % p == 0) m /= p, ++e;
            if (e) out.emplace_back(p, e);
        }
        if (m > 1) out.emplace_back(m, 1);
        return out;
    }

private:
    std::vector<int> factors_;
};

// A group written as a product of cyclic factors, together with the
// isomorphism onto its invariant-factor form.
class PresentedGroup {
public:
    explicit PresentedGroup(std::vector<int> cyclic_orders)
        : orders_(std::move(cyclic_orders)), group_(orders_) {
        // Decompose each Z/m_j into prime-power pieces, route the pieces of
        // each prime to the invariant factors exactly as invariant_factors does.
        std::map<int, std::vector<std::pair<int, int>>> by_prime;  // p -> (exponent, source j)
        for (std::size_t j = 0; j < orders_.size(); ++j)
            for (auto [p, e] : AbelianGroup::factorize(orders_[j])) by_prime[p].push_back({e, static_cast<int>(j)});
        std::size_t r = 1;
        for (auto& [p, v] : by_prime) r = std::max(r, v.size());
        std::vector<int> full(r, 1);
        for (auto& [p, v] : by_prime) {
            std::stable_sort(v.begin(), v.end());
            std::size_t off = r - v.size();
            for (std::size_t i = 0; i < v.size(); ++i) {
                int q = 1;
                for (int k = 0; k < v[i].first; ++k) q *= p;
                full[off + i] *= q;
                pieces_.push_back({v[i].second, q, static_cast<int>(off + i)});
            }
        }
        // index shift caused by trimming trivial leading factors
        shift_ = 0;
        while (shift_ < static_cast<int>(full.size()) - 1 && full[shift_] == 1) ++shift_;
    }

    static PresentedGroup parse(std::string_view spec) {
        std::vector<int> orders;
        std::size_t i = 0;
        auto fail = [&] { throw InputError("bad group spec '" + std::string(spec) + "', expected e.g. Z2xZ3"); };
        if (spec.empty()) fail();
        while (i < spec.size()) {
            if (spec[i] != 'Z') fail();
            ++i;
            std::size_t start = i;
            while (i < spec.size() && std::isdigit(static_cast<unsigned char>(spec[i]))) ++i;
            if (start == i || i - start > 6) fail();
            int m = std::stoi(std::string(spec.substr(start, i - start)));
            if (m < 1) fail();
            orders.push_back(m);
            if (i < spec.size()) {
                if (spec[i] != 'x') fail();
                ++i;
                if (i == spec.size()) fail();
            }
        }
        return PresentedGroup(orders);
    }

    const AbelianGroup& group() const { return group_; }
    const std::vector<int>& presentation() const { return orders_; }

    // Map a residue tuple in the given presentation to the normalized group.
    GroupElement map(const std::vector<int>& residues) const {
        if (residues.size() != orders_.size()) throw InputError("element has wrong number of components");
        const auto& f = group_.factors();
        std::vector<long> acc(f.size(), 0), mod(f.size(), 1);
        for (const auto& pc : pieces_) {
            int target = pc.target - shift_;
            if (target < 0) continue;
            long x = ((residues[pc.source] % pc.modulus) + pc.modulus) % pc.modulus;
            // CRT merge of acc[target] (mod mod[target]) with x (mod modulus)
            long m1 = mod[target], m2 = pc.modulus;
            long a = acc[target];
            long t = 0;
            while ((a + m1 * t) % m2 != x) ++t;
            acc[target] = a + m1 * t;
            mod[target] = m1 * m2;
        }
        std::vector<int> out(f.size());
        for (std::size_t j = 0; j < f.size(); ++j) out[j] = static_cast<int>(acc[j] % f[j]);
        return group_.element(out);
    }

private:
    struct Piece {
        int source;
        int modulus;
        int target;
    };
    std::vector<int> orders_;
    AbelianGroup group_;
    std::vector<Piece> pieces_;
    int shift_ = 0;
};

class Subgroup {
public:
    Subgroup() = default;
    Subgroup(const AbelianGroup& g, std::vector<bool> member) : member_(std::move(member)) {
        for (int i = 0; i < g.order(); ++i)
            if (member_[i]) elements_.push_back(i);
    }

    int order() const { return static_cast<int>(elements_.size()); }
    bool contains(const AbelianGroup& g, const GroupElement& x) const { return member_[g.index_of(x)]; }
    bool contains_index(int i) const { return member_[i]; }
    const std::vector<int>& element_indices() const { return elements_; }

    friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.member_ == b.member_; }

private:
    std::vector<bool> member_;
    std::vector<int> elements_;
};

inline Subgroup subgroup_generated(const AbelianGroup& g, const std::vector<GroupElement>& gens) {
    for (const auto& x : gens)
        if (!g.contains(x)) throw InputError("generator is not an element of " + g.to_string());
    std::vector<bool> member(g.order(), false);
    std::vector<int> frontier{0};
    member[0] = true;
    while (!frontier.empty()) {
        GroupElement x = g.from_index(frontier.back());
        frontier.pop_back();
        for (const auto& s : gens) {
            int y = g.index_of(g.add(x, s));
            if (!member[y]) {
                member[y] = true;
                frontier.push_back(y);
            }
        }
    }
    return Subgroup(g, std::move(member));
}

// Subgroup from an explicit element list; the list must already be closed.
inline Subgroup subgroup_from_elements(const AbelianGroup& g, const std::vector<GroupElement>& elems) {
    std::vector<bool> member(g.order(), false);
    for (const auto& x : elems) {
        if (!g.contains(x)) throw InputError("not an element of " + g.to_string());
        member[g.index_of(x)] = true;
    }
    if (!member[0]) throw InputError("subgroup must contain the identity");
    for (const auto& a : elems)
        for (const auto& b : elems)
            if (!member[g.index_of(g.sub(a, b))]) throw InputError("element set is not closed");
    return Subgroup(g, std::move(member));
}

// G/H with cosets ordered by their lexicographically least members.
class CosetSpace {
public:
    CosetSpace() = default;
    CosetSpace(const AbelianGroup& g, const Subgroup& h) {
        int n = g.order();
        coset_of_.assign(n, -1);
        for (int i = 0; i < n; ++i) {
            if (coset_of_[i] >= 0) continue;
            int c = static_cast<int>(reps_.size());
            reps_.push_back(i);
            GroupElement x = g.from_index(i);
            for (int hi : h.element_indices()) coset_of_[g.index_of(g.add(x, g.from_index(hi)))] = c;
        }
        // act_[gi][c] = coset of (g + rep_c)
        act_.assign(n, std::vector<int>(reps_.size()));
        for (int gi = 0; gi < n; ++gi) {
            GroupElement x = g.from_index(gi);
            for (std::size_t c = 0; c < reps_.size(); ++c)
                act_[gi][c] = coset_of_[g.index_of(g.add(x, g.from_index(reps_[c])))];
        }
        require(static_cast<int>(reps_.size()) * h.order() == n, "Lagrange fails for coset space");
    }

    int size() const { return static_cast<int>(reps_.size()); }
    int representative_index(int c) const { return reps_[c]; }
    int coset_of_index(int element_index) const { return coset_of_[element_index]; }
    int act(int element_index, int c) const { return act_[element_index][c]; }

private:
    std::vector<int> reps_;
    std::vector<int> coset_of_;
    std::vector<std::vector<int>> act_;
};

inline CosetSpace coset_space(const AbelianGroup& g, const Subgroup& h) { return CosetSpace(g, h); }

}  // namespace admcov
