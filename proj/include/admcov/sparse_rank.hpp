#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "admcov/rational.hpp"

namespace admcov {

// Column-major sparse integer matrix; each column lists (row, value) with
// distinct rows.
struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::vector<std::pair<int, long>>> columns;
};

namespace detail {

using SparseIntVec = std::map<int, Integer>;  // row -> nonzero value

inline void divide_content(SparseIntVec& v) {
    Integer g = 0;
    for (const auto& [r, x] : v) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g == 1) return;
    }
    if (g > 1)
        for (auto& [r, x] : v) x /= g;
}

}  // namespace detail

// Exact rank by fraction-free column elimination. The pivot of a column is
// its largest row index; each reduction step clears the pivot entry and
// strips the integer content.
inline int exact_rank(const SparseMatrix& m) {
    std::map<int, detail::SparseIntVec> reduced;  // pivot row -> column
    for (const auto& col : m.columns) {
        detail::SparseIntVec v;
        for (auto [r, x] : col)
            if (x != 0) v[r] = x;
        while (!v.empty()) {
            int p = v.rbegin()->first;
            auto it = reduced.find(p);
            if (it == reduced.end()) {
                detail::divide_content(v);
                reduced.emplace(p, std::move(v));
                break;
            }
            const auto& u = it->second;
            Integer a = u.at(p), b = v.at(p);
            Integer g;
            mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            a /= g;
            b /= g;
            for (auto& [r, x] : v) x *= a;
            for (const auto& [r, x] : u) {
                auto& y = v[r];
                y -= b * x;
                if (y == 0) v.erase(r);
            }
            detail::divide_content(v);
        }
    }
    return static_cast<int>(reduced.size());
}

// Rank over Z/p, p < 2^31 prime.
inline int modular_rank(const SparseMatrix& m, std::uint32_t p) {
    auto inv = [p](std::uint64_t a) {
        std::uint64_t r = 1, e = p - 2;
        a %= p;
        while (e) {
            if (e & 1) r = r * a % p;
            a = a * a % p;
            e >>= 1;
        }
        return r;
    };
    std::map<int, std::map<int, std::uint64_t>> reduced;
    for (const auto& col : m.columns) {
        std::map<int, std::uint64_t> v;
        for (auto [r, x] : col) {
            long y = x % static_cast<long>(p);
            if (y < 0) y += p;
            if (y) v[r] = static_cast<std::uint64_t>(y);
        }
        while (!v.empty()) {
            int piv = v.rbegin()->first;
            auto it = reduced.find(piv);
            if (it == reduced.end()) {
                std::uint64_t s = inv(v.at(piv));
                for (auto& [r, x] : v) x = x * s % p;
                reduced.emplace(piv, std::move(v));
                break;
            }
            std::uint64_t f = v.at(piv);
            for (const auto& [r, x] : it->second) {
                auto& y = v[r];
                y = (y + p - f * x % p) % p;
                if (y == 0) v.erase(r);
            }
        }
    }
    return static_cast<int>(reduced.size());
}

}  // namespace admcov
