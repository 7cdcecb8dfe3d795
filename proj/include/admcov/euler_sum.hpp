#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "admcov/cover.hpp"
#include "admcov/symfunc.hpp"
#include "admcov/tree.hpp"
#include "admcov/tree_enum.hpp"

namespace admcov {

struct TauRecord {
    int sign = 1;  // sgn of psi on E(C)
    OrbitExponentMap exponents;
    long multiplicity = 1;
};

struct ContributionReport {
    std::string code;
    int num_edges = 0;
    long aut_order = 0;
    std::vector<TauRecord> taus;  // aggregated by (sign, exponents)
    SymLaurent value;
};

enum class SumMode { hyperelliptic, monodromy };

namespace detail {

inline ContributionReport finish_report(const Tree& t, long aut_order, const std::map<std::pair<int, OrbitExponentMap>, long>& acc) {
    ContributionReport r;
    r.code = canonical_code(t);
    r.num_edges = t.num_edges();
    r.aut_order = aut_order;
    Rational pre(r.num_edges % 2 ? -1 : 1, aut_order);
    pre.canonicalize();
    for (const auto& [key, mult] : acc) {
        r.taus.push_back({key.first, key.second, mult});
        r.value.add_term(make_exponents(key.second), pre * key.first * mult);
    }
    return r;
}

}  // namespace detail

// Hyperelliptic mode: tau runs over all cover automorphisms (psi in Aut(C) with
// its lifts). Monodromy mode: psi = id, tau over translations fixing the
// lifted legs.
inline ContributionReport tree_contribution(const Tree& t, SumMode mode, LiftSemantics sem = LiftSemantics::local) {
    auto c = build_cover(t);
    std::map<std::pair<int, OrbitExponentMap>, long> acc;
    long count = 0;
    if (mode == SumMode::hyperelliptic) {
        auto psis = tree_automorphisms(t);
        auto trans = fiber_translations(c, sem);
        for (const auto& psi : psis) {
            int sign = permutation_sign(psi.emap);
            auto chm = detail::half_edge_map(c, psi);
            for (const auto& f : trans) {
                auto tau = compose_automorphism(c, psi, chm, f);
                ++acc[{sign, orbit_exponents(c, tau)}];
                ++count;
            }
        }
    } else {
        TreeAutomorphism id;
        for (int v = 0; v < t.num_vertices(); ++v) id.vmap.push_back(v);
        for (int e = 0; e < t.num_edges(); ++e) id.emap.push_back(e);
        auto chm = detail::half_edge_map(c, id);
        for (const auto& f : fiber_translations(c, sem)) {
            bool fixes = true;
            for (int v = 0; v < t.num_vertices(); ++v)
                if (!t.vertices[v].legs.empty() && f.vertex[v] != 0) fixes = false;
            if (!fixes) continue;
            auto tau = compose_automorphism(c, id, chm, f);
            ++acc[{1, orbit_exponents(c, tau)}];
            ++count;
        }
    }
    return detail::finish_report(t, count, acc);
}

// Map over trees with `jobs` workers; results reduced in list order.
template <class F>
SymLaurent parallel_sum(const std::vector<Tree>& trees, int jobs, F&& per_tree) {
    std::vector<SymLaurent> parts(trees.size());
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(trees.size())));
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&] {
        try {
            for (std::size_t i; (i = next++) < trees.size();) parts[i] = per_tree(trees[i]);
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mu);
            if (!err) err = std::current_exception();
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (err) std::rethrow_exception(err);
    SymLaurent total;
    for (const auto& p : parts) total += p;
    return total;
}

inline SymLaurent compute_hg_from(const std::vector<Tree>& trees, int jobs = 1, LiftSemantics sem = LiftSemantics::local) {
    return parallel_sum(trees, jobs, [sem](const Tree& t) { return tree_contribution(t, SumMode::hyperelliptic, sem).value; });
}

inline SymLaurent compute_hg(int g, int jobs = 1, LiftSemantics sem = LiftSemantics::local) {
    return compute_hg_from(enumerate_trees(TreeFamilySpec::hyperelliptic(g)), jobs, sem);
}

// Labelled stable trees times inequivalent lifts of the legs.
inline SymLaurent compute_hG_from(const std::vector<Tree>& trees, int jobs = 1, LiftSemantics sem = LiftSemantics::local) {
    return parallel_sum(trees, jobs, [sem](const Tree& t) {
        SymLaurent s;
        auto c = build_cover(t);
        for (const auto& lifted : lift_markings(c, sem)) s += tree_contribution(lifted.target, SumMode::monodromy, sem).value;
        return s;
    });
}

inline SymLaurent compute_hG(const AbelianGroup& G, const std::vector<std::pair<int, GroupElement>>& legs, int jobs = 1,
                             LiftSemantics sem = LiftSemantics::local) {
    auto spec = TreeFamilySpec::monodromy(G, legs);
    return compute_hG_from(enumerate_trees(spec), jobs, sem);
}

// N legs of Z/2 monodromy 1, labelled 1..N.
inline std::vector<std::pair<int, GroupElement>> constant_legs(const AbelianGroup& G, int N, const GroupElement& mu) {
    std::vector<std::pair<int, GroupElement>> legs;
    for (int i = 1; i <= N; ++i) legs.push_back({i, mu});
    return legs;
}

}  // namespace admcov
