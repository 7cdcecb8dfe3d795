#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "admcov/abelian_group.hpp"
#include "admcov/digest.hpp"
#include "admcov/errors.hpp"
#include "admcov/tree.hpp"

namespace admcov {

inline constexpr int kCodeVersion = 1;

struct TreeFamilySpec {
    enum class Mode { hyperelliptic, monodromy } mode = Mode::hyperelliptic;
    int genus = 2;
    int weight_cap = 2;
    AbelianGroup group;
    std::vector<std::pair<int, GroupElement>> legs;  // (label, monodromy)

    static TreeFamilySpec hyperelliptic(int g, int cap = 2) {
        TreeFamilySpec s;
        s.genus = g;
        s.weight_cap = cap;
        s.group = AbelianGroup::cyclic(2);
        return s;
    }
    static TreeFamilySpec monodromy(const AbelianGroup& G, std::vector<std::pair<int, GroupElement>> legs) {
        TreeFamilySpec s;
        s.mode = Mode::monodromy;
        s.group = G;
        s.legs = std::move(legs);
        return s;
    }

    void validate() const {
        if (mode == Mode::hyperelliptic) {
            if (genus < 2) throw InputError("hyperelliptic families need genus >= 2");
            if (weight_cap < 1) throw InputError("weight cap must be positive");
            return;
        }
        if (legs.size() < 3) throw InputError("need at least 3 legs");
        std::vector<GroupElement> gens;
        GroupElement sum = group.zero();
        std::set<int> labels;
        for (const auto& [label, mu] : legs) {
            if (!group.contains(mu)) throw InputError("leg monodromy is not a group element");
            if (label < 0 || !labels.insert(label).second) throw InputError("leg labels must be distinct and nonnegative");
            sum = group.add(sum, mu);
            gens.push_back(mu);
        }
        if (sum != group.zero()) throw InputError("leg monodromies must sum to zero");
        if (subgroup_generated(group, gens).order() != group.order())
            throw InputError("leg monodromies must generate the group");
    }

    std::string key() const {
        std::string s = "v" + std::to_string(kCodeVersion) + ";";
        if (mode == Mode::hyperelliptic) return s + "hyperelliptic;g=" + std::to_string(genus) + ";cap=" + std::to_string(weight_cap);
        s += "monodromy;G=" + group.to_string() + ";legs=";
        for (const auto& [label, mu] : legs) s += std::to_string(label) + ":" + group.element_string(mu) + ";";
        return s;
    }
    std::string digest() const { return fnv1a_hex(key()); }
    std::string file_stem() const {
        if (mode == Mode::hyperelliptic)
            return "hyperelliptic-g" + std::to_string(genus) + "-cap" + std::to_string(weight_cap);
        // parameters only, so a code-version bump is detected by the header
        std::string s = group.to_string() + ";";
        for (const auto& [label, mu] : legs) s += std::to_string(label) + ":" + group.element_string(mu) + ";";
        return "monodromy-" + fnv1a_hex(s);
    }
    GroupElement branch() const { return mode == Mode::hyperelliptic ? group.element({1}) : group.zero(); }
};

namespace detail {

// Rooted stable subtree (the root also carries the edge to its parent).
struct RootedNode {
    int weight;
    std::vector<int> children;  // pool indices, nondecreasing
    int total;
    int height;
};

class WeightedTreeGenerator {
public:
    WeightedTreeGenerator(int total, int cap) : total_(total), cap_(cap) {}

    std::vector<Tree> run() {
        build_pool();
        std::vector<Tree> out;
        // single vertex
        if (total_ >= 3 && total_ <= cap_) {
            Tree t = Tree::hyperelliptic();
            t.add_vertex(total_);
            out.push_back(t);
        }
        // central vertex: at least two children of maximal height
        for (int w = 0; w <= std::min(cap_, total_); ++w) {
            std::vector<int> chosen;
            choose(sorted_, 0, total_ - w, chosen, [&](const std::vector<int>& ch) {
                int c = static_cast<int>(ch.size());
                if (c + w < 3) return;
                int top = -1, tall = 0;
                for (int i : ch) {
                    if (pool_[i].height > top) top = pool_[i].height, tall = 0;
                    tall += pool_[i].height == top;
                }
                if (tall >= 2) out.push_back(assemble_vertex(w, ch));
            });
        }
        // central edge joining two subtrees of equal height
        std::map<std::pair<int, int>, std::vector<int>> groups;  // (height, total) -> nodes
        for (int i = 0; i < static_cast<int>(pool_.size()); ++i) groups[{pool_[i].height, pool_[i].total}].push_back(i);
        for (const auto& [key, a] : groups) {
            auto [h, wa] = key;
            int wb = total_ - wa;
            if (wb < wa) continue;
            auto it = groups.find({h, wb});
            if (it == groups.end()) continue;
            const auto& b = it->second;
            for (std::size_t x = 0; x < a.size(); ++x)
                for (std::size_t y = wa == wb ? x : 0; y < b.size(); ++y) out.push_back(assemble_edge(a[x], b[y]));
        }
        return out;
    }

private:
    // all multisets (nondecreasing sequences) from cand with weight sum
    // exactly rem; cand must be sorted by subtree weight
    void choose(const std::vector<int>& cand, std::size_t from, int rem, std::vector<int>& chosen,
                const std::function<void(const std::vector<int>&)>& emit) {
        if (rem == 0) {
            emit(chosen);
            return;
        }
        for (std::size_t k = from; k < cand.size(); ++k) {
            int wt = pool_[cand[k]].total;
            if (wt > rem) break;
            chosen.push_back(cand[k]);
            choose(cand, k, rem - wt, chosen, emit);
            chosen.pop_back();
        }
    }

    // Rooted subtrees by increasing total weight. Children are strictly
    // lighter than their parent, so each forest is enumerated once.
    void build_pool() {
        // a non-root subtree has total weight at most total - 2 (the rest of
        // the tree needs at least one more leaf of weight >= 2)
        int wmax = total_ - 2;
        for (int T = 2; T <= wmax; ++T) {
            std::vector<int> fresh;
            if (T <= cap_) {
                pool_.push_back({T, {}, T, 0});
                fresh.push_back(static_cast<int>(pool_.size()) - 1);
            }
            for (int w = 0; w <= std::min(cap_, T - 2); ++w) {
                std::vector<int> chosen;
                choose(sorted_, 0, T - w, chosen, [&](const std::vector<int>& ch) {
                    int c = static_cast<int>(ch.size());
                    if (c + 1 + w < 3) return;
                    int h = 0;
                    for (int i : ch) h = std::max(h, pool_[i].height + 1);
                    pool_.push_back({w, ch, T, h});
                    fresh.push_back(static_cast<int>(pool_.size()) - 1);
                });
            }
            sorted_.insert(sorted_.end(), fresh.begin(), fresh.end());
        }
    }

    int attach(Tree& t, int node) {
        int v = t.add_vertex(pool_[node].weight);
        for (int c : pool_[node].children) {
            int w = attach(t, c);
            t.add_edge(v, w);
        }
        return v;
    }

    Tree assemble_vertex(int w, const std::vector<int>& ch) {
        Tree t = Tree::hyperelliptic();
        int r = t.add_vertex(w);
        for (int c : ch) t.add_edge(r, attach(t, c));
        return t;
    }

    Tree assemble_edge(int i, int j) {
        Tree t = Tree::hyperelliptic();
        int a = attach(t, i);
        int b = attach(t, j);
        t.add_edge(a, b);
        return t;
    }

    int total_, cap_;
    std::vector<RootedNode> pool_;
    std::vector<int> sorted_;  // pool indices by total weight
};

}  // namespace detail

// Every way of adding one more leg (label, mu) to a stable tree.
inline std::vector<Tree> insert_leg(const Tree& t, int label, const GroupElement& mu) {
    std::vector<Tree> out;
    // on a vertex
    for (int v = 0; v < t.num_vertices(); ++v) {
        Tree u = t;
        u.add_leg(v, label, mu);
        out.push_back(std::move(u));
    }
    // subdividing an edge
    for (int e = 0; e < t.num_edges(); ++e) {
        Tree u = t;
        int a = u.edges[e][0], b = u.edges[e][1];
        int m = u.add_vertex(0);
        u.add_leg(m, label, mu);
        u.edges[e] = {a, m};
        u.add_edge(m, b);
        out.push_back(std::move(u));
    }
    // splitting off an existing labelled leg together with the new one
    for (int v = 0; v < t.num_vertices(); ++v) {
        for (std::size_t i = 0; i < t.vertices[v].legs.size(); ++i) {
            Tree u = t;
            Leg old = u.vertices[v].legs[i];
            u.vertices[v].legs.erase(u.vertices[v].legs.begin() + static_cast<long>(i));
            int m = u.add_vertex(0);
            u.vertices[m].legs.push_back(old);
            u.add_leg(m, label, mu);
            u.add_edge(v, m);
            out.push_back(std::move(u));
        }
        // or an unlabelled one
        if (t.vertices[v].weight > 0) {
            Tree u = t;
            u.vertices[v].weight -= 1;
            int m = u.add_vertex(1);
            u.add_leg(m, label, mu);
            u.add_edge(v, m);
            out.push_back(std::move(u));
        }
    }
    return out;
}

inline std::vector<Tree> dedup_sorted(std::vector<Tree> trees) {
    std::map<std::string, Tree> by_code;
    for (auto& t : trees) {
        auto cf = canonical_form(t);
        if (!by_code.count(cf.code)) by_code.emplace(cf.code, t.relabel(cf.vertex_order, cf.edge_order));
    }
    std::vector<Tree> out;
    for (auto& [code, t] : by_code) out.push_back(std::move(t));
    return out;
}

inline std::vector<Tree> enumerate_weighted_trees(int total_weight, int cap) {
    auto raw = detail::WeightedTreeGenerator(total_weight, cap).run();
    auto out = dedup_sorted(raw);
    require(out.size() == raw.size(), "orderly generation produced duplicates");
    for (const auto& t : out) require(t.is_stable() && t.total_weight() == total_weight, "bad generated tree");
    return out;
}

// Stable trees on a labelled leg set (all legs labelled, no weights).
inline std::vector<Tree> enumerate_labelled_trees(const AbelianGroup& G, const std::vector<std::pair<int, GroupElement>>& legs) {
    if (legs.size() < 3) throw InputError("need at least 3 legs");
    Tree base = Tree::over(G);
    base.add_vertex(0);
    for (int i = 0; i < 3; ++i) base.add_leg(0, legs[i].first, legs[i].second);
    std::vector<Tree> cur{base};
    for (std::size_t i = 3; i < legs.size(); ++i) {
        std::vector<Tree> next;
        for (const auto& t : cur)
            for (auto& u : insert_leg(t, legs[i].first, legs[i].second)) next.push_back(std::move(u));
        cur = std::move(next);
    }
    return dedup_sorted(cur);
}

inline std::vector<Tree> enumerate_trees(const TreeFamilySpec& spec) {
    spec.validate();
    if (spec.mode == TreeFamilySpec::Mode::hyperelliptic) {
        auto out = enumerate_weighted_trees(2 * spec.genus + 2, spec.weight_cap);
        if (spec.weight_cap == 2)
            for (const auto& t : out)
                require(t.num_vertices() >= spec.genus + 1 && t.num_vertices() <= 2 * spec.genus,
                        "vertex count outside [g+1, 2g]");
        return out;
    }
    return enumerate_labelled_trees(spec.group, spec.legs);
}

// ---- cache --------------------------------------------------------------------

struct TreeCache {
    std::filesystem::path dir;
    bool refresh = false;

    static std::filesystem::path default_dir() {
        if (const char* env = std::getenv("COVERS_CACHE"); env && *env) return env;
        return ".covers-cache";
    }

    std::vector<Tree> load_or_build(const TreeFamilySpec& spec) const {
        spec.validate();
        auto path = dir / (spec.file_stem() + ".trees");
        std::string header = "treecache v" + std::to_string(kCodeVersion) + " " + spec.digest();
        if (!refresh && std::filesystem::exists(path)) {
            std::ifstream in(path);
            std::string first;
            std::getline(in, first);
            if (first != header)
                throw InputError("tree cache " + path.string() + " has header '" + first + "', expected '" + header +
                                 "'; rerun with --refresh");
            std::vector<Tree> out;
            std::string line;
            while (std::getline(in, line))
                if (!line.empty()) out.push_back(decode_tree(from_hex(line), spec.group, spec.branch()));
            return out;
        }
        auto trees = enumerate_trees(spec);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        auto tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp);
            if (out) {
                out << header << "\n";
                for (const auto& t : trees) out << to_hex(canonical_code(t)) << "\n";
            }
        }
        std::filesystem::rename(tmp, path, ec);
        return trees;
    }
};

}  // namespace admcov
