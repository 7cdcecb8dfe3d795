// admcov: command-line front end.
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "admcov/complex.hpp"
#include "admcov/digest.hpp"
#include "admcov/euler_sum.hpp"
#include "admcov/polynomial.hpp"
#include "admcov/symfunc.hpp"
#include "admcov/tree_enum.hpp"

using namespace admcov;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInternal = 4;
constexpr int kMaxGenus = 9;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    int jobs = 0;
    bool refresh = false;
    std::string manifest;
};

int default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<Tree> hyperelliptic_trees(int g, const Common& c) {
    TreeCache cache{TreeCache::default_dir(), c.refresh};
    return cache.load_or_build(TreeFamilySpec::hyperelliptic(g));
}

void check_genus(int g) {
    if (g < 2 || g > kMaxGenus)
        throw UsageError("genus must lie in [2, " + std::to_string(kMaxGenus) + "], got " + std::to_string(g));
}

// "1" or "1:0" per element; a single entry is repeated for every leg.
std::vector<std::pair<int, GroupElement>> parse_monodromy(const PresentedGroup& pg, const std::string& list, int legs) {
    std::vector<GroupElement> elems;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::vector<int> res;
        std::stringstream is(item);
        std::string part;
        while (std::getline(is, part, ':')) {
            try {
                res.push_back(std::stoi(part));
            } catch (const std::exception&) {
                throw UsageError("bad monodromy entry '" + item + "'");
            }
        }
        elems.push_back(pg.map(res));
    }
    if (elems.empty()) throw UsageError("empty monodromy list");
    if (legs <= 0) legs = static_cast<int>(elems.size());
    if (elems.size() == 1) elems.assign(legs, elems[0]);
    if (static_cast<int>(elems.size()) != legs)
        throw UsageError("monodromy list has " + std::to_string(elems.size()) + " entries for " + std::to_string(legs) + " legs");
    std::vector<std::pair<int, GroupElement>> out;
    for (int i = 0; i < legs; ++i) out.push_back({i + 1, elems[i]});
    return out;
}

std::string expansion_table(const SymLaurent& h, int N) {
    auto s = expand_to_degree(h, N);
    std::ostringstream out;
    for (int n = 0; n <= N; ++n) {
        out << "n=" << n << ": ";
        bool first = true;
        for (const auto& [parts, v] : s.degree_part(n)) {
            out << (first ? "" : " + ") << to_string(v) << "*" << partition_string(parts);
            first = false;
        }
        if (first) out << "0";
        out << "\n";
    }
    return out.str();
}

std::vector<Rational> chi_row(int g, int max_n, const Common& c) {
    auto h = compute_hg_from(hyperelliptic_trees(g, c), c.jobs);
    return egf_values(specialize_egf(h), max_n);
}

void write_manifest(const Common& c, const std::string& command, const json& params, const std::string& output,
                    double seconds) {
    if (c.manifest.empty()) return;
    json m = {{"command", command},
              {"parameters", params},
              {"code_version", kCodeVersion},
              {"wall_time_seconds", seconds},
              {"jobs", c.jobs},
              {"output_digest", fnv1a_hex(output)}};
    std::ofstream f(c.manifest);
    if (!f) throw InputError("cannot write manifest " + c.manifest);
    f << m.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Admissible-cover graph sums and boundary complexes of hyperelliptic moduli"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--jobs,-j", common.jobs, "worker threads (default: all cores)");
    app.add_flag("--refresh", common.refresh, "rebuild cached enumerations");
    app.add_option("--manifest", common.manifest, "write a JSON run manifest to this path");

    int genus = 2, expand_n = -1, max_n = 10, interp_n = 4, interp_max_genus = 7, marks = 0, legs = 0;
    std::string format = "text", variant = "quotient", subcomplex = "full", group_spec, monodromy;
    bool list = false;

    auto* hg = app.add_subcommand("hg", "print h_g");
    hg->add_option("--genus,-g", genus)->required();
    hg->add_option("--format", format)->check(CLI::IsMember({"json", "latex", "text"}));
    hg->add_option("--expand-n", expand_n, "also print the degree <= N power-sum expansion");

    auto* egf = app.add_subcommand("egf", "numerical Euler characteristics of H_{g,n}");
    egf->add_option("--genus,-g", genus)->required();
    egf->add_option("--max-n", max_n)->check(CLI::NonNegativeNumber);

    auto* interp = app.add_subcommand("interp", "interpolate chi(H_{g,n}) as a polynomial in g");
    interp->add_option("--n", interp_n)->required()->check(CLI::NonNegativeNumber);
    interp->add_option("--max-genus", interp_max_genus, "use genera 2..G")->check(CLI::Range(2, kMaxGenus));

    auto* trees = app.add_subcommand("trees", "enumerate target trees");
    trees->add_option("--genus,-g", genus);
    trees->add_option("--group", group_spec, "e.g. Z2xZ3");
    trees->add_option("--monodromy", monodromy, "comma separated leg monodromies, components joined by ':'");
    trees->add_flag("--list", list, "print canonical codes");

    auto* hom = app.add_subcommand("homology", "reduced Betti numbers of the boundary complex");
    hom->add_option("--genus,-g", genus)->required();
    hom->add_option("--marks,-n", marks)->check(CLI::NonNegativeNumber);
    hom->add_option("--variant", variant)->check(CLI::IsMember({"quotient", "labelled"}));
    hom->add_option("--subcomplex", subcomplex)->check(CLI::IsMember({"full", "rep", "w3", "repw3"}));

    auto* hcover = app.add_subcommand("hcover", "graph sum for labelled G-covers");
    hcover->add_option("--group", group_spec)->required();
    hcover->add_option("--legs", legs);
    hcover->add_option("--monodromy", monodromy)->required();
    hcover->add_option("--format", format)->check(CLI::IsMember({"json", "latex", "text"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }
    if (common.jobs <= 0) common.jobs = default_jobs();

    auto t0 = std::chrono::steady_clock::now();
    std::string out;
    json params;
    std::string command;
    try {
        auto emit_laurent = [&](const SymLaurent& h) {
            if (format == "json") return to_json(h).dump() + "\n";
            if (format == "latex") return to_latex(h) + "\n";
            return to_text(h) + "\n";
        };
        if (*hg) {
            command = "hg";
            check_genus(genus);
            params = {{"genus", genus}, {"format", format}, {"expand_n", expand_n}};
            auto h = compute_hg_from(hyperelliptic_trees(genus, common), common.jobs);
            out = emit_laurent(h);
            if (expand_n >= 0) out += expansion_table(h, expand_n);
        } else if (*egf) {
            command = "egf";
            check_genus(genus);
            params = {{"genus", genus}, {"max_n", max_n}};
            auto f = specialize_egf(compute_hg_from(hyperelliptic_trees(genus, common), common.jobs));
            out = f.to_string() + "\n";
            auto vals = egf_values(f, max_n);
            for (int n = 0; n <= max_n; ++n) out += "n=" + std::to_string(n) + " " + to_string(vals[n]) + "\n";
        } else if (*interp) {
            command = "interp";
            params = {{"n", interp_n}, {"max_genus", interp_max_genus}};
            int bound = fn_degree_bound(interp_n);
            int points = interp_max_genus - 1;
            if (points < bound + 1)
                throw InputError("degree bound " + std::to_string(bound) + " needs " + std::to_string(bound + 1) +
                                 " genera; raise --max-genus");
            std::vector<std::pair<Rational, Rational>> pts;
            for (int g = 2; g <= interp_max_genus; ++g) pts.push_back({Rational(g), chi_row(g, interp_n, common)[interp_n]});
            auto F = interpolate_Fn(pts, bound);
            out = "F_" + std::to_string(interp_n) + "(g) = " + F.to_string("g") + "\n";
        } else if (*trees) {
            command = "trees";
            std::vector<Tree> ts;
            if (!group_spec.empty()) {
                auto pg = PresentedGroup::parse(group_spec);
                auto spec = TreeFamilySpec::monodromy(pg.group(), parse_monodromy(pg, monodromy, 0));
                params = {{"group", group_spec}, {"monodromy", monodromy}};
                ts = TreeCache{TreeCache::default_dir(), common.refresh}.load_or_build(spec);
            } else {
                check_genus(genus);
                params = {{"genus", genus}};
                ts = hyperelliptic_trees(genus, common);
            }
            out = "count " + std::to_string(ts.size()) + "\n";
            if (list)
                for (const auto& t : ts) out += to_hex(canonical_code(t)) + "\n";
        } else if (*hom) {
            command = "homology";
            check_genus(genus);
            params = {{"genus", genus}, {"marks", marks}, {"variant", variant}, {"subcomplex", subcomplex}};
            auto v = parse_variant(variant);
            auto s = parse_subcomplex(subcomplex);
            auto cx = build_complex(enumerate_gamma(genus, marks, v, s));
            out = betti_json(genus, marks, v, s, cx.dims(), betti(cx)).dump() + "\n";
        } else if (*hcover) {
            command = "hcover";
            auto pg = PresentedGroup::parse(group_spec);
            params = {{"group", group_spec}, {"legs", legs}, {"monodromy", monodromy}};
            auto h = compute_hG_from(TreeCache{TreeCache::default_dir(), common.refresh}.load_or_build(
                                         TreeFamilySpec::monodromy(pg.group(), parse_monodromy(pg, monodromy, legs))),
                                     common.jobs);
            out = emit_laurent(h);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InputError& e) {
        std::cerr << "infeasible input: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const ConsistencyError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    std::cout << out;
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    try {
        write_manifest(common, command, params, out, secs);
    } catch (const InputError& e) {
        std::cerr << "infeasible input: " << e.what() << "\n";
        return kExitInfeasible;
    }
    return 0;
}
