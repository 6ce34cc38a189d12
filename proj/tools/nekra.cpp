#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "nekra/complex.hpp"

using namespace nekra;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0, kFail = 1, kUsage = 2, kIndeterminate = 3;

int exit_code(Verdict v) {
    switch (v) {
        case Verdict::Pass: return kOk;
        case Verdict::Fail: return kFail;
        default: return kIndeterminate;
    }
}

// Ordered key/value report, printed as "key: value" or tab-separated.
class Report {
public:
    explicit Report(bool tsv) : tsv_(tsv) {}
    template <class T>
    void add(const std::string& key, const T& value) {
        std::ostringstream s;
        s << value;
        rows_.emplace_back(key, s.str());
    }
    void print(std::ostream& out) const {
        for (const auto& [k, v] : rows_) out << k << (tsv_ ? "\t" : ": ") << v << "\n";
    }

private:
    bool tsv_;
    std::vector<std::pair<std::string, std::string>> rows_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct LoadedGroup {
    int arity = 2;
    std::vector<Aut> gens;
    std::vector<std::string> gen_names;
    Names names;
    std::optional<SunicGroup> sunic;
};

// .aut: automaton spec, .grp: Sunic data.
LoadedGroup load_group(const std::string& path) {
    LoadedGroup g;
    if (fs::path(path).extension() == ".grp") {
        auto s = make_sunic(SunicData::load(path));
        g.arity = s.arity;
        g.names = Names(s.named);
        for (Aut x : s.generators()) {
            g.gens.push_back(x);
            g.gen_names.push_back(g.names.print(x));
        }
        g.sunic = std::move(s);
        return g;
    }
    auto spec = AutomatonSpec::load(path);
    auto named = spec.realize();
    g.arity = spec.arity;
    g.names = Names(named);
    for (const auto& [name, x] : named)
        if (name != "e" && !x.is_identity()) {
            g.gens.push_back(x);
            g.gen_names.push_back(name);
        }
    return g;
}

// An element file: an optional "group <file>" line, then literals that are multiplied in order.
struct LoadedElement {
    ForestPair value;
    LoadedGroup group;
};

LoadedElement load_element(const std::string& path, const std::string& group_override) {
    std::istringstream in(slurp(path));
    std::string line, group_path = group_override;
    std::vector<std::string> literals;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        line = line.substr(first);
        if (line.rfind("group ", 0) == 0) {
            if (group_override.empty()) group_path = (fs::path(path).parent_path() / line.substr(6)).string();
        } else {
            literals.push_back(line);
        }
    }
    if (literals.empty()) throw std::invalid_argument(path + " holds no element literal");
    LoadedElement e;
    if (!group_path.empty()) e.group = load_group(group_path);
    e.value = parse_element(literals[0], e.group.arity, e.group.names);
    for (std::size_t i = 1; i < literals.size(); ++i)
        e.value = multiply(e.value, parse_element(literals[i], e.group.arity, e.group.names));
    return e;
}

WreathElement random_wreath(int n, const std::vector<Aut>& pool, std::mt19937& rng) {
    std::vector<int> img(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) img[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(img.begin(), img.end(), rng);
    std::vector<Aut> entries;
    for (int i = 0; i < n; ++i) entries.push_back(pool[rng() % pool.size()]);
    return WreathElement(Permutation(img), entries);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-similar groups, cloning systems and their groupoid complexes"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "text", group_flag;
    unsigned seed = 1;
    int jobs = 1;
    app.add_option("--format", format, "text or tsv")->check(CLI::IsMember({"text", "tsv"}));
    app.add_option("--seed", seed, "seed for randomized runs");
    app.add_option("--jobs", jobs, "worker threads (computations currently run on one)")->check(CLI::PositiveNumber);
    app.add_option("--group", group_flag, "group file for element literals, overriding the file's own");

    int code = kOk;
    std::function<void(Report&)> action;

    // eval <group> <name> <word>
    std::string grp, elem, word;
    auto* eval = app.add_subcommand("eval", "apply a named automorphism to a word");
    eval->add_option("group", grp)->required()->check(CLI::ExistingFile);
    eval->add_option("element", elem)->required();
    eval->add_option("word", word)->required();
    eval->callback([&] {
        action = [&](Report&) {
            auto g = load_group(grp);
            std::cout << format_word(evaluate(g.names.parse(elem, g.arity), parse_word(word))) << "\n";
        };
    });

    std::string lhs, rhs;
    auto* mul = app.add_subcommand("mul", "multiply two elements");
    mul->add_option("lhs", lhs)->required()->check(CLI::ExistingFile);
    mul->add_option("rhs", rhs)->required()->check(CLI::ExistingFile);
    mul->callback([&] {
        action = [&](Report& r) {
            auto x = load_element(lhs, group_flag), y = load_element(rhs, group_flag);
            r.add("product", to_string(multiply(x.value, y.value), x.group.names));
        };
    });

    auto* eq = app.add_subcommand("eq", "decide equality of two elements");
    eq->add_option("lhs", lhs)->required()->check(CLI::ExistingFile);
    eq->add_option("rhs", rhs)->required()->check(CLI::ExistingFile);
    eq->callback([&] {
        action = [&](Report& r) {
            auto x = load_element(lhs, group_flag), y = load_element(rhs, group_flag);
            bool same = equal(x.value, y.value);
            r.add("equal", same ? "PASS" : "FAIL");
            code = same ? kOk : kFail;
        };
    });

    auto* reduce = app.add_subcommand("reduce", "canonical form of an element");
    reduce->add_option("element", lhs)->required()->check(CLI::ExistingFile);
    reduce->callback([&] {
        action = [&](Report& r) {
            auto x = load_element(lhs, group_flag);
            r.add("reduced", to_string(canonical_form(x.value), x.group.names));
        };
    });

    std::string diagram_format = "dot";
    auto* diagram = app.add_subcommand("diagram", "strand diagram of an element");
    diagram->add_option("element", lhs)->required()->check(CLI::ExistingFile);
    diagram->add_option("--as", diagram_format, "dot or tikz");
    diagram->callback([&] {
        action = [&](Report&) {
            auto x = load_element(lhs, group_flag);
            std::cout << strand_diagram(x.value, x.group.names, parse_diagram_format(diagram_format));
        };
    });

    int samples = 500, degree = 3, radius = 3;
    auto* axioms = app.add_subcommand("axioms", "check the cloning axioms on random samples");
    axioms->add_option("group", grp)->required()->check(CLI::ExistingFile);
    axioms->add_option("--samples", samples)->check(CLI::PositiveNumber);
    axioms->add_option("--degree", degree)->check(CLI::PositiveNumber);
    axioms->add_option("--radius", radius, "entries are drawn from the ball of this radius");
    axioms->callback([&] {
        action = [&](Report& r) {
            auto g = load_group(grp);
            auto pool = ball(g.gens, radius);
            std::mt19937 rng(seed);
            std::vector<WreathElement> sample;
            for (int i = 0; i < samples; ++i) sample.push_back(random_wreath(degree, pool, rng));
            auto rep = check_axioms(sample);
            r.add("product_checks", rep.product_checks);
            r.add("commuting_checks", rep.commuting_checks);
            r.add("compatibility_checks", rep.compatibility_checks);
            r.add("verdict", rep.ok() ? "PASS" : "FAIL");
            if (rep.counterexample) r.add("counterexample", *rep.counterexample);
            code = rep.ok() ? kOk : kFail;
        };
    });

    std::size_t cap = 10'000;
    auto* nuc = app.add_subcommand("nucleus", "nucleus of the group generated by the file's generators");
    nuc->add_option("group", grp)->required()->check(CLI::ExistingFile);
    nuc->add_option("--cap", cap);
    nuc->callback([&] {
        action = [&](Report& r) {
            auto g = load_group(grp);
            auto res = nucleus(g.gens, cap);
            r.add("contracting", res.contracting ? "PASS" : "INDETERMINATE");
            r.add("size", res.elements.size());
            for (Aut x : res.elements) {
                r.add("element", g.names.print(x));
            }
            code = res.contracting ? kOk : kIndeterminate;
        };
    });

    int levels = 20;
    auto* trans = app.add_subcommand("transitive", "level transitivity certificate");
    trans->add_option("group", grp)->required()->check(CLI::ExistingFile);
    trans->add_option("element", elem)->required();
    trans->add_option("--levels", levels)->check(CLI::PositiveNumber);
    trans->callback([&] {
        action = [&](Report& r) {
            auto g = load_group(grp);
            Aut x = g.names.parse(elem, g.arity);
            bool pass;
            if (g.arity == 2) {
                auto cert = level_transitive_binary(x, levels);
                pass = cert.pass;
                r.add("levels_checked", cert.levels_checked);
                if (!pass) r.add("failing_level", cert.failing_level);
            } else {
                pass = level_transitive_bruteforce(x, levels);
                r.add("levels_checked", levels);
            }
            r.add("verdict", pass ? "PASS" : "FAIL");
            code = pass ? kOk : kFail;
        };
    });

    std::string which;
    int word_len = 3, depth_cap = 8;
    auto* check = app.add_subcommand("check", "coarse, orderly or nuclear check of a Sunic group or context");
    check->add_option("kind", which)->required()->check(CLI::IsMember({"coarse", "orderly", "nuclear"}));
    check->add_option("file", grp)->required()->check(CLI::ExistingFile);
    check->add_option("--length", word_len, "nuclear: word length");
    check->add_option("--depth", depth_cap, "nuclear: depth cap");
    check->callback([&] {
        action = [&](Report& r) {
            SubgroupSpec H;
            std::vector<Aut> A, gens;
            std::vector<std::string> names;
            if (fs::path(grp).extension() == ".ctx") {
                auto ctx = HContext::load(grp);
                H = ctx.H;
                A = ctx.artifacts;
                gens = ctx.generators;
                names = ctx.generator_names;
            } else {
                auto g = load_group(grp);
                if (!g.sunic) throw std::invalid_argument("check needs a .grp or .ctx file");
                H = SubgroupSpec::finite(g.sunic->B);
                A = g.sunic->a_powers;
                gens = g.gens;
                names = g.gen_names;
            }
            Verdict v;
            if (which == "nuclear") {
                auto rep = check_nuclear(gens, names, H, word_len, depth_cap);
                v = rep.verdict;
                r.add("words", rep.entries.size());
                if (rep.failing_word) r.add("failing_word", *rep.failing_word);
            } else {
                auto res = which == "coarse" ? check_coarsely_self_similar(H, A) : check_orderly(H, A);
                v = res.verdict;
                if (!res.message.empty()) r.add("message", res.message);
            }
            r.add("verdict", to_string(v));
            code = exit_code(v);
        };
    });

    std::string ctx_path;
    int q = 3, heads = 1, m = 12, max_dim = 1;
    bool dot = false, cells = false;
    auto* sub = app.add_subcommand("sublevel", "dump the sublevel set phi <= q");
    sub->add_option("context", ctx_path)->required()->check(CLI::ExistingFile);
    sub->add_option("-q", q)->check(CLI::PositiveNumber);
    sub->add_option("--heads", heads)->check(CLI::PositiveNumber);
    sub->add_flag("--dot", dot, "Hasse diagram as DOT");
    sub->add_flag("--cells", cells, "also list the cells");
    sub->callback([&] {
        action = [&](Report&) {
            auto ctx = HContext::load(ctx_path);
            auto c = build_sublevel(ctx, q, heads);
            if (dot) {
                std::cout << hasse_dot(c);
                return;
            }
            std::cout << dump_sublevel(c, ctx.names);
            if (!cells) return;
            for (const auto& cell : stein_cells(ctx, c)) {
                std::cout << "cell\t" << cell.base << "\t" << cell.dimension();
                for (auto v : cell.vertices) std::cout << "\t" << v;
                std::cout << "\n";
            }
        };
    });

    auto* dlink = app.add_subcommand("dlink", "dump the descending link at a vertex with m feet");
    dlink->add_option("context", ctx_path)->required()->check(CLI::ExistingFile);
    dlink->add_option("-m", m)->check(CLI::PositiveNumber);
    dlink->callback([&] {
        action = [&](Report&) {
            auto ctx = HContext::load(ctx_path);
            std::cout << dump_link(descending_link(ctx, m), ctx.names);
        };
    });

    auto* cert = app.add_subcommand("cert", "connectivity certificate of the descending link");
    cert->add_option("context", ctx_path)->required()->check(CLI::ExistingFile);
    cert->add_option("-m", m)->check(CLI::PositiveNumber);
    cert->callback([&] {
        action = [&](Report& r) {
            auto ctx = HContext::load(ctx_path);
            auto L = descending_link(ctx, m);
            auto c = connectivity_certificate(L);
            r.add("vertices", L.vertices.size());
            r.add("edges", L.edges.size());
            r.add("ground_dimension", c.ground_dimension);
            r.add("max_missed", c.max_missed);
            r.add("bound", c.bound_k);
            r.add("bound_holds", c.bound_holds ? "PASS" : "FAIL");
            r.add("c_from_bound", c.bound_c);
            r.add("c_observed", c.observed_c);
            r.add("connectivity", c.connectivity());
            r.add("formula", c.formula);
            code = c.bound_holds ? kOk : kFail;
        };
    });

    auto* hom = app.add_subcommand("homology", "reduced homology of the descending link");
    hom->add_option("context", ctx_path)->required()->check(CLI::ExistingFile);
    hom->add_option("-m", m)->check(CLI::PositiveNumber);
    hom->add_option("--dim", max_dim, "highest degree")->check(CLI::NonNegativeNumber);
    hom->callback([&] {
        action = [&](Report& r) {
            auto ctx = HContext::load(ctx_path);
            auto L = descending_link(ctx, m);
            auto K = SimplicialComplex::flag(static_cast<int>(L.vertices.size()), L.edges, max_dim + 1);
            auto h = homology(K, max_dim);
            for (int k = 0; k <= max_dim; ++k) {
                r.add("b" + std::to_string(k), h.reduced_betti[static_cast<std::size_t>(k)]);
                std::string t;
                for (long f : h.torsion[static_cast<std::size_t>(k)]) t += (t.empty() ? "" : ",") + std::to_string(f);
                if (!t.empty()) r.add("torsion" + std::to_string(k), t);
            }
            r.add("torsion_known", h.torsion_known ? "yes" : "no");
            code = h.torsion_known ? kOk : kIndeterminate;
        };
    });

    std::string vertex_path;
    auto* stab = app.add_subcommand("stab", "embed a stabilizing element into S_n wr H");
    stab->add_option("context", ctx_path)->required()->check(CLI::ExistingFile);
    stab->add_option("vertex", vertex_path, "element whose coset is the vertex")->required()->check(CLI::ExistingFile);
    stab->add_option("element", lhs)->required()->check(CLI::ExistingFile);
    stab->callback([&] {
        action = [&](Report& r) {
            auto ctx = HContext::load(ctx_path);
            auto x = vertex_of(ctx, load_element(vertex_path, group_flag).value);
            auto g = load_element(lhs, group_flag).value;
            auto image = stabilizer_embed(ctx, g, x);
            r.add("vertex", to_string(x, ctx.names));
            r.add("stabilizes", image ? "PASS" : "FAIL");
            if (image) r.add("image", to_string(*image, ctx.names));
            code = image ? kOk : kFail;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }
    Report report(format == "tsv");
    try {
        action(report);
    } catch (const ResourceCap& e) {
        std::cerr << "indeterminate: " << e.what() << "\n";
        return kIndeterminate;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    report.print(std::cout);
    return code;
}
