#include "nekra/groupoid.hpp"

#include <algorithm>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace nekra {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

// Index of the leaf of `coarse` that `fine` splits, assuming fine = coarse plus one caret.
int split_position(const Forest& coarse, const Forest& fine) {
    auto in = fine.internal();
    for (int k = 1; k <= coarse.leaves(); ++k)
        if (in.count(coarse.leaf(k))) return k;
    return 0;
}

}  // namespace

// ---- contexts --------------------------------------------------------------

HContext HContext::make(std::string name, std::vector<Aut> gens, std::vector<std::string> gen_names, SubgroupSpec H,
                        std::vector<Aut> artifacts) {
    HContext c;
    c.name = std::move(name);
    c.arity = H.arity;
    c.generators = std::move(gens);
    c.generator_names = std::move(gen_names);
    for (std::size_t i = 0; i < c.generators.size() && i < c.generator_names.size(); ++i)
        c.names.add(c.generator_names[i], c.generators[i]);
    if (H.kind == SubgroupSpec::Kind::Generated) {
        auto all = enumerate_finite(H.generators, H.fuel);
        if (!all) throw std::invalid_argument("contexts need a finite H or the whole group");
        H = SubgroupSpec::finite(*all);
    }
    c.H = std::move(H);
    Aut e = Aut::identity(c.arity);
    if (std::find(artifacts.begin(), artifacts.end(), e) == artifacts.end()) artifacts.insert(artifacts.begin(), e);
    c.artifacts = std::move(artifacts);
    c.h_list_ = c.H.is_finite() ? c.H.elements : std::vector<Aut>{e};
    c.coarse = check_coarsely_self_similar(c.H, c.artifacts);
    c.orderly = check_orderly(c.H, c.artifacts);
    return c;
}

HContext HContext::parse(std::string_view text, const std::string& base_dir) {
    std::string name = "context";
    int arity = 0;
    std::map<std::string, Aut> named;
    std::vector<std::string> gen_names;
    std::string h_line, a_line;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.rfind("name", 0) == 0) {
            name = trim(line.substr(line.find_first_of(" :") + 1));
        } else if (line.rfind("group", 0) == 0) {
            std::istringstream words(line.substr(5));
            std::string kind;
            words >> kind;
            std::string rest;
            std::getline(words, rest);
            rest = trim(rest);
            if (kind == "sunic") {
                auto g = make_sunic(SunicData::parse(rest));
                arity = g.arity;
                named = g.named;
            } else if (kind == "automaton") {
                auto path = std::filesystem::path(base_dir) / rest;
                auto spec = AutomatonSpec::load(path.string());
                arity = spec.arity;
                named = spec.realize();
            } else if (kind == "trivial") {
                arity = std::stoi(rest);
            } else {
                throw std::invalid_argument("unknown group kind '" + kind + "'");
            }
        } else if (line.rfind("H:", 0) == 0) {
            h_line = trim(line.substr(2));
        } else if (line.rfind("A:", 0) == 0) {
            a_line = trim(line.substr(2));
        } else {
            throw std::invalid_argument("unrecognized context line '" + line + "'");
        }
    }
    if (arity < 2) throw std::invalid_argument("context needs a 'group' line");
    std::vector<Aut> gens;
    for (const auto& [k, v] : named)
        if (k != "e" && !v.is_identity()) {
            gens.push_back(v);
            gen_names.push_back(k);
        }
    Names names(named);
    SubgroupSpec H;
    if (h_line.empty() || h_line == "whole") {
        H = SubgroupSpec::whole(arity);
    } else if (h_line == "trivial") {
        H = SubgroupSpec::finite({Aut::identity(arity)});
    } else {
        std::vector<Aut> elems;
        for (const auto& tok : split_list(h_line)) elems.push_back(names.parse(tok, arity));
        if (std::find(elems.begin(), elems.end(), Aut::identity(arity)) == elems.end())
            elems.push_back(Aut::identity(arity));
        H = SubgroupSpec::finite(elems);
    }
    std::vector<Aut> A;
    for (const auto& tok : split_list(a_line)) A.push_back(names.parse(tok, arity));
    auto ctx = make(name, gens, gen_names, H, A);
    for (const auto& [k, v] : named) ctx.names.add(k, v);
    return ctx;
}

HContext HContext::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), std::filesystem::path(path).parent_path().string());
}

void HContext::require_checks() const {
    if (coarse.verdict != Verdict::Pass)
        throw std::invalid_argument("context '" + name + "' is not coarsely self-similar: " + coarse.message);
    if (orderly.verdict != Verdict::Pass)
        throw std::invalid_argument("context '" + name + "' is not orderly: " + orderly.message);
}

bool HContext::artifacts_trivial() const {
    return std::all_of(artifacts.begin(), artifacts.end(), [](Aut a) { return a.is_identity(); });
}

Aut HContext::coset_rep(Aut f) const {
    if (!H.is_finite()) return Aut::identity(arity);
    Aut best = f * h_list_.front();
    for (Aut h : h_list_) {
        Aut x = f * h;
        if (x.is_identity()) return x;
        if (x < best) best = x;
    }
    return best;
}

Verdict HContext::in_H(Aut f) const { return H.contains(f); }

HContext grigorchuk_context() {
    auto g = make_sunic(grigorchuk_data());
    std::vector<std::string> names{"a", "b", "c", "d"};
    std::vector<Aut> gens;
    for (const auto& n : names) gens.push_back(g.named.at(n));
    auto ctx = HContext::make("grigorchuk", gens, names, SubgroupSpec::finite(g.B), {Aut::identity(2), g.a});
    return ctx;
}

HContext thompson_context(int d) {
    return HContext::make("V" + std::to_string(d), {}, {}, SubgroupSpec::finite({Aut::identity(d)}),
                          {Aut::identity(d)});
}

// ---- vertices ----------------------------------------------------------------

ForestPair CosetVertex::element() const {
    return ForestPair(forest, WreathElement(Permutation::identity(phi()), entries), Forest::trivial(phi(), forest.arity()));
}

CosetVertex base_vertex(const HContext& ctx, int heads) {
    return CosetVertex{Forest::trivial(heads, ctx.arity), std::vector<Aut>(static_cast<std::size_t>(heads), Aut::identity(ctx.arity))};
}

CosetVertex vertex_of(const HContext& ctx, const Forest& range, const WreathElement& w) {
    Permutation inv = w.sigma.inverse();
    CosetVertex v{range, {}};
    v.entries.reserve(w.entries.size());
    for (int j = 1; j <= w.degree(); ++j) v.entries.push_back(ctx.coset_rep(w.entries[static_cast<std::size_t>(inv(j) - 1)]));
    return v;
}

CosetVertex vertex_of(const HContext& ctx, const ForestPair& x) {
    if (x.domain.is_trivial()) return vertex_of(ctx, x.range, x.w);
    ForestPair y = canonical_form(x);
    if (!y.domain.is_trivial()) throw std::invalid_argument("element is not a splitting of the base vertex");
    return vertex_of(ctx, y.range, y.w);
}

std::string to_string(const CosetVertex& v, const Names& names) { return to_string(v.element(), names); }

Verdict coset_equal(const HContext& ctx, const ForestPair& x, const ForestPair& y) {
    if (x.heads() != y.heads() || x.feet() != y.feet()) return Verdict::Fail;
    ForestPair z = multiply(invert(x), y);
    if (!z.range.is_trivial() || !z.domain.is_trivial()) return Verdict::Fail;
    Verdict out = Verdict::Pass;
    for (Aut h : z.w.entries) {
        Verdict v = ctx.in_H(h);
        if (v == Verdict::Fail) return Verdict::Fail;
        if (v == Verdict::Indeterminate) out = Verdict::Indeterminate;
    }
    return out;
}

// ---- splittings ----------------------------------------------------------------

CosetVertex split_at(const HContext& ctx, const CosetVertex& v, int k, Aut h) {
    if (k < 1 || k > v.phi()) throw std::invalid_argument("no foot " + std::to_string(k));
    std::vector<Aut> e = v.entries;
    e[static_cast<std::size_t>(k - 1)] = e[static_cast<std::size_t>(k - 1)] * h;
    WreathElement w = clone(WreathElement(Permutation::identity(v.phi()), std::move(e)), k);
    return vertex_of(ctx, v.forest.add_caret(k), w);
}

std::vector<CosetVertex> length1_splittings(const HContext& ctx, const CosetVertex& v) {
    std::vector<CosetVertex> out;
    std::set<CosetVertex> seen;
    for (int k = 1; k <= v.phi(); ++k)
        for (Aut h : ctx.h_elements()) {
            auto s = split_at(ctx, v, k, h);
            if (seen.insert(s).second) out.push_back(std::move(s));
        }
    return out;
}

bool poset_leq(const HContext& ctx, const CosetVertex& v, const CosetVertex& w, std::size_t fuel) {
    if (v == w) return true;
    if (v.heads() != w.heads() || v.phi() >= w.phi()) return false;
    auto target = w.forest.internal();
    for (const auto& node : v.forest.internal())
        if (!target.count(node)) return false;
    // Splittings only grow the forest, so only leaves that are internal in w's forest are split.
    std::set<CosetVertex> seen{v};
    std::deque<CosetVertex> queue{v};
    while (!queue.empty()) {
        CosetVertex u = std::move(queue.front());
        queue.pop_front();
        for (int k = 1; k <= u.phi(); ++k) {
            if (!target.count(u.forest.leaf(k))) continue;
            for (Aut h : ctx.h_elements()) {
                auto s = split_at(ctx, u, k, h);
                if (s == w) return true;
                if (s.phi() < w.phi() && seen.insert(s).second) {
                    if (seen.size() > fuel) throw ResourceCap("order test exceeded its fuel");
                    queue.push_back(std::move(s));
                }
            }
        }
    }
    return false;
}

CosetVertex apply_local(const HContext& ctx, const CosetVertex& v, const std::map<int, CosetVertex>& local) {
    std::set<Forest::Leaf> internal = v.forest.internal();
    for (const auto& [k, top] : local) {
        auto more = top.forest.internal();
        internal.insert(more.begin(), more.end());
    }
    CosetVertex result{Forest::from_internal(v.heads(), ctx.arity, internal), {}};
    for (int i = 1; i <= result.phi(); ++i) {
        const auto& leaf = result.forest.leaf(i);
        int k = *v.forest.leaf_above(leaf.root, leaf.addr);
        auto it = local.find(k);
        if (it == local.end()) {
            result.entries.push_back(v.entries[static_cast<std::size_t>(k - 1)]);
        } else {
            auto j = it->second.forest.find_leaf(leaf.root, leaf.addr);
            if (!j) throw std::invalid_argument("local modifications overlap");
            result.entries.push_back(it->second.entries[static_cast<std::size_t>(*j - 1)]);
        }
    }
    return result;
}

CosetVertex lub_length1(const HContext& ctx, const CosetVertex& v, const std::vector<CosetVertex>& S) {
    if (S.empty()) return v;
    auto all = length1_splittings(ctx, v);
    std::set<CosetVertex> valid(all.begin(), all.end());
    std::map<int, std::set<CosetVertex>> by_position;
    for (const auto& s : S) {
        if (!valid.count(s)) throw std::invalid_argument("not a length-1 splitting: " + to_string(s, ctx.names));
        by_position[split_position(v.forest, s.forest)].insert(s);
    }
    std::map<int, CosetVertex> local;
    const Aut e = Aut::identity(ctx.arity);
    for (const auto& [k, group] : by_position) {
        if (group.size() == 1) {
            local.emplace(k, *group.begin());
            continue;
        }
        // Several splits at one foot: split again below whichever child carries the artifact.
        CosetVertex once = split_at(ctx, v, k, e);
        std::set<CosetVertex> fits;
        for (int c = 0; c < ctx.arity; ++c)
            for (Aut h : ctx.h_elements()) {
                CosetVertex twice = split_at(ctx, once, k + c, h);
                if (std::all_of(group.begin(), group.end(), [&](const CosetVertex& s) { return poset_leq(ctx, s, twice); }))
                    fits.insert(twice);
            }
        if (fits.size() != 1)
            throw std::logic_error(std::to_string(fits.size()) + " double splits bound the splittings at foot " +
                                   std::to_string(k));
        local.emplace(k, *fits.begin());
    }
    CosetVertex result = apply_local(ctx, v, local);
    for (const auto& s : S)
        if (!poset_leq(ctx, s, result))
            throw std::logic_error("constructed bound is not above " + to_string(s, ctx.names));
    return result;
}

CosetVertex elementary_core(const HContext& ctx, const CosetVertex& v, const CosetVertex& w) {
    if (!poset_leq(ctx, v, w)) throw std::invalid_argument("elementary core needs v <= w");
    std::vector<CosetVertex> below;
    for (auto& z : length1_splittings(ctx, v))
        if (poset_leq(ctx, z, w)) below.push_back(std::move(z));
    return lub_length1(ctx, v, below);
}

bool is_elementary(const HContext& ctx, const CosetVertex& v, const CosetVertex& w) {
    return elementary_core(ctx, v, w) == w;
}

std::vector<CosetVertex> upward_closure(const HContext& ctx, const CosetVertex& v, int max_phi, std::size_t cap) {
    std::vector<CosetVertex> out;
    std::set<CosetVertex> seen{v};
    std::deque<CosetVertex> queue{v};
    while (!queue.empty()) {
        CosetVertex u = std::move(queue.front());
        queue.pop_front();
        out.push_back(u);
        if (u.phi() + ctx.arity - 1 > max_phi) continue;
        for (auto& s : length1_splittings(ctx, u))
            if (seen.insert(s).second) {
                if (seen.size() > cap) throw ResourceCap("upward search exceeded " + std::to_string(cap) + " vertices");
                queue.push_back(std::move(s));
            }
    }
    return out;
}

CosetVertex nuclear_upper_bound(const HContext& ctx, const CosetVertex& v, int depth_cap) {
    CosetVertex u = v;
    for (;;) {
        int k = 0;
        for (int j = 1; j <= u.phi() && !k; ++j)
            if (!u.entries[static_cast<std::size_t>(j - 1)].is_identity()) k = j;
        if (!k) return u;
        if (static_cast<int>(u.forest.leaf(k).addr.size()) >= depth_cap)
            throw ResourceCap("entries do not reach H within depth " + std::to_string(depth_cap));
        u = split_at(ctx, u, k, Aut::identity(ctx.arity));
    }
}

CosetVertex common_upper_bound(const HContext& ctx, const CosetVertex& v, const CosetVertex& w) {
    if (v.heads() != w.heads()) throw std::invalid_argument("vertices have different heads");
    Forest joint = nuclear_upper_bound(ctx, v).forest.refine(nuclear_upper_bound(ctx, w).forest);
    return CosetVertex{joint, std::vector<Aut>(static_cast<std::size_t>(joint.leaves()), Aut::identity(ctx.arity))};
}

std::optional<CosetVertex> bfs_common_upper_bound(const HContext& ctx, const CosetVertex& v, const CosetVertex& w,
                                                  int max_phi) {
    auto from_v = upward_closure(ctx, v, max_phi);
    std::set<CosetVertex> above_v(from_v.begin(), from_v.end());
    std::optional<CosetVertex> best;
    for (const auto& u : upward_closure(ctx, w, max_phi))
        if (above_v.count(u) && (!best || u.phi() < best->phi() || (u.phi() == best->phi() && u < *best))) best = u;
    return best;
}

}  // namespace nekra
