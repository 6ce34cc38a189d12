#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nekra/cloning.hpp"
#include "nekra/groups.hpp"

namespace nekra {

// The ambient self-similar group G, a subgroup H <= G and a finite artifact set A (id included).
struct HContext {
    std::string name;
    int arity = 2;
    std::vector<Aut> generators;  // of G
    std::vector<std::string> generator_names;
    SubgroupSpec H;
    std::vector<Aut> artifacts;
    Names names;
    CheckResult coarse;
    CheckResult orderly;

    // Runs both checks and records the results.
    static HContext make(std::string name, std::vector<Aut> gens, std::vector<std::string> gen_names, SubgroupSpec H,
                         std::vector<Aut> artifacts);
    // Lines: "group sunic <data>" | "group automaton <file>" | "group trivial <d>",
    // "H: whole" | "H: trivial" | "H: name, name, ...", "A: name, ...". Paths resolve against base_dir.
    static HContext parse(std::string_view text, const std::string& base_dir = ".");
    static HContext load(const std::string& path);

    bool checks_pass() const { return coarse.verdict == Verdict::Pass && orderly.verdict == Verdict::Pass; }
    void require_checks() const;
    bool artifacts_trivial() const;
    // Elements of H for finite H; {id} stands in for the whole group.
    const std::vector<Aut>& h_elements() const { return h_list_; }
    // Canonical representative of the left coset fH.
    Aut coset_rep(Aut f) const;
    Verdict in_H(Aut f) const;

private:
    std::vector<Aut> h_list_;
};

// Grigorchuk group with H = B = {1,b,c,d} and A = {id, a}.
HContext grigorchuk_context();
// Higman-Thompson V_d: G and H trivial.
HContext thompson_context(int d);

// A coset [x]_H with x = [F, f, 1_n]: foot j is attached to leaf j of F through entries[j-1],
// a canonical coset representative. Two vertices are equal iff their cosets are.
struct CosetVertex {
    Forest forest;
    std::vector<Aut> entries;

    int phi() const { return forest.leaves(); }
    int heads() const { return forest.roots(); }
    ForestPair element() const;

    friend bool operator==(const CosetVertex&, const CosetVertex&) = default;
    friend auto operator<=>(const CosetVertex&, const CosetVertex&) = default;
};

CosetVertex base_vertex(const HContext& ctx, int heads = 1);
// Normalizes [F, w, 1_n]; throws when x has no representative with a trivial domain forest.
CosetVertex vertex_of(const HContext& ctx, const ForestPair& x);
CosetVertex vertex_of(const HContext& ctx, const Forest& range, const WreathElement& w);
std::string to_string(const CosetVertex& v, const Names& names);

// x^{-1} y lies in [1_n, S_n wr H, 1_n].
Verdict coset_equal(const HContext& ctx, const ForestPair& x, const ForestPair& y);

// [x h^{(k)} wedge_k]_H: foot k of v is twisted by h and split once.
CosetVertex split_at(const HContext& ctx, const CosetVertex& v, int k, Aut h);
// All length-1 splittings of v, deduplicated, in a deterministic order.
std::vector<CosetVertex> length1_splittings(const HContext& ctx, const CosetVertex& v);

bool poset_leq(const HContext& ctx, const CosetVertex& v, const CosetVertex& w, std::size_t fuel = 1'000'000);

// Replaces foot k of v by the part of local[k] below that foot, for each key k.
// Each local[k] must be v with extra carets under foot k only.
CosetVertex apply_local(const HContext& ctx, const CosetVertex& v, const std::map<int, CosetVertex>& local);

// Least upper bound of length-1 splittings of v, checked against poset_leq before returning.
CosetVertex lub_length1(const HContext& ctx, const CosetVertex& v, const std::vector<CosetVertex>& S);
CosetVertex elementary_core(const HContext& ctx, const CosetVertex& v, const CosetVertex& w);
bool is_elementary(const HContext& ctx, const CosetVertex& v, const CosetVertex& w);

// Everything >= v with phi <= max_phi, by breadth-first search.
std::vector<CosetVertex> upward_closure(const HContext& ctx, const CosetVertex& v, int max_phi,
                                        std::size_t cap = 200'000);
// Split feet until every entry lies in H; the result is [F', id, 1]_H >= v.
CosetVertex nuclear_upper_bound(const HContext& ctx, const CosetVertex& v, int depth_cap = 16);
// Common upper bound of two vertices with the same heads, from their nuclear bounds.
CosetVertex common_upper_bound(const HContext& ctx, const CosetVertex& v, const CosetVertex& w);
// Smallest-phi common upper bound with phi <= max_phi, by searching both upward closures.
std::optional<CosetVertex> bfs_common_upper_bound(const HContext& ctx, const CosetVertex& v, const CosetVertex& w,
                                                  int max_phi);

}  // namespace nekra
