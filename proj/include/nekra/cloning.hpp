#pragma once

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "nekra/automata.hpp"

namespace nekra {

// sigma(f_1, ..., f_n) in S_n wr Aut(T_d). Entry i sits on domain leaf i; sigma sends it to range leaf sigma(i).
struct WreathElement {
    Permutation sigma;
    std::vector<Aut> entries;

    WreathElement() = default;
    WreathElement(Permutation s, std::vector<Aut> e);
    static WreathElement identity(int n, int d);
    // An automorphism of T_d as an element of degree 1.
    static WreathElement single(Aut f);

    int degree() const { return sigma.degree(); }
    int arity() const { return entries.empty() ? 2 : entries.front().arity(); }
    bool is_identity() const;

    friend bool operator==(const WreathElement&, const WreathElement&) = default;
    friend auto operator<=>(const WreathElement& a, const WreathElement& b) {
        if (auto c = a.sigma <=> b.sigma; c != 0) return c;
        return a.entries <=> b.entries;
    }
};

// sigma(f) tau(g) = sigma tau (f_{tau(i)} g_i).
WreathElement operator*(const WreathElement& x, const WreathElement& y);
WreathElement inverse(const WreathElement& x);
WreathElement direct_sum(const WreathElement& x, const WreathElement& y);

// The cloning map at position k: strand k is replaced by the wreath recursion of its entry.
WreathElement clone(const WreathElement& w, int k);

// Embeds h at position k of the identity of degree n.
WreathElement at_position(Aut h, int k, int n);

// Axiom checks for a single instance; each returns true when the identity holds.
bool product_law_holds(const WreathElement& g, const WreathElement& h, int k);
bool commuting_clones_hold(const WreathElement& g, int k, int l);  // k < l
bool compatibility_holds(const WreathElement& g, int k);

struct AxiomReport {
    std::size_t product_checks = 0;
    std::size_t commuting_checks = 0;
    std::size_t compatibility_checks = 0;
    std::optional<std::string> counterexample;
    bool ok() const { return !counterexample; }
};
// Runs all three checks over every position for each consecutive pair of the sample.
AxiomReport check_axioms(const std::vector<WreathElement>& sample);

// ---- naming of automorphisms in literals -------------------------------------

// Maps names to handles and back, for parsing and printing element literals.
class Names {
public:
    Names() = default;
    explicit Names(const std::map<std::string, Aut>& named);
    void add(const std::string& name, Aut a);
    // Entry syntax: id | name | name^-1 | product of those joined by '*'.
    Aut parse(const std::string& token, int arity) const;
    std::string print(Aut a) const;
    const std::map<std::string, Aut>& all() const { return by_name_; }

private:
    std::map<std::string, Aut> by_name_;
    std::map<Aut, std::string> by_aut_;
};

std::string to_string(const WreathElement& w, const Names& names);
// "(1 2) ; id, f" with the degree given.
WreathElement parse_wreath(const std::string& text, int degree, int arity, const Names& names);

// ---- forests -------------------------------------------------------------

// An ordered forest of rooted complete d-ary trees, stored by its leaves in left-to-right order.
class Forest {
public:
    struct Leaf {
        int root;  // 1-based
        Word addr;
        friend auto operator<=>(const Leaf&, const Leaf&) = default;
    };

    Forest() = default;
    static Forest trivial(int roots, int d);
    // Preorder over {c, l}, trees separated by commas: "cll", "cclll", "l,cll".
    static Forest parse(const std::string& text, int d);
    // Rebuilds a forest from its set of internal vertices.
    static Forest from_internal(int roots, int d, const std::set<Leaf>& internal);

    int arity() const { return arity_; }
    int roots() const { return roots_; }
    int leaves() const { return static_cast<int>(leaves_.size()); }
    const Leaf& leaf(int i) const { return leaves_.at(static_cast<std::size_t>(i - 1)); }
    bool is_trivial() const { return static_cast<int>(leaves_.size()) == roots_; }
    std::set<Leaf> internal() const;
    int carets() const { return (leaves() - roots()) / (arity_ - 1); }

    Forest add_caret(int k) const;
    // Leaves k..k+d-1 are the children of one vertex.
    bool is_caret_block(int k) const;
    Forest remove_caret(int k) const;
    // Union of internal vertices.
    Forest refine(const Forest& other) const;
    // Leaf whose address is a prefix of u below `root`, if any.
    std::optional<int> leaf_above(int root, const Word& u) const;
    std::optional<int> find_leaf(int root, const Word& addr) const;
    // Leaves below root r, as a 1-based index range [first, last].
    std::pair<int, int> leaves_of_root(int r) const;

    std::string to_string() const;
    friend Forest direct_sum(const Forest& a, const Forest& b);
    friend bool operator==(const Forest&, const Forest&) = default;
    friend auto operator<=>(const Forest&, const Forest&) = default;

private:
    int arity_ = 2;
    int roots_ = 0;
    std::vector<Leaf> leaves_;
};

// [range, w, domain]: a tree pair when both forests have one root, a groupoid element in general.
struct ForestPair {
    Forest range;
    WreathElement w;
    Forest domain;

    ForestPair() = default;
    ForestPair(Forest r, WreathElement x, Forest d);
    static ForestPair identity(int roots, int d);
    // [1_1, f, 1_1]
    static ForestPair of(Aut f);

    int arity() const { return domain.arity(); }
    int heads() const { return range.roots(); }
    int feet() const { return domain.roots(); }
    int leaves() const { return domain.leaves(); }

    friend bool operator==(const ForestPair&, const ForestPair&) = default;
    friend auto operator<=>(const ForestPair& a, const ForestPair& b) {
        if (auto c = a.range <=> b.range; c != 0) return c;
        if (auto c = a.w <=> b.w; c != 0) return c;
        return a.domain <=> b.domain;
    }
};

ForestPair expand(const ForestPair& x, int k);
std::optional<ForestPair> try_reduce(const ForestPair& x, int k);
// Leftmost-first reduction until nothing reduces.
ForestPair canonical_form(ForestPair x);
// Expand until the domain (resp. range) equals `target`, which must refine it.
ForestPair expand_domain_to(const ForestPair& x, const Forest& target);
ForestPair expand_range_to(const ForestPair& x, const Forest& target);

// xy with y acting first: feet(x) = heads(y).
ForestPair multiply(const ForestPair& x, const ForestPair& y);
ForestPair invert(const ForestPair& x);
// Equality as elements, via the common refinement of the domains.
bool equal(const ForestPair& x, const ForestPair& y);
ForestPair direct_sum(const ForestPair& x, const ForestPair& y);

struct BoundaryPoint {
    int root = 1;
    Word word;
    friend bool operator==(const BoundaryPoint&, const BoundaryPoint&) = default;
};
// Image of the point (root, u); nullopt when u ends before reaching a domain leaf.
std::optional<BoundaryPoint> boundary_eval(const ForestPair& x, const BoundaryPoint& p);
std::optional<Word> boundary_eval(const ForestPair& x, const Word& u);

// "[ cll | (1 2) ; id, f | cll ]"; forests may list several trees separated by commas.
ForestPair parse_element(const std::string& text, int arity, const Names& names);
std::string to_string(const ForestPair& x, const Names& names);

enum class DiagramFormat { Dot, Tikz };
DiagramFormat parse_diagram_format(const std::string& s);
std::string strand_diagram(const ForestPair& x, const Names& names, DiagramFormat format);

// Random helpers for property runs.
Forest random_forest(int roots, int carets, int d, std::mt19937& rng);
ForestPair random_element(int roots, int carets, const std::vector<Aut>& pool, std::mt19937& rng);

}  // namespace nekra
