#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nekra/groupoid.hpp"

namespace nekra {

// Vertices of the sublevel set phi <= q above [1_heads]_H, with the order and elementary relations.
struct SublevelComplex {
    int q = 1;
    int heads = 1;
    std::vector<CosetVertex> vertices;         // sorted by (phi, vertex)
    std::vector<std::vector<char>> leq;        // leq[i][j]: vertex i <= vertex j
    std::vector<std::vector<char>> elementary; // i <= j and the interval [i, j] is elementary
    std::optional<std::size_t> index_of(const CosetVertex& v) const;
};

SublevelComplex build_sublevel(const HContext& ctx, int q, int heads = 1, bool relations = true);

// <x | S_1, ..., S_m>: sizes[i] = |S_i|; vertices index into the sublevel complex.
struct Polysimplex {
    std::size_t base = 0;
    std::vector<int> sizes;
    std::vector<std::size_t> vertices;  // sorted
    int dimension() const;
};
// All cells whose vertices lie in the sublevel set, deduplicated by vertex set.
std::vector<Polysimplex> stein_cells(const HContext& ctx, const SublevelComplex& c, std::size_t cap = 100'000);

// ---- descending links ---------------------------------------------------------

// A simple elementary merging of 1_m up to the left action of S_n wr H: the feet in `feet`
// are merged, in this order, along the leaves of `tree` with the given entries.
struct LinkVertex {
    Forest tree;               // one root
    std::vector<int> feet;     // feet of 1_m, 1-based, one per leaf of the tree
    std::vector<Aut> entries;  // aligned with feet
    int length() const { return tree.carets(); }
    std::vector<int> support() const;  // sorted
    friend bool operator==(const LinkVertex&, const LinkVertex&) = default;
    friend auto operator<=>(const LinkVertex&, const LinkVertex&) = default;
};

struct DescendingLink {
    int m = 0;
    int arity = 2;
    std::vector<LinkVertex> vertices;
    std::vector<std::pair<int, int>> edges;  // i < j
    std::size_t nested_edges = 0;
    std::vector<int> ground;  // indices of the ground simplex vertices
    bool adjacent(int i, int j) const;
    // The splitting Lambda with [1_m Lambda^{-1}]_H equal to vertex i: n heads, m feet.
    ForestPair splitting(int i) const;

    std::vector<std::vector<char>> adjacency;
};

// lk of [x]_H for any x with m feet; the left groupoid action identifies it with lk of [1_m]_H.
DescendingLink descending_link(const HContext& ctx, int m);

struct ConnectivityCertificate {
    int ground_dimension = -1;
    int bound_k = 0;        // 2(d-1)+1
    int max_missed = 0;     // largest number of ground vertices a link vertex fails to see
    bool bound_holds = false;  // max_missed <= bound_k
    int bound_c = 0;        // largest c with c * bound_k <= ground_dimension
    int observed_c = 0;     // same with k = max(max_missed, 1)
    int formula = 0;        // floor(floor(m/d) / (2(d-1)+1)) - 1
    // Certified connectivity: a ground simplex of dimension c*k whose vertices each miss at most k gives (c-1)-connected.
    int connectivity() const { return observed_c - 1; }
};
ConnectivityCertificate connectivity_certificate(const DescendingLink& L);

// ---- homology ---------------------------------------------------------------

struct SimplicialComplex {
    int vertex_count = 0;
    std::vector<std::vector<std::vector<int>>> simplices;  // [k] = sorted k-simplices, each sorted
    // Clique complex of a graph up to the given dimension.
    static SimplicialComplex flag(int n, const std::vector<std::pair<int, int>>& edges, int max_dim);
    // Downward closure of the facets.
    static SimplicialComplex from_facets(const std::vector<std::vector<int>>& facets);
    std::size_t count(int k) const { return k < static_cast<int>(simplices.size()) ? simplices[static_cast<std::size_t>(k)].size() : 0; }
};

struct HomologyResult {
    std::vector<long> reduced_betti;           // b~_0 .. b~_max_dim
    std::vector<std::vector<long>> torsion;    // invariant factors > 1 per degree
    bool torsion_known = true;
};
// Reduced integral homology in degrees 0..max_dim; needs simplices up to max_dim + 1.
HomologyResult homology(const SimplicialComplex& K, int max_dim);

// ---- stabilizers -------------------------------------------------------------

// x^{-1} g x as an element of S_n wr H, or nullopt when g does not fix [x]_H.
std::optional<WreathElement> stabilizer_embed(const HContext& ctx, const ForestPair& g, const CosetVertex& x);

// ---- dumps ---------------------------------------------------------------------

std::string dump_sublevel(const SublevelComplex& c, const Names& names);
std::string hasse_dot(const SublevelComplex& c);
std::string dump_link(const DescendingLink& L, const Names& names);

}  // namespace nekra
