#include "nekra/complex.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace nekra {

// ---- sublevel sets -----------------------------------------------------------

std::optional<std::size_t> SublevelComplex::index_of(const CosetVertex& v) const {
    auto less = [](const CosetVertex& a, const CosetVertex& b) {
        return a.phi() != b.phi() ? a.phi() < b.phi() : a < b;
    };
    auto it = std::lower_bound(vertices.begin(), vertices.end(), v, less);
    if (it != vertices.end() && *it == v) return static_cast<std::size_t>(it - vertices.begin());
    return std::nullopt;
}

SublevelComplex build_sublevel(const HContext& ctx, int q, int heads, bool relations) {
    ctx.require_checks();
    if (q < heads) throw std::invalid_argument("q must be at least the number of heads");
    if ((q - heads) % (ctx.arity - 1) != 0)
        throw std::invalid_argument("q must be congruent to the number of heads mod d-1");
    SublevelComplex c;
    c.q = q;
    c.heads = heads;
    c.vertices = upward_closure(ctx, base_vertex(ctx, heads), q);
    std::sort(c.vertices.begin(), c.vertices.end(), [](const CosetVertex& a, const CosetVertex& b) {
        return a.phi() != b.phi() ? a.phi() < b.phi() : a < b;
    });
    if (!relations) return c;
    const std::size_t n = c.vertices.size();
    c.leq.assign(n, std::vector<char>(n, 0));
    c.elementary.assign(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && c.vertices[i].phi() >= c.vertices[j].phi()) continue;
            if (!poset_leq(ctx, c.vertices[i], c.vertices[j])) continue;
            c.leq[i][j] = 1;
            c.elementary[i][j] = is_elementary(ctx, c.vertices[i], c.vertices[j]);
        }
    return c;
}

int Polysimplex::dimension() const {
    int d = 0;
    for (int s : sizes) d += s - 1;
    return d;
}

std::vector<Polysimplex> stein_cells(const HContext& ctx, const SublevelComplex& c, std::size_t cap) {
    std::vector<Polysimplex> out;
    std::set<std::vector<std::size_t>> seen;
    for (std::size_t b = 0; b < c.vertices.size(); ++b) {
        const CosetVertex& x = c.vertices[b];
        const int budget = c.q - x.phi();
        // Elementary sets per foot, each as its chain of nontrivial members.
        std::vector<std::vector<std::vector<CosetVertex>>> options(static_cast<std::size_t>(x.phi()));
        for (int i = 1; i <= x.phi(); ++i) {
            auto& opts = options[static_cast<std::size_t>(i - 1)];
            opts.push_back({});
            std::set<CosetVertex> splits;
            for (Aut h : ctx.h_elements()) splits.insert(split_at(ctx, x, i, h));
            for (const auto& s : splits) opts.push_back({s});
            if (!ctx.artifacts_trivial()) {
                std::set<CosetVertex> doubles;
                for (auto a = splits.begin(); a != splits.end(); ++a)
                    for (auto b = std::next(a); b != splits.end(); ++b) doubles.insert(lub_length1(ctx, x, {*a, *b}));
                for (const auto& twice : doubles) {
                    for (const auto& s : splits)
                        if (poset_leq(ctx, s, twice)) opts.push_back({s, twice});
                    opts.push_back({twice});
                }
            }
        }
        std::vector<std::size_t> choice(options.size(), 0);
        std::function<void(std::size_t, int)> pick = [&](std::size_t foot, int used) {
            if (foot == options.size()) {
                Polysimplex cell;
                cell.base = b;
                std::vector<std::pair<int, const std::vector<CosetVertex>*>> factors;
                for (std::size_t i = 0; i < options.size(); ++i) {
                    const auto& chain = options[i][choice[i]];
                    cell.sizes.push_back(static_cast<int>(chain.size()) + 1);
                    if (!chain.empty()) factors.push_back({static_cast<int>(i + 1), &chain});
                }
                std::vector<std::size_t> pos(factors.size(), 0);
                for (;;) {
                    std::map<int, CosetVertex> local;
                    for (std::size_t f = 0; f < factors.size(); ++f)
                        if (pos[f]) local.emplace(factors[f].first, (*factors[f].second)[pos[f] - 1]);
                    auto idx = c.index_of(apply_local(ctx, x, local));
                    if (!idx) return;  // leaves the sublevel set
                    cell.vertices.push_back(*idx);
                    std::size_t f = 0;
                    while (f < factors.size() && ++pos[f] > factors[f].second->size()) pos[f++] = 0;
                    if (f == factors.size()) break;
                }
                std::sort(cell.vertices.begin(), cell.vertices.end());
                if (seen.insert(cell.vertices).second) {
                    if (out.size() >= cap) throw ResourceCap("more than " + std::to_string(cap) + " cells");
                    out.push_back(std::move(cell));
                }
                return;
            }
            for (std::size_t o = 0; o < options[foot].size(); ++o) {
                const auto& chain = options[foot][o];
                int extra = chain.empty() ? 0 : chain.back().phi() - x.phi();
                if (used + extra > budget) continue;
                choice[foot] = o;
                pick(foot + 1, used + extra);
            }
            choice[foot] = 0;
        };
        pick(0, 0);
    }
    return out;
}

// ---- descending links ------------------------------------------------------------

std::vector<int> LinkVertex::support() const {
    std::vector<int> s = feet;
    std::sort(s.begin(), s.end());
    return s;
}

bool DescendingLink::adjacent(int i, int j) const {
    return adjacency[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0;
}

ForestPair DescendingLink::splitting(int i) const {
    const LinkVertex& v = vertices.at(static_cast<std::size_t>(i));
    const int L = v.tree.leaves();
    const int n = m - L + 1;
    Forest range = n > 1 ? direct_sum(v.tree, Forest::trivial(n - 1, arity)) : v.tree;
    std::vector<int> img(static_cast<std::size_t>(m), 0);
    std::vector<Aut> entries(static_cast<std::size_t>(m), Aut::identity(arity));
    for (int j = 0; j < L; ++j) {
        img[static_cast<std::size_t>(v.feet[static_cast<std::size_t>(j)] - 1)] = j + 1;
        entries[static_cast<std::size_t>(v.feet[static_cast<std::size_t>(j)] - 1)] = v.entries[static_cast<std::size_t>(j)];
    }
    int next = L + 1;
    for (auto& x : img)
        if (!x) x = next++;
    return ForestPair(range, WreathElement(Permutation(img), entries), Forest::trivial(m, arity));
}

namespace {

// Smallest representative of a merging under the left action of H at the merged root.
LinkVertex canonical_link_vertex(const HContext& ctx, const Forest& tree, const std::vector<int>& feet,
                                 const std::vector<Aut>& entries) {
    const int L = tree.leaves();
    ForestPair local(tree, WreathElement(Permutation::identity(L), entries), Forest::trivial(L, ctx.arity));
    LinkVertex best{tree, feet, entries};
    for (Aut k : ctx.h_elements()) {
        if (k.is_identity()) continue;
        ForestPair y = multiply(ForestPair::of(k), local);
        if (!y.domain.is_trivial()) throw std::logic_error("left action produced a nontrivial domain");
        Permutation inv = y.w.sigma.inverse();
        LinkVertex cand{y.range, {}, {}};
        for (int j = 1; j <= L; ++j) {
            cand.feet.push_back(feet[static_cast<std::size_t>(inv(j) - 1)]);
            cand.entries.push_back(y.w.entries[static_cast<std::size_t>(inv(j) - 1)]);
        }
        if (cand < best) best = std::move(cand);
    }
    return best;
}

// z = k [wedge at one root] h for some k in S wr H on the left and h in S wr H on the right.
bool is_simple_length1_splitting(const HContext& ctx, const ForestPair& z) {
    if (!z.domain.is_trivial() || z.range.carets() != 1) return false;
    int root = 0;
    for (int r = 1; r <= z.heads() && !root; ++r) {
        auto [first, last] = z.range.leaves_of_root(r);
        if (last > first) root = r;
    }
    for (Aut k : ctx.h_elements()) {
        WreathElement left = at_position(inverse(k), root, z.heads());
        ForestPair adjusted = multiply(ForestPair(Forest::trivial(z.heads(), ctx.arity), left,
                                                  Forest::trivial(z.heads(), ctx.arity)),
                                       z);
        if (!adjusted.domain.is_trivial()) continue;
        bool all_in = std::all_of(adjusted.w.entries.begin(), adjusted.w.entries.end(),
                                  [&](Aut h) { return ctx.in_H(h) == Verdict::Pass; });
        if (all_in) return true;
    }
    return false;
}

}  // namespace

DescendingLink descending_link(const HContext& ctx, int m) {
    ctx.require_checks();
    const int d = ctx.arity;
    DescendingLink link;
    link.m = m;
    link.arity = d;
    std::vector<Forest> shapes{Forest::trivial(1, d).add_caret(1)};
    if (!ctx.artifacts_trivial()) shapes.push_back(shapes[0].add_caret(1));
    std::set<LinkVertex> found;
    const auto& H = ctx.h_elements();
    for (const auto& tree : shapes) {
        const int L = tree.leaves();
        if (L > m) continue;
        std::vector<int> feet(static_cast<std::size_t>(L));
        std::vector<char> used(static_cast<std::size_t>(m + 1), 0);
        std::function<void(int)> place = [&](int j) {
            if (j == L) {
                std::vector<std::size_t> idx(static_cast<std::size_t>(L), 0);
                for (;;) {
                    std::vector<Aut> entries;
                    for (auto i : idx) entries.push_back(H[i]);
                    found.insert(canonical_link_vertex(ctx, tree, feet, entries));
                    std::size_t p = 0;
                    while (p < idx.size() && ++idx[p] == H.size()) idx[p++] = 0;
                    if (p == idx.size()) break;
                }
                return;
            }
            for (int f = 1; f <= m; ++f) {
                if (used[static_cast<std::size_t>(f)]) continue;
                used[static_cast<std::size_t>(f)] = 1;
                feet[static_cast<std::size_t>(j)] = f;
                place(j + 1);
                used[static_cast<std::size_t>(f)] = 0;
            }
        };
        place(0);
    }
    link.vertices.assign(found.begin(), found.end());
    const int n = static_cast<int>(link.vertices.size());
    link.adjacency.assign(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
    std::vector<std::vector<int>> supports;
    for (const auto& v : link.vertices) supports.push_back(v.support());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const auto& a = supports[static_cast<std::size_t>(i)];
            const auto& b = supports[static_cast<std::size_t>(j)];
            std::vector<int> common;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
            bool edge = common.empty();
            if (!edge && a.size() != b.size() && common.size() == std::min(a.size(), b.size())) {
                // Properly nested: the bigger merging must factor through the smaller by a simple one.
                int big = a.size() > b.size() ? i : j, small = big == i ? j : i;
                edge = is_simple_length1_splitting(ctx, multiply(link.splitting(big), invert(link.splitting(small))));
                if (edge) ++link.nested_edges;
            }
            if (edge) {
                link.edges.emplace_back(i, j);
                link.adjacency[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
                link.adjacency[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = 1;
            }
        }
    const Forest wedge = shapes[0];
    for (int i = 0; i < m / d; ++i) {
        std::vector<int> feet;
        for (int j = 1; j <= d; ++j) feet.push_back(d * i + j);
        auto v = canonical_link_vertex(ctx, wedge, feet, std::vector<Aut>(static_cast<std::size_t>(d), Aut::identity(d)));
        auto it = std::lower_bound(link.vertices.begin(), link.vertices.end(), v);
        if (it == link.vertices.end() || *it != v) throw std::logic_error("ground simplex vertex missing from the link");
        link.ground.push_back(static_cast<int>(it - link.vertices.begin()));
    }
    return link;
}

ConnectivityCertificate connectivity_certificate(const DescendingLink& L) {
    ConnectivityCertificate c;
    const int d = L.arity;
    c.ground_dimension = static_cast<int>(L.ground.size()) - 1;
    for (std::size_t a = 0; a < L.ground.size(); ++a)
        for (std::size_t b = a + 1; b < L.ground.size(); ++b)
            if (!L.adjacent(L.ground[a], L.ground[b])) throw std::logic_error("ground vertices are not pairwise adjacent");
    c.bound_k = 2 * (d - 1) + 1;
    for (int v = 0; v < static_cast<int>(L.vertices.size()); ++v) {
        int missed = 0;
        for (int g : L.ground)
            if (g == v || !L.adjacent(v, g)) ++missed;
        c.max_missed = std::max(c.max_missed, missed);
    }
    c.bound_holds = c.max_missed <= c.bound_k;
    if (c.ground_dimension > 0) {
        c.bound_c = c.ground_dimension / c.bound_k;
        c.observed_c = c.bound_holds ? c.ground_dimension / std::max(c.max_missed, 1) : 0;
    }
    c.formula = (L.m / d) / c.bound_k - 1;
    return c;
}

// ---- homology ---------------------------------------------------------------------

SimplicialComplex SimplicialComplex::flag(int n, const std::vector<std::pair<int, int>>& edges, int max_dim) {
    SimplicialComplex K;
    K.vertex_count = n;
    K.simplices.resize(static_cast<std::size_t>(std::max(max_dim, 0) + 1));
    std::vector<std::vector<int>> nbr(static_cast<std::size_t>(n));
    for (auto [a, b] : edges) {
        nbr[static_cast<std::size_t>(a)].push_back(b);
        nbr[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& l : nbr) std::sort(l.begin(), l.end());
    std::vector<int> clique;
    std::function<void(const std::vector<int>&)> grow = [&](const std::vector<int>& candidates) {
        K.simplices[clique.size() - 1].push_back(clique);
        if (static_cast<int>(clique.size()) > max_dim) return;
        for (int v : candidates) {
            std::vector<int> next;
            const auto& nv = nbr[static_cast<std::size_t>(v)];
            std::set_intersection(candidates.begin(), candidates.end(), nv.begin(), nv.end(), std::back_inserter(next));
            next.erase(next.begin(), std::upper_bound(next.begin(), next.end(), v));
            clique.push_back(v);
            grow(next);
            clique.pop_back();
        }
    };
    for (int v = 0; v < n; ++v) {
        clique = {v};
        std::vector<int> next;
        for (int w : nbr[static_cast<std::size_t>(v)])
            if (w > v) next.push_back(w);
        grow(next);
    }
    for (auto& layer : K.simplices) std::sort(layer.begin(), layer.end());
    return K;
}

SimplicialComplex SimplicialComplex::from_facets(const std::vector<std::vector<int>>& facets) {
    std::vector<std::set<std::vector<int>>> layers;
    int n = 0;
    for (auto f : facets) {
        std::sort(f.begin(), f.end());
        if (!f.empty()) n = std::max(n, f.back() + 1);
        const std::size_t k = f.size();
        if (layers.size() < k) layers.resize(k);
        for (unsigned mask = 1; mask < (1u << k); ++mask) {
            std::vector<int> face;
            for (std::size_t i = 0; i < k; ++i)
                if (mask & (1u << i)) face.push_back(f[i]);
            layers[face.size() - 1].insert(face);
        }
    }
    SimplicialComplex K;
    K.vertex_count = n;
    for (auto& l : layers) K.simplices.emplace_back(l.begin(), l.end());
    return K;
}

namespace {

using Column = std::vector<std::pair<int, long long>>;  // (row, coefficient), rows ascending

long long checked(long long a, long long b, long long c, long long d) {
    long long x, y, z;
    if (__builtin_mul_overflow(a, b, &x) || __builtin_mul_overflow(c, d, &y) || __builtin_add_overflow(x, y, &z))
        throw ResourceCap("integer overflow during homology reduction");
    return z;
}

// s*u + t*v
Column combine(long long s, const Column& u, long long t, const Column& v) {
    Column out;
    out.reserve(u.size() + v.size());
    std::size_t i = 0, j = 0;
    while (i < u.size() || j < v.size()) {
        if (j == v.size() || (i < u.size() && u[i].first < v[j].first)) {
            long long x = checked(s, u[i].second, 0, 0);
            if (x) out.emplace_back(u[i].first, x);
            ++i;
        } else if (i == u.size() || v[j].first < u[i].first) {
            long long x = checked(t, v[j].second, 0, 0);
            if (x) out.emplace_back(v[j].first, x);
            ++j;
        } else {
            long long x = checked(s, u[i].second, t, v[j].second);
            if (x) out.emplace_back(u[i].first, x);
            ++i;
            ++j;
        }
    }
    return out;
}

struct Reduction {
    long rank = 0;
    bool unit_pivots = true;
};

// Unimodular column reduction; stops early once the rank reaches `cap`.
Reduction reduce(const std::vector<Column>& columns, int rows, long cap) {
    Reduction r;
    std::vector<int> pivot_of_row(static_cast<std::size_t>(rows), -1);
    std::vector<Column> pivots;
    for (const auto& input : columns) {
        if (r.rank >= cap) break;
        Column c = input;
        while (!c.empty()) {
            const int low = c.back().first;
            int p = pivot_of_row[static_cast<std::size_t>(low)];
            if (p < 0) {
                pivot_of_row[static_cast<std::size_t>(low)] = static_cast<int>(pivots.size());
                pivots.push_back(std::move(c));
                ++r.rank;
                break;
            }
            Column& P = pivots[static_cast<std::size_t>(p)];
            const long long a = P.back().second, b = c.back().second;
            if (b % a == 0) {
                c = combine(1, c, -(b / a), P);
            } else {
                // Extended gcd: s a + t b = g.
                long long old_r = a, rr = b, old_s = 1, s = 0, old_t = 0, t = 1;
                while (rr) {
                    long long q = old_r / rr;
                    std::tie(old_r, rr) = std::make_pair(rr, old_r - q * rr);
                    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
                    std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
                }
                const long long g = old_r;
                Column next_pivot = combine(old_s, P, old_t, c);
                c = combine(a / g, c, -(b / g), P);
                P = std::move(next_pivot);
            }
        }
    }
    for (const auto& P : pivots)
        if (P.back().second != 1 && P.back().second != -1) r.unit_pivots = false;
    return r;
}

// Invariant factors of a small dense integer matrix.
std::vector<long long> smith_invariants(std::vector<std::vector<long long>> a) {
    std::vector<long long> out;
    const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    std::size_t t = 0;
    while (t < rows && t < cols) {
        // Smallest nonzero entry in the remaining block as pivot.
        std::size_t pr = rows, pc = cols;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (a[i][j] && (pr == rows || std::llabs(a[i][j]) < std::llabs(a[pr][pc]))) {
                    pr = i;
                    pc = j;
                }
        if (pr == rows) break;
        std::swap(a[t], a[pr]);
        for (auto& row : a) std::swap(row[t], row[pc]);
        bool clean = true;
        for (std::size_t i = t + 1; i < rows; ++i) {
            long long q = a[i][t] / a[t][t];
            for (std::size_t j = t; j < cols; ++j) a[i][j] = checked(1, a[i][j], -q, a[t][j]);
            if (a[i][t]) clean = false;
        }
        for (std::size_t j = t + 1; j < cols; ++j) {
            long long q = a[t][j] / a[t][t];
            for (std::size_t i = t; i < rows; ++i) a[i][j] = checked(1, a[i][j], -q, a[i][t]);
            if (a[t][j]) clean = false;
        }
        if (!clean) continue;
        // Divisibility: fold a non-divisible entry into the pivot row.
        bool divisible = true;
        for (std::size_t i = t + 1; i < rows && divisible; ++i)
            for (std::size_t j = t + 1; j < cols; ++j)
                if (a[i][j] % a[t][t]) {
                    for (std::size_t k = t; k < cols; ++k) a[t][k] = checked(1, a[t][k], 1, a[i][k]);
                    divisible = false;
                    break;
                }
        if (!divisible) continue;
        out.push_back(std::llabs(a[t][t]));
        ++t;
    }
    return out;
}

}  // namespace

HomologyResult homology(const SimplicialComplex& K, int max_dim) {
    HomologyResult res;
    auto count = [&](int k) { return static_cast<long>(K.count(k)); };
    // ranks[k] = rank of the boundary C_k -> C_{k-1}; ranks[0] is the augmentation.
    std::vector<long> ranks(static_cast<std::size_t>(max_dim + 2), 0);
    ranks[0] = count(0) > 0 ? 1 : 0;
    std::vector<std::vector<long>> torsion(static_cast<std::size_t>(max_dim + 1));
    for (int k = 1; k <= max_dim + 1; ++k) {
        if (count(k) == 0) continue;
        const auto& faces = K.simplices[static_cast<std::size_t>(k - 1)];
        std::vector<Column> cols;
        cols.reserve(K.simplices[static_cast<std::size_t>(k)].size());
        for (const auto& s : K.simplices[static_cast<std::size_t>(k)]) {
            Column col;
            for (std::size_t i = 0; i < s.size(); ++i) {
                std::vector<int> face = s;
                face.erase(face.begin() + static_cast<long>(i));
                auto it = std::lower_bound(faces.begin(), faces.end(), face);
                if (it == faces.end() || *it != face) throw std::invalid_argument("complex is not closed under faces");
                col.emplace_back(static_cast<int>(it - faces.begin()), i % 2 ? -1 : 1);
            }
            std::sort(col.begin(), col.end());
            cols.push_back(std::move(col));
        }
        const long cap = count(k - 1) - ranks[static_cast<std::size_t>(k - 1)];
        Reduction r = reduce(cols, static_cast<int>(count(k - 1)), cap);
        ranks[static_cast<std::size_t>(k)] = r.rank;
        if (r.unit_pivots) continue;
        if (count(k) * count(k - 1) > 4'000'000) {
            res.torsion_known = false;
            continue;
        }
        std::vector<std::vector<long long>> dense(static_cast<std::size_t>(count(k - 1)),
                                                  std::vector<long long>(static_cast<std::size_t>(count(k)), 0));
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (auto [row, v] : cols[j]) dense[static_cast<std::size_t>(row)][j] = v;
        for (long long f : smith_invariants(std::move(dense)))
            if (f > 1) torsion[static_cast<std::size_t>(k - 1)].push_back(f);
    }
    for (int k = 0; k <= max_dim; ++k)
        res.reduced_betti.push_back(count(k) - ranks[static_cast<std::size_t>(k)] - ranks[static_cast<std::size_t>(k + 1)]);
    res.torsion = std::move(torsion);
    return res;
}

// ---- stabilizers ---------------------------------------------------------------

std::optional<WreathElement> stabilizer_embed(const HContext& ctx, const ForestPair& g, const CosetVertex& x) {
    if (g.heads() != x.heads() || g.feet() != x.heads()) throw std::invalid_argument("element and vertex do not compose");
    ForestPair X = x.element();
    ForestPair z = multiply(multiply(invert(X), g), X);
    if (!z.range.is_trivial() || !z.domain.is_trivial()) return std::nullopt;
    for (Aut h : z.w.entries) {
        Verdict v = ctx.in_H(h);
        if (v == Verdict::Fail) return std::nullopt;
        if (v == Verdict::Indeterminate) throw std::runtime_error("membership in H is indeterminate");
    }
    return z.w;
}

// ---- dumps -------------------------------------------------------------------------

std::string dump_sublevel(const SublevelComplex& c, const Names& names) {
    std::ostringstream out;
    out << "# sublevel q=" << c.q << " heads=" << c.heads << " vertices=" << c.vertices.size() << "\n";
    for (std::size_t i = 0; i < c.vertices.size(); ++i)
        out << "vertex\t" << i << "\t" << c.vertices[i].phi() << "\t" << to_string(c.vertices[i], names) << "\n";
    for (std::size_t i = 0; i < c.leq.size(); ++i)
        for (std::size_t j = 0; j < c.leq.size(); ++j)
            if (i != j && c.leq[i][j]) out << (c.elementary[i][j] ? "elementary\t" : "leq\t") << i << "\t" << j << "\n";
    return out.str();
}

std::string hasse_dot(const SublevelComplex& c) {
    std::ostringstream out;
    out << "digraph hasse {\n";
    for (std::size_t i = 0; i < c.vertices.size(); ++i)
        out << "  v" << i << " [label=\"" << c.vertices[i].forest.to_string() << "\"];\n";
    const std::size_t n = c.leq.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || !c.leq[i][j]) continue;
            bool cover = true;
            for (std::size_t k = 0; k < n && cover; ++k)
                if (k != i && k != j && c.leq[i][k] && c.leq[k][j]) cover = false;
            if (cover) out << "  v" << i << " -> v" << j << ";\n";
        }
    out << "}\n";
    return out.str();
}

std::string dump_link(const DescendingLink& L, const Names& names) {
    std::ostringstream out;
    out << "# descending link m=" << L.m << " vertices=" << L.vertices.size() << " edges=" << L.edges.size() << "\n";
    for (std::size_t i = 0; i < L.vertices.size(); ++i) {
        const auto& v = L.vertices[i];
        out << "vertex\t" << i << "\t" << v.tree.to_string() << "\t";
        for (std::size_t j = 0; j < v.feet.size(); ++j) out << (j ? "," : "") << v.feet[j];
        out << "\t";
        for (std::size_t j = 0; j < v.entries.size(); ++j) out << (j ? "," : "") << names.print(v.entries[j]);
        out << "\n";
    }
    for (auto [a, b] : L.edges) out << "edge\t" << a << "\t" << b << "\n";
    out << "ground";
    for (int g : L.ground) out << "\t" << g;
    out << "\n";
    return out.str();
}

}  // namespace nekra
