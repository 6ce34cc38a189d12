#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "nekra/complex.hpp"

using namespace nekra;

namespace {

CosetVertex vertex(const HContext& ctx, const std::string& literal) {
    return vertex_of(ctx, parse_element(literal, ctx.arity, ctx.names));
}

}  // namespace

TEST_CASE("homology of small complexes") {
    auto simplex = SimplicialComplex::from_facets({{0, 1, 2, 3}});
    CHECK(homology(simplex, 2).reduced_betti == std::vector<long>{0, 0, 0});
    auto circle = SimplicialComplex::from_facets({{0, 1}, {1, 2}, {0, 2}});
    CHECK(homology(circle, 1).reduced_betti == std::vector<long>{0, 1});
    auto two_points = SimplicialComplex::from_facets({{0}, {1}});
    CHECK(homology(two_points, 0).reduced_betti == std::vector<long>{1});
    // Octahedron boundary: a 2-sphere as a flag complex.
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j)
            if (j != i + 3) edges.emplace_back(i, j);
    auto sphere = SimplicialComplex::flag(6, edges, 3);
    CHECK(sphere.count(2) == 8);
    CHECK(sphere.count(3) == 0);
    CHECK(homology(sphere, 2).reduced_betti == std::vector<long>{0, 0, 1});
}

TEST_CASE("torsion of the projective plane") {
    // Six-vertex triangulation.
    auto rp2 = SimplicialComplex::from_facets({{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 1, 5},
                                               {1, 2, 4}, {2, 3, 5}, {1, 3, 4}, {1, 3, 5}, {2, 4, 5}});
    auto h = homology(rp2, 2);
    CHECK(h.reduced_betti == std::vector<long>{0, 0, 0});
    CHECK(h.torsion_known);
    CHECK(h.torsion[1] == std::vector<long>{2});
}

TEST_CASE("sublevel complex of Thompson's group") {
    auto v2 = thompson_context(2);
    auto c = build_sublevel(v2, 4);
    CHECK(c.vertices.size() == 1 + 1 + 2 + 5);
    CHECK(c.index_of(base_vertex(v2)) == std::size_t{0});
    auto cells = stein_cells(v2, c);
    int squares = 0;
    for (const auto& cell : cells)
        if (cell.dimension() == 2) ++squares;
    // [cll] with both feet split gives the only square inside phi <= 4.
    CHECK(squares == 1);
    CHECK_THROWS(build_sublevel(v2, 0));
}

TEST_CASE("cells with artifacts") {
    auto grig = grigorchuk_context();
    auto c = build_sublevel(grig, 3);
    auto cells = stein_cells(grig, c);
    // At the base: {1, twisted, double} is a triangle containing the plain split as well.
    bool triangle = false;
    auto dd = *c.index_of(vertex(grig, "[ cclll | () ; id, id, id | l,l,l ]"));
    for (const auto& cell : cells)
        if (cell.base == 0 && cell.sizes == std::vector<int>{3}) {
            triangle = true;
            CHECK(cell.vertices.back() == dd);
        }
    CHECK(triangle);
    for (const auto& cell : cells)
        for (auto v : cell.vertices) CHECK(c.leq[cell.base][v]);
}

TEST_CASE("descending link of V_2 at m = 12") {
    auto v2 = thompson_context(2);
    auto L = descending_link(v2, 12);
    CHECK(L.vertices.size() == 132);  // ordered pairs of feet
    CHECK(L.edges.size() == 5940);    // disjoint pairs
    CHECK(L.nested_edges == 0);
    CHECK(L.ground.size() == 6);
    auto cert = connectivity_certificate(L);
    CHECK(cert.ground_dimension == 5);
    CHECK(cert.max_missed == 2);
    CHECK(cert.bound_holds);
    CHECK(cert.bound_c == 1);
    CHECK(cert.observed_c == 2);
    CHECK(cert.connectivity() == 1);
    CHECK(cert.formula == 1);
    auto K = SimplicialComplex::flag(static_cast<int>(L.vertices.size()), L.edges, 2);
    CHECK(K.count(2) == 110880);
    auto h = homology(K, 1);
    CHECK(h.reduced_betti == std::vector<long>{0, 0});
}

TEST_CASE("splittings of link vertices") {
    auto v2 = thompson_context(2);
    auto L = descending_link(v2, 3);
    CHECK(L.vertices.size() == 6);
    for (int i = 0; i < 6; ++i) {
        ForestPair s = L.splitting(i);
        CHECK(s.heads() == 2);
        CHECK(s.feet() == 3);
        CHECK(s.range.carets() == 1);
    }
    auto small = descending_link(v2, 1);
    CHECK(small.vertices.empty());
    CHECK(connectivity_certificate(small).connectivity() == -1);
}

TEST_CASE("descending link with artifacts") {
    auto grig = grigorchuk_context();
    auto L = descending_link(grig, 3);
    // Length-1 mergings of ordered pairs up to the left action, plus length-2 ones.
    int length2 = 0;
    for (const auto& v : L.vertices) length2 += v.length() == 2;
    CHECK(length2 > 0);
    CHECK(L.nested_edges > 0);
    for (auto [a, b] : L.edges) CHECK(L.adjacent(b, a));
}

TEST_CASE("stabilizer embedding") {
    auto grig = grigorchuk_context();
    auto x = vertex(grig, "[ cclll | () ; id, id, id | l,l,l ]");
    auto& n = grig.names;
    std::mt19937 rng(11);
    const auto& H = grig.h_elements();
    for (int i = 0; i < 30; ++i) {
        // Conjugates of S_3 wr H by x stabilize [x].
        auto rand_w = [&] {
            std::vector<int> img{1, 2, 3};
            std::shuffle(img.begin(), img.end(), rng);
            return WreathElement(Permutation(img), {H[rng() % 4], H[rng() % 4], H[rng() % 4]});
        };
        WreathElement u = rand_w(), v = rand_w();
        ForestPair X = x.element();
        auto conj = [&](const WreathElement& w) {
            return multiply(multiply(X, ForestPair(Forest::trivial(3, 2), w, Forest::trivial(3, 2))), invert(X));
        };
        auto eu = stabilizer_embed(grig, conj(u), x);
        auto ev = stabilizer_embed(grig, conj(v), x);
        auto euv = stabilizer_embed(grig, multiply(conj(u), conj(v)), x);
        REQUIRE(eu);
        REQUIRE(ev);
        REQUIRE(euv);
        CHECK(*euv == *eu * *ev);
    }
    CHECK_FALSE(stabilizer_embed(grig, parse_element("[ l | () ; a | l ]", 2, n), x));
}

TEST_CASE("dumps") {
    auto v2 = thompson_context(2);
    auto c = build_sublevel(v2, 3);
    auto text = dump_sublevel(c, v2.names);
    CHECK(text.find("vertex\t0\t1\t") != std::string::npos);
    auto dot = hasse_dot(c);
    CHECK(dot.find("v0 -> v1;") != std::string::npos);
    CHECK(dot.find("v0 -> v2;") == std::string::npos);
    auto link = dump_link(descending_link(v2, 2), v2.names);
    CHECK(link.find("ground\t") != std::string::npos);
}

TEST_CASE("cells meet in faces") {
    for (const auto& [ctx, q] : {std::pair{thompson_context(2), 5}, std::pair{grigorchuk_context(), 4}}) {
        auto c = build_sublevel(ctx, q);
        auto cells = stein_cells(ctx, c);
        std::set<std::vector<std::size_t>> faces;
        for (const auto& cell : cells) faces.insert(cell.vertices);
        for (std::size_t i = 0; i < cells.size(); ++i)
            for (std::size_t j = i + 1; j < cells.size(); ++j) {
                std::vector<std::size_t> common;
                std::set_intersection(cells[i].vertices.begin(), cells[i].vertices.end(), cells[j].vertices.begin(),
                                      cells[j].vertices.end(), std::back_inserter(common));
                if (!common.empty()) REQUIRE(faces.count(common) == 1);
            }
        // The top vertex of a cell sits above its base by the number of vertices of each factor.
        for (const auto& cell : cells) {
            int extra = 0;
            for (int s : cell.sizes) extra += s - 1;
            int top = c.vertices[cell.vertices.back()].phi();
            CHECK(top - c.vertices[cell.base].phi() >= extra * (ctx.arity - 1));
        }
    }
}

TEST_CASE("certificate agrees with homology") {
    auto v2 = thompson_context(2);
    for (int m = 2; m <= 12; ++m) {
        auto L = descending_link(v2, m);
        auto cert = connectivity_certificate(L);
        if (cert.connectivity() < 0) continue;
        auto K = SimplicialComplex::flag(static_cast<int>(L.vertices.size()), L.edges, cert.connectivity() + 1);
        auto h = homology(K, cert.connectivity());
        for (long b : h.reduced_betti) CHECK(b == 0);
    }
}
