#include <doctest.h>

#include <algorithm>
#include <random>

#include "nekra/perm.hpp"

using nekra::Permutation;

namespace {

// Independent model of cloning: split strand k into d parallel strands and read off where each
// output position lands.
Permutation split_strand(const Permutation& p, int k, int d) {
    const int n = p.degree();
    std::vector<int> img;
    for (int i = 1; i <= n + d - 1; ++i) {
        int orig = i < k ? i : (i < k + d ? k : i - d + 1);
        int j = i >= k && i < k + d ? i - k : 0;
        int v = p(orig);
        if (v < p(k))
            img.push_back(v);
        else if (v == p(k))
            img.push_back(v + j);
        else
            img.push_back(v + d - 1);
    }
    return Permutation(img);
}

Permutation random_perm(int n, std::mt19937& rng) {
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(v.begin(), v.end(), rng);
    return Permutation(v);
}

}  // namespace

TEST_CASE("parse and print") {
    auto p = Permutation::parse("(1 3 2)(4 5)");
    CHECK(p.one_line() == "[3,1,2,5,4]");
    CHECK(p.cycles() == "(1 3 2)(4 5)");
    CHECK(Permutation::parse("[3,1,2,5,4]") == p);
    CHECK(Permutation::parse("()", 3).is_identity());
    CHECK(Permutation::parse("(1,2)", 4).degree() == 4);
    CHECK_THROWS_AS(Permutation(std::vector<int>{1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Permutation::parse("(1 2)(2 3)"), std::invalid_argument);
    CHECK_THROWS_AS(Permutation::parse("(1 x)"), std::invalid_argument);
}

TEST_CASE("product convention: right factor acts first") {
    auto p = Permutation::parse("(1 3 2)", 3), q = Permutation::parse("(2 3)", 3);
    CHECK((p * q) == Permutation::parse("(1 3)", 3));
    auto t = Permutation::parse("(1 2)", 2);
    CHECK((t * t).is_identity());
    CHECK((Permutation::identity(3) * q) == q);
    CHECK_THROWS_AS(p * t, std::invalid_argument);
}

TEST_CASE("cloning values") {
    CHECK(nekra::clone_perm(Permutation::parse("(1 2 3)", 3), 3, 3) == Permutation::parse("(1 4 2 5 3)", 5));
    CHECK(nekra::clone_perm(Permutation::parse("(1 2)", 2), 1, 2) == Permutation::parse("(1 2 3)", 3));
    CHECK(nekra::clone_perm(Permutation::identity(4), 2, 3).is_identity());
    CHECK_THROWS_AS(nekra::clone_perm(Permutation::identity(2), 3, 2), std::invalid_argument);
}

TEST_CASE("cloning agrees with strand splitting and satisfies the axioms") {
    std::mt19937 rng(7);
    for (int d = 2; d <= 4; ++d)
        for (int n = 1; n <= 7; ++n)
            for (int rep = 0; rep < 30; ++rep) {
                auto s = random_perm(n, rng), t = random_perm(n, rng);
                for (int k = 1; k <= n; ++k) {
                    CHECK(nekra::clone_perm(s, k, d) == split_strand(s, k, d));
                    // product law
                    CHECK(nekra::clone_perm(s * t, k, d) ==
                          nekra::clone_perm(s, t(k), d) * nekra::clone_perm(t, k, d));
                    for (int l = k + 1; l <= n; ++l)
                        CHECK(nekra::clone_perm(nekra::clone_perm(s, l, d), k, d) ==
                              nekra::clone_perm(nekra::clone_perm(s, k, d), l + d - 1, d));
                    if (s != t) CHECK(nekra::clone_perm(s, k, d) != nekra::clone_perm(t, k, d));
                }
            }
}

TEST_CASE("block embedding and direct sum") {
    auto tau = Permutation::parse("(1 2)", 2);
    CHECK(nekra::block_embed(tau, 2, 4) == Permutation::parse("(2 3)", 4));
    CHECK(nekra::direct_sum(tau, tau) == Permutation::parse("(1 2)(3 4)", 4));
    CHECK_THROWS(nekra::block_embed(tau, 4, 4));
}
