#include <doctest.h>

#include <algorithm>
#include <set>

#include "nekra/groups.hpp"

using namespace nekra;

namespace {

std::vector<Word> words_of_length(int d, int len) {
    std::vector<Word> out{{}};
    for (int n = 0; n < len; ++n) {
        std::vector<Word> next;
        for (auto& w : out)
            for (int x = 1; x <= d; ++x) {
                auto v = w;
                v.push_back(x);
                next.push_back(v);
            }
        out.swap(next);
    }
    return out;
}

}  // namespace

TEST_CASE("Sunic construction of the Grigorchuk group") {
    auto g = make_sunic(grigorchuk_data());
    Aut a = g.named.at("a"), b = g.named.at("b"), c = g.named.at("c"), d = g.named.at("d");
    CHECK(b.state(1) == a);
    CHECK(b.state(2) == c);
    CHECK(c.state(2) == d);
    CHECK(d.state(1).is_identity());
    CHECK(d.state(2) == b);
    CHECK(b * c == d);
    CHECK(a.perm() == Permutation::parse("(1 2)", 2));
    CHECK(SunicData::parse(grigorchuk_data().to_string()).to_string() == grigorchuk_data().to_string());
}

TEST_CASE("Sunic data validation") {
    // Kernel of omega contains the whole rho-orbit of b.
    CHECK_THROWS_AS(SunicData::parse("d=3; B=Z3{1,b,b2}; omega: b->1, b2->1").validate(), std::invalid_argument);
    CHECK_NOTHROW(fabrykowski_gupta_data().validate());
    CHECK_THROWS(SunicData::parse("d=2; B=K4{1,b,c,d}; omega: b->a, c->a, d->a").validate());
    auto trivial = make_sunic(SunicData::parse("d=3; B=Z1{1}; omega: ; rho: "));
    auto all = enumerate_finite(trivial.generators());
    REQUIRE(all);
    CHECK(all->size() == 3);
    // The last state of each B-generator is its rho-image.
    auto fg = make_sunic(fabrykowski_gupta_data());
    CHECK(fg.named.at("b").state(3) == fg.named.at("b"));
    CHECK(fg.named.at("b").state(1) == fg.a);
}

TEST_CASE("symmetric group embedding") {
    auto f = make_sd_embedding({Permutation::parse("(1 2)", 2)});
    CHECK(evaluate(f[0], parse_word("112")) == parse_word("221"));
    CHECK(make_sd_embedding({Permutation::identity(2)})[0].is_identity());
    auto s3 = make_sd_embedding({Permutation::parse("(1 2)", 3), Permutation::parse("(1 2 3)", 3)});
    auto all = enumerate_finite(s3);
    REQUIRE(all);
    CHECK(all->size() == 6);
    for (Aut x : *all)
        for (int i = 1; i <= 3; ++i) CHECK(std::count(all->begin(), all->end(), x.state(i)) == 1);
}

TEST_CASE("Vorobets generators") {
    auto v = make_vorobets_free(1);
    for (Aut x : v.gens) CHECK(aut_equal(x, Aut::identity(2)) == Verdict::Fail);
    Aut a = v.gens[0], b = v.gens[1];
    CHECK(aut_equal(a * b, b * a) == Verdict::Fail);
    bool differ = false;
    for (int len = 1; len <= 12 && !differ; ++len)
        for (auto& u : words_of_length(2, len))
            if (evaluate(a * b, u) != evaluate(b * a, u)) {
                differ = true;
                break;
            }
    CHECK(differ);
    CHECK_THROWS(make_vorobets_free(1, {Permutation::parse("(1 2)", 2), Permutation::parse("(1 2)", 2)}));
    auto v4 = make_vorobets_free(4);
    CHECK(v4.gens.size() == 7);
    CHECK(level_transitive_binary(v4.gens[0], 20).pass);
}

TEST_CASE("subgroup specs") {
    auto g = make_sunic(grigorchuk_data());
    auto H = SubgroupSpec::finite(g.B);
    CHECK(H.contains(g.named.at("c")) == Verdict::Pass);
    CHECK(H.contains(g.a) == Verdict::Fail);
    CHECK_THROWS(SubgroupSpec::finite({Aut::identity(2), g.named.at("b"), g.named.at("c")}));
    auto gen = SubgroupSpec::generated({g.named.at("b"), g.named.at("c")}, 100);
    CHECK(gen.contains(g.named.at("d")) == Verdict::Pass);
    CHECK(gen.contains(g.a) == Verdict::Fail);
    auto big = SubgroupSpec::generated({g.a, g.named.at("b")}, 5);
    CHECK(big.contains(g.named.at("d")) == Verdict::Indeterminate);
}

TEST_CASE("coarse self-similarity and orderly checks") {
    auto g = make_sunic(grigorchuk_data());
    auto H = SubgroupSpec::finite(g.B);
    std::vector<Aut> A{Aut::identity(2), g.a};
    CHECK(check_coarsely_self_similar(H, A).verdict == Verdict::Pass);
    CHECK(check_orderly(H, A).verdict == Verdict::Pass);
    CHECK(check_coarsely_self_similar(SubgroupSpec::whole(2), {Aut::identity(2)}).verdict == Verdict::Pass);
    CHECK(check_orderly(SubgroupSpec::whole(2), {Aut::identity(2)}).verdict == Verdict::Pass);

    auto gs = make_gupta_sidki();
    Aut a = gs.at("a"), a2 = gs.at("a2"), b = gs.at("b"), e = gs.at("e");
    auto Hb = SubgroupSpec::finite({e, b, b * b});
    CHECK(check_coarsely_self_similar(Hb, {a, a2, e}).verdict == Verdict::Pass);
    auto bad = check_coarsely_self_similar(Hb, {a, e});
    CHECK(bad.verdict == Verdict::Fail);
    CHECK(bad.witness == b);
    CHECK(bad.position == 2);
    auto ord = check_orderly(Hb, {e, a, a2});
    CHECK(ord.verdict == Verdict::Fail);
    CHECK(ord.condition == 2);
    CHECK((ord.witness == b || ord.witness == inverse(b)));
}

TEST_CASE("nuclear check") {
    auto g = make_sunic(grigorchuk_data());
    auto rep = check_nuclear(g.generators(), {"a", "b", "c", "d"}, SubgroupSpec::finite(g.B), 3, 8);
    CHECK(rep.verdict == Verdict::Pass);
    CHECK(rep.entries.size() == 52);
    auto whole = check_nuclear(g.generators(), {"a", "b", "c", "d"}, SubgroupSpec::whole(2), 2, 3);
    for (auto& e : whole.entries) CHECK(e.leaves == std::vector<Word>{Word{}});
    auto v = make_vorobets_free(1);
    auto free_rep = check_nuclear(v.gens, v.names, SubgroupSpec::finite({Aut::identity(2)}), 2, 10);
    CHECK(free_rep.verdict == Verdict::Fail);
    CHECK(free_rep.failing_word == "a");
}

TEST_CASE("free group words") {
    CHECK(free_reduce({1, 2, -2, -1, 3}) == FreeWord{3});
    CHECK(free_mul({1, 2}, free_inverse({1, 2})).empty());
}

TEST_CASE("free table action matches the automaton") {
    auto v = make_vorobets_free(1);
    auto table = FreeTableAction::vorobets(1, {Permutation::identity(2), Permutation::parse("(1 2)", 2)});
    AutomatonAction autos(v.gens, v.names);
    for (FreeWord w : {FreeWord{1}, FreeWord{1, 2}, FreeWord{-3, 4, 1}, FreeWord{2, 2, -1}}) {
        auto k1 = table.element_of_word(w);
        auto k2 = autos.element_of_word(w);
        CHECK(table.perm(k1) == autos.perm(k2));
        for (int x = 1; x <= 2; ++x) {
            auto s1 = table.state(k1, x), s2 = autos.state(k2, x);
            CHECK(table.perm(s1) == autos.perm(s2));
            CHECK(autos.element_of_word(s1) == s2);
        }
    }
}

TEST_CASE("coset table actions") {
    // G = Z/2, K trivial, X = G: the generator swaps the first level.
    auto swap = CosetTableAction::parse("row,0,1\nrow,1,0\ngens,1\nK,0\nX,0,1\nphi,0->0\n");
    auto k = swap.element_of_word({1});
    CHECK(swap.perm(k) == Permutation::parse("(1 2)", 2));
    CHECK(swap.is_trivial_key(swap.state(k, 1)));
    CHECK(swap.is_trivial_key(swap.state(k, 2)));
    // Trivial phi on an index-2 subgroup of Z/4: the square acts trivially.
    auto z4 = CosetTableAction::parse(
        "row,0,1,2,3\nrow,1,2,3,0\nrow,2,3,0,1\nrow,3,0,1,2\ngens,1\nK,0,2\nX,0,1\nphi,0->0,2->0\n");
    auto res = faithfulness_certificate(z4, 2, 6);
    CHECK(res.verdict == Verdict::Fail);
    CHECK(res.witness == "g1g1");
    // K = G with phi trivial: a one-letter tree on which everything acts trivially.
    auto whole = CosetTableAction::parse("row,0,1\nrow,1,0\ngens,1\nK,0,1\nX,0\nphi,0->0,1->0\n");
    CHECK(faithfulness_certificate(whole, 1, 4).verdict == Verdict::Fail);
}

TEST_CASE("faithfulness certificates") {
    auto g = make_sunic(grigorchuk_data());
    AutomatonAction grig(g.generators(), {"a", "b", "c", "d"});
    CHECK(faithfulness_certificate(grig, 2, 4).verdict == Verdict::Pass);
    AutomatonAction with_trivial({g.a, Aut::identity(2)}, {"a", "x"});
    auto r = faithfulness_certificate(with_trivial, 1, 4);
    CHECK(r.verdict == Verdict::Fail);
    CHECK(r.witness == "x");
    auto free = FreeTableAction::vorobets(1, {Permutation::identity(2), Permutation::parse("(1 2)", 2)});
    CHECK(faithfulness_certificate(free, 6, 16).verdict == Verdict::Pass);
}

TEST_CASE("induced action of a virtually free group") {
    // F_2 = <s, t> acting on three cosets through s -> (1 2 3), t -> id; K = Stab(1) has rank 4.
    auto inner = std::make_shared<FreeTableAction>(
        FreeTableAction::vorobets(1, {Permutation::identity(2), Permutation::parse("(1 2)", 2)}));
    InducedAction ind({"s", "t"}, {Permutation::parse("(1 2 3)", 3), Permutation::identity(3)}, inner);
    CHECK(ind.subgroup_rank() == 4);
    CHECK(ind.arity() == 6);
    // Homomorphism on the first level and on states.
    for (FreeWord x : {FreeWord{1}, FreeWord{2}, FreeWord{1, 2}, FreeWord{-2, 1, 1}})
        for (FreeWord y : {FreeWord{2}, FreeWord{-1}, FreeWord{2, 1}}) {
            auto xy = ind.element_of_word(free_mul(x, y));
            CHECK(ind.perm(xy) == ind.perm(x) * ind.perm(y));
            for (int i = 1; i <= 6; ++i)
                CHECK(ind.state(xy, i) == free_mul(ind.state(x, ind.perm(y)(i)), ind.state(y, i)));
        }
    CHECK(faithfulness_certificate(ind, 4, 6).verdict == Verdict::Pass);
}
