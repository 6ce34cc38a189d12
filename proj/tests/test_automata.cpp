#include <doctest.h>

#include <random>
#include <set>

#include "nekra/automata.hpp"

using namespace nekra;

namespace {

const char* kGrig = R"(arity 2
state a: perm=(1 2); children=e,e
state b: perm=(); children=a,c
state c: perm=(); children=a,d
state d: perm=(); children=e,b
)";

std::map<std::string, Aut> grig() { return AutomatonSpec::parse(kGrig).realize(); }

Aut swap2() {
    return AutomatonSpec::parse("arity 2\nstate f: perm=(1 2); children=f,f\n").realize().at("f");
}

std::vector<Word> all_words(int d, int len) {
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

TEST_CASE("evaluation") {
    auto g = grig();
    CHECK(evaluate(swap2(), parse_word("112")) == parse_word("221"));
    CHECK(evaluate(g.at("a"), parse_word("21")) == parse_word("11"));
    CHECK(evaluate(g.at("b"), {}).empty());
    CHECK_THROWS_AS(evaluate(g.at("a"), Word{3}), std::invalid_argument);
}

TEST_CASE("states and interning") {
    auto g = grig();
    CHECK(g.at("b").state(1) == g.at("a"));
    CHECK(g.at("b").state(2) == g.at("c"));
    CHECK(g.at("b").state(Word{}) == g.at("b"));
    CHECK(g.at("b").state(Word{2, 2}) == g.at("d"));
    // Re-realizing the same automaton yields the same handles.
    auto again = grig();
    for (auto& [k, v] : g) CHECK(again.at(k) == v);
    // Unrolled copy of the swap is minimized onto the same handle.
    auto f2 = AutomatonSpec::parse("arity 2\nstate x: perm=(1 2); children=y,y\nstate y: perm=(1 2); children=x,x\n")
                  .realize();
    CHECK(f2.at("x") == swap2());
    CHECK(Aut() == Aut::identity(2));
}

TEST_CASE("products and inverses") {
    auto g = grig();
    Aut a = g.at("a"), b = g.at("b"), c = g.at("c"), d = g.at("d"), e = g.at("e");
    Aut f = swap2();
    CHECK((f * f).is_identity());
    CHECK(f * e == f);
    CHECK(b * c == d);
    CHECK(aut_equal(b * c, d) == Verdict::Pass);
    CHECK(aut_equal(a * a, e) == Verdict::Pass);
    CHECK(aut_equal(a, e) == Verdict::Fail);
    CHECK(inverse(b) == b);
    CHECK(power(a * b, 16).is_identity());
    CHECK(!power(a * b, 8).is_identity());
}

TEST_CASE("product and inverse laws on words") {
    auto g = grig();
    std::vector<Aut> pool{g.at("a"), g.at("b"), g.at("c"), g.at("d"), swap2()};
    std::mt19937 rng(3);
    for (int i = 0; i < 6; ++i) {
        auto x = pool[rng() % 4] * pool[rng() % 4] * pool[rng() % 4];
        pool.push_back(x);
    }
    for (Aut f : pool)
        for (Aut h : pool) {
            if (f.arity() != h.arity()) continue;
            Aut fh = f * h;
            for (int len = 0; len <= 6; ++len)
                for (auto& u : all_words(2, len)) {
                    CHECK(evaluate(fh, u) == evaluate(f, evaluate(h, u)));
                    CHECK(evaluate(inverse(f), evaluate(f, u)) == u);
                }
            for (int i = 1; i <= 2; ++i)
                CHECK(aut_equal(fh.state(i), f.state(h.perm()(i)) * h.state(i)) == Verdict::Pass);
            CHECK((aut_equal(f, h) == Verdict::Pass) == (f == h));
        }
}

TEST_CASE("portrait") {
    auto p = portrait(swap2(), 2);
    int count = 0;
    for (auto& lvl : p.labels)
        for (auto& s : lvl) {
            CHECK(s == Permutation::parse("(1 2)", 2));
            ++count;
        }
    CHECK(count == 7);
    auto q = portrait(grig().at("a"), 1);
    CHECK(q.labels[0][0] == Permutation::parse("(1 2)", 2));
    CHECK(q.labels[1][0].is_identity());
    CHECK(q.labels[1][1].is_identity());
}

TEST_CASE("level transitivity parity") {
    auto id = level_transitive_binary(Aut::identity(2), 5);
    CHECK(!id.pass);
    CHECK(id.failing_level == 0);
    CHECK(id.nontrivial_counts.back() == 0);
    // Every vertex of the swap carries a nontrivial label, so level 1 has two of them.
    auto sw = level_transitive_binary(swap2(), 5);
    CHECK(!sw.pass);
    CHECK(sw.failing_level == 1);
    CHECK(sw.nontrivial_counts.back() == 2);
    CHECK(!level_transitive_bruteforce(swap2(), 5));
    // The binary odometer is level transitive.
    auto odo = AutomatonSpec::parse("arity 2\nstate t: perm=(1 2); children=e,t\n").realize().at("t");
    CHECK(level_transitive_binary(odo, 30).pass);
    CHECK(level_transitive_bruteforce(odo, 10));
    CHECK_THROWS(level_transitive_binary(Aut::identity(3), 2));
}

TEST_CASE("nucleus") {
    auto g = grig();
    std::vector<Aut> gens{g.at("a"), g.at("b"), g.at("c"), g.at("d")};
    auto n = nucleus(gens, 64);
    REQUIRE(n.contracting);
    std::set<Aut> got(n.elements.begin(), n.elements.end());
    std::set<Aut> want{g.at("e"), g.at("a"), g.at("b"), g.at("c"), g.at("d")};
    CHECK(got == want);
    std::vector<Aut> trivial{Aut::identity(2)};
    auto t = nucleus(trivial, 64);
    CHECK(t.contracting);
    CHECK(t.elements.size() == 1);
}

TEST_CASE("automaton text round trip") {
    auto spec = AutomatonSpec::parse(kGrig);
    auto again = AutomatonSpec::parse(spec.to_string());
    CHECK(again.to_string() == spec.to_string());
    CHECK(again.realize().at("d") == grig().at("d"));
    CHECK_THROWS(AutomatonSpec::parse("arity 2\nstate a: perm=(1 2); children=e\n"));
    CHECK_THROWS(AutomatonSpec::parse("arity 2\nstate a: perm=(1 2); children=e,zz\n"));
    CHECK_THROWS(AutomatonSpec::parse("state a: perm=(1 2); children=e,e\n"));
    auto g = grig();
    auto desc = AutomatonSpec::describe({{"ab", g.at("a") * g.at("b")}});
    CHECK(desc.realize().at("ab") == g.at("a") * g.at("b"));
}
