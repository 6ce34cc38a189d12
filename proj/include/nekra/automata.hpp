#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nekra/perm.hpp"

namespace nekra {

// A vertex of T_d: a word over {1..d}. The empty word is the root.
using Word = std::vector<int>;

Word parse_word(std::string_view text);  // "212" or "2,1,2"
std::string format_word(const Word& w);

enum class Verdict { Pass, Fail, Indeterminate };
const char* to_string(Verdict v);

struct ResourceCap : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Handle to a finite-state automorphism of T_d held in the global store.
// The store keeps every state minimized and deduplicated, so two handles with
// the same id denote the same automorphism and vice versa.
class Aut {
public:
    Aut() = default;  // identity of T_2

    static Aut identity(int d);
    // Builds perm(children...) from existing handles. Recursive definitions go through AutomatonSpec.
    static Aut make(const Permutation& perm, std::span<const Aut> children);
    static Aut from_id(std::uint32_t id);

    std::uint32_t id() const { return id_; }
    int arity() const;
    const Permutation& perm() const;
    Aut state(int letter) const;
    Aut state(const Word& u) const;
    bool is_identity() const;

    friend bool operator==(Aut a, Aut b) { return a.id_ == b.id_; }
    friend auto operator<=>(Aut a, Aut b) { return a.id_ <=> b.id_; }

private:
    explicit Aut(std::uint32_t id) : id_(id) {}
    std::uint32_t id_ = 0;
};

// Product fg: g acts first. Root permutation rho(f)rho(g), states f_{rho(g)(i)} g_i.
Aut operator*(Aut f, Aut g);
Aut inverse(Aut f);
Aut power(Aut f, long e);

Word evaluate(Aut f, const Word& u);

// Decides equality by exploring pairs of states reachable from (f, g), independently of the store's
// canonical ids. Returns Indeterminate if more than `cap` pairs are visited.
Verdict aut_equal(Aut f, Aut g, std::size_t cap = 1'000'000);

// States reachable from f (including f), in breadth-first order.
std::vector<Aut> reachable_states(Aut f);

std::size_t store_size();

// labels[level][index] with vertices of each level in lexicographic order.
struct Portrait {
    int arity = 2;
    std::vector<std::vector<Permutation>> labels;
};
Portrait portrait(Aut f, int depth);

struct TransitivityCertificate {
    bool pass = false;
    int levels_checked = 0;
    int failing_level = -1;
    std::vector<std::uint64_t> nontrivial_counts;  // per level, vertices carrying a nontrivial label
};
// Binary-tree parity test: every level 0..depth must carry an odd number of nontrivial labels.
TransitivityCertificate level_transitive_binary(Aut f, int depth);
// Orbit of the first vertex of each level 1..depth under <f>; any arity.
bool level_transitive_bruteforce(Aut f, int depth);

struct NucleusResult {
    bool contracting = false;  // false means the cap was hit
    std::vector<Aut> elements;
};
NucleusResult nucleus(std::span<const Aut> generators, std::size_t cap);

// Line-oriented automaton description:
//   arity 2
//   state a: perm=(1 2); children=e,e
// The identity state `e` is predeclared.
struct AutomatonSpec {
    struct State {
        std::string name;
        Permutation perm;
        std::vector<std::string> children;
    };
    int arity = 2;
    std::vector<State> states;

    static AutomatonSpec parse(std::string_view text);
    static AutomatonSpec load(const std::string& path);
    std::string to_string() const;

    // Interns every state; the map also contains "e".
    std::map<std::string, Aut> realize() const;

    // Describes the closure of the given named handles; unnamed states get generated names.
    static AutomatonSpec describe(const std::vector<std::pair<std::string, Aut>>& named);
};

}  // namespace nekra

template <>
struct std::hash<nekra::Aut> {
    std::size_t operator()(nekra::Aut a) const { return std::hash<std::uint32_t>{}(a.id()); }
};
