#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nekra/automata.hpp"

namespace nekra {

// H <= G or an artifact set, as seen by the checkers.
struct SubgroupSpec {
    enum class Kind { FiniteEnumerated, WholeGroup, Generated };
    Kind kind = Kind::WholeGroup;
    int arity = 2;
    std::vector<Aut> elements;    // FiniteEnumerated
    std::vector<Aut> generators;  // Generated
    std::size_t fuel = 10'000;    // Generated: elements visited before giving up

    // Throws if the list is not closed under products and inverses.
    static SubgroupSpec finite(std::vector<Aut> elements);
    static SubgroupSpec whole(int arity);
    static SubgroupSpec generated(std::vector<Aut> generators, std::size_t fuel = 10'000);

    Verdict contains(Aut g) const;
    bool is_finite() const { return kind == Kind::FiniteEnumerated; }
};

// Breadth-first ball of the given radius in the group generated by `gens` (inverses included).
std::vector<Aut> ball(const std::vector<Aut>& gens, int radius, std::size_t cap = 100'000);

// Enumerates the whole group if it has at most `cap` elements.
std::optional<std::vector<Aut>> enumerate_finite(const std::vector<Aut>& gens, std::size_t cap = 10'000);

// ---- named constructions ---------------------------------------------------

// Finite group on named elements with a multiplication table; index 0 is the identity.
struct FiniteGroup {
    std::vector<std::string> names;
    std::vector<std::vector<int>> table;

    int size() const { return static_cast<int>(names.size()); }
    int mul(int x, int y) const { return table[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]; }
    int inv(int x) const;
    int index_of(const std::string& name) const;

    static FiniteGroup klein(const std::vector<std::string>& names);
    static FiniteGroup cyclic(const std::vector<std::string>& names);
};

// Abstract Sunic data. omega[x] is the exponent k with omega(x) = a^k.
struct SunicData {
    int arity = 2;
    FiniteGroup B;
    std::vector<int> omega;
    std::vector<int> rho;

    // "d=2; B=K4{1,b,c,d}; omega: b->a, c->a, d->1; rho: b->c, c->d, d->b"
    static SunicData parse(std::string_view text);
    static SunicData load(const std::string& path);
    std::string to_string() const;

    // Throws std::invalid_argument naming the first violated condition.
    void validate() const;
};

struct SunicGroup {
    int arity = 2;
    Aut a;
    std::vector<Aut> a_powers;  // a^0 .. a^{d-1}
    std::vector<Aut> B;         // aligned with SunicData::B.names
    std::map<std::string, Aut> named;
    std::vector<Aut> generators() const;  // a and the nontrivial elements of B
};
SunicGroup make_sunic(const SunicData& data);

// Standard instances.
SunicData grigorchuk_data();
SunicData fabrykowski_gupta_data();

// s = sigma(s, ..., s) for each generator.
std::vector<Aut> make_sd_embedding(const std::vector<Permutation>& gens);

// sigmas[i] is sigma_i for i = 0..n; an odd number must be nontrivial.
struct VorobetsGroup {
    int n = 1;
    std::vector<std::string> names;  // a, b, c, d1..dn
    std::vector<Aut> gens;
};
VorobetsGroup make_vorobets_free(int n, const std::vector<Permutation>& sigmas);
// The instance with sigma_1 = (1 2) and the other sigmas trivial.
VorobetsGroup make_vorobets_free(int n);

// a = (1 2 3), b = (a, a^-1, b).
std::map<std::string, Aut> make_gupta_sidki();

// ---- hypothesis checkers ---------------------------------------------------

struct CheckResult {
    Verdict verdict = Verdict::Pass;
    int condition = 0;  // which condition failed, when there are several
    std::optional<Aut> witness;
    int position = 0;  // letter involved in the failure, 1-based
    std::string message;
};

// Every state of every h in H lies in H or in A.
CheckResult check_coarsely_self_similar(const SubgroupSpec& H, const std::vector<Aut>& A);
// The three orderly conditions, checked in order.
CheckResult check_orderly(const SubgroupSpec& H, const std::vector<Aut>& A);

struct NuclearEntry {
    std::string word;
    Verdict verdict = Verdict::Pass;
    std::vector<Word> leaves;  // leaves of the complete subtree found
};
struct NuclearReport {
    Verdict verdict = Verdict::Pass;
    std::vector<NuclearEntry> entries;
    std::optional<std::string> failing_word;
};
NuclearReport check_nuclear(const std::vector<Aut>& gens, const std::vector<std::string>& names,
                            const SubgroupSpec& H, int word_len, int depth_cap);

// ---- words ---------------------------------------------------------------

// Symbols are the distinct elements of gens and their inverses; involutions give one symbol.
struct Alphabet {
    std::vector<Aut> symbols;
    std::vector<std::string> names;
    static Alphabet of(const std::vector<Aut>& gens, const std::vector<std::string>& names);
};
// Nonempty words of length <= max_len with no adjacent pair multiplying to the identity,
// in shortlex order. Entries index into the alphabet.
std::vector<std::vector<int>> reduced_words(const Alphabet& alpha, int max_len);
Aut word_value(const Alphabet& alpha, const std::vector<int>& word);
std::string word_name(const Alphabet& alpha, const std::vector<int>& word);

// ---- lazy actions and induced representations ------------------------------

// Free group words: letter +i is generator i (1-based), -i its inverse.
using FreeWord = std::vector<int>;
FreeWord free_reduce(const FreeWord& w);
FreeWord free_inverse(const FreeWord& w);
FreeWord free_mul(const FreeWord& x, const FreeWord& y);

// A self-similar action exposed one level at a time. Elements are opaque keys.
class LazyAction {
public:
    using Key = std::vector<int>;
    virtual ~LazyAction() = default;
    virtual int arity() const = 0;
    virtual int generator_count() const = 0;
    virtual std::string generator_name(int i) const { return "g" + std::to_string(i + 1); }
    // Letters as in FreeWord.
    virtual Key element_of_word(const FreeWord& word) const = 0;
    virtual Permutation perm(const Key& k) const = 0;
    virtual Key state(const Key& k, int letter) const = 0;
    virtual bool is_trivial_key(const Key& k) const = 0;
    // True when generator i equals its own inverse, so it needs only one symbol.
    virtual bool is_involution(int i) const;
};

class AutomatonAction : public LazyAction {
public:
    AutomatonAction(std::vector<Aut> gens, std::vector<std::string> names);
    int arity() const override;
    int generator_count() const override { return static_cast<int>(gens_.size()); }
    std::string generator_name(int i) const override { return names_[static_cast<std::size_t>(i)]; }
    Key element_of_word(const FreeWord& word) const override;
    Permutation perm(const Key& k) const override;
    Key state(const Key& k, int letter) const override;
    bool is_trivial_key(const Key& k) const override;
    bool is_involution(int i) const override;

private:
    std::vector<Aut> gens_;
    std::vector<std::string> names_;
};

// Self-similar action of a free group given by a transition table:
// generator i sends letter x to perms[i](x) with state words[i][x-1].
class FreeTableAction : public LazyAction {
public:
    FreeTableAction(int arity, std::vector<std::string> names, std::vector<Permutation> perms,
                    std::vector<std::vector<FreeWord>> states);
    // The Vorobets generators as a free-group table.
    static FreeTableAction vorobets(int n, const std::vector<Permutation>& sigmas);

    int arity() const override { return arity_; }
    int generator_count() const override { return static_cast<int>(names_.size()); }
    std::string generator_name(int i) const override { return names_[static_cast<std::size_t>(i)]; }
    Key element_of_word(const FreeWord& word) const override { return free_reduce(word); }
    Permutation perm(const Key& k) const override;
    Key state(const Key& k, int letter) const override;
    bool is_trivial_key(const Key& k) const override { return k.empty(); }
    bool is_involution(int) const override { return false; }

private:
    int arity_;
    std::vector<std::string> names_;
    std::vector<Permutation> perms_;
    std::vector<std::vector<FreeWord>> states_;
};

// Virtual endomorphism phi: K -> G of a finite group G given by its Cayley table. X is a left
// transversal of K. The action on X* uses the state phi(x'^{-1} g x) at x, where g x K = x' K.
class CosetTableAction : public LazyAction {
public:
    CosetTableAction(std::vector<std::vector<int>> table, std::vector<int> generators, std::vector<int> K,
                     std::vector<int> transversal, std::map<int, int> phi);
    // CSV-ish text: lines "table: ...", "gens: ...", "K: ...", "X: ...", "phi: k->g, ...".
    static CosetTableAction parse(std::string_view text);

    int arity() const override { return static_cast<int>(transversal_.size()); }
    int generator_count() const override { return static_cast<int>(gens_.size()); }
    Key element_of_word(const FreeWord& word) const override;
    Permutation perm(const Key& k) const override;
    Key state(const Key& k, int letter) const override;
    bool is_trivial_key(const Key& k) const override { return k[0] == identity_; }

private:
    int mul(int x, int y) const { return table_[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]; }
    int inv(int x) const;
    int locate(int g) const;  // index i with x_i^{-1} g in K
    std::vector<std::vector<int>> table_;
    std::vector<int> gens_;
    std::vector<bool> in_K_;
    std::vector<int> transversal_;
    std::map<int, int> phi_;
    int identity_ = 0;
};

// Induction from a finite-index subgroup of a free group. G = F_r and K = Stab_G(1) for a
// permutation action of G on {1..m}. K is free on its Schreier basis; `inner` is a faithful
// self-similar action of K on T_d (its generators matched to the basis in order) that is
// transitive on the first level. The result is the action of G built from the stabilizer of
// letter 1 in K and the projection to the state at 1, on the tree of arity m*d.
class InducedAction : public LazyAction {
public:
    InducedAction(std::vector<std::string> names, std::vector<Permutation> coset_action,
                  std::shared_ptr<const LazyAction> inner);

    int arity() const override { return static_cast<int>(transversal_.size()); }
    int generator_count() const override { return static_cast<int>(names_.size()); }
    std::string generator_name(int i) const override { return names_[static_cast<std::size_t>(i)]; }
    Key element_of_word(const FreeWord& word) const override { return free_reduce(word); }
    Permutation perm(const Key& k) const override;
    Key state(const Key& k, int letter) const override;
    bool is_trivial_key(const Key& k) const override { return k.empty(); }
    bool is_involution(int) const override { return false; }

    int subgroup_rank() const { return static_cast<int>(basis_.size()); }
    const std::vector<FreeWord>& subgroup_basis() const { return basis_; }

private:
    int point_after(const FreeWord& g, int p) const;
    FreeWord rewrite(const FreeWord& k) const;    // element of K as a word in the basis
    FreeWord to_ambient(const FreeWord& kw) const;  // inverse of rewrite
    int locate(const FreeWord& g) const;          // index of y with y^{-1} g in the stabilizer
    std::vector<std::string> names_;
    std::vector<Permutation> action_;
    std::shared_ptr<const LazyAction> inner_;
    std::vector<FreeWord> coset_rep_;       // T_p with T_p(1) = p
    std::map<std::pair<int, int>, int> edge_basis_;  // (p, generator) -> basis index, 0 for tree edges
    std::vector<FreeWord> basis_;
    std::vector<FreeWord> letter_rep_;      // u_x in K with inner action 1 -> x
    std::vector<FreeWord> transversal_;
};

struct FaithfulnessResult {
    Verdict verdict = Verdict::Pass;
    std::optional<std::string> witness;  // a word acting trivially to the tested depth
    std::size_t words_checked = 0;
};
// Every nonempty reduced word of length <= word_len must move some vertex of depth <= depth.
FaithfulnessResult faithfulness_certificate(const LazyAction& action, int word_len, int depth);

}  // namespace nekra
