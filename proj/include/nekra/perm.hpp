#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace nekra {

// Element of S_n in one-line form, 1-based: images()[i-1] is the image of i.
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<int> images);

    static Permutation identity(int n);
    // Accepts "[3,1,2]" or cycle notation "(1 3 2)(4 5)"; "()" is the identity.
    // For cycle notation the degree is `degree` if given, else the largest point mentioned.
    static Permutation parse(std::string_view text, int degree = 0);
    static Permutation from_cycles(std::string_view text, int degree);

    int degree() const { return static_cast<int>(img_.size()); }
    int operator()(int i) const { return img_[static_cast<std::size_t>(i - 1)]; }
    const std::vector<int>& images() const { return img_; }

    bool is_identity() const;
    Permutation inverse() const;

    std::string cycles() const;    // "(1 3)(2 4)", "()" for the identity
    std::string one_line() const;  // "[3,1,2]"

    friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
    std::vector<int> img_;
};

// (p*q)(i) = p(q(i)): q acts first.
Permutation operator*(const Permutation& p, const Permutation& q);

// The cloning map on symmetric groups: strand k of p is split into d parallel strands.
// Result has degree n+d-1.
Permutation clone_perm(const Permutation& p, int k, int d);

// Embeds tau in S_d into S_n acting on the positions k..k+d-1.
Permutation block_embed(const Permutation& tau, int k, int n);

Permutation direct_sum(const Permutation& a, const Permutation& b);

std::size_t hash_value(const Permutation& p);

}  // namespace nekra

template <>
struct std::hash<nekra::Permutation> {
    std::size_t operator()(const nekra::Permutation& p) const { return nekra::hash_value(p); }
};
