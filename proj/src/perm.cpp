#include "nekra/perm.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace nekra {

Permutation::Permutation(std::vector<int> images) : img_(std::move(images)) {
    const int n = degree();
    std::vector<bool> seen(img_.size(), false);
    for (int v : img_) {
        if (v < 1 || v > n || seen[static_cast<std::size_t>(v - 1)])
            throw std::invalid_argument("not a permutation of 1.." + std::to_string(n));
        seen[static_cast<std::size_t>(v - 1)] = true;
    }
}

Permutation Permutation::identity(int n) {
    if (n < 0) throw std::invalid_argument("negative degree");
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i + 1;
    Permutation p;
    p.img_ = std::move(v);
    return p;
}

namespace {

std::vector<std::vector<int>> read_cycles(std::string_view text) {
    std::vector<std::vector<int>> cycles;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip();
    while (i < text.size()) {
        if (text[i] != '(') throw std::invalid_argument("bad cycle notation: " + std::string(text));
        ++i;
        std::vector<int> cyc;
        for (;;) {
            skip();
            if (i >= text.size()) throw std::invalid_argument("unterminated cycle: " + std::string(text));
            if (text[i] == ')') {
                ++i;
                break;
            }
            if (text[i] == ',') {
                ++i;
                continue;
            }
            if (!std::isdigit(static_cast<unsigned char>(text[i])))
                throw std::invalid_argument("bad cycle notation: " + std::string(text));
            int v = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) v = v * 10 + (text[i++] - '0');
            cyc.push_back(v);
        }
        cycles.push_back(std::move(cyc));
        skip();
    }
    return cycles;
}

}  // namespace

Permutation Permutation::from_cycles(std::string_view text, int degree) {
    auto cycles = read_cycles(text);
    std::vector<int> img(static_cast<std::size_t>(degree));
    for (int i = 0; i < degree; ++i) img[static_cast<std::size_t>(i)] = i + 1;
    std::vector<bool> used(static_cast<std::size_t>(degree), false);
    for (const auto& c : cycles) {
        for (std::size_t j = 0; j < c.size(); ++j) {
            int a = c[j], b = c[(j + 1) % c.size()];
            if (a < 1 || a > degree) throw std::invalid_argument("cycle point out of range: " + std::to_string(a));
            if (used[static_cast<std::size_t>(a - 1)])
                throw std::invalid_argument("cycles are not disjoint: " + std::string(text));
            used[static_cast<std::size_t>(a - 1)] = true;
            img[static_cast<std::size_t>(a - 1)] = b;
        }
    }
    return Permutation(std::move(img));
}

Permutation Permutation::parse(std::string_view text, int degree) {
    std::size_t b = text.find_first_not_of(" \t");
    std::size_t e = text.find_last_not_of(" \t");
    if (b == std::string_view::npos) throw std::invalid_argument("empty permutation");
    text = text.substr(b, e - b + 1);
    if (text.front() == '[') {
        if (text.back() != ']') throw std::invalid_argument("bad one-line form: " + std::string(text));
        std::vector<int> img;
        std::string body(text.substr(1, text.size() - 2));
        std::replace(body.begin(), body.end(), ',', ' ');
        std::istringstream in(body);
        int v;
        while (in >> v) img.push_back(v);
        if (!in.eof()) throw std::invalid_argument("bad one-line form: " + std::string(text));
        Permutation p(std::move(img));
        if (degree != 0 && p.degree() != degree)
            throw std::invalid_argument("permutation has degree " + std::to_string(p.degree()) + ", expected " +
                                        std::to_string(degree));
        return p;
    }
    if (degree == 0) {
        for (const auto& c : read_cycles(text))
            for (int v : c) degree = std::max(degree, v);
    }
    return from_cycles(text, degree);
}

bool Permutation::is_identity() const {
    for (int i = 0; i < degree(); ++i)
        if (img_[static_cast<std::size_t>(i)] != i + 1) return false;
    return true;
}

Permutation Permutation::inverse() const {
    std::vector<int> inv(img_.size());
    for (int i = 0; i < degree(); ++i) inv[static_cast<std::size_t>(img_[static_cast<std::size_t>(i)] - 1)] = i + 1;
    Permutation p;
    p.img_ = std::move(inv);
    return p;
}

std::string Permutation::cycles() const {
    std::string out;
    std::vector<bool> seen(img_.size(), false);
    for (int i = 1; i <= degree(); ++i) {
        if (seen[static_cast<std::size_t>(i - 1)] || (*this)(i) == i) continue;
        out += '(';
        int j = i;
        bool first = true;
        while (!seen[static_cast<std::size_t>(j - 1)]) {
            seen[static_cast<std::size_t>(j - 1)] = true;
            if (!first) out += ' ';
            out += std::to_string(j);
            first = false;
            j = (*this)(j);
        }
        out += ')';
    }
    return out.empty() ? "()" : out;
}

std::string Permutation::one_line() const {
    std::string out = "[";
    for (std::size_t i = 0; i < img_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(img_[i]);
    }
    return out + "]";
}

Permutation operator*(const Permutation& p, const Permutation& q) {
    if (p.degree() != q.degree())
        throw std::invalid_argument("degree mismatch: " + std::to_string(p.degree()) + " vs " +
                                    std::to_string(q.degree()));
    std::vector<int> img(static_cast<std::size_t>(p.degree()));
    for (int i = 1; i <= p.degree(); ++i) img[static_cast<std::size_t>(i - 1)] = p(q(i));
    return Permutation(std::move(img));
}

Permutation clone_perm(const Permutation& p, int k, int d) {
    const int n = p.degree();
    if (k < 1 || k > n) throw std::invalid_argument("clone position " + std::to_string(k) + " out of range 1.." +
                                                    std::to_string(n));
    if (d < 2) throw std::invalid_argument("arity must be at least 2");
    const int pk = p(k);
    std::vector<int> img(static_cast<std::size_t>(n + d - 1));
    for (int i = 1; i <= n + d - 1; ++i) {
        int v;
        if (i <= k && p(i) <= pk)
            v = p(i);
        else if (i < k && p(i) > pk)
            v = p(i) + d - 1;
        else if (i > k + d - 1 && p(i - d + 1) < pk)
            v = p(i - d + 1);
        else if (i >= k + d - 1 && p(i - d + 1) >= pk)
            v = p(i - d + 1) + d - 1;
        else
            v = pk + i - k;  // k < i < k+d-1
        img[static_cast<std::size_t>(i - 1)] = v;
    }
    return Permutation(std::move(img));
}

Permutation block_embed(const Permutation& tau, int k, int n) {
    const int d = tau.degree();
    if (k < 1 || k + d - 1 > n) throw std::invalid_argument("block does not fit");
    std::vector<int> img(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) img[static_cast<std::size_t>(i - 1)] = i;
    for (int j = 1; j <= d; ++j) img[static_cast<std::size_t>(k + j - 2)] = k + tau(j) - 1;
    return Permutation(std::move(img));
}

Permutation direct_sum(const Permutation& a, const Permutation& b) {
    std::vector<int> img = a.images();
    for (int v : b.images()) img.push_back(v + a.degree());
    return Permutation(std::move(img));
}

std::size_t hash_value(const Permutation& p) {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (int v : p.images()) h = (h ^ static_cast<std::size_t>(v)) * 0x100000001b3ULL;
    return h;
}

}  // namespace nekra
