#include "nekra/cloning.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace nekra {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

bool is_prefix(const Word& p, const Word& u) {
    return p.size() <= u.size() && std::equal(p.begin(), p.end(), u.begin());
}

}  // namespace

// ---- wreath elements -------------------------------------------------------

WreathElement::WreathElement(Permutation s, std::vector<Aut> e) : sigma(std::move(s)), entries(std::move(e)) {
    if (static_cast<int>(entries.size()) != sigma.degree())
        throw std::invalid_argument("wreath element needs " + std::to_string(sigma.degree()) + " entries, got " +
                                    std::to_string(entries.size()));
    for (Aut f : entries)
        if (f.arity() != entries.front().arity()) throw std::invalid_argument("entries of different arities");
}

WreathElement WreathElement::identity(int n, int d) {
    return WreathElement(Permutation::identity(n), std::vector<Aut>(static_cast<std::size_t>(n), Aut::identity(d)));
}

WreathElement WreathElement::single(Aut f) { return WreathElement(Permutation::identity(1), {f}); }

bool WreathElement::is_identity() const {
    return sigma.is_identity() && std::all_of(entries.begin(), entries.end(), [](Aut f) { return f.is_identity(); });
}

WreathElement operator*(const WreathElement& x, const WreathElement& y) {
    if (x.degree() != y.degree()) throw std::invalid_argument("degree mismatch in wreath product");
    std::vector<Aut> e;
    e.reserve(x.entries.size());
    for (int i = 1; i <= y.degree(); ++i)
        e.push_back(x.entries[static_cast<std::size_t>(y.sigma(i) - 1)] * y.entries[static_cast<std::size_t>(i - 1)]);
    return WreathElement(x.sigma * y.sigma, std::move(e));
}

WreathElement inverse(const WreathElement& x) {
    Permutation inv = x.sigma.inverse();
    std::vector<Aut> e;
    for (int i = 1; i <= x.degree(); ++i) e.push_back(inverse(x.entries[static_cast<std::size_t>(inv(i) - 1)]));
    return WreathElement(inv, std::move(e));
}

WreathElement direct_sum(const WreathElement& x, const WreathElement& y) {
    std::vector<Aut> e = x.entries;
    e.insert(e.end(), y.entries.begin(), y.entries.end());
    return WreathElement(direct_sum(x.sigma, y.sigma), std::move(e));
}

WreathElement clone(const WreathElement& w, int k) {
    const int n = w.degree();
    if (k < 1 || k > n) throw std::invalid_argument("clone position " + std::to_string(k) + " out of range");
    Aut f = w.entries[static_cast<std::size_t>(k - 1)];
    const int d = f.arity();
    Permutation s = clone_perm(w.sigma, k, d) * block_embed(f.perm(), k, n + d - 1);
    std::vector<Aut> e(w.entries.begin(), w.entries.begin() + (k - 1));
    for (int j = 1; j <= d; ++j) e.push_back(f.state(j));
    e.insert(e.end(), w.entries.begin() + k, w.entries.end());
    return WreathElement(std::move(s), std::move(e));
}

WreathElement at_position(Aut h, int k, int n) {
    WreathElement w = WreathElement::identity(n, h.arity());
    w.entries.at(static_cast<std::size_t>(k - 1)) = h;
    return w;
}

bool product_law_holds(const WreathElement& g, const WreathElement& h, int k) {
    return clone(g * h, k) == clone(g, h.sigma(k)) * clone(h, k);
}

bool commuting_clones_hold(const WreathElement& g, int k, int l) {
    const int d = g.arity();
    return clone(clone(g, l), k) == clone(clone(g, k), l + d - 1);
}

bool compatibility_holds(const WreathElement& g, int k) {
    const int d = g.arity();
    Permutation lhs = clone(g, k).sigma, rhs = clone_perm(g.sigma, k, d);
    for (int i = 1; i <= lhs.degree(); ++i)
        if ((i < k || i > k + d - 1) && lhs(i) != rhs(i)) return false;
    return true;
}

AxiomReport check_axioms(const std::vector<WreathElement>& sample) {
    AxiomReport r;
    Names none;
    auto fail = [&](const std::string& what, const WreathElement& g, int k) {
        if (!r.counterexample) r.counterexample = what + " fails for " + to_string(g, none) + " at " + std::to_string(k);
    };
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const WreathElement& g = sample[i];
        const WreathElement* h = i + 1 < sample.size() ? &sample[i + 1] : nullptr;
        for (int k = 1; k <= g.degree(); ++k) {
            if (h && h->degree() == g.degree() && h->arity() == g.arity()) {
                ++r.product_checks;
                if (!product_law_holds(g, *h, k)) fail("product law", g, k);
            }
            ++r.compatibility_checks;
            if (!compatibility_holds(g, k)) fail("compatibility", g, k);
            for (int l = k + 1; l <= g.degree(); ++l) {
                ++r.commuting_checks;
                if (!commuting_clones_hold(g, k, l)) fail("product of clonings", g, k);
            }
        }
    }
    return r;
}

// ---- names -----------------------------------------------------------------

Names::Names(const std::map<std::string, Aut>& named) {
    for (const auto& [k, v] : named) add(k, v);
}

void Names::add(const std::string& name, Aut a) {
    by_name_[name] = a;
    auto it = by_aut_.find(a);
    if (it == by_aut_.end() || name.size() < it->second.size()) by_aut_[a] = name;
}

Aut Names::parse(const std::string& token, int arity) const {
    Aut result = Aut::identity(arity);
    for (const auto& part : split(token, '*')) {
        if (part.empty()) throw std::invalid_argument("empty entry in '" + token + "'");
        if (part == "id" || part == "e" || part == "1") continue;
        bool inv = part.size() > 3 && part.compare(part.size() - 3, 3, "^-1") == 0;
        std::string name = inv ? part.substr(0, part.size() - 3) : part;
        Aut a;
        if (auto it = by_name_.find(name); it != by_name_.end())
            a = it->second;
        else if (name.size() > 1 && name[0] == '#')
            a = Aut::from_id(static_cast<std::uint32_t>(std::stoul(name.substr(1))));
        else
            throw std::invalid_argument("unknown automorphism '" + name + "'");
        if (a.arity() != arity) throw std::invalid_argument("'" + name + "' has the wrong arity");
        result = result * (inv ? inverse(a) : a);
    }
    return result;
}

std::string Names::print(Aut a) const {
    if (a.is_identity()) return "id";
    if (auto it = by_aut_.find(a); it != by_aut_.end()) return it->second;
    if (auto it = by_aut_.find(inverse(a)); it != by_aut_.end()) return it->second + "^-1";
    return "#" + std::to_string(a.id());
}

std::string to_string(const WreathElement& w, const Names& names) {
    std::string out = w.sigma.cycles() + " ; ";
    for (std::size_t i = 0; i < w.entries.size(); ++i) out += (i ? ", " : "") + names.print(w.entries[i]);
    return out;
}

WreathElement parse_wreath(const std::string& text, int degree, int arity, const Names& names) {
    auto semi = text.find(';');
    std::string perm_part = trim(text.substr(0, semi));
    Permutation sigma = perm_part.empty() || perm_part == "id" ? Permutation::identity(degree)
                                                               : Permutation::parse(perm_part, degree);
    if (sigma.degree() != degree)
        throw std::invalid_argument("permutation has degree " + std::to_string(sigma.degree()) + " but the forests have " +
                                    std::to_string(degree) + " leaves");
    std::vector<Aut> entries;
    if (semi != std::string::npos && !trim(text.substr(semi + 1)).empty()) {
        for (const auto& tok : split(text.substr(semi + 1), ',')) entries.push_back(names.parse(tok, arity));
    } else {
        entries.assign(static_cast<std::size_t>(degree), Aut::identity(arity));
    }
    return WreathElement(std::move(sigma), std::move(entries));
}

// ---- forests -------------------------------------------------------------

Forest Forest::trivial(int roots, int d) {
    if (roots < 1) throw std::invalid_argument("a forest needs at least one root");
    if (d < 2) throw std::invalid_argument("arity must be at least 2");
    Forest f;
    f.arity_ = d;
    f.roots_ = roots;
    for (int r = 1; r <= roots; ++r) f.leaves_.push_back({r, {}});
    return f;
}

Forest Forest::parse(const std::string& text, int d) {
    auto trees = split(text, ',');
    Forest f = trivial(static_cast<int>(trees.size()), d);
    f.leaves_.clear();
    for (std::size_t r = 0; r < trees.size(); ++r) {
        const std::string& t = trees[r];
        std::size_t pos = 0;
        Word addr;
        std::function<void()> node = [&] {
            if (pos >= t.size()) throw std::invalid_argument("tree '" + t + "' ends early");
            char c = t[pos++];
            if (c == 'l') {
                f.leaves_.push_back({static_cast<int>(r + 1), addr});
            } else if (c == 'c') {
                for (int j = 1; j <= d; ++j) {
                    addr.push_back(j);
                    node();
                    addr.pop_back();
                }
            } else {
                throw std::invalid_argument("trees use only 'c' and 'l', got '" + std::string(1, c) + "'");
            }
        };
        node();
        if (pos != t.size()) throw std::invalid_argument("trailing characters in tree '" + t + "'");
    }
    return f;
}

Forest Forest::from_internal(int roots, int d, const std::set<Leaf>& internal) {
    Forest f = trivial(roots, d);
    f.leaves_.clear();
    for (int r = 1; r <= roots; ++r) {
        Word addr;
        std::function<void()> visit = [&] {
            if (internal.count({r, addr})) {
                for (int j = 1; j <= d; ++j) {
                    addr.push_back(j);
                    visit();
                    addr.pop_back();
                }
            } else {
                f.leaves_.push_back({r, addr});
            }
        };
        visit();
    }
    return f;
}

std::set<Forest::Leaf> Forest::internal() const {
    std::set<Leaf> out;
    for (const auto& l : leaves_)
        for (std::size_t len = 0; len < l.addr.size(); ++len) out.insert({l.root, Word(l.addr.begin(), l.addr.begin() + static_cast<long>(len))});
    return out;
}

Forest Forest::add_caret(int k) const {
    if (k < 1 || k > leaves()) throw std::invalid_argument("leaf " + std::to_string(k) + " out of range");
    Forest f = *this;
    Leaf base = leaves_[static_cast<std::size_t>(k - 1)];
    std::vector<Leaf> kids;
    for (int j = 1; j <= arity_; ++j) {
        Leaf l = base;
        l.addr.push_back(j);
        kids.push_back(l);
    }
    f.leaves_.erase(f.leaves_.begin() + (k - 1));
    f.leaves_.insert(f.leaves_.begin() + (k - 1), kids.begin(), kids.end());
    return f;
}

bool Forest::is_caret_block(int k) const {
    if (k < 1 || k + arity_ - 1 > leaves()) return false;
    const Leaf& first = leaves_[static_cast<std::size_t>(k - 1)];
    if (first.addr.empty()) return false;
    for (int j = 1; j <= arity_; ++j) {
        const Leaf& l = leaves_[static_cast<std::size_t>(k + j - 2)];
        if (l.root != first.root || l.addr.size() != first.addr.size() || l.addr.back() != j) return false;
        if (!std::equal(l.addr.begin(), l.addr.end() - 1, first.addr.begin())) return false;
    }
    return true;
}

Forest Forest::remove_caret(int k) const {
    if (!is_caret_block(k)) throw std::invalid_argument("leaves starting at " + std::to_string(k) + " are not a caret");
    Forest f = *this;
    Leaf parent = leaves_[static_cast<std::size_t>(k - 1)];
    parent.addr.pop_back();
    f.leaves_.erase(f.leaves_.begin() + (k - 1), f.leaves_.begin() + (k - 1 + arity_));
    f.leaves_.insert(f.leaves_.begin() + (k - 1), parent);
    return f;
}

Forest Forest::refine(const Forest& other) const {
    if (roots_ != other.roots_ || arity_ != other.arity_) throw std::invalid_argument("forests have different shapes");
    auto a = internal();
    auto b = other.internal();
    a.insert(b.begin(), b.end());
    return from_internal(roots_, arity_, a);
}

std::optional<int> Forest::leaf_above(int root, const Word& u) const {
    for (std::size_t i = 0; i < leaves_.size(); ++i)
        if (leaves_[i].root == root && is_prefix(leaves_[i].addr, u)) return static_cast<int>(i + 1);
    return std::nullopt;
}

std::optional<int> Forest::find_leaf(int root, const Word& addr) const {
    auto it = std::lower_bound(leaves_.begin(), leaves_.end(), Leaf{root, addr});
    if (it != leaves_.end() && it->root == root && it->addr == addr) return static_cast<int>(it - leaves_.begin() + 1);
    return std::nullopt;
}

std::pair<int, int> Forest::leaves_of_root(int r) const {
    int first = 0, last = 0;
    for (std::size_t i = 0; i < leaves_.size(); ++i)
        if (leaves_[i].root == r) {
            if (!first) first = static_cast<int>(i + 1);
            last = static_cast<int>(i + 1);
        }
    return {first, last};
}

std::string Forest::to_string() const {
    auto in = internal();
    std::string out;
    for (int r = 1; r <= roots_; ++r) {
        if (r > 1) out += ',';
        Word addr;
        std::function<void()> visit = [&] {
            if (in.count({r, addr})) {
                out += 'c';
                for (int j = 1; j <= arity_; ++j) {
                    addr.push_back(j);
                    visit();
                    addr.pop_back();
                }
            } else {
                out += 'l';
            }
        };
        visit();
    }
    return out;
}

Forest direct_sum(const Forest& a, const Forest& b) {
    if (a.arity_ != b.arity_) throw std::invalid_argument("arity mismatch in direct sum");
    Forest f = a;
    for (auto l : b.leaves_) {
        l.root += a.roots_;
        f.leaves_.push_back(l);
    }
    f.roots_ += b.roots_;
    return f;
}

// ---- forest pairs ----------------------------------------------------------

ForestPair::ForestPair(Forest r, WreathElement x, Forest d) : range(std::move(r)), w(std::move(x)), domain(std::move(d)) {
    if (range.arity() != domain.arity()) throw std::invalid_argument("forests of different arities");
    if (range.leaves() != domain.leaves() || w.degree() != domain.leaves())
        throw std::invalid_argument("leaf counts do not match: " + std::to_string(range.leaves()) + ", " +
                                    std::to_string(w.degree()) + ", " + std::to_string(domain.leaves()));
    if (w.arity() != domain.arity()) throw std::invalid_argument("entries act on a tree of the wrong arity");
}

ForestPair ForestPair::identity(int roots, int d) {
    return ForestPair(Forest::trivial(roots, d), WreathElement::identity(roots, d), Forest::trivial(roots, d));
}

ForestPair ForestPair::of(Aut f) {
    return ForestPair(Forest::trivial(1, f.arity()), WreathElement::single(f), Forest::trivial(1, f.arity()));
}

ForestPair expand(const ForestPair& x, int k) {
    if (k < 1 || k > x.leaves()) throw std::invalid_argument("expansion at leaf " + std::to_string(k) + " out of range");
    return ForestPair(x.range.add_caret(x.w.sigma(k)), clone(x.w, k), x.domain.add_caret(k));
}

std::optional<ForestPair> try_reduce(const ForestPair& x, int k) {
    const int d = x.arity();
    const int n = x.leaves();
    if (k < 1 || k > n) throw std::invalid_argument("reduction at leaf " + std::to_string(k) + " out of range");
    if (!x.domain.is_caret_block(k)) return std::nullopt;
    const Permutation& s = x.w.sigma;
    int m = n + 1, top = 0;
    for (int j = 0; j < d; ++j) {
        m = std::min(m, s(k + j));
        top = std::max(top, s(k + j));
    }
    if (top - m != d - 1) return std::nullopt;  // image not contiguous
    if (!x.range.is_caret_block(m)) return std::nullopt;
    std::vector<int> tau;
    std::vector<Aut> kids;
    for (int j = 1; j <= d; ++j) {
        tau.push_back(s(k + j - 1) - m + 1);
        kids.push_back(x.w.entries[static_cast<std::size_t>(k + j - 2)]);
    }
    Aut merged = Aut::make(Permutation(tau), kids);
    auto squeeze = [&](int v) { return v < m ? v : v - d + 1; };
    std::vector<int> img;
    std::vector<Aut> entries;
    for (int i = 1; i <= n; ++i) {
        if (i > k && i < k + d) continue;
        img.push_back(i == k ? m : squeeze(s(i)));
        entries.push_back(i == k ? merged : x.w.entries[static_cast<std::size_t>(i - 1)]);
    }
    ForestPair r(x.range.remove_caret(m), WreathElement(Permutation(img), std::move(entries)), x.domain.remove_caret(k));
    if (clone(r.w, k) != x.w) throw std::logic_error("reduction is not inverse to cloning");
    return r;
}

ForestPair canonical_form(ForestPair x) {
    for (int k = 1; k + x.arity() - 1 <= x.leaves();) {
        if (auto r = try_reduce(x, k)) {
            x = std::move(*r);
            k = 1;
        } else {
            ++k;
        }
    }
    return x;
}

ForestPair expand_domain_to(const ForestPair& x, const Forest& target) {
    auto want = target.internal();
    for (const auto& v : x.domain.internal())
        if (!want.count(v)) throw std::invalid_argument("target forest does not refine the domain");
    ForestPair y = x;
    for (;;) {
        int k = 0;
        for (int i = 1; i <= y.leaves() && !k; ++i)
            if (want.count(y.domain.leaf(i))) k = i;
        if (!k) break;
        y = expand(y, k);
    }
    return y;
}

ForestPair expand_range_to(const ForestPair& x, const Forest& target) {
    auto want = target.internal();
    for (const auto& v : x.range.internal())
        if (!want.count(v)) throw std::invalid_argument("target forest does not refine the range");
    ForestPair y = x;
    for (;;) {
        int j = 0;
        for (int i = 1; i <= y.leaves() && !j; ++i)
            if (want.count(y.range.leaf(i))) j = i;
        if (!j) break;
        y = expand(y, y.w.sigma.inverse()(j));
    }
    return y;
}

ForestPair multiply(const ForestPair& x, const ForestPair& y) {
    if (x.arity() != y.arity()) throw std::invalid_argument("arity mismatch in product");
    if (x.feet() != y.heads())
        throw std::invalid_argument("cannot compose: " + std::to_string(x.feet()) + " feet against " +
                                    std::to_string(y.heads()) + " heads");
    Forest middle = x.domain.refine(y.range);
    ForestPair a = expand_domain_to(x, middle);
    ForestPair b = expand_range_to(y, middle);
    return canonical_form(ForestPair(a.range, a.w * b.w, b.domain));
}

ForestPair invert(const ForestPair& x) { return ForestPair(x.domain, inverse(x.w), x.range); }

bool equal(const ForestPair& x, const ForestPair& y) {
    if (x.arity() != y.arity() || x.heads() != y.heads() || x.feet() != y.feet()) return false;
    Forest common = x.domain.refine(y.domain);
    ForestPair a = expand_domain_to(x, common), b = expand_domain_to(y, common);
    // Entries are canonical handles, so == on them is equality of automorphisms.
    return a.range == b.range && a.w == b.w;
}

ForestPair direct_sum(const ForestPair& x, const ForestPair& y) {
    return ForestPair(direct_sum(x.range, y.range), direct_sum(x.w, y.w), direct_sum(x.domain, y.domain));
}

std::optional<BoundaryPoint> boundary_eval(const ForestPair& x, const BoundaryPoint& p) {
    if (p.root < 1 || p.root > x.feet()) throw std::invalid_argument("no such foot");
    for (int v : p.word)
        if (v < 1 || v > x.arity()) throw std::invalid_argument("letter out of range");
    auto l = x.domain.leaf_above(p.root, p.word);
    if (!l) return std::nullopt;
    const auto& dl = x.domain.leaf(*l);
    Word rest(p.word.begin() + static_cast<long>(dl.addr.size()), p.word.end());
    const auto& rl = x.range.leaf(x.w.sigma(*l));
    BoundaryPoint out{rl.root, rl.addr};
    Word moved = evaluate(x.w.entries[static_cast<std::size_t>(*l - 1)], rest);
    out.word.insert(out.word.end(), moved.begin(), moved.end());
    return out;
}

std::optional<Word> boundary_eval(const ForestPair& x, const Word& u) {
    auto r = boundary_eval(x, BoundaryPoint{1, u});
    if (!r) return std::nullopt;
    return r->word;
}

ForestPair parse_element(const std::string& text, int arity, const Names& names) {
    std::string t = trim(text);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']') throw std::invalid_argument("element literal must be [ ... ]");
    auto parts = split(t.substr(1, t.size() - 2), '|');
    if (parts.size() != 3) throw std::invalid_argument("element literal needs range | element | domain");
    Forest range = Forest::parse(parts[0], arity), domain = Forest::parse(parts[2], arity);
    if (range.leaves() != domain.leaves()) throw std::invalid_argument("forests have different leaf counts");
    return ForestPair(range, parse_wreath(parts[1], domain.leaves(), arity, names), domain);
}

std::string to_string(const ForestPair& x, const Names& names) {
    return "[ " + x.range.to_string() + " | " + to_string(x.w, names) + " | " + x.domain.to_string() + " ]";
}

DiagramFormat parse_diagram_format(const std::string& s) {
    if (s == "dot" || s == "DOT") return DiagramFormat::Dot;
    if (s == "tikz" || s == "TIKZ") return DiagramFormat::Tikz;
    throw std::invalid_argument("unknown diagram format '" + s + "'");
}

namespace {

std::string node_id(char side, const Forest::Leaf& v) {
    std::string s(1, side);
    s += std::to_string(v.root) + "_";
    for (int x : v.addr) s += std::to_string(x);
    return s;
}

// Horizontal position of a vertex: the mean position of the leaves below it.
double x_of(const Forest& f, const Forest::Leaf& v) {
    double sum = 0;
    int count = 0;
    for (int i = 1; i <= f.leaves(); ++i) {
        const auto& l = f.leaf(i);
        if (l.root == v.root && is_prefix(v.addr, l.addr)) {
            sum += i;
            ++count;
        }
    }
    return sum / count;
}

}  // namespace

std::string strand_diagram(const ForestPair& x, const Names& names, DiagramFormat format) {
    std::ostringstream out;
    const int n = x.leaves();
    auto range_in = x.range.internal(), domain_in = x.domain.internal();
    if (format == DiagramFormat::Dot) {
        out << "digraph strand {\n  rankdir=TB;\n  node [shape=point];\n";
        for (int r = 1; r <= x.heads(); ++r) out << "  " << node_id('R', {r, {}}) << " [shape=circle,label=\"\"];\n";
        for (const auto& v : range_in) out << "  " << node_id('R', v) << " [comment=split];\n";
        for (const auto& v : range_in)
            for (int j = 1; j <= x.arity(); ++j) {
                Forest::Leaf c = v;
                c.addr.push_back(j);
                out << "  " << node_id('R', v) << " -> " << node_id('R', c) << ";\n";
            }
        for (int i = 1; i <= n; ++i) {
            const auto& dl = x.domain.leaf(i);
            const auto& rl = x.range.leaf(x.w.sigma(i));
            out << "  " << node_id('D', dl) << " -> " << node_id('R', rl) << " [taillabel=\""
                << names.print(x.w.entries[static_cast<std::size_t>(i - 1)]) << "\"];\n";
        }
        for (const auto& v : domain_in) out << "  " << node_id('D', v) << " [comment=merge];\n";
        for (const auto& v : domain_in)
            for (int j = 1; j <= x.arity(); ++j) {
                Forest::Leaf c = v;
                c.addr.push_back(j);
                out << "  " << node_id('D', v) << " -> " << node_id('D', c) << " [dir=back];\n";
            }
        for (int r = 1; r <= x.feet(); ++r) out << "  " << node_id('D', {r, {}}) << " [shape=circle,label=\"\"];\n";
        out << "}\n";
        return out.str();
    }
    // TikZ: range tree above y = 1, domain tree below y = 0, strands in between.
    out << "\\begin{tikzpicture}[x=1cm,y=1cm]\n";
    auto draw_tree = [&](const Forest& f, const std::set<Forest::Leaf>& in, double base, double step, const char* kind) {
        int depth = 0;
        for (int i = 1; i <= f.leaves(); ++i) depth = std::max(depth, static_cast<int>(f.leaf(i).addr.size()));
        auto y_of = [&](const Forest::Leaf& v) { return base + step * (depth - static_cast<int>(v.addr.size())); };
        for (const auto& v : in) {
            out << "  % " << kind << "\n";
            for (int j = 1; j <= f.arity(); ++j) {
                Forest::Leaf c = v;
                c.addr.push_back(j);
                double yc = in.count(c) ? y_of(c) : base;
                out << "  \\draw (" << x_of(f, v) << "," << y_of(v) << ") -- (" << x_of(f, c) << "," << yc << ");\n";
            }
        }
    };
    draw_tree(x.range, range_in, 1.0, 0.6, "split");
    draw_tree(x.domain, domain_in, 0.0, -0.6, "merge");
    for (int i = 1; i <= n; ++i) {
        out << "  \\draw[->] (" << i << ",0) -- (" << x.w.sigma(i) << ",1) node[pos=0.1,right] {$"
            << names.print(x.w.entries[static_cast<std::size_t>(i - 1)]) << "$};\n";
    }
    out << "\\end{tikzpicture}\n";
    return out.str();
}

Forest random_forest(int roots, int carets, int d, std::mt19937& rng) {
    Forest f = Forest::trivial(roots, d);
    for (int c = 0; c < carets; ++c) {
        std::uniform_int_distribution<int> pick(1, f.leaves());
        f = f.add_caret(pick(rng));
    }
    return f;
}

ForestPair random_element(int roots, int carets, const std::vector<Aut>& pool, std::mt19937& rng) {
    if (pool.empty()) throw std::invalid_argument("empty pool");
    const int d = pool.front().arity();
    Forest r = random_forest(roots, carets, d, rng), dom = random_forest(roots, carets, d, rng);
    std::vector<int> img(static_cast<std::size_t>(r.leaves()));
    for (int i = 0; i < r.leaves(); ++i) img[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(img.begin(), img.end(), rng);
    std::vector<Aut> entries;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int i = 0; i < r.leaves(); ++i) entries.push_back(pool[pick(rng)]);
    return ForestPair(r, WreathElement(Permutation(img), entries), dom);
}

}  // namespace nekra
