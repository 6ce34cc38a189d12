#include "nekra/automata.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <deque>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace nekra {

Word parse_word(std::string_view text) {
    Word w;
    bool commas = text.find(',') != std::string_view::npos;
    if (commas) {
        std::string s(text);
        std::replace(s.begin(), s.end(), ',', ' ');
        std::istringstream in(s);
        int v;
        while (in >> v) w.push_back(v);
        return w;
    }
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("bad word: " + std::string(text));
        w.push_back(c - '0');
    }
    return w;
}

std::string format_word(const Word& w) {
    bool wide = std::any_of(w.begin(), w.end(), [](int x) { return x > 9; });
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (wide && i) s += ',';
        s += std::to_string(w[i]);
    }
    return s;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        case Verdict::Indeterminate: return "INDETERMINATE";
    }
    return "?";
}

namespace {

struct Node {
    Permutation perm;
    std::vector<std::uint32_t> kids;
};

// A state under construction: children refer either to existing ids or to other drafts.
struct Ref {
    bool draft;
    std::uint32_t index;
};
struct Draft {
    Permutation perm;
    std::vector<Ref> kids;
};

void append_u32(std::string& s, std::uint32_t v) {
    // varint
    while (v >= 0x80) {
        s.push_back(static_cast<char>((v & 0x7f) | 0x80));
        v >>= 7;
    }
    s.push_back(static_cast<char>(v));
}

// Serializes the automaton reachable from `start` in breadth-first order. On a minimized
// automaton this is a complete invariant of the automorphism.
template <class Perm, class Kids>
std::string canonical_key(std::uint32_t start, Perm perm_of, Kids kids_of) {
    std::unordered_map<std::uint32_t, std::uint32_t> num;
    std::vector<std::uint32_t> order{start};
    num[start] = 0;
    std::string key;
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::uint32_t u = order[i];
        const Permutation& p = perm_of(u);
        append_u32(key, static_cast<std::uint32_t>(p.degree()));
        for (int v : p.images()) append_u32(key, static_cast<std::uint32_t>(v));
        for (std::uint32_t k : kids_of(u)) {
            auto [it, fresh] = num.try_emplace(k, static_cast<std::uint32_t>(order.size()));
            if (fresh) order.push_back(k);
            append_u32(key, it->second);
        }
    }
    return key;
}

// Nodes live in fixed-size chunks so readers never see a reallocation; writers hold `mu`.
class Store {
public:
    static constexpr std::uint32_t kChunkBits = 12;
    static constexpr std::uint32_t kChunk = 1u << kChunkBits;
    static constexpr std::uint32_t kMaxChunks = 1u << 16;

    static Store& get() {
        static Store s;
        return s;
    }

    const Node& node(std::uint32_t id) const {
        return chunks_[id >> kChunkBits].load(std::memory_order_acquire)[id & (kChunk - 1)];
    }
    std::uint32_t size() const { return size_.load(std::memory_order_acquire); }

    // Caller holds mu.
    std::uint32_t push(Node n) {
        std::uint32_t id = size_.load(std::memory_order_relaxed);
        std::uint32_t c = id >> kChunkBits;
        if (c >= kMaxChunks) throw ResourceCap("automorphism store is full");
        if (!chunks_[c].load(std::memory_order_relaxed)) {
            owned_.push_back(std::make_unique<Node[]>(kChunk));
            chunks_[c].store(owned_.back().get(), std::memory_order_release);
        }
        chunks_[c].load(std::memory_order_relaxed)[id & (kChunk - 1)] = std::move(n);
        size_.store(id + 1, std::memory_order_release);
        return id;
    }

    std::mutex mu;
    std::unordered_map<std::string, std::uint32_t> by_key;
    std::unordered_map<std::uint64_t, std::uint32_t> products;
    std::unordered_map<std::uint32_t, std::uint32_t> inverses;
    std::unordered_map<int, std::uint32_t> identities;

private:
    Store() : chunks_(new std::atomic<Node*>[kMaxChunks]) {
        for (std::uint32_t i = 0; i < kMaxChunks; ++i) chunks_[i].store(nullptr);
        // id 0 is the identity of T_2, so a default-constructed handle is valid.
        Permutation one = Permutation::identity(2);
        push(Node{one, {0, 0}});
        by_key.emplace(canonical_key(0, [&](std::uint32_t) -> const Permutation& { return one; },
                                     [](std::uint32_t) { return std::vector<std::uint32_t>{0, 0}; }),
                       0);
        identities[2] = 0;
    }
    std::unique_ptr<std::atomic<Node*>[]> chunks_;
    std::vector<std::unique_ptr<Node[]>> owned_;
    std::atomic<std::uint32_t> size_{0};
};

// Minimizes drafts together with the existing states they reach and interns the result.
// Caller holds store.mu.
std::vector<std::uint32_t> finalize(Store& st, const std::vector<Draft>& drafts) {
    const std::uint32_t D = static_cast<std::uint32_t>(drafts.size());
    std::vector<std::uint32_t> existing;
    std::unordered_map<std::uint32_t, std::uint32_t> local;
    auto add_existing = [&](std::uint32_t id) {
        if (local.try_emplace(id, D + static_cast<std::uint32_t>(existing.size())).second) existing.push_back(id);
    };
    for (const auto& dr : drafts)
        for (Ref r : dr.kids)
            if (!r.draft) add_existing(r.index);
    for (std::size_t i = 0; i < existing.size(); ++i)
        for (std::uint32_t k : st.node(existing[i]).kids) add_existing(k);

    const std::uint32_t U = D + static_cast<std::uint32_t>(existing.size());
    std::vector<const Permutation*> perm(U);
    std::vector<std::vector<std::uint32_t>> kids(U);
    for (std::uint32_t i = 0; i < D; ++i) {
        perm[i] = &drafts[i].perm;
        for (Ref r : drafts[i].kids) kids[i].push_back(r.draft ? r.index : local.at(r.index));
    }
    for (std::size_t j = 0; j < existing.size(); ++j) {
        std::uint32_t u = D + static_cast<std::uint32_t>(j);
        const Node& n = st.node(existing[j]);
        perm[u] = &n.perm;
        for (std::uint32_t k : n.kids) kids[u].push_back(local.at(k));
    }

    // Moore partition refinement.
    std::vector<std::uint32_t> cls(U);
    std::size_t nclasses;
    {
        std::unordered_map<Permutation, std::uint32_t> first;
        for (std::uint32_t u = 0; u < U; ++u)
            cls[u] = first.try_emplace(*perm[u], static_cast<std::uint32_t>(first.size())).first->second;
        nclasses = first.size();
    }
    for (;;) {
        std::map<std::vector<std::uint32_t>, std::uint32_t> sig;
        std::vector<std::uint32_t> next(U);
        for (std::uint32_t u = 0; u < U; ++u) {
            std::vector<std::uint32_t> s;
            s.reserve(kids[u].size() + 1);
            s.push_back(cls[u]);
            for (std::uint32_t k : kids[u]) s.push_back(cls[k]);
            next[u] = sig.try_emplace(std::move(s), static_cast<std::uint32_t>(sig.size())).first->second;
        }
        cls.swap(next);
        if (sig.size() == nclasses) break;
        nclasses = sig.size();
    }

    constexpr std::uint32_t kNone = 0xffffffffu;
    std::vector<std::uint32_t> resolved(nclasses, kNone);
    std::vector<std::uint32_t> rep(nclasses, kNone);
    for (std::uint32_t u = 0; u < U; ++u) {
        if (rep[cls[u]] == kNone) rep[cls[u]] = u;
        if (u >= D) {
            std::uint32_t id = existing[u - D];
            if (resolved[cls[u]] != kNone && resolved[cls[u]] != id)
                throw std::logic_error("automorphism store lost minimality");
            resolved[cls[u]] = id;
        }
    }

    // Key lookup for classes with no existing member. Keys walk the quotient through classes.
    auto class_perm = [&](std::uint32_t c) -> const Permutation& { return *perm[rep[c]]; };
    auto class_kids = [&](std::uint32_t c) {
        std::vector<std::uint32_t> out;
        for (std::uint32_t k : kids[rep[c]]) out.push_back(cls[k]);
        return out;
    };
    std::vector<std::string> keys(nclasses);
    std::vector<std::uint32_t> fresh;
    for (std::uint32_t c = 0; c < nclasses; ++c) {
        if (resolved[c] != kNone) continue;
        keys[c] = canonical_key(c, class_perm, class_kids);
        auto it = st.by_key.find(keys[c]);
        if (it != st.by_key.end())
            resolved[c] = it->second;
        else
            fresh.push_back(c);
    }
    std::uint32_t next_id = st.size();
    for (std::size_t i = 0; i < fresh.size(); ++i) resolved[fresh[i]] = next_id + static_cast<std::uint32_t>(i);
    for (std::uint32_t c : fresh) {
        Node n;
        n.perm = class_perm(c);
        for (std::uint32_t k : kids[rep[c]]) n.kids.push_back(resolved[cls[k]]);
        std::uint32_t id = st.push(std::move(n));
        st.by_key.emplace(std::move(keys[c]), id);
    }

    std::vector<std::uint32_t> out(D);
    for (std::uint32_t i = 0; i < D; ++i) out[i] = resolved[cls[i]];
    return out;
}

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) { return (std::uint64_t{a} << 32) | b; }

}  // namespace

Aut Aut::identity(int d) {
    if (d < 2) throw std::invalid_argument("arity must be at least 2");
    Store& st = Store::get();
    std::lock_guard lock(st.mu);
    auto it = st.identities.find(d);
    if (it != st.identities.end()) return Aut(it->second);
    Draft dr{Permutation::identity(d), std::vector<Ref>(static_cast<std::size_t>(d), Ref{true, 0})};
    std::uint32_t id = finalize(st, {dr})[0];
    st.identities[d] = id;
    return Aut(id);
}

Aut Aut::make(const Permutation& perm, std::span<const Aut> children) {
    const int d = perm.degree();
    if (static_cast<int>(children.size()) != d)
        throw std::invalid_argument("wreath recursion needs " + std::to_string(d) + " states");
    for (Aut c : children)
        if (c.arity() != d) throw std::invalid_argument("arity mismatch in wreath recursion");
    Draft dr{perm, {}};
    for (Aut c : children) dr.kids.push_back(Ref{false, c.id()});
    Store& st = Store::get();
    std::lock_guard lock(st.mu);
    return Aut(finalize(st, {dr})[0]);
}

Aut Aut::from_id(std::uint32_t id) {
    if (id >= Store::get().size()) throw std::out_of_range("no automorphism with id " + std::to_string(id));
    return Aut(id);
}

int Aut::arity() const { return Store::get().node(id_).perm.degree(); }

const Permutation& Aut::perm() const { return Store::get().node(id_).perm; }

Aut Aut::state(int letter) const {
    const Node& n = Store::get().node(id_);
    if (letter < 1 || letter > n.perm.degree()) throw std::invalid_argument("letter out of range");
    return Aut(n.kids[static_cast<std::size_t>(letter - 1)]);
}

Aut Aut::state(const Word& u) const {
    Aut f = *this;
    for (int x : u) f = f.state(x);
    return f;
}

bool Aut::is_identity() const {
    // A minimized state with trivial label whose states are all itself is the identity.
    const Node& n = Store::get().node(id_);
    if (!n.perm.is_identity()) return false;
    for (std::uint32_t k : n.kids)
        if (k != id_) return false;
    return true;
}

Aut operator*(Aut f, Aut g) {
    if (f.arity() != g.arity()) throw std::invalid_argument("arity mismatch in product");
    if (g.is_identity()) return f;
    if (f.is_identity()) return g;
    Store& st = Store::get();
    {
        std::lock_guard lock(st.mu);
        auto it = st.products.find(pair_key(f.id(), g.id()));
        if (it != st.products.end()) return Aut::from_id(it->second);
    }
    const int d = f.arity();
    std::vector<Draft> drafts;
    std::vector<std::pair<Aut, Aut>> pairs;
    std::unordered_map<std::uint64_t, std::uint32_t> index;
    std::unordered_map<std::uint64_t, std::uint32_t> known;
    {
        std::lock_guard lock(st.mu);
        known = st.products;  // snapshot avoids locking per pair
    }
    auto ref_of = [&](Aut x, Aut y) -> Ref {
        if (y.is_identity()) return Ref{false, x.id()};
        if (x.is_identity()) return Ref{false, y.id()};
        std::uint64_t k = pair_key(x.id(), y.id());
        if (auto it = known.find(k); it != known.end()) return Ref{false, it->second};
        auto [it, fresh] = index.try_emplace(k, static_cast<std::uint32_t>(pairs.size()));
        if (fresh) pairs.emplace_back(x, y);
        return Ref{true, it->second};
    };
    ref_of(f, g);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (pairs.size() > 5'000'000) throw ResourceCap("product automaton too large");
        auto [x, y] = pairs[i];
        const Permutation& py = y.perm();
        Draft dr{x.perm() * py, {}};
        dr.kids.reserve(static_cast<std::size_t>(d));
        for (int j = 1; j <= d; ++j) dr.kids.push_back(ref_of(x.state(py(j)), y.state(j)));
        drafts.push_back(std::move(dr));
    }
    std::lock_guard lock(st.mu);
    auto ids = finalize(st, drafts);
    for (std::size_t i = 0; i < pairs.size(); ++i)
        st.products[pair_key(pairs[i].first.id(), pairs[i].second.id())] = ids[i];
    return Aut::from_id(ids[0]);
}

Aut inverse(Aut f) {
    if (f.is_identity()) return f;
    Store& st = Store::get();
    {
        std::lock_guard lock(st.mu);
        auto it = st.inverses.find(f.id());
        if (it != st.inverses.end()) return Aut::from_id(it->second);
    }
    const int d = f.arity();
    std::vector<Draft> drafts;
    std::vector<Aut> order;
    std::unordered_map<std::uint32_t, std::uint32_t> index;
    auto ref_of = [&](Aut x) -> Ref {
        if (x.is_identity()) return Ref{false, x.id()};
        auto [it, fresh] = index.try_emplace(x.id(), static_cast<std::uint32_t>(order.size()));
        if (fresh) order.push_back(x);
        return Ref{true, it->second};
    };
    ref_of(f);
    for (std::size_t i = 0; i < order.size(); ++i) {
        Aut x = order[i];
        Permutation pinv = x.perm().inverse();
        Draft dr{pinv, {}};
        for (int j = 1; j <= d; ++j) dr.kids.push_back(ref_of(x.state(pinv(j))));
        drafts.push_back(std::move(dr));
    }
    std::lock_guard lock(st.mu);
    auto ids = finalize(st, drafts);
    for (std::size_t i = 0; i < order.size(); ++i) {
        st.inverses[order[i].id()] = ids[i];
        st.inverses[ids[i]] = order[i].id();
    }
    return Aut::from_id(ids[0]);
}

Aut power(Aut f, long e) {
    if (e < 0) return power(inverse(f), -e);
    Aut result = Aut::identity(f.arity());
    Aut base = f;
    while (e > 0) {
        if (e & 1) result = result * base;
        base = base * base;
        e >>= 1;
    }
    return result;
}

Word evaluate(Aut f, const Word& u) {
    const int d = f.arity();
    Word out;
    out.reserve(u.size());
    for (int x : u) {
        if (x < 1 || x > d) throw std::invalid_argument("letter " + std::to_string(x) + " out of range 1.." +
                                                        std::to_string(d));
        out.push_back(f.perm()(x));
        f = f.state(x);
    }
    return out;
}

Verdict aut_equal(Aut f, Aut g, std::size_t cap) {
    if (f.arity() != g.arity()) throw std::invalid_argument("arity mismatch in equality test");
    std::unordered_set<std::uint64_t> seen;
    std::vector<std::pair<Aut, Aut>> stack{{f, g}};
    seen.insert(pair_key(f.id(), g.id()));
    while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        if (x.perm() != y.perm()) return Verdict::Fail;
        for (int j = 1; j <= x.arity(); ++j) {
            Aut a = x.state(j), b = y.state(j);
            if (seen.insert(pair_key(a.id(), b.id())).second) {
                if (seen.size() > cap) return Verdict::Indeterminate;
                stack.emplace_back(a, b);
            }
        }
    }
    return Verdict::Pass;
}

std::vector<Aut> reachable_states(Aut f) {
    std::vector<Aut> order{f};
    std::unordered_set<Aut> seen{f};
    for (std::size_t i = 0; i < order.size(); ++i)
        for (int j = 1; j <= f.arity(); ++j) {
            Aut s = order[i].state(j);
            if (seen.insert(s).second) order.push_back(s);
        }
    return order;
}

std::size_t store_size() { return Store::get().size(); }

Portrait portrait(Aut f, int depth) {
    if (depth < 0) throw std::invalid_argument("negative depth");
    Portrait p;
    p.arity = f.arity();
    std::vector<Aut> level{f};
    for (int n = 0; n <= depth; ++n) {
        std::vector<Permutation> labels;
        std::vector<Aut> next;
        for (Aut s : level) {
            labels.push_back(s.perm());
            if (n < depth)
                for (int j = 1; j <= p.arity; ++j) next.push_back(s.state(j));
        }
        p.labels.push_back(std::move(labels));
        level.swap(next);
    }
    return p;
}

TransitivityCertificate level_transitive_binary(Aut f, int depth) {
    if (f.arity() != 2) throw std::invalid_argument("parity criterion is for the binary tree only");
    if (depth < 0 || depth > 62) throw std::invalid_argument("depth must lie in 0..62");
    TransitivityCertificate cert;
    std::unordered_map<Aut, std::uint64_t> level{{f, 1}};
    for (int n = 0; n <= depth; ++n) {
        std::uint64_t count = 0;
        std::unordered_map<Aut, std::uint64_t> next;
        for (auto [s, c] : level) {
            if (!s.perm().is_identity()) count += c;
            if (n < depth) {
                next[s.state(1)] += c;
                next[s.state(2)] += c;
            }
        }
        cert.nontrivial_counts.push_back(count);
        cert.levels_checked = n;
        if (count % 2 == 0) {
            cert.failing_level = n;
            return cert;
        }
        level.swap(next);
    }
    cert.pass = true;
    return cert;
}

bool level_transitive_bruteforce(Aut f, int depth) {
    const int d = f.arity();
    for (int n = 1; n <= depth; ++n) {
        Word start(static_cast<std::size_t>(n), 1);
        std::uint64_t size = 1;
        for (int i = 0; i < n; ++i) size *= static_cast<std::uint64_t>(d);
        std::uint64_t orbit = 0;
        Word v = start;
        do {
            v = evaluate(f, v);
            ++orbit;
        } while (v != start && orbit <= size);
        if (orbit != size) return false;
    }
    return true;
}

namespace {

std::set<Aut> state_closure(const std::set<Aut>& seeds) {
    std::set<Aut> out;
    std::vector<Aut> todo(seeds.begin(), seeds.end());
    while (!todo.empty()) {
        Aut s = todo.back();
        todo.pop_back();
        if (!out.insert(s).second) continue;
        for (int j = 1; j <= s.arity(); ++j) todo.push_back(s.state(j));
    }
    return out;
}

// States lying on a cycle of the state graph restricted to a closed set.
std::set<Aut> cyclic_states(const std::set<Aut>& closed) {
    std::vector<Aut> nodes(closed.begin(), closed.end());
    std::unordered_map<Aut, int> idx;
    for (std::size_t i = 0; i < nodes.size(); ++i) idx[nodes[i]] = static_cast<int>(i);
    const int n = static_cast<int>(nodes.size());
    // Tarjan, iterative.
    std::vector<int> low(n, -1), num(n, -1), comp(n, -1);
    std::vector<bool> on(n, false);
    std::vector<int> st;
    int counter = 0, ncomp = 0;
    std::vector<int> comp_size;
    for (int r = 0; r < n; ++r) {
        if (num[r] != -1) continue;
        std::vector<std::pair<int, int>> call{{r, 0}};
        num[r] = low[r] = counter++;
        st.push_back(r);
        on[r] = true;
        while (!call.empty()) {
            auto& [v, j] = call.back();
            if (j < nodes[v].arity()) {
                int w = idx.at(nodes[v].state(++j));
                if (num[w] == -1) {
                    num[w] = low[w] = counter++;
                    st.push_back(w);
                    on[w] = true;
                    call.emplace_back(w, 0);
                } else if (on[w]) {
                    low[v] = std::min(low[v], num[w]);
                }
            } else {
                if (low[v] == num[v]) {
                    int size = 0;
                    for (;;) {
                        int w = st.back();
                        st.pop_back();
                        on[w] = false;
                        comp[w] = ncomp;
                        ++size;
                        if (w == v) break;
                    }
                    comp_size.push_back(size);
                    ++ncomp;
                }
                int done = v;
                call.pop_back();
                if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
            }
        }
    }
    std::set<Aut> out;
    for (int v = 0; v < n; ++v) {
        bool self = false;
        for (int j = 1; j <= nodes[v].arity(); ++j)
            if (nodes[v].state(j) == nodes[v]) self = true;
        if (comp_size[comp[v]] > 1 || self) out.insert(nodes[v]);
    }
    return out;
}

}  // namespace

NucleusResult nucleus(std::span<const Aut> generators, std::size_t cap) {
    NucleusResult res;
    if (generators.empty()) return res;
    const int d = generators.front().arity();
    std::set<Aut> seeds{Aut::identity(d)};
    for (Aut g : generators) {
        seeds.insert(g);
        seeds.insert(inverse(g));
    }
    std::set<Aut> closed = state_closure(seeds);
    if (closed.size() > cap) return res;
    std::set<Aut> nuc = state_closure(cyclic_states(closed));
    for (;;) {
        if (nuc.size() > cap) return res;
        std::set<Aut> prods;
        for (Aut x : nuc)
            for (Aut y : nuc) prods.insert(x * y);
        std::set<Aut> work = state_closure(prods);
        if (work.size() > cap) return res;
        std::set<Aut> next = nuc;
        for (Aut s : cyclic_states(work)) next.insert(s);
        next = state_closure(next);
        if (next == nuc) break;
        nuc.swap(next);
    }
    res.contracting = true;
    res.elements.assign(nuc.begin(), nuc.end());
    return res;
}

// ---- AutomatonSpec -------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

bool valid_name(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    });
}

}  // namespace

AutomatonSpec AutomatonSpec::parse(std::string_view text) {
    AutomatonSpec spec;
    bool have_arity = false;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    std::set<std::string> names{"e"};
    auto fail = [&](const std::string& msg) {
        throw std::invalid_argument("automaton line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.rfind("arity", 0) == 0) {
            if (have_arity) fail("duplicate arity");
            try {
                spec.arity = std::stoi(t.substr(5));
            } catch (const std::exception&) {
                fail("bad arity");
            }
            if (spec.arity < 2) fail("arity must be at least 2");
            have_arity = true;
            continue;
        }
        if (t.rfind("state", 0) != 0) fail("expected 'arity' or 'state'");
        if (!have_arity) fail("arity must come first");
        auto colon = t.find(':');
        if (colon == std::string::npos) fail("missing ':'");
        State s;
        s.name = trim(t.substr(5, colon - 5));
        if (!valid_name(s.name)) fail("bad state name '" + s.name + "'");
        if (!names.insert(s.name).second) fail("state '" + s.name + "' defined twice");
        std::string rest = t.substr(colon + 1);
        bool have_perm = false, have_kids = false;
        std::istringstream fields(rest);
        std::string field;
        while (std::getline(fields, field, ';')) {
            field = trim(field);
            if (field.empty()) continue;
            auto eq = field.find('=');
            if (eq == std::string::npos) fail("expected key=value");
            std::string key = trim(field.substr(0, eq)), val = trim(field.substr(eq + 1));
            if (key == "perm") {
                try {
                    s.perm = Permutation::parse(val, spec.arity);
                } catch (const std::exception& ex) {
                    fail(ex.what());
                }
                have_perm = true;
            } else if (key == "children") {
                std::istringstream kids(val);
                std::string k;
                while (std::getline(kids, k, ',')) s.children.push_back(trim(k));
                have_kids = true;
            } else {
                fail("unknown key '" + key + "'");
            }
        }
        if (!have_perm || !have_kids) fail("state needs perm= and children=");
        if (static_cast<int>(s.children.size()) != spec.arity)
            fail("state '" + s.name + "' needs " + std::to_string(spec.arity) + " children");
        spec.states.push_back(std::move(s));
    }
    if (!have_arity) throw std::invalid_argument("automaton has no arity line");
    for (const auto& s : spec.states)
        for (const auto& c : s.children)
            if (!names.count(c)) throw std::invalid_argument("unknown state '" + c + "' in children of " + s.name);
    return spec;
}

AutomatonSpec AutomatonSpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string AutomatonSpec::to_string() const {
    std::string out = "arity " + std::to_string(arity) + "\n";
    for (const auto& s : states) {
        out += "state " + s.name + ": perm=" + s.perm.cycles() + "; children=";
        for (std::size_t i = 0; i < s.children.size(); ++i) {
            if (i) out += ',';
            out += s.children[i];
        }
        out += '\n';
    }
    return out;
}

std::map<std::string, Aut> AutomatonSpec::realize() const {
    Aut e = Aut::identity(arity);
    std::map<std::string, std::uint32_t> idx;
    for (std::size_t i = 0; i < states.size(); ++i) idx[states[i].name] = static_cast<std::uint32_t>(i);
    std::vector<Draft> drafts;
    for (const auto& s : states) {
        Draft dr{s.perm, {}};
        for (const auto& c : s.children)
            dr.kids.push_back(c == "e" ? Ref{false, e.id()} : Ref{true, idx.at(c)});
        drafts.push_back(std::move(dr));
    }
    std::map<std::string, Aut> out{{"e", e}};
    if (drafts.empty()) return out;
    Store& st = Store::get();
    std::vector<std::uint32_t> ids;
    {
        std::lock_guard lock(st.mu);
        ids = finalize(st, drafts);
    }
    for (std::size_t i = 0; i < states.size(); ++i) out[states[i].name] = Aut::from_id(ids[i]);
    return out;
}

AutomatonSpec AutomatonSpec::describe(const std::vector<std::pair<std::string, Aut>>& named) {
    AutomatonSpec spec;
    if (named.empty()) return spec;
    spec.arity = named.front().second.arity();
    std::unordered_map<Aut, std::string> name;
    name[Aut::identity(spec.arity)] = "e";
    std::vector<Aut> order;
    for (const auto& [n, a] : named) {
        if (a.arity() != spec.arity) throw std::invalid_argument("mixed arities");
        if (name.try_emplace(a, n).second) order.push_back(a);
    }
    int fresh = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (int j = 1; j <= spec.arity; ++j) {
            Aut s = order[i].state(j);
            if (!name.count(s)) {
                std::string n;
                do n = "s" + std::to_string(++fresh);
                while (std::any_of(named.begin(), named.end(), [&](const auto& p) { return p.first == n; }));
                name[s] = n;
                order.push_back(s);
            }
        }
    for (Aut a : order) {
        State s{name[a], a.perm(), {}};
        for (int j = 1; j <= spec.arity; ++j) s.children.push_back(name[a.state(j)]);
        spec.states.push_back(std::move(s));
    }
    // Named handles that are the identity still get a line, so every requested name is defined.
    for (const auto& [n, a] : named)
        if (a.is_identity() && n != "e")
            spec.states.push_back(State{n, Permutation::identity(spec.arity),
                                        std::vector<std::string>(static_cast<std::size_t>(spec.arity), "e")});
    return spec;
}

}  // namespace nekra
