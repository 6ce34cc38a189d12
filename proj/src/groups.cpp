#include "nekra/groups.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace nekra {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
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

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Permutation cycle_perm(int d, int power) {
    std::vector<int> img(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) img[static_cast<std::size_t>(i)] = (i + power) % d + 1;
    return Permutation(img);
}

}  // namespace

// ---- subgroups -----------------------------------------------------------

SubgroupSpec SubgroupSpec::finite(std::vector<Aut> elements) {
    if (elements.empty()) throw std::invalid_argument("finite subgroup needs at least the identity");
    SubgroupSpec s;
    s.kind = Kind::FiniteEnumerated;
    s.arity = elements.front().arity();
    std::set<Aut> set(elements.begin(), elements.end());
    if (!set.count(Aut::identity(s.arity))) throw std::invalid_argument("subgroup list lacks the identity");
    for (Aut x : set) {
        if (!set.count(inverse(x))) throw std::invalid_argument("subgroup list is not closed under inverses");
        for (Aut y : set)
            if (!set.count(x * y)) throw std::invalid_argument("subgroup list is not closed under products");
    }
    s.elements.assign(set.begin(), set.end());
    return s;
}

SubgroupSpec SubgroupSpec::whole(int arity) {
    SubgroupSpec s;
    s.kind = Kind::WholeGroup;
    s.arity = arity;
    return s;
}

SubgroupSpec SubgroupSpec::generated(std::vector<Aut> generators, std::size_t fuel) {
    if (generators.empty()) throw std::invalid_argument("generated subgroup needs generators");
    SubgroupSpec s;
    s.kind = Kind::Generated;
    s.arity = generators.front().arity();
    s.generators = std::move(generators);
    s.fuel = fuel;
    return s;
}

Verdict SubgroupSpec::contains(Aut g) const {
    switch (kind) {
        case Kind::WholeGroup:
            return Verdict::Pass;
        case Kind::FiniteEnumerated:
            return std::binary_search(elements.begin(), elements.end(), g) ? Verdict::Pass : Verdict::Fail;
        case Kind::Generated: {
            std::vector<Aut> steps;
            for (Aut x : generators) {
                steps.push_back(x);
                steps.push_back(inverse(x));
            }
            std::unordered_set<Aut> seen{Aut::identity(arity)};
            std::deque<Aut> queue{Aut::identity(arity)};
            while (!queue.empty()) {
                Aut x = queue.front();
                queue.pop_front();
                if (x == g) return Verdict::Pass;
                for (Aut s : steps) {
                    Aut y = x * s;
                    if (seen.insert(y).second) {
                        if (seen.size() > fuel) return Verdict::Indeterminate;
                        queue.push_back(y);
                    }
                }
            }
            return Verdict::Fail;
        }
    }
    return Verdict::Indeterminate;
}

std::vector<Aut> ball(const std::vector<Aut>& gens, int radius, std::size_t cap) {
    if (gens.empty()) return {};
    std::vector<Aut> steps;
    for (Aut x : gens) {
        steps.push_back(x);
        steps.push_back(inverse(x));
    }
    Aut e = Aut::identity(gens.front().arity());
    std::vector<Aut> out{e};
    std::unordered_set<Aut> seen{e};
    std::size_t begin = 0;
    for (int r = 0; r < radius; ++r) {
        std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i)
            for (Aut s : steps) {
                Aut y = out[i] * s;
                if (seen.insert(y).second) {
                    if (out.size() >= cap) throw ResourceCap("ball exceeds " + std::to_string(cap) + " elements");
                    out.push_back(y);
                }
            }
        begin = end;
    }
    return out;
}

std::optional<std::vector<Aut>> enumerate_finite(const std::vector<Aut>& gens, std::size_t cap) {
    if (gens.empty()) return std::nullopt;
    Aut e = Aut::identity(gens.front().arity());
    std::vector<Aut> out{e};
    std::unordered_set<Aut> seen{e};
    for (std::size_t i = 0; i < out.size(); ++i)
        for (Aut s : gens) {
            Aut y = out[i] * s;
            if (seen.insert(y).second) {
                if (out.size() >= cap) return std::nullopt;
                out.push_back(y);
            }
        }
    return out;
}

// ---- finite groups and Sunic data ------------------------------------------

int FiniteGroup::inv(int x) const {
    for (int y = 0; y < size(); ++y)
        if (mul(x, y) == 0) return y;
    throw std::logic_error("finite group element without inverse");
}

int FiniteGroup::index_of(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (names[static_cast<std::size_t>(i)] == name) return i;
    throw std::invalid_argument("unknown element '" + name + "'");
}

FiniteGroup FiniteGroup::klein(const std::vector<std::string>& names) {
    if (names.size() != 4) throw std::invalid_argument("K4 needs four element names");
    FiniteGroup g;
    g.names = names;
    // Elements as bit vectors 00, 01, 10, 11; the product is xor.
    g.table.assign(4, std::vector<int>(4));
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) g.table[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = x ^ y;
    return g;
}

FiniteGroup FiniteGroup::cyclic(const std::vector<std::string>& names) {
    const int n = static_cast<int>(names.size());
    if (n < 1) throw std::invalid_argument("cyclic group needs names");
    FiniteGroup g;
    g.names = names;
    g.table.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) g.table[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = (x + y) % n;
    return g;
}

namespace {

int parse_a_power(const std::string& s, int d) {
    if (s == "1" || s == "e" || s == "id") return 0;
    if (s == "a") return 1 % d;
    std::string rest;
    if (s.rfind("a^", 0) == 0)
        rest = s.substr(2);
    else if (s.size() > 1 && s[0] == 'a')
        rest = s.substr(1);
    else
        throw std::invalid_argument("omega values must be powers of a, got '" + s + "'");
    try {
        return std::stoi(rest) % d;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad power of a: '" + s + "'");
    }
}

}  // namespace

SunicData SunicData::parse(std::string_view text) {
    SunicData data;
    data.arity = 0;
    std::string body;
    for (const auto& line : split(text, '\n')) {
        std::string l = line.substr(0, line.find('#'));
        body += l + ";";
    }
    std::vector<std::pair<std::string, std::string>> omega_pairs, rho_pairs;
    bool have_B = false;
    for (const auto& part : split(body, ';')) {
        if (part.empty()) continue;
        if (part.rfind("d=", 0) == 0 || part.rfind("d =", 0) == 0) {
            data.arity = std::stoi(part.substr(part.find('=') + 1));
        } else if (part.rfind("B", 0) == 0 && part.find('=') != std::string::npos) {
            std::string rhs = trim(part.substr(part.find('=') + 1));
            auto lb = rhs.find('{'), rb = rhs.find('}');
            if (lb == std::string::npos || rb == std::string::npos) throw std::invalid_argument("B needs {names}");
            std::string kind = trim(rhs.substr(0, lb));
            auto names = split(rhs.substr(lb + 1, rb - lb - 1), ',');
            if (kind == "K4")
                data.B = FiniteGroup::klein(names);
            else if (kind.size() > 1 && kind[0] == 'Z') {
                if (std::stoi(kind.substr(1)) != static_cast<int>(names.size()))
                    throw std::invalid_argument("cyclic order does not match the number of names");
                data.B = FiniteGroup::cyclic(names);
            } else
                throw std::invalid_argument("unknown group kind '" + kind + "'");
            have_B = true;
        } else if (part.rfind("omega", 0) == 0 || part.rfind("rho", 0) == 0) {
            bool is_omega = part[0] == 'o';
            auto colon = part.find(':');
            if (colon == std::string::npos) throw std::invalid_argument("expected ':' in '" + part + "'");
            for (const auto& m : split(part.substr(colon + 1), ',')) {
                if (m.empty()) continue;
                auto arrow = m.find("->");
                if (arrow == std::string::npos) throw std::invalid_argument("expected x->y in '" + m + "'");
                (is_omega ? omega_pairs : rho_pairs).emplace_back(trim(m.substr(0, arrow)), trim(m.substr(arrow + 2)));
            }
        } else {
            throw std::invalid_argument("unrecognized clause '" + part + "'");
        }
    }
    if (data.arity < 2) throw std::invalid_argument("d must be at least 2");
    if (!have_B) throw std::invalid_argument("missing B");
    const int n = data.B.size();
    data.omega.assign(static_cast<std::size_t>(n), -1);
    data.omega[0] = 0;
    data.rho.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) data.rho[static_cast<std::size_t>(i)] = i;
    for (auto& [x, y] : omega_pairs) data.omega[static_cast<std::size_t>(data.B.index_of(x))] = parse_a_power(y, data.arity);
    for (auto& [x, y] : rho_pairs) data.rho[static_cast<std::size_t>(data.B.index_of(x))] = data.B.index_of(y);
    for (int i = 0; i < n; ++i)
        if (data.omega[static_cast<std::size_t>(i)] < 0)
            throw std::invalid_argument("omega is not given on '" + data.B.names[static_cast<std::size_t>(i)] + "'");
    return data;
}

SunicData SunicData::load(const std::string& path) { return parse(read_file(path)); }

std::string SunicData::to_string() const {
    std::ostringstream out;
    bool klein = B.size() == 4 && B.mul(1, 1) == 0 && B.mul(2, 2) == 0 && B.mul(3, 3) == 0;
    out << "d=" << arity << "; B=" << (klein ? std::string("K4") : "Z" + std::to_string(B.size())) << "{";
    for (int i = 0; i < B.size(); ++i) out << (i ? "," : "") << B.names[static_cast<std::size_t>(i)];
    out << "}; omega: ";
    auto power = [](int k) { return k == 0 ? std::string("1") : k == 1 ? std::string("a") : "a" + std::to_string(k); };
    for (int i = 1; i < B.size(); ++i)
        out << (i > 1 ? ", " : "") << B.names[static_cast<std::size_t>(i)] << "->" << power(omega[static_cast<std::size_t>(i)]);
    out << "; rho: ";
    for (int i = 1; i < B.size(); ++i)
        out << (i > 1 ? ", " : "") << B.names[static_cast<std::size_t>(i)] << "->"
            << B.names[static_cast<std::size_t>(rho[static_cast<std::size_t>(i)])];
    return out.str();
}

void SunicData::validate() const {
    const int n = B.size();
    if (static_cast<int>(omega.size()) != n || static_cast<int>(rho.size()) != n)
        throw std::invalid_argument("omega and rho must be defined on all of B");
    std::vector<bool> hit(static_cast<std::size_t>(n), false);
    for (int x = 0; x < n; ++x) hit[static_cast<std::size_t>(rho[static_cast<std::size_t>(x)])] = true;
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) throw std::invalid_argument("rho is not a bijection");
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            int xy = B.mul(x, y);
            if (omega[static_cast<std::size_t>(xy)] !=
                (omega[static_cast<std::size_t>(x)] + omega[static_cast<std::size_t>(y)]) % arity)
                throw std::invalid_argument("omega is not a homomorphism");
            if (rho[static_cast<std::size_t>(xy)] != B.mul(rho[static_cast<std::size_t>(x)], rho[static_cast<std::size_t>(y)]))
                throw std::invalid_argument("rho is not a homomorphism");
        }
    for (int x = 1; x < n; ++x) {
        bool in_kernel = true;
        int y = x;
        do {
            if (omega[static_cast<std::size_t>(y)] != 0) in_kernel = false;
            y = rho[static_cast<std::size_t>(y)];
        } while (y != x);
        if (in_kernel)
            throw std::invalid_argument("the rho-orbit of '" + B.names[static_cast<std::size_t>(x)] +
                                        "' lies in the kernel of omega");
    }
}

std::vector<Aut> SunicGroup::generators() const {
    std::vector<Aut> out{a};
    for (std::size_t i = 1; i < B.size(); ++i) out.push_back(B[i]);
    return out;
}

SunicGroup make_sunic(const SunicData& data) {
    data.validate();
    const int d = data.arity;
    AutomatonSpec spec;
    spec.arity = d;
    auto power_name = [](int k) { return k == 0 ? std::string("e") : k == 1 ? std::string("a") : "a" + std::to_string(k); };
    for (int k = 1; k < d; ++k) spec.states.push_back({power_name(k), cycle_perm(d, k), std::vector<std::string>(static_cast<std::size_t>(d), "e")});
    auto b_name = [&](int x) { return x == 0 ? std::string("e") : data.B.names[static_cast<std::size_t>(x)]; };
    for (int x = 1; x < data.B.size(); ++x) {
        const std::string& nm = data.B.names[static_cast<std::size_t>(x)];
        for (int k = 1; k < d; ++k)
            if (nm == power_name(k)) throw std::invalid_argument("element name '" + nm + "' clashes with a power of a");
        std::vector<std::string> kids(static_cast<std::size_t>(d), "e");
        kids.front() = power_name(data.omega[static_cast<std::size_t>(x)]);
        kids.back() = b_name(data.rho[static_cast<std::size_t>(x)]);
        spec.states.push_back({nm, Permutation::identity(d), kids});
    }
    auto realized = spec.realize();
    SunicGroup g;
    g.arity = d;
    g.a = realized.at("a");
    for (int k = 0; k < d; ++k) g.a_powers.push_back(realized.at(power_name(k)));
    for (int x = 0; x < data.B.size(); ++x) g.B.push_back(realized.at(b_name(x)));
    g.named = realized;
    g.named[data.B.names[0]] = realized.at("e");
    return g;
}

SunicData grigorchuk_data() { return SunicData::parse("d=2; B=K4{1,b,c,d}; omega: b->a, c->a, d->1; rho: b->c, c->d, d->b"); }

SunicData fabrykowski_gupta_data() { return SunicData::parse("d=3; B=Z3{1,b,b2}; omega: b->a, b2->a2; rho: b->b, b2->b2"); }

std::vector<Aut> make_sd_embedding(const std::vector<Permutation>& gens) {
    std::vector<Aut> out;
    for (const auto& p : gens) {
        AutomatonSpec spec;
        spec.arity = p.degree();
        spec.states.push_back({"s", p, std::vector<std::string>(static_cast<std::size_t>(p.degree()), "s")});
        out.push_back(spec.realize().at("s"));
    }
    return out;
}

VorobetsGroup make_vorobets_free(int n, const std::vector<Permutation>& sigmas) {
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    if (static_cast<int>(sigmas.size()) != n + 1) throw std::invalid_argument("need sigma_0..sigma_n");
    int nontrivial = 0;
    for (const auto& s : sigmas) {
        if (s.degree() != 2) throw std::invalid_argument("sigmas must lie in S_2");
        if (!s.is_identity()) ++nontrivial;
    }
    if (nontrivial % 2 == 0) throw std::invalid_argument("an odd number of sigmas must be nontrivial");
    AutomatonSpec spec;
    spec.arity = 2;
    auto t = Permutation::parse("(1 2)", 2);
    auto dn = [](int i) { return "d" + std::to_string(i); };
    spec.states.push_back({"a", t, {"c", "b"}});
    spec.states.push_back({"b", t, {"b", "c"}});
    spec.states.push_back({"c", sigmas[0], {dn(1), dn(1)}});
    for (int i = 1; i < n; ++i) spec.states.push_back({dn(i), sigmas[static_cast<std::size_t>(i)], {dn(i + 1), dn(i + 1)}});
    spec.states.push_back({dn(n), sigmas[static_cast<std::size_t>(n)], {"a", "a"}});
    auto realized = spec.realize();
    VorobetsGroup g;
    g.n = n;
    for (const auto& s : spec.states) {
        g.names.push_back(s.name);
        g.gens.push_back(realized.at(s.name));
    }
    return g;
}

namespace {
std::vector<Permutation> default_sigmas(int n) {
    std::vector<Permutation> s(static_cast<std::size_t>(n + 1), Permutation::identity(2));
    s[1] = Permutation::parse("(1 2)", 2);
    return s;
}
}  // namespace

VorobetsGroup make_vorobets_free(int n) { return make_vorobets_free(n, default_sigmas(n)); }

std::map<std::string, Aut> make_gupta_sidki() {
    return AutomatonSpec::parse(
               "arity 3\n"
               "state a: perm=(1 2 3); children=e,e,e\n"
               "state a2: perm=(1 3 2); children=e,e,e\n"
               "state b: perm=(); children=a,a2,b\n")
        .realize();
}

// ---- checkers ------------------------------------------------------------

namespace {

std::optional<std::vector<Aut>> finite_members(const SubgroupSpec& H) {
    if (H.kind == SubgroupSpec::Kind::FiniteEnumerated) return H.elements;
    if (H.kind == SubgroupSpec::Kind::Generated) return enumerate_finite(H.generators, H.fuel);
    return std::nullopt;
}

bool in_list(const std::vector<Aut>& list, Aut x) { return std::find(list.begin(), list.end(), x) != list.end(); }

}  // namespace

CheckResult check_coarsely_self_similar(const SubgroupSpec& H, const std::vector<Aut>& A) {
    CheckResult r;
    if (H.kind == SubgroupSpec::Kind::WholeGroup) {
        r.message = "whole self-similar group: states stay in the group";
        return r;
    }
    auto members = finite_members(H);
    if (!members) {
        r.verdict = Verdict::Indeterminate;
        r.message = "could not enumerate H within the fuel";
        return r;
    }
    for (Aut h : *members)
        for (int i = 1; i <= h.arity(); ++i) {
            Aut s = h.state(i);
            if (in_list(*members, s) || in_list(A, s)) continue;
            r.verdict = Verdict::Fail;
            r.witness = h;
            r.position = i;
            r.message = "state at " + std::to_string(i) + " lies outside H and A";
            return r;
        }
    return r;
}

CheckResult check_orderly(const SubgroupSpec& H, const std::vector<Aut>& A) {
    CheckResult r;
    for (Aut a : A)
        for (int i = 1; i <= a.arity(); ++i)
            if (!a.state(i).is_identity()) {
                r.verdict = Verdict::Fail;
                r.condition = 1;
                r.witness = a;
                r.position = i;
                r.message = "artifact has a nontrivial state";
                return r;
            }
    if (H.kind != SubgroupSpec::Kind::WholeGroup) {
        auto members = finite_members(H);
        if (!members) {
            r.verdict = Verdict::Indeterminate;
            r.message = "could not enumerate H within the fuel";
            return r;
        }
        for (Aut h : *members) {
            int first = h.perm()(1);
            for (int i = 1; i <= h.arity(); ++i) {
                Aut s = h.state(i);
                bool ok = in_list(*members, s) || (i == first && in_list(A, s));
                if (ok) continue;
                r.verdict = Verdict::Fail;
                r.condition = 2;
                r.witness = h;
                r.position = i;
                r.message = i == first ? "state at the image of 1 lies outside H and A" : "state lies outside H";
                return r;
            }
        }
    }
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = i + 1; j < A.size(); ++j)
            if (A[i] != A[j] && A[i].perm()(1) == A[j].perm()(1)) {
                r.verdict = Verdict::Fail;
                r.condition = 3;
                r.witness = A[j];
                r.position = 1;
                r.message = "two artifacts send 1 to the same letter";
                return r;
            }
    return r;
}

NuclearReport check_nuclear(const std::vector<Aut>& gens, const std::vector<std::string>& names,
                            const SubgroupSpec& H, int word_len, int depth_cap) {
    NuclearReport report;
    auto alpha = Alphabet::of(gens, names);
    for (const auto& w : reduced_words(alpha, word_len)) {
        Aut g = word_value(alpha, w);
        NuclearEntry entry;
        entry.word = word_name(alpha, w);
        std::vector<Word> leaves{Word{}};
        for (;;) {
            auto bad = leaves.end();
            for (auto it = leaves.begin(); it != leaves.end(); ++it) {
                Verdict v = H.contains(g.state(*it));
                if (v == Verdict::Pass) continue;
                if (v == Verdict::Indeterminate) entry.verdict = Verdict::Indeterminate;
                bad = it;
                break;
            }
            if (entry.verdict == Verdict::Indeterminate) break;
            if (bad == leaves.end()) break;
            if (static_cast<int>(bad->size()) >= depth_cap) {
                entry.verdict = Verdict::Fail;
                break;
            }
            Word u = *bad;
            auto pos = leaves.erase(bad);
            std::vector<Word> kids;
            for (int x = 1; x <= g.arity(); ++x) {
                Word v = u;
                v.push_back(x);
                kids.push_back(v);
            }
            leaves.insert(pos, kids.begin(), kids.end());
        }
        if (entry.verdict == Verdict::Pass) entry.leaves = leaves;
        if (entry.verdict != Verdict::Pass && report.verdict == Verdict::Pass) {
            report.verdict = entry.verdict;
            report.failing_word = entry.word;
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

// ---- words ---------------------------------------------------------------

Alphabet Alphabet::of(const std::vector<Aut>& gens, const std::vector<std::string>& names) {
    if (names.size() != gens.size()) throw std::invalid_argument("one name per generator");
    Alphabet a;
    auto add = [&](Aut x, const std::string& nm) {
        if (std::find(a.symbols.begin(), a.symbols.end(), x) != a.symbols.end()) return;
        a.symbols.push_back(x);
        a.names.push_back(nm);
    };
    for (std::size_t i = 0; i < gens.size(); ++i) add(gens[i], names[i]);
    for (std::size_t i = 0; i < gens.size(); ++i) add(inverse(gens[i]), names[i] + "^-1");
    return a;
}

std::vector<std::vector<int>> reduced_words(const Alphabet& alpha, int max_len) {
    const int n = static_cast<int>(alpha.symbols.size());
    std::vector<std::vector<bool>> cancels(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cancels[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                (alpha.symbols[static_cast<std::size_t>(i)] * alpha.symbols[static_cast<std::size_t>(j)]).is_identity();
    std::vector<std::vector<int>> out, layer{{}};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<std::vector<int>> next;
        for (const auto& w : layer)
            for (int s = 0; s < n; ++s) {
                if (!w.empty() && cancels[static_cast<std::size_t>(w.back())][static_cast<std::size_t>(s)]) continue;
                auto v = w;
                v.push_back(s);
                next.push_back(std::move(v));
            }
        out.insert(out.end(), next.begin(), next.end());
        layer.swap(next);
    }
    return out;
}

Aut word_value(const Alphabet& alpha, const std::vector<int>& word) {
    Aut g = Aut::identity(alpha.symbols.empty() ? 2 : alpha.symbols.front().arity());
    for (int s : word) g = g * alpha.symbols[static_cast<std::size_t>(s)];
    return g;
}

std::string word_name(const Alphabet& alpha, const std::vector<int>& word) {
    std::string s;
    for (int x : word) s += alpha.names[static_cast<std::size_t>(x)];
    return s.empty() ? "1" : s;
}

// ---- free groups -----------------------------------------------------------

FreeWord free_reduce(const FreeWord& w) {
    FreeWord out;
    for (int x : w) {
        if (x == 0) throw std::invalid_argument("0 is not a free group letter");
        if (!out.empty() && out.back() == -x)
            out.pop_back();
        else
            out.push_back(x);
    }
    return out;
}

FreeWord free_inverse(const FreeWord& w) {
    FreeWord out(w.rbegin(), w.rend());
    for (int& x : out) x = -x;
    return out;
}

FreeWord free_mul(const FreeWord& x, const FreeWord& y) {
    FreeWord w = x;
    w.insert(w.end(), y.begin(), y.end());
    return free_reduce(w);
}

// ---- lazy actions ----------------------------------------------------------

bool LazyAction::is_involution(int i) const { return is_trivial_key(element_of_word({i + 1, i + 1})); }

AutomatonAction::AutomatonAction(std::vector<Aut> gens, std::vector<std::string> names)
    : gens_(std::move(gens)), names_(std::move(names)) {
    if (gens_.empty() || gens_.size() != names_.size()) throw std::invalid_argument("one name per generator");
}

int AutomatonAction::arity() const { return gens_.front().arity(); }

LazyAction::Key AutomatonAction::element_of_word(const FreeWord& word) const {
    Aut g = Aut::identity(arity());
    for (int x : word) {
        Aut s = gens_.at(static_cast<std::size_t>(std::abs(x) - 1));
        g = g * (x > 0 ? s : inverse(s));
    }
    return {static_cast<int>(g.id())};
}

Permutation AutomatonAction::perm(const Key& k) const { return Aut::from_id(static_cast<std::uint32_t>(k[0])).perm(); }

LazyAction::Key AutomatonAction::state(const Key& k, int letter) const {
    return {static_cast<int>(Aut::from_id(static_cast<std::uint32_t>(k[0])).state(letter).id())};
}

bool AutomatonAction::is_trivial_key(const Key& k) const {
    return Aut::from_id(static_cast<std::uint32_t>(k[0])).is_identity();
}

bool AutomatonAction::is_involution(int i) const {
    return inverse(gens_[static_cast<std::size_t>(i)]) == gens_[static_cast<std::size_t>(i)];
}

FreeTableAction::FreeTableAction(int arity, std::vector<std::string> names, std::vector<Permutation> perms,
                                 std::vector<std::vector<FreeWord>> states)
    : arity_(arity), names_(std::move(names)), perms_(std::move(perms)), states_(std::move(states)) {
    const std::size_t r = names_.size();
    if (perms_.size() != r || states_.size() != r) throw std::invalid_argument("table needs one row per generator");
    for (std::size_t i = 0; i < r; ++i) {
        if (perms_[i].degree() != arity_) throw std::invalid_argument("table permutation of wrong degree");
        if (static_cast<int>(states_[i].size()) != arity_) throw std::invalid_argument("table needs a state per letter");
        for (auto& w : states_[i]) {
            for (int x : w)
                if (x == 0 || static_cast<std::size_t>(std::abs(x)) > r) throw std::invalid_argument("bad letter in table");
            w = free_reduce(w);
        }
    }
}

FreeTableAction FreeTableAction::vorobets(int n, const std::vector<Permutation>& sigmas) {
    (void)make_vorobets_free(n, sigmas);  // validates the parameters
    std::vector<std::string> names{"a", "b", "c"};
    for (int i = 1; i <= n; ++i) names.push_back("d" + std::to_string(i));
    const int A = 1, B = 2, C = 3;
    auto D = [](int i) { return 3 + i; };
    auto t = Permutation::parse("(1 2)", 2);
    std::vector<Permutation> perms{t, t, sigmas[0]};
    std::vector<std::vector<FreeWord>> states{{{C}, {B}}, {{B}, {C}}, {{D(1)}, {D(1)}}};
    for (int i = 1; i <= n; ++i) {
        perms.push_back(sigmas[static_cast<std::size_t>(i)]);
        int next = i < n ? D(i + 1) : A;
        states.push_back({{next}, {next}});
    }
    return FreeTableAction(2, names, perms, states);
}

Permutation FreeTableAction::perm(const Key& k) const {
    Permutation p = Permutation::identity(arity_);
    for (int x : k) {
        const Permutation& g = perms_[static_cast<std::size_t>(std::abs(x) - 1)];
        p = p * (x > 0 ? g : g.inverse());
    }
    return p;
}

LazyAction::Key FreeTableAction::state(const Key& k, int letter) const {
    std::vector<FreeWord> pieces;
    int cur = letter;
    for (auto it = k.rbegin(); it != k.rend(); ++it) {
        int x = *it;
        std::size_t i = static_cast<std::size_t>(std::abs(x) - 1);
        if (x > 0) {
            pieces.push_back(states_[i][static_cast<std::size_t>(cur - 1)]);
            cur = perms_[i](cur);
        } else {
            int y = perms_[i].inverse()(cur);
            pieces.push_back(free_inverse(states_[i][static_cast<std::size_t>(y - 1)]));
            cur = y;
        }
    }
    FreeWord out;
    for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) out.insert(out.end(), it->begin(), it->end());
    return free_reduce(out);
}

CosetTableAction::CosetTableAction(std::vector<std::vector<int>> table, std::vector<int> generators,
                                   std::vector<int> K, std::vector<int> transversal, std::map<int, int> phi)
    : table_(std::move(table)), gens_(std::move(generators)), transversal_(std::move(transversal)), phi_(std::move(phi)) {
    const int n = static_cast<int>(table_.size());
    for (const auto& row : table_)
        if (static_cast<int>(row.size()) != n) throw std::invalid_argument("Cayley table must be square");
    identity_ = -1;
    for (int e = 0; e < n && identity_ < 0; ++e) {
        bool ok = true;
        for (int x = 0; x < n; ++x) ok = ok && mul(e, x) == x && mul(x, e) == x;
        if (ok) identity_ = e;
    }
    if (identity_ < 0) throw std::invalid_argument("Cayley table has no identity");
    in_K_.assign(static_cast<std::size_t>(n), false);
    for (int k : K) in_K_.at(static_cast<std::size_t>(k)) = true;
    for (int k : K)
        if (!phi_.count(k)) throw std::invalid_argument("phi is not defined on " + std::to_string(k));
    for (int x : K)
        for (int y : K)
            if (phi_.at(mul(x, y)) != mul(phi_.at(x), phi_.at(y))) throw std::invalid_argument("phi is not a homomorphism");
    if (static_cast<std::size_t>(n) != K.size() * transversal_.size())
        throw std::invalid_argument("transversal size does not match the index of K");
    for (int g = 0; g < n; ++g) (void)locate(g);
}

CosetTableAction CosetTableAction::parse(std::string_view text) {
    std::vector<std::vector<int>> table;
    std::vector<int> gens, K, X;
    std::map<int, int> phi;
    auto ints = [](const std::vector<std::string>& f) {
        std::vector<int> v;
        for (std::size_t i = 1; i < f.size(); ++i)
            if (!f[i].empty()) v.push_back(std::stoi(f[i]));
        return v;
    };
    for (const auto& raw : split(text, '\n')) {
        std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        auto f = split(line, ',');
        if (f[0] == "row")
            table.push_back(ints(f));
        else if (f[0] == "gens")
            gens = ints(f);
        else if (f[0] == "K")
            K = ints(f);
        else if (f[0] == "X")
            X = ints(f);
        else if (f[0] == "phi") {
            for (std::size_t i = 1; i < f.size(); ++i) {
                auto arrow = f[i].find("->");
                if (arrow == std::string::npos) throw std::invalid_argument("phi entries look like k->g");
                phi[std::stoi(f[i].substr(0, arrow))] = std::stoi(f[i].substr(arrow + 2));
            }
        } else {
            throw std::invalid_argument("unknown coset table line '" + f[0] + "'");
        }
    }
    return CosetTableAction(table, gens, K, X, phi);
}

int CosetTableAction::inv(int x) const {
    for (int y = 0; y < static_cast<int>(table_.size()); ++y)
        if (mul(x, y) == identity_) return y;
    throw std::logic_error("element without inverse");
}

int CosetTableAction::locate(int g) const {
    for (std::size_t i = 0; i < transversal_.size(); ++i)
        if (in_K_[static_cast<std::size_t>(mul(inv(transversal_[i]), g))]) return static_cast<int>(i);
    throw std::invalid_argument("transversal misses a coset");
}

LazyAction::Key CosetTableAction::element_of_word(const FreeWord& word) const {
    int g = identity_;
    for (int x : word) {
        int s = gens_.at(static_cast<std::size_t>(std::abs(x) - 1));
        g = mul(g, x > 0 ? s : inv(s));
    }
    return {g};
}

Permutation CosetTableAction::perm(const Key& k) const {
    std::vector<int> img;
    for (int x : transversal_) img.push_back(locate(mul(k[0], x)) + 1);
    return Permutation(img);
}

LazyAction::Key CosetTableAction::state(const Key& k, int letter) const {
    int x = transversal_.at(static_cast<std::size_t>(letter - 1));
    int gx = mul(k[0], x);
    int y = transversal_[static_cast<std::size_t>(locate(gx))];
    return {phi_.at(mul(inv(y), gx))};
}

InducedAction::InducedAction(std::vector<std::string> names, std::vector<Permutation> coset_action,
                             std::shared_ptr<const LazyAction> inner)
    : names_(std::move(names)), action_(std::move(coset_action)), inner_(std::move(inner)) {
    const int r = static_cast<int>(names_.size());
    if (static_cast<int>(action_.size()) != r || r == 0) throw std::invalid_argument("one coset permutation per generator");
    const int m = action_.front().degree();
    for (const auto& p : action_)
        if (p.degree() != m) throw std::invalid_argument("coset permutations of different degrees");

    // Schreier tree rooted at 1.
    coset_rep_.assign(static_cast<std::size_t>(m + 1), FreeWord{});
    std::vector<bool> seen(static_cast<std::size_t>(m + 1), false);
    std::set<std::pair<int, int>> tree;
    std::deque<int> queue{1};
    seen[1] = true;
    while (!queue.empty()) {
        int p = queue.front();
        queue.pop_front();
        for (int i = 1; i <= r; ++i)
            for (int sign : {1, -1}) {
                const Permutation& g = action_[static_cast<std::size_t>(i - 1)];
                int q = sign > 0 ? g(p) : g.inverse()(p);
                if (seen[static_cast<std::size_t>(q)]) continue;
                seen[static_cast<std::size_t>(q)] = true;
                FreeWord w{sign * i};
                w.insert(w.end(), coset_rep_[static_cast<std::size_t>(p)].begin(), coset_rep_[static_cast<std::size_t>(p)].end());
                coset_rep_[static_cast<std::size_t>(q)] = w;
                tree.insert(sign > 0 ? std::pair{p, i} : std::pair{q, i});
                queue.push_back(q);
            }
    }
    if (std::count(seen.begin() + 1, seen.end(), false) != 0) throw std::invalid_argument("coset action is not transitive");
    for (int p = 1; p <= m; ++p)
        for (int i = 1; i <= r; ++i) {
            if (tree.count({p, i})) {
                edge_basis_[{p, i}] = 0;
                continue;
            }
            int q = action_[static_cast<std::size_t>(i - 1)](p);
            FreeWord w = free_inverse(coset_rep_[static_cast<std::size_t>(q)]);
            w.push_back(i);
            w.insert(w.end(), coset_rep_[static_cast<std::size_t>(p)].begin(), coset_rep_[static_cast<std::size_t>(p)].end());
            basis_.push_back(free_reduce(w));
            edge_basis_[{p, i}] = static_cast<int>(basis_.size());
        }
    if (inner_->generator_count() != static_cast<int>(basis_.size()))
        throw std::invalid_argument("inner action has " + std::to_string(inner_->generator_count()) +
                                    " generators but the subgroup has rank " + std::to_string(basis_.size()));

    // u_x: short elements of K moving 1 to x under the inner action.
    const int d = inner_->arity();
    letter_rep_.assign(static_cast<std::size_t>(d + 1), FreeWord{});
    std::vector<bool> found(static_cast<std::size_t>(d + 1), false);
    found[1] = true;
    std::vector<FreeWord> layer{FreeWord{}};
    for (int len = 0; len < 4 && std::count(found.begin() + 1, found.end(), false) > 0; ++len) {
        std::vector<FreeWord> next;
        for (const auto& w : layer)
            for (int b = 1; b <= static_cast<int>(basis_.size()); ++b)
                for (int sign : {1, -1}) {
                    FreeWord v = w;
                    v.push_back(sign * b);
                    v = free_reduce(v);
                    if (v.size() != w.size() + 1) continue;
                    int x = inner_->perm(inner_->element_of_word(v))(1);
                    if (!found[static_cast<std::size_t>(x)]) {
                        found[static_cast<std::size_t>(x)] = true;
                        letter_rep_[static_cast<std::size_t>(x)] = v;
                    }
                    next.push_back(v);
                }
        layer.swap(next);
    }
    if (std::count(found.begin() + 1, found.end(), false) != 0)
        throw std::invalid_argument("inner action is not transitive on the first level");
    for (int p = 1; p <= m; ++p)
        for (int x = 1; x <= d; ++x)
            transversal_.push_back(free_mul(coset_rep_[static_cast<std::size_t>(p)], to_ambient(letter_rep_[static_cast<std::size_t>(x)])));
}

int InducedAction::point_after(const FreeWord& g, int p) const {
    for (auto it = g.rbegin(); it != g.rend(); ++it) {
        const Permutation& s = action_[static_cast<std::size_t>(std::abs(*it) - 1)];
        p = *it > 0 ? s(p) : s.inverse()(p);
    }
    return p;
}

FreeWord InducedAction::rewrite(const FreeWord& k) const {
    FreeWord pieces;
    int p = 1;
    for (auto it = k.rbegin(); it != k.rend(); ++it) {
        int i = std::abs(*it);
        const Permutation& s = action_[static_cast<std::size_t>(i - 1)];
        if (*it > 0) {
            int b = edge_basis_.at({p, i});
            if (b) pieces.push_back(b);
            p = s(p);
        } else {
            int q = s.inverse()(p);
            int b = edge_basis_.at({q, i});
            if (b) pieces.push_back(-b);
            p = q;
        }
    }
    if (p != 1) throw std::logic_error("rewrite called on an element outside the subgroup");
    return free_reduce(FreeWord(pieces.rbegin(), pieces.rend()));
}

FreeWord InducedAction::to_ambient(const FreeWord& kw) const {
    FreeWord w;
    for (int b : kw) {
        const FreeWord& g = basis_.at(static_cast<std::size_t>(std::abs(b) - 1));
        FreeWord piece = b > 0 ? g : free_inverse(g);
        w.insert(w.end(), piece.begin(), piece.end());
    }
    return free_reduce(w);
}

int InducedAction::locate(const FreeWord& g) const {
    int p = point_after(g, 1);
    FreeWord k = free_mul(free_inverse(coset_rep_[static_cast<std::size_t>(p)]), g);
    int x = inner_->perm(inner_->element_of_word(rewrite(k)))(1);
    return (p - 1) * inner_->arity() + (x - 1);
}

Permutation InducedAction::perm(const Key& k) const {
    std::vector<int> img;
    for (const auto& y : transversal_) img.push_back(locate(free_mul(k, y)) + 1);
    return Permutation(img);
}

LazyAction::Key InducedAction::state(const Key& k, int letter) const {
    const FreeWord& y = transversal_.at(static_cast<std::size_t>(letter - 1));
    FreeWord gy = free_mul(k, y);
    const FreeWord& target = transversal_[static_cast<std::size_t>(locate(gy))];
    FreeWord kt = free_mul(free_inverse(target), gy);
    auto inner_key = inner_->element_of_word(rewrite(kt));
    return to_ambient(inner_->state(inner_key, 1));
}

// ---- faithfulness --------------------------------------------------------

FaithfulnessResult faithfulness_certificate(const LazyAction& action, int word_len, int depth) {
    FaithfulnessResult res;
    std::vector<int> symbols;
    std::vector<std::string> names;
    for (int i = 0; i < action.generator_count(); ++i) {
        symbols.push_back(i + 1);
        names.push_back(action.generator_name(i));
        if (!action.is_involution(i)) {
            symbols.push_back(-(i + 1));
            names.push_back(action.generator_name(i) + "^-1");
        }
    }
    const std::size_t n = symbols.size();
    std::vector<std::vector<bool>> cancels(n, std::vector<bool>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            cancels[i][j] = action.is_trivial_key(action.element_of_word({symbols[i], symbols[j]}));

    // Largest depth to which a key is known to act trivially.
    std::map<LazyAction::Key, int> trivial_to;
    auto moves = [&](auto&& self, const LazyAction::Key& k, int left) -> bool {
        if (left < 0 || action.is_trivial_key(k)) return false;
        if (auto it = trivial_to.find(k); it != trivial_to.end() && it->second >= left) return false;
        if (!action.perm(k).is_identity()) return true;
        if (left > 0)
            for (int x = 1; x <= action.arity(); ++x)
                if (self(self, action.state(k, x), left - 1)) return true;
        int& known = trivial_to[k];
        known = std::max(known, left);
        return false;
    };

    std::vector<std::vector<std::size_t>> layer{{}};
    for (int len = 1; len <= word_len; ++len) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& w : layer)
            for (std::size_t s = 0; s < n; ++s) {
                if (!w.empty() && cancels[w.back()][s]) continue;
                auto v = w;
                v.push_back(s);
                FreeWord fw;
                for (std::size_t x : v) fw.push_back(symbols[x]);
                ++res.words_checked;
                // Depth counts levels below the root, so the first level is depth 1.
                if (!moves(moves, action.element_of_word(fw), depth - 1)) {
                    std::string name;
                    for (std::size_t x : v) name += names[x];
                    res.verdict = Verdict::Fail;
                    res.witness = name;
                    return res;
                }
                next.push_back(std::move(v));
            }
        layer.swap(next);
    }
    return res;
}

}  // namespace nekra
