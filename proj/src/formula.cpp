#include "lia/formula.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace lia {

VarId VarTable::intern(std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it != index_.end()) return VarId{it->second};
    u32 idx = static_cast<u32>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), idx);
    return VarId{idx};
}

VarId VarTable::fresh(std::string_view base) {
    std::string candidate(base);
    int suffix = 0;
    while (index_.count(candidate)) {
        candidate = std::string(base) + "!" + std::to_string(++suffix);
    }
    return intern(candidate);
}

bool VarTable::contains(std::string_view name) const {
    return index_.count(std::string(name)) > 0;
}

Int LinearAtom::coeff_of(VarId v) const {
    for (const auto& [var, a] : coeffs)
        if (var == v) return a;
    return 0;
}

std::size_t LinearAtom::hash() const {
    std::size_t h = static_cast<std::size_t>(rel);
    for (const auto& [var, a] : coeffs) {
        h = hash_combine(h, var.idx);
        h = hash_combine(h, hash_int(a));
    }
    h = hash_combine(h, hash_int(constant));
    if (rel == Rel::CONG) h = hash_combine(h, hash_int(modulus));
    return h;
}

bool mentions_var(Formula f, VarId v) {
    return std::binary_search(f->fvs.begin(), f->fvs.end(), v);
}

namespace {

std::size_t node_hash(Kind kind, const LinearAtom& atom,
                      const std::vector<Formula>& children,
                      const std::vector<VarId>& bound) {
    std::size_t h = static_cast<std::size_t>(kind) * 0x9e3779b97f4a7c15ull;
    if (kind == Kind::Atom || kind == Kind::NegAtom) h = hash_combine(h, atom.hash());
    for (Formula c : children) h = hash_combine(h, c->id);
    for (VarId v : bound) h = hash_combine(h, v.idx);
    return h;
}

std::vector<VarId> merge_sorted(const std::vector<VarId>& a, const std::vector<VarId>& b) {
    std::vector<VarId> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// x s.t. a*x == 1 (mod m); requires gcd(a, m) == 1, m > 0.
Int mod_inverse(const Int& a, const Int& m) {
    Int old_r = mod_norm(a, m), r = m;
    Int old_s = 1, s = 0;
    while (r != 0) {
        Int q = old_r / r;
        Int tmp = old_r - q * r; old_r = r; r = tmp;
        tmp = old_s - q * s; old_s = s; s = tmp;
    }
    assert(old_r == 1);
    return mod_norm(old_s, m);
}

}  // namespace

FormulaStore::FormulaStore() {
    FormulaNode bot_node{Kind::Bot, 0, 1, node_hash(Kind::Bot, {}, {}, {}), {}, {}, {}, {}};
    bot_ = make(std::move(bot_node));
    FormulaNode top_node{Kind::Top, 0, 1, node_hash(Kind::Top, {}, {}, {}), {}, {}, {}, {}};
    top_ = make(std::move(top_node));
}

Formula FormulaStore::make(FormulaNode&& node) {
    auto& bucket = table_[node.hash];
    for (Formula existing : bucket) {
        if (existing->kind == node.kind && existing->atom == node.atom &&
            existing->children == node.children && existing->bound == node.bound)
            return existing;
    }
    node.id = next_id_++;
    nodes_.push_back(std::move(node));
    Formula f = &nodes_.back();
    bucket.push_back(f);
    return f;
}

Formula FormulaStore::atom(LinearAtom raw) {
    // Merge duplicate variables, drop zero coefficients, sort by variable.
    std::sort(raw.coeffs.begin(), raw.coeffs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<VarId, Int>> coeffs;
    for (auto& [v, a] : raw.coeffs) {
        if (!coeffs.empty() && coeffs.back().first == v) coeffs.back().second += a;
        else coeffs.emplace_back(v, a);
    }
    std::erase_if(coeffs, [](const auto& p) { return p.second == 0; });
    raw.coeffs = std::move(coeffs);

    if (raw.rel == Rel::CONG) {
        assert(raw.modulus > 0);
        if (raw.coeffs.empty())
            return mod_norm(raw.constant, raw.modulus) == 0 ? top_ : bot_;
        Int g = raw.modulus;
        for (const auto& [v, a] : raw.coeffs) g = gcd_int(g, a);
        if (g > 1) {
            if (raw.constant % g != 0) return bot_;  // lhs values all divisible by g
            for (auto& [v, a] : raw.coeffs) a /= g;
            raw.modulus /= g;
            raw.constant /= g;
        }
        if (raw.modulus == 1) return top_;
        // A single-variable congruence normalizes to unit coefficient: the
        // atom a*y ~ c (mod m) is solvable iff gcd(a,m) | c, and then equal
        // to y ~ inv(a/d)*(c/d) (mod m/d).
        if (raw.coeffs.size() == 1) {
            Int a = raw.coeffs[0].second;
            Int d = gcd_int(a, raw.modulus);
            if (raw.constant % d != 0) return bot_;
            a /= d;
            raw.modulus /= d;
            raw.constant /= d;
            if (raw.modulus == 1) return top_;
            raw.constant *= mod_inverse(a, raw.modulus);
            raw.coeffs[0].second = 1;
        } else if (raw.coeffs[0].second < 0) {
            for (auto& [v, a] : raw.coeffs) a = -a;
            raw.constant = -raw.constant;
        }
        raw.constant = mod_norm(raw.constant, raw.modulus);
    } else if (raw.rel == Rel::EQ) {
        if (raw.coeffs.empty()) return raw.constant == 0 ? top_ : bot_;
        Int g = 0;
        for (const auto& [v, a] : raw.coeffs) g = gcd_int(g, a);
        if (raw.constant % g != 0) return bot_;
        if (g > 1) {
            for (auto& [v, a] : raw.coeffs) a /= g;
            raw.constant /= g;
        }
        if (raw.coeffs[0].second < 0) {
            for (auto& [v, a] : raw.coeffs) a = -a;
            raw.constant = -raw.constant;
        }
        raw.modulus = 0;
    } else {
        if (raw.coeffs.empty()) return raw.constant >= 0 ? top_ : bot_;
        Int g = 0;
        for (const auto& [v, a] : raw.coeffs) g = gcd_int(g, a);
        if (g > 1) {
            for (auto& [v, a] : raw.coeffs) a /= g;
            raw.constant = floor_div(raw.constant, g);
        }
        raw.modulus = 0;
    }

    FormulaNode node;
    node.kind = Kind::Atom;
    node.size = 1;
    node.atom = std::move(raw);
    for (const auto& [v, a] : node.atom.coeffs) node.fvs.push_back(v);
    node.hash = node_hash(Kind::Atom, node.atom, {}, {});
    return make(std::move(node));
}

Formula FormulaStore::leq(std::vector<std::pair<VarId, Int>> coeffs, Int c) {
    return atom(LinearAtom{std::move(coeffs), Rel::LEQ, std::move(c), 0});
}

Formula FormulaStore::eq(std::vector<std::pair<VarId, Int>> coeffs, Int c) {
    return atom(LinearAtom{std::move(coeffs), Rel::EQ, std::move(c), 0});
}

Formula FormulaStore::cong(std::vector<std::pair<VarId, Int>> coeffs, Int c, Int modulus) {
    return atom(LinearAtom{std::move(coeffs), Rel::CONG, std::move(c), std::move(modulus)});
}

Formula FormulaStore::negate(Formula f) {
    switch (f->kind) {
        case Kind::Bot: return top_;
        case Kind::Top: return bot_;
        case Kind::Not: return f->child();
        case Kind::NegAtom: {
            FormulaNode node;
            node.kind = Kind::Atom;
            node.size = 1;
            node.atom = f->atom;
            node.fvs = f->fvs;
            node.hash = node_hash(Kind::Atom, node.atom, {}, {});
            return make(std::move(node));
        }
        case Kind::Atom: {
            const LinearAtom& a = f->atom;
            if (a.rel == Rel::LEQ) {
                // not(t <= c)  ==  -t <= -c-1
                std::vector<std::pair<VarId, Int>> coeffs = a.coeffs;
                for (auto& [v, coef] : coeffs) coef = -coef;
                return leq(std::move(coeffs), -a.constant - 1);
            }
            if (a.rel == Rel::EQ) {
                // not(t = c)  ==  t <= c-1  or  -t <= -c-1
                std::vector<std::pair<VarId, Int>> neg = a.coeffs;
                for (auto& [v, coef] : neg) coef = -coef;
                return disj(leq(a.coeffs, a.constant - 1), leq(std::move(neg), -a.constant - 1));
            }
            FormulaNode node;
            node.kind = Kind::NegAtom;
            node.size = 1;
            node.atom = a;
            node.fvs = f->fvs;
            node.hash = node_hash(Kind::NegAtom, node.atom, {}, {});
            return make(std::move(node));
        }
        default: {
            FormulaNode node;
            node.kind = Kind::Not;
            node.size = 1 + f->size;
            node.children = {f};
            node.fvs = f->fvs;
            node.hash = node_hash(Kind::Not, {}, node.children, {});
            return make(std::move(node));
        }
    }
}

Formula FormulaStore::conj(std::vector<Formula> children) {
    std::vector<Formula> flat;
    for (Formula c : children) {
        if (c->kind == Kind::Top) continue;
        if (c->kind == Kind::Bot) return bot_;
        if (c->kind == Kind::And)
            flat.insert(flat.end(), c->children.begin(), c->children.end());
        else
            flat.push_back(c);
    }
    std::sort(flat.begin(), flat.end(), [](Formula a, Formula b) { return a->id < b->id; });
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    if (flat.empty()) return top_;
    if (flat.size() == 1) return flat[0];

    FormulaNode node;
    node.kind = Kind::And;
    node.size = 1;
    for (Formula c : flat) {
        node.size += c->size;
        node.fvs = merge_sorted(node.fvs, c->fvs);
    }
    node.children = std::move(flat);
    node.hash = node_hash(Kind::And, {}, node.children, {});
    return make(std::move(node));
}

Formula FormulaStore::disj(std::vector<Formula> children) {
    std::vector<Formula> flat;
    for (Formula c : children) {
        if (c->kind == Kind::Bot) continue;
        if (c->kind == Kind::Top) return top_;
        if (c->kind == Kind::Or)
            flat.insert(flat.end(), c->children.begin(), c->children.end());
        else
            flat.push_back(c);
    }
    std::sort(flat.begin(), flat.end(), [](Formula a, Formula b) { return a->id < b->id; });
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    if (flat.empty()) return bot_;
    if (flat.size() == 1) return flat[0];

    FormulaNode node;
    node.kind = Kind::Or;
    node.size = 1;
    for (Formula c : flat) {
        node.size += c->size;
        node.fvs = merge_sorted(node.fvs, c->fvs);
    }
    node.children = std::move(flat);
    node.hash = node_hash(Kind::Or, {}, node.children, {});
    return make(std::move(node));
}

Formula FormulaStore::exists(std::vector<VarId> vs, Formula body) {
    if (body->kind == Kind::Bot || body->kind == Kind::Top) return body;
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    if (body->kind == Kind::Exists) {
        vs = merge_sorted(vs, body->bound);
        body = body->child();
    }
    std::vector<VarId> used;
    for (VarId v : vs)
        if (mentions_var(body, v)) used.push_back(v);
    if (used.empty()) return body;

    FormulaNode node;
    node.kind = Kind::Exists;
    node.size = 1 + body->size;
    node.children = {body};
    node.bound = std::move(used);
    std::set_difference(body->fvs.begin(), body->fvs.end(), node.bound.begin(),
                        node.bound.end(), std::back_inserter(node.fvs));
    node.hash = node_hash(Kind::Exists, {}, node.children, node.bound);
    return make(std::move(node));
}

Formula FormulaStore::canonicalize(Formula f) {
    switch (f->kind) {
        case Kind::Bot:
        case Kind::Top: return f;
        case Kind::Atom: return atom(f->atom);
        case Kind::NegAtom: return negate(atom(f->atom));
        case Kind::Not: return negate(canonicalize(f->child()));
        case Kind::And:
        case Kind::Or: {
            std::vector<Formula> kids;
            kids.reserve(f->children.size());
            for (Formula c : f->children) kids.push_back(canonicalize(c));
            return f->kind == Kind::And ? conj(std::move(kids)) : disj(std::move(kids));
        }
        case Kind::Exists: return exists(f->bound, canonicalize(f->child()));
    }
    return f;
}

Formula FormulaStore::substitute(Formula f, VarId y, const Int& k) {
    switch (f->kind) {
        case Kind::Bot:
        case Kind::Top: return f;
        case Kind::Atom:
        case Kind::NegAtom: {
            if (!f->atom.mentions(y)) return f;
            LinearAtom a = f->atom;
            Int ay = 0;
            std::erase_if(a.coeffs, [&](const auto& p) {
                if (p.first == y) { ay = p.second; return true; }
                return false;
            });
            a.constant -= ay * k;
            Formula result = atom(std::move(a));
            return f->kind == Kind::NegAtom ? negate(result) : result;
        }
        case Kind::Not: return negate(substitute(f->child(), y, k));
        case Kind::And:
        case Kind::Or: {
            if (!mentions_var(f, y)) return f;
            std::vector<Formula> kids;
            kids.reserve(f->children.size());
            for (Formula c : f->children) kids.push_back(substitute(c, y, k));
            return f->kind == Kind::And ? conj(std::move(kids)) : disj(std::move(kids));
        }
        case Kind::Exists: {
            assert(!std::binary_search(f->bound.begin(), f->bound.end(), y));
            if (!mentions_var(f, y)) return f;
            return exists(f->bound, substitute(f->child(), y, k));
        }
    }
    return f;
}

Formula FormulaStore::substitute_inf(Formula f, VarId y, bool plus_inf) {
    switch (f->kind) {
        case Kind::Bot:
        case Kind::Top: return f;
        case Kind::Atom: {
            if (!f->atom.mentions(y)) return f;
            if (f->atom.rel != Rel::LEQ)
                throw UndefinedSubstitution("infinite substitution into equation/congruence");
            Int ay = f->atom.coeff_of(y);
            bool term_is_minus_inf = (ay > 0) != plus_inf;
            if (!term_is_minus_inf)
                throw UndefinedSubstitution("y-term evaluates to +inf");
            return top_;
        }
        case Kind::NegAtom:
            if (!f->atom.mentions(y)) return f;
            throw UndefinedSubstitution("infinite substitution into congruence");
        case Kind::Not: return negate(substitute_inf(f->child(), y, plus_inf));
        case Kind::And:
        case Kind::Or: {
            if (!mentions_var(f, y)) return f;
            std::vector<Formula> kids;
            kids.reserve(f->children.size());
            for (Formula c : f->children) kids.push_back(substitute_inf(c, y, plus_inf));
            return f->kind == Kind::And ? conj(std::move(kids)) : disj(std::move(kids));
        }
        case Kind::Exists: {
            assert(!std::binary_search(f->bound.begin(), f->bound.end(), y));
            if (!mentions_var(f, y)) return f;
            return exists(f->bound, substitute_inf(f->child(), y, plus_inf));
        }
    }
    return f;
}

Int decode_word(const std::vector<int>& bits) {
    if (bits.empty())
        throw std::invalid_argument("decode: empty word (at least the sign bit is required)");
    Int value = 0;
    Int weight = 1;
    for (std::size_t i = 0; i + 1 < bits.size(); ++i) {
        if (bits[i]) value += weight;
        weight <<= 1;
    }
    if (bits.back()) value -= weight;
    return value;
}

std::vector<int> encode_int(const Int& v) {
    std::vector<int> bits;
    Int rest = v;
    while (rest != 0 && rest != -1) {
        int bit = static_cast<int>(mod_norm(rest, 2));
        bits.push_back(bit);
        rest = (rest - bit) / 2;
    }
    bits.push_back(rest == -1 ? 1 : 0);
    return bits;
}

namespace {

void print_int_smt(std::ostream& os, const Int& v) {
    if (v < 0) os << "(- " << -v << ")";
    else os << v;
}

void print_term_smt(std::ostream& os, const LinearAtom& a, const VarTable& vars) {
    if (a.coeffs.size() > 1) os << "(+ ";
    bool first = true;
    for (const auto& [v, coef] : a.coeffs) {
        if (!first) os << " ";
        first = false;
        if (coef == 1) os << vars.name(v);
        else {
            os << "(* ";
            print_int_smt(os, coef);
            os << " " << vars.name(v) << ")";
        }
    }
    if (a.coeffs.size() > 1) os << ")";
}

void print_atom_smt(std::ostream& os, const LinearAtom& a, const VarTable& vars) {
    if (a.rel == Rel::CONG) {
        os << "(= (mod ";
        print_term_smt(os, a, vars);
        os << " " << a.modulus << ") " << a.constant << ")";
        return;
    }
    os << (a.rel == Rel::EQ ? "(= " : "(<= ");
    print_term_smt(os, a, vars);
    os << " ";
    print_int_smt(os, a.constant);
    os << ")";
}

void print_smt_rec(std::ostream& os, Formula f, const VarTable& vars) {
    switch (f->kind) {
        case Kind::Bot: os << "false"; return;
        case Kind::Top: os << "true"; return;
        case Kind::Atom: print_atom_smt(os, f->atom, vars); return;
        case Kind::NegAtom:
            os << "(not ";
            print_atom_smt(os, f->atom, vars);
            os << ")";
            return;
        case Kind::Not:
            os << "(not ";
            print_smt_rec(os, f->child(), vars);
            os << ")";
            return;
        case Kind::And:
        case Kind::Or: {
            os << (f->kind == Kind::And ? "(and" : "(or");
            for (Formula c : f->children) {
                os << " ";
                print_smt_rec(os, c, vars);
            }
            os << ")";
            return;
        }
        case Kind::Exists: {
            os << "(exists (";
            bool first = true;
            for (VarId v : f->bound) {
                if (!first) os << " ";
                first = false;
                os << "(" << vars.name(v) << " Int)";
            }
            os << ") ";
            print_smt_rec(os, f->child(), vars);
            os << ")";
            return;
        }
    }
}

void print_atom_text(std::ostream& os, const LinearAtom& a, const VarTable& vars) {
    bool first = true;
    for (const auto& [v, coef] : a.coeffs) {
        if (coef < 0) os << (first ? "-" : " - ");
        else if (!first) os << " + ";
        first = false;
        Int mag = abs_int(coef);
        if (mag != 1) os << mag;
        os << vars.name(v);
    }
    switch (a.rel) {
        case Rel::LEQ: os << " <= " << a.constant; break;
        case Rel::EQ: os << " = " << a.constant; break;
        case Rel::CONG: os << " ~ " << a.constant << " (mod " << a.modulus << ")"; break;
    }
}

void print_text_rec(std::ostream& os, Formula f, const VarTable& vars) {
    switch (f->kind) {
        case Kind::Bot: os << "false"; return;
        case Kind::Top: os << "true"; return;
        case Kind::Atom: print_atom_text(os, f->atom, vars); return;
        case Kind::NegAtom:
            os << "!(";
            print_atom_text(os, f->atom, vars);
            os << ")";
            return;
        case Kind::Not:
            os << "!(";
            print_text_rec(os, f->child(), vars);
            os << ")";
            return;
        case Kind::And:
        case Kind::Or: {
            const char* sep = f->kind == Kind::And ? " && " : " || ";
            bool first = true;
            for (Formula c : f->children) {
                if (!first) os << sep;
                first = false;
                bool paren = c->kind == Kind::And || c->kind == Kind::Or || c->kind == Kind::Exists;
                if (paren) os << "(";
                print_text_rec(os, c, vars);
                if (paren) os << ")";
            }
            return;
        }
        case Kind::Exists: {
            os << "E ";
            bool first = true;
            for (VarId v : f->bound) {
                if (!first) os << ",";
                first = false;
                os << vars.name(v);
            }
            os << ". (";
            print_text_rec(os, f->child(), vars);
            os << ")";
            return;
        }
    }
}

}  // namespace

std::string to_smt(Formula f, const VarTable& vars) {
    std::ostringstream os;
    print_smt_rec(os, f, vars);
    return os.str();
}

std::string to_text(Formula f, const VarTable& vars) {
    std::ostringstream os;
    print_text_rec(os, f, vars);
    return os.str();
}

}  // namespace lia
