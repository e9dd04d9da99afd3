// ast.hpp — types and named term syntax shared by the source and target
// calculi: interning type store, term store, parser, printer, plugging.
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "scwb/sexpr.hpp"
#include "scwb/trace.hpp"

namespace scwb {

// ---------------------------------------------------------------------------
// Types (de Bruijn indexed internally; binder names kept as printing hints)
// ---------------------------------------------------------------------------

enum class TypeKind : uint8_t { Unit, Nat, Arrow, Prod, Sum, Mu, Var };

struct Type {
    TypeKind kind;
    const Type* a = nullptr; // Arrow domain, Prod left, Sum left, Mu body
    const Type* b = nullptr; // Arrow codomain, Prod right, Sum right
    uint32_t var = 0;        // Var index
    std::string hint;        // Mu binder name for printing
};

// Hash-consing store: equal types are pointer-equal. Binder hints are not
// part of identity.
class TypeStore {
public:
    const Type* intern(TypeKind k, const Type* a, const Type* b, uint32_t var, const std::string& hint) {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_tuple(k, a, b, var);
        auto it = index_.find(key);
        if (it != index_.end()) return it->second;
        pool_.push_back(Type{k, a, b, var, hint});
        const Type* t = &pool_.back();
        index_.emplace(key, t);
        return t;
    }

    static TypeStore& global() {
        static TypeStore store;
        return store;
    }

private:
    std::mutex mu_;
    std::deque<Type> pool_;
    std::map<std::tuple<TypeKind, const Type*, const Type*, uint32_t>, const Type*> index_;
};

inline const Type* t_unit() { return TypeStore::global().intern(TypeKind::Unit, nullptr, nullptr, 0, ""); }
inline const Type* t_nat() { return TypeStore::global().intern(TypeKind::Nat, nullptr, nullptr, 0, ""); }
inline const Type* t_arrow(const Type* a, const Type* b) {
    return TypeStore::global().intern(TypeKind::Arrow, a, b, 0, "");
}
inline const Type* t_prod(const Type* a, const Type* b) {
    return TypeStore::global().intern(TypeKind::Prod, a, b, 0, "");
}
inline const Type* t_sum(const Type* a, const Type* b) {
    return TypeStore::global().intern(TypeKind::Sum, a, b, 0, "");
}
inline const Type* t_mu(const Type* body, const std::string& hint = "X") {
    return TypeStore::global().intern(TypeKind::Mu, body, nullptr, 0, hint);
}
inline const Type* t_var(uint32_t i) { return TypeStore::global().intern(TypeKind::Var, nullptr, nullptr, i, ""); }

namespace detail {

inline const Type* shift_type(const Type* t, int d, uint32_t cutoff) {
    switch (t->kind) {
    case TypeKind::Unit:
    case TypeKind::Nat: return t;
    case TypeKind::Var:
        if (t->var < cutoff) return t;
        return t_var(static_cast<uint32_t>(static_cast<int>(t->var) + d));
    case TypeKind::Arrow: return t_arrow(shift_type(t->a, d, cutoff), shift_type(t->b, d, cutoff));
    case TypeKind::Prod: return t_prod(shift_type(t->a, d, cutoff), shift_type(t->b, d, cutoff));
    case TypeKind::Sum: return t_sum(shift_type(t->a, d, cutoff), shift_type(t->b, d, cutoff));
    case TypeKind::Mu: return TypeStore::global().intern(TypeKind::Mu, shift_type(t->a, d, cutoff + 1), nullptr, 0, t->hint);
    }
    return t;
}

inline const Type* subst_type(const Type* t, uint32_t j, const Type* s) {
    switch (t->kind) {
    case TypeKind::Unit:
    case TypeKind::Nat: return t;
    case TypeKind::Var:
        if (t->var == j) return s;
        if (t->var > j) return t_var(t->var - 1);
        return t;
    case TypeKind::Arrow: return t_arrow(subst_type(t->a, j, s), subst_type(t->b, j, s));
    case TypeKind::Prod: return t_prod(subst_type(t->a, j, s), subst_type(t->b, j, s));
    case TypeKind::Sum: return t_sum(subst_type(t->a, j, s), subst_type(t->b, j, s));
    case TypeKind::Mu:
        return TypeStore::global().intern(TypeKind::Mu, subst_type(t->a, j + 1, shift_type(s, 1, 0)), nullptr, 0,
                                          t->hint);
    }
    return t;
}

} // namespace detail

inline const Type* unfold_mu(const Type* mu) {
    if (mu->kind != TypeKind::Mu) throw std::logic_error("unfold_mu on non-mu type");
    return detail::subst_type(mu->a, 0, mu);
}

inline bool type_closed(const Type* t, uint32_t depth = 0) {
    switch (t->kind) {
    case TypeKind::Unit:
    case TypeKind::Nat: return true;
    case TypeKind::Var: return t->var < depth;
    case TypeKind::Arrow:
    case TypeKind::Prod:
    case TypeKind::Sum: return type_closed(t->a, depth) && type_closed(t->b, depth);
    case TypeKind::Mu: return type_closed(t->a, depth + 1);
    }
    return false;
}

// The body of every Mu must not be the bound variable itself, even through
// intervening Mu binders.
inline bool type_contractive(const Type* t) {
    switch (t->kind) {
    case TypeKind::Unit:
    case TypeKind::Nat:
    case TypeKind::Var: return true;
    case TypeKind::Arrow:
    case TypeKind::Prod:
    case TypeKind::Sum: return type_contractive(t->a) && type_contractive(t->b);
    case TypeKind::Mu: {
        const Type* body = t->a;
        uint32_t idx = 0;
        while (body->kind == TypeKind::Mu) {
            if (!type_contractive(body)) break;
            body = body->a;
            ++idx;
        }
        if (body->kind == TypeKind::Var && body->var == idx) return false;
        return type_contractive(t->a);
    }
    }
    return false;
}

inline const Type* parse_type(const Sexpr& e, std::vector<std::string>* binders = nullptr) {
    std::vector<std::string> local;
    std::vector<std::string>& scope = binders ? *binders : local;
    if (e.is_atom) {
        if (e.atom == "unit") return t_unit();
        if (e.atom == "nat") return t_nat();
        for (std::size_t i = scope.size(); i-- > 0;)
            if (scope[i] == e.atom) return t_var(static_cast<uint32_t>(scope.size() - 1 - i));
        throw ParseError("unbound type variable '" + e.atom + "'", e.line, e.col);
    }
    const std::string& head = e.at(0).atom_text();
    if (head == "->" || head == "*" || head == "+") {
        if (e.size() != 3) throw ParseError("type constructor '" + head + "' needs two arguments", e.line, e.col);
        const Type* a = parse_type(e.at(1), &scope);
        const Type* b = parse_type(e.at(2), &scope);
        if (head == "->") return t_arrow(a, b);
        if (head == "*") return t_prod(a, b);
        return t_sum(a, b);
    }
    if (head == "mu") {
        if (e.size() != 3) throw ParseError("mu needs a variable and a body", e.line, e.col);
        const std::string& name = e.at(1).atom_text();
        scope.push_back(name);
        const Type* body = parse_type(e.at(2), &scope);
        scope.pop_back();
        const Type* t = TypeStore::global().intern(TypeKind::Mu, body, nullptr, 0, name);
        if (!type_contractive(t)) throw ParseError("mu type is not contractive", e.line, e.col);
        return t;
    }
    throw ParseError("unknown type form '" + head + "'", e.line, e.col);
}

inline std::string print_type(const Type* t, std::vector<std::string>* binders = nullptr) {
    std::vector<std::string> local;
    std::vector<std::string>& scope = binders ? *binders : local;
    switch (t->kind) {
    case TypeKind::Unit: return "unit";
    case TypeKind::Nat: return "nat";
    case TypeKind::Var: {
        if (t->var < scope.size()) return scope[scope.size() - 1 - t->var];
        return "?" + std::to_string(t->var);
    }
    case TypeKind::Arrow: return "(-> " + print_type(t->a, &scope) + " " + print_type(t->b, &scope) + ")";
    case TypeKind::Prod: return "(* " + print_type(t->a, &scope) + " " + print_type(t->b, &scope) + ")";
    case TypeKind::Sum: return "(+ " + print_type(t->a, &scope) + " " + print_type(t->b, &scope) + ")";
    case TypeKind::Mu: {
        std::string name = t->hint.empty() ? "X" : t->hint;
        while (std::find(scope.begin(), scope.end(), name) != scope.end()) name += "'";
        scope.push_back(name);
        std::string body = print_type(t->a, &scope);
        scope.pop_back();
        return "(mu " + name + " " + body + ")";
    }
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Terms (named; shared by both calculi — target terms carry no types)
// ---------------------------------------------------------------------------

enum class TermKind : uint8_t {
    Var,
    UnitV,
    Lit,
    Succ,
    Ifz,
    Lam,
    App,
    Pair,
    Fst,
    Snd,
    Inl,
    Inr,
    Case,
    Fold,
    Unfold,
    Read,
    Write,
    Seq,
    Hole
};

struct Term {
    TermKind kind;
    const Term* a = nullptr;
    const Term* b = nullptr;
    const Term* c = nullptr;
    const Type* type = nullptr; // Lam param type, Inl/Inr sum annotation, Fold mu annotation
    uint32_t lit = 0;
    Origin origin = Origin::Prog; // Read/Write
    std::string name;             // Var name, Lam binder, Case left binder
    std::string name2;            // Case right binder
    uint32_t line = 0, col = 0;
};

class TermStore {
public:
    const Term* add(Term t) {
        pool_.push_back(std::move(t));
        return &pool_.back();
    }

    const Term* var(std::string n) { Term t{};
        t.kind = TermKind::Var;
        t.name = std::move(n);
        return add(std::move(t)); }
    const Term* unit() {
        Term t{};
        t.kind = TermKind::UnitV;
        return add(std::move(t));
    }
    const Term* lit(uint32_t n) {
        Term t{};
        t.kind = TermKind::Lit;
        t.lit = n;
        return add(t);
    }
    const Term* succ(const Term* e) {
        Term t{};
        t.kind = TermKind::Succ;
        t.a = e;
        return add(t);
    }
    const Term* ifz(const Term* e, const Term* z, const Term* s) {
        Term t{};
        t.kind = TermKind::Ifz;
        t.a = e;
        t.b = z;
        t.c = s;
        return add(t);
    }
    const Term* lam(std::string x, const Type* ty, const Term* body) {
        Term t{};
        t.kind = TermKind::Lam;
        t.name = std::move(x);
        t.type = ty;
        t.a = body;
        return add(t);
    }
    const Term* app(const Term* f, const Term* x) {
        Term t{};
        t.kind = TermKind::App;
        t.a = f;
        t.b = x;
        return add(t);
    }
    const Term* pair(const Term* l, const Term* r) {
        Term t{};
        t.kind = TermKind::Pair;
        t.a = l;
        t.b = r;
        return add(t);
    }
    const Term* fst(const Term* e) {
        Term t{};
        t.kind = TermKind::Fst;
        t.a = e;
        return add(t);
    }
    const Term* snd(const Term* e) {
        Term t{};
        t.kind = TermKind::Snd;
        t.a = e;
        return add(t);
    }
    const Term* inl(const Type* ty, const Term* e) {
        Term t{};
        t.kind = TermKind::Inl;
        t.type = ty;
        t.a = e;
        return add(t);
    }
    const Term* inr(const Type* ty, const Term* e) {
        Term t{};
        t.kind = TermKind::Inr;
        t.type = ty;
        t.a = e;
        return add(t);
    }
    const Term* case_(const Term* e, std::string x, const Term* l, std::string y, const Term* r) {
        Term t{};
        t.kind = TermKind::Case;
        t.a = e;
        t.b = l;
        t.c = r;
        t.name = std::move(x);
        t.name2 = std::move(y);
        return add(t);
    }
    const Term* fold(const Type* ty, const Term* e) {
        Term t{};
        t.kind = TermKind::Fold;
        t.type = ty;
        t.a = e;
        return add(t);
    }
    const Term* unfold(const Term* e) {
        Term t{};
        t.kind = TermKind::Unfold;
        t.a = e;
        return add(t);
    }
    const Term* read(Origin o) {
        Term t{};
        t.kind = TermKind::Read;
        t.origin = o;
        return add(t);
    }
    const Term* write(const Term* e, Origin o) {
        Term t{};
        t.kind = TermKind::Write;
        t.a = e;
        t.origin = o;
        return add(t);
    }
    const Term* seq(const Term* e1, const Term* e2) {
        Term t{};
        t.kind = TermKind::Seq;
        t.a = e1;
        t.b = e2;
        return add(t);
    }
    const Term* hole() {
        Term t{};
        t.kind = TermKind::Hole;
        return add(std::move(t));
    }

    // let is surface sugar
    const Term* let(std::string x, const Type* ty, const Term* bound, const Term* body) {
        return app(lam(std::move(x), ty, body), bound);
    }

    std::size_t size() const { return pool_.size(); }
    void clear() { pool_.clear(); }

private:
    std::deque<Term> pool_;
};

inline uint32_t term_size(const Term* t) {
    uint32_t s = 1;
    if (t->a) s += term_size(t->a);
    if (t->b) s += term_size(t->b);
    if (t->c) s += term_size(t->c);
    return s;
}

inline uint32_t count_holes(const Term* t) {
    uint32_t n = t->kind == TermKind::Hole ? 1 : 0;
    if (t->a) n += count_holes(t->a);
    if (t->b) n += count_holes(t->b);
    if (t->c) n += count_holes(t->c);
    return n;
}

inline void collect_names(const Term* t, std::set<std::string>& out) {
    if (t->kind == TermKind::Var || t->kind == TermKind::Lam) out.insert(t->name);
    if (t->kind == TermKind::Case) {
        out.insert(t->name);
        out.insert(t->name2);
    }
    if (t->a) collect_names(t->a, out);
    if (t->b) collect_names(t->b, out);
    if (t->c) collect_names(t->c, out);
}

inline bool term_closed(const Term* t, std::vector<std::string>& scope) {
    switch (t->kind) {
    case TermKind::Var:
        for (std::size_t i = scope.size(); i-- > 0;)
            if (scope[i] == t->name) return true;
        return false;
    case TermKind::Lam: {
        scope.push_back(t->name);
        bool ok = term_closed(t->a, scope);
        scope.pop_back();
        return ok;
    }
    case TermKind::Case: {
        if (!term_closed(t->a, scope)) return false;
        scope.push_back(t->name);
        bool okl = term_closed(t->b, scope);
        scope.pop_back();
        scope.push_back(t->name2);
        bool okr = term_closed(t->c, scope);
        scope.pop_back();
        return okl && okr;
    }
    default: {
        if (t->a && !term_closed(t->a, scope)) return false;
        if (t->b && !term_closed(t->b, scope)) return false;
        if (t->c && !term_closed(t->c, scope)) return false;
        return true;
    }
    }
}

inline bool term_closed(const Term* t) {
    std::vector<std::string> scope;
    return term_closed(t, scope);
}

inline bool origins_all(const Term* t, Origin o) {
    if ((t->kind == TermKind::Read || t->kind == TermKind::Write) && t->origin != o) return false;
    if (t->a && !origins_all(t->a, o)) return false;
    if (t->b && !origins_all(t->b, o)) return false;
    if (t->c && !origins_all(t->c, o)) return false;
    return true;
}

inline uint32_t max_literal(const Term* t) {
    uint32_t m = t->kind == TermKind::Lit ? t->lit : 0;
    if (t->a) m = std::max(m, max_literal(t->a));
    if (t->b) m = std::max(m, max_literal(t->b));
    if (t->c) m = std::max(m, max_literal(t->c));
    return m;
}

// Plug P into the unique hole of C. The spine above the hole is copied;
// untouched subtrees are shared. P must be closed, which makes the plug
// trivially capture-avoiding.
inline const Term* plug(TermStore& store, const Term* c, const Term* p) {
    if (c->kind == TermKind::Hole) return p;
    if (!c->a && !c->b && !c->c) return c;
    Term copy = *c;
    if (c->a && count_holes(c->a)) copy.a = plug(store, c->a, p);
    else if (c->b && count_holes(c->b)) copy.b = plug(store, c->b, p);
    else if (c->c && count_holes(c->c)) copy.c = plug(store, c->c, p);
    else return c;
    return store.add(std::move(copy));
}

// Fresh-name source that avoids every name already used in the given terms.
class NameGen {
public:
    explicit NameGen(std::initializer_list<const Term*> terms) {
        for (const Term* t : terms)
            if (t) collect_names(t, used_);
    }
    std::string fresh(const std::string& stem) {
        for (;;) {
            std::string cand = stem + "$" + std::to_string(counter_++);
            if (used_.insert(cand).second) return cand;
        }
    }

private:
    std::set<std::string> used_;
    uint64_t counter_ = 0;
};

// ---------------------------------------------------------------------------
// Term parsing and printing
// ---------------------------------------------------------------------------

inline const std::set<std::string>& term_keywords() {
    static const std::set<std::string> kws{"lam",  "app",    "pair", "fst",  "snd",  "inl", "inr",
                                           "case", "fold",   "unfold", "lit", "succ", "ifz", "read",
                                           "write", "hole",  "seq",  "let",  "unit", "nat", "mu",
                                           "->",   "*",      "+",    "_"};
    return kws;
}

inline void check_identifier(const Sexpr& e) {
    const std::string& s = e.atom_text();
    if (term_keywords().count(s)) throw ParseError("'" + s + "' is a reserved word", e.line, e.col);
    if (!s.empty() && std::isdigit(static_cast<unsigned char>(s[0])))
        throw ParseError("identifier '" + s + "' must not start with a digit", e.line, e.col);
}

struct TermSyntax {
    bool typed = true;
    Origin origin = Origin::Prog;
};

inline const Term* parse_term(TermStore& store, const Sexpr& e, const TermSyntax& syn) {
    auto pos = [&e](Term t) {
        t.line = e.line;
        t.col = e.col;
        return t;
    };
    if (e.is_atom) {
        if (e.atom == "unit") {
            Term u{};
            u.kind = TermKind::UnitV;
            return store.add(pos(std::move(u)));
        }
        check_identifier(e);
        Term t{};
        t.kind = TermKind::Var;
        t.name = e.atom;
        return store.add(pos(std::move(t)));
    }
    if (e.size() == 0) throw ParseError("empty term", e.line, e.col);
    const std::string& head = e.at(0).atom_text();
    auto arity = [&](std::size_t n, const char* what) {
        if (e.size() != n + 1) throw ParseError(std::string(what) + " expects " + std::to_string(n) + " arguments",
                                                e.line, e.col);
    };
    if (head == "unit") {
        arity(0, "unit");
        Term t{};
        t.kind = TermKind::UnitV;
        return store.add(pos(std::move(t)));
    }
    if (head == "lit") {
        arity(1, "lit");
        Term t{};
        t.kind = TermKind::Lit;
        t.lit = e.at(1).as_nat();
        return store.add(pos(std::move(t)));
    }
    if (head == "succ") {
        arity(1, "succ");
        Term t{};
        t.kind = TermKind::Succ;
        t.a = parse_term(store, e.at(1), syn);
        return store.add(pos(std::move(t)));
    }
    if (head == "ifz") {
        arity(3, "ifz");
        Term t{};
        t.kind = TermKind::Ifz;
        t.a = parse_term(store, e.at(1), syn);
        t.b = parse_term(store, e.at(2), syn);
        t.c = parse_term(store, e.at(3), syn);
        return store.add(pos(std::move(t)));
    }
    if (head == "lam" || head == "let") {
        bool is_let = head == "let";
        arity(is_let ? 3 : 2, head.c_str());
        Term t{};
        t.kind = TermKind::Lam;
        const Sexpr& binder = e.at(1);
        if (syn.typed) {
            if (binder.is_atom || binder.size() != 2)
                throw ParseError(head + " binder must be (name type)", binder.line, binder.col);
            check_identifier(binder.at(0));
            t.name = binder.at(0).atom;
            t.type = parse_type(binder.at(1));
        } else {
            check_identifier(binder);
            t.name = binder.atom;
        }
        t.a = parse_term(store, e.at(is_let ? 3 : 2), syn);
        const Term* lam = store.add(pos(std::move(t)));
        if (!is_let) return lam;
        Term ap{};
        ap.kind = TermKind::App;
        ap.a = lam;
        ap.b = parse_term(store, e.at(2), syn);
        return store.add(pos(std::move(ap)));
    }
    if (head == "app") {
        arity(2, "app");
        Term t{};
        t.kind = TermKind::App;
        t.a = parse_term(store, e.at(1), syn);
        t.b = parse_term(store, e.at(2), syn);
        return store.add(pos(std::move(t)));
    }
    if (head == "pair") {
        arity(2, "pair");
        Term t{};
        t.kind = TermKind::Pair;
        t.a = parse_term(store, e.at(1), syn);
        t.b = parse_term(store, e.at(2), syn);
        return store.add(pos(std::move(t)));
    }
    if (head == "fst" || head == "snd") {
        arity(1, head.c_str());
        Term t{};
        t.kind = head == "fst" ? TermKind::Fst : TermKind::Snd;
        t.a = parse_term(store, e.at(1), syn);
        return store.add(pos(std::move(t)));
    }
    if (head == "inl" || head == "inr") {
        Term t{};
        t.kind = head == "inl" ? TermKind::Inl : TermKind::Inr;
        if (syn.typed) {
            arity(2, head.c_str());
            t.type = parse_type(e.at(1));
            t.a = parse_term(store, e.at(2), syn);
        } else {
            arity(1, head.c_str());
            t.a = parse_term(store, e.at(1), syn);
        }
        return store.add(pos(std::move(t)));
    }
    if (head == "case") {
        arity(3, "case");
        Term t{};
        t.kind = TermKind::Case;
        t.a = parse_term(store, e.at(1), syn);
        const Sexpr& l = e.at(2);
        const Sexpr& r = e.at(3);
        if (l.is_atom || l.size() != 2 || r.is_atom || r.size() != 2)
            throw ParseError("case branches must be (name body)", e.line, e.col);
        check_identifier(l.at(0));
        check_identifier(r.at(0));
        t.name = l.at(0).atom;
        t.name2 = r.at(0).atom;
        t.b = parse_term(store, l.at(1), syn);
        t.c = parse_term(store, r.at(1), syn);
        return store.add(pos(std::move(t)));
    }
    if (head == "fold") {
        if (!syn.typed) throw ParseError("fold is not a target form", e.line, e.col);
        arity(2, "fold");
        Term t{};
        t.kind = TermKind::Fold;
        t.type = parse_type(e.at(1));
        if (t.type->kind != TypeKind::Mu) throw ParseError("fold annotation must be a mu type", e.line, e.col);
        t.a = parse_term(store, e.at(2), syn);
        return store.add(pos(std::move(t)));
    }
    if (head == "unfold") {
        if (!syn.typed) throw ParseError("unfold is not a target form", e.line, e.col);
        arity(1, "unfold");
        Term t{};
        t.kind = TermKind::Unfold;
        t.a = parse_term(store, e.at(1), syn);
        return store.add(pos(std::move(t)));
    }
    if (head == "read") {
        arity(0, "read");
        Term t{};
        t.kind = TermKind::Read;
        t.origin = syn.origin;
        return store.add(pos(std::move(t)));
    }
    if (head == "write") {
        arity(1, "write");
        Term t{};
        t.kind = TermKind::Write;
        t.a = parse_term(store, e.at(1), syn);
        t.origin = syn.origin;
        return store.add(pos(std::move(t)));
    }
    if (head == "seq") {
        if (e.size() < 3) throw ParseError("seq expects at least 2 arguments", e.line, e.col);
        const Term* last = parse_term(store, e.at(e.size() - 1), syn);
        for (std::size_t i = e.size() - 1; i-- > 1;) {
            Term t{};
            t.kind = TermKind::Seq;
            t.a = parse_term(store, e.at(i), syn);
            t.b = last;
            last = store.add(pos(std::move(t)));
        }
        return last;
    }
    if (head == "hole") {
        arity(0, "hole");
        Term t{};
        t.kind = TermKind::Hole;
        return store.add(pos(std::move(t)));
    }
    throw ParseError("unknown term form '" + head + "'", e.line, e.col);
}

inline std::string print_term(const Term* t, bool typed) {
    switch (t->kind) {
    case TermKind::Var: return t->name;
    case TermKind::UnitV: return "unit";
    case TermKind::Lit: return "(lit " + std::to_string(t->lit) + ")";
    case TermKind::Succ: return "(succ " + print_term(t->a, typed) + ")";
    case TermKind::Ifz:
        return "(ifz " + print_term(t->a, typed) + " " + print_term(t->b, typed) + " " + print_term(t->c, typed) +
               ")";
    case TermKind::Lam:
        if (typed) return "(lam (" + t->name + " " + print_type(t->type) + ") " + print_term(t->a, typed) + ")";
        return "(lam " + t->name + " " + print_term(t->a, typed) + ")";
    case TermKind::App: return "(app " + print_term(t->a, typed) + " " + print_term(t->b, typed) + ")";
    case TermKind::Pair: return "(pair " + print_term(t->a, typed) + " " + print_term(t->b, typed) + ")";
    case TermKind::Fst: return "(fst " + print_term(t->a, typed) + ")";
    case TermKind::Snd: return "(snd " + print_term(t->a, typed) + ")";
    case TermKind::Inl:
        if (typed) return "(inl " + print_type(t->type) + " " + print_term(t->a, typed) + ")";
        return "(inl " + print_term(t->a, typed) + ")";
    case TermKind::Inr:
        if (typed) return "(inr " + print_type(t->type) + " " + print_term(t->a, typed) + ")";
        return "(inr " + print_term(t->a, typed) + ")";
    case TermKind::Case:
        return "(case " + print_term(t->a, typed) + " (" + t->name + " " + print_term(t->b, typed) + ") (" +
               t->name2 + " " + print_term(t->c, typed) + "))";
    case TermKind::Fold: return "(fold " + print_type(t->type) + " " + print_term(t->a, typed) + ")";
    case TermKind::Unfold: return "(unfold " + print_term(t->a, typed) + ")";
    case TermKind::Read: return "(read)";
    case TermKind::Write: return "(write " + print_term(t->a, typed) + ")";
    case TermKind::Seq: return "(seq " + print_term(t->a, typed) + " " + print_term(t->b, typed) + ")";
    case TermKind::Hole: return "(hole)";
    }
    return "?";
}

} // namespace scwb
