// srclang.hpp — the simply typed source calculus: typechecker, linking,
// trace-emitting evaluation, and type-directed context enumeration.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "scwb/ast.hpp"
#include "scwb/machine.hpp"
#include "scwb/trace.hpp"

namespace scwb {

struct TypeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

struct TcFrame {
    const std::string* name;
    const Type* type;
};

inline std::string join_path(const std::vector<const char*>& path) {
    std::string s = "whole";
    for (const char* p : path) {
        s += '/';
        s += p;
    }
    return s;
}

inline const Type* tc(const Term* t, std::vector<TcFrame>& env, const Type* hole_type,
                      std::vector<const char*>& path) {
    auto fail = [&](const std::string& msg) -> const Type* {
        throw TypeError(msg + " at " + join_path(path));
    };
    auto want = [&](const Type* got, const Type* expect, const char* what) {
        if (got != expect)
            fail(std::string(what) + ": expected " + print_type(expect) + ", got " + print_type(got));
    };
    auto under = [&](const char* label, const Term* sub, const Type* binder_ty, const std::string* binder_name) {
        path.push_back(label);
        if (binder_name) env.push_back({binder_name, binder_ty});
        const Type* r = tc(sub, env, hole_type, path);
        if (binder_name) env.pop_back();
        path.pop_back();
        return r;
    };

    switch (t->kind) {
    case TermKind::Var:
        for (std::size_t i = env.size(); i-- > 0;)
            if (*env[i].name == t->name) return env[i].type;
        return fail("unbound variable '" + t->name + "'");
    case TermKind::UnitV: return t_unit();
    case TermKind::Lit: return t_nat();
    case TermKind::Succ:
        want(under("succ", t->a, nullptr, nullptr), t_nat(), "succ argument");
        return t_nat();
    case TermKind::Ifz: {
        want(under("ifz.scrutinee", t->a, nullptr, nullptr), t_nat(), "ifz scrutinee");
        const Type* z = under("ifz.zero", t->b, nullptr, nullptr);
        const Type* s = under("ifz.succ", t->c, nullptr, nullptr);
        if (z != s) fail("ifz branches disagree: " + print_type(z) + " vs " + print_type(s));
        return z;
    }
    case TermKind::Lam: {
        if (!t->type) return fail("lam binder lacks a type annotation");
        if (!type_closed(t->type)) return fail("lam binder type is not closed");
        if (!type_contractive(t->type)) return fail("lam binder type is not contractive");
        const Type* body = under("lam.body", t->a, t->type, &t->name);
        return t_arrow(t->type, body);
    }
    case TermKind::App: {
        const Type* f = under("app.fun", t->a, nullptr, nullptr);
        if (f->kind != TypeKind::Arrow) return fail("application of non-function of type " + print_type(f));
        want(under("app.arg", t->b, nullptr, nullptr), f->a, "application argument");
        return f->b;
    }
    case TermKind::Pair: {
        const Type* l = under("pair.fst", t->a, nullptr, nullptr);
        const Type* r = under("pair.snd", t->b, nullptr, nullptr);
        return t_prod(l, r);
    }
    case TermKind::Fst: {
        const Type* p = under("fst", t->a, nullptr, nullptr);
        if (p->kind != TypeKind::Prod) return fail("fst of non-product of type " + print_type(p));
        return p->a;
    }
    case TermKind::Snd: {
        const Type* p = under("snd", t->a, nullptr, nullptr);
        if (p->kind != TypeKind::Prod) return fail("snd of non-product of type " + print_type(p));
        return p->b;
    }
    case TermKind::Inl:
    case TermKind::Inr: {
        const char* which = t->kind == TermKind::Inl ? "inl" : "inr";
        if (!t->type || t->type->kind != TypeKind::Sum)
            return fail(std::string(which) + " annotation must be a sum type");
        if (!type_closed(t->type)) return fail(std::string(which) + " annotation is not closed");
        const Type* expect = t->kind == TermKind::Inl ? t->type->a : t->type->b;
        want(under(which, t->a, nullptr, nullptr), expect, "injection payload");
        return t->type;
    }
    case TermKind::Case: {
        const Type* s = under("case.scrutinee", t->a, nullptr, nullptr);
        if (s->kind != TypeKind::Sum) return fail("case of non-sum of type " + print_type(s));
        const Type* l = under("case.inl", t->b, s->a, &t->name);
        const Type* r = under("case.inr", t->c, s->b, &t->name2);
        if (l != r) fail("case branches disagree: " + print_type(l) + " vs " + print_type(r));
        return l;
    }
    case TermKind::Fold: {
        if (!t->type || t->type->kind != TypeKind::Mu) return fail("fold annotation must be a mu type");
        if (!type_closed(t->type)) return fail("fold annotation is not closed");
        if (!type_contractive(t->type)) return fail("fold annotation is not contractive");
        want(under("fold", t->a, nullptr, nullptr), unfold_mu(t->type), "fold payload");
        return t->type;
    }
    case TermKind::Unfold: {
        const Type* m = under("unfold", t->a, nullptr, nullptr);
        if (m->kind != TypeKind::Mu) return fail("unfold of non-mu of type " + print_type(m));
        return unfold_mu(m);
    }
    case TermKind::Read: return t_nat();
    case TermKind::Write:
        want(under("write", t->a, nullptr, nullptr), t_nat(), "write argument");
        return t_unit();
    case TermKind::Seq:
        under("seq.first", t->a, nullptr, nullptr);
        return under("seq.second", t->b, nullptr, nullptr);
    case TermKind::Hole:
        if (!hole_type) return fail("hole in a term checked without a hole type");
        return hole_type;
    }
    return fail("unreachable term kind");
}

} // namespace detail

inline const Type* typecheck(const Term* t, const Type* hole_type = nullptr) {
    std::vector<detail::TcFrame> env;
    std::vector<const char*> path;
    return detail::tc(t, env, hole_type, path);
}

// A program is a closed, hole-free term with Prog-labeled I/O.
inline const Type* validate_src_program(const Term* p) {
    if (count_holes(p) != 0) throw TypeError("program must be hole-free");
    if (!origins_all(p, Origin::Prog)) throw TypeError("program I/O must be Prog-labeled");
    return typecheck(p);
}

// A context has exactly one hole and Ctx-labeled I/O, and produces unit.
inline void validate_src_context(const Term* c, const Type* hole_type) {
    if (count_holes(c) != 1) throw TypeError("context must have exactly one hole");
    if (!origins_all(c, Origin::Ctx)) throw TypeError("context I/O must be Ctx-labeled");
    const Type* r = typecheck(c, hole_type);
    if (r != t_unit()) throw TypeError("context result type must be unit, got " + print_type(r));
}

inline const Term* link(TermStore& store, const Term* c, const Term* p) {
    const Type* pt = validate_src_program(p);
    if (count_holes(c) != 1) throw TypeError("context must have exactly one hole");
    const Type* r = typecheck(c, pt);
    if (r != t_unit()) throw TypeError("context result type must be unit, got " + print_type(r));
    return plug(store, c, p);
}

inline Obs eval_trace_src(const Term* whole, const std::vector<uint32_t>& stream, const Bounds& b) {
    const Type* ty = typecheck(whole);
    if (ty != t_unit()) throw TypeError("whole program must have type unit, got " + print_type(ty));
    return eval_whole(whole, stream, b, true);
}

inline TraceSet trace_set_src(const Term* c, const Term* p, const Bounds& b) {
    const Type* pt = validate_src_program(p);
    if (count_holes(c) != 1) throw TypeError("context must have exactly one hole");
    if (typecheck(c, pt) != t_unit()) throw TypeError("context result type must be unit");
    return trace_set_of(c, p, b, true);
}

// ---------------------------------------------------------------------------
// Type-directed context enumeration
// ---------------------------------------------------------------------------

// The closed quantification pool for eliminator auxiliary types: all
// subterms of the hole type, unit and nat, plus one-level unfoldings of
// every mu in that set. Canonically ordered by printed form.
inline std::vector<const Type*> type_pool(const Type* hole_type) {
    std::set<const Type*> seen;
    std::function<void(const Type*)> subterms = [&](const Type* t) {
        if (!type_closed(t)) return; // open subterms of mu bodies are not quantifiable
        if (!seen.insert(t).second) return;
        switch (t->kind) {
        case TypeKind::Arrow:
        case TypeKind::Prod:
        case TypeKind::Sum:
            subterms(t->a);
            subterms(t->b);
            break;
        case TypeKind::Mu: subterms(unfold_mu(t)); break;
        default: break;
        }
    };
    subterms(t_unit());
    subterms(t_nat());
    subterms(hole_type);
    std::vector<const Type*> pool(seen.begin(), seen.end());
    std::sort(pool.begin(), pool.end(),
              [](const Type* a, const Type* b) { return print_type(a) < print_type(b); });
    return pool;
}

// Exhaustive enumeration of well-typed contexts: result unit, exactly one
// hole of the given type, Ctx-labeled I/O, literals 0..V, binder names drawn
// from the canonical pool x0, x1, … by binding depth. Enumerated terms share
// subtrees and stay alive for the enumerator's lifetime; callers that keep a
// context beyond the callback must deep-copy it.
class SrcContextEnum {
public:
    SrcContextEnum(const Type* hole_type, uint32_t max_size, uint32_t value_cap)
        : hole_type_(hole_type), max_size_(max_size), value_cap_(value_cap), pool_(type_pool(hole_type)) {}

    // fn returns false to stop early
    void foreach(const std::function<bool(const Term*)>& fn) {
        for (uint32_t s = 1; s <= max_size_; ++s)
            for (const Term* t : terms(t_unit(), s, true))
                if (!fn(t)) return;
    }

    uint64_t count() {
        uint64_t n = 0;
        for (uint32_t s = 1; s <= max_size_; ++s) n += terms(t_unit(), s, true).size();
        return n;
    }

private:
    using Key = std::tuple<const Type*, uint32_t, bool, std::vector<const Type*>>;

    const std::vector<const Term*>& terms(const Type* ty, uint32_t s, bool hole) {
        Key key{ty, s, hole, scope_};
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        std::vector<const Term*> out;
        build(ty, s, hole, out);
        return memo_.emplace(std::move(key), std::move(out)).first->second;
    }

    void build(const Type* ty, uint32_t s, bool hole, std::vector<const Term*>& out) {
        if (s == 0) return;
        if (s == 1) {
            if (hole) {
                if (ty == hole_type_) out.push_back(store_.hole());
                return;
            }
            if (ty->kind == TypeKind::Unit) out.push_back(store_.unit());
            if (ty->kind == TypeKind::Nat) {
                for (uint32_t v = 0; v <= value_cap_; ++v) out.push_back(store_.lit(v));
                out.push_back(store_.read(Origin::Ctx));
            }
            for (std::size_t i = scope_.size(); i-- > 0;)
                if (scope_[i] == ty) out.push_back(store_.var("x" + std::to_string(i)));
            return;
        }

        auto unary = [&](const Type* child_ty, auto make) {
            for (const Term* e : terms(child_ty, s - 1, hole)) out.push_back(make(e));
        };
        if (ty->kind == TypeKind::Nat) unary(t_nat(), [&](const Term* e) { return store_.succ(e); });
        if (ty->kind == TypeKind::Unit) unary(t_nat(), [&](const Term* e) { return store_.write(e, Origin::Ctx); });
        for (const Type* p : pool_)
            if (p->kind == TypeKind::Prod && p->a == ty)
                unary(p, [&](const Term* e) { return store_.fst(e); });
        for (const Type* p : pool_)
            if (p->kind == TypeKind::Prod && p->b == ty)
                unary(p, [&](const Term* e) { return store_.snd(e); });
        if (ty->kind == TypeKind::Sum) {
            unary(ty->a, [&](const Term* e) { return store_.inl(ty, e); });
            unary(ty->b, [&](const Term* e) { return store_.inr(ty, e); });
        }
        if (ty->kind == TypeKind::Mu) unary(unfold_mu(ty), [&](const Term* e) { return store_.fold(ty, e); });
        for (const Type* p : pool_)
            if (p->kind == TypeKind::Mu && unfold_mu(p) == ty)
                unary(p, [&](const Term* e) { return store_.unfold(e); });
        if (ty->kind == TypeKind::Arrow) {
            std::string name = "x" + std::to_string(scope_.size());
            scope_.push_back(ty->a);
            // the memo key includes the new scope, so recursion is safe
            std::vector<const Term*> bodies = terms(ty->b, s - 1, hole);
            scope_.pop_back();
            for (const Term* e : bodies) out.push_back(store_.lam(name, ty->a, e));
        }

        auto binary = [&](const Type* lt, const Type* rt, auto make) {
            for (uint32_t s1 = 1; s1 + 1 < s; ++s1) {
                uint32_t s2 = s - 1 - s1;
                for (auto [hl, hr] : hole_splits2(hole))
                    for (const Term* l : terms(lt, s1, hl)) {
                        for (const Term* r : terms(rt, s2, hr)) out.push_back(make(l, r));
                    }
            }
        };
        for (const Type* p : pool_)
            if (p->kind == TypeKind::Arrow && p->b == ty)
                binary(p, p->a, [&](const Term* f, const Term* x) { return store_.app(f, x); });
        if (ty->kind == TypeKind::Prod)
            binary(ty->a, ty->b, [&](const Term* l, const Term* r) { return store_.pair(l, r); });
        for (const Type* sig : pool_)
            binary(sig, ty, [&](const Term* l, const Term* r) { return store_.seq(l, r); });

        // ifz and case: three children
        for (uint32_t s1 = 1; s1 + 2 < s; ++s1)
            for (uint32_t s2 = 1; s1 + s2 + 1 < s; ++s2) {
                uint32_t s3 = s - 1 - s1 - s2;
                for (auto [h1, h2, h3] : hole_splits3(hole)) {
                    for (const Term* e : terms(t_nat(), s1, h1))
                        for (const Term* z : terms(ty, s2, h2))
                            for (const Term* sc : terms(ty, s3, h3)) out.push_back(store_.ifz(e, z, sc));
                    for (const Type* p : pool_) {
                        if (p->kind != TypeKind::Sum) continue;
                        for (const Term* e : terms(p, s1, h1)) {
                            std::string nl = "x" + std::to_string(scope_.size());
                            scope_.push_back(p->a);
                            std::vector<const Term*> ls = terms(ty, s2, h2);
                            scope_.pop_back();
                            scope_.push_back(p->b);
                            std::vector<const Term*> rs = terms(ty, s3, h3);
                            scope_.pop_back();
                            for (const Term* l : ls)
                                for (const Term* r : rs) out.push_back(store_.case_(e, nl, l, nl, r));
                        }
                    }
                }
            }
    }

    static std::vector<std::pair<bool, bool>> hole_splits2(bool hole) {
        if (hole) return {{true, false}, {false, true}};
        return {{false, false}};
    }
    static std::vector<std::tuple<bool, bool, bool>> hole_splits3(bool hole) {
        if (hole) return {{true, false, false}, {false, true, false}, {false, false, true}};
        return {{false, false, false}};
    }

    const Type* hole_type_;
    uint32_t max_size_;
    uint32_t value_cap_;
    std::vector<const Type*> pool_;
    std::vector<const Type*> scope_;
    TermStore store_;
    std::map<Key, std::vector<const Term*>> memo_;
};

inline void enumerate_src_contexts(const Type* hole_type, uint32_t max_size, uint32_t value_cap,
                                   const std::function<bool(const Term*)>& fn) {
    SrcContextEnum e(hole_type, max_size, value_cap);
    e.foreach(fn);
}

inline const Term* deep_copy(TermStore& dst, const Term* t) {
    Term copy = *t;
    if (t->a) copy.a = deep_copy(dst, t->a);
    if (t->b) copy.b = deep_copy(dst, t->b);
    if (t->c) copy.c = deep_copy(dst, t->c);
    return dst.add(std::move(copy));
}

} // namespace scwb
