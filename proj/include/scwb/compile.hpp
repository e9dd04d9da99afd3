// compile.hpp — the type-erasing compiler with boundary protection
// wrappers, plus the deliberately insecure negative-control variants.
#pragma once

#include <map>
#include <string>
#include <utility>

#include "scwb/ast.hpp"
#include "scwb/srclang.hpp"

namespace scwb {

enum class CompilerId : uint8_t { Secure, NoProtect, Backdoor };

inline const char* compiler_name(CompilerId id) {
    switch (id) {
    case CompilerId::Secure: return "secure";
    case CompilerId::NoProtect: return "noprotect";
    case CompilerId::Backdoor: return "backdoor";
    }
    return "?";
}

inline CompilerId parse_compiler(const std::string& s) {
    if (s == "secure") return CompilerId::Secure;
    if (s == "noprotect") return CompilerId::NoProtect;
    if (s == "backdoor") return CompilerId::Backdoor;
    throw std::invalid_argument("unknown compiler '" + s + "' (expected secure|noprotect|backdoor)");
}

// Structure-preserving erasure: drops type annotations and fold/unfold,
// keeps I/O origin labels and free variables.
inline const Term* erase(TermStore& store, const Term* t) {
    switch (t->kind) {
    case TermKind::Fold:
    case TermKind::Unfold: return erase(store, t->a);
    default: {
        Term copy = *t;
        copy.type = nullptr;
        if (t->a) copy.a = erase(store, t->a);
        if (t->b) copy.b = erase(store, t->b);
        if (t->c) copy.c = erase(store, t->c);
        return store.add(std::move(copy));
    }
    }
}

// Generates the protect/confine wrapper pair for a closed type. Generated
// terms are closed, so the fixed "$"-suffixed binder names cannot capture
// anything. Mu wrappers tie the knot with a call-by-value Z combinator,
// unrolling one level per applied value layer.
class WrapperGen {
public:
    explicit WrapperGen(TermStore& store) : s_(store) {}

    const Term* protect(const Type* t) { return gen(t, true); }
    const Term* confine(const Type* t) { return gen(t, false); }

private:
    std::string fresh(const char* stem) { return std::string(stem) + "$" + std::to_string(counter_++); }

    const Term* gen(const Type* t, bool prot) {
        switch (t->kind) {
        case TypeKind::Nat: {
            std::string x = fresh("n");
            return s_.lam(x, nullptr, s_.ifz(s_.var(x), s_.var(x), s_.var(x)));
        }
        case TypeKind::Unit: {
            // No unit-shape probe exists in the target, so the wrapper
            // canonicalizes: any value crossing a unit boundary becomes unit.
            std::string x = fresh("u");
            return s_.lam(x, nullptr, s_.unit());
        }
        case TypeKind::Prod: {
            std::string p = fresh("p");
            return s_.lam(p, nullptr,
                          s_.pair(s_.app(gen(t->a, prot), s_.fst(s_.var(p))),
                                  s_.app(gen(t->b, prot), s_.snd(s_.var(p)))));
        }
        case TypeKind::Sum: {
            std::string v = fresh("s");
            std::string l = fresh("l");
            std::string r = fresh("r");
            return s_.lam(v, nullptr,
                          s_.case_(s_.var(v), l, s_.inl(nullptr, s_.app(gen(t->a, prot), s_.var(l))), r,
                                   s_.inr(nullptr, s_.app(gen(t->b, prot), s_.var(r)))));
        }
        case TypeKind::Arrow: {
            std::string f = fresh("f");
            std::string x = fresh("x");
            return s_.lam(f, nullptr,
                          s_.lam(x, nullptr,
                                 s_.app(gen(t->b, prot),
                                        s_.app(s_.var(f), s_.app(gen(t->a, !prot), s_.var(x))))));
        }
        case TypeKind::Mu: {
            auto key = std::make_pair(t, prot);
            auto it = self_.find(key);
            if (it != self_.end()) return s_.var(it->second);
            std::string self = fresh("w");
            self_.emplace(key, self);
            const Term* body = gen(unfold_mu(t), prot);
            self_.erase(key);
            const Term* fn = s_.lam(self, nullptr, body);
            // Z fn = (λx. fn (λv. x x v)) (λx. fn (λv. x x v))
            std::string x = fresh("z");
            std::string v = fresh("v");
            auto half = [&] {
                return s_.lam(x, nullptr,
                              s_.app(fn, s_.lam(v, nullptr, s_.app(s_.app(s_.var(x), s_.var(x)), s_.var(v)))));
            };
            return s_.app(half(), half());
        }
        case TypeKind::Var: throw TypeError("wrapper generation requires a closed type");
        }
        throw TypeError("wrapper generation: unreachable");
    }

    TermStore& s_;
    std::map<std::pair<const Type*, bool>, std::string> self_;
    uint64_t counter_ = 0;
};

inline const Term* protect_wrapper(TermStore& store, const Type* t) { return WrapperGen(store).protect(t); }
inline const Term* confine_wrapper(TermStore& store, const Type* t) { return WrapperGen(store).confine(t); }

inline const Term* compile(TermStore& store, const Term* p, CompilerId id) {
    const Type* ty = validate_src_program(p);
    const Term* erased = erase(store, p);
    switch (id) {
    case CompilerId::NoProtect: return erased;
    case CompilerId::Secure: return store.app(protect_wrapper(store, ty), erased);
    case CompilerId::Backdoor:
        return store.pair(store.app(protect_wrapper(store, ty), erased),
                          store.lam("z$", nullptr, store.write(store.lit(0), Origin::Prog)));
    }
    throw std::invalid_argument("unknown compiler id");
}

} // namespace scwb
