// backtrans.hpp — translating target contexts back into well-typed source
// contexts over a universal value type, independent of any property.
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "scwb/ast.hpp"
#include "scwb/srclang.hpp"
#include "scwb/tgtlang.hpp"

namespace scwb {

// U = mu X. unit + (nat + (X*X + ((X+X) + (X->X))))
// One summand per target value shape, so an untyped value's runtime shape
// maps to a tag and every target shape probe maps to a tag dispatch.
inline const Type* universal_type() {
    const Type* x = t_var(0);
    const Type* body =
        t_sum(t_unit(), t_sum(t_nat(), t_sum(t_prod(x, x), t_sum(t_sum(x, x), t_arrow(x, x)))));
    return t_mu(body, "U");
}

class Backtranslator {
public:
    Backtranslator(TermStore& store, const Term* seed_names)
        : s_(store), gen_({seed_names}), u_(universal_type()) {
        r0_ = unfold_mu(u_);       // unit + r1
        r1_ = r0_->b;              // nat + r2
        r2_ = r1_->b;              // U*U + r3
        r3_ = r2_->b;              // (U+U) + (U->U)
        uu_ = r3_->a;              // U+U
        uf_ = r3_->b;              // U->U
        up_ = r2_->a;              // U*U
    }

    const Type* u() const { return u_; }

    // Tag injections. Payload events happen before the wrapping constructors.
    const Term* in_unit(const Term* e) { return s_.fold(u_, s_.inl(r0_, e)); }
    const Term* in_nat(const Term* e) { return s_.fold(u_, s_.inr(r0_, s_.inl(r1_, e))); }
    const Term* in_pair(const Term* e) { return s_.fold(u_, s_.inr(r0_, s_.inr(r1_, s_.inl(r2_, e)))); }
    const Term* in_sum(const Term* e) {
        return s_.fold(u_, s_.inr(r0_, s_.inr(r1_, s_.inr(r2_, s_.inl(r3_, e)))));
    }
    const Term* in_fun(const Term* e) {
        return s_.fold(u_, s_.inr(r0_, s_.inr(r1_, s_.inr(r2_, s_.inr(r3_, e)))));
    }

    // A silently diverging term of an arbitrary closed type, standing in for
    // the target machine going silent on a shape violation.
    const Term* omega_at(const Type* ty) {
        const Type* d = t_mu(t_arrow(t_var(0), ty), "D");
        std::string x = gen_.fresh("d");
        const Term* w = s_.lam(x, d, s_.app(s_.unfold(s_.var(x)), s_.var(x)));
        return s_.app(w, s_.fold(d, w));
    }

    // Shape dispatch on a U-typed term: select one tag's payload, diverge on
    // every other tag. The dispatch happens where the target would go stuck.
    const Term* as_nat(const Term* m) { return dispatch(m, 1, t_nat()); }
    const Term* as_pair(const Term* m) { return dispatch(m, 2, up_); }
    const Term* as_sum(const Term* m) { return dispatch(m, 3, uu_); }
    const Term* as_fun(const Term* m) { return dispatch(m, 4, uf_); }

    // embed ty : ty -> U, total on well-typed arguments.
    const Term* embed(const Type* ty) {
        switch (ty->kind) {
        case TypeKind::Unit: {
            std::string x = gen_.fresh("x");
            return s_.lam(x, ty, in_unit(s_.var(x)));
        }
        case TypeKind::Nat: {
            std::string x = gen_.fresh("x");
            return s_.lam(x, ty, in_nat(s_.var(x)));
        }
        case TypeKind::Prod: {
            std::string p = gen_.fresh("p");
            return s_.lam(p, ty,
                          in_pair(s_.pair(s_.app(embed(ty->a), s_.fst(s_.var(p))),
                                          s_.app(embed(ty->b), s_.snd(s_.var(p))))));
        }
        case TypeKind::Sum: {
            std::string v = gen_.fresh("v");
            std::string l = gen_.fresh("l");
            std::string r = gen_.fresh("r");
            return s_.lam(v, ty,
                          s_.case_(s_.var(v), l, in_sum(s_.inl(uu_, s_.app(embed(ty->a), s_.var(l)))), r,
                                   in_sum(s_.inr(uu_, s_.app(embed(ty->b), s_.var(r))))));
        }
        case TypeKind::Arrow: {
            std::string f = gen_.fresh("f");
            std::string a = gen_.fresh("a");
            return s_.lam(f, ty,
                          in_fun(s_.lam(a, u_,
                                        s_.app(embed(ty->b),
                                               s_.app(s_.var(f), s_.app(project(ty->a), s_.var(a)))))));
        }
        case TypeKind::Mu: {
            auto key = std::make_pair(ty, true);
            auto it = self_.find(key);
            if (it != self_.end()) return s_.var(it->second);
            std::string self = gen_.fresh("e");
            std::string m = gen_.fresh("m");
            self_.emplace(key, self);
            const Term* inner = embed(unfold_mu(ty));
            self_.erase(key);
            const Term* fn =
                s_.lam(self, t_arrow(ty, u_), s_.lam(m, ty, s_.app(inner, s_.unfold(s_.var(m)))));
            return fix(ty, u_, fn);
        }
        case TypeKind::Var: break;
        }
        throw TypeError("embed requires a closed type");
    }

    // project ty : U -> ty, diverging exactly where the matching target-side
    // shape probe would go stuck.
    const Term* project(const Type* ty) {
        switch (ty->kind) {
        case TypeKind::Unit: {
            // The target has no unit probe; anything crossing a unit boundary
            // is canonicalized, so projection is total.
            std::string x = gen_.fresh("x");
            return s_.lam(x, u_, s_.unit());
        }
        case TypeKind::Nat: {
            std::string x = gen_.fresh("x");
            return s_.lam(x, u_, as_nat(s_.var(x)));
        }
        case TypeKind::Prod: {
            std::string x = gen_.fresh("x");
            std::string p = gen_.fresh("p");
            return s_.lam(x, u_,
                          s_.let(p, up_, as_pair(s_.var(x)),
                                 s_.pair(s_.app(project(ty->a), s_.fst(s_.var(p))),
                                         s_.app(project(ty->b), s_.snd(s_.var(p))))));
        }
        case TypeKind::Sum: {
            std::string x = gen_.fresh("x");
            std::string l = gen_.fresh("l");
            std::string r = gen_.fresh("r");
            return s_.lam(x, u_,
                          s_.case_(as_sum(s_.var(x)), l, s_.inl(ty, s_.app(project(ty->a), s_.var(l))), r,
                                   s_.inr(ty, s_.app(project(ty->b), s_.var(r)))));
        }
        case TypeKind::Arrow: {
            // Deliberately lazy: the tag dispatch sits inside the returned
            // lambda, mirroring a target application going stuck only when
            // the alleged function is finally called.
            std::string x = gen_.fresh("x");
            std::string a = gen_.fresh("a");
            return s_.lam(x, u_,
                          s_.lam(a, ty->a,
                                 s_.app(project(ty->b),
                                        s_.app(as_fun(s_.var(x)), s_.app(embed(ty->a), s_.var(a))))));
        }
        case TypeKind::Mu: {
            auto key = std::make_pair(ty, false);
            auto it = self_.find(key);
            if (it != self_.end()) return s_.var(it->second);
            std::string self = gen_.fresh("q");
            std::string x = gen_.fresh("x");
            self_.emplace(key, self);
            const Term* inner = project(unfold_mu(ty));
            self_.erase(key);
            const Term* fn = s_.lam(self, t_arrow(u_, ty),
                                    s_.lam(x, u_, s_.fold(ty, s_.app(inner, s_.var(x)))));
            return fix(u_, ty, fn);
        }
        case TypeKind::Var: break;
        }
        throw TypeError("project requires a closed type");
    }

    // Compositional translation of a target term into a U-typed source term.
    // The hole passes through untouched.
    const Term* term(const Term* t) {
        switch (t->kind) {
        case TermKind::Var: return s_.var(t->name);
        case TermKind::UnitV: return in_unit(s_.unit());
        case TermKind::Lit: return in_nat(s_.lit(t->lit));
        case TermKind::Lam: return in_fun(s_.lam(t->name, u_, term(t->a)));
        case TermKind::App: {
            // Bind both halves first so the shape dispatch fires only after
            // the argument ran, matching the target's application order.
            std::string f = gen_.fresh("f");
            std::string a = gen_.fresh("a");
            return s_.let(f, u_, term(t->a),
                          s_.let(a, u_, term(t->b), s_.app(as_fun(s_.var(f)), s_.var(a))));
        }
        case TermKind::Succ: return in_nat(s_.succ(as_nat(term(t->a))));
        case TermKind::Ifz: return s_.ifz(as_nat(term(t->a)), term(t->b), term(t->c));
        case TermKind::Pair: return in_pair(s_.pair(term(t->a), term(t->b)));
        case TermKind::Fst: return s_.fst(as_pair(term(t->a)));
        case TermKind::Snd: return s_.snd(as_pair(term(t->a)));
        case TermKind::Inl: return in_sum(s_.inl(uu_, term(t->a)));
        case TermKind::Inr: return in_sum(s_.inr(uu_, term(t->a)));
        case TermKind::Case:
            return s_.case_(as_sum(term(t->a)), t->name, term(t->b), t->name2, term(t->c));
        case TermKind::Read: return in_nat(s_.read(t->origin));
        case TermKind::Write: return in_unit(s_.write(as_nat(term(t->a)), t->origin));
        case TermKind::Seq: return s_.seq(term(t->a), term(t->b));
        case TermKind::Hole: return s_.hole();
        case TermKind::Fold:
        case TermKind::Unfold: break;
        }
        throw std::invalid_argument("backtranslation: not a target term");
    }

private:
    // fix over sig->rho via a one-shot recursive closure:
    //   fix F = (\d. F (\v. unfold d d v)) (fold (\d. F (\v. unfold d d v)))
    const Term* fix(const Type* sig, const Type* rho, const Term* fn) {
        const Type* fr = t_arrow(sig, rho);
        const Type* d = t_mu(t_arrow(t_var(0), fr), "F");
        std::string dv = gen_.fresh("d");
        std::string sv = gen_.fresh("s");
        const Term* w =
            s_.lam(dv, d,
                   s_.app(fn, s_.lam(sv, sig,
                                     s_.app(s_.app(s_.unfold(s_.var(dv)), s_.var(dv)), s_.var(sv)))));
        return s_.app(w, s_.fold(d, w));
    }

    // Four-deep case ladder over unfold m: arm `want` keeps its payload,
    // every other arm diverges at the payload's type.
    const Term* dispatch(const Term* m, int want, const Type* res) {
        const Term* scrut = s_.unfold(m);
        return ladder(scrut, 0, want, res);
    }

    const Term* ladder(const Term* scrut, int depth, int want, const Type* res) {
        std::string l = gen_.fresh("t");
        std::string r = gen_.fresh("t");
        const Term* left =
            depth == want ? s_.var(l) : omega_at(res);
        const Term* right;
        if (depth == 3) {
            right = want == 4 ? s_.var(r) : omega_at(res);
        } else {
            right = ladder(s_.var(r), depth + 1, want, res);
        }
        return s_.case_(scrut, l, left, r, right);
    }

    TermStore& s_;
    NameGen gen_;
    const Type* u_;
    const Type* r0_ = nullptr;
    const Type* r1_ = nullptr;
    const Type* r2_ = nullptr;
    const Type* r3_ = nullptr;
    const Type* uu_ = nullptr;
    const Type* uf_ = nullptr;
    const Type* up_ = nullptr;
    std::map<std::pair<const Type*, bool>, std::string> self_;
};

// C_S = seq(T[hole := (embed ty) hole], unit) where T backtranslates C_T.
// The wrapper discards the U result so the whole program has type unit.
inline const Term* backtranslate_context(TermStore& store, const Term* ct, const Type* export_type) {
    validate_tgt_context(ct);
    Backtranslator bt(store, ct);
    const Term* body = bt.term(ct);
    const Term* filled = plug(store, body, store.app(bt.embed(export_type), store.hole()));
    return store.seq(filled, store.unit());
}

} // namespace scwb
