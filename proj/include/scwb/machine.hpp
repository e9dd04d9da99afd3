// machine.hpp — the shared CEK evaluator: de Bruijn resolution, machine
// values, silent-cycle detection, fixed-stream runs and read-branching
// trace-set exploration.
#pragma once

#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

#include "scwb/ast.hpp"
#include "scwb/support.hpp"
#include "scwb/trace.hpp"

namespace scwb {

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RTerm {
    TermKind kind;
    const RTerm* a = nullptr;
    const RTerm* b = nullptr;
    const RTerm* c = nullptr;
    uint32_t idx = 0; // Var de Bruijn index, Lit value
    Origin origin = Origin::Prog;
};

class RStore {
public:
    const RTerm* add(RTerm t) {
        pool_.push_back(t);
        return &pool_.back();
    }
    void clear() { pool_.clear(); }
    std::size_t size() const { return pool_.size(); }

private:
    std::deque<RTerm> pool_;
};

// Named term to de Bruijn form. Holes are kept as jump stubs when allowed.
inline const RTerm* resolve(RStore& store, const Term* t, std::vector<const std::string*>& scope, bool allow_hole) {
    RTerm r{t->kind};
    r.origin = t->origin;
    switch (t->kind) {
    case TermKind::Var: {
        for (std::size_t i = scope.size(); i-- > 0;)
            if (*scope[i] == t->name) {
                r.idx = static_cast<uint32_t>(scope.size() - 1 - i);
                return store.add(r);
            }
        throw EvalError("unbound variable '" + t->name + "'");
    }
    case TermKind::Lit: r.idx = t->lit; return store.add(r);
    case TermKind::UnitV:
    case TermKind::Read: return store.add(r);
    case TermKind::Hole:
        if (!allow_hole) throw EvalError("hole in a term that must be hole-free");
        return store.add(r);
    case TermKind::Lam:
        scope.push_back(&t->name);
        r.a = resolve(store, t->a, scope, allow_hole);
        scope.pop_back();
        return store.add(r);
    case TermKind::Case:
        r.a = resolve(store, t->a, scope, allow_hole);
        scope.push_back(&t->name);
        r.b = resolve(store, t->b, scope, allow_hole);
        scope.pop_back();
        scope.push_back(&t->name2);
        r.c = resolve(store, t->c, scope, allow_hole);
        scope.pop_back();
        return store.add(r);
    default:
        if (t->a) r.a = resolve(store, t->a, scope, allow_hole);
        if (t->b) r.b = resolve(store, t->b, scope, allow_hole);
        if (t->c) r.c = resolve(store, t->c, scope, allow_hole);
        return store.add(r);
    }
}

inline const RTerm* resolve(RStore& store, const Term* t, bool allow_hole = false) {
    std::vector<const std::string*> scope;
    return resolve(store, t, scope, allow_hole);
}

// ---------------------------------------------------------------------------
// Machine values, environments, continuations
// ---------------------------------------------------------------------------

enum class ValKind : uint8_t { Unit, Nat, Pair, Inl, Inr, Clo, Fold };

struct EnvCell;

struct Value {
    ValKind kind;
    uint32_t nat = 0;
    const Value* v1 = nullptr; // Pair left, Inl/Inr/Fold payload
    const Value* v2 = nullptr; // Pair right
    const RTerm* body = nullptr;
    const EnvCell* env = nullptr;
};

struct EnvCell {
    const Value* v;
    const EnvCell* next;
};

enum class KKind : uint8_t {
    Done,
    AppArg,  // function value known, evaluate argument
    AppCall, // argument value incoming, apply
    Succ,
    Ifz,
    PairL,
    PairR,
    Fst,
    Snd,
    Inl,
    Inr,
    Case,
    Fold,
    Unfold,
    Write,
    Seq
};

struct Kont {
    KKind kind;
    const RTerm* t1 = nullptr;
    const RTerm* t2 = nullptr;
    const EnvCell* env = nullptr;
    const Value* v = nullptr;
    Origin origin = Origin::Prog;
    const Kont* next = nullptr;
};

namespace detail {

inline bool val_eq(const Value* a, const Value* b);

inline bool env_eq(const EnvCell* a, const EnvCell* b) {
    while (a != b) {
        if (!a || !b) return false;
        if (!val_eq(a->v, b->v)) return false;
        a = a->next;
        b = b->next;
    }
    return true;
}

inline bool val_eq(const Value* a, const Value* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case ValKind::Unit: return true;
    case ValKind::Nat: return a->nat == b->nat;
    case ValKind::Pair: return val_eq(a->v1, b->v1) && val_eq(a->v2, b->v2);
    case ValKind::Inl:
    case ValKind::Inr:
    case ValKind::Fold: return val_eq(a->v1, b->v1);
    case ValKind::Clo: return a->body == b->body && env_eq(a->env, b->env);
    }
    return false;
}

inline bool kont_eq(const Kont* a, const Kont* b) {
    while (a != b) {
        if (!a || !b) return false;
        if (a->kind != b->kind || a->t1 != b->t1 || a->t2 != b->t2 || a->origin != b->origin) return false;
        if (!env_eq(a->env, b->env)) return false;
        if (!val_eq(a->v, b->v)) return false;
        a = a->next;
        b = b->next;
    }
    return true;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Evaluator
// ---------------------------------------------------------------------------

// One evaluator instance serves both calculi: in source mode a shape
// mismatch is an internal error (well-typed terms cannot get stuck); in
// target mode it cuts the observation as silent divergence.
class Evaluator {
public:
    Evaluator(const Bounds& b, bool source_mode) : bounds_(b), source_(source_mode) { reset(); }

    // Evaluate with reads taken from a fixed stream; reads past its end block.
    Obs eval_stream(const RTerm* root, const RTerm* plugged, const std::vector<uint32_t>& stream) {
        reset();
        plug_ = plugged;
        stream_ = &stream;
        std::vector<Obs> out;
        run(State{root, nullptr, nullptr, nullptr, 0}, 0, out);
        stream_ = nullptr;
        plug_ = nullptr;
        return out.front();
    }

    // Explore every read outcome in 0..V, depth-first, sharing run prefixes.
    // Equivalent to evaluating all (V+1)^streamLen fixed streams and
    // deduplicating.
    TraceSet trace_set(const RTerm* root, const RTerm* plugged = nullptr) {
        reset();
        plug_ = plugged;
        std::vector<Obs> out;
        run(State{root, nullptr, nullptr, nullptr, 0}, 0, out);
        plug_ = nullptr;
        return TraceSet::of(std::move(out), bounds_);
    }

private:
    struct State {
        const RTerm* ctrl; // nonnull: evaluate term; null: deliver val
        const Value* val;
        const EnvCell* env;
        const Kont* kont;
        uint32_t reads;
    };

    void reset() {
        arena_.reset();
        vunit_ = arena_.make<Value>(Value{ValKind::Unit});
        vnat_.assign(bounds_.value_cap + 1, nullptr);
        for (uint32_t i = 0; i <= bounds_.value_cap; ++i) {
            Value v{ValKind::Nat};
            v.nat = i;
            vnat_[i] = arena_.make<Value>(v);
        }
        events_.clear();
    }

    const EnvCell* extend(const EnvCell* env, const Value* v) { return arena_.make<EnvCell>(EnvCell{v, env}); }
    const Kont* push(Kont k, const Kont* next) {
        k.next = next;
        return arena_.make<Kont>(k);
    }

    static const Value* lookup(const EnvCell* env, uint32_t idx) {
        while (idx--) env = env->next;
        return env->v;
    }

    [[noreturn]] void internal_stuck(const char* what) {
        throw EvalError(std::string("source machine reached a stuck state (") + what +
                        "); typechecking should make this impossible");
    }

    bool states_equal(const State& a, const State& b) const {
        if (a.ctrl != b.ctrl || a.reads != b.reads) return false;
        if (!a.ctrl && !detail::val_eq(a.val, b.val)) return false;
        return detail::env_eq(a.env, b.env) && detail::kont_eq(a.kont, b.kont);
    }

    void emit_leaf(std::vector<Obs>& out, Marker m, CutCause c) {
        out.push_back(Obs{events_, m, c});
    }

    // Runs from `st` having already spent `steps` of fuel on this path.
    // Branches at reads in trace-set mode. events_ acts as a shared stack.
    void run(State st, uint64_t steps, std::vector<Obs>& out) {
        State anchor = st;
        uint64_t anchor_steps = steps;
        uint64_t anchor_limit = 16;

        for (;;) {
            if (steps >= bounds_.fuel) {
                emit_leaf(out, Marker::Incomplete, CutCause::Fuel);
                return;
            }
            if (steps - anchor_steps >= anchor_limit) {
                anchor = st;
                anchor_steps = steps;
                anchor_limit <<= 1;
            } else if (steps > anchor_steps && states_equal(st, anchor)) {
                emit_leaf(out, Marker::Incomplete, CutCause::Cycle);
                return;
            }
            ++steps;

            if (st.ctrl) {
                const RTerm* t = st.ctrl;
                switch (t->kind) {
                case TermKind::Var:
                    st.val = lookup(st.env, t->idx);
                    st.ctrl = nullptr;
                    break;
                case TermKind::UnitV:
                    st.val = vunit_;
                    st.ctrl = nullptr;
                    break;
                case TermKind::Lit:
                    if (t->idx > bounds_.value_cap) throw EvalError("literal exceeds the value cap");
                    st.val = vnat_[t->idx];
                    st.ctrl = nullptr;
                    break;
                case TermKind::Lam: {
                    Value v{ValKind::Clo};
                    v.body = t->a;
                    v.env = st.env;
                    st.val = arena_.make<Value>(v);
                    st.ctrl = nullptr;
                    break;
                }
                case TermKind::App:
                    st.kont = push(Kont{KKind::AppArg, t->b, nullptr, st.env}, st.kont);
                    st.ctrl = t->a;
                    break;
                case TermKind::Succ:
                    st.kont = push(Kont{KKind::Succ}, st.kont);
                    st.ctrl = t->a;
                    break;
                case TermKind::Ifz:
                    st.kont = push(Kont{KKind::Ifz, t->b, t->c, st.env}, st.kont);
                    st.ctrl = t->a;
                    break;
                case TermKind::Pair:
                    st.kont = push(Kont{KKind::PairL, t->b, nullptr, st.env}, st.kont);
                    st.ctrl = t->a;
                    break;
                case TermKind::Fst:
                    st.kont = push(Kont{KKind::Fst}, st.kont);
                    st.ctrl = t->a;
                    break;
                case TermKind::Snd:
                    st.kont = push(Kont{KKind::Snd}, st.kont);
                    st.ctrl = t->a;
                    break;
                case TermKind::Inl:
                    st.kont = push(Kont{KKind::Inl}, st.kont);
                    st.ctrl = t->a;
                    break;
                case TermKind::Inr:
                    st.kont = push(Kont{KKind::Inr}, st.kont);
                    st.ctrl = t->a;
                    break;
                case TermKind::Case:
                    st.kont = push(Kont{KKind::Case, t->b, t->c, st.env}, st.kont);
                    st.ctrl = t->a;
                    break;
                case TermKind::Fold:
                    st.kont = push(Kont{KKind::Fold}, st.kont);
                    st.ctrl = t->a;
                    break;
                case TermKind::Unfold:
                    st.kont = push(Kont{KKind::Unfold}, st.kont);
                    st.ctrl = t->a;
                    break;
                case TermKind::Write: {
                    Kont k{KKind::Write};
                    k.origin = t->origin;
                    st.kont = push(k, st.kont);
                    st.ctrl = t->a;
                    break;
                }
                case TermKind::Seq:
                    st.kont = push(Kont{KKind::Seq, t->b, nullptr, st.env}, st.kont);
                    st.ctrl = t->a;
                    break;
                case TermKind::Read: {
                    if (events_.size() >= bounds_.event_bound) {
                        emit_leaf(out, Marker::Incomplete, CutCause::EventCap);
                        return;
                    }
                    if (st.reads >= bounds_.stream_len) {
                        emit_leaf(out, Marker::Incomplete, CutCause::Blocked);
                        return;
                    }
                    if (stream_) {
                        uint32_t v = (*stream_)[st.reads];
                        events_.push_back(Event{EventKind::In, t->origin, v});
                        st.val = vnat_[v];
                        st.ctrl = nullptr;
                        st.reads++;
                        anchor = st;
                        anchor_steps = steps;
                        anchor_limit = 16;
                        break;
                    }
                    std::size_t mark = events_.size();
                    for (uint32_t v = 0; v <= bounds_.value_cap; ++v) {
                        events_.resize(mark);
                        events_.push_back(Event{EventKind::In, t->origin, v});
                        State next = st;
                        next.val = vnat_[v];
                        next.ctrl = nullptr;
                        next.reads++;
                        run(next, steps, out);
                    }
                    events_.resize(mark);
                    return;
                }
                case TermKind::Hole:
                    if (!plug_) throw EvalError("hole reached with nothing plugged");
                    st.ctrl = plug_;
                    st.env = nullptr;
                    break;
                }
                continue;
            }

            // value delivery
            const Kont* k = st.kont;
            if (!k) {
                emit_leaf(out, Marker::Term, CutCause::None);
                return;
            }
            const Value* v = st.val;
            switch (k->kind) {
            case KKind::AppArg: {
                Kont call{KKind::AppCall};
                call.v = v;
                st.kont = push(call, k->next);
                st.ctrl = k->t1;
                st.env = k->env;
                break;
            }
            case KKind::AppCall: {
                const Value* fn = k->v;
                if (fn->kind != ValKind::Clo) {
                    if (source_) internal_stuck("apply non-function");
                    emit_leaf(out, Marker::Incomplete, CutCause::Stuck);
                    return;
                }
                st.ctrl = fn->body;
                st.env = extend(fn->env, v);
                st.kont = k->next;
                break;
            }
            case KKind::Succ:
                if (v->kind != ValKind::Nat) {
                    if (source_) internal_stuck("succ of non-number");
                    emit_leaf(out, Marker::Incomplete, CutCause::Stuck);
                    return;
                }
                st.val = vnat_[(v->nat + 1) % (bounds_.value_cap + 1)];
                st.kont = k->next;
                break;
            case KKind::Ifz:
                if (v->kind != ValKind::Nat) {
                    if (source_) internal_stuck("ifz of non-number");
                    emit_leaf(out, Marker::Incomplete, CutCause::Stuck);
                    return;
                }
                st.ctrl = v->nat == 0 ? k->t1 : k->t2;
                st.env = k->env;
                st.kont = k->next;
                break;
            case KKind::PairL: {
                Kont right{KKind::PairR};
                right.v = v;
                st.kont = push(right, k->next);
                st.ctrl = k->t1;
                st.env = k->env;
                break;
            }
            case KKind::PairR: {
                Value p{ValKind::Pair};
                p.v1 = k->v;
                p.v2 = v;
                st.val = arena_.make<Value>(p);
                st.kont = k->next;
                break;
            }
            case KKind::Fst:
            case KKind::Snd:
                if (v->kind != ValKind::Pair) {
                    if (source_) internal_stuck("projection of non-pair");
                    emit_leaf(out, Marker::Incomplete, CutCause::Stuck);
                    return;
                }
                st.val = k->kind == KKind::Fst ? v->v1 : v->v2;
                st.kont = k->next;
                break;
            case KKind::Inl:
            case KKind::Inr: {
                Value s{k->kind == KKind::Inl ? ValKind::Inl : ValKind::Inr};
                s.v1 = v;
                st.val = arena_.make<Value>(s);
                st.kont = k->next;
                break;
            }
            case KKind::Case:
                if (v->kind != ValKind::Inl && v->kind != ValKind::Inr) {
                    if (source_) internal_stuck("case of non-sum");
                    emit_leaf(out, Marker::Incomplete, CutCause::Stuck);
                    return;
                }
                st.ctrl = v->kind == ValKind::Inl ? k->t1 : k->t2;
                st.env = extend(k->env, v->v1);
                st.kont = k->next;
                break;
            case KKind::Fold: {
                Value f{ValKind::Fold};
                f.v1 = v;
                st.val = arena_.make<Value>(f);
                st.kont = k->next;
                break;
            }
            case KKind::Unfold:
                if (v->kind != ValKind::Fold) {
                    if (source_) internal_stuck("unfold of non-fold");
                    emit_leaf(out, Marker::Incomplete, CutCause::Stuck);
                    return;
                }
                st.val = v->v1;
                st.kont = k->next;
                break;
            case KKind::Write:
                if (v->kind != ValKind::Nat) {
                    if (source_) internal_stuck("write of non-number");
                    emit_leaf(out, Marker::Incomplete, CutCause::Stuck);
                    return;
                }
                if (events_.size() >= bounds_.event_bound) {
                    emit_leaf(out, Marker::Incomplete, CutCause::EventCap);
                    return;
                }
                events_.push_back(Event{EventKind::Out, k->origin, v->nat});
                st.val = vunit_;
                st.kont = k->next;
                anchor = st;
                anchor_steps = steps;
                anchor_limit = 16;
                break;
            case KKind::Seq:
                st.ctrl = k->t1;
                st.env = k->env;
                st.kont = k->next;
                break;
            case KKind::Done: break;
            }
        }
    }

    Bounds bounds_;
    bool source_;
    Arena arena_;
    const Value* vunit_ = nullptr;
    std::vector<const Value*> vnat_;
    std::vector<Event> events_;
    const std::vector<uint32_t>* stream_ = nullptr;
    const RTerm* plug_ = nullptr;
};

// ---------------------------------------------------------------------------
// Convenience wrappers over named terms
// ---------------------------------------------------------------------------

struct Prepared {
    RStore store;
    const RTerm* root = nullptr;

    Prepared() = default;
    Prepared(const Term* t, bool allow_hole) { root = resolve(store, t, allow_hole); }
    Prepared(Prepared&&) = default;
    Prepared& operator=(Prepared&&) = default;
};

inline Obs eval_whole(const Term* whole, const std::vector<uint32_t>& stream, const Bounds& b, bool source_mode) {
    if (max_literal(whole) > b.value_cap) throw EvalError("literal exceeds the value cap");
    for (uint32_t v : stream)
        if (v > b.value_cap) throw EvalError("stream value exceeds the value cap");
    if (stream.size() > b.stream_len) throw EvalError("stream longer than the stream length bound");
    RStore rs;
    const RTerm* root = resolve(rs, whole, false);
    // A fixed stream shorter than streamLen still blocks at its end: treat
    // its length as the read budget.
    Bounds eff = b;
    eff.stream_len = static_cast<uint32_t>(stream.size());
    Evaluator ev(eff, source_mode);
    return ev.eval_stream(root, nullptr, stream);
}

inline TraceSet trace_set_of(const Term* ctx, const Term* prog, const Bounds& b, bool source_mode) {
    if (max_literal(ctx) > b.value_cap || (prog && max_literal(prog) > b.value_cap))
        throw EvalError("literal exceeds the value cap");
    RStore rs;
    const RTerm* croot = resolve(rs, ctx, true);
    const RTerm* proot = prog ? resolve(rs, prog, false) : nullptr;
    Evaluator ev(b, source_mode);
    return ev.trace_set(croot, proot);
}

} // namespace scwb
