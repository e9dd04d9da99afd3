// tgtlang.hpp — the untyped target calculus: linking, stuck-as-divergence
// evaluation, and exhaustive context enumeration.
#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "scwb/ast.hpp"
#include "scwb/machine.hpp"
#include "scwb/trace.hpp"

namespace scwb {

struct TgtError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void validate_tgt_program(const Term* p) {
    if (count_holes(p) != 0) throw TgtError("target program must be hole-free");
    if (!term_closed(p)) throw TgtError("target program must be closed");
    if (!origins_all(p, Origin::Prog)) throw TgtError("target program I/O must be Prog-labeled");
}

inline void validate_tgt_context(const Term* c) {
    if (count_holes(c) != 1) throw TgtError("target context must have exactly one hole");
    if (!origins_all(c, Origin::Ctx)) throw TgtError("target context I/O must be Ctx-labeled");
}

inline const Term* link_tgt(TermStore& store, const Term* c, const Term* p) {
    if (count_holes(c) != 1) throw TgtError("target context must have exactly one hole");
    if (!term_closed(p) || count_holes(p) != 0) throw TgtError("target program must be closed and hole-free");
    return plug(store, c, p);
}

inline Obs eval_trace_tgt(const Term* whole, const std::vector<uint32_t>& stream, const Bounds& b) {
    if (!term_closed(whole)) throw TgtError("whole target program must be closed");
    if (count_holes(whole) != 0) throw TgtError("whole target program must be hole-free");
    return eval_whole(whole, stream, b, false);
}

inline TraceSet trace_set_tgt(const Term* c, const Term* p, const Bounds& b) {
    if (count_holes(c) != 1) throw TgtError("target context must have exactly one hole");
    if (!term_closed(p) || count_holes(p) != 0) throw TgtError("target program must be closed and hole-free");
    return trace_set_of(c, p, b, false);
}

// ---------------------------------------------------------------------------
// Context enumeration
// ---------------------------------------------------------------------------

// Exhaustive enumeration of target contexts: exactly one hole, closed apart
// from it, Ctx-labeled I/O, literals 0..V, binders named x0, x1, … by
// binding depth. Closed subterms are memoized per (size, depth) and shared;
// the hole spine is rebuilt per candidate in a reusable buffer, so callers
// keeping a context beyond the callback must deep-copy it.
class TgtContextEnum {
public:
    TgtContextEnum(uint32_t max_size, uint32_t value_cap)
        : max_size_(max_size), value_cap_(value_cap), spine_(max_size + 1) {}

    void foreach(const std::function<bool(const Term*)>& fn) {
        stop_ = false;
        for (uint32_t s = 1; s <= max_size_ && !stop_; ++s)
            ctx(s, 0, 0, [&](const Term* t) {
                if (!fn(t)) stop_ = true;
            });
    }

    uint64_t count() {
        uint64_t n = 0;
        foreach([&](const Term*) {
            ++n;
            return true;
        });
        return n;
    }

private:
    const std::vector<const Term*>& closed(uint32_t s, uint32_t d) {
        auto key = std::make_pair(s, d);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        std::vector<const Term*> out;
        if (s == 1) {
            out.push_back(store_.unit());
            for (uint32_t v = 0; v <= value_cap_; ++v) out.push_back(store_.lit(v));
            out.push_back(store_.read(Origin::Ctx));
            for (uint32_t i = 0; i < d; ++i) out.push_back(store_.var("x" + std::to_string(i)));
        } else {
            for (const Term* e : closed(s - 1, d)) {
                out.push_back(store_.succ(e));
                out.push_back(store_.write(e, Origin::Ctx));
                out.push_back(store_.fst(e));
                out.push_back(store_.snd(e));
                out.push_back(store_.inl(nullptr, e));
                out.push_back(store_.inr(nullptr, e));
            }
            for (const Term* e : closed(s - 1, d + 1)) out.push_back(store_.lam("x" + std::to_string(d), nullptr, e));
            for (uint32_t s1 = 1; s1 + 1 < s; ++s1) {
                uint32_t s2 = s - 1 - s1;
                for (const Term* l : closed(s1, d))
                    for (const Term* r : closed(s2, d)) {
                        out.push_back(store_.app(l, r));
                        out.push_back(store_.pair(l, r));
                        out.push_back(store_.seq(l, r));
                    }
            }
            for (uint32_t s1 = 1; s1 + 2 < s; ++s1)
                for (uint32_t s2 = 1; s1 + s2 + 1 < s; ++s2) {
                    uint32_t s3 = s - 1 - s1 - s2;
                    for (const Term* e : closed(s1, d)) {
                        for (const Term* z : closed(s2, d))
                            for (const Term* sc : closed(s3, d)) out.push_back(store_.ifz(e, z, sc));
                        std::string n = "x" + std::to_string(d);
                        for (const Term* l : closed(s2, d + 1))
                            for (const Term* r : closed(s3, d + 1)) out.push_back(store_.case_(e, n, l, n, r));
                    }
                }
        }
        return memo_.emplace(key, std::move(out)).first->second;
    }

    // Emit every context of exact size s at binder depth d, using
    // spine_[level] as the candidate's node at this recursion level.
    void ctx(uint32_t s, uint32_t d, uint32_t level, const std::function<void(const Term*)>& k) {
        if (stop_) return;
        Term* slot = &spine_[level];
        auto emit = [&](Term t) {
            if (stop_) return;
            *slot = std::move(t);
            k(slot);
        };
        if (s == 1) {
            Term h{};
            h.kind = TermKind::Hole;
            emit(std::move(h));
            return;
        }
        auto unary = [&](TermKind kind, Origin o = Origin::Prog) {
            ctx(s - 1, d, level + 1, [&](const Term* e) {
                Term t{};
                t.kind = kind;
                t.a = e;
                t.origin = o;
                emit(std::move(t));
            });
        };
        unary(TermKind::Succ);
        unary(TermKind::Write, Origin::Ctx);
        unary(TermKind::Fst);
        unary(TermKind::Snd);
        unary(TermKind::Inl);
        unary(TermKind::Inr);
        ctx(s - 1, d + 1, level + 1, [&](const Term* e) {
            Term t{};
            t.kind = TermKind::Lam;
            t.a = e;
            t.name = "x" + std::to_string(d);
            emit(std::move(t));
        });
        auto binary = [&](TermKind kind) {
            for (uint32_t s1 = 1; s1 + 1 < s && !stop_; ++s1) {
                uint32_t s2 = s - 1 - s1;
                ctx(s1, d, level + 1, [&](const Term* l) {
                    for (const Term* r : closed(s2, d)) {
                        Term t{};
                        t.kind = kind;
                        t.a = l;
                        t.b = r;
                        emit(std::move(t));
                        if (stop_) return;
                    }
                });
                for (const Term* l : closed(s1, d)) {
                    if (stop_) return;
                    ctx(s2, d, level + 1, [&](const Term* r) {
                        Term t{};
                        t.kind = kind;
                        t.a = l;
                        t.b = r;
                        emit(std::move(t));
                    });
                }
            }
        };
        binary(TermKind::App);
        binary(TermKind::Pair);
        binary(TermKind::Seq);
        // ifz and case
        for (uint32_t s1 = 1; s1 + 2 < s && !stop_; ++s1)
            for (uint32_t s2 = 1; s1 + s2 + 1 < s && !stop_; ++s2) {
                uint32_t s3 = s - 1 - s1 - s2;
                std::string n = "x" + std::to_string(d);
                auto emit_ifz = [&](const Term* e, const Term* z, const Term* sc) {
                    Term t{};
                    t.kind = TermKind::Ifz;
                    t.a = e;
                    t.b = z;
                    t.c = sc;
                    emit(std::move(t));
                };
                auto emit_case = [&](const Term* e, const Term* l, const Term* r) {
                    Term t{};
                    t.kind = TermKind::Case;
                    t.a = e;
                    t.b = l;
                    t.c = r;
                    t.name = n;
                    t.name2 = n;
                    emit(std::move(t));
                };
                ctx(s1, d, level + 1, [&](const Term* e) {
                    for (const Term* z : closed(s2, d)) {
                        for (const Term* sc : closed(s3, d)) {
                            emit_ifz(e, z, sc);
                            if (stop_) return;
                        }
                    }
                    for (const Term* l : closed(s2, d + 1)) {
                        for (const Term* r : closed(s3, d + 1)) {
                            emit_case(e, l, r);
                            if (stop_) return;
                        }
                    }
                });
                for (const Term* e : closed(s1, d)) {
                    if (stop_) break;
                    ctx(s2, d, level + 1, [&](const Term* z) {
                        for (const Term* sc : closed(s3, d)) {
                            emit_ifz(e, z, sc);
                            if (stop_) return;
                        }
                    });
                    ctx(s2, d + 1, level + 1, [&](const Term* l) {
                        for (const Term* r : closed(s3, d + 1)) {
                            emit_case(e, l, r);
                            if (stop_) return;
                        }
                    });
                    ctx(s3, d, level + 1, [&](const Term* sc) {
                        for (const Term* z : closed(s2, d)) {
                            emit_ifz(e, z, sc);
                            if (stop_) return;
                        }
                    });
                    ctx(s3, d + 1, level + 1, [&](const Term* r) {
                        for (const Term* l : closed(s2, d + 1)) {
                            emit_case(e, l, r);
                            if (stop_) return;
                        }
                    });
                }
            }
    }

    uint32_t max_size_;
    uint32_t value_cap_;
    std::vector<Term> spine_;
    bool stop_ = false;
    TermStore store_;
    std::map<std::pair<uint32_t, uint32_t>, std::vector<const Term*>> memo_;
};

inline void enumerate_tgt_contexts(uint32_t max_size, uint32_t value_cap,
                                   const std::function<bool(const Term*)>& fn) {
    TgtContextEnum e(max_size, value_cap);
    e.foreach(fn);
}

} // namespace scwb
