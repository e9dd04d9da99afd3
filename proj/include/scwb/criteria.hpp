// criteria.hpp — bounded checkers for robust satisfaction, the four
// property-free robust-compilation criteria, class-restricted preservation,
// and the implication lattice, all generic over a language pair so mock
// pairs can exercise quantifier order.
#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "scwb/ast.hpp"
#include "scwb/backtrans.hpp"
#include "scwb/compile.hpp"
#include "scwb/srclang.hpp"
#include "scwb/tgtlang.hpp"
#include "scwb/trace.hpp"

namespace scwb {

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

enum class Status : uint8_t { HoldsWithinBounds, Counterexample, Inconclusive };

inline const char* status_name(Status s) {
    switch (s) {
    case Status::HoldsWithinBounds: return "holds-within-bounds";
    case Status::Counterexample: return "counterexample";
    case Status::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct Stats {
    uint64_t contexts = 0;
    uint64_t traces = 0;
    uint64_t inconclusive = 0;
    uint64_t vacuous = 0;
};

struct WitnessEntry {
    std::string target_ctx;
    std::string source_ctx;
    std::string kind;   // "backtranslation" | "enumeration" | "" for satisfaction checks
    std::string detail;

    friend bool operator==(const WitnessEntry&, const WitnessEntry&) = default;
};

// Reports retain at most this many witness/counterexample entries; the full
// counts live in stats and the dedicated counters.
inline constexpr std::size_t kMaxReportEntries = 10;

struct Verdict {
    Status status = Status::HoldsWithinBounds;
    Stats stats;
    Bounds bounds;
    std::vector<WitnessEntry> witnesses;
    std::vector<WitnessEntry> counterexamples;
    uint64_t bt_witnesses = 0;    // instances witnessed by back-translation alone
    uint64_t enum_witnesses = 0;  // instances that needed enumeration

    void add_witness(WitnessEntry w) {
        if (witnesses.size() < kMaxReportEntries) witnesses.push_back(std::move(w));
    }
    void add_counterexample(WitnessEntry w) {
        if (counterexamples.size() < kMaxReportEntries) counterexamples.push_back(std::move(w));
    }
    // Counterexamples are definite (their witnesses replay); a pass is only
    // definite when nothing was skipped as inconclusive.
    void finalize() {
        if (!counterexamples.empty()) status = Status::Counterexample;
        else if (stats.inconclusive > 0) status = Status::Inconclusive;
        else status = Status::HoldsWithinBounds;
    }
};

// ---------------------------------------------------------------------------
// The real language pair
// ---------------------------------------------------------------------------
//
// Pair concept used by the checkers below:
//   SrcProg, TgtProg, SrcCtx, TgtCtx   cheap-copy handles
//   Scratch                            default-constructible per-instance arena
//   TgtProg compile(SrcProg)
//   foreach_tgt_ctx(b, fn), foreach_src_ctx(b, fn)   canonical order; handles
//       are valid only during the callback unless retained
//   TraceSet tgt_traces(TgtCtx, TgtProg, b), src_traces(SrcCtx, SrcProg, b)
//   bool has_backtranslation(); SrcCtx backtranslate(TgtCtx, Scratch&)
//   SrcCtx retain_src_ctx(SrcCtx)      deep copy into pair-owned storage
//   std::string show_tgt(TgtCtx), show_src(SrcCtx)

class RealPair {
public:
    using SrcProg = const Term*;
    using TgtProg = const Term*;
    using SrcCtx = const Term*;
    using TgtCtx = const Term*;
    using Scratch = TermStore;

    RealPair(TermStore& store, const Type* export_type, CompilerId id)
        : store_(store), export_type_(export_type), id_(id) {}

    const Type* export_type() const { return export_type_; }
    CompilerId compiler() const { return id_; }

    TgtProg compile(SrcProg p) { return scwb::compile(store_, p, id_); }

    void foreach_tgt_ctx(const Bounds& b, const std::function<bool(TgtCtx)>& fn) {
        TgtContextEnum en(b.ctx_size, b.value_cap);
        en.foreach(fn);
    }
    void foreach_src_ctx(const Bounds& b, const std::function<bool(SrcCtx)>& fn) {
        SrcContextEnum en(export_type_, b.ctx_size, b.value_cap);
        en.foreach(fn);
    }

    TraceSet tgt_traces(TgtCtx c, TgtProg p, const Bounds& b) { return trace_set_tgt(c, p, b); }
    TraceSet src_traces(SrcCtx c, SrcProg p, const Bounds& b) { return trace_set_src(c, p, b); }

    bool has_backtranslation() const { return true; }
    SrcCtx backtranslate(TgtCtx c, Scratch& scratch) {
        return backtranslate_context(scratch, c, export_type_);
    }

    SrcCtx retain_src_ctx(SrcCtx c) { return deep_copy(store_, c); }
    TgtCtx retain_tgt_ctx(TgtCtx c, Scratch& scratch) { return deep_copy(scratch, c); }

    std::string show_tgt(TgtCtx c) const { return print_term(c, false); }
    std::string show_src(SrcCtx c) const { return print_term(c, true); }

private:
    TermStore& store_;
    const Type* export_type_;
    CompilerId id_;
};

// ---------------------------------------------------------------------------
// Mock pair: trace behavior given by tables, for checker self-tests
// ---------------------------------------------------------------------------

class MockPair {
public:
    struct Unit {
        friend bool operator==(const Unit&, const Unit&) = default;
    };
    using SrcProg = Unit;
    using TgtProg = Unit;
    using SrcCtx = std::size_t;
    using TgtCtx = std::size_t;
    struct Scratch {};

    std::vector<TraceSet> tgt_table;
    std::vector<TraceSet> src_table;

    TgtProg compile(SrcProg) { return {}; }
    void foreach_tgt_ctx(const Bounds&, const std::function<bool(TgtCtx)>& fn) {
        for (std::size_t i = 0; i < tgt_table.size(); ++i)
            if (!fn(i)) return;
    }
    void foreach_src_ctx(const Bounds&, const std::function<bool(SrcCtx)>& fn) {
        for (std::size_t i = 0; i < src_table.size(); ++i)
            if (!fn(i)) return;
    }
    TraceSet tgt_traces(TgtCtx c, TgtProg, const Bounds&) { return tgt_table.at(c); }
    TraceSet src_traces(SrcCtx c, SrcProg, const Bounds&) { return src_table.at(c); }
    bool has_backtranslation() const { return false; }
    SrcCtx backtranslate(TgtCtx, Scratch&) { throw std::logic_error("mock pair has no back-translation"); }
    SrcCtx retain_src_ctx(SrcCtx c) { return c; }
    TgtCtx retain_tgt_ctx(TgtCtx c, Scratch&) { return c; }
    std::string show_tgt(TgtCtx c) const { return "mock-tgt-" + std::to_string(c); }
    std::string show_src(SrcCtx c) const { return "mock-src-" + std::to_string(c); }
};

// One target context whose trace set needs two distinct source contexts to
// cover: per-trace emulation succeeds while whole-set emulation cannot, so
// rtp passes where rhp fails. Quantifier order is the only difference.
inline MockPair make_separation_mock(const Bounds& b) {
    MockPair m;
    Obs t1{{Event{EventKind::Out, Origin::Prog, 1}}, Marker::Term, CutCause::None};
    Obs t2{{Event{EventKind::Out, Origin::Prog, 2}}, Marker::Term, CutCause::None};
    m.tgt_table.push_back(TraceSet::of({t1, t2}, b));
    m.src_table.push_back(TraceSet::of({t1}, b));
    m.src_table.push_back(TraceSet::of({t2}, b));
    return m;
}

// ---------------------------------------------------------------------------
// Source-context catalog (enumeration fallback, shared across criteria)
// ---------------------------------------------------------------------------

template <class Pair>
struct SrcCatalog {
    std::vector<std::pair<typename Pair::SrcCtx, TraceSet>> entries;
    uint64_t fuel_cut_sets = 0;

    static SrcCatalog build(Pair& pair, typename Pair::SrcProg p, const Bounds& b) {
        SrcCatalog cat;
        pair.foreach_src_ctx(b, [&](typename Pair::SrcCtx c) {
            typename Pair::SrcCtx kept = pair.retain_src_ctx(c);
            TraceSet ts = pair.src_traces(kept, p, b);
            if (ts.fuel_cut_runs > 0) ++cat.fuel_cut_sets;
            cat.entries.emplace_back(kept, std::move(ts));
            return true;
        });
        return cat;
    }
};

// ---------------------------------------------------------------------------
// Criterion checkers
// ---------------------------------------------------------------------------

enum class InstanceKind : uint8_t { Pass, Counterexample, Inconclusive };

struct InstanceResult {
    InstanceKind kind = InstanceKind::Pass;
    WitnessEntry entry;
    uint64_t traces = 0;
    bool used_enumeration = false;
};

template <class Pair>
class CriterionChecker {
public:
    CriterionChecker(Pair& pair, typename Pair::SrcProg p, const Bounds& b, unsigned workers = 1)
        : pair_(pair), prog_(p), bounds_(b), workers_(workers == 0 ? 1 : workers),
          compiled_(pair.compile(p)) {
        bounds_.validate();
    }

    // Shares one lazily built source catalog across rsp/rtp/rhp calls.
    const SrcCatalog<Pair>& catalog() {
        std::lock_guard<std::mutex> lock(catalog_mu_);
        if (!catalog_) catalog_ = SrcCatalog<Pair>::build(pair_, prog_, bounds_);
        return *catalog_;
    }

    Verdict rsp() { return sweep([this](typename Pair::TgtCtx c) { return rsp_instance(c); }); }
    Verdict rtp() { return sweep([this](typename Pair::TgtCtx c) { return rtp_instance(c); }); }
    Verdict rhp() { return sweep([this](typename Pair::TgtCtx c) { return rhp_instance(c); }); }

    // For every Incomplete-marked prefix m of every target trace there must
    // be a source run extending m; the choice of source context may vary
    // per prefix.
    InstanceResult rsp_instance(typename Pair::TgtCtx ct) {
        InstanceResult res;
        TraceSet tt = pair_.tgt_traces(ct, compiled_, bounds_);
        res.traces = tt.members.size();
        std::vector<Obs> prefixes = incomplete_prefixes(tt.members);

        std::vector<char> seen(prefixes.size(), 0);
        auto absorb = [&](const TraceSet& ts) {
            for (std::size_t i = 0; i < prefixes.size(); ++i) {
                if (seen[i]) continue;
                for (const Obs& t : ts.members)
                    if (prefix_of(prefixes[i], t)) {
                        seen[i] = 1;
                        break;
                    }
            }
        };

        std::string cs_text;
        if (pair_.has_backtranslation()) {
            typename Pair::Scratch scratch;
            typename Pair::SrcCtx cs = pair_.backtranslate(ct, scratch);
            absorb(pair_.src_traces(cs, prog_, bounds_));
            cs_text = pair_.show_src(cs);
        }
        bool all = std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
        if (all) {
            res.entry = {pair_.show_tgt(ct), cs_text, "backtranslation", "all incomplete prefixes extended"};
            return res;
        }
        res.used_enumeration = true;
        for (const auto& [cs, ts] : catalog().entries) {
            absorb(ts);
            if (std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; })) break;
        }
        for (std::size_t i = 0; i < prefixes.size(); ++i) {
            if (seen[i]) continue;
            if (catalog().fuel_cut_sets > 0) {
                res.kind = InstanceKind::Inconclusive;
                res.entry = {pair_.show_tgt(ct), "", "",
                             "prefix " + show_obs(prefixes[i]) + " unwitnessed, but fuel-cut source runs exist"};
            } else {
                res.kind = InstanceKind::Counterexample;
                res.entry = {pair_.show_tgt(ct), "", "",
                             "prefix " + show_obs(prefixes[i]) + " has no source extension within bounds"};
            }
            return res;
        }
        res.entry = {pair_.show_tgt(ct), "", "enumeration", "all incomplete prefixes extended"};
        return res;
    }

    // Every target trace must itself be a source trace under some context;
    // the context may vary per trace.
    InstanceResult rtp_instance(typename Pair::TgtCtx ct) {
        InstanceResult res;
        TraceSet tt = pair_.tgt_traces(ct, compiled_, bounds_);
        res.traces = tt.members.size();

        std::optional<TraceSet> bt_set;
        std::string cs_text;
        if (pair_.has_backtranslation()) {
            typename Pair::Scratch scratch;
            typename Pair::SrcCtx cs = pair_.backtranslate(ct, scratch);
            bt_set = pair_.src_traces(cs, prog_, bounds_);
            cs_text = pair_.show_src(cs);
        }
        auto definite_member = [](const TraceSet& ts, const Obs& t) {
            for (const Obs& m : ts.members)
                if (m == t && m.cause != CutCause::Fuel) return true;
            return false;
        };

        uint64_t skipped = 0;
        bool needed_enum = false;
        for (const Obs& t : tt.members) {
            if (t.fuel_cut()) {
                ++skipped;
                continue;
            }
            if (bt_set && definite_member(*bt_set, t)) continue;
            needed_enum = true;
            bool found = false;
            for (const auto& [cs, ts] : catalog().entries)
                if (definite_member(ts, t)) {
                    found = true;
                    break;
                }
            if (found) continue;
            if (catalog().fuel_cut_sets > 0 || (bt_set && bt_set->fuel_cut_runs > 0)) {
                res.kind = InstanceKind::Inconclusive;
                res.entry = {pair_.show_tgt(ct), "", "",
                             "trace " + show_obs(t) + " unwitnessed, but fuel-cut source runs exist"};
            } else {
                res.kind = InstanceKind::Counterexample;
                res.entry = {pair_.show_tgt(ct), "", "",
                             "trace " + show_obs(t) + " not source-emulable within bounds"};
            }
            return res;
        }
        res.used_enumeration = needed_enum;
        if (skipped > 0) {
            res.kind = InstanceKind::Inconclusive;
            res.entry = {pair_.show_tgt(ct), "", "", "fuel-cut target runs skipped"};
            return res;
        }
        res.entry = {pair_.show_tgt(ct), needed_enum ? "" : cs_text,
                     needed_enum ? "enumeration" : "backtranslation", "every target trace emulated"};
        return res;
    }

    // One source context must reproduce the whole trace set, both inclusions.
    InstanceResult rhp_instance(typename Pair::TgtCtx ct) {
        InstanceResult res;
        TraceSet tt = pair_.tgt_traces(ct, compiled_, bounds_);
        res.traces = tt.members.size();
        if (tt.fuel_cut_runs > 0) {
            res.kind = InstanceKind::Inconclusive;
            res.entry = {pair_.show_tgt(ct), "", "", "fuel-cut target runs prevent set comparison"};
            return res;
        }
        if (pair_.has_backtranslation()) {
            typename Pair::Scratch scratch;
            typename Pair::SrcCtx cs = pair_.backtranslate(ct, scratch);
            TraceSet ts = pair_.src_traces(cs, prog_, bounds_);
            if (ts.fuel_cut_runs == 0 && ts.same_members(tt)) {
                res.entry = {pair_.show_tgt(ct), pair_.show_src(cs), "backtranslation", "trace sets equal"};
                return res;
            }
        }
        res.used_enumeration = true;
        for (const auto& [cs, ts] : catalog().entries)
            if (ts.fuel_cut_runs == 0 && ts.same_members(tt)) {
                res.entry = {pair_.show_tgt(ct), pair_.show_src(cs), "enumeration", "trace sets equal"};
                return res;
            }
        std::string set_text;
        for (const Obs& t : tt.members) set_text += (set_text.empty() ? "" : ", ") + show_obs(t);
        if (catalog().fuel_cut_sets > 0) {
            res.kind = InstanceKind::Inconclusive;
            res.entry = {pair_.show_tgt(ct), "", "",
                         "no source context matches {" + set_text + "}, but fuel-cut source runs exist"};
        } else {
            res.kind = InstanceKind::Counterexample;
            res.entry = {pair_.show_tgt(ct), "", "",
                         "no source context yields trace set {" + set_text + "} within bounds"};
        }
        return res;
    }

    // Robust satisfaction of a hyperproperty on either side.
    Verdict robustly_satisfies_src(const Hyperproperty& h) {
        return satisfies_sweep(h, /*target=*/false);
    }
    Verdict robustly_satisfies_tgt(const Hyperproperty& h) {
        return satisfies_sweep(h, /*target=*/true);
    }

    // Vacuous pass when the source side does not robustly satisfy h.
    Verdict preservation(const Hyperproperty& h) {
        Verdict src = robustly_satisfies_src(h);
        if (src.status == Status::Counterexample) {
            Verdict v;
            v.bounds = bounds_;
            v.stats = src.stats;
            v.stats.vacuous = 1;
            v.status = Status::HoldsWithinBounds;
            WitnessEntry w = src.counterexamples.front();
            w.detail = "vacuous: source side already fails; " + w.detail;
            v.add_witness(std::move(w));
            return v;
        }
        if (src.status == Status::Inconclusive) return src;
        Verdict tgt = robustly_satisfies_tgt(h);
        tgt.stats.contexts += src.stats.contexts;
        tgt.stats.traces += src.stats.traces;
        return tgt;
    }

private:
    // Merges one instance result into the verdict; false stops the sweep.
    bool merge(Verdict& v, InstanceResult r) {
        ++v.stats.contexts;
        v.stats.traces += r.traces;
        switch (r.kind) {
        case InstanceKind::Pass:
            if (r.used_enumeration) ++v.enum_witnesses;
            else ++v.bt_witnesses;
            v.add_witness(std::move(r.entry));
            return true;
        case InstanceKind::Inconclusive:
            ++v.stats.inconclusive;
            return true;
        case InstanceKind::Counterexample:
            v.add_counterexample(std::move(r.entry));
            return false;  // first counterexample in canonical order
        }
        return true;
    }

    template <class Fn>
    Verdict sweep(Fn instance) {
        Verdict v;
        v.bounds = bounds_;
        if (workers_ <= 1) {
            pair_.foreach_tgt_ctx(bounds_, [&](typename Pair::TgtCtx ct) {
                return merge(v, instance(ct));
            });
            v.finalize();
            return v;
        }
        // Contexts are retained into per-item scratch stores and handled in
        // batches; results merge in canonical order, so the verdict matches
        // the serial sweep regardless of scheduling.
        const std::size_t batch_cap = static_cast<std::size_t>(workers_) * 16;
        std::vector<std::pair<std::unique_ptr<typename Pair::Scratch>, typename Pair::TgtCtx>> batch;
        bool stop = false;
        auto flush = [&] {
            std::vector<InstanceResult> results(batch.size());
            parallel_for(batch.size(), workers_,
                         [&](std::size_t i) { results[i] = instance(batch[i].second); });
            for (InstanceResult& r : results)
                if (!merge(v, std::move(r))) {
                    stop = true;
                    break;
                }
            batch.clear();
        };
        pair_.foreach_tgt_ctx(bounds_, [&](typename Pair::TgtCtx ct) {
            auto scratch = std::make_unique<typename Pair::Scratch>();
            typename Pair::TgtCtx kept = pair_.retain_tgt_ctx(ct, *scratch);
            batch.emplace_back(std::move(scratch), kept);
            if (batch.size() >= batch_cap) flush();
            return !stop;
        });
        if (!stop && !batch.empty()) flush();
        v.finalize();
        return v;
    }

    Verdict satisfies_sweep(const Hyperproperty& h, bool target) {
        Verdict v;
        v.bounds = bounds_;
        auto body = [&](auto ctx, const TraceSet& ts, const std::string& show) {
            ++v.stats.contexts;
            v.stats.traces += ts.members.size();
            (void)ctx;
            if (ts.fuel_cut_runs > 0) {
                ++v.stats.inconclusive;
                return true;
            }
            if (satisfies_hyper(ts, h)) return true;
            std::string set_text;
            for (const Obs& t : ts.members) set_text += (set_text.empty() ? "" : ", ") + show_obs(t);
            v.add_counterexample({show, "", "", h.name + " fails on {" + set_text + "}"});
            return false;
        };
        if (target) {
            pair_.foreach_tgt_ctx(bounds_, [&](typename Pair::TgtCtx c) {
                return body(c, pair_.tgt_traces(c, compiled_, bounds_), pair_.show_tgt(c));
            });
        } else {
            pair_.foreach_src_ctx(bounds_, [&](typename Pair::SrcCtx c) {
                return body(c, pair_.src_traces(c, prog_, bounds_), pair_.show_src(c));
            });
        }
        v.finalize();
        return v;
    }

    Pair& pair_;
    typename Pair::SrcProg prog_;
    Bounds bounds_;
    unsigned workers_;
    typename Pair::TgtProg compiled_;
    std::mutex catalog_mu_;
    std::optional<SrcCatalog<Pair>> catalog_;
};

template <class Pair>
Verdict check_rsp(Pair& pair, typename Pair::SrcProg p, const Bounds& b, unsigned workers = 1) {
    return CriterionChecker<Pair>(pair, p, b, workers).rsp();
}
template <class Pair>
Verdict check_rtp(Pair& pair, typename Pair::SrcProg p, const Bounds& b, unsigned workers = 1) {
    return CriterionChecker<Pair>(pair, p, b, workers).rtp();
}
template <class Pair>
Verdict check_rhp(Pair& pair, typename Pair::SrcProg p, const Bounds& b, unsigned workers = 1) {
    return CriterionChecker<Pair>(pair, p, b, workers).rhp();
}
template <class Pair>
Verdict check_robust_satisfaction(Pair& pair, typename Pair::SrcProg p, const Hyperproperty& h,
                                  bool target_side, const Bounds& b) {
    CriterionChecker<Pair> ck(pair, p, b);
    return target_side ? ck.robustly_satisfies_tgt(h) : ck.robustly_satisfies_src(h);
}
template <class Pair>
Verdict check_preservation(Pair& pair, typename Pair::SrcProg p, const Hyperproperty& h, const Bounds& b) {
    return CriterionChecker<Pair>(pair, p, b).preservation(h);
}

// The strong variant: C_S is fixed per target context by back-translation
// alone, then must emulate every corpus program at the shared export type.
template <class Pair>
Verdict check_strong_rhp(Pair& pair, const std::vector<typename Pair::SrcProg>& corpus, const Bounds& b,
                         unsigned workers = 1) {
    b.validate();
    if (corpus.empty()) throw std::invalid_argument("strong-rhp needs a non-empty corpus");
    if (!pair.has_backtranslation())
        throw std::invalid_argument("strong-rhp needs a back-translation");
    if (workers == 0) workers = 1;
    Verdict v;
    v.bounds = b;
    std::vector<typename Pair::TgtProg> compiled;
    compiled.reserve(corpus.size());
    for (auto p : corpus) compiled.push_back(pair.compile(p));

    struct CtxOutcome {
        bool matched = true;
        bool failed = false;
        WitnessEntry entry;
        uint64_t traces = 0;
        uint64_t inconclusive = 0;
    };
    auto run_one = [&](typename Pair::TgtCtx ct, typename Pair::Scratch& scratch) {
        CtxOutcome out;
        typename Pair::SrcCtx cs = pair.backtranslate(ct, scratch);
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            TraceSet tt = pair.tgt_traces(ct, compiled[i], b);
            TraceSet ts = pair.src_traces(cs, corpus[i], b);
            out.traces += tt.members.size();
            if (tt.fuel_cut_runs > 0 || ts.fuel_cut_runs > 0) {
                ++out.inconclusive;
                out.matched = false;
                continue;
            }
            if (!tt.same_members(ts)) {
                std::string detail = "program #" + std::to_string(i) + ": target {";
                for (const Obs& t : tt.members) detail += show_obs(t) + " ";
                detail += "} vs source {";
                for (const Obs& t : ts.members) detail += show_obs(t) + " ";
                detail += "}";
                out.failed = true;
                out.entry = {pair.show_tgt(ct), pair.show_src(cs), "backtranslation", detail};
                return out;
            }
        }
        if (out.matched)
            out.entry = {pair.show_tgt(ct), pair.show_src(cs), "backtranslation",
                         "trace sets equal for all corpus programs"};
        return out;
    };
    auto merge = [&](CtxOutcome out) {
        ++v.stats.contexts;
        v.stats.traces += out.traces;
        v.stats.inconclusive += out.inconclusive;
        if (out.failed) {
            v.add_counterexample(std::move(out.entry));
            return false;
        }
        if (out.matched) {
            ++v.bt_witnesses;
            v.add_witness(std::move(out.entry));
        }
        return true;
    };

    if (workers <= 1) {
        pair.foreach_tgt_ctx(b, [&](typename Pair::TgtCtx ct) {
            typename Pair::Scratch scratch;
            return merge(run_one(ct, scratch));
        });
    } else {
        const std::size_t batch_cap = static_cast<std::size_t>(workers) * 16;
        std::vector<std::pair<std::unique_ptr<typename Pair::Scratch>, typename Pair::TgtCtx>> batch;
        bool stop = false;
        auto flush = [&] {
            std::vector<CtxOutcome> results(batch.size());
            parallel_for(batch.size(), workers, [&](std::size_t i) {
                results[i] = run_one(batch[i].second, *batch[i].first);
            });
            for (CtxOutcome& out : results)
                if (!merge(std::move(out))) {
                    stop = true;
                    break;
                }
            batch.clear();
        };
        pair.foreach_tgt_ctx(b, [&](typename Pair::TgtCtx ct) {
            auto scratch = std::make_unique<typename Pair::Scratch>();
            typename Pair::TgtCtx kept = pair.retain_tgt_ctx(ct, *scratch);
            batch.emplace_back(std::move(scratch), kept);
            if (batch.size() >= batch_cap) flush();
            return !stop;
        });
        if (!stop && !batch.empty()) flush();
    }
    v.finalize();
    return v;
}

// Convenience for the real pair: validates the shared export type.
inline const Type* corpus_export_type(const std::vector<const Term*>& corpus) {
    if (corpus.empty()) throw std::invalid_argument("empty corpus");
    const Type* ty = validate_src_program(corpus.front());
    for (const Term* p : corpus)
        if (validate_src_program(p) != ty)
            throw std::invalid_argument("corpus programs have mixed export types");
    return ty;
}

// ---------------------------------------------------------------------------
// Class-restricted preservation
// ---------------------------------------------------------------------------

enum class PropClass : uint8_t { Safety, KHypersafety, SubsetClosed, AllHyper, TraceProps };

struct ClassSpec {
    PropClass cls = PropClass::AllHyper;
    uint32_t k = 2;  // for KHypersafety
};

inline const char* class_name(PropClass c) {
    switch (c) {
    case PropClass::Safety: return "safety";
    case PropClass::KHypersafety: return "k-hypersafety";
    case PropClass::SubsetClosed: return "subset-closed";
    case PropClass::AllHyper: return "all";
    case PropClass::TraceProps: return "trace-properties";
    }
    return "?";
}

inline bool classifier_accepts(const Hyperproperty& h, const ClassSpec& spec,
                               const std::vector<Obs>& universe) {
    switch (spec.cls) {
    case PropClass::Safety: return h.base.has_value() && is_safety_bounded(*h.base, universe);
    case PropClass::KHypersafety: return is_k_hypersafety_bounded(h, spec.k, universe);
    case PropClass::SubsetClosed: return is_subset_closed_bounded(h, universe);
    case PropClass::AllHyper: return true;
    case PropClass::TraceProps: return h.base.has_value();
    }
    return false;
}

// Conjunction of preservation checks across a property suite.
template <class Pair>
Verdict check_suite_preservation(Pair& pair, typename Pair::SrcProg p,
                                 const std::vector<Hyperproperty>& suite, const Bounds& b) {
    Verdict out;
    out.bounds = b;
    CriterionChecker<Pair> ck(pair, p, b);
    for (const Hyperproperty& h : suite) {
        Verdict v = ck.preservation(h);
        out.stats.contexts += v.stats.contexts;
        out.stats.traces += v.stats.traces;
        out.stats.inconclusive += v.stats.inconclusive;
        out.stats.vacuous += v.stats.vacuous;
        for (auto& w : v.witnesses) out.add_witness(std::move(w));
        if (v.status == Status::Counterexample) {
            for (auto& c : v.counterexamples) out.add_counterexample(std::move(c));
            break;
        }
    }
    out.finalize();
    return out;
}

// The same conjunction, but every suite member must first pass the classifier
// for the claimed class; a member outside the class is a configuration error.
template <class Pair>
Verdict check_class_preservation(Pair& pair, typename Pair::SrcProg p, const ClassSpec& spec,
                                 const std::vector<Hyperproperty>& suite,
                                 const std::vector<Obs>& classification_universe, const Bounds& b) {
    for (const Hyperproperty& h : suite)
        if (!classifier_accepts(h, spec, classification_universe))
            throw std::invalid_argument("suite member '" + h.name + "' fails the " +
                                        std::string(class_name(spec.cls)) + " classifier");
    return check_suite_preservation(pair, p, suite, b);
}

// ---------------------------------------------------------------------------
// Implication lattice
// ---------------------------------------------------------------------------

struct LatticeEdge {
    std::string stronger;
    std::string weaker;
};

inline std::vector<LatticeEdge> default_lattice_edges() {
    return {{"strong-rhp", "rhp"}, {"rhp", "rtp"}, {"rtp", "rsp"}};
}

struct LatticeInstance {
    std::string name;  // e.g. "prog.sexp/secure"
    std::map<std::string, Verdict> verdicts;
};

struct LatticeViolation {
    std::string instance;
    std::string stronger;
    std::string weaker;
};

// An edge is violated only when the stronger criterion definitely holds
// (no inconclusive skips) while the weaker definitely fails; counterexample
// verdicts are definite because their witnesses replay.
inline std::vector<LatticeViolation> lattice_check(const std::vector<LatticeInstance>& instances,
                                                   const std::vector<LatticeEdge>& edges) {
    std::vector<LatticeViolation> out;
    const Bounds* ref = nullptr;
    for (const LatticeInstance& inst : instances)
        for (const auto& [name, v] : inst.verdicts) {
            (void)name;
            if (!ref) ref = &v.bounds;
            else if (!(*ref == v.bounds))
                throw std::invalid_argument("lattice_check: verdicts computed under different bounds");
        }
    for (const LatticeInstance& inst : instances)
        for (const LatticeEdge& e : edges) {
            auto a = inst.verdicts.find(e.stronger);
            auto b = inst.verdicts.find(e.weaker);
            if (a == inst.verdicts.end() || b == inst.verdicts.end()) continue;
            bool strong_holds =
                a->second.status == Status::HoldsWithinBounds && a->second.stats.inconclusive == 0;
            bool weak_fails = b->second.status == Status::Counterexample;
            if (strong_holds && weak_fails) out.push_back({inst.name, e.stronger, e.weaker});
        }
    return out;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json bounds_json(const Bounds& b) {
    return nlohmann::ordered_json{{"fuel", b.fuel},
                                  {"stream_len", b.stream_len},
                                  {"value_cap", b.value_cap},
                                  {"event_bound", b.event_bound},
                                  {"ctx_size", b.ctx_size}};
}

inline nlohmann::ordered_json entry_json(const WitnessEntry& w) {
    nlohmann::ordered_json j;
    j["target_ctx"] = w.target_ctx;
    if (!w.source_ctx.empty()) j["source_ctx"] = w.source_ctx;
    if (!w.kind.empty()) j["kind"] = w.kind;
    j["detail"] = w.detail;
    return j;
}

inline nlohmann::ordered_json report_json(const std::string& criterion, const Verdict& v) {
    nlohmann::ordered_json j;
    j["criterion"] = criterion;
    j["bounds"] = bounds_json(v.bounds);
    j["status"] = status_name(v.status);
    j["witnesses"] = nlohmann::ordered_json::array();
    for (const auto& w : v.witnesses) j["witnesses"].push_back(entry_json(w));
    j["counterexamples"] = nlohmann::ordered_json::array();
    for (const auto& c : v.counterexamples) j["counterexamples"].push_back(entry_json(c));
    j["stats"] = nlohmann::ordered_json{{"contexts", v.stats.contexts},
                                        {"traces", v.stats.traces},
                                        {"inconclusive", v.stats.inconclusive},
                                        {"vacuous", v.stats.vacuous}};
    return j;
}

// Atomic, deterministic write: temp file in the same directory, then rename.
inline void write_text_atomic(const std::string& path, const std::string& text) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << text;
        if (!out) throw std::runtime_error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed for " + path);
}

inline void write_report(const std::string& path, const std::string& criterion, const Verdict& v) {
    write_text_atomic(path, report_json(criterion, v).dump(2) + "\n");
}

// CLI exit-code contract shared by checks.
inline int verdict_exit_code(const Verdict& v) {
    switch (v.status) {
    case Status::HoldsWithinBounds: return 0;
    case Status::Counterexample: return 1;
    case Status::Inconclusive: return 2;
    }
    return 3;
}

} // namespace scwb
