// trace.hpp — events, observations, trace sets, safety monitors, properties,
// hyperproperties, and bounded classifiers for the hyperproperty classes.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "scwb/sexpr.hpp"
#include "scwb/support.hpp"

namespace scwb {

enum class EventKind : uint8_t { In, Out };
enum class Origin : uint8_t { Prog, Ctx };

struct Event {
    EventKind kind;
    Origin origin;
    uint32_t value;

    friend bool operator==(const Event& a, const Event& b) {
        return a.kind == b.kind && a.origin == b.origin && a.value == b.value;
    }
    friend bool operator<(const Event& a, const Event& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.origin != b.origin) return a.origin < b.origin;
        return a.value < b.value;
    }
};

enum class Marker : uint8_t { Term, Incomplete };

// Why an Incomplete observation was cut. Diagnostic only: never part of
// observation identity, ordering, or serialization.
//   Fuel     — step budget exhausted (the run could have emitted more).
//   Blocked  — read past the end of the input stream.
//   Stuck    — target-level shape mismatch (silent non-termination).
//   Cycle    — the machine provably revisited a state without emitting,
//              i.e. detected silent divergence.
//   EventCap — the next event would exceed the event bound.
enum class CutCause : uint8_t { None, EventCap, Blocked, Stuck, Cycle, Fuel };

struct Obs {
    std::vector<Event> events;
    Marker marker = Marker::Term;
    CutCause cause = CutCause::None;

    friend bool operator==(const Obs& a, const Obs& b) {
        return a.marker == b.marker && a.events == b.events;
    }
    friend bool operator!=(const Obs& a, const Obs& b) { return !(a == b); }
    friend bool operator<(const Obs& a, const Obs& b) {
        if (a.events != b.events)
            return std::lexicographical_compare(a.events.begin(), a.events.end(), b.events.begin(), b.events.end());
        return a.marker < b.marker;
    }

    bool fuel_cut() const { return marker == Marker::Incomplete && cause == CutCause::Fuel; }
};

struct ObsHash {
    std::size_t operator()(const Obs& o) const {
        std::size_t h = o.marker == Marker::Term ? 0x51ed270b : 0x9be09ac5;
        for (const Event& e : o.events) {
            std::size_t ev = (static_cast<std::size_t>(e.kind) << 9) | (static_cast<std::size_t>(e.origin) << 8) |
                             e.value;
            hash_combine(h, ev);
        }
        return h;
    }
};

inline std::string show_event(const Event& e) {
    std::string s = e.kind == EventKind::In ? "In(" : "Out(";
    s += std::to_string(e.value);
    s += e.origin == Origin::Prog ? ",prog)" : ",ctx)";
    return s;
}

inline std::string show_obs(const Obs& o) {
    std::string s = "[";
    for (std::size_t i = 0; i < o.events.size(); ++i) {
        if (i) s += ' ';
        s += show_event(o.events[i]);
    }
    s += "] ";
    s += o.marker == Marker::Term ? "term" : "incomplete";
    return s;
}

// The desk-scale experiment envelope.
struct Bounds {
    uint64_t fuel = 100000;
    uint32_t stream_len = 2;
    uint32_t value_cap = 3;
    uint32_t event_bound = 4;
    uint32_t ctx_size = 5;

    void validate() const {
        if (fuel == 0 || stream_len == 0 || value_cap == 0 || event_bound == 0 || ctx_size == 0)
            throw std::invalid_argument("bounds fields must be strictly positive");
    }
    friend bool operator==(const Bounds&, const Bounds&) = default;
};

// A finite, duplicate-free, canonically ordered set of observations.
struct TraceSet {
    std::vector<Obs> members; // sorted, unique
    Bounds bounds;
    uint32_t runs = 0;          // distinct read-paths explored
    uint32_t fuel_cut_runs = 0; // members cut by fuel (inconclusive)

    bool conclusive() const { return fuel_cut_runs == 0; }

    static TraceSet of(std::vector<Obs> obs, const Bounds& b) {
        TraceSet s;
        s.bounds = b;
        s.runs = static_cast<uint32_t>(obs.size());
        for (const Obs& o : obs)
            if (o.fuel_cut()) ++s.fuel_cut_runs;
        // Sort with fuel-cut causes first within an equivalence class so the
        // surviving representative's cause is deterministic.
        std::sort(obs.begin(), obs.end(), [](const Obs& a, const Obs& b2) {
            if (a != b2) return a < b2;
            return a.cause < b2.cause;
        });
        obs.erase(std::unique(obs.begin(), obs.end()), obs.end());
        s.members = std::move(obs);
        return s;
    }

    bool same_members(const TraceSet& other) const { return members == other.members; }
};

// m ≤ t. Incomplete observations are prefixes of anything extending their
// event sequence; Term observations are prefixes only of themselves.
inline bool prefix_of(const Obs& m, const Obs& t) {
    if (m.marker == Marker::Term) return m == t;
    if (m.events.size() > t.events.size()) return false;
    return std::equal(m.events.begin(), m.events.end(), t.events.begin());
}

// ---------------------------------------------------------------------------
// Safety monitors
// ---------------------------------------------------------------------------

struct EventPattern {
    std::optional<EventKind> kind;
    std::optional<Origin> origin;
    std::optional<uint32_t> value;

    bool matches(const Event& e) const {
        return (!kind || *kind == e.kind) && (!origin || *origin == e.origin) && (!value || *value == e.value);
    }
    static EventPattern wildcard() { return {}; }
};

struct MonitorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad-prefix automaton over events. Rules are ordered; the first matching
// rule fires. Bad states must be absorbing and, over the bounded alphabet,
// every state must have a matching rule for every event.
class SafetyMonitor {
public:
    struct Rule {
        int from;
        EventPattern pattern;
        int to;
    };

    SafetyMonitor(std::vector<std::string> states, int initial, std::vector<int> bad, std::vector<Rule> rules)
        : states_(std::move(states)), initial_(initial), bad_(states_.size(), false), rules_(std::move(rules)) {
        for (int b : bad) bad_[static_cast<std::size_t>(b)] = true;
        check_absorbing();
    }

    int initial() const { return initial_; }
    bool is_bad(int s) const { return bad_[static_cast<std::size_t>(s)]; }
    const std::vector<std::string>& states() const { return states_; }

    int step(int state, const Event& e) const {
        for (const Rule& r : rules_)
            if (r.from == state && r.pattern.matches(e)) return r.to;
        throw MonitorError("monitor is not total: no rule for state '" + states_[static_cast<std::size_t>(state)] +
                           "' on event " + show_event(e));
    }

    // Configuration check: totality over the full event alphabet at cap V.
    void check_total(uint32_t value_cap) const {
        for (std::size_t s = 0; s < states_.size(); ++s)
            for (EventKind k : {EventKind::In, EventKind::Out})
                for (Origin o : {Origin::Prog, Origin::Ctx})
                    for (uint32_t v = 0; v <= value_cap; ++v) step(static_cast<int>(s), Event{k, o, v});
    }

    bool runs_to_bad(const Obs& m) const {
        int s = initial_;
        for (const Event& e : m.events) {
            s = step(s, e);
            if (is_bad(s)) return true; // absorbing
        }
        return is_bad(s);
    }

private:
    void check_absorbing() const {
        for (const Rule& r : rules_)
            if (bad_[static_cast<std::size_t>(r.from)] && !bad_[static_cast<std::size_t>(r.to)])
                throw MonitorError("bad state '" + states_[static_cast<std::size_t>(r.from)] +
                                   "' has an escaping rule; bad states must be absorbing");
    }

    std::vector<std::string> states_;
    int initial_;
    std::vector<bool> bad_;
    std::vector<Rule> rules_;
};

enum class MonitorVerdict { Good, Bad };

inline MonitorVerdict monitor_run(const SafetyMonitor& mon, const Obs& m) {
    return mon.runs_to_bad(m) ? MonitorVerdict::Bad : MonitorVerdict::Good;
}

// ---------------------------------------------------------------------------
// Properties and hyperproperties
// ---------------------------------------------------------------------------

struct Property {
    std::string name;
    std::function<bool(const Obs&)> predicate;
    std::optional<SafetyMonitor> monitor; // present iff given as safety

    static Property from_monitor(std::string name, SafetyMonitor mon) {
        Property p;
        p.name = std::move(name);
        SafetyMonitor copy = mon;
        p.predicate = [copy](const Obs& t) { return !copy.runs_to_bad(t); };
        p.monitor = std::move(mon);
        return p;
    }
};

inline bool satisfies_property(const std::vector<Obs>& members, const Property& p) {
    for (const Obs& t : members)
        if (!p.predicate(t)) return false;
    return true;
}

inline bool satisfies_property(const TraceSet& s, const Property& p) { return satisfies_property(s.members, p); }

struct Hyperproperty {
    std::string name;
    // Evaluated on a canonically sorted, duplicate-free member list.
    std::function<bool(const std::vector<Obs>&)> predicate;
    std::vector<std::string> class_tags;  // advisory
    std::optional<Property> base;         // present iff lifted from a trace property

    bool eval(const std::vector<Obs>& members) const { return predicate(members); }
};

inline bool satisfies_hyper(const TraceSet& s, const Hyperproperty& h) { return h.eval(s.members); }

inline Hyperproperty lift(const Property& p) {
    Hyperproperty h;
    h.name = "lift(" + p.name + ")";
    Property copy = p;
    h.predicate = [copy](const std::vector<Obs>& members) { return satisfies_property(members, copy); };
    h.class_tags = {"lifted", "subset-closed"};
    h.base = p;
    return h;
}

// ---------------------------------------------------------------------------
// Bounded universes
// ---------------------------------------------------------------------------

struct UniverseGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All observations with at most max_events events drawn from the given
// alphabet, in canonical order.
struct Universe {
    std::vector<Obs> members;
    std::vector<Event> alphabet;

    std::size_t size() const { return members.size(); }
};

inline std::vector<Event> full_alphabet(uint32_t value_cap) {
    std::vector<Event> out;
    for (EventKind k : {EventKind::In, EventKind::Out})
        for (Origin o : {Origin::Prog, Origin::Ctx})
            for (uint32_t v = 0; v <= value_cap; ++v) out.push_back(Event{k, o, v});
    std::sort(out.begin(), out.end());
    return out;
}

inline Universe make_universe(uint32_t max_events, std::vector<Event> alphabet, bool include_term = true,
                              bool include_incomplete = true) {
    std::sort(alphabet.begin(), alphabet.end());
    Universe u;
    u.alphabet = alphabet;
    std::vector<std::vector<Event>> seqs{{}};
    std::size_t level_begin = 0;
    for (uint32_t len = 1; len <= max_events; ++len) {
        std::size_t level_end = seqs.size();
        for (std::size_t i = level_begin; i < level_end; ++i)
            for (const Event& e : alphabet) {
                auto s = seqs[i];
                s.push_back(e);
                seqs.push_back(std::move(s));
            }
        level_begin = level_end;
    }
    for (const auto& s : seqs) {
        if (include_term) u.members.push_back(Obs{s, Marker::Term, CutCause::None});
        if (include_incomplete) u.members.push_back(Obs{s, Marker::Incomplete, CutCause::None});
    }
    std::sort(u.members.begin(), u.members.end());
    return u;
}

inline Universe make_universe(uint32_t max_events, uint32_t value_cap) {
    return make_universe(max_events, full_alphabet(value_cap));
}

// All Incomplete-marked prefixes of members of U, deduplicated and sorted.
inline std::vector<Obs> incomplete_prefixes(const std::vector<Obs>& universe) {
    std::set<std::vector<Event>> seqs;
    for (const Obs& t : universe)
        for (std::size_t n = 0; n <= t.events.size(); ++n)
            seqs.insert(std::vector<Event>(t.events.begin(), t.events.begin() + static_cast<std::ptrdiff_t>(n)));
    std::vector<Obs> out;
    for (const auto& s : seqs) out.push_back(Obs{s, Marker::Incomplete, CutCause::None});
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Classifiers (bounded ground truth for the class tags)
// ---------------------------------------------------------------------------

// π is safety on U iff every violating trace has an irremediable
// Incomplete-marked prefix: one all of whose extensions in U violate π.
inline bool is_safety_bounded(const Property& pi, const std::vector<Obs>& universe) {
    for (const Obs& t : universe) {
        if (pi.predicate(t)) continue;
        bool witnessed = false;
        for (std::size_t n = 0; n <= t.events.size() && !witnessed; ++n) {
            Obs m{std::vector<Event>(t.events.begin(), t.events.begin() + static_cast<std::ptrdiff_t>(n)),
                  Marker::Incomplete, CutCause::None};
            bool irremediable = true;
            for (const Obs& ext : universe) {
                if (prefix_of(m, ext) && pi.predicate(ext)) {
                    irremediable = false;
                    break;
                }
            }
            witnessed = irremediable;
        }
        if (!witnessed) return false;
    }
    return true;
}

namespace detail {

inline void check_universe_guard(const std::vector<Obs>& universe, std::size_t guard) {
    if (universe.size() > guard)
        throw UniverseGuardError("universe of " + std::to_string(universe.size()) +
                                 " observations exceeds the subset-enumeration guard of " + std::to_string(guard));
}

// H evaluated on every subset of U, indexed by member bitmask.
inline std::vector<bool> hyper_bitmap(const Hyperproperty& h, const std::vector<Obs>& universe) {
    std::size_t n = universe.size();
    std::vector<bool> bitmap(std::size_t{1} << n);
    std::vector<Obs> buf;
    for (uint32_t mask = 0; mask < (uint32_t{1} << n); ++mask) {
        buf.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (uint32_t{1} << i)) buf.push_back(universe[i]);
        bitmap[mask] = h.eval(buf);
    }
    return bitmap;
}

} // namespace detail

constexpr std::size_t kDefaultUniverseGuard = 14;

inline bool is_subset_closed_bounded(const Hyperproperty& h, const std::vector<Obs>& universe,
                                     std::size_t guard = kDefaultUniverseGuard) {
    detail::check_universe_guard(universe, guard);
    auto bitmap = detail::hyper_bitmap(h, universe);
    uint32_t full = (uint32_t{1} << universe.size()) - 1;
    for (uint32_t mask = 0; mask <= full; ++mask) {
        if (!bitmap[mask]) continue;
        // enumerate proper submasks
        for (uint32_t sub = (mask - 1) & mask;; sub = (sub - 1) & mask) {
            if (!bitmap[sub]) return false;
            if (sub == 0) break;
        }
        if (mask == full) break; // avoid wrap when full == UINT32_MAX (never here, guard is small)
    }
    return true;
}

// Membership is determined by subsets of cardinality ≤ k:
// H(S) ⇔ every S' ⊆ S with |S'| ≤ k has H(S').
inline bool is_k_subset_closed_bounded(const Hyperproperty& h, uint32_t k, const std::vector<Obs>& universe,
                                       std::size_t guard = kDefaultUniverseGuard) {
    detail::check_universe_guard(universe, guard);
    auto bitmap = detail::hyper_bitmap(h, universe);
    std::size_t n = universe.size();
    std::vector<uint32_t> small_subsets; // all masks with popcount ≤ k
    for (uint32_t mask = 0; mask < (uint32_t{1} << n); ++mask)
        if (static_cast<uint32_t>(__builtin_popcount(mask)) <= k) small_subsets.push_back(mask);
    for (uint32_t mask = 0; mask < (uint32_t{1} << n); ++mask) {
        bool rhs = true;
        for (uint32_t sub : small_subsets) {
            if ((sub & mask) != sub) continue;
            if (!bitmap[sub]) {
                rhs = false;
                break;
            }
        }
        if (bitmap[mask] != rhs) return false;
    }
    return true;
}

// H is k-hypersafety on U iff some set M of "bad observations" (sets of at
// most k elements, each an Incomplete-marked prefix matched by extension or a
// Term-marked completed trace matched exactly) characterizes the violations:
// ¬H(S) ⇔ some O ∈ M is prefix-wise dominated by S. The search is
// constructive: take M = all candidate observations that dominate only
// H-violating subsets, then verify the biconditional.
inline bool is_k_hypersafety_bounded(const Hyperproperty& h, uint32_t k, const std::vector<Obs>& universe,
                                     std::size_t guard = kDefaultUniverseGuard) {
    detail::check_universe_guard(universe, guard);
    auto bitmap = detail::hyper_bitmap(h, universe);
    std::size_t n = universe.size();
    uint32_t full = static_cast<uint32_t>((std::size_t{1} << n) - 1);

    std::vector<Obs> prefixes = incomplete_prefixes(universe);
    for (const Obs& t : universe)
        if (t.marker == Marker::Term) prefixes.push_back(t);
    // cover[j] = bitmask of universe members that extend prefix j
    std::vector<uint32_t> cover(prefixes.size(), 0);
    for (std::size_t j = 0; j < prefixes.size(); ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (prefix_of(prefixes[j], universe[i])) cover[j] |= uint32_t{1} << i;

    // Candidate observations: index lists of size ≤ k (the empty observation
    // included; it is dominated by every S).
    std::vector<std::vector<uint32_t>> candidates{{}};
    std::vector<uint32_t> combo;
    std::function<void(std::size_t, uint32_t)> gen = [&](std::size_t start, uint32_t depth) {
        if (depth == k) return;
        for (std::size_t j = start; j < prefixes.size(); ++j) {
            combo.push_back(static_cast<uint32_t>(j));
            candidates.emplace_back(combo.begin(), combo.end());
            gen(j + 1, depth + 1);
            combo.pop_back();
        }
    };
    gen(0, 0);

    auto dominated = [&](const std::vector<uint32_t>& obs, uint32_t s_mask) {
        for (uint32_t j : obs)
            if ((cover[j] & s_mask) == 0) return false;
        return true;
    };

    // M = candidates dominating only violating subsets.
    std::vector<const std::vector<uint32_t>*> m_set;
    for (const auto& cand : candidates) {
        bool sound = true;
        for (uint32_t s = 0; s <= full; ++s) {
            if (bitmap[s] && dominated(cand, s)) {
                sound = false;
                break;
            }
            if (s == full) break;
        }
        if (sound) m_set.push_back(&cand);
    }

    // Verify: every violating subset is dominated by some member of M.
    for (uint32_t s = 0; s <= full; ++s) {
        if (!bitmap[s]) {
            bool hit = false;
            for (const auto* obs : m_set)
                if (dominated(*obs, s)) {
                    hit = true;
                    break;
                }
            if (!hit) return false;
        }
        if (s == full) break;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Built-in hyperproperty forms and the property file format
// ---------------------------------------------------------------------------

inline std::vector<uint32_t> ctx_inputs(const Obs& t) {
    std::vector<uint32_t> out;
    for (const Event& e : t.events)
        if (e.kind == EventKind::In && e.origin == Origin::Ctx) out.push_back(e.value);
    return out;
}

inline std::vector<uint32_t> prog_outputs(const Obs& t) {
    std::vector<uint32_t> out;
    for (const Event& e : t.events)
        if (e.kind == EventKind::Out && e.origin == Origin::Prog) out.push_back(e.value);
    return out;
}

// Noninterference from the first context input: any two terminated runs that
// agree on all context inputs after the first must agree on program outputs.
// Incomplete runs are exempt: their events may still grow, so no comparison
// against them is definite.
inline Hyperproperty first_input_ni() {
    Hyperproperty h;
    h.name = "first-input-ni";
    h.predicate = [](const std::vector<Obs>& members) {
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                if (members[i].marker != Marker::Term || members[j].marker != Marker::Term) continue;
                auto in1 = ctx_inputs(members[i]);
                auto in2 = ctx_inputs(members[j]);
                if (!in1.empty()) in1.erase(in1.begin());
                if (!in2.empty()) in2.erase(in2.begin());
                if (in1 == in2 && prog_outputs(members[i]) != prog_outputs(members[j])) return false;
            }
        return true;
    };
    h.class_tags = {"2-hypersafety", "subset-closed"};
    return h;
}

// Determinism of program outputs with respect to the full context input
// sequence, again judged on terminated runs only.
inline Hyperproperty full_input_determinism() {
    Hyperproperty h;
    h.name = "full-input-determinism";
    h.predicate = [](const std::vector<Obs>& members) {
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                if (members[i].marker != Marker::Term || members[j].marker != Marker::Term) continue;
                if (ctx_inputs(members[i]) == ctx_inputs(members[j]) &&
                    prog_outputs(members[i]) != prog_outputs(members[j]))
                    return false;
            }
        return true;
    };
    h.class_tags = {"2-hypersafety", "subset-closed"};
    return h;
}

inline Hyperproperty card_ge(uint32_t n) {
    Hyperproperty h;
    h.name = "card-ge-" + std::to_string(n);
    h.predicate = [n](const std::vector<Obs>& members) { return members.size() >= n; };
    h.class_tags = {"none"};
    return h;
}

inline Property terminates_property() {
    Property p;
    p.name = "terminates";
    p.predicate = [](const Obs& t) { return t.marker == Marker::Term; };
    return p;
}

// --- parsing -----------------------------------------------------------

inline EventPattern parse_event_pattern(const Sexpr& e) {
    if (e.is_atom) {
        if (e.atom == "_") return EventPattern::wildcard();
        throw ParseError("expected event pattern '(in|out prog|ctx|_ <nat>|_)' or '_'", e.line, e.col);
    }
    if (e.size() != 3) throw ParseError("event pattern needs kind, origin, value", e.line, e.col);
    EventPattern p;
    const std::string& k = e.at(0).atom_text();
    if (k == "in")
        p.kind = EventKind::In;
    else if (k == "out")
        p.kind = EventKind::Out;
    else if (k != "_")
        throw ParseError("event kind must be in, out, or _", e.at(0).line, e.at(0).col);
    const std::string& o = e.at(1).atom_text();
    if (o == "prog")
        p.origin = Origin::Prog;
    else if (o == "ctx")
        p.origin = Origin::Ctx;
    else if (o != "_")
        throw ParseError("event origin must be prog, ctx, or _", e.at(1).line, e.at(1).col);
    if (!(e.at(2).is_atom && e.at(2).atom == "_")) p.value = e.at(2).as_nat();
    return p;
}

inline SafetyMonitor parse_monitor(const Sexpr& e) {
    if (!e.head_is("monitor")) throw ParseError("expected (monitor ...)", e.line, e.col);
    std::vector<std::string> states;
    std::map<std::string, int> index;
    std::optional<int> initial;
    std::vector<int> bad;
    std::vector<SafetyMonitor::Rule> rules;
    auto state_id = [&](const Sexpr& s) {
        auto it = index.find(s.atom_text());
        if (it == index.end()) throw ParseError("unknown monitor state '" + s.atom + "'", s.line, s.col);
        return it->second;
    };
    for (std::size_t i = 1; i < e.size(); ++i) {
        const Sexpr& sec = e.at(i);
        if (sec.head_is("states")) {
            for (std::size_t j = 1; j < sec.size(); ++j) {
                index.emplace(sec.at(j).atom_text(), static_cast<int>(states.size()));
                states.push_back(sec.at(j).atom_text());
            }
        } else if (sec.head_is("init")) {
            initial = state_id(sec.at(1));
        } else if (sec.head_is("bad")) {
            for (std::size_t j = 1; j < sec.size(); ++j) bad.push_back(state_id(sec.at(j)));
        } else if (sec.head_is("trans")) {
            for (std::size_t j = 1; j < sec.size(); ++j) {
                const Sexpr& r = sec.at(j);
                if (r.size() != 3) throw ParseError("transition needs (state pattern state)", r.line, r.col);
                rules.push_back({state_id(r.at(0)), parse_event_pattern(r.at(1)), state_id(r.at(2))});
            }
        } else {
            throw ParseError("unknown monitor section", sec.line, sec.col);
        }
    }
    if (!initial) throw ParseError("monitor needs an (init q) section", e.line, e.col);
    return SafetyMonitor(std::move(states), *initial, std::move(bad), std::move(rules));
}

inline Property parse_property(const Sexpr& e, const std::string& name_hint = "") {
    if (e.head_is("monitor")) {
        return Property::from_monitor(name_hint.empty() ? "monitor" : name_hint, parse_monitor(e));
    }
    if (e.head_is("property")) {
        const std::string& which = e.at(1).atom_text();
        if (which == "terminates") return terminates_property();
        if (which == "events-empty") {
            Property p;
            p.name = "events-empty";
            p.predicate = [](const Obs& t) { return t.events.empty(); };
            return p;
        }
        throw ParseError("unknown property '" + which + "'", e.at(1).line, e.at(1).col);
    }
    throw ParseError("expected (monitor ...) or (property ...)", e.line, e.col);
}

// Hyperproperty files: either a property form (implicitly lifted) or
// (hyper (class tag...) <form>) where <form> is one of
//   (lift <property-form>) | (card-ge n) | (first-input-ni)
//   | (full-input-determinism)
inline Hyperproperty parse_hyper(const Sexpr& e, const std::string& name_hint = "") {
    if (e.head_is("monitor") || e.head_is("property")) return lift(parse_property(e, name_hint));
    if (!e.head_is("hyper")) throw ParseError("expected (hyper ...), (monitor ...) or (property ...)", e.line, e.col);
    std::vector<std::string> tags;
    std::size_t body = 1;
    if (e.size() > 1 && e.at(1).head_is("class")) {
        for (std::size_t j = 1; j < e.at(1).size(); ++j) tags.push_back(e.at(1).at(j).atom_text());
        body = 2;
    }
    const Sexpr& form = e.at(body);
    Hyperproperty h;
    if (form.head_is("lift")) {
        h = lift(parse_property(form.at(1), name_hint));
    } else if (form.head_is("card-ge")) {
        h = card_ge(form.at(1).as_nat());
    } else if (form.head_is("first-input-ni")) {
        h = first_input_ni();
    } else if (form.head_is("full-input-determinism")) {
        h = full_input_determinism();
    } else {
        throw ParseError("unknown hyperproperty form", form.line, form.col);
    }
    if (!tags.empty()) h.class_tags = std::move(tags);
    return h;
}

} // namespace scwb
