#include <catch2/catch_amalgamated.hpp>

#include "scwb/trace.hpp"

using namespace scwb;

namespace {

Event in_ctx(uint32_t v) { return Event{EventKind::In, Origin::Ctx, v}; }
Event in_prog(uint32_t v) { return Event{EventKind::In, Origin::Prog, v}; }
Event out_prog(uint32_t v) { return Event{EventKind::Out, Origin::Prog, v}; }
Event out_ctx(uint32_t v) { return Event{EventKind::Out, Origin::Ctx, v}; }

Obs term(std::vector<Event> ev) { return Obs{std::move(ev), Marker::Term, CutCause::None}; }
Obs inc(std::vector<Event> ev, CutCause c = CutCause::Fuel) { return Obs{std::move(ev), Marker::Incomplete, c}; }

Sexpr sx(const std::string& text) { return parse_sexpr(text); }

} // namespace

TEST_CASE("event and observation printing") {
    CHECK(show_event(in_ctx(3)) == "In(3,ctx)");
    CHECK(show_event(out_prog(0)) == "Out(0,prog)");
    CHECK(show_obs(term({in_prog(3), out_prog(3)})) == "[In(3,prog) Out(3,prog)] term");
    CHECK(show_obs(inc({})) == "[] incomplete");
    CHECK(show_obs(inc({in_ctx(1)})) == "[In(1,ctx)] incomplete");
}

TEST_CASE("observation equality ignores the cut cause") {
    Obs a = inc({in_ctx(1)}, CutCause::Fuel);
    Obs b = inc({in_ctx(1)}, CutCause::Blocked);
    CHECK(a == b);
    CHECK_FALSE(a == term({in_ctx(1)}));
    CHECK_FALSE(inc({in_ctx(1)}) == inc({in_ctx(2)}));
}

TEST_CASE("trace sets are sorted and deduplicated") {
    Bounds b;
    TraceSet s = TraceSet::of({term({out_prog(1)}), term({out_prog(0)}), term({out_prog(1)})}, b);
    REQUIRE(s.members.size() == 2);
    CHECK(show_obs(s.members[0]) == "[Out(0,prog)] term");
    CHECK(show_obs(s.members[1]) == "[Out(1,prog)] term");

    TraceSet again = TraceSet::of({term({out_prog(0)}), term({out_prog(1)})}, b);
    CHECK(s.same_members(again));
}

TEST_CASE("prefix ordering") {
    Obs done = term({in_ctx(1), out_prog(0)});
    SECTION("a terminated observation is a prefix only of itself") {
        CHECK(prefix_of(done, done));
        CHECK_FALSE(prefix_of(done, term({in_ctx(1), out_prog(0), out_prog(0)})));
        CHECK_FALSE(prefix_of(done, inc({in_ctx(1), out_prog(0)})));
    }
    SECTION("an incomplete observation is a prefix of any extension") {
        CHECK(prefix_of(inc({}), done));
        CHECK(prefix_of(inc({in_ctx(1)}), done));
        CHECK(prefix_of(inc({in_ctx(1), out_prog(0)}), done));
        CHECK(prefix_of(inc({in_ctx(1)}), inc({in_ctx(1), out_prog(9)})));
        CHECK_FALSE(prefix_of(inc({in_ctx(2)}), done));
        CHECK_FALSE(prefix_of(inc({in_ctx(1), out_prog(0), out_prog(0)}), done));
    }
}

TEST_CASE("incomplete prefixes of a set") {
    std::vector<Obs> u = {term({in_ctx(1), out_prog(0)}), inc({in_ctx(1)})};
    std::vector<Obs> ps = incomplete_prefixes(u);
    REQUIRE(ps.size() == 3);
    CHECK(show_obs(ps[0]) == "[] incomplete");
    CHECK(show_obs(ps[1]) == "[In(1,ctx)] incomplete");
    CHECK(show_obs(ps[2]) == "[In(1,ctx) Out(0,prog)] incomplete");
}

TEST_CASE("bounds validation") {
    Bounds b;
    CHECK(b.fuel == 100000);
    CHECK(b.stream_len == 2);
    CHECK(b.value_cap == 3);
    CHECK(b.event_bound == 4);
    CHECK(b.ctx_size == 5);
    CHECK_NOTHROW(b.validate());
    b.fuel = 0;
    CHECK_THROWS_AS(b.validate(), std::invalid_argument);
}

TEST_CASE("monitor parsing and stepping") {
    SafetyMonitor mon = parse_monitor(sx(
        "(monitor (states ok bad) (init ok) (bad bad)"
        " (trans (ok (out prog 0) bad) (ok _ ok) (bad _ bad)))"));
    CHECK(mon.initial() == 0);
    CHECK_FALSE(mon.is_bad(0));
    CHECK(mon.is_bad(1));
    CHECK_NOTHROW(mon.check_total(3));

    CHECK_FALSE(mon.runs_to_bad(term({in_ctx(1), out_prog(1)})));
    CHECK(mon.runs_to_bad(term({out_prog(0)})));
    CHECK(mon.runs_to_bad(inc({in_ctx(2), out_prog(0), out_prog(1)})));
}

TEST_CASE("monitor configuration errors") {
    SECTION("bad states must be absorbing") {
        CHECK_THROWS_AS(parse_monitor(sx(
                            "(monitor (states ok bad) (init ok) (bad bad)"
                            " (trans (ok (out prog 0) bad) (ok _ ok) (bad _ ok)))")),
                        MonitorError);
    }
    SECTION("partial monitors fail the totality check") {
        SafetyMonitor mon = parse_monitor(sx(
            "(monitor (states ok bad) (init ok) (bad bad)"
            " (trans (ok (out prog 0) bad) (bad _ bad)))"));
        CHECK_THROWS_AS(mon.check_total(0), MonitorError);
    }
    SECTION("unknown state names are rejected") {
        CHECK_THROWS_AS(parse_monitor(sx(
                            "(monitor (states ok) (init nope) (bad ok) (trans (ok _ ok)))")),
                        ParseError);
    }
}

TEST_CASE("event patterns") {
    EventPattern p = parse_event_pattern(sx("(out prog 0)"));
    CHECK(p.matches(out_prog(0)));
    CHECK_FALSE(p.matches(out_prog(1)));
    CHECK_FALSE(p.matches(in_prog(0)));

    EventPattern any_out = parse_event_pattern(sx("(out _ _)"));
    CHECK(any_out.matches(out_prog(2)));
    CHECK(any_out.matches(out_ctx(2)));
    CHECK_FALSE(any_out.matches(in_ctx(2)));

    CHECK(EventPattern::wildcard().matches(in_ctx(7)));
}

TEST_CASE("monitor-backed properties") {
    Property p = parse_property(sx(
        "(monitor (states ok bad) (init ok) (bad bad)"
        " (trans (ok (out prog 0) bad) (ok _ ok) (bad _ bad)))"), "no-out0");
    REQUIRE(p.monitor.has_value());
    CHECK(p.name == "no-out0");
    CHECK(p.predicate(term({out_prog(1)})));
    CHECK_FALSE(p.predicate(term({out_prog(0)})));
    CHECK(satisfies_property({term({out_prog(1)}), term({})}, p));
    CHECK_FALSE(satisfies_property({term({out_prog(1)}), inc({out_prog(0)})}, p));
}

TEST_CASE("built-in trace properties") {
    Property t = terminates_property();
    CHECK(t.predicate(term({out_prog(0)})));
    CHECK_FALSE(t.predicate(inc({out_prog(0)})));
    CHECK_FALSE(t.monitor.has_value());

    Property e = parse_property(sx("(property events-empty)"));
    CHECK(e.predicate(term({})));
    CHECK_FALSE(e.predicate(term({out_prog(0)})));
}

TEST_CASE("lifting a trace property") {
    Hyperproperty h = lift(terminates_property());
    CHECK(h.name == "lift(terminates)");
    REQUIRE(h.base.has_value());
    CHECK(h.eval({}));
    CHECK(h.eval({term({})}));
    CHECK_FALSE(h.eval({term({}), inc({in_ctx(0)})}));
    CHECK(satisfies_hyper(TraceSet::of({term({})}, Bounds{}), h));
}

TEST_CASE("first-input noninterference") {
    Hyperproperty ni = first_input_ni();
    SECTION("holds on empty and singleton sets") {
        CHECK(ni.eval({}));
        CHECK(ni.eval({term({in_ctx(1), out_prog(0)})}));
    }
    SECTION("differing outputs after equal remaining inputs violate it") {
        CHECK_FALSE(ni.eval({term({in_ctx(1), out_prog(0)}), term({in_ctx(2), out_prog(1)})}));
    }
    SECTION("differing remaining inputs excuse differing outputs") {
        CHECK(ni.eval({term({in_ctx(1), in_ctx(5), out_prog(0)}),
                       term({in_ctx(2), in_ctx(6), out_prog(1)})}));
    }
    SECTION("only terminated runs are compared") {
        CHECK(ni.eval({term({in_ctx(1), out_prog(0)}), inc({in_ctx(2), out_prog(1)})}));
    }
    SECTION("output identity across secrets satisfies it") {
        CHECK(ni.eval({term({in_ctx(1), out_prog(7)}), term({in_ctx(2), out_prog(7)})}));
    }
}

TEST_CASE("full input determinism") {
    Hyperproperty det = full_input_determinism();
    CHECK(det.eval({term({in_ctx(1), out_prog(0)}), term({in_ctx(2), out_prog(1)})}));
    CHECK_FALSE(det.eval({term({in_ctx(1), out_prog(0)}), term({in_ctx(1), out_prog(1)})}));
    CHECK(det.eval({term({in_ctx(1), out_prog(0)}), inc({in_ctx(1), out_prog(1)})}));
}

TEST_CASE("cardinality hyperproperty") {
    Hyperproperty h = card_ge(2);
    CHECK_FALSE(h.eval({}));
    CHECK_FALSE(h.eval({term({})}));
    CHECK(h.eval({term({}), term({out_prog(0)})}));
}

TEST_CASE("bounded universes") {
    SECTION("full alphabet size") {
        CHECK(full_alphabet(1).size() == 8);
        CHECK(full_alphabet(3).size() == 16);
    }
    SECTION("both-marker universe over the two-event classification alphabet") {
        std::vector<Event> alpha = {in_ctx(0), out_prog(0)};
        Universe u = make_universe(2, alpha);
        CHECK(u.members.size() == 14);
        CHECK_NOTHROW(detail::check_universe_guard(u.members, kDefaultUniverseGuard));
    }
    SECTION("the guard rejects one observation more") {
        std::vector<Obs> fifteen(15);
        CHECK_THROWS_AS(detail::check_universe_guard(fifteen, kDefaultUniverseGuard), UniverseGuardError);
    }
    SECTION("term-only universes halve the count minus the shared empty slot") {
        std::vector<Event> alpha = {in_ctx(0), out_prog(0)};
        CHECK(make_universe(2, alpha, true, false).members.size() == 7);
        CHECK(make_universe(2, alpha, false, true).members.size() == 7);
    }
}

TEST_CASE("bounded safety classification") {
    std::vector<Event> alpha = {in_ctx(0), out_prog(0)};
    std::vector<Obs> u = make_universe(2, alpha).members;

    Property no_out0 = Property::from_monitor("no-out0", parse_monitor(sx(
        "(monitor (states ok bad) (init ok) (bad bad)"
        " (trans (ok (out prog 0) bad) (ok _ ok) (bad _ bad)))")));
    CHECK(is_safety_bounded(no_out0, u));
    CHECK_FALSE(is_safety_bounded(terminates_property(), u));

    Property empty = parse_property(sx("(property events-empty)"));
    CHECK(is_safety_bounded(empty, u));
}

TEST_CASE("bounded subset-closure classification") {
    std::vector<Event> alpha = {in_ctx(0), out_prog(0)};
    std::vector<Obs> u = make_universe(2, alpha).members;

    CHECK(is_subset_closed_bounded(lift(terminates_property()), u));
    CHECK(is_subset_closed_bounded(first_input_ni(), u));
    CHECK_FALSE(is_subset_closed_bounded(card_ge(2), u));

    CHECK(is_k_subset_closed_bounded(first_input_ni(), 2, u));
    CHECK_FALSE(is_k_subset_closed_bounded(card_ge(2), 2, u));
}

TEST_CASE("bounded hypersafety classification") {
    std::vector<Event> alpha = {in_ctx(0), out_prog(0)};
    std::vector<Obs> u = make_universe(2, alpha).members;

    Property no_out0 = Property::from_monitor("no-out0", parse_monitor(sx(
        "(monitor (states ok bad) (init ok) (bad bad)"
        " (trans (ok (out prog 0) bad) (ok _ ok) (bad _ bad)))")));
    CHECK(is_k_hypersafety_bounded(lift(no_out0), 1, u));
    CHECK(is_k_hypersafety_bounded(first_input_ni(), 2, u));
    CHECK(is_k_hypersafety_bounded(full_input_determinism(), 2, u));
    CHECK_FALSE(is_k_hypersafety_bounded(lift(terminates_property()), 2, u));
    CHECK_FALSE(is_k_hypersafety_bounded(card_ge(2), 2, u));

    SECTION("the guard applies before any enumeration") {
        std::vector<Obs> big = make_universe(3, full_alphabet(0)).members;
        REQUIRE(big.size() > kDefaultUniverseGuard);
        CHECK_THROWS_AS(is_k_hypersafety_bounded(first_input_ni(), 2, big), UniverseGuardError);
    }
}

TEST_CASE("hyperproperty file parsing") {
    SECTION("declared class tags override the lifted defaults") {
        Hyperproperty h = parse_hyper(sx(
            "(hyper (class safety 2-hypersafety subset-closed)"
            " (lift (monitor (states ok bad) (init ok) (bad bad)"
            "  (trans (ok (out prog 0) bad) (ok _ ok) (bad _ bad)))))"), "no-out0");
        CHECK(h.name == "lift(no-out0)");
        REQUIRE(h.base.has_value());
        CHECK(h.base->name == "no-out0");
        CHECK(h.class_tags == std::vector<std::string>{"safety", "2-hypersafety", "subset-closed"});
        CHECK_FALSE(h.eval({term({out_prog(0)})}));
    }
    SECTION("a bare monitor is lifted with default tags") {
        Hyperproperty h = parse_hyper(sx(
            "(monitor (states ok bad) (init ok) (bad bad)"
            " (trans (ok (out prog 0) bad) (ok _ ok) (bad _ bad)))"), "mon");
        REQUIRE(h.base.has_value());
        CHECK(h.class_tags == std::vector<std::string>{"lifted", "subset-closed"});
    }
    SECTION("relational forms have no base property") {
        Hyperproperty h = parse_hyper(sx("(hyper (class x) (first-input-ni))"), "ni");
        CHECK_FALSE(h.base.has_value());
        CHECK_FALSE(h.eval({term({in_ctx(1), out_prog(0)}), term({in_ctx(2), out_prog(1)})}));

        Hyperproperty c = parse_hyper(sx("(hyper (class x) (card-ge 2))"), "c");
        CHECK_FALSE(c.eval({term({})}));
    }
    SECTION("unknown forms are rejected") {
        CHECK_THROWS_AS(parse_hyper(sx("(hyper (class x) (frobnicate))")), ParseError);
        CHECK_THROWS_AS(parse_property(sx("(property frobnicate)")), ParseError);
    }
}

TEST_CASE("context inputs and program outputs") {
    Obs t = term({in_ctx(1), out_prog(2), in_prog(3), in_ctx(4), out_ctx(5)});
    CHECK(ctx_inputs(t) == std::vector<uint32_t>{1, 4});
    CHECK(prog_outputs(t) == std::vector<uint32_t>{2});
}
