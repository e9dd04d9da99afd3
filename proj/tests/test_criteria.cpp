#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "scwb/criteria.hpp"

using namespace scwb;

namespace {

const TermSyntax kSrcProg{true, Origin::Prog};

const Term* src(TermStore& st, const std::string& text) {
    return parse_term(st, parse_sexpr(text), kSrcProg);
}

Bounds small_bounds() {
    Bounds b;
    b.ctx_size = 4;
    b.value_cap = 1;
    b.stream_len = 2;
    return b;
}

bool same_verdict(const Verdict& a, const Verdict& b) {
    return a.status == b.status && a.stats.contexts == b.stats.contexts &&
           a.stats.traces == b.stats.traces && a.stats.inconclusive == b.stats.inconclusive &&
           a.witnesses == b.witnesses && a.counterexamples == b.counterexamples;
}

Hyperproperty no_out_n(uint32_t n) {
    std::string name = "no-out" + std::to_string(n);
    std::string text = "(monitor (states ok bad) (init ok) (bad bad)"
                       " (trans (ok (out prog " + std::to_string(n) + ") bad) (ok _ ok) (bad _ bad)))";
    return lift(Property::from_monitor(name, parse_monitor(parse_sexpr(text))));
}

} // namespace

TEST_CASE("status names and exit codes") {
    Verdict v;
    v.status = Status::HoldsWithinBounds;
    CHECK(std::string(status_name(v.status)) == "holds-within-bounds");
    CHECK(verdict_exit_code(v) == 0);
    v.status = Status::Counterexample;
    CHECK(std::string(status_name(v.status)) == "counterexample");
    CHECK(verdict_exit_code(v) == 1);
    v.status = Status::Inconclusive;
    CHECK(std::string(status_name(v.status)) == "inconclusive");
    CHECK(verdict_exit_code(v) == 2);
}

TEST_CASE("finalize prefers counterexamples over inconclusive over holds") {
    Verdict v;
    v.finalize();
    CHECK(v.status == Status::HoldsWithinBounds);

    v.stats.inconclusive = 3;
    v.finalize();
    CHECK(v.status == Status::Inconclusive);

    v.add_counterexample({"ctx", "", "", "boom"});
    v.finalize();
    CHECK(v.status == Status::Counterexample);
}

TEST_CASE("report entries are capped, full counts live in stats") {
    Verdict v;
    for (int i = 0; i < 15; ++i) v.add_witness({"ctx" + std::to_string(i), "", "", ""});
    CHECK(v.witnesses.size() == kMaxReportEntries);
    CHECK(v.witnesses.back().target_ctx == "ctx9");
}

TEST_CASE("robust safety against the planted compiler") {
    TermStore st;
    Bounds b = small_bounds();
    const Term* p = src(st, "(lit 1)");

    RealPair bad(st, t_nat(), CompilerId::Backdoor);
    Verdict v = check_rsp(bad, p, b);
    CHECK(v.status == Status::Counterexample);
    CHECK(v.stats.contexts == 668);
    CHECK(v.stats.traces == 724);
    CHECK(v.stats.inconclusive == 0);
    REQUIRE(v.counterexamples.size() == 1);
    CHECK(v.counterexamples[0].target_ctx == "(app (snd (hole)) unit)");
    CHECK(v.counterexamples[0].detail ==
          "prefix [Out(0,prog)] incomplete has no source extension within bounds");

    RealPair sec(st, t_nat(), CompilerId::Secure);
    Verdict vs = check_rsp(sec, p, b);
    CHECK(vs.status == Status::HoldsWithinBounds);
    CHECK(vs.stats.contexts == 1053);
    CHECK(vs.stats.traces == 1194);
    CHECK(vs.stats.inconclusive == 0);
    SECTION("every instance is witnessed by back-translation alone") {
        CHECK(vs.bt_witnesses == 1053);
        CHECK(vs.enum_witnesses == 0);
        REQUIRE_FALSE(vs.witnesses.empty());
        CHECK(vs.witnesses[0].target_ctx == "(hole)");
        CHECK(vs.witnesses[0].kind == "backtranslation");
        CHECK(vs.witnesses[0].detail == "all incomplete prefixes extended");
    }
}

TEST_CASE("robust trace and hyperproperty preservation hold for the hardened compiler") {
    TermStore st;
    Bounds b = small_bounds();
    const Term* p = src(st, "(lit 1)");
    RealPair sec(st, t_nat(), CompilerId::Secure);

    Verdict vt = check_rtp(sec, p, b);
    CHECK(vt.status == Status::HoldsWithinBounds);
    CHECK(vt.stats.contexts == 1053);

    Verdict vh = check_rhp(sec, p, b);
    CHECK(vh.status == Status::HoldsWithinBounds);
    CHECK(vh.stats.contexts == 1053);
}

TEST_CASE("strong robust hyperproperty preservation shares one context across the corpus") {
    TermStore st;
    Bounds b = small_bounds();
    std::vector<const Term*> corpus = {src(st, "(lit 1)"), src(st, "(read)")};
    CHECK(corpus_export_type(corpus) == t_nat());

    RealPair sec(st, t_nat(), CompilerId::Secure);
    Verdict v = check_strong_rhp(sec, corpus, b);
    CHECK(v.status == Status::HoldsWithinBounds);
    CHECK(v.stats.contexts == 1053);
    CHECK(v.stats.inconclusive == 0);

    RealPair bad(st, t_nat(), CompilerId::Backdoor);
    Verdict vb = check_strong_rhp(bad, corpus, b);
    CHECK(vb.status == Status::Counterexample);
    REQUIRE_FALSE(vb.counterexamples.empty());
    CHECK(vb.counterexamples[0].target_ctx == "(succ (hole))");
    CHECK(vb.counterexamples[0].detail ==
          "program #0: target {[] incomplete } vs source {[] term }");
}

TEST_CASE("a mixed-type corpus is rejected") {
    TermStore st;
    CHECK_THROWS_AS(corpus_export_type({src(st, "(lit 1)"), src(st, "unit")}),
                    std::invalid_argument);
    CHECK_THROWS_AS(corpus_export_type(std::vector<const Term*>{}), std::invalid_argument);
}

TEST_CASE("quantifier order separates per-trace from whole-set preservation") {
    Bounds b;
    MockPair mock = make_separation_mock(b);

    Verdict vt = check_rtp(mock, MockPair::Unit{}, b);
    CHECK(vt.status == Status::HoldsWithinBounds);

    Verdict vh = check_rhp(mock, MockPair::Unit{}, b);
    CHECK(vh.status == Status::Counterexample);
    REQUIRE(vh.counterexamples.size() == 1);
    CHECK(vh.counterexamples[0].target_ctx == "mock-tgt-0");
    CHECK(vh.counterexamples[0].detail ==
          "no source context yields trace set {[Out(1,prog)] term, [Out(2,prog)] term}"
          " within bounds");

    SECTION("both verdicts reproduce on a rerun") {
        MockPair again = make_separation_mock(b);
        CHECK(same_verdict(check_rtp(again, MockPair::Unit{}, b), vt));
        CHECK(same_verdict(check_rhp(again, MockPair::Unit{}, b), vh));
    }
}

TEST_CASE("property preservation per compiler") {
    TermStore st;
    Bounds b = small_bounds();
    const Term* p = src(st, "(lit 1)");
    Hyperproperty h = no_out_n(0);

    RealPair sec(st, t_nat(), CompilerId::Secure);
    CriterionChecker<RealPair> ck(sec, p, b);
    Verdict pv = ck.preservation(h);
    CHECK(pv.status == Status::HoldsWithinBounds);
    CHECK(pv.stats.vacuous == 0);
    CHECK(pv.stats.contexts == 1074);

    RealPair bad(st, t_nat(), CompilerId::Backdoor);
    CriterionChecker<RealPair> ckb(bad, p, b);
    Verdict pb = ckb.preservation(h);
    CHECK(pb.status == Status::Counterexample);
    REQUIRE_FALSE(pb.counterexamples.empty());
    CHECK(pb.counterexamples[0].target_ctx == "(app (snd (hole)) unit)");
    CHECK(pb.counterexamples[0].detail == "lift(no-out0) fails on {[Out(0,prog)] term}");
}

TEST_CASE("preservation is vacuous when the source already violates the property") {
    TermStore st;
    Bounds b = small_bounds();
    const Term* p = src(st, "(seq (write (lit 1)) (lit 1))");
    RealPair sec(st, t_nat(), CompilerId::Secure);
    CriterionChecker<RealPair> ck(sec, p, b);

    Verdict v = ck.preservation(no_out_n(1));
    CHECK(v.status == Status::HoldsWithinBounds);
    CHECK(v.stats.vacuous == 1);
    REQUIRE_FALSE(v.witnesses.empty());
    CHECK(v.witnesses[0].detail.substr(0, 40) == "vacuous: source side already fails; lift");
}

TEST_CASE("suite preservation is a conjunction that stops at the first failure") {
    TermStore st;
    Bounds b = small_bounds();
    const Term* p = src(st, "(lit 1)");

    std::vector<Hyperproperty> suite = {no_out_n(0), first_input_ni()};
    RealPair sec(st, t_nat(), CompilerId::Secure);
    Verdict v = check_suite_preservation(sec, p, suite, b);
    CHECK(v.status == Status::HoldsWithinBounds);

    RealPair bad(st, t_nat(), CompilerId::Backdoor);
    Verdict vb = check_suite_preservation(bad, p, suite, b);
    CHECK(vb.status == Status::Counterexample);
    REQUIRE_FALSE(vb.counterexamples.empty());
    CHECK(vb.counterexamples[0].detail.substr(0, 13) == "lift(no-out0)");
}

TEST_CASE("class-restricted preservation rejects misdeclared suite members") {
    TermStore st;
    Bounds b = small_bounds();
    const Term* p = src(st, "(lit 1)");
    RealPair sec(st, t_nat(), CompilerId::Secure);

    std::vector<Event> alpha = {Event{EventKind::In, Origin::Ctx, 0},
                                Event{EventKind::Out, Origin::Prog, 0}};
    std::vector<Obs> cls_universe = make_universe(2, alpha).members;

    SECTION("a safety suite passes the gate") {
        Verdict v = check_class_preservation(sec, p, ClassSpec{PropClass::Safety, 2},
                                             {no_out_n(0)}, cls_universe, b);
        CHECK(v.status == Status::HoldsWithinBounds);
    }
    SECTION("a liveness-flavored member fails the safety gate") {
        CHECK_THROWS_WITH(check_class_preservation(sec, p, ClassSpec{PropClass::Safety, 2},
                                                   {lift(terminates_property())}, cls_universe, b),
                          "suite member 'lift(terminates)' fails the safety classifier");
    }
    SECTION("a non-subset-closed member fails the subset-closed gate") {
        CHECK_THROWS_AS(check_class_preservation(sec, p, ClassSpec{PropClass::SubsetClosed, 2},
                                                 {card_ge(2)}, cls_universe, b),
                        std::invalid_argument);
    }
}

TEST_CASE("classifier dispatch per class") {
    std::vector<Event> alpha = {Event{EventKind::In, Origin::Ctx, 0},
                                Event{EventKind::Out, Origin::Prog, 0}};
    std::vector<Obs> u = make_universe(2, alpha).members;

    CHECK(classifier_accepts(no_out_n(0), ClassSpec{PropClass::Safety, 2}, u));
    CHECK_FALSE(classifier_accepts(first_input_ni(), ClassSpec{PropClass::Safety, 2}, u));
    CHECK(classifier_accepts(first_input_ni(), ClassSpec{PropClass::KHypersafety, 2}, u));
    CHECK(classifier_accepts(no_out_n(0), ClassSpec{PropClass::SubsetClosed, 2}, u));
    CHECK_FALSE(classifier_accepts(card_ge(2), ClassSpec{PropClass::SubsetClosed, 2}, u));
    CHECK(classifier_accepts(card_ge(2), ClassSpec{PropClass::AllHyper, 2}, u));
    CHECK(classifier_accepts(no_out_n(0), ClassSpec{PropClass::TraceProps, 2}, u));
    CHECK_FALSE(classifier_accepts(card_ge(2), ClassSpec{PropClass::TraceProps, 2}, u));
}

TEST_CASE("lattice edges and violation detection") {
    CHECK(default_lattice_edges().size() == 3);

    Bounds b;
    auto verdict = [&](Status s, uint64_t inconclusive) {
        Verdict v;
        v.bounds = b;
        v.stats.inconclusive = inconclusive;
        if (s == Status::Counterexample) v.add_counterexample({"c", "", "", "d"});
        v.finalize();
        REQUIRE(v.status == s);
        return v;
    };

    SECTION("a definite strong pass above a definite weak failure is flagged") {
        LatticeInstance inst;
        inst.name = "demo";
        inst.verdicts["rtp"] = verdict(Status::HoldsWithinBounds, 0);
        inst.verdicts["rsp"] = verdict(Status::Counterexample, 0);
        auto vio = lattice_check({inst}, default_lattice_edges());
        REQUIRE(vio.size() == 1);
        CHECK(vio[0].instance == "demo");
        CHECK(vio[0].stronger == "rtp");
        CHECK(vio[0].weaker == "rsp");
    }
    SECTION("an inconclusive strong pass is not definite enough to flag") {
        LatticeInstance inst;
        inst.name = "demo";
        inst.verdicts["rtp"] = verdict(Status::Inconclusive, 2);
        inst.verdicts["rsp"] = verdict(Status::Counterexample, 0);
        CHECK(lattice_check({inst}, default_lattice_edges()).empty());
    }
    SECTION("consistent instances produce no violations") {
        LatticeInstance inst;
        inst.name = "demo";
        inst.verdicts["strong-rhp"] = verdict(Status::HoldsWithinBounds, 0);
        inst.verdicts["rhp"] = verdict(Status::HoldsWithinBounds, 0);
        inst.verdicts["rtp"] = verdict(Status::HoldsWithinBounds, 0);
        inst.verdicts["rsp"] = verdict(Status::HoldsWithinBounds, 0);
        CHECK(lattice_check({inst}, default_lattice_edges()).empty());
    }
    SECTION("mixed bounds are a configuration error") {
        LatticeInstance inst;
        inst.name = "demo";
        inst.verdicts["rtp"] = verdict(Status::HoldsWithinBounds, 0);
        Verdict other = verdict(Status::HoldsWithinBounds, 0);
        other.bounds.ctx_size = 2;
        inst.verdicts["rsp"] = other;
        CHECK_THROWS_AS(lattice_check({inst}, default_lattice_edges()), std::invalid_argument);
    }
}

TEST_CASE("reports serialize with fixed key order") {
    Verdict v;
    v.bounds = small_bounds();
    v.add_witness({"(hole)", "(seq (hole) unit)", "backtranslation", "ok"});
    v.add_counterexample({"(succ (hole))", "", "", "boom"});
    v.stats.contexts = 7;
    v.stats.traces = 9;
    v.finalize();

    nlohmann::ordered_json j = report_json("rsp", v);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"criterion", "bounds", "status", "witnesses",
                                           "counterexamples", "stats"});
    CHECK(j["criterion"] == "rsp");
    CHECK(j["status"] == "counterexample");
    CHECK(j["bounds"]["ctx_size"] == 4);
    CHECK(j["witnesses"][0]["kind"] == "backtranslation");
    CHECK(j["counterexamples"][0]["target_ctx"] == "(succ (hole))");
    CHECK(j["counterexamples"][0].contains("source_ctx") == false);
    CHECK(j["stats"]["contexts"] == 7);

    SECTION("write_report produces the same bytes as the in-memory dump") {
        std::string path = "report_test_tmp.json";
        write_report(path, "rsp", v);
        std::ifstream in(path, std::ios::binary);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        CHECK(text == j.dump(2) + "\n");
        std::remove(path.c_str());
    }
}

TEST_CASE("worker count does not change any verdict") {
    TermStore st;
    Bounds b = small_bounds();
    const Term* p = src(st, "(lit 1)");

    RealPair sec(st, t_nat(), CompilerId::Secure);
    Verdict one = check_rsp(sec, p, b, 1);
    Verdict two = check_rsp(sec, p, b, 2);
    CHECK(same_verdict(one, two));

    RealPair bad(st, t_nat(), CompilerId::Backdoor);
    Verdict bone = check_rsp(bad, p, b, 1);
    Verdict btwo = check_rsp(bad, p, b, 2);
    CHECK(same_verdict(bone, btwo));
    CHECK(bone.status == Status::Counterexample);

    Verdict sone = check_strong_rhp(sec, std::vector<const Term*>{p}, b, 1);
    Verdict stwo = check_strong_rhp(sec, std::vector<const Term*>{p}, b, 2);
    CHECK(same_verdict(sone, stwo));
}
