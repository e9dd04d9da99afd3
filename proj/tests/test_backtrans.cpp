#include <catch2/catch_amalgamated.hpp>

#include "scwb/backtrans.hpp"
#include "scwb/compile.hpp"
#include "scwb/srclang.hpp"
#include "scwb/tgtlang.hpp"

using namespace scwb;

namespace {

const TermSyntax kTgtCtx{false, Origin::Ctx};
const TermSyntax kSrcProg{true, Origin::Prog};

const Term* tctx(TermStore& st, const std::string& text) {
    return parse_term(st, parse_sexpr(text), kTgtCtx);
}

} // namespace

TEST_CASE("the universal type") {
    CHECK(print_type(universal_type()) ==
          "(mu U (+ unit (+ nat (+ (* U U) (+ (+ U U) (-> U U))))))");
    CHECK(universal_type() == universal_type());
}

TEST_CASE("back-translated contexts are well-typed source contexts") {
    TermStore st;
    const Type* natfun = t_arrow(t_nat(), t_nat());
    struct Case {
        const char* ctx;
        const Type* ty;
    };
    for (Case c : {Case{"(hole)", t_nat()}, Case{"(write (hole))", t_nat()},
                   Case{"(app (hole) (lit 2))", natfun}, Case{"(app (hole) (read))", natfun},
                   Case{"(fst (hole))", t_nat()}, Case{"(seq (hole) unit)", t_unit()},
                   Case{"(ifz (hole) (write (lit 1)) (write (lit 0)))", t_nat()},
                   Case{"(case (hole) (x (write x)) (y unit))", t_nat()},
                   Case{"(write (fst (hole)))", t_prod(t_nat(), t_nat())},
                   Case{"(lam z (hole))", t_nat()}}) {
        const Term* cs = backtranslate_context(st, tctx(st, c.ctx), c.ty);
        CHECK_NOTHROW(validate_src_context(cs, c.ty));
    }
}

TEST_CASE("back-translation is deterministic") {
    TermStore a, b;
    std::string ra = print_term(backtranslate_context(a, tctx(a, "(app (hole) (lit 2))"),
                                                      t_arrow(t_nat(), t_nat())), true);
    std::string rb = print_term(backtranslate_context(b, tctx(b, "(app (hole) (lit 2))"),
                                                      t_arrow(t_nat(), t_nat())), true);
    CHECK(ra == rb);
}

TEST_CASE("the bare hole back-translates to an export-to-universal adapter") {
    TermStore st;
    std::string s = print_term(backtranslate_context(st, tctx(st, "(hole)"), t_nat()), true);
    CHECK(s.substr(0, 30) == "(seq (app (lam (x$0 nat) (fold");
    CHECK(s.substr(s.size() - 14) == " (hole)) unit)");
}

TEST_CASE("emulation: the compiled program under the target context matches"
          " the source program under the back-translated context") {
    TermStore st;
    Bounds b;
    auto emu = [&](const char* ctext, const char* ptext) {
        const Term* ct = tctx(st, ctext);
        const Term* p = parse_term(st, parse_sexpr(ptext), kSrcProg);
        const Type* ty = validate_src_program(p);
        TraceSet tgt = trace_set_tgt(ct, compile(st, p, CompilerId::Secure), b);
        TraceSet srcv = trace_set_src(backtranslate_context(st, ct, ty), p, b);
        REQUIRE(tgt.conclusive());
        REQUIRE(srcv.conclusive());
        CHECK(tgt.same_members(srcv));
        return tgt;
    };

    SECTION("values flow out to the context") {
        TraceSet ts = emu("(write (hole))", "(lit 2)");
        REQUIRE(ts.members.size() == 1);
        CHECK(show_obs(ts.members[0]) == "[Out(2,ctx)] term");
    }
    SECTION("traps on the wrong shape become silent divergence on both sides") {
        TraceSet ts = emu("(fst (hole))", "(lit 2)");
        REQUIRE(ts.members.size() == 1);
        CHECK(show_obs(ts.members[0]) == "[] incomplete");
        emu("(case (hole) (x (write x)) (y unit))", "(lit 1)");
    }
    SECTION("functions are called with context-chosen arguments") {
        TraceSet ts = emu("(app (hole) (read))", "(lam (x nat) (seq (write x) x))");
        REQUIRE(ts.members.size() == 4);
        CHECK(show_obs(ts.members[0]) == "[In(0,ctx) Out(0,prog)] term");
        CHECK(show_obs(ts.members[3]) == "[In(3,ctx) Out(3,prog)] term");
    }
    SECTION("program I/O passes through unchanged") {
        TraceSet ts = emu("(seq (hole) unit)", "(seq (write (read)) unit)");
        REQUIRE(ts.members.size() == 4);
        CHECK(show_obs(ts.members[0]) == "[In(0,prog) Out(0,prog)] term");
    }
    SECTION("results are observable through arithmetic and branching") {
        TraceSet ts = emu("(write (app (hole) (lit 1)))", "(lam (x nat) (succ x))");
        REQUIRE(ts.members.size() == 1);
        CHECK(show_obs(ts.members[0]) == "[Out(2,ctx)] term");
        emu("(ifz (hole) (write (lit 1)) (write (lit 0)))", "(lit 0)");
    }
}

TEST_CASE("back-translation refuses contexts without exactly one hole") {
    TermStore st;
    CHECK_THROWS_AS(backtranslate_context(st, tctx(st, "(write (lit 0))"), t_nat()),
                    std::exception);
}
