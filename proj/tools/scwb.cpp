// scwb — secure-compilation workbench command line.
//
// Commands
//   run            execute a whole source program on a fixed input stream
//   check          run a bounded criterion check and write a JSON report
//   classify       classify a property file with the bounded classifiers
//   backtranslate  back-translate a target context to a source context
//   enumerate      list contexts in canonical order
//
// Exit codes: 0 pass, 1 counterexample, 2 inconclusive, 3 usage or input error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scwb/criteria.hpp"

namespace {

using namespace scwb;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

const Term* load_term(TermStore& store, const std::string& path, const TermSyntax& syn) {
    return parse_term(store, parse_sexpr(read_file(path)), syn);
}

std::vector<uint32_t> parse_stream(const std::string& text) {
    std::vector<uint32_t> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (item.empty()) throw std::runtime_error("empty entry in stream '" + text + "'");
        std::size_t used = 0;
        unsigned long v = std::stoul(item, &used);
        if (used != item.size() || v > UINT32_MAX)
            throw std::runtime_error("bad stream value '" + item + "'");
        out.push_back(static_cast<uint32_t>(v));
    }
    return out;
}

const Type* parse_type_text(const std::string& text) { return parse_type(parse_sexpr(text)); }

// Alphabet for the hyperproperty classifiers: context inputs and program
// outputs up to value_cap. The defaults (cap 0, depth 2, both markers) give a
// 14-observation universe, the largest the subset-enumeration guard admits.
std::vector<Event> classification_alphabet(uint32_t value_cap) {
    std::vector<Event> a;
    for (uint32_t v = 0; v <= value_cap; ++v) {
        a.push_back(Event{EventKind::In, Origin::Ctx, v});
        a.push_back(Event{EventKind::Out, Origin::Prog, v});
    }
    return a;
}

std::string stem_of(const std::string& path) { return std::filesystem::path(path).stem().string(); }

Hyperproperty load_hyper(const std::string& path) {
    return parse_hyper(parse_sexpr(read_file(path)), stem_of(path));
}

// Checkable class tags a property file may declare: safety, subset-closed,
// <k>-hypersafety, each optionally negated with a not- prefix. Tags that name
// no bounded classifier (liveness, hyperproperty, ...) pass unchecked.
void validate_class_tags(const Hyperproperty& h, const std::vector<Obs>& hyper_universe,
                         const std::vector<Obs>& safety_universe) {
    for (const std::string& raw : h.class_tags) {
        bool want = true;
        std::string tag = raw;
        if (tag.rfind("not-", 0) == 0) {
            want = false;
            tag = tag.substr(4);
        }
        bool got;
        if (tag == "safety") {
            got = h.base.has_value() && is_safety_bounded(*h.base, safety_universe);
        } else if (tag == "subset-closed") {
            got = is_subset_closed_bounded(h, hyper_universe);
        } else if (tag.size() > 12 && tag.substr(tag.size() - 12) == "-hypersafety") {
            std::size_t used = 0;
            std::string digits = tag.substr(0, tag.size() - 12);
            unsigned long k = std::stoul(digits, &used);
            if (used != digits.size() || k == 0)
                throw std::runtime_error("bad hypersafety tag '" + raw + "' on '" + h.name + "'");
            got = is_k_hypersafety_bounded(h, static_cast<uint32_t>(k), hyper_universe);
        } else {
            continue;
        }
        if (got != want)
            throw std::runtime_error("property '" + h.name + "' declares class '" + raw +
                                     "' but the bounded classifier disagrees");
    }
}

struct Opts {
    Bounds bounds;
    unsigned workers = default_workers();
    std::string compiler = "secure";
    std::string criterion;
    std::string program;
    std::string corpus;
    std::string export_type;
    std::string out = "report.json";
    std::vector<std::string> properties;
    std::string whole;
    std::string stream_text;
    std::string context;
    uint32_t classify_events = 2;
    uint32_t classify_values = 0;
};

void add_bounds_flags(CLI::App* cmd, Bounds& b) {
    cmd->add_option("--fuel", b.fuel, "evaluation step budget per run");
    cmd->add_option("--stream-len", b.stream_len, "maximum input stream length");
    cmd->add_option("--val-cap", b.value_cap, "maximum literal value in enumerations");
    cmd->add_option("--event-bound", b.event_bound, "maximum events recorded per run");
    cmd->add_option("--max-ctx-size", b.ctx_size, "maximum context term size");
}

int cmd_run(const Opts& o) {
    TermStore store;
    const Term* whole = load_term(store, o.whole, TermSyntax{true, Origin::Prog});
    Obs obs = eval_trace_src(whole, parse_stream(o.stream_text), o.bounds);
    std::cout << show_obs(obs) << "\n";
    return 0;
}

std::vector<std::string> corpus_files(const std::string& dir) {
    std::vector<std::string> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".sexp")
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("no .sexp files in '" + dir + "'");
    return files;
}

int finish_check(const std::string& criterion, const Verdict& v, const std::string& out_path) {
    write_report(out_path, criterion, v);
    std::cout << criterion << ": " << status_name(v.status) << " (contexts=" << v.stats.contexts
              << " traces=" << v.stats.traces << " inconclusive=" << v.stats.inconclusive << ")\n";
    std::cout << "report: " << out_path << "\n";
    return verdict_exit_code(v);
}

int cmd_check(const Opts& o) {
    CompilerId id = parse_compiler(o.compiler);
    TermStore store;

    if (o.criterion == "rsp" || o.criterion == "rtp" || o.criterion == "rhp") {
        if (o.program.empty()) throw std::runtime_error("--criterion " + o.criterion + " needs --program");
        const Term* p = load_term(store, o.program, TermSyntax{true, Origin::Prog});
        const Type* ty = validate_src_program(p);
        if (!o.export_type.empty() && parse_type_text(o.export_type) != ty)
            throw std::runtime_error("--export-type does not match the program's type");
        RealPair pair(store, ty, id);
        CriterionChecker<RealPair> ck(pair, p, o.bounds, o.workers);
        Verdict v = o.criterion == "rsp" ? ck.rsp() : o.criterion == "rtp" ? ck.rtp() : ck.rhp();
        return finish_check(o.criterion, v, o.out);
    }
    if (o.criterion == "strong-rhp") {
        if (o.corpus.empty()) throw std::runtime_error("--criterion strong-rhp needs --corpus");
        std::vector<const Term*> corpus;
        for (const std::string& f : corpus_files(o.corpus))
            corpus.push_back(load_term(store, f, TermSyntax{true, Origin::Prog}));
        const Type* ty = corpus_export_type(corpus);
        if (!o.export_type.empty() && parse_type_text(o.export_type) != ty)
            throw std::runtime_error("--export-type does not match the corpus type");
        RealPair pair(store, ty, id);
        Verdict v = check_strong_rhp(pair, corpus, o.bounds, o.workers);
        return finish_check(o.criterion, v, o.out);
    }
    if (o.criterion == "class") {
        if (o.program.empty()) throw std::runtime_error("--criterion class needs --program");
        if (o.properties.empty()) throw std::runtime_error("--criterion class needs at least one --property");
        const Term* p = load_term(store, o.program, TermSyntax{true, Origin::Prog});
        const Type* ty = validate_src_program(p);
        std::vector<Obs> hyper_universe =
            make_universe(o.classify_events, classification_alphabet(o.classify_values)).members;
        std::vector<Obs> safety_universe = make_universe(3, full_alphabet(1)).members;
        std::vector<Hyperproperty> suite;
        for (const std::string& f : o.properties) {
            Hyperproperty h = load_hyper(f);
            validate_class_tags(h, hyper_universe, safety_universe);
            suite.push_back(std::move(h));
        }
        RealPair pair(store, ty, id);
        Verdict v = check_suite_preservation(pair, p, suite, o.bounds);
        return finish_check(o.criterion, v, o.out);
    }
    throw std::runtime_error("unknown criterion '" + o.criterion +
                             "' (expected rsp, rtp, rhp, strong-rhp, or class)");
}

int cmd_classify(const Opts& o) {
    Hyperproperty h = load_hyper(o.properties.at(0));
    std::vector<Obs> hyper_universe =
        make_universe(o.classify_events, classification_alphabet(o.classify_values)).members;
    std::vector<Obs> safety_universe = make_universe(3, full_alphabet(1)).members;
    bool safety = h.base.has_value() && is_safety_bounded(*h.base, safety_universe);
    bool subset_closed = is_subset_closed_bounded(h, hyper_universe);
    bool two_hs = is_k_hypersafety_bounded(h, 2, hyper_universe);
    std::cout << "safety: " << (safety ? "true" : "false") << "\n"
              << "subset-closed: " << (subset_closed ? "true" : "false") << "\n"
              << "2-hypersafety: " << (two_hs ? "true" : "false") << "\n";
    return 0;
}

int cmd_backtranslate(const Opts& o) {
    TermStore store;
    const Term* ct = load_term(store, o.context, TermSyntax{false, Origin::Ctx});
    const Term* cs = backtranslate_context(store, ct, parse_type_text(o.export_type));
    std::cout << print_term(cs, true) << "\n";
    return 0;
}

int cmd_enumerate(const Opts& o) {
    uint64_t total = 0;
    if (o.export_type.empty()) {
        TgtContextEnum en(o.bounds.ctx_size, o.bounds.value_cap);
        en.foreach([&](const Term* c) {
            std::cout << print_term(c, false) << "\n";
            ++total;
            return true;
        });
    } else {
        SrcContextEnum en(parse_type_text(o.export_type), o.bounds.ctx_size, o.bounds.value_cap);
        en.foreach([&](const Term* c) {
            std::cout << print_term(c, true) << "\n";
            ++total;
            return true;
        });
    }
    std::cout << "total: " << total << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"secure-compilation workbench"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "read defaults from a config file; flags override it");

    Opts o;

    CLI::App* run = app.add_subcommand("run", "execute a whole source program on a fixed input stream");
    run->add_option("--whole", o.whole, "whole program file")->required();
    run->add_option("--stream", o.stream_text, "comma-separated input values, empty for none")
        ->expected(0, 1);
    add_bounds_flags(run, o.bounds);

    CLI::App* check = app.add_subcommand("check", "run a bounded criterion check and write a JSON report");
    check->add_option("--criterion", o.criterion, "rsp, rtp, rhp, strong-rhp, or class")->required();
    check->add_option("--compiler", o.compiler, "secure, noprotect, or backdoor");
    check->add_option("--program", o.program, "source program file (rsp, rtp, rhp, class)");
    check->add_option("--corpus", o.corpus, "directory of source programs (strong-rhp)");
    check->add_option("--property", o.properties, "property file, repeatable (class)");
    check->add_option("--export-type", o.export_type, "expected export type, verified if given");
    check->add_option("--workers", o.workers, "parallel workers for context sweeps");
    check->add_option("--out", o.out, "report path");
    add_bounds_flags(check, o.bounds);

    CLI::App* classify = app.add_subcommand("classify", "classify a property with the bounded classifiers");
    classify->add_option("--property", o.properties, "property file")->required()->expected(1);
    classify->add_option("--event-bound", o.classify_events, "classification universe event depth");
    classify->add_option("--val-cap", o.classify_values, "classification universe value cap");

    CLI::App* backtranslate =
        app.add_subcommand("backtranslate", "back-translate a target context to a source context");
    backtranslate->add_option("--context", o.context, "target context file")->required();
    backtranslate->add_option("--export-type", o.export_type, "export type at the hole")->required();

    CLI::App* enumerate = app.add_subcommand("enumerate", "list contexts in canonical order");
    enumerate->add_option("--export-type", o.export_type, "enumerate source contexts at this type "
                                                          "(target contexts when omitted)");
    enumerate->add_option("--max-ctx-size", o.bounds.ctx_size, "maximum context term size");
    enumerate->add_option("--val-cap", o.bounds.value_cap, "maximum literal value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }

    try {
        if (run->parsed()) return cmd_run(o);
        if (check->parsed()) return cmd_check(o);
        if (classify->parsed()) return cmd_classify(o);
        if (backtranslate->parsed()) return cmd_backtranslate(o);
        if (enumerate->parsed()) return cmd_enumerate(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
