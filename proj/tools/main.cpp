#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "fusible/closure.hpp"
#include "fusible/embedding.hpp"
#include "fusible/generator.hpp"
#include "fusible/m_recursion.hpp"
#include "fusible/ordinal.hpp"
#include "fusible/veblen_star.hpp"

using namespace fusible;
using nlohmann::ordered_json;

namespace {

unsigned long long env_work_budget(unsigned long long fallback) {
    if (const char* v = std::getenv("FUSIBLE_WORK_BUDGET")) {
        try {
            return std::stoull(v);
        } catch (...) {
            throw ParseError("FUSIBLE_WORK_BUDGET is not a number: " + std::string(v));
        }
    }
    return fallback;
}

std::vector<Rational> parse_rational_list(const std::string& csv) {
    std::vector<Rational> out;
    size_t start = 0;
    while (start <= csv.size()) {
        size_t comma = csv.find(',', start);
        std::string item = csv.substr(start, comma == std::string::npos ? comma : comma - start);
        if (!item.empty())
            out.push_back(Rational::parse(item));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return out;
}

struct SystemSpec {
    std::string name = "f2";   // f<k> or f-le-<k>
    std::string coeffs;        // custom: comma separated coefficients
    std::string constant = "0";
    std::string pool = "0";
};

GeneratorSystem make_system(const SystemSpec& spec) {
    if (!spec.coeffs.empty()) {
        LinearFunction g(parse_rational_list(spec.coeffs), Rational::parse(spec.constant));
        return GeneratorSystem({g}, parse_rational_list(spec.pool));
    }
    const std::string& s = spec.name;
    auto arity_of = [&](size_t prefix) -> unsigned {
        int v = std::stoi(s.substr(prefix));
        if (v < 1)
            throw ParseError("bad system name: " + s);
        return static_cast<unsigned>(v);
    };
    if (s.rfind("f-le-", 0) == 0)
        return GeneratorSystem::fusible_up_to(arity_of(5));
    if (s.rfind("f", 0) == 0 && s.size() > 1 && std::isdigit(static_cast<unsigned char>(s[1])))
        return GeneratorSystem::fusible(arity_of(1));
    throw ParseError("unknown system '" + s + "': use f<k>, f-le-<k>, or --coeffs");
}

SuccessorEngine make_engine(const SystemSpec& spec, unsigned long long budget, size_t scan_cap) {
    GeneratorSystem sys = make_system(spec);
    if (sys.functions().size() != 1)
        throw DomainError("the successor engine handles systems with a single function");
    LinearFunction g = sys.functions()[0].collapse_zero_coefficients();
    SuccessorEngine::Options opt;
    opt.work_budget = budget;
    opt.pred_scan_cap = scan_cap;
    return SuccessorEngine(build_closure(g, sys.constants()), opt);
}

ordered_json stats_json(const SuccessorEngine& eng) {
    const auto& st = eng.stats();
    return ordered_json{{"succ_calls", st.succ_calls},
                        {"built_succ_calls", st.built_succ_calls},
                        {"pred_calls", st.pred_calls},
                        {"weak_pred_calls", st.weak_pred_calls},
                        {"work", st.work}};
}

void add_system_flags(CLI::App* cmd, SystemSpec& spec) {
    cmd->add_option("--system", spec.name, "named system: f<k> or f-le-<k>");
    cmd->add_option("--coeffs", spec.coeffs, "custom linear function coefficients, e.g. 1/2,1/2");
    cmd->add_option("--const", spec.constant, "custom linear function constant");
    cmd->add_option("--p", spec.pool, "constant pool, e.g. 0,1");
}

int run(int argc, char** argv) {
    CLI::App app{"exact fusible-number, closure-membership, and ordinal-notation toolkit"};
    app.require_subcommand(1);
    unsigned long long default_budget = env_work_budget(MEngine::default_work_budget());

    // ---- m ----
    auto* m_cmd = app.add_subcommand("m", "evaluate M_n with its trace");
    unsigned m_n = 2;
    std::string m_x = "0";
    unsigned long long m_budget = default_budget;
    bool m_table = false;
    m_cmd->add_option("--n", m_n, "arity, n >= 2");
    m_cmd->add_option("--x", m_x, "input rational p/q");
    m_cmd->add_option("--work-budget", m_budget, "memo-miss budget");
    m_cmd->add_flag("--table", m_table, "plain text instead of JSON");
    bool m_json = false;
    m_cmd->add_flag("--json", m_json, "JSON output (default)");
    m_cmd->callback([&] {
        MEngine eng(m_n, m_budget);
        MTrace tr = eng.trace(Rational::parse(m_x));
        if (m_table) {
            std::cout << "M_" << m_n << "(" << tr.x << ") = " << tr.output << "\n";
            for (size_t i = 0; i < tr.t.size(); ++i)
                std::cout << "t_" << i << " = " << tr.t[i] << "\n";
        } else {
            std::cout << tr.to_json() << "\n";
        }
    });

    // ---- generate ----
    auto* gen_cmd = app.add_subcommand("generate", "breadth-first fragment of F(G,P)");
    SystemSpec gen_spec;
    unsigned gen_budget = 4;
    std::string gen_bound;
    size_t gen_cap = 0;
    unsigned long long gen_work = 50'000'000;
    bool gen_table = false;
    add_system_flags(gen_cmd, gen_spec);
    gen_cmd->add_option("--budget", gen_budget, "construction rounds");
    gen_cmd->add_option("--bound", gen_bound, "keep only values <= bound");
    gen_cmd->add_option("--cap", gen_cap, "keep at most this many (smallest) values");
    gen_cmd->add_option("--work-limit", gen_work, "candidate evaluation limit");
    gen_cmd->add_flag("--table", gen_table, "plain text instead of JSON");
    bool gen_json = false;
    gen_cmd->add_flag("--json", gen_json, "JSON output (default)");
    gen_cmd->callback([&] {
        GeneratorSystem sys = make_system(gen_spec);
        GenerateOptions opt;
        opt.budget = gen_budget;
        if (!gen_bound.empty())
            opt.bound = Rational::parse(gen_bound);
        if (gen_cap > 0)
            opt.cap = gen_cap;
        opt.work_limit = gen_work;
        Fragment frag = generate(sys, opt);
        if (gen_table) {
            for (size_t i = 0; i < frag.values.size(); ++i)
                std::cout << frag.values[i] << "\t" << frag.witnesses[i].serialization() << "\n";
        } else {
            std::cout << fragment_to_json(sys, frag) << "\n";
        }
    });

    // ---- succ / pred / weakpred / member ----
    struct EngineArgs {
        SystemSpec spec;
        std::string r = "0";
        unsigned long long budget;
        size_t scan_cap = 200'000;
        bool stats = false;
    };
    auto add_engine_cmd = [&](const char* name, const char* help) {
        auto* cmd = app.add_subcommand(name, help);
        auto args = std::make_shared<EngineArgs>();
        args->budget = default_budget;
        add_system_flags(cmd, args->spec);
        cmd->add_option("--r", args->r, "query rational (succ/weakpred also accept -inf)");
        cmd->add_option("--work-budget", args->budget, "engine work budget");
        cmd->add_option("--scan-cap", args->scan_cap, "enumeration scan cap for pred");
        cmd->add_flag("--stats", args->stats, "include call-count statistics");
        return std::make_pair(cmd, args);
    };

    auto [succ_cmd, succ_args] = add_engine_cmd("succ", "least element of F above r");
    succ_cmd->callback([args = succ_args] {
        auto eng = make_engine(args->spec, args->budget, args->scan_cap);
        ordered_json j{{"succ", eng.succ(ExtRational::parse(args->r)).str()}};
        if (args->stats)
            j["stats"] = stats_json(eng);
        std::cout << j.dump() << "\n";
    });

    auto [pred_cmd, pred_args] = add_engine_cmd("pred", "closure predecessor of a successor element");
    pred_cmd->callback([args = pred_args] {
        auto eng = make_engine(args->spec, args->budget, args->scan_cap);
        ordered_json j{{"pred", eng.pred(Rational::parse(args->r)).str()}};
        if (args->stats)
            j["stats"] = stats_json(eng);
        std::cout << j.dump() << "\n";
    });

    auto [weak_cmd, weak_args] = add_engine_cmd("weakpred", "weak predecessor in the closure");
    weak_cmd->callback([args = weak_args] {
        auto eng = make_engine(args->spec, args->budget, args->scan_cap);
        ordered_json j{{"weak_pred", eng.weak_pred(ExtRational::parse(args->r)).str()}};
        if (args->stats)
            j["stats"] = stats_json(eng);
        std::cout << j.dump() << "\n";
    });

    auto [member_cmd, member_args] = add_engine_cmd("member", "decide membership in the closure");
    member_cmd->callback([args = member_args] {
        auto eng = make_engine(args->spec, args->budget, args->scan_cap);
        ordered_json j{{"in_closure", eng.is_in_closure(Rational::parse(args->r))}};
        if (args->stats)
            j["stats"] = stats_json(eng);
        std::cout << j.dump() << "\n";
    });

    // ---- closure-build ----
    auto* cb_cmd = app.add_subcommand("closure-build", "derived fixed-point functions of cl(g)");
    SystemSpec cb_spec;
    add_system_flags(cb_cmd, cb_spec);
    cb_cmd->callback([&] {
        GeneratorSystem sys = make_system(cb_spec);
        if (sys.functions().size() != 1)
            throw DomainError("closure-build expects a single function");
        LinearFunction g = sys.functions()[0].collapse_zero_coefficients();
        std::cout << build_closure(g, sys.constants()).to_json() << "\n";
    });

    // ---- ord ----
    auto* ord_cmd = app.add_subcommand("ord", "ordinal notation operations");
    ord_cmd->require_subcommand(1);
    std::string ord_a, ord_b;

    auto* ord_cmp = ord_cmd->add_subcommand("cmp", "compare two normal-form terms");
    ord_cmp->add_option("a", ord_a)->required();
    ord_cmp->add_option("b", ord_b)->required();
    ord_cmp->callback([&] {
        auto a = OrdinalTerm::parse_exact(ord_a), b = OrdinalTerm::parse_exact(ord_b);
        std::cout << ordered_json{{"order", order_name(compare(a, b))}}.dump() << "\n";
    });

    auto* ord_sum = ord_cmd->add_subcommand("sum", "natural sum");
    ord_sum->add_option("a", ord_a)->required();
    ord_sum->add_option("b", ord_b)->required();
    ord_sum->callback([&] {
        auto r = nat_sum(OrdinalTerm::parse_exact(ord_a), OrdinalTerm::parse_exact(ord_b));
        std::cout << ordered_json{{"result", r.str()}}.dump() << "\n";
    });

    auto* ord_prod = ord_cmd->add_subcommand("prod", "natural product");
    ord_prod->add_option("a", ord_a)->required();
    ord_prod->add_option("b", ord_b)->required();
    ord_prod->callback([&] {
        auto r = nat_prod(OrdinalTerm::parse_exact(ord_a), OrdinalTerm::parse_exact(ord_b));
        std::cout << ordered_json{{"result", r.str()}}.dump() << "\n";
    });

    auto* ord_cls = ord_cmd->add_subcommand("classify", "zero / successor / limit");
    ord_cls->add_option("a", ord_a)->required();
    ord_cls->callback([&] {
        auto k = classify_limit(OrdinalTerm::parse_exact(ord_a));
        std::cout << ordered_json{{"kind", ordinal_kind_name(k)}}.dump() << "\n";
    });

    auto* ord_norm = ord_cmd->add_subcommand("norm", "normalize a term");
    ord_norm->add_option("a", ord_a)->required();
    ord_norm->callback([&] {
        std::cout << ordered_json{{"result", OrdinalTerm::parse(ord_a).str()}}.dump() << "\n";
    });

    auto* ord_ot = ord_cmd->add_subcommand("order-type", "reported order type of a family");
    std::string ot_kind = "fusible";
    unsigned ot_n = 2;
    ord_ot->add_option("--kind", ot_kind, "fusible or continuous");
    ord_ot->add_option("--n", ot_n, "arity");
    ord_ot->callback([&] {
        OrderTypeKind k = ot_kind == "continuous" ? OrderTypeKind::continuous
                                                  : OrderTypeKind::fusible;
        std::cout << ordered_json{{"result", expected_order_type(k, ot_n).str()}}.dump() << "\n";
    });

    // ---- star-enum (also reachable as `ord enum`) ----
    unsigned star_n = 3, star_bound = 2;
    bool star_table = false;
    auto add_star_enum = [&](CLI::App* parent, const char* name) {
        auto* cmd = parent->add_subcommand(name, "sorted star terms up to a size bound");
        cmd->add_option("--n", star_n, "constructor arity, n >= 3");
        cmd->add_option("--size-bound", star_bound, "max applications");
        cmd->add_flag("--table", star_table, "one term per line");
        static bool star_json = false;
        cmd->add_flag("--json", star_json, "JSON output (default)");
        cmd->callback([&] {
            auto terms = star_enumerate(star_n, star_bound);
            if (star_table) {
                for (const auto& t : terms)
                    std::cout << t.str() << "\n";
            } else {
                ordered_json arr = ordered_json::array();
                for (const auto& t : terms)
                    arr.push_back(t.str());
                std::cout << ordered_json{{"terms", arr}}.dump() << "\n";
            }
        });
        return cmd;
    };
    add_star_enum(&app, "star-enum");
    add_star_enum(ord_cmd, "enum");

    // ---- embed ----
    auto* emb_cmd = app.add_subcommand("embed", "rational embedding of the star-term order");
    unsigned emb_n = 3;
    size_t emb_terms = 50;
    emb_cmd->add_option("--n", emb_n, "constructor arity, n >= 3");
    emb_cmd->add_option("--terms", emb_terms, "enumerated prefix length");
    emb_cmd->callback([&] {
        std::cout << build_embedding(emb_n, emb_terms).to_json() << "\n";
    });

    // ---- demo ----
    auto* demo_cmd = app.add_subcommand(
        "demo", "generate from the embedded grid function and check the order isomorphism");
    unsigned demo_n = 3, demo_budget = 6;
    size_t demo_terms = 50;
    demo_cmd->add_option("--n", demo_n, "constructor arity, n >= 3");
    demo_cmd->add_option("--terms", demo_terms, "enumerated prefix length");
    demo_cmd->add_option("--budget", demo_budget, "construction rounds");
    demo_cmd->callback([&] {
        std::cout << grid_generation_demo(demo_n, demo_terms, demo_budget).to_json() << "\n";
    });

    // ---- check-invariants ----
    auto* inv_cmd = app.add_subcommand("check-invariants",
                                       "exact identities of the M_n recursion on the stock grid");
    unsigned inv_n = 2;
    unsigned long long inv_budget = default_budget;
    inv_cmd->add_option("--n", inv_n, "arity, n >= 2");
    inv_cmd->add_option("--work-budget", inv_budget, "memo-miss budget");
    inv_cmd->callback([&] {
        MEngine eng(inv_n, inv_budget);
        auto rep = check_m_invariants(eng, default_invariant_samples(inv_n));
        std::cout << rep.to_json() << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 64;
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
