// Command-line front end: formal-group-law arithmetic, chain-poset
// enumeration, ring display, inverse-limit computation, the cyclic-tower
// pipeline, and the cross-validation between the two pipelines.
//
// Exit codes: 0 success, 2 validation/usage failure (including unstable
// results without --allow-unstable), 3 cross-check mismatch.

#include "CLI11.hpp"
#include "json.hpp"

#include "cobord/limit.hpp"
#include "cobord/zpn.hpp"

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace cobord;
using ojson = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------- options

struct CommonOpts {
    int D = 3, E = 2, N = 4, I = 3, P = 2;
    std::string fgl = "universal-integral";
    long mod_prime = 2;
    std::string format = "table";
    int jobs = 1;
    int steps = 2;
    bool allow_unstable = false;
};

void add_param_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--D", o.D, "base-degree bound: coefficients live in degrees <= 2D")
        ->check(CLI::Range(0, 16));
    cmd->add_option("--laurent,-E", o.E, "Laurent box: invertible exponents range over [-E, E]")
        ->check(CLI::Range(1, 64));
    cmd->add_option("--precision,-N", o.N, "series precision: completed-block exponent bound")
        ->check(CLI::Range(1, 64));
    cmd->add_option("--classes,-I", o.I, "coefficient-class depth per representation")
        ->check(CLI::Range(1, 16));
    cmd->add_option("--poly,-P", o.P, "total exponent bound across coefficient classes")
        ->check(CLI::Range(0, 16));
}

void add_law_flags(CLI::App* cmd, CommonOpts& o, const char* name = "--fgl") {
    cmd->add_option(name, o.fgl,
                    "law kind: additive | multiplicative | universal-rational | "
                    "universal-integral | mod-p")
        ->check(CLI::IsMember({"additive", "multiplicative", "universal-rational",
                               "universal-integral", "mod-p"}));
    cmd->add_option("--mod-prime", o.mod_prime, "prime for the mod-p law")->check(CLI::Range(2L, 97L));
}

void add_output_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "table"}));
}

void add_run_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--jobs", o.jobs, "concurrent per-degree jobs")->check(CLI::Range(1, 256));
    cmd->add_option("--steps", o.steps, "stabilization schedule length")->check(CLI::Range(1, 8));
    cmd->add_flag("--allow-unstable", o.allow_unstable,
                  "report results even when the schedule did not stabilize");
}

std::pair<int, int> parse_degrees(const std::string& text) {
    size_t dots = text.find("..");
    if (dots == std::string::npos) {
        int d = std::stoi(text);
        return {d, d};
    }
    int lo = std::stoi(text.substr(0, dots));
    int hi = std::stoi(text.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("degree range is empty: " + text);
    return {lo, hi};
}

Flavor flavor_from_name(const std::string& s) {
    if (s == "P" || s == "full") return Flavor::Full;
    if (s == "P'" || s == "pairs") return Flavor::Pairs;
    if (s == "P''" || s == "reduced") return Flavor::Reduced;
    throw std::invalid_argument("unknown flavor: " + s + " (use P, P', P'' or full, pairs, reduced)");
}

FormalGroupLaw law_from_opts(const CommonOpts& o) {
    BaseKind kind = base_kind_from_name(o.fgl);
    long p = kind == BaseKind::ModPReduced ? o.mod_prime : 0;
    return make_law(kind, 2 * o.D, o.D + 1, p);
}

TruncParams trunc_from_opts(const CommonOpts& o) { return TruncParams{o.D, o.E, o.N, o.I, o.P}; }

// ---------------------------------------------------------------- rendering

ojson params_json(const TruncParams& tp) {
    return ojson{{"D", tp.D}, {"E", tp.E}, {"N", tp.N}, {"I", tp.I}, {"P", tp.P}};
}

ojson config_json(const std::string& subcommand, const CommonOpts& o) {
    ojson c;
    c["subcommand"] = subcommand;
    c["fgl"] = o.fgl;
    if (o.fgl == "mod-p") c["mod_prime"] = o.mod_prime;
    c["params"] = params_json(trunc_from_opts(o));
    c["format"] = o.format;
    c["deterministic"] = true;
    return c;
}

ojson factors_json(const std::vector<Int>& v) {
    ojson a = ojson::array();
    for (const Int& x : v) a.push_back(x.get_str());
    return a;
}

std::string factors_compact(const std::vector<Int>& v) {
    if (v.empty()) return "-";
    std::string tors;
    size_t zeros = 0;
    for (const Int& x : v) {
        if (x == 0) {
            ++zeros;
        } else {
            if (!tors.empty()) tors += ",";
            tors += x.get_str();
        }
    }
    std::string s = tors;
    if (zeros) {
        if (!s.empty()) s += ",";
        s += "0^" + std::to_string(zeros);
    }
    return s;
}

void emit(const ojson& doc, const CommonOpts& o,
          const std::function<void(std::ostream&)>& table_writer) {
    if (o.format == "json") {
        std::cout << doc.dump(2) << "\n";
    } else {
        table_writer(std::cout);
    }
}

std::string config_line(const ojson& config) {
    std::ostringstream os;
    os << "config:";
    for (const auto& [key, value] : config.items()) {
        if (key == "params") {
            for (const auto& [pk, pv] : value.items()) os << " " << pk << "=" << pv.dump();
        } else {
            os << " " << key << "=" << (value.is_string() ? value.get<std::string>() : value.dump());
        }
    }
    return os.str();
}

const char* mode_name(VarMode m) {
    switch (m) {
        case VarMode::Polynomial: return "polynomial";
        case VarMode::Laurent: return "laurent";
        case VarMode::LaurentSeries: return "laurent-series";
        case VarMode::SeriesOnly: return "series-only";
    }
    return "?";
}

// ---------------------------------------------------------------- fgl

int run_fgl(const CommonOpts& o, const std::string& action, int k, int order) {
    if (action != "nseries") {
        std::cerr << "fgl: unknown action '" << action << "' (supported: nseries)\n";
        return 2;
    }
    BaseKind kind = base_kind_from_name(o.fgl);
    long p = kind == BaseKind::ModPReduced ? o.mod_prime : 0;
    FormalGroupLaw law = make_law(kind, 2 * (order - 1), order, p);

    auto ros = std::make_shared<Roster>();
    {
        Roster r;
        r.base = law.base;
        r.vars.push_back(VarInfo{"x", -2, VarMode::SeriesOnly, 0});
        r.block_bound[0] = order;
        *ros = r;
    }
    Series s = fgl_n_series(law, k, s_var(ros, 0));

    ojson doc;
    doc["$schema"] = "urn:cobord:schema:fgl:v1";
    ojson config = config_json("fgl", o);
    config.erase("params");
    config["action"] = action;
    config["k"] = k;
    config["order"] = order;
    doc["config"] = config;
    doc["series"] = s_to_string(s);
    doc["truncated"] = s.truncated;
    emit(doc, o, [&](std::ostream& out) {
        out << config_line(doc["config"]) << "\n";
        out << "[" << k << "]_F x = " << doc["series"].get<std::string>() << "\n";
        if (s.truncated) out << "note: tail beyond the window was dropped\n";
    });
    return 0;
}

// ---------------------------------------------------------------- poset

int run_poset(const CommonOpts& o, const std::string& group, const std::string& flavor) {
    FinAbGroup G = parse_group(group);
    Flavor f = flavor_from_name(flavor);
    ChainPoset P = chain_poset(G, f);

    ojson doc;
    doc["$schema"] = "urn:cobord:schema:poset:v1";
    ojson config = config_json("poset", o);
    config.erase("fgl");
    config.erase("params");
    config["group"] = group;
    config["flavor"] = flavor_name(f);
    doc["config"] = config;
    doc["count"] = P.chains.size();
    ojson chains = ojson::array();
    for (size_t i = 0; i < P.chains.size(); ++i) chains.push_back(chain_label(P, (int)i));
    doc["chains"] = chains;
    emit(doc, o, [&](std::ostream& out) {
        out << config_line(doc["config"]) << "\n";
        out << "count: " << P.chains.size() << "\n";
        for (const auto& c : doc["chains"]) out << "  " << c.get<std::string>() << "\n";
    });
    return 0;
}

// ---------------------------------------------------------------- gamma

int run_gamma(const CommonOpts& o, const std::string& group, const std::string& flavor,
              const std::string& node_sel, bool show_ring) {
    FinAbGroup G = parse_group(group);
    Flavor f = flavor_from_name(flavor);
    TruncParams tp = trunc_from_opts(o);
    FormalGroupLaw law = law_from_opts(o);
    Diagram D = assemble_diagram(G, f, tp, law);

    std::vector<size_t> picks;
    if (node_sel.empty()) {
        for (size_t i = 0; i < D.nodes.size(); ++i) picks.push_back(i);
    } else {
        bool found = false;
        for (size_t i = 0; i < D.nodes.size(); ++i)
            if (chain_label(D.poset, (int)i) == node_sel) {
                picks.push_back(i);
                found = true;
            }
        if (!found) {
            size_t idx = (size_t)std::stoul(node_sel);
            if (idx >= D.nodes.size()) throw std::invalid_argument("node index out of range");
            picks.push_back(idx);
        }
    }

    ojson doc;
    doc["$schema"] = "urn:cobord:schema:gamma:v1";
    ojson config = config_json("gamma", o);
    config["group"] = group;
    config["flavor"] = flavor_name(f);
    config["node"] = node_sel;
    config["show_ring"] = show_ring;
    doc["config"] = config;
    ojson nodes = ojson::array();
    for (size_t i : picks) {
        const GammaRing& R = D.nodes[i];
        ojson nd;
        nd["chain"] = chain_label(D.poset, (int)i);
        nd["generator_count"] = R.ros->nvars();
        nd["relation_count"] = R.relations.size();
        if (show_ring) {
            ojson gens = ojson::array();
            for (const VarInfo& v : R.ros->vars)
                gens.push_back(ojson{{"name", v.name},
                                     {"degree", v.degree},
                                     {"mode", mode_name(v.mode)},
                                     {"block", v.block}});
            nd["generators"] = gens;
            ojson rels = ojson::array();
            for (const Series& r : R.relations) rels.push_back(s_to_string(r));
            nd["relations"] = rels;
        }
        nodes.push_back(nd);
    }
    doc["nodes"] = nodes;
    emit(doc, o, [&](std::ostream& out) {
        out << config_line(doc["config"]) << "\n";
        for (size_t i : picks) {
            out << gamma_describe(D.nodes[i]);
            if (!show_ring)
                out << "  (" << D.nodes[i].ros->nvars() << " generators, "
                    << D.nodes[i].relations.size() << " relations)\n";
        }
    });
    return 0;
}

// ---------------------------------------------------------------- limit / zpn

ojson rows_json(const std::vector<LimitResult>& rows) {
    ojson a = ojson::array();
    for (const LimitResult& r : rows) {
        ojson row;
        row["degree"] = r.degree;
        row["invariant_factors"] = factors_json(r.invariant_factors);
        row["stable"] = r.stable;
        row["truncated"] = r.truncated;
        ojson dims = ojson::array();
        for (size_t d : r.dims) dims.push_back(d);
        row["dims"] = dims;
        a.push_back(row);
    }
    return a;
}

void rows_table(std::ostream& out, const std::vector<LimitResult>& rows) {
    out << "degree  stable  truncated  invariant_factors\n";
    for (const LimitResult& r : rows) {
        std::ostringstream deg;
        deg << r.degree;
        out << deg.str() << std::string(deg.str().size() < 6 ? 6 - deg.str().size() : 1, ' ') << "  "
            << (r.stable ? "yes" : "NO ") << "     " << (r.truncated ? "yes" : "no ") << "       "
            << factors_compact(r.invariant_factors) << "\n";
    }
}

int finish_stabilized(const char* schema, ojson config, const CommonOpts& o,
                      const StabilizeReport& rep) {
    bool all_stable = true;
    for (const LimitResult& r : rep.last) all_stable = all_stable && r.stable;

    ojson doc;
    doc["$schema"] = schema;
    doc["config"] = std::move(config);
    doc["all_stable"] = all_stable;
    doc["rows"] = rows_json(rep.last);
    if (!all_stable && !o.allow_unstable) {
        std::cerr << "result did not stabilize under the schedule; rerun with a deeper window "
                     "or pass --allow-unstable to print it anyway\n";
        return 2;
    }
    emit(doc, o, [&](std::ostream& out) {
        out << config_line(doc["config"]) << "\n";
        rows_table(out, rep.last);
        out << "all_stable: " << (all_stable ? "yes" : "NO") << "\n";
    });
    return 0;
}

int run_limit(const CommonOpts& o, const std::string& group, const std::string& flavor,
              const std::string& degrees) {
    FinAbGroup G = parse_group(group);
    Flavor f = flavor_from_name(flavor);
    auto [lo, hi] = parse_degrees(degrees);
    FormalGroupLaw law = law_from_opts(o);
    std::vector<TruncParams> schedule = default_schedule(trunc_from_opts(o), o.steps);
    StabilizeReport rep = stabilize_range(G, f, law, schedule, lo, hi, o.jobs);

    ojson config = config_json("limit", o);
    config["group"] = group;
    config["flavor"] = flavor_name(f);
    config["degrees"] = degrees;
    config["steps"] = o.steps;
    config["jobs"] = o.jobs;
    config["allow_unstable"] = o.allow_unstable;
    return finish_stabilized("urn:cobord:schema:limit:v1", std::move(config), o, rep);
}

int run_zpn(const CommonOpts& o, int p, int n, const std::string& degrees) {
    auto [lo, hi] = parse_degrees(degrees);
    FormalGroupLaw law = law_from_opts(o);
    std::vector<TruncParams> schedule = default_schedule(trunc_from_opts(o), o.steps);
    StabilizeReport rep = zpn_stabilize(p, n, law, schedule, lo, hi, o.jobs);

    ojson config = config_json("zpn", o);
    config["p"] = p;
    config["n"] = n;
    config["degrees"] = degrees;
    config["steps"] = o.steps;
    config["jobs"] = o.jobs;
    config["allow_unstable"] = o.allow_unstable;
    return finish_stabilized("urn:cobord:schema:zpn:v1", std::move(config), o, rep);
}

// ---------------------------------------------------------------- crosscheck

int run_crosscheck(const CommonOpts& o, int p, int n, const std::string& degrees) {
    auto [lo, hi] = parse_degrees(degrees);
    FormalGroupLaw law = law_from_opts(o);
    std::vector<TruncParams> schedule = default_schedule(trunc_from_opts(o), o.steps);
    CrosscheckReport rep = crosscheck_zpn(p, n, law, schedule, lo, hi, o.jobs);

    ojson doc;
    doc["$schema"] = "urn:cobord:schema:crosscheck:v1";
    ojson config = config_json("crosscheck", o);
    config["p"] = p;
    config["n"] = n;
    config["degrees"] = degrees;
    config["steps"] = o.steps;
    config["jobs"] = o.jobs;
    config["allow_unstable"] = o.allow_unstable;
    doc["config"] = config;
    doc["all_match"] = rep.all_match;
    doc["all_stable"] = rep.all_stable;
    ojson rows = ojson::array();
    for (const CrosscheckRow& r : rep.rows) {
        rows.push_back(ojson{{"degree", r.degree},
                             {"chain_factors", factors_json(r.chain_factors)},
                             {"stair_factors", factors_json(r.stair_factors)},
                             {"match", r.match},
                             {"chain_stable", r.chain_stable},
                             {"stair_stable", r.stair_stable}});
    }
    doc["rows"] = rows;
    doc["euler"] = ojson{{"chain", rep.euler_chain}, {"stair", rep.euler_stair},
                         {"note", rep.euler_note}};

    if (!rep.all_stable && !o.allow_unstable) {
        std::cerr << "cross-check did not stabilize under the schedule; rerun with a deeper "
                     "window or pass --allow-unstable\n";
        return 2;
    }
    emit(doc, o, [&](std::ostream& out) {
        out << config_line(doc["config"]) << "\n";
        out << "degree  match  chain_factors  stair_factors\n";
        for (const CrosscheckRow& r : rep.rows)
            out << r.degree << "\t" << (r.match ? "yes" : "NO") << "\t"
                << factors_compact(r.chain_factors) << "\t" << factors_compact(r.stair_factors)
                << "\n";
        out << "all_match: " << (rep.all_match ? "yes" : "NO")
            << "   all_stable: " << (rep.all_stable ? "yes" : "NO") << "\n";
        if (!rep.euler_note.empty())
            out << "euler tuple in chain limit: " << (rep.euler_chain ? "yes" : "NO")
                << ", in tower pullback: " << (rep.euler_stair ? "yes" : "NO") << "\n";
    });
    return rep.all_match ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graded pieces of equivariant cobordism coefficient rings at finite truncation"};
    app.require_subcommand(1);

    CommonOpts o;
    int rc = 0;

    // fgl
    std::string fgl_action = "nseries";
    int fgl_k = 2, fgl_order = 8;
    CLI::App* fgl = app.add_subcommand("fgl", "formal-group-law arithmetic");
    fgl->add_option("action", fgl_action, "nseries")->required();
    fgl->add_option("--k", fgl_k, "multiplier of the n-series")->required();
    fgl->add_option("--order", fgl_order, "series order (powers of x up to this)")
        ->check(CLI::Range(2, 12));
    add_law_flags(fgl, o, "--law,--fgl");
    add_output_flags(fgl, o);
    fgl->callback([&] { rc = run_fgl(o, fgl_action, fgl_k, fgl_order); });

    // poset
    std::string group = "Z/2", flavor = "P''", node_sel, degrees = "-4..4";
    bool show_ring = false;
    CLI::App* poset = app.add_subcommand("poset", "enumerate the chain poset of a group");
    poset->add_option("--group", group, "finite abelian group, e.g. Z/4 or Z/2 x Z/2")->required();
    poset->add_option("--flavor", flavor, "P | P' | P'' (or full | pairs | reduced)");
    add_output_flags(poset, o);
    poset->callback([&] { rc = run_poset(o, group, flavor); });

    // gamma
    CLI::App* gamma = app.add_subcommand("gamma", "display the ring attached to a chain");
    gamma->add_option("--group", group)->required();
    gamma->add_option("--flavor", flavor);
    gamma->add_option("--node", node_sel, "chain label (e.g. \"{e < C2}\") or node index");
    gamma->add_flag("--show-ring", show_ring, "print full generator and relation lists");
    add_param_flags(gamma, o);
    add_law_flags(gamma, o);
    add_output_flags(gamma, o);
    gamma->callback([&] { rc = run_gamma(o, group, flavor, node_sel, show_ring); });

    // limit
    CLI::App* limit = app.add_subcommand("limit", "inverse limit over the chain diagram");
    limit->add_option("--group", group)->required();
    limit->add_option("--flavor", flavor);
    limit->add_option("--degrees", degrees, "inclusive range, e.g. -6..6")->required();
    add_param_flags(limit, o);
    add_law_flags(limit, o);
    add_output_flags(limit, o);
    add_run_flags(limit, o);
    limit->callback([&] { rc = run_limit(o, group, flavor, degrees); });

    // zpn
    int zp = 2, zn = 1;
    CLI::App* zpn = app.add_subcommand("zpn", "cyclic-tower pullback for groups of order p^n");
    zpn->add_option("--p", zp, "prime")->required();
    zpn->add_option("--n", zn, "tower height")->required();
    zpn->add_option("--degrees", degrees)->required();
    add_param_flags(zpn, o);
    add_law_flags(zpn, o);
    add_output_flags(zpn, o);
    add_run_flags(zpn, o);
    zpn->callback([&] { rc = run_zpn(o, zp, zn, degrees); });

    // crosscheck
    CLI::App* cross = app.add_subcommand("crosscheck",
                                         "compare the chain-diagram limit with the tower pullback");
    cross->add_option("--p", zp, "prime")->required();
    cross->add_option("--n", zn, "tower height")->required();
    cross->add_option("--degrees", degrees)->required();
    add_param_flags(cross, o);
    add_law_flags(cross, o);
    add_output_flags(cross, o);
    add_run_flags(cross, o);
    cross->callback([&] { rc = run_crosscheck(o, zp, zn, degrees); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
