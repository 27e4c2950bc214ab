#include "heightlab/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "heightlab/arith.hpp"
#include "heightlab/dynamics.hpp"
#include "heightlab/errors.hpp"
#include "heightlab/generic.hpp"
#include "heightlab/heights.hpp"
#include "heightlab/parse.hpp"
#include "heightlab/preperiodic.hpp"
#include "heightlab/selftest.hpp"
#include "heightlab/sweep.hpp"

namespace heightlab {

namespace {

using nlohmann::json;

long env_bigint_cap_bytes(long fallback) {
    const char* s = std::getenv("HEIGHTLAB_BIGINT_CAP");
    if (!s || !*s) return fallback;
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end == s || *end != '\0' || v <= 0)
        throw ParseError("HEIGHTLAB_BIGINT_CAP must be a positive byte count");
    return v;
}

HeightOptions make_height_options(const RunConfig& cfg) {
    HeightOptions opts;
    opts.orbit.max_bits = cfg.bigint_cap_bytes * 8;
    return opts;
}

void check_format(const RunConfig& cfg, const char* expected) {
    if (!cfg.format.empty() && cfg.format != expected)
        throw ParseError("this command emits " + std::string(expected) +
                         " only");
}

int cmd_height(const RunConfig& cfg, const std::string& lambda_s,
               const std::string& point_s, std::ostream& out) {
    check_format(cfg, "json");
    Rat lambda = parse_rational(lambda_s);
    if (lambda == 0) throw ParseError("lambda must be nonzero");
    ProjPoint x = parse_point(point_s);
    FamilyParams params(cfg.d, lambda);
    HeightOptions opts = make_height_options(cfg);

    CertifiedValue hhat = global_canonical_height(params, x, cfg.eps, opts);
    PlaceSet places = sufficient_places(params, x);
    const double per_place = 0.9 * cfg.eps / static_cast<double>(places.size());

    json doc;
    doc["d"] = cfg.d;
    doc["lambda"] = to_fraction_string(lambda);
    doc["point"] = x.to_string();
    doc["hhat"] = {{"value", hhat.value}, {"error", hhat.error}};
    doc["places"] = json::array();
    for (const auto& e : places.entries) {
        CertifiedValue lv =
            local_canonical_height(params, x, e.place, per_place, opts);
        doc["places"].push_back({{"place", e.place.to_string()},
                                 {"value", lv.value},
                                 {"error", lv.error},
                                 {"reason", to_string(e.reason)}});
    }
    out << doc.dump() << "\n";
    return 0;
}

int cmd_generic(const RunConfig& cfg, const std::string& map_s, bool strict,
                std::ostream& out, std::ostream& err) {
    check_format(cfg, "json");
    std::string warning;
    RationalMap1D c = parse_rational_map(map_s, &warning);
    if (!warning.empty()) {
        if (strict) throw StrictInputViolation(warning);
        err << "warning: " << warning << "\n";
    }
    json doc;
    if (c.A.is_zero() || c.B.is_zero()) {
        doc["hhat_generic"] = "0";
        doc["deg_f1"] = 0;
        doc["deg_f2"] = 0;
        doc["coprime_check"] = true;
    } else {
        Rat h = generic_height(c, cfg.d);
        PolyPair p1 = iterate_poly_pair(c, cfg.d, 1);
        PolyPair p2 = iterate_poly_pair(c, cfg.d, 2);
        doc["hhat_generic"] = to_fraction_string(h);
        doc["deg_f1"] = std::max(p1.A.degree(), p1.B.degree());
        doc["deg_f2"] = std::max(p2.A.degree(), p2.B.degree());
        doc["coprime_check"] = verify_coprime_iterates(c, cfg.d, 3);
    }
    out << doc.dump() << "\n";
    return 0;
}

int cmd_sweep(const RunConfig& cfg, const std::string& map_s, double hmax,
              long samples, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
    check_format(cfg, "csv");
    std::string warning;
    SweepConfig sc;
    sc.d = cfg.d;
    sc.map = parse_rational_map(map_s, &warning);
    if (!warning.empty()) err << "warning: " << warning << "\n";
    sc.hmax = hmax;
    sc.samples = samples;
    sc.eps = cfg.eps;
    sc.seed = cfg.seed;
    sc.jobs = cfg.jobs;
    sc.height = make_height_options(cfg);

    SweepResult result =
        cfg.jobs == 1 ? run_sweep_serial(sc) : run_sweep(sc);

    if (out_path.empty() || out_path == "-") {
        write_sweep_csv(out, sc, result);
    } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) throw ParseError("cannot open output file " + out_path);
        write_sweep_csv(file, sc, result);
    }

    std::ostringstream summary;
    summary << "sweep: samples=" << result.rows.size()
            << " max_gap=" << format_double(result.max_gap)
            << " hhat_generic=" << to_fraction_string(result.hhat_generic);
    if (sc.map.is_constant() && !sc.map.A.is_zero() && !sc.map.B.is_zero()) {
        Rat alpha = sc.map.A.coeff(0) / sc.map.B.coeff(0);
        if (alpha != 0) {
            double bound = theorem2_bound(alpha, cfg.d);
            summary << " bound=" << format_double(bound);
            if (!(result.max_gap < bound)) {
                err << summary.str() << "\n";
                throw CapExceeded("max gap reached the certified bound");
            }
        }
    }
    err << summary.str() << "\n";
    return 0;
}

int cmd_search(const RunConfig& cfg, const std::string& alpha_s, double cap,
               std::ostream& out) {
    check_format(cfg, "json");
    Rat alpha = parse_rational(alpha_s);
    if (alpha == 0) throw ParseError("alpha=0 is preperiodic for every lambda");
    SearchOptions opts;
    opts.orbit_cap = cfg.orbit_cap;
    opts.jobs = cfg.jobs;
    opts.height = make_height_options(cfg);
    SearchReport report =
        search_preperiodic_parameters(alpha, cfg.d, cap, cfg.eps, opts);
    json doc;
    doc["alpha"] = to_fraction_string(report.alpha);
    doc["d"] = report.d;
    doc["bound"] = report.bound;
    doc["cap"] = report.cap;
    doc["x_candidates"] = report.candidates; // not part of the pinned schema
    doc["hits"] = json::array();
    for (const SearchHit& h : report.hits)
        doc["hits"].push_back({{"lambda", to_fraction_string(h.lambda)},
                               {"tail", h.tail},
                               {"cycle", h.cycle}});
    out << doc.dump() << "\n";
    return 0;
}

int cmd_selftest(const std::string& suite, std::ostream& out) {
    std::vector<SuiteResult> results;
    if (suite.empty())
        results = selftest::run_all();
    else
        results.push_back(selftest::run_suite(suite));
    bool ok = true;
    for (const SuiteResult& r : results) {
        out << r.name << ": " << (r.passed ? "PASS" : "FAIL") << " ("
            << r.detail << ")\n";
        ok = ok && r.passed;
    }
    return ok ? 0 : 1;
}

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
    CLI::App app{"canonical heights for the family f_lambda(z) = (z^d + lambda)/z"};
    app.require_subcommand(1);
    RunConfig cfg;

    std::string lambda_s, point_s, map_s, alpha_s, out_path, suite;
    double hmax = 1, cap = 0;
    long samples = 0;
    bool strict = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--d", cfg.d, "family degree d >= 2")
            ->check(CLI::Range(2, 64));
        sub->add_option("--eps", cfg.eps, "certified error budget")
            ->check(CLI::PositiveNumber);
        sub->add_option("--jobs", cfg.jobs, "worker threads (0 = all, 1 = serial)");
        sub->add_option("--orbit-cap", cfg.orbit_cap, "exact-orbit step cap");
        sub->add_option("--bigint-cap", cfg.bigint_cap_bytes,
                        "bytes per exact integer");
        sub->add_option("--format", cfg.format, "output format");
    };

    CLI::App* height = app.add_subcommand("height", "certified canonical height");
    add_common(height);
    height->add_option("--lambda", lambda_s, "parameter lambda (p/q)")
        ->required();
    height->add_option("--point", point_s, "starting point (a/b or inf)")
        ->required();

    CLI::App* generic = app.add_subcommand("generic", "generic-fiber height");
    add_common(generic);
    generic->add_option("--map", map_s, "rational map A(t)/B(t)")->required();
    generic->add_flag("--strict", strict,
                      "reject inputs with a common polynomial factor");

    CLI::App* sweep = app.add_subcommand("sweep", "height-variation sweep");
    add_common(sweep);
    sweep->add_option("--map", map_s, "rational map A(t)/B(t)")->required();
    sweep->add_option("--hmax", hmax, "height cap for lambda samples")
        ->required();
    sweep->add_option("--samples", samples, "number of sampled lambdas")
        ->required();
    sweep->add_option("--seed", cfg.seed, "PRNG seed");
    sweep->add_option("--out", out_path, "CSV output path (default stdout)");

    CLI::App* search =
        app.add_subcommand("search", "preperiodic parameter search");
    add_common(search);
    search->add_option("--alpha", alpha_s, "starting point alpha (p/q)")
        ->required();
    search->add_option("--cap", cap, "height cap of the searched region")
        ->required();

    CLI::App* selftest_cmd =
        app.add_subcommand("selftest", "embedded invariant suites");
    selftest_cmd->add_option("--suite", suite,
                             "conversion | tailbound | goodplace | coprime");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        cfg.bigint_cap_bytes = env_bigint_cap_bytes(cfg.bigint_cap_bytes);
        if (height->parsed()) return cmd_height(cfg, lambda_s, point_s, out);
        if (generic->parsed())
            return cmd_generic(cfg, map_s, strict, out, err);
        if (sweep->parsed())
            return cmd_sweep(cfg, map_s, hmax, samples, out_path, out, err);
        if (search->parsed()) return cmd_search(cfg, alpha_s, cap, out);
        if (selftest_cmd->parsed()) return cmd_selftest(suite, out);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const StrictInputViolation& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    } catch (const RegionTooLarge& e) {
        err << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace heightlab
