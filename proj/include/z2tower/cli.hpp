#pragma once

#include <z2tower/report.hpp>

#include <CLI11.hpp>

#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace z2tower {

struct RunConfig {
    std::uint64_t p_max = 500;
    std::uint64_t q_max = 100;
    std::uint64_t r_max = 100;
    std::uint64_t p = 0, q = 0, r = 0;
    std::uint64_t disc_bound = default_discriminant_bound;
    bool skip_kuroda = false;
    bool narrow = false;
    unsigned jobs = 1;
    std::string format = "text";
    std::string output_path;
    std::string disc;
    std::string kind;
    std::vector<std::string> args;
};

namespace detail {

/* Route a payload to the requested file, or the primary stream by default. */
inline bool emit(const std::string &payload, const RunConfig &cfg, std::ostream &out,
                 std::ostream &err) {
    if (cfg.output_path.empty()) {
        out << payload;
        return true;
    }
    std::ofstream f(cfg.output_path, std::ios::binary);
    if (!f) {
        err << "cannot open " << cfg.output_path << " for writing\n";
        return false;
    }
    f << payload;
    if (!f) {
        err << "write failed for " << cfg.output_path << "\n";
        return false;
    }
    return true;
}

inline int do_scan(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    auto triples = scan(cfg.p_max, cfg.q_max, cfg.r_max);
    std::string payload;
    if (cfg.format == "json") {
        ordered_json j;
        j["bounds"] = {{"p_max", cfg.p_max}, {"q_max", cfg.q_max}, {"r_max", cfg.r_max}};
        ordered_json arr = ordered_json::array();
        for (const auto &t : triples)
            arr.push_back({{"p", t.p}, {"q", t.q}, {"r", t.r}});
        j["triples"] = arr;
        payload = j.dump(2) + "\n";
    } else if (cfg.format == "csv") {
        payload = "p,q,r\n";
        for (const auto &t : triples)
            payload += t.str() + "\n";
    } else {
        for (const auto &t : triples)
            payload += t.str() + "\n";
        payload += std::to_string(triples.size()) + " qualifying triple(s)\n";
    }
    return emit(payload, cfg, out, err) ? 0 : 2;
}

inline std::vector<TripleReport> verify_many(const std::vector<Triple> &triples,
                                             const RunConfig &cfg) {
    std::vector<TripleReport> reports(triples.size());
    unsigned jobs = std::max(1u, cfg.jobs);
    if (jobs == 1 || triples.size() <= 1) {
        for (size_t i = 0; i < triples.size(); ++i)
            reports[i] = verify_triple(triples[i].p, triples[i].q, triples[i].r,
                                       cfg.skip_kuroda, cfg.disc_bound);
        return reports;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= triples.size())
                return;
            try {
                reports[i] = verify_triple(triples[i].p, triples[i].q, triples[i].r,
                                           cfg.skip_kuroda, cfg.disc_bound);
            } catch (...) {
                std::lock_guard<std::mutex> hold(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                next.store(triples.size());
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<size_t>(jobs, triples.size()); ++t)
        pool.emplace_back(worker);
    for (auto &t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
    return reports;
}

inline int do_verify(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    std::vector<Triple> triples;
    if (cfg.p != 0) {
        // A single explicit triple. The entry condition is validated inside
        // the pipeline; a rejection propagates as a usage error.
        triples.push_back({cfg.p, cfg.q, cfg.r});
    } else {
        triples = scan(cfg.p_max, cfg.q_max, cfg.r_max);
    }
    auto reports = verify_many(triples, cfg);
    std::string payload;
    if (cfg.format == "json")
        payload = reports.size() == 1 ? render_json(reports.front())
                                      : render_json(reports);
    else if (cfg.format == "csv")
        payload = render_csv(reports);
    else
        payload = render_text(reports);
    if (!emit(payload, cfg, out, err))
        return 2;
    for (const auto &R : reports)
        if (!R.overall)
            return 1;
    return 0;
}

inline int do_classgroup(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    QuadDiscriminant D(mpz_class(cfg.disc), cfg.disc_bound);
    std::string payload;
    if (cfg.narrow) {
        NarrowClassGroup g = narrow_class_group(D);
        if (cfg.format == "json") {
            ordered_json j;
            j["disc"] = cfg.disc;
            j["kind"] = "narrow";
            j["order"] = g.group.order();
            j["invariant_factors"] = g.group.invariant_factors;
            ordered_json gens = ordered_json::array();
            for (const auto &f : g.generators)
                gens.push_back(f.str());
            j["generators"] = gens;
            payload = j.dump(2) + "\n";
        } else {
            std::ostringstream os;
            os << "narrow class group of discriminant " << cfg.disc << ": "
               << (g.group.invariant_factors.empty() ? "trivial" : g.group.str())
               << " (order " << g.group.order() << ")";
            for (const auto &f : g.generators)
                os << " " << f.str();
            os << "\n";
            payload = os.str();
        }
    } else {
        std::uint64_t h = wide_class_number(D);
        AbelianGroupStructure two = wide_class_group_2part(D);
        if (cfg.format == "json") {
            ordered_json j;
            j["disc"] = cfg.disc;
            j["kind"] = "wide";
            j["order"] = h;
            j["two_part"] = two.invariant_factors;
            payload = j.dump(2) + "\n";
        } else {
            std::ostringstream os;
            os << "class group of discriminant " << cfg.disc << ": order " << h
               << ", 2-part "
               << (two.invariant_factors.empty() ? "trivial" : two.str()) << "\n";
            payload = os.str();
        }
    }
    return emit(payload, cfg, out, err) ? 0 : 2;
}

inline int do_symbol(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    auto need = [&](size_t n, const char *usage) {
        if (cfg.args.size() != n)
            throw std::invalid_argument(std::string("symbol --kind ") + cfg.kind +
                                        " expects " + usage);
    };
    std::string payload;
    auto scalar_payload = [&](SymbolValue v) {
        if (cfg.format == "json") {
            ordered_json j;
            j["kind"] = cfg.kind;
            j["args"] = cfg.args;
            j["value"] = int(v);
            return j.dump(2) + "\n";
        }
        return sv_str(v) + "\n";
    };
    if (cfg.kind == "legendre") {
        need(2, "two arguments: a p");
        payload = scalar_payload(
            legendre(mpz_class(cfg.args[0]), OddPrime(mpz_class(cfg.args[1]))));
    } else if (cfg.kind == "quartic2") {
        need(1, "one argument: p");
        payload = scalar_payload(quartic_symbol_of_two(mpz_class(cfg.args[0])));
    } else if (cfg.kind == "hilbert-q") {
        need(3, "three arguments: a b place (a prime, or 'real')");
        mpz_class a(cfg.args[0]), b(cfg.args[1]);
        payload = scalar_payload(cfg.args[2] == "real"
                                     ? hilbert_symbol_q_real(a, b)
                                     : hilbert_symbol_q(a, b, mpz_class(cfg.args[2])));
    } else if (cfg.kind == "hilbert-q1") {
        need(4, "four arguments: a0 a1 b0 b1 for (a0+a1*sqrt2, b0+b1*sqrt2)");
        Zsqrt2Elem alpha{mpz_class(cfg.args[0]), mpz_class(cfg.args[1])};
        Zsqrt2Elem beta{mpz_class(cfg.args[2]), mpz_class(cfg.args[3])};
        SymbolTable t = symbol_table(alpha, beta);
        if (cfg.format == "json") {
            ordered_json j;
            j["kind"] = cfg.kind;
            j["table"] = table_to_json(t);
            payload = j.dump(2) + "\n";
        } else {
            std::ostringstream os;
            for (const auto &[place, value] : t.entries)
                os << place.str() << " " << sv_str(value) << "\n";
            os << "product " << sv_str(t.product()) << "\n";
            payload = os.str();
        }
    } else {
        throw std::invalid_argument("unknown symbol kind: " + cfg.kind);
    }
    return emit(payload, cfg, out, err) ? 0 : 2;
}

/* Quick cross-validations, one line per suite. Each pits two independent
 * routes against each other; run before trusting longer computations. */
inline int do_selftest(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    std::ostringstream os;
    unsigned passed = 0, total = 0;
    auto suite = [&](const char *name, bool ok) {
        ++total;
        passed += ok ? 1 : 0;
        os << (ok ? "ok   " : "FAIL ") << name << "\n";
    };

    {
        auto hits = scan(50, 50, 50);
        suite("triple scan over the entry condition",
              hits == std::vector<Triple>{{41, 3, 43}, {41, 11, 43}, {41, 19, 43}} &&
                  check_condition1(41, 3, 43).passes() &&
                  !check_condition1(41, 3, 11).passes());
    }
    {
        bool ok = true;
        for (std::uint64_t D : {5, 8, 12, 5289, 42312}) {
            FundamentalUnit u = fundamental_unit(QuadDiscriminant(mpz_class(D)));
            mpz_class lhs = mpz_class(u.x) * u.x - mpz_class(D) * u.y * u.y;
            ok = ok && (lhs == 4 * u.norm) && (u.norm == 1 || u.norm == -1);
        }
        ok = ok && wide_class_group_2part(QuadDiscriminant(mpz_class(5289)))
                           .invariant_factors == std::vector<std::uint64_t>{2};
        ok = ok && wide_class_group_2part(QuadDiscriminant(mpz_class(42312)))
                           .invariant_factors == std::vector<std::uint64_t>{2, 2};
        suite("Pell identities and reference class groups", ok);
    }
    {
        bool ok = true;
        std::mt19937_64 rng(0x73656c66u);
        for (int i = 0; i < 50 && ok; ++i) {
            Zsqrt2Elem a{std::int64_t(rng() % 200) - 100, std::int64_t(rng() % 60) - 30};
            Zsqrt2Elem b{std::int64_t(rng() % 200) - 100, std::int64_t(rng() % 60) - 30};
            if (a.norm() == 0 || b.norm() == 0)
                continue;
            SymbolTable t = symbol_table(a, b);
            ok = int(t.product()) == 1;
            Zsqrt2Elem s{std::int64_t(rng() % 9) + 1, std::int64_t(rng() % 5)};
            if (s.norm() == 0)
                continue;
            SymbolTable t2 = symbol_table(a * s * s, b);
            for (const auto &[place, value] : t.entries)
                if (place.kind == PlaceQ1::Kind::dyadic)
                    for (const auto &[place2, value2] : t2.entries)
                        if (place2.kind == PlaceQ1::Kind::dyadic)
                            ok = ok && int(value) == int(value2);
        }
        suite("dyadic symbols via the product formula", ok);
    }
    {
        bool ok = true;
        for (auto [m, n] : {std::pair<std::uint64_t, std::uint64_t>{2, 3},
                            {2, 5},
                            {3, 5}}) {
            std::uint64_t h1 = kuroda_class_number(m, n).class_number;
            std::uint64_t h2 = minkowski_class_number(m, n);
            ok = ok && h1 == h2;
        }
        suite("biquadratic class number, formula vs lattice search", ok);
    }
    {
        bool ok = true;
        for (std::uint64_t p : primes_below(500)) {
            if (p % 16 != 9)
                continue;
            auto f = factor_rational_prime(mpz_class(static_cast<unsigned long>(p)));
            ok = ok && f.type == SplittingType::split;
            for (const auto &g : f.factors) {
                auto gen = totally_positive_prime_generator(g);
                ok = ok && residue_in_generator_set(gen);
                if (int(quartic_symbol_of_two(OddPrime(p))) == -1)
                    ok = ok && classify_sqrt2_behavior(gen) == SplittingType::inert;
            }
        }
        suite("prime generator residues in Z[sqrt2]", ok);
    }
    {
        TripleReport R = verify_triple(41, 3, 43);
        suite("worked triple end to end", R.overall);
    }

    os << "selftest: " << passed << "/" << total << " suites passed\n";
    if (!emit(os.str(), cfg, out, err))
        return 2;
    return passed == total ? 0 : 1;
}

} // namespace detail

/*
 * Full command-line entry point, usable in-process. Exit codes: 0 all checks
 * passed, 1 a verification check failed (the report is still written), 2
 * usage or resource errors.
 */
inline int run(std::vector<std::string> args, std::ostream &out, std::ostream &err) {
    RunConfig cfg;
    CLI::App app{"2-class groups along the cyclotomic Z_2-tower of Q(sqrt(pqr))"};
    app.name("z2tower");
    app.require_subcommand(1);

    auto add_io = [&](CLI::App *cmd, bool csv_allowed) {
        cmd->add_option("--format", cfg.format,
                        csv_allowed ? "output format: text, json or csv"
                                    : "output format: text or json")
            ->check(csv_allowed ? CLI::IsMember({"text", "json", "csv"})
                                : CLI::IsMember({"text", "json"}));
        cmd->add_option("-o,--output", cfg.output_path,
                        "write the payload to this file instead of stdout");
    };
    auto add_bounds = [&](CLI::App *cmd) {
        cmd->add_option("--p-max", cfg.p_max, "largest p to scan")
            ->envname("Z2TOWER_P_MAX")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--q-max", cfg.q_max, "largest q to scan")
            ->envname("Z2TOWER_Q_MAX")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--r-max", cfg.r_max, "largest r to scan")
            ->envname("Z2TOWER_R_MAX")
            ->check(CLI::PositiveNumber);
    };
    auto add_disc_bound = [&](CLI::App *cmd) {
        cmd->add_option("--disc-bound", cfg.disc_bound,
                        "refuse discriminants beyond this size")
            ->envname("Z2TOWER_DISC_BOUND")
            ->check(CLI::PositiveNumber);
    };

    CLI::App *cmd_scan =
        app.add_subcommand("scan", "list triples satisfying the entry condition");
    add_bounds(cmd_scan);
    add_io(cmd_scan, true);

    CLI::App *cmd_verify = app.add_subcommand(
        "verify", "run the verification pipeline on one triple or a scanned range");
    auto *opt_p = cmd_verify->add_option("-p", cfg.p, "prime p = 9 (mod 16)");
    auto *opt_q = cmd_verify->add_option("-q", cfg.q, "prime q = 3 (mod 8)");
    auto *opt_r = cmd_verify->add_option("-r", cfg.r, "prime r = 3 (mod 8)");
    opt_p->needs(opt_q)->needs(opt_r);
    opt_q->needs(opt_p);
    opt_r->needs(opt_p);
    add_bounds(cmd_verify);
    add_disc_bound(cmd_verify);
    cmd_verify->add_flag("--skip-kuroda", cfg.skip_kuroda,
                         "skip the independent class number formula route; the "
                         "level-1 order check is then marked bound-only");
    cmd_verify->add_option("-j,--jobs", cfg.jobs, "worker threads for ranged runs")
        ->check(CLI::PositiveNumber);
    add_io(cmd_verify, true);

    CLI::App *cmd_class = app.add_subcommand(
        "classgroup", "class group of a quadratic field by discriminant");
    cmd_class->add_option("--disc", cfg.disc, "fundamental discriminant")->required();
    cmd_class->add_flag("--narrow", cfg.narrow, "narrow (strict) class group");
    add_disc_bound(cmd_class);
    add_io(cmd_class, false);

    CLI::App *cmd_symbol =
        app.add_subcommand("symbol", "evaluate quadratic and norm residue symbols");
    cmd_symbol
        ->add_option("--kind", cfg.kind,
                     "legendre | quartic2 | hilbert-q | hilbert-q1")
        ->required()
        ->check(CLI::IsMember({"legendre", "quartic2", "hilbert-q", "hilbert-q1"}));
    cmd_symbol->add_option("args", cfg.args, "symbol arguments");
    add_io(cmd_symbol, false);

    CLI::App *cmd_self =
        app.add_subcommand("selftest", "cross-validate the independent oracles");
    cmd_self->add_option("-o,--output", cfg.output_path,
                         "write the results to this file instead of stdout");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(cmd_scan))
            return detail::do_scan(cfg, out, err);
        if (app.got_subcommand(cmd_verify))
            return detail::do_verify(cfg, out, err);
        if (app.got_subcommand(cmd_class))
            return detail::do_classgroup(cfg, out, err);
        if (app.got_subcommand(cmd_symbol))
            return detail::do_symbol(cfg, out, err);
        return detail::do_selftest(cfg, out, err);
    } catch (const ResourceError &e) {
        err << "resource limit: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument &e) {
        err << "invalid request: " << e.what() << "\n";
        return 2;
    }
}

} // namespace z2tower
