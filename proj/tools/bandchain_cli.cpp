// Command-line front end: factor/solve/verify workflows over BND
// matrix files plus a benchmark harness.  Every command prints a flat
// JSON run report to stdout.  Exit codes: 0 success, 2 input/parse
// error, 3 breakdown or structural non-factorizability, 4 verification
// failure.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bandchain/bandchain.hpp"

namespace {

using namespace bandchain;
using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Deterministic per-trial seed stream.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL + (salt << 1));
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

// Free-parameter file: whitespace-separated reals, either the lower
// count p(p-1)/2 alone or the lower count followed by the upper count
// q(q-1)/2.
std::pair<FreeParameters, FreeParameters> read_params_file(const std::string& path, int p, int q) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::vector<double> all;
    std::string tok;
    while (in >> tok) all.push_back(detail::parse_double(tok, 0));
    const std::size_t nl = FreeParameters::expected_count(p);
    const std::size_t nu = FreeParameters::expected_count(q);
    if (all.size() != nl && all.size() != nl + nu)
        throw ParseError("free-parameter file must hold " + std::to_string(nl) + " or " +
                         std::to_string(nl + nu) + " values, got " + std::to_string(all.size()));
    FreeParameters lower{std::vector<double>(all.begin(), all.begin() + long(nl))};
    FreeParameters upper = all.size() == nl + nu
                               ? FreeParameters{std::vector<double>(all.begin() + long(nl), all.end())}
                               : FreeParameters::ones(q);
    return {std::move(lower), std::move(upper)};
}

void describe_input(RunReport& rep, const BandedMatrix& a) {
    rep.set("n", a.order());
    rep.set("p", a.lower_bw());
    rep.set("q", a.upper_bw());
}

void set_count_model(RunReport& rep, const OpCountReport& lower, const OpCountReport& upper) {
    rep.set("m1_closed_form", lower.m1_closed_form);
    rep.set("m2_closed_form", lower.m2_closed_form);
    rep.set("total_closed_form", lower.total_closed_form);
    rep.set("m1_summed", lower.m1_summed);
    rep.set("m2_summed", lower.m2_summed);
    rep.set("flops_factorization", lower.measured_flops + upper.measured_flops);
}

// Maps thrown errors onto the exit-code classes and records them in
// the report.
template <typename F>
int guarded(RunReport& rep, F&& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        rep.set_error("parse", e.what());
        return 2;
    } catch (const InvalidFreeParameter& e) {
        rep.set_error("free-parameters", e.what());
        return 2;
    } catch (const PivotBreakdown& e) {
        rep.set_error("lu", e.what());
        rep.set("error_index", e.index());
        return 3;
    } catch (const DarbouxBreakdown& e) {
        rep.set_error("darboux", e.what());
        rep.set("error_m", e.m());
        rep.set("error_s", e.s());
        return 3;
    } catch (const NotFactorizable& e) {
        rep.set_error("factorizability", e.what());
        return 3;
    } catch (const NotMonic& e) {
        rep.set_error("monic-check", e.what());
        rep.set("error_index", e.index());
        return 3;
    } catch (const NotNormalizable& e) {
        rep.set_error("normalization", e.what());
        rep.set("error_index", e.index());
        return 3;
    } catch (const SingularUpper& e) {
        rep.set_error("back-substitution", e.what());
        rep.set("error_index", e.index());
        return 3;
    } catch (const std::invalid_argument& e) {
        rep.set_error("input", e.what());
        return 2;
    } catch (const std::out_of_range& e) {
        rep.set_error("input", e.what());
        return 2;
    } catch (const std::exception& e) {
        rep.set_error("internal", e.what());
        return 2;
    }
}

int cmd_factor(const std::string& matrix_path, const std::string& params_path,
               const std::string& out_path) {
    RunReport rep("factor");
    const int code = guarded(rep, [&]() -> int {
        const auto t0 = Clock::now();
        BandedMatrix a = read_band_file(matrix_path);
        describe_input(rep, a);
        FreeParameters lower = FreeParameters::ones(a.lower_bw());
        FreeParameters upper = FreeParameters::ones(a.upper_bw());
        if (!params_path.empty()) {
            std::tie(lower, upper) = read_params_file(params_path, a.lower_bw(), a.upper_bw());
            rep.set("params_provenance", "file");
        } else {
            rep.set("params_provenance", "default-ones");
        }
        BandedFactorization f = factor_banded(a, lower, upper);
        write_chain_file(out_path, f.chain);
        rep.set("factors_lower", (long long)f.chain.lower.size());
        rep.set("factors_upper", (long long)f.chain.upper.size());
        set_count_model(rep, f.lower_ops, f.upper_ops);
        rep.set("reconstruction_residual", residual_inf_norm(a, multiply_chain(f.chain)));
        rep.set("timing_ms", ms_since(t0));
        return 0;
    });
    std::cout << rep.str() << '\n';
    return code;
}

int cmd_solve(const std::string& matrix_path, const std::string& rhs_path, const std::string& out_path) {
    RunReport rep("solve");
    const int code = guarded(rep, [&]() -> int {
        const auto t0 = Clock::now();
        BandedMatrix a = read_band_file(matrix_path);
        std::vector<double> b = read_vector_file(rhs_path);
        describe_input(rep, a);
        rep.set("params_provenance", "default-ones");
        if (int(b.size()) != a.order())
            throw std::invalid_argument("right-hand side has length " + std::to_string(b.size()) +
                                        ", matrix has order " + std::to_string(a.order()));
        if (a.lower_bw() == 0 && a.upper_bw() == 1) {
            // already a single upper bidiagonal factor: back substitution only
            UpperBanded u(a.order(), 1);
            u.diagonal() = a.band(0);
            u.superdiagonal(1) = a.band(1);
            std::vector<double> x = solve_upper_bidiagonal(u, b);
            write_vector_file(out_path, x);
            const double residual = relative_residual(a, x, b);
            rep.set("residual", residual);
            rep.set("stages", 1);
            rep.set("flops_substitution", std::uint64_t(3) * std::uint64_t(a.order()) - 2);
            rep.set("timing_ms", ms_since(t0));
            return residual <= 1e-9 ? 0 : 4;
        }
        BandedFactorization f = factor_banded(a);
        SolveReport sol = apply_chain_substitutions(f.chain, b);
        sol.residual_inf = relative_residual(a, sol.x, b);
        write_vector_file(out_path, sol.x);
        rep.set("residual", sol.residual_inf);
        rep.set("stages", sol.stages);
        rep.set("flops_substitution", sol.flops);
        set_count_model(rep, f.lower_ops, f.upper_ops);
        rep.set("timing_ms", ms_since(t0));
        // a large residual on a solvable system means the answer is
        // not trustworthy: report it as a verification failure
        return sol.residual_inf <= 1e-9 ? 0 : 4;
    });
    std::cout << rep.str() << '\n';
    return code;
}

int cmd_verify(const std::string& matrix_path, int trials, std::uint64_t seed) {
    RunReport rep("verify");
    const int code = guarded(rep, [&]() -> int {
        const auto t0 = Clock::now();
        if (trials < 1) throw std::invalid_argument("--trials must be at least 1");
        BandedMatrix a = read_band_file(matrix_path);
        describe_input(rep, a);
        rep.set("params_provenance", "seeded");
        rep.set("seed", seed);
        rep.set("trials", trials);

        std::vector<BandedMatrix> products;
        products.reserve(std::size_t(trials));
        double worst_reconstruction = 0.0;
        for (int t = 0; t < trials; ++t) {
            FreeParameters lower = random_free_params(a.lower_bw(), mix_seed(seed, 2 * std::uint64_t(t)));
            FreeParameters upper =
                random_free_params(a.upper_bw(), mix_seed(seed, 2 * std::uint64_t(t) + 1));
            BandedFactorization f = factor_banded(a, lower, upper);
            products.push_back(multiply_chain(f.chain));
            worst_reconstruction = std::max(worst_reconstruction, residual_inf_norm(a, products.back()));
        }
        double worst_pairwise = 0.0;
        for (std::size_t i = 0; i < products.size(); ++i)
            for (std::size_t j = i + 1; j < products.size(); ++j)
                worst_pairwise = std::max(worst_pairwise, residual_inf_norm(products[i], products[j]));
        rep.set("worst_reconstruction", worst_reconstruction);
        rep.set("worst_pairwise_product_diff", worst_pairwise);
        rep.set("timing_ms", ms_since(t0));
        return worst_reconstruction <= 1e-9 ? 0 : 4;
    });
    std::cout << rep.str() << '\n';
    return code;
}

struct BenchConfig {
    int p_lo = 2, p_hi = 3;
    std::vector<long long> n_values;
    int trials = 3;
    std::uint64_t seed = 20240901;
    std::string out_path;
};

int cmd_bench(const BenchConfig& cfg) {
    RunReport rep("bench");
    const int code = guarded(rep, [&]() -> int {
        if (cfg.p_lo < 1 || cfg.p_hi < cfg.p_lo) throw std::invalid_argument("--p range is empty");
        if (cfg.n_values.empty()) throw std::invalid_argument("--n list is empty");
        if (cfg.trials < 1) throw std::invalid_argument("--trials must be at least 1");

        json records = json::array();
        for (int p = cfg.p_lo; p <= cfg.p_hi; ++p) {
            for (long long n : cfg.n_values) {
                if (n <= p + 1) throw std::invalid_argument("bench requires n > p+1");
                double t_factor_best = 0.0, t_solve_best = 0.0, worst_residual = 0.0;
                std::uint64_t factor_flops = 0, solve_flops = 0;
                OpCountReport model = predicted_op_count(p, n);
                for (int t = 0; t < cfg.trials; ++t) {
                    // bounded retries with fresh seeds on breakdown
                    std::optional<BandedFactorization> f;
                    std::optional<BandedMatrix> a;
                    std::vector<double> b;
                    int attempts = 0;
                    while (!f) {
                        const std::uint64_t s =
                            mix_seed(cfg.seed, (std::uint64_t(p) << 40) ^ (std::uint64_t(n) << 20) ^
                                                   std::uint64_t(t * 64 + attempts));
                        a = random_banded_dominant(int(n), p, 1, s);
                        b = random_vector(int(n), mix_seed(s, 1));
                        try {
                            const auto tf = Clock::now();
                            f = factor_banded(*a);
                            const double dt = ms_since(tf);
                            if (t_factor_best == 0.0 || dt < t_factor_best) t_factor_best = dt;
                        } catch (const DarbouxBreakdown&) {
                            if (++attempts >= 20) throw;
                        }
                    }
                    const auto ts = Clock::now();
                    SolveReport sol = apply_chain_substitutions(f->chain, b);
                    const double dt = ms_since(ts);
                    if (t_solve_best == 0.0 || dt < t_solve_best) t_solve_best = dt;
                    worst_residual = std::max(worst_residual, relative_residual(*a, sol.x, b));
                    factor_flops = f->lower_ops.measured_flops + f->upper_ops.measured_flops;
                    solve_flops = sol.flops;
                }
                json rec;
                rec["p"] = p;
                rec["n"] = n;
                rec["trials"] = cfg.trials;
                rec["time_factor_ms"] = t_factor_best;
                rec["time_solve_ms"] = t_solve_best;
                rec["flops_factorization"] = factor_flops;
                rec["flops_substitution"] = solve_flops;
                rec["m1_closed_form"] = model.m1_closed_form;
                rec["m2_closed_form"] = model.m2_closed_form;
                rec["m1_summed"] = model.m1_summed;
                rec["m2_summed"] = model.m2_summed;
                rec["total_closed_form"] = model.total_closed_form;
                rec["worst_residual"] = worst_residual;
                records.push_back(std::move(rec));
            }
        }
        std::ofstream out(cfg.out_path);
        if (!out) throw ParseError("cannot open '" + cfg.out_path + "' for writing");
        out << records.dump(2) << '\n';
        rep.set("records", (long long)records.size());
        rep.set("out", cfg.out_path);
        return 0;
    });
    std::cout << rep.str() << '\n';
    return code;
}

// "a..b" or a single integer
bool parse_range(const std::string& text, int& lo, int& hi) {
    const auto pos = text.find("..");
    try {
        if (pos == std::string::npos) {
            lo = hi = std::stoi(text);
        } else {
            lo = std::stoi(text.substr(0, pos));
            hi = std::stoi(text.substr(pos + 2));
        }
    } catch (...) {
        return false;
    }
    return true;
}

bool parse_list(const std::string& text, std::vector<long long>& out) {
    std::size_t i = 0;
    try {
        while (i < text.size()) {
            std::size_t j = text.find(',', i);
            if (j == std::string::npos) j = text.size();
            out.push_back(std::stoll(text.substr(i, j - i)));
            i = j + 1;
        }
    } catch (...) {
        return false;
    }
    return !out.empty();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"banded-matrix bidiagonal chain factorization and solver"};
    app.require_subcommand(1);

    std::string matrix_path, rhs_path, params_path, out_path, p_range, n_list;
    int trials = 10;
    std::uint64_t seed = 1;

    auto* factor = app.add_subcommand("factor", "factor a banded matrix into its bidiagonal chain");
    factor->add_option("--matrix", matrix_path, "input BND file")->required();
    factor->add_option("--free-params", params_path, "file with free starting parameters");
    factor->add_option("--out", out_path, "output chain file")->required();

    auto* solve = app.add_subcommand("solve", "solve A x = b through the bidiagonal chain");
    solve->add_option("--matrix", matrix_path, "input BND file")->required();
    solve->add_option("--rhs", rhs_path, "right-hand side vector file")->required();
    solve->add_option("--out", out_path, "output solution vector file")->required();

    auto* verify = app.add_subcommand("verify", "re-factor with random free parameters and check invariance");
    verify->add_option("--matrix", matrix_path, "input BND file")->required();
    verify->add_option("--trials", trials, "number of random parameter sets");
    verify->add_option("--seed", seed, "seed for the parameter draws");

    auto* bench = app.add_subcommand("bench", "time factorization and solve over a (p, n) grid");
    bench->add_option("--p", p_range, "bandwidth range a..b")->required();
    bench->add_option("--n", n_list, "comma-separated list of orders")->required();
    bench->add_option("--trials", trials, "instances per configuration");
    bench->add_option("--seed", seed, "base seed");
    bench->add_option("--out", out_path, "output JSON records file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // command-line misuse is an input error
    }

    if (factor->parsed()) return cmd_factor(matrix_path, params_path, out_path);
    if (solve->parsed()) return cmd_solve(matrix_path, rhs_path, out_path);
    if (verify->parsed()) return cmd_verify(matrix_path, trials, seed);

    BenchConfig cfg;
    if (!parse_range(p_range, cfg.p_lo, cfg.p_hi)) {
        std::cerr << "bench: cannot parse --p '" << p_range << "'\n";
        return 2;
    }
    if (!parse_list(n_list, cfg.n_values)) {
        std::cerr << "bench: cannot parse --n '" << n_list << "'\n";
        return 2;
    }
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.out_path = out_path;
    return cmd_bench(cfg);
}
