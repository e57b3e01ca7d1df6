// Command-line front end: seeded, configured, reproducible invocation of the
// library operations with CSV / structured-text output.

#include <CLI11.hpp>

#include <fstream>
#include <future>
#include <iostream>

#include "hcross/experiments.hpp"

namespace {

using namespace hcross;

// "16,32,64" or dyadic ranges "64..16384" (doubling steps)
std::vector<std::uint64_t> parse_m_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        const auto dots = token.find("..");
        if (dots == std::string::npos) {
            out.push_back(std::stoull(token));
            continue;
        }
        const std::uint64_t from = std::stoull(token.substr(0, dots));
        const std::uint64_t to = std::stoull(token.substr(dots + 2));
        if (from < 1 || to < from) throw CLI::ValidationError("--m", "bad range " + token);
        for (std::uint64_t m = from; m <= to; m *= 2) out.push_back(m);
    }
    if (out.empty()) throw CLI::ValidationError("--m", "empty list");
    return out;
}

std::vector<std::uint64_t> seed_list(std::uint64_t master, int trials) {
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) seeds[static_cast<std::size_t>(t)] = master + t;
    return seeds;
}

SparseTrigPoly load_poly(const std::string& path) {
    if (path == "-") return read_coefficients(std::cin);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_coefficients(in);
}

struct OutputSink {
    std::string path;
    std::ofstream file;
    std::ostream& stream() {
        if (path.empty()) return std::cout;
        if (!file.is_open()) {
            file.open(path);
            if (!file) throw std::runtime_error("cannot write " + path);
            file.precision(17);
        }
        return file;
    }
};

std::string fmt17(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

/// Sidecar with every option of the run; replaying it through --config
/// reproduces the outputs byte for byte.
void write_sidecar(const std::string& out_path, const std::string& command,
                   const std::vector<std::pair<std::string, std::string>>& entries) {
    if (out_path.empty()) return;
    std::ofstream meta(out_path + ".meta");
    if (!meta) throw std::runtime_error("cannot write " + out_path + ".meta");
    meta << "command = " << command << '\n';
    write_metadata(meta, entries);
}

/// Expand "--config FILE" into a synthetic argument list; genuine flags are
/// appended afterwards so they win over configured values.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw std::runtime_error("--config needs a file");
            config_path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
    }
    if (config_path.empty()) return args;

    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open " + config_path);
    std::string command, file_arg;
    std::vector<std::string> configured;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "command") command = value;
        else if (key == "file") file_arg = value;
        else if (!key.empty() && !value.empty()) {
            configured.push_back("--" + key);
            configured.push_back(value);
        }
    }
    if (command.empty()) throw std::runtime_error(config_path + ": missing command entry");
    std::vector<std::string> full{command};
    if (!file_arg.empty()) full.push_back(file_arg);
    full.insert(full.end(), configured.begin(), configured.end());
    full.insert(full.end(), args.begin(), args.end());
    return full;
}

// split a sweep into per-(m, seed) cells and run up to `jobs` concurrently;
// rows are merged in (m, seed) order, so the output is schedule-independent
RateTable run_sweep_parallel(const SweepConfig& config, int jobs) {
    if (jobs <= 1 || config.m_values.size() * config.seeds.size() <= 1)
        return rate_sweep(config);
    std::vector<SweepConfig> cells;
    for (std::uint64_t m : config.m_values) {
        for (std::uint64_t seed : config.seeds) {
            SweepConfig cell = config;
            cell.m_values = {m};
            cell.seeds = {seed};
            cells.push_back(std::move(cell));
        }
    }
    RateTable table;
    std::size_t next = 0;
    while (next < cells.size()) {
        const std::size_t batch = std::min<std::size_t>(jobs, cells.size() - next);
        std::vector<std::future<RateTable>> futs;
        for (std::size_t i = 0; i < batch; ++i)
            futs.push_back(std::async(std::launch::async, rate_sweep, cells[next + i]));
        for (auto& fut : futs) {
            auto part = fut.get();
            table.task = part.task;
            table.rows.insert(table.rows.end(), part.rows.begin(), part.rows.end());
        }
        next += batch;
    }
    std::sort(table.rows.begin(), table.rows.end(), [](const RateRow& a, const RateRow& b) {
        return a.m != b.m ? a.m < b.m : a.seed < b.seed;
    });
    return table;
}

GapTables run_gap_parallel(int d, double r, double theta,
                           const std::vector<std::uint64_t>& ms,
                           const std::vector<std::uint64_t>& seeds, double budget_c, int jobs) {
    if (jobs <= 1 || ms.size() * seeds.size() <= 1)
        return sampling_gap_experiment(d, r, theta, ms, seeds, budget_c);
    struct Cell {
        std::uint64_t m, seed;
    };
    std::vector<Cell> cells;
    for (std::uint64_t m : ms)
        for (std::uint64_t seed : seeds) cells.push_back({m, seed});
    GapTables merged;
    merged.linear.task = "gap-linear";
    merged.nonlinear.task = "gap-nonlinear";
    std::size_t next = 0;
    while (next < cells.size()) {
        const std::size_t batch = std::min<std::size_t>(jobs, cells.size() - next);
        std::vector<std::future<GapTables>> futs;
        for (std::size_t i = 0; i < batch; ++i) {
            const Cell cell = cells[next + i];
            futs.push_back(std::async(std::launch::async, [=] {
                return sampling_gap_experiment(d, r, theta, {cell.m}, {cell.seed}, budget_c);
            }));
        }
        for (auto& fut : futs) {
            auto part = fut.get();
            merged.linear.rows.insert(merged.linear.rows.end(), part.linear.rows.begin(),
                                      part.linear.rows.end());
            merged.nonlinear.rows.insert(merged.nonlinear.rows.end(),
                                         part.nonlinear.rows.begin(), part.nonlinear.rows.end());
        }
        next += batch;
    }
    auto by_cell = [](const RateRow& a, const RateRow& b) {
        return a.m != b.m ? a.m < b.m : a.seed < b.seed;
    };
    std::sort(merged.linear.rows.begin(), merged.linear.rows.end(), by_cell);
    std::sort(merged.nonlinear.rows.begin(), merged.nonlinear.rows.end(), by_cell);
    return merged;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperbolic-cross sparse trigonometric approximation and sampling recovery"};
    app.footer("Use --config FILE to replay a recorded .meta sidecar; explicit flags win.");
    app.require_subcommand(0, 1);

    // shared options; subcommands read what they need
    int d = 2;
    double r = 1.0, theta = 1.0, p = 2.0, q = 2.0, eta = 1.0;
    std::uint64_t n = 8;
    int big_m = 8;
    double budget_c = 2.0;
    std::string m_list = "64";
    int trials = 1;
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string out_path;
    std::string solver = "omp";
    double lambda = 0.0;
    int iters = 500;
    double tol = 1e-10;
    std::uint64_t cap = kDefaultEnumerationCap;

    auto add_common = [&](CLI::App* cmd) {
        auto last = [](CLI::Option* opt) {
            opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        };
        last(cmd->add_option("--d", d, "dimension"));
        last(cmd->add_option("--r", r, "mixed smoothness r"));
        last(cmd->add_option("--theta", theta, "summation index theta"));
        last(cmd->add_option("--p", p, "integrability p"));
        last(cmd->add_option("--q", q, "Lebesgue error exponent q (inf allowed)"));
        last(cmd->add_option("--eta", eta, "plain Wiener index eta"));
        last(cmd->add_option("--n", n, "level / sparsity n"));
        last(cmd->add_option("--M", big_m, "cube radius M"));
        last(cmd->add_option("--C", budget_c, "sample budget constant C"));
        last(cmd->add_option("--m", m_list, "term budgets: list 16,32 or dyadic range 64..16384"));
        last(cmd->add_option("--trials", trials, "number of trials / seeds"));
        last(cmd->add_option("--seed", seed, "master seed"));
        last(cmd->add_option("--jobs", jobs, "max concurrent trials"));
        last(cmd->add_option("--out", out_path, "output file (stdout when absent)"));
        last(cmd->add_option("--solver", solver, "recovery solver: omp | sqrt_lasso"));
        last(cmd->add_option("--lambda", lambda, "sqrt-lasso penalty (0 = default)"));
        last(cmd->add_option("--iters", iters, "solver iteration cap"));
        last(cmd->add_option("--tol", tol, "solver tolerance"));
        last(cmd->add_option("--cap", cap, "enumeration cap"));
    };

    auto* layers_cmd = app.add_subcommand("layers", "enumerate a step hyperbolic layer");
    auto* norm_cmd = app.add_subcommand("norm", "space norm of a coefficient file");
    auto* mterm_cmd = app.add_subcommand("mterm", "m-term approximation of a coefficient file");
    auto* rates_cmd = app.add_subcommand("rates", "rate sweep over dyadic budgets");
    auto* recover_cmd = app.add_subcommand("recover", "sampling recovery pipeline");
    auto* embed_cmd = app.add_subcommand("embeddings", "embedding ratio check");
    auto* lemmas_cmd = app.add_subcommand("lemmas", "verify auxiliary lemmas");
    auto* gap_cmd = app.add_subcommand("gap", "linear vs nonlinear sampling comparison");

    auto last = [](CLI::Option* opt) {
        opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    };
    std::string norm_space = "wiener";
    std::string input_file;
    norm_cmd->add_option("file", input_file, "coefficient file ('-' for stdin)");
    last(norm_cmd->add_option("--space", norm_space, "wiener | wiener0 | besov | sobolev | lq"));

    std::string mterm_method = "greedy";
    mterm_cmd->add_option("file", input_file, "coefficient file ('-' for stdin)");
    last(mterm_cmd->add_option("--method", mterm_method, "greedy | maurey | layered"));
    std::string mterm_space = "wiener";
    last(mterm_cmd->add_option("--space", mterm_space, "greedy target: wiener | wiener0 | l2"));

    std::string rates_task = "sigma-lower";
    last(rates_cmd->add_option("--task", rates_task,
                               "sigma-lower | sigma-upper | a2a | recovery"));

    recover_cmd->add_option("file", input_file, "coefficient file (fooling input when absent)");

    std::string embed_case = "b2a-norm1";
    last(embed_cmd->add_option("--case", embed_case, "b2a-norm1 | b2a | w2a | a2b | a2w"));
    int embed_level = 4;
    last(embed_cmd->add_option("--levels", embed_level, "max layer level of random supports"));

    for (auto* cmd : {layers_cmd, norm_cmd, mterm_cmd, rates_cmd, recover_cmd, embed_cmd,
                      lemmas_cmd, gap_cmd})
        add_common(cmd);

    try {
        auto args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& err) {
        return app.exit(err);
    } catch (const std::exception& err) {
        std::cerr << "error = " << err.what() << '\n';
        return 2;
    }

    // everything needed to replay this invocation through --config
    auto sidecar = [&](const std::string& command) {
        std::vector<std::pair<std::string, std::string>> kv;
        if (!input_file.empty()) kv.emplace_back("file", input_file);
        kv.emplace_back("d", std::to_string(d));
        kv.emplace_back("r", fmt17(r));
        kv.emplace_back("theta", fmt17(theta));
        kv.emplace_back("p", fmt17(p));
        kv.emplace_back("q", fmt17(q));
        kv.emplace_back("eta", fmt17(eta));
        kv.emplace_back("n", std::to_string(n));
        kv.emplace_back("M", std::to_string(big_m));
        kv.emplace_back("C", fmt17(budget_c));
        kv.emplace_back("m", m_list);
        kv.emplace_back("trials", std::to_string(trials));
        kv.emplace_back("seed", std::to_string(seed));
        kv.emplace_back("jobs", std::to_string(jobs));
        kv.emplace_back("solver", solver);
        kv.emplace_back("lambda", fmt17(lambda));
        kv.emplace_back("iters", std::to_string(iters));
        kv.emplace_back("tol", fmt17(tol));
        kv.emplace_back("cap", std::to_string(cap));
        if (command == "norm") kv.emplace_back("space", norm_space);
        if (command == "mterm") {
            kv.emplace_back("method", mterm_method);
            kv.emplace_back("space", mterm_space);
        }
        if (command == "rates") kv.emplace_back("task", rates_task);
        if (command == "embeddings") {
            kv.emplace_back("case", embed_case);
            kv.emplace_back("levels", std::to_string(embed_level));
        }
        kv.emplace_back("out", out_path);
        write_sidecar(out_path, command, kv);
    };

    try {
        if (layers_cmd->parsed()) {
            auto layer = enumerate_layer(static_cast<int>(n), d, cap);
            OutputSink sink{out_path};
            write_indices(sink.stream(), layer);
            sink.stream() << "count = " << layer.size() << '\n';
            sidecar("layers");
        } else if (norm_cmd->parsed()) {
            auto f = load_poly(input_file.empty() ? "-" : input_file);
            SpaceParams params = SpaceParams::lebesgue(2.0);
            if (norm_space == "wiener") params = SpaceParams::wiener_weighted(r, theta);
            else if (norm_space == "wiener0") params = SpaceParams::wiener_plain(eta);
            else if (norm_space == "besov") params = SpaceParams::besov(r, p, theta);
            else if (norm_space == "sobolev") params = SpaceParams::sobolev(r, p);
            else if (norm_space == "lq") params = SpaceParams::lebesgue(q);
            else throw std::invalid_argument("unknown --space " + norm_space);
            OutputSink sink{out_path};
            sink.stream() << std::setprecision(17) << norm(f, params) << '\n';
            sidecar("norm");
        } else if (mterm_cmd->parsed()) {
            auto f = load_poly(input_file.empty() ? "-" : input_file);
            const std::uint64_t budget = parse_m_list(m_list).front();
            MTermResult res(f.dim());
            if (mterm_method == "greedy") {
                SpaceParams target = SpaceParams::lebesgue(2.0);
                if (mterm_space == "wiener") target = SpaceParams::wiener_weighted(r, theta);
                else if (mterm_space == "wiener0") target = SpaceParams::wiener_plain(eta);
                else if (mterm_space != "l2")
                    throw std::invalid_argument("unknown --space " + mterm_space);
                res = greedy_mterm(f, budget, target);
            } else if (mterm_method == "maurey") {
                res = maurey_mterm(f, budget, q, trials, seed);
            } else if (mterm_method == "layered") {
                res = layered_mterm(f, budget, q, r, theta, seed, std::max(trials, 1));
            } else {
                throw std::invalid_argument("unknown --method " + mterm_method);
            }
            OutputSink sink{out_path};
            write_mterm_report(sink.stream(), res);
            sidecar("mterm");
        } else if (rates_cmd->parsed()) {
            SweepConfig config;
            if (rates_task == "sigma-lower") config.task = SweepTask::SigmaLower;
            else if (rates_task == "sigma-upper") config.task = SweepTask::SigmaUpper;
            else if (rates_task == "a2a") config.task = SweepTask::A2A;
            else if (rates_task == "recovery") config.task = SweepTask::Recovery;
            else throw std::invalid_argument("unknown --task " + rates_task);
            config.d = d;
            config.r = r;
            config.theta = theta;
            config.eta = eta;
            config.q = q;
            config.m_values = parse_m_list(m_list);
            config.seeds = seed_list(seed, trials);
            config.budget_constant = budget_c;
            config.cap = cap;
            auto table = run_sweep_parallel(config, jobs);
            OutputSink sink{out_path};
            write_rate_csv(sink.stream(), table);
            sidecar("rates");
        } else if (recover_cmd->parsed()) {
            RecoveryConfig config;
            config.sparsity = n;
            config.cube_radius = big_m;
            config.q = q;
            config.budget_constant = budget_c;
            config.solver = solver == "sqrt_lasso" ? RecoveryConfig::Solver::SqrtLasso
                                                   : RecoveryConfig::Solver::Omp;
            if (solver != "omp" && solver != "sqrt_lasso")
                throw std::invalid_argument("unknown --solver " + solver);
            config.max_iterations = iters;
            config.tolerance = tol;
            config.lambda = lambda;
            SparseTrigPoly f(d);
            if (!input_file.empty()) {
                f = load_poly(input_file);
            } else {
                const int layer = smallest_layer_with_cardinality(2 * n, d);
                f = fooling_wiener(layer, d, r, theta, cap);
            }
            const auto seeds = seed_list(seed, trials);
            std::vector<RecoveryReport> reports(seeds.size());
            std::size_t next = 0;
            while (next < seeds.size()) {
                const std::size_t batch =
                    std::min<std::size_t>(std::max(jobs, 1), seeds.size() - next);
                std::vector<std::future<RecoveryReport>> futs;
                for (std::size_t i = 0; i < batch; ++i) {
                    const std::uint64_t s = seeds[next + i];
                    futs.push_back(std::async(std::launch::async,
                                              [&f, &config, s] { return recover_pipeline(f, config, s); }));
                }
                for (std::size_t i = 0; i < batch; ++i) reports[next + i] = futs[i].get();
                next += batch;
            }
            OutputSink sink{out_path};
            for (const auto& rep : reports) {
                write_recovery_report(sink.stream(), rep);
                sink.stream() << '\n';
            }
            sidecar("recover");
        } else if (embed_cmd->parsed()) {
            EmbeddingConfig config;
            if (embed_case == "b2a-norm1") config.which = EmbeddingCase::BesovToWienerNorm1;
            else if (embed_case == "b2a") config.which = EmbeddingCase::BesovToWienerGeneral;
            else if (embed_case == "w2a") config.which = EmbeddingCase::SobolevToWiener;
            else if (embed_case == "a2b") config.which = EmbeddingCase::WienerToBesov;
            else if (embed_case == "a2w") config.which = EmbeddingCase::WienerToSobolev;
            else throw std::invalid_argument("unknown --case " + embed_case);
            config.trials = trials;
            config.d = d;
            config.max_level = embed_level;
            config.r = r;
            config.p = p;
            config.theta = theta;
            config.seed = seed;
            auto rep = embedding_check(config);
            OutputSink sink{out_path};
            auto& os = sink.stream();
            os << std::setprecision(17);
            os << "case = " << rep.name << '\n'
               << "trials = " << rep.trials << '\n'
               << "violations = " << rep.violations << '\n'
               << "max_ratio = " << rep.max_ratio << '\n'
               << "constant_ratio = " << rep.constant_ratio << '\n'
               << "growth_slope = " << rep.growth_slope << '\n';
            for (const auto& [level, ratio] : rep.per_level_max)
                os << "level_" << level << "_max = " << ratio << '\n';
            sidecar("embeddings");
        } else if (lemmas_cmd->parsed()) {
            auto report = verify_auxiliary_lemmas();
            OutputSink sink{out_path};
            write_lemma_report(sink.stream(), report);
            sidecar("lemmas");
            if (!report.all_pass()) return 1;
        } else if (gap_cmd->parsed()) {
            auto gap = run_gap_parallel(d, r, theta, parse_m_list(m_list),
                                        seed_list(seed, trials), budget_c, jobs);
            OutputSink sink{out_path};
            write_gap_csv(sink.stream(), gap);
            sidecar("gap");
        } else {
            std::cout << app.help();
        }
    } catch (const std::exception& err) {
        std::cerr << "error = " << err.what() << '\n';
        return 2;
    }
    return 0;
}
