#include "npp/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json_number.hpp"
#include "npp/bifeas.hpp"
#include "npp/conjugate.hpp"
#include "npp/error.hpp"
#include "npp/follower.hpp"
#include "npp/instance.hpp"
#include "npp/milp.hpp"
#include "npp/oracle.hpp"

namespace npp::cli {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}


json tolls_json(const TollVector& t) {
    json arr = json::array();
    for (int i = 0; i < t.size(); ++i) arr.push_back(t.is_unbounded(i) ? json("unbounded") : detail::json_number(t[i]));
    return arr;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json path_json(const Instance& inst, const std::vector<int>& arcs, int id) {
    json p{{"base_cost", detail::json_number(path_base_cost(inst, arcs))}, {"w", path_usage(inst, arcs)}, {"arcs", arcs}};
    if (id >= 0) p["id"] = id;
    return p;
}

struct SolveArgs {
    std::string instance;
    std::string method = "milp";
    int cuts = 0;
    double time_limit = std::numeric_limits<double>::infinity();
    double gap = 0.0;
};

int do_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
    const Instance inst = load_instance(a.instance);
    const auto start = Clock::now();
    json doc;
    SolveStatus status = SolveStatus::optimal;
    if (a.method == "milp") {
        Limits lim;
        lim.time_seconds = a.time_limit;
        lim.gap = a.gap;
        const SolveReport r = solve_milp(inst, a.cuts, lim);
        status = r.status;
        doc = json::parse(report_to_json(r));
    } else if (a.method == "enum") {
        const EnumerationResult r = solve_by_enumeration(inst);
        doc = {{"revenue", detail::json_number(r.revenue)}, {"bound", detail::json_number(r.revenue)}, {"gap", 0},
               {"nodes", r.table.size()}, {"w", r.capacity}, {"t", tolls_json(r.tolls)}};
    } else if (a.method == "oracle") {
        const OracleResult r = brute_force_solve(inst);
        std::vector<double> w(static_cast<std::size_t>(inst.tolled_count()), 0.0);
        for (std::size_t k = 0; k < r.paths.size(); ++k) {
            const std::vector<int> u = path_usage(inst, r.paths[k]);
            for (std::size_t i = 0; i < u.size(); ++i) w[i] += inst.commodity(static_cast<int>(k)).demand * u[i];
        }
        json wj = json::array();
        for (double v : w) wj.push_back(detail::json_number(v));
        doc = {{"revenue", detail::json_number(r.revenue)}, {"bound", detail::json_number(r.revenue)}, {"gap", 0},
               {"nodes", r.compositions}, {"w", wj}, {"t", tolls_json(r.tolls)}};
    } else {
        const SingleTollResult r = solve_single_toll(inst);
        double users = 0.0;
        for (int k = 0; k < inst.commodity_count(); ++k)
            if (r.thresholds[static_cast<std::size_t>(k)] >= r.toll - kTol.duality_gap && r.toll > 0.0)
                users += inst.commodity(k).demand;
        doc = {{"revenue", detail::json_number(r.revenue)}, {"bound", detail::json_number(r.revenue)}, {"gap", 0},
               {"nodes", 0}, {"w", json::array({detail::json_number(users)})}, {"t", detail::json_number(r.toll)}};
    }
    if (a.method != "milp") {
        doc["millis"] = elapsed_ms(start);
        doc["status"] = "optimal";
        doc["cuts"] = 0;
        doc["cut_millis"] = 0;
    }
    doc["method"] = a.method;
    out << doc.dump() << '\n';
    err << a.method << ": revenue " << doc["revenue"].dump() << ", status " << doc["status"].get<std::string>() << '\n';
    return status == SolveStatus::optimal ? kExitOk : kExitLimit;
}

int do_generate(int side, int commodities, std::uint64_t seed, const std::string& config, std::ostream& out) {
    const GridConfig cfg = config.empty() ? GridConfig{} : parse_grid_config(read_file(config));
    out << instance_to_json(generate_grid(side, commodities, seed, cfg)) << '\n';
    return kExitOk;
}

int do_paths(const std::string& file, std::ostream& out, std::ostream& err) {
    const Instance inst = load_instance(file);
    json doc = json::array();
    for (int k = 0; k < inst.commodity_count(); ++k) {
        json paths = json::array();
        const auto recs = enumerate_bf_paths(inst, k);
        for (std::size_t q = 0; q < recs.size(); ++q) paths.push_back(path_json(inst, recs[q].arcs, static_cast<int>(q)));
        doc.push_back({{"commodity", k}, {"paths", paths}});
        err << "commodity " << k << ": " << recs.size() << " bilevel feasible paths\n";
    }
    out << doc.dump(2) << '\n';
    return kExitOk;
}

int do_classify(const std::string& file, const std::vector<int>& w, std::ostream& out, std::ostream& err) {
    const Instance inst = load_instance(file);
    if (static_cast<int>(w.size()) != inst.tolled_count())
        throw PreconditionError("--w needs one entry per tolled arc");
    const Classification c = classify_w(inst, w);
    json witnesses = json::array();
    for (const auto& dec : c.witnesses) {
        json d = json::array();
        for (const PathRecord& r : dec) {
            json p = path_json(inst, r.arcs, -1);
            p["commodity"] = r.commodity;
            d.push_back(std::move(p));
        }
        witnesses.push_back(std::move(d));
    }
    out << json{{"w", w}, {"classification", to_string(c.classification)}, {"reason", c.reason},
                {"g", detail::json_number(c.g_value)}, {"witnesses", witnesses}}.dump(2)
        << '\n';
    err << to_string(c.classification) << ": " << c.reason << '\n';
    return kExitOk;
}

std::vector<std::pair<double, double>> parse_box(const std::vector<std::string>& parts) {
    std::vector<std::pair<double, double>> box;
    for (const std::string& s : parts) {
        const auto colon = s.find(':');
        try {
            if (colon == std::string::npos) {
                box.emplace_back(0.0, std::stod(s));
            } else {
                box.emplace_back(std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1)));
            }
        } catch (const std::logic_error&) {
            throw CLI::ValidationError("--box", "expected lo:hi or hi, got '" + s + "'");
        }
    }
    return box;
}

int do_plot(const std::string& file, const std::vector<std::pair<double, double>>& box, int resolution, std::ostream& out) {
    const Instance inst = load_instance(file);
    if (static_cast<int>(box.size()) != inst.tolled_count()) throw PreconditionError("--box needs one range per tolled arc");
    const auto samples = reaction_plot_sample(inst, box, resolution);
    out << plot_csv(inst, samples);
    return kExitOk;
}

struct BenchArgs {
    std::vector<int> sides{3, 4};
    std::vector<int> pair_limits{0, 1000};
    std::vector<std::uint64_t> seeds{1, 2, 3};
    int commodities = 12;
    std::string config;
    std::string out_dir = "bench_out";
    double time_limit = 60.0;
};

int do_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    const GridConfig cfg = a.config.empty() ? GridConfig{} : parse_grid_config(read_file(a.config));
    std::filesystem::create_directories(a.out_dir);
    std::vector<json> runs;
    bool any_limit = false;
    for (int side : a.sides)
        for (std::uint64_t seed : a.seeds) {
            const Instance inst = generate_grid(side, a.commodities, seed, cfg);
            for (int n : a.pair_limits) {
                Limits lim;
                lim.time_seconds = a.time_limit;
                const SolveReport r = solve_milp(inst, n, lim);
                any_limit = any_limit || r.status != SolveStatus::optimal;
                json rec = json::parse(report_to_json(r));
                rec["L"] = side;
                rec["N"] = n;
                rec["seed"] = seed;
                rec["commodities"] = a.commodities;
                const std::string name = "L" + std::to_string(side) + "_seed" + std::to_string(seed) + "_N" + std::to_string(n) + ".json";
                std::ofstream(std::filesystem::path(a.out_dir) / name) << rec.dump(2) << '\n';
                err << name << ": revenue " << rec["revenue"].dump() << ", nodes " << r.nodes << ", " << std::fixed
                    << std::setprecision(1) << r.millis << " ms\n";
                runs.push_back(std::move(rec));
            }
        }
    const json summary = summarize_runs(runs);
    std::ofstream(std::filesystem::path(a.out_dir) / "summary.json") << summary.dump(2) << '\n';
    err << "   L      N  solved  mean_ms  mean_gap  mean_nodes\n";
    for (const json& row : summary)
        err << std::setw(4) << row["L"].get<int>() << std::setw(7) << row["N"].get<int>() << std::setw(5)
            << row["solved"].get<int>() << '/' << row["runs"].get<int>() << std::setw(9) << std::setprecision(1)
            << row["mean_millis"].get<double>() << std::setw(10) << std::setprecision(4) << row["mean_gap"].get<double>()
            << std::setw(12) << std::setprecision(1) << row["mean_nodes"].get<double>() << '\n';
    out << summary.dump(2) << '\n';
    return any_limit ? kExitLimit : kExitOk;
}

}  // namespace

json summarize_runs(const std::vector<json>& runs) {
    struct Acc {
        int runs = 0, solved = 0;
        double millis = 0, gap = 0, nodes = 0;
    };
    std::map<std::pair<int, int>, Acc> groups;
    for (const json& r : runs) {
        Acc& g = groups[{r.at("L").get<int>(), r.at("N").get<int>()}];
        ++g.runs;
        g.solved += r.at("status").get<std::string>() == "optimal";
        g.millis += r.at("millis").get<double>();
        g.gap += r.at("gap").is_number() ? r.at("gap").get<double>() : 1.0;
        g.nodes += r.at("nodes").get<double>();
    }
    json rows = json::array();
    for (const auto& [key, g] : groups)
        rows.push_back({{"L", key.first}, {"N", key.second}, {"runs", g.runs}, {"solved", g.solved},
                        {"mean_millis", g.millis / g.runs}, {"mean_gap", g.gap / g.runs}, {"mean_nodes", g.nodes / g.runs}});
    return rows;
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Network pricing solver"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "Solve an instance and print a report");
    solve->add_option("instance", solve_args.instance, "Instance JSON file")->required();
    solve->add_option("--method", solve_args.method, "enum | milp | single-toll | oracle")
        ->check(CLI::IsMember({"enum", "milp", "single-toll", "oracle"}));
    solve->add_option("--cuts", solve_args.cuts, "Commodity pairs tested for cuts")->check(CLI::NonNegativeNumber);
    solve->add_option("--time-limit", solve_args.time_limit, "Seconds")->check(CLI::NonNegativeNumber);
    solve->add_option("--gap", solve_args.gap, "Relative gap limit")->check(CLI::NonNegativeNumber);

    int side = 0, commodities = 0;
    std::uint64_t seed = 0;
    std::string config;
    auto* generate = app.add_subcommand("generate", "Print a random grid instance");
    generate->add_option("--grid", side, "Grid side L")->required()->check(CLI::Range(2, 1000));
    generate->add_option("--commodities", commodities, "Number of commodities")->required()->check(CLI::PositiveNumber);
    generate->add_option("--seed", seed, "Random seed")->required();
    generate->add_option("--config", config, "Generator settings JSON")->check(CLI::ExistingFile);

    std::string file;
    auto* paths = app.add_subcommand("paths", "List bilevel feasible paths");
    paths->add_option("instance", file, "Instance JSON file")->required();

    std::vector<int> w;
    auto* classify = app.add_subcommand("classify", "Strong or weak bilevel feasibility of a usage vector");
    classify->add_option("instance", file, "Instance JSON file")->required();
    classify->add_option("--w", w, "Usage per tolled arc")->required()->delimiter(',');

    std::vector<std::string> box_parts;
    int resolution = 10;
    auto* plot = app.add_subcommand("plot", "Reaction plot samples as CSV");
    plot->add_option("instance", file, "Instance JSON file")->required();
    plot->add_option("--box", box_parts, "Toll range per tolled arc, lo:hi")->required()->delimiter(',');
    plot->add_option("--resolution", resolution, "Samples per axis")->check(CLI::PositiveNumber);

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "Cuts on/off experiment over random grids");
    bench->add_option("--L-list", bench_args.sides, "Grid sides")->delimiter(',')->check(CLI::Range(2, 1000));
    bench->add_option("--N-list", bench_args.pair_limits, "Pair limits")->delimiter(',')->check(CLI::NonNegativeNumber);
    bench->add_option("--seeds", bench_args.seeds, "Seeds")->delimiter(',');
    bench->add_option("--commodities", bench_args.commodities, "Commodities per instance")->check(CLI::PositiveNumber);
    bench->add_option("--config", bench_args.config, "Generator settings JSON")->check(CLI::ExistingFile);
    bench->add_option("--out", bench_args.out_dir, "Output directory");
    bench->add_option("--time-limit", bench_args.time_limit, "Seconds per solve")->check(CLI::NonNegativeNumber);

    std::vector<const char*> argv;
    for (const std::string& s : args) argv.push_back(s.c_str());
    std::vector<std::pair<double, double>> box;
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (*plot) box = parse_box(box_parts);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*solve) return do_solve(solve_args, out, err);
        if (*generate) return do_generate(side, commodities, seed, config, out);
        if (*paths) return do_paths(file, out, err);
        if (*classify) return do_classify(file, w, out, err);
        if (*plot) return do_plot(file, box, resolution, out);
        return do_bench(bench_args, out, err);
    } catch (const BudgetExceeded& e) {
        err << "limit: " << e.what() << '\n';
        return kExitLimit;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
}

}  // namespace npp::cli
