#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "causord/io.hpp"
#include "causord/ordering.hpp"
#include "causord/simon.hpp"
#include "causord/structure.hpp"

namespace {

using namespace causord;

std::string read_input(const std::string& path) {
    std::ostringstream buffer;
    if (path == "-") {
        buffer << std::cin.rdbuf();
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw Error("cannot open input file '" + path + "'");
        }
        buffer << in.rdbuf();
    }
    return buffer.str();
}

void write_output(const std::string& path, const std::string& data) {
    if (path == "-") {
        std::cout << data;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open output file '" + path + "'");
    }
    out << data;
}

Structure load_structure(const std::string& path) {
    const std::string text = read_input(path);
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        return structure_from_json(text);
    }
    return parse_structure(text);
}

BruteForceGuard make_guard(bool force_exponential) {
    BruteForceGuard guard;
    if (const char* env = std::getenv("CAUSORD_MAX_BRUTEFORCE")) {
        char* end = nullptr;
        const unsigned long value = std::strtoul(env, &end, 10);
        if (end == env || *end != '\0') {
            throw Error("CAUSORD_MAX_BRUTEFORCE must be an unsigned integer");
        }
        guard.max_equations = value;
    }
    guard.unlimited = force_exponential;
    return guard;
}

Deadline make_deadline(double seconds) {
    if (seconds > 0.0) {
        return Deadline(std::chrono::duration<double>(seconds));
    }
    return Deadline{};
}

std::string yes_no(bool value) {
    return value ? "yes" : "no";
}

int run_validate(const std::string& input, const std::string& output) {
    Structure s = load_structure(input);
    ValidationReport report = validate(s);
    std::string out;
    out += "structural: " + yes_no(report.is_structural) + "\n";
    out += "complete: " + yes_no(report.is_complete) + "\n";
    out += "equations: " + std::to_string(report.equation_count) + "\n";
    out += "variables: " + std::to_string(report.variable_count) + "\n";
    out += "density: " + std::to_string(s.density()) + "\n";
    write_output(output, out);
    if (!report.is_complete) {
        std::cerr << report.summary(s) << "\n";
        return 1;
    }
    return 0;
}

int run_map(const std::string& input,
            const std::string& output,
            const std::string& algo,
            const std::string& format,
            bool force_exponential,
            double timeout) {
    Structure s = load_structure(input);
    TotalCausalMapping phi =
        algo == "simon"
            ? recursive_total_causal_mapping(s, make_guard(force_exponential),
                                             make_deadline(timeout))
            : total_causal_mapping(s);
    if (format == "json") {
        write_output(output, mapping_to_json(s, phi));
    } else {
        std::string out;
        for (Index e = 0; e < s.equation_count(); ++e) {
            out += s.equation_name(e) + " -> " + s.variable_name(phi.variable_of(e)) + "\n";
        }
        write_output(output, out);
    }
    return 0;
}

int run_order(const std::string& input,
              const std::string& output,
              const std::string& closure_route,
              const std::string& format) {
    Structure s = load_structure(input);
    TotalCausalMapping phi = total_causal_mapping(s);
    DependencyGraph direct = direct_dependencies(s, phi);
    CausalOrdering ordering = closure_route == "floyd" ? transitive_closure_floyd(direct)
                                                       : transitive_closure(direct);
    if (format == "json") {
        write_output(output, ordering_to_json(s, phi, direct, ordering));
        return 0;
    }
    if (format == "dot") {
        write_output(output, ordering_to_dot(ordering));
        return 0;
    }

    std::size_t largest = 0;
    std::size_t coupled = 0;
    for (Index c = 0; c < ordering.cluster_count(); ++c) {
        const std::size_t size = ordering.cluster_members(c).size();
        largest = std::max(largest, size);
        if (size > 1) {
            ++coupled;
        }
    }
    std::string out;
    out += "equations: " + std::to_string(s.equation_count()) + "\n";
    out += "variables: " + std::to_string(s.variable_count()) + "\n";
    out += "density: " + std::to_string(s.density()) + "\n";
    out += "direct edges: " + std::to_string(direct.edge_count()) + "\n";
    out += "closure edges: " + std::to_string(ordering.edge_count()) + "\n";
    out += "clusters: " + std::to_string(ordering.cluster_count()) + "\n";
    out += "largest cluster: " + std::to_string(largest) + "\n";
    out += "coupled clusters: " + std::to_string(coupled) + "\n";
    write_output(output, out);
    return 0;
}

int run_clusters(const std::string& input,
                 const std::string& output,
                 const std::string& format) {
    Structure s = load_structure(input);
    CausalOrdering ordering = causal_ordering(s);
    if (format == "json") {
        write_output(output, clusters_to_json(ordering));
        return 0;
    }
    std::string out;
    for (const auto& cluster : cluster_names(ordering)) {
        for (std::size_t i = 0; i < cluster.size(); ++i) {
            out += (i == 0 ? "" : " ") + cluster[i];
        }
        out += '\n';
    }
    write_output(output, out);
    return 0;
}

int run_csdp(const std::string& input,
             const std::string& output,
             std::size_t size,
             const std::string& via,
             const std::string& format,
             bool force_exponential,
             double timeout) {
    Structure s = load_structure(input);
    const CsdpMode mode = via == "biclique" ? CsdpMode::Biclique : CsdpMode::BruteForce;
    CsdpResult result = complete_substructure_decision(s, size, mode,
                                                       make_guard(force_exponential),
                                                       make_deadline(timeout));
    std::vector<std::string> witness;
    for (Index e : result.witness_equations) {
        witness.push_back(s.equation_name(e));
    }
    std::sort(witness.begin(), witness.end());

    if (format == "json") {
        std::string out = "{\n  \"answer\": ";
        out += result.satisfiable ? "true" : "false";
        if (result.satisfiable) {
            out += ",\n  \"witness\": [";
            for (std::size_t i = 0; i < witness.size(); ++i) {
                out += (i == 0 ? "" : ", ") + ("\"" + witness[i] + "\"");
            }
            out += "]";
        }
        out += "\n}\n";
        write_output(output, out);
        return 0;
    }

    std::string out = result.satisfiable ? "yes\n" : "no\n";
    if (result.satisfiable) {
        out += "witness:";
        for (const auto& name : witness) {
            out += ' ' + name;
        }
        out += '\n';
    }
    write_output(output, out);
    return 0;
}

int run_minimal(const std::string& input,
                const std::string& output,
                const std::string& format,
                bool force_exponential,
                double timeout) {
    Structure s = load_structure(input);
    MinimalSubstructures result = minimal_substructures(s, make_guard(force_exponential),
                                                        make_deadline(timeout));
    std::vector<std::vector<std::string>> sets;
    for (const auto& equations : result.equation_sets) {
        std::vector<std::string> names;
        for (Index e : equations) {
            names.push_back(s.equation_name(e));
        }
        std::sort(names.begin(), names.end());
        sets.push_back(std::move(names));
    }
    std::sort(sets.begin(), sets.end());

    if (format == "json") {
        std::string out = "{\n  \"size\": " + std::to_string(result.size_each) +
                          ",\n  \"substructures\": [";
        for (std::size_t i = 0; i < sets.size(); ++i) {
            out += (i == 0 ? "" : ", ");
            out += "[";
            for (std::size_t j = 0; j < sets[i].size(); ++j) {
                out += (j == 0 ? "" : ", ") + ("\"" + sets[i][j] + "\"");
            }
            out += "]";
        }
        out += "]\n}\n";
        write_output(output, out);
        return 0;
    }

    std::string out;
    for (const auto& names : sets) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            out += (i == 0 ? "" : " ") + names[i];
        }
        out += '\n';
    }
    write_output(output, out);
    return 0;
}

int run_gen(const std::string& output, std::size_t equations, double extra, std::uint64_t seed) {
    Structure s = random_complete_structure(equations, extra, seed);
    std::ostringstream header;
    header << "# generated: equations=" << equations << " extra=" << extra
           << " seed=" << seed << "\n";
    write_output(output, header.str() + to_text(s));
    return 0;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t size) {
    std::uint64_t x = seed ^ (size * 0x9e3779b97f4a7c15ull);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

int run_bench(const std::string& output,
              std::vector<std::string> algos,
              const std::vector<std::size_t>& sizes,
              double extra,
              std::uint64_t seed,
              double timeout) {
    algos.erase(std::remove(algos.begin(), algos.end(), std::string{}), algos.end());
    std::ostringstream csv;
    csv << "algo,size,density,seed,millis,status\n";
    for (const auto& algo : algos) {
        for (std::size_t size : sizes) {
            Structure s = random_complete_structure(size, extra, mix_seed(seed, size));
            const Deadline deadline = make_deadline(timeout);
            const BruteForceGuard unlimited{.max_equations = 0, .unlimited = true};
            std::string status = "ok";
            const auto start = std::chrono::steady_clock::now();
            try {
                if (algo == "simon") {
                    classic_causal_ordering(s, unlimited, deadline);
                } else {
                    causal_ordering(s);
                }
            } catch (const TimeoutError&) {
                status = "TIMEOUT";
            }
            const auto elapsed = std::chrono::steady_clock::now() - start;
            const auto millis =
                std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
            csv << algo << ',' << size << ',' << extra << ',' << seed << ',' << millis
                << ',' << status << "\n";
        }
    }
    write_output(output, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"causord: causal ordering of self-contained equation structures"};
    app.require_subcommand(1);

    struct {
        std::string input = "-";
        std::string output = "-";
        std::string algo = "nayak";
        std::string closure_route = "dfs";
        std::string format;
        std::string via = "bruteforce";
        std::size_t size = 0;
        std::size_t equations = 0;
        double gen_extra = 0.0;
        double bench_extra = 3.0;
        std::uint64_t seed = 0;
        double timeout = 0.0;
        bool force_exponential = false;
        std::vector<std::string> algos{"nayak", "simon"};
        std::vector<std::size_t> sizes;
    } opts;

    auto add_io = [&](CLI::App* cmd, bool with_input = true) {
        if (with_input) {
            cmd->add_option("input", opts.input, "Structure file (.cop text or JSON), '-' for stdin");
        }
        cmd->add_option("-o,--output", opts.output, "Output file, '-' for stdout");
    };
    auto add_guard = [&](CLI::App* cmd) {
        cmd->add_flag("--force-exponential", opts.force_exponential,
                      "Run brute-force searches on instances above the guard bound");
        cmd->add_option("--timeout", opts.timeout, "Wall-clock budget in seconds (0 = none)");
    };

    auto* validate_cmd = app.add_subcommand("validate", "Check the structural and completeness conditions");
    add_io(validate_cmd);

    auto* map_cmd = app.add_subcommand("map", "Compute a total causal mapping");
    add_io(map_cmd);
    map_cmd->add_option("--algo", opts.algo, "Mapping algorithm")
        ->check(CLI::IsMember({"nayak", "simon"}));
    map_cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    add_guard(map_cmd);

    auto* order_cmd = app.add_subcommand("order", "Compute the causal ordering (closure and clusters)");
    add_io(order_cmd);
    order_cmd->add_option("--closure", opts.closure_route, "Closure route")
        ->check(CLI::IsMember({"dfs", "floyd"}));
    order_cmd->add_option("--format", opts.format, "Output format (default: summary)")
        ->check(CLI::IsMember({"summary", "json", "dot"}));

    auto* clusters_cmd = app.add_subcommand("clusters", "Print the strongly coupled clusters");
    add_io(clusters_cmd);
    clusters_cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));

    auto* csdp_cmd = app.add_subcommand("csdp", "Decide existence of a complete substructure of a given size");
    add_io(csdp_cmd);
    csdp_cmd->add_option("--size", opts.size, "Substructure size l, 1 <= l < equations")->required();
    csdp_cmd->add_option("--via", opts.via, "Decision route")
        ->check(CLI::IsMember({"bruteforce", "biclique"}));
    csdp_cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    add_guard(csdp_cmd);

    auto* minimal_cmd = app.add_subcommand("minimal", "List all minimal complete substructures");
    add_io(minimal_cmd);
    minimal_cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    add_guard(minimal_cmd);

    auto* gen_cmd = app.add_subcommand("gen", "Generate a random complete structure");
    add_io(gen_cmd, /*with_input=*/false);
    gen_cmd->add_option("--equations", opts.equations, "Number of equations")
        ->required()
        ->check(CLI::PositiveNumber);
    gen_cmd->add_option("--extra", opts.gen_extra, "Mean extra variable appearances per equation")
        ->check(CLI::NonNegativeNumber);
    gen_cmd->add_option("--seed", opts.seed, "Generator seed");

    auto* bench_cmd = app.add_subcommand("bench", "Time the polynomial and classical pipelines, CSV output");
    add_io(bench_cmd, /*with_input=*/false);
    bench_cmd->add_option("--algos", opts.algos, "Comma-separated algorithms")
        ->delimiter(',');
    bench_cmd->add_option("--sizes", opts.sizes, "Comma-separated instance sizes")
        ->required()
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--extra", opts.bench_extra, "Mean extra appearances per equation");
    bench_cmd->add_option("--seed", opts.seed, "Base seed for instance generation");
    bench_cmd->add_option("--timeout", opts.timeout, "Per-run budget in seconds (0 = none)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*validate_cmd) {
            return run_validate(opts.input, opts.output);
        }
        if (*map_cmd) {
            return run_map(opts.input, opts.output, opts.algo,
                           opts.format.empty() ? "text" : opts.format,
                           opts.force_exponential, opts.timeout);
        }
        if (*order_cmd) {
            return run_order(opts.input, opts.output, opts.closure_route,
                             opts.format.empty() ? "summary" : opts.format);
        }
        if (*clusters_cmd) {
            return run_clusters(opts.input, opts.output,
                                opts.format.empty() ? "text" : opts.format);
        }
        if (*csdp_cmd) {
            return run_csdp(opts.input, opts.output, opts.size, opts.via,
                            opts.format.empty() ? "text" : opts.format,
                            opts.force_exponential, opts.timeout);
        }
        if (*minimal_cmd) {
            return run_minimal(opts.input, opts.output,
                               opts.format.empty() ? "text" : opts.format,
                               opts.force_exponential, opts.timeout);
        }
        if (*gen_cmd) {
            return run_gen(opts.output, opts.equations, opts.gen_extra, opts.seed);
        }
        if (*bench_cmd) {
            return run_bench(opts.output, opts.algos, opts.sizes, opts.bench_extra, opts.seed,
                             opts.timeout);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
