#include "causord/io.hpp"

#include <algorithm>
#include <utility>
#include <vector>

#include <json.hpp>

namespace causord {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string quoted(const std::string& name) {
    return "\"" + name + "\"";
}

std::vector<std::pair<std::string, std::string>> named_edges(
    const std::vector<std::string>& names,
    const std::vector<std::pair<Index, Index>>& edges) {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(edges.size());
    for (auto [from, to] : edges) {
        out.emplace_back(names[from], names[to]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

ordered_json edges_to_json(const std::vector<std::pair<std::string, std::string>>& edges) {
    ordered_json array = ordered_json::array();
    for (const auto& [from, to] : edges) {
        array.push_back({from, to});
    }
    return array;
}

ordered_json clusters_json_value(const CausalOrdering& ordering) {
    ordered_json array = ordered_json::array();
    for (const auto& cluster : cluster_names(ordering)) {
        array.push_back(cluster);
    }
    return array;
}

ordered_json mapping_json_value(const Structure& s, const TotalCausalMapping& mapping) {
    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.reserve(s.equation_count());
    for (Index e = 0; e < s.equation_count(); ++e) {
        pairs.emplace_back(s.equation_name(e), s.variable_name(mapping.variable_of(e)));
    }
    std::sort(pairs.begin(), pairs.end());
    ordered_json object = ordered_json::object();
    for (const auto& [equation, variable] : pairs) {
        object[equation] = variable;
    }
    return object;
}

}  // namespace

std::vector<std::vector<std::string>> cluster_names(const CausalOrdering& ordering) {
    std::vector<std::vector<std::string>> out;
    out.reserve(ordering.cluster_count());
    for (const auto& cluster : ordering.clusters()) {
        std::vector<std::string> names;
        names.reserve(cluster.size());
        for (Index v : cluster) {
            names.push_back(ordering.vertex_names()[v]);
        }
        std::sort(names.begin(), names.end());
        out.push_back(std::move(names));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string to_text(const Structure& s) {
    std::string out;
    for (Index e = 0; e < s.equation_count(); ++e) {
        out += s.equation_name(e);
        out += ':';
        for (Index v : s.variables_of(e)) {
            out += ' ';
            out += s.variable_name(v);
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const Structure& s) {
    ordered_json equations = ordered_json::array();
    for (Index e = 0; e < s.equation_count(); ++e) {
        ordered_json vars = ordered_json::array();
        for (Index v : s.variables_of(e)) {
            vars.push_back(s.variable_name(v));
        }
        equations.push_back({{"id", s.equation_name(e)}, {"vars", std::move(vars)}});
    }
    ordered_json root = {{"equations", std::move(equations)}};
    return root.dump(2) + "\n";
}

Structure structure_from_json(std::string_view json_text, ParseOptions options) {
    ordered_json root;
    try {
        root = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object() || !root.contains("equations") || !root["equations"].is_array()) {
        throw ParseError("expected an object with an \"equations\" array");
    }

    StructureBuilder builder;
    bool saw_equation = false;
    for (const auto& entry : root["equations"]) {
        if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string() ||
            !entry.contains("vars") || !entry["vars"].is_array()) {
            throw ParseError("each equation needs a string \"id\" and a \"vars\" array");
        }
        const std::string id = entry["id"].get<std::string>();
        if (!is_valid_identifier(id)) {
            throw ParseError("invalid equation id '" + id + "'");
        }
        std::vector<std::string> vars;
        for (const auto& var : entry["vars"]) {
            if (!var.is_string() || !is_valid_identifier(var.get<std::string>())) {
                throw ParseError("invalid variable name in equation '" + id + "'");
            }
            vars.push_back(var.get<std::string>());
        }
        if (vars.empty()) {
            throw ParseError("equation '" + id + "' has no variables");
        }
        try {
            builder.add_equation(id, vars);
        } catch (const Error& e) {
            throw ParseError(e.what());
        }
        saw_equation = true;
    }
    if (!saw_equation && !options.allow_empty) {
        throw ParseError("structure has no equations");
    }
    return builder.build(options.allow_empty);
}

std::string mapping_to_json(const Structure& s, const TotalCausalMapping& mapping) {
    ordered_json root = {{"mapping", mapping_json_value(s, mapping)}};
    return root.dump(2) + "\n";
}

std::string ordering_to_json(const Structure& s,
                             const TotalCausalMapping& mapping,
                             const DependencyGraph& direct,
                             const CausalOrdering& ordering) {
    ordered_json root = ordered_json::object();
    root["mapping"] = mapping_json_value(s, mapping);
    root["direct"] = edges_to_json(named_edges(direct.vertex_names(), direct.edges()));
    root["closure"] = edges_to_json(named_edges(ordering.vertex_names(), ordering.edges()));
    root["clusters"] = clusters_json_value(ordering);
    return root.dump(2) + "\n";
}

std::string clusters_to_json(const CausalOrdering& ordering) {
    ordered_json root = {{"clusters", clusters_json_value(ordering)}};
    return root.dump(2) + "\n";
}

std::string dependency_graph_to_dot(const DependencyGraph& g) {
    std::string out = "digraph direct_dependencies {\n";
    std::vector<std::string> nodes = g.vertex_names();
    std::sort(nodes.begin(), nodes.end());
    for (const auto& node : nodes) {
        out += "  " + quoted(node) + ";\n";
    }
    for (const auto& [from, to] : named_edges(g.vertex_names(), g.edges())) {
        out += "  " + quoted(from) + " -> " + quoted(to) + ";\n";
    }
    out += "}\n";
    return out;
}

std::string ordering_to_dot(const CausalOrdering& ordering) {
    std::string out = "digraph causal_ordering {\n";
    std::size_t group = 0;
    std::vector<std::string> singletons;
    for (const auto& cluster : cluster_names(ordering)) {
        if (cluster.size() == 1) {
            singletons.push_back(cluster.front());
            continue;
        }
        out += "  subgraph cluster_" + std::to_string(group++) + " {\n";
        out += "    label=\"strongly coupled\";\n";
        for (const auto& node : cluster) {
            out += "    " + quoted(node) + ";\n";
        }
        out += "  }\n";
    }
    for (const auto& node : singletons) {
        out += "  " + quoted(node) + ";\n";
    }
    for (const auto& [from, to] : named_edges(ordering.vertex_names(), ordering.edges())) {
        out += "  " + quoted(from) + " -> " + quoted(to) + ";\n";
    }
    out += "}\n";
    return out;
}

}  // namespace causord
