#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cpnet/cpnet.hpp"
#include "cpnet/error.hpp"
#include "cpnet/semantic_table.hpp"

namespace cpnet {

using Json = nlohmann::ordered_json;

namespace detail {

inline const Json& json_field(const Json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key))
        fail(ErrorCode::SyntaxError, std::string("missing field '") + key + "'");
    return obj.at(key);
}

[[noreturn]] inline void rethrow_as_syntax(const std::exception& e) {
    fail(ErrorCode::SyntaxError, e.what());
}

}  // namespace detail

inline Json to_json(const SemanticTable& table) {
    Json attrs = Json::array();
    for (const AttributeSpec& spec : table.attributes()) {
        Json levels = Json::array();
        for (const SemanticInterval& lvl : spec.levels)
            levels.push_back(Json{{"label", lvl.label}, {"lo", lvl.lo}, {"hi", lvl.hi}});
        attrs.push_back(Json{{"name", spec.name}, {"levels", std::move(levels)}});
    }
    return Json{{"attributes", std::move(attrs)}};
}

inline SemanticTable table_from_json(const Json& j) {
    try {
        std::vector<AttributeSpec> attrs;
        for (const Json& item : detail::json_field(j, "attributes")) {
            AttributeSpec spec;
            spec.name = detail::json_field(item, "name").get<std::string>();
            for (const Json& lvl : detail::json_field(item, "levels"))
                spec.levels.push_back(SemanticInterval{detail::json_field(lvl, "label").get<std::string>(),
                                                       detail::json_field(lvl, "lo").get<long long>(),
                                                       detail::json_field(lvl, "hi").get<long long>()});
            attrs.push_back(std::move(spec));
        }
        return SemanticTable(std::move(attrs));
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        detail::rethrow_as_syntax(e);
    }
}

inline Json to_json(const CpNet& cp) {
    Json j;
    j["semantic_table"] = to_json(cp.table);
    j["attributes"] = cp.graph.nodes();
    Json edges = Json::array();
    for (const auto& [from, to] : cp.graph.edges()) edges.push_back(Json::array({from, to}));
    j["edges"] = std::move(edges);
    Json cpts = Json::object();
    for (const auto& [name, cpt] : cp.cpts) {
        Json rows = Json::array();
        for (const PreferenceStatement& row : cpt.rows) {
            Json item;
            item["condition"] = Json::object();
            for (const auto& [attr, level] : row.condition) item["condition"][attr] = level;
            item["order"] = row.order;
            if (row.demand) item["demand"] = *row.demand;
            rows.push_back(std::move(item));
        }
        cpts[name] = std::move(rows);
    }
    j["cpts"] = std::move(cpts);
    return j;
}

/// Structural parse only: shape and types are enforced (SyntaxError), but the
/// result may still fail validate() -- callers decide how strict to be.
inline CpNet cpnet_from_json(const Json& j) {
    try {
        CpNet cp;
        cp.table = table_from_json(detail::json_field(j, "semantic_table"));
        std::vector<std::string> nodes;
        for (const Json& node : detail::json_field(j, "attributes")) nodes.push_back(node.get<std::string>());
        std::vector<std::pair<std::string, std::string>> edges;
        for (const Json& edge : detail::json_field(j, "edges")) {
            if (!edge.is_array() || edge.size() != 2)
                fail(ErrorCode::SyntaxError, "each edge must be a [parent, child] pair");
            edges.emplace_back(edge.at(0).get<std::string>(), edge.at(1).get<std::string>());
        }
        cp.graph = DependencyGraph(std::move(nodes), std::move(edges));
        for (const auto& [name, rows] : detail::json_field(j, "cpts").items()) {
            Cpt cpt;
            cpt.attribute = name;
            if (cp.graph.has_node(name)) cpt.parents = cp.graph.parents_of(name);
            for (const Json& item : rows) {
                PreferenceStatement row;
                for (const auto& [attr, level] : detail::json_field(item, "condition").items())
                    row.condition[attr] = level.get<int>();
                for (const Json& level : detail::json_field(item, "order")) row.order.push_back(level.get<int>());
                if (item.contains("demand")) row.demand = item.at("demand").get<int>();
                cpt.rows.push_back(std::move(row));
            }
            cp.cpts[name] = std::move(cpt);
        }
        normalize(cp);
        return cp;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        detail::rethrow_as_syntax(e);
    }
}

inline std::string serialize_cpnet(const CpNet& cp) { return to_json(cp).dump(2) + "\n"; }
inline std::string serialize_table(const SemanticTable& table) { return to_json(table).dump(2) + "\n"; }

inline Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const std::exception& e) {
        detail::rethrow_as_syntax(e);
    }
}

inline CpNet parse_cpnet(const std::string& text) { return cpnet_from_json(parse_json_text(text)); }
inline SemanticTable parse_table(const std::string& text) { return table_from_json(parse_json_text(text)); }

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) fail(ErrorCode::IoError, "read failure on '" + path + "'");
    return buffer.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    out << text;
    if (!out) fail(ErrorCode::IoError, "write failure on '" + path + "'");
}

/// Reads and parses a net; with `validated` also rejects semantic violations.
inline CpNet load_cpnet(const std::string& path, bool validated = true) {
    CpNet cp = parse_cpnet(read_text_file(path));
    if (validated) {
        std::vector<Violation> violations = validate(cp);
        if (!violations.empty()) {
            std::string msg = path + ": " + std::to_string(violations.size()) + " violation(s); first: " +
                              violations.front().message;
            fail(ErrorCode::ValidationError, msg);
        }
    }
    return cp;
}

inline SemanticTable load_table(const std::string& path) { return parse_table(read_text_file(path)); }

inline void save_cpnet(const std::string& path, const CpNet& cp) { write_text_file(path, serialize_cpnet(cp)); }
inline void save_table(const std::string& path, const SemanticTable& table) {
    write_text_file(path, serialize_table(table));
}

}  // namespace cpnet
