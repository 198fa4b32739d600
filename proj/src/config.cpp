#include "neckspec/config.hpp"
#include "neckspec/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>

using nlohmann::json;

namespace neckspec {

int ConfigGraph::degree(int v) const {
    int d = 0;
    for (const auto& e : edges) {
        if (e.tail == v) ++d;
        if (e.head == v) ++d;
    }
    return d;
}

int ConfigGraph::vertex_index(const std::string& id) const {
    for (int i = 0; i < vertex_count(); ++i)
        if (vertices[i].id == id) return i;
    return -1;
}

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& where, bool lenient) {
    if (lenient) return;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.count(it.key()))
            throw validation_error(where + ": unknown key '" + it.key() + "'");
    }
}

double positive_real(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.at(key).is_number())
        throw validation_error(where + "." + key + ": expected a number");
    double v = obj.at(key).get<double>();
    if (!(v > 0.0))
        throw validation_error(where + "." + key + ": must be positive, got " +
                               std::to_string(v));
    return v;
}

} // namespace

ConfigGraph parse_config(const std::string& text, bool lenient) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw validation_error("config: malformed JSON at byte " +
                               std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object())
        throw validation_error("config: top-level value must be an object");
    reject_unknown(doc, {"vertices", "edges", "s_grid", "mesh_h", "eig_count", "tolerances"},
                   "config", lenient);

    ConfigGraph cfg;

    if (!doc.contains("vertices") || !doc["vertices"].is_array() || doc["vertices"].empty())
        throw validation_error("config.vertices: required non-empty array");
    std::set<std::string> seen_ids;
    for (const auto& jv : doc["vertices"]) {
        if (!jv.is_object())
            throw validation_error("config.vertices: each entry must be an object");
        reject_unknown(jv, {"id", "side"}, "config.vertices[]", lenient);
        VertexSpec v;
        if (!jv.contains("id") || !jv["id"].is_string())
            throw validation_error("config.vertices[].id: required string");
        v.id = jv["id"].get<std::string>();
        if (seen_ids.count(v.id))
            throw validation_error("config.vertices: duplicate vertex id '" + v.id + "'");
        seen_ids.insert(v.id);
        v.side = positive_real(jv, "side", "config.vertices[" + v.id + "]");
        cfg.vertices.push_back(v);
    }

    std::set<std::string> seen_edge_ids;
    if (doc.contains("edges")) {
        if (!doc["edges"].is_array())
            throw validation_error("config.edges: must be an array");
        for (const auto& je : doc["edges"]) {
            reject_unknown(je, {"id", "endpoints"}, "config.edges[]", lenient);
            EdgeSpec e;
            if (!je.contains("id") || !je["id"].is_string())
                throw validation_error("config.edges[].id: required string");
            e.id = je["id"].get<std::string>();
            if (seen_edge_ids.count(e.id))
                throw validation_error("config.edges: duplicate edge id '" + e.id + "'");
            seen_edge_ids.insert(e.id);
            if (!je.contains("endpoints") || !je["endpoints"].is_array() ||
                je["endpoints"].size() != 2)
                throw validation_error("config.edges[" + e.id +
                                       "].endpoints: required pair of vertex ids");
            for (int k = 0; k < 2; ++k) {
                if (!je["endpoints"][k].is_string())
                    throw validation_error("config.edges[" + e.id +
                                           "].endpoints: entries must be vertex ids");
                const std::string vid = je["endpoints"][k].get<std::string>();
                int idx = cfg.vertex_index(vid);
                if (idx < 0)
                    throw validation_error("config.edges[" + e.id +
                                           "].endpoints: unknown vertex id '" + vid + "'");
                (k == 0 ? e.tail : e.head) = idx;
            }
            cfg.edges.push_back(e);
        }
    }

    if (!doc.contains("s_grid") || !doc["s_grid"].is_array())
        throw validation_error("config.s_grid: required array of reals");
    for (const auto& js : doc["s_grid"]) {
        if (!js.is_number())
            throw validation_error("config.s_grid: entries must be numbers");
        cfg.s_grid.push_back(js.get<double>());
    }
    for (std::size_t i = 0; i < cfg.s_grid.size(); ++i) {
        double s = cfg.s_grid[i];
        if (!(s > 0.0 && s < 1.0))
            throw validation_error("config.s_grid: value " + std::to_string(s) +
                                   " outside (0, 1)");
        if (i > 0 && !(cfg.s_grid[i] < cfg.s_grid[i - 1]))
            throw validation_error("config.s_grid: values must be strictly decreasing");
    }

    cfg.mesh_h = doc.contains("mesh_h") ? positive_real(doc, "mesh_h", "config") : 0.2;

    if (doc.contains("tolerances")) {
        const json& jt = doc["tolerances"];
        if (!jt.is_object())
            throw validation_error("config.tolerances: must be an object");
        reject_unknown(jt, {"eig_residual", "ode_tol", "quad_tol"}, "config.tolerances",
                       lenient);
        if (jt.contains("eig_residual"))
            cfg.tol.eig_residual = positive_real(jt, "eig_residual", "config.tolerances");
        if (jt.contains("ode_tol"))
            cfg.tol.ode_tol = positive_real(jt, "ode_tol", "config.tolerances");
        if (jt.contains("quad_tol"))
            cfg.tol.quad_tol = positive_real(jt, "quad_tol", "config.tolerances");
    }
    for (double t : {cfg.tol.eig_residual, cfg.tol.ode_tol, cfg.tol.quad_tol})
        if (!(t > 0.0 && t < 1.0))
            throw validation_error("config.tolerances: values must lie in (0, 1)");

    const int N = cfg.vertex_count();
    if (doc.contains("eig_count")) {
        if (!doc["eig_count"].is_number_integer())
            throw validation_error("config.eig_count: must be an integer");
        cfg.eig_count = doc["eig_count"].get<int>();
    } else {
        cfg.eig_count = N + 3;
    }
    if (cfg.eig_count < N + 2)
        throw validation_error("config.eig_count: must be >= N + 2 = " +
                               std::to_string(N + 2) + ", got " +
                               std::to_string(cfg.eig_count));

    // Room for the holes: each incidence needs a slot of width 4.
    for (int v = 0; v < N; ++v) {
        int deg = cfg.degree(v);
        if (cfg.vertices[v].side < 4.0 * deg)
            throw validation_error("config.vertices[" + cfg.vertices[v].id +
                                   "].side: must be >= 4 * degree = " +
                                   std::to_string(4 * deg));
    }

    // Connectivity (union-find over the multigraph).
    std::vector<int> parent(N);
    for (int i = 0; i < N; ++i) parent[i] = i;
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : cfg.edges) parent[find(e.tail)] = find(e.head);
    std::set<int> roots;
    for (int i = 0; i < N; ++i) roots.insert(find(i));
    if (roots.size() > 1) {
        std::ostringstream msg;
        msg << "config: graph is disconnected; components:";
        for (int r : roots) {
            msg << " {";
            bool first = true;
            for (int i = 0; i < N; ++i)
                if (find(i) == r) {
                    msg << (first ? "" : ",") << cfg.vertices[i].id;
                    first = false;
                }
            msg << "}";
        }
        throw validation_error(msg.str());
    }

    return cfg;
}

std::string serialize_config(const ConfigGraph& cfg) {
    json doc;
    doc["vertices"] = json::array();
    for (const auto& v : cfg.vertices)
        doc["vertices"].push_back({{"id", v.id}, {"side", v.side}});
    doc["edges"] = json::array();
    for (const auto& e : cfg.edges)
        doc["edges"].push_back(
            {{"id", e.id},
             {"endpoints", {cfg.vertices[e.tail].id, cfg.vertices[e.head].id}}});
    doc["s_grid"] = cfg.s_grid;
    doc["mesh_h"] = cfg.mesh_h;
    doc["eig_count"] = cfg.eig_count;
    doc["tolerances"] = {{"eig_residual", cfg.tol.eig_residual},
                         {"ode_tol", cfg.tol.ode_tol},
                         {"quad_tol", cfg.tol.quad_tol}};
    return doc.dump(2);
}

} // namespace neckspec
