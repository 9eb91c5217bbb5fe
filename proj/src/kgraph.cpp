#include "lawkg/kgraph.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "lawkg/error.hpp"
#include "lawkg/text.hpp"

namespace lawkg::kgraph {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(NodeType t) {
    switch (t) {
        case NodeType::Case: return "case";
        case NodeType::Court: return "court";
        case NodeType::Domain: return "domain";
        case NodeType::Law: return "law";
    }
    return "case";
}

std::string_view to_string(RelationType r) {
    switch (r) {
        case RelationType::Decide: return "decide";
        case RelationType::BelongTo: return "belong_to";
        case RelationType::BasedOn: return "based_on";
    }
    return "decide";
}

std::optional<NodeType> parse_node_type(std::string_view s) {
    if (s == "case") return NodeType::Case;
    if (s == "court") return NodeType::Court;
    if (s == "domain") return NodeType::Domain;
    if (s == "law") return NodeType::Law;
    return std::nullopt;
}

std::optional<RelationType> parse_relation_type(std::string_view s) {
    if (s == "decide") return RelationType::Decide;
    if (s == "belong_to") return RelationType::BelongTo;
    if (s == "based_on") return RelationType::BasedOn;
    return std::nullopt;
}

NodeType relation_src_type(RelationType r) {
    switch (r) {
        case RelationType::Decide: return NodeType::Court;
        case RelationType::BelongTo: return NodeType::Case;
        case RelationType::BasedOn: return NodeType::Case;
    }
    return NodeType::Case;
}

NodeType relation_dst_type(RelationType r) {
    switch (r) {
        case RelationType::Decide: return NodeType::Case;
        case RelationType::BelongTo: return NodeType::Domain;
        case RelationType::BasedOn: return NodeType::Law;
    }
    return NodeType::Case;
}

MetaPath::MetaPath(std::vector<MetaPathLeg> legs) : legs_(std::move(legs)) {
    if (legs_.empty()) throw Error("meta-path must have at least one leg");
    for (std::size_t i = 0; i + 1 < legs_.size(); ++i) {
        if (legs_[i].to != legs_[i + 1].from) {
            throw Error("meta-path legs do not chain: leg " + std::to_string(i) + " ends at " +
                        std::string(to_string(legs_[i].to)) + " but leg " + std::to_string(i + 1) +
                        " starts at " + std::string(to_string(legs_[i + 1].from)));
        }
    }
    for (const auto& leg : legs_) {
        NodeType src = relation_src_type(leg.rel);
        NodeType dst = relation_dst_type(leg.rel);
        bool forward = leg.from == src && leg.to == dst;
        bool backward = leg.from == dst && leg.to == src;
        if (!forward && !backward) {
            throw Error(std::string("meta-path leg ") + std::string(to_string(leg.from)) + " -[" +
                        std::string(to_string(leg.rel)) + "]- " + std::string(to_string(leg.to)) +
                        " does not match the relation schema");
        }
    }
}

const MetaPath& MetaPath::ccc() {
    static const MetaPath path({{NodeType::Case, RelationType::Decide, NodeType::Court},
                                {NodeType::Court, RelationType::Decide, NodeType::Case}});
    return path;
}

const MetaPath& MetaPath::cdc() {
    static const MetaPath path({{NodeType::Case, RelationType::BelongTo, NodeType::Domain},
                                {NodeType::Domain, RelationType::BelongTo, NodeType::Case}});
    return path;
}

void HeteroGraph::add_node(std::string id, NodeType type, AttrMap attrs) {
    if (id.empty()) throw Error("node id must not be empty");
    auto [it, inserted] = id_to_index_.emplace(id, static_cast<std::uint32_t>(node_ids_.size()));
    if (!inserted) throw Error("duplicate node id '" + id + "'");
    (void)it;
    node_ids_.push_back(std::move(id));
    node_types_.push_back(type);
    node_attrs_.push_back(std::move(attrs));
    out_adj_.emplace_back();
    in_adj_.emplace_back();
}

void HeteroGraph::add_edge(const std::string& src, const std::string& dst, RelationType rel,
                           std::uint32_t count) {
    if (count == 0) throw Error("edge count must be >= 1");
    auto src_it = id_to_index_.find(src);
    if (src_it == id_to_index_.end()) throw Error("edge references unknown node '" + src + "'");
    auto dst_it = id_to_index_.find(dst);
    if (dst_it == id_to_index_.end()) throw Error("edge references unknown node '" + dst + "'");
    std::uint32_t src_idx = src_it->second;
    std::uint32_t dst_idx = dst_it->second;
    if (node_types_[src_idx] != relation_src_type(rel) || node_types_[dst_idx] != relation_dst_type(rel)) {
        throw Error("edge '" + src + "' -[" + std::string(to_string(rel)) + "]-> '" + dst +
                    "' violates schema: expected " + std::string(to_string(relation_src_type(rel))) +
                    " -> " + std::string(to_string(relation_dst_type(rel))) + ", got " +
                    std::string(to_string(node_types_[src_idx])) + " -> " +
                    std::string(to_string(node_types_[dst_idx])));
    }
    // The relation is implied by the endpoint types, so (src, dst) keys the edge.
    std::uint64_t key = (static_cast<std::uint64_t>(src_idx) << 32) | dst_idx;
    if (auto it = edge_lookup_.find(key); it != edge_lookup_.end()) {
        edges_[it->second].count += count;
        return;
    }
    edge_lookup_.emplace(key, static_cast<std::uint32_t>(edges_.size()));
    edges_.push_back(Edge{src_idx, dst_idx, rel, count});
    out_adj_[src_idx].emplace_back(rel, dst_idx);
    in_adj_[dst_idx].emplace_back(rel, src_idx);
}

bool HeteroGraph::has_node(std::string_view id) const {
    return id_to_index_.find(std::string(id)) != id_to_index_.end();
}

std::uint32_t HeteroGraph::index_of(const std::string& id) const {
    auto it = id_to_index_.find(id);
    if (it == id_to_index_.end()) throw Error("unknown node '" + id + "'");
    return it->second;
}

NodeType HeteroGraph::node_type(const std::string& id) const {
    return node_types_[index_of(id)];
}

const HeteroGraph::AttrMap& HeteroGraph::node_attrs(const std::string& id) const {
    return node_attrs_[index_of(id)];
}

std::size_t HeteroGraph::node_count(NodeType t) const {
    return static_cast<std::size_t>(std::count(node_types_.begin(), node_types_.end(), t));
}

std::size_t HeteroGraph::edge_count(RelationType r) const {
    return static_cast<std::size_t>(
        std::count_if(edges_.begin(), edges_.end(), [r](const Edge& e) { return e.rel == r; }));
}

std::span<const std::pair<RelationType, std::uint32_t>> HeteroGraph::out_adjacent(std::uint32_t index) const {
    return out_adj_[index];
}

std::span<const std::pair<RelationType, std::uint32_t>> HeteroGraph::in_adjacent(std::uint32_t index) const {
    return in_adj_[index];
}

std::vector<std::string> HeteroGraph::out_neighbors(const std::string& id, RelationType rel) const {
    std::vector<std::string> out;
    for (const auto& [r, nbr] : out_adj_[index_of(id)]) {
        if (r == rel) out.push_back(node_ids_[nbr]);
    }
    return out;
}

std::vector<std::string> HeteroGraph::in_neighbors(const std::string& id, RelationType rel) const {
    std::vector<std::string> out;
    for (const auto& [r, nbr] : in_adj_[index_of(id)]) {
        if (r == rel) out.push_back(node_ids_[nbr]);
    }
    return out;
}

void HeteroGraph::validate() const {
    for (std::size_t i = 0; i < node_ids_.size(); ++i) {
        if (node_types_[i] != NodeType::Case) continue;
        std::size_t decide = 0, belong = 0;
        for (const auto& [rel, _] : in_adj_[i]) {
            if (rel == RelationType::Decide) ++decide;
        }
        for (const auto& [rel, _] : out_adj_[i]) {
            if (rel == RelationType::BelongTo) ++belong;
        }
        if (decide != 1) {
            throw Error("case '" + node_ids_[i] + "' has " + std::to_string(decide) +
                        " decide edges (expected exactly 1)");
        }
        if (belong != 1) {
            throw Error("case '" + node_ids_[i] + "' has " + std::to_string(belong) +
                        " belong_to edges (expected exactly 1)");
        }
    }
}

bool HeteroGraph::structurally_equal(const HeteroGraph& other) const {
    if (node_count() != other.node_count() || edge_count() != other.edge_count()) return false;
    for (std::size_t i = 0; i < node_ids_.size(); ++i) {
        auto it = other.id_to_index_.find(node_ids_[i]);
        if (it == other.id_to_index_.end()) return false;
        if (other.node_types_[it->second] != node_types_[i]) return false;
        if (other.node_attrs_[it->second] != node_attrs_[i]) return false;
    }
    for (const Edge& e : edges_) {
        auto src_it = other.id_to_index_.find(node_ids_[e.src]);
        auto dst_it = other.id_to_index_.find(node_ids_[e.dst]);
        if (src_it == other.id_to_index_.end() || dst_it == other.id_to_index_.end()) return false;
        std::uint64_t key = (static_cast<std::uint64_t>(src_it->second) << 32) | dst_it->second;
        auto edge_it = other.edge_lookup_.find(key);
        if (edge_it == other.edge_lookup_.end()) return false;
        const Edge& oe = other.edges_[edge_it->second];
        if (oe.rel != e.rel || oe.count != e.count) return false;
    }
    return true;
}

namespace {

std::string hash_id(std::string_view prefix, std::string_view salted_name) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(text::fnv1a(salted_name)));
    return std::string(prefix) + buf;
}

} // namespace

std::string court_node_id(std::string_view court_name) {
    return hash_id("crt-", "court|" + text::normalized_key(court_name));
}

std::string domain_node_id(std::string_view domain_name) {
    return hash_id("dom-", "domain|" + text::normalized_key(domain_name));
}

HeteroGraph build_graph(std::span<const extract::ExtractionRecord> records,
                        std::span<const corpus::LawEntry> laws) {
    HeteroGraph g;
    std::unordered_map<std::string, std::string> known_laws; // law_id -> name
    for (const auto& law : laws) {
        HeteroGraph::AttrMap attrs{{"name", law.law_name}};
        if (law.year) attrs["year"] = std::to_string(*law.year);
        g.add_node(law.law_id, NodeType::Law, std::move(attrs));
        known_laws.emplace(law.law_id, law.law_name);
    }
    for (const auto& rec : records) {
        if (rec.court_name.empty()) throw Error("record '" + rec.case_id + "' has empty court_name");
        if (rec.domain_name.empty()) throw Error("record '" + rec.case_id + "' has empty domain_name");

        HeteroGraph::AttrMap case_attrs;
        if (!rec.subdomain.empty()) case_attrs["subdomain"] = rec.subdomain;
        g.add_node(rec.case_id, NodeType::Case, std::move(case_attrs));

        std::string court_id = court_node_id(rec.court_name);
        if (!g.has_node(court_id)) {
            g.add_node(court_id, NodeType::Court,
                       {{"name", rec.court_name}, {"level", std::string(to_string(rec.court_level))}});
        }
        std::string domain_id = domain_node_id(rec.domain_name);
        if (!g.has_node(domain_id)) {
            g.add_node(domain_id, NodeType::Domain, {{"name", rec.domain_name}});
        }
        g.add_edge(court_id, rec.case_id, RelationType::Decide);
        g.add_edge(rec.case_id, domain_id, RelationType::BelongTo);

        // Citation multiplicity from matched sentences; sets carry at least 1.
        std::map<std::string, std::uint32_t> multiplicity;
        for (const auto& cs : rec.citation_sentences) {
            if (cs.law_id) ++multiplicity[*cs.law_id];
        }
        for (const auto& law_id : rec.cited_laws) {
            if (!known_laws.count(law_id)) {
                throw Error("record '" + rec.case_id + "' cites unknown law_id '" + law_id + "'");
            }
            std::uint32_t count = 1;
            if (auto it = multiplicity.find(law_id); it != multiplicity.end()) count = it->second;
            g.add_edge(rec.case_id, law_id, RelationType::BasedOn, count);
        }
    }
    return g;
}

std::set<std::string> meta_path_neighbors(const HeteroGraph& g, const std::string& start_id,
                                          const MetaPath& path) {
    std::uint32_t start = g.index_of(start_id);
    if (g.type_of(start) != path.legs().front().from) {
        throw Error("node '" + start_id + "' has type " + std::string(to_string(g.type_of(start))) +
                    " but the meta-path starts at " +
                    std::string(to_string(path.legs().front().from)));
    }
    std::set<std::uint32_t> frontier{start};
    for (const auto& leg : path.legs()) {
        std::set<std::uint32_t> next;
        for (std::uint32_t u : frontier) {
            for (const auto& [rel, v] : g.out_adjacent(u)) {
                if (rel == leg.rel && g.type_of(v) == leg.to) next.insert(v);
            }
            for (const auto& [rel, v] : g.in_adjacent(u)) {
                if (rel == leg.rel && g.type_of(v) == leg.to) next.insert(v);
            }
        }
        frontier = std::move(next);
    }
    std::set<std::string> out;
    for (std::uint32_t v : frontier) {
        if (v != start) out.insert(g.node_id(v));
    }
    return out;
}

std::vector<std::vector<std::string>> connected_components(const HeteroGraph& g) {
    std::size_t n = g.node_count();
    std::vector<bool> visited(n, false);
    std::vector<std::vector<std::string>> components;
    std::vector<std::uint32_t> stack;
    for (std::uint32_t root = 0; root < n; ++root) {
        if (visited[root]) continue;
        visited[root] = true;
        stack.push_back(root);
        std::vector<std::string> component;
        while (!stack.empty()) {
            std::uint32_t u = stack.back();
            stack.pop_back();
            component.push_back(g.node_id(u));
            for (const auto& [rel, v] : g.out_adjacent(u)) {
                (void)rel;
                if (!visited[v]) {
                    visited[v] = true;
                    stack.push_back(v);
                }
            }
            for (const auto& [rel, v] : g.in_adjacent(u)) {
                (void)rel;
                if (!visited[v]) {
                    visited[v] = true;
                    stack.push_back(v);
                }
            }
        }
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
    }
    std::sort(components.begin(), components.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
    });
    return components;
}

GraphStats graph_stats(const HeteroGraph& g) {
    GraphStats stats;
    stats.case_nodes = g.node_count(NodeType::Case);
    stats.court_nodes = g.node_count(NodeType::Court);
    stats.domain_nodes = g.node_count(NodeType::Domain);
    stats.law_nodes = g.node_count(NodeType::Law);
    stats.total_nodes = g.node_count();
    stats.based_on_edges = g.edge_count(RelationType::BasedOn);
    stats.belong_to_edges = g.edge_count(RelationType::BelongTo);
    stats.decide_edges = g.edge_count(RelationType::Decide);
    stats.total_edges = g.edge_count();

    double v = static_cast<double>(stats.total_nodes);
    double e = static_cast<double>(stats.total_edges);
    if (stats.total_nodes >= 2) {
        stats.density = e / (v * (v - 1.0));
        stats.undirected_density = 2.0 * e / (v * (v - 1.0));
    }
    if (stats.total_nodes > 0) {
        stats.ratio = e / v;
    }
    if (stats.case_nodes > 0) {
        stats.mean_based_on_per_case =
            static_cast<double>(stats.based_on_edges) / static_cast<double>(stats.case_nodes);
    }
    auto components = connected_components(g);
    stats.component_count = components.size();
    stats.component_sizes.reserve(components.size());
    for (const auto& c : components) stats.component_sizes.push_back(c.size());
    return stats;
}

ordered_json stats_to_json(const GraphStats& stats, bool include_undirected_density) {
    ordered_json obj;
    obj["nodes"] = ordered_json{{"case", stats.case_nodes},
                                {"court", stats.court_nodes},
                                {"domain", stats.domain_nodes},
                                {"law", stats.law_nodes},
                                {"total", stats.total_nodes}};
    obj["edges"] = ordered_json{{"based_on", stats.based_on_edges},
                                {"belong_to", stats.belong_to_edges},
                                {"decide", stats.decide_edges},
                                {"total", stats.total_edges}};
    if (stats.density) {
        obj["density"] = *stats.density;
    } else {
        obj["density"] = nullptr;
    }
    if (include_undirected_density) {
        if (stats.undirected_density) {
            obj["undirected_density"] = *stats.undirected_density;
        } else {
            obj["undirected_density"] = nullptr;
        }
    }
    obj["ratio"] = stats.ratio;
    obj["mean_based_on_per_case"] = stats.mean_based_on_per_case;
    obj["connected_components"] = stats.component_count;
    obj["component_sizes"] = stats.component_sizes;
    return obj;
}

void export_graph(const HeteroGraph& g, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "nodes.jsonl", std::ios::binary);
        if (!out) throw Error("cannot write " + (dir / "nodes.jsonl").string());
        for (const auto& id : g.node_ids()) {
            ordered_json obj;
            obj["id"] = id;
            obj["type"] = to_string(g.node_type(id));
            obj["attrs"] = g.node_attrs(id);
            out << obj.dump() << '\n';
        }
        if (!out) throw Error("write failed for " + (dir / "nodes.jsonl").string());
    }
    {
        std::ofstream out(dir / "edges.jsonl", std::ios::binary);
        if (!out) throw Error("cannot write " + (dir / "edges.jsonl").string());
        for (const auto& e : g.edges()) {
            ordered_json obj;
            obj["src"] = g.node_id(e.src);
            obj["dst"] = g.node_id(e.dst);
            obj["rel"] = to_string(e.rel);
            obj["count"] = e.count;
            out << obj.dump() << '\n';
        }
        if (!out) throw Error("write failed for " + (dir / "edges.jsonl").string());
    }
}

namespace {

json parse_line(const std::string& line, const std::filesystem::path& path, std::size_t line_no) {
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
        throw Error(path.filename().string() + " line " + std::to_string(line_no) + ": malformed JSON");
    }
    return obj;
}

} // namespace

HeteroGraph import_graph(const std::filesystem::path& nodes_path,
                         const std::filesystem::path& edges_path) {
    HeteroGraph g;
    {
        std::ifstream in(nodes_path, std::ios::binary);
        if (!in) throw Error("cannot open " + nodes_path.string());
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            json obj = parse_line(line, nodes_path, line_no);
            std::string where = nodes_path.filename().string() + " line " + std::to_string(line_no);
            std::string id = obj.value("id", std::string{});
            if (id.empty()) throw Error(where + ": missing id");
            auto type = parse_node_type(obj.value("type", std::string{}));
            if (!type) throw Error(where + ": unknown node type '" + obj.value("type", std::string{}) + "'");
            HeteroGraph::AttrMap attrs;
            if (auto it = obj.find("attrs"); it != obj.end() && it->is_object()) {
                for (const auto& [k, v] : it->items()) {
                    if (!v.is_string()) throw Error(where + ": attr '" + k + "' must be a string");
                    attrs[k] = v.get<std::string>();
                }
            }
            try {
                g.add_node(std::move(id), *type, std::move(attrs));
            } catch (const Error& e) {
                throw Error(where + ": " + e.what());
            }
        }
    }
    {
        std::ifstream in(edges_path, std::ios::binary);
        if (!in) throw Error("cannot open " + edges_path.string());
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            json obj = parse_line(line, edges_path, line_no);
            std::string where = edges_path.filename().string() + " line " + std::to_string(line_no);
            auto rel = parse_relation_type(obj.value("rel", std::string{}));
            if (!rel) throw Error(where + ": unknown relation '" + obj.value("rel", std::string{}) + "'");
            std::string src = obj.value("src", std::string{});
            std::string dst = obj.value("dst", std::string{});
            std::uint32_t count = obj.value("count", 1u);
            if (!g.has_node(src)) throw Error(where + ": unknown node '" + src + "'");
            if (!g.has_node(dst)) throw Error(where + ": unknown node '" + dst + "'");
            try {
                g.add_edge(src, dst, *rel, count);
            } catch (const Error& e) {
                throw Error(where + ": " + e.what());
            }
        }
    }
    g.validate();
    return g;
}

HeteroGraph import_graph(const std::filesystem::path& dir) {
    return import_graph(dir / "nodes.jsonl", dir / "edges.jsonl");
}

} // namespace lawkg::kgraph
