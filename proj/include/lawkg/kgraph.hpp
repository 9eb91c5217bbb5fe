#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lawkg/corpus.hpp"
#include "lawkg/extract.hpp"

namespace lawkg::kgraph {

/// The four entity types of the legal graph.
enum class NodeType : std::uint8_t { Case, Court, Domain, Law };

/// The three relation types. Each one fixes its endpoint types:
/// Decide is Court -> Case, BelongTo is Case -> Domain, BasedOn is
/// Case -> Law. Edges are stored directed per this schema but traversed
/// undirected by meta-path and component queries.
enum class RelationType : std::uint8_t { Decide, BelongTo, BasedOn };

std::string_view to_string(NodeType t);
std::string_view to_string(RelationType r);
std::optional<NodeType> parse_node_type(std::string_view s);
std::optional<RelationType> parse_relation_type(std::string_view s);

NodeType relation_src_type(RelationType r);
NodeType relation_dst_type(RelationType r);

struct MetaPathLeg {
    NodeType from;
    RelationType rel;
    NodeType to;
};

/// A typed path template. Consecutive legs must share the intermediate
/// node type; ccc() and cdc() are the built-in Case-Court-Case and
/// Case-Domain-Case paths.
class MetaPath {
public:
    explicit MetaPath(std::vector<MetaPathLeg> legs);

    static const MetaPath& ccc();
    static const MetaPath& cdc();

    std::span<const MetaPathLeg> legs() const { return legs_; }

private:
    std::vector<MetaPathLeg> legs_;
};

struct GraphStats {
    std::size_t case_nodes = 0;
    std::size_t court_nodes = 0;
    std::size_t domain_nodes = 0;
    std::size_t law_nodes = 0;
    std::size_t total_nodes = 0;
    std::size_t based_on_edges = 0;
    std::size_t belong_to_edges = 0;
    std::size_t decide_edges = 0;
    std::size_t total_edges = 0;
    /// |E| / (|V| * (|V|-1)); absent when |V| < 2.
    std::optional<double> density;
    /// 2|E| / (|V| * (|V|-1)), the undirected form, reported alongside.
    std::optional<double> undirected_density;
    /// |E| / |V|; 0 for the empty graph.
    double ratio = 0;
    double mean_based_on_per_case = 0;
    std::size_t component_count = 0;
    std::vector<std::size_t> component_sizes; // descending
};

/// Typed heterogeneous graph with schema enforcement on insertion.
/// Duplicate edges of one relation between the same pair collapse into a
/// single edge whose count carries the multiplicity.
class HeteroGraph {
public:
    using AttrMap = std::map<std::string, std::string>;

    struct Edge {
        std::uint32_t src = 0;
        std::uint32_t dst = 0;
        RelationType rel = RelationType::Decide;
        std::uint32_t count = 1;
    };

    void add_node(std::string id, NodeType type, AttrMap attrs = {});
    void add_edge(const std::string& src, const std::string& dst, RelationType rel,
                  std::uint32_t count = 1);

    bool has_node(std::string_view id) const;
    NodeType node_type(const std::string& id) const;
    const AttrMap& node_attrs(const std::string& id) const;

    std::size_t node_count() const { return node_ids_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    std::size_t node_count(NodeType t) const;
    std::size_t edge_count(RelationType r) const;

    /// Node ids in insertion order.
    const std::vector<std::string>& node_ids() const { return node_ids_; }
    std::span<const Edge> edges() const { return edges_; }
    const std::string& node_id(std::uint32_t index) const { return node_ids_[index]; }

    std::vector<std::string> out_neighbors(const std::string& id, RelationType rel) const;
    std::vector<std::string> in_neighbors(const std::string& id, RelationType rel) const;

    /// Degree invariants: every Case node has exactly one Decide edge and
    /// exactly one BelongTo edge. Throws on violation.
    void validate() const;

    /// Structural equality: same nodes (id, type, attrs) and same edges
    /// (endpoints, relation, count), independent of insertion order.
    bool structurally_equal(const HeteroGraph& other) const;

    std::uint32_t index_of(const std::string& id) const;
    std::span<const std::pair<RelationType, std::uint32_t>> out_adjacent(std::uint32_t index) const;
    std::span<const std::pair<RelationType, std::uint32_t>> in_adjacent(std::uint32_t index) const;
    NodeType type_of(std::uint32_t index) const { return node_types_[index]; }

private:
    std::vector<std::string> node_ids_;
    std::vector<NodeType> node_types_;
    std::vector<AttrMap> node_attrs_;
    std::unordered_map<std::string, std::uint32_t> id_to_index_;
    std::vector<Edge> edges_;
    std::unordered_map<std::uint64_t, std::uint32_t> edge_lookup_; // (src<<32|dst) -> edge index
    std::vector<std::vector<std::pair<RelationType, std::uint32_t>>> out_adj_;
    std::vector<std::vector<std::pair<RelationType, std::uint32_t>>> in_adj_;
};

/// Stable content-derived node id for courts and domains.
std::string court_node_id(std::string_view court_name);
std::string domain_node_id(std::string_view domain_name);

/// One Case node per record, Court/Domain nodes deduplicated by normalized
/// name, one Law node per corpus entry (cited or not), edges per schema.
/// BasedOn counts carry citation multiplicity.
HeteroGraph build_graph(std::span<const extract::ExtractionRecord> records,
                        std::span<const corpus::LawEntry> laws);

/// Terminal nodes reachable from start by walking the path legs over typed
/// edges (direction ignored). The start node is excluded from the result.
std::set<std::string> meta_path_neighbors(const HeteroGraph& g, const std::string& start_id,
                                          const MetaPath& path);

/// Partition of V under undirected connectivity. Components hold ascending
/// node ids; the list is sorted by size descending, ties by smallest id.
std::vector<std::vector<std::string>> connected_components(const HeteroGraph& g);

GraphStats graph_stats(const HeteroGraph& g);

/// Mirrors the stats layout: per-type node counts, per-relation edge counts,
/// density, ratio, component data.
nlohmann::ordered_json stats_to_json(const GraphStats& stats, bool include_undirected_density = false);

/// nodes.jsonl + edges.jsonl under dir.
void export_graph(const HeteroGraph& g, const std::filesystem::path& dir);
HeteroGraph import_graph(const std::filesystem::path& nodes_path,
                         const std::filesystem::path& edges_path);
HeteroGraph import_graph(const std::filesystem::path& dir);

} // namespace lawkg::kgraph
