#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "rpts/model.hpp"

namespace rpts {

/// Identifies one node of a reasoning graph: a clue leaf or an inference step.
struct NodeId {
    enum class Type { Leaf, Step };

    Type type = Type::Leaf;
    ClueKind kind = ClueKind::Context;  // meaningful for leaves only
    int index = 0;                      // clue index (0 = context) or step ordinal

    static NodeId leaf(ClueKind kind, int index) { return {Type::Leaf, kind, index}; }
    static NodeId step(int ordinal) { return {Type::Step, ClueKind::Context, ordinal}; }

    bool is_step() const { return type == Type::Step; }
    std::string label() const;

    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

/// The parsed trace as a rooted DAG: leaves are clues, inner nodes are steps,
/// edges point from each step to its premises. A conclusion reused by two
/// later steps has in-degree 2; heights are unaffected by the sharing.
///
/// Height is the number of edges on the longest path from a node down to any
/// leaf. Leaves sit at height 0, steps at height >= 1.
///
/// Immutable after construction; every query is read-only.
class ReasoningGraph {
public:
    const std::vector<NodeId>& nodes() const { return nodes_; }
    const std::map<int, std::vector<NodeId>>& edges() const { return edges_; }

    const std::vector<NodeId>& children(int step_ordinal) const;
    int height(const NodeId& node) const;
    int step_height(int ordinal) const { return height(NodeId::step(ordinal)); }
    std::vector<int> step_ordinals() const;  // ascending
    bool has_steps() const { return !edges_.empty(); }

private:
    friend ReasoningGraph build_graph(const std::vector<ReasoningStep>&,
                                      const InstanceRecord&);

    std::vector<NodeId> nodes_;
    std::map<int, std::vector<NodeId>> edges_;  // step ordinal -> premises
    std::map<NodeId, int> heights_;
};

/// Builds the graph from preprocessed steps. Only clues actually referenced
/// become leaves, so unreferenced evidence cannot affect heights.
/// Throws UnknownClueRef when a premise names a clue the instance lacks.
ReasoningGraph build_graph(const std::vector<ReasoningStep>& steps,
                           const InstanceRecord& instance);

/// Ordinals of all steps at exactly height h, ascending.
/// Throws InvalidHeight for h < 1 (steps always sit above a leaf).
std::vector<int> steps_at_height(const ReasoningGraph& graph, int h);

/// Maximum step height. Throws EmptyGraph when the graph has no steps.
int graph_height(const ReasoningGraph& graph);

/// Plain-text edge list ("STEP n -> ref" per line) plus a height table.
std::string debug_export(const ReasoningGraph& graph);

}  // namespace rpts
