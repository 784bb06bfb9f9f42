#include "rpts/graph.hpp"

#include <algorithm>
#include <set>

#include "rpts/errors.hpp"

namespace rpts {

std::string NodeId::label() const {
    if (type == Type::Step) return "STEP " + std::to_string(index);
    switch (kind) {
        case ClueKind::Visual: return "V" + std::to_string(index);
        case ClueKind::Textual: return "T" + std::to_string(index);
        case ClueKind::Context: return "CTX";
    }
    return "?";
}

const std::vector<NodeId>& ReasoningGraph::children(int step_ordinal) const {
    auto it = edges_.find(step_ordinal);
    if (it == edges_.end())
        throw UnknownClueRef("no step with ordinal " + std::to_string(step_ordinal));
    return it->second;
}

int ReasoningGraph::height(const NodeId& node) const {
    auto it = heights_.find(node);
    if (it == heights_.end())
        throw UnknownClueRef("node " + node.label() + " is not in the graph");
    return it->second;
}

std::vector<int> ReasoningGraph::step_ordinals() const {
    std::vector<int> ordinals;
    ordinals.reserve(edges_.size());
    for (const auto& [ordinal, children] : edges_) ordinals.push_back(ordinal);
    return ordinals;
}

ReasoningGraph build_graph(const std::vector<ReasoningStep>& steps,
                           const InstanceRecord& instance) {
    std::set<int> visual_indices, textual_indices;
    for (const Clue& c : instance.visual_clues) visual_indices.insert(c.index);
    for (const Clue& c : instance.textual_clues) textual_indices.insert(c.index);

    ReasoningGraph graph;
    std::set<NodeId> leaves;

    for (const ReasoningStep& step : steps) {
        std::vector<NodeId> children;
        for (const PremiseRef& ref : step.premises) {
            switch (ref.kind) {
                case RefKind::Visual:
                    if (!ref.index || !visual_indices.count(*ref.index))
                        throw UnknownClueRef("step " + std::to_string(step.ordinal) +
                                             " references unknown visual clue " +
                                             ref.token());
                    children.push_back(NodeId::leaf(ClueKind::Visual, *ref.index));
                    break;
                case RefKind::Textual:
                    if (!ref.index || !textual_indices.count(*ref.index))
                        throw UnknownClueRef("step " + std::to_string(step.ordinal) +
                                             " references unknown textual clue " +
                                             ref.token());
                    children.push_back(NodeId::leaf(ClueKind::Textual, *ref.index));
                    break;
                case RefKind::Context:
                    if (instance.context.empty())
                        throw UnknownClueRef("step " + std::to_string(step.ordinal) +
                                             " references CTX but the instance has "
                                             "no context");
                    children.push_back(NodeId::leaf(ClueKind::Context, 0));
                    break;
                case RefKind::Conclusion:
                    if (!ref.index || *ref.index >= step.ordinal ||
                        !graph.edges_.count(*ref.index))
                        throw UnknownClueRef("step " + std::to_string(step.ordinal) +
                                             " references unknown conclusion " +
                                             ref.token());
                    children.push_back(NodeId::step(*ref.index));
                    break;
            }
        }
        for (const NodeId& child : children)
            if (!child.is_step()) leaves.insert(child);
        graph.edges_[step.ordinal] = std::move(children);
    }

    for (const NodeId& leaf : leaves) {
        graph.nodes_.push_back(leaf);
        graph.heights_[leaf] = 0;
    }
    // Ordinal order is a topological order: premises only point backwards.
    for (const auto& [ordinal, children] : graph.edges_) {
        int best = 0;
        for (const NodeId& child : children)
            best = std::max(best, graph.heights_.at(child));
        NodeId node = NodeId::step(ordinal);
        graph.heights_[node] = best + 1;
        graph.nodes_.push_back(node);
    }
    return graph;
}

std::vector<int> steps_at_height(const ReasoningGraph& graph, int h) {
    if (h < 1)
        throw InvalidHeight("step heights start at 1, got " + std::to_string(h));
    std::vector<int> ordinals;
    for (const auto& [ordinal, children] : graph.edges())
        if (graph.step_height(ordinal) == h) ordinals.push_back(ordinal);
    return ordinals;  // map iteration is already ascending
}

int graph_height(const ReasoningGraph& graph) {
    if (!graph.has_steps()) throw EmptyGraph("graph has no step nodes");
    int best = 0;
    for (const auto& [ordinal, children] : graph.edges())
        best = std::max(best, graph.step_height(ordinal));
    return best;
}

std::string debug_export(const ReasoningGraph& graph) {
    std::string out;
    for (const auto& [ordinal, children] : graph.edges())
        for (const NodeId& child : children)
            out += "STEP " + std::to_string(ordinal) + " -> " + child.label() + "\n";
    out += "HEIGHTS\n";
    for (const NodeId& node : graph.nodes())
        out += node.label() + " " + std::to_string(graph.height(node)) + "\n";
    return out;
}

}  // namespace rpts
