#include "rpts/graph.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "rpts/errors.hpp"
#include "rpts/trace_parser.hpp"

namespace rpts {
namespace {

InstanceRecord small_instance(int visual = 3, int textual = 2, bool with_context = true) {
    std::mt19937 rng(1);
    return oracle::random_instance(rng, visual, textual, with_context);
}

std::vector<ReasoningStep> steps_from(const std::vector<std::string>& lines) {
    std::vector<ReasoningStep> steps;
    for (const std::string& line : lines) {
        auto step = parse_step_line(line);
        EXPECT_TRUE(step.has_value()) << line;
        if (step) steps.push_back(*step);
    }
    return steps;
}

TEST(BuildGraph, ChainHeights) {
    auto steps = steps_from({
        "[PREMISE: V1] + [PREMISE: T1] -> [CONCLUSION 1: a]",
        "[PREMISE: C1] + [PREMISE: T2] -> [CONCLUSION 2: b]",
        "[PREMISE: C2] -> [CONCLUSION 3: c]",
    });
    ReasoningGraph graph = build_graph(steps, small_instance());
    EXPECT_EQ(graph.step_height(1), 1);
    EXPECT_EQ(graph.step_height(2), 2);
    EXPECT_EQ(graph.step_height(3), 3);
    EXPECT_EQ(graph_height(graph), 3);
}

TEST(BuildGraph, DiamondHeightsAndLevels) {
    auto steps = steps_from({
        "[PREMISE: V1] -> [CONCLUSION 1: left]",
        "[PREMISE: T1] -> [CONCLUSION 2: right]",
        "[PREMISE: C1] + [PREMISE: C2] -> [CONCLUSION 3: join]",
        "[PREMISE: C3] + [PREMISE: V2] -> [CONCLUSION 4: verdict]",
    });
    ReasoningGraph graph = build_graph(steps, small_instance());
    EXPECT_EQ(graph.step_height(1), 1);
    EXPECT_EQ(graph.step_height(2), 1);
    EXPECT_EQ(graph.step_height(3), 2);
    EXPECT_EQ(graph.step_height(4), 3);
    EXPECT_EQ(graph_height(graph), 3);
    EXPECT_EQ(steps_at_height(graph, 1), (std::vector<int>{1, 2}));
    EXPECT_EQ(steps_at_height(graph, 2), (std::vector<int>{3}));
    EXPECT_EQ(steps_at_height(graph, 3), (std::vector<int>{4}));
    EXPECT_TRUE(steps_at_height(graph, 4).empty());
}

TEST(BuildGraph, SharedConclusionDoesNotInflateHeights) {
    // C1 feeds two later steps; reuse must not change any height.
    auto steps = steps_from({
        "[PREMISE: V1] -> [CONCLUSION 1: shared]",
        "[PREMISE: C1] + [PREMISE: T1] -> [CONCLUSION 2: first use]",
        "[PREMISE: C1] + [PREMISE: C2] -> [CONCLUSION 3: second use]",
    });
    ReasoningGraph graph = build_graph(steps, small_instance());
    EXPECT_EQ(graph.step_height(1), 1);
    EXPECT_EQ(graph.step_height(2), 2);
    EXPECT_EQ(graph.step_height(3), 3);
}

TEST(BuildGraph, ContextOnlyStep) {
    auto steps = steps_from({"[PREMISE: CTX] -> [CONCLUSION 1: from context alone]"});
    ReasoningGraph graph = build_graph(steps, small_instance());
    EXPECT_EQ(graph.step_height(1), 1);
    EXPECT_EQ(graph.height(NodeId::leaf(ClueKind::Context, 0)), 0);
}

TEST(BuildGraph, LeavesSitAtHeightZero) {
    auto steps = steps_from({"[PREMISE: V1] + [PREMISE: T2] -> [CONCLUSION 1: x]"});
    ReasoningGraph graph = build_graph(steps, small_instance());
    EXPECT_EQ(graph.height(NodeId::leaf(ClueKind::Visual, 1)), 0);
    EXPECT_EQ(graph.height(NodeId::leaf(ClueKind::Textual, 2)), 0);
}

TEST(BuildGraph, OnlyReferencedCluesBecomeLeaves) {
    // The instance offers V1..V3, T1..T2, CTX; the trace touches V1 and T2.
    auto steps = steps_from({"[PREMISE: V1] + [PREMISE: T2] -> [CONCLUSION 1: x]"});
    ReasoningGraph graph = build_graph(steps, small_instance());
    int leaves = 0;
    for (const NodeId& node : graph.nodes())
        if (!node.is_step()) ++leaves;
    EXPECT_EQ(leaves, 2);
    EXPECT_THROW(graph.height(NodeId::leaf(ClueKind::Visual, 2)), UnknownClueRef);
}

TEST(BuildGraph, UnknownVisualClueThrows) {
    auto steps = steps_from({"[PREMISE: V9] -> [CONCLUSION 1: no such clue]"});
    EXPECT_THROW(build_graph(steps, small_instance()), UnknownClueRef);
}

TEST(BuildGraph, ContextRefWithoutContextThrows) {
    auto steps = steps_from({"[PREMISE: CTX] -> [CONCLUSION 1: x]"});
    EXPECT_THROW(build_graph(steps, small_instance(3, 2, false)), UnknownClueRef);
}

TEST(BuildGraph, BareReferenceThrows) {
    // Graph construction expects preprocessed input; bare refs must not
    // silently resolve.
    auto steps = steps_from({"[PREMISE: V] -> [CONCLUSION 1: x]"});
    EXPECT_THROW(build_graph(steps, small_instance()), UnknownClueRef);
}

TEST(BuildGraph, ConclusionRefToMissingStepThrows) {
    auto steps = steps_from({"[PREMISE: C7] -> [CONCLUSION 1: dangling]"});
    EXPECT_THROW(build_graph(steps, small_instance()), UnknownClueRef);
}

TEST(BuildGraph, EmptyStepListHasNoSteps) {
    ReasoningGraph graph = build_graph({}, small_instance());
    EXPECT_FALSE(graph.has_steps());
    EXPECT_THROW(graph_height(graph), EmptyGraph);
}

TEST(StepsAtHeight, RejectsHeightsBelowOne) {
    auto steps = steps_from({"[PREMISE: V1] -> [CONCLUSION 1: x]"});
    ReasoningGraph graph = build_graph(steps, small_instance());
    EXPECT_THROW(steps_at_height(graph, 0), InvalidHeight);
    EXPECT_THROW(steps_at_height(graph, -2), InvalidHeight);
}

TEST(ReasoningGraph, ChildrenListsPremises) {
    auto steps = steps_from({
        "[PREMISE: V1] -> [CONCLUSION 1: a]",
        "[PREMISE: C1] + [PREMISE: T1] -> [CONCLUSION 2: b]",
    });
    ReasoningGraph graph = build_graph(steps, small_instance());
    const auto& kids = graph.children(2);
    ASSERT_EQ(kids.size(), 2u);
    EXPECT_EQ(kids[0], NodeId::step(1));
    EXPECT_EQ(kids[1], NodeId::leaf(ClueKind::Textual, 1));
    EXPECT_EQ(graph.step_ordinals(), (std::vector<int>{1, 2}));
}

TEST(DebugExport, ListsEdgesAndHeights) {
    auto steps = steps_from({
        "[PREMISE: V1] -> [CONCLUSION 1: a]",
        "[PREMISE: C1] -> [CONCLUSION 2: b]",
    });
    ReasoningGraph graph = build_graph(steps, small_instance());
    std::string text = debug_export(graph);
    EXPECT_NE(text.find("STEP 1 -> V1"), std::string::npos);
    EXPECT_NE(text.find("STEP 2 -> STEP 1"), std::string::npos);
    EXPECT_NE(text.find("HEIGHTS"), std::string::npos);
}

TEST(BuildGraph, HeightsMatchRecursiveOracle) {
    std::mt19937 rng(424242);
    for (int trial = 0; trial < 300; ++trial) {
        SCOPED_TRACE("trial " + std::to_string(trial));
        InstanceRecord instance = oracle::random_instance(rng, 3, 2, true);
        auto steps = oracle::random_clean_steps(rng, instance, 1 + int(rng() % 8));
        ReasoningGraph graph = build_graph(steps, instance);
        int max_height = 0;
        for (const ReasoningStep& step : steps) {
            int expected = oracle::step_height(steps, step.ordinal);
            EXPECT_EQ(graph.step_height(step.ordinal), expected);
            max_height = std::max(max_height, expected);
        }
        EXPECT_EQ(graph_height(graph), max_height);
        // A step can sit at most one level above each predecessor, so the
        // graph can never outgrow the step count.
        EXPECT_LE(graph_height(graph), static_cast<int>(steps.size()));

        // Every step appears at exactly one level.
        size_t seen = 0;
        for (int h = 1; h <= graph_height(graph); ++h)
            seen += steps_at_height(graph, h).size();
        EXPECT_EQ(seen, steps.size());
    }
}

}  // namespace
}  // namespace rpts
