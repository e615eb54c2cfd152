#pragma once

#include <array>
#include <string>
#include <vector>

#include "ddfb/ast.hpp"

namespace ddfb::squiral {

inline constexpr int kObjectives = 4;

// Building blocks of a Squiral attempt. Each flag is one unit of code a
// student adds or removes in a single edit.
struct CodeState {
    bool block = false;    // custom block defined and called; code lives in it
    bool loop = false;     // a repeat block exists
    bool count = false;    // repeat count is size * 4
    bool move = false;     // move inside the loop
    bool move_var = false; // ... with the length variable as its argument
    bool pen = false;      // pen down outside the loop
    bool turn = false;     // turn 90 inside the loop
    bool change = false;   // change length by 10 inside the loop
    int flat_steps = 0;    // unrolled move/turn pairs on the stage, no loop
    int spare_blocks = 0;  // neutral trailing blocks in the script

    friend bool operator==(const CodeState&, const CodeState&) = default;
};

// Minimal state whose objectives are exactly `objectives` (ids 1..4).
CodeState state_for(const std::vector<int>& objectives);

// Variant choices for corpus solutions. 0 is the canonical form; the
// others are correct alternatives that change only that unit's blocks.
struct Variants {
    int call = 0;    // 1: no clear, 2: call argument 5, 3: green-flag hat replaced
    int count = 0;   // 1: nested repeat size { repeat 4 }, 2: 4 * size
    int move = 0;    // 1..3: other variable names
    int pen = 0;     // 1..3: other pen-down blocks
    int turn = 0;    // 1: turn left, 2: turn right, 3: rotate
    int change = 0;  // 1: change by 5, 2: change by 20, 3: set length to length + 10
};

AstNode build(const CodeState& state, const Variants& variants = {});

// Full correct solution.
AstNode solution(const Variants& variants = {});

// Solution drawn with unrolled moves and turns, no loop or custom block.
AstNode flat_solution(int steps);

// Hand-written expert rules over any tree, objectives 1..4.
std::array<bool, kObjectives> expert_objectives(const AstNode& root);
std::vector<int> expert_objective_set(const AstNode& root);

}  // namespace ddfb::squiral
