#pragma once

/**
 * @file cli.hpp
 * @brief Command implementations behind the deptree executable.
 *
 * Commands report through the supplied streams and return the process exit
 * code: 0 success, 1 validation or I/O error, 2 internal invariant violation.
 */

#include "deptree/measures.hpp"
#include "deptree/samples.hpp"
#include "deptree/structure.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace deptree {

struct RunConfig {
    enum class Command { learn, synth, measure };

    Command command = Command::learn;
    std::string input;      ///< learn, measure: CSV path
    std::string spec;       ///< synth: synthetic-spec JSON path
    std::string output;     ///< synth: CSV path; empty writes to stdout
    std::string json_path;  ///< learn: tree JSON path
    std::string dot_path;   ///< learn: tree DOT path
    std::string pair;       ///< measure: "A,B"
    Measure measure = Measure::mi_cell;
    std::size_t lattice_order = 0;  ///< 0 selects the default
    std::optional<std::uint64_t> seed;
    TieBreak ties = TieBreak::random;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitInternal = 2;

/// {"nodes":[...],"edges":[{"u","v","weight","signed_value"}...],
///  "measure","lattice_order","coverage_ratio"}
std::string tree_to_json(const DependenceTree& tree);

/// graph deptree { "A" -- "B" [label="0.9123"]; ... }
std::string tree_to_dot(const DependenceTree& tree);

/// Learns the tree. Writes JSON to json_path, DOT to dot_path, and JSON to
/// `out` when neither path is set.
int cmd_learn(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Generates a CSV from a synthetic spec; config.seed overrides the spec seed.
int cmd_synth(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Prints one pairwise measure; rho is reported signed.
int cmd_measure(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches on config.command.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace deptree
