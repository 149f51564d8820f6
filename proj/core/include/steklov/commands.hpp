#pragma once

#include <optional>
#include <string>
#include <vector>

#include "steklov/bie.hpp"
#include "steklov/config.hpp"
#include "steklov/disk.hpp"

namespace steklov {

struct Artifact {
    std::string name;
    std::string content;
};

// Files produced by a subcommand plus human-readable notes for stderr.
struct CommandOutput {
    std::vector<Artifact> files;
    std::vector<std::string> notes;

    const Artifact* find(const std::string& name) const;
};

/// Writes every artifact atomically into `dir`.
void write_artifacts(const std::string& dir, const CommandOutput& out);

struct ComputedSpectrum {
    Domain domain;
    std::optional<NystromSystem> system;
    std::optional<SteklovSpectrum> bie;
    std::vector<bool> bie_trusted;
    std::optional<DiskSpectrum> disk;
    std::optional<BandCoefficients> band;
};

/// Automatic node count and truncation for the first n_keep eigenvalues.
int auto_nodes(const AnalyticCurve& curve, int n_keep);
int auto_truncation(const BandCoefficients& band, double length, int n_keep);

ComputedSpectrum compute_spectrum(const RunConfig& cfg);

CommandOutput run_spectrum(const RunConfig& cfg);
CommandOutput run_cauchy_table(const RunConfig& cfg);
CommandOutput run_render(const RunConfig& cfg);
CommandOutput run_approximate(const RunConfig& cfg);
CommandOutput run_tunneling(const RunConfig& cfg);
CommandOutput run_remainder(const RunConfig& cfg);

}  // namespace steklov
