#ifndef RIM_DATAIO_HPP
#define RIM_DATAIO_HPP

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "rim/distributions.hpp"
#include "rim/sample.hpp"

namespace rim {

/// Reads the label-first comma-separated format: one sample per line,
/// "label,x0,x1,...", '#' starts a comment line. Throws with line/field
/// location on malformed input.
Dataset read_dataset(const std::filesystem::path& path);

/// Inverse of read_dataset; values printed with 17 significant digits so a
/// write/read round trip is bit exact.
void write_dataset(const Dataset& dataset, const std::filesystem::path& path);

/// Original samples followed by K augmented copies of each, independent
/// lambda per copy; output size (K+1) * N.
Dataset augment_dataset(const Dataset& dataset, const LambdaDistributionSpec& spec, std::size_t k,
                        std::uint64_t seed);

/// Supervised decomposition: (window of n values, next value) pairs.
std::vector<std::pair<std::vector<double>, double>> sliding_window(
    const std::vector<double>& series, std::size_t n);

}  // namespace rim

#endif  // RIM_DATAIO_HPP
