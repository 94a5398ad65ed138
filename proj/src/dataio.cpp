#include "rim/dataio.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rim/core.hpp"

namespace rim {

namespace {

double parse_field(const std::string& field, std::size_t line_no, std::size_t field_no) {
    double out = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last)
        throw std::runtime_error("parse error at line " + std::to_string(line_no) + ", field " +
                                 std::to_string(field_no) + ": '" + field + "'");
    return out;
}

}  // namespace

Dataset read_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path.string());

    Dataset dataset;
    std::string line;
    std::size_t line_no = 0;
    std::size_t expected_len = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string field;
        TimeSeriesSample sample;
        std::size_t field_no = 0;
        while (std::getline(fields, field, ',')) {
            ++field_no;
            double v = parse_field(field, line_no, field_no);
            if (field_no == 1) {
                if (v < 0.0 || v != static_cast<double>(static_cast<long long>(v)))
                    throw std::runtime_error("label at line " + std::to_string(line_no) +
                                             " is not a non-negative integer");
                sample.label = static_cast<int>(v);
            } else {
                sample.features.push_back(v);
            }
        }
        if (sample.features.empty())
            throw std::runtime_error("line " + std::to_string(line_no) + " has no features");
        if (expected_len == 0) expected_len = sample.features.size();
        if (sample.features.size() != expected_len)
            throw std::runtime_error("ragged row at line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(expected_len) +
                                     " features, got " + std::to_string(sample.features.size()));
        dataset.samples.push_back(std::move(sample));
    }
    if (dataset.empty()) throw std::runtime_error("dataset file is empty: " + path.string());
    return dataset;
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& path) {
    validate_dataset(dataset);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path.string());
    char buf[40];
    for (const auto& sample : dataset.samples) {
        out << sample.label;
        for (double v : sample.features) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Dataset augment_dataset(const Dataset& dataset, const LambdaDistributionSpec& spec, std::size_t k,
                        std::uint64_t seed) {
    validate_dataset(dataset);
    if (k < 1) throw std::invalid_argument("augmentation factor K must be at least 1");
    spec.validate();

    Dataset out = dataset;
    Rng root(seed);
    for (std::size_t copy = 0; copy < k; ++copy) {
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            Rng stream = root.split(copy * dataset.size() + i);
            const TimeSeriesSample& src = dataset.samples[i];
            LambdaVector lambda = sample_lambda(spec, src.dim(), stream);
            AugmentedSample aug = augment_recursive(src, lambda);
            out.samples.push_back({std::move(aug.features), aug.label});
        }
    }
    return out;
}

std::vector<std::pair<std::vector<double>, double>> sliding_window(
    const std::vector<double>& series, std::size_t n) {
    if (n < 1) throw std::invalid_argument("window size must be at least 1");
    if (series.size() < n + 1)
        throw std::invalid_argument("series too short for window size " + std::to_string(n));
    std::vector<std::pair<std::vector<double>, double>> out;
    out.reserve(series.size() - n);
    for (std::size_t start = 0; start + n < series.size(); ++start) {
        std::vector<double> window(series.begin() + start, series.begin() + start + n);
        out.emplace_back(std::move(window), series[start + n]);
    }
    return out;
}

}  // namespace rim
