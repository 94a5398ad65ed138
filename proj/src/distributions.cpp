#include "rim/distributions.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace rim {

LambdaDistributionSpec LambdaDistributionSpec::uniform() {
    LambdaDistributionSpec s;
    s.kind = Kind::Uniform;
    return s;
}

LambdaDistributionSpec LambdaDistributionSpec::beta_dist(double alpha, double beta) {
    LambdaDistributionSpec s;
    s.kind = Kind::Beta;
    s.alpha = alpha;
    s.beta = beta;
    s.validate();
    return s;
}

LambdaDistributionSpec LambdaDistributionSpec::constant(double value) {
    LambdaDistributionSpec s;
    s.kind = Kind::Constant;
    s.value = value;
    s.validate();
    return s;
}

namespace {

double parse_number(std::string_view text, const char* what) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw std::invalid_argument(std::string("bad ") + what + " in distribution spec: '" +
                                    std::string(text) + "'");
    return out;
}

}  // namespace

LambdaDistributionSpec LambdaDistributionSpec::parse(std::string_view text) {
    if (text == "uniform") return uniform();
    auto colon = text.find(':');
    std::string_view head = text.substr(0, colon);
    if (head == "constant") {
        if (colon == std::string_view::npos)
            throw std::invalid_argument("constant spec needs a value, e.g. constant:0.0");
        return constant(parse_number(text.substr(colon + 1), "constant value"));
    }
    if (head == "beta") {
        if (colon == std::string_view::npos)
            throw std::invalid_argument("beta spec needs parameters, e.g. beta:2.0,5.0");
        std::string_view rest = text.substr(colon + 1);
        auto comma = rest.find(',');
        if (comma == std::string_view::npos)
            throw std::invalid_argument("beta spec needs two parameters, e.g. beta:2.0,5.0");
        return beta_dist(parse_number(rest.substr(0, comma), "beta alpha"),
                         parse_number(rest.substr(comma + 1), "beta beta"));
    }
    throw std::invalid_argument("unknown distribution spec: '" + std::string(text) + "'");
}

std::string LambdaDistributionSpec::to_string() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Uniform: os << "uniform"; break;
        case Kind::Beta: os << "beta:" << alpha << "," << beta; break;
        case Kind::Constant: os << "constant:" << value; break;
    }
    return os.str();
}

void LambdaDistributionSpec::validate() const {
    switch (kind) {
        case Kind::Uniform: break;
        case Kind::Beta:
            if (!(alpha > 0.0) || !(beta > 0.0))
                throw std::invalid_argument("Beta shape parameters must be positive");
            break;
        case Kind::Constant:
            if (!(value >= 0.0 && value < 1.0))
                throw std::invalid_argument("Constant lambda must lie in [0,1)");
            break;
    }
}

double LambdaDistributionSpec::mean() const {
    validate();
    switch (kind) {
        case Kind::Uniform: return 0.5;
        case Kind::Beta: return alpha / (alpha + beta);
        case Kind::Constant: return value;
    }
    return 0.0;
}

double LambdaDistributionSpec::second_moment() const {
    validate();
    switch (kind) {
        case Kind::Uniform: return 1.0 / 3.0;
        case Kind::Beta:
            return alpha * (alpha + 1.0) / ((alpha + beta) * (alpha + beta + 1.0));
        case Kind::Constant: return value * value;
    }
    return 0.0;
}

double LambdaDistributionSpec::draw(Rng& rng) const {
    switch (kind) {
        case Kind::Uniform: return rng.uniform();
        case Kind::Constant: return value;
        case Kind::Beta: {
            // Gamma ratio; reject draws that round to 1.0 to keep support open.
            for (;;) {
                double a = rng.gamma(alpha);
                double b = rng.gamma(beta);
                double x = a / (a + b);
                if (x >= 0.0 && x < 1.0) return x;
            }
        }
    }
    return 0.0;
}

LambdaVector sample_lambda(const LambdaDistributionSpec& spec, std::size_t d, Rng& rng) {
    spec.validate();
    LambdaVector out;
    out.values.resize(d);
    for (std::size_t i = 0; i < d; ++i) out.values[i] = spec.draw(rng);
    return out;
}

}  // namespace rim
