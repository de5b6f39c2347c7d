#include "spce/models.hpp"

#include "spce/error.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <system_error>

namespace spce {

namespace {

const SmearingDistribution kFullSphere{SmearingKind::UniformCap,
                                       CapRegion(Direction(0.0, 0.0, 1.0), 2.0)};

std::string format_mean(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace

OutcomePair HiddenVariableModel::sample_pair(const Direction& a, const Direction& b,
                                             RandomStream& rng) const {
    // Fixed draw order (lambda, side 1, side 2) keeps runs reproducible.
    Lambda lambda = sample_lambda(rng);
    int o1 = rng.bernoulli(detect_prob_1(lambda, a)) ? +1 : -1;
    int o2 = rng.bernoulli(detect_prob_2(lambda, b)) ? +1 : -1;
    return {o1, o2};
}

double SpinFunctionModel::detect_prob_1(const Lambda& lambda, const Direction& a) const {
    return spin(lambda, a) > 0 ? 1.0 : 0.0;
}

double SpinFunctionModel::detect_prob_2(const Lambda& lambda, const Direction& b) const {
    // Side 2 reports -spin, so it fires exactly when spin(lambda, b) = -1.
    return spin(lambda, b) > 0 ? 0.0 : 1.0;
}

OutcomePair SpinFunctionModel::evaluate(const Lambda& lambda, const Direction& a,
                                        const Direction& b) const {
    return {spin(lambda, a), -spin(lambda, b)};
}

OutcomePair SpinFunctionModel::sample_pair(const Direction& a, const Direction& b,
                                           RandomStream& rng) const {
    return evaluate(sample_lambda(rng), a, b);
}

Lambda BellSignModel::sample_lambda(RandomStream& rng) const {
    return sample_direction(kFullSphere, rng);
}

int BellSignModel::spin(const Lambda& lambda, const Direction& x) const {
    const Direction& l = std::get<Direction>(lambda);
    // sign(0) = +1: the measure-zero tie still yields a definite outcome.
    return l.dot(x) >= 0.0 ? +1 : -1;
}

FactorizedModel::FactorizedModel(double mean1, double mean2)
    : mean1_(mean1), mean2_(mean2) {
    if (!(std::abs(mean1) <= 1.0) || !(std::abs(mean2) <= 1.0)) {
        throw DomainError("factorized_model: outcome means must lie in [-1, 1]");
    }
}

Lambda FactorizedModel::sample_lambda(RandomStream&) const {
    return std::monostate{};
}

double FactorizedModel::detect_prob_1(const Lambda&, const Direction&) const {
    return 0.5 * (1.0 + mean1_);
}

double FactorizedModel::detect_prob_2(const Lambda&, const Direction&) const {
    return 0.5 * (1.0 + mean2_);
}

std::string FactorizedModel::name() const {
    return "factorized(" + format_mean(mean1_) + "," + format_mean(mean2_) + ")";
}

OutcomePair ContextualSampler::sample_pair(const Direction& a, const Direction& b,
                                           RandomStream& rng) const {
    // Four-outcome singlet table at angle theta_ab: the probability that
    // the outcomes agree is sin^2(theta/2) = (1 - a.b)/2. Drawing side 1
    // as a fair coin and then the agreement bit reproduces the full table
    // P(++) = P(--) = sin^2(theta/2)/2, P(+-) = P(-+) = cos^2(theta/2)/2,
    // with uniform marginals on both sides.
    int o1 = rng.bernoulli(0.5) ? +1 : -1;
    double p_equal = 0.5 * (1.0 - a.dot(b));
    int o2 = rng.bernoulli(p_equal) ? o1 : -o1;
    return {o1, o2};
}

BellSignModel bell_sign_model() {
    return BellSignModel{};
}

FactorizedModel factorized_model(double mean1, double mean2) {
    return FactorizedModel(mean1, mean2);
}

ContextualSampler contextual_sampler() {
    return ContextualSampler{};
}

double lhv_correlation_exact(const PairOutcomeSampler& model,
                             const Direction& a, const Direction& b) {
    if (dynamic_cast<const BellSignModel*>(&model) == nullptr) {
        throw UnsupportedModelError(
            "lhv_correlation_exact: no closed form for model '" + model.name() + "'");
    }
    double theta = angle_between(a, b);
    return -(1.0 - 2.0 * theta / std::numbers::pi);
}

std::unique_ptr<PairOutcomeSampler> make_model(const std::string& name) {
    if (name == "qm-contextual") {
        return std::make_unique<ContextualSampler>();
    }
    if (name == "bell-sign") {
        return std::make_unique<BellSignModel>();
    }
    const std::string prefix = "factorized(";
    if (name.size() > prefix.size() + 1 && name.rfind(prefix, 0) == 0 &&
        name.back() == ')') {
        std::string args = name.substr(prefix.size(), name.size() - prefix.size() - 1);
        auto comma = args.find(',');
        if (comma != std::string::npos && args.find(',', comma + 1) == std::string::npos) {
            auto parse = [](const std::string& text, double& out) {
                const char* begin = text.data();
                const char* end = begin + text.size();
                while (begin != end && *begin == ' ') ++begin;
                while (end != begin && *(end - 1) == ' ') --end;
                auto res = std::from_chars(begin, end, out);
                return res.ec == std::errc() && res.ptr == end && begin != end;
            };
            double m1 = 0.0;
            double m2 = 0.0;
            if (parse(args.substr(0, comma), m1) && parse(args.substr(comma + 1), m2)) {
                return std::make_unique<FactorizedModel>(m1, m2);
            }
        }
        throw ConfigError("make_model: malformed factorized spec '" + name +
                          "', expected factorized(mean1,mean2)");
    }
    throw ConfigError("make_model: unknown model '" + name + "'");
}

} // namespace spce
