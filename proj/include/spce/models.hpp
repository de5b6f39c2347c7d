#pragma once

#include "spce/geometry.hpp"

#include <memory>
#include <string>
#include <variant>

namespace spce {

/// Hidden state of one emitted pair. What it holds is model-specific: the
/// Bell sign model stores a direction, the factorized model nothing. The
/// engine treats it as opaque and cannot inspect it.
using Lambda = std::variant<std::monostate, Direction>;

/// A pair of +/-1 outcomes, one per side.
struct OutcomePair {
    int first;
    int second;
};

/// What the engine consumes: anything that can turn a pair of microscopic
/// analyzer directions into a pair of +/-1 outcomes.
class PairOutcomeSampler {
public:
    virtual ~PairOutcomeSampler() = default;

    virtual OutcomePair sample_pair(const Direction& a, const Direction& b,
                                    RandomStream& rng) const = 0;

    virtual std::string name() const = 0;
};

/// Factorized stochastic hidden-variable model: a state lambda is drawn
/// from some distribution, then each side fires independently with a
/// probability that depends only on (lambda, local direction). Detection
/// maps to outcome +1, non-detection to -1, which is what a CHSH estimator
/// needs. Locality is structural: sample_pair is sealed and built from the
/// two one-sided probabilities, so no subclass can sneak the remote setting
/// into a local outcome.
class HiddenVariableModel : public PairOutcomeSampler {
public:
    virtual Lambda sample_lambda(RandomStream& rng) const = 0;
    virtual double detect_prob_1(const Lambda& lambda, const Direction& a) const = 0;
    virtual double detect_prob_2(const Lambda& lambda, const Direction& b) const = 0;

    /// Draws lambda, then one independent Bernoulli per side. Overridden
    /// only by SpinFunctionModel, where the per-side draws collapse to
    /// deterministic evaluations.
    OutcomePair sample_pair(const Direction& a, const Direction& b,
                            RandomStream& rng) const override;
};

/// Deterministic specialization: each lambda carries a spin function
/// s(lambda, .) on the sphere, side 1 reports s(lambda, a) and side 2
/// reports -s(lambda, b). Outcomes at equal directions are opposite for
/// every lambda by construction. Determinism is what makes counterfactual
/// (shared-sample) evaluation possible.
class SpinFunctionModel : public HiddenVariableModel {
public:
    /// +/-1, deterministic in (lambda, x).
    virtual int spin(const Lambda& lambda, const Direction& x) const = 0;

    double detect_prob_1(const Lambda& lambda, const Direction& a) const final;
    double detect_prob_2(const Lambda& lambda, const Direction& b) const final;

    /// Deterministic given lambda: (s(lambda,a), -s(lambda,b)).
    OutcomePair evaluate(const Lambda& lambda, const Direction& a,
                         const Direction& b) const;

    /// Consumes exactly the draws of sample_lambda; the outcomes are then
    /// fixed by evaluate.
    OutcomePair sample_pair(const Direction& a, const Direction& b,
                            RandomStream& rng) const final;
};

/// The canonical deterministic model: lambda uniform on the sphere,
/// s(lambda, x) = sign(lambda . x) with sign(0) = +1 so that the
/// measure-zero tie is still reproducible. Exact correlation
/// E(a,b) = -(1 - 2 theta / pi).
class BellSignModel final : public SpinFunctionModel {
public:
    Lambda sample_lambda(RandomStream& rng) const override;
    int spin(const Lambda& lambda, const Direction& x) const override;
    std::string name() const override { return "bell-sign"; }
};

/// Four-independent-variables model: both sides fire independently of the
/// settings and of each other, with fixed outcome means. E(a,b) =
/// mean1 * mean2 for every setting, so CHSH can never exceed 2.
class FactorizedModel final : public HiddenVariableModel {
public:
    /// Throws DomainError unless both means lie in [-1, 1].
    FactorizedModel(double mean1, double mean2);

    Lambda sample_lambda(RandomStream& rng) const override;
    double detect_prob_1(const Lambda& lambda, const Direction& a) const override;
    double detect_prob_2(const Lambda& lambda, const Direction& b) const override;
    std::string name() const override;

    double mean1() const { return mean1_; }
    double mean2() const { return mean2_; }

private:
    double mean1_;
    double mean2_;
};

/// Contextual quantum sampler: the outcome pair is drawn jointly from the
/// singlet four-outcome table at the angle between the per-pair microscopic
/// directions, P(++) = P(--) = sin^2(theta/2) / 2 and
/// P(+-) = P(-+) = cos^2(theta/2) / 2. There is no per-pair state that
/// fixes both outcomes locally; the joint draw is the whole point. Each
/// side's marginal is a fair +/-1 coin for every angle.
class ContextualSampler final : public PairOutcomeSampler {
public:
    OutcomePair sample_pair(const Direction& a, const Direction& b,
                            RandomStream& rng) const override;
    std::string name() const override { return "qm-contextual"; }
};

BellSignModel bell_sign_model();
FactorizedModel factorized_model(double mean1, double mean2);
ContextualSampler contextual_sampler();

/// Closed-form correlation for models that have one; currently only the
/// Bell sign model: -(1 - 2 theta_ab / pi). Throws UnsupportedModelError
/// for anything else.
double lhv_correlation_exact(const PairOutcomeSampler& model,
                             const Direction& a, const Direction& b);

/// Model factory for the names accepted in configs: "qm-contextual",
/// "bell-sign", "factorized(mean1,mean2)". Throws ConfigError on anything
/// else.
std::unique_ptr<PairOutcomeSampler> make_model(const std::string& name);

} // namespace spce
