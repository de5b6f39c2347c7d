#pragma once

#include "spce/models.hpp"
#include "spce/quantum.hpp"
#include "spce/stats.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spce {

/// SharedSample evaluates all four CHSH setting pairs on one common draw of
/// hidden variables per run; FreshSample draws an independent sample per
/// setting pair. The distinction decides whether the per-run CHSH bound
/// S <= 2 is an algebraic identity or merely an expectation statement.
enum class SamplingMode { SharedSample, FreshSample };

/// Accepts "shared" and "fresh"; anything else throws ConfigError.
SamplingMode parse_sampling_mode(const std::string& name);
const char* sampling_mode_name(SamplingMode mode);

/// Everything that identifies an experiment. Two equal configs must
/// reproduce bit-identical results regardless of worker count.
struct RunConfig {
    std::string model;
    std::vector<SettingPair> settings;
    std::int64_t pairs_per_run = 10000;
    std::int64_t runs = 100;
    SamplingMode mode = SamplingMode::FreshSample;
    std::uint64_t seed = 0;

    /// Keep per-pair records in the report. Unset means automatic: record
    /// only when runs * pairs_per_run <= 64, so tiny diagnostic configs get
    /// full traces and production runs stay lean.
    std::optional<bool> record_pairs;

    /// Threads used for the independent runs. Purely an execution detail;
    /// results never depend on it.
    int workers = 1;

    bool effective_record_pairs() const;

    /// Structural checks only (counts positive, settings present, workers
    /// positive). Model-name and mode-compatibility checks happen where the
    /// model is instantiated. Throws ConfigError.
    void validate() const;
};

/// One emitted pair as seen by the coincidence logic. Outcome fields hold 0
/// when the corresponding side went undetected: an unrecorded outcome is
/// not a value.
struct PairRecord {
    Direction micro_a;
    Direction micro_b;
    int outcome_1 = 0;
    int outcome_2 = 0;
    bool detected_1 = false;
    bool detected_2 = false;
};

/// One run at one setting pair. r_n is the coincidence-conditioned
/// correlation (sum of outcome products over doubly-detected pairs divided
/// by their count); r_unconditional counts undetected pairs as 0 and
/// divides by total_pairs, which reproduces the eta_A*eta_B prefactor of
/// the smeared closed form.
struct RunResult {
    double r_n = 0.0;
    double stderr_r = 0.0;
    double r_unconditional = 0.0;
    double stderr_unconditional = 0.0;
    std::int64_t coincidence_count = 0;
    std::int64_t total_pairs = 0;
    std::vector<PairRecord> records;
};

/// The four analyzers of a CHSH experiment. Setting pairs are taken in the
/// canonical order (A,B), (A,B'), (A',B'), (A',B), matching
/// S = |E1 - E2| + |E3 + E4|.
struct ChshSettings {
    AnalyzerSpec a;
    AnalyzerSpec a_prime;
    AnalyzerSpec b;
    AnalyzerSpec b_prime;

    /// Sharp, fully efficient analyzers at the four orientations.
    static ChshSettings sharp(const Direction& a, const Direction& a_prime,
                              const Direction& b, const Direction& b_prime);

    std::array<SettingPair, 4> setting_pairs() const;
};

/// Recovers ChshSettings from a 4-element settings list in canonical
/// order, checking that the shared analyzers really are shared. Throws
/// ConfigError when the list has the wrong length or structure.
ChshSettings chsh_settings_from_pairs(const std::vector<SettingPair>& pairs);

struct ChshResult {
    /// Pooled per-setting correlations: across-run means when runs > 1,
    /// the single run's estimates otherwise.
    std::array<double, 4> e_hat{};
    std::array<double, 4> e_stderr{};

    /// S recomputed from e_hat, with the four stderrs combined in
    /// quadrature.
    double s = 0.0;
    double stderr_s = 0.0;

    /// Per-run detail, one entry per run in run order.
    std::vector<std::array<double, 4>> per_run_e;
    std::vector<double> per_run_s;

    /// Mean and stderr of per_run_s; equal to (s, stderr_s) when there is
    /// only one run.
    double mean_s = 0.0;
    double stderr_mean_s = 0.0;
};

/// Disagreement rates for one theta of the message-transmission test.
/// d_theta is the rate at which the side-1 bit differs from the negated
/// side-2 bit at analyzer angle theta; counts are kept so callers can build
/// binomial confidence intervals at any level. satisfied means
/// d(2 theta) <= 2 d(theta) + 4 sigma with
/// sigma = sqrt(stderr_2theta^2 + 4 stderr_theta^2): the inequality is
/// flagged violated only when the gap is statistically resolved.
struct HerbertResult {
    double theta = 0.0;
    double d_theta = 0.0;
    double d_2theta = 0.0;
    double stderr_theta = 0.0;
    double stderr_2theta = 0.0;
    std::int64_t disagree_theta = 0;
    std::int64_t disagree_2theta = 0;
    std::int64_t pairs = 0;
    bool satisfied = true;
};

struct SettingSummary {
    SettingPair setting;
    std::vector<RunResult> runs;
    /// Across-run mean of the conditional correlation; for a single run,
    /// that run's estimate with its within-run stderr.
    EstimateWithError pooled;
};

struct ExperimentReport {
    RunConfig config;
    std::string model_name;
    std::vector<SettingSummary> settings;
    /// Present when config.settings forms a CHSH quad.
    std::optional<ChshResult> chsh;
};

/// One run of n_pairs at one setting pair: draw micro directions from each
/// analyzer's smearing law, get outcomes from the model, apply independent
/// Bernoulli(eta) detection per side, and estimate the correlation from
/// coincident pairs. A side with eta >= 1 consumes no detection draw, so a
/// sharp eta = 1 run uses exactly the model's own randomness.
/// Throws DegenerateRunError (carrying the counts) when no pair is doubly
/// detected.
RunResult run_experiment(const PairOutcomeSampler& model, const SettingPair& setting,
                         std::int64_t n_pairs, RandomStream& rng,
                         bool keep_records = false);

/// Convenience overload resolving the model by name from the config.
RunResult run_experiment(const RunConfig& config, const SettingPair& setting,
                         RandomStream& rng);

/// S = |e1 - e2| + |e3 + e4|. Throws DomainError when any |e_i| > 1.
double chsh_statistic(double e1, double e2, double e3, double e4);
double chsh_statistic(const std::array<double, 4>& e);

/// Counterfactual CHSH: one common lambda sample per run, all four settings
/// evaluated on it. Needs a deterministic spin-function model (else
/// CounterfactualUnsupportedError) and sharp, fully efficient analyzers
/// (else UnsupportedConfigurationError): smearing or detection losses would
/// destroy the single-population structure the pointwise S <= 2 identity
/// rests on.
ChshResult shared_sample_chsh(const PairOutcomeSampler& model,
                              const ChshSettings& settings, std::int64_t n_pairs,
                              const RandomStream& rng);

/// Independent CHSH: every setting pair of every run gets its own sample.
/// Accepts any model.
ChshResult fresh_sample_chsh(const PairOutcomeSampler& model,
                             const ChshSettings& settings, std::int64_t n_pairs,
                             std::int64_t runs, const RandomStream& rng,
                             int workers = 1);

/// Mode-dispatched generalization behind the two entry points above. The
/// rng argument is never advanced: run j draws from rng.substream(j, ...),
/// so results depend only on the stream's key and the reduction happens in
/// run order whatever the worker count.
ChshResult chsh_experiment(const PairOutcomeSampler& model,
                           const ChshSettings& settings, std::int64_t n_pairs,
                           std::int64_t runs, SamplingMode mode,
                           const RandomStream& rng, int workers = 1);

/// Message-transmission disagreement scan: for each theta, estimate the
/// disagreement rates d(theta) and d(2 theta) from n_pairs each, at sharp
/// fully efficient analyzers (side 1 at +z, side 2 rotated in the x-z
/// plane). Requires a model with perfect anti-correlation at equal
/// settings: the contextual sampler or a spin-function model (else
/// UnsupportedModelError). Throws DomainError when a theta lies outside
/// [0, pi/2], since both theta and 2*theta must be valid angles.
std::vector<HerbertResult> herbert_scan(const PairOutcomeSampler& model,
                                        const std::vector<double>& thetas,
                                        std::int64_t n_pairs, const RandomStream& rng);

/// Runs the full experiment described by a config and returns everything
/// the reporting layer needs. Same config (seed included) gives a
/// bit-identical report for any worker count. SharedSample configs must
/// form a CHSH quad.
ExperimentReport reproduce(const RunConfig& config);

} // namespace spce
