#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qverify/catalog.hpp"

namespace qverify {

struct TrialReport {
    std::string instance;
    SubstEnv env;
    Rat window_lo, window_hi;
    std::string status; // pass, fail or error
    std::optional<Mismatch> mismatch;
    std::string error;
};

struct VerificationReport {
    std::string id;
    Rat cap;
    unsigned long seed = 0;
    std::vector<TrialReport> trials;
    long elapsed_ms = 0;

    bool passed() const;
    bool has_mismatch() const;
    bool has_error() const;
};

/// Coefficient values the sampler draws from.
const std::vector<Rat>& sample_coefficients();

/// One random env for inst satisfying its non-relational constraints;
/// relational ones are left to the caller.
SubstEnv sample_env(const Instance& inst, std::mt19937_64& rng);

/// Draws an admissible env, rejecting constraint failures and poles.
/// ExhaustedSampler after 100 attempts. On other errors *last holds the env
/// that raised.
std::pair<SubstEnv, CompareResult> sample_and_compare(const Instance& inst, const Rat& N, std::mt19937_64& rng,
                                                      SubstEnv* last = nullptr);

/// Deterministic generator for (seed, id, instance, trial).
std::mt19937_64 trial_rng(unsigned long seed, const std::string& id, std::size_t instance, int trial);

/// Checks every instance of the record at one env.
VerificationReport verify(const IdentityRecord& r, const SubstEnv& env, const Rat& N);

/// T seeded trials per instance. Precondition when T == 0.
VerificationReport verify_trials(const IdentityRecord& r, const Rat& N, int T, unsigned long seed);

/// verify_trials over many records on a pool of jobs threads; the result
/// follows the input order.
std::vector<VerificationReport> verify_many(const std::vector<const IdentityRecord*>& records, const Rat& N, int T,
                                            unsigned long seed, int jobs);

/// Report as JSON text. With reproducible the elapsed time is written as 0.
std::string report_json(const VerificationReport& r, bool reproducible = false);
std::string reports_json(const std::vector<VerificationReport>& rs, bool reproducible = false);
std::string report_text(const VerificationReport& r);

} // namespace qverify
