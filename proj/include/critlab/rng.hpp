#pragma once

#include <cstdint>

namespace critlab {

// Counter-based random stream. Each stream is a splitmix64 sequence whose
// start state is a hash of (master_seed, stream_id), so any number of
// streams can be drawn independently of scheduling order. Ensembles assign
// stream_id = trajectory index, which makes results thread-count invariant.
class RandomStream {
  public:
    RandomStream(std::uint64_t master_seed, std::uint64_t stream_id);

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53 random bits.
    double next_double();

    // Standard normal via Box-Muller; the second variate is cached.
    double next_normal();

    // true with probability p.
    bool next_bernoulli(double p);

    // Exact Poisson(mean): sequential inversion for small means, Hormann's
    // PTRS transformed rejection for mean >= 10.
    std::int64_t next_poisson(double mean);

  private:
    std::uint64_t state_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

// Stateless splitmix64 finalizer; used for stream derivation and config
// hashing helpers.
std::uint64_t mix64(std::uint64_t z);

// log(k!) to ~1e-14 relative accuracy; exact table for small k, Stirling
// series above. Thread-safe (no errno/signgam traffic, unlike lgamma).
double log_factorial(std::int64_t k);

} // namespace critlab
