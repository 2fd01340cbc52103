// Seeded generator of closed, well-polarised sequents for differential
// testing. A tunable share of the output is identity-shaped (a formula
// against itself), which is provable by the identity theorem and exercises
// every connective; the rest is unconstrained and lands on both sides of
// provability.
#pragma once

#include <random>

#include "linskol/syntax.hpp"

namespace linskol {

struct GenOptions {
  int max_connectives_per_side = 6;
  int max_quantifiers_per_side = 3;
  int max_bangs = 1;           // per sequent; keeps copy search small
  double identity_bias = 0.35; // share of identity-shaped instances
  int max_delta = 2;           // linear items in non-identity instances
};

// Closed sequent with empty unrestricted zone, no focus. Deterministic in
// (rng state, uid source state, options).
Sequent random_sequent(std::mt19937_64& rng, UidSource& uids,
                       const GenOptions& opts = {});

}  // namespace linskol
