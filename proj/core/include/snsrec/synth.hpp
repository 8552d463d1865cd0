#ifndef SNSREC_SYNTH_HPP
#define SNSREC_SYNTH_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "snsrec/data.hpp"

namespace snsrec::data {

// Synthetic corpus with planted structure: each user favors one category,
// and planted item pairs co-occur within a day with probability >= rho.
struct SynthSpec {
  int n_users = 60;
  int n_items = 50;
  int n_categories = 5;
  int n_days = 40;
  double active_prob = 0.8;    // chance a user produces a set on a day
  int min_set_items = 3;       // draws per active day, before pair boosts
  int max_set_items = 6;
  double favored_prob = 0.7;   // chance a draw comes from the favored category
  double rho = 0.0;            // planted pair co-occurrence boost
  std::vector<std::pair<int, int>> planted_pairs;
  // Zipf exponent for within-favored-category popularity; each user ranks the
  // favored category's items in a private random order and draws rank r with
  // probability proportional to (r+1)^-pop_alpha. 0 keeps draws uniform.
  double pop_alpha = 0.0;
  // When true, min/max_set_items bound the final set size and draws repeat
  // until it is reached; when false they count draws (pair boosts and
  // duplicate draws then make the realized size vary around that count).
  bool fill_to_size = false;
};

// Perfect matching over the item catalog where partners always come from
// different categories: shuffle the items, then greedily pair each remaining
// item with the first remaining item of another category. Items whose only
// remaining candidates share their category stay unmatched.
std::vector<std::pair<int, int>> cross_category_matching(const SynthSpec& spec,
                                                         std::uint64_t seed);

// Deterministic given rng_seed. Item i belongs to category
// i * n_categories / n_items (contiguous blocks).
std::vector<Interaction> gen_synthetic(const SynthSpec& spec,
                                       std::uint64_t rng_seed);

int synth_category_of(const SynthSpec& spec, int item);

}  // namespace snsrec::data

#endif
