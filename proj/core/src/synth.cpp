#include "snsrec/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace snsrec::data {

int synth_category_of(const SynthSpec& spec, int item) {
  return static_cast<int>(static_cast<long long>(item) * spec.n_categories /
                          spec.n_items);
}

std::vector<std::pair<int, int>> cross_category_matching(const SynthSpec& spec,
                                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> rest(spec.n_items);
  for (int i = 0; i < spec.n_items; ++i) rest[i] = i;
  std::shuffle(rest.begin(), rest.end(), rng);
  std::vector<std::pair<int, int>> pairs;
  while (!rest.empty()) {
    const int a = rest.front();
    rest.erase(rest.begin());
    for (size_t j = 0; j < rest.size(); ++j)
      if (synth_category_of(spec, rest[j]) != synth_category_of(spec, a)) {
        pairs.emplace_back(a, rest[j]);
        rest.erase(rest.begin() + j);
        break;
      }
  }
  return pairs;
}

std::vector<Interaction> gen_synthetic(const SynthSpec& spec,
                                       std::uint64_t rng_seed) {
  if (spec.n_users < 1 || spec.n_items < 2 || spec.n_categories < 1 ||
      spec.n_categories > spec.n_items || spec.n_days < 1 ||
      spec.min_set_items < 1 || spec.max_set_items < spec.min_set_items ||
      spec.rho < 0.0 || spec.rho > 1.0 || spec.active_prob <= 0.0 ||
      spec.favored_prob < 0.0 || spec.favored_prob > 1.0 ||
      spec.pop_alpha < 0.0)
    throw InvalidSpecError("invalid synthetic corpus spec");
  for (auto [i, j] : spec.planted_pairs)
    if (i < 0 || j < 0 || i >= spec.n_items || j >= spec.n_items || i == j)
      throw InvalidSpecError("planted pair out of range");

  // items grouped per category for mixture draws
  std::vector<std::vector<int>> by_cat(spec.n_categories);
  for (int i = 0; i < spec.n_items; ++i)
    by_cat[synth_category_of(spec, i)].push_back(i);

  std::vector<std::vector<int>> partners(spec.n_items);
  for (auto [i, j] : spec.planted_pairs) {
    partners[i].push_back(j);
    partners[j].push_back(i);
  }

  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> size_dist(spec.min_set_items,
                                               spec.max_set_items);
  std::uniform_int_distribution<int> any_item(0, spec.n_items - 1);
  std::uniform_int_distribution<int> any_cat(0, spec.n_categories - 1);

  std::vector<Interaction> out;
  for (int u = 0; u < spec.n_users; ++u) {
    const int favored = u % spec.n_categories;

    // user-private popularity ranking of the favored category, Zipf-weighted
    std::vector<int> order;
    std::vector<double> cum;
    double total = 0.0;
    if (spec.pop_alpha > 0.0) {
      order = by_cat[favored];
      std::shuffle(order.begin(), order.end(), rng);
      for (size_t r = 0; r < order.size(); ++r) {
        total += std::pow(1.0 / double(r + 1), spec.pop_alpha);
        cum.push_back(total);
      }
    }

    for (int day = 0; day < spec.n_days; ++day) {
      if (unit(rng) > spec.active_prob) continue;
      std::set<int> picked;
      const int n_draws = size_dist(rng);
      for (int d = 0; spec.fill_to_size
                          ? static_cast<int>(picked.size()) < n_draws
                          : d < n_draws;
           ++d) {
        int item;
        if (unit(rng) < spec.favored_prob && !by_cat[favored].empty()) {
          if (spec.pop_alpha > 0.0) {
            const double x = unit(rng) * total;
            const size_t r =
                std::lower_bound(cum.begin(), cum.end(), x) - cum.begin();
            item = order[std::min(r, order.size() - 1)];
          } else {
            std::uniform_int_distribution<int> in_cat(
                0, static_cast<int>(by_cat[favored].size()) - 1);
            item = by_cat[favored][in_cat(rng)];
          }
        } else {
          item = any_item(rng);
        }
        picked.insert(item);
        for (int partner : partners[item])
          if (unit(rng) < spec.rho) picked.insert(partner);
      }
      for (int item : picked) {
        Interaction ev;
        ev.user = u;
        ev.item = item;
        ev.category = synth_category_of(spec, item);
        ev.time = static_cast<std::int64_t>(day) * 86400 + 3600;
        out.push_back(ev);
      }
    }
  }
  return out;
}

}  // namespace snsrec::data
