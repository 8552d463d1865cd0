#ifndef SNSREC_DATA_HPP
#define SNSREC_DATA_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "snsrec/errors.hpp"

namespace snsrec::data {

struct Interaction {
  int user = 0;
  int item = 0;
  int category = 0;
  std::int64_t time = 0;  // epoch seconds
};

// Items a user interacted with on one calendar day, duplicates removed.
struct TemporalSet {
  std::vector<int> items;
  std::int64_t day = 0;
};

struct SetSequence {
  int user = 0;
  std::vector<TemporalSet> sets;  // strictly increasing day order
};

// Ground set of one conditional SDPP instance: A previous sets, B target
// sets, Z negative sets (one per target, same size, disjoint from it).
struct TrainingInstance {
  std::vector<TemporalSet> previous;
  std::vector<TemporalSet> targets;
  std::vector<TemporalSet> negatives;
  std::vector<int> sequence_items;   // flattened items of previous sets
  std::vector<int> sequence_setpos;  // previous-set index per flattened item
};

struct IngestConfig {
  // nothing tunable at ingestion yet; re-indexing is always dense
};

struct IngestResult {
  std::vector<Interaction> events;
  std::map<int, int> item_map;      // raw id -> dense id
  std::map<int, int> category_map;  // raw id -> dense id
  int n_items = 0;
  int n_categories = 0;
  long dropped = 0;  // malformed rows skipped
};

struct SessionizeConfig {
  int min_sets = 4;
  int max_set_size = 50;
};

// Parses `user_id,item_id,category_id,timestamp` CSV (header required).
// Malformed rows are dropped and counted; ids are densely re-indexed.
IngestResult ingest_events(const std::string& path,
                           const IngestConfig& cfg = {});

// Groups events into per-user day sets; drops users with fewer than
// cfg.min_sets sets; truncates oversized sets to the most recent items.
std::vector<SetSequence> sessionize(const std::vector<Interaction>& events,
                                    const SessionizeConfig& cfg = {});

struct SplitView {
  std::vector<SetSequence> train;  // per-user prefix (all but last two sets)
  std::vector<TemporalSet> val;    // second-last set per user
  std::vector<TemporalSet> test;   // last set per user
  std::vector<int> users;          // parallel to the three vectors
};

SplitView split(const std::vector<SetSequence>& seqs);

// Sliding window (stride 1) over the sequence: every position with >= a
// prior sets and >= b subsequent sets yields one instance. Negatives are
// sampled uniformly from the catalog minus the paired target's items.
std::vector<TrainingInstance> build_instances(const SetSequence& seq, int a,
                                              int b, int z, int n_items,
                                              std::uint64_t rng_seed);

// Category lookup table: dense item id -> dense category id.
using CategoryMap = std::vector<int>;

}  // namespace snsrec::data

#endif
