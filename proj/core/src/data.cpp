#include "snsrec/data.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

namespace snsrec::data {

namespace {

bool parse_i64(const std::string& s, std::int64_t& out) {
  std::string t = s;
  // tolerate surrounding whitespace and CR
  while (!t.empty() && (t.back() == '\r' || t.back() == ' ' || t.back() == '\t'))
    t.pop_back();
  size_t start = t.find_first_not_of(" \t");
  if (start == std::string::npos) return false;
  const char* b = t.data() + start;
  const char* e = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && ptr == e;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

IngestResult ingest_events(const std::string& path, const IngestConfig&) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw MalformedError("empty file", 0);
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
    line.pop_back();
  {
    auto header = split_csv(line);
    if (header.size() != 4 || header[0] != "user_id" ||
        header[1] != "item_id" || header[2] != "category_id" ||
        header[3] != "timestamp")
      throw MalformedError(
          "expected header user_id,item_id,category_id,timestamp", 1);
  }

  IngestResult result;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv(line);
    std::int64_t u, i, c, t;
    if (fields.size() != 4 || !parse_i64(fields[0], u) ||
        !parse_i64(fields[1], i) || !parse_i64(fields[2], c) ||
        !parse_i64(fields[3], t) || t < 0) {
      ++result.dropped;
      continue;
    }
    Interaction ev;
    ev.user = static_cast<int>(u);
    ev.time = t;
    auto [it_i, _1] = result.item_map.try_emplace(static_cast<int>(i),
                                                  result.n_items);
    if (it_i->second == result.n_items) ++result.n_items;
    ev.item = it_i->second;
    auto [it_c, _2] = result.category_map.try_emplace(static_cast<int>(c),
                                                      result.n_categories);
    if (it_c->second == result.n_categories) ++result.n_categories;
    ev.category = it_c->second;
    result.events.push_back(ev);
  }
  return result;
}

std::vector<SetSequence> sessionize(const std::vector<Interaction>& events,
                                    const SessionizeConfig& cfg) {
  if (events.empty()) throw EmptyError("no events to sessionize");

  // user -> day -> (time, item) events, most recent kept on truncation
  std::map<int, std::map<std::int64_t, std::vector<std::pair<std::int64_t, int>>>>
      by_user;
  for (const auto& ev : events)
    by_user[ev.user][ev.time / 86400].emplace_back(ev.time, ev.item);

  std::vector<SetSequence> out;
  for (auto& [user, days] : by_user) {
    SetSequence seq;
    seq.user = user;
    for (auto& [day, evs] : days) {
      std::stable_sort(evs.begin(), evs.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      // dedup keeping the latest occurrence, then cap to most recent items
      std::vector<int> ordered;
      std::unordered_set<int> seen;
      for (auto it = evs.rbegin(); it != evs.rend(); ++it)
        if (seen.insert(it->second).second) ordered.push_back(it->second);
      if (static_cast<int>(ordered.size()) > cfg.max_set_size)
        ordered.resize(cfg.max_set_size);
      TemporalSet ts;
      ts.day = day;
      ts.items.assign(ordered.begin(), ordered.end());
      std::sort(ts.items.begin(), ts.items.end());
      seq.sets.push_back(std::move(ts));
    }
    if (static_cast<int>(seq.sets.size()) >= cfg.min_sets)
      out.push_back(std::move(seq));
  }
  return out;
}

SplitView split(const std::vector<SetSequence>& seqs) {
  SplitView view;
  for (const auto& seq : seqs) {
    if (seq.sets.size() < 4)
      throw TooShortError("user " + std::to_string(seq.user) +
                          " has fewer than 4 sets");
    SetSequence prefix;
    prefix.user = seq.user;
    prefix.sets.assign(seq.sets.begin(), seq.sets.end() - 2);
    view.train.push_back(std::move(prefix));
    view.val.push_back(seq.sets[seq.sets.size() - 2]);
    view.test.push_back(seq.sets.back());
    view.users.push_back(seq.user);
  }
  return view;
}

std::vector<TrainingInstance> build_instances(const SetSequence& seq, int a,
                                              int b, int z, int n_items,
                                              std::uint64_t rng_seed) {
  if (a < 1 || b < 1 || z < 0)
    throw InvalidSpecError("build_instances requires a>=1, b>=1, z>=0");

  std::vector<TrainingInstance> out;
  const int total = static_cast<int>(seq.sets.size());
  if (total < a + b) return out;

  std::mt19937_64 rng(rng_seed ^ (static_cast<std::uint64_t>(seq.user) * 0x9e3779b97f4a7c15ull));

  for (int start = 0; start + a + b <= total; ++start) {
    TrainingInstance inst;
    for (int i = 0; i < a; ++i) {
      const auto& s = seq.sets[start + i];
      inst.previous.push_back(s);
      for (int item : s.items) {
        inst.sequence_items.push_back(item);
        inst.sequence_setpos.push_back(i);
      }
    }
    for (int i = 0; i < b; ++i) inst.targets.push_back(seq.sets[start + a + i]);

    for (int zi = 0; zi < z; ++zi) {
      const auto& target = inst.targets[zi % b];
      std::unordered_set<int> excluded(target.items.begin(),
                                       target.items.end());
      if (static_cast<int>(target.items.size()) >
          n_items - static_cast<int>(excluded.size()))
        throw InvalidSpecError("catalog too small for negative sampling");
      TemporalSet neg;
      neg.day = target.day;
      std::unordered_set<int> chosen;
      std::uniform_int_distribution<int> pick(0, n_items - 1);
      while (static_cast<int>(neg.items.size()) <
             static_cast<int>(target.items.size())) {
        int cand = pick(rng);
        if (excluded.count(cand) || chosen.count(cand)) continue;
        chosen.insert(cand);
        neg.items.push_back(cand);
      }
      std::sort(neg.items.begin(), neg.items.end());
      inst.negatives.push_back(std::move(neg));
    }
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace snsrec::data
