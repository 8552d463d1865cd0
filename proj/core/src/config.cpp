#include "snsrec/config.hpp"

#include <fstream>
#include <stdexcept>

#include "snsrec/errors.hpp"

namespace snsrec::cfg {

namespace {
std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}
}  // namespace

KvConfig KvConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  KvConfig cfg;
  std::string line, section;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw MalformedError("config line without '='", line_no);
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw MalformedError("empty config key", line_no);
    cfg.values_[section.empty() ? key : section + "." + key] = value;
  }
  return cfg;
}

std::string KvConfig::get_str(const std::string& key,
                              const std::string& dflt) const {
  auto it = values_.find(key);
  return it == values_.end() ? dflt : it->second;
}

double KvConfig::get_double(const std::string& key, double dflt) const {
  auto it = values_.find(key);
  return it == values_.end() ? dflt : std::stod(it->second);
}

long KvConfig::get_long(const std::string& key, long dflt) const {
  auto it = values_.find(key);
  return it == values_.end() ? dflt : std::stol(it->second);
}

bool KvConfig::get_bool(const std::string& key, bool dflt) const {
  auto it = values_.find(key);
  if (it == values_.end()) return dflt;
  return it->second == "true" || it->second == "1" || it->second == "yes";
}

void KvConfig::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config " + path);
  // unsectioned keys first so they survive a round trip
  for (const auto& [key, value] : values_)
    if (key.find('.') == std::string::npos)
      out << key << " = " << value << '\n';
  std::string section;
  for (const auto& [key, value] : values_) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) continue;
    std::string sec = key.substr(0, dot);
    if (sec != section) {
      section = sec;
      out << '[' << section << "]\n";
    }
    out << key.substr(dot + 1) << " = " << value << '\n';
  }
}

}  // namespace snsrec::cfg
